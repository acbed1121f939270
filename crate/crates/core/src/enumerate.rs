//! Fincke–Pohst enumeration of lattice vectors of a fixed negative norm.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::int_vec_to_json;
use crate::lattice::Lattice;
use crate::matrix::{q_to_f64, ZMatrix};

/// Cooperative cancellation flag shared between a caller and a long
/// enumeration.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Debug)]
pub struct EnumOptions {
    /// Maximum number of search-tree nodes visited.
    pub budget: u64,
    /// Keep only the representative of each `±v` pair whose first nonzero
    /// coordinate is positive.
    pub collapse_antipodes: bool,
    pub cancel: Option<CancelToken>,
}

pub const DEFAULT_BUDGET: u64 = 50_000_000;

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { budget: DEFAULT_BUDGET, collapse_antipodes: false, cancel: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVectorSet {
    pub target_norm: i64,
    pub collapsed: bool,
    /// Sorted lexicographically.
    pub vectors: Vec<Vec<BigInt>>,
}

impl ShortVectorSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "target_norm": self.target_norm,
            "collapsed": self.collapsed,
            "count": self.vectors.len(),
            "vectors": self.vectors.iter().map(|v| int_vec_to_json(v)).collect::<Vec<_>>(),
        })
    }
}

pub fn short_vectors(l: &Lattice, t: i64) -> Result<ShortVectorSet> {
    short_vectors_with(l, t, &EnumOptions::default())
}

/// All `v` with `q(v) = t` in a negative definite lattice.
pub fn short_vectors_with(l: &Lattice, t: i64, opts: &EnumOptions) -> Result<ShortVectorSet> {
    if t >= 0 {
        return Err(Error::NonNegativeTarget(t));
    }
    let sig = l.signature();
    if sig.p != 0 || sig.r != 0 {
        return Err(Error::NotNegativeDefinite { p: sig.p, q: sig.q, r: sig.r });
    }
    let n = l.rank();
    let mut out = Vec::new();
    if n > 0 {
        let a = l.gram().scale(&BigInt::from(-1));
        let (u, reduced) = reduce_basis(&a);
        let target = BigInt::from(-t);
        let mut found = Vec::new();
        fincke_pohst(&reduced, &target, opts, &mut found)?;
        let ut = u.transpose();
        for y in found {
            let x = ut.mul_vec(&y);
            debug_assert_eq!(l.norm(&x), BigInt::from(t));
            out.push(x);
        }
    }
    if opts.collapse_antipodes {
        out.retain(|v| v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive()));
    }
    out.sort();
    Ok(ShortVectorSet { target_norm: t, collapsed: opts.collapse_antipodes, vectors: out })
}

/// Search-tree enumeration for `x^T A x = target` with `A` positive
/// definite. Floating-point bounds are widened by a relative slack; every
/// leaf is re-checked in exact integer arithmetic.
fn fincke_pohst(a: &ZMatrix, target: &BigInt, opts: &EnumOptions, out: &mut Vec<Vec<BigInt>>) -> Result<()> {
    let n = a.rows();
    let (mu, d) = ldl(a);
    let tf = target.to_f64().unwrap_or(f64::INFINITY);
    let slack = 1e-9 * (1.0 + tf);
    let ai64 = a.to_i64();

    let mut x = vec![0i64; n];
    let mut partial = vec![0f64; n + 1];
    let mut center = vec![0f64; n];
    let mut upper = vec![0i64; n];
    let mut nodes: u64 = 0;

    let bounds = |i: usize, x: &[i64], partial: &[f64], center: &mut [f64]| -> Option<(i64, i64)> {
        let c: f64 = -((i + 1)..n).map(|j| mu[i][j] * x[j] as f64).sum::<f64>();
        center[i] = c;
        let rem = tf - partial[i + 1] + slack;
        if rem < 0.0 {
            return None;
        }
        let r = (rem / d[i]).sqrt();
        let lo = (c - r).ceil() as i64;
        let hi = (c + r).floor() as i64;
        (lo <= hi).then_some((lo, hi))
    };

    // Depth-first over coordinates n-1, ..., 0.
    let mut i = n - 1;
    match bounds(i, &x, &partial, &mut center) {
        Some((lo, hi)) => {
            x[i] = lo;
            upper[i] = hi;
        }
        None => return Ok(()),
    }
    loop {
        nodes += 1;
        if nodes > opts.budget {
            return Err(Error::EnumerationBudgetExceeded { budget: opts.budget });
        }
        if nodes & 0xfff == 0 && opts.cancel.as_ref().is_some_and(|c| c.is_cancelled()) {
            return Err(Error::Cancelled);
        }
        if x[i] > upper[i] {
            if i == n - 1 {
                return Ok(());
            }
            i += 1;
            x[i] += 1;
            continue;
        }
        let diff = x[i] as f64 - center[i];
        partial[i] = partial[i + 1] + d[i] * diff * diff;
        if partial[i] > tf + slack {
            x[i] += 1;
            continue;
        }
        if i == 0 {
            if exact_norm(a, ai64.as_deref(), &x) == *target {
                out.push(x.iter().map(|&v| BigInt::from(v)).collect());
            }
            x[0] += 1;
            continue;
        }
        i -= 1;
        match bounds(i, &x, &partial, &mut center) {
            Some((lo, hi)) => {
                x[i] = lo;
                upper[i] = hi;
            }
            None => {
                x[i] = 1;
                upper[i] = 0;
            }
        }
    }
}

fn exact_norm(a: &ZMatrix, small: Option<&[i64]>, x: &[i64]) -> BigInt {
    let n = x.len();
    if let Some(s) = small {
        let mut acc: i128 = 0;
        let mut ok = true;
        'outer: for i in 0..n {
            for j in 0..n {
                let term = (s[i * n + j] as i128).checked_mul(x[i] as i128).and_then(|v| v.checked_mul(x[j] as i128));
                match term.and_then(|t| acc.checked_add(t)) {
                    Some(v) => acc = v,
                    None => {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        if ok {
            return BigInt::from(acc);
        }
    }
    let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
    let ax = a.mul_vec(&xb);
    xb.iter().zip(&ax).map(|(p, q)| p * q).sum()
}

/// `q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2`, computed exactly and
/// rounded once.
fn ldl(a: &ZMatrix) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = a.rows();
    let mut q = a.to_q();
    let mut mu = vec![vec![0f64; n]; n];
    let mut d = vec![0f64; n];
    for i in 0..n {
        let piv = q[(i, i)].clone();
        d[i] = q_to_f64(&piv);
        for j in (i + 1)..n {
            let f: BigRational = &q[(j, i)] / &piv;
            mu[i][j] = q_to_f64(&f);
            for k in (i + 1)..n {
                let v = &q[(j, k)] - &f * &q[(i, k)];
                q[(j, k)] = v;
            }
        }
    }
    (mu, d)
}

/// LLL reduction of a positive definite Gram matrix with a floating-point
/// Gram–Schmidt and exact integer bookkeeping. Returns `(U, U A U^T)`; any
/// unimodular `U` gives a correct enumeration, reduction only shrinks the tree.
fn reduce_basis(a: &ZMatrix) -> (ZMatrix, ZMatrix) {
    let n = a.rows();
    let id = ZMatrix::identity(n);
    let Some(mut g) = a.to_i64().map(|v| v.into_iter().map(|x| x as i128).collect::<Vec<i128>>()) else {
        return (id, a.clone());
    };
    let mut u: Vec<i128> = (0..n * n).map(|k| (k / n == k % n) as i128).collect();
    let limit: i128 = 1 << 60;

    let gs = |g: &[i128]| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0f64; n]; n];
        let mut b = vec![0f64; n];
        for i in 0..n {
            for j in 0..i {
                let mut s = g[i * n + j] as f64;
                for k in 0..j {
                    s -= mu[j][k] * mu[i][k] * b[k];
                }
                mu[i][j] = s / b[j];
            }
            let mut s = g[i * n + i] as f64;
            for k in 0..i {
                s -= mu[i][k] * mu[i][k] * b[k];
            }
            b[i] = s;
        }
        (mu, b)
    };

    // row_i -= c * row_j on both U and the Gram (as a congruence).
    let reduce = |g: &mut Vec<i128>, u: &mut Vec<i128>, i: usize, j: usize, c: i128| -> bool {
        for k in 0..n {
            let v = u[i * n + k] - c * u[j * n + k];
            if v.abs() > limit {
                return false;
            }
            u[i * n + k] = v;
        }
        for k in 0..n {
            g[i * n + k] -= c * g[j * n + k];
        }
        for k in 0..n {
            g[k * n + i] -= c * g[k * n + j];
        }
        g.iter().all(|v| v.abs() <= limit)
    };

    let mut k = 1;
    let mut steps = 0;
    while k < n && steps < 10_000 {
        steps += 1;
        let mut ok = true;
        for j in (0..k).rev() {
            let (mu, _) = gs(&g);
            let c = mu[k][j].round() as i128;
            if c != 0 && !reduce(&mut g, &mut u, k, j, c) {
                ok = false;
                break;
            }
        }
        if !ok {
            return (id, a.clone());
        }
        let (mu, b) = gs(&g);
        if b[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            for c in 0..n {
                u.swap(k * n + c, (k - 1) * n + c);
                g.swap(k * n + c, (k - 1) * n + c);
            }
            for r in 0..n {
                g.swap(r * n + k, r * n + k - 1);
            }
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    let um = ZMatrix::from_fn(n, n, |i, j| BigInt::from(u[i * n + j]));
    let reduced = um.mul(a).mul(&um.transpose());
    debug_assert_eq!(reduced.entries().iter().map(|x| x.to_i128().unwrap_or(i128::MAX)).collect::<Vec<_>>(), g);
    (um, reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::zi;

    #[test]
    fn rank_one() {
        let l = Lattice::rank_one(-2);
        let s = short_vectors(&l, -2).unwrap();
        assert_eq!(s.vectors, vec![vec![zi(-1)], vec![zi(1)]]);
    }

    #[test]
    fn e8_roots() {
        let s = short_vectors(&Lattice::e8(-1), -2).unwrap();
        assert_eq!(s.len(), 240);
        let opts = EnumOptions { collapse_antipodes: true, ..Default::default() };
        assert_eq!(short_vectors_with(&Lattice::e8(-1), -2, &opts).unwrap().len(), 120);
        assert!(short_vectors(&Lattice::e8(-2), -2).unwrap().is_empty());
    }

    #[test]
    fn rejects_indefinite_and_bad_targets() {
        assert!(matches!(short_vectors(&Lattice::u(), -2), Err(Error::NotNegativeDefinite { p: 1, q: 1, r: 0 })));
        assert_eq!(short_vectors(&Lattice::rank_one(-2), 2), Err(Error::NonNegativeTarget(2)));
    }

    #[test]
    fn budget_is_enforced() {
        let opts = EnumOptions { budget: 10, ..Default::default() };
        assert_eq!(
            short_vectors_with(&Lattice::e8(-1), -2, &opts),
            Err(Error::EnumerationBudgetExceeded { budget: 10 })
        );
    }

    #[test]
    fn cancellation() {
        let tok = CancelToken::new();
        tok.cancel();
        let big = Lattice::direct_sum_all(&[Lattice::e8(-1), Lattice::e8(-1), Lattice::e8(-1)]);
        let opts = EnumOptions { cancel: Some(tok), ..Default::default() };
        assert_eq!(short_vectors_with(&big, -6, &opts), Err(Error::Cancelled));
    }

    #[test]
    fn skewed_basis_still_exhaustive() {
        // <-2> + <-2> in the basis (1,0), (7,1).
        let l = Lattice::from_i64(&[vec![-2, -14], vec![-14, -100]]).unwrap();
        let s = short_vectors(&l, -2).unwrap();
        assert_eq!(s.len(), 4);
        for v in &s.vectors {
            assert_eq!(l.norm(v), zi(-2));
        }
    }
}
