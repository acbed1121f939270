//! Integer polynomials (coefficients low to high), cyclotomic polynomials and
//! characteristic polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::matrix::ZMatrix;

pub type ZPoly = Vec<BigInt>;

pub fn trim(p: &mut ZPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Exact division by a monic polynomial; `None` if the remainder is nonzero.
pub fn div_exact(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    if r.len() < b.len() {
        return r.is_empty().then(Vec::new);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    trim(&mut r);
    r.is_empty().then_some(q)
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> ZPoly {
    let mut p: ZPoly = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            p = div_exact(&p, &cyclotomic(d)).expect("cyclotomic divides x^n - 1");
        }
    }
    p
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

pub fn mobius(mut n: u64) -> i64 {
    let mut res = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

/// Characteristic polynomial `det(tI - A)` by the Faddeev–LeVerrier
/// recurrence; every division is exact over Z.
pub fn char_poly(a: &ZMatrix) -> ZPoly {
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = ZMatrix::zeros(n, n);
    let id = ZMatrix::identity(n);
    for k in 1..=n {
        let c_prev = coeffs[n - k + 1].clone();
        m = a.mul(&m).add(&id.scale(&c_prev));
        let am = a.mul(&m);
        let tr = am.trace();
        coeffs[n - k] = -(tr / BigInt::from(k as u64));
    }
    coeffs
}

/// Evaluate a matrix polynomial `p(A)`.
pub fn eval_matrix(p: &ZPoly, a: &ZMatrix) -> ZMatrix {
    let n = a.rows();
    let mut out = ZMatrix::zeros(n, n);
    for c in p.iter().rev() {
        out = out.mul(a).add(&ZMatrix::identity(n).scale(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::z_from_i64_rows;

    fn ints(v: &[i64]) -> ZPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic(2), ints(&[1, 1]));
        assert_eq!(cyclotomic(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(euler_phi(12), 4);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(5), -1);
        assert_eq!(mobius(1), 1);
    }

    #[test]
    fn char_poly_of_rotation() {
        let r = z_from_i64_rows(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(char_poly(&r), ints(&[1, 0, 1]));
        let m = z_from_i64_rows(&[vec![2, 1, 0], vec![0, 3, 0], vec![1, 0, 1]]);
        // det(tI - m) = (t-1)(t-2)(t-3) expanded by hand.
        assert_eq!(char_poly(&m), ints(&[-6, 11, -6, 1]));
        assert!(eval_matrix(&char_poly(&m), &m).is_zero());
    }

    #[test]
    fn division() {
        let p = mul(&cyclotomic(3), &cyclotomic(4));
        assert_eq!(div_exact(&p, &cyclotomic(4)), Some(cyclotomic(3)));
        assert_eq!(div_exact(&p, &cyclotomic(2)), None);
    }
}
