//! Dense exact matrices over the integers and the rationals.
//!
//! Integer work (Hermite and Smith normal forms, kernels, determinants) is
//! done on `BigInt`; anything that needs division goes through `BigRational`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type ZMatrix = Matrix<BigInt>;
pub type QMatrix = Matrix<BigRational>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.data[r * self.cols + c].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + PartialEq,
    for<'a> &'a T:
        std::ops::Add<&'a T, Output = T> + std::ops::Mul<&'a T, Output = T> + std::ops::Sub<&'a T, Output = T>,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix with `cols` columns and no rows yet.
    pub fn empty(cols: usize) -> Self {
        Matrix { rows: 0, cols, data: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[T]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let cell = &mut out.data[i * other.cols + j];
                    *cell = &*cell + &prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                if self[(r, c)] != self[(c, r)] {
                    return Some((r, c));
                }
            }
        }
        None
    }

    pub fn trace(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + &self[(i, i)];
        }
        acc
    }

    /// Block diagonal matrix `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out[(self.rows + r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        out
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::empty(self.cols);
        for &i in idx {
            out.push_row(self.row(i));
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }
}

pub fn zi(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn qi(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn z_from_i64_rows(rows: &[Vec<i64>]) -> ZMatrix {
    ZMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
        .expect("rectangular literal")
}

impl ZMatrix {
    pub fn to_q(&self) -> QMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    /// Entries as `i64` when every entry fits.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.data.iter().map(|x| x.to_i64()).collect()
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&a[(i, j)] * &a[(k, k)]) - &(&a[(i, k)] * &a[(k, j)]);
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Row-style Hermite normal form: echelon form with positive pivots and
    /// entries above each pivot reduced into `[0, pivot)`. Zero rows are
    /// dropped. Pivot rows are chosen by smallest absolute value, ties broken
    /// by smallest row index.
    pub fn hnf(&self) -> ZMatrix {
        let mut a = self.clone();
        let rank = hnf_in_place(&mut a);
        a.select_rows(&(0..rank).collect::<Vec<_>>())
    }

    /// Basis (as HNF rows) of the integer kernel `{x in Z^cols : self * x = 0}`.
    pub fn integer_kernel(&self) -> ZMatrix {
        let n = self.cols;
        let m = self.rows;
        let aug = self.transpose().hstack(&ZMatrix::identity(n));
        let h = aug.hnf();
        let mut out = ZMatrix::empty(n);
        for r in 0..h.rows() {
            if h.row(r)[..m].iter().all(|x| x.is_zero()) {
                out.push_row(&h.row(r)[m..]);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.hnf().rows()
    }

    /// Nontrivial and zero invariant factors of the Smith normal form, in
    /// divisibility order (units are included as 1).
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        smith_diagonal(self.clone())
    }

    /// gcd of all entries in row `r`.
    pub fn row_content(&self, r: usize) -> BigInt {
        self.row(r).iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }
}

/// In-place HNF; returns the rank. Rows `rank..` are zero afterwards.
pub fn hnf_in_place(a: &mut ZMatrix) -> usize {
    let (m, n) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            // smallest nonzero |a[i][c]| for i >= r
            let mut best: Option<usize> = None;
            for i in r..m {
                if a[(i, c)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) if a[(i, c)].abs() < a[(b, c)].abs() => best = Some(i),
                    _ => {}
                }
            }
            let Some(p) = best else { break };
            a.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = a[(i, c)].div_floor(&a[(r, c)]);
                row_axpy(a, i, r, &-q);
                if !a[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < m && !a[(r, c)].is_zero() {
            if a[(r, c)].is_negative() {
                for x in a.row_mut(r) {
                    *x = -x.clone();
                }
            }
            let piv = a[(r, c)].clone();
            for i in 0..r {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = a[(i, c)].div_floor(&piv);
                if !q.is_zero() {
                    row_axpy(a, i, r, &-q);
                }
            }
            r += 1;
        }
    }
    r
}

/// row[dst] += k * row[src]
fn row_axpy(a: &mut ZMatrix, dst: usize, src: usize, k: &BigInt) {
    let cols = a.cols();
    for c in 0..cols {
        if a[(src, c)].is_zero() {
            continue;
        }
        let v = &a[(src, c)] * k;
        a[(dst, c)] += v;
    }
}

fn col_axpy(a: &mut ZMatrix, dst: usize, src: usize, k: &BigInt) {
    for r in 0..a.rows() {
        if a[(r, src)].is_zero() {
            continue;
        }
        let v = &a[(r, src)] * k;
        a[(r, dst)] += v;
    }
}

fn swap_cols(a: &mut ZMatrix, x: usize, y: usize) {
    if x == y {
        return;
    }
    for r in 0..a.rows() {
        let t = a[(r, x)].clone();
        a[(r, x)] = a[(r, y)].clone();
        a[(r, y)] = t;
    }
}

fn smith_diagonal(mut a: ZMatrix) -> Vec<BigInt> {
    let (m, n) = (a.rows(), a.cols());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if a[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        swap_cols(&mut a, t, pj);
        let mut done = true;
        for i in t + 1..m {
            if !a[(i, t)].is_zero() {
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                row_axpy(&mut a, i, t, &-q);
                if !a[(i, t)].is_zero() {
                    done = false;
                }
            }
        }
        for j in t + 1..n {
            if !a[(t, j)].is_zero() {
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                col_axpy(&mut a, j, t, &-q);
                if !a[(t, j)].is_zero() {
                    done = false;
                }
            }
        }
        if !done {
            continue;
        }
        // divisibility condition on the remaining block
        let piv = a[(t, t)].clone();
        let mut bad_row = None;
        'outer: for i in t + 1..m {
            for j in t + 1..n {
                if !(&a[(i, j)] % &piv).is_zero() {
                    bad_row = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = bad_row {
            row_axpy(&mut a, t, i, &BigInt::one());
            continue;
        }
        diag.push(piv.abs());
        t += 1;
    }
    diag
}

impl QMatrix {
    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut a = self.clone();
        let (m, n) = (a.rows(), a.cols());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[(i, c)].is_zero()) else { continue };
            a.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            for x in a.row_mut(r) {
                *x = &*x * &inv;
            }
            for i in 0..m {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    for j in 0..n {
                        if a[(r, j)].is_zero() {
                            continue;
                        }
                        let v = &a[(r, j)] * &f;
                        a[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (rows) of the right kernel `{x : self * x = 0}`.
    pub fn kernel(&self) -> QMatrix {
        let (r, pivots) = self.rref();
        let n = self.cols();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut out = QMatrix::empty(n);
        for &f in &free {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(i, f)].clone();
            }
            out.push_row(&v);
        }
        out
    }

    /// Basis of the row space (rref rows).
    pub fn row_space(&self) -> QMatrix {
        let (r, p) = self.rref();
        r.select_rows(&(0..p.len()).collect::<Vec<_>>())
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows();
        let aug = self.hstack(&QMatrix::identity(n));
        let (r, p) = aug.rref();
        if p.len() < n || p[n - 1] != n - 1 {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Solve `x * self = v` for a row vector `x`, i.e. express `v` in terms of
    /// the rows of `self`. Returns `None` if `v` is not in the row space.
    pub fn solve_rows(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        // columns of self^T are the rows; solve self^T x = v
        let k = self.rows();
        let at = self.transpose();
        let aug = at.hstack(&QMatrix::from_fn(v.len(), 1, |i, _| v[i].clone()));
        let (r, pivots) = aug.rref();
        if pivots.contains(&k) {
            return None;
        }
        let mut x = vec![BigRational::zero(); k];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(i, k)].clone();
        }
        Some(x)
    }

    /// Integer matrix with each row scaled to a primitive integer vector.
    pub fn clear_row_denominators(&self) -> ZMatrix {
        let mut out = ZMatrix::empty(self.cols());
        for r in 0..self.rows() {
            out.push_row(&primitive_integer_row(self.row(r)));
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|x| x.is_integer())
    }

    pub fn to_z(&self) -> Option<ZMatrix> {
        if !self.is_integral() {
            return None;
        }
        Some(self.map(|x| x.to_integer()))
    }

    pub fn det(&self) -> BigRational {
        assert!(self.is_square());
        let mut a = self.clone();
        let n = a.rows();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let f = &a[(i, c)] / &piv;
                for j in c..n {
                    let v = &a[(c, j)] * &f;
                    a[(i, j)] -= v;
                }
            }
        }
        det
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows()).map(|r| self.row(r).iter().map(q_to_f64).collect()).collect()
    }
}

pub fn q_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // very large numerators: scale down
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Scale a rational vector to the primitive integer vector with the same
/// direction (first nonzero entry sign preserved).
pub fn primitive_integer_row(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Congruence diagonalization of a symmetric rational matrix: returns `(t, d)`
/// with `t * a * t^T = diag(d)`. Zero diagonal blocks are handled by the
/// `row_i += row_j` trick so that no pivot is ever lost.
pub fn congruence_diagonalize(a: &QMatrix) -> (QMatrix, Vec<BigRational>) {
    assert!(a.is_square());
    let n = a.rows();
    let mut a = a.clone();
    let mut t = QMatrix::identity(n);
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a[(i, i)].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                let mut pair = None;
                'search: for i in k..n {
                    for j in i + 1..n {
                        if !a[(i, j)].is_zero() {
                            pair = Some((i, j));
                            break 'search;
                        }
                    }
                }
                let Some((i, j)) = pair else { break };
                // row_i += row_j and col_i += col_j
                sym_add(&mut a, &mut t, i, j, &BigRational::one());
                i
            }
        };
        sym_swap(&mut a, &mut t, k, pivot);
        let piv = a[(k, k)].clone();
        for r in k + 1..n {
            if a[(r, k)].is_zero() {
                continue;
            }
            let f = -(&a[(r, k)] / &piv);
            sym_add(&mut a, &mut t, r, k, &f);
        }
    }
    let d = (0..n).map(|i| a[(i, i)].clone()).collect();
    (t, d)
}

fn sym_swap(a: &mut QMatrix, t: &mut QMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap_rows(i, j);
    let n = a.cols();
    for r in 0..n {
        let x = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = x;
    }
    t.swap_rows(i, j);
}

/// row_i += f*row_j, col_i += f*col_j (congruence), tracked in `t`.
fn sym_add(a: &mut QMatrix, t: &mut QMatrix, i: usize, j: usize, f: &BigRational) {
    let n = a.cols();
    for c in 0..n {
        let v = &a[(j, c)] * f;
        a[(i, c)] += v;
    }
    for r in 0..n {
        let v = &a[(r, j)] * f;
        a[(r, i)] += v;
    }
    for c in 0..t.cols() {
        let v = &t[(j, c)] * f;
        t[(i, c)] += v;
    }
}

/// Exact (positive, negative, zero) inertia of a symmetric rational matrix.
pub fn inertia(a: &QMatrix) -> (usize, usize, usize) {
    let (_, d) = congruence_diagonalize(a);
    let p = d.iter().filter(|x| x.is_positive()).count();
    let q = d.iter().filter(|x| x.is_negative()).count();
    (p, q, d.len() - p - q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_determinant() {
        let m = z_from_i64_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(m.det(), zi(4));
        let u = z_from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(u.det(), zi(-1));
        let sing = z_from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(sing.det(), zi(0));
    }

    #[test]
    fn hnf_is_canonical_echelon() {
        let m = z_from_i64_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let h = m.hnf();
        assert_eq!(h, z_from_i64_rows(&[vec![2, 4, 4], vec![0, 6, 0], vec![0, 0, 12]]));
    }

    #[test]
    fn integer_kernel_of_row() {
        let m = z_from_i64_rows(&[vec![1, 1]]);
        let k = m.integer_kernel();
        assert_eq!(k, z_from_i64_rows(&[vec![1, -1]]));
        let m = z_from_i64_rows(&[vec![2, 4, 6]]);
        let k = m.integer_kernel();
        assert_eq!(k.rows(), 2);
        for r in 0..k.rows() {
            assert!(m.mul_vec(k.row(r)).iter().all(|x| x.is_zero()));
        }
        // primitive: the kernel lattice has index 1 in its saturation
        assert_eq!(k.smith_invariants(), vec![zi(1), zi(1)]);
    }

    #[test]
    fn smith_of_u2() {
        let m = z_from_i64_rows(&[vec![0, 2], vec![2, 0]]);
        assert_eq!(m.smith_invariants(), vec![zi(2), zi(2)]);
        let m = z_from_i64_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(m.smith_invariants(), vec![zi(2), zi(4)]);
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        let u = z_from_i64_rows(&[vec![0, 1], vec![1, 0]]).to_q();
        assert_eq!(inertia(&u), (1, 1, 0));
        let z = QMatrix::zeros(3, 3);
        assert_eq!(inertia(&z), (0, 0, 3));
        let m = z_from_i64_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]).to_q();
        assert_eq!(inertia(&m), (1, 1, 1));
    }

    #[test]
    fn congruence_is_exact() {
        let a = z_from_i64_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![2, 3, 0]]).to_q();
        let (t, d) = congruence_diagonalize(&a);
        let prod = t.mul(&a).mul(&t.transpose());
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { d[i].clone() } else { qi(0) };
                assert_eq!(prod[(i, j)], expect);
            }
        }
    }
}
