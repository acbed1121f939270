//! Positive definite 3-planes in `L (x) R` that are invariant under a finite
//! group.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::isotypic::decompose;
use crate::group::ActionGroup;
use crate::json::rat_matrix_to_json;
use crate::lattice::{Lattice, Signature};
use crate::matrix::{congruence_diagonalize, inertia, q_to_f64, QMatrix, ZMatrix};

/// How a plane was obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum PlanePath {
    /// Assembled from positive parts of rational isotypic components.
    Isotypic,
    /// Orbit-averaged majorant followed by a generalized eigenproblem.
    Numeric { iterations: usize, residual: f64 },
    /// Supplied by the caller.
    Given,
}

#[derive(Clone, Debug)]
pub struct PositiveThreePlane {
    lattice: Lattice,
    exact: Option<QMatrix>,
    float: Vec<Vec<f64>>,
    pub path: PlanePath,
}

#[derive(Clone, Debug)]
pub struct PlaneOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
    /// Candidate vectors tried when searching a component for a positive
    /// definite submodule.
    pub search_attempts: usize,
    /// Skip the exact path.
    pub force_numeric: bool,
}

impl Default for PlaneOptions {
    fn default() -> Self {
        PlaneOptions { tolerance: 1e-10, max_iterations: 10_000, seed: 0, search_attempts: 4000, force_numeric: false }
    }
}

/// Restriction of an isometry to a plane, in the plane's basis.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub exact: Option<QMatrix>,
    pub float: DMatrix<f64>,
}

impl Restriction {
    pub fn trace(&self) -> f64 {
        self.float.trace()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        match &self.exact {
            Some(m) => m.is_identity(),
            None => (&self.float - DMatrix::identity(3, 3)).amax() < tol,
        }
    }
}

fn gram_f64(l: &Lattice) -> DMatrix<f64> {
    let n = l.rank();
    DMatrix::from_fn(n, n, |i, j| q_to_f64(&BigRational::from_integer(l.gram()[(i, j)].clone())))
}

fn zmat_f64(m: &ZMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| q_to_f64(&BigRational::from_integer(m[(i, j)].clone())))
}

impl PositiveThreePlane {
    /// Exact plane from three rational rows; checks positive definiteness.
    pub fn from_rational(lattice: &Lattice, basis: QMatrix) -> Result<Self> {
        if basis.rows() != 3 || basis.cols() != lattice.rank() {
            return Err(Error::DimensionMismatch("plane basis must be 3 x rank".into()));
        }
        let g = basis.mul(&lattice.gram().to_q()).mul(&basis.transpose());
        if inertia(&g) != (3, 0, 0) {
            return Err(Error::Invalid("plane basis is not positive definite".into()));
        }
        let float = basis.to_f64();
        Ok(PositiveThreePlane { lattice: lattice.clone(), exact: Some(basis), float, path: PlanePath::Given })
    }

    pub fn from_float(lattice: &Lattice, basis: Vec<Vec<f64>>, path: PlanePath) -> Result<Self> {
        if basis.len() != 3 || basis.iter().any(|r| r.len() != lattice.rank()) {
            return Err(Error::DimensionMismatch("plane basis must be 3 x rank".into()));
        }
        let p = PositiveThreePlane { lattice: lattice.clone(), exact: None, float: basis, path };
        let gp = p.gram_f64();
        if SymmetricEigen::new(gp).eigenvalues.iter().any(|&x| x <= 0.0) {
            return Err(Error::Invalid("plane basis is not positive definite".into()));
        }
        Ok(p)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_basis(&self) -> Option<&QMatrix> {
        self.exact.as_ref()
    }

    pub fn float_basis(&self) -> &[Vec<f64>] {
        &self.float
    }

    fn basis_f64(&self) -> DMatrix<f64> {
        let n = self.lattice.rank();
        DMatrix::from_fn(3, n, |i, j| self.float[i][j])
    }

    /// Exact Gram matrix of the restricted form, if the plane is exact.
    pub fn gram_exact(&self) -> Option<QMatrix> {
        self.exact.as_ref().map(|b| b.mul(&self.lattice.gram().to_q()).mul(&b.transpose()))
    }

    pub fn gram_f64(&self) -> DMatrix<f64> {
        let b = self.basis_f64();
        &b * gram_f64(&self.lattice) * b.transpose()
    }

    /// Matrix `A` with `g B^T = B^T A`, i.e. columns are coordinates of the
    /// images of the basis vectors.
    pub fn restrict(&self, g: &ZMatrix) -> Restriction {
        let exact = self.exact.as_ref().and_then(|b| {
            let gq = self.lattice.gram().to_q();
            let bg = b.mul(&gq);
            let a = bg.mul(&b.transpose()).inverse()?.mul(&bg).mul(&g.to_q()).mul(&b.transpose());
            Some(a)
        });
        let float = match &exact {
            Some(a) => DMatrix::from_fn(3, 3, |i, j| q_to_f64(&a[(i, j)])),
            None => {
                let b = self.basis_f64();
                let bg = &b * gram_f64(&self.lattice);
                let inv = (&bg * b.transpose()).try_inverse().expect("positive definite plane Gram");
                inv * bg * zmat_f64(g) * b.transpose()
            }
        };
        Restriction { exact, float }
    }

    /// Largest relative distance of `g b_i` from the plane over generators.
    pub fn invariance_residual(&self, gens: &[ZMatrix]) -> f64 {
        let b = self.basis_f64();
        let gf = gram_f64(&self.lattice);
        let bg = &b * &gf;
        let inv = (&bg * b.transpose()).try_inverse().expect("positive definite plane Gram");
        let mut worst: f64 = 0.0;
        for g in gens {
            let img = zmat_f64(g) * b.transpose();
            let proj = b.transpose() * (&inv * &bg * &img);
            let diff = &img - proj;
            let scale = img.norm().max(1.0);
            worst = worst.max(diff.norm() / scale);
        }
        worst
    }

    /// Exact invariance check when possible, numeric otherwise.
    pub fn is_invariant(&self, gens: &[ZMatrix], tol: f64) -> bool {
        match &self.exact {
            Some(b) => gens.iter().all(|g| {
                let img = g.to_q().mul(&b.transpose()).transpose();
                (0..3).all(|r| b.solve_rows(img.row(r)).is_some())
            }),
            None => self.invariance_residual(gens) < tol,
        }
    }

    pub fn to_json(&self) -> Value {
        let path = match &self.path {
            PlanePath::Isotypic => json!({ "kind": "isotypic" }),
            PlanePath::Numeric { iterations, residual } => {
                json!({ "kind": "numeric", "iterations": iterations, "residual": residual })
            }
            PlanePath::Given => json!({ "kind": "given" }),
        };
        json!({
            "exact": self.is_exact(),
            "basis": match &self.exact {
                Some(b) => rat_matrix_to_json(b),
                None => json!(self.float),
            },
            "path": path,
        })
    }
}

/// A `G`-invariant positive definite 3-plane for a group acting on a
/// lattice of signature `(3, q)`.
pub fn find_invariant_positive_3plane(g: &ActionGroup, opts: &PlaneOptions) -> Result<PositiveThreePlane> {
    let l = g.lattice();
    let Signature { p, q, r } = l.signature();
    if p != 3 || r != 0 {
        return Err(Error::BadSignature { p, q, r });
    }
    if !opts.force_numeric {
        if let Some(plane) = exact_plane(g, opts)? {
            return Ok(plane);
        }
    }
    numeric_plane(g, opts)
}

fn exact_plane(g: &ActionGroup, opts: &PlaneOptions) -> Result<Option<PositiveThreePlane>> {
    let l = g.lattice();
    let dec = match decompose(g) {
        Ok(d) => d,
        Err(Error::OrderCapExceeded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let gq = l.gram().to_q();
    let elems: Vec<QMatrix> = g.generators().iter().map(|s| s.matrix().to_q()).collect();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for comp in &dec.components {
        let b = comp.basis.to_q();
        let gram = b.mul(&gq).mul(&b.transpose());
        let (pc, qc, _) = inertia(&gram);
        if pc == 0 {
            continue;
        }
        if qc == 0 {
            rows.extend(b.to_rows());
            continue;
        }
        let scalar = elems.iter().all(|s| {
            let img = s.mul(&b.transpose()).transpose();
            img == b || img == b.scale(&BigRational::from_integer(BigInt::from(-1)))
        });
        if scalar {
            let (t, d) = congruence_diagonalize(&gram);
            let tb = t.mul(&b);
            for (i, di) in d.iter().enumerate() {
                if di.is_positive() {
                    rows.push(tb.row(i).to_vec());
                }
            }
            continue;
        }
        match positive_submodules(g, &b, &gq, pc, opts.search_attempts, &mut rng) {
            Some(found) => rows.extend(found),
            None => return Ok(None),
        }
    }
    if rows.len() != 3 {
        return Ok(None);
    }
    let basis = QMatrix::from_rows(rows)?;
    let mut plane = PositiveThreePlane::from_rational(l, basis)?;
    plane.path = PlanePath::Isotypic;
    let gens: Vec<ZMatrix> = g.generators().iter().map(|s| s.matrix().clone()).collect();
    if !plane.is_invariant(&gens, 0.0) {
        return Ok(None);
    }
    Ok(Some(plane))
}

/// Search a component (rows `b`) for positive definite cyclic submodules
/// `Q[G] v` whose dimensions add up to `need`.
fn positive_submodules(
    g: &ActionGroup,
    b: &QMatrix,
    gq: &QMatrix,
    need: usize,
    attempts: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<BigRational>>> {
    let k = b.rows();
    let elems: Vec<QMatrix> = (0..g.order()).map(|i| g.element(i).to_q()).collect();
    let mut found: Vec<Vec<BigRational>> = Vec::new();
    let one = BigRational::from_integer(BigInt::from(1));
    let mut candidates: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..k {
        let mut v = vec![BigRational::zero(); k];
        v[i] = one.clone();
        candidates.push(v);
    }
    for i in 0..k {
        for j in (i + 1)..k {
            for s in [1i64, -1] {
                let mut v = vec![BigRational::zero(); k];
                v[i] = one.clone();
                v[j] = BigRational::from_integer(BigInt::from(s));
                candidates.push(v);
            }
        }
    }
    let mut tries = 0;
    let mut idx = 0;
    while found.len() < need && tries < attempts {
        tries += 1;
        let coeffs = if idx < candidates.len() {
            idx += 1;
            candidates[idx - 1].clone()
        } else {
            (0..k).map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)))).collect()
        };
        let v = b.transpose().mul_vec(&coeffs);
        // Project away from what is already found.
        let v = orthogonal_part(&v, &found, gq);
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        let orbit: Vec<Vec<BigRational>> = elems.iter().map(|m| m.mul_vec(&v)).collect();
        let span = QMatrix::from_rows(orbit).ok()?.row_space();
        if found.len() + span.rows() > need {
            continue;
        }
        let gram = span.mul(gq).mul(&span.transpose());
        if inertia(&gram) != (span.rows(), 0, 0) {
            continue;
        }
        found.extend(span.to_rows());
    }
    (found.len() == need).then_some(found)
}

/// Component of `v` orthogonal to the span of `found` (assumed nondegenerate).
fn orthogonal_part(v: &[BigRational], found: &[Vec<BigRational>], gq: &QMatrix) -> Vec<BigRational> {
    if found.is_empty() {
        return v.to_vec();
    }
    let f = QMatrix::from_rows(found.to_vec()).expect("rows");
    let fg = f.mul(gq);
    let gram = fg.mul(&f.transpose());
    let Some(inv) = gram.inverse() else { return v.to_vec() };
    let c = inv.mul_vec(&fg.mul_vec(v));
    let proj = f.transpose().mul_vec(&c);
    v.iter().zip(&proj).map(|(a, b)| a - b).collect()
}

/// Orbit-averaged majorant: `S = sum_g g^T S_0 g` is a `G`-invariant positive
/// definite form, and the positive eigenspace of `G v = lambda S v` is a
/// `G`-invariant positive 3-plane. Repeated from the new plane until the
/// invariance residual is below tolerance.
fn numeric_plane(g: &ActionGroup, opts: &PlaneOptions) -> Result<PositiveThreePlane> {
    let l = g.lattice();
    let n = l.rank();
    let gf = gram_f64(l);
    let elems: Vec<DMatrix<f64>> = (0..g.order()).map(|i| zmat_f64(&g.element(i))).collect();
    let gens: Vec<ZMatrix> = g.generators().iter().map(|s| s.matrix().clone()).collect();

    // Seed: positive eigenvectors of the Gram matrix itself.
    let eig = SymmetricEigen::new(gf.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).expect("finite"));
    let mut basis = DMatrix::from_fn(3, n, |i, j| eig.eigenvectors[(j, order[i])]);

    for it in 1..=opts.max_iterations.max(1) {
        let s0 = majorant(&basis, &gf);
        let mut s = DMatrix::zeros(n, n);
        for e in &elems {
            s += e.transpose() * &s0 * e;
        }
        s /= elems.len() as f64;
        let chol = s.clone().cholesky().ok_or(Error::NoInvariantPlaneFound)?;
        let lmat = chol.l();
        let linv = lmat.clone().try_inverse().ok_or(Error::NoInvariantPlaneFound)?;
        let c = &linv * &gf * linv.transpose();
        let c = (&c + c.transpose()) * 0.5;
        let eig = SymmetricEigen::new(c);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).expect("finite"));
        if eig.eigenvalues[idx[2]] <= 0.0 {
            return Err(Error::NoInvariantPlaneFound);
        }
        let vecs = linv.transpose() * DMatrix::from_fn(n, 3, |r, c| eig.eigenvectors[(r, idx[c])]);
        basis = vecs.transpose();
        let rows: Vec<Vec<f64>> = (0..3).map(|i| (0..n).map(|j| basis[(i, j)]).collect()).collect();
        let plane = PositiveThreePlane::from_float(l, rows, PlanePath::Numeric { iterations: it, residual: 0.0 })?;
        let residual = plane.invariance_residual(&gens);
        if residual < opts.tolerance {
            return Ok(PositiveThreePlane { path: PlanePath::Numeric { iterations: it, residual }, ..plane });
        }
    }
    Err(Error::NoInvariantPlaneFound)
}

/// `S_P(x, x) = (x_P, x_P) - (x_N, x_N)` for `x = x_P + x_N`, `N = P^perp`.
fn majorant(basis: &DMatrix<f64>, gf: &DMatrix<f64>) -> DMatrix<f64> {
    let bg = basis * gf;
    let inv = (&bg * basis.transpose()).try_inverse().expect("positive definite plane Gram");
    // Projection onto P: pi = B^T (B G B^T)^{-1} B G
    let pi = basis.transpose() * inv * &bg;
    let n = gf.nrows();
    let refl = pi * 2.0 - DMatrix::identity(n, n);
    let s = gf * refl;
    (&s + s.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::k3;
    use crate::group::close_group;

    #[test]
    fn trivial_group_gives_exact_plane() {
        let g = ActionGroup::trivial(&Lattice::k3());
        let p = find_invariant_positive_3plane(&g, &PlaneOptions::default()).unwrap();
        assert!(p.is_exact());
        assert_eq!(inertia(&p.gram_exact().unwrap()), (3, 0, 0));
    }

    #[test]
    fn iota_plane_splits_one_plus_two() {
        let g = close_group(&[k3::iota()], 10).unwrap();
        let p = find_invariant_positive_3plane(&g, &PlaneOptions::default()).unwrap();
        assert!(p.is_exact());
        let a = p.restrict(&k3::iota_matrix()).exact.unwrap();
        let mut tr = a.trace();
        tr -= BigRational::from_integer(BigInt::from(-1));
        assert!(tr.is_zero(), "trace of iota on P must be -1");
        assert_eq!(a.mul(&a), QMatrix::identity(3));
    }

    #[test]
    fn numeric_path_agrees_on_iota() {
        let g = close_group(&[k3::iota()], 10).unwrap();
        let opts = PlaneOptions { force_numeric: true, ..Default::default() };
        let p = find_invariant_positive_3plane(&g, &opts).unwrap();
        assert!(!p.is_exact());
        assert!(matches!(p.path, PlanePath::Numeric { .. }));
        assert!((p.restrict(&k3::iota_matrix()).trace() + 1.0).abs() < 1e-8);
    }

    #[test]
    fn wrong_signature() {
        let g = ActionGroup::trivial(&Lattice::enriques());
        assert!(matches!(
            find_invariant_positive_3plane(&g, &PlaneOptions::default()),
            Err(Error::BadSignature { p: 1, q: 9, r: 0 })
        ));
    }
}
