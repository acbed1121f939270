//! Weight-one eigenspaces, Hermitian signatures, period conditions and the
//! linear algebra of twistor lines in a positive 3-plane.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cyclo::{Cyc, CycloField};
use crate::error::{Error, Result};
use crate::group::Isometry;
use crate::json::{int_matrix_to_json, rat_to_json};
use crate::lattice::Lattice;
use crate::matrix::{inertia, primitive_integer_row, q_to_f64, QMatrix, ZMatrix};
use crate::realization::PositiveThreePlane;

/// Vector with entries in a cyclotomic field.
pub type CycVector = Vec<Cyc>;

fn lift_vec(f: &CycloField, v: &[BigRational]) -> CycVector {
    v.iter().map(|x| f.rational(x.clone())).collect()
}

fn embed_vec(f: &CycloField, v: &[Cyc]) -> CycVector {
    v.iter().map(|x| f.embed(x)).collect()
}

/// `x^T G y` over the field of `x`.
fn bilinear(gram: &ZMatrix, x: &[Cyc], y: &[Cyc]) -> Cyc {
    let f = x[0].field();
    let mut acc = f.zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let mut row = f.zero();
        for (j, yj) in y.iter().enumerate() {
            let gij = &gram[(i, j)];
            if !gij.is_zero() && !yj.is_zero() {
                row = row.add(&yj.scale(&BigRational::from_integer(gij.clone())));
            }
        }
        acc = acc.add(&xi.mul(&row));
    }
    acc
}

fn conj_vec(v: &[Cyc]) -> CycVector {
    v.iter().map(Cyc::conj).collect()
}

fn apply(m: &ZMatrix, v: &[Cyc]) -> CycVector {
    let f = v[0].field();
    (0..m.rows())
        .map(|i| {
            let mut acc = f.zero();
            for (j, vj) in v.iter().enumerate() {
                let mij = &m[(i, j)];
                if !mij.is_zero() && !vj.is_zero() {
                    acc = acc.add(&vj.scale(&BigRational::from_integer(mij.clone())));
                }
            }
            acc
        })
        .collect()
}

/// Kernel of a matrix over a cyclotomic field, by reduced row echelon form.
fn cyc_kernel(f: &CycloField, mut a: Vec<CycVector>, cols: usize) -> Vec<CycVector> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        a[r] = a[r].iter().map(|x| x.mul(&inv)).collect();
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let k = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = x.sub(&k.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = a[ri][fc].neg();
            }
            v
        })
        .collect()
}

/// Signature `(p, q)` of a Hermitian matrix by LDL* with exact pivots.
/// The flag is false when some pivot is an irrational real number whose sign
/// was read numerically.
pub fn hermitian_signature(h: &[CycVector]) -> ((usize, usize), bool) {
    let k = h.len();
    if k == 0 {
        return ((0, 0), true);
    }
    let f = h[0][0].field();
    let mut a: Vec<CycVector> = h.to_vec();
    let mut active: Vec<usize> = (0..k).collect();
    let (mut p, mut q) = (0, 0);
    let mut exact = true;
    let zeta = f.zeta_pow(1);
    while !active.is_empty() {
        let piv = match active.iter().copied().find(|&i| !a[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                let Some((i, j)) = pair else { break };
                // row_i += c row_j, col_i += conj(c) col_j; new a_ii = 2 Re(c a_ji).
                let c = [f.one(), zeta.clone()]
                    .into_iter()
                    .find(|c| {
                        let t = c.mul(&a[j][i]);
                        !t.add(&t.conj()).is_zero()
                    })
                    .expect("1 and zeta are independent over the reals");
                let rj = a[j].clone();
                for (x, y) in a[i].iter_mut().zip(&rj) {
                    *x = x.add(&c.mul(y));
                }
                let cc = c.conj();
                for row in a.iter_mut() {
                    let add = cc.mul(&row[j]);
                    row[i] = row[i].add(&add);
                }
                i
            }
        };
        let d = a[piv][piv].clone();
        let (s, ex) = d.real_sign();
        exact &= ex;
        match s {
            1 => p += 1,
            -1 => q += 1,
            _ => {}
        }
        let dinv = d.inv().expect("nonzero pivot");
        active.retain(|&i| i != piv);
        let prow = a[piv].clone();
        for &r in &active {
            let m = a[r][piv].mul(&dinv);
            if m.is_zero() {
                continue;
            }
            for &c in &active {
                let t = m.mul(&prow[c]);
                a[r][c] = a[r][c].sub(&t);
            }
        }
        for &r in &active {
            a[r][piv] = f.zero();
            a[piv][r] = f.zero();
        }
    }
    ((p, q), exact)
}

/// The `zeta_d`-eigenspace of an isometry of order `d`.
#[derive(Clone, Debug)]
pub struct WeightOneSpace {
    pub d: usize,
    lattice: Lattice,
    generator: ZMatrix,
    pub basis: Vec<CycVector>,
    pub herm_signature: (usize, usize),
    /// False when a Hermitian pivot had an irrational sign.
    pub signature_exact: bool,
}

impl WeightOneSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> CycloField {
        CycloField::new(self.d as u64)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn generator(&self) -> &ZMatrix {
        &self.generator
    }

    /// Matrix of `(v_i, conj(v_j))`.
    pub fn hermitian_gram(&self) -> Vec<CycVector> {
        let g = self.lattice.gram();
        let conj: Vec<CycVector> = self.basis.iter().map(|v| conj_vec(v)).collect();
        self.basis.iter().map(|v| conj.iter().map(|w| bilinear(g, v, w)).collect()).collect()
    }

    /// Matrix of `(v_i, v_j)`.
    pub fn bilinear_gram(&self) -> Vec<CycVector> {
        let g = self.lattice.gram();
        self.basis.iter().map(|v| self.basis.iter().map(|w| bilinear(g, v, w)).collect()).collect()
    }

    pub fn is_totally_isotropic(&self) -> bool {
        self.bilinear_gram().iter().flatten().all(Cyc::is_zero)
    }

    /// `g v = zeta_d v` for every basis vector.
    pub fn eigen_condition_holds(&self) -> bool {
        let zeta = self.field().zeta_pow(1);
        self.basis.iter().all(|v| apply(&self.generator, v) == v.iter().map(|x| x.mul(&zeta)).collect::<Vec<_>>())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "dim": self.dim(),
            "generator": int_matrix_to_json(&self.generator),
            "herm_signature": [self.herm_signature.0, self.herm_signature.1],
            "signature_exact": self.signature_exact,
            "basis": self.basis.iter().map(|v| v.iter().map(Cyc::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// `ker(g - zeta_d I)` over `Q(zeta_d)` and the Hermitian signature of
/// `(v, conj(w))` on it.
pub fn weight_one_space(g: &Isometry, cap: usize) -> Result<WeightOneSpace> {
    let d = g.order(cap)?;
    if d < 2 {
        return Err(Error::IdentityInput);
    }
    let f = CycloField::new(d as u64);
    let zeta = f.zeta_pow(1);
    let m = g.matrix();
    let n = m.rows();
    let rows: Vec<CycVector> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = f.rational(BigRational::from_integer(m[(i, j)].clone()));
                    if i == j {
                        e.sub(&zeta)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let basis = cyc_kernel(&f, rows, n);
    let mut w = WeightOneSpace {
        d,
        lattice: g.lattice().clone(),
        generator: m.clone(),
        basis,
        herm_signature: (0, 0),
        signature_exact: true,
    };
    let (sig, exact) = hermitian_signature(&w.hermitian_gram());
    w.herm_signature = sig;
    w.signature_exact = exact;
    Ok(w)
}

/// A vector of `L (x) C` with cyclotomic coordinates, with its two pairings.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodVector {
    pub coords: CycVector,
    /// `(w, w)`.
    pub selfpair: Cyc,
    /// `(w, conj(w))`.
    pub hermpair: Cyc,
}

impl PeriodVector {
    pub fn new(lattice: &Lattice, coords: CycVector) -> Result<Self> {
        if coords.len() != lattice.rank() || coords.is_empty() {
            return Err(Error::DimensionMismatch("period vector length must equal the lattice rank".into()));
        }
        let f = coords[0].field();
        if coords.iter().any(|c| c.conductor() != f.conductor()) {
            return Err(Error::Invalid("period vector entries must lie in one field".into()));
        }
        let selfpair = bilinear(lattice.gram(), &coords, &coords);
        let hermpair = bilinear(lattice.gram(), &coords, &conj_vec(&coords));
        Ok(PeriodVector { coords, selfpair, hermpair })
    }

    /// `x + i y` with rational `x, y`.
    pub fn gaussian(lattice: &Lattice, re: &[BigRational], im: &[BigRational]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch("real and imaginary parts differ in length".into()));
        }
        let f = CycloField::new(4);
        let i = f.zeta_pow(1);
        let coords = re.iter().zip(im).map(|(a, b)| f.rational(a.clone()).add(&i.scale(b))).collect();
        Self::new(lattice, coords)
    }

    pub fn conductor(&self) -> u64 {
        self.coords[0].conductor()
    }

    /// Stored pairings agree with the ones recomputed from the coordinates.
    pub fn is_consistent(&self, lattice: &Lattice) -> bool {
        PeriodVector::new(lattice, self.coords.clone()).is_ok_and(|p| p == *self)
    }

    pub fn to_json(&self) -> Value {
        if self.conductor() <= 4 && 4 % self.conductor() == 0 {
            let parts: Vec<(BigRational, BigRational)> =
                self.coords.iter().map(|c| c.gaussian_parts().expect("conductor divides 4")).collect();
            json!({
                "re": parts.iter().map(|p| rat_to_json(&p.0)).collect::<Vec<_>>(),
                "im": parts.iter().map(|p| rat_to_json(&p.1)).collect::<Vec<_>>(),
            })
        } else {
            json!({
                "conductor": self.conductor(),
                "coeffs": self.coords.iter().map(|c| c.coeffs().iter().map(rat_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })
        }
    }
}

/// `w` lies in the weight-one space, `(w, w) = 0` when `d = 2`, and
/// `(w, conj(w)) > 0`.
pub fn period_membership(omega: &PeriodVector, w: &WeightOneSpace) -> bool {
    if omega.coords.len() != w.lattice.rank() {
        return false;
    }
    let m = (omega.conductor() as usize).lcm(&w.d) as u64;
    let f = CycloField::new(m);
    let v = embed_vec(&f, &omega.coords);
    if v.iter().all(Cyc::is_zero) {
        return false;
    }
    let zeta = f.embed(&w.field().zeta_pow(1));
    if apply(&w.generator, &v) != v.iter().map(|x| x.mul(&zeta)).collect::<Vec<_>>() {
        return false;
    }
    if w.d == 2 && !omega.selfpair.is_zero() {
        return false;
    }
    omega.hermpair.real_sign().0 > 0
}

/// The plane `kappa^perp` inside `P` with an oriented orthogonal basis
/// `(x, y)`, and the period line spanned by `x + i t y`, `t^2 = q(x)/q(y)`.
#[derive(Clone, Debug)]
pub struct TwistorData {
    lattice: Lattice,
    pub kappa: Vec<BigRational>,
    pub x: Vec<BigRational>,
    pub y: Vec<BigRational>,
    pub t_squared: BigRational,
    pub orientation: i32,
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

impl TwistorData {
    /// `t` when it is rational.
    pub fn t(&self) -> Option<BigRational> {
        rational_sqrt(&self.t_squared)
    }

    /// `(w, w) = 0` and `(w, conj(w)) > 0` for `w = x + i t y`, checked
    /// exactly through `t^2`.
    pub fn satisfies_period_conditions(&self) -> bool {
        let l = &self.lattice;
        let qx = l.pair_q(&self.x, &self.x);
        let qy = l.pair_q(&self.y, &self.y);
        let xy = l.pair_q(&self.x, &self.y);
        xy.is_zero() && qx == &self.t_squared * &qy && (qx + &self.t_squared * qy).is_positive()
    }

    /// `x + i t y` as an exact period vector, available when `t` is rational.
    pub fn period_vector(&self) -> Option<PeriodVector> {
        let t = self.t()?;
        let im: Vec<BigRational> = self.y.iter().map(|v| v * &t).collect();
        PeriodVector::gaussian(&self.lattice, &self.x, &im).ok()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kappa": self.kappa.iter().map(rat_to_json).collect::<Vec<_>>(),
            "x": self.x.iter().map(rat_to_json).collect::<Vec<_>>(),
            "y": self.y.iter().map(rat_to_json).collect::<Vec<_>>(),
            "t_squared": rat_to_json(&self.t_squared),
            "orientation": self.orientation,
            "omega": self.period_vector().map(|p| p.to_json()),
        })
    }
}

/// Twistor data of an exact plane at a unit class `kappa`; `orientation` is
/// the required sign of `det(kappa, x, y)` in the coordinates of the plane
/// basis.
pub fn twistor_data(p: &PositiveThreePlane, kappa: &[BigRational], orientation: i32) -> Result<TwistorData> {
    let b = p.exact_basis().ok_or_else(|| Error::Invalid("twistor data needs an exactly represented plane".into()))?;
    let l = p.lattice();
    if kappa.len() != l.rank() {
        return Err(Error::DimensionMismatch("kappa length must equal the lattice rank".into()));
    }
    let ck = b.solve_rows(kappa).ok_or(Error::NotInPlane)?;
    let qk = l.pair_q(kappa, kappa);
    if !qk.is_one() {
        return Err(Error::NotUnitNorm(qk.to_string()));
    }
    let gp = p.gram_exact().expect("exact plane");
    let row = QMatrix::from_rows(vec![gp.mul_vec(&ck)])?;
    let perp = row.kernel();
    let to_amb = |c: &[BigRational]| b.transpose().mul_vec(c);
    let w1 = perp.row(0).to_vec();
    let w2 = perp.row(1).to_vec();
    let pq = |u: &[BigRational], v: &[BigRational]| {
        u.iter().zip(gp.mul_vec(v)).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    };
    let coef = pq(&w2, &w1) / pq(&w1, &w1);
    let mut cy: Vec<BigRational> = w2.iter().zip(&w1).map(|(a, b)| a - &coef * b).collect();
    let det = QMatrix::from_rows(vec![ck.clone(), w1.clone(), cy.clone()])?.det();
    let want = if orientation < 0 { -1 } else { 1 };
    if (det.is_positive() && want < 0) || (det.is_negative() && want > 0) {
        cy = cy.iter().map(|v| -v).collect();
    }
    // Clear denominators for readability.
    let x = primitive_integer_row(&to_amb(&w1)).into_iter().map(BigRational::from_integer).collect::<Vec<_>>();
    let y = primitive_integer_row(&to_amb(&cy)).into_iter().map(BigRational::from_integer).collect::<Vec<_>>();
    let t_squared = l.pair_q(&x, &x) / l.pair_q(&y, &y);
    Ok(TwistorData { lattice: l.clone(), kappa: kappa.to_vec(), x, y, t_squared, orientation: want })
}

/// Fixed line of a nontrivial rotation and its two unit points.
#[derive(Clone, Debug)]
pub struct InvariantLine {
    /// Primitive integral direction.
    pub direction: Vec<BigRational>,
    /// `q(direction)`; the unit points are `±direction / sqrt(norm)`.
    pub norm: BigRational,
    pub unit_points: [Vec<f64>; 2],
}

impl InvariantLine {
    fn from_direction(dir: Vec<BigRational>, form: &QMatrix) -> Result<Self> {
        let dir: Vec<BigRational> = primitive_integer_row(&dir).into_iter().map(BigRational::from_integer).collect();
        let norm = dir.iter().zip(form.mul_vec(&dir)).fold(BigRational::zero(), |acc, (a, b)| acc + a * b);
        if !norm.is_positive() {
            return Err(Error::Invalid("fixed line is not positive".into()));
        }
        let s = q_to_f64(&norm).sqrt();
        let plus: Vec<f64> = dir.iter().map(|x| q_to_f64(x) / s).collect();
        let minus = plus.iter().map(|x| -x).collect();
        Ok(InvariantLine { direction: dir, norm, unit_points: [plus, minus] })
    }

    pub fn is_fixed_by(&self, rho: &QMatrix) -> bool {
        rho.mul_vec(&self.direction) == self.direction
    }

    pub fn to_json(&self) -> Value {
        json!({
            "direction": self.direction.iter().map(rat_to_json).collect::<Vec<_>>(),
            "norm": rat_to_json(&self.norm),
            "unit_points": self.unit_points,
        })
    }
}

fn is_special_orthogonal(rho: &QMatrix, form: &QMatrix) -> bool {
    rho.rows() == 3
        && rho.cols() == 3
        && form.rows() == 3
        && rho.transpose().mul(form).mul(rho) == *form
        && rho.det().is_one()
}

/// `ker(rho - I)` for `rho` in `SO(form)` with `form` positive definite.
pub fn invariant_line(rho: &QMatrix, form: &QMatrix) -> Result<InvariantLine> {
    if inertia(form) != (3, 0, 0) || !is_special_orthogonal(rho, form) {
        return Err(Error::NotSpecialOrthogonal);
    }
    if rho.is_identity() {
        return Err(Error::IdentityInput);
    }
    let k = rho.sub(&QMatrix::identity(3)).kernel();
    assert_eq!(k.rows(), 1, "a nontrivial rotation has a one-dimensional axis");
    let line = InvariantLine::from_direction(k.row(0).to_vec(), form)?;
    debug_assert!(line.is_fixed_by(rho));
    Ok(line)
}

/// Common fixed line of a family of elements of `SO(form)`, at least one of
/// them nontrivial.
pub fn shared_axis(rhos: &[QMatrix], form: &QMatrix) -> Result<InvariantLine> {
    if inertia(form) != (3, 0, 0) || rhos.iter().any(|r| !is_special_orthogonal(r, form)) {
        return Err(Error::NotSpecialOrthogonal);
    }
    let id = QMatrix::identity(3);
    let mut stacked = QMatrix::empty(3);
    for r in rhos {
        stacked = stacked.vstack(&r.sub(&id));
    }
    if stacked.rows() == 0 || stacked.is_zero() {
        return Err(Error::IdentityInput);
    }
    let k = stacked.kernel();
    if k.rows() != 1 {
        return Err(Error::NoCommonLine);
    }
    InvariantLine::from_direction(k.row(0).to_vec(), form)
}

/// Integer vector as rationals.
pub fn to_rational_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Real rational vector as a vector over `Q(zeta_m)`.
pub fn to_cyc_vec(f: &CycloField, v: &[BigRational]) -> CycVector {
    lift_vec(f, v)
}
