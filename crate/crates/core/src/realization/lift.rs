//! Lifting isometries of `U + E8(-1)` to the K3 lattice through the Enriques
//! cover, (-2)-reflections, and the common fixed line of a lifted group.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::plane::PositiveThreePlane;
use super::report::{realization_invariant, Mode, RealizationReport, ReportOptions};
use crate::cover::k3;
use crate::error::{Error, Result};
use crate::group::{ActionGroup, Isometry};
use crate::json::int_vec_to_json;
use crate::lattice::Lattice;
use crate::matrix::{QMatrix, ZMatrix};
use crate::period::{invariant_line, InvariantLine};
use crate::realization::find_invariant_positive_3plane;

/// K3 coordinates carrying the first and second copy of `U + E8(-1)`.
fn copy_indices() -> [Vec<usize>; 2] {
    let a = k3::X2.chain(k3::X4).collect();
    let b = k3::X3.chain(k3::X5).collect();
    [a, b]
}

/// The identity on `x1` and `phi` on each of `(x2, x4)` and `(x3, x5)`.
pub fn lift_isometry(phi: &Isometry) -> Result<Isometry> {
    if *phi.lattice() != Lattice::enriques() {
        return Err(Error::MixedLattices);
    }
    let m = phi.matrix();
    let mut out = ZMatrix::zeros(22, 22);
    for i in k3::X1 {
        out[(i, i)] = BigInt::one();
    }
    for idx in copy_indices() {
        for (r, &gr) in idx.iter().enumerate() {
            for (c, &gc) in idx.iter().enumerate() {
                out[(gr, gc)] = m[(r, c)].clone();
            }
        }
    }
    Isometry::new(&Lattice::k3(), out)
}

/// The isometry of `U + E8(-1)` induced by `Phi` on the pullback image, if
/// `Phi` preserves it.
pub fn descend_isometry(phi: &ZMatrix) -> Option<ZMatrix> {
    let p = k3::enriques_pullback();
    let img = phi.mul(&p);
    let [a, _] = copy_indices();
    let x = img.select_rows(&a);
    (p.mul(&x) == img).then_some(x)
}

/// Closure of the lifts of `G` together with `iota*`, checked to be an
/// extension of `G` by `<iota*>`.
pub fn lift_group(g: &ActionGroup, cap: usize) -> Result<ActionGroup> {
    if *g.lattice() != Lattice::enriques() {
        return Err(Error::MixedLattices);
    }
    let mut gens: Vec<Isometry> = g.generators().iter().map(lift_isometry).collect::<Result<_>>()?;
    gens.push(k3::iota());
    let lifted = ActionGroup::generate(&Lattice::k3(), &gens, cap)?;
    let iota = k3::iota_matrix();
    let mut kernel = 0;
    let mut images = std::collections::HashSet::new();
    for i in 0..lifted.order() {
        let e = lifted.element(i);
        if e.mul(&iota) != iota.mul(&e) {
            return Err(Error::Invalid("lifted element does not commute with iota*".into()));
        }
        let down = descend_isometry(&e).ok_or_else(|| Error::Invalid("lifted element does not descend".into()))?;
        if !g.contains(&down) {
            return Err(Error::Invalid("lifted element descends outside the group".into()));
        }
        if down.is_identity() {
            if !(e.is_identity() || e == iota) {
                return Err(Error::Invalid("kernel of the descent is larger than <iota*>".into()));
            }
            kernel += 1;
        }
        images.insert(g.index_of(&down));
    }
    if kernel != 2 || images.len() != g.order() || lifted.order() != 2 * g.order() {
        return Err(Error::Invalid("group of lifts is not an extension of G by <iota*>".into()));
    }
    Ok(lifted)
}

/// `x -> x + (x, v) v` for `q(v) = -2`.
pub fn dehn_twist_reflection(l: &Lattice, v: &[BigInt]) -> Result<Isometry> {
    if v.len() != l.rank() {
        return Err(Error::DimensionMismatch("vector length must equal the lattice rank".into()));
    }
    let q = l.norm(v);
    if q != BigInt::from(-2) {
        return Err(Error::WrongNorm(q.to_string()));
    }
    let gv = l.gram().mul_vec(v);
    let n = l.rank();
    let m = ZMatrix::from_fn(n, n, |i, j| BigInt::from((i == j) as i64) + &v[i] * &gv[j]);
    Isometry::new(l, m)
}

/// If `phi` is a reflection in a (-2)-vector, that vector (up to sign).
pub fn reflection_vector(phi: &Isometry) -> Option<Vec<BigInt>> {
    let l = phi.lattice();
    let n = l.rank();
    let d = phi.matrix().sub(&ZMatrix::identity(n));
    if d.rank() != 1 {
        return None;
    }
    let col = (0..n).map(|j| d.column(j)).find(|c| c.iter().any(|x| !x.is_zero()))?;
    let v = crate::matrix::primitive_integer_row(
        &col.iter().map(|x| num_rational::BigRational::from_integer(x.clone())).collect::<Vec<_>>(),
    );
    let r = dehn_twist_reflection(l, &v).ok()?;
    (r.matrix() == phi.matrix()).then_some(v)
}

/// `p^* S = s1 + s2` with `s1 = (0, a, 0, b, 0)` and `s2 = (0, 0, a, 0, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub s: Vec<BigInt>,
    pub pullback: Vec<BigInt>,
    pub s1: Vec<BigInt>,
    pub s2: Vec<BigInt>,
}

impl Splitting {
    pub fn of(s: &[BigInt]) -> Self {
        let pullback = k3::enriques_pullback().mul_vec(s);
        let [a, b] = copy_indices();
        let mut s1 = vec![BigInt::zero(); 22];
        let mut s2 = vec![BigInt::zero(); 22];
        for &i in &a {
            s1[i] = pullback[i].clone();
        }
        for &i in &b {
            s2[i] = pullback[i].clone();
        }
        Splitting { s: s.to_vec(), pullback, s1, s2 }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "S": int_vec_to_json(&self.s),
            "pullback": int_vec_to_json(&self.pullback),
            "s1": int_vec_to_json(&self.s1),
            "s2": int_vec_to_json(&self.s2),
        })
    }
}

#[derive(Clone, Debug)]
pub struct EnriquesReport {
    pub mode: Mode,
    pub downstairs_order: usize,
    pub lifted: ActionGroup,
    pub report: RealizationReport,
    pub realizable: bool,
    /// One entry per reflection generator.
    pub splittings: Vec<Splitting>,
}

impl EnriquesReport {
    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.as_str(),
            "downstairs_order": self.downstairs_order,
            "lifted_order": self.lifted.order(),
            "realizable": self.realizable,
            "splittings": self.splittings.iter().map(Splitting::to_json).collect::<Vec<_>>(),
            "k3_report": self.report.to_json(),
        })
    }
}

/// The K3 verdict for the group of lifts of `G`.
pub fn enriques_realizable(g: &ActionGroup, mode: Mode, cap: usize, opts: &ReportOptions) -> Result<EnriquesReport> {
    let lifted = lift_group(g, cap)?;
    let plane = find_invariant_positive_3plane(&lifted, &opts.plane)?;
    let report = realization_invariant(&lifted, &plane, opts)?;
    let splittings = g.generators().iter().filter_map(reflection_vector).map(|v| Splitting::of(&v)).collect();
    Ok(EnriquesReport {
        mode,
        downstairs_order: g.order(),
        realizable: report.verdict(mode),
        lifted,
        report,
        splittings,
    })
}

/// The fixed line of `iota*` in `P`, checked to be fixed by every generator.
pub fn ricci_flat_implies_complex_witness(g: &ActionGroup, p: &PositiveThreePlane) -> Result<InvariantLine> {
    let iota = k3::iota_matrix();
    if *g.lattice() != Lattice::k3() || !g.contains(&iota) {
        return Err(Error::Invalid("group must act on the K3 lattice and contain iota*".into()));
    }
    let form = p.gram_exact().ok_or_else(|| Error::Invalid("witness needs an exactly represented plane".into()))?;
    let rho = p.restrict(&iota).exact.ok_or(Error::PlaneNotInvariant)?;
    let line = invariant_line(&rho, &form)?;
    for s in g.generators() {
        let r: QMatrix = p.restrict(s.matrix()).exact.ok_or(Error::PlaneNotInvariant)?;
        if !line.is_fixed_by(&r) {
            return Err(Error::NoCommonLine);
        }
    }
    Ok(line)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::short_vectors;
    use crate::group::close_group;
    use crate::matrix::zi;

    fn e8_root() -> Vec<BigInt> {
        let mut v = vec![zi(0); 10];
        v[2] = zi(1);
        v
    }

    #[test]
    fn lift_of_minus_identity() {
        let l = Lattice::enriques();
        let m = ZMatrix::identity(10).scale(&zi(-1));
        let lift = lift_isometry(&Isometry::new(&l, m).unwrap()).unwrap();
        let expected = ZMatrix::identity(2).block_diag(&ZMatrix::identity(20).scale(&zi(-1)));
        assert_eq!(*lift.matrix(), expected);
        let g = close_group(&[Isometry::new(&l, ZMatrix::identity(10).scale(&zi(-1))).unwrap()], 10).unwrap();
        let lg = lift_group(&g, 100).unwrap();
        assert_eq!(lg.order(), 4);
        assert!(lg.is_abelian());
    }

    #[test]
    fn lift_of_root_reflection() {
        let l = Lattice::enriques();
        let r = dehn_twist_reflection(&l, &e8_root()).unwrap();
        assert_eq!(r.matrix().det(), zi(-1));
        assert_eq!(r.order(4).unwrap(), 2);
        let lift = lift_isometry(&r).unwrap();
        let sp = Splitting::of(&e8_root());
        let k = Lattice::k3();
        let r1 = dehn_twist_reflection(&k, &sp.s1).unwrap();
        let r2 = dehn_twist_reflection(&k, &sp.s2).unwrap();
        assert_eq!(*lift.matrix(), r1.matrix().mul(r2.matrix()));
        assert_eq!(descend_isometry(lift.matrix()).unwrap(), *r.matrix());
        let g = close_group(&[r], 10).unwrap();
        assert_eq!(lift_group(&g, 100).unwrap().order(), 4);
    }

    #[test]
    fn wrong_norm() {
        let l = Lattice::enriques();
        let mut v = vec![zi(0); 10];
        v[0] = zi(1);
        assert!(matches!(dehn_twist_reflection(&l, &v), Err(Error::WrongNorm(_))));
        let one = Lattice::rank_one(-2);
        assert_eq!(*dehn_twist_reflection(&one, &[zi(1)]).unwrap().matrix(), ZMatrix::identity(1).scale(&zi(-1)));
    }

    #[test]
    fn enriques_verdicts() {
        let l = Lattice::enriques();
        let opts = ReportOptions::default();
        let triv = enriques_realizable(&ActionGroup::trivial(&l), Mode::Complex, 1000, &opts).unwrap();
        assert!(triv.realizable);
        let r = dehn_twist_reflection(&l, &e8_root()).unwrap();
        let g = close_group(&[r], 10).unwrap();
        let rep = enriques_realizable(&g, Mode::Metric, 1000, &opts).unwrap();
        assert!(!rep.realizable);
        let sp = &rep.splittings[0];
        assert!(rep.report.ambient_witnesses.contains(&sp.s1));
        assert!(rep.report.ambient_witnesses.contains(&sp.s2));
        assert_eq!(short_vectors(&rep.report.l_g, -2).unwrap().len(), rep.report.ambient_witnesses.len());
    }

    #[test]
    fn iota_fixed_line() {
        let g = close_group(&[k3::iota()], 10).unwrap();
        let p = find_invariant_positive_3plane(&g, &Default::default()).unwrap();
        let line = ricci_flat_implies_complex_witness(&g, &p).unwrap();
        let rho = p.restrict(&k3::iota_matrix()).exact.unwrap();
        assert!(line.is_fixed_by(&rho));
    }
}
