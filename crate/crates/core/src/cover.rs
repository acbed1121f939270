//! Lattice models of a cyclic cover `p: X -> Y` of degree `d`: the deck
//! action on `H^2(X)`, its fixed sublattice, the pullback `p^*` from the
//! quotient lattice, and the transfer `p_!`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{invariant_sublattice, wedge, ActionGroup, Isometry, DEFAULT_ORDER_CAP};
use crate::json::{int_matrix_to_json, int_to_json, rat_matrix_to_json};
use crate::lattice::{Lattice, Sublattice};
use crate::matrix::{zi, QMatrix, ZMatrix};

/// Coordinate layout of the K3 lattice `x1 + x2 + x3 + x4 + x5` with
/// `x1, x2, x3` copies of `U` and `x4, x5` copies of `E8(-1)`.
pub mod k3 {
    use super::*;

    pub const X1: std::ops::Range<usize> = 0..2;
    pub const X2: std::ops::Range<usize> = 2..4;
    pub const X3: std::ops::Range<usize> = 4..6;
    pub const X4: std::ops::Range<usize> = 6..14;
    pub const X5: std::ops::Range<usize> = 14..22;

    /// `(x1, x2, x3, x4, x5) -> (-x1, x3, x2, x5, x4)`.
    pub fn iota_matrix() -> ZMatrix {
        let mut m = ZMatrix::zeros(22, 22);
        for i in X1 {
            m[(i, i)] = zi(-1);
        }
        for k in 0..2 {
            m[(X2.start + k, X3.start + k)] = zi(1);
            m[(X3.start + k, X2.start + k)] = zi(1);
        }
        for k in 0..8 {
            m[(X4.start + k, X5.start + k)] = zi(1);
            m[(X5.start + k, X4.start + k)] = zi(1);
        }
        m
    }

    pub fn iota() -> Isometry {
        Isometry::new_unchecked(&Lattice::k3(), iota_matrix())
    }

    /// Columns: images `(0, a, a, b, b)` of the `U + E8(-1)` basis vectors.
    pub fn enriques_pullback() -> ZMatrix {
        let mut p = ZMatrix::zeros(22, 10);
        for k in 0..2 {
            p[(X2.start + k, k)] = zi(1);
            p[(X3.start + k, k)] = zi(1);
        }
        for k in 0..8 {
            p[(X4.start + k, 2 + k)] = zi(1);
            p[(X5.start + k, 2 + k)] = zi(1);
        }
        p
    }
}

#[derive(Clone, Debug)]
pub struct CoverModel {
    pub name: String,
    pub d: usize,
    pub upstairs: Lattice,
    pub generator: Isometry,
    pub action: ActionGroup,
    /// The full fixed sublattice of the action.
    pub invariant: Sublattice,
    pub downstairs: Lattice,
    /// `rank(upstairs) x rank(downstairs)`; column `j` is `p^*` of basis vector `j`.
    pub pullback: ZMatrix,
    /// Index of the pullback image in the fixed sublattice.
    pub pullback_index: BigInt,
    /// Orders of the cyclic torsion summands of `H^2(Y, Z)`, as metadata.
    pub torsion: Vec<u64>,
}

impl CoverModel {
    /// Assemble a model without checking any of its properties.
    pub fn from_parts(
        name: &str,
        d: usize,
        generator: Isometry,
        downstairs: Lattice,
        pullback: ZMatrix,
        torsion: Vec<u64>,
    ) -> Result<Self> {
        let upstairs = generator.lattice().clone();
        if pullback.rows() != upstairs.rank() || pullback.cols() != downstairs.rank() {
            return Err(Error::DimensionMismatch("pullback shape does not match the lattices".into()));
        }
        let action = ActionGroup::generate(&upstairs, std::slice::from_ref(&generator), DEFAULT_ORDER_CAP)?;
        let invariant = invariant_sublattice(&action);
        let image = Sublattice::new(&upstairs, pullback.transpose())?;
        let pullback_index = relative_index(&image, &invariant).unwrap_or_else(BigInt::zero);
        Ok(CoverModel {
            name: name.to_string(),
            d,
            upstairs,
            generator,
            action,
            invariant,
            downstairs,
            pullback,
            pullback_index,
            torsion,
        })
    }

    pub fn pullback_image(&self) -> Sublattice {
        Sublattice::new(&self.upstairs, self.pullback.transpose()).expect("pullback is injective")
    }

    /// `p^T G_X p = d G_Y`.
    pub fn scaling_holds(&self) -> bool {
        let lhs = self.pullback.transpose().mul(self.upstairs.gram()).mul(&self.pullback);
        lhs == self.downstairs.gram().scale(&BigInt::from(self.d))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "d": self.d,
            "upstairs": self.upstairs.to_json(),
            "generator": int_matrix_to_json(self.generator.matrix()),
            "invariant_basis": int_matrix_to_json(self.invariant.basis()),
            "invariant": self.invariant.restrict_form().invariants().to_json(),
            "downstairs": self.downstairs.to_json(),
            "pullback": int_matrix_to_json(&self.pullback),
            "pullback_index": int_to_json(&self.pullback_index),
            "torsion": self.torsion,
        })
    }
}

/// `[big : small]` when `small` is a full-rank sublattice of `big`.
fn relative_index(small: &Sublattice, big: &Sublattice) -> Option<BigInt> {
    if small.rank() != big.rank() {
        return None;
    }
    let mut c = QMatrix::zeros(small.rank(), big.rank());
    for r in 0..small.rank() {
        let coords = big.coordinates(small.basis().row(r))?;
        if !coords.iter().all(|x| x.is_integer()) {
            return None;
        }
        for (j, x) in coords.into_iter().enumerate() {
            c[(r, j)] = x;
        }
    }
    Some(num_traits::Signed::abs(&c.det().to_integer()))
}

/// Restricted Gram divided by `d`.
pub fn descend_form(inv: &Sublattice, d: i64) -> Result<Lattice> {
    if d == 0 {
        return Err(Error::ZeroScale);
    }
    let g = inv.restrict_form();
    let dd = BigInt::from(d);
    for x in g.gram().entries() {
        if !x.is_multiple_of(&dd) {
            return Err(Error::NotDivisible { value: x.to_string(), d });
        }
    }
    Lattice::new(g.gram().map(|x| x / &dd))
}

#[derive(Clone, Debug)]
pub struct TransferReport {
    pub d: usize,
    /// `rank(Y) x rank(X)`: coordinates of `sum_g g x` in the pullback basis.
    pub transfer: QMatrix,
    pub composite: QMatrix,
}

impl TransferReport {
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "transfer": rat_matrix_to_json(&self.transfer),
            "composite": rat_matrix_to_json(&self.composite),
        })
    }
}

/// Verify `p_! p^* = d * I` with `p_! x = sum_{g in D} g x` read in pullback
/// coordinates.
pub fn transfer_composite(model: &CoverModel) -> Result<TransferReport> {
    let n = model.upstairs.rank();
    let k = model.downstairs.rank();
    let mut sum = ZMatrix::zeros(n, n);
    for g in model.action.elements() {
        sum = sum.add(&g);
    }
    let image = model.pullback.transpose().to_q();
    let coords = |v: &[BigInt]| -> Option<Vec<BigRational>> {
        let vq: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        image.solve_rows(&vq)
    };
    let mut transfer = QMatrix::zeros(k, n);
    let mut transfer_defined = true;
    for j in 0..n {
        match coords(&sum.column(j)) {
            Some(c) => {
                for (i, x) in c.into_iter().enumerate() {
                    transfer[(i, j)] = x;
                }
            }
            None => transfer_defined = false,
        }
    }
    let d = BigRational::from_integer(BigInt::from(model.d));
    let mut composite = QMatrix::zeros(k, k);
    for j in 0..k {
        let y = sum.mul_vec(&model.pullback.column(j));
        let c = coords(&y).ok_or(Error::TransferMismatch { column: j })?;
        for (i, x) in c.iter().enumerate() {
            let want = if i == j { d.clone() } else { BigRational::zero() };
            if *x != want {
                return Err(Error::TransferMismatch { column: j });
            }
            composite[(i, j)] = x.clone();
        }
    }
    if !transfer_defined {
        return Err(Error::TransferMismatch { column: 0 });
    }
    Ok(TransferReport { d: model.d, transfer, composite })
}

/// The K3 lattice with the Enriques involution; quotient `U + E8(-1)`.
pub fn enriques_model() -> CoverModel {
    CoverModel::from_parts("enriques", 2, k3::iota(), Lattice::enriques(), k3::enriques_pullback(), vec![2])
        .expect("standard model")
}

/// `K3 + <-2(n-1)>` with `iota* + id`; quotient `U + E8(-1) + <-(n-1)>`.
pub fn hilb_model(n: i64) -> Result<CoverModel> {
    if n < 3 || n.is_even() {
        return Err(Error::BadParameters(format!("hilb model needs odd n >= 3, got {n}")));
    }
    let up = Lattice::k3().direct_sum(&Lattice::rank_one(-2 * (n - 1)));
    let g = k3::iota_matrix().block_diag(&ZMatrix::identity(1));
    let gen = Isometry::new(&up, g)?;
    let down = Lattice::enriques().direct_sum(&Lattice::rank_one(-(n - 1)));
    let p = k3::enriques_pullback().block_diag(&ZMatrix::identity(1));
    CoverModel::from_parts(&format!("hilb:{n}"), 2, gen, down, p, vec![2])
}

/// `U^3 + <-2(n+1)>` with the wedge square of the order-`d` bielliptic
/// multiplication plus the identity; quotient `U + <-2(n+1)/d>`.
///
/// The pullback sends the quotient `U` onto `u1, d * v1`, which is `U(d)`;
/// the full fixed sublattice is `span(u1, v1) + <-2(n+1)>`, containing the
/// pullback image with index `d`.
pub fn kummer_model(d: u32, n: i64) -> Result<CoverModel> {
    if !(2..=4).contains(&d) {
        return Err(Error::BadParameters(format!("kummer model needs d in {{2, 3, 4}}, got {d}")));
    }
    if n < 1 || (n + 1) % d as i64 != 0 {
        return Err(Error::BadParameters(format!("kummer model needs n >= 1 with d | n + 1, got d = {d}, n = {n}")));
    }
    let u = Lattice::u();
    let up = Lattice::direct_sum_all(&[u.clone(), u.clone(), u, Lattice::rank_one(-2 * (n + 1))]);
    let w = wedge::wedge_square_u3(&wedge::bdf_multiplication(d)?)?;
    let gen = Isometry::new(&up, w.block_diag(&ZMatrix::identity(1)))?;
    let down = Lattice::u().direct_sum(&Lattice::rank_one(-2 * (n + 1) / d as i64));
    let mut p = ZMatrix::zeros(7, 3);
    p[(0, 0)] = BigInt::one();
    p[(1, 1)] = BigInt::from(d);
    p[(6, 2)] = BigInt::one();
    CoverModel::from_parts(&format!("kummer:{d}:{n}"), d as usize, gen, down, p, vec![d as u64])
}

/// Registry: `enriques`, `hilb:<n>`, `kummer:<d>:<n>`.
pub fn model_by_name(name: &str) -> Result<CoverModel> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |s: &str| s.parse::<i64>().map_err(|_| Error::UnknownName(name.to_string()));
    match parts.as_slice() {
        ["enriques"] => Ok(enriques_model()),
        ["hilb", n] => hilb_model(num(n)?),
        ["kummer", d, n] => kummer_model(num(d)? as u32, num(n)?),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

pub fn builtin_model_names() -> Vec<String> {
    let mut v = vec!["enriques".to_string()];
    for n in [3, 5, 7, 9] {
        v.push(format!("hilb:{n}"));
    }
    for (d, n) in [(2, 1), (2, 3), (3, 2), (4, 3), (2, 5), (3, 5), (2, 7), (4, 7), (2, 9), (3, 8)] {
        v.push(format!("kummer:{d}:{n}"));
    }
    v
}
