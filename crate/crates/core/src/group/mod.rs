//! Finite groups of lattice isometries.

pub mod characters;
pub mod isotypic;
pub mod wedge;
pub mod weight;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{int_matrix_to_json, json_to_int_matrix};
use crate::lattice::{Lattice, Sublattice};
use crate::matrix::ZMatrix;

pub use characters::CharacterTable;
pub use isotypic::{isotypic_components, IsotypicComponent, RealType};
pub use wedge::{bdf_multiplication, wedge_square, wedge_to_u3};
pub use weight::{weight_decomposition, WeightDecomposition};

pub const DEFAULT_ORDER_CAP: usize = 20160;

/// An integer matrix acting on column coordinate vectors and preserving the
/// form of its lattice.
#[derive(Clone, PartialEq, Eq)]
pub struct Isometry {
    lattice: Lattice,
    matrix: ZMatrix,
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Isometry {:?}", self.matrix)
    }
}

impl Isometry {
    pub fn new(lattice: &Lattice, matrix: ZMatrix) -> Result<Self> {
        let n = lattice.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, lattice rank is {n}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let g = lattice.gram();
        if matrix.transpose().mul(g).mul(&matrix) != *g {
            return Err(Error::NotOrthogonal);
        }
        let det = matrix.det();
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(Isometry { lattice: lattice.clone(), matrix })
    }

    pub fn identity(lattice: &Lattice) -> Self {
        Isometry { lattice: lattice.clone(), matrix: ZMatrix::identity(lattice.rank()) }
    }

    pub(crate) fn new_unchecked(lattice: &Lattice, matrix: ZMatrix) -> Self {
        Isometry { lattice: lattice.clone(), matrix }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &ZMatrix {
        &self.matrix
    }

    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.lattice != other.lattice {
            return Err(Error::MixedLattices);
        }
        Ok(Isometry { lattice: self.lattice.clone(), matrix: self.matrix.mul(&other.matrix) })
    }

    pub fn inverse(&self) -> Isometry {
        // g^{-1} = G^{-1} g^T G
        let g = self.lattice.gram().to_q();
        let ginv = g.inverse().map(|gi| gi.mul(&self.matrix.transpose().to_q()).mul(&g));
        let m = match ginv.and_then(|m| m.to_z()) {
            Some(m) => m,
            None => {
                let ord = self.order(DEFAULT_ORDER_CAP).expect("isometry of degenerate lattice must have finite order");
                self.matrix.pow(ord as u64 - 1)
            }
        };
        Isometry { lattice: self.lattice.clone(), matrix: m }
    }

    /// Trace of the matrix.
    pub fn character(&self) -> BigInt {
        self.matrix.trace()
    }

    /// Smallest `d <= cap` with `g^d = I`.
    pub fn order(&self, cap: usize) -> Result<usize> {
        let mut p = self.matrix.clone();
        for d in 1..=cap {
            if p.is_identity() {
                return Ok(d);
            }
            p = p.mul(&self.matrix);
        }
        Err(Error::NotFiniteOrder { cap })
    }

    pub fn to_json(&self) -> Value {
        json!({ "lattice": self.lattice.to_json(), "matrix": int_matrix_to_json(&self.matrix) })
    }

    /// Parse `{"lattice": ..., "matrix": [[...]]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let l = Lattice::from_json(&v["lattice"])?;
        Self::new(&l, json_to_int_matrix(&v["matrix"])?)
    }
}

pub fn make_isometry(l: &Lattice, m: ZMatrix) -> Result<Isometry> {
    Isometry::new(l, m)
}

/// A finite group of isometries, stored as its full element list.
#[derive(Clone)]
pub struct ActionGroup {
    lattice: Lattice,
    generators: Vec<Isometry>,
    n: usize,
    elems: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    classes: OnceLock<Classes>,
    table: OnceLock<Result<CharacterTable>>,
}

impl fmt::Debug for ActionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ActionGroup(order {}, rank {})", self.order(), self.n)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Classes {
    pub members: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub inverse: Vec<usize>,
}

fn mul_flat(a: &[i64], b: &[i64], n: usize) -> Result<Vec<i64>> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                let t = x.checked_mul(b[k * n + j]).ok_or(Error::Overflow)?;
                out[i * n + j] = out[i * n + j].checked_add(t).ok_or(Error::Overflow)?;
            }
        }
    }
    Ok(out)
}

impl ActionGroup {
    pub fn trivial(lattice: &Lattice) -> Self {
        Self::generate(lattice, &[], DEFAULT_ORDER_CAP).expect("trivial group")
    }

    /// Breadth-first closure of the generators.
    pub fn generate(lattice: &Lattice, gens: &[Isometry], cap: usize) -> Result<Self> {
        if gens.iter().any(|g| g.lattice() != lattice) {
            return Err(Error::MixedLattices);
        }
        let n = lattice.rank();
        let id: Vec<i64> = (0..n * n).map(|k| (k / n == k % n) as i64).collect();
        let gflat: Vec<Vec<i64>> =
            gens.iter().map(|g| g.matrix().to_i64().ok_or(Error::Overflow)).collect::<Result<_>>()?;
        let mut elems = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for s in &gflat {
                let p = mul_flat(s, &elems[e], n)?;
                if !index.contains_key(&p) {
                    if elems.len() >= cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        Ok(ActionGroup {
            lattice: lattice.clone(),
            generators: gens.to_vec(),
            n,
            elems,
            index,
            classes: OnceLock::new(),
            table: OnceLock::new(),
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn element(&self, i: usize) -> ZMatrix {
        ZMatrix::from_fn(self.n, self.n, |r, c| BigInt::from(self.elems[i][r * self.n + c]))
    }

    pub fn elements(&self) -> Vec<ZMatrix> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }

    pub fn isometry(&self, i: usize) -> Isometry {
        Isometry::new_unchecked(&self.lattice, self.element(i))
    }

    pub(crate) fn raw(&self, i: usize) -> &[i64] {
        &self.elems[i]
    }

    pub fn index_of(&self, m: &ZMatrix) -> Option<usize> {
        m.to_i64().and_then(|v| self.index.get(&v).copied())
    }

    pub fn contains(&self, m: &ZMatrix) -> bool {
        self.index_of(m).is_some()
    }

    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        let p = mul_flat(&self.elems[a], &self.elems[b], self.n).expect("products of group elements stay small");
        self.index[&p]
    }

    pub fn trace(&self, i: usize) -> i64 {
        (0..self.n).map(|k| self.elems[i][k * self.n + k]).sum()
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut cur = i;
        let mut k = 1;
        while cur != 0 {
            cur = self.mul_idx(cur, i);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|a| g.iter().all(|b| a.matrix().mul(b.matrix()) == b.matrix().mul(a.matrix())))
    }

    /// An element generating the whole group, if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order()).find(|&i| self.element_order(i) == self.order())
    }

    pub(crate) fn classes(&self) -> &Classes {
        self.classes.get_or_init(|| self.compute_classes())
    }

    fn compute_classes(&self) -> Classes {
        let nel = self.order();
        let inverse: Vec<usize> = {
            let g = self.lattice.gram().to_q();
            let gi = g.inverse();
            (0..nel)
                .map(|i| match &gi {
                    Some(gi) => {
                        let m = gi.mul(&self.element(i).transpose().to_q()).mul(&g);
                        let flat: Vec<i64> =
                            m.entries().iter().map(|x| x.to_integer().to_i64().expect("inverse entry")).collect();
                        self.index[&flat]
                    }
                    None => {
                        let mut cur = i;
                        loop {
                            let next = self.mul_idx(cur, i);
                            if next == 0 {
                                break cur;
                            }
                            cur = next;
                        }
                    }
                })
                .collect()
        };
        let gens: Vec<usize> =
            self.generators.iter().filter_map(|g| self.index_of(g.matrix())).filter(|&g| g != 0).collect();
        let mut class_of = vec![usize::MAX; nel];
        let mut members = Vec::new();
        for start in 0..nel {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = members.len();
            let mut orbit = vec![start];
            class_of[start] = c;
            let mut q = VecDeque::from([start]);
            while let Some(x) = q.pop_front() {
                for &s in &gens {
                    let y = self.mul_idx(self.mul_idx(s, x), inverse[s]);
                    if class_of[y] == usize::MAX {
                        class_of[y] = c;
                        orbit.push(y);
                        q.push_back(y);
                    }
                }
            }
            orbit.sort_unstable();
            members.push(orbit);
        }
        Classes { members, class_of, inverse }
    }

    pub fn conjugacy_class_count(&self) -> usize {
        self.classes().members.len()
    }

    /// Representative index and size of each conjugacy class.
    pub fn conjugacy_classes(&self) -> Vec<(usize, usize)> {
        self.classes().members.iter().map(|m| (m[0], m.len())).collect()
    }

    pub fn inverse_idx(&self, i: usize) -> usize {
        self.classes().inverse[i]
    }

    pub fn character_table(&self) -> Result<&CharacterTable> {
        self.table.get_or_init(|| CharacterTable::compute(self)).as_ref().map_err(|e| e.clone())
    }

    /// Image under a homomorphism given on generators.
    pub fn map_generators(
        &self,
        lattice: &Lattice,
        f: impl Fn(&Isometry) -> Result<Isometry>,
        cap: usize,
    ) -> Result<Self> {
        let gens = self.generators.iter().map(f).collect::<Result<Vec<_>>>()?;
        ActionGroup::generate(lattice, &gens, cap)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lattice": self.lattice.to_json(),
            "order": self.order(),
            "generators": self.generators.iter().map(|g| int_matrix_to_json(g.matrix())).collect::<Vec<_>>(),
        })
    }

    /// Parse `{"lattice": ..., "generators": [matrix, ...]}`.
    pub fn from_json(v: &Value, cap: usize) -> Result<Self> {
        let l = Lattice::from_json(&v["lattice"])?;
        let gens = match &v["generators"] {
            Value::Null => Vec::new(),
            Value::Array(a) => a
                .iter()
                .map(|m| {
                    let m = if m.get("matrix").is_some() { &m["matrix"] } else { m };
                    Isometry::new(&l, json_to_int_matrix(m)?)
                })
                .collect::<Result<Vec<_>>>()?,
            _ => return Err(Error::Invalid("`generators` must be an array".into())),
        };
        ActionGroup::generate(&l, &gens, cap)
    }
}

pub fn close_group(gens: &[Isometry], cap: usize) -> Result<ActionGroup> {
    let first = gens.first().ok_or_else(|| Error::Invalid("close_group needs at least one generator".into()))?;
    ActionGroup::generate(first.lattice(), gens, cap)
}

/// `{x : g x = x for all g}`, the integer kernel of the stacked `g - I`.
pub fn invariant_sublattice(g: &ActionGroup) -> Sublattice {
    let n = g.rank();
    let id = ZMatrix::identity(n);
    let mut stacked = ZMatrix::empty(n);
    for s in g.generators() {
        stacked = stacked.vstack(&s.matrix().sub(&id));
    }
    let basis = if stacked.rows() == 0 || stacked.is_zero() { id } else { stacked.integer_kernel() };
    Sublattice::primitive_unchecked(g.lattice(), basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{z_from_i64_rows, zi};

    fn swap_u() -> Isometry {
        Isometry::new(&Lattice::u(), z_from_i64_rows(&[vec![0, 1], vec![1, 0]])).unwrap()
    }

    #[test]
    fn validation() {
        let u = Lattice::u();
        assert!(Isometry::new(&u, ZMatrix::identity(2)).unwrap().matrix().is_identity());
        let bad = z_from_i64_rows(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(Isometry::new(&u, bad), Err(Error::NotOrthogonal));
        let l = Lattice::rank_one(0);
        assert_eq!(Isometry::new(&l, z_from_i64_rows(&[vec![2]])), Err(Error::NotUnimodular("2".into())));
    }

    #[test]
    fn closure_orders() {
        let u = Lattice::u();
        assert_eq!(ActionGroup::trivial(&u).order(), 1);
        let neg = Isometry::new(&u, ZMatrix::identity(2).scale(&zi(-1))).unwrap();
        let g = close_group(&[swap_u(), neg], 100).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        assert_eq!(g.conjugacy_class_count(), 4);
        assert_eq!(close_group(&[swap_u()], 1).unwrap_err(), Error::OrderCapExceeded { cap: 1 });
    }

    #[test]
    fn mixed_lattices_rejected() {
        let a = Isometry::identity(&Lattice::u());
        let b = Isometry::identity(&Lattice::rank_one(-2).direct_sum(&Lattice::rank_one(-2)));
        assert_eq!(close_group(&[a, b], 10).unwrap_err(), Error::MixedLattices);
    }

    #[test]
    fn invariants_of_swap() {
        let g = close_group(&[swap_u()], 10).unwrap();
        let inv = invariant_sublattice(&g);
        assert_eq!(inv.basis(), &z_from_i64_rows(&[vec![1, 1]]));
        assert_eq!(inv.restrict_form().gram(), &z_from_i64_rows(&[vec![2]]));
        assert_eq!(invariant_sublattice(&ActionGroup::trivial(&Lattice::u())).rank(), 2);
    }

    #[test]
    fn inverse_and_order() {
        let r = swap_u();
        assert_eq!(r.inverse(), r);
        assert_eq!(r.order(10), Ok(2));
        assert_eq!(r.character(), zi(0));
    }
}
