//! Integral lattices: a free Z-module with a symmetric integral Gram matrix.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{int_matrix_to_json, int_to_json, json_to_int_matrix};
use crate::matrix::{inertia, zi, QMatrix, ZMatrix};

/// Counts of positive, negative and zero directions of the form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

impl Signature {
    pub const fn new(p: usize, q: usize, r: usize) -> Self {
        Signature { p, q, r }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.p, self.q, self.r)
    }
}

#[derive(Clone)]
pub struct Lattice {
    gram: Arc<ZMatrix>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.gram, &other.gram) || *self.gram == *other.gram
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(rank {}) {:?}", self.rank(), self.gram)
    }
}

/// The invariants used to compare lattices up to isometry in fixtures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeInvariants {
    pub rank: usize,
    pub signature: Signature,
    pub det: BigInt,
    pub even: bool,
    /// Nontrivial elementary divisors of the discriminant group; `None` when
    /// the lattice is degenerate.
    pub discriminant: Option<Vec<BigInt>>,
}

impl LatticeInvariants {
    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "signature": [self.signature.p, self.signature.q, self.signature.r],
            "det": int_to_json(&self.det),
            "even": self.even,
            "discriminant": self.discriminant.as_ref().map(|d| d.iter().map(int_to_json).collect::<Vec<_>>()),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Invalid(format!("invariants: bad `{what}`"));
        let rank = v["rank"].as_u64().ok_or_else(|| bad("rank"))? as usize;
        let sig = v["signature"].as_array().ok_or_else(|| bad("signature"))?;
        let s = |i: usize| sig.get(i).and_then(|x| x.as_u64()).map(|x| x as usize).ok_or_else(|| bad("signature"));
        let det = crate::json::json_to_rat(&v["det"])?.to_integer();
        let even = v["even"].as_bool().ok_or_else(|| bad("even"))?;
        let discriminant = match &v["discriminant"] {
            Value::Null => None,
            d => Some(crate::json::json_to_int_vec(d)?),
        };
        Ok(LatticeInvariants { rank, signature: Signature::new(s(0)?, s(1)?, s(2)?), det, even, discriminant })
    }
}

impl fmt::Display for LatticeInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let disc = match &self.discriminant {
            None => "degenerate".to_string(),
            Some(d) if d.is_empty() => "trivial".to_string(),
            Some(d) => d.iter().map(|x| format!("Z/{x}")).collect::<Vec<_>>().join(" + "),
        };
        write!(
            f,
            "rank {}, signature {}, det {}, {}, discriminant {}",
            self.rank,
            self.signature,
            self.det,
            if self.even { "even" } else { "odd" },
            disc
        )
    }
}

/// Named building blocks accepted by [`Lattice::standard`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardName {
    U,
    E8,
    A(usize),
}

impl FromStr for StandardName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" => Ok(StandardName::U),
            "E8" => Ok(StandardName::E8),
            _ => {
                let rest = s.strip_prefix("A_").or_else(|| s.strip_prefix('A'));
                match rest.and_then(|n| n.parse::<usize>().ok()) {
                    Some(n) if n >= 1 => Ok(StandardName::A(n)),
                    _ => Err(Error::UnknownName(s.to_string())),
                }
            }
        }
    }
}

/// Cartan matrix of E8 with Bourbaki labelling: chain 1-3-4-5-6-7-8 and node 2
/// attached to node 4.
const E8_CARTAN: [[i64; 8]; 8] = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
];

impl Lattice {
    /// Validate a Gram matrix: square and symmetric.
    pub fn new(gram: ZMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if let Some((row, col)) = gram.first_asymmetry() {
            return Err(Error::NonSymmetric { row, col });
        }
        Ok(Lattice { gram: Arc::new(gram) })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let m = ZMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| zi(x)).collect()).collect())?;
        Self::new(m)
    }

    /// Accepts a rational matrix and rejects non-integral entries.
    pub fn from_rational(gram: &QMatrix) -> Result<Self> {
        for r in 0..gram.rows() {
            for c in 0..gram.cols() {
                if !gram[(r, c)].is_integer() {
                    return Err(Error::NonIntegral { row: r, col: c, value: gram[(r, c)].to_string() });
                }
            }
        }
        Self::new(gram.map(|x| x.to_integer()))
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &ZMatrix {
        &self.gram
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        self.pair(x, x)
    }

    pub fn pair_q(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let g = self.gram.to_q();
        let gy = g.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).fold(BigRational::zero(), |acc, v| acc + v)
    }

    /// Exact signature by rational congruence diagonalization.
    pub fn signature(&self) -> Signature {
        let (p, q, r) = inertia(&self.gram.to_q());
        Signature::new(p, q, r)
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.det()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature() == Signature::new(0, self.rank(), 0)
    }

    /// Nontrivial elementary divisors of `L^* / L`.
    pub fn discriminant_group(&self) -> Result<Vec<BigInt>> {
        if self.determinant().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(self.gram.smith_invariants().into_iter().filter(|d| !d.is_one()).collect())
    }

    pub fn invariants(&self) -> LatticeInvariants {
        LatticeInvariants {
            rank: self.rank(),
            signature: self.signature(),
            det: self.determinant(),
            even: self.is_even(),
            discriminant: self.discriminant_group().ok(),
        }
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice { gram: Arc::new(self.gram.block_diag(&other.gram)) }
    }

    pub fn direct_sum_all(parts: &[Lattice]) -> Lattice {
        let mut g = ZMatrix::zeros(0, 0);
        for p in parts {
            g = g.block_diag(p.gram());
        }
        Lattice { gram: Arc::new(g) }
    }

    /// `L(m)`: every entry of the Gram matrix multiplied by `m`.
    pub fn rescale(&self, m: i64) -> Result<Lattice> {
        if m == 0 {
            return Err(Error::ZeroScale);
        }
        Ok(Lattice { gram: Arc::new(self.gram.scale(&zi(m))) })
    }

    /// The rank-one lattice `<k>`.
    pub fn rank_one(k: i64) -> Lattice {
        Lattice { gram: Arc::new(ZMatrix::from_fn(1, 1, |_, _| zi(k))) }
    }

    pub fn rank_one_big(k: BigInt) -> Lattice {
        Lattice { gram: Arc::new(ZMatrix::from_fn(1, 1, |_, _| k.clone())) }
    }

    /// Named block scaled by `scale`; E8 and A_n use the positive-definite
    /// root lattice Gram.
    pub fn standard(name: StandardName, scale: i64) -> Result<Lattice> {
        if scale == 0 {
            return Err(Error::ZeroScale);
        }
        let base = match name {
            StandardName::U => ZMatrix::from_fn(2, 2, |i, j| zi((i != j) as i64)),
            StandardName::E8 => ZMatrix::from_fn(8, 8, |i, j| zi(E8_CARTAN[i][j])),
            StandardName::A(n) => ZMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    zi(2)
                } else if i.abs_diff(j) == 1 {
                    zi(-1)
                } else {
                    zi(0)
                }
            }),
        };
        Ok(Lattice { gram: Arc::new(base.scale(&zi(scale))) })
    }

    pub fn standard_named(name: &str, scale: i64) -> Result<Lattice> {
        Self::standard(name.parse()?, scale)
    }

    pub fn u() -> Lattice {
        Self::standard(StandardName::U, 1).expect("U")
    }

    pub fn e8(scale: i64) -> Lattice {
        Self::standard(StandardName::E8, scale).expect("E8")
    }

    /// U^3 + E8(-1)^2, the even unimodular lattice of signature (3, 19).
    pub fn k3() -> Lattice {
        let u = Self::u();
        let e = Self::e8(-1);
        Self::direct_sum_all(&[u.clone(), u.clone(), u, e.clone(), e])
    }

    /// U + E8(-1), the even unimodular lattice of signature (1, 9).
    pub fn enriques() -> Lattice {
        Self::u().direct_sum(&Self::e8(-1))
    }

    /// Lattice registry: `U`, `E8`, `E8(-1)`, `A<n>`, `K3`, `Enriques`,
    /// `Kum_<n>_<d>` (U^3 + <-2(n+1)>) and `Hilb_<n>` (K3 + <-2(n-1)>).
    pub fn named(name: &str) -> Result<Lattice> {
        match name {
            "K3" => return Ok(Self::k3()),
            "Enriques" => return Ok(Self::enriques()),
            "E8(-1)" => return Ok(Self::e8(-1)),
            "E8(-2)" => return Ok(Self::e8(-2)),
            _ => {}
        }
        if let Some(rest) = name.strip_prefix("Kum_") {
            let parts: Vec<&str> = rest.split('_').collect();
            if let [n, _d] = parts[..] {
                let n: i64 = n.parse().map_err(|_| Error::UnknownName(name.into()))?;
                let u = Self::u();
                return Ok(Self::direct_sum_all(&[u.clone(), u.clone(), u, Self::rank_one(-2 * (n + 1))]));
            }
            return Err(Error::UnknownName(name.into()));
        }
        if let Some(n) = name.strip_prefix("Hilb_") {
            let n: i64 = n.parse().map_err(|_| Error::UnknownName(name.into()))?;
            return Ok(Self::k3().direct_sum(&Self::rank_one(-2 * (n - 1))));
        }
        Self::standard_named(name, 1)
    }

    pub fn to_json(&self) -> Value {
        json!({ "rank": self.rank(), "gram": int_matrix_to_json(&self.gram) })
    }

    /// Parse `{"rank": n, "gram": [...]}` or a registry name string.
    pub fn from_json(v: &Value) -> Result<Lattice> {
        if let Some(name) = v.as_str() {
            return Self::named(name);
        }
        let gram = json_to_int_matrix(&v["gram"])?;
        if let Some(rank) = v.get("rank").and_then(|r| r.as_u64()) {
            if rank as usize != gram.rows() {
                return Err(Error::DimensionMismatch(format!("rank {rank} but Gram has {} rows", gram.rows())));
            }
        }
        Self::new(gram)
    }
}

/// A sublattice given by a basis in ambient coordinates (one generator per
/// row).
#[derive(Clone, Debug)]
pub struct Sublattice {
    ambient: Lattice,
    basis: ZMatrix,
    index_in_saturation: BigInt,
}

impl Sublattice {
    pub fn new(ambient: &Lattice, basis: ZMatrix) -> Result<Self> {
        if basis.cols() != ambient.rank() {
            return Err(Error::DimensionMismatch(format!(
                "basis has {} columns, ambient rank is {}",
                basis.cols(),
                ambient.rank()
            )));
        }
        if basis.rank() != basis.rows() {
            return Err(Error::NotASublattice);
        }
        let sat = saturation_basis(&basis);
        let index = index_in(&basis, &sat);
        Ok(Sublattice { ambient: ambient.clone(), basis, index_in_saturation: index })
    }

    pub(crate) fn primitive_unchecked(ambient: &Lattice, basis: ZMatrix) -> Self {
        Sublattice { ambient: ambient.clone(), basis, index_in_saturation: BigInt::one() }
    }

    pub fn zero(ambient: &Lattice) -> Self {
        Self::primitive_unchecked(ambient, ZMatrix::empty(ambient.rank()))
    }

    pub fn whole(ambient: &Lattice) -> Self {
        Self::primitive_unchecked(ambient, ZMatrix::identity(ambient.rank()))
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &ZMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_primitive(&self) -> bool {
        self.index_in_saturation.is_one()
    }

    pub fn index_in_saturation(&self) -> &BigInt {
        &self.index_in_saturation
    }

    /// `(Q * sub) ∩ L` together with its HNF basis.
    pub fn saturate(&self) -> Sublattice {
        Sublattice::primitive_unchecked(&self.ambient, saturation_basis(&self.basis))
    }

    /// Canonical HNF basis of the same Z-span.
    pub fn hnf_basis(&self) -> ZMatrix {
        self.basis.hnf()
    }

    /// Gram matrix `B G B^T` of the restricted form.
    pub fn restrict_form(&self) -> Lattice {
        let b = &self.basis;
        let g = b.mul(self.ambient.gram()).mul(&b.transpose());
        Lattice { gram: Arc::new(g) }
    }

    /// `{x in L : (x, s) = 0 for all s in sub}`, always primitive.
    pub fn orthogonal_complement(&self) -> Sublattice {
        let bg = self.basis.mul(self.ambient.gram());
        let k = if bg.rows() == 0 { ZMatrix::identity(self.ambient.rank()) } else { bg.integer_kernel() };
        Sublattice::primitive_unchecked(&self.ambient, k)
    }

    /// True when both bases span the same Z-module.
    pub fn same_span(&self, other: &Sublattice) -> bool {
        self.ambient == other.ambient && self.basis.hnf() == other.basis.hnf()
    }

    /// Coordinates of an ambient vector with respect to the basis, if it lies
    /// in the rational span.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigRational>> {
        let vq: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        self.basis.to_q().solve_rows(&vq)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some_and(|c| c.iter().all(|x| x.is_integer()))
    }

    /// Map coordinates with respect to the basis back to ambient coordinates.
    pub fn to_ambient(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.basis.transpose().mul_vec(coords)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient": self.ambient.to_json(),
            "basis": int_matrix_to_json(&self.basis),
            "primitive": self.is_primitive(),
            "index_in_saturation": int_to_json(&self.index_in_saturation),
        })
    }
}

/// Convenience wrapper matching the free-function style used by the CLI.
pub fn orthogonal_complement(l: &Lattice, sub: &Sublattice) -> Result<Sublattice> {
    if sub.ambient() != l {
        return Err(Error::DimensionMismatch("sublattice lives in a different lattice".into()));
    }
    Ok(sub.orthogonal_complement())
}

fn saturation_basis(basis: &ZMatrix) -> ZMatrix {
    let n = basis.cols();
    if basis.rows() == 0 {
        return ZMatrix::empty(n);
    }
    let k = basis.integer_kernel();
    if k.rows() == 0 {
        return ZMatrix::identity(n);
    }
    k.integer_kernel()
}

/// |det C| where `sub = C * sat`.
fn index_in(sub: &ZMatrix, sat: &ZMatrix) -> BigInt {
    let satq = sat.to_q();
    let k = sub.rows();
    let mut c = QMatrix::zeros(k, sat.rows());
    for r in 0..k {
        let v: Vec<BigRational> = sub.row(r).iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let coords = satq.solve_rows(&v).expect("sublattice lies in its saturation");
        for (j, x) in coords.into_iter().enumerate() {
            c[(r, j)] = x;
        }
    }
    c.det().to_integer().abs()
}
