//! Decomposition of `L (x) Q` into rational isotypic components, with the real
//! irreducible types contained in each.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::characters::CHARACTER_TABLE_CAP;
use super::ActionGroup;
use crate::error::{Error, Result};
use crate::json::int_matrix_to_json;
use crate::matrix::{QMatrix, ZMatrix};
use crate::poly::{cyclotomic, divisors, eval_matrix};

/// A real irreducible representation type: a self-conjugate character
/// (`indicator` 1 or -1) or a pair of complex-conjugate characters
/// (`indicator` 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealType {
    pub id: usize,
    pub label: String,
    pub characters: Vec<usize>,
    pub degree: usize,
    pub indicator: i32,
    /// Dimension of the real irreducible module.
    pub real_dim: usize,
    /// Index of the rational component containing this type.
    pub rational: usize,
}

#[derive(Clone, Debug)]
pub struct IsotypicComponent {
    pub id: usize,
    pub label: String,
    /// Real types whose isotypic parts add up to this component.
    pub real_types: Vec<usize>,
    /// Primitive integer basis (rows, ambient coordinates).
    pub basis: ZMatrix,
}

impl IsotypicComponent {
    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "label": self.label,
            "rank": self.rank(),
            "real_types": self.real_types,
            "basis": int_matrix_to_json(&self.basis),
        })
    }
}

/// Result of the decomposition: real types and rational components.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub real_types: Vec<RealType>,
    pub components: Vec<IsotypicComponent>,
}

impl Decomposition {
    pub fn trivial_component(&self) -> Option<&IsotypicComponent> {
        self.components.iter().find(|c| c.label == "trivial")
    }
}

pub fn isotypic_components(g: &ActionGroup) -> Result<Vec<IsotypicComponent>> {
    Ok(decompose(g)?.components)
}

/// Character-table path for `|G| <= 1024`; cyclotomic kernels of a generator
/// for larger cyclic groups.
pub fn decompose(g: &ActionGroup) -> Result<Decomposition> {
    if g.order() <= CHARACTER_TABLE_CAP {
        decompose_by_characters(g)
    } else if let Some(gen) = g.cyclic_generator() {
        Ok(decompose_cyclic(g, gen))
    } else {
        Err(Error::OrderCapExceeded { cap: CHARACTER_TABLE_CAP })
    }
}

fn real_types_of(g: &ActionGroup) -> Result<(Vec<RealType>, Vec<Vec<usize>>)> {
    let t = g.character_table()?;
    let orbits = t.galois_orbits();
    let linear_real: Vec<usize> =
        (0..t.characters.len()).filter(|&c| t.characters[c].degree == 1 && t.frobenius_schur(c) == 1).collect();
    let mut types = Vec::new();
    for (oi, orbit) in orbits.iter().enumerate() {
        let mut seen = Vec::new();
        for &chi in orbit {
            if seen.contains(&chi) {
                continue;
            }
            let conj = t.conjugate(chi);
            seen.push(chi);
            seen.push(conj);
            let ind = t.frobenius_schur(chi);
            let degree = t.characters[chi].degree;
            let is_trivial = degree == 1 && t.characters[chi].values.iter().all(|v| v[0] == 1);
            let kind = match ind {
                1 => "real",
                0 => "complex",
                _ => "quaternionic",
            };
            let label = if is_trivial {
                "trivial".to_string()
            } else if degree == 1 && ind == 1 && linear_real.len() == 2 {
                "sign".to_string()
            } else {
                format!("deg{degree}-{kind}-{}", types.len())
            };
            let mut chars = vec![chi];
            if conj != chi {
                chars.push(conj);
            }
            types.push(RealType {
                id: types.len(),
                label,
                characters: chars,
                degree,
                indicator: ind,
                real_dim: if ind == 1 { degree } else { 2 * degree },
                rational: oi,
            });
        }
    }
    Ok((types, orbits))
}

fn decompose_by_characters(g: &ActionGroup) -> Result<Decomposition> {
    let (real_types, orbits) = real_types_of(g)?;
    let t = g.character_table()?;
    let n = g.rank();
    let order = g.order();
    let cl = g.classes();
    let mut components = Vec::new();
    let mut total = ZMatrix::zeros(n, n);
    for (oi, orbit) in orbits.iter().enumerate() {
        let degree = t.characters[orbit[0]].degree;
        let psi: Vec<i64> = (0..t.num_classes())
            .map(|c| {
                let v = t.orbit_value(orbit, c);
                debug_assert!(v.is_integer());
                v.to_integer().to_i64().expect("small character value")
            })
            .collect();
        // S = sum_g psi(g^{-1}) g, accumulated in i128.
        let mut s = vec![0i128; n * n];
        for x in 0..order {
            let w = psi[cl.class_of[cl.inverse[x]]] as i128;
            if w == 0 {
                continue;
            }
            for (acc, &v) in s.iter_mut().zip(g.raw(x)) {
                *acc += w * v as i128;
            }
        }
        let ds = ZMatrix::from_fn(n, n, |r, c| BigInt::from(s[r * n + c]) * BigInt::from(degree));
        let big_n = BigInt::from(order);
        // e = ds / N must be idempotent: ds^2 = N ds.
        if ds.mul(&ds) != ds.scale(&big_n) {
            return Err(Error::Invalid(format!("projector for component {oi} is not idempotent")));
        }
        total = total.add(&ds);
        let kernel_of = ZMatrix::identity(n).scale(&big_n).sub(&ds);
        let basis = if kernel_of.is_zero() { ZMatrix::identity(n) } else { kernel_of.integer_kernel() };
        let types: Vec<usize> = real_types.iter().filter(|r| r.rational == oi).map(|r| r.id).collect();
        let label = if types.len() == 1 {
            real_types[types[0]].label.clone()
        } else {
            format!("rational-{}", types.iter().map(|&i| real_types[i].label.clone()).collect::<Vec<_>>().join("+"))
        };
        if basis.rows() > 0 {
            components.push(IsotypicComponent { id: oi, label, real_types: types, basis });
        }
    }
    if total != ZMatrix::identity(n).scale(&BigInt::from(order)) {
        return Err(Error::Invalid("isotypic projectors do not sum to the identity".into()));
    }
    Ok(Decomposition { real_types, components })
}

/// Rational components `ker Phi_k(g)`, `k | ord(g)`, for a cyclic group.
fn decompose_cyclic(g: &ActionGroup, gen: usize) -> Decomposition {
    let d = g.order() as u64;
    let m = g.element(gen);
    let mut real_types = Vec::new();
    let mut components = Vec::new();
    for (ci, k) in divisors(d).into_iter().enumerate() {
        let phi = eval_matrix(&cyclotomic(k), &m);
        let basis = if phi.is_zero() { ZMatrix::identity(g.rank()) } else { phi.integer_kernel() };
        let label = match k {
            1 => "trivial".to_string(),
            2 => "sign".to_string(),
            _ => format!("Phi_{k}"),
        };
        let mut ids = Vec::new();
        for a in (1..=k).filter(|a| a.gcd(&k) == 1 && 2 * a <= k.max(2)) {
            ids.push(real_types.len());
            real_types.push(RealType {
                id: real_types.len(),
                label: if k <= 2 { label.clone() } else { format!("rot_{a}/{k}") },
                characters: Vec::new(),
                degree: 1,
                indicator: if k <= 2 { 1 } else { 0 },
                real_dim: if k <= 2 { 1 } else { 2 },
                rational: ci,
            });
        }
        if basis.rows() > 0 {
            components.push(IsotypicComponent { id: ci, label, real_types: ids, basis });
        }
    }
    Decomposition { real_types, components }
}

/// Projection `e_O` onto a rational component as a rational matrix.
pub fn projector(g: &ActionGroup, component: &IsotypicComponent) -> Result<QMatrix> {
    let t = g.character_table()?;
    let orbit = t.galois_orbits().swap_remove(component.id);
    let n = g.rank();
    let cl = g.classes();
    let degree = t.characters[orbit[0]].degree;
    let mut e = QMatrix::zeros(n, n);
    for x in 0..g.order() {
        let w = t.orbit_value(&orbit, cl.class_of[cl.inverse[x]]);
        if w.is_zero() {
            continue;
        }
        e = e.add(&g.element(x).to_q().scale(&w));
    }
    Ok(e.scale(&BigRational::new(BigInt::from(degree), BigInt::from(g.order()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{close_group, Isometry};
    use crate::lattice::Lattice;
    use crate::matrix::z_from_i64_rows;

    #[test]
    fn trivial_group_single_component() {
        let g = ActionGroup::trivial(&Lattice::u());
        let d = decompose(&g).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].label, "trivial");
        assert_eq!(d.components[0].rank(), 2);
    }

    #[test]
    fn swap_on_u() {
        let u = Lattice::u();
        let s = Isometry::new(&u, z_from_i64_rows(&[vec![0, 1], vec![1, 0]])).unwrap();
        let g = close_group(&[s], 10).unwrap();
        let d = decompose(&g).unwrap();
        let labels: Vec<&str> = d.components.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, vec!["trivial", "sign"]);
        assert_eq!(d.components[1].basis, z_from_i64_rows(&[vec![1, -1]]));
        let p = projector(&g, &d.components[0]).unwrap();
        assert_eq!(p.mul(&p), p);
    }

    #[test]
    fn cyclic_paths_agree() {
        let l =
            Lattice::from_i64(&(0..6).map(|i| (0..6).map(|j| (i == j) as i64).collect()).collect::<Vec<_>>()).unwrap();
        let rows: Vec<Vec<i64>> = (0..6).map(|i| (0..6).map(|j| ((j + 1) % 6 == i) as i64).collect()).collect();
        let g = close_group(&[Isometry::new(&l, z_from_i64_rows(&rows)).unwrap()], 10).unwrap();
        let a = decompose_by_characters(&g).unwrap();
        let b = decompose_cyclic(&g, g.cyclic_generator().unwrap());
        assert_eq!(a.components.len(), b.components.len());
        let mut ra: Vec<ZMatrix> = a.components.iter().map(|c| c.basis.hnf()).collect();
        let mut rb: Vec<ZMatrix> = b.components.iter().map(|c| c.basis.hnf()).collect();
        ra.sort_by_key(|m| format!("{m:?}"));
        rb.sort_by_key(|m| format!("{m:?}"));
        assert_eq!(ra, rb);
        assert_eq!(a.real_types.len(), b.real_types.len());
    }
}
