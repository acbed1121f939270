//! Eigenvalue multiplicities of a finite-order isometry.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde_json::{json, Value};

use super::Isometry;
use crate::error::Result;
use crate::poly::{char_poly, cyclotomic, div_exact, divisors};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDecomposition {
    pub d: usize,
    /// `dims[i]` is the multiplicity of the eigenvalue `exp(2 pi i * i / d)`.
    pub dims: BTreeMap<usize, usize>,
    /// Multiplicity of each cyclotomic factor `Phi_k`, `k | d`.
    pub cyclotomic_multiplicities: BTreeMap<usize, usize>,
}

impl WeightDecomposition {
    pub fn dim(&self, i: usize) -> usize {
        self.dims.get(&(i % self.d)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "dims": self.dims.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

/// Factor the characteristic polynomial into cyclotomic polynomials `Phi_k`
/// with `k | d`, where `d` is the order of `g` (at most `cap`).
pub fn weight_decomposition(g: &Isometry, cap: usize) -> Result<WeightDecomposition> {
    let d = g.order(cap)?;
    let mut p = char_poly(g.matrix());
    let mut mult = BTreeMap::new();
    for k in divisors(d as u64) {
        let phi = cyclotomic(k);
        let mut m = 0;
        while let Some(q) = div_exact(&p, &phi) {
            p = q;
            m += 1;
        }
        mult.insert(k as usize, m);
    }
    debug_assert_eq!(p.len(), 1, "characteristic polynomial of a finite-order matrix splits into cyclotomics");
    let dims = (0..d).map(|i| (i, mult[&(d / i.gcd(&d))])).collect();
    Ok(WeightDecomposition { d, dims, cyclotomic_multiplicities: mult })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::matrix::{z_from_i64_rows, ZMatrix};

    #[test]
    fn identity_is_weight_zero() {
        let w = weight_decomposition(&Isometry::identity(&Lattice::e8(-1)), 10).unwrap();
        assert_eq!(w.d, 1);
        assert_eq!(w.dims, BTreeMap::from([(0, 8)]));
    }

    #[test]
    fn rotation_of_order_four() {
        let l = Lattice::from_i64(&[vec![1, 0], vec![0, 1]]).unwrap();
        let r = Isometry::new(&l, z_from_i64_rows(&[vec![0, -1], vec![1, 0]])).unwrap();
        let w = weight_decomposition(&r, 10).unwrap();
        assert_eq!(w.d, 4);
        assert_eq!(w.dims, BTreeMap::from([(0, 0), (1, 1), (2, 0), (3, 1)]));
    }

    #[test]
    fn infinite_order_is_rejected() {
        let u = Lattice::u();
        let m = ZMatrix::identity(2).scale(&2.into());
        let fake = Isometry::new_unchecked(&u, m);
        assert!(weight_decomposition(&fake, 50).is_err());
    }
}
