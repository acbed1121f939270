//! The induced action on the second exterior power of a rank-4 lattice, and
//! the multiplication parts of the bielliptic actions of order 2, 3 and 4.
//!
//! `H^1` of a product of elliptic curves `E x F` has basis `(e1, e2)` from
//! `E` and `(e3, e4)` from `F`. The wedge pairing `a . b = coefficient of
//! e1^e2^e3^e4 in a^b` makes `Lambda^2 Z^4` a copy of `U^3`; the
//! identification used here is
//!
//! ```text
//! (u1, v1) = (e1^e2,  e3^e4)
//! (u2, v2) = (e1^e3, -e2^e4)
//! (u3, v3) = (e1^e4,  e2^e3)
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::{zi, ZMatrix};

/// Ordered basis pairs `(i, j)` of `Lambda^2 Z^4`: e12, e13, e14, e23, e24, e34.
pub const WEDGE_BASIS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Matrix of `Lambda^2 m` in the basis [`WEDGE_BASIS`].
pub fn wedge_square(m: &ZMatrix) -> Result<ZMatrix> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "wedge_square needs a 4x4 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(ZMatrix::from_fn(6, 6, |r, c| {
        let (i, j) = WEDGE_BASIS[r];
        let (k, l) = WEDGE_BASIS[c];
        &m[(i, k)] * &m[(j, l)] - &m[(j, k)] * &m[(i, l)]
    }))
}

/// Gram matrix of the wedge pairing in the basis [`WEDGE_BASIS`].
pub fn wedge_pairing() -> ZMatrix {
    let mut g = ZMatrix::zeros(6, 6);
    for (a, b, s) in [(0, 5, 1), (1, 4, -1), (2, 3, 1)] {
        g[(a, b)] = zi(s);
        g[(b, a)] = zi(s);
    }
    g
}

/// Columns are the `U^3` basis vectors `(u1, v1, u2, v2, u3, v3)` written in
/// wedge coordinates.
pub fn wedge_to_u3() -> ZMatrix {
    let mut c = ZMatrix::zeros(6, 6);
    for (col, row, s) in [(0, 0, 1), (1, 5, 1), (2, 1, 1), (3, 4, -1), (4, 2, 1), (5, 3, 1)] {
        c[(row, col)] = zi(s);
    }
    c
}

/// `Lambda^2 m` expressed in `U^3` coordinates.
pub fn wedge_square_u3(m: &ZMatrix) -> Result<ZMatrix> {
    let c = wedge_to_u3();
    Ok(c.transpose().mul(&wedge_square(m)?).mul(&c))
}

/// Pullback on `H^1(E x F)` of the multiplication part `(x, y) -> (x, zeta_d y)`
/// of the order-`d` bielliptic action. Translations act trivially on
/// cohomology and are omitted.
pub fn bdf_multiplication(d: u32) -> Result<ZMatrix> {
    let f: [[i64; 2]; 2] = match d {
        2 => [[-1, 0], [0, -1]],
        // zeta_3 on Z[zeta_3] in the basis (1, zeta_3), transposed for the pullback.
        3 => [[0, 1], [-1, -1]],
        4 => [[0, 1], [-1, 0]],
        _ => return Err(Error::BadParameters(format!("no bielliptic multiplication of order {d} in this model"))),
    };
    let mut m = ZMatrix::identity(4);
    for i in 0..2 {
        for j in 0..2 {
            m[(2 + i, 2 + j)] = BigInt::from(f[i][j]);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    #[test]
    fn identity_and_negation() {
        assert_eq!(wedge_square(&ZMatrix::identity(4)).unwrap(), ZMatrix::identity(6));
        assert_eq!(wedge_square(&ZMatrix::identity(4).scale(&zi(-1))).unwrap(), ZMatrix::identity(6));
    }

    #[test]
    fn identification_is_u_cubed() {
        let c = wedge_to_u3();
        let u = Lattice::u();
        let u3 = Lattice::direct_sum_all(&[u.clone(), u.clone(), u]);
        assert_eq!(c.transpose().mul(&wedge_pairing()).mul(&c), *u3.gram());
    }

    #[test]
    fn bdf_actions_preserve_the_form() {
        let w = wedge_pairing();
        for d in [2, 3, 4] {
            let m = bdf_multiplication(d).unwrap();
            let l = wedge_square(&m).unwrap();
            assert_eq!(l.transpose().mul(&w).mul(&l), w, "d = {d}");
            assert_eq!(l.pow(d as u64), ZMatrix::identity(6));
        }
        assert!(bdf_multiplication(5).is_err());
    }

    #[test]
    fn fixed_part_is_unimodular_u() {
        let u = Lattice::u();
        let u3 = Lattice::direct_sum_all(&[u.clone(), u.clone(), u]);
        for d in [2, 3, 4] {
            let g = crate::group::close_group(
                &[crate::group::Isometry::new(&u3, wedge_square_u3(&bdf_multiplication(d).unwrap()).unwrap()).unwrap()],
                10,
            )
            .unwrap();
            let inv = crate::group::invariant_sublattice(&g);
            assert_eq!(inv.hnf_basis(), ZMatrix::identity(6).select_rows(&[0, 1]), "d = {d}");
            assert_eq!(inv.restrict_form(), Lattice::u());
        }
    }

    #[test]
    fn wrong_shape() {
        assert!(wedge_square(&ZMatrix::identity(3)).is_err());
    }
}
