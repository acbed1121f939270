//! Complex character tables of small finite groups by Dixon's method: the
//! class-multiplication matrices are diagonalized simultaneously over a prime
//! field `F_p` with `p = 1 mod exponent`, and the values are lifted back to
//! sums of roots of unity.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::ActionGroup;
use crate::error::{Error, Result};
use crate::poly::{euler_phi, mobius};

/// Largest group order for which a character table is computed.
pub const CHARACTER_TABLE_CAP: usize = 1024;

/// An irreducible complex character. `values[c][j]` is the multiplicity of
/// `exp(2 pi i j / e)` in the value on class `c`, where `e` is the exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub degree: usize,
    pub values: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub order: usize,
    pub exponent: usize,
    /// Representative element index of each class.
    pub class_reps: Vec<usize>,
    pub class_sizes: Vec<usize>,
    /// `power_map[c][s]` is the class of `rep_c^s`, for `0 <= s < exponent`.
    pub power_map: Vec<Vec<usize>>,
    pub inverse_class: Vec<usize>,
    pub characters: Vec<Character>,
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn primitive_root(p: u64) -> u64 {
    let fs = prime_factors(p - 1);
    (2..p).find(|&g| fs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).expect("primitive root exists")
}

/// Reduced row echelon basis (rows) of a span over `F_p`.
fn echelon(mut rows: Vec<Vec<u64>>, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let f = rows[k][c];
                for j in 0..ncols {
                    rows[k][j] = (rows[k][j] + p - f * rows[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Right kernel of a square matrix over `F_p`, as row vectors.
fn kernel_mod(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let (e, pivots) = echelon(a.to_vec(), p);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in e.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (low to high) over `F_p`, by Faddeev–LeVerrier.
fn char_poly_mod(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mul = |x: &Vec<Vec<u64>>, y: &Vec<Vec<u64>>| -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; n]; n];
        for i in 0..n {
            for k in 0..n {
                if x[i][k] == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i][j] = (out[i][j] + x[i][k] * y[k][j]) % p;
                }
            }
        }
        out
    };
    let mut c = vec![0u64; n + 1];
    c[n] = 1;
    let mut m = vec![vec![0u64; n]; n];
    let am: Vec<Vec<u64>> = a.to_vec();
    for k in 1..=n {
        let mut next = mul(&am, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = (row[i] + c[n - k + 1]) % p;
        }
        m = next;
        let prod = mul(&am, &m);
        let tr = (0..n).fold(0, |s, i| (s + prod[i][i]) % p);
        c[n - k] = (p - tr * inv_mod(k as u64, p) % p) % p;
    }
    c
}

fn eval_mod(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

impl CharacterTable {
    pub(crate) fn compute(g: &ActionGroup) -> Result<Self> {
        let order = g.order();
        if order > CHARACTER_TABLE_CAP {
            return Err(Error::OrderCapExceeded { cap: CHARACTER_TABLE_CAP });
        }
        let cl = g.classes();
        let r = cl.members.len();
        let class_reps: Vec<usize> = cl.members.iter().map(|m| m[0]).collect();
        let class_sizes: Vec<usize> = cl.members.iter().map(|m| m.len()).collect();
        let rep_orders: Vec<usize> = class_reps.iter().map(|&x| g.element_order(x)).collect();
        let exponent = rep_orders.iter().fold(1usize, |a, &b| num_integer::lcm(a, b));

        // power_map[c][s] = class of rep^s
        let mut power_map = vec![vec![0usize; exponent]; r];
        for c in 0..r {
            let mut cur = 0usize;
            for s in 0..exponent {
                power_map[c][s] = cl.class_of[cur];
                cur = g.mul_idx(cur, class_reps[c]);
            }
        }
        let inverse_class: Vec<usize> = class_reps.iter().map(|&x| cl.class_of[cl.inverse[x]]).collect();

        let e = exponent as u64;
        let mut p = e * ((2 * order as u64) / e + 1) + 1;
        while !is_prime(p) {
            p += e;
        }
        let z = pow_mod(primitive_root(p), (p - 1) / e, p);

        // a[j][i][l] = #{x in C_j : x^{-1} z_l in C_i}
        let mut a = vec![vec![vec![0u64; r]; r]; r];
        for (j, mem) in cl.members.iter().enumerate() {
            for &x in mem {
                let xi = cl.inverse[x];
                for l in 0..r {
                    let y = g.mul_idx(xi, class_reps[l]);
                    a[j][cl.class_of[y]][l] += 1;
                }
            }
        }

        // Simultaneous eigenvectors w (columns) of all M_j with (M_j)_{il} = a[j][i][l].
        let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r).map(|i| (0..r).map(|k| (i == k) as u64).collect()).collect()];
        for j in 1..r {
            if spaces.iter().all(|s| s.len() == 1) {
                break;
            }
            let mut next = Vec::new();
            for space in spaces {
                if space.len() == 1 {
                    next.push(space);
                    continue;
                }
                let (basis, pivots) = echelon(space, p);
                let k = basis.len();
                // R[s][t]: coordinate s of M_j b_t
                let mut rm = vec![vec![0u64; k]; k];
                for (t, b) in basis.iter().enumerate() {
                    for (s, &pc) in pivots.iter().enumerate() {
                        let v = (0..r).fold(0u64, |acc, l| (acc + (a[j][pc][l] % p) * b[l]) % p);
                        rm[s][t] = v;
                    }
                }
                let cp = char_poly_mod(&rm, p);
                for lambda in 0..p {
                    if eval_mod(&cp, lambda, p) != 0 {
                        continue;
                    }
                    let shifted: Vec<Vec<u64>> = (0..k)
                        .map(|s| (0..k).map(|t| if s == t { (rm[s][t] + p - lambda) % p } else { rm[s][t] }).collect())
                        .collect();
                    let ker = kernel_mod(&shifted, p);
                    let vecs: Vec<Vec<u64>> = ker
                        .iter()
                        .map(|c| {
                            (0..r).fold(vec![0u64; r], |mut acc, l| {
                                for (t, b) in basis.iter().enumerate() {
                                    acc[l] = (acc[l] + c[t] * b[l]) % p;
                                }
                                acc
                            })
                        })
                        .collect();
                    next.push(vecs);
                }
            }
            spaces = next;
        }
        if spaces.len() != r || spaces.iter().any(|s| s.len() != 1) {
            return Err(Error::Invalid("class algebra did not split into one-dimensional eigenspaces".into()));
        }

        let n_mod = order as u64 % p;
        let mut characters = Vec::with_capacity(r);
        for s in &spaces {
            let w0 = s[0][0];
            if w0 == 0 {
                return Err(Error::Invalid("eigenvector vanishes at the identity class".into()));
            }
            let inv0 = inv_mod(w0, p);
            let w: Vec<u64> = s[0].iter().map(|x| x * inv0 % p).collect();
            let sum = (0..r).fold(0u64, |acc, l| {
                (acc + w[l] * w[inverse_class[l]] % p * inv_mod(class_sizes[l] as u64 % p, p)) % p
            });
            let deg_sq = n_mod * inv_mod(sum, p) % p;
            let degree = (1..=order)
                .take_while(|d| d * d <= order)
                .find(|&d| (d * d) as u64 % p == deg_sq)
                .ok_or_else(|| Error::Invalid("no integer degree matches the class-algebra eigenvector".into()))?;
            let chi_mod: Vec<u64> =
                (0..r).map(|l| w[l] * (degree as u64) % p * inv_mod(class_sizes[l] as u64 % p, p) % p).collect();
            let inv_e = inv_mod(e, p);
            let zinv = inv_mod(z, p);
            let mut values = Vec::with_capacity(r);
            for c in 0..r {
                let mut mult = vec![0u32; exponent];
                for (jj, m) in mult.iter_mut().enumerate() {
                    let zj = pow_mod(zinv, jj as u64, p);
                    let mut acc = 0u64;
                    let mut zs = 1u64;
                    for s in 0..exponent {
                        acc = (acc + chi_mod[power_map[c][s]] * zs) % p;
                        zs = zs * zj % p;
                    }
                    let v = acc * inv_e % p;
                    if v as usize > degree {
                        return Err(Error::Invalid("character value does not lift to roots of unity".into()));
                    }
                    *m = v as u32;
                }
                values.push(mult);
            }
            characters.push(Character { degree, values });
        }
        characters.sort_by(|x, y| {
            let triv = |c: &Character| !(c.degree == 1 && c.values.iter().all(|v| v[0] == 1));
            (triv(x), x.degree, &x.values).cmp(&(triv(y), y.degree, &y.values))
        });
        Ok(CharacterTable { order, exponent, class_reps, class_sizes, power_map, inverse_class, characters })
    }

    pub fn num_classes(&self) -> usize {
        self.class_reps.len()
    }

    /// Complex value of character `chi` on class `c`.
    pub fn value(&self, chi: usize, c: usize) -> (f64, f64) {
        let e = self.exponent as f64;
        self.characters[chi].values[c].iter().enumerate().fold((0.0, 0.0), |(re, im), (j, &m)| {
            let t = 2.0 * PI * j as f64 / e;
            (re + m as f64 * t.cos(), im + m as f64 * t.sin())
        })
    }

    /// Index of the complex conjugate character.
    pub fn conjugate(&self, chi: usize) -> usize {
        self.galois_image(chi, self.exponent - 1)
    }

    /// Index of `g -> chi(g^t)` for `t` coprime to the exponent.
    pub fn galois_image(&self, chi: usize, t: usize) -> usize {
        let target: Vec<Vec<u32>> = (0..self.num_classes())
            .map(|c| self.characters[chi].values[self.power_map[c][t % self.exponent]].clone())
            .collect();
        self.characters.iter().position(|x| x.values == target).expect("Galois conjugate is a character")
    }

    /// Orbits of the characters under `Gal(Q(zeta_e)/Q)`.
    pub fn galois_orbits(&self) -> Vec<Vec<usize>> {
        let e = self.exponent;
        let units: Vec<usize> = (1..=e.max(1)).filter(|t| num_integer::gcd(*t, e) == 1).collect();
        let mut seen = vec![false; self.characters.len()];
        let mut out = Vec::new();
        for chi in 0..self.characters.len() {
            if seen[chi] {
                continue;
            }
            let mut orbit: Vec<usize> = units.iter().map(|&t| self.galois_image(chi, t)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &o in &orbit {
                seen[o] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Frobenius–Schur indicator `(1/|G|) sum chi(g^2)`: 1 real, 0 complex,
    /// -1 quaternionic.
    pub fn frobenius_schur(&self, chi: usize) -> i32 {
        let s: f64 = (0..self.num_classes())
            .map(|c| self.class_sizes[c] as f64 * self.value(chi, self.power_map[c][2 % self.exponent]).0)
            .sum();
        (s / self.order as f64).round() as i32
    }

    /// Exact rational value of `sum_{chi in orbit} chi` on class `c`.
    pub fn orbit_value(&self, orbit: &[usize], c: usize) -> BigRational {
        let e = self.exponent as u64;
        let chi = orbit[0];
        let mut acc = BigRational::zero();
        for (j, &m) in self.characters[chi].values[c].iter().enumerate() {
            if m == 0 {
                continue;
            }
            let g = num_integer::gcd(j as u64, e);
            let k = e / g;
            let ramanujan = BigRational::new(BigInt::from(mobius(k)), BigInt::from(euler_phi(k)));
            acc += ramanujan * BigRational::from_integer(BigInt::from(m));
        }
        acc * BigRational::from_integer(BigInt::from(orbit.len()))
    }

    /// Multiplicity of each character in a class function given by complex
    /// values on the classes.
    pub fn decompose(&self, class_function: &[(f64, f64)]) -> Vec<f64> {
        (0..self.characters.len())
            .map(|chi| {
                let s: f64 = (0..self.num_classes())
                    .map(|c| {
                        let (a, b) = class_function[c];
                        let (x, y) = self.value(chi, c);
                        self.class_sizes[c] as f64 * (a * x + b * y)
                    })
                    .sum();
                s / self.order as f64
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{close_group, Isometry};
    use crate::lattice::Lattice;
    use crate::matrix::z_from_i64_rows;

    fn orthonormal(n: usize) -> Lattice {
        Lattice::from_i64(&(0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect::<Vec<_>>()).unwrap()
    }

    fn perm(n: usize, p: &[usize]) -> Isometry {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (p[j] == i) as i64).collect()).collect();
        Isometry::new(&orthonormal(n), z_from_i64_rows(&rows)).unwrap()
    }

    fn check_orthogonality(t: &CharacterTable) {
        for a in 0..t.characters.len() {
            for b in 0..t.characters.len() {
                let s: f64 = (0..t.num_classes())
                    .map(|c| {
                        let (x, y) = t.value(a, c);
                        let (u, v) = t.value(b, c);
                        t.class_sizes[c] as f64 * (x * u + y * v)
                    })
                    .sum::<f64>()
                    / t.order as f64;
                assert!((s - (a == b) as i32 as f64).abs() < 1e-9, "<chi{a}, chi{b}> = {s}");
            }
        }
        let sum_sq: usize = t.characters.iter().map(|c| c.degree * c.degree).sum();
        assert_eq!(sum_sq, t.order);
    }

    #[test]
    fn symmetric_group_s3() {
        let g = close_group(&[perm(3, &[1, 0, 2]), perm(3, &[1, 2, 0])], 100).unwrap();
        let t = g.character_table().unwrap();
        assert_eq!(t.characters.iter().map(|c| c.degree).collect::<Vec<_>>(), vec![1, 1, 2]);
        check_orthogonality(t);
        assert!((0..3).all(|c| t.frobenius_schur(c) == 1));
    }

    #[test]
    fn cyclic_group_of_order_four() {
        let g = close_group(&[perm(4, &[1, 2, 3, 0])], 100).unwrap();
        let t = g.character_table().unwrap();
        check_orthogonality(t);
        let orbits = t.galois_orbits();
        assert_eq!(orbits.len(), 3);
        let fs: Vec<i32> = (0..4).map(|c| t.frobenius_schur(c)).collect();
        assert_eq!(fs.iter().filter(|&&x| x == 0).count(), 2);
    }

    #[test]
    fn alternating_group_a5() {
        let g = close_group(&[perm(5, &[1, 2, 0, 3, 4]), perm(5, &[1, 2, 3, 4, 0])], 200).unwrap();
        assert_eq!(g.order(), 60);
        let t = g.character_table().unwrap();
        let mut degs: Vec<usize> = t.characters.iter().map(|c| c.degree).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 3, 3, 4, 5]);
        check_orthogonality(t);
        assert_eq!(t.galois_orbits().len(), 4);
        for (i, orbit) in t.galois_orbits().iter().enumerate() {
            for c in 0..t.num_classes() {
                assert!(t.orbit_value(orbit, c).is_integer(), "orbit {i}, class {c}");
            }
        }
    }

    #[test]
    fn quaternion_group() {
        // Q8 acting on Z^4 by left multiplication on the quaternion units.
        let l = orthonormal(4);
        let i = z_from_i64_rows(&[vec![0, -1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, -1], vec![0, 0, 1, 0]]);
        let j = z_from_i64_rows(&[vec![0, 0, -1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, -1, 0, 0]]);
        let g = close_group(&[Isometry::new(&l, i).unwrap(), Isometry::new(&l, j).unwrap()], 100).unwrap();
        assert_eq!(g.order(), 8);
        let t = g.character_table().unwrap();
        check_orthogonality(t);
        let two_dim = t.characters.iter().position(|c| c.degree == 2).unwrap();
        assert_eq!(t.frobenius_schur(two_dim), -1);
    }
}
