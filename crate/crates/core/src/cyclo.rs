//! Exact arithmetic in cyclotomic fields `Q(zeta_m)`, elements stored as
//! rational coefficient vectors in the power basis `1, zeta, ..., zeta^(phi(m)-1)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::json::rat_to_json;
use crate::matrix::q_to_f64;
use crate::poly::cyclotomic;

#[derive(Debug, PartialEq, Eq)]
struct Field {
    m: u64,
    /// Monic `Phi_m`, low to high.
    modulus: Vec<BigRational>,
}

/// An element of `Q(zeta_m)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyc {
    field: Arc<Field>,
    c: Vec<BigRational>,
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| if j == 0 { x.to_string() } else { format!("{x}*z^{j}") })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Handle for constructing elements of one field.
#[derive(Clone, Debug)]
pub struct CycloField(Arc<Field>);

impl CycloField {
    pub fn new(m: u64) -> Self {
        let m = m.max(1);
        let modulus = cyclotomic(m).into_iter().map(BigRational::from_integer).collect();
        CycloField(Arc::new(Field { m, modulus }))
    }

    pub fn conductor(&self) -> u64 {
        self.0.m
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn zero(&self) -> Cyc {
        Cyc { field: self.0.clone(), c: vec![BigRational::zero(); self.degree()] }
    }

    pub fn one(&self) -> Cyc {
        self.rational(BigRational::one())
    }

    pub fn rational(&self, x: BigRational) -> Cyc {
        let mut z = self.zero();
        z.c[0] = x;
        z
    }

    pub fn int(&self, x: i64) -> Cyc {
        self.rational(BigRational::from_integer(BigInt::from(x)))
    }

    /// `zeta_m^j`.
    pub fn zeta_pow(&self, j: i64) -> Cyc {
        let m = self.0.m as i64;
        let e = j.rem_euclid(m) as usize;
        let mut raw = vec![BigRational::zero(); e + 1];
        raw[e] = BigRational::one();
        self.reduce(raw)
    }

    pub fn from_coeffs(&self, coeffs: Vec<BigRational>) -> Cyc {
        self.reduce(coeffs)
    }

    fn reduce(&self, mut raw: Vec<BigRational>) -> Cyc {
        let modp = &self.0.modulus;
        let deg = modp.len() - 1;
        while raw.len() > deg {
            let top = raw.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = raw.len() - deg;
            for (j, mj) in modp.iter().enumerate().take(deg) {
                raw[shift + j] -= &top * mj;
            }
        }
        raw.resize(deg, BigRational::zero());
        Cyc { field: self.0.clone(), c: raw }
    }

    /// Image of `x in Q(zeta_k)` in this field, for `k | m` (or `k | 2m` with
    /// `m` odd handled by the caller choosing an even conductor).
    pub fn embed(&self, x: &Cyc) -> Cyc {
        let k = x.field.m;
        let m = self.0.m;
        assert!(m % k == 0, "Q(zeta_{k}) does not embed in Q(zeta_{m})");
        let step = (m / k) as i64;
        let mut acc = self.zero();
        for (j, cj) in x.c.iter().enumerate() {
            if !cj.is_zero() {
                acc = acc.add(&self.zeta_pow(step * j as i64).scale(cj));
            }
        }
        acc
    }
}

impl Cyc {
    pub fn field(&self) -> CycloField {
        CycloField(self.field.clone())
    }

    pub fn conductor(&self) -> u64 {
        self.field.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().skip(1).all(|x| x.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.c[0].clone())
    }

    pub fn add(&self, o: &Cyc) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Cyc) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: &BigRational) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().map(|a| a * s).collect() }
    }

    pub fn mul(&self, o: &Cyc) -> Cyc {
        let n = self.c.len();
        let mut raw = vec![BigRational::zero(); 2 * n.max(1) - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        self.field().reduce(raw)
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Cyc {
        let f = self.field();
        let mut acc = f.zero();
        for (j, cj) in self.c.iter().enumerate() {
            if !cj.is_zero() {
                acc = acc.add(&f.zeta_pow(-(j as i64)).scale(cj));
            }
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in `Q[x]`.
    pub fn inv(&self) -> Option<Cyc> {
        if self.is_zero() {
            return None;
        }
        let trim = |mut p: Vec<BigRational>| {
            while p.last().is_some_and(|x| x.is_zero()) {
                p.pop();
            }
            p
        };
        let sub_mul = |a: &[BigRational], q: &[BigRational], b: &[BigRational]| -> Vec<BigRational> {
            let mut out = a.to_vec();
            let len = (q.len() + b.len()).saturating_sub(1).max(out.len());
            out.resize(len, BigRational::zero());
            for (i, x) in q.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] -= x * y;
                }
            }
            trim(out)
        };
        let divmod = |a: &[BigRational], b: &[BigRational]| -> (Vec<BigRational>, Vec<BigRational>) {
            let mut r = a.to_vec();
            let db = b.len() - 1;
            if r.len() < b.len() {
                return (Vec::new(), r);
            }
            let mut q = vec![BigRational::zero(); r.len() - db];
            let lead = b[db].clone();
            for k in (0..q.len()).rev() {
                let c = &r[k + db] / &lead;
                if c.is_zero() {
                    continue;
                }
                for (j, bj) in b.iter().enumerate() {
                    r[k + j] -= &c * bj;
                }
                q[k] = c;
            }
            (trim(q), trim(r))
        };
        let (mut r0, mut r1) = (self.field.modulus.clone(), trim(self.c.clone()));
        let (mut t0, mut t1): (Vec<BigRational>, Vec<BigRational>) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = divmod(&r0, &r1);
            let t2 = sub_mul(&t0, &q, &t1);
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t2);
        }
        // r0 is a nonzero constant since Phi_m is irreducible.
        let c = r0[0].clone();
        Some(self.field().reduce(t0.into_iter().map(|x| x / &c).collect()))
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.field.m as f64;
        self.c.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, x)| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / m;
            let v = q_to_f64(x);
            (re + v * t.cos(), im + v * t.sin())
        })
    }

    /// Sign of a real element: exact when rational, numeric otherwise.
    pub fn real_sign(&self) -> (i32, bool) {
        if let Some(r) = self.as_rational() {
            let s = if r.is_positive() {
                1
            } else if r.is_negative() {
                -1
            } else {
                0
            };
            return (s, true);
        }
        let (re, _) = self.to_complex();
        (
            if re > 1e-12 {
                1
            } else if re < -1e-12 {
                -1
            } else {
                0
            },
            false,
        )
    }

    /// Exact real and imaginary parts when the conductor divides 4.
    pub fn gaussian_parts(&self) -> Option<(BigRational, BigRational)> {
        match self.field.m {
            1 | 2 => Some((self.c[0].clone(), BigRational::zero())),
            4 => Some((self.c[0].clone(), self.c[1].clone())),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "conductor": self.field.m, "coeffs": self.c.iter().map(rat_to_json).collect::<Vec<_>>() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::qi;

    #[test]
    fn gaussian_arithmetic() {
        let f = CycloField::new(4);
        let i = f.zeta_pow(1);
        assert_eq!(i.mul(&i), f.int(-1));
        assert_eq!(i.conj(), i.neg());
        let z = f.int(3).add(&i.scale(&qi(4)));
        assert_eq!(z.mul(&z.conj()), f.int(25));
        assert_eq!(z.mul(&z.inv().unwrap()), f.one());
        assert_eq!(z.gaussian_parts(), Some((qi(3), qi(4))));
    }

    #[test]
    fn cube_roots() {
        let f = CycloField::new(3);
        let w = f.zeta_pow(1);
        assert_eq!(f.degree(), 2);
        assert_eq!(w.mul(&w).mul(&w), f.one());
        assert_eq!(f.one().add(&w).add(&w.mul(&w)), f.zero());
        assert_eq!(w.conj(), w.mul(&w));
        let x = f.int(2).sub(&w);
        assert_eq!(x.mul(&x.inv().unwrap()), f.one());
        let norm = x.mul(&x.conj());
        assert!(norm.is_rational());
    }

    #[test]
    fn embedding() {
        let f4 = CycloField::new(4);
        let f12 = CycloField::new(12);
        let i = f12.embed(&f4.zeta_pow(1));
        assert_eq!(i.mul(&i), f12.int(-1));
        let w = f12.embed(&CycloField::new(3).zeta_pow(1));
        assert_eq!(w.mul(&w).mul(&w), f12.one());
        let (re, im) = i.to_complex();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rational_field() {
        let f = CycloField::new(2);
        assert_eq!(f.degree(), 1);
        assert_eq!(f.zeta_pow(1), f.int(-1));
        assert_eq!(f.int(5).real_sign(), (1, true));
    }
}
