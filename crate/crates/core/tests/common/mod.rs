//! Oracles and randomized property trials shared by the acceptance suite and
//! the property tests. Every trial takes a seed and returns `Err` with a
//! description on failure.

#![allow(dead_code)]

use std::collections::BTreeSet;

use enriqueslab::cover::{k3, model_by_name, transfer_composite};
use enriqueslab::group::{close_group, invariant_sublattice, weight_decomposition, ActionGroup, Isometry};
use enriqueslab::matrix::{inertia, qi, zi};
use enriqueslab::period::{invariant_line, twistor_data, weight_one_space};
use enriqueslab::realization::{
    dehn_twist_reflection, descend_isometry, find_invariant_positive_3plane, lift_isometry, realization_invariant,
    PlaneOptions, PositiveThreePlane, ReportOptions, Splitting,
};
use enriqueslab::{short_vectors, Lattice, QMatrix, Sublattice, ZMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Trial = std::result::Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Trial {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// Short vector oracles

/// All `x` in the box `|x_i| <= floor(sqrt(|t| (A^{-1})_ii))`, `A = -G`, with
/// `x^T G x = t`.
pub fn box_oracle(gram: &[Vec<i64>], t: i64) -> BTreeSet<Vec<i64>> {
    let n = gram.len();
    let a = QMatrix::from_rows(gram.iter().map(|r| r.iter().map(|&x| qi(-x)).collect()).collect()).unwrap();
    let inv = a.inverse().expect("definite");
    let bounds: Vec<i64> = (0..n)
        .map(|i| {
            let mut b = 0;
            while fits(b + 1, &inv, i, t) {
                b += 1;
            }
            b
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let q: i64 = (0..n).map(|i| (0..n).map(|j| x[i] * gram[i][j] * x[j]).sum::<i64>()).sum();
        if q == t {
            out.insert(x.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if x[k] < bounds[k] {
                x[k] += 1;
                break;
            }
            x[k] = -bounds[k];
            k += 1;
        }
    }
}

/// `b^2 <= |t| (A^{-1})_ii`, exactly.
fn fits(b: i64, inv: &QMatrix, i: usize, t: i64) -> bool {
    qi(b * b) <= &inv[(i, i)] * qi(-t)
}

/// Exact nested enumeration from the rational `L D L^T` factorization of
/// `A = -G`: the bound on each coordinate is conditional on the outer ones.
pub fn cholesky_oracle(gram: &[Vec<i64>], t: i64) -> BTreeSet<Vec<i64>> {
    let n = gram.len();
    let mut a: Vec<Vec<BigRational>> = gram.iter().map(|r| r.iter().map(|&x| qi(-x)).collect()).collect();
    // A = L D L^T, L unit lower triangular.
    let mut l = vec![vec![BigRational::zero(); n]; n];
    let mut d = vec![BigRational::zero(); n];
    for k in 0..n {
        d[k] = a[k][k].clone();
        l[k][k] = BigRational::one();
        for i in (k + 1)..n {
            l[i][k] = &a[i][k] / &d[k];
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let s = &l[i][k] * &a[k][j];
                a[i][j] -= s;
            }
        }
    }
    let mut out = BTreeSet::new();
    let mut x = vec![0i64; n];
    nested(n, &l, &d, qi(-t), &mut x, &mut out);
    out.into_iter().filter(|v| v.iter().any(|&c| c != 0)).collect()
}

fn nested(
    k: usize,
    l: &[Vec<BigRational>],
    d: &[BigRational],
    rem: BigRational,
    x: &mut Vec<i64>,
    out: &mut BTreeSet<Vec<i64>>,
) {
    if k == 0 {
        if rem.is_zero() {
            out.insert(x.clone());
        }
        return;
    }
    let i = k - 1;
    let n = x.len();
    let c: BigRational = ((i + 1)..n).map(|j| &l[j][i] * qi(x[j])).fold(BigRational::zero(), |a, b| a + b);
    let center = (-&c).round().to_integer().to_i64().unwrap();
    let ok = |v: i64| {
        let y = qi(v) + &c;
        &d[i] * &y * &y <= rem
    };
    let mut lo = center;
    while ok(lo - 1) {
        lo -= 1;
    }
    let mut hi = center;
    while ok(hi + 1) {
        hi += 1;
    }
    for v in lo..=hi {
        if !ok(v) {
            continue;
        }
        let y = qi(v) + &c;
        let used = &d[i] * &y * &y;
        x[i] = v;
        nested(i, l, d, &rem - used, x, out);
    }
    x[i] = 0;
}

pub fn library_set(gram: &[Vec<i64>], t: i64) -> BTreeSet<Vec<i64>> {
    let l = Lattice::from_i64(gram).unwrap();
    short_vectors(&l, t).unwrap().vectors.into_iter().map(|v| v.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

/// Random negative definite Gram matrix of the given rank with small entries.
pub fn random_negative_definite(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    loop {
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = -r.gen_range(1..=6);
            for j in 0..i {
                let v = r.gen_range(-2..=2);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        let q = QMatrix::from_rows(g.iter().map(|row| row.iter().map(|&x| qi(x)).collect()).collect()).unwrap();
        if inertia(&q) == (0, n, 0) {
            return g;
        }
    }
}

pub fn e8_minus_one_rows() -> Vec<Vec<i64>> {
    let g = Lattice::e8(-1);
    (0..8).map(|i| (0..8).map(|j| g.gram()[(i, j)].to_i64().unwrap()).collect()).collect()
}

// ---------------------------------------------------------------------------
// Random isometries

/// Simple root reflections of `E8(-1)` inside `U + E8(-1)`.
pub fn enriques_root_reflections() -> Vec<Isometry> {
    let l = Lattice::enriques();
    (2..10)
        .map(|i| {
            let mut v = vec![zi(0); 10];
            v[i] = zi(1);
            dehn_twist_reflection(&l, &v).unwrap()
        })
        .collect()
}

/// Swap of `e, f` in `U`, and `-1` on `U`, inside `U + E8(-1)`.
pub fn enriques_u_isometries() -> Vec<Isometry> {
    let l = Lattice::enriques();
    let mut swap = ZMatrix::identity(10);
    swap[(0, 0)] = zi(0);
    swap[(1, 1)] = zi(0);
    swap[(0, 1)] = zi(1);
    swap[(1, 0)] = zi(1);
    let mut neg = ZMatrix::identity(10);
    neg[(0, 0)] = zi(-1);
    neg[(1, 1)] = zi(-1);
    vec![Isometry::new(&l, swap).unwrap(), Isometry::new(&l, neg).unwrap()]
}

pub fn random_word(r: &mut ChaCha8Rng, letters: &[Isometry], max_len: usize) -> Vec<Isometry> {
    let len = r.gen_range(1..=max_len);
    (0..len).map(|_| letters.choose(r).unwrap().clone()).collect()
}

pub fn product(word: &[Isometry]) -> Isometry {
    let mut acc = Isometry::identity(word[0].lattice());
    for w in word {
        acc = acc.compose(w).unwrap();
    }
    acc
}

/// Random unimodular matrix as a product of elementary operations.
pub fn random_unimodular(r: &mut ChaCha8Rng, n: usize, steps: usize) -> ZMatrix {
    let mut u = ZMatrix::identity(n);
    for _ in 0..steps {
        let i = r.gen_range(0..n);
        let j = r.gen_range(0..n);
        if i == j {
            if r.gen_bool(0.3) {
                for c in 0..n {
                    u[(i, c)] = -u[(i, c)].clone();
                }
            }
            continue;
        }
        let k = BigInt::from(r.gen_range(-2i64..=2));
        for c in 0..n {
            let add = &k * &u[(j, c)];
            u[(i, c)] += add;
        }
    }
    u
}

// ---------------------------------------------------------------------------
// Trials

/// Invariants are unchanged by a change of basis.
pub fn trial_invariants_basis_change(seed: u64) -> Trial {
    let mut r = rng(seed);
    let n = r.gen_range(1..=5);
    let g = ZMatrix::from_fn(n, n, |_, _| zi(0));
    let mut g = g;
    for i in 0..n {
        g[(i, i)] = zi(2 * r.gen_range(-3i64..=3));
        for j in 0..i {
            let v = zi(r.gen_range(-3i64..=3));
            g[(i, j)] = v.clone();
            g[(j, i)] = v;
        }
    }
    let l = Lattice::new(g.clone()).map_err(|e| e.to_string())?;
    let u = random_unimodular(&mut r, n, 12);
    let l2 = Lattice::new(u.mul(&g).mul(&u.transpose())).map_err(|e| e.to_string())?;
    ensure(l.invariants() == l2.invariants(), || format!("invariants changed under basis change: {g:?}"))
}

/// HNF is idempotent and depends only on the row span.
pub fn trial_hnf(seed: u64) -> Trial {
    let mut r = rng(seed);
    let rows = r.gen_range(1..=4);
    let cols = r.gen_range(rows..=6);
    let a = ZMatrix::from_fn(rows, cols, |_, _| zi(r.gen_range(-9i64..=9)));
    let h = a.hnf();
    ensure(h.hnf() == h, || "HNF not idempotent".into())?;
    let u = random_unimodular(&mut r, rows, 10);
    ensure(u.mul(&a).hnf() == h, || format!("HNF depends on the basis of {a:?}"))
}

/// Integer kernel vectors are annihilated and span a saturated lattice.
pub fn trial_kernel(seed: u64) -> Trial {
    let mut r = rng(seed);
    let rows = r.gen_range(1..=4);
    let cols = r.gen_range(rows + 1..=7);
    let a = ZMatrix::from_fn(rows, cols, |_, _| zi(r.gen_range(-5i64..=5)));
    let k = a.integer_kernel();
    ensure(k.rows() + a.rank() == cols, || "kernel has the wrong rank".into())?;
    ensure(a.mul(&k.transpose()).is_zero(), || "kernel vector not annihilated".into())?;
    if k.rows() > 0 {
        let sub = Sublattice::new(
            &Lattice::from_i64(&vec![vec![0; cols]; cols]).unwrap_or_else(|_| identity_lattice(cols)),
            k,
        )
        .map_err(|e| e.to_string())?;
        ensure(sub.is_primitive(), || "kernel not saturated".into())?;
    }
    Ok(())
}

fn identity_lattice(n: usize) -> Lattice {
    Lattice::new(ZMatrix::identity(n)).unwrap()
}

/// The orthogonal complement is orthogonal and of complementary rank.
pub fn trial_orthogonal_complement(seed: u64) -> Trial {
    let mut r = rng(seed);
    let l = Lattice::k3();
    let k = r.gen_range(1..=5);
    let b = ZMatrix::from_fn(k, 22, |_, _| zi(r.gen_range(-2i64..=2)));
    if b.rank() != k {
        return Ok(());
    }
    let sub = Sublattice::new(&l, b.clone()).map_err(|e| e.to_string())?;
    let c = sub.orthogonal_complement();
    ensure(c.rank() == 22 - k, || "complement rank".into())?;
    ensure(b.mul(l.gram()).mul(&c.basis().transpose()).is_zero(), || "complement not orthogonal".into())?;
    ensure(c.is_primitive(), || "complement not primitive".into())
}

/// The library enumeration agrees with the box oracle.
pub fn trial_short_vectors(seed: u64) -> Trial {
    let mut r = rng(seed);
    let n = r.gen_range(1..=3);
    let g = random_negative_definite(&mut r, n);
    let t = -r.gen_range(1..=8);
    let a = library_set(&g, t);
    let b = box_oracle(&g, t);
    ensure(a == b, || format!("enumeration mismatch for {g:?}, t = {t}"))?;
    ensure(a.iter().all(|v| a.contains(&v.iter().map(|x| -x).collect::<Vec<_>>())), || "not symmetric".into())
}

/// Finite group generated by random Weyl words: the fixed sublattice is fixed
/// and primitive, and the weight-one dimension matches the decomposition.
pub fn trial_weyl_group(seed: u64) -> Trial {
    let mut r = rng(seed);
    let refl = enriques_root_reflections();
    let g = product(&random_word(&mut r, &refl, 8));
    let grp = close_group(std::slice::from_ref(&g), 100).map_err(|e| e.to_string())?;
    let fixed = invariant_sublattice(&grp);
    ensure(fixed.is_primitive(), || "fixed lattice not primitive".into())?;
    for row in fixed.basis().to_rows() {
        ensure(g.matrix().mul_vec(&row) == row, || "fixed vector moved".into())?;
    }
    if grp.order() > 1 && r.gen_bool(0.2) {
        let w = weight_one_space(&g, 100).map_err(|e| e.to_string())?;
        let wd = weight_decomposition(&g, 100).map_err(|e| e.to_string())?;
        ensure(w.dim() == wd.dim(1), || format!("weight-one dimension {} vs {}", w.dim(), wd.dim(1)))?;
        ensure(w.eigen_condition_holds(), || "eigen condition".into())?;
    }
    Ok(())
}

/// `p^T G p = d G'` and the transfer composite is `d I` for every model.
pub fn trial_transfer(seed: u64) -> Trial {
    let names = enriqueslab::cover::builtin_model_names();
    let name = &names[(seed as usize) % names.len()];
    let m = model_by_name(name).map_err(|e| e.to_string())?;
    ensure(m.scaling_holds(), || format!("{name}: scaling"))?;
    let t = transfer_composite(&m).map_err(|e| e.to_string())?;
    let d = BigRational::from_integer(BigInt::from(m.d));
    ensure(t.composite == QMatrix::identity(m.downstairs.rank()).scale(&d), || format!("{name}: composite"))
}

/// Lifting is a homomorphism, commutes with `iota*`, and descends back.
pub fn trial_lift(seed: u64) -> Trial {
    let mut r = rng(seed);
    let mut letters = enriques_root_reflections();
    letters.extend(enriques_u_isometries());
    let word = random_word(&mut r, &letters, 6);
    let phi = product(&word);
    let lifted = lift_isometry(&phi).map_err(|e| e.to_string())?;
    let mut acc = ZMatrix::identity(22);
    for w in &word {
        acc = acc.mul(lift_isometry(w).map_err(|e| e.to_string())?.matrix());
    }
    ensure(acc == *lifted.matrix(), || "lift is not multiplicative".into())?;
    let iota = k3::iota_matrix();
    ensure(lifted.matrix().mul(&iota) == iota.mul(lifted.matrix()), || "lift does not commute with iota*".into())?;
    ensure(descend_isometry(lifted.matrix()).as_ref() == Some(phi.matrix()), || "lift does not restrict to phi".into())
}

/// A random isometry of the K3 lattice: lift of a random Weyl word, followed
/// by reflections in random roots of the two E8 copies and of `x1`.
pub fn random_k3_isometry(r: &mut ChaCha8Rng) -> Isometry {
    let mut letters = enriques_root_reflections();
    letters.extend(enriques_u_isometries());
    let base = lift_isometry(&product(&random_word(r, &letters, 5))).unwrap();
    let k = Lattice::k3();
    let mut m = base.matrix().clone();
    for _ in 0..r.gen_range(0..3) {
        let mut v = vec![zi(0); 22];
        v[r.gen_range(6..22)] = zi(1);
        m = m.mul(dehn_twist_reflection(&k, &v).unwrap().matrix());
    }
    if r.gen_bool(0.5) {
        let mut v = vec![zi(0); 22];
        v[0] = zi(1);
        v[1] = zi(-1);
        m = m.mul(dehn_twist_reflection(&k, &v).unwrap().matrix());
    }
    Isometry::new(&k, m).unwrap()
}

/// The two test groups on the K3 lattice: `<iota*>` and the lifted Dehn twist.
pub fn dehn_lift() -> (Isometry, Vec<BigInt>, Vec<BigInt>) {
    let mut s = vec![zi(0); 10];
    s[2] = zi(1);
    let sp = Splitting::of(&s);
    let k = Lattice::k3();
    let r1 = dehn_twist_reflection(&k, &sp.s1).unwrap();
    let r2 = dehn_twist_reflection(&k, &sp.s2).unwrap();
    (r1.compose(&r2).unwrap(), sp.s1, sp.s2)
}

fn conjugate(h: &Isometry, x: &Isometry) -> Isometry {
    x.compose(h).unwrap().compose(&x.inverse()).unwrap()
}

/// Conjugating the group does not change the verdicts; `L_G` is negative
/// definite, `G`-invariant and orthogonal to `P`; `I_G` carries the positive
/// part.
pub fn trial_realization(seed: u64) -> Trial {
    let mut r = rng(seed);
    let (dehn, _, _) = dehn_lift();
    let base = if seed % 2 == 0 { k3::iota() } else { dehn };
    let x = random_k3_isometry(&mut r);
    let opts = ReportOptions::default();
    let mut verdicts = Vec::new();
    for h in [base.clone(), conjugate(&base, &x)] {
        let g = close_group(std::slice::from_ref(&h), 10).map_err(|e| e.to_string())?;
        let p = find_invariant_positive_3plane(&g, &PlaneOptions::default()).map_err(|e| e.to_string())?;
        let rep = realization_invariant(&g, &p, &opts).map_err(|e| e.to_string())?;
        check_report_invariants(&g, &p, &rep)?;
        verdicts.push((rep.metric_verdict, rep.complex_verdict, rep.l_g.rank(), rep.ambient_witnesses.len()));
    }
    ensure(verdicts[0] == verdicts[1], || format!("verdicts differ under conjugation: {verdicts:?}"))
}

pub fn check_report_invariants(
    g: &ActionGroup,
    p: &PositiveThreePlane,
    rep: &enriqueslab::realization::RealizationReport,
) -> Trial {
    let l = g.lattice();
    let lg = rep.l_g_sublattice.basis();
    if lg.rows() > 0 {
        ensure(rep.l_g.is_negative_definite(), || "L_G not negative definite".into())?;
        for s in g.generators() {
            for row in lg.to_rows() {
                let img = s.matrix().mul_vec(&row);
                ensure(rep.l_g_sublattice.contains(&img), || "L_G not invariant".into())?;
            }
        }
        if let Some(b) = p.exact_basis() {
            let cross = lg.to_q().mul(&l.gram().to_q()).mul(&b.transpose());
            ensure(cross.is_zero(), || "L_G not orthogonal to P".into())?;
        }
    }
    if let Some(b) = p.exact_basis() {
        for row in b.to_rows() {
            let ig = rep.i_g.basis().to_q();
            ensure(ig.solve_rows(&row).is_some(), || "P not inside I_G".into())?;
        }
    }
    let ig = rep.i_g.restrict_form();
    let (pp, _, _) = inertia(&ig.gram().to_q());
    ensure(pp == 3, || format!("I_G has {pp} positive directions"))
}

/// Rational rotations have their axis fixed exactly.
pub fn trial_invariant_line(seed: u64) -> Trial {
    let mut r = rng(seed);
    // Cayley transform of a random skew matrix: (I - S)(I + S)^{-1}.
    let a = qi(r.gen_range(-5..=5));
    let b = qi(r.gen_range(-5..=5));
    let c = qi(r.gen_range(-5..=5));
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Ok(());
    }
    let z = qi(0);
    let s = QMatrix::from_rows(vec![
        vec![z.clone(), -a.clone(), b.clone()],
        vec![a.clone(), z.clone(), -c.clone()],
        vec![-b.clone(), c.clone(), z.clone()],
    ])
    .unwrap();
    let id = QMatrix::identity(3);
    let rho = id.sub(&s).mul(&id.add(&s).inverse().unwrap());
    let line = invariant_line(&rho, &id).map_err(|e| e.to_string())?;
    ensure(rho.mul_vec(&line.direction) == line.direction, || "axis not fixed".into())?;
    let [p, m] = &line.unit_points;
    let np: f64 = p.iter().map(|x| x * x).sum();
    ensure((np - 1.0).abs() < 1e-12 && p.iter().zip(m).all(|(x, y)| x == &-y), || "unit points".into())
}

/// Rotating the oriented pair `(x, y)` inside the twistor plane keeps the
/// period conditions and multiplies the period vector by a unit complex
/// number.
pub fn trial_twistor_rotation(seed: u64) -> Trial {
    let mut r = rng(seed);
    let n = 3;
    let diag: Vec<i64> = (0..n).map(|_| r.gen_range(1..=3)).collect();
    let gram: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { diag[i] * diag[i] } else { 0 }).collect()).collect();
    let l = Lattice::from_i64(&gram).unwrap();
    let p = PositiveThreePlane::from_rational(&l, QMatrix::identity(3)).unwrap();
    let mut kappa = vec![qi(0); 3];
    kappa[0] = BigRational::new(BigInt::one(), BigInt::from(diag[0]));
    let t = twistor_data(&p, &kappa, 1).map_err(|e| e.to_string())?;
    ensure(t.satisfies_period_conditions(), || "period conditions".into())?;
    let w = t.period_vector().ok_or("t should be rational for a diagonal square form")?;
    // Rotate (x, t y) by a rational angle from a Pythagorean triple.
    let s = qi(r.gen_range(1..=9));
    let den = qi(1) + &s * &s;
    let (cos, sin) = ((qi(1) - &s * &s) / &den, (qi(2) * &s) / &den);
    let tt = t.t().unwrap();
    let ty: Vec<BigRational> = t.y.iter().map(|v| v * &tt).collect();
    let x2: Vec<BigRational> = t.x.iter().zip(&ty).map(|(a, b)| &cos * a - &sin * b).collect();
    let y2: Vec<BigRational> = t.x.iter().zip(&ty).map(|(a, b)| &sin * a + &cos * b).collect();
    let w2 = enriqueslab::period::PeriodVector::gaussian(&l, &x2, &y2).map_err(|e| e.to_string())?;
    ensure(w2.selfpair.is_zero() && w2.hermpair == w.hermpair, || "rotation changed the pairings".into())?;
    // w2 = (cos + i sin) w.
    let f = w.coords[0].field();
    let unit = f.rational(cos).add(&f.zeta_pow(1).scale(&sin));
    let expected: Vec<_> = w.coords.iter().map(|c| c.mul(&unit)).collect();
    ensure(expected == w2.coords, || "rotation is not multiplication by a unit".into())?;
    ensure(w.hermpair.as_rational().is_some_and(|h| h.is_positive()), || "hermitian pairing".into())
}

/// The trial suites with their repetition counts, as used by the acceptance
/// criterion on the property suite.
pub fn suites() -> Vec<(&'static str, fn(u64) -> Trial, u64)> {
    vec![
        ("invariants under basis change", trial_invariants_basis_change, 2000),
        ("hnf canonical", trial_hnf, 1500),
        ("integer kernel", trial_kernel, 1500),
        ("orthogonal complement", trial_orthogonal_complement, 500),
        ("short vectors vs oracle", trial_short_vectors, 1500),
        ("weyl group fixed lattice", trial_weyl_group, 500),
        ("transfer scaling", trial_transfer, 200),
        ("lift homomorphism", trial_lift, 1200),
        ("realization conjugation", trial_realization, 100),
        ("invariant line", trial_invariant_line, 800),
        ("twistor rotation", trial_twistor_rotation, 200),
    ]
}
