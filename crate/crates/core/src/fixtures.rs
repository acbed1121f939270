//! Golden computations shipped as JSON files in `fixtures/`.
//!
//! Each file holds `name`, `kind`, `source`, `inputs` and `expected`. The
//! kinds are `invariant`, `quotient`, `transfer`, `weight-signature` and
//! `realize`; see `fixtures/README.md` for the schema. Files are embedded at
//! build time; setting `ENRIQUESLAB_FIXTURES` to a directory reads them from
//! there instead.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cover::{descend_form, model_by_name, transfer_composite, CoverModel};
use crate::error::{Error, Result};
use crate::group::{close_group, ActionGroup, Isometry, DEFAULT_ORDER_CAP};
use crate::json::json_to_int_matrix;
use crate::lattice::{Lattice, LatticeInvariants, Sublattice};
use crate::matrix::{QMatrix, ZMatrix};
use crate::period::weight_one_space;
use crate::realization::{enriques_realizable, realize_k3, Mode, RealizationReport, ReportOptions};

pub const FIXTURE_DIR_ENV: &str = "ENRIQUESLAB_FIXTURES";

const EMBEDDED: &[(&str, &str)] = &[
    ("dehn-twist-nonrealizable", include_str!("../fixtures/dehn-twist-nonrealizable.json")),
    ("enriques-invariant", include_str!("../fixtures/enriques-invariant.json")),
    ("enriques-quotient", include_str!("../fixtures/enriques-quotient.json")),
    ("enriques-root-reflection-nonrealizable", include_str!("../fixtures/enriques-root-reflection-nonrealizable.json")),
    ("hilb-n3-invariant", include_str!("../fixtures/hilb-n3-invariant.json")),
    ("hilb-n3-quotient", include_str!("../fixtures/hilb-n3-quotient.json")),
    ("hilb-n5-invariant", include_str!("../fixtures/hilb-n5-invariant.json")),
    ("hilb-n5-quotient", include_str!("../fixtures/hilb-n5-quotient.json")),
    ("iota-realizable", include_str!("../fixtures/iota-realizable.json")),
    ("kummer-d2-n1-invariant", include_str!("../fixtures/kummer-d2-n1-invariant.json")),
    ("kummer-d2-n1-pullback", include_str!("../fixtures/kummer-d2-n1-pullback.json")),
    ("kummer-d2-n1-quotient", include_str!("../fixtures/kummer-d2-n1-quotient.json")),
    ("kummer-d2-n3-invariant", include_str!("../fixtures/kummer-d2-n3-invariant.json")),
    ("kummer-d2-n3-pullback", include_str!("../fixtures/kummer-d2-n3-pullback.json")),
    ("kummer-d2-n3-quotient", include_str!("../fixtures/kummer-d2-n3-quotient.json")),
    ("kummer-d3-n2-invariant", include_str!("../fixtures/kummer-d3-n2-invariant.json")),
    ("kummer-d3-n2-pullback", include_str!("../fixtures/kummer-d3-n2-pullback.json")),
    ("kummer-d3-n2-quotient", include_str!("../fixtures/kummer-d3-n2-quotient.json")),
    ("kummer-d4-n3-invariant", include_str!("../fixtures/kummer-d4-n3-invariant.json")),
    ("kummer-d4-n3-pullback", include_str!("../fixtures/kummer-d4-n3-pullback.json")),
    ("kummer-d4-n3-quotient", include_str!("../fixtures/kummer-d4-n3-quotient.json")),
    ("transfer-enriques", include_str!("../fixtures/transfer-enriques.json")),
    ("transfer-hilb-3", include_str!("../fixtures/transfer-hilb-3.json")),
    ("transfer-hilb-5", include_str!("../fixtures/transfer-hilb-5.json")),
    ("transfer-kummer-2-1", include_str!("../fixtures/transfer-kummer-2-1.json")),
    ("transfer-kummer-2-3", include_str!("../fixtures/transfer-kummer-2-3.json")),
    ("transfer-kummer-3-2", include_str!("../fixtures/transfer-kummer-3-2.json")),
    ("transfer-kummer-4-3", include_str!("../fixtures/transfer-kummer-4-3.json")),
    ("trivial-enriques-realizable", include_str!("../fixtures/trivial-enriques-realizable.json")),
    ("trivial-group-realizable", include_str!("../fixtures/trivial-group-realizable.json")),
    ("weight-enriques", include_str!("../fixtures/weight-enriques.json")),
    ("weight-kummer-d2-n1", include_str!("../fixtures/weight-kummer-d2-n1.json")),
    ("weight-kummer-d3-n2", include_str!("../fixtures/weight-kummer-d3-n2.json")),
    ("weight-kummer-d4-n3", include_str!("../fixtures/weight-kummer-d4-n3.json")),
];

#[derive(Clone, Debug, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub kind: String,
    pub source: String,
    pub inputs: Value,
    pub expected: Value,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub what: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct FixtureReport {
    pub name: String,
    pub kind: String,
    pub source: String,
    pub checks: Vec<Check>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "kind": self.kind,
            "source": self.source,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({ "what": c.what, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
        })
    }
}

fn parse(text: &str, origin: &str) -> Result<Fixture> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("fixture {origin}: {e}")))
}

/// All fixtures, sorted by name.
pub fn load_all() -> Result<Vec<Fixture>> {
    let mut out = match std::env::var_os(FIXTURE_DIR_ENV) {
        Some(dir) => load_dir(Path::new(&dir))?,
        None => EMBEDDED.iter().map(|(n, t)| parse(t, n)).collect::<Result<Vec<_>>>()?,
    };
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

pub fn load_dir(dir: &Path) -> Result<Vec<Fixture>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Invalid(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::Invalid(e.to_string()))?.path();
        if path.extension().is_some_and(|x| x == "json") {
            let text =
                std::fs::read_to_string(&path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
            out.push(parse(&text, &path.display().to_string())?);
        }
    }
    Ok(out)
}

pub fn fixture_names() -> Result<Vec<String>> {
    Ok(load_all()?.into_iter().map(|f| f.name).collect())
}

pub fn get_fixture(name: &str) -> Result<Fixture> {
    load_all()?.into_iter().find(|f| f.name == name).ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

/// Recompute a fixture and compare with its expected values.
pub fn run_fixture(name: &str) -> Result<FixtureReport> {
    run(&get_fixture(name)?)
}

/// Every fixture, in name order; runs in parallel on the current rayon pool.
pub fn run_all() -> Result<Vec<FixtureReport>> {
    load_all()?.par_iter().map(run).collect()
}

pub fn run(f: &Fixture) -> Result<FixtureReport> {
    let checks = match f.kind.as_str() {
        "invariant" => run_invariant(f)?,
        "quotient" => run_quotient(f)?,
        "transfer" => run_transfer(f)?,
        "weight-signature" => run_weight(f)?,
        "realize" => run_realize(f)?,
        other => return Err(Error::Invalid(format!("fixture {}: unknown kind `{other}`", f.name))),
    };
    Ok(FixtureReport { name: f.name.clone(), kind: f.kind.clone(), source: f.source.clone(), checks })
}

fn check(what: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { what: what.to_string(), passed, detail: detail.into() }
}

fn model_of(f: &Fixture) -> Result<CoverModel> {
    let name =
        f.inputs["model"].as_str().ok_or_else(|| Error::Invalid(format!("fixture {}: missing model", f.name)))?;
    model_by_name(name)
}

/// Direct sum of `{"name": .., "scale": ..}` and `{"diag": k}` blocks.
pub fn target_lattice(blocks: &Value) -> Result<Lattice> {
    let arr = blocks.as_array().ok_or_else(|| Error::Invalid("target must be an array of blocks".into()))?;
    let parts = arr
        .iter()
        .map(|b| {
            if let Some(k) = b.get("diag") {
                let k = crate::json::json_to_rat(k)?.to_integer();
                return Ok(Lattice::rank_one_big(k));
            }
            let name = b["name"].as_str().ok_or_else(|| Error::Invalid("block without name".into()))?;
            let scale = b["scale"].as_i64().unwrap_or(1);
            Lattice::standard_named(name, scale)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Lattice::direct_sum_all(&parts))
}

fn invariant_checks(computed: &Lattice, expected: &Value, out: &mut Vec<Check>) -> Result<Lattice> {
    let want = LatticeInvariants::from_json(&expected["invariants"])?;
    let got = computed.invariants();
    out.push(check("invariants", got == want, format!("computed {got}; expected {want}")));
    let target = target_lattice(&expected["target"])?;
    let tinv = target.invariants();
    out.push(check("target invariants", tinv == want, format!("target {tinv}")));
    Ok(target)
}

fn run_invariant(f: &Fixture) -> Result<Vec<Check>> {
    let m = model_of(f)?;
    let sub = match f.inputs["sublattice"].as_str().unwrap_or("fixed") {
        "fixed" => m.invariant.clone(),
        "pullback" => m.pullback_image(),
        other => return Err(Error::Invalid(format!("fixture {}: unknown sublattice `{other}`", f.name))),
    };
    let mut out = Vec::new();
    let target = invariant_checks(&sub.restrict_form(), &f.expected, &mut out)?;
    let w = json_to_int_matrix(&f.expected["witness_basis"])?;
    let witness = Sublattice::new(&m.upstairs, w)?;
    out.push(check("witness spans the sublattice", witness.same_span(&sub), "HNF comparison"));
    let wg = witness.restrict_form();
    out.push(check("witness Gram equals target", wg == target, "exact Gram equality"));
    Ok(out)
}

fn run_quotient(f: &Fixture) -> Result<Vec<Check>> {
    let m = model_of(f)?;
    let q = descend_form(&m.pullback_image(), m.d as i64)?;
    let mut out = Vec::new();
    let target = invariant_checks(&q, &f.expected, &mut out)?;
    out.push(check("descended form equals target", q == target, "exact Gram equality"));
    out.push(check("descended form equals model quotient", q == m.downstairs, "exact Gram equality"));
    Ok(out)
}

fn run_transfer(f: &Fixture) -> Result<Vec<Check>> {
    let m = model_of(f)?;
    let d = f.expected["d"].as_u64().ok_or_else(|| Error::Invalid("missing d".into()))? as usize;
    let t = transfer_composite(&m)?;
    let k = m.downstairs.rank();
    let want = QMatrix::identity(k).scale(&num_rational::BigRational::from_integer(BigInt::from(d)));
    Ok(vec![
        check("degree", m.d == d, format!("model degree {}", m.d)),
        check("pullback scales the form by d", m.scaling_holds(), "p^T G p = d G'"),
        check("transfer after pullback is d", t.composite == want, format!("composite is {k}x{k}")),
    ])
}

fn run_weight(f: &Fixture) -> Result<Vec<Check>> {
    let m = model_of(f)?;
    let w = weight_one_space(&m.generator, DEFAULT_ORDER_CAP)?;
    let e = &f.expected;
    let dim = e["dim"].as_u64().unwrap_or(0) as usize;
    let sig: Vec<usize> =
        e["herm_signature"].as_array().into_iter().flatten().filter_map(|x| x.as_u64()).map(|x| x as usize).collect();
    let iso = e["totally_isotropic"].as_bool().unwrap_or(false);
    Ok(vec![
        check("dimension", w.dim() == dim, format!("computed {}", w.dim())),
        check(
            "Hermitian signature",
            sig == [w.herm_signature.0, w.herm_signature.1] && w.signature_exact,
            format!("computed {:?}", w.herm_signature),
        ),
        check("total isotropy", w.is_totally_isotropic() == iso, format!("computed {}", w.is_totally_isotropic())),
        check("eigenvector condition", w.eigen_condition_holds(), "g v = zeta v"),
    ])
}

/// Group described by `{"lattice", "generators"}`.
pub fn group_from_inputs(inputs: &Value, cap: usize) -> Result<ActionGroup> {
    let l = Lattice::from_json(&inputs["lattice"])?;
    let gens = inputs["generators"]
        .as_array()
        .map(|a| a.iter().map(|m| Isometry::new(&l, json_to_int_matrix(m)?)).collect::<Result<Vec<_>>>())
        .transpose()?
        .unwrap_or_default();
    if gens.is_empty() {
        Ok(ActionGroup::trivial(&l))
    } else {
        close_group(&gens, cap)
    }
}

fn vec_set(rows: &ZMatrix) -> BTreeSet<Vec<BigInt>> {
    rows.to_rows().into_iter().collect()
}

fn run_realize(f: &Fixture) -> Result<Vec<Check>> {
    let g = group_from_inputs(&f.inputs, DEFAULT_ORDER_CAP)?;
    let opts = ReportOptions::default();
    let report: RealizationReport = if f.inputs["lift"].as_bool().unwrap_or(false) {
        enriques_realizable(&g, Mode::Metric, DEFAULT_ORDER_CAP, &opts)?.report
    } else {
        realize_k3(&g, &opts)?
    };
    let e = &f.expected;
    let mut out = vec![
        check(
            "metric verdict",
            e["metric"].as_bool() == Some(report.metric_verdict),
            format!("computed {}", report.metric_verdict),
        ),
        check(
            "complex verdict",
            e["complex"].as_bool() == Some(report.complex_verdict),
            format!("computed {}", report.complex_verdict),
        ),
        check(
            "rank of L_G",
            e["l_g_rank"].as_u64() == Some(report.l_g.rank() as u64),
            format!("computed {}", report.l_g.rank()),
        ),
        check("L_G negative definite", report.l_g.rank() == 0 || report.l_g.is_negative_definite(), ""),
    ];
    let n = report.group.rank();
    let basis = json_to_int_matrix(&e["l_g_basis"]).unwrap_or_else(|_| ZMatrix::empty(n));
    let basis = if basis.rows() == 0 { ZMatrix::empty(n) } else { basis };
    out.push(check("L_G basis", basis.hnf() == report.l_g_sublattice.basis().hnf(), "HNF comparison"));
    let want = json_to_int_matrix(&e["witnesses"]).unwrap_or_else(|_| ZMatrix::empty(n));
    let got: BTreeSet<Vec<BigInt>> = report.ambient_witnesses.iter().cloned().collect();
    out.push(check("(-2)-witnesses", vec_set(&want) == got, format!("{} computed", got.len())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fixture() {
        assert!(matches!(run_fixture("no-such-fixture"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn enriques_invariant_passes() {
        let r = run_fixture("enriques-invariant").unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }
}
