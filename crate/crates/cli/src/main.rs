use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use enriqueslab::cover::{descend_form, k3, model_by_name, transfer_composite};
use enriqueslab::fixtures;
use enriqueslab::group::{invariant_sublattice, ActionGroup, Isometry, DEFAULT_ORDER_CAP};
use enriqueslab::json::{int_matrix_to_json, json_to_int_matrix, json_to_int_vec};
use enriqueslab::matrix::qi;
use enriqueslab::realization::{
    dehn_twist_reflection, enriques_realizable, find_invariant_positive_3plane, lift_isometry, realization_invariant,
    Mode, PlaneOptions, ReportOptions, Splitting,
};
use enriqueslab::{short_vectors_with, EnumOptions, Error, Lattice, QMatrix};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "enriqueslab", version, about = "Integral lattices with finite isometry group actions")]
struct Cli {
    #[command(flatten)]
    global: GlobalFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct GlobalFlags {
    /// Node budget for short vector enumeration.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Largest group order accepted when closing generators.
    #[arg(long = "order-cap", global = true)]
    order_cap: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Invariance tolerance of the numeric plane search.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Seed of the numeric plane search.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// TOML file with any of the flags above; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Metric,
    Complex,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Metric => Mode::Metric,
            ModeArg::Complex => Mode::Complex,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants of a lattice and optionally its vectors of a given norm.
    Lattice {
        /// Registry name (`K3`, `Enriques`, `U`, `E8(-1)`, ...), JSON, or a JSON file.
        input: String,
        /// List all vectors of this (negative) norm.
        #[arg(long = "short-vectors", allow_hyphen_values = true)]
        short_vectors: Option<i64>,
    },
    /// Fixed sublattice of a group, or the lattices of a cover model.
    Invariant {
        /// Group as `{"lattice", "generators"}`, inline or as a file.
        #[arg(long, conflicts_with = "model", required_unless_present = "model")]
        group: Option<String>,
        /// Cover model: `enriques`, `hilb:<n>` or `kummer:<d>:<n>`.
        #[arg(long)]
        model: Option<String>,
    },
    /// Realization verdict for a group acting on the K3 lattice.
    RealizeK3 {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Realization verdict for a group acting on `U + E8(-1)`, through its lift.
    RealizeEnriques {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Lift an isometry of `U + E8(-1)` to the K3 lattice.
    Lift {
        /// Matrix, or `{"matrix": ...}`, inline or as a file.
        #[arg(long)]
        isometry: String,
    },
    /// Reflection in a (-2)-vector; on `U + E8(-1)` also its lift and splitting.
    Twist {
        #[arg(long, default_value = "Enriques")]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Recompute the bundled fixtures.
    Examples {
        #[arg(long, conflicts_with = "name")]
        all: bool,
        #[arg(long)]
        name: Option<String>,
        /// List the fixture names.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    budget: Option<u64>,
    order_cap: Option<usize>,
    threads: Option<usize>,
    format: Option<Format>,
    tolerance: Option<f64>,
    seed: Option<u64>,
    mode: Option<ModeArg>,
}

struct Settings {
    budget: u64,
    order_cap: usize,
    threads: Option<usize>,
    format: Format,
    tolerance: f64,
    seed: u64,
    mode: Option<ModeArg>,
}

impl Settings {
    fn resolve(flags: &GlobalFlags) -> Result<Settings, Failure> {
        let file = match &flags.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
                toml::from_str::<FileConfig>(&text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?
            }
            None => FileConfig::default(),
        };
        let plane = PlaneOptions::default();
        Ok(Settings {
            budget: flags.budget.or(file.budget).unwrap_or(EnumOptions::default().budget),
            order_cap: flags.order_cap.or(file.order_cap).unwrap_or(DEFAULT_ORDER_CAP),
            threads: flags.threads.or(file.threads),
            format: flags.format.or(file.format).unwrap_or(Format::Json),
            tolerance: flags.tolerance.or(file.tolerance).unwrap_or(plane.tolerance),
            seed: flags.seed.or(file.seed).unwrap_or(plane.seed),
            mode: file.mode,
        })
    }

    fn report_options(&self) -> ReportOptions {
        let mut o = ReportOptions::default();
        o.enumeration.budget = self.budget;
        o.plane.tolerance = self.tolerance;
        o.plane.seed = self.seed;
        o
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EnumerationBudgetExceeded { .. } | Error::Cancelled => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Inline JSON, a path to a JSON file, or a bare string.
fn read_input(arg: &str) -> Result<Value, Failure> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return serde_json::from_str(arg).map_err(|e| Failure::input(format!("inline JSON: {e}")));
    }
    let p = Path::new(arg);
    if p.is_file() {
        let text = std::fs::read_to_string(p).map_err(|e| Failure::input(format!("{arg}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| Failure::input(format!("{arg}: {e}")));
    }
    Ok(Value::String(arg.to_string()))
}

fn read_group(arg: &str, cap: usize) -> Result<ActionGroup, Failure> {
    let v = read_input(arg)?;
    if v.is_string() {
        return Err(Failure::input(format!("{arg}: no such file")));
    }
    Ok(ActionGroup::from_json(&v, cap)?)
}

/// Exit code and JSON payload of a successful run.
type Outcome = (u8, Value);

fn run(cmd: &Command, s: &Settings) -> Result<Outcome, Failure> {
    match cmd {
        Command::Lattice { input, short_vectors } => {
            let l = Lattice::from_json(&read_input(input)?)?;
            let mut out = json!({ "lattice": l.to_json(), "invariants": l.invariants().to_json() });
            if let Some(t) = short_vectors {
                let opts = EnumOptions { budget: s.budget, ..Default::default() };
                out["short_vectors"] = short_vectors_with(&l, *t, &opts)?.to_json();
            }
            Ok((0, out))
        }
        Command::Invariant { group, model } => {
            if let Some(name) = model {
                let m = model_by_name(name)?;
                let image = m.pullback_image();
                let transfer = transfer_composite(&m)?;
                let quotient = descend_form(&image, m.d as i64)?;
                Ok((
                    0,
                    json!({
                        "model": m.to_json(),
                        "invariant": m.invariant.to_json(),
                        "invariant_form": m.invariant.restrict_form().invariants().to_json(),
                        "pullback_image_form": image.restrict_form().invariants().to_json(),
                        "quotient_form": quotient.invariants().to_json(),
                        "transfer_composite_is_d": transfer.composite == QMatrix::identity(m.downstairs.rank()).scale(&qi(m.d as i64)),
                    }),
                ))
            } else {
                let g = read_group(group.as_deref().unwrap_or_default(), s.order_cap)?;
                let inv = invariant_sublattice(&g);
                Ok((
                    0,
                    json!({
                        "group_order": g.order(),
                        "invariant": inv.to_json(),
                        "invariants": inv.restrict_form().invariants().to_json(),
                    }),
                ))
            }
        }
        Command::RealizeK3 { group, mode } => {
            let g = read_group(group, s.order_cap)?;
            let mode: Mode = mode.or(s.mode).unwrap_or(ModeArg::Metric).into();
            let opts = s.report_options();
            let p = find_invariant_positive_3plane(&g, &opts.plane)?;
            let rep = realization_invariant(&g, &p, &opts)?;
            let ok = rep.verdict(mode);
            let mut out = rep.to_json();
            out["mode"] = json!(mode.as_str());
            out["realizable"] = json!(ok);
            Ok((if ok { 0 } else { 1 }, out))
        }
        Command::RealizeEnriques { group, mode } => {
            let g = read_group(group, s.order_cap)?;
            if *g.lattice() != Lattice::enriques() {
                return Err(Failure::input("group must act on U + E8(-1)"));
            }
            let mode: Mode = mode.or(s.mode).unwrap_or(ModeArg::Metric).into();
            let rep = enriques_realizable(&g, mode, s.order_cap, &s.report_options())?;
            Ok((if rep.realizable { 0 } else { 1 }, rep.to_json()))
        }
        Command::Lift { isometry } => {
            let v = read_input(isometry)?;
            let m = if v.get("matrix").is_some() { &v["matrix"] } else { &v };
            let phi = Isometry::new(&Lattice::enriques(), json_to_int_matrix(m)?)?;
            let lifted = lift_isometry(&phi)?;
            let iota = k3::iota_matrix();
            Ok((
                0,
                json!({
                    "lift": int_matrix_to_json(lifted.matrix()),
                    "commutes_with_iota": lifted.matrix().mul(&iota) == iota.mul(lifted.matrix()),
                }),
            ))
        }
        Command::Twist { lattice, vector } => {
            let l = Lattice::from_json(&read_input(lattice)?)?;
            let v = json_to_int_vec(&read_input(vector)?)?;
            let r = dehn_twist_reflection(&l, &v)?;
            let mut out = json!({ "reflection": int_matrix_to_json(r.matrix()) });
            if l == Lattice::enriques() {
                let sp = Splitting::of(&v);
                out["lift"] = int_matrix_to_json(lift_isometry(&r)?.matrix());
                out["splitting"] = sp.to_json();
            }
            Ok((0, out))
        }
        Command::Examples { all, name, list } => {
            if *list {
                return Ok((0, json!(fixtures::fixture_names()?)));
            }
            let reports = match (all, name) {
                (_, Some(n)) => vec![fixtures::run_fixture(n)?],
                (true, None) => fixtures::run_all()?,
                (false, None) => return Err(Failure::input("pass --all, --name <fixture> or --list")),
            };
            let ok = reports.iter().all(|r| r.passed());
            let out = json!({
                "passed": ok,
                "count": reports.len(),
                "fixtures": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            Ok((if ok { 0 } else { 1 }, out))
        }
    }
}

/// One `key  value` line per scalar, with dotted keys for nested objects;
/// long arrays are summarized.
fn table(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, rows);
                }
            }
            Value::String(s) => rows.push((prefix.to_string(), s.clone())),
            Value::Array(a) => {
                let text = v.to_string();
                let cell = if text.len() <= 100 {
                    text
                } else if a.iter().all(|r| r.get(0).is_some_and(Value::is_array)) {
                    format!("<{} matrices>", a.len())
                } else if a.iter().all(|r| r.is_array()) {
                    let cols = a[0].as_array().map_or(0, |r| r.len());
                    format!("<{} x {cols} matrix>", a.len())
                } else {
                    format!("<{} entries>", a.len())
                };
                rows.push((prefix.to_string(), cell));
            }
            other => rows.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, c)| format!("{k:<w$}  {c}\n")).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match Settings::resolve(&cli.global) {
        Ok(s) => s,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    if let Some(n) = settings.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli.command, &settings) {
        Ok((code, v)) => {
            match settings.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&v).expect("serializable")),
                Format::Table => print!("{}", table(&v)),
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
