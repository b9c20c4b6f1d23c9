//! Command line front end.
//!
//! Every subcommand writes JSON or CSV to stdout together with a run
//! manifest; failures print one `error[kind]: message` line to stderr.
//! Usage and parse errors exit with 2, domain errors with 1.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::confidence::{ConfidenceRule, Evidence};
use crate::error::Error;
use crate::kripke::{FrameConfig, ModalFormula, ModelCheckReport};
use crate::power::{self, PowerMethod};
use crate::region::RegionSet;
use crate::rigged;
use crate::severity::{self, Loss, Predictor, TheorySpec};
use crate::verdict::{run_test, Verdict};

/// Environment variable holding the default Monte Carlo seed.
pub const SEED_ENV: &str = "MODAL_CONFIRM_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "modal-confirm",
    version,
    about = "Trivalent confirmation tests from confidence regions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify one piece of evidence: confirm_null, confirm_alt, indecisive or refuted_all.
    ///
    /// The region c(E) confirms H0 when c(E) ⊆ H0, confirms H1 = H0ᶜ when
    /// c(E) ⊆ H1, and is indecisive when it meets both.
    Test(TestArgs),
    /// Power, partial decisive powers and indecisiveness along a theta grid (CSV).
    ///
    /// beta = P(□H1), delta0 = P(□H1), delta1 = P(□H0), delta = delta0 + delta1,
    /// indecisive = 1 − delta. Closed form for wald_normal rules, Monte Carlo with --mc.
    Power(PowerArgs),
    /// Worst-case probability of a decisive verdict for the wrong side over a grid (JSON).
    Dvalue(PowerArgs),
    /// Model-check a modal formula on a finite (theta, evidence) Kripke frame (JSON).
    ///
    /// Relations: w R_c v iff theta_v ∈ c(E_w); w R_E v iff E_w is a prefix of E_v.
    /// Operators: atom, not, and, or, boxC, diamondC, boxE, diamondE.
    Kripke(KripkeArgs),
    /// Rig a binomial confidence rule on one trigger string and bound its level (JSON).
    Rig(RigArgs),
    /// Exact coverage and topological coverage of a binomial rule (CSV).
    ///
    /// topo_coverage = P(theta ∈ c(E) and c(E) has nonempty interior), summed over all strings.
    TopoCoverage(TopoArgs),
    /// Severe test of a theory's empirical adequacy on a loss statistic (JSON).
    ///
    /// The mean loss is bounded by a Wald interval with the sample SD as plug-in sigma;
    /// the theory passes when the interval lies inside the adequacy hypothesis.
    Adequacy(AdequacyArgs),
}

/// JSON arguments accept a file path or inline JSON.
#[derive(Debug, Args)]
struct TestArgs {
    /// Confidence rule, e.g. {"constructor":"wald_normal","alpha":0.05,"sigma":1}
    #[arg(long)]
    rule: String,
    /// Observations: a JSON array, a bit string, or {"observations": ...}
    #[arg(long)]
    evidence: String,
    /// Null hypothesis region.
    #[arg(long)]
    null: String,
}

#[derive(Debug, Args)]
struct PowerArgs {
    #[arg(long)]
    null: String,
    #[arg(long)]
    rule: String,
    /// Grid as start:stop:count, inclusive.
    #[arg(long, allow_hyphen_values = true)]
    theta_grid: String,
    #[arg(long)]
    n: usize,
    /// Monte Carlo replicates and optional seed (default from MODAL_CONFIRM_SEED, else 0).
    #[arg(long, num_args = 1..=2, value_names = ["REPS", "SEED"])]
    mc: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
struct KripkeArgs {
    /// Frame: {grid, alphabet, horizon, rule, atoms, semantics?, pep_radius?}
    #[arg(long)]
    frame: String,
    /// S-expression such as (diamondE (diamondC (atom H)))
    #[arg(long)]
    formula: String,
    /// Also report PEP failures at grid resolution.
    #[arg(long)]
    pep: bool,
}

#[derive(Debug, Args)]
struct RigArgs {
    /// Base binomial rule.
    #[arg(long)]
    base: String,
    /// Full-length trigger string such as 1011000.
    #[arg(long)]
    trigger: String,
    /// Region returned on the trigger.
    #[arg(long)]
    payload: String,
    #[arg(long, default_value = "0:1:101", allow_hyphen_values = true)]
    grid: String,
}

#[derive(Debug, Args)]
struct TopoArgs {
    #[arg(long)]
    rule: String,
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    /// Length of the enumerated strings.
    #[arg(long, default_value_t = 7)]
    horizon: usize,
}

#[derive(Debug, Args)]
struct AdequacyArgs {
    /// CSV with header input,predicted,actual, or input,actual with --predictor.
    #[arg(long)]
    data: String,
    #[arg(long)]
    margin: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "absolute")]
    loss: LossArg,
    /// Built-in predictor used when the data has no predicted column.
    #[arg(long, value_enum)]
    predictor: Option<PredictorArg>,
    /// Constant prediction.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    value: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    slope: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    intercept: f64,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum LossArg {
    Absolute,
    Squared,
    Signed,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum PredictorArg {
    Constant,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Canonical JSON of every input, keys sorted.
    pub config: Value,
    pub seed: Option<u64>,
    pub tool_version: String,
}

/// A JSON result with its manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Output<T> {
    pub manifest: RunManifest,
    #[serde(flatten)]
    pub result: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KripkeOutput {
    #[serde(flatten)]
    pub report: ModelCheckReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pep: Option<PepSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PepSummary {
    pub pep_radius: usize,
    pub failures: usize,
    pub certified_depth: Option<usize>,
    /// Up to ten `(θ, evidence)` failures.
    pub counterexamples: Vec<(f64, String)>,
}

enum Failure {
    Usage(String),
    Parse(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let line = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "error[usage]: {line}");
            return 2;
        }
    };
    match run(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error[usage]: {m}");
            2
        }
        Err(Failure::Parse(m)) => {
            let _ = writeln!(err, "error[parse]: {m}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error[{}]: {}", e.kind(), one_line(&e.to_string()));
            1
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn load_text(arg: &str) -> CliResult<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg))
        .map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))
}

fn load_json(what: &str, arg: &str) -> CliResult<Value> {
    let text = load_text(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{what}: {e}")))
}

fn parse_as<T: serde::de::DeserializeOwned>(what: &str, arg: &str) -> CliResult<(T, Value)> {
    let text = load_text(arg)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{what}: {e}")))?;
    let parsed = serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{what}: {e}")))?;
    Ok((parsed, value))
}

/// `a:b:k` → k evenly spaced points from a to b inclusive.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, k] = parts.as_slice() else {
        return Err(format!("grid {spec:?} is not start:stop:count"));
    };
    let a: f64 = a
        .trim()
        .parse()
        .map_err(|_| format!("grid start {a:?} is not a number"))?;
    let b: f64 = b
        .trim()
        .parse()
        .map_err(|_| format!("grid stop {b:?} is not a number"))?;
    let k: usize = k
        .trim()
        .parse()
        .map_err(|_| format!("grid count {k:?} is not a positive integer"))?;
    if !(a.is_finite() && b.is_finite()) || k == 0 {
        return Err(format!(
            "grid {spec:?} needs finite bounds and a positive count"
        ));
    }
    Ok(power::linspace(a, b, k))
}

/// Shortest `%.17g`-style rendering: 17 significant digits, trailing zeros
/// dropped, so every value reparses to the same f64.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..17).contains(&exp) {
        trim(&format!("{x:.*}", (16 - exp) as usize))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn manifest(subcommand: &str, config: Value, seed: Option<u64>) -> RunManifest {
    RunManifest {
        subcommand: subcommand.into(),
        config,
        seed,
        tool_version: env!("CARGO_PKG_VERSION").into(),
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, manifest: RunManifest, result: T) -> CliResult<()> {
    let text =
        serde_json::to_string_pretty(&Output { manifest, result }).expect("serializable output");
    writeln!(out, "{text}").map_err(|e| Failure::Usage(format!("write failed: {e}")))
}

fn emit_csv(
    out: &mut dyn Write,
    manifest: &RunManifest,
    header: &str,
    rows: &[Vec<String>],
) -> CliResult<()> {
    let io = |e: std::io::Error| Failure::Usage(format!("write failed: {e}"));
    writeln!(
        out,
        "# manifest {}",
        serde_json::to_string(manifest).expect("manifest")
    )
    .map_err(io)?;
    writeln!(out, "{header}").map_err(io)?;
    for r in rows {
        writeln!(out, "{}", r.join(",")).map_err(io)?;
    }
    Ok(())
}

fn default_seed() -> CliResult<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}={s:?} is not an integer"))),
        Err(_) => Ok(0),
    }
}

fn method_from(mc: &Option<Vec<u64>>) -> CliResult<PowerMethod> {
    Ok(match mc.as_deref() {
        None => PowerMethod::ClosedForm,
        Some([reps]) => PowerMethod::MonteCarlo {
            reps: *reps,
            seed: default_seed()?,
        },
        Some([reps, seed]) => PowerMethod::MonteCarlo {
            reps: *reps,
            seed: *seed,
        },
        Some(_) => unreachable!("clap limits --mc to two values"),
    })
}

fn seed_of(method: PowerMethod) -> Option<u64> {
    match method {
        PowerMethod::ClosedForm => None,
        PowerMethod::MonteCarlo { seed, .. } => Some(seed),
    }
}

fn evidence_for(rule: &ConfidenceRule, value: &Value) -> CliResult<Evidence> {
    let obs = match value {
        Value::Object(m) => m
            .get("observations")
            .ok_or_else(|| Failure::Parse("evidence: expected an \"observations\" key".into()))?,
        other => other,
    };
    let len = match obs {
        Value::Array(a) => a.len(),
        Value::String(s) => s.chars().count(),
        _ => 0,
    };
    let model = rule.sampling_model(len)?;
    Ok(Evidence::from_json(model, obs)?)
}

fn run(command: Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Test(a) => {
            let (rule, rule_v) = parse_as::<ConfidenceRule>("rule", &a.rule)?;
            let (null, null_v) = parse_as::<RegionSet>("null", &a.null)?;
            let ev_v = load_json("evidence", &a.evidence)?;
            let evidence = evidence_for(&rule, &ev_v)?;
            let verdict: Verdict = run_test(&rule, &evidence, &null)?;
            let m = manifest(
                "test",
                json!({"rule": rule_v, "null": null_v, "evidence": ev_v}),
                None,
            );
            emit_json(out, m, verdict)
        }
        Command::Power(a) => {
            let (rule, rule_v) = parse_as::<ConfidenceRule>("rule", &a.rule)?;
            let (null, null_v) = parse_as::<RegionSet>("null", &a.null)?;
            let grid = parse_grid(&a.theta_grid).map_err(Failure::Usage)?;
            let method = method_from(&a.mc)?;
            let points = power::power_curve(&null, &rule, &grid, a.n, method)?;
            let m = manifest(
                "power",
                json!({"rule": rule_v, "null": null_v, "theta_grid": a.theta_grid, "n": a.n, "method": method}),
                seed_of(method),
            );
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|p| {
                    vec![
                        fmt17(p.theta),
                        p.n.to_string(),
                        fmt17(p.beta),
                        fmt17(p.delta0),
                        fmt17(p.delta1),
                        fmt17(p.delta),
                        fmt17(p.indecisive),
                        p.method.label(),
                    ]
                })
                .collect();
            emit_csv(
                out,
                &m,
                "theta,n,beta,delta0,delta1,delta,indecisive,method",
                &rows,
            )
        }
        Command::Dvalue(a) => {
            let (rule, rule_v) = parse_as::<ConfidenceRule>("rule", &a.rule)?;
            let (null, null_v) = parse_as::<RegionSet>("null", &a.null)?;
            let grid = parse_grid(&a.theta_grid).map_err(Failure::Usage)?;
            let method = method_from(&a.mc)?;
            let report = power::d_value(&null, &rule, &grid, a.n, method)?;
            let m = manifest(
                "dvalue",
                json!({"rule": rule_v, "null": null_v, "theta_grid": a.theta_grid, "n": a.n, "method": method}),
                seed_of(method),
            );
            emit_json(out, m, report)
        }
        Command::Kripke(a) => {
            let (cfg, cfg_v) = parse_as::<FrameConfig>("frame", &a.frame)?;
            let frame = cfg.build()?;
            let formula = ModalFormula::parse(&a.formula, &cfg.atoms).map_err(|e| match e {
                Error::InvalidParameter(m) => Failure::Parse(m),
                other => Failure::Domain(other),
            })?;
            let report = frame.model_check(&formula)?;
            let pep = if a.pep {
                let bad = frame.check_pep()?;
                Some(PepSummary {
                    pep_radius: frame.pep_radius(),
                    failures: bad.len(),
                    certified_depth: frame.pep_certified_depth()?,
                    counterexamples: bad
                        .iter()
                        .take(10)
                        .map(|c| (c.theta, crate::kripke::evidence_label(&c.evidence)))
                        .collect(),
                })
            } else {
                None
            };
            let m = manifest(
                "kripke",
                json!({"frame": cfg_v, "formula": a.formula, "pep": a.pep}),
                None,
            );
            emit_json(out, m, KripkeOutput { report, pep })
        }
        Command::Rig(a) => {
            let (base, base_v) = parse_as::<ConfidenceRule>("base", &a.base)?;
            let (payload, payload_v) = parse_as::<RegionSet>("payload", &a.payload)?;
            let grid = parse_grid(&a.grid).map_err(Failure::Usage)?;
            let trigger = Evidence::bitstring(a.trigger.len().max(1), &a.trigger)?;
            let demo = rigged::rigged_level(&base, &trigger, &payload, &grid)?;
            let m = manifest(
                "rig",
                json!({"base": base_v, "payload": payload_v, "trigger": a.trigger, "grid": a.grid}),
                None,
            );
            emit_json(out, m, demo)
        }
        Command::TopoCoverage(a) => {
            let (rule, rule_v) = parse_as::<ConfidenceRule>("rule", &a.rule)?;
            let grid = parse_grid(&a.grid).map_err(Failure::Usage)?;
            let points = rigged::topological_coverage(&rule, a.horizon, &grid)?;
            let m = manifest(
                "topo-coverage",
                json!({"rule": rule_v, "grid": a.grid, "horizon": a.horizon}),
                None,
            );
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|p| {
                    vec![
                        fmt17(p.theta),
                        fmt17(p.coverage),
                        fmt17(p.topo_coverage),
                        fmt17(p.interior_prob),
                    ]
                })
                .collect();
            emit_csv(out, &m, "theta,coverage,topo_coverage,interior_prob", &rows)
        }
        Command::Adequacy(a) => {
            let text = std::fs::read_to_string(&a.data)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", a.data)))?;
            let table = parse_csv(&text).map_err(Failure::Parse)?;
            let loss = match a.loss {
                LossArg::Absolute => Loss::Absolute,
                LossArg::Squared => Loss::Squared,
                LossArg::Signed => Loss::Signed,
            };
            let predictor = a.predictor.map(|p| match p {
                PredictorArg::Constant => Predictor::Constant { value: a.value },
                PredictorArg::Linear => Predictor::Linear {
                    slope: a.slope,
                    intercept: a.intercept,
                },
            });
            let result = match (predictor, table.column("predicted")) {
                (Some(p), _) => {
                    let spec = TheorySpec {
                        predictor: p,
                        loss,
                        margin: a.margin,
                        alpha: a.alpha,
                    };
                    severity::test_adequacy(
                        &spec,
                        &table.required("input")?,
                        &table.required("actual")?,
                    )?
                }
                (None, Some(pred)) => severity::test_adequacy_with_predictions(
                    loss,
                    a.margin,
                    a.alpha,
                    &pred,
                    &table.required("actual")?,
                )?,
                (None, None) => {
                    return Err(Failure::Usage(
                        "data has no predicted column; pass --predictor".into(),
                    ))
                }
            };
            let m = manifest(
                "adequacy",
                json!({
                    "data": table.to_json(),
                    "margin": a.margin,
                    "alpha": a.alpha,
                    "loss": loss,
                    "predictor": predictor,
                }),
                None,
            );
            emit_json(out, m, result)
        }
    }
}

#[derive(Debug)]
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    fn required(&self, name: &str) -> CliResult<Vec<f64>> {
        self.column(name)
            .ok_or_else(|| Failure::Parse(format!("data: missing column {name:?}")))
    }

    fn to_json(&self) -> Value {
        json!({"header": self.header, "rows": self.rows})
    }
}

/// Numeric CSV with a header row; blank lines and `#` comments are skipped.
fn parse_csv(text: &str) -> Result<Table, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, head) = lines.next().ok_or("data: empty file")?;
    let header: Vec<String> = head.split(',').map(|h| h.trim().to_lowercase()).collect();
    let mut rows = Vec::new();
    for (line, l) in lines {
        let cells: Vec<&str> = l.split(',').collect();
        if cells.len() != header.len() {
            return Err(format!(
                "data: line {line} has {} fields, expected {}",
                cells.len(),
                header.len()
            ));
        }
        let row = cells
            .iter()
            .enumerate()
            .map(|(col, c)| {
                c.trim().parse::<f64>().map_err(|_| {
                    format!(
                        "data: line {line} column {} is not a number: {c:?}",
                        col + 1
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confidence::ConfidenceFunction;

    #[test]
    fn fmt17_round_trips() {
        for x in [
            0.1,
            1.0 / 3.0,
            1e-300,
            -2.5e20,
            123456.789,
            0.025,
            5e-324,
            f64::MAX,
        ] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt17(0.5), "0.5");
        assert_eq!(fmt17(0.1), "0.10000000000000001");
        assert_eq!(fmt17(100.0), "100");
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("-1:1:41").unwrap();
        assert_eq!((g.len(), g[0], g[40]), (41, -1.0, 1.0));
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a:1:3").is_err());
    }

    #[test]
    fn csv_parsing() {
        let t = parse_csv("input,actual\n# note\n1,2\n3,4\n").unwrap();
        assert_eq!(t.column("actual").unwrap(), vec![2.0, 4.0]);
        assert!(parse_csv("a,b\n1\n").unwrap_err().contains("line 2"));
    }

    #[test]
    fn rule_ambient_visible() {
        let (rule, _) =
            parse_as::<ConfidenceRule>("rule", r#"{"constructor":"wald_binomial","alpha":0.05}"#)
                .ok()
                .unwrap();
        assert_eq!(rule.ambient(), crate::region::Interval::unit());
    }
}
