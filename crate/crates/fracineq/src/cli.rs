//! Command-line front end: plan parsing, execution, report emission.
//!
//! Precedence for every setting is flags > config file > environment >
//! built-in default. A parsed [`RunPlan`] can be rendered back to an
//! argument vector and re-parsed to the identical plan, so runs are
//! reproducible from their serialized form alone.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use serde::Serialize;

use crate::catalog::{self, CertPolicy, CorollaryId, InequalityId, ReductionKind};
use crate::error::{Error, Result};
use crate::funclasses::{EtaKind, Family, FunctionSpec, HClass, InvexityMap, Scenario};
use crate::harness::{self, AuditReport, Classification, GenConfig, RunSummary, SearchConfig};
use crate::quad::QuadConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Verify,
    Audit,
    Search,
    Reduce,
}

impl CommandKind {
    fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Verify => "verify",
            CommandKind::Audit => "audit",
            CommandKind::Search => "search",
            CommandKind::Reduce => "reduce",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Jsonl,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(OutputFormat::Jsonl),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Usage(format!("unknown format '{other}' (expected jsonl or csv)"))),
        }
    }
}

/// A fully resolved, serializable run description.
///
/// Textual fields keep the canonical grammar form (`poly:…`, `pow:…`)
/// so the plan round-trips through `render` without loss.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunPlan {
    pub command: CommandKind,
    pub ineqs: Vec<String>,
    pub corollaries: Vec<String>,
    pub f: Option<String>,
    pub h: Option<String>,
    pub eta: Option<String>,
    pub lambda: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub alpha: Option<f64>,
    pub alpha_grid: Option<(f64, f64, f64)>,
    pub s: Option<f64>,
    pub p: Option<f64>,
    pub reduction: Option<String>,
    pub seed: u64,
    pub n: usize,
    pub budget: usize,
    pub waive_certification: bool,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub quad_tol: Option<f64>,
}

#[derive(Parser, Debug)]
#[command(name = "fracineq", disable_help_flag = false)]
struct RawArgs {
    /// verify | audit | search | reduce
    command: String,
    #[arg(long, value_delimiter = ',')]
    ineq: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    corollary: Vec<String>,
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Grid as lo:hi:step (inclusive of hi up to rounding).
    #[arg(long = "alpha-grid")]
    alpha_grid: Option<String>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// Reduction kind for `reduce`: alpha_one | phi_zero | both.
    #[arg(long)]
    reduction: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long = "waive-certification", default_value_t = false)]
    waive_certification: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Flat `key = value` file with `#` comments.
fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Usage(format!(
                "{}:{}: expected 'key = value', got '{raw}'",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_grid_spec(spec: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Usage(format!("--alpha-grid expects lo:hi:step, got '{spec}'")));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|t| t.parse::<f64>().map_err(|_| Error::Usage(format!("bad grid number '{t}'"))))
        .collect::<Result<_>>()?;
    let (lo, hi, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || hi < lo {
        return Err(Error::Usage(format!("--alpha-grid needs lo <= hi and step > 0, got '{spec}'")));
    }
    Ok((lo, hi, step))
}

pub fn expand_grid((lo, hi, step): (f64, f64, f64)) -> Vec<f64> {
    let count = ((hi - lo) / step + 1.0 + 1e-9).floor() as usize;
    (0..count).map(|i| lo + step * i as f64).collect()
}

fn merge<T, F>(flag: Option<T>, config: Option<&String>, parse: F) -> Result<Option<T>>
where
    F: FnOnce(&str) -> Result<T>,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => config.map(|v| parse(v)).transpose(),
    }
}

fn parse_f64(key: &'static str) -> impl FnOnce(&str) -> Result<f64> {
    move |v| v.parse::<f64>().map_err(|_| Error::Usage(format!("config key {key}: bad number '{v}'")))
}

/// Parse an argument vector (without the program name), an environment
/// map, and an optional `--config` file into a resolved plan.
pub fn parse_args<I, S>(argv: I, env: &BTreeMap<String, String>) -> Result<RunPlan>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut full: Vec<String> = vec!["fracineq".to_string()];
    full.extend(argv.into_iter().map(Into::into));
    let raw = RawArgs::try_parse_from(&full).map_err(|e| Error::Usage(e.to_string()))?;

    let command = match raw.command.as_str() {
        "verify" => CommandKind::Verify,
        "audit" => CommandKind::Audit,
        "search" => CommandKind::Search,
        "reduce" => CommandKind::Reduce,
        other => return Err(Error::Usage(format!("unknown command '{other}'"))),
    };

    let cfg = match &raw.config {
        Some(path) => parse_config_file(path)?,
        None => BTreeMap::new(),
    };

    // Validate ids eagerly and store their canonical rendering.
    let mut ineqs = raw.ineq;
    if ineqs.is_empty() {
        if let Some(v) = cfg.get("ineq") {
            ineqs = v.split(',').map(|t| t.trim().to_string()).collect();
        }
    }
    let ineqs = ineqs
        .iter()
        .map(|t| InequalityId::from_str(t).map(|id| id.to_string()))
        .collect::<Result<Vec<_>>>()?;

    let mut corollaries = raw.corollary;
    if corollaries.is_empty() {
        if let Some(v) = cfg.get("corollary") {
            corollaries = v.split(',').map(|t| t.trim().to_string()).collect();
        }
    }
    let corollaries = corollaries
        .iter()
        .map(|t| CorollaryId::from_str(t).map(|id| id.to_string()))
        .collect::<Result<Vec<_>>>()?;

    let f = merge(raw.f, cfg.get("f"), |v| {
        Family::from_str(v)?;
        Ok(v.to_string())
    })?;
    let h = merge(raw.h, cfg.get("h"), |v| {
        HClass::from_str(v)?;
        Ok(v.to_string())
    })?;
    let eta = merge(raw.eta, cfg.get("eta"), |v| {
        EtaKind::from_str(v)?;
        Ok(v.to_string())
    })?;
    let lambda = merge(raw.lambda, cfg.get("lambda"), parse_f64("lambda"))?;
    let a = merge(raw.a, cfg.get("a"), parse_f64("a"))?;
    let b = merge(raw.b, cfg.get("b"), parse_f64("b"))?;
    let alpha = merge(raw.alpha, cfg.get("alpha"), parse_f64("alpha"))?;
    let s = merge(raw.s, cfg.get("s"), parse_f64("s"))?;
    let p = merge(raw.p, cfg.get("p"), parse_f64("p"))?;
    let alpha_grid = merge(raw.alpha_grid, cfg.get("alpha_grid"), |v| Ok(v.to_string()))?
        .map(|spec| parse_grid_spec(&spec))
        .transpose()?;
    let reduction = merge(raw.reduction, cfg.get("reduction"), |v| {
        ReductionKind::from_str(v)?;
        Ok(v.to_string())
    })?;

    let seed = merge(raw.seed, cfg.get("seed"), |v| {
        v.parse::<u64>().map_err(|_| Error::Usage(format!("bad seed '{v}'")))
    })?
    .unwrap_or(0);
    let n = merge(raw.n, cfg.get("n"), |v| {
        v.parse::<usize>().map_err(|_| Error::Usage(format!("bad n '{v}'")))
    })?
    .unwrap_or(10);
    let budget = merge(raw.budget, cfg.get("budget"), |v| {
        v.parse::<usize>().map_err(|_| Error::Usage(format!("bad budget '{v}'")))
    })?
    .unwrap_or(200);
    let waive = raw.waive_certification
        || cfg.get("waive_certification").map(|v| v == "true").unwrap_or(false);
    let format = match merge(raw.format, cfg.get("format"), |v| Ok(v.to_string()))? {
        Some(v) => OutputFormat::from_str(&v)?,
        None => OutputFormat::Jsonl,
    };
    let out = match raw.out {
        Some(v) => Some(v),
        None => cfg.get("out").map(PathBuf::from),
    };
    let quad_tol = match cfg.get("quad_tol") {
        Some(v) => Some(parse_f64("quad_tol")(v)?),
        None => match env.get("FRACINEQ_QUAD_TOL") {
            Some(v) => Some(
                v.parse::<f64>()
                    .map_err(|_| Error::Usage(format!("FRACINEQ_QUAD_TOL: bad number '{v}'")))?,
            ),
            None => None,
        },
    };

    Ok(RunPlan {
        command,
        ineqs,
        corollaries,
        f,
        h,
        eta,
        lambda,
        a,
        b,
        alpha,
        alpha_grid,
        s,
        p,
        reduction,
        seed,
        n,
        budget,
        waive_certification: waive,
        out,
        format,
        quad_tol,
    })
}

/// Render a plan back to an argument vector such that
/// `parse_args(render(plan)) == plan`.
pub fn render(plan: &RunPlan) -> Vec<String> {
    let mut argv = vec![plan.command.as_str().to_string()];
    // single `--flag=value` tokens so negative numbers survive re-parsing
    fn push_into(argv: &mut Vec<String>, flag: &str, value: String) {
        argv.push(format!("{flag}={value}"));
    }
    if !plan.ineqs.is_empty() {
        push_into(&mut argv, "--ineq", plan.ineqs.join(","));
    }
    if !plan.corollaries.is_empty() {
        push_into(&mut argv, "--corollary", plan.corollaries.join(","));
    }
    if let Some(v) = &plan.f {
        push_into(&mut argv, "--f", v.clone());
    }
    if let Some(v) = &plan.h {
        push_into(&mut argv, "--h", v.clone());
    }
    if let Some(v) = &plan.eta {
        push_into(&mut argv, "--eta", v.clone());
    }
    for (flag, v) in [
        ("--lambda", plan.lambda),
        ("--a", plan.a),
        ("--b", plan.b),
        ("--alpha", plan.alpha),
        ("--s", plan.s),
        ("--p", plan.p),
    ] {
        if let Some(v) = v {
            push_into(&mut argv, flag, format!("{v}"));
        }
    }
    if let Some((lo, hi, step)) = plan.alpha_grid {
        push_into(&mut argv, "--alpha-grid", format!("{lo}:{hi}:{step}"));
    }
    if let Some(v) = &plan.reduction {
        push_into(&mut argv, "--reduction", v.clone());
    }
    push_into(&mut argv, "--seed", plan.seed.to_string());
    push_into(&mut argv, "--n", plan.n.to_string());
    push_into(&mut argv, "--budget", plan.budget.to_string());
    if plan.waive_certification {
        argv.push("--waive-certification".to_string());
    }
    if let Some(out) = &plan.out {
        push_into(&mut argv, "--out", out.display().to_string());
    }
    push_into(&mut argv, 
        "--format",
        match plan.format {
            OutputFormat::Jsonl => "jsonl".to_string(),
            OutputFormat::Csv => "csv".to_string(),
        },
    );
    argv
}

fn quad_config(plan: &RunPlan) -> QuadConfig {
    let mut cfg = QuadConfig::default();
    if let Some(tol) = plan.quad_tol {
        cfg.abs_tol = tol;
        cfg.rel_tol = tol;
    }
    cfg
}

fn plan_scenario(plan: &RunPlan) -> Result<Option<Scenario>> {
    let Some(f_text) = &plan.f else {
        return Ok(None);
    };
    let family = Family::from_str(f_text)?;
    let a = plan.a.ok_or(Error::MissingParameter("--a"))?;
    let b = plan.b.ok_or(Error::MissingParameter("--b"))?;
    let alpha = plan.alpha.ok_or(Error::MissingParameter("--alpha"))?;
    let h = match &plan.h {
        Some(t) => HClass::from_str(t)?,
        None => HClass::Identity,
    };
    let eta = match &plan.eta {
        Some(t) => EtaKind::from_str(t)?,
        None => EtaKind::Difference,
    };
    let map = InvexityMap::new(eta, plan.lambda.unwrap_or(1.0))?;
    let scenario = Scenario {
        f: FunctionSpec::new(family, (a.min(b), a.max(b))),
        a,
        b,
        alpha,
        p: plan.p.unwrap_or(2.0),
        h,
        map,
        quad_cfg: quad_config(plan),
    };
    scenario.validate()?;
    Ok(Some(scenario))
}

fn json_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "null".to_string()
    }
}

fn json_str(v: &str) -> String {
    serde_json::to_string(v).unwrap_or_else(|_| "\"\"".to_string())
}

/// One uniform record shape for every command, with the fixed key
/// order id, scenario_digest, lhs, rhs, margin, quad_error,
/// holds-or-classification, seed.
#[derive(Clone, Debug)]
pub struct Record {
    pub id: String,
    pub scenario_digest: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub quad_error: f64,
    pub verdict: String,
    pub seed: u64,
}

impl Record {
    fn jsonl(&self) -> String {
        let verdict = match self.verdict.as_str() {
            "true" | "false" => self.verdict.clone(),
            other => json_str(other),
        };
        let key = if self.verdict == "true" || self.verdict == "false" {
            "holds"
        } else {
            "classification"
        };
        format!(
            "{{\"id\":{},\"scenario_digest\":{},\"lhs\":{},\"rhs\":{},\"margin\":{},\"quad_error\":{},\"{}\":{},\"seed\":{}}}",
            json_str(&self.id),
            json_str(&self.scenario_digest),
            json_f64(self.lhs),
            json_f64(self.rhs),
            json_f64(self.margin),
            json_f64(self.quad_error),
            key,
            verdict,
            self.seed
        )
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.id,
            self.scenario_digest,
            self.lhs,
            self.rhs,
            self.margin,
            self.quad_error,
            self.verdict,
            self.seed
        )
    }
}

pub fn records_from_summary(summary: &RunSummary) -> Vec<Record> {
    summary
        .entries
        .iter()
        .map(|e| match &e.report {
            Some(r) => Record {
                id: e.id.clone(),
                scenario_digest: e.scenario_digest.clone(),
                lhs: r.lhs,
                rhs: r.rhs,
                margin: r.margin,
                quad_error: r.quad_error,
                verdict: r.holds.to_string(),
                seed: summary.seed,
            },
            None => Record {
                id: e.id.clone(),
                scenario_digest: e.scenario_digest.clone(),
                lhs: f64::NAN,
                rhs: f64::NAN,
                margin: f64::NAN,
                quad_error: f64::NAN,
                verdict: format!("error: {}", e.error.clone().unwrap_or_default()),
                seed: summary.seed,
            },
        })
        .collect()
}

pub fn records_from_audits(reports: &[AuditReport], seed: u64) -> Vec<Record> {
    reports
        .iter()
        .map(|r| {
            let mut digest = format!("alpha={}", r.alpha);
            if let Some(s) = r.s {
                let _ = write!(digest, "|s={s}");
            }
            if let Some(p) = r.p {
                let _ = write!(digest, "|p={p}");
            }
            Record {
                id: r.corollary.clone(),
                scenario_digest: digest,
                lhs: r.printed_value,
                rhs: r.oracle_value,
                margin: r.printed_value - r.oracle_value,
                quad_error: r.oracle_error,
                verdict: r.classification.to_string(),
                seed,
            }
        })
        .collect()
}

/// Serialize records in the requested format.
pub fn emit_report(records: &[Record], format: OutputFormat) -> String {
    match format {
        OutputFormat::Jsonl => {
            let mut out = String::new();
            for r in records {
                out.push_str(&r.jsonl());
                out.push('\n');
            }
            out
        }
        OutputFormat::Csv => {
            let mut out =
                String::from("id,scenario_digest,lhs,rhs,margin,quad_error,verdict,seed\n");
            for r in records {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            out
        }
    }
}

/// Write via a temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let wrap = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source: e,
    };
    let tmp = path.with_extension("tmp");
    {
        let mut file = fs::File::create(&tmp).map_err(wrap)?;
        file.write_all(bytes).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        file.sync_all().ok();
    }
    fs::rename(&tmp, path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn deliver(plan: &RunPlan, payload: &str) -> Result<()> {
    match &plan.out {
        Some(path) => write_atomic(path, payload.as_bytes()),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

const REDUCTION_TOL: f64 = 1e-6;

fn run_reduce(plan: &RunPlan) -> Result<(Vec<Record>, bool)> {
    let scenario = match plan_scenario(plan)? {
        Some(s) => s,
        None => Scenario {
            f: FunctionSpec::new(Family::Poly(vec![0.0, 0.0, 1.0]), (0.0, 1.0)),
            a: 0.0,
            b: 1.0,
            alpha: 1.0,
            p: plan.p.unwrap_or(2.0),
            h: HClass::Identity,
            map: InvexityMap::new(EtaKind::Difference, 1.0)?,
            quad_cfg: quad_config(plan),
        },
    };
    let kinds: Vec<ReductionKind> = match &plan.reduction {
        Some(t) => vec![ReductionKind::from_str(t)?],
        None => vec![ReductionKind::AlphaOne, ReductionKind::PhiZero, ReductionKind::Both],
    };
    let mut records = Vec::new();
    let mut failed = false;
    for kind in kinds {
        let report = catalog::reduction_check(kind, &scenario)?;
        let ok = report.max_abs_discrepancy <= REDUCTION_TOL;
        failed |= !ok;
        records.push(Record {
            id: format!("reduce:{}", report.kind),
            scenario_digest: scenario.digest(),
            lhs: report.max_abs_discrepancy,
            rhs: REDUCTION_TOL,
            margin: REDUCTION_TOL - report.max_abs_discrepancy,
            quad_error: 0.0,
            verdict: ok.to_string(),
            seed: plan.seed,
        });
    }
    Ok((records, failed))
}

/// Execute a plan. Returns the process exit code (0 clean, 2 findings).
pub fn execute_plan(plan: &RunPlan) -> Result<i32> {
    let policy = if plan.waive_certification {
        CertPolicy::Waive
    } else {
        CertPolicy::Require
    };
    if plan.waive_certification {
        eprintln!("note: certification gate waived; violations may reflect dropped hypotheses");
    }

    let (records, findings) = match plan.command {
        CommandKind::Verify => {
            let ids: Vec<InequalityId> = if plan.ineqs.is_empty() {
                catalog::THEOREMS.to_vec()
            } else {
                plan.ineqs
                    .iter()
                    .map(|t| InequalityId::from_str(t))
                    .collect::<Result<_>>()?
            };
            let scenarios = match plan_scenario(plan)? {
                Some(s) => vec![s],
                None => {
                    let mut gen = GenConfig {
                        quad_cfg: quad_config(plan),
                        ..GenConfig::default()
                    };
                    if let Some(alpha) = plan.alpha {
                        gen.alpha_grid = vec![alpha];
                    }
                    if let Some(grid) = plan.alpha_grid {
                        gen.alpha_grid = expand_grid(grid);
                    }
                    if let Some(p) = plan.p {
                        gen.p_grid = vec![p];
                    }
                    if let Some(lambda) = plan.lambda {
                        gen.lambdas = vec![lambda];
                    }
                    if let Some(h_text) = &plan.h {
                        gen.h_classes = vec![HClass::from_str(h_text)?];
                    }
                    harness::generate_scenarios(&gen, plan.seed, plan.n)?
                }
            };
            let summary = harness::run_verification(&ids, &scenarios, policy, plan.seed);
            let findings = summary.violations > 0;
            (records_from_summary(&summary), findings)
        }
        CommandKind::Audit => {
            let ids: Vec<CorollaryId> = if plan.corollaries.is_empty() {
                catalog::COROLLARIES.to_vec()
            } else {
                plan.corollaries
                    .iter()
                    .map(|t| CorollaryId::from_str(t))
                    .collect::<Result<_>>()?
            };
            let alpha_grid = match (plan.alpha_grid, plan.alpha) {
                (Some(grid), _) => expand_grid(grid),
                (None, Some(alpha)) => vec![alpha],
                (None, None) => vec![0.5, 1.0, 2.0],
            };
            let s_grid = match plan.s {
                Some(s) => vec![s],
                None => vec![0.25, 0.5, 1.0],
            };
            let p_grid = match plan.p {
                Some(p) => vec![p],
                None => vec![2.0],
            };
            let cfg = quad_config(plan);
            let reports = harness::audit_constants(&ids, &alpha_grid, &s_grid, &p_grid, &cfg);
            let findings = reports
                .iter()
                .any(|r| r.classification == Classification::UnderOracle);
            (records_from_audits(&reports, plan.seed), findings)
        }
        CommandKind::Search => {
            let id = match plan.ineqs.first() {
                Some(t) => InequalityId::from_str(t)?,
                None => InequalityId::T3_2,
            };
            let gen = GenConfig {
                quad_cfg: quad_config(plan),
                ..GenConfig::default()
            };
            let cfg = SearchConfig {
                budget: plan.budget.max(1),
                seed: plan.seed,
                perturbation_scale: 0.2,
                gen,
            };
            let summary = harness::search_counterexamples(id, &cfg, policy)?;
            let findings = summary.violations > 0;
            (records_from_summary(&summary), findings)
        }
        CommandKind::Reduce => run_reduce(plan)?,
    };

    deliver(plan, &emit_report(&records, plan.format))?;
    Ok(if findings { 2 } else { 0 })
}

/// Full entry point used by the binary: parse then execute, mapping
/// every error to the exit-code contract.
pub fn run<I, S>(argv: I, env: &BTreeMap<String, String>) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    match parse_args(argv, env) {
        Ok(plan) => match execute_plan(&plan) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        Err(e) => {
            eprintln!("{e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> BTreeMap<String, String> {
        BTreeMap::new()
    }

    #[test]
    fn worked_scenario_plan_parses() {
        let plan = parse_args(
            ["verify", "--ineq", "T3.2", "--f", "poly:0,0,1", "--a", "0", "--b", "1", "--alpha", "1", "--h", "id"],
            &env(),
        )
        .unwrap();
        assert_eq!(plan.command, CommandKind::Verify);
        assert_eq!(plan.ineqs, vec!["T3.2"]);
        assert_eq!(plan.f.as_deref(), Some("poly:0,0,1"));
        assert_eq!(plan.alpha, Some(1.0));
    }

    #[test]
    fn unknown_id_is_usage_error() {
        let err = parse_args(["verify", "--ineq", "T9.9"], &env()).unwrap_err();
        assert!(matches!(err, Error::Usage(_)), "{err}");
        assert!(err.to_string().contains("T9.9"));
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        assert!(parse_args(["verify", "--bogus", "1"], &env()).is_err());
    }

    #[test]
    fn alpha_grid_expansion() {
        let plan = parse_args(["audit", "--corollary", "C3.3", "--alpha-grid", "0.5:3:0.5"], &env()).unwrap();
        let grid = expand_grid(plan.alpha_grid.unwrap());
        assert_eq!(grid.len(), 6);
        assert!((grid[0] - 0.5).abs() < 1e-12);
        assert!((grid[5] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn render_round_trip() {
        let plan = parse_args(
            [
                "verify", "--ineq", "T3.2,T3.15", "--f", "poly:0,0,1", "--a", "0", "--b", "1",
                "--alpha", "1.5", "--h", "pow:0.5", "--eta", "affine:0.75", "--lambda", "0.5",
                "--p", "3", "--seed", "9", "--n", "4", "--format", "csv",
            ],
            &env(),
        )
        .unwrap();
        let again = parse_args(render(&plan), &env()).unwrap();
        assert_eq!(plan, again);
    }

    #[test]
    fn env_quad_tol_override() {
        let mut e = env();
        e.insert("FRACINEQ_QUAD_TOL".into(), "1e-6".into());
        let plan = parse_args(["verify"], &e).unwrap();
        assert_eq!(plan.quad_tol, Some(1e-6));
    }

    #[test]
    fn config_file_precedence() {
        let dir = std::env::temp_dir().join("fracineq-cli-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        fs::write(&path, "# sample\nseed = 11\nn = 3\nalpha = 0.5\n").unwrap();
        let plan = parse_args(
            ["verify", "--config", path.to_str().unwrap(), "--seed", "99"],
            &env(),
        )
        .unwrap();
        assert_eq!(plan.seed, 99, "flag beats config");
        assert_eq!(plan.n, 3, "config beats default");
        assert_eq!(plan.alpha, Some(0.5));
    }

    #[test]
    fn emit_empty_jsonl_is_empty() {
        assert_eq!(emit_report(&[], OutputFormat::Jsonl), "");
    }

    #[test]
    fn emit_csv_header_plus_row() {
        let rec = Record {
            id: "T3.2".into(),
            scenario_digest: "f=poly:1|a=0".replace(',', ";"),
            lhs: 1.0 / 3.0,
            rhs: 0.5,
            margin: 0.5 - 1.0 / 3.0,
            quad_error: 1e-12,
            verdict: "true".into(),
            seed: 42,
        };
        let text = emit_report(std::slice::from_ref(&rec), OutputFormat::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("id,scenario_digest,"));
        assert!(lines[1].starts_with("T3.2,"));
    }

    #[test]
    fn worked_scenario_executes_clean() {
        let plan = parse_args(
            ["verify", "--ineq", "T3.2", "--f", "poly:0,0,1", "--a", "0", "--b", "1", "--alpha", "1"],
            &env(),
        )
        .unwrap();
        // margin should be 1/2 - 1/3 = 1/6; exit code 0
        let code = execute_plan(&plan).unwrap();
        assert_eq!(code, 0);
    }

    #[test]
    fn audit_exit_codes() {
        // looser_upper alone exits 0
        let plan = parse_args(["audit", "--corollary", "C3.3", "--alpha", "1"], &env()).unwrap();
        assert_eq!(execute_plan(&plan).unwrap(), 0);
        // under_oracle exits 2
        let plan = parse_args(
            ["audit", "--corollary", "C3.17", "--alpha", "1", "--s", "0.5"],
            &env(),
        )
        .unwrap();
        assert_eq!(execute_plan(&plan).unwrap(), 2);
    }
}
