//! Batch machinery: scenario generation, verification runs, constant
//! audits and randomized counterexample search.
//!
//! Everything here is deterministic for a fixed seed: the RNG is a
//! counter-based ChaCha stream keyed by (seed, candidate index), so the
//! enumeration order never depends on timing or thread scheduling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{
    self, certify_for, eval_inequality, BoundReport, CertPolicy, CorollaryId, InequalityId,
};
use crate::error::{Error, Result};
use crate::funclasses::{EtaKind, Family, FunctionSpec, HClass, InvexityMap, Scenario};
use crate::quad::QuadConfig;

/// Audit classification of one printed constant against its oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Exact,
    LooserUpper,
    UnderOracle,
    Inconclusive,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Exact => "exact",
            Classification::LooserUpper => "looser_upper",
            Classification::UnderOracle => "under_oracle",
            Classification::Inconclusive => "inconclusive",
        })
    }
}

/// Relative tolerance separating "exact" from the two inequality classes.
pub const AUDIT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub corollary: String,
    pub alpha: f64,
    pub s: Option<f64>,
    pub p: Option<f64>,
    pub printed_value: f64,
    pub oracle_value: f64,
    pub oracle_error: f64,
    pub classification: Classification,
}

pub fn classify(printed: f64, oracle: f64, oracle_error: f64, converged: bool) -> Classification {
    let gap = AUDIT_TOL * oracle.abs().max(1.0);
    if !converged || oracle_error >= gap || !printed.is_finite() || !oracle.is_finite() {
        return Classification::Inconclusive;
    }
    if (printed - oracle).abs() <= gap {
        Classification::Exact
    } else if printed > oracle {
        Classification::LooserUpper
    } else {
        Classification::UnderOracle
    }
}

/// One (id, scenario) evaluation inside a run; evaluation failures are
/// recorded, they never abort the batch.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyEntry {
    pub id: String,
    pub scenario_digest: String,
    pub report: Option<BoundReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub scenarios_run: usize,
    pub violations: usize,
    pub min_margin: Option<f64>,
    pub seed: u64,
    pub entries: Vec<VerifyEntry>,
}

/// Pools for scenario generation.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub families: Vec<Family>,
    pub h_classes: Vec<HClass>,
    pub alpha_grid: Vec<f64>,
    pub p_grid: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub etas: Vec<EtaKind>,
    pub lambdas: Vec<f64>,
    pub quad_cfg: QuadConfig,
    pub certify_grid: usize,
    pub max_retries: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            // |f'| and |f''| of every default family are nonnegative,
            // convex and nondecreasing on [0, inf), so all four hypothesis
            // classes certify for every default h.
            families: vec![
                Family::Poly(vec![0.0, 0.0, 1.0]),
                Family::Poly(vec![0.0, 0.0, 0.0, 1.0]),
                Family::Poly(vec![0.0, 0.0, 1.0, 1.0]),
                Family::ExpScaled(1.0),
                Family::ExpScaled(0.5),
                Family::PowerAbs(4.0),
            ],
            h_classes: vec![
                HClass::Identity,
                HClass::Power(0.5),
                HClass::Power(0.25),
                HClass::One,
            ],
            alpha_grid: vec![0.3, 0.5, 1.0, 1.7, 2.5],
            p_grid: vec![1.5, 2.0, 3.0],
            intervals: vec![(0.0, 1.0), (0.5, 2.0), (0.0, 0.75), (1.0, 1.8)],
            etas: vec![EtaKind::Difference, EtaKind::Affine(0.75)],
            lambdas: vec![1.0, 0.5],
            quad_cfg: QuadConfig::default(),
            certify_grid: 9,
            max_retries: 50,
        }
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, pool: &'a [T]) -> &'a T {
    &pool[rng.gen_range(0..pool.len())]
}

fn candidate(cfg: &GenConfig, seed: u64, counter: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(counter);
    let family = pick(&mut rng, &cfg.families).clone();
    let h = pick(&mut rng, &cfg.h_classes).clone();
    let alpha = *pick(&mut rng, &cfg.alpha_grid);
    let p = *pick(&mut rng, &cfg.p_grid);
    let (lo, hi) = *pick(&mut rng, &cfg.intervals);
    let eta = pick(&mut rng, &cfg.etas).clone();
    let lambda = *pick(&mut rng, &cfg.lambdas);
    Scenario {
        f: FunctionSpec::new(family, (lo, hi)),
        a: lo,
        b: hi,
        alpha,
        p,
        h,
        map: InvexityMap { eta, lambda },
        quad_cfg: cfg.quad_cfg.clone(),
    }
}

fn certified_for_all(s: &Scenario, grid: usize) -> bool {
    let _ = grid;
    catalog::THEOREMS.iter().all(|id| certify_for(*id, s).is_ok())
}

/// Draw `n` scenarios, resampling candidates that fail certification for
/// any of the six bounds. Output is deterministic in `seed`.
pub fn generate_scenarios(cfg: &GenConfig, seed: u64, n: usize) -> Result<Vec<Scenario>> {
    if n == 0 {
        return Err(Error::Domain("scenario count must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(n);
    let mut counter = 0u64;
    let mut rejected = 0usize;
    while out.len() < n {
        let s = candidate(cfg, seed, counter);
        counter += 1;
        if s.validate().is_ok() && certified_for_all(&s, cfg.certify_grid) {
            out.push(s);
        } else {
            rejected += 1;
            let attempts = rejected + out.len();
            if attempts > 100 && rejected * 100 > attempts * 99 {
                return Err(Error::GenerationExhausted);
            }
            if counter > (n + cfg.max_retries * n.max(1)) as u64 + 1000 {
                return Err(Error::GenerationExhausted);
            }
        }
    }
    Ok(out)
}

/// Evaluate every (id, scenario) pair; never aborts on a single failure.
pub fn run_verification(
    ids: &[InequalityId],
    scenarios: &[Scenario],
    policy: CertPolicy,
    seed: u64,
) -> RunSummary {
    let mut entries = Vec::with_capacity(ids.len() * scenarios.len());
    let mut violations = 0usize;
    let mut min_margin: Option<f64> = None;
    for s in scenarios {
        for id in ids {
            match eval_inequality(*id, s, policy) {
                Ok(report) => {
                    if !report.holds {
                        violations += 1;
                    }
                    min_margin = Some(match min_margin {
                        Some(m) => m.min(report.margin),
                        None => report.margin,
                    });
                    entries.push(VerifyEntry {
                        id: id.to_string(),
                        scenario_digest: report.scenario_digest.clone(),
                        report: Some(report),
                        error: None,
                    });
                }
                Err(e) => entries.push(VerifyEntry {
                    id: id.to_string(),
                    scenario_digest: s.digest(),
                    report: None,
                    error: Some(e.to_string()),
                }),
            }
        }
    }
    RunSummary {
        scenarios_run: scenarios.len(),
        violations,
        min_margin,
        seed,
        entries,
    }
}

/// Audit the printed corollary constants against their kernel-integral
/// oracles over the given parameter grids.
pub fn audit_constants(
    ids: &[CorollaryId],
    alpha_grid: &[f64],
    s_grid: &[f64],
    p_grid: &[f64],
    cfg: &QuadConfig,
) -> Vec<AuditReport> {
    let none = [f64::NAN];
    let mut reports = Vec::new();
    for &id in ids {
        let s_values: &[f64] = if id.needs_s() { s_grid } else { &none };
        let p_values: &[f64] = if id.needs_p() { p_grid } else { &none };
        for &alpha in alpha_grid {
            for &s in s_values {
                for &p in p_values {
                    let s_opt = if id.needs_s() { Some(s) } else { None };
                    let p_opt = if id.needs_p() { Some(p) } else { None };
                    let printed = catalog::corollary_constant(id, alpha, s_opt, p_opt);
                    let oracle = catalog::corollary_oracle(id, alpha, s_opt, p_opt, cfg);
                    let report = match (printed, oracle) {
                        (Ok(printed), Ok(oracle)) => AuditReport {
                            corollary: id.to_string(),
                            alpha,
                            s: s_opt,
                            p: p_opt,
                            printed_value: printed,
                            oracle_value: oracle.value,
                            oracle_error: oracle.abs_error_estimate,
                            classification: classify(
                                printed,
                                oracle.value,
                                oracle.abs_error_estimate,
                                oracle.converged,
                            ),
                        },
                        _ => AuditReport {
                            corollary: id.to_string(),
                            alpha,
                            s: s_opt,
                            p: p_opt,
                            printed_value: f64::NAN,
                            oracle_value: f64::NAN,
                            oracle_error: f64::NAN,
                            classification: Classification::Inconclusive,
                        },
                    };
                    reports.push(report);
                }
            }
        }
    }
    reports
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub budget: usize,
    pub seed: u64,
    pub perturbation_scale: f64,
    pub gen: GenConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 200,
            seed: 0,
            perturbation_scale: 0.2,
            gen: GenConfig::default(),
        }
    }
}

fn perturb(s: &Scenario, rng: &mut ChaCha8Rng, scale: f64) -> Scenario {
    let mut out = s.clone();
    let bump = |rng: &mut ChaCha8Rng| 1.0 + scale * (rng.gen::<f64>() * 2.0 - 1.0);
    out.alpha = (s.alpha * bump(rng)).max(0.05);
    out.lambda_clamp(s.map.lambda * bump(rng));
    let width = (s.b - s.a) * bump(rng);
    out.b = out.a + width.max(1e-3);
    let (dlo, dhi) = out.f.domain;
    if out.b > dhi {
        out.b = dhi;
    }
    let _ = dlo;
    out
}

impl Scenario {
    fn lambda_clamp(&mut self, lambda: f64) {
        self.map.lambda = lambda.clamp(1e-3, 1.0);
    }
}

/// Randomized minimal-margin search with coordinate-wise restarts.
///
/// With the certification gate on, zero violations is the expected
/// outcome for the proof-final bounds; waiving the gate admits
/// non-preinvex inputs for which violations are possible and reported.
pub fn search_counterexamples(
    id: InequalityId,
    cfg: &SearchConfig,
    policy: CertPolicy,
) -> Result<RunSummary> {
    let restarts = (cfg.budget / 10).max(1);
    let steps = cfg.budget / restarts;
    let mut entries = Vec::new();
    let mut violations = 0usize;
    let mut min_margin: Option<f64> = None;

    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(0x5ea7c4 + restart as u64);

        let mut current = 'seed: {
            for attempt in 0..200u64 {
                let s = candidate(&cfg.gen, cfg.seed, restart as u64 * 1000 + attempt);
                if s.validate().is_err() {
                    continue;
                }
                if policy == CertPolicy::Require && certify_for(id, &s).is_err() {
                    continue;
                }
                break 'seed s;
            }
            return Err(Error::GenerationExhausted);
        };
        let mut current_report = eval_inequality(id, &current, policy)?;

        for _ in 0..steps {
            let proposal = perturb(&current, &mut rng, cfg.perturbation_scale);
            if proposal.validate().is_err() {
                continue;
            }
            match eval_inequality(id, &proposal, policy) {
                Ok(report) => {
                    if report.margin < current_report.margin {
                        current = proposal;
                        current_report = report;
                    }
                }
                Err(_) => continue,
            }
        }

        if !current_report.holds {
            violations += 1;
        }
        min_margin = Some(match min_margin {
            Some(m) => m.min(current_report.margin),
            None => current_report.margin,
        });
        entries.push(VerifyEntry {
            id: id.to_string(),
            scenario_digest: current.digest(),
            report: Some(current_report),
            error: None,
        });
    }

    Ok(RunSummary {
        scenarios_run: restarts,
        violations,
        min_margin,
        seed: cfg.seed,
        entries,
    })
}
