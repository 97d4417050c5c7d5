//! Executes a run: oracle gates, then every requested tag over its roster.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use schwarz_core::oracles::{run_gates, GateResult, GateSizes};
use schwarz_core::theorems::{evaluate, extremal, CheckReport, Instance, TheoremId};

use crate::config::{ConfigError, RunConfig};
use crate::roster::{default_pairs, extremal_host, extremal_setup, random_instance, unsatisfiable, SpacePair};

pub const SCHEMA: u32 = 1;
pub const THREADS_ENV: &str = "SCHWARZ_LAB_THREADS";
/// Failing reports kept verbatim per tag; the count is always exact.
const KEPT_FAILURES: usize = 32;

/// An instance whose generation or hypotheses failed. Never dropped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Unsatisfied {
    pub index: usize,
    pub spaces: String,
    pub seed: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RosterEntry {
    pub spaces: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TagSummary {
    pub theorem: TheoremId,
    /// Set when the tag was added to accompany another requested tag.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub companion_of: Option<TheoremId>,
    pub roster: Vec<RosterEntry>,
    /// Why no space pair could host the tag.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unsatisfiable: Vec<String>,
    pub count: usize,
    pub failures: usize,
    pub flagged: usize,
    pub min_residual: Option<f64>,
    pub max_residual: Option<f64>,
    /// Largest `|residual|` over the closed-form extremal instances.
    pub sharpness_gap: Option<f64>,
    pub extremal: Vec<CheckReport>,
    pub unsatisfied: Vec<Unsatisfied>,
    pub failing: Vec<CheckReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Totals {
    pub checks: usize,
    pub failures: usize,
    pub unsatisfied: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub config: RunConfig,
    pub gates_passed: bool,
    pub gates: Vec<GateResult>,
    pub theorems: Vec<TagSummary>,
    pub totals: Totals,
}

impl RunReport {
    /// 0 when everything passed, 1 on a theorem failure, 2 on a gate failure.
    pub fn exit_code(&self) -> i32 {
        if !self.gates_passed {
            2
        } else if self.totals.failures > 0 {
            1
        } else {
            0
        }
    }

    pub fn summary(&self, id: TheoremId) -> Option<&TagSummary> {
        self.theorems.iter().find(|t| t.theorem == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Hex SHA-256 of the instance's JSON description.
pub fn instance_digest(inst: &Instance<f64>) -> String {
    let text = serde_json::to_string(&inst.describe()).expect("descriptions serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// The tags to run, in order, with the companion they were added for.
fn schedule(cfg: &RunConfig) -> Vec<(TheoremId, Option<TheoremId>)> {
    let tags = cfg.theorems.tags();
    let mut out: Vec<(TheoremId, Option<TheoremId>)> = Vec::new();
    for t in &tags {
        if out.iter().any(|(x, _)| x == t) {
            continue;
        }
        out.push((*t, None));
        if *t == TheoremId::T3_10 && !tags.contains(&TheoremId::C3_11) {
            out.push((TheoremId::C3_11, Some(TheoremId::T3_10)));
        }
    }
    out
}

enum Outcome {
    Checked(CheckReport),
    Unsatisfied(Unsatisfied),
}

fn check_one(id: TheoremId, index: usize, pair: &SpacePair, seed: u64, cfg: &RunConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unsat = |reason: String| Outcome::Unsatisfied(Unsatisfied { index, spaces: pair.label(), seed, reason });
    let inst = match random_instance(id, pair, cfg.degree, &mut rng) {
        Ok(i) => i,
        Err(e) => return unsat(format!("generation: {e}")),
    };
    match evaluate(id, &inst, cfg.tolerance) {
        Ok(r) => Outcome::Checked(r.with_provenance(instance_digest(&inst), Some(seed))),
        Err(e) => unsat(e.to_string()),
    }
}

fn tag_stream(seed: u64, id: TheoremId) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx = TheoremId::ALL.iter().position(|t| *t == id).expect("known tag");
    rng.set_stream(idx as u64 + 1);
    rng
}

fn run_tag(id: TheoremId, companion_of: Option<TheoremId>, pairs: &[SpacePair], cfg: &RunConfig) -> TagSummary {
    let (hosts, rejected): (Vec<&SpacePair>, Vec<&SpacePair>) = pairs.iter().partition(|p| unsatisfiable(id, p).is_none());
    let mut summary = TagSummary {
        theorem: id,
        companion_of,
        roster: hosts.iter().map(|p| RosterEntry { spaces: p.label(), kappa: p.kappa() }).collect(),
        unsatisfiable: Vec::new(),
        count: 0,
        failures: 0,
        flagged: 0,
        min_residual: None,
        max_residual: None,
        sharpness_gap: None,
        extremal: Vec::new(),
        unsatisfied: Vec::new(),
        failing: Vec::new(),
    };
    if hosts.is_empty() {
        summary.unsatisfiable = rejected.iter().filter_map(|p| unsatisfiable(id, p)).collect();
        return summary;
    }
    // Seeds are drawn sequentially so the work list does not depend on threads.
    let mut stream = tag_stream(cfg.seed, id);
    let work: Vec<(usize, &SpacePair, u64)> = (0..cfg.samples).map(|i| (i, hosts[i % hosts.len()], stream.next_u64())).collect();
    let extremal_seeds: Vec<u64> = hosts.iter().map(|_| stream.next_u64()).collect();
    let outcomes: Vec<Outcome> = work.par_iter().map(|&(i, pair, seed)| check_one(id, i, pair, seed, cfg)).collect();

    let record = |summary: &mut TagSummary, r: &CheckReport| {
        summary.count += 1;
        if !r.flags.is_empty() {
            summary.flagged += 1;
        }
        summary.min_residual = Some(summary.min_residual.map_or(r.residual, |m| m.min(r.residual)));
        summary.max_residual = Some(summary.max_residual.map_or(r.residual, |m| m.max(r.residual)));
        if !r.passed() {
            summary.failures += 1;
            if summary.failing.len() < KEPT_FAILURES {
                summary.failing.push(r.clone());
            }
        }
    };
    for o in outcomes {
        match o {
            Outcome::Checked(r) => record(&mut summary, &r),
            Outcome::Unsatisfied(u) => summary.unsatisfied.push(u),
        }
    }
    if id.has_extremal() {
        for (pair, seed) in hosts.iter().zip(extremal_seeds).filter(|(p, _)| extremal_host(id, p)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let setup = extremal_setup(id, pair, &mut rng);
            let result = extremal(id, &setup)
                .and_then(|inst| evaluate(id, &inst, cfg.tolerance).map(|r| r.with_provenance(instance_digest(&inst), Some(seed))));
            match result {
                Ok(r) => {
                    record(&mut summary, &r);
                    let gap = r.residual.abs();
                    summary.sharpness_gap = Some(summary.sharpness_gap.map_or(gap, |g: f64| g.max(gap)));
                    summary.extremal.push(r);
                }
                Err(e) => summary.unsatisfied.push(Unsatisfied {
                    index: usize::MAX,
                    spaces: pair.label(),
                    seed,
                    reason: format!("extremal: {e}"),
                }),
            }
        }
    }
    summary
}

/// Worker count from [`THREADS_ENV`], if set.
pub fn thread_cap() -> Result<Option<usize>, ConfigError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(ConfigError::Invalid(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs the configuration on a pool of `threads` workers (default: all cores).
pub fn run_with_threads(cfg: &RunConfig, threads: Option<usize>) -> Result<RunReport, ConfigError> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| ConfigError::Invalid(format!("thread pool: {e}")))?;
    pool.install(|| execute(cfg))
}

/// Runs the configuration, honouring [`THREADS_ENV`].
pub fn run(cfg: &RunConfig) -> Result<RunReport, ConfigError> {
    run_with_threads(cfg, thread_cap()?)
}

fn execute(cfg: &RunConfig) -> Result<RunReport, ConfigError> {
    let pairs = match cfg.spaces()? {
        Some((dom, codom)) => vec![SpacePair::new(dom, codom)],
        None => default_pairs(),
    };
    let sizes = GateSizes { derivatives: cfg.gates.derivatives, operator_norms: cfg.gates.operator_norms };
    let gates = run_gates(cfg.seed, sizes).map_err(|e| ConfigError::Invalid(format!("oracle gates: {e}")))?;
    let gates_passed = gates.iter().all(|g| g.passed);
    let theorems: Vec<TagSummary> =
        if gates_passed { schedule(cfg).into_iter().map(|(id, comp)| run_tag(id, comp, &pairs, cfg)).collect() } else { Vec::new() };
    let totals = Totals {
        checks: theorems.iter().map(|t| t.count).sum(),
        failures: theorems.iter().map(|t| t.failures).sum(),
        unsatisfied: theorems.iter().map(|t| t.unsatisfied.len()).sum(),
    };
    Ok(RunReport { schema: SCHEMA, config: cfg.clone(), gates_passed, gates, theorems, totals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{GateConfig, TheoremSelection};

    fn small(tags: Vec<TheoremId>) -> RunConfig {
        let mut cfg = RunConfig::new(TheoremSelection::List(tags));
        cfg.samples = 12;
        cfg.seed = 5;
        cfg.gates = GateConfig { derivatives: 20, operator_norms: 5 };
        cfg
    }

    #[test]
    fn companion_is_scheduled_once() {
        let s = schedule(&small(vec![TheoremId::T3_10, TheoremId::T3_10]));
        assert_eq!(s, vec![(TheoremId::T3_10, None), (TheoremId::C3_11, Some(TheoremId::T3_10))]);
        let s = schedule(&small(vec![TheoremId::C3_11, TheoremId::T3_10]));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn thread_count_does_not_change_the_report() {
        let cfg = small(vec![TheoremId::T2_1, TheoremId::T3_7]);
        let a = run_with_threads(&cfg, Some(1)).unwrap().to_json();
        let b = run_with_threads(&cfg, Some(4)).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn digests_are_hex_sha256() {
        let r = run_with_threads(&small(vec![TheoremId::T2_1]), Some(2)).unwrap();
        let t = r.summary(TheoremId::T2_1).unwrap();
        assert_eq!(t.count, 12 + t.extremal.len());
        assert!(t.extremal.iter().all(|e| e.instance_digest.len() == 64));
        assert_eq!(r.exit_code(), 0);
    }
}
