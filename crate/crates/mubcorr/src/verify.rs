//! Randomized verification campaigns over sampled states: entropic
//! inequalities, symmetric-vector dominance, Bell-diagonal oracle matching,
//! and the uncertainty relation.
//!
//! Each sample derives its own seed from the campaign seed and the sample
//! index, so a reported failure can be reproduced in isolation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corrvec::{
    check_inequality_10, check_inequality_9, check_uncertainty_relation,
    compute_correlation_vector, compute_symmetric_vector, discord_from_c1, OptimizerConfig,
};
use crate::error::Result;
use crate::oracles::oracle_bell_diagonal;
use crate::seeding::derive_seed;
use crate::states::{make_bell_diagonal, sample_random_state, BipartiteState, RandomStateKind};

/// Slack below which an inequality counts as violated (criterion
/// tolerance).
pub const SLACK_TOL: f64 = 1e-6;
/// Componentwise tolerance for symmetric-vector dominance.
pub const DOMINANCE_TOL: f64 = 1e-6;
/// Per-entry tolerance for optimizer-vs-oracle matching.
pub const ORACLE_TOL: f64 = 1e-4;

const SALT_SAMPLE: u64 = 0x5A;

/// Verification campaign families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Campaign {
    /// C₁ + Q₂ bounds (both the entropic and the relaxed form).
    Inequalities,
    /// Symmetric ≤ asymmetric correlation vector, componentwise.
    Dominance,
    /// Optimizer vs closed-form Bell-diagonal vectors.
    OracleMatch,
    /// Entropic uncertainty relation at the optimum basis pair.
    Uncertainty,
}

impl Campaign {
    pub fn name(self) -> &'static str {
        match self {
            Campaign::Inequalities => "inequalities",
            Campaign::Dominance => "dominance",
            Campaign::OracleMatch => "oracle-match",
            Campaign::Uncertainty => "uncertainty",
        }
    }
}

/// Campaign parameters.
#[derive(Debug, Clone)]
pub struct CampaignOptions {
    pub samples: usize,
    pub dims: (usize, usize),
    pub seed: u64,
    pub optimizer: OptimizerConfig,
}

/// One violated check, with the seed that reproduces the offending state.
#[derive(Debug, Clone)]
pub struct Violation {
    pub index: usize,
    pub seed: u64,
    pub detail: String,
}

/// Aggregated campaign outcome.
#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub campaign: Campaign,
    pub samples: usize,
    pub dims: (usize, usize),
    /// Smallest inequality slack observed (campaigns with slacks).
    pub min_slack: f64,
    /// Largest absolute deviation observed (oracle matching / dominance).
    pub max_deviation: f64,
    pub violations: Vec<Violation>,
    /// Observations that are reported without being asserted.
    pub notes: Vec<String>,
    pub passed: bool,
}

struct SampleOutcome {
    slacks: Vec<f64>,
    deviation: f64,
    violation: Option<String>,
    q2_exceeds_discord: bool,
}

fn sample_seed(opts: &CampaignOptions, index: usize) -> u64 {
    derive_seed(opts.seed, SALT_SAMPLE, index as u64)
}

fn per_sample_config(opts: &CampaignOptions, seed: u64, levels: usize) -> OptimizerConfig {
    OptimizerConfig {
        seed,
        max_levels: Some(levels),
        ..opts.optimizer.clone()
    }
}

/// Run a campaign and aggregate slacks, deviations and failing seeds.
pub fn run_campaign(campaign: Campaign, opts: &CampaignOptions) -> Result<CampaignReport> {
    let outcomes: Vec<Result<SampleOutcome>> = (0..opts.samples)
        .into_par_iter()
        .map(|i| run_sample(campaign, opts, i))
        .collect();

    let mut min_slack = f64::INFINITY;
    let mut max_deviation: f64 = 0.0;
    let mut violations = Vec::new();
    let mut q2_gt_d = 0usize;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let o = outcome?;
        for s in o.slacks {
            min_slack = min_slack.min(s);
        }
        max_deviation = max_deviation.max(o.deviation);
        if let Some(detail) = o.violation {
            violations.push(Violation {
                index: i,
                seed: sample_seed(opts, i),
                detail,
            });
        }
        if o.q2_exceeds_discord {
            q2_gt_d += 1;
        }
    }

    let mut notes = Vec::new();
    if campaign == Campaign::Inequalities {
        // Whether Q₂ ≤ D holds in general is open; findings are reported,
        // never asserted.
        notes.push(format!(
            "Q2 > D + {SLACK_TOL:.0e} observed on {q2_gt_d} of {} samples",
            opts.samples
        ));
    }
    let passed = violations.is_empty();
    Ok(CampaignReport {
        campaign,
        samples: opts.samples,
        dims: opts.dims,
        min_slack,
        max_deviation,
        violations,
        notes,
        passed,
    })
}

fn run_sample(campaign: Campaign, opts: &CampaignOptions, index: usize) -> Result<SampleOutcome> {
    let seed = sample_seed(opts, index);
    let (da, db) = opts.dims;
    match campaign {
        Campaign::Inequalities => {
            let state = sample_random_state(da, db, RandomStateKind::MixedGinibre, seed)?;
            let cfg = per_sample_config(opts, seed, 2);
            let cv = compute_correlation_vector(&state, &cfg)?;
            let rep9 = check_inequality_9(&state, &cv)?;
            let rep10 = check_inequality_10(&state, &cv)?;
            let discord = discord_from_c1(&state, cv.entries[0])?;
            let q2_exceeds = cv.entries[1] > discord + SLACK_TOL;
            let violated = [("(9)", &rep9), ("(10)", &rep10)]
                .iter()
                .find(|(_, r)| r.slack < -SLACK_TOL)
                .map(|(name, r)| format!("inequality {name} violated: slack = {:.3e}", r.slack));
            Ok(SampleOutcome {
                slacks: vec![rep9.slack, rep10.slack],
                deviation: 0.0,
                violation: violated,
                q2_exceeds_discord: q2_exceeds,
            })
        }
        Campaign::Uncertainty => {
            let state = sample_random_state(da, db, RandomStateKind::MixedGinibre, seed)?;
            let cfg = per_sample_config(opts, seed, 2);
            let cv = compute_correlation_vector(&state, &cfg)?;
            let rep =
                check_uncertainty_relation(&state, &cv.optimum_bases[0], &cv.optimum_bases[1])?;
            let violation = (rep.slack < -SLACK_TOL)
                .then(|| format!("uncertainty relation violated: slack = {:.3e}", rep.slack));
            Ok(SampleOutcome {
                slacks: vec![rep.slack],
                deviation: 0.0,
                violation,
                q2_exceeds_discord: false,
            })
        }
        Campaign::Dominance => {
            let state = sample_random_state(da, db, RandomStateKind::MixedGinibre, seed)?;
            let cfg = per_sample_config(
                opts,
                seed,
                opts.optimizer.max_levels.unwrap_or_else(|| {
                    crate::mub::max_chart_levels(da).min(crate::mub::max_chart_levels(db))
                }),
            );
            let cv = compute_correlation_vector(&state, &cfg)?;
            let sv = compute_symmetric_vector(&state, &cfg)?;
            let mut slacks = Vec::new();
            let mut worst = 0.0f64;
            for (a, s) in cv.entries.iter().zip(sv.entries.iter()) {
                slacks.push(a - s);
                worst = worst.max(s - a);
            }
            let violation = (worst > DOMINANCE_TOL)
                .then(|| format!("symmetric exceeds asymmetric by {worst:.3e}"));
            Ok(SampleOutcome {
                slacks,
                deviation: worst,
                violation,
                q2_exceeds_discord: false,
            })
        }
        Campaign::OracleMatch => {
            let r = sample_tetrahedron_point(seed);
            let state = make_bell_diagonal(r)?;
            let cfg = per_sample_config(opts, seed, 3);
            let cv = compute_correlation_vector(&state, &cfg)?;
            let oracle = oracle_bell_diagonal(r)?;
            let mut dev = 0.0f64;
            for (got, want) in cv.entries.iter().zip(oracle.vector.iter()) {
                dev = dev.max((got - want).abs());
            }
            let violation = (dev > ORACLE_TOL)
                .then(|| format!("optimizer deviates from closed form by {dev:.3e} at r = {r:?}"));
            Ok(SampleOutcome {
                slacks: vec![],
                deviation: dev,
                violation,
                q2_exceeds_discord: false,
            })
        }
    }
}

/// Uniform barycentric sample of the Bell tetrahedron.
pub fn sample_tetrahedron_point(seed: u64) -> [f64; 3] {
    const VERTICES: [[f64; 3]; 4] = [
        [-1.0, -1.0, -1.0],
        [-1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = [0.0f64; 4];
    let mut total = 0.0;
    for wi in &mut w {
        *wi = -(rng.gen_range(0.0f64..1.0).max(1e-300)).ln();
        total += *wi;
    }
    let mut r = [0.0f64; 3];
    for (wi, v) in w.iter().zip(VERTICES.iter()) {
        for (rj, vj) in r.iter_mut().zip(v.iter()) {
            *rj += wi / total * vj;
        }
    }
    r
}

/// Convenience used by tests and the CLI: a deterministic Ginibre state for
/// campaign sample `index`.
pub fn campaign_state(opts: &CampaignOptions, index: usize) -> Result<BipartiteState> {
    let (da, db) = opts.dims;
    sample_random_state(
        da,
        db,
        RandomStateKind::MixedGinibre,
        sample_seed(opts, index),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(samples: usize, dims: (usize, usize)) -> CampaignOptions {
        CampaignOptions {
            samples,
            dims,
            seed: 0xFEED,
            optimizer: OptimizerConfig::with_seed(0xFEED),
        }
    }

    #[test]
    fn tetrahedron_sampler_stays_inside() {
        for seed in 0..50 {
            let r = sample_tetrahedron_point(seed);
            make_bell_diagonal(r).expect("sampled point must be a valid state");
        }
    }

    #[test]
    fn small_inequality_campaign_passes() {
        let report = run_campaign(Campaign::Inequalities, &opts(8, (2, 2))).unwrap();
        assert!(report.passed, "violations: {:?}", report.violations);
        assert!(report.min_slack >= -SLACK_TOL);
        assert_eq!(report.notes.len(), 1);
    }

    #[test]
    fn small_oracle_campaign_passes() {
        let report = run_campaign(Campaign::OracleMatch, &opts(6, (2, 2))).unwrap();
        assert!(report.passed, "violations: {:?}", report.violations);
        assert!(report.max_deviation <= ORACLE_TOL);
    }

    #[test]
    fn small_uncertainty_campaign_passes() {
        let report = run_campaign(Campaign::Uncertainty, &opts(6, (2, 2))).unwrap();
        assert!(report.passed, "violations: {:?}", report.violations);
    }

    #[test]
    fn small_dominance_campaign_passes() {
        let report = run_campaign(Campaign::Dominance, &opts(4, (2, 2))).unwrap();
        assert!(report.passed, "violations: {:?}", report.violations);
    }

    #[test]
    fn campaigns_are_deterministic() {
        let a = run_campaign(Campaign::OracleMatch, &opts(4, (2, 2))).unwrap();
        let b = run_campaign(Campaign::OracleMatch, &opts(4, (2, 2))).unwrap();
        assert_eq!(a.max_deviation, b.max_deviation);
    }
}
