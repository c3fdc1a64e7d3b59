//! The optimization engine computing the correlation vector
//! (C₁, Q₂, …, Q_M), its symmetric variant, quantum discord, and the
//! entropic inequality checks.
//!
//! C₁ is the maximal Holevo quantity over all local projective measurements
//! on side A; Q_γ is the residual Holevo quantity maximized over bases
//! mutually unbiased to all earlier optimum bases. Restarts derive their
//! seeds from the global seed and the restart index, so results are
//! identical regardless of scheduling or worker count.

mod optim;
mod param;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{self, clamp_entropic, dephase_side_a, ProjectiveBasis};
use crate::mub::{self, chart_mu_to_many, chart_mu_to_one, is_unbiased, max_chart_levels};
use crate::qmath::shannon_entropy_raw;
use crate::seeding::derive_seed;
use crate::states::BipartiteState;

use optim::NelderMead;

/// Overlap tolerance used when clustering restart results into distinct
/// optimum bases.
const DEGEN_EQUIV_TOL: f64 = 1e-4;
/// Unbiasedness tolerance accepted for user-supplied basis pairs.
const PAIR_UNBIASED_TOL: f64 = 1e-6;
/// Cap on the number of distinct ε-optimal first bases explored by the
/// two-stage policy.
const TWO_STAGE_CAP: usize = 8;

const SALT_C1: u64 = 0xC1;
const SALT_Q: u64 = 0x2000;

/// Settings of the multi-start derivative-free search.
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    /// Restarts per level; None picks 32 for d_A ≤ 3 and 128 above.
    pub restarts: Option<usize>,
    /// Iteration cap per start.
    pub max_iterations: usize,
    /// Convergence tolerance on the objective (bits).
    pub objective_tol: f64,
    /// Width ε of the near-optimum window used for degeneracy detection
    /// and the two-stage policy (bits).
    pub degeneracy_window: f64,
    /// Global seed; every restart derives its own stream from it.
    pub seed: u64,
    /// When the C₁ optimum is ε-degenerate, also maximize Q₂ over the
    /// ε-optimal set of first bases and return the jointly best chain.
    pub two_stage_degenerate: bool,
    /// Number of correlation-vector levels; None picks the family default
    /// (3 for d_A = 2, d_A+1 for supported primes, 2 otherwise).
    pub max_levels: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: None,
            max_iterations: 2000,
            objective_tol: 1e-8,
            degeneracy_window: 1e-6,
            seed: 0x6d75_6263,
            two_stage_degenerate: true,
            max_levels: None,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == Some(0) {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.objective_tol) || !positive(self.degeneracy_window) {
            return Err(Error::InvalidConfig(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(())
    }

    fn restarts_for(&self, d: usize) -> usize {
        self.restarts.unwrap_or(if d <= 3 { 32 } else { 128 })
    }
}

/// Outcome of one maximization level.
#[derive(Debug, Clone)]
pub struct LevelResult {
    /// Maximal Holevo quantity found (bits).
    pub value: f64,
    /// Canonicalized optimum basis.
    pub basis: ProjectiveBasis,
    /// True when a second local optimum within ε has a non-equivalent basis.
    pub degenerate: bool,
    /// False when some restart hit the iteration cap (best-found returned).
    pub converged: bool,
    /// True when the searched chart provably covers the full feasible set.
    pub chart_exact: bool,
    /// Distinct ε-optimal bases, best first (at most a small cap).
    pub near_optimal_bases: Vec<ProjectiveBasis>,
}

/// The correlation vector (C₁, Q₂, …, Q_M) with the bases achieving each
/// entry.
#[derive(Debug, Clone)]
pub struct CorrelationVector {
    /// Entry γ (bits), γ = 1..=M.
    pub entries: Vec<f64>,
    /// Optimum basis per entry, pairwise mutually unbiased.
    pub optimum_bases: Vec<ProjectiveBasis>,
    /// Per-entry degeneracy flags.
    pub degeneracy_flags: Vec<bool>,
    /// Achieved number of levels.
    pub m: usize,
    /// Levels originally requested.
    pub requested_levels: usize,
    /// True when some requested level had no chart and the vector was cut
    /// short.
    pub truncated: bool,
    /// False when any level searched an under-approximating chart (the
    /// feasible set for that level may be larger than what was searched).
    pub chart_exact: bool,
    /// False when any restart of any level hit the iteration cap.
    pub converged: bool,
}

/// Symmetric correlation vector built from classical mutual information of
/// joint local measurements; componentwise dominated by the asymmetric one.
#[derive(Debug, Clone)]
pub struct SymmetricCorrelationVector {
    pub entries: Vec<f64>,
    pub optimum_base_pairs: Vec<(ProjectiveBasis, ProjectiveBasis)>,
    pub degeneracy_flags: Vec<bool>,
    pub m: usize,
    pub truncated: bool,
    pub converged: bool,
}

/// One evaluated entropic inequality. `slack` is the margin by which it
/// holds; `holds` ⟺ slack ≥ −1e-9.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub h1: f64,
    pub h2: f64,
    pub holds: bool,
}

impl InequalityReport {
    fn new(lhs: f64, rhs: f64, slack: f64, h1: f64, h2: f64) -> Self {
        Self {
            lhs,
            rhs,
            slack,
            h1,
            h2,
            holds: slack >= -1e-9,
        }
    }
}

#[derive(Debug, Clone)]
struct StartOutcome {
    x: Vec<f64>,
    value: f64,
    converged: bool,
}

/// Run the Nelder–Mead search from `restarts` deterministic start points
/// and polish the winner. Outcomes come back sorted best-first with stable
/// (restart-index) tie-breaking.
fn multistart_maximize<F>(
    ranges: &[(f64, f64)],
    f: &F,
    restarts: usize,
    cfg: &OptimizerConfig,
    salt: u64,
) -> Vec<StartOutcome>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    use rand::Rng;
    use rand::SeedableRng;

    let nm = NelderMead {
        max_iterations: cfg.max_iterations,
        f_tol: cfg.objective_tol,
    };
    let mut outcomes: Vec<(usize, StartOutcome)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let x0: Vec<f64> = if r == 0 {
                // Deterministic baseline start at the chart origin.
                vec![0.0; ranges.len()]
            } else {
                let mut rng =
                    rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, salt, r as u64));
                ranges
                    .iter()
                    .map(|&(lo, hi)| rng.gen_range(lo..hi))
                    .collect()
            };
            let out = nm.maximize(f, &x0, 0.45);
            (
                r,
                StartOutcome {
                    x: out.x,
                    value: out.value,
                    converged: out.converged,
                },
            )
        })
        .collect();
    outcomes.sort_by(|a, b| b.1.value.total_cmp(&a.1.value).then(a.0.cmp(&b.0)));
    let mut outcomes: Vec<StartOutcome> = outcomes.into_iter().map(|(_, o)| o).collect();

    // Polish the winner with a tight, small-step pass.
    let polish = NelderMead {
        max_iterations: cfg.max_iterations,
        f_tol: (cfg.objective_tol * 1e-4).max(1e-15),
    };
    let refined = polish.maximize(f, &outcomes[0].x, 1e-3);
    if refined.value > outcomes[0].value {
        outcomes[0].x = refined.x;
        outcomes[0].value = refined.value;
    }
    outcomes
}

/// Cluster sorted restart outcomes into a level result with degeneracy
/// detection.
fn collect_level<G>(
    outcomes: &[StartOutcome],
    to_basis: G,
    window: f64,
    chart_exact: bool,
) -> LevelResult
where
    G: Fn(&[f64]) -> ProjectiveBasis,
{
    let best = &outcomes[0];
    let mut near: Vec<ProjectiveBasis> = Vec::new();
    for o in outcomes.iter().filter(|o| o.value >= best.value - window) {
        if near.len() >= TWO_STAGE_CAP {
            break;
        }
        let b = to_basis(&o.x).canonicalized();
        if !near.iter().any(|nb| nb.is_equivalent(&b, DEGEN_EQUIV_TOL)) {
            near.push(b);
        }
    }
    LevelResult {
        value: best.value,
        basis: near[0].clone(),
        degenerate: near.len() > 1,
        converged: outcomes.iter().all(|o| o.converged),
        chart_exact,
        near_optimal_bases: near,
    }
}

/// Maximal classical correlation C₁: the Holevo quantity maximized over all
/// projective bases of side A.
pub fn compute_c1(state: &BipartiteState, cfg: &OptimizerConfig) -> Result<LevelResult> {
    cfg.validate()?;
    let d = state.d_a();
    let s_b = state.marginal_b().entropy();
    let ranges = param::param_ranges(d);
    let f = |p: &[f64]| measure::holevo_for_basis(state, &param::basis_from_params(d, p), s_b);
    let outcomes = multistart_maximize(&ranges, &f, cfg.restarts_for(d), cfg, SALT_C1);
    Ok(collect_level(
        &outcomes,
        |p| ProjectiveBasis::from_unitary_unchecked(param::basis_from_params(d, p)),
        cfg.degeneracy_window,
        true,
    ))
}

/// Next residual correlation Q_γ: the Holevo quantity maximized over bases
/// mutually unbiased to all prior optimum bases.
pub fn compute_q_next(
    state: &BipartiteState,
    prior_bases: &[ProjectiveBasis],
    cfg: &OptimizerConfig,
) -> Result<LevelResult> {
    cfg.validate()?;
    if prior_bases.is_empty() {
        return Err(Error::RejectedInput(
            "compute_q_next needs at least one prior basis".into(),
        ));
    }
    let d = state.d_a();
    let s_b = state.marginal_b().entropy();
    if prior_bases.len() == 1 {
        let chart = chart_mu_to_one(&prior_bases[0]);
        let ranges = chart.param_ranges();
        let f = |p: &[f64]| measure::holevo_for_basis(state, chart.basis_at(p).matrix(), s_b);
        let salt = SALT_Q.wrapping_add(2);
        let outcomes = multistart_maximize(&ranges, &f, cfg.restarts_for(d), cfg, salt);
        Ok(collect_level(
            &outcomes,
            |p| chart.basis_at(p),
            cfg.degeneracy_window,
            chart.is_exact(),
        ))
    } else {
        let chart = chart_mu_to_many(prior_bases)?;
        let cands = chart.candidates().expect("multi-anchor charts are finite");
        let mut scored: Vec<(f64, &ProjectiveBasis)> = cands
            .iter()
            .map(|b| (measure::holevo_for_basis(state, b.matrix(), s_b), b))
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        let best = scored[0].0;
        let near: Vec<ProjectiveBasis> = scored
            .iter()
            .filter(|(v, _)| *v >= best - cfg.degeneracy_window)
            .take(TWO_STAGE_CAP)
            .map(|(_, b)| (*b).clone())
            .collect();
        Ok(LevelResult {
            value: best,
            basis: near[0].clone(),
            degenerate: near.len() > 1,
            converged: true,
            chart_exact: chart.is_exact(),
            near_optimal_bases: near,
        })
    }
}

fn default_levels(d_a: usize) -> usize {
    max_chart_levels(d_a)
}

/// Compute the full correlation vector, chaining [`compute_c1`] and
/// [`compute_q_next`]. With `two_stage_degenerate` set and an ε-degenerate
/// C₁ optimum, Q₂ is additionally maximized over the ε-optimal set of first
/// bases and the jointly best chain is kept.
pub fn compute_correlation_vector(
    state: &BipartiteState,
    cfg: &OptimizerConfig,
) -> Result<CorrelationVector> {
    cfg.validate()?;
    let requested = cfg
        .max_levels
        .unwrap_or_else(|| default_levels(state.d_a()));
    if requested < 1 {
        return Err(Error::InvalidConfig("max_levels must be at least 1".into()));
    }
    let c1 = compute_c1(state, cfg)?;

    let mut entries = vec![c1.value];
    let mut degeneracy_flags = vec![c1.degenerate];
    let mut chart_exact = c1.chart_exact;
    let mut converged = c1.converged;
    let mut bases = vec![c1.basis.clone()];
    let mut truncated = false;

    // Two-stage degenerate policy for the first transition.
    if requested >= 2 {
        let level2 = if cfg.two_stage_degenerate && c1.degenerate {
            let mut best: Option<(LevelResult, ProjectiveBasis)> = None;
            for first in &c1.near_optimal_bases {
                let q2 = compute_q_next(state, std::slice::from_ref(first), cfg)?;
                let better = match &best {
                    None => true,
                    Some((cur, _)) => q2.value > cur.value,
                };
                if better {
                    best = Some((q2, first.clone()));
                }
            }
            let (q2, first) = best.expect("at least one near-optimal basis");
            bases[0] = first;
            Some(q2)
        } else {
            Some(compute_q_next(state, &bases, cfg)?)
        };
        if let Some(q2) = level2 {
            entries.push(q2.value);
            degeneracy_flags.push(q2.degenerate);
            chart_exact &= q2.chart_exact;
            converged &= q2.converged;
            bases.push(q2.basis.clone());
        }
    }

    for _level in 3..=requested {
        match compute_q_next(state, &bases, cfg) {
            Ok(q) => {
                entries.push(q.value);
                degeneracy_flags.push(q.degenerate);
                chart_exact &= q.chart_exact;
                converged &= q.converged;
                bases.push(q.basis.clone());
            }
            Err(Error::UnsupportedLevel { .. }) | Err(Error::UnsupportedDimension { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let m = entries.len();
    Ok(CorrelationVector {
        entries,
        optimum_bases: bases,
        degeneracy_flags,
        m,
        requested_levels: requested,
        truncated,
        chart_exact,
        converged,
    })
}

/// Quantum discord D = S(ρ_A) + S(ρ_B) − S(ρ_AB) − C₁ (projective
/// measurement on side A), clamped to ≥ 0.
pub fn compute_discord(state: &BipartiteState, cfg: &OptimizerConfig) -> Result<f64> {
    let c1 = compute_c1(state, cfg)?;
    clamp_entropic(state.mutual_information() - c1.value)
}

/// Discord from an already-computed C₁ value.
pub fn discord_from_c1(state: &BipartiteState, c1: f64) -> Result<f64> {
    clamp_entropic(state.mutual_information() - c1)
}

/// C₁ + Q₂ ≤ H₁ + H₂ + S(ρ_B) − S(ρ_AB) − log₂ d_A, with H_γ the Shannon
/// entropy of the outcome distribution in basis {𝒜^γ}.
pub fn check_inequality_9(
    state: &BipartiteState,
    cv: &CorrelationVector,
) -> Result<InequalityReport> {
    if cv.entries.len() < 2 || cv.optimum_bases.len() < 2 {
        return Err(Error::RejectedInput(
            "inequality check needs at least two correlation-vector entries".into(),
        ));
    }
    let h1 = shannon_entropy_raw(&measure::outcome_probs(state, &cv.optimum_bases[0]));
    let h2 = shannon_entropy_raw(&measure::outcome_probs(state, &cv.optimum_bases[1]));
    let lhs = cv.entries[0] + cv.entries[1];
    let rhs = h1 + h2 + state.marginal_b().entropy()
        - state.rho().entropy()
        - (state.d_a() as f64).log2();
    Ok(InequalityReport::new(lhs, rhs, rhs - lhs, h1, h2))
}

/// The relaxation C₁ + Q₂ ≤ S(ρ_B) − S(ρ_AB) + log₂ d_A obtained from
/// H_γ ≤ log₂ d_A.
pub fn check_inequality_10(
    state: &BipartiteState,
    cv: &CorrelationVector,
) -> Result<InequalityReport> {
    if cv.entries.len() < 2 {
        return Err(Error::RejectedInput(
            "inequality check needs at least two correlation-vector entries".into(),
        ));
    }
    let log_da = (state.d_a() as f64).log2();
    let lhs = cv.entries[0] + cv.entries[1];
    let rhs = state.marginal_b().entropy() - state.rho().entropy() + log_da;
    Ok(InequalityReport::new(lhs, rhs, rhs - lhs, log_da, log_da))
}

/// Entropic uncertainty relation with quantum side information for two
/// mutually unbiased bases:
/// S({𝒜¹}|B) + S({𝒜²}|B) ≥ log₂ d_A + S(A|B),
/// where S({𝒜^γ}|B) = S(ρ^{(γ)}) − S(ρ_B) and ρ^{(γ)} is the state
/// dephased in basis γ on side A.
pub fn check_uncertainty_relation(
    state: &BipartiteState,
    b1: &ProjectiveBasis,
    b2: &ProjectiveBasis,
) -> Result<InequalityReport> {
    if !is_unbiased(b1, b2, PAIR_UNBIASED_TOL) {
        return Err(Error::NotUnbiased(mub::unbiased_deviation(b1, b2)));
    }
    let s_b = state.marginal_b().entropy();
    let dephased_1 = dephase_side_a(state, b1)?;
    let dephased_2 = dephase_side_a(state, b2)?;
    let lhs = (dephased_1.rho().entropy() - s_b) + (dephased_2.rho().entropy() - s_b);
    let rhs = (state.d_a() as f64).log2() + state.rho().entropy() - s_b;
    let h1 = shannon_entropy_raw(&measure::outcome_probs(state, b1));
    let h2 = shannon_entropy_raw(&measure::outcome_probs(state, b2));
    Ok(InequalityReport::new(lhs, rhs, lhs - rhs, h1, h2))
}

/// Symmetric correlation vector: classical mutual information of joint
/// local measurements, maximized over bases of both sides, then over pairs
/// of mutually unbiased charts anchored at the respective prior optima.
pub fn compute_symmetric_vector(
    state: &BipartiteState,
    cfg: &OptimizerConfig,
) -> Result<SymmetricCorrelationVector> {
    cfg.validate()?;
    let (da, db) = (state.d_a(), state.d_b());
    let requested = cfg
        .max_levels
        .unwrap_or_else(|| default_levels(da).min(default_levels(db)));

    let na = param::param_count(da);
    let nb = param::param_count(db);
    let mut ranges = param::param_ranges(da);
    ranges.extend(param::param_ranges(db));
    let f = |p: &[f64]| {
        let ba = param::basis_from_params(da, &p[..na]);
        let bb = param::basis_from_params(db, &p[na..]);
        measure::mutual_info_for_bases(state, &ba, &bb)
    };
    let restarts = cfg.restarts_for(da.max(db)).max(na + nb);
    let outcomes = multistart_maximize(&ranges, &f, restarts, cfg, SALT_C1 ^ 0x5);
    let best = &outcomes[0];
    let pair0 = (
        ProjectiveBasis::from_unitary_unchecked(param::basis_from_params(da, &best.x[..na]))
            .canonicalized(),
        ProjectiveBasis::from_unitary_unchecked(param::basis_from_params(db, &best.x[na..]))
            .canonicalized(),
    );
    let degenerate0 = {
        let mut distinct = 1usize;
        for o in outcomes[1..]
            .iter()
            .filter(|o| o.value >= best.value - cfg.degeneracy_window)
        {
            let a =
                ProjectiveBasis::from_unitary_unchecked(param::basis_from_params(da, &o.x[..na]))
                    .canonicalized();
            let b =
                ProjectiveBasis::from_unitary_unchecked(param::basis_from_params(db, &o.x[na..]))
                    .canonicalized();
            if !(a.is_equivalent(&pair0.0, DEGEN_EQUIV_TOL)
                && b.is_equivalent(&pair0.1, DEGEN_EQUIV_TOL))
            {
                distinct += 1;
                break;
            }
        }
        distinct > 1
    };

    let mut entries = vec![best.value];
    let mut pairs = vec![pair0];
    let mut degeneracy_flags = vec![degenerate0];
    let mut converged = outcomes.iter().all(|o| o.converged);
    let mut truncated = false;

    if requested >= 2 {
        let chart_a = chart_mu_to_one(&pairs[0].0);
        let chart_b = chart_mu_to_one(&pairs[0].1);
        let ka = chart_a.param_count();
        let mut ranges = chart_a.param_ranges();
        ranges.extend(chart_b.param_ranges());
        let f = |p: &[f64]| {
            let ba = chart_a.basis_at(&p[..ka]);
            let bb = chart_b.basis_at(&p[ka..]);
            measure::mutual_info_for_bases(state, ba.matrix(), bb.matrix())
        };
        let outcomes =
            multistart_maximize(&ranges, &f, cfg.restarts_for(da.max(db)), cfg, SALT_Q ^ 0x5);
        let best = &outcomes[0];
        entries.push(best.value);
        pairs.push((
            chart_a.basis_at(&best.x[..ka]).canonicalized(),
            chart_b.basis_at(&best.x[ka..]).canonicalized(),
        ));
        degeneracy_flags.push(false);
        converged &= outcomes.iter().all(|o| o.converged);
    }

    'levels: for _level in 3..=requested {
        let priors_a: Vec<ProjectiveBasis> = pairs.iter().map(|p| p.0.clone()).collect();
        let priors_b: Vec<ProjectiveBasis> = pairs.iter().map(|p| p.1.clone()).collect();
        let (cands_a, cands_b) = match (chart_mu_to_many(&priors_a), chart_mu_to_many(&priors_b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(Error::UnsupportedLevel { .. }), _)
            | (_, Err(Error::UnsupportedLevel { .. }))
            | (Err(Error::UnsupportedDimension { .. }), _)
            | (_, Err(Error::UnsupportedDimension { .. })) => {
                truncated = true;
                break 'levels;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let mut best: Option<(f64, ProjectiveBasis, ProjectiveBasis)> = None;
        for ca in cands_a.candidates().expect("finite chart") {
            for cb in cands_b.candidates().expect("finite chart") {
                let v = measure::mutual_info_for_bases(state, ca.matrix(), cb.matrix());
                if best.as_ref().is_none_or(|(bv, _, _)| v > *bv) {
                    best = Some((v, ca.clone(), cb.clone()));
                }
            }
        }
        let (v, ba, bb) = best.expect("charts are nonempty");
        entries.push(v);
        pairs.push((ba, bb));
        degeneracy_flags.push(false);
    }

    let m = entries.len();
    Ok(SymmetricCorrelationVector {
        entries,
        optimum_base_pairs: pairs,
        degeneracy_flags,
        m,
        truncated,
        converged,
    })
}
