//! Subcommand implementations: corrvec reports, parameter sweeps,
//! verification campaigns, and MUB export.

use std::io::Write;

use mubcorr::corrvec::discord_from_c1;
use mubcorr::oracles::{
    entanglement_of_formation_two_qubit, oracle_bell_diagonal, werner_chi,
    werner_entanglement_of_formation,
};
use mubcorr::seeding::derive_seed;
use mubcorr::states::{make_bell_diagonal, make_rho1, make_rho2, make_werner};
use mubcorr::verify::{run_campaign, Campaign, CampaignOptions};
use mubcorr::{
    check_inequality_10, check_inequality_9, compute_correlation_vector, compute_symmetric_vector,
    BipartiteState, OptimizerConfig, ProjectiveBasis,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::statefile::StateFile;
use crate::{CliError, OutputFormat};

const SALT_SWEEP: u64 = 0x57EE;

/// Format a value with 12 significant digits ('.' decimal separator).
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn basis_rows(b: &ProjectiveBasis) -> Vec<String> {
    let d = b.dim();
    (0..d)
        .map(|r| {
            let cells: Vec<String> = (0..d)
                .map(|c| {
                    let z = b.matrix()[(r, c)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            format!("  [ {} ]", cells.join(", "))
        })
        .collect()
}

#[derive(Serialize)]
struct BasisJson(Vec<Vec<[f64; 2]>>);

impl BasisJson {
    fn new(b: &ProjectiveBasis) -> Self {
        let d = b.dim();
        Self(
            (0..d)
                .map(|j| {
                    let v = b.vector(j);
                    (0..d).map(|k| [v[k].re, v[k].im]).collect()
                })
                .collect(),
        )
    }
}

#[derive(Serialize)]
struct InequalityJson {
    lhs: f64,
    rhs: f64,
    slack: f64,
    h1: f64,
    h2: f64,
    holds: bool,
}

impl From<&mubcorr::InequalityReport> for InequalityJson {
    fn from(r: &mubcorr::InequalityReport) -> Self {
        Self {
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
            h1: r.h1,
            h2: r.h2,
            holds: r.holds,
        }
    }
}

#[derive(Serialize)]
struct CorrvecJson {
    /// The resolved input state, echoed in explicit-matrix form.
    state: StateFile,
    d_a: usize,
    d_b: usize,
    m: usize,
    requested_levels: usize,
    entries: Vec<f64>,
    degeneracy_flags: Vec<bool>,
    truncated: bool,
    chart_exact: bool,
    converged: bool,
    discord: f64,
    inequality_9: InequalityJson,
    inequality_10: InequalityJson,
    optimum_bases: Vec<BasisJson>,
}

pub struct GlobalSettings {
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    pub max_dim: usize,
    pub out: Option<std::path::PathBuf>,
    pub format: OutputFormat,
}

fn write_output(settings: &GlobalSettings, contents: &str) -> Result<(), CliError> {
    match &settings.out {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

/// `corrvec`: full correlation-vector report for one state file.
pub fn cmd_corrvec(settings: &GlobalSettings, path: &std::path::Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let file = StateFile::parse(&text).map_err(CliError::Parse)?;
    let state = file.to_state(settings.max_dim).map_err(CliError::from)?;

    let cv = compute_correlation_vector(&state, &settings.optimizer).map_err(CliError::from)?;
    let discord = discord_from_c1(&state, cv.entries[0]).map_err(CliError::from)?;
    let ineq9 = check_inequality_9(&state, &cv).map_err(CliError::from)?;
    let ineq10 = check_inequality_10(&state, &cv).map_err(CliError::from)?;

    match settings.format {
        OutputFormat::Text => {
            println!(
                "state: {} (d_A={}, d_B={})",
                path.display(),
                state.d_a(),
                state.d_b()
            );
            println!("M = {} (requested {})", cv.m, cv.requested_levels);
            for (i, (value, degenerate)) in cv
                .entries
                .iter()
                .zip(cv.degeneracy_flags.iter())
                .enumerate()
            {
                let label = if i == 0 {
                    "C1".to_string()
                } else {
                    format!("Q{}", i + 1)
                };
                println!("{label} = {}  degenerate: {degenerate}", sig12(*value));
            }
            println!("discord D = {}", sig12(discord));
            for (name, rep) in [("(9)", &ineq9), ("(10)", &ineq10)] {
                println!(
                    "inequality {name}: lhs={} rhs={} slack={} holds={}",
                    sig12(rep.lhs),
                    sig12(rep.rhs),
                    sig12(rep.slack),
                    rep.holds
                );
            }
            for (i, b) in cv.optimum_bases.iter().enumerate() {
                println!("optimum basis A^{} (vectors as columns):", i + 1);
                for row in basis_rows(b) {
                    println!("{row}");
                }
            }
        }
        OutputFormat::Csv => {
            let mut header = Vec::new();
            let mut row = Vec::new();
            for i in 0..cv.entries.len() {
                header.push(if i == 0 {
                    "C1".to_string()
                } else {
                    format!("Q{}", i + 1)
                });
                row.push(sig12(cv.entries[i]));
            }
            header.extend(["D", "slack9", "slack10"].map(String::from));
            row.push(sig12(discord));
            row.push(sig12(ineq9.slack));
            row.push(sig12(ineq10.slack));
            println!("{}", header.join(","));
            println!("{}", row.join(","));
        }
    }

    if !cv.converged {
        eprintln!("warning: optimizer hit the iteration cap on some restart; best found returned");
    }
    if cv.truncated {
        eprintln!(
            "warning: vector truncated at M = {} (no chart for deeper levels)",
            cv.m
        );
    }
    if !cv.chart_exact {
        eprintln!("note: some level searched an under-approximating chart; entries are lower bounds there");
    }

    if let Some(out) = &settings.out {
        let json = CorrvecJson {
            state: StateFile::from_state(&state),
            d_a: state.d_a(),
            d_b: state.d_b(),
            m: cv.m,
            requested_levels: cv.requested_levels,
            entries: cv.entries.clone(),
            degeneracy_flags: cv.degeneracy_flags.clone(),
            truncated: cv.truncated,
            chart_exact: cv.chart_exact,
            converged: cv.converged,
            discord,
            inequality_9: (&ineq9).into(),
            inequality_10: (&ineq10).into(),
            optimum_bases: cv.optimum_bases.iter().map(BasisJson::new).collect(),
        };
        std::fs::write(
            out,
            serde_json::to_string_pretty(&json).expect("serializes"),
        )
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(())
}

/// Sweep families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepFamily {
    Werner,
    Rho1,
    Rho2,
    BellDiagonalLine,
}

/// Measures selectable for sweep columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Measure {
    C1,
    Q2,
    Q3,
    D,
    Ef,
    Symmetric,
}

pub struct SweepSpec {
    pub family: SweepFamily,
    pub d: usize,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub r_from: [f64; 3],
    pub r_to: [f64; 3],
    pub measures: Vec<Measure>,
}

struct SweepRow {
    parameter: f64,
    c1: f64,
    q2: f64,
    q3: Option<f64>,
    discord: f64,
    ef: Option<f64>,
    c1_closed: Option<f64>,
    q2_closed: Option<f64>,
    symmetric: Option<Vec<f64>>,
}

fn sweep_state(spec: &SweepSpec, t: f64) -> Result<BipartiteState, mubcorr::Error> {
    match spec.family {
        SweepFamily::Werner => make_werner(spec.d, t),
        SweepFamily::Rho1 => make_rho1(t),
        SweepFamily::Rho2 => make_rho2(t),
        SweepFamily::BellDiagonalLine => {
            let r = std::array::from_fn(|j| spec.r_from[j] + t * (spec.r_to[j] - spec.r_from[j]));
            make_bell_diagonal(r)
        }
    }
}

fn closed_forms(spec: &SweepSpec, t: f64) -> (Option<f64>, Option<f64>, Option<f64>) {
    // (C1_closed, Q2_closed, Ef_closed)
    match spec.family {
        SweepFamily::Werner => {
            let chi = werner_chi(spec.d, t);
            (
                Some(chi),
                Some(chi),
                Some(werner_entanglement_of_formation(spec.d, t)),
            )
        }
        SweepFamily::Rho1 => {
            let r = [1.0 - 2.0 * t, 1.0 - 2.0 * t, -1.0];
            let o = oracle_bell_diagonal(r).expect("rho1 line stays in the tetrahedron");
            (
                Some(o.vector[0]),
                Some(o.vector[1]),
                o.entanglement_of_formation,
            )
        }
        SweepFamily::Rho2 => {
            let r = [1.0 - 2.0 * t, -t, -t];
            let o = oracle_bell_diagonal(r).expect("rho2 line stays in the tetrahedron");
            (
                Some(o.vector[0]),
                Some(o.vector[1]),
                o.entanglement_of_formation,
            )
        }
        SweepFamily::BellDiagonalLine => {
            let r: [f64; 3] =
                std::array::from_fn(|j| spec.r_from[j] + t * (spec.r_to[j] - spec.r_from[j]));
            match oracle_bell_diagonal(r) {
                Ok(o) => (
                    Some(o.vector[0]),
                    Some(o.vector[1]),
                    o.entanglement_of_formation,
                ),
                Err(_) => (None, None, None),
            }
        }
    }
}

/// `sweep`: one CSV row per parameter value, deterministic for a fixed seed
/// regardless of worker count.
pub fn cmd_sweep(settings: &GlobalSettings, spec: &SweepSpec) -> Result<(), CliError> {
    if spec.steps < 2 {
        return Err(CliError::Parse("sweep needs at least 2 steps".into()));
    }
    if spec.lo > spec.hi {
        return Err(CliError::Parse("sweep range must satisfy lo <= hi".into()));
    }
    let want = |m: Measure| spec.measures.contains(&m);
    let want_symmetric = want(Measure::Symmetric);
    let want_q3 = want(Measure::Q3);
    let want_ef = want(Measure::Ef);

    let rows: Vec<Result<SweepRow, CliError>> = (0..spec.steps)
        .into_par_iter()
        .map(|i| {
            let t = spec.lo + (spec.hi - spec.lo) * i as f64 / (spec.steps - 1) as f64;
            let state = sweep_state(spec, t).map_err(CliError::from)?;
            let cfg = OptimizerConfig {
                seed: derive_seed(settings.seed, SALT_SWEEP, i as u64),
                max_levels: Some(if want_q3 { 3 } else { 2 }),
                ..settings.optimizer.clone()
            };
            let cv = compute_correlation_vector(&state, &cfg).map_err(CliError::from)?;
            let discord = discord_from_c1(&state, cv.entries[0]).map_err(CliError::from)?;
            let ef = if want_ef {
                if spec.family == SweepFamily::Werner {
                    Some(werner_entanglement_of_formation(spec.d, t))
                } else {
                    Some(entanglement_of_formation_two_qubit(&state).map_err(CliError::from)?)
                }
            } else {
                None
            };
            let symmetric = if want_symmetric {
                let sv = compute_symmetric_vector(&state, &cfg).map_err(CliError::from)?;
                Some(sv.entries)
            } else {
                None
            };
            let (c1_closed, q2_closed, _) = closed_forms(spec, t);
            Ok(SweepRow {
                parameter: t,
                c1: cv.entries[0],
                q2: cv.entries[1],
                q3: cv.entries.get(2).copied(),
                discord,
                ef,
                c1_closed,
                q2_closed,
                symmetric,
            })
        })
        .collect();

    let mut header: Vec<&str> = vec!["parameter", "C1", "Q2"];
    if want_q3 {
        header.push("Q3");
    }
    header.push("D");
    if want_ef {
        header.push("Ef");
    }
    header.extend(["C1_closed", "Q2_closed"]);
    if want_symmetric {
        header.extend(["C1_sym", "Q2_sym", "Q3_sym"]);
    }

    let mut csv = String::new();
    csv.push_str(&header.join(","));
    csv.push('\n');
    for row in rows {
        let row = row?;
        let mut cells = vec![sig12(row.parameter), sig12(row.c1), sig12(row.q2)];
        if want_q3 {
            cells.push(row.q3.map(sig12).unwrap_or_default());
        }
        cells.push(sig12(row.discord));
        if want_ef {
            cells.push(row.ef.map(sig12).unwrap_or_default());
        }
        cells.push(row.c1_closed.map(sig12).unwrap_or_default());
        cells.push(row.q2_closed.map(sig12).unwrap_or_default());
        if want_symmetric {
            let sv = row.symmetric.as_deref().unwrap_or(&[]);
            for k in 0..3 {
                cells.push(sv.get(k).copied().map(sig12).unwrap_or_default());
            }
        }
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    write_output(settings, &csv)
}

/// `verify`: run a named campaign; nonzero exit on violations.
pub fn cmd_verify(
    settings: &GlobalSettings,
    campaign: Campaign,
    samples: usize,
    dims: (usize, usize),
) -> Result<(), CliError> {
    let opts = CampaignOptions {
        samples,
        dims,
        seed: settings.seed,
        optimizer: settings.optimizer.clone(),
    };
    let report = run_campaign(campaign, &opts).map_err(CliError::from)?;
    println!("campaign: {}", report.campaign.name());
    println!(
        "samples: {}  dims: {}x{}  seed: {}",
        report.samples, report.dims.0, report.dims.1, settings.seed
    );
    if report.min_slack.is_finite() {
        println!("min slack: {}", sig12(report.min_slack));
    }
    println!("max deviation: {}", sig12(report.max_deviation));
    for note in &report.notes {
        println!("note: {note}");
    }
    if report.passed {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL ({} violations)", report.violations.len());
        for v in &report.violations {
            eprintln!(
                "violation at sample {} (reproduce with seed {}): {}",
                v.index, v.seed, v.detail
            );
        }
        Err(CliError::VerificationFailed)
    }
}

/// `mub`: export the standard MUB family for a prime dimension.
pub fn cmd_mub(settings: &GlobalSettings, d: usize) -> Result<(), CliError> {
    let family = mubcorr::standard_mub_family(d).map_err(CliError::from)?;
    let file = crate::statefile::MubFile::from_family(&family);
    let json = file.to_json();
    // The emitted document must round-trip through the parser into a valid
    // family before anything is written.
    crate::statefile::MubFile::parse(&json)
        .and_then(|f| f.to_family().map(|_| ()))
        .map_err(CliError::Parse)?;
    write_output(settings, &json)?;
    if settings.out.is_some() {
        let overlap = file.overlap.as_ref().expect("overlap report present");
        println!(
            "wrote {} bases for d = {d}; max overlap deviation {} over {} pairs",
            family.len(),
            sig12(overlap.max_deviation),
            overlap.pairs_checked
        );
    }
    Ok(())
}
