use std::f64::consts::{PI, TAU};

use qtomo_core::{
    bloch_geometry, derive_seed, exact_tomography, protocol_steps, pure_density, reconstruct, run_protocol_exact,
    run_tomography, stokes_of, PureQubit, StokesVector, TomographyResult,
};
use rayon::prelude::*;

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::report::{
    matrix_entries, EstimateReport, Inputs, Metrics, Planes, ReconstructionReport, Report, StepReport,
    StokesReport, SweepRow, TrialSummary,
};

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        Command::Exact => cmd_exact(cfg),
        Command::Sample => cmd_sample(cfg),
        Command::Sweep => cmd_sweep(cfg),
        Command::Reconstruct => cmd_reconstruct(cfg),
        Command::Bloch => cmd_bloch(cfg),
    }
}

fn qubit(cfg: &RunConfig) -> Result<PureQubit, CliError> {
    let theta = cfg
        .theta
        .ok_or_else(|| CliError::Validation("--theta is required".into()))?;
    Ok(PureQubit::new(theta, cfg.phi.unwrap_or(0.0))?)
}

fn angle_inputs(q: &PureQubit) -> Inputs {
    Inputs {
        theta: Some(q.theta()),
        phi: Some(q.phi()),
        ..Inputs::default()
    }
}

fn stokes_report(source: &'static str, s: &StokesVector) -> StokesReport {
    StokesReport {
        source,
        s0: s.s0,
        s1: s.s1,
        s2: s.s2,
        s3: s.s3,
    }
}

fn reconstruction_report(r: &TomographyResult) -> ReconstructionReport {
    ReconstructionReport {
        rho: matrix_entries(&r.rho_hat),
        projected: r.projected,
        bloch_norm: r.stokes_est.bloch_norm(),
    }
}

fn bare_step_reports() -> Vec<StepReport> {
    protocol_steps()
        .iter()
        .map(|s| StepReport {
            label: s.label.as_str(),
            step: s.number,
            strategy_a: s.strategy_a.into(),
            strategy_b: s.strategy_b.into(),
            payoff_matrix_a: s.payoff_a.entries(),
            payoff_matrix_b: s.payoff_b.entries(),
            payoff_a: None,
            payoff_b: None,
            estimate: None,
        })
        .collect()
}

/// Exact payoffs of the three protocol steps and the Stokes vector they give.
pub fn cmd_exact(cfg: &RunConfig) -> Result<Report, CliError> {
    let q = qubit(cfg)?;
    let rho = pure_density(&q);
    let outcomes = run_protocol_exact(&rho)?;
    let mut steps = bare_step_reports();
    for (report, o) in steps.iter_mut().zip(outcomes.iter()) {
        report.payoff_a = Some(o.payoff_a);
        report.payoff_b = Some(o.payoff_b);
    }
    let result = exact_tomography(&rho)?.compare_with(&q)?;
    let reference = stokes_of(&rho)?;
    let residual = result
        .stokes_est
        .to_array()
        .iter()
        .zip(reference.to_array())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Report {
        command: "exact",
        inputs: angle_inputs(&q),
        steps: Some(steps),
        stokes: Some(stokes_report("payoffs", &result.stokes_est)),
        reconstruction: Some(reconstruction_report(&result)),
        metrics: Some(Metrics {
            residual_vs_stokes_of: Some(residual),
            fidelity: result.fidelity,
            trace_distance: result.trace_dist,
            ..Metrics::default()
        }),
        seed: None,
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Sampled tomography. With `--trials N > 1`, trial `k` reruns the protocol
/// with seed `derive_seed(seed, k)` and a summary lands in `metrics.trials`.
pub fn cmd_sample(cfg: &RunConfig) -> Result<Report, CliError> {
    let q = qubit(cfg)?;
    let result = run_tomography(&q, cfg.shots, cfg.seed)?;
    let per_step = result.per_step.expect("sampled runs carry estimates");
    let mut steps = bare_step_reports();
    for (report, e) in steps.iter_mut().zip(per_step.iter()) {
        report.estimate = Some(EstimateReport::from(e));
    }

    let trials = if cfg.trials > 1 {
        let runs: Vec<TomographyResult> = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|k| run_tomography(&q, cfg.shots, derive_seed(cfg.seed, k)))
            .collect::<Result<_, _>>()?;
        let mut fid: Vec<f64> = runs.iter().map(|r| r.fidelity.expect("scored")).collect();
        let mut td: Vec<f64> = runs.iter().map(|r| r.trace_dist.expect("scored")).collect();
        Some(TrialSummary {
            count: cfg.trials,
            fidelity_mean: fid.iter().sum::<f64>() / fid.len() as f64,
            fidelity_min: fid.iter().copied().fold(f64::INFINITY, f64::min),
            fidelity_median: median(&mut fid),
            trace_distance_median: median(&mut td),
        })
    } else {
        None
    };

    Ok(Report {
        command: "sample",
        inputs: Inputs {
            shots: Some(cfg.shots),
            trials: Some(cfg.trials),
            ..angle_inputs(&q)
        },
        steps: Some(steps),
        stokes: Some(stokes_report("samples", &result.stokes_est)),
        reconstruction: Some(reconstruction_report(&result)),
        metrics: Some(Metrics {
            fidelity: result.fidelity,
            trace_distance: result.trace_dist,
            trials,
            ..Metrics::default()
        }),
        seed: Some(cfg.seed),
    })
}

/// Grid of θ values: `n` points spanning `[0, π]` inclusive.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect()
}

/// Grid of φ values: `n` points spanning `[0, 2π)`.
pub fn phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

/// Seed for grid cell `index` (row-major over θ then φ).
pub fn cell_seed(master: u64, index: usize) -> u64 {
    derive_seed(master, index as u64)
}

/// Tomography over a θ×φ grid; exact with `--exact`, sampled otherwise.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let thetas = theta_grid(cfg.theta_steps);
    let phis = phi_grid(cfg.phi_steps);
    let cells: Vec<(usize, f64, f64)> = thetas
        .iter()
        .flat_map(|&t| phis.iter().map(move |&p| (t, p)))
        .enumerate()
        .map(|(i, (t, p))| (i, t, p))
        .collect();

    let rows: Vec<SweepRow> = cells
        .par_iter()
        .map(|&(index, theta, phi)| -> Result<SweepRow, CliError> {
            let q = PureQubit::new(theta, phi)?;
            let result = if cfg.exact {
                exact_tomography(&pure_density(&q))?.compare_with(&q)?
            } else {
                run_tomography(&q, cfg.shots, cell_seed(cfg.seed, index))?
            };
            let [s1, s2, s3] = q.bloch();
            let [s1_hat, s2_hat, s3_hat] = result.stokes_est.bloch();
            Ok(SweepRow {
                theta: q.theta(),
                phi: q.phi(),
                s1,
                s2,
                s3,
                s1_hat,
                s2_hat,
                s3_hat,
                fidelity: result.fidelity.expect("scored"),
            })
        })
        .collect::<Result<_, _>>()?;

    let max_residual = rows
        .iter()
        .flat_map(|r| [r.s1_hat - r.s1, r.s2_hat - r.s2, r.s3_hat - r.s3])
        .map(f64::abs)
        .fold(0.0, f64::max);

    Ok(Report {
        command: "sweep",
        inputs: Inputs {
            shots: (!cfg.exact).then_some(cfg.shots),
            theta_steps: Some(cfg.theta_steps),
            phi_steps: Some(cfg.phi_steps),
            mode: Some(if cfg.exact { "exact" } else { "sampled" }),
            ..Inputs::default()
        },
        steps: None,
        stokes: None,
        reconstruction: None,
        metrics: Some(Metrics {
            max_residual_vs_angles: Some(max_residual),
            rows: Some(rows),
            ..Metrics::default()
        }),
        seed: (!cfg.exact).then_some(cfg.seed),
    })
}

/// Density matrix from explicit Stokes parameters, projected onto the Bloch
/// ball when necessary.
pub fn cmd_reconstruct(cfg: &RunConfig) -> Result<Report, CliError> {
    let [s1, s2, s3] = cfg
        .stokes
        .ok_or_else(|| CliError::Validation("--s1, --s2 and --s3 are required".into()))?;
    let s = StokesVector::new(1.0, s1, s2, s3)?;
    let (rho, projected) = reconstruct(&s, true)?;
    Ok(Report {
        command: "reconstruct",
        inputs: Inputs {
            s1: Some(s1),
            s2: Some(s2),
            s3: Some(s3),
            ..Inputs::default()
        },
        steps: None,
        stokes: Some(stokes_report("input", &s)),
        reconstruction: Some(ReconstructionReport {
            rho: matrix_entries(&rho),
            projected,
            bloch_norm: s.bloch_norm(),
        }),
        metrics: None,
        seed: None,
    })
}

/// Measurement planes z = S3, y = S2, x = S1 and their intersection point.
pub fn cmd_bloch(cfg: &RunConfig) -> Result<Report, CliError> {
    let q = qubit(cfg)?;
    let g = bloch_geometry(&q);
    let [x, y, z] = g.point;
    Ok(Report {
        command: "bloch",
        inputs: angle_inputs(&q),
        steps: None,
        stokes: Some(StokesReport {
            source: "geometry",
            s0: 1.0,
            s1: x,
            s2: y,
            s3: z,
        }),
        reconstruction: None,
        metrics: Some(Metrics {
            planes: Some(Planes {
                z: g.plane_z,
                y: g.plane_y,
                x: g.plane_x,
            }),
            point: Some(g.point),
            ..Metrics::default()
        }),
        seed: None,
    })
}
