//! Three-step tomography protocol built on the game payoffs.
//!
//! With Alice's payoff matrix diag(1, −1, 1, −1), Alice's payoff equals one
//! Stokes parameter of the unknown qubit for each of the three canonical
//! strategy settings. The protocol order does not follow the Stokes index:
//! the first step yields S2, the second S1, the third S3. Every
//! [`ProtocolStep`] carries its [`StepLabel`] so callers never rely on position.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QtomoError, Result};
use crate::game::{evolve, initial_state, payoff_exact, GameRun, PayoffMatrix, Strategy};
use crate::linalg::{ComplexMatrix, DEFAULT_TOL};
use crate::qubit::{density_from_stokes, fidelity, pure_density, trace_distance, PureQubit, StokesVector};

/// Bloch norms up to `1 + PROJECTION_SLACK` count as on the sphere and are not rescaled.
pub const PROJECTION_SLACK: f64 = 1e-12;

/// Which Stokes parameter a protocol step measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepLabel {
    S1,
    S2,
    S3,
}

impl StepLabel {
    /// Index into a Stokes vector (1, 2 or 3).
    pub fn stokes_index(self) -> usize {
        match self {
            StepLabel::S1 => 1,
            StepLabel::S2 => 2,
            StepLabel::S3 => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StepLabel::S1 => "S1",
            StepLabel::S2 => "S2",
            StepLabel::S3 => "S3",
        }
    }
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Strategy and payoff settings for one measurement step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolStep {
    pub label: StepLabel,
    /// 1-based position in the protocol.
    pub number: usize,
    pub strategy_a: Strategy,
    pub strategy_b: Strategy,
    pub payoff_a: PayoffMatrix,
    pub payoff_b: PayoffMatrix,
}

/// The canonical steps in protocol order: S2, S1, S3.
///
/// Alice's α is 0 throughout since no payoff depends on it.
pub fn protocol_steps() -> [ProtocolStep; 3] {
    let half = Strategy::new(FRAC_PI_2, 0.0).expect("valid angles");
    let half_quarter_phase = Strategy::new(FRAC_PI_2, FRAC_PI_2).expect("valid angles");
    let step = |label, number, strategy_a, strategy_b| ProtocolStep {
        label,
        number,
        strategy_a,
        strategy_b,
        payoff_a: PayoffMatrix::alice(),
        payoff_b: PayoffMatrix::bob(),
    };
    [
        step(StepLabel::S2, 1, half, half_quarter_phase),
        step(StepLabel::S1, 2, half, half),
        step(StepLabel::S3, 3, Strategy::identity(), Strategy::identity()),
    ]
}

/// Canonical step that measures the given Stokes parameter.
pub fn step_for(label: StepLabel) -> ProtocolStep {
    protocol_steps()
        .into_iter()
        .find(|s| s.label == label)
        .expect("every label has a step")
}

/// Exact outcome of one protocol step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub step: ProtocolStep,
    pub run: GameRun,
    pub payoff_a: f64,
    pub payoff_b: f64,
}

/// Runs the three canonical steps exactly on a 2×2 density.
pub fn run_protocol_exact(rho: &ComplexMatrix) -> Result<[StepOutcome; 3]> {
    let rho_in = initial_state(rho)?;
    let run_step = |step: ProtocolStep| -> Result<StepOutcome> {
        let run = evolve(&rho_in, step.strategy_a, step.strategy_b)?;
        Ok(StepOutcome {
            payoff_a: payoff_exact(&run, &step.payoff_a),
            payoff_b: payoff_exact(&run, &step.payoff_b),
            step,
            run,
        })
    };
    let [a, b, c] = protocol_steps();
    Ok([run_step(a)?, run_step(b)?, run_step(c)?])
}

fn assemble_stokes(values: impl IntoIterator<Item = (StepLabel, f64)>) -> Result<StokesVector> {
    let mut s = [1.0, 0.0, 0.0, 0.0];
    for (label, v) in values {
        s[label.stokes_index()] = v;
    }
    StokesVector::new(s[0], s[1], s[2], s[3])
}

/// Stokes vector read off Alice's exact payoffs.
pub fn exact_stokes(rho: &ComplexMatrix) -> Result<StokesVector> {
    let outcomes = run_protocol_exact(rho)?;
    assemble_stokes(outcomes.iter().map(|o| (o.step.label, o.payoff_a)))
}

/// Computational-basis outcome probabilities of ρ_f, clamped to `[0, 1]`.
pub fn measurement_distribution(run: &GameRun) -> [f64; 4] {
    let mut p = [0.0; 4];
    for (i, out) in p.iter_mut().enumerate() {
        *out = run.rho_f().get(i, i).re.clamp(0.0, 1.0);
    }
    debug_assert!((p.iter().sum::<f64>() - 1.0).abs() <= DEFAULT_TOL);
    p
}

/// Derives an independent 64-bit seed from a master seed and a stream index.
///
/// `master + γ·(index + 1)` followed by the SplitMix64 finalizer. Both stages
/// are bijections on `u64`, so distinct indices under one master never collide.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = master.wrapping_add(GAMMA.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Finite-shot estimate of one ±1-valued payoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleEstimate {
    /// Mean of the drawn ±1 outcomes.
    pub value: f64,
    pub shots: u64,
    /// Population standard deviation of the outcomes divided by √shots.
    pub std_error: f64,
    /// Seed the generator was initialized with.
    pub seed: u64,
    pub step_label: Option<StepLabel>,
}

/// Draws `shots` computational-basis outcomes of ρ_f and averages the payoff
/// entries at those outcomes.
///
/// Sampling is inverse-CDF over [`measurement_distribution`] with a ChaCha8
/// generator seeded from `seed`, so identical arguments give identical estimates.
pub fn sample_payoff(run: &GameRun, p: &PayoffMatrix, shots: u64, seed: u64) -> Result<SampleEstimate> {
    if shots < 1 {
        return Err(QtomoError::InvalidShots(shots));
    }
    let entries = p.entries();
    if let Some(&bad) = entries.iter().find(|&&e| e != 1.0 && e != -1.0) {
        return Err(QtomoError::NonUnitPayoff(bad));
    }

    let probs = measurement_distribution(run);
    let mut cdf = [0.0; 4];
    let mut acc = 0.0;
    for (c, p) in cdf.iter_mut().zip(probs) {
        acc += p;
        *c = acc;
    }
    // Fallback for u at or beyond the accumulated total.
    let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plus: u64 = 0;
    for _ in 0..shots {
        let u: f64 = rng.random();
        let outcome = cdf.iter().position(|&c| u < c).unwrap_or(last);
        if entries[outcome] > 0.0 {
            plus += 1;
        }
    }
    let minus = shots - plus;
    let m = shots as f64;
    let value = (plus as f64 - minus as f64) / m;
    // For ±1 outcomes the population variance is 4·n₊·n₋/m², never above 1.
    let std_dev = 2.0 * ((plus as f64) * (minus as f64)).sqrt() / m;
    Ok(SampleEstimate {
        value,
        shots,
        std_error: std_dev / m.sqrt(),
        seed,
        step_label: None,
    })
}

/// Splits a total shot budget evenly across the protocol steps; the remainder
/// goes to the S3 step. Returned in protocol order.
pub fn split_shots(total: u64) -> [u64; 3] {
    let base = total / 3;
    let rem = total % 3;
    let mut out = [base; 3];
    for (slot, step) in out.iter_mut().zip(protocol_steps()) {
        if step.label == StepLabel::S3 {
            *slot += rem;
        }
    }
    out
}

/// Output of a tomography run, exact or sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyResult {
    pub stokes_est: StokesVector,
    /// Per-step sample estimates in protocol order; `None` for exact runs.
    pub per_step: Option<[SampleEstimate; 3]>,
    pub rho_hat: ComplexMatrix,
    /// Whether the estimated Bloch vector had to be rescaled onto the sphere.
    pub projected: bool,
    pub fidelity: Option<f64>,
    pub trace_dist: Option<f64>,
}

impl TomographyResult {
    fn from_stokes(stokes_est: StokesVector, per_step: Option<[SampleEstimate; 3]>) -> Result<Self> {
        let (rho_hat, projected) = reconstruct(&stokes_est, true)?;
        Ok(Self {
            stokes_est,
            per_step,
            rho_hat,
            projected,
            fidelity: None,
            trace_dist: None,
        })
    }

    /// Fills in fidelity and trace distance against a known pure state.
    pub fn compare_with(mut self, q: &PureQubit) -> Result<Self> {
        let truth = pure_density(q);
        self.fidelity = Some(fidelity(q, &self.rho_hat)?);
        self.trace_dist = Some(trace_distance(&truth, &self.rho_hat)?);
        Ok(self)
    }
}

/// Exact Stokes vector followed by reconstruction; no sampling.
pub fn exact_tomography(rho: &ComplexMatrix) -> Result<TomographyResult> {
    TomographyResult::from_stokes(exact_stokes(rho)?, None)
}

/// Sampled estimate with `shots` per step. Step `i` (protocol order) uses
/// the sub-seed `derive_seed(seed, i)`.
pub fn estimate_stokes(rho: &ComplexMatrix, shots: u64, seed: u64) -> Result<TomographyResult> {
    estimate_stokes_per_step(rho, [shots; 3], seed)
}

/// Sampled estimate from a single total budget split by [`split_shots`].
pub fn estimate_stokes_with_budget(rho: &ComplexMatrix, total_shots: u64, seed: u64) -> Result<TomographyResult> {
    estimate_stokes_per_step(rho, split_shots(total_shots), seed)
}

/// Sampled estimate with an explicit shot count per step (protocol order).
pub fn estimate_stokes_per_step(rho: &ComplexMatrix, shots: [u64; 3], seed: u64) -> Result<TomographyResult> {
    let rho_in = initial_state(rho)?;
    let steps = protocol_steps();
    let mut estimates = Vec::with_capacity(3);
    for (index, (step, &m)) in steps.iter().zip(shots.iter()).enumerate() {
        let run = evolve(&rho_in, step.strategy_a, step.strategy_b)?;
        let mut est = sample_payoff(&run, &step.payoff_a, m, derive_seed(seed, index as u64))?;
        est.step_label = Some(step.label);
        estimates.push(est);
    }
    let per_step: [SampleEstimate; 3] = estimates.try_into().expect("three steps");
    let stokes = assemble_stokes(per_step.iter().map(|e| (e.step_label.expect("set above"), e.value)))?;
    TomographyResult::from_stokes(stokes, Some(per_step))
}

/// ρ̂ = ½ Σ S_i σ_i, optionally after rescaling an out-of-ball Bloch vector
/// radially onto the unit sphere. Returns the matrix and whether it was rescaled.
pub fn reconstruct(s: &StokesVector, project: bool) -> Result<(ComplexMatrix, bool)> {
    if (s.s0 - 1.0).abs() > DEFAULT_TOL {
        return Err(QtomoError::Unnormalized(s.s0));
    }
    let norm = s.bloch_norm();
    if project && norm > 1.0 + PROJECTION_SLACK {
        let [x, y, z] = s.bloch();
        let scaled = StokesVector::new(1.0, x / norm, y / norm, z / norm)?;
        return Ok((density_from_stokes(&scaled)?, true));
    }
    Ok((density_from_stokes(s)?, false))
}

/// Sampled tomography of a known pure state, scored against it.
pub fn run_tomography(q: &PureQubit, shots: u64, seed: u64) -> Result<TomographyResult> {
    estimate_stokes(&pure_density(q), shots, seed)?.compare_with(q)
}

/// Coordinate axis of a Bloch-space plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// The plane `axis = offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub axis: Axis,
    pub offset: f64,
}

/// Intersects axis-aligned planes. Returns `None` unless each axis appears exactly once.
pub fn intersect_planes(planes: &[Plane]) -> Option<[f64; 3]> {
    let mut point = [None; 3];
    for plane in planes {
        let slot = &mut point[plane.axis as usize];
        if slot.is_some() {
            return None;
        }
        *slot = Some(plane.offset);
    }
    Some([point[0]?, point[1]?, point[2]?])
}

/// Planes that each measurement confines the state to, and their intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochGeometry {
    pub plane_z: f64,
    pub plane_y: f64,
    pub plane_x: f64,
    pub point: [f64; 3],
}

impl BlochGeometry {
    /// Planes in the order z, y, x.
    pub fn planes(&self) -> [Plane; 3] {
        [
            Plane {
                axis: Axis::Z,
                offset: self.plane_z,
            },
            Plane {
                axis: Axis::Y,
                offset: self.plane_y,
            },
            Plane {
                axis: Axis::X,
                offset: self.plane_x,
            },
        ]
    }
}

/// Plane offsets measured by the protocol for a pure state. The offsets are
/// the exact payoffs, so the point is bit-identical to [`exact_stokes`].
pub fn bloch_geometry(q: &PureQubit) -> BlochGeometry {
    let s = exact_stokes(&pure_density(q)).expect("pure densities are valid");
    let mut g = BlochGeometry {
        plane_z: s.s3,
        plane_y: s.s2,
        plane_x: s.s1,
        point: [0.0; 3],
    };
    g.point = intersect_planes(&g.planes()).expect("one plane per axis");
    g
}
