//! Single-qubit state tomography through the payoffs of a quantized
//! two-player game.
//!
//! An unknown qubit ρ is appended to a fiducial |0⟩, the pair is evolved by
//! `U_A ⊗ U_B`, and the payoffs Tr(P ρ_f) are read out. For three fixed
//! strategy settings Alice's payoff is exactly one Stokes parameter of ρ,
//! which is enough to reconstruct the state.
//!
//! - [`linalg`]: fixed-size complex matrices and validating predicates.
//! - [`qubit`]: pure states, Pauli basis, Stokes conversions and metrics.
//! - [`game`]: strategy unitaries, evolution and payoffs.
//! - [`tomography`]: the three-step protocol, shot sampling, reconstruction.

pub mod error;
pub mod game;
pub mod linalg;
pub mod qubit;
pub mod tomography;

pub use error::{QtomoError, Result};
pub use game::{
    closed_form_coefficients, evolve, initial_state, payoff_closed_form, payoff_exact, payoff_operator,
    strategy_unitary, ClosedFormCoefficients, GameRun, PayoffMatrix, Strategy,
};
pub use linalg::{c64, ComplexMatrix, ComplexScalar, HermitianEigen, DEFAULT_TOL};
pub use qubit::{
    density_from_stokes, fidelity, probability_of, pure_density, stokes_of, trace_distance, PauliBasis,
    PureQubit, StokesVector,
};
pub use tomography::{
    bloch_geometry, derive_seed, estimate_stokes, estimate_stokes_per_step, estimate_stokes_with_budget,
    exact_stokes, exact_tomography, measurement_distribution, protocol_steps, reconstruct, run_protocol_exact,
    run_tomography, sample_payoff, split_shots, step_for, BlochGeometry, ProtocolStep, SampleEstimate,
    StepLabel, StepOutcome, TomographyResult,
};
