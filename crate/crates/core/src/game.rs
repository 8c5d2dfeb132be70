//! Two-player quantization scheme: strategy unitaries, the appended initial
//! state, unitary evolution, and payoffs.
//!
//! Payoffs are available through two independent routes. [`payoff_exact`]
//! evaluates Tr(P ρ_f) on the evolved 4×4 density, and [`payoff_closed_form`]
//! evaluates the trigonometric expansion in terms of the strategy angles and
//! the input state angles. Tests check that the two agree.

use num_complex::Complex64;

use crate::error::{QtomoError, Result};
use crate::linalg::{c64, ComplexMatrix, DEFAULT_TOL};
use crate::qubit::{check_polar, wrap_angle, PureQubit};

/// A player's unitary parameters: `beta` in `[0, π]`, `alpha` wrapped into `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strategy {
    beta: f64,
    alpha: f64,
}

impl Strategy {
    pub fn new(beta: f64, alpha: f64) -> Result<Self> {
        Ok(Self {
            beta: check_polar("beta", beta)?,
            alpha: wrap_angle("alpha", alpha)?,
        })
    }

    /// β = α = 0, the identity strategy.
    pub fn identity() -> Self {
        Self {
            beta: 0.0,
            alpha: 0.0,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Same β, different α.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.beta, alpha)
    }
}

/// Payoff matrix entries for one player; `eij` is row `i`, column `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffMatrix {
    pub e00: f64,
    pub e01: f64,
    pub e10: f64,
    pub e11: f64,
}

impl PayoffMatrix {
    pub fn new(e00: f64, e01: f64, e10: f64, e11: f64) -> Result<Self> {
        if [e00, e01, e10, e11].iter().all(|x| x.is_finite()) {
            Ok(Self { e00, e01, e10, e11 })
        } else {
            Err(QtomoError::NonFinite)
        }
    }

    /// Alice's tomography assignment: +1 on |00⟩, |10⟩ and −1 on |01⟩, |11⟩.
    pub fn alice() -> Self {
        Self {
            e00: 1.0,
            e01: -1.0,
            e10: 1.0,
            e11: -1.0,
        }
    }

    /// Bob's tomography assignment, the entrywise negation of Alice's.
    pub fn bob() -> Self {
        Self {
            e00: -1.0,
            e01: 1.0,
            e10: -1.0,
            e11: 1.0,
        }
    }

    /// Entries in basis order |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn entries(&self) -> [f64; 4] {
        [self.e00, self.e01, self.e10, self.e11]
    }

    /// Entrywise negation.
    pub fn negated(&self) -> Self {
        Self {
            e00: -self.e00,
            e01: -self.e01,
            e10: -self.e10,
            e11: -self.e11,
        }
    }
}

/// One evolution of the appended state under a pair of strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct GameRun {
    rho_in: ComplexMatrix,
    strategy_a: Strategy,
    strategy_b: Strategy,
    rho_f: ComplexMatrix,
}

impl GameRun {
    pub fn rho_in(&self) -> &ComplexMatrix {
        &self.rho_in
    }
    pub fn strategy_a(&self) -> Strategy {
        self.strategy_a
    }
    pub fn strategy_b(&self) -> Strategy {
        self.strategy_b
    }
    pub fn rho_f(&self) -> &ComplexMatrix {
        &self.rho_f
    }
}

/// Strategy-dependent weights of the closed-form payoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCoefficients {
    pub chi: f64,
    pub xi: f64,
    pub omega: f64,
    pub eta: f64,
    pub phi_coef: f64,
    pub theta_coef: f64,
}

/// U = cos(β/2) R + sin(β/2) P, with R = diag(e^{iα}, e^{−iα}) and
/// P|0⟩ = −|1⟩, P|1⟩ = |0⟩.
pub fn strategy_unitary(s: &Strategy) -> ComplexMatrix {
    let (sin_h, cos_h) = (s.beta / 2.0).sin_cos();
    let phase = Complex64::from_polar(1.0, s.alpha);
    ComplexMatrix::from_rows(&[
        [phase * cos_h, c64(sin_h, 0.0)],
        [c64(-sin_h, 0.0), phase.conj() * cos_h],
    ])
    .expect("entries are finite")
}

/// ρ_in = |0⟩⟨0| ⊗ ρ. The fiducial qubit comes first in the basis order.
pub fn initial_state(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != 2 {
        return Err(QtomoError::DimensionMismatch {
            left: rho.dim(),
            right: 2,
        });
    }
    if !rho.is_density(DEFAULT_TOL) {
        return Err(QtomoError::NotDensity { dim: 2 });
    }
    ComplexMatrix::basis_projector(2, 0)?.kron(rho)
}

/// ρ_f = (U_A ⊗ U_B) ρ_in (U_A ⊗ U_B)†.
pub fn evolve(rho_in: &ComplexMatrix, strategy_a: Strategy, strategy_b: Strategy) -> Result<GameRun> {
    if rho_in.dim() != 4 {
        return Err(QtomoError::DimensionMismatch {
            left: rho_in.dim(),
            right: 4,
        });
    }
    if !rho_in.is_density(DEFAULT_TOL) {
        return Err(QtomoError::NotDensity { dim: 4 });
    }
    let u = strategy_unitary(&strategy_a).kron(&strategy_unitary(&strategy_b))?;
    let rho_f = rho_in.conjugate_by(&u)?;
    debug_assert!(rho_f.is_density(DEFAULT_TOL));
    Ok(GameRun {
        rho_in: *rho_in,
        strategy_a,
        strategy_b,
        rho_f,
    })
}

/// P = Σ e_ij |ij⟩⟨ij|.
pub fn payoff_operator(p: &PayoffMatrix) -> ComplexMatrix {
    ComplexMatrix::diag_real(&p.entries()).expect("payoff entries are finite")
}

/// Tr(P ρ_f).
pub fn payoff_exact(run: &GameRun, p: &PayoffMatrix) -> f64 {
    let t = payoff_operator(p)
        .matmul(&run.rho_f)
        .expect("both operands are 4x4")
        .trace();
    debug_assert!(t.im.abs() < DEFAULT_TOL, "imaginary residue {}", t.im);
    t.re
}

pub fn closed_form_coefficients(sa: &Strategy, sb: &Strategy) -> ClosedFormCoefficients {
    let ca = (sa.beta / 2.0).cos().powi(2);
    let sa2 = (sa.beta / 2.0).sin().powi(2);
    let cb = (sb.beta / 2.0).cos().powi(2);
    let sb2 = (sb.beta / 2.0).sin().powi(2);
    let sin_b = sb.beta.sin();
    ClosedFormCoefficients {
        chi: ca * cb,
        xi: ca * sb2,
        omega: sa2 * sb2,
        eta: sa2 * cb,
        phi_coef: 0.5 * ca * sin_b,
        theta_coef: 0.5 * sa2 * sin_b,
    }
}

/// Closed-form payoff for a pure input state. Independent of Alice's α.
///
/// The cosα_B and sinα_B brackets share the same weight
/// `(e00 − e01)Φ + (e10 − e11)Θ`.
pub fn payoff_closed_form(p: &PayoffMatrix, sa: &Strategy, sb: &Strategy, q: &PureQubit) -> f64 {
    let k = closed_form_coefficients(sa, sb);
    let PayoffMatrix { e00, e01, e10, e11 } = *p;
    let half = q.theta() / 2.0;
    let cos2 = half.cos().powi(2);
    let sin2 = half.sin().powi(2);
    let (sin_t, _) = q.theta().sin_cos();
    let (sin_p, cos_p) = q.phi().sin_cos();
    let (sin_ab, cos_ab) = sb.alpha.sin_cos();
    let coherence = (e00 - e01) * k.phi_coef + (e10 - e11) * k.theta_coef;

    (e00 * k.chi + e11 * k.omega + e01 * k.xi + e10 * k.eta) * cos2
        + (e00 * k.xi + e11 * k.eta + e01 * k.chi + e10 * k.omega) * sin2
        + coherence * cos_ab * sin_t * cos_p
        + coherence * sin_ab * sin_t * sin_p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::pure_density;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn strat(beta: f64, alpha: f64) -> Strategy {
        Strategy::new(beta, alpha).unwrap()
    }

    #[test]
    fn strategy_ranges() {
        assert!(Strategy::new(-0.01, 0.0).is_err());
        assert!(Strategy::new(PI + 0.01, 0.0).is_err());
        assert!((Strategy::new(0.0, -FRAC_PI_2).unwrap().alpha() - 1.5 * PI).abs() < 1e-15);
        assert!(PayoffMatrix::new(1.0, f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn strategy_unitary_examples() {
        assert_eq!(strategy_unitary(&strat(0.0, 0.0)), ComplexMatrix::identity(2).unwrap());
        let flip = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        for alpha in [0.0, 1.0, 5.0] {
            let u = strategy_unitary(&strat(PI, alpha));
            assert!(u.max_abs_diff(&flip).unwrap() < 1e-15);
        }
        let r = FRAC_1_SQRT_2;
        let expected = ComplexMatrix::from_rows(&[
            [c64(0.0, r), c64(r, 0.0)],
            [c64(-r, 0.0), c64(0.0, -r)],
        ])
        .unwrap();
        let u = strategy_unitary(&strat(FRAC_PI_2, FRAC_PI_2));
        assert!(u.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn initial_state_examples() {
        let up = ComplexMatrix::basis_projector(2, 0).unwrap();
        assert_eq!(
            initial_state(&up).unwrap(),
            ComplexMatrix::diag_real(&[1.0, 0.0, 0.0, 0.0]).unwrap()
        );
        let mixed = ComplexMatrix::identity(2).unwrap().scale(c64(0.5, 0.0));
        assert_eq!(
            initial_state(&mixed).unwrap(),
            ComplexMatrix::diag_real(&[0.5, 0.5, 0.0, 0.0]).unwrap()
        );
        assert!(matches!(
            initial_state(&ComplexMatrix::diag_real(&[2.0, -1.0]).unwrap()),
            Err(QtomoError::NotDensity { dim: 2 })
        ));
    }

    #[test]
    fn evolve_examples() {
        let q = PureQubit::new(1.3, 0.4).unwrap();
        let rho_in = initial_state(&pure_density(&q)).unwrap();
        let run = evolve(&rho_in, Strategy::identity(), Strategy::identity()).unwrap();
        assert_eq!(run.rho_f(), &rho_in);

        let pole = ComplexMatrix::diag_real(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let run = evolve(&pole, strat(PI, 0.3), strat(PI, 2.9)).unwrap();
        let target = ComplexMatrix::diag_real(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(run.rho_f().max_abs_diff(&target).unwrap() < 1e-15);
        assert!((run.rho_f().trace() - c64(1.0, 0.0)).norm() < 1e-15);

        assert!(evolve(&ComplexMatrix::identity(2).unwrap(), Strategy::identity(), Strategy::identity()).is_err());
        assert!(matches!(
            evolve(&ComplexMatrix::identity(4).unwrap(), Strategy::identity(), Strategy::identity()),
            Err(QtomoError::NotDensity { dim: 4 })
        ));
    }

    #[test]
    fn payoff_operator_examples() {
        assert_eq!(
            payoff_operator(&PayoffMatrix::alice()),
            ComplexMatrix::diag_real(&[1.0, -1.0, 1.0, -1.0]).unwrap()
        );
        assert_eq!(
            payoff_operator(&PayoffMatrix::bob()),
            ComplexMatrix::diag_real(&[-1.0, 1.0, -1.0, 1.0]).unwrap()
        );
        assert_eq!(
            payoff_operator(&PayoffMatrix::new(0.0, 0.0, 0.0, 0.0).unwrap()),
            ComplexMatrix::zeros(4).unwrap()
        );
        assert_eq!(PayoffMatrix::alice().negated(), PayoffMatrix::bob());
    }

    #[test]
    fn payoff_exact_examples() {
        let pole = initial_state(&pure_density(&PureQubit::new(0.0, 0.0).unwrap())).unwrap();
        let run = evolve(&pole, Strategy::identity(), Strategy::identity()).unwrap();
        assert_eq!(payoff_exact(&run, &PayoffMatrix::alice()), 1.0);

        let q = PureQubit::new(FRAC_PI_2, FRAC_PI_2).unwrap();
        let rho_in = initial_state(&pure_density(&q)).unwrap();
        let run = evolve(&rho_in, strat(FRAC_PI_2, 0.0), strat(FRAC_PI_2, FRAC_PI_2)).unwrap();
        assert!((payoff_exact(&run, &PayoffMatrix::alice()) - 1.0).abs() < 1e-15);
        assert!((payoff_exact(&run, &PayoffMatrix::bob()) + 1.0).abs() < 1e-15);

        let mixed = initial_state(&ComplexMatrix::identity(2).unwrap().scale(c64(0.5, 0.0))).unwrap();
        let run = evolve(&mixed, strat(0.4, 1.0), strat(2.0, 3.0)).unwrap();
        assert_eq!(payoff_exact(&run, &PayoffMatrix::new(0.0, 0.0, 0.0, 0.0).unwrap()), 0.0);
    }

    #[test]
    fn coefficient_examples() {
        let k = closed_form_coefficients(&strat(FRAC_PI_2, 0.0), &strat(FRAC_PI_2, 0.0));
        for v in [k.chi, k.xi, k.omega, k.eta, k.phi_coef, k.theta_coef] {
            assert!((v - 0.25).abs() < 1e-15);
        }
        let k = closed_form_coefficients(&Strategy::identity(), &Strategy::identity());
        assert_eq!(
            k,
            ClosedFormCoefficients {
                chi: 1.0,
                xi: 0.0,
                omega: 0.0,
                eta: 0.0,
                phi_coef: 0.0,
                theta_coef: 0.0
            }
        );
        let k = closed_form_coefficients(&strat(0.9, 0.0), &strat(2.2, 0.0));
        assert!((k.chi + k.xi + k.omega + k.eta - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_reduces_to_stokes_components() {
        for (theta, phi) in [(0.3, 0.2), (1.9, 4.4), (2.7, 6.0)] {
            let q = PureQubit::new(theta, phi).unwrap();
            let step1 = payoff_closed_form(
                &PayoffMatrix::alice(),
                &strat(FRAC_PI_2, 0.0),
                &strat(FRAC_PI_2, FRAC_PI_2),
                &q,
            );
            assert!((step1 - theta.sin() * phi.sin()).abs() < 1e-15);
            let step2 = payoff_closed_form(
                &PayoffMatrix::alice(),
                &strat(FRAC_PI_2, 0.0),
                &strat(FRAC_PI_2, 0.0),
                &q,
            );
            assert!((step2 - theta.sin() * phi.cos()).abs() < 1e-15);
        }
    }
}
