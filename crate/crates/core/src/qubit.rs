//! Single-qubit states: pure (θ, φ) parameterization, Pauli basis, and
//! conversions between density matrices and Stokes vectors.

use std::f64::consts::{PI, TAU};

use crate::error::{QtomoError, Result};
use crate::linalg::{c64, ComplexMatrix, DEFAULT_TOL};

/// Pure state cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubit {
    theta: f64,
    phi: f64,
}

/// Wraps an azimuthal angle into `[0, 2π)`.
pub(crate) fn wrap_angle(name: &'static str, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(QtomoError::AngleOutOfRange {
            name,
            value: x,
            min: 0.0,
            max: TAU,
        });
    }
    let w = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    Ok(if w >= TAU { 0.0 } else { w })
}

/// Checks a polar angle lies in `[0, π]` without wrapping it.
pub(crate) fn check_polar(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() && (0.0..=PI).contains(&x) {
        Ok(x)
    } else {
        Err(QtomoError::AngleOutOfRange {
            name,
            value: x,
            min: 0.0,
            max: PI,
        })
    }
}

impl PureQubit {
    /// `theta` must lie in `[0, π]`; `phi` is wrapped into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        Ok(Self {
            theta: check_polar("theta", theta)?,
            phi: wrap_angle("phi", phi)?,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Amplitudes (⟨0|ψ⟩, ⟨1|ψ⟩).
    pub fn amplitudes(&self) -> [num_complex::Complex64; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        [c64(c, 0.0), num_complex::Complex64::from_polar(s, self.phi)]
    }

    /// Bloch vector (sinθ cosφ, sinθ sinφ, cosθ) from the angles directly.
    pub fn bloch(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Real coefficients of a qubit density matrix in the Pauli basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesVector {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    pub fn new(s0: f64, s1: f64, s2: f64, s3: f64) -> Result<Self> {
        if [s0, s1, s2, s3].iter().all(|x| x.is_finite()) {
            Ok(Self { s0, s1, s2, s3 })
        } else {
            Err(QtomoError::NonFinite)
        }
    }

    /// Normalized vector (s0 = 1) with the given Bloch components.
    pub fn from_bloch(bloch: [f64; 3]) -> Result<Self> {
        Self::new(1.0, bloch[0], bloch[1], bloch[2])
    }

    pub fn bloch(&self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }

    pub fn bloch_norm(&self) -> f64 {
        let [x, y, z] = self.bloch();
        (x * x + y * y + z * z).sqrt()
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.s0, self.s1, self.s2, self.s3]
    }
}

/// σ₀ = I.
pub fn sigma0() -> ComplexMatrix {
    ComplexMatrix::identity(2).expect("2 is supported")
}

/// σ₁ = X.
pub fn sigma1() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).expect("finite constant")
}

/// σ₂ = Y.
pub fn sigma2() -> ComplexMatrix {
    let z = c64(0.0, 0.0);
    ComplexMatrix::from_rows(&[[z, c64(0.0, -1.0)], [c64(0.0, 1.0), z]]).expect("finite constant")
}

/// σ₃ = Z.
pub fn sigma3() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, -1.0]).expect("finite constant")
}

/// The four Pauli matrices σ₀..σ₃.
#[derive(Debug, Clone, Copy)]
pub struct PauliBasis {
    pub sigma: [ComplexMatrix; 4],
}

impl PauliBasis {
    pub fn new() -> Self {
        Self {
            sigma: [sigma0(), sigma1(), sigma2(), sigma3()],
        }
    }

    pub fn identity(&self) -> &ComplexMatrix {
        &self.sigma[0]
    }
    pub fn x(&self) -> &ComplexMatrix {
        &self.sigma[1]
    }
    pub fn y(&self) -> &ComplexMatrix {
        &self.sigma[2]
    }
    pub fn z(&self) -> &ComplexMatrix {
        &self.sigma[3]
    }
}

impl Default for PauliBasis {
    fn default() -> Self {
        Self::new()
    }
}

fn require_density(rho: &ComplexMatrix, dim: usize) -> Result<()> {
    if rho.dim() != dim {
        return Err(QtomoError::DimensionMismatch {
            left: rho.dim(),
            right: dim,
        });
    }
    if !rho.is_density(DEFAULT_TOL) {
        return Err(QtomoError::NotDensity { dim });
    }
    Ok(())
}

/// |ψ⟩⟨ψ| for a pure qubit.
pub fn pure_density(q: &PureQubit) -> ComplexMatrix {
    ComplexMatrix::outer(&q.amplitudes()).expect("amplitudes are finite")
}

/// S_i = Tr(σ_i ρ) for a validated 2×2 density.
pub fn stokes_of(rho: &ComplexMatrix) -> Result<StokesVector> {
    require_density(rho, 2)?;
    let basis = PauliBasis::new();
    let mut s = [0.0; 4];
    for (out, sigma) in s.iter_mut().zip(basis.sigma.iter()) {
        let t = sigma.matmul(rho)?.trace();
        if t.im.abs() > DEFAULT_TOL {
            return Err(QtomoError::NonRealExpectation(t.im));
        }
        *out = t.re;
    }
    StokesVector::new(s[0], s[1], s[2], s[3])
}

/// ρ = ½ Σ S_i σ_i. Rejects unnormalized vectors and Bloch norms above 1 + 1e-9.
pub fn density_from_stokes(s: &StokesVector) -> Result<ComplexMatrix> {
    if (s.s0 - 1.0).abs() > DEFAULT_TOL {
        return Err(QtomoError::Unnormalized(s.s0));
    }
    let norm = s.bloch_norm();
    if !norm.is_finite() {
        return Err(QtomoError::NonFinite);
    }
    if norm > 1.0 + DEFAULT_TOL {
        return Err(QtomoError::OutsideBlochBall(norm));
    }
    let basis = PauliBasis::new();
    let mut rho = ComplexMatrix::zeros(2)?;
    for (coef, sigma) in s.to_array().iter().zip(basis.sigma.iter()) {
        rho = rho.add(&sigma.scale(c64(0.5 * coef, 0.0)))?;
    }
    Ok(rho)
}

/// P_|i⟩ = ⟨i|ρ|i⟩, clamped to `[0, 1]`. Works for 2×2 and 4×4 densities.
pub fn probability_of(rho: &ComplexMatrix, index: usize) -> Result<f64> {
    let dim = rho.dim();
    if index >= dim {
        return Err(QtomoError::IndexOutOfRange { index, dim });
    }
    require_density(rho, dim)?;
    let p = rho.get(index, index).re;
    debug_assert!((-DEFAULT_TOL..=1.0 + DEFAULT_TOL).contains(&p));
    Ok(p.clamp(0.0, 1.0))
}

/// ⟨ψ|ρ|ψ⟩ in `[0, 1]`.
pub fn fidelity(q: &PureQubit, rho: &ComplexMatrix) -> Result<f64> {
    require_density(rho, 2)?;
    let psi = q.amplitudes();
    let mut acc = c64(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += psi[i].conj() * rho.get(i, j) * psi[j];
        }
    }
    Ok(acc.re.clamp(0.0, 1.0))
}

/// ½ Σ |λ_i(a − b)|.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(QtomoError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    require_density(a, 2)?;
    require_density(b, 2)?;
    let diff = a.sub(b)?;
    Ok(0.5 * diff.hermitian_eigenvalues().iter().map(|l| l.abs()).sum::<f64>())
}
