//! 2×2 density matrices in the `{|L⟩, |R⟩}` basis and their link to the Bloch vector.

use num_complex::Complex64;

use crate::bloch::{BlochState, SystemParams, STATE_TOLERANCE};
use crate::error::{Error, Result};

/// Tolerance on the trace and positivity checks.
pub const DENSITY_TOLERANCE: f64 = 1e-12;

/// Hermitian, unit-trace, positive 2×2 density matrix.
///
/// Only `ρ_LL`, `ρ_RR` and `ρ_LR` are stored; `ρ_RL` is the conjugate of `ρ_LR`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    rho_ll: f64,
    rho_rr: f64,
    rho_lr: Complex64,
}

impl DensityMatrix {
    pub fn new(rho_ll: f64, rho_rr: f64, rho_lr: Complex64) -> Result<Self> {
        if !(rho_ll.is_finite() && rho_rr.is_finite() && rho_lr.is_finite()) {
            return Err(Error::UnphysicalDensity {
                reason: "non-finite element",
            });
        }
        if ((rho_ll + rho_rr) - 1.0).abs() > DENSITY_TOLERANCE {
            return Err(Error::UnphysicalDensity {
                reason: "trace differs from 1",
            });
        }
        if rho_ll < -DENSITY_TOLERANCE || rho_rr < -DENSITY_TOLERANCE {
            return Err(Error::UnphysicalDensity {
                reason: "negative population",
            });
        }
        if rho_ll * rho_rr - rho_lr.norm_sqr() < -DENSITY_TOLERANCE {
            return Err(Error::UnphysicalDensity {
                reason: "negative eigenvalue",
            });
        }
        Ok(Self {
            rho_ll,
            rho_rr,
            rho_lr,
        })
    }

    pub fn rho_ll(&self) -> f64 {
        self.rho_ll
    }

    pub fn rho_rr(&self) -> f64 {
        self.rho_rr
    }

    pub fn rho_lr(&self) -> Complex64 {
        self.rho_lr
    }

    pub fn rho_rl(&self) -> Complex64 {
        self.rho_lr.conj()
    }

    /// `Tr(ρ²) = ρ_LL² + ρ_RR² + 2|ρ_LR|²`.
    pub fn purity(&self) -> f64 {
        self.rho_ll * self.rho_ll + self.rho_rr * self.rho_rr + 2.0 * self.rho_lr.norm_sqr()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * (self.rho_ll + self.rho_rr);
        let half_gap = (0.25 * (self.rho_rr - self.rho_ll).powi(2) + self.rho_lr.norm_sqr()).sqrt();
        [mean - half_gap, mean + half_gap]
    }
}

pub fn bloch_to_density(state: BlochState) -> Result<DensityMatrix> {
    if !state.norm().is_finite() || state.norm() > 1.0 + STATE_TOLERANCE {
        return Err(Error::UnphysicalState { norm: state.norm() });
    }
    Ok(DensityMatrix {
        rho_ll: 0.5 * (1.0 - state.z),
        rho_rr: 0.5 * (1.0 + state.z),
        rho_lr: Complex64::new(0.5 * state.x, 0.5 * state.y),
    })
}

/// Inverse of [`bloch_to_density`]. Physicality is guaranteed by the matrix constructor.
pub fn density_to_bloch(rho: &DensityMatrix) -> BlochState {
    BlochState::raw(2.0 * rho.rho_lr.re, 2.0 * rho.rho_lr.im, rho.rho_rr - rho.rho_ll)
}

/// `ς = (1 + |r|²) / 2`.
pub fn purity(state: BlochState) -> f64 {
    0.5 * (1.0 + state.norm_sq())
}

/// `dς/dt = -4γ(X² + Y²)`.
pub fn purity_rate(state: BlochState, params: SystemParams) -> f64 {
    -4.0 * params.gamma * (state.x * state.x + state.y * state.y)
}

/// Time derivative of the stored density-matrix elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRate {
    pub d_ll: f64,
    pub d_rr: f64,
    pub d_rl: Complex64,
}

pub fn rhs_density(rho: &DensityMatrix, params: SystemParams) -> DensityRate {
    let SystemParams { omega, gamma } = params;
    let rho_rl = rho.rho_rl();
    let flow = (2.0 * omega * rho_rl).im;
    DensityRate {
        d_ll: -flow,
        d_rr: flow,
        d_rl: -4.0 * gamma * rho_rl + Complex64::i() * omega * (rho.rho_ll - rho.rho_rr),
    }
}

impl DensityRate {
    /// Bloch-vector derivative implied by this rate.
    pub fn to_bloch(&self) -> BlochState {
        let d_lr = self.d_rl.conj();
        BlochState::raw(2.0 * d_lr.re, 2.0 * d_lr.im, self.d_rr - self.d_ll)
    }
}
