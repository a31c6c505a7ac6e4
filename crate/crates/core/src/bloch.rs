//! Bloch-vector dynamics of a tunneling two-level system under pure dephasing.
//!
//! The state is the real vector `(X, Y, Z)` with `X = 2 Re ρ_LR`,
//! `Y = 2 Im ρ_LR` and `Z = ρ_RR - ρ_LL`. Its equations of motion are
//!
//! ```text
//! dX/dt = -4γX
//! dY/dt = -4γY + 2ωZ
//! dZ/dt = -2ωY
//! ```
//!
//! The `(Y, Z)` block has eigenvalues `-2γ ± 2√(γ² - ω²)`: it oscillates at
//! `s = 2√(ω² - γ²)` for `ω > γ` and relaxes with rates `2γ ± s̃`,
//! `s̃ = 2√(γ² - ω²)`, for `γ > ω`. [`propagate_analytic`] evaluates the exact
//! solution in every regime through two damped kernels shared with the
//! distinguishability module.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Slack on `|r| <= 1` accepted when constructing a state.
pub const STATE_TOLERANCE: f64 = 1e-12;

/// Relative half-width of the band around `ω = γ` classified as critical.
pub const CRITICAL_BAND: f64 = 1e-6;

/// Below this value of `|(s t)²|` the damped kernels switch to their Taylor series.
const SERIES_CUTOFF: f64 = 1e-4;

/// Bloch vector `(X, Y, Z)`.
///
/// Also used for time derivatives returned by [`rhs`], which need not satisfy
/// the `|r| <= 1` bound.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochState {
    /// Builds a physical state, rejecting non-finite components and `|r| > 1 + 1e-12`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let state = Self { x, y, z };
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::UnphysicalState { norm: f64::NAN });
        }
        if !state.is_physical() {
            return Err(Error::UnphysicalState { norm: state.norm() });
        }
        Ok(state)
    }

    /// Builds a vector without any physicality check.
    pub const fn raw(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// The fully mixed state.
    pub const fn mixed() -> Self {
        Self::raw(0.0, 0.0, 0.0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_physical(&self) -> bool {
        self.norm() <= 1.0 + STATE_TOLERANCE
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for BlochState {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::raw(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for BlochState {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::raw(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for BlochState {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::raw(k * self.x, k * self.y, k * self.z)
    }
}

/// Tunneling frequency `omega` and dephasing rate `gamma`, both dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega: f64,
    pub gamma: f64,
}

impl SystemParams {
    pub fn new(omega: f64, gamma: f64) -> Result<Self> {
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega",
                requirement: "≥ 0",
                value: omega,
            });
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                requirement: "≥ 0",
                value: gamma,
            });
        }
        Ok(Self { omega, gamma })
    }

    /// Signed `s² = 4(ω² - γ²)`, factored to avoid cancellation near `ω = γ`.
    pub fn discriminant(&self) -> f64 {
        4.0 * (self.omega - self.gamma) * (self.omega + self.gamma)
    }

    pub(crate) fn require_tunneling(&self) -> Result<()> {
        if self.omega > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name: "omega",
                requirement: "> 0",
                value: self.omega,
            })
        }
    }
}

/// Damping regime of the `(Y, Z)` block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// `ω > γ`: damped oscillation at `s = 2√(ω² - γ²)`.
    Underdamped { s: f64 },
    /// `ω ≈ γ` within [`CRITICAL_BAND`].
    Critical,
    /// `γ > ω`: monotone relaxation, `s̃ = 2√(γ² - ω²)`.
    Overdamped { s_tilde: f64 },
}

impl Regime {
    pub fn rate(&self) -> f64 {
        match *self {
            Regime::Underdamped { s } => s,
            Regime::Critical => 0.0,
            Regime::Overdamped { s_tilde } => s_tilde,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::Underdamped { .. } => "underdamped",
            Regime::Critical => "critical",
            Regime::Overdamped { .. } => "overdamped",
        }
    }
}

pub fn classify_regime(params: SystemParams) -> Regime {
    let SystemParams { omega, gamma } = params;
    let band = CRITICAL_BAND * omega.max(gamma);
    let rate = params.discriminant().abs().sqrt();
    if omega - gamma > band {
        Regime::Underdamped { s: rate }
    } else if gamma - omega > band {
        Regime::Overdamped { s_tilde: rate }
    } else {
        Regime::Critical
    }
}

/// Time derivative `(dX/dt, dY/dt, dZ/dt)`.
pub fn rhs(state: BlochState, params: SystemParams) -> BlochState {
    let SystemParams { omega, gamma } = params;
    BlochState::raw(
        -4.0 * gamma * state.x,
        -4.0 * gamma * state.y + 2.0 * omega * state.z,
        -2.0 * omega * state.y,
    )
}

/// Damped kernels `(e^{-2γt} C(t), e^{-2γt} S(t))` where `C = cos(st)` and
/// `S = sin(st)/s` (hyperbolic counterparts with `s̃` when `γ > ω`).
///
/// Both are entire in `(st)²`, so near `s = 0` they are evaluated from their
/// Taylor series and reduce to `(e^{-2γt}, t e^{-2γt})` at `ω = γ`.
pub(crate) fn damped_kernels(params: SystemParams, t: f64) -> (f64, f64) {
    let SystemParams { omega, gamma } = params;
    let disc = params.discriminant();
    let q = disc * t * t;
    if q.abs() < SERIES_CUTOFF {
        let env = (-2.0 * gamma * t).exp();
        let c = 1.0 - q / 2.0 + q * q / 24.0;
        let sc = 1.0 - q / 6.0 + q * q / 120.0;
        (env * c, env * t * sc)
    } else if disc > 0.0 {
        let s = disc.sqrt();
        let env = (-2.0 * gamma * t).exp();
        let (sin, cos) = (s * t).sin_cos();
        (env * cos, env * sin / s)
    } else {
        // e^{-2γt} cosh(s̃t) and e^{-2γt} sinh(s̃t)/s̃ written through the two
        // relaxation rates 2γ ± s̃; 2γ - s̃ = 4ω²/(2γ + s̃) avoids cancellation.
        let s_tilde = (-disc).sqrt();
        let fast = 2.0 * gamma + s_tilde;
        let slow = 4.0 * omega * omega / fast;
        let e_slow = (-slow * t).exp();
        let gap = -(-2.0 * s_tilde * t).exp_m1();
        (e_slow * (1.0 - gap / 2.0), e_slow * gap / (2.0 * s_tilde))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "t",
            requirement: "≥ 0",
            value: t,
        })
    }
}

pub(crate) fn check_propagation(params: SystemParams, t: f64) -> Result<()> {
    check_time(t)?;
    params.require_tunneling()
}

/// Exact solution of the Bloch equations at time `t` from `state0`.
///
/// ```text
/// X = X₀ e^{-4γt}
/// Y = Y₀ (Dc - 2γ Ds) + 2ω Z₀ Ds
/// Z = Z₀ (Dc + 2γ Ds) - 2ω Y₀ Ds
/// ```
///
/// with `(Dc, Ds)` the damped kernels. Requires `t >= 0` and `ω > 0`.
pub fn propagate_analytic(state0: BlochState, params: SystemParams, t: f64) -> Result<BlochState> {
    check_propagation(params, t)?;
    let SystemParams { omega, gamma } = params;
    let (dc, ds) = damped_kernels(params, t);
    let BlochState { x, y, z } = state0;
    Ok(BlochState::raw(
        x * (-4.0 * gamma * t).exp(),
        y * (dc - 2.0 * gamma * ds) + 2.0 * omega * z * ds,
        z * (dc + 2.0 * gamma * ds) - 2.0 * omega * y * ds,
    ))
}

/// The unique stationary state for `γ > 0`: the fully mixed state.
pub fn steady_state(params: SystemParams) -> Result<BlochState> {
    if params.gamma > 0.0 {
        Ok(BlochState::mixed())
    } else {
        Err(Error::NoDephasing)
    }
}

/// Smallest decay exponent of the solution: `2γ`, or `2γ - s̃` when overdamped.
pub fn slowest_decay_rate(params: SystemParams) -> Result<f64> {
    if params.gamma <= 0.0 {
        return Err(Error::NoDephasing);
    }
    let SystemParams { omega, gamma } = params;
    Ok(match classify_regime(params) {
        Regime::Overdamped { s_tilde } => 4.0 * omega * omega / (2.0 * gamma + s_tilde),
        _ => 2.0 * gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn p(omega: f64, gamma: f64) -> SystemParams {
        SystemParams::new(omega, gamma).unwrap()
    }

    #[test]
    fn regime_classification() {
        match classify_regime(p(1.0, 0.5)) {
            Regime::Underdamped { s } => assert_abs_diff_eq!(s, 3f64.sqrt(), epsilon = 1e-15),
            r => panic!("{r:?}"),
        }
        assert_eq!(classify_regime(p(1.0, 1.0)), Regime::Critical);
        assert_eq!(classify_regime(p(1.0, 1.0)).rate(), 0.0);
        match classify_regime(p(1.0, 1.5)) {
            Regime::Overdamped { s_tilde } => {
                assert_abs_diff_eq!(s_tilde, 2.0 * 1.25f64.sqrt(), epsilon = 1e-15);
                assert_abs_diff_eq!(s_tilde, 2.2360680, epsilon = 1e-7);
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn rhs_examples() {
        assert_eq!(rhs(BlochState::raw(1.0, 0.0, 0.0), p(1.0, 0.5)), BlochState::raw(-2.0, 0.0, 0.0));
        assert_eq!(rhs(BlochState::raw(0.0, 0.0, 1.0), p(1.0, 0.0)), BlochState::raw(0.0, 2.0, 0.0));
        let d = rhs(BlochState::raw(0.3, 0.4, 0.5), p(2.0, 0.25));
        assert_abs_diff_eq!(d.x, -0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(d.y, 1.6, epsilon = 1e-15);
        assert_abs_diff_eq!(d.z, -1.6, epsilon = 1e-15);
    }

    #[test]
    fn identity_at_zero_time() {
        let s = BlochState::new(0.2, -0.5, 0.7).unwrap();
        for params in [p(1.0, 0.0), p(1.0, 0.5), p(1.0, 1.0), p(0.3, 7.0)] {
            let out = propagate_analytic(s, params, 0.0).unwrap();
            assert!(out.max_abs_diff(&s) < 1e-15, "{params:?}");
        }
    }

    #[test]
    fn free_rotation_half_period() {
        let out = propagate_analytic(BlochState::raw(0.0, 0.0, 1.0), p(1.0, 0.0), PI / 2.0).unwrap();
        assert!(out.max_abs_diff(&BlochState::raw(0.0, 0.0, -1.0)) < 1e-15);
    }

    #[test]
    fn critical_branch_matches_limit_formula() {
        let (omega, gamma) = (0.7, 0.7);
        let s0 = BlochState::raw(0.1, 0.6, -0.3);
        for t in [0.0, 0.3, 1.0, 4.0] {
            let out = propagate_analytic(s0, p(omega, gamma), t).unwrap();
            let e = (-2.0 * gamma * t).exp();
            let y = e * (s0.y * (1.0 - 2.0 * gamma * t) + 2.0 * gamma * gamma * s0.z / omega * t);
            let z = e * (s0.z * (1.0 + 2.0 * gamma * t) - 2.0 * omega * s0.y * t);
            assert_abs_diff_eq!(out.x, s0.x * (-4.0 * gamma * t).exp(), epsilon = 1e-15);
            assert_abs_diff_eq!(out.y, y, epsilon = 1e-15);
            assert_abs_diff_eq!(out.z, z, epsilon = 1e-15);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = BlochState::raw(0.0, 0.0, 1.0);
        assert!(propagate_analytic(s, p(1.0, 0.5), -1e-9).is_err());
        assert!(propagate_analytic(s, p(0.0, 0.5), 1.0).is_err());
        assert!(SystemParams::new(1.0, -0.1).is_err());
        assert!(SystemParams::new(f64::NAN, 0.1).is_err());
        assert!(BlochState::new(1.0, 1.0, 0.0).is_err());
        assert!(BlochState::new(1.0, 0.0, 1e-5).is_err());
        assert!(BlochState::new(0.6, 0.0, 0.8).is_ok());
    }

    #[test]
    fn steady_state_requires_dephasing() {
        assert_eq!(steady_state(p(1.0, 0.5)).unwrap(), BlochState::mixed());
        assert_eq!(steady_state(p(2.0, 10.0)).unwrap(), BlochState::mixed());
        assert_eq!(steady_state(p(1.0, 0.0)), Err(Error::NoDephasing));
    }

    #[test]
    fn slowest_rate_examples() {
        assert_abs_diff_eq!(slowest_decay_rate(p(1.0, 0.5)).unwrap(), 1.0, epsilon = 1e-15);
        let od = 3.0 - 2.0 * 1.25f64.sqrt();
        assert_abs_diff_eq!(slowest_decay_rate(p(1.0, 1.5)).unwrap(), od, epsilon = 1e-14);
        assert_abs_diff_eq!(slowest_decay_rate(p(1.0, 1.5)).unwrap(), 0.7639320, epsilon = 1e-7);
        assert_abs_diff_eq!(slowest_decay_rate(p(1.0, 10.0)).unwrap(), 0.1002513, epsilon = 1e-7);
        assert!(slowest_decay_rate(p(1.0, 0.0)).is_err());
    }

    #[test]
    fn series_and_closed_form_agree_at_cutoff() {
        // Evaluate just inside and just outside the Taylor cutoff.
        for &(omega, gamma) in &[(1.0, 0.999_999), (1.0, 1.000_001)] {
            let params = p(omega, gamma);
            let t_cut = (SERIES_CUTOFF / params.discriminant().abs()).sqrt();
            let (a_c, a_s) = damped_kernels(params, t_cut * (1.0 - 1e-13));
            let (b_c, b_s) = damped_kernels(params, t_cut * (1.0 + 1e-13));
            assert!((a_c - b_c).abs() < 1e-12, "{a_c} {b_c} {t_cut}");
            assert!((a_s - b_s).abs() < 1e-12);
        }
    }
}
