//! Pure-versus-mixed distinguishability through the population difference `Z`.
//!
//! A pure state and a coherence-free mixture are prepared with the same
//! initial population `Z₀`. Because `X` decouples from `(Y, Z)`, the gap
//! `ΔZ(t) = Zᴾ(t) - Zᴹ(t)` depends only on the pure state's imaginary
//! coherence `Y₀ᴾ`:
//!
//! ```text
//! ΔZ(t) = -2ω Y₀ᴾ e^{-2γt} sin(st)/s                          (ω > γ)
//! ΔZ(t) = -(ω Y₀ᴾ/s̃) [e^{(s̃-2γ)t} - e^{-(s̃+2γ)t}]             (ω < γ)
//! ΔZ(t) = -2ω Y₀ᴾ t e^{-2γt}                                  (ω = γ)
//! ```

use crate::bloch::{check_propagation, classify_regime, damped_kernels, BlochState, Regime, SystemParams};
use crate::error::{Error, Result};

/// Default level of `|ΔZ / Y₀ᴾ|` below which the two preparations count as indistinguishable.
pub const DEFAULT_DETECTION_THRESHOLD: f64 = 0.02;

/// Sign chosen for `X₀ᴾ = ±√(1 - Y₀ᴾ² - Z₀²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A pure state and the mixture sharing its initial population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePair {
    pub pure: BlochState,
    pub mixed: BlochState,
}

pub fn make_pair(y0p: f64, z0: f64, x_sign: Sign) -> Result<StatePair> {
    let rest = 1.0 - y0p * y0p - z0 * z0;
    if !rest.is_finite() || rest < -crate::bloch::STATE_TOLERANCE {
        return Err(Error::NoPureState { y0: y0p, z0 });
    }
    let x0 = x_sign.value() * rest.max(0.0).sqrt();
    Ok(StatePair {
        pure: BlochState::raw(x0, y0p, z0),
        mixed: BlochState::raw(0.0, 0.0, z0),
    })
}

/// `ΔZ(t)` for a pure state with imaginary coherence `y0p`.
pub fn delta_z(params: SystemParams, y0p: f64, t: f64) -> Result<f64> {
    check_propagation(params, t)?;
    let (_, ds) = damped_kernels(params, t);
    Ok(-2.0 * params.omega * y0p * ds)
}

/// Time of the extremum of `ΔZ` for `γ > ω`:
/// `t_max = ln[(2γ + s̃)/(2γ - s̃)] / (2s̃)`.
pub fn t_max_overdamped(params: SystemParams) -> Result<f64> {
    params.require_tunneling()?;
    let SystemParams { omega, gamma } = params;
    if gamma <= omega {
        return Err(Error::WrongRegime {
            expected: "overdamped",
            omega,
            gamma,
        });
    }
    let s_tilde = (-params.discriminant()).sqrt();
    let fast = 2.0 * gamma + s_tilde;
    let slow = 4.0 * omega * omega / fast;
    // ln(fast/slow) = ln(1 + 2s̃/slow)
    Ok((2.0 * s_tilde / slow).ln_1p() / (2.0 * s_tilde))
}

/// First stationary point of `e^{-2γt} sin(st)` for `ω > γ ≥ 0`: `atan(s/2γ)/s`.
pub fn first_extremum_underdamped(params: SystemParams) -> Result<f64> {
    params.require_tunneling()?;
    let SystemParams { omega, gamma } = params;
    match classify_regime(params) {
        Regime::Underdamped { s } => Ok(s.atan2(2.0 * gamma) / s),
        _ => Err(Error::WrongRegime {
            expected: "underdamped",
            omega,
            gamma,
        }),
    }
}

/// Extremum time of `ΔZ` in whichever regime applies; the critical case uses `1/(2γ)`.
pub fn extremum_time(params: SystemParams) -> Result<f64> {
    params.require_tunneling()?;
    match classify_regime(params) {
        Regime::Underdamped { .. } => first_extremum_underdamped(params),
        Regime::Overdamped { .. } => t_max_overdamped(params),
        Regime::Critical => Ok(1.0 / (2.0 * params.gamma)),
    }
}

/// Uniform samples `(t, ΔZ(t)/Y₀ᴾ)` on `[0, t_end]`.
pub fn delta_z_curve(params: SystemParams, y0p: f64, t_end: f64, n_samples: usize) -> Result<Vec<(f64, f64)>> {
    if y0p == 0.0 || !y0p.is_finite() {
        return Err(Error::InvalidParameter {
            name: "y0p",
            requirement: "nonzero",
            value: y0p,
        });
    }
    if n_samples < 2 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            requirement: "≥ 2",
            value: n_samples as f64,
        });
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            requirement: "> 0",
            value: t_end,
        });
    }
    let last = (n_samples - 1) as f64;
    (0..n_samples)
        .map(|i| {
            let t = if i + 1 == n_samples { t_end } else { t_end * i as f64 / last };
            Ok((t, delta_z(params, y0p, t)? / y0p))
        })
        .collect()
}

/// Earliest sample time after which every sample of `|ΔZ/Y₀ᴾ|` stays below `threshold`.
pub fn indistinguishable_after(curve: &[(f64, f64)], threshold: f64) -> Option<f64> {
    let last_visible = curve.iter().rposition(|&(_, v)| v.abs() >= threshold);
    match last_visible {
        None => curve.first().map(|&(t, _)| t),
        Some(i) => curve.get(i + 1).map(|&(t, _)| t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::propagate_analytic;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn p(omega: f64, gamma: f64) -> SystemParams {
        SystemParams::new(omega, gamma).unwrap()
    }

    fn central_diff(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
        (f(t + h) - f(t - h)) / (2.0 * h)
    }

    #[test]
    fn pair_examples() {
        let a = make_pair(0.0, 1.0, Sign::Plus).unwrap();
        assert_eq!(a.pure, BlochState::raw(0.0, 0.0, 1.0));
        assert_eq!(a.mixed, BlochState::raw(0.0, 0.0, 1.0));
        let b = make_pair(1.0, 0.0, Sign::Plus).unwrap();
        assert_eq!(b.pure, BlochState::raw(0.0, 1.0, 0.0));
        assert_eq!(b.mixed, BlochState::mixed());
        let c = make_pair(0.6, 0.8, Sign::Minus).unwrap();
        assert!(c.pure.max_abs_diff(&BlochState::raw(0.0, 0.6, 0.8)) < 1e-15);
        assert_eq!(c.mixed, BlochState::raw(0.0, 0.0, 0.8));
        assert!(make_pair(0.8, 0.8, Sign::Plus).is_err());
        let d = make_pair(0.3, -0.4, Sign::Minus).unwrap();
        assert!((d.pure.norm() - 1.0).abs() < 1e-12);
        assert!(d.pure.x < 0.0);
    }

    #[test]
    fn zero_coherence_gives_zero_gap() {
        for params in [p(1.0, 0.0), p(1.0, 0.5), p(1.0, 1.0), p(1.0, 10.0)] {
            for t in [0.0, 0.1, 1.0, 8.0] {
                assert_eq!(delta_z(params, 0.0, t).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn quoted_values() {
        let a = delta_z(p(1.0, 1.5), 1.0, 0.4304).unwrap();
        assert!((a + 0.275).abs() < 1e-3, "{a}");
        let b = delta_z(p(1.0, 10.0), 1.0, 8.0).unwrap();
        assert!((b.abs() - 0.0226).abs() < 5e-4, "{b}");
    }

    #[test]
    fn matches_difference_of_propagations() {
        let params = p(1.0, 1.5);
        let pair = make_pair(0.6, 0.3, Sign::Minus).unwrap();
        for t in [0.0, 0.2, 0.43, 3.0] {
            let zp = propagate_analytic(pair.pure, params, t).unwrap().z;
            let zm = propagate_analytic(pair.mixed, params, t).unwrap().z;
            assert!((zp - zm - delta_z(params, 0.6, t).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn t_max_examples() {
        assert_abs_diff_eq!(t_max_overdamped(p(1.0, 1.5)).unwrap(), 0.4304, epsilon = 5e-4);
        assert_abs_diff_eq!(t_max_overdamped(p(1.0, 10.0)).unwrap(), 0.1504, epsilon = 5e-4);
        for gamma in [1.0001, 1.5, 10.0] {
            let params = p(1.0, gamma);
            let t = t_max_overdamped(params).unwrap();
            assert!(t.is_finite() && t > 0.0);
            let f = |t: f64| delta_z(params, 1.0, t).unwrap();
            let slope = central_diff(f, t, 1e-5);
            assert!(slope.abs() < 1e-6 * f(t).abs(), "gamma {gamma}: slope {slope}");
        }
        assert!(matches!(t_max_overdamped(p(1.0, 1.0)), Err(Error::WrongRegime { .. })));
        assert!(t_max_overdamped(p(1.0, 0.5)).is_err());
    }

    #[test]
    fn t_max_matches_naive_formula() {
        let (omega, gamma) = (1.0, 1.5f64);
        let st = 2.0 * (gamma * gamma - omega * omega).sqrt();
        let naive = ((st + 2.0 * gamma) / (2.0 * gamma - st)).ln() / (2.0 * st);
        assert_abs_diff_eq!(t_max_overdamped(p(omega, gamma)).unwrap(), naive, epsilon = 1e-14);
    }

    #[test]
    fn underdamped_extremum() {
        assert_abs_diff_eq!(first_extremum_underdamped(p(1.0, 0.0)).unwrap(), PI / 4.0, epsilon = 1e-15);
        let t = first_extremum_underdamped(p(1.0, 0.5)).unwrap();
        assert_abs_diff_eq!(t, 0.6045998, epsilon = 1e-7);
        // brute-force argmax over a fine grid
        let params = p(1.0, 0.5);
        let argmax = (0..=200_000)
            .map(|i| i as f64 * 1e-5)
            .max_by(|a, b| {
                let fa = delta_z(params, 1.0, *a).unwrap().abs();
                let fb = delta_z(params, 1.0, *b).unwrap().abs();
                fa.total_cmp(&fb)
            })
            .unwrap();
        assert!((argmax - t).abs() < 2e-5);
        let slope = central_diff(|t| delta_z(params, 1.0, t).unwrap().abs(), t, 1e-5);
        assert!(slope.abs() < 1e-6);
        assert!(first_extremum_underdamped(p(1.0, 1.0)).is_err());
        assert!(first_extremum_underdamped(p(1.0, 2.0)).is_err());
    }

    #[test]
    fn curve_examples() {
        let c = delta_z_curve(p(1.0, 0.5), 0.7, 8.0, 801).unwrap();
        assert_eq!(c[0], (0.0, 0.0));
        assert_eq!(c.last().unwrap().0, 8.0);
        assert!(c.iter().filter(|(t, _)| *t > 4.0).all(|(_, v)| v.abs() < DEFAULT_DETECTION_THRESHOLD));
        let after = indistinguishable_after(&c, DEFAULT_DETECTION_THRESHOLD).unwrap();
        assert!(after <= 4.0);
        let od = delta_z_curve(p(1.0, 1.5), 1.0, 8.0, 801).unwrap();
        assert!(od.last().unwrap().1.abs() < 0.002);
        assert!(delta_z_curve(p(1.0, 0.5), 0.0, 8.0, 10).is_err());
        assert!(delta_z_curve(p(1.0, 0.5), 1.0, 8.0, 1).is_err());
    }

    #[test]
    fn threshold_scan_edge_cases() {
        assert_eq!(indistinguishable_after(&[], 0.1), None);
        assert_eq!(indistinguishable_after(&[(0.0, 0.0), (1.0, 0.01)], 0.1), Some(0.0));
        assert_eq!(indistinguishable_after(&[(0.0, 0.0), (1.0, 0.5)], 0.1), None);
        assert_eq!(indistinguishable_after(&[(0.0, 0.5), (1.0, 0.05)], 0.1), Some(1.0));
    }
}
