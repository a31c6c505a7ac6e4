//! Fixed-step classical RK4 integration of the Bloch equations.
//!
//! This is the brute-force oracle for the closed-form propagator: it only
//! ever calls [`rhs`].

use crate::bloch::{propagate_analytic, rhs, BlochState, SystemParams};
use crate::error::{Error, Result};

/// Upper bound on `dt * max(4γ, 2ω)`.
pub const STABILITY_LIMIT: f64 = 0.5;

/// Time-ordered samples produced by [`integrate`], one per RK4 step.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<(f64, BlochState)>,
    pub params: SystemParams,
    pub dt: f64,
}

impl Trajectory {
    pub fn initial(&self) -> BlochState {
        self.samples[0].1
    }

    pub fn last(&self) -> (f64, BlochState) {
        *self.samples.last().expect("trajectory always holds the initial sample")
    }
}

pub fn rk4_step(state: BlochState, params: SystemParams, h: f64) -> BlochState {
    let k1 = rhs(state, params);
    let k2 = rhs(state + k1 * (0.5 * h), params);
    let k3 = rhs(state + k2 * (0.5 * h), params);
    let k4 = rhs(state + k3 * h, params);
    state + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0)
}

fn check_step(params: SystemParams, t_end: f64, dt: f64) -> Result<usize> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            requirement: "> 0",
            value: t_end,
        });
    }
    if !(dt.is_finite() && dt > 0.0 && dt <= t_end) {
        return Err(Error::InvalidParameter {
            name: "dt",
            requirement: "in (0, t_end]",
            value: dt,
        });
    }
    let fastest = (4.0 * params.gamma).max(2.0 * params.omega);
    if dt * fastest >= STABILITY_LIMIT {
        return Err(Error::StepTooLarge {
            dt,
            limit: STABILITY_LIMIT / fastest,
        });
    }
    // A trailing remainder below 1e-9 dt is absorbed into the last step.
    Ok(((t_end / dt) - 1e-9).ceil().max(1.0) as usize)
}

/// Steps of the grid `0, dt, 2dt, ...` with the last one shortened onto `t_end`.
fn for_each_step(
    state0: BlochState,
    params: SystemParams,
    t_end: f64,
    dt: f64,
    mut visit: impl FnMut(f64, BlochState),
) -> Result<BlochState> {
    let n = check_step(params, t_end, dt)?;
    let mut state = state0;
    let mut t = 0.0;
    for k in 1..=n {
        let t_next = if k == n { t_end } else { k as f64 * dt };
        state = rk4_step(state, params, t_next - t);
        t = t_next;
        visit(t, state);
    }
    Ok(state)
}

/// Integrates from `t = 0` to `t_end`, keeping every step.
pub fn integrate(state0: BlochState, params: SystemParams, t_end: f64, dt: f64) -> Result<Trajectory> {
    let mut samples = vec![(0.0, state0)];
    for_each_step(state0, params, t_end, dt, |t, s| samples.push((t, s)))?;
    Ok(Trajectory { samples, params, dt })
}

/// Same stepping as [`integrate`] but only returns the state at `t_end`.
pub fn integrate_final(state0: BlochState, params: SystemParams, t_end: f64, dt: f64) -> Result<BlochState> {
    for_each_step(state0, params, t_end, dt, |_, _| {})
}

/// Maximum componentwise deviation of a trajectory from the closed-form solution.
pub fn max_deviation(traj: &Trajectory) -> Result<f64> {
    let state0 = traj.initial();
    traj.samples.iter().try_fold(0.0f64, |worst, &(t, s)| {
        let exact = propagate_analytic(state0, traj.params, t)?;
        Ok(worst.max(s.max_abs_diff(&exact)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(omega: f64, gamma: f64) -> SystemParams {
        SystemParams::new(omega, gamma).unwrap()
    }

    #[test]
    fn full_rotation_period() {
        let s0 = BlochState::raw(0.0, 0.0, 1.0);
        let traj = integrate(s0, p(1.0, 0.0), PI, 1e-4).unwrap();
        let (t, s) = traj.last();
        assert_eq!(t, PI);
        assert!(s.max_abs_diff(&s0) < 1e-10);
    }

    #[test]
    fn x_decay_law() {
        let s = integrate_final(BlochState::raw(1.0, 0.0, 0.0), p(1.0, 0.5), 1.0, 1e-4).unwrap();
        assert!((s.x - (-2.0f64).exp()).abs() < 1e-10);
        assert!((s.x - 0.1353353).abs() < 1e-7);
    }

    #[test]
    fn first_sample_is_initial_state_and_times_increase() {
        let s0 = BlochState::raw(0.1, 0.2, 0.3);
        let traj = integrate(s0, p(2.0, 0.7), 1.05, 0.1).unwrap();
        assert_eq!(traj.samples[0], (0.0, s0));
        assert_eq!(traj.samples.len(), 12);
        assert!(traj.samples.windows(2).all(|w| w[1].0 > w[0].0));
        assert_eq!(traj.last().0, 1.05);
        let r0 = s0.norm();
        assert!(traj.samples.iter().all(|(_, s)| s.norm() <= r0 + 1e-9));
    }

    #[test]
    fn exact_multiple_of_dt_lands_on_t_end() {
        let traj = integrate(BlochState::raw(0.0, 0.0, 1.0), p(1.0, 0.2), 1.0, 0.1).unwrap();
        assert_eq!(traj.samples.len(), 11);
        assert_eq!(traj.last().0, 1.0);
    }

    #[test]
    fn stability_guard() {
        let s0 = BlochState::raw(0.0, 0.0, 1.0);
        match integrate(s0, p(1.0, 10.0), 1.0, 0.0125) {
            Err(Error::StepTooLarge { limit, .. }) => assert!((limit - 0.0125).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert!(integrate(s0, p(1.0, 10.0), 1.0, 0.0124).is_ok());
        assert!(integrate(s0, p(1.0, 0.0), 0.1, 0.2).is_err());
        assert!(integrate(s0, p(1.0, 0.0), 0.0, 0.2).is_err());
    }

    #[test]
    fn deviation_pure_rotation() {
        let traj = integrate(BlochState::raw(0.3, 0.4, 0.5), p(1.0, 0.0), 5.0, 1e-4).unwrap();
        assert!(max_deviation(&traj).unwrap() < 1e-10);
    }

    #[test]
    fn deviation_overdamped_stiff() {
        let traj = integrate(BlochState::raw(0.0, 0.6, 0.8), p(1.0, 10.0), 2.0, 1e-5).unwrap();
        assert!(max_deviation(&traj).unwrap() < 1e-8);
    }

    #[test]
    fn deviation_fixed_point() {
        let traj = integrate(BlochState::mixed(), p(1.3, 0.4), 3.0, 1e-2).unwrap();
        assert_eq!(max_deviation(&traj).unwrap(), 0.0);
    }

    #[test]
    fn fourth_order_convergence() {
        let s0 = BlochState::raw(0.0, 0.6, 0.8);
        let coarse = max_deviation(&integrate(s0, p(1.0, 0.5), 5.0, 0.02).unwrap()).unwrap();
        let fine = max_deviation(&integrate(s0, p(1.0, 0.5), 5.0, 0.01).unwrap()).unwrap();
        let ratio = coarse / fine;
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    }
}
