//! Randomized agreement check between the closed-form propagator and RK4.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bloch::{propagate_analytic, BlochState, SystemParams};
use crate::error::Result;
use crate::integrator::integrate_final;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationConfig {
    pub cases: usize,
    pub seed: u64,
    pub dt: f64,
    pub tolerance: f64,
    pub t_max: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            cases: 200,
            seed: 20_240_601,
            dt: 1e-5,
            tolerance: 1e-8,
            t_max: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseRegime {
    Underdamped,
    Critical,
    Overdamped,
}

impl CaseRegime {
    pub const ALL: [CaseRegime; 3] = [CaseRegime::Underdamped, CaseRegime::Critical, CaseRegime::Overdamped];

    pub fn name(self) -> &'static str {
        match self {
            CaseRegime::Underdamped => "underdamped",
            CaseRegime::Critical => "critical",
            CaseRegime::Overdamped => "overdamped",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case {
    pub regime: CaseRegime,
    pub params: SystemParams,
    pub state0: BlochState,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseResult {
    pub case: Case,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub config: ValidationConfig,
    pub results: Vec<CaseResult>,
}

impl ValidationReport {
    /// Worst case of one regime, if any case of that regime ran.
    pub fn worst(&self, regime: CaseRegime) -> Option<CaseResult> {
        self.results
            .iter()
            .filter(|r| r.case.regime == regime)
            .copied()
            .max_by(|a, b| a.deviation.total_cmp(&b.deviation))
    }

    pub fn max_deviation(&self) -> f64 {
        self.results.iter().map(|r| r.deviation).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        // NaN deviations count as failures.
        self.results
            .iter()
            .filter(|r| r.deviation.is_nan() || r.deviation >= self.config.tolerance)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

fn random_ball_point(rng: &mut ChaCha8Rng) -> BlochState {
    loop {
        let s = BlochState::raw(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        if s.norm_sq() <= 1.0 {
            return s;
        }
    }
}

/// Cases cycle through the three regimes: `ω ∈ [0.1, 5]`, `γ ∈ [0, 10]`,
/// `t ∈ [dt, t_max]`, and `state0` uniform in the unit ball.
pub fn generate_cases(config: &ValidationConfig) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.cases)
        .map(|i| {
            let regime = CaseRegime::ALL[i % 3];
            let omega = rng.gen_range(0.1..=5.0);
            let gamma = match regime {
                CaseRegime::Underdamped => rng.gen_range(0.0..0.95 * omega),
                CaseRegime::Critical => omega,
                CaseRegime::Overdamped => rng.gen_range(1.05 * omega..=10.0),
            };
            let state0 = random_ball_point(&mut rng);
            let t = rng.gen_range(config.dt..=config.t_max.max(config.dt));
            Case {
                regime,
                params: SystemParams { omega, gamma },
                state0,
                t,
            }
        })
        .collect()
}

/// Runs every generated case through `propagator` and the RK4 oracle.
pub fn run_validation<F>(config: &ValidationConfig, propagator: F) -> Result<ValidationReport>
where
    F: Fn(BlochState, SystemParams, f64) -> Result<BlochState> + Sync,
{
    let results = generate_cases(config)
        .into_par_iter()
        .map(|case| {
            let oracle = integrate_final(case.state0, case.params, case.t, config.dt)?;
            let candidate = propagator(case.state0, case.params, case.t)?;
            Ok(CaseResult {
                case,
                deviation: candidate.max_abs_diff(&oracle),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValidationReport {
        config: *config,
        results,
    })
}

/// [`run_validation`] against [`propagate_analytic`].
pub fn validate_analytic(config: &ValidationConfig) -> Result<ValidationReport> {
    run_validation(config, propagate_analytic)
}
