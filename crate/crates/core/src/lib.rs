//! Open two-level chiral system under pure dephasing.
//!
//! A tunneling two-level system (localized states `|L⟩`, `|R⟩`) whose
//! coherences are destroyed by continuous measurement of the population
//! difference. The crate provides
//!
//! - [`bloch`]: the Bloch equations and their exact solution in the
//!   underdamped, critical and overdamped regimes;
//! - [`density`]: density-matrix conversions, purity and its decay rate;
//! - [`integrator`]: a fixed-step RK4 oracle;
//! - [`distinguishability`]: the pure-vs-mixed population gap `ΔZ(t)`;
//! - [`purity_scan`]: purity over grids of initial coherences;
//! - [`validation`]: randomized closed-form vs. RK4 agreement runs.

pub mod bloch;
pub mod density;
pub mod distinguishability;
pub mod error;
pub mod integrator;
pub mod purity_scan;
pub mod validation;

pub use bloch::{
    classify_regime, propagate_analytic, rhs, slowest_decay_rate, steady_state, BlochState, Regime, SystemParams,
};
pub use density::{bloch_to_density, density_to_bloch, purity, purity_rate, rhs_density, DensityMatrix};
pub use distinguishability::{delta_z, delta_z_curve, make_pair, t_max_overdamped, Sign, StatePair};
pub use error::{Error, Result};
pub use integrator::{integrate, max_deviation, Trajectory};
pub use purity_scan::{scan, AxisRange, GridSpec, PurityField};
