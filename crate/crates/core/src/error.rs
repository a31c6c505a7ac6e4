use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be {requirement} (got {value})")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("unphysical Bloch vector: |r| = {norm} exceeds 1")]
    UnphysicalState { norm: f64 },

    #[error("unphysical density matrix: {reason}")]
    UnphysicalDensity { reason: &'static str },

    #[error("no unique steady state without dephasing (gamma = 0)")]
    NoDephasing,

    #[error("operation requires the {expected} regime (omega = {omega}, gamma = {gamma})")]
    WrongRegime {
        expected: &'static str,
        omega: f64,
        gamma: f64,
    },

    #[error("step dt = {dt} violates the RK4 stability guard dt * max(4 gamma, 2 omega) < 0.5; use dt < {limit}")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("no pure state with y0 = {y0}, z0 = {z0}: y0^2 + z0^2 exceeds 1")]
    NoPureState { y0: f64, z0: f64 },

    #[error("point ({x0}, {y0}) lies outside the unit disk")]
    OutsideUnitDisk { x0: f64, y0: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid axis is not mirror-symmetric about zero with an odd point count")]
    AsymmetricGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
