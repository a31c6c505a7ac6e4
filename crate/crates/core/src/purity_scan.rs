//! Purity decay over grids of initial coherences `(X₀, Y₀)`.
//!
//! Every grid point starts from the pure state `(X₀, Y₀, +√(1 - X₀² - Y₀²))`
//! and is propagated with the closed-form solution. Points outside the unit
//! disk carry no value.

use rayon::prelude::*;

use crate::bloch::{propagate_analytic, BlochState, SystemParams};
use crate::density::purity;
use crate::error::{Error, Result};

/// Slack on `X₀² + Y₀² <= 1` when placing a grid point on the sphere.
const DISK_TOLERANCE: f64 = 1e-12;

/// `n` evenly spaced points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisRange {
    pub const fn new(lo: f64, hi: f64, n: usize) -> Self {
        Self { lo, hi, n }
    }

    /// The `[-1, 1]` axis at the default resolution of 101 points.
    pub const fn full() -> Self {
        Self::new(-1.0, 1.0, 101)
    }

    /// `i`-th point; written so that a range symmetric about zero yields exact mirror pairs.
    pub fn point(&self, i: usize) -> f64 {
        let last = (self.n - 1) as f64;
        (self.lo * (last - i as f64) + self.hi * i as f64) / last
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    pub fn is_mirror_symmetric(&self) -> bool {
        self.lo == -self.hi && self.n % 2 == 1
    }

    fn validate(&self, axis: &str) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidGrid(format!("{axis} axis needs at least 2 points")));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && -1.0 <= self.lo && self.lo < self.hi && self.hi <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "{axis} axis [{}, {}] must be an increasing range within [-1, 1]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x0: AxisRange,
    pub y0: AxisRange,
    pub t: f64,
    pub gammas: Vec<f64>,
    pub omega: f64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        self.x0.validate("x0")?;
        self.y0.validate("y0")?;
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "t",
                requirement: "≥ 0",
                value: self.t,
            });
        }
        SystemParams::new(self.omega, 0.0)?.require_tunneling()?;
        for &gamma in &self.gammas {
            SystemParams::new(self.omega, gamma)?;
        }
        Ok(())
    }
}

/// Purity over a grid at one dephasing rate, stored row-major with `x0` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct PurityField {
    pub spec: GridSpec,
    pub gamma: f64,
    pub values: Vec<Option<f64>>,
}

impl PurityField {
    /// Value at column `i` (x0 index) and row `j` (y0 index).
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[j * self.spec.x0.n + i]
    }

    /// `(x0, y0, purity)` triples in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, Option<f64>)> + '_ {
        let nx = self.spec.x0.n;
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.spec.x0.point(k % nx), self.spec.y0.point(k / nx), v))
    }

    pub fn valid_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().flatten().copied()
    }
}

/// Pure state above the point `(x0, y0)` of the unit disk.
pub fn initial_state_on_sphere(x0: f64, y0: f64) -> Result<BlochState> {
    let rest = 1.0 - x0 * x0 - y0 * y0;
    if !rest.is_finite() || rest < -DISK_TOLERANCE {
        return Err(Error::OutsideUnitDisk { x0, y0 });
    }
    Ok(BlochState::raw(x0, y0, rest.max(0.0).sqrt()))
}

/// Purity at time `t` of the pure state above `(x0, y0)`.
pub fn purity_at(x0: f64, y0: f64, params: SystemParams, t: f64) -> Result<f64> {
    let start = initial_state_on_sphere(x0, y0)?;
    Ok(purity(propagate_analytic(start, params, t)?))
}

/// One [`PurityField`] per entry of `spec.gammas`.
pub fn scan(spec: &GridSpec) -> Result<Vec<PurityField>> {
    spec.validate()?;
    spec.gammas
        .iter()
        .map(|&gamma| {
            let params = SystemParams::new(spec.omega, gamma)?;
            let nx = spec.x0.n;
            let values = (0..nx * spec.y0.n)
                .into_par_iter()
                .map(|k| {
                    let (x0, y0) = (spec.x0.point(k % nx), spec.y0.point(k / nx));
                    match initial_state_on_sphere(x0, y0) {
                        Ok(start) => propagate_analytic(start, params, spec.t).map(|s| Some(purity(s))),
                        Err(_) => Ok(None),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(PurityField {
                spec: spec.clone(),
                gamma,
                values,
            })
        })
        .collect()
}

/// Linearized purity `1 - 4γ(X₀² + Y₀²)t`, clamped below at `1/2`.
pub fn short_time_purity(x0: f64, y0: f64, params: SystemParams, t: f64) -> f64 {
    (1.0 - 4.0 * params.gamma * (x0 * x0 + y0 * y0) * t).max(0.5)
}

fn mirror_defect(field: &PurityField, mirror_x: bool) -> Result<f64> {
    let axis = if mirror_x { field.spec.x0 } else { field.spec.y0 };
    if !axis.is_mirror_symmetric() {
        return Err(Error::AsymmetricGrid);
    }
    let (nx, ny) = (field.spec.x0.n, field.spec.y0.n);
    let mut worst = 0.0f64;
    for j in 0..ny {
        for i in 0..nx {
            let (mi, mj) = if mirror_x { (nx - 1 - i, j) } else { (i, ny - 1 - j) };
            if let (Some(a), Some(b)) = (field.get(i, j), field.get(mi, mj)) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    Ok(worst)
}

/// Largest `|ς(x0, y0) - ς(-x0, y0)|` over the grid.
pub fn x_symmetry_defect(field: &PurityField) -> Result<f64> {
    mirror_defect(field, true)
}

/// Largest `|ς(x0, y0) - ς(x0, -y0)|` over the grid.
pub fn y_symmetry_defect(field: &PurityField) -> Result<f64> {
    mirror_defect(field, false)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoRow {
    pub gamma: f64,
    pub localized: f64,
    pub delocalized: f64,
}

/// Purity against dephasing rate for a nearly localized and a delocalized start.
#[derive(Debug, Clone, PartialEq)]
pub struct ZenoReport {
    pub localized_start: (f64, f64),
    pub delocalized_start: (f64, f64),
    pub omega: f64,
    pub t: f64,
    pub rows: Vec<ZenoRow>,
}

impl ZenoReport {
    fn column(&self, localized: bool) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| if localized { r.localized } else { r.delocalized })
            .collect()
    }

    /// Dephasing rate at which the localized purity is lowest, when that
    /// minimum is interior (purity falls and then recovers).
    pub fn suppression_onset(&self) -> Option<f64> {
        let col = self.column(true);
        let (k, _) = col
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))?;
        (k > 0 && k + 1 < col.len() && col[k + 1] > col[k]).then(|| self.rows[k].gamma)
    }

    pub fn localized_non_monotonic(&self) -> bool {
        self.suppression_onset().is_some()
    }

    pub fn delocalized_monotone_decreasing(&self) -> bool {
        self.column(false).windows(2).all(|w| w[1] <= w[0])
    }

    /// Purity at a given dephasing rate for one of the two starts.
    pub fn purity_at(&self, gamma: f64, localized: bool) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.gamma == gamma)
            .map(|r| if localized { r.localized } else { r.delocalized })
    }
}

pub fn zeno_crossover_report(
    localized: (f64, f64),
    delocalized: (f64, f64),
    gammas: &[f64],
    omega: f64,
    t: f64,
) -> Result<ZenoReport> {
    if gammas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("dephasing rates must be strictly increasing".into()));
    }
    let rows = gammas
        .iter()
        .map(|&gamma| {
            let params = SystemParams::new(omega, gamma)?;
            Ok(ZenoRow {
                gamma,
                localized: purity_at(localized.0, localized.1, params, t)?,
                delocalized: purity_at(delocalized.0, delocalized.1, params, t)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ZenoReport {
        localized_start: localized,
        delocalized_start: delocalized,
        omega,
        t,
        rows,
    })
}
