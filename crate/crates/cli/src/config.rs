//! Run configuration: an optional TOML file overlaid by command-line flags.
//!
//! ```toml
//! omega = 1.0
//! out = "results"
//!
//! [solve]
//! gamma = 0.5
//! state0 = [0.0, 0.0, 1.0]
//! t_end = 8.0
//!
//! [delta_z]
//! panels = [[0.0, 0.05, 0.5, 1.5], [1.5, 2.5, 5.0, 10.0]]
//!
//! [purity_scan]
//! gammas = [0.025, 0.25, 1.25, 2.5]
//! times = [0.1, 1.0]
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use chiral_bloch::bloch::{BlochState, SystemParams};
use chiral_bloch::purity_scan::AxisRange;
use chiral_bloch::validation::ValidationConfig;
use serde::Deserialize;

use crate::CliError;

const DEFAULT_OUT: &str = "out";

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct CommonArgs {
    /// Tunneling frequency
    #[arg(long)]
    pub omega: Option<f64>,
    /// Dephasing rate; a comma-separated list for delta-z and purity-scan
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub gamma: Option<Vec<f64>>,
    /// TOML configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// RNG seed (validate)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Time samples (solve, delta-z) or grid points per axis (purity-scan)
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    omega: Option<f64>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    samples: Option<usize>,
    #[serde(default)]
    solve: SolveSection,
    #[serde(default)]
    delta_z: DeltaZSection,
    #[serde(default)]
    tmax: TmaxSection,
    #[serde(default)]
    purity_scan: PurityScanSection,
    #[serde(default)]
    validate: ValidateSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveSection {
    gamma: Option<f64>,
    state0: Option<[f64; 3]>,
    t_end: Option<f64>,
    samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaZSection {
    panels: Option<Vec<Vec<f64>>>,
    y0p: Option<f64>,
    t_end: Option<f64>,
    samples: Option<usize>,
    threshold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TmaxSection {
    gammas: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PurityScanSection {
    gammas: Option<Vec<f64>>,
    times: Option<Vec<f64>>,
    samples: Option<usize>,
    x0_range: Option<[f64; 2]>,
    y0_range: Option<[f64; 2]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValidateSection {
    cases: Option<usize>,
    dt: Option<f64>,
    tolerance: Option<f64>,
    t_max: Option<f64>,
}

pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn config_err(e: chiral_bloch::Error) -> CliError {
    CliError::Config(e.to_string())
}

fn positive(name: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CliError::Config(format!("{name} must be > 0 (got {value})")))
    }
}

fn at_least_two(name: &str, value: usize) -> Result<usize, CliError> {
    if value >= 2 {
        Ok(value)
    } else {
        Err(CliError::Config(format!("{name} must be ≥ 2 (got {value})")))
    }
}

fn single_gamma(flag: &Option<Vec<f64>>) -> Result<Option<f64>, CliError> {
    match flag.as_deref() {
        None => Ok(None),
        Some([g]) => Ok(Some(*g)),
        Some(list) => Err(CliError::Config(format!("expected a single gamma, got {} values", list.len()))),
    }
}

fn params(omega: f64, gamma: f64) -> Result<SystemParams, CliError> {
    let params = SystemParams::new(omega, gamma).map_err(config_err)?;
    if omega > 0.0 {
        Ok(params)
    } else {
        Err(CliError::Config("omega must be > 0".into()))
    }
}

fn gamma_list(gammas: &[f64], omega: f64) -> Result<(), CliError> {
    if gammas.is_empty() {
        return Err(CliError::Config("gamma list must be nonempty".into()));
    }
    gammas.iter().try_for_each(|&g| params(omega, g).map(|_| ()))
}

fn out_dir(args: &CommonArgs, file: &FileConfig) -> PathBuf {
    args.out
        .clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn omega(args: &CommonArgs, file: &FileConfig) -> f64 {
    args.omega.or(file.omega).unwrap_or(1.0)
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub params: SystemParams,
    pub state0: BlochState,
    pub t_end: f64,
    pub samples: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct SolveArgs {
    /// Initial Bloch vector X,Y,Z
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub state0: Option<Vec<f64>>,
    /// End of the time grid
    #[arg(long)]
    pub t_end: Option<f64>,
}

impl SolveConfig {
    pub fn resolve(args: &CommonArgs, extra: &SolveArgs, file: &FileConfig) -> Result<Self, CliError> {
        let section = &file.solve;
        let gamma = single_gamma(&args.gamma)?.or(section.gamma).unwrap_or(0.0);
        let params = params(omega(args, file), gamma)?;
        let [x, y, z] = match extra.state0.as_deref() {
            Some(&[x, y, z]) => [x, y, z],
            Some(v) => return Err(CliError::Config(format!("state0 needs 3 components, got {}", v.len()))),
            None => section.state0.unwrap_or([0.0, 0.0, 1.0]),
        };
        let state0 = BlochState::new(x, y, z).map_err(config_err)?;
        let t_end = positive("t_end", extra.t_end.or(section.t_end).unwrap_or(10.0))?;
        let samples = at_least_two("samples", args.samples.or(section.samples).or(file.samples).unwrap_or(201))?;
        Ok(Self {
            params,
            state0,
            t_end,
            samples,
            out: out_dir(args, file),
        })
    }
}

#[derive(Debug, Clone)]
pub struct DeltaZConfig {
    pub omega: f64,
    pub panels: Vec<Vec<f64>>,
    pub y0p: f64,
    pub t_end: f64,
    pub samples: usize,
    pub threshold: f64,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct DeltaZArgs {
    /// Initial imaginary coherence of the pure state
    #[arg(long, allow_negative_numbers = true)]
    pub y0p: Option<f64>,
    /// End of the time grid
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Level of |ΔZ/Y0P| treated as indistinguishable
    #[arg(long)]
    pub threshold: Option<f64>,
}

impl DeltaZConfig {
    pub fn default_panels() -> Vec<Vec<f64>> {
        vec![vec![0.0, 0.05, 0.5, 1.5], vec![1.5, 2.5, 5.0, 10.0]]
    }

    pub fn resolve(args: &CommonArgs, extra: &DeltaZArgs, file: &FileConfig) -> Result<Self, CliError> {
        let section = &file.delta_z;
        let omega = omega(args, file);
        let panels = match &args.gamma {
            Some(list) => vec![list.clone()],
            None => section.panels.clone().unwrap_or_else(Self::default_panels),
        };
        if panels.is_empty() {
            return Err(CliError::Config("gamma list must be nonempty".into()));
        }
        for panel in &panels {
            gamma_list(panel, omega)?;
        }
        let y0p = extra.y0p.or(section.y0p).unwrap_or(1.0);
        if !(y0p.is_finite() && y0p != 0.0 && y0p.abs() <= 1.0) {
            return Err(CliError::Config(format!("y0p must be nonzero with |y0p| ≤ 1 (got {y0p})")));
        }
        Ok(Self {
            omega,
            panels,
            y0p,
            t_end: positive("t_end", extra.t_end.or(section.t_end).unwrap_or(8.0))?,
            samples: at_least_two("samples", args.samples.or(section.samples).or(file.samples).unwrap_or(801))?,
            threshold: positive("threshold", extra.threshold.or(section.threshold).unwrap_or(0.02))?,
            out: out_dir(args, file),
        })
    }

    /// Every distinct rate across panels, in first-seen order.
    pub fn gammas(&self) -> Vec<f64> {
        let mut seen: Vec<f64> = Vec::new();
        for &g in self.panels.iter().flatten() {
            if !seen.contains(&g) {
                seen.push(g);
            }
        }
        seen
    }
}

#[derive(Debug, Clone)]
pub struct TmaxConfig {
    pub omega: f64,
    pub gammas: Vec<f64>,
    pub out: PathBuf,
}

impl TmaxConfig {
    pub fn resolve(args: &CommonArgs, file: &FileConfig) -> Result<Self, CliError> {
        let omega = omega(args, file);
        let gammas = args
            .gamma
            .clone()
            .or_else(|| file.tmax.gammas.clone())
            .unwrap_or_else(|| vec![0.05, 0.5, 1.5, 10.0]);
        gamma_list(&gammas, omega)?;
        Ok(Self {
            omega,
            gammas,
            out: out_dir(args, file),
        })
    }
}

#[derive(Debug, Clone)]
pub struct PurityScanConfig {
    pub omega: f64,
    pub gammas: Vec<f64>,
    pub times: Vec<f64>,
    pub x0: AxisRange,
    pub y0: AxisRange,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct PurityScanArgs {
    /// Comma-separated evaluation times
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub times: Option<Vec<f64>>,
}

impl PurityScanConfig {
    pub fn resolve(args: &CommonArgs, extra: &PurityScanArgs, file: &FileConfig) -> Result<Self, CliError> {
        let section = &file.purity_scan;
        let omega = omega(args, file);
        let gammas = args
            .gamma
            .clone()
            .or_else(|| section.gammas.clone())
            .unwrap_or_else(|| vec![0.025, 0.25, 1.25, 2.5]);
        gamma_list(&gammas, omega)?;
        let times = extra
            .times
            .clone()
            .or_else(|| section.times.clone())
            .unwrap_or_else(|| vec![0.1, 1.0]);
        if times.is_empty() {
            return Err(CliError::Config("time list must be nonempty".into()));
        }
        if let Some(&t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(CliError::Config(format!("t must be ≥ 0 (got {t})")));
        }
        let n = at_least_two("samples", args.samples.or(section.samples).or(file.samples).unwrap_or(101))?;
        let [xlo, xhi] = section.x0_range.unwrap_or([-1.0, 1.0]);
        let [ylo, yhi] = section.y0_range.unwrap_or([-1.0, 1.0]);
        Ok(Self {
            omega,
            gammas,
            times,
            x0: AxisRange::new(xlo, xhi, n),
            y0: AxisRange::new(ylo, yhi, n),
            out: out_dir(args, file),
        })
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct ValidateArgs {
    /// Number of random cases
    #[arg(long)]
    pub cases: Option<usize>,
    /// RK4 step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Largest accepted componentwise deviation
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Upper end of the sampled time range
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Flip the sign of Z in the candidate propagator (regression fixture)
    #[arg(long, hide = true)]
    pub inject_sign_fault: bool,
}

#[derive(Debug, Clone)]
pub struct ValidateConfig {
    pub suite: ValidationConfig,
    pub inject_sign_fault: bool,
    /// Per-case CSV is written only when an output directory was asked for.
    pub out: Option<PathBuf>,
}

impl ValidateConfig {
    pub fn resolve(args: &CommonArgs, extra: &ValidateArgs, file: &FileConfig) -> Result<Self, CliError> {
        if args.omega.is_some() || args.gamma.is_some() || args.samples.is_some() {
            return Err(CliError::Config(
                "validate draws its own parameters; --omega, --gamma and --samples do not apply".into(),
            ));
        }
        let section = &file.validate;
        let defaults = ValidationConfig::default();
        let suite = ValidationConfig {
            cases: extra.cases.or(section.cases).unwrap_or(defaults.cases),
            seed: args.seed.or(file.seed).unwrap_or(defaults.seed),
            dt: positive("dt", extra.dt.or(section.dt).unwrap_or(defaults.dt))?,
            tolerance: positive("tolerance", extra.tolerance.or(section.tolerance).unwrap_or(defaults.tolerance))?,
            t_max: positive("t_max", extra.t_max.or(section.t_max).unwrap_or(defaults.t_max))?,
        };
        if suite.cases == 0 {
            return Err(CliError::Config("cases must be ≥ 1".into()));
        }
        if suite.dt > suite.t_max {
            return Err(CliError::Config(format!("dt must not exceed t_max (got dt = {})", suite.dt)));
        }
        // The guard dt * max(4γ, 2ω) < 0.5 must hold for the largest sampled rates (γ = 10).
        if suite.dt * 40.0 >= 0.5 {
            return Err(CliError::Config(format!("dt must be < 0.0125 for the RK4 stability guard (got {})", suite.dt)));
        }
        Ok(Self {
            suite,
            inject_sign_fault: extra.inject_sign_fault,
            out: args.out.clone().or_else(|| file.out.clone()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> FileConfig {
        toml::from_str(text).unwrap()
    }

    #[test]
    fn flags_override_file() {
        let file = parse("omega = 2.0\n[solve]\ngamma = 0.3\nt_end = 4.0\n");
        let args = CommonArgs {
            gamma: Some(vec![0.7]),
            ..CommonArgs::default()
        };
        let cfg = SolveConfig::resolve(&args, &SolveArgs::default(), &file).unwrap();
        assert_eq!(cfg.params, SystemParams::new(2.0, 0.7).unwrap());
        assert_eq!(cfg.t_end, 4.0);
        assert_eq!(cfg.out, PathBuf::from(DEFAULT_OUT));
    }

    #[test]
    fn negative_gamma_names_the_precondition() {
        let args = CommonArgs {
            gamma: Some(vec![-0.5]),
            ..CommonArgs::default()
        };
        let err = SolveConfig::resolve(&args, &SolveArgs::default(), &FileConfig::default()).unwrap_err();
        assert!(err.to_string().contains("gamma must be ≥ 0"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("omgea = 1.0").is_err());
        assert!(toml::from_str::<FileConfig>("[solve]\nstate = [0, 0, 1]").is_err());
    }

    #[test]
    fn delta_z_panels_and_dedup() {
        let cfg = DeltaZConfig::resolve(&CommonArgs::default(), &DeltaZArgs::default(), &FileConfig::default()).unwrap();
        assert_eq!(cfg.panels.len(), 2);
        assert_eq!(cfg.gammas(), vec![0.0, 0.05, 0.5, 1.5, 2.5, 5.0, 10.0]);
        let empty = parse("[delta_z]\npanels = [[]]\n");
        assert!(DeltaZConfig::resolve(&CommonArgs::default(), &DeltaZArgs::default(), &empty).is_err());
    }

    #[test]
    fn unphysical_state_is_rejected() {
        let extra = SolveArgs {
            state0: Some(vec![1.0, 1.0, 0.0]),
            t_end: None,
        };
        assert!(SolveConfig::resolve(&CommonArgs::default(), &extra, &FileConfig::default()).is_err());
    }
}
