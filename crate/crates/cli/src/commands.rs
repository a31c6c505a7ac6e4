use std::io::Write;

use chiral_bloch::bloch::{classify_regime, propagate_analytic, BlochState, SystemParams};
use chiral_bloch::density::purity;
use chiral_bloch::distinguishability::{delta_z, delta_z_curve, extremum_time, indistinguishable_after};
use chiral_bloch::purity_scan::{scan, GridSpec};
use chiral_bloch::validation::{run_validation, CaseRegime};

use crate::config::{DeltaZConfig, PurityScanConfig, SolveConfig, TmaxConfig, ValidateConfig};
use crate::output::{self, delta_z_csv_name, purity_csv_name, Csv};
use crate::CliError;

fn say(out: &mut impl Write, line: std::fmt::Arguments) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::Io(e.to_string()))
}

pub fn solve(cfg: &SolveConfig, out: &mut impl Write) -> Result<(), CliError> {
    output::ensure_dir(&cfg.out)?;
    let mut csv = Csv::new(&["t", "X", "Y", "Z", "purity"]);
    let last = (cfg.samples - 1) as f64;
    for i in 0..cfg.samples {
        let t = if i + 1 == cfg.samples { cfg.t_end } else { cfg.t_end * i as f64 / last };
        let s = propagate_analytic(cfg.state0, cfg.params, t)?;
        csv.values(&[t, s.x, s.y, s.z, purity(s)]);
    }
    let path = cfg.out.join("solve.csv");
    csv.write(&path)?;
    say(
        out,
        format_args!(
            "{} regime, {} samples on [0, {}] -> {}",
            classify_regime(cfg.params).name(),
            cfg.samples,
            cfg.t_end,
            path.display()
        ),
    )
}

pub fn delta_z_cmd(cfg: &DeltaZConfig, out: &mut impl Write) -> Result<(), CliError> {
    output::ensure_dir(&cfg.out)?;
    say(out, format_args!("gamma,regime,t_extremum,extremum,indistinguishable_after"))?;
    for gamma in cfg.gammas() {
        let params = SystemParams::new(cfg.omega, gamma)?;
        let curve = delta_z_curve(params, cfg.y0p, cfg.t_end, cfg.samples)?;
        let mut csv = Csv::new(&["t", "delta_z_over_y0p"]);
        for &(t, v) in &curve {
            csv.values(&[t, v]);
        }
        csv.write(&cfg.out.join(delta_z_csv_name(gamma)))?;

        let t_ext = extremum_time(params)?;
        let extremum = delta_z(params, cfg.y0p, t_ext)? / cfg.y0p;
        let hidden = match indistinguishable_after(&curve, cfg.threshold) {
            Some(t) => output::number(t),
            None => String::new(),
        };
        say(
            out,
            format_args!(
                "{},{},{},{},{}",
                output::tag(gamma),
                classify_regime(params).name(),
                output::number(t_ext),
                output::number(extremum),
                hidden
            ),
        )?;
    }
    let script = output::delta_z_script(&cfg.panels, cfg.omega, cfg.y0p, cfg.threshold);
    output::write_text(&cfg.out.join("fig1_delta_z.gp"), &script)
}

pub fn tmax(cfg: &TmaxConfig, out: &mut impl Write) -> Result<(), CliError> {
    output::ensure_dir(&cfg.out)?;
    let mut csv = Csv::new(&["gamma", "t_extremum", "delta_z_over_y0p"]);
    say(out, format_args!("gamma,regime,t_extremum,delta_z_over_y0p"))?;
    for &gamma in &cfg.gammas {
        let params = SystemParams::new(cfg.omega, gamma)?;
        let t = extremum_time(params)?;
        let value = delta_z(params, 1.0, t)?;
        csv.values(&[gamma, t, value]);
        say(
            out,
            format_args!(
                "{},{},{},{}",
                output::tag(gamma),
                classify_regime(params).name(),
                output::number(t),
                output::number(value)
            ),
        )?;
    }
    csv.write(&cfg.out.join("tmax.csv"))
}

pub fn purity_scan(cfg: &PurityScanConfig, out: &mut impl Write) -> Result<(), CliError> {
    output::ensure_dir(&cfg.out)?;
    for &t in &cfg.times {
        let spec = GridSpec {
            x0: cfg.x0,
            y0: cfg.y0,
            t,
            gammas: cfg.gammas.clone(),
            omega: cfg.omega,
        };
        let fields = scan(&spec).map_err(|e| CliError::Config(e.to_string()))?;
        for field in &fields {
            let mut csv = Csv::new(&["x0", "y0", "purity"]);
            for (x0, y0, v) in field.iter() {
                csv.row(&[Some(x0), Some(y0), v]);
            }
            csv.write(&cfg.out.join(purity_csv_name(field.gamma, t)))?;
            let min = field.valid_values().fold(f64::INFINITY, f64::min);
            say(
                out,
                format_args!("t = {}, gamma = {}: min purity {}", output::tag(t), output::tag(field.gamma), output::number(min)),
            )?;
        }
        let script = output::purity_script(&cfg.gammas, cfg.omega, t, cfg.x0.n.max(cfg.y0.n));
        output::write_text(&cfg.out.join(format!("fig2_purity_t_{}.gp", output::tag(t))), &script)?;
    }
    Ok(())
}

fn faulty(state0: BlochState, params: SystemParams, t: f64) -> chiral_bloch::Result<BlochState> {
    let s = propagate_analytic(state0, params, t)?;
    Ok(BlochState::raw(s.x, s.y, -s.z))
}

/// Returns whether every case met the tolerance.
pub fn validate(cfg: &ValidateConfig, out: &mut impl Write) -> Result<bool, CliError> {
    let suite = &cfg.suite;
    let report = if cfg.inject_sign_fault {
        run_validation(suite, faulty)?
    } else {
        run_validation(suite, propagate_analytic)?
    };
    say(
        out,
        format_args!(
            "{} cases, seed {}, dt {}, tolerance {}",
            suite.cases, suite.seed, suite.dt, suite.tolerance
        ),
    )?;
    for regime in CaseRegime::ALL {
        if let Some(worst) = report.worst(regime) {
            let p = worst.case.params;
            say(
                out,
                format_args!(
                    "{:<12} max deviation {:.3e} (omega {:.6}, gamma {:.6}, t {:.6})",
                    regime.name(),
                    worst.deviation,
                    p.omega,
                    p.gamma,
                    worst.case.t
                ),
            )?;
        }
    }
    let failures = report.failures().count();
    if let Some(dir) = &cfg.out {
        output::ensure_dir(dir)?;
        let mut csv = Csv::new(&["omega", "gamma", "X0", "Y0", "Z0", "t", "deviation"]);
        for r in &report.results {
            let c = r.case;
            csv.values(&[c.params.omega, c.params.gamma, c.state0.x, c.state0.y, c.state0.z, c.t, r.deviation]);
        }
        csv.write(&dir.join("validation.csv"))?;
    }
    let verdict = if failures == 0 { "PASS" } else { "FAIL" };
    say(out, format_args!("{verdict}: {failures} of {} cases above tolerance", suite.cases))?;
    Ok(failures == 0)
}
