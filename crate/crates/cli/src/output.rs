//! CSV and gnuplot writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::CliError;

/// Seventeen significant digits, enough to round-trip any f64.
pub fn number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Table with a header row; `None` cells are written as empty fields.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, cells: &[Option<f64>]) {
        for (k, cell) in cells.iter().enumerate() {
            if k > 0 {
                self.text.push(',');
            }
            if let Some(v) = cell {
                self.text.push_str(&number(*v));
            }
        }
        self.text.push('\n');
    }

    pub fn values(&mut self, cells: &[f64]) {
        let cells: Vec<_> = cells.iter().copied().map(Some).collect();
        self.row(&cells);
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_text(path, self.as_str())
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

/// Filename-friendly rendering of a parameter value (`0.25`, `10`).
pub fn tag(v: f64) -> String {
    format!("{v}")
}

pub fn delta_z_csv_name(gamma: f64) -> String {
    format!("delta_z_gamma_{}.csv", tag(gamma))
}

pub fn purity_csv_name(gamma: f64, t: f64) -> String {
    format!("purity_gamma_{}_t_{}.csv", tag(gamma), tag(t))
}

/// One panel per entry of `panels`, stacked vertically.
pub fn delta_z_script(panels: &[Vec<f64>], omega: f64, y0p: f64, threshold: f64) -> String {
    let mut gp = String::new();
    let _ = writeln!(gp, "# |ΔZ/Y0P| against time, omega = {omega}, y0p = {y0p}");
    gp.push_str("set datafile separator ','\n");
    gp.push_str("set terminal pngcairo size 800,1000\n");
    gp.push_str("set output 'fig1_delta_z.png'\n");
    let _ = writeln!(gp, "set multiplot layout {},1", panels.len());
    gp.push_str("set xlabel 't'\n");
    gp.push_str("set ylabel 'Delta Z / Y0P'\n");
    gp.push_str("set key right top\n");
    for panel in panels {
        let _ = writeln!(gp, "set arrow from graph 0, first {threshold} to graph 1, first {threshold} nohead dt 2");
        let _ = writeln!(gp, "set arrow from graph 0, first {} to graph 1, first {} nohead dt 2", -threshold, -threshold);
        let curves: Vec<String> = panel
            .iter()
            .map(|&g| {
                format!(
                    "'{}' using 1:2 skip 1 with lines title 'gamma = {}'",
                    delta_z_csv_name(g),
                    tag(g)
                )
            })
            .collect();
        let _ = writeln!(gp, "plot {}", curves.join(", \\\n     "));
        gp.push_str("unset arrow\n");
    }
    gp.push_str("unset multiplot\n");
    gp
}

/// Contour maps of purity over the initial (x0, y0) disk at time `t`, one panel per rate.
pub fn purity_script(gammas: &[f64], omega: f64, t: f64, n: usize) -> String {
    let cols = gammas.len().clamp(1, 2);
    let rows = gammas.len().div_ceil(cols);
    let mut gp = String::new();
    let _ = writeln!(gp, "# purity over the initial disk, omega = {omega}, t = {t}");
    gp.push_str("set datafile separator ','\n");
    gp.push_str("set datafile missing ''\n");
    let _ = writeln!(gp, "set terminal pngcairo size {},{}", 500 * cols, 450 * rows);
    let _ = writeln!(gp, "set output 'fig2_purity_t_{}.png'", tag(t));
    let _ = writeln!(gp, "set multiplot layout {rows},{cols}");
    gp.push_str("set view map\n");
    gp.push_str("set size ratio -1\n");
    gp.push_str("set pm3d map\n");
    let _ = writeln!(gp, "set dgrid3d {n},{n}");
    gp.push_str("set contour base\n");
    gp.push_str("set cntrparam levels 8\n");
    gp.push_str("set xlabel 'x0'\n");
    gp.push_str("set ylabel 'y0'\n");
    gp.push_str("set cblabel 'purity'\n");
    for &g in gammas {
        let _ = writeln!(gp, "set title 'gamma = {}'", tag(g));
        let _ = writeln!(gp, "splot '{}' using 1:2:3 skip 1 with pm3d notitle", purity_csv_name(g, t));
    }
    gp.push_str("unset multiplot\n");
    gp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, f64::MAX, 0.0, -0.0, 5e-324] {
            assert_eq!(number(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn empty_cells() {
        let mut csv = Csv::new(&["x0", "y0", "purity"]);
        csv.row(&[Some(1.0), Some(-1.0), None]);
        assert_eq!(csv.as_str(), "x0,y0,purity\n1.0000000000000000e0,-1.0000000000000000e0,\n");
    }

    #[test]
    fn names() {
        assert_eq!(delta_z_csv_name(1.5), "delta_z_gamma_1.5.csv");
        assert_eq!(purity_csv_name(10.0, 0.1), "purity_gamma_10_t_0.1.csv");
    }

    #[test]
    fn scripts_reference_relative_csvs() {
        let gp = delta_z_script(&[vec![0.0, 1.5], vec![10.0]], 1.0, 1.0, 0.02);
        assert!(gp.contains("'delta_z_gamma_0.csv'"));
        assert!(gp.contains("layout 2,1"));
        assert!(!gp.contains("/delta_z"));
        let gp = purity_script(&[0.025, 2.5], 1.0, 1.0, 101);
        assert!(gp.contains("'purity_gamma_0.025_t_1.csv'"));
    }
}
