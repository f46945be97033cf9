//! Scenario runner behind the `vatoms` binary: trajectory export, the three
//! delayed-birth figures, asymptote reports, parameter scans and chart
//! regeneration.

pub mod config;
pub mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;
use vatoms::asymptotics::{stationarity_residual, summarize};
use vatoms::dynamics::{couplings, CouplingModel, Integrator, Trajectory, DEFAULT_DT, DEFAULT_SMALL_R_OMEGA};
use vatoms::entanglement::{
    format_sig, min_pt_eigenvalue, reduction_min_eigenvalues, EntanglementReport, DISTILLABLE_TOL, PPT_TOL,
};
use vatoms::states::{self, Alpha};
use vatoms::DensityMatrix;

pub use config::{Output, PartialConfig, ScenarioConfig};
pub use svg::chart_from_csv;

/// Trajectory columns ahead of the populations.
pub const TRAJECTORY_HEADER: &str = "t,N,NR,Nred,isPPT,distillable,F,G,H";
pub const SCAN_HEADER: &str = "alpha,R,tN,tD";
/// Steps between samples for figures and scans.
const FIGURE_SAMPLE_EVERY: usize = 10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Integration(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io(format!("stdout: {e}"))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| io_err(path, e))
}

fn integration(e: impl std::fmt::Display) -> CliError {
    CliError::Integration(e.to_string())
}

/// Positive once the state is NPPT.
fn npt_indicator(rho: &DensityMatrix) -> f64 {
    min_pt_eigenvalue(rho).map_or(f64::NAN, |m| -m - PPT_TOL)
}

/// Positive once either reduction matrix has a negative eigenvalue.
fn reduction_indicator(rho: &DensityMatrix) -> f64 {
    reduction_min_eigenvalues(rho).map_or(f64::NAN, |(l, r)| -l.min(r) - DISTILLABLE_TOL)
}

/// First time `f` turns positive: zero when it already is at the start,
/// otherwise the refined first crossing.
fn onset(integ: &Integrator, traj: &Trajectory, f: fn(&DensityMatrix) -> f64) -> Result<Option<f64>, CliError> {
    if f(&traj.states[0]) > 0.0 {
        return Ok(Some(0.0));
    }
    integ.detect_sign_change(traj, f).map_err(integration)
}

/// Onset of NPPT (`t_N`) and of reduction violation (`t_D`).
pub fn birth_times(integ: &Integrator, traj: &Trajectory) -> Result<(Option<f64>, Option<f64>), CliError> {
    Ok((
        onset(integ, traj, npt_indicator)?,
        onset(integ, traj, reduction_indicator)?,
    ))
}

fn format_event(t: Option<f64>) -> String {
    t.map_or_else(|| "none".to_string(), |t| format!("{t:.5}"))
}

fn simulate(
    rho0: &DensityMatrix,
    model: CouplingModel,
    t_end: f64,
    dt: f64,
    every: usize,
) -> Result<(Integrator, Trajectory), CliError> {
    let c = couplings(model, 1.0).map_err(|e| CliError::Config(e.to_string()))?;
    let integ = Integrator::new(&c, dt).map_err(|e| CliError::Config(e.to_string()))?;
    let mut traj = integ.evolve(rho0, t_end, every).map_err(integration)?;
    traj.analyze().map_err(integration)?;
    Ok((integ, traj))
}

fn reports(traj: &Trajectory) -> &[EntanglementReport] {
    traj.reports().expect("analyzed trajectory")
}

/// Trajectory CSV: report columns followed by the nine populations.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut s = String::from(TRAJECTORY_HEADER);
    for k in 1..=9 {
        s.push_str(&format!(",rho{k}{k}"));
    }
    s.push('\n');
    for ((t, rho), r) in traj.iter().zip(reports(traj)) {
        let mut cols = vec![
            format_sig(t),
            format_sig(r.negativity),
            format_sig(r.realign_negativity),
            format_sig(r.reduction_negativity),
            r.is_ppt.to_string(),
            r.distillable_by_reduction.to_string(),
            format_sig(r.factor_f),
            format_sig(r.factor_g),
            format_sig(r.factor_h),
        ];
        cols.extend((1..=9).map(|k| format_sig(rho.pop(k))));
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

pub fn names(series: &[&str]) -> Vec<String> {
    series.iter().map(|s| s.to_string()).collect()
}

/// Series drawn by `evolve --outputs plot`.
pub const TRAJECTORY_PLOT_SERIES: [&str; 3] = ["N", "NR", "Nred"];

pub struct EvolveSummary {
    pub t_n: Option<f64>,
    pub t_d: Option<f64>,
    pub files: Vec<PathBuf>,
}

pub fn cmd_evolve(cfg: &ScenarioConfig, out: &mut impl Write) -> Result<EvolveSummary, CliError> {
    let rho0 = states::resolve(&cfg.initial_state).map_err(|e| CliError::Config(e.to_string()))?;
    let (integ, traj) = simulate(&rho0, cfg.model, cfg.t_end, cfg.dt, cfg.sample_every)?;
    let (t_n, t_d) = birth_times(&integ, &traj)?;

    create_dir(&cfg.out_path)?;
    let mut files = Vec::new();
    let csv = trajectory_csv(&traj);
    if cfg.outputs.contains(&Output::Csv) {
        let p = cfg.out_path.join("trajectory.csv");
        write_file(&p, &csv)?;
        files.push(p);
    }
    if cfg.outputs.contains(&Output::Plot) {
        let p = cfg.out_path.join("trajectory.svg");
        write_file(&p, &chart_from_csv(&csv, &names(&TRAJECTORY_PLOT_SERIES))?)?;
        files.push(p);
    }
    if cfg.outputs.contains(&Output::States) {
        let dir = cfg.out_path.join("states");
        create_dir(&dir)?;
        for (i, rho) in traj.states.iter().enumerate() {
            let p = dir.join(format!("state_{i:06}.txt"));
            write_file(&p, &rho.to_text())?;
        }
        files.push(dir);
    }
    writeln!(out, "tN_gamma={}", format_event(t_n)).map_err(stdout_err)?;
    writeln!(out, "tD_gamma={}", format_event(t_d)).map_err(stdout_err)?;
    Ok(EvolveSummary { t_n, t_d, files })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
        }
    }

    pub fn series(self) -> &'static [&'static str] {
        match self {
            Figure::Fig1 => &["F"],
            Figure::Fig2 => &["G", "H"],
            Figure::Fig3 => &["N", "Nred"],
        }
    }

    fn value(self, column: &str, r: &EntanglementReport) -> f64 {
        match column {
            "F" => r.factor_f,
            "G" => r.factor_g,
            "H" => r.factor_h,
            "N" => r.negativity,
            _ => r.reduction_negativity,
        }
    }
}

pub struct FigureSpec {
    pub which: Figure,
    pub alpha: f64,
    pub r_over_lambda: f64,
    pub t_end: f64,
    pub dt: f64,
    pub out_dir: PathBuf,
}

impl FigureSpec {
    pub fn new(which: Figure, out_dir: PathBuf) -> Self {
        Self {
            which,
            alpha: 3.6,
            r_over_lambda: 0.2,
            t_end: 3.0,
            dt: DEFAULT_DT,
            out_dir,
        }
    }
}

/// Writes `<fig>.csv` and `<fig>.svg`; returns the CSV text.
pub fn cmd_figure(spec: &FigureSpec, out: &mut impl Write) -> Result<String, CliError> {
    let alpha = Alpha::new(spec.alpha).map_err(|e| CliError::Config(e.to_string()))?;
    let model = CouplingModel::Geometric {
        r_over_lambda: spec.r_over_lambda,
    };
    let (integ, traj) = simulate(
        &states::horodecki_alpha(alpha),
        model,
        spec.t_end,
        spec.dt,
        FIGURE_SAMPLE_EVERY,
    )?;
    let series = spec.which.series();

    let mut csv = format!("t,{}\n", series.join(","));
    for (t, r) in traj.times.iter().zip(reports(&traj)) {
        let row: Vec<String> = series.iter().map(|c| format_sig(spec.which.value(c, r))).collect();
        csv.push_str(&format!("{},{}\n", format_sig(*t), row.join(",")));
    }
    create_dir(&spec.out_dir)?;
    let name = spec.which.name();
    let csv_path = spec.out_dir.join(format!("{name}.csv"));
    let svg_path = spec.out_dir.join(format!("{name}.svg"));
    write_file(&csv_path, &csv)?;
    write_file(&svg_path, &chart_from_csv(&csv, &names(series))?)?;

    let (t_n, t_d) = birth_times(&integ, &traj)?;
    writeln!(out, "wrote {} and {}", csv_path.display(), svg_path.display()).map_err(stdout_err)?;
    writeln!(out, "tN_gamma={}", format_event(t_n)).map_err(stdout_err)?;
    writeln!(out, "tD_gamma={}", format_event(t_d)).map_err(stdout_err)?;
    Ok(csv)
}

pub fn cmd_asymptote(state: &str, out: &mut impl Write) -> Result<(), CliError> {
    let rho0 = states::resolve(state).map_err(|e| CliError::Config(e.to_string()))?;
    let s = summarize(&rho0).map_err(integration)?;
    let c = couplings(
        CouplingModel::IdealSmallR {
            omega: DEFAULT_SMALL_R_OMEGA,
        },
        1.0,
    )
    .map_err(integration)?;
    let residual = stationarity_residual(&s.params, &c).map_err(integration)?;
    let p = &s.params;
    let cplx = |re: f64, im: f64| {
        format!(
            "{}{}{}i",
            format_sig(re),
            if im < 0.0 { "" } else { "+" },
            format_sig(im)
        )
    };
    let lines = [
        format!("x={}", format_sig(p.x)),
        format!("y={}", format_sig(p.y)),
        format!("z={}", cplx(p.z.re, p.z.im)),
        format!("w={}", cplx(p.w.re, p.w.im)),
        format!("v={}", cplx(p.v.re, p.v.im)),
        format!("t={}", format_sig(p.t)),
        format!("N={}", format_sig(s.report.negativity)),
        format!("Nred={}", format_sig(s.report.reduction_negativity)),
        format!("distillable={}", s.report.distillable_by_reduction),
        format!("stationarity_residual={}", format_sig(residual)),
    ];
    for l in lines {
        writeln!(out, "{l}").map_err(stdout_err)?;
    }
    Ok(())
}

/// `start:end:count` or a single value.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("bad grid '{spec}' (expected start:end:count or a value)"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b, n] => {
            let (a, b) = (num(a)?, num(b)?);
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            match n {
                0 => Err(bad()),
                1 => Ok(vec![a]),
                _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        _ => Err(bad()),
    }
}

pub struct ScanSpec {
    pub alphas: Vec<f64>,
    pub rs: Vec<f64>,
    pub t_end: f64,
    pub dt: f64,
}

fn scan_cell(alpha: f64, r: f64, t_end: f64, dt: f64) -> Result<(Option<f64>, Option<f64>), CliError> {
    let rho0 = states::horodecki_alpha(Alpha::new(alpha).map_err(|e| CliError::Config(e.to_string()))?);
    let (integ, traj) = simulate(
        &rho0,
        CouplingModel::Geometric { r_over_lambda: r },
        t_end,
        dt,
        FIGURE_SAMPLE_EVERY,
    )?;
    birth_times(&integ, &traj)
}

/// CSV with one row per grid point, alpha-major. Cells are evaluated in
/// parallel; a failed cell is recorded as `error`.
pub fn cmd_scan(spec: &ScanSpec) -> Result<String, CliError> {
    for &a in &spec.alphas {
        Alpha::new(a).map_err(|e| CliError::Config(e.to_string()))?;
    }
    if let Some(&r) = spec.rs.iter().find(|&&r| !(r > 0.0 && r.is_finite())) {
        return Err(CliError::Config(format!("R/lambda = {r} must be positive")));
    }
    if spec.t_end <= 0.0 || spec.dt <= 0.0 || !spec.t_end.is_finite() || !spec.dt.is_finite() {
        return Err(CliError::Config("tend and dt must be positive".into()));
    }
    let cells: Vec<(f64, f64)> = spec
        .alphas
        .iter()
        .flat_map(|&a| spec.rs.iter().map(move |&r| (a, r)))
        .collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(a, r)| scan_cell(a, r, spec.t_end, spec.dt))
        .collect();

    let mut s = format!("{SCAN_HEADER}\n");
    for (&(a, r), res) in cells.iter().zip(results) {
        let (tn, td) = match res {
            Ok((tn, td)) => {
                let f = |t: Option<f64>| t.map(format_sig).unwrap_or_default();
                (f(tn), f(td))
            }
            Err(_) => ("error".to_string(), "error".to_string()),
        };
        s.push_str(&format!("{},{},{tn},{td}\n", format_sig(a), format_sig(r)));
    }
    Ok(s)
}

pub fn cmd_couplings(model: &str, out: &mut impl Write) -> Result<(), CliError> {
    let m: CouplingModel = model
        .parse()
        .map_err(|e: vatoms::dynamics::DynamicsError| CliError::Config(e.to_string()))?;
    let c = couplings(m, 1.0).map_err(|e| CliError::Config(e.to_string()))?;
    writeln!(out, "{}", c.to_string().trim_end()).map_err(stdout_err)
}

/// Regenerates a chart from a CSV file.
pub fn cmd_plot(input: &Path, series: &[String], output: &Path) -> Result<(), CliError> {
    let csv = fs::read_to_string(input).map_err(|e| io_err(input, e))?;
    write_file(output, &chart_from_csv(&csv, series)?)
}
