//! The `spin-dephasing` command line: subcommands writing CSV, JSON and SVG
//! into an output directory.
//!
//! Exit codes: 0 success, 1 usage, configuration or file-format error,
//! 2 numerical failure (saturation, non-convergence, failed oracle).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{DetuningRange, RunConfig};
use crate::error::{Error, Result};
use crate::inference::{
    displacement_profile, estimate_nbar, fit_heating_rate, fit_lineshape, lineshape_model, HeatingFit, InitialGuess,
    LineshapeFit, Readout, SweepPoint, Thermometry,
};
use crate::io::{self, Envelope, ShotData};
use crate::mc::{build_histogram, run_experiment, run_shot_range, Experiment, Normalization, ShotRecord};
use crate::oracle::{library_laguerre, run_oracles, OracleReport};
use crate::physics::{thermal_p_up, thermal_sigma_sq, Amplitude, FinalPulse, OdfSequence};
use crate::plot;
use crate::stats::mean_se;

/// Smoothing window (bins) and peak criteria used to count histogram modes.
pub const MODE_WINDOW: usize = 5;
pub const MODE_MIN_HEIGHT: f64 = 0.2;
pub const MODE_MAX_VALLEY: f64 = 0.7;

#[derive(Debug, Parser)]
#[command(name = "spin-dephasing", version, about = "Spin-dephasing thermometry of a trapped-ion COM mode")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo run: shots.csv, histogram.csv, simulate.json [, histogram.svg]
    Simulate(RunArgs),
    /// Detuning sweep with a lineshape fit: sweep.csv, sweep.json [, sweep.svg]
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// start:stop:points in kHz; overrides [sweep] in the config
        #[arg(long, allow_hyphen_values = true)]
        delta_khz: Option<String>,
    },
    /// Mode occupation from a shots or photon-count CSV: estimate.json
    Estimate {
        #[command(flatten)]
        run: RunArgs,
        /// shots.csv or a shot_index,photons file
        input: PathBuf,
    },
    /// Heating rate from a delay_s,nbar,nbar_err CSV: heating.json [, heating.svg]
    HeatingFit {
        input: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Closed forms against independent oracles: oracle.json
    OracleCheck {
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Shots per run (per sweep point for `sweep`)
    #[arg(long)]
    pub shots: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// Also write SVG plots
    #[arg(long)]
    pub svg: bool,
}

impl RunArgs {
    fn load(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::load(&self.config)?;
        let wrap = |e: Error| match e {
            Error::Domain(message) => Error::Config { path: self.config.clone(), message },
            e => e,
        };
        if let Some(seed) = self.seed {
            cfg = cfg.with_seed(seed).map_err(wrap)?;
        }
        if let Some(shots) = self.shots {
            cfg = cfg.with_shots(shots).map_err(wrap)?;
        }
        Ok(cfg)
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Simulate(args) => {
            let cfg = args.load()?;
            let s = cmd_simulate(&cfg, &args.out.out_dir, args.out.svg)?;
            println!(
                "{} shots, |alpha| = {:.6}, sigma^2 measured {:.5} +- {:.5} (model {:.5}), modes {:?}",
                s.shots, s.alpha_mag, s.sigma_sq_measured, s.sigma_sq_err, s.sigma_sq_model, s.histogram_modes
            );
            Ok(0)
        }
        Command::Sweep { run, delta_khz } => {
            let cfg = run.load()?;
            let range = match delta_khz {
                Some(s) => DetuningRange::parse(s).map_err(|e| Error::Config { path: run.config.clone(), message: e.to_string() })?,
                None => cfg.sweep.ok_or_else(|| Error::Config {
                    path: run.config.clone(),
                    message: "no detuning range: pass --delta-khz or add a [sweep] section".into(),
                })?,
            };
            let s = cmd_sweep(&cfg, &range, &run.out.out_dir, run.out.svg)?;
            match (&s.fit, &s.fit_error) {
                (Some(f), _) => println!(
                    "{} points, fitted T = {:.4} +- {:.4} mK, offset {:.4}",
                    s.points.len(),
                    f.temperature.value * 1e3,
                    f.temperature.std_error * 1e3,
                    f.offset
                ),
                (None, Some(e)) => println!("{} points, no lineshape fit: {e}", s.points.len()),
                (None, None) => println!("{} points", s.points.len()),
            }
            Ok(0)
        }
        Command::Estimate { run, input } => {
            let cfg = run.load()?;
            let t = cmd_estimate(&cfg, input, &run.out.out_dir)?;
            let n = &t.nbar;
            println!(
                "n = {:.4} +- {:.4} from {} shots (sigma^2 = {:.5}){}{}",
                n.value,
                n.std_error,
                n.n_samples,
                t.sigma_sq,
                if n.flags.below_resolution { " [below-resolution]" } else { "" },
                if n.flags.saturated { " [saturated]" } else { "" }
            );
            Ok(if n.flags.saturated { 2 } else { 0 })
        }
        Command::HeatingFit { input, out } => {
            let fit = cmd_heating_fit(input, &out.out_dir, out.svg)?;
            println!(
                "dn/dt = {:.4e} +- {:.2e} 1/s, n0 = {:.3} +- {:.3}, chi^2 = {:.3} ({} dof)",
                fit.rate.value, fit.rate.std_error, fit.intercept, fit.intercept_err, fit.chi_sq, fit.dof
            );
            Ok(0)
        }
        Command::OracleCheck { out } => {
            let report = cmd_oracle_check(&out.out_dir)?;
            print!("{report}");
            Ok(if report.all_passed { 0 } else { 2 })
        }
    }
}

fn prepare(out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulateSummary {
    pub shots: usize,
    pub alpha_se: Amplitude,
    pub alpha_mag: f64,
    pub inv_beta: f64,
    pub p_up_mean: f64,
    pub p_up_model: f64,
    pub sigma_sq_measured: f64,
    pub sigma_sq_err: f64,
    pub sigma_sq_model: f64,
    pub histogram_bin_width: f64,
    pub histogram_modes: Vec<f64>,
}

/// Bright fraction mean of the thermal state for `final_pulse`: the
/// dephasing readout is centred at ½ for any temperature.
fn model_p_up(alpha: Amplitude, exp: &Experiment) -> f64 {
    match exp.final_pulse {
        FinalPulse::Length => thermal_p_up(alpha, &exp.prep.thermal),
        FinalPulse::Dephasing => 0.5,
    }
}

pub fn cmd_simulate(cfg: &RunConfig, out_dir: &Path, svg: bool) -> Result<SimulateSummary> {
    prepare(out_dir)?;
    let exp = &cfg.experiment;
    let shots = run_experiment(exp, cfg.shots)?;
    let norm = Normalization::for_detection(&exp.detection);
    let hist = build_histogram(&shots, cfg.bin_width, norm)?;
    let alpha = exp.alpha()?;

    let p: Vec<f64> = shots.iter().map(|s| norm.value(s)).collect();
    let (sigma_sq_measured, sigma_sq_err) = if exp.detection.n_ions >= 2 && shots.len() >= 2 {
        mean_se(&crate::inference::sigma_sq_samples(Readout::Shots(&shots), &exp.detection)?)
    } else {
        (f64::NAN, f64::NAN)
    };
    let summary = SimulateSummary {
        shots: shots.len(),
        alpha_se: alpha,
        alpha_mag: alpha.norm(),
        inv_beta: exp.prep.thermal.inv_beta(),
        p_up_mean: p.iter().sum::<f64>() / p.len() as f64,
        p_up_model: model_p_up(alpha, exp),
        sigma_sq_measured,
        sigma_sq_err,
        sigma_sq_model: thermal_sigma_sq(alpha, &exp.prep.thermal),
        histogram_bin_width: cfg.bin_width,
        histogram_modes: hist.modes(MODE_WINDOW, MODE_MIN_HEIGHT, MODE_MAX_VALLEY),
    };

    io::write_shots(&out_dir.join("shots.csv"), &shots)?;
    io::write_histogram(&out_dir.join("histogram.csv"), &hist)?;
    io::write_json(&out_dir.join("simulate.json"), &Envelope::new("simulate", Some(&cfg.raw), &summary))?;
    if svg {
        let title = format!("{} shots, |alpha| = {:.4}", shots.len(), alpha.norm());
        std::fs::write(out_dir.join("histogram.svg"), plot::histogram_svg(&hist, &title))?;
    }
    Ok(summary)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub shots_per_point: usize,
    pub points: Vec<SweepPoint>,
    pub p_up_model: Vec<f64>,
    pub fit: Option<LineshapeFit>,
    pub fit_error: Option<String>,
}

/// Mean and standard error of the bright fraction over `shots`. The error is
/// floored at one spin flip in the whole set, 1/(N · shots), so that points
/// where every shot reads dark keep a finite weight.
pub fn sweep_point(delta: f64, shots: &[ShotRecord], norm: Normalization, n_ions: usize) -> SweepPoint {
    let p: Vec<f64> = shots.iter().map(|s| norm.value(s)).collect();
    let (mean, se) = if p.len() >= 2 { mean_se(&p) } else { (p[0], 0.0) };
    let floor = 1.0 / (n_ions * shots.len()) as f64;
    SweepPoint { detuning_delta: delta, p_up_mean: mean, p_up_err: se.max(floor) }
}

pub fn cmd_sweep(cfg: &RunConfig, range: &DetuningRange, out_dir: &Path, svg: bool) -> Result<SweepSummary> {
    prepare(out_dir)?;
    let base = &cfg.experiment;
    let deltas = range.values();
    let norm = Normalization::for_detection(&base.detection);
    let points: Vec<SweepPoint> = deltas
        .par_iter()
        .enumerate()
        .map(|(i, &delta)| {
            let exp = Experiment { sequence: OdfSequence { detuning_delta: delta, ..base.sequence.clone() }, ..base.clone() };
            let shots = run_shot_range(&exp, (i * cfg.shots) as u64, cfg.shots)?;
            Ok(sweep_point(delta, &shots, norm, base.detection.n_ions))
        })
        .collect::<Result<_>>()?;

    let n = base.detection.n_ions;
    let alpha_sq = displacement_profile(&deltas, &base.sequence, &base.trap, n)?;
    let inv_beta = base.prep.thermal.inv_beta();
    let model: Vec<f64> = match base.final_pulse {
        FinalPulse::Length => alpha_sq.iter().map(|&a| lineshape_model(a, inv_beta, 0.0, 1.0)).collect(),
        FinalPulse::Dephasing => vec![0.5; deltas.len()],
    };

    let (fit, fit_error) = if base.final_pulse == FinalPulse::Length {
        let offset = points.iter().map(|p| p.p_up_mean).fold(f64::INFINITY, f64::min);
        let guess = InitialGuess { inv_beta: 10.0, offset, contrast: 1.0 };
        match fit_lineshape(&points, &base.sequence, &base.trap, n, &guess, false) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, Some("lineshape fit needs delta_phi_deg = 0".into()))
    };

    io::write_sweep(&out_dir.join("sweep.csv"), &points, &model)?;
    let summary = SweepSummary { shots_per_point: cfg.shots, points, p_up_model: model, fit, fit_error };
    io::write_json(&out_dir.join("sweep.json"), &Envelope::new("sweep", Some(&cfg.raw), &summary))?;
    if svg {
        let curve: Vec<(f64, f64)> = match &summary.fit {
            Some(f) => {
                let fine = DetuningRange { points: 201, ..*range }.values();
                let a = displacement_profile(&fine, &base.sequence, &base.trap, n)?;
                fine.iter().zip(a).map(|(&d, a)| (d, lineshape_model(a, f.inv_beta, f.offset, f.contrast))).collect()
            }
            None => deltas.iter().copied().zip(summary.p_up_model.iter().copied()).collect(),
        };
        std::fs::write(out_dir.join("sweep.svg"), plot::sweep_svg(&summary.points, &curve, "detuning sweep"))?;
    }
    Ok(summary)
}

pub fn cmd_estimate(cfg: &RunConfig, input: &Path, out_dir: &Path) -> Result<Thermometry> {
    prepare(out_dir)?;
    let exp = &cfg.experiment;
    let data = io::read_shots(input)?;
    let readout = match &data {
        ShotData::Records(r) => Readout::Shots(r),
        ShotData::Photons(p) => Readout::Photons(p),
    };
    let alpha = exp.alpha()?;
    if alpha.norm() == 0.0 {
        return Err(Error::domain(
            "the configured sequence gives no displacement (phi_odf = 0?); estimate with the phi_odf = 180 configuration",
        ));
    }
    let t = estimate_nbar(readout, &exp.detection, alpha.norm(), &cfg.thermometry)?;

    #[derive(Serialize)]
    struct EstimateResult<'a> {
        input: String,
        alpha_mag: f64,
        temperature_k: Option<f64>,
        #[serde(flatten)]
        thermometry: &'a Thermometry,
    }
    let temperature_k = (t.nbar.value.is_finite() && t.nbar.value >= 0.0)
        .then(|| t.nbar.value * crate::units::HBAR * exp.trap.omega_z / crate::units::K_B);
    let result = EstimateResult {
        input: input.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
        alpha_mag: alpha.norm(),
        temperature_k,
        thermometry: &t,
    };
    io::write_json(&out_dir.join("estimate.json"), &Envelope::new("estimate", Some(&cfg.raw), &result))?;
    Ok(t)
}

pub fn cmd_heating_fit(input: &Path, out_dir: &Path, svg: bool) -> Result<HeatingFit> {
    prepare(out_dir)?;
    let points = io::read_heating(input)?;
    let fit = fit_heating_rate(&points)?;
    io::write_json(&out_dir.join("heating.json"), &Envelope::new("heating-fit", None, &fit))?;
    if svg {
        std::fs::write(out_dir.join("heating.svg"), plot::heating_svg(&points, &fit, "heating"))?;
    }
    Ok(fit)
}

pub fn cmd_oracle_check(out_dir: &Path) -> Result<OracleReport> {
    prepare(out_dir)?;
    let report = run_oracles(library_laguerre);
    io::write_json(&out_dir.join("oracle.json"), &Envelope::new("oracle-check", None, &report))?;
    Ok(report)
}
