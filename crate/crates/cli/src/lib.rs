//! Command-line front end: `analyze`, `delta`, `sweep` and `verify`.
//!
//! Exit codes: 0 success (and a valid verdict), 1 usage or configuration
//! error, 2 an invalid verdict or a failed verification check.

pub mod config;
pub mod format;
pub mod sweep;
pub mod verify;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use thiserror::Error;

use singlemode::corrections::{build_report, ElectronKinematics, ValidityReport};
use singlemode::pulse::{solve_delta_detailed, SpreadParams};
use singlemode::units::{to_natural, PulseParams};

use config::{AnalysisConfig, ConfigLayer, ElectronInput, OutputFormat, SweepAxis};
use format::{field, json_string, rounded};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

/// Normalization volume V, cm³. No reported quantity depends on it.
pub const VOLUME: f64 = 1.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid {field}: {message}")]
    Config { field: String, message: String },
    #[error(transparent)]
    Core(#[from] singlemode::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        CliError::Config { field: field.to_string(), message: message.into() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "singlemode", version, about = "Single-mode approximation validity analyzer")]
pub struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Write output to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the validity analysis for one pulse and electron
    Analyze(InputArgs),
    /// Print the optimal mode-volume parameter
    Delta,
    /// Tabulate the analysis over one or two parameter axes (CSV)
    Sweep(SweepArgs),
    /// Run the oracle and Fock-space verification suite
    Verify(verify::VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// Peak intensity, W/cm²
    #[arg(long)]
    pub intensity: Option<f64>,
    /// Central wavelength, nm
    #[arg(long)]
    pub wavelength: Option<f64>,
    /// Pulse duration, fs
    #[arg(long)]
    pub duration: Option<f64>,
    /// Spot area, cm²
    #[arg(long)]
    pub spot: Option<f64>,
    /// Transverse electron velocity (units of c)
    #[arg(long = "vperp", allow_hyphen_values = true)]
    pub v_perp: Option<f64>,
    /// Longitudinal electron velocity (units of c)
    #[arg(long = "vz", allow_hyphen_values = true)]
    pub v_z: Option<f64>,
    /// Electron Lorentz factor; sets v_perp = min(1/gamma, sigma1)
    #[arg(long)]
    pub gamma: Option<f64>,
    /// TOML configuration file
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Threshold for |frequency shift|/omega0
    #[arg(long)]
    pub shift_threshold: Option<f64>,
    /// Threshold for width/omega0
    #[arg(long)]
    pub width_threshold: Option<f64>,
    /// Threshold for mu
    #[arg(long)]
    pub mu_threshold: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Sweep axis `name:min:max:steps[:linear|log]`; at most two
    #[arg(long = "axis", value_name = "SPEC", value_parser = SweepAxis::parse)]
    pub axes: Vec<SweepAxis>,
    /// Worker threads for row evaluation
    #[arg(long, default_value_t = 4)]
    pub threads: usize,
}

impl InputArgs {
    fn layer(&self, json: bool) -> ConfigLayer {
        let mut l = ConfigLayer::default();
        l.pulse.intensity = self.intensity;
        l.pulse.wavelength = self.wavelength;
        l.pulse.duration = self.duration;
        l.pulse.spot = self.spot;
        l.electron.v_perp = self.v_perp;
        l.electron.v_z = self.v_z;
        l.electron.gamma = self.gamma;
        l.thresholds.shift = self.shift_threshold;
        l.thresholds.width = self.width_threshold;
        l.thresholds.mu = self.mu_threshold;
        if json {
            l.output.format = Some(OutputFormat::Json);
        }
        l
    }

    /// Resolves flags over the config file over defaults.
    pub fn resolve(&self, json: bool, axes: &[SweepAxis]) -> Result<AnalysisConfig, CliError> {
        let file = match &self.config {
            Some(path) => ConfigLayer::from_file(path)?,
            None => ConfigLayer::default(),
        };
        let mut flags = self.layer(json);
        flags.sweep = axes.to_vec();
        AnalysisConfig::resolve(&flags, &file)
    }
}

/// Everything computed for one configuration.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub pulse: PulseParams,
    pub spreads: SpreadParams,
    pub electron: ElectronKinematics,
    pub report: ValidityReport,
}

pub fn analyze(cfg: &AnalysisConfig) -> Result<Analysis, CliError> {
    let pulse = to_natural(cfg.intensity, cfg.wavelength, cfg.duration, cfg.spot)?;
    let spreads = SpreadParams::from_pulse(&pulse, VOLUME)?;
    let electron = match cfg.electron {
        ElectronInput::Velocity { v_perp, v_z } => ElectronKinematics::new(v_perp, v_z)?,
        ElectronInput::Gamma(g) => ElectronKinematics::from_gamma(g, spreads.sigma1)?,
    };
    let report = build_report(&pulse, &spreads, &electron, cfg.thresholds)?;
    Ok(Analysis { pulse, spreads, electron, report })
}

#[derive(Debug, Serialize)]
struct Inputs {
    intensity: f64,
    wavelength: f64,
    duration: f64,
    spot: f64,
    gamma: Option<f64>,
    omega0: f64,
    tau_nat: f64,
    pulse_energy_nat: f64,
    pulse_energy_joules: f64,
    n_modes: f64,
}

#[derive(Debug, Serialize)]
struct AnalysisOutput<'a> {
    inputs: Inputs,
    report: &'a ValidityReport,
    valid: bool,
}

fn analysis_value(cfg: &AnalysisConfig, a: &Analysis) -> Result<Value, CliError> {
    let p = &a.pulse;
    rounded(&AnalysisOutput {
        inputs: Inputs {
            intensity: p.intensity_lab,
            wavelength: p.wavelength_lab,
            duration: p.duration_lab,
            spot: p.spot_area_lab,
            gamma: match cfg.electron {
                ElectronInput::Gamma(g) => Some(g),
                ElectronInput::Velocity { .. } => None,
            },
            omega0: p.omega0,
            tau_nat: p.tau_nat,
            pulse_energy_nat: p.pulse_energy_nat,
            pulse_energy_joules: p.pulse_energy_joules(),
            n_modes: a.spreads.n_modes,
        },
        report: &a.report,
        valid: a.report.verdict.all(),
    })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn analysis_text(v: &Value) -> String {
    let f = |p: &str| field(v, p);
    let literal = f("report/width_literal_branch");
    let mut out = String::new();
    out.push_str("single-mode validity report\n");
    out.push_str(&format!(
        "pulse: intensity {} W/cm^2, wavelength {} nm, duration {} fs, spot {} cm^2\n",
        f("inputs/intensity"),
        f("inputs/wavelength"),
        f("inputs/duration"),
        f("inputs/spot")
    ));
    out.push_str(&format!(
        "natural units: omega0 {} cm^-1, c*tau {} cm, W {} cm^-1 ({} J)\n",
        f("inputs/omega0"),
        f("inputs/tau_nat"),
        f("inputs/pulse_energy_nat"),
        f("inputs/pulse_energy_joules")
    ));
    out.push_str(&format!(
        "electron: v_perp {}, v_z {}, gamma {}\n",
        f("report/v_perp"),
        f("report/v_z"),
        f("inputs/gamma")
    ));
    out.push_str(&format!(
        "spreads: sigma1 {}, sigma2 {}, delta {}, lambda {}\n",
        f("report/sigma1"),
        f("report/sigma2"),
        f("report/delta"),
        f("report/lambda")
    ));
    out.push_str(&format!(
        "collective fraction {}, external/collective {}\n",
        f("report/collective_fraction"),
        f("report/external_ratio")
    ));
    out.push_str(&format!(
        "frequency shift: delta_omega/omega0 = {} (|.| = {}, threshold {}) [{}]\n",
        f("report/freq_shift_rel"),
        f("report/freq_shift_rel_abs"),
        f("report/thresholds/shift"),
        mark(v["report"]["verdict"]["shift_ok"] == true)
    ));
    out.push_str(&format!(
        "width: Gamma/omega0 = {} (threshold {}) [{}]\n",
        f("report/width_rel"),
        f("report/thresholds/width"),
        mark(v["report"]["verdict"]["width_ok"] == true)
    ));
    let tag = |branch: &str| {
        let mut t = String::new();
        if branch == "lambda" {
            t.push_str(" * active");
        }
        if literal == branch {
            t.push_str(" (literal rule)");
        }
        t
    };
    out.push_str(&format!("  lambda branch   {}{}\n", f("report/width_branch_lambda"), tag("lambda")));
    out.push_str(&format!("  1/lambda branch {}{}\n", f("report/width_branch_inverse"), tag("inverse_lambda")));
    out.push_str(&format!(
        "mu = {} (threshold {}) [{}]\n",
        f("report/mu"),
        f("report/thresholds/mu"),
        mark(v["report"]["verdict"]["mu_ok"] == true)
    ));
    out.push_str(&format!("fluctuation energy {} cm^-1, |resonant shift| {} cm^-1\n", f("report/fluctuation_energy"), f("report/resonant_shift_abs")));
    out.push_str(&format!(
        "verdict: {}\n",
        if v["valid"] == true { "single-mode approximation applicable" } else { "single-mode approximation NOT applicable" }
    ));
    if let Some(notes) = v["report"]["notes"].as_array() {
        out.push_str("notes:\n");
        for n in notes {
            out.push_str(&format!("  - {}\n", n.as_str().unwrap_or_default()));
        }
    }
    out
}

/// Output text and exit code of `analyze`.
pub fn cmd_analyze(cfg: &AnalysisConfig) -> Result<(String, i32), CliError> {
    let a = analyze(cfg)?;
    let v = analysis_value(cfg, &a)?;
    let text = match cfg.format {
        OutputFormat::Json => json_string(&v)?,
        OutputFormat::Text => analysis_text(&v),
    };
    Ok((text, if a.report.verdict.all() { EXIT_OK } else { EXIT_FAIL }))
}

pub fn cmd_delta(json: bool) -> Result<String, CliError> {
    let r = solve_delta_detailed()?;
    let v = rounded(&r)?;
    if json {
        json_string(&v)
    } else {
        Ok(format!(
            "delta = {}\nresidual = {}\niterations = {}\n",
            field(&v, "root"),
            field(&v, "residual"),
            field(&v, "iterations")
        ))
    }
}

/// Output text, exit code and a message for stderr.
fn dispatch(cli: &Cli) -> Result<(String, i32, Option<String>), CliError> {
    match &cli.command {
        Command::Analyze(input) => {
            let (text, code) = cmd_analyze(&input.resolve(cli.json, &[])?)?;
            let msg = (code == EXIT_FAIL).then(|| "validity verdict is negative".to_string());
            Ok((text, code, msg))
        }
        Command::Delta => Ok((cmd_delta(cli.json)?, EXIT_OK, None)),
        Command::Sweep(args) => {
            let cfg = args.input.resolve(cli.json, &args.axes)?;
            if cfg.sweep.is_empty() {
                return Err(CliError::config("sweep", "at least one --axis (or [[sweep]] in the config file) is required"));
            }
            Ok((sweep::cmd_sweep(&cfg, args.threads)?, EXIT_OK, None))
        }
        Command::Verify(args) => {
            let suite = verify::cmd_verify(args)?;
            let text = if cli.json { json_string(&rounded(&suite)?)? } else { suite.render_text() };
            if suite.all_passed {
                Ok((text, EXIT_OK, None))
            } else {
                Ok((text, EXIT_FAIL, Some(format!("verification failed: {}", suite.failed().join(", ")))))
            }
        }
    }
}

/// Runs the command line `args`, writing to `stdout`/`stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((text, code, message)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => stdout.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            if let Some(m) = message {
                let _ = writeln!(stderr, "{m}");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}
