//! Command-line interface: configuration ingestion, subcommands for
//! spectra, Hopf boundaries, simulation, analysis and parameter sweeps.
//!
//! Configurations are JSON, bulk numeric output is CSV; both diff
//! cleanly and are language-neutral. Exit codes are stable API:
//!
//! - 1: configuration error (bad value, unknown key, unreadable file)
//! - 2: invalid mode index
//! - 3: no boundary in range (or a degenerate, non-Hopf crossing)
//! - 4: trajectory diverged
//! - 5: malformed trajectory file
//! - 6: normal form requested off the Hopf locus (`a != c`)
//!
//! No environment variables are consulted; every input is explicit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    classify_pattern, consensus_frequency, two_tori_report, PatternKind, PatternReport,
};
use crate::dynamics::{
    default_initial_state, simulate_torus, simulate_two_tori, IntegratorSettings, SystemConfig,
    Trajectory,
};
use crate::error::{Error, Result};
use crate::model::{NetworkState, NeuronParams, TorusConfig, TwoToriConfig};
use crate::normalform::first_lyapunov_sign;
use crate::spectrum::{
    find_hopf_boundary, hopf_residual, mode_spectrum, origin_stability, real_imag_parts,
    two_tori_max_re, Branch, ModeIndex, VaryParam,
};

/// Output schema version stamped into JSON documents and `--version`.
pub const SCHEMA_VERSION: u32 = 1;

/// Tool and schema versions, as printed by `--version`.
pub const VERSION_STRING: &str = concat!(env!("CARGO_PKG_VERSION"), " (schema 1)");

/// Run configuration file (JSON). Unknown keys are rejected.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub gamma: f64,
    pub delta: f64,
    /// Presence selects two-tori mode.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub t_end: Option<f64>,
    #[serde(default)]
    pub transient_discard: Option<f64>,
    #[serde(default)]
    pub record_stride: Option<usize>,
    /// Absent: the reference 3x3 values for N = 3, tiled otherwise.
    #[serde(default)]
    pub ic: Option<InitialConditionSpec>,
}

/// Explicit initial conditions, row-major grids per torus.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConditionSpec {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    #[serde(default)]
    pub x2: Option<Vec<f64>>,
    #[serde(default)]
    pub y2: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2 (got {})", self.n)));
        }
        let _ = self.torus_config()?;
        self.settings()?;
        if let Some(eps) = self.epsilon {
            if !eps.is_finite() {
                return Err(Error::Config(format!("epsilon must be finite (got {eps})")));
            }
        }
        if let Some(ic) = &self.ic {
            let nn = self.n * self.n;
            let expect = |name: &str, v: &[f64]| -> Result<()> {
                if v.len() != nn {
                    return Err(Error::Config(format!(
                        "ic.{name} has {} entries, expected N^2 = {nn}",
                        v.len()
                    )));
                }
                if !v.iter().all(|x| x.is_finite()) {
                    return Err(Error::Config(format!("ic.{name} contains a non-finite entry")));
                }
                Ok(())
            };
            expect("x", &ic.x)?;
            expect("y", &ic.y)?;
            match (self.epsilon.is_some(), &ic.x2, &ic.y2) {
                (true, Some(x2), Some(y2)) => {
                    expect("x2", x2)?;
                    expect("y2", y2)?;
                }
                (true, None, None) => {
                    return Err(Error::Config(
                        "two-tori config with explicit ic needs x2 and y2".into(),
                    ))
                }
                (true, _, _) => {
                    return Err(Error::Config("ic needs both x2 and y2 or neither".into()))
                }
                (false, None, None) => {}
                (false, _, _) => {
                    return Err(Error::Config(
                        "ic.x2/ic.y2 are only meaningful with epsilon set".into(),
                    ))
                }
            }
        }
        Ok(())
    }

    pub fn torus_config(&self) -> Result<TorusConfig> {
        let neuron = NeuronParams::new(self.a, self.b, self.c)?;
        TorusConfig::new(self.n, neuron, self.gamma, self.delta)
    }

    pub fn two_tori_config(&self) -> Result<Option<TwoToriConfig>> {
        match self.epsilon {
            Some(eps) => Ok(Some(TwoToriConfig::new(self.torus_config()?, eps)?)),
            None => Ok(None),
        }
    }

    pub fn settings(&self) -> Result<IntegratorSettings> {
        let d = IntegratorSettings::default();
        let s = IntegratorSettings {
            dt: self.dt.unwrap_or(d.dt),
            t_end: self.t_end.unwrap_or(d.t_end),
            record_stride: self.record_stride.unwrap_or(d.record_stride),
            transient_discard: self.transient_discard.unwrap_or(d.transient_discard),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn initial_state(&self) -> Result<NetworkState> {
        let two = self.epsilon.is_some();
        match &self.ic {
            None => Ok(default_initial_state(self.n, two)),
            Some(ic) => {
                let t1 = NetworkState::from_grids(self.n, &ic.x, &ic.y)?;
                if !two {
                    return Ok(t1);
                }
                let x2 = ic.x2.as_ref().expect("validated");
                let y2 = ic.y2.as_ref().expect("validated");
                let t2 = NetworkState::from_grids(self.n, x2, y2)?;
                NetworkState::join(&t1, &t2)
            }
        }
    }

    fn print_diagnostics(&self) {
        if let Ok(c) = self.torus_config() {
            for w in c.diagnostics() {
                eprintln!("note: {w}");
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VaryArg {
    Gamma,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVary {
    Gamma,
    Delta,
    Epsilon,
}

#[derive(Debug, Parser)]
#[command(name = "fhn-torus", version = VERSION_STRING, about = "Torus lattices of modified FHN oscillators: spectra, Hopf boundaries, simulation, pattern analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-mode eigenvalues, decomposition terms and the stability verdict
    Spectrum {
        config: PathBuf,
        /// Restrict output to one mode, as `r,s`
        #[arg(long, conflicts_with = "all")]
        mode: Option<String>,
        /// All N^2 modes (the default)
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Locate the critical coupling of one mode by bisection
    HopfBoundary {
        config: PathBuf,
        /// Mode as `r,s`
        #[arg(long)]
        mode: String,
        #[arg(long, value_enum)]
        vary: VaryArg,
        /// Bracket as `lo:hi`
        #[arg(long)]
        range: String,
        /// Append the result as a CSV row to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the configured system and write the trajectory as CSV
    Simulate {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify a previously simulated trajectory
    Analyze {
        #[arg(long)]
        traj: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// First-Lyapunov-sign classification of the single-neuron Hopf point
    NormalForm { config: PathBuf },
    /// Sweep one parameter: closed-form max Re lambda plus a simulation
    /// classification per point
    Sweep {
        config: PathBuf,
        #[arg(long, value_enum)]
        vary: SweepVary,
        /// Range as `lo:hi`
        #[arg(long)]
        range: String,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidMode { .. } => 2,
        Error::NoSignChange { .. } | Error::DegenerateCrossing { .. } => 3,
        Error::Diverged { .. } => 4,
        Error::MalformedTrajectory(_) | Error::DimensionMismatch { .. } => 5,
        Error::NotAtHopf { .. } | Error::TransformUndefined { .. } => 6,
        _ => 1,
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum { config, mode, all: _, format } => cmd_spectrum(&config, mode.as_deref(), format),
        Command::HopfBoundary { config, mode, vary, range, out } => {
            cmd_hopf_boundary(&config, &mode, vary, &range, out.as_deref())
        }
        Command::Simulate { config, out } => cmd_simulate(&config, &out),
        Command::Analyze { traj, config, format } => cmd_analyze(&traj, &config, format),
        Command::NormalForm { config } => cmd_normal_form(&config),
        Command::Sweep { config, vary, range, steps, out } => {
            cmd_sweep(&config, vary, &range, steps, &out)
        }
    }
}

fn parse_mode(text: &str, n: usize) -> Result<ModeIndex> {
    let invalid = |reason: &str| Error::InvalidMode { r: -1, s: -1, n, reason: reason.into() };
    let (r, s) = text.split_once(',').ok_or_else(|| invalid("expected the form r,s"))?;
    let r: usize = r.trim().parse().map_err(|_| invalid("r is not a nonnegative integer"))?;
    let s: usize = s.trim().parse().map_err(|_| invalid("s is not a nonnegative integer"))?;
    ModeIndex::new(r, s, n)
}

fn parse_range(text: &str) -> Result<(f64, f64)> {
    let bad = || Error::Config(format!("range must be lo:hi with lo < hi (got {text})"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// 17 significant digits: enough for a bit-stable f64 round trip.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Serialize)]
struct SpectrumRecord {
    r: usize,
    s: usize,
    branch: u8,
    re: f64,
    im: f64,
    a1: f64,
    b1: f64,
    a2: f64,
    b2: f64,
}

#[derive(Serialize)]
struct VerdictRecord {
    stable: bool,
    max_re: f64,
    critical_modes: Vec<(usize, usize)>,
}

fn cmd_spectrum(config: &Path, mode: Option<&str>, format: OutputFormat) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    cfg.print_diagnostics();
    let torus = cfg.torus_config()?;
    let modes: Vec<ModeIndex> = match mode {
        Some(text) => vec![parse_mode(text, torus.n)?],
        None => (0..torus.n)
            .flat_map(|r| (0..torus.n).map(move |s| ModeIndex { r, s }))
            .collect(),
    };
    let mut records = Vec::with_capacity(2 * modes.len());
    for m in modes {
        let ms = mode_spectrum(m, &torus);
        records.push(SpectrumRecord {
            r: m.r, s: m.s, branch: 1,
            re: ms.re1, im: ms.im1,
            a1: ms.a1, b1: ms.b1, a2: ms.a2, b2: ms.b2,
        });
        records.push(SpectrumRecord {
            r: m.r, s: m.s, branch: 2,
            re: ms.re2, im: ms.im2,
            a1: ms.a1, b1: ms.b1, a2: ms.a2, b2: ms.b2,
        });
    }
    let verdict = origin_stability(&torus);
    let verdict_rec = VerdictRecord {
        stable: verdict.stable,
        max_re: verdict.max_re,
        critical_modes: verdict.critical_modes.iter().map(|m| (m.r, m.s)).collect(),
    };
    let coupled_max = cfg.two_tori_config()?.map(|tt| two_tori_max_re(&tt));

    match format {
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "records": records,
                "verdict": verdict_rec,
                "two_tori_max_re": coupled_max,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        OutputFormat::Table => {
            println!("{:>3} {:>3} {:>6} {:>22} {:>22} {:>12} {:>12} {:>12} {:>12}",
                "r", "s", "branch", "re", "im", "a1", "b1", "a2", "b2");
            for rec in &records {
                println!(
                    "{:>3} {:>3} {:>6} {:>22.15e} {:>22.15e} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                    rec.r, rec.s, rec.branch, rec.re, rec.im, rec.a1, rec.b1, rec.a2, rec.b2
                );
            }
            let modes_text = verdict_rec
                .critical_modes
                .iter()
                .map(|(r, s)| format!("({r},{s})"))
                .collect::<Vec<_>>()
                .join(", ");
            println!(
                "origin: {} (max Re lambda = {:.9}); critical modes: {}",
                if verdict.stable { "stable" } else { "unstable" },
                verdict.max_re,
                modes_text
            );
            if let Some(m) = coupled_max {
                println!("two-tori max Re lambda = {m:.9}");
            }
        }
    }
    Ok(())
}

fn cmd_hopf_boundary(
    config: &Path,
    mode_text: &str,
    vary: VaryArg,
    range: &str,
    out: Option<&Path>,
) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    let torus = cfg.torus_config()?;
    let mode = parse_mode(mode_text, torus.n)?;
    let bracket = parse_range(range)?;
    let vary_param = match vary {
        VaryArg::Gamma => VaryParam::Gamma,
        VaryArg::Delta => VaryParam::Delta,
    };
    let critical = find_hopf_boundary(mode, &torus, vary_param, bracket)?;
    let mut at = torus;
    match vary_param {
        VaryParam::Gamma => at.gamma = critical,
        VaryParam::Delta => at.delta = critical,
    }
    let residual = hopf_residual(mode, &at, Branch::One)?;
    let (_, _, im, _) = real_imag_parts(mode, &at);
    let vary_name = match vary {
        VaryArg::Gamma => "gamma",
        VaryArg::Delta => "delta",
    };
    println!("critical {vary_name} = {}", fmt17(critical));
    println!("residual = {residual:.3e}");
    println!("imaginary part at crossing = {im:.12}");
    if let Some(path) = out {
        let new = !path.exists();
        let mut file = fs::OpenOptions::new().create(true).append(true).open(path)?;
        if new {
            writeln!(file, "r,s,vary,critical,residual,im")?;
        }
        writeln!(
            file,
            "{},{},{},{},{},{}",
            mode.r,
            mode.s,
            vary_name,
            fmt17(critical),
            fmt17(residual),
            fmt17(im)
        )?;
    }
    Ok(())
}

fn trajectory_header(n: usize, tori: usize) -> Vec<String> {
    let mut header = vec!["t".to_string()];
    for torus in 0..tori {
        let suffix = if torus == 0 { "" } else { "_t2" };
        for alpha in 0..n {
            for beta in 0..n {
                header.push(format!("x_{alpha}_{beta}{suffix}"));
                header.push(format!("y_{alpha}_{beta}{suffix}"));
            }
        }
    }
    header
}

fn cmd_simulate(config: &Path, out: &Path) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    cfg.print_diagnostics();
    let settings = cfg.settings()?;
    let ic = cfg.initial_state()?;
    let traj = match cfg.two_tori_config()? {
        Some(tt) => simulate_two_tori(&tt, &ic, &settings)?,
        None => simulate_torus(&cfg.torus_config()?, &ic, &settings)?,
    };
    write_trajectory_csv(&traj, out)?;
    println!("wrote {} samples to {}", traj.len(), out.display());
    Ok(())
}

pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    let n = traj.system().n();
    w.write_record(trajectory_header(n, traj.system().tori()))
        .map_err(|e| Error::Config(e.to_string()))?;
    for i in 0..traj.len() {
        let mut row = Vec::with_capacity(1 + traj.dim());
        row.push(fmt17(traj.times()[i]));
        row.extend(traj.state_row(i).iter().map(|&v| fmt17(v)));
        w.write_record(&row).map_err(|e| Error::Config(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_csv(path: &Path, cfg: &RunConfig) -> Result<Trajectory> {
    let settings = cfg.settings()?;
    let system = match cfg.two_tori_config()? {
        Some(tt) => SystemConfig::Two(tt),
        None => SystemConfig::Single(cfg.torus_config()?),
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::MalformedTrajectory(format!("cannot read {}: {e}", path.display())))?;
    let expected = trajectory_header(system.n(), system.tori());
    let headers = reader.headers().map_err(|e| Error::MalformedTrajectory(e.to_string()))?;
    let got: Vec<String> = headers.iter().map(str::to_string).collect();
    if got != expected {
        return Err(Error::MalformedTrajectory(format!(
            "header mismatch: {} columns vs expected {} for N = {}",
            got.len(),
            expected.len(),
            system.n()
        )));
    }
    let mut times = Vec::new();
    let mut data = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::MalformedTrajectory(e.to_string()))?;
        if record.len() != expected.len() {
            return Err(Error::MalformedTrajectory(format!(
                "row {} has {} fields, expected {}",
                times.len() + 1,
                record.len(),
                expected.len()
            )));
        }
        let mut fields = record.iter().map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| Error::MalformedTrajectory(format!("unparseable value: {f}")))
        });
        times.push(fields.next().expect("nonempty")?);
        for v in fields {
            data.push(v?);
        }
    }
    Trajectory::from_parts(times, data, system, settings)
}

#[derive(Serialize)]
struct AnalysisDocument {
    schema_version: u32,
    torus1: PatternReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    torus2: Option<PatternReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    freq_ratio: Option<f64>,
}

fn print_report_table(label: &str, report: &PatternReport) {
    let kind = pattern_label(report.kind);
    print!("{label}: {kind}");
    if let Some(phi) = report.phase_shift {
        print!(", phase shift {phi:.4} (fraction of period)");
    }
    if let Some(ok) = report.diagonal_symmetry_ok {
        print!(", diagonal translation {}", if ok { "ok" } else { "violated" });
    }
    println!();
    if let Some(f) = consensus_frequency(report) {
        println!("  consensus dominant frequency: {f:.6} cycles/unit");
    }
}

pub fn pattern_label(kind: PatternKind) -> &'static str {
    match kind {
        PatternKind::RotatingWave => "RotatingWave",
        PatternKind::InPhase => "InPhase",
        PatternKind::Decay => "Decay",
        PatternKind::Unclassified => "Unclassified",
    }
}

fn cmd_analyze(traj_path: &Path, config: &Path, format: OutputFormat) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    let traj = read_trajectory_csv(traj_path, &cfg)?;
    let doc = if traj.system().tori() == 2 {
        let (r1, r2, ratio) = two_tori_report(&traj)?;
        AnalysisDocument { schema_version: SCHEMA_VERSION, torus1: r1, torus2: Some(r2), freq_ratio: Some(ratio) }
    } else {
        let report = classify_pattern(&traj);
        AnalysisDocument { schema_version: SCHEMA_VERSION, torus1: report, torus2: None, freq_ratio: None }
    };
    match format {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        OutputFormat::Table => {
            print_report_table(if doc.torus2.is_some() { "torus 1" } else { "torus" }, &doc.torus1);
            if let Some(r2) = &doc.torus2 {
                print_report_table("torus 2", r2);
            }
            if let Some(ratio) = doc.freq_ratio {
                println!("frequency ratio (torus 2 / torus 1): {ratio:.4}");
            }
        }
    }
    Ok(())
}

fn cmd_normal_form(config: &Path) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    let neuron = NeuronParams::new(cfg.a, cfg.b, cfg.c)?;
    let nf = first_lyapunov_sign(&neuron)?;
    println!("phi = {:.12}", nf.varphi);
    println!("16s* = {:.12}", nf.s_star_times_16);
    println!("classification: {}", nf.classification.label());
    Ok(())
}

fn cmd_sweep(config: &Path, vary: SweepVary, range: &str, steps: usize, out: &Path) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    cfg.print_diagnostics();
    if steps < 2 {
        return Err(Error::Config(format!("steps must be at least 2 (got {steps})")));
    }
    let (lo, hi) = parse_range(range)?;
    let two_tori = cfg.epsilon.is_some();
    if vary == SweepVary::Epsilon && !two_tori {
        return Err(Error::Config("epsilon sweep needs a two-tori config (set epsilon)".into()));
    }
    let settings = cfg.settings()?;
    let ic = cfg.initial_state()?;

    let mut w = csv::Writer::from_path(out)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", out.display())))?;
    if two_tori {
        w.write_record(["value", "max_re", "classification_t1", "classification_t2", "freq_ratio"])
            .map_err(|e| Error::Config(e.to_string()))?;
    } else {
        w.write_record(["value", "max_re", "classification"])
            .map_err(|e| Error::Config(e.to_string()))?;
    }

    for i in 0..steps {
        let value = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        let mut point = cfg.clone();
        match vary {
            SweepVary::Gamma => point.gamma = value,
            SweepVary::Delta => point.delta = value,
            SweepVary::Epsilon => point.epsilon = Some(value),
        }
        if two_tori {
            let tt = point.two_tori_config()?.expect("two-tori config");
            let max_re = two_tori_max_re(&tt);
            match simulate_two_tori(&tt, &ic, &settings) {
                Ok(traj) => {
                    let ratio_info = two_tori_report(&traj);
                    let (k1, k2, ratio) = match &ratio_info {
                        Ok((r1, r2, ratio)) => {
                            (pattern_label(r1.kind), pattern_label(r2.kind), fmt17(*ratio))
                        }
                        Err(_) => {
                            let (r1, r2) = split_kinds(&traj);
                            (pattern_label(r1), pattern_label(r2), String::new())
                        }
                    };
                    w.write_record([fmt17(value), fmt17(max_re), k1.into(), k2.into(), ratio])
                        .map_err(|e| Error::Config(e.to_string()))?;
                }
                Err(Error::Diverged { .. }) => {
                    w.write_record([fmt17(value), fmt17(max_re), "diverged".into(), "diverged".into(), String::new()])
                        .map_err(|e| Error::Config(e.to_string()))?;
                }
                Err(e) => return Err(e),
            }
        } else {
            let torus = point.torus_config()?;
            let max_re = origin_stability(&torus).max_re;
            match simulate_torus(&torus, &ic, &settings) {
                Ok(traj) => {
                    let kind = classify_pattern(&traj).kind;
                    w.write_record([fmt17(value), fmt17(max_re), pattern_label(kind).into()])
                        .map_err(|e| Error::Config(e.to_string()))?;
                }
                Err(Error::Diverged { .. }) => {
                    w.write_record([fmt17(value), fmt17(max_re), "diverged".into()])
                        .map_err(|e| Error::Config(e.to_string()))?;
                }
                Err(e) => return Err(e),
            }
        }
    }
    w.flush()?;
    println!("wrote {steps} sweep rows to {}", out.display());
    Ok(())
}

fn split_kinds(traj: &Trajectory) -> (PatternKind, PatternKind) {
    // Used when the frequency ratio is unavailable; classification of each
    // half still succeeds.
    let r1 = crate::analysis::classify_torus(traj, 0);
    let r2 = crate::analysis::classify_torus(traj, 1);
    (r1.kind, r2.kind)
}
