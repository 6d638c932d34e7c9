//! The `dirac1d` command-line driver.
//!
//! Settings come from built-in defaults, then an optional JSON config file,
//! then command-line flags; later sources win. The output directory falls
//! back to `$DIRAC1D_OUT` and then to `dirac1d-out` when neither the file nor
//! `--out` names one.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::analytic_spectrum;
use crate::audit::{classify, hr_audit, route_equivalence_with, HrLimit, SymmetryVerdict};
use crate::dirac::{normalize, recover_component, Recover, Spinor};
use crate::error::Error;
use crate::grid::{Grid, MIN_POINTS};
use crate::io::write_json;
use crate::isolated::{
    build_isolated, classify_isolated, default_grid, isolated_report, Constants, EnergySign,
};
use crate::potential::{Branch, LorentzPotentials, PhysicalParams, PotentialTerm};
use crate::report::{write_spectrum_csv, SpectrumReport};
use crate::sl::{solve_route, Route, SlSolution, SolverOptions, DEFAULT_POINTS, DEFAULT_TOLERANCE};

pub const OUT_ENV: &str = "DIRAC1D_OUT";
pub const DEFAULT_OUT: &str = "dirac1d-out";

#[derive(Debug, Parser)]
#[command(
    name = "dirac1d",
    version,
    about = "Bound states of the 1+1D Dirac equation with a pseudoscalar Cornell potential"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Numeric spectrum of both branches plus per-level spinors.
    Solve(CommonArgs),
    /// Closed-form Cornell spectrum.
    Oracle(CommonArgs),
    /// Threshold states at E = -m and E = +m.
    Isolated(CommonArgs),
    /// Spin/pseudospin classification of the configured couplings.
    Audit {
        #[command(flatten)]
        common: CommonArgs,
        /// Audit one of the two "limits" instead of the configured couplings.
        #[arg(long, value_enum)]
        hr: Option<HrArg>,
    },
    /// Upper-route versus lower-route spectra.
    Compare(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HrArg {
    #[value(name = "spin_limit")]
    SpinLimit,
    #[value(name = "pseudospin_limit")]
    PseudospinLimit,
}

impl From<HrArg> for HrLimit {
    fn from(h: HrArg) -> Self {
        match h {
            HrArg::SpinLimit => HrLimit::SpinLimit,
            HrArg::PseudospinLimit => HrLimit::PseudospinLimit,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Coulomb strength of the pseudoscalar Cornell term.
    #[arg(long = "a", allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Linear slope of the pseudoscalar Cornell term.
    #[arg(long = "b", allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Rest mass.
    #[arg(long = "m", allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Levels per branch.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xmax: Option<f64>,
    /// Grid points.
    #[arg(long)]
    pub points: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative tolerance between the two Richardson grids.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverrides {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub potentials: LorentzPotentials,
    pub m: f64,
    pub grid: GridOverrides,
    pub levels: usize,
    pub tol: f64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            potentials: LorentzPotentials::pure_pseudoscalar(PotentialTerm::cornell(1.0, 1.0)),
            m: 1.0,
            grid: GridOverrides::default(),
            levels: 3,
            tol: DEFAULT_TOLERANCE,
            out: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Run(#[from] Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for non-convergence, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Run(e) => match e {
                Error::NonConverged { .. } => 3,
                Error::InvalidParameter(_)
                | Error::InvalidGrid(_)
                | Error::GridTooCoarse { .. }
                | Error::NotPurePseudoscalar
                | Error::NotCornell
                | Error::Domain { .. } => 2,
                _ => 1,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(args: &CommonArgs) -> CliResult<Self> {
        let mut config = match &args.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if args.a.is_some() || args.b.is_some() {
            let k = config.potentials.p.coefficients();
            if k.constant != 0.0 {
                return Err(CliError::Config(
                    "--a/--b apply to a Cornell pseudoscalar term, but p has a constant part"
                        .into(),
                ));
            }
            config.potentials.p =
                PotentialTerm::cornell(args.a.unwrap_or(k.coulomb), args.b.unwrap_or(k.linear));
        }
        if let Some(m) = args.m {
            config.m = m;
        }
        if let Some(levels) = args.levels {
            config.levels = levels;
        }
        if args.xmin.is_some() {
            config.grid.x_min = args.xmin;
        }
        if args.xmax.is_some() {
            config.grid.x_max = args.xmax;
        }
        if args.points.is_some() {
            config.grid.n = args.points;
        }
        if let Some(tol) = args.tol {
            config.tol = tol;
        }
        if args.out.is_some() {
            config.out = args.out.clone();
        }
        if config.out.is_none() {
            config.out = Some(
                std::env::var_os(OUT_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| DEFAULT_OUT.into()),
            );
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> CliResult<()> {
        let config_err = |msg: String| Err(CliError::Config(msg));
        // Only the pseudoscalar term has to confine.
        let p = &self.potentials.p;
        if matches!(
            p,
            PotentialTerm::Cornell { .. } | PotentialTerm::Linear { .. }
        ) && !(p.linear_slope() > 0.0)
        {
            return config_err("b must be positive".into());
        }
        if !self.m.is_finite() || self.m < 0.0 {
            return config_err(format!("m must be finite and non-negative, got {}", self.m));
        }
        if self.levels == 0 {
            return config_err("levels must be at least 1".into());
        }
        if let Some(n) = self.grid.n {
            if n < MIN_POINTS {
                return config_err(format!("grid too small: {n} points (minimum {MIN_POINTS})"));
            }
        }
        if let (Some(lo), Some(hi)) = (self.grid.x_min, self.grid.x_max) {
            if !(lo > 0.0 && lo < hi) {
                return config_err(format!("need 0 < x_min < x_max, got [{lo}, {hi}]"));
            }
        }
        if let Some(lo) = self.grid.x_min {
            if !(lo > 0.0) {
                return config_err(format!("x_min must be positive, got {lo}"));
            }
        }
        if !(self.tol > 0.0) {
            return config_err(format!("tol must be positive, got {}", self.tol));
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| DEFAULT_OUT.into())
    }

    pub fn params(&self) -> CliResult<PhysicalParams> {
        Ok(PhysicalParams::new(self.m)?)
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            x_min: self.grid.x_min,
            x_max: self.grid.x_max,
            points: Some(self.grid.n.unwrap_or(DEFAULT_POINTS)),
            tolerance: Some(self.tol),
        }
    }

    /// `(a, b)` of a Cornell pseudoscalar configuration.
    pub fn cornell(&self) -> CliResult<(f64, f64)> {
        if !self.potentials.has_no_vector_or_scalar() {
            return Err(Error::NotPurePseudoscalar.into());
        }
        match self.potentials.p {
            PotentialTerm::Cornell { a, b } => Ok((a, b)),
            _ => Err(Error::NotCornell.into()),
        }
    }
}

/// Outcome of a successful run: the files written, in order.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

struct Writer {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Writer {
    fn new(dir: PathBuf) -> CliResult<Self> {
        fs::create_dir_all(&dir).map_err(Error::from)?;
        Ok(Writer {
            dir,
            files: Vec::new(),
        })
    }

    fn with_file(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    ) -> CliResult<()> {
        let path = self.dir.join(name);
        let mut out = BufWriter::new(File::create(&path).map_err(Error::from)?);
        f(&mut out).and_then(|_| out.flush()).map_err(Error::from)?;
        self.files.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let path = self.dir.join(name);
        write_json(&path, value)?;
        self.files.push(path);
        Ok(())
    }

    fn text(&mut self, name: &str, text: &str) -> CliResult<()> {
        self.with_file(name, |out| out.write_all(text.as_bytes()))
    }
}

#[derive(Serialize)]
struct SpectrumDocument<'a> {
    m: f64,
    reports: Vec<&'a SpectrumReport>,
}

#[derive(Serialize)]
struct RunMetadata<'a> {
    command: &'a str,
    version: &'a str,
    config: &'a RunConfig,
    files: Vec<String>,
    elapsed_seconds: f64,
    unix_time: u64,
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let started = Instant::now();
    let (name, config, mut writer, summary) = match &cli.command {
        Command::Solve(args) => {
            let config = RunConfig::resolve(args)?;
            let mut w = Writer::new(config.out_dir())?;
            let summary = cmd_solve(&config, &mut w)?;
            ("solve", config, w, summary)
        }
        Command::Oracle(args) => {
            let config = RunConfig::resolve(args)?;
            let mut w = Writer::new(config.out_dir())?;
            let summary = cmd_oracle(&config, &mut w)?;
            ("oracle", config, w, summary)
        }
        Command::Isolated(args) => {
            let config = RunConfig::resolve(args)?;
            let mut w = Writer::new(config.out_dir())?;
            let summary = cmd_isolated(&config, &mut w)?;
            ("isolated", config, w, summary)
        }
        Command::Audit { common, hr } => {
            let config = RunConfig::resolve(common)?;
            let mut w = Writer::new(config.out_dir())?;
            let summary = cmd_audit(&config, hr.map(HrLimit::from), &mut w)?;
            ("audit", config, w, summary)
        }
        Command::Compare(args) => {
            let config = RunConfig::resolve(args)?;
            let mut w = Writer::new(config.out_dir())?;
            let summary = cmd_compare(&config, &mut w)?;
            ("compare", config, w, summary)
        }
    };
    let files: Vec<String> = writer
        .files
        .iter()
        .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
        .collect();
    let meta = RunMetadata {
        command: name,
        version: env!("CARGO_PKG_VERSION"),
        config: &config,
        files,
        elapsed_seconds: started.elapsed().as_secs_f64(),
        unix_time: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    writer.json("run.json", &meta)?;
    Ok(Outcome {
        files: writer.files,
        summary,
    })
}

fn spinor_from_mode(
    solution: &SlSolution,
    n: usize,
    branch: Branch,
    energy: f64,
    pots: &LorentzPotentials,
    params: &PhysicalParams,
) -> CliResult<Spinor> {
    let grid = solution.grid;
    let known: Vec<Complex64> = solution.modes[n]
        .values
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let (upper, lower) = match branch {
        Branch::Plus => {
            let lower = recover_component(&known, &grid, Recover::FromUpper, energy, pots, params)?;
            (known, lower)
        }
        Branch::Minus => {
            let upper = recover_component(&known, &grid, Recover::FromLower, energy, pots, params)?;
            (upper, known)
        }
    };
    Ok(normalize(&Spinor::new(grid, upper, lower, energy)?)?)
}

fn cmd_solve(config: &RunConfig, w: &mut Writer) -> CliResult<String> {
    let params = config.params()?;
    let pots = config.potentials;
    let options = config.solver_options();
    let mut solutions = Vec::new();
    for route in [Route::Upper, Route::Lower] {
        solutions.push((
            route.branch(),
            solve_route(route, &pots, &params, config.levels, &options)?,
        ));
    }

    let isolated = match pots.p {
        PotentialTerm::Cornell { a, b } if b > 0.0 => {
            Some(isolated_report(&classify_isolated(a, b, config.m)?))
        }
        _ => None,
    };
    let mut reports: Vec<&SpectrumReport> = solutions.iter().map(|(_, s)| &s.report).collect();
    if let Some(r) = &isolated {
        reports.push(r);
    }
    w.with_file("spectrum.csv", |out| write_spectrum_csv(out, &reports))?;
    w.json(
        "spectrum.json",
        &SpectrumDocument {
            m: config.m,
            reports: reports.clone(),
        },
    )?;

    let mut spinors = 0;
    for (branch, solution) in &solutions {
        for entry in &solution.report.entries {
            if entry.threshold || entry.epsilon <= 0.0 {
                continue;
            }
            for (tag, energy) in [("Epos", entry.e_plus), ("Eneg", entry.e_minus)] {
                let Some(energy) = energy else { continue };
                let spinor = spinor_from_mode(solution, entry.n, *branch, energy, &pots, &params)?;
                let name = format!("spinor_{}_n{}_{tag}.csv", branch.name(), entry.n);
                w.with_file(&name, |out| spinor.write_csv(out))?;
                spinors += 1;
            }
        }
    }
    Ok(format!(
        "{}{spinors} spinor files written",
        spectrum_text(&reports)?
    ))
}

fn spectrum_text(reports: &[&SpectrumReport]) -> CliResult<String> {
    let mut buf = Vec::new();
    write_spectrum_csv(&mut buf, reports).map_err(Error::from)?;
    Ok(String::from_utf8_lossy(&buf).into_owned())
}

fn cmd_oracle(config: &RunConfig, w: &mut Writer) -> CliResult<String> {
    let (a, b) = config.cornell()?;
    let [plus, minus] = analytic_spectrum(a, b, config.m, config.levels)?;
    let reports = [&plus, &minus];
    w.with_file("spectrum.csv", |out| write_spectrum_csv(out, &reports))?;
    w.json(
        "spectrum.json",
        &SpectrumDocument {
            m: config.m,
            reports: reports.to_vec(),
        },
    )?;
    spectrum_text(&reports)
}

fn isolated_grid(config: &RunConfig, p: &PotentialTerm) -> CliResult<Grid> {
    let g = config.grid;
    if g.x_min.is_none() && g.x_max.is_none() && g.n.is_none() {
        return Ok(default_grid(p)?);
    }
    let default = default_grid(p)?;
    let x_min = g.x_min.unwrap_or(default.x_min());
    let x_max = g.x_max.unwrap_or(default.x_max());
    let n = g.n.unwrap_or(default.len());
    Ok(Grid::new(x_min, x_max, n)?)
}

fn cmd_isolated(config: &RunConfig, w: &mut Writer) -> CliResult<String> {
    let (a, b) = config.cornell()?;
    let params = config.params()?;
    let p = PotentialTerm::cornell(a, b);
    let classification = classify_isolated(a, b, config.m)?;
    w.json("classification.json", &classification)?;
    let grid = isolated_grid(config, &p)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut candidates = Vec::new();
    if classification.e_minus_m {
        let (spinor, candidate) = build_isolated(
            EnergySign::MinusM,
            &params,
            &p,
            Constants::from_pair(EnergySign::MinusM, zero, one),
            &grid,
            None,
        )?;
        w.with_file("isolated_E_minus_m.csv", |out| spinor.write_csv(out))?;
        candidates.push(candidate);
    }
    if classification.e_plus_m {
        let (spinor, candidate) = build_isolated(
            EnergySign::PlusM,
            &params,
            &p,
            Constants::forced(one),
            &grid,
            None,
        )?;
        w.with_file("isolated_E_plus_m.csv", |out| spinor.write_csv(out))?;
        candidates.push(candidate);
    }
    w.json("candidates.json", &candidates)?;
    Ok(format!(
        "E = -m: {}\nE = +m: {}",
        if classification.e_minus_m {
            "exists"
        } else {
            "no"
        },
        if classification.e_plus_m {
            "exists"
        } else {
            "no"
        }
    ))
}

#[derive(Serialize)]
struct PlainAudit<'a> {
    potentials: &'a LorentzPotentials,
    verdict: SymmetryVerdict,
}

fn cmd_audit(config: &RunConfig, hr: Option<HrLimit>, w: &mut Writer) -> CliResult<String> {
    let text = match hr {
        Some(which) => {
            let (a, b) = match config.potentials.p {
                PotentialTerm::Cornell { a, b } => (a, b),
                _ => return Err(Error::NotCornell.into()),
            };
            let audit = hr_audit(which, a, b);
            w.json("verdict.json", &audit)?;
            audit.to_text()
        }
        None => {
            let verdict = classify(&config.potentials);
            let text = verdict.to_text();
            w.json(
                "verdict.json",
                &PlainAudit {
                    potentials: &config.potentials,
                    verdict,
                },
            )?;
            text
        }
    };
    w.text("verdict.txt", &text)?;
    Ok(text)
}

fn cmd_compare(config: &RunConfig, w: &mut Writer) -> CliResult<String> {
    let (a, b) = config.cornell()?;
    let comparison =
        route_equivalence_with(a, b, config.m, config.levels, &config.solver_options())?;
    w.json("compare.json", &comparison)?;
    w.with_file("compare.csv", |out| comparison.write_csv(out))?;
    let text = comparison.to_text();
    w.text("compare.txt", &text)?;
    Ok(text)
}

/// Parses `args`, runs, reports, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.summary.trim_end());
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
