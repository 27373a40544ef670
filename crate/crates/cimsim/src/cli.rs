//! Argument definitions and dispatch.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cim_core::engine::{CimParams, CimSolver, FeedbackMode, PumpSchedule};
use cim_core::solvers::{Annealer, AnnealSchedule, Exhaustive, Solver};

use crate::commands;
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::manifest::Run;

#[derive(Debug, Parser)]
#[command(name = "cimsim", version, about = "Coherent Ising machine simulator and benchmark harness")]
pub struct Cli {
    /// Parameter file (JSON object or `key = value` lines); explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Where to write the run manifest.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a Möbius ladder or a seeded random graph as an edge list.
    GenGraph(GenGraphArgs),
    /// Solve a Max-Cut, Ising or QUBO file.
    Solve(SolveArgs),
    /// Success-rate statistics over a problem set and cut thresholds.
    Bench(BenchArgs),
    /// Stationary DOPO states and their Wigner functions.
    Wigner(WignerArgs),
    /// Docking and feature-selection QUBO builders, KS evaluation.
    #[command(subcommand)]
    Apps(AppsCommand),
    /// Re-run a manifest and check that its outputs are reproduced.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    Mobius,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Cim,
    Sa,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Feedback {
    Binary,
    Analog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

macro_rules! value_enum_from_str {
    ($($t:ty),*) => {$(
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    )*};
}

value_enum_from_str!(GraphKind, Engine, Feedback, Format);

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Cim => "cim",
            Engine::Sa => "sa",
            Engine::Exact => "exact",
        }
    }
}

#[derive(Debug, Args)]
pub struct GenGraphArgs {
    pub kind: GraphKind,
    /// Number of vertices.
    #[arg(long)]
    pub v: Option<usize>,
    /// Edge density of a random graph.
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output edge list; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// CIM parameters; unset values fall back to the config file, then to the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct CimFlags {
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub pump_start: Option<f64>,
    #[arg(long)]
    pub pump_end: Option<f64>,
    /// Feedback gain.
    #[arg(long)]
    pub r: Option<f64>,
    /// Noise amplitude.
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Saturation coefficient.
    #[arg(long)]
    pub sat: Option<f64>,
    /// Initial amplitude spread; defaults to the noise amplitude.
    #[arg(long)]
    pub x0_std: Option<f64>,
    #[arg(long)]
    pub feedback: Option<Feedback>,
}

impl CimFlags {
    pub fn resolve(&self, cfg: &Config) -> CliResult<CimParams> {
        let d = CimParams::default();
        let feedback = match cfg.pick(self.feedback, "feedback")?.unwrap_or(Feedback::Binary) {
            Feedback::Binary => FeedbackMode::Binary,
            Feedback::Analog => FeedbackMode::Analog,
        };
        let params = CimParams {
            schedule: PumpSchedule {
                p_start: cfg.pick_or(self.pump_start, "pump-start", d.schedule.p_start)?,
                p_end: cfg.pick_or(self.pump_end, "pump-end", d.schedule.p_end)?,
                rounds: cfg.pick_or(self.rounds, "rounds", d.schedule.rounds)?,
            },
            r: cfg.pick_or(self.r, "r", d.r)?,
            noise_amp: cfg.pick_or(self.noise, "noise", d.noise_amp)?,
            dt: cfg.pick_or(self.dt, "dt", d.dt)?,
            seed: 0,
            sat: cfg.pick_or(self.sat, "sat", d.sat)?,
            x0_std: cfg.pick(self.x0_std, "x0-std")?,
            feedback,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct SaFlags {
    /// Annealing sweeps per run.
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Initial temperature; derived from the model with --t-end when both are absent.
    #[arg(long)]
    pub t_start: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
}

impl SaFlags {
    pub fn resolve(&self, cfg: &Config) -> CliResult<Annealer> {
        let sweeps = cfg.pick_or(self.sweeps, "sweeps", AnnealSchedule::DEFAULT_SWEEPS)?;
        let t_start = cfg.pick(self.t_start, "t-start")?;
        let t_end = cfg.pick(self.t_end, "t-end")?;
        let temperatures = match (t_start, t_end) {
            (None, None) => None,
            (Some(a), Some(b)) => Some((a, b)),
            _ => return Err(CliError::input("--t-start and --t-end go together")),
        };
        if sweeps == 0 {
            return Err(CliError::input("--sweeps must be positive"));
        }
        Ok(Annealer { sweeps, temperatures })
    }
}

/// A solver chosen on the command line, with its resolved parameters.
pub enum EngineChoice {
    Cim(CimSolver),
    Sa(Annealer),
    Exact,
}

impl EngineChoice {
    pub fn resolve(engine: Engine, cim: &CimFlags, sa: &SaFlags, cfg: &Config) -> CliResult<Self> {
        Ok(match engine {
            Engine::Cim => EngineChoice::Cim(CimSolver { params: cim.resolve(cfg)? }),
            Engine::Sa => EngineChoice::Sa(sa.resolve(cfg)?),
            Engine::Exact => EngineChoice::Exact,
        })
    }

    pub fn solver(&self) -> &dyn Solver {
        match self {
            EngineChoice::Cim(s) => s,
            EngineChoice::Sa(s) => s,
            EngineChoice::Exact => &Exhaustive,
        }
    }

    pub fn record(&self, run: &mut Run) {
        match self {
            EngineChoice::Cim(s) => run.param("cim", s.params),
            EngineChoice::Sa(s) => {
                run.param("sweeps", s.sweeps);
                run.param("temperatures", s.temperatures);
            }
            EngineChoice::Exact => {}
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Problem file: edge list (`p n m`), `ising n` or `qubo n`.
    pub problem: PathBuf,
    #[arg(long)]
    pub engine: Option<Engine>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent runs; the best is reported.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Target energy for `rounds_to_target`.
    #[arg(long)]
    pub target: Option<f64>,
    /// Target cut value (Max-Cut inputs only).
    #[arg(long)]
    pub target_cut: Option<f64>,
    /// CSV of amplitudes and energies of the best CIM run.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub cim: CimFlags,
    #[command(flatten)]
    pub sa: SaFlags,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub engine: Option<Engine>,
    /// Möbius ladder sizes, e.g. 20,40,60.
    #[arg(long, value_delimiter = ',')]
    pub mobius: Vec<usize>,
    /// Random graphs as V:density:seed, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub random: Vec<String>,
    /// Edge-list files.
    #[arg(long, value_delimiter = ',')]
    pub graph: Vec<PathBuf>,
    /// Extra reference optima (same JSON layout as the bundled table).
    #[arg(long)]
    pub optima: Option<PathBuf>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub batches: Option<usize>,
    /// Cut thresholds as fractions of the optimum.
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Vec<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub cim: CimFlags,
    #[command(flatten)]
    pub sa: SaFlags,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    /// Normalized pump values, e.g. 1,1.25,1.5,2.
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<f64>,
    /// Two-photon loss ratio.
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub gamma_s: Option<f64>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Grid points per axis.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Half-width of the square grid; defaults to 2√n_max.
    #[arg(long)]
    pub extent: Option<f64>,
    /// Residual tolerance of the stationary solve.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum AppsCommand {
    /// Docking QUBO from atom and grid point files.
    DockQubo(DockArgs),
    /// Feature-selection QUBO and selected masks.
    FsQubo(FsArgs),
    /// Two-sample Kolmogorov-Smirnov statistic.
    Ks(KsArgs),
}

#[derive(Debug, Args)]
pub struct DockArgs {
    /// Ligand atoms, one "x y z [label]" per line.
    #[arg(long)]
    pub atoms: Option<PathBuf>,
    /// Grid points, same format.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// JSON {eps_dist, K_dist, K_mono, w}; w is "uniform:<value>" or a matrix file.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Generate an instance instead: ATOMS:DECOYS:SEED.
    #[arg(long)]
    pub synthetic: Option<String>,
    /// Directory for the generated instance files.
    #[arg(long)]
    pub instance_dir: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FsArgs {
    /// CSV with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Label column.
    #[arg(long)]
    pub label: String,
    /// Feature columns; all other columns when absent.
    #[arg(long, value_delimiter = ',')]
    pub features: Vec<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// START:STOP:STEP, endpoints included.
    #[arg(long)]
    pub alpha_sweep: Option<String>,
    #[arg(long)]
    pub engine: Option<Engine>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub runs: Option<usize>,
    /// Mask JSON for a single α.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub cim: CimFlags,
    #[command(flatten)]
    pub sa: SaFlags,
}

#[derive(Debug, Args)]
pub struct KsArgs {
    /// First sample, whitespace-separated numbers.
    #[arg(long)]
    pub a: Option<PathBuf>,
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// CSV holding a score column and a two-valued label column.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub score: Option<String>,
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(value_name = "MANIFEST")]
    pub path: PathBuf,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::GenGraph(_) => "gen-graph",
        Command::Solve(_) => "solve",
        Command::Bench(_) => "bench",
        Command::Wigner(_) => "wigner",
        Command::Apps(AppsCommand::DockQubo(_)) => "apps dock-qubo",
        Command::Apps(AppsCommand::FsQubo(_)) => "apps fs-qubo",
        Command::Apps(AppsCommand::Ks(_)) => "apps ks",
        Command::Replay(_) => "replay",
    }
}

/// Parses `args` (without the program name) and executes the command.
pub fn run(args: Vec<String>) -> CliResult<()> {
    let argv = std::iter::once("cimsim".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(CliError::input(e.render().to_string().trim_end().to_string()));
        }
    };
    execute(cli, args)
}

pub(crate) fn execute(cli: Cli, args: Vec<String>) -> CliResult<()> {
    if let Command::Replay(a) = &cli.command {
        return commands::replay(&a.path, cli.manifest.as_deref());
    }
    let mut run = Run::new(command_name(&cli.command), args, cli.manifest.clone());
    let cfg = match &cli.config {
        Some(path) => {
            let text = run.input(path)?;
            Config::parse(&text, &path.display().to_string())?
        }
        None => Config::default(),
    };
    match &cli.command {
        Command::GenGraph(a) => commands::gen_graph(a, &cfg, &mut run)?,
        Command::Solve(a) => commands::solve(a, &cfg, &mut run)?,
        Command::Bench(a) => commands::bench(a, &cfg, &mut run)?,
        Command::Wigner(a) => commands::wigner(a, &cfg, &mut run)?,
        Command::Apps(AppsCommand::DockQubo(a)) => commands::dock_qubo(a, &cfg, &mut run)?,
        Command::Apps(AppsCommand::FsQubo(a)) => commands::fs_qubo(a, &cfg, &mut run)?,
        Command::Apps(AppsCommand::Ks(a)) => commands::ks(a, &cfg, &mut run)?,
        Command::Replay(_) => unreachable!("handled above"),
    }
    run.finish()?;
    Ok(())
}

/// Parses a comma-separated list from the config file.
pub(crate) fn config_list<T: FromStr>(cfg: &Config, key: &str) -> CliResult<Vec<T>> {
    match cfg.get::<String>(key)? {
        None => Ok(Vec::new()),
        Some(raw) => raw
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| CliError::input(format!("bad {key} entry {s:?}"))))
            .collect(),
    }
}

/// The flag list, or the config list when the flag was not given.
pub(crate) fn pick_list<T: FromStr + Clone>(flag: &[T], cfg: &Config, key: &str) -> CliResult<Vec<T>> {
    if flag.is_empty() {
        config_list(cfg, key)
    } else {
        Ok(flag.to_vec())
    }
}

pub(crate) fn display(p: &Path) -> String {
    p.display().to_string()
}
