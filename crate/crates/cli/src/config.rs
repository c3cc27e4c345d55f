use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kummer_core::ModelSpec;

/// Exact, mean-field and semiclassical spectra of bosonic n:m conversion models.
#[derive(Debug, Parser)]
#[command(name = "kummer", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Default, Clone, Args)]
pub struct GlobalArgs {
    /// Number of type-A particles consumed per conversion.
    #[arg(long, global = true)]
    pub m: Option<u32>,
    /// Number of type-B particles produced per conversion.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Conserved particle number, a multiple of m·n.
    #[arg(long = "N", global = true)]
    pub particles: Option<u64>,
    /// Detuning ε.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Coupling v.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Key-value config file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    pub plot: bool,
    /// Worker threads (falls back to KUMMER_JOBS).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum CommandArgs {
    /// Exact eigenvalues of the Hamiltonian.
    Spectrum,
    /// Classical fixed points with energies and stability.
    FixedPoints,
    /// Critical detunings of the mean-field bifurcations.
    Bifurcations,
    /// Spectra and fixed-point energies over a grid of ε.
    Sweep(SweepArgs),
    /// Mean-field trajectory from canonical coordinates (p, q).
    Trajectory(TrajectoryArgs),
    /// WKB levels compared with the exact spectrum.
    Quantize,
    /// Exact and semiclassical densities of states.
    Dos(DosArgs),
    /// Vertex grid of the Kummer shape.
    KummerMesh(MeshArgs),
    /// Run the invariant suite and print a pass/fail table.
    Verify,
}

#[derive(Debug, Default, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps_max: Option<f64>,
    #[arg(long)]
    pub eps_steps: Option<usize>,
}

#[derive(Debug, Default, Clone, Args)]
pub struct TrajectoryArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Default, Clone, Args)]
pub struct DosArgs {
    #[arg(long)]
    pub bins: Option<usize>,
}

#[derive(Debug, Default, Clone, Args)]
pub struct MeshArgs {
    #[arg(long)]
    pub n_theta: Option<usize>,
    #[arg(long)]
    pub n_p: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Spectrum,
    FixedPoints,
    Bifurcations,
    Sweep,
    Trajectory,
    Quantize,
    Dos,
    KummerMesh,
    Verify,
}

impl CommandKind {
    /// Commands whose output depends on the particle number.
    fn needs_particles(self) -> bool {
        matches!(
            self,
            CommandKind::Spectrum
                | CommandKind::Sweep
                | CommandKind::Quantize
                | CommandKind::Dos
                | CommandKind::Verify
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Options {
    None,
    Sweep { eps_min: f64, eps_max: f64, eps_steps: usize },
    Trajectory { p: f64, q: f64, t_end: f64, dt: f64 },
    Dos { bins: usize },
    Mesh { n_theta: usize, n_p: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub model: ModelSpec,
    pub options: Options,
    pub out: PathBuf,
    pub plot: bool,
    pub jobs: Option<usize>,
}

/// Invalid invocation; maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

const MAX_TRAJECTORY_STEPS: f64 = 1e7;

const KNOWN_KEYS: &[&str] = &[
    "m", "n", "N", "eps", "v", "out", "plot", "jobs", "eps-min", "eps-max", "eps-steps", "p", "q",
    "t-end", "dt", "bins", "n-theta", "n-p",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| UsageError(format!("config line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        let key = if key == "n-particles" { "N".to_string() } else { key };
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(UsageError(format!("config line {}: unknown key `{}`", lineno + 1, key)));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(UsageError(format!("config line {}: duplicate key `{}`", lineno + 1, key)));
        }
    }
    Ok(map)
}

struct Layered<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Layered<'_> {
    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, UsageError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| UsageError(format!("config key `{key}`: cannot parse `{s}`"))),
        }
    }

    fn required<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, UsageError> {
        self.get(flag, key)?
            .ok_or_else(|| UsageError(format!("missing required flag --{key}")))
    }

    fn or<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, UsageError> {
        Ok(self.get(flag, key)?.unwrap_or(default))
    }
}

fn parse_jobs(flag: Option<usize>, file: Option<usize>, env: Option<&str>) -> Result<Option<usize>, UsageError> {
    let jobs = match (flag.or(file), env) {
        (Some(j), _) => Some(j),
        (None, Some(s)) if !s.trim().is_empty() => Some(
            s.trim()
                .parse()
                .map_err(|_| UsageError(format!("KUMMER_JOBS must be a positive integer (got `{s}`)")))?,
        ),
        _ => None,
    };
    if jobs == Some(0) {
        return Err(UsageError("jobs must be at least 1".into()));
    }
    Ok(jobs)
}

/// Merges flags over the config file and validates the model.
pub fn resolve(cli: Cli, file: &BTreeMap<String, String>, env_jobs: Option<&str>) -> Result<RunConfig, UsageError> {
    let l = Layered { file };
    let g = cli.global;
    let (command, options) = match cli.command {
        CommandArgs::Spectrum => (CommandKind::Spectrum, Options::None),
        CommandArgs::FixedPoints => (CommandKind::FixedPoints, Options::None),
        CommandArgs::Bifurcations => (CommandKind::Bifurcations, Options::None),
        CommandArgs::Quantize => (CommandKind::Quantize, Options::None),
        CommandArgs::Verify => (CommandKind::Verify, Options::None),
        CommandArgs::Sweep(a) => {
            let eps_min = l.required(a.eps_min, "eps-min")?;
            let eps_max = l.required(a.eps_max, "eps-max")?;
            let eps_steps = l.or(a.eps_steps, "eps-steps", 121)?;
            if !(eps_max > eps_min) || !eps_min.is_finite() || !eps_max.is_finite() {
                return Err(UsageError(format!(
                    "eps-max must exceed eps-min (got {eps_min} .. {eps_max})"
                )));
            }
            if eps_steps < 2 {
                return Err(UsageError(format!("eps-steps must be at least 2 (got {eps_steps})")));
            }
            (CommandKind::Sweep, Options::Sweep { eps_min, eps_max, eps_steps })
        }
        CommandArgs::Trajectory(a) => {
            let p = l.required(a.p, "p")?;
            let q = l.or(a.q, "q", 0.0)?;
            let t_end = l.or(a.t_end, "t-end", 10.0)?;
            let dt = l.or(a.dt, "dt", 1e-3)?;
            if !(-0.5..=0.5).contains(&p) {
                return Err(UsageError(format!("p must lie in [-1/2, 1/2] (got {p})")));
            }
            if !(dt > 0.0) || !(t_end >= 0.0) {
                return Err(UsageError(format!("dt must be positive and t-end nonnegative (got dt = {dt}, t-end = {t_end})")));
            }
            if t_end / dt > MAX_TRAJECTORY_STEPS {
                return Err(UsageError(format!(
                    "t-end / dt must not exceed {MAX_TRAJECTORY_STEPS:e} steps (got {:e})",
                    t_end / dt
                )));
            }
            (CommandKind::Trajectory, Options::Trajectory { p, q, t_end, dt })
        }
        CommandArgs::Dos(a) => {
            let bins = l.or(a.bins, "bins", 200)?;
            if bins < 2 {
                return Err(UsageError(format!("bins must be at least 2 (got {bins})")));
            }
            (CommandKind::Dos, Options::Dos { bins })
        }
        CommandArgs::KummerMesh(a) => {
            let n_theta = l.or(a.n_theta, "n-theta", 64)?;
            let n_p = l.or(a.n_p, "n-p", 65)?;
            if n_theta < 2 || n_p < 2 {
                return Err(UsageError(format!(
                    "mesh resolutions must be at least 2 (got n-theta = {n_theta}, n-p = {n_p})"
                )));
            }
            (CommandKind::KummerMesh, Options::Mesh { n_theta, n_p })
        }
    };

    let m = l.required(g.m, "m")?;
    let n = l.required(g.n, "n")?;
    let particles = if command.needs_particles() {
        l.required(g.particles, "N")?
    } else {
        l.or(g.particles, "N", u64::from(m) * u64::from(n))?
    };
    let eps = l.or(g.eps, "eps", 0.0)?;
    let v = l.or(g.v, "v", 1.0)?;
    let model = ModelSpec::new(m, n, particles, eps, v).map_err(|e| UsageError(e.to_string()))?;

    let plot = g.plot || l.or(None, "plot", false)?;
    let out = l.or(g.out, "out", PathBuf::from("."))?;
    let file_jobs = l.get(None, "jobs")?;
    let jobs = parse_jobs(g.jobs, file_jobs, env_jobs)?;
    Ok(RunConfig {
        command,
        model,
        options,
        out,
        plot,
        jobs,
    })
}

/// `argv` plus the optional config file it names.
pub fn parse_config<I, T>(argv: I, env_jobs: Option<&str>) -> Result<RunConfig, ParseFailure>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(ParseFailure::Clap)?;
    let file = match &cli.global.config {
        Some(path) => read_config(path).map_err(ParseFailure::Usage)?,
        None => BTreeMap::new(),
    };
    resolve(cli, &file, env_jobs).map_err(ParseFailure::Usage)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

#[derive(Debug)]
pub enum ParseFailure {
    Clap(clap::Error),
    Usage(UsageError),
}
