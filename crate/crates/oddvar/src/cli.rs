//! Command-line front end: `sigma`, `simulate {fbm|fbmbt}` and `verify`.
//!
//! Exit codes: 0 pass, 1 verification or numerical failure, 2 usage error.
//! Settings come from an optional flat TOML file; flags override it.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use oddvar_core::gaussian::sigma_r;
use oddvar_core::walk::{jstar, relative_residual, vn_crossing, vn_direct, vn_magnitude, wn_index};
use oddvar_core::{BuiltinWeight, HurstParam};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::dump::{path_csv, series_csv, walk_csv, write_into};
use crate::error::{EngineError, Result};
use crate::fbm::sample_fbm;
use crate::fbmbt::sample_fbmbt;
use crate::harness::experiment::forward_grid;
use crate::harness::{run_suite, SuiteId, SuiteSettings, Thresholds, VERSION};
use crate::seed::SeedSpec;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default directory for verification reports.
pub const DEFAULT_REPORT_DIR: &str = "oddvar-reports";

#[derive(Debug, Parser)]
#[command(name = "oddvar", version, about = "Weighted odd-power variations of fractional Brownian motion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the limiting constant sigma_r(H) with its truncation bound.
    Sigma,
    /// Sample one path or one Brownian-time sample and print its statistics.
    Simulate {
        #[arg(value_enum)]
        kind: SimulateKind,
    },
    /// Run an acceptance suite (A1..A10) or `all`.
    Verify { suite: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimulateKind {
    Fbm,
    Fbmbt,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long, global = true)]
    pub h: Option<f64>,
    #[arg(long, global = true)]
    pub r: Option<u32>,
    #[arg(long, global = true)]
    pub n: Option<u32>,
    #[arg(long, global = true)]
    pub m: Option<u32>,
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// Weight registry id: zero, one, x, x2, sin, exp-x2, x2-exp-x2.
    #[arg(long, global = true)]
    pub f: Option<String>,
    #[arg(long, global = true)]
    pub replicates: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file (sigma) or directory (simulate manifest, verify reports).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub dump_paths: Option<PathBuf>,
    #[arg(long, global = true)]
    pub dump_series: Option<PathBuf>,
    #[arg(long, global = true)]
    pub dump_walk: Option<PathBuf>,
    /// Truncation tolerance for sigma_r.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub verbose: bool,
    /// Flat TOML file of settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Flat config file contents.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FileConfig {
    #[serde(flatten)]
    pub settings: SuiteSettings,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub verbose: Option<bool>,
}

const SETTING_KEYS: [&str; 12] = [
    "h", "r", "n", "m", "t", "f", "replicates", "seed", "tol", "threads", "out", "verbose",
];

impl FileConfig {
    /// Parses a flat TOML document, rejecting unknown keys.
    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| EngineError::Config(e.to_string()))?;
        let thresholds = toml::Table::try_from(Thresholds::default()).expect("thresholds serialize");
        if let Some(key) = table
            .keys()
            .find(|k| !SETTING_KEYS.contains(&k.as_str()) && !thresholds.contains_key(*k))
        {
            return Err(EngineError::Config(format!("unknown config key '{key}'")));
        }
        table
            .try_into()
            .map_err(|e: toml::de::Error| EngineError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| EngineError::io(path, e))?;
        Self::parse(&text)
    }

    /// Applies the flags on top of the file.
    pub fn merge(mut self, flags: &Flags) -> Self {
        let s = &mut self.settings;
        s.h = flags.h.or(s.h);
        s.r = flags.r.or(s.r);
        s.n = flags.n.or(s.n);
        s.m = flags.m.or(s.m);
        s.t = flags.t.or(s.t);
        s.f = flags.f.clone().or(s.f.take());
        s.replicates = flags.replicates.or(s.replicates);
        s.seed = flags.seed.or(s.seed);
        s.tol = flags.tol.or(s.tol);
        self.threads = flags.threads.or(self.threads);
        self.out = flags.out.clone().or(self.out);
        self.verbose = Some(flags.verbose || self.verbose.unwrap_or(false));
        self
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                EngineError::Spectral { .. } | EngineError::Cholesky { .. } => EXIT_FAIL,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let file = match &cli.flags.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let config = file.merge(&cli.flags);
    config.settings.thresholds.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = config.threads {
        if k == 0 {
            return Err(EngineError::Config("threads must be at least 1".into()));
        }
        builder = builder.num_threads(k);
    }
    let pool = builder
        .build()
        .map_err(|e| EngineError::Config(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Sigma => cmd_sigma(&config),
        Command::Simulate { kind } => cmd_simulate(*kind, &config, &cli.flags),
        Command::Verify { suite } => cmd_verify(suite, &config),
    })
}

/// Writes a line to stdout; a closed pipe is not an error.
fn say(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn emit(config: &FileConfig, value: &serde_json::Value) {
    if config.verbose == Some(true) {
        eprintln!("{}", serde_json::to_string(&config).unwrap_or_default());
    }
    say(&serde_json::to_string_pretty(value).expect("json serializes"));
}

fn cmd_sigma(config: &FileConfig) -> Result<i32> {
    let s = &config.settings;
    let (r, hv, tol) = (s.r.unwrap_or(2), s.h.unwrap_or(0.25), s.tol.unwrap_or(1e-10));
    let h = HurstParam::new(hv)?;
    let sigma = sigma_r(r, h, tol)?;
    let out = json!({
        "version": VERSION,
        "command": "sigma",
        "config": { "r": r, "h": hv, "tol": tol },
        "seed": s.seed,
        "sigma": sigma.value,
        "sigma_squared": sigma.squared(),
        "tail_bound": sigma.tail_bound,
        "terms": sigma.terms,
    });
    if let Some(path) = &config.out {
        let text = serde_json::to_string_pretty(&out).expect("json serializes") + "\n";
        std::fs::write(path, text).map_err(|e| EngineError::io(path, e))?;
    }
    emit(config, &out);
    Ok(EXIT_PASS)
}

struct SimulateArgs {
    h: f64,
    r: u32,
    n: u32,
    t: f64,
    f: String,
    seed: u64,
}

impl SimulateArgs {
    fn resolve(s: &SuiteSettings, default_n: u32) -> Result<(Self, HurstParam, BuiltinWeight)> {
        let a = Self {
            h: s.h.unwrap_or(0.25),
            r: s.r.unwrap_or(2),
            n: s.n.unwrap_or(default_n),
            t: s.t.unwrap_or(1.0),
            f: s.f.clone().unwrap_or_else(|| "one".into()),
            seed: s.seed.unwrap_or(1),
        };
        if a.n == 0 || a.n > 24 {
            return Err(EngineError::Config("n must be in 1..=24".into()));
        }
        if a.r == 0 {
            return Err(EngineError::Config("r must be at least 1".into()));
        }
        if !(a.t > 0.0 && a.t.is_finite() && a.t <= 64.0) {
            return Err(EngineError::Config("t must lie in (0, 64]".into()));
        }
        let h = HurstParam::new(a.h)?;
        let f = BuiltinWeight::from_id(&a.f)
            .ok_or_else(|| EngineError::Config(format!("unknown weight '{}'", a.f)))?;
        Ok((a, h, f))
    }

    fn json(&self, kind: &str) -> serde_json::Value {
        json!({
            "kind": kind,
            "h": self.h,
            "r": self.r,
            "n": self.n,
            "t": self.t,
            "f": self.f,
            "seed": self.seed,
        })
    }
}

fn cmd_simulate(kind: SimulateKind, config: &FileConfig, flags: &Flags) -> Result<i32> {
    let seed_spec = |seed| SeedSpec::new(seed, 0);
    let mut files = Vec::new();
    let (out, code) = match kind {
        SimulateKind::Fbm => {
            let (a, h, f) = SimulateArgs::resolve(&config.settings, 10)?;
            let path = sample_fbm(h, forward_grid(a.n, a.t)?, seed_spec(a.seed))?;
            if let Some(dir) = &flags.dump_paths {
                files.push(write_into(dir, "fbm_path.csv", &path_csv(&path))?);
            }
            if let Some(dir) = &flags.dump_series {
                files.push(write_into(dir, "series.csv", &series_csv(&path, &f, a.r)?)?);
            }
            if flags.dump_walk.is_some() {
                return Err(EngineError::Config("--dump-walk applies to `simulate fbmbt`".into()));
            }
            let k = path.grid().steps_until(a.t);
            let out = json!({
                "version": VERSION,
                "command": "simulate",
                "config": a.json("fbm"),
                "points": path.values().len(),
                "value_at_t": path.at(k)?,
            });
            (out, EXIT_PASS)
        }
        SimulateKind::Fbmbt => {
            let (a, h, f) = SimulateArgs::resolve(&config.settings, 8)?;
            if flags.dump_series.is_some() {
                return Err(EngineError::Config("--dump-series applies to `simulate fbm`".into()));
            }
            let sample = sample_fbmbt(h, a.n, a.t, seed_spec(a.seed))?;
            if let Some(dir) = &flags.dump_paths {
                files.push(write_into(dir, "spatial_path.csv", &path_csv(sample.path()))?);
            }
            if let Some(dir) = &flags.dump_walk {
                files.push(write_into(dir, "walk.csv", &walk_csv(&sample))?);
            }
            let vn = vn_direct(&sample, &f, a.r, a.t)?;
            let crossing = vn_crossing(&sample, &f, a.r, a.t)?;
            let j = jstar(sample.walk(), a.t)?;
            let wn = wn_index(sample.path(), &f, a.r, j)?;
            let scale = vn_magnitude(&sample, &f, a.r, a.t)?;
            let residual = relative_residual(vn, wn, scale).max(relative_residual(vn, crossing, scale));
            let tol = config.settings.thresholds.identity_tol;
            let out = json!({
                "version": VERSION,
                "command": "simulate",
                "config": a.json("fbmbt"),
                "v_n": vn,
                "v_n_crossing": crossing,
                "w_n": wn,
                "jstar": j,
                "residual": residual,
                "residual_tolerance": tol,
            });
            (out, if residual <= tol { EXIT_PASS } else { EXIT_FAIL })
        }
    };
    let mut out = out;
    if !files.is_empty() {
        out["files"] = json!(files);
        for dir in [&flags.dump_paths, &flags.dump_series, &flags.dump_walk].into_iter().flatten() {
            let text = serde_json::to_string_pretty(&out).expect("json serializes") + "\n";
            write_into(dir, "manifest.json", &text)?;
        }
    }
    emit(config, &out);
    Ok(code)
}

fn cmd_verify(suite: &str, config: &FileConfig) -> Result<i32> {
    let ids: Vec<SuiteId> = if suite.eq_ignore_ascii_case("all") {
        SuiteId::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let dir = config
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_REPORT_DIR));
    let mut all = true;
    for id in ids {
        let outcome = run_suite(id, &config.settings)?;
        let text = outcome.to_json() + "\n";
        write_into(&dir, &format!("{id}.json"), &text)?;
        say(&outcome.summary_line());
        let wall: f64 = outcome.reports.iter().map(|r| r.wall_time.as_secs_f64()).sum();
        eprintln!("{id}: {wall:.1} s");
        if config.verbose == Some(true) {
            for rep in &outcome.reports {
                eprintln!("{}", rep.to_json());
            }
        }
        all &= outcome.passed;
    }
    Ok(if all { EXIT_PASS } else { EXIT_FAIL })
}
