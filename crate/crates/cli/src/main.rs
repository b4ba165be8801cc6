//! `verify`: batch driver for the verification suites.
//!
//! Exit status: 0 when every check passed, 1 on a failed check (an invariant
//! breach), 2 on an invalid configuration, 3 when an enumeration budget is
//! exceeded.

mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use iwahori_core::residue::{GroupCache, GroupSpec, DEFAULT_BUDGET};
use iwahori_core::Error;
use sha2::{Digest, Sha256};

use config::{cache_dir_from, parse_range, RunArgs, SuiteConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Budget(String),
    Breach(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Breach(_) => 1,
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Budget(m) | CliError::Breach(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            Error::InvariantBreach(_) => CliError::Breach(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "verify", version)]
#[command(about = "Exact verification suites for the level-0 coefficient-system resolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one suite (or all) and report
    Run(RunArgs),
    /// Manage persisted group enumerations
    Cache(CacheArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CacheAction {
    Warm,
    Clear,
    Stat,
}

#[derive(Args, Debug)]
struct CacheArgs {
    #[arg(value_enum)]
    action: CacheAction,
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long, default_value = "2")]
    m: String,
    #[arg(long, default_value = "2")]
    n: String,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Defaults to VERIFY_CACHE_DIR, then `.verify-cache`
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

fn run(args: &RunArgs) -> Result<bool, CliError> {
    let cfg = SuiteConfig::resolve(args)?;
    let outcomes = iwahori_core::exec::with_workers(cfg.workers, || suites::run(&cfg))?;
    print!("{}", report::summary(&outcomes));
    for o in outcomes.iter().filter(|o| !o.passed) {
        eprintln!("counterexample [{} {} {}]: {}", o.suite, o.check, o.params, o.counterexample.as_deref().unwrap_or("none recorded"));
    }
    if let Some(dir) = &cfg.out {
        report::write(dir, &cfg, &outcomes)?;
    }
    Ok(outcomes.iter().all(|o| o.passed))
}

fn digest(cache: &GroupCache) -> Result<String, CliError> {
    let mut h = Sha256::new();
    for e in cache.stat()? {
        let bytes = std::fs::read(cache.dir().join(&e.file)).map_err(|err| CliError::Config(err.to_string()))?;
        h.update(e.file.as_bytes());
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    Ok(hex::encode(h.finalize()))
}

fn cache(args: &CacheArgs) -> Result<bool, CliError> {
    let dir = cache_dir_from(args.cache_dir.clone()).unwrap_or_else(|| PathBuf::from(".verify-cache"));
    let cache = GroupCache::new(&dir);
    match args.action {
        CacheAction::Warm => {
            if args.budget == 0 {
                return Err(CliError::Config("budget must be positive".into()));
            }
            for n in parse_range(&args.n)? {
                for p in parse_range(&args.p)? {
                    for m in parse_range(&args.m)? {
                        let spec = GroupSpec::new(
                            u16::try_from(p).map_err(|_| CliError::Config(format!("p={p}")))?,
                            u32::try_from(m).map_err(|_| CliError::Config(format!("m={m}")))?,
                            usize::try_from(n).map_err(|_| CliError::Config(format!("n={n}")))?,
                        )?;
                        cache.warm(spec, args.budget)?;
                    }
                }
            }
        }
        CacheAction::Clear => {
            let removed = cache.clear()?;
            println!("removed {removed} files from {}", dir.display());
            return Ok(true);
        }
        CacheAction::Stat => {}
    }
    for e in cache.stat()? {
        let kind = serde_json::to_value(e.kind).expect("serialisable");
        println!("{}  {}  p={} m={} n={}  {} elements cached  {} bytes", e.file, kind.as_str().unwrap_or("?"), e.p, e.m, e.n, e.count, e.bytes);
    }
    println!("digest {}", digest(&cache)?);
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Cache(args) => cache(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
