//! Run configuration: an optional TOML file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use iwahori_core::apartment::Orientation;
use iwahori_core::residue::lemmas::PairingConstant;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CACHE_ENV: &str = "VERIFY_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Weyl,
    Apartment,
    Convexity,
    Hecke,
    Residue,
    Assembly,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Weyl, Suite::Apartment, Suite::Convexity, Suite::Hecke, Suite::Residue, Suite::Assembly],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Weyl => "weyl",
            Suite::Apartment => "apartment",
            Suite::Convexity => "convexity",
            Suite::Hecke => "hecke",
            Suite::Residue => "residue",
            Suite::Assembly => "assembly",
            Suite::All => "all",
        }
    }
}

/// Restricts the residue suite to one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma {
    /// local Iwahori generation around faces of the base chamber
    #[value(name = "6")]
    #[serde(rename = "6")]
    LocalGeneration,
    /// intersection factorisation of chamber Iwahoris
    #[value(name = "7")]
    #[serde(rename = "7")]
    Intersection,
    /// projection isomorphism between fixed spaces
    #[value(name = "8")]
    #[serde(rename = "8")]
    Projection,
    /// idempotent factorisation by convolution
    #[value(name = "9")]
    #[serde(rename = "9")]
    Factorization,
    /// explicit two-chamber identity
    #[value(name = "10")]
    #[serde(rename = "10")]
    Pairing,
    /// generation of radical-fixed vectors
    Generation,
    /// Hecke products against Bruhat-cell convolution
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantChoice {
    /// q(q-1)^N, as printed
    Transcribed,
    /// q
    Corrected,
}

/// Planted defects for checking that the suites can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    Incidence,
    PairingConstant,
}

#[derive(Args, Debug, Default, Clone)]
pub struct RunArgs {
    /// TOML file with the same keys as the flags (flags win)
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Ranks: a value, a list `2,3` or an inclusive range `2..3`
    #[arg(long)]
    pub n: Option<String>,
    /// Residue characteristics
    #[arg(long)]
    pub p: Option<String>,
    /// Congruence depths
    #[arg(long)]
    pub m: Option<String>,
    /// Largest truncation radius
    #[arg(long)]
    pub lmax: Option<i64>,
    /// Residue field sizes for the two-chamber identity (defaults to --p)
    #[arg(long)]
    pub qval: Option<String>,
    /// Largest Coxeter length in word and chamber sweeps
    #[arg(long)]
    pub length_bound: Option<usize>,
    /// Largest group enumerated
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Directory for certificates and the summary
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Persisted group enumerations (also VERIFY_CACHE_DIR)
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub lemma: Option<Lemma>,
    #[arg(long, value_enum)]
    pub pairing_constant: Option<ConstantChoice>,
    #[arg(long, value_enum, hide = true)]
    pub mutate: Option<Mutation>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum RangeValue {
    One(i64),
    List(Vec<i64>),
    Text(String),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    suite: Option<Suite>,
    n: Option<RangeValue>,
    p: Option<RangeValue>,
    m: Option<RangeValue>,
    lmax: Option<i64>,
    qval: Option<RangeValue>,
    length_bound: Option<usize>,
    budget: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
    out: Option<PathBuf>,
    cache_dir: Option<PathBuf>,
    lemma: Option<Lemma>,
    pairing_constant: Option<ConstantChoice>,
}

/// Fully resolved and validated configuration.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n: Vec<usize>,
    pub p: Vec<u16>,
    pub m: Vec<u32>,
    pub lmax: i64,
    pub qval: Option<Vec<u16>>,
    pub length_bound: usize,
    pub budget: u64,
    pub seed: u64,
    pub lemma: Option<Lemma>,
    pub pairing_constant: ConstantChoice,
    pub mutation: Option<Mutation>,
    #[serde(skip)]
    pub workers: Option<usize>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn orientation(&self) -> Orientation {
        match self.mutation {
            Some(Mutation::Incidence) => Orientation::Unsigned,
            _ => Orientation::TypeOrder,
        }
    }

    pub fn constant(&self) -> PairingConstant {
        match (self.mutation, self.pairing_constant) {
            (Some(Mutation::PairingConstant), _) => PairingConstant::Mutated,
            (_, ConstantChoice::Transcribed) => PairingConstant::Transcribed,
            (_, ConstantChoice::Corrected) => PairingConstant::Corrected,
        }
    }

    /// Field sizes for the two-chamber identity.
    pub fn qvals(&self) -> Vec<u16> {
        self.qval.clone().unwrap_or_else(|| self.p.clone())
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// `"3"`, `"2,3"`, `"1..3"` (inclusive).
pub fn parse_range(text: &str) -> Result<Vec<i64>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: i64 = a.trim().parse().map_err(|_| invalid(format!("bad range bound in {part:?}")))?;
            let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| invalid(format!("bad range bound in {part:?}")))?;
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| invalid(format!("not an integer: {part:?}")))?);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(invalid(format!("empty parameter range {text:?}")));
    }
    Ok(out)
}

fn resolve_range(name: &str, flag: &Option<String>, file: &Option<RangeValue>, default: &[i64]) -> Result<Vec<i64>, CliError> {
    let values = match (flag, file) {
        (Some(text), _) => parse_range(text)?,
        (None, Some(RangeValue::One(x))) => vec![*x],
        (None, Some(RangeValue::List(xs))) => {
            let mut xs = xs.clone();
            xs.sort_unstable();
            xs.dedup();
            xs
        }
        (None, Some(RangeValue::Text(t))) => parse_range(t)?,
        (None, None) => default.to_vec(),
    };
    if values.is_empty() {
        return Err(invalid(format!("empty parameter range for {name}")));
    }
    Ok(values)
}

fn within<T: Copy + TryFrom<i64>>(name: &str, values: &[i64], allowed: &[i64]) -> Result<Vec<T>, CliError> {
    values
        .iter()
        .map(|v| {
            if !allowed.contains(v) {
                return Err(invalid(format!("{name}={v} is outside {allowed:?}")));
            }
            T::try_from(*v).map_err(|_| invalid(format!("{name}={v} does not fit")))
        })
        .collect()
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn cache_dir_from(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
}

impl SuiteConfig {
    pub fn resolve(args: &RunArgs) -> Result<SuiteConfig, CliError> {
        let file = match &args.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        let suite = args.suite.or(file.suite).unwrap_or(Suite::All);
        let n = within::<usize>("n", &resolve_range("n", &args.n, &file.n, &[2, 3])?, &[2, 3, 4])?;
        let p = within::<u16>("p", &resolve_range("p", &args.p, &file.p, &[2])?, &[2, 3, 5])?;
        let m = within::<u32>("m", &resolve_range("m", &args.m, &file.m, &[2])?, &[1, 2, 3])?;
        let qval = match (&args.qval, &file.qval) {
            (None, None) => None,
            _ => Some(within::<u16>("qval", &resolve_range("qval", &args.qval, &file.qval, &[])?, &[2, 3, 5, 7])?),
        };
        let lmax = args.lmax.or(file.lmax).unwrap_or(2);
        if !(1..=3).contains(&lmax) {
            return Err(invalid(format!("lmax={lmax} is outside 1..=3")));
        }
        let length_bound = args.length_bound.or(file.length_bound).unwrap_or(4);
        if !(1..=8).contains(&length_bound) {
            return Err(invalid(format!("length-bound={length_bound} is outside 1..=8")));
        }
        let budget = args.budget.or(file.budget).unwrap_or(iwahori_core::residue::DEFAULT_BUDGET);
        if budget == 0 {
            return Err(invalid("budget must be positive"));
        }
        let workers = args.workers.or(file.workers);
        if workers == Some(0) {
            return Err(invalid("workers must be positive"));
        }
        let uses_groups = suite.expand().iter().any(|s| matches!(s, Suite::Residue | Suite::Assembly));
        if uses_groups && n.contains(&4) {
            return Err(invalid("rank 4 is only available for the weyl, apartment and convexity suites"));
        }
        Ok(SuiteConfig {
            suite,
            n,
            p,
            m,
            lmax,
            qval,
            length_bound,
            budget,
            seed: args.seed.or(file.seed).unwrap_or(0),
            lemma: args.lemma.or(file.lemma),
            pairing_constant: args.pairing_constant.or(file.pairing_constant).unwrap_or(ConstantChoice::Transcribed),
            mutation: args.mutate,
            workers,
            out: args.out.clone().or(file.out),
            cache_dir: cache_dir_from(args.cache_dir.clone().or(file.cache_dir)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        assert_eq!(parse_range("3, 2,3").unwrap(), vec![2, 3]);
        assert_eq!(parse_range("1..3").unwrap(), vec![1, 2, 3]);
        assert!(parse_range("3..2").is_err());
        assert!(parse_range("").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "suite = \"hecke\"\nn = [2, 3]\nlmax = 1\nlemma = \"10\"\n").unwrap();
        let args = RunArgs { config: Some(path.clone()), n: Some("2".into()), ..Default::default() };
        let cfg = SuiteConfig::resolve(&args).unwrap();
        assert_eq!(cfg.suite, Suite::Hecke);
        assert_eq!(cfg.n, vec![2]);
        assert_eq!(cfg.lmax, 1);
        assert_eq!(cfg.lemma, Some(Lemma::Pairing));
        std::fs::write(&path, "colour = 3\n").unwrap();
        assert!(SuiteConfig::resolve(&RunArgs { config: Some(path), ..Default::default() }).is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = |args: RunArgs| SuiteConfig::resolve(&args).is_err();
        assert!(bad(RunArgs { p: Some("4".into()), ..Default::default() }));
        assert!(bad(RunArgs { m: Some("4".into()), ..Default::default() }));
        assert!(bad(RunArgs { budget: Some(0), ..Default::default() }));
        assert!(bad(RunArgs { n: Some("4".into()), suite: Some(Suite::Residue), ..Default::default() }));
        assert!(!bad(RunArgs { n: Some("4".into()), suite: Some(Suite::Apartment), ..Default::default() }));
    }
}
