//! Suite runners: each returns one outcome per certificate, in a fixed order.

use iwahori_core::affine_weyl::word_consistency_sweep;
use iwahori_core::apartment::{acyclicity_sweep, Truncation};
use iwahori_core::assembly::{certify, AssemblyOptions, MasterCertificate};
use iwahori_core::certificate::Certificate;
use iwahori_core::convexity;
use iwahori_core::exec::ExecMode;
use iwahori_core::hecke::factorization_sweep;
use iwahori_core::residue::lemmas;
use iwahori_core::residue::{permutation_module, GroupCache, GroupSpec, ResidueContext};
use serde::Serialize;
use serde_json::Value;

use crate::config::{Lemma, Suite, SuiteConfig};
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub suite: &'static str,
    pub check: String,
    pub params: String,
    pub passed: bool,
    pub cases: u64,
    pub failures: u64,
    pub counterexample: Option<String>,
    pub certificate: Value,
}

fn params_text(params: &serde_json::Map<String, Value>) -> String {
    params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

impl Outcome {
    fn from_certificate(suite: Suite, cert: Certificate) -> Self {
        let params = params_text(&cert.params.clone().into_iter().collect());
        Outcome {
            suite: suite.name(),
            check: cert.check.clone(),
            params,
            passed: cert.passed(),
            cases: cert.cases,
            failures: cert.failures,
            counterexample: cert.first_counterexample.clone(),
            certificate: serde_json::to_value(&cert).expect("serialisable"),
        }
    }

    fn from_master(cert: MasterCertificate) -> Self {
        let cases = cert.checks.iter().map(|c| c.cases).sum();
        let failures = cert.checks.iter().map(|c| c.failures).sum();
        let counterexample = cert.checks.iter().find_map(|c| c.first_counterexample.clone());
        Outcome {
            suite: Suite::Assembly.name(),
            check: "invariant_complex".into(),
            params: format!("n={} p={} m={} radius={}", cert.n, cert.p, cert.m, cert.radius),
            passed: cert.passed,
            cases,
            failures,
            counterexample,
            certificate: serde_json::to_value(&cert).expect("serialisable"),
        }
    }
}

fn context(cfg: &SuiteConfig, spec: GroupSpec) -> Result<ResidueContext, CliError> {
    let group = match &cfg.cache_dir {
        Some(dir) => GroupCache::new(dir).group(spec, cfg.budget)?,
        None => iwahori_core::residue::FiniteGroup::gl(spec, cfg.budget)?,
    };
    Ok(ResidueContext::from_group(group)?)
}

fn grid(cfg: &SuiteConfig) -> Result<Vec<GroupSpec>, CliError> {
    let mut out = Vec::new();
    for &n in &cfg.n {
        for &p in &cfg.p {
            for &m in &cfg.m {
                out.push(GroupSpec::new(p, m, n)?);
            }
        }
    }
    Ok(out)
}

const MODE: ExecMode = ExecMode::Parallel;

pub fn run(cfg: &SuiteConfig) -> Result<Vec<Outcome>, CliError> {
    let mut out = Vec::new();
    for suite in cfg.suite.expand() {
        let certs = match suite {
            Suite::Weyl => weyl(cfg)?,
            Suite::Apartment => apartment(cfg)?,
            Suite::Convexity => convexity_suite(cfg),
            Suite::Hecke => hecke(cfg)?,
            Suite::Residue => residue(cfg)?,
            Suite::Assembly => {
                out.extend(assembly(cfg)?.into_iter().map(Outcome::from_master));
                continue;
            }
            Suite::All => unreachable!("expanded"),
        };
        out.extend(certs.into_iter().map(|c| Outcome::from_certificate(suite, c)));
    }
    Ok(out)
}

fn weyl(cfg: &SuiteConfig) -> Result<Vec<Certificate>, CliError> {
    cfg.n.iter().map(|&n| Ok(word_consistency_sweep(n, cfg.length_bound)?)).collect()
}

fn apartment(cfg: &SuiteConfig) -> Result<Vec<Certificate>, CliError> {
    cfg.n
        .iter()
        .map(|&n| {
            let radius = cfg.lmax.min(if n >= 4 { 2 } else { 3 });
            Ok(acyclicity_sweep(n, radius, 4, cfg.orientation(), MODE)?)
        })
        .collect()
}

fn convexity_suite(cfg: &SuiteConfig) -> Vec<Certificate> {
    let mut out = Vec::new();
    for &n in &cfg.n {
        let len = cfg.length_bound;
        out.push(convexity::projection_uniqueness_ball_sweep(n, len, MODE));
        out.push(convexity::gate_property_ball_sweep(n, len, MODE));
        out.push(convexity::root_dichotomy_ball_sweep(n, len.min(4), MODE));
        let t = Truncation::enumerate(n, cfg.lmax).expect("validated rank");
        out.push(convexity::projection_uniqueness_sweep(&t, MODE));
        out.push(convexity::gate_property_sweep(&t, MODE));
        out.push(convexity::segment_sweep(&t, 8, cfg.seed, MODE));
        out.push(convexity::root_dichotomy_sweep(&t, MODE));
    }
    out
}

fn hecke(cfg: &SuiteConfig) -> Result<Vec<Certificate>, CliError> {
    let mut out = Vec::new();
    for &n in &cfg.n {
        out.push(factorization_sweep(n, cfg.length_bound, MODE));
    }
    for &n in cfg.n.iter().filter(|&&n| n <= 3) {
        for &p in &cfg.p {
            let ctx = context(cfg, GroupSpec::new(p, 1, n)?)?;
            out.push(lemmas::hecke_oracle_sweep(&ctx, cfg.length_bound.min(4))?);
        }
    }
    Ok(out)
}

fn wants(cfg: &SuiteConfig, lemma: Lemma) -> bool {
    cfg.lemma.is_none_or(|l| l == lemma)
}

fn residue(cfg: &SuiteConfig) -> Result<Vec<Certificate>, CliError> {
    let mut out = Vec::new();
    let needs_groups = [Lemma::LocalGeneration, Lemma::Intersection, Lemma::Projection, Lemma::Factorization, Lemma::Generation, Lemma::Oracle]
        .iter()
        .any(|&l| wants(cfg, l));
    if needs_groups {
        for spec in grid(cfg)? {
            let ctx = context(cfg, spec)?;
            if wants(cfg, Lemma::LocalGeneration) {
                out.push(lemmas::local_generation_sweep(&ctx, cfg.length_bound, MODE));
            }
            if wants(cfg, Lemma::Intersection) {
                let t = Truncation::enumerate(spec.n, cfg.lmax.min(i64::from(spec.m)))?;
                out.push(lemmas::intersection_factorization_sweep(&ctx, t.chambers(), MODE));
            }
            if wants(cfg, Lemma::Factorization) && spec.n == 2 {
                out.push(lemmas::factorization_routes_sweep(&ctx, cfg.length_bound, MODE));
            }
            if wants(cfg, Lemma::Projection) || wants(cfg, Lemma::Generation) {
                let v = permutation_module(ctx.group(), ctx.iwahori(), cfg.budget)?;
                if wants(cfg, Lemma::Projection) {
                    out.push(lemmas::projection_isomorphism_sweep(&ctx, &v, cfg.length_bound, MODE));
                }
                if wants(cfg, Lemma::Generation) {
                    out.push(lemmas::generation_sweep(&ctx, &v)?);
                }
            }
            if wants(cfg, Lemma::Oracle) && spec.m == 1 {
                out.push(lemmas::hecke_oracle_sweep(&ctx, cfg.length_bound.min(4))?);
            }
        }
    }
    if wants(cfg, Lemma::Pairing) {
        let cases: Vec<(u16, usize)> = cfg.qvals().iter().flat_map(|&q| cfg.n.iter().map(move |&n| (q, n))).collect();
        out.push(lemmas::pairing_sweep(&cases, cfg.constant(), cfg.budget)?);
    }
    Ok(out)
}

fn assembly(cfg: &SuiteConfig) -> Result<Vec<MasterCertificate>, CliError> {
    let mut out = Vec::new();
    for spec in grid(cfg)? {
        let radius = cfg.lmax.min(i64::from(spec.m) - 1);
        if radius < 1 {
            return Err(CliError::Config(format!("the assembly suite needs m >= 2 (got m={})", spec.m)));
        }
        let ctx = context(cfg, spec)?;
        let v = permutation_module(ctx.group(), ctx.iwahori(), cfg.budget)?;
        let t = Truncation::enumerate(spec.n, radius)?;
        let options = AssemblyOptions { orientation: cfg.orientation(), seed: cfg.seed, twist_representatives: false, mode: MODE };
        out.push(certify(&ctx, &v, &t, &options, true)?);
    }
    Ok(out)
}
