use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, ValueEnum};
use log::{info, warn};
use theta_lab::cover::{verify_clique_cover, verify_representation, verify_theta_cover};
use theta_lab::exact::{cc_exact, independence_number, theta_exact, vartheta_exact, SolveLimits};
use theta_lab::gens::{
    gen_balanced_hard, gen_blowup_even, gen_linear_kpartite, gen_partial_steiner, gen_random_bounded, round_parameters,
};
use theta_lab::randcover::{balanced_cover, general_cover, BalancedConfig, GeneralConfig, Mode};
use theta_lab::{CliqueCover, CoverCertificate, Error, Hypergraph, SetRepresentation};

use crate::bounds::compute_bounds;
use crate::error::{CliError, CliResult};
use crate::experiment::{load_spec, run_experiment, write_file};
use crate::family::Family;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn load_instance(path: &Path) -> CliResult<Hypergraph> {
    Ok(Hypergraph::parse(&read(path)?)?.0)
}

fn required<T>(value: Option<T>, flag: &str, family: Family) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for family {}", family.as_str())))
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Base 2-graph for blowups.
    #[arg(long)]
    pub from: Option<PathBuf>,
    /// Blowup factor.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Lower n to the nearest size the family accepts.
    #[arg(long)]
    pub round: bool,
    /// Instance file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn header(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    let fam = args.family;
    let (g, meta) = match fam {
        Family::BalancedHard => {
            let (mut n, d, k) = (
                required(args.n, "n", fam)?,
                required(args.d, "d", fam)?,
                required(args.k, "k", fam)?,
            );
            if args.round {
                let rounded = round_parameters(n, d, k)?.0;
                if rounded != n {
                    info!("n rounded from {n} to {rounded}");
                }
                n = rounded;
            }
            let inst = gen_balanced_hard(n, d, k, args.seed)?;
            (inst.hypergraph, inst.metadata)
        }
        Family::Linear => {
            let (n, d, k) = (
                required(args.n, "n", fam)?,
                required(args.d, "d", fam)?,
                required(args.k, "k", fam)?,
            );
            if k == 0 || (n % k != 0 && !args.round) {
                return Err(CliError::Usage(format!(
                    "n = {n} must be a multiple of k = {k} (or pass --round)"
                )));
            }
            let inst = gen_linear_kpartite(n / k, d, k, args.seed)?;
            (inst.hypergraph, inst.metadata)
        }
        Family::Blowup => {
            let base = load_instance(&required(args.from.clone(), "from", fam)?)?;
            let inst = gen_blowup_even(&base, required(args.ell, "ell", fam)?)?;
            (inst.hypergraph, inst.metadata)
        }
        Family::Steiner => {
            let (n, k) = (required(args.n, "n", fam)?, required(args.k, "k", fam)?);
            let g = gen_partial_steiner(n, k, args.seed)?;
            let meta = header(&[
                ("generator", "steiner".into()),
                ("n", n.to_string()),
                ("k", k.to_string()),
                ("seed", args.seed.to_string()),
            ]);
            (g, meta)
        }
        Family::Random => {
            let (n, d, k) = (
                required(args.n, "n", fam)?,
                required(args.d, "d", fam)?,
                required(args.k, "k", fam)?,
            );
            let g = gen_random_bounded(n, d, k, args.seed)?;
            let meta = header(&[
                ("generator", "random".into()),
                ("n", n.to_string()),
                ("d", d.to_string()),
                ("k", k.to_string()),
                ("seed", args.seed.to_string()),
            ]);
            (g, meta)
        }
    };
    let text = g.to_text(&meta);
    match &args.out {
        Some(path) => {
            write_file(path, &text)?;
            println!("{}", g.fingerprint());
        }
        None => {
            print!("{text}");
            eprintln!("fingerprint {}", g.fingerprint());
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverAlg {
    Balanced,
    General,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub alg: CoverAlg,
    #[arg(long)]
    pub d: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draw trials until the complement is covered (default).
    #[arg(long, conflicts_with = "fixed_t")]
    pub adaptive: bool,
    /// Draw exactly the trial count of the upper bound.
    #[arg(long)]
    pub fixed_t: bool,
    /// Trial cap; default four times the bound in adaptive mode.
    #[arg(long)]
    pub t_cap: Option<u64>,
    /// Certificate file; default `<instance>.cert`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub const COVER_COLUMNS: &str = "n,d,k,alg,seed,t_achieved,bound,complete";

pub fn cmd_cover(args: &CoverArgs) -> CliResult<()> {
    let g = load_instance(&args.instance)?;
    let mode = if args.fixed_t { Mode::FixedT } else { Mode::Adaptive };
    let (alg, run) = match args.alg {
        CoverAlg::Balanced => (
            "balanced",
            balanced_cover(
                &g,
                &BalancedConfig {
                    d: args.d,
                    seed: args.seed,
                    t_cap: args.t_cap,
                    mode,
                },
            )?,
        ),
        CoverAlg::General => (
            "general",
            general_cover(
                &g,
                &GeneralConfig {
                    d: args.d,
                    seed: args.seed,
                    t_cap: args.t_cap,
                    mode,
                },
            )?,
        ),
    };
    let out = args.out.clone().unwrap_or_else(|| {
        let mut p = args.instance.clone().into_os_string();
        p.push(".cert");
        p.into()
    });
    write_file(&out, &run.certificate.to_text())?;
    if !run.complete {
        warn!(
            "{} complement k-sets left uncovered after {} trials",
            run.uncovered, run.trials
        );
    }
    println!("{COVER_COLUMNS}");
    println!(
        "{},{},{},{alg},{},{},{},{}",
        g.n(),
        args.d,
        g.k(),
        args.seed,
        run.trials,
        run.trial_bound,
        run.complete
    );
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArtifactKind {
    /// Certificates carry an `# instance=` line; otherwise `t n` marks a representation.
    Auto,
    Certificate,
    Representation,
    Cliques,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    pub artifact: PathBuf,
    #[arg(long, value_enum, default_value_t = ArtifactKind::Auto)]
    pub kind: ArtifactKind,
}

fn detect_kind(text: &str) -> ArtifactKind {
    if text.lines().any(|l| l.trim_start().starts_with("# instance=")) {
        return ArtifactKind::Certificate;
    }
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first.map(|l| l.split_whitespace().count()) {
        Some(2) => ArtifactKind::Representation,
        _ => ArtifactKind::Cliques,
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let g = load_instance(&args.instance)?;
    let text = read(&args.artifact)?;
    let kind = match args.kind {
        ArtifactKind::Auto => detect_kind(&text),
        k => k,
    };
    let verdict = match kind {
        ArtifactKind::Certificate => {
            let cert = CoverCertificate::parse(&text)?;
            if !cert.achieved_for.is_empty() && cert.achieved_for != g.fingerprint() {
                return Err(CliError::Invalid(format!(
                    "certificate was produced for instance {}, this instance is {}",
                    cert.achieved_for,
                    g.fingerprint()
                )));
            }
            for note in cert.lint() {
                warn!("{note}");
            }
            verify_theta_cover(&g, &cert)
        }
        ArtifactKind::Representation => verify_representation(&g, &SetRepresentation::parse(&text)?),
        _ => verify_clique_cover(&g, &CliqueCover::parse(&text)?),
    };
    match verdict {
        Ok(()) => {
            println!("valid");
            Ok(())
        }
        Err(v) => Err(CliError::Invalid(v.to_string())),
    }
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = SolveLimits::default().max_vertices)]
    pub max_vertices: usize,
    #[arg(long, default_value_t = SolveLimits::default().max_candidate_sets)]
    pub max_candidate_sets: usize,
    /// Seconds per solver call.
    #[arg(long, default_value_t = SolveLimits::default().time_budget.as_secs())]
    pub time_budget: u64,
}

fn tag(optimal: bool) -> &'static str {
    if optimal {
        ""
    } else {
        " (time budget reached; upper bound)"
    }
}

pub fn cmd_exact(args: &ExactArgs) -> CliResult<()> {
    let g = load_instance(&args.instance)?;
    let limits = SolveLimits {
        max_vertices: args.max_vertices,
        max_candidate_sets: args.max_candidate_sets,
        time_budget: Duration::from_secs(args.time_budget),
    };
    let theta = theta_exact(&g, &limits)?;
    let vartheta = vartheta_exact(&g, &limits)?;
    let alpha = independence_number(&g, &limits)?;
    let dual = cc_exact(&g.complement(), &limits)?;
    println!("theta={}{}", theta.value, tag(theta.optimal));
    println!("vartheta={}{}", vartheta.size, tag(vartheta.optimal));
    println!("alpha={}{}", alpha.value, tag(alpha.optimal));
    let both_optimal = dual.optimal && vartheta.optimal;
    if both_optimal && dual.size != vartheta.size {
        return Err(Error::OracleMismatch(format!(
            "theta(complement) = {} but vartheta = {}",
            dual.size, vartheta.size
        ))
        .into());
    }
    println!(
        "theta(complement)={} vartheta={} {}",
        dual.size,
        vartheta.size,
        if both_optimal { "ok" } else { "unchecked" }
    );
    Ok(())
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub spec: PathBuf,
    /// CSV path; overrides the spec.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Re-verify the certificate behind every completed row.
    #[arg(long)]
    pub paranoid: bool,
}

pub fn cmd_experiment(args: &ExperimentArgs) -> CliResult<()> {
    let (spec, spec_out, certificates) = load_spec(&args.spec)?;
    let out = args
        .out
        .clone()
        .or(spec_out)
        .ok_or_else(|| CliError::Usage("no output path: set `output` in the spec or pass --out".into()))?;
    let summary = run_experiment(&spec, &out, certificates, args.paranoid)?;
    eprintln!(
        "{} rows ({} resumed) -> {}",
        summary.rows,
        summary.resumed,
        out.display()
    );
    if !summary.audit_failures.is_empty() {
        for f in &summary.audit_failures {
            eprintln!("audit: {f}");
        }
        return Err(CliError::Invalid(format!(
            "{} rows failed re-verification",
            summary.audit_failures.len()
        )));
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub d: u64,
    #[arg(long)]
    pub k: u64,
    #[arg(long, requires = "t")]
    pub alpha: Option<u64>,
    #[arg(long, requires = "alpha")]
    pub t: Option<u64>,
}

pub fn cmd_bounds(args: &BoundsArgs) -> CliResult<()> {
    let r = compute_bounds(args.n, args.d, args.k, args.alpha, args.t)?;
    println!("upper_balanced={}", r.upper_balanced);
    println!("upper_general={}", r.upper_general);
    println!("lower_balanced_form={}", r.lower_balanced_form);
    println!("lower_even_form={}", r.lower_even_form);
    println!("steiner_lower_form={}", r.steiner_lower_form);
    if let Some(v) = r.log_f {
        println!("log_f={v}");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_detection() {
        assert_eq!(detect_kind("# instance=ab\n1\n0 1\n"), ArtifactKind::Certificate);
        assert_eq!(detect_kind("2 3\n0\n1\n0 1\n"), ArtifactKind::Representation);
        assert_eq!(detect_kind("1\n0 1 2\n"), ArtifactKind::Cliques);
    }
}
