//! Argument definitions and command dispatch.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mgonal::candidates::{
    candidate_table_5, enumerate_prefixes, remark21_specs, remark22_specs, sweep_counterexamples,
    UNRESOLVED_CANDIDATE,
};
use mgonal::escalate::{
    certifiable, escalate, gamma_empirical, gamma_prefixed, EscalationConfig, GammaResult,
    Universality,
};
use mgonal::lattice::{sweep_lemma33, LemmaPart};
use mgonal::theorems::{
    default_univ_bound, ell_plain, ell_r, fibonacci_coeffs, sweep_consecutive, verify_ell,
    verify_fib, verify_lem1, verify_main, Lemma35Case, RankResult, SweepBox,
};
use mgonal::{find_representation, MGonalForm, SearchConfig, VerificationReport};
use serde::Serialize;
use thiserror::Error;

use crate::cache::{Cache, CacheError};
use crate::output::{render_report, render_tuples, render_value, Format};
use crate::parse::{parse_coeffs, parse_list, parse_range, ParseError};

/// A comma-separated list as one argument value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct List(pub Vec<u64>);

fn coeff_list(s: &str) -> Result<List, ParseError> {
    parse_coeffs(s).map(List)
}

fn plain_list(s: &str) -> Result<List, ParseError> {
    parse_list(s).map(List)
}

/// Exit status for a completed command.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_FALSIFIED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] mgonal::Error),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("{0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            // a cache that disagrees with recomputation is a falsified claim
            CliError::Cache(CacheError::Mismatch { .. }) => EXIT_FALSIFIED,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mgonal",
    version,
    about = "Representations of integers by m-gonal forms"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every command.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Bitset cache file; nothing is cached without it.
    #[arg(long, global = true, env = "MGONAL_CACHE")]
    pub cache: Option<PathBuf>,
    /// Recompute every cache hit and fail on disagreement.
    #[arg(long, global = true)]
    pub verify_cache: bool,
    /// Print elapsed wall time to stderr.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct FormArgs {
    #[arg(long)]
    pub m: u64,
    /// Comma-separated nondecreasing positive coefficients.
    #[arg(long, value_parser = coeff_list)]
    pub coeffs: List,
}

impl FormArgs {
    fn form(&self) -> Result<MGonalForm, CliError> {
        Ok(MGonalForm::new(self.m, self.coeffs.0.clone())?)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a representation of N and print the witness.
    Represent {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        n: u64,
    },
    /// Check every integer up to the bound and report certification.
    CheckUniversal {
        #[command(flatten)]
        form: FormArgs,
        /// Default: max(100000, 50(m-2)).
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Smallest positive integer not represented, up to a limit.
    Truant {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 100_000)]
        limit: u64,
    },
    /// All escalator prefixes of a given length.
    Candidates {
        #[arg(long)]
        length: usize,
    },
    /// The 22 five-coefficient candidates.
    Table1,
    /// Largest truant of an escalation tree.
    Gamma {
        #[arg(long)]
        m: u64,
        #[arg(long, value_parser = coeff_list)]
        prefix: Option<List>,
        /// Leaves must represent [1, bound]. Default: 50(m-2).
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        max_nodes: Option<u64>,
        /// Print the whole tree as JSON instead of the summary.
        #[arg(long)]
        tree: bool,
    },
    /// Run a claim over a parameter box and write a report.
    Verify(VerifyArgs),
    /// Minimal universal rank of the all-ones form or its r-variant.
    Ell {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Universality of <F_1, .., F_n>_m.
    Fib {
        #[arg(long)]
        m: u64,
        /// Default: least n >= 5 with F_1 + .. + F_n >= m - 4.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        bound: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Lemma33,
    Lem1,
    Prop31,
    Remark21,
    Remark22,
    Main,
    Ell,
    Fib,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub claim: Claim,
    /// Orders, `lo..hi` inclusive or a single value.
    #[arg(long, value_parser = parse_range)]
    pub m: Option<RangeInclusive<u64>>,
    /// Values of A for the target classes A(m-2)+B.
    #[arg(long, value_parser = parse_range)]
    pub a: Option<RangeInclusive<u64>>,
    /// Five-coefficient tuple for `main` (default: all 22).
    #[arg(long, value_parser = coeff_list)]
    pub tuple: Option<List>,
    /// Lemma parts for `lemma33` (1..8) or cases for `lem1` (1..3).
    #[arg(long, value_parser = plain_list)]
    pub part: Option<List>,
    /// Values of r for `ell`; omitted means the all-ones form.
    #[arg(long, value_parser = plain_list)]
    pub r: Option<List>,
    /// Largest N for `prop31`.
    #[arg(long, default_value_t = 200)]
    pub n: u64,
    /// Random tails per cell for `main` and `prop31`.
    #[arg(long, default_value_t = 4)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emptiness bound for sampled forms (`main`) or rank checks (`ell`, `fib`).
    #[arg(long)]
    pub bound: Option<u64>,
    /// Report file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Ctx<'a> {
    config: &'a RunConfig,
    cache: Option<Cache>,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn range(&self, form: &MGonalForm, lo: u64, hi: u64) -> Result<mgonal::RangeBits, CliError> {
        Ok(match &self.cache {
            Some(c) => c.range(form, lo, hi)?,
            None => mgonal::represents_range(form, lo, hi)?,
        })
    }

    fn emit(&mut self, s: &str) -> Result<(), CliError> {
        self.out.write_all(s.as_bytes())?;
        Ok(())
    }
}

fn join(xs: &[impl ToString]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Serialize)]
struct RepresentOut {
    m: u64,
    coeffs: Vec<u64>,
    n: u64,
    represented: bool,
    witness: Option<Vec<i64>>,
}

#[derive(Serialize)]
struct UniversalOut {
    m: u64,
    coeffs: Vec<u64>,
    #[serde(flatten)]
    status: Universality,
}

#[derive(Serialize)]
struct TruantOut {
    m: u64,
    coeffs: Vec<u64>,
    limit: u64,
    truant: Option<u64>,
}

#[derive(Serialize)]
struct GammaOut {
    m: u64,
    prefix: Vec<u64>,
    #[serde(flatten)]
    result: GammaResult,
}

#[derive(Serialize)]
struct RankOut {
    m: u64,
    r: Option<u64>,
    rank: usize,
    miss_below: Option<u64>,
    #[serde(flatten)]
    status: Universality,
}

#[derive(Serialize)]
struct FibOut {
    m: u64,
    n: usize,
    coeff_sum: u64,
    covered: bool,
    #[serde(flatten)]
    status: Option<Universality>,
}

fn universality_text(u: &Universality) -> String {
    match u {
        Universality::Certified { checked_to } => {
            format!("universal-certified (checked to {checked_to})")
        }
        Universality::Empirical { checked_to } => {
            format!("universal-empirical (checked to {checked_to})")
        }
        Universality::Open { first_miss } => format!("open, miss {first_miss}"),
    }
}

fn classify(ctx: &Ctx, form: &MGonalForm, bound: u64) -> Result<Universality, CliError> {
    let limit = bound.max(form.order().saturating_sub(4));
    let bits = ctx.range(form, 0, limit)?;
    Ok(match bits.bits.first_clear_from(1) {
        Some(first_miss) => Universality::Open { first_miss },
        None if certifiable(form.order(), form.coeffs()) => {
            Universality::Certified { checked_to: limit }
        }
        None => Universality::Empirical { checked_to: limit },
    })
}

fn exit_for(u: &Universality) -> u8 {
    if u.is_universal() {
        EXIT_PASS
    } else {
        EXIT_FALSIFIED
    }
}

/// Runs one command, writing its output to `out`. Returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    let start = Instant::now();
    let cache = match &cli.config.cache {
        Some(p) => Some(Cache::open(p, cli.config.verify_cache)?),
        None => None,
    };
    let mut ctx = Ctx {
        config: &cli.config,
        cache,
        out,
    };
    let code = dispatch(&cli.command, &mut ctx)?;
    if let Some(c) = ctx.cache.as_mut() {
        c.flush()?;
    }
    if ctx.config.timing {
        eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    }
    Ok(code)
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<u8, CliError> {
    let format = ctx.config.format;
    match cmd {
        Command::Represent { form, n } => {
            let f = form.form()?;
            let found = find_representation(&f, *n, &SearchConfig::unlimited())?;
            let witness = found.map(|r| r.into_inner());
            let text = match &witness {
                Some(xs) => format!("{n} = {f} at x = ({})", join(xs)),
                None => format!("not represented: {n} by {f}"),
            };
            let code = if witness.is_some() {
                EXIT_PASS
            } else {
                EXIT_FALSIFIED
            };
            let v = RepresentOut {
                m: f.order(),
                coeffs: f.coeffs().to_vec(),
                n: *n,
                represented: witness.is_some(),
                witness,
            };
            ctx.emit(&render_value(&v, &text, format))?;
            Ok(code)
        }
        Command::CheckUniversal { form, bound } => {
            let f = form.form()?;
            let bound = bound.unwrap_or_else(|| default_univ_bound(f.order()));
            if bound == 0 {
                return Err(CliError::Usage("bound must be positive".into()));
            }
            let status = classify(ctx, &f, bound)?;
            let text = format!("{f}: {}", universality_text(&status));
            let v = UniversalOut {
                m: f.order(),
                coeffs: f.coeffs().to_vec(),
                status,
            };
            ctx.emit(&render_value(&v, &text, format))?;
            Ok(exit_for(&status))
        }
        Command::Truant { form, limit } => {
            let f = form.form()?;
            if *limit == 0 {
                return Err(CliError::Usage("limit must be positive".into()));
            }
            let truant = ctx.range(&f, 0, *limit)?.bits.first_clear_from(1);
            let text = match truant {
                Some(t) => format!("{f}: truant {t}"),
                None => format!("{f}: no truant up to {limit}"),
            };
            let v = TruantOut {
                m: f.order(),
                coeffs: f.coeffs().to_vec(),
                limit: *limit,
                truant,
            };
            ctx.emit(&render_value(&v, &text, format))?;
            Ok(EXIT_PASS)
        }
        Command::Candidates { length } => {
            if *length == 0 {
                return Err(CliError::Usage("length must be positive".into()));
            }
            let rows: Vec<Vec<u64>> = enumerate_prefixes(*length)
                .into_iter()
                .map(Vec::from)
                .collect();
            ctx.emit(&render_tuples(&rows, format))?;
            Ok(EXIT_PASS)
        }
        Command::Table1 => {
            let rows: Vec<Vec<u64>> = candidate_table_5().into_iter().map(Vec::from).collect();
            ctx.emit(&render_tuples(&rows, format))?;
            Ok(EXIT_PASS)
        }
        Command::Gamma {
            m,
            prefix,
            bound,
            depth,
            max_nodes,
            tree,
        } => {
            let base = match prefix {
                Some(_) => EscalationConfig::for_prefix(*m),
                None => EscalationConfig::for_order(*m),
            };
            let cfg = EscalationConfig {
                univ_bound: bound.unwrap_or(base.univ_bound),
                max_depth: depth.unwrap_or(base.max_depth),
                max_nodes: max_nodes.unwrap_or(base.max_nodes),
            };
            let prefix = prefix.clone().map(|l| l.0).unwrap_or_default();
            if *tree {
                let root = escalate(*m, &prefix, &cfg)?;
                let mut s = serde_json::to_string_pretty(&root).expect("trees serialize");
                s.push('\n');
                ctx.emit(&s)?;
                return Ok(EXIT_PASS);
            }
            let result = if prefix.is_empty() {
                gamma_empirical(*m, &cfg)?
            } else {
                gamma_prefixed(*m, &prefix, &cfg)?
            };
            let status = serde_json::to_value(result.status).expect("status serializes");
            let text = format!(
                "{} {} (nodes {}, open leaves {}, bound {})",
                result.value,
                status.as_str().unwrap_or_default(),
                result.nodes,
                result.open_leaves,
                result.univ_bound
            );
            ctx.emit(&render_value(
                &GammaOut {
                    m: *m,
                    prefix,
                    result,
                },
                &text,
                format,
            ))?;
            Ok(EXIT_PASS)
        }
        Command::Verify(args) => verify(args, ctx),
        Command::Ell { m, r, bound } => {
            let bound = bound.unwrap_or_else(|| default_univ_bound(*m));
            let res: RankResult = match r {
                Some(r) => ell_r(*m, *r, bound)?,
                None => ell_plain(*m, bound)?,
            };
            let text = format!(
                "rank {} ({}){}",
                res.rank,
                universality_text(&res.status),
                res.miss_below
                    .map(|t| format!(", rank {} misses {t}", res.rank - 1))
                    .unwrap_or_default()
            );
            let v = RankOut {
                m: *m,
                r: *r,
                rank: res.rank,
                miss_below: res.miss_below,
                status: res.status,
            };
            ctx.emit(&render_value(&v, &text, format))?;
            Ok(exit_for(&res.status))
        }
        Command::Fib { m, n, bound } => {
            let n = match n {
                Some(n) if *n < 5 => return Err(CliError::Usage("n must be at least 5".into())),
                Some(n) => *n,
                None => {
                    let mut n = 5;
                    while fibonacci_coeffs(n)?.iter().sum::<u64>() + 4 < *m {
                        n += 1;
                    }
                    n
                }
            };
            let coeffs = fibonacci_coeffs(n)?;
            let sum: u64 = coeffs.iter().sum();
            let f = MGonalForm::new(*m, coeffs)?;
            let covered = sum + 4 >= *m;
            let bound = bound.unwrap_or_else(|| default_univ_bound(*m));
            let status = if covered {
                Some(classify(ctx, &f, bound)?)
            } else {
                None
            };
            let text = match &status {
                Some(s) => format!("{f}: {}", universality_text(s)),
                None => format!("{f}: coefficient sum {sum} < m-4, not covered"),
            };
            let code = status.as_ref().map_or(EXIT_PASS, exit_for);
            let v = FibOut {
                m: *m,
                n,
                coeff_sum: sum,
                covered,
                status,
            };
            ctx.emit(&render_value(&v, &text, format))?;
            Ok(code)
        }
    }
}

fn verify(args: &VerifyArgs, ctx: &mut Ctx) -> Result<u8, CliError> {
    let ms = |default: RangeInclusive<u64>| args.m.clone().unwrap_or(default);
    let as_ = args.a.clone().unwrap_or(0..=12);
    let report = match args.claim {
        Claim::Lemma33 => {
            let parts = match &args.part {
                None => LemmaPart::ALL.to_vec(),
                Some(ps) => {
                    ps.0.iter()
                        .map(|&k| {
                            u8::try_from(k)
                                .ok()
                                .and_then(LemmaPart::from_number)
                                .ok_or_else(|| CliError::Usage(format!("no lemma part {k}")))
                        })
                        .collect::<Result<_, _>>()?
                }
            };
            sweep_lemma33(&parts, ms(9..=30), as_)?
        }
        Claim::Lem1 => {
            let cases = match &args.part {
                None => vec![1, 2, 3],
                Some(ps) => ps.0.clone(),
            };
            let mut parts = Vec::new();
            for k in cases {
                let case = u8::try_from(k)
                    .ok()
                    .and_then(Lemma35Case::from_number)
                    .ok_or_else(|| CliError::Usage(format!("no case {k}")))?;
                parts.push(verify_lem1(case, ms(9..=30), as_.clone())?);
            }
            VerificationReport::merge("lem1", parts)
        }
        Claim::Prop31 => {
            let mut b = SweepBox::new(ms(9..=40), as_)?;
            b.samples = args.samples;
            b.seed = args.seed;
            sweep_consecutive(&b, args.n)?
        }
        Claim::Remark21 => sweep_counterexamples("remark21", &remark21_specs(), ms(12..=60))?,
        Claim::Remark22 => sweep_counterexamples("remark22", &remark22_specs(), ms(36..=112))?,
        Claim::Main => {
            let mut b = SweepBox::new(ms(9..=40), as_)?;
            b.samples = args.samples;
            b.seed = args.seed;
            let bound = args.bound.unwrap_or(10_000);
            let tuples: Vec<Vec<u64>> = match &args.tuple {
                Some(t) => vec![t.0.clone()],
                None => candidate_table_5().into_iter().map(Vec::from).collect(),
            };
            let mut parts = Vec::new();
            for t in &tuples {
                parts.push(verify_main(t, &b, bound)?);
            }
            match parts.len() {
                1 => parts.pop().expect("one part"),
                _ => {
                    let claim = if tuples.iter().any(|t| t == &UNRESOLVED_CANDIDATE) {
                        "main (all candidates)"
                    } else {
                        "main"
                    };
                    VerificationReport::merge(claim, parts).with_seed(args.seed)
                }
            }
        }
        Claim::Ell => verify_ell(
            ms(3..=20),
            args.r.as_ref().map_or(&[][..], |l| &l.0[..]),
            args.bound,
        )?,
        Claim::Fib => verify_fib(ms(10..=40), args.bound)?,
    };
    let rendered = render_report(&report, ctx.config.format);
    match &args.out {
        Some(path) => {
            std::fs::write(path, &rendered)?;
            let summary = render_report(&report, Format::Text);
            ctx.emit(summary.lines().next().unwrap_or_default())?;
            ctx.emit("\n")?;
        }
        None => ctx.emit(&rendered)?,
    }
    Ok(if report.pass {
        EXIT_PASS
    } else {
        EXIT_FALSIFIED
    })
}
