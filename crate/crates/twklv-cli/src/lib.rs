//! Argument handling, output formats, caching and the self-check for the `twklv` binary.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use twklv::arthur::{AParameter, ArthurError, DatumKind, DatumSpec, Embedding};
use twklv::foundations::{lambda_templates, parse_lambda, validate_infchar, InfChar};
use twklv::hecke_klv::{compute_block, lambda_checks, BlockComputation, CheckOutcome, LambdaComputation};
use twklv::params::ParamSet;
use twklv::report::{self, KlvReport, SelfcheckReport};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Dot,
}

#[derive(Parser, Debug)]
#[command(name = "twklv", version, about = "Twisted KLV polynomials for GL_N(R) and Arthur packets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(clap::Args, Debug, Clone)]
pub struct LambdaArgs {
    /// rank; must match the length of λ when given
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// comma-separated rationals, e.g. 1/2,-1/2
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List every parameter at λ with lengths and block ids.
    Params(LambdaArgs),
    /// Block decomposition, untwisted by default.
    Blocks {
        #[command(flatten)]
        lam: LambdaArgs,
        #[arg(long)]
        twisted: bool,
    },
    /// KLV polynomials and transition matrices.
    Klv {
        #[command(flatten)]
        lam: LambdaArgs,
        /// restrict to one block id (see `blocks`)
        #[arg(long)]
        block: Option<usize>,
        /// with --block, pick from the twisted blocks
        #[arg(long)]
        twisted: bool,
        /// run the invariant suite on the computed blocks
        #[arg(long)]
        check: bool,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Stable virtual character of an A-parameter read from JSON ("-" for stdin).
    Packet {
        #[arg(long)]
        psi: String,
        /// datum kind; overrides the "datum" object in the file
        #[arg(long, value_enum)]
        datum: Option<DatumArg>,
        #[arg(long, value_enum)]
        embedding: Option<EmbeddingArg>,
    },
    /// Every check on every λ template up to --max-n.
    Selfcheck {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DatumArg {
    Simple1,
    Simple2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum EmbeddingArg {
    Split,
    Quasisplit,
}

/// What went wrong, with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(m: impl Into<String>) -> Self {
        CliError { code: 2, message: m.into() }
    }
    fn internal(m: impl Into<String>) -> Self {
        CliError { code: 4, message: m.into() }
    }
}

impl From<ArthurError> for CliError {
    fn from(e: ArthurError) -> Self {
        CliError {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

/// Standard output plus diagnostics and the exit code.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub const MAX_N: usize = 8;

pub fn infchar(a: &LambdaArgs) -> Result<InfChar, CliError> {
    let raw = parse_lambda(&a.lambda).ok_or_else(|| CliError::input(format!("cannot parse λ \"{}\"", a.lambda)))?;
    if let Some(n) = a.n {
        if n != raw.len() {
            return Err(CliError::input(format!("--N {} but λ has {} entries", n, raw.len())));
        }
    }
    if raw.len() > MAX_N {
        return Err(CliError::input(format!("N = {} exceeds the supported {}", raw.len(), MAX_N)));
    }
    validate_infchar(&raw).map_err(|e| CliError::input(e.to_string()))
}

/// Thread count from TWKLV_THREADS, if set.
pub fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var("TWKLV_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::input(format!("TWKLV_THREADS must be a positive integer, got \"{}\"", s))),
        },
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn no_dot(f: Format, what: &str) -> Result<(), CliError> {
    if f == Format::Dot {
        return Err(CliError::input(format!("{} has no dot output", what)));
    }
    Ok(())
}

fn engine_err(e: impl ToString) -> CliError {
    CliError::internal(e.to_string())
}

/// Blocks computed in parallel, collected in block order.
pub fn compute_all(lc: &InfChar) -> Result<LambdaComputation, CliError> {
    let params = ParamSet::new(lc).map_err(engine_err)?;
    let run = |bs: &[twklv::params::Block]| -> Result<Vec<BlockComputation>, CliError> {
        bs.par_iter().map(|b| compute_block(lc, b).map_err(engine_err)).collect()
    };
    let blocks = run(&params.blocks)?;
    let twisted_blocks = run(&params.twisted_blocks)?;
    Ok(LambdaComputation {
        params,
        blocks,
        twisted_blocks,
    })
}

pub fn cache_path(dir: &Path, lc: &InfChar) -> PathBuf {
    let key: String = lc
        .label()
        .chars()
        .map(|c| match c {
            '/' => 'o',
            ',' => '_',
            c => c,
        })
        .collect();
    dir.join(format!("klv-v{}-N{}-{}.json", report::CACHE_VERSION, lc.n(), key))
}

fn read_cache(path: &Path, lc: &InfChar) -> Option<KlvReport> {
    let text = fs::read_to_string(path).ok()?;
    let r: KlvReport = serde_json::from_str(&text).ok()?;
    r.matches(lc).then_some(r)
}

fn failures_text(outcomes: &[CheckOutcome]) -> (String, i32) {
    let mut s = String::new();
    let mut code = 0;
    for o in outcomes.iter().filter(|o| !o.ok) {
        let _ = writeln!(s, "{} violated at {}: {}", o.check.as_str(), o.scope, o.detail);
        let c = o.check.exit_code();
        code = if code == 0 { c } else { code.min(c) };
    }
    (s, code)
}

fn cmd_klv(
    lc: &InfChar,
    format: Format,
    block: Option<usize>,
    twisted: bool,
    check: bool,
    cache_dir: Option<&Path>,
) -> Result<Outcome, CliError> {
    no_dot(format, "klv")?;
    let path = cache_dir.map(|d| cache_path(d, lc));
    let cached = path.as_deref().and_then(|p| read_cache(p, lc));
    let mut out = Outcome::default();
    let full = match (&cached, check) {
        (Some(r), false) => r.clone(),
        _ => {
            let c = compute_all(lc)?;
            let fresh = report::klv_report(lc, &c);
            if check {
                let outcomes = lambda_checks(lc, &c);
                let (text, code) = failures_text(&outcomes);
                if code != 0 {
                    return Err(CliError { code, message: text });
                }
                let _ = writeln!(out.stderr, "check: {} outcomes, all hold", outcomes.len());
                if let Some(r) = &cached {
                    if *r != fresh {
                        return Err(CliError::internal("cached tables disagree with a fresh computation"));
                    }
                }
            }
            if let (Some(p), None) = (&path, &cached) {
                let dir = p.parent().expect("cache file has a parent");
                fs::create_dir_all(dir)
                    .and_then(|_| fs::write(p, json(&fresh)))
                    .map_err(|e| CliError::input(format!("cache {}: {}", p.display(), e)))?;
            }
            fresh
        }
    };
    let n_untwisted = full.blocks.iter().filter(|b| !b.twisted).count();
    let mut r = full;
    if let Some(id) = block {
        let pick = r.blocks.iter().position(|b| b.twisted == twisted && b.id == id);
        let Some(i) = pick else {
            let avail = if twisted { r.blocks.len() - n_untwisted } else { n_untwisted };
            return Err(CliError::input(format!(
                "no {} block {} (there are {})",
                if twisted { "twisted" } else { "untwisted" },
                id,
                avail
            )));
        };
        r.blocks = vec![r.blocks.swap_remove(i)];
    }
    out.stdout = match format {
        Format::Tsv => report::klv_tsv(&r),
        _ => json(&r),
    };
    Ok(out)
}

/// ψ file: the A-parameter, optionally with a "datum" object.
#[derive(Deserialize)]
struct PsiFile {
    #[serde(flatten)]
    psi: AParameter,
    datum: Option<DatumSpec>,
}

fn cmd_packet(
    path: &str,
    datum: Option<DatumArg>,
    embedding: Option<EmbeddingArg>,
    format: Format,
) -> Result<Outcome, CliError> {
    no_dot(format, "packet")?;
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::input(format!("stdin: {}", e)))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {}", path, e)))?
    };
    let file: PsiFile = serde_json::from_str(&text).map_err(|e| CliError::input(format!("ψ JSON: {}", e)))?;
    let psi = file.psi;
    psi.validate(false)?;
    let mut spec = match (file.datum, datum) {
        (_, Some(k)) => DatumSpec {
            kind: match k {
                DatumArg::Simple1 => DatumKind::Simple1,
                DatumArg::Simple2 => DatumKind::Simple2,
            },
            n: psi.dim(),
            embedding: Embedding::Split,
        },
        (Some(d), None) => d,
        (None, None) => return Err(CliError::input("no datum: pass --datum or put \"datum\" in the ψ file")),
    };
    if let Some(e) = embedding {
        spec.embedding = match e {
            EmbeddingArg::Split => Embedding::Split,
            EmbeddingArg::Quasisplit => Embedding::Quasisplit,
        };
    }
    let d = spec.resolve()?;
    let r = report::packet_report(&psi, &d)?;
    let stdout = match format {
        Format::Tsv => {
            let mut s = String::from("orbit\tgl_param\tcoeff\n");
            for t in &r.eta_ar {
                let _ = writeln!(s, "{}\t{}\t{}", t.orbit, t.gl_param, t.coeff);
            }
            s
        }
        _ => json(&r),
    };
    Ok(Outcome {
        stdout,
        ..Default::default()
    })
}

pub fn selfcheck(max_n: usize) -> Result<SelfcheckReport, CliError> {
    if max_n == 0 || max_n > MAX_N {
        return Err(CliError::input(format!("--max-n must be in 1..={}", MAX_N)));
    }
    let templates = lambda_templates(max_n);
    let per: Vec<_> = templates
        .par_iter()
        .map(|lc| report::selfcheck_lambda(lc).map_err(CliError::internal))
        .collect::<Result<_, _>>()?;
    Ok(report::assemble_selfcheck(max_n, per))
}

fn selfcheck_tsv(r: &SelfcheckReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "section\tsubject\tdetail\tok");
    for p in &r.param_counts {
        let _ = writeln!(
            s,
            "params\t{}\t{}/{} fixed {}/{}\t{}",
            p.lambda, p.engine, p.oracle, p.theta_fixed_engine, p.theta_fixed_oracle, p.ok
        );
    }
    for c in &r.invariants {
        let _ = writeln!(
            s,
            "invariant\t{} {}\t{} scopes {}\t{}",
            c.lambda,
            c.check,
            c.scopes,
            c.failures.join(" | "),
            c.failures.is_empty()
        );
    }
    for g in &r.signs {
        let _ = writeln!(s, "sign\t{} {}\t{}\t{}", g.lambda, g.param, g.sign, !r.sign_failures.iter().any(|f| f.starts_with(&format!("{} at {}:", g.param, g.lambda))));
    }
    for p in &r.packets {
        let _ = writeln!(s, "packet\t{} / {}\t{}\t{}", p.psi, p.datum, p.detail, p.ok);
    }
    let _ = writeln!(s, "total\tmax_n {}\t\t{}", r.max_n, r.ok);
    s
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    let f = cli.format;
    match cli.command {
        Command::Params(a) => {
            no_dot(f, "params")?;
            let lc = infchar(&a)?;
            let ps = ParamSet::new(&lc).map_err(engine_err)?;
            let r = report::params_report(&ps);
            let stdout = match f {
                Format::Tsv => {
                    let mut s = String::from("id\tparam\tlength\ttheta_length\ttheta_fixed\tblock\ttwisted_block\n");
                    for p in &r.params {
                        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
                        let _ = writeln!(
                            s,
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            p.id,
                            p.label,
                            p.length,
                            opt(p.theta_length.map(|v| v.to_string())),
                            p.theta_fixed,
                            p.block,
                            opt(p.twisted_block.map(|v| v.to_string()))
                        );
                    }
                    s
                }
                _ => json(&r),
            };
            Ok(Outcome {
                stdout,
                ..Default::default()
            })
        }
        Command::Blocks { lam, twisted } => {
            let lc = infchar(&lam)?;
            let ps = ParamSet::new(&lc).map_err(engine_err)?;
            let stdout = match f {
                Format::Dot => ps.to_dot(twisted),
                Format::Json => json(&report::blocks_report(&ps, twisted)),
                Format::Tsv => {
                    let r = report::blocks_report(&ps, twisted);
                    let mut s = String::from("block\tindex\tparam\tlength\n");
                    for b in &r.blocks {
                        for (i, m) in b.members.iter().enumerate() {
                            let _ = writeln!(s, "{}\t{}\t{}\t{}", b.id, i, m, b.lengths[i]);
                        }
                    }
                    s
                }
            };
            Ok(Outcome {
                stdout,
                ..Default::default()
            })
        }
        Command::Klv {
            lam,
            block,
            twisted,
            check,
            cache_dir,
        } => {
            let lc = infchar(&lam)?;
            cmd_klv(&lc, f, block, twisted, check, cache_dir.as_deref())
        }
        Command::Packet { psi, datum, embedding } => cmd_packet(&psi, datum, embedding, f),
        Command::Selfcheck { max_n } => {
            no_dot(f, "selfcheck")?;
            let r = selfcheck(max_n)?;
            let stdout = match f {
                Format::Tsv => selfcheck_tsv(&r),
                _ => json(&r),
            };
            let mut stderr = String::new();
            for c in r.invariants.iter().filter(|c| !c.failures.is_empty()) {
                for m in &c.failures {
                    let _ = writeln!(stderr, "{} violated at {}", c.check, m);
                }
            }
            Ok(Outcome {
                stdout,
                stderr,
                code: r.exit_code(),
            })
        }
    }
}

/// Run with an installed thread pool; errors become an outcome with their exit code.
pub fn run(cli: Cli) -> Outcome {
    let go = |cli: Cli| match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message.trim_end()),
            code: e.code,
        },
    };
    let threads = match thread_count() {
        Ok(t) => t,
        Err(e) => {
            return Outcome {
                stdout: String::new(),
                stderr: format!("error: {}\n", e.message),
                code: e.code,
            }
        }
    };
    match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| go(cli)),
            Err(e) => Outcome {
                stderr: format!("error: thread pool: {}\n", e),
                code: 4,
                ..Default::default()
            },
        },
        None => go(cli),
    }
}
