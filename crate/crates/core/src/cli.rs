//! Command-line front end. Standard output carries data only; diagnostics
//! and the effective seed go to standard error.
//!
//! Exit codes: 0 pass, 1 check failure or refused size, 2 usage or input
//! error.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bijections::{reduce, trace_enlarge, Letter};
use crate::format::{format_code, parse_paren, to_dot, to_paren};
use crate::marks::{EdgeMarkedTree, LeafMarkedTree, MarkedTreeJson};
use crate::oracle::{self, OracleError, Report};
use crate::sampler::GrowthState;
use crate::tree::{parse_code, DaryTree};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dary", version, about = "Grow and verify uniform random d-ary trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Code,
    Paren,
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grow a uniform random tree with n internal nodes
    Grow(GrowArgs),
    /// Run an exhaustive check; one JSON report per line
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Chi-square test of the sampler against the uniform law
    Uniform(UniformArgs),
    /// Record every intermediate state of one growth step as JSON frames
    Trace(TraceArgs),
    /// Convert a tree between formats
    Export(ExportArgs),
    /// Height summary over independent samples
    Heights(HeightArgs),
}

#[derive(Debug, Args)]
struct Seed {
    /// Random seed
    #[arg(long, env = "DARY_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct GrowArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    d: u64,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    seed: Seed,
    #[arg(long, value_enum, default_value_t = OutputFormat::Code)]
    format: OutputFormat,
    /// Also print the tree after every k-th step
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    emit_every: Option<u64>,
    /// Print operation counters as JSON on standard error
    #[arg(long)]
    counters: bool,
    #[arg(long, hide = true)]
    tamper_letter: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Enlarge is a bijection, for every size 0..=max-n
    Bijection {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_LIMIT)]
        limit: u64,
    },
    /// Cycle lemma for every walk length 1..=m
    Rotation {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(long, allow_negative_numbers = true)]
        max_inc: i64,
    },
    /// Binary growth maps, for every size 0..=max-n
    Variants {
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_LIMIT)]
        limit: u64,
    },
    /// Closed-form count against enumeration
    Counts {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_LIMIT)]
        limit: u64,
    },
    /// Exact one-step law of the sampler, for every size 0..=max-k
    Pushforward {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        #[arg(long)]
        max_k: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_LIMIT)]
        limit: u64,
    },
    /// Growth counting identity in exact arithmetic
    Identity {
        #[arg(long, default_value_t = 8)]
        max_d: usize,
        #[arg(long, default_value_t = 50)]
        max_n: usize,
    },
    /// Forest cardinality chain, for every size 0..=max-n
    Forests {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_LIMIT)]
        limit: u64,
    },
}

#[derive(Debug, Args)]
struct UniformArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    d: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    samples: u64,
    #[command(flatten)]
    seed: Seed,
    #[arg(long, default_value_t = 0.001)]
    alpha: f64,
    #[arg(long, hide = true)]
    tamper_letter: Option<usize>,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    d: u64,
    /// Edge-marked tree as JSON; `-` reads standard input
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    letter: usize,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Dot)]
    format: OutputFormat,
    /// Tree as preorder code, parenthesis form or JSON; `-` reads standard input
    #[arg(long)]
    input: PathBuf,
    /// Arity, when the input does not determine it
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    d: Option<u64>,
}

#[derive(Debug, Args)]
struct HeightArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    d: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    reps: u64,
    #[command(flatten)]
    seed: Seed,
}

/// Failure carrying its exit code and message.
struct Exit(i32, String);

impl Exit {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Exit(EXIT_USAGE, msg.to_string())
    }

    fn fail(msg: impl std::fmt::Display) -> Self {
        Exit(EXIT_FAIL, msg.to_string())
    }
}

impl From<io::Error> for Exit {
    fn from(e: io::Error) -> Self {
        Exit(EXIT_FAIL, format!("i/o error: {e}"))
    }
}

impl From<OracleError> for Exit {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Underpowered { .. } | OracleError::InvalidParams(_) => Exit::usage(e),
            _ => Exit::fail(e),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Grow(a) => grow(a, out, err),
        Command::Verify(v) => verify(v, out),
        Command::Uniform(a) => uniform(a, out, err),
        Command::Trace(a) => trace(a, out),
        Command::Export(a) => export(a, out),
        Command::Heights(a) => heights(a, out, err),
    };
    let code = match result {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    };
    let _ = out.flush();
    code
}

fn render(t: &DaryTree, format: OutputFormat) -> String {
    match format {
        OutputFormat::Code => format_code(&t.to_preorder_code()) + "\n",
        OutputFormat::Paren => to_paren(t) + "\n",
        OutputFormat::Dot => to_dot(t),
        OutputFormat::Json => {
            let j = LeafMarkedTree::unmarked(t.clone()).to_json();
            serde_json::to_string(&j).expect("tree json") + "\n"
        }
    }
}

fn grow(a: GrowArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Exit> {
    let d = a.d as usize;
    writeln!(err, "seed: {}", a.seed.seed)?;
    if !matches!(d.checked_mul(a.n), Some(x) if x < u32::MAX as usize) {
        return Err(Exit::fail(format!("size n={} is too large for arity {d}", a.n)));
    }
    if let Some(l) = a.tamper_letter {
        if l == 0 || l > d {
            return Err(Exit::usage(format!("letter {l} outside 1..={d}")));
        }
    }
    let mut state = GrowthState::new(d, a.seed.seed).map_err(Exit::usage)?;
    state.set_letter_override(a.tamper_letter);
    for k in 1..=a.n {
        state.grow_step().map_err(Exit::fail)?;
        if let Some(every) = a.emit_every {
            if k % every as usize == 0 && k < a.n {
                out.write_all(render(state.tree(), a.format).as_bytes())?;
            }
        }
    }
    out.write_all(render(state.tree(), a.format).as_bytes())?;
    if a.counters {
        let c = json!({"steps": state.step(), "counters": state.counters()});
        writeln!(err, "{c}")?;
    }
    Ok(EXIT_PASS)
}

fn emit(reports: impl IntoIterator<Item = Result<Report, OracleError>>, out: &mut dyn Write) -> Result<i32, Exit> {
    let mut code = EXIT_PASS;
    for r in reports {
        let r = r?;
        writeln!(out, "{}", r.to_json_line())?;
        if !r.pass {
            code = EXIT_FAIL;
        }
    }
    Ok(code)
}

fn verify(v: VerifyCommand, out: &mut dyn Write) -> Result<i32, Exit> {
    match v {
        VerifyCommand::Bijection { d, max_n, limit } => emit(
            (0..=max_n).map(|n| oracle::verify_enlarge_bijection(d as usize, n, limit)),
            out,
        ),
        VerifyCommand::Rotation { m, max_inc } => emit(
            (1..=m as usize).map(|m| oracle::verify_rotation_lemma(m, max_inc)),
            out,
        ),
        VerifyCommand::Variants { max_n, limit } => emit(
            (0..=max_n).map(|n| oracle::verify_binary_variants(n, limit)),
            out,
        ),
        VerifyCommand::Counts { d, n, limit } => {
            emit([oracle::verify_counts(d as usize, n, limit)], out)
        }
        VerifyCommand::Pushforward { d, max_k, limit } => emit(
            (0..=max_k).map(|k| oracle::verify_pushforward(d as usize, k, limit)),
            out,
        ),
        VerifyCommand::Identity { max_d, max_n } => {
            if max_d < 2 {
                return Err(Exit::usage("max-d must be at least 2"));
            }
            emit([Ok(oracle::verify_growth_identity(max_d, max_n))], out)
        }
        VerifyCommand::Forests { d, max_n, limit } => emit(
            (0..=max_n).map(|n| oracle::verify_forest_counts(d as usize, n, limit)),
            out,
        ),
    }
}

fn uniform(a: UniformArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Exit> {
    let d = a.d as usize;
    writeln!(err, "seed: {}", a.seed.seed)?;
    if !(0.0..=1.0).contains(&a.alpha) {
        return Err(Exit::usage(format!("alpha {} outside [0, 1]", a.alpha)));
    }
    let report = match a.tamper_letter {
        None => oracle::chi_square_uniformity(d, a.n, a.samples, a.seed.seed)?,
        Some(l) if (1..=d).contains(&l) => {
            oracle::chi_square_uniformity_tampered(d, a.n, a.samples, a.seed.seed, l)?
        }
        Some(l) => return Err(Exit::usage(format!("letter {l} outside 1..={d}"))),
    };
    let pass = report.p_value >= a.alpha;
    let line = json!({
        "check": "uniformity",
        "params": {"d": d, "n": a.n, "samples": a.samples, "seed": a.seed.seed, "alpha": a.alpha},
        "pass": pass,
        "report": report,
    });
    writeln!(out, "{line}")?;
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

fn read_input(path: &PathBuf) -> Result<String, Exit> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Exit::usage(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(text)
}

fn trace(a: TraceArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let d = a.d as usize;
    let text = read_input(&a.input)?;
    let json: MarkedTreeJson =
        serde_json::from_str(&text).map_err(|e| Exit::usage(format!("malformed input: {e}")))?;
    if json.d != d {
        return Err(Exit::usage(format!("input has arity {}, expected {d}", json.d)));
    }
    let x = EdgeMarkedTree::from_json(&json).map_err(|e| Exit::usage(format!("malformed input: {e}")))?;
    let letter = Letter::new(a.letter, d).map_err(Exit::usage)?;
    let (result, frames) = trace_enlarge(&x, letter).map_err(Exit::fail)?;
    // the recorded frames must replay backwards to the input
    match reduce(&result) {
        Ok((back, b)) if back == x && b == letter => {}
        _ => return Err(Exit::fail("reduce does not invert the traced step")),
    }
    let text = serde_json::to_string_pretty(&frames).expect("frames serialize");
    writeln!(out, "{text}")?;
    Ok(EXIT_PASS)
}

fn parse_tree(text: &str, d: Option<usize>) -> Result<DaryTree, Exit> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let json: MarkedTreeJson =
            serde_json::from_str(trimmed).map_err(|e| Exit::usage(format!("malformed input: {e}")))?;
        if let Some(d) = d.filter(|&d| d != json.d) {
            return Err(Exit::usage(format!("input has arity {}, expected {d}", json.d)));
        }
        return DaryTree::from_preorder_code(json.d, &json.code)
            .map_err(|e| Exit::usage(format!("malformed input: {e}")));
    }
    if trimmed.starts_with('(') || trimmed == "o" {
        let d = d.or_else(|| paren_arity(trimmed)).unwrap_or(2);
        return parse_paren(d, trimmed).ok_or_else(|| Exit::usage("malformed parenthesis form"));
    }
    let code = parse_code(trimmed).map_err(|e| Exit::usage(format!("malformed input: {e}")))?;
    let d = d.unwrap_or_else(|| code[0].max(2));
    DaryTree::from_preorder_code(d, &code).map_err(|e| Exit::usage(format!("malformed input: {e}")))
}

/// Number of children of the outermost node of a parenthesis form.
fn paren_arity(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    let mut children = 0;
    for ch in s.chars() {
        match ch {
            '(' => {
                if depth == 1 {
                    children += 1;
                }
                depth += 1;
            }
            ')' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return Some(children);
                }
            }
            'o' if depth == 1 => children += 1,
            _ => {}
        }
    }
    None
}

fn export(a: ExportArgs, out: &mut dyn Write) -> Result<i32, Exit> {
    let text = read_input(&a.input)?;
    let t = parse_tree(&text, a.d.map(|d| d as usize))?;
    out.write_all(render(&t, a.format).as_bytes())?;
    Ok(EXIT_PASS)
}

fn heights(a: HeightArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Exit> {
    writeln!(err, "seed: {}", a.seed.seed)?;
    let s = oracle::height_stats(a.d as usize, a.n, a.reps, a.seed.seed)?;
    writeln!(out, "{}", json!({"d": a.d, "n": a.n, "seed": a.seed.seed, "heights": s}))?;
    Ok(EXIT_PASS)
}
