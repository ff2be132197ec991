//! `lieop`: command-line front end for the `lie-operad` crate.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lie_operad::chord::{chords_of, render, Format};
use lie_operad::density::{DensityKind, DensityTable, MIN_DIGITS};
use lie_operad::enumerate::{self, count_l_with, count_p_with, enumerate_l_with, enumerate_p_with, EnumConfig};
use lie_operad::free::{decompose, FreeElement};
use lie_operad::lie::{LinComb, Normalizer};
use lie_operad::series::{b_series, lie_series, sif_series};
use lie_operad::sif::{self, count_sif_with, list_sif_with, SifConfig};
use lie_operad::verify::{run_all, VerifyConfig};
use lie_operad::{compose, parse, Error, Exec, Expr};
use serde_json::{json, Value};

const GRAMMAR: &str = "\
Expressions:
  expr := leaf | '[' expr ',' expr ']'
  leaf := 'x' nonzero-digit digit*
  Whitespace is ignored. Example: [[x1,x3],[x2,x4]]

Terms for `normalize`: an expression, optionally prefixed by an integer
coefficient and '*', e.g. 3*[x2,x1]. Put negative terms after `--`:
  lieop normalize -- -2*[x2,x1] [x1,x2]

Exit status: 0 success, 1 verification failure, 2 usage error.";

#[derive(Parser, Debug)]
#[command(name = "lieop", version, about = "Lie bracket words, their free operad structure and generating series")]
#[command(after_help = GRAMMAR)]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List L(n), or its primes, in canonical order.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Only the prime words.
        #[arg(long)]
        primes: bool,
        /// Print the count only.
        #[arg(long)]
        count: bool,
        #[arg(long, default_value_t = enumerate::DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Split a word of L(n) into its tree of primes.
    Decompose { expr: String },
    /// Substitute `b` into position `i` of `a`.
    Compose { a: String, i: usize, b: String },
    /// Rewrite a linear combination of bracket words in the basis L(n).
    Normalize {
        #[arg(required = true)]
        terms: Vec<String>,
    },
    /// Print coefficients of F, B or A.
    Series {
        #[arg(long, value_enum)]
        which: Which,
        /// Highest degree.
        #[arg(long = "max", alias = "order")]
        max: usize,
    },
    /// Density of primes in L(n), or of SIF permutations, against the prediction.
    Density {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[arg(long)]
        sif: bool,
    },
    /// Count or list stabilized-interval-free permutations.
    Sif {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = sif::DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Draw the chord diagram of a word of L(n).
    Chord {
        expr: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: ChordFormat,
        /// Write the drawing to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every check and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Series order; the long identities use twice this.
    #[arg(long, default_value_t = 25)]
    order: usize,
    /// Largest n for the exhaustive round trip.
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    #[arg(long, default_value_t = 50)]
    digits: u32,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "A", alias = "a")]
    A,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChordFormat {
    Svg,
    Ascii,
}

enum Failure {
    Usage(String),
    Verification,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            eprintln!("\n{GRAMMAR}");
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let flushed = out.flush();
    match result.and(flushed.map_err(Failure::Io)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{GRAMMAR}\n\nRun `lieop --help` for the flag reference.");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn parse_arg(text: &str) -> Result<Expr, Failure> {
    parse(text).map_err(|e| Failure::Usage(format!("{text:?}: {e}")))
}

fn emit(out: &mut impl Write, value: &Value) -> Outcome {
    writeln!(out, "{value}")?;
    Ok(())
}

fn run(cli: &Cli, out: &mut impl Write) -> Outcome {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let json = cli.json;
    match &cli.command {
        Command::Enumerate { n, primes, count, max_n } => {
            let cfg = EnumConfig { max_n: *max_n, exec };
            let kind = if *primes { "P" } else { "L" };
            if *count {
                let c = if *primes { count_p_with(*n, &cfg)? } else { count_l_with(*n, &cfg)? };
                if json {
                    return emit(out, &json!({ "set": kind, "n": n, "count": c.to_string() }));
                }
                writeln!(out, "{c}")?;
                return Ok(());
            }
            let words = if *primes { enumerate_p_with(*n, &cfg)? } else { enumerate_l_with(*n, &cfg)? };
            if json {
                let words: Vec<String> = words.iter().map(Expr::to_string).collect();
                return emit(out, &json!({ "set": kind, "n": n, "count": words.len().to_string(), "words": words }));
            }
            for w in words {
                writeln!(out, "{w}")?;
            }
        }
        Command::Decompose { expr } => {
            let f = decompose(&parse_arg(expr)?)?;
            if json {
                return emit(out, &f.to_json());
            }
            write_tree(out, &f, 0)?;
        }
        Command::Compose { a, i, b } => {
            let r = compose(&parse_arg(a)?, *i, &parse_arg(b)?)?;
            if json {
                return emit(out, &json!({ "result": r.to_string(), "arity": r.leaf_count() }));
            }
            writeln!(out, "{r}")?;
        }
        Command::Normalize { terms } => {
            let c = parse_terms(terms)?;
            let nf = Normalizer::new().normalize(&c)?;
            if json {
                let terms: Vec<Value> = nf
                    .terms()
                    .map(|(e, k)| json!({ "coefficient": k.to_string(), "expr": e.to_string() }))
                    .collect();
                return emit(out, &json!({ "arity": nf.arity(), "terms": terms }));
            }
            if nf.is_zero() {
                writeln!(out, "0")?;
            }
            for line in nf.lines() {
                writeln!(out, "{line}")?;
            }
        }
        Command::Series { which, max } => {
            let s = match which {
                Which::F => lie_series(*max),
                Which::B => b_series(*max),
                Which::A => sif_series(*max),
            };
            let coeffs: Vec<String> = s.coeffs().iter().map(ToString::to_string).collect();
            if json {
                let name = format!("{which:?}");
                return emit(out, &json!({ "which": name, "max": max, "coefficients": coeffs }));
            }
            for (deg, c) in coeffs.iter().enumerate() {
                writeln!(out, "{deg} {c}")?;
            }
        }
        Command::Density { n, digits, sif } => {
            if *digits < MIN_DIGITS {
                return Err(Error::Precision(*digits).into());
            }
            let kind = if *sif { DensityKind::Sif } else { DensityKind::Prime };
            let report = DensityTable::new(*n, *digits)?.report(kind, *n)?;
            if json {
                return emit(out, &serde_json::to_value(&report).expect("report serializes"));
            }
            writeln!(out, "{report}")?;
        }
        Command::Sif { n, list, max_n } => {
            let cfg = SifConfig { max_n: *max_n, exec };
            if *list {
                let perms = list_sif_with(*n, &cfg)?;
                if json {
                    let rows: Vec<Value> = perms
                        .iter()
                        .map(|p| json!({ "images": p.images(), "cycles": p.to_string() }))
                        .collect();
                    return emit(out, &json!({ "n": n, "count": perms.len().to_string(), "permutations": rows }));
                }
                for p in perms {
                    let images: Vec<String> = p.images().iter().map(u32::to_string).collect();
                    writeln!(out, "{}  {p}", images.join(" "))?;
                }
                return Ok(());
            }
            let c = count_sif_with(*n, &cfg)?;
            if json {
                return emit(out, &json!({ "n": n, "count": c.to_string() }));
            }
            writeln!(out, "{c}")?;
        }
        Command::Chord { expr, format, out: path } => {
            let e = parse_arg(expr)?;
            let fmt = match format {
                ChordFormat::Svg => Format::Svg,
                ChordFormat::Ascii => Format::Ascii,
            };
            let drawing = render(&e, fmt)?;
            if let Some(path) = path {
                fs::write(path, &drawing)?;
            }
            if json {
                let chords: Vec<[u32; 2]> = chords_of(&e)?.into_iter().map(|(a, b)| [a, b]).collect();
                let mut v = json!({ "expr": e.to_string(), "format": format!("{format:?}").to_lowercase(), "chords": chords });
                match path {
                    Some(p) => v["out"] = json!(p.display().to_string()),
                    None => v["drawing"] = json!(drawing),
                }
                return emit(out, &v);
            }
            match path {
                Some(p) => writeln!(out, "wrote {}", p.display())?,
                None => write!(out, "{drawing}")?,
            }
        }
        Command::Verify(args) => {
            let mut cfg = VerifyConfig::from_flags(args.order, args.max_n, args.digits);
            cfg.exec = exec;
            if let Some(seed) = args.seed {
                cfg.seed = seed;
            }
            let report = run_all(&cfg);
            if json {
                emit(out, &serde_json::to_value(&report).expect("report serializes"))?;
            } else {
                writeln!(out, "{report}")?;
            }
            if !report.passed() {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn write_tree(out: &mut impl Write, f: &FreeElement, depth: usize) -> io::Result<()> {
    let pad = "  ".repeat(depth);
    match f {
        FreeElement::Unit => writeln!(out, "{pad}leaf"),
        FreeElement::Node { pattern, children } => {
            writeln!(out, "{pad}{pattern}")?;
            children.iter().try_for_each(|c| write_tree(out, c, depth + 1))
        }
    }
}

/// `[coeff*]expr` terms; all terms must share one arity.
fn parse_terms(terms: &[String]) -> Result<LinComb, Failure> {
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let (coeff, body) = match t.split_once('*') {
            Some((c, body)) => {
                let c = c.trim();
                let k = c
                    .trim_start_matches('+')
                    .parse::<i64>()
                    .map_err(|_| Failure::Usage(format!("bad coefficient {c:?} in {t:?}")))?;
                (k, body)
            }
            None => (1, t.as_str()),
        };
        parsed.push((parse_arg(body)?, coeff.into()));
    }
    let arity = parsed[0].0.arity()?;
    Ok(LinComb::from_terms(arity, parsed)?)
}
