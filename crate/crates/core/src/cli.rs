//! The `lintaut` command line: `gen`, `prove`, `count` and `dataset`.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::balanced::{analyze_balance, prove_balanced};
use crate::counts::{enumerate_count, CountTable, Sequence};
use crate::dataset::{write_sharded, DatasetRecord};
use crate::formula_gen::{gen_formulas, gen_trees, set_partitions};
use crate::ljt::{gen_taut, prove_ipc, prove_lin};
use crate::syntax::{Formula, Term};
use crate::term_gen::{self, Enumerator, Terms};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_PROVED: i32 = 1;
pub const EXIT_INAPPLICABLE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;
/// Any other failure: bad arguments, size cap, I/O.
pub const EXIT_ERROR: i32 = 1;

pub const MAX_SIZE_ENV: &str = "LINTAUT_MAX_SIZE";

#[derive(Parser, Debug)]
#[command(name = "lintaut", version, about = "Theorems of implicational linear logic and their proof terms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate one family at one size, one record per line.
    Gen {
        family: Sequence,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Prove a single formula.
    Prove {
        formula: String,
        #[arg(long, value_enum, default_value_t = Method::Linear)]
        method: Method,
    },
    /// Count a family for every size up to a maximum.
    Count {
        family: Sequence,
        #[arg(long = "max")]
        max: usize,
        /// Compare against the expected counts and fail on mismatch.
        #[arg(long)]
        check: bool,
    },
    /// Write the theorem/proof dataset for term parameter `size`.
    Dataset {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        /// Follow each record with `%` lines holding LaTeX trees.
        #[arg(long)]
        latex: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
    Postfix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// The intuitionistic LJT prover; its proof may be non-linear.
    Ljt,
    /// The LJT prover's proof, kept only if linear.
    Linear,
    /// Reverse-mode search over typed normal forms; balanced formulas only.
    Balanced,
}

fn max_size(seq: Sequence) -> usize {
    std::env::var(MAX_SIZE_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| seq.default_max_size())
}

fn check_cap(seq: Sequence, size: usize) -> Result<(), String> {
    let cap = max_size(seq);
    if size > cap {
        return Err(format!(
            "size {size} exceeds the cap {cap} for {seq}; raise {MAX_SIZE_ENV} to go further"
        ));
    }
    Ok(())
}

/// Run the CLI on `args` (including the program name) and return the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Gen {
            family,
            size,
            limit,
            format,
        } => cmd_gen(family, size, limit, format, out),
        Command::Prove { formula, method } => return cmd_prove(&formula, method, out, err),
        Command::Count { family, max, check } => cmd_count(family, max, check, out, err),
        Command::Dataset {
            size,
            out: path,
            shards,
            latex,
        } => cmd_dataset(size, path, shards, latex, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn io_err(e: io::Error) -> String {
    e.to_string()
}

fn cmd_gen(
    seq: Sequence,
    size: usize,
    limit: Option<usize>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, String> {
    check_cap(seq, size)?;
    let limit = limit.unwrap_or(usize::MAX);
    let mut out = io::BufWriter::new(out);
    let no_postfix = || format!("family {seq} has no postfix form");
    match seq {
        Sequence::Trees | Sequence::Formulas | Sequence::Partitions => {
            if format == Format::Postfix {
                return Err(no_postfix());
            }
            let lines: Box<dyn Iterator<Item = String>> = match seq {
                Sequence::Trees => Box::new(gen_trees(size).map(|t| t.to_formula().to_string())),
                Sequence::Formulas => Box::new(gen_formulas(size).map(|f| f.to_string())),
                _ => Box::new(set_partitions(size).map(|p| {
                    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
                })),
            };
            for (id, line) in lines.take(limit).enumerate() {
                match format {
                    Format::Tsv => writeln!(out, "{id}\t{size}\t{line}"),
                    _ => writeln!(out, "{line}"),
                }
                .map_err(io_err)?;
            }
        }
        Sequence::Skeletons => {
            if format == Format::Postfix {
                return Err(no_postfix());
            }
            for (id, s) in term_gen::linear_motzkin_skeletons(size).take(limit).enumerate() {
                match format {
                    Format::Tsv => writeln!(out, "{id}\t{size}\t{s}"),
                    _ => writeln!(out, "{s}"),
                }
                .map_err(io_err)?;
            }
        }
        Sequence::AlmostLinear | Sequence::Linear | Sequence::Affine | Sequence::Nf => {
            let family = seq.term_family().unwrap();
            for (id, t) in Terms::from(Enumerator::new(family, size)).take(limit).enumerate() {
                write_term(&mut out, format, id, size, &t).map_err(io_err)?;
            }
        }
        Sequence::TypedNf => {
            for (id, (term, formula)) in term_gen::typed_normal_forms(size).take(limit).enumerate() {
                let rec = DatasetRecord {
                    id: id as u64,
                    n: size,
                    formula,
                    term,
                };
                write_pair(&mut out, format, &rec).map_err(io_err)?;
            }
        }
        Sequence::TheoremsLjt | Sequence::TheoremsBalanced => {
            let pairs: Box<dyn Iterator<Item = (Formula, Term)>> = if seq == Sequence::TheoremsLjt {
                Box::new(gen_taut(size))
            } else {
                Box::new(gen_formulas(size).filter_map(|f| prove_balanced(&f).map(|t| (f, t))))
            };
            for (id, (formula, term)) in pairs.take(limit).enumerate() {
                let rec = DatasetRecord {
                    id: id as u64,
                    n: size,
                    formula,
                    term,
                };
                write_pair(&mut out, format, &rec).map_err(io_err)?;
            }
        }
    }
    out.flush().map_err(io_err)?;
    Ok(EXIT_OK)
}

fn write_term(out: &mut dyn Write, format: Format, id: usize, n: usize, t: &Term) -> io::Result<()> {
    let postfix = || t.to_postfix_string().expect("generated terms are closed");
    match format {
        Format::Text => writeln!(out, "{t}"),
        Format::Postfix => writeln!(out, "{}", postfix()),
        Format::Tsv => writeln!(out, "{id}\t{n}\t{t}\t{}", postfix()),
    }
}

fn write_pair(out: &mut dyn Write, format: Format, rec: &DatasetRecord) -> io::Result<()> {
    match format {
        Format::Text => writeln!(out, "{} : {}", rec.formula, rec.term),
        Format::Postfix => writeln!(out, "{}", rec.term.to_postfix_string().expect("closed")),
        Format::Tsv => out.write_all(rec.to_tsv().as_bytes()),
    }
}

fn cmd_prove(text: &str, method: Method, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let formula = match Formula::parse(text) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_PARSE;
        }
    };
    let mut report = String::new();
    report.push_str(&format!("formula: {formula}\n"));
    let proof = match method {
        Method::Ljt => prove_ipc(&formula),
        Method::Linear => prove_lin(&formula),
        Method::Balanced => {
            let b = analyze_balance(&formula);
            if !b.balanced {
                report.push_str("balanced: no\nverdict: not balanced, method inapplicable\n");
                let _ = out.write_all(report.as_bytes());
                return EXIT_INAPPLICABLE;
            }
            report.push_str(&format!("balanced: yes (atom pairs {}, n {})\n", b.pair_count, b.n));
            prove_balanced(&formula)
        }
    };
    let code = match proof {
        Some(t) => {
            report.push_str("verdict: proved\n");
            report.push_str(&format!("term: {t}\n"));
            report.push_str(&format!("lambda: {}\n", t.to_lambda_notation()));
            report.push_str(&format!(
                "postfix: {}\n",
                t.to_postfix_string().expect("proofs are closed")
            ));
            EXIT_OK
        }
        None => {
            report.push_str("verdict: not proved\n");
            EXIT_NOT_PROVED
        }
    };
    let _ = out.write_all(report.as_bytes());
    code
}

fn cmd_count(
    seq: Sequence,
    max: usize,
    check: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, String> {
    check_cap(seq, max)?;
    let table = CountTable::default();
    let mut mismatches = Vec::new();
    writeln!(out, "size\tcount\texpected\tstatus\tseconds").map_err(io_err)?;
    for size in 0..=max {
        let start = Instant::now();
        let got = enumerate_count(seq, size);
        let secs = start.elapsed().as_secs_f64();
        let (expected, status) = match table.lookup(seq, size) {
            Some(e) if e.count == got => (format!("{} ({})", e.count, e.provenance), "ok"),
            Some(e) => {
                mismatches.push((size, got, e.count));
                (format!("{} ({})", e.count, e.provenance), "MISMATCH")
            }
            None => ("-".to_string(), "unchecked"),
        };
        writeln!(out, "{size}\t{got}\t{expected}\t{status}\t{secs:.3}").map_err(io_err)?;
    }
    if check && !mismatches.is_empty() {
        for (size, got, want) in &mismatches {
            let _ = writeln!(err, "{seq} size {size}: counted {got}, expected {want}");
        }
        return Ok(EXIT_MISMATCH);
    }
    Ok(EXIT_OK)
}

fn cmd_dataset(
    n: usize,
    path: PathBuf,
    shards: usize,
    latex: bool,
    out: &mut dyn Write,
) -> Result<i32, String> {
    check_cap(Sequence::TypedNf, n)?;
    if shards == 0 {
        return Err("--shards must be at least 1".into());
    }
    let report = write_sharded(n, &path, shards, latex).map_err(|e| e.to_string())?;
    for (p, c) in report.paths.iter().zip(&report.counts) {
        writeln!(out, "{}\t{c}", p.display()).map_err(io_err)?;
    }
    writeln!(out, "total\t{}", report.total).map_err(io_err)?;
    Ok(EXIT_OK)
}
