//! `braidmetric`: crossing names, distances, lower bounds and certificates
//! for braid words from the command line.
//!
//! Exit codes: 0 success (or an exact distance / certified derivation),
//! 1 not equivalent, 2 unknown or inconclusive, 64 usage error, 65 data error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use braidmetric_core::{
    exact_distance, exact_distance_general, family_word, grid_derivation, lcm_derivation,
    lower_bound, optimality_certificate, parse_word, random_equivalent_pair, render_braid_diagram,
    render_derivation_chart, signed_name_sequence, BraidWord, Certificate, Derivation,
    DistanceResult, FamilyKind, NameEntry, NamePair, RenderOptions, SearchLimits,
};

const EXIT_NOT_EQUIVALENT: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(name = "braidmetric", version, about = "Combinatorial distance between braid words")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Maximum number of words a search may store.
    #[arg(long, global = true, env = "BRAIDMETRIC_MAX_STATES", default_value_t = braidmetric_core::metric::DEFAULT_MAX_STATES)]
    max_states: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct WordArgs {
    /// Strand count (defaults to largest generator + 1).
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the crossing-name sequence of a word ("-" reads stdin).
    Names {
        word: String,
        #[command(flatten)]
        strands: WordArgs,
        /// Signed naming; chosen automatically when the word has inverse letters.
        #[arg(long)]
        signed: bool,
    },
    /// Exact combinatorial distance between two words.
    Distance {
        word1: String,
        word2: String,
        #[command(flatten)]
        strands: WordArgs,
        /// Allow free insertions/deletions (signed words).
        #[arg(long)]
        general: bool,
        #[arg(long)]
        max_depth: Option<usize>,
        /// Longest intermediate word in a general search
        /// (default: longer input + 2).
        #[arg(long)]
        max_word_length: Option<usize>,
        /// Also print the witness derivation in text mode.
        #[arg(long)]
        witness: bool,
    },
    /// Inversion lower bound between two equivalent positive words.
    Lb {
        word1: String,
        word2: String,
        #[command(flatten)]
        strands: WordArgs,
    },
    /// Print a member of one of the quadratic-distance word families.
    Family {
        #[arg(value_enum)]
        kind: FamilyArg,
        #[arg(long)]
        m: usize,
    },
    /// Build a derivation between family words.
    Derive {
        #[arg(value_enum)]
        kind: DeriveKind,
        #[arg(long)]
        m: usize,
        /// Derivation file to write (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a derivation file and print its optimality certificate.
    Certify { file: PathBuf },
    /// Write an SVG braid diagram or derivation chart.
    Render {
        #[command(subcommand)]
        what: RenderCommand,
    },
    /// Random equivalent word reached by seeded relation moves.
    Randpair {
        word: String,
        #[command(flatten)]
        strands: WordArgs,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "prop1_left")]
    Prop1Left,
    #[value(name = "prop1_right")]
    Prop1Right,
    #[value(name = "lcm_right")]
    LcmRight,
}

impl From<FamilyArg> for FamilyKind {
    fn from(k: FamilyArg) -> Self {
        match k {
            FamilyArg::Prop1Left => FamilyKind::Prop1Left,
            FamilyArg::Prop1Right => FamilyKind::Prop1Right,
            FamilyArg::LcmRight => FamilyKind::LcmRight,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DeriveKind {
    Grid,
    Lcm,
}

#[derive(Args)]
struct RenderArgs {
    /// SVG file to write (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print crossing names.
    #[arg(long)]
    labels: bool,
    #[arg(long, default_value_t = 24.0)]
    cell_width: f64,
    #[arg(long, default_value_t = 16.0)]
    cell_height: f64,
    /// Name pair to mark, as "N(p,q,a):N(r,s,b)"; repeatable.
    #[arg(long)]
    highlight: Vec<String>,
}

#[derive(Subcommand)]
enum RenderCommand {
    /// Braid diagram of a word.
    Braid {
        word: String,
        #[command(flatten)]
        strands: WordArgs,
        #[command(flatten)]
        opts: RenderArgs,
    },
    /// Separatrix chart of a derivation file.
    Derivation {
        file: PathBuf,
        #[command(flatten)]
        opts: RenderArgs,
    },
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<braidmetric_core::Error> for Failure {
    fn from(e: braidmetric_core::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn read_word(text: &str, n: Option<usize>) -> Result<BraidWord, Failure> {
    if text == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Data(format!("reading stdin: {e}")))?;
        return Ok(parse_word(&buf, n)?);
    }
    Ok(parse_word(text, n)?)
}

/// Parses two words onto a common strand count.
fn read_pair(a: &str, b: &str, n: Option<usize>) -> Result<(BraidWord, BraidWord), Failure> {
    if a == "-" && b == "-" {
        return Err(Failure::Usage("only one word may be read from stdin".into()));
    }
    let first = read_word(a, n)?;
    let second = read_word(b, n)?;
    if n.is_none() {
        let common = first.strand_count().max(second.strand_count());
        return Ok((
            parse_word(&first.to_string(), Some(common))?,
            parse_word(&second.to_string(), Some(common))?,
        ));
    }
    Ok((first, second))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Data(format!("reading stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, contents).map_err(|e| Failure::Data(format!("{}: {e}", p.display()))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output types serialize")
}

fn render_options(args: &RenderArgs) -> Result<RenderOptions, Failure> {
    let mut highlight_pairs = Vec::new();
    for pair in &args.highlight {
        let (a, b) = pair
            .split_once(':')
            .ok_or_else(|| Failure::Usage(format!("--highlight expects NAME:NAME, got {pair:?}")))?;
        let a: NameEntry = a.parse()?;
        let b: NameEntry = b.parse()?;
        highlight_pairs.push(NamePair::new(a, b));
    }
    Ok(RenderOptions {
        cell_width: args.cell_width,
        cell_height: args.cell_height,
        show_labels: args.labels,
        highlight_pairs,
    })
}

fn run(cli: Cli) -> CmdResult {
    let format = cli.format;
    let limits = SearchLimits::default().with_max_states(cli.max_states);
    match cli.command {
        Command::Names { word, strands, signed: _ } => {
            let w = read_word(&word, strands.n)?;
            let names = signed_name_sequence(&w);
            match format {
                Format::Text if names.is_empty() => {}
                Format::Text => println!("{names}"),
                Format::Json => println!("{}", json(&names)),
            }
            Ok(0)
        }
        Command::Distance {
            word1,
            word2,
            strands,
            general,
            max_depth,
            max_word_length,
            witness,
        } => {
            let (a, b) = read_pair(&word1, &word2, strands.n)?;
            let mut limits = limits;
            limits.max_depth = max_depth;
            let result = if general {
                limits.max_word_length = Some(max_word_length.unwrap_or(a.len().max(b.len()) + 2));
                exact_distance_general(&a, &b, &limits)?
            } else {
                exact_distance(&a, &b, &limits)?
            };
            match format {
                Format::Text => {
                    println!("{result}");
                    if let (true, DistanceResult::Exact { witness: d, .. }) = (witness, &result) {
                        println!("{}", d.to_json());
                    }
                }
                Format::Json => println!("{}", json(&result)),
            }
            Ok(match result {
                DistanceResult::Exact { .. } => 0,
                DistanceResult::NotEquivalent => EXIT_NOT_EQUIVALENT,
                DistanceResult::Unknown { .. } => EXIT_UNKNOWN,
            })
        }
        Command::Lb { word1, word2, strands } => {
            let (a, b) = read_pair(&word1, &word2, strands.n)?;
            let report = lower_bound(&a, &b)?;
            match format {
                Format::Text => println!("{report}"),
                Format::Json => println!("{}", json(&report)),
            }
            Ok(0)
        }
        Command::Family { kind, m } => {
            let w = family_word(kind.into(), m)?;
            match format {
                Format::Text => println!("{w}"),
                Format::Json => println!("{}", json(&w)),
            }
            Ok(0)
        }
        Command::Derive { kind, m, out } => {
            let d = match kind {
                DeriveKind::Grid => grid_derivation(m)?,
                DeriveKind::Lcm => match lcm_derivation(m, &limits)? {
                    Some(d) => d,
                    None => {
                        match format {
                            Format::Text => println!("unknown max_states {} reached", limits.max_states),
                            Format::Json => println!(r#"{{"status":"unknown"}}"#),
                        }
                        return Ok(EXIT_UNKNOWN);
                    }
                },
            };
            let body = format!("{}\n", d.to_json());
            write_output(out.as_deref(), &body)?;
            if let Some(path) = &out {
                match format {
                    Format::Text => println!("wrote {} ({} moves)", path.display(), d.len()),
                    Format::Json => println!(
                        "{}",
                        serde_json::json!({ "file": path.display().to_string(), "moves": d.len() })
                    ),
                }
            }
            Ok(0)
        }
        Command::Certify { file } => {
            let d = Derivation::from_json(&read_file(&file)?)?;
            let cert = optimality_certificate(&d)?;
            match format {
                Format::Text => println!("{cert}"),
                Format::Json => println!("{}", json(&cert)),
            }
            Ok(match cert {
                Certificate::CertifiedOptimal { .. } => 0,
                Certificate::Inconclusive { .. } => EXIT_UNKNOWN,
            })
        }
        Command::Render { what } => {
            let (svg, out) = match what {
                RenderCommand::Braid { word, strands, opts } => {
                    let w = read_word(&word, strands.n)?;
                    (render_braid_diagram(&w, &render_options(&opts)?)?, opts.out)
                }
                RenderCommand::Derivation { file, opts } => {
                    let d = Derivation::from_json(&read_file(&file)?)?;
                    (render_derivation_chart(&d, &render_options(&opts)?)?, opts.out)
                }
            };
            write_output(out.as_deref(), &svg)?;
            Ok(0)
        }
        Command::Randpair { word, strands, steps, seed } => {
            let w = read_word(&word, strands.n)?;
            let (w2, d) = random_equivalent_pair(&w, steps, seed);
            match format {
                Format::Text => {
                    println!("{w2}");
                    println!("{}", d.to_json());
                }
                Format::Json => println!("{}", serde_json::json!({ "word": w2, "derivation": d })),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            EXIT_DATA
        }
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
