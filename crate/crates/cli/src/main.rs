mod commands;
mod spaces;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spaces::SpaceArgs;
use trs_core::{Error, Result};

/// Finite-truncation toolkit for parameter words, generalized ascending words,
/// G-partitions and echelon matrices.
#[derive(Debug, Parser)]
#[command(name = "trs", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Accepted for interface compatibility; every mode here is exhaustive.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the parallel paths (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Summary,
}

/// Element arguments accept a file path, `-` for stdin, or inline JSON.
#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// List every value with the given extents.
    Enumerate {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Check a value's structural conditions.
    Validate {
        #[command(flatten)]
        space: SpaceArgs,
        input: String,
    },
    /// `A ∘ B`.
    Compose {
        #[command(flatten)]
        space: SpaceArgs,
        a: String,
        b: String,
    },
    /// `π_k(A)`.
    Project {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        k: usize,
        input: String,
    },
    /// `r_n(A)`.
    Restrict {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        n: usize,
        input: String,
    },
    /// `s(n, X)`, or the whole sequence when `--n` is omitted.
    SApprox {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        n: Option<usize>,
        input: String,
    },
    /// `B ≤ A` on truncations of equal domain.
    Le {
        #[command(flatten)]
        space: SpaceArgs,
        b: String,
        a: String,
    },
    /// `A ≤_fin B`.
    LeFin {
        #[command(flatten)]
        space: SpaceArgs,
        a: String,
        b: String,
    },
    /// Run the axiom harness over every value up to the extent.
    CheckAxioms {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 3)]
        max_extent: usize,
        #[arg(long)]
        max_k: Option<usize>,
        /// Restrict to these clauses (repeatable), e.g. `--clause A6a`.
        #[arg(long = "clause")]
        clauses: Vec<String>,
        /// Instance ceiling per clause.
        #[arg(long, env = "TRS_BUDGET", default_value_t = 5_000_000)]
        budget: usize,
    },
    /// Witness search; see `commands::SearchJob` for the job-file format.
    Search(commands::SearchArgs),
    /// Transfer a coloring of `[A]` to words along a rapidly increasing sequence.
    Transfer {
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Comma-separated variable words `w_0,w_1,…`.
        #[arg(long)]
        seq: String,
        /// Comma-separated words to color.
        #[arg(long)]
        words: String,
        /// `terms-parity` or `support-parity`.
        #[arg(long, default_value = "terms-parity")]
        coloring: String,
    },
    /// Search for a coloring of `L^n` without a monochromatic combinatorial line.
    HjSearch {
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        colors: usize,
        #[arg(long)]
        length: usize,
        #[arg(long, env = "TRS_BUDGET", default_value_t = 5_000_000)]
        budget: usize,
    },
    /// Convert between FIN block sequences and gapw words.
    FinConvert {
        #[arg(long, value_enum)]
        to: commands::FinTarget,
        /// Row count of the gapw window (required for `--to gapw`).
        #[arg(long)]
        rows: Option<usize>,
        input: String,
    },
    /// Operations specific to generalized ascending words.
    Gapw {
        #[command(subcommand)]
        op: commands::GapwOp,
    },
    /// Echelon matrices over GF(q).
    Echelon {
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[command(subcommand)]
        op: commands::EchelonOp,
    },
}

/// A command's result in every output format.
pub struct Output {
    pub json: Value,
    pub summary: String,
    pub csv: Option<Vec<Vec<String>>>,
    pub code: u8,
}

impl Output {
    pub fn new(json: Value, summary: impl Into<String>) -> Self {
        Output { json, summary: summary.into(), csv: None, code: 0 }
    }

    pub fn csv(mut self, rows: Vec<Vec<String>>) -> Self {
        self.csv = Some(rows);
        self
    }

    pub fn code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }
}

pub const SCHEMA: u32 = 1;

pub fn read_json(arg: &str) -> Result<Value> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        s
    } else if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget(_) => 3,
        _ => 1,
    }
}

fn emit(format: Format, out: &Output, seed: Option<u64>) -> std::result::Result<(), String> {
    match format {
        Format::Json => {
            let mut v = json!({ "schema": SCHEMA });
            if let (Value::Object(dst), Value::Object(src)) = (&mut v, &out.json) {
                dst.extend(src.clone());
            } else {
                v["result"] = out.json.clone();
            }
            if seed.is_some() {
                v["seed_note"] = json!("seed ignored: exhaustive mode");
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("values serialize"));
        }
        Format::Csv => {
            let rows = out.csv.as_ref().ok_or("csv output is not available for this command")?;
            for r in rows {
                println!("{}", r.join(","));
            }
        }
        Format::Summary => println!("{}", out.summary),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.seed.is_some() && cli.format != Format::Json {
        eprintln!("note: seed ignored: exhaustive mode");
    }
    let run = || commands::run(cli.cmd);
    let result = match cli.threads {
        Some(n) => trs_core::par::with_threads(n, run),
        None => run(),
    };
    match result {
        Ok(out) => match emit(cli.format, &out, cli.seed) {
            Ok(()) => ExitCode::from(out.code),
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
