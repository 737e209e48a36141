use std::fs;
use std::io::{self as stdio, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use piw::canon::{fast_minclass_with_stats, minclass, CanonResult};
use piw::classify::{decompose, DisplayMode};
use piw::invariant::code_invariant;
use piw::io::{self, format_text, parse_text};
use piw::nsoks::{isqrt, nsoks};
use piw::pipeline::{
    classify_matrices, read_record_file, run_pipeline, write_record_file, ClassifyOptions, PipelineConfig, PipelineError,
};
use piw::search::{search, SearchOptions, SpillConfig};
use piw::{HadamardPair, IntegerMatrix};

#[derive(Parser)]
#[command(name = "piw", version, about = "Generate and classify integer partial weighing matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Display {
    Canonical,
    Paper,
}

impl From<Display> for DisplayMode {
    fn from(d: Display) -> Self {
        match d {
            Display::Canonical => DisplayMode::Canonical,
            Display::Paper => DisplayMode::Paper,
        }
    }
}

#[derive(Args)]
struct Parallel {
    /// Worker threads.
    #[arg(long, env = "PIW_THREADS", default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct Spill {
    /// Spill large frontiers to this directory.
    #[arg(long)]
    spill: Option<PathBuf>,
    /// Frontier size above which a level is spilled.
    #[arg(long, default_value_t = 1_000_000)]
    spill_budget: usize,
}

impl Spill {
    fn config(&self) -> Option<SpillConfig> {
        self.spill.as_ref().map(|dir| SpillConfig {
            dir: dir.clone(),
            budget: self.spill_budget,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Representations of N as a sum of R nonnegative squares.
    Nsoks {
        n: u64,
        r: u32,
        #[arg(long)]
        maxsq: Option<u32>,
        #[arg(long)]
        count_only: bool,
    },
    /// Hadamard representatives of PIW(M, N, K), as matrix records.
    Generate {
        m: usize,
        n: usize,
        k: u64,
        #[arg(long)]
        mindepth: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        parallel: Parallel,
        #[command(flatten)]
        spill: Spill,
    },
    /// Minimal forms of matrices in the text format.
    Canon {
        #[arg(long, conflicts_with = "exhaustive")]
        fast: bool,
        #[arg(long)]
        exhaustive: bool,
        /// Print the row and column monomials mapping each input to its minimal form.
        #[arg(long)]
        witness: bool,
        /// Input file (default: stdin).
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Code-invariant digests of matrix records.
    Invariant {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        bound: Option<i64>,
        /// Also print the sorted code list.
        #[arg(long)]
        codes: bool,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Exact H-classes (and optionally TH-classes and block structure) of matrix records.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        th: bool,
        #[arg(long)]
        decompose: bool,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Code-invariant depth used as a cross-check.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Display::Canonical)]
        display: Display,
        #[command(flatten)]
        parallel: Parallel,
    },
    /// Generate, classify and report in one run.
    Pipeline {
        m: usize,
        n: usize,
        k: u64,
        #[arg(long)]
        mindepth: Option<usize>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Directory for all stage outputs.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Display::Canonical)]
        display: Display,
        #[command(flatten)]
        parallel: Parallel,
        #[command(flatten)]
        spill: Spill,
    },
    /// Block-sum decomposition of matrix records.
    Decompose {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
}

fn read_input(path: Option<&Path>) -> Result<String, PipelineError> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|source| PipelineError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut s = String::new();
            stdio::stdin().read_to_string(&mut s).map_err(|source| PipelineError::Io {
                path: "<stdin>".into(),
                source,
            })?;
            Ok(s)
        }
    }
}

fn read_records(path: Option<&Path>) -> Result<Vec<(u64, IntegerMatrix)>, PipelineError> {
    let text = read_input(path)?;
    let records = io::read_records(text.as_bytes()).map_err(|source| PipelineError::Format {
        path: path.map_or_else(|| "<stdin>".into(), Path::to_path_buf),
        source,
    })?;
    Ok(records.into_iter().map(|r| (r.k, r.matrix)).collect())
}

fn witness_line(w: &HadamardPair) -> String {
    let part = |perm: &[usize], signs: &[i8]| {
        perm.iter()
            .zip(signs)
            .map(|(&p, &s)| format!("{}{}", if s < 0 { "-" } else { "+" }, p + 1))
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        "# rows: {} | cols: {}",
        part(w.row_op.perm(), w.row_op.signs()),
        part(w.col_op.perm(), w.col_op.signs())
    )
}

fn stdout_lock() -> stdio::BufWriter<stdio::StdoutLock<'static>> {
    stdio::BufWriter::new(stdio::stdout().lock())
}

fn out_err(source: stdio::Error) -> PipelineError {
    PipelineError::Io {
        path: "<stdout>".into(),
        source,
    }
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Nsoks { n, r, maxsq, count_only } => {
            let reps = nsoks(n, r, maxsq);
            let mut out = stdout_lock();
            if !count_only {
                for rep in &reps {
                    writeln!(out, "{rep}").map_err(out_err)?;
                }
            }
            writeln!(out, "{}", reps.len()).map_err(out_err)?;
            out.flush().map_err(out_err)
        }
        Command::Generate {
            m,
            n,
            k,
            mindepth,
            out,
            parallel,
            spill,
        } => {
            let mut opts = SearchOptions::new(mindepth.unwrap_or(m));
            opts.threads = parallel.threads;
            opts.spill = spill.config();
            let result = search(m, n, k, &opts)?;
            match out {
                Some(path) => write_record_file(&path, k, &result.matrices),
                None => {
                    let mut w = stdout_lock();
                    io::write_records(&mut w, k, &result.matrices).map_err(out_err)
                }
            }
        }
        Command::Canon {
            fast,
            exhaustive,
            witness,
            input,
        } => {
            let text = read_input(input.as_deref())?;
            let matrices = parse_text(&text).map_err(|source| PipelineError::Format {
                path: input.clone().unwrap_or_else(|| "<stdin>".into()),
                source,
            })?;
            let mut out = stdout_lock();
            for (i, m) in matrices.iter().enumerate() {
                let use_fast = fast || (!exhaustive && m.rows() > piw::canon::EXHAUSTIVE_MAX_ROWS);
                let result: CanonResult = if use_fast {
                    let (r, stats) = fast_minclass_with_stats(m, witness)?;
                    log::debug!("matrix {}: {} max branches, {} total", i + 1, stats.max_branches, stats.total_branches);
                    r
                } else {
                    minclass(m, witness)?
                };
                if i > 0 {
                    writeln!(out).map_err(out_err)?;
                }
                writeln!(out, "{}", format_text(std::slice::from_ref(&result.minimal)).trim_end()).map_err(out_err)?;
                if let Some(w) = &result.witness {
                    writeln!(out, "{}", witness_line(w)).map_err(out_err)?;
                }
            }
            out.flush().map_err(out_err)
        }
        Command::Invariant {
            depth,
            bound,
            codes,
            input,
        } => {
            let records = read_records(input.as_deref())?;
            let collection_bound = bound.unwrap_or_else(|| {
                records
                    .iter()
                    .map(|(k, m)| (isqrt(*k) as i64).max(m.max_abs()))
                    .max()
                    .unwrap_or(0)
            });
            let mut out = stdout_lock();
            for (i, (_, m)) in records.iter().enumerate() {
                let inv = code_invariant(m, depth, collection_bound)?;
                write!(out, "{} {}", i + 1, inv.digest()).map_err(out_err)?;
                if codes {
                    for c in &inv.codes {
                        let joined = c.0.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
                        write!(out, " [{joined}]").map_err(out_err)?;
                    }
                }
                writeln!(out).map_err(out_err)?;
            }
            out.flush().map_err(out_err)
        }
        Command::Classify {
            input,
            th,
            decompose,
            report,
            depth,
            display,
            parallel,
        } => {
            let (k, matrices) = read_record_file(&input)?;
            let Some(k) = k else {
                println!("no matrices");
                return Ok(());
            };
            let c = classify_matrices(
                k,
                &matrices,
                &ClassifyOptions {
                    th,
                    decompose,
                    invariant_depth: Some(depth),
                    threads: parallel.threads,
                    display: display.into(),
                },
            )?;
            if let Some(path) = report {
                fs::write(&path, c.report.class_lines()).map_err(|source| PipelineError::Io { path, source })?;
            }
            let mut out = stdout_lock();
            write!(out, "{}", c.report.table_text()).map_err(out_err)?;
            out.flush().map_err(out_err)
        }
        Command::Pipeline {
            m,
            n,
            k,
            mindepth,
            depth,
            out,
            display,
            parallel,
            spill,
        } => {
            let mut cfg = PipelineConfig::new(m, n, k);
            cfg.mindepth = mindepth.unwrap_or(m);
            cfg.invariant_depth = depth.min(m);
            cfg.threads = parallel.threads;
            cfg.spill = spill.config();
            cfg.output_dir = out;
            cfg.display = display.into();
            let result = run_pipeline(&cfg)?;
            let mut w = stdout_lock();
            write!(w, "{}", result.report.table_text()).map_err(out_err)?;
            w.flush().map_err(out_err)
        }
        Command::Decompose { input } => {
            let records = read_records(input.as_deref())?;
            let mut out = stdout_lock();
            for (i, (_, m)) in records.iter().enumerate() {
                let dec = decompose(m)?;
                let orders: Vec<String> = dec.blocks.iter().map(|b| b.rows().to_string()).collect();
                writeln!(
                    out,
                    "# matrix {}: primitive={} blocks={}",
                    i + 1,
                    dec.primitive,
                    orders.join(",")
                )
                .map_err(out_err)?;
                writeln!(out, "{}", format_text(&dec.blocks).trim_end()).map_err(out_err)?;
                writeln!(out).map_err(out_err)?;
            }
            out.flush().map_err(out_err)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
