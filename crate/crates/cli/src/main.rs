mod bench;
mod gen;
mod pipeline;
mod report;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use secluded_core::format::{parse_instance, write_ssp, write_weighted, InstanceFile};
use secluded_core::kernel::{kernelize, KernelOutcome};
use secluded_core::oracle::{brute_force_solve, DEFAULT_ORACLE_CAP};

use crate::report::{to_one_based, write_json, Provenance};

/// Exit status for a "no" answer.
pub const EXIT_NO: u8 = 10;
pub const EXIT_ERROR: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "secluded", version, about = "Exact solvers for short secluded s-t paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file with the tree decomposition DP.
    Solve(SolveArgs),
    /// Reduce an instance and write the kernel.
    Kernelize(KernelizeArgs),
    /// Solve an instance by exhaustive search.
    Oracle(OracleArgs),
    /// Write a generated instance.
    Gen(gen::GenArgs),
    /// Cross-check the DP against the exhaustive search.
    Verify(verify::VerifyArgs),
    /// Run a generator family and report kernel sizes and timings.
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelChoice {
    None,
    Fvs,
    Fes,
    VcKrr,
}

#[derive(Args, Clone, Debug)]
pub struct PipelineArgs {
    /// Kernelization to run before the DP.
    #[arg(long, value_enum, default_value = "none")]
    pub kernel: KernelChoice,
    /// Twin class size kept by the vertex cover kernel.
    #[arg(long, default_value_t = 2)]
    pub twin_r: usize,
    /// Keep every partial solution instead of a representative subset.
    #[arg(long)]
    pub no_reduce: bool,
    /// Use the perfect-matching basis for representative sets.
    #[arg(long, conflicts_with = "no_reduce")]
    pub matching_basis: bool,
    /// Seed for decomposition tie-breaking.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Tree decomposition of the input graph in .td format.
    #[arg(long)]
    td_file: Option<PathBuf>,
    /// Skip witness reconstruction and free tables early.
    #[arg(long)]
    no_witness: bool,
    /// Evaluate cells of large nodes in parallel.
    #[arg(long)]
    parallel: bool,
    /// Worker threads for --parallel (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Also write the result JSON here.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct KernelizeArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    kernel: KernelChoice,
    #[arg(long, default_value_t = 2)]
    twin_r: usize,
    /// Write the unweighted expansion instead of the weighted kernel.
    #[arg(long)]
    expand: bool,
    /// Kernel output file (default: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Write the reduction trace and kernel statistics as JSON.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    input: PathBuf,
    /// Largest vertex count the exhaustive search accepts.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap_oracle_n: usize,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        b = b.num_threads(w);
    }
    b.build().context("building worker pool")
}

fn answer_code(answer: bool) -> u8 {
    if answer {
        0
    } else {
        EXIT_NO
    }
}

fn run_solve(args: SolveArgs) -> Result<u8> {
    let inst = read_instance(&args.input)?;
    let td = match &args.td_file {
        Some(p) => Some(fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };
    let request = pipeline::SolveRequest {
        pipeline: &args.pipeline,
        td_text: td.as_deref(),
        witness: !args.no_witness,
        parallel: args.parallel,
    };
    let mut result = if args.parallel {
        thread_pool(args.workers)?.install(|| pipeline::solve_instance(&inst, &request))?
    } else {
        pipeline::solve_instance(&inst, &request)?
    };
    result.provenance.input = Some(args.input.display().to_string());
    write_json(&result, args.json_out.as_deref())?;
    Ok(answer_code(result.answer))
}

fn run_kernelize(args: KernelizeArgs) -> Result<u8> {
    let InstanceFile::Ssp(inst) = read_instance(&args.input)? else {
        bail!("kernels take unweighted instances");
    };
    let Some(pipeline) = pipeline::kernel_pipeline(args.kernel, args.twin_r) else {
        bail!("--kernel none has nothing to do");
    };
    let outcome = kernelize(&inst, pipeline)?;
    let kernel = match outcome {
        KernelOutcome::No(trace) => {
            let summary = serde_json::json!({
                "schema": 1,
                "answer": false,
                "reason": "s and t are disconnected",
                "trace": trace,
            });
            write_json(&summary, args.json_out.as_deref())?;
            return Ok(EXIT_NO);
        }
        KernelOutcome::Reduced(k) => k,
    };
    let text = if args.expand {
        write_ssp(&kernel.expand()?.instance)
    } else {
        write_weighted(&kernel.instance)
    };
    write_output(args.out.as_deref(), &text)?;
    if let Some(p) = &args.json_out {
        let doc = serde_json::json!({
            "schema": 1,
            "stats": kernel.stats,
            "rule_counts": kernel.trace.counts(),
            "trace": kernel.trace,
        });
        fs::write(p, serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    Ok(0)
}

fn run_oracle(args: OracleArgs) -> Result<u8> {
    let inst = read_instance(&args.input)?.to_weighted();
    let ans = brute_force_solve(&inst, args.cap_oracle_n)?;
    let doc = serde_json::json!({
        "schema": 1,
        "answer": ans.answer,
        "min_cost": ans.min_cost,
        "best_load": ans.best_load,
        "witness": ans.witness.as_ref().map(to_one_based),
        "provenance": Provenance::new(None, "oracle", Some(args.input.display().to_string())),
    });
    write_json(&doc, args.json_out.as_deref())?;
    Ok(answer_code(ans.answer))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Kernelize(a) => run_kernelize(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Gen(a) => gen::run(a).map(|_| 0),
        Command::Verify(a) => verify::run(a),
        Command::Bench(a) => bench::run(a).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
