use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use secluded_core::generators::{gen_grid, gen_hex_grid, gen_partial_ktree, gen_tree_plus_edges};
use secluded_core::instance::{lift, SspInstance};
use secluded_core::kernel::{kernelize, KernelOutcome};
use secluded_core::{solve_with_heuristic, SolveOptions};
use serde::Serialize;

use crate::pipeline::kernel_pipeline;
use crate::report::{write_json, Provenance, SCHEMA};
use crate::{thread_pool, KernelChoice};

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum BenchFamily {
    Tree,
    Ktree,
    Grid,
    Hex,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "tree")]
    family: BenchFamily,
    /// Vertex counts, or side lengths for grids.
    #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    reps: u64,
    /// Extra edges for the tree family.
    #[arg(long, default_value_t = 4)]
    extra: usize,
    /// Width for the ktree family.
    #[arg(long, default_value_t = 3)]
    width: usize,
    #[arg(long, default_value_t = 0.5)]
    keep: f64,
    #[arg(long, default_value_t = 10)]
    k: u64,
    #[arg(long, default_value_t = 4)]
    l: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "fvs,fes")]
    kernels: Vec<KernelChoice>,
    #[arg(long, default_value_t = 2)]
    twin_r: usize,
    /// Also run the DP on each generated instance.
    #[arg(long)]
    solve: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct KernelRun {
    pipeline: String,
    /// None when the pipeline rejected the instance outright.
    parameter: Option<usize>,
    output_n: Option<usize>,
    output_m: Option<usize>,
    ms: f64,
    error: Option<String>,
}

#[derive(Serialize)]
struct SolveRun {
    answer: bool,
    width: usize,
    max_table: usize,
    ms: f64,
}

#[derive(Serialize)]
struct InstanceRun {
    size: usize,
    seed: u64,
    n: usize,
    m: usize,
    /// m - n + 1 for connected inputs.
    fes: usize,
    kernels: Vec<KernelRun>,
    solve: Option<SolveRun>,
}

#[derive(Serialize, Default)]
struct Curve {
    instances: usize,
    mean_n: f64,
    mean_m: f64,
    mean_fes: f64,
    /// Mean (parameter, output n, output m, ms) per pipeline.
    kernels: BTreeMap<String, [f64; 4]>,
    mean_solve_ms: Option<f64>,
    max_width: Option<usize>,
}

#[derive(Serialize)]
struct BenchReport {
    schema: u32,
    family: BenchFamily,
    curves: BTreeMap<usize, Curve>,
    runs: Vec<InstanceRun>,
    provenance: Provenance,
}

fn generate(args: &BenchArgs, size: usize, seed: u64) -> Result<SspInstance> {
    Ok(match args.family {
        BenchFamily::Tree => gen_tree_plus_edges(size, args.extra.min(size * (size - 1) / 2 - (size - 1)), args.k, args.l, seed)?,
        BenchFamily::Ktree => gen_partial_ktree(size, args.width, args.keep, args.k, args.l, seed)?,
        BenchFamily::Grid => gen_grid(size, size, args.k, args.l)?,
        BenchFamily::Hex => gen_hex_grid(size, size, args.k, args.l)?,
    })
}

fn ms(clock: Instant) -> f64 {
    clock.elapsed().as_secs_f64() * 1e3
}

fn measure(args: &BenchArgs, size: usize, seed: u64) -> Result<InstanceRun> {
    let inst = generate(args, size, seed)?;
    let (n, m) = (inst.graph.n(), inst.graph.m());
    let mut kernels = Vec::new();
    for &choice in &args.kernels {
        let Some(p) = kernel_pipeline(choice, args.twin_r) else {
            continue;
        };
        let clock = Instant::now();
        let outcome = kernelize(&inst, p);
        let elapsed = ms(clock);
        let name = format!("{choice:?}").to_lowercase();
        kernels.push(match outcome {
            Ok(KernelOutcome::Reduced(k)) => KernelRun {
                pipeline: name,
                parameter: Some(k.stats.parameter),
                output_n: Some(k.stats.output_n),
                output_m: Some(k.stats.output_m),
                ms: elapsed,
                error: None,
            },
            Ok(KernelOutcome::No(_)) => KernelRun {
                pipeline: name,
                parameter: None,
                output_n: Some(0),
                output_m: Some(0),
                ms: elapsed,
                error: None,
            },
            // A precondition such as K22-freeness is not met; report and go on.
            Err(e) => KernelRun {
                pipeline: name,
                parameter: None,
                output_n: None,
                output_m: None,
                ms: elapsed,
                error: Some(e.to_string()),
            },
        });
    }
    let solve = if args.solve {
        let clock = Instant::now();
        let opts = SolveOptions {
            witness: false,
            ..SolveOptions::default()
        };
        let sol = solve_with_heuristic(&lift(&inst), opts)?;
        Some(SolveRun {
            answer: sol.answer,
            width: sol.stats.width,
            max_table: sol.stats.max_table,
            ms: ms(clock),
        })
    } else {
        None
    };
    Ok(InstanceRun {
        size,
        seed,
        n,
        m,
        fes: (m + 1).saturating_sub(n),
        kernels,
        solve,
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn curve(runs: &[&InstanceRun]) -> Curve {
    let mut c = Curve {
        instances: runs.len(),
        mean_n: mean(runs.iter().map(|r| r.n as f64)).unwrap_or(0.0),
        mean_m: mean(runs.iter().map(|r| r.m as f64)).unwrap_or(0.0),
        mean_fes: mean(runs.iter().map(|r| r.fes as f64)).unwrap_or(0.0),
        mean_solve_ms: mean(runs.iter().filter_map(|r| r.solve.as_ref().map(|s| s.ms))),
        max_width: runs.iter().filter_map(|r| r.solve.as_ref().map(|s| s.width)).max(),
        ..Curve::default()
    };
    let names: Vec<String> = runs.iter().flat_map(|r| r.kernels.iter().map(|k| k.pipeline.clone())).collect();
    for name in names {
        if c.kernels.contains_key(&name) {
            continue;
        }
        let ks: Vec<&KernelRun> = runs
            .iter()
            .flat_map(|r| r.kernels.iter().filter(|k| k.pipeline == name))
            .collect();
        let mean_of = |f: &dyn Fn(&KernelRun) -> Option<f64>| mean(ks.iter().filter_map(|k| f(k))).unwrap_or(f64::NAN);
        let entry = [
            mean_of(&|k| k.parameter.map(|p| p as f64)),
            mean_of(&|k| k.output_n.map(|p| p as f64)),
            mean_of(&|k| k.output_m.map(|p| p as f64)),
            mean_of(&|k| Some(k.ms)),
        ];
        c.kernels.insert(name, entry);
    }
    c
}

pub fn run(args: BenchArgs) -> Result<()> {
    let jobs: Vec<(usize, u64)> = args
        .sizes
        .iter()
        .flat_map(|&size| (0..args.reps).map(move |r| (size, r)))
        .collect();
    let runs: Vec<InstanceRun> = thread_pool(args.workers)?.install(|| {
        jobs.par_iter()
            .map(|&(size, rep)| measure(&args, size, args.seed.wrapping_add(rep)))
            .collect::<Result<_>>()
    })?;
    let mut curves = BTreeMap::new();
    for &size in &args.sizes {
        let of_size: Vec<&InstanceRun> = runs.iter().filter(|r| r.size == size).collect();
        curves.insert(size, curve(&of_size));
    }
    let report = BenchReport {
        schema: SCHEMA,
        family: args.family,
        curves,
        runs,
        provenance: Provenance::new(Some(args.seed), "bench", None),
    };
    write_json(&report, args.json_out.as_deref())
}
