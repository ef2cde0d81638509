use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use secluded_core::dp::ReduceMode;
use secluded_core::format::InstanceFile;
use secluded_core::instance::{evaluate_path, VwSspInstance};
use secluded_core::kernel::{kernelize, Kernel, KernelOutcome, Pipeline};
use secluded_core::treedecomp::{heuristic_decomposition_seeded, make_nice, parse_td};
use secluded_core::{solve, SolveOptions};

use crate::report::{to_one_based, KernelSizes, Provenance, RunResult, RunStats, SCHEMA};
use crate::{KernelChoice, PipelineArgs};

pub struct SolveRequest<'a> {
    pub pipeline: &'a PipelineArgs,
    pub td_text: Option<&'a str>,
    pub witness: bool,
    pub parallel: bool,
}

pub fn kernel_pipeline(choice: KernelChoice, twin_r: usize) -> Option<Pipeline> {
    match choice {
        KernelChoice::None => None,
        KernelChoice::Fvs => Some(Pipeline::Fvs),
        KernelChoice::Fes => Some(Pipeline::Fes),
        KernelChoice::VcKrr => Some(Pipeline::VcKrr { r: twin_r }),
    }
}

fn pipeline_name(choice: KernelChoice) -> &'static str {
    match choice {
        KernelChoice::None => "dp",
        KernelChoice::Fvs => "fvs+dp",
        KernelChoice::Fes => "fes+dp",
        KernelChoice::VcKrr => "vc-krr+dp",
    }
}

pub fn reduce_mode(p: &PipelineArgs) -> ReduceMode {
    if p.no_reduce {
        ReduceMode::Off
    } else if p.matching_basis {
        ReduceMode::MatchingBasis
    } else {
        ReduceMode::CutBasis
    }
}

fn ms(clock: Instant) -> f64 {
    clock.elapsed().as_secs_f64() * 1e3
}

/// Optional kernelization, decomposition, DP and witness lift-back.
pub fn solve_instance(input: &InstanceFile, req: &SolveRequest) -> Result<RunResult> {
    let started = Instant::now();
    let original = input.to_weighted();
    let mut stats = RunStats {
        n: Some(original.n()),
        m: Some(original.graph.m()),
        ..RunStats::default()
    };
    let provenance = Provenance::new(Some(req.pipeline.seed), pipeline_name(req.pipeline.kernel), None);
    let mut timings = BTreeMap::new();

    let mut kernel: Option<Kernel> = None;
    if let Some(p) = kernel_pipeline(req.pipeline.kernel, req.pipeline.twin_r) {
        let InstanceFile::Ssp(ssp) = input else {
            bail!("kernels take unweighted instances");
        };
        let clock = Instant::now();
        let outcome = kernelize(ssp, p).context("kernelization")?;
        timings.insert("kernelize".to_string(), ms(clock));
        match outcome {
            KernelOutcome::No(_) => {
                timings.insert("total".to_string(), ms(started));
                stats.timings_ms = timings;
                return Ok(RunResult {
                    schema: SCHEMA,
                    answer: false,
                    min_cost: None,
                    witness: None,
                    witness_cost: None,
                    witness_load: None,
                    stats,
                    provenance,
                });
            }
            KernelOutcome::Reduced(k) => {
                stats.kernel_sizes = Some(KernelSizes::from(&k.stats));
                kernel = Some(k);
            }
        }
    }
    let target: &VwSspInstance = kernel.as_ref().map_or(&original, |k| &k.instance);

    let clock = Instant::now();
    let td = match req.td_text {
        Some(text) => {
            ensure!(kernel.is_none(), "--td-file describes the input graph and cannot follow a kernel");
            let (td, n) = parse_td(text).context("parsing decomposition")?;
            ensure!(n == target.n(), "decomposition is for {n} vertices, instance has {}", target.n());
            td
        }
        None => heuristic_decomposition_seeded(&target.graph, req.pipeline.seed)?,
    };
    let ntd = make_nice(&td, &target.graph, target.s, target.t)?;
    timings.insert("decompose".to_string(), ms(clock));

    let opts = SolveOptions {
        reduce: reduce_mode(req.pipeline),
        witness: req.witness,
        parallel: req.parallel,
    };
    let clock = Instant::now();
    let sol = solve(target, &ntd, opts)?;
    timings.insert("dp".to_string(), ms(clock));
    for (stage, t) in &sol.stats.timings_ms {
        timings.insert(format!("dp.{stage}"), *t);
    }
    stats.width = Some(sol.stats.width);
    stats.nodes = Some(sol.stats.nodes);
    stats.max_table = Some(sol.stats.max_table);
    stats.table_bound = Some(sol.stats.table_bound).filter(|b| b.is_finite());

    let mut witness = sol.witness.clone();
    if let (Some(w), Some(k)) = (&witness, &kernel) {
        let clock = Instant::now();
        witness = Some(k.lift_witness(w)?);
        timings.insert("lift".to_string(), ms(clock));
    }
    let (witness_cost, witness_load) = match &witness {
        Some(w) => {
            let (c, l) = evaluate_path(&original, w).context("witness does not validate on the input")?;
            ensure!(
                c <= original.k && l <= original.l,
                "witness has cost {c} and load {l}, over the budgets"
            );
            (Some(c), Some(l))
        }
        None => (None, None),
    };
    timings.insert("total".to_string(), ms(started));
    stats.timings_ms = timings;
    Ok(RunResult {
        schema: SCHEMA,
        answer: sol.answer,
        min_cost: sol.min_cost,
        witness: witness.as_ref().map(to_one_based),
        witness_cost,
        witness_load,
        stats,
        provenance,
    })
}
