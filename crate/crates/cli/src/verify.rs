use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use secluded_core::error::Error;
use secluded_core::format::InstanceFile;
use secluded_core::generators::gen_fuzz_instance;
use secluded_core::oracle::{brute_force_solve, DEFAULT_ORACLE_CAP};
use serde::Serialize;

use crate::pipeline::{solve_instance, SolveRequest};
use crate::report::{write_json, Provenance, SCHEMA};
use crate::{read_instance, thread_pool, KernelChoice, PipelineArgs, EXIT_VERIFY_FAILED};

#[derive(Args)]
pub struct VerifyArgs {
    /// Instance files, or directories searched for `*.ssp` files.
    paths: Vec<PathBuf>,
    /// Also check this many generated instances.
    #[arg(long, default_value_t = 0)]
    random: u64,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap_oracle_n: usize,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Mismatch {
    name: String,
    dp_answer: Option<bool>,
    dp_min_cost: Option<u64>,
    oracle_answer: bool,
    oracle_min_cost: Option<u64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    schema: u32,
    checked: usize,
    agreed: usize,
    /// Instances above the oracle cap.
    skipped: Vec<String>,
    mismatches: Vec<Mismatch>,
    provenance: Provenance,
}

enum Outcome {
    Agreed,
    Skipped,
    Mismatch(Mismatch),
}

fn collect_files(path: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = fs::read_dir(path)
            .with_context(|| format!("listing {}", path.display()))?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        entries.sort();
        for e in entries {
            if e.is_dir() || e.extension().is_some_and(|x| x == "ssp") {
                collect_files(&e, out)?;
            }
        }
    } else {
        out.push(path.to_path_buf());
    }
    Ok(())
}

fn check(name: &str, inst: &InstanceFile, args: &VerifyArgs) -> Result<Outcome> {
    let oracle = match brute_force_solve(&inst.to_weighted(), args.cap_oracle_n) {
        Ok(a) => a,
        Err(Error::CapExceeded { .. }) => return Ok(Outcome::Skipped),
        Err(e) => return Err(e.into()),
    };
    let req = SolveRequest {
        pipeline: &args.pipeline,
        td_text: None,
        witness: true,
        parallel: false,
    };
    let mismatch = |dp: Option<(bool, Option<u64>)>, error: Option<String>| Mismatch {
        name: name.to_string(),
        dp_answer: dp.map(|d| d.0),
        dp_min_cost: dp.and_then(|d| d.1),
        oracle_answer: oracle.answer,
        oracle_min_cost: oracle.min_cost,
        error,
    };
    Ok(match solve_instance(inst, &req) {
        Err(e) => Outcome::Mismatch(mismatch(None, Some(format!("{e:#}")))),
        Ok(r) => {
            // Kernels preserve the answer but may change path costs.
            let cost_ok = args.pipeline.kernel != KernelChoice::None || r.min_cost == oracle.min_cost;
            if r.answer == oracle.answer && cost_ok {
                Outcome::Agreed
            } else {
                Outcome::Mismatch(mismatch(Some((r.answer, r.min_cost)), None))
            }
        }
    })
}

pub fn run(args: VerifyArgs) -> Result<u8> {
    let mut files = Vec::new();
    for p in &args.paths {
        collect_files(p, &mut files)?;
    }
    let mut cases: Vec<(String, InstanceFile)> = Vec::new();
    for f in &files {
        cases.push((f.display().to_string(), read_instance(f)?));
    }
    for i in 0..args.random {
        let seed = args.pipeline.seed.wrapping_add(i);
        cases.push((format!("random:{seed}"), InstanceFile::Ssp(gen_fuzz_instance(seed)?)));
    }
    if cases.is_empty() {
        bail!("nothing to verify: pass instance paths or --random N");
    }
    let outcomes: Vec<Outcome> = thread_pool(args.workers)?.install(|| {
        cases
            .par_iter()
            .map(|(name, inst)| check(name, inst, &args))
            .collect::<Result<_>>()
    })?;
    let mut report = VerifyReport {
        schema: SCHEMA,
        checked: 0,
        agreed: 0,
        skipped: Vec::new(),
        mismatches: Vec::new(),
        provenance: Provenance::new(Some(args.pipeline.seed), "verify", None),
    };
    for ((name, _), o) in cases.iter().zip(outcomes) {
        match o {
            Outcome::Agreed => {
                report.checked += 1;
                report.agreed += 1;
            }
            Outcome::Skipped => report.skipped.push(name.clone()),
            Outcome::Mismatch(m) => {
                report.checked += 1;
                report.mismatches.push(m);
            }
        }
    }
    write_json(&report, args.json_out.as_deref())?;
    Ok(if report.mismatches.is_empty() { 0 } else { EXIT_VERIFY_FAILED })
}
