//! JSON documents written by the commands. Vertex ids are 1-based, as in
//! instance files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use secluded_core::instance::PathWitness;
use secluded_core::kernel::KernelStats;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

pub fn to_one_based(p: &PathWitness) -> Vec<usize> {
    p.0.iter().map(|v| v + 1).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Versions {
    pub secluded_core: String,
    pub secluded_cli: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub pipeline: String,
    pub versions: Versions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

impl Provenance {
    pub fn new(seed: Option<u64>, pipeline: &str, input: Option<String>) -> Self {
        Provenance {
            seed,
            pipeline: pipeline.to_string(),
            versions: Versions {
                secluded_core: secluded_core::VERSION.to_string(),
                secluded_cli: env!("CARGO_PKG_VERSION").to_string(),
            },
            input,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct RunStats {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub width: Option<usize>,
    pub nodes: Option<usize>,
    pub max_table: Option<usize>,
    /// Signature count times representative bound for the width.
    pub table_bound: Option<f64>,
    pub kernel_sizes: Option<KernelSizes>,
    pub timings_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct KernelSizes {
    pub input_n: usize,
    pub input_m: usize,
    pub output_n: usize,
    pub output_m: usize,
    pub parameter: usize,
    pub vertex_bound: Option<u128>,
    pub edge_bound: Option<u128>,
}

impl From<&KernelStats> for KernelSizes {
    fn from(s: &KernelStats) -> Self {
        KernelSizes {
            input_n: s.input_n,
            input_m: s.input_m,
            output_n: s.output_n,
            output_m: s.output_m,
            parameter: s.parameter,
            vertex_bound: s.vertex_bound,
            edge_bound: s.edge_bound,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunResult {
    pub schema: u32,
    pub answer: bool,
    /// Least path cost in the instance the DP solved (the kernel, if any).
    pub min_cost: Option<u64>,
    /// Path in the input instance.
    pub witness: Option<Vec<usize>>,
    pub witness_cost: Option<u64>,
    pub witness_load: Option<u64>,
    pub stats: RunStats,
    pub provenance: Provenance,
}

/// Pretty JSON to stdout, and to `out` when given.
pub fn write_json<T: Serialize>(doc: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)? + "\n";
    if let Some(p) = out {
        fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
    }
    print!("{text}");
    Ok(())
}
