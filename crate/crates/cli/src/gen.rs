use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};
use secluded_core::format::write_ssp;
use secluded_core::generators::{
    construct_tw_crosscomp, construct_vc_ppt, gen_grid, gen_hex_grid, gen_mcc_random, gen_partial_ktree,
    gen_tree_plus_edges,
};
use secluded_core::instance::SspInstance;

use crate::write_output;

#[derive(Args)]
pub struct GenArgs {
    #[command(subcommand)]
    family: Family,
    /// Output file (default: stdout).
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
pub struct Budgets {
    /// Path vertex budget (default: vertex count).
    #[arg(long)]
    k: Option<u64>,
    /// Neighborhood budget (default: vertex count).
    #[arg(long)]
    l: Option<u64>,
}

impl Budgets {
    fn resolve(self, n: usize) -> (u64, u64) {
        let n = (n as u64).max(2);
        (self.k.unwrap_or(n), self.l.unwrap_or(n))
    }
}

#[derive(Subcommand)]
enum Family {
    /// Random tree plus extra random edges.
    Tree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random partial k-tree.
    Ktree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        /// Probability of keeping each non-anchor edge.
        #[arg(long, default_value_t = 0.5)]
        keep: f64,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Square grid with s and t in opposite corners.
    Grid {
        #[arg(long)]
        w: usize,
        #[arg(long)]
        h: usize,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Hexagonal (brick wall) grid.
    Hex {
        #[arg(long)]
        w: usize,
        #[arg(long)]
        h: usize,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Random multicolored clique instance encoded as a bipartite path instance.
    McPpt {
        #[arg(long, default_value_t = 3)]
        classes: usize,
        #[arg(long, default_value_t = 2)]
        class_size: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// OR-composition of random trees with equal size and budgets.
    Compose {
        #[arg(long, default_value_t = 2)]
        copies: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        extra: usize,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn generate(family: &Family) -> Result<SspInstance> {
    Ok(match *family {
        Family::Tree { n, extra, budgets, seed } => {
            let (k, l) = budgets.resolve(n);
            gen_tree_plus_edges(n, extra, k, l, seed)?
        }
        Family::Ktree {
            n,
            width,
            keep,
            budgets,
            seed,
        } => {
            let (k, l) = budgets.resolve(n);
            gen_partial_ktree(n, width, keep, k, l, seed)?
        }
        Family::Grid { w, h, budgets } => {
            let (k, l) = budgets.resolve(w * h);
            gen_grid(w, h, k, l)?
        }
        Family::Hex { w, h, budgets } => {
            let (k, l) = budgets.resolve(w * h);
            gen_hex_grid(w, h, k, l)?
        }
        Family::McPpt {
            classes,
            class_size,
            p,
            seed,
        } => {
            let g = gen_mcc_random(classes, class_size, p, seed);
            construct_vc_ppt(&g)?.0
        }
        Family::Compose {
            copies,
            n,
            extra,
            budgets,
            seed,
        } => {
            let (k, l) = budgets.resolve(n);
            let parts = (0..copies as u64)
                .map(|i| gen_tree_plus_edges(n, extra, k, l, seed.wrapping_add(i)))
                .collect::<secluded_core::Result<Vec<_>>>()?;
            construct_tw_crosscomp(&parts)?.0
        }
    })
}

pub fn run(args: GenArgs) -> Result<()> {
    let inst = generate(&args.family)?;
    write_output(args.out.as_deref(), &write_ssp(&inst))
}
