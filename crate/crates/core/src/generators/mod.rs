//! Seeded instance generators and the hardness constructions.

mod crosscomp;
mod grids;
mod mcc;
mod random;

pub use crosscomp::{construct_tw_crosscomp, CompositionLayout};
pub use grids::{gen_grid, gen_hex_grid};
pub use mcc::{construct_vc_ppt, gen_mcc_random, p_connect, BinaryGadget, MccInstance, PptLayout};
pub use random::{gen_fuzz_instance, gen_partial_ktree, gen_tree_plus_edges};
