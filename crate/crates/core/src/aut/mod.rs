//! Graph automorphism groups by partition refinement, isomorphism testing,
//! and blocks of imprimitivity.

mod blocks;
mod refine;
mod search;

pub use blocks::{block_system_from_normal_subgroup, block_system_from_pair, is_block, BlockSystem};
pub use search::{
    are_isomorphic, automorphism_group, automorphism_group_colored, AutomorphismGroup, SearchStats, DEFAULT_AUT_BOUND,
};
