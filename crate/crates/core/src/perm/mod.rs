//! Permutations, stabilizer chains and backtrack searches.

mod group;
mod permutation;
mod search;

pub use group::{orbits_of, PermutationGroup, TransitivityProfile, DEFAULT_ELEMENT_CAP};
pub use permutation::Permutation;
pub(crate) use permutation::{gcd, lcm};
pub use search::{centralizer_in, find_element, normalizer_in, subgroup_search, SearchBudget};
