//! Classification predicates and the verification procedures for the
//! multilayer Petersen family.

mod classify;
mod elements;
mod metacyclic;
mod mp;
mod regular;
mod sylow;

pub use classify::{
    classify, is_metacirculant_definitional, metacirculant_pair_from_split, transitive_metacyclic_witness,
    ClassificationReport, ClassifyOptions, Flag, Flags, MetacirculantRoutes,
};
pub use metacyclic::{scan_metacyclic_pairs, MetacyclicPair, MetacyclicScan};
pub use mp::{
    inner_arc_transitivity_check, mp_family_graph, mp_family_params, predicted_layer_distance, verify_mp_cayley_isomorphism,
    verify_mp_distance_claim, ArcOrbitReport, CayleyIsoReport, DistanceReport, DistanceViolation,
};
pub use regular::{
    regular_subgroup_search, RegularPredicate, RegularSearch, SearchCertificate, SearchOptions, SearchStatus,
};
pub use sylow::{p_component, p_part, sylow_p_subgroup};
