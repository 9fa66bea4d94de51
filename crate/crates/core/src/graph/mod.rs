//! Simple undirected graphs and the constructions used for metacirculants.

mod constructors;
#[allow(clippy::module_inception)]
mod graph;
mod io;

pub use constructors::{
    cayley_graph, circulant, core, coset_graph, coset_graph_from_arc, double_coset_union, generalized_petersen,
    lexicographic_product, mp_layers, mp_rotation, mp_sigma_alpha, mp_sigma_beta, multilayer_generalized_petersen,
    CosetSpace, MPParams,
};
pub use graph::{Graph, VertexLabel};
