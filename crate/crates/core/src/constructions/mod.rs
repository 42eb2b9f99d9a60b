//! Generators for named instance families, the Hamiltonicity reductions, and
//! constructive stable arrangements for the regimes where one always exists.

mod digraph;
mod euler;
mod families;
mod stable;

pub use digraph::{
    canonical_yes_instance, hamiltonian_cycle_profile, hamiltonian_path_profile, parse_digraph,
    Digraph,
};
pub use euler::{
    blockwise_euler, complete_graph_euler_tour, satisfies_component_lemma, BlockwiseEuler,
};
pub use families::{
    abf_cycle, abf_path, four_class_cycle, matches_p4_story, nonmonotone_pair, p4_loop, p4_scan,
    pm1_path, NonmonotoneTriple,
};
pub use stable::{
    fewest_same_class_neighbors, same_class_neighbors, three_class_two_valued_cycle_stable,
    two_class_stable, Built, Route,
};
