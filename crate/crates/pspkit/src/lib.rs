//! Exact solvers and instance tooling for packing edge-disjoint paths.
//!
//! Given a graph and a collection of simple paths, the problem is to select
//! as many pairwise edge-disjoint paths as possible. The crate ships:
//!
//! - an instance model with canonical text formats ([`instance`]),
//! - an exact branch-and-bound oracle on the conflict graph ([`conflict`]),
//! - a polynomial solver for forests ([`forest`]),
//! - an exact solver parameterized by feedback edge number x maximum
//!   degree ([`fvs`]),
//! - a treewidth route that lifts a decomposition of the graph to the
//!   conflict graph and runs an independent-set DP ([`treewidth`]),
//! - instance generators, including two multicolored-clique reductions
//!   ([`reductions`]).

pub mod conflict;
pub mod error;
pub mod forest;
pub mod fvs;
pub mod graph;
pub mod instance;
pub mod matching;
pub mod path;
pub mod reductions;
pub mod treewidth;

pub use crate::conflict::{build_conflict_graph, solve_bruteforce, ConflictGraph};
pub use crate::error::{Diagnostic, PspError};
pub use crate::forest::{internal_paths, solve_forest, SubgraphRef};
pub use crate::fvs::{
    augment_clique, core_edge_requirement, decompose_structure, enumerate_guesses, path_type,
    solve_fvs_delta, FvsContext, Guess, StructureDecomposition,
};
pub use crate::graph::{Edge, Graph};
pub use crate::instance::{
    parse_psp, serialize_psp, validate_psp, verify_solution, PspInstance, Solution, Verdict,
};
pub use crate::path::{paths_edge_disjoint, SimplePath};
pub use crate::treewidth::{
    decomposition_violations, heuristic_tree_decomposition, lift_to_conflict, mis_treewidth,
    solve_tw, validate_decomposition, TreeDecomposition,
};
