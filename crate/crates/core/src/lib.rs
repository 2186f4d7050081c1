//! Sorting permutations by transpositions.
//!
//! The crate implements the Elias–Hartman 1.375-approximation on top of a
//! balanced permutation tree, which brings the whole pipeline to
//! `O(n log n)`:
//!
//! * [`permutation_tree`]: split/join tree with interval maxima.
//! * [`breakpoint_graph`]: cycle decomposition, move classification and the
//!   intersecting-pair query.
//! * [`simplifier`]: (g,b)-splits producing a simple permutation, and the
//!   translation of its sorting back to the input.
//! * [`sequence_search`]: 2-moves, (2,2)-, (3,2)- and 11/8-ratio sequences.
//! * [`engine`]: the eight-step driver and its configuration machinery.
//! * [`oracle`]: exact distances for small `n` by breadth-first search.

pub mod breakpoint_graph;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod perm;
pub mod permutation_tree;
pub mod sequence_search;
pub mod simplifier;

pub use breakpoint_graph::{pairs_intersect, BlackEdge, Cycle, CycleId, ExtendedPermutation, GraphState, MoveEffect};
pub use engine::{sort, SortOptions, SortReport};
pub use error::{OracleError, PermError, TreeError};
pub use perm::{replay, Permutation, Transposition};
pub use permutation_tree::{Forest, PermTree};
pub use sequence_search::MoveSequence;
