//! Shortest refolding trajectories between RNA secondary structures under the
//! MS2 move set (add, remove, or shift one base pair per step).
//!
//! The exact algorithm builds a digraph of candidate shifts whose edges say
//! which shift must happen first, keeps a largest acyclic subset with a 0/1
//! program, and executes it in topological order. Approximate variants,
//! a best-first oracle and the crossing-tolerant distance share the same
//! [`Move`] and [`Trajectory`] types.
//!
//! ```
//! use ms2path::{ms2_exact, Ms2Options, SecondaryStructure};
//!
//! let s = SecondaryStructure::parse_dot_bracket("((((((....)))))).........", 3, false)?;
//! let t = SecondaryStructure::parse_dot_bracket(".....((((((((....))))))))", 3, false)?;
//! assert_eq!(ms2_exact(&s, &t, &Ms2Options::default())?.distance(), 11);
//! # Ok::<(), ms2path::Error>(())
//! ```

pub mod bench;
pub mod conflict_graph;
pub mod error;
pub mod optimize;
pub mod partition;
pub mod pkms2;
pub mod structures;
pub mod trajectory;

#[cfg(test)]
mod testutil;

pub use conflict_graph::{
    build_coarse_digraph, build_conflict_digraph, build_conflict_digraph_with, coarse_digraph_of,
    detect_closed_2cycles, ClosedTwoCycle, CoarseDigraph, ConflictDigraph, EdgeRelation, TripletNode, TwoCycleCase,
};
pub use error::{Error, Result};
pub use partition::{equivalence_classes, partition_positions, EquivalenceClass, PathType, PositionPartition};
pub use pkms2::{pk_ms2_distance, pk_ms2_trajectory};
pub use structures::{
    base_pair_distance, hamming_distance, BasePair, RnaSequence, SecondaryStructure, StructurePair, DEFAULT_THETA,
};
pub use trajectory::{
    apply_move, bookkeeping_holds, ms2_branch_and_bound, ms2_exact, ms2_exact_report, ms2_greedy, ms2_near_optimal,
    verify_trajectory, ExactReport, GraphStats, Move, MoveCounts, Ms2Options, Trajectory,
};
