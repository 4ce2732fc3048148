//! Graph derangements: fixed-point-free permutations of a graph's vertices
//! that move every vertex to a neighbor.
//!
//! - [`graph`]: simple graphs and the checkerboard, Möbius and torus families.
//! - [`permutation`]: successor maps, cycle types, matchings as dyadic permutations.
//! - [`existence`]: Hall, Tutte and Berge checks, and witness construction
//!   through matchings of the bipartite double.
//! - [`cycletypes`]: the cycle-type realization search and classification tables.
//! - [`spec`] and [`render`]: graph spec strings, graph files, and text boards.

pub mod cycletypes;
pub mod error;
pub mod existence;
pub mod graph;
pub mod partition;
pub mod permutation;
pub mod render;
pub mod spec;

pub use error::{Error, Result};
pub use graph::{Bipartition, Graph, VertexSet};
pub use partition::{enumerate_partitions, Partition, PartitionFilter};
pub use permutation::{CycleType, GraphPermutation, Matching};
