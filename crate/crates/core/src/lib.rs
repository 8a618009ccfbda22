//! Cut sparsification by strength-based nonuniform sampling.
//!
//! The crate computes lower bounds on edge strengths (the largest `k` such
//! that a `k`-connected induced subgraph contains both endpoints), uses them
//! to compress a weighted graph into one with `O(n log n / ε²)` edges whose
//! cuts all stay within `1 ± ε` of the original, smooths graphs so that
//! uniform sampling preserves cuts, and applies both to approximate s–t
//! minimum cuts and maximum flows. Brute-force oracles in [`oracle`] check
//! every guarantee on small instances.

pub mod certificate;
pub mod corpus;
pub mod error;
pub mod flow;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod rng;
pub mod sampling;
pub mod strength;
pub mod union_find;

pub use certificate::{partition, sparse_certificate, weak_edges, PartitionResult};
pub use error::{Error, Result};
pub use flow::{
    approx_max_flow, approx_max_flow_with_plan, approx_min_cut, max_flow, min_cut, CutResult,
    FlowAssignment, FlowPlan,
};
pub use graph::{Components, Contraction, Cut, Edge, Graph, Subgraph};
pub use sampling::{
    compress, random_division, smooth, uniform_sample, CompressedGraph, SamplingMode,
    SmoothedGraph, SparsifyParams,
};
pub use strength::{
    estimation, exact_strengths, mst_bounds, window_estimation, LabelKind, MstBounds,
    StrengthLabels,
};
pub use union_find::UnionFind;
