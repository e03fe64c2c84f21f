//! Lifted classical planning with graph symmetries.

pub mod dataset;
pub mod generators;
pub mod gnn;
pub mod pddl;
pub mod pruning;
pub mod search;
pub mod symmetry;
pub mod tilg;

/// Scalar used by the planner's numeric path.
pub type Real = f64;
pub type Real32 = f32;

pub type ModelWeightsF64 = gnn::ModelWeights<f64>;
pub type ModelWeightsF32 = gnn::ModelWeights<f32>;
pub type EmbeddingF64 = gnn::Embedding<f64>;
pub type EmbeddingF32 = gnn::Embedding<f32>;
