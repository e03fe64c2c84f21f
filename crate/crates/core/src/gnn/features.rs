use num_traits::Float;
use thiserror::Error;

use crate::tilg::{TilgGraph, STATUS_BOUND};

/// Row-major `|V| x d_in` matrix of one-hot status and class bits.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFeatures<T> {
    pub rows: usize,
    pub d_in: usize,
    pub data: Vec<T>,
}

impl<T: Float> NodeFeatures<T> {
    pub fn row(&self, v: usize) -> &[T] {
        &self.data[v * self.d_in..(v + 1) * self.d_in]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("vertex {vertex}: class {class} outside [0, {bound})")]
    ClassOutOfRange { vertex: usize, class: u32, bound: u32 },
    #[error("vertex {vertex}: status {status} outside [0, 4)")]
    StatusOutOfRange { vertex: usize, status: u8 },
}

/// `4 + |T| + |P|`.
pub fn input_dim(num_types: usize, num_predicates: usize) -> usize {
    STATUS_BOUND as usize + num_types + num_predicates
}

/// Status bit at `status`, class bit at `4 + class`.
pub fn featurize<T: Float>(graph: &TilgGraph) -> Result<NodeFeatures<T>, FeatureError> {
    let bound = graph.num_classes();
    let d_in = input_dim(graph.num_types as usize, graph.num_predicates as usize);
    let mut data = vec![T::zero(); graph.vertices.len() * d_in];
    for (v, vert) in graph.vertices.iter().enumerate() {
        if vert.status as u64 >= STATUS_BOUND {
            return Err(FeatureError::StatusOutOfRange { vertex: v, status: vert.status });
        }
        if vert.class >= bound {
            return Err(FeatureError::ClassOutOfRange {
                vertex: v,
                class: vert.class,
                bound,
            });
        }
        let row = &mut data[v * d_in..(v + 1) * d_in];
        row[vert.status as usize] = T::one();
        row[STATUS_BOUND as usize + vert.class as usize] = T::one();
    }
    Ok(NodeFeatures {
        rows: graph.vertices.len(),
        d_in,
        data,
    })
}
