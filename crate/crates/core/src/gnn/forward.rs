use num_traits::Float;
use thiserror::Error;

use super::features::{featurize, FeatureError};
use super::weights::ModelWeights;
use crate::tilg::TilgGraph;

/// Pooled output of the last message-passing layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding<T>(pub Vec<T>);

/// How multisets of values are summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Accumulation {
    /// Values are sorted before summing, so the result does not depend on
    /// vertex numbering.
    #[default]
    Sorted,
    /// Vertex-id order. Faster, invariant only up to rounding.
    VertexOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForwardError {
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error("layer {layer}: input width {found}, expected {expected}")]
    Dimension { layer: usize, expected: usize, found: usize },
    #[error("graph has edge label {label}, model supports labels 1..={max}")]
    Label { label: u32, max: usize },
    #[error("non-finite value after layer {layer}")]
    NonFinite { layer: usize },
}

fn sum<T: Float>(values: &mut [T], mode: Accumulation) -> T {
    if mode == Accumulation::Sorted {
        values.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    }
    values.iter().fold(T::zero(), |acc, &x| acc + x)
}

/// Embedding and heuristic value with sorted accumulation.
pub fn forward<T: Float>(weights: &ModelWeights<T>, graph: &TilgGraph) -> Result<(Embedding<T>, T), ForwardError> {
    forward_with(weights, graph, Accumulation::Sorted)
}

pub fn forward_with<T: Float>(
    weights: &ModelWeights<T>,
    graph: &TilgGraph,
    mode: Accumulation,
) -> Result<(Embedding<T>, T), ForwardError> {
    let features = featurize::<T>(graph)?;
    let n = features.rows;
    let num_rel = weights.metadata.max_arity;
    // neighbors[v][r] = vertices joined to v by label r + 1
    let mut neighbors = vec![vec![Vec::new(); num_rel]; n];
    for e in &graph.edges {
        let r = e.label as usize;
        if r == 0 || r > num_rel {
            return Err(ForwardError::Label { label: e.label, max: num_rel });
        }
        neighbors[e.object as usize][r - 1].push(e.proposition as usize);
        neighbors[e.proposition as usize][r - 1].push(e.object as usize);
    }

    let mut h = features.data;
    let mut width = features.d_in;
    let mut scratch = Vec::new();
    for (li, layer) in weights.layers.iter().enumerate() {
        if layer.self_weight.cols != width {
            return Err(ForwardError::Dimension {
                layer: li,
                expected: layer.self_weight.cols,
                found: width,
            });
        }
        let out = layer.self_weight.rows;
        let mut next = vec![T::zero(); n * out];
        let mut mean = vec![T::zero(); width];
        for v in 0..n {
            let row = &mut next[v * out..(v + 1) * out];
            layer.self_weight.mul_add(&h[v * width..(v + 1) * width], row);
            for (r, w) in layer.relations.iter().enumerate() {
                let nbrs = &neighbors[v][r];
                if nbrs.is_empty() {
                    continue;
                }
                let count = T::from(nbrs.len()).expect("count");
                for (j, m) in mean.iter_mut().enumerate() {
                    scratch.clear();
                    scratch.extend(nbrs.iter().map(|&u| h[u * width + j]));
                    *m = sum(&mut scratch, mode) / count;
                }
                w.mul_add(&mean, row);
            }
            for (x, &b) in row.iter_mut().zip(&layer.bias) {
                *x = (*x + b).max(T::zero());
            }
        }
        if next.iter().any(|x| !x.is_finite()) {
            return Err(ForwardError::NonFinite { layer: li });
        }
        h = next;
        width = out;
    }

    let z: Vec<T> = (0..width)
        .map(|j| {
            scratch.clear();
            scratch.extend((0..n).map(|v| h[v * width + j]));
            sum(&mut scratch, mode)
        })
        .collect();
    let mut value = weights.head_bias;
    for (w, &x) in weights.head_weight.iter().zip(&z) {
        value = value + *w * x;
    }
    if !value.is_finite() || z.iter().any(|x| !x.is_finite()) {
        return Err(ForwardError::NonFinite {
            layer: weights.layers.len(),
        });
    }
    Ok((Embedding(z), value))
}
