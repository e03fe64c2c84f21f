//! Typed instance learning graphs.
//!
//! One vertex per object and per proposition that is true (statics included)
//! or mentioned by the goal. Vertex features are `(status, class)`; edges join
//! a proposition to each of its arguments and carry the 1-based argument
//! position as label.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pddl::{LiftedProblem, ObjId, Proposition, State};
use crate::symmetry::ColoredGraph;

pub const STATUS_NON_GOAL: u8 = 0;
pub const STATUS_UNACHIEVED_GOAL: u8 = 1;
pub const STATUS_ACHIEVED_GOAL: u8 = 2;
pub const STATUS_OBJECT: u8 = 3;
/// Exclusive upper bound of the status feature.
pub const STATUS_BOUND: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Object,
    Proposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Object(ObjId),
    Proposition(Proposition),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilgVertex {
    pub status: u8,
    /// Object type index in `[0, |T|)` or `|T| + predicate index`.
    pub class: u32,
    pub payload: Payload,
}

impl TilgVertex {
    pub fn kind(&self) -> VertexKind {
        match self.payload {
            Payload::Object(_) => VertexKind::Object,
            Payload::Proposition(_) => VertexKind::Proposition,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TilgEdge {
    pub object: u32,
    pub proposition: u32,
    /// 1-based position of the object in the proposition's arguments.
    pub label: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilgGraph {
    pub vertices: Vec<TilgVertex>,
    pub edges: Vec<TilgEdge>,
    pub num_types: u32,
    pub num_predicates: u32,
}

/// Builds the graph of `state` for `problem`. Static propositions are taken
/// from the problem, so `state` may or may not contain them.
pub fn build_tilg(problem: &LiftedProblem, state: &State) -> TilgGraph {
    let domain = problem.domain();
    let num_types = domain.types.len() as u32;
    let mut vertices: Vec<TilgVertex> = problem
        .objects()
        .iter()
        .enumerate()
        .map(|(i, o)| TilgVertex {
            status: STATUS_OBJECT,
            class: o.ty.0,
            payload: Payload::Object(ObjId(i as u32)),
        })
        .collect();

    let mut props: Vec<&Proposition> = state
        .props()
        .iter()
        .chain(problem.static_state().props())
        .chain(problem.goal())
        .collect();
    props.sort_unstable();
    props.dedup();

    let goal = problem.goal();
    let mut edges = Vec::new();
    for prop in props {
        let in_goal = goal.binary_search(prop).is_ok();
        let holds = problem.holds(state, prop);
        let status = match (in_goal, holds) {
            (false, _) => STATUS_NON_GOAL,
            (true, false) => STATUS_UNACHIEVED_GOAL,
            (true, true) => STATUS_ACHIEVED_GOAL,
        };
        let v = vertices.len() as u32;
        for (i, obj) in prop.args.iter().enumerate() {
            edges.push(TilgEdge {
                object: obj.0,
                proposition: v,
                label: i as u32 + 1,
            });
        }
        vertices.push(TilgVertex {
            status,
            class: num_types + prop.predicate.0,
            payload: Payload::Proposition(prop.clone()),
        });
    }
    let graph = TilgGraph {
        vertices,
        edges,
        num_types,
        num_predicates: domain.predicates.len() as u32,
    };
    debug_assert!(graph.is_bipartite());
    graph
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColorError {
    #[error("vertex {vertex}: feature {feature} = {value} is outside its bound {bound}")]
    OutOfBounds {
        vertex: usize,
        feature: usize,
        value: u64,
        bound: u64,
    },
    #[error("feature {feature} has an empty range")]
    EmptyRange { feature: usize },
    #[error("expected {expected} features, got {found}")]
    FeatureCount { expected: usize, found: usize },
    #[error("packed color does not fit in 64 bits")]
    Overflow,
}

/// Decimal digit packing: `color = Σ 10^offset_i · F_i` where `offset_1 = 0`
/// and `offset_i = Σ_{n<i} ⌈log10 M_n⌉`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorEncodingSpec {
    maxima: Vec<u64>,
    offsets: Vec<u32>,
}

/// Smallest `d` with `10^d ≥ m`, i.e. `⌈log10 m⌉` for `m ≥ 1`.
fn ceil_log10(m: u64) -> u32 {
    let mut d = 0;
    let mut p: u128 = 1;
    while p < m as u128 {
        p *= 10;
        d += 1;
    }
    d
}

impl ColorEncodingSpec {
    /// `maxima` are exclusive upper bounds, one per feature.
    pub fn new(maxima: Vec<u64>) -> Result<Self, ColorError> {
        if let Some(feature) = maxima.iter().position(|&m| m == 0) {
            return Err(ColorError::EmptyRange { feature });
        }
        let mut offsets = Vec::with_capacity(maxima.len());
        let mut acc = 0u32;
        for &m in &maxima {
            offsets.push(acc);
            acc += ceil_log10(m);
        }
        Ok(ColorEncodingSpec { maxima, offsets })
    }

    pub fn maxima(&self) -> &[u64] {
        &self.maxima
    }

    pub fn offsets(&self) -> &[u32] {
        &self.offsets
    }

    /// Packs one feature tuple. `vertex` is only used for error reporting.
    pub fn encode(&self, vertex: usize, features: &[u64]) -> Result<u64, ColorError> {
        if features.len() != self.maxima.len() {
            return Err(ColorError::FeatureCount {
                expected: self.maxima.len(),
                found: features.len(),
            });
        }
        let mut color: u64 = 0;
        for (i, ((&f, &m), &off)) in features.iter().zip(&self.maxima).zip(&self.offsets).enumerate() {
            // F < 10^⌈log10 M⌉ keeps each value inside its own digit block.
            let block = 10u128.pow(ceil_log10(m));
            if f >= m || (f as u128) >= block {
                return Err(ColorError::OutOfBounds {
                    vertex,
                    feature: i,
                    value: f,
                    bound: m,
                });
            }
            let term = 10u64
                .checked_pow(off)
                .and_then(|p| p.checked_mul(f))
                .ok_or(ColorError::Overflow)?;
            color = color.checked_add(term).ok_or(ColorError::Overflow)?;
        }
        Ok(color)
    }
}

/// Colors of every vertex from features `(status, class)`.
pub fn encode_vertex_colors(graph: &TilgGraph, spec: &ColorEncodingSpec) -> Result<Vec<u64>, ColorError> {
    graph
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| spec.encode(i, &[v.status as u64, v.class as u64]))
        .collect()
}

impl TilgGraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Exclusive bounds `(M_status, M_class)`.
    pub fn feature_maxes(&self) -> (u64, u64) {
        (STATUS_BOUND, (self.num_types + self.num_predicates).max(1) as u64)
    }

    pub fn color_spec(&self) -> ColorEncodingSpec {
        let (ms, mc) = self.feature_maxes();
        ColorEncodingSpec::new(vec![ms, mc]).expect("bounds are positive")
    }

    /// Vertex colors under [`Self::color_spec`].
    pub fn colors(&self) -> Vec<u64> {
        encode_vertex_colors(self, &self.color_spec()).expect("built graphs respect their own bounds")
    }

    pub fn is_bipartite(&self) -> bool {
        self.edges.iter().all(|e| {
            matches!(self.vertices[e.object as usize].kind(), VertexKind::Object)
                && matches!(self.vertices[e.proposition as usize].kind(), VertexKind::Proposition)
        })
    }

    /// Vertex of object `obj` (objects come first, in id order).
    pub fn object_vertex(&self, obj: ObjId) -> usize {
        debug_assert!(matches!(self.vertices[obj.index()].payload, Payload::Object(o) if o == obj));
        obj.index()
    }

    pub fn to_colored_graph(&self) -> ColoredGraph {
        ColoredGraph::from_edges(
            self.colors(),
            self.edges.iter().map(|e| (e.object as usize, e.proposition as usize, e.label)),
        )
    }

    /// Vertex lines `id color` then edge lines `u v label`.
    pub fn to_debug_text(&self) -> String {
        self.to_colored_graph().to_text()
    }

    /// Header (vertex count, edge count as little-endian u32), then each
    /// color as little-endian u64, then the sorted edge triples as u32s.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 8 * self.vertices.len() + 12 * self.edges.len());
        out.extend_from_slice(&(self.vertices.len() as u32).to_le_bytes());
        out.extend_from_slice(&(self.edges.len() as u32).to_le_bytes());
        for c in self.colors() {
            out.extend_from_slice(&c.to_le_bytes());
        }
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        for e in edges {
            out.extend_from_slice(&e.object.to_le_bytes());
            out.extend_from_slice(&e.proposition.to_le_bytes());
            out.extend_from_slice(&e.label.to_le_bytes());
        }
        out
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> TilgGraph {
        assert_eq!(perm.len(), self.vertices.len());
        let mut vertices = vec![None; self.vertices.len()];
        for (old, v) in self.vertices.iter().enumerate() {
            vertices[perm[old]] = Some(v.clone());
        }
        let mut edges: Vec<TilgEdge> = self
            .edges
            .iter()
            .map(|e| TilgEdge {
                object: perm[e.object as usize] as u32,
                proposition: perm[e.proposition as usize] as u32,
                label: e.label,
            })
            .collect();
        edges.sort_unstable();
        TilgGraph {
            vertices: vertices.into_iter().map(|v| v.expect("perm is a bijection")).collect(),
            edges,
            num_types: self.num_types,
            num_predicates: self.num_predicates,
        }
    }

    /// Class-index space size `|T| + |P|`.
    pub fn num_classes(&self) -> u32 {
        self.num_types + self.num_predicates
    }
}
