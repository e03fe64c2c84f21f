//! Automorphism orbits, color refinement and isomorphism testing for
//! vertex- and edge-colored graphs.

mod canon;
mod graph;
mod orbits;
mod refine;
mod union_find;

pub use canon::{are_isomorphic, canonical_form, CanonicalForm};
pub use graph::{Automorphism, ColoredGraph, GraphTextError};
pub use orbits::{automorphism_orbits, search_automorphisms, AutomorphismSearch, OrbitPartition, DEFAULT_ORBIT_BUDGET};
pub use refine::{color_refinement, Partition};
pub use union_find::UnionFind;
