//! Orbit-keyed action pruning and embedding-keyed state pruning.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use md5::{Digest, Md5};
use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pddl::{GroundAction, LiftedProblem, SchemaId, State};
use crate::symmetry::{search_automorphisms, OrbitPartition, DEFAULT_ORBIT_BUDGET};
use crate::tilg::build_tilg;

/// Schema plus the orbit of each argument's object vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionOrbitKey {
    pub schema: SchemaId,
    pub orbit_ids: Vec<u32>,
}

impl ActionOrbitKey {
    /// Object `o` is vertex `o` of its TILG.
    pub fn of(action: &GroundAction, orbits: &OrbitPartition) -> Self {
        ActionOrbitKey {
            schema: action.schema,
            orbit_ids: action.args.iter().map(|o| orbits.orbit_id[o.index()]).collect(),
        }
    }
}

/// Orbits of the object and proposition vertices of the state's TILG.
pub fn state_orbits(problem: &LiftedProblem, state: &State, budget: usize) -> (OrbitPartition, bool) {
    let graph = build_tilg(problem, state).to_colored_graph();
    let search = search_automorphisms(&graph, budget);
    (search.orbits, search.exact)
}

/// Keeps the first action for every distinct [`ActionOrbitKey`], in input order.
pub fn prune_with_orbits(actions: &[GroundAction], orbits: &OrbitPartition) -> Vec<GroundAction> {
    let mut seen = HashSet::new();
    actions
        .iter()
        .filter(|a| seen.insert(ActionOrbitKey::of(a, orbits)))
        .cloned()
        .collect()
}

/// Action pruning with the default orbit budget.
pub fn prune_actions(problem: &LiftedProblem, state: &State, actions: &[GroundAction]) -> Vec<GroundAction> {
    prune_actions_with_budget(problem, state, actions, DEFAULT_ORBIT_BUDGET).0
}

/// Returns the retained actions and whether the orbits were exact.
pub fn prune_actions_with_budget(
    problem: &LiftedProblem,
    state: &State,
    actions: &[GroundAction],
    budget: usize,
) -> (Vec<GroundAction>, bool) {
    if actions.len() < 2 {
        return (actions.to_vec(), true);
    }
    let (orbits, exact) = state_orbits(problem, state, budget);
    (prune_with_orbits(actions, &orbits), exact)
}

/// 128-bit digest of a rounded embedding.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateKey(pub [u8; 16]);

impl fmt::Debug for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateKey({self})")
    }
}

impl fmt::Display for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

/// Digest used for state keys. Implementations must be stable across runs
/// and platforms.
pub trait StableDigest {
    fn digest(bytes: &[u8]) -> [u8; 16];
}

pub struct Md5Digest;

impl StableDigest for Md5Digest {
    fn digest(bytes: &[u8]) -> [u8; 16] {
        Md5::digest(bytes).into()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateKeyError {
    #[error("embedding component {index} is not finite")]
    NonFinite { index: usize },
    #[error("embedding component {index} does not fit in 64 bits at scale {scale}")]
    OutOfRange { index: usize, scale: u32 },
}

pub const DEFAULT_SCALE: u32 = 3;

/// Each component as `round(x * 10^scale)` in i64, little-endian, then MD5.
pub fn make_state_key<T: Float>(embedding: &[T], scale: u32) -> Result<StateKey, StateKeyError> {
    make_state_key_with::<Md5Digest, T>(embedding, scale)
}

pub fn make_state_key_with<D: StableDigest, T: Float>(embedding: &[T], scale: u32) -> Result<StateKey, StateKeyError> {
    let factor = T::from(10f64.powi(scale as i32)).expect("scale representable");
    let mut bytes = Vec::with_capacity(8 * embedding.len());
    for (index, &x) in embedding.iter().enumerate() {
        if !x.is_finite() {
            return Err(StateKeyError::NonFinite { index });
        }
        let r = (x * factor).round();
        let v = r.to_i64().ok_or(StateKeyError::OutOfRange { index, scale })?;
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    Ok(StateKey(D::digest(&bytes)))
}

/// Key of an integer vector (each value little-endian u64).
pub fn integer_state_key(values: &[u64]) -> StateKey {
    let bytes: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
    StateKey(Md5Digest::digest(&bytes))
}

/// Set of keys seen so far during one search.
#[derive(Debug, Clone, Default)]
pub struct StateKeyRegistry {
    seen: HashSet<StateKey>,
}

impl StateKeyRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// True if `key` was seen before (prune); otherwise records it.
    pub fn check_and_register(&mut self, key: StateKey) -> bool {
        !self.seen.insert(key)
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

pub fn check_and_register(key: StateKey, registry: &mut StateKeyRegistry) -> bool {
    registry.check_and_register(key)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneStats {
    pub actions_seen: u64,
    pub actions_pruned: u64,
    pub states_seen: u64,
    pub states_pruned: u64,
    /// Expansions whose orbit search hit its budget.
    pub inexact_orbits: u64,
    #[serde(skip)]
    pub orbit_time: Duration,
    #[serde(skip)]
    pub embed_time: Duration,
}

impl PruneStats {
    pub fn actions_retained(&self) -> u64 {
        self.actions_seen - self.actions_pruned
    }

    pub fn states_retained(&self) -> u64 {
        self.states_seen - self.states_pruned
    }

    /// Runs `f` and adds its duration to `orbit_time`.
    pub fn time_orbits<R>(&mut self, f: impl FnOnce() -> R) -> R {
        let t = Instant::now();
        let r = f();
        self.orbit_time += t.elapsed();
        r
    }

    pub fn time_embedding<R>(&mut self, f: impl FnOnce() -> R) -> R {
        let t = Instant::now();
        let r = f();
        self.embed_time += t.elapsed();
        r
    }
}
