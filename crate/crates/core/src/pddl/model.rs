//! Lifted planning model: domain, problem, propositions and states.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(
    /// Index into [`DomainModel::types`]. `TypeId(0)` is the universal type `object`.
    TypeId
);
id_type!(
    /// Index into [`DomainModel::predicates`] (sorted by name).
    PredId
);
id_type!(
    /// Index into [`DomainModel::schemas`] (sorted by name).
    SchemaId
);
id_type!(
    /// Index into [`LiftedProblem::objects`] (sorted by name).
    ObjId
);

pub const UNIVERSAL_TYPE: &str = "object";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDef {
    pub name: String,
    /// `None` only for the universal type.
    pub parent: Option<TypeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDef {
    pub name: String,
    pub param_types: Vec<TypeId>,
}

impl PredicateDef {
    pub fn arity(&self) -> usize {
        self.param_types.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// Position in the schema's parameter list.
    Var(usize),
    /// Index into [`DomainModel::constants`].
    Const(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub predicate: PredId,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: TypeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<Param>,
    pub pre: Vec<Atom>,
    pub add: Vec<Atom>,
    pub del: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constant {
    pub name: String,
    pub ty: TypeId,
}

/// A parsed domain. Predicates and schemas are kept sorted by name so that
/// index order coincides with name order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainModel {
    pub name: String,
    pub requirements: Vec<String>,
    pub types: Vec<TypeDef>,
    pub constants: Vec<Constant>,
    pub predicates: Vec<PredicateDef>,
    pub schemas: Vec<ActionSchema>,
}

impl DomainModel {
    pub fn type_id(&self, name: &str) -> Option<TypeId> {
        self.types
            .iter()
            .position(|t| t.name == name)
            .map(|i| TypeId(i as u32))
    }

    pub fn predicate_id(&self, name: &str) -> Option<PredId> {
        self.predicates
            .binary_search_by(|p| p.name.as_str().cmp(name))
            .ok()
            .map(|i| PredId(i as u32))
    }

    pub fn schema_id(&self, name: &str) -> Option<SchemaId> {
        self.schemas
            .binary_search_by(|s| s.name.as_str().cmp(name))
            .ok()
            .map(|i| SchemaId(i as u32))
    }

    pub fn predicate(&self, id: PredId) -> &PredicateDef {
        &self.predicates[id.index()]
    }

    pub fn schema(&self, id: SchemaId) -> &ActionSchema {
        &self.schemas[id.index()]
    }

    /// True iff `sub` equals `sup` or descends from it.
    pub fn is_subtype(&self, sub: TypeId, sup: TypeId) -> bool {
        let mut cur = Some(sub);
        while let Some(t) = cur {
            if t == sup {
                return true;
            }
            cur = self.types[t.index()].parent;
        }
        false
    }

    pub fn max_arity(&self) -> usize {
        self.predicates.iter().map(|p| p.arity()).max().unwrap_or(0)
    }

    /// Predicates that appear in no schema's add or delete list.
    pub fn static_predicates(&self) -> Vec<PredId> {
        let mut touched = vec![false; self.predicates.len()];
        for schema in &self.schemas {
            for atom in schema.add.iter().chain(&schema.del) {
                touched[atom.predicate.index()] = true;
            }
        }
        touched
            .iter()
            .enumerate()
            .filter(|(_, &t)| !t)
            .map(|(i, _)| PredId(i as u32))
            .collect()
    }
}

/// A ground atom. The derived order (predicate, then arguments) is the
/// canonical total order because ids are assigned in name order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Proposition {
    pub predicate: PredId,
    pub args: Vec<ObjId>,
}

impl Proposition {
    pub fn new(predicate: PredId, args: Vec<ObjId>) -> Self {
        Proposition { predicate, args }
    }
}

/// A set of true propositions, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct State {
    props: Vec<Proposition>,
}

impl State {
    pub fn new(props: impl IntoIterator<Item = Proposition>) -> Self {
        let mut props: Vec<_> = props.into_iter().collect();
        props.sort_unstable();
        props.dedup();
        State { props }
    }

    pub fn props(&self) -> &[Proposition] {
        &self.props
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn contains(&self, prop: &Proposition) -> bool {
        self.props.binary_search(prop).is_ok()
    }

    /// All propositions of one predicate, as a contiguous slice.
    pub fn props_of(&self, predicate: PredId) -> &[Proposition] {
        let lo = self.props.partition_point(|p| p.predicate < predicate);
        let hi = self.props.partition_point(|p| p.predicate <= predicate);
        &self.props[lo..hi]
    }

    /// `(self ∖ del) ∪ add` without checking preconditions.
    pub fn apply_unchecked(&self, action: &GroundAction) -> State {
        let mut props: Vec<Proposition> = self
            .props
            .iter()
            .filter(|p| action.del.binary_search(p).is_err())
            .cloned()
            .collect();
        props.extend(action.add.iter().cloned());
        props.sort_unstable();
        props.dedup();
        State { props }
    }

    pub fn union(&self, other: &State) -> State {
        State::new(self.props.iter().chain(other.props.iter()).cloned())
    }
}

impl FromIterator<Proposition> for State {
    fn from_iter<I: IntoIterator<Item = Proposition>>(iter: I) -> Self {
        State::new(iter)
    }
}

/// A schema with all parameters bound. `pre`, `add` and `del` are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundAction {
    pub schema: SchemaId,
    pub args: Vec<ObjId>,
    pub pre: Vec<Proposition>,
    pub add: Vec<Proposition>,
    pub del: Vec<Proposition>,
}

impl GroundAction {
    pub fn has_distinct_args(&self) -> bool {
        self.args
            .iter()
            .enumerate()
            .all(|(i, a)| !self.args[..i].contains(a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Object {
    pub name: String,
    pub ty: TypeId,
}

/// `⟨O, T, P, A, I, G⟩` with objects (including domain constants) sorted by name.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedProblem {
    pub(crate) name: String,
    pub(crate) domain: Arc<DomainModel>,
    pub(crate) objects: Vec<Object>,
    pub(crate) constant_objects: Vec<ObjId>,
    pub(crate) init: State,
    pub(crate) goal: Vec<Proposition>,
    pub(crate) static_mask: Vec<bool>,
    pub(crate) statics: State,
    pub(crate) objects_by_type: Vec<Vec<ObjId>>,
}

impl LiftedProblem {
    pub(crate) fn assemble(
        name: String,
        domain: Arc<DomainModel>,
        objects: Vec<Object>,
        init: State,
        goal: Vec<Proposition>,
    ) -> Self {
        let mut static_mask = vec![false; domain.predicates.len()];
        for p in domain.static_predicates() {
            static_mask[p.index()] = true;
        }
        let statics = init
            .props()
            .iter()
            .filter(|p| static_mask[p.predicate.index()])
            .cloned()
            .collect();
        let objects_by_type = (0..domain.types.len())
            .map(|t| {
                objects
                    .iter()
                    .enumerate()
                    .filter(|(_, o)| domain.is_subtype(o.ty, TypeId(t as u32)))
                    .map(|(i, _)| ObjId(i as u32))
                    .collect()
            })
            .collect();
        let constant_objects = domain
            .constants
            .iter()
            .map(|c| {
                let i = objects
                    .binary_search_by(|o| o.name.as_str().cmp(&c.name))
                    .expect("constants are always registered as objects");
                ObjId(i as u32)
            })
            .collect();
        let mut goal = goal;
        goal.sort_unstable();
        goal.dedup();
        LiftedProblem {
            name,
            domain,
            objects,
            constant_objects,
            init,
            goal,
            static_mask,
            statics,
            objects_by_type,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &DomainModel {
        &self.domain
    }

    pub fn shared_domain(&self) -> &Arc<DomainModel> {
        &self.domain
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.objects
            .binary_search_by(|o| o.name.as_str().cmp(name))
            .ok()
            .map(|i| ObjId(i as u32))
    }

    pub fn object_name(&self, id: ObjId) -> &str {
        &self.objects[id.index()].name
    }

    pub fn objects_of_type(&self, ty: TypeId) -> &[ObjId] {
        &self.objects_by_type[ty.index()]
    }

    pub(crate) fn constant_object(&self, index: usize) -> ObjId {
        self.constant_objects[index]
    }

    /// The initial state, static propositions included.
    pub fn initial_state(&self) -> &State {
        &self.init
    }

    pub fn goal(&self) -> &[Proposition] {
        &self.goal
    }

    pub fn is_static(&self, predicate: PredId) -> bool {
        self.static_mask[predicate.index()]
    }

    /// True propositions of static predicates; constant over every reachable state.
    pub fn static_state(&self) -> &State {
        &self.statics
    }

    /// Membership in `state ∪ statics`.
    pub fn holds(&self, state: &State, prop: &Proposition) -> bool {
        if self.is_static(prop.predicate) {
            self.statics.contains(prop) || state.contains(prop)
        } else {
            state.contains(prop)
        }
    }

    pub fn is_goal(&self, state: &State) -> bool {
        self.goal.iter().all(|g| self.holds(state, g))
    }

    pub fn is_applicable(&self, state: &State, action: &GroundAction) -> bool {
        action.pre.iter().all(|p| self.holds(state, p))
    }

    /// Successor state, checking applicability first.
    pub fn apply(&self, state: &State, action: &GroundAction) -> Result<State, InapplicableAction> {
        if !self.is_applicable(state, action) {
            return Err(InapplicableAction {
                action: self.format_action(action),
            });
        }
        Ok(state.apply_unchecked(action))
    }

    /// Same problem with a different goal; everything else is shared.
    pub fn with_goal(&self, goal: Vec<Proposition>) -> LiftedProblem {
        let mut p = self.clone();
        p.goal = goal;
        p.goal.sort_unstable();
        p.goal.dedup();
        p
    }

    /// Same problem started from `state`.
    pub fn with_initial_state(&self, state: State) -> LiftedProblem {
        let mut p = self.clone();
        p.init = state;
        p
    }

    pub fn with_name(mut self, name: impl Into<String>) -> LiftedProblem {
        self.name = name.into();
        self
    }

    pub fn format_prop(&self, prop: &Proposition) -> String {
        let mut s = format!("({}", self.domain.predicate(prop.predicate).name);
        for a in &prop.args {
            s.push(' ');
            s.push_str(self.object_name(*a));
        }
        s.push(')');
        s
    }

    /// `(name arg1 arg2 ...)`
    pub fn format_action(&self, action: &GroundAction) -> String {
        let mut s = format!("({}", self.domain.schema(action.schema).name);
        for a in &action.args {
            s.push(' ');
            s.push_str(self.object_name(*a));
        }
        s.push(')');
        s
    }

    /// Grounds `schema(args)` by name, checking arity and argument types.
    pub fn ground_by_name(&self, schema: &str, args: &[&str]) -> Option<GroundAction> {
        let sid = self.domain.schema_id(schema)?;
        let def = self.domain.schema(sid);
        if def.params.len() != args.len() {
            return None;
        }
        let mut ids = Vec::with_capacity(args.len());
        for (param, name) in def.params.iter().zip(args) {
            let id = self.object_id(name)?;
            if !self.domain.is_subtype(self.objects[id.index()].ty, param.ty) {
                return None;
            }
            ids.push(id);
        }
        Some(self.ground(sid, ids))
    }

    /// Looks up a proposition by predicate and object names.
    pub fn prop_by_name(&self, predicate: &str, args: &[&str]) -> Option<Proposition> {
        let pid = self.domain.predicate_id(predicate)?;
        if self.domain.predicate(pid).arity() != args.len() {
            return None;
        }
        let args = args
            .iter()
            .map(|a| self.object_id(a))
            .collect::<Option<Vec<_>>>()?;
        Some(Proposition::new(pid, args))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("action {action} is not applicable")]
pub struct InapplicableAction {
    pub action: String,
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate.0)?;
        for a in &self.args {
            write!(f, " {}", a.0)?;
        }
        write!(f, ")")
    }
}
