use std::collections::HashMap;

use num_traits::Float;
use thiserror::Error;

use crate::gnn::{forward, wl_embedding, ForwardError, ModelWeights, WeightError};
use crate::pddl::{LiftedProblem, Proposition, State};
use crate::pruning::{integer_state_key, make_state_key, StateKey, StateKeyError};
use crate::tilg::build_tilg;
use crate::Real;

/// Heuristic value plus an optional symmetry key for state pruning.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// `Real::INFINITY` marks a recognized dead end.
    pub h: Real,
    pub key: Option<StateKey>,
}

#[derive(Debug, Error)]
pub enum HeuristicError {
    #[error(transparent)]
    Forward(#[from] ForwardError),
    #[error(transparent)]
    Key(#[from] StateKeyError),
    #[error(transparent)]
    Weights(#[from] WeightError),
}

pub trait Heuristic {
    fn name(&self) -> String;
    fn evaluate(&mut self, problem: &LiftedProblem, state: &State) -> Result<Evaluation, HeuristicError>;
}

/// Constant zero.
pub struct Blind;

impl Heuristic for Blind {
    fn name(&self) -> String {
        "blind".into()
    }
    fn evaluate(&mut self, _: &LiftedProblem, _: &State) -> Result<Evaluation, HeuristicError> {
        Ok(Evaluation { h: 0.0, key: None })
    }
}

/// Number of goal propositions not true in the state.
pub fn goal_count(problem: &LiftedProblem, state: &State) -> Real {
    problem.goal().iter().filter(|g| !problem.holds(state, g)).count() as Real
}

pub struct GoalCount;

impl Heuristic for GoalCount {
    fn name(&self) -> String {
        "goal-count".into()
    }
    fn evaluate(&mut self, problem: &LiftedProblem, state: &State) -> Result<Evaluation, HeuristicError> {
        Ok(Evaluation {
            h: goal_count(problem, state),
            key: None,
        })
    }
}

/// Hashed WL key of the state's TILG.
pub fn wl_state_key(problem: &LiftedProblem, state: &State, rounds: usize) -> StateKey {
    integer_state_key(&wl_embedding(&build_tilg(problem, state), rounds))
}

/// Goal-count guidance with WL state keys.
pub struct WlHeuristic {
    pub rounds: usize,
}

impl Heuristic for WlHeuristic {
    fn name(&self) -> String {
        "wl".into()
    }
    fn evaluate(&mut self, problem: &LiftedProblem, state: &State) -> Result<Evaluation, HeuristicError> {
        Ok(Evaluation {
            h: goal_count(problem, state),
            key: Some(wl_state_key(problem, state, self.rounds)),
        })
    }
}

/// Unit-cost max-relaxation over the ground actions reachable from the
/// initial state when deletes are ignored.
pub struct HMax {
    index: HashMap<Proposition, usize>,
    /// (precondition ids, add ids)
    actions: Vec<(Vec<usize>, Vec<usize>)>,
    by_pre: Vec<Vec<usize>>,
    goal: Vec<Option<usize>>,
}

impl HMax {
    pub fn new(problem: &LiftedProblem) -> Self {
        let mut reached: State = problem.initial_state().union(problem.static_state());
        let ground = loop {
            let ground = problem.applicable_actions(&reached);
            let next: State = reached
                .props()
                .iter()
                .cloned()
                .chain(ground.iter().flat_map(|a| a.add.iter().cloned()))
                .collect();
            if next.len() == reached.len() {
                break ground;
            }
            reached = next;
        };
        let index: HashMap<Proposition, usize> =
            reached.props().iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let actions: Vec<(Vec<usize>, Vec<usize>)> = ground
            .iter()
            .map(|a| {
                let ids = |ps: &[Proposition]| ps.iter().map(|p| index[p]).collect::<Vec<_>>();
                (ids(&a.pre), ids(&a.add))
            })
            .collect();
        let mut by_pre = vec![Vec::new(); index.len()];
        for (i, (pre, _)) in actions.iter().enumerate() {
            for &p in pre {
                by_pre[p].push(i);
            }
        }
        let goal = problem.goal().iter().map(|g| index.get(g).copied()).collect();
        HMax {
            index,
            actions,
            by_pre,
            goal,
        }
    }

    /// Relaxed-planning-graph level of every goal, maximized.
    pub fn value(&self, problem: &LiftedProblem, state: &State) -> Real {
        if self.goal.iter().any(Option::is_none) {
            return Real::INFINITY;
        }
        let n = self.index.len();
        let mut level = vec![usize::MAX; n];
        let mut frontier = Vec::new();
        for p in state.props().iter().chain(problem.static_state().props()) {
            if let Some(&i) = self.index.get(p) {
                if level[i] == usize::MAX {
                    level[i] = 0;
                    frontier.push(i);
                }
            }
        }
        let mut missing: Vec<usize> = self.actions.iter().map(|(pre, _)| pre.len()).collect();
        let mut depth = 0;
        let mut ready: Vec<usize> = (0..self.actions.len()).filter(|&a| missing[a] == 0).collect();
        loop {
            for &p in &frontier {
                for &a in &self.by_pre[p] {
                    missing[a] -= 1;
                    if missing[a] == 0 {
                        ready.push(a);
                    }
                }
            }
            frontier.clear();
            depth += 1;
            for &a in &ready {
                for &q in &self.actions[a].1 {
                    if level[q] == usize::MAX {
                        level[q] = depth;
                        frontier.push(q);
                    }
                }
            }
            ready.clear();
            if frontier.is_empty() {
                break;
            }
        }
        let mut h = 0usize;
        for g in self.goal.iter().flatten() {
            if level[*g] == usize::MAX {
                return Real::INFINITY;
            }
            h = h.max(level[*g]);
        }
        h as Real
    }
}

impl Heuristic for HMax {
    fn name(&self) -> String {
        "hmax".into()
    }
    fn evaluate(&mut self, problem: &LiftedProblem, state: &State) -> Result<Evaluation, HeuristicError> {
        Ok(Evaluation {
            h: self.value(problem, state),
            key: None,
        })
    }
}

/// Learned heuristic; the pooled embedding doubles as the state key.
pub struct ModelHeuristic<T> {
    pub weights: ModelWeights<T>,
    pub scale: u32,
}

impl<T: Float> ModelHeuristic<T> {
    pub fn new(weights: ModelWeights<T>, problem: &LiftedProblem, scale: u32) -> Result<Self, HeuristicError> {
        weights.check_domain(problem.domain())?;
        Ok(ModelHeuristic { weights, scale })
    }
}

impl<T: Float> Heuristic for ModelHeuristic<T> {
    fn name(&self) -> String {
        format!("model({} layers)", self.weights.layers.len())
    }
    fn evaluate(&mut self, problem: &LiftedProblem, state: &State) -> Result<Evaluation, HeuristicError> {
        let (z, h) = forward(&self.weights, &build_tilg(problem, state))?;
        Ok(Evaluation {
            h: h.to_f64().expect("finite"),
            key: Some(make_state_key(&z.0, self.scale)?),
        })
    }
}
