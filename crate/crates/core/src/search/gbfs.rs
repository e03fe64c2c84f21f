use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};
use std::time::{Duration, Instant};

use super::heuristic::{wl_state_key, Heuristic, HeuristicError};
use super::plan::Plan;
use super::report::{Outcome, SearchReport};
use crate::gnn::DEFAULT_LAYERS;
use crate::pddl::{GroundAction, LiftedProblem, State};
use crate::pruning::{prune_actions_with_budget, PruneStats, StateKeyRegistry};
use crate::symmetry::DEFAULT_ORBIT_BUDGET;
use crate::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub action_pruning: bool,
    pub state_pruning: bool,
    pub max_expansions: u64,
    pub time_limit: Option<Duration>,
    /// Orbit search nodes per expansion.
    pub orbit_budget: usize,
    /// Refinement rounds of the fallback WL key used when the heuristic
    /// supplies no key.
    pub wl_rounds: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            action_pruning: false,
            state_pruning: false,
            max_expansions: 1_000_000,
            time_limit: Some(Duration::from_secs(300)),
            orbit_budget: DEFAULT_ORBIT_BUDGET,
            wl_rounds: DEFAULT_LAYERS,
        }
    }
}

impl SearchConfig {
    pub fn with_pruning(action: bool, state: bool) -> Self {
        SearchConfig {
            action_pruning: action,
            state_pruning: state,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchNode {
    pub state: State,
    pub parent: Option<usize>,
    pub action: Option<GroundAction>,
    pub h: Real,
    pub g: u32,
    /// Insertion sequence number.
    pub seq: u64,
}

/// Open-list entry ordered by `(priority, seq)`, smallest first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Entry {
    pub primary: Real,
    pub secondary: Real,
    pub seq: u64,
    pub node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.primary
            .total_cmp(&other.primary)
            .then(self.secondary.total_cmp(&other.secondary))
            .then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn extract_plan(nodes: &[SearchNode], mut id: usize) -> Plan {
    let mut actions = Vec::new();
    while let (Some(p), Some(a)) = (nodes[id].parent, &nodes[id].action) {
        actions.push(a.clone());
        id = p;
    }
    actions.reverse();
    Plan { actions }
}

/// Eager greedy best-first search ordered by `(h, insertion order)`.
///
/// Exact duplicates are always discarded. Children are evaluated when
/// generated; the goal test happens when a node is expanded.
pub fn gbfs(
    problem: &LiftedProblem,
    heuristic: &mut dyn Heuristic,
    config: &SearchConfig,
) -> Result<SearchReport, HeuristicError> {
    let start = Instant::now();
    let mut stats = PruneStats::default();
    let mut registry = StateKeyRegistry::new();
    let mut report = SearchReport {
        outcome: Outcome::Exhausted,
        plan: None,
        expansions: 0,
        generated: 0,
        evaluated: 0,
        duplicates: 0,
        wall_time: Duration::ZERO,
        prune: PruneStats::default(),
    };

    // evaluation plus the state-pruning verdict (true = prune)
    let mut assess = |state: &State, stats: &mut PruneStats, report: &mut SearchReport| -> Result<(Real, bool), HeuristicError> {
        let eval = stats.time_embedding(|| heuristic.evaluate(problem, state))?;
        report.evaluated += 1;
        let mut pruned = false;
        if config.state_pruning {
            let key = match eval.key {
                Some(k) => k,
                None => stats.time_embedding(|| wl_state_key(problem, state, config.wl_rounds)),
            };
            stats.states_seen += 1;
            if registry.check_and_register(key) {
                stats.states_pruned += 1;
                pruned = true;
            }
        }
        Ok((eval.h, pruned))
    };

    let init = problem.initial_state().clone();
    let (h0, _) = assess(&init, &mut stats, &mut report)?;
    let mut nodes = vec![SearchNode {
        state: init.clone(),
        parent: None,
        action: None,
        h: h0,
        g: 0,
        seq: 0,
    }];
    let mut seen: HashSet<State> = HashSet::from([init]);
    let mut open = BinaryHeap::new();
    if h0.is_finite() {
        open.push(Reverse(Entry {
            primary: h0,
            secondary: 0.0,
            seq: 0,
            node: 0,
        }));
    }
    let mut seq = 1u64;

    while let Some(Reverse(entry)) = open.pop() {
        let id = entry.node;
        if problem.is_goal(&nodes[id].state) {
            report.outcome = Outcome::Solved;
            report.plan = Some(extract_plan(&nodes, id));
            break;
        }
        if report.expansions >= config.max_expansions || config.time_limit.is_some_and(|t| start.elapsed() >= t) {
            report.outcome = Outcome::ResourceLimit;
            break;
        }
        report.expansions += 1;
        let state = nodes[id].state.clone();
        let mut actions = problem.applicable_actions(&state);
        if config.action_pruning {
            stats.actions_seen += actions.len() as u64;
            let (kept, exact) =
                stats.time_orbits(|| prune_actions_with_budget(problem, &state, &actions, config.orbit_budget));
            if !exact {
                stats.inexact_orbits += 1;
            }
            stats.actions_pruned += (actions.len() - kept.len()) as u64;
            actions = kept;
        }
        for a in actions {
            let child = state.apply_unchecked(&a);
            report.generated += 1;
            if seen.contains(&child) {
                report.duplicates += 1;
                continue;
            }
            let (h, pruned) = assess(&child, &mut stats, &mut report)?;
            seen.insert(child.clone());
            if pruned || !h.is_finite() {
                continue;
            }
            nodes.push(SearchNode {
                state: child,
                parent: Some(id),
                action: Some(a),
                h,
                g: nodes[id].g + 1,
                seq,
            });
            open.push(Reverse(Entry {
                primary: h,
                secondary: 0.0,
                seq,
                node: nodes.len() - 1,
            }));
            seq += 1;
        }
    }
    report.wall_time = start.elapsed();
    report.prune = stats;
    Ok(report)
}
