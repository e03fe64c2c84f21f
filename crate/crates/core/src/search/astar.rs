use std::cmp::Reverse;
use std::collections::hash_map::Entry as MapEntry;
use std::collections::{BinaryHeap, HashMap};
use std::time::{Duration, Instant};

use super::gbfs::{extract_plan, Entry, SearchConfig, SearchNode};
use super::heuristic::{Heuristic, HeuristicError};
use super::report::{Outcome, SearchReport};
use crate::pddl::{LiftedProblem, State};
use crate::pruning::{prune_actions_with_budget, PruneStats};

/// A* on `f = g + h` with reopening; optimal for admissible `h`. Ties
/// prefer larger `g`, then insertion order. Action pruning is honored;
/// state pruning is not, since it could discard a cheaper path.
pub fn astar_optimal(
    problem: &LiftedProblem,
    heuristic: &mut dyn Heuristic,
    config: &SearchConfig,
) -> Result<SearchReport, HeuristicError> {
    let start = Instant::now();
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
    let init = problem.initial_state().clone();
    let h0 = heuristic.evaluate(problem, &init)?.h;
    report.evaluated += 1;
    let mut nodes = vec![SearchNode {
        state: init.clone(),
        parent: None,
        action: None,
        h: h0,
        g: 0,
        seq: 0,
    }];
    // best known g and cached h per state
    let mut best: HashMap<State, (u32, f64)> = HashMap::from([(init, (0, h0))]);
    let mut open = BinaryHeap::new();
    if h0.is_finite() {
        open.push(Reverse(Entry {
            primary: h0,
            secondary: 0.0,
            seq: 0,
            node: 0,
        }));
    }
    let mut seq = 1;
    while let Some(Reverse(entry)) = open.pop() {
        let id = entry.node;
        let g = nodes[id].g;
        if best[&nodes[id].state].0 < g {
            continue;
        }
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
            report.prune.actions_seen += actions.len() as u64;
            let (kept, exact) = prune_actions_with_budget(problem, &state, &actions, config.orbit_budget);
            report.prune.inexact_orbits += u64::from(!exact);
            report.prune.actions_pruned += (actions.len() - kept.len()) as u64;
            actions = kept;
        }
        for a in actions {
            let child = state.apply_unchecked(&a);
            report.generated += 1;
            let cg = g + 1;
            let h = match best.entry(child.clone()) {
                MapEntry::Occupied(mut e) => {
                    let (old_g, h) = *e.get();
                    if old_g <= cg {
                        report.duplicates += 1;
                        continue;
                    }
                    e.insert((cg, h));
                    h
                }
                MapEntry::Vacant(e) => {
                    let h = heuristic.evaluate(problem, &child)?.h;
                    report.evaluated += 1;
                    e.insert((cg, h));
                    h
                }
            };
            if !h.is_finite() {
                continue;
            }
            nodes.push(SearchNode {
                state: child,
                parent: Some(id),
                action: Some(a),
                h,
                g: cg,
                seq,
            });
            open.push(Reverse(Entry {
                primary: cg as f64 + h,
                secondary: -(cg as f64),
                seq,
                node: nodes.len() - 1,
            }));
            seq += 1;
        }
    }
    report.wall_time = start.elapsed();
    Ok(report)
}
