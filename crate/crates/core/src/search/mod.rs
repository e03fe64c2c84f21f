//! Greedy best-first and optimal search, heuristics, plans and reports.

mod astar;
mod gbfs;
mod heuristic;
mod plan;
mod report;

pub use astar::astar_optimal;
pub use gbfs::{gbfs, SearchConfig, SearchNode};
pub use heuristic::{
    goal_count, wl_state_key, Blind, Evaluation, GoalCount, HMax, Heuristic, HeuristicError, ModelHeuristic,
    WlHeuristic,
};
pub use plan::{format_plan, parse_plan, validate_plan, Plan, PlanInvalid, PlanParseError};
pub use report::{Outcome, SearchReport};
