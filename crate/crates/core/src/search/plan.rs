use std::fmt::Write;

use thiserror::Error;

use crate::pddl::{GroundAction, LiftedProblem};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Plan {
    pub actions: Vec<GroundAction>,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanInvalid {
    /// `step` is 1-based.
    #[error("step {step}: {action} is not applicable")]
    Inapplicable { step: usize, action: String },
    #[error("goal unsatisfied")]
    GoalUnsatisfied,
}

/// Checks each step's preconditions in order, then the goal.
pub fn validate_plan(problem: &LiftedProblem, plan: &Plan) -> Result<(), PlanInvalid> {
    let mut state = problem.initial_state().clone();
    for (i, a) in plan.actions.iter().enumerate() {
        state = problem.apply(&state, a).map_err(|_| PlanInvalid::Inapplicable {
            step: i + 1,
            action: problem.format_action(a),
        })?;
    }
    if problem.is_goal(&state) {
        Ok(())
    } else {
        Err(PlanInvalid::GoalUnsatisfied)
    }
}

/// One `(name arg ...)` line per action, then a `; cost = N (unit cost)` line.
pub fn format_plan(problem: &LiftedProblem, plan: &Plan) -> String {
    let mut out = String::new();
    for a in &plan.actions {
        let _ = writeln!(out, "{}", problem.format_action(a));
    }
    let _ = writeln!(out, "; cost = {} (unit cost)", plan.len());
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("plan line {line}: {message}")]
pub struct PlanParseError {
    pub line: usize,
    pub message: String,
}

/// Reads the format of [`format_plan`]. `;` starts a comment; names are
/// case-insensitive.
pub fn parse_plan(problem: &LiftedProblem, text: &str) -> Result<Plan, PlanParseError> {
    let mut actions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| PlanParseError { line, message };
        let content = raw.split(';').next().unwrap_or("").trim().to_lowercase();
        if content.is_empty() {
            continue;
        }
        let inner = content
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| err("expected `(name arg ...)`".into()))?;
        let mut tokens = inner.split_whitespace();
        let name = tokens.next().ok_or_else(|| err("empty action".into()))?;
        let args: Vec<&str> = tokens.collect();
        if problem.domain().schema_id(name).is_none() {
            return Err(err(format!("unknown action `{name}`")));
        }
        let action = problem
            .ground_by_name(name, &args)
            .ok_or_else(|| err(format!("bad arguments for `{name}`: {}", args.join(" "))))?;
        actions.push(action);
    }
    Ok(Plan { actions })
}
