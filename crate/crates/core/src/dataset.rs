//! Training and validation data from optimal plans.
//!
//! File format: JSON lines. The first line is a header
//! `{"format":"symplan-dataset","version":1,"kind":...,"count":N}` and each
//! following line is one record tagged by `"type"` (`labeled` or `sibling`).

use std::collections::HashSet;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pddl::{LiftedProblem, Proposition, State};
use crate::search::{astar_optimal, HMax, Plan, SearchConfig};
use crate::tilg::{build_tilg, TilgGraph};

pub const DATASET_FORMAT: &str = "symplan-dataset";
pub const DATASET_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub problem: String,
    pub step: usize,
    /// Set for records of a subgoal-prefix problem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmented: Option<AugmentInfo>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentInfo {
    pub base: String,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledGraph {
    pub graph: TilgGraph,
    /// Optimal remaining plan length.
    pub target: u32,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiblingRecord {
    pub optimal_child: TilgGraph,
    pub siblings: Vec<TilgGraph>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DatasetRecord {
    Labeled(LabeledGraph),
    Sibling(SiblingRecord),
}

#[derive(Debug, Clone)]
pub struct AugmentedProblem {
    pub base: String,
    pub k: usize,
    pub problem: LiftedProblem,
}

impl AugmentedProblem {
    pub fn goal(&self) -> &[Proposition] {
        self.problem.goal()
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("plan step {step} is not applicable")]
    InvalidPlan { step: usize },
    #[error("plan does not reach goal proposition {0}")]
    GoalNotReached(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("unsupported dataset version {found}, expected {expected}")]
    Version { found: u32, expected: u32 },
}

/// `s_0 .. s_L` along `plan`.
pub fn plan_states(problem: &LiftedProblem, plan: &Plan) -> Result<Vec<State>, DatasetError> {
    let mut states = vec![problem.initial_state().clone()];
    for (i, a) in plan.actions.iter().enumerate() {
        let next = problem
            .apply(states.last().expect("non-empty"), a)
            .map_err(|_| DatasetError::InvalidPlan { step: i + 1 })?;
        states.push(next);
    }
    Ok(states)
}

/// `(TILG(s_i), L - i)` for every state on the plan.
pub fn extract_training_pairs(problem: &LiftedProblem, plan: &Plan) -> Result<Vec<LabeledGraph>, DatasetError> {
    let states = plan_states(problem, plan)?;
    let last = states.len() - 1;
    Ok(states
        .iter()
        .enumerate()
        .map(|(i, s)| LabeledGraph {
            graph: build_tilg(problem, s),
            target: (last - i) as u32,
            provenance: Provenance {
                problem: problem.name().to_string(),
                step: i,
                augmented: None,
            },
        })
        .collect())
}

/// Goal propositions by the step after which each stays true to the end,
/// ties in canonical order.
pub fn subgoal_order(problem: &LiftedProblem, plan: &Plan) -> Result<Vec<Proposition>, DatasetError> {
    let states = plan_states(problem, plan)?;
    let mut tagged = Vec::with_capacity(problem.goal().len());
    for g in problem.goal() {
        let mut since = None;
        for (i, s) in states.iter().enumerate().rev() {
            if problem.holds(s, g) {
                since = Some(i);
            } else {
                break;
            }
        }
        let i = since.ok_or_else(|| DatasetError::GoalNotReached(problem.format_prop(g)))?;
        tagged.push((i, g.clone()));
    }
    tagged.sort();
    Ok(tagged.into_iter().map(|(_, g)| g).collect())
}

/// The `n - 1` problems whose goals are the first `k` subgoals in
/// last-achievement order, `k = 1..n-1`.
pub fn augment_subgoal_prefixes(problem: &LiftedProblem, plan: &Plan) -> Result<Vec<AugmentedProblem>, DatasetError> {
    let order = subgoal_order(problem, plan)?;
    let n = order.len();
    Ok((1..n)
        .map(|k| AugmentedProblem {
            base: problem.name().to_string(),
            k,
            problem: problem
                .with_goal(order[..k].to_vec())
                .with_name(format!("{}-prefix{k}", problem.name())),
        })
        .collect())
}

/// For each plan step with alternatives: the child reached by the plan's
/// action and the distinct other children.
pub fn sibling_validation_set(problem: &LiftedProblem, plan: &Plan) -> Result<Vec<SiblingRecord>, DatasetError> {
    let states = plan_states(problem, plan)?;
    let mut out = Vec::new();
    for (i, a) in plan.actions.iter().enumerate() {
        let s = &states[i];
        let best = &states[i + 1];
        let mut seen: HashSet<&State> = HashSet::from([best]);
        let children: Vec<State> = problem
            .applicable_actions(s)
            .iter()
            .filter(|b| *b != a)
            .map(|b| s.apply_unchecked(b))
            .collect();
        let mut siblings = Vec::new();
        for c in &children {
            if seen.insert(c) {
                siblings.push(build_tilg(problem, c));
            }
        }
        if siblings.is_empty() {
            continue;
        }
        out.push(SiblingRecord {
            optimal_child: build_tilg(problem, best),
            siblings,
            provenance: Provenance {
                problem: problem.name().to_string(),
                step: i,
                augmented: None,
            },
        });
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    kind: String,
    count: usize,
}

/// Serializes `records` with a header line of the given `kind`.
pub fn dataset_to_string(records: &[DatasetRecord], kind: &str) -> String {
    let header = Header {
        format: DATASET_FORMAT.into(),
        version: DATASET_VERSION,
        kind: kind.into(),
        count: records.len(),
    };
    let mut out = serde_json::to_string(&header).expect("serializable");
    out.push('\n');
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("serializable"));
        out.push('\n');
    }
    out
}

/// Parses a dataset, returning its kind and records.
pub fn dataset_from_str(text: &str) -> Result<(String, Vec<DatasetRecord>), DatasetError> {
    let mut lines = text.lines();
    let first = lines.next().ok_or(DatasetError::Malformed {
        line: 1,
        message: "missing header".into(),
    })?;
    let header: Header = serde_json::from_str(first).map_err(|e| DatasetError::Malformed {
        line: 1,
        message: format!("bad header: {e}"),
    })?;
    if header.format != DATASET_FORMAT {
        return Err(DatasetError::Malformed {
            line: 1,
            message: format!("unknown format `{}`", header.format),
        });
    }
    if header.version != DATASET_VERSION {
        return Err(DatasetError::Version {
            found: header.version,
            expected: DATASET_VERSION,
        });
    }
    let mut records = Vec::with_capacity(header.count);
    for (i, line) in lines.enumerate() {
        let record = serde_json::from_str(line).map_err(|e| DatasetError::Malformed {
            line: i + 2,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    if records.len() != header.count {
        return Err(DatasetError::Malformed {
            line: records.len() + 2,
            message: format!("header announces {} records, found {}", header.count, records.len()),
        });
    }
    Ok((header.kind, records))
}

pub fn write_dataset(records: &[DatasetRecord], kind: &str, path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(dataset_to_string(records, kind).as_bytes())?;
    Ok(())
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<(String, Vec<DatasetRecord>), DatasetError> {
    dataset_from_str(&std::fs::read_to_string(path)?)
}

/// Optimal plan by A* with h_max, if one is found within `config` limits.
pub fn optimal_plan(problem: &LiftedProblem, config: &SearchConfig) -> Option<Plan> {
    let config = SearchConfig {
        action_pruning: false,
        state_pruning: false,
        ..config.clone()
    };
    let mut h = HMax::new(problem);
    astar_optimal(problem, &mut h, &config).ok().and_then(|r| r.plan)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationSummary {
    pub problems: usize,
    pub solved: usize,
    pub skipped: Vec<String>,
    pub augmented_problems: usize,
    pub train_records: usize,
    pub validation_records: usize,
}

/// Training records (optionally with prefix problems) from `train` and
/// sibling records from the held-out `validation` problems. Unsolved
/// problems are skipped and listed in the summary.
pub fn generate(
    train: &[LiftedProblem],
    validation: &[LiftedProblem],
    augment: bool,
    config: &SearchConfig,
) -> Result<(Vec<DatasetRecord>, Vec<DatasetRecord>, GenerationSummary), DatasetError> {
    let mut summary = GenerationSummary {
        problems: train.len() + validation.len(),
        ..Default::default()
    };
    let mut train_records = Vec::new();
    for p in train {
        let Some(plan) = optimal_plan(p, config) else {
            summary.skipped.push(p.name().to_string());
            continue;
        };
        summary.solved += 1;
        train_records.extend(extract_training_pairs(p, &plan)?.into_iter().map(DatasetRecord::Labeled));
        if augment {
            for aug in augment_subgoal_prefixes(p, &plan)? {
                let Some(sub) = optimal_plan(&aug.problem, config) else {
                    summary.skipped.push(aug.problem.name().to_string());
                    continue;
                };
                summary.augmented_problems += 1;
                for mut r in extract_training_pairs(&aug.problem, &sub)? {
                    r.provenance.augmented = Some(AugmentInfo {
                        base: aug.base.clone(),
                        k: aug.k,
                    });
                    train_records.push(DatasetRecord::Labeled(r));
                }
            }
        }
    }
    let mut validation_records = Vec::new();
    for p in validation {
        let Some(plan) = optimal_plan(p, config) else {
            summary.skipped.push(p.name().to_string());
            continue;
        };
        summary.solved += 1;
        validation_records.extend(sibling_validation_set(p, &plan)?.into_iter().map(DatasetRecord::Sibling));
    }
    summary.train_records = train_records.len();
    summary.validation_records = validation_records.len();
    Ok((train_records, validation_records, summary))
}
