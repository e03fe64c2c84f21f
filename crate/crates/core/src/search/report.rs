use std::fmt::Write;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::plan::Plan;
use crate::pruning::PruneStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Solved,
    Exhausted,
    ResourceLimit,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Solved => "solved",
            Outcome::Exhausted => "exhausted",
            Outcome::ResourceLimit => "resource-limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub outcome: Outcome,
    pub plan: Option<Plan>,
    pub expansions: u64,
    pub generated: u64,
    pub evaluated: u64,
    /// Exact duplicates discarded.
    pub duplicates: u64,
    pub wall_time: Duration,
    pub prune: PruneStats,
}

impl SearchReport {
    pub fn solved(&self) -> bool {
        self.outcome == Outcome::Solved
    }

    pub fn plan_length(&self) -> Option<usize> {
        self.plan.as_ref().map(Plan::len)
    }

    /// Machine-readable form. Durations are included only when `timings`
    /// is set so that reports of identical runs compare equal byte for byte.
    pub fn to_json(&self, timings: bool) -> serde_json::Value {
        let mut v = json!({
            "outcome": self.outcome.as_str(),
            "plan_length": self.plan_length(),
            "expansions": self.expansions,
            "generated": self.generated,
            "evaluated": self.evaluated,
            "duplicates": self.duplicates,
            "prune": {
                "actions_seen": self.prune.actions_seen,
                "actions_pruned": self.prune.actions_pruned,
                "states_seen": self.prune.states_seen,
                "states_pruned": self.prune.states_pruned,
                "inexact_orbits": self.prune.inexact_orbits,
            },
        });
        if timings {
            v["timings"] = json!({
                "wall_seconds": self.wall_time.as_secs_f64(),
                "orbit_seconds": self.prune.orbit_time.as_secs_f64(),
                "embed_seconds": self.prune.embed_time.as_secs_f64(),
            });
        }
        v
    }

    /// `key = value` lines in the same field order as the JSON form.
    pub fn to_text(&self, timings: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "outcome = {}", self.outcome.as_str());
        match self.plan_length() {
            Some(l) => {
                let _ = writeln!(out, "plan_length = {l}");
            }
            None => out.push_str("plan_length = none\n"),
        }
        for (k, v) in [
            ("expansions", self.expansions),
            ("generated", self.generated),
            ("evaluated", self.evaluated),
            ("duplicates", self.duplicates),
            ("actions_seen", self.prune.actions_seen),
            ("actions_pruned", self.prune.actions_pruned),
            ("states_seen", self.prune.states_seen),
            ("states_pruned", self.prune.states_pruned),
            ("inexact_orbits", self.prune.inexact_orbits),
        ] {
            let _ = writeln!(out, "{k} = {v}");
        }
        if timings {
            let _ = writeln!(out, "wall_seconds = {:.6}", self.wall_time.as_secs_f64());
            let _ = writeln!(out, "orbit_seconds = {:.6}", self.prune.orbit_time.as_secs_f64());
            let _ = writeln!(out, "embed_seconds = {:.6}", self.prune.embed_time.as_secs_f64());
        }
        out
    }
}
