use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use num_traits::Float;
use serde_json::json;
use symplan::dataset::{self, DatasetRecord};
use symplan::generators::{self, SpannerPlacement};
use symplan::gnn::{ModelWeights, DEFAULT_LAYERS};
use symplan::pddl::LiftedProblem;
use symplan::search::{
    format_plan, gbfs, parse_plan, validate_plan, GoalCount, HMax, Heuristic, ModelHeuristic, SearchConfig,
    SearchReport, WlHeuristic,
};
use symplan::tilg::{build_tilg, Payload, TilgGraph};

use crate::input::{load_problem, read, write};
use crate::{
    AblateArgs, ExportGraphArgs, Family, GenDataArgs, GenerateArgs, GraphFormat, Placement, Precision, SearchArgs,
    SolveArgs, Toggle, ValidateArgs,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeuristicSpec {
    GoalCount,
    HMax,
    Wl,
    Model(PathBuf),
}

impl fmt::Display for HeuristicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeuristicSpec::GoalCount => f.write_str("goal-count"),
            HeuristicSpec::HMax => f.write_str("hmax"),
            HeuristicSpec::Wl => f.write_str("wl"),
            HeuristicSpec::Model(p) => write!(f, "model:{}", p.display()),
        }
    }
}

pub fn parse_heuristic(s: &str) -> Result<HeuristicSpec, String> {
    match s {
        "goal-count" => Ok(HeuristicSpec::GoalCount),
        "hmax" => Ok(HeuristicSpec::HMax),
        "wl" => Ok(HeuristicSpec::Wl),
        _ => match s.strip_prefix("model:") {
            Some(p) if !p.is_empty() => Ok(HeuristicSpec::Model(PathBuf::from(p))),
            Some(_) => Err("model heuristic needs a weight file: model:<path>".into()),
            None => Err(format!("unknown heuristic `{s}` (goal-count, hmax, wl, model:<path>)")),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PruneSpec {
    pub action: bool,
    pub state: bool,
}

impl PruneSpec {
    const GRID: [PruneSpec; 4] = [
        PruneSpec { action: false, state: false },
        PruneSpec { action: true, state: false },
        PruneSpec { action: false, state: true },
        PruneSpec { action: true, state: true },
    ];

    fn row_name(self) -> &'static str {
        match (self.action, self.state) {
            (false, false) => "none",
            (true, false) => "action",
            (false, true) => "state",
            (true, true) => "both",
        }
    }
}

impl fmt::Display for PruneSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match (self.action, self.state) {
            (false, false) => "none",
            (true, false) => "action",
            (false, true) => "state",
            (true, true) => "action,state",
        })
    }
}

pub fn parse_prune(s: &str) -> Result<PruneSpec, String> {
    let mut spec = PruneSpec { action: false, state: false };
    for part in s.split(',').map(str::trim) {
        match part {
            "none" if s.trim() == "none" => {}
            "action" => spec.action = true,
            "state" => spec.state = true,
            "both" => {
                spec.action = true;
                spec.state = true;
            }
            _ => return Err(format!("unknown pruning `{part}` (none, action, state, both)")),
        }
    }
    Ok(spec)
}

fn time_limit(seconds: f64) -> Option<Duration> {
    (seconds > 0.0).then(|| Duration::from_secs_f64(seconds))
}

fn search_config(args: &SearchArgs, prune: PruneSpec) -> SearchConfig {
    SearchConfig {
        action_pruning: prune.action,
        state_pruning: prune.state,
        max_expansions: args.max_expansions,
        time_limit: time_limit(args.time_limit),
        orbit_budget: args.orbit_budget,
        wl_rounds: args.layers.unwrap_or(DEFAULT_LAYERS),
    }
}

fn model_heuristic<T: Float + 'static>(
    path: &Path,
    problem: &LiftedProblem,
    args: &SearchArgs,
) -> Result<Box<dyn Heuristic>, String> {
    let text = read(path)?;
    let weights = ModelWeights::<T>::from_json_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(l) = args.layers {
        if l != weights.metadata.num_layers {
            return Err(format!(
                "--layers {l} does not match the {} layers in {}",
                weights.metadata.num_layers,
                path.display()
            ));
        }
    }
    let h = ModelHeuristic::new(weights, problem, args.scale).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(Box::new(h))
}

fn make_heuristic(problem: &LiftedProblem, args: &SearchArgs) -> Result<Box<dyn Heuristic>, String> {
    let rounds = args.layers.unwrap_or(DEFAULT_LAYERS);
    Ok(match &args.heuristic {
        HeuristicSpec::GoalCount => Box::new(GoalCount),
        HeuristicSpec::HMax => Box::new(HMax::new(problem)),
        HeuristicSpec::Wl => Box::new(WlHeuristic { rounds }),
        HeuristicSpec::Model(path) => match args.precision {
            Precision::F64 => model_heuristic::<f64>(path, problem, args)?,
            Precision::F32 => model_heuristic::<f32>(path, problem, args)?,
        },
    })
}

fn run(problem: &LiftedProblem, args: &SearchArgs, prune: PruneSpec) -> Result<SearchReport, String> {
    let mut h = make_heuristic(problem, args)?;
    gbfs(problem, h.as_mut(), &search_config(args, prune)).map_err(|e| format!("{}: {e}", problem.name()))
}

fn solve_json(problem: &LiftedProblem, args: &SolveArgs, report: &SearchReport) -> serde_json::Value {
    json!({
        "problem": problem.name(),
        "domain": problem.domain().name,
        "heuristic": args.search.heuristic.to_string(),
        "prune": args.prune.to_string(),
        "seed": args.search.seed,
        "search": report.to_json(args.search.timings),
    })
}

fn solve_text(problem: &LiftedProblem, args: &SolveArgs, report: &SearchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "problem = {}", problem.name());
    let _ = writeln!(out, "domain = {}", problem.domain().name);
    let _ = writeln!(out, "heuristic = {}", args.search.heuristic);
    let _ = writeln!(out, "prune = {}", args.prune);
    let _ = writeln!(out, "seed = {}", args.search.seed);
    out.push_str(&report.to_text(args.search.timings));
    out
}

pub fn solve(args: SolveArgs) -> Result<u8, String> {
    let problem = load_problem(args.problem.domain.as_deref(), &args.problem.problem)?;
    let report = run(&problem, &args.search, args.prune)?;
    if let (Some(path), Some(plan)) = (&args.plan, &report.plan) {
        write(path, &format_plan(&problem, plan))?;
    }
    let json = solve_json(&problem, &args, &report);
    let json_text = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
    if let Some(path) = &args.report {
        write(path, &json_text)?;
    }
    if args.json {
        print!("{json_text}");
    } else {
        print!("{}", solve_text(&problem, &args, &report));
    }
    Ok(if report.solved() { 0 } else { 1 })
}

pub fn gen_data(args: GenDataArgs) -> Result<u8, String> {
    let load_all = |paths: &[PathBuf]| -> Result<Vec<LiftedProblem>, String> {
        paths.iter().map(|p| load_problem(args.domain.as_deref(), p)).collect()
    };
    let train = load_all(&args.train)?;
    let validation = load_all(&args.validation)?;
    let config = SearchConfig {
        max_expansions: args.max_expansions,
        time_limit: time_limit(args.time_limit),
        ..SearchConfig::default()
    };
    let (train_records, val_records, summary) =
        dataset::generate(&train, &validation, args.augment == Toggle::On, &config).map_err(|e| e.to_string())?;
    for name in &summary.skipped {
        eprintln!("warning: {name}: no optimal plan found, skipped");
    }
    std::fs::create_dir_all(&args.out_dir).map_err(|e| format!("{}: {e}", args.out_dir.display()))?;
    let save = |records: &[DatasetRecord], kind: &str| {
        let path = args.out_dir.join(format!("{kind}.jsonl"));
        dataset::write_dataset(records, kind, &path).map_err(|e| format!("{}: {e}", path.display()))
    };
    save(&train_records, "train")?;
    save(&val_records, "validation")?;
    let summary_text = serde_json::to_string_pretty(&summary).expect("serializable") + "\n";
    write(&args.out_dir.join("summary.json"), &summary_text)?;
    println!(
        "problems = {}\nsolved = {}\nskipped = {}\naugmented_problems = {}\ntrain_records = {}\nvalidation_records = {}",
        summary.problems,
        summary.solved,
        summary.skipped.len(),
        summary.augmented_problems,
        summary.train_records,
        summary.validation_records
    );
    Ok(0)
}

#[derive(Default)]
struct Row {
    solved: usize,
    valid: usize,
    errors: usize,
    expansions: u64,
    plan_length: usize,
    runs: Vec<serde_json::Value>,
}

pub fn ablate(args: AblateArgs) -> Result<u8, String> {
    let problems: Vec<LiftedProblem> = args
        .problems
        .iter()
        .map(|p| load_problem(args.domain.as_deref(), p))
        .collect::<Result<_, _>>()?;
    let total = problems.len();
    let mut rows = Vec::new();
    if total > 0 {
        for spec in PruneSpec::GRID {
            let mut row = Row::default();
            for p in &problems {
                match run(p, &args.search, spec) {
                    Ok(r) => {
                        if let Some(plan) = &r.plan {
                            row.solved += 1;
                            row.expansions += r.expansions;
                            row.plan_length += plan.len();
                            if validate_plan(p, plan).is_ok() {
                                row.valid += 1;
                            }
                        }
                        let mut run = r.to_json(args.search.timings);
                        run["problem"] = p.name().into();
                        row.runs.push(run);
                    }
                    Err(e) => {
                        row.errors += 1;
                        row.runs.push(json!({ "problem": p.name(), "error": e }));
                    }
                }
            }
            rows.push((spec, row));
        }
    }
    let mut table = format!(
        "{:<8} {:>10} {:>12} {:>12} {:>6} {:>7}\n",
        "config", "coverage", "expansions", "plan_length", "valid", "errors"
    );
    for (spec, r) in &rows {
        let _ = writeln!(
            table,
            "{:<8} {:>10} {:>12} {:>12} {:>6} {:>7}",
            spec.row_name(),
            format!("{}/{total}", r.solved),
            r.expansions,
            r.plan_length,
            r.valid,
            r.errors
        );
    }
    let json = json!({
        "heuristic": args.search.heuristic.to_string(),
        "seed": args.search.seed,
        "problems": problems.iter().map(|p| p.name()).collect::<Vec<_>>(),
        "rows": rows.iter().map(|(spec, r)| json!({
            "config": spec.row_name(),
            "solved": r.solved,
            "total": total,
            "expansions": r.expansions,
            "plan_length": r.plan_length,
            "valid": r.valid,
            "errors": r.errors,
            "runs": r.runs,
        })).collect::<Vec<_>>(),
    });
    if let Some(path) = &args.out {
        write(path, &table)?;
    }
    if let Some(path) = &args.json {
        write(path, &(serde_json::to_string_pretty(&json).expect("serializable") + "\n"))?;
    }
    print!("{table}");
    Ok(0)
}

pub fn validate(args: ValidateArgs) -> Result<u8, String> {
    let problem = load_problem(args.problem.domain.as_deref(), &args.problem.problem)?;
    let text = read(&args.plan)?;
    let plan = match parse_plan(&problem, &text) {
        Ok(p) => p,
        Err(e) => {
            println!("invalid: {e}");
            return Ok(1);
        }
    };
    match validate_plan(&problem, &plan) {
        Ok(()) => {
            println!("valid: {} steps", plan.len());
            Ok(0)
        }
        Err(e) => {
            println!("invalid: {e}");
            Ok(1)
        }
    }
}

pub fn export_graph(args: ExportGraphArgs) -> Result<u8, String> {
    let problem = load_problem(args.problem.domain.as_deref(), &args.problem.problem)?;
    let mut state = problem.initial_state().clone();
    if let Some(path) = &args.plan {
        let plan = parse_plan(&problem, &read(path)?).map_err(|e| e.to_string())?;
        let steps = args.steps.unwrap_or(plan.len()).min(plan.len());
        for (i, a) in plan.actions[..steps].iter().enumerate() {
            state = problem
                .apply(&state, a)
                .map_err(|e| format!("plan step {}: {e}", i + 1))?;
        }
    }
    let graph = build_tilg(&problem, &state);
    let text = match args.format {
        GraphFormat::Colored => graph.to_colored_graph().to_text(),
        GraphFormat::Json => serde_json::to_string(&graph).expect("serializable") + "\n",
        GraphFormat::Debug => named_listing(&problem, &graph),
    };
    match &args.out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

/// `id status class name` per vertex, then `object proposition label` per edge.
fn named_listing(problem: &LiftedProblem, graph: &TilgGraph) -> String {
    let mut out = String::new();
    for (v, vert) in graph.vertices.iter().enumerate() {
        let name = match &vert.payload {
            Payload::Object(o) => problem.object_name(*o).to_string(),
            Payload::Proposition(p) => problem.format_prop(p),
        };
        let _ = writeln!(out, "{v} {} {} {name}", vert.status, vert.class);
    }
    for e in &graph.edges {
        let _ = writeln!(out, "{} {} {}", e.object, e.proposition, e.label);
    }
    out
}

pub fn generate(args: GenerateArgs) -> Result<u8, String> {
    let (domain, problem) = match args.family {
        Family::Gripper { balls } => (generators::GRIPPER_DOMAIN, generators::gripper(balls)),
        Family::Blocksworld { blocks, seed } => (generators::BLOCKSWORLD_DOMAIN, generators::blocksworld_random(blocks, seed)),
        Family::Spanner {
            spanners,
            nuts,
            locations,
            placement,
        } => {
            let placement = match placement {
                Placement::Together => SpannerPlacement::Together,
                Placement::Spread => SpannerPlacement::Spread,
            };
            (generators::SPANNER_DOMAIN, generators::spanner(spanners, nuts, locations, placement))
        }
        Family::Movie { n } => (generators::MOVIE_DOMAIN, generators::movie(n)),
        Family::Logistics { cities, packages } => (generators::LOGISTICS_DOMAIN, generators::logistics(cities, packages)),
        Family::Pairing { n } => (generators::PAIRING_DOMAIN, generators::pairing(n)),
    };
    if let Some(path) = &args.domain_out {
        write(path, domain)?;
    }
    match &args.out {
        Some(path) => write(path, &problem)?,
        None => print!("{problem}"),
    }
    Ok(0)
}
