use std::path::{Path, PathBuf};

use symplan::pddl::{self, LiftedProblem};

pub const FIXTURES_ENV: &str = "SYMPLAN_FIXTURES";

/// `path` as given when it exists, else under `$SYMPLAN_FIXTURES`, trying a
/// `.pddl` suffix in both places.
pub fn resolve(path: &Path) -> Result<PathBuf, String> {
    let mut candidates = vec![path.to_path_buf(), path.with_extension("pddl")];
    if let Some(root) = std::env::var_os(FIXTURES_ENV) {
        let root = PathBuf::from(root);
        candidates.push(root.join(path));
        candidates.push(root.join(path).with_extension("pddl"));
    }
    candidates
        .into_iter()
        .find(|c| c.is_file())
        .ok_or_else(|| format!("{}: no such file", path.display()))
}

pub fn read(path: &Path) -> Result<String, String> {
    let p = resolve(path)?;
    std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))
}

pub fn load_problem(domain: Option<&Path>, problem: &Path) -> Result<LiftedProblem, String> {
    let problem_path = resolve(problem)?;
    let domain_path = match domain {
        Some(d) => resolve(d)?,
        None => {
            let beside = problem_path.with_file_name("domain.pddl");
            if !beside.is_file() {
                return Err(format!("{}: no --domain given and no domain.pddl beside it", problem.display()));
            }
            beside
        }
    };
    let domain_text = std::fs::read_to_string(&domain_path).map_err(|e| format!("{}: {e}", domain_path.display()))?;
    let problem_text = std::fs::read_to_string(&problem_path).map_err(|e| format!("{}: {e}", problem_path.display()))?;
    pddl::load(&domain_text, &problem_text).map_err(|e| format!("{}: {e}", problem_path.display()))
}

pub fn write(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}
