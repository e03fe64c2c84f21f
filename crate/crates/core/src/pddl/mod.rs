//! Typed STRIPS: parsing, the lifted model, grounding and successor semantics.

mod error;
mod ground;
mod model;
mod parser;
mod sexpr;
mod writer;

pub use error::PddlError;
pub use model::*;
pub use parser::{parse_domain, parse_problem};
pub use sexpr::Pos;

/// Predicates occurring in no add or delete effect.
pub fn detect_static_predicates(domain: &DomainModel) -> Vec<PredId> {
    domain.static_predicates()
}

/// Parses a domain and a problem in one step.
pub fn load(domain_text: &str, problem_text: &str) -> Result<LiftedProblem, PddlError> {
    let domain = std::sync::Arc::new(parse_domain(domain_text)?);
    parse_problem(problem_text, &domain)
}
