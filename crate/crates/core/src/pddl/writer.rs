//! PDDL text output. `parse(write(parse(x)))` equals `parse(x)`.

use std::fmt::Write;

use super::model::*;

fn term_name(domain: &DomainModel, schema: &ActionSchema, t: &Term) -> String {
    match *t {
        Term::Var(i) => schema.params[i].name.clone(),
        Term::Const(c) => domain.constants[c].name.clone(),
    }
}

fn atom_text(domain: &DomainModel, schema: &ActionSchema, atom: &Atom) -> String {
    let mut s = format!("({}", domain.predicate(atom.predicate).name);
    for t in &atom.args {
        s.push(' ');
        s.push_str(&term_name(domain, schema, t));
    }
    s.push(')');
    s
}

fn type_name(domain: &DomainModel, t: TypeId) -> &str {
    &domain.types[t.index()].name
}

impl DomainModel {
    pub fn to_pddl(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "(define (domain {})", self.name);
        if !self.requirements.is_empty() {
            let _ = writeln!(out, "  (:requirements {})", self.requirements.join(" "));
        }
        if self.types.len() > 1 {
            out.push_str("  (:types");
            for t in &self.types[1..] {
                let parent = t.parent.map(|p| type_name(self, p)).unwrap_or(UNIVERSAL_TYPE);
                let _ = write!(out, " {} - {}", t.name, parent);
            }
            out.push_str(")\n");
        }
        if !self.constants.is_empty() {
            out.push_str("  (:constants");
            for c in &self.constants {
                let _ = write!(out, " {} - {}", c.name, type_name(self, c.ty));
            }
            out.push_str(")\n");
        }
        out.push_str("  (:predicates");
        for p in &self.predicates {
            let _ = write!(out, "\n    ({}", p.name);
            for (i, t) in p.param_types.iter().enumerate() {
                let _ = write!(out, " ?x{} - {}", i + 1, type_name(self, *t));
            }
            out.push(')');
        }
        out.push_str(")\n");
        for s in &self.schemas {
            let _ = writeln!(out, "  (:action {}", s.name);
            out.push_str("    :parameters (");
            let params: Vec<String> = s
                .params
                .iter()
                .map(|p| format!("{} - {}", p.name, type_name(self, p.ty)))
                .collect();
            out.push_str(&params.join(" "));
            out.push_str(")\n    :precondition (and");
            for a in &s.pre {
                let _ = write!(out, " {}", atom_text(self, s, a));
            }
            out.push_str(")\n    :effect (and");
            for a in &s.add {
                let _ = write!(out, " {}", atom_text(self, s, a));
            }
            for a in &s.del {
                let _ = write!(out, " (not {})", atom_text(self, s, a));
            }
            out.push_str("))\n");
        }
        out.push_str(")\n");
        out
    }
}

impl LiftedProblem {
    pub fn to_pddl(&self) -> String {
        let domain = self.domain();
        let mut out = String::new();
        let _ = writeln!(out, "(define (problem {})", self.name);
        let _ = writeln!(out, "  (:domain {})", domain.name);
        out.push_str("  (:objects");
        for o in &self.objects {
            if domain.constants.iter().any(|c| c.name == o.name) {
                continue;
            }
            let _ = write!(out, "\n    {} - {}", o.name, type_name(domain, o.ty));
        }
        out.push_str(")\n  (:init");
        for p in self.init.props() {
            let _ = write!(out, "\n    {}", self.format_prop(p));
        }
        out.push_str(")\n  (:goal (and");
        for g in &self.goal {
            let _ = write!(out, "\n    {}", self.format_prop(g));
        }
        out.push_str("))\n)\n");
        out
    }
}
