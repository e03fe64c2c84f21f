//! Typed-STRIPS PDDL reader.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::error::PddlError;
use super::model::*;
use super::sexpr::{parse_all, Pos, Sexpr};

const SUPPORTED_REQUIREMENTS: &[&str] = &[":strips", ":typing"];

/// Connectives and effect forms outside positive STRIPS.
const UNSUPPORTED_FORMS: &[&str] = &[
    "not", "or", "imply", "forall", "exists", "when", "=", "increase", "decrease", "assign",
    "scale-up", "scale-down", "either",
];

struct TypedName {
    name: String,
    ty: Option<(String, Pos)>,
    pos: Pos,
}

struct RawAtom {
    name: String,
    args: Vec<(String, Pos)>,
    pos: Pos,
}

fn expect_list<'a>(expr: &'a Sexpr, what: &str) -> Result<&'a [Sexpr], PddlError> {
    expr.as_list()
        .ok_or_else(|| PddlError::syntax(expr.pos(), format!("expected a list for {what}")))
}

fn expect_symbol<'a>(expr: &'a Sexpr, what: &str) -> Result<&'a str, PddlError> {
    expr.as_symbol()
        .ok_or_else(|| PddlError::syntax(expr.pos(), format!("expected a symbol for {what}")))
}

/// Reads the `(define (<kind> name) ...)` envelope.
fn read_define<'a>(
    exprs: &'a [Sexpr],
    kind: &str,
) -> Result<(String, &'a [Sexpr]), PddlError> {
    let top = match exprs {
        [single] => single,
        [] => return Err(PddlError::syntax(Pos { line: 1, col: 1 }, "empty input")),
        [_, second, ..] => {
            return Err(PddlError::syntax(second.pos(), "trailing content after definition"))
        }
    };
    let items = expect_list(top, "definition")?;
    if items.first().and_then(Sexpr::as_symbol) != Some("define") {
        return Err(PddlError::syntax(top.pos(), "expected `(define ...)`"));
    }
    let header = items
        .get(1)
        .ok_or_else(|| PddlError::syntax(top.pos(), format!("missing `({kind} <name>)`")))?;
    let header_items = expect_list(header, kind)?;
    match header_items {
        [k, name] if k.as_symbol() == Some(kind) => {
            Ok((expect_symbol(name, "name")?.to_string(), &items[2..]))
        }
        _ => Err(PddlError::syntax(header.pos(), format!("expected `({kind} <name>)`"))),
    }
}

fn read_typed_list(items: &[Sexpr]) -> Result<Vec<TypedName>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<(String, Pos)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let item = &items[i];
        match item {
            Sexpr::Symbol(s, pos) if s == "-" => {
                let ty = items
                    .get(i + 1)
                    .ok_or_else(|| PddlError::syntax(*pos, "missing type after `-`"))?;
                let ty = match ty {
                    Sexpr::Symbol(t, p) => (t.clone(), *p),
                    Sexpr::List(_, p) => return Err(PddlError::unsupported(*p, "either")),
                };
                if pending.is_empty() {
                    return Err(PddlError::syntax(*pos, "type annotation without names"));
                }
                for (name, pos) in pending.drain(..) {
                    out.push(TypedName {
                        name,
                        ty: Some(ty.clone()),
                        pos,
                    });
                }
                i += 2;
            }
            Sexpr::Symbol(s, pos) => {
                pending.push((s.clone(), *pos));
                i += 1;
            }
            Sexpr::List(_, pos) => return Err(PddlError::syntax(*pos, "unexpected list")),
        }
    }
    out.extend(pending.into_iter().map(|(name, pos)| TypedName { name, ty: None, pos }));
    Ok(out)
}

fn read_atom(expr: &Sexpr) -> Result<RawAtom, PddlError> {
    let items = expect_list(expr, "atom")?;
    let head = items
        .first()
        .ok_or_else(|| PddlError::syntax(expr.pos(), "empty atom"))?;
    let name = expect_symbol(head, "predicate name")?;
    if UNSUPPORTED_FORMS.contains(&name) || name == "and" {
        return Err(PddlError::unsupported(head.pos(), name));
    }
    let args = items[1..]
        .iter()
        .map(|a| match a {
            Sexpr::Symbol(s, p) => Ok((s.clone(), *p)),
            Sexpr::List(_, p) => Err(PddlError::unsupported(*p, "nested term")),
        })
        .collect::<Result<_, _>>()?;
    Ok(RawAtom {
        name: name.to_string(),
        args,
        pos: expr.pos(),
    })
}

/// Flattens a conjunction of positive atoms.
fn read_conjunction(expr: &Sexpr, out: &mut Vec<RawAtom>) -> Result<(), PddlError> {
    let items = expect_list(expr, "formula")?;
    match expr.head() {
        None if items.is_empty() => Ok(()),
        Some("and") => {
            for sub in &items[1..] {
                read_conjunction(sub, out)?;
            }
            Ok(())
        }
        Some(h) if UNSUPPORTED_FORMS.contains(&h) => Err(PddlError::unsupported(expr.pos(), h)),
        _ => {
            out.push(read_atom(expr)?);
            Ok(())
        }
    }
}

/// Splits an effect into add and delete atoms.
fn read_effect(
    expr: &Sexpr,
    add: &mut Vec<RawAtom>,
    del: &mut Vec<RawAtom>,
) -> Result<(), PddlError> {
    let items = expect_list(expr, "effect")?;
    match expr.head() {
        None if items.is_empty() => Ok(()),
        Some("and") => {
            for sub in &items[1..] {
                read_effect(sub, add, del)?;
            }
            Ok(())
        }
        Some("not") => match &items[1..] {
            [inner] => {
                del.push(read_atom(inner)?);
                Ok(())
            }
            _ => Err(PddlError::syntax(expr.pos(), "`not` takes one atom")),
        },
        Some(h) if UNSUPPORTED_FORMS.contains(&h) => Err(PddlError::unsupported(expr.pos(), h)),
        _ => {
            add.push(read_atom(expr)?);
            Ok(())
        }
    }
}

fn check_requirements(items: &[Sexpr], into: &mut Vec<String>) -> Result<(), PddlError> {
    for item in items {
        let req = expect_symbol(item, "requirement")?;
        if !SUPPORTED_REQUIREMENTS.contains(&req) {
            return Err(PddlError::unsupported(item.pos(), req));
        }
        if !into.iter().any(|r| r == req) {
            into.push(req.to_string());
        }
    }
    Ok(())
}

struct RawAction<'a> {
    name: String,
    pos: Pos,
    parameters: Option<&'a Sexpr>,
    precondition: Option<&'a Sexpr>,
    effect: Option<&'a Sexpr>,
}

fn read_action(items: &[Sexpr], pos: Pos) -> Result<RawAction<'_>, PddlError> {
    let name = items
        .get(1)
        .ok_or_else(|| PddlError::syntax(pos, "action without name"))
        .and_then(|n| expect_symbol(n, "action name"))?;
    let mut action = RawAction {
        name: name.to_string(),
        pos,
        parameters: None,
        precondition: None,
        effect: None,
    };
    let mut i = 2;
    while i < items.len() {
        let key = expect_symbol(&items[i], "action keyword")?;
        let value = items
            .get(i + 1)
            .ok_or_else(|| PddlError::syntax(items[i].pos(), format!("missing value for {key}")))?;
        match key {
            ":parameters" => action.parameters = Some(value),
            ":precondition" => action.precondition = Some(value),
            ":effect" => action.effect = Some(value),
            other => return Err(PddlError::unsupported(items[i].pos(), other)),
        }
        i += 2;
    }
    Ok(action)
}

/// Parses a domain restricted to `:strips` and `:typing`.
pub fn parse_domain(text: &str) -> Result<DomainModel, PddlError> {
    let exprs = parse_all(text)?;
    let (name, sections) = read_define(&exprs, "domain")?;

    let mut requirements = Vec::new();
    let mut type_decls = Vec::new();
    let mut constant_decls = Vec::new();
    let mut predicate_decls: Vec<(&Sexpr, Pos)> = Vec::new();
    let mut raw_actions = Vec::new();

    for section in sections {
        let items = expect_list(section, "domain section")?;
        let key = items
            .first()
            .ok_or_else(|| PddlError::syntax(section.pos(), "empty section"))
            .and_then(|k| expect_symbol(k, "section keyword"))?;
        match key {
            ":requirements" => check_requirements(&items[1..], &mut requirements)?,
            ":types" => type_decls.extend(read_typed_list(&items[1..])?),
            ":constants" => constant_decls.extend(read_typed_list(&items[1..])?),
            ":predicates" => {
                for p in &items[1..] {
                    predicate_decls.push((p, p.pos()));
                }
            }
            ":action" => raw_actions.push(read_action(items, section.pos())?),
            other => return Err(PddlError::unsupported(section.pos(), other)),
        }
    }

    let types = build_types(&type_decls)?;
    let type_index: HashMap<String, TypeId> = types
        .iter()
        .enumerate()
        .map(|(i, t)| (t.name.clone(), TypeId(i as u32)))
        .collect();
    let resolve_type = |ty: &Option<(String, Pos)>| -> Result<TypeId, PddlError> {
        match ty {
            None => Ok(TypeId(0)),
            Some((name, pos)) => {
                type_index
                    .get(name.as_str())
                    .copied()
                    .ok_or_else(|| PddlError::UnknownType {
                        pos: *pos,
                        name: name.clone(),
                    })
            }
        }
    };

    let mut predicates: BTreeMap<String, PredicateDef> = BTreeMap::new();
    for (decl, pos) in predicate_decls {
        let items = expect_list(decl, "predicate declaration")?;
        let pname = items
            .first()
            .ok_or_else(|| PddlError::syntax(pos, "empty predicate declaration"))
            .and_then(|n| expect_symbol(n, "predicate name"))?;
        if UNSUPPORTED_FORMS.contains(&pname) {
            return Err(PddlError::unsupported(pos, pname));
        }
        let params = read_typed_list(&items[1..])?;
        let param_types = params
            .iter()
            .map(|p| resolve_type(&p.ty))
            .collect::<Result<Vec<_>, _>>()?;
        if predicates.contains_key(pname) {
            return Err(PddlError::Duplicate {
                pos,
                name: pname.to_string(),
            });
        }
        predicates.insert(
            pname.to_string(),
            PredicateDef {
                name: pname.to_string(),
                param_types,
            },
        );
    }
    let predicates: Vec<PredicateDef> = predicates.into_values().collect();

    let mut constants: Vec<Constant> = Vec::new();
    for c in &constant_decls {
        if constants.iter().any(|k| k.name == c.name) {
            return Err(PddlError::Duplicate {
                pos: c.pos,
                name: c.name.clone(),
            });
        }
        constants.push(Constant {
            name: c.name.clone(),
            ty: resolve_type(&c.ty)?,
        });
    }

    let mut domain = DomainModel {
        name,
        requirements,
        types,
        constants,
        predicates,
        schemas: Vec::new(),
    };

    let mut seen = BTreeSet::new();
    let mut schemas = Vec::new();
    for raw in raw_actions {
        if !seen.insert(raw.name.clone()) {
            return Err(PddlError::Duplicate {
                pos: raw.pos,
                name: raw.name,
            });
        }
        schemas.push(build_schema(&domain, raw, &resolve_type)?);
    }
    schemas.sort_by(|a, b| a.name.cmp(&b.name));
    domain.schemas = schemas;
    Ok(domain)
}

fn build_types(decls: &[TypedName]) -> Result<Vec<TypeDef>, PddlError> {
    let mut parents: BTreeMap<String, Option<String>> = BTreeMap::new();
    for d in decls {
        if d.name == UNIVERSAL_TYPE {
            continue;
        }
        let parent = d.ty.as_ref().map(|(t, _)| t.clone());
        if let Some(prev) = parents.get(&d.name) {
            if prev.is_some() && parent.is_some() && *prev != parent {
                return Err(PddlError::Duplicate {
                    pos: d.pos,
                    name: d.name.clone(),
                });
            }
            if prev.is_some() {
                continue;
            }
        }
        parents.insert(d.name.clone(), parent);
    }
    // Parents referenced but never declared become children of `object`.
    let implicit: Vec<String> = parents
        .values()
        .flatten()
        .filter(|p| p.as_str() != UNIVERSAL_TYPE && !parents.contains_key(*p))
        .cloned()
        .collect();
    for p in implicit {
        parents.insert(p, None);
    }

    let mut types = vec![TypeDef {
        name: UNIVERSAL_TYPE.to_string(),
        parent: None,
    }];
    let names: Vec<&String> = parents.keys().collect();
    let id_of = |name: &str| -> TypeId {
        if name == UNIVERSAL_TYPE {
            TypeId(0)
        } else {
            TypeId(names.binary_search_by(|n| n.as_str().cmp(name)).unwrap() as u32 + 1)
        }
    };
    for (name, parent) in &parents {
        types.push(TypeDef {
            name: name.clone(),
            parent: Some(id_of(parent.as_deref().unwrap_or(UNIVERSAL_TYPE))),
        });
    }
    for (i, t) in types.iter().enumerate() {
        let mut cur = t.parent;
        let mut steps = 0;
        while let Some(p) = cur {
            if p.index() == i || steps > types.len() {
                return Err(PddlError::TypeCycle {
                    name: t.name.clone(),
                });
            }
            cur = types[p.index()].parent;
            steps += 1;
        }
    }
    Ok(types)
}

type TypeResolver<'a> = &'a dyn Fn(&Option<(String, Pos)>) -> Result<TypeId, PddlError>;

fn build_schema(
    domain: &DomainModel,
    raw: RawAction<'_>,
    resolve_type: TypeResolver<'_>,
) -> Result<ActionSchema, PddlError> {
    let mut params: Vec<Param> = Vec::new();
    if let Some(p) = raw.parameters {
        for tn in read_typed_list(expect_list(p, ":parameters")?)? {
            if !tn.name.starts_with('?') {
                return Err(PddlError::syntax(tn.pos, "parameters must start with `?`"));
            }
            if params.iter().any(|q| q.name == tn.name) {
                return Err(PddlError::Duplicate {
                    pos: tn.pos,
                    name: tn.name,
                });
            }
            params.push(Param {
                ty: resolve_type(&tn.ty)?,
                name: tn.name,
            });
        }
    }
    let mut pre_raw = Vec::new();
    if let Some(pre) = raw.precondition {
        read_conjunction(pre, &mut pre_raw)?;
    }
    let (mut add_raw, mut del_raw) = (Vec::new(), Vec::new());
    if let Some(eff) = raw.effect {
        read_effect(eff, &mut add_raw, &mut del_raw)?;
    }
    let lift = |atoms: Vec<RawAtom>| -> Result<Vec<Atom>, PddlError> {
        let mut out: Vec<Atom> = Vec::new();
        for a in atoms {
            let atom = resolve_schema_atom(domain, &params, &a)?;
            if !out.contains(&atom) {
                out.push(atom);
            }
        }
        Ok(out)
    };
    Ok(ActionSchema {
        name: raw.name,
        pre: lift(pre_raw)?,
        add: lift(add_raw)?,
        del: lift(del_raw)?,
        params,
    })
}

fn types_overlap(domain: &DomainModel, a: TypeId, b: TypeId) -> bool {
    domain.is_subtype(a, b) || domain.is_subtype(b, a)
}

fn resolve_schema_atom(
    domain: &DomainModel,
    params: &[Param],
    atom: &RawAtom,
) -> Result<Atom, PddlError> {
    let pid = domain
        .predicate_id(&atom.name)
        .ok_or_else(|| PddlError::UnknownPredicate {
            pos: atom.pos,
            name: atom.name.clone(),
        })?;
    let def = domain.predicate(pid);
    if def.arity() != atom.args.len() {
        return Err(PddlError::ArityMismatch {
            pos: atom.pos,
            name: atom.name.clone(),
            expected: def.arity(),
            found: atom.args.len(),
        });
    }
    let mut args = Vec::with_capacity(atom.args.len());
    for ((arg, pos), &want) in atom.args.iter().zip(&def.param_types) {
        let (term, ty) = if arg.starts_with('?') {
            let i = params
                .iter()
                .position(|p| &p.name == arg)
                .ok_or_else(|| PddlError::UnknownVariable {
                    pos: *pos,
                    name: arg.clone(),
                })?;
            (Term::Var(i), params[i].ty)
        } else {
            let i = domain
                .constants
                .iter()
                .position(|c| &c.name == arg)
                .ok_or_else(|| PddlError::UnknownObject {
                    pos: *pos,
                    name: arg.clone(),
                })?;
            (Term::Const(i), domain.constants[i].ty)
        };
        if !types_overlap(domain, ty, want) {
            return Err(PddlError::TypeMismatch {
                pos: *pos,
                name: atom.name.clone(),
                arg: arg.clone(),
            });
        }
        args.push(term);
    }
    Ok(Atom {
        predicate: pid,
        args,
    })
}

/// Parses a problem against an already parsed domain.
pub fn parse_problem(text: &str, domain: &Arc<DomainModel>) -> Result<LiftedProblem, PddlError> {
    let exprs = parse_all(text)?;
    let (name, sections) = read_define(&exprs, "problem")?;

    let mut object_decls = Vec::new();
    let mut init_exprs: Vec<&Sexpr> = Vec::new();
    let mut goal_expr: Option<&Sexpr> = None;
    let mut requirements = Vec::new();

    for section in sections {
        let items = expect_list(section, "problem section")?;
        let key = items
            .first()
            .ok_or_else(|| PddlError::syntax(section.pos(), "empty section"))
            .and_then(|k| expect_symbol(k, "section keyword"))?;
        match key {
            ":domain" => {
                let dname = items
                    .get(1)
                    .ok_or_else(|| PddlError::syntax(section.pos(), "missing domain name"))
                    .and_then(|n| expect_symbol(n, "domain name"))?;
                if dname != domain.name {
                    return Err(PddlError::DomainMismatch {
                        pos: section.pos(),
                        expected: domain.name.clone(),
                        found: dname.to_string(),
                    });
                }
            }
            ":requirements" => check_requirements(&items[1..], &mut requirements)?,
            ":objects" => object_decls.extend(read_typed_list(&items[1..])?),
            ":init" => init_exprs.extend(&items[1..]),
            ":goal" => match &items[1..] {
                [g] => goal_expr = Some(g),
                _ => return Err(PddlError::syntax(section.pos(), ":goal takes one formula")),
            },
            other => return Err(PddlError::unsupported(section.pos(), other)),
        }
    }

    let mut objects: Vec<Object> = domain
        .constants
        .iter()
        .map(|c| Object {
            name: c.name.clone(),
            ty: c.ty,
        })
        .collect();
    for d in &object_decls {
        if objects.iter().any(|o| o.name == d.name) {
            return Err(PddlError::Duplicate {
                pos: d.pos,
                name: d.name.clone(),
            });
        }
        let ty = match &d.ty {
            None => TypeId(0),
            Some((t, pos)) => domain.type_id(t).ok_or_else(|| PddlError::UnknownType {
                pos: *pos,
                name: t.clone(),
            })?,
        };
        objects.push(Object {
            name: d.name.clone(),
            ty,
        });
    }
    objects.sort_by(|a, b| a.name.cmp(&b.name));

    let ground = |atom: &RawAtom| -> Result<Proposition, PddlError> {
        let pid = domain
            .predicate_id(&atom.name)
            .ok_or_else(|| PddlError::UnknownPredicate {
                pos: atom.pos,
                name: atom.name.clone(),
            })?;
        let def = domain.predicate(pid);
        if def.arity() != atom.args.len() {
            return Err(PddlError::ArityMismatch {
                pos: atom.pos,
                name: atom.name.clone(),
                expected: def.arity(),
                found: atom.args.len(),
            });
        }
        let mut args = Vec::with_capacity(def.arity());
        for ((arg, pos), &want) in atom.args.iter().zip(&def.param_types) {
            let i = objects
                .binary_search_by(|o| o.name.as_str().cmp(arg))
                .map_err(|_| PddlError::UnknownObject {
                    pos: *pos,
                    name: arg.clone(),
                })?;
            if !domain.is_subtype(objects[i].ty, want) {
                return Err(PddlError::TypeMismatch {
                    pos: *pos,
                    name: atom.name.clone(),
                    arg: arg.clone(),
                });
            }
            args.push(ObjId(i as u32));
        }
        Ok(Proposition::new(pid, args))
    };

    let mut init = Vec::new();
    for expr in init_exprs {
        if let Some(h) = expr.head() {
            if UNSUPPORTED_FORMS.contains(&h) {
                return Err(PddlError::unsupported(expr.pos(), h));
            }
        }
        init.push(ground(&read_atom(expr)?)?);
    }

    let goal_expr = goal_expr.ok_or_else(|| PddlError::syntax(Pos { line: 1, col: 1 }, "missing :goal"))?;
    let mut goal_raw = Vec::new();
    read_conjunction(goal_expr, &mut goal_raw)?;
    let goal = goal_raw.iter().map(ground).collect::<Result<Vec<_>, _>>()?;

    Ok(LiftedProblem::assemble(
        name,
        Arc::clone(domain),
        objects,
        State::new(init),
        goal,
    ))
}
