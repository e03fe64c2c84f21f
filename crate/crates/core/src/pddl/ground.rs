//! On-demand grounding: applicable actions of a single state via a
//! precondition join, most-constrained atom first.

use super::model::*;

impl LiftedProblem {
    /// Instantiates `schema` with `args` (no applicability or type check).
    pub fn ground(&self, schema: SchemaId, args: Vec<ObjId>) -> GroundAction {
        let def = self.domain.schema(schema);
        let inst = |atoms: &[Atom]| -> Vec<Proposition> {
            let mut props: Vec<Proposition> = atoms
                .iter()
                .map(|a| {
                    Proposition::new(
                        a.predicate,
                        a.args
                            .iter()
                            .map(|t| match *t {
                                Term::Var(i) => args[i],
                                Term::Const(c) => self.constant_object(c),
                            })
                            .collect(),
                    )
                })
                .collect();
            props.sort_unstable();
            props.dedup();
            props
        };
        GroundAction {
            schema,
            pre: inst(&def.pre),
            add: inst(&def.add),
            del: inst(&def.del),
            args,
        }
    }

    fn candidates<'a>(&'a self, state: &'a State, predicate: PredId) -> &'a [Proposition] {
        if self.is_static(predicate) {
            let fixed = self.statics.props_of(predicate);
            if !fixed.is_empty() {
                return fixed;
            }
        }
        state.props_of(predicate)
    }

    /// Every type-correct instantiation whose preconditions hold in
    /// `state ∪ statics`, ordered by schema name then argument names.
    pub fn applicable_actions(&self, state: &State) -> Vec<GroundAction> {
        let mut out = Vec::new();
        for (si, schema) in self.domain.schemas.iter().enumerate() {
            let mut bindings = Vec::new();
            let mut binding = vec![None; schema.params.len()];
            let mut remaining: Vec<usize> = (0..schema.pre.len()).collect();
            self.join(state, schema, &mut remaining, &mut binding, &mut bindings);
            bindings.sort_unstable();
            bindings.dedup();
            out.extend(
                bindings
                    .into_iter()
                    .map(|args| self.ground(SchemaId(si as u32), args)),
            );
        }
        out
    }

    fn join(
        &self,
        state: &State,
        schema: &ActionSchema,
        remaining: &mut Vec<usize>,
        binding: &mut Vec<Option<ObjId>>,
        out: &mut Vec<Vec<ObjId>>,
    ) {
        if remaining.is_empty() {
            self.enumerate_free(schema, 0, binding, out);
            return;
        }
        // Most bound variables first, then fewest candidate propositions.
        let (slot, &atom_idx) = remaining
            .iter()
            .enumerate()
            .max_by_key(|(_, &ai)| {
                let atom = &schema.pre[ai];
                let bound = atom
                    .args
                    .iter()
                    .filter(|t| match t {
                        Term::Var(i) => binding[*i].is_some(),
                        Term::Const(_) => true,
                    })
                    .count();
                let unbound = atom.args.len() - bound;
                let cands = self.candidates(state, atom.predicate).len();
                (unbound == 0, bound, std::cmp::Reverse(cands), std::cmp::Reverse(ai))
            })
            .unwrap();
        remaining.swap_remove(slot);
        let atom = &schema.pre[atom_idx];
        for prop in self.candidates(state, atom.predicate) {
            let mut newly_bound: Vec<usize> = Vec::new();
            let mut ok = true;
            for (term, &obj) in atom.args.iter().zip(&prop.args) {
                match *term {
                    Term::Const(c) => {
                        if self.constant_object(c) != obj {
                            ok = false;
                        }
                    }
                    Term::Var(v) => match binding[v] {
                        Some(b) if b != obj => ok = false,
                        Some(_) => {}
                        None => {
                            let want = schema.params[v].ty;
                            if self.domain.is_subtype(self.objects[obj.index()].ty, want) {
                                binding[v] = Some(obj);
                                newly_bound.push(v);
                            } else {
                                ok = false;
                            }
                        }
                    },
                }
                if !ok {
                    break;
                }
            }
            if ok {
                self.join(state, schema, remaining, binding, out);
            }
            for v in newly_bound {
                binding[v] = None;
            }
        }
        remaining.push(atom_idx);
        let last = remaining.len() - 1;
        remaining.swap(slot, last);
    }

    /// Parameters not mentioned by any precondition range over their type.
    fn enumerate_free(
        &self,
        schema: &ActionSchema,
        from: usize,
        binding: &mut Vec<Option<ObjId>>,
        out: &mut Vec<Vec<ObjId>>,
    ) {
        match (from..binding.len()).find(|&i| binding[i].is_none()) {
            None => out.push(binding.iter().map(|b| b.unwrap()).collect()),
            Some(i) => {
                for &obj in self.objects_of_type(schema.params[i].ty) {
                    binding[i] = Some(obj);
                    self.enumerate_free(schema, i + 1, binding, out);
                }
                binding[i] = None;
            }
        }
    }
}
