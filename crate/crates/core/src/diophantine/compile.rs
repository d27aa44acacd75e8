use std::collections::HashMap;

use super::group::{GroupSystem, GroupWord, InterfaceEntry};
use super::ring::{RingSystem, Term};
use super::templates::EDefinition;

struct Compiler<'a> {
    edef: &'a EDefinition,
    tuples: HashMap<Term, Vec<String>>,
    order: Vec<Term>,
    variables: Vec<String>,
    equations: Vec<(GroupWord, GroupWord)>,
    interface: Vec<InterfaceEntry>,
    next_tuple: usize,
    next_aux: usize,
}

impl Compiler<'_> {
    fn fresh_tuple(&mut self) -> Vec<String> {
        let n = self.next_tuple;
        self.next_tuple += 1;
        let names: Vec<String> = if self.edef.arity == 1 {
            vec![format!("t{n}")]
        } else {
            (0..self.edef.arity).map(|i| format!("t{n}_{i}")).collect()
        };
        self.variables.extend(names.iter().cloned());
        names
    }

    fn emit(&mut self, which: fn(&EDefinition) -> &super::templates::Template, args: Vec<Vec<String>>) {
        let edef = self.edef;
        let mut counter = self.next_aux;
        let mut fresh = || {
            counter += 1;
            format!("u{}", counter - 1)
        };
        let (aux, eqs) = which(edef).instantiate(&args, &mut fresh);
        self.next_aux = counter;
        self.variables.extend(aux);
        self.equations.extend(eqs);
    }

    fn tuple(&mut self, t: &Term) -> Vec<String> {
        if let Some(x) = self.tuples.get(t) {
            return x.clone();
        }
        let x = match t {
            // a − b is compiled as a ⊕ (⊖ b) and shares tuples with both.
            Term::Sub(a, b) => {
                let lowered = Term::Add(a.clone(), Box::new(Term::Neg(b.clone())));
                self.tuple(&lowered)
            }
            Term::Var(_) => {
                let x = self.fresh_tuple();
                self.emit(|e| &e.domain, vec![x.clone()]);
                x
            }
            Term::Const(n) => {
                let x = self.fresh_tuple();
                for (xi, unit) in x.iter().zip(&self.edef.unit) {
                    self.equations.push((GroupWord::name(xi), GroupWord::atom(unit, *n)));
                }
                x
            }
            Term::Add(a, b) | Term::Mul(a, b) => {
                let xa = self.tuple(a);
                let xb = self.tuple(b);
                let x = self.fresh_tuple();
                let which: fn(&EDefinition) -> &super::templates::Template = match t {
                    Term::Add(..) => |e| &e.add,
                    _ => |e| &e.mul,
                };
                self.emit(which, vec![xa, xb, x.clone()]);
                x
            }
            Term::Neg(a) => {
                let xa = self.tuple(a);
                let x = self.fresh_tuple();
                self.emit(|e| &e.neg, vec![xa, x.clone()]);
                x
            }
        };
        self.tuples.insert(t.clone(), x.clone());
        self.order.push(t.clone());
        self.interface.push(InterfaceEntry {
            term: t.to_string(),
            vars: x.clone(),
        });
        x
    }
}

/// Compiles `S` into a group system whose solutions are exactly the
/// encodings of solutions of `S` extended by auxiliary witnesses.
///
/// Every distinct subterm gets one tuple of group variables (`t<n>`, or
/// `t<n>_<i>` for arity above 1); auxiliaries are `u<n>`. Declared ring
/// variables are visited first, then equations left to right, so names are
/// deterministic.
pub fn compile_system(edef: &EDefinition, sys: &RingSystem) -> GroupSystem {
    compile_with_terms(edef, sys).0
}

/// [`compile_system`] together with each subterm and its tuple, in the
/// order the tuples were created.
pub fn compile_with_terms(edef: &EDefinition, sys: &RingSystem) -> (GroupSystem, Vec<(Term, Vec<String>)>) {
    let mut c = Compiler {
        edef,
        tuples: HashMap::new(),
        order: Vec::new(),
        variables: Vec::new(),
        equations: Vec::new(),
        interface: Vec::new(),
        next_tuple: 0,
        next_aux: 0,
    };
    for v in &sys.variables {
        c.tuple(&Term::Var(v.clone()));
    }
    for (l, r) in &sys.equations {
        let xl = c.tuple(l);
        let xr = c.tuple(r);
        c.emit(|e| &e.equality, vec![xl, xr]);
    }
    let terms = c.order.iter().map(|t| (t.clone(), c.tuples[t].clone())).collect();
    let g = GroupSystem {
        rank: edef.rank,
        variables: c.variables,
        constants: edef.constants.clone(),
        equations: c.equations,
        interface: c.interface,
    };
    (g, terms)
}
