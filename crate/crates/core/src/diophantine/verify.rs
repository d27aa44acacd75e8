use std::collections::BTreeMap;

use serde::Serialize;

use super::compile::compile_with_terms;
use super::group::{Ambient, GroupSystem};
use super::ring::{bounded_solve_ring, RingSystem, Term, DEFAULT_RING_LIMIT};
use super::solver::{GroupSolver, SolveOptions};
use super::templates::EDefinition;
use crate::error::Result;
use crate::nilpotent2::Malcev;
use crate::{MalcevElement, SmallMalcev};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    RingToGroup,
    GroupToRing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub direction: Direction,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub system: String,
    pub b_ring: i64,
    pub b_group: i64,
    /// Box used for auxiliary witnesses when extending ring solutions.
    pub aux_box: i64,
    pub ring_solutions: usize,
    pub extended: usize,
    pub group_solutions: usize,
    pub projected: usize,
    pub counterexamples: Vec<Counterexample>,
    pub search_nodes: u64,
}

impl CorrespondenceReport {
    pub fn ok(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// `(unit_1^t, …, unit_k^t)`.
pub fn encode(edef: &EDefinition, group: &GroupSystem, t: i64) -> Result<Vec<SmallMalcev>> {
    edef.unit
        .iter()
        .map(|u| Ok(group.constant_value::<i64>(u)?.pow(&t)))
        .collect()
}

/// The `t` with `g = unit^t`, if any.
pub fn decode_component(unit: &SmallMalcev, g: &SmallMalcev) -> Option<i64> {
    let uc = unit.coordinates();
    let gc = g.coordinates();
    let j = uc.iter().position(|&c| c != 0)?;
    if gc[j] % uc[j] != 0 {
        return None;
    }
    let t = gc[j] / uc[j];
    (unit.pow(&t) == *g).then_some(t)
}

fn decode(edef: &EDefinition, group: &GroupSystem, tuple: &[SmallMalcev]) -> Result<Option<i64>> {
    let mut value = None;
    for (u, g) in edef.unit.iter().zip(tuple) {
        let unit = group.constant_value::<i64>(u)?;
        match (decode_component(&unit, g), value) {
            (None, _) => return Ok(None),
            (Some(t), None) => value = Some(t),
            (Some(t), Some(prev)) if t != prev => return Ok(None),
            _ => {}
        }
    }
    Ok(value)
}

fn term_value(t: &Term, ring: &RingSystem, values: &[i64]) -> Option<i64> {
    t.eval(&|name: &str| ring.variables.iter().position(|v| v == name).map(|i| values[i]))
}

/// Checks both directions of the compiler correspondence on bounded boxes:
/// every ring solution in `[−b_ring, b_ring]` extends to a solution of the
/// compiled system (witness verified by exact substitution), and every group
/// solution with coordinates in `[−b_group, b_group]` decodes to a ring
/// solution consistent on every subterm.
pub fn verify_correspondence(
    ring: &RingSystem,
    edef: &EDefinition,
    ambient: &Ambient,
    b_ring: i64,
    b_group: i64,
) -> Result<CorrespondenceReport> {
    let (group, terms) = compile_with_terms(edef, ring);
    let ring_sols = bounded_solve_ring(ring, b_ring, DEFAULT_RING_LIMIT)?;
    let mut counterexamples = Vec::new();

    let mut aux_box = b_group;
    for sol in &ring_sols {
        for (t, _) in &terms {
            if let Some(v) = term_value(t, ring, sol) {
                aux_box = aux_box.max(v.abs());
            }
        }
    }

    let mut extended = 0;
    let forward = GroupSolver::new(&group, ambient, SolveOptions::with_bound(aux_box))?;
    for sol in &ring_sols {
        let mut fixed: BTreeMap<String, SmallMalcev> = BTreeMap::new();
        for (t, vars) in &terms {
            let v = term_value(t, ring, sol).expect("solution values are in range");
            for (name, g) in vars.iter().zip(encode(edef, &group, v)?) {
                fixed.insert(name.clone(), g);
            }
        }
        let assignment = |sol: &[i64]| -> String {
            ring.variables
                .iter()
                .zip(sol)
                .map(|(n, v)| format!("{n}={v}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        match forward.find_witness(&fixed)? {
            Some(w) => {
                let exact: BTreeMap<String, MalcevElement> = w
                    .iter()
                    .map(|(k, g)| (k.clone(), g.cast().expect("i64 fits")))
                    .collect();
                if group.is_solution(&exact, ambient)? {
                    extended += 1;
                } else {
                    counterexamples.push(Counterexample {
                        direction: Direction::RingToGroup,
                        detail: format!("witness for {} fails exact substitution", assignment(sol)),
                    });
                }
            }
            None => counterexamples.push(Counterexample {
                direction: Direction::RingToGroup,
                detail: format!(
                    "no auxiliary witness within box {aux_box} for {}",
                    assignment(sol)
                ),
            }),
        }
    }

    let backward = GroupSolver::new(&group, ambient, SolveOptions::with_bound(b_group))?;
    let project = group.projection_vars();
    let group_sols = backward.solve(&project, &BTreeMap::new())?;
    let mut projected = 0;
    'sols: for gs in &group_sols {
        let value_of: BTreeMap<&String, &SmallMalcev> = project.iter().zip(gs).collect();
        let mut decoded: Vec<(Term, i64)> = Vec::new();
        for (t, vars) in &terms {
            let tuple: Vec<SmallMalcev> = vars.iter().map(|v| value_of[v].clone()).collect();
            match decode(edef, &group, &tuple)? {
                Some(v) => decoded.push((t.clone(), v)),
                None => {
                    counterexamples.push(Counterexample {
                        direction: Direction::GroupToRing,
                        detail: format!(
                            "tuple for '{t}' is {} which is not an encoded integer",
                            tuple.iter().map(Malcev::to_string).collect::<Vec<_>>().join(", ")
                        ),
                    });
                    continue 'sols;
                }
            }
        }
        let values: Vec<i64> = ring
            .variables
            .iter()
            .map(|v| {
                decoded
                    .iter()
                    .find(|(t, _)| *t == Term::Var(v.clone()))
                    .map(|(_, x)| *x)
                    .expect("every declared variable has a tuple")
            })
            .collect();
        if !ring.is_solution(&values) {
            counterexamples.push(Counterexample {
                direction: Direction::GroupToRing,
                detail: format!("decoded values {values:?} do not solve the ring system"),
            });
            continue;
        }
        if let Some((t, v)) = decoded
            .iter()
            .find(|(t, v)| term_value(t, ring, &values) != Some(*v))
        {
            counterexamples.push(Counterexample {
                direction: Direction::GroupToRing,
                detail: format!("subterm '{t}' decodes to {v}, inconsistent with {values:?}"),
            });
            continue;
        }
        projected += 1;
    }

    Ok(CorrespondenceReport {
        system: ring.to_string(),
        b_ring,
        b_group,
        aux_box,
        ring_solutions: ring_sols.len(),
        extended,
        group_solutions: group_sols.len(),
        projected,
        counterexamples,
        search_nodes: forward.nodes() + backward.nodes(),
    })
}
