use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::nilpotent2::Malcev;
use crate::presentation::NormalizedPresentation;
use crate::scalar::IntScalar;
use crate::words::parse_word;
use crate::MalcevElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupFactor {
    /// A variable or constant name raised to a power.
    Atom(String, i64),
    Comm(GroupWord, GroupWord),
}

/// Product of factors over variable and constant names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord(pub Vec<GroupFactor>);

impl GroupWord {
    pub fn one() -> Self {
        GroupWord(Vec::new())
    }

    pub fn atom(name: &str, exp: i64) -> Self {
        GroupWord(vec![GroupFactor::Atom(name.to_string(), exp)])
    }

    pub fn name(name: &str) -> Self {
        Self::atom(name, 1)
    }

    pub fn comm(u: GroupWord, v: GroupWord) -> Self {
        GroupWord(vec![GroupFactor::Comm(u, v)])
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        GroupWord(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// Formal inverse; `[u,v]^{-1} = [v,u]`.
    pub fn inverse(&self) -> Self {
        GroupWord(
            self.0
                .iter()
                .rev()
                .map(|f| match f {
                    GroupFactor::Atom(n, e) => GroupFactor::Atom(n.clone(), -e),
                    GroupFactor::Comm(u, v) => GroupFactor::Comm(v.clone(), u.clone()),
                })
                .collect(),
        )
    }

    pub fn rename(&self, map: &dyn Fn(&str) -> String) -> Self {
        GroupWord(
            self.0
                .iter()
                .map(|f| match f {
                    GroupFactor::Atom(n, e) => GroupFactor::Atom(map(n), *e),
                    GroupFactor::Comm(u, v) => GroupFactor::Comm(u.rename(map), v.rename(map)),
                })
                .collect(),
        )
    }

    pub fn names(&self, out: &mut BTreeSet<String>) {
        for f in &self.0 {
            match f {
                GroupFactor::Atom(n, _) => {
                    out.insert(n.clone());
                }
                GroupFactor::Comm(u, v) => {
                    u.names(out);
                    v.names(out);
                }
            }
        }
    }

    pub fn eval<T: IntScalar>(
        &self,
        rank: usize,
        resolve: &dyn Fn(&str) -> Result<Malcev<T>>,
    ) -> Result<Malcev<T>> {
        let mut acc = Malcev::identity(rank);
        for f in &self.0 {
            let g = match f {
                GroupFactor::Atom(n, e) => resolve(n)?.pow(&T::of(*e)),
                GroupFactor::Comm(u, v) => u.eval(rank, resolve)?.commutator(&v.eval(rank, resolve)?)?,
            };
            acc = acc.multiply(&g)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|f| match f {
                    GroupFactor::Atom(n, e) => json!([n, e]),
                    GroupFactor::Comm(u, v) => json!(["comm", u.to_json(), v.to_json()]),
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidSystem(format!("bad group word {v}: {m}"));
        let items = v.as_array().ok_or_else(|| bad("expected an array"))?;
        items
            .iter()
            .map(|it| match it.as_array().map(Vec::as_slice) {
                Some([tag, u, w]) if tag == "comm" => {
                    Ok(GroupFactor::Comm(GroupWord::from_json(u)?, GroupWord::from_json(w)?))
                }
                Some([n, e]) => Ok(GroupFactor::Atom(
                    n.as_str().ok_or_else(|| bad("name must be a string"))?.to_string(),
                    e.as_i64().ok_or_else(|| bad("exponent must be an integer"))?,
                )),
                _ => Err(bad("factor must be [name, exp] or [\"comm\", u, v]")),
            })
            .collect::<Result<Vec<_>>>()
            .map(GroupWord)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|x| match x {
                GroupFactor::Atom(n, 1) => n.clone(),
                GroupFactor::Atom(n, e) => format!("{n}^{e}"),
                GroupFactor::Comm(u, v) => format!("[{u},{v}]"),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Group variables standing for one ring subterm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterfaceEntry {
    pub term: String,
    pub vars: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSystem {
    /// Rank `m` of the ambient group the constants live in.
    pub rank: usize,
    pub variables: Vec<String>,
    /// Named constants as words in `a1 … am`. Generators `a<k>` are always
    /// available without declaration.
    pub constants: BTreeMap<String, String>,
    pub equations: Vec<(GroupWord, GroupWord)>,
    pub interface: Vec<InterfaceEntry>,
}

pub(crate) fn generator_index(name: &str, rank: usize) -> Option<usize> {
    let k: usize = name.strip_prefix('a')?.parse().ok()?;
    (1..=rank).contains(&k).then(|| k - 1)
}

impl GroupSystem {
    pub fn validate(&self) -> Result<()> {
        let vars: BTreeSet<&String> = self.variables.iter().collect();
        if vars.len() != self.variables.len() {
            return Err(Error::InvalidSystem("duplicate variable".into()));
        }
        for (name, word) in &self.constants {
            if vars.contains(name) {
                return Err(Error::InvalidSystem(format!("'{name}' is both a variable and a constant")));
            }
            parse_word(word, self.rank)?;
        }
        let mut used = BTreeSet::new();
        for (u, v) in &self.equations {
            u.names(&mut used);
            v.names(&mut used);
        }
        for e in &self.interface {
            used.extend(e.vars.iter().cloned());
        }
        for n in &used {
            if !vars.contains(n)
                && !self.constants.contains_key(n)
                && generator_index(n, self.rank).is_none()
            {
                return Err(Error::InvalidSystem(format!("undeclared name '{n}'")));
            }
        }
        Ok(())
    }

    pub fn constant_value<T: IntScalar>(&self, name: &str) -> Result<Malcev<T>> {
        if let Some(w) = self.constants.get(name) {
            return Ok(Malcev::from_word(&parse_word(w, self.rank)?));
        }
        generator_index(name, self.rank)
            .map(|i| Malcev::generator(self.rank, i))
            .ok_or_else(|| Error::InvalidSystem(format!("'{name}' is not a constant")))
    }

    /// Interface variables in order of first appearance, or every variable
    /// when there is no interface.
    pub fn projection_vars(&self) -> Vec<String> {
        if self.interface.is_empty() {
            return self.variables.clone();
        }
        let mut seen = BTreeSet::new();
        self.interface
            .iter()
            .flat_map(|e| e.vars.iter())
            .filter(|v| seen.insert((*v).clone()))
            .cloned()
            .collect()
    }

    /// Exact check of a full assignment in arbitrary precision.
    pub fn is_solution(&self, assignment: &BTreeMap<String, MalcevElement>, ambient: &Ambient) -> Result<bool> {
        let resolve = |n: &str| -> Result<MalcevElement> {
            match assignment.get(n) {
                Some(g) => Ok(g.clone()),
                None if self.variables.iter().any(|v| v == n) => {
                    Err(Error::InvalidSystem(format!("variable '{n}' is unassigned")))
                }
                None => self.constant_value(n),
            }
        };
        for (u, v) in &self.equations {
            let w = u.eval(self.rank, &resolve)?.multiply(&v.eval(self.rank, &resolve)?.inverse())?;
            if !ambient.is_trivial(&w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "variables": self.variables,
            "constants": self.constants,
            "equations": self
                .equations
                .iter()
                .map(|(u, v)| json!([u.to_json(), v.to_json()]))
                .collect::<Vec<_>>(),
            "interface": self
                .interface
                .iter()
                .map(|e| json!({"term": e.term, "vars": e.vars}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidSystem(m.to_string());
        let strings = |x: &Value, what: &str| -> Result<Vec<String>> {
            x.as_array()
                .ok_or_else(|| bad(&format!("'{what}' must be an array of strings")))?
                .iter()
                .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad(&format!("'{what}' must hold strings"))))
                .collect()
        };
        let rank = match &v["rank"] {
            Value::Null => 2,
            r => r.as_u64().ok_or_else(|| bad("'rank' must be a nonnegative integer"))? as usize,
        };
        let variables = strings(&v["variables"], "variables")?;
        let constants = match &v["constants"] {
            Value::Null => BTreeMap::new(),
            Value::Object(map) => map
                .iter()
                .map(|(k, w)| {
                    w.as_str()
                        .map(|s| (k.clone(), s.to_string()))
                        .ok_or_else(|| bad("constant values must be word strings"))
                })
                .collect::<Result<_>>()?,
            _ => return Err(bad("'constants' must be an object")),
        };
        let equations = v["equations"]
            .as_array()
            .ok_or_else(|| bad("'equations' must be an array"))?
            .iter()
            .map(|e| match e.as_array().map(Vec::as_slice) {
                Some([l, r]) => Ok((GroupWord::from_json(l)?, GroupWord::from_json(r)?)),
                _ => Err(bad("each equation is a pair [lhs, rhs]")),
            })
            .collect::<Result<Vec<_>>>()?;
        let interface = match &v["interface"] {
            Value::Null => Vec::new(),
            Value::Array(items) => items
                .iter()
                .map(|e| {
                    Ok(InterfaceEntry {
                        term: e["term"].as_str().ok_or_else(|| bad("interface term must be a string"))?.to_string(),
                        vars: strings(&e["vars"], "interface vars")?,
                    })
                })
                .collect::<Result<_>>()?,
            _ => return Err(bad("'interface' must be an array")),
        };
        let sys = GroupSystem {
            rank,
            variables,
            constants,
            equations,
            interface,
        };
        sys.validate()?;
        Ok(sys)
    }
}

impl fmt::Display for GroupSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (u, v) in &self.equations {
            writeln!(f, "{u} = {v}")?;
        }
        Ok(())
    }
}

/// Group in which equations are solved.
#[derive(Clone, Debug)]
pub enum Ambient {
    Free { rank: usize },
    /// `N_{2,m}/⟨⟨R⟩⟩`; elements are given in the original generators.
    Quotient(Box<NormalizedPresentation>),
}

impl Ambient {
    pub fn free(rank: usize) -> Self {
        Ambient::Free { rank }
    }

    pub fn quotient(np: NormalizedPresentation) -> Result<Self> {
        if !np.rank_full() {
            return Err(Error::Inconclusive(
                "quotient ambient needs a full-rank presentation".into(),
            ));
        }
        Ok(Ambient::Quotient(Box::new(np)))
    }

    pub fn rank(&self) -> usize {
        match self {
            Ambient::Free { rank } => *rank,
            Ambient::Quotient(np) => np.rank(),
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Ambient::Free { .. })
    }

    pub fn is_trivial(&self, h: &MalcevElement) -> Result<bool> {
        match self {
            Ambient::Free { .. } => Ok(h.is_identity()),
            Ambient::Quotient(np) => np.is_trivial_in_G(h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys() -> GroupSystem {
        GroupSystem {
            rank: 2,
            variables: vec!["x".into(), "y".into()],
            constants: [("a", "a1"), ("b", "a2"), ("c", "[a1,a2]")]
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            equations: vec![
                (
                    GroupWord::name("x"),
                    GroupWord::comm(GroupWord::name("a"), GroupWord::name("y")),
                ),
                (
                    GroupWord::comm(GroupWord::name("y"), GroupWord::name("b")),
                    GroupWord::one(),
                ),
            ],
            interface: vec![InterfaceEntry {
                term: "t".into(),
                vars: vec!["x".into()],
            }],
        }
    }

    #[test]
    fn json_round_trip() {
        let s = sys();
        s.validate().unwrap();
        assert_eq!(GroupSystem::from_json(&s.to_json()).unwrap(), s);
        assert_eq!(s.projection_vars(), vec!["x".to_string()]);
    }

    #[test]
    fn validation_catches_undeclared_names() {
        let mut s = sys();
        s.equations.push((GroupWord::name("z"), GroupWord::one()));
        assert!(s.validate().is_err());
        let mut s = sys();
        s.equations.push((GroupWord::name("a2"), GroupWord::name("a3")));
        assert!(s.validate().is_err());
    }

    #[test]
    fn inverse_word_evaluates_to_inverse() {
        let w = GroupWord(vec![
            GroupFactor::Atom("a1".into(), 2),
            GroupFactor::Comm(GroupWord::name("a1"), GroupWord::atom("a2", 3)),
            GroupFactor::Atom("a2".into(), -1),
        ]);
        let s = sys();
        let res = |n: &str| s.constant_value::<i64>(n);
        let g = w.eval(2, &res).unwrap();
        let h = w.inverse().eval(2, &res).unwrap();
        assert!(g.multiply(&h).unwrap().is_identity());
        assert_eq!(w.to_string(), "a1^2 [a1,a2^3] a2^-1");
    }

    #[test]
    fn exact_solution_check() {
        let s = sys();
        let amb = Ambient::free(2);
        let c: MalcevElement = s.constant_value("c").unwrap();
        let b: MalcevElement = s.constant_value("b").unwrap();
        let good: BTreeMap<String, MalcevElement> =
            [("x".to_string(), c.pow(&3.into())), ("y".to_string(), b.pow(&3.into()))].into();
        assert!(s.is_solution(&good, &amb).unwrap());
        let bad: BTreeMap<String, MalcevElement> =
            [("x".to_string(), c.clone()), ("y".to_string(), b.pow(&2.into()))].into();
        assert!(!s.is_solution(&bad, &amb).unwrap());
    }
}
