use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Polynomial term over ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(i64),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Neg(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(n: i64) -> Term {
        Term::Const(n)
    }

    pub fn variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.variables(out);
                b.variables(out);
            }
            Term::Neg(a) => a.variables(out),
        }
    }

    /// Value under `env`; `None` on an unbound variable or overflow.
    pub fn eval(&self, env: &dyn Fn(&str) -> Option<i64>) -> Option<i64> {
        Some(match self {
            Term::Var(v) => env(v)?,
            Term::Const(n) => *n,
            Term::Add(a, b) => a.eval(env)?.checked_add(b.eval(env)?)?,
            Term::Sub(a, b) => a.eval(env)?.checked_sub(b.eval(env)?)?,
            Term::Mul(a, b) => a.eval(env)?.checked_mul(b.eval(env)?)?,
            Term::Neg(a) => a.eval(env)?.checked_neg()?,
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Term::Var(v) => json!(["var", v]),
            Term::Const(n) => json!(["const", n]),
            Term::Add(a, b) => json!(["+", a.to_json(), b.to_json()]),
            Term::Sub(a, b) => json!(["-", a.to_json(), b.to_json()]),
            Term::Mul(a, b) => json!(["*", a.to_json(), b.to_json()]),
            Term::Neg(a) => json!(["neg", a.to_json()]),
        }
    }

    pub fn from_json(v: &Value) -> Result<Term> {
        let bad = |what: &str| Error::InvalidSystem(format!("bad term {v}: {what}"));
        let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
        let tag = arr.first().and_then(Value::as_str).ok_or_else(|| bad("missing tag"))?;
        let arg = |i: usize| -> Result<Term> {
            Term::from_json(arr.get(i).ok_or_else(|| bad("missing operand"))?)
        };
        let want = |n: usize| -> Result<()> {
            if arr.len() == n {
                Ok(())
            } else {
                Err(bad("wrong number of operands"))
            }
        };
        match tag {
            "var" => {
                want(2)?;
                let name = arr[1].as_str().ok_or_else(|| bad("variable name must be a string"))?;
                Ok(Term::var(name))
            }
            "const" => {
                want(2)?;
                Ok(Term::Const(arr[1].as_i64().ok_or_else(|| bad("constant must be an integer"))?))
            }
            "+" | "-" | "*" => {
                want(3)?;
                let (a, b) = (Box::new(arg(1)?), Box::new(arg(2)?));
                Ok(match tag {
                    "+" => Term::Add(a, b),
                    "-" => Term::Sub(a, b),
                    _ => Term::Mul(a, b),
                })
            }
            "neg" => {
                want(2)?;
                Ok(Term::Neg(Box::new(arg(1)?)))
            }
            other => Err(bad(&format!("unknown tag '{other}'"))),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(n) if *n < 0 => write!(f, "({n})"),
            Term::Const(n) => write!(f, "{n}"),
            Term::Add(a, b) => write!(f, "({a} + {b})"),
            Term::Sub(a, b) => write!(f, "({a} - {b})"),
            Term::Mul(a, b) => write!(f, "{a}*{b}"),
            Term::Neg(a) => write!(f, "-{a}"),
        }
    }
}

impl Add for Term {
    type Output = Term;
    fn add(self, rhs: Term) -> Term {
        Term::Add(Box::new(self), Box::new(rhs))
    }
}

impl Sub for Term {
    type Output = Term;
    fn sub(self, rhs: Term) -> Term {
        Term::Sub(Box::new(self), Box::new(rhs))
    }
}

impl Mul for Term {
    type Output = Term;
    fn mul(self, rhs: Term) -> Term {
        Term::Mul(Box::new(self), Box::new(rhs))
    }
}

impl Neg for Term {
    type Output = Term;
    fn neg(self) -> Term {
        Term::Neg(Box::new(self))
    }
}

/// Finite system of polynomial equations over ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSystem {
    pub variables: Vec<String>,
    pub equations: Vec<(Term, Term)>,
}

impl RingSystem {
    pub fn new(variables: &[&str], equations: Vec<(Term, Term)>) -> Result<Self> {
        let sys = RingSystem {
            variables: variables.iter().map(|s| s.to_string()).collect(),
            equations,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        let declared: BTreeSet<&String> = self.variables.iter().collect();
        if declared.len() != self.variables.len() {
            return Err(Error::InvalidSystem("duplicate variable".into()));
        }
        let mut used = BTreeSet::new();
        for (l, r) in &self.equations {
            l.variables(&mut used);
            r.variables(&mut used);
        }
        if let Some(v) = used.iter().find(|v| !declared.contains(v)) {
            return Err(Error::InvalidSystem(format!("undeclared variable '{v}'")));
        }
        Ok(())
    }

    pub fn is_solution(&self, values: &[i64]) -> bool {
        let env = |name: &str| {
            self.variables
                .iter()
                .position(|v| v == name)
                .map(|i| values[i])
        };
        self.equations.iter().all(|(l, r)| match (l.eval(&env), r.eval(&env)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "variables": self.variables,
            "equations": self
                .equations
                .iter()
                .map(|(l, r)| json!([l.to_json(), r.to_json()]))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidSystem(m.to_string());
        let variables = v["variables"]
            .as_array()
            .ok_or_else(|| bad("'variables' must be an array"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("variable names must be strings")))
            .collect::<Result<Vec<_>>>()?;
        let equations = v["equations"]
            .as_array()
            .ok_or_else(|| bad("'equations' must be an array"))?
            .iter()
            .map(|e| match e.as_array().map(Vec::as_slice) {
                Some([l, r]) => Ok((Term::from_json(l)?, Term::from_json(r)?)),
                _ => Err(bad("each equation is a pair [lhs, rhs]")),
            })
            .collect::<Result<Vec<_>>>()?;
        let sys = RingSystem {
            variables,
            equations,
        };
        sys.validate()?;
        Ok(sys)
    }
}

impl fmt::Display for RingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eqs: Vec<String> = self.equations.iter().map(|(l, r)| format!("{l} = {r}")).collect();
        write!(f, "{{{}}}", eqs.join(", "))
    }
}

pub const DEFAULT_RING_LIMIT: u64 = 50_000_000;

/// All assignments in `[−B, B]^n` satisfying the system, in lexicographic
/// order of the declared variables.
pub fn bounded_solve_ring(sys: &RingSystem, bound: i64, limit: u64) -> Result<Vec<Vec<i64>>> {
    if bound < 0 {
        return Err(Error::Precondition("bound must be nonnegative".into()));
    }
    let n = sys.variables.len() as u32;
    let width = 2 * bound as u64 + 1;
    width
        .checked_pow(n)
        .filter(|&s| s <= limit)
        .ok_or_else(|| Error::SearchLimit(format!("{width}^{n} ring assignments exceed {limit}")))?;
    let mut out = Vec::new();
    let mut cur = vec![-bound; n as usize];
    loop {
        if sys.is_solution(&cur) {
            out.push(cur.clone());
        }
        // Odometer increment, last variable fastest.
        let mut i = n as usize;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < bound {
                cur[i] += 1;
                break;
            }
            cur[i] = -bound;
        }
    }
}
