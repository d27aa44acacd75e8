use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::group::GroupWord;

/// System fragment with argument/result slots and private auxiliaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    /// One tuple of `arity` slot names per argument (and result).
    pub slots: Vec<Vec<String>>,
    pub aux: Vec<String>,
    pub equations: Vec<(GroupWord, GroupWord)>,
}

impl Template {
    /// Equations with slots bound to `args` and auxiliaries renamed by
    /// `fresh`, which is called once per auxiliary in order.
    pub fn instantiate(
        &self,
        args: &[Vec<String>],
        fresh: &mut dyn FnMut() -> String,
    ) -> (Vec<String>, Vec<(GroupWord, GroupWord)>) {
        assert_eq!(args.len(), self.slots.len(), "template arity");
        let mut map: BTreeMap<&str, String> = BTreeMap::new();
        for (slot, arg) in self.slots.iter().zip(args) {
            assert_eq!(slot.len(), arg.len(), "tuple arity");
            for (s, a) in slot.iter().zip(arg) {
                map.insert(s, a.clone());
            }
        }
        let aux: Vec<String> = self.aux.iter().map(|_| fresh()).collect();
        for (a, f) in self.aux.iter().zip(&aux) {
            map.insert(a, f.clone());
        }
        let rename = |n: &str| map.get(n).cloned().unwrap_or_else(|| n.to_string());
        let eqs = self
            .equations
            .iter()
            .map(|(u, v)| (u.rename(&rename), v.rename(&rename)))
            .collect();
        (aux, eqs)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "slots": self.slots,
            "aux": self.aux,
            "equations": self
                .equations
                .iter()
                .map(|(u, v)| json!([u.to_json(), v.to_json()]))
                .collect::<Vec<_>>(),
        })
    }
}

/// E-definition of `(ℤ; +, −, ×)` in a group by `k`-tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EDefinition {
    pub arity: usize,
    /// Rank of the ambient group.
    pub rank: usize,
    pub constants: BTreeMap<String, String>,
    /// The integer `n` is encoded as `(unit_1^n, …, unit_k^n)`.
    pub unit: Vec<String>,
    pub domain: Template,
    pub add: Template,
    pub neg: Template,
    pub mul: Template,
    pub equality: Template,
}

impl EDefinition {
    pub fn to_json(&self) -> Value {
        json!({
            "arity": self.arity,
            "rank": self.rank,
            "constants": self.constants,
            "unit": self.unit,
            "domain": self.domain.to_json(),
            "add": self.add.to_json(),
            "neg": self.neg.to_json(),
            "mul": self.mul.to_json(),
            "equality": self.equality.to_json(),
        })
    }
}

fn n(s: &str) -> GroupWord {
    GroupWord::name(s)
}

fn comm(u: &str, v: &str) -> GroupWord {
    GroupWord::comm(n(u), n(v))
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// `x ∈ {c^t}` through `x = [a, y], [y, b] = 1`.
fn domain_equations(x: &str, y: &str) -> Vec<(GroupWord, GroupWord)> {
    vec![(n(x), comm("a", y)), (comm(y, "b"), GroupWord::one())]
}

/// The encoding `t ↦ c^t`, `c = [a, b]`, with `a = a1`, `b = a2` in
/// `N_{2,m}`; `a` and `b` must be non-commuting c-small elements.
pub fn z_in_g_templates(rank: usize) -> EDefinition {
    assert!(rank >= 2, "the encoding needs two generators");
    let constants: BTreeMap<String, String> = [("a", "a1"), ("b", "a2"), ("c", "[a1,a2]")]
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();

    let domain = Template {
        slots: vec![strings(&["x"])],
        aux: strings(&["y"]),
        equations: domain_equations("x", "y"),
    };

    let mut add_eqs = vec![(
        GroupWord::name("x1").concat(&n("x2")),
        n("x3"),
    )];
    for (x, y) in [("x1", "y1"), ("x2", "y2"), ("x3", "y3")] {
        add_eqs.extend(domain_equations(x, y));
    }
    let add = Template {
        slots: vec![strings(&["x1"]), strings(&["x2"]), strings(&["x3"])],
        aux: strings(&["y1", "y2", "y3"]),
        equations: add_eqs,
    };

    let mut neg_eqs = vec![(GroupWord::name("x1").concat(&n("x2")), GroupWord::one())];
    for (x, y) in [("x1", "y1"), ("x2", "y2")] {
        neg_eqs.extend(domain_equations(x, y));
    }
    let neg = Template {
        slots: vec![strings(&["x1"]), strings(&["x2"])],
        aux: strings(&["y1", "y2"]),
        equations: neg_eqs,
    };

    let mul = Template {
        slots: vec![strings(&["x1"]), strings(&["x2"]), strings(&["x3"])],
        aux: strings(&["p1", "p2"]),
        equations: vec![
            (n("x1"), comm("p1", "b")),
            (comm("p1", "a"), GroupWord::one()),
            (n("x2"), comm("a", "p2")),
            (comm("p2", "b"), GroupWord::one()),
            (n("x3"), comm("p1", "p2")),
        ],
    };

    let equality = Template {
        slots: vec![strings(&["x1"]), strings(&["x2"])],
        aux: Vec::new(),
        equations: vec![(n("x1"), n("x2"))],
    };

    EDefinition {
        arity: 1,
        rank,
        constants,
        unit: strings(&["c"]),
        domain,
        add,
        neg,
        mul,
        equality,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_shapes() {
        let e = z_in_g_templates(2);
        assert_eq!(e.arity, 1);
        assert_eq!(e.domain.equations.len(), 2);
        assert_eq!(e.mul.equations.len(), 5);
        assert_eq!(e.add.equations.len(), 7);
        assert_eq!(e.neg.equations.len(), 5);
        assert_eq!(e.equality.equations.len(), 1);
        let rendered: Vec<String> = e
            .mul
            .equations
            .iter()
            .map(|(u, v)| format!("{u} = {v}"))
            .collect();
        assert_eq!(
            rendered,
            [
                "x1 = [p1,b]",
                "[p1,a] = 1",
                "x2 = [a,p2]",
                "[p2,b] = 1",
                "x3 = [p1,p2]"
            ]
        );
    }

    #[test]
    fn instantiation_renames_without_capture() {
        let e = z_in_g_templates(2);
        let mut k = 0;
        let mut fresh = || {
            k += 1;
            format!("u{k}")
        };
        let args = vec![vec!["y1".to_string()], vec!["y1".to_string()], vec!["p1".to_string()]];
        let (aux, eqs) = e.mul.instantiate(&args, &mut fresh);
        assert_eq!(aux, ["u1", "u2"]);
        let text: Vec<String> = eqs.iter().map(|(u, v)| format!("{u} = {v}")).collect();
        assert_eq!(text[0], "y1 = [u1,b]");
        assert_eq!(text[4], "p1 = [u1,u2]");
    }
}
