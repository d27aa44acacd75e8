//! Exhaustive search for solutions of group equation systems with every
//! Malcev coordinate in `[−B, B]`.
//!
//! Variables outside the requested projection are never enumerated for
//! their own sake. They are grouped into components (auxiliaries linked by
//! shared equations) and each component is only asked whether some witness
//! exists once the projected variables it touches are fixed. A component
//! touching a single projected variable instead restricts that variable's
//! domain up front, by enumerating the component and collecting the values
//! it forces. Equations in which an unassigned variable occurs exactly once,
//! at top level with exponent ±1, are solved for it instead of branching.
//! Every shortcut is exact, so the result equals plain enumeration of the
//! box. Results therefore never prove unsolvability beyond the box.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::rc::Rc;

use num_bigint::BigInt;

use super::group::{Ambient, GroupFactor, GroupSystem, GroupWord};
use crate::error::{Error, Result};
use crate::nilpotent2::{pair_count, Malcev};
use crate::SmallMalcev;

#[derive(Clone, Debug)]
enum Factor {
    Var(usize, i64),
    Const(SmallMalcev),
    Comm(Vec<Factor>, Vec<Factor>),
}

fn invert(fs: &[Factor]) -> Vec<Factor> {
    fs.iter()
        .rev()
        .map(|f| match f {
            Factor::Var(x, e) => Factor::Var(*x, -e),
            Factor::Const(g) => Factor::Const(g.inverse()),
            Factor::Comm(p, q) => Factor::Comm(q.clone(), p.clone()),
        })
        .collect()
}

fn count_vars(fs: &[Factor], counts: &mut BTreeMap<usize, usize>) {
    for f in fs {
        match f {
            Factor::Var(x, _) => *counts.entry(*x).or_default() += 1,
            Factor::Const(_) => {}
            Factor::Comm(p, q) => {
                count_vars(p, counts);
                count_vars(q, counts);
            }
        }
    }
}

/// `w = u v^{-1}`, to be tested for triviality.
struct Equation {
    factors: Vec<Factor>,
    vars: Vec<usize>,
    /// `(var, position, exponent)` for variables the equation can be
    /// solved for.
    solvable: Vec<(usize, usize, i64)>,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub bound: i64,
    /// Maximum number of search nodes, summed over all subsearches.
    pub node_limit: u64,
    /// Maximum number of elements in the coordinate box.
    pub box_limit: usize,
}

impl SolveOptions {
    pub fn with_bound(bound: i64) -> Self {
        SolveOptions {
            bound,
            ..Self::default()
        }
    }
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            bound: 2,
            node_limit: 50_000_000,
            box_limit: 2_000_000,
        }
    }
}

enum Domain {
    Box,
    Set(Vec<SmallMalcev>, HashSet<SmallMalcev>),
}

struct Component {
    aux: Vec<usize>,
    eqs: Vec<usize>,
    boundary: Vec<usize>,
    sig: String,
}

struct Problem {
    visible: Vec<usize>,
    primary: Vec<usize>,
    comps: Vec<Component>,
    eqs_of: Vec<Vec<usize>>,
    comps_of: Vec<Vec<usize>>,
    /// Components already folded into a domain.
    prefiltered: Vec<bool>,
    domains: HashMap<usize, Domain>,
    project: Vec<usize>,
    first_only: bool,
}

type Assign = Vec<Option<SmallMalcev>>;
type MemoKey = (String, Vec<Option<Vec<i64>>>);

pub struct GroupSolver<'a> {
    ambient: &'a Ambient,
    opts: SolveOptions,
    rank: usize,
    names: Vec<String>,
    index: HashMap<String, usize>,
    eqs: Vec<Equation>,
    box_elems: Vec<SmallMalcev>,
    nodes: Cell<u64>,
    exist_memo: RefCell<HashMap<MemoKey, bool>>,
    image_memo: RefCell<HashMap<MemoKey, Rc<Vec<SmallMalcev>>>>,
}

impl<'a> GroupSolver<'a> {
    pub fn new(sys: &GroupSystem, ambient: &'a Ambient, opts: SolveOptions) -> Result<Self> {
        sys.validate()?;
        if sys.rank != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                found: sys.rank,
            });
        }
        if opts.bound < 0 {
            return Err(Error::Precondition("bound must be nonnegative".into()));
        }
        let rank = sys.rank;
        let names = sys.variables.clone();
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut consts: HashMap<String, SmallMalcev> = HashMap::new();
        let mut eqs = Vec::new();
        for (u, v) in &sys.equations {
            let mut factors = lower(u, &index, sys, &mut consts)?;
            factors.extend(invert(&lower(v, &index, sys, &mut consts)?));
            let mut counts = BTreeMap::new();
            count_vars(&factors, &mut counts);
            let solvable = factors
                .iter()
                .enumerate()
                .filter_map(|(pos, f)| match f {
                    Factor::Var(x, e) if e.abs() == 1 && counts[x] == 1 => Some((*x, pos, *e)),
                    _ => None,
                })
                .collect();
            eqs.push(Equation {
                factors,
                vars: counts.keys().copied().collect(),
                solvable,
            });
        }
        let box_elems = enumerate_box(rank, opts.bound, opts.box_limit)?;
        Ok(GroupSolver {
            ambient,
            opts,
            rank,
            names,
            index,
            eqs,
            box_elems,
            nodes: Cell::new(0),
            exist_memo: RefCell::new(HashMap::new()),
            image_memo: RefCell::new(HashMap::new()),
        })
    }

    /// Search nodes visited so far.
    pub fn nodes(&self) -> u64 {
        self.nodes.get()
    }

    pub fn bound(&self) -> i64 {
        self.opts.bound
    }

    fn var(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidSystem(format!("'{name}' is not a variable")))
    }

    fn initial_assign(&self, fixed: &BTreeMap<String, SmallMalcev>) -> Result<Assign> {
        let mut assign = vec![None; self.names.len()];
        for (n, g) in fixed {
            if g.rank() != self.rank {
                return Err(Error::DimensionMismatch {
                    expected: self.rank,
                    found: g.rank(),
                });
            }
            assign[self.var(n)?] = Some(g.clone());
        }
        Ok(assign)
    }

    /// Distinct values of `project` over all solutions in the box that
    /// extend `fixed`, sorted by coordinates.
    pub fn solve(
        &self,
        project: &[String],
        fixed: &BTreeMap<String, SmallMalcev>,
    ) -> Result<Vec<Vec<SmallMalcev>>> {
        let mut assign = self.initial_assign(fixed)?;
        let project: Vec<usize> = project.iter().map(|n| self.var(n)).collect::<Result<_>>()?;
        let visible: Vec<usize> = dedup(project.iter().copied().filter(|&x| assign[x].is_none()));
        let all: Vec<usize> = (0..self.eqs.len()).collect();
        let mut out = self.run(&visible, &all, &mut assign, &project, false)?;
        out.sort_by_key(|sol| sol.iter().map(Malcev::coordinates).collect::<Vec<_>>());
        Ok(out)
    }

    /// A full assignment extending `fixed`, with every variable in the box
    /// unless fixed.
    pub fn find_witness(
        &self,
        fixed: &BTreeMap<String, SmallMalcev>,
    ) -> Result<Option<BTreeMap<String, SmallMalcev>>> {
        let mut assign = self.initial_assign(fixed)?;
        let visible: Vec<usize> = (0..self.names.len()).filter(|&x| assign[x].is_none()).collect();
        let all: Vec<usize> = (0..self.eqs.len()).collect();
        let everything: Vec<usize> = (0..self.names.len()).collect();
        let found = self.run(&visible, &all, &mut assign, &everything, true)?;
        Ok(found.into_iter().next().map(|vals| {
            self.names.iter().cloned().zip(vals).collect()
        }))
    }

    /// Whether some extension of `fixed` exists in the box.
    pub fn exists(&self, fixed: &BTreeMap<String, SmallMalcev>) -> Result<bool> {
        let mut assign = self.initial_assign(fixed)?;
        let all: Vec<usize> = (0..self.eqs.len()).collect();
        Ok(!self.run(&[], &all, &mut assign, &[], true)?.is_empty())
    }

    fn tick(&self) -> Result<()> {
        let n = self.nodes.get() + 1;
        self.nodes.set(n);
        if n > self.opts.node_limit {
            return Err(Error::SearchLimit(format!(
                "more than {} search nodes",
                self.opts.node_limit
            )));
        }
        Ok(())
    }

    fn eval(&self, fs: &[Factor], assign: &Assign) -> SmallMalcev {
        let mut acc = Malcev::identity(self.rank);
        for f in fs {
            let g = match f {
                Factor::Var(x, e) => assign[*x].as_ref().expect("assigned").pow(e),
                Factor::Const(g) => g.clone(),
                Factor::Comm(p, q) => self
                    .eval(p, assign)
                    .commutator(&self.eval(q, assign))
                    .expect("same rank"),
            };
            acc = acc.multiply(&g).expect("same rank");
        }
        acc
    }

    fn holds(&self, e: usize, assign: &Assign) -> Result<bool> {
        let w = self.eval(&self.eqs[e].factors, assign);
        match self.ambient {
            Ambient::Free { .. } => Ok(w.is_identity()),
            amb => amb.is_trivial(&w.cast::<BigInt>().expect("i64 fits")),
        }
    }

    fn in_box(&self, g: &SmallMalcev) -> bool {
        g.alpha().iter().chain(g.gamma()).all(|c| c.abs() <= self.opts.bound)
    }

    fn key(&self, comp: &Component, assign: &Assign) -> MemoKey {
        (
            comp.sig.clone(),
            comp.boundary
                .iter()
                .map(|&b| assign[b].as_ref().map(Malcev::coordinates))
                .collect(),
        )
    }

    fn build(&self, visible: &[usize], eqs: &[usize], assign: &Assign, project: &[usize], first_only: bool) -> Result<Problem> {
        let n = self.names.len();
        let is_visible: Vec<bool> = {
            let mut v = vec![false; n];
            for &x in visible {
                v[x] = true;
            }
            v
        };
        let hidden = |x: usize| !is_visible[x] && assign[x].is_none();

        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut primary = Vec::new();
        for &e in eqs {
            let hs: Vec<usize> = self.eqs[e].vars.iter().copied().filter(|&x| hidden(x)).collect();
            if hs.is_empty() {
                primary.push(e);
            }
            for w in hs.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &e in eqs {
            if let Some(&h) = self.eqs[e].vars.iter().find(|&&x| hidden(x)) {
                let r = find(&mut parent, h);
                by_root.entry(r).or_default().push(e);
            }
        }
        let comps: Vec<Component> = by_root
            .into_values()
            .map(|ceqs| {
                let mut aux = Vec::new();
                let mut boundary = Vec::new();
                for &e in &ceqs {
                    for x in first_appearance(&self.eqs[e].factors) {
                        let list = if hidden(x) { &mut aux } else { &mut boundary };
                        if !list.contains(&x) {
                            list.push(x);
                        }
                    }
                }
                let sig = self.signature(&ceqs, &boundary, &aux);
                Component {
                    aux,
                    eqs: ceqs,
                    boundary,
                    sig,
                }
            })
            .collect();

        let mut eqs_of = vec![Vec::new(); n];
        for &e in &primary {
            for &x in &self.eqs[e].vars {
                eqs_of[x].push(e);
            }
        }
        let mut comps_of = vec![Vec::new(); n];
        for (k, c) in comps.iter().enumerate() {
            for &b in &c.boundary {
                comps_of[b].push(k);
            }
        }

        let mut prefiltered = vec![false; comps.len()];
        let mut domains = HashMap::new();
        for &v in visible {
            let mut cands: Option<Vec<SmallMalcev>> = None;
            for &k in &comps_of[v] {
                let c = &comps[k];
                if c.boundary.iter().all(|&b| b == v || assign[b].is_some()) {
                    prefiltered[k] = true;
                    let img = self.image(c, v, assign)?;
                    cands = Some(match cands {
                        None => img.to_vec(),
                        Some(prev) => {
                            let s: HashSet<&SmallMalcev> = img.iter().collect();
                            prev.into_iter().filter(|g| s.contains(g)).collect()
                        }
                    });
                }
            }
            let unary: Vec<usize> = eqs_of[v]
                .iter()
                .copied()
                .filter(|&e| self.eqs[e].vars.iter().all(|&x| x == v || assign[x].is_some()))
                .collect();
            if cands.is_none() && unary.is_empty() {
                domains.insert(v, Domain::Box);
                continue;
            }
            let mut scratch = assign.clone();
            let base: Vec<SmallMalcev> = cands.unwrap_or_else(|| self.box_elems.clone());
            let mut list = Vec::new();
            for g in base {
                self.tick()?;
                scratch[v] = Some(g);
                let mut ok = true;
                for &e in &unary {
                    if !self.holds(e, &scratch)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    list.push(scratch[v].take().expect("just set"));
                }
            }
            let set = list.iter().cloned().collect();
            domains.insert(v, Domain::Set(list, set));
        }

        Ok(Problem {
            visible: visible.to_vec(),
            primary,
            comps,
            eqs_of,
            comps_of,
            prefiltered,
            domains,
            project: project.to_vec(),
            first_only,
        })
    }

    fn signature(&self, eqs: &[usize], boundary: &[usize], aux: &[usize]) -> String {
        let name = |x: usize| -> String {
            if let Some(i) = boundary.iter().position(|&b| b == x) {
                format!("B{i}")
            } else {
                let j = aux.iter().position(|&a| a == x).expect("component variable");
                format!("A{j}")
            }
        };
        fn render(fs: &[Factor], name: &dyn Fn(usize) -> String, out: &mut String) {
            for f in fs {
                match f {
                    Factor::Var(x, e) => out.push_str(&format!("{}^{e} ", name(*x))),
                    Factor::Const(g) => out.push_str(&format!("{:?} ", g.coordinates())),
                    Factor::Comm(p, q) => {
                        out.push('[');
                        render(p, name, out);
                        out.push(',');
                        render(q, name, out);
                        out.push_str("] ");
                    }
                }
            }
        }
        let mut s = String::new();
        for &e in eqs {
            render(&self.eqs[e].factors, &name, &mut s);
            s.push(';');
        }
        s
    }

    /// Values of `v` for which the component has a witness, other boundary
    /// variables being assigned.
    fn image(&self, comp: &Component, v: usize, assign: &Assign) -> Result<Rc<Vec<SmallMalcev>>> {
        let key = self.key(comp, assign);
        if let Some(hit) = self.image_memo.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let mut scratch = assign.clone();
        let mut visible = vec![v];
        visible.extend(comp.aux.iter().copied());
        let found = self.run(&visible, &comp.eqs, &mut scratch, &[v], false)?;
        let img: Rc<Vec<SmallMalcev>> = Rc::new(found.into_iter().map(|mut s| s.remove(0)).collect());
        self.image_memo.borrow_mut().insert(key, img.clone());
        Ok(img)
    }

    fn component_exists(&self, comp: &Component, assign: &Assign) -> Result<bool> {
        let key = self.key(comp, assign);
        if let Some(&hit) = self.exist_memo.borrow().get(&key) {
            return Ok(hit);
        }
        let mut scratch = assign.clone();
        let found = !self.run(&comp.aux, &comp.eqs, &mut scratch, &[], true)?.is_empty();
        self.exist_memo.borrow_mut().insert(key, found);
        Ok(found)
    }

    fn run(
        &self,
        visible: &[usize],
        eqs: &[usize],
        assign: &mut Assign,
        project: &[usize],
        first_only: bool,
    ) -> Result<Vec<Vec<SmallMalcev>>> {
        let p = self.build(visible, eqs, assign, project, first_only)?;
        for &e in &p.primary {
            if self.eqs[e].vars.iter().all(|&x| assign[x].is_some()) && !self.holds(e, assign)? {
                return Ok(Vec::new());
            }
        }
        for c in &p.comps {
            if c.boundary.iter().all(|&b| assign[b].is_some()) && !self.component_exists(c, assign)? {
                return Ok(Vec::new());
            }
        }
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.dfs(&p, assign, &mut out, &mut seen)?;
        Ok(out)
    }

    fn in_domain(&self, p: &Problem, x: usize, g: &SmallMalcev) -> bool {
        match &p.domains[&x] {
            Domain::Box => self.in_box(g),
            Domain::Set(_, set) => set.contains(g),
        }
    }

    fn domain_len(&self, p: &Problem, x: usize) -> usize {
        match &p.domains[&x] {
            Domain::Box => self.box_elems.len(),
            Domain::Set(list, _) => list.len(),
        }
    }

    /// Checks everything that became decidable once `x` was assigned.
    fn consistent(&self, p: &Problem, assign: &Assign, x: usize) -> Result<bool> {
        for &e in &p.eqs_of[x] {
            if self.eqs[e].vars.iter().all(|&y| assign[y].is_some()) && !self.holds(e, assign)? {
                return Ok(false);
            }
        }
        for &k in &p.comps_of[x] {
            let c = &p.comps[k];
            if !p.prefiltered[k]
                && c.boundary.iter().all(|&b| assign[b].is_some())
                && !self.component_exists(c, assign)?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn solve_for(&self, e: usize, pos: usize, exp: i64, assign: &Assign) -> SmallMalcev {
        let fs = &self.eqs[e].factors;
        let l = self.eval(&fs[..pos], assign);
        let r = self.eval(&fs[pos + 1..], assign);
        // l x^exp r = 1
        let xe = l.inverse().multiply(&r.inverse()).expect("same rank");
        if exp == 1 {
            xe
        } else {
            xe.inverse()
        }
    }

    fn propagate(&self, p: &Problem, assign: &mut Assign, trail: &mut Vec<usize>) -> Result<bool> {
        // Solving for a variable picks one representative; in a proper
        // quotient other representatives could also lie in the box.
        if !self.ambient.is_free() {
            return Ok(true);
        }
        loop {
            let mut changed = false;
            for &e in &p.primary {
                let eq = &self.eqs[e];
                let mut open = eq.vars.iter().filter(|&&x| assign[x].is_none());
                let (Some(&x), None) = (open.next(), open.next()) else {
                    continue;
                };
                let Some(&(_, pos, exp)) = eq.solvable.iter().find(|s| s.0 == x) else {
                    continue;
                };
                let val = self.solve_for(e, pos, exp, assign);
                if !self.in_domain(p, x, &val) {
                    return Ok(false);
                }
                assign[x] = Some(val);
                trail.push(x);
                if !self.consistent(p, assign, x)? {
                    return Ok(false);
                }
                changed = true;
            }
            if !changed {
                return Ok(true);
            }
        }
    }

    fn dfs(
        &self,
        p: &Problem,
        assign: &mut Assign,
        out: &mut Vec<Vec<SmallMalcev>>,
        seen: &mut HashSet<Vec<SmallMalcev>>,
    ) -> Result<bool> {
        self.tick()?;
        let mut trail = Vec::new();
        let mut stop = false;
        let result = (|| -> Result<()> {
            if !self.propagate(p, assign, &mut trail)? {
                return Ok(());
            }
            let next = p
                .visible
                .iter()
                .copied()
                .filter(|&x| assign[x].is_none())
                .min_by_key(|&x| self.domain_len(p, x));
            let Some(v) = next else {
                let proj: Vec<SmallMalcev> = p
                    .project
                    .iter()
                    .map(|&x| assign[x].clone().expect("assigned"))
                    .collect();
                if seen.insert(proj.clone()) {
                    out.push(proj);
                }
                stop = p.first_only;
                return Ok(());
            };
            let cands: &[SmallMalcev] = match &p.domains[&v] {
                Domain::Box => &self.box_elems,
                Domain::Set(list, _) => list,
            };
            for g in cands {
                assign[v] = Some(g.clone());
                let go_on = self.consistent(p, assign, v)? && self.dfs(p, assign, out, seen)?;
                assign[v] = None;
                if go_on {
                    stop = true;
                    break;
                }
            }
            Ok(())
        })();
        for x in trail {
            assign[x] = None;
        }
        result?;
        Ok(stop)
    }
}

fn dedup(xs: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for x in xs {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn first_appearance(fs: &[Factor]) -> Vec<usize> {
    let mut out = Vec::new();
    fn walk(fs: &[Factor], out: &mut Vec<usize>) {
        for f in fs {
            match f {
                Factor::Var(x, _) => {
                    if !out.contains(x) {
                        out.push(*x)
                    }
                }
                Factor::Const(_) => {}
                Factor::Comm(p, q) => {
                    walk(p, out);
                    walk(q, out);
                }
            }
        }
    }
    walk(fs, &mut out);
    out
}

fn lower(
    w: &GroupWord,
    index: &HashMap<String, usize>,
    sys: &GroupSystem,
    consts: &mut HashMap<String, SmallMalcev>,
) -> Result<Vec<Factor>> {
    w.0.iter()
        .map(|f| match f {
            GroupFactor::Atom(n, e) => match index.get(n) {
                Some(&x) => Ok(Factor::Var(x, *e)),
                None => {
                    if !consts.contains_key(n) {
                        consts.insert(n.clone(), sys.constant_value::<i64>(n)?);
                    }
                    Ok(Factor::Const(consts[n].pow(e)))
                }
            },
            GroupFactor::Comm(u, v) => Ok(Factor::Comm(
                lower(u, index, sys, consts)?,
                lower(v, index, sys, consts)?,
            )),
        })
        .collect()
}

fn enumerate_box(rank: usize, bound: i64, limit: usize) -> Result<Vec<SmallMalcev>> {
    let dim = rank + pair_count(rank);
    let width = (2 * bound + 1) as usize;
    let size = width
        .checked_pow(dim as u32)
        .filter(|&s| s <= limit)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "box of {width}^{dim} elements exceeds the limit {limit}"
            ))
        })?;
    let mut out = Vec::with_capacity(size);
    let mut cur = vec![-bound; dim];
    for _ in 0..size {
        out.push(Malcev::from_coordinates(rank, &cur).expect("coordinate count"));
        for c in cur.iter_mut().rev() {
            if *c < bound {
                *c += 1;
                break;
            }
            *c = -bound;
        }
    }
    Ok(out)
}

/// Distinct solutions in the box projected onto
/// [`GroupSystem::projection_vars`], keyed by variable name.
pub fn bounded_solve_group(
    sys: &GroupSystem,
    ambient: &Ambient,
    bound: i64,
) -> Result<Vec<BTreeMap<String, SmallMalcev>>> {
    let solver = GroupSolver::new(sys, ambient, SolveOptions::with_bound(bound))?;
    let project = sys.projection_vars();
    Ok(solver
        .solve(&project, &BTreeMap::new())?
        .into_iter()
        .map(|vals| project.iter().cloned().zip(vals).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::group::InterfaceEntry;
    use crate::presentation::{normalize, NilPresentation};

    fn n(s: &str) -> GroupWord {
        GroupWord::name(s)
    }

    fn system(rank: usize, vars: &[&str], eqs: Vec<(GroupWord, GroupWord)>) -> GroupSystem {
        GroupSystem {
            rank,
            variables: vars.iter().map(|s| s.to_string()).collect(),
            constants: [("a", "a1"), ("b", "a2"), ("c", "[a1,a2]")]
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            equations: eqs,
            interface: Vec::new(),
        }
    }

    /// Plain enumeration of the whole box, the reference for the pruned
    /// search.
    fn brute_force(sys: &GroupSystem, bound: i64) -> Vec<Vec<SmallMalcev>> {
        let amb = Ambient::free(sys.rank);
        let elems = enumerate_box(sys.rank, bound, 1 << 20).unwrap();
        let k = sys.variables.len();
        let mut idx = vec![0usize; k];
        let mut out = Vec::new();
        'outer: loop {
            let assignment: BTreeMap<String, crate::MalcevElement> = sys
                .variables
                .iter()
                .zip(&idx)
                .map(|(v, &i)| (v.clone(), elems[i].cast().unwrap()))
                .collect();
            if sys.is_solution(&assignment, &amb).unwrap() {
                out.push(idx.iter().map(|&i| elems[i].clone()).collect());
            }
            for d in (0..k).rev() {
                idx[d] += 1;
                if idx[d] < elems.len() {
                    continue 'outer;
                }
                idx[d] = 0;
            }
            break;
        }
        out.sort_by_key(|s: &Vec<SmallMalcev>| s.iter().map(Malcev::coordinates).collect::<Vec<_>>());
        out
    }

    #[test]
    fn canonical_commutator() {
        let s = system(2, &["x"], vec![(n("x"), GroupWord::comm(n("a1"), n("a2")))]);
        let sols = bounded_solve_group(&s, &Ambient::free(2), 2).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0]["x"], Malcev::basic_commutator(2, 0, 1));
    }

    #[test]
    fn centralizer_of_a1() {
        let s = system(2, &["x"], vec![(GroupWord::comm(n("x"), n("a1")), GroupWord::one())]);
        let sols = bounded_solve_group(&s, &Ambient::free(2), 1).unwrap();
        assert_eq!(sols.len(), 9);
        assert!(sols.iter().all(|m| m["x"].alpha()[1] == 0));
        assert_eq!(
            sols.iter().map(|m| vec![m["x"].clone()]).collect::<Vec<_>>(),
            brute_force(&s, 1)
        );
    }

    #[test]
    fn no_square_root_of_a1() {
        let s = system(2, &["x"], vec![(GroupWord::atom("x", 2), n("a1"))]);
        assert!(bounded_solve_group(&s, &Ambient::free(2), 2).unwrap().is_empty());
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        let s = system(
            2,
            &["x", "y"],
            vec![
                (n("x").concat(&n("y")), n("c")),
                (GroupWord::comm(n("x"), n("b")), GroupWord::one()),
            ],
        );
        let amb = Ambient::free(2);
        let solver = GroupSolver::new(&s, &amb, SolveOptions::with_bound(1)).unwrap();
        let got = solver
            .solve(&s.variables, &BTreeMap::new())
            .unwrap();
        assert_eq!(got, brute_force(&s, 1));
        assert!(!got.is_empty());
    }

    #[test]
    fn hidden_components_match_brute_force_projection() {
        // The domain gadget: x is in {c^t} via a hidden y.
        let mut s = system(
            2,
            &["x", "y"],
            vec![
                (n("x"), GroupWord::comm(n("a"), n("y"))),
                (GroupWord::comm(n("y"), n("b")), GroupWord::one()),
            ],
        );
        s.interface = vec![InterfaceEntry {
            term: "t".into(),
            vars: vec!["x".into()],
        }];
        let got = bounded_solve_group(&s, &Ambient::free(2), 1).unwrap();
        let mut expect: Vec<SmallMalcev> = brute_force(&s, 1).into_iter().map(|v| v[0].clone()).collect();
        expect.dedup();
        assert_eq!(got.iter().map(|m| m["x"].clone()).collect::<Vec<_>>(), expect);
        assert_eq!(got.len(), 3);
        assert!(got.iter().all(|m| m["x"].alpha().iter().all(|&a| a == 0)));
    }

    #[test]
    fn fixed_values_and_witnesses() {
        let s = system(
            2,
            &["x", "y"],
            vec![
                (n("x"), GroupWord::comm(n("a"), n("y"))),
                (GroupWord::comm(n("y"), n("b")), GroupWord::one()),
            ],
        );
        let amb = Ambient::free(2);
        let solver = GroupSolver::new(&s, &amb, SolveOptions::with_bound(3)).unwrap();
        let c3: BTreeMap<String, SmallMalcev> =
            [("x".to_string(), Malcev::basic_commutator(2, 0, 1).pow(&3))].into();
        let w = solver.find_witness(&c3).unwrap().unwrap();
        let exact: BTreeMap<String, crate::MalcevElement> =
            w.iter().map(|(k, v)| (k.clone(), v.cast().unwrap())).collect();
        assert!(s.is_solution(&exact, &amb).unwrap());
        let a1: BTreeMap<String, SmallMalcev> = [("x".to_string(), Malcev::generator(2, 0))].into();
        assert!(!solver.exists(&a1).unwrap());
        assert!(solver.find_witness(&a1).unwrap().is_none());
    }

    #[test]
    fn quotient_ambient() {
        let np = normalize(&NilPresentation::from_texts(2, &["a1^2"]).unwrap());
        let amb = Ambient::quotient(np).unwrap();
        // x = a1 has solutions a1·(a1^2)^k·[a1,a2]^{2j} in the box.
        let s = system(2, &["x"], vec![(n("x"), n("a1"))]);
        let sols = bounded_solve_group(&s, &amb, 1).unwrap();
        let alphas: HashSet<Vec<i64>> = sols.iter().map(|m| m["x"].alpha().to_vec()).collect();
        assert_eq!(alphas, [vec![-1, 0], vec![1, 0]].into_iter().collect());
        let deficient = normalize(&NilPresentation::from_texts(2, &["a1 a2", "a1^2 a2^2"]).unwrap());
        assert!(matches!(Ambient::quotient(deficient), Err(Error::Inconclusive(_))));
    }

    #[test]
    fn limits() {
        let s = system(2, &["x", "y", "z"], vec![]);
        let amb = Ambient::free(2);
        let solver = GroupSolver::new(
            &s,
            &amb,
            SolveOptions {
                bound: 2,
                node_limit: 1000,
                box_limit: 1000,
            },
        )
        .unwrap();
        assert!(matches!(
            solver.solve(&s.variables, &BTreeMap::new()),
            Err(Error::SearchLimit(_))
        ));
        assert!(matches!(
            GroupSolver::new(&s, &Ambient::free(3), SolveOptions::with_bound(5)),
            Err(Error::DimensionMismatch { .. })
        ));
        let s3 = system(3, &["x"], vec![]);
        assert!(matches!(
            GroupSolver::new(&s3, &Ambient::free(3), SolveOptions::with_bound(50)),
            Err(Error::ResourceLimit(_))
        ));
    }
}
