//! Quotients `G = N_{s,m} / ⟨⟨R⟩⟩` and their class-2 images.
//!
//! All computations happen in `G/G_3 = N_{2,m}/⟨⟨R⟩⟩`. After Nielsen
//! normalization the first `k = rank M(R)` relators read `a_i^{α_i} c_i`
//! with `α_i ≠ 0` and `c_i` central, and the remaining ones are central.
//! Conjugation in a 2-step group is `w^{-1} g w = g [g, w]` and
//! `[g_i, w]` is a product of powers of `[g_i, a_k] = [a_i, a_k]^{α_i}`, so
//!
//! ```text
//! ⟨⟨R⟩⟩ = { Π g_i^{λ_i} · z : z ∈ L }
//! ```
//!
//! where `L ⊂ N'` is the lattice spanned by `α_i [a_i, a_k]` (`k ≠ i`) and
//! the central relators. Membership of `h` is then: solve `λ_i α_i = h.α_i`,
//! check the other generator exponents vanish, and test the residual
//! commutator part against `L`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json;
use crate::nilpotent2::{pair_count, pair_index, Malcev};
use crate::words::{nielsen_normalize, parse_word, NielsenLog, RelatorSet, Word};
use crate::zmatrix::{integer_kernel, Lattice, Matrix, Smith};
use crate::MalcevElement;

/// `N_{s,m}/⟨⟨R⟩⟩`; the class `s` is carried for reporting only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilPresentation {
    pub rank: usize,
    pub class: usize,
    pub relators: RelatorSet,
}

impl NilPresentation {
    pub fn new(rank: usize, class: usize, relators: RelatorSet) -> Result<Self> {
        if class < 2 {
            return Err(Error::Precondition(format!(
                "nilpotency class must be at least 2, got {class}"
            )));
        }
        if relators.rank() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: relators.rank(),
            });
        }
        Ok(NilPresentation {
            rank,
            class,
            relators,
        })
    }

    /// Class-2 presentation from relator texts.
    pub fn from_texts(rank: usize, relators: &[&str]) -> Result<Self> {
        Self::new(rank, 2, RelatorSet::parse(relators, rank)?)
    }

    /// Reads the presentation file format: a header line `m s`, then one
    /// relator per nonempty line. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut relators = Vec::new();
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let start = offset;
            offset += line.len();
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            match header {
                None => {
                    let nums: Vec<&str> = content.split_whitespace().collect();
                    let parse = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|_| Error::parse(start, format!("bad header field '{s}'")))
                    };
                    if nums.len() != 2 {
                        return Err(Error::parse(start, "header must be 'm s'"));
                    }
                    header = Some((parse(nums[0])?, parse(nums[1])?));
                }
                Some((m, _)) => {
                    let lead = line.len() - line.trim_start().len();
                    let w = parse_word(content, m).map_err(|e| match e {
                        Error::Parse { pos, msg } => Error::Parse {
                            pos: start + lead + pos,
                            msg,
                        },
                        other => other,
                    })?;
                    relators.push(w);
                }
            }
        }
        let (m, s) = header.ok_or_else(|| Error::parse(0, "missing header line"))?;
        Self::new(m, s, RelatorSet::new(relators, m)?)
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }
}

/// Nielsen-normalized class-2 image with the data that decides its word
/// problem.
#[derive(Clone, Debug)]
pub struct NormalizedPresentation {
    rank: usize,
    class: usize,
    relator_count: usize,
    /// Exponents `α_i`, one per nonzero invariant factor.
    alphas: Vec<BigInt>,
    /// Images in `N_{2,m}` of the rewritten relators, all `r` of them.
    relator_images: Vec<MalcevElement>,
    /// Central parts `c_i` of the first `alphas.len()` relators.
    c_parts: Vec<MalcevElement>,
    extra_commutator_relators: Vec<MalcevElement>,
    words: RelatorSet,
    nielsen: NielsenLog,
    snf: Smith<BigInt>,
    closure: Lattice<BigInt>,
    /// Images of the original generators in the normalized basis.
    old_generator_images: Vec<MalcevElement>,
    rank_full: bool,
}

/// Normalizes `p`: Nielsen moves put `M(R)` into Smith form, relators are
/// evaluated in `N_{2,m}`, split as `a_i^{α_i} c_i`, and the normal-closure
/// lattice is assembled.
pub fn normalize(p: &NilPresentation) -> NormalizedPresentation {
    let m = p.rank;
    let r = p.relator_count();
    let (words, nielsen, snf) = nielsen_normalize(&p.relators);
    let relator_images: Vec<MalcevElement> = words.relators().iter().map(Malcev::from_word).collect();
    let k = snf.rank;
    let alphas: Vec<BigInt> = snf.invariant_factors[..k].to_vec();
    let mut c_parts = Vec::with_capacity(k);
    let mut closure_gens: Vec<Vec<BigInt>> = Vec::new();
    for (i, g) in relator_images.iter().take(k).enumerate() {
        debug_assert_eq!(g.alpha()[i], alphas[i]);
        debug_assert!(g.alpha().iter().enumerate().all(|(j, a)| j == i || a.is_zero()));
        c_parts.push(g.gamma_part());
        for other in 0..m {
            if other == i {
                continue;
            }
            let gi = Malcev::generator(m, i).pow(&alphas[i]);
            let c = gi.commutator(&Malcev::generator(m, other)).expect("same rank");
            closure_gens.push(c.gamma().to_vec());
        }
    }
    let extra_commutator_relators: Vec<MalcevElement> = relator_images[k..].to_vec();
    for g in &extra_commutator_relators {
        debug_assert!(g.is_central());
        if !g.is_identity() {
            closure_gens.push(g.gamma().to_vec());
        }
    }
    let closure = Lattice::new(closure_gens, pair_count(m)).expect("commutator coordinates");
    let old_generator_images = nielsen.old_to_new.iter().map(Malcev::from_word).collect();
    NormalizedPresentation {
        rank: m,
        class: p.class,
        relator_count: r,
        alphas,
        relator_images,
        c_parts,
        extra_commutator_relators,
        words,
        nielsen,
        rank_full: k == r.min(m),
        snf,
        closure,
        old_generator_images,
    }
}

impl NormalizedPresentation {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn relator_count(&self) -> usize {
        self.relator_count
    }

    pub fn alphas(&self) -> &[BigInt] {
        &self.alphas
    }

    pub fn c_parts(&self) -> &[MalcevElement] {
        &self.c_parts
    }

    pub fn relator_images(&self) -> &[MalcevElement] {
        &self.relator_images
    }

    pub fn extra_commutator_relators(&self) -> &[MalcevElement] {
        &self.extra_commutator_relators
    }

    /// Relators rewritten in the normalized generators.
    pub fn words(&self) -> &RelatorSet {
        &self.words
    }

    pub fn nielsen(&self) -> &NielsenLog {
        &self.nielsen
    }

    pub fn snf(&self) -> &Smith<BigInt> {
        &self.snf
    }

    pub fn closure_lattice(&self) -> &Lattice<BigInt> {
        &self.closure
    }

    pub fn rank_full(&self) -> bool {
        self.rank_full
    }

    /// Re-expresses an element given in the original generators in the
    /// normalized generators. This is an automorphism of `N_{2,m}`.
    pub fn to_normalized(&self, h: &MalcevElement) -> Result<MalcevElement> {
        self.check_rank(h)?;
        let m = self.rank;
        let imgs = &self.old_generator_images;
        let mut out = Malcev::identity(m);
        for (i, a) in h.alpha().iter().enumerate() {
            out = out.multiply(&imgs[i].pow(a))?;
        }
        for i in 0..m {
            for j in i + 1..m {
                let g = &h.gamma()[pair_index(m, i, j)];
                if g.is_zero() {
                    continue;
                }
                out = out.multiply(&imgs[i].commutator(&imgs[j])?.pow(g))?;
            }
        }
        Ok(out)
    }

    /// Evaluates a word in the original generators, in normalized
    /// coordinates.
    pub fn eval_original_word(&self, w: &Word) -> Result<MalcevElement> {
        if w.rank() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: w.rank(),
            });
        }
        Ok(Malcev::from_word(&self.nielsen.to_new(w)))
    }

    fn check_rank(&self, h: &MalcevElement) -> Result<()> {
        if h.rank() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: h.rank(),
            });
        }
        Ok(())
    }

    fn require_full_rank(&self) -> Result<()> {
        if self.rank_full {
            Ok(())
        } else {
            Err(Error::Inconclusive(format!(
                "rank M(R) = {} < min(r, m) = {}; the word-problem procedure needs full rank",
                self.snf.rank,
                self.relator_count.min(self.rank)
            )))
        }
    }

    /// Integer `λ` with `h.α = Σ λ_i α_i e_i`, or `None`.
    fn solve_lambdas(&self, h: &MalcevElement) -> Option<Vec<BigInt>> {
        let k = self.alphas.len();
        if h.alpha()[k..].iter().any(|a| !a.is_zero()) {
            return None;
        }
        self.alphas
            .iter()
            .zip(h.alpha())
            .map(|(alpha, a)| {
                let (q, rem) = a.div_rem(alpha);
                rem.is_zero().then_some(q)
            })
            .collect()
    }

    /// `h · Π g_i^{-λ_i}`, a central element.
    fn residual(&self, h: &MalcevElement, lambdas: &[BigInt]) -> MalcevElement {
        let mut res = h.clone();
        for (g, l) in self.relator_images.iter().zip(lambdas) {
            res = res.multiply(&g.pow(&-l.clone())).expect("same rank");
        }
        debug_assert!(res.is_central());
        res
    }

    /// Word problem in `N_{2,m}/⟨⟨R⟩⟩`, `h` in normalized coordinates.
    pub fn is_trivial_normalized(&self, h: &MalcevElement) -> Result<bool> {
        self.require_full_rank()?;
        self.check_rank(h)?;
        let Some(lambdas) = self.solve_lambdas(h) else {
            return Ok(false);
        };
        let res = self.residual(h, &lambdas);
        self.closure.contains(res.gamma())
    }

    /// Word problem, `h` in the original generators.
    #[allow(non_snake_case)]
    pub fn is_trivial_in_G(&self, h: &MalcevElement) -> Result<bool> {
        self.require_full_rank()?;
        self.is_trivial_normalized(&self.to_normalized(h)?)
    }

    /// Whether some nonzero power of `h` (normalized coordinates) is trivial.
    pub fn is_trivial_mod_torsion_normalized(&self, h: &MalcevElement) -> Result<bool> {
        self.require_full_rank()?;
        self.check_rank(h)?;
        let k = self.alphas.len();
        if h.alpha()[k..].iter().any(|a| !a.is_zero()) {
            return Ok(false);
        }
        let l = self.alphas.iter().fold(BigInt::one(), |acc, a| acc.lcm(a));
        let hl = h.pow(&l);
        let lambdas = self
            .solve_lambdas(&hl)
            .expect("lcm power has divisible generator exponents");
        let res = self.residual(&hl, &lambdas);
        self.closure.contains_rational(res.gamma())
    }

    pub fn is_trivial_mod_torsion(&self, h: &MalcevElement) -> Result<bool> {
        self.require_full_rank()?;
        self.is_trivial_mod_torsion_normalized(&self.to_normalized(h)?)
    }

    /// Centrality in `G/Is(G_3)`, normalized coordinates.
    pub fn is_central_mod_torsion_normalized(&self, h: &MalcevElement) -> Result<bool> {
        self.require_full_rank()?;
        self.check_rank(h)?;
        for k in 0..self.rank {
            let c = h.commutator(&Malcev::generator(self.rank, k))?;
            if !self.is_trivial_mod_torsion_normalized(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_central_mod_torsion(&self, h: &MalcevElement) -> Result<bool> {
        self.require_full_rank()?;
        self.is_central_mod_torsion_normalized(&self.to_normalized(h)?)
    }

    /// Integer matrix `K_x` whose kernel is `{y : [x, y] ∈ Is(⟨⟨R⟩⟩)}` on
    /// generator exponents: the commutator form `γ_{ij} = x_i y_j − x_j y_i`
    /// followed by the annihilator of the closure lattice.
    fn commuting_constraints(&self, x: &[BigInt], annihilator: &[Vec<BigInt>]) -> Matrix<BigInt> {
        let m = self.rank;
        let p = pair_count(m);
        let mut form = Matrix::<BigInt>::zeros(p, m);
        for i in 0..m {
            for j in i + 1..m {
                let row = pair_index(m, i, j);
                form.set(row, j, x[i].clone());
                form.set(row, i, -x[j].clone());
            }
        }
        let q = Matrix::from_rows(annihilator.to_vec(), p).expect("annihilator width");
        q.mul(&form).expect("shapes agree")
    }

    /// ℤ-basis of the generator exponents of central elements of
    /// `G_0 = G/Is(G_3)`.
    pub fn center_alpha_lattice(&self) -> Result<Vec<Vec<BigInt>>> {
        self.require_full_rank()?;
        let m = self.rank;
        let ann = self.closure.annihilator();
        let mut stacked = Matrix::<BigInt>::zeros(0, m);
        for k in 0..m {
            let mut e = vec![BigInt::zero(); m];
            e[k] = BigInt::one();
            stacked = stacked
                .stack(&self.commuting_constraints(&e, &ann))
                .expect("same width");
        }
        Ok(integer_kernel(&stacked))
    }

    /// Whether `g` (normalized coordinates) is c-small in `G_0`: its
    /// centralizer is `{g^t z : z ∈ Z(G_0)}`.
    ///
    /// Both sides contain all of `N'` and are determined by their generator
    /// exponents, so the test compares the saturated lattice
    /// `{y : [g, y] ∈ Is(⟨⟨R⟩⟩)}` with `ℤ g.α + Z_α`.
    pub fn is_c_small_normalized(&self, g: &MalcevElement) -> Result<bool> {
        self.require_full_rank()?;
        self.check_rank(g)?;
        if self.relator_count + 2 > self.rank {
            return Err(Error::Inconclusive(format!(
                "c-smallness is decided for r <= m - 2 only (r = {}, m = {})",
                self.relator_count, self.rank
            )));
        }
        let m = self.rank;
        let ann = self.closure.annihilator();
        let centralizer = integer_kernel(&self.commuting_constraints(g.alpha(), &ann));
        let mut gens = self.center_alpha_lattice()?;
        gens.push(g.alpha().to_vec());
        let target = Lattice::new(gens, m)?;
        for v in &centralizer {
            if !target.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_c_small(&self, g: &MalcevElement) -> Result<bool> {
        self.require_full_rank()?;
        self.is_c_small_normalized(&self.to_normalized(g)?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "class": self.class,
            "relator_count": self.relator_count,
            "rank_full": self.rank_full,
            "alphas": json::ints(&self.alphas),
            "relators": self.words.relators().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "relator_images": self.relator_images.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "c_parts": self.c_parts.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "extra_commutator_relators": self
                .extra_commutator_relators
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>(),
            "closure_lattice": self.closure.hnf().iter().map(|v| json::ints(v)).collect::<Vec<_>>(),
            "snf": self.snf.to_json(),
            "nielsen": self.nielsen.to_json(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    UndecidableRegular,
    VirtuallyAbelian,
    Finite,
    FiniteAbelian,
    Inconclusive,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::UndecidableRegular => "UNDECIDABLE_REGULAR",
            Regime::VirtuallyAbelian => "VIRTUALLY_ABELIAN",
            Regime::Finite => "FINITE",
            Regime::FiniteAbelian => "FINITE_ABELIAN",
            Regime::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decidability {
    Undecidable,
    Decidable,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub corank: Option<usize>,
    pub diophantine: Decidability,
    pub notes: Vec<String>,
    pub rank: usize,
    #[serde(serialize_with = "ser_ints")]
    pub invariant_factors: Vec<BigInt>,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    json::ints(v).serialize(s)
}

/// Regime of a presentation with `r` relators on `m` generators, given
/// whether `M(R)` has full rank.
pub fn classify_params(r: usize, m: usize, rank_full: bool) -> (Regime, Option<usize>, Decidability) {
    if !rank_full {
        return (Regime::Inconclusive, None, Decidability::Unknown);
    }
    if r + 2 <= m {
        (Regime::UndecidableRegular, Some(m - r), Decidability::Undecidable)
    } else if r + 1 == m {
        (Regime::VirtuallyAbelian, None, Decidability::Decidable)
    } else if r == m {
        (Regime::Finite, None, Decidability::Decidable)
    } else {
        (Regime::FiniteAbelian, None, Decidability::Decidable)
    }
}

pub fn classify(np: &NormalizedPresentation) -> RegimeReport {
    let (r, m) = (np.relator_count, np.rank);
    let (regime, corank, diophantine) = classify_params(r, m, np.rank_full);
    let mut notes = vec![format!(
        "computations use the class-2 image G/G_3 (input class {})",
        np.class
    )];
    notes.push(match regime {
        Regime::UndecidableRegular => format!(
            "r <= m-2 with M(R) of full rank: G is regular, virtually free nilpotent of rank {}, \
             and the ring of integers is e-definable in G/Is(G_3), so systems of equations over G \
             are undecidable",
            m - r
        ),
        Regime::VirtuallyAbelian => {
            "r = m-1 with M(R) of full rank: G' is finite and G is virtually abelian".to_string()
        }
        Regime::Finite => "r = m with M(R) of full rank: G is finite".to_string(),
        Regime::FiniteAbelian => "r >= m+1 with M(R) of full rank: G is finite and abelian".to_string(),
        Regime::Inconclusive => format!(
            "M(R) has rank {} < min(r, m) = {}; full rank is generic but not guaranteed, \
             no verdict is given",
            np.snf.rank,
            r.min(m)
        ),
    });
    if r > m && np.rank_full {
        notes.push(
            "relators beyond the m-th lie in N' and are folded into the normal-closure lattice"
                .to_string(),
        );
    }
    RegimeReport {
        regime,
        corank,
        diophantine,
        notes,
        rank: np.snf.rank,
        invariant_factors: np.snf.invariant_factors.clone(),
    }
}
