//! Words over `a_1^{±1}, …, a_m^{±1}`.
//!
//! Parsing and printing, free reduction, exponent-sum matrices, uniform
//! sampling, and Nielsen moves mirrored from a Smith normal form
//! computation.

use std::fmt;

use num_bigint::BigInt;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::IntScalar;
use crate::zmatrix::{smith_normal_form, ElementaryOp, Matrix, Smith};

/// A signed generator. `generator` is zero-based; text uses `a1 … am`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A word in the free group of rank `rank`; not necessarily reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    rank: usize,
}

impl Word {
    pub fn empty(rank: usize) -> Self {
        Word {
            letters: Vec::new(),
            rank,
        }
    }

    pub fn new(letters: Vec<Letter>, rank: usize) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| l.generator >= rank) {
            return Err(Error::GeneratorOutOfRange {
                index: l.generator + 1,
                rank,
            });
        }
        Ok(Word { letters, rank })
    }

    /// The single-letter word `a_{generator+1}`.
    pub fn generator(generator: usize, rank: usize) -> Self {
        assert!(generator < rank, "generator index out of range");
        Word {
            letters: vec![Letter::new(generator, false)],
            rank,
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        debug_assert_eq!(self.rank, other.rank);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            letters,
            rank: self.rank,
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
            rank: self.rank,
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word {
            letters,
            rank: self.rank,
        }
    }

    /// `u^{-1} v^{-1} u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }

    /// `w^{-1} self w`.
    pub fn conjugate(&self, w: &Word) -> Word {
        w.inverse().concat(self).concat(w)
    }

    /// Replaces each generator `a_j` by `images[j]` (inverse letters by the
    /// inverse image). The result lives in the images' alphabet.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let rank = images.first().map_or(self.rank, |w| w.rank);
        let mut letters = Vec::new();
        for l in &self.letters {
            let img = &images[l.generator];
            if l.inverse {
                letters.extend(img.letters.iter().rev().map(|x| x.inv()));
            } else {
                letters.extend_from_slice(&img.letters);
            }
        }
        Word { letters, rank }
    }

    /// Exponent sum of every generator.
    pub fn exponent_sums<T: IntScalar>(&self) -> Vec<T> {
        let mut sums = vec![0i64; self.rank];
        for l in &self.letters {
            sums[l.generator] += l.sign();
        }
        sums.into_iter().map(T::of).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(self))
    }
}

/// Cancels adjacent `x x^{-1}` pairs until none remain.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word {
        letters: out,
        rank: w.rank,
    }
}

pub fn is_freely_reduced(w: &Word) -> bool {
    w.letters.windows(2).all(|p| p[0] != p[1].inv())
}

/// Renders runs of equal letters as powers: `a1^2 a2^-1`. The empty word
/// renders as the empty string.
pub fn format_word(w: &Word) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    let ls = &w.letters;
    while i < ls.len() {
        let mut j = i;
        while j < ls.len() && ls[j] == ls[i] {
            j += 1;
        }
        let run = (j - i) as i64 * ls[i].sign();
        if run == 1 {
            parts.push(format!("a{}", ls[i].generator + 1));
        } else {
            parts.push(format!("a{}^{}", ls[i].generator + 1, run));
        }
        i = j;
    }
    parts.join(" ")
}

/// Parses the word grammar: `a<k>` tokens with optional `^<int>`,
/// commutators `[u,v]` (also with an optional exponent), `1` for the
/// identity, separated by optional whitespace.
pub fn parse_word(text: &str, rank: usize) -> Result<Word> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        rank,
    };
    let w = p.word(false)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(p.pos, format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn word(&mut self, nested: bool) -> Result<Word> {
        let mut letters = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b',') | Some(b']') if nested => break,
                Some(b'a') => {
                    let start = self.pos;
                    self.pos += 1;
                    let k = self.unsigned()?;
                    if k == 0 || k > self.rank {
                        if k == 0 {
                            return Err(Error::parse(start, "generator indices start at 1"));
                        }
                        return Err(Error::GeneratorOutOfRange {
                            index: k,
                            rank: self.rank,
                        });
                    }
                    let e = self.exponent()?;
                    let w = Word {
                        letters: vec![Letter::new(k - 1, false)],
                        rank: self.rank,
                    };
                    letters.extend(w.pow(e).letters);
                }
                Some(b'1') => {
                    self.pos += 1;
                    if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(Error::parse(self.pos - 1, "expected generator"));
                    }
                }
                Some(b'[') => {
                    self.pos += 1;
                    let u = self.word(true)?;
                    self.expect(b',')?;
                    let v = self.word(true)?;
                    self.expect(b']')?;
                    let e = self.exponent()?;
                    letters.extend(Word::commutator(&u, &v).pow(e).letters);
                }
                Some(c) => {
                    return Err(Error::parse(self.pos, format!("unexpected '{}'", c as char)));
                }
            }
        }
        Ok(Word {
            letters,
            rank: self.rank,
        })
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn unsigned(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected digits"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::parse(start, "number too large"))
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.pos;
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let k = self.unsigned()? as i64;
        if k == 0 {
            return Err(Error::parse(start, "exponent must be nonzero"));
        }
        Ok(if neg { -k } else { k })
    }
}

/// Relators sharing one alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorSet {
    relators: Vec<Word>,
    rank: usize,
}

impl RelatorSet {
    pub fn new(relators: Vec<Word>, rank: usize) -> Result<Self> {
        if let Some(w) = relators.iter().find(|w| w.rank != rank) {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: w.rank,
            });
        }
        Ok(RelatorSet { relators, rank })
    }

    pub fn parse(texts: &[&str], rank: usize) -> Result<Self> {
        let relators = texts
            .iter()
            .map(|t| parse_word(t, rank))
            .collect::<Result<Vec<_>>>()?;
        Ok(RelatorSet { relators, rank })
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.relators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relators.is_empty()
    }
}

/// The `r × m` matrix of generator exponent sums, one row per relator.
pub fn exponent_sum_matrix<T: IntScalar>(rels: &RelatorSet) -> Matrix<T> {
    let rows = rels.relators.iter().map(|w| w.exponent_sums()).collect();
    Matrix::from_rows(rows, rels.rank).expect("uniform rank")
}

/// Word of `len` letters, each uniform over the `2m` signed generators.
pub fn random_word<R: Rng + ?Sized>(len: usize, rank: usize, rng: &mut R) -> Word {
    assert!(rank >= 1, "alphabet must be nonempty");
    let letters = (0..len)
        .map(|_| {
            let x = rng.gen_range(0..2 * rank);
            Letter::new(x / 2, x % 2 == 1)
        })
        .collect();
    Word { letters, rank }
}

/// A Nielsen move on relators or generators.
///
/// `MultiplyGenerator { src, dst, k }` introduces the generator
/// `a_src' = a_src · a_dst^{-k}`, i.e. every `a_src` is rewritten as
/// `a_src' · a_dst^k`; on the exponent-sum matrix this adds `k` times
/// column `src` to column `dst`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NielsenMove {
    /// `g_dst ← g_src^k · g_dst`.
    MultiplyRelator { src: usize, dst: usize, k: i64 },
    MultiplyGenerator { src: usize, dst: usize, k: i64 },
    SwapRelators(usize, usize),
    SwapGenerators(usize, usize),
    InvertRelator(usize),
    InvertGenerator(usize),
}

impl NielsenMove {
    /// The move realizing an elementary matrix operation.
    pub fn mirror<T: IntScalar>(op: &ElementaryOp<T>) -> Self {
        let small = |k: &T| k.to_i64().expect("Nielsen multiplier exceeds i64");
        match op {
            ElementaryOp::AddRow { src, dst, k } => NielsenMove::MultiplyRelator {
                src: *src,
                dst: *dst,
                k: small(k),
            },
            ElementaryOp::AddCol { src, dst, k } => NielsenMove::MultiplyGenerator {
                src: *src,
                dst: *dst,
                k: small(k),
            },
            ElementaryOp::SwapRows(a, b) => NielsenMove::SwapRelators(*a, *b),
            ElementaryOp::SwapCols(a, b) => NielsenMove::SwapGenerators(*a, *b),
            ElementaryOp::NegateRow(i) => NielsenMove::InvertRelator(*i),
            ElementaryOp::NegateCol(j) => NielsenMove::InvertGenerator(*j),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            NielsenMove::MultiplyRelator { src, dst, k } => {
                json!({"move": "multiply_relator", "src": src + 1, "dst": dst + 1, "k": k})
            }
            NielsenMove::MultiplyGenerator { src, dst, k } => {
                json!({"move": "multiply_generator", "src": src + 1, "dst": dst + 1, "k": k})
            }
            NielsenMove::SwapRelators(a, b) => {
                json!({"move": "swap_relators", "a": a + 1, "b": b + 1})
            }
            NielsenMove::SwapGenerators(a, b) => {
                json!({"move": "swap_generators", "a": a + 1, "b": b + 1})
            }
            NielsenMove::InvertRelator(i) => json!({"move": "invert_relator", "index": i + 1}),
            NielsenMove::InvertGenerator(j) => {
                json!({"move": "invert_generator", "index": j + 1})
            }
        }
    }
}

/// Moves applied, plus the dictionary between old and new generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NielsenLog {
    pub moves: Vec<NielsenMove>,
    /// `old_to_new[j]`: old generator `a_j` as a word in the new generators.
    pub old_to_new: Vec<Word>,
    /// `new_to_old[j]`: new generator `a_j'` as a word in the old generators.
    pub new_to_old: Vec<Word>,
}

impl NielsenLog {
    pub fn identity(rank: usize) -> Self {
        let gens: Vec<Word> = (0..rank).map(|j| Word::generator(j, rank)).collect();
        NielsenLog {
            moves: Vec::new(),
            old_to_new: gens.clone(),
            new_to_old: gens,
        }
    }

    /// Rewrites a word in the old generators into the new ones.
    pub fn to_new(&self, w: &Word) -> Word {
        free_reduce(&w.substitute(&self.old_to_new))
    }

    /// Rewrites a word in the new generators into the old ones.
    pub fn to_old(&self, w: &Word) -> Word {
        free_reduce(&w.substitute(&self.new_to_old))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "moves": self.moves.iter().map(|m| m.to_json()).collect::<Vec<_>>(),
            "new_generators": self.new_to_old.iter().map(format_word).collect::<Vec<_>>(),
            "old_generators": self.old_to_new.iter().map(format_word).collect::<Vec<_>>(),
        })
    }
}

/// Applies moves to a relator set, recording them in `log`. Relators are
/// kept freely reduced.
pub fn apply_moves(rels: &mut Vec<Word>, log: &mut NielsenLog, moves: &[NielsenMove]) {
    let rank = log.old_to_new.len();
    for mv in moves {
        match *mv {
            NielsenMove::MultiplyRelator { src, dst, k } => {
                assert_ne!(src, dst, "Nielsen move needs distinct relators");
                rels[dst] = free_reduce(&rels[src].pow(k).concat(&rels[dst]));
            }
            NielsenMove::MultiplyGenerator { src, dst, k } => {
                assert_ne!(src, dst, "Nielsen move needs distinct generators");
                let mut images: Vec<Word> = (0..rank).map(|j| Word::generator(j, rank)).collect();
                images[src] = Word::generator(src, rank).concat(&Word::generator(dst, rank).pow(k));
                rewrite_all(rels, log, &images);
                let new_src = log.new_to_old[src].concat(&log.new_to_old[dst].pow(-k));
                log.new_to_old[src] = free_reduce(&new_src);
            }
            NielsenMove::SwapRelators(a, b) => rels.swap(a, b),
            NielsenMove::SwapGenerators(a, b) => {
                let mut images: Vec<Word> = (0..rank).map(|j| Word::generator(j, rank)).collect();
                images.swap(a, b);
                rewrite_all(rels, log, &images);
                log.new_to_old.swap(a, b);
            }
            NielsenMove::InvertRelator(i) => rels[i] = rels[i].inverse(),
            NielsenMove::InvertGenerator(j) => {
                let mut images: Vec<Word> = (0..rank).map(|j| Word::generator(j, rank)).collect();
                images[j] = images[j].inverse();
                rewrite_all(rels, log, &images);
                log.new_to_old[j] = log.new_to_old[j].inverse();
            }
        }
        log.moves.push(mv.clone());
    }
}

fn rewrite_all(rels: &mut [Word], log: &mut NielsenLog, images: &[Word]) {
    for w in rels.iter_mut() {
        *w = free_reduce(&w.substitute(images));
    }
    for w in log.old_to_new.iter_mut() {
        *w = free_reduce(&w.substitute(images));
    }
}

/// Nielsen-transforms relators and generators so that the exponent-sum
/// matrix becomes its Smith normal form, mirroring every elementary
/// operation of the reduction.
pub fn nielsen_normalize(rels: &RelatorSet) -> (RelatorSet, NielsenLog, Smith<BigInt>) {
    let m: Matrix<BigInt> = exponent_sum_matrix(rels);
    let snf = smith_normal_form(&m);
    let moves: Vec<NielsenMove> = snf.ops.iter().map(NielsenMove::mirror).collect();
    let mut words: Vec<Word> = rels.relators.iter().map(free_reduce).collect();
    let mut log = NielsenLog::identity(rels.rank);
    apply_moves(&mut words, &mut log, &moves);
    let out = RelatorSet {
        relators: words,
        rank: rels.rank,
    };
    (out, log, snf)
}
