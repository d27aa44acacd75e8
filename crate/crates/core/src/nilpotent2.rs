//! Exact arithmetic in the free 2-step nilpotent group `N_{2,m}`.
//!
//! Every element has unique Malcev coordinates
//!
//! ```text
//! g = a_1^{α_1} ⋯ a_m^{α_m} · Π_{i<j} [a_i, a_j]^{γ_{ij}}
//! ```
//!
//! with `[g, h] = g^{-1} h^{-1} g h`. Commutators are central, so a product
//! only needs the generator parts collected:
//! `a_j^p a_i^q = a_i^q a_j^p [a_i, a_j]^{-pq}` for `i < j`.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json;
use crate::scalar::IntScalar;
use crate::words::Word;

/// Number of basic commutators `[a_i, a_j]`, `i < j`.
pub fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Row-major position of the pair `(i, j)`, zero-based, `i < j`.
pub fn pair_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_of(m: usize, mut idx: usize) -> (usize, usize) {
    for i in 0..m {
        let row = m - i - 1;
        if idx < row {
            return (i, i + 1 + idx);
        }
        idx -= row;
    }
    panic!("pair index out of range")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Malcev<T> {
    alpha: Vec<T>,
    gamma: Vec<T>,
}

impl<T: IntScalar> Malcev<T> {
    pub fn identity(m: usize) -> Self {
        Malcev {
            alpha: vec![T::zero(); m],
            gamma: vec![T::zero(); pair_count(m)],
        }
    }

    pub fn new(alpha: Vec<T>, gamma: Vec<T>) -> Result<Self> {
        let m = alpha.len();
        if gamma.len() != pair_count(m) {
            return Err(Error::DimensionMismatch {
                expected: pair_count(m),
                found: gamma.len(),
            });
        }
        Ok(Malcev { alpha, gamma })
    }

    /// The basic generator `a_{i+1}`.
    pub fn generator(m: usize, i: usize) -> Self {
        let mut g = Self::identity(m);
        g.alpha[i] = T::one();
        g
    }

    /// The basic commutator `[a_{i+1}, a_{j+1}]`, `i < j`.
    pub fn basic_commutator(m: usize, i: usize, j: usize) -> Self {
        let mut g = Self::identity(m);
        g.gamma[pair_index(m, i, j)] = T::one();
        g
    }

    /// Central element with the given commutator coordinates.
    pub fn central(gamma: Vec<T>) -> Result<Self> {
        let m = rank_for_pairs(gamma.len()).ok_or_else(|| {
            Error::Precondition(format!("{} is not a triangular number", gamma.len()))
        })?;
        Ok(Malcev {
            alpha: vec![T::zero(); m],
            gamma,
        })
    }

    pub fn rank(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn gamma(&self) -> &[T] {
        &self.gamma
    }

    pub fn gamma_at(&self, i: usize, j: usize) -> &T {
        &self.gamma[pair_index(self.rank(), i, j)]
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.iter().all(|x| x.is_zero()) && self.gamma.iter().all(|x| x.is_zero())
    }

    /// Whether the element lies in the derived subgroup (equivalently the
    /// centre, in a free 2-step group).
    pub fn is_central(&self) -> bool {
        self.alpha.iter().all(|x| x.is_zero())
    }

    /// The commutator part, as an element.
    pub fn gamma_part(&self) -> Self {
        Malcev {
            alpha: vec![T::zero(); self.rank()],
            gamma: self.gamma.clone(),
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let m = self.rank();
        let alpha = self
            .alpha
            .iter()
            .zip(&other.alpha)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        let mut gamma: Vec<T> = self
            .gamma
            .iter()
            .zip(&other.gamma)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        // other's a_i^{β_i} moves left past self's a_j^{α_j}, j > i.
        for i in 0..m {
            if other.alpha[i].is_zero() {
                continue;
            }
            for j in i + 1..m {
                let k = pair_index(m, i, j);
                gamma[k] = gamma[k].clone() - self.alpha[j].clone() * other.alpha[i].clone();
            }
        }
        Ok(Malcev { alpha, gamma })
    }

    pub fn inverse(&self) -> Self {
        let m = self.rank();
        let alpha = self.alpha.iter().map(|a| -a.clone()).collect();
        let mut gamma: Vec<T> = self.gamma.iter().map(|g| -g.clone()).collect();
        for i in 0..m {
            for j in i + 1..m {
                let k = pair_index(m, i, j);
                gamma[k] = gamma[k].clone() - self.alpha[i].clone() * self.alpha[j].clone();
            }
        }
        Malcev { alpha, gamma }
    }

    /// `[self, other]`; bilinear in the generator parts.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let m = self.rank();
        let mut gamma = vec![T::zero(); pair_count(m)];
        for i in 0..m {
            for j in i + 1..m {
                gamma[pair_index(m, i, j)] = self.alpha[i].clone() * other.alpha[j].clone()
                    - self.alpha[j].clone() * other.alpha[i].clone();
            }
        }
        Ok(Malcev {
            alpha: vec![T::zero(); m],
            gamma,
        })
    }

    /// Square-and-multiply power; negative exponents invert first.
    pub fn pow(&self, k: &T) -> Self {
        let m = self.rank();
        let mut base = if k.is_negative() {
            self.inverse()
        } else {
            self.clone()
        };
        let mut e = k.abs();
        let two = T::one() + T::one();
        let mut acc = Self::identity(m);
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.multiply(&base).expect("same rank");
            }
            e = e / two.clone();
            if !e.is_zero() {
                base = base.multiply(&base).expect("same rank");
            }
        }
        acc
    }

    /// Homomorphic image of a word.
    pub fn from_word(w: &Word) -> Self {
        let m = w.rank();
        let mut acc = Self::identity(m);
        for l in w.letters() {
            let mut g = Self::identity(m);
            g.alpha[l.generator] = T::of(l.sign());
            acc = acc.multiply(&g).expect("same rank");
        }
        acc
    }

    /// A word representing this element: generator powers in order, then
    /// basic commutator powers.
    pub fn to_word(&self) -> Word {
        let m = self.rank();
        let small = |x: &T| x.to_i64().expect("coordinate too large for a word");
        let mut w = Word::empty(m);
        for (i, a) in self.alpha.iter().enumerate() {
            w = w.concat(&Word::generator(i, m).pow(small(a)));
        }
        for (k, g) in self.gamma.iter().enumerate() {
            let (i, j) = pair_of(m, k);
            let c = Word::commutator(&Word::generator(i, m), &Word::generator(j, m));
            w = w.concat(&c.pow(small(g)));
        }
        w
    }

    pub fn cast<U: IntScalar>(&self) -> Option<Malcev<U>> {
        let alpha = self.alpha.iter().map(|x| x.cast()).collect::<Option<Vec<U>>>()?;
        let gamma = self.gamma.iter().map(|x| x.cast()).collect::<Option<Vec<U>>>()?;
        Some(Malcev { alpha, gamma })
    }

    /// All coordinates, generator part first.
    pub fn coordinates(&self) -> Vec<T> {
        self.alpha.iter().chain(&self.gamma).cloned().collect()
    }

    /// Inverse of [`Malcev::coordinates`].
    pub fn from_coordinates(m: usize, coords: &[T]) -> Result<Self> {
        if coords.len() != m + pair_count(m) {
            return Err(Error::DimensionMismatch {
                expected: m + pair_count(m),
                found: coords.len(),
            });
        }
        Ok(Malcev {
            alpha: coords[..m].to_vec(),
            gamma: coords[m..].to_vec(),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "alpha": json::ints(&self.alpha),
            "gamma": json::ints(&self.gamma),
            "text": self.to_string(),
        })
    }
}

fn rank_for_pairs(p: usize) -> Option<usize> {
    (0..).take_while(|&m| pair_count(m) <= p).find(|&m| pair_count(m) == p)
}

/// `a1^α1 … am^αm [a1,a2]^γ12 …`, zero exponents omitted and unit
/// exponents left bare; the identity renders as `1`.
impl<T: IntScalar> fmt::Display for Malcev<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let pow = |base: String, e: &T| {
            if e.is_one() {
                base
            } else {
                format!("{base}^{e}")
            }
        };
        for (i, a) in self.alpha.iter().enumerate() {
            if !a.is_zero() {
                parts.push(pow(format!("a{}", i + 1), a));
            }
        }
        let m = self.rank();
        for (k, g) in self.gamma.iter().enumerate() {
            if !g.is_zero() {
                let (i, j) = pair_of(m, k);
                parts.push(pow(format!("[a{},a{}]", i + 1, j + 1), g));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Reference evaluation by literal collection.
///
/// Bubble-sorts the letters of `w` into generator order using
/// `a_t^e a_s^f → a_s^f a_t^e [a_s, a_t]^{-ef}` for `s < t` and tallies the
/// central commutators that each swap emits. Quadratic in the word length;
/// exists to pin down [`Malcev::multiply`].
pub fn collection_oracle<T: IntScalar>(w: &Word) -> Malcev<T> {
    let m = w.rank();
    let mut letters: Vec<(usize, i64)> = w.letters().iter().map(|l| (l.generator, l.sign())).collect();
    let mut gamma = vec![0i64; pair_count(m)];
    let mut swapped = true;
    while swapped {
        swapped = false;
        for p in 0..letters.len().saturating_sub(1) {
            let (t, e) = letters[p];
            let (s, f) = letters[p + 1];
            if t > s {
                letters.swap(p, p + 1);
                gamma[pair_index(m, s, t)] -= e * f;
                swapped = true;
            }
        }
    }
    let mut alpha = vec![0i64; m];
    for (g, e) in letters {
        alpha[g] += e;
    }
    Malcev {
        alpha: alpha.into_iter().map(T::of).collect(),
        gamma: gamma.into_iter().map(T::of).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    type E = Malcev<i64>;

    fn ev(text: &str, m: usize) -> E {
        Malcev::from_word(&parse_word(text, m).unwrap())
    }

    #[test]
    fn pair_indexing_round_trips() {
        for m in 2..6 {
            let mut k = 0;
            for i in 0..m {
                for j in i + 1..m {
                    assert_eq!(pair_index(m, i, j), k);
                    assert_eq!(pair_of(m, k), (i, j));
                    k += 1;
                }
            }
            assert_eq!(k, pair_count(m));
        }
    }

    #[test]
    fn multiply_examples() {
        let a1 = E::generator(2, 0);
        let a2 = E::generator(2, 1);
        let x = a1.multiply(&a2).unwrap();
        assert_eq!(x.alpha(), &[1, 1]);
        assert_eq!(x.gamma(), &[0]);
        // a2 a1 = a1 a2 [a1,a2]^{-1}
        let y = a2.multiply(&a1).unwrap();
        assert_eq!(y.alpha(), &[1, 1]);
        assert_eq!(y.gamma(), &[-1]);
        assert_eq!(x.multiply(&E::identity(2)).unwrap(), x);
    }

    #[test]
    fn multiply_rank_mismatch() {
        let err = E::generator(2, 0).multiply(&E::generator(3, 0)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(E::identity(3).inverse(), E::identity(3));
        let a1 = E::generator(3, 0);
        assert_eq!(a1.inverse().alpha(), &[-1, 0, 0]);
        assert!(a1.inverse().gamma().iter().all(|&g| g == 0));
        let x = ev("a1 a2", 2);
        assert!(x.multiply(&x.inverse()).unwrap().is_identity());
        assert!(x.inverse().multiply(&x).unwrap().is_identity());
    }

    #[test]
    fn commutator_examples() {
        let a1 = E::generator(2, 0);
        let a2 = E::generator(2, 1);
        assert_eq!(a1.commutator(&a2).unwrap(), E::basic_commutator(2, 0, 1));
        let x = ev("a1 a2^3 a1", 2);
        assert!(x.commutator(&x).unwrap().is_identity());
        let c = a1.pow(&2).commutator(&a2.pow(&3)).unwrap();
        assert_eq!(c.gamma(), &[6]);
        // Agrees with the defining word evaluated by the oracle.
        assert_eq!(c, collection_oracle(&parse_word("[a1^2, a2^3]", 2).unwrap()));
    }

    #[test]
    fn power_examples() {
        let x = ev("a1 a2", 2);
        assert!(x.pow(&0).is_identity());
        assert_eq!(E::generator(3, 0).pow(&5).alpha(), &[5, 0, 0]);
        let chain = x.multiply(&x).unwrap().multiply(&x).unwrap();
        assert_eq!(x.pow(&3), chain);
        assert_eq!(x.pow(&-3), chain.inverse());
    }

    #[test]
    fn from_word_examples() {
        // a1 a2 a1^-1 a2^-1 = [a1^-1, a2^-1] = [a1, a2].
        let x = ev("a1 a2 a1^-1 a2^-1", 2);
        assert_eq!(x.alpha(), &[0, 0]);
        assert_eq!(x.gamma(), &[1]);
        assert_eq!(ev("a1^-1 a2^-1 a1 a2", 2).gamma(), &[1]);
        assert_eq!(ev("a2^-1 a1^-1 a2 a1", 2).gamma(), &[-1]);
        let y = ev("a1^2 a2^3", 2);
        assert_eq!(y.alpha(), &[2, 3]);
        assert_eq!(y.gamma(), &[0]);
        assert!(ev("a1 a2 a2^-1 a1^-1", 2).is_identity());
    }

    #[test]
    fn oracle_examples() {
        let w = parse_word("a2 a1", 2).unwrap();
        assert_eq!(collection_oracle::<i64>(&w).gamma(), &[-1]);
        let w = parse_word("a1 a2", 2).unwrap();
        assert_eq!(collection_oracle::<i64>(&w).gamma(), &[0]);
    }

    #[test]
    fn display() {
        assert_eq!(E::identity(2).to_string(), "1");
        assert_eq!(ev("a2 a1", 2).to_string(), "a1 a2 [a1,a2]^-1");
        assert_eq!(ev("a3^-1 a1^2", 3).to_string(), "a1^2 a3^-1 [a1,a3]^2");
    }

    #[test]
    fn to_word_round_trips() {
        let x = ev("a3 a1^-2 a2 [a2,a3]^4 a1", 3);
        assert_eq!(Malcev::from_word(&x.to_word()), x);
    }

    #[test]
    fn central_requires_triangular_length() {
        assert!(E::central(vec![1, 2, 3]).is_ok());
        assert!(E::central(vec![1, 2]).is_err());
    }
}
