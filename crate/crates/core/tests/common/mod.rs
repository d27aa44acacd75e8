//! Reference implementations shared by the property and acceptance tests.
//! Each one avoids the library routine it is compared against.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use nilrand::nilpotent2::Malcev;
use nilrand::words::{random_word, RelatorSet, Word};
use nilrand::zmatrix::{combinations, integer_kernel, Lattice, Matrix};
use nilrand::{IntMatrix, MalcevElement};

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, lo: i64, hi: i64, rng: &mut R) -> IntMatrix {
    Matrix::from_fn(rows, cols, |_, _| big(rng.gen_range(lo..=hi)))
}

/// Plain triple-loop product.
pub fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols(), b.rows());
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).fold(BigInt::zero(), |acc, k| acc + &a[(i, k)] * &b[(k, j)])
    })
}

/// Determinant by Gaussian elimination over ℚ.
pub fn det_rational(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer(a[(i, j)].clone())).collect())
        .collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let sub = &f * &m[c][k];
                m[r][k] -= sub;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

/// Rank over ℚ by elimination.
pub fn rank_rational(a: &IntMatrix) -> usize {
    let mut m: Vec<Vec<BigRational>> = a
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut rank = 0;
    for c in 0..a.cols() {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in 0..a.cols() {
                    let sub = &f * &m[rank][k];
                    m[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}`
/// with `D_k` the gcd of all `k × k` minors.
pub fn invariant_factors_by_minors(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows().min(a.cols());
    let mut out = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 1..=n {
        let mut g = BigInt::zero();
        for rows in combinations(a.rows(), k) {
            for cols in combinations(a.cols(), k) {
                let sub = Matrix::from_fn(k, k, |i, j| a[(rows[i], cols[j])].clone());
                g = g.gcd(&det_rational(&sub));
            }
        }
        if g.is_zero() {
            out.extend(std::iter::repeat(BigInt::zero()).take(n - out.len()));
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

pub fn is_unimodular(a: &IntMatrix) -> bool {
    det_rational(a).abs().is_one()
}

/// Membership in the normal closure of `relators` in `N_{2,m}`, computed
/// from the original relators without any Nielsen normalization.
///
/// The closure is generated by the `g_j` and the central `[g_j, a_k]`.
/// Modulo the central lattice `L'` spanned by the latter, `λ ↦ Π g_j^{λ_j}`
/// is a homomorphism on the relation lattice of the exponent-sum rows, so
/// `h` is in the closure iff `h.α = λ·M` has an integer solution and the
/// central residual of `h · (Π g_j^{λ_j})^{-1}` lies in `L'` plus the
/// images of the relation lattice.
pub fn closure_oracle(relators: &[MalcevElement], m: usize, h: &MalcevElement) -> bool {
    let p = m * (m - 1) / 2;
    let rows: Vec<Vec<BigInt>> = relators.iter().map(|g| g.alpha().to_vec()).collect();
    let Some(lambda) = Lattice::new(rows.clone(), m).unwrap().solve(h.alpha()).unwrap() else {
        return false;
    };
    let product = |coeffs: &[BigInt]| {
        relators
            .iter()
            .zip(coeffs)
            .fold(Malcev::identity(m), |acc: MalcevElement, (g, c)| acc.multiply(&g.pow(c)).unwrap())
    };
    let residual = h.multiply(&product(&lambda).inverse()).unwrap();
    assert!(residual.is_central());

    let mut central: Vec<Vec<BigInt>> = Vec::new();
    for g in relators {
        for k in 0..m {
            central.push(g.commutator(&Malcev::generator(m, k)).unwrap().gamma().to_vec());
        }
    }
    if !relators.is_empty() {
        let mt = Matrix::from_rows(rows, m).unwrap().transpose();
        for kappa in integer_kernel(&mt) {
            central.push(product(&kappa).gamma().to_vec());
        }
    }
    Lattice::new(central, p).unwrap().contains(residual.gamma()).unwrap()
}

/// `r` random relators of length `1..=max_len` whose exponent-sum matrix has
/// rank `min(r, m)`.
pub fn random_full_rank_relators<R: Rng>(m: usize, r: usize, max_len: usize, rng: &mut R) -> RelatorSet {
    loop {
        let words: Vec<Word> = (0..r)
            .map(|_| {
                let len = rng.gen_range(1..=max_len);
                random_word(len, m, rng)
            })
            .collect();
        let rels = RelatorSet::new(words, m).unwrap();
        let mat: IntMatrix = nilrand::words::exponent_sum_matrix(&rels);
        if rank_rational(&mat) == r.min(m) {
            return rels;
        }
    }
}

pub fn random_element<R: Rng>(m: usize, bound: i64, rng: &mut R) -> MalcevElement {
    let p = m * (m - 1) / 2;
    Malcev::new(
        (0..m).map(|_| big(rng.gen_range(-bound..=bound))).collect(),
        (0..p).map(|_| big(rng.gen_range(-bound..=bound))).collect(),
    )
    .unwrap()
}
