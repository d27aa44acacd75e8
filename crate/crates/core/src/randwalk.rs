//! Random-walk experiments on `ℤ^m`.
//!
//! A random relator of length `ℓ` is a walk of `ℓ` uniform steps among the
//! `2m` signed generators; its exponent-sum vector is the walk's endpoint.
//! Everything here is reproducible: trial `t` at parameter `p` draws from a
//! ChaCha8 stream seeded by [`stream_seed`], so results do not depend on
//! thread scheduling, and all aggregation is over integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::scalar::Weight;
use crate::words::{exponent_sum_matrix, random_word, RelatorSet};
use crate::zmatrix::{minor_polynomial, rank_bareiss, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub m: usize,
    pub r: usize,
    pub lengths: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Precondition("trials must be at least 1".into()));
        }
        if self.lengths.is_empty() {
            return Err(Error::Precondition("lengths must be nonempty".into()));
        }
        if self.m == 0 {
            return Err(Error::Precondition("m must be at least 1".into()));
        }
        Ok(())
    }
}

const DOMAIN_RANK: u64 = 0x7261_6e6b;
const DOMAIN_CLT: u64 = 0x636c_74;
const DOMAIN_ESCAPE: u64 = 0x6573_6361_7065;

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the RNG stream for `trial` at parameter `param` (a length or a
/// step count) of the experiment family `domain`:
/// `h(h(h(seed ⊕ domain) ⊕ param) ⊕ trial)` with `h` the SplitMix64 mixer.
pub fn stream_seed(seed: u64, domain: u64, param: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed ^ domain) ^ param) ^ trial)
}

fn stream(seed: u64, domain: u64, param: usize, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, domain, param as u64, trial as u64))
}

/// The `r` relators drawn in trial `t` at length `ℓ`.
pub fn sample_relators(cfg: &ExperimentConfig, length: usize, trial: usize) -> RelatorSet {
    let mut rng = stream(cfg.seed, DOMAIN_RANK, length, trial);
    let words = (0..cfg.r).map(|_| random_word(length, cfg.m, &mut rng)).collect();
    RelatorSet::new(words, cfg.m).expect("words share the rank")
}

/// Exponent-sum matrix of [`sample_relators`].
pub fn sample_matrix(cfg: &ExperimentConfig, length: usize, trial: usize) -> Matrix<i64> {
    exponent_sum_matrix(&sample_relators(cfg, length, trial))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankExperimentRow {
    pub length: usize,
    pub trials: usize,
    pub full_rank_count: usize,
    pub p_hat: f64,
    pub stderr: f64,
}

impl RankExperimentRow {
    pub fn p_hat_exact(&self) -> BigRational {
        BigRational::new(self.full_rank_count.into(), self.trials.into())
    }
}

fn binomial_stderr(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Fraction of trials whose exponent-sum matrix has rank `min(r, m)`.
pub fn rank_experiment(cfg: &ExperimentConfig) -> Result<Vec<RankExperimentRow>> {
    cfg.validate()?;
    let target = cfg.r.min(cfg.m);
    Ok(cfg
        .lengths
        .iter()
        .map(|&length| {
            let full_rank_count = (0..cfg.trials)
                .into_par_iter()
                .filter(|&t| rank_bareiss(&sample_matrix(cfg, length, t)) == target)
                .count();
            let p_hat = full_rank_count as f64 / cfg.trials as f64;
            RankExperimentRow {
                length,
                trials: cfg.trials,
                full_rank_count,
                p_hat,
                stderr: binomial_stderr(p_hat, cfg.trials),
            }
        })
        .collect())
}

/// Endpoint of an `n`-step walk on `ℤ^m`.
fn walk_endpoint<R: Rng>(m: usize, n: usize, rng: &mut R) -> Vec<i64> {
    let mut s = vec![0i64; m];
    for _ in 0..n {
        let x = rng.gen_range(0..2 * m);
        s[x / 2] += if x % 2 == 0 { 1 } else { -1 };
    }
    s
}

/// Exact variance of one coordinate of a single step, by enumerating the
/// `2m` equally likely steps.
pub fn step_variance(m: usize) -> BigRational {
    let mut second = BigRational::zero();
    let mut first = BigRational::zero();
    let p = BigRational::new(BigInt::one(), BigInt::from(2 * m));
    for x in 0..2 * m {
        let v: i64 = if x / 2 == 0 {
            if x % 2 == 0 {
                1
            } else {
                -1
            }
        } else {
            0
        };
        first += &p * BigRational::from_integer(v.into());
        second += &p * BigRational::from_integer((v * v).into());
    }
    second - &first * &first
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoordinateStats {
    pub coordinate: usize,
    /// Mean of `s_{n,i}/√n`.
    pub mean: f64,
    pub mean_stderr: f64,
    /// Sample variance of `s_{n,i}/√n`.
    pub variance: f64,
    /// Normal-theory standard error `variance · √(2/(T−1))`.
    pub variance_stderr: f64,
    /// Largest gap between the empirical CDF and the `N(0, 1/m)` CDF over
    /// [`CLT_GRID`].
    pub sup_cdf_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CltSummary {
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub coordinates: Vec<CoordinateStats>,
}

/// Grid of `z` values, in standard deviations of `N(0, 1/m)`.
pub const CLT_GRID: [f64; 25] = [
    -3.0, -2.75, -2.5, -2.25, -2.0, -1.75, -1.5, -1.25, -1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5,
    0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0,
];

pub fn coordinate_clt_stats(m: usize, n: usize, trials: usize, seed: u64) -> Result<CltSummary> {
    if m == 0 || n == 0 || trials == 0 {
        return Err(Error::Precondition("m, n and trials must be at least 1".into()));
    }
    let ends: Vec<Vec<i64>> = (0..trials)
        .into_par_iter()
        .map(|t| walk_endpoint(m, n, &mut stream(seed, DOMAIN_CLT, n, t)))
        .collect();
    let sigma = (1.0 / m as f64).sqrt();
    let normal = Normal::new(0.0, sigma).expect("positive deviation");
    let root_n = (n as f64).sqrt();
    let tt = trials as f64;
    let coordinates = (0..m)
        .map(|i| {
            let mut vals: Vec<i64> = ends.iter().map(|e| e[i]).collect();
            let s1: i128 = vals.iter().map(|&v| v as i128).sum();
            let s2: i128 = vals.iter().map(|&v| (v as i128) * (v as i128)).sum();
            let mean = s1 as f64 / tt / root_n;
            // T·S2 − S1² is exact; dividing last keeps rounding to one step.
            let centered = (trials as i128) * s2 - s1 * s1;
            let variance = if trials > 1 {
                centered as f64 / (tt * (tt - 1.0)) / n as f64
            } else {
                0.0
            };
            let variance_stderr = if trials > 1 {
                variance * (2.0 / (tt - 1.0)).sqrt()
            } else {
                f64::INFINITY
            };
            vals.sort_unstable();
            let sup_cdf_distance = CLT_GRID
                .iter()
                .map(|&z| {
                    let x = z * sigma;
                    let below = vals.partition_point(|&v| v as f64 / root_n <= x);
                    (below as f64 / tt - normal.cdf(x)).abs()
                })
                .fold(0.0, f64::max);
            CoordinateStats {
                coordinate: i + 1,
                mean,
                mean_stderr: (variance / tt).sqrt(),
                variance,
                variance_stderr,
                sup_cdf_distance,
            }
        })
        .collect();
    Ok(CltSummary {
        m,
        n,
        trials,
        seed,
        coordinates,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeEstimate {
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    pub threshold: f64,
    pub exceed_count: usize,
    pub p_hat: f64,
    pub stderr: f64,
    /// The threshold exceeds the walk's range, so the probability is 0
    /// without sampling.
    pub exact_zero: bool,
}

/// Estimates `P(|s_{n,1}/√n| ≥ ε)` with `ε = ln n` unless overridden.
pub fn escape_probability(
    m: usize,
    n: usize,
    trials: usize,
    seed: u64,
    threshold: Option<f64>,
) -> Result<EscapeEstimate> {
    if m == 0 || n == 0 || trials == 0 {
        return Err(Error::Precondition("m, n and trials must be at least 1".into()));
    }
    let eps = threshold.unwrap_or((n as f64).ln());
    let root_n = (n as f64).sqrt();
    let exact_zero = eps * root_n > n as f64;
    let exceed_count = if exact_zero {
        0
    } else {
        (0..trials)
            .into_par_iter()
            .filter(|&t| {
                let s = walk_endpoint(m, n, &mut stream(seed, DOMAIN_ESCAPE, n, t));
                (s[0] as f64 / root_n).abs() >= eps
            })
            .count()
    };
    let p_hat = exceed_count as f64 / trials as f64;
    Ok(EscapeEstimate {
        m,
        n,
        trials,
        threshold: eps,
        exceed_count,
        p_hat,
        stderr: binomial_stderr(p_hat, trials),
        exact_zero,
    })
}

/// Largest dense box the exact walk convolution will allocate.
pub const MAX_WALK_CELLS: usize = 4_000_000;

/// Exact tables are produced up to this `n_max`; larger requests use
/// floating point.
pub const EXACT_N_MAX: usize = 200;

/// Walk convolution in a weight semiring. Each step multiplies by `step`
/// and spreads to the `2m` neighbours. Returns, for `n = 0..=steps`, the
/// weight at the origin and the total weight.
pub fn walk_origin_weights<W: Weight>(
    m: usize,
    steps: usize,
    start: W,
    step: W,
) -> Result<(Vec<W>, Vec<W>)> {
    let side = 2 * steps + 1;
    let cells = side
        .checked_pow(m as u32)
        .filter(|&c| c <= MAX_WALK_CELLS)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "box of side {side} in dimension {m} exceeds {MAX_WALK_CELLS} cells"
            ))
        })?;
    let strides: Vec<usize> = (0..m).map(|d| side.pow(d as u32)).collect();
    let origin: usize = strides.iter().map(|s| s * steps).sum();
    let mut cur = vec![W::zero(); cells];
    cur[origin] = start;
    let mut at_origin = vec![cur[origin].clone()];
    let mut totals = vec![cur[origin].clone()];
    for _ in 0..steps {
        let mut next = vec![W::zero(); cells];
        for (idx, w) in cur.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let moved = w.clone() * step.clone();
            // After t < steps steps every coordinate is within t of the
            // origin, so both neighbours stay inside the box.
            for &s in &strides {
                for nb in [idx + s, idx - s] {
                    let old = std::mem::replace(&mut next[nb], W::zero());
                    next[nb] = old + moved.clone();
                }
            }
        }
        cur = next;
        at_origin.push(cur[origin].clone());
        totals.push(cur.iter().fold(W::zero(), |acc, w| acc + w.clone()));
    }
    Ok((at_origin, totals))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReturnRow {
    pub n: usize,
    /// `p_n(0) + p_{n+1}(0)`.
    pub value: f64,
    /// The same value as a reduced fraction, when computed exactly.
    pub exact_value: Option<String>,
    pub method: Arithmetic,
    /// Total probability at step `n` equals 1 (exactly, or within
    /// [`FLOAT_MASS_TOLERANCE`] in floating point).
    pub mass_conserved: bool,
}

/// Float fallback: each step adds `2m` nonnegative terms per cell, so the
/// accumulated relative rounding error stays below `(n+1)·2m·ε`, far under
/// this tolerance for any box that fits in memory.
pub const FLOAT_MASS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ReturnTable {
    pub m: usize,
    pub rows: Vec<ReturnRow>,
    /// Exact `p_n(0)` for `n = 0..=n_max+1` when computed exactly.
    pub exact_probabilities: Option<Vec<BigRational>>,
    /// Exact total mass at each `n`, when computed exactly.
    pub exact_masses: Option<Vec<BigRational>>,
}

/// `p_n(0) + p_{n+1}(0)` for `n = 0..=n_max`: exact rationals up to
/// [`EXACT_N_MAX`], floating point beyond.
pub fn return_probability_exact(m: usize, n_max: usize) -> Result<ReturnTable> {
    if !(1..=3).contains(&m) {
        return Err(Error::Precondition(format!("m must be 1, 2 or 3, got {m}")));
    }
    let steps = n_max + 1;
    if n_max <= EXACT_N_MAX {
        let (counts, totals) = walk_origin_weights(m, steps, BigInt::one(), BigInt::one())?;
        let base = BigInt::from(2 * m);
        let mut denom = BigInt::one();
        let mut probs = Vec::with_capacity(steps + 1);
        let mut masses = Vec::with_capacity(steps + 1);
        for (c, t) in counts.into_iter().zip(totals) {
            probs.push(BigRational::new(c, denom.clone()));
            masses.push(BigRational::new(t, denom.clone()));
            denom *= &base;
        }
        let rows = (0..=n_max)
            .map(|n| {
                let v = &probs[n] + &probs[n + 1];
                ReturnRow {
                    n,
                    value: ratio_to_f64(&v),
                    exact_value: Some(v.to_string()),
                    method: Arithmetic::Exact,
                    mass_conserved: masses[n].is_one() && masses[n + 1].is_one(),
                }
            })
            .collect();
        Ok(ReturnTable {
            m,
            rows,
            exact_probabilities: Some(probs),
            exact_masses: Some(masses),
        })
    } else {
        let (probs, totals) = walk_origin_weights(m, steps, 1.0f64, 1.0 / (2 * m) as f64)?;
        let ok = |t: f64| (t - 1.0).abs() <= FLOAT_MASS_TOLERANCE;
        let rows = (0..=n_max)
            .map(|n| ReturnRow {
                n,
                value: probs[n] + probs[n + 1],
                exact_value: None,
                method: Arithmetic::Float,
                mass_conserved: ok(totals[n]) && ok(totals[n + 1]),
            })
            .collect();
        Ok(ReturnTable {
            m,
            rows,
            exact_probabilities: None,
            exact_masses: None,
        })
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    // Both parts may overflow f64 on their own, so shift them into range
    // together.
    let (n, d) = (r.numer(), r.denom());
    let shift = d.bits().saturating_sub(900).max(n.bits().saturating_sub(900));
    let (n, d) = (n >> shift, d >> shift);
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 2 {
        return Err(Error::Degenerate("need at least two points".into()));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::Degenerate("log-log fit needs positive x and y".into()));
    }
    let first = points[0];
    if points.iter().all(|p| p.0 == first.0) {
        return Err(Error::Degenerate("x values are constant".into()));
    }
    if points.iter().all(|p| p.1 == first.1) {
        return Err(Error::Degenerate("y values are constant".into()));
    }
    let k = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    Ok(SlopeFit {
        slope,
        intercept: my - slope * mx,
        points: points.len(),
    })
}

/// Log-log slope of `p_n(0) + p_{n+1}(0)` over even `n` in `[n_lo, n_hi]`.
pub fn decay_slope(m: usize, n_lo: usize, n_hi: usize) -> Result<SlopeFit> {
    if n_lo >= n_hi || n_lo == 0 {
        return Err(Error::Degenerate(format!("empty or constant range [{n_lo}, {n_hi}]")));
    }
    let table = return_probability_exact(m, n_hi)?;
    let points: Vec<(f64, f64)> = table.rows[n_lo..=n_hi]
        .iter()
        .filter(|r| r.n % 2 == 0)
        .map(|r| (r.n as f64, r.value))
        .collect();
    fit_loglog(&points)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchwartzZippelReport {
    pub r: usize,
    pub m: usize,
    pub b: u32,
    pub matrices: u64,
    pub zero_count: u64,
    pub bound: u64,
    pub holds: bool,
}

pub const DEFAULT_SZ_LIMIT: u64 = 20_000_000;

/// Counts the zeros of the minor polynomial over all `r × m` matrices with
/// entries in `{−b..b}` and compares with `2·min(r,m)·|I|^{rm−1}`.
pub fn schwartz_zippel_check(r: usize, m: usize, b: u32, limit: u64) -> Result<SchwartzZippelReport> {
    if r == 0 || m == 0 {
        return Err(Error::Precondition("r and m must be at least 1".into()));
    }
    let width = 2 * b as u64 + 1;
    let vars = (r * m) as u32;
    let matrices = width
        .checked_pow(vars)
        .filter(|&n| n <= limit)
        .ok_or_else(|| {
            Error::ResourceLimit(format!("{width}^{vars} matrices exceed the limit {limit}"))
        })?;
    let zero_count = (0..matrices)
        .into_par_iter()
        .filter(|&code| {
            let mut c = code;
            let mat = Matrix::from_fn(r, m, |_, _| {
                let digit = (c % width) as i64;
                c /= width;
                digit - b as i64
            });
            minor_polynomial(&mat) == 0
        })
        .count() as u64;
    let bound = 2 * r.min(m) as u64 * width.pow(vars - 1);
    Ok(SchwartzZippelReport {
        r,
        m,
        b,
        matrices,
        zero_count,
        bound,
        holds: zero_count <= bound,
    })
}

/// CSV text whose first line is `# config: <json>`, followed by a header
/// row and one row per record.
pub fn csv_with_config<C: Serialize, S: Serialize>(config: &C, rows: &[S]) -> String {
    let mut out = format!(
        "# config: {}\n",
        serde_json::to_string(config).expect("config serializes")
    );
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("row serializes");
    }
    let body = w.into_inner().expect("in-memory writer");
    out.push_str(std::str::from_utf8(&body).expect("csv is utf-8"));
    out
}

/// `full_rank_count` recomputed from the minor polynomial in exact
/// arithmetic, used to cross-check [`rank_experiment`].
pub fn full_rank_count_by_minors(cfg: &ExperimentConfig, length: usize) -> usize {
    (0..cfg.trials)
        .into_par_iter()
        .filter(|&t| {
            let m = sample_matrix(cfg, length, t).map(|x| BigInt::from(*x));
            !minor_polynomial(&m).is_zero()
        })
        .count()
}

/// Absolute value of the largest exponent sum seen, a sanity bound for
/// machine-integer sampling (always at most `ℓ`).
pub fn max_abs_entry(m: &Matrix<i64>) -> i64 {
    m.to_rows().iter().flatten().map(|v| v.abs()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: usize, r: usize, lengths: Vec<usize>, trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            m,
            r,
            lengths,
            trials,
            seed: 7,
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg(2, 1, vec![], 5).validate().is_err());
        assert!(cfg(2, 1, vec![3], 0).validate().is_err());
        assert!(cfg(2, 1, vec![3], 1).validate().is_ok());
    }

    #[test]
    fn odd_length_on_a_line_is_always_full_rank() {
        let rows = rank_experiment(&cfg(1, 1, vec![1, 3, 7, 21], 200)).unwrap();
        for row in rows {
            assert_eq!(row.full_rank_count, 200);
            assert!(row.p_hat_exact().is_one());
            assert_eq!(row.stderr, 0.0);
        }
    }

    #[test]
    fn no_relators_is_vacuously_full_rank() {
        let rows = rank_experiment(&cfg(3, 0, vec![5, 10], 10)).unwrap();
        assert!(rows.iter().all(|r| r.p_hat == 1.0));
    }

    #[test]
    fn rank_paths_agree() {
        let c = cfg(2, 2, vec![4, 10], 300);
        for row in rank_experiment(&c).unwrap() {
            assert_eq!(row.full_rank_count, full_rank_count_by_minors(&c, row.length));
        }
    }

    #[test]
    fn samples_are_reproducible_and_bounded() {
        let c = cfg(3, 2, vec![50], 4);
        assert_eq!(sample_matrix(&c, 50, 3), sample_matrix(&c, 50, 3));
        assert_ne!(sample_matrix(&c, 50, 3), sample_matrix(&c, 50, 2));
        assert!(max_abs_entry(&sample_matrix(&c, 50, 1)) <= 50);
        assert_ne!(stream_seed(1, DOMAIN_RANK, 10, 0), stream_seed(1, DOMAIN_CLT, 10, 0));
    }

    #[test]
    fn single_step_variance() {
        for m in 1..=4 {
            assert_eq!(step_variance(m), BigRational::new(1.into(), (m as i64).into()));
        }
    }

    #[test]
    fn exact_return_examples() {
        let t1 = return_probability_exact(1, 3).unwrap();
        assert_eq!(t1.rows[1].exact_value.as_deref(), Some("1/2"));
        let t2 = return_probability_exact(2, 3).unwrap();
        assert_eq!(t2.rows[1].exact_value.as_deref(), Some("1/4"));
        for t in [&t1, &t2] {
            let probs = t.exact_probabilities.as_ref().unwrap();
            for n in (1..probs.len()).step_by(2) {
                assert!(probs[n].is_zero());
            }
            assert!(t.rows.iter().all(|r| r.mass_conserved));
        }
    }

    #[test]
    fn float_path_matches_exact_path() {
        let exact = return_probability_exact(2, 40).unwrap();
        let (probs, totals) = walk_origin_weights(2, 41, 1.0f64, 0.25).unwrap();
        for row in &exact.rows {
            let v = probs[row.n] + probs[row.n + 1];
            assert!((v - row.value).abs() < 1e-12);
        }
        assert!(totals.iter().all(|t| (t - 1.0).abs() < 1e-12));
        let big = return_probability_exact(1, 300).unwrap();
        assert_eq!(big.rows[300].method, Arithmetic::Float);
        assert!(big.rows.iter().all(|r| r.mass_conserved));
    }

    #[test]
    fn box_limit_is_enforced() {
        assert!(matches!(
            return_probability_exact(3, 400),
            Err(Error::ResourceLimit(_))
        ));
        assert!(return_probability_exact(4, 2).is_err());
    }

    #[test]
    fn slope_guards() {
        assert!(fit_loglog(&[(1.0, 1.0)]).is_err());
        assert!(fit_loglog(&[(2.0, 1.0), (2.0, 3.0)]).is_err());
        assert!(fit_loglog(&[(2.0, 1.0), (3.0, 1.0)]).is_err());
        assert!(fit_loglog(&[(2.0, 0.0), (3.0, 1.0)]).is_err());
        assert!(decay_slope(1, 50, 50).is_err());
        let f = fit_loglog(&[(1.0, 1.0), (2.0, 0.25), (4.0, 0.0625)]).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-12);
    }

    #[test]
    fn sz_examples() {
        let a = schwartz_zippel_check(1, 1, 1, DEFAULT_SZ_LIMIT).unwrap();
        assert_eq!((a.zero_count, a.bound), (1, 2));
        let b = schwartz_zippel_check(1, 2, 1, DEFAULT_SZ_LIMIT).unwrap();
        // f = x² + y² has degree 2, so the bound is 2·3.
        assert_eq!((b.zero_count, b.bound), (1, 6));
        let c = schwartz_zippel_check(2, 2, 1, DEFAULT_SZ_LIMIT).unwrap();
        assert_eq!(c.bound, 108);
        // Singular 2×2 over {-1,0,1}: ad = bc, counted by brute force.
        let mut singular = 0;
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                for c in -1i64..=1 {
                    for d in -1i64..=1 {
                        singular += (a * d == b * c) as u64;
                    }
                }
            }
        }
        assert_eq!(c.zero_count, singular);
        assert!(c.holds);
        assert!(matches!(
            schwartz_zippel_check(3, 3, 2, 1000),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn escape_range_bound() {
        // ln(10)·√10 ≈ 7.3 < 10, so sampling happens.
        let e = escape_probability(2, 10, 100, 1, None).unwrap();
        assert!(!e.exact_zero);
        assert!((0.0..=1.0).contains(&e.p_hat));
        let z = escape_probability(2, 4, 100, 1, Some(3.0)).unwrap();
        assert!(z.exact_zero);
        assert_eq!(z.exceed_count, 0);
    }

    #[test]
    fn csv_has_config_header() {
        let c = cfg(2, 2, vec![10], 20);
        let text = csv_with_config(&c, &rank_experiment(&c).unwrap());
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# config: {\"m\":2"));
        assert_eq!(lines.next().unwrap(), "length,trials,full_rank_count,p_hat,stderr");
        assert_eq!(text, csv_with_config(&c, &rank_experiment(&c).unwrap()));
    }
}
