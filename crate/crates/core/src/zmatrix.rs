//! Exact integer linear algebra.
//!
//! Smith normal form with a replayable log of elementary operations,
//! fraction-free (Bareiss) rank and determinants, the sum of squared
//! maximal minors, and Hermite-form lattices for membership queries.

use std::fmt;
use std::ops::Index;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json;
use crate::scalar::IntScalar;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; `cols` is needed so that a matrix with no
    /// rows still has a width.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols,
            data,
        })
    }

    /// Convenience constructor from small literals; panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| T::of(x)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("ragged matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self[(i, k)].clone() * other[(k, j)].clone()
            })
        }))
    }

    /// Vertical concatenation; both operands must share a width.
    pub fn stack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn map<U: IntScalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn add_row(&mut self, src: usize, dst: usize, k: &T) {
        for j in 0..self.cols {
            let v = self[(src, j)].clone() * k.clone();
            let e = &mut self.data[dst * self.cols + j];
            *e = e.clone() + v;
        }
    }

    fn add_col(&mut self, src: usize, dst: usize, k: &T) {
        for i in 0..self.rows {
            let v = self[(i, src)].clone() * k.clone();
            let e = &mut self.data[i * self.cols + dst];
            *e = e.clone() + v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let e = &mut self.data[i * self.cols + j];
            *e = -e.clone();
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let e = &mut self.data[i * self.cols + j];
            *e = -e.clone();
        }
    }

    /// Applies an elementary operation in place.
    pub fn apply(&mut self, op: &ElementaryOp<T>) {
        match op {
            ElementaryOp::AddRow { src, dst, k } => self.add_row(*src, *dst, k),
            ElementaryOp::AddCol { src, dst, k } => self.add_col(*src, *dst, k),
            ElementaryOp::SwapRows(a, b) => self.swap_rows(*a, *b),
            ElementaryOp::SwapCols(a, b) => self.swap_cols(*a, *b),
            ElementaryOp::NegateRow(i) => self.negate_row(*i),
            ElementaryOp::NegateCol(j) => self.negate_col(*j),
        }
    }

    /// Determinant of a square matrix by Bareiss elimination.
    pub fn determinant(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(T::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a[(i, j)].clone() * a[(k, k)].clone()
                        - a[(i, k)].clone() * a[(k, j)].clone())
                        / prev.clone();
                    a.set(i, j, v);
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * a[(n - 1, n - 1)].clone())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: IntScalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// One elementary unimodular operation.
///
/// `AddRow { src, dst, k }` is `row[dst] += k * row[src]`, and likewise for
/// columns. An entry with multiplier `k` stands for `|k|` unit additions (or
/// subtractions) of the same row or column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryOp<T> {
    AddRow { src: usize, dst: usize, k: T },
    AddCol { src: usize, dst: usize, k: T },
    SwapRows(usize, usize),
    SwapCols(usize, usize),
    NegateRow(usize),
    NegateCol(usize),
}

impl<T: IntScalar> ElementaryOp<T> {
    pub fn is_row_op(&self) -> bool {
        matches!(
            self,
            ElementaryOp::AddRow { .. } | ElementaryOp::SwapRows(..) | ElementaryOp::NegateRow(_)
        )
    }

    pub fn to_json(&self) -> Value {
        match self {
            ElementaryOp::AddRow { src, dst, k } => {
                json!({"op": "add_row", "src": src, "dst": dst, "k": json::int(k)})
            }
            ElementaryOp::AddCol { src, dst, k } => {
                json!({"op": "add_col", "src": src, "dst": dst, "k": json::int(k)})
            }
            ElementaryOp::SwapRows(a, b) => json!({"op": "swap_rows", "a": a, "b": b}),
            ElementaryOp::SwapCols(a, b) => json!({"op": "swap_cols", "a": a, "b": b}),
            ElementaryOp::NegateRow(i) => json!({"op": "negate_row", "index": i}),
            ElementaryOp::NegateCol(j) => json!({"op": "negate_col", "index": j}),
        }
    }
}

/// `D = U * M * V` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    pub rank: usize,
    /// Diagonal of `D`, `min(rows, cols)` entries, nonnegative, each dividing
    /// the next; zeros trail.
    pub invariant_factors: Vec<T>,
    /// Operations in the order they were applied to `M`.
    pub ops: Vec<ElementaryOp<T>>,
}

struct SnfState<T> {
    d: Matrix<T>,
    u: Matrix<T>,
    v: Matrix<T>,
    ops: Vec<ElementaryOp<T>>,
}

impl<T: IntScalar> SnfState<T> {
    fn push(&mut self, op: ElementaryOp<T>) {
        self.d.apply(&op);
        if op.is_row_op() {
            self.u.apply(&op);
        } else {
            self.v.apply(&op);
        }
        self.ops.push(op);
    }

    fn move_to_pivot(&mut self, t: usize, i: usize, j: usize) {
        if i != t {
            self.push(ElementaryOp::SwapRows(t, i));
        }
        if j != t {
            self.push(ElementaryOp::SwapCols(t, j));
        }
    }

    /// Euclidean step on row and column `t`; returns true when both are clear.
    fn reduce_cross(&mut self, t: usize) -> bool {
        let (r, c) = self.d.shape();
        let mut clear = true;
        for i in t + 1..r {
            if self.d[(i, t)].is_zero() {
                continue;
            }
            let q = self.d[(i, t)].clone() / self.d[(t, t)].clone();
            if !q.is_zero() {
                self.push(ElementaryOp::AddRow {
                    src: t,
                    dst: i,
                    k: -q,
                });
            }
            if !self.d[(i, t)].is_zero() {
                clear = false;
            }
        }
        for j in t + 1..c {
            if self.d[(t, j)].is_zero() {
                continue;
            }
            let q = self.d[(t, j)].clone() / self.d[(t, t)].clone();
            if !q.is_zero() {
                self.push(ElementaryOp::AddCol {
                    src: t,
                    dst: j,
                    k: -q,
                });
            }
            if !self.d[(t, j)].is_zero() {
                clear = false;
            }
        }
        clear
    }
}

/// Smith normal form with transforms and operation log.
///
/// Pivots are the smallest nonzero entry by absolute value.
pub fn smith_normal_form<T: IntScalar>(m: &Matrix<T>) -> Smith<T> {
    let (r, c) = m.shape();
    let mut st = SnfState {
        d: m.clone(),
        u: Matrix::identity(r),
        v: Matrix::identity(c),
        ops: Vec::new(),
    };
    let k = r.min(c);
    let mut t = 0;
    while t < k {
        let pivot = smallest_nonzero(&st.d, (t..r).flat_map(|i| (t..c).map(move |j| (i, j))));
        let Some((pi, pj)) = pivot else { break };
        st.move_to_pivot(t, pi, pj);
        loop {
            if !st.reduce_cross(t) {
                let cross = std::iter::once((t, t))
                    .chain((t + 1..r).map(|i| (i, t)))
                    .chain((t + 1..c).map(|j| (t, j)));
                let (pi, pj) = smallest_nonzero(&st.d, cross).expect("pivot vanished");
                st.move_to_pivot(t, pi, pj);
                continue;
            }
            let p = st.d[(t, t)].clone();
            let offender = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !st.d[(i, j)].is_multiple_of(&p))
            });
            match offender {
                Some(i) => st.push(ElementaryOp::AddRow {
                    src: i,
                    dst: t,
                    k: T::one(),
                }),
                None => break,
            }
        }
        if st.d[(t, t)].is_negative() {
            st.push(ElementaryOp::NegateRow(t));
        }
        t += 1;
    }
    let invariant_factors: Vec<T> = (0..k).map(|i| st.d[(i, i)].clone()).collect();
    let rank = invariant_factors.iter().filter(|x| !x.is_zero()).count();
    Smith {
        u: st.u,
        d: st.d,
        v: st.v,
        rank,
        invariant_factors,
        ops: st.ops,
    }
}

fn smallest_nonzero<T: IntScalar>(
    d: &Matrix<T>,
    cells: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), T)> = None;
    for (i, j) in cells {
        let a = d[(i, j)].abs();
        if a.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| a < *b) {
            best = Some(((i, j), a));
        }
    }
    best.map(|(p, _)| p)
}

impl<T: IntScalar> Smith<T> {
    /// Checks `U * M * V = D`, unimodularity, diagonal shape and the
    /// divisibility chain against the source matrix.
    pub fn verify(&self, m: &Matrix<T>) -> bool {
        let Ok(umv) = self.u.mul(m).and_then(|x| x.mul(&self.v)) else {
            return false;
        };
        if umv != self.d {
            return false;
        }
        let unimodular = |x: &Matrix<T>| x.determinant().map(|d| d.abs().is_one()).unwrap_or(false);
        if !unimodular(&self.u) || !unimodular(&self.v) {
            return false;
        }
        let (r, c) = self.d.shape();
        for i in 0..r {
            for j in 0..c {
                if i != j && !self.d[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let f = &self.invariant_factors;
        if f.iter().any(|x| x.is_negative()) {
            return false;
        }
        f.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        }) && self.rank == f.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "invariant_factors": json::ints(&self.invariant_factors),
            "ops": self.ops.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Rank via the Smith normal form.
pub fn rank<T: IntScalar>(m: &Matrix<T>) -> usize {
    smith_normal_form(m).rank
}

/// Rank via fraction-free Gaussian elimination; independent of the Smith
/// normal form code.
pub fn rank_bareiss<T: IntScalar>(m: &Matrix<T>) -> usize {
    let (r, c) = m.shape();
    let mut a = m.clone();
    let mut prev = T::one();
    let mut rank = 0;
    for col in 0..c {
        if rank == r {
            break;
        }
        let Some(p) = (rank..r).find(|&i| !a[(i, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, rank);
        for i in rank + 1..r {
            for j in col + 1..c {
                let v = (a[(i, j)].clone() * a[(rank, col)].clone()
                    - a[(i, col)].clone() * a[(rank, j)].clone())
                    / prev.clone();
                a.set(i, j, v);
            }
            a.set(i, col, T::zero());
        }
        prev = a[(rank, col)].clone();
        rank += 1;
    }
    rank
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Sum of squares of all maximal minors; zero exactly when the matrix is
/// rank deficient. A matrix with no rows or no columns has the single empty
/// minor, so the value is 1.
pub fn minor_polynomial<T: IntScalar>(m: &Matrix<T>) -> T {
    let (r, c) = m.shape();
    let k = r.min(c);
    let mut total = T::zero();
    if r <= c {
        for cols in combinations(c, k) {
            let sub = Matrix::from_fn(k, k, |i, j| m[(i, cols[j])].clone());
            let d = sub.determinant().expect("square minor");
            total = total + d.clone() * d;
        }
    } else {
        for rows in combinations(r, k) {
            let sub = Matrix::from_fn(k, k, |i, j| m[(rows[i], j)].clone());
            let d = sub.determinant().expect("square minor");
            total = total + d.clone() * d;
        }
    }
    total
}

/// ℤ-basis of the integer kernel `{x : M x = 0}`, read off the Smith
/// transform `V`.
pub fn integer_kernel<T: IntScalar>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let s = smith_normal_form(m);
    (s.rank..m.cols()).map(|j| s.v.column(j)).collect()
}

/// Row-style Hermite normal form of a set of generators, together with the
/// unimodular transform that produced it.
#[derive(Clone, Debug)]
pub struct Lattice<T> {
    dim: usize,
    generators: Vec<Vec<T>>,
    /// Nonzero echelon rows; pivots are positive.
    hnf: Vec<Vec<T>>,
    pivots: Vec<usize>,
    /// `hnf[i] = Σ_j transform[i][j] * generators[j]`.
    transform: Vec<Vec<T>>,
}

impl<T: IntScalar> Lattice<T> {
    pub fn new(generators: Vec<Vec<T>>, dim: usize) -> Result<Self> {
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.len(),
                });
            }
        }
        let k = generators.len();
        let mut h = Matrix::from_rows(generators.clone(), dim)?;
        let mut w = Matrix::<T>::identity(k);
        let mut row = 0;
        let mut pivots = Vec::new();
        for col in 0..dim {
            if row == k {
                break;
            }
            loop {
                let pick = smallest_nonzero(&h, (row..k).map(|i| (i, col)));
                let Some((p, _)) = pick else { break };
                h.swap_rows(p, row);
                w.swap_rows(p, row);
                let mut clear = true;
                for i in row + 1..k {
                    if h[(i, col)].is_zero() {
                        continue;
                    }
                    let q = -(h[(i, col)].clone() / h[(row, col)].clone());
                    h.add_row(row, i, &q);
                    w.add_row(row, i, &q);
                    if !h[(i, col)].is_zero() {
                        clear = false;
                    }
                }
                if clear {
                    break;
                }
            }
            if h[(row, col)].is_zero() {
                continue;
            }
            if h[(row, col)].is_negative() {
                h.negate_row(row);
                w.negate_row(row);
            }
            let p = h[(row, col)].clone();
            for i in 0..row {
                let q = -h[(i, col)].div_floor(&p);
                if !q.is_zero() {
                    h.add_row(row, i, &q);
                    w.add_row(row, i, &q);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let hnf = (0..row).map(|i| h.row(i).to_vec()).collect();
        let transform = (0..row).map(|i| w.row(i).to_vec()).collect();
        Ok(Lattice {
            dim,
            generators,
            hnf,
            pivots,
            transform,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    pub fn generators(&self) -> &[Vec<T>] {
        &self.generators
    }

    pub fn hnf(&self) -> &[Vec<T>] {
        &self.hnf
    }

    /// Integer coefficients `c` with `Σ c_i generators[i] = target`, or
    /// `None` when the target is outside the ℤ-span.
    pub fn solve(&self, target: &[T]) -> Result<Option<Vec<T>>> {
        if target.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: target.len(),
            });
        }
        let mut rest = target.to_vec();
        let mut along = Vec::with_capacity(self.hnf.len());
        for (row, &pc) in self.hnf.iter().zip(&self.pivots) {
            let (q, rem) = rest[pc].div_rem(&row[pc]);
            if !rem.is_zero() {
                return Ok(None);
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x = x.clone() - q.clone() * y.clone();
            }
            along.push(q);
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut coeffs = vec![T::zero(); self.generators.len()];
        for (q, trow) in along.iter().zip(&self.transform) {
            for (c, t) in coeffs.iter_mut().zip(trow) {
                *c = c.clone() + q.clone() * t.clone();
            }
        }
        Ok(Some(coeffs))
    }

    pub fn contains(&self, target: &[T]) -> Result<bool> {
        self.solve(target).map(|c| c.is_some())
    }

    /// True iff some nonzero multiple of the target lies in the lattice,
    /// i.e. the target is in the ℚ-span.
    pub fn contains_rational(&self, target: &[T]) -> Result<bool> {
        if target.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: target.len(),
            });
        }
        if self.hnf.is_empty() {
            return Ok(target.iter().all(|x| x.is_zero()));
        }
        let basis = Matrix::from_rows(self.hnf.clone(), self.dim)?;
        let with = basis.stack(&Matrix::from_rows(vec![target.to_vec()], self.dim)?)?;
        Ok(rank_bareiss(&with) == self.hnf.len())
    }

    /// ℤ-basis of `{y : <g, y> = 0 for every generator g}`; its vectors cut
    /// out the ℚ-span of the lattice.
    pub fn annihilator(&self) -> Vec<Vec<T>> {
        if self.hnf.is_empty() {
            return Matrix::<T>::identity(self.dim).to_rows();
        }
        let m = Matrix::from_rows(self.hnf.clone(), self.dim).expect("hnf rows");
        integer_kernel(&m)
    }
}

/// Coefficients expressing `target` in the ℤ-span of `basis`, if any.
pub fn lattice_membership<T: IntScalar>(basis: &[Vec<T>], target: &[T]) -> Result<Option<Vec<T>>> {
    Lattice::new(basis.to_vec(), target.len())?.solve(target)
}

/// True iff a nonzero integer multiple of `target` is in the ℤ-span of
/// `basis`.
pub fn rational_membership<T: IntScalar>(basis: &[Vec<T>], target: &[T]) -> Result<bool> {
    Lattice::new(basis.to_vec(), target.len())?.contains_rational(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type M = Matrix<BigInt>;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_identity() {
        let m = M::from_i64_rows(&[&[1, 0], &[0, 1]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, m);
        assert_eq!(s.rank, 2);
        assert!(s.verify(&m));
    }

    #[test]
    fn snf_two_by_two() {
        // gcd of entries is 2 and |det| = 8, so the factors are (2, 4).
        let m = M::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors, big(&[2, 4]));
        assert_eq!(s.rank, 2);
        assert!(s.verify(&m));
    }

    #[test]
    fn snf_single_row() {
        let m = M::from_i64_rows(&[&[1, 2, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors, big(&[1]));
        assert_eq!(s.rank, 1);
        assert!(s.verify(&m));
    }

    #[test]
    fn snf_replays_from_log() {
        let m = M::from_i64_rows(&[&[3, -7, 2], &[4, 0, 6], &[5, 5, 5]]);
        let s = smith_normal_form(&m);
        let mut d = m.clone();
        for op in &s.ops {
            d.apply(op);
        }
        assert_eq!(d, s.d);
    }

    #[test]
    fn snf_handles_empty_and_zero() {
        let m = M::zeros(0, 3);
        let s = smith_normal_form(&m);
        assert_eq!(s.rank, 0);
        assert!(s.invariant_factors.is_empty());
        let z = M::zeros(3, 3);
        let s = smith_normal_form(&z);
        assert_eq!(s.invariant_factors, big(&[0, 0, 0]));
        assert!(s.verify(&z));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&M::zeros(3, 3)), 0);
        assert_eq!(rank(&M::from_i64_rows(&[&[1, 0], &[0, 1], &[1, 1]])), 2);
        assert_eq!(rank(&M::from_i64_rows(&[&[2, 4], &[1, 2]])), 1);
        assert_eq!(rank_bareiss(&M::from_i64_rows(&[&[2, 4], &[1, 2]])), 1);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(
            M::from_i64_rows(&[&[0, 1], &[1, 0]]).determinant().unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            M::from_i64_rows(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])
                .determinant()
                .unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            M::from_i64_rows(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]])
                .determinant()
                .unwrap(),
            BigInt::from(0)
        );
    }

    #[test]
    fn minor_polynomial_examples() {
        assert_eq!(minor_polynomial(&M::from_i64_rows(&[&[1, 0], &[0, 1]])), BigInt::from(1));
        assert_eq!(minor_polynomial(&M::from_i64_rows(&[&[1, 1], &[1, 1]])), BigInt::from(0));
        // Minors of [[1,0,0],[0,1,0]] on column pairs (0,1), (0,2), (1,2): 1, 0, 0.
        assert_eq!(
            minor_polynomial(&M::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0]])),
            BigInt::from(1)
        );
        assert_eq!(minor_polynomial(&M::zeros(0, 2)), BigInt::from(1));
    }

    #[test]
    fn lattice_membership_examples() {
        let basis = vec![big(&[2, 0]), big(&[0, 3])];
        assert_eq!(
            lattice_membership(&basis, &big(&[4, 3])).unwrap(),
            Some(big(&[2, 1]))
        );
        assert_eq!(lattice_membership(&basis, &big(&[1, 0])).unwrap(), None);

        let basis = vec![big(&[2, 4]), big(&[6, 8])];
        let target = big(&[8, 12]);
        let c = lattice_membership(&basis, &target).unwrap().unwrap();
        let sum: Vec<BigInt> = (0..2)
            .map(|j| &c[0] * &basis[0][j] + &c[1] * &basis[1][j])
            .collect();
        assert_eq!(sum, target);
        // Brute-force box search agrees that some coefficients exist.
        let found = (-5i64..=5).any(|x| (-5i64..=5).any(|y| 2 * x + 6 * y == 8 && 4 * x + 8 * y == 12));
        assert!(found);
    }

    #[test]
    fn rational_membership_examples() {
        assert!(rational_membership(&[big(&[2, 0])], &big(&[1, 0])).unwrap());
        assert!(!rational_membership(&[big(&[2, 0])], &big(&[0, 1])).unwrap());
        assert!(rational_membership(&[big(&[1, 2]), big(&[2, 4])], &big(&[3, 6])).unwrap());
        assert!(rational_membership::<BigInt>(&[], &big(&[0, 0])).unwrap());
        assert!(!rational_membership::<BigInt>(&[], &big(&[0, 1])).unwrap());
    }

    #[test]
    fn membership_dimension_mismatch() {
        let err = lattice_membership(&[big(&[1, 0, 0])], &big(&[1, 0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn kernel_and_annihilator() {
        let m = M::from_i64_rows(&[&[1, 2, 3]]);
        let ker = integer_kernel(&m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!((&v[0] + &v[1] * 2 + &v[2] * 3) == BigInt::from(0));
        }
        let lat = Lattice::new(vec![big(&[2, 0, 0])], 3).unwrap();
        let ann = lat.annihilator();
        assert_eq!(ann.len(), 2);
        assert!(ann.iter().all(|y| y[0] == BigInt::from(0)));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn machine_integers_work_too() {
        let m = Matrix::<i64>::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors, vec![2, 4]);
        assert!(s.verify(&m));
    }
}
