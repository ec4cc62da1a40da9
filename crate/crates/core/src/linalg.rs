//! Dense exact linear algebra over a [`FieldCtx`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{FieldCtx, QNum};

/// Dense row-major matrix of field elements sharing one [`FieldCtx`].
///
/// Zero-sized dimensions are allowed so that a trivial kernel can be
/// represented as an `N x 0` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    ctx: FieldCtx,
    data: Vec<QNum>,
}

impl QMatrix {
    pub fn new(ctx: FieldCtx, rows: usize, cols: usize, data: Vec<QNum>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries given for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if let Some(bad) = data.iter().find(|x| x.ctx() != ctx) {
            return Err(Error::FieldMismatch {
                left: ctx.to_string(),
                right: bad.ctx().to_string(),
            });
        }
        Ok(QMatrix { rows, cols, ctx, data })
    }

    pub fn zeros(ctx: FieldCtx, rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            ctx,
            data: vec![QNum::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: FieldCtx, n: usize) -> Self {
        let mut m = QMatrix::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, QNum::one(ctx));
        }
        m
    }

    /// Row-major integer entries.
    pub fn from_ints(ctx: FieldCtx, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        let data = entries.iter().map(|&x| QNum::from_int(ctx, x)).collect();
        QMatrix::new(ctx, rows, cols, data)
    }

    pub fn from_rows(ctx: FieldCtx, rows: Vec<Vec<QNum>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".to_string()));
        }
        QMatrix::new(ctx, r, c, rows.into_iter().flatten().collect())
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(ctx: FieldCtx, rows: usize, columns: &[Vec<QNum>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns of unequal length".to_string()));
        }
        let mut m = QMatrix::zeros(ctx, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                if x.ctx() != ctx {
                    return Err(Error::FieldMismatch {
                        left: ctx.to_string(),
                        right: x.ctx().to_string(),
                    });
                }
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn entries(&self) -> &[QNum] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &QNum {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: QNum) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> Vec<QNum> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<QNum> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<QNum>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.ctx, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.ctx != other.ctx {
            return Err(Error::FieldMismatch {
                left: self.ctx.to_string(),
                right: other.ctx.to_string(),
            });
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = QNum::zero(self.ctx);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Submatrix formed by the given rows (in the given order).
    pub fn select_rows(&self, rows: &[usize]) -> Result<QMatrix> {
        if let Some(&bad) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::IndexOutOfRange(format!("row {} of {}", bad + 1, self.rows)));
        }
        let data = rows.iter().flat_map(|&r| self.row(r)).collect();
        Ok(QMatrix {
            rows: rows.len(),
            cols: self.cols,
            ctx: self.ctx,
            data,
        })
    }

    /// Submatrix formed by the given columns (in the given order).
    pub fn select_cols(&self, cols: &[usize]) -> Result<QMatrix> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange(format!("column {} of {}", bad + 1, self.cols)));
        }
        let mut out = QMatrix::zeros(self.ctx, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        Ok(out)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.rows != other.rows || self.ctx != other.ctx {
            return Err(Error::Dimension("hstack needs equal row counts and fields".to_string()));
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        QMatrix::from_columns(self.ctx, self.rows, &cols)
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.cols || self.ctx != other.ctx {
            return Err(Error::Dimension("vstack needs equal column counts and fields".to_string()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(QMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            ctx: self.ctx,
            data,
        })
    }

    /// Entrywise Galois conjugate.
    pub fn conj(&self) -> QMatrix {
        self.map(QNum::conj)
    }

    pub fn map(&self, f: impl Fn(&QNum) -> QNum) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Same entries viewed in another field (entries must fit).
    pub fn with_ctx(&self, ctx: FieldCtx) -> Result<QMatrix> {
        let data = self.data.iter().map(|x| x.with_ctx(ctx)).collect::<Result<Vec<_>>>()?;
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            ctx,
            data,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QNum::is_zero)
    }

    pub fn det(&self) -> Result<QNum> {
        det(self)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Sorted set of distinct indices (0-based internally, 1-based in display).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// From 0-based indices; sorts and rejects duplicates.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition("index set has repeated elements".to_string()));
        }
        Ok(IndexSet(indices))
    }

    /// From 1-based indices as written by users.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::IndexOutOfRange("indices are 1-based".to_string()));
        }
        IndexSet::new(indices.iter().map(|i| i - 1).collect())
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// All `k`-subsets of `{0, .., n-1}` in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<IndexSet> {
        Combinations::new(n, k).map(IndexSet).collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Lexicographic iterator over the `k`-subsets of `{0, .., n-1}`.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

/// `C(n, k)` as `u128` (saturating).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Determinant. Over `Q` rows are scaled to integers and reduced with the
/// fraction-free Bareiss scheme; over quadratic fields ordinary elimination
/// with exact division is used.
pub fn det(m: &QMatrix) -> Result<QNum> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if m.rows == 0 {
        return Ok(QNum::one(m.ctx));
    }
    if m.ctx.is_rational() {
        Ok(QNum::from_rational(m.ctx, det_rational(m)))
    } else {
        Ok(det_gauss(m))
    }
}

fn det_rational(m: &QMatrix) -> BigRational {
    let n = m.rows;
    let mut scale = BigInt::one();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for r in 0..n {
        let l = (0..n).fold(BigInt::one(), |acc, c| acc.lcm(m.get(r, c).a().denom()));
        rows.push(
            (0..n)
                .map(|c| {
                    let x = m.get(r, c).a();
                    x.numer() * (&l / x.denom())
                })
                .collect(),
        );
        scale *= l;
    }
    BigRational::new(bareiss_det(rows), scale)
}

/// Fraction-free determinant of a square integer matrix.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank of an integer matrix given as rows.
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..nrows {
            for j in c + 1..ncols {
                let v = (&a[i][j] * &a[rank][c] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

fn det_gauss(m: &QMatrix) -> QNum {
    let n = m.rows;
    let mut a = m.data.clone();
    let mut det = QNum::one(m.ctx);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i * n + k].is_zero()) else {
            return QNum::zero(m.ctx);
        };
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k].clone();
        det = &det * &pivot;
        let inv = pivot.inv().expect("nonzero pivot");
        for i in k + 1..n {
            if a[i * n + k].is_zero() {
                continue;
            }
            let f = &a[i * n + k] * &inv;
            for j in k + 1..n {
                let v = &a[i * n + j] - &(&f * &a[k * n + j]);
                a[i * n + j] = v;
            }
        }
    }
    det
}

/// Reduced row echelon form with unit pivots. Returns the reduced matrix and
/// the pivot columns in increasing order.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(r * cols + j, p * cols + j);
            }
        }
        let inv = a.get(r, c).inv().expect("nonzero pivot");
        for j in c..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in c..cols {
                let v = a.get(i, j) - &(&f * a.get(r, j));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &QMatrix) -> usize {
    rref(m).1.len()
}

pub fn inverse(m: &QMatrix) -> Result<QMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".to_string()));
    }
    let n = m.rows;
    let aug = m.hstack(&QMatrix::identity(m.ctx, n))?;
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    red.select_cols(&(n..2 * n).collect::<Vec<_>>())
}

/// Basis of `{x : m x = 0}` as the columns of a `cols(m) x (cols(m) - rank)`
/// matrix; one column per free variable in increasing order, with that
/// variable set to 1.
pub fn kernel_basis(m: &QMatrix) -> QMatrix {
    let (red, pivots) = rref(m);
    let n = m.cols;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut out = QMatrix::zeros(m.ctx, n, free.len());
    for (j, &f) in free.iter().enumerate() {
        out.set(f, j, QNum::one(m.ctx));
        for (i, &p) in pivots.iter().enumerate() {
            out.set(p, j, -red.get(i, f));
        }
    }
    out
}

/// Columns of `m` that form a basis of its column space (first independent
/// columns, left to right).
pub fn column_basis(m: &QMatrix) -> QMatrix {
    let (_, pivots) = rref(m);
    m.select_cols(&pivots).expect("pivot columns are in range")
}

/// Determinant of the submatrix with the given rows and columns.
pub fn minor(m: &QMatrix, rows: &IndexSet, cols: &IndexSet) -> Result<QNum> {
    if rows.len() != cols.len() {
        return Err(Error::Dimension(format!(
            "minor with {} rows and {} columns",
            rows.len(),
            cols.len()
        )));
    }
    let sub = m.select_rows(rows.as_slice())?.select_cols(cols.as_slice())?;
    det(&sub)
}

/// Plücker coordinates of the column space of an `N x L` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrassmannVector {
    pub ambient: usize,
    pub dim: usize,
    pub ctx: FieldCtx,
    /// Indexed by the `L`-subsets of rows in lexicographic order.
    pub coords: Vec<QNum>,
}

impl GrassmannVector {
    pub fn index_sets(&self) -> Vec<IndexSet> {
        IndexSet::all(self.ambient, self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(QNum::is_zero)
    }
}

pub fn grassmann(m: &QMatrix) -> Result<GrassmannVector> {
    grassmann_with(m, Exec::default())
}

/// Each coordinate is the determinant of the rows `I` (increasing order) of
/// `m`, computed independently per index set.
pub fn grassmann_with(m: &QMatrix, exec: Exec) -> Result<GrassmannVector> {
    if m.rows < m.cols {
        return Err(Error::Dimension(format!(
            "Grassmann coordinates need rows >= cols, got {}x{}",
            m.rows, m.cols
        )));
    }
    let sets: Vec<Vec<usize>> = Combinations::new(m.rows, m.cols).collect();
    let coords = exec
        .map(&sets, |rows| det(&m.select_rows(rows).expect("in range")))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(GrassmannVector {
        ambient: m.rows,
        dim: m.cols,
        ctx: m.ctx,
        coords,
    })
}

/// Upper-triangular Hermite normal form `[[a, b], [0, c]]` of the `Z`-module
/// spanned by integer column vectors in `Z^2`, with `a, c > 0` and
/// `0 <= b < a`. The module index in `Z^2` is `a * c`.
pub fn hnf2(columns: &[(BigInt, BigInt)]) -> Result<[[BigInt; 2]; 2]> {
    let mut pivot: Option<(BigInt, BigInt)> = None;
    let mut a = BigInt::zero();
    for (x, y) in columns {
        if y.is_zero() {
            a = a.gcd(x);
            continue;
        }
        match pivot.take() {
            None => pivot = Some((x.clone(), y.clone())),
            Some((px, py)) => {
                let e = py.extended_gcd(y);
                let g = e.gcd;
                let nx = &e.x * &px + &e.y * x;
                let rem_x = (&py / &g) * x - (y / &g) * &px;
                a = a.gcd(&rem_x);
                pivot = Some((nx, g));
            }
        }
    }
    let Some((mut px, mut py)) = pivot else {
        return Err(Error::RankDeficient { expected: 2, found: usize::from(!a.is_zero()) });
    };
    if a.is_zero() {
        return Err(Error::RankDeficient { expected: 2, found: 1 });
    }
    if py.is_negative() {
        px = -px;
        py = -py;
    }
    let b = px.mod_floor(&a);
    Ok([[a, b], [BigInt::zero(), py]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldCtx {
        FieldCtx::rational()
    }

    fn ints(rows: usize, cols: usize, e: &[i64]) -> QMatrix {
        QMatrix::from_ints(q(), rows, cols, e).unwrap()
    }

    fn example_a() -> QMatrix {
        ints(4, 3, &[1, 2, 3, 4, 3, 1, 5, 2, 1, 2, 1, 3])
    }

    // Independent Laplace expansion along the first row.
    fn cofactor_det(m: &QMatrix) -> QNum {
        let n = m.rows();
        if n == 0 {
            return QNum::one(m.ctx());
        }
        let mut acc = QNum::zero(m.ctx());
        for c in 0..n {
            let rest_rows: Vec<usize> = (1..n).collect();
            let rest_cols: Vec<usize> = (0..n).filter(|&j| j != c).collect();
            let sub = m.select_rows(&rest_rows).unwrap().select_cols(&rest_cols).unwrap();
            let term = m.get(0, c) * &cofactor_det(&sub);
            acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn small_determinants() {
        assert!(det(&QMatrix::identity(q(), 4)).unwrap().is_one());
        assert_eq!(det(&ints(2, 2, &[1, 2, 3, 4])).unwrap(), QNum::from_int(q(), -2));
        let aj = ints(3, 3, &[1, 2, 3, 4, 3, 1, 5, 2, 1]);
        let oracle = cofactor_det(&aj);
        assert_eq!(oracle, QNum::from_int(q(), -18));
        assert_eq!(det(&aj).unwrap(), oracle);
        assert!(det(&ints(2, 3, &[1, 2, 3, 4, 5, 6])).is_err());
    }

    #[test]
    fn quadratic_determinant_matches_cofactor() {
        let g = FieldCtx::quadratic(-1).unwrap();
        let e = |a, b| QNum::quad(g, a, b).unwrap();
        let m = QMatrix::from_rows(
            g,
            vec![
                vec![e(1, 1), e(0, 2), e(3, 0)],
                vec![e(2, -1), e(1, 0), e(0, 1)],
                vec![e(0, 0), e(4, 1), e(-1, -1)],
            ],
        )
        .unwrap();
        assert_eq!(det(&m).unwrap(), cofactor_det(&m));
    }

    #[test]
    fn rank_inverse_kernel() {
        let a = example_a();
        assert_eq!(rank(&a), 3);
        let k = kernel_basis(&ints(1, 2, &[1, 1]));
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![QNum::from_int(q(), -1), QNum::from_int(q(), 1)]);
        let aj = ints(3, 3, &[1, 2, 3, 4, 3, 1, 5, 2, 1]);
        let inv = inverse(&aj).unwrap();
        assert_eq!(aj.mul(&inv).unwrap(), QMatrix::identity(q(), 3));
        assert_eq!(inverse(&ints(2, 2, &[1, 2, 2, 4])), Err(Error::Singular));
        let trivial = kernel_basis(&QMatrix::identity(q(), 3));
        assert_eq!((trivial.rows(), trivial.cols()), (3, 0));
    }

    #[test]
    fn minors_of_the_worked_example() {
        let a = example_a();
        let cols = IndexSet::full(3);
        for rows in IndexSet::all(4, 3) {
            let sub = a.select_rows(rows.as_slice()).unwrap();
            assert_eq!(minor(&a, &rows, &cols).unwrap(), cofactor_det(&sub));
        }
        let g = grassmann(&a).unwrap();
        assert_eq!(g.coords, vec![QNum::from_int(q(), -18); 4]);
        let zero_row = ints(3, 2, &[0, 0, 1, 2, 3, 5]);
        let r = IndexSet::new(vec![0, 2]).unwrap();
        assert!(minor(&zero_row, &r, &IndexSet::full(2)).unwrap().is_zero());
        assert!(minor(&a, &IndexSet::new(vec![0, 7]).unwrap(), &IndexSet::full(2)).is_err());
        assert!(minor(&a, &IndexSet::new(vec![0]).unwrap(), &IndexSet::full(2)).is_err());
        assert_eq!(minor(&aj(), &IndexSet::full(3), &IndexSet::full(3)).unwrap(), det(&aj()).unwrap());
        assert!(grassmann(&ints(2, 3, &[1, 2, 3, 4, 5, 6])).is_err());
    }

    fn aj() -> QMatrix {
        ints(3, 3, &[1, 2, 3, 4, 3, 1, 5, 2, 1])
    }

    #[test]
    fn combinations_lexicographic() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(binomial(14, 7), 3432);
        assert_eq!(IndexSet::new(vec![2, 0]).unwrap().to_string(), "{1,3}");
    }

    fn col(x: i64, y: i64) -> (BigInt, BigInt) {
        (BigInt::from(x), BigInt::from(y))
    }

    #[test]
    fn hnf_examples() {
        let h = hnf2(&[col(1, 0), col(0, 1), col(3, 5)]).unwrap();
        assert_eq!(h, [[1.into(), 0.into()], [0.into(), 1.into()]]);
        let h = hnf2(&[col(2, 0), col(0, 2)]).unwrap();
        assert_eq!(&h[0][0] * &h[1][1], BigInt::from(4));
        // (1+2i) * {1, i} in Z[i] coordinates: 1+2i and -2+i.
        let h = hnf2(&[col(1, 2), col(-2, 1)]).unwrap();
        assert_eq!(&h[0][0] * &h[1][1], BigInt::from(5));
        assert!(hnf2(&[col(1, 2), col(2, 4)]).is_err());
        assert!(hnf2(&[col(0, 0)]).is_err());
    }

    // Index of the module spanned by `gens` inside Z^2, counted as the number
    // of cosets: n*Z^2 lies in the module, so count the subgroup of (Z/n)^2.
    fn coset_count(gens: &[(i64, i64)], n: i64) -> i64 {
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![(0i64, 0i64)];
        seen.insert((0, 0));
        while let Some((x, y)) = frontier.pop() {
            for &(gx, gy) in gens {
                let p = ((x + gx).rem_euclid(n), (y + gy).rem_euclid(n));
                if seen.insert(p) {
                    frontier.push(p);
                }
            }
        }
        n * n / seen.len() as i64
    }

    #[test]
    fn hnf_index_matches_coset_count_for_gaussian_ideal() {
        let gens = [(1, 2), (-2, 1)];
        assert_eq!(coset_count(&gens, 5), 5);
        let h = hnf2(&[col(1, 2), col(-2, 1)]).unwrap();
        assert_eq!(&h[0][0] * &h[1][1], BigInt::from(coset_count(&gens, 5)));
    }

    fn small_matrix(max_n: usize) -> impl Strategy<Value = (usize, Vec<i64>)> {
        (1..=max_n).prop_flat_map(|n| (Just(n), prop::collection::vec(-6i64..=6, n * n)))
    }

    proptest! {
        #[test]
        fn det_multiplicative((n, e) in small_matrix(4), f in prop::collection::vec(-6i64..=6, 16)) {
            let a = ints(n, n, &e);
            let b = ints(n, n, &f[..n * n]);
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(det(&ab).unwrap(), &det(&a).unwrap() * &det(&b).unwrap());
            prop_assert_eq!(det(&a).unwrap(), cofactor_det(&a));
        }

        #[test]
        fn rank_of_transpose(rows in 1usize..5, cols in 1usize..5, e in prop::collection::vec(-3i64..=3, 16)) {
            let m = ints(rows, cols, &e[..rows * cols]);
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
            let k = kernel_basis(&m);
            prop_assert_eq!(k.cols(), cols - rank(&m));
            prop_assert!(m.mul(&k).unwrap().is_zero());
            let ints: Vec<Vec<BigInt>> = (0..rows)
                .map(|r| (0..cols).map(|c| m.get(r, c).a().numer().clone()).collect())
                .collect();
            prop_assert_eq!(integer_rank(&ints), rank(&m));
        }

        #[test]
        fn hadamard_determinant_bound((n, e) in small_matrix(4), den in 1i64..5) {
            let m = ints(n, n, &e).map(|x| x.scale(&BigRational::new(1.into(), den.into())));
            let d = det(&m).unwrap();
            let lhs = d.a() * d.a();
            let rhs = (0..n).fold(BigRational::one(), |acc, c| {
                acc * m.column(c).iter().fold(BigRational::zero(), |s, x| s + x.a() * x.a())
            });
            prop_assert!(lhs <= rhs);
        }

        #[test]
        fn grassmann_scales_by_det(e in prop::collection::vec(-5i64..=5, 10), g in prop::collection::vec(-3i64..=3, 4)) {
            let m = ints(5, 2, &e);
            let gm = ints(2, 2, &g);
            let dg = det(&gm).unwrap();
            let lhs = grassmann(&m.mul(&gm).unwrap()).unwrap();
            let rhs = grassmann(&m).unwrap();
            for (x, y) in lhs.coords.iter().zip(&rhs.coords) {
                prop_assert_eq!(x.clone(), &dg * y);
            }
        }

        #[test]
        fn hnf_index_is_abs_det(a in -9i64..=9, b in -9i64..=9, c in -9i64..=9, d in -9i64..=9) {
            let det = (a * d - b * c).abs();
            let r = hnf2(&[col(a, c), col(b, d)]);
            if det == 0 {
                prop_assert!(r.is_err());
            } else {
                let h = r.unwrap();
                prop_assert_eq!(&h[0][0] * &h[1][1], BigInt::from(det));
                prop_assert!(h[0][1] >= BigInt::zero() && h[0][1] < h[0][0]);
                prop_assert_eq!(coset_count(&[(a, c), (b, d)], det), det);
            }
        }
    }
}
