//! Integer sensing matrices and the many-bases construction.
//!
//! An `L x M` integer matrix is full-spark when every `L x L` column
//! selection is nonsingular, and `s`-sparse-sensing when every `s` columns
//! are independent. Multiplying a small-height basis `W` of a subspace by a
//! full-spark matrix gives `M` vectors of which any `L` form a basis.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{sparse_basis_with, BasisOptions, BasisReport, PivotStrategy};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::FieldCtx;
use crate::height::{height_vector, ExactHeight};
use crate::linalg::{bareiss_det, binomial, integer_rank, rank, Combinations, QMatrix};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries given for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    /// `max |entry|`.
    pub fn sup_norm(&self) -> u64 {
        self.data.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn to_qmatrix(&self, ctx: FieldCtx) -> QMatrix {
        QMatrix::from_ints(ctx, self.rows, self.cols, &self.data).expect("dimensions match")
    }

    fn column_block(&self, cols: &[usize]) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| cols.iter().map(|&c| BigInt::from(self.get(r, c))).collect())
            .collect()
    }

    /// True when the selected columns are linearly independent.
    pub fn columns_independent(&self, cols: &[usize]) -> bool {
        if cols.len() > self.rows {
            return false;
        }
        let block = self.column_block(cols);
        if cols.len() == self.rows {
            return bareiss_det(block) != BigInt::from(0);
        }
        integer_rank(&block) == cols.len()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                let entries: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
                format!("[{}]", entries.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensingMethod {
    Vandermonde,
    Search,
    UserProvided,
}

#[derive(Debug, Clone)]
pub struct SensingMatrix {
    pub matrix: IntMatrix,
    pub sup_norm: u64,
    /// Every `sparsity` columns are independent (`= rows` for full spark).
    pub sparsity: usize,
    pub verified: bool,
    pub method: SensingMethod,
    pub seed: Option<u64>,
    /// Index of the accepted search trial.
    pub trial: Option<u64>,
}

impl SensingMatrix {
    /// Wraps a user matrix, verifying it at the given sparsity level.
    pub fn from_matrix(matrix: IntMatrix, sparsity: usize) -> Self {
        let verified = verify_sensing(&matrix, sparsity);
        SensingMatrix {
            sup_norm: matrix.sup_norm(),
            matrix,
            sparsity,
            verified,
            method: SensingMethod::UserProvided,
            seed: None,
            trial: None,
        }
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols
    }

    pub fn is_full_spark(&self) -> bool {
        self.verified && self.sparsity == self.rows()
    }
}

/// Column `j` (1-based) is `(1, j, j^2, .., j^(L-1))`; nonsingular minors by
/// the Vandermonde determinant with distinct nodes.
pub fn vandermonde_sensing(rows: usize, cols: usize) -> Result<SensingMatrix> {
    if rows == 0 || rows >= cols {
        return Err(Error::Precondition(format!("need 1 <= L < M, got L = {}, M = {}", rows, cols)));
    }
    let mut data = vec![0i64; rows * cols];
    for c in 0..cols {
        let node = c as i64 + 1;
        let mut p: i64 = 1;
        for r in 0..rows {
            data[r * cols + c] = p;
            if r + 1 < rows {
                p = p
                    .checked_mul(node)
                    .ok_or_else(|| Error::Precondition("Vandermonde entries overflow i64".to_string()))?;
            }
        }
    }
    let matrix = IntMatrix::new(rows, cols, data)?;
    let verified = verify_sensing(&matrix, rows);
    Ok(SensingMatrix {
        sup_norm: matrix.sup_norm(),
        matrix,
        sparsity: rows,
        verified,
        method: SensingMethod::Vandermonde,
        seed: None,
        trial: None,
    })
}

pub fn verify_sensing(m: &IntMatrix, sparsity: usize) -> bool {
    verify_sensing_with(m, sparsity, Exec::default())
}

/// Exhaustively checks that every `sparsity` columns are independent.
pub fn verify_sensing_with(m: &IntMatrix, sparsity: usize, exec: Exec) -> bool {
    if sparsity == 0 {
        return true;
    }
    if sparsity > m.rows || sparsity > m.cols {
        return false;
    }
    const CHUNK: usize = 4096;
    let mut combos = Combinations::new(m.cols, sparsity);
    loop {
        let chunk: Vec<Vec<usize>> = combos.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return true;
        }
        if !exec.all(&chunk, |cols| m.columns_independent(cols)) {
            return false;
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchParams {
    pub rows: usize,
    pub cols: usize,
    pub max_abs: u64,
    /// Required independence level; `rows` asks for full spark.
    pub sparsity: usize,
    pub seed: u64,
    pub max_tries: u64,
    pub exec: Exec,
}

impl SearchParams {
    pub fn full_spark(rows: usize, cols: usize, max_abs: u64, seed: u64) -> Self {
        SearchParams {
            rows,
            cols,
            max_abs,
            sparsity: rows,
            seed,
            max_tries: 100_000,
            exec: Exec::default(),
        }
    }
}

/// The candidate examined by trial `trial`; depends only on `(seed, trial)`.
pub fn search_candidate(params: &SearchParams, trial: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(trial);
    let t = params.max_abs as i64;
    let data = (0..params.rows * params.cols).map(|_| rng.gen_range(-t..=t)).collect();
    IntMatrix::new(params.rows, params.cols, data).expect("dimensions match")
}

/// Random search with entries uniform in `[-T, T]`; returns the first
/// accepted trial (lowest index), so the result is the same in every mode.
/// `None` means the budget ran out, not that no such matrix exists.
pub fn search_sensing(params: &SearchParams) -> Option<SensingMatrix> {
    if params.rows == 0 || params.cols <= params.rows && params.sparsity == params.rows {
        return None;
    }
    if params.max_abs == 0 || params.max_abs > i64::MAX as u64 {
        return None;
    }
    const CHUNK: u64 = 256;
    let mut start = 0;
    while start < params.max_tries {
        let end = (start + CHUNK).min(params.max_tries);
        let hit = params.exec.find_first(start, end, |trial| {
            let cand = search_candidate(params, trial);
            verify_sensing_with(&cand, params.sparsity, Exec::Sequential).then_some(cand)
        });
        if let Some((trial, matrix)) = hit {
            return Some(SensingMatrix {
                sup_norm: matrix.sup_norm(),
                matrix,
                sparsity: params.sparsity,
                verified: true,
                method: SensingMethod::Search,
                seed: Some(params.seed),
                trial: Some(trial),
            });
        }
        start = end;
    }
    None
}

/// Smallest `T` with `T^L >= (2M)^{L-1}`, i.e. `ceil((2M)^{(L-1)/L})`.
pub fn small_regime_sup_norm(rows: usize, cols: usize) -> u64 {
    let target = BigInt::from(2 * cols).pow(rows.saturating_sub(1) as u32);
    (1u64..)
        .find(|&t| BigInt::from(t).pow(rows as u32) >= target)
        .expect("unbounded search")
}

#[derive(Debug, Clone, Copy)]
pub struct ManyBasesOptions {
    /// Maximum number of `L`-subsets checked; beyond it a seeded sample of
    /// this size is checked instead.
    pub subset_budget: u64,
    pub sample_seed: u64,
    pub basis: BasisOptions,
}

impl Default for ManyBasesOptions {
    fn default() -> Self {
        ManyBasesOptions {
            subset_budget: 100_000,
            sample_seed: 0,
            basis: BasisOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ManyBasesResult {
    /// Small-height basis `W` of the source subspace, with its report.
    pub basis: BasisReport,
    pub sensing: SensingMatrix,
    /// `W * A`; its columns are the vectors `y_i`.
    pub vectors: QMatrix,
    pub heights: Vec<ExactHeight>,
    /// `L^{3/2} T H(Z)^L`.
    pub bound: ExactHeight,
    /// `L^{3/2} T prod_j H(w_j)`, never larger than `bound`.
    pub product_bound: ExactHeight,
    pub within_bound: Vec<bool>,
    pub within_product_bound: Vec<bool>,
    pub subsets_checked: u128,
    pub sampled: bool,
    pub all_subsets_are_bases: bool,
    /// `T^L <= (2M)^{L-1}`.
    pub sup_norm_in_small_regime: bool,
}

impl ManyBasesResult {
    pub fn all_assertions_hold(&self) -> bool {
        self.all_subsets_are_bases
            && self.within_bound.iter().all(|&b| b)
            && self.within_product_bound.iter().all(|&b| b)
    }
}

pub fn many_bases(z: &QMatrix, sensing: &SensingMatrix) -> Result<ManyBasesResult> {
    many_bases_with(z, sensing, ManyBasesOptions::default())
}

pub fn many_bases_with(z: &QMatrix, sensing: &SensingMatrix, opts: ManyBasesOptions) -> Result<ManyBasesResult> {
    let (l, m) = (z.cols(), sensing.cols());
    if sensing.rows() != l {
        return Err(Error::Dimension(format!(
            "sensing matrix has {} rows but the subspace has dimension {}",
            sensing.rows(),
            l
        )));
    }
    if m <= l {
        return Err(Error::Precondition(format!("need M > L, got M = {}, L = {}", m, l)));
    }
    if !(sensing.sparsity == l && (sensing.verified || verify_sensing(&sensing.matrix, l))) {
        return Err(Error::Precondition("sensing matrix is not full-spark".to_string()));
    }
    let ctx = z.ctx();
    let basis = sparse_basis_with(z, &PivotStrategy::Lexicographic, opts.basis)?;
    let vectors = basis.basis.mul(&sensing.matrix.to_qmatrix(ctx))?;

    let total = binomial(m, l);
    let sampled = total > opts.subset_budget as u128;
    let subsets: Vec<Vec<usize>> = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.sample_seed);
        (0..opts.subset_budget)
            .map(|_| {
                let mut s = sample(&mut rng, m, l).into_vec();
                s.sort_unstable();
                s
            })
            .collect()
    } else {
        Combinations::new(m, l).collect()
    };
    let all_subsets_are_bases = opts.basis.exec.all(&subsets, |cols| {
        rank(&vectors.select_cols(cols).expect("in range")) == l
    });

    let heights = vectors
        .columns()
        .iter()
        .map(|c| height_vector(c))
        .collect::<Result<Vec<_>>>()?;
    let t = BigRational::from_integer(BigInt::from(sensing.sup_norm));
    let l_big = BigRational::from_integer(BigInt::from(l));
    let constant = ExactHeight::from_square(ctx, &l_big * &l_big * &l_big * &t * &t)?;
    let bound = constant.mul(&basis.subspace_height.pow(l as u32));
    let product_bound = constant.mul(&ExactHeight::product(ctx, &basis.column_heights));
    let within_bound = heights.iter().map(|h| *h <= bound).collect();
    let within_product_bound = heights.iter().map(|h| *h <= product_bound).collect();

    let lhs = BigInt::from(sensing.sup_norm).pow(l as u32);
    let rhs = BigInt::from(2 * m).pow(l as u32 - 1);

    Ok(ManyBasesResult {
        basis,
        sensing: sensing.clone(),
        vectors,
        heights,
        bound,
        product_bound,
        within_bound,
        within_product_bound,
        subsets_checked: subsets.len() as u128,
        sampled,
        all_subsets_are_bases,
        sup_norm_in_small_regime: lhs <= rhs,
    })
}

/// Builds the subspace spanned by the rows of `a`, takes its sparse basis,
/// and reports whether every tabulated inclusion `I1 ⊊ I2` has strictly
/// increasing height.
pub fn strict_monotonicity(a: &IntMatrix) -> Result<bool> {
    strict_monotonicity_with(a, BasisOptions::default())
}

pub fn strict_monotonicity_with(a: &IntMatrix, opts: BasisOptions) -> Result<bool> {
    let z = a.to_qmatrix(FieldCtx::rational()).transpose();
    let rep = sparse_basis_with(&z, &PivotStrategy::Lexicographic, opts)?;
    Ok(rep.monotonicity_verified && rep.equality_witnesses.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: usize, cols: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::new(rows, cols, e.to_vec()).unwrap()
    }

    // Laplace expansion on i64, independent of the BigInt elimination.
    fn cofactor(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|c| {
                let sub: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * cofactor(&sub)
            })
            .sum()
    }

    #[test]
    fn small_regime_threshold() {
        assert_eq!(small_regime_sup_norm(3, 6), 6);
        assert_eq!(small_regime_sup_norm(1, 9), 1);
        assert_eq!(small_regime_sup_norm(2, 8), 4);
        assert_eq!(small_regime_sup_norm(2, 9), 5);
    }

    #[test]
    fn small_vandermonde() {
        let v = vandermonde_sensing(2, 3).unwrap();
        assert_eq!(v.matrix, im(2, 3, &[1, 1, 1, 1, 2, 3]));
        assert!(v.verified);
        assert_eq!(v.sup_norm, 3);
        let ones = vandermonde_sensing(1, 4).unwrap();
        assert_eq!(ones.matrix, im(1, 4, &[1, 1, 1, 1]));
        assert!(ones.verified);
        assert!(vandermonde_sensing(3, 3).is_err());
    }

    #[test]
    fn vandermonde_minors_by_cofactor_oracle() {
        let v = vandermonde_sensing(3, 5).unwrap();
        assert_eq!(v.sup_norm, 25);
        let mut count = 0;
        for cols in Combinations::new(5, 3) {
            let block: Vec<Vec<i64>> = (0..3).map(|r| cols.iter().map(|&c| v.matrix.get(r, c)).collect()).collect();
            assert_ne!(cofactor(&block), 0);
            count += 1;
        }
        assert_eq!(count, 10);
        assert!(v.verified);
    }

    #[test]
    fn verification() {
        assert!(verify_sensing(&im(2, 3, &[1, 1, 1, 1, 2, 3]), 2));
        assert!(!verify_sensing(&im(2, 3, &[1, 1, 1, 1, 2, 1]), 2));
        assert!(verify_sensing(&im(2, 3, &[1, 1, 1, 1, 2, 1]), 1));
        assert!(!verify_sensing(&im(2, 3, &[1, 0, 1, 1, 0, 3]), 1));
        assert!(!verify_sensing(&im(2, 3, &[1, 1, 1, 1, 2, 3]), 3));
    }

    #[test]
    fn search_is_deterministic() {
        let p = SearchParams::full_spark(2, 3, 2, 7);
        let a = search_sensing(&p).unwrap();
        let b = search_sensing(&SearchParams { exec: Exec::Sequential, ..p }).unwrap();
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(a.trial, b.trial);
        assert!(verify_sensing(&a.matrix, 2));
        assert!(a.sup_norm <= 2);
        assert_eq!(search_candidate(&p, a.trial.unwrap()), a.matrix);
    }

    #[test]
    fn search_with_zero_range_finds_nothing() {
        let p = SearchParams::full_spark(2, 4, 0, 1);
        assert!(search_sensing(&p).is_none());
    }

    #[test]
    fn sparse_search() {
        let p = SearchParams {
            sparsity: 2,
            ..SearchParams::full_spark(4, 6, 2, 3)
        };
        let s = search_sensing(&p).unwrap();
        assert!(verify_sensing(&s.matrix, 2));
        assert!(s.sup_norm <= 2);
    }

    #[test]
    fn many_bases_on_worked_example() {
        let q = FieldCtx::rational();
        let z = QMatrix::from_ints(q, 4, 3, &[1, 2, 3, 4, 3, 1, 5, 2, 1, 2, 1, 3]).unwrap();
        let v = vandermonde_sensing(3, 5).unwrap();
        let res = many_bases(&z, &v).unwrap();
        assert_eq!(res.subsets_checked, 10);
        assert!(!res.sampled);
        assert!(res.all_assertions_hold());
        // 27 * 25^2 * 2^6
        assert_eq!(res.bound.mul(&ExactHeight::one(q)).value(), &BigRational::from_integer((27 * 625 * 64).into()));
        assert!(!res.sup_norm_in_small_regime);
    }

    #[test]
    fn many_bases_line() {
        let q = FieldCtx::rational();
        let z = QMatrix::from_ints(q, 3, 1, &[2, -4, 6]).unwrap();
        let s = SensingMatrix::from_matrix(im(1, 3, &[1, -2, 5]), 1);
        let res = many_bases(&z, &s).unwrap();
        assert!(res.heights.iter().all(|h| *h == res.basis.column_heights[0]));
        assert!(res.all_assertions_hold());
    }

    #[test]
    fn strictness() {
        assert!(strict_monotonicity(&im(2, 3, &[1, 1, 1, 1, 2, 3])).unwrap());
        // Rows (1,0,0) and (0,1,1): the first basis vector is e1.
        assert!(!strict_monotonicity(&im(2, 3, &[1, 0, 0, 0, 1, 1])).unwrap());
    }

    #[test]
    fn rejects_non_spark_sources() {
        let q = FieldCtx::rational();
        let z = QMatrix::from_ints(q, 3, 2, &[1, 0, 0, 1, 1, 1]).unwrap();
        let bad = SensingMatrix::from_matrix(im(2, 3, &[1, 2, 1, 1, 2, 1]), 2);
        assert!(many_bases(&z, &bad).is_err());
    }
}
