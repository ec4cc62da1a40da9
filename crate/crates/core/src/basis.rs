//! Sparse small-height bases `X = A * A_J^{-1}`.
//!
//! For an `N x L` basis matrix `A` and a nonsingular `L x L` row selection
//! `A_J`, the columns of `X` span the same space, the rows `J` of `X` form the
//! identity (so every column is `(N - L + 1)`-sparse), and the heights of the
//! spans of column subsets increase along inclusion, bounded by `H(Z)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{FieldCtx, QNum};
use crate::height::{height_subspace_with, height_vector, ExactHeight};
use crate::linalg::{det, inverse, rank, IndexSet, QMatrix};

pub const DEFAULT_SUBSET_BUDGET: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PivotStrategy {
    /// First nonsingular row selection in lexicographic order.
    Lexicographic,
    Explicit(IndexSet),
}

#[derive(Debug, Clone, Copy)]
pub struct BasisOptions {
    /// Exhaustive subset tables are built when `2^L` does not exceed this.
    pub subset_budget: u64,
    pub exec: Exec,
}

impl Default for BasisOptions {
    fn default() -> Self {
        BasisOptions {
            subset_budget: DEFAULT_SUBSET_BUDGET,
            exec: Exec::default(),
        }
    }
}

/// A pair `I1 ⊊ I2` of column subsets (bitmasks, bit `i` = column `i + 1`)
/// with equal span heights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityWitness {
    pub smaller: u64,
    pub larger: u64,
    /// 0-based columns in `I2 \ I1` that are standard basis vectors.
    pub standard_columns: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BasisReport {
    pub input: QMatrix,
    pub pivot_set: IndexSet,
    pub basis: QMatrix,
    pub column_heights: Vec<ExactHeight>,
    pub column_sparsity: Vec<usize>,
    pub subspace_height: ExactHeight,
    /// Heights of `Y_I` keyed by the bitmask of `I`.
    pub subset_heights: BTreeMap<u64, ExactHeight>,
    /// True when only singletons and the full set were tabulated.
    pub partial: bool,
    pub monotonicity_verified: bool,
    pub equality_witnesses: Vec<EqualityWitness>,
}

impl BasisReport {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    /// Rows `J` of `X` form the identity.
    pub fn pivot_rows_are_identity(&self) -> bool {
        let l = self.dim();
        self.pivot_set.as_slice().iter().enumerate().all(|(i, &r)| {
            (0..l).all(|c| {
                let x = self.basis.get(r, c);
                if c == i {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn sparsity_holds(&self) -> bool {
        let bound = self.ambient() - self.dim() + 1;
        self.column_sparsity.iter().all(|&s| s <= bound)
    }

    pub fn column_heights_bounded(&self) -> bool {
        self.column_heights.iter().all(|h| *h <= self.subspace_height)
    }

    /// `H(Y_I) <= H(Z)` for every tabulated `I`.
    pub fn subsets_bounded(&self) -> bool {
        self.subset_heights.values().all(|h| *h <= self.subspace_height)
    }

    /// Every structural conclusion of the construction.
    pub fn all_assertions_hold(&self) -> bool {
        self.pivot_rows_are_identity()
            && self.sparsity_holds()
            && self.column_heights_bounded()
            && self.subsets_bounded()
            && self.monotonicity_verified
            && check_equality_characterization(self)
    }

    pub fn standard_columns(&self) -> Vec<bool> {
        (0..self.dim())
            .map(|c| is_standard_basis_vector(&self.basis.column(c)))
            .collect()
    }
}

/// Exactly one nonzero entry, equal to 1.
pub fn is_standard_basis_vector(v: &[QNum]) -> bool {
    let mut nonzero = v.iter().filter(|x| !x.is_zero());
    matches!((nonzero.next(), nonzero.next()), (Some(x), None) if x.is_one())
}

pub fn select_pivot(a: &QMatrix, strategy: &PivotStrategy) -> Result<IndexSet> {
    let l = a.cols();
    let r = rank(a);
    if r < l {
        return Err(Error::RankDeficient { expected: l, found: r });
    }
    match strategy {
        PivotStrategy::Lexicographic => {
            // Greedy row selection yields the lexicographically first basis
            // of the row matroid.
            let mut chosen: Vec<usize> = Vec::with_capacity(l);
            for i in 0..a.rows() {
                if chosen.len() == l {
                    break;
                }
                chosen.push(i);
                if rank(&a.select_rows(&chosen)?) < chosen.len() {
                    chosen.pop();
                }
            }
            IndexSet::new(chosen)
        }
        PivotStrategy::Explicit(set) => {
            if set.len() != l {
                return Err(Error::Precondition(format!(
                    "pivot set {} has {} elements, expected {}",
                    set,
                    set.len(),
                    l
                )));
            }
            let sub = a.select_rows(set.as_slice())?;
            if det(&sub)?.is_zero() {
                return Err(Error::Singular);
            }
            Ok(set.clone())
        }
    }
}

pub fn sparse_basis(a: &QMatrix, strategy: &PivotStrategy) -> Result<BasisReport> {
    sparse_basis_with(a, strategy, BasisOptions::default())
}

pub fn sparse_basis_with(a: &QMatrix, strategy: &PivotStrategy, opts: BasisOptions) -> Result<BasisReport> {
    let (n, l) = (a.rows(), a.cols());
    if l == 0 || l >= n {
        return Err(Error::Precondition(format!(
            "need 1 <= L < N, got a {}x{} matrix",
            n, l
        )));
    }
    if l > 63 {
        return Err(Error::Precondition("at most 63 columns are supported".to_string()));
    }
    let pivot_set = select_pivot(a, strategy)?;
    let b = a.select_rows(pivot_set.as_slice())?;
    let basis = a.mul(&inverse(&b)?)?;

    let columns = basis.columns();
    let column_sparsity = columns
        .iter()
        .map(|c| c.iter().filter(|x| !x.is_zero()).count())
        .collect();
    let column_heights = columns
        .iter()
        .map(|c| height_vector(c))
        .collect::<Result<Vec<_>>>()?;
    let subspace_height = height_subspace_with(&basis, opts.exec)?;

    let full: u64 = (1u64 << l) - 1;
    let exhaustive = (1u64 << l) <= opts.subset_budget;
    let masks: Vec<u64> = if exhaustive {
        (1..=full).collect()
    } else {
        let mut m: Vec<u64> = (0..l).map(|i| 1u64 << i).collect();
        if !m.contains(&full) {
            m.push(full);
        }
        m
    };
    let heights = opts
        .exec
        .map(&masks, |&mask| {
            let cols = mask_to_columns(mask);
            height_subspace_with(&basis.select_cols(&cols)?, Exec::Sequential)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let subset_heights: BTreeMap<u64, ExactHeight> = masks.into_iter().zip(heights).collect();

    let standard: Vec<bool> = columns.iter().map(|c| is_standard_basis_vector(c)).collect();
    let mut monotone = true;
    let mut witnesses = Vec::new();
    for_each_proper_pair(&subset_heights, |m1, h1, m2, h2| {
        if h1 > h2 {
            monotone = false;
        } else if h1 == h2 {
            let diff = m2 & !m1;
            witnesses.push(EqualityWitness {
                smaller: m1,
                larger: m2,
                standard_columns: mask_to_columns(diff).into_iter().filter(|&c| standard[c]).collect(),
            });
        }
    });

    Ok(BasisReport {
        input: a.clone(),
        pivot_set,
        basis,
        column_heights,
        column_sparsity,
        subspace_height,
        subset_heights,
        partial: !exhaustive,
        monotonicity_verified: monotone,
        equality_witnesses: witnesses,
    })
}

/// 0-based column indices of the set bits.
pub fn mask_to_columns(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn for_each_proper_pair(
    table: &BTreeMap<u64, ExactHeight>,
    mut f: impl FnMut(u64, &ExactHeight, u64, &ExactHeight),
) {
    for (&m1, h1) in table {
        for (&m2, h2) in table {
            if m1 != m2 && m1 & !m2 == 0 {
                f(m1, h1, m2, h2);
            }
        }
    }
}

/// For every tabulated `I1 ⊊ I2`: heights are equal exactly when every
/// column in `I2 \ I1` is a standard basis vector.
pub fn check_equality_characterization(report: &BasisReport) -> bool {
    let standard = report.standard_columns();
    let mut ok = true;
    for_each_proper_pair(&report.subset_heights, |m1, h1, m2, h2| {
        let all_standard = mask_to_columns(m2 & !m1).iter().all(|&c| standard[c]);
        if (h1 == h2) != all_standard {
            ok = false;
        }
    });
    ok
}

/// The block pair `(A, A')` with
/// `A = [[1_{L-1}, 0], [0, 1], [U, V]]` and `A' = [[1_{L-1}], [0], [U]]`,
/// where `U` is `(N-L) x (L-1)` and `V` is `(N-L) x 1`.
pub fn block_pair(u: &QMatrix, v: &QMatrix) -> Result<(QMatrix, QMatrix)> {
    if u.rows() != v.rows() || v.cols() != 1 || u.ctx() != v.ctx() {
        return Err(Error::Dimension("U and V must have equal row counts and V one column".to_string()));
    }
    let ctx: FieldCtx = u.ctx();
    let l = u.cols() + 1;
    let top = QMatrix::identity(ctx, l);
    let a = top.vstack(&u.hstack(v)?)?;
    let cols: Vec<usize> = (0..l - 1).collect();
    let a_prime = a.select_cols(&cols)?;
    Ok((a, a_prime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::height::height_subspace;
    use num_rational::BigRational;

    fn q() -> FieldCtx {
        FieldCtx::rational()
    }

    fn ints(rows: usize, cols: usize, e: &[i64]) -> QMatrix {
        QMatrix::from_ints(q(), rows, cols, e).unwrap()
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn example() -> QMatrix {
        ints(4, 3, &[1, 2, 3, 4, 3, 1, 5, 2, 1, 2, 1, 3])
    }

    // First nonsingular selection by plain enumeration.
    fn brute_force_pivot(a: &QMatrix) -> Option<IndexSet> {
        IndexSet::all(a.rows(), a.cols())
            .into_iter()
            .find(|s| !det(&a.select_rows(s.as_slice()).unwrap()).unwrap().is_zero())
    }

    #[test]
    fn worked_example() {
        let a = example();
        let rep = sparse_basis(&a, &PivotStrategy::Lexicographic).unwrap();
        assert_eq!(rep.pivot_set.one_based(), vec![1, 2, 3]);
        assert_eq!(rep.basis, ints(4, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1, 1, -1, 1]));
        assert!(rep.column_heights.iter().all(|h| h.value() == &r(2)));
        assert_eq!(rep.subspace_height.value(), &r(4));
        for mask in [3u64, 5, 6] {
            assert_eq!(rep.subset_heights[&mask].value(), &r(3));
        }
        assert_eq!(rep.subset_heights.len(), 7);
        assert!(!rep.partial);
        assert!(rep.monotonicity_verified);
        assert!(rep.equality_witnesses.is_empty());
        assert!(check_equality_characterization(&rep));
        assert!(rep.all_assertions_hold());
        assert_eq!(rep.column_sparsity, vec![2, 2, 2]);
    }

    #[test]
    fn pivot_selection() {
        assert_eq!(select_pivot(&example(), &PivotStrategy::Lexicographic).unwrap(), IndexSet::full(3));
        let topped = ints(4, 2, &[1, 0, 0, 1, 7, 3, -2, 5]);
        assert_eq!(select_pivot(&topped, &PivotStrategy::Lexicographic).unwrap(), IndexSet::full(2));
        let zero_first = ints(3, 1, &[0, 4, 1]);
        assert_eq!(
            select_pivot(&zero_first, &PivotStrategy::Lexicographic).unwrap().one_based(),
            vec![2]
        );
        let awkward = ints(5, 3, &[1, 2, 3, 2, 4, 6, 0, 1, 1, 0, 2, 2, 1, 0, 0]);
        assert_eq!(
            select_pivot(&awkward, &PivotStrategy::Lexicographic).ok(),
            brute_force_pivot(&awkward)
        );
        let explicit = IndexSet::from_one_based(&[1, 2, 4]).unwrap();
        assert_eq!(
            select_pivot(&example(), &PivotStrategy::Explicit(explicit.clone())).unwrap(),
            explicit
        );
        let singular = IndexSet::from_one_based(&[1, 2]).unwrap();
        assert_eq!(
            select_pivot(&awkward, &PivotStrategy::Explicit(IndexSet::from_one_based(&[1, 2, 3]).unwrap())),
            Err(Error::Singular)
        );
        assert!(select_pivot(&example(), &PivotStrategy::Explicit(singular)).is_err());
        let deficient = ints(3, 2, &[1, 2, 2, 4, 3, 6]);
        assert!(matches!(
            select_pivot(&deficient, &PivotStrategy::Lexicographic),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn identity_over_zeros_gives_equalities_everywhere() {
        let a = ints(5, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0]);
        let rep = sparse_basis(&a, &PivotStrategy::Lexicographic).unwrap();
        assert_eq!(rep.basis, a);
        assert!(rep.subset_heights.values().all(|h| h.value() == &r(1)));
        assert!(rep.monotonicity_verified);
        assert!(check_equality_characterization(&rep));
        // All 12 proper pairs among the 7 subsets are equalities.
        assert_eq!(rep.equality_witnesses.len(), 12);
    }

    #[test]
    fn one_standard_column() {
        // Column 1 of X is e1, column 2 is not standard.
        let a = ints(4, 2, &[1, 0, 0, 1, 0, 0, 0, 1]);
        let rep = sparse_basis(&a, &PivotStrategy::Lexicographic).unwrap();
        assert_eq!(rep.standard_columns(), vec![true, false]);
        assert!(check_equality_characterization(&rep));
        let eq: Vec<(u64, u64)> = rep.equality_witnesses.iter().map(|w| (w.smaller, w.larger)).collect();
        assert_eq!(eq, vec![(2, 3)]);
        assert_eq!(rep.equality_witnesses[0].standard_columns, vec![0]);
    }

    #[test]
    fn explicit_pivot_also_satisfies_conclusions() {
        let a = example();
        for set in IndexSet::all(4, 3) {
            let rep = sparse_basis(&a, &PivotStrategy::Explicit(set)).unwrap();
            assert!(rep.all_assertions_hold());
            assert_eq!(rank(&a.hstack(&rep.basis).unwrap()), 3);
        }
    }

    #[test]
    fn budget_limits_table() {
        let opts = BasisOptions {
            subset_budget: 4,
            exec: Exec::Sequential,
        };
        let rep = sparse_basis_with(&example(), &PivotStrategy::Lexicographic, opts).unwrap();
        assert!(rep.partial);
        assert_eq!(rep.subset_heights.keys().copied().collect::<Vec<_>>(), vec![1, 2, 4, 7]);
        assert!(rep.all_assertions_hold());
    }

    #[test]
    fn preconditions() {
        assert!(sparse_basis(&QMatrix::identity(q(), 3), &PivotStrategy::Lexicographic).is_err());
        assert!(sparse_basis(&ints(3, 2, &[1, 2, 2, 4, 3, 6]), &PivotStrategy::Lexicographic).is_err());
    }

    #[test]
    fn block_pair_heights() {
        let u = ints(2, 2, &[3, -1, 2, 5]);
        let v = ints(2, 1, &[1, 0]);
        let (a, ap) = block_pair(&u, &v).unwrap();
        assert_eq!((a.rows(), a.cols(), ap.cols()), (5, 3, 2));
        assert!(height_subspace(&a).unwrap() > height_subspace(&ap).unwrap());
        let (a0, ap0) = block_pair(&u, &ints(2, 1, &[0, 0])).unwrap();
        assert_eq!(height_subspace(&a0).unwrap(), height_subspace(&ap0).unwrap());
    }
}
