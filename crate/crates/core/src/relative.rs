//! Rational kernels of matrices over a quadratic field.
//!
//! For `A` (`M x N` over `K = Q(sqrt d)`) the rational solutions of `A x = 0`
//! are the kernel of `A'`, the `2M x N` rational matrix stacking the
//! coefficients of the entries in the basis `(1, w)`. Their span `Z` has the
//! same height as the row space of `[A ; conj(A)]`, which is bounded by
//! `prod_m H(A_m)^2`.

use crate::basis::{sparse_basis_with, BasisOptions, BasisReport, PivotStrategy};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, QNum};
use crate::height::{height_subspace, height_vector, ExactHeight};
use crate::linalg::{kernel_basis, rank, QMatrix};

/// Degree of `K` over `Q`.
pub const RELATIVE_DEGREE: usize = 2;

#[derive(Debug, Clone)]
pub struct RelativeInstance {
    pub ctx: FieldCtx,
    pub matrix: QMatrix,
    /// Coefficients in `(1, w)`: `[A^(1) ; A^(2)]`, over `Q`.
    pub expanded: QMatrix,
    /// `[A ; conj(A)]`, over `K`.
    pub stacked: QMatrix,
    /// Columns form a basis of `ker(A) ∩ Q^N`.
    pub kernel: QMatrix,
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct RelativeReport {
    pub instance: RelativeInstance,
    /// `H(Z)`, over `Q`.
    pub kernel_height: ExactHeight,
    /// Height of the row space of the stacked matrix, over `K`.
    pub stacked_height: ExactHeight,
    /// `H(A_m)` for each row.
    pub row_heights: Vec<ExactHeight>,
    /// `prod_m H(A_m)^2`.
    pub bound_product: ExactHeight,
    pub heights_equal: bool,
    pub kernel_within_bound: bool,
    /// Every tabulated `H(Y_I)` is at most the bound.
    pub subsets_within_bound: bool,
    pub basis: BasisReport,
}

impl RelativeReport {
    pub fn all_assertions_hold(&self) -> bool {
        self.heights_equal
            && self.kernel_within_bound
            && self.subsets_within_bound
            && self.basis.all_assertions_hold()
    }
}

/// `[A^(1) ; A^(2)]` where `a_mn = a_mn^(1) + a_mn^(2) w`.
pub fn expand_over_base(a: &QMatrix) -> Result<QMatrix> {
    let ctx = a.ctx();
    if ctx.is_rational() {
        return Err(Error::Precondition("expansion needs a quadratic field".to_string()));
    }
    let q = FieldCtx::rational();
    let (m, n) = (a.rows(), a.cols());
    let mut out = QMatrix::zeros(q, RELATIVE_DEGREE * m, n);
    for r in 0..m {
        for c in 0..n {
            let (u, v) = a.get(r, c).integral_coords();
            out.set(r, c, QNum::from_rational(q, u));
            out.set(m + r, c, QNum::from_rational(q, v));
        }
    }
    Ok(out)
}

pub fn relative_kernel(a: &QMatrix) -> Result<RelativeInstance> {
    let ctx = a.ctx();
    if ctx.is_rational() {
        return Err(Error::Precondition("the matrix must be defined over a quadratic field".to_string()));
    }
    let (m, n) = (a.rows(), a.cols());
    let rm = RELATIVE_DEGREE * m;
    if rm >= n {
        return Err(Error::Precondition(format!(
            "need 2M < N, got M = {}, N = {}",
            m, n
        )));
    }
    let stacked = a.vstack(&a.conj())?;
    let r = rank(&stacked);
    if r != rm {
        return Err(Error::RankDeficient { expected: rm, found: r });
    }
    let expanded = expand_over_base(a)?;
    let kernel = kernel_basis(&expanded);
    let dim = kernel.cols();
    if dim != n - rm {
        return Err(Error::RankDeficient {
            expected: rm,
            found: n - dim,
        });
    }
    // Each rational kernel vector must solve the original system over K.
    let lifted = kernel.with_ctx(ctx)?;
    if !a.mul(&lifted)?.is_zero() {
        return Err(Error::Precondition("rational kernel does not solve A x = 0".to_string()));
    }
    Ok(RelativeInstance {
        ctx,
        matrix: a.clone(),
        expanded,
        stacked,
        kernel,
        dim,
    })
}

pub fn relative_report(a: &QMatrix) -> Result<RelativeReport> {
    relative_report_with(a, BasisOptions::default())
}

pub fn relative_report_with(a: &QMatrix, opts: BasisOptions) -> Result<RelativeReport> {
    let instance = relative_kernel(a)?;
    let kernel_height = height_subspace(&instance.kernel)?;
    let stacked_height = height_subspace(&instance.stacked.transpose())?;
    let row_heights = (0..a.rows())
        .map(|r| height_vector(&a.row(r)))
        .collect::<Result<Vec<_>>>()?;
    let bound_product = ExactHeight::product(
        instance.ctx,
        row_heights.iter().map(|h| h.pow(RELATIVE_DEGREE as u32)).collect::<Vec<_>>().iter(),
    );
    let basis = sparse_basis_with(&instance.kernel, &PivotStrategy::Lexicographic, opts)?;
    let subsets_within_bound = basis.subset_heights.values().all(|h| *h <= bound_product);
    Ok(RelativeReport {
        heights_equal: kernel_height == stacked_height,
        kernel_within_bound: kernel_height <= bound_product,
        subsets_within_bound,
        kernel_height,
        stacked_height,
        row_heights,
        bound_product,
        basis,
        instance,
    })
}
