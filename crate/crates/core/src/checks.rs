//! Exact inequality checks on a single subspace: duality, the Hadamard
//! family, Struppeck-Vaaler, and the sparse basis conclusions.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Zero;

use crate::basis::{check_equality_characterization, sparse_basis_with, BasisOptions, PivotStrategy};
use crate::error::{Error, Result};
use crate::field::QNum;
use crate::height::{height_dual, height_subspace, height_vector, intersection_basis, span_basis, ExactHeight};
use crate::linalg::{binomial, det, rank, Combinations, QMatrix};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Number of inequalities evaluated.
    pub cases: usize,
    pub detail: String,
}

/// `H(ker m^T) = H(col m)` for a full-column-rank `N x L` basis with `L < N`.
pub fn duality_holds(z: &QMatrix) -> Result<bool> {
    Ok(height_dual(&z.transpose())? == height_subspace(z)?)
}

/// `H(Z) <= prod H(columns)`.
pub fn column_product_holds(z: &QMatrix) -> Result<bool> {
    let cols = z
        .columns()
        .iter()
        .map(|c| height_vector(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(height_subspace(z)? <= ExactHeight::product(z.ctx(), &cols))
}

/// `H(X) <= H(Y) H(W)` where `Y` holds the columns in `mask` and `W` the rest.
pub fn partition_holds(z: &QMatrix, mask: u64) -> Result<bool> {
    let (left, right): (Vec<usize>, Vec<usize>) = (0..z.cols()).partition(|&c| mask >> c & 1 == 1);
    let hy = height_subspace(&z.select_cols(&left)?)?;
    let hw = height_subspace(&z.select_cols(&right)?)?;
    Ok(height_subspace(z)? <= hy.mul(&hw))
}

/// Sign of `x` under the real embedding `sqrt(d) -> sign * sqrt(d)`.
fn real_sign(x: &QNum, conjugate: bool) -> Ordering {
    let a = x.a();
    let b = if conjugate { -x.b().clone() } else { x.b().clone() };
    let sa = a.cmp(&BigRational::zero());
    let sb = b.cmp(&BigRational::zero());
    if sa == sb || sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal {
        return sb;
    }
    // Opposite signs: the larger of a^2 and b^2 d wins.
    let d = BigRational::from_integer(x.ctx().radicand().unwrap_or(1).into());
    match (a * a).cmp(&(&b * &b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// `|det m|^2 <= prod_n |column n|^2` at every archimedean place.
pub fn determinant_bound_holds(m: &QMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::Dimension("determinant bound needs a square matrix".to_string()));
    }
    let ctx = m.ctx();
    let d = det(m)?;
    if ctx.is_rational() || ctx.is_imaginary() {
        // The absolute value squared is the norm (the identity over Q).
        let abs2 = |x: &QNum| if ctx.is_rational() { x.a() * x.a() } else { x.norm() };
        let prod = m
            .columns()
            .iter()
            .map(|c| c.iter().map(abs2).fold(BigRational::zero(), |s, t| s + t))
            .fold(BigRational::from_integer(1.into()), |p, t| p * t);
        return Ok(abs2(&d) <= prod);
    }
    let mut prod = QNum::one(ctx);
    for c in m.columns() {
        let mut s = QNum::zero(ctx);
        for x in &c {
            s = &s + &(x * x);
        }
        prod = &prod * &s;
    }
    let gap = &prod - &(&d * &d);
    Ok(real_sign(&gap, false) != Ordering::Less && real_sign(&gap, true) != Ordering::Less)
}

/// `H(<X, Y>) H(X ∩ Y) <= H(X) H(Y)` for full-column-rank `x`, `y`.
pub fn struppeck_vaaler_holds(x: &QMatrix, y: &QMatrix) -> Result<bool> {
    let span = span_basis(x, y)?;
    let meet = intersection_basis(x, y)?;
    let lhs = height_subspace(&span)?.mul(&height_subspace(&meet)?);
    Ok(lhs <= height_subspace(x)?.mul(&height_subspace(y)?))
}

fn check(name: &'static str, outcomes: &[bool], detail: String) -> Check {
    Check {
        name,
        passed: outcomes.iter().all(|&b| b),
        cases: outcomes.len(),
        detail,
    }
}

/// Runs every check on the column space of `z`.
///
/// Partition checks cover all bipartitions while `2^L` fits the budget and
/// contiguous splits otherwise; determinant checks cover the `L x L` row
/// minors up to the same budget.
pub fn verify_instance(z: &QMatrix, opts: BasisOptions) -> Result<Vec<Check>> {
    let (n, l) = (z.rows(), z.cols());
    let r = rank(z);
    if l == 0 || r != l {
        return Err(Error::RankDeficient { expected: l, found: r });
    }
    let mut out = Vec::new();

    if l < n {
        out.push(check("duality", &[duality_holds(z)?], "H(ker Z^T) = H(Z)".to_string()));
    }
    out.push(check("hadamard-columns", &[column_product_holds(z)?], "H(Z) <= prod H(z_l)".to_string()));

    let full = if l < 64 { (1u64 << l) - 1 } else { u64::MAX };
    let masks: Vec<u64> = if l < 64 && (1u64 << l) <= opts.subset_budget {
        (1..full).collect()
    } else {
        (1..l).map(|k| (1u64 << k) - 1).collect()
    };
    let parts = masks.iter().map(|&m| partition_holds(z, m)).collect::<Result<Vec<_>>>()?;
    out.push(check("hadamard-partition", &parts, format!("{} column splits", parts.len())));

    let minors: Vec<Vec<usize>> = if binomial(n, l) <= opts.subset_budget as u128 {
        Combinations::new(n, l).collect()
    } else {
        Combinations::new(n, l).take(opts.subset_budget as usize).collect()
    };
    let dets = minors
        .iter()
        .map(|rows| determinant_bound_holds(&z.select_rows(rows)?))
        .collect::<Result<Vec<_>>>()?;
    out.push(check("hadamard-determinant", &dets, format!("{} row minors", dets.len())));

    if l < n {
        let rep = sparse_basis_with(z, &PivotStrategy::Lexicographic, opts)?;
        out.push(check(
            "monotonicity",
            &[rep.monotonicity_verified, rep.subsets_bounded(), rep.column_heights_bounded()],
            format!("{} subsets{}", rep.subset_heights.len(), if rep.partial { " (partial)" } else { "" }),
        ));
        out.push(check(
            "equality-characterization",
            &[check_equality_characterization(&rep)],
            format!("{} equal pairs", rep.equality_witnesses.len()),
        ));
        if l >= 2 {
            // Halves of the sparse basis sharing the middle column.
            let mid = (l - 1) / 2;
            let x = rep.basis.select_cols(&(0..=mid).collect::<Vec<_>>())?;
            let y = rep.basis.select_cols(&(mid..l).collect::<Vec<_>>())?;
            out.push(check(
                "struppeck-vaaler",
                &[struppeck_vaaler_holds(&x, &y)?, struppeck_vaaler_holds(z, &rep.basis)?],
                "overlapping halves and the subspace with itself".to_string(),
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    #[test]
    fn worked_example_passes_everything() {
        let z = QMatrix::from_ints(FieldCtx::rational(), 4, 3, &[1, 2, 3, 4, 3, 1, 5, 2, 1, 2, 1, 3]).unwrap();
        let checks = verify_instance(&z, BasisOptions::default()).unwrap();
        assert_eq!(checks.len(), 7);
        assert!(checks.iter().all(|c| c.passed), "{:?}", checks);
        assert_eq!(checks.iter().find(|c| c.name == "hadamard-partition").unwrap().cases, 6);
        assert_eq!(checks.iter().find(|c| c.name == "hadamard-determinant").unwrap().cases, 4);
    }

    #[test]
    fn real_embedding_signs() {
        let k = FieldCtx::quadratic(2).unwrap();
        let x = QNum::quad(k, -1, 1).unwrap(); // sqrt2 - 1 > 0, conjugate < 0
        assert_eq!(real_sign(&x, false), Ordering::Greater);
        assert_eq!(real_sign(&x, true), Ordering::Less);
        assert_eq!(real_sign(&QNum::quad(k, 3, -2).unwrap(), false), Ordering::Greater);
        assert_eq!(real_sign(&QNum::quad(k, 0, -2).unwrap(), false), Ordering::Less);
    }

    #[test]
    fn determinant_bound_over_fields() {
        let k = FieldCtx::quadratic(2).unwrap();
        let w = QNum::quad(k, 0, 1).unwrap();
        // [[1, w], [w, 1]]: det = -1, column norms^2 = 3 at both places.
        let m = QMatrix::from_rows(k, vec![vec![QNum::one(k), w.clone()], vec![w, QNum::one(k)]]).unwrap();
        assert!(determinant_bound_holds(&m).unwrap());
        let g = FieldCtx::quadratic(-1).unwrap();
        let i = QNum::quad(g, 0, 1).unwrap();
        let m = QMatrix::from_rows(g, vec![vec![QNum::one(g), i.clone()], vec![i, QNum::one(g)]]).unwrap();
        // det = 2 and the bound is 2 * 2: equality for orthogonal columns.
        assert!(determinant_bound_holds(&m).unwrap());
    }

    #[test]
    fn struppeck_vaaler_with_shared_vector() {
        let q = FieldCtx::rational();
        let x = QMatrix::from_ints(q, 4, 2, &[1, 0, 1, 1, 0, 2, 0, 0]).unwrap();
        let y = QMatrix::from_ints(q, 4, 2, &[1, 0, 1, 0, 0, 0, 0, 3]).unwrap();
        assert!(struppeck_vaaler_holds(&x, &y).unwrap());
        assert_eq!(intersection_basis(&x, &y).unwrap().cols(), 1);
    }
}
