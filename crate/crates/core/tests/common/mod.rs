//! Independent oracles over Q: Laplace expansion, minors, primitive vectors.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use siegel_core::{FieldCtx, QMatrix, QNum};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Rational entries of a matrix over Q, row-major.
pub fn rows_of(m: &QMatrix) -> Vec<Vec<Rat>> {
    assert!(m.ctx().is_rational());
    (0..m.rows()).map(|r| m.row(r).iter().map(|x| x.a().clone()).collect()).collect()
}

pub fn laplace_det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    match n {
        0 => Rat::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut total = Rat::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<Rat>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][c] * laplace_det(&sub);
                if c % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

/// All `k`-subsets of `0..n` in lexicographic order, by recursion.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out.sort();
    out
}

/// Maximal minors of an `N x L` rational matrix, rows in lexicographic order.
pub fn minors(rows: &[Vec<Rat>], cols: &[usize]) -> Vec<Rat> {
    subsets(rows.len(), cols.len())
        .iter()
        .map(|rs| {
            let block: Vec<Vec<Rat>> = rs.iter().map(|&r| cols.iter().map(|&c| rows[r][c].clone()).collect()).collect();
            laplace_det(&block)
        })
        .collect()
}

/// `H^2` of a nonzero rational vector: squared norm of its primitive
/// integer multiple.
pub fn height_sq(v: &[Rat]) -> Rat {
    assert!(v.iter().any(|x| !x.is_zero()), "zero vector");
    let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    Rat::from_integer(ints.iter().map(|x| (x / &g) * (x / &g)).sum())
}

/// `H^2` of the span of the selected columns; the empty selection gives 1.
pub fn subspace_height_sq(rows: &[Vec<Rat>], cols: &[usize]) -> Rat {
    if cols.is_empty() {
        return Rat::one();
    }
    height_sq(&minors(rows, cols))
}

pub fn all_columns(rows: &[Vec<Rat>]) -> Vec<usize> {
    (0..rows.first().map_or(0, Vec::len)).collect()
}

pub fn rank_by_minors(rows: &[Vec<Rat>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    (1..=rows.len().min(cols))
        .rev()
        .find(|&k| {
            subsets(cols, k).iter().any(|cs| minors(rows, cs).iter().any(|m| !m.is_zero()))
        })
        .unwrap_or(0)
}

pub fn matmul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).fold(Rat::zero(), |s, k| s + &row[k] * &b[k][c]))
                .collect()
        })
        .collect()
}

pub fn q_matrix(rows: &[Vec<Rat>]) -> QMatrix {
    let q = FieldCtx::rational();
    QMatrix::from_rows(q, rows.iter().map(|r| r.iter().map(|x| QNum::from_rational(q, x.clone())).collect()).collect())
        .unwrap()
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

/// Pass/fail bookkeeping for one acceptance criterion.
pub struct Tally {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Tally {
    pub fn new() -> Self {
        Tally {
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}
