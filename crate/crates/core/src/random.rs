//! Seeded generators for random test instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldCtx, QNum};
use crate::linalg::{rank, QMatrix};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a + b w` with `a`, `b` uniform in `[-range, range]` (`b = 0` over `Q`).
pub fn random_qnum<R: Rng>(rng: &mut R, ctx: FieldCtx, range: i64) -> QNum {
    let a = rng.gen_range(-range..=range);
    if ctx.is_rational() {
        return QNum::from_int(ctx, a);
    }
    let b = rng.gen_range(-range..=range);
    QNum::quad(ctx, a, b).expect("quadratic context")
}

pub fn random_matrix<R: Rng>(rng: &mut R, ctx: FieldCtx, rows: usize, cols: usize, range: i64) -> QMatrix {
    let data = (0..rows * cols).map(|_| random_qnum(rng, ctx, range)).collect();
    QMatrix::new(ctx, rows, cols, data).expect("dimensions match")
}

/// Random matrix of rank `min(rows, cols)`, redrawn until it has full rank.
pub fn random_full_rank<R: Rng>(rng: &mut R, ctx: FieldCtx, rows: usize, cols: usize, range: i64) -> QMatrix {
    loop {
        let m = random_matrix(rng, ctx, rows, cols, range);
        if rank(&m) == rows.min(cols) {
            return m;
        }
    }
}

/// Full-rank rational matrix with entries `p/q`, `|p| <= range`, `1 <= q <= max_den`.
pub fn random_fraction_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, range: i64, max_den: i64) -> QMatrix {
    let q = FieldCtx::rational();
    loop {
        let data = (0..rows * cols)
            .map(|_| QNum::from_frac(q, rng.gen_range(-range..=range), rng.gen_range(1..=max_den)))
            .collect();
        let m = QMatrix::new(q, rows, cols, data).expect("dimensions match");
        if rank(&m) == rows.min(cols) {
            return m;
        }
    }
}

/// Random invertible `n x n` matrix.
pub fn random_invertible<R: Rng>(rng: &mut R, ctx: FieldCtx, n: usize, range: i64) -> QMatrix {
    random_full_rank(rng, ctx, n, n, range)
}
