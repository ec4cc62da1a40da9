//! Reduced-size versions of the property suites, runnable from the binary.

use std::fmt;

use num_rational::BigRational;
use rand::Rng;

use crate::basis::{block_pair, sparse_basis, PivotStrategy};
use crate::bounds::{c_constant, compare_regimes, compute_bounds, Regime, DEFAULT_EPSILON};
use crate::checks::{
    column_product_holds, determinant_bound_holds, duality_holds, partition_holds, struppeck_vaaler_holds,
};
use crate::error::Result;
use crate::field::{FieldCtx, QNum};
use crate::format::{parse_matrix, write_matrix};
use crate::height::{height_subspace, height_vector, ExactHeight};
use crate::linalg::{grassmann, QMatrix};
use crate::random::{random_full_rank, random_invertible, random_matrix, seeded};
use crate::relative::relative_report;
use crate::sensing::{many_bases, search_sensing, strict_monotonicity, vandermonde_sensing, SearchParams};

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{} {:<26} {:>4} cases", verdict, self.name, self.cases)?;
        if let Some(msg) = &self.first_failure {
            write!(f, "  first failure: {}", msg)?;
        }
        Ok(())
    }
}

/// Collects case outcomes; errors count as failures.
struct Suite {
    result: SuiteResult,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            result: SuiteResult {
                name,
                cases: 0,
                failures: 0,
                first_failure: None,
            },
        }
    }

    fn case(&mut self, label: impl FnOnce() -> String, outcome: Result<bool>) {
        self.result.cases += 1;
        let failure = match outcome {
            Ok(true) => return,
            Ok(false) => label(),
            Err(e) => format!("{}: {}", label(), e),
        };
        self.result.failures += 1;
        self.result.first_failure.get_or_insert(failure);
    }

    fn finish(self) -> SuiteResult {
        self.result
    }
}

fn q() -> FieldCtx {
    FieldCtx::rational()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn worked_example() -> QMatrix {
    QMatrix::from_ints(q(), 4, 3, &[1, 2, 3, 4, 3, 1, 5, 2, 1, 2, 1, 3]).expect("4x3")
}

fn suite_worked_example() -> SuiteResult {
    let mut s = Suite::new("worked-example");
    let z = worked_example();
    let run = || -> Result<bool> {
        let g = grassmann(&z)?;
        let expected: Vec<QNum> = vec![QNum::from_int(q(), -18); 4];
        let rep = sparse_basis(&z, &PivotStrategy::Lexicographic)?;
        let x = QMatrix::from_ints(q(), 4, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1, 1, -1, 1])?;
        let sqrt2 = ExactHeight::from_square(q(), rat(2))?;
        let sqrt3 = ExactHeight::from_square(q(), rat(3))?;
        let two = ExactHeight::from_square(q(), rat(4))?;
        let pairs = [3u64, 5, 6].iter().all(|m| rep.subset_heights[m] == sqrt3);
        Ok(g.coords == expected
            && rep.subspace_height == two
            && rep.basis == x
            && rep.column_heights.iter().all(|h| *h == sqrt2)
            && pairs
            && sqrt2 < sqrt3
            && sqrt3 < two
            && rep.all_assertions_hold())
    };
    s.case(|| "regression values differ".to_string(), run());
    s.finish()
}

const SHAPES: [(usize, usize); 4] = [(4, 2), (5, 3), (6, 3), (7, 4)];

fn suite_sparse_basis(seed: u64, count: usize) -> SuiteResult {
    let mut s = Suite::new("sparse-basis");
    let mut rng = seeded(seed);
    for i in 0..count {
        let (n, l) = SHAPES[i % SHAPES.len()];
        let z = random_full_rank(&mut rng, q(), n, l, 9);
        s.case(
            || format!("instance {}", z),
            sparse_basis(&z, &PivotStrategy::Lexicographic).map(|r| r.all_assertions_hold()),
        );
    }
    s.finish()
}

fn suite_duality(seed: u64, count: usize) -> SuiteResult {
    let mut s = Suite::new("duality");
    let mut rng = seeded(seed);
    for _ in 0..count {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(1..n);
        let a = random_full_rank(&mut rng, q(), m, n, 9);
        s.case(|| format!("matrix {}", a), duality_holds(&a.transpose()));
    }
    s.finish()
}

fn suite_hadamard(seed: u64, count: usize) -> [SuiteResult; 3] {
    let mut rng = seeded(seed);
    let mut parts = Suite::new("hadamard-partition");
    let mut cols = Suite::new("hadamard-columns");
    let mut dets = Suite::new("hadamard-determinant");
    for i in 0..count {
        let ctx = [q(), FieldCtx::quadratic(-1).expect("field"), FieldCtx::quadratic(2).expect("field")][i % 3];
        let n = rng.gen_range(3..=5);
        let l = rng.gen_range(2..n);
        let z = random_full_rank(&mut rng, ctx, n, l, 5);
        let mask = rng.gen_range(1..(1u64 << l) - 1);
        parts.case(|| format!("{} split {:b}", z, mask), partition_holds(&z, mask));
        cols.case(|| format!("{}", z), column_product_holds(&z));
        let m = random_matrix(&mut rng, ctx, l, l, 5);
        dets.case(|| format!("{}", m), determinant_bound_holds(&m));
    }
    [parts.finish(), cols.finish(), dets.finish()]
}

fn suite_struppeck_vaaler(seed: u64, count: usize) -> SuiteResult {
    let mut s = Suite::new("struppeck-vaaler");
    let mut rng = seeded(seed);
    for _ in 0..count {
        let a = rng.gen_range(1..=3);
        let b = rng.gen_range(1..=3);
        let shared = rng.gen_range(0..=a.min(b));
        let pool = random_full_rank(&mut rng, q(), 6, a + b - shared, 5);
        let x = pool.select_cols(&(0..a).collect::<Vec<_>>()).expect("in range");
        let y = pool.select_cols(&(a - shared..a + b - shared).collect::<Vec<_>>()).expect("in range");
        s.case(|| format!("{} and {}", x, y), struppeck_vaaler_holds(&x, &y));
    }
    s.finish()
}

fn suite_block_pair(seed: u64, count: usize) -> SuiteResult {
    let mut s = Suite::new("block-pair");
    let mut rng = seeded(seed);
    for i in 0..count {
        let n = rng.gen_range(3..=6);
        let l = rng.gen_range(2..n);
        let u = random_matrix(&mut rng, q(), n - l, l - 1, 5);
        let zero_v = i % 2 == 1;
        let v = if zero_v {
            QMatrix::zeros(q(), n - l, 1)
        } else {
            loop {
                let v = random_matrix(&mut rng, q(), n - l, 1, 5);
                if !v.is_zero() {
                    break v;
                }
            }
        };
        let outcome = block_pair(&u, &v).and_then(|(a, ap)| {
            let (h, hp) = (height_subspace(&a)?, height_subspace(&ap)?);
            Ok(if zero_v { h == hp } else { h > hp })
        });
        s.case(|| format!("U = {}, V = {}", u, v), outcome);
    }
    s.finish()
}

fn suite_relative(seed: u64, count: usize) -> SuiteResult {
    let mut s = Suite::new("relative");
    let g = FieldCtx::quadratic(-1).expect("field");
    let worked = QMatrix::from_rows(
        g,
        vec![vec![QNum::one(g), QNum::quad(g, 0, 1).expect("g"), QNum::quad(g, 1, 1).expect("g")]],
    );
    let outcome = worked.and_then(|a| relative_report(&a)).map(|r| {
        r.kernel_height == ExactHeight::from_square(q(), rat(3)).expect("positive") && r.all_assertions_hold()
    });
    s.case(|| "(1, i, 1+i)".to_string(), outcome);
    let mut rng = seeded(seed);
    for i in 0..count {
        let ctx = if i % 2 == 0 { g } else { FieldCtx::quadratic(2).expect("field") };
        let n = rng.gen_range(3..=5);
        let a = loop {
            let a = random_matrix(&mut rng, ctx, 1, n, 5);
            if crate::linalg::rank(&a.vstack(&a.conj()).expect("same width")) == 2 {
                break a;
            }
        };
        let outcome = relative_report(&a).map(|r| r.instance.dim == n - 2 && r.all_assertions_hold());
        s.case(|| format!("{}", a), outcome);
    }
    s.finish()
}

fn suite_sensing(seed: u64) -> SuiteResult {
    let mut s = Suite::new("sensing");
    for l in 1..=3 {
        for m in l + 1..=6 {
            let v = vandermonde_sensing(l, m);
            let outcome = v.and_then(|v| Ok(v.verified && strict_monotonicity(&v.matrix)?));
            s.case(|| format!("Vandermonde {}x{}", l, m), outcome);
        }
    }
    let found = search_sensing(&SearchParams::full_spark(2, 4, 2, seed));
    let outcome = match found {
        Some(f) => strict_monotonicity(&f.matrix),
        None => Ok(false),
    };
    s.case(|| "search 2x4 with T = 2".to_string(), outcome);
    s.finish()
}

fn suite_many_bases() -> SuiteResult {
    let mut s = Suite::new("many-bases");
    let outcome = vandermonde_sensing(3, 5).and_then(|v| {
        let res = many_bases(&worked_example(), &v)?;
        Ok(res.subsets_checked == 10 && !res.sampled && res.all_assertions_hold())
    });
    s.case(|| "worked example with M = 5".to_string(), outcome);
    s.finish()
}

fn suite_height_invariance(seed: u64, count: usize) -> SuiteResult {
    let mut s = Suite::new("height-invariance");
    let mut rng = seeded(seed);
    let fields = [q(), FieldCtx::quadratic(-1).expect("field"), FieldCtx::quadratic(5).expect("field")];
    for i in 0..count {
        let ctx = fields[i % 3];
        let n = rng.gen_range(2..=5);
        let l = rng.gen_range(1..n);
        let z = random_full_rank(&mut rng, ctx, n, l, 5);
        let g = random_invertible(&mut rng, ctx, l, 3);
        let outcome = (|| -> Result<bool> {
            let h = height_subspace(&z)?;
            let v = z.column(0);
            let hv = height_vector(&v)?;
            let lambda = loop {
                let x = crate::random::random_qnum(&mut rng, ctx, 4);
                if !x.is_zero() {
                    break x;
                }
            };
            let scaled: Vec<QNum> = v.iter().map(|x| x * &lambda).collect();
            let mut permuted = v.clone();
            permuted.reverse();
            let mut padded = v.clone();
            padded.push(QNum::zero(ctx));
            let rational: Vec<QNum> = (0..n).map(|_| QNum::from_int(q(), rng.gen_range(1..9))).collect();
            let lifted = rational.iter().map(|x| x.with_ctx(ctx)).collect::<Result<Vec<_>>>()?;
            Ok(height_subspace(&z.mul(&g)?)? == h
                && height_vector(&scaled)? == hv
                && height_vector(&permuted)? == hv
                && height_vector(&padded)? == hv
                && height_vector(&lifted)? == height_vector(&rational)?
                && hv >= ExactHeight::one(ctx)
                && h >= ExactHeight::one(ctx))
        })();
        s.case(|| format!("{} with {}", z, g), outcome);
    }
    s.finish()
}

fn suite_bounds() -> SuiteResult {
    let mut s = Suite::new("bounds");
    let close = |a: f64, b: f64| ((a - b) / b).abs() < 1e-12;
    s.case(|| "c_Q(1) = 1".to_string(), Ok(close(c_constant(q(), 1), 1.0)));
    s.case(
        || "c_Q(2) = 2/sqrt(pi)".to_string(),
        Ok(close(c_constant(q(), 2), 2.0 / std::f64::consts::PI.sqrt())),
    );
    let outcome = compute_bounds(&worked_example(), DEFAULT_EPSILON).map(|t| {
        close(t.sparse_bound_max, 2.0) && compare_regimes(&t).smallest_max_height() == Regime::SparseBasis
    });
    s.case(|| "worked example ordering".to_string(), outcome);
    s.finish()
}

fn suite_round_trip(seed: u64, count: usize) -> SuiteResult {
    let mut s = Suite::new("format-round-trip");
    let mut rng = seeded(seed);
    for i in 0..count {
        let ctx = [q(), FieldCtx::quadratic(-3).expect("field"), FieldCtx::quadratic(7).expect("field")][i % 3];
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let data = (0..r * c)
            .map(|_| {
                let a = QNum::from_frac(ctx, rng.gen_range(-20..=20), rng.gen_range(1..=9));
                let b = QNum::from_frac(ctx, rng.gen_range(-20..=20), rng.gen_range(1..=9));
                if ctx.is_rational() {
                    a
                } else {
                    &a + &(&b * &QNum::quad(ctx, 0, 1).expect("quadratic"))
                }
            })
            .collect();
        let m = QMatrix::new(ctx, r, c, data).expect("dimensions match");
        s.case(|| format!("{}", m), parse_matrix(&write_matrix(&m)).map(|p| p == m));
    }
    s.finish()
}

/// Runs every suite with the given seed.
pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    let mut out = vec![
        suite_worked_example(),
        suite_sparse_basis(seed, 40),
        suite_duality(seed.wrapping_add(1), 20),
    ];
    out.extend(suite_hadamard(seed.wrapping_add(2), 20));
    out.extend([
        suite_struppeck_vaaler(seed.wrapping_add(3), 20),
        suite_block_pair(seed.wrapping_add(4), 20),
        suite_relative(seed.wrapping_add(5), 10),
        suite_sensing(seed.wrapping_add(6)),
        suite_many_bases(),
        suite_height_invariance(seed.wrapping_add(7), 20),
        suite_bounds(),
        suite_round_trip(seed.wrapping_add(8), 15),
    ]);
    out
}
