//! Floating-point comparison of small-height basis guarantees.
//!
//! Every value here is for display only; exact verdicts live in the other
//! modules. `Γ` is only ever needed at integers and half-integers, where it
//! has closed forms, so it is evaluated through sums of logarithms.

use std::f64::consts::{E, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::height::height_subspace;
use crate::linalg::{rank, QMatrix};

pub const DEFAULT_EPSILON: f64 = 1e-6;

/// `ln Γ(n + 1) = ln n!`.
fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln Γ(x)` for `x = twice_x / 2 > 0`.
pub fn ln_gamma_half_integer(twice_x: u64) -> f64 {
    assert!(twice_x > 0, "Γ has a pole at 0");
    if twice_x % 2 == 0 {
        ln_factorial(twice_x / 2 - 1)
    } else {
        // Γ(n + 1/2) = (2n)! √π / (4^n n!)
        let n = (twice_x - 1) / 2;
        ln_factorial(2 * n) - ln_factorial(n) - (n as f64) * 4f64.ln() + 0.5 * PI.ln()
    }
}

/// `r_v(L)` at a real place.
pub fn r_real(l: usize) -> f64 {
    let l = l as f64;
    (ln_gamma_half_integer(l as u64 + 2) / l).exp() / PI.sqrt()
}

/// `r_v(L)` at a complex place.
pub fn r_complex(l: usize) -> f64 {
    let lf = l as f64;
    (ln_gamma_half_integer(2 * l as u64 + 2) / (2.0 * lf)).exp() / (2.0 * PI).sqrt()
}

/// `c_k(L) = 2 |Δ|^{1/(2d)} prod_v r_v(L)^{d_v/d}`.
pub fn c_constant(ctx: FieldCtx, l: usize) -> f64 {
    let d = ctx.degree() as f64;
    let disc = ctx.discriminant().unsigned_abs() as f64;
    let ln_places =
        ctx.r1() as f64 * r_real(l).ln() / d + ctx.r2() as f64 * 2.0 * r_complex(l).ln() / d;
    2.0 * disc.powf(1.0 / (2.0 * d)) * ln_places.exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regime {
    SparseBasis,
    BombieriVaaler,
    RoyThunder,
    Gamma,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::SparseBasis, Regime::BombieriVaaler, Regime::RoyThunder, Regime::Gamma];

    pub fn label(self) -> &'static str {
        match self {
            Regime::SparseBasis => "sparse basis",
            Regime::BombieriVaaler => "Bombieri-Vaaler",
            Regime::RoyThunder => "Roy-Thunder",
            Regime::Gamma => "gamma via c_k(L)",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Regime::SparseBasis => "sparse",
            Regime::BombieriVaaler => "bv",
            Regime::RoyThunder => "rt",
            Regime::Gamma => "gamma",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundTable {
    pub n: usize,
    pub l: usize,
    pub ctx: FieldCtx,
    pub epsilon: f64,
    pub h_z: f64,
    /// `N^{L/2} ((2/π)^{r2} |Δ|)^{L/(2d)} H(Z)`, a bound on the product.
    pub bv: f64,
    /// `(e^{L(L-1)/4} + ε) H(Z)`, a bound on the product.
    pub rt: f64,
    pub ckl: f64,
    /// `c_k(L)^L H(Z)`, a bound on the largest vector.
    pub gamma_bound_max: f64,
    /// `H(Z)`, a bound on every vector of the sparse basis.
    pub sparse_bound_max: f64,
}

pub fn compute_bounds(z: &QMatrix, epsilon: f64) -> Result<BoundTable> {
    let l = z.cols();
    if l == 0 || rank(z) != l {
        return Err(Error::RankDeficient {
            expected: l,
            found: rank(z),
        });
    }
    let h = height_subspace(z)?;
    BoundTable::from_parts(z.rows(), l, z.ctx(), h.to_f64(), epsilon)
}

impl BoundTable {
    /// Table for a subspace of dimension `l` in `n` space with height `h_z`.
    pub fn from_parts(n: usize, l: usize, ctx: FieldCtx, h_z: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Precondition(format!("epsilon must be positive, got {}", epsilon)));
        }
        if l == 0 || l > n || !(h_z >= 1.0 && h_z.is_finite()) {
            return Err(Error::Precondition(format!(
                "need 1 <= L <= N and a finite height >= 1 (N = {}, L = {}, H = {})",
                n, l, h_z
            )));
        }
        let (nf, lf) = (n as f64, l as f64);
        let d = ctx.degree() as f64;
        let disc = ctx.discriminant().unsigned_abs() as f64;
        let field_part = (2.0 / PI).powi(ctx.r2() as i32) * disc;
        let bv = nf.powf(lf / 2.0) * field_part.powf(lf / (2.0 * d)) * h_z;
        let rt = (E.powf(lf * (lf - 1.0) / 4.0) + epsilon) * h_z;
        let ckl = c_constant(ctx, l);
        Ok(BoundTable {
            n,
            l,
            ctx,
            epsilon,
            h_z,
            bv,
            rt,
            ckl,
            gamma_bound_max: ckl.powi(l as i32) * h_z,
            sparse_bound_max: h_z,
        })
    }

    /// Guarantee on the height of the largest basis vector.
    ///
    /// A product bound only caps the largest vector by the whole product.
    pub fn max_height(&self, regime: Regime) -> f64 {
        match regime {
            Regime::SparseBasis => self.sparse_bound_max,
            Regime::BombieriVaaler => self.bv,
            Regime::RoyThunder => self.rt,
            Regime::Gamma => self.gamma_bound_max,
        }
    }

    /// Guarantee on the product of the basis heights.
    pub fn product(&self, regime: Regime) -> f64 {
        match regime {
            Regime::SparseBasis => self.h_z.powi(self.l as i32),
            Regime::BombieriVaaler => self.bv,
            Regime::RoyThunder => self.rt,
            Regime::Gamma => self.gamma_bound_max,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegimeComparison {
    /// Regimes ordered by their largest-vector guarantee, smallest first.
    pub by_max_height: Vec<(Regime, f64)>,
    /// Regimes ordered by their product guarantee, smallest first.
    pub by_product: Vec<(Regime, f64)>,
}

impl RegimeComparison {
    pub fn smallest_max_height(&self) -> Regime {
        self.by_max_height[0].0
    }

    pub fn smallest_product(&self) -> Regime {
        self.by_product[0].0
    }
}

fn ordered(table: &BoundTable, value: impl Fn(&BoundTable, Regime) -> f64) -> Vec<(Regime, f64)> {
    let mut v: Vec<(Regime, f64)> = Regime::ALL.iter().map(|&r| (r, value(table, r))).collect();
    // Stable on ties, so the sparse basis wins an exact tie.
    v.sort_by(|a, b| a.1.total_cmp(&b.1));
    v
}

pub fn compare_regimes(table: &BoundTable) -> RegimeComparison {
    RegimeComparison {
        by_max_height: ordered(table, BoundTable::max_height),
        by_product: ordered(table, BoundTable::product),
    }
}

impl fmt::Display for BoundTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}  N = {}  L = {}  H(Z) = {:.12}", self.ctx, self.n, self.l, self.h_z)?;
        writeln!(f, "c_k(L) = {:.12}  epsilon = {:e}", self.ckl, self.epsilon)?;
        writeln!(f, "{:<18} {:>22} {:>22}", "regime", "max-height bound", "product bound")?;
        for r in Regime::ALL {
            writeln!(f, "{:<18} {:>22.12} {:>22.12}", r.label(), self.max_height(r), self.product(r))?;
        }
        write!(f, "Bombieri-Vaaler and Roy-Thunder bound products; a single vector may reach the whole product. Schmidt's constant C: unspecified.")
    }
}
