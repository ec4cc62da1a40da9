//! Exact Arakelov heights of vectors and subspaces.
//!
//! Over `Q` the height of a vector is the Euclidean length of its primitive
//! integer representative. Over `Q(sqrt d)` the carrier `H^4` is
//! `P / N(a)^2`, where `a` is the content ideal of the coordinates and `P` is
//! `Norm(sum b_i^2)` (real field, two real places) or `(sum Norm(b_i))^2`
//! (imaginary field, one complex place). Either way the carried value
//! `H^(2 * degree)` is rational, so every comparison is exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{fmt_rational, FieldCtx, QNum};
use crate::linalg::{column_basis, grassmann_with, hnf2, kernel_basis, rank, QMatrix};

/// A height `H`, stored exactly as the rational `H^exponent`.
///
/// Heights computed in a field of degree `d` carry exponent `2d`. Equality
/// and ordering are those of the real numbers `H`, decided by cross powers,
/// so heights from different fields compare correctly.
#[derive(Debug, Clone)]
pub struct ExactHeight {
    ctx: FieldCtx,
    exponent: u32,
    value: BigRational,
}

impl ExactHeight {
    pub fn new(ctx: FieldCtx, exponent: u32, value: BigRational) -> Result<Self> {
        if exponent == 0 || !value.is_positive() {
            return Err(Error::Precondition(
                "a height needs a positive exponent and a positive value".to_string(),
            ));
        }
        Ok(ExactHeight { ctx, exponent, value })
    }

    /// Height 1, at the natural exponent of `ctx`.
    pub fn one(ctx: FieldCtx) -> Self {
        ExactHeight {
            ctx,
            exponent: 2 * ctx.degree(),
            value: BigRational::one(),
        }
    }

    /// The positive real `sqrt(value)`; handy for bounds such as `L^{3/2} T`.
    pub fn from_square(ctx: FieldCtx, square: BigRational) -> Result<Self> {
        ExactHeight::new(ctx, 2, square)
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// `H^exponent`.
    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// The same height carried at a multiple of the current exponent.
    pub fn at_exponent(&self, exponent: u32) -> Option<ExactHeight> {
        if exponent == 0 || exponent % self.exponent != 0 {
            return None;
        }
        Some(ExactHeight {
            ctx: self.ctx,
            exponent,
            value: Pow::pow(&self.value, exponent / self.exponent),
        })
    }

    /// `H^n`, keeping the exponent.
    pub fn pow(&self, n: u32) -> ExactHeight {
        ExactHeight {
            ctx: self.ctx,
            exponent: self.exponent,
            value: Pow::pow(&self.value, n),
        }
    }

    /// Product of two heights, carried at the lcm of the exponents.
    pub fn mul(&self, other: &ExactHeight) -> ExactHeight {
        let e = self.exponent.lcm(&other.exponent);
        let a = self.at_exponent(e).expect("lcm is a multiple");
        let b = other.at_exponent(e).expect("lcm is a multiple");
        ExactHeight {
            ctx: self.ctx,
            exponent: e,
            value: a.value * b.value,
        }
    }

    pub fn product<'a>(ctx: FieldCtx, items: impl IntoIterator<Item = &'a ExactHeight>) -> ExactHeight {
        items
            .into_iter()
            .fold(ExactHeight::one(ctx), |acc, h| acc.mul(h))
    }

    /// Decimal rendering of `H` to 12 significant digits. Display only.
    pub fn approx(&self) -> String {
        decimal_root(&self.value, self.exponent, 12)
    }

    pub fn to_f64(&self) -> f64 {
        let v = self.value.to_f64().unwrap_or(f64::INFINITY);
        if v.is_finite() && v > 0.0 {
            return v.powf(1.0 / self.exponent as f64);
        }
        self.approx().parse().unwrap_or(f64::INFINITY)
    }
}

impl PartialEq for ExactHeight {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExactHeight {}

impl PartialOrd for ExactHeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactHeight {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.exponent == other.exponent {
            return self.value.cmp(&other.value);
        }
        let g = self.exponent.gcd(&other.exponent);
        let lhs: BigRational = Pow::pow(&self.value, other.exponent / g);
        let rhs: BigRational = Pow::pow(&other.value, self.exponent / g);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for ExactHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "H^{{{}}} = {} (≈ {})",
            self.exponent,
            fmt_rational(&self.value),
            self.approx()
        )
    }
}

/// `floor(n^(1/e))` by bisection.
pub fn nth_root_floor(n: &BigInt, e: u32) -> BigInt {
    assert!(e > 0 && !n.is_negative());
    if n.is_zero() || e == 1 {
        return n.clone();
    }
    let mut lo = BigInt::zero();
    let mut hi = BigInt::one() << (n.bits() / e as u64 + 1);
    // Invariant: lo^e <= n < hi^e.
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if Pow::pow(&mid, e) <= *n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Decimal string for `value^(1/e)` rounded to `digits` significant digits.
fn decimal_root(value: &BigRational, e: u32, digits: usize) -> String {
    let ten = BigInt::from(10);
    let want = digits + 1;
    let mut shift: u32 = 0;
    let root = loop {
        let scaled = value.numer() * Pow::pow(&ten, shift * e) / value.denom();
        let r = nth_root_floor(&scaled, e);
        if r.to_string().len() >= want || shift > 4000 {
            break r;
        }
        let have = if r.is_zero() { 0 } else { r.to_string().len() };
        shift += (want - have).max(1) as u32;
    };
    let s = root.to_string();
    let drop = s.len().saturating_sub(digits);
    let mut kept: BigInt = s[..s.len() - drop].parse().expect("digits");
    if drop > 0 && s.as_bytes()[s.len() - drop] >= b'5' {
        kept += 1;
    }
    // value^(1/e) ~= kept * 10^(drop - shift)
    let exp10 = drop as i64 - shift as i64;
    let kept = kept.to_string();
    if exp10 >= 0 {
        return format!("{}{}", kept, "0".repeat(exp10 as usize));
    }
    let frac = (-exp10) as usize;
    if kept.len() > frac {
        let (i, f) = kept.split_at(kept.len() - frac);
        format!("{}.{}", i, f)
    } else {
        format!("0.{}{}", "0".repeat(frac - kept.len()), kept)
    }
}

/// Arakelov height of a nonzero vector.
pub fn height_vector(b: &[QNum]) -> Result<ExactHeight> {
    let Some(first) = b.first() else {
        return Err(Error::ZeroVector);
    };
    let ctx = first.ctx();
    if let Some(bad) = b.iter().find(|x| x.ctx() != ctx) {
        return Err(Error::FieldMismatch {
            left: ctx.to_string(),
            right: bad.ctx().to_string(),
        });
    }
    if b.iter().all(QNum::is_zero) {
        return Err(Error::ZeroVector);
    }
    if ctx.is_rational() {
        let prim = primitive_integer_vector(b.iter().map(QNum::a));
        let sq = prim.iter().fold(BigInt::zero(), |acc, x| acc + x * x);
        return ExactHeight::new(ctx, 2, BigRational::from_integer(sq));
    }
    quadratic_height(ctx, b)
}

/// The primitive integer vector on the line through a rational vector, with
/// its first nonzero entry positive.
pub fn primitive_integer_vector<'a>(xs: impl Iterator<Item = &'a BigRational> + Clone) -> Vec<BigInt> {
    let l = xs.clone().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = xs.map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map_or(BigInt::one(), |x| if x.is_negative() { -BigInt::one() } else { BigInt::one() });
    ints.iter().map(|x| x / &g * &sign).collect()
}

fn quadratic_height(ctx: FieldCtx, b: &[QNum]) -> Result<ExactHeight> {
    // Clear denominators in the integral basis and strip the rational content;
    // the height is unchanged by scaling.
    let coords: Vec<(BigRational, BigRational)> = b.iter().map(QNum::integral_coords).collect();
    let l = coords
        .iter()
        .fold(BigInt::one(), |acc, (u, v)| acc.lcm(u.denom()).lcm(v.denom()));
    let mut int_coords: Vec<(BigInt, BigInt)> = coords
        .iter()
        .map(|(u, v)| (u.numer() * (&l / u.denom()), v.numer() * (&l / v.denom())))
        .collect();
    let g = int_coords
        .iter()
        .fold(BigInt::zero(), |acc, (u, v)| acc.gcd(u).gcd(v));
    for (u, v) in int_coords.iter_mut() {
        *u = &*u / &g;
        *v = &*v / &g;
    }
    let gammas: Vec<QNum> = int_coords
        .iter()
        .map(|(u, v)| {
            QNum::from_integral_coords(ctx, BigRational::from_integer(u.clone()), BigRational::from_integer(v.clone()))
        })
        .collect::<Result<_>>()?;

    let omega = ctx.omega();
    let mut generators = Vec::with_capacity(2 * gammas.len());
    for (gamma, (u, v)) in gammas.iter().zip(&int_coords) {
        generators.push((u.clone(), v.clone()));
        let (su, sv) = (gamma * &omega).integral_coords();
        generators.push((su.to_integer(), sv.to_integer()));
    }
    let h = hnf2(&generators)?;
    let ideal_norm = BigRational::from_integer(&h[0][0] * &h[1][1]);

    let archimedean = if ctx.is_imaginary() {
        let s = gammas.iter().fold(BigRational::zero(), |acc, x| acc + x.norm());
        &s * &s
    } else {
        let s = gammas
            .iter()
            .fold(QNum::zero(ctx), |acc, x| &acc + &(x * x));
        s.norm()
    };
    ExactHeight::new(ctx, 4, archimedean / (&ideal_norm * &ideal_norm))
}

/// Height of the column space of a full-column-rank basis matrix, via its
/// Grassmann coordinates. An `N x 0` matrix (the zero subspace) has height 1.
pub fn height_subspace(basis: &QMatrix) -> Result<ExactHeight> {
    height_subspace_with(basis, Exec::default())
}

pub fn height_subspace_with(basis: &QMatrix, exec: Exec) -> Result<ExactHeight> {
    if basis.cols() == 0 {
        return Ok(ExactHeight::one(basis.ctx()));
    }
    if basis.rows() < basis.cols() {
        return Err(Error::Dimension(format!(
            "a basis matrix needs rows >= cols, got {}x{}",
            basis.rows(),
            basis.cols()
        )));
    }
    let g = grassmann_with(basis, exec)?;
    if g.is_zero() {
        return Err(Error::RankDeficient {
            expected: basis.cols(),
            found: rank(basis),
        });
    }
    height_vector(&g.coords)
}

/// Height of the null space of an `M x N` matrix of rank `M < N`. Equal to
/// the height of the row space by duality.
pub fn height_dual(m: &QMatrix) -> Result<ExactHeight> {
    if m.rows() >= m.cols() {
        return Err(Error::Precondition(format!(
            "dual height needs M < N, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let r = rank(m);
    if r != m.rows() {
        return Err(Error::RankDeficient {
            expected: m.rows(),
            found: r,
        });
    }
    height_subspace(&kernel_basis(m))
}

/// Heights of the individual columns.
pub fn column_heights(m: &QMatrix) -> Result<Vec<ExactHeight>> {
    m.columns().iter().map(|c| height_vector(c)).collect()
}

/// Basis of the span of the column spaces of `x` and `y`.
pub fn span_basis(x: &QMatrix, y: &QMatrix) -> Result<QMatrix> {
    Ok(column_basis(&x.hstack(y)?))
}

/// Basis of the intersection of the column spaces of `x` and `y`, computed
/// as the kernel of the stacked annihilators.
pub fn intersection_basis(x: &QMatrix, y: &QMatrix) -> Result<QMatrix> {
    if x.rows() != y.rows() {
        return Err(Error::Dimension("subspaces of different ambient spaces".to_string()));
    }
    let cx = kernel_basis(&x.transpose()).transpose();
    let cy = kernel_basis(&y.transpose()).transpose();
    Ok(kernel_basis(&cx.vstack(&cy)?))
}
