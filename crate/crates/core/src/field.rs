//! Exact arithmetic in `Q` and in quadratic fields `Q(sqrt d)`.
//!
//! Elements are stored as `a + b*sqrt(d)` with fully reduced rationals `a`, `b`.
//! The ring of integers has `Z`-basis `(1, w)` where `w = sqrt(d)` unless
//! `d = 1 (mod 4)`, in which case `w = (1 + sqrt(d)) / 2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Which kind of field we are working in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Quadratic(i64),
}

/// Descriptor of the working field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    kind: FieldKind,
}

impl FieldCtx {
    pub const RATIONAL: FieldCtx = FieldCtx {
        kind: FieldKind::Rational,
    };

    pub fn rational() -> Self {
        Self::RATIONAL
    }

    /// `Q(sqrt d)` for a squarefree `d` other than 0 and 1.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidField(format!("d = {} does not give a quadratic field", d)));
        }
        if !is_squarefree(d) {
            return Err(Error::InvalidField(format!("d = {} is not squarefree", d)));
        }
        Ok(FieldCtx {
            kind: FieldKind::Quadratic(d),
        })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn is_rational(&self) -> bool {
        self.kind == FieldKind::Rational
    }

    /// The radicand `d`, or `None` for `Q`.
    pub fn radicand(&self) -> Option<i64> {
        match self.kind {
            FieldKind::Rational => None,
            FieldKind::Quadratic(d) => Some(d),
        }
    }

    pub fn degree(&self) -> u32 {
        match self.kind {
            FieldKind::Rational => 1,
            FieldKind::Quadratic(_) => 2,
        }
    }

    /// Number of real embeddings.
    pub fn r1(&self) -> u32 {
        match self.kind {
            FieldKind::Rational => 1,
            FieldKind::Quadratic(d) if d > 0 => 2,
            FieldKind::Quadratic(_) => 0,
        }
    }

    /// Number of conjugate pairs of complex embeddings.
    pub fn r2(&self) -> u32 {
        match self.kind {
            FieldKind::Quadratic(d) if d < 0 => 1,
            _ => 0,
        }
    }

    pub fn discriminant(&self) -> i64 {
        match self.kind {
            FieldKind::Rational => 1,
            FieldKind::Quadratic(d) if omega_is_half(d) => d,
            FieldKind::Quadratic(d) => 4 * d,
        }
    }

    pub fn is_imaginary(&self) -> bool {
        self.r2() == 1
    }

    /// True when the second integral basis element is `(1 + sqrt d)/2`.
    pub fn omega_is_half(&self) -> bool {
        matches!(self.kind, FieldKind::Quadratic(d) if omega_is_half(d))
    }

    /// The second ring-of-integers generator as a field element.
    pub fn omega(&self) -> QNum {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        match self.kind {
            FieldKind::Rational => QNum::one(*self),
            FieldKind::Quadratic(d) if omega_is_half(d) => QNum::raw(*self, half.clone(), half),
            FieldKind::Quadratic(_) => QNum::raw(*self, BigRational::zero(), BigRational::one()),
        }
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Quadratic(d) => write!(f, "Q(sqrt {})", d),
        }
    }
}

fn omega_is_half(d: i64) -> bool {
    d.rem_euclid(4) == 1
}

pub fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Exact element `a + b*sqrt(d)` of a [`FieldCtx`]; `b = 0` over `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QNum {
    ctx: FieldCtx,
    a: BigRational,
    b: BigRational,
}

impl QNum {
    fn raw(ctx: FieldCtx, a: BigRational, b: BigRational) -> Self {
        QNum { ctx, a, b }
    }

    /// Builds `a + b*sqrt(d)`; a nonzero `b` is rejected over `Q`.
    pub fn new(ctx: FieldCtx, a: BigRational, b: BigRational) -> Result<Self> {
        if ctx.is_rational() && !b.is_zero() {
            return Err(Error::InvalidField(
                "irrational part given for an element of Q".to_string(),
            ));
        }
        Ok(QNum { ctx, a, b })
    }

    pub fn from_rational(ctx: FieldCtx, q: BigRational) -> Self {
        QNum::raw(ctx, q, BigRational::zero())
    }

    pub fn from_int(ctx: FieldCtx, n: i64) -> Self {
        QNum::from_rational(ctx, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(ctx: FieldCtx, num: i64, den: i64) -> Self {
        QNum::from_rational(ctx, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `a + b*sqrt(d)` from small integers; convenient in tests.
    pub fn quad(ctx: FieldCtx, a: i64, b: i64) -> Result<Self> {
        QNum::new(
            ctx,
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    pub fn zero(ctx: FieldCtx) -> Self {
        QNum::raw(ctx, BigRational::zero(), BigRational::zero())
    }

    pub fn one(ctx: FieldCtx) -> Self {
        QNum::raw(ctx, BigRational::one(), BigRational::zero())
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `sqrt(d)`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Reinterprets the element in another field. Fails if the element has an
    /// irrational part that does not exist in the target.
    pub fn with_ctx(&self, ctx: FieldCtx) -> Result<Self> {
        if self.ctx == ctx {
            return Ok(self.clone());
        }
        if !self.b.is_zero() {
            return Err(Error::FieldMismatch {
                left: self.ctx.to_string(),
                right: ctx.to_string(),
            });
        }
        Ok(QNum::from_rational(ctx, self.a.clone()))
    }

    fn check(&self, other: &QNum) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::FieldMismatch {
                left: self.ctx.to_string(),
                right: other.ctx.to_string(),
            });
        }
        Ok(())
    }

    fn d_rat(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.ctx.radicand().unwrap_or(0)))
    }

    pub fn try_add(&self, other: &QNum) -> Result<QNum> {
        self.check(other)?;
        Ok(QNum::raw(self.ctx, &self.a + &other.a, &self.b + &other.b))
    }

    pub fn try_sub(&self, other: &QNum) -> Result<QNum> {
        self.check(other)?;
        Ok(QNum::raw(self.ctx, &self.a - &other.a, &self.b - &other.b))
    }

    pub fn try_mul(&self, other: &QNum) -> Result<QNum> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &QNum) -> Result<QNum> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn mul_unchecked(&self, other: &QNum) -> QNum {
        if self.b.is_zero() && other.b.is_zero() {
            return QNum::from_rational(self.ctx, &self.a * &other.a);
        }
        let d = self.d_rat();
        let a = &self.a * &other.a + d * (&self.b * &other.b);
        let b = &self.a * &other.b + &self.b * &other.a;
        QNum::raw(self.ctx, a, b)
    }

    pub fn inv(&self) -> Result<QNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(QNum::from_rational(self.ctx, self.a.recip()));
        }
        let n = self.norm();
        Ok(QNum::raw(self.ctx, &self.a / &n, -(&self.b / &n)))
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> QNum {
        QNum::raw(self.ctx, &self.a * q, &self.b * q)
    }

    /// The nontrivial Galois automorphism `a + b sqrt d -> a - b sqrt d`
    /// (identity over `Q`).
    pub fn conj(&self) -> QNum {
        QNum::raw(self.ctx, self.a.clone(), -self.b.clone())
    }

    /// `x * conj(x) = a^2 - d b^2`; over `Q` this is `x` itself.
    pub fn norm(&self) -> BigRational {
        if self.ctx.is_rational() {
            return self.a.clone();
        }
        &self.a * &self.a - self.d_rat() * (&self.b * &self.b)
    }

    /// `x + conj(x) = 2a`; over `Q` this is `x` itself.
    pub fn trace(&self) -> BigRational {
        if self.ctx.is_rational() {
            return self.a.clone();
        }
        &self.a + &self.a
    }

    /// Coordinates `(u, v)` with `x = u + v*w` in the integral basis `(1, w)`.
    pub fn integral_coords(&self) -> (BigRational, BigRational) {
        if self.ctx.omega_is_half() {
            (&self.a - &self.b, &self.b + &self.b)
        } else {
            (self.a.clone(), self.b.clone())
        }
    }

    pub fn from_integral_coords(ctx: FieldCtx, u: BigRational, v: BigRational) -> Result<Self> {
        if ctx.omega_is_half() {
            let half = &v / BigRational::from_integer(BigInt::from(2));
            Ok(QNum::raw(ctx, u + &half, half))
        } else {
            QNum::new(ctx, u, v)
        }
    }

    /// True when both integral coordinates are integers.
    pub fn is_algebraic_integer(&self) -> bool {
        let (u, v) = self.integral_coords();
        u.is_integer() && v.is_integer()
    }
}

impl Neg for &QNum {
    type Output = QNum;
    fn neg(self) -> QNum {
        QNum::raw(self.ctx, -self.a.clone(), -self.b.clone())
    }
}

impl Neg for QNum {
    type Output = QNum;
    fn neg(self) -> QNum {
        -&self
    }
}

// Operator forms panic on mixed fields; use the `try_*` methods when operands
// come from untrusted sources.
impl Add for &QNum {
    type Output = QNum;
    fn add(self, rhs: &QNum) -> QNum {
        self.try_add(rhs).expect("mixed-field operands")
    }
}

impl Sub for &QNum {
    type Output = QNum;
    fn sub(self, rhs: &QNum) -> QNum {
        self.try_sub(rhs).expect("mixed-field operands")
    }
}

impl Mul for &QNum {
    type Output = QNum;
    fn mul(self, rhs: &QNum) -> QNum {
        self.try_mul(rhs).expect("mixed-field operands")
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for QNum {
    /// Output follows the entry grammar: `a`, `b*w`, `a+b*w` or `a-b*w`,
    /// where `w` stands for `sqrt(d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        if self.a.is_zero() {
            return write!(f, "{}*w", fmt_rational(&self.b));
        }
        if self.b.is_negative() {
            write!(f, "{}-{}*w", fmt_rational(&self.a), fmt_rational(&-self.b.clone()))
        } else {
            write!(f, "{}+{}*w", fmt_rational(&self.a), fmt_rational(&self.b))
        }
    }
}
