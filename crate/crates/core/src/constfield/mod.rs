//! Exact symbolic constants over `Q(i)`, `pi` and exponential atoms.
//!
//! A [`ConstExpr`] is a quotient of two [`Sum`]s. Normal forms are reached by
//! the rewrite rules `exp(a)exp(b) = exp(a+b)`, `exp(0) = 1` and the
//! root-of-unity rule that moves rational multiples of `pi*i/2` out of
//! exponents, with like terms collected under a deterministic ordering.
//!
//! `pi` and exponential atoms with distinct reduced exponents are treated as
//! algebraically independent. Under that assumption a structurally nonzero
//! numerator is nonzero; [`ConstExpr::is_zero`] still refuses to say
//! `NonZero` until an interval enclosure excludes 0, so a hidden identity can
//! only surface as `Unknown`, never as a wrong verdict.

pub mod gauss;
pub mod interval;
pub mod sum;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
pub use gauss::Gauss;
pub use interval::{ComplexInterval, RealInterval};
pub use sum::{Mono, Sum};

pub const DEFAULT_MAX_BITS: u32 = 1024;
pub const DEFAULT_MAX_EXP_DEPTH: usize = 2;
const MIN_BITS: u32 = 16;
const MAX_SUPPORTED_BITS: u32 = 1 << 16;

static MAX_BITS: AtomicU32 = AtomicU32::new(DEFAULT_MAX_BITS);
static MAX_EXP_DEPTH: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_EXP_DEPTH);

/// Sets the largest precision tried by zero tests (process wide).
pub fn set_max_precision(bits: u32) -> Result<()> {
    if !(MIN_BITS..=MAX_SUPPORTED_BITS).contains(&bits) {
        return Err(Error::PrecisionOutOfRange(bits));
    }
    MAX_BITS.store(bits, Ordering::Relaxed);
    Ok(())
}

pub fn max_precision() -> u32 {
    MAX_BITS.load(Ordering::Relaxed)
}

/// Sets the admissible nesting depth of `exp` towers (process wide).
pub fn set_max_exp_depth(depth: usize) {
    MAX_EXP_DEPTH.store(depth.max(1), Ordering::Relaxed);
}

pub fn max_exp_depth() -> usize {
    MAX_EXP_DEPTH.load(Ordering::Relaxed)
}

/// Outcome of a zero test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ZeroVerdict {
    Zero,
    NonZero,
    Unknown { bits: u32 },
}

impl ZeroVerdict {
    pub fn is_zero(self) -> bool {
        self == ZeroVerdict::Zero
    }

    pub fn is_nonzero(self) -> bool {
        self == ZeroVerdict::NonZero
    }

    /// `Ok(true)` for Zero, `Ok(false)` for NonZero, an error naming `expr` otherwise.
    pub fn decide(self, expr: impl fmt::Display) -> Result<bool> {
        match self {
            ZeroVerdict::Zero => Ok(true),
            ZeroVerdict::NonZero => Ok(false),
            ZeroVerdict::Unknown { bits } => Err(Error::Undecidable {
                expr: expr.to_string(),
                bits,
            }),
        }
    }
}

/// An exact constant in normal form.
///
/// Derived equality is structural; use [`ConstExpr::is_zero`] on a difference
/// for semantic comparison.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ConstExpr {
    num: Sum,
    den: Sum,
}

impl Default for ConstExpr {
    fn default() -> Self {
        ConstExpr::zero()
    }
}

impl ConstExpr {
    pub fn zero() -> Self {
        ConstExpr {
            num: Sum::zero(),
            den: Sum::one(),
        }
    }

    pub fn one() -> Self {
        ConstExpr::int(1)
    }

    pub fn int(n: i64) -> Self {
        ConstExpr::from_sum(Sum::scalar(Gauss::from_int(n)))
    }

    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::DivisionByZero(format!("{p}/0")));
        }
        Ok(ConstExpr::from_gauss(Gauss::from_rational(
            BigRational::new(p.into(), q.into()),
        )))
    }

    pub fn from_big_rational(q: BigRational) -> Self {
        ConstExpr::from_gauss(Gauss::from_rational(q))
    }

    pub fn from_gauss(g: Gauss) -> Self {
        ConstExpr::from_sum(Sum::scalar(g))
    }

    pub fn i() -> Self {
        ConstExpr::from_gauss(Gauss::i())
    }

    pub fn pi() -> Self {
        ConstExpr::from_sum(Sum::term(Gauss::one(), Mono::pi()))
    }

    pub fn from_sum(num: Sum) -> Self {
        ConstExpr {
            num,
            den: Sum::one(),
        }
    }

    /// `num / den`, normalized. Fails if `den` is structurally zero.
    pub fn from_parts(num: Sum, den: Sum) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero(format!("({num})/0")));
        }
        Ok(ConstExpr { num, den }.normalize())
    }

    pub fn numer(&self) -> &Sum {
        &self.num
    }

    pub fn denom(&self) -> &Sum {
        &self.den
    }

    /// Rewrites into normal form; idempotent.
    pub fn normalize(&self) -> ConstExpr {
        if self.num.is_zero() {
            return ConstExpr::zero();
        }
        if let Some(inv) = self.den.inv_term() {
            return ConstExpr {
                num: self.num.mul(&inv),
                den: Sum::one(),
            };
        }
        // monomial quotient: num = den * c m for some term of den
        if let Some((nm, nc)) = self.num.lead() {
            for (dm, dc) in self.den.terms() {
                let (unit, dinv) = dm.inv();
                let (unit2, m) = nm.mul(&dinv);
                let c = nc
                    .mul(&dc.inv().expect("stored coefficients are nonzero"))
                    .mul(&unit)
                    .mul(&unit2);
                if self.den.mul_term(&c, &m) == self.num {
                    return ConstExpr {
                        num: Sum::term(c, m),
                        den: Sum::one(),
                    };
                }
            }
        }
        let (_, lc) = self.den.lead().expect("denominator is nonzero");
        let k = lc.inv().expect("stored coefficients are nonzero");
        ConstExpr {
            num: self.num.scale(&k),
            den: self.den.scale(&k),
        }
    }

    pub fn is_structural_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den == Sum::one() && self.num == Sum::one()
    }

    /// Exact Gaussian-rational value, if the constant has no transcendental part.
    pub fn as_gauss(&self) -> Option<Gauss> {
        if self.den != Sum::one() {
            return None;
        }
        self.num.as_gauss()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_gauss().filter(Gauss::is_real).map(|g| g.re)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// Nesting depth of exponential atoms.
    pub fn depth(&self) -> usize {
        self.num.depth().max(self.den.depth())
    }

    pub fn checked_div(&self, o: &ConstExpr) -> Result<ConstExpr> {
        Ok(self * &o.inv()?)
    }

    /// Multiplicative inverse, refusing certified or undecided zeros.
    pub fn inv(&self) -> Result<ConstExpr> {
        match self.is_zero() {
            ZeroVerdict::Zero => Err(Error::DivisionByZero(self.to_string())),
            ZeroVerdict::Unknown { bits } => Err(Error::Undecidable {
                expr: self.to_string(),
                bits,
            }),
            ZeroVerdict::NonZero => ConstExpr::from_parts(self.den.clone(), self.num.clone()),
        }
    }

    pub fn powi(&self, k: i64) -> Result<ConstExpr> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = ConstExpr::one();
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `exp(self)` under the configured depth limit.
    pub fn exp(&self) -> Result<ConstExpr> {
        self.exp_bounded(max_exp_depth())
    }

    pub fn exp_bounded(&self, limit: usize) -> Result<ConstExpr> {
        if self.den != Sum::one() {
            return Err(Error::UnsupportedExponent(self.to_string()));
        }
        let depth = 1 + self.num.depth();
        if depth > limit {
            return Err(Error::ExpDepthExceeded { depth, limit });
        }
        Ok(ConstExpr::from_sum(Sum::exp_of(self.num.clone())))
    }

    /// Tri-state zero test at the configured maximum precision.
    pub fn is_zero(&self) -> ZeroVerdict {
        self.is_zero_with(max_precision())
    }

    /// Zero test trying 64, 128, ... bits up to `max_bits`.
    pub fn is_zero_with(&self, max_bits: u32) -> ZeroVerdict {
        let n = self.normalize();
        if n.num.is_zero() {
            return ZeroVerdict::Zero;
        }
        if n.num.as_gauss().is_some() {
            return ZeroVerdict::NonZero;
        }
        let mut bits = 64.min(max_bits);
        loop {
            if !interval::eval_sum(&n.num, bits + 8).contains_zero() {
                return ZeroVerdict::NonZero;
            }
            if bits >= max_bits {
                return ZeroVerdict::Unknown { bits };
            }
            bits = (bits * 2).min(max_bits);
        }
    }

    /// A rectangle guaranteed to contain the value.
    pub fn eval_interval(&self, bits: u32) -> Result<ComplexInterval> {
        if !(MIN_BITS..=MAX_SUPPORTED_BITS).contains(&bits) {
            return Err(Error::PrecisionOutOfRange(bits));
        }
        let p = bits + 8;
        let num = interval::eval_sum(&self.num, p);
        if self.den == Sum::one() {
            return Ok(num);
        }
        let den = interval::eval_sum(&self.den, p);
        let inv = den.inv(p).ok_or_else(|| Error::Undecidable {
            expr: format!("({})", self.den),
            bits,
        })?;
        Ok(num.mul(&inv, p))
    }

    /// Double-precision value from a 64-bit enclosure.
    pub fn to_c64(&self) -> Complex64 {
        match self.as_gauss() {
            Some(g) => {
                use num_traits::ToPrimitive;
                Complex64::new(
                    g.re.to_f64().unwrap_or(f64::NAN),
                    g.im.to_f64().unwrap_or(f64::NAN),
                )
            }
            None => match self.eval_interval(64) {
                Ok(ci) => {
                    let (re, im) = ci.mid_f64();
                    Complex64::new(re, im)
                }
                Err(_) => Complex64::new(f64::NAN, f64::NAN),
            },
        }
    }
}

impl fmt::Display for ConstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Sum::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl ConstExpr {
    /// Display wrapped in parentheses unless it is a single factor.
    pub fn to_factor_string(&self) -> String {
        let s = self.to_string();
        if self.den == Sum::one() && self.num.len() <= 1 && !s.starts_with('-') {
            s
        } else {
            format!("({s})")
        }
    }
}

fn add_parts(a: &ConstExpr, b: &ConstExpr, negate: bool) -> ConstExpr {
    let bn = if negate { b.num.neg() } else { b.num.clone() };
    if a.den == b.den {
        return ConstExpr {
            num: a.num.add(&bn),
            den: a.den.clone(),
        }
        .normalize();
    }
    let num = a.num.mul(&b.den).add(&bn.mul(&a.den));
    ConstExpr {
        num,
        den: a.den.mul(&b.den),
    }
    .normalize()
}

impl Add for &ConstExpr {
    type Output = ConstExpr;
    fn add(self, o: &ConstExpr) -> ConstExpr {
        add_parts(self, o, false)
    }
}

impl Sub for &ConstExpr {
    type Output = ConstExpr;
    fn sub(self, o: &ConstExpr) -> ConstExpr {
        add_parts(self, o, true)
    }
}

impl Mul for &ConstExpr {
    type Output = ConstExpr;
    fn mul(self, o: &ConstExpr) -> ConstExpr {
        if self.num.is_zero() || o.num.is_zero() {
            return ConstExpr::zero();
        }
        ConstExpr {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
        .normalize()
    }
}

impl Neg for &ConstExpr {
    type Output = ConstExpr;
    fn neg(self) -> ConstExpr {
        ConstExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ConstExpr {
            type Output = ConstExpr;
            fn $m(self, o: ConstExpr) -> ConstExpr {
                (&self).$m(&o)
            }
        }
        impl $tr<&ConstExpr> for ConstExpr {
            type Output = ConstExpr;
            fn $m(self, o: &ConstExpr) -> ConstExpr {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ConstExpr {
    type Output = ConstExpr;
    fn neg(self) -> ConstExpr {
        -&self
    }
}

impl From<i64> for ConstExpr {
    fn from(n: i64) -> Self {
        ConstExpr::int(n)
    }
}

impl One for ConstExpr {
    fn one() -> Self {
        ConstExpr::int(1)
    }
}

impl Zero for ConstExpr {
    fn zero() -> Self {
        ConstExpr::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}
