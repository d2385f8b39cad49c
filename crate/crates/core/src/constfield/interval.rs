//! Outward-rounded interval arithmetic over dyadic-rounded rationals.
//!
//! Endpoints are `BigRational`s rounded outward to a fixed number of
//! significant bits after every operation, so enclosures are rigorous and
//! their size stays bounded.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gauss::Gauss;
use super::sum::Sum;

fn bit_len(n: &BigInt) -> i64 {
    n.bits() as i64
}

fn pow2(k: i64) -> BigRational {
    let p = BigInt::one() << (k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Rounds `x` toward -inf (`up = false`) or +inf keeping `prec` significant bits.
fn round(x: &BigRational, prec: u32, up: bool) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    let e = bit_len(x.numer()) - bit_len(x.denom());
    let k = prec as i64 - e;
    let scaled = x * pow2(k);
    let (q, r) = scaled.numer().div_mod_floor(scaled.denom());
    let q = if up && !r.is_zero() { q + 1 } else { q };
    BigRational::from_integer(q) * pow2(-k)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RealInterval {
    pub fn point(q: BigRational) -> Self {
        RealInterval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn zero() -> Self {
        RealInterval::point(BigRational::zero())
    }

    fn rounded(lo: BigRational, hi: BigRational, prec: u32) -> Self {
        RealInterval {
            lo: round(&lo, prec, false),
            hi: round(&hi, prec, true),
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        RealInterval::rounded(&self.lo + &o.lo, &self.hi + &o.hi, prec)
    }

    pub fn neg(&self) -> Self {
        RealInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RealInterval::rounded(lo, hi, prec)
    }

    pub fn scale(&self, q: &BigRational, prec: u32) -> Self {
        self.mul(&RealInterval::point(q.clone()), prec)
    }

    /// Reciprocal; `None` when the interval meets zero.
    pub fn inv(&self, prec: u32) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        let one = BigRational::one();
        Some(RealInterval::rounded(
            &one / &self.hi,
            &one / &self.lo,
            prec,
        ))
    }

    /// Widens symmetrically by `r >= 0`.
    pub fn widen(&self, r: &BigRational, prec: u32) -> Self {
        RealInterval::rounded(&self.lo - r, &self.hi + r, prec)
    }

    pub fn hull(&self, o: &Self) -> Self {
        RealInterval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    pub fn exp(&self, prec: u32) -> Self {
        let lo = exp_point(&self.lo, prec).lo;
        let hi = exp_point(&self.hi, prec).hi;
        RealInterval { lo, hi }
    }

    /// `(sin, cos)` over the interval, via the midpoint plus the Lipschitz bound.
    pub fn sin_cos(&self, prec: u32) -> (Self, Self) {
        let m = round(&self.mid(), prec + 8, false);
        let rad = (&self.hi - &m).max(&m - &self.lo);
        let (s, c) = sin_cos_point(&m, prec);
        let unit = RealInterval {
            lo: -BigRational::one(),
            hi: BigRational::one(),
        };
        let clamp = |i: RealInterval| RealInterval {
            lo: i.lo.max(unit.lo.clone()),
            hi: i.hi.min(unit.hi.clone()),
        };
        (clamp(s.widen(&rad, prec)), clamp(c.widen(&rad, prec)))
    }
}

/// Taylor enclosure of `exp(x)` for a rational point.
fn exp_point(x: &BigRational, prec: u32) -> RealInterval {
    if x.is_zero() {
        return RealInterval::point(BigRational::one());
    }
    // halve until |y| <= 1/2, then square back up
    let mag = bit_len(x.numer()) - bit_len(x.denom()) + 1;
    let s = (mag + 1).max(0);
    let wp = prec + 24 + s as u32;
    let y = x * pow2(-s);
    let yi = RealInterval::point(y.clone());
    let mut sum = RealInterval::point(BigRational::one());
    let mut term = RealInterval::point(BigRational::one());
    let tol = pow2(-(wp as i64) - 4);
    let mut k = 1i64;
    loop {
        term = term
            .mul(&yi, wp)
            .scale(&BigRational::new(1.into(), k.into()), wp);
        sum = sum.add(&term, wp);
        let bound = term.lo.abs().max(term.hi.abs());
        if bound < tol {
            // tail is bounded by the geometric series with ratio 1/2
            let r = bound * BigRational::from_integer(2.into());
            sum = sum.widen(&r, wp);
            break;
        }
        k += 1;
    }
    for _ in 0..s {
        sum = sum.mul(&sum, wp);
    }
    RealInterval::rounded(sum.lo, sum.hi, prec + 8)
}

/// Taylor enclosures of `sin` and `cos` at a rational point.
fn sin_cos_point(x: &BigRational, prec: u32) -> (RealInterval, RealInterval) {
    let wp = prec + 24;
    // reduce by a multiple of pi/2 chosen in floating point; any multiple is valid
    let k = (x.to_f64().unwrap_or(0.0) / std::f64::consts::FRAC_PI_2).round() as i64;
    let half_pi = pi_interval(wp).scale(&BigRational::new(1.into(), 2.into()), wp);
    let y = RealInterval::point(x.clone())
        .sub(&half_pi.scale(&BigRational::from_integer(k.into()), wp), wp);
    let m = round(&y.mid(), wp, false);
    let rad = (&y.hi - &m).max(&m - &y.lo);
    let (s, c) = taylor_sin_cos(&m, wp);
    let (s, c) = (s.widen(&rad, wp), c.widen(&rad, wp));
    // sin(y + k pi/2), cos(y + k pi/2)
    let (s, c) = match k.rem_euclid(4) {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    };
    (
        RealInterval::rounded(s.lo, s.hi, prec + 8),
        RealInterval::rounded(c.lo, c.hi, prec + 8),
    )
}

fn taylor_sin_cos(y: &BigRational, wp: u32) -> (RealInterval, RealInterval) {
    let yi = RealInterval::point(y.clone());
    let tol = pow2(-(wp as i64) - 4);
    let mut term = RealInterval::point(BigRational::one()); // y^n / n!
    let mut sin = RealInterval::zero();
    let mut cos = RealInterval::point(BigRational::one());
    let mut n = 1i64;
    loop {
        term = term
            .mul(&yi, wp)
            .scale(&BigRational::new(1.into(), n.into()), wp);
        let signed = if (n / 2) % 2 == 0 {
            term.clone()
        } else {
            term.neg()
        };
        if n % 2 == 1 {
            sin = sin.add(&signed, wp);
        } else {
            cos = cos.add(&signed, wp);
        }
        let bound = term.lo.abs().max(term.hi.abs());
        if bound < tol && n > 2 {
            // Lagrange remainder of the next term is at most |y|^{n+1}/(n+1)! <= bound
            sin = sin.widen(&bound, wp);
            cos = cos.widen(&bound, wp);
            break;
        }
        n += 1;
    }
    (sin, cos)
}

fn atan_inv(n: i64, wp: u32) -> RealInterval {
    // atan(1/n) = sum (-1)^k / ((2k+1) n^(2k+1)), alternating and decreasing
    let tol = pow2(-(wp as i64) - 4);
    let n2 = BigRational::from_integer(BigInt::from(n * n));
    let mut power = RealInterval::point(BigRational::new(1.into(), n.into()));
    let mut sum = RealInterval::zero();
    let mut k = 0i64;
    loop {
        let term = power.scale(&BigRational::new(1.into(), (2 * k + 1).into()), wp);
        sum = if k % 2 == 0 {
            sum.add(&term, wp)
        } else {
            sum.sub(&term, wp)
        };
        let bound = term.hi.abs();
        if bound < tol {
            return sum.widen(&bound, wp);
        }
        power = power.scale(&(BigRational::one() / &n2), wp);
        k += 1;
    }
}

/// Enclosure of pi with at least `prec` significant bits (cached per precision).
pub fn pi_interval(prec: u32) -> RealInterval {
    static CACHE: OnceLock<Mutex<HashMap<u32, RealInterval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&prec) {
        return hit.clone();
    }
    let wp = prec + 16;
    let a = atan_inv(5, wp).scale(&BigRational::from_integer(16.into()), wp);
    let b = atan_inv(239, wp).scale(&BigRational::from_integer(4.into()), wp);
    let pi = a.sub(&b, prec + 8);
    cache.lock().unwrap().insert(prec, pi.clone());
    pi
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexInterval {
    pub fn zero() -> Self {
        ComplexInterval {
            re: RealInterval::zero(),
            im: RealInterval::zero(),
        }
    }

    pub fn from_gauss(g: &Gauss) -> Self {
        ComplexInterval {
            re: RealInterval::point(g.re.clone()),
            im: RealInterval::point(g.im.clone()),
        }
    }

    pub fn real(re: RealInterval) -> Self {
        ComplexInterval {
            re,
            im: RealInterval::zero(),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn intersects(&self, o: &Self) -> bool {
        let overlap = |a: &RealInterval, b: &RealInterval| a.lo <= b.hi && b.lo <= a.hi;
        overlap(&self.re, &o.re) && overlap(&self.im, &o.im)
    }

    pub fn mid_f64(&self) -> (f64, f64) {
        (self.re.mid_f64(), self.im.mid_f64())
    }

    pub fn add(&self, o: &Self, p: u32) -> Self {
        ComplexInterval {
            re: self.re.add(&o.re, p),
            im: self.im.add(&o.im, p),
        }
    }

    pub fn neg(&self) -> Self {
        ComplexInterval {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &Self, p: u32) -> Self {
        let re = self.re.mul(&o.re, p).sub(&self.im.mul(&o.im, p), p);
        let im = self.re.mul(&o.im, p).add(&self.im.mul(&o.re, p), p);
        ComplexInterval { re, im }
    }

    pub fn inv(&self, p: u32) -> Option<Self> {
        let n = self.re.mul(&self.re, p).add(&self.im.mul(&self.im, p), p);
        let ninv = n.inv(p)?;
        Some(ComplexInterval {
            re: self.re.mul(&ninv, p),
            im: self.im.neg().mul(&ninv, p),
        })
    }

    pub fn powi(&self, k: i32, p: u32) -> Option<Self> {
        let base = if k < 0 { self.inv(p)? } else { self.clone() };
        let mut acc = ComplexInterval::from_gauss(&Gauss::one());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base, p);
        }
        Some(acc)
    }

    pub fn exp(&self, p: u32) -> Self {
        let m = self.re.exp(p);
        let (s, c) = self.im.sin_cos(p);
        ComplexInterval {
            re: m.mul(&c, p),
            im: m.mul(&s, p),
        }
    }
}

const EXP_CACHE_LIMIT: usize = 4096;

/// `exp(s)` at precision `p`, memoized: the same atoms recur in every zero test.
fn exp_atom(s: &Sum, p: u32) -> ComplexInterval {
    static CACHE: OnceLock<Mutex<HashMap<(Sum, u32), ComplexInterval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (s.clone(), p);
    if let Some(v) = cache.lock().expect("cache lock").get(&key) {
        return v.clone();
    }
    let v = eval_sum(s, p).exp(p);
    let mut map = cache.lock().expect("cache lock");
    if map.len() >= EXP_CACHE_LIMIT {
        map.clear();
    }
    map.insert(key, v.clone());
    v
}

/// Encloses the value of a sum at working precision `p`.
pub fn eval_sum(s: &Sum, p: u32) -> ComplexInterval {
    let pi = ComplexInterval::real(pi_interval(p));
    let mut acc = ComplexInterval::zero();
    for (m, c) in s.terms() {
        let mut t = ComplexInterval::from_gauss(c);
        if m.pi != 0 {
            // pi is bounded away from zero, so the power always exists
            t = t.mul(&pi.powi(m.pi, p).expect("pi is nonzero"), p);
        }
        if !m.exp.is_zero() {
            t = t.mul(&exp_atom(&m.exp, p), p);
        }
        acc = acc.add(&t, p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_outward() {
        let third = BigRational::new(1.into(), 3.into());
        let lo = round(&third, 20, false);
        let hi = round(&third, 20, true);
        assert!(lo < third && third < hi);
        assert!(&hi - &lo < pow2(-20));
    }

    #[test]
    fn pi_digits() {
        let pi = pi_interval(128);
        // 3.14159265358979323846264338327950288 as a rational bracket
        let lo = BigRational::new(
            314159265358979323846264338327950287u128.into(),
            BigInt::from(10u128.pow(35)),
        );
        let hi = BigRational::new(
            314159265358979323846264338327950289u128.into(),
            BigInt::from(10u128.pow(35)),
        );
        assert!(pi.lo > lo && pi.hi < hi, "{:?}", pi);
    }

    #[test]
    fn exp_and_trig_identities_enclosed() {
        let one = BigRational::one();
        let e = exp_point(&one, 80);
        assert!(e.lo.to_f64().unwrap() < std::f64::consts::E + 1e-15);
        assert!(e.hi.to_f64().unwrap() > std::f64::consts::E - 1e-15);
        // sin^2 + cos^2 = 1 is enclosed
        let x = BigRational::new(7.into(), 3.into());
        let (s, c) = sin_cos_point(&x, 80);
        let n = s.mul(&s, 100).add(&c.mul(&c, 100), 100);
        assert!(n.contains(&one));
    }
}
