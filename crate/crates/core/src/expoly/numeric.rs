//! Overflow-free floating evaluation of exponential polynomials.
//!
//! Values are carried as `m * e^s` so that terms like `e^{1000}` or
//! `e^{2 pi i z}` far from the real axis can be combined without overflow.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::ratfun::NumericRatFun;

use super::ExpoPoly;

/// `m * exp(s)` with a complex mantissa and real log-scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub m: Complex64,
    pub s: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        m: Complex64 { re: 0.0, im: 0.0 },
        s: 0.0,
    };

    pub fn from_c64(z: Complex64) -> Scaled {
        Scaled { m: z, s: 0.0 }.renorm()
    }

    /// `c * exp(w)`.
    pub fn exp_times(c: Complex64, w: Complex64) -> Scaled {
        Scaled {
            m: c * Complex64::from_polar(1.0, w.im),
            s: w.re,
        }
        .renorm()
    }

    pub fn is_zero(&self) -> bool {
        self.m.re == 0.0 && self.m.im == 0.0
    }

    fn renorm(self) -> Scaled {
        let a = self.m.norm();
        if a == 0.0 || !a.is_finite() {
            return if a == 0.0 { Scaled::ZERO } else { self };
        }
        if (1e-100..1e100).contains(&a) {
            return self;
        }
        Scaled {
            m: self.m / a,
            s: self.s + a.ln(),
        }
    }

    pub fn checked_div(self, o: Scaled) -> Option<Scaled> {
        if o.is_zero() {
            return None;
        }
        Some(
            Scaled {
                m: self.m / o.m,
                s: self.s - o.s,
            }
            .renorm(),
        )
    }

    pub fn scale(self, c: Complex64) -> Scaled {
        Scaled {
            m: self.m * c,
            s: self.s,
        }
        .renorm()
    }

    /// `ln |value|`; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.m.norm().ln() + self.s
        }
    }

    pub fn arg(&self) -> f64 {
        self.m.arg()
    }

    /// Plain complex value (may overflow to infinity).
    pub fn to_c64(&self) -> Complex64 {
        self.m * self.s.exp()
    }

    pub fn powi(self, k: u32) -> Scaled {
        let mut acc = Scaled::from_c64(Complex64::new(1.0, 0.0));
        for _ in 0..k {
            acc = acc * self;
        }
        acc
    }
}

impl Add for Scaled {
    type Output = Scaled;

    fn add(self, o: Scaled) -> Scaled {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let s = self.s.max(o.s);
        Scaled {
            m: self.m * (self.s - s).exp() + o.m * (o.s - s).exp(),
            s,
        }
        .renorm()
    }
}

impl Neg for Scaled {
    type Output = Scaled;

    fn neg(self) -> Scaled {
        Scaled {
            m: -self.m,
            s: self.s,
        }
    }
}

impl Sub for Scaled {
    type Output = Scaled;

    fn sub(self, o: Scaled) -> Scaled {
        self + -o
    }
}

impl Mul for Scaled {
    type Output = Scaled;

    fn mul(self, o: Scaled) -> Scaled {
        if self.is_zero() || o.is_zero() {
            return Scaled::ZERO;
        }
        Scaled {
            m: self.m * o.m,
            s: self.s + o.s,
        }
        .renorm()
    }
}

/// Value, derivative and the magnitude of the largest term at a point.
#[derive(Clone, Copy, Debug)]
pub struct Sample {
    pub value: Scaled,
    pub derivative: Scaled,
    /// `ln` of the sum of absolute term magnitudes, for relative residuals.
    pub ln_scale: f64,
}

/// Double-precision image of an [`ExpoPoly`] plus an additive constant shift.
#[derive(Clone, Debug)]
pub struct NumericExpo {
    terms: Vec<(Complex64, NumericRatFun)>,
    max_freq: f64,
}

impl NumericExpo {
    pub fn new(f: &ExpoPoly) -> NumericExpo {
        let terms: Vec<_> = f
            .terms()
            .map(|(d, h)| (d.to_c64(), NumericRatFun::from(h)))
            .collect();
        let max_freq = terms.iter().map(|(d, _)| d.norm()).fold(0.0, f64::max);
        NumericExpo { terms, max_freq }
    }

    /// `f - b` for a complex constant `b`.
    pub fn minus_constant(f: &ExpoPoly, b: Complex64) -> NumericExpo {
        let mut n = NumericExpo::new(f);
        if b.norm() > 0.0 {
            let zero = Complex64::new(0.0, 0.0);
            match n.terms.iter_mut().find(|(d, _)| d.norm() == 0.0) {
                Some((_, h)) => h.add_constant(-b),
                None => n.terms.push((zero, NumericRatFun::constant(-b))),
            }
        }
        n
    }

    /// Largest frequency modulus; bounds the phase velocity along a path.
    pub fn max_frequency(&self) -> f64 {
        self.max_freq
    }

    pub fn eval(&self, z: Complex64) -> Option<Scaled> {
        let mut acc = Scaled::ZERO;
        for (d, h) in &self.terms {
            acc = acc + Scaled::exp_times(h.eval(z)?, d * z);
        }
        Some(acc)
    }

    pub fn sample(&self, z: Complex64) -> Option<Sample> {
        let mut value = Scaled::ZERO;
        let mut derivative = Scaled::ZERO;
        let mut scale = Scaled::ZERO;
        for (d, h) in &self.terms {
            let (hv, hd) = h.eval_with_derivative(z)?;
            let e = Scaled::exp_times(Complex64::new(1.0, 0.0), d * z);
            value = value + e.scale(hv);
            derivative = derivative + e.scale(hd + d * hv);
            scale = scale
                + Scaled {
                    m: Complex64::new(h.magnitude(z), 0.0),
                    s: e.s,
                };
        }
        Some(Sample {
            value,
            derivative,
            ln_scale: scale.ln_abs(),
        })
    }
}
