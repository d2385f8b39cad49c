//! Exponential polynomials `sum_j H_j(z) e^{d_j z}` and their quotients.
//!
//! Terms are keyed by frequency. Two frequencies merge only when their
//! difference is certified zero and stay apart only when it is certified
//! nonzero, so the representation is a direct sum over genuinely distinct
//! exponentials. By Borel's theorem on exponential sums with distinct
//! frequencies, such a sum vanishes identically exactly when every coefficient
//! does, which makes [`ExpoPoly::is_zero`] a structural check.

pub mod numeric;

use std::fmt;

use num_complex::Complex64;

use crate::constfield::{ConstExpr, ZeroVerdict};
use crate::error::{Error, Result};
use crate::ratfun::RatFun;
pub use numeric::{NumericExpo, Sample, Scaled};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExpoPoly {
    /// Sorted by frequency; no zero coefficient.
    terms: Vec<(ConstExpr, RatFun)>,
}

impl ExpoPoly {
    pub fn zero() -> ExpoPoly {
        ExpoPoly::default()
    }

    pub fn one() -> ExpoPoly {
        ExpoPoly::from_ratfun(RatFun::one())
    }

    pub fn from_ratfun(h: RatFun) -> ExpoPoly {
        let mut p = ExpoPoly::zero();
        if !h.is_zero() {
            p.terms.push((ConstExpr::zero(), h));
        }
        p
    }

    /// `h(z) e^{d z}`; the frequency must be usable as an exponent.
    pub fn term(d: ConstExpr, h: RatFun) -> Result<ExpoPoly> {
        if d.denom() != &crate::constfield::Sum::one() {
            return Err(Error::UnsupportedExponent(format!("{d}*z")));
        }
        let mut p = ExpoPoly::zero();
        if !h.is_zero() {
            p.terms.push((d, h));
        }
        Ok(p)
    }

    /// `e^{d z}`.
    pub fn exp(d: ConstExpr) -> Result<ExpoPoly> {
        ExpoPoly::term(d, RatFun::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ConstExpr, &RatFun)> {
        self.terms.iter().map(|(d, h)| (d, h))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = &ConstExpr> {
        self.terms.iter().map(|(d, _)| d)
    }

    /// Coefficient of the frequency-zero part.
    pub fn rational_part(&self) -> RatFun {
        self.terms
            .iter()
            .find(|(d, _)| d.is_structural_zero())
            .map(|(_, h)| h.clone())
            .unwrap_or_default()
    }

    /// The value as a rational function when no exponential survives.
    pub fn as_ratfun(&self) -> Option<RatFun> {
        match self.terms.as_slice() {
            [] => Some(RatFun::zero()),
            [(d, h)] if d.is_structural_zero() => Some(h.clone()),
            _ => None,
        }
    }

    /// True when at least one nonzero frequency is present.
    pub fn is_transcendental(&self) -> bool {
        self.terms.iter().any(|(d, _)| !d.is_structural_zero())
    }

    /// All coefficients are polynomials.
    pub fn is_entire(&self) -> bool {
        self.terms.iter().all(|(_, h)| h.is_polynomial())
    }

    /// Adds `h e^{d z}` in place, merging with a certified-equal frequency.
    fn accumulate(&mut self, d: &ConstExpr, h: &RatFun) -> Result<()> {
        if h.is_zero() {
            return Ok(());
        }
        let mut slot = None;
        for (k, (dk, _)) in self.terms.iter().enumerate() {
            if dk == d {
                slot = Some(k);
                break;
            }
            match (dk - d).is_zero() {
                ZeroVerdict::Zero => {
                    slot = Some(k);
                    break;
                }
                ZeroVerdict::NonZero => {}
                ZeroVerdict::Unknown { .. } => {
                    return Err(Error::UndecidableFrequency(dk.to_string(), d.to_string()));
                }
            }
        }
        match slot {
            Some(k) => {
                let sum = self.terms[k].1.add(h)?;
                if sum.decide_zero()? {
                    self.terms.remove(k);
                } else {
                    self.terms[k].1 = sum;
                }
            }
            None => {
                let pos = self.terms.partition_point(|(dk, _)| dk < d);
                self.terms.insert(pos, (d.clone(), h.clone()));
            }
        }
        Ok(())
    }

    pub fn add(&self, o: &ExpoPoly) -> Result<ExpoPoly> {
        let mut out = self.clone();
        for (d, h) in &o.terms {
            out.accumulate(d, h)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> ExpoPoly {
        ExpoPoly {
            terms: self
                .terms
                .iter()
                .map(|(d, h)| (d.clone(), h.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &ExpoPoly) -> Result<ExpoPoly> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ExpoPoly) -> Result<ExpoPoly> {
        let mut out = ExpoPoly::zero();
        for (d1, h1) in &self.terms {
            for (d2, h2) in &o.terms {
                out.accumulate(&(d1 + d2), &h1.mul(h2)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, f: &RatFun) -> Result<ExpoPoly> {
        let mut out = ExpoPoly::zero();
        for (d, h) in &self.terms {
            out.accumulate(d, &h.mul(f)?)?;
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<ExpoPoly> {
        let mut acc = ExpoPoly::one();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `f(z + c)`: each term `H e^{dz}` becomes `H(z+c) e^{dc} e^{dz}`.
    pub fn shift(&self, c: &ConstExpr) -> Result<ExpoPoly> {
        let mut out = ExpoPoly::zero();
        for (d, h) in &self.terms {
            let factor = (d * c).exp()?;
            out.accumulate(d, &h.shift(c)?.scale(&factor)?)?;
        }
        Ok(out)
    }

    /// Term rule `(H' + d H) e^{dz}`.
    pub fn derivative(&self) -> Result<ExpoPoly> {
        let mut out = ExpoPoly::zero();
        for (d, h) in &self.terms {
            out.accumulate(d, &h.derivative()?.add(&h.scale(d)?)?)?;
        }
        Ok(out)
    }

    /// Identically zero iff no term survives (coefficients were pruned with certified tests).
    pub fn is_zero(&self) -> ZeroVerdict {
        if self.terms.is_empty() {
            ZeroVerdict::Zero
        } else {
            ZeroVerdict::NonZero
        }
    }

    /// Double-precision value at `z`.
    pub fn eval_c64(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (d, h) in &self.terms {
            let v = h.eval_c64(z).ok_or_else(|| Error::Pole(h.to_string()))?;
            acc += v * (d.to_c64() * z).exp();
        }
        Ok(acc)
    }

    pub fn numeric(&self) -> NumericExpo {
        NumericExpo::new(self)
    }
}

impl fmt::Display for ExpoPoly {
    /// Canonical, reparseable form: `P(z)*exp(d*z) + ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (d, h) in &self.terms {
            let hs = h.to_string();
            if d.is_structural_zero() {
                parts.push(hs);
                continue;
            }
            let e = format!("exp({}*z)", d.to_factor_string());
            if hs == "1" {
                parts.push(e);
            } else {
                parts.push(format!("({hs})*{e}"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A quotient of exponential polynomials; never reduced.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpoRational {
    pub num: ExpoPoly,
    pub den: ExpoPoly,
}

impl ExpoRational {
    pub fn new(num: ExpoPoly, den: ExpoPoly) -> Result<ExpoRational> {
        if den.is_zero().is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        Ok(ExpoRational { num, den })
    }

    pub fn from_expoly(p: ExpoPoly) -> ExpoRational {
        ExpoRational {
            num: p,
            den: ExpoPoly::one(),
        }
    }

    pub fn sub(&self, o: &ExpoRational) -> Result<ExpoRational> {
        ExpoRational::new(
            self.num.mul(&o.den)?.sub(&o.num.mul(&self.den)?)?,
            self.den.mul(&o.den)?,
        )
    }

    /// Zero iff the cleared numerator vanishes identically.
    pub fn is_zero(&self) -> ZeroVerdict {
        self.num.is_zero()
    }

    pub fn eval_c64(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.num.eval_c64(z)? / self.den.eval_c64(z)?)
    }
}

impl fmt::Display for ExpoRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::Poly;

    fn c(n: i64) -> ConstExpr {
        ConstExpr::int(n)
    }

    fn two_pi_i() -> ConstExpr {
        c(2) * ConstExpr::pi() * ConstExpr::i()
    }

    fn poly(cs: &[i64]) -> RatFun {
        RatFun::from_poly(Poly::new(cs.iter().map(|&k| c(k)).collect()))
    }

    #[test]
    fn arithmetic_examples() {
        let ez = ExpoPoly::exp(c(1)).unwrap();
        let two_ez = ExpoPoly::term(c(1), RatFun::constant(c(2))).unwrap();
        assert_eq!(ez.add(&ez).unwrap(), two_ez);
        assert_eq!(ez.mul(&ez).unwrap(), ExpoPoly::exp(c(2)).unwrap());
        let z = ExpoPoly::from_ratfun(RatFun::z());
        assert_eq!(ez.add(&z).unwrap().sub(&ez).unwrap(), z);
    }

    #[test]
    fn shift_examples() {
        let zez = ExpoPoly::term(c(1), RatFun::z()).unwrap();
        let expected =
            ExpoPoly::term(c(1), poly(&[1, 1]).scale(&c(1).exp().unwrap()).unwrap()).unwrap();
        assert_eq!(zez.shift(&c(1)).unwrap(), expected);
        let periodic = ExpoPoly::exp(two_pi_i()).unwrap();
        assert_eq!(periodic.shift(&c(1)).unwrap(), periodic);
        assert_eq!(periodic.shift(&c(-1)).unwrap(), periodic);
        let sq = ExpoPoly::from_ratfun(poly(&[0, 0, 1]));
        assert_eq!(
            sq.shift(&c(1)).unwrap(),
            ExpoPoly::from_ratfun(poly(&[1, 2, 1]))
        );
    }

    #[test]
    fn derivative_examples() {
        let d = c(3);
        let e = ExpoPoly::exp(d.clone()).unwrap();
        assert_eq!(
            e.derivative().unwrap(),
            ExpoPoly::term(d, RatFun::constant(c(3))).unwrap()
        );
        let zez = ExpoPoly::term(c(1), RatFun::z()).unwrap();
        assert_eq!(
            zez.derivative().unwrap(),
            ExpoPoly::term(c(1), poly(&[1, 1])).unwrap()
        );
        let w = ExpoPoly::exp(two_pi_i())
            .unwrap()
            .add(&ExpoPoly::from_ratfun(RatFun::z()))
            .unwrap();
        let expected = ExpoPoly::term(two_pi_i(), RatFun::constant(two_pi_i()))
            .unwrap()
            .add(&ExpoPoly::one())
            .unwrap();
        assert_eq!(w.derivative().unwrap(), expected);
    }

    #[test]
    fn zero_test_examples() {
        let ez = ExpoPoly::exp(c(1)).unwrap();
        assert_eq!(ez.sub(&ez).unwrap().is_zero(), ZeroVerdict::Zero);
        let a = ExpoPoly::term(c(1), RatFun::z()).unwrap();
        let b = ExpoPoly::term(c(1), poly(&[1, -1])).unwrap();
        assert_eq!(
            a.add(&b).unwrap().sub(&ez).unwrap().is_zero(),
            ZeroVerdict::Zero
        );
        assert_eq!(
            ez.sub(&ExpoPoly::exp(c(2)).unwrap()).unwrap().is_zero(),
            ZeroVerdict::NonZero
        );
    }

    #[test]
    fn eval_examples() {
        let ez = ExpoPoly::exp(c(1)).unwrap();
        assert!((ez.eval_c64(Complex64::new(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        let w = ExpoPoly::exp(two_pi_i())
            .unwrap()
            .add(&ExpoPoly::from_ratfun(RatFun::z()))
            .unwrap();
        assert!((w.eval_c64(Complex64::new(1.0, 0.0)).unwrap() - 2.0).norm() < 1e-12);
        let zez = ExpoPoly::term(c(1), RatFun::z()).unwrap();
        assert!(
            (zez.eval_c64(Complex64::new(1.0, 0.0)).unwrap() - std::f64::consts::E).norm() < 1e-14
        );
        let pole = ExpoPoly::from_ratfun(RatFun::one().div(&RatFun::z()).unwrap());
        assert!(pole.eval_c64(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn scaled_evaluation_survives_large_arguments() {
        let w = ExpoPoly::exp(c(1))
            .unwrap()
            .add(&ExpoPoly::from_ratfun(RatFun::z()))
            .unwrap();
        let v = w.numeric().eval(Complex64::new(1000.0, 0.0)).unwrap();
        assert!((v.ln_abs() - 1000.0).abs() < 1e-9);
    }
}
