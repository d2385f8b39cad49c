//! Exact rational functions of `z` over [`ConstExpr`].

use std::fmt;

use num_complex::Complex64;

use crate::constfield::ConstExpr;
use crate::error::{Error, Result};
use crate::linsolve;
use crate::poly::{format_poly, Scalar, UPoly};

/// Polynomial in `z` over exact constants.
pub type Poly = UPoly<ConstExpr>;

impl Poly {
    /// `p(z + c)`.
    pub fn shift(&self, c: &ConstExpr) -> Result<Poly> {
        self.compose(&Poly::new(vec![c.clone(), ConstExpr::one()]))
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs().iter().map(ConstExpr::to_c64).collect()
    }

    pub fn display_z(&self) -> String {
        format_poly(self, "z", ConstExpr::to_factor_string)
    }
}

/// Reduced quotient `num/den` with monic `den`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl Default for RatFun {
    fn default() -> Self {
        RatFun::zero()
    }
}

impl RatFun {
    /// Normalizes `num/den`: common factors removed, denominator monic.
    pub fn new(num: Poly, den: Poly) -> Result<RatFun> {
        let den = den.certify()?;
        if den.is_zero() {
            return Err(Error::DivisionByZero(format!("({})/0", num.display_z())));
        }
        let num = num.certify()?;
        if num.is_zero() {
            return Ok(RatFun::zero());
        }
        let (num, den) = if den.is_constant() || num.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den)?;
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g)?, den.div_exact(&g)?)
            }
        };
        let lc = den.lead().expect("nonzero").clone();
        if lc.is_one() {
            return Ok(RatFun { num, den });
        }
        let inv = lc.inv()?;
        Ok(RatFun {
            num: num.scale(&inv)?,
            den: den.monic()?,
        })
    }

    pub fn zero() -> RatFun {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFun {
        RatFun::constant(ConstExpr::one())
    }

    pub fn constant(c: ConstExpr) -> RatFun {
        RatFun {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    /// The identity function `z`.
    pub fn z() -> RatFun {
        RatFun::from_poly(Poly::x())
    }

    pub fn from_poly(p: Poly) -> RatFun {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<Poly> {
        // den is monic, so a constant den is exactly 1
        self.is_polynomial().then(|| self.num.clone())
    }

    pub fn as_constant(&self) -> Option<ConstExpr> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn add(&self, o: &RatFun) -> Result<RatFun> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        if self.den == o.den {
            return RatFun::new(self.num.add(&o.num)?, self.den.clone());
        }
        // any common factor of the sum divides g = gcd(den, o.den)
        let g = self.den.gcd(&o.den)?;
        let (b, d) = (self.den.div_exact(&g)?, o.den.div_exact(&g)?);
        let num = self.num.mul(&d)?.add(&o.num.mul(&b)?)?.certify()?;
        if num.is_zero() {
            return Ok(RatFun::zero());
        }
        let den = b.mul(&o.den)?;
        if g.is_constant() {
            return RatFun::reduced(num, den);
        }
        let h = num.gcd(&g)?;
        if h.is_constant() {
            RatFun::reduced(num, den)
        } else {
            RatFun::reduced(num.div_exact(&h)?, den.div_exact(&h)?)
        }
    }

    /// Makes an already coprime pair canonical.
    fn reduced(num: Poly, den: Poly) -> Result<RatFun> {
        let lc = den.lead().expect("nonzero").clone();
        if lc.is_one() {
            return Ok(RatFun { num, den });
        }
        let inv = lc.inv()?;
        Ok(RatFun {
            num: num.scale(&inv)?,
            den: den.monic()?,
        })
    }

    pub fn sub(&self, o: &RatFun) -> Result<RatFun> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFun) -> Result<RatFun> {
        if self.is_zero() || o.is_zero() {
            return Ok(RatFun::zero());
        }
        if self.is_polynomial() && o.is_polynomial() {
            return Ok(RatFun {
                num: self.num.mul(&o.num)?,
                den: Poly::one(),
            });
        }
        // cross-cancel: the inputs are already reduced
        let (a, d) = cancel(&self.num, &o.den)?;
        let (c, b) = cancel(&o.num, &self.den)?;
        RatFun::reduced(a.mul(&c)?, b.mul(&d)?)
    }

    pub fn div(&self, o: &RatFun) -> Result<RatFun> {
        if o.is_zero() {
            return Err(Error::DivisionByZero(format!("{self} / 0")));
        }
        self.mul(&RatFun::reduced(o.den.clone(), o.num.clone())?)
    }

    pub fn scale(&self, c: &ConstExpr) -> Result<RatFun> {
        if c.is_structural_zero() {
            return Ok(RatFun::zero());
        }
        Ok(RatFun {
            num: self.num.scale(c)?.certify()?,
            den: self.den.clone(),
        })
    }

    pub fn pow(&self, k: i64) -> Result<RatFun> {
        let base = if k < 0 {
            RatFun::one().div(self)?
        } else {
            self.clone()
        };
        let mut acc = RatFun::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// `f(z + c)`, expanded exactly.
    pub fn shift(&self, c: &ConstExpr) -> Result<RatFun> {
        // shifting is a ring automorphism: coprimality and monic den survive
        Ok(RatFun {
            num: self.num.shift(c)?,
            den: self.den.shift(c)?,
        })
    }

    pub fn derivative(&self) -> Result<RatFun> {
        if self.is_polynomial() {
            return Ok(RatFun {
                num: self.num.derivative()?,
                den: self.den.clone(),
            });
        }
        let n = self
            .num
            .derivative()?
            .mul(&self.den)?
            .sub(&self.num.mul(&self.den.derivative()?)?)?;
        RatFun::new(n, self.den.mul(&self.den)?)
    }

    /// Certified identity test against zero.
    pub fn decide_zero(&self) -> Result<bool> {
        self.num.decide_zero()
    }

    /// Certified equality.
    pub fn equals(&self, o: &RatFun) -> Result<bool> {
        self.sub(o)?.decide_zero()
    }

    /// The limit at infinity when `f` stays bounded there.
    pub fn limit_at_infinity(&self) -> Option<ConstExpr> {
        let Some(dn) = self.num.degree() else {
            return Some(ConstExpr::zero());
        };
        let dd = self.den.degree().unwrap_or(0);
        match dn.cmp(&dd) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Less => Some(ConstExpr::zero()),
            std::cmp::Ordering::Equal => self.num.lead().cloned(),
        }
    }

    /// Numeric evaluation; `None` at a pole.
    pub fn eval_c64(&self, z: Complex64) -> Option<Complex64> {
        NumericRatFun::from(self).eval(z)
    }

    pub fn display_z(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.display_z();
        if self.is_polynomial() {
            return write!(f, "{n}");
        }
        let d = self.den.display_z();
        let wrap = |s: String, single: bool| if single { s } else { format!("({s})") };
        let n_single = self
            .num
            .coeffs()
            .iter()
            .filter(|c| !c.is_structural_zero())
            .count()
            <= 1
            && !n.contains(' ');
        let d_single = self
            .den
            .coeffs()
            .iter()
            .filter(|c| !c.is_structural_zero())
            .count()
            <= 1
            && !d.contains(' ')
            && !d.contains('*');
        write!(f, "{}/{}", wrap(n, n_single), wrap(d, d_single))
    }
}

impl Scalar for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn from_i64(n: i64) -> Self {
        RatFun::constant(ConstExpr::int(n))
    }
    fn is_structural_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn decide_zero(&self) -> Result<bool> {
        RatFun::decide_zero(self)
    }
    fn add(&self, o: &Self) -> Result<Self> {
        RatFun::add(self, o)
    }
    fn sub(&self, o: &Self) -> Result<Self> {
        RatFun::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        RatFun::mul(self, o)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        RatFun::div(self, o)
    }
    fn neg(&self) -> Self {
        RatFun::neg(self)
    }
}

/// Removes the common factor of `p` and `q`.
fn cancel(p: &Poly, q: &Poly) -> Result<(Poly, Poly)> {
    if p.is_constant() || q.is_constant() {
        return Ok((p.clone(), q.clone()));
    }
    let g = p.gcd(q)?;
    if g.is_constant() {
        Ok((p.clone(), q.clone()))
    } else {
        Ok((p.div_exact(&g)?, q.div_exact(&g)?))
    }
}

/// Double-precision image of a [`RatFun`] for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct NumericRatFun {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn horner_d(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &a)| {
            acc * z + a * k as f64
        })
}

impl From<&RatFun> for NumericRatFun {
    fn from(f: &RatFun) -> Self {
        NumericRatFun {
            num: f.num.to_c64(),
            den: f.den.to_c64(),
        }
    }
}

impl NumericRatFun {
    pub fn eval(&self, z: Complex64) -> Option<Complex64> {
        let d = horner(&self.den, z);
        (d.norm() > 0.0).then(|| horner(&self.num, z) / d)
    }

    /// Value and derivative.
    pub fn eval_with_derivative(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        let n = horner(&self.num, z);
        let d = horner(&self.den, z);
        if d.norm() == 0.0 {
            return None;
        }
        let dn = horner_d(&self.num, z);
        let dd = horner_d(&self.den, z);
        Some((n / d, (dn * d - n * dd) / (d * d)))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.len() <= 1
    }

    /// `sum |c_k| |z|^k / |den(z)|`: the magnitude scale of the numerator's terms.
    pub fn magnitude(&self, z: Complex64) -> f64 {
        let a = z.norm();
        let n = self.num.iter().rev().fold(0.0, |acc, c| acc * a + c.norm());
        n / horner(&self.den, z).norm()
    }

    pub fn constant(c: Complex64) -> Self {
        NumericRatFun {
            num: vec![c],
            den: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// `self + c`, i.e. `num + c den` over the same denominator.
    pub fn add_constant(&mut self, c: Complex64) {
        if self.num.len() < self.den.len() {
            self.num.resize(self.den.len(), Complex64::new(0.0, 0.0));
        }
        for (k, d) in self.den.iter().enumerate() {
            self.num[k] += c * d;
        }
    }
}

/// `p'/p` in lowest terms.
pub fn log_derivative(p: &Poly) -> Result<RatFun> {
    let p = p.clone().certify()?;
    if p.is_zero() {
        return Err(Error::Precondition(
            "logarithmic derivative of the zero polynomial".into(),
        ));
    }
    RatFun::new(p.derivative()?, p)
}

/// Finds a monic polynomial `H` with `H'/H = f`, if one exists.
///
/// The degree of `H` is read off the `1/z` coefficient of `f` at infinity;
/// the coefficients then solve the linear system `H' den(f) = num(f) H`.
/// No factorization is needed.
pub fn solve_poly_logderiv(f: &RatFun) -> Result<Option<Poly>> {
    if f.decide_zero()? {
        return Ok(Some(Poly::one()));
    }
    let (num, den) = (f.numer(), f.denom());
    let (Some(dn), Some(dd)) = (num.degree(), den.degree()) else {
        return Ok(None);
    };
    if dn + 1 != dd {
        // H'/H decays like n/z; anything else cannot be a logarithmic derivative
        return Ok(None);
    }
    let residue = num.lead().expect("nonzero").clone();
    let Some(n) = nonnegative_integer(&residue)? else {
        return Ok(None);
    };
    if n == 0 {
        return Ok(None);
    }
    // coefficient of z^m in H' den - num H, with h_n = 1
    let rows = n + dd;
    let mut a = vec![vec![ConstExpr::zero(); n]; rows];
    let mut b = vec![ConstExpr::zero(); rows];
    for j in 0..=n {
        for m in 0..rows {
            let mut c = ConstExpr::zero();
            if j >= 1 && m + 1 >= j {
                c = &c + &(&den.coeff(m + 1 - j) * &ConstExpr::int(j as i64));
            }
            if m >= j {
                c = &c - &num.coeff(m - j);
            }
            if j == n {
                b[m] = -&c;
            } else {
                a[m][j] = c;
            }
        }
    }
    let Some(h) = linsolve::solve(&a, &b)? else {
        return Ok(None);
    };
    let mut coeffs = h;
    coeffs.push(ConstExpr::one());
    let hpoly = Poly::new(coeffs);
    let residual = hpoly.derivative()?.mul(den)?.sub(&num.mul(&hpoly)?)?;
    Ok(residual.decide_zero()?.then_some(hpoly))
}

fn nonnegative_integer(c: &ConstExpr) -> Result<Option<usize>> {
    if let Some(k) = c.as_integer() {
        return Ok(usize::try_from(k).ok());
    }
    let approx = c.to_c64();
    if !approx.re.is_finite() || approx.im.abs() > 0.5 || approx.re < -0.5 {
        return Ok(None);
    }
    let k = approx.re.round() as i64;
    if (c - &ConstExpr::int(k)).is_zero().decide(c)? {
        Ok(Some(k as usize))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> ConstExpr {
        ConstExpr::int(n)
    }

    fn p(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&k| c(k)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFun {
        RatFun::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn division_by_constant_polynomial() {
        let f = RatFun::from_poly(p(&[2, 4]));
        let g = f.div(&RatFun::from_poly(p(&[-2]))).unwrap();
        assert_eq!(g, RatFun::from_poly(p(&[-1, -2])));
        let h = RatFun::one().div(&RatFun::from_poly(p(&[0, 3]))).unwrap();
        assert_eq!(h.denom(), &p(&[0, 1]));
    }

    #[test]
    fn arithmetic_examples() {
        let z = RatFun::z();
        let inv_z = rf(&[1], &[0, 1]);
        assert_eq!(z.mul(&inv_z).unwrap(), RatFun::one());
        let diff = rf(&[1, 1], &[0, 1]).sub(&rf(&[-1, 1], &[0, 1])).unwrap();
        assert_eq!(diff, rf(&[2], &[0, 1]));
        let s = rf(&[1], &[-1, 1]).add(&rf(&[1], &[1, 1])).unwrap();
        assert_eq!(s, rf(&[0, 2], &[-1, 0, 1]));
        assert!(z.div(&RatFun::zero()).is_err());
    }

    #[test]
    fn normalization_is_monic_and_reduced() {
        let f = rf(&[-2, 0, 2], &[2, 2]); // (2z^2-2)/(2z+2) = z-1
        assert_eq!(f, rf(&[-1, 1], &[1]));
        let g = rf(&[1], &[0, 3]);
        assert_eq!(g.denom(), &p(&[0, 1]));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(RatFun::z().shift(&c(1)).unwrap(), rf(&[1, 1], &[1]));
        assert_eq!(rf(&[1], &[0, 1]).shift(&c(-1)).unwrap(), rf(&[1], &[-1, 1]));
        assert_eq!(
            rf(&[0, 0, 1], &[1]).shift(&c(1)).unwrap(),
            rf(&[1, 2, 1], &[1])
        );
    }

    #[test]
    fn log_derivative_examples() {
        assert_eq!(log_derivative(&p(&[0, 1])).unwrap(), rf(&[1], &[0, 1]));
        assert_eq!(
            log_derivative(&p(&[1, 0, 1])).unwrap(),
            rf(&[0, 2], &[1, 0, 1])
        );
        assert_eq!(log_derivative(&p(&[5])).unwrap(), RatFun::zero());
        assert!(log_derivative(&Poly::zero()).is_err());
    }

    #[test]
    fn logderiv_solver_examples() {
        assert_eq!(
            solve_poly_logderiv(&rf(&[1], &[0, 1])).unwrap(),
            Some(p(&[0, 1]))
        );
        // (1+z)/z - 1 = 1/z, the Example 1 amplitude
        let f = rf(&[1, 1], &[0, 1]).sub(&RatFun::one()).unwrap();
        assert_eq!(solve_poly_logderiv(&f).unwrap(), Some(p(&[0, 1])));
        // 2/(z-3) -> (z-3)^2
        assert_eq!(
            solve_poly_logderiv(&rf(&[2], &[-3, 1])).unwrap(),
            Some(p(&[9, -6, 1]))
        );
        assert_eq!(solve_poly_logderiv(&rf(&[1], &[0, 2])).unwrap(), None);
        assert_eq!(solve_poly_logderiv(&RatFun::one()).unwrap(), None);
        // 1/z + 1/(z-1) summed is a log-derivative; 1/z + 2/(z-1) with a wrong sign is not
        let good = rf(&[1], &[0, 1]).add(&rf(&[1], &[-1, 1])).unwrap();
        assert_eq!(solve_poly_logderiv(&good).unwrap(), Some(p(&[0, -1, 1])));
        let bad = rf(&[3], &[0, 1]).sub(&rf(&[1], &[-1, 1])).unwrap();
        assert_eq!(solve_poly_logderiv(&bad).unwrap(), None);
    }

    #[test]
    fn transcendental_coefficients_survive() {
        let e = c(1).exp().unwrap();
        let k = &e - &c(-1).exp().unwrap();
        let f = RatFun::new(Poly::new(vec![c(0), k.clone()]), p(&[0, 1])).unwrap();
        assert_eq!(f, RatFun::constant(k));
    }
}
