//! Dense univariate polynomials over an exact field with tri-state zero tests.

use std::fmt;

use crate::constfield::{ComplexInterval, ConstExpr};
use crate::error::{Error, Result};

/// Coefficient field for [`UPoly`].
///
/// Arithmetic is fallible because normalizing some fields (rational functions)
/// requires zero tests that may be undecidable.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// Cheap syntactic test; `true` implies the value is zero.
    fn is_structural_zero(&self) -> bool;
    /// Certified zero test: `Ok(true)` zero, `Ok(false)` nonzero.
    fn decide_zero(&self) -> Result<bool>;
    fn add(&self, o: &Self) -> Result<Self>;
    fn sub(&self, o: &Self) -> Result<Self>;
    fn mul(&self, o: &Self) -> Result<Self>;
    fn div(&self, o: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    /// Complex enclosure at roughly `bits` of precision, when the field has one.
    fn enclose(&self, _bits: u32) -> Option<ComplexInterval> {
        None
    }
}

impl Scalar for ConstExpr {
    fn zero() -> Self {
        ConstExpr::zero()
    }
    fn one() -> Self {
        ConstExpr::one()
    }
    fn from_i64(n: i64) -> Self {
        ConstExpr::int(n)
    }
    fn is_structural_zero(&self) -> bool {
        ConstExpr::is_structural_zero(self)
    }
    fn decide_zero(&self) -> Result<bool> {
        self.is_zero().decide(self)
    }
    fn add(&self, o: &Self) -> Result<Self> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self) -> Result<Self> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(self * o)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        self.checked_div(o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn enclose(&self, bits: u32) -> Option<ComplexInterval> {
        self.eval_interval(bits).ok()
    }
}

/// `true` when the Sylvester matrix of `a` and `b` is certified nonsingular,
/// i.e. interval elimination finds a pivot excluding zero in every column.
fn certainly_coprime<S: Scalar>(a: &UPoly<S>, b: &UPoly<S>) -> bool {
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
        return false;
    };
    if m == 0 || n == 0 {
        return true;
    }
    let size = m + n;
    for bits in [128, 512] {
        let (Some(ea), Some(eb)) = (
            a.coeffs
                .iter()
                .map(|c| c.enclose(bits))
                .collect::<Option<Vec<_>>>(),
            b.coeffs
                .iter()
                .map(|c| c.enclose(bits))
                .collect::<Option<Vec<_>>>(),
        ) else {
            return false;
        };
        let mut rows = vec![vec![ComplexInterval::zero(); size]; size];
        for i in 0..n {
            for (k, c) in ea.iter().enumerate() {
                rows[i][i + k] = c.clone();
            }
        }
        for i in 0..m {
            for (k, c) in eb.iter().enumerate() {
                rows[n + i][i + k] = c.clone();
            }
        }
        if interval_nonsingular(rows, bits) {
            return true;
        }
    }
    false
}

fn interval_nonsingular(mut rows: Vec<Vec<ComplexInterval>>, bits: u32) -> bool {
    let size = rows.len();
    for col in 0..size {
        let magnitude = |z: &ComplexInterval| {
            let (re, im) = z.mid_f64();
            re.hypot(im)
        };
        let Some(p) = (col..size)
            .filter(|&r| !rows[r][col].contains_zero())
            .max_by(|&x, &y| magnitude(&rows[x][col]).total_cmp(&magnitude(&rows[y][col])))
        else {
            return false;
        };
        rows.swap(col, p);
        let Some(inv) = rows[col][col].inv(bits) else {
            return false;
        };
        for r in col + 1..size {
            let f = rows[r][col].mul(&inv, bits).neg();
            for k in col..size {
                let t = rows[col][k].mul(&f, bits);
                rows[r][k] = rows[r][k].add(&t, bits);
            }
        }
    }
    true
}

/// Coefficients in ascending powers; no structurally zero leading entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Default for UPoly<S> {
    fn default() -> Self {
        UPoly { coeffs: Vec::new() }
    }
}

impl<S: Scalar> UPoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(S::is_structural_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        UPoly::new(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(S::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        UPoly::new(vec![S::zero(), S::one()])
    }

    pub fn monomial(c: S, k: usize) -> Self {
        let mut v = vec![S::zero(); k];
        v.push(c);
        UPoly::new(v)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&S> {
        self.coeffs.last()
    }

    /// Drops leading coefficients that are certified zero.
    pub fn certify(mut self) -> Result<Self> {
        while let Some(c) = self.coeffs.last() {
            if c.decide_zero()? {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        Ok(self)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|k| self.coeff(k).add(&o.coeff(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(UPoly::new(v))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|k| self.coeff(k).sub(&o.coeff(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(UPoly::new(v))
    }

    pub fn neg(&self) -> Self {
        UPoly {
            coeffs: self.coeffs.iter().map(S::neg).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.is_zero() || o.is_zero() {
            return Ok(UPoly::zero());
        }
        let mut v = vec![S::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_structural_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(UPoly::new(v))
    }

    pub fn scale(&self, k: &S) -> Result<Self> {
        Ok(UPoly::new(
            self.coeffs
                .iter()
                .map(|c| c.mul(k))
                .collect::<Result<Vec<_>>>()?,
        ))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = UPoly::one();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Result<Self> {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul(&S::from_i64(k as i64)))
            .collect::<Result<Vec<_>>>()?;
        Ok(UPoly::new(v))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &S) -> Result<S> {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }

    /// `self(inner)` by Horner's scheme.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner)?.add(&UPoly::constant(c.clone()))?;
        }
        Ok(acc)
    }

    /// Leading coefficient after certification, or an error for the zero polynomial.
    fn certified_lead(&self) -> Result<(usize, S)> {
        let p = self.clone().certify()?;
        match (p.degree(), p.lead()) {
            (Some(d), Some(c)) => Ok((d, c.clone())),
            _ => Err(Error::DivisionByZero("zero polynomial".into())),
        }
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let (dd, lc) = divisor.certified_lead()?;
        let divisor = UPoly::new(divisor.coeffs[..=dd].to_vec());
        let mut r = self.clone().certify()?;
        let mut q = vec![S::zero(); r.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let k = rd - dd;
            let t = r.lead().unwrap().div(&lc)?;
            q[k] = t.clone();
            let sub = divisor.scale(&t)?.shift_up(k);
            let mut next = r.sub(&sub)?;
            // the leading term cancels exactly by construction
            next.coeffs.truncate(rd);
            r = UPoly::new(next.coeffs).certify()?;
        }
        Ok((UPoly::new(q), r))
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![S::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    /// Scales to a monic polynomial.
    pub fn monic(&self) -> Result<Self> {
        match self.clone().certify()?.lead() {
            None => Ok(UPoly::zero()),
            Some(lc) => {
                let inv = S::one().div(lc)?;
                let mut p = self.clone().certify()?.scale(&inv)?;
                if let Some(last) = p.coeffs.last_mut() {
                    *last = S::one();
                }
                Ok(p)
            }
        }
    }

    /// Monic greatest common divisor (zero if both inputs vanish).
    pub fn gcd(&self, o: &Self) -> Result<Self> {
        let mut a = self.clone().certify()?;
        let mut b = o.clone().certify()?;
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        if certainly_coprime(&a, &b) {
            return Ok(Self::one());
        }
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r.monic()?;
        }
        a.monic()
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Precondition(format!(
                "{divisor} does not divide {self}"
            )));
        }
        Ok(q)
    }

    /// Certified identity test.
    pub fn decide_zero(&self) -> Result<bool> {
        for c in &self.coeffs {
            if !c.decide_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<UPoly<T>> {
        Ok(UPoly::new(
            self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?,
        ))
    }
}

/// Renders `c_k*v^k` terms in descending order with the given variable name.
pub fn format_poly<S: Scalar>(p: &UPoly<S>, var: &str, factor: impl Fn(&S) -> String) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in p.coeffs.iter().enumerate().rev() {
        if c.is_structural_zero() {
            continue;
        }
        let pow = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let cs = factor(c);
        let term = if pow.is_empty() {
            cs
        } else if cs == "1" {
            pow
        } else if cs == "-1" {
            format!("-{pow}")
        } else {
            format!("{cs}*{pow}")
        };
        parts.push(term);
    }
    let mut out = String::new();
    for (k, t) in parts.iter().enumerate() {
        if k == 0 {
            out.push_str(t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(t);
        }
    }
    out
}

impl<S: Scalar> fmt::Display for UPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(self, "x", |c| format!("({c})")))
    }
}
