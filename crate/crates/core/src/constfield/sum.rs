//! Finite Q(i)-linear combinations of monomials `pi^k * exp(E)`.
//!
//! Exponents `E` are themselves sums, so the structure is recursive. Every
//! monomial is kept with the rational multiple of `pi*i` in its exponent
//! reduced into `[0, 1/2)`; the extracted quarter turns are folded into the
//! Gaussian coefficient as powers of `i`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

use super::gauss::Gauss;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono {
    pub pi: i32,
    pub exp: Sum,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Sum {
    terms: BTreeMap<Mono, Gauss>,
}

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn is_one(&self) -> bool {
        self.pi == 0 && self.exp.is_zero()
    }

    /// The monomial `pi` (no exponential factor).
    pub fn pi() -> Self {
        Mono {
            pi: 1,
            exp: Sum::zero(),
        }
    }

    /// Builds `pi^pi * exp(exp)` in reduced form, returning the unit that was
    /// split off the exponent.
    pub fn reduced(pi: i32, mut exp: Sum) -> (Gauss, Mono) {
        let key = Mono::pi();
        let mut unit = Gauss::one();
        if let Some(c) = exp.terms.get(&key).cloned() {
            // c*pi with c = a + q i contributes exp(q*pi*i) = i^(2q) when 2q is integral.
            let two = BigRational::from_integer(BigInt::from(2));
            let doubled = &c.im * &two;
            let m = doubled.numer().div_floor(doubled.denom());
            let rem = &c.im - BigRational::from_integer(m.clone()) / &two;
            let m4: i64 = m.mod_floor(&BigInt::from(4)).try_into().unwrap_or(0);
            unit = Gauss::i_pow(m4);
            let reduced = Gauss::new(c.re.clone(), rem);
            if reduced.is_zero() {
                exp.terms.remove(&key);
            } else {
                exp.terms.insert(key, reduced);
            }
        }
        (unit, Mono { pi, exp })
    }

    pub fn mul(&self, o: &Mono) -> (Gauss, Mono) {
        Mono::reduced(self.pi + o.pi, self.exp.add(&o.exp))
    }

    pub fn inv(&self) -> (Gauss, Mono) {
        Mono::reduced(-self.pi, self.exp.neg())
    }

    pub fn depth(&self) -> usize {
        if self.exp.is_zero() {
            0
        } else {
            1 + self.exp.depth()
        }
    }
}

impl Sum {
    pub fn zero() -> Self {
        Sum::default()
    }

    pub fn one() -> Self {
        Sum::scalar(Gauss::one())
    }

    pub fn scalar(c: Gauss) -> Self {
        Sum::term(c, Mono::one())
    }

    pub fn term(c: Gauss, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Sum { terms }
    }

    /// `c * exp(exponent)`, with root-of-unity extraction applied.
    pub fn exp_of(exponent: Sum) -> Self {
        let (unit, m) = Mono::reduced(0, exponent);
        Sum::term(unit, m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Gauss)> {
        self.terms.iter()
    }

    /// The term with the greatest monomial.
    pub fn lead(&self) -> Option<(&Mono, &Gauss)> {
        self.terms.iter().next_back()
    }

    pub fn single_term(&self) -> Option<(&Mono, &Gauss)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// The Gaussian value if this sum has no transcendental part.
    pub fn as_gauss(&self) -> Option<Gauss> {
        match self.terms.len() {
            0 => Some(Gauss::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        self.terms.keys().map(Mono::depth).max().unwrap_or(0)
    }

    fn insert_add(&mut self, m: Mono, c: Gauss) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = existing.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Sum) -> Sum {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Sum {
        Sum {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Sum) -> Sum {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Gauss) -> Sum {
        if k.is_zero() {
            return Sum::zero();
        }
        Sum {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(k)))
                .collect(),
        }
    }

    pub fn mul_term(&self, k: &Gauss, mono: &Mono) -> Sum {
        let mut out = Sum::zero();
        for (m, c) in &self.terms {
            let (unit, prod) = m.mul(mono);
            out.insert_add(prod, c.mul(k).mul(&unit));
        }
        out
    }

    pub fn mul(&self, o: &Sum) -> Sum {
        let mut out = Sum::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let (unit, prod) = m1.mul(m2);
                out.insert_add(prod, c1.mul(c2).mul(&unit));
            }
        }
        out
    }

    /// Inverse of a single-term sum.
    pub fn inv_term(&self) -> Option<Sum> {
        let (m, c) = self.single_term()?;
        let (unit, inv) = m.inv();
        Some(Sum::term(c.inv()?.mul(&unit), inv))
    }

    /// True when the value is a rational multiple of `pi*i` plus nothing else.
    pub fn is_rational(&self) -> bool {
        self.as_gauss().map(|g| g.is_real()).unwrap_or(false)
    }

    pub fn rational_value(&self) -> Option<BigRational> {
        self.as_gauss().filter(Gauss::is_real).map(|g| g.re)
    }
}

fn fmt_term(m: &Mono, c: &Gauss) -> (bool, String) {
    let negative = c.is_real() && c.re.is_negative();
    let c = if negative { -c.clone() } else { c.clone() };
    let mut factors = Vec::new();
    if !c.is_one() || m.is_one() {
        factors.push(c.to_string());
    }
    match m.pi {
        0 => {}
        1 => factors.push("pi".into()),
        k if k > 0 => factors.push(format!("pi^{k}")),
        k => factors.push(format!("pi^({k})")),
    }
    if !m.exp.is_zero() {
        factors.push(format!("exp({})", m.exp));
    }
    (negative, factors.join("*"))
}

impl fmt::Display for Sum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, body) = fmt_term(m, c);
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Rational `n/d` as a Gaussian.
pub fn ratio(n: i64, d: i64) -> Gauss {
    Gauss::from_rational(BigRational::new(n.into(), d.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn pi_i(q: Gauss) -> Sum {
        Sum::term(q.mul(&Gauss::i()), Mono::pi())
    }

    #[test]
    fn full_turn_collapses() {
        let e = Sum::exp_of(pi_i(Gauss::from_int(2)));
        assert_eq!(e, Sum::one());
    }

    #[test]
    fn quarter_turn_is_i() {
        let e = Sum::exp_of(pi_i(ratio(1, 2)));
        assert_eq!(e, Sum::scalar(Gauss::i()));
        let e = Sum::exp_of(pi_i(ratio(-1, 2)));
        assert_eq!(e, Sum::scalar(-Gauss::i()));
    }

    #[test]
    fn residual_phase_is_kept_in_range() {
        // exp(5/3 pi i) = i^3 * exp(1/6 pi i)
        let e = Sum::exp_of(pi_i(ratio(5, 3)));
        let (m, c) = e.single_term().unwrap();
        assert_eq!(*c, -Gauss::i());
        let (_, k) = m.exp.single_term().unwrap();
        assert_eq!(
            *k,
            Gauss::new(BigRational::zero(), BigRational::new(1.into(), 6.into()))
        );
    }

    #[test]
    fn exponentials_multiply_by_adding_exponents() {
        let e1 = Sum::exp_of(Sum::one());
        let em1 = Sum::exp_of(Sum::one().neg());
        assert_eq!(e1.mul(&em1), Sum::one());
        assert_eq!(e1.inv_term().unwrap(), em1);
    }
}
