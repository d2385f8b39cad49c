//! The equation model
//!
//! ```text
//! w(z+1) - w(z-1) + a(z) w'(z)/w(z) = P(z, w)/Q(z, w)
//! ```
//!
//! with `P`, `Q` polynomials in `w` over rational functions of `z`. The left
//! side is fixed; equations differ only in `a` and the right side.

use std::fmt;

use crate::constfield::{ConstExpr, Gauss, Mono, Sum};
use crate::error::{Error, Result};
use crate::expoly::{ExpoPoly, ExpoRational};
use crate::poly::{format_poly, UPoly};
use crate::ratfun::{Poly, RatFun};

/// Polynomial in `w` with rational-function coefficients.
pub type WPoly = UPoly<RatFun>;

fn ratfun_factor(f: &RatFun) -> String {
    let s = f.to_string();
    if s.contains(' ') || s.contains('/') || s.starts_with('-') && s[1..].contains(['+', '-', ' '])
    {
        format!("({s})")
    } else {
        s
    }
}

pub fn display_wpoly(p: &WPoly) -> String {
    format_poly(p, "w", ratfun_factor)
}

/// Irreducible right-hand side `P/Q` with monic `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct WRational {
    p: WPoly,
    q: WPoly,
}

impl WRational {
    pub fn p(&self) -> &WPoly {
        &self.p
    }

    pub fn q(&self) -> &WPoly {
        &self.q
    }

    /// `deg_w R = max(deg_w P, deg_w Q)`.
    pub fn degree(&self) -> usize {
        self.p
            .degree()
            .unwrap_or(0)
            .max(self.q.degree().unwrap_or(0))
    }

    pub fn deg_p(&self) -> Option<usize> {
        self.p.degree()
    }

    pub fn deg_q(&self) -> usize {
        self.q.degree().unwrap_or(0)
    }

    /// A polynomial right-hand side.
    pub fn polynomial(p: WPoly) -> Result<WRational> {
        normalize_rhs(&p, &WPoly::one())
    }
}

impl fmt::Display for WRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = display_wpoly(&self.p);
        if self.q == WPoly::one() {
            return write!(f, "{p}");
        }
        write!(f, "({p})/({})", display_wpoly(&self.q))
    }
}

/// Removes the `w`-gcd of `P` and `Q` and makes `Q` monic.
pub fn normalize_rhs(p: &WPoly, q: &WPoly) -> Result<WRational> {
    let q = q.clone().certify()?;
    if q.is_zero() {
        return Err(Error::DivisionByZero("Q(z, w) is identically zero".into()));
    }
    let p = p.clone().certify()?;
    let (p, q) = if p.is_zero() || q.is_constant() {
        (p, q)
    } else {
        let g = p.gcd(&q)?;
        if g.is_constant() {
            (p, q)
        } else {
            (p.div_exact(&g)?, q.div_exact(&g)?)
        }
    };
    let lc = q.lead().expect("nonzero").clone();
    let inv = RatFun::one().div(&lc)?;
    Ok(WRational {
        p: p.scale(&inv)?,
        q: q.monic()?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DelayEquation {
    pub a: RatFun,
    pub rhs: WRational,
}

impl DelayEquation {
    pub fn new(a: RatFun, rhs: WRational) -> Result<DelayEquation> {
        if rhs.p.decide_zero()? {
            return Err(Error::Precondition(
                "the right-hand side vanishes identically".into(),
            ));
        }
        Ok(DelayEquation { a, rhs })
    }
}

impl fmt::Display for DelayEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a := {}; rhs := {}", self.a, self.rhs)
    }
}

/// The two reduced shapes admitting transcendental entire solutions.
#[derive(Clone, Debug, PartialEq)]
pub enum ReducedForm {
    /// `rhs = a1 w + a0`
    Linear {
        a1: RatFun,
        a0: RatFun,
    },
    /// `rhs = (a2 w^2 + a1 w + a0)/w`, `a0 != 0`
    DividedQuadratic {
        a2: RatFun,
        a1: RatFun,
        a0: RatFun,
    },
    NotReduced,
}

impl ReducedForm {
    pub fn name(&self) -> &'static str {
        match self {
            ReducedForm::Linear { .. } => "linear",
            ReducedForm::DividedQuadratic { .. } => "divided_quadratic",
            ReducedForm::NotReduced => "not_reduced",
        }
    }
}

/// Recognizes the linear and divided-quadratic shapes of a normalized equation.
pub fn classify(eq: &DelayEquation) -> ReducedForm {
    let (p, q) = (&eq.rhs.p, &eq.rhs.q);
    let dp = p.degree();
    match q.degree() {
        Some(0) if dp.is_some_and(|d| d <= 1) => ReducedForm::Linear {
            a1: p.coeff(1),
            a0: p.coeff(0),
        },
        Some(1) if q.coeff(0).is_zero() && dp.is_some_and(|d| d <= 2) && !p.coeff(0).is_zero() => {
            ReducedForm::DividedQuadratic {
                a2: p.coeff(2),
                a1: p.coeff(1),
                a0: p.coeff(0),
            }
        }
        _ => ReducedForm::NotReduced,
    }
}

/// Horner evaluation of a `w`-polynomial at an exponential polynomial.
fn compose(p: &WPoly, w: &ExpoPoly) -> Result<ExpoPoly> {
    let mut acc = ExpoPoly::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(w)?.add(&ExpoPoly::from_ratfun(c.clone()))?;
    }
    Ok(acc)
}

/// `R(z, w(z))` as an unreduced quotient.
pub fn substitute(r: &WRational, w: &ExpoPoly) -> Result<ExpoRational> {
    let den = compose(&r.q, w)?;
    if den.is_zero().is_zero() {
        return Err(Error::DenominatorVanishes);
    }
    ExpoRational::new(compose(&r.p, w)?, den)
}

/// Exact check that `w` solves `eq` identically.
pub fn verify_solution(eq: &DelayEquation, w: &ExpoPoly) -> Result<bool> {
    if !w.is_entire() {
        return Err(Error::Precondition(format!("{w} is not entire")));
    }
    if w.is_zero().is_zero() {
        return Err(Error::Precondition("w vanishes identically".into()));
    }
    let one = ConstExpr::one();
    let delta = w.shift(&one)?.sub(&w.shift(&-&one)?)?;
    let lhs = ExpoRational::new(
        delta.mul(w)?.add(&w.derivative()?.scale(&eq.a)?)?,
        w.clone(),
    )?;
    let rhs = match substitute(&eq.rhs, w) {
        Ok(r) => r,
        Err(Error::DenominatorVanishes) => return Ok(false),
        Err(e) => return Err(e),
    };
    let diff = lhs.sub(&rhs)?;
    Ok(diff.is_zero().is_zero() && diff.den.is_zero().is_nonzero())
}

/// Builds the equation solved by `w = H(z) e^{dz} + r(z)`.
///
/// Eliminating `e^{dz} = (w - r)/H` from `w(z+1) - w(z-1)` and `a w'/w`
/// gives
///
/// ```text
/// rhs = A (w - r) + Δr + (B (w - r) + a r') / w,
/// A = (H(z+1)e^d - H(z-1)e^{-d}) / H,   B = a (H'/H + d)
/// ```
///
/// which is linear when `r = 0` and divided-quadratic otherwise.
pub fn invert(h: &Poly, d: &ConstExpr, r: &RatFun, a: &RatFun) -> Result<DelayEquation> {
    if h.decide_zero()? {
        return Err(Error::Precondition("H vanishes identically".into()));
    }
    if d.is_zero().decide(d)? {
        return Err(Error::Precondition("frequency d must be nonzero".into()));
    }
    if !r.is_polynomial() {
        return Err(Error::Precondition(format!(
            "r = {r} must be a polynomial for w to be entire"
        )));
    }
    let one = ConstExpr::one();
    let hr = RatFun::from_poly(h.clone());
    let ed = d.exp()?;
    let emd = (-d).exp()?;
    let big_a = RatFun::from_poly(
        h.shift(&one)?
            .scale(&ed)?
            .sub(&h.shift(&-&one)?.scale(&emd)?)?,
    )
    .div(&hr)?;
    let big_b = a.mul(
        &hr.derivative()?
            .div(&hr)?
            .add(&RatFun::constant(d.clone()))?,
    )?;
    let delta_r = r.shift(&one)?.sub(&r.shift(&-&one)?)?;
    let c0 = a.mul(&r.derivative()?)?.sub(&big_b.mul(r)?)?;
    let c1 = delta_r.add(&big_b)?.sub(&big_a.mul(r)?)?;
    let p = WPoly::new(vec![c0, c1, big_a]);
    let q = WPoly::new(vec![RatFun::zero(), RatFun::one()]);
    DelayEquation::new(a.clone(), normalize_rhs(&p, &q)?)
}

/// Outcome of the nonzero-rational-root obstruction test.
#[derive(Clone, Debug, PartialEq)]
pub enum Obstruction {
    /// `Q` has a nonzero rational root that is not a root of `P`.
    Obstructed {
        root: RatFun,
    },
    NotObstructed,
    Undetermined {
        reason: String,
    },
}

impl Obstruction {
    pub fn name(&self) -> &'static str {
        match self {
            Obstruction::Obstructed { .. } => "obstructed",
            Obstruction::NotObstructed => "not_obstructed",
            Obstruction::Undetermined { .. } => "undetermined",
        }
    }
}

/// Detects denominators with nonzero rational roots, which rule out entire
/// solutions of hyper-order below one.
pub fn entire_obstruction(eq: &DelayEquation) -> Obstruction {
    match obstruction_inner(eq) {
        Ok(o) => o,
        Err(e) => Obstruction::Undetermined {
            reason: e.to_string(),
        },
    }
}

fn obstruction_inner(eq: &DelayEquation) -> Result<Obstruction> {
    let q = &eq.rhs.q;
    let roots = match q.degree() {
        Some(0) | None => return Ok(Obstruction::NotObstructed),
        Some(1) => vec![q.coeff(0).neg().div(&q.coeff(1))?],
        Some(2) => {
            let (q2, q1, q0) = (q.coeff(2), q.coeff(1), q.coeff(0));
            let disc = q1
                .mul(&q1)?
                .sub(&RatFun::constant(ConstExpr::int(4)).mul(&q2)?.mul(&q0)?)?;
            let s = match sqrt_ratfun(&disc)? {
                SquareRoot::Root(s) => s,
                // roots are not rational functions of z
                SquareRoot::NotSquare => return Ok(Obstruction::NotObstructed),
                SquareRoot::Unrepresentable => {
                    return Ok(Obstruction::Undetermined {
                        reason: format!(
                            "square root of the leading coefficient of {disc} is not representable"
                        ),
                    });
                }
            };
            let two_q2 = q2.scale(&ConstExpr::int(2))?;
            vec![
                q1.neg().add(&s)?.div(&two_q2)?,
                q1.neg().sub(&s)?.div(&two_q2)?,
            ]
        }
        Some(_) => {
            return Ok(Obstruction::Undetermined {
                reason: "deg_w Q > 2: root detection not attempted".into(),
            });
        }
    };
    for root in roots {
        if root.decide_zero()? {
            continue;
        }
        if !eq.rhs.p.eval(&root)?.decide_zero()? {
            return Ok(Obstruction::Obstructed { root });
        }
    }
    Ok(Obstruction::NotObstructed)
}

/// Exact square root of a constant when it is a single monomial with a square coefficient.
fn const_sqrt(c: &ConstExpr) -> Option<ConstExpr> {
    if c.is_structural_zero() {
        return Some(ConstExpr::zero());
    }
    if c.denom() != &Sum::one() {
        return None;
    }
    let (m, g) = c.numer().single_term()?;
    if m.pi % 2 != 0 {
        return None;
    }
    let root = g.sqrt()?;
    let half = Sum::scalar(Gauss::from_rational(num_rational::BigRational::new(
        1.into(),
        2.into(),
    )));
    let (unit, mono) = Mono::reduced(m.pi / 2, m.exp.mul(&half));
    Some(ConstExpr::from_sum(Sum::term(root.mul(&unit), mono)))
}

/// Square root of a monic polynomial, if it is a perfect square. The monic
/// root is determined top-down, so a mismatch proves `p` is not a square.
fn sqrt_monic(p: &Poly) -> Result<Option<Poly>> {
    let Some(deg) = p.degree() else {
        return Ok(Some(Poly::zero()));
    };
    if deg % 2 != 0 {
        return Ok(None);
    }
    let k = deg / 2;
    let mut s = vec![ConstExpr::zero(); k + 1];
    s[k] = ConstExpr::one();
    let half = ConstExpr::rational(1, 2)?;
    for j in (0..k).rev() {
        // coefficient of z^{k+j} in S^2, excluding the 2 s_j s_k term
        let mut acc = p.coeff(k + j);
        for a in (j + 1)..=k {
            let b = k + j - a;
            if b > j && b <= k {
                acc = &acc - &(&s[a] * &s[b]);
            }
        }
        s[j] = &acc * &half;
    }
    let root = Poly::new(s);
    Ok(root.mul(&root)?.sub(p)?.decide_zero()?.then_some(root))
}

enum SquareRoot {
    Root(RatFun),
    /// Not a square in `C(z)`.
    NotSquare,
    /// A square in `C(z)`, but the constant factor has no representable root.
    Unrepresentable,
}

/// Square root in `C(z)`. Numerator and denominator are coprime, so `f` is a
/// square exactly when both monic parts are.
fn sqrt_ratfun(f: &RatFun) -> Result<SquareRoot> {
    if f.decide_zero()? {
        return Ok(SquareRoot::Root(RatFun::zero()));
    }
    let num = f.numer();
    let (Some(n), Some(d)) = (sqrt_monic(&num.monic()?)?, sqrt_monic(f.denom())?) else {
        return Ok(SquareRoot::NotSquare);
    };
    let lc = num.lead().expect("nonzero").clone();
    let Some(lc_root) = const_sqrt(&lc) else {
        return Ok(SquareRoot::Unrepresentable);
    };
    Ok(SquareRoot::Root(RatFun::new(n.scale(&lc_root)?, d)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> ConstExpr {
        ConstExpr::int(n)
    }

    fn k(n: i64) -> RatFun {
        RatFun::constant(c(n))
    }

    fn wp(cs: Vec<RatFun>) -> WPoly {
        WPoly::new(cs)
    }

    #[test]
    fn normalize_examples() {
        let r = normalize_rhs(&wp(vec![k(-1), k(0), k(1)]), &wp(vec![k(-1), k(1)])).unwrap();
        assert_eq!(r.p(), &wp(vec![k(1), k(1)]));
        assert_eq!(r.q(), &WPoly::one());
        let r = normalize_rhs(&wp(vec![k(0), RatFun::z()]), &wp(vec![k(0), k(1)])).unwrap();
        assert_eq!(r.p(), &wp(vec![RatFun::z()]));
        assert_eq!(r.deg_q(), 0);
    }

    #[test]
    fn classify_simple_shapes() {
        let lin = DelayEquation::new(
            RatFun::z(),
            WRational::polynomial(wp(vec![RatFun::z()])).unwrap(),
        )
        .unwrap();
        assert_eq!(
            classify(&lin),
            ReducedForm::Linear {
                a1: RatFun::zero(),
                a0: RatFun::z()
            }
        );
        // (w^2+1)/(w^2-1)
        let rhs = normalize_rhs(&wp(vec![k(1), k(0), k(1)]), &wp(vec![k(-1), k(0), k(1)])).unwrap();
        let eq = DelayEquation::new(RatFun::z(), rhs).unwrap();
        assert_eq!(classify(&eq), ReducedForm::NotReduced);
    }

    #[test]
    fn substitute_examples() {
        let ez = ExpoPoly::exp(c(1)).unwrap();
        let r = WRational::polynomial(wp(vec![k(0), k(1)])).unwrap();
        assert_eq!(substitute(&r, &ez).unwrap().num, ez);
        let inv = normalize_rhs(&wp(vec![k(1)]), &wp(vec![k(0), k(1)])).unwrap();
        let s = substitute(&inv, &ez).unwrap();
        assert_eq!((s.num.clone(), s.den.clone()), (ExpoPoly::one(), ez));
    }

    #[test]
    fn invert_linear_example() {
        // H = 1, d = 1, r = 0, a = 1 -> (e - 1/e) w + 1
        let eq = invert(&Poly::one(), &c(1), &RatFun::zero(), &RatFun::one()).unwrap();
        let ee = &c(1).exp().unwrap() - &c(-1).exp().unwrap();
        assert_eq!(
            classify(&eq),
            ReducedForm::Linear {
                a1: RatFun::constant(ee),
                a0: k(1)
            }
        );
        let w = ExpoPoly::exp(c(1)).unwrap();
        assert!(verify_solution(&eq, &w).unwrap());
    }

    #[test]
    fn invert_rejects_degenerate_input() {
        assert!(invert(&Poly::one(), &c(0), &RatFun::zero(), &RatFun::one()).is_err());
        assert!(invert(&Poly::zero(), &c(1), &RatFun::zero(), &RatFun::one()).is_err());
        let not_poly = RatFun::one().div(&RatFun::z()).unwrap();
        assert!(invert(&Poly::one(), &c(1), &not_poly, &RatFun::one()).is_err());
    }

    #[test]
    fn obstruction_examples() {
        // Q = w - z, P = w + 1: P(z) = z + 1 != 0
        let rhs = normalize_rhs(&wp(vec![k(1), k(1)]), &wp(vec![RatFun::z().neg(), k(1)])).unwrap();
        let eq = DelayEquation::new(RatFun::z(), rhs).unwrap();
        assert_eq!(
            entire_obstruction(&eq),
            Obstruction::Obstructed { root: RatFun::z() }
        );
        // Q = w
        let rhs = normalize_rhs(&wp(vec![k(1), k(1)]), &wp(vec![k(0), k(1)])).unwrap();
        let eq = DelayEquation::new(RatFun::z(), rhs).unwrap();
        assert_eq!(entire_obstruction(&eq), Obstruction::NotObstructed);
        // Q = w^2 - z^3 has no rational roots
        let z3 = RatFun::z().pow(3).unwrap();
        let rhs = normalize_rhs(&wp(vec![k(1)]), &wp(vec![z3.neg(), k(0), k(1)])).unwrap();
        let eq = DelayEquation::new(RatFun::z(), rhs).unwrap();
        assert_eq!(entire_obstruction(&eq), Obstruction::NotObstructed);
        // Q = w^2 - z^2 has roots +-z
        let z2 = RatFun::z().pow(2).unwrap();
        let rhs = normalize_rhs(&wp(vec![k(1)]), &wp(vec![z2.neg(), k(0), k(1)])).unwrap();
        let eq = DelayEquation::new(RatFun::z(), rhs).unwrap();
        assert!(matches!(
            entire_obstruction(&eq),
            Obstruction::Obstructed { .. }
        ));
    }

    #[test]
    fn obstruction_skips_roots_shared_with_p() {
        // after normalization a shared root disappears from Q, leaving Q = w
        let p = wp(vec![k(0), RatFun::z().neg(), k(1)]); // w(w - z)
        let q = wp(vec![k(0), RatFun::z().neg(), k(1)])
            .mul(&wp(vec![k(0), k(1)]))
            .unwrap();
        let rhs = normalize_rhs(&p, &q).unwrap();
        assert_eq!(rhs.q(), &wp(vec![k(0), k(1)]));
    }

    #[test]
    fn irrational_roots_do_not_obstruct() {
        // w^2 - z has roots +-sqrt(z), which are not rational functions
        let q = wp(vec![RatFun::z().neg(), k(0), k(1)]);
        let eq = DelayEquation::new(
            RatFun::z(),
            normalize_rhs(&wp(vec![k(1), k(1)]), &q).unwrap(),
        )
        .unwrap();
        assert_eq!(entire_obstruction(&eq), Obstruction::NotObstructed);
        // w^2 - pi has roots +-sqrt(pi), which exist but are not representable
        let q = wp(vec![RatFun::constant(-ConstExpr::pi()), k(0), k(1)]);
        let eq =
            DelayEquation::new(RatFun::z(), normalize_rhs(&wp(vec![k(1)]), &q).unwrap()).unwrap();
        assert!(matches!(
            entire_obstruction(&eq),
            Obstruction::Undetermined { .. }
        ));
    }

    #[test]
    fn const_square_roots() {
        let four_pi2 = c(4) * ConstExpr::pi() * ConstExpr::pi();
        assert_eq!(const_sqrt(&four_pi2), Some(c(2) * ConstExpr::pi()));
        let e2 = c(2).exp().unwrap();
        assert_eq!(const_sqrt(&e2), Some(c(1).exp().unwrap()));
        assert_eq!(const_sqrt(&ConstExpr::pi()), None);
    }
}
