//! Solutions `C H(z) e^{dz}` of the linear reduced form
//! `w(z+1) - w(z-1) + a w'/w = a1 w + a0`.
//!
//! Substituting `w = H e^{dz}` and separating the `e^{dz}` part from the
//! rest gives two conditions:
//!
//! ```text
//! H(z+1) e^d - H(z-1) e^{-d} = a1 H
//! a (H'/H + d) = a0
//! ```
//!
//! The second pins `d` as the limit of `a0/a` at infinity and `H` as the
//! polynomial whose logarithmic derivative is `a0/a - d`. The first is then
//! checked exactly.

use std::fmt;

use serde::Serialize;

use crate::constfield::ConstExpr;
use crate::error::{Error, Result};
use crate::expoly::ExpoPoly;
use crate::ratfun::{solve_poly_logderiv, Poly, RatFun};

/// Which case of the amplitude equation produced the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Generic,
    /// `a1 = 2i`, admitting linear `H`
    PlusTwoI,
    /// `a1 = -2i`, admitting linear `H`
    MinusTwoI,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolutionFamily {
    None,
    /// `C H(z) e^{dz}` for every nonzero constant `C`; `H` is monic.
    Scalar {
        h: Poly,
        d: ConstExpr,
        branch: Branch,
    },
}

impl SolutionFamily {
    pub fn is_none(&self) -> bool {
        matches!(self, SolutionFamily::None)
    }

    /// The member with scalar `c`.
    pub fn member(&self, c: &ConstExpr) -> Option<Result<ExpoPoly>> {
        match self {
            SolutionFamily::None => None,
            SolutionFamily::Scalar { h, d, .. } => Some(
                h.scale(c)
                    .and_then(|h| ExpoPoly::term(d.clone(), RatFun::from_poly(h))),
            ),
        }
    }
}

impl fmt::Display for SolutionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionFamily::None => write!(f, "none"),
            SolutionFamily::Scalar { h, d, .. } => {
                write!(f, "C*({})*exp({}*z)", h.display_z(), d.to_factor_string())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus {
    Ok,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub name: &'static str,
    pub status: StepStatus,
    pub detail: String,
}

/// Derivation trace of one synthesis run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Explanation {
    pub steps: Vec<Step>,
    pub warnings: Vec<String>,
    pub family: String,
    pub branch: Option<Branch>,
    pub note: &'static str,
}

const NOTE: &str =
    "d is fixed by a0 = a (H'/H + d); the search covers only solutions of the form H(z) e^{dz}";

struct Run {
    family: SolutionFamily,
    steps: Vec<Step>,
    warnings: Vec<String>,
}

impl Run {
    fn ok(&mut self, name: &'static str, detail: String) {
        self.steps.push(Step {
            name,
            status: StepStatus::Ok,
            detail,
        });
    }

    fn fail(mut self, name: &'static str, detail: String) -> Run {
        self.steps.push(Step {
            name,
            status: StepStatus::Failed,
            detail,
        });
        self
    }
}

fn run(a: &RatFun, a1: &RatFun, a0: &RatFun) -> Result<Run> {
    if a.decide_zero()? {
        return Err(Error::Precondition("a must not vanish identically".into()));
    }
    if a1.decide_zero()? && a0.decide_zero()? {
        return Err(Error::Precondition("a1 and a0 must not both vanish".into()));
    }
    let mut r = Run {
        family: SolutionFamily::None,
        steps: Vec::new(),
        warnings: Vec::new(),
    };
    if !a1.is_polynomial() {
        r.warnings.push(format!(
            "a1 = {a1} is not a polynomial; solutions outside the H e^(dz) class are not ruled out and H may have degree above 1"
        ));
    }

    let q = a0.div(a)?;
    let Some(d) = q.limit_at_infinity() else {
        return Ok(r.fail("frequency", format!("a0/a = {q} is unbounded at infinity")));
    };
    if d.is_zero().decide(&d)? {
        return Ok(r.fail(
            "frequency",
            format!("a0/a = {q} tends to 0, so w would be rational"),
        ));
    }
    r.ok("frequency", format!("d = {d}"));

    let f = q.sub(&RatFun::constant(d.clone()))?;
    let Some(h) = solve_poly_logderiv(&f)? else {
        return Ok(r.fail(
            "amplitude",
            format!("{f} is not the logarithmic derivative of a polynomial"),
        ));
    };
    r.ok(
        "amplitude",
        format!("H = {} (degree {})", h.display_z(), h.degree().unwrap_or(0)),
    );

    let one = ConstExpr::one();
    let residual = h
        .shift(&one)?
        .scale(&d.exp()?)?
        .sub(&h.shift(&-&one)?.scale(&(-&d).exp()?)?)?;
    let residual = RatFun::from_poly(residual).sub(&a1.mul(&RatFun::from_poly(h.clone()))?)?;
    if !residual.decide_zero()? {
        return Ok(r.fail(
            "shift_condition",
            format!("H(z+1)e^d - H(z-1)e^(-d) - a1 H = {residual}"),
        ));
    }
    r.ok(
        "shift_condition",
        "H(z+1)e^d - H(z-1)e^(-d) - a1 H = 0".into(),
    );

    let branch = branch_of(a1)?;
    r.family = SolutionFamily::Scalar { h, d, branch };
    Ok(r)
}

fn branch_of(a1: &RatFun) -> Result<Branch> {
    let two_i = RatFun::constant(ConstExpr::int(2) * ConstExpr::i());
    Ok(if a1.equals(&two_i)? {
        Branch::PlusTwoI
    } else if a1.equals(&two_i.neg())? {
        Branch::MinusTwoI
    } else {
        Branch::Generic
    })
}

/// Searches for solutions `C H(z) e^{dz}` of the linear reduced form.
pub fn solve_linear_form(a: &RatFun, a1: &RatFun, a0: &RatFun) -> Result<SolutionFamily> {
    Ok(run(a, a1, a0)?.family)
}

/// Step-by-step trace leading to `family`.
pub fn explain(a: &RatFun, a1: &RatFun, a0: &RatFun, family: &SolutionFamily) -> Explanation {
    let branch = match family {
        SolutionFamily::Scalar { branch, .. } => Some(*branch),
        SolutionFamily::None => None,
    };
    let (steps, warnings) = match run(a, a1, a0) {
        Ok(r) => (r.steps, r.warnings),
        Err(e) => (
            vec![Step {
                name: "precondition",
                status: StepStatus::Failed,
                detail: e.to_string(),
            }],
            Vec::new(),
        ),
    };
    Explanation {
        steps,
        warnings,
        family: family.to_string(),
        branch,
        note: NOTE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ddeq::{invert, verify_solution};

    fn c(n: i64) -> ConstExpr {
        ConstExpr::int(n)
    }

    fn pi_i() -> ConstExpr {
        ConstExpr::pi() * ConstExpr::i()
    }

    fn k(x: ConstExpr) -> RatFun {
        RatFun::constant(x)
    }

    fn check_members(a: &RatFun, fam: &SolutionFamily) {
        let SolutionFamily::Scalar { h, d, .. } = fam else {
            panic!("expected a family")
        };
        let eq = invert(h, d, &RatFun::zero(), a).unwrap();
        for s in [1, 2, -3] {
            let w = fam.member(&c(s)).unwrap().unwrap();
            assert!(verify_solution(&eq, &w).unwrap());
        }
    }

    #[test]
    fn periodic_family() {
        let a = RatFun::z();
        let fam =
            solve_linear_form(&a, &RatFun::zero(), &RatFun::z().scale(&pi_i()).unwrap()).unwrap();
        assert_eq!(
            fam,
            SolutionFamily::Scalar {
                h: Poly::one(),
                d: pi_i(),
                branch: Branch::Generic
            }
        );
        check_members(&a, &fam);
    }

    #[test]
    fn generic_constant_a1() {
        let a = RatFun::z();
        let a1 = k(&c(1).exp().unwrap() - &c(-1).exp().unwrap());
        let fam = solve_linear_form(&a, &a1, &RatFun::z()).unwrap();
        assert_eq!(
            fam,
            SolutionFamily::Scalar {
                h: Poly::one(),
                d: c(1),
                branch: Branch::Generic
            }
        );
        let fam = solve_linear_form(&a, &k(c(5)), &RatFun::z()).unwrap();
        assert!(fam.is_none());
    }

    #[test]
    fn two_i_branch_has_linear_amplitude() {
        let a = RatFun::z();
        let half_pi_i = &pi_i() * &ConstExpr::rational(1, 2).unwrap();
        let a0 = RatFun::z()
            .scale(&half_pi_i)
            .unwrap()
            .add(&RatFun::one())
            .unwrap();
        let a1 = k(c(2) * ConstExpr::i());
        let fam = solve_linear_form(&a, &a1, &a0).unwrap();
        assert_eq!(
            fam,
            SolutionFamily::Scalar {
                h: Poly::x(),
                d: half_pi_i,
                branch: Branch::PlusTwoI
            }
        );
        check_members(&a, &fam);
    }

    #[test]
    fn explain_traces() {
        let a = RatFun::z();
        let a0 = RatFun::z().scale(&pi_i()).unwrap();
        let fam = solve_linear_form(&a, &RatFun::zero(), &a0).unwrap();
        let ex = explain(&a, &RatFun::zero(), &a0, &fam);
        assert_eq!(ex.steps.len(), 3);
        assert!(ex.steps.iter().all(|s| s.status == StepStatus::Ok));

        let unbounded = RatFun::z().pow(2).unwrap();
        let ex = explain(&a, &RatFun::zero(), &unbounded, &SolutionFamily::None);
        assert_eq!(ex.steps[0].status, StepStatus::Failed);
        assert!(ex.steps[0].detail.contains("unbounded"));

        let ex = explain(&a, &k(c(5)), &RatFun::z(), &SolutionFamily::None);
        assert_eq!(ex.steps.last().unwrap().name, "shift_condition");
        assert_eq!(ex.steps.last().unwrap().status, StepStatus::Failed);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(solve_linear_form(&RatFun::zero(), &RatFun::one(), &RatFun::one()).is_err());
        assert!(solve_linear_form(&RatFun::z(), &RatFun::zero(), &RatFun::zero()).is_err());
    }

    #[test]
    fn nonconstant_ratio_gives_none() {
        // a0/a = z is unbounded
        let a = RatFun::one();
        let fam = solve_linear_form(&a, &RatFun::zero(), &RatFun::z()).unwrap();
        assert!(fam.is_none());
    }
}
