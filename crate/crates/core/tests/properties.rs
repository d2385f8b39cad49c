use malmquist::corpus::Corpus;
use malmquist::ddeq::{
    classify, entire_obstruction, invert, normalize_rhs, substitute, verify_solution,
    DelayEquation, Obstruction, ReducedForm, WPoly,
};
use malmquist::ratfun::solve_poly_logderiv;
use malmquist::synthesis::{solve_linear_form, SolutionFamily};
use malmquist::{ConstExpr, ExpoPoly, RatFun};
use num_complex::Complex64;
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn rel_close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn const_normalize_is_idempotent(seed in any::<u64>()) {
        let mut c = Corpus::new(seed);
        let d = c.frequency();
        let x = (&d.exp().unwrap() + &c.coefficient()).checked_div(&(&ConstExpr::pi() + &c.coefficient()));
        if let Ok(x) = x {
            let once = x.normalize();
            prop_assert_eq!(once.normalize(), once.clone());
            prop_assert!((&once - &x).is_zero().is_zero());
        }
    }

    #[test]
    fn ratfun_shift_round_trip(seed in any::<u64>()) {
        let mut c = Corpus::new(seed);
        let f = c.ratfun();
        let s = c.coefficient();
        prop_assert!(f.shift(&s).unwrap().shift(&-&s).unwrap().equals(&f).unwrap());
    }

    #[test]
    fn expoly_product_rule(seed in any::<u64>()) {
        let mut c = Corpus::new(seed);
        let (f, g) = (c.expopoly(), c.expopoly());
        let lhs = f.mul(&g).unwrap().derivative().unwrap();
        let rhs = f.derivative().unwrap().mul(&g).unwrap().add(&f.mul(&g.derivative().unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero().is_zero());
    }

    #[test]
    fn logderiv_round_trip(seed in any::<u64>()) {
        let mut c = Corpus::new(seed);
        let h = c.monic_poly((seed % 4) as usize);
        let f = malmquist::ratfun::log_derivative(&h).unwrap();
        let back = solve_poly_logderiv(&f).unwrap().expect("H'/H is a logarithmic derivative");
        prop_assert!(back.sub(&h).unwrap().decide_zero().unwrap());
    }

    #[test]
    fn expoly_numeric_agrees(seed in any::<u64>()) {
        let mut c = Corpus::new(seed);
        let f = c.expopoly();
        let g = f.numeric();
        for _ in 0..5 {
            let z = c.unit_point(3.0);
            prop_assert!(rel_close(f.eval_c64(z).unwrap(), g.eval(z).unwrap().to_c64(), 1e-9));
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn invert_then_verify(seed in any::<u64>()) {
        let case = Corpus::new(seed).invert_case();
        let eq = invert(&case.h, &case.d, &case.r, &case.a).unwrap();
        prop_assert_ne!(classify(&eq), ReducedForm::NotReduced);
        let w = ExpoPoly::term(case.d.clone(), RatFun::from_poly(case.h.clone()))
            .unwrap()
            .add(&ExpoPoly::from_ratfun(case.r.clone()))
            .unwrap();
        prop_assert!(verify_solution(&eq, &w).unwrap());
    }

    #[test]
    fn substitute_matches_composed_numeric(seed in any::<u64>()) {
        let mut c = Corpus::new(seed);
        let case = c.invert_case();
        let eq = invert(&case.h, &case.d, &case.r, &case.a).unwrap();
        let w = c.expopoly();
        let Ok(s) = substitute(&eq.rhs, &w) else { return Ok(()) };
        for _ in 0..5 {
            let z = c.unit_point(2.0);
            let wz = w.eval_c64(z).unwrap();
            let horner = |p: &WPoly| -> Option<Complex64> {
                p.coeffs().iter().rev().try_fold(Complex64::new(0.0, 0.0), |acc, k| Some(acc * wz + k.eval_c64(z)?))
            };
            let (Some(pn), Some(qn)) = (horner(eq.rhs.p()), horner(eq.rhs.q())) else { continue };
            let Ok(sym) = s.eval_c64(z) else { continue };
            prop_assert!(rel_close(sym, pn / qn, 1e-9), "{} vs {}", sym, pn / qn);
        }
    }

    #[test]
    fn classify_follows_degrees(seed in any::<u64>()) {
        let mut c = Corpus::new(seed);
        let dp = (seed % 4) as usize;
        let dq = ((seed >> 8) % 3) as usize;
        let p = WPoly::new((0..=dp).map(|_| c.ratfun()).collect());
        let q = if dq == 1 && seed & 1 == 0 {
            WPoly::new(vec![RatFun::zero(), RatFun::one()])
        } else {
            WPoly::new((0..=dq).map(|_| c.ratfun()).collect())
        };
        let rhs = normalize_rhs(&p, &q).unwrap();
        let eq = DelayEquation::new(c.ratfun(), rhs.clone()).unwrap();
        let (np, nq) = (rhs.deg_p().unwrap(), rhs.deg_q());
        let is_w = nq == 1 && rhs.q().coeff(0).is_zero();
        let expected = if nq == 0 && np <= 1 {
            "linear"
        } else if is_w && np <= 2 && !rhs.p().coeff(0).is_zero() {
            "divided_quadratic"
        } else {
            "not_reduced"
        };
        prop_assert_eq!(classify(&eq).name(), expected);
    }

    #[test]
    fn synthesis_is_sound(seed in any::<u64>()) {
        let case = Corpus::new(seed).linear_case();
        let Ok(fam) = solve_linear_form(&case.a, &case.a1, &case.a0) else { return Ok(()) };
        if let SolutionFamily::Scalar { h, d, .. } = &fam {
            prop_assert!(h.degree().unwrap() <= 1);
            let rhs = normalize_rhs(&WPoly::new(vec![case.a0.clone(), case.a1.clone()]), &WPoly::one()).unwrap();
            let eq = DelayEquation::new(case.a.clone(), rhs).unwrap();
            for k in [1, 2, -3] {
                let w = fam.member(&ConstExpr::int(k)).unwrap().unwrap();
                prop_assert!(verify_solution(&eq, &w).unwrap());
            }
            if case.a1.is_zero() {
                prop_assert!((&(d * &ConstExpr::int(2)).exp().unwrap() - &ConstExpr::one()).is_zero().is_zero());
            }
        }
    }

    #[test]
    fn obstruction_on_constructed_roots(seed in any::<u64>()) {
        let mut c = Corpus::new(seed);
        let root = RatFun::from_poly(c.poly(1 + (seed % 2) as usize));
        let p = WPoly::new(vec![c.ratfun(), RatFun::one()]);
        let q = WPoly::new(vec![root.neg(), RatFun::one()]);
        let p_at_root = p.eval(&root).unwrap();
        let eq = DelayEquation::new(c.ratfun(), normalize_rhs(&p, &q).unwrap()).unwrap();
        let verdict = entire_obstruction(&eq);
        if p_at_root.decide_zero().unwrap() {
            prop_assert_eq!(verdict, Obstruction::NotObstructed);
        } else {
            prop_assert_eq!(verdict, Obstruction::Obstructed { root });
        }
        // Q = w (w - s) with s^2 from the corpus: roots 0 and s
        let s = RatFun::from_poly(c.poly(1));
        let q2 = WPoly::new(vec![RatFun::zero(), s.neg(), RatFun::one()]);
        let p2 = WPoly::new(vec![RatFun::one()]);
        let eq2 = DelayEquation::new(RatFun::z(), normalize_rhs(&p2, &q2).unwrap()).unwrap();
        prop_assert_eq!(entire_obstruction(&eq2).name(), "obstructed");
    }
}

#[test]
fn synthesis_rejects_nonconstant_ratio_with_zero_a1() {
    let mut c = Corpus::new(7);
    for k in 0..20 {
        let a = c.ratfun();
        let q = RatFun::from_poly(c.poly(1 + k % 2));
        let a0 = a.mul(&q).unwrap();
        assert!(solve_linear_form(&a, &RatFun::zero(), &a0)
            .unwrap()
            .is_none());
    }
}
