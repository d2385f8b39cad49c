//! Five hand-built equations with known exponential-polynomial solutions,
//! checked both ways: the solution satisfies the equation, and inverting the
//! solution's shape reproduces the equation.

use malmquist::ddeq::{
    classify, invert, normalize_rhs, verify_solution, DelayEquation, ReducedForm, WPoly,
};
use malmquist::{ConstExpr, ExpoPoly, Poly, RatFun};

fn c(n: i64) -> ConstExpr {
    ConstExpr::int(n)
}

fn k(x: ConstExpr) -> RatFun {
    RatFun::constant(x)
}

fn z() -> RatFun {
    RatFun::z()
}

fn poly(cs: &[i64]) -> RatFun {
    RatFun::from_poly(Poly::new(cs.iter().map(|&n| c(n)).collect()))
}

fn e() -> ConstExpr {
    c(1).exp().unwrap()
}

fn e_inv() -> ConstExpr {
    c(-1).exp().unwrap()
}

fn two_pi_i() -> ConstExpr {
    c(2) * ConstExpr::pi() * ConstExpr::i()
}

fn coefficient_choices() -> Vec<RatFun> {
    let z2p1 = poly(&[1, 0, 1]);
    vec![z(), poly(&[1, 1]), z2p1.div(&z()).unwrap()]
}

fn w_over(p: Vec<RatFun>) -> (WPoly, WPoly) {
    (
        WPoly::new(p),
        WPoly::new(vec![RatFun::zero(), RatFun::one()]),
    )
}

fn same_equation(x: &DelayEquation, y: &DelayEquation) -> bool {
    let same = |a: &WPoly, b: &WPoly| {
        let n = a.coeffs().len().max(b.coeffs().len());
        (0..n).all(|i| a.coeff(i).equals(&b.coeff(i)).unwrap())
    };
    x.a.equals(&y.a).unwrap() && same(x.rhs.p(), y.rhs.p()) && same(x.rhs.q(), y.rhs.q())
}

fn check(eq: DelayEquation, w: ExpoPoly, from_invert: DelayEquation, shape: &str) {
    assert!(verify_solution(&eq, &w).unwrap(), "{w} should solve {eq}");
    assert_eq!(classify(&eq).name(), shape);
    assert!(
        same_equation(&eq, &from_invert),
        "{eq}\n  vs\n{from_invert}"
    );
    let off = w.add(&ExpoPoly::one()).unwrap();
    assert!(!verify_solution(&eq, &off).unwrap());
}

#[test]
fn polynomial_amplitude_linear() {
    // ((e(z+1) - e^{-1}(z-1))/z) w + a (1+z)/z, solved by z e^z
    for a in coefficient_choices() {
        let a1 = poly(&[1, 1])
            .scale(&e())
            .unwrap()
            .sub(&poly(&[-1, 1]).scale(&e_inv()).unwrap())
            .unwrap();
        let a1 = a1.div(&z()).unwrap();
        let a0 = a.mul(&poly(&[1, 1])).unwrap().div(&z()).unwrap();
        let rhs = normalize_rhs(&WPoly::new(vec![a0, a1]), &WPoly::one()).unwrap();
        let eq = DelayEquation::new(a.clone(), rhs).unwrap();
        let w = ExpoPoly::term(c(1), z()).unwrap();
        let inv = invert(&Poly::x(), &c(1), &RatFun::zero(), &a).unwrap();
        check(eq, w, inv, "linear");
    }
}

#[test]
fn periodic_linear() {
    // 2 pi i a, solved by e^{2 pi i z}
    for a in coefficient_choices() {
        let rhs = normalize_rhs(
            &WPoly::new(vec![a.scale(&two_pi_i()).unwrap()]),
            &WPoly::one(),
        )
        .unwrap();
        let eq = DelayEquation::new(a.clone(), rhs).unwrap();
        assert!(matches!(classify(&eq), ReducedForm::Linear { ref a1, .. } if a1.is_zero()));
        let w = ExpoPoly::exp(two_pi_i()).unwrap();
        let inv = invert(&Poly::one(), &two_pi_i(), &RatFun::zero(), &a).unwrap();
        check(eq, w, inv, "linear");
    }
}

#[test]
fn shifted_exponential_divided_quadratic() {
    // ((e - 1/e) w^2 + (-z(e - 1/e) + 2 + a) w + a(1 - z))/w, solved by e^z + z
    for a in coefficient_choices() {
        let s = &e() - &e_inv();
        let p = vec![
            a.mul(&poly(&[1, -1])).unwrap(),
            z().scale(&-&s)
                .unwrap()
                .add(&k(c(2)))
                .unwrap()
                .add(&a)
                .unwrap(),
            k(s),
        ];
        let (p, q) = w_over(p);
        let eq = DelayEquation::new(a.clone(), normalize_rhs(&p, &q).unwrap()).unwrap();
        let w = ExpoPoly::exp(c(1))
            .unwrap()
            .add(&ExpoPoly::from_ratfun(z()))
            .unwrap();
        let inv = invert(&Poly::one(), &c(1), &z(), &a).unwrap();
        check(eq, w, inv, "divided_quadratic");
    }
}

#[test]
fn periodic_plus_one_divided_quadratic() {
    // (2 pi i a w - 2 pi i a)/w, solved by e^{2 pi i z} + 1
    for a in coefficient_choices() {
        let t = a.scale(&two_pi_i()).unwrap();
        let (p, q) = w_over(vec![t.neg(), t]);
        let eq = DelayEquation::new(a.clone(), normalize_rhs(&p, &q).unwrap()).unwrap();
        let w = ExpoPoly::exp(two_pi_i())
            .unwrap()
            .add(&ExpoPoly::one())
            .unwrap();
        let inv = invert(&Poly::one(), &two_pi_i(), &RatFun::one(), &a).unwrap();
        check(eq, w, inv, "divided_quadratic");
    }
}

#[test]
fn periodic_plus_z_fixed_coefficient() {
    // a = -1/(pi i), rhs = (2z - 1/(pi i))/w, solved by e^{2 pi i z} + z
    let inv_pi_i = (ConstExpr::pi() * ConstExpr::i()).inv().unwrap();
    let a = k(-&inv_pi_i);
    let (p, q) = w_over(vec![z().scale(&c(2)).unwrap().sub(&k(inv_pi_i)).unwrap()]);
    let eq = DelayEquation::new(a.clone(), normalize_rhs(&p, &q).unwrap()).unwrap();
    let w = ExpoPoly::exp(two_pi_i())
        .unwrap()
        .add(&ExpoPoly::from_ratfun(z()))
        .unwrap();
    let inv = invert(&Poly::one(), &two_pi_i(), &z(), &a).unwrap();
    check(eq, w, inv, "divided_quadratic");
}
