//! Independent numerical oracles shared by the integration tests.

// each test target uses a different subset
#![allow(dead_code)]

use malmquist::ExpoPoly;
use num_complex::Complex64;

/// Plain complex evaluation of `f` and `f'` from the symbolic terms.
pub struct Plain {
    terms: Vec<(Complex64, Vec<Complex64>, Vec<Complex64>)>,
}

impl Plain {
    pub fn new(f: &ExpoPoly) -> Plain {
        let terms = f
            .terms()
            .map(|(d, h)| {
                let p = h.as_poly().expect("entire");
                let dp = p.derivative().unwrap();
                (d.to_c64(), p.to_c64(), dp.to_c64())
            })
            .collect();
        Plain { terms }
    }

    pub fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let horner = |c: &[Complex64]| {
            c.iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |a, &k| a * z + k)
        };
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for (d, p, dp) in &self.terms {
            let e = (d * z).exp();
            let pv = horner(p);
            v += pv * e;
            dv += (horner(dp) + d * pv) * e;
        }
        (v, dv)
    }

    /// Sum of the moduli of all monomial terms at `z`, the scale for relative errors.
    pub fn magnitude(&self, z: Complex64) -> f64 {
        let horner_abs = |c: &[Complex64]| c.iter().rev().fold(0.0, |a, k| a * z.norm() + k.norm());
        self.terms
            .iter()
            .map(|(d, p, _)| horner_abs(p) * (d * z).exp().norm())
            .sum()
    }

    /// Rounded argument-principle integral with a fixed node count.
    pub fn count(&self, b: Complex64, t: f64) -> i64 {
        let k = 8192;
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..k {
            let z = Complex64::from_polar(t, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
            let (v, dv) = self.value_and_derivative(z);
            s += z * dv / (v - b);
        }
        (s.re / k as f64).round() as i64
    }
}

/// `N(r) = int_0^r (n(t) - n(0))/t dt + n(0) ln r`, with the jumps of `n`
/// located by bisection on circle counts.
pub fn oracle_n(f: &ExpoPoly, b: Complex64, r: f64) -> f64 {
    let p = Plain::new(f);
    let t0 = 1e-8;
    let n0 = p.count(b, t0);
    fn jumps(p: &Plain, b: Complex64, r: f64, lo: (f64, i64), hi: (f64, i64)) -> f64 {
        if lo.1 == hi.1 {
            return 0.0;
        }
        let mid = (lo.0 * hi.0).sqrt();
        if hi.0 / lo.0 - 1.0 < 1e-12 {
            return (hi.1 - lo.1) as f64 * (r / mid).ln();
        }
        let m = (mid, p.count(b, mid));
        jumps(p, b, r, lo, m) + jumps(p, b, r, m, hi)
    }
    let grid: Vec<f64> = (0..=200)
        .map(|k| t0 * (r / t0).powf(k as f64 / 200.0))
        .collect();
    let counts: Vec<i64> = grid.iter().map(|&t| p.count(b, t)).collect();
    let mut total = n0 as f64 * r.ln();
    for k in 0..grid.len() - 1 {
        total += jumps(&p, b, r, (grid[k], counts[k]), (grid[k + 1], counts[k + 1]));
    }
    total
}
