//! Trapezoid rules on circles `|z| = r`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expoly::NumericExpo;

pub(crate) const PROXIMITY_REL_TOL: f64 = 1e-8;
const PROXIMITY_ABS_TOL: f64 = 1e-12;
const PROXIMITY_MAX_NODES: usize = 1 << 20;
const COUNT_MAX_NODES: usize = 1 << 20;
const COUNT_TOL: f64 = 1e-6;
/// Accepted distance between the integral and the nearest integer.
pub const COUNT_RESIDUAL: f64 = 0.25;
/// Zeros closer than this to the contour trigger a radius perturbation.
pub const CONTOUR_CLEARANCE: f64 = 1e-6;
/// Relative radius nudges, all within 1%; incommensurate so that regularly
/// spaced zeros do not line up with every retry.
const PERTURBATIONS: [f64; 6] = [0.0, 0.001_37, -0.002_91, 0.004_53, -0.006_19, 0.008_77];

fn node(r: f64, k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64)
}

/// Mean of `max(0, ln_abs(z))` over the circle, doubling the node count until
/// successive estimates agree.
pub(crate) fn mean_log_plus(r: f64, ln_abs: impl Fn(Complex64) -> Option<f64>) -> Result<f64> {
    let at = |z: Complex64| {
        ln_abs(z)
            .map(|v| v.max(0.0))
            .ok_or_else(|| Error::Pole(format!("{z} on |z| = {r}")))
    };
    let mut n = 64;
    let mut sum = 0.0;
    for k in 0..n {
        sum += at(node(r, k, n))?;
    }
    let mut prev = sum / n as f64;
    while n < PROXIMITY_MAX_NODES {
        for k in 0..n {
            sum += at(node(r, 2 * k + 1, 2 * n))?;
        }
        n *= 2;
        let est = sum / n as f64;
        if (est - prev).abs() <= PROXIMITY_REL_TOL * est.abs()
            || (est - prev).abs() <= PROXIMITY_ABS_TOL
        {
            return Ok(est);
        }
        prev = est;
    }
    Err(Error::NoConvergence {
        last: sum / n as f64,
        prev,
    })
}

/// Outcome of an argument-principle count on a circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArgumentCount {
    pub count: usize,
    /// Radius actually used after any perturbation.
    pub radius: f64,
    /// Distance of the integral from `count`.
    pub residual: f64,
    pub nodes: usize,
}

enum Attempt {
    Done(ArgumentCount),
    Retry(String),
}

fn count_once(g: &NumericExpo, r: f64) -> Result<Attempt> {
    // z g'/g at a node, plus the Newton distance |g/g'|
    let integrand = |z: Complex64| -> Result<(Complex64, f64)> {
        let s = g
            .sample(z)
            .ok_or_else(|| Error::Pole(format!("{z} on |z| = {r}")))?;
        if s.value.is_zero() {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let q = s.derivative.checked_div(s.value).expect("nonzero").to_c64();
        Ok((z * q, 1.0 / q.norm()))
    };
    let start = ((8.0 * r * (g.max_frequency() + 1.0)).ceil() as usize)
        .next_power_of_two()
        .max(128);
    let mut n = start;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut clearance = f64::INFINITY;
    for k in 0..n {
        let (v, d) = integrand(node(r, k, n))?;
        sum += v;
        clearance = clearance.min(d);
    }
    let mut prev = sum / n as f64;
    while n < COUNT_MAX_NODES {
        for k in 0..n {
            let (v, d) = integrand(node(r, 2 * k + 1, 2 * n))?;
            sum += v;
            clearance = clearance.min(d);
        }
        n *= 2;
        let est = sum / n as f64;
        if clearance < CONTOUR_CLEARANCE {
            return Ok(Attempt::Retry(format!(
                "zero within {clearance:.2e} of |z| = {r}"
            )));
        }
        if (est - prev).norm() < COUNT_TOL {
            let count = est.re.round();
            let residual = (est - Complex64::new(count, 0.0)).norm();
            if residual >= COUNT_RESIDUAL || count < 0.0 {
                return Ok(Attempt::Retry(format!(
                    "integral {est} on |z| = {r} is not near a count"
                )));
            }
            return Ok(Attempt::Done(ArgumentCount {
                count: count as usize,
                radius: r,
                residual,
                nodes: n,
            }));
        }
        prev = est;
    }
    Ok(Attempt::Retry(format!(
        "no convergence on |z| = {r} with {n} nodes"
    )))
}

/// Zeros of `g` in `|z| <= r`, nudging the radius when a zero sits on the contour.
pub fn count_zeros_numeric(g: &NumericExpo, r: f64) -> Result<ArgumentCount> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::Precondition(format!("radius {r} must be positive")));
    }
    let mut why = String::new();
    for p in PERTURBATIONS {
        let radius = r * (1.0 + p);
        match count_once(g, radius)? {
            Attempt::Done(c) => return Ok(c),
            Attempt::Retry(w) => why = w,
        }
    }
    Err(Error::ZeroCount(why))
}
