//! Numerical Nevanlinna functions of exponential polynomials.
//!
//! For entire `f` the characteristic is the proximity function
//! `m(r, f) = (1/2pi) int log+ |f(r e^{it})| dt`; the counting functions
//! come from zeros located by the argument principle. Everything here is
//! double precision.

mod quadrature;
mod zeros;

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::constfield::ConstExpr;
use crate::ddeq::{substitute, WRational};
use crate::error::{Error, Result};
use crate::expoly::{ExpoPoly, NumericExpo};
use crate::ratfun::{Poly, RatFun};

pub use quadrature::{count_zeros_numeric, ArgumentCount, CONTOUR_CLEARANCE, COUNT_RESIDUAL};
pub use zeros::{locate_zeros_numeric, Zero, ZeroSet, CELL_BUDGET, MERGE_RADIUS, RESIDUAL_TOL};

/// Zeros closer than this to the origin count as zeros at the origin.
pub const ORIGIN_RADIUS: f64 = 1e-8;
/// Minimum number of radii in a profile grid.
pub const MIN_GRID_POINTS: usize = 8;

fn require_entire(f: &ExpoPoly) -> Result<()> {
    if f.is_entire() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{f} has rational coefficients with poles"
        )))
    }
}

fn require_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("radius {r} must be positive")))
    }
}

/// `n` radii from `rmin` to `rmax` in geometric progression.
pub fn geometric_grid(rmin: f64, rmax: f64, n: usize) -> Result<Vec<f64>> {
    if !(rmin > 0.0 && rmax > rmin && rmax.is_finite() && n >= 2) {
        return Err(Error::Precondition(format!("bad grid {rmin}:{rmax}:{n}")));
    }
    let q = (rmax / rmin).ln() / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|k| rmin * (q * k as f64).exp()).collect();
    g[n - 1] = rmax;
    Ok(g)
}

/// `m(r, f)` for entire `f`.
pub fn proximity(f: &ExpoPoly, r: f64) -> Result<f64> {
    require_entire(f)?;
    require_radius(r)?;
    let g = f.numeric();
    quadrature::mean_log_plus(r, |z| g.eval(z).map(|v| v.ln_abs()))
}

/// Number of zeros of `f - b` in `|z| <= r`, with the radius actually used.
pub fn count_zeros(f: &ExpoPoly, b: Complex64, r: f64) -> Result<ArgumentCount> {
    require_entire(f)?;
    let g = NumericExpo::minus_constant(f, b);
    require_not_identically(&g, f, b)?;
    count_zeros_numeric(&g, r)
}

/// Zeros of `f - b` in `|z| <= r` with multiplicities.
pub fn locate_zeros(f: &ExpoPoly, b: Complex64, r: f64) -> Result<ZeroSet> {
    require_entire(f)?;
    require_radius(r)?;
    let g = NumericExpo::minus_constant(f, b);
    require_not_identically(&g, f, b)?;
    locate_zeros_numeric(&g, r)
}

fn require_not_identically(g: &NumericExpo, f: &ExpoPoly, b: Complex64) -> Result<()> {
    let probes = [
        Complex64::new(0.37, 0.11),
        Complex64::new(-1.3, 0.7),
        Complex64::new(0.2, -2.9),
    ];
    if probes
        .iter()
        .all(|&z| g.eval(z).is_some_and(|v| v.is_zero()))
    {
        return Err(Error::Precondition(format!(
            "{f} - ({b}) vanishes identically"
        )));
    }
    Ok(())
}

/// `N(r)` from a zero list: `sum mult ln(r/|z|) + n(0) ln r`.
pub fn integrated_count(zeros: &[Zero], r: f64, distinct: bool) -> f64 {
    zeros
        .iter()
        .filter(|z| z.z().norm() <= r)
        .map(|z| {
            let k = if distinct { 1.0 } else { z.multiplicity as f64 };
            let a = z.z().norm();
            k * if a < ORIGIN_RADIUS {
                r.ln()
            } else {
                (r / a).ln()
            }
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub r: f64,
    pub m: f64,
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: f64,
    #[serde(rename = "Nbar")]
    pub big_n_bar: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharProfile {
    pub target: [f64; 2],
    pub rows: Vec<ProfileRow>,
    pub order_estimate: f64,
    /// Slope of `ln ln T` against `ln r`; `None` while `T <= e` somewhere in the fit window.
    pub hyperorder_estimate: Option<f64>,
    /// Always `false`: separating hyper-orders needs radii far beyond reach.
    pub hyperorder_reliable: bool,
    pub deficiency_estimate: f64,
    /// `Nbar(r)/T(r)` at every radius.
    pub nbar_over_t: Vec<f64>,
    pub t_monotone: bool,
    pub zeros: ZeroSet,
}

pub const CSV_HEADER: &str = "r,m,n,N,Nbar,T";

impl CharProfile {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for row in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                row.r, row.m, row.n, row.big_n, row.big_n_bar, row.t
            );
        }
        s
    }
}

/// Least-squares slope of `y` against `x`.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < MIN_GRID_POINTS {
        return Err(Error::Precondition(format!(
            "grid needs at least {MIN_GRID_POINTS} radii"
        )));
    }
    if grid[0] <= 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(
            "grid must be positive and strictly ascending".into(),
        ));
    }
    Ok(())
}

/// Runs `f` on every radius, in parallel, preserving grid order.
#[cfg(not(target_arch = "wasm32"))]
fn per_radius<T: Send>(grid: &[f64], f: impl Fn(f64) -> Result<T> + Sync) -> Result<Vec<T>> {
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = grid.iter().map(|&r| s.spawn(move || f(r))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Sequential fallback: the browser target has no threads.
#[cfg(target_arch = "wasm32")]
fn per_radius<T: Send>(grid: &[f64], f: impl Fn(f64) -> Result<T> + Sync) -> Result<Vec<T>> {
    grid.iter().map(|&r| f(r)).collect()
}

/// `T`, `N`, `Nbar` for `f` and target `b` along the grid.
pub fn characteristic_profile(f: &ExpoPoly, b: Complex64, grid: &[f64]) -> Result<CharProfile> {
    check_grid(grid)?;
    require_entire(f)?;
    let rmax = *grid.last().expect("nonempty");
    let zeros = locate_zeros(f, b, rmax)?;
    let ms = per_radius(grid, |r| proximity(f, r))?;
    let rows: Vec<ProfileRow> = grid
        .iter()
        .zip(&ms)
        .map(|(&r, &m)| ProfileRow {
            r,
            m,
            n: zeros
                .zeros
                .iter()
                .filter(|z| z.z().norm() <= r)
                .map(|z| z.multiplicity)
                .sum(),
            big_n: integrated_count(&zeros.zeros, r, false),
            big_n_bar: integrated_count(&zeros.zeros, r, true),
            t: m,
        })
        .collect();
    let top = &rows[rows.len() / 2..];
    let lr: Vec<f64> = top.iter().map(|row| row.r.ln()).collect();
    let lt: Vec<f64> = top.iter().map(|row| row.t.ln()).collect();
    let order_estimate = slope(&lr, &lt);
    let hyperorder_estimate = top
        .iter()
        .all(|row| row.t > std::f64::consts::E)
        .then(|| slope(&lr, &lt.iter().map(|v| v.ln()).collect::<Vec<_>>()));
    let nbar_over_t: Vec<f64> = rows.iter().map(|row| row.big_n_bar / row.t).collect();
    let last = rows.last().expect("nonempty");
    let t_monotone = rows
        .windows(2)
        .all(|w| w[1].t >= w[0].t - 1e-6 * w[1].t.abs());
    Ok(CharProfile {
        target: [b.re, b.im],
        order_estimate,
        hyperorder_estimate,
        hyperorder_reliable: false,
        deficiency_estimate: 1.0 - last.big_n_bar / last.t,
        nbar_over_t,
        t_monotone,
        rows,
        zeros,
    })
}

/// A ratio sampled along a radius grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioCurve {
    pub r: Vec<f64>,
    pub ratio: Vec<f64>,
    /// Limit predicted for `r -> infinity`, when there is one.
    pub asymptote: Option<f64>,
}

impl RatioCurve {
    /// Ratio at the grid radius nearest to `r` in log scale.
    pub fn at(&self, r: f64) -> f64 {
        let k = (0..self.r.len())
            .min_by(|&i, &j| {
                (self.r[i].ln() - r.ln())
                    .abs()
                    .total_cmp(&(self.r[j].ln() - r.ln()).abs())
            })
            .expect("nonempty");
        self.ratio[k]
    }
}

fn require_transcendental(w: &ExpoPoly) -> Result<()> {
    if w.is_transcendental() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{w} has no nonzero frequency")))
    }
}

fn lcm(a: &Poly, b: &Poly) -> Result<Poly> {
    let g = a.gcd(b)?;
    a.mul(&b.div_exact(&g)?)?.monic()
}

/// Multiplies by the lcm of all coefficient denominators.
fn clear_denominators(num: &ExpoPoly, den: &ExpoPoly) -> Result<(ExpoPoly, ExpoPoly)> {
    let mut l = Poly::one();
    for (_, h) in num.terms().chain(den.terms()) {
        l = lcm(&l, h.denom())?;
    }
    let l = RatFun::from_poly(l);
    Ok((num.scale(&l)?, den.scale(&l)?))
}

/// `T(r, R(z, w(z))) / T(r, w)` along the grid, with the predicted limit `deg_w R`.
///
/// Poles of `R(z, w(z))` are the zeros of `Q(z, w(z))` after clearing
/// coefficient denominators, minus those shared with the numerator.
pub fn valiron_mohonko_check(rhs: &WRational, w: &ExpoPoly, grid: &[f64]) -> Result<RatioCurve> {
    require_transcendental(w)?;
    require_entire(w)?;
    check_grid(grid)?;
    let composed = substitute(rhs, w)?;
    let (num, den) = clear_denominators(&composed.num, &composed.den)?;
    let (gn, gd) = (num.numeric(), den.numeric());
    let rmax = *grid.last().expect("nonempty");
    let poles: Vec<Zero> = if den.as_ratfun().is_some_and(|h| h.as_constant().is_some()) {
        Vec::new()
    } else {
        locate_zeros_numeric(&gd, rmax)?
            .zeros
            .into_iter()
            .filter(|z| {
                gn.sample(z.z())
                    .is_some_and(|s| (s.value.ln_abs() - s.ln_scale).exp() > 1e-8)
            })
            .collect()
    };
    let ratio = per_radius(grid, |r| {
        let m =
            quadrature::mean_log_plus(r, |z| Some(gn.eval(z)?.ln_abs() - gd.eval(z)?.ln_abs()))?;
        Ok((m + integrated_count(&poles, r, false)) / proximity(w, r)?)
    })?;
    Ok(RatioCurve {
        r: grid.to_vec(),
        ratio,
        asymptote: Some(rhs.degree() as f64),
    })
}

/// `m(r, w(z+c)/w(z)) / T(r, w)` along the grid.
pub fn log_diff_lemma_check(w: &ExpoPoly, c: &ConstExpr, grid: &[f64]) -> Result<RatioCurve> {
    require_transcendental(w)?;
    require_entire(w)?;
    check_grid(grid)?;
    let (gs, g) = (w.shift(c)?.numeric(), w.numeric());
    let ratio = per_radius(grid, |r| {
        let m = quadrature::mean_log_plus(r, |z| Some(gs.eval(z)?.ln_abs() - g.eval(z)?.ln_abs()))?;
        Ok(m / proximity(w, r)?)
    })?;
    Ok(RatioCurve {
        r: grid.to_vec(),
        ratio,
        asymptote: Some(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(n: i64) -> ConstExpr {
        ConstExpr::int(n)
    }

    fn ez() -> ExpoPoly {
        ExpoPoly::exp(c(1)).unwrap()
    }

    fn zpoly(cs: &[i64]) -> ExpoPoly {
        ExpoPoly::from_ratfun(RatFun::from_poly(Poly::new(
            cs.iter().map(|&k| c(k)).collect(),
        )))
    }

    const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
    const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

    #[test]
    fn proximity_closed_forms() {
        assert!((proximity(&ez(), 10.0).unwrap() - 10.0 / PI).abs() < 1e-6);
        assert_eq!(proximity(&ExpoPoly::one(), 5.0).unwrap(), 0.0);
        let e2z = ExpoPoly::exp(c(2)).unwrap();
        assert!((proximity(&e2z, 10.0).unwrap() - 20.0 / PI).abs() < 1e-6);
    }

    #[test]
    fn counts() {
        assert_eq!(count_zeros(&ez(), ZERO, 10.0).unwrap().count, 0);
        assert_eq!(count_zeros(&zpoly(&[0, 0, 1]), ZERO, 1.0).unwrap().count, 2);
        assert_eq!(count_zeros(&ez(), ONE, 7.0).unwrap().count, 3);
    }

    #[test]
    fn locate_polynomial_with_double_zero() {
        let set = locate_zeros(&zpoly(&[0, 0, -1, 1]), ZERO, 2.0).unwrap();
        assert_eq!(set.zeros.len(), 2);
        assert_eq!(set.zeros[0].multiplicity, 2);
        assert!(set.zeros[0].z().norm() < 1e-6);
        assert_eq!(set.zeros[1].multiplicity, 1);
        assert!((set.zeros[1].z() - ONE).norm() < 1e-10);
    }

    #[test]
    fn locate_exp_minus_one() {
        let set = locate_zeros(&ez(), ONE, 7.0).unwrap();
        let want = [
            ZERO,
            Complex64::new(0.0, -2.0 * PI),
            Complex64::new(0.0, 2.0 * PI),
        ];
        assert_eq!(set.zeros.len(), 3);
        for w in want {
            assert!(set
                .zeros
                .iter()
                .any(|z| (z.z() - w).norm() < 1e-9 && z.multiplicity == 1));
        }
    }

    #[test]
    fn locate_matches_count_for_periodic_plus_z() {
        let two_pi_i = c(2) * ConstExpr::pi() * ConstExpr::i();
        let f = ExpoPoly::exp(two_pi_i)
            .unwrap()
            .add(&zpoly(&[0, 1]))
            .unwrap();
        let set = locate_zeros(&f, ZERO, 3.0).unwrap();
        assert_eq!(set.total(), count_zeros(&f, ZERO, 3.0).unwrap().count);
        assert!(set.zeros.iter().all(|z| z.multiplicity == 1));
        assert!(set.total() > 0);
    }

    #[test]
    fn grid_is_geometric() {
        let g = geometric_grid(10.0, 1000.0, 3).unwrap();
        assert!((g[1] - 100.0).abs() < 1e-9);
        assert!(geometric_grid(10.0, 5.0, 3).is_err());
    }

    #[test]
    fn profile_of_exp_has_full_deficiency() {
        let grid = geometric_grid(10.0, 100.0, 8).unwrap();
        let p = characteristic_profile(&ez(), ZERO, &grid).unwrap();
        assert_eq!(p.deficiency_estimate, 1.0);
        assert!(p.rows.iter().all(|r| r.big_n_bar == 0.0));
        assert!((p.order_estimate - 1.0).abs() < 0.01);
        assert!(p.t_monotone);
        assert!(p.to_csv().starts_with("r,m,n,N,Nbar,T\n"));
    }

    #[test]
    fn log_diff_of_exp() {
        let grid = geometric_grid(10.0, 100.0, 8).unwrap();
        let curve = log_diff_lemma_check(&ez(), &c(1), &grid).unwrap();
        assert!((curve.at(100.0) - PI / 100.0).abs() < 1e-6);
    }
}
