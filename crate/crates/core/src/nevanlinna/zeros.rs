//! Zero isolation by recursive quadrisection with winding numbers along
//! cell edges, polished by Newton iteration.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expoly::{NumericExpo, Sample};

use super::quadrature::count_zeros_numeric;

/// Maximum number of cells examined by one search.
pub const CELL_BUDGET: usize = 100_000;
/// Located zeros closer than this are merged.
pub const MERGE_RADIUS: f64 = 1e-6;
/// Accepted `|g| / (sum of term magnitudes)` at a polished zero.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Zero {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    /// Relative residual `|g| / scale` at the reported location.
    pub residual: f64,
}

impl Zero {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSet {
    /// Sorted by modulus, then argument.
    pub zeros: Vec<Zero>,
    /// Search radius after any contour perturbation.
    pub radius: f64,
    pub cells: usize,
    /// Argument-principle count on `|z| = radius`.
    pub count: usize,
    pub count_residual: f64,
    pub max_residual: f64,
}

impl ZeroSet {
    pub fn total(&self) -> usize {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }
}

fn sample(g: &NumericExpo, z: Complex64) -> Result<Sample> {
    let s = g.sample(z).ok_or_else(|| Error::Pole(format!("{z}")))?;
    if s.value.is_zero() {
        return Err(Error::ZeroCount(format!("zero on a cell boundary at {z}")));
    }
    Ok(s)
}

fn log_deriv(s: &Sample) -> Complex64 {
    s.derivative.checked_div(s.value).expect("nonzero").to_c64()
}

fn segment_arg(
    g: &NumericExpo,
    a: (Complex64, Sample),
    b: (Complex64, Sample),
    depth: u32,
) -> Result<f64> {
    let dz = b.0 - a.0;
    let darg = b.1.value.checked_div(a.1.value).expect("nonzero").arg();
    let pa = (log_deriv(&a.1) * dz).im;
    let pb = (log_deriv(&b.1) * dz).im;
    if darg.abs() <= FRAC_PI_4
        && pa.abs() <= FRAC_PI_4
        && pb.abs() <= FRAC_PI_4
        && (darg - 0.5 * (pa + pb)).abs() <= FRAC_PI_8
    {
        return Ok(darg);
    }
    if depth > 60 {
        return Err(Error::ZeroCount(format!(
            "zero on a cell boundary near {}",
            a.0
        )));
    }
    let zm = 0.5 * (a.0 + b.0);
    let m = (zm, sample(g, zm)?);
    Ok(segment_arg(g, a, m, depth + 1)? + segment_arg(g, m, b, depth + 1)?)
}

fn edge_arg(g: &NumericExpo, a: Complex64, b: Complex64) -> Result<f64> {
    let len = (b - a).norm();
    let n = ((len * g.max_frequency() / FRAC_PI_8).ceil() as usize).max(4);
    let mut prev = (a, sample(g, a)?);
    let mut total = 0.0;
    for k in 1..=n {
        let z = a + (b - a) * (k as f64 / n as f64);
        let next = (z, sample(g, z)?);
        total += segment_arg(g, prev, next, 0)?;
        prev = next;
    }
    Ok(total)
}

/// Winding number of `g` around the square with the given center and half-side.
fn winding(g: &NumericExpo, c: Complex64, h: f64) -> Result<i64> {
    let corners = [
        c + Complex64::new(-h, -h),
        c + Complex64::new(h, -h),
        c + Complex64::new(h, h),
        c + Complex64::new(-h, h),
    ];
    let mut total = 0.0;
    for k in 0..4 {
        total += edge_arg(g, corners[k], corners[(k + 1) % 4])?;
    }
    let w = total / (2.0 * PI);
    let n = w.round();
    if (w - n).abs() > 0.25 {
        return Err(Error::ZeroCount(format!(
            "winding {w} around {c} is not an integer"
        )));
    }
    Ok(n as i64)
}

/// Newton iteration for a zero of multiplicity `m`.
fn newton(g: &NumericExpo, z0: Complex64, m: f64) -> Option<(Complex64, f64)> {
    let mut z = z0;
    for _ in 0..100 {
        let s = g.sample(z)?;
        if s.value.is_zero() {
            return Some((z, 0.0));
        }
        let step = s.value.checked_div(s.derivative)?.to_c64() * m;
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        z -= step;
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    let s = g.sample(z)?;
    Some((z, (s.value.ln_abs() - s.ln_scale).exp()))
}

fn inside(z: Complex64, c: Complex64, h: f64) -> bool {
    let slack = h * (1.0 + 1e-9);
    (z.re - c.re).abs() <= slack && (z.im - c.im).abs() <= slack
}

struct Cell {
    c: Complex64,
    h: f64,
    count: i64,
}

/// All zeros of `g` in the square, restricted to cells meeting `|z| <= radius`.
fn isolate(g: &NumericExpo, radius: f64) -> Result<(Vec<Zero>, usize)> {
    let c0 = Complex64::new(0.013_71 * radius, 0.009_23 * radius);
    let h0 = 1.031_7 * radius + 1e-3;
    let mut stack = vec![Cell {
        c: c0,
        h: h0,
        count: winding(g, c0, h0)?,
    }];
    let mut found = Vec::new();
    let mut cells = 0;
    while let Some(cell) = stack.pop() {
        cells += 1;
        if cells > CELL_BUDGET {
            return Err(Error::Budget(CELL_BUDGET));
        }
        if cell.count < 0 {
            return Err(Error::ZeroCount(format!(
                "negative winding around {}",
                cell.c
            )));
        }
        let nearest = Complex64::new(
            (cell.c.re.abs() - cell.h).max(0.0),
            (cell.c.im.abs() - cell.h).max(0.0),
        );
        if cell.count == 0 || nearest.norm() > radius * (1.0 + 1e-9) {
            continue;
        }
        let m = cell.count as usize;
        let tiny = MERGE_RADIUS.max(1e-12 * cell.c.norm());
        if let Some((z, res)) = newton(g, cell.c, m as f64) {
            if inside(z, cell.c, cell.h) && res < RESIDUAL_TOL {
                let confirmed = m == 1
                    || winding(g, z, 10.0 * tiny.max(1e-6 * z.norm())).ok() == Some(cell.count);
                if confirmed {
                    found.push(Zero {
                        re: z.re,
                        im: z.im,
                        multiplicity: m,
                        residual: res,
                    });
                    continue;
                }
            }
        }
        if cell.h < tiny {
            // unresolved cluster: report it at the cell center
            let s = g
                .sample(cell.c)
                .ok_or_else(|| Error::Pole(format!("{}", cell.c)))?;
            let res = (s.value.ln_abs() - s.ln_scale).exp();
            found.push(Zero {
                re: cell.c.re,
                im: cell.c.im,
                multiplicity: m,
                residual: res,
            });
            continue;
        }
        let h = 0.5 * cell.h;
        for (sx, sy) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
            let c = cell.c + Complex64::new(sx * h, sy * h);
            stack.push(Cell {
                c,
                h,
                count: winding(g, c, h)?,
            });
        }
    }
    Ok((found, cells))
}

fn merge(mut zeros: Vec<Zero>) -> Vec<Zero> {
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<Zero> = Vec::with_capacity(zeros.len());
    'next: for z in zeros {
        for o in out.iter_mut().rev() {
            if z.re - o.re > MERGE_RADIUS {
                break;
            }
            if (z.z() - o.z()).norm() <= MERGE_RADIUS {
                let total = (o.multiplicity + z.multiplicity) as f64;
                let w = o.multiplicity as f64 / total;
                o.re = w * o.re + (1.0 - w) * z.re;
                o.im = w * o.im + (1.0 - w) * z.im;
                o.multiplicity += z.multiplicity;
                o.residual = o.residual.max(z.residual);
                continue 'next;
            }
        }
        out.push(z);
    }
    out
}

/// Zeros of `g` in `|z| <= r`, cross-checked against the argument-principle count.
pub fn locate_zeros_numeric(g: &NumericExpo, r: f64) -> Result<ZeroSet> {
    let count = count_zeros_numeric(g, r)?;
    let radius = count.radius;
    let (found, cells) = isolate(g, radius)?;
    let mut zeros: Vec<Zero> = merge(found)
        .into_iter()
        .filter(|z| z.z().norm() <= radius)
        .collect();
    zeros.sort_by(|a, b| {
        let (za, zb) = (a.z(), b.z());
        za.norm()
            .total_cmp(&zb.norm())
            .then(za.arg().total_cmp(&zb.arg()))
    });
    let set = ZeroSet {
        max_residual: zeros.iter().map(|z| z.residual).fold(0.0, f64::max),
        zeros,
        radius,
        cells,
        count: count.count,
        count_residual: count.residual,
    };
    if set.total() != count.count {
        return Err(Error::ZeroCount(format!(
            "located {} zeros in |z| <= {radius} but the argument principle gives {}",
            set.total(),
            count.count
        )));
    }
    Ok(set)
}
