//! Gaussian elimination over exact scalars with certified pivots.

use crate::error::Result;
use crate::poly::Scalar;

/// Solves `A x = b` for a possibly overdetermined system.
///
/// Returns `Ok(None)` when the system is inconsistent. Free variables (rank
/// deficiency) are set to zero. Pivots are chosen among entries certified
/// nonzero; an undecidable entry aborts with an error.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Result<Option<Vec<S>>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let mut pivot = None;
        for (r, line) in m.iter().enumerate().skip(row) {
            if !line[col].is_structural_zero() && !line[col].decide_zero()? {
                pivot = Some(r);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        let inv = S::one().div(&m[row][col])?;
        for k in col..=cols {
            m[row][k] = m[row][k].mul(&inv)?;
        }
        for r in 0..rows {
            if r == row || m[r][col].is_structural_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for k in col..=cols {
                let t = m[row][k].mul(&f)?;
                m[r][k] = m[r][k].sub(&t)?;
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    // rows past the rank must have a vanishing right-hand side
    for line in m.iter().skip(row) {
        if !line[cols].decide_zero()? {
            return Ok(None);
        }
    }
    let mut x = vec![S::zero(); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Ok(Some(x))
}
