//! Exact dense linear solving over cyclotomic numbers.
//!
//! Plain Gaussian elimination with first-nonzero pivoting; every entry is an
//! exact cyclotomic (usually rational) number, so rank decisions are exact.

use thiserror::Error;

use crate::cyclo::CyclotomicNumber;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("inconsistent linear system: the right-hand side is not in the column span")]
    Inconsistent,
    #[error("underdetermined linear system: column {0} has no pivot; provide more rows")]
    Underdetermined(usize),
    #[error("shape mismatch: {rows} rows vs {rhs} right-hand entries")]
    ShapeMismatch { rows: usize, rhs: usize },
}

/// Solve A x = b exactly for a matrix with at least as many rows as
/// columns. Requires a unique solution; reports inconsistency and missing
/// rank explicitly.
pub fn solve(
    a: &[Vec<CyclotomicNumber>],
    b: &[CyclotomicNumber],
) -> Result<Vec<CyclotomicNumber>, SolveError> {
    let rows = a.len();
    if rows != b.len() {
        return Err(SolveError::ShapeMismatch { rows, rhs: b.len() });
    }
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<CyclotomicNumber>> = a.to_vec();
    let mut rhs: Vec<CyclotomicNumber> = b.to_vec();
    let mut pivot_rows: Vec<usize> = Vec::with_capacity(cols);
    let mut next_row = 0usize;
    for col in 0..cols {
        let Some(p) = (next_row..rows).find(|&r| !m[r][col].is_zero()) else {
            return Err(SolveError::Underdetermined(col));
        };
        m.swap(next_row, p);
        rhs.swap(next_row, p);
        let inv = m[next_row][col].inverse();
        for c in col..cols {
            m[next_row][c] = m[next_row][c].clone() * inv.clone();
        }
        rhs[next_row] = rhs[next_row].clone() * inv.clone();
        for r in 0..rows {
            if r != next_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..cols {
                    m[r][c] = m[r][c].clone() - factor.clone() * m[next_row][c].clone();
                }
                rhs[r] = rhs[r].clone() - factor * rhs[next_row].clone();
            }
        }
        pivot_rows.push(next_row);
        next_row += 1;
    }
    // rows below the rank must have vanished on the right as well
    for r in next_row..rows {
        if !rhs[r].is_zero() {
            return Err(SolveError::Inconsistent);
        }
    }
    Ok(pivot_rows.iter().map(|&r| rhs[r].clone()).collect())
}
