//! Gauss–Jordan elimination over series towers.
//!
//! Entries are compared structurally: a truncated entry with no known
//! nonzero coefficient counts as zero. Pivots are chosen with minimal
//! valuation so that the divisions lose as little precision as possible.

use crate::error::{Error, Result};
use crate::series::{Domain, Elem, Exponent};

pub type Matrix = Vec<Vec<Elem>>;

fn pivot_key(x: &Elem) -> Option<Exponent> {
    match x {
        Elem::Series(s) => s.valuation_lower_bound(),
        _ => Some(Exponent::ZERO),
    }
}

/// Row-reduced echelon form. Returns the reduced matrix and the pivot
/// column of each nonzero row. `relative` bounds the precision of pivot
/// inverses (series domain default when `None`).
pub fn row_reduce(mut m: Matrix, relative: Option<Exponent>) -> Result<(Matrix, Vec<usize>)> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| pivot_key(&m[i][c]));
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv_relative(relative)?;
        for x in m[r].iter_mut().skip(c) {
            *x = x.try_mul(&inv)?;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for k in c..cols {
                let delta = factor.try_mul(&m[r][k])?;
                m[i][k] = m[i][k].try_sub(&delta)?;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok((m, pivots))
}

pub fn rank(m: Matrix) -> Result<usize> {
    Ok(row_reduce(m, None)?.1.len())
}

/// A basis of the right kernel {x : m·x = 0}, read off the reduced form.
pub fn kernel(m: Matrix, field: &Domain) -> Result<Vec<Vec<Elem>>> {
    let cols = m.first().map_or(0, Vec::len);
    let (reduced, pivots) = row_reduce(m, None)?;
    let free = (0..cols).filter(|c| !pivots.contains(c));
    let mut basis = Vec::new();
    for f in free {
        let mut v = vec![field.zero(); cols];
        v[f] = field.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = reduced[row][f].neg();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Solves m·x = b for square m. A singular matrix is reported with a
/// kernel vector.
pub fn solve(m: &Matrix, b: &[Elem], field: &Domain, relative: Option<Exponent>) -> Result<Vec<Elem>> {
    let n = m.len();
    let augmented: Matrix = m.iter().zip(b).map(|(row, bi)| {
        let mut r = row.clone();
        r.push(bi.clone());
        r
    }).collect();
    let (reduced, pivots) = row_reduce(augmented, relative)?;
    if pivots.len() < n || pivots.contains(&n) {
        let kernel = kernel(m.clone(), field)?.into_iter().next().unwrap_or_default();
        return Err(Error::Singular { kernel });
    }
    Ok(reduced.into_iter().map(|row| row[n].clone()).collect())
}

pub fn mat_vec(m: &Matrix, v: &[Elem]) -> Result<Vec<Elem>> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).try_fold(None::<Elem>, |acc, (a, x)| {
                let t = a.try_mul(x)?;
                Ok::<_, Error>(Some(match acc {
                    Some(s) => s.try_add(&t)?,
                    None => t,
                }))
            })
        })
        .map(|r| r.map(|s| s.expect("nonempty row")))
        .collect()
}
