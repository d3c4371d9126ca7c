//! Pareto dominance (all criteria maximized) and the brute-force
//! non-dominated filter used as ground truth everywhere else.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// `y1 ≥ y2` componentwise and `y1 ≠ y2`.
///
/// Ties use exact float equality; there is no epsilon-dominance.
pub fn dominates<T: PartialOrd>(y1: &[T], y2: &[T]) -> Result<bool> {
    if y1.len() != y2.len() {
        return Err(Error::LengthMismatch {
            left: y1.len(),
            right: y2.len(),
        });
    }
    Ok(dominates_unchecked(y1, y2))
}

#[inline]
pub(crate) fn dominates_unchecked<T: PartialOrd>(y1: &[T], y2: &[T]) -> bool {
    let mut strictly = false;
    for (a, b) in y1.iter().zip(y2) {
        if a > b {
            strictly = true;
        } else if !(a >= b) {
            // a < b, or an unordered (NaN) pair
            return false;
        }
    }
    strictly
}

/// Indices (ascending) of points not dominated by any other point.
///
/// Plain `O(n²)` pairwise scan with early exit, parallel over candidates.
/// The result is the same set for every input order.
pub fn nondominated_filter<T, V>(points: &[V]) -> Result<Vec<usize>>
where
    T: PartialOrd + Sync,
    V: AsRef<[T]> + Sync,
{
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let m = first.as_ref().len();
    if let Some(bad) = points.iter().find(|p| p.as_ref().len() != m) {
        return Err(Error::LengthMismatch {
            left: m,
            right: bad.as_ref().len(),
        });
    }
    Ok((0..points.len())
        .into_par_iter()
        .filter(|&i| {
            let candidate = points[i].as_ref();
            !points
                .iter()
                .any(|other| dominates_unchecked(other.as_ref(), candidate))
        })
        .collect())
}
