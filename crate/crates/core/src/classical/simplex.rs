//! Exact phase-one simplex over rationals, sized for tiny feasibility
//! problems (tens of columns, a dozen rows). Bland's rule throughout, so it
//! terminates even on the degenerate tableaus convex hulls produce.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Searches for non-negative weights `w` with `sum_j w_j * columns[j] =
/// target`. Rows are equality constraints only; a weights-sum-to-one
/// condition must already be implied by the rows, as it is when every column
/// and the target are probability tables over the same blocks.
pub(crate) fn convex_weights(
    columns: &[Vec<BigRational>],
    target: &[BigRational],
) -> Option<Vec<BigRational>> {
    let rows = target.len();
    let structural = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    let width = structural + rows + 1;
    let rhs = width - 1;

    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut row: Vec<BigRational> = Vec::with_capacity(width);
        for col in columns {
            row.push(col[r].clone());
        }
        for k in 0..rows {
            row.push(if k == r {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        row.push(target[r].clone());
        if row[rhs].is_negative() {
            for e in row.iter_mut() {
                *e = -std::mem::take(e);
            }
        }
        tab.push(row);
    }

    // Reduced costs for minimizing the artificial total, artificials basic.
    let mut obj = vec![BigRational::zero(); width];
    for row in &tab {
        for (o, e) in obj.iter_mut().zip(row) {
            *o -= e;
        }
    }
    for k in 0..rows {
        obj[structural + k] += BigRational::one();
    }
    let mut basis: Vec<usize> = (structural..structural + rows).collect();

    loop {
        let Some(enter) = (0..structural + rows).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for r in 0..rows {
            if !tab[r][enter].is_positive() {
                continue;
            }
            leave = Some(match leave {
                None => r,
                Some(l) => {
                    let cur = &tab[l][rhs] / &tab[l][enter];
                    let cand = &tab[r][rhs] / &tab[r][enter];
                    if cand < cur || (cand == cur && basis[r] < basis[l]) {
                        r
                    } else {
                        l
                    }
                }
            });
        }
        let l = leave?;
        let pivot = tab[l][enter].clone();
        for e in tab[l].iter_mut() {
            *e = std::mem::take(e) / &pivot;
        }
        for r in 0..rows {
            if r == l || tab[r][enter].is_zero() {
                continue;
            }
            let f = tab[r][enter].clone();
            for j in 0..width {
                let t = &tab[l][j] * &f;
                tab[r][j] -= t;
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..width {
                let t = &tab[l][j] * &f;
                obj[j] -= t;
            }
        }
        basis[l] = enter;
    }

    if !obj[rhs].is_zero() {
        return None;
    }
    let mut weights = vec![BigRational::zero(); structural];
    for r in 0..rows {
        if basis[r] < structural {
            weights[basis[r]] = tab[r][rhs].clone();
        } else if !tab[r][rhs].is_zero() {
            return None;
        }
    }
    Some(weights)
}
