//! Phase-one simplex for equality-form linear feasibility.
//!
//! The only question asked here is whether `A x = b` admits an `x >= 0`.
//! Columns of `A` are produced on demand through a callback, so a
//! problem with millions of columns (one per deterministic assignment)
//! never materializes its matrix. The solver keeps an explicit basis
//! inverse, prices columns in index order, and enters the first column
//! with a negative reduced cost; together with lowest-index tie
//! breaking in the ratio test this is Bland's rule, which protects the
//! phase-one iteration against cycling on degenerate vertices.

use thiserror::Error;

/// Reduced costs below this threshold count as improving.
const PRICE_TOL: f64 = 1e-9;

/// Pivot magnitudes below this threshold are treated as zero.
const PIVOT_TOL: f64 = 1e-11;

/// Phase-one objectives at or below this threshold certify feasibility.
const FEASIBLE_TOL: f64 = 1e-10;

/// Errors raised by the solver itself.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    /// The iteration cap was reached before optimality.
    #[error("simplex hit the iteration cap of {0} before converging")]
    IterationLimit(usize),
}

/// Verdict of a feasibility solve.
#[derive(Debug, Clone, PartialEq)]
pub enum SimplexStatus {
    /// A nonnegative solution exists; the pairs are the nonzero
    /// coordinates (column index, value) of one basic solution.
    Feasible(Vec<(usize, f64)>),
    /// No nonnegative solution; `objective` is the smallest attainable
    /// total artificial mass, a measure of the constraint violation.
    Infeasible { objective: f64 },
}

/// Searches for `x >= 0` with `A x = b`, where column `j` of `A` is
/// written into the scratch slice by `column(j, scratch)`.
pub fn solve_equality_feasibility(
    rhs: &[f64],
    num_cols: usize,
    mut column: impl FnMut(usize, &mut [f64]),
    max_iterations: usize,
) -> Result<SimplexStatus, SimplexError> {
    let m = rhs.len();
    assert!(m > 0, "at least one constraint row is required");

    // Flip rows so the right-hand side is nonnegative and the initial
    // artificial basis is feasible.
    let row_sign: Vec<f64> = rhs
        .iter()
        .map(|&b| if b < 0.0 { -1.0 } else { 1.0 })
        .collect();
    let mut x_basic: Vec<f64> = rhs.iter().zip(&row_sign).map(|(&b, &s)| b * s).collect();

    // basis[i] < num_cols is a structural column; otherwise it is the
    // artificial slot for row basis[i] - num_cols.
    let mut basis: Vec<usize> = (0..m).map(|i| num_cols + i).collect();
    let mut binv: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row = vec![0.0; m];
            row[i] = 1.0;
            row
        })
        .collect();

    let mut raw = vec![0.0; m];
    let mut col = vec![0.0; m];
    let mut direction = vec![0.0; m];

    for _ in 0..max_iterations {
        // Phase-one prices: y = c_B B^{-1} with unit cost on artificials.
        let mut y = vec![0.0; m];
        for (i, &b) in basis.iter().enumerate() {
            if b >= num_cols {
                for (slot, binv_entry) in y.iter_mut().zip(&binv[i]) {
                    *slot += binv_entry;
                }
            }
        }

        // Bland entering rule: first structural column that improves.
        // Artificial columns never re-enter.
        let mut entering = None;
        for j in 0..num_cols {
            if basis.contains(&j) {
                continue;
            }
            column(j, &mut raw);
            for ((c, &r), &s) in col.iter_mut().zip(&raw).zip(&row_sign) {
                *c = r * s;
            }
            let reduced: f64 = -y.iter().zip(&col).map(|(a, b)| a * b).sum::<f64>();
            if reduced < -PRICE_TOL {
                entering = Some(j);
                break;
            }
        }

        let Some(j) = entering else {
            let objective: f64 = basis
                .iter()
                .zip(&x_basic)
                .filter(|(&b, _)| b >= num_cols)
                .map(|(_, &v)| v)
                .sum();
            if objective > FEASIBLE_TOL {
                return Ok(SimplexStatus::Infeasible { objective });
            }
            let solution = basis
                .iter()
                .zip(&x_basic)
                .filter(|(&b, &v)| b < num_cols && v > 0.0)
                .map(|(&b, &v)| (b, v))
                .collect();
            return Ok(SimplexStatus::Feasible(solution));
        };

        // col already holds the entering column (sign-adjusted).
        for (i, d) in direction.iter_mut().enumerate() {
            *d = binv[i].iter().zip(&col).map(|(a, b)| a * b).sum();
        }

        // Ratio test with lowest-basis-index tie breaking.
        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..m {
            if direction[i] > PIVOT_TOL {
                let ratio = x_basic[i] / direction[i];
                let better = match leaving {
                    None => true,
                    Some((r, best)) => {
                        ratio < best - PIVOT_TOL
                            || (ratio < best + PIVOT_TOL && basis[i] < basis[r])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leaving else {
            // A descent ray in phase one cannot exist; reaching this
            // branch means the numerics have degraded beyond use.
            return Err(SimplexError::IterationLimit(max_iterations));
        };

        // Pivot: update the inverse and the basic solution in place.
        let pivot = direction[r];
        for entry in &mut binv[r] {
            *entry /= pivot;
        }
        x_basic[r] /= pivot;
        for i in 0..m {
            if i != r && direction[i].abs() > 0.0 {
                let factor = direction[i];
                let (head, tail) = binv.split_at_mut(r.max(i));
                let (row_i, row_r) = if i < r {
                    (&mut head[i], &tail[0])
                } else {
                    (&mut tail[0], &head[r])
                };
                for (a, b) in row_i.iter_mut().zip(row_r.iter()) {
                    *a -= factor * b;
                }
                x_basic[i] -= factor * x_basic[r];
                if x_basic[i] < 0.0 && x_basic[i] > -PIVOT_TOL {
                    x_basic[i] = 0.0;
                }
            }
        }
        basis[r] = j;
    }

    Err(SimplexError::IterationLimit(max_iterations))
}
