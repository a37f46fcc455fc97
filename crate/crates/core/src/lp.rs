//! Exact feasibility of `A x = b, x >= 0`.
//!
//! Phase I of the tableau simplex method over the rationals, with Bland's
//! rule for both the entering and the leaving variable, so it terminates and
//! is deterministic. An infeasible system comes with a Farkas certificate
//! read off the final reduced costs of the artificial columns.

use num::{One, Signed, Zero};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// A nonnegative solution of `A x = b`.
    Feasible(Vec<Scalar>),
    /// `y` with `y^T A <= 0` componentwise and `y^T b > 0`.
    Infeasible(Vec<Scalar>),
}

pub fn feasibility(a: &[Vec<Scalar>], b: &[Scalar]) -> Feasibility {
    let m = a.len();
    assert_eq!(b.len(), m, "one right-hand side per row");
    let n = a.first().map_or(0, Vec::len);
    assert!(
        a.iter().all(|row| row.len() == n),
        "ragged constraint matrix"
    );

    let signs: Vec<bool> = b.iter().map(Signed::is_negative).collect();
    let width = n + m;
    // rows: [A' | I | b'], with b' = |b|
    let mut rows: Vec<Vec<Scalar>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(width + 1);
            row.extend(a[i].iter().map(|v| if signs[i] { -v } else { v.clone() }));
            row.extend((0..m).map(|k| {
                if k == i {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }));
            row.push(b[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();

    // reduced costs of the phase I objective (sum of artificials); the last
    // entry holds minus the objective value
    let mut cost = vec![Scalar::zero(); width + 1];
    for row in &rows {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width] -= &row[width];
    }

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Scalar)> = None;
        for i in 0..m {
            if !rows[i][enter].is_positive() {
                continue;
            }
            let ratio = &rows[i][width] / &rows[i][enter];
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase I is bounded below by zero
        let (pivot_row, _) = leave.expect("phase I objective is bounded");
        pivot(&mut rows, &mut cost, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    if cost[width].is_zero() {
        let mut x = vec![Scalar::zero(); n];
        for (i, &var) in basis.iter().enumerate() {
            if var < n {
                x[var] = rows[i][width].clone();
            }
        }
        Feasibility::Feasible(x)
    } else {
        let y = (0..m)
            .map(|i| {
                let dual = Scalar::one() - &cost[n + i];
                if signs[i] {
                    -dual
                } else {
                    dual
                }
            })
            .collect();
        Feasibility::Infeasible(y)
    }
}

fn pivot(rows: &mut [Vec<Scalar>], cost: &mut [Scalar], r: usize, c: usize) {
    let inv = rows[r][c].recip();
    for v in rows[r].iter_mut() {
        *v *= &inv;
    }
    let pivot_row = rows[r].clone();
    for (i, row) in rows.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let factor = row[c].clone();
        for (v, p) in row.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
    }
    if !cost[c].is_zero() {
        let factor = cost[c].clone();
        for (v, p) in cost.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
    }
}

/// Checks a claimed solution exactly.
pub fn is_solution(a: &[Vec<Scalar>], b: &[Scalar], x: &[Scalar]) -> bool {
    x.iter().all(|v| !v.is_negative())
        && a.iter().zip(b).all(|(row, rhs)| {
            row.iter()
                .zip(x)
                .fold(Scalar::zero(), |acc, (p, q)| acc + p * q)
                == *rhs
        })
}

/// Checks a claimed Farkas certificate exactly.
pub fn is_farkas_certificate(a: &[Vec<Scalar>], b: &[Scalar], y: &[Scalar]) -> bool {
    let n = a.first().map_or(0, Vec::len);
    let yb = y
        .iter()
        .zip(b)
        .fold(Scalar::zero(), |acc, (p, q)| acc + p * q);
    yb.is_positive()
        && (0..n).all(|j| {
            let col = y
                .iter()
                .zip(a)
                .fold(Scalar::zero(), |acc, (p, row)| acc + p * &row[j]);
            !col.is_positive()
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    fn vec_of(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn feasible_simple() {
        let a = mat(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = vec_of(&[2, 3]);
        match feasibility(&a, &b) {
            Feasibility::Feasible(x) => assert!(is_solution(&a, &b, &x)),
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_with_certificate() {
        // x1 + x2 = 1 and x1 + x2 = 2
        let a = mat(&[&[1, 1], &[1, 1]]);
        let b = vec_of(&[1, 2]);
        match feasibility(&a, &b) {
            Feasibility::Infeasible(y) => assert!(is_farkas_certificate(&a, &b, &y)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn negative_rhs_is_flipped() {
        // x1 - x2 = -1 feasible (x2 = 1); -x1 = 1 infeasible
        let a = mat(&[&[1, -1]]);
        let b = vec_of(&[-1]);
        assert!(matches!(feasibility(&a, &b), Feasibility::Feasible(_)));
        let a = mat(&[&[-1]]);
        let b = vec_of(&[1]);
        match feasibility(&a, &b) {
            Feasibility::Infeasible(y) => assert!(is_farkas_certificate(&a, &b, &y)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_rows() {
        let a = mat(&[&[0, 0], &[1, 1]]);
        let b = vec_of(&[0, 1]);
        assert!(matches!(feasibility(&a, &b), Feasibility::Feasible(_)));
        let b = vec_of(&[1, 1]);
        match feasibility(&a, &b) {
            Feasibility::Infeasible(y) => assert!(is_farkas_certificate(&a, &b, &y)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }
}
