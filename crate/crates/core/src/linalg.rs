//! Dense exact linear algebra.
//!
//! Square systems are solved by fraction-free (Bareiss) elimination: each row
//! is first cleared to integers, then eliminated without leaving the integers.
//! Pivots are the first nonzero entry at or below the diagonal, so results do
//! not depend on anything but the input order.

use num::{BigInt, Integer, One, Zero};

use crate::scalar::{common_denominator, Scalar};

/// Scales a rational row to integers (by the lcm of its denominators).
/// Returns the integer row and the multiplier used.
fn integer_row(row: &[Scalar]) -> (Vec<BigInt>, BigInt) {
    let lcm = common_denominator(row);
    let ints = row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    (ints, lcm)
}

/// In-place Bareiss forward elimination over the first `pivot_cols` columns.
/// Returns `Some(sign)` of the row permutation when every pivot is nonzero.
fn bareiss(m: &mut [Vec<BigInt>], pivot_cols: usize) -> Option<i32> {
    let n = m.len();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..pivot_cols.min(n) {
        let pivot_row = (k..n).find(|&i| !m[i][k].is_zero())?;
        if pivot_row != k {
            m.swap(pivot_row, k);
            sign = -sign;
        }
        let width = m[k].len();
        for i in k + 1..n {
            for j in k + 1..width {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Some(sign)
}

pub fn determinant(rows: &[Vec<Scalar>]) -> Scalar {
    let n = rows.len();
    if n == 0 {
        return Scalar::one();
    }
    debug_assert!(rows.iter().all(|r| r.len() == n));
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let (ints, lcm) = integer_row(r);
            scale *= lcm;
            ints
        })
        .collect();
    match bareiss(&mut m, n) {
        Some(sign) => Scalar::new(&m[n - 1][n - 1] * BigInt::from(sign), scale),
        None => Scalar::zero(),
    }
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = a.len();
    debug_assert_eq!(b.len(), n);
    debug_assert!(a.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut full = row.clone();
            full.push(rhs.clone());
            integer_row(&full).0
        })
        .collect();
    bareiss(&mut m, n)?;
    let mut x = vec![Scalar::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Scalar::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= &x[j] * Scalar::from_integer(m[i][j].clone());
        }
        x[i] = acc / Scalar::from_integer(m[i][i].clone());
    }
    Some(x)
}

/// Rank of an arbitrary (possibly rectangular) rational matrix.
pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r).0).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for j in col..cols {
                row[j] = &row[j] * &pivot[col] - &factor * &pivot[j];
            }
            // keep entries small
            let g = row.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            if !g.is_zero() && !g.is_one() {
                for v in row.iter_mut() {
                    *v = &*v / &g;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Scales an integer vector to its primitive form (entries coprime).
pub fn primitive(values: &mut [BigInt]) {
    let g = values.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in values.iter_mut() {
        *v = &*v / &g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&mat(&[&[1, 2], &[3, 4]])), int(-2));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), int(0));
        let m = vec![vec![ratio(1, 2), int(1)], vec![int(1), ratio(1, 3)]];
        assert_eq!(determinant(&m), ratio(1, 6) - int(1));
        assert_eq!(
            determinant(&mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]])),
            // first-row cofactors: 2 * 1 + 1 * (-2)
            int(0)
        );
    }

    #[test]
    fn solve_small() {
        let x = solve(&mat(&[&[1, 0], &[1, 1]]), &[int(1), int(0)]).unwrap();
        assert_eq!(x, vec![int(1), int(-1)]);
        assert!(solve(&mat(&[&[1, 0], &[1, 0]]), &[int(1), int(-1)]).is_none());
        let x = solve(&mat(&[&[0, 2], &[3, 0]]), &[int(1), int(1)]).unwrap();
        assert_eq!(x, vec![ratio(1, 3), ratio(1, 2)]);
    }

    #[test]
    fn rank_rectangular() {
        assert_eq!(rank(&mat(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 2]])), 2);
        assert_eq!(rank(&mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4], &[0, 1]])), 2);
    }
}
