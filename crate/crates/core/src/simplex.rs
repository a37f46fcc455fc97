//! Simplices induced by `d + 1` hyperplanes, and exact distances between
//! convex hulls of small vertex sets.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{self, Hyperplane, Vector};
use crate::linalg;
use crate::scalar::Scalar;

/// Vertex representation of an induced simplex. `degenerate` is set when the
/// vertices collapsed (all hyperplanes concurrent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: Vec<Vector>,
    degenerate: bool,
}

impl Simplex {
    /// Deduplicates `points` (first occurrence wins); the result is
    /// degenerate when fewer than `dim + 1` distinct points remain.
    pub fn from_points(points: Vec<Vector>, dim: usize) -> Self {
        let mut vertices: Vec<Vector> = Vec::with_capacity(points.len());
        for p in points {
            if !vertices.contains(&p) {
                vertices.push(p);
            }
        }
        let degenerate = vertices.len() < dim + 1;
        Simplex {
            vertices,
            degenerate,
        }
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }
}

/// The `d + 1` intersection points of the `d`-subsets of `tuple`; entry `k`
/// omits hyperplane `k`. Not deduplicated.
pub fn induced_vertices(tuple: &[Hyperplane]) -> Result<Vec<Vector>> {
    let dim = tuple.first().map_or(0, Hyperplane::dim);
    if tuple.len() != dim + 1 || dim == 0 {
        return Err(Error::SizeMismatch {
            expected: dim + 1,
            found: tuple.len(),
        });
    }
    (0..tuple.len())
        .map(|omit| {
            let subset: Vec<&Hyperplane> = tuple
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != omit)
                .map(|(_, h)| h)
                .collect();
            geometry::solve_linear_refs(&subset)?.ok_or_else(|| Error::SingularSubset {
                subset: (0..tuple.len()).filter(|&i| i != omit).collect(),
            })
        })
        .collect()
}

pub fn induced_simplex(tuple: &[Hyperplane]) -> Result<Simplex> {
    let vertices = induced_vertices(tuple)?;
    let dim = vertices[0].dim();
    Ok(Simplex::from_points(vertices, dim))
}

/// Orthogonal projection onto the plane of the first two coordinate axes.
pub fn project_e1e2(simplex: &Simplex) -> Simplex {
    let points = simplex
        .vertices()
        .iter()
        .map(|v| Vector::new(v.coords()[..2].to_vec()))
        .collect();
    Simplex::from_points(points, 2)
}

fn check_same_dim(a: &[Vector], b: &[Vector]) -> Result<usize> {
    let dim = a
        .first()
        .or(b.first())
        .map(Vector::dim)
        .ok_or(Error::SizeMismatch {
            expected: 1,
            found: 0,
        })?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::SizeMismatch {
            expected: 1,
            found: 0,
        });
    }
    match a.iter().chain(b).find(|v| v.dim() != dim) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        }),
        None => Ok(dim),
    }
}

/// Exact squared Euclidean distance between `conv(a)` and `conv(b)`.
///
/// The closest pair lies in the relative interiors of some face pair
/// `(conv S, conv T)`; at an extreme optimal pair the restricted least-squares
/// problem has a unique solution. So it suffices to solve the KKT system of
/// `min |sum a_s x_s - sum b_t y_t|^2` with `sum x = sum y = 1` for every pair
/// of subsets of at most `dim + 1` vertices, and keep nonnegative solutions.
pub fn dist_sq_hulls(a: &[Vector], b: &[Vector]) -> Result<Scalar> {
    let dim = check_same_dim(a, b)?;
    // signed generators: z = sum_k c_k u_k
    let generators: Vec<Vector> = a
        .iter()
        .cloned()
        .chain(b.iter().map(|v| v.scale(&-Scalar::one())))
        .collect();
    let gram: Vec<Vec<Scalar>> = generators
        .iter()
        .map(|u| generators.iter().map(|w| u.dot(w)).collect())
        .collect();

    let mut best: Option<Scalar> = None;
    let limit = dim + 1;
    for s_mask in 1u64..(1 << a.len()) {
        if s_mask.count_ones() as usize > limit {
            continue;
        }
        for t_mask in 1u64..(1 << b.len()) {
            if t_mask.count_ones() as usize > limit {
                continue;
            }
            let support: Vec<usize> = (0..a.len())
                .filter(|&i| s_mask >> i & 1 == 1)
                .chain(
                    (0..b.len())
                        .filter(|&j| t_mask >> j & 1 == 1)
                        .map(|j| a.len() + j),
                )
                .collect();
            let Some(coeffs) = kkt_solve(&gram, &support, a.len()) else {
                continue;
            };
            if coeffs.iter().any(Signed::is_negative) {
                continue;
            }
            // |z|^2 = c^T G c
            let value = support
                .iter()
                .zip(&coeffs)
                .fold(Scalar::zero(), |acc, (&k, ck)| {
                    let row = support
                        .iter()
                        .zip(&coeffs)
                        .fold(Scalar::zero(), |acc, (&l, cl)| acc + &gram[k][l] * cl);
                    acc + ck * row
                });
            if best.as_ref().is_none_or(|b| value < *b) {
                let done = value.is_zero();
                best = Some(value);
                if done {
                    return Ok(best.unwrap());
                }
            }
        }
    }
    Ok(best.expect("vertex pairs always give a solution"))
}

/// KKT system for the face pair `support` (indices < `split` belong to the
/// first hull). Returns the convex coefficients, or `None` when singular.
fn kkt_solve(gram: &[Vec<Scalar>], support: &[usize], split: usize) -> Option<Vec<Scalar>> {
    let k = support.len();
    let size = k + 2;
    let mut m = vec![vec![Scalar::zero(); size]; size];
    let mut rhs = vec![Scalar::zero(); size];
    for (row, &p) in support.iter().enumerate() {
        for (col, &q) in support.iter().enumerate() {
            m[row][col] = gram[p][q].clone();
        }
        let group = usize::from(p >= split);
        m[row][k + group] = Scalar::one();
        m[k + group][row] = Scalar::one();
    }
    rhs[k] = Scalar::one();
    rhs[k + 1] = Scalar::one();
    let mut x = linalg::solve(&m, &rhs)?;
    x.truncate(k);
    Some(x)
}

/// Exact squared distance from `p` to `conv(vertices)`.
pub fn dist_sq_point_hull(p: &Vector, vertices: &[Vector]) -> Result<Scalar> {
    dist_sq_hulls(std::slice::from_ref(p), vertices)
}
