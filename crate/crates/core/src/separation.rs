//! Exact intersection tests between convex hulls of vertex sets.
//!
//! Every answer carries evidence: an [`IntersectionWitness`] (a point with
//! convex coefficients over each hull) or a [`SeparationCertificate`] (a
//! hyperplane with each hull strictly on its own side). Both replay by exact
//! arithmetic against the input vertices.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{Hyperplane, Vector};
use crate::lp::{self, Feasibility};
use crate::scalar::{self, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `<normal, x> < offset`
    Negative,
    /// `<normal, x> > offset`
    Positive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub separator: Hyperplane,
    /// Squared distance from the separator to the nearer of the two hulls.
    pub margin_sq: Scalar,
    /// Side of the first hull; the second hull is on the other one.
    pub first_side: Side,
}

impl SeparationCertificate {
    fn strictly_on(&self, side: Side, v: &Vector) -> bool {
        let s = self.separator.signed_value(v);
        match side {
            Side::Negative => s.is_negative(),
            Side::Positive => s.is_positive(),
        }
    }

    /// Exact sign checks of every vertex plus the recorded margin.
    pub fn replay(&self, first: &[Vector], second: &[Vector]) -> bool {
        let other = match self.first_side {
            Side::Negative => Side::Positive,
            Side::Positive => Side::Negative,
        };
        first.iter().all(|v| self.strictly_on(self.first_side, v))
            && second.iter().all(|v| self.strictly_on(other, v))
            && self.margin_sq.is_positive()
            && margin_sq(&self.separator, first, second).is_ok_and(|m| m == self.margin_sq)
    }
}

/// A point given as a convex combination of the vertices of each hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionWitness {
    pub point: Vector,
    /// One coefficient sequence per hull, aligned with its vertices.
    pub coefficients: Vec<Vec<Scalar>>,
}

impl IntersectionWitness {
    pub fn replay(&self, hulls: &[&[Vector]]) -> bool {
        hulls.len() == self.coefficients.len()
            && hulls
                .iter()
                .zip(&self.coefficients)
                .all(|(vertices, coeffs)| {
                    coeffs.len() == vertices.len()
                        && coeffs.iter().all(|c| !c.is_negative())
                        && coeffs.iter().sum::<Scalar>().is_one()
                        && Vector::combination(vertices, coeffs) == self.point
                })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HullRelation {
    Intersecting(IntersectionWitness),
    Disjoint(SeparationCertificate),
}

impl HullRelation {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, HullRelation::Disjoint(_))
    }

    pub fn replay(&self, first: &[Vector], second: &[Vector]) -> bool {
        match self {
            HullRelation::Intersecting(w) => w.replay(&[first, second]),
            HullRelation::Disjoint(c) => c.replay(first, second),
        }
    }
}

fn common_dim(hulls: &[&[Vector]]) -> Result<usize> {
    let first = hulls.first().ok_or(Error::SizeMismatch {
        expected: 1,
        found: 0,
    })?;
    if let Some(empty) = hulls.iter().find(|h| h.is_empty()) {
        return Err(Error::SizeMismatch {
            expected: 1,
            found: empty.len(),
        });
    }
    let dim = first[0].dim();
    match hulls.iter().flat_map(|h| h.iter()).find(|v| v.dim() != dim) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        }),
        None => Ok(dim),
    }
}

/// Constraint system for "one point in every hull": per hull a block of
/// convex coefficients; rows tie each hull's combination to the first one's.
fn common_point_system(hulls: &[&[Vector]], dim: usize) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let vars: usize = hulls.iter().map(|h| h.len()).sum();
    let starts: Vec<usize> = hulls
        .iter()
        .scan(0, |acc, h| {
            let s = *acc;
            *acc += h.len();
            Some(s)
        })
        .collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for k in 1..hulls.len() {
        for coord in 0..dim {
            let mut row = vec![Scalar::zero(); vars];
            for (i, v) in hulls[0].iter().enumerate() {
                row[starts[0] + i] = v[coord].clone();
            }
            for (i, v) in hulls[k].iter().enumerate() {
                row[starts[k] + i] = -&v[coord];
            }
            a.push(row);
            b.push(Scalar::zero());
        }
    }
    for (k, h) in hulls.iter().enumerate() {
        let mut row = vec![Scalar::zero(); vars];
        for i in 0..h.len() {
            row[starts[k] + i] = Scalar::one();
        }
        a.push(row);
        b.push(Scalar::one());
    }
    (a, b)
}

fn split_coefficients(hulls: &[&[Vector]], x: Vec<Scalar>) -> Vec<Vec<Scalar>> {
    let mut rest = x.into_iter();
    hulls
        .iter()
        .map(|h| rest.by_ref().take(h.len()).collect())
        .collect()
}

/// Decides whether `conv(first)` and `conv(second)` meet. Touching counts as
/// meeting.
pub fn hulls_intersect(first: &[Vector], second: &[Vector]) -> Result<HullRelation> {
    let hulls = [first, second];
    let dim = common_dim(&hulls)?;
    let (a, b) = common_point_system(&hulls, dim);
    match lp::feasibility(&a, &b) {
        Feasibility::Feasible(x) => {
            let coefficients = split_coefficients(&hulls, x);
            let point = Vector::combination(first, &coefficients[0]);
            Ok(HullRelation::Intersecting(IntersectionWitness {
                point,
                coefficients,
            }))
        }
        Feasibility::Infeasible(y) => Ok(HullRelation::Disjoint(certificate_from_farkas(
            first, second, &y, dim,
        )?)),
    }
}

/// Turns a Farkas vector `y = (u, s, t)` of the two-hull system into a
/// separator. Its columns give `<u, v> <= -s` on the first hull and
/// `<u, w> >= t` on the second, with `s + t > 0`.
fn certificate_from_farkas(
    first: &[Vector],
    second: &[Vector],
    y: &[Scalar],
    dim: usize,
) -> Result<SeparationCertificate> {
    let u = Vector::new(y[..dim].to_vec());
    let largest = u
        .coords()
        .iter()
        .map(Signed::abs)
        .max()
        .expect("nonempty functional");
    debug_assert!(largest.is_positive());
    let normal = u.scale(&largest.recip());
    let high_first = first.iter().map(|v| normal.dot(v)).max().unwrap();
    let low_second = second.iter().map(|v| normal.dot(v)).min().unwrap();
    debug_assert!(high_first < low_second);
    let offset = (high_first + low_second) / scalar::int(2);
    let separator = Hyperplane::new(normal, offset)?;
    let margin_sq = margin_sq(&separator, first, second)?;
    Ok(SeparationCertificate {
        separator,
        margin_sq,
        first_side: Side::Negative,
    })
}

fn margin_sq(h: &Hyperplane, first: &[Vector], second: &[Vector]) -> Result<Scalar> {
    Ok(dist_sq_hull_hyperplane(first, h)?.min(dist_sq_hull_hyperplane(second, h)?))
}

/// A point common to every hull, with its convex coefficients, or `None`.
pub fn common_point(hulls: &[&[Vector]]) -> Result<Option<IntersectionWitness>> {
    let dim = common_dim(hulls)?;
    let (a, b) = common_point_system(hulls, dim);
    Ok(match lp::feasibility(&a, &b) {
        Feasibility::Feasible(x) => {
            let coefficients = split_coefficients(hulls, x);
            let point = Vector::combination(hulls[0], &coefficients[0]);
            Some(IntersectionWitness {
                point,
                coefficients,
            })
        }
        Feasibility::Infeasible(_) => None,
    })
}

/// Convex coefficients expressing `p` over `vertices`, when `p` is in the hull.
pub fn hull_membership(p: &Vector, vertices: &[Vector]) -> Result<Option<Vec<Scalar>>> {
    let single = [p.clone()];
    Ok(common_point(&[&single, vertices])?.map(|w| w.coefficients[1].clone()))
}

/// Exact squared distance from `conv(vertices)` to `h`; zero when they meet.
pub fn dist_sq_hull_hyperplane(vertices: &[Vector], h: &Hyperplane) -> Result<Scalar> {
    if vertices.is_empty() {
        return Err(Error::SizeMismatch {
            expected: 1,
            found: 0,
        });
    }
    if let Some(v) = vertices.iter().find(|v| v.dim() != h.dim()) {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: v.dim(),
        });
    }
    let values: Vec<Scalar> = vertices.iter().map(|v| h.signed_value(v)).collect();
    let low = values.iter().min().unwrap();
    let high = values.iter().max().unwrap();
    if !low.is_positive() && !high.is_negative() {
        return Ok(Scalar::zero());
    }
    let nearest = low.abs().min(high.abs());
    Ok(&nearest * &nearest / h.normal().norm_sq())
}
