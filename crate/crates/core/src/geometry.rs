//! Vectors, hyperplanes, colored arrangements and the position predicates.

use std::fmt;
use std::ops::{Add, Index, Sub};

use num::{BigInt, Signed, Zero};

use crate::combinatorics::Combinations;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{self, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(Vec<Scalar>);

impl Vector {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Vector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| scalar::int(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Scalar::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> Scalar {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }

    pub fn scale(&self, factor: &Scalar) -> Vector {
        Vector(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn dist_sq(&self, other: &Vector) -> Scalar {
        (self - other).norm_sq()
    }

    /// Largest coordinate deviation, `max_i |a_i - b_i|`.
    pub fn max_norm_dist(&self, other: &Vector) -> Scalar {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    /// Convex (or any affine) combination `sum_i w_i v_i`.
    pub fn combination(points: &[Vector], weights: &[Scalar]) -> Vector {
        debug_assert_eq!(points.len(), weights.len());
        let dim = points.first().map_or(0, Vector::dim);
        let mut acc = vec![Scalar::zero(); dim];
        for (p, w) in points.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            for (a, c) in acc.iter_mut().zip(&p.0) {
                *a += c * w;
            }
        }
        Vector(acc)
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;

    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", scalar::format(c))?;
        }
        write!(f, ")")
    }
}

/// The locus `<normal, x> = offset`. Not normalized: positive multiples of
/// the same data describe the same locus, see [`Hyperplane::same_locus`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    normal: Vector,
    offset: Scalar,
}

impl Hyperplane {
    pub fn new(normal: Vector, offset: Scalar) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::ZeroNormal);
        }
        Ok(Hyperplane { normal, offset })
    }

    pub fn from_ints(normal: &[i64], offset: i64) -> Self {
        Self::new(Vector::from_ints(normal), scalar::int(offset)).expect("nonzero normal")
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> &Scalar {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `<normal, x> - offset`: zero on the hyperplane, sign tells the side.
    pub fn signed_value(&self, x: &Vector) -> Scalar {
        self.normal.dot(x) - &self.offset
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.signed_value(x).is_zero()
    }

    /// Orthogonal projection of `p` onto the hyperplane.
    pub fn project(&self, p: &Vector) -> Vector {
        let t = self.signed_value(p) / self.normal.norm_sq();
        p - &self.normal.scale(&t)
    }

    /// Primitive integer form of `(normal, offset)` with the first nonzero
    /// normal coefficient positive. Equal keys iff equal loci.
    pub fn canonical_key(&self) -> Vec<BigInt> {
        let all: Vec<&Scalar> = self
            .normal
            .coords()
            .iter()
            .chain(std::iter::once(&self.offset))
            .collect();
        let lcm = scalar::common_denominator(all.iter().copied());
        let mut ints: Vec<BigInt> = all.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
        linalg::primitive(&mut ints);
        let leading_negative = ints
            .iter()
            .find(|v| !v.is_zero())
            .is_some_and(Signed::is_negative);
        if leading_negative {
            for v in ints.iter_mut() {
                *v = -&*v;
            }
        }
        ints
    }

    pub fn same_locus(&self, other: &Hyperplane) -> bool {
        self.dim() == other.dim() && self.canonical_key() == other.canonical_key()
    }
}

impl fmt::Debug for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{:?}, x> = {}",
            self.normal,
            scalar::format(&self.offset)
        )
    }
}

/// `d + 1` color classes of `r` hyperplanes each, in dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredArrangement {
    dimension: usize,
    classes: Vec<Vec<Hyperplane>>,
    labels: Option<Vec<String>>,
}

impl ColoredArrangement {
    pub fn new(
        dimension: usize,
        classes: Vec<Vec<Hyperplane>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidArrangement(format!(
                "dimension must be at least 2, got {dimension}"
            )));
        }
        if classes.len() != dimension + 1 {
            return Err(Error::InvalidArrangement(format!(
                "expected {} classes, got {}",
                dimension + 1,
                classes.len()
            )));
        }
        let parts = classes[0].len();
        if parts < 2 {
            return Err(Error::InvalidArrangement(format!(
                "each class needs at least 2 hyperplanes, got {parts}"
            )));
        }
        for (i, class) in classes.iter().enumerate() {
            if class.len() != parts {
                return Err(Error::InvalidArrangement(format!(
                    "class {i} has {} hyperplanes, expected {parts}",
                    class.len()
                )));
            }
            if let Some(h) = class.iter().find(|h| h.dim() != dimension) {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: h.dim(),
                });
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != classes.len() {
                return Err(Error::InvalidArrangement(format!(
                    "expected {} labels, got {}",
                    classes.len(),
                    labels.len()
                )));
            }
        }
        Ok(ColoredArrangement {
            dimension,
            classes,
            labels,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn parts(&self) -> usize {
        self.classes[0].len()
    }

    pub fn classes(&self) -> &[Vec<Hyperplane>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[Hyperplane] {
        &self.classes[i]
    }

    pub fn hyperplane(&self, class: usize, index: usize) -> &Hyperplane {
        &self.classes[class][index]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// All hyperplanes, class by class.
    pub fn union(&self) -> Vec<Hyperplane> {
        self.classes.iter().flatten().cloned().collect()
    }

    /// The tuple selected by one pick per class.
    pub fn tuple(&self, picks: &[usize]) -> Vec<Hyperplane> {
        picks
            .iter()
            .enumerate()
            .map(|(class, &i)| self.classes[class][i].clone())
            .collect()
    }
}

fn normal_matrix(hyperplanes: &[&Hyperplane]) -> Vec<Vec<Scalar>> {
    hyperplanes
        .iter()
        .map(|h| h.normal().coords().to_vec())
        .collect()
}

fn check_dims(hyperplanes: &[&Hyperplane], dim: usize) -> Result<()> {
    match hyperplanes.iter().find(|h| h.dim() != dim) {
        Some(h) => Err(Error::DimensionMismatch {
            expected: dim,
            found: h.dim(),
        }),
        None => Ok(()),
    }
}

/// Unique common point of `d` hyperplanes in dimension `d`, or `None` when
/// their normals are linearly dependent.
pub fn solve_linear(hyperplanes: &[Hyperplane]) -> Result<Option<Vector>> {
    let refs: Vec<&Hyperplane> = hyperplanes.iter().collect();
    solve_linear_refs(&refs)
}

pub(crate) fn solve_linear_refs(hyperplanes: &[&Hyperplane]) -> Result<Option<Vector>> {
    let dim = hyperplanes.first().map_or(0, |h| h.dim());
    if hyperplanes.len() != dim {
        return Err(Error::SizeMismatch {
            expected: dim,
            found: hyperplanes.len(),
        });
    }
    check_dims(hyperplanes, dim)?;
    let rhs: Vec<Scalar> = hyperplanes.iter().map(|h| h.offset().clone()).collect();
    Ok(linalg::solve(&normal_matrix(hyperplanes), &rhs).map(Vector::new))
}

/// Whether the normals of `d` hyperplanes in dimension `d` are independent.
pub fn independent_normals(hyperplanes: &[&Hyperplane]) -> bool {
    !linalg::determinant(&normal_matrix(hyperplanes)).is_zero()
}

/// Whether the hyperplanes share a common point.
pub fn concurrent(hyperplanes: &[&Hyperplane]) -> bool {
    let normals = normal_matrix(hyperplanes);
    let augmented: Vec<Vec<Scalar>> = hyperplanes
        .iter()
        .zip(&normals)
        .map(|(h, row)| {
            let mut row = row.clone();
            row.push(h.offset().clone());
            row
        })
        .collect();
    linalg::rank(&normals) == linalg::rank(&augmented)
}

/// Every choice of `d` hyperplanes from `d` distinct classes has independent
/// normals.
pub fn weak_general_position(arrangement: &ColoredArrangement) -> bool {
    let d = arrangement.dimension();
    let r = arrangement.parts();
    (0..=d).all(|omitted| {
        let classes: Vec<usize> = (0..=d).filter(|&c| c != omitted).collect();
        let mut picks = vec![0usize; d];
        loop {
            let chosen: Vec<&Hyperplane> = classes
                .iter()
                .zip(&picks)
                .map(|(&c, &i)| arrangement.hyperplane(c, i))
                .collect();
            if !independent_normals(&chosen) {
                return false;
            }
            // odometer over r^d picks
            let mut pos = 0;
            loop {
                if pos == d {
                    return true;
                }
                picks[pos] += 1;
                if picks[pos] < r {
                    break;
                }
                picks[pos] = 0;
                pos += 1;
            }
        }
    })
}

/// Every `d` normals are independent and no `d + 1` hyperplanes share a
/// point. Hyperplanes of the wrong dimension make the answer `false`.
pub fn general_position(hyperplanes: &[Hyperplane], d: usize) -> bool {
    if hyperplanes.iter().any(|h| h.dim() != d) {
        return false;
    }
    let n = hyperplanes.len();
    let independent = Combinations::new(n, d).all(|subset| {
        let chosen: Vec<&Hyperplane> = subset.iter().map(|&i| &hyperplanes[i]).collect();
        independent_normals(&chosen)
    });
    if !independent {
        return false;
    }
    // With all d-subsets independent, d + 1 hyperplanes are concurrent iff
    // the augmented matrix [N | c] is singular.
    Combinations::new(n, d + 1).all(|subset| {
        let rows: Vec<Vec<Scalar>> = subset
            .iter()
            .map(|&i| {
                let h = &hyperplanes[i];
                let mut row = h.normal().coords().to_vec();
                row.push(h.offset().clone());
                row
            })
            .collect();
        !linalg::determinant(&rows).is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn line(a: i64, b: i64, c: i64) -> Hyperplane {
        Hyperplane::from_ints(&[a, b], c)
    }

    #[test]
    fn solve_axis_aligned() {
        let x = solve_linear(&[line(1, 0, 1), line(0, 1, 1)])
            .unwrap()
            .unwrap();
        assert_eq!(x, Vector::from_ints(&[1, 1]));
    }

    #[test]
    fn solve_by_elimination() {
        // x = 1, x + y = 0  =>  y = -1
        let x = solve_linear(&[line(1, 0, 1), line(1, 1, 0)])
            .unwrap()
            .unwrap();
        assert_eq!(x, Vector::from_ints(&[1, -1]));
    }

    #[test]
    fn solve_parallel_is_singular() {
        assert_eq!(
            solve_linear(&[line(1, 0, 1), line(1, 0, -1)]).unwrap(),
            None
        );
    }

    #[test]
    fn solve_dimension_mismatch() {
        let h3 = Hyperplane::from_ints(&[1, 0, 0], 1);
        assert!(matches!(
            solve_linear(&[line(1, 0, 1), h3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            solve_linear(&[line(1, 0, 1)]),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn zero_normal_rejected() {
        assert_eq!(
            Hyperplane::new(Vector::from_ints(&[0, 0]), int(1)),
            Err(Error::ZeroNormal)
        );
    }

    #[test]
    fn canonical_key_identifies_loci() {
        let a = line(1, 1, 0);
        let b = Hyperplane::new(Vector::new(vec![ratio(-1, 2), ratio(-1, 2)]), int(0)).unwrap();
        assert!(a.same_locus(&b));
        assert_ne!(a, b);
        assert!(!a.same_locus(&line(1, -1, 0)));
        assert_eq!(line(2, 4, 6).canonical_key(), line(1, 2, 3).canonical_key());
    }

    #[test]
    fn projection_closed_form() {
        let p = Vector::from_ints(&[0, 0]);
        assert_eq!(line(1, 0, 1).project(&p), Vector::from_ints(&[1, 0]));
        assert_eq!(line(1, 1, 2).project(&p), Vector::from_ints(&[1, 1]));
        let q = Vector::from_ints(&[3, -1]);
        assert_eq!(line(1, 1, 2).project(&q), q);
    }

    #[test]
    fn general_position_examples() {
        assert!(general_position(
            &[line(1, 0, 0), line(0, 1, 0), line(1, 1, 1)],
            2
        ));
        assert!(!general_position(
            &[line(1, 0, 0), line(0, 1, 0), line(1, 1, 0)],
            2
        ));
        assert!(!general_position(
            &[line(1, 0, 1), line(1, 0, 1), line(0, 1, 0)],
            2
        ));
    }

    #[test]
    fn weak_position_rejects_parallel_classes() {
        let arr = ColoredArrangement::new(
            2,
            vec![
                vec![line(1, 0, 1), line(1, 0, 1)],
                vec![line(1, 0, 2), line(1, 0, 2)],
                vec![line(0, 1, 0), line(0, 1, 1)],
            ],
            None,
        )
        .unwrap();
        assert!(!weak_general_position(&arr));
    }

    #[test]
    fn arrangement_validation() {
        let c = || vec![line(1, 0, 1), line(0, 1, 1)];
        assert!(ColoredArrangement::new(2, vec![c(), c()], None).is_err());
        assert!(ColoredArrangement::new(2, vec![c(), c(), vec![line(1, 1, 0)]], None).is_err());
        assert!(ColoredArrangement::new(2, vec![c(), c(), c()], Some(vec!["a".into()])).is_err());
        assert!(ColoredArrangement::new(2, vec![c(), c(), c()], None).is_ok());
    }

    #[test]
    fn concurrency() {
        let a = line(1, 0, 0);
        let b = line(0, 1, 0);
        assert!(concurrent(&[&a, &b, &line(1, 1, 0)]));
        assert!(!concurrent(&[&a, &b, &line(1, 1, 1)]));
        assert!(!concurrent(&[&a, &line(1, 0, 1)]));
    }
}
