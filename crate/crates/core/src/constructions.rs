//! The colorful counterexample families, random test instances, and the
//! perturbation into general position.

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::Combinations;
use crate::error::{Error, Result};
use crate::geometry::{self, ColoredArrangement, Hyperplane, Vector};
use crate::linalg;
use crate::scalar::{self, Scalar};
use crate::simplex::induced_vertices;
use crate::verifier::RefutationReport;

/// A tilt `eps` for the last class of the high-dimensional family, checked
/// against `eps < 1 / (2 sqrt 2 (d - 2))` in the squared form
/// `8 (d - 2)^2 eps^2 < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonChoice {
    value: Scalar,
    dimension: usize,
}

impl EpsilonChoice {
    pub fn new(value: Scalar, dimension: usize) -> Result<Self> {
        if dimension < 3 {
            return Err(Error::InvalidParameter(format!(
                "the tilted family needs d >= 3, got {dimension}"
            )));
        }
        if !value.is_positive() || !Self::within_bound(&value, dimension) {
            return Err(Error::InvalidEpsilon {
                value: scalar::format(&value),
                dimension,
            });
        }
        Ok(EpsilonChoice { value, dimension })
    }

    /// `1 / (4 (d - 2))`.
    pub fn default_for(dimension: usize) -> Result<Self> {
        let k = dimension.saturating_sub(2).max(1) as i64;
        Self::new(scalar::ratio(1, 4 * k), dimension)
    }

    pub fn within_bound(value: &Scalar, dimension: usize) -> bool {
        let k = scalar::int(dimension as i64 - 2);
        scalar::int(8) * &k * &k * value * value < Scalar::one()
    }

    pub fn value(&self) -> &Scalar {
        &self.value
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `eps (d - 2)`, the per-coordinate deviation allowance.
    pub fn deviation_bound(&self) -> Scalar {
        &self.value * scalar::int(self.dimension as i64 - 2)
    }
}

fn repeated(common: Hyperplane, odd: Hyperplane, r: usize) -> Vec<Hyperplane> {
    let mut class = vec![common; r - 1];
    class.push(odd);
    class
}

/// Red: `x = 1` (r-1 times) and `x = -1`; green: `y = -1` (r-1 times) and
/// `y = 1`; blue: `x + y = 0` (r-1 times) and `x - y = 0`.
pub fn planar_counterexample(r: usize) -> Result<ColoredArrangement> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "r must be at least 2, got {r}"
        )));
    }
    let classes = vec![
        repeated(
            Hyperplane::from_ints(&[1, 0], 1),
            Hyperplane::from_ints(&[1, 0], -1),
            r,
        ),
        repeated(
            Hyperplane::from_ints(&[0, 1], -1),
            Hyperplane::from_ints(&[0, 1], 1),
            r,
        ),
        repeated(
            Hyperplane::from_ints(&[1, 1], 0),
            Hyperplane::from_ints(&[1, -1], 0),
            r,
        ),
    ];
    let labels = ["red", "green", "blue"].map(String::from).to_vec();
    ColoredArrangement::new(2, classes, Some(labels))
}

/// Class `i < d`: `x_i = 1` (r-1 times) and `x_i = -1`. Last class:
/// `x_1 + x_2 + eps (x_3 + ... + x_d) = 0` (r-1 times) and
/// `x_1 - x_2 + eps (x_3 + ... + x_d) = 0`.
pub fn highdim_counterexample(
    d: usize,
    r: usize,
    epsilon: Option<EpsilonChoice>,
) -> Result<ColoredArrangement> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "d must be at least 3, got {d}"
        )));
    }
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "r must be at least 2, got {r}"
        )));
    }
    let epsilon = match epsilon {
        Some(e) if e.dimension() != d => EpsilonChoice::new(e.value, d)?,
        Some(e) => e,
        None => EpsilonChoice::default_for(d)?,
    };
    let axis = |i: usize, offset: i64| {
        let mut n = vec![Scalar::zero(); d];
        n[i] = Scalar::one();
        Hyperplane::new(Vector::new(n), scalar::int(offset)).expect("unit normal")
    };
    let tilted = |second: i64| {
        let mut n = vec![epsilon.value().clone(); d];
        n[0] = Scalar::one();
        n[1] = scalar::int(second);
        Hyperplane::new(Vector::new(n), Scalar::zero()).expect("nonzero normal")
    };
    let mut classes: Vec<Vec<Hyperplane>> = (0..d)
        .map(|i| repeated(axis(i, 1), axis(i, -1), r))
        .collect();
    classes.push(repeated(tilted(1), tilted(-1), r));
    ColoredArrangement::new(d, classes, None)
}

/// Max-norm distance between the first two coordinates of each vertex of a
/// colorful simplex of the tilted family and the matching vertex of the
/// planar model (lines `x = l1`, `y = l2`, `x - l3 y = 0`). The vertex that
/// omits class `k` corresponds to the planar vertex omitting the same line
/// for `k` in {first, second, last}, and to `(l1, l2)` otherwise.
pub fn planar_model_deviation(arrangement: &ColoredArrangement, picks: &[usize]) -> Result<Scalar> {
    let d = arrangement.dimension();
    let h1 = arrangement.hyperplane(0, picks[0]);
    let h2 = arrangement.hyperplane(1, picks[1]);
    let last = arrangement.hyperplane(d, picks[d]);
    let l1 = h1.offset() / &h1.normal()[0];
    let l2 = h2.offset() / &h2.normal()[1];
    let l3 = -(&last.normal()[1] / &last.normal()[0]);
    let model = [
        Hyperplane::new(Vector::from_ints(&[1, 0]), l1)?,
        Hyperplane::new(Vector::from_ints(&[0, 1]), l2)?,
        Hyperplane::new(Vector::new(vec![Scalar::one(), -l3]), Scalar::zero())?,
    ];
    let planar = induced_vertices(&model)?;
    let vertices = induced_vertices(&arrangement.tuple(picks))?;
    Ok(vertices
        .iter()
        .enumerate()
        .map(|(omitted, v)| {
            let model_index = match omitted {
                0 => 0,
                1 => 1,
                _ => 2,
            };
            Vector::new(v.coords()[..2].to_vec()).max_norm_dist(&planar[model_index])
        })
        .max()
        .expect("d + 1 vertices"))
}

fn random_hyperplane(rng: &mut ChaCha8Rng, d: usize, range: i64) -> Hyperplane {
    loop {
        let normal: Vec<i64> = (0..d).map(|_| rng.gen_range(-range..=range)).collect();
        if normal.iter().all(|&c| c == 0) {
            continue;
        }
        return Hyperplane::from_ints(&normal, rng.gen_range(-range..=range));
    }
}

/// `n` hyperplanes with small integer coefficients in general position,
/// drawn by rejection from a seeded generator.
pub fn random_general_position(n: usize, d: usize, seed: u64) -> Result<Vec<Hyperplane>> {
    if d < 1 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Hyperplane> = Vec::with_capacity(n);
    while out.len() < n {
        let h = random_hyperplane(&mut rng, d, 9);
        out.push(h);
        if !new_member_keeps_position(&out, d) {
            out.pop();
        }
    }
    Ok(out)
}

/// General position, checking only the subsets that include the last entry.
fn new_member_keeps_position(hyperplanes: &[Hyperplane], d: usize) -> bool {
    let last = hyperplanes.len() - 1;
    let with_last = |k: usize| {
        Combinations::new(last, k - 1).map(move |mut s| {
            s.push(last);
            s
        })
    };
    if d <= hyperplanes.len() {
        for s in with_last(d) {
            let chosen: Vec<&Hyperplane> = s.iter().map(|&i| &hyperplanes[i]).collect();
            if !geometry::independent_normals(&chosen) {
                return false;
            }
        }
    }
    if d < hyperplanes.len() {
        for s in with_last(d + 1) {
            let chosen: Vec<&Hyperplane> = s.iter().map(|&i| &hyperplanes[i]).collect();
            if geometry::concurrent(&chosen) {
                return false;
            }
        }
    }
    true
}

/// `n` distinct integer points in `[-9, 9]^d` with no `d + 1` of them on a
/// common hyperplane, drawn by rejection from a seeded generator.
pub fn random_points(n: usize, d: usize, seed: u64) -> Result<Vec<Vector>> {
    if d < 1 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vector> = Vec::with_capacity(n);
    while out.len() < n {
        let coords: Vec<i64> = (0..d).map(|_| rng.gen_range(-9..=9)).collect();
        let p = Vector::from_ints(&coords);
        let affinely_free = |others: &[usize]| {
            let rows: Vec<Vec<Scalar>> = others
                .iter()
                .map(|&i| (&out[i] - &p).into_coords())
                .collect();
            linalg::rank(&rows) == rows.len()
        };
        let k = d.min(out.len());
        if Combinations::new(out.len(), k).all(|s| affinely_free(&s)) {
            out.push(p);
        }
    }
    Ok(out)
}

/// A colored arrangement whose union is in general position.
pub fn random_arrangement(d: usize, r: usize, seed: u64) -> Result<ColoredArrangement> {
    if d < 2 || r < 2 {
        return Err(Error::InvalidParameter(format!(
            "random arrangements need d >= 2 and r >= 2, got d = {d}, r = {r}"
        )));
    }
    let all = random_general_position(r * (d + 1), d, seed)?;
    let classes = all.chunks(r).map(<[Hyperplane]>::to_vec).collect();
    ColoredArrangement::new(d, classes, None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationConfig {
    pub seed: u64,
    pub max_attempts: usize,
    /// Offsets are multiples of `magnitude / resolution`.
    pub resolution: i64,
}

impl PerturbationConfig {
    pub fn with_seed(seed: u64) -> Self {
        PerturbationConfig {
            seed,
            max_attempts: 48,
            resolution: 1024,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationReport {
    pub delta_sq: Scalar,
    pub perturbed: ColoredArrangement,
    pub max_vertex_move_sq: Scalar,
    /// Largest coefficient offset allowed in the successful attempt.
    pub magnitude: Scalar,
    pub attempts: usize,
    pub seed: u64,
}

/// Intersection points of every colorful `d`-subset (one hyperplane from each
/// of `d` distinct classes), in a fixed order.
pub fn colorful_vertices(arrangement: &ColoredArrangement) -> Result<Vec<Vector>> {
    let d = arrangement.dimension();
    let r = arrangement.parts();
    let mut out = Vec::with_capacity((d + 1) * r.pow(d as u32));
    for omitted in 0..=d {
        let classes: Vec<usize> = (0..=d).filter(|&c| c != omitted).collect();
        for code in 0..r.pow(d as u32) {
            let mut rest = code;
            let chosen: Vec<Hyperplane> = classes
                .iter()
                .map(|&c| {
                    let i = rest % r;
                    rest /= r;
                    arrangement.hyperplane(c, i).clone()
                })
                .collect();
            let point = geometry::solve_linear(&chosen)?.ok_or_else(|| {
                Error::Position("a colorful d-subset has dependent normals".into())
            })?;
            out.push(point);
        }
    }
    Ok(out)
}

fn tilt(rng: &mut ChaCha8Rng, value: &Scalar, step: &Scalar, resolution: i64) -> Scalar {
    value + step * scalar::int(rng.gen_range(-resolution..=resolution))
}

/// Perturbs every coefficient by seeded rational offsets of shrinking size
/// until the union is in general position and no colorful vertex moves by
/// `delta` or more, where `delta^2` is the smallest certificate margin of
/// `report`.
pub fn perturb_to_general_position(
    arrangement: &ColoredArrangement,
    report: &RefutationReport,
    config: &PerturbationConfig,
) -> Result<PerturbationReport> {
    let delta_sq = report.delta_sq().ok_or(Error::NotRefuted)?.clone();
    let d = arrangement.dimension();
    let before = colorful_vertices(arrangement)?;

    // largest power of two strictly below delta
    let mut magnitude = Scalar::one();
    while &magnitude * &magnitude >= delta_sq {
        magnitude /= scalar::int(2);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for attempt in 1..=config.max_attempts {
        let step = &magnitude / scalar::int(config.resolution);
        let mut classes = Vec::with_capacity(d + 1);
        let mut valid = true;
        for class in arrangement.classes() {
            let mut out = Vec::with_capacity(class.len());
            for h in class {
                let normal: Vec<Scalar> = h
                    .normal()
                    .coords()
                    .iter()
                    .map(|c| tilt(&mut rng, c, &step, config.resolution))
                    .collect();
                let offset = tilt(&mut rng, h.offset(), &step, config.resolution);
                match Hyperplane::new(Vector::new(normal), offset) {
                    Ok(h) => out.push(h),
                    Err(_) => valid = false,
                }
            }
            classes.push(out);
        }
        if valid {
            let candidate =
                ColoredArrangement::new(d, classes, arrangement.labels().map(<[String]>::to_vec))?;
            if geometry::general_position(&candidate.union(), d) {
                let after = colorful_vertices(&candidate)?;
                let max_move = before
                    .iter()
                    .zip(&after)
                    .map(|(a, b)| a.dist_sq(b))
                    .max()
                    .unwrap_or_else(Scalar::zero);
                if max_move < delta_sq {
                    return Ok(PerturbationReport {
                        delta_sq,
                        perturbed: candidate,
                        max_vertex_move_sq: max_move,
                        magnitude,
                        attempts: attempt,
                        seed: config.seed,
                    });
                }
            }
        }
        magnitude /= scalar::int(2);
    }
    Err(Error::PerturbationBudget {
        attempts: config.max_attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn planar_family_layout() {
        let a = planar_counterexample(3).unwrap();
        assert_eq!(
            a.class(0),
            &[
                Hyperplane::from_ints(&[1, 0], 1),
                Hyperplane::from_ints(&[1, 0], 1),
                Hyperplane::from_ints(&[1, 0], -1)
            ]
        );
        assert_eq!(a.class(2)[2], Hyperplane::from_ints(&[1, -1], 0));
        assert!(planar_counterexample(1).is_err());
    }

    #[test]
    fn planar_family_is_weakly_general() {
        for r in 2..=6 {
            assert!(geometry::weak_general_position(
                &planar_counterexample(r).unwrap()
            ));
        }
        assert!(!geometry::general_position(
            &planar_counterexample(2).unwrap().union(),
            2
        ));
    }

    #[test]
    fn epsilon_defaults_and_bounds() {
        assert_eq!(EpsilonChoice::default_for(3).unwrap().value(), &ratio(1, 4));
        assert_eq!(EpsilonChoice::default_for(4).unwrap().value(), &ratio(1, 8));
        assert!(EpsilonChoice::new(ratio(1, 2), 3).is_err());
        assert!(EpsilonChoice::new(ratio(0, 1), 3).is_err());
        assert!(EpsilonChoice::new(ratio(-1, 8), 3).is_err());
        // 1/(2 sqrt 2) ~ 0.35355: 35/100 passes, 36/100 fails
        assert!(EpsilonChoice::new(ratio(35, 100), 3).is_ok());
        assert!(EpsilonChoice::new(ratio(36, 100), 3).is_err());
    }

    #[test]
    fn highdim_family_layout() {
        let a = highdim_counterexample(3, 2, None).unwrap();
        let q = ratio(1, 4);
        assert_eq!(
            a.class(3)[0].normal().coords(),
            &[scalar::int(1), scalar::int(1), q.clone()]
        );
        assert_eq!(
            a.class(3)[1].normal().coords(),
            &[scalar::int(1), scalar::int(-1), q]
        );
        assert_eq!(a.class(2)[1], Hyperplane::from_ints(&[0, 0, 1], -1));
        assert!(geometry::weak_general_position(&a));
        assert!(highdim_counterexample(2, 2, None).is_err());
    }

    #[test]
    fn random_instances_are_generic() {
        for seed in 0..5 {
            let hs = random_general_position(6, 2, seed).unwrap();
            assert!(geometry::general_position(&hs, 2));
            let a = random_arrangement(2, 2, seed).unwrap();
            assert!(geometry::weak_general_position(&a));
        }
        assert_eq!(
            random_general_position(6, 2, 9).unwrap(),
            random_general_position(6, 2, 9).unwrap()
        );
    }

    #[test]
    fn random_points_are_affinely_generic() {
        let pts = random_points(7, 2, 5).unwrap();
        assert_eq!(pts, random_points(7, 2, 5).unwrap());
        for t in Combinations::new(7, 3) {
            let rows: Vec<Vec<Scalar>> = [1, 2]
                .iter()
                .map(|&k| (&pts[t[k]] - &pts[t[0]]).into_coords())
                .collect();
            assert_eq!(linalg::rank(&rows), 2);
        }
    }
}
