use proptest::prelude::*;

use hyperverb::combinatorics::{
    enumerate_colorful, factorial, MonochromaticPartitions, RawColorfulPartitions,
};
use hyperverb::document::{arrangement_to_json, parse_arrangement};
use hyperverb::geometry::{solve_linear, weak_general_position};
use hyperverb::scalar::{self, ratio, Scalar};
use hyperverb::separation::{hulls_intersect, HullRelation};
use hyperverb::simplex::{dist_sq_hulls, induced_simplex};
use hyperverb::{ColoredArrangement, Hyperplane, Vector};

fn rational() -> impl Strategy<Value = Scalar> {
    (-40i64..=40, 1i64..=6).prop_map(|(p, q)| ratio(p, q))
}

fn point(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(rational(), dim).prop_map(Vector::new)
}

fn hull(dim: usize) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec(point(dim), 1..=dim + 2)
}

fn hull_pair() -> impl Strategy<Value = (Vec<Vector>, Vec<Vector>)> {
    (2usize..=3).prop_flat_map(|d| (hull(d), hull(d)))
}

fn hyperplane(dim: usize) -> impl Strategy<Value = Hyperplane> {
    (prop::collection::vec(-5i64..=5, dim), -5i64..=5)
        .prop_filter("nonzero normal", |(n, _)| n.iter().any(|&c| c != 0))
        .prop_map(|(n, c)| Hyperplane::from_ints(&n, c))
}

/// Classes drawn from a small pool of lines so that repeats are common.
fn arrangement() -> impl Strategy<Value = ColoredArrangement> {
    (2usize..=4, prop::collection::vec(hyperplane(2), 4)).prop_flat_map(|(r, pool)| {
        prop::collection::vec(prop::collection::vec(0..pool.len(), r), 3).prop_map(move |picks| {
            let classes = picks
                .iter()
                .map(|c| c.iter().map(|&i| pool[i].clone()).collect())
                .collect();
            ColoredArrangement::new(2, classes, None).unwrap()
        })
    })
}

fn affine(points: &[Vector], factor: &Scalar, shift: &Vector) -> Vec<Vector> {
    points.iter().map(|p| &p.scale(factor) + shift).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scalar_encoding_round_trips(p in -10_000i64..10_000, q in 1i64..500) {
        let x = ratio(p, q);
        prop_assert_eq!(scalar::parse(&scalar::format(&x)).unwrap(), x);
    }

    #[test]
    fn hull_answers_replay((a, b) in hull_pair()) {
        let relation = hulls_intersect(&a, &b).unwrap();
        prop_assert!(relation.replay(&a, &b));
        let dist = dist_sq_hulls(&a, &b).unwrap();
        match &relation {
            HullRelation::Intersecting(_) => prop_assert_eq!(&dist, &scalar::int(0)),
            HullRelation::Disjoint(c) => {
                // the separator sits in the gap, so the gap is at least twice the margin
                prop_assert!(dist >= &c.margin_sq * scalar::int(4));
            }
        }
        // no vertex pair is closer than the hulls
        for p in &a {
            for q in &b {
                prop_assert!(p.dist_sq(q) >= dist);
            }
        }
    }

    #[test]
    fn hull_relation_is_invariant_under_similarity(
        (a, b) in hull_pair(),
        factor in (1i64..=9, 1i64..=9).prop_map(|(p, q)| ratio(p, q)),
        shift in prop::collection::vec(rational(), 3),
    ) {
        let shift = Vector::new(shift[..a[0].dim()].to_vec());
        let before = hulls_intersect(&a, &b).unwrap().is_disjoint();
        let (sa, sb) = (affine(&a, &factor, &shift), affine(&b, &factor, &shift));
        let after = hulls_intersect(&sa, &sb).unwrap();
        prop_assert_eq!(before, after.is_disjoint());
        prop_assert!(after.replay(&sa, &sb));
        let d = dist_sq_hulls(&a, &b).unwrap() * &factor * &factor;
        prop_assert_eq!(dist_sq_hulls(&sa, &sb).unwrap(), d);
    }

    #[test]
    fn solutions_lie_on_every_hyperplane(hs in (2usize..=4).prop_flat_map(|d| prop::collection::vec(hyperplane(d), d))) {
        if let Some(x) = solve_linear(&hs).unwrap() {
            prop_assert!(hs.iter().all(|h| h.contains(&x)));
        }
    }

    #[test]
    fn induced_simplex_ignores_tuple_order(hs in prop::collection::vec(hyperplane(2), 3)) {
        let reversed: Vec<Hyperplane> = hs.iter().rev().cloned().collect();
        match (induced_simplex(&hs), induced_simplex(&reversed)) {
            (Ok(s), Ok(t)) => {
                let (mut u, mut v) = (s.vertices().to_vec(), t.vertices().to_vec());
                u.sort();
                v.sort();
                prop_assert_eq!(u, v);
            }
            (s, t) => prop_assert_eq!(s.is_err(), t.is_err()),
        }
    }

    #[test]
    fn weak_position_ignores_order_within_classes(arr in arrangement()) {
        let classes = arr.classes().iter().map(|c| c.iter().rev().cloned().collect()).collect();
        let flipped = ColoredArrangement::new(2, classes, None).unwrap();
        prop_assert_eq!(weak_general_position(&arr), weak_general_position(&flipped));
    }

    #[test]
    fn arrangement_documents_round_trip(arr in arrangement()) {
        prop_assert_eq!(parse_arrangement(&arrangement_to_json(&arr)).unwrap(), arr);
    }

    #[test]
    fn type_multiplicities_sum_to_the_raw_count(arr in arrangement()) {
        let r = arr.parts();
        let raw = factorial(r).pow(2);
        prop_assert_eq!(RawColorfulPartitions::new(2, r).count() as u64, raw);
        let total: u64 = enumerate_colorful(&arr, true).iter().map(|t| t.multiplicity).sum();
        prop_assert_eq!(total, raw);
    }
}

#[test]
fn monochromatic_counts() {
    assert_eq!(MonochromaticPartitions::new(2, 3).count(), 10);
    assert_eq!(MonochromaticPartitions::count(2, 3), 10);
    assert_eq!(MonochromaticPartitions::new(3, 3).count(), 280);
    assert_eq!(MonochromaticPartitions::count(3, 3), 280);
    assert_eq!(MonochromaticPartitions::new(2, 4).count(), 35);
    // n! / ((block!)^r r!)
    assert_eq!(factorial(9) / (factorial(3).pow(3) * factorial(3)), 280);
}
