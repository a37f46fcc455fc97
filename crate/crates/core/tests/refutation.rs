use hyperverb::combinatorics::{canonical_form_of, enumerate_colorful, group_raw_by_form};
use hyperverb::constructions::{
    highdim_counterexample, perturb_to_general_position, planar_counterexample,
    planar_model_deviation, EpsilonChoice, PerturbationConfig,
};
use hyperverb::geometry::{general_position, weak_general_position, ColoredArrangement};
use hyperverb::scalar::{self, ratio};
use hyperverb::separation::hulls_intersect;
use hyperverb::simplex::{dist_sq_hulls, project_e1e2};
use hyperverb::verifier::{
    partition_simplices, verify_colorful_refutation, ColorfulOptions, PartitionOutcome,
    RefutationReport, Verdict,
};
use hyperverb::{Hyperplane, Vector};

#[test]
fn planar_type_counts() {
    assert_eq!(
        enumerate_colorful(&planar_counterexample(2).unwrap(), true).len(),
        4
    );
    for r in 3..=6 {
        let types = enumerate_colorful(&planar_counterexample(r).unwrap(), true);
        assert_eq!(types.len(), 5, "r = {r}");
    }
}

#[test]
fn type_quotient_matches_grouped_raw_enumeration() {
    for r in 2..=5 {
        let arr = planar_counterexample(r).unwrap();
        let types = enumerate_colorful(&arr, true);
        let grouped = group_raw_by_form(&arr);
        assert_eq!(types.len(), grouped.len());
        for t in &types {
            assert!(t.representative.is_valid(3, r));
            let form = canonical_form_of(&arr, &t.representative);
            assert_eq!(grouped[&form], t.multiplicity, "r = {r}");
        }
        let total: u64 = types.iter().map(|t| t.multiplicity).sum();
        assert_eq!(total, (1..=r as u64).product::<u64>().pow(2));
    }
    let arr = highdim_counterexample(3, 3, None).unwrap();
    let total: u64 = enumerate_colorful(&arr, true)
        .iter()
        .map(|t| t.multiplicity)
        .sum();
    assert_eq!(total, 6u64.pow(3));
    assert_eq!(
        group_raw_by_form(&arr).len(),
        enumerate_colorful(&arr, true).len()
    );
}

fn check_certified_records(arr: &ColoredArrangement, report: &RefutationReport) {
    for record in &report.records {
        let PartitionOutcome::Refuted {
            pair, hull_dist_sq, ..
        } = &record.outcome
        else {
            continue;
        };
        let dist = hull_dist_sq.clone().unwrap();
        assert!(dist >= ratio(1, 2), "{}", scalar::format(&dist));
        // fresh recheck of the recorded pair
        let s = partition_simplices(arr, &record.partition).unwrap();
        assert!(hulls_intersect(s[pair.0].vertices(), s[pair.1].vertices())
            .unwrap()
            .is_disjoint());
        assert_eq!(
            dist_sq_hulls(s[pair.0].vertices(), s[pair.1].vertices()).unwrap(),
            dist
        );
    }
}

#[test]
fn planar_two_is_refuted_with_margin() {
    let arr = planar_counterexample(2).unwrap();
    let report = verify_colorful_refutation(&arr, ColorfulOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Refuted);
    assert!(report.replay(&arr).unwrap());
    check_certified_records(&arr, &report);
}

/// For r >= 3 the type with one part {x=1, y=-1, x-y=0} and the other parts
/// on {x=1, y=1, x+y=0} and {x=-1, y=-1, x+y=0} has all of its triangles
/// through the corner (1, -1). Closed simplices that touch count as meeting.
#[test]
fn planar_family_touches_at_a_corner_for_r_at_least_three() {
    for r in 3..=6 {
        let arr = planar_counterexample(r).unwrap();
        let report = verify_colorful_refutation(&arr, ColorfulOptions::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NotRefuted, "r = {r}");
        assert_eq!(report.records.len(), 5);
        assert!(report.replay(&arr).unwrap());
        assert_eq!(report.delta_sq(), None);
        check_certified_records(&arr, &report);
        let refuted = report
            .records
            .iter()
            .filter(|rec| matches!(rec.outcome, PartitionOutcome::Refuted { .. }))
            .count();
        assert_eq!(refuted, 4, "r = {r}");

        let bad = report.first_unrefuted().unwrap();
        let simplices = partition_simplices(&arr, &bad.partition).unwrap();
        let corner = Vector::from_ints(&[1, -1]);
        for s in &simplices {
            assert!(s.vertices().contains(&corner), "r = {r}");
        }
        let PartitionOutcome::AllIntersect { witnesses } = &bad.outcome else {
            unreachable!()
        };
        assert_eq!(witnesses.len(), r * (r - 1) / 2);
    }
}

#[test]
fn planar_two_certified_distance_is_two() {
    let arr = planar_counterexample(2).unwrap();
    let report = verify_colorful_refutation(&arr, ColorfulOptions::default()).unwrap();
    assert_eq!(report.records.len(), 4);
    assert_eq!(report.min_hull_dist_sq, Some(scalar::int(2)));
}

#[test]
fn highdim_refutations_and_deviation() {
    for (d, r) in [(3, 2), (3, 3), (4, 2)] {
        let eps = EpsilonChoice::default_for(d).unwrap();
        let arr = highdim_counterexample(d, r, Some(eps.clone())).unwrap();
        assert!(weak_general_position(&arr));
        let report = verify_colorful_refutation(&arr, ColorfulOptions::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted, "(d, r) = ({d}, {r})");
        assert!(report.replay(&arr).unwrap());
        for t in enumerate_colorful(&arr, false) {
            for part in t.representative.parts() {
                let dev = planar_model_deviation(&arr, &part.picks).unwrap();
                assert!(dev <= eps.deviation_bound());
            }
        }
    }
}

#[test]
fn highdim_projected_simplices_stay_near_the_plane_model() {
    let arr = highdim_counterexample(3, 2, None).unwrap();
    let picks = [0, 0, 1, 0];
    let s = hyperverb::simplex::induced_simplex(&arr.tuple(&picks)).unwrap();
    let proj = project_e1e2(&s);
    assert!(proj.vertices().iter().all(|v| v.dim() == 2));
}

/// Three classes of two lines, all tangent-ish to a small disc around the
/// origin with normals spread so every colorful triangle contains it.
fn rainbow() -> ColoredArrangement {
    let line = |a, b| Hyperplane::from_ints(&[a, b], 1);
    ColoredArrangement::new(
        2,
        vec![
            vec![line(1, 0), line(3, 1)],
            vec![line(-1, 2), line(-1, 1)],
            vec![line(-1, -2), line(0, -1)],
        ],
        None,
    )
    .unwrap()
}

#[test]
fn rainbow_is_not_refuted() {
    let arr = rainbow();
    assert!(weak_general_position(&arr));
    let report = verify_colorful_refutation(&arr, ColorfulOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::NotRefuted);
    assert!(report.replay(&arr).unwrap());
    let PartitionOutcome::AllIntersect { witnesses } = &report.first_unrefuted().unwrap().outcome
    else {
        panic!("expected witnesses");
    };
    assert_eq!(witnesses.len(), 1);
    let config = PerturbationConfig::with_seed(1);
    assert!(perturb_to_general_position(&arr, &report, &config).is_err());
}

#[test]
fn growing_r_keeps_the_refuted_type_count() {
    // planar(r + 1) adds one more copy of each repeated line to planar(r)
    let refuted = |r| {
        let report = verify_colorful_refutation(
            &planar_counterexample(r).unwrap(),
            ColorfulOptions::default(),
        )
        .unwrap();
        report
            .records
            .iter()
            .filter(|rec| matches!(rec.outcome, PartitionOutcome::Refuted { .. }))
            .count()
    };
    for r in 3..=5 {
        assert_eq!(refuted(r), refuted(r + 1));
    }
}

#[test]
fn perturbation_preserves_refutation() {
    let r = 2;
    let arr = planar_counterexample(r).unwrap();
    let report = verify_colorful_refutation(&arr, ColorfulOptions::default()).unwrap();
    let out =
        perturb_to_general_position(&arr, &report, &PerturbationConfig::with_seed(7)).unwrap();
    assert!(general_position(&out.perturbed.union(), 2));
    assert!(out.max_vertex_move_sq < out.delta_sq);
    assert_eq!(&out.delta_sq, report.delta_sq().unwrap());
    let again = verify_colorful_refutation(&out.perturbed, ColorfulOptions::default()).unwrap();
    assert!(again.is_refuted());
    assert_eq!(again.records.len(), 4);
    let twin =
        perturb_to_general_position(&arr, &report, &PerturbationConfig::with_seed(7)).unwrap();
    assert_eq!(twin, out);
    let other =
        perturb_to_general_position(&arr, &report, &PerturbationConfig::with_seed(8)).unwrap();
    assert_ne!(other.perturbed, out.perturbed);
}

#[test]
fn highdim_perturbation_preserves_refutation() {
    let arr = highdim_counterexample(3, 2, None).unwrap();
    let report = verify_colorful_refutation(&arr, ColorfulOptions::default()).unwrap();
    let out =
        perturb_to_general_position(&arr, &report, &PerturbationConfig::with_seed(3)).unwrap();
    assert!(general_position(&out.perturbed.union(), 3));
    assert!(out.max_vertex_move_sq < out.delta_sq);
    assert!(
        verify_colorful_refutation(&out.perturbed, ColorfulOptions::default())
            .unwrap()
            .is_refuted()
    );
}
