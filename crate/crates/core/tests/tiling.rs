use symdyn::folner::FolnerSequence;
use symdyn::quasitiling::*;
use symdyn::{Group, Rational};

fn check_beyond_threshold(group: &Group, eps: Rational) -> TilingPlan {
    let seq = FolnerSequence::boxes(group);
    let p = plan(&seq, eps, &PlanOptions::default()).unwrap();
    for i in [p.threshold + 1, p.threshold + 7, p.threshold + 20] {
        let set = seq.set(i).unwrap();
        let c = cover(group, &set, &p, &seq).unwrap();
        let report = verify_cover(group, &set, &p, &c, &seq).unwrap();
        assert!(report.all_hold(), "{} eps {eps} i {i}: {report:?}", group.id());
    }
    p
}

#[test]
fn scale_bounds() {
    assert_eq!(scale_count_bound(Rational::new(1, 2)).unwrap(), 3);
    assert_eq!(scale_count_bound(Rational::new(19, 20)).unwrap(), 1);
}

#[test]
fn interval_plans() {
    let z = Group::z();
    let half = check_beyond_threshold(&z, Rational::new(1, 2));
    assert_eq!(half.scales.len(), 3);
    let quarter = check_beyond_threshold(&z, Rational::new(1, 4));
    assert_eq!((quarter.scales.clone(), quarter.threshold), (vec![2, 16, 240], 3823));
}

#[test]
fn square_plans() {
    let z2 = Group::z2();
    check_beyond_threshold(&z2, Rational::new(1, 2));
    let quarter = check_beyond_threshold(&z2, Rational::new(1, 4));
    assert_eq!((quarter.scales.clone(), quarter.threshold), (vec![2], 31));
}

#[test]
fn square_of_side_64() {
    let z2 = Group::z2();
    let seq = FolnerSequence::boxes(&z2);
    let p = plan(&seq, Rational::new(1, 4), &PlanOptions::default()).unwrap();
    let set = seq.set(64).unwrap();
    let report = verify_cover(&z2, &set, &p, &cover(&z2, &set, &p, &seq).unwrap(), &seq).unwrap();
    assert!(report.all_hold());
    let slacks: Vec<Rational> = report.assertions().iter().map(|a| a.slack()).collect();
    assert_eq!(
        slacks,
        vec![Rational::from_integer(0), Rational::from_integer(1024), Rational::from_integer(1024), Rational::from_integer(1024)]
    );
}

#[test]
fn heisenberg_box_of_side_8() {
    let h = Group::heisenberg();
    let seq = FolnerSequence::boxes(&h);
    let p = plan(&seq, Rational::new(1, 2), &PlanOptions::default()).unwrap();
    assert_eq!(p.scales, vec![2]);
    let set = seq.set(8).unwrap();
    let report = verify_cover(&h, &set, &p, &cover(&h, &set, &p, &seq).unwrap(), &seq).unwrap();
    assert!(report.all_hold(), "{report:?}");
}

#[test]
fn exact_interval_tiling() {
    let z = Group::z();
    let seq = FolnerSequence::boxes(&z);
    let p = TilingPlan::manual(vec![10], Rational::new(1, 4)).unwrap();
    let set = seq.set(100).unwrap();
    let c = cover(&z, &set, &p, &seq).unwrap();
    let centers: Vec<i64> = z.subset_points(&c.centers[0]).unwrap().iter().map(|q| q.0[0]).collect();
    let mut sorted = centers.clone();
    sorted.sort();
    assert_eq!(sorted, (0..10).map(|k| 10 * k).collect::<Vec<_>>());
    let report = verify_cover(&z, &set, &p, &c, &seq).unwrap();
    assert_eq!(report.uncovered.lhs, Rational::from_integer(0));
    assert_eq!(report.overlap_covered.lhs, Rational::from_integer(report.covered_size as i128));
    assert!(report.all_hold());
}

#[test]
fn empty_cover_fails_only_the_coverage_assertion() {
    let z = Group::z();
    let seq = FolnerSequence::boxes(&z);
    let p = TilingPlan::manual(vec![10], Rational::new(1, 2)).unwrap();
    let empty = Cover { centers: vec![symdyn::FiniteSubset::empty()] };
    let report = verify_cover(&z, &seq.set(50).unwrap(), &p, &empty, &seq).unwrap();
    let holds: Vec<bool> = report.assertions().iter().map(|a| a.holds()).collect();
    assert_eq!(holds, vec![true, false, true, true]);
}
