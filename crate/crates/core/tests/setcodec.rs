use std::collections::HashSet;

use symdyn::complexity::bits::{bits_from_str, bits_to_string};
use symdyn::folner::geometric_modesty_check;
use symdyn::setcodec::*;
use symdyn::{FiniteSubset, Group, GroupElement, Point};

/// `|ST \ T|` by plain set arithmetic on coordinates.
fn boundary_size(group: &Group, set: &FiniteSubset) -> usize {
    let points: HashSet<Point> = group.subset_points(set).unwrap().into_iter().collect();
    let mut outside = HashSet::new();
    for &p in &points {
        for &s in group.generator_points() {
            let q = group.mul_points(s, p).unwrap();
            if !points.contains(&q) {
                outside.insert(q);
            }
        }
    }
    outside.len()
}

#[test]
fn hand_traces_on_z() {
    let z = Group::z();
    let zero = FiniteSubset::singleton(GroupElement::IDENTITY);
    let pair = z.subset_from_points([Point::new1(0), Point::new1(1)]).unwrap();
    assert_eq!(bits_to_string(&encode_connected(&z, &zero).unwrap()), "100");
    assert_eq!(bits_to_string(&encode_connected(&z, &pair).unwrap()), "1100");
    assert_eq!(decode(&z, &bits_from_str("100").unwrap()).unwrap(), zero);
    assert_eq!(decode(&z, &bits_from_str("1100").unwrap()).unwrap(), pair);
}

#[test]
fn length_law_in_the_plane() {
    let z2 = Group::z2();
    for seed in 0..500 {
        let t = random_connected_subset(&z2, 1 + (seed as usize * 37) % 100, seed).unwrap();
        let bits = encode_connected(&z2, &t).unwrap();
        assert_eq!(bits.len(), t.len() + boundary_size(&z2, &t));
        assert_eq!(bits.count_ones(), t.len());
    }
}

#[test]
fn roundtrip_in_the_plane_and_heisenberg() {
    for group in [Group::z2(), Group::heisenberg()] {
        for seed in 0..1000 {
            let t = random_connected_subset(&group, 1 + (seed as usize * 13) % 120, 1000 + seed).unwrap();
            assert_eq!(decode(&group, &encode_connected(&group, &t).unwrap()).unwrap(), t);
        }
    }
}

#[test]
fn generated_sets() {
    let z2 = Group::z2();
    for group in [Group::z(), z2.clone(), Group::heisenberg()] {
        assert_eq!(random_connected_subset(&group, 1, 3).unwrap(), FiniteSubset::singleton(GroupElement::IDENTITY));
        for seed in 0..30 {
            assert!(geometric_modesty_check(&group, &random_connected_subset(&group, 25, seed).unwrap()).unwrap());
        }
    }
    let five = random_connected_subset(&z2, 5, 7).unwrap();
    let mut points = z2.subset_points(&five).unwrap();
    points.sort_by_key(|p| p.0);
    assert_eq!(
        points,
        vec![Point::new2(0, -2), Point::new2(0, -1), Point::new2(0, 0), Point::new2(1, -2), Point::new2(1, 0)]
    );
}
