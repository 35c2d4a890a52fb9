use std::cmp::Ordering;

use symdyn::{Group, GroupElement, Point};

#[test]
fn z_arithmetic_on_indices() {
    let z = Group::z();
    assert_eq!(z.multiply(GroupElement(1), GroupElement(2)).unwrap(), GroupElement(0));
    assert_eq!(z.inverse(GroupElement(1)).unwrap(), GroupElement(2));
    assert_eq!(z.inverse(GroupElement(0)).unwrap(), GroupElement(0));
    assert_eq!(z.compare(GroupElement(1), GroupElement(2)), Ordering::Less);
    for group in [Group::z(), Group::z2(), Group::heisenberg()] {
        for g in 0..50 {
            assert_eq!(group.multiply(GroupElement(g), GroupElement::IDENTITY).unwrap(), GroupElement(g));
            assert_eq!(group.compare(GroupElement(g), GroupElement(g)), Ordering::Equal);
        }
    }
}

#[test]
fn heisenberg_products_and_inverses() {
    let h = Group::heisenberg();
    let g = h.multiply(h.encode(Point::new3(1, 0, 0)).unwrap(), h.encode(Point::new3(0, 1, 0)).unwrap()).unwrap();
    assert_eq!(h.decode(g).unwrap(), Point::new3(1, 1, 1));
    for (a, b, c) in [(1, 2, 3), (-4, 7, 0), (0, 0, -9), (5, -5, 25)] {
        let inv = h.inverse_point(Point::new3(a, b, c)).unwrap();
        assert_eq!(inv, Point::new3(-a, -b, a * b - c));
        assert_eq!(h.mul_points(Point::new3(a, b, c), inv).unwrap(), Point::ORIGIN);
    }
}

#[test]
fn identity_neighbours() {
    let z = Group::z();
    let n: Vec<Point> = z.neighbors(GroupElement::IDENTITY).unwrap().into_iter().map(|g| z.decode(g).unwrap()).collect();
    assert_eq!(n, vec![Point::new1(1), Point::new1(-1)]);
    let z2 = Group::z2();
    let n: Vec<Point> = z2.neighbors(GroupElement::IDENTITY).unwrap().into_iter().map(|g| z2.decode(g).unwrap()).collect();
    assert_eq!(n, vec![Point::new2(1, 0), Point::new2(-1, 0), Point::new2(0, 1), Point::new2(0, -1)]);
    let h = Group::heisenberg();
    let n: Vec<Point> = h.neighbors(GroupElement::IDENTITY).unwrap().into_iter().map(|g| h.decode(g).unwrap()).collect();
    assert_eq!(n, h.generator_points().to_vec());
}

#[test]
fn canonical_text() {
    for (text, group) in [("Z:-3", Group::z()), ("Z2:(4,-1)", Group::z2()), ("H3:(1,2,-7)", Group::heisenberg())] {
        let g = group.parse_element(text).unwrap();
        assert_eq!(group.format_element(g).unwrap(), text);
    }
}
