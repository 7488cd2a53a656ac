use proptest::prelude::*;

use hyperlat::rings::{residues_mod, units, Ring, RingElement, Scalar};
use hyperlat::zlat::qi;

fn ring() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(Ring::Gauss), Just(Ring::Eisenstein), Just(Ring::Hurwitz)]
}

fn element(r: Ring) -> impl Strategy<Value = Scalar> {
    prop::collection::vec(-20i128..=20, r.degree()).prop_map(move |z| Scalar::from_zcoords_int(r, &z))
}

fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    ring().prop_flat_map(|r| (element(r), element(r), element(r)))
}

proptest! {
    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).conj(), &b.conj() * &a.conj());
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        prop_assert!((&a * &b).is_integral());
    }

    #[test]
    fn division_and_rounding((a, b, _) in triple()) {
        prop_assume!(!b.is_zero());
        let one = Scalar::one(a.ring());
        prop_assert_eq!(&b * &b.inv(), one);
        let q = a.left_div(&b);
        prop_assert_eq!(&b * &q, a.clone());
        let r = &a - &(&b * &q.round());
        prop_assert!(r.norm() < b.norm());
    }

    #[test]
    fn json_round_trip(a in ring().prop_flat_map(element)) {
        let s = serde_json::to_string(&a).unwrap();
        let back: Scalar = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn unit_groups() {
    assert_eq!(units(Ring::Gauss).len(), 4);
    assert_eq!(units(Ring::Eisenstein).len(), 6);
    assert_eq!(units(Ring::Hurwitz).len(), 24);
    for r in Ring::ALL {
        assert!(units(r).iter().all(|u| u.norm() == qi(1) && u.is_integral()));
    }
}

#[test]
fn theta_and_omega() {
    let e = Ring::Eisenstein;
    let w = Scalar::omega(e);
    assert_eq!(&(&w * &w) + &(&w + &Scalar::one(e)), Scalar::zero(e));
    assert_eq!(Scalar::theta(e).norm(), qi(3));
}

#[test]
fn residue_rings() {
    let g = RingElement::new(Ring::Gauss, &[1, 1]).unwrap();
    assert_eq!(residues_mod(Ring::Gauss, &g).unwrap().len(), 2);
    let t = RingElement::from_scalar(Scalar::theta(Ring::Eisenstein)).unwrap();
    assert_eq!(residues_mod(Ring::Eisenstein, &t).unwrap().len(), 3);
    let h = RingElement::from_scalar(Scalar::new(Ring::Hurwitz, [1, 1, 0, 0], 1)).unwrap();
    assert_eq!(residues_mod(Ring::Hurwitz, &h).unwrap().len(), 4);
}

#[test]
fn hurwitz_json_uses_doubled_coordinates() {
    let x = Scalar::new(Ring::Hurwitz, [1, 1, 1, 1], 2);
    let v = serde_json::to_value(&x).unwrap();
    assert_eq!(v["ring"], "H");
    let back: Scalar = serde_json::from_value(v).unwrap();
    assert_eq!(back, x);
    assert!(RingElement::new(Ring::Hurwitz, &[1, 0, 0, 0]).is_err());
    assert!(RingElement::new(Ring::Hurwitz, &[1, 1, 1, 1]).is_ok());
    assert_eq!(RingElement::new(Ring::Hurwitz, &[2, 0, 0, 0]).unwrap().scalar(), &Scalar::one(Ring::Hurwitz));
}
