use hyperlat::lattices::catalog::{catalog, listing_names, load_data};
use hyperlat::lattices::HermitianLattice;
use hyperlat::rings::{Ring, Scalar};
use hyperlat::zlat::{qi, Q};

#[test]
fn stored_fingerprints_match_recomputation() {
    for e in load_data().unwrap().entries {
        let l = e.lattice().unwrap();
        assert_eq!(l.fingerprint(), e.fingerprint, "{}", e.name);
    }
}

#[test]
fn every_listed_name_resolves() {
    for n in listing_names() {
        let l = catalog(&n).unwrap();
        assert!(l.is_integral(), "{n}");
    }
    assert!(catalog("NOPE").is_err());
    assert!(catalog("R0_G").is_err());
}

#[test]
fn e8_forms() {
    for name in ["E8_G", "E8_H"] {
        let l = catalog(name).unwrap();
        assert!(l.is_even());
        assert_eq!(l.fingerprint().det, "1");
        assert_eq!(l.theta_prefix(4).unwrap(), vec![1, 0, 240, 0, 2160]);
    }
    assert!(catalog("E8_G").unwrap().is_selfdual().unwrap());
    // Hermitian dual over the Hurwitz order is larger: (1−i)/2 appears in G⁻¹
    assert!(!catalog("E8_H").unwrap().is_selfdual().unwrap());
}

#[test]
fn d4_and_d3theta() {
    let d4 = catalog("D4_G").unwrap();
    assert_eq!(d4.theta_prefix(2).unwrap(), vec![1, 0, 24]);
    assert!(!d4.is_selfdual().unwrap());
    let d3 = catalog("D3theta").unwrap();
    assert_eq!(d3.min_norm().unwrap(), qi(2));
}

#[test]
fn standard_lattices() {
    for r in Ring::ALL {
        for n in 1..=3 {
            let l = HermitianLattice::standard(r, n);
            assert!(l.is_selfdual().unwrap());
            assert_eq!(l.min_norm().unwrap(), qi(1));
            assert_eq!(l.rank(), n);
        }
    }
    let u = catalog("I_1_1_G").unwrap();
    assert!(!u.is_positive_definite());
    assert!(!catalog("II_1_1_E").unwrap().is_positive_definite());
}

#[test]
fn eisenstein_deep_hole() {
    let e = Ring::Eisenstein;
    let l = HermitianLattice::standard(e, 1);
    let hole = vec![(&Scalar::from_int(e, 2) + &Scalar::omega(e)).scale_q(&Q::new(1, 3))];
    let (d2, pts) = l.closest_points(&hole).unwrap();
    assert_eq!(d2, Q::new(1, 3));
    assert_eq!(pts.len(), 3);
    let (d0, p0) = l.closest_points(&[Scalar::from_int(e, 5)]).unwrap();
    assert_eq!(d0, qi(0));
    assert_eq!(p0, vec![vec![Scalar::from_int(e, 5)]]);
}

#[test]
fn direct_sum_adds_theta() {
    let g = Ring::Gauss;
    let a = HermitianLattice::standard(g, 1);
    let s = a.direct_sum(&a);
    assert_eq!(s.rank(), 2);
    assert_eq!(s.fingerprint(), HermitianLattice::standard(g, 2).fingerprint());
}

#[test]
fn bw_residue_classes() {
    let l = catalog("BW4_H").unwrap();
    let census = l.residue_census(&Scalar::new(Ring::Hurwitz, [1, 1, 0, 0], 1)).unwrap();
    assert_eq!(census.classes.len(), 256);
    assert!(census.min_norms().keys().all(|k| [qi(0), qi(2), qi(3)].contains(k)));
}
