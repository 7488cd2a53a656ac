use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperlat::claims::suites::{random_element, random_isometry, random_root};
use hyperlat::lorentz::{HeightFamily, LorentzLattice, LorentzVector, ReflectionSpec};
use hyperlat::rings::{units, Ring, Scalar};
use hyperlat::zlat::qi;

#[test]
fn rho_is_null_and_height_is_mu() {
    for r in Ring::ALL {
        let l = LorentzLattice::standard(r, 2);
        let rho = l.rho();
        assert_eq!(l.norm(&rho), qi(0));
        assert!(l.height(&rho).is_zero());
        let v = l.vector(vec![Scalar::one(r), Scalar::zero(r)], Scalar::from_int(r, 3), Scalar::zero(r));
        assert_eq!(l.height(&v), Scalar::from_int(r, 3));
    }
}

#[test]
fn reflections_are_integral_isometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for r in Ring::ALL {
        let l = LorentzLattice::standard(r, 2);
        let xis: Vec<Scalar> = units(r).into_iter().filter(|u| !u.is_one()).collect();
        for _ in 0..20 {
            let root = random_root(&l, &qi(1), &mut rng);
            let xi = xis[rng.gen_range(0..xis.len())].clone();
            let spec = ReflectionSpec { root: root.clone(), xi: xi.clone() };
            let m = l.reflection(&spec).unwrap();
            assert!(l.is_isometry(&m.matrix));
            assert!(m.preserves_integrality());
            assert_eq!(m.apply(&root), root.mul_right(&xi));
            let v = random_isometry(&l, 2, &mut rng).unwrap().apply(&l.rho());
            assert_eq!(m.apply(&v), l.reflect(&spec, &v));
        }
    }
}

#[test]
fn biflection_in_long_root_has_order_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let l = LorentzLattice::standard(Ring::Gauss, 2);
    let root = random_root(&l, &qi(2), &mut rng);
    let m = l.reflection(&ReflectionSpec { root, xi: -Scalar::one(Ring::Gauss) }).unwrap();
    assert!(m.preserves_integrality());
    assert!(m.matrix.mul(&m.matrix).is_identity());
}

#[test]
fn reflection_rejects_bad_input() {
    let r = Ring::Eisenstein;
    let l = LorentzLattice::standard(r, 1);
    assert!(l.reflection(&ReflectionSpec { root: l.rho(), xi: -Scalar::one(r) }).is_err());
    let root = l.vector(vec![Scalar::one(r)], Scalar::zero(r), Scalar::zero(r));
    assert!(l.reflection(&ReflectionSpec { root: root.clone(), xi: Scalar::one(r) }).is_err());
    assert!(l.reflection(&ReflectionSpec { root, xi: Scalar::from_int(r, 2) }).is_err());
}

#[test]
fn translations_fix_rho_and_preserve_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for r in Ring::ALL {
        let l = LorentzLattice::standard(r, 2);
        for _ in 0..20 {
            let x: Vec<Scalar> = (0..2).map(|_| random_element(r, 3, &mut rng)).collect();
            let t = l.translation(&x, &Scalar::zero(r)).unwrap();
            assert!(l.is_isometry(&t.matrix));
            assert_eq!(t.apply(&l.rho()), l.rho());
        }
        assert!(l.translation(&[Scalar::zero(r), Scalar::zero(r)], &Scalar::one(r)).is_err());
    }
}

#[test]
fn random_isometries_carry_rho_to_primitive_null_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for r in Ring::ALL {
        let l = LorentzLattice::standard(r, 2);
        for _ in 0..10 {
            let g = random_isometry(&l, 3, &mut rng).unwrap();
            let v = g.apply(&l.rho());
            assert_eq!(l.norm(&v), qi(0));
            assert!(l.is_primitive(&v));
            assert_eq!(g.inverse().apply(&v), l.rho());
        }
    }
}

#[test]
fn height_family_solutions() {
    let r = Ring::Eisenstein;
    let h = Scalar::theta(r);
    let fam = HeightFamily::new(&h);
    let nu = fam.solve(&qi(-3)).unwrap();
    assert_eq!((&h.conj() * &nu).re(), qi(-3));
}

#[test]
fn vector_json_round_trip() {
    let r = Ring::Hurwitz;
    let v = LorentzVector::new(vec![Scalar::new(r, [1, 1, 1, 1], 2)], Scalar::one(r), Scalar::i(r));
    let s = serde_json::to_string(&v).unwrap();
    assert_eq!(serde_json::from_str::<LorentzVector>(&s).unwrap(), v);
}
