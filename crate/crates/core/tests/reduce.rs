use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hyperlat::claims::suites::random_isometry;
use hyperlat::lattices::catalog::catalog;
use hyperlat::lorentz::{Generator, LorentzLattice};
use hyperlat::reduce::census::{orbit_census, CensusOptions};
use hyperlat::reduce::{Certificate, Outcome, Reducer};
use hyperlat::rings::{units, Ring, Scalar};
use hyperlat::zlat::qi;

#[test]
fn random_null_vectors_reduce_to_rho() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in [Ring::Gauss, Ring::Eisenstein] {
        for n in 1..=2 {
            let l = LorentzLattice::standard(r, n);
            let red = Reducer::new(l.clone());
            for _ in 0..10 {
                let v = random_isometry(&l, 3, &mut rng).unwrap().apply(&l.rho());
                let cert = red.reduce(&v).unwrap();
                cert.verify(&l).unwrap();
                assert!(matches!(cert.terminal, Outcome::AtRho { .. }), "{v}");
                assert!(cert.height_trace.windows(2).all(|w| w[1] < w[0]));
            }
        }
    }
}

#[test]
fn content_is_factored_out() {
    let r = Ring::Gauss;
    let l = LorentzLattice::new(catalog("E8_G").unwrap());
    let red = Reducer::new(l.clone());
    let s = |a: i128, b: i128| Scalar::new(r, [a, b, 0, 0], 1);
    let v = l.vector(vec![s(3, 0), s(1, 1), s(0, 0), s(0, 2)], s(5, 0), s(-3, 0));
    let scaled = v.mul_right(&s(1, 1));
    let cert = red.reduce(&scaled).unwrap();
    assert_eq!(cert.content.norm(), qi(2));
    cert.verify(&l).unwrap();
    assert_eq!(cert.height_trace.first(), Some(&qi(25)));
}

fn sample_certificate() -> (LorentzLattice, Certificate) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let l = LorentzLattice::standard(Ring::Eisenstein, 2);
    let v = random_isometry(&l, 4, &mut rng).unwrap().apply(&l.rho());
    let cert = Reducer::new(l.clone()).reduce(&v).unwrap();
    assert!(!cert.word.is_empty());
    (l, cert)
}

#[test]
fn tampered_certificates_are_rejected() {
    let (l, cert) = sample_certificate();
    cert.verify(&l).unwrap();

    let mut c = cert.clone();
    c.height_trace[0] = c.height_trace[0] + qi(1);
    assert!(c.verify(&l).is_err());

    let mut c = cert.clone();
    c.word.pop();
    assert!(c.verify(&l).is_err());

    let mut c = cert.clone();
    if let Generator::Reflection { xi, .. } = &mut c.word[0] {
        *xi = units(Ring::Eisenstein).into_iter().find(|u| u != xi && !u.is_one()).unwrap();
    }
    assert!(c.verify(&l).is_err());
}

#[test]
fn certificate_json_round_trip() {
    let (l, cert) = sample_certificate();
    let s = serde_json::to_string(&cert).unwrap();
    let back: Certificate = serde_json::from_str(&s).unwrap();
    assert_eq!(back, cert);
    back.verify(&l).unwrap();
}

#[test]
fn non_null_and_zero_vectors_are_errors() {
    let r = Ring::Gauss;
    let l = LorentzLattice::standard(r, 1);
    let red = Reducer::new(l.clone());
    let v = l.vector(vec![Scalar::one(r)], Scalar::one(r), Scalar::zero(r));
    assert!(red.reduce(&v).is_err());
    let z = l.vector(vec![Scalar::zero(r)], Scalar::zero(r), Scalar::zero(r));
    assert!(red.reduce(&z).is_err());
}

#[test]
fn small_censuses() {
    let opts = CensusOptions::default();
    let census = |name: &str, b: i128| {
        let l = LorentzLattice::new(catalog(name).unwrap());
        orbit_census(&l, &qi(b), &opts)
    };
    assert_eq!(census("R1_E", 9).unwrap().class_count(), 2);
    assert_eq!(census("R2_E", 4).unwrap().class_count(), 1);
    assert_eq!(census("R2_H", 2).unwrap().class_count(), 1);
    // biflections certify translations by 2Λ only
    assert!(census("R1_G", 9).is_err());
}

#[test]
fn census_is_deterministic() {
    let l = LorentzLattice::new(catalog("R1_E").unwrap());
    let a = orbit_census(&l, &qi(9), &CensusOptions::default()).unwrap();
    let b = orbit_census(&l, &qi(9), &CensusOptions::default()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
