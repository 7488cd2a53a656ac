use hyperlat::claims::cone::{cone_angles, order_summary, ConeAngleInput};
use hyperlat::claims::covering::{claim_holes, verify_covering_radius};
use hyperlat::claims::quotient::{even_sublattice_constructions, null_quotient};
use hyperlat::claims::spinor::reduce_mod_theta;
use hyperlat::claims::{claim_ids, verify, ClaimError, RunConfig, FORMAT};
use hyperlat::lattices::catalog::catalog;
use hyperlat::lattices::HermitianLattice;
use hyperlat::rings::{Ring, Scalar};
use hyperlat::zlat::{qi, Q};

fn small(id: &str) -> Option<usize> {
    match id {
        "heisenberg" | "lemma52" | "lemma53" | "spinor" | "braid" => Some(40),
        "quotient" | "reflections" => Some(5),
        "bw-thm31" => Some(20),
        s if s.starts_with("covering-") => Some(200),
        _ => None,
    }
}

#[test]
fn every_claim_passes_at_small_budget() {
    for id in claim_ids() {
        let cfg = RunConfig { seed: 2, budget: small(&id) };
        let r = verify(&id, &cfg).unwrap();
        assert_eq!(r.format, FORMAT);
        assert_eq!(r.claim, id);
        assert!(!r.citations.is_empty());
        if id == "bw-thm31" {
            // the holes agree with each other at 3/2, not at the packing radius
            assert_eq!(r.evidence["checks"]["hole_distances"]["3/2"], 20);
        }
        assert!(r.passed(), "{id}: {}", r.evidence);
    }
}

#[test]
fn reports_are_deterministic() {
    for id in ["braid", "lemma53", "covering-R2_E"] {
        let cfg = RunConfig { seed: 9, budget: Some(30) };
        let a = serde_json::to_string(&verify(id, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&verify(id, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn unknown_claim() {
    assert!(matches!(verify("no-such-claim", &RunConfig::default()), Err(ClaimError::UnknownClaim(_))));
}

#[test]
fn covering_check_refutes_a_small_radius() {
    let l = HermitianLattice::standard(Ring::Eisenstein, 1);
    let holes = claim_holes("R1_E").unwrap();
    let rep = verify_covering_radius(&l, &Q::new(1, 4), &holes, 50, 0).unwrap();
    assert!(!rep.pass);
    assert!(!rep.holes_exact);
    assert!(rep.refutation.is_some());
    assert_eq!(rep.max_observed, Q::new(1, 3));
}

#[test]
fn covering_check_rejects_indefinite_lattices() {
    let l = catalog("II_1_1_G").unwrap();
    assert!(verify_covering_radius(&l, &qi(1), &[], 1, 0).is_err());
}

#[test]
fn cone_angle_input_validation() {
    assert!(ConeAngleInput::new(vec![qi(1), qi(1), qi(1)]).is_err());
    assert!(ConeAngleInput::new(vec![qi(2), qi(1), qi(1)]).is_err());
    assert!(cone_angles(&ConeAngleInput::new(vec![qi(1); 4]).unwrap()).is_empty());
    let eighths = ConeAngleInput::new(vec![Q::new(1, 2); 8]).unwrap();
    let pairs = cone_angles(&eighths);
    assert_eq!(pairs.len(), 28);
    let (orders, other) = order_summary(&pairs);
    assert_eq!(orders.into_iter().collect::<Vec<_>>(), vec![4]);
    assert_eq!(other, 0);
}

#[test]
fn theta_residues() {
    let e = Ring::Eisenstein;
    assert_eq!(reduce_mod_theta(&Scalar::omega(e)).unwrap(), 1);
    assert_eq!(reduce_mod_theta(&Scalar::theta(e)).unwrap(), 0);
    assert_eq!(reduce_mod_theta(&Scalar::from_int(e, 2)).unwrap(), 2);
}

#[test]
fn quotient_input_errors() {
    let l = catalog("II_1_1_E").unwrap();
    let e = Ring::Eisenstein;
    assert!(null_quotient(&l, &[Scalar::one(e), Scalar::one(e)]).is_err());
    assert!(null_quotient(&l, &[Scalar::from_int(e, 2), Scalar::zero(e)]).is_err());
    let q = null_quotient(&l, &[Scalar::one(e), Scalar::zero(e)]).unwrap();
    assert_eq!(q.rank(), 0);
}

#[test]
fn even_sublattice_of_i51_gives_ii51() {
    let m = catalog("I_5_1_G").unwrap();
    let (_, ns) = even_sublattice_constructions(&m).unwrap();
    let fp = catalog("II_5_1_G").unwrap().fingerprint();
    assert!(ns.iter().any(|n| n.even && n.selfdual && n.fingerprint == fp));
    assert!(ns.iter().all(|n| n.integral));
}
