//! Seeded property suites: Heisenberg relations, the two reduction
//! lemmas on random configurations, and braid relations.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::{ClaimError, Report, RunConfig};
use crate::lorentz::{verify_heisenberg, HeightFamily, Isometry, LorentzLattice, LorentzVector, ReflectionSpec};
use crate::mat::{self, Mat, Vector};
use crate::reduce::group::braid_equivalence;
use crate::reduce::{proved_rules, table, CenterOutcome, RSquared, RootLength, RuleContext};
use crate::rings::{units, Ring, Scalar};
use crate::zlat::{qi, Q};

/// Ring element with ℤ-coordinates in −r..=r.
pub fn random_element(ring: Ring, r: i128, rng: &mut impl Rng) -> Scalar {
    let c: Vec<i128> = (0..ring.degree()).map(|_| rng.gen_range(-r..=r)).collect();
    Scalar::from_zcoords_int(ring, &c)
}

/// A generator of the imaginary integral elements used for shifts.
fn imaginary_unit(ring: Ring, rng: &mut impl Rng) -> Scalar {
    match ring {
        Ring::Eisenstein => Scalar::theta(ring),
        Ring::Gauss => Scalar::i(ring),
        Ring::Hurwitz => [Scalar::i(ring), Scalar::j(), Scalar::k()][rng.gen_range(0..3)].clone(),
    }
}

/// A random lattice vector of the given norm with nonzero height.
pub fn random_root(l: &LorentzLattice, norm: &Q, rng: &mut impl Rng) -> LorentzVector {
    let ring = l.ring();
    loop {
        let lambda: Vector = (0..l.n()).map(|_| random_element(ring, 1, rng)).collect();
        let mu = random_element(ring, 1, rng);
        if mu.is_zero() {
            continue;
        }
        let rhs = (norm - l.base().norm(&lambda)) / qi(2);
        let Some(nu0) = HeightFamily::new(&mu).solve(&rhs) else { continue };
        let k = Scalar::from_int(ring, rng.gen_range(-2..=2));
        let nu = &nu0 + &(&(&mu * &imaginary_unit(ring, rng)) * &k);
        let r = LorentzVector::new(lambda, mu, nu);
        debug_assert_eq!(l.norm(&r), *norm);
        return r;
    }
}

/// A product of `len` reflections in random short roots.
pub fn random_isometry(l: &LorentzLattice, len: usize, rng: &mut impl Rng) -> Result<Isometry, ClaimError> {
    let ring = l.ring();
    let xis: Vec<Scalar> = units(ring).into_iter().filter(|u| !u.is_one()).collect();
    let mut g = Isometry::identity(ring, l.dim());
    for _ in 0..len {
        let root = random_root(l, &qi(1), rng);
        let xi = xis[rng.gen_range(0..xis.len())].clone();
        g = g.compose(&l.reflection(&ReflectionSpec { root, xi })?);
    }
    Ok(g)
}

/// A monomial unitary map of 𝓡ⁿ: a permutation with unit entries.
fn random_monomial(ring: Ring, n: usize, rng: &mut impl Rng) -> Mat {
    let us = units(ring);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut m = Mat::zeros(ring, n, n);
    for (i, p) in perm.iter().enumerate() {
        m.rows[i][*p] = us[rng.gen_range(0..us.len())].clone();
    }
    m
}

#[derive(Clone, Debug, Serialize)]
struct HeisenbergCase {
    ring: Ring,
    instances: usize,
    composition: usize,
    inverse: usize,
    commutator: usize,
    conjugation: usize,
    central: usize,
}

pub fn heisenberg_report(cfg: &RunConfig) -> Result<Report, ClaimError> {
    let count = cfg.budget_or(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    let mut ok = true;
    for ring in Ring::ALL {
        let l = LorentzLattice::standard(ring, 2);
        let mut c = HeisenbergCase {
            ring,
            instances: count,
            composition: 0,
            inverse: 0,
            commutator: 0,
            conjugation: 0,
            central: 0,
        };
        for _ in 0..count {
            let x: Vector = (0..2).map(|_| random_element(ring, 3, &mut rng)).collect();
            let x2: Vector = (0..2).map(|_| random_element(ring, 3, &mut rng)).collect();
            let z = &imaginary_unit(ring, &mut rng) * &Scalar::from_int(ring, rng.gen_range(-4..=4));
            let z2 = &imaginary_unit(ring, &mut rng) * &Scalar::from_int(ring, rng.gen_range(-4..=4));
            let s = random_monomial(ring, 2, &mut rng);
            let h = verify_heisenberg(&l, &x, &z, &x2, &z2, &s)?;
            c.composition += usize::from(h.composition);
            c.inverse += usize::from(h.inverse);
            c.commutator += usize::from(h.commutator);
            c.conjugation += usize::from(h.conjugation);
            c.central += usize::from(h.central);
        }
        ok &= [c.composition, c.inverse, c.commutator, c.conjugation, c.central]
            .iter()
            .all(|k| *k == count);
        cases.push(c);
    }
    Ok(Report::new(
        "heisenberg",
        ok,
        json!({ "lattice": "R^2 ⊕ II_1_1", "cases": cases }),
        &[
            "Translations compose as T(x,z)T(x′,z′) = T(x+x′, z+z′+Im⟨x′|x⟩), and T(x,z)⁻¹ = T(−x,−z).",
            "The commutator of T(x,z) and T(x′,z′) is the central translation T(0, 2Im⟨x′|x⟩).",
            "A unitary map S of Λ conjugates T(x,z) to T(Sx, z).",
        ],
    ))
}

/// Random rational in (−a, a) with denominator ≤ `den`.
fn random_q(a: i128, den: i128, rng: &mut impl Rng) -> Q {
    let d = rng.gen_range(1..=den);
    Q::new(rng.gen_range(-(a * d) + 1..a * d), d)
}

fn random_q_scalar(ring: Ring, a: i128, den: i128, rng: &mut impl Rng) -> Scalar {
    let c: Vec<Q> = (0..ring.degree()).map(|_| random_q(a, den, rng)).collect();
    Scalar::from_zcoords(ring, &c)
}

/// The height-1 null vector (ℓ; 1, −ℓ²/2 + w) for imaginary w.
pub fn height_one_vector(l: &LorentzLattice, ell: &[Scalar], w: &Scalar) -> LorentzVector {
    let ring = l.ring();
    let nu = &Scalar::from_q(ring, -l.base().norm(ell) / qi(2)) + w;
    LorentzVector::new(ell.to_vec(), Scalar::one(ring), nu)
}

fn random_imaginary(ring: Ring, rng: &mut impl Rng) -> Scalar {
    let dens = [1, 2, 3, 4, 6];
    let d = dens[rng.gen_range(0..dens.len())];
    let s = random_q_scalar(ring, 2, 1, rng).scale_q(&Q::new(1, d));
    &s - &Scalar::from_q(ring, s.re())
}

/// Rational elements of norm 1.
fn rational_units(ring: Ring) -> Vec<Scalar> {
    let mut v = units(ring);
    match ring {
        Ring::Gauss => v.push(Scalar::new(ring, [3, 4, 0, 0], 5)),
        Ring::Eisenstein => v.push(
            (&Scalar::from_int(ring, 8) + &(&Scalar::omega(ring) * &Scalar::from_int(ring, 3)))
                .scale_q(&Q::new(1, 7)),
        ),
        Ring::Hurwitz => v.push(Scalar::new(ring, [1, 2, 2, 4], 5)),
    }
    v
}

/// A rational point of the unit sphere of ℚⁿ.
fn sphere_point(n: usize, rng: &mut impl Rng) -> Vec<Q> {
    let a = random_q(3, 4, rng);
    let b = random_q(3, 4, rng);
    match n {
        1 => vec![if rng.gen_bool(0.5) { qi(1) } else { qi(-1) }],
        2 => {
            let s = qi(1) + a * a;
            vec![(qi(1) - a * a) / s, qi(2) * a / s]
        }
        _ => {
            let s = qi(1) + a * a + b * b;
            let mut v = vec![qi(2) * a / s, qi(2) * b / s, (qi(1) - a * a - b * b) / s];
            v.resize(n, qi(0));
            v
        }
    }
}

/// An element s with |s|² = R² for the rows used below.
fn radius_scalar(rule: &crate::reduce::ReductionRule) -> Option<Scalar> {
    let r2 = match &rule.r2 {
        RSquared::Rational(r) => *r,
        RSquared::Sqrt3 => return None,
    };
    let hn = rule.h.norm();
    (r2 * hn == qi(1)).then(|| rule.h.inv())
}

#[derive(Clone, Debug, Default, Serialize)]
struct LemmaTally {
    row: String,
    configurations: usize,
    on_sphere: usize,
    reduced: usize,
    stuck_orthogonal: usize,
    stuck_exceptional: usize,
    values: BTreeMap<String, usize>,
    failures: Vec<String>,
}

fn run_rule(
    rule: crate::reduce::ReductionRule,
    count: usize,
    sphere: bool,
    max_rank: usize,
    rng: &mut ChaCha8Rng,
) -> Result<LemmaTally, ClaimError> {
    let ring = rule.ring;
    let ctx = RuleContext::new(rule.clone());
    let mut t = LemmaTally { row: rule.label(), ..Default::default() };
    let s = radius_scalar(&rule);
    let rus = rational_units(ring);
    while t.configurations < count {
        let n = rng.gen_range(1..=max_rank);
        let l = LorentzLattice::standard(ring, n);
        let lambda: Vector = (0..n).map(|_| random_element(ring, 2, rng)).collect();
        if ctx.base_root(&l, &lambda).is_none() {
            continue;
        }
        let center = mat::vmul_right(&lambda, &rule.h.inv());
        let mode = rng.gen_range(0..3);
        let delta: Vector = match (&s, sphere, mode) {
            (Some(s), _, 0 | 1) => {
                // on the sphere, or scaled strictly inside it
                let t = if mode == 0 && sphere {
                    qi(1)
                } else {
                    let d = rng.gen_range(2..=12);
                    Q::new(rng.gen_range(0..d), d)
                };
                sphere_point(n, rng)
                    .iter()
                    .map(|a| &(s * &Scalar::from_q(ring, a * t)) * &rus[rng.gen_range(0..rus.len())])
                    .collect()
            }
            _ => (0..n).map(|_| random_q_scalar(ring, 1, 12, rng)).collect(),
        };
        let d2 = l.base().norm(&delta);
        if rule.r2.compare(&d2) == std::cmp::Ordering::Greater {
            continue;
        }
        let ell = mat::vadd(&center, &delta);
        let w = random_imaginary(ring, rng);
        let v1 = height_one_vector(&l, &ell, &w);
        t.configurations += 1;
        t.on_sphere += usize::from(rule.r2.compare(&d2) == std::cmp::Ordering::Equal);
        match ctx.search_center(&l, &v1, &lambda) {
            CenterOutcome::Reduced { .. } => t.reduced += 1,
            CenterOutcome::StuckOrthogonal { root } => {
                if l.ip(&root, &v1).is_zero() {
                    t.stuck_orthogonal += 1;
                    *t.values.entry("0".into()).or_insert(0) += 1;
                } else {
                    t.failures.push(format!("bad orthogonal certificate at {v1}"));
                }
            }
            CenterOutcome::StuckExceptional { root, value } => {
                let listed = rule.exceptional.contains(&crate::reduce::ExceptionalValue::Exact(value.clone()));
                if listed && l.ip(&root, &v1) == value {
                    t.stuck_exceptional += 1;
                    *t.values.entry(value.to_string()).or_insert(0) += 1;
                } else {
                    t.failures.push(format!("value {value} not listed at {v1}"));
                }
            }
            other => t.failures.push(format!("{other:?} at {v1}")),
        }
    }
    Ok(t)
}

pub fn lemma52_report(cfg: &RunConfig) -> Result<Report, ClaimError> {
    let count = cfg.budget_or(500);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rule = table(Ring::Gauss)
        .into_iter()
        .find(|r| r.length == RootLength::Long && !r.generalized)
        .expect("long Gaussian row");
    let t = run_rule(rule, count, false, 2, &mut rng)?;
    let ok = t.reduced == count && t.failures.is_empty();
    Ok(Report::new(
        "lemma52",
        ok,
        json!({ "ring": "G", "max_rank": 2, "condition": "D^4 < 3", "tally": t }),
        &["Over the Gaussian integers, if the distance D from ℓ to the nearest lattice point satisfies D⁴ < 3, some biflection in a long root of height 1 reduces the height."],
    ))
}

pub fn lemma53_report(cfg: &RunConfig) -> Result<Report, ClaimError> {
    let count = cfg.budget_or(500);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    let mut ok = true;
    for ring in Ring::ALL {
        for rule in proved_rules(ring) {
            if rule.length != RootLength::Short {
                continue;
            }
            let max_rank = if ring == Ring::Hurwitz { 2 } else { 3 };
            let t = run_rule(rule, count, true, max_rank, &mut rng)?;
            ok &= t.failures.is_empty() && t.reduced + t.stuck_orthogonal + t.stuck_exceptional == count;
            rows.push(t);
        }
    }
    Ok(Report::new(
        "lemma53",
        ok,
        json!({ "rows": rows }),
        &[
            "If ℓ lies within distance R of a point λh⁻¹ over which a short root of height h lies, some reflection in such a root reduces the height, or D = R and the inner product takes one of the listed exceptional values.",
        ],
    ))
}

#[derive(Clone, Debug, Serialize)]
struct BraidCase {
    ring: Ring,
    n: usize,
    pairs: usize,
    relation_holds: usize,
    carried: usize,
}

pub fn braid_report(cfg: &RunConfig) -> Result<Report, ClaimError> {
    let count = cfg.budget_or(200);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let combos = [(Ring::Eisenstein, 1), (Ring::Eisenstein, 2), (Ring::Eisenstein, 3), (Ring::Hurwitz, 1), (Ring::Hurwitz, 2)];
    let mut cases = Vec::new();
    let mut ok = true;
    for (idx, (ring, n)) in combos.iter().enumerate() {
        let pairs = count / combos.len() + usize::from(idx < count % combos.len());
        let l = LorentzLattice::standard(*ring, *n);
        let us = units(*ring);
        let mut lam = vec![Scalar::zero(*ring); *n];
        lam[0] = Scalar::one(*ring);
        let r0 = LorentzVector::new(lam.clone(), Scalar::zero(*ring), Scalar::zero(*ring));
        let r1 = LorentzVector::new(lam, Scalar::one(*ring), Scalar::zero(*ring));
        let mut c = BraidCase { ring: *ring, n: *n, pairs, relation_holds: 0, carried: 0 };
        for _ in 0..pairs {
            let g = random_isometry(&l, rng.gen_range(0..=3), &mut rng)?;
            let a = g.apply(&r0).mul_right(&us[rng.gen_range(0..us.len())]);
            let b = g.apply(&r1).mul_right(&us[rng.gen_range(0..us.len())]);
            if l.ip(&a, &b).norm() != qi(1) {
                return Err(ClaimError::Invalid("pair lost its unit inner product".into()));
            }
            let w = braid_equivalence(&l, &a, &b)?;
            c.relation_holds += usize::from(w.relation_holds);
            c.carried += 1;
        }
        ok &= c.relation_holds == pairs && c.carried == pairs;
        cases.push(c);
    }
    Ok(Report::new(
        "braid",
        ok,
        json!({ "xi": "-ω", "cases": cases }),
        &["If r and r′ are short roots with |⟨r|r′⟩| = 1, the (−ω)-reflections R, R′ satisfy RR′R = R′RR′, so R∘R′ carries r to a unit multiple of r′."],
    ))
}
