//! Covering radii by hole certification and sampling, the quaternionic
//! Barnes–Wall checks, and the root count of D₃(θ).

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::{ClaimError, Report, RunConfig};
use crate::lattices::catalog::{catalog, load_data};
use crate::lattices::{deep_hole_predicate_bw, HermitianLattice};
use crate::mat::{self, Mat, Vector};
use crate::rings::{units, Ring, Scalar};
use crate::zlat::{self, qi, Q};

pub const EVIDENCE_NOTE: &str =
    "sampling and hole certification give property evidence, not a proof";

/// Outcome of [`verify_covering_radius`].
#[derive(Clone, Debug, Serialize)]
pub struct CoveringReport {
    #[serde(with = "crate::zlat::qser")]
    pub claimed_r2: Q,
    pub holes: usize,
    /// CVP distance² of the supplied holes, with multiplicities
    pub hole_distances: BTreeMap<String, usize>,
    pub holes_exact: bool,
    pub grid_points: usize,
    pub samples: usize,
    #[serde(with = "crate::zlat::qser")]
    pub max_observed: Q,
    /// a sample farther than the claim, in real coordinates
    pub refutation: Option<Vec<String>>,
    pub pass: bool,
    pub note: &'static str,
}

fn grid(d: usize) -> Vec<Vec<Q>> {
    let m: i128 = if 3usize.pow(d as u32) <= 1000 { 3 } else { 2 };
    let total = (m as usize).pow(d as u32);
    (0..total)
        .map(|mut k| {
            (0..d)
                .map(|_| {
                    let c = (k % m as usize) as i128;
                    k /= m as usize;
                    Q::new(c, m)
                })
                .collect()
        })
        .collect()
}

/// Checks that every hole lies at exact CVP distance² `r2`, and that a
/// deterministic grid plus `budget` random rational points lie within it.
pub fn verify_covering_radius(
    l: &HermitianLattice,
    r2: &Q,
    holes: &[Vector],
    budget: usize,
    seed: u64,
) -> Result<CoveringReport, ClaimError> {
    if !l.is_positive_definite() {
        return Err(ClaimError::Invalid("lattice is not positive definite".into()));
    }
    let mut hole_distances = BTreeMap::new();
    let mut holes_exact = true;
    for h in holes {
        if h.len() != l.rank() {
            return Err(ClaimError::Invalid("hole has the wrong dimension".into()));
        }
        let (d2, _) = l.closest_points(h)?;
        holes_exact &= d2 == *r2;
        *hole_distances.entry(d2.to_string()).or_insert(0) += 1;
    }
    let d = l.rank() * l.ring().degree();
    let mut max_observed = qi(0);
    let mut refutation = None;
    let mut check = |x: &[Q]| -> Result<(), ClaimError> {
        let (d2, _) = l.closest_points(&l.from_real_q(x))?;
        if d2 > max_observed {
            max_observed = d2;
        }
        if d2 > *r2 && refutation.is_none() {
            refutation = Some(x.iter().map(|c| c.to_string()).collect());
        }
        Ok(())
    };
    let pts = grid(d);
    for x in &pts {
        check(x)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let x: Vec<Q> = (0..d)
            .map(|_| {
                let den = rng.gen_range(1..=30i128);
                Q::new(rng.gen_range(0..den), den)
            })
            .collect();
        check(&x)?;
    }
    let pass = holes_exact && refutation.is_none();
    Ok(CoveringReport {
        claimed_r2: *r2,
        holes: holes.len(),
        hole_distances,
        holes_exact,
        grid_points: pts.len(),
        samples: budget,
        max_observed,
        refutation,
        pass,
        note: EVIDENCE_NOTE,
    })
}

/// A covering-radius statement with its candidate deep holes.
pub struct CoveringClaim {
    pub name: &'static str,
    pub r2: (i128, i128),
    pub statement: &'static str,
}

pub const COVERING_CLAIMS: [CoveringClaim; 6] = [
    CoveringClaim {
        name: "R1_E",
        r2: (1, 3),
        statement: "The Eisenstein integers have covering radius (1/3)^(1/2).",
    },
    CoveringClaim {
        name: "R2_E",
        r2: (2, 3),
        statement: "The lattice of pairs of Eisenstein integers has covering radius (2/3)^(1/2).",
    },
    CoveringClaim {
        name: "R3_E",
        r2: (1, 1),
        statement: "The lattice of triples of Eisenstein integers has covering radius 1.",
    },
    CoveringClaim {
        name: "R1_H",
        r2: (1, 2),
        statement: "The Hurwitz integers have covering radius (1/2)^(1/2).",
    },
    CoveringClaim {
        name: "R2_H",
        r2: (1, 1),
        statement: "The lattice of pairs of Hurwitz integers has covering radius 1.",
    },
    CoveringClaim {
        name: "D4_G",
        r2: (1, 1),
        statement: "The covering radius of D₂ₙ is (n/2)^(1/2); here n = 2.",
    },
];

fn unit_orbit(h: &Scalar) -> Vec<Scalar> {
    let mut v: Vec<Scalar> = units(h.ring()).iter().map(|u| u * h).collect();
    v.sort();
    v.dedup();
    v
}

fn products(parts: &[Vec<Scalar>]) -> Vec<Vector> {
    let mut out: Vec<Vector> = vec![vec![]];
    for p in parts {
        out = out
            .iter()
            .flat_map(|pre| {
                p.iter().map(move |x| {
                    let mut v = pre.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Coordinates, in the stored basis, of a point of the ambient space.
fn stored_coordinates(name: &str, p: &[Scalar]) -> Result<Vector, ClaimError> {
    let data = load_data()?;
    let entry = data
        .entries
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| ClaimError::Invalid(format!("{name} is not stored")))?;
    let cols: Vec<Vector> = entry
        .basis
        .iter()
        .map(|b| b.iter().map(|x| x.scalar().clone()).collect())
        .collect();
    let inv = Mat::from_cols(entry.ring, &cols)
        .inverse()
        .ok_or_else(|| ClaimError::Invalid("singular basis".into()))?;
    Ok(inv.mul_vec(p))
}

/// Candidate deep holes of a covering claim.
pub fn claim_holes(name: &str) -> Result<Vec<Vector>, ClaimError> {
    let e = Ring::Eisenstein;
    let h = Ring::Hurwitz;
    let eis = (&Scalar::from_int(e, 2) + &Scalar::omega(e)).scale_q(&Q::new(1, 3));
    let hur = Scalar::new(h, [1, 1, 0, 0], 2);
    Ok(match name {
        "R1_E" => products(&[unit_orbit(&eis)]),
        "R2_E" => products(&vec![unit_orbit(&eis); 2]),
        "R3_E" => products(&vec![unit_orbit(&eis); 3]),
        "R1_H" => products(&[unit_orbit(&hur)]),
        "R2_H" => products(&vec![unit_orbit(&hur); 2]),
        "D4_G" => {
            let g = Ring::Gauss;
            let half = Scalar::new(g, [1, 1, 0, 0], 2);
            let mut pts = vec![];
            for u in units(g) {
                pts.push(vec![u.clone(), Scalar::zero(g)]);
                pts.push(vec![Scalar::zero(g), u.clone()]);
                pts.push(vec![&u * &half, &u * &half]);
                pts.push(vec![&u * &half, -(&u * &half)]);
            }
            pts.iter()
                .map(|p| stored_coordinates("D4_G", p))
                .collect::<Result<_, _>>()?
        }
        _ => return Err(ClaimError::UnknownClaim(format!("covering-{name}"))),
    })
}

pub fn covering_report(name: &str, cfg: &RunConfig) -> Result<Report, ClaimError> {
    let claim = COVERING_CLAIMS
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| ClaimError::UnknownClaim(format!("covering-{name}")))?;
    let l = catalog(name)?;
    let holes = claim_holes(name)?;
    let r2 = Q::new(claim.r2.0, claim.r2.1);
    let rep = verify_covering_radius(&l, &r2, &holes, cfg.budget_or(10_000), cfg.seed)?;
    Ok(Report::new(
        &format!("covering-{name}"),
        rep.pass,
        json!({ "lattice": name, "covering": rep }),
        &[claim.statement],
    ))
}

/// Outcome of [`verify_barneswall`].
#[derive(Clone, Debug, Serialize)]
pub struct BarnesWallReport {
    pub selfdual: bool,
    #[serde(with = "crate::zlat::qser")]
    pub min_norm: Q,
    pub norm2_count: usize,
    pub norm3_count: usize,
    /// the norm-2 vectors generate the lattice over ℤ
    pub spanned_by_minimal: bool,
    pub residue_classes: usize,
    /// minimal norms of the classes mod (1+i), with multiplicities
    pub class_min_norms: BTreeMap<String, usize>,
    /// derived deep holes λ(1+i)⁻¹, λ² = 3
    pub deep_holes: Vec<Vec<String>>,
    pub predicate_holds: bool,
    pub hole_distances: BTreeMap<String, usize>,
    /// λ(1+i)⁻¹ with λ² = 2: predicate false and strictly nearer
    pub even_controls: usize,
    pub controls_ok: bool,
    pub samples: usize,
    #[serde(with = "crate::zlat::qser")]
    pub max_sample_distance: Q,
    pub pass: bool,
}

impl BarnesWallReport {
    /// The common distance² of the derived holes, if they agree.
    pub fn hole_distance(&self) -> Option<Q> {
        if self.hole_distances.len() == 1 {
            zlat::parse_q(self.hole_distances.keys().next().unwrap())
        } else {
            None
        }
    }
}

pub fn verify_barneswall(samples: usize, seed: u64) -> Result<BarnesWallReport, ClaimError> {
    let l = catalog("BW4_H")?;
    let h = Ring::Hurwitz;
    let selfdual = l.is_selfdual()?;
    let min_norm = l.min_norm()?;
    let sv = l.short_vectors(&qi(3))?;
    let empty = Vec::new();
    let n2 = sv.get(&qi(2)).unwrap_or(&empty);
    let n3 = sv.get(&qi(3)).unwrap_or(&empty);
    let rows: Vec<Vec<i128>> = n2
        .iter()
        .map(|v| l.to_real(v).iter().map(|c| c.to_integer()).collect())
        .collect();
    let dim = l.rank() * h.degree();
    let spanned_by_minimal = !rows.is_empty() && zlat::hnf(&rows) == zlat::identity(dim);

    let one_plus_i = Scalar::new(h, [1, 1, 0, 0], 1);
    let census = l.residue_census(&one_plus_i)?;
    let class_min_norms: BTreeMap<String, usize> =
        census.min_norms().iter().map(|(k, c)| (k.to_string(), *c)).collect();

    let inv = one_plus_i.inv();
    let mut deep_holes = Vec::new();
    let mut predicate_holds = true;
    let mut hole_distances = BTreeMap::new();
    let mut deepest = qi(0);
    for lam in n3.iter().take(20) {
        let t = mat::vmul_right(lam, &inv);
        predicate_holds &= deep_hole_predicate_bw(&l, &t);
        let (d2, _) = l.closest_points(&t)?;
        deepest = deepest.max(d2);
        *hole_distances.entry(d2.to_string()).or_insert(0) += 1;
        deep_holes.push(t.iter().map(|x| x.to_string()).collect());
    }
    let mut controls_ok = true;
    let controls: Vec<&Vector> = n2.iter().take(20).collect();
    for lam in &controls {
        let t = mat::vmul_right(lam, &inv);
        let (d2, _) = l.closest_points(&t)?;
        controls_ok &= !deep_hole_predicate_bw(&l, &t) && d2 < deepest;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_sample_distance = qi(0);
    for _ in 0..samples {
        let x: Vec<Q> = (0..dim)
            .map(|_| {
                let den = rng.gen_range(1..=12i128);
                Q::new(rng.gen_range(0..den), den)
            })
            .collect();
        let (d2, _) = l.closest_points(&l.from_real_q(&x))?;
        max_sample_distance = max_sample_distance.max(d2);
    }
    let allowed: BTreeSet<String> = ["0", "2", "3"].iter().map(|s| s.to_string()).collect();
    let pass = selfdual
        && min_norm == qi(2)
        && spanned_by_minimal
        && census.classes.len() == 256
        && class_min_norms.keys().all(|k| allowed.contains(k))
        && deep_holes.len() == 20
        && predicate_holds
        && hole_distances.len() == 1
        && controls_ok
        && max_sample_distance <= deepest;
    Ok(BarnesWallReport {
        selfdual,
        min_norm,
        norm2_count: n2.len(),
        norm3_count: n3.len(),
        spanned_by_minimal,
        residue_classes: census.classes.len(),
        class_min_norms,
        deep_holes,
        predicate_holds,
        hole_distances,
        even_controls: controls.len(),
        controls_ok,
        samples,
        max_sample_distance,
        pass,
    })
}

pub fn barneswall_report(cfg: &RunConfig) -> Result<Report, ClaimError> {
    let rep = verify_barneswall(cfg.budget_or(1000), cfg.seed)?;
    Ok(Report::new(
        "bw-thm31",
        rep.pass,
        json!({ "lattice": "BW4_H", "checks": rep, "note": EVIDENCE_NOTE }),
        &[
            "The quaternionic Barnes-Wall lattice is selfdual and spanned by its minimal vectors, which have norm 2.",
            "Each class modulo (1+i) is represented by a vector of norm at most 3, and every lattice vector is congruent to one of norm 0, 2 or 3.",
            "The deep holes are the points λ(1+i)⁻¹ with λ a lattice vector of odd norm.",
        ],
    ))
}

pub fn d3theta_report() -> Result<Report, ClaimError> {
    let l = catalog("D3theta")?;
    let sv = l.short_vectors(&qi(3))?;
    let count = |n: i128| sv.get(&qi(n)).map_or(0, |v| v.len());
    let (n1, n2, n3) = (count(1), count(2), count(3));
    Ok(Report::new(
        "d3theta-roots",
        n1 == 0 && n2 == 54 && n3 == 72,
        json!({ "lattice": "D3theta", "norm1": n1, "norm2": n2, "norm3": n3 }),
        &["D₃(θ) has 54 long roots and 72 vectors of norm 3."],
    ))
}
