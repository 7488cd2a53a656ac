//! Recognizing reflections among concrete isometries of selfdual lattices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use num_traits::Signed;
use serde::Serialize;
use serde_json::json;

use super::suites::random_root;
use super::{ClaimError, Report, RunConfig};
use crate::lattices::HermitianLattice;
use crate::lorentz::{LorentzLattice, ReflectionSpec};
use crate::mat::{self, Mat, Vector};
use crate::rings::{units, Ring, Scalar};
use crate::zlat::{qi, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReflectionClass {
    Reflection {
        root: Vector,
        xi: Scalar,
        #[serde(with = "crate::zlat::qser")]
        norm: Q,
        /// root norm ±1, or ±2 with ξ = −1
        dichotomy: bool,
    },
    NotAReflection { reason: String },
}

fn not(reason: &str) -> ReflectionClass {
    ReflectionClass::NotAReflection { reason: reason.into() }
}

/// The ξ-reflection x ↦ x − r(1−ξ)⟨r|x⟩/r² as a matrix.
pub fn reflection_matrix(l: &HermitianLattice, r: &[Scalar], xi: &Scalar) -> Mat {
    let ring = l.ring();
    let d = l.rank();
    let c = (&Scalar::one(ring) - xi).scale_q(&(qi(1) / l.norm(r)));
    let cols: Vec<Vector> = (0..d)
        .map(|j| {
            let mut e = vec![Scalar::zero(ring); d];
            e[j] = Scalar::one(ring);
            let s = &c * &l.inner_product(r, &e);
            mat::vsub(&e, &mat::vmul_right(r, &s))
        })
        .collect();
    Mat::from_cols(ring, &cols)
}

/// Decides whether `m` is a reflection of `l`, and if so extracts a
/// primitive root and ξ and checks the norm dichotomy for selfdual lattices.
pub fn classify_reflection(m: &Mat, l: &HermitianLattice) -> ReflectionClass {
    let ring = l.ring();
    let d = l.rank();
    if m.nrows() != d || m.ncols() != d {
        return not("matrix has the wrong size");
    }
    let g = l.gram();
    if m.adjoint().mul(g).mul(m) != *g {
        return not("not an isometry");
    }
    let mut a = m.clone();
    for i in 0..d {
        a.rows[i][i] = &a.rows[i][i] - &Scalar::one(ring);
    }
    match a.rank() {
        0 => return not("identity"),
        1 => {}
        k => return not(&format!("fixed space has corank {k}")),
    }
    let Some(col) = (0..d).map(|j| a.col(j)).find(|c| !mat::is_zero_vec(c)) else {
        return not("identity");
    };
    let den = col.iter().fold(1i128, |acc, s| num_integer::lcm(acc, s.den()));
    let scaled = mat::vmul_right(&col, &Scalar::from_int(ring, den));
    if !mat::is_integral_vec(&scaled) {
        return not("root direction is not rational");
    }
    let content = mat::content(ring, &scaled);
    let root = mat::vmul_right(&scaled, &content.inv());
    let norm = l.norm(&root);
    if norm == qi(0) {
        return not("root direction is null");
    }
    let k = root.iter().position(|x| !x.is_zero()).unwrap();
    let image = m.mul_vec(&root);
    let xi = image[k].left_div(&root[k]);
    if mat::vmul_right(&root, &xi) != image {
        return not("root direction is not an eigenvector");
    }
    if reflection_matrix(l, &root, &xi) != *m {
        return not("not of reflection form");
    }
    let an = norm.abs();
    let dichotomy = xi.norm() == qi(1)
        && xi.is_integral()
        && (an == qi(1) || (an == qi(2) && xi == -Scalar::one(ring)));
    ReflectionClass::Reflection { root, xi, norm, dichotomy }
}

#[derive(Clone, Debug, Default, Serialize)]
struct ReflCase {
    ring: Option<Ring>,
    n: usize,
    short: usize,
    long: usize,
    recognized: usize,
    rebuilt: usize,
    dichotomy: usize,
    rotations: usize,
    rotations_rejected: usize,
}

pub fn reflections_report(cfg: &RunConfig) -> Result<Report, ClaimError> {
    let count = cfg.budget_or(50);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    let mut ok = true;
    for ring in [Ring::Gauss, Ring::Eisenstein] {
        for n in 1..=2 {
            let l = LorentzLattice::standard(ring, n);
            let full = l.full();
            let xis: Vec<Scalar> = units(ring).into_iter().filter(|u| !u.is_one()).collect();
            let mut c = ReflCase { ring: Some(ring), n, ..Default::default() };
            for t in 0..2 * count {
                let long = t % 2 == 1;
                let (root, xi) = if long {
                    (random_root(&l, &qi(2), &mut rng), -Scalar::one(ring))
                } else {
                    (random_root(&l, &qi(1), &mut rng), xis[rng.gen_range(0..xis.len())].clone())
                };
                if long {
                    c.long += 1;
                } else {
                    c.short += 1;
                }
                let spec = ReflectionSpec { root, xi: xi.clone() };
                let m = l.reflection(&spec)?.matrix;
                if let ReflectionClass::Reflection { root, xi: x2, dichotomy, .. } = classify_reflection(&m, full) {
                    c.recognized += 1;
                    if reflection_matrix(full, &root, &x2) == m && x2 == xi {
                        c.rebuilt += 1;
                    }
                    if dichotomy {
                        c.dichotomy += 1;
                    }
                }
            }
            for _ in 0..count {
                let a = random_root(&l, &qi(1), &mut rng);
                let b = random_root(&l, &qi(1), &mut rng);
                if a == b {
                    continue;
                }
                let m = l
                    .reflection(&ReflectionSpec { root: a, xi: -Scalar::one(ring) })?
                    .matrix
                    .mul(&l.reflection(&ReflectionSpec { root: b, xi: -Scalar::one(ring) })?.matrix);
                c.rotations += 1;
                if let ReflectionClass::NotAReflection { .. } = classify_reflection(&m, full) {
                    c.rotations_rejected += 1;
                }
            }
            ok &= c.recognized == 2 * count
                && c.rebuilt == 2 * count
                && c.dichotomy == 2 * count
                && c.rotations_rejected == c.rotations;
            cases.push(c);
        }
    }
    Ok(Report::new(
        "reflections",
        ok,
        json!({ "cases": cases }),
        &["A reflection of a selfdual Gaussian or Eisenstein lattice is a ξ-reflection in a vector of norm ±1, or a biflection in a vector of norm ±2."],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triflection_and_rotation() {
        let e = Ring::Eisenstein;
        let l = HermitianLattice::standard(e, 2);
        let r = vec![Scalar::one(e), Scalar::zero(e)];
        let w = -Scalar::omega(e);
        let m = reflection_matrix(&l, &r, &w);
        match classify_reflection(&m, &l) {
            ReflectionClass::Reflection { root, xi, norm, dichotomy } => {
                assert_eq!(root, r);
                assert_eq!(xi, w);
                assert_eq!(norm, qi(1));
                assert!(dichotomy);
            }
            other => panic!("{other:?}"),
        }
        let r2 = vec![Scalar::zero(e), Scalar::one(e)];
        let rot = m.mul(&reflection_matrix(&l, &r2, &w));
        assert!(matches!(classify_reflection(&rot, &l), ReflectionClass::NotAReflection { .. }));
    }
}
