//! Hermitian lattices given by Gram matrices, their real forms, and exact
//! short-vector and closest-vector enumeration.

pub mod catalog;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{Enumerator, NotPositiveDefinite};
use crate::mat::{self, Mat, Vector};
use crate::rings::{self, Ring, Scalar};
use crate::zlat::{self, qi, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice is not positive definite")]
    Indefinite,
    #[error("Gram matrix is not Hermitian")]
    NotHermitian,
    #[error("Gram matrix is singular")]
    Singular,
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("ring mismatch")]
    RingMismatch,
    #[error("catalog data: {0}")]
    Data(String),
}

impl From<NotPositiveDefinite> for LatticeError {
    fn from(_: NotPositiveDefinite) -> Self {
        LatticeError::Indefinite
    }
}

/// A free right 𝓡-module with a Hermitian form given on a basis.
#[derive(Clone, Debug)]
pub struct HermitianLattice {
    ring: Ring,
    gram: Mat,
    name: Option<String>,
    enumerator: OnceLock<Result<Arc<Enumerator>, NotPositiveDefinite>>,
}

impl PartialEq for HermitianLattice {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gram == other.gram
    }
}

/// Invariants used to compare lattices without an isometry test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub rank: usize,
    pub ring: Ring,
    /// vector counts for norms 0..=4, absent for indefinite lattices
    pub theta: Option<Vec<u64>>,
    /// determinant of the real-form Gram matrix, as "p/q"
    pub det: String,
}

impl HermitianLattice {
    pub fn new(ring: Ring, gram: Mat) -> Result<HermitianLattice, LatticeError> {
        let n = gram.nrows();
        if gram.ncols() != n {
            return Err(LatticeError::Dimension { expected: n, got: gram.ncols() });
        }
        if gram.ring != ring {
            return Err(LatticeError::RingMismatch);
        }
        for i in 0..n {
            for j in 0..n {
                if gram.rows[i][j].conj() != gram.rows[j][i] {
                    return Err(LatticeError::NotHermitian);
                }
            }
        }
        Ok(HermitianLattice { ring, gram, name: None, enumerator: OnceLock::new() })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// The standard lattice 𝓡ⁿ.
    pub fn standard(ring: Ring, n: usize) -> HermitianLattice {
        HermitianLattice::new(ring, Mat::identity(ring, n)).unwrap()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn direct_sum(&self, other: &HermitianLattice) -> HermitianLattice {
        let (a, b) = (self.rank(), other.rank());
        let mut g = Mat::zeros(self.ring, a + b, a + b);
        for i in 0..a {
            for j in 0..a {
                g.rows[i][j] = self.gram.rows[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                g.rows[a + i][a + j] = other.gram.rows[i][j].clone();
            }
        }
        HermitianLattice::new(self.ring, g).unwrap()
    }

    pub fn check_vec(&self, v: &[Scalar]) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::Dimension { expected: self.rank(), got: v.len() });
        }
        if v.iter().any(|x| x.ring() != self.ring) {
            return Err(LatticeError::RingMismatch);
        }
        Ok(())
    }

    /// ⟨x|y⟩ = Σ x̄ᵢ φᵢⱼ yⱼ.
    pub fn inner_product(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        mat::form(&self.gram, x, y)
    }

    pub fn norm(&self, x: &[Scalar]) -> Q {
        mat::form_norm(&self.gram, x)
    }

    pub fn is_integral(&self) -> bool {
        self.gram.is_integral()
    }

    /// Gram matrix of Re⟨·|·⟩ on the ℤ-basis {eₖβₜ}.
    pub fn real_gram(&self) -> Vec<Vec<Q>> {
        let basis = self.ring.zbasis();
        let d = basis.len();
        let n = self.rank();
        let mut out = vec![vec![qi(0); n * d]; n * d];
        for k in 0..n {
            for l in 0..n {
                let phi = &self.gram.rows[k][l];
                for s in 0..d {
                    let left = &basis[s].conj() * phi;
                    for t in 0..d {
                        out[k * d + s][l * d + t] = (&left * &basis[t]).re();
                    }
                }
            }
        }
        out
    }

    /// ℤ-coordinates of a vector of Λ⊗ℚ in the real-form basis.
    pub fn to_real(&self, v: &[Scalar]) -> Vec<Q> {
        v.iter().flat_map(|x| x.zcoords()).collect()
    }

    pub fn from_real(&self, x: &[i128]) -> Vector {
        let d = self.ring.degree();
        x.chunks(d).map(|c| Scalar::from_zcoords_int(self.ring, c)).collect()
    }

    pub fn from_real_q(&self, x: &[Q]) -> Vector {
        let d = self.ring.degree();
        x.chunks(d).map(|c| Scalar::from_zcoords(self.ring, c)).collect()
    }

    pub fn enumerator(&self) -> Result<&Enumerator, LatticeError> {
        let e = self
            .enumerator
            .get_or_init(|| Enumerator::new(&self.real_gram()).map(Arc::new));
        match e {
            Ok(e) => Ok(e.as_ref()),
            Err(_) => Err(LatticeError::Indefinite),
        }
    }

    pub fn is_positive_definite(&self) -> bool {
        self.enumerator().is_ok()
    }

    /// All nonzero vectors of norm ≤ `max_norm`, grouped by norm, each group
    /// in canonical order.
    pub fn short_vectors(&self, max_norm: &Q) -> Result<BTreeMap<Q, Vec<Vector>>, LatticeError> {
        let e = self.enumerator()?;
        let mut out: BTreeMap<Q, Vec<Vector>> = BTreeMap::new();
        e.ball(None, max_norm, |x, v| {
            if x.iter().any(|c| *c != 0) {
                out.entry(v).or_default().push(self.from_real(x));
            }
        });
        for vs in out.values_mut() {
            sort_canonical(vs);
        }
        Ok(out)
    }

    /// Calls `f` on every nonzero vector of norm ≤ `max_norm` (unordered).
    pub fn for_each_short(
        &self,
        max_norm: &Q,
        mut f: impl FnMut(&[i128], Q),
    ) -> Result<(), LatticeError> {
        let e = self.enumerator()?;
        e.ball(None, max_norm, |x, v| {
            if x.iter().any(|c| *c != 0) {
                f(x, v)
            }
        });
        Ok(())
    }

    pub fn min_norm(&self) -> Result<Q, LatticeError> {
        let mut bound = qi(1);
        loop {
            let sv = self.short_vectors(&bound)?;
            if let Some((n, _)) = sv.iter().next() {
                return Ok(*n);
            }
            bound *= qi(2);
        }
    }

    /// Vector counts for norms 0, 1, …, `max_norm` (integral lattices).
    pub fn theta_prefix(&self, max_norm: u64) -> Result<Vec<u64>, LatticeError> {
        let e = self.enumerator()?;
        let mut out = vec![0u64; max_norm as usize + 1];
        e.ball(None, &qi(max_norm as i128), |_, v| {
            if v.is_integer() {
                out[v.to_integer() as usize] += 1;
            }
        });
        Ok(out)
    }

    /// Exact squared distance from `t` to Λ and all closest lattice vectors.
    pub fn closest_points(&self, t: &[Scalar]) -> Result<(Q, Vec<Vector>), LatticeError> {
        let e = self.enumerator()?;
        let c = self.to_real(t);
        // Babai-style rounding gives an upper bound
        let rounded: Vec<i128> = c.iter().map(|x| x.round().to_integer()).collect();
        let bound = e.value_at_offset(&rounded, &c);
        // grow the search radius from a small fraction of the rounding bound
        let mut radius = bound / qi(64);
        let (best, pts) = loop {
            if radius > bound || radius == qi(0) {
                radius = bound;
            }
            let mut best = radius;
            let mut pts: Vec<Vec<i128>> = Vec::new();
            e.ball(Some(&c), &radius, |x, v| {
                if v < best {
                    best = v;
                    pts.clear();
                }
                if v == best {
                    pts.push(x.to_vec());
                }
            });
            if !pts.is_empty() || radius == bound {
                break (best, pts);
            }
            radius *= qi(2);
        };
        let mut vs: Vec<Vector> = pts.iter().map(|x| self.from_real(x)).collect();
        sort_canonical(&mut vs);
        Ok((best, vs))
    }

    /// Dual basis coefficients G⁻¹.
    pub fn gram_inverse(&self) -> Result<Mat, LatticeError> {
        self.gram.inverse().ok_or(LatticeError::Singular)
    }

    pub fn is_selfdual(&self) -> Result<bool, LatticeError> {
        let inv = self.gram_inverse()?;
        Ok(self.is_integral() && inv.is_integral())
    }

    /// Does the rational point `p` lie in the dual lattice?
    pub fn in_dual(&self, p: &[Scalar]) -> bool {
        mat::is_integral_vec(&self.gram.mul_vec(p))
    }

    pub fn is_even(&self) -> bool {
        let g = self.real_gram();
        g.iter().enumerate().all(|(i, r)| {
            r.iter().all(|x| x.is_integer()) && r[i].to_integer() % 2 == 0
        })
    }

    pub fn is_primitive(&self, v: &[Scalar]) -> bool {
        mat::is_primitive(self.ring, v)
    }

    /// Classes of Λ/Λm, each with a minimal-norm representative.
    pub fn residue_census(&self, m: &Scalar) -> Result<ResidueCensus, LatticeError> {
        if m.is_zero() || !m.is_integral() {
            return Err(LatticeError::InvalidParams("modulus must be a nonzero ring element".into()));
        }
        let h = rings::ideal_hnf(m);
        let per: i128 = h.iter().enumerate().map(|(i, r)| r[i]).product();
        let total = (per as u128).pow(self.rank() as u32) as usize;
        let e = self.enumerator()?;
        let mut bound = qi(1);
        loop {
            let mut classes: BTreeMap<Vec<i128>, (Q, Vector)> = BTreeMap::new();
            let zero = vec![Scalar::zero(self.ring); self.rank()];
            classes.insert(self.residue_key(&h, &zero), (qi(0), zero));
            e.ball(None, &bound, |x, v| {
                let vec = self.from_real(x);
                let key = self.residue_key(&h, &vec);
                let better = match classes.get(&key) {
                    None => true,
                    Some((bn, bv)) => v < *bn || (v == *bn && vec_key(&vec) < vec_key(bv)),
                };
                if better {
                    classes.insert(key, (v, vec));
                }
            });
            if classes.len() == total {
                return Ok(ResidueCensus { total, bound, classes });
            }
            bound += qi(1);
        }
    }

    fn residue_key(&self, h: &[Vec<i128>], v: &[Scalar]) -> Vec<i128> {
        v.iter().flat_map(|x| rings::residue_key(h, x)).collect()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let det = zlat::det_q(&self.real_gram());
        let theta = if self.is_positive_definite() { self.theta_prefix(4).ok() } else { None };
        Fingerprint { rank: self.rank(), ring: self.ring, theta, det: det.to_string() }
    }
}

#[derive(Clone, Debug)]
pub struct ResidueCensus {
    pub total: usize,
    /// every class has a representative of norm ≤ bound
    pub bound: Q,
    pub classes: BTreeMap<Vec<i128>, (Q, Vector)>,
}

impl ResidueCensus {
    pub fn min_norms(&self) -> BTreeMap<Q, usize> {
        let mut out = BTreeMap::new();
        for (n, _) in self.classes.values() {
            *out.entry(*n).or_insert(0) += 1;
        }
        out
    }
}

/// Sort key: concatenated public (doubled for ℋ) coordinates.
pub fn vec_key(v: &[Scalar]) -> Vec<Q> {
    v.iter().flat_map(|x| x.coords_q()).collect()
}

pub fn sort_canonical(vs: &mut [Vector]) {
    vs.sort_by_cached_key(|v| vec_key(v));
}

/// True iff `t = λ(1+i)⁻¹` for some λ ∈ Λ of odd norm.
pub fn deep_hole_predicate_bw(lattice: &HermitianLattice, t: &[Scalar]) -> bool {
    let ring = lattice.ring();
    if ring != Ring::Hurwitz {
        return false;
    }
    let h = Scalar::new(ring, [1, 1, 0, 0], 1);
    let lambda = mat::vmul_right(t, &h);
    if !mat::is_integral_vec(&lambda) {
        return false;
    }
    let n = lattice.norm(&lambda);
    n.is_integer() && n.to_integer().rem_euclid(2) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_real_form_is_hexagonal() {
        let l = HermitianLattice::standard(Ring::Eisenstein, 1);
        assert_eq!(
            l.real_gram(),
            vec![vec![qi(1), Q::new(-1, 2)], vec![Q::new(-1, 2), qi(1)]]
        );
    }

    #[test]
    fn units_are_norm_one_vectors() {
        let l = HermitianLattice::standard(Ring::Eisenstein, 1);
        let sv = l.short_vectors(&qi(1)).unwrap();
        assert_eq!(sv[&qi(1)].len(), 6);
    }

    #[test]
    fn closest_point_examples() {
        let g = HermitianLattice::standard(Ring::Gauss, 1);
        let t = vec![Scalar::from_q(Ring::Gauss, Q::new(1, 2))];
        let (d, pts) = g.closest_points(&t).unwrap();
        assert_eq!(d, Q::new(1, 4));
        assert_eq!(pts.len(), 2);
        let e = HermitianLattice::standard(Ring::Eisenstein, 1);
        let t = vec![Scalar::new(Ring::Eisenstein, [2, 1, 0, 0], 3)];
        let (d, pts) = e.closest_points(&t).unwrap();
        assert_eq!(d, Q::new(1, 3));
        let expect = vec![
            vec![Scalar::zero(Ring::Eisenstein)],
            vec![Scalar::one(Ring::Eisenstein)],
            vec![Scalar::new(Ring::Eisenstein, [1, 1, 0, 0], 1)],
        ];
        let mut expect = expect;
        sort_canonical(&mut expect);
        assert_eq!(pts, expect);
    }

    #[test]
    fn hurwitz_real_form_scaled_is_d4() {
        let h = HermitianLattice::standard(Ring::Hurwitz, 1);
        // √2ℋ has 24 vectors of norm 2, the D4 roots
        assert_eq!(h.theta_prefix(2).unwrap(), vec![1, 24, 24]);
        assert_eq!(zlat::det_q(&h.real_gram()), Q::new(1, 4));
    }
}
