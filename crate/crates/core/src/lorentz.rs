//! The Lorentzian lattice L = Λ ⊕ II₁,₁: heights, reflections, Heisenberg
//! translations.
//!
//! Vectors are written (λ; μ, ν) with
//! ⟨(λ₁;μ₁,ν₁)|(λ₂;μ₂,ν₂)⟩ = ⟨λ₁|λ₂⟩ + μ̄₁ν₂ + ν̄₁μ₂, and ρ = (0;0,1).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::Enumerator;
use crate::lattices::catalog::hyperbolic_plane;
use crate::lattices::HermitianLattice;
use crate::mat::{self, Mat, Vector};
use crate::rings::{self, Ring, Scalar};
use crate::zlat::{self, qi, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LorentzError {
    #[error("vector has zero height")]
    ZeroHeight,
    #[error("root has zero norm")]
    ZeroNorm,
    #[error("{0} is not a unit")]
    NotUnit(String),
    #[error("ξ = 1 gives the identity")]
    TrivialXi,
    #[error("z = {0} is not imaginary")]
    NotImaginary(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("no {0} roots of height {1} over this λ")]
    NoRoots(&'static str, String),
    #[error("translation does not preserve the lattice")]
    NotIntegral,
}

/// The lattice Λ ⊕ II₁,₁.
#[derive(Clone, Debug)]
pub struct LorentzLattice {
    base: HermitianLattice,
    full: HermitianLattice,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LorentzVector {
    pub lambda: Vector,
    pub mu: Scalar,
    pub nu: Scalar,
}

impl LorentzVector {
    pub fn new(lambda: Vector, mu: Scalar, nu: Scalar) -> LorentzVector {
        LorentzVector { lambda, mu, nu }
    }

    pub fn from_flat(v: &[Scalar]) -> LorentzVector {
        let n = v.len() - 2;
        LorentzVector { lambda: v[..n].to_vec(), mu: v[n].clone(), nu: v[n + 1].clone() }
    }

    pub fn flat(&self) -> Vector {
        let mut v = self.lambda.clone();
        v.push(self.mu.clone());
        v.push(self.nu.clone());
        v
    }

    pub fn ring(&self) -> Ring {
        self.mu.ring()
    }

    pub fn height(&self) -> &Scalar {
        &self.mu
    }

    /// The point λμ⁻¹ of Λ⊗ℚ.
    pub fn lies_over(&self) -> Result<Vector, LorentzError> {
        if self.mu.is_zero() {
            return Err(LorentzError::ZeroHeight);
        }
        let inv = self.mu.inv();
        Ok(mat::vmul_right(&self.lambda, &inv))
    }

    /// Right scalar multiple v·s.
    pub fn mul_right(&self, s: &Scalar) -> LorentzVector {
        LorentzVector::from_flat(&mat::vmul_right(&self.flat(), s))
    }

    pub fn is_integral(&self) -> bool {
        mat::is_integral_vec(&self.flat())
    }

    pub fn is_zero(&self) -> bool {
        mat::is_zero_vec(&self.flat())
    }
}

impl std::fmt::Display for LorentzVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l: Vec<String> = self.lambda.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {}, {})", l.join(", "), self.mu, self.nu)
    }
}

/// ξ-reflection in `root`: v ↦ v − r(1−ξ)⟨r|v⟩/r².
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReflectionSpec {
    pub root: LorentzVector,
    pub xi: Scalar,
}

/// One generator of a certificate word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Reflection { root: LorentzVector, xi: Scalar },
    Translation { x: Vector, z: Scalar },
}

/// A matrix acting on column vectors from the left, with the word that built it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub matrix: Mat,
    /// generators, applied right to left (the last entry acts first)
    pub word: Vec<Generator>,
}

impl Isometry {
    pub fn identity(ring: Ring, n: usize) -> Isometry {
        Isometry { matrix: Mat::identity(ring, n), word: vec![] }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let mut word = self.word.clone();
        word.extend(other.word.iter().cloned());
        Isometry { matrix: self.matrix.mul(&other.matrix), word }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry { matrix: self.matrix.inverse().expect("isometries are invertible"), word: vec![] }
    }

    pub fn apply(&self, v: &LorentzVector) -> LorentzVector {
        LorentzVector::from_flat(&self.matrix.mul_vec(&v.flat()))
    }

    pub fn preserves_integrality(&self) -> bool {
        self.matrix.is_integral()
    }
}

impl LorentzLattice {
    pub fn new(base: HermitianLattice) -> LorentzLattice {
        let full = base.direct_sum(&hyperbolic_plane(base.ring()));
        LorentzLattice { base, full }
    }

    /// 𝓡ⁿ ⊕ II₁,₁.
    pub fn standard(ring: Ring, n: usize) -> LorentzLattice {
        LorentzLattice::new(HermitianLattice::standard(ring, n))
    }

    pub fn base(&self) -> &HermitianLattice {
        &self.base
    }

    pub fn full(&self) -> &HermitianLattice {
        &self.full
    }

    pub fn ring(&self) -> Ring {
        self.base.ring()
    }

    pub fn n(&self) -> usize {
        self.base.rank()
    }

    pub fn dim(&self) -> usize {
        self.base.rank() + 2
    }

    pub fn rho(&self) -> LorentzVector {
        let r = self.ring();
        LorentzVector::new(vec![Scalar::zero(r); self.n()], Scalar::zero(r), Scalar::one(r))
    }

    pub fn vector(&self, lambda: Vector, mu: Scalar, nu: Scalar) -> LorentzVector {
        LorentzVector::new(lambda, mu, nu)
    }

    pub fn check(&self, v: &LorentzVector) -> Result<(), LorentzError> {
        if v.lambda.len() != self.n() {
            return Err(LorentzError::Dimension { expected: self.n(), got: v.lambda.len() });
        }
        Ok(())
    }

    pub fn ip(&self, u: &LorentzVector, v: &LorentzVector) -> Scalar {
        let a = self.base.inner_product(&u.lambda, &v.lambda);
        let b = &u.mu.conj() * &v.nu;
        let c = &u.nu.conj() * &v.mu;
        &(&a + &b) + &c
    }

    pub fn norm(&self, v: &LorentzVector) -> Q {
        self.ip(v, v).re()
    }

    /// ⟨ρ|v⟩ = μ.
    pub fn height(&self, v: &LorentzVector) -> Scalar {
        self.ip(&self.rho(), v)
    }

    pub fn is_primitive(&self, v: &LorentzVector) -> bool {
        mat::is_primitive(self.ring(), &v.flat())
    }

    /// Row vector a with a·w = ⟨v|w⟩.
    pub fn dual_row(&self, v: &LorentzVector) -> Vector {
        let g = self.full.gram();
        let flat = v.flat();
        (0..self.dim())
            .map(|j| {
                let mut acc = Scalar::zero(self.ring());
                for (i, x) in flat.iter().enumerate() {
                    if !x.is_zero() && !g.rows[i][j].is_zero() {
                        acc = &acc + &(&x.conj() * &g.rows[i][j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn reflection(&self, spec: &ReflectionSpec) -> Result<Isometry, LorentzError> {
        self.check(&spec.root)?;
        let n = self.norm(&spec.root);
        if n == qi(0) {
            return Err(LorentzError::ZeroNorm);
        }
        if spec.xi.norm() != qi(1) || !spec.xi.is_integral() {
            return Err(LorentzError::NotUnit(spec.xi.to_string()));
        }
        if spec.xi.is_one() {
            return Err(LorentzError::TrivialXi);
        }
        let ring = self.ring();
        let c = (&Scalar::one(ring) - &spec.xi).scale_q(&(qi(1) / n));
        let r = spec.root.flat();
        let a = self.dual_row(&spec.root);
        let d = self.dim();
        let mut m = Mat::identity(ring, d);
        for i in 0..d {
            if r[i].is_zero() {
                continue;
            }
            let rc = &r[i] * &c;
            for j in 0..d {
                if !a[j].is_zero() {
                    m.rows[i][j] = &m.rows[i][j] - &(&rc * &a[j]);
                }
            }
        }
        Ok(Isometry {
            matrix: m,
            word: vec![Generator::Reflection { root: spec.root.clone(), xi: spec.xi.clone() }],
        })
    }

    /// Applies the reflection formula directly, without building a matrix.
    pub fn reflect(&self, spec: &ReflectionSpec, v: &LorentzVector) -> LorentzVector {
        let n = self.norm(&spec.root);
        let ring = self.ring();
        let c = (&Scalar::one(ring) - &spec.xi).scale_q(&(qi(1) / n));
        let s = &c * &self.ip(&spec.root, v);
        let shift = spec.root.mul_right(&s);
        LorentzVector::from_flat(&mat::vsub(&v.flat(), &shift.flat()))
    }

    /// Heisenberg translation T_{x,z}; `z` must be imaginary.
    pub fn translation(&self, x: &[Scalar], z: &Scalar) -> Result<Isometry, LorentzError> {
        if x.len() != self.n() {
            return Err(LorentzError::Dimension { expected: self.n(), got: x.len() });
        }
        if !z.is_zero() && z.re() != qi(0) {
            return Err(LorentzError::NotImaginary(z.to_string()));
        }
        let ring = self.ring();
        let n = self.n();
        let mut m = Mat::identity(ring, n + 2);
        let half_norm = Scalar::from_q(ring, self.base.norm(x) / qi(2));
        for k in 0..n {
            m.rows[k][n] = x[k].clone();
            // (x*)_k = ⟨x|e_k⟩
            let mut e = vec![Scalar::zero(ring); n];
            e[k] = Scalar::one(ring);
            m.rows[n + 1][k] = -self.base.inner_product(x, &e);
        }
        m.rows[n + 1][n] = z - &half_norm;
        Ok(Isometry {
            matrix: m,
            word: vec![Generator::Translation { x: x.to_vec(), z: z.clone() }],
        })
    }

    /// Does T_{x,z} preserve L? (x ∈ Λ and z − x²/2 ∈ 𝓡)
    pub fn translation_is_integral(&self, x: &[Scalar], z: &Scalar) -> bool {
        let half = Scalar::from_q(self.ring(), self.base.norm(x) / qi(2));
        mat::is_integral_vec(x) && (z - &half).is_integral()
    }

    /// Extends a map of Λ to L, acting trivially on II₁,₁.
    pub fn extend(&self, s: &Mat) -> Isometry {
        let n = self.n();
        let mut m = Mat::identity(self.ring(), n + 2);
        for i in 0..n {
            for j in 0..n {
                m.rows[i][j] = s.rows[i][j].clone();
            }
        }
        Isometry { matrix: m, word: vec![] }
    }

    /// Exact check that M preserves the form on all standard basis pairs.
    pub fn is_isometry(&self, m: &Mat) -> bool {
        let g = self.full.gram();
        m.adjoint().mul(g).mul(m) == *g
    }

    pub fn generator_isometry(&self, g: &Generator) -> Result<Isometry, LorentzError> {
        match g {
            Generator::Reflection { root, xi } => {
                self.reflection(&ReflectionSpec { root: root.clone(), xi: xi.clone() })
            }
            Generator::Translation { x, z } => self.translation(x, z),
        }
    }

    /// Applies a word (last generator first) to a vector.
    pub fn apply_word(&self, word: &[Generator], v: &LorentzVector) -> Result<LorentzVector, LorentzError> {
        let mut w = v.clone();
        for g in word.iter().rev() {
            w = self.generator_isometry(g)?.apply(&w);
        }
        Ok(w)
    }

    /// Roots of height `h` over the point λh⁻¹: all (λ; h, ν) of norm 1
    /// (short) or 2 (long) with |ν − ν*|² ≤ `radius2`, where ν* is the
    /// solution nearest the real line through h.
    pub fn roots_of_height(
        &self,
        h: &Scalar,
        lambda: &[Scalar],
        long: bool,
        radius2: &Q,
    ) -> Result<Vec<LorentzVector>, LorentzError> {
        let target = if long { qi(2) } else { qi(1) };
        let kind = if long { "long" } else { "short" };
        let rhs = target - self.base.norm(lambda);
        let fam = HeightFamily::new(h);
        let base = fam
            .solve(&(rhs / qi(2)))
            .ok_or_else(|| LorentzError::NoRoots(kind, h.to_string()))?;
        let star = h.scale_q(&(rhs / (qi(2) * h.norm())));
        let mut out = Vec::new();
        fam.for_each_near(&(&star - &base), radius2, |k| {
            out.push(LorentzVector::new(lambda.to_vec(), h.clone(), &base + k));
        });
        out.sort();
        Ok(out)
    }
}

/// The affine family of ν ∈ 𝓡 with prescribed Re(h̄ν), and its direction
/// lattice K_h = {z ∈ 𝓡 : Re(h̄z) = 0}.
#[derive(Clone, Debug)]
pub struct HeightFamily {
    pub h: Scalar,
    /// Re(h̄βₜ), scaled to integers by `den`
    row: Vec<i128>,
    den: i128,
    /// ℤ-basis of K_h
    pub kernel: Vec<Scalar>,
    enumerator: Option<Enumerator>,
}

impl HeightFamily {
    pub fn new(h: &Scalar) -> HeightFamily {
        let ring = h.ring();
        let hb = h.conj();
        let re: Vec<Q> = ring.zbasis().iter().map(|b| (&hb * b).re()).collect();
        let den = zlat::lcm_denoms(re.iter());
        let row: Vec<i128> = re.iter().map(|x| (x * qi(den)).to_integer()).collect();
        let ker = zlat::kernel(&[row.clone()], ring.degree());
        let kernel: Vec<Scalar> = ker.iter().map(|c| Scalar::from_zcoords_int(ring, c)).collect();
        let enumerator = if kernel.is_empty() {
            None
        } else {
            let g: Vec<Vec<Q>> = kernel
                .iter()
                .map(|a| kernel.iter().map(|b| (&a.conj() * b).re()).collect())
                .collect();
            Some(Enumerator::new(&g).expect("trace form is definite"))
        };
        HeightFamily { h: h.clone(), row, den, kernel, enumerator }
    }

    /// Some ν ∈ 𝓡 with Re(h̄ν) = t, if one exists.
    pub fn solve(&self, t: &Q) -> Option<Scalar> {
        let scaled = t * qi(self.den);
        if !scaled.is_integer() {
            return None;
        }
        let sol = zlat::solve_row(&self.row, scaled.to_integer())?;
        Some(Scalar::from_zcoords_int(self.h.ring(), &sol))
    }

    /// Calls `f(k)` for every k ∈ K_h with |k − c|² ≤ r2.
    pub fn for_each_near(&self, c: &Scalar, r2: &Q, mut f: impl FnMut(&Scalar)) {
        let ring = self.h.ring();
        let Some(e) = &self.enumerator else {
            if c.norm() <= *r2 {
                f(&Scalar::zero(ring));
            }
            return;
        };
        // coordinates of the projection of c onto span K_h
        let g: Vec<Vec<Q>> = self
            .kernel
            .iter()
            .map(|a| self.kernel.iter().map(|b| (&a.conj() * b).re()).collect())
            .collect();
        let rhs: Vec<Q> = self.kernel.iter().map(|a| (&a.conj() * c).re()).collect();
        let inv = zlat::inverse_q(&g).expect("nonsingular");
        let cc: Vec<Q> = inv
            .iter()
            .map(|r| r.iter().zip(&rhs).fold(qi(0), |acc, (a, b)| acc + a * b))
            .collect();
        let proj = coords_to_scalar(ring, &self.kernel, &cc);
        let perp = (c - &proj).norm();
        if perp > *r2 {
            return;
        }
        e.ball(Some(&cc), &(r2 - perp), |x, _| {
            let k = coords_to_scalar_int(ring, &self.kernel, x);
            f(&k);
        });
    }
}

fn coords_to_scalar(ring: Ring, basis: &[Scalar], c: &[Q]) -> Scalar {
    basis
        .iter()
        .zip(c)
        .fold(Scalar::zero(ring), |acc, (b, x)| &acc + &b.scale_q(x))
}

fn coords_to_scalar_int(ring: Ring, basis: &[Scalar], c: &[i128]) -> Scalar {
    basis
        .iter()
        .zip(c)
        .fold(Scalar::zero(ring), |acc, (b, x)| &acc + &b.scale_q(&qi(*x)))
}

/// Outcome of checking the Heisenberg relations on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeisenbergCheck {
    pub composition: bool,
    pub inverse: bool,
    pub commutator: bool,
    pub conjugation: bool,
    pub central: bool,
}

impl HeisenbergCheck {
    pub fn all(&self) -> bool {
        self.composition && self.inverse && self.commutator && self.conjugation && self.central
    }
}

/// Checks the composition, inverse, commutator and conjugation laws for
/// translations T_{x,z}, T_{x′,z′} and a unitary map `s` of Λ.
pub fn verify_heisenberg(
    l: &LorentzLattice,
    x: &[Scalar],
    z: &Scalar,
    x2: &[Scalar],
    z2: &Scalar,
    s: &Mat,
) -> Result<HeisenbergCheck, LorentzError> {
    let ring = l.ring();
    let t1 = l.translation(x, z)?;
    let t2 = l.translation(x2, z2)?;
    let ip21 = l.base().inner_product(x2, x);
    let im = ip21.im();
    let comp = l.translation(&mat::vadd(x, x2), &(&(z + z2) + &im))?;
    let composition = t1.matrix.mul(&t2.matrix) == comp.matrix;
    let tinv = l.translation(&mat::vneg(x), &(-z))?;
    let inverse = t1.matrix.mul(&tinv.matrix).is_identity();
    let t1i = t1.matrix.inverse().unwrap();
    let t2i = t2.matrix.inverse().unwrap();
    let comm = t1.matrix.mul(&t2.matrix).mul(&t1i).mul(&t2i);
    let zero = vec![Scalar::zero(ring); l.n()];
    let two_im = im.scale_q(&qi(2));
    let commutator = comm == l.translation(&zero, &two_im)?.matrix;
    let se = l.extend(s);
    let sinv = se.matrix.inverse().unwrap();
    let conj = se.matrix.mul(&t1.matrix).mul(&sinv);
    let conjugation = conj == l.translation(&s.mul_vec(x), z)?.matrix;
    let c = l.translation(&zero, &two_im)?.matrix;
    let central = c.mul(&t1.matrix) == t1.matrix.mul(&c);
    Ok(HeisenbergCheck { composition, inverse, commutator, conjugation, central })
}

/// The imaginary elements of h𝓡 (re-exported for convenience).
pub fn imaginary_multiples(h: &Scalar) -> rings::ImaginaryLattice {
    rings::imaginary_part_lattice(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heights_and_rho() {
        let l = LorentzLattice::standard(Ring::Eisenstein, 1);
        let e = Ring::Eisenstein;
        let rho = l.rho();
        assert!(l.height(&rho).is_zero());
        let v = LorentzVector::new(vec![Scalar::zero(e)], Scalar::one(e), Scalar::zero(e));
        assert!(l.height(&v).is_one());
        assert!(l.ip(&v, &rho).is_one());
    }

    #[test]
    fn biflection_on_hyperbolic_plane() {
        let l = LorentzLattice::standard(Ring::Gauss, 1);
        let g = Ring::Gauss;
        let r = LorentzVector::new(vec![Scalar::zero(g)], Scalar::one(g), Scalar::one(g));
        let m = l.reflection(&ReflectionSpec { root: r, xi: -Scalar::one(g) }).unwrap();
        let mut expect = Mat::identity(g, 3);
        expect.rows[1][1] = Scalar::zero(g);
        expect.rows[2][2] = Scalar::zero(g);
        expect.rows[1][2] = -Scalar::one(g);
        expect.rows[2][1] = -Scalar::one(g);
        assert_eq!(m.matrix, expect);
        assert!(m.matrix.mul(&m.matrix).is_identity());
    }

    #[test]
    fn translation_fixes_rho() {
        let l = LorentzLattice::standard(Ring::Eisenstein, 2);
        let e = Ring::Eisenstein;
        let x = vec![Scalar::one(e), Scalar::omega(e)];
        let t = l.translation(&x, &Scalar::zero(e)).unwrap();
        assert_eq!(t.apply(&l.rho()), l.rho());
        let v = LorentzVector::new(vec![Scalar::zero(e); 2], Scalar::one(e), Scalar::zero(e));
        let tv = t.apply(&v);
        assert_eq!(tv.lambda, x);
        assert_eq!(tv.nu, Scalar::from_int(e, -1));
        assert!(l.is_isometry(&t.matrix));
        let z = Scalar::theta(e).scale_q(&Q::new(1, 2));
        assert!(l.translation_is_integral(&[Scalar::one(e), Scalar::zero(e)], &z));
    }

    #[test]
    fn root_families() {
        let e = Ring::Eisenstein;
        let l = LorentzLattice::standard(Ring::Eisenstein, 1);
        let r = l.roots_of_height(&Scalar::one(e), &[Scalar::zero(e)], false, &qi(3)).unwrap();
        assert!(!r.is_empty());
        for v in &r {
            assert_eq!(l.norm(v), qi(1));
            assert_eq!(v.nu.re(), Q::new(1, 2));
        }
        let g = Ring::Gauss;
        let lg = LorentzLattice::standard(g, 1);
        assert!(lg.roots_of_height(&Scalar::one(g), &[Scalar::zero(g)], false, &qi(3)).is_err());
        let th = Scalar::theta(e);
        assert!(l.roots_of_height(&th, &[Scalar::one(e)], false, &qi(3)).is_ok());
        assert!(l.roots_of_height(&th, &[Scalar::zero(e)], false, &qi(3)).is_err());
    }
}
