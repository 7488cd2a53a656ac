//! Elements of the reflection group built from explicit reflection words:
//! translations, braid moves and scalars of II₁,₁.

use serde::Serialize;

use super::ReduceError;
use crate::lorentz::{Generator, HeightFamily, Isometry, LorentzLattice, LorentzVector, ReflectionSpec};
use crate::mat::{self, Mat, Vector};
use crate::rings::{units, Ring, Scalar};
use crate::zlat::{self, qi};

/// Inverse of a word: reversed, with each generator inverted.
pub fn inverse_word(word: &[Generator]) -> Vec<Generator> {
    word.iter()
        .rev()
        .map(|g| match g {
            Generator::Reflection { root, xi } => Generator::Reflection { root: root.clone(), xi: xi.conj() },
            Generator::Translation { x, z } => Generator::Translation { x: mat::vneg(x), z: -z },
        })
        .collect()
}

/// The matrix of a word (last generator acts first).
pub fn word_isometry(l: &LorentzLattice, word: &[Generator]) -> Result<Isometry, ReduceError> {
    let mut m = Mat::identity(l.ring(), l.dim());
    for g in word {
        m = m.mul(&l.generator_isometry(g)?.matrix);
    }
    Ok(Isometry { matrix: m, word: word.to_vec() })
}

/// Applies a word using the reflection formula directly.
pub fn apply_word(l: &LorentzLattice, word: &[Generator], v: &LorentzVector) -> Result<LorentzVector, ReduceError> {
    let mut w = v.clone();
    for g in word.iter().rev() {
        w = match g {
            Generator::Reflection { root, xi } => {
                l.reflect(&ReflectionSpec { root: root.clone(), xi: xi.clone() }, &w)
            }
            Generator::Translation { x, z } => l.translation(x, z)?.apply(&w),
        };
    }
    Ok(w)
}

/// A translation T_{x,z} together with a word of reflections equal to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationWitness {
    pub x: Vector,
    pub z: Scalar,
    pub word: Vec<Generator>,
}

/// A central translation T_{0,z} with a reflection word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralWitness {
    pub z: Scalar,
    pub word: Vec<Generator>,
}

/// Builds T⁻¹∘R∘T∘R⁻¹ for a reflection R of Λ (extended trivially to
/// II₁,₁) and checks it equals T_{Rx−x, −Im⟨Rx|x⟩}.
pub fn translation_from_reflections(
    l: &LorentzLattice,
    spec: &ReflectionSpec,
    x: &[Scalar],
    z: &Scalar,
) -> Result<TranslationWitness, ReduceError> {
    let ring = l.ring();
    let root = &spec.root;
    if !root.mu.is_zero() || !root.nu.is_zero() {
        return Err(ReduceError::Other("reflection must act on Λ".into()));
    }
    if !l.translation_is_integral(x, z) {
        return Err(ReduceError::Other(format!("T_{{x,z}} does not preserve L for z = {z}")));
    }
    let t = l.translation(x, z)?;
    let r = l.reflection(spec)?;
    let tinv = t.inverse();
    let rinv = r.inverse();
    let product = tinv.matrix.mul(&r.matrix).mul(&t.matrix).mul(&rinv.matrix);
    let zero = Scalar::zero(ring);
    let xv = LorentzVector::new(x.to_vec(), zero.clone(), zero.clone());
    let rx = l.reflect(spec, &xv).lambda;
    let x2 = mat::vsub(&rx, x);
    let z2 = -l.base().inner_product(&rx, x).im();
    let expected = l.translation(&x2, &z2)?;
    if product != expected.matrix {
        return Err(ReduceError::Other("commutator is not the predicted translation".into()));
    }
    let conj_root = tinv.apply(root);
    let word = vec![
        Generator::Reflection { root: conj_root, xi: spec.xi.clone() },
        Generator::Reflection { root: root.clone(), xi: spec.xi.conj() },
    ];
    if word_isometry(l, &word)?.matrix != product {
        return Err(ReduceError::Other("reflection word does not match".into()));
    }
    Ok(TranslationWitness { x: x2, z: z2, word })
}

/// Lemma-style description of the translations certified in the group.
#[derive(Clone, Debug, Serialize)]
pub struct TranslationSubgroupReport {
    /// generators of Λ₀ with reflection words
    pub lambda0: Vec<TranslationWitness>,
    /// index of Λ₀ in Λ (1 when every x ∈ Λ occurs)
    pub lambda0_index: i128,
    /// central translations spanning 𝒮
    pub central: Vec<CentralWitness>,
    /// ℤ-basis of 𝒮
    pub s_basis: Vec<Scalar>,
    /// 𝒮 contains 2Im⟨x|y⟩ for all reported x, y
    pub commutator_closure: bool,
}

/// Certified translation subgroup, with membership tests.
#[derive(Clone, Debug)]
pub struct TranslationGroup {
    pub lattice: LorentzLattice,
    pub generators: Vec<TranslationWitness>,
    pub central: Vec<CentralWitness>,
    gen_rows: Vec<Vec<i128>>,
    lambda_hnf: Vec<Vec<i128>>,
    s_hnf: Vec<Vec<i128>>,
}

fn lambda_coords(l: &LorentzLattice, x: &[Scalar]) -> Vec<i128> {
    let base = l.base();
    base.to_real(x).iter().map(|c| {
        assert!(c.is_integer(), "vector is not in Λ");
        c.to_integer()
    }).collect()
}

impl TranslationGroup {
    /// Collects translations built from reflections in the short roots of Λ
    /// (long roots with biflections over 𝒢), then central translations from
    /// commutators and from pairs with equal translation part.
    pub fn new(l: &LorentzLattice) -> Result<TranslationGroup, ReduceError> {
        let ring = l.ring();
        let base = l.base();
        let (norm, xi, s) = match ring {
            Ring::Gauss => (qi(2), -Scalar::one(ring), -Scalar::one(ring)),
            _ => (qi(1), -Scalar::omega(ring), Scalar::omega(ring)),
        };
        let roots: Vec<Vector> = base.short_vectors(&norm)?.remove(&norm).unwrap_or_default();
        let one = HeightFamily::new(&Scalar::one(ring));
        let mut tg = TranslationGroup {
            lattice: l.clone(),
            generators: vec![],
            central: vec![],
            gen_rows: vec![],
            lambda_hnf: vec![],
            s_hnf: vec![],
        };
        let zero = Scalar::zero(ring);
        let mut all: Vec<TranslationWitness> = Vec::new();
        for r in &roots {
            let x0 = mat::vmul_right(r, &s);
            let half = base.norm(&x0) / qi(2);
            let Some(w) = one.solve(&-half) else { continue };
            let z0 = &w + &Scalar::from_q(ring, half);
            let spec = ReflectionSpec {
                root: LorentzVector::new(r.clone(), zero.clone(), zero.clone()),
                xi: xi.clone(),
            };
            all.push(translation_from_reflections(l, &spec, &x0, &z0)?);
        }
        let mut first_by_x: std::collections::BTreeMap<Vec<i128>, usize> = Default::default();
        for (k, w) in all.iter().enumerate() {
            let c = lambda_coords(l, &w.x);
            if let Some(&j) = first_by_x.get(&c) {
                let other = &all[j];
                let mut word = other.word.clone();
                word.extend(inverse_word(&w.word));
                tg.add_central(&other.z - &w.z, word);
                continue;
            }
            first_by_x.insert(c.clone(), k);
            let mut rows = tg.gen_rows.clone();
            rows.push(c);
            let h = zlat::hnf(&rows);
            if h != tg.lambda_hnf {
                tg.lambda_hnf = h;
                tg.gen_rows = rows;
                tg.generators.push(w.clone());
            }
        }
        let gens = tg.generators.clone();
        for (a, ga) in gens.iter().enumerate() {
            for gb in &gens[a + 1..] {
                let z = base.inner_product(&gb.x, &ga.x).im().scale_q(&qi(2));
                let mut word = ga.word.clone();
                word.extend(gb.word.iter().cloned());
                word.extend(inverse_word(&ga.word));
                word.extend(inverse_word(&gb.word));
                tg.add_central(z, word);
            }
        }
        Ok(tg)
    }

    fn add_central(&mut self, z: Scalar, word: Vec<Generator>) {
        if z.is_zero() {
            return;
        }
        let c = z.zcoords_int().expect("central translations are integral");
        let mut rows = self.s_hnf.clone();
        rows.push(c);
        let h = zlat::hnf(&rows);
        if h != self.s_hnf {
            self.s_hnf = h;
            self.central.push(CentralWitness { z, word });
        }
    }

    pub fn ring(&self) -> Ring {
        self.lattice.ring()
    }

    pub fn lambda0_index(&self) -> i128 {
        let d = self.lattice.base().rank() * self.ring().degree();
        if self.lambda_hnf.len() < d {
            return 0;
        }
        self.lambda_hnf.iter().enumerate().map(|(i, r)| r[i]).product()
    }

    pub fn s_basis(&self) -> Vec<Scalar> {
        self.s_hnf.iter().map(|r| Scalar::from_zcoords_int(self.ring(), r)).collect()
    }

    /// Is z ∈ 𝒮?
    pub fn in_s(&self, z: &Scalar) -> bool {
        match z.zcoords_int() {
            Some(c) => zlat::in_lattice(&self.s_hnf, &c),
            None => false,
        }
    }

    /// A certified z with T_{x,z} in the group, if x ∈ Λ₀.
    pub fn lift(&self, x: &[Scalar]) -> Option<Scalar> {
        let l = &self.lattice;
        let coef = zlat::express(&self.gen_rows, &lambda_coords(l, x))?;
        let ring = self.ring();
        let mut cx = vec![Scalar::zero(ring); l.n()];
        let mut cz = Scalar::zero(ring);
        for (g, c) in self.generators.iter().zip(coef) {
            if c == 0 {
                continue;
            }
            let nx = mat::vmul_right(&g.x, &Scalar::from_int(ring, c));
            let nz = g.z.scale_q(&qi(c));
            // T_{a,b} T_{a′,b′} = T_{a+a′, b+b′+Im⟨a′|a⟩}
            let im = l.base().inner_product(&nx, &cx).im();
            cx = mat::vadd(&cx, &nx);
            cz = &(&cz + &nz) + &im;
        }
        debug_assert_eq!(cx, x.to_vec());
        Some(cz)
    }

    /// Is T_{x,z} in the certified subgroup?
    pub fn contains(&self, x: &[Scalar], z: &Scalar) -> bool {
        match self.lift(x) {
            Some(z0) => self.in_s(&(z - &z0)),
            None => false,
        }
    }

    pub fn report(&self) -> TranslationSubgroupReport {
        let base = self.lattice.base();
        let mut closure = true;
        for a in &self.generators {
            for b in &self.generators {
                let z = base.inner_product(&a.x, &b.x).im().scale_q(&qi(2));
                closure &= self.in_s(&z);
            }
        }
        TranslationSubgroupReport {
            lambda0: self.generators.clone(),
            lambda0_index: self.lambda0_index(),
            central: self.central.clone(),
            s_basis: self.s_basis(),
            commutator_closure: closure,
        }
    }

    /// Checks every stored word against its translation matrix.
    pub fn verify_words(&self) -> Result<bool, ReduceError> {
        let l = &self.lattice;
        let zero = vec![Scalar::zero(self.ring()); l.n()];
        for g in &self.generators {
            if word_isometry(l, &g.word)?.matrix != l.translation(&g.x, &g.z)?.matrix {
                return Ok(false);
            }
        }
        for c in &self.central {
            if word_isometry(l, &c.word)?.matrix != l.translation(&zero, &c.z)?.matrix {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Canonical representative of z modulo 𝒮 for integral imaginary z.
    pub fn reduce_central(&self, z: &Scalar) -> Scalar {
        let c = zlat::reduce_mod(&self.s_hnf, &z.zcoords_int().expect("integral"));
        Scalar::from_zcoords_int(self.ring(), &c)
    }
}

/// Result of checking the braid relation for two short roots.
#[derive(Clone, Debug, Serialize)]
pub struct BraidWitness {
    pub r: LorentzVector,
    pub r2: LorentzVector,
    pub xi: Scalar,
    /// R R′ R = R′ R R′ on the standard basis
    pub relation_holds: bool,
    /// a word g with g·r = r′·unit
    pub word: Vec<Generator>,
    pub unit: Scalar,
}

/// Unit u with a·u = b, if one exists.
pub fn unit_ratio(a: &[Scalar], b: &[Scalar]) -> Option<Scalar> {
    let k = a.iter().position(|x| !x.is_zero())?;
    let u = b[k].left_div(&a[k]);
    (u.norm() == qi(1) && u.is_integral() && mat::vmul_right(a, &u) == b).then_some(u)
}

/// For short roots with |⟨r|r′⟩| = 1, rescale r′ so that ⟨r|r′⟩ = 1; the
/// (−ω)-reflections R, R′ then satisfy the braid relation, so R∘R′ carries r
/// to a unit multiple of r′.
pub fn braid_equivalence(
    l: &LorentzLattice,
    r: &LorentzVector,
    r2: &LorentzVector,
) -> Result<BraidWitness, ReduceError> {
    let ring = l.ring();
    if ring == Ring::Gauss {
        return Err(ReduceError::Other("braid moves need ω".into()));
    }
    if l.norm(r) != qi(1) || l.norm(r2) != qi(1) {
        return Err(ReduceError::Other("braid moves need short roots".into()));
    }
    if l.ip(r, r2).norm() != qi(1) {
        return Err(ReduceError::Other("|⟨r|r′⟩| must be 1".into()));
    }
    let xi = -Scalar::omega(ring);
    // over ℋ the (−ω)-reflections braid once ⟨r|r′⟩ = 1
    let r2n = r2.mul_right(&l.ip(r, r2).inv());
    let ra = l.reflection(&ReflectionSpec { root: r.clone(), xi: xi.clone() })?;
    let rb = l.reflection(&ReflectionSpec { root: r2n, xi: xi.clone() })?;
    let lhs = ra.matrix.mul(&rb.matrix).mul(&ra.matrix);
    let rhs = rb.matrix.mul(&ra.matrix).mul(&rb.matrix);
    let relation_holds = lhs == rhs;
    let candidates = [ra.compose(&rb), inverse_product(&rb, &ra)];
    for g in candidates {
        let img = g.apply(r);
        if let Some(unit) = unit_ratio(&r2.flat(), &img.flat()) {
            return Ok(BraidWitness {
                r: r.clone(),
                r2: r2.clone(),
                xi,
                relation_holds,
                word: g.word,
                unit,
            });
        }
    }
    Err(ReduceError::Other("braid move did not carry r to r′".into()))
}

/// `a⁻¹ ∘ b⁻¹` with its word.
fn inverse_product(a: &Isometry, b: &Isometry) -> Isometry {
    let mut word = inverse_word(&a.word);
    word.extend(inverse_word(&b.word));
    Isometry { matrix: a.inverse().matrix.mul(&b.inverse().matrix), word }
}

/// An element acting trivially on Λ and on II₁,₁ as left multiplication by
/// the matrix [[0, ū], [ū, 0]].
#[derive(Clone, Debug, Serialize)]
pub struct ScalarWitness {
    pub u: Scalar,
    pub word: Vec<Generator>,
    /// block on (μ, ν)
    pub block: [[Scalar; 2]; 2],
    pub trivial_on_base: bool,
    pub block_is_expected: bool,
    /// F² is left multiplication by u on II₁,₁
    pub square_is_scalar: bool,
}

/// F_u = (−u)-reflection in (0;1,−u) after T_{0,−(u−ū)}, for a unit u with Re u = −1/2.
pub fn hyperbolic_scalar_for(l: &LorentzLattice, u: &Scalar) -> Result<ScalarWitness, ReduceError> {
    let ring = l.ring();
    if ring == Ring::Gauss {
        return Err(ReduceError::Other("no cube roots of unity in 𝒢".into()));
    }
    if u.norm() != qi(1) || u.re() != zlat::q(-1, 2) {
        return Err(ReduceError::Other(format!("{u} is not a primitive cube root of unity")));
    }
    let n = l.n();
    let zero = Scalar::zero(ring);
    let one = Scalar::one(ring);
    let z = -(u - &u.conj());
    let word = vec![
        Generator::Reflection {
            root: LorentzVector::new(vec![zero.clone(); n], one.clone(), -u),
            xi: -u,
        },
        Generator::Translation { x: vec![zero.clone(); n], z },
    ];
    let f = word_isometry(l, &word)?;
    let m = &f.matrix;
    let mut trivial_on_base = true;
    for i in 0..n + 2 {
        for j in 0..n + 2 {
            if i < n || j < n {
                let want = if i == j { one.clone() } else { zero.clone() };
                trivial_on_base &= m.rows[i][j] == want;
            }
        }
    }
    let block = [
        [m.rows[n][n].clone(), m.rows[n][n + 1].clone()],
        [m.rows[n + 1][n].clone(), m.rows[n + 1][n + 1].clone()],
    ];
    let ub = u.conj();
    let block_is_expected = block == [[zero.clone(), ub.clone()], [ub.clone(), zero.clone()]];
    let f2 = m.mul(m);
    let mut expect = Mat::identity(ring, n + 2);
    expect.rows[n][n] = &ub * &ub;
    expect.rows[n + 1][n + 1] = &ub * &ub;
    let square_is_scalar = f2 == expect && (&ub * &ub) == *u;
    Ok(ScalarWitness { u: u.clone(), word, block, trivial_on_base, block_is_expected, square_is_scalar })
}

/// The element F = F_ω.
pub fn hyperbolic_scalar_element(l: &LorentzLattice) -> Result<ScalarWitness, ReduceError> {
    hyperbolic_scalar_for(l, &Scalar::omega(l.ring()))
}

/// Units of 𝓡 with real part −1/2.
pub fn cube_roots(ring: Ring) -> Vec<Scalar> {
    units(ring).into_iter().filter(|u| u.re() == zlat::q(-1, 2)).collect()
}

/// Checks J = F³B, where J = −1 on II₁,₁ and B is the biflection in (0;1,1).
pub fn check_f3b(l: &LorentzLattice, f: &ScalarWitness) -> Result<bool, ReduceError> {
    let ring = l.ring();
    let n = l.n();
    let fm = word_isometry(l, &f.word)?.matrix;
    let b = l.reflection(&ReflectionSpec {
        root: LorentzVector::new(vec![Scalar::zero(ring); n], Scalar::one(ring), Scalar::one(ring)),
        xi: -Scalar::one(ring),
    })?;
    let prod = fm.mul(&fm).mul(&fm).mul(&b.matrix);
    let mut j = Mat::identity(ring, n + 2);
    j.rows[n][n] = -Scalar::one(ring);
    j.rows[n + 1][n + 1] = -Scalar::one(ring);
    Ok(prod == j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_translations_are_all_there() {
        let l = LorentzLattice::standard(Ring::Eisenstein, 2);
        let tg = TranslationGroup::new(&l).unwrap();
        assert_eq!(tg.lambda0_index(), 1);
        assert!(tg.verify_words().unwrap());
        let th = Scalar::theta(Ring::Eisenstein);
        assert!(tg.in_s(&th));
        assert_eq!(tg.s_basis().len(), 1);
        assert!(tg.report().commutator_closure);
    }

    #[test]
    fn hurwitz_central_translations() {
        let h = Ring::Hurwitz;
        let l = LorentzLattice::standard(h, 1);
        let tg = TranslationGroup::new(&l).unwrap();
        assert_eq!(tg.lambda0_index(), 1);
        assert!(tg.verify_words().unwrap());
        assert!(tg.in_s(&Scalar::new(h, [0, 2, 0, 0], 1)));
        assert!(tg.in_s(&Scalar::new(h, [0, 1, 1, 1], 1)));
        assert!(!tg.in_s(&Scalar::i(h)));
    }

    #[test]
    fn scalar_elements() {
        for ring in [Ring::Eisenstein, Ring::Hurwitz] {
            let l = LorentzLattice::standard(ring, 1);
            for u in cube_roots(ring) {
                let f = hyperbolic_scalar_for(&l, &u).unwrap();
                assert!(f.trivial_on_base && f.block_is_expected && f.square_is_scalar, "{ring:?} {u}");
            }
            let f = hyperbolic_scalar_element(&l).unwrap();
            assert!(check_f3b(&l, &f).unwrap());
        }
    }

    #[test]
    fn braid_on_paper_roots() {
        let e = Ring::Eisenstein;
        let l = LorentzLattice::standard(e, 3);
        let z = Scalar::zero(e);
        let o = Scalar::one(e);
        let r1 = LorentzVector::new(vec![z.clone(); 3], o.clone(), -Scalar::omega(e));
        let r2 = LorentzVector::new(vec![z.clone(), z.clone(), o.clone()], z.clone(), o.clone());
        let r3 = LorentzVector::new(vec![z.clone(), z.clone(), o.clone()], z.clone(), z.clone());
        for (a, b) in [(&r1, &r2), (&r2, &r3)] {
            let w = braid_equivalence(&l, a, b).unwrap();
            assert!(w.relation_holds);
            assert_eq!(apply_word(&l, &w.word, a).unwrap(), b.mul_right(&w.unit));
        }
        let orth = LorentzVector::new(vec![o.clone(), z.clone(), z.clone()], z.clone(), z.clone());
        assert!(braid_equivalence(&l, &r3, &orth).is_err());
    }
}
