//! Orbit census of primitive null vectors at bounded height.
//!
//! Vectors are enumerated up to the certified translations, up to right
//! unit scalars and up to the certified left unit scalars of II₁,₁. Every
//! representative is reduced to a multiple ρ·t of ρ with an explicit word;
//! stuck vectors of 𝓡ⁿ ⊕ II₁,₁ are moved into 𝓡ⁿ⁻¹ ⊕ II₁,₁ by braid moves.
//! Classes are the orbits of the unit group under the certified maps
//! ρ·t ↦ ρ·wt.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::group::{
    apply_word, braid_equivalence, cube_roots, hyperbolic_scalar_for, TranslationGroup,
    TranslationSubgroupReport,
};
use super::{Outcome, ReduceError, Reducer, RootLength, RuleContext};
use crate::enumerate::Enumerator;
use crate::lattices::HermitianLattice;
use crate::lorentz::{Generator, HeightFamily, LorentzLattice, LorentzVector, ReflectionSpec};
use crate::mat::{self, Vector};
use crate::rings::{ideal_hnf, units, Ring, Scalar};
use crate::zlat::{self, qi, Q};

#[derive(Clone, Debug)]
pub struct CensusOptions {
    /// refuse to enumerate more representatives than this
    pub max_vectors: usize,
    /// random walks used to search for unit witnesses
    pub witness_walks: usize,
    pub seed: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { max_vectors: 2_000_000, witness_walks: 400, seed: 0 }
    }
}

/// A word g with g·ρ = ρ·unit.
#[derive(Clone, Debug, Serialize)]
pub struct UnitWitness {
    pub unit: Scalar,
    pub word: Vec<Generator>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusClass {
    /// ρ·t for the class member with the smallest serialized form
    pub representative: LorentzVector,
    pub units: Vec<Scalar>,
    /// enumerated representatives reducing into this class
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub ring: Ring,
    pub rank: usize,
    pub lattice: String,
    #[serde(with = "crate::zlat::qser")]
    pub bound: Q,
    pub heights: usize,
    pub representatives: usize,
    /// representatives that needed braid moves
    pub braided: usize,
    pub max_word_len: usize,
    pub classes: Vec<CensusClass>,
    /// left unit scalars of II₁,₁ certified in the group
    pub left_units: Vec<Scalar>,
    pub unit_witnesses: Vec<UnitWitness>,
    pub translations: TranslationSubgroupReport,
}

impl CensusReport {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

struct Level {
    lattice: LorentzLattice,
    reducer: Reducer,
    tg: TranslationGroup,
    standard: bool,
}

/// Reduction to ρ·t with braid moves into smaller standard lattices.
pub struct FullReducer {
    levels: Vec<Option<Level>>,
    ring: Ring,
}

fn is_standard(l: &HermitianLattice) -> bool {
    l.gram().is_identity()
}

impl FullReducer {
    pub fn new(l: &LorentzLattice) -> Result<FullReducer, ReduceError> {
        let n = l.n();
        let mut levels: Vec<Option<Level>> = (0..=n).map(|_| None).collect();
        let standard = is_standard(l.base());
        levels[n] = Some(Level {
            lattice: l.clone(),
            reducer: Reducer::new(l.clone()),
            tg: TranslationGroup::new(l)?,
            standard,
        });
        if standard {
            for k in 1..n {
                let sub = LorentzLattice::standard(l.ring(), k);
                levels[k] = Some(Level {
                    reducer: Reducer::new(sub.clone()),
                    tg: TranslationGroup::new(&sub)?,
                    lattice: sub,
                    standard: true,
                });
            }
        }
        Ok(FullReducer { levels, ring: l.ring() })
    }

    fn top(&self) -> &Level {
        self.levels.last().unwrap().as_ref().unwrap()
    }

    pub fn translations(&self) -> &TranslationGroup {
        &self.top().tg
    }

    /// A word carrying the primitive null vector v to ρ·t, with t and the
    /// number of braid descents used.
    pub fn resolve(&self, v: &LorentzVector) -> Result<(Vec<Generator>, Scalar, usize), ReduceError> {
        self.resolve_at(self.levels.len() - 1, v)
    }

    fn resolve_at(&self, n: usize, v: &LorentzVector) -> Result<(Vec<Generator>, Scalar, usize), ReduceError> {
        let level = self.levels[n]
            .as_ref()
            .ok_or_else(|| ReduceError::Other(format!("no level of rank {n}")))?;
        let l = &level.lattice;
        let cert = level.reducer.reduce(v)?;
        let mut word = cert.word.clone();
        match &cert.terminal {
            Outcome::AtRho { .. } => {
                let out = apply_word(l, &word, v)?;
                Ok((word, out.nu, 0))
            }
            Outcome::StuckOrthogonal { root, .. } if root.mu.is_one() && level.standard && n >= 2 => {
                let ring = self.ring;
                let zero = Scalar::zero(ring);
                let one = Scalar::one(ring);
                let x = mat::vneg(&root.lambda);
                let z = level
                    .tg
                    .lift(&x)
                    .ok_or_else(|| ReduceError::Other("translation not certified".into()))?;
                let t = Generator::Translation { x, z };
                let r1 = apply_word(l, std::slice::from_ref(&t), root)?;
                let mut e = vec![zero.clone(); n];
                e[n - 1] = one.clone();
                let r2 = LorentzVector::new(e.clone(), zero.clone(), one.clone());
                let r3 = LorentzVector::new(e, zero.clone(), zero.clone());
                let b1 = braid_equivalence(l, &r1, &r2)?;
                let b2 = braid_equivalence(l, &r2, &r3)?;
                if !b1.relation_holds || !b2.relation_holds {
                    return Err(ReduceError::Other("braid relation fails".into()));
                }
                let mut moves = b2.word.clone();
                moves.extend(b1.word.iter().cloned());
                moves.push(t);
                let w = apply_word(l, &moves, &cert.output)?;
                if !w.lambda[n - 1].is_zero() {
                    return Err(ReduceError::Other("braid moves did not reach r₃^⊥".into()));
                }
                let sub = LorentzVector::new(w.lambda[..n - 1].to_vec(), w.mu.clone(), w.nu.clone());
                let (subword, unit, depth) = self.resolve_at(n - 1, &sub)?;
                let mut full: Vec<Generator> = subword.iter().map(lift_generator).collect();
                full.extend(moves);
                full.append(&mut word);
                Ok((full, unit, depth + 1))
            }
            other => Err(ReduceError::Other(format!(
                "unresolved terminal {} for {v}",
                other.kind()
            ))),
        }
    }
}

/// Embeds a generator of 𝓡ⁿ⁻¹ ⊕ II₁,₁ into 𝓡ⁿ ⊕ II₁,₁.
fn lift_generator(g: &Generator) -> Generator {
    let pad = |v: &[Scalar], ring: Ring| {
        let mut w = v.to_vec();
        w.push(Scalar::zero(ring));
        w
    };
    match g {
        Generator::Reflection { root, xi } => Generator::Reflection {
            root: LorentzVector::new(pad(&root.lambda, root.ring()), root.mu.clone(), root.nu.clone()),
            xi: xi.clone(),
        },
        Generator::Translation { x, z } => Generator::Translation { x: pad(x, z.ring()), z: z.clone() },
    }
}

/// All nonzero μ ∈ 𝓡 with |μ|² ≤ bound, in canonical order.
pub fn ring_elements(ring: Ring, bound: &Q) -> Vec<Scalar> {
    let e = Enumerator::new(&ring.trace_gram()).expect("definite");
    let mut out = Vec::new();
    e.ball(None, bound, |x, _| {
        if x.iter().any(|c| *c != 0) {
            out.push(Scalar::from_zcoords_int(ring, x));
        }
    });
    out.sort_by_cached_key(|s| (s.norm(), s.clone()));
    out
}

fn unit_closure(ring: Ring, gens: &[Scalar]) -> Vec<Scalar> {
    let mut set = vec![Scalar::one(ring)];
    let mut k = 0;
    while k < set.len() {
        for g in gens {
            let p = g * &set[k];
            if !set.contains(&p) {
                set.push(p);
            }
        }
        k += 1;
    }
    set.sort();
    set
}

fn serialized(v: &LorentzVector) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Partitions the primitive null vectors with 0 < |ht|² ≤ `bound`
/// (together with the multiples of ρ) into classes under the certified group.
pub fn orbit_census(l: &LorentzLattice, bound: &Q, opts: &CensusOptions) -> Result<CensusReport, ReduceError> {
    let ring = l.ring();
    let n = l.n();
    if n > 3 {
        return Err(ReduceError::Other("census is limited to rank ≤ 3".into()));
    }
    let fr = FullReducer::new(l)?;
    let tg = fr.translations();
    if tg.lambda0_index() != 1 {
        return Err(ReduceError::Other("certified translations do not cover Λ".into()));
    }
    // left scalars F_u² = u on II₁,₁
    let mut left_gens = Vec::new();
    if ring != Ring::Gauss {
        for u in cube_roots(ring) {
            let f = hyperbolic_scalar_for(l, &u)?;
            if f.trivial_on_base && f.block_is_expected && f.square_is_scalar {
                left_gens.push(u);
            }
        }
    }
    let left_units = unit_closure(ring, &left_gens);
    let all_units = units(ring);

    // canonical heights up to left and right units
    let mut heights = Vec::new();
    for mu in ring_elements(ring, bound) {
        let canon = left_units
            .iter()
            .flat_map(|a| all_units.iter().map(|b| &(a * &mu) * b).collect::<Vec<_>>())
            .min()
            .unwrap();
        if canon == mu {
            heights.push(mu);
        }
    }

    struct HeightData {
        mu: Scalar,
        fam: HeightFamily,
        lambda_reps: Vec<Scalar>,
        k_basis: Vec<Scalar>,
        k_reps: Vec<Vec<i128>>,
    }
    let mut data = Vec::new();
    let mut total: usize = 0;
    for mu in &heights {
        let h = ideal_hnf(mu);
        let lambda_reps: Vec<Scalar> =
            zlat::box_representatives(&h).iter().map(|c| Scalar::from_zcoords_int(ring, c)).collect();
        let fam = HeightFamily::new(mu);
        let k_basis = fam.kernel.clone();
        let krows: Vec<Vec<i128>> = k_basis.iter().map(|k| k.zcoords_int().unwrap()).collect();
        let srows: Vec<Vec<i128>> = tg
            .s_basis()
            .iter()
            .map(|s| {
                zlat::express(&krows, &(s * mu).zcoords_int().unwrap())
                    .expect("𝒮μ lies in K_μ")
            })
            .collect();
        let sh = zlat::hnf(&srows);
        if sh.len() != k_basis.len() {
            return Err(ReduceError::Other("central translations have infinite index".into()));
        }
        let k_reps = zlat::box_representatives(&sh);
        let count = lambda_reps.len().pow(n as u32) * k_reps.len();
        total = total.saturating_add(count);
        data.push(HeightData { mu: mu.clone(), fam, lambda_reps, k_basis, k_reps });
    }
    if total > opts.max_vectors {
        return Err(ReduceError::Other(format!(
            "bound too large: {total} candidates exceed the limit {}",
            opts.max_vectors
        )));
    }

    let mut terminals: BTreeMap<Scalar, usize> = BTreeMap::new();
    terminals.insert(Scalar::one(ring), 1);
    let mut representatives = 1;
    let mut braided = 0;
    let mut max_word_len = 0;
    for d in &data {
        let mut idx = vec![0usize; n];
        loop {
            let lambda: Vector = idx.iter().map(|&i| d.lambda_reps[i].clone()).collect();
            let rhs = -l.base().norm(&lambda) / qi(2);
            if let Some(nu0) = d.fam.solve(&rhs) {
                for kr in &d.k_reps {
                    let k = d
                        .k_basis
                        .iter()
                        .zip(kr)
                        .fold(Scalar::zero(ring), |acc, (b, c)| &acc + &b.scale_q(&qi(*c)));
                    let v = LorentzVector::new(lambda.clone(), d.mu.clone(), &nu0 + &k);
                    if !l.is_primitive(&v) {
                        continue;
                    }
                    let (word, t, depth) = fr.resolve(&v)?;
                    let out = apply_word(l, &word, &v)?;
                    if out != l.rho().mul_right(&t) {
                        return Err(ReduceError::BadCertificate(format!("census word for {v}")));
                    }
                    representatives += 1;
                    braided += (depth > 0) as usize;
                    max_word_len = max_word_len.max(word.len());
                    *terminals.entry(t).or_default() += 1;
                }
            }
            // next λ
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < d.lambda_reps.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }

    let mut gens: Vec<Scalar> = left_gens.clone();
    let mut witnesses = Vec::new();
    let classes_of = |gens: &[Scalar]| -> Vec<Vec<Scalar>> {
        let mut seen: Vec<Scalar> = Vec::new();
        let mut out = Vec::new();
        for u in &all_units {
            if seen.contains(u) {
                continue;
            }
            let orbit: Vec<Scalar> = unit_closure(ring, gens).iter().map(|g| g * u).collect();
            seen.extend(orbit.iter().cloned());
            let mut orbit = orbit;
            orbit.sort();
            orbit.dedup();
            out.push(orbit);
        }
        out
    };
    if classes_of(&gens).len() > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let rule = super::proved_rules(ring)
            .into_iter()
            .find(|r| r.h.is_one() && r.length == RootLength::Short)
            .expect("height-one short row");
        let fam1 = RuleContext::new(rule);
        let xis: Vec<Scalar> = all_units.iter().filter(|u| !u.is_one()).cloned().collect();
        for _ in 0..opts.witness_walks {
            let steps = rng.gen_range(1..=3);
            let mut word: Vec<Generator> = Vec::new();
            let mut v = l.rho();
            for _ in 0..steps {
                let lambda: Vector = (0..n)
                    .map(|_| {
                        let c: Vec<i128> = (0..ring.degree()).map(|_| rng.gen_range(-1..=1)).collect();
                        Scalar::from_zcoords_int(ring, &c)
                    })
                    .collect();
                let Some(root) = fam1.base_root(l, &lambda) else { continue };
                let xi = xis[rng.gen_range(0..xis.len())].clone();
                let spec = ReflectionSpec { root, xi };
                v = l.reflect(&spec, &v);
                word.insert(0, Generator::Reflection { root: spec.root, xi: spec.xi });
            }
            if v.mu.is_zero() {
                continue;
            }
            let (rw, t, _) = fr.resolve(&v)?;
            let before = classes_of(&gens).len();
            let mut trial = gens.clone();
            trial.push(t.clone());
            if classes_of(&trial).len() < before {
                let mut full = rw;
                full.extend(word);
                if apply_word(l, &full, &l.rho())? != l.rho().mul_right(&t) {
                    return Err(ReduceError::BadCertificate("unit witness".into()));
                }
                gens = trial;
                witnesses.push(UnitWitness { unit: t, word: full });
                if classes_of(&gens).len() == 1 {
                    break;
                }
            }
        }
    }

    let mut classes = Vec::new();
    for orbit in classes_of(&gens) {
        let count: usize = orbit.iter().map(|u| terminals.get(u).copied().unwrap_or(0)).sum();
        let representative = orbit
            .iter()
            .map(|u| l.rho().mul_right(u))
            .min_by_key(serialized)
            .unwrap();
        classes.push(CensusClass { representative, units: orbit, count });
    }
    classes.sort_by_key(|c| serialized(&c.representative));
    Ok(CensusReport {
        ring,
        rank: n,
        lattice: l.base().name().unwrap_or("").to_string(),
        bound: *bound,
        heights: heights.len(),
        representatives,
        braided,
        max_word_len,
        classes,
        left_units,
        unit_witnesses: witnesses,
        translations: tg.report(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_rank_one_small_bound() {
        let l = LorentzLattice::standard(Ring::Eisenstein, 1);
        let r = orbit_census(&l, &qi(4), &CensusOptions::default()).unwrap();
        assert_eq!(r.class_count(), 2);
        assert_eq!(r.left_units.len(), 3);
    }
}
