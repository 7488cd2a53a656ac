//! Height reduction of null vectors by reflections in roots of small height.

pub mod census;
pub mod group;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattices::{vec_key, LatticeError};
use crate::lorentz::{Generator, HeightFamily, LorentzError, LorentzLattice, LorentzVector, ReflectionSpec};
use crate::mat::{self, Vector};
use crate::rings::{units, Ring, Scalar};
use crate::zlat::{qi, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("vector is not null")]
    NotNull,
    #[error("vector is not integral")]
    NotIntegral,
    #[error("vector is zero")]
    Zero,
    #[error("vector has zero height")]
    ZeroHeight,
    #[error("iteration cap {0} exceeded")]
    IterationCap(usize),
    #[error("no reducing reflection although the center is strictly inside the radius: {0}")]
    LemmaViolation(String),
    #[error("certificate does not replay: {0}")]
    BadCertificate(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
    #[error("{0}")]
    Other(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootLength {
    Short,
    Long,
}

impl RootLength {
    pub fn norm(self) -> Q {
        match self {
            RootLength::Short => qi(1),
            RootLength::Long => qi(2),
        }
    }
}

/// The radius bound R² of a rule; `Sqrt3` stands for √3 and is compared on squares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RSquared {
    Rational(#[serde(with = "crate::zlat::qser")] Q),
    Sqrt3,
}

impl RSquared {
    /// Compares D² with R².
    pub fn compare(&self, d2: &Q) -> Ordering {
        match self {
            RSquared::Rational(r) => d2.cmp(r),
            RSquared::Sqrt3 => (d2 * d2).cmp(&qi(3)),
        }
    }

    /// A rational upper bound for R².
    pub fn upper(&self) -> Q {
        match self {
            RSquared::Rational(r) => *r,
            RSquared::Sqrt3 => qi(2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExceptionalValue {
    Exact(Scalar),
    /// an irrational value, which rational data can never realize
    Irrational(String),
}

/// One row of the height table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionRule {
    pub ring: Ring,
    pub length: RootLength,
    pub h: Scalar,
    pub r2: RSquared,
    pub exceptional: Vec<ExceptionalValue>,
    /// rows beyond the two proved lemmas
    pub generalized: bool,
}

impl ReductionRule {
    fn exact_values(&self) -> Vec<Scalar> {
        let mut v: Vec<Scalar> = self
            .exceptional
            .iter()
            .filter_map(|e| match e {
                ExceptionalValue::Exact(s) => Some(s.clone()),
                _ => None,
            })
            .collect();
        // orthogonal certificates first
        v.sort_by_key(|s| !s.is_zero());
        v
    }

    pub fn label(&self) -> String {
        format!(
            "{} {:?} h={}",
            self.ring.tag(),
            self.length,
            self.h
        )
        .to_lowercase()
    }
}

/// All rows for a ring, proved rows first, each group by increasing |h|².
pub fn table(ring: Ring) -> Vec<ReductionRule> {
    use ExceptionalValue::*;
    use RootLength::*;
    let r = |x: i128, y: i128| RSquared::Rational(Q::new(x, y));
    let one = Scalar::one(ring);
    let zero = Exact(Scalar::zero(ring));
    let mk = |length, h: Scalar, r2, exceptional, generalized| ReductionRule {
        ring,
        length,
        h,
        r2,
        exceptional,
        generalized,
    };
    let mut rows = match ring {
        Ring::Gauss => {
            let i = Scalar::i(ring);
            let h1 = Scalar::new(ring, [1, 1, 0, 0], 1);
            let h2 = Scalar::from_int(ring, 2);
            vec![
                mk(Long, one.clone(), RSquared::Sqrt3, vec![Irrational("1-√3/2+i/2".into())], false),
                mk(Short, one.clone(), r(1, 1), vec![zero.clone()], false),
                mk(Short, h1.clone(), r(1, 2), vec![zero.clone(), Exact(&h1.inv() * &i)], true),
                mk(Short, h2.clone(), r(1, 4), vec![zero, Exact(&h2.inv() * &i)], true),
            ]
        }
        Ring::Eisenstein => {
            let th = Scalar::theta(ring);
            let wbar = Scalar::omega(ring).conj();
            let h2 = Scalar::from_int(ring, 2);
            let h2t = &h2 * &th;
            vec![
                mk(Short, one.clone(), r(1, 1), vec![zero.clone()], false),
                mk(Short, th.clone(), r(1, 3), vec![zero.clone()], false),
                mk(Long, one.clone(), r(1, 1), vec![Exact(-&wbar)], true),
                mk(Long, th.clone(), r(1, 3), vec![Exact(-(&th.inv() * &wbar))], true),
                mk(Short, h2.clone(), r(1, 4), vec![zero.clone(), Exact(&h2.inv() * &th)], true),
                mk(Short, h2t.clone(), r(1, 12), vec![zero, Exact(&h2t.inv() * &th)], true),
            ]
        }
        Ring::Hurwitz => {
            let h1 = Scalar::new(ring, [1, 1, 0, 0], 1);
            let wbar = Scalar::omega(ring).conj();
            let halves: Vec<ExceptionalValue> = (0..8)
                .map(|m| Exact(Scalar::new(ring, [1, m & 1, (m >> 1) & 1, (m >> 2) & 1], 2)))
                .collect();
            vec![
                mk(Short, one.clone(), r(1, 1), vec![zero.clone()], false),
                mk(Short, h1, r(1, 2), vec![zero, Exact(Scalar::new(ring, [1, 1, 0, 0], 2))], false),
                mk(Long, one.clone(), r(1, 1), vec![Exact(-&wbar)], true),
                mk(Short, Scalar::from_int(ring, 2), r(1, 4), halves, true),
            ]
        }
    };
    rows.sort_by(|a, b| a.generalized.cmp(&b.generalized).then(a.h.norm().cmp(&b.h.norm())));
    rows
}

pub fn proved_rules(ring: Ring) -> Vec<ReductionRule> {
    table(ring).into_iter().filter(|r| !r.generalized).collect()
}

/// Result of searching the roots over one center λh⁻¹ of one rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CenterOutcome {
    /// no root of this height and length lies over the center
    NoRoot,
    Reduced { spec: ReflectionSpec, factor: Q },
    StuckOrthogonal { root: LorentzVector },
    StuckExceptional { root: LorentzVector, value: Scalar },
    /// D² < R² but no reflection reduces the height
    Violation { d2: Q },
    /// D² = R² and no listed value occurs
    Unresolved { d2: Q },
    /// D² > R² and no reflection reduces the height
    OutOfRange { d2: Q },
}

/// Per-rule data reused across searches.
#[derive(Clone, Debug)]
pub struct RuleContext {
    pub rule: ReductionRule,
    family: HeightFamily,
    xis: Vec<Scalar>,
}

impl RuleContext {
    pub fn new(rule: ReductionRule) -> RuleContext {
        let family = HeightFamily::new(&rule.h);
        let xis = match rule.length {
            RootLength::Short => units(rule.ring).into_iter().filter(|u| !u.is_one()).collect(),
            RootLength::Long => vec![-Scalar::one(rule.ring)],
        };
        RuleContext { rule, family, xis }
    }

    /// Some root (λ; h, ν₀) of this rule over λh⁻¹.
    pub fn base_root(&self, l: &LorentzLattice, lambda: &[Scalar]) -> Option<LorentzVector> {
        let rhs = (self.rule.length.norm() - l.base().norm(lambda)) / qi(2);
        let nu = self.family.solve(&rhs)?;
        Some(LorentzVector::new(lambda.to_vec(), self.rule.h.clone(), nu))
    }

    /// Exhaustive search over roots lying over λh⁻¹ for a reflection that
    /// reduces the height of the height-1 null vector `v1`.
    pub fn search_center(
        &self,
        l: &LorentzLattice,
        v1: &LorentzVector,
        lambda: &[Scalar],
    ) -> CenterOutcome {
        let ring = l.ring();
        let h = &self.rule.h;
        let n = self.rule.length.norm();
        let Some(r0) = self.base_root(l, lambda) else {
            return CenterOutcome::NoRoot;
        };
        let hinv = h.inv();
        let d2 = l.base().norm(&mat::vsub(&v1.lambda, &mat::vmul_right(lambda, &hinv)));
        let c0 = l.ip(&r0, v1);
        let bound = qi(4) * n * n / h.norm();
        let mut zs: Vec<(Q, Vec<Q>, Scalar)> = Vec::new();
        self.family.for_each_near(&(-c0.conj()), &bound, |z| {
            let c = &c0 + &z.conj();
            zs.push((c.norm(), z.coords_q(), z.clone()));
        });
        zs.sort();
        let one = Scalar::one(ring);
        let ninv = qi(1) / n;
        for (cn, _, z) in &zs {
            if *cn >= bound {
                continue;
            }
            let c = &c0 + &z.conj();
            for xi in &self.xis {
                let f = &one - &(&(h * &(&one - xi)) * &c).scale_q(&ninv);
                let fn2 = f.norm();
                if fn2 < qi(1) {
                    let root = LorentzVector::new(lambda.to_vec(), h.clone(), &r0.nu + z);
                    return CenterOutcome::Reduced {
                        spec: ReflectionSpec { root, xi: xi.clone() },
                        factor: fn2,
                    };
                }
            }
        }
        match self.rule.r2.compare(&d2) {
            Ordering::Less => CenterOutcome::Violation { d2 },
            Ordering::Greater => CenterOutcome::OutOfRange { d2 },
            Ordering::Equal => {
                for e in self.rule.exact_values() {
                    // need ⟨r′|v₁⟩ = c₀ + z̄ = e
                    let z = (&e - &c0).conj();
                    if z.is_integral() && (&h.conj() * &z).re() == qi(0) {
                        let root = LorentzVector::new(lambda.to_vec(), h.clone(), &r0.nu + &z);
                        return if e.is_zero() {
                            CenterOutcome::StuckOrthogonal { root }
                        } else {
                            CenterOutcome::StuckExceptional { root, value: e }
                        };
                    }
                }
                CenterOutcome::Unresolved { d2 }
            }
        }
    }

    /// Centers λh⁻¹ with D² ≤ R² around ℓ, sorted by (D², λ).
    pub fn centers(&self, l: &LorentzLattice, ell: &[Scalar]) -> Result<Vec<(Q, Vector)>, ReduceError> {
        let h = &self.rule.h;
        let hn = h.norm();
        let target = mat::vmul_right(ell, h);
        let base = l.base();
        let e = base.enumerator()?;
        let c = base.to_real(&target);
        let mut out = Vec::new();
        e.ball(Some(&c), &(self.rule.r2.upper() * hn), |x, v| {
            let d2 = v / hn;
            if self.rule.r2.compare(&d2) != Ordering::Greater {
                out.push((d2, base.from_real(x)));
            }
        });
        out.sort_by_cached_key(|(d, lam)| (*d, vec_key(lam)));
        Ok(out)
    }
}

/// Terminal or intermediate result of one reduction step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Outcome {
    /// v is ρ·u
    AtRho { unit: Scalar },
    Reduced { reflection: ReflectionSpec, rule: String, new_vector: LorentzVector },
    StuckOrthogonal {
        root: LorentzVector,
        rule: String,
        #[serde(with = "crate::zlat::qser")]
        d2: Q,
    },
    StuckExceptional {
        root: LorentzVector,
        rule: String,
        #[serde(with = "crate::zlat::qser")]
        d2: Q,
        value: Scalar,
    },
    /// no center of any rule lies within its radius
    NoNearbyRoot,
}

impl Outcome {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::AtRho { .. } => "AtRho",
            Outcome::Reduced { .. } => "Reduced",
            Outcome::StuckOrthogonal { .. } => "StuckOrthogonal",
            Outcome::StuckExceptional { .. } => "StuckExceptional",
            Outcome::NoNearbyRoot => "NoNearbyRoot",
        }
    }

    pub fn is_stuck(&self) -> bool {
        matches!(
            self,
            Outcome::StuckOrthogonal { .. } | Outcome::StuckExceptional { .. } | Outcome::NoNearbyRoot
        )
    }
}

/// Reduction engine for one Lorentzian lattice.
#[derive(Clone, Debug)]
pub struct Reducer {
    pub lattice: LorentzLattice,
    pub rules: Vec<RuleContext>,
}

impl Reducer {
    /// Uses the proved rows of the table.
    pub fn new(lattice: LorentzLattice) -> Reducer {
        let rules = proved_rules(lattice.ring()).into_iter().map(RuleContext::new).collect();
        Reducer { lattice, rules }
    }

    pub fn with_rules(lattice: LorentzLattice, rules: Vec<ReductionRule>) -> Reducer {
        Reducer { lattice, rules: rules.into_iter().map(RuleContext::new).collect() }
    }

    fn validate(&self, v: &LorentzVector) -> Result<(), ReduceError> {
        self.lattice.check(v)?;
        if v.is_zero() {
            return Err(ReduceError::Zero);
        }
        if !v.is_integral() {
            return Err(ReduceError::NotIntegral);
        }
        if self.lattice.norm(v) != qi(0) {
            return Err(ReduceError::NotNull);
        }
        Ok(())
    }

    /// One step on an integral null vector.
    pub fn step(&self, v: &LorentzVector) -> Result<Outcome, ReduceError> {
        self.validate(v)?;
        let l = &self.lattice;
        if v.mu.is_zero() {
            return Ok(Outcome::AtRho { unit: v.nu.clone() });
        }
        let v1 = v.mul_right(&v.mu.inv());
        let ell = v1.lambda.clone();
        let mut stuck: Vec<Outcome> = Vec::new();
        for ctx in &self.rules {
            for (d2, lambda) in ctx.centers(l, &ell)? {
                match ctx.search_center(l, &v1, &lambda) {
                    CenterOutcome::Reduced { spec, .. } => {
                        let new_vector = l.reflect(&spec, v);
                        return Ok(Outcome::Reduced {
                            reflection: spec,
                            rule: ctx.rule.label(),
                            new_vector,
                        });
                    }
                    CenterOutcome::StuckOrthogonal { root } => {
                        stuck.push(Outcome::StuckOrthogonal { root, rule: ctx.rule.label(), d2 })
                    }
                    CenterOutcome::StuckExceptional { root, value } => stuck.push(
                        Outcome::StuckExceptional { root, rule: ctx.rule.label(), d2, value },
                    ),
                    CenterOutcome::Violation { d2 } | CenterOutcome::Unresolved { d2 }
                        if !ctx.rule.generalized =>
                    {
                        return Err(ReduceError::LemmaViolation(format!(
                            "rule {} at D² = {d2} for v = {v}",
                            ctx.rule.label()
                        )));
                    }
                    _ => {}
                }
            }
        }
        if let Some(o) = stuck.iter().find(|o| matches!(o, Outcome::StuckOrthogonal { .. })) {
            return Ok(o.clone());
        }
        Ok(stuck.into_iter().next().unwrap_or(Outcome::NoNearbyRoot))
    }

    /// Iterates [`Reducer::step`] until v is a multiple of ρ or stuck.
    pub fn reduce(&self, v: &LorentzVector) -> Result<Certificate, ReduceError> {
        self.lattice.check(v)?;
        if v.is_zero() {
            return Err(ReduceError::Zero);
        }
        let ring = self.lattice.ring();
        let content = mat::content(ring, &v.flat());
        let start = v.mul_right(&content.inv());
        self.validate(&start)?;
        let h0 = start.mu.norm();
        let cap = (10 * h0.to_integer().max(1)) as usize;
        let mut cur = start.clone();
        let mut word: Vec<Generator> = Vec::new();
        let mut trace = vec![h0];
        for _ in 0..=cap {
            let out = self.step(&cur)?;
            match out {
                Outcome::Reduced { reflection, new_vector, .. } => {
                    word.insert(
                        0,
                        Generator::Reflection { root: reflection.root, xi: reflection.xi },
                    );
                    trace.push(new_vector.mu.norm());
                    cur = new_vector;
                }
                terminal => {
                    return Ok(Certificate {
                        input: v.clone(),
                        content,
                        word,
                        terminal,
                        output: cur,
                        height_trace: trace,
                    });
                }
            }
        }
        Err(ReduceError::IterationCap(cap))
    }
}

/// Record of a reduction: `word` applied to `input·content⁻¹` gives `output`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub input: LorentzVector,
    pub content: Scalar,
    /// generators, applied last-to-first
    pub word: Vec<Generator>,
    pub terminal: Outcome,
    pub output: LorentzVector,
    /// |ht|² after each step
    #[serde(with = "crate::zlat::qvec")]
    pub height_trace: Vec<Q>,
}

impl Certificate {
    /// Replays the word and checks integrality, descent and the terminal state.
    pub fn verify(&self, l: &LorentzLattice) -> Result<(), ReduceError> {
        let bad = |m: &str| Err(ReduceError::BadCertificate(m.into()));
        let start = self.input.mul_right(&self.content.inv());
        if !start.is_integral() || !l.is_primitive(&start) {
            return bad("normalized input is not primitive");
        }
        let mut cur = start;
        let mut prev = cur.mu.norm();
        if self.height_trace.first() != Some(&prev) {
            return bad("height trace does not start at the input height");
        }
        for (k, g) in self.word.iter().rev().enumerate() {
            if let Generator::Reflection { root, xi } = g {
                let n = l.norm(root);
                let ok = (n == qi(1) || n == qi(-1)) || ((n == qi(2) || n == qi(-2)) && *xi == -Scalar::one(l.ring()));
                if !ok || !root.is_integral() {
                    return bad("reflection does not preserve the lattice");
                }
            }
            let m = l.generator_isometry(g)?;
            if !m.preserves_integrality() {
                return bad("generator is not integral");
            }
            cur = m.apply(&cur);
            let h = cur.mu.norm();
            if h >= prev || self.height_trace.get(k + 1) != Some(&h) {
                return bad("heights do not strictly decrease");
            }
            prev = h;
        }
        if cur != self.output {
            return bad("replayed vector differs from the output");
        }
        match &self.terminal {
            Outcome::AtRho { unit } => {
                if !cur.mu.is_zero() || cur.nu != *unit || unit.norm() != qi(1) {
                    return bad("terminal vector is not a unit multiple of ρ");
                }
            }
            Outcome::StuckOrthogonal { root, .. } => {
                if !l.ip(root, &cur).is_zero() {
                    return bad("certificate root is not orthogonal");
                }
            }
            Outcome::StuckExceptional { root, value, .. } => {
                let v1 = cur.mul_right(&cur.mu.inv());
                if l.ip(root, &v1) != *value {
                    return bad("certificate value mismatch");
                }
            }
            Outcome::Reduced { .. } => return bad("terminal outcome cannot be Reduced"),
            Outcome::NoNearbyRoot => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        assert_eq!(table(Ring::Gauss).len(), 4);
        assert_eq!(table(Ring::Eisenstein).len(), 6);
        assert_eq!(table(Ring::Hurwitz).len(), 4);
        for r in Ring::ALL {
            assert_eq!(proved_rules(r).len(), 2);
        }
        let h = &table(Ring::Hurwitz)[1];
        assert_eq!(h.exact_values()[1], Scalar::new(Ring::Hurwitz, [1, 1, 0, 0], 2));
    }

    #[test]
    fn rho_is_terminal() {
        let l = LorentzLattice::standard(Ring::Eisenstein, 1);
        let red = Reducer::new(l.clone());
        let c = red.reduce(&l.rho()).unwrap();
        assert!(c.word.is_empty());
        assert_eq!(c.terminal.kind(), "AtRho");
        c.verify(&l).unwrap();
    }

    #[test]
    fn reduces_height_one_vector() {
        let e = Ring::Eisenstein;
        let l = LorentzLattice::standard(e, 1);
        let red = Reducer::new(l.clone());
        // (1; 1, -1/2 ...) needs Re ν = −1/2: ν = ω
        let v = LorentzVector::new(vec![Scalar::one(e)], Scalar::one(e), Scalar::omega(e));
        assert_eq!(l.norm(&v), qi(0));
        let c = red.reduce(&v).unwrap();
        assert_eq!(c.terminal.kind(), "AtRho");
        c.verify(&l).unwrap();
    }
}
