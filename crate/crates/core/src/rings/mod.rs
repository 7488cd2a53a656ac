//! The orders 𝒢 = ℤ[i], ℰ = ℤ[ω] and the Hurwitz integers ℋ, with exact
//! arithmetic in their rational algebras.

mod scalar;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use scalar::Scalar;

use crate::zlat::{self, qi, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "G")]
    Gauss,
    #[serde(rename = "E")]
    Eisenstein,
    #[serde(rename = "H")]
    Hurwitz,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("ring mismatch: {0:?} vs {1:?}")]
    Mismatch(Ring, Ring),
    #[error("invalid coordinates for {0:?}: {1:?}")]
    BadCoords(Ring, Vec<i64>),
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("unsupported height {0}")]
    UnsupportedHeight(String),
    #[error("not an integral element: {0}")]
    NotIntegral(String),
}

impl Ring {
    pub const ALL: [Ring; 3] = [Ring::Gauss, Ring::Eisenstein, Ring::Hurwitz];

    /// Rank of the order as a ℤ-module.
    pub fn degree(self) -> usize {
        match self {
            Ring::Hurwitz => 4,
            _ => 2,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Ring::Gauss => "G",
            Ring::Eisenstein => "E",
            Ring::Hurwitz => "H",
        }
    }

    pub fn from_tag(s: &str) -> Option<Ring> {
        match s {
            "G" => Some(Ring::Gauss),
            "E" => Some(Ring::Eisenstein),
            "H" => Some(Ring::Hurwitz),
            _ => None,
        }
    }

    /// ℤ-basis {1,i}, {1,ω} or {1,i,j,(1+i+j+k)/2}.
    pub fn zbasis(self) -> Vec<Scalar> {
        match self {
            Ring::Gauss => vec![Scalar::one(self), Scalar::i(self)],
            Ring::Eisenstein => vec![Scalar::one(self), Scalar::omega(self)],
            Ring::Hurwitz => vec![
                Scalar::one(self),
                Scalar::i(self),
                Scalar::j(),
                Scalar::new(self, [1, 1, 1, 1], 2),
            ],
        }
    }

    /// Gram matrix of the trace form Re(x̄y) on the ℤ-basis.
    pub fn trace_gram(self) -> Vec<Vec<Q>> {
        let b = self.zbasis();
        b.iter()
            .map(|x| b.iter().map(|y| (&x.conj() * y).re()).collect())
            .collect()
    }

    pub fn units(self) -> Vec<Scalar> {
        units(self)
    }
}

/// Exact element of one of the three orders.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement(Scalar);

impl RingElement {
    /// Builds from public coordinates: (a,b) for 𝒢/ℰ, doubled (2a,2b,2c,2d) for ℋ.
    pub fn new(ring: Ring, coords: &[i64]) -> Result<RingElement, RingError> {
        let bad = || RingError::BadCoords(ring, coords.to_vec());
        if coords.len() != ring.degree() {
            return Err(bad());
        }
        if ring == Ring::Hurwitz {
            let p = coords[0].rem_euclid(2);
            if coords.iter().any(|c| c.rem_euclid(2) != p) {
                return Err(bad());
            }
        }
        let c: Vec<Q> = coords.iter().map(|x| qi(*x as i128)).collect();
        Ok(RingElement(Scalar::from_coords_q(ring, &c)))
    }

    pub fn from_scalar(s: Scalar) -> Result<RingElement, RingError> {
        if s.is_integral() {
            Ok(RingElement(s))
        } else {
            Err(RingError::NotIntegral(s.to_string()))
        }
    }

    pub fn scalar(&self) -> &Scalar {
        &self.0
    }

    pub fn into_scalar(self) -> Scalar {
        self.0
    }

    pub fn ring(&self) -> Ring {
        self.0.ring()
    }

    pub fn coords(&self) -> Vec<i64> {
        self.0.coords_q().iter().map(|x| x.to_integer() as i64).collect()
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        if self.ring() != other.ring() {
            return Err(RingError::Mismatch(self.ring(), other.ring()));
        }
        Ok(RingElement(&self.0 * &other.0))
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        if self.ring() != other.ring() {
            return Err(RingError::Mismatch(self.ring(), other.ring()));
        }
        Ok(RingElement(&self.0 + &other.0))
    }

    pub fn conj(&self) -> RingElement {
        RingElement(self.0.conj())
    }

    pub fn norm(&self) -> Q {
        self.0.norm()
    }

    pub fn re_im(&self) -> (Scalar, Scalar) {
        (self.0.re_scalar(), self.0.im())
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == qi(1)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// JSON form `{"ring": "G"|"E"|"H", "coords": [ints]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RingElementJson {
    pub ring: Ring,
    pub coords: Vec<i64>,
}

impl Serialize for RingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RingElementJson { ring: self.ring(), coords: self.coords() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = RingElementJson::deserialize(d)?;
        RingElement::new(j.ring, &j.coords).map_err(serde::de::Error::custom)
    }
}

/// JSON coordinate: an integer, or a string "p/q" for non-integers.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(untagged)]
pub enum Coord {
    Int(i64),
    Frac(String),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct ScalarJson {
    ring: Ring,
    coords: Vec<Coord>,
}

/// Scalars serialize like ring elements; rational coordinates become strings.
impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coords = self
            .coords_q()
            .iter()
            .map(|c| {
                if c.is_integer() {
                    Coord::Int(c.to_integer() as i64)
                } else {
                    Coord::Frac(c.to_string())
                }
            })
            .collect();
        ScalarJson { ring: self.ring(), coords }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = ScalarJson::deserialize(d)?;
        if j.coords.len() != j.ring.degree() {
            return Err(D::Error::custom(format!("expected {} coordinates", j.ring.degree())));
        }
        let mut c = Vec::new();
        for x in &j.coords {
            c.push(match x {
                Coord::Int(n) => qi(*n as i128),
                Coord::Frac(s) => s.parse::<Q>().map_err(|_| D::Error::custom(format!("bad rational {s:?}")))?,
            });
        }
        Ok(Scalar::from_coords_q(j.ring, &c))
    }
}

/// All units, in canonical order.
pub fn units(ring: Ring) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = match ring {
        Ring::Gauss => (0..4)
            .map(|k| {
                let t = [[1, 0], [0, 1], [-1, 0], [0, -1]][k];
                Scalar::new(ring, [t[0], t[1], 0, 0], 1)
            })
            .collect(),
        Ring::Eisenstein => {
            let w = Scalar::omega(ring);
            let mut u = vec![Scalar::one(ring)];
            for _ in 0..5 {
                let last = u.last().unwrap().clone();
                u.push(&last * &(-&w));
            }
            u
        }
        Ring::Hurwitz => {
            let mut u = Vec::new();
            for k in 0..4 {
                for s in [1, -1] {
                    let mut num = [0; 4];
                    num[k] = s;
                    u.push(Scalar::new(ring, num, 1));
                }
            }
            for m in 0..16 {
                let num = [0, 1, 2, 3].map(|b| if m >> b & 1 == 1 { -1 } else { 1 });
                u.push(Scalar::new(ring, num, 2));
            }
            u
        }
    };
    out.sort();
    out
}

/// Embedding ℰ → ℋ with ω ↦ (−1+i+j+k)/2.
pub fn embed_eisenstein_in_hurwitz(x: &RingElement) -> Result<RingElement, RingError> {
    if x.ring() != Ring::Eisenstein {
        return Err(RingError::Mismatch(x.ring(), Ring::Eisenstein));
    }
    Ok(RingElement(x.0.embed_in_hurwitz()))
}

/// Integer echelon basis (in ℤ-coordinates) of the left ideal 𝓡m.
pub fn ideal_hnf(m: &Scalar) -> Vec<Vec<i128>> {
    let ring = m.ring();
    let gens: Vec<Vec<i128>> = ring
        .zbasis()
        .iter()
        .map(|b| (b * m).zcoords_int().expect("integral modulus"))
        .collect();
    zlat::hnf(&gens)
}

/// Canonical residue of `x` modulo 𝓡m as a box representative.
pub fn residue_key(h: &[Vec<i128>], x: &Scalar) -> Vec<i128> {
    zlat::reduce_mod(h, &x.zcoords_int().expect("integral element"))
}

/// Representatives of the cosets x + 𝓡m.
///
/// Each representative is the minimal element of its class in the order
/// (norm, number of nonzero coordinates, coordinates).
pub fn residues_mod(ring: Ring, m: &RingElement) -> Result<Vec<RingElement>, RingError> {
    if m.ring() != ring {
        return Err(RingError::Mismatch(m.ring(), ring));
    }
    if m.scalar().is_zero() {
        return Err(RingError::ZeroModulus);
    }
    let h = ideal_hnf(m.scalar());
    let index: i128 = h.iter().enumerate().map(|(i, r)| r[i]).product();
    let mut best: std::collections::BTreeMap<Vec<i128>, (Q, usize, usize, Scalar)> =
        Default::default();
    let mut radius = 1i128;
    loop {
        let d = ring.degree();
        let mut z = vec![-radius; d];
        loop {
            let s = Scalar::from_zcoords_int(ring, &z);
            let key = residue_key(&h, &s);
            let cand = rep_key(&s);
            match best.get(&key) {
                Some(b) if *b <= cand => {}
                _ => {
                    best.insert(key, cand);
                }
            }
            let mut k = 0;
            while k < d {
                z[k] += 1;
                if z[k] > radius {
                    z[k] = -radius;
                    k += 1;
                } else {
                    break;
                }
            }
            if k == d {
                break;
            }
        }
        let max_norm = best.values().map(|b| b.0).max().unwrap();
        // every element of norm ≤ max_norm lies in the box once radius² ≥ 4·max_norm
        if best.len() as i128 == index && qi(radius * radius) >= max_norm * qi(4) {
            break;
        }
        radius += 1;
    }
    let mut reps: Vec<_> = best.into_values().collect();
    reps.sort();
    Ok(reps.into_iter().map(|b| RingElement(b.3)).collect())
}

fn rep_key(s: &Scalar) -> (Q, usize, usize, Scalar) {
    let c = s.coords_q();
    let nz = c.iter().filter(|x| **x != qi(0)).count();
    let last = c.iter().rposition(|x| *x != qi(0)).unwrap_or(0);
    (s.norm(), nz, last, s.clone())
}

/// The set Im(h𝓡) of imaginary parts of multiples of `h`, as a ℤ-lattice in
/// Im𝕂 given by a basis.
#[derive(Clone, Debug)]
pub struct ImaginaryLattice {
    pub ring: Ring,
    pub basis: Vec<Scalar>,
}

impl ImaginaryLattice {
    /// Does `z` (imaginary) lie in the lattice?
    pub fn contains(&self, z: &Scalar) -> bool {
        if !z.re().is_integer() || z.re() != qi(0) {
            return false;
        }
        let target = im_coords(z);
        let rows: Vec<Vec<Q>> = self.basis.iter().map(im_coords).collect();
        solve_integer_combination(&rows, &target).is_some()
    }
}

/// Coordinates of an imaginary element: (b) for 𝒢, (b) with z = bθ/2 for ℰ,
/// (b,c,d) for ℋ.
pub fn im_coords(z: &Scalar) -> Vec<Q> {
    let n = z.num();
    let den = z.den();
    match z.ring() {
        Ring::Gauss => vec![Q::new(n[1], den)],
        Ring::Eisenstein => vec![Q::new(n[1], den)],
        Ring::Hurwitz => vec![Q::new(n[1], den), Q::new(n[2], den), Q::new(n[3], den)],
    }
}

fn solve_integer_combination(rows: &[Vec<Q>], target: &[Q]) -> Option<Vec<i128>> {
    let den = zlat::lcm_denoms(rows.iter().flatten().chain(target.iter()));
    let scale = |v: &Vec<Q>| -> Vec<i128> { v.iter().map(|x| (x * qi(den)).to_integer()).collect() };
    let int_rows: Vec<Vec<i128>> = rows.iter().map(scale).collect();
    let h = zlat::hnf(&int_rows);
    let t = scale(&target.to_vec());
    if zlat::in_lattice(&h, &t) {
        Some(vec![])
    } else {
        None
    }
}

pub fn imaginary_sublattice(ring: Ring, h: &RingElement) -> Result<ImaginaryLattice, RingError> {
    if h.ring() != ring {
        return Err(RingError::Mismatch(h.ring(), ring));
    }
    if h.scalar().is_zero() {
        return Err(RingError::UnsupportedHeight(h.to_string()));
    }
    Ok(imaginary_part_lattice(h.scalar()))
}

/// Basis of the imaginary elements of h𝓡 for any nonzero integral `h`.
pub fn imaginary_part_lattice(h: &Scalar) -> ImaginaryLattice {
    let ring = h.ring();
    let gens: Vec<Scalar> = ring.zbasis().iter().map(|b| h * b).collect();
    // real part of Σ c_t g_t, scaled to integers
    let re: Vec<Q> = gens.iter().map(|g| g.re()).collect();
    let den = zlat::lcm_denoms(re.iter());
    let row: Vec<i128> = re.iter().map(|x| (x * qi(den)).to_integer()).collect();
    let ker = zlat::kernel(&[row], gens.len());
    let elems: Vec<Vec<Q>> = ker
        .iter()
        .map(|c| {
            let mut acc = Scalar::zero(ring);
            for (ct, g) in c.iter().zip(&gens) {
                acc = &acc + &g.scale_q(&qi(*ct));
            }
            im_coords(&acc)
        })
        .collect();
    let d2 = zlat::lcm_denoms(elems.iter().flatten());
    let int: Vec<Vec<i128>> = elems
        .iter()
        .map(|v| v.iter().map(|x| (x * qi(d2)).to_integer()).collect())
        .collect();
    let basis = zlat::hnf(&int)
        .iter()
        .map(|row| {
            let c: Vec<Q> = row.iter().map(|x| Q::new(*x, d2)).collect();
            scalar_from_im_coords(ring, &c)
        })
        .collect();
    ImaginaryLattice { ring, basis }
}

pub fn scalar_from_im_coords(ring: Ring, c: &[Q]) -> Scalar {
    match ring {
        Ring::Gauss => Scalar::i(ring).scale_q(&c[0]),
        Ring::Eisenstein => Scalar::theta(ring).scale_q(&(c[0] / qi(2))),
        Ring::Hurwitz => {
            let parts = [Scalar::i(ring), Scalar::j(), Scalar::k()];
            let mut acc = Scalar::zero(ring);
            for (p, x) in parts.iter().zip(c) {
                acc = &acc + &p.scale_q(x);
            }
            acc
        }
    }
}

/// Distinct elements of a set of scalars.
pub fn dedup_sorted(v: Vec<Scalar>) -> Vec<Scalar> {
    v.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(r: Ring, c: &[i64]) -> RingElement {
        RingElement::new(r, c).unwrap()
    }

    #[test]
    fn multiplication_table() {
        let g = Ring::Gauss;
        assert_eq!(el(g, &[1, 1]).mul(&el(g, &[1, -1])).unwrap(), el(g, &[2, 0]));
        let e = Ring::Eisenstein;
        assert_eq!(el(e, &[0, 1]).mul(&el(e, &[0, 1])).unwrap(), el(e, &[-1, -1]));
        let h = Ring::Hurwitz;
        let (i, j, k) = (el(h, &[0, 2, 0, 0]), el(h, &[0, 0, 2, 0]), el(h, &[0, 0, 0, 2]));
        assert_eq!(i.mul(&j).unwrap(), k);
        assert_eq!(j.mul(&i).unwrap(), el(h, &[0, 0, 0, -2]));
        assert!(i.mul(&el(g, &[1, 0])).is_err());
    }

    #[test]
    fn conj_norm_reim() {
        let h = Ring::Hurwitz;
        assert_eq!(el(h, &[1, 1, 1, 1]).norm(), qi(1));
        let (re, im) = el(h, &[-1, 1, 1, 1]).re_im();
        assert_eq!(re, Scalar::from_q(h, Q::new(-1, 2)));
        assert_eq!(im, Scalar::new(h, [0, 1, 1, 1], 2));
        let t = Scalar::theta(Ring::Eisenstein);
        assert_eq!(t.conj(), -&t);
        assert_eq!(&t * &t, Scalar::from_int(Ring::Eisenstein, -3));
        assert_eq!(el(Ring::Eisenstein, &[1, 2]).scalar(), &t);
    }

    #[test]
    fn unit_groups() {
        for (r, n) in [(Ring::Gauss, 4), (Ring::Eisenstein, 6), (Ring::Hurwitz, 24)] {
            let u = units(r);
            assert_eq!(u.len(), n);
            assert_eq!(dedup_sorted(u.clone()).len(), n);
            for a in &u {
                assert_eq!(a.norm(), qi(1));
                assert!(a.is_integral());
                for b in &u {
                    assert!(u.contains(&(a * b)));
                }
            }
        }
    }

    #[test]
    fn embedding() {
        let e = Ring::Eisenstein;
        let w = embed_eisenstein_in_hurwitz(&el(e, &[0, 1])).unwrap();
        assert_eq!(w, el(Ring::Hurwitz, &[-1, 1, 1, 1]));
        let t = embed_eisenstein_in_hurwitz(&el(e, &[1, 2])).unwrap();
        assert_eq!(t, el(Ring::Hurwitz, &[0, 2, 2, 2]));
        let one = embed_eisenstein_in_hurwitz(&el(e, &[1, 0])).unwrap();
        assert_eq!(one, el(Ring::Hurwitz, &[2, 0, 0, 0]));
    }

    #[test]
    fn hurwitz_parity_invariant() {
        assert!(RingElement::new(Ring::Hurwitz, &[1, 0, 0, 0]).is_err());
        assert!(RingElement::new(Ring::Hurwitz, &[1, 1, -1, 1]).is_ok());
    }

    #[test]
    fn residues() {
        let e = residues_mod(Ring::Eisenstein, &el(Ring::Eisenstein, &[1, 2])).unwrap();
        let coords: Vec<Vec<i64>> = e.iter().map(|x| x.coords()).collect();
        assert_eq!(coords, vec![vec![0, 0], vec![-1, 0], vec![1, 0]]);
        assert_eq!(residues_mod(Ring::Hurwitz, &el(Ring::Hurwitz, &[2, 2, 0, 0])).unwrap().len(), 4);
        assert_eq!(residues_mod(Ring::Gauss, &el(Ring::Gauss, &[1, 1])).unwrap().len(), 2);
        assert_eq!(
            residues_mod(Ring::Gauss, &el(Ring::Gauss, &[0, 0])),
            Err(RingError::ZeroModulus)
        );
    }

    #[test]
    fn imaginary_parts() {
        let h = imaginary_sublattice(Ring::Hurwitz, &el(Ring::Hurwitz, &[2, 2, 0, 0])).unwrap();
        let hz = Ring::Hurwitz;
        assert!(h.contains(&Scalar::new(hz, [0, 1, 1, 0], 1)));
        assert!(h.contains(&Scalar::new(hz, [0, 1, 0, -1], 1)));
        assert!(!h.contains(&Scalar::new(hz, [0, 1, 0, 0], 1)));
        assert!(!h.contains(&Scalar::new(hz, [0, 1, 1, 1], 2)));
        let e = imaginary_sublattice(Ring::Eisenstein, &el(Ring::Eisenstein, &[1, 0])).unwrap();
        assert_eq!(e.basis, vec![Scalar::theta(Ring::Eisenstein)]);
        let g = imaginary_sublattice(Ring::Gauss, &el(Ring::Gauss, &[1, 0])).unwrap();
        assert_eq!(g.basis, vec![Scalar::i(Ring::Gauss)]);
    }

    #[test]
    fn rounding_is_nearest() {
        let x = Scalar::new(Ring::Eisenstein, [2, 1, 0, 0], 3);
        let r = x.round();
        assert_eq!((&x - &r).norm(), Q::new(1, 3));
        let y = Scalar::new(Ring::Hurwitz, [1, 1, 1, 0], 2);
        assert!((&y - &y.round()).norm() <= Q::new(1, 2));
    }
}
