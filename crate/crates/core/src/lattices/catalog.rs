//! Named lattices. Lattices defined by congruence conditions are stored as
//! explicit bases in a JSON data file, produced by [`derive_entry`].
//!
//! Derivation procedure for a congruence lattice S ⊆ 𝓡ⁿ with m𝓡ⁿ ⊆ S:
//! 1. collect every ℤ-coordinate vector with entries in `0..m` satisfying
//!    the congruences, together with the vectors m·eₖ·βₜ;
//! 2. keep a generating set greedily, adding a candidate only when it is not
//!    yet in the integer span (echelon membership test);
//! 3. reduce those generators to an echelon 𝓡-basis by the Euclidean
//!    algorithm on each coordinate in turn (right multiples of the pivot);
//! 4. check that the ℤ-span of the 𝓡-basis equals the span from step 2.
//!
//! The Gram matrix is `scale · Σ x̄ₖ yₖ` on that basis, where `scale` is
//! 1/|s|² for a lattice written as (1/s)·S.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{Fingerprint, HermitianLattice, LatticeError};
use crate::mat::{self, Mat, Vector};
use crate::rings::{Ring, RingElement, Scalar};
use crate::zlat::{self, qi, Q};

const DATA: &str = include_str!("../../data/catalog.json");

/// One stored lattice.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub ring: Ring,
    pub rank: usize,
    /// multiplier of the standard form, as "p/q"
    pub scale: String,
    /// basis vectors in 𝓡ⁿ, one per row
    pub basis: Vec<Vec<RingElement>>,
    pub fingerprint: Fingerprint,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogFile {
    pub format: u32,
    pub entries: Vec<CatalogEntry>,
}

/// Congruence lattices kept in the data file.
pub const STORED: [&str; 8] =
    ["E8_G", "E8_H", "D4_G", "D6_G", "D8_G", "D3theta", "K12_E", "BW4_H"];

struct Congruence {
    ring: Ring,
    n: usize,
    modulus: i128,
    scale: Q,
    pred: Box<dyn Fn(&[Scalar]) -> bool>,
}

fn divisible(x: &Scalar, a: &Scalar) -> bool {
    x.left_div(a).is_integral()
}

fn sum(ring: Ring, x: &[Scalar]) -> Scalar {
    x.iter().fold(Scalar::zero(ring), |acc, y| &acc + y)
}

fn all_congruent(x: &[Scalar], a: &Scalar) -> bool {
    x.iter().all(|y| divisible(&(y - &x[0]), a))
}

fn congruence(name: &str) -> Option<Congruence> {
    let g = Ring::Gauss;
    let e = Ring::Eisenstein;
    let h = Ring::Hurwitz;
    let one_plus_i = |r: Ring| Scalar::new(r, [1, 1, 0, 0], 1);
    Some(match name {
        "E8_G" => Congruence {
            ring: g,
            n: 4,
            modulus: 2,
            scale: Q::new(1, 2),
            pred: Box::new(move |x| {
                all_congruent(x, &one_plus_i(g)) && divisible(&sum(g, x), &Scalar::from_int(g, 2))
            }),
        },
        "E8_H" => Congruence {
            ring: h,
            n: 2,
            modulus: 2,
            scale: qi(1),
            pred: Box::new(move |x| divisible(&sum(h, x), &one_plus_i(h))),
        },
        "D3theta" => Congruence {
            ring: e,
            n: 3,
            modulus: 3,
            scale: qi(1),
            pred: Box::new(move |x| divisible(&sum(e, x), &Scalar::theta(e))),
        },
        "K12_E" => Congruence {
            ring: e,
            n: 6,
            modulus: 3,
            scale: Q::new(1, 3),
            pred: Box::new(move |x| {
                all_congruent(x, &Scalar::theta(e)) && divisible(&sum(e, x), &Scalar::from_int(e, 3))
            }),
        },
        "BW4_H" => Congruence {
            ring: h,
            n: 4,
            modulus: 2,
            scale: Q::new(1, 2),
            pred: Box::new(move |x| {
                all_congruent(x, &one_plus_i(h)) && divisible(&sum(h, x), &Scalar::from_int(h, 2))
            }),
        },
        _ => {
            let n = parse_d2n(name)?;
            Congruence {
                ring: g,
                n,
                modulus: 2,
                scale: qi(1),
                pred: Box::new(move |x| divisible(&sum(g, x), &one_plus_i(g))),
            }
        }
    })
}

/// `D{2n}_G` → n.
fn parse_d2n(name: &str) -> Option<usize> {
    let k: usize = name.strip_prefix('D')?.strip_suffix("_G")?.parse().ok()?;
    (k >= 2 && k % 2 == 0).then_some(k / 2)
}

/// Runs the derivation procedure for a congruence lattice.
pub fn derive_entry(name: &str) -> Result<CatalogEntry, LatticeError> {
    let c = congruence(name).ok_or_else(|| LatticeError::UnknownName(name.into()))?;
    let ring = c.ring;
    let d = ring.degree();
    let dim = d * c.n;
    let mut gens: Vec<Vec<i128>> = Vec::new();
    for k in 0..dim {
        let mut v = vec![0; dim];
        v[k] = c.modulus;
        gens.push(v);
    }
    let mut h = zlat::hnf(&gens);
    let to_vec = |z: &[i128]| -> Vector { z.chunks(d).map(|w| Scalar::from_zcoords_int(ring, w)).collect() };
    let mut z = vec![0i128; dim];
    loop {
        if (c.pred)(&to_vec(&z)) && !zlat::in_lattice(&h, &z) {
            gens.push(z.clone());
            h = zlat::hnf(&gens);
        }
        let mut k = 0;
        while k < dim {
            z[k] += 1;
            if z[k] >= c.modulus {
                z[k] = 0;
                k += 1;
            } else {
                break;
            }
        }
        if k == dim {
            break;
        }
    }
    let zgens: Vec<Vector> = h.iter().map(|r| to_vec(r)).collect();
    let basis = mat::right_module_basis(&zgens);
    if basis.len() != c.n {
        return Err(LatticeError::Data(format!("{name}: module basis has {} vectors", basis.len())));
    }
    // ℤ-span of the 𝓡-basis must be the congruence set
    let span: Vec<Vec<i128>> = basis
        .iter()
        .flat_map(|b| {
            ring.zbasis()
                .into_iter()
                .map(|beta| {
                    mat::vmul_right(b, &beta)
                        .iter()
                        .flat_map(|x| x.zcoords_int().expect("integral"))
                        .collect::<Vec<i128>>()
                })
                .collect::<Vec<_>>()
        })
        .collect();
    if zlat::hnf(&span) != h {
        return Err(LatticeError::Data(format!("{name}: 𝓡-span differs from congruence set")));
    }
    let basis_el: Vec<Vec<RingElement>> = basis
        .iter()
        .map(|b| b.iter().map(|x| RingElement::from_scalar(x.clone()).unwrap()).collect())
        .collect();
    let lat = lattice_from_basis(ring, &basis, &c.scale, name)?;
    Ok(CatalogEntry {
        name: name.into(),
        ring,
        rank: c.n,
        scale: c.scale.to_string(),
        basis: basis_el,
        fingerprint: lat.fingerprint(),
    })
}

fn lattice_from_basis(
    ring: Ring,
    basis: &[Vector],
    scale: &Q,
    name: &str,
) -> Result<HermitianLattice, LatticeError> {
    let n = basis.len();
    let mut g = Mat::zeros(ring, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Scalar::zero(ring);
            for (x, y) in basis[i].iter().zip(&basis[j]) {
                acc = &acc + &(&x.conj() * y);
            }
            g.rows[i][j] = acc.scale_q(scale);
        }
    }
    Ok(HermitianLattice::new(ring, g)?.with_name(name))
}

impl CatalogEntry {
    pub fn lattice(&self) -> Result<HermitianLattice, LatticeError> {
        let scale: Q = self
            .scale
            .parse()
            .map_err(|_| LatticeError::Data(format!("bad scale {:?}", self.scale)))?;
        let basis: Vec<Vector> = self
            .basis
            .iter()
            .map(|b| b.iter().map(|x| x.scalar().clone()).collect())
            .collect();
        lattice_from_basis(self.ring, &basis, &scale, &self.name)
    }
}

/// The full data file as pretty JSON, derived from scratch.
pub fn derive_data_file() -> Result<String, LatticeError> {
    let entries = STORED.iter().map(|n| derive_entry(n)).collect::<Result<Vec<_>, _>>()?;
    let file = CatalogFile { format: 1, entries };
    Ok(serde_json::to_string_pretty(&file).unwrap() + "\n")
}

/// Path named by `HYPERLAT_CATALOG`, if set.
pub fn data_override() -> Option<PathBuf> {
    std::env::var_os("HYPERLAT_CATALOG").map(PathBuf::from)
}

pub fn load_data() -> Result<CatalogFile, LatticeError> {
    let text = match data_override() {
        Some(p) => std::fs::read_to_string(&p)
            .map_err(|e| LatticeError::Data(format!("{}: {e}", p.display())))?,
        None => DATA.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| LatticeError::Data(e.to_string()))
}

fn stored(name: &str) -> Result<Option<HermitianLattice>, LatticeError> {
    let file = load_data()?;
    match file.entries.iter().find(|e| e.name == name) {
        Some(e) => Ok(Some(e.lattice()?)),
        None => Ok(None),
    }
}

fn diag(ring: Ring, entries: &[i128]) -> Mat {
    let mut g = Mat::zeros(ring, entries.len(), entries.len());
    for (i, x) in entries.iter().enumerate() {
        g.rows[i][i] = Scalar::from_int(ring, *x);
    }
    g
}

pub fn hyperbolic_plane(ring: Ring) -> HermitianLattice {
    let mut g = Mat::zeros(ring, 2, 2);
    g.rows[0][1] = Scalar::one(ring);
    g.rows[1][0] = Scalar::one(ring);
    HermitianLattice::new(ring, g).unwrap()
}

fn parse_ring(s: &str) -> Result<Ring, LatticeError> {
    Ring::from_tag(s).ok_or_else(|| LatticeError::InvalidParams(format!("unknown ring {s:?}")))
}

fn parse_num(s: &str) -> Result<usize, LatticeError> {
    s.parse().map_err(|_| LatticeError::InvalidParams(format!("bad number {s:?}")))
}

/// Looks up a lattice by name.
///
/// Fixed names: `E8_G`, `E8_H`, `D3theta`, `K12_E`, `BW4_H`. Families:
/// `R{n}_{G|E|H}` (𝓡ⁿ), `D{2n}_G`, `I_{n}_{m}_{ring}` (diagonal ±1),
/// `II_1_1_{ring}`, and `II_{4m+n}_{n}_G` (E8_G^m ⊕ II₁,₁^n).
pub fn catalog(name: &str) -> Result<HermitianLattice, LatticeError> {
    if let Some(l) = stored(name)? {
        return Ok(l);
    }
    if congruence(name).is_some() {
        let e = derive_entry(name)?;
        return e.lattice();
    }
    let unknown = || LatticeError::UnknownName(name.into());
    let parts: Vec<&str> = name.split('_').collect();
    if let Some(n) = parts[0].strip_prefix('R') {
        if parts.len() == 2 && !n.is_empty() {
            let n = parse_num(n)?;
            if n == 0 {
                return Err(LatticeError::InvalidParams("rank must be positive".into()));
            }
            return Ok(HermitianLattice::standard(parse_ring(parts[1])?, n).with_name(name));
        }
    }
    match parts.as_slice() {
        ["I", n, m, r] => {
            let (n, m) = (parse_num(n)?, parse_num(m)?);
            if n + m == 0 {
                return Err(LatticeError::InvalidParams("empty lattice".into()));
            }
            let mut d = vec![1i128; n];
            d.extend(std::iter::repeat(-1).take(m));
            let ring = parse_ring(r)?;
            Ok(HermitianLattice::new(ring, diag(ring, &d))?.with_name(name))
        }
        ["II", "1", "1", r] => Ok(hyperbolic_plane(parse_ring(r)?).with_name(name)),
        ["II", a, b, "G"] => {
            let (a, b) = (parse_num(a)?, parse_num(b)?);
            if b == 0 || a < b || (a - b) % 4 != 0 {
                return Err(LatticeError::InvalidParams(format!(
                    "II_{a}_{b}_G needs b ≥ 1 and a − b divisible by 4"
                )));
            }
            let e8 = catalog("E8_G")?;
            let hp = hyperbolic_plane(Ring::Gauss);
            let mut parts: Vec<HermitianLattice> = vec![e8; (a - b) / 4];
            parts.extend(std::iter::repeat(hp).take(b));
            let mut l = parts[0].clone();
            for p in &parts[1..] {
                l = l.direct_sum(p);
            }
            Ok(l.with_name(name))
        }
        _ => Err(unknown()),
    }
}

/// Names shown by the catalog listing.
pub fn listing_names() -> Vec<String> {
    let mut v: Vec<String> = STORED.iter().map(|s| s.to_string()).collect();
    for r in ["G", "E", "H"] {
        for n in 1..=3 {
            v.push(format!("R{n}_{r}"));
        }
        v.push(format!("II_1_1_{r}"));
        v.push(format!("I_1_1_{r}"));
    }
    v.push("II_5_1_G".into());
    v.push("I_5_1_G".into());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_families() {
        assert_eq!(catalog("R3_E").unwrap().rank(), 3);
        assert_eq!(catalog("I_2_1_G").unwrap().rank(), 3);
        assert!(catalog("II_1_1_E").unwrap().is_selfdual().unwrap());
        assert!(catalog("II_2_1_G").is_err());
        assert!(catalog("nonsense").is_err());
        assert_eq!(parse_d2n("D6_G"), Some(3));
        assert_eq!(parse_d2n("D5_G"), None);
    }
}

#[cfg(test)]
mod data_file {
    use super::*;

    /// Rewrites the data file; run with `--ignored` after changing a definition.
    #[test]
    #[ignore]
    fn regenerate_catalog_data() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/catalog.json");
        std::fs::write(path, derive_data_file().unwrap()).unwrap();
    }
}
