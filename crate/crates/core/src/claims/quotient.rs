//! Null quotients v⊥/⟨v⟩ of Lorentzian lattices, and the lattices between
//! the even sublattice of an odd selfdual Gaussian lattice and its dual.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use num_traits::Signed;
use serde::Serialize;
use serde_json::json;

use super::suites::random_isometry;
use super::{ClaimError, Report, RunConfig};
use crate::lattices::catalog::catalog;
use crate::lattices::{Fingerprint, HermitianLattice};
use crate::lorentz::LorentzLattice;
use crate::mat::{self, Mat, Vector};
use crate::rings::{Ring, Scalar};
use crate::zlat::{self, qi, Q};

/// Entries of the row v̄ᵀG, so that ⟨v|x⟩ = Σ aₖxₖ.
fn functional(l: &HermitianLattice, v: &[Scalar]) -> Vector {
    let ring = l.ring();
    let d = l.rank();
    (0..d)
        .map(|k| {
            let mut e = vec![Scalar::zero(ring); d];
            e[k] = Scalar::one(ring);
            l.inner_product(v, &e)
        })
        .collect()
}

/// Unimodular column reduction of a row a: returns g, u with a·u = g, and
/// a basis of the kernel of x ↦ a·x.
fn column_reduce(a: &[Scalar]) -> (Scalar, Vector, Vec<Vector>) {
    let ring = a[0].ring();
    let d = a.len();
    let mut cols: Vec<(Scalar, Vector)> = (0..d)
        .map(|k| {
            let mut c = vec![Scalar::zero(ring); d];
            c[k] = Scalar::one(ring);
            (a[k].clone(), c)
        })
        .collect();
    loop {
        let live: Vec<usize> = (0..d).filter(|&i| !cols[i].0.is_zero()).collect();
        if live.len() <= 1 {
            break;
        }
        let p = *live.iter().min_by_key(|&&i| cols[i].0.norm()).unwrap();
        let (pv, pc) = cols[p].clone();
        for &i in &live {
            if i != p {
                let q = cols[i].0.left_div(&pv).round();
                cols[i].0 = &cols[i].0 - &(&pv * &q);
                cols[i].1 = mat::vsub(&cols[i].1, &mat::vmul_right(&pc, &q));
            }
        }
    }
    match cols.iter().position(|(x, _)| !x.is_zero()) {
        Some(p) => {
            let (g, u) = cols.remove(p);
            (g, u, cols.into_iter().map(|(_, c)| c).collect())
        }
        None => (Scalar::zero(ring), vec![Scalar::zero(ring); d], cols.into_iter().skip(1).map(|(_, c)| c).collect()),
    }
}

/// Some w ∈ L with ⟨v|w⟩ = 1, by the Euclidean algorithm on the entries of v̄ᵀG.
pub fn dual_partner(l: &HermitianLattice, v: &[Scalar]) -> Result<Vector, ClaimError> {
    let (g, u, _) = column_reduce(&functional(l, v));
    if g.is_zero() {
        return Err(ClaimError::Invalid("vector is orthogonal to L".into()));
    }
    if g.norm() != qi(1) {
        return Err(ClaimError::Invalid("⟨v|L⟩ is a proper ideal; v is not primitive in a selfdual lattice".into()));
    }
    Ok(mat::vmul_right(&u, &g.inv()))
}

/// v⊥/⟨v⟩ with its induced form, on a basis of v⊥ that contains v.
pub fn null_quotient(l: &HermitianLattice, v: &[Scalar]) -> Result<HermitianLattice, ClaimError> {
    let ring = l.ring();
    let d = l.rank();
    if v.len() != d || !mat::is_integral_vec(v) {
        return Err(ClaimError::Invalid("v is not a lattice vector".into()));
    }
    if l.norm(v) != qi(0) {
        return Err(ClaimError::Invalid("v is not null".into()));
    }
    if !l.is_primitive(v) {
        return Err(ClaimError::Invalid("v is not primitive".into()));
    }
    dual_partner(l, v)?;
    let (_, u, mut kernel) = column_reduce(&functional(l, v));
    let mut cols = vec![u];
    cols.extend(kernel.iter().cloned());
    let inv = Mat::from_cols(ring, &cols)
        .inverse()
        .ok_or_else(|| ClaimError::Invalid("singular kernel basis".into()))?;
    // v = Σ kⱼcⱼ; column operations on K move v onto a single basis vector
    let mut c: Vec<Scalar> = inv.mul_vec(v).into_iter().skip(1).collect();
    loop {
        let live: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_zero()).collect();
        if live.len() <= 1 {
            break;
        }
        let p = *live.iter().min_by_key(|&&i| c[i].norm()).unwrap();
        let pinv = c[p].inv();
        for &j in &live {
            if j != p {
                let q = (&c[j] * &pinv).round();
                c[j] = &c[j] - &(&q * &c[p]);
                kernel[p] = mat::vadd(&kernel[p], &mat::vmul_right(&kernel[j], &q));
            }
        }
    }
    let p = c
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| ClaimError::Invalid("v is not in its own orthogonal complement".into()))?;
    kernel.remove(p);
    restrict(l, &lll(l, kernel))
}

/// Gram–Schmidt data: b*ᵢ = bᵢ − Σⱼ b*ⱼ μᵢⱼ, with |b*ᵢ|².
fn gram_schmidt(l: &HermitianLattice, b: &[Vector]) -> (Vec<Vec<Scalar>>, Vec<Q>) {
    let ring = l.ring();
    let mut stars: Vec<Vector> = Vec::new();
    let mut norms = Vec::new();
    let mut mu = vec![vec![Scalar::zero(ring); b.len()]; b.len()];
    for i in 0..b.len() {
        let mut s = b[i].clone();
        for j in 0..i {
            mu[i][j] = l.inner_product(&stars[j], &b[i]).scale_q(&(qi(1) / norms[j]));
            s = mat::vsub(&s, &mat::vmul_right(&stars[j], &mu[i][j]));
        }
        norms.push(l.norm(&s));
        stars.push(s);
    }
    (mu, norms)
}

/// LLL reduction with δ = 99/100 over 𝓡, for a basis spanning a definite
/// subspace; returns the input unchanged if the span is not definite.
fn lll(l: &HermitianLattice, mut b: Vec<Vector>) -> Vec<Vector> {
    let delta = Q::new(99, 100);
    let (_, norms) = gram_schmidt(l, &b);
    if norms.iter().any(|x| *x <= qi(0)) {
        return b;
    }
    let mut k = 1;
    while k < b.len() {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(l, &b);
            let q = mu[k][j].round();
            if !q.is_zero() {
                b[k] = mat::vsub(&b[k], &mat::vmul_right(&b[j], &q));
            }
        }
        let (mu, norms) = gram_schmidt(l, &b);
        if norms[k] < (delta - mu[k][k - 1].norm()) * norms[k - 1] {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    b
}

/// Gram matrix of `l` on the given vectors.
fn restrict(l: &HermitianLattice, basis: &[Vector]) -> Result<HermitianLattice, ClaimError> {
    let ring = l.ring();
    let rows: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| l.inner_product(a, b)).collect())
        .collect();
    Ok(HermitianLattice::new(ring, Mat::new(ring, rows))?)
}

/// One lattice N with Mₑ ⊂ N ⊂ Mₑ′.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichLattice {
    #[serde(skip)]
    pub lattice: HermitianLattice,
    /// basis in the coordinates of M
    pub basis: Vec<Vec<String>>,
    /// [N : Mₑ] as abelian groups
    pub index: i128,
    pub is_m: bool,
    pub integral: bool,
    pub even: bool,
    pub selfdual: bool,
    pub fingerprint: Fingerprint,
}

/// Mₑ (vectors of even norm) of an odd selfdual Gaussian lattice M, and
/// every lattice Mₑ + c𝒢 for c of order 2 in Mₑ′/Mₑ.
pub fn even_sublattice_constructions(
    m: &HermitianLattice,
) -> Result<(HermitianLattice, Vec<SandwichLattice>), ClaimError> {
    let g = Ring::Gauss;
    if m.ring() != g {
        return Err(ClaimError::Invalid("the construction needs a Gaussian lattice".into()));
    }
    if !m.is_selfdual()? {
        return Err(ClaimError::Invalid("M is not selfdual".into()));
    }
    if m.is_even() {
        return Err(ClaimError::Invalid("M is already even".into()));
    }
    let n = m.rank();
    let zb = g.zbasis();
    // ℤ-basis eₖβₜ of M and the parity of each norm
    let mut zvecs: Vec<(Vector, bool)> = Vec::new();
    for k in 0..n {
        for b in &zb {
            let mut x = vec![Scalar::zero(g); n];
            x[k] = b.clone();
            let odd = m.norm(&x).to_integer().rem_euclid(2) == 1;
            zvecs.push((x, odd));
        }
    }
    let first_odd = zvecs.iter().find(|(_, o)| *o).map(|(x, _)| x.clone()).unwrap();
    let gens: Vec<Vector> = zvecs
        .iter()
        .flat_map(|(x, odd)| {
            let two = mat::vmul_right(x, &Scalar::from_int(g, 2));
            let one = if *odd { mat::vadd(x, &first_odd) } else { x.clone() };
            [two, one]
        })
        .collect();
    let ebasis = mat::right_module_basis(&gens);
    let me = restrict(m, &ebasis)?;
    let emat = Mat::from_cols(g, &ebasis);
    let x = me.gram_inverse()?;
    // Mₑ′/Mₑ in Mₑ-coordinates, generated by the columns of Gram⁻¹ times 1 and i
    let frac_key = |y: &[Scalar]| -> Vec<Q> {
        y.iter().flat_map(|s| s.zcoords()).map(|c| c - c.floor()).collect()
    };
    let mut gens_q: Vec<Vector> = Vec::new();
    for j in 0..n {
        let col = x.col(j);
        for b in &zb {
            gens_q.push(mat::vmul_right(&col, b));
        }
    }
    let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
    let mut elems: Vec<Vector> = vec![vec![Scalar::zero(g); n]];
    seen.insert(frac_key(&elems[0]));
    let mut i = 0;
    while i < elems.len() {
        for gq in &gens_q {
            let y = mat::vadd(&elems[i], gq);
            let y: Vector = y
                .iter()
                .map(|s| Scalar::from_zcoords(g, &s.zcoords().iter().map(|c| c - c.floor()).collect::<Vec<_>>()))
                .collect();
            if seen.insert(frac_key(&y)) {
                elems.push(y);
            }
        }
        if elems.len() > 64 {
            return Err(ClaimError::Invalid("discriminant group is unexpectedly large".into()));
        }
        i += 1;
    }
    let det_e = zlat::det_q(&me.real_gram()).abs();
    let mut out = Vec::new();
    for c in elems.iter().skip(1) {
        let two_c = mat::vmul_right(c, &Scalar::from_int(g, 2));
        if !mat::is_integral_vec(&two_c) {
            continue;
        }
        // generators of N = Mₑ + c𝒢, scaled by 2 to stay integral
        let mut ng: Vec<Vector> = (0..n)
            .map(|k| {
                let mut y = vec![Scalar::zero(g); n];
                y[k] = Scalar::from_int(g, 2);
                y
            })
            .collect();
        ng.push(two_c.clone());
        ng.push(mat::vmul_right(&two_c, &Scalar::i(g)));
        let half = Q::new(1, 2);
        let nb: Vec<Vector> = mat::right_module_basis(&ng)
            .iter()
            .map(|y| emat.mul_vec(&y.iter().map(|s| s.scale_q(&half)).collect::<Vec<_>>()))
            .collect();
        let lat = restrict(m, &nb)?;
        let det_n = zlat::det_q(&lat.real_gram()).abs();
        let idx2 = det_e / det_n;
        let index = (1..=64i128).find(|k| Q::from(k * k) == idx2).unwrap_or(0);
        let is_m = nb.iter().all(|b| mat::is_integral_vec(b)) && det_n == qi(1);
        let integral = lat.is_integral();
        let selfdual = lat.is_selfdual()?;
        let fp = lat.fingerprint();
        let key: Vec<String> = nb.iter().flat_map(|b| b.iter().map(|s| s.to_string())).collect();
        if out.iter().any(|s: &SandwichLattice| s.basis.concat() == key) {
            continue;
        }
        out.push(SandwichLattice {
            basis: nb.iter().map(|b| b.iter().map(|s| s.to_string()).collect()).collect(),
            even: lat.is_even(),
            lattice: lat,
            index,
            is_m,
            integral,
            selfdual,
            fingerprint: fp,
        });
    }
    Ok((me, out))
}

#[derive(Clone, Debug, Serialize)]
struct QuotientCase {
    ring: Ring,
    n: usize,
    rho_matches: bool,
    random_vectors: usize,
    random_matches: usize,
}

pub fn quotient_report(cfg: &RunConfig) -> Result<Report, ClaimError> {
    let per_case = cfg.budget_or(50);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    let mut ok = true;
    for ring in Ring::ALL {
        for n in 1..=3 {
            let l = LorentzLattice::standard(ring, n);
            let expect = HermitianLattice::standard(ring, n).fingerprint();
            let check = |v: &[Scalar]| -> Result<bool, ClaimError> {
                let q = null_quotient(l.full(), v)?;
                Ok(q.is_positive_definite() && q.is_selfdual()? && q.fingerprint() == expect)
            };
            let rho_matches = check(&l.rho().flat())?;
            let mut random_matches = 0;
            for _ in 0..per_case {
                let g = random_isometry(&l, rng.gen_range(1..=4), &mut rng)?;
                if check(&g.apply(&l.rho()).flat())? {
                    random_matches += 1;
                }
            }
            ok &= rho_matches && random_matches == per_case;
            cases.push(QuotientCase { ring, n, rho_matches, random_vectors: per_case, random_matches });
        }
    }
    let ii = catalog("II_5_1_G")?;
    let mut rho = vec![Scalar::zero(Ring::Gauss); ii.rank()];
    rho[ii.rank() - 1] = Scalar::one(Ring::Gauss);
    let q = null_quotient(&ii, &rho)?;
    let even_ok = q.is_even() && q.is_selfdual()? && q.fingerprint() == catalog("E8_G")?.fingerprint();
    ok &= even_ok;
    Ok(Report::new(
        "quotient",
        ok,
        json!({
            "cases": cases,
            "even_case": { "lattice": "II_5_1_G", "quotient_even_selfdual_e8_fingerprint": even_ok },
            "equality": "fingerprint equality: rank, ring, theta prefix to norm 4, real determinant",
        }),
        &[
            "For a primitive null vector v of a selfdual Lorentzian lattice, v⊥/⟨v⟩ is a selfdual definite lattice; this sets up a correspondence between orbits of primitive null vectors and classes of such lattices.",
        ],
    ))
}

#[derive(Clone, Debug, Serialize)]
struct EvenCase {
    lattice: &'static str,
    intermediate: usize,
    even_selfdual: usize,
    matches: Option<&'static str>,
    ok: bool,
}

pub fn even_report() -> Result<Report, ClaimError> {
    let mut cases = Vec::new();
    for (name, target) in [("I_1_1_G", Some("II_1_1_G")), ("I_5_1_G", Some("II_5_1_G")), ("I_2_1_G", None)] {
        let m = catalog(name)?;
        let (_, ns) = even_sublattice_constructions(&m)?;
        let es: Vec<&SandwichLattice> = ns.iter().filter(|s| s.even && s.selfdual).collect();
        let ok = match target {
            Some(t) => {
                let fp = catalog(t)?.fingerprint();
                es.iter().any(|s| s.fingerprint == fp)
            }
            None => es.is_empty(),
        };
        cases.push(EvenCase { lattice: name, intermediate: ns.len(), even_selfdual: es.len(), matches: target, ok });
    }
    let ok = cases.iter().all(|c| c.ok);
    Ok(Report::new(
        "even-sublattices",
        ok,
        json!({ "cases": cases }),
        &[
            "The elements of even norm of an odd selfdual Gaussian lattice M form a sublattice Mₑ; among the lattices between Mₑ and its dual is M itself, and when the signature difference is divisible by 4 one of the others is even and selfdual.",
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_quotient_is_definite_part() {
        for ring in Ring::ALL {
            let l = LorentzLattice::standard(ring, 2);
            let q = null_quotient(l.full(), &l.rho().flat()).unwrap();
            assert_eq!(q.fingerprint(), HermitianLattice::standard(ring, 2).fingerprint());
        }
    }

    #[test]
    fn hyperbolic_plane_from_i11() {
        let (_, ns) = even_sublattice_constructions(&catalog("I_1_1_G").unwrap()).unwrap();
        assert!(ns.iter().any(|s| s.is_m));
        let fp = catalog("II_1_1_G").unwrap().fingerprint();
        assert!(ns.iter().any(|s| s.even && s.selfdual && s.fingerprint == fp));
    }
}
