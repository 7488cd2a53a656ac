//! The spinor norm of an isometry of an Eisenstein lattice, read off from
//! its action on V = L/Lθ, a quadratic space over the field with three
//! elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::suites::{random_isometry, random_root};
use super::{ClaimError, Report, RunConfig};
use crate::lattices::HermitianLattice;
use crate::lorentz::{LorentzLattice, ReflectionSpec};
use crate::mat::Mat;
use crate::rings::{units, Ring, Scalar};
use crate::zlat::qi;

type F3Mat = Vec<Vec<u8>>;

/// q: ℰ → 𝔽₃, a + bω ↦ a + b.
pub fn reduce_mod_theta(x: &Scalar) -> Result<u8, ClaimError> {
    let z = x
        .zcoords_int()
        .ok_or_else(|| ClaimError::Invalid(format!("{x} is not integral")))?;
    Ok((z[0] + z[1]).rem_euclid(3) as u8)
}

fn reduce_mat(m: &Mat) -> Result<F3Mat, ClaimError> {
    m.rows
        .iter()
        .map(|r| r.iter().map(reduce_mod_theta).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SpinorContext {
    dim: usize,
    form: F3Mat,
    /// an orthogonal basis of V with the norms of its vectors
    pub diagonal_basis: Vec<Vec<u8>>,
    pub diagonal_norms: Vec<u8>,
    #[serde(skip)]
    lattice: HermitianLattice,
}

fn dot(form: &F3Mat, x: &[u8], y: &[u8]) -> u8 {
    let mut s = 0u32;
    for (i, a) in x.iter().enumerate() {
        if *a == 0 {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            s += *a as u32 * form[i][j] as u32 * *b as u32;
        }
    }
    (s % 3) as u8
}

fn apply(m: &F3Mat, x: &[u8]) -> Vec<u8> {
    m.iter()
        .map(|r| (r.iter().zip(x).map(|(a, b)| *a as u32 * *b as u32).sum::<u32>() % 3) as u8)
        .collect()
}

fn mat_mul(a: &F3Mat, b: &F3Mat) -> F3Mat {
    let n = b[0].len();
    a.iter()
        .map(|r| {
            (0..n)
                .map(|j| (r.iter().enumerate().map(|(k, x)| *x as u32 * b[k][j] as u32).sum::<u32>() % 3) as u8)
                .collect()
        })
        .collect()
}

fn sub(x: &[u8], y: &[u8]) -> Vec<u8> {
    x.iter().zip(y).map(|(a, b)| (a + 3 - b) % 3).collect()
}

fn is_identity(m: &F3Mat) -> bool {
    m.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| *x == u8::from(i == j)))
}

impl SpinorContext {
    pub fn new(lattice: &HermitianLattice) -> Result<SpinorContext, ClaimError> {
        if lattice.ring() != Ring::Eisenstein {
            return Err(ClaimError::Invalid("the spinor norm needs an Eisenstein lattice".into()));
        }
        if !lattice.is_selfdual()? {
            return Err(ClaimError::Invalid("lattice is not selfdual".into()));
        }
        let form = reduce_mat(lattice.gram())?;
        let dim = lattice.rank();
        let mut ctx = SpinorContext {
            dim,
            form,
            diagonal_basis: vec![],
            diagonal_norms: vec![],
            lattice: lattice.clone(),
        };
        ctx.diagonalize()?;
        Ok(ctx)
    }

    pub fn for_lorentz(l: &LorentzLattice) -> Result<SpinorContext, ClaimError> {
        SpinorContext::new(l.full())
    }

    /// Every vector of V, basis vectors first.
    fn vectors(&self) -> Vec<Vec<u8>> {
        let d = self.dim;
        let mut out: Vec<Vec<u8>> = (0..d)
            .map(|i| (0..d).map(|j| u8::from(i == j)).collect())
            .collect();
        for mut k in 1..3usize.pow(d as u32) {
            let v: Vec<u8> = (0..d)
                .map(|_| {
                    let c = (k % 3) as u8;
                    k /= 3;
                    c
                })
                .collect();
            if v.iter().filter(|c| **c != 0).count() > 1 || v.iter().any(|c| *c == 2) {
                out.push(v);
            }
        }
        out
    }

    fn diagonalize(&mut self) -> Result<(), ClaimError> {
        let all = self.vectors();
        let mut basis: Vec<Vec<u8>> = Vec::new();
        while basis.len() < self.dim {
            let next = all.iter().find(|v| {
                dot(&self.form, v, v) != 0 && basis.iter().all(|b| dot(&self.form, b, v) == 0)
            });
            match next {
                Some(v) => basis.push(v.clone()),
                None => return Err(ClaimError::Invalid("form on L/Lθ is degenerate".into())),
            }
        }
        self.diagonal_norms = basis.iter().map(|b| dot(&self.form, b, b)).collect();
        self.diagonal_basis = basis;
        Ok(())
    }

    /// Number of diagonal entries equal to 1 and to −1.
    pub fn signature(&self) -> (usize, usize) {
        let p = self.diagonal_norms.iter().filter(|n| **n == 1).count();
        (p, self.dim - p)
    }

    /// Checks ⟨q(eᵢ)|q(eⱼ)⟩ = q(⟨eᵢ|eⱼ⟩) and ⟨q(eᵢ)|q(e_i x)⟩ for x ∈ {1, ω}.
    pub fn form_is_induced(&self) -> Result<bool, ClaimError> {
        let e = Ring::Eisenstein;
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for x in [Scalar::one(e), Scalar::omega(e)] {
                    let mut a = vec![Scalar::zero(e); d];
                    let mut b = vec![Scalar::zero(e); d];
                    a[i] = Scalar::one(e);
                    b[j] = x.clone();
                    let lhs = reduce_mod_theta(&self.lattice.inner_product(&a, &b))?;
                    let qa: Vec<u8> = a.iter().map(reduce_mod_theta).collect::<Result<_, _>>()?;
                    let qb: Vec<u8> = b.iter().map(reduce_mod_theta).collect::<Result<_, _>>()?;
                    if dot(&self.form, &qa, &qb) != lhs {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    fn reflect_left(&self, w: &[u8], g: &F3Mat) -> F3Mat {
        // s_w(x) = x + B(x,w)·B(w,w)·w, since −2 = 1 and B(w,w)⁻¹ = B(w,w)
        let nw = dot(&self.form, w, w) as u32;
        let d = self.dim;
        let mut s = vec![vec![0u8; d]; d];
        for (j, col) in (0..d).map(|j| (j, (0..d).map(|i| u8::from(i == j)).collect::<Vec<u8>>())) {
            let c = dot(&self.form, &col, w) as u32 * nw;
            for i in 0..d {
                s[i][j] = ((col[i] as u32 + c * w[i] as u32) % 3) as u8;
            }
        }
        mat_mul(&s, g)
    }

    /// Spinor norm of the map induced on V, as +1 or −1.
    pub fn spinor_norm(&self, m: &Mat) -> Result<i8, ClaimError> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(ClaimError::Invalid("matrix has the wrong size".into()));
        }
        let g = self.lattice.gram();
        if !m.is_integral() || m.adjoint().mul(g).mul(m) != *g {
            return Err(ClaimError::Invalid("matrix does not preserve L".into()));
        }
        let mut g = reduce_mat(m)?;
        let all = self.vectors();
        let anisotropic: Vec<&Vec<u8>> =
            all.iter().filter(|v| dot(&self.form, v, v) != 0).collect();
        let mut theta = 1u8;
        for _ in 0..8 * self.dim {
            if is_identity(&g) {
                return Ok(if theta == 1 { 1 } else { -1 });
            }
            let moved = all.iter().find_map(|x| {
                let w = sub(&apply(&g, x), x);
                (w.iter().any(|c| *c != 0) && dot(&self.form, &w, &w) != 0).then_some(w)
            });
            let w = match moved {
                Some(w) => w,
                // image of g − 1 totally isotropic: compose with any reflection
                None => anisotropic[0].clone(),
            };
            theta = (theta * dot(&self.form, &w, &w)) % 3;
            g = self.reflect_left(&w, &g);
        }
        Err(ClaimError::Invalid("reflection peeling did not terminate".into()))
    }
}

#[derive(Clone, Debug, Serialize)]
struct SpinorCase {
    n: usize,
    signature: (usize, usize),
    form_is_induced: bool,
    minus_identity: i8,
    short_root_reflections: usize,
    reflections_positive: usize,
    product_pairs: usize,
    multiplicative: usize,
}

pub fn spinor_report(cfg: &RunConfig) -> Result<Report, ClaimError> {
    let e = Ring::Eisenstein;
    let count = cfg.budget_or(200);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    let mut ok = true;
    for n in 1..=3 {
        let l = LorentzLattice::standard(e, n);
        let ctx = SpinorContext::for_lorentz(&l)?;
        let d = l.dim();
        let mut minus = Mat::identity(e, d);
        for i in 0..d {
            minus.rows[i][i] = -Scalar::one(e);
        }
        let minus_identity = ctx.spinor_norm(&minus)?;
        let xis: Vec<Scalar> = units(e).into_iter().filter(|u| !u.is_one()).collect();
        let mut positive = 0;
        for _ in 0..count {
            let root = random_root(&l, &qi(1), &mut rng);
            let xi = xis[rng.gen_range(0..xis.len())].clone();
            let r = l.reflection(&ReflectionSpec { root, xi })?;
            if ctx.spinor_norm(&r.matrix)? == 1 {
                positive += 1;
            }
        }
        let pairs = count / 4;
        let mut multiplicative = 0;
        for _ in 0..pairs {
            let mut a = random_isometry(&l, rng.gen_range(1..=3), &mut rng)?.matrix;
            let b = random_isometry(&l, rng.gen_range(1..=3), &mut rng)?.matrix;
            if rng.gen_bool(0.5) {
                a = a.mul(&minus);
            }
            let (sa, sb) = (ctx.spinor_norm(&a)?, ctx.spinor_norm(&b)?);
            if ctx.spinor_norm(&a.mul(&b))? == sa * sb {
                multiplicative += 1;
            }
        }
        let case = SpinorCase {
            n,
            signature: ctx.signature(),
            form_is_induced: ctx.form_is_induced()?,
            minus_identity,
            short_root_reflections: count,
            reflections_positive: positive,
            product_pairs: pairs,
            multiplicative,
        };
        ok &= case.signature == (n + 1, 1)
            && case.form_is_induced
            && minus_identity == -1
            && positive == count
            && multiplicative == pairs;
        cases.push(case);
    }
    Ok(Report::new(
        "spinor",
        ok,
        json!({ "ring": "E", "lattices": "R^n ⊕ II_1_1 over E, n = 1, 2, 3", "cases": cases }),
        &[
            "On V = L/Lθ the map −I has spinor norm −1.",
            "A reflection in a short root acts on V trivially or as a reflection with spinor norm +1.",
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_identity_is_odd() {
        let e = Ring::Eisenstein;
        let l = LorentzLattice::standard(e, 2);
        let ctx = SpinorContext::for_lorentz(&l).unwrap();
        assert_eq!(ctx.signature(), (3, 1));
        let mut m = Mat::identity(e, 4);
        for i in 0..4 {
            m.rows[i][i] = -Scalar::one(e);
        }
        assert_eq!(ctx.spinor_norm(&m).unwrap(), -1);
        assert_eq!(ctx.spinor_norm(&Mat::identity(e, 4)).unwrap(), 1);
    }
}
