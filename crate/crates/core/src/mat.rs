//! Vectors and matrices over 𝕂, with module operations over the order 𝓡.

use crate::rings::{Ring, Scalar};
use crate::zlat::{qi, Q};

pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    pub ring: Ring,
    pub rows: Vec<Vec<Scalar>>,
}

impl Mat {
    pub fn new(ring: Ring, rows: Vec<Vec<Scalar>>) -> Mat {
        Mat { ring, rows }
    }

    pub fn zeros(ring: Ring, r: usize, c: usize) -> Mat {
        Mat { ring, rows: vec![vec![Scalar::zero(ring); c]; r] }
    }

    pub fn identity(ring: Ring, n: usize) -> Mat {
        let mut m = Mat::zeros(ring, n, n);
        for i in 0..n {
            m.rows[i][i] = Scalar::one(ring);
        }
        m
    }

    pub fn from_int(ring: Ring, rows: &[Vec<i128>]) -> Mat {
        Mat {
            ring,
            rows: rows
                .iter()
                .map(|r| r.iter().map(|x| Scalar::from_int(ring, *x)).collect())
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn col(&self, j: usize) -> Vector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn from_cols(ring: Ring, cols: &[Vector]) -> Mat {
        let n = cols.first().map_or(0, |c| c.len());
        Mat {
            ring,
            rows: (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect(),
        }
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.ncols(), o.nrows());
        let (n, m, p) = (self.nrows(), self.ncols(), o.ncols());
        let mut out = Mat::zeros(self.ring, n, p);
        for i in 0..n {
            for j in 0..p {
                let mut acc = Scalar::zero(self.ring);
                for k in 0..m {
                    if self.rows[i][k].is_zero() || o.rows[k][j].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&self.rows[i][k] * &o.rows[k][j]);
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        self.rows
            .iter()
            .map(|r| {
                let mut acc = Scalar::zero(self.ring);
                for (a, b) in r.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat {
        let (n, m) = (self.nrows(), self.ncols());
        Mat {
            ring: self.ring,
            rows: (0..m).map(|j| (0..n).map(|i| self.rows[i][j].conj()).collect()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.ring, self.nrows())
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.is_integral())
    }

    /// Two-sided inverse, `None` if singular.
    pub fn inverse(&self) -> Option<Mat> {
        let n = self.nrows();
        let mut a = self.rows.clone();
        let mut inv = Mat::identity(self.ring, n).rows;
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(p, c);
            inv.swap(p, c);
            let pinv = a[c][c].inv();
            for k in 0..n {
                a[c][k] = &pinv * &a[c][k];
                inv[c][k] = &pinv * &inv[c][k];
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for k in 0..n {
                        let (x, y) = (&f * &a[c][k], &f * &inv[c][k]);
                        a[r][k] = &a[r][k] - &x;
                        inv[r][k] = &inv[r][k] - &y;
                    }
                }
            }
        }
        Some(Mat { ring: self.ring, rows: inv })
    }

    /// Rank over the skew field 𝕂.
    pub fn rank(&self) -> usize {
        row_echelon(&self.rows).len()
    }

    /// Basis of the right kernel {x : M x = 0} over 𝕂.
    pub fn right_kernel(&self) -> Vec<Vector> {
        let m = self.ncols();
        let ech = reduced_row_echelon(&self.rows);
        let pivots: Vec<usize> = ech
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).unwrap())
            .collect();
        let mut out = Vec::new();
        for free in (0..m).filter(|c| !pivots.contains(c)) {
            let mut x = vec![Scalar::zero(self.ring); m];
            x[free] = Scalar::one(self.ring);
            for (row, &pc) in ech.iter().zip(&pivots) {
                x[pc] = -&row[free];
            }
            out.push(x);
        }
        out
    }
}

fn row_echelon(rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    reduced_row_echelon(rows)
}

/// Reduced row echelon form with left row operations (pivots equal to 1).
pub fn reduced_row_echelon(rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut a: Vec<Vec<Scalar>> = rows.to_vec();
    let m = a.first().map_or(0, |r| r.len());
    let mut r0 = 0;
    for c in 0..m {
        let Some(p) = (r0..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(p, r0);
        let pinv = a[r0][c].inv();
        for k in 0..m {
            a[r0][k] = &pinv * &a[r0][k];
        }
        for r in 0..a.len() {
            if r != r0 && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..m {
                    let x = &f * &a[r0][k];
                    a[r][k] = &a[r][k] - &x;
                }
            }
        }
        r0 += 1;
    }
    a.truncate(r0);
    a
}

pub fn vadd(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vneg(a: &[Scalar]) -> Vector {
    a.iter().map(|x| -x).collect()
}

/// Right scalar multiplication `v·s`.
pub fn vmul_right(a: &[Scalar], s: &Scalar) -> Vector {
    a.iter().map(|x| x * s).collect()
}

/// Left scalar multiplication `s·v`.
pub fn vmul_left(s: &Scalar, a: &[Scalar]) -> Vector {
    a.iter().map(|x| s * x).collect()
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn is_integral_vec(a: &[Scalar]) -> bool {
    a.iter().all(|x| x.is_integral())
}

/// Generator `g` of the left ideal Σ 𝓡 aᵢ, so that `a = w·g` with `w`
/// integral. Returns zero for the zero vector.
pub fn content(ring: Ring, a: &[Scalar]) -> Scalar {
    let mut c: Vec<Scalar> = a.iter().filter(|x| !x.is_zero()).cloned().collect();
    loop {
        c.retain(|x| !x.is_zero());
        if c.len() <= 1 {
            return c.pop().unwrap_or_else(|| Scalar::zero(ring));
        }
        let p = (0..c.len()).min_by_key(|&i| c[i].norm()).unwrap();
        let piv = c[p].clone();
        for (i, x) in c.iter_mut().enumerate() {
            if i != p {
                let q = x.right_div(&piv).round();
                *x = &*x - &(&q * &piv);
            }
        }
    }
}

pub fn is_primitive(ring: Ring, a: &[Scalar]) -> bool {
    content(ring, a).norm() == qi(1)
}

/// Echelon basis of the right 𝓡-module spanned by integral vectors.
pub fn right_module_basis(gens: &[Vector]) -> Vec<Vector> {
    let n = gens.first().map_or(0, |g| g.len());
    let mut work: Vec<Vector> = gens.iter().filter(|g| !is_zero_vec(g)).cloned().collect();
    let mut basis = Vec::new();
    for p in 0..n {
        loop {
            let idx: Vec<usize> = (0..work.len()).filter(|&i| !work[i][p].is_zero()).collect();
            if idx.is_empty() {
                break;
            }
            let piv = *idx.iter().min_by_key(|&&i| work[i][p].norm()).unwrap();
            if idx.len() == 1 {
                basis.push(work.swap_remove(piv));
                break;
            }
            let pv = work[piv].clone();
            for &i in &idx {
                if i != piv {
                    let q = work[i][p].left_div(&pv[p]).round();
                    let sub = vmul_right(&pv, &q);
                    work[i] = vsub(&work[i], &sub);
                }
            }
        }
        work.retain(|g| !is_zero_vec(g));
    }
    basis
}

/// Hermitian form `x̄ᵀ G y`.
pub fn form(g: &Mat, x: &[Scalar], y: &[Scalar]) -> Scalar {
    let ring = g.ring;
    let gy = g.mul_vec(y);
    let mut acc = Scalar::zero(ring);
    for (a, b) in x.iter().zip(&gy) {
        if !a.is_zero() && !b.is_zero() {
            acc = &acc + &(&a.conj() * b);
        }
    }
    acc
}

pub fn form_norm(g: &Mat, x: &[Scalar]) -> Q {
    form(g, x, x).re()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_over_quaternions() {
        let h = Ring::Hurwitz;
        let m = Mat::new(
            h,
            vec![
                vec![Scalar::one(h), Scalar::i(h)],
                vec![Scalar::j(), Scalar::new(h, [1, 1, 1, 1], 2)],
            ],
        );
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }

    #[test]
    fn content_and_primitivity() {
        let g = Ring::Gauss;
        let a = vec![Scalar::new(g, [1, 1, 0, 0], 1), Scalar::new(g, [1, 1, 0, 0], 1)];
        assert!(!is_primitive(g, &a));
        assert_eq!(content(g, &a).norm(), qi(2));
        let b = vec![Scalar::from_int(g, 2), Scalar::from_int(g, 3)];
        assert!(is_primitive(g, &b));
    }

    #[test]
    fn kernel_over_field() {
        let e = Ring::Eisenstein;
        let m = Mat::new(e, vec![vec![Scalar::one(e), Scalar::omega(e), Scalar::zero(e)]]);
        let k = m.right_kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(is_zero_vec(&m.mul_vec(&v)));
        }
    }
}
