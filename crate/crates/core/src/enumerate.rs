//! Exact enumeration of lattice points in ellipsoids (Fincke–Pohst style
//! backtracking over an LLL-reduced basis, with an exact check at each leaf).

use num_traits::Zero;

use crate::zlat::{self, q_to_f64, qi, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("quadratic form is not positive definite")]
pub struct NotPositiveDefinite;

/// A positive-definite quadratic form on ℤᵏ prepared for enumeration.
#[derive(Debug, Clone)]
pub struct Enumerator {
    dim: usize,
    /// original Gram scaled to integers
    gram: Vec<Vec<i128>>,
    scale: i128,
    /// reduced Gram UᵀGU
    red: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    uinv: Vec<Vec<i128>>,
    l: Vec<Vec<f64>>,
    d: Vec<f64>,
}

impl Enumerator {
    pub fn new(gram: &[Vec<Q>]) -> Result<Enumerator, NotPositiveDefinite> {
        let dim = gram.len();
        let scale = zlat::lcm_denoms(gram.iter().flatten());
        let gi: Vec<Vec<i128>> = gram
            .iter()
            .map(|r| r.iter().map(|x| (x * qi(scale)).to_integer()).collect())
            .collect();
        let gq: Vec<Vec<Q>> = gi.iter().map(|r| r.iter().map(|x| qi(*x)).collect()).collect();
        zlat::ldl(&gq).ok_or(NotPositiveDefinite)?;
        let (u, uinv) = zlat::lll(&gi);
        let red = congruence(&gi, &u);
        let rq: Vec<Vec<Q>> = red.iter().map(|r| r.iter().map(|x| qi(*x)).collect()).collect();
        let (l, d) = zlat::ldl(&rq).ok_or(NotPositiveDefinite)?;
        Ok(Enumerator {
            dim,
            gram: gi,
            scale,
            red,
            u,
            uinv,
            l: l.iter().map(|r| r.iter().map(q_to_f64).collect()).collect(),
            d: d.iter().map(q_to_f64).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exact value of the form at `x`.
    pub fn value(&self, x: &[i128]) -> Q {
        let mut s = 0i128;
        for i in 0..self.dim {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.dim {
                s += x[i] * self.gram[i][j] * x[j];
            }
        }
        Q::new(s, self.scale)
    }

    /// Exact value of the form at `x − c`.
    pub fn value_at_offset(&self, x: &[i128], c: &[Q]) -> Q {
        let den = zlat::lcm_denoms(c.iter());
        let w: Vec<i128> = x
            .iter()
            .zip(c)
            .map(|(a, b)| a * den - (b * qi(den)).to_integer())
            .collect();
        let mut s = 0i128;
        for i in 0..self.dim {
            if w[i] == 0 {
                continue;
            }
            for j in 0..self.dim {
                s += w[i] * self.gram[i][j] * w[j];
            }
        }
        Q::new(s, self.scale * den * den)
    }

    /// Calls `visit(x, value)` for every `x ∈ ℤᵏ` with `Q(x − c) ≤ bound`.
    pub fn ball(&self, center: Option<&[Q]>, bound: &Q, mut visit: impl FnMut(&[i128], Q)) {
        if bound < &Q::zero() {
            return;
        }
        let n = self.dim;
        let zero = vec![Q::zero(); n];
        let c = center.unwrap_or(&zero);
        // center in reduced coordinates: c' = U⁻¹ c
        let cr: Vec<Q> = self
            .uinv
            .iter()
            .map(|row| row.iter().zip(c).fold(Q::zero(), |acc, (a, b)| acc + b * qi(*a)))
            .collect();
        let den = zlat::lcm_denoms(cr.iter());
        let crn: Vec<i128> = cr.iter().map(|x| (x * qi(den)).to_integer()).collect();
        let crf: Vec<f64> = cr.iter().map(q_to_f64).collect();
        let bound_scaled = bound * qi(self.scale);
        let limit = q_to_f64(&bound_scaled);
        let eps = 1e-7 * (1.0 + limit);
        let mut y = vec![0i128; n];
        let mut st = Search {
            e: self,
            crf: &crf,
            crn: &crn,
            den,
            bound_scaled,
            eps,
            y: &mut y,
        };
        if n == 0 {
            visit(&[], Q::zero());
            return;
        }
        st.recurse(n - 1, limit, &mut visit);
    }

    fn exact_reduced(&self, y: &[i128], crn: &[i128], den: i128) -> i128 {
        let n = self.dim;
        let w: Vec<i128> = (0..n).map(|i| y[i] * den - crn[i]).collect();
        let mut s = 0i128;
        for i in 0..n {
            if w[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += w[i] * self.red[i][j] * w[j];
            }
        }
        s
    }
}

struct Search<'a> {
    e: &'a Enumerator,
    crf: &'a [f64],
    crn: &'a [i128],
    den: i128,
    bound_scaled: Q,
    eps: f64,
    y: &'a mut Vec<i128>,
}

impl Search<'_> {
    fn recurse(&mut self, i: usize, remaining: f64, visit: &mut impl FnMut(&[i128], Q)) {
        let n = self.e.dim;
        let mut center = self.crf[i];
        for j in i + 1..n {
            center -= self.e.l[j][i] * (self.y[j] as f64 - self.crf[j]);
        }
        let di = self.e.d[i];
        let r = ((remaining + self.eps).max(0.0) / di).sqrt();
        let lo = (center - r - 1e-9).ceil() as i128;
        let hi = (center + r + 1e-9).floor() as i128;
        for v in lo..=hi {
            let t = v as f64 - center;
            let used = di * t * t;
            let rem = remaining - used;
            if rem < -self.eps {
                continue;
            }
            self.y[i] = v;
            if i == 0 {
                let s = self.e.exact_reduced(self.y, self.crn, self.den);
                let val = Q::new(s, self.den * self.den);
                if val <= self.bound_scaled {
                    let x = zlat::mat_vec(&self.e.u, self.y);
                    visit(&x, val / qi(self.e.scale));
                }
            } else {
                self.recurse(i - 1, rem, visit);
            }
        }
        self.y[i] = 0;
    }
}

fn congruence(g: &[Vec<i128>], u: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = g.len();
    let mut out = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0;
            for a in 0..n {
                if u[a][i] == 0 {
                    continue;
                }
                for b in 0..n {
                    s += u[a][i] * g[a][b] * u[b][j];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g: &[Vec<Q>], c: &[Q], bound: Q, box_r: i128) -> Vec<Vec<i128>> {
        let e = Enumerator::new(g).unwrap();
        let n = g.len();
        let mut out = Vec::new();
        let mut x = vec![-box_r; n];
        loop {
            if e.value_at_offset(&x, c) <= bound {
                out.push(x.clone());
            }
            let mut k = 0;
            while k < n {
                x[k] += 1;
                if x[k] > box_r {
                    x[k] = -box_r;
                    k += 1;
                } else {
                    break;
                }
            }
            if k == n {
                break;
            }
        }
        out.sort();
        out
    }

    #[test]
    fn matches_brute_force() {
        let g = vec![
            vec![qi(2), qi(-1), qi(0)],
            vec![qi(-1), qi(2), Q::new(-1, 2)],
            vec![qi(0), Q::new(-1, 2), qi(3)],
        ];
        let c = vec![Q::new(1, 3), Q::new(-2, 5), qi(1)];
        let e = Enumerator::new(&g).unwrap();
        let mut got = Vec::new();
        e.ball(Some(&c), &qi(5), |x, v| {
            assert_eq!(v, e.value_at_offset(x, &c));
            got.push(x.to_vec());
        });
        got.sort();
        assert_eq!(got, brute(&g, &c, qi(5), 6));
    }

    #[test]
    fn rejects_indefinite() {
        let g = vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]];
        assert!(Enumerator::new(&g).is_err());
    }
}
