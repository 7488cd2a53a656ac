//! Integer and rational linear algebra on ℤ-lattices: echelon forms, kernels,
//! LLL reduction and exact determinants.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn q_to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Row echelon basis of the ℤ-span of `rows`. Pivots are positive and entries
/// above each pivot are reduced into `[0, pivot)`.
/// Parses "a" or "a/b".
pub fn parse_q(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((a, b)) => {
            let n: i128 = a.trim().parse().ok()?;
            let d: i128 = b.trim().parse().ok()?;
            (d != 0).then(|| q(n, d))
        }
        None => s.trim().parse().ok().map(qi),
    }
}

/// Serde adapter writing rationals as strings.
pub mod qser {
    use super::{parse_q, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod qvec {
    use super::{parse_q, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_q(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect()
    }
}

pub fn hnf(rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let (h, _) = hnf_with_transform(rows);
    h
}

/// Like [`hnf`] but also returns, for every output row, its expression as an
/// integer combination of the input rows.
pub fn hnf_with_transform(rows: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let m = rows.len();
    if m == 0 {
        return (vec![], vec![]);
    }
    let n = rows[0].len();
    let mut work: Vec<(Vec<i128>, Vec<i128>)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut t = vec![0; m];
            t[i] = 1;
            (r.clone(), t)
        })
        .collect();
    let mut basis: Vec<(Vec<i128>, Vec<i128>)> = Vec::new();
    for col in 0..n {
        loop {
            let mut best: Option<usize> = None;
            for (idx, (r, _)) in work.iter().enumerate() {
                if r[col] != 0 && best.map_or(true, |b| r[col].abs() < work[b].0[col].abs()) {
                    best = Some(idx);
                }
            }
            let Some(p) = best else { break };
            let (pr, pt) = work[p].clone();
            let mut done = true;
            for (idx, (r, t)) in work.iter_mut().enumerate() {
                if idx == p || r[col] == 0 {
                    continue;
                }
                let k = Integer::div_floor(&r[col], &pr[col]);
                for c in 0..n {
                    r[c] -= k * pr[c];
                }
                for c in 0..m {
                    t[c] -= k * pt[c];
                }
                if r[col] != 0 {
                    done = false;
                }
            }
            if done {
                let (mut r, mut t) = work.swap_remove(p);
                if r[col] < 0 {
                    r.iter_mut().for_each(|x| *x = -*x);
                    t.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push((r, t));
                break;
            }
        }
        work.retain(|(r, _)| r.iter().any(|x| *x != 0));
    }
    // reduce entries above pivots
    for i in 0..basis.len() {
        let pc = pivot_col(&basis[i].0);
        for k in 0..i {
            let piv = basis[i].0[pc];
            let f = Integer::div_floor(&basis[k].0[pc], &piv);
            if f != 0 {
                let (ri, ti) = basis[i].clone();
                for c in 0..n {
                    basis[k].0[c] -= f * ri[c];
                }
                for c in 0..m {
                    basis[k].1[c] -= f * ti[c];
                }
            }
        }
    }
    basis.into_iter().unzip()
}

fn pivot_col(r: &[i128]) -> usize {
    r.iter().position(|x| *x != 0).expect("zero row in echelon basis")
}

/// Reduces `v` modulo the lattice with echelon basis `h`. For a full-rank
/// lattice the result is a canonical representative of `v + L`.
pub fn reduce_mod(h: &[Vec<i128>], v: &[i128]) -> Vec<i128> {
    let mut v = v.to_vec();
    for row in h {
        let pc = pivot_col(row);
        let k = Integer::div_floor(&v[pc], &row[pc]);
        if k != 0 {
            for c in 0..v.len() {
                v[c] -= k * row[c];
            }
        }
    }
    v
}

/// Integer coefficients `c` with `Σ cᵢ rowsᵢ = target`, if any.
pub fn express(rows: &[Vec<i128>], target: &[i128]) -> Option<Vec<i128>> {
    let (h, t) = hnf_with_transform(rows);
    let mut v = target.to_vec();
    let mut coef = vec![0i128; rows.len()];
    for (row, tr) in h.iter().zip(&t) {
        let pc = pivot_col(row);
        if v[pc] % row[pc] != 0 {
            return None;
        }
        let k = v[pc] / row[pc];
        if k != 0 {
            for c in 0..v.len() {
                v[c] -= k * row[c];
            }
            for c in 0..coef.len() {
                coef[c] += k * tr[c];
            }
        }
    }
    v.iter().all(|x| *x == 0).then_some(coef)
}

/// The box representatives `0 ≤ cₖ < hₖₖ` of ℤⁿ modulo a full-rank echelon basis.
pub fn box_representatives(h: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = h.len();
    let mut out = vec![vec![]];
    for k in 0..n {
        let d = h[k][k];
        assert!(d > 0, "echelon basis is not full rank");
        out = out
            .into_iter()
            .flat_map(|p: Vec<i128>| {
                (0..d).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn in_lattice(h: &[Vec<i128>], v: &[i128]) -> bool {
    reduce_mod(h, v).iter().all(|x| *x == 0)
}

/// Basis of `{x ∈ ℤ^n : A x = 0}` for an integer matrix `A` given by rows.
pub fn kernel(a: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    if a.is_empty() {
        return identity(n);
    }
    let m = a.len();
    let aug: Vec<Vec<i128>> = (0..n)
        .map(|j| {
            let mut r: Vec<i128> = a.iter().map(|row| row[j]).collect();
            r.extend((0..n).map(|k| if k == j { 1 } else { 0 }));
            r
        })
        .collect();
    let ker: Vec<Vec<i128>> = hnf(&aug)
        .into_iter()
        .filter(|row| row[..m].iter().all(|x| *x == 0))
        .map(|row| row[m..].to_vec())
        .collect();
    hnf(&ker)
}

pub fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect()
}

/// Solves `a · x = t` over ℤ for a single row `a`; `None` when unsolvable.
pub fn solve_row(a: &[i128], t: i128) -> Option<Vec<i128>> {
    let cols: Vec<Vec<i128>> = a.iter().map(|x| vec![*x]).collect();
    let (h, tr) = hnf_with_transform(&cols);
    if h.is_empty() {
        return if t == 0 { Some(vec![0; a.len()]) } else { None };
    }
    let g = h[0][0];
    if t % g != 0 {
        return None;
    }
    Some(tr[0].iter().map(|x| x * (t / g)).collect())
}

/// Exact determinant of a rational matrix.
pub fn det_q(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c];
        det *= piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c] / piv;
            for k in c..n {
                let v = a[c][k];
                a[r][k] -= f * v;
            }
        }
    }
    det
}

/// Inverse of a rational matrix, `None` if singular.
pub fn inverse_q(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        inv.swap(p, c);
        let piv = a[c][c];
        for k in 0..n {
            a[c][k] /= piv;
            inv[c][k] /= piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c];
                for k in 0..n {
                    let (x, y) = (a[c][k], inv[c][k]);
                    a[r][k] -= f * x;
                    inv[r][k] -= f * y;
                }
            }
        }
    }
    Some(inv)
}

/// Exact `L D Lᵀ` decomposition of a symmetric positive-definite rational
/// matrix. Returns `(l, d)` with unit lower-triangular `l`, or `None` when some
/// pivot is not positive.
pub fn ldl(g: &[Vec<Q>]) -> Option<(Vec<Vec<Q>>, Vec<Q>)> {
    let n = g.len();
    let mut l = vec![vec![Q::zero(); n]; n];
    let mut d = vec![Q::zero(); n];
    for j in 0..n {
        let mut s = g[j][j];
        for k in 0..j {
            s -= l[j][k] * l[j][k] * d[k];
        }
        if !s.is_positive() {
            return None;
        }
        d[j] = s;
        l[j][j] = Q::one();
        for i in j + 1..n {
            let mut s = g[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k] * d[k];
            }
            l[i][j] = s / d[j];
        }
    }
    Some((l, d))
}

/// LLL reduction of a positive-definite integer Gram matrix. Returns the
/// unimodular transform `u` (columns are new basis vectors in old
/// coordinates) and its inverse.
pub fn lll(gram: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let n = gram.len();
    let mut u = identity(n);
    let mut uinv = identity(n);
    if n <= 1 {
        return (u, uinv);
    }
    let g0: Vec<Vec<f64>> = gram.iter().map(|r| r.iter().map(|x| *x as f64).collect()).collect();
    let mut g = g0.clone();
    let delta = 0.99;
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        let (mu, bstar) = gso(&g);
        // size reduce column k against j < k
        let mut changed = false;
        for j in (0..k).rev() {
            let (mu, _) = if changed { gso(&g) } else { (mu.clone(), bstar.clone()) };
            let r = mu[k][j].round();
            if r != 0.0 {
                let r = r as i128;
                // b_k -= r b_j
                for row in u.iter_mut() {
                    row[k] -= r * row[j];
                }
                // inverse: row_j += r row_k
                for c in 0..n {
                    uinv[j][c] += r * uinv[k][c];
                }
                g = transformed(&g0, &u);
                changed = true;
            }
        }
        let (mu, bstar) = if changed { gso(&g) } else { (mu, bstar) };
        if bstar[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            for row in u.iter_mut() {
                row.swap(k, k - 1);
            }
            uinv.swap(k, k - 1);
            g = transformed(&g0, &u);
            k = k.max(2) - 1;
        } else {
            k += 1;
        }
    }
    (u, uinv)
}

fn transformed(g0: &[Vec<f64>], u: &[Vec<i128>]) -> Vec<Vec<f64>> {
    let n = g0.len();
    let uf: Vec<Vec<f64>> = u.iter().map(|r| r.iter().map(|x| *x as f64).collect()).collect();
    let mut t = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                if uf[a][i] == 0.0 {
                    continue;
                }
                for b in 0..n {
                    s += uf[a][i] * g0[a][b] * uf[b][j];
                }
            }
            t[i][j] = s;
        }
    }
    t
}

fn gso(g: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j];
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * b[k];
            }
            mu[i][j] = s / b[j];
        }
        let mut s = g[i][i];
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * b[k];
        }
        b[i] = s;
        mu[i][i] = 1.0;
    }
    (mu, b)
}

pub fn mat_vec(m: &[Vec<i128>], v: &[i128]) -> Vec<i128> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn lcm_denoms<'a>(it: impl IntoIterator<Item = &'a Q>) -> i128 {
    it.into_iter().fold(1i128, |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_even_sublattice() {
        let h = hnf(&[vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        assert!(in_lattice(&h, &[3, 1]));
        assert!(!in_lattice(&h, &[1, 0]));
    }

    #[test]
    fn kernel_of_row() {
        let k = kernel(&[vec![2, 3, 5]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(2 * v[0] + 3 * v[1] + 5 * v[2], 0);
        }
        let s = solve_row(&[4, 6], 2).unwrap();
        assert_eq!(4 * s[0] + 6 * s[1], 2);
        assert!(solve_row(&[4, 6], 3).is_none());
    }

    #[test]
    fn det_and_inverse() {
        let m = vec![vec![qi(2), qi(1)], vec![qi(1), qi(1)]];
        assert_eq!(det_q(&m), qi(1));
        let inv = inverse_q(&m).unwrap();
        assert_eq!(inv[0][1], qi(-1));
    }

    #[test]
    fn lll_is_unimodular() {
        let g = vec![vec![101, 100], vec![100, 101]];
        let (u, ui) = lll(&g);
        let p: Vec<Vec<i128>> = (0..2)
            .map(|i| (0..2).map(|j| (0..2).map(|k| u[i][k] * ui[k][j]).sum()).collect())
            .collect();
        assert_eq!(p, identity(2));
    }
}
