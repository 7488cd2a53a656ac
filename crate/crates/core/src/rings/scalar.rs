use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::Ring;
use crate::zlat::{qi, Q};

/// Element of the rational algebra 𝕂 = 𝓡 ⊗ ℚ, stored as integer components
/// over one positive common denominator in lowest terms.
///
/// Components: `a + b i` for 𝒢, `a + b ω` for ℰ, `a + b i + c j + d k` for ℋ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    ring: Ring,
    num: [i128; 4],
    den: i128,
}

impl Scalar {
    pub fn new(ring: Ring, num: [i128; 4], den: i128) -> Scalar {
        assert!(den != 0, "zero denominator");
        let mut s = Scalar { ring, num, den };
        if ring != Ring::Hurwitz {
            s.num[2] = 0;
            s.num[3] = 0;
        }
        s.normalize();
        s
    }

    pub fn from_int(ring: Ring, n: i128) -> Scalar {
        Scalar::new(ring, [n, 0, 0, 0], 1)
    }

    pub fn from_q(ring: Ring, x: Q) -> Scalar {
        Scalar::new(ring, [*x.numer(), 0, 0, 0], *x.denom())
    }

    pub fn zero(ring: Ring) -> Scalar {
        Scalar::from_int(ring, 0)
    }

    pub fn one(ring: Ring) -> Scalar {
        Scalar::from_int(ring, 1)
    }

    /// `i` in 𝒢 or ℋ.
    pub fn i(ring: Ring) -> Scalar {
        assert!(ring != Ring::Eisenstein);
        Scalar::new(ring, [0, 1, 0, 0], 1)
    }

    pub fn j() -> Scalar {
        Scalar::new(Ring::Hurwitz, [0, 0, 1, 0], 1)
    }

    pub fn k() -> Scalar {
        Scalar::new(Ring::Hurwitz, [0, 0, 0, 1], 1)
    }

    /// The cube root of unity ω in ℰ, or its image (−1+i+j+k)/2 in ℋ.
    pub fn omega(ring: Ring) -> Scalar {
        match ring {
            Ring::Eisenstein => Scalar::new(ring, [0, 1, 0, 0], 1),
            Ring::Hurwitz => Scalar::new(ring, [-1, 1, 1, 1], 2),
            Ring::Gauss => panic!("ω is not in the Gaussian integers"),
        }
    }

    /// θ = ω − ω̄, a square root of −3.
    pub fn theta(ring: Ring) -> Scalar {
        let w = Scalar::omega(ring);
        &w - &w.conj()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn num(&self) -> [i128; 4] {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    fn normalize(&mut self) {
        let mut g = self.den;
        for x in self.num {
            g = g.gcd(&x);
        }
        if self.den < 0 {
            g = -g.abs();
        } else {
            g = g.abs();
        }
        if g != 1 && g != 0 {
            for x in self.num.iter_mut() {
                *x /= g;
            }
            self.den /= g;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| *x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.den == 1 && self.num == [1, 0, 0, 0]
    }

    pub fn conj(&self) -> Scalar {
        let [a, b, c, d] = self.num;
        match self.ring {
            Ring::Gauss => Scalar::new(self.ring, [a, -b, 0, 0], self.den),
            Ring::Eisenstein => Scalar::new(self.ring, [a - b, -b, 0, 0], self.den),
            Ring::Hurwitz => Scalar::new(self.ring, [a, -b, -c, -d], self.den),
        }
    }

    /// |x|² = x x̄.
    pub fn norm(&self) -> Q {
        let [a, b, c, d] = self.num;
        let n = match self.ring {
            Ring::Gauss => a * a + b * b,
            Ring::Eisenstein => a * a - a * b + b * b,
            Ring::Hurwitz => a * a + b * b + c * c + d * d,
        };
        Q::new(n, self.den * self.den)
    }

    /// Real part as a rational.
    pub fn re(&self) -> Q {
        let [a, b, _, _] = self.num;
        match self.ring {
            Ring::Eisenstein => Q::new(2 * a - b, 2 * self.den),
            _ => Q::new(a, self.den),
        }
    }

    pub fn re_scalar(&self) -> Scalar {
        Scalar::from_q(self.ring, self.re())
    }

    pub fn im(&self) -> Scalar {
        self - &self.re_scalar()
    }

    pub fn is_real(&self) -> bool {
        self.im().is_zero()
    }

    /// Real value when the element is real.
    pub fn as_q(&self) -> Option<Q> {
        if self.is_real() {
            Some(self.re())
        } else {
            None
        }
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        let c = self.conj();
        c.scale_q(&(qi(1) / n))
    }

    /// Multiplication by a rational number.
    pub fn scale_q(&self, x: &Q) -> Scalar {
        let mut num = self.num;
        for v in num.iter_mut() {
            *v *= x.numer();
        }
        Scalar::new(self.ring, num, self.den * x.denom())
    }

    /// `self · other⁻¹`.
    pub fn right_div(&self, other: &Scalar) -> Scalar {
        self * &other.inv()
    }

    /// `other⁻¹ · self`.
    pub fn left_div(&self, other: &Scalar) -> Scalar {
        &other.inv() * self
    }

    /// Coordinates in the ℤ-basis {1,i}, {1,ω} or {1,i,j,(1+i+j+k)/2}.
    pub fn zcoords(&self) -> Vec<Q> {
        let [a, b, c, d] = self.num;
        let den = self.den;
        match self.ring {
            Ring::Gauss | Ring::Eisenstein => vec![Q::new(a, den), Q::new(b, den)],
            Ring::Hurwitz => vec![
                Q::new(a - d, den),
                Q::new(b - d, den),
                Q::new(c - d, den),
                Q::new(2 * d, den),
            ],
        }
    }

    pub fn from_zcoords(ring: Ring, z: &[Q]) -> Scalar {
        assert_eq!(z.len(), ring.degree());
        let basis = ring.zbasis();
        let mut acc = Scalar::zero(ring);
        for (c, b) in z.iter().zip(basis.iter()) {
            acc = &acc + &b.scale_q(c);
        }
        acc
    }

    pub fn from_zcoords_int(ring: Ring, z: &[i128]) -> Scalar {
        let zq: Vec<Q> = z.iter().map(|x| qi(*x)).collect();
        Scalar::from_zcoords(ring, &zq)
    }

    /// Integer ℤ-basis coordinates of an integral element.
    pub fn zcoords_int(&self) -> Option<Vec<i128>> {
        self.zcoords()
            .into_iter()
            .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.zcoords().iter().all(|x| x.is_integer())
    }

    /// Public coordinates: (a,b) for 𝒢 and ℰ, doubled (2a,2b,2c,2d) for ℋ.
    pub fn coords_q(&self) -> Vec<Q> {
        let [a, b, c, d] = self.num;
        match self.ring {
            Ring::Gauss | Ring::Eisenstein => vec![Q::new(a, self.den), Q::new(b, self.den)],
            Ring::Hurwitz => [a, b, c, d].iter().map(|x| Q::new(2 * x, self.den)).collect(),
        }
    }

    pub fn from_coords_q(ring: Ring, c: &[Q]) -> Scalar {
        let den = c.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
        let mut num = [0i128; 4];
        for (k, x) in c.iter().enumerate() {
            num[k] = (x * qi(den)).to_integer();
        }
        match ring {
            Ring::Hurwitz => Scalar::new(ring, num, 2 * den),
            _ => Scalar::new(ring, num, den),
        }
    }

    /// Nearest ring element (ties broken by the canonical order).
    pub fn round(&self) -> Scalar {
        let ring = self.ring;
        match ring {
            Ring::Gauss => {
                let [a, b, _, _] = self.num;
                Scalar::new(ring, [round_div(a, self.den), round_div(b, self.den), 0, 0], 1)
            }
            Ring::Eisenstein => {
                let [a, b, _, _] = self.num;
                let (a0, b0) = (round_div(a, self.den), round_div(b, self.den));
                let mut best: Option<(Q, Scalar)> = None;
                for da in -1..=1 {
                    for db in -1..=1 {
                        let c = Scalar::new(ring, [a0 + da, b0 + db, 0, 0], 1);
                        let d = (self - &c).norm();
                        if best.as_ref().map_or(true, |(bd, bc)| d < *bd || (d == *bd && c < *bc)) {
                            best = Some((d, c));
                        }
                    }
                }
                best.unwrap().1
            }
            Ring::Hurwitz => {
                let n = self.num;
                let whole: [i128; 4] = [
                    round_div(n[0], self.den),
                    round_div(n[1], self.den),
                    round_div(n[2], self.den),
                    round_div(n[3], self.den),
                ];
                let c1 = Scalar::new(ring, whole, 1);
                // nearest point of (ℤ+½)⁴
                let half: [i128; 4] = [
                    2 * floor_div(n[0], self.den) + 1,
                    2 * floor_div(n[1], self.den) + 1,
                    2 * floor_div(n[2], self.den) + 1,
                    2 * floor_div(n[3], self.den) + 1,
                ];
                let c2 = Scalar::new(ring, half, 2);
                let (d1, d2) = ((self - &c1).norm(), (self - &c2).norm());
                if d2 < d1 || (d1 == d2 && c2 < c1) {
                    c2
                } else {
                    c1
                }
            }
        }
    }

    /// Embedding ℰ → ℋ sending ω to (−1+i+j+k)/2.
    pub fn embed_in_hurwitz(&self) -> Scalar {
        assert_eq!(self.ring, Ring::Eisenstein);
        let [a, b, _, _] = self.num;
        let w = Scalar::omega(Ring::Hurwitz);
        let x = &Scalar::from_int(Ring::Hurwitz, a) + &w.scale_q(&qi(b));
        x.scale_q(&Q::new(1, self.den))
    }

    fn sort_key(&self) -> Vec<Q> {
        self.coords_q()
    }
}

fn round_div(a: i128, d: i128) -> i128 {
    // nearest integer to a/d (d > 0), halves rounded down
    -floor_div(-(2 * a - d), 2 * d)
}

fn floor_div(a: i128, d: i128) -> i128 {
    Integer::div_floor(&a, &d)
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ring
            .cmp(&other.ring)
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        let l = self.den.lcm(&o.den);
        let (f, g) = (l / self.den, l / o.den);
        let mut num = [0; 4];
        for k in 0..4 {
            num[k] = self.num[k] * f + o.num[k] * g;
        }
        Scalar::new(self.ring, num, l)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let mut num = self.num;
        num.iter_mut().for_each(|x| *x = -*x);
        Scalar { ring: self.ring, num, den: self.den }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        let [a1, b1, c1, d1] = self.num;
        let [a2, b2, c2, d2] = o.num;
        let num = match self.ring {
            Ring::Gauss => [a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, 0, 0],
            Ring::Eisenstein => [a1 * a2 - b1 * b2, a1 * b2 + b1 * a2 - b1 * b2, 0, 0],
            Ring::Hurwitz => [
                a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            ],
        };
        Scalar::new(self.ring, num, self.den * o.den)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, o: Scalar) -> Scalar {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, o: &Scalar) -> Scalar {
                (&self).$f(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $f(self, o: Scalar) -> Scalar {
                self.$f(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: &[&str] = match self.ring {
            Ring::Gauss => &["", "i"],
            Ring::Eisenstein => &["", "ω"],
            Ring::Hurwitz => &["", "i", "j", "k"],
        };
        let mut out = String::new();
        for (k, name) in names.iter().enumerate() {
            let c = Q::new(self.num[k], self.den);
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if !out.is_empty() || neg {
                out.push(if neg { '-' } else { '+' });
            }
            if name.is_empty() {
                out.push_str(&fmt_q(&a));
            } else {
                if a != qi(1) {
                    out.push_str(&fmt_q(&a));
                }
                out.push_str(name);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.ring.tag(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_helpers() {
        assert_eq!(round_div(1, 2), 0);
        assert_eq!(round_div(3, 2), 1);
        assert_eq!(round_div(-1, 2), -1);
        assert_eq!(round_div(7, 3), 2);
        assert_eq!(round_div(-7, 3), -2);
    }
}
