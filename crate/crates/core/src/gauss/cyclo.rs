//! Exact arithmetic in `Z[i, ζ_p]`.
//!
//! Since `gcd(4, p) = 1`, the ring `Z[i, ζ_p]` is a free `Z`-module with
//! basis `{ i^a · ζ_p^b : a ∈ {0,1}, b ∈ {0,…,p−2} }`; a [`CycInt`] stores
//! the `2(p−1)` integer coordinates in that basis. The canonical form is
//! unique, so structural equality is ring equality — identity checks never
//! go through floating point. Products fold `ζ_p^{p−1}` down by the relation
//! `ζ_p^{p−1} = −(1 + ζ_p + ⋯ + ζ_p^{p−2})` and `i² = −1`.
//!
//! The complex embedding (`ζ_p ↦ exp(2πi/p)`, `i ↦ +i`) is provided for
//! magnitude checks only.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::chars::SymbolExp;

/// An element of `Z[i, ζ_p]` in canonical coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    /// Coefficient of `i^a ζ_p^b` at index `a·(p−1) + b`.
    c: Vec<BigInt>,
}

impl CycInt {
    fn width(&self) -> usize {
        (self.p - 1) as usize
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn zero(p: u32) -> Self {
        CycInt { p, c: vec![BigInt::zero(); 2 * (p as usize - 1)] }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u32, v: i64) -> Self {
        Self::from_bigint(p, BigInt::from(v))
    }

    pub fn from_bigint(p: u32, v: BigInt) -> Self {
        let mut z = Self::zero(p);
        z.c[0] = v;
        z
    }

    /// The Gaussian integer `re + im·i`.
    pub fn from_gauss(p: u32, re: BigInt, im: BigInt) -> Self {
        let mut z = Self::zero(p);
        z.c[0] = re;
        let w = z.width();
        z.c[w] = im;
        z
    }

    /// `i^k`.
    pub fn i_power(p: u32, k: u8) -> Self {
        match k % 4 {
            0 => Self::from_gauss(p, BigInt::from(1), BigInt::zero()),
            1 => Self::from_gauss(p, BigInt::zero(), BigInt::from(1)),
            2 => Self::from_gauss(p, BigInt::from(-1), BigInt::zero()),
            _ => Self::from_gauss(p, BigInt::zero(), BigInt::from(-1)),
        }
    }

    /// `ζ_p^t` in canonical form (the exponent `p−1` folds down).
    pub fn zeta_pow(p: u32, t: u32) -> Self {
        let t = t % p;
        let mut z = Self::zero(p);
        if t < p - 1 {
            z.c[t as usize] = BigInt::from(1);
        } else {
            for b in 0..z.width() {
                z.c[b] = BigInt::from(-1);
            }
        }
        z
    }

    /// The value of a quartic symbol as a ring element.
    pub fn from_symbol(p: u32, s: SymbolExp) -> Self {
        match s {
            SymbolExp::Zero => Self::zero(p),
            SymbolExp::Exp(k) => Self::i_power(p, k),
        }
    }

    /// Builds `Σ counts[k·p + t] · i^k · ζ_p^t` from a unit-count grid —
    /// the exact accumulator format of the brute-force sums.
    pub fn from_counts(p: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), 4 * p as usize);
        let w = (p - 1) as usize;
        // Accumulate in the redundant basis ζ^0..ζ^{p−1}, then fold.
        let mut tmp = vec![BigInt::zero(); 2 * p as usize];
        for k in 0..4usize {
            let (row, sign) = match k {
                0 => (0usize, 1i64),
                1 => (1, 1),
                2 => (0, -1),
                _ => (1, -1),
            };
            for t in 0..p as usize {
                let v = counts[k * p as usize + t];
                if v != 0 {
                    tmp[row * p as usize + t] += BigInt::from(sign * v);
                }
            }
        }
        let mut z = Self::zero(p);
        for a in 0..2usize {
            let top = tmp[a * p as usize + w].clone();
            for b in 0..w {
                z.c[a * w + b] = &tmp[a * p as usize + b] - &top;
            }
        }
        z
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        CycInt {
            p: self.p,
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        CycInt {
            p: self.p,
            c: self.c.iter().zip(&other.c).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CycInt { p: self.p, c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        CycInt { p: self.p, c: self.c.iter().map(|a| a * s).collect() }
    }

    pub fn scale_i64(&self, s: i64) -> Self {
        self.scale(&BigInt::from(s))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let p = self.p as usize;
        let w = self.width();
        let mut tmp = vec![BigInt::zero(); 2 * p];
        for a1 in 0..2usize {
            for b1 in 0..w {
                let x = &self.c[a1 * w + b1];
                if x.is_zero() {
                    continue;
                }
                for a2 in 0..2usize {
                    for b2 in 0..w {
                        let y = &other.c[a2 * w + b2];
                        if y.is_zero() {
                            continue;
                        }
                        let prod = x * y;
                        let (row, negate) = if a1 + a2 == 2 { (0, true) } else { (a1 + a2, false) };
                        let e = (b1 + b2) % p;
                        if negate {
                            tmp[row * p + e] -= prod;
                        } else {
                            tmp[row * p + e] += prod;
                        }
                    }
                }
            }
        }
        Self::fold(self.p, tmp)
    }

    /// Multiplies by `i^k` (cheap rotation, no convolution).
    pub fn mul_i_power(&self, k: u8) -> Self {
        let w = self.width();
        let (lo, hi) = self.c.split_at(w);
        let (new_lo, new_hi): (Vec<BigInt>, Vec<BigInt>) = match k % 4 {
            0 => return self.clone(),
            1 => (hi.iter().map(|x| -x).collect(), lo.to_vec()),
            2 => (lo.iter().map(|x| -x).collect(), hi.iter().map(|x| -x).collect()),
            _ => (hi.to_vec(), lo.iter().map(|x| -x).collect()),
        };
        let mut c = new_lo;
        c.extend(new_hi);
        CycInt { p: self.p, c }
    }

    /// Multiplies by a symbol value (zero annihilates).
    pub fn mul_symbol(&self, s: SymbolExp) -> Self {
        match s {
            SymbolExp::Zero => Self::zero(self.p),
            SymbolExp::Exp(k) => self.mul_i_power(k),
        }
    }

    /// Complex conjugation: `i ↦ −i`, `ζ_p ↦ ζ_p^{−1}`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let w = self.width();
        let mut tmp = vec![BigInt::zero(); 2 * p];
        for a in 0..2usize {
            for b in 0..w {
                let x = &self.c[a * w + b];
                if x.is_zero() {
                    continue;
                }
                let e = (p - b) % p;
                if a == 1 {
                    tmp[p + e] -= x;
                } else {
                    tmp[e] += x;
                }
            }
        }
        Self::fold(self.p, tmp)
    }

    fn fold(p: u32, tmp: Vec<BigInt>) -> Self {
        let w = (p - 1) as usize;
        let mut z = Self::zero(p);
        for a in 0..2usize {
            let top = tmp[a * p as usize + w].clone();
            for b in 0..w {
                z.c[a * w + b] = &tmp[a * p as usize + b] - &top;
            }
        }
        z
    }

    /// The squared modulus `z·z̄` — exact, and a plain integer whenever the
    /// caller expects one.
    pub fn norm_squared(&self) -> Self {
        self.mul(&self.conj())
    }

    /// Extracts a rational integer, if that is what this element is.
    pub fn as_int(&self) -> Option<BigInt> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Extracts a Gaussian integer `(re, im)`, if the `ζ_p` coordinates vanish.
    pub fn as_gauss(&self) -> Option<(BigInt, BigInt)> {
        let w = self.width();
        let pure = self.c[1..w].iter().all(|x| x.is_zero())
            && self.c[w + 1..].iter().all(|x| x.is_zero());
        if pure {
            Some((self.c[0].clone(), self.c[w].clone()))
        } else {
            None
        }
    }

    /// Complex embedding `ζ_p = exp(2πi/p)`. For magnitude checks only.
    pub fn embed(&self) -> (f64, f64) {
        let w = self.width();
        let mut re = 0.0;
        let mut im = 0.0;
        for a in 0..2usize {
            for b in 0..w {
                let coeff = self.c[a * w + b].to_f64().expect("coefficient fits f64 range");
                if coeff == 0.0 {
                    continue;
                }
                let theta = 2.0 * std::f64::consts::PI * (b as f64) / (self.p as f64);
                let (zr, zi) = (theta.cos(), theta.sin());
                if a == 0 {
                    re += coeff * zr;
                    im += coeff * zi;
                } else {
                    // i·ζ^b = −sin + i·cos.
                    re -= coeff * zi;
                    im += coeff * zr;
                }
            }
        }
        (re, im)
    }

    /// Largest coefficient magnitude (coefficient-growth diagnostics).
    pub fn coeff_height(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_relation_collapses_to_zero() {
        // 1 + ζ_3 + ζ_3² = 0.
        let s = CycInt::zeta_pow(3, 0)
            .add(&CycInt::zeta_pow(3, 1))
            .add(&CycInt::zeta_pow(3, 2));
        assert!(s.is_zero());
        // Same over p = 7.
        let mut t = CycInt::zero(7);
        for k in 0..7 {
            t = t.add(&CycInt::zeta_pow(7, k));
        }
        assert!(t.is_zero());
    }

    #[test]
    fn conjugation_and_i_arithmetic() {
        let i = CycInt::i_power(3, 1);
        assert_eq!(i.conj(), CycInt::i_power(3, 3));
        assert_eq!(i.mul(&i), CycInt::from_int(3, -1));
        let z = CycInt::zeta_pow(7, 2);
        assert_eq!(z.conj(), CycInt::zeta_pow(7, 5));
        assert_eq!(z.conj().conj(), z);
        // ζ^a · ζ^b = ζ^{a+b} around the fold.
        assert_eq!(
            CycInt::zeta_pow(3, 2).mul(&CycInt::zeta_pow(3, 2)),
            CycInt::zeta_pow(3, 1)
        );
    }

    #[test]
    fn embedding_has_unit_roots() {
        let (re, im) = CycInt::zeta_pow(7, 1).embed();
        assert!((re.hypot(im) - 1.0).abs() < 1e-12);
        let (re, im) = CycInt::i_power(7, 1).embed();
        assert!((re - 0.0).abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
        // Norm of 1 + ζ_3: |1+ζ_3|² = (1+ζ)(1+ζ̄) = 2 + ζ + ζ² = 1.
        let z = CycInt::from_int(3, 1).add(&CycInt::zeta_pow(3, 1));
        assert_eq!(z.norm_squared().as_int().unwrap(), BigInt::from(1));
    }

    #[test]
    fn counts_round_trip() {
        // counts: one of each unit i^k ζ^t over p = 3.
        let mut counts = vec![0i64; 12];
        counts[0 * 3 + 1] = 2; // 2·ζ
        counts[1 * 3 + 0] = 1; // i
        counts[2 * 3 + 2] = 3; // −3·ζ²  (as i²·ζ²·3)
        let z = CycInt::from_counts(3, &counts);
        let expect = CycInt::zeta_pow(3, 1)
            .scale_i64(2)
            .add(&CycInt::i_power(3, 1))
            .add(&CycInt::zeta_pow(3, 2).scale_i64(-3));
        assert_eq!(z, expect);
        // Gaussian extraction.
        assert_eq!(
            CycInt::from_gauss(3, BigInt::from(4), BigInt::from(-7)).as_gauss().unwrap(),
            (BigInt::from(4), BigInt::from(-7))
        );
        assert_eq!(CycInt::zeta_pow(3, 1).as_gauss(), None);
    }

    #[test]
    fn symbol_multiplication_mirrors_exponent_addition() {
        use crate::chars::SymbolExp;
        for k1 in 0..4u8 {
            for k2 in 0..4u8 {
                let z = CycInt::from_symbol(7, SymbolExp::Exp(k1))
                    .mul_symbol(SymbolExp::Exp(k2));
                assert_eq!(z, CycInt::i_power(7, (k1 + k2) % 4));
            }
        }
        assert!(CycInt::one(7).mul_symbol(SymbolExp::Zero).is_zero());
    }
}
