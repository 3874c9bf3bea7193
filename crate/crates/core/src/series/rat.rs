//! Exact Gaussian-rational scalars: pairs `x + y·i` of arbitrary-precision
//! rationals. These carry the coefficients of every truncated series in this
//! module tree; nothing here ever rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chars::SymbolExp;

/// An exact Gaussian rational `re + im·i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        GaussRat { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_pair(n, 0)
    }

    pub fn from_pair(re: i64, im: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn from_rationals(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    /// The value of a quartic-symbol evaluation as a scalar: `i^k`, or 0.
    pub fn from_symbol(s: SymbolExp) -> Self {
        let (re, im) = s.gauss_pair();
        Self::from_pair(re, im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussRat { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaussRat { re: &self.re - &other.re, im: &self.im - &other.im }
    }

    pub fn neg(&self) -> Self {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    /// Multiplicative inverse; `None` exactly at zero.
    pub fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(GaussRat { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale_rat(&self, r: &BigRational) -> Self {
        GaussRat { re: &self.re * r, im: &self.im * r }
    }

    /// Float embedding for reports; exactness lives in the fields.
    pub fn embed(&self) -> (f64, f64) {
        (rat_f64(&self.re), rat_f64(&self.im))
    }

    /// `true` when both parts are integers (denominator 1).
    pub fn is_gauss_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }
}

/// Float value of a rational, robust to numerators/denominators that each
/// overflow `f64` on their own.
pub fn rat_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let digits = |x: &BigInt| x.to_string().len() as i32;
        let shift = (digits(r.numer()) - digits(r.denom())).clamp(-250, 250);
        let scaled = if shift >= 0 {
            BigRational::new(r.numer().clone(), r.denom() * BigInt::from(10u32).pow(shift as u32))
        } else {
            BigRational::new(r.numer() * BigInt::from(10u32).pow(-shift as u32), r.denom().clone())
        };
        scaled.to_f64().unwrap_or(if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
            * 10f64.powi(shift)
    })
}

/// Canonical `"numerator/denominator"` form used by all JSON output.
pub fn rat_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_values_are_fourth_roots_of_unity() {
        assert!(GaussRat::from_symbol(SymbolExp::Zero).is_zero());
        assert!(GaussRat::from_symbol(SymbolExp::exp(0)).is_one());
        let i = GaussRat::from_symbol(SymbolExp::exp(1));
        assert_eq!(i.mul(&i), GaussRat::from_int(-1));
        assert_eq!(i.mul(&i).mul(&i), GaussRat::from_symbol(SymbolExp::exp(3)));
        assert_eq!(i.mul(&i).mul(&i).mul(&i), GaussRat::one());
    }

    #[test]
    fn inverse_clears_to_one() {
        let x = GaussRat::from_pair(3, -5);
        assert_eq!(x.mul(&x.inv().unwrap()), GaussRat::one());
        assert!(GaussRat::zero().inv().is_none());
    }

    #[test]
    fn string_form_is_numerator_slash_denominator() {
        let r = BigRational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(rat_string(&r), "-3/2");
        assert_eq!(rat_string(&BigRational::from_integer(BigInt::from(7))), "7/1");
    }

    #[test]
    fn float_embedding_matches_small_values() {
        let x = GaussRat::from_pair(1, -2).scale_rat(&BigRational::new(
            BigInt::from(1),
            BigInt::from(4),
        ));
        let (re, im) = x.embed();
        assert!((re - 0.25).abs() < 1e-15);
        assert!((im + 0.5).abs() < 1e-15);
    }
}
