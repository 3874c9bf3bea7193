//! The residue constants: numeric Euler products `P(u)` and `Z(u,v)`, the
//! exact direct `N`-sum oracle guarding `Z`'s product form, and the composed
//! main term.
//!
//! `P(u) = Π_{P₁} (1 − u^{deg P₁} Π_{P₂|P₁} (1 + u^{deg P₂})^{−1})` runs over
//! monic base primes, with the inner product over the extension primes above
//! each. A degree-`d` base prime stays prime upstairs exactly when `d` is
//! odd and splits into two conjugates of degree `d/2` when `d` is even, so
//! the local factor depends only on `d`:
//!
//! ```text
//! d odd:  1 − u^d (1 + u^d)^{−1}          d even:  1 − u^d (1 + u^{d/2})^{−2}
//! ```
//!
//! raised to the number of degree-`d` base primes. The aggregated evaluation
//! is cross-checked against [`euler_p_explicit`], which enumerates the primes
//! and factors each lift instead of assuming the splitting rule.
//!
//! `Z(u,v)` is defined as the `N`-sum `Σ_N v^{4 deg N} · Π_{P₁|N} w_{deg P₁}`
//! with one weight per *distinct* prime divisor,
//!
//! ```text
//! w_d = a_d / (1 − u^d a_d),   a_d = (1+u^d)^{−1} (d odd), (1+u^{d/2})^{−2} (d even).
//! ```
//!
//! Since the weight depends only on the radical, the sum factors over primes:
//! `Z = Π_d [1 + (y^d/(1−y^d)) w_d]^{#primes of degree d}` where `y = v⁴`.
//! That factorization is derived, not quoted, so it is guarded two ways: the
//! numeric value against the literal truncated `N`-sum ([`z_direct`], built
//! by factoring every monic `N`), and the exact `y`-expansion
//! ([`z_series_coeffs`]) against the exact per-degree sums coefficient by
//! coefficient. The `v`-variable only ever enters through `y = v⁴`, which is
//! rational at every evaluation point used anywhere in this crate (e.g.
//! `v = q^{−1/2}` gives `y = q^{−2}`), so the whole layer needs no square
//! roots: local data stays in exact rationals, and high-precision decimals
//! appear only when raising to large prime-count powers.

use std::collections::BTreeMap;

use bigdecimal::BigDecimal;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::field::{FieldCtx, FqElem};
use crate::poly::factor::factor;
use crate::poly::{monic_iter, prime_count, primes_of_degree};

use super::bi::BiSeries;
use super::rat::GaussRat;

/// Failure modes of the series layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("evaluation point lies outside the convergence region")]
    Divergent,
    #[error("genus must be a nonnegative multiple of 3")]
    BadGenus,
    #[error("requested grid exceeds the configured cost ceiling")]
    CostCeiling,
}

/// A converged Euler-product evaluation with its truncation diagnostics.
#[derive(Debug, Clone)]
pub struct EulerEval {
    /// The partial product over prime degrees `≤ trunc_degree`.
    pub value: BigDecimal,
    pub trunc_degree: u32,
    /// Change contributed by the final degree increment — a convergence
    /// witness, recorded rather than recomputed by callers.
    pub delta_last: BigDecimal,
}

/// Significant digits carried internally: the requested precision plus guard
/// digits, capped below the default division precision of the decimal
/// backend so no operation silently becomes the bottleneck.
fn working_precision(precision: u64) -> u64 {
    precision.clamp(30, 90) + 10
}

fn bd_rat(r: &BigRational, wp: u64) -> BigDecimal {
    (BigDecimal::from(r.numer().clone()) / BigDecimal::from(r.denom().clone())).with_prec(wp)
}

/// `base^e` by binary powering, re-rounding after every step so digit counts
/// stay bounded. The exponent is a full big integer: prime counts at the
/// truncation degrees used here overflow `u64` already for moderate `q`.
fn bd_pow(base: &BigDecimal, e: &BigUint, wp: u64) -> BigDecimal {
    let mut acc = BigDecimal::one();
    for i in (0..e.bits()).rev() {
        acc = (&acc * &acc).with_prec(wp);
        if e.bit(i) {
            acc = (&acc * base).with_prec(wp);
        }
    }
    acc
}

fn inside_disc(x: &BigRational, q: u64) -> bool {
    x.abs() * BigRational::from_integer(BigInt::from(q)) < BigRational::one()
}

/// `Π_{P₂|P₁} (1 + u^{deg P₂})^{−1}` for a degree-`d` base prime, by the
/// splitting rule. `None` if a factor in the denominator vanishes.
fn a_factor(u: &BigRational, d: u32) -> Option<BigRational> {
    let den = if d % 2 == 1 {
        BigRational::one() + u.pow(d as i32)
    } else {
        let half = BigRational::one() + u.pow((d / 2) as i32);
        &half * &half
    };
    if den.is_zero() {
        None
    } else {
        Some(den.recip())
    }
}

/// The per-distinct-prime weight `w_d = a_d/(1 − u^d a_d)` of the `Z`-sum.
fn z_weight(u: &BigRational, d: u32) -> Result<BigRational, SeriesError> {
    let a = a_factor(u, d).ok_or(SeriesError::Divergent)?;
    let den = BigRational::one() - u.pow(d as i32) * &a;
    if den.is_zero() {
        return Err(SeriesError::Divergent);
    }
    Ok(a / den)
}

/// `P(u)` aggregated by prime degree `d ≤ trunc_degree`.
pub fn euler_p(
    q: u64,
    u: &BigRational,
    trunc_degree: u32,
    precision: u64,
) -> Result<EulerEval, SeriesError> {
    if !inside_disc(u, q) {
        return Err(SeriesError::Divergent);
    }
    let wp = working_precision(precision);
    let mut value = BigDecimal::one();
    let mut prev = value.clone();
    for d in 1..=trunc_degree {
        let a = a_factor(u, d).ok_or(SeriesError::Divergent)?;
        let local = BigRational::one() - u.pow(d as i32) * a;
        prev = value.clone();
        value = (&value * &bd_pow(&bd_rat(&local, wp), &prime_count(q, d), wp)).with_prec(wp);
    }
    Ok(EulerEval { delta_last: &value - &prev, value, trunc_degree })
}

/// `P(u)` by explicit prime enumeration: every monic base prime of degree
/// `≤ max_deg` contributes `1 − u^{deg P₁}/Π_{P₂|P₁}(1 + u^{deg P₂})`, with
/// the extension primes read off an actual factorization of the lift rather
/// than the odd/even splitting rule. Cross-check partner for [`euler_p`]
/// truncated at the same degree.
pub fn euler_p_explicit(
    ctx: &FieldCtx,
    u: &BigRational,
    max_deg: u32,
    precision: u64,
) -> BigDecimal {
    let wp = working_precision(precision);
    let mut value = BigDecimal::one();
    for d in 1..=max_deg {
        for p1 in primes_of_degree::<FqElem>(ctx, d) {
            let mut inner = BigRational::one();
            for (p2, _) in factor(&p1.lift(ctx), ctx).factors {
                inner *= BigRational::one() + u.pow(p2.deg() as i32);
            }
            let local = BigRational::one() - u.pow(d as i32) / inner;
            value = (&value * &bd_rat(&local, wp)).with_prec(wp);
        }
    }
    value
}

/// `Z` as the radical-factored Euler product, aggregated by prime degree.
/// `y` is the fourth power of the `v`-variable.
pub fn euler_z(
    q: u64,
    u: &BigRational,
    y: &BigRational,
    trunc_degree: u32,
    precision: u64,
) -> Result<EulerEval, SeriesError> {
    if !inside_disc(y, q) {
        return Err(SeriesError::Divergent);
    }
    let wp = working_precision(precision);
    let mut value = BigDecimal::one();
    let mut prev = value.clone();
    for d in 1..=trunc_degree {
        let w = z_weight(u, d)?;
        let yd = y.pow(d as i32);
        let den = BigRational::one() - &yd;
        if den.is_zero() {
            return Err(SeriesError::Divergent);
        }
        let local = BigRational::one() + yd / den * w;
        prev = value.clone();
        value = (&value * &bd_pow(&bd_rat(&local, wp), &prime_count(q, d), wp)).with_prec(wp);
    }
    Ok(EulerEval { delta_last: &value - &prev, value, trunc_degree })
}

/// Degrees of the distinct prime divisors of a monic polynomial, sorted —
/// the only data the `Z`-weight sees.
pub type RadicalProfile = Vec<u32>;

/// For each degree `m ≤ nmax`, how many monic base polynomials realize each
/// radical profile. One factorization sweep serves every later evaluation
/// point (the profile counts do not depend on `u` or `y`).
pub fn radical_profiles(ctx: &FieldCtx, nmax: u32) -> Vec<BTreeMap<RadicalProfile, u64>> {
    (0..=nmax)
        .map(|m| {
            let polys: Vec<_> = monic_iter::<FqElem>(ctx, m).collect();
            polys
                .par_iter()
                .fold(BTreeMap::new, |mut map: BTreeMap<RadicalProfile, u64>, n| {
                    let mut profile: RadicalProfile =
                        factor(n, ctx).factors.iter().map(|(p, _)| p.deg() as u32).collect();
                    profile.sort_unstable();
                    *map.entry(profile).or_insert(0) += 1;
                    map
                })
                .reduce(BTreeMap::new, |mut left, right| {
                    for (profile, count) in right {
                        *left.entry(profile).or_insert(0) += count;
                    }
                    left
                })
        })
        .collect()
}

/// Exact per-degree weight sums `Σ_{deg N = m} Π_{P|N} w_{deg P}` — the
/// coefficients of the `N`-sum as a power series in `y`, independent of `y`.
pub fn z_weight_sums(
    profiles: &[BTreeMap<RadicalProfile, u64>],
    u: &BigRational,
) -> Result<Vec<BigRational>, SeriesError> {
    let max_d = profiles
        .iter()
        .flat_map(|m| m.keys())
        .flat_map(|p| p.iter().copied())
        .max()
        .unwrap_or(0);
    let weights: Vec<BigRational> = (0..=max_d)
        .map(|d| if d == 0 { Ok(BigRational::one()) } else { z_weight(u, d) })
        .collect::<Result<_, _>>()?;
    Ok(profiles
        .iter()
        .map(|by_profile| {
            let mut total = BigRational::zero();
            for (profile, count) in by_profile {
                let mut w = BigRational::from_integer(BigInt::from(*count));
                for d in profile {
                    w *= &weights[*d as usize];
                }
                total += w;
            }
            total
        })
        .collect())
}

/// The literal truncated `N`-sum `Σ_{deg N ≤ nmax} y^{deg N} Π_{P|N} w_{deg P}`,
/// exact. This is the defining form of `Z`; the Euler factorization must
/// reproduce it.
pub fn z_direct(
    ctx: &FieldCtx,
    u: &BigRational,
    y: &BigRational,
    nmax: u32,
) -> Result<BigRational, SeriesError> {
    let by_degree = z_weight_sums(&radical_profiles(ctx, nmax), u)?;
    Ok(z_series_value(&by_degree, y))
}

/// `Σ_m y^m · by_degree[m]`, exact.
pub fn z_series_value(by_degree: &[BigRational], y: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    let mut ym = BigRational::one();
    for c in by_degree {
        total += c * &ym;
        ym *= y;
    }
    total
}

/// The `y`-expansion of the radical-factored Euler product, exact to order
/// `mmax`: `Π_{d ≤ mmax} [1 + w_d(y^d + y^{2d} + …)]^{#primes of degree d}`,
/// binomially expanded with exact big-integer binomial coefficients. Must
/// agree with [`z_weight_sums`] coefficient for coefficient — an exact,
/// truncation-free validation of the factorization.
pub fn z_series_coeffs(
    q: u64,
    u: &BigRational,
    mmax: u32,
) -> Result<Vec<BigRational>, SeriesError> {
    let m = mmax as usize;
    let mut product = BiSeries::one(m, 0);
    for d in 1..=mmax {
        let w = z_weight(u, d)?;
        // S_d = w_d·(y^d + y^{2d} + …) truncated.
        let mut s = BiSeries::zeros(m, 0);
        let mut k = d as usize;
        while k <= m {
            s.set(k, 0, GaussRat::from_rationals(w.clone(), BigRational::zero()));
            k += d as usize;
        }
        // [1 + S_d]^π via Σ_j C(π, j)·S_d^j; S_d^j vanishes once j·d > mmax.
        let pi = BigInt::from(prime_count(q, d));
        let mut local = BiSeries::one(m, 0);
        let mut s_pow = BiSeries::one(m, 0);
        let mut binom = BigInt::one();
        for j in 1..=(m / d as usize) {
            s_pow = s_pow.mul(&s);
            binom = binom * (&pi - BigInt::from(j as u64 - 1)) / BigInt::from(j as u64);
            let c = GaussRat::from_rationals(
                BigRational::from_integer(binom.clone()),
                BigRational::zero(),
            );
            local = local.add(&s_pow.scale(&c));
        }
        product = product.mul(&local);
    }
    Ok((0..=m).map(|k| product.get(k, 0).re.clone()).collect())
}

/// The residue main term at genus `g`, composed from the two Euler products
/// at `u = q^{−2}` and `v = q^{−1/2}` (so `y = v⁴ = q^{−2}`).
#[derive(Debug, Clone)]
pub struct MainTerm {
    /// `q^{2g/3}(q²−1)·P·Z` — positive.
    pub magnitude: BigDecimal,
    /// The same with the factor written `(1−q²)` — negative.
    pub paper_form: BigDecimal,
    pub p_value: BigDecimal,
    pub z_value: BigDecimal,
    pub trunc_degree: u32,
}

pub fn main_term(
    q: u64,
    g: u64,
    trunc_degree: u32,
    precision: u64,
) -> Result<MainTerm, SeriesError> {
    if g % 3 != 0 {
        return Err(SeriesError::BadGenus);
    }
    let wp = working_precision(precision);
    let u = BigRational::new(BigInt::one(), BigInt::from(q * q));
    let p = euler_p(q, &u, trunc_degree, precision)?;
    let z = euler_z(q, &u, &u, trunc_degree, precision)?;
    let scale = BigDecimal::from(BigInt::from(q).pow(2 * g as u32 / 3) * (q * q - 1));
    let magnitude = (scale * &p.value * &z.value).with_prec(wp);
    Ok(MainTerm {
        paper_form: -&magnitude,
        magnitude,
        p_value: p.value,
        z_value: z.value,
        trunc_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn empty_products_evaluate_to_one() {
        let p = euler_p(3, &BigRational::zero(), 10, 50).unwrap();
        assert_eq!(p.value, BigDecimal::one());
        let z = euler_z(3, &BigRational::zero(), &BigRational::zero(), 10, 50).unwrap();
        assert_eq!(z.value, BigDecimal::one());
    }

    #[test]
    fn points_on_or_past_the_convergence_circle_are_rejected() {
        assert!(matches!(euler_p(3, &rat(1, 2), 5, 50), Err(SeriesError::Divergent)));
        assert!(matches!(euler_p(3, &rat(1, 3), 5, 50), Err(SeriesError::Divergent)));
        assert!(matches!(euler_z(3, &rat(1, 9), &rat(1, 3), 5, 50), Err(SeriesError::Divergent)));
        assert!(matches!(main_term(3, 4, 5, 50), Err(SeriesError::BadGenus)));
    }

    #[test]
    fn zero_u_collapses_z_to_the_zeta_geometric_series() {
        // At u = 0 every weight is 1 and Z = Σ_N y^{deg N} = 1/(1 − q y).
        let y = rat(1, 81);
        let z = euler_z(3, &BigRational::zero(), &y, 40, 50).unwrap();
        let closed = 81.0 / 78.0;
        let got = z.value.to_f64().unwrap();
        assert!((got - closed).abs() < 1e-12, "got {got}, want {closed}");
    }

    #[test]
    fn radical_expansion_matches_the_exact_degree_sums() {
        let ctx = FieldCtx::new(3).unwrap();
        let u = rat(1, 9);
        let direct = z_weight_sums(&radical_profiles(&ctx, 4), &u).unwrap();
        let expanded = z_series_coeffs(3, &u, 4).unwrap();
        assert_eq!(direct, expanded);
        assert_eq!(direct[0], BigRational::one());
        // Degree 1: three linear N, each a single distinct prime of degree 1;
        // w_1 = a/(1 − u·a) with a = 1/(1+u) collapses to 1 at u = 1/9.
        assert_eq!(direct[1], rat(3, 1));
    }

    #[test]
    fn main_term_signs_and_composition() {
        let mt = main_term(3, 3, 12, 40).unwrap();
        assert!(mt.magnitude.to_f64().unwrap() > 0.0);
        assert_eq!(mt.paper_form, -mt.magnitude.clone());
        let q2g3 = 9.0;
        let product =
            q2g3 * 8.0 * mt.p_value.to_f64().unwrap() * mt.z_value.to_f64().unwrap();
        assert!((mt.magnitude.to_f64().unwrap() - product).abs() < 1e-9);
    }

    #[test]
    fn big_exponent_powering_matches_small_cases() {
        let base = bd_rat(&rat(3, 2), 60);
        let small = bd_pow(&base, &BigUint::from(10u32), 60);
        assert!((small.to_f64().unwrap() - 1.5f64.powi(10)).abs() < 1e-9);
        assert_eq!(bd_pow(&base, &BigUint::zero(), 60), BigDecimal::one());
    }
}
