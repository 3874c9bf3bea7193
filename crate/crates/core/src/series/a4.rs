//! The double series `A₄(u,v)` two ways, plus the family-size series.
//!
//! The defining form sums central-strip data over the character family:
//! the coefficient of `u^a v^b` is `Σ_{F in family, deg F = a} Σ_{deg f = b}
//! χ_F(f)` with `f` running over monic base polynomials (the degree-0
//! modulus `F = 1` is included, contributing the trivial-character row
//! `q^b`). The rewrite swaps summation order and, for each monic base `N`,
//! assembles
//!
//! ```text
//! v^{deg N} · [L(u, χ^{(N)}) / L(u², χ^{2(N)})] · P(u, χ^{(N)})
//!           · Π_{P₁ | N} (1 − u^{deg P₁})^{−1}
//! ```
//!
//! where `χ^{(N)}` evaluates the quartic symbol of `N` at extension primes,
//! `L(u, χ^{(N)}) = Π_{P₂} (1 − χ_{P₂}(N) u^{deg P₂})^{−1}`, and
//! `P(u, χ^{(N)}) = Π_{P₁} (1 − u^{deg P₁} Π_{P₂|P₁}(1 + χ_{P₂}(N)
//! u^{deg P₂})^{−1})` runs over *all* base primes (for `P₁ | N` the inner
//! symbols vanish and the explicit geometric factor cancels the resulting
//! `1 − u^{deg P₁}`). Both sides are computed exactly on a truncation grid
//! and compared coefficient-for-coefficient.
//!
//! Truncation-exactness rule: every Euler factor over a prime of degree
//! `> umax` is `1 + O(u^{umax+1})`, so dropping it cannot change any
//! retained coefficient; [`a4_nsum_with_prime_cutoff`] exposes the cutoff
//! so tests can raise it and assert bit-identical grids.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::chars::{enumerate_family, char_sum_monic_degree, CharEvaluator, FamilyPredicate, SymbolTables};
use crate::field::{FieldCtx, Fq2Elem, FqElem};
use crate::gauss::Budget;
use crate::poly::factor::factor;
use crate::poly::{monic_iter, prime_count, primes_of_degree, BasePoly, ExtPoly};

use super::bi::BiSeries;
use super::euler::SeriesError;
use super::rat::GaussRat;

/// The defining family sum, exact on the `(umax, vmax)` grid.
pub fn a4_direct(
    ctx: &FieldCtx,
    umax: usize,
    vmax: usize,
    tables: &SymbolTables,
    predicate: FamilyPredicate,
    budget: Budget,
) -> Result<BiSeries, SeriesError> {
    let q = ctx.p() as i64;
    let mut grid = BiSeries::zeros(umax, vmax);
    // Degree-0 row: the trivial character sums to the number of monic base
    // polynomials of each degree.
    let mut count = 1i64;
    for b in 0..=vmax {
        grid.set(0, b, GaussRat::from_int(count));
        count *= q;
    }
    for a in 1..=umax {
        let family = enumerate_family(ctx, 3 * (a as u64 - 1), predicate)
            .expect("genus 3(a−1) is always a multiple of 3");
        let monic_terms: u128 = (0..=vmax as u32).map(|b| (q as u128).pow(b)).sum();
        budget
            .check(family.len() as u128 * monic_terms)
            .map_err(|_| SeriesError::CostCeiling)?;
        let row = family
            .par_iter()
            .map(|chi| {
                let eval = CharEvaluator::new(chi.clone(), tables, ctx);
                (0..=vmax)
                    .map(|b| char_sum_monic_degree(&eval, b as u32, ctx))
                    .collect::<Vec<_>>()
            })
            .reduce(
                || vec![(0i64, 0i64); vmax + 1],
                |mut acc, member| {
                    for (slot, (re, im)) in acc.iter_mut().zip(member) {
                        slot.0 += re;
                        slot.1 += im;
                    }
                    acc
                },
            );
        for (b, (re, im)) in row.into_iter().enumerate() {
            grid.set(a, b, GaussRat::from_pair(re, im));
        }
    }
    Ok(grid)
}

/// The swapped-order rewrite with the default (provably sufficient) prime
/// cutoff `umax`.
pub fn a4_nsum(
    ctx: &FieldCtx,
    umax: usize,
    vmax: usize,
    tables: &SymbolTables,
    budget: Budget,
) -> Result<BiSeries, SeriesError> {
    a4_nsum_with_prime_cutoff(ctx, umax, vmax, umax, tables, budget)
}

/// The rewrite with an explicit prime-degree cutoff (≥ umax). Raising the
/// cutoff beyond `umax` must not change any coefficient.
pub fn a4_nsum_with_prime_cutoff(
    ctx: &FieldCtx,
    umax: usize,
    vmax: usize,
    cutoff: usize,
    tables: &SymbolTables,
    budget: Budget,
) -> Result<BiSeries, SeriesError> {
    assert!(cutoff >= umax, "a cutoff below umax would drop retained orders");
    // Extension primes carrying the symbol factors, and base primes with
    // their extension factorizations for the all-primes product.
    let mut ext_primes: Vec<ExtPoly> = Vec::new();
    for d in 1..=cutoff {
        ext_primes.extend(primes_of_degree::<Fq2Elem>(ctx, d as u32));
    }
    let mut base_primes: Vec<(BasePoly, Vec<ExtPoly>)> = Vec::new();
    for d in 1..=cutoff {
        for p1 in primes_of_degree::<FqElem>(ctx, d as u32) {
            let lifted = p1.lift(ctx);
            let exts: Vec<ExtPoly> =
                factor(&lifted, ctx).factors.into_iter().map(|(p, _)| p).collect();
            base_primes.push((p1, exts));
        }
    }
    // Symbol tables once, before the parallel scan.
    for p2 in &ext_primes {
        tables.get(p2, ctx);
    }

    let moduli: Vec<BasePoly> = (0..=vmax)
        .flat_map(|b| monic_iter::<FqElem>(ctx, b as u32).collect::<Vec<_>>())
        .collect();
    let symbol_work = moduli.len() as u128 * (ext_primes.len() + base_primes.len()) as u128;
    budget.check(symbol_work).map_err(|_| SeriesError::CostCeiling)?;

    let grid = moduli
        .par_iter()
        .map(|n| per_term(n, umax, &ext_primes, &base_primes, tables, ctx))
        .fold(
            || BiSeries::zeros(umax, vmax),
            |mut acc, (b, term)| {
                for a in 0..=umax {
                    acc.add_at(a, b, term.get(a, 0));
                }
                acc
            },
        )
        .reduce(|| BiSeries::zeros(umax, vmax), |x, y| x.add(&y));
    Ok(grid)
}

/// One `N`-term of the rewrite as a univariate `u`-series, tagged with the
/// `v`-column it lands in.
fn per_term(
    n: &BasePoly,
    umax: usize,
    ext_primes: &[ExtPoly],
    base_primes: &[(BasePoly, Vec<ExtPoly>)],
    tables: &SymbolTables,
    ctx: &FieldCtx,
) -> (usize, BiSeries) {
    let lifted = n.lift(ctx);
    // L-ratio: reciprocal of Π(1 − χ_{P₂}(N)u^{d₂}) times Π(1 − χ²_{P₂}(N)u^{2d₂}).
    let mut num_inv = BiSeries::one(umax, 0);
    let mut den_inv = BiSeries::one(umax, 0);
    for p2 in ext_primes {
        let d = p2.deg();
        if d > umax {
            continue;
        }
        let s = tables.get(p2, ctx).eval(&lifted, ctx);
        if s.is_zero() {
            continue;
        }
        num_inv = num_inv.mul(&BiSeries::one_plus_u(
            umax,
            0,
            d,
            GaussRat::from_symbol(s).neg(),
        ));
        if 2 * d <= umax {
            den_inv = den_inv.mul(&BiSeries::one_plus_u(
                umax,
                0,
                2 * d,
                GaussRat::from_symbol(s.pow(2)).neg(),
            ));
        }
    }
    let l_ratio = num_inv.reciprocal().mul(&den_inv);

    // All-primes product: 1 − u^{d₁}·Π_{P₂|P₁}(1 + χ_{P₂}(N)u^{d₂})^{−1}.
    let mut pfac = BiSeries::one(umax, 0);
    for (p1, exts) in base_primes {
        let d1 = p1.deg();
        if d1 > umax {
            continue;
        }
        let mut inner = BiSeries::one(umax, 0);
        for p2 in exts {
            let s = tables.get(p2, ctx).eval(&lifted, ctx);
            inner =
                inner.mul(&BiSeries::one_plus_u(umax, 0, p2.deg(), GaussRat::from_symbol(s)));
        }
        let local = BiSeries::one(umax, 0).sub(&inner.reciprocal().shift_u(d1));
        pfac = pfac.mul(&local);
    }

    // Geometric correction over the primes dividing N (any degree; factors
    // beyond the grid truncate to 1 on both sides).
    let mut geo_inv = BiSeries::one(umax, 0);
    for (p1, _) in &factor(n, ctx).factors {
        geo_inv = geo_inv.mul(&BiSeries::one_plus_u(
            umax,
            0,
            p1.deg(),
            GaussRat::from_int(-1),
        ));
    }
    let term = l_ratio.mul(&pfac).mul(&geo_inv.reciprocal());
    (n.deg(), term)
}

/// Predicted number of family moduli of each degree `n ≤ umax`, from the
/// Euler-product identity
///
/// ```text
/// Σ_{family F} u^{deg F} = Π_{P₁} (1 − u^{deg P₁} Π_{P₂|P₁}(1 + u^{deg P₂})^{−1})
///                          · ζ_{q²}(s)/ζ_{q²}(2s)
/// ```
///
/// (the square-free extension series times the same all-primes product that
/// appears in the rewrite, specialized to trivial symbol values). Every local
/// factor closes in elementary terms — inert base primes contribute exactly
/// 1, split pairs exactly `1 + 2u^{d/2}` — so the coefficients are integers
/// by construction, and they must equal the enumerated family counts.
pub fn family_count_series(ctx: &FieldCtx, umax: usize) -> Vec<BigInt> {
    let q = ctx.p() as u64;
    let q2 = GaussRat::from_int((q * q) as i64);
    let mut series = BiSeries::one(umax, 0);
    for d in 1..=umax {
        let count = prime_count(q, d as u32)
            .to_u64()
            .expect("aggregated prime counts at series truncations fit u64");
        // Π_{P₂|P₁}(1 + u^{deg P₂}) for a degree-d base prime: inert (d odd)
        // keeps one extension prime of degree d, split (d even) two of d/2.
        let inner = if d % 2 == 1 {
            BiSeries::one_plus_u(umax, 0, d, GaussRat::one())
        } else {
            let half = BiSeries::one_plus_u(umax, 0, d / 2, GaussRat::one());
            half.mul(&half)
        };
        let local = BiSeries::one(umax, 0).sub(&inner.reciprocal().shift_u(d));
        for _ in 0..count {
            series = series.mul(&local);
        }
    }
    // ζ_{q²}(s)/ζ_{q²}(2s) in u: (1 − q²u²)·Σ_k q^{2k} u^k.
    let mut zeta_ratio = BiSeries::zeros(umax, 0);
    let mut pw = GaussRat::one();
    for k in 0..=umax {
        zeta_ratio.set(k, 0, pw.clone());
        pw = pw.mul(&q2);
    }
    zeta_ratio = zeta_ratio.sub(&zeta_ratio.scale(&q2).shift_u(2));
    series = series.mul(&zeta_ratio);

    (0..=umax)
        .map(|n| {
            let c = series.get(n, 0);
            assert!(
                c.im.numer().to_string() == "0" && c.re.is_integer(),
                "family-size coefficients are integers"
            );
            c.re.to_integer()
        })
        .collect()
}
