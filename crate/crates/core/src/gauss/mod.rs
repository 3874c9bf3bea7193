//! Generalized Gauss sums over `F_q²[T]`, full-character Gauss sums over
//! `F_q[T]`, and the root number of a family character.
//!
//! `G(V, f) = Σ_{u mod f} χ_f(u)·e(uV/f)` has two independent evaluators:
//!
//! * [`gauss_sum_brute`] sums the definition literally (exact, budgeted);
//! * [`gauss_sum_factored`] assembles the value from the factorization of
//!   `f` by coprime multiplicativity `G(V, f₁f₂) = χ_{f₁}(f₂)²·G(V,f₁)·G(V,f₂)`
//!   and a case analysis at prime powers: writing `V = V₁P^α` with `P ∤ V₁`,
//!
//!   | case                    | value                         |
//!   |-------------------------|-------------------------------|
//!   | `i ≤ α`, `4 ∤ i`        | `0`                           |
//!   | `i ≤ α`, `4 | i`        | `φ(P^i)`                      |
//!   | `i = α+1`, `4 | i`      | `−|P|₂^{i−1}`                 |
//!   | `i = α+1`, `4 ∤ i`      | `χ̄_{P^i}(V₁)·G(P^{i−1}, P^i)` |
//!   | `i ≥ α+2`               | `0`                           |
//!
//!   The primitive value `G(P^{i−1}, P^i)` has no closed form; it is brute
//!   forced once per `(P, i)` and cached ([`GaussCache`]), which keeps the
//!   factored evaluator non-circular — its agreement with the brute evaluator
//!   is a theorem to verify, not a definition.
//!
//! Every brute enumeration is guarded by a [`Budget`] (default `10⁷`
//! residues) and fails loudly with [`GaussError::CostCeiling`] rather than
//! degrade. All values are exact [`CycInt`]s; only magnitude checks embed
//! into floating point.

pub mod brute;
pub mod cyclo;

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint};

use crate::chars::{
    char_eval_ext, char_sum_monic_degree, quartic_symbol_unchecked, CharEvaluator,
    QuarticCharacter, SymbolExp, SymbolTables,
};
use crate::field::{FieldCtx, FieldElem, Fq2Elem};
use crate::poly::factor::factor;
use crate::poly::{all_below_degree, euler_phi_prime_power, ExtPoly, Poly};
pub use brute::{gauss_sum_brute, gauss_sum_prime_walk};
pub use cyclo::CycInt;
use thiserror::Error;

/// Cap on the number of residues any single brute enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_residues: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_residues: 10_000_000 }
    }
}

impl Budget {
    pub fn new(max_residues: u128) -> Self {
        Budget { max_residues }
    }

    pub fn check(&self, cost: u128) -> Result<(), GaussError> {
        if cost > self.max_residues {
            Err(GaussError::CostCeiling { cost, budget: self.max_residues })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("brute enumeration of {cost} residues exceeds the budget of {budget}")]
    CostCeiling { cost: u128, budget: u128 },
}

/// The additive character `e(a/h) = ζ_p^{Tr((a mod h)_{deg h − 1})` over
/// `F_q²[T]`: the trace (down to `F_p`) of the `1/T`-coefficient of `a/h`.
pub fn additive_char(a: &ExtPoly, h: &ExtPoly, ctx: &FieldCtx) -> CycInt {
    assert!(h.is_monic() && !h.is_constant(), "additive character needs deg h ≥ 1");
    let r = a.rem(h, ctx).expect("nonzero modulus");
    let top = r.coeff(h.deg() - 1);
    CycInt::zeta_pow(ctx.p(), Fq2Elem::trace_to_prime(ctx, top) as u32)
}

/// Insert-only cache of primitive prime-power Gauss sums `G(P^{i−1}, P^i)`.
/// Duplicate fills are permitted (results are identical); hits are
/// bit-identical to recomputation.
#[derive(Default)]
pub struct GaussCache {
    map: DashMap<(ExtPoly, u32), CycInt>,
}

impl GaussCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `G(P^{i−1}, P^i)`, brute-forced on first request.
    pub fn primitive(
        &self,
        prime: &ExtPoly,
        i: u32,
        ctx: &FieldCtx,
        tables: &SymbolTables,
        budget: Budget,
    ) -> Result<CycInt, GaussError> {
        let key = (prime.clone(), i);
        if let Some(v) = self.map.get(&key) {
            return Ok(v.clone());
        }
        let value = if i == 1 {
            // Prime modulus: the unit-group walk needs no residue tables and
            // is what makes large-degree primes affordable.
            gauss_sum_prime_walk(prime, ctx, budget)?
        } else {
            let modulus = prime.pow(i, ctx);
            let v = prime.pow(i - 1, ctx);
            gauss_sum_brute(&v, &modulus, ctx, tables, budget)?
        };
        self.map.insert(key, value.clone());
        Ok(value)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// `G(V, f)` assembled from the factorization of `f` (see module docs).
pub fn gauss_sum_factored(
    v: &ExtPoly,
    f: &ExtPoly,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    cache: &GaussCache,
    budget: Budget,
) -> Result<CycInt, GaussError> {
    assert!(f.is_monic(), "Gauss-sum moduli are monic");
    if f.is_constant() {
        return Ok(CycInt::one(ctx.p()));
    }
    gauss_sum_from_factorization(v, f, &factor(f, ctx).factors, ctx, tables, cache, budget)
}

/// Same as [`gauss_sum_factored`], but with the factorization of the monic
/// modulus `f` supplied by the caller — sweeps that already factored `f` for
/// other reasons avoid doing it twice.
pub fn gauss_sum_from_factorization(
    v: &ExtPoly,
    f: &ExtPoly,
    factors: &[(ExtPoly, u32)],
    ctx: &FieldCtx,
    tables: &SymbolTables,
    cache: &GaussCache,
    budget: Budget,
) -> Result<CycInt, GaussError> {
    let p = ctx.p();
    let mut rest = f.clone();
    let mut acc = CycInt::one(p);
    for (prime, e) in factors {
        let pe = prime.pow(*e, ctx);
        rest = rest.divrem(&pe, ctx).expect("nonzero divisor").0;
        let gpp = gauss_prime_power(v, prime, *e, ctx, tables, cache, budget)?;
        if gpp.is_zero() {
            return Ok(CycInt::zero(p));
        }
        // Coprime-multiplicativity twist χ_{P^e}(rest)² = χ_P(rest)^{2e}.
        let tw = quartic_symbol_unchecked(&rest, prime, ctx).pow(2 * e);
        acc = acc.mul(&gpp).mul_symbol(tw);
    }
    Ok(acc)
}

/// One prime-power case `G(V, P^i)` of the table in the module docs.
fn gauss_prime_power(
    v: &ExtPoly,
    prime: &ExtPoly,
    i: u32,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    cache: &GaussCache,
    budget: Budget,
) -> Result<CycInt, GaussError> {
    debug_assert!(i >= 1);
    let p = ctx.p();
    // V = V₁·P^α with P ∤ V₁; V = 0 acts as α = ∞.
    let (alpha, v1) = split_prime_power(v, prime, ctx);
    let below_alpha = match alpha {
        None => true,
        Some(a) => i <= a,
    };
    if below_alpha {
        return Ok(if i % 4 == 0 {
            CycInt::from_bigint(p, BigInt::from(euler_phi_prime_power(ctx, prime, i)))
        } else {
            CycInt::zero(p)
        });
    }
    let alpha = alpha.expect("non-infinite order past the α cases");
    if i == alpha + 1 {
        if i % 4 == 0 {
            let size = BigInt::from(BigUint::from(ctx.ext_order()).pow(prime.deg() as u32));
            return Ok(CycInt::from_bigint(p, -size.pow(i - 1)));
        }
        let v1 = v1.expect("V ≠ 0 here");
        let tw = quartic_symbol_unchecked(&v1, prime, ctx).pow(i).conj();
        let prim = cache.primitive(prime, i, ctx, tables, budget)?;
        return Ok(prim.mul_symbol(tw));
    }
    Ok(CycInt::zero(p))
}

/// Splits `V = V₁·P^α` with `P ∤ V₁`; returns `(None, None)` for `V = 0`.
fn split_prime_power(
    v: &ExtPoly,
    prime: &ExtPoly,
    ctx: &FieldCtx,
) -> (Option<u32>, Option<ExtPoly>) {
    if v.is_zero() {
        return (None, None);
    }
    let mut alpha = 0u32;
    let mut v1 = v.clone();
    loop {
        let (q, r) = v1.divrem(prime, ctx).expect("nonzero divisor");
        if r.is_zero() {
            alpha += 1;
            v1 = q;
        } else {
            return (Some(alpha), Some(v1));
        }
    }
}

/// Full-character Gauss sum `G_q(χ) = Σ_{a mod h} χ(a)·e_q(a/h)` over the
/// base ring, `h` the conductor. The base-field trace to `F_p` is the
/// identity (the base field has prime order here).
pub fn gauss_full_char(
    chi: &QuarticCharacter,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    budget: Budget,
) -> Result<CycInt, GaussError> {
    let p = ctx.p();
    let m = chi.conductor.deg();
    let cost = (p as u128)
        .checked_pow(m as u32)
        .ok_or(GaussError::CostCeiling { cost: u128::MAX, budget: budget.max_residues })?;
    budget.check(cost)?;
    let eval = CharEvaluator::new(chi.clone(), tables, ctx);
    let mut counts = vec![0i64; 4 * p as usize];
    for a in all_below_degree::<crate::field::FqElem>(ctx, m as u32) {
        if let SymbolExp::Exp(k) = eval.eval_base(&a, ctx) {
            let t = a.coeff(m - 1).0 as usize;
            counts[k as usize * p as usize + t] += 1;
        }
    }
    Ok(CycInt::from_counts(p, &counts))
}

/// The Gauss sum of the restriction of `χ` to the base constants, plus the
/// evenness flag. By convention the sign `ε(χ)` is `1` for even characters;
/// for odd restrictions it is `q^{−1/2}·τ`, kept in the formal pair rather
/// than materialized (no exact `√q` in the ring).
pub struct TauEpsilon {
    pub tau: CycInt,
    pub even: bool,
}

pub fn tau_and_epsilon(chi: &QuarticCharacter, ctx: &FieldCtx) -> TauEpsilon {
    let p = ctx.p();
    let mut tau = CycInt::zero(p);
    let mut even = true;
    for c in 1..p as u64 {
        let sym = char_eval_ext(chi, &Poly::constant(ctx.ext(c, 0)), ctx);
        if sym != SymbolExp::Exp(0) {
            even = false;
        }
        tau = tau.add(&CycInt::zeta_pow(p, c as u32).mul_symbol(sym));
    }
    TauEpsilon { tau, even }
}

/// The root number `ω(χ)` by both formulas: the coefficient sum
/// `ω = −q^{1−n}·Σ_{deg f = 2n−1} χ(f)` (returned value) and the Gauss-sum
/// form `ω = q^{−n}·G_q(χ)` for even characters; the discrepancy between the
/// two embeddings is stored, and `exact_match` compares them in the ring.
pub struct RootNumber {
    /// Gaussian-integer numerator of the sum form: `−Σ_{deg f = 2n−1} χ(f)`.
    pub numerator: (BigInt, BigInt),
    /// `ω = numerator / q^{denom_exp}`.
    pub denom_exp: u32,
    /// `G_q(χ)`; the Gauss form is this over `q^n`.
    pub gauss_value: CycInt,
    /// Complex value of the sum form.
    pub complex: (f64, f64),
    /// Complex value of the Gauss form.
    pub gauss_complex: (f64, f64),
    /// `|ω_sum − ω_gauss|` in the embedding.
    pub discrepancy: f64,
    /// Ring-exact agreement `q·numerator = G_q(χ)`.
    pub exact_match: bool,
}

pub fn root_number(
    chi: &QuarticCharacter,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    budget: Budget,
) -> Result<RootNumber, GaussError> {
    let p = ctx.p();
    let n = chi.degree_f as u32;
    debug_assert!(n >= 1);
    let eval = CharEvaluator::new(chi.clone(), tables, ctx);
    let (re, im) = char_sum_monic_degree(&eval, 2 * n - 1, ctx);
    let numerator = (BigInt::from(-re), BigInt::from(-im));
    let denom_exp = n - 1;
    let gauss_value = gauss_full_char(chi, ctx, tables, budget)?;

    let scale = (p as f64).powi(denom_exp as i32);
    let complex = (-(re as f64) / scale, -(im as f64) / scale);
    let gscale = (p as f64).powi(n as i32);
    let (gr, gi) = gauss_value.embed();
    let gauss_complex = (gr / gscale, gi / gscale);
    let discrepancy =
        (complex.0 - gauss_complex.0).hypot(complex.1 - gauss_complex.1);
    // ω_sum = q·numerator / q^n, ω_gauss = G / q^n.
    let q_big = BigInt::from(p);
    let exact_match = CycInt::from_gauss(p, &numerator.0 * &q_big, &numerator.1 * &q_big)
        == gauss_value;
    Ok(RootNumber {
        numerator,
        denom_exp,
        gauss_value,
        complex,
        gauss_complex,
        discrepancy,
        exact_match,
    })
}

impl RootNumber {
    /// `|ω|` in the embedding (sum form).
    pub fn magnitude(&self) -> f64 {
        self.complex.0.hypot(self.complex.1)
    }
}

/// Convenience for tests: an integer power of the extension-field order as
/// a plain `f64` (exact for the small exponents in play).
pub fn ext_power_f64(ctx: &FieldCtx, e: u32) -> f64 {
    (ctx.ext_order() as f64).powi(e as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::{enumerate_family, FamilyPredicate};
    use crate::poly::parse::parse_ext_poly;
    use num_traits::Zero;

    fn f3() -> FieldCtx {
        FieldCtx::new(3).unwrap()
    }

    fn setup() -> (FieldCtx, SymbolTables, GaussCache, Budget) {
        (f3(), SymbolTables::new(), GaussCache::new(), Budget::default())
    }

    #[test]
    fn additive_char_worked_examples() {
        let ctx = f3();
        let t = ExtPoly::monomial(1);
        // e(1/T) = ζ^{Tr(1)} = ζ² at q = 3.
        assert_eq!(additive_char(&ExtPoly::one(), &t, &ctx), CycInt::zeta_pow(3, 2));
        // e(x/T) = ζ^{Tr(x)} = ζ⁰ = 1.
        let i_const = ExtPoly::constant(ctx.i_elem());
        assert_eq!(additive_char(&i_const, &t, &ctx), CycInt::one(3));
        // Multiples of the modulus reduce to e(0) = 1.
        let h = parse_ext_poly(&ctx, "T^2+(1+1*i)").unwrap();
        let a = h.mul(&parse_ext_poly(&ctx, "T+(2+1*i)").unwrap(), &ctx);
        assert_eq!(additive_char(&a, &h, &ctx), CycInt::one(3));
    }

    #[test]
    fn additive_char_is_additive_in_the_numerator() {
        let ctx = f3();
        for h in [
            ExtPoly::monomial(1),
            parse_ext_poly(&ctx, "T^2+(0+1*i)*T+2").unwrap(),
        ] {
            let d = h.deg() as u32;
            let residues: Vec<ExtPoly> = all_below_degree::<Fq2Elem>(&ctx, d).collect();
            for a in &residues {
                for b in residues.iter().step_by(5) {
                    let lhs = additive_char(&a.add(b, &ctx), &h, &ctx);
                    let rhs = additive_char(a, &h, &ctx).mul(&additive_char(b, &h, &ctx));
                    assert_eq!(lhs, rhs, "h = {h:?}, a = {a:?}, b = {b:?}");
                }
            }
        }
    }

    #[test]
    fn brute_matches_square_free_base_modulus_value() {
        let (ctx, tables, _, budget) = setup();
        // G(1, T²+1) over F_9 with T²+1 from the base ring: q^{deg F} = 9.
        let f = parse_ext_poly(&ctx, "T^2+1").unwrap();
        let g = gauss_sum_brute(&ExtPoly::one(), &f, &ctx, &tables, budget).unwrap();
        assert_eq!(g.as_int().unwrap(), BigInt::from(9));
    }

    #[test]
    fn brute_primitive_prime_magnitude() {
        let (ctx, tables, _, budget) = setup();
        let pi = Poly::from_coeffs(vec![ctx.ext_neg(ctx.i_elem()), ctx.ext(1, 0)]);
        let g = gauss_sum_brute(&ExtPoly::one(), &pi, &ctx, &tables, budget).unwrap();
        // |G(1, π)|² = |π|₂ = 9, exactly in the ring.
        assert_eq!(g.norm_squared().as_int().unwrap(), BigInt::from(9));
    }

    #[test]
    fn factored_agrees_with_brute_on_spot_grid() {
        let (ctx, tables, cache, budget) = setup();
        for df in 1..=2u32 {
            for f in crate::poly::monic_iter::<Fq2Elem>(&ctx, df) {
                for v in all_below_degree::<Fq2Elem>(&ctx, 2).step_by(11) {
                    let b = gauss_sum_brute(&v, &f, &ctx, &tables, budget).unwrap();
                    let a = gauss_sum_factored(&v, &f, &ctx, &tables, &cache, budget).unwrap();
                    assert_eq!(a, b, "f = {f:?}, V = {v:?}");
                }
            }
        }
        // Empty modulus.
        let one = gauss_sum_factored(
            &ExtPoly::monomial(1),
            &ExtPoly::one(),
            &ctx,
            &tables,
            &cache,
            budget,
        )
        .unwrap();
        assert_eq!(one, CycInt::one(3));
    }

    #[test]
    fn case_table_rows_hold_exactly() {
        let (ctx, tables, cache, budget) = setup();
        let p_prime = Poly::from_coeffs(vec![ctx.i_elem(), ctx.ext(1, 0)]); // T + x
        // i = 2 = α + 2 with α = 0 (V coprime): zero (both evaluators).
        let p2 = p_prime.pow(2, &ctx);
        let v = ExtPoly::one();
        assert!(gauss_sum_brute(&v, &p2, &ctx, &tables, budget).unwrap().is_zero());
        assert!(gauss_sum_factored(&v, &p2, &ctx, &tables, &cache, budget)
            .unwrap()
            .is_zero());
        // i = 4 ≤ α: φ(P⁴) = 9³·8 when 4 | i.
        let p4 = p_prime.pow(4, &ctx);
        let v4 = p4.clone();
        let expect = BigInt::from(euler_phi_prime_power(&ctx, &p_prime, 4));
        assert_eq!(
            gauss_sum_brute(&v4, &p4, &ctx, &tables, budget).unwrap().as_int().unwrap(),
            expect
        );
        // i = 4 = α + 1 (α = 3): −|P|³ = −729.
        let v3 = p_prime.pow(3, &ctx);
        assert_eq!(
            gauss_sum_brute(&v3, &p4, &ctx, &tables, budget).unwrap().as_int().unwrap(),
            BigInt::from(-729)
        );
        // Primitive case i = 1, α = 0: |G|² = |P|₂^{2i−1} = 9.
        let g1 = gauss_sum_factored(&v, &p_prime, &ctx, &tables, &cache, budget).unwrap();
        assert_eq!(g1.norm_squared().as_int().unwrap(), BigInt::from(9));
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = f3();
        let tables = SymbolTables::new();
        let f = parse_ext_poly(&ctx, "T^3+(0+1*i)").unwrap();
        let err = gauss_sum_brute(&ExtPoly::one(), &f, &ctx, &tables, Budget::new(100))
            .unwrap_err();
        assert_eq!(err, GaussError::CostCeiling { cost: 729, budget: 100 });
    }

    #[test]
    fn unit_group_walk_matches_odometer_on_all_small_primes() {
        // Two independent evaluations of G(1, π): the odometer enumerates
        // residues positionally, the walk enumerates them as generator
        // powers. Agreement is bit-exact, not just up to magnitude.
        let (ctx, tables, _, budget) = setup();
        for d in 1..=2 {
            for pi in crate::poly::primes_of_degree::<Fq2Elem>(&ctx, d) {
                let walk = gauss_sum_prime_walk(&pi, &ctx, budget).unwrap();
                let brute =
                    gauss_sum_brute(&ExtPoly::one(), &pi, &ctx, &tables, budget).unwrap();
                assert_eq!(walk, brute, "π = {pi:?}");
            }
        }
    }

    #[test]
    fn full_char_gauss_sum_magnitude_and_cross_ring_relation() {
        // Partial fractions over the conductor h = F·F^σ give, termwise,
        // e_q(a/h) = e(a·(F^σ)^{−1}/F), so the base-ring and extension-ring
        // Gauss sums differ by exactly the twist unit:
        //   G_q(χ_F) = χ_F(F^σ)·G_{q²}(1, F),  χ_F(F^σ) ∈ {±1}.
        let (ctx, tables, _, budget) = setup();
        for g_genus in [0u64, 3] {
            for chi in enumerate_family(&ctx, g_genus, FamilyPredicate::DivisorClosure).unwrap() {
                let g = gauss_full_char(&chi, &ctx, &tables, budget).unwrap();
                let n = chi.degree_f as u32;
                // |G_q(χ)|² = q^{deg h} = q^{2n} (primitivity).
                assert_eq!(
                    g.norm_squared().as_int().unwrap(),
                    BigInt::from(3u32).pow(2 * n)
                );
                let ext_side =
                    gauss_sum_brute(&ExtPoly::one(), &chi.modulus, &ctx, &tables, budget)
                        .unwrap();
                let f_sigma = chi.modulus.frobenius_conj(&ctx);
                let tw = char_eval_ext(&chi, &f_sigma, &ctx);
                assert!(
                    tw == SymbolExp::Exp(0) || tw == SymbolExp::Exp(2),
                    "the twist χ_F(F^σ) is real, F = {:?}",
                    chi.modulus
                );
                assert_eq!(g, ext_side.mul_symbol(tw), "F = {:?}", chi.modulus);
                println!(
                    "deg F = {}: sign = {}",
                    n,
                    if tw == SymbolExp::Exp(0) { "+1" } else { "-1" }
                );
            }
        }
    }

    #[test]
    fn tau_is_minus_one_on_trivial_restrictions() {
        let (ctx, _, _, _) = setup();
        let family = enumerate_family(&ctx, 3, FamilyPredicate::DivisorClosure).unwrap();
        for chi in family.iter().take(8) {
            let te = tau_and_epsilon(chi, &ctx);
            assert!(te.even, "family characters are even");
            assert_eq!(te.tau.as_int().unwrap(), BigInt::from(-1));
        }
    }

    #[test]
    fn root_numbers_are_unit_and_dual_consistent() {
        let (ctx, tables, _, budget) = setup();
        for g in [0u64, 3] {
            for chi in enumerate_family(&ctx, g, FamilyPredicate::DivisorClosure).unwrap() {
                let rn = root_number(&chi, &ctx, &tables, budget).unwrap();
                assert!((rn.magnitude() - 1.0).abs() < 1e-9, "F = {:?}", chi.modulus);
                assert!(rn.discrepancy < 1e-9, "F = {:?}", chi.modulus);
                assert!(rn.exact_match, "ring-exact ω agreement, F = {:?}", chi.modulus);
                assert!(!rn.numerator.0.is_zero() || !rn.numerator.1.is_zero());
            }
        }
    }
}
