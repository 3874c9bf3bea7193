//! Structural properties of quartic characters that the rest of the crate
//! leans on: evenness, triviality of base-only moduli, degeneracy of
//! conjugate-pair moduli, and exhaustive symbol multiplicativity.

use qml::chars::{
    char_eval_base, check_membership, enumerate_family, hecke_eval, make_character_with,
    quartic_symbol_unchecked, FamilyPredicate, MembershipFailure, SymbolExp, SymbolTables,
};
use qml::field::{FieldCtx, Fq2Elem, FqElem};
use qml::poly::{all_below_degree, monic_iter, primes_of_degree, ExtPoly, Poly};

/// Characters in the family are even: they kill every constant in `F_q^×`.
/// Exhaustive over q ∈ {3, 7} and genus ≤ 6.
#[test]
fn family_characters_are_even() {
    for q in [3u64, 7] {
        let ctx = FieldCtx::new(q).unwrap();
        for g in [0u64, 3, 6] {
            let family = enumerate_family(&ctx, g, FamilyPredicate::DivisorClosure).unwrap();
            assert!(!family.is_empty(), "family must be nonempty at q={q}, g={g}");
            for chi in &family {
                for c in 1..q {
                    let v = qml::chars::char_eval_ext(chi, &Poly::constant(ctx.ext(c, 0)), &ctx);
                    assert_eq!(v, SymbolExp::Exp(0), "q={q} g={g} F={:?} c={c}", chi.modulus);
                }
            }
        }
    }
}

/// Base-only moduli are trivial on the base ring: for monic square-free
/// coprime D, N ∈ F_q[T] (D factored inside F_q²[T]), the symbol of N at
/// modulus D is exponent 0. Exhaustive for deg D, deg N ≤ 3 at q = 3.
#[test]
fn base_modulus_symbol_is_trivial() {
    let ctx = FieldCtx::new(3).unwrap();
    for dd in 0..=3u32 {
        for d in monic_iter::<FqElem>(&ctx, dd) {
            if !d.is_squarefree(&ctx) {
                continue;
            }
            let lifted = d.lift(&ctx);
            for dn in 0..=3u32 {
                for n in monic_iter::<FqElem>(&ctx, dn) {
                    if !n.is_squarefree(&ctx) || !d.gcd(&n, &ctx).is_constant() {
                        continue;
                    }
                    assert_eq!(
                        hecke_eval(&n, &lifted, &ctx),
                        SymbolExp::Exp(0),
                        "D = {d:?}, N = {n:?}"
                    );
                }
            }
        }
    }
}

/// The excluded conjugate-pair moduli F = π·π^σ restrict to the *trivial*
/// character on F_q[T]: every base argument coprime to the conductor gets
/// exponent 0. This degeneracy is what the divisor-closure predicate removes.
#[test]
fn conjugate_pair_moduli_restrict_trivially() {
    let ctx = FieldCtx::new(3).unwrap();
    let mut witnessed = 0;
    for pi in primes_of_degree::<Fq2Elem>(&ctx, 1) {
        if pi.in_base_subring() {
            continue;
        }
        let pair = pi.mul(&pi.frobenius_conj(&ctx), &ctx);
        assert_eq!(
            check_membership(&pair, &ctx, FamilyPredicate::DivisorClosure).unwrap_err(),
            MembershipFailure::ConjugatePair
        );
        let chi = make_character_with(&pair, &ctx, FamilyPredicate::LiteralPrime).unwrap();
        for df in 0..=4u32 {
            for f in monic_iter::<FqElem>(&ctx, df) {
                if !chi.conductor.gcd(&f, &ctx).is_constant() {
                    continue;
                }
                assert_eq!(
                    char_eval_base(&chi, &f, &ctx),
                    SymbolExp::Exp(0),
                    "F = {pair:?}, f = {f:?}"
                );
                witnessed += 1;
            }
        }
    }
    assert!(witnessed > 100, "the degeneracy witness must cover many arguments");
}

/// Symbol multiplicativity over every residue pair modulo every prime of
/// degree ≤ 2 over F_9 (multiplicativity factors through residues, so this
/// is the exhaustive content of the degree-≤2 statement).
#[test]
fn symbol_multiplicative_on_all_residue_pairs() {
    let ctx = FieldCtx::new(3).unwrap();
    let tables = SymbolTables::new();
    for d in 1..=2u32 {
        for pi in primes_of_degree::<Fq2Elem>(&ctx, d) {
            let t = tables.get(&pi, &ctx);
            let residues: Vec<ExtPoly> = all_below_degree::<Fq2Elem>(&ctx, d).collect();
            for a in &residues {
                let sa = t.eval(a, &ctx);
                for b in &residues {
                    let sb = t.eval(b, &ctx);
                    let sab = t.eval(&a.mul(b, &ctx), &ctx);
                    assert_eq!(sab, sa.mul(sb), "π = {pi:?}, a = {a:?}, b = {b:?}");
                }
            }
        }
    }
    // Spot confirmation on full polynomials rather than residues.
    let pi = primes_of_degree::<Fq2Elem>(&ctx, 2)[0].clone();
    let a = Poly::from_coeffs(vec![ctx.ext(1, 2), ctx.ext(0, 1), ctx.ext(1, 0)]);
    let b = Poly::from_coeffs(vec![ctx.ext(2, 2), ctx.ext(1, 1)]);
    assert_eq!(
        quartic_symbol_unchecked(&a.mul(&b, &ctx), &pi, &ctx),
        quartic_symbol_unchecked(&a, &pi, &ctx).mul(quartic_symbol_unchecked(&b, &pi, &ctx))
    );
}

/// The family is closed under coefficientwise Frobenius and the conjugate
/// member's character values are the complex conjugates on base arguments —
/// the structural reason first moments over the family are real.
#[test]
fn family_closed_under_frobenius_with_conjugate_values() {
    let ctx = FieldCtx::new(3).unwrap();
    let family = enumerate_family(&ctx, 3, FamilyPredicate::DivisorClosure).unwrap();
    let by_modulus: std::collections::HashSet<ExtPoly> =
        family.iter().map(|c| c.modulus.clone()).collect();
    for chi in &family {
        let sigma = chi.modulus.frobenius_conj(&ctx);
        assert!(by_modulus.contains(&sigma), "σ-image of {:?} missing", chi.modulus);
        let chi_sigma = qml::chars::make_character(&sigma, &ctx).unwrap();
        for f in monic_iter::<FqElem>(&ctx, 3) {
            assert_eq!(
                char_eval_base(&chi_sigma, &f, &ctx),
                char_eval_base(chi, &f, &ctx).conj()
            );
        }
    }
}
