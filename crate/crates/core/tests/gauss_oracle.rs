//! Cross-validation of the two independent Gauss-sum evaluators (literal
//! residue sum vs factored case analysis) and the closed-form values both
//! must reproduce.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qml::chars::{char_eval_ext, enumerate_family, quartic_symbol_unchecked, FamilyPredicate,
    SymbolExp, SymbolTables};
use qml::field::{FieldCtx, FieldElem, Fq2Elem};
use qml::gauss::{gauss_full_char, gauss_sum_brute, gauss_sum_factored, gauss_sum_prime_walk,
    Budget, GaussCache};
use qml::poly::factor::factor;
use qml::poly::{all_below_degree, monic_iter, ExtPoly, Poly};

fn ctx3() -> FieldCtx {
    FieldCtx::new(3).unwrap()
}

fn random_ext_poly(rng: &mut ChaCha8Rng, len: usize, ctx: &FieldCtx) -> ExtPoly {
    let q2 = ctx.ext_order() as u32;
    Poly::from_coeffs((0..len).map(|_| Fq2Elem::from_index(ctx, rng.gen_range(0..q2))).collect())
}

fn random_monic(rng: &mut ChaCha8Rng, deg: usize, ctx: &FieldCtx) -> ExtPoly {
    let q2 = ctx.ext_order() as u32;
    let mut coeffs: Vec<Fq2Elem> =
        (0..deg).map(|_| Fq2Elem::from_index(ctx, rng.gen_range(0..q2))).collect();
    coeffs.push(Fq2Elem::one());
    Poly::from_coeffs(coeffs)
}

#[test]
fn factored_matches_brute_exhaustively_through_degree_two() {
    let ctx = ctx3();
    let tables = SymbolTables::new();
    let cache = GaussCache::new();
    let budget = Budget::default();
    let moduli: Vec<ExtPoly> = (1..=2u32).flat_map(|d| monic_iter::<Fq2Elem>(&ctx, d)).collect();
    let numerators: Vec<ExtPoly> = all_below_degree::<Fq2Elem>(&ctx, 3).collect();
    let mismatches: usize = moduli
        .par_iter()
        .map(|f| {
            let mut bad = 0;
            for v in &numerators {
                let b = gauss_sum_brute(v, f, &ctx, &tables, budget).unwrap();
                let a = gauss_sum_factored(v, f, &ctx, &tables, &cache, budget).unwrap();
                if a != b {
                    eprintln!("mismatch at f = {f:?}, V = {v:?}");
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    assert_eq!(mismatches, 0, "all {} pairs agree", moduli.len() * numerators.len());
}

#[test]
fn factored_matches_brute_on_stratified_cubic_moduli() {
    let ctx = ctx3();
    let tables = SymbolTables::new();
    let cache = GaussCache::new();
    let budget = Budget::default();
    let moduli: Vec<ExtPoly> = monic_iter::<Fq2Elem>(&ctx, 3).step_by(7).collect();
    let numerators: Vec<ExtPoly> = all_below_degree::<Fq2Elem>(&ctx, 3).step_by(13).collect();
    moduli.par_iter().for_each(|f| {
        for v in &numerators {
            let b = gauss_sum_brute(v, f, &ctx, &tables, budget).unwrap();
            let a = gauss_sum_factored(v, f, &ctx, &tables, &cache, budget).unwrap();
            assert_eq!(a, b, "f = {f:?}, V = {v:?}");
        }
    });
}

#[test]
fn numerator_twists_by_coprime_factors() {
    // G(aV, f) = χ̄_f(a)·G(V, f) whenever (a, f) = 1.
    let ctx = ctx3();
    let tables = SymbolTables::new();
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut done = 0;
    while done < 100 {
        let deg = rng.gen_range(1..=3);
        let f = random_monic(&mut rng, deg, &ctx);
        let v = random_ext_poly(&mut rng, 3, &ctx);
        let a = random_ext_poly(&mut rng, 3, &ctx);
        if a.is_zero() || !a.gcd(&f, &ctx).is_constant() {
            continue;
        }
        // χ_f(a) over the full modulus: multiply the per-prime symbols.
        let mut sym = SymbolExp::Exp(0);
        for (prime, e) in &factor(&f, &ctx).factors {
            sym = sym.mul(quartic_symbol_unchecked(&a, prime, &ctx).pow(*e));
        }
        let av = a.mul(&v, &ctx);
        let lhs = gauss_sum_brute(&av, &f, &ctx, &tables, budget).unwrap();
        let rhs = gauss_sum_brute(&v, &f, &ctx, &tables, budget)
            .unwrap()
            .mul_symbol(sym.conj());
        assert_eq!(lhs, rhs, "f = {f:?}, V = {v:?}, a = {a:?}");
        done += 1;
    }
}

#[test]
fn base_square_free_moduli_give_signed_prime_powers() {
    // G(1, F) = (−q)^{deg F} for monic square-free F from the base subring,
    // at q = 3. The sign is forced degree-by-degree: a degree-1 modulus is a
    // quartic Gauss sum over the 9-element field, which is the pure sum
    // (−1)^{(q+1)/4}·q = −3 at q ≡ 3 mod 8, and the value is multiplicative
    // across coprime factors with trivial twists on the base subring.
    let ctx = ctx3();
    let tables = SymbolTables::new();
    let budget = Budget::default();
    let mut checked = 0;
    for d in 1..=4u32 {
        for f in monic_iter::<qml::field::FqElem>(&ctx, d) {
            if !f.is_squarefree(&ctx) {
                continue;
            }
            let lifted = f.lift(&ctx);
            let g = gauss_sum_brute(&ExtPoly::one(), &lifted, &ctx, &tables, budget).unwrap();
            assert_eq!(
                g.as_int().expect("rational integer"),
                BigInt::from(-3).pow(d),
                "F = {f:?}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 3 + 6 + 18 + 54, "swept every square-free base modulus");
}

#[test]
fn unit_group_walk_matches_odometer_on_cubic_primes() {
    let ctx = ctx3();
    let tables = SymbolTables::new();
    let budget = Budget::default();
    let primes = qml::poly::primes_of_degree::<Fq2Elem>(&ctx, 3);
    assert_eq!(primes.len(), 240);
    let mismatches: usize = primes
        .par_iter()
        .map(|pi| {
            let walk = gauss_sum_prime_walk(pi, &ctx, budget).unwrap();
            let brute = gauss_sum_brute(&ExtPoly::one(), pi, &ctx, &tables, budget).unwrap();
            usize::from(walk != brute)
        })
        .sum();
    assert_eq!(mismatches, 0);
}

#[test]
fn cross_ring_relation_holds_for_every_cubic_member() {
    // G_q(χ_F) = χ_F(F^σ)·G_{q²}(1, F); at deg F = 3 the twist is −1 for
    // every member, so the two sums are exact negatives.
    let ctx = ctx3();
    let tables = SymbolTables::new();
    let budget = Budget::default();
    let family = enumerate_family(&ctx, 6, FamilyPredicate::DivisorClosure).unwrap();
    assert_eq!(family.len(), 456);
    family.par_iter().for_each(|chi| {
        let g_base = gauss_full_char(chi, &ctx, &tables, budget).unwrap();
        let g_ext =
            gauss_sum_brute(&ExtPoly::one(), &chi.modulus, &ctx, &tables, budget).unwrap();
        let twist = char_eval_ext(chi, &chi.modulus.frobenius_conj(&ctx), &ctx);
        assert_eq!(twist, SymbolExp::Exp(2), "F = {:?}", chi.modulus);
        assert_eq!(g_base, g_ext.mul_symbol(twist), "F = {:?}", chi.modulus);
    });
}
