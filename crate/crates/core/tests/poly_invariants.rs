//! Exhaustive structural invariants of the polynomial layer. These sweeps
//! are wide (hundreds of thousands of factorizations) and rely on the
//! optimized test profile.

use std::collections::HashMap;

use qml::field::{FieldCtx, Fq2Elem};
use qml::poly::factor::{factor, is_irreducible, Factorization};
use qml::poly::{monic_iter, ExtPoly};

fn merge(a: &Factorization<Fq2Elem>, b: &Factorization<Fq2Elem>, ctx: &FieldCtx) -> Vec<(ExtPoly, u32)> {
    let mut out: Vec<(ExtPoly, u32)> = Vec::new();
    let unit_product = ctx.ext_mul(a.unit, b.unit);
    assert_eq!(unit_product, ctx.ext(1, 0), "monic inputs keep unit 1");
    let mut all: Vec<(ExtPoly, u32)> = a.factors.clone();
    all.extend(b.factors.iter().cloned());
    all.sort_by(|x, y| x.0.canonical_cmp(&y.0));
    for (p, e) in all {
        match out.last_mut() {
            Some((lp, le)) if *lp == p => *le += e,
            _ => out.push((p, e)),
        }
    }
    out
}

/// factor(f·g) equals the exponent-wise merge of factor(f) and factor(g),
/// for every pair of monic polynomials of degree ≤ 3 over F_9.
#[test]
fn factor_of_product_merges_factorizations() {
    let ctx = FieldCtx::new(3).unwrap();
    let mut polys: Vec<ExtPoly> = Vec::new();
    for d in 0..=3u32 {
        polys.extend(monic_iter::<Fq2Elem>(&ctx, d));
    }
    let factored: HashMap<ExtPoly, Factorization<Fq2Elem>> =
        polys.iter().map(|f| (f.clone(), factor(f, &ctx))).collect();
    let mut checked = 0u64;
    for (i, f) in polys.iter().enumerate() {
        let ff = &factored[f];
        for g in &polys[i..] {
            let fg = &factored[g];
            let expected = merge(ff, fg, &ctx);
            let product = f.mul(g, &ctx);
            let got = factor(&product, &ctx);
            assert_eq!(got.factors, expected, "f = {f:?}, g = {g:?}");
            checked += 1;
        }
    }
    // 820 monic polynomials of degree ≤ 3 → C(820,2) + 820 ordered-up pairs.
    assert_eq!(checked, 820 * 821 / 2);
}

/// is_irreducible agrees with "factor yields a single exponent-1 prime" for
/// every monic polynomial of degree ≤ 4 over F_9.
#[test]
fn irreducibility_agrees_with_factorization() {
    let ctx = FieldCtx::new(3).unwrap();
    for d in 1..=4u32 {
        for f in monic_iter::<Fq2Elem>(&ctx, d) {
            let fac = factor(&f, &ctx);
            let single = fac.factors.len() == 1 && fac.factors[0].1 == 1;
            assert_eq!(is_irreducible(&f, &ctx), single, "f = {f:?}");
        }
    }
}

/// Norms land in the base subring for every monic extension polynomial of
/// degree ≤ 2, and their degree doubles.
#[test]
fn norms_are_galois_stable() {
    let ctx = FieldCtx::new(3).unwrap();
    for d in 0..=2u32 {
        for f in monic_iter::<Fq2Elem>(&ctx, d) {
            let n = f.norm_to_base(&ctx); // panics internally if not base
            assert_eq!(n.deg(), 2 * f.deg());
            assert!(n.is_monic());
        }
    }
}
