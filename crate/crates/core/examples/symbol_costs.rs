//! Costs of the table-based character evaluation at each genus.

use std::time::Instant;

use qml::chars::{enumerate_family, CharEvaluator, FamilyPredicate, SymbolTables};
use qml::field::FieldCtx;
use qml::gauss::{gauss_full_char, Budget};

fn main() {
    let ctx = FieldCtx::new(3).unwrap();
    let tables = SymbolTables::new();
    let budget = Budget::new(100_000_000);

    // Time one cubic symbol-table build via a full-char Gauss sum at g=6.
    let fam6 = enumerate_family(&ctx, 6, FamilyPredicate::DivisorClosure).unwrap();
    let t0 = Instant::now();
    for chi in fam6.iter().take(20) {
        let _ = gauss_full_char(chi, &ctx, &tables, budget).unwrap();
    }
    println!("g=6: first 20 members in {:?} (includes table builds)", t0.elapsed());
    let t0 = Instant::now();
    for chi in fam6.iter().take(20) {
        let _ = gauss_full_char(chi, &ctx, &tables, budget).unwrap();
    }
    println!("g=6: same 20 members warm in {:?}", t0.elapsed());

    // One character-sum cost at g=6: sum over monic base polys of degree 5.
    use qml::chars::char_sum_monic_degree;
    let ev = CharEvaluator::new(fam6[0].clone(), &tables, &ctx);
    let t0 = Instant::now();
    let s = char_sum_monic_degree(&ev, 5, &ctx);
    println!("g=6: char_sum over 243 quintics = {s:?} in {:?}", t0.elapsed());

    // g=9: time table builds for the first few quartic-prime members.
    let fam9 = enumerate_family(&ctx, 9, FamilyPredicate::DivisorClosure).unwrap();
    let quartic = fam9
        .iter()
        .find(|c| c.primes.len() == 1 && c.primes[0].deg() == 4)
        .expect("a prime quartic member");
    let t0 = Instant::now();
    let ev = CharEvaluator::new(quartic.clone(), &tables, &ctx);
    let s = char_sum_monic_degree(&ev, 2, &ctx);
    println!("g=9: one quartic-prime table build + tiny sum = {s:?} in {:?}", t0.elapsed());
}
