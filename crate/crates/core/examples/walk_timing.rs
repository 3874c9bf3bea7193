//! Rough timing probe: one brute Gauss sum at modulus degree 8 (a quadratic
//! prime to the fourth power), to extrapolate the degree-10 cost.

use std::time::Instant;

use qml::chars::SymbolTables;
use qml::field::{FieldCtx, Fq2Elem};
use qml::gauss::{gauss_sum_brute, Budget};
use qml::poly::{primes_of_degree, ExtPoly, Poly};

fn main() {
    let ctx = FieldCtx::new(3).unwrap();
    let tables = SymbolTables::new();
    let budget = Budget::new(100_000_000_000);
    let p2 = primes_of_degree::<Fq2Elem>(&ctx, 2);
    println!("degree-2 primes: {}", p2.len());
    let prime = p2[0].clone();
    let modulus = prime.pow(4, &ctx);
    let v: ExtPoly = Poly::one();
    let t0 = Instant::now();
    let g = gauss_sum_brute(&v, &modulus, &ctx, &tables, budget).unwrap();
    let dt = t0.elapsed();
    let residues = 9f64.powi(8);
    println!(
        "G(1, P^4) deg 8 = {:?} in {:?} -> {:.1} M residues/s -> est. deg-10: {:.1} s",
        g.as_gauss(),
        dt,
        residues / dt.as_secs_f64() / 1e6,
        dt.as_secs_f64() * 81.0
    );
}
