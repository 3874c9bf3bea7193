//! Degree-aggregated Gauss-sum totals through degree 5 for two numerators,
//! reporting both the plain-sum recurrence and the smoothed (geometric
//! partial-sum) recurrence at the boundary step.

use qml::chars::SymbolTables;
use qml::field::FieldCtx;
use qml::gauss::{Budget, CycInt, GaussCache};
use qml::generating::{c_coeffs, ScanMode};
use qml::poly::{parse::parse_ext_poly, ExtPoly};
use std::time::Instant;

fn main() {
    let ctx = FieldCtx::new(3).unwrap();
    let tables = SymbolTables::new();
    let cache = GaussCache::new();
    let budget = Budget::new(10_000_000_000);
    for name in ["T"] {
        let f: ExtPoly = parse_ext_poly(&ctx, name).unwrap();
        let t0 = Instant::now();
        let series = c_coeffs(&f, 5, ScanMode::SkipNonContributing, &ctx, &tables, &cache, budget).unwrap();
        println!("f = {name}  ({:?})", t0.elapsed());
        for (k, c) in series.coeffs.iter().enumerate() {
            println!("  C(f,{k}) = {:?}", c.as_gauss());
        }
        // smoothed: D(k) = sum_m (9^4)^m C(k-4m); boundary check D(k+4) = 9^5 D(k)
        let q4 = 6561i64;
        let q5 = 59049i64;
        for i in 0..=1usize {
            let d0 = series.coeffs[i].clone();
            let d1 = series.coeffs[i + 4].add(&d0.scale_i64(q4));
            let want = d0.scale_i64(q5);
            println!(
                "  class {i}: plain C({})={:?} vs 9^5*C({})={:?}  | smoothed D1={:?} vs 9^5*D0={:?} -> {}",
                i + 4,
                series.coeffs[i + 4].as_gauss(),
                i,
                series.coeffs[i].scale_i64(q5).as_gauss(),
                d1.as_gauss(),
                want.as_gauss(),
                if d1 == want { "SMOOTHED-PASS" } else { "SMOOTHED-FAIL" }
            );
        }
    }
}
