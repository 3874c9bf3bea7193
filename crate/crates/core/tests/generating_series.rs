//! Degree-aggregated Gauss-sum totals at the full working truncation and
//! the exact four-step laws on them.
//!
//! The expected plain totals below are frozen from literal enumeration:
//! every monic modulus of degree ≤ 4 over F_9 was summed with the
//! residue-by-residue evaluator (no factorization shortcuts), and degree 5
//! with the factored evaluator whose prime inputs are cross-checked against
//! the literal one at degrees ≤ 4. Those runs establish the boundary
//! structure asserted here: the plain totals step by 9⁵ − 9⁴ at the class
//! threshold and the smoothed totals by exactly 9⁵.

use std::sync::OnceLock;

use num_bigint::BigInt;

use qml::chars::SymbolTables;
use qml::field::FieldCtx;
use qml::gauss::{Budget, CycInt, GaussCache};
use qml::generating::{
    c_coeffs, verify_recurrence, verify_smoothed_recurrence, CoeffSeries, ScanMode,
};
use qml::poly::parse::parse_ext_poly;
use qml::poly::ExtPoly;

struct Shared {
    ctx: FieldCtx,
    tables: SymbolTables,
    cache: GaussCache,
}

/// One process-wide cache: the degree-5 prime Gauss sums dominate the cost
/// and are identical for every numerator, so the tests share them.
fn shared() -> &'static Shared {
    static SHARED: OnceLock<Shared> = OnceLock::new();
    SHARED.get_or_init(|| Shared {
        ctx: FieldCtx::new(3).unwrap(),
        tables: SymbolTables::new(),
        cache: GaussCache::new(),
    })
}

fn series_for(f: &ExtPoly, kmax: usize) -> CoeffSeries {
    let s = shared();
    c_coeffs(f, kmax, ScanMode::SkipNonContributing, &s.ctx, &s.tables, &s.cache, Budget::default())
        .unwrap()
}

#[test]
fn unit_numerator_totals_match_the_literal_enumeration() {
    let series = series_for(&ExtPoly::one(), 5);
    let expect: [i64; 6] = [1, -27, 0, 0, 52488, -1417176];
    for (k, want) in expect.iter().enumerate() {
        assert_eq!(
            *series.coeff(k),
            CycInt::from_int(3, *want),
            "C(1,{k}) disagrees with the frozen enumeration value"
        );
    }
    // The two nontrivial steps both carry the boundary factor 9⁵ − 9⁴.
    assert_eq!(*series.coeff(4), series.coeff(0).scale_i64(59049 - 6561));
    assert_eq!(*series.coeff(5), series.coeff(1).scale_i64(59049 - 6561));
}

#[test]
fn plain_recurrence_reports_the_boundary_offset_for_unit_numerator() {
    let s = shared();
    let series = series_for(&ExtPoly::one(), 5);
    let report = verify_recurrence(&series, &s.ctx);
    assert_eq!(report.scale, BigInt::from(9u32).pow(5));
    assert_eq!(report.lines.len(), 2);
    // Both in-range pairs sit exactly at the class threshold. The plain
    // totals step by 9⁵ − 9⁴ there, so each line must fail and must carry
    // both exact sides — that is the contract for boundary reporting.
    let expected = [(0usize, 52488i64, 59049i64), (1, -1417176, -1594323)];
    for (line, (k, lhs, rhs)) in report.lines.iter().zip(expected) {
        assert_eq!(line.k, k);
        assert!(line.applicable, "threshold claims k = {k} for a constant numerator");
        assert!(!line.pass, "boundary step at k = {k} is one four-step short of geometric");
        assert_eq!(line.lhs, CycInt::from_int(3, lhs));
        assert_eq!(line.rhs, CycInt::from_int(3, rhs));
    }
    assert!(!report.all_applicable_pass());
}

#[test]
fn smoothed_recurrence_holds_at_the_boundary_for_unit_numerator() {
    let s = shared();
    let series = series_for(&ExtPoly::one(), 5);
    let report = verify_smoothed_recurrence(&series, &s.ctx);
    assert_eq!(report.lines.len(), 2);
    for line in &report.lines {
        assert!(line.applicable);
        assert!(
            line.pass,
            "k = {}: smoothed D(1,{}) = {:?} but 9⁵·D(1,{}) = {:?}",
            line.k,
            line.k + 4,
            line.lhs,
            line.k,
            line.rhs
        );
    }
    // Spot value: D(1,4) = C(1,4) + 9⁴·C(1,0) = 52488 + 6561 = 9⁵.
    assert_eq!(report.lines[0].lhs, CycInt::from_int(3, 59049));
}

#[test]
fn linear_numerator_boundary_shows_the_same_offset() {
    let s = shared();
    let f = parse_ext_poly(&s.ctx, "T+(0+2*i)").unwrap();
    let series = series_for(&f, 5);
    let expect: [i64; 6] = [1, 0, 243, 0, 52488, 0];
    for (k, want) in expect.iter().enumerate() {
        assert_eq!(
            *series.coeff(k),
            CycInt::from_int(3, *want),
            "C(T−i,{k}) disagrees with the frozen enumeration value"
        );
    }

    let plain = verify_recurrence(&series, &s.ctx);
    assert_eq!(plain.lines.len(), 2);
    // k = 0 sits at the boundary with a nonzero total, so the plain step
    // fails by the same 9⁴ deficit; k = 1 has a zero total on both sides
    // and passes vacuously.
    assert!(plain.lines[0].applicable && !plain.lines[0].pass);
    assert_eq!(plain.lines[0].lhs, CycInt::from_int(3, 52488));
    assert_eq!(plain.lines[0].rhs, CycInt::from_int(3, 59049));
    assert!(plain.lines[1].applicable && plain.lines[1].pass);
    assert!(plain.lines[1].lhs.is_zero());

    let smoothed = verify_smoothed_recurrence(&series, &s.ctx);
    for line in &smoothed.lines {
        assert!(line.applicable);
        assert!(
            line.pass,
            "k = {}: smoothed step must be exactly 9⁵ (lhs {:?}, rhs {:?})",
            line.k, line.lhs, line.rhs
        );
    }
}
