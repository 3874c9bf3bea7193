//! The functional-equation suite over whole families: dual-side evaluation
//! at seeded sample points, unimodular root numbers, the self-dual point
//! identity, orthogonality vanishing of high coefficients, and exact
//! agreement of the reflection-accelerated coefficient mode with direct
//! enumeration.

use qml::chars::{enumerate_family, FamilyPredicate, SymbolTables};
use qml::field::FieldCtx;
use qml::gauss::Budget;
use qml::lfunc::{l_coeffs, l_coeffs_with_mode, verify_fe, CoeffMode};

/// Residual sweep: every member of every family with modulus degree ≤ nmax.
fn fe_sweep(q: u64, nmax: u64, seed: u64) -> (f64, f64, f64, usize) {
    let ctx = FieldCtx::new(q).unwrap();
    let tables = SymbolTables::new();
    let mut worst_fe: f64 = 0.0;
    let mut worst_self_dual: f64 = 0.0;
    let mut worst_omega: f64 = 0.0;
    let mut members = 0usize;
    for n in 1..=nmax {
        let family = enumerate_family(&ctx, 3 * (n - 1), FamilyPredicate::DivisorClosure)
            .unwrap();
        for chi in &family {
            let lp = l_coeffs(chi, &ctx, &tables, Budget::default()).unwrap();
            let rep = verify_fe(&lp, q, 5, seed ^ members as u64);
            worst_fe = worst_fe.max(rep.max_residual);
            worst_self_dual = worst_self_dual.max(rep.self_dual_residual);
            worst_omega = worst_omega.max(rep.omega_modulus_error);
            members += 1;
        }
    }
    (worst_fe, worst_self_dual, worst_omega, members)
}

#[test]
fn functional_equation_holds_across_the_q3_families() {
    let (fe, self_dual, omega, members) = fe_sweep(3, 3, 20260816);
    assert_eq!(members, 6 + 48 + 456);
    assert!(fe < 1e-9, "max residual {fe}");
    assert!(self_dual < 1e-9, "self-dual residual {self_dual}");
    assert!(omega < 1e-9, "|ω| drifts from 1 by {omega}");
}

#[test]
fn functional_equation_holds_across_the_q7_families() {
    let (fe, self_dual, omega, members) = fe_sweep(7, 2, 7071);
    assert!(members > 42, "expect the degree-2 family on top of the linear one");
    assert!(fe < 1e-9, "max residual {fe}");
    assert!(self_dual < 1e-9, "self-dual residual {self_dual}");
    assert!(omega < 1e-9, "|ω| drifts from 1 by {omega}");
}

#[test]
fn high_coefficients_vanish_by_orthogonality() {
    // l_coeffs computes one degree past the conductor bound and asserts the
    // vanishing internally; this drives it over every member with n ≤ 2 and
    // checks the shape of what remains.
    let ctx = FieldCtx::new(3).unwrap();
    let tables = SymbolTables::new();
    for n in 1..=2u64 {
        let family =
            enumerate_family(&ctx, 3 * (n - 1), FamilyPredicate::DivisorClosure).unwrap();
        for chi in &family {
            let lp = l_coeffs(chi, &ctx, &tables, Budget::default()).unwrap();
            assert_eq!(lp.coeffs.len(), 2 * n as usize);
            assert_eq!(lp.coeffs[0], (1, 0));
        }
    }
}

#[test]
fn accelerated_mode_agrees_on_a_degree_three_sample() {
    // Full agreement for n ≤ 2 is covered in the unit suite; here, ten
    // degree-3 members stress the reflection across a longer coefficient
    // range (budgeted sampling keeps the sweep quick).
    let ctx = FieldCtx::new(3).unwrap();
    let tables = SymbolTables::new();
    let family = enumerate_family(&ctx, 6, FamilyPredicate::DivisorClosure).unwrap();
    for chi in family.iter().step_by(family.len() / 10) {
        let direct =
            l_coeffs_with_mode(chi, CoeffMode::Direct, &ctx, &tables, Budget::default())
                .unwrap();
        let fast = l_coeffs_with_mode(
            chi,
            CoeffMode::FeAccelerated,
            &ctx,
            &tables,
            Budget::default(),
        )
        .unwrap();
        assert_eq!(direct.coeffs, fast.coeffs, "modulus {:?}", chi.modulus);
    }
}
