//! First-moment cross-checks: the brute-force family sum against the
//! swapped-order double-series route (exact equality), reality of the
//! moment, conjugation-permutation invariance, and non-vanishing counts
//! under both Ω identifications.

use num_traits::Zero;
use qml::chars::{enumerate_family, FamilyPredicate, SymbolTables};
use qml::field::{FieldCtx, OmegaConvention};
use qml::gauss::Budget;
use qml::lfunc::{l_central, l_coeffs, moment_direct, moment_via_nsum, MomentOptions};

#[test]
fn brute_force_and_series_routes_agree_exactly() {
    let ctx = FieldCtx::new(3).unwrap();
    let tables = SymbolTables::new();
    for g in [0u64, 3, 6] {
        let direct = moment_direct(&ctx, g, &tables, MomentOptions::default()).unwrap();
        let series = moment_via_nsum(&ctx, g, &tables, Budget::default()).unwrap();
        assert_eq!(direct.moment.a, series.a, "g={g}: rational components differ");
        assert_eq!(direct.moment.b, series.b, "g={g}: q^(-1/2) components differ");
        assert!(direct.moment.a.im.is_zero() && direct.moment.b.im.is_zero());
        assert!(direct.moment.float.0 > 0.0, "g={g}: moment should be positive");
        assert!(direct.nonvanishing_count >= 1);
        assert!(direct.nonvanishing_count <= direct.family_size);
    }
}

#[test]
fn conjugating_every_member_permutes_the_family_and_fixes_the_moment() {
    let ctx = FieldCtx::new(3).unwrap();
    let tables = SymbolTables::new();
    let family = enumerate_family(&ctx, 3, FamilyPredicate::DivisorClosure).unwrap();
    let mut plain = qml::lfunc::CentralValue::zero(3);
    let mut conjugated = qml::lfunc::CentralValue::zero(3);
    for chi in &family {
        let lp = l_coeffs(chi, &ctx, &tables, Budget::default()).unwrap();
        let cv = l_central(&lp, 3);
        let conj = qml::lfunc::CentralValue::new(cv.a.conj(), cv.b.conj(), 3);
        plain = plain.add(&cv);
        conjugated = conjugated.add(&conj);
    }
    assert_eq!(plain.a, conjugated.a);
    assert_eq!(plain.b, conjugated.b);
}

#[test]
fn nonvanishing_count_survives_the_omega_swap() {
    let standard = FieldCtx::new(3).unwrap();
    let swapped = FieldCtx::with_convention(3, OmegaConvention::Conjugate).unwrap();
    for g in [0u64, 3] {
        let counts: Vec<usize> = [&standard, &swapped]
            .iter()
            .map(|ctx| {
                let tables = SymbolTables::new();
                moment_direct(ctx, g, &tables, MomentOptions::default())
                    .unwrap()
                    .nonvanishing_count
            })
            .collect();
        assert_eq!(counts[0], counts[1], "g={g}: the swap only permutes the family");
    }
}

#[test]
fn genus_not_divisible_by_three_is_rejected() {
    let ctx = FieldCtx::new(3).unwrap();
    let tables = SymbolTables::new();
    assert!(moment_direct(&ctx, 1, &tables, MomentOptions::default()).is_err());
    assert!(moment_via_nsum(&ctx, 2, &tables, Budget::default()).is_err());
}
