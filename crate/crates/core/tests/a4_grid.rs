//! The double-series identity: the family-sum definition and the
//! swapped-order rewrite must agree coefficient-for-coefficient, as exact
//! Gaussian rationals, on full truncation grids over two different base
//! fields.

use num_traits::Zero;
use qml::chars::{FamilyPredicate, SymbolTables};
use qml::field::FieldCtx;
use qml::gauss::Budget;
use qml::series::{a4_direct, a4_nsum, family_count_series};

fn assert_grids_equal(q: u64, umax: usize, vmax: usize) {
    let ctx = FieldCtx::new(q).unwrap();
    let tables = SymbolTables::new();
    let direct = a4_direct(
        &ctx,
        umax,
        vmax,
        &tables,
        FamilyPredicate::DivisorClosure,
        Budget::default(),
    )
    .unwrap();
    let rewritten = a4_nsum(&ctx, umax, vmax, &tables, Budget::default()).unwrap();
    for a in 0..=umax {
        for b in 0..=vmax {
            assert_eq!(
                direct.get(a, b),
                rewritten.get(a, b),
                "q={q}: coefficient of u^{a} v^{b} differs"
            );
        }
    }
}

#[test]
fn q3_grid_umax3_vmax5_matches_exactly() {
    assert_grids_equal(3, 3, 5);
}

#[test]
fn q7_grid_umax2_vmax3_matches_exactly() {
    assert_grids_equal(7, 2, 3);
}

#[test]
fn marked_coefficients_of_the_direct_grid() {
    let ctx = FieldCtx::new(3).unwrap();
    let tables = SymbolTables::new();
    let grid = a4_direct(
        &ctx,
        1,
        1,
        &tables,
        FamilyPredicate::DivisorClosure,
        Budget::default(),
    )
    .unwrap();
    // u⁰v⁰ → 1, u⁰v¹ → q, u¹v⁰ → the six degree-1 members.
    assert!(grid.get(0, 0).is_one());
    assert_eq!(grid.get(0, 1).re.to_integer(), 3.into());
    assert_eq!(grid.get(1, 0).re.to_integer(), 6.into());
}

#[test]
fn n1_column_of_the_rewrite_is_the_family_count_series() {
    let ctx = FieldCtx::new(3).unwrap();
    let tables = SymbolTables::new();
    let grid = a4_nsum(&ctx, 3, 1, &tables, Budget::default()).unwrap();
    let counts = family_count_series(&ctx, 3);
    for a in 0..=3usize {
        assert_eq!(grid.get(a, 0).re.to_integer(), counts[a]);
        assert!(grid.get(a, 0).im.is_zero());
    }
}
