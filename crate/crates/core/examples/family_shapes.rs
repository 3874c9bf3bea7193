//! Family sizes and factor-degree shapes at the working genus values.

use std::collections::BTreeMap;
use std::time::Instant;

use qml::chars::{enumerate_family, FamilyPredicate};
use qml::field::FieldCtx;
use qml::poly::factor::factor;

fn main() {
    let ctx = FieldCtx::new(3).unwrap();
    for g in [0u64, 3, 6, 9] {
        let t0 = Instant::now();
        let fam = enumerate_family(&ctx, g, FamilyPredicate::DivisorClosure).unwrap();
        let mut shapes: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for chi in &fam {
            let mut shape: Vec<u32> =
                factor(&chi.modulus, &ctx).factors.iter().map(|(p, _)| p.deg() as u32).collect();
            shape.sort();
            *shapes.entry(shape).or_default() += 1;
        }
        println!("g={g}: {} members in {:?}; shapes: {:?}", fam.len(), t0.elapsed(), shapes);
    }
}
