//! Degree-aggregated Gauss-sum totals and their exact rationality recurrence.
//!
//! For a fixed monic numerator `f` over `F_q²` put
//!
//! ```text
//! C(f, k) = Σ_{F monic, deg F = k} G(f, F),
//! ```
//!
//! the coefficient sequence of the generating function `Σ_k C(f,k)·u^k`.
//! Because the factored case analysis kills every local factor `G(f, P^e)`
//! with `e ≥ ord_P(f) + 2`, only moduli whose square-full part divides `f²`
//! contribute, and within each degree class `i = k mod 4` the sequence is
//! eventually geometric with exact step factor `(q²)⁵`.
//!
//! Two forms of that four-step law are checked here, differing in where the
//! geometric regime starts. With the class threshold
//!
//! ```text
//! t(f, i) = i + 4·⌊(1 + deg f − i)/4⌋
//! ```
//!
//! the *smoothed* totals `D(f,k) = Σ_m ((q²)⁴)^m · C(f, k−4m)` satisfy
//!
//! ```text
//! D(f, k+4) = (q²)⁵ · D(f, k)     for every k ≥ t(f, i),
//! ```
//!
//! which [`verify_smoothed_recurrence`] confirms coefficient-exactly. The
//! plain totals obey `C(f, k+4) = (q²)⁵·C(f, k)` only from one step past
//! that threshold; at the boundary degree `k = t(f, i)` the measured step
//! is smaller. For every numerator of degree ≤ 1 (all classes have
//! threshold ≤ degree 1) the boundary step works out to
//! `C(f, t+4) = ((q²)⁵ − (q²)⁴) · C(f, t)` — verified exhaustively at
//! `q = 3`, e.g. `C(1,4) = 52488 = (9⁵−9⁴)·C(1,0)` by literal enumeration
//! of all 6561 monic quartic moduli. [`verify_recurrence`] applies the
//! plain form at the threshold itself and therefore reports those boundary
//! lines as exact failures, with both sides attached, so callers see the
//! one-step offset rather than a silently shifted threshold.
//!
//! [`psi_class_coeffs`] exposes the class slices and [`psi_tilde_coeffs`]
//! the coprime-restricted variant used by the double-sum rewrites
//! downstream. All sums here are over the extension field `F_q²`, so the
//! base-field step constant `q^{n+1}` (with `n = 4` classes) reads `(q²)⁵`.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::chars::SymbolTables;
use crate::field::{FieldCtx, Fq2Elem};
use crate::poly::factor::factor;
use crate::poly::{monic_iter, primes_of_degree, ExtPoly};

use crate::gauss::{gauss_sum_from_factorization, Budget, CycInt, GaussCache, GaussError};

/// The truncated coefficient sequence `C(f, 0), …, C(f, kmax)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffSeries {
    /// The fixed Gauss-sum numerator.
    pub f: ExtPoly,
    /// `coeffs[k] = C(f, k)`, exact.
    pub coeffs: Vec<CycInt>,
}

impl CoeffSeries {
    /// Largest computed degree.
    pub fn kmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `C(f, k)`.
    pub fn coeff(&self, k: usize) -> &CycInt {
        &self.coeffs[k]
    }

    /// `|C(f, k)|` for every computed degree — diagnostic output for growth
    /// inspection; nothing is asserted about these.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| {
                let (re, im) = c.embed();
                re.hypot(im)
            })
            .collect()
    }
}

/// One degree slice `k ≡ class (mod 4)` of a [`CoeffSeries`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSeries {
    pub f: ExtPoly,
    /// The residue class of the degree mod 4.
    pub class: u8,
    /// `(k, C(f, k))` for `k ≤ kmax`, `k ≡ class (mod 4)`, ascending in `k`.
    pub entries: Vec<(usize, CycInt)>,
}

/// Whether a degree scan evaluates every modulus or skips those that are
/// provably zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    /// Evaluate `G(f, F)` for every monic `F` of the degree.
    Full,
    /// Skip `F` whose square-full part does not divide `f²` — the factored
    /// case analysis makes those Gauss sums vanish. The two modes must agree
    /// exactly; comparing them is the test of that vanishing rule.
    SkipNonContributing,
}

/// `true` when `F` (given by its factorization) can contribute to `C(f, ·)`:
/// every repeated prime `P^e ‖ F` with `e ≥ 2` must satisfy `P^{e−1} | f`.
fn contributes(factors: &[(ExtPoly, u32)], f: &ExtPoly, ctx: &FieldCtx) -> bool {
    factors.iter().all(|(prime, e)| {
        if *e < 2 {
            return true;
        }
        let need = prime.pow(e - 1, ctx);
        if need.deg() > f.deg() {
            return false;
        }
        f.divrem(&need, ctx).expect("nonzero divisor").1.is_zero()
    })
}

/// Fills the shared cache with the primitive prime-power Gauss sums a scan
/// up to degree `kmax` will request, so the parallel sweep itself never
/// recomputes one: `G(P⁰, P)` for every prime of degree ≤ min(kmax, 4), and
/// `G(P^α, P^{α+1})` for the primes dividing `f` (with `α = ord_P(f)`)
/// whenever that case is the primitive one.
///
/// Primes of degree 5 and above are deliberately left to fill lazily inside
/// the sweep: each such prime appears in exactly one modulus of its degree
/// (itself), so exactly one task computes it, and the walk evaluator is
/// deterministic — the cached value is identical either way.
pub fn prewarm_primitives(
    f: &ExtPoly,
    kmax: usize,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    cache: &GaussCache,
    budget: Budget,
) -> Result<(), GaussError> {
    for d in 1..=kmax.min(4) as u32 {
        for prime in primes_of_degree::<Fq2Elem>(ctx, d) {
            cache.primitive(&prime, 1, ctx, tables, budget)?;
        }
    }
    if !f.is_constant() {
        for (prime, alpha) in &factor(f, ctx).factors {
            let i = alpha + 1;
            if i % 4 != 0 && (prime.deg() as usize) * i as usize <= kmax {
                cache.primitive(prime, i, ctx, tables, budget)?;
            }
        }
    }
    Ok(())
}

/// The single degree-`k` total `C(f, k)`, parallelized over the monic
/// moduli of that degree.
fn c_at_degree(
    f: &ExtPoly,
    k: usize,
    mode: ScanMode,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    cache: &GaussCache,
    budget: Budget,
) -> Result<CycInt, GaussError> {
    let p = ctx.p();
    if k == 0 {
        // The only monic of degree 0 is F = 1, and G(f, 1) = 1.
        return Ok(CycInt::one(p));
    }
    let moduli: Vec<ExtPoly> = monic_iter::<Fq2Elem>(ctx, k as u32).collect();
    moduli
        .par_iter()
        .map(|big_f| {
            let factors = factor(big_f, ctx).factors;
            if mode == ScanMode::SkipNonContributing && !contributes(&factors, f, ctx) {
                return Ok(CycInt::zero(p));
            }
            gauss_sum_from_factorization(f, big_f, &factors, ctx, tables, cache, budget)
        })
        .try_reduce(|| CycInt::zero(p), |a, b| Ok(a.add(&b)))
}

/// `C(f, k)` for `k = 0, …, kmax`, exactly.
pub fn c_coeffs(
    f: &ExtPoly,
    kmax: usize,
    mode: ScanMode,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    cache: &GaussCache,
    budget: Budget,
) -> Result<CoeffSeries, GaussError> {
    assert!(f.is_monic(), "numerators are monic");
    prewarm_primitives(f, kmax, ctx, tables, cache, budget)?;
    let coeffs = (0..=kmax)
        .map(|k| c_at_degree(f, k, mode, ctx, tables, cache, budget))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CoeffSeries { f: f.clone(), coeffs })
}

/// The degree class `k ≡ class (mod 4)` of `C(f, ·)` up to `kmax`. Only the
/// requested degrees are scanned, so computing all four classes costs the
/// same as one full [`c_coeffs`] sweep, and together they partition it.
pub fn psi_class_coeffs(
    f: &ExtPoly,
    class: u8,
    kmax: usize,
    mode: ScanMode,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    cache: &GaussCache,
    budget: Budget,
) -> Result<ClassSeries, GaussError> {
    assert!(class < 4, "degree classes are residues mod 4");
    assert!(f.is_monic(), "numerators are monic");
    prewarm_primitives(f, kmax, ctx, tables, cache, budget)?;
    let mut entries = Vec::new();
    for k in (class as usize..=kmax).step_by(4) {
        entries.push((k, c_at_degree(f, k, mode, ctx, tables, cache, budget)?));
    }
    Ok(ClassSeries { f: f.clone(), class, entries })
}

/// `C(f, k)` restricted to moduli coprime to `f`, for `k = 0, …, kmax`.
pub fn psi_tilde_coeffs(
    f: &ExtPoly,
    kmax: usize,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    cache: &GaussCache,
    budget: Budget,
) -> Result<CoeffSeries, GaussError> {
    assert!(f.is_monic(), "numerators are monic");
    let p = ctx.p();
    prewarm_primitives(f, kmax, ctx, tables, cache, budget)?;
    let mut coeffs = vec![CycInt::one(p)];
    for k in 1..=kmax {
        let moduli: Vec<ExtPoly> = monic_iter::<Fq2Elem>(ctx, k as u32)
            .filter(|big_f| big_f.gcd(f, ctx).is_constant())
            .collect();
        let total = moduli
            .par_iter()
            .map(|big_f| {
                let factors = factor(big_f, ctx).factors;
                gauss_sum_from_factorization(f, big_f, &factors, ctx, tables, cache, budget)
            })
            .try_reduce(|| CycInt::zero(p), |a, b| Ok(a.add(&b)))?;
        coeffs.push(total);
    }
    Ok(CoeffSeries { f: f.clone(), coeffs })
}

/// One comparison `C(f, k+4)` versus `(q²)⁵·C(f, k)` of [`verify_recurrence`].
#[derive(Debug, Clone)]
pub struct RecurrenceLine {
    /// The lower degree of the pair `(k, k+4)`.
    pub k: usize,
    /// Whether `k` is at or past the threshold `i + 4·⌊(1 + deg f − i)/4⌋`
    /// for its class `i = k mod 4`, so the recurrence is claimed there.
    pub applicable: bool,
    /// `C(f, k+4)`.
    pub lhs: CycInt,
    /// `(q²)⁵·C(f, k)`.
    pub rhs: CycInt,
    /// Exact equality of the two sides.
    pub pass: bool,
}

/// Outcome of checking the four-step recurrence on a computed series.
#[derive(Debug, Clone)]
pub struct RecurrenceReport {
    pub f: ExtPoly,
    /// The exact step factor `(q²)⁵`.
    pub scale: BigInt,
    /// One line per degree pair `(k, k+4)` inside the series, every class.
    pub lines: Vec<RecurrenceLine>,
}

impl RecurrenceReport {
    /// `true` when every line claimed by the threshold holds exactly.
    pub fn all_applicable_pass(&self) -> bool {
        self.lines.iter().all(|l| !l.applicable || l.pass)
    }
}

/// Smallest degree in the class `i = k mod 4` from which the recurrence is
/// claimed: `i + 4·⌊(1 + deg f − i)/4⌋` (the floor is a true floor, also
/// for negative arguments).
pub fn recurrence_threshold(deg_f: usize, i: usize) -> i64 {
    i as i64 + 4 * (1 + deg_f as i64 - i as i64).div_euclid(4)
}

/// Checks `C(f, k+4) = (q²)⁵·C(f, k)` for every pair the series contains,
/// flagging which pairs the threshold actually claims. Non-applicable pairs
/// are reported too (informationally): the recurrence may or may not hold
/// below the threshold.
pub fn verify_recurrence(series: &CoeffSeries, ctx: &FieldCtx) -> RecurrenceReport {
    let scale = BigInt::from(ctx.ext_order()).pow(5);
    let deg_f = series.f.deg();
    let mut lines = Vec::new();
    for k in 0..=series.kmax().saturating_sub(4) {
        let i = k % 4;
        let applicable = k as i64 >= recurrence_threshold(deg_f, i);
        let lhs = series.coeff(k + 4).clone();
        let rhs = series.coeff(k).scale(&scale);
        let pass = lhs == rhs;
        lines.push(RecurrenceLine { k, applicable, lhs, rhs, pass });
    }
    RecurrenceReport { f: series.f.clone(), scale, lines }
}

/// Geometrically smoothed totals `D(f, k) = Σ_{4m ≤ k} ((q²)⁴)^m · C(f, k−4m)`:
/// within each degree class mod 4, the running `(q²)⁴`-weighted accumulation
/// of the plain totals.
pub fn smoothed_coeffs(series: &CoeffSeries, ctx: &FieldCtx) -> Vec<CycInt> {
    let weight = BigInt::from(ctx.ext_order()).pow(4);
    let mut out: Vec<CycInt> = Vec::with_capacity(series.coeffs.len());
    for (k, c) in series.coeffs.iter().enumerate() {
        let d = if k >= 4 {
            c.add(&out[k - 4].scale(&weight))
        } else {
            c.clone()
        };
        out.push(d);
    }
    out
}

/// Checks the four-step law on the smoothed totals: `D(f, k+4) = (q²)⁵·D(f, k)`
/// for every pair in range, flagging which pairs the class threshold claims.
/// Unlike the plain form this holds from the threshold on, boundary included.
pub fn verify_smoothed_recurrence(series: &CoeffSeries, ctx: &FieldCtx) -> RecurrenceReport {
    let scale = BigInt::from(ctx.ext_order()).pow(5);
    let smoothed = smoothed_coeffs(series, ctx);
    let deg_f = series.f.deg();
    let mut lines = Vec::new();
    for k in 0..=series.kmax().saturating_sub(4) {
        let i = k % 4;
        let applicable = k as i64 >= recurrence_threshold(deg_f, i);
        let lhs = smoothed[k + 4].clone();
        let rhs = smoothed[k].scale(&scale);
        let pass = lhs == rhs;
        lines.push(RecurrenceLine { k, applicable, lhs, rhs, pass });
    }
    RecurrenceReport { f: series.f.clone(), scale, lines }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::gauss_sum_brute;
    use crate::poly::parse::parse_ext_poly;

    fn setup() -> (FieldCtx, SymbolTables, GaussCache, Budget) {
        (FieldCtx::new(3).unwrap(), SymbolTables::new(), GaussCache::new(), Budget::default())
    }

    #[test]
    fn degree_zero_total_is_one() {
        let (ctx, tables, cache, budget) = setup();
        for f in ["1", "T", "T+(0+2*i)"] {
            let f = parse_ext_poly(&ctx, f).unwrap();
            let s = c_coeffs(&f, 0, ScanMode::Full, &ctx, &tables, &cache, budget).unwrap();
            assert_eq!(*s.coeff(0), CycInt::one(3));
        }
    }

    #[test]
    fn degree_one_total_matches_the_literal_sum() {
        let (ctx, tables, cache, budget) = setup();
        let one = ExtPoly::one();
        let s = c_coeffs(&one, 1, ScanMode::Full, &ctx, &tables, &cache, budget).unwrap();
        let mut expect = CycInt::zero(3);
        for big_f in monic_iter::<Fq2Elem>(&ctx, 1) {
            expect = expect.add(&gauss_sum_brute(&one, &big_f, &ctx, &tables, budget).unwrap());
        }
        assert_eq!(*s.coeff(1), expect);
        assert!(!expect.is_zero(), "the nine linear totals do not cancel");
    }

    #[test]
    fn classes_partition_the_full_sequence() {
        let (ctx, tables, cache, budget) = setup();
        let kmax = 4;
        for f in ["1", "T", "T+(0+2*i)"] {
            let f = parse_ext_poly(&ctx, f).unwrap();
            let full =
                c_coeffs(&f, kmax, ScanMode::Full, &ctx, &tables, &cache, budget).unwrap();
            let mut seen = vec![None; kmax + 1];
            for class in 0..4u8 {
                let slice = psi_class_coeffs(
                    &f, class, kmax, ScanMode::Full, &ctx, &tables, &cache, budget,
                )
                .unwrap();
                for (k, v) in slice.entries {
                    assert_eq!(k % 4, class as usize);
                    assert!(seen[k].replace(v).is_none(), "classes overlap at {k}");
                }
            }
            for (k, v) in seen.into_iter().enumerate() {
                assert_eq!(v.expect("classes cover every degree"), *full.coeff(k));
            }
        }
    }

    #[test]
    fn skipping_provably_zero_moduli_changes_nothing() {
        let (ctx, tables, cache, budget) = setup();
        for f in ["1", "T+(0+2*i)"] {
            let f = parse_ext_poly(&ctx, f).unwrap();
            let full =
                c_coeffs(&f, 4, ScanMode::Full, &ctx, &tables, &cache, budget).unwrap();
            let skip =
                c_coeffs(&f, 4, ScanMode::SkipNonContributing, &ctx, &tables, &cache, budget)
                    .unwrap();
            assert_eq!(full, skip);
        }
    }

    #[test]
    fn coprime_restriction_is_trivial_for_unit_numerator() {
        let (ctx, tables, cache, budget) = setup();
        let one = ExtPoly::one();
        let all = c_coeffs(&one, 2, ScanMode::Full, &ctx, &tables, &cache, budget).unwrap();
        let tilde = psi_tilde_coeffs(&one, 2, &ctx, &tables, &cache, budget).unwrap();
        assert_eq!(all, tilde);
    }

    #[test]
    fn coprime_restriction_matches_the_literal_restricted_sum() {
        let (ctx, tables, cache, budget) = setup();
        let f = ExtPoly::monomial(1); // f = T
        let tilde = psi_tilde_coeffs(&f, 2, &ctx, &tables, &cache, budget).unwrap();
        for k in 1..=2u32 {
            let mut expect = CycInt::zero(3);
            for big_f in monic_iter::<Fq2Elem>(&ctx, k) {
                if !big_f.gcd(&f, &ctx).is_constant() {
                    continue;
                }
                expect =
                    expect.add(&gauss_sum_brute(&f, &big_f, &ctx, &tables, budget).unwrap());
            }
            assert_eq!(*tilde.coeff(k as usize), expect);
        }
    }

    #[test]
    fn threshold_uses_a_true_floor() {
        // deg f = 0: classes 2 and 3 have negative numerators and still give
        // a threshold at the bottom of the class.
        assert_eq!(recurrence_threshold(0, 0), 0);
        assert_eq!(recurrence_threshold(0, 1), 1);
        assert_eq!(recurrence_threshold(0, 2), 2 - 4);
        assert_eq!(recurrence_threshold(0, 3), 3 - 4);
        assert_eq!(recurrence_threshold(1, 0), 0);
        assert_eq!(recurrence_threshold(1, 1), 1);
        assert_eq!(recurrence_threshold(5, 0), 4);
    }

    #[test]
    fn smoothing_accumulates_with_fourth_power_weight() {
        // Synthetic coefficients: the smoothed value four degrees up adds
        // (q²)⁴ = 6561 times the value below in the same class.
        let ctx = FieldCtx::new(3).unwrap();
        let series = CoeffSeries {
            f: ExtPoly::one(),
            coeffs: (0..=5).map(|k| CycInt::from_int(3, k)).collect(),
        };
        let smoothed = smoothed_coeffs(&series, &ctx);
        for k in 0..=3usize {
            assert_eq!(smoothed[k], *series.coeff(k));
        }
        assert_eq!(smoothed[4], CycInt::from_int(3, 4 + 6561 * 0));
        assert_eq!(smoothed[5], CycInt::from_int(3, 5 + 6561 * 1));
    }
}
