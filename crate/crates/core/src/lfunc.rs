//! L-polynomials of family characters, central values, functional-equation
//! verification, moments, and non-vanishing counts.
//!
//! For a family character of modulus degree `n`, the Dirichlet series over
//! monic base polynomials is a polynomial in `v = q^{−s}` of degree
//! `2n − 1` (one less than the conductor degree): `L(v) = Σ_d c_d v^d` with
//! `c_d = Σ_{deg f = d} χ(f)` and `c_d = 0` for `d ≥ 2n` by orthogonality —
//! computed, not assumed, one degree past the bound.
//!
//! The functional equation in these coordinates reads
//!
//! ```text
//! L(v, χ) = ω(χ)·q^{n−1}·v^{2n−2}·(1−v)/(1 − 1/(qv))·L(1/(qv), χ̄)
//! ```
//!
//! with all family characters even, `|ω| = 1`, and `ω = q^{−n} G_q(χ)`.
//! Dividing the `(1−v)` factor out on both sides gives a completed
//! polynomial `Λ = L/(1−v)` of degree `2n−2` whose partial sums
//! `λ_d = Σ_{e≤d} c_e` satisfy the exact reflection
//! `λ_d = ω·q^{d−n+1}·conj(λ_{2n−2−d})` — the basis of the accelerated
//! coefficient mode, which enumerates only up to degree `n−1` and reflects,
//! deriving `ω` from the Gauss sum. The default mode never assumes the
//! functional equation; the two must agree exactly.
//!
//! Central values live in the ring of Gaussian rationals adjoined
//! `q^{−1/2}`, represented as exact pairs `a + b·q^{−1/2}`; the float mirror
//! is for reports only. The genus-`g` first moment is the exact sum of
//! central values over the family, compared against the composed residue
//! main term, and cross-checked against the swapped-order double-series
//! route, which must reproduce it exactly.

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::chars::{
    char_sum_monic_degree, enumerate_family, CharEvaluator, FamilyPredicate, QuarticCharacter,
    SymbolTables,
};
use crate::field::FieldCtx;
use crate::gauss::{gauss_full_char, Budget};
use crate::series::a4_nsum;
use crate::series::euler::{main_term, MainTerm, SeriesError};
use crate::series::rat::{rat_string, GaussRat};

/// An exact Gaussian integer, the natural home of coefficient sums of
/// fourth roots of unity.
pub type GaussInt = (i64, i64);

/// The L-polynomial of one family character: coefficients of `v^d` for
/// `d = 0 … 2n − 1`.
#[derive(Debug, Clone)]
pub struct LPoly {
    pub chi: QuarticCharacter,
    pub coeffs: Vec<GaussInt>,
}

/// How the upper half of the coefficients is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffMode {
    /// Enumerate every degree; assumes nothing.
    Direct,
    /// Enumerate degrees `< n`, derive `ω` from the Gauss sum, and reflect
    /// through the functional equation. Must agree with `Direct` exactly.
    FeAccelerated,
}

impl LPoly {
    pub fn degree_f(&self) -> usize {
        self.chi.degree_f
    }

    /// `ω(χ) = −q^{1−n}·c_{2n−1}` as an exact Gaussian rational.
    pub fn omega(&self, q: u64) -> GaussRat {
        let n = self.degree_f();
        let top = self.coeffs[2 * n - 1];
        let scale = BigRational::new(BigInt::from(-1), BigInt::from(q).pow(n as u32 - 1));
        GaussRat::from_pair(top.0, top.1).scale_rat(&scale)
    }
}

/// Exact L-coefficients by full enumeration, one degree past the vanishing
/// bound, which is asserted rather than assumed.
pub fn l_coeffs(
    chi: &QuarticCharacter,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    budget: Budget,
) -> Result<LPoly, SeriesError> {
    l_coeffs_with_mode(chi, CoeffMode::Direct, ctx, tables, budget)
}

pub fn l_coeffs_with_mode(
    chi: &QuarticCharacter,
    mode: CoeffMode,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    budget: Budget,
) -> Result<LPoly, SeriesError> {
    let q = ctx.p() as u64;
    let n = chi.degree_f;
    let top_enumerated = match mode {
        CoeffMode::Direct => 2 * n,
        CoeffMode::FeAccelerated => n - 1,
    };
    let cost: u128 = (0..=top_enumerated as u32).map(|d| (q as u128).pow(d)).sum();
    budget.check(cost).map_err(|_| SeriesError::CostCeiling)?;

    let eval = CharEvaluator::new(chi.clone(), tables, ctx);
    let mut coeffs: Vec<GaussInt> =
        (0..=top_enumerated).map(|d| char_sum_monic_degree(&eval, d as u32, ctx)).collect();
    assert_eq!(coeffs[0], (1, 0), "constant coefficient is χ(1) = 1");

    match mode {
        CoeffMode::Direct => {
            assert_eq!(
                coeffs[2 * n],
                (0, 0),
                "coefficients vanish from the conductor degree on (orthogonality)"
            );
            coeffs.truncate(2 * n);
        }
        CoeffMode::FeAccelerated => {
            let g = gauss_full_char(chi, ctx, tables, budget)
                .map_err(|_| SeriesError::CostCeiling)?;
            let (gre, gim) =
                g.as_gauss().expect("full-character Gauss sums are Gaussian integers");
            let omega_num = GaussRat::from_rationals(
                BigRational::from_integer(gre),
                BigRational::from_integer(gim),
            );
            // λ_d for d ≤ n−1 from the enumerated coefficients.
            let mut lambda: Vec<GaussRat> = Vec::with_capacity(2 * n - 1);
            let mut acc = GaussRat::zero();
            for c in &coeffs {
                acc = acc.add(&GaussRat::from_pair(c.0, c.1));
                lambda.push(acc.clone());
            }
            // Reflection λ_d = ω·q^{d−n+1}·conj(λ_{2n−2−d}) with
            // ω = G/q^n: exact rationals, integrality asserted.
            for d in n..=2 * n - 2 {
                let mirror = lambda[2 * n - 2 - d].conj();
                let scale = BigRational::new(
                    BigInt::from(1),
                    BigInt::from(q).pow((2 * n - 1 - d) as u32),
                );
                lambda.push(omega_num.mul(&mirror).scale_rat(&scale));
            }
            let mut full: Vec<GaussInt> = Vec::with_capacity(2 * n);
            let mut prev = GaussRat::zero();
            for lam in &lambda {
                let c = lam.sub(&prev);
                full.push(gauss_int_of(&c));
                prev = lam.clone();
            }
            // c_{2n−1} = −λ_{2n−2}.
            full.push(gauss_int_of(&lambda[2 * n - 2].neg()));
            coeffs = full;
        }
    }
    Ok(LPoly { chi: chi.clone(), coeffs })
}

fn gauss_int_of(x: &GaussRat) -> GaussInt {
    assert!(
        x.is_gauss_integer(),
        "functional-equation reflection must land on Gaussian integers, got {x:?}"
    );
    (
        x.re.to_integer().to_i64().expect("coefficient fits i64"),
        x.im.to_integer().to_i64().expect("coefficient fits i64"),
    )
}

/// An exact central value `a + b·q^{−1/2}` with its float mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralValue {
    pub a: GaussRat,
    pub b: GaussRat,
    pub q: u64,
    /// Complex embedding `(re, im)`;  reports only.
    pub float: (f64, f64),
}

impl CentralValue {
    pub fn new(a: GaussRat, b: GaussRat, q: u64) -> Self {
        let rq = (q as f64).sqrt();
        let (are, aim) = a.embed();
        let (bre, bim) = b.embed();
        CentralValue { a, b, q, float: (are + bre / rq, aim + bim / rq) }
    }

    /// Exact zero test: `1` and `q^{−1/2}` are rationally independent, so
    /// the value vanishes iff both components do.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q);
        CentralValue::new(self.a.add(&other.a), self.b.add(&other.b), self.q)
    }

    pub fn zero(q: u64) -> Self {
        CentralValue::new(GaussRat::zero(), GaussRat::zero(), q)
    }
}

/// `L(q^{−1/2})` exactly: even-degree coefficients land on the rational
/// component, odd-degree ones on the `q^{−1/2}` component.
pub fn l_central(lp: &LPoly, q: u64) -> CentralValue {
    let mut a = GaussRat::zero();
    let mut b = GaussRat::zero();
    for (d, c) in lp.coeffs.iter().enumerate() {
        let half_steps = if d % 2 == 0 { d / 2 } else { (d - 1) / 2 };
        let scale = BigRational::new(BigInt::from(1), BigInt::from(q).pow(half_steps as u32));
        let term = GaussRat::from_pair(c.0, c.1).scale_rat(&scale);
        if d % 2 == 0 {
            a = a.add(&term);
        } else {
            b = b.add(&term);
        }
    }
    CentralValue::new(a, b, q)
}

/// Functional-equation residuals for one character.
#[derive(Debug, Clone)]
pub struct FeReport {
    /// Max relative residual of the two sides over the sample points.
    pub max_residual: f64,
    /// Residual of `L(1/2,χ) = ω·L(1/2,χ̄)`.
    pub self_dual_residual: f64,
    /// `||ω| − 1|` in the embedding.
    pub omega_modulus_error: f64,
    /// The sample points used (recorded for reproducibility).
    pub samples: Vec<(f64, f64)>,
}

fn horner(coeffs: &[GaussInt], v: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * v + Complex64::new(c.0 as f64, c.1 as f64);
    }
    acc
}

fn conj_coeffs(coeffs: &[GaussInt]) -> Vec<GaussInt> {
    coeffs.iter().map(|(re, im)| (*re, -im)).collect()
}

/// Evaluates both sides of the functional equation at seeded sample points
/// in the annulus `0.1 < |v| < 0.4` (avoiding `1/q`), plus the self-dual
/// point identity. `ω` is taken from the top coefficient — the content of
/// the check is that this single constant closes the identity everywhere.
pub fn verify_fe(lp: &LPoly, q: u64, num_samples: usize, seed: u64) -> FeReport {
    let n = lp.degree_f();
    let omega = lp.omega(q);
    let (ore, oim) = omega.embed();
    let omega_c = Complex64::new(ore, oim);
    let omega_modulus_error = (omega_c.norm() - 1.0).abs();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(num_samples);
    while samples.len() < num_samples {
        let re = rng.gen_range(-0.4..0.4);
        let im = rng.gen_range(-0.4..0.4);
        let v = Complex64::new(re, im);
        let r = v.norm();
        if r <= 0.1 || r >= 0.4 {
            continue;
        }
        if (v - Complex64::new(1.0 / q as f64, 0.0)).norm() <= 0.02 {
            continue;
        }
        samples.push((re, im));
    }

    let conj = conj_coeffs(&lp.coeffs);
    let qf = q as f64;
    let mut max_residual: f64 = 0.0;
    for &(re, im) in &samples {
        let v = Complex64::new(re, im);
        let lhs = horner(&lp.coeffs, v);
        let w = 1.0 / (qf * v);
        let prefactor = omega_c
            * Complex64::new(qf, 0.0).powi(n as i32 - 1)
            * v.powi(2 * n as i32 - 2)
            * ((Complex64::new(1.0, 0.0) - v) / (Complex64::new(1.0, 0.0) - w));
        let rhs = prefactor * horner(&conj, w);
        let denom = lhs.norm().max(rhs.norm()).max(1e-30);
        max_residual = max_residual.max((lhs - rhs).norm() / denom);
    }

    // Self-dual point: L(1/2,χ) = ω·L(1/2,χ̄) in the embedding.
    let central = l_central(lp, q);
    let central_conj = l_central(&LPoly { chi: lp.chi.clone(), coeffs: conj }, q);
    let lhs = Complex64::new(central.float.0, central.float.1);
    let rhs = omega_c * Complex64::new(central_conj.float.0, central_conj.float.1);
    let denom = lhs.norm().max(rhs.norm()).max(1e-30);
    let self_dual_residual = (lhs - rhs).norm() / denom;

    FeReport { max_residual, self_dual_residual, omega_modulus_error, samples }
}

/// Everything a moment run reports.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub q: u64,
    pub g: u64,
    pub n: usize,
    pub family_size: usize,
    pub moment: CentralValue,
    pub main_term: MainTerm,
    pub ratio_magnitude: f64,
    pub nonvanishing_count: usize,
    pub omega_convention: &'static str,
    pub seed: u64,
    pub runtime_ms: u64,
}

/// Knobs of a moment run; everything is echoed into the report.
#[derive(Debug, Clone, Copy)]
pub struct MomentOptions {
    pub budget: Budget,
    pub predicate: FamilyPredicate,
    pub trunc_degree: u32,
    pub precision: u64,
    pub seed: u64,
}

impl Default for MomentOptions {
    fn default() -> Self {
        MomentOptions {
            budget: Budget::default(),
            predicate: FamilyPredicate::DivisorClosure,
            trunc_degree: 25,
            precision: 50,
            seed: 1,
        }
    }
}

/// The brute-force first moment: the exact sum of central values over the
/// genus-`g` family, with the main term and non-vanishing count alongside.
pub fn moment_direct(
    ctx: &FieldCtx,
    g: u64,
    tables: &SymbolTables,
    opts: MomentOptions,
) -> Result<MomentReport, SeriesError> {
    let started = Instant::now();
    let q = ctx.p() as u64;
    let family = enumerate_family(ctx, g, opts.predicate).map_err(|_| SeriesError::BadGenus)?;
    let n = (g / 3 + 1) as usize;

    // Whole-run cost: every member enumerates monic f through degree 2n.
    let per_member: u128 = (0..=2 * n as u32).map(|d| (q as u128).pow(d)).sum();
    opts.budget
        .check(per_member * family.len() as u128)
        .map_err(|_| SeriesError::CostCeiling)?;

    let (moment, nonvanishing_count) = family
        .par_iter()
        .map(|chi| {
            let lp = l_coeffs(chi, ctx, tables, Budget::new(u128::MAX))
                .expect("per-member budget was pre-checked");
            let cv = l_central(&lp, q);
            let nz = usize::from(!cv.is_zero());
            (cv, nz)
        })
        .reduce(
            || (CentralValue::zero(q), 0usize),
            |(cv1, n1), (cv2, n2)| (cv1.add(&cv2), n1 + n2),
        );

    assert!(
        moment.a.im.is_zero() && moment.b.im.is_zero(),
        "the family is closed under conjugation, so the moment is real"
    );

    let mt = main_term(q, g, opts.trunc_degree, opts.precision)?;
    let ratio_magnitude = moment.float.0 / mt.magnitude.to_f64().unwrap_or(f64::NAN);
    Ok(MomentReport {
        q,
        g,
        n,
        family_size: family.len(),
        moment,
        main_term: mt,
        ratio_magnitude,
        nonvanishing_count,
        omega_convention: ctx.convention().label(),
        seed: opts.seed,
        runtime_ms: started.elapsed().as_millis() as u64,
    })
}

/// The same moment through the swapped-order double series: row `n` of the
/// `N`-sum grid with `vmax = 2n−1`, specialized at `v = q^{−1/2}`. Exact.
pub fn moment_via_nsum(
    ctx: &FieldCtx,
    g: u64,
    tables: &SymbolTables,
    budget: Budget,
) -> Result<CentralValue, SeriesError> {
    if g % 3 != 0 {
        return Err(SeriesError::BadGenus);
    }
    let q = ctx.p() as u64;
    let n = (g / 3 + 1) as usize;
    let grid = a4_nsum(ctx, n, 2 * n - 1, tables, budget)?;
    let mut a = GaussRat::zero();
    let mut b = GaussRat::zero();
    for d in 0..=2 * n - 1 {
        let half_steps = if d % 2 == 0 { d / 2 } else { (d - 1) / 2 };
        let scale = BigRational::new(BigInt::from(1), BigInt::from(q).pow(half_steps as u32));
        let term = grid.get(n, d).scale_rat(&scale);
        if d % 2 == 0 {
            a = a.add(&term);
        } else {
            b = b.add(&term);
        }
    }
    Ok(CentralValue::new(a, b, q))
}

/// Exact count of family members with nonvanishing central value.
pub fn nonvanishing_count(
    ctx: &FieldCtx,
    g: u64,
    tables: &SymbolTables,
    opts: MomentOptions,
) -> Result<usize, SeriesError> {
    Ok(moment_direct(ctx, g, tables, opts)?.nonvanishing_count)
}

impl MomentReport {
    /// The documented stable JSON schema; rationals as `"num/den"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "q": self.q,
            "g": self.g,
            "n": self.n,
            "family_size": self.family_size,
            "moment": {
                "a_re": rat_string(&self.moment.a.re),
                "a_im": rat_string(&self.moment.a.im),
                "b_re": rat_string(&self.moment.b.re),
                "b_im": rat_string(&self.moment.b.im),
                "float": self.moment.float.0,
            },
            "main_term": {
                "magnitude": self.main_term.magnitude.to_f64(),
                "paper_form": self.main_term.paper_form.to_f64(),
                "P": self.main_term.p_value.to_f64(),
                "Z": self.main_term.z_value.to_f64(),
                "trunc_degree": self.main_term.trunc_degree,
            },
            "ratio_magnitude": self.ratio_magnitude,
            "nonvanishing_count": self.nonvanishing_count,
            "omega_convention": self.omega_convention,
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
        })
    }
}

/// One row of the trend report.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub g: u64,
    pub family_size: usize,
    pub moment_float: f64,
    pub main_term_magnitude: f64,
    pub ratio: f64,
    pub ratio_gap: f64,
    pub nonvanishing_count: usize,
}

/// Moment rows for a list of genera, all against the same context.
pub fn report_rows(
    ctx: &FieldCtx,
    g_list: &[u64],
    tables: &SymbolTables,
    opts: MomentOptions,
) -> Result<Vec<ReportRow>, SeriesError> {
    g_list
        .iter()
        .map(|&g| {
            let rep = moment_direct(ctx, g, tables, opts)?;
            Ok(ReportRow {
                g,
                family_size: rep.family_size,
                moment_float: rep.moment.float.0,
                main_term_magnitude: rep.main_term.magnitude.to_f64().unwrap_or(f64::NAN),
                ratio: rep.ratio_magnitude,
                ratio_gap: (rep.ratio_magnitude - 1.0).abs(),
                nonvanishing_count: rep.nonvanishing_count,
            })
        })
        .collect()
}

pub const REPORT_CSV_HEADER: &str =
    "g,family_size,moment,main_term_magnitude,ratio,|ratio-1|,nonvanishing_count";

pub fn report_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.g,
            r.family_size,
            r.moment_float,
            r.main_term_magnitude,
            r.ratio,
            r.ratio_gap,
            r.nonvanishing_count
        ));
    }
    out
}

/// Sanity mirror used by tests: the float field of a central value recomputed
/// from the exact pair.
pub fn central_float(cv: &CentralValue) -> (f64, f64) {
    let rq = (cv.q as f64).sqrt();
    let (are, aim) = cv.a.embed();
    let (bre, bim) = cv.b.embed();
    (are + bre / rq, aim + bim / rq)
}
