//! Quartic residue symbols over `F_q²[T]` and the genus-`g` character family.
//!
//! For a monic prime `π` of `F_q²[T]` of degree `d`, the quartic residue
//! symbol of `a` is `0` when `π | a` and otherwise the unique fourth root of
//! unity congruent to `a^{(q^{2d}−1)/4}` modulo `π`, reported as its exponent
//! under the pinned identification `Ω` ([`SymbolExp`]). The symbol is totally
//! multiplicative in `a`, and extends multiplicatively in the modulus to
//! `χ_F = Π_j χ_{π_j}` for square-free `F`.
//!
//! The family of interest at genus `g = 3(n−1)` consists of monic square-free
//! `F ∈ F_q²[T]` of degree `n` with **no nontrivial divisor in `F_q[T]`**:
//! no prime factor inside the base ring, and no pair of prime factors that
//! are Frobenius conjugates of each other (otherwise their product `π·π^σ`
//! is a base polynomial). The weaker reading that only forbids base *prime*
//! factors is kept selectable as [`FamilyPredicate::LiteralPrime`] for
//! comparison; conjugate-pair moduli restrict to the trivial character on
//! `F_q[T]` (see the degeneracy test), which is why the divisor-closure
//! predicate is the default everywhere.
//!
//! Each member `F` gives a character of conductor `F·F^σ ∈ F_q[T]`; restricted
//! to `F_q[T]` (the Hecke-style symbol `f ↦ χ_F(f)`) it is the object whose
//! L-function the rest of the crate studies. Hot paths evaluate symbols via
//! per-prime lookup tables ([`PrimeSymbolTable`]) built by a generator walk
//! through the multiplicative group of the residue field.

use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{FieldCtx, FieldElem, Fq2Elem, FqElem};
use crate::poly::factor::{factor, is_irreducible, Factorization};
use crate::poly::{monic_iter, BasePoly, ExtPoly, Poly};

/// Value of a quartic symbol: zero, or a fourth root of unity `i^k` recorded
/// by its exponent `k ∈ Z/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolExp {
    Zero,
    Exp(u8),
}

impl SymbolExp {
    pub fn exp(k: u8) -> Self {
        SymbolExp::Exp(k % 4)
    }

    pub fn is_zero(self) -> bool {
        self == SymbolExp::Zero
    }

    /// Multiplies two symbol values (exponents add; zero absorbs).
    pub fn mul(self, other: Self) -> Self {
        match (self, other) {
            (SymbolExp::Exp(a), SymbolExp::Exp(b)) => SymbolExp::Exp((a + b) % 4),
            _ => SymbolExp::Zero,
        }
    }

    /// Raises to an integer power. `0^0 = 1` by the empty-product convention.
    pub fn pow(self, e: u32) -> Self {
        match self {
            SymbolExp::Zero if e == 0 => SymbolExp::Exp(0),
            SymbolExp::Zero => SymbolExp::Zero,
            SymbolExp::Exp(k) => SymbolExp::Exp(((k as u32 * e) % 4) as u8),
        }
    }

    /// Complex conjugation `i^k ↦ i^{−k}`.
    pub fn conj(self) -> Self {
        match self {
            SymbolExp::Zero => SymbolExp::Zero,
            SymbolExp::Exp(k) => SymbolExp::Exp((4 - k) % 4),
        }
    }

    /// The value as a Gaussian integer `(re, im)`; zero maps to `(0, 0)`.
    pub fn gauss_pair(self) -> (i64, i64) {
        match self {
            SymbolExp::Zero => (0, 0),
            SymbolExp::Exp(0) => (1, 0),
            SymbolExp::Exp(1) => (0, 1),
            SymbolExp::Exp(2) => (-1, 0),
            SymbolExp::Exp(3) => (0, -1),
            SymbolExp::Exp(_) => unreachable!("exponents stored mod 4"),
        }
    }
}

/// Errors from symbol evaluation and family construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("modulus is not a monic irreducible polynomial")]
    NotIrreducible,
    #[error("modulus is not a family member: {0}")]
    NotFamilyMember(MembershipFailure),
    #[error("genus {0} is not divisible by 3")]
    BadGenus(u64),
}

/// Why a monic polynomial fails the family predicate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MembershipFailure {
    #[error("not square-free")]
    NotSquarefree,
    #[error("has a prime factor inside the base ring")]
    BasePrimeFactor,
    #[error("has a Frobenius-conjugate pair of prime factors")]
    ConjugatePair,
}

/// Which reading of the family condition to apply (see module docs).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyPredicate {
    /// No nontrivial divisor in `F_q[T]`: excludes base prime factors *and*
    /// conjugate pairs. The default.
    DivisorClosure,
    /// Only excludes prime factors that lie in `F_q[T]` themselves.
    LiteralPrime,
}

/// A primitive quartic character `χ_F`, carried as the factored modulus
/// together with its conductor and genus bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuarticCharacter {
    /// The modulus `F` (monic square-free, canonical form).
    pub modulus: ExtPoly,
    /// Distinct monic prime factors of `F`, canonically sorted.
    pub primes: Vec<ExtPoly>,
    /// Conductor `F·F^σ ∈ F_q[T]`.
    pub conductor: BasePoly,
    /// `deg F`.
    pub degree_f: usize,
    /// Genus `g = 3(deg F − 1)` of the associated curve data.
    pub genus: u64,
}

/// The exponent `(q^{2d} − 1)/4` defining the symbol at a degree-`d` prime.
pub fn symbol_exponent(ctx: &FieldCtx, d: u32) -> BigUint {
    let m = BigUint::from(ctx.ext_order()).pow(d) - BigUint::one();
    let (quot, rem) = num_integer::Integer::div_rem(&m, &BigUint::from(4u32));
    debug_assert!(rem.is_zero(), "q² ≡ 1 mod 4 makes the exponent integral");
    quot
}

/// Quartic residue symbol `χ_π(a)` with the primality of `π` verified.
pub fn quartic_symbol(a: &ExtPoly, pi: &ExtPoly, ctx: &FieldCtx) -> Result<SymbolExp, CharError> {
    if !pi.is_monic() || !is_irreducible(pi, ctx) {
        return Err(CharError::NotIrreducible);
    }
    Ok(quartic_symbol_unchecked(a, pi, ctx))
}

/// Symbol evaluation assuming `π` monic irreducible (hot path).
pub fn quartic_symbol_unchecked(a: &ExtPoly, pi: &ExtPoly, ctx: &FieldCtx) -> SymbolExp {
    let r = a.rem(pi, ctx).expect("nonzero modulus");
    if r.is_zero() {
        return SymbolExp::Zero;
    }
    let e = symbol_exponent(ctx, pi.deg() as u32);
    let s = r.powmod(&e, pi, ctx).expect("nonzero modulus");
    let c = constant_of(&s);
    SymbolExp::Exp(
        ctx.omega_inverse(c)
            .expect("a^((q^2d−1)/4) mod an irreducible is a fourth root of unity"),
    )
}

fn constant_of(s: &ExtPoly) -> Fq2Elem {
    assert!(s.is_constant(), "power lands in the residue field's constants");
    s.coeff(0)
}

// ---- Membership and character construction ----

/// Checks the family predicate on a monic `F`; on success returns the
/// factorization for reuse.
pub fn check_membership(
    f: &ExtPoly,
    ctx: &FieldCtx,
    predicate: FamilyPredicate,
) -> Result<Factorization<Fq2Elem>, MembershipFailure> {
    assert!(f.is_monic(), "family moduli are monic");
    let fac = factor(f, ctx);
    if !fac.is_squarefree() {
        return Err(MembershipFailure::NotSquarefree);
    }
    if fac.factors.iter().any(|(p, _)| p.in_base_subring()) {
        return Err(MembershipFailure::BasePrimeFactor);
    }
    if predicate == FamilyPredicate::DivisorClosure {
        for (j, (pj, _)) in fac.factors.iter().enumerate() {
            let conj = pj.frobenius_conj(ctx);
            if fac.factors[j + 1..].iter().any(|(pk, _)| *pk == conj) {
                return Err(MembershipFailure::ConjugatePair);
            }
        }
    }
    Ok(fac)
}

/// The default (divisor-closure) membership test.
pub fn is_family_member(f: &ExtPoly, ctx: &FieldCtx) -> bool {
    check_membership(f, ctx, FamilyPredicate::DivisorClosure).is_ok()
}

/// Builds the character attached to a family modulus.
pub fn make_character(f: &ExtPoly, ctx: &FieldCtx) -> Result<QuarticCharacter, CharError> {
    make_character_with(f, ctx, FamilyPredicate::DivisorClosure)
}

/// Character construction under an explicit membership predicate.
pub fn make_character_with(
    f: &ExtPoly,
    ctx: &FieldCtx,
    predicate: FamilyPredicate,
) -> Result<QuarticCharacter, CharError> {
    let fac = check_membership(f, ctx, predicate).map_err(CharError::NotFamilyMember)?;
    Ok(character_from_parts(f.clone(), &fac, ctx))
}

fn character_from_parts(
    modulus: ExtPoly,
    fac: &Factorization<Fq2Elem>,
    ctx: &FieldCtx,
) -> QuarticCharacter {
    let primes: Vec<ExtPoly> = fac.factors.iter().map(|(p, _)| p.clone()).collect();
    let conductor = modulus.norm_to_base(ctx);
    let degree_f = modulus.degree().unwrap_or(0);
    debug_assert_eq!(conductor.deg(), 2 * degree_f);
    QuarticCharacter {
        modulus,
        primes,
        conductor,
        degree_f,
        genus: 3 * (degree_f.max(1) as u64 - 1),
    }
}

/// Evaluates `χ_F` at an extension-ring argument by multiplying the symbols
/// at each prime of the modulus.
pub fn char_eval_ext(chi: &QuarticCharacter, a: &ExtPoly, ctx: &FieldCtx) -> SymbolExp {
    let mut acc = SymbolExp::Exp(0);
    for pi in &chi.primes {
        acc = acc.mul(quartic_symbol_unchecked(a, pi, ctx));
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Evaluates `χ_F` at a base-ring argument (lifted coefficientwise).
pub fn char_eval_base(chi: &QuarticCharacter, f: &BasePoly, ctx: &FieldCtx) -> SymbolExp {
    char_eval_ext(chi, &f.lift(ctx), ctx)
}

/// The Hecke-style symbol `χ^{(N)}(F) = χ_F(N)` for arbitrary monic `F`
/// (not necessarily square-free): completely multiplicative in `F`.
pub fn hecke_eval(n: &BasePoly, f: &ExtPoly, ctx: &FieldCtx) -> SymbolExp {
    assert!(f.is_monic(), "Hecke symbol takes monic moduli");
    let lifted = n.lift(ctx);
    let mut acc = SymbolExp::Exp(0);
    for (pi, e) in &factor(f, ctx).factors {
        acc = acc.mul(quartic_symbol_unchecked(&lifted, pi, ctx).pow(*e));
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Enumerates the family at genus `g`: all monic degree-`n = g/3 + 1`
/// moduli over `F_q²` passing the predicate, in canonical enumeration order.
pub fn enumerate_family(
    ctx: &FieldCtx,
    g: u64,
    predicate: FamilyPredicate,
) -> Result<Vec<QuarticCharacter>, CharError> {
    if g % 3 != 0 {
        return Err(CharError::BadGenus(g));
    }
    let n = (g / 3 + 1) as u32;
    let mut out = Vec::new();
    for f in monic_iter::<Fq2Elem>(ctx, n) {
        if let Ok(fac) = check_membership(&f, ctx, predicate) {
            out.push(character_from_parts(f, &fac, ctx));
        }
    }
    Ok(out)
}

/// A character is even when it kills every nonzero base-field constant.
pub fn is_even(chi: &QuarticCharacter, ctx: &FieldCtx) -> bool {
    (1..ctx.p() as u64).all(|c| {
        char_eval_ext(chi, &Poly::constant(ctx.ext(c, 0)), ctx) == SymbolExp::Exp(0)
    })
}

/// Sum `Σ χ(f)` over monic base polynomials of degree `d`, as a Gaussian
/// integer. This is the `d`-th power-series coefficient of the character's
/// L-function.
pub fn char_sum_monic_degree(
    eval: &CharEvaluator,
    d: u32,
    ctx: &FieldCtx,
) -> (i64, i64) {
    let mut re = 0i64;
    let mut im = 0i64;
    for f in monic_iter::<FqElem>(ctx, d) {
        let (r, i) = eval.eval_base(&f, ctx).gauss_pair();
        re += r;
        im += i;
    }
    (re, im)
}

// ---- Symbol lookup tables ----

/// Precomputed symbol values at every residue class modulo one prime.
///
/// Built by walking the cyclic group `(F_q²[T]/π)^×` along a generator:
/// one modular exponentiation fixes the symbol at the generator, after which
/// every residue costs a single modular multiplication. The zero residue maps
/// to [`SymbolExp::Zero`].
pub struct PrimeSymbolTable {
    pi: ExtPoly,
    q_order: u64,
    /// Entry per residue index: exponent `0..4`, or `4` for the zero class.
    table: Vec<u8>,
}

impl PrimeSymbolTable {
    pub fn build(pi: &ExtPoly, ctx: &FieldCtx) -> Self {
        debug_assert!(pi.is_monic() && is_irreducible(pi, ctx));
        let q_order = ctx.ext_order();
        let d = pi.deg() as u32;
        let size = q_order.pow(d) as usize;
        let group_order = q_order.pow(d) - 1;
        let (gen, k0) = group_generator_with_symbol(pi, ctx);
        let mut table = vec![4u8; size];
        let mut res = ExtPoly::one();
        let mut k = 0u8;
        for _ in 0..group_order {
            table[residue_index(&res, q_order, ctx)] = k;
            res = res.mul(&gen, ctx).rem(pi, ctx).expect("nonzero modulus");
            k = (k + k0) % 4;
        }
        debug_assert!(res == ExtPoly::one(), "walk closes after the group order");
        PrimeSymbolTable { pi: pi.clone(), q_order, table }
    }

    pub fn prime(&self) -> &ExtPoly {
        &self.pi
    }

    /// Symbol by residue index (for callers that track residues themselves).
    pub fn eval_index(&self, idx: usize) -> SymbolExp {
        match self.table[idx] {
            4 => SymbolExp::Zero,
            k => SymbolExp::Exp(k),
        }
    }

    /// Symbol of an arbitrary polynomial (one Euclidean reduction).
    pub fn eval(&self, a: &ExtPoly, ctx: &FieldCtx) -> SymbolExp {
        let r = a.rem(&self.pi, ctx).expect("nonzero modulus");
        self.eval_index(residue_index(&r, self.q_order, ctx))
    }

    /// Number of residue classes (`Q^{deg π}`).
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Canonical index of a residue `r` with `deg r < d`: digits base `Q`.
pub fn residue_index(r: &ExtPoly, q_order: u64, ctx: &FieldCtx) -> usize {
    let mut idx = 0u64;
    for c in r.coeffs().iter().rev() {
        idx = idx * q_order + Fq2Elem::to_index(ctx, *c) as u64;
    }
    idx as usize
}

/// A generator of the unit group `(F_q²[T]/π)^×` (the first one in residue-
/// index order, so low-degree — almost always constant or linear) together
/// with the symbol exponent `k₀` of `χ_π` at it. `k₀` is always odd: the
/// symbol has exact order 4 at a generator.
pub fn group_generator_with_symbol(pi: &ExtPoly, ctx: &FieldCtx) -> (ExtPoly, u8) {
    let d = pi.deg() as u32;
    let group_order = ctx.ext_order().pow(d) - 1;
    let gen = find_generator(pi, group_order, ctx);
    let k0 = match quartic_symbol_unchecked(&gen, pi, ctx) {
        SymbolExp::Exp(k) => k,
        SymbolExp::Zero => unreachable!("generator is a unit"),
    };
    debug_assert!(k0 % 2 == 1, "symbol at a generator has exact order 4");
    (gen, k0)
}

fn find_generator(pi: &ExtPoly, group_order: u64, ctx: &FieldCtx) -> ExtPoly {
    let prime_divs = distinct_prime_factors(group_order);
    let d = pi.deg() as u32;
    for idx in 1..ctx.ext_order().pow(d) {
        let cand = residue_from_index(idx, d, ctx);
        if is_generator(&cand, pi, group_order, &prime_divs, ctx) {
            return cand;
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

fn residue_from_index(mut idx: u64, d: u32, ctx: &FieldCtx) -> ExtPoly {
    let q_order = ctx.ext_order();
    let mut coeffs = Vec::with_capacity(d as usize);
    for _ in 0..d {
        coeffs.push(Fq2Elem::from_index(ctx, (idx % q_order) as u32));
        idx /= q_order;
    }
    Poly::from_coeffs(coeffs)
}

fn is_generator(
    cand: &ExtPoly,
    pi: &ExtPoly,
    group_order: u64,
    prime_divs: &[u64],
    ctx: &FieldCtx,
) -> bool {
    prime_divs.iter().all(|&r| {
        let pow = cand
            .powmod(&BigUint::from(group_order / r), pi, ctx)
            .expect("nonzero modulus");
        pow != ExtPoly::one()
    })
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Process-wide registry of symbol tables, keyed by prime. Insert-only, safe
/// for concurrent family scans; hits are bit-identical to recomputation
/// because table construction is deterministic.
#[derive(Default)]
pub struct SymbolTables {
    map: DashMap<ExtPoly, Arc<PrimeSymbolTable>>,
}

impl SymbolTables {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, pi: &ExtPoly, ctx: &FieldCtx) -> Arc<PrimeSymbolTable> {
        if let Some(t) = self.map.get(pi) {
            return t.clone();
        }
        let built = Arc::new(PrimeSymbolTable::build(pi, ctx));
        self.map.entry(pi.clone()).or_insert(built).clone()
    }
}

/// Table-backed evaluator for one character: the product of per-prime table
/// lookups. Construction cost is paid once per distinct prime via the shared
/// [`SymbolTables`] registry.
pub struct CharEvaluator {
    chi: QuarticCharacter,
    tables: Vec<Arc<PrimeSymbolTable>>,
}

impl CharEvaluator {
    pub fn new(chi: QuarticCharacter, tables: &SymbolTables, ctx: &FieldCtx) -> Self {
        let tabs = chi.primes.iter().map(|pi| tables.get(pi, ctx)).collect();
        CharEvaluator { chi, tables: tabs }
    }

    pub fn character(&self) -> &QuarticCharacter {
        &self.chi
    }

    pub fn eval_ext(&self, a: &ExtPoly, ctx: &FieldCtx) -> SymbolExp {
        let mut acc = SymbolExp::Exp(0);
        for t in &self.tables {
            acc = acc.mul(t.eval(a, ctx));
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn eval_base(&self, f: &BasePoly, ctx: &FieldCtx) -> SymbolExp {
        self.eval_ext(&f.lift(ctx), ctx)
    }
}
