//! Polynomial rings `F_q[T]` and `F_q²[T]`.
//!
//! [`Poly`] is a dense coefficient vector in ascending order with no trailing
//! zeros (the zero polynomial is the empty vector); every constructor and
//! operation restores that canonical form, so structural equality is
//! polynomial equality. [`BasePoly`] and [`ExtPoly`] fix the two coefficient
//! fields used throughout the crate.
//!
//! Beyond ring arithmetic this module carries the Galois bookkeeping between
//! the two rings — coefficientwise Frobenius ([`Poly::frobenius_conj`]), the
//! base-subring test, and the norm `F·F^σ` down to `F_q[T]` — plus canonical
//! enumeration of monic polynomials by index (radix-`Q` coefficient digits,
//! constant coefficient fastest) and the elementary arithmetic functions:
//! Möbius `μ`, Euler `φ` on prime powers, and the prime-counting formula
//! `π_Q(d) = (1/d)·Σ_{e|d} μ(e)·Q^{d/e}`.
//!
//! Factorization lives in [`factor`], text round-tripping in [`parse`].

pub mod factor;
pub mod parse;

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{FieldCtx, FieldElem, Fq2Elem, FqElem};

/// Errors from polynomial arithmetic and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    /// Division (or inversion mod f) by the zero polynomial.
    #[error("polynomial division by zero")]
    DivisionByZero,
    /// Malformed polynomial text; `pos` is a byte offset into the input.
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    /// A numeric literal in polynomial text did not fit in 64 bits.
    #[error("coefficient literal at position {pos} out of range")]
    CoefficientOutOfRange { pos: usize },
}

/// Polynomial over a coefficient field `C`, canonical dense form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

/// Polynomial over the base field `F_q`.
pub type BasePoly = Poly<FqElem>;
/// Polynomial over the extension field `F_q²`.
pub type ExtPoly = Poly<Fq2Elem>;

impl<C: FieldElem> Poly<C> {
    // ---- Constructors ----

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![C::one()] }
    }

    pub fn constant(c: C) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.normalize();
        p
    }

    /// `T^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = C::one();
        Poly { coeffs }
    }

    /// Builds from ascending coefficients, stripping trailing zeros.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    // ---- Queries ----

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a known-nonzero polynomial.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    /// Coefficient of `T^k` (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).copied().unwrap_or_else(C::zero)
    }

    /// Ascending coefficient slice (no trailing zeros).
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<C> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(C::one())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Canonical total order: by degree, then coefficients from the top down
    /// (using the coefficient type's own order). Used to sort prime factors.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    // ---- Ring arithmetic ----

    pub fn add(&self, other: &Self, ctx: &FieldCtx) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(C::add(ctx, self.coeff(k), other.coeff(k)));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self, ctx: &FieldCtx) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(C::sub(ctx, self.coeff(k), other.coeff(k)));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|&c| C::neg(ctx, c)).collect() }
    }

    pub fn mul(&self, other: &Self, ctx: &FieldCtx) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = C::add(ctx, out[i + j], C::mul(ctx, a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn mul_scalar(&self, s: C, ctx: &FieldCtx) -> Self {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| C::mul(ctx, c, s)).collect())
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Self, ctx: &FieldCtx) -> Result<(Self, Self), PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dd = divisor.deg();
        if self.coeffs.len() < divisor.coeffs.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = C::inv(ctx, divisor.leading().unwrap()).expect("nonzero leading");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let q = C::mul(ctx, c, lead_inv);
            quot[k - dd] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] = C::sub(ctx, rem[k - dd + j], C::mul(ctx, q, dc));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Remainder of Euclidean division.
    pub fn rem(&self, divisor: &Self, ctx: &FieldCtx) -> Result<Self, PolyError> {
        Ok(self.divrem(divisor, ctx)?.1)
    }

    /// Monic greatest common divisor; `gcd(0,0) = 0`.
    pub fn gcd(&self, other: &Self, ctx: &FieldCtx) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, ctx).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic(ctx).1
    }

    /// Splits into `(leading coefficient, monic part)`; zero maps to
    /// `(1, 0)` so the product convention `f = unit · monic` always holds.
    pub fn make_monic(&self, ctx: &FieldCtx) -> (C, Self) {
        match self.leading() {
            None => (C::one(), Poly::zero()),
            Some(l) if l == C::one() => (l, self.clone()),
            Some(l) => {
                let li = C::inv(ctx, l).expect("nonzero leading");
                (l, self.mul_scalar(li, ctx))
            }
        }
    }

    /// Formal derivative.
    pub fn derivative(&self, ctx: &FieldCtx) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let p = ctx.p() as u64;
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            let mut acc = C::zero();
            for _ in 0..(k as u64 % p) {
                acc = C::add(ctx, acc, c);
            }
            out.push(acc);
        }
        Poly::from_coeffs(out)
    }

    /// `self^e mod f` by binary exponentiation (arbitrary-precision exponent).
    pub fn powmod(&self, e: &BigUint, f: &Self, ctx: &FieldCtx) -> Result<Self, PolyError> {
        if f.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut base = self.rem(f, ctx)?;
        let mut acc = Poly::one().rem(f, ctx)?;
        let bits = e.bits();
        for k in 0..bits {
            if e.bit(k) {
                acc = acc.mul(&base, ctx).rem(f, ctx)?;
            }
            if k + 1 < bits {
                base = base.mul(&base, ctx).rem(f, ctx)?;
            }
        }
        Ok(acc)
    }

    /// Convenience wrapper for small exponents.
    pub fn powmod_u64(&self, e: u64, f: &Self, ctx: &FieldCtx) -> Result<Self, PolyError> {
        self.powmod(&BigUint::from(e), f, ctx)
    }

    /// Plain power (no modulus); exponent small by construction.
    pub fn pow(&self, e: u32, ctx: &FieldCtx) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self, ctx);
        }
        acc
    }

    /// Evaluates at a field element by Horner's rule.
    pub fn eval(&self, at: C, ctx: &FieldCtx) -> C {
        let mut acc = C::zero();
        for &c in self.coeffs.iter().rev() {
            acc = C::add(ctx, C::mul(ctx, acc, at), c);
        }
        acc
    }

    /// Whether `self` is squarefree: `gcd(f, f')` is constant. The zero
    /// polynomial is not squarefree; nonzero constants are.
    pub fn is_squarefree(&self, ctx: &FieldCtx) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.is_constant() {
            return true;
        }
        let d = self.derivative(ctx);
        if d.is_zero() {
            // f = g(T^p) is a p-th power times a constant: never squarefree
            // at positive degree.
            return false;
        }
        self.gcd(&d, ctx).is_constant()
    }
}

// ---- Galois structure between the two rings ----

impl BasePoly {
    /// Views a base polynomial inside the extension ring.
    pub fn lift(&self, ctx: &FieldCtx) -> ExtPoly {
        Poly { coeffs: self.coeffs.iter().map(|&c| ctx.lift(c)).collect() }
    }
}

impl ExtPoly {
    /// Coefficientwise Frobenius `F ↦ F^σ` (negates every `x`-part).
    pub fn frobenius_conj(&self, ctx: &FieldCtx) -> ExtPoly {
        Poly { coeffs: self.coeffs.iter().map(|&c| ctx.frobenius(c)).collect() }
    }

    /// Whether all coefficients lie in the base field.
    pub fn in_base_subring(&self) -> bool {
        self.coeffs.iter().all(|c| c.im.0 == 0)
    }

    /// Reinterprets as a base polynomial when possible.
    pub fn as_base(&self) -> Option<BasePoly> {
        if self.in_base_subring() {
            Some(Poly { coeffs: self.coeffs.iter().map(|c| c.re).collect() })
        } else {
            None
        }
    }

    /// The norm `F·F^σ`, which is Galois-fixed and therefore a base
    /// polynomial (asserted).
    pub fn norm_to_base(&self, ctx: &FieldCtx) -> BasePoly {
        let n = self.mul(&self.frobenius_conj(ctx), ctx);
        n.as_base().expect("norm must land in the base subring")
    }
}

// ---- Canonical enumeration ----

/// Number of monic polynomials of degree `d` over a field of order `Q`.
pub fn monic_count(q_order: u64, d: u32) -> u64 {
    q_order.pow(d)
}

/// The `idx`-th monic polynomial of degree `d`, in the canonical order:
/// coefficient of `T^k` is the field element with index
/// `(idx / Q^k) mod Q`, so the constant coefficient varies fastest.
pub fn monic_from_index<C: FieldElem>(ctx: &FieldCtx, d: u32, mut idx: u64) -> Poly<C> {
    let q = C::order(ctx);
    debug_assert!(idx < q.pow(d));
    let mut coeffs = Vec::with_capacity(d as usize + 1);
    for _ in 0..d {
        coeffs.push(C::from_index(ctx, (idx % q) as u32));
        idx /= q;
    }
    coeffs.push(C::one());
    Poly { coeffs }
}

/// Iterator over all monic polynomials of degree `d` in canonical order.
pub fn monic_iter<'a, C: FieldElem>(
    ctx: &'a FieldCtx,
    d: u32,
) -> impl Iterator<Item = Poly<C>> + 'a {
    let count = monic_count(C::order(ctx), d);
    (0..count).map(move |idx| monic_from_index(ctx, d, idx))
}

/// Iterator over all polynomials of degree `< d_bound` (including zero),
/// canonical order by coefficient digits.
pub fn all_below_degree<'a, C: FieldElem>(
    ctx: &'a FieldCtx,
    d_bound: u32,
) -> impl Iterator<Item = Poly<C>> + 'a {
    let q = C::order(ctx);
    let count = q.pow(d_bound);
    (0..count).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(d_bound as usize);
        for _ in 0..d_bound {
            coeffs.push(C::from_index(ctx, (idx % q) as u32));
            idx /= q;
        }
        Poly::from_coeffs(coeffs)
    })
}

/// All monic irreducibles of degree `d`, canonical order.
pub fn primes_of_degree<C: FieldElem>(ctx: &FieldCtx, d: u32) -> Vec<Poly<C>> {
    monic_iter(ctx, d).filter(|f| factor::is_irreducible(f, ctx)).collect()
}

// ---- Arithmetic functions ----

/// Möbius function of a monic polynomial: `0` unless squarefree, otherwise
/// `(−1)^{number of prime factors}`.
pub fn moebius<C: FieldElem>(f: &Poly<C>, ctx: &FieldCtx) -> i8 {
    debug_assert!(f.is_monic());
    if !f.is_squarefree(ctx) {
        return 0;
    }
    let fac = factor::factor(f, ctx);
    if fac.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `φ(P^i) = |P|^{i−1}(|P| − 1)`: the number of invertible residues modulo
/// the `i`-th power of a prime `P`, where `|P| = Q^{deg P}`.
pub fn euler_phi_prime_power<C: FieldElem>(ctx: &FieldCtx, prime: &Poly<C>, i: u32) -> BigUint {
    debug_assert!(i >= 1);
    let size = BigUint::from(C::order(ctx)).pow(prime.deg() as u32);
    size.pow(i - 1) * (size - BigUint::one())
}

/// Number of monic irreducibles of degree `d` over a field of order `Q`:
/// `π_Q(d) = (1/d)·Σ_{e|d} μ(e)·Q^{d/e}`.
pub fn prime_count(q_order: u64, d: u32) -> BigUint {
    debug_assert!(d >= 1);
    let q = BigUint::from(q_order);
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        match int_moebius(e) {
            1 => pos += q.pow(d / e),
            -1 => neg += q.pow(d / e),
            _ => {}
        }
    }
    let total = pos - neg;
    let (quot, rem) = num_integer::Integer::div_rem(&total, &BigUint::from(d));
    debug_assert!(rem.is_zero(), "necklace count must divide evenly");
    quot
}

/// Integer Möbius function (for the exponents in `prime_count`).
fn int_moebius(mut n: u32) -> i8 {
    let mut factors = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            factors += 1;
        }
        d += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}
