//! Irreducibility testing and complete factorization over `F_q[T]` / `F_q²[T]`.
//!
//! [`factor`] runs the classical pipeline: squarefree decomposition (with the
//! characteristic-`p` wrinkle — a vanishing derivative signals a `p`-th power,
//! whose root is extracted coefficientwise), then distinct-degree splitting by
//! `gcd(f, T^{Q^d} − T)`, then equal-degree splitting by the odd-order
//! Cantor–Zassenhaus step `gcd(f, h^{(Q^d−1)/2} − 1)`.
//!
//! The equal-degree stage needs random trial polynomials. To keep every run
//! reproducible and independent of call order, the randomness is a ChaCha8
//! stream seeded purely from the polynomial being split (plus a fixed domain
//! constant), so factoring the same polynomial always walks the same trials.
//!
//! [`is_irreducible`] is the derandomized test used in hot enumeration loops:
//! `f` of degree `n` is irreducible iff `T^{Q^n} ≡ T (mod f)` and
//! `gcd(T^{Q^{n/r}} − T, f) = 1` for every prime `r | n`.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldCtx, FieldElem};
use super::Poly;

/// A complete factorization `f = unit · Π primeᵉ`, primes monic, sorted in
/// the canonical polynomial order, each appearing once with its exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<C> {
    pub unit: C,
    pub factors: Vec<(Poly<C>, u32)>,
}

impl<C: FieldElem> Factorization<C> {
    /// Multiplies the factorization back out (test support).
    pub fn value(&self, ctx: &FieldCtx) -> Poly<C> {
        let mut acc = Poly::constant(self.unit);
        for (p, e) in &self.factors {
            acc = acc.mul(&p.pow(*e, ctx), ctx);
        }
        acc
    }

    /// Number of distinct prime factors.
    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// Deterministic irreducibility test (see module docs). Constants and zero
/// are not irreducible; units on a nonconstant polynomial are ignored.
pub fn is_irreducible<C: FieldElem>(f: &Poly<C>, ctx: &FieldCtx) -> bool {
    if f.is_zero() || f.is_constant() {
        return false;
    }
    let (_, f) = f.make_monic(ctx);
    let n = f.deg() as u32;
    if n == 1 {
        return true;
    }
    let q_order = C::order(ctx);
    let x: Poly<C> = Poly::monomial(1);
    let check_points: Vec<u32> = prime_divisors(n).into_iter().map(|r| n / r).collect();
    let mut h = x.clone(); // x mod f; deg f ≥ 2 so already reduced
    for j in 1..=n {
        h = h.powmod_u64(q_order, &f, ctx).expect("nonzero modulus");
        if check_points.contains(&j) && !f.gcd(&h.sub(&x, ctx), ctx).is_constant() {
            return false;
        }
    }
    h == x
}

/// Factors a nonzero polynomial completely. Panics on zero input.
pub fn factor<C: FieldElem>(f: &Poly<C>, ctx: &FieldCtx) -> Factorization<C> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let (unit, monic) = f.make_monic(ctx);
    let mut factors: Vec<(Poly<C>, u32)> = Vec::new();
    if !monic.is_constant() {
        for (part, mult) in squarefree_parts(&monic, ctx) {
            for (product, d) in distinct_degree_split(&part, ctx) {
                for prime in equal_degree_split(&product, d, ctx) {
                    factors.push((prime, mult));
                }
            }
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    // Parts from the squarefree decomposition are pairwise coprime, so no
    // merging should occur; keep it for safety.
    let mut merged: Vec<(Poly<C>, u32)> = Vec::with_capacity(factors.len());
    for (p, e) in factors {
        match merged.last_mut() {
            Some((lp, le)) if *lp == p => *le += e,
            _ => merged.push((p, e)),
        }
    }
    Factorization { unit, factors: merged }
}

/// Squarefree decomposition: returns pairwise-coprime monic squarefree
/// `(gᵢ, mᵢ)` with `f = Π gᵢ^{mᵢ}`. Handles the characteristic-`p` case by
/// recursing on `p`-th roots.
fn squarefree_parts<C: FieldElem>(f: &Poly<C>, ctx: &FieldCtx) -> Vec<(Poly<C>, u32)> {
    debug_assert!(f.is_monic() && !f.is_constant());
    let p = ctx.p();
    let mut out = Vec::new();
    let deriv = f.derivative(ctx);
    if deriv.is_zero() {
        for (g, m) in squarefree_parts(&pth_root_poly(f, ctx), ctx) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&deriv, ctx);
    let mut w = f.divrem(&c, ctx).expect("gcd divides").0;
    let mut i = 1u32;
    while !w.is_constant() {
        let y = w.gcd(&c, ctx);
        let z = w.divrem(&y, ctx).expect("gcd divides").0;
        if !z.is_constant() {
            out.push((z, i));
        }
        c = c.divrem(&y, ctx).expect("gcd divides").0;
        w = y;
        i += 1;
    }
    if !c.is_constant() {
        // What remains carries only multiplicities divisible by p.
        for (g, m) in squarefree_parts(&pth_root_poly(&c, ctx), ctx) {
            out.push((g, m * p));
        }
    }
    out
}

/// The `p`-th root of a polynomial with zero derivative: every exponent is a
/// multiple of `p`, and coefficients get their (unique) field `p`-th root.
fn pth_root_poly<C: FieldElem>(f: &Poly<C>, ctx: &FieldCtx) -> Poly<C> {
    let p = ctx.p() as usize;
    let mut coeffs = Vec::with_capacity(f.deg() / p + 1);
    for k in 0..=f.deg() {
        let c = f.coeff(k);
        if k % p == 0 {
            coeffs.push(C::pth_root(ctx, c));
        } else {
            debug_assert!(c.is_zero(), "p-th power must be supported on multiples of p");
        }
    }
    Poly::from_coeffs(coeffs)
}

/// Distinct-degree stage: for squarefree monic `f`, returns `(product, d)`
/// pairs where `product` is the product of all prime factors of degree `d`.
fn distinct_degree_split<C: FieldElem>(f: &Poly<C>, ctx: &FieldCtx) -> Vec<(Poly<C>, u32)> {
    let q_order = C::order(ctx);
    let x: Poly<C> = Poly::monomial(1);
    let mut out = Vec::new();
    let mut rem = f.clone();
    let mut h = x.rem(&rem, ctx).expect("nonzero modulus");
    let mut d = 1u32;
    while !rem.is_constant() {
        if (rem.deg() as u32) < 2 * d {
            let deg = rem.deg() as u32;
            out.push((rem, deg));
            break;
        }
        h = h.powmod_u64(q_order, &rem, ctx).expect("nonzero modulus");
        let g = rem.gcd(&h.sub(&x, ctx), ctx);
        if !g.is_constant() {
            rem = rem.divrem(&g, ctx).expect("gcd divides").0;
            h = h.rem(&rem, ctx).expect("nonzero modulus");
            out.push((g, d));
        }
        d += 1;
    }
    out
}

/// Equal-degree stage (Cantor–Zassenhaus, odd order): splits a monic
/// squarefree `g` all of whose prime factors have degree `d`.
fn equal_degree_split<C: FieldElem>(g: &Poly<C>, d: u32, ctx: &FieldCtx) -> Vec<Poly<C>> {
    let mut rng = rng_for_poly(g, ctx);
    let exponent = (BigUint::from(C::order(ctx)).pow(d) - BigUint::one()) >> 1;
    let mut out = Vec::new();
    split_rec(g.clone(), d, &exponent, ctx, &mut rng, &mut out);
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

fn split_rec<C: FieldElem>(
    g: Poly<C>,
    d: u32,
    exponent: &BigUint,
    ctx: &FieldCtx,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Poly<C>>,
) {
    if g.deg() as u32 == d {
        out.push(g);
        return;
    }
    loop {
        let h = random_poly::<C>(rng, g.deg(), ctx);
        if h.is_constant() {
            continue;
        }
        // Lucky split: a nontrivial common factor of the trial itself.
        let lucky = g.gcd(&h, ctx);
        let split = if !lucky.is_constant() && lucky.deg() < g.deg() {
            lucky
        } else {
            let w = h.powmod(exponent, &g, ctx).expect("nonzero modulus");
            let cand = g.gcd(&w.sub(&Poly::one(), ctx), ctx);
            if cand.is_constant() || cand.deg() == g.deg() {
                continue;
            }
            cand
        };
        let other = g.divrem(&split, ctx).expect("gcd divides").0;
        split_rec(split, d, exponent, ctx, rng, out);
        split_rec(other, d, exponent, ctx, rng, out);
        return;
    }
}

/// Uniform random polynomial of degree `< deg_bound`.
fn random_poly<C: FieldElem>(rng: &mut ChaCha8Rng, deg_bound: usize, ctx: &FieldCtx) -> Poly<C> {
    let q_order = C::order(ctx) as u32;
    let coeffs = (0..deg_bound).map(|_| C::from_index(ctx, rng.gen_range(0..q_order))).collect();
    Poly::from_coeffs(coeffs)
}

/// Domain-separation constant for the factoring RNG stream.
const FACTOR_SEED_DOMAIN: u64 = 0x7146_ac71_c5f0_9e24;

/// ChaCha8 stream determined entirely by the polynomial being split, so
/// factorization is reproducible and call-order independent.
fn rng_for_poly<C: FieldElem>(g: &Poly<C>, ctx: &FieldCtx) -> ChaCha8Rng {
    let mut state = FACTOR_SEED_DOMAIN ^ (ctx.p() as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mut seed = [0u8; 32];
    let mut mix = |v: u64, out: &mut [u8; 32], slot: &mut usize| {
        state ^= v.wrapping_add(0x9e37_79b9_7f4a_7c15);
        state = splitmix64(state);
        out[*slot % 32] ^= (state & 0xff) as u8;
        *slot += 1;
    };
    let mut slot = 0usize;
    for (k, &c) in g.coeffs().iter().enumerate() {
        mix((k as u64) << 32 | C::to_index(ctx, c) as u64, &mut seed, &mut slot);
    }
    // Expand the final state across the whole seed.
    for byte in seed.iter_mut() {
        state = splitmix64(state);
        *byte ^= (state & 0xff) as u8;
    }
    ChaCha8Rng::from_seed(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
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
