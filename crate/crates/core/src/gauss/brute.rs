//! Brute-force generalized Gauss sums: the literal definition
//! `G(V, f) = Σ_{u mod f} χ_f(u) · e(uV/f)` summed over every residue.
//!
//! The residue loop is an odometer over the `deg f` coefficient digits of
//! `u`. Both ingredients of a term are additive in `u`, so the loop never
//! recomputes them from scratch:
//!
//! * the additive phase `Tr((uV mod f)_{deg f − 1})` is a sum of per-digit
//!   contributions `B[j][v]`, updated by a table difference per step;
//! * the residue of `u` modulo each prime factor `P` of `f` is a vector of
//!   `F_p` digits, updated componentwise from tables `R[P][j][v]`; the
//!   quartic symbol at `P` is then one lookup in the prime's symbol table.
//!
//! Terms are tallied into an integer grid `counts[k][t]` (symbol exponent ×
//! additive phase) and converted to a single [`CycInt`] at the end, so the
//! whole sum is exact and embarrassingly parallel: the digit space is split
//! into blocks along the odometer's top digits, each block tallies its own
//! grid, and grids merge by addition in any order.

use rayon::prelude::*;

use crate::chars::{group_generator_with_symbol, PrimeSymbolTable, SymbolTables};
use crate::field::{FieldCtx, FieldElem, Fq2Elem};
use crate::poly::factor::factor;
use crate::poly::ExtPoly;
use super::cyclo::CycInt;
use super::{Budget, GaussError};

/// `G(1, π)` for a monic irreducible `π`, by walking the unit group of the
/// residue field once: `u_j = gen^j` advances by one in-place modular
/// multiplication, `χ_π(u_j) = i^{j·k₀}` advances by exponent addition, and
/// the additive phase reads off the top residue digit. No residue table is
/// materialized, so memory stays `O(deg π)` for any prime degree.
pub fn gauss_sum_prime_walk(
    pi: &ExtPoly,
    ctx: &FieldCtx,
    budget: Budget,
) -> Result<CycInt, GaussError> {
    let d = pi.deg();
    assert!(d >= 1, "prime moduli have positive degree");
    let q_order = ctx.ext_order();
    let cost = (q_order as u128)
        .checked_pow(d as u32)
        .ok_or(GaussError::CostCeiling { cost: u128::MAX, budget: budget.max_residues })?;
    budget.check(cost)?;
    let p = ctx.p();
    let (gen, k0) = group_generator_with_symbol(pi, ctx);

    // Flat coefficient buffers; the multiplier and modulus never change.
    let gen_c: Vec<Fq2Elem> = padded(&gen, d);
    let pi_c: Vec<Fq2Elem> = padded(pi, d + 1);
    let mut res: Vec<Fq2Elem> = padded(&ExtPoly::one(), d);
    let mut scratch = vec![Fq2Elem::zero(); 2 * d];

    let mut counts = vec![0i64; 4 * p as usize];
    let mut k = 0u8;
    for _ in 0..(cost - 1) {
        let t = Fq2Elem::trace_to_prime(ctx, res[d - 1]);
        counts[k as usize * p as usize + t as usize] += 1;
        // res ← res·gen mod π, schoolbook then monic reduction.
        for s in scratch.iter_mut() {
            *s = Fq2Elem::zero();
        }
        for (i, &a) in res.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in gen_c.iter().enumerate() {
                if !b.is_zero() {
                    scratch[i + j] =
                        Fq2Elem::add(ctx, scratch[i + j], Fq2Elem::mul(ctx, a, b));
                }
            }
        }
        for top in (d..2 * d).rev() {
            let c = scratch[top];
            if c.is_zero() {
                continue;
            }
            scratch[top] = Fq2Elem::zero();
            for (t, &pc) in pi_c.iter().enumerate().take(d) {
                scratch[top - d + t] =
                    Fq2Elem::sub(ctx, scratch[top - d + t], Fq2Elem::mul(ctx, c, pc));
            }
        }
        res.copy_from_slice(&scratch[..d]);
        k = (k + k0) % 4;
    }
    debug_assert_eq!(res, padded(&ExtPoly::one(), d), "walk closes after the group order");
    Ok(CycInt::from_counts(p, &counts))
}

fn padded(f: &ExtPoly, len: usize) -> Vec<Fq2Elem> {
    let mut out = vec![Fq2Elem::zero(); len];
    for (i, &c) in f.coeffs().iter().enumerate() {
        out[i] = c;
    }
    out
}

/// Exact brute-force evaluation of `G(V, f)` over `F_q²[T]`.
pub fn gauss_sum_brute(
    v: &ExtPoly,
    f: &ExtPoly,
    ctx: &FieldCtx,
    tables: &SymbolTables,
    budget: Budget,
) -> Result<CycInt, GaussError> {
    assert!(f.is_monic() && !f.is_constant(), "brute sums need deg f ≥ 1");
    let m = f.deg();
    let q_order = ctx.ext_order();
    let cost = (q_order as u128)
        .checked_pow(m as u32)
        .ok_or(GaussError::CostCeiling { cost: u128::MAX, budget: budget.max_residues })?;
    budget.check(cost)?;

    let p = ctx.p();
    // Prime data: symbol table, exponent in f, residue-delta tables.
    let fac = factor(f, ctx);
    let primes: Vec<PrimeData> = fac
        .factors
        .iter()
        .map(|(prime, e)| PrimeData::new(prime, *e, m, ctx, tables))
        .collect();

    // Phase tables: B[j][v] = Tr of the top coefficient of elem(v)·T^j·V mod f.
    let phase = phase_tables(v, f, m, ctx);

    // Split the odometer along its top digits into parallel blocks.
    let threads = rayon::current_num_threads().max(1);
    let mut top_digits = 0usize;
    let mut blocks = 1u128;
    while top_digits < m && blocks < (threads as u128) * 8 && cost / blocks > 1 << 14 {
        top_digits += 1;
        blocks *= q_order as u128;
    }
    let lower = m - top_digits;
    let block_len = (q_order as u128).pow(lower as u32) as u64;

    let counts = (0..blocks as u64)
        .into_par_iter()
        .map(|block| {
            run_block(block, top_digits, lower, block_len, q_order, p, &primes, &phase)
        })
        .reduce(
            || vec![0i64; 4 * p as usize],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
                a
            },
        );
    Ok(CycInt::from_counts(p, &counts))
}

struct PrimeData {
    table: std::sync::Arc<PrimeSymbolTable>,
    /// Exponent of the prime in `f`, reduced mod 4 (symbol exponents are).
    exp_mod4: u8,
    /// Prime degree (number of `F_q²` residue slots; `2d` F_p digits).
    d: usize,
    /// `delta[j·Q + v]` = F_p digit vector of `elem(v)·T^j mod P`.
    delta: Vec<Vec<u16>>,
}

impl PrimeData {
    fn new(
        prime: &ExtPoly,
        e: u32,
        m: usize,
        ctx: &FieldCtx,
        tables: &SymbolTables,
    ) -> PrimeData {
        let q_order = ctx.ext_order() as usize;
        let d = prime.deg();
        let mut delta = Vec::with_capacity(m * q_order);
        for j in 0..m {
            let tj = ExtPoly::monomial(j).rem(prime, ctx).expect("nonzero modulus");
            for vidx in 0..q_order {
                let elem = Fq2Elem::from_index(ctx, vidx as u32);
                let r = tj.mul_scalar(elem, ctx);
                delta.push(fp_digits(&r, d, ctx));
            }
        }
        PrimeData { table: tables.get(prime, ctx), exp_mod4: (e % 4) as u8, d, delta }
    }
}

/// The residue as `2d` digits in `F_p`: `re₀, im₀, re₁, im₁, …`.
fn fp_digits(r: &ExtPoly, d: usize, _ctx: &FieldCtx) -> Vec<u16> {
    let mut out = vec![0u16; 2 * d];
    for k in 0..d.min(r.coeffs().len()) {
        let c = r.coeff(k);
        out[2 * k] = c.re.0;
        out[2 * k + 1] = c.im.0;
    }
    out
}

fn phase_tables(v: &ExtPoly, f: &ExtPoly, m: usize, ctx: &FieldCtx) -> Vec<u16> {
    let q_order = ctx.ext_order() as usize;
    let mut out = vec![0u16; m * q_order];
    for j in 0..m {
        let base = ExtPoly::monomial(j)
            .mul(v, ctx)
            .rem(f, ctx)
            .expect("nonzero modulus");
        for vidx in 0..q_order {
            let elem = Fq2Elem::from_index(ctx, vidx as u32);
            // Scalar multiples stay reduced, so the top coefficient is direct.
            let top = ctx.ext_mul(base.coeff(m - 1), elem);
            out[j * q_order + vidx] = Fq2Elem::trace_to_prime(ctx, top);
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn run_block(
    block: u64,
    top_digits: usize,
    lower: usize,
    block_len: u64,
    q_order: u64,
    p: u32,
    primes: &[PrimeData],
    phase_tab: &[u16],
) -> Vec<i64> {
    let q = q_order as usize;
    let m = top_digits + lower;
    // Fixed top digits for this block.
    let mut digits = vec![0usize; m];
    let mut rest = block;
    for j in lower..m {
        digits[j] = (rest % q_order) as usize;
        rest /= q_order;
    }
    // Initialize the additive state from the digit assignment.
    let mut phase: u32 = 0;
    for (j, &dj) in digits.iter().enumerate() {
        phase = (phase + phase_tab[j * q + dj] as u32) % p;
    }
    let mut residues: Vec<Vec<u16>> = primes
        .iter()
        .map(|pd| {
            let mut r = vec![0u16; 2 * pd.d];
            for (j, &dj) in digits.iter().enumerate() {
                add_digits(&mut r, &pd.delta[j * q + dj], p as u16);
            }
            r
        })
        .collect();

    let mut counts = vec![0i64; 4 * p as usize];
    let mut iters = block_len;
    loop {
        // Tally the current residue.
        let mut k_total = 0u8;
        let mut zero = false;
        for (pd, r) in primes.iter().zip(&residues) {
            let idx = fold_index(r, p as u64, q_order);
            match pd.table.eval_index(idx) {
                crate::chars::SymbolExp::Zero => {
                    zero = true;
                    break;
                }
                crate::chars::SymbolExp::Exp(k) => {
                    k_total = (k_total + k * pd.exp_mod4) % 4;
                }
            }
        }
        if !zero {
            counts[k_total as usize * p as usize + phase as usize] += 1;
        }
        iters -= 1;
        if iters == 0 {
            break;
        }
        // Odometer step over the lower digits.
        for j in 0..lower {
            let from = digits[j];
            let to = if from + 1 < q { from + 1 } else { 0 };
            digits[j] = to;
            let b_from = phase_tab[j * q + from] as u32;
            let b_to = phase_tab[j * q + to] as u32;
            phase = (phase + b_to + p - b_from) % p;
            for (pd, r) in primes.iter().zip(residues.iter_mut()) {
                let d_from = &pd.delta[j * q + from];
                let d_to = &pd.delta[j * q + to];
                for s in 0..r.len() {
                    let val = r[s] + d_to[s] + p as u16 - d_from[s];
                    r[s] = val % p as u16;
                }
            }
            if to != 0 {
                break;
            }
        }
    }
    counts
}

#[inline]
fn add_digits(r: &mut [u16], delta: &[u16], p: u16) {
    for (a, b) in r.iter_mut().zip(delta) {
        let v = *a + *b;
        *a = if v >= p { v - p } else { v };
    }
}

/// Residue index from interleaved `F_p` digits: `Σ (re_k + p·im_k)·Q^k`.
#[inline]
fn fold_index(r: &[u16], p: u64, q_order: u64) -> usize {
    let mut idx = 0u64;
    for k in (0..r.len() / 2).rev() {
        let slot = r[2 * k] as u64 + p * r[2 * k + 1] as u64;
        idx = idx * q_order + slot;
    }
    idx as usize
}
