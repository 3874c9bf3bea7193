//! Prime fields `F_q` and their quadratic extensions `F_q² = F_q[x]/(x²+1)`.
//!
//! The whole crate works over a prime `q ≡ 3 (mod 4)`. For such `q` the
//! element `−1` is a non-square, so `x² + 1` is irreducible over `F_q` and the
//! quotient `F_q[x]/(x²+1)` is the field with `q²` elements. Its elements are
//! written `a + b·x` with [`Fq2Elem::re`]` = a`, [`Fq2Elem::im`]` = b`.
//!
//! Because `q² ≡ 1 (mod 4)`, the extension contains all four fourth roots of
//! unity `{1, x, −1, −x}`. Quartic characters take values in the abstract
//! cyclic group `⟨i⟩ ⊂ C`, so a bijection between `⟨i⟩` and the fourth roots
//! inside the field must be fixed once and used everywhere. [`FieldCtx`] pins
//! it as `Ω(i) = x` by default ([`OmegaConvention::Standard`]); the swapped
//! identification `Ω(i) = −x` is available for convention-sensitivity reruns.
//! [`omega_inverse`] inverts the identification, mapping a fourth root of
//! unity in the field to its exponent `k` with the root equal to `Ω(i)^k`.
//!
//! The Frobenius `z ↦ z^q` generates the Galois group of the extension; since
//! `x^q = −x` it acts by negating the `x`-part ([`frobenius`]). The absolute
//! trace down to the prime field is `z + z^q = 2·re(z)` ([`trace_to_prime`]).
//!
//! Arithmetic is exposed through the [`FieldElem`] trait so polynomial code
//! can be generic over the base field and the extension.

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

/// Errors from field construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    /// The requested characteristic is not a prime number.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// The characteristic is prime but not congruent to 3 mod 4, so x²+1
    /// is reducible and the intended quadratic model does not exist.
    #[error("{0} is not congruent to 3 mod 4")]
    WrongResidue(u64),
    /// Division or inversion of zero.
    #[error("division by zero")]
    DivisionByZero,
    /// The element is not a fourth root of unity, so it has no exponent
    /// under the fixed identification Ω.
    #[error("element is not a fourth root of unity")]
    NotQuarticRoot,
}

/// Which fourth root of unity in the field the abstract `i` is mapped to.
///
/// Both choices are legitimate; all symbol exponents and Gauss-sum phases
/// downstream depend on it coherently, and counting statistics must not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaConvention {
    /// `Ω(i) = x` (the adjoined square root of −1). The default.
    Standard,
    /// `Ω(i) = −x`.
    Conjugate,
}

impl OmegaConvention {
    /// Stable textual form used in reports.
    pub fn label(self) -> &'static str {
        match self {
            OmegaConvention::Standard => "Omega(i)=x",
            OmegaConvention::Conjugate => "Omega(i)=-x",
        }
    }
}

/// An element of the prime field `F_q`, stored as its canonical residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub u16);

/// An element `re + im·x` of `F_q² = F_q[x]/(x²+1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq2Elem {
    pub re: FqElem,
    pub im: FqElem,
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Fq2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}x", self.re.0, self.im.0)
    }
}

/// Field context: the characteristic, the Ω identification, and small
/// precomputed tables (inverses, fourth-root exponents).
///
/// All arithmetic goes through the context; elements are plain value types.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    convention: OmegaConvention,
    /// Multiplicative inverses in `F_q` (index 0 unused).
    inv_table: Vec<u16>,
    /// The four powers `Ω(i)^0..Ω(i)^3` in the extension.
    omega_powers: [Fq2Elem; 4],
}

impl FieldCtx {
    /// Builds the context for a prime `q ≡ 3 (mod 4)` with the standard
    /// identification `Ω(i) = x`.
    pub fn new(q: u64) -> Result<FieldCtx, FieldError> {
        FieldCtx::with_convention(q, OmegaConvention::Standard)
    }

    /// Builds the context with an explicit Ω identification.
    pub fn with_convention(q: u64, convention: OmegaConvention) -> Result<FieldCtx, FieldError> {
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        if q % 4 != 3 {
            return Err(FieldError::WrongResidue(q));
        }
        let p = q as u32;
        debug_assert!(p < (1 << 15), "characteristic beyond supported range");
        let mut inv_table = vec![0u16; p as usize];
        for a in 1..p {
            inv_table[a as usize] = pow_mod(a, (p - 2) as u64, p) as u16;
        }
        let i_elem = match convention {
            OmegaConvention::Standard => Fq2Elem { re: FqElem(0), im: FqElem(1) },
            OmegaConvention::Conjugate => Fq2Elem { re: FqElem(0), im: FqElem((p - 1) as u16) },
        };
        let mut ctx = FieldCtx { p, convention, inv_table, omega_powers: [i_elem; 4] };
        let mut acc = Fq2Elem::one_value();
        for k in 0..4 {
            ctx.omega_powers[k] = acc;
            acc = ctx.ext_mul(acc, i_elem);
        }
        debug_assert_eq!(acc, Fq2Elem::one_value(), "Ω(i) must have order 4");
        Ok(ctx)
    }

    /// The characteristic `q = p`.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// The order `q²` of the extension field.
    pub fn ext_order(&self) -> u64 {
        (self.p as u64) * (self.p as u64)
    }

    /// The Ω identification in force.
    pub fn convention(&self) -> OmegaConvention {
        self.convention
    }

    /// `Ω(i)`: the field element the abstract `i` is identified with.
    pub fn i_elem(&self) -> Fq2Elem {
        self.omega_powers[1]
    }

    // ---- F_q arithmetic ----

    /// Canonical residue of an arbitrary integer.
    pub fn base(&self, v: u64) -> FqElem {
        FqElem((v % self.p as u64) as u16)
    }

    pub fn base_add(&self, a: FqElem, b: FqElem) -> FqElem {
        let s = a.0 as u32 + b.0 as u32;
        FqElem(if s >= self.p { (s - self.p) as u16 } else { s as u16 })
    }

    pub fn base_sub(&self, a: FqElem, b: FqElem) -> FqElem {
        let s = a.0 as u32 + self.p - b.0 as u32;
        FqElem(if s >= self.p { (s - self.p) as u16 } else { s as u16 })
    }

    pub fn base_neg(&self, a: FqElem) -> FqElem {
        if a.0 == 0 {
            a
        } else {
            FqElem((self.p - a.0 as u32) as u16)
        }
    }

    pub fn base_mul(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(((a.0 as u32 * b.0 as u32) % self.p) as u16)
    }

    pub fn base_inv(&self, a: FqElem) -> Result<FqElem, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FqElem(self.inv_table[a.0 as usize]))
    }

    pub fn base_pow(&self, a: FqElem, e: u64) -> FqElem {
        FqElem(pow_mod(a.0 as u32, e, self.p) as u16)
    }

    // ---- F_q² arithmetic ----

    /// Assembles `re + im·x` from residues.
    pub fn ext(&self, re: u64, im: u64) -> Fq2Elem {
        Fq2Elem { re: self.base(re), im: self.base(im) }
    }

    /// Embeds a base-field element into the extension.
    pub fn lift(&self, a: FqElem) -> Fq2Elem {
        Fq2Elem { re: a, im: FqElem(0) }
    }

    pub fn ext_add(&self, a: Fq2Elem, b: Fq2Elem) -> Fq2Elem {
        Fq2Elem { re: self.base_add(a.re, b.re), im: self.base_add(a.im, b.im) }
    }

    pub fn ext_sub(&self, a: Fq2Elem, b: Fq2Elem) -> Fq2Elem {
        Fq2Elem { re: self.base_sub(a.re, b.re), im: self.base_sub(a.im, b.im) }
    }

    pub fn ext_neg(&self, a: Fq2Elem) -> Fq2Elem {
        Fq2Elem { re: self.base_neg(a.re), im: self.base_neg(a.im) }
    }

    /// `(a + bx)(c + dx) = (ac − bd) + (ad + bc)x`, using `x² = −1`.
    pub fn ext_mul(&self, a: Fq2Elem, b: Fq2Elem) -> Fq2Elem {
        let p = self.p;
        let (ar, ai) = (a.re.0 as u32, a.im.0 as u32);
        let (br, bi) = (b.re.0 as u32, b.im.0 as u32);
        let re = (ar * br % p + p - ai * bi % p) % p;
        let im = (ar * bi + ai * br) % p;
        Fq2Elem { re: FqElem(re as u16), im: FqElem(im as u16) }
    }

    /// `(a + bx)⁻¹ = (a − bx)/(a² + b²)`.
    pub fn ext_inv(&self, a: Fq2Elem) -> Result<Fq2Elem, FieldError> {
        let norm = self.base_add(self.base_mul(a.re, a.re), self.base_mul(a.im, a.im));
        let ninv = self.base_inv(norm)?;
        Ok(Fq2Elem { re: self.base_mul(a.re, ninv), im: self.base_mul(self.base_neg(a.im), ninv) })
    }

    pub fn ext_pow(&self, a: Fq2Elem, mut e: u64) -> Fq2Elem {
        let mut base = a;
        let mut acc = Fq2Elem::one_value();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.ext_mul(acc, base);
            }
            base = self.ext_mul(base, base);
            e >>= 1;
        }
        acc
    }

    // ---- Galois structure ----

    /// Frobenius `z ↦ z^q`, i.e. negation of the `x`-part.
    pub fn frobenius(&self, a: Fq2Elem) -> Fq2Elem {
        Fq2Elem { re: a.re, im: self.base_neg(a.im) }
    }

    /// Absolute trace `Tr_{F_q²/F_p}(z) = z + z^q = 2·re(z)` (here `q = p`).
    pub fn trace_to_prime(&self, a: Fq2Elem) -> FqElem {
        self.base_add(a.re, a.re)
    }

    /// Inverts the Ω identification: returns `k ∈ {0,1,2,3}` with
    /// `z = Ω(i)^k`, or [`FieldError::NotQuarticRoot`] if `z` is not a
    /// fourth root of unity.
    pub fn omega_inverse(&self, z: Fq2Elem) -> Result<u8, FieldError> {
        for k in 0..4u8 {
            if self.omega_powers[k as usize] == z {
                return Ok(k);
            }
        }
        Err(FieldError::NotQuarticRoot)
    }
}

impl Fq2Elem {
    fn one_value() -> Fq2Elem {
        Fq2Elem { re: FqElem(1), im: FqElem(0) }
    }
}

/// Field-element interface shared by `F_q` and `F_q²`, letting polynomial
/// algorithms be written once for both coefficient rings.
///
/// `to_index`/`from_index` fix a canonical enumeration of the field
/// (`0..order`); code that iterates residues or coefficient vectors relies on
/// this order being stable.
pub trait FieldElem: Copy + Eq + Hash + Ord + fmt::Debug + Send + Sync {
    /// Number of elements of the field (`q` or `q²`).
    fn order(ctx: &FieldCtx) -> u64;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(self) -> bool;

    fn add(ctx: &FieldCtx, a: Self, b: Self) -> Self;
    fn sub(ctx: &FieldCtx, a: Self, b: Self) -> Self;
    fn neg(ctx: &FieldCtx, a: Self) -> Self;
    fn mul(ctx: &FieldCtx, a: Self, b: Self) -> Self;
    fn inv(ctx: &FieldCtx, a: Self) -> Result<Self, FieldError>;

    /// Canonical index in `0..order`.
    fn to_index(ctx: &FieldCtx, a: Self) -> u32;
    /// Element with the given canonical index.
    fn from_index(ctx: &FieldCtx, idx: u32) -> Self;

    /// Trace down to the prime field `F_p`, as a residue `0 ≤ t < p`.
    /// For the base field (which has prime order here) this is the identity.
    fn trace_to_prime(ctx: &FieldCtx, a: Self) -> u16;

    /// The unique `p`-th root: the inverse of the absolute Frobenius
    /// `a ↦ a^p`. Identity on the prime field; on `F_q²` (where `p = q`)
    /// it is the conjugation `a ↦ a^q`, since applying Frobenius twice is
    /// the identity.
    fn pth_root(ctx: &FieldCtx, a: Self) -> Self;

    /// Square-and-multiply exponentiation.
    fn pow(ctx: &FieldCtx, a: Self, mut e: u64) -> Self {
        let mut base = a;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mul(ctx, acc, base);
            }
            base = Self::mul(ctx, base, base);
            e >>= 1;
        }
        acc
    }
}

impl FieldElem for FqElem {
    fn order(ctx: &FieldCtx) -> u64 {
        ctx.p as u64
    }

    fn zero() -> Self {
        FqElem(0)
    }

    fn one() -> Self {
        FqElem(1)
    }

    fn is_zero(self) -> bool {
        self.0 == 0
    }

    fn add(ctx: &FieldCtx, a: Self, b: Self) -> Self {
        ctx.base_add(a, b)
    }

    fn sub(ctx: &FieldCtx, a: Self, b: Self) -> Self {
        ctx.base_sub(a, b)
    }

    fn neg(ctx: &FieldCtx, a: Self) -> Self {
        ctx.base_neg(a)
    }

    fn mul(ctx: &FieldCtx, a: Self, b: Self) -> Self {
        ctx.base_mul(a, b)
    }

    fn inv(ctx: &FieldCtx, a: Self) -> Result<Self, FieldError> {
        ctx.base_inv(a)
    }

    fn to_index(_ctx: &FieldCtx, a: Self) -> u32 {
        a.0 as u32
    }

    fn from_index(_ctx: &FieldCtx, idx: u32) -> Self {
        FqElem(idx as u16)
    }

    fn trace_to_prime(_ctx: &FieldCtx, a: Self) -> u16 {
        a.0
    }

    fn pth_root(_ctx: &FieldCtx, a: Self) -> Self {
        a
    }
}

impl FieldElem for Fq2Elem {
    fn order(ctx: &FieldCtx) -> u64 {
        ctx.ext_order()
    }

    fn zero() -> Self {
        Fq2Elem { re: FqElem(0), im: FqElem(0) }
    }

    fn one() -> Self {
        Fq2Elem::one_value()
    }

    fn is_zero(self) -> bool {
        self.re.0 == 0 && self.im.0 == 0
    }

    fn add(ctx: &FieldCtx, a: Self, b: Self) -> Self {
        ctx.ext_add(a, b)
    }

    fn sub(ctx: &FieldCtx, a: Self, b: Self) -> Self {
        ctx.ext_sub(a, b)
    }

    fn neg(ctx: &FieldCtx, a: Self) -> Self {
        ctx.ext_neg(a)
    }

    fn mul(ctx: &FieldCtx, a: Self, b: Self) -> Self {
        ctx.ext_mul(a, b)
    }

    fn inv(ctx: &FieldCtx, a: Self) -> Result<Self, FieldError> {
        ctx.ext_inv(a)
    }

    /// Index `re + p·im`, so the base field occupies the first `p` indices.
    fn to_index(ctx: &FieldCtx, a: Self) -> u32 {
        a.re.0 as u32 + ctx.p * a.im.0 as u32
    }

    fn from_index(ctx: &FieldCtx, idx: u32) -> Self {
        Fq2Elem { re: FqElem((idx % ctx.p) as u16), im: FqElem((idx / ctx.p) as u16) }
    }

    fn trace_to_prime(ctx: &FieldCtx, a: Self) -> u16 {
        ctx.trace_to_prime(a).0
    }

    fn pth_root(ctx: &FieldCtx, a: Self) -> Self {
        ctx.frobenius(a)
    }
}

// ---- Integer helpers ----

fn pow_mod(a: u32, mut e: u64, m: u32) -> u32 {
    let mut base = a as u64 % m as u64;
    let mut acc = 1u64;
    let m = m as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u32
}

/// Deterministic trial-division primality check (fine at desk scale).
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
