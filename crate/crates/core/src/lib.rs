//! Exact-arithmetic laboratory for a family of quartic Dirichlet characters
//! over rational function fields with base size `q ≡ 3 (mod 4)`.
//!
//! The layers, bottom to top: [`field`] (the prime field and its quadratic
//! extension), [`poly`] (polynomial rings, factoring, prime enumeration),
//! [`chars`] (quartic residue symbols, the character family, memoized symbol
//! tables), [`gauss`] (cyclotomic-integer Gauss sums, exact, with a factored
//! evaluator cross-checked against brute force), [`generating`] (Gauss-sum
//! generating series and their rationality recurrences), [`series`] (exact
//! truncated series algebra, the family double series two ways, numeric
//! Euler constants and the main term), and [`lfunc`] (L-polynomials, central
//! values, functional-equation checks, moments and non-vanishing counts).
//!
//! Everything upstream of final reports is exact: cyclotomic integers,
//! Gaussian rationals, and rational series coefficients. Floating point
//! appears only in emitted summaries and convergence diagnostics.

pub mod chars;
pub mod config;
pub mod field;
pub mod gauss;
pub mod generating;
pub mod lfunc;
pub mod poly;
pub mod series;
