//! Exact truncated series algebra and the double-series layer built on it.
//!
//! [`rat`] supplies the scalar (exact Gaussian rationals), [`bi`] the dense
//! truncated bivariate series with exact product and reciprocal, [`a4`] the
//! family double series computed from its definition and from the
//! swapped-order rewrite, and [`euler`] the numeric residue constants with
//! their exact direct-sum cross-checks and the composed main term.

pub mod a4;
pub mod bi;
pub mod euler;
pub mod rat;

pub use a4::{a4_direct, a4_nsum, a4_nsum_with_prime_cutoff, family_count_series};
pub use bi::BiSeries;
pub use euler::{
    euler_p, euler_p_explicit, euler_z, main_term, radical_profiles, z_direct, z_series_coeffs,
    z_series_value, z_weight_sums, EulerEval, MainTerm, RadicalProfile, SeriesError,
};
pub use rat::{rat_f64, rat_string, GaussRat};
