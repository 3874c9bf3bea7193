//! Dense truncated bivariate series over Gaussian rationals.
//!
//! A [`BiSeries`] holds the coefficients of `Σ c[a][b]·u^a·v^b` for
//! `a ≤ umax`, `b ≤ vmax`. All operations (sum, product, reciprocal of a
//! series with invertible constant term) are exact on that grid: truncation
//! is the only thing that distinguishes them from the full formal-series
//! operations, and products never let dropped orders contaminate retained
//! ones. A grid with `vmax = 0` doubles as a univariate `u`-series, which is
//! how the per-term factors of the double-series rewrites are assembled.

use super::rat::GaussRat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    umax: usize,
    vmax: usize,
    /// Row-major: `coeffs[a·(vmax+1) + b]` is the coefficient of `u^a v^b`.
    coeffs: Vec<GaussRat>,
}

impl BiSeries {
    pub fn zeros(umax: usize, vmax: usize) -> Self {
        BiSeries { umax, vmax, coeffs: vec![GaussRat::zero(); (umax + 1) * (vmax + 1)] }
    }

    pub fn one(umax: usize, vmax: usize) -> Self {
        let mut s = Self::zeros(umax, vmax);
        s.set(0, 0, GaussRat::one());
        s
    }

    /// `1 + c·u^d`, the ubiquitous Euler-factor building block; collapses to
    /// `1` when `d` exceeds the grid (exact truncation).
    pub fn one_plus_u(umax: usize, vmax: usize, d: usize, c: GaussRat) -> Self {
        let mut s = Self::one(umax, vmax);
        if d >= 1 && d <= umax {
            s.set(d, 0, c);
        }
        s
    }

    pub fn umax(&self) -> usize {
        self.umax
    }

    pub fn vmax(&self) -> usize {
        self.vmax
    }

    fn idx(&self, a: usize, b: usize) -> usize {
        debug_assert!(a <= self.umax && b <= self.vmax);
        a * (self.vmax + 1) + b
    }

    pub fn get(&self, a: usize, b: usize) -> &GaussRat {
        &self.coeffs[self.idx(a, b)]
    }

    pub fn set(&mut self, a: usize, b: usize, val: GaussRat) {
        let i = self.idx(a, b);
        self.coeffs[i] = val;
    }

    pub fn add_at(&mut self, a: usize, b: usize, val: &GaussRat) {
        let i = self.idx(a, b);
        self.coeffs[i] = self.coeffs[i].add(val);
    }

    fn same_grid(&self, other: &Self) {
        assert_eq!(
            (self.umax, self.vmax),
            (other.umax, other.vmax),
            "series live on the same truncation grid"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_grid(other);
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x.add(y)).collect();
        BiSeries { umax: self.umax, vmax: self.vmax, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_grid(other);
        let coeffs =
            self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x.sub(y)).collect();
        BiSeries { umax: self.umax, vmax: self.vmax, coeffs }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.mul(c)).collect();
        BiSeries { umax: self.umax, vmax: self.vmax, coeffs }
    }

    /// Truncated product: exact on the grid.
    pub fn mul(&self, other: &Self) -> Self {
        self.same_grid(other);
        let mut out = Self::zeros(self.umax, self.vmax);
        for a in 0..=self.umax {
            for b in 0..=self.vmax {
                let x = self.get(a, b);
                if x.is_zero() {
                    continue;
                }
                for c in 0..=(self.umax - a) {
                    for d in 0..=(self.vmax - b) {
                        let y = other.get(c, d);
                        if y.is_zero() {
                            continue;
                        }
                        out.add_at(a + c, b + d, &x.mul(y));
                    }
                }
            }
        }
        out
    }

    /// Multiplication by the monomial `u^k`, truncating shifted-out orders.
    pub fn shift_u(&self, k: usize) -> Self {
        let mut out = Self::zeros(self.umax, self.vmax);
        if k > self.umax {
            return out;
        }
        for a in 0..=(self.umax - k) {
            for b in 0..=self.vmax {
                out.set(a + k, b, self.get(a, b).clone());
            }
        }
        out
    }

    /// Exact reciprocal of a series with invertible constant term, solved
    /// coefficient-by-coefficient in graded order.
    pub fn reciprocal(&self) -> Self {
        let c00 = self.get(0, 0);
        let inv00 = c00.inv().expect("reciprocal requires an invertible constant term");
        let mut out = Self::zeros(self.umax, self.vmax);
        out.set(0, 0, inv00.clone());
        for a in 0..=self.umax {
            for b in 0..=self.vmax {
                if a == 0 && b == 0 {
                    continue;
                }
                let mut acc = GaussRat::zero();
                for c in 0..=a {
                    for d in 0..=b {
                        if c == a && d == b {
                            continue;
                        }
                        let s = self.get(a - c, b - d);
                        if s.is_zero() {
                            continue;
                        }
                        let r = out.get(c, d);
                        if r.is_zero() {
                            continue;
                        }
                        acc = acc.add(&s.mul(r));
                    }
                }
                out.set(a, b, acc.neg().mul(&inv00));
            }
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| if i == 0 { c.is_one() } else { c.is_zero() })
    }
}
