//! Truncated power-series arithmetic over both scalar backends.
//!
//! A [`TruncatedSeries`] stores Taylor coefficients `c_0 … c_N` (degree bound
//! `N`). Products, powers, and polynomial composition are computed modulo
//! `z^{N+1}`; because low-degree coefficients of a product depend only on
//! low-degree coefficients of the factors, results agree with the true
//! coefficients through degree `N` whenever the inputs do.
//!
//! Closed-form constructors cover the disk automorphism
//! `φ(z) = e^{iθ}(z₀ − z)/(1 − z̄₀ z)` and finite Blaschke products, in both
//! double precision and exact Gaussian-rational arithmetic.


use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::exact::abs_sq;
use crate::{C64, CRat, Rat};

/// Grid size for boundary sampling checks.
pub const BOUNDARY_GRID: usize = 512;

/// Tolerance for "maps the disk into the closed disk" boundary checks;
/// truncated inner functions overshoot 1 by at most their coefficient tail.
pub const SUP_CHECK_TOL: f64 = 1e-6;

/// Taylor coefficients `c_0 … c_N` of an analytic function, with optional
/// radius/sup hints used by boundary checks and tail bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C = C64> {
    coeffs: Vec<C>,
    /// Radius `r ≤ 1` on which `sup_hint` bounds `|f|`, when known.
    pub radius_hint: Option<f64>,
    /// Bound for `|f|` on `|z| = radius_hint`, when known.
    pub sup_hint: Option<f64>,
}

impl<C: Coeff> TruncatedSeries<C> {
    /// Series with the given coefficients (degree bound `len − 1`).
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least the constant term");
        TruncatedSeries { coeffs, radius_hint: None, sup_hint: None }
    }

    /// The zero series with degree bound `n`.
    pub fn zero(n: usize) -> Self {
        TruncatedSeries::from_coeffs(vec![C::zero(); n + 1])
    }

    /// The constant series `1` with degree bound `n`.
    pub fn one(n: usize) -> Self {
        let mut coeffs = vec![C::zero(); n + 1];
        coeffs[0] = C::one();
        TruncatedSeries::from_coeffs(coeffs)
    }

    /// The monomial `z^k` with degree bound `n ≥ k`.
    pub fn monomial(k: usize, n: usize) -> Self {
        assert!(k <= n);
        let mut coeffs = vec![C::zero(); n + 1];
        coeffs[k] = C::one();
        TruncatedSeries::from_coeffs(coeffs)
    }

    /// Attach radius/sup hints (builder style).
    pub fn with_hints(mut self, radius: f64, sup: f64) -> Self {
        self.radius_hint = Some(radius);
        self.sup_hint = Some(sup);
        self
    }

    /// Degree bound `N`.
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k` (zero beyond the stored degree bound).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    /// All stored coefficients, index = degree.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Same series re-truncated (or zero-padded) to degree bound `n`.
    pub fn resized(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n + 1, C::zero());
        TruncatedSeries { coeffs, radius_hint: self.radius_hint, sup_hint: self.sup_hint }
    }

    /// Product truncated at degree `n`.
    pub fn mul_mod(&self, other: &Self, n: usize) -> Self {
        TruncatedSeries::from_coeffs(C::mul_mod_slices(&self.coeffs, &other.coeffs, n))
    }

    /// Power `self^j` modulo `z^{n+1}` by binary exponentiation; `j = 0`
    /// yields the constant `1`.
    pub fn power_mod(&self, j: usize, n: usize) -> Self {
        let mut result = Self::one(n);
        let mut base = self.resized(n);
        let mut exp = j;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul_mod(&base, n);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_mod(&base, n);
            }
        }
        result
    }

    /// Coefficientwise sum (lengths aligned to the longer operand).
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        TruncatedSeries::from_coeffs(coeffs)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &C) -> Self {
        TruncatedSeries::from_coeffs(
            self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        )
    }

    /// Horner evaluation of `self` (as a polynomial) at the series `g`,
    /// truncated at degree `n`, without domain checks. Use
    /// [`TruncatedSeries::compose_poly`] for the checked floating-point form.
    pub fn compose_unchecked(&self, g: &Self, n: usize) -> Self {
        let mut acc = Self::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_mod(g, n);
            acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
        }
        acc
    }
}

impl TruncatedSeries<C64> {
    /// Horner evaluation at a point.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Values on the uniform boundary grid `e^{2πij/m}`, `j = 0 … m−1`.
    pub fn boundary_values(&self, m: usize) -> Vec<C64> {
        (0..m)
            .map(|j| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                self.eval(C64::new(theta.cos(), theta.sin()))
            })
            .collect()
    }

    /// Max modulus over the uniform boundary grid.
    pub fn boundary_sup(&self, m: usize) -> f64 {
        self.boundary_values(m).into_iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Termwise derivative (degree bound drops by one).
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        TruncatedSeries::from_coeffs(coeffs)
    }

    /// Composition `self ∘ g` (Horner), after checking that `g` maps the disk
    /// into the closed disk: `sup_hint` if present, otherwise a boundary
    /// sample, must not exceed `1 + SUP_CHECK_TOL`.
    pub fn compose_poly(&self, g: &Self, n: usize) -> Result<Self> {
        let sup = g.sup_hint.unwrap_or_else(|| g.boundary_sup(BOUNDARY_GRID));
        if !(sup <= 1.0 + SUP_CHECK_TOL) {
            return Err(Error::SymbolCheck(format!(
                "inner function must map the disk into the closed disk \
                 (boundary sup {sup:.6} > 1 + {SUP_CHECK_TOL})"
            )));
        }
        Ok(self.compose_unchecked(g, n))
    }

    /// Estimated radius of convergence from the decay of the stored tail:
    /// `1/r` where `r` is the largest ratio `|c_{k+1}|/|c_k|` over the last
    /// quarter of the coefficients. Trailing-zero tails (polynomials) give
    /// `+∞`. Conservative: overestimating the ratio underestimates the radius.
    pub fn decay_radius(&self) -> f64 {
        let n = self.coeffs.len();
        let last_nonzero = match self.coeffs.iter().rposition(|c| c.norm() > 1e-300) {
            Some(k) => k,
            None => return f64::INFINITY,
        };
        if last_nonzero + 1 < n {
            // The stored tail is identically zero: polynomial.
            return f64::INFINITY;
        }
        let start = (3 * n) / 4;
        let mut ratio: f64 = 0.0;
        for k in start.max(1)..n - 1 {
            let a = self.coeffs[k].norm();
            let b = self.coeffs[k + 1].norm();
            if a > 1e-300 && b > 1e-300 {
                ratio = ratio.max(b / a);
            }
        }
        if ratio == 0.0 { f64::INFINITY } else { 1.0 / ratio }
    }

    /// Estimate of the absolute coefficient tail `Σ_{k>N} |c_k|` as the
    /// geometric continuation of the last stored coefficient.
    pub fn tail_estimate(&self) -> f64 {
        let radius = self.decay_radius();
        if !radius.is_finite() {
            return 0.0;
        }
        let r = 1.0 / radius;
        let last = self.coeffs.last().map(|c| c.norm()).unwrap_or(0.0);
        if r >= 1.0 { f64::INFINITY } else { last * r / (1.0 - r) }
    }
}

/// Cauchy coefficient bound `sup / Rⁿ` for a function analytic on `B(0, R)`,
/// `R > 1`, bounded by `sup` there.
pub fn cauchy_tail_bound(sup: f64, r: f64, n: usize) -> Result<f64> {
    if sup < 0.0 {
        return Err(Error::InvalidParameter(format!("sup must be nonnegative, got {sup}")));
    }
    if !(r > 1.0) {
        return Err(Error::InvalidParameter(format!("radius must exceed 1, got {r}")));
    }
    Ok(sup / r.powi(n as i32))
}

/// Taylor coefficients of the disk automorphism
/// `φ(z) = e^{iθ}(z₀ − z)/(1 − z̄₀ z)`:
/// `c_0 = e^{iθ} z₀`, `c_k = −e^{iθ}(1 − |z₀|²) z̄₀^{k−1}` for `k ≥ 1`.
pub fn mobius_taylor(z0: C64, theta: f64, n: usize) -> Result<TruncatedSeries<C64>> {
    if !(z0.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("|z0| must be < 1, got {}", z0.norm())));
    }
    let e = C64::from_polar(1.0, theta);
    let zbar = z0.conj();
    let head = -e * (1.0 - z0.norm_sqr());
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(e * z0);
    let mut pow = C64::one();
    for _ in 1..=n {
        coeffs.push(head * pow);
        pow *= zbar;
    }
    Ok(TruncatedSeries::from_coeffs(coeffs).with_hints(1.0, 1.0))
}

/// Exact Gaussian-rational Taylor coefficients of `φ_{z₀}(z) = (z₀ − z)/(1 − z̄₀ z)`.
pub fn mobius_taylor_exact(z0: &CRat, n: usize) -> Result<TruncatedSeries<CRat>> {
    if abs_sq(z0) >= Rat::one() {
        return Err(Error::InvalidParameter("|z0| must be < 1".into()));
    }
    let zbar = z0.conj_c();
    let head = -(CRat::one() - CRat::new(abs_sq(z0), Rat::zero()));
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(z0.clone());
    let mut pow = CRat::one();
    for _ in 1..=n {
        coeffs.push(head.clone() * pow.clone());
        pow = pow * zbar.clone();
    }
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

/// Taylor coefficients of the finite Blaschke product
/// `B(z) = e^{iθ} ∏ᵢ bᵢ(z)` truncated at degree `n`, where `bᵢ = (aᵢ − z)/(1 − āᵢ z)`
/// for a nonzero zero `aᵢ` and `bᵢ = z` for a zero at the origin.
pub fn blaschke_taylor(zeros: &[C64], theta: f64, n: usize) -> Result<TruncatedSeries<C64>> {
    let mut acc = TruncatedSeries::<C64>::one(n);
    for a in zeros {
        if !(a.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Blaschke zeros must lie inside the disk, got |a| = {}",
                a.norm()
            )));
        }
        let factor = if a.is_zero() {
            TruncatedSeries::monomial(1, 1)
        } else {
            mobius_taylor(*a, 0.0, n)?
        };
        acc = acc.mul_mod(&factor, n);
    }
    let e = C64::from_polar(1.0, theta);
    Ok(acc.scale(&e).with_hints(1.0, 1.0))
}

/// Exact Gaussian-rational Blaschke coefficients (rotation factor omitted).
pub fn blaschke_taylor_exact(zeros: &[CRat], n: usize) -> Result<TruncatedSeries<CRat>> {
    let mut acc = TruncatedSeries::<CRat>::one(n);
    for a in zeros {
        if abs_sq(a) >= Rat::one() {
            return Err(Error::InvalidParameter("Blaschke zeros must lie inside the disk".into()));
        }
        let factor = if a.is_zero() {
            TruncatedSeries::monomial(1, 1)
        } else {
            mobius_taylor_exact(a, n)?
        };
        acc = acc.mul_mod(&factor, n);
    }
    Ok(acc)
}
