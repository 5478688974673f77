//! Finite-section numerics for composition operators on weighted Hardy spaces.
//!
//! A weighted Hardy space `H²_β` consists of analytic functions
//! `f(z) = Σ f̂(k) zᵏ` on the unit disk with `Σ |f̂(k)|² β_k² < ∞`, where the
//! weight sequence satisfies `β_0 = 1`, `β_k = β_{k−1} w_k`. This crate builds
//! finite matrix sections of composition, multiplication, and transformation
//! operators in the orthonormal basis `{zⁿ/β_n}`, and provides:
//!
//! - weight presets (classical Hardy, weighted Dirichlet, binomial and power
//!   weights) with growth classification ([`weights`]),
//! - truncated power-series arithmetic in both double precision and exact
//!   Gaussian-rational form ([`series`]),
//! - Möbius transformations with classification into elliptic / parabolic /
//!   hyperbolic disk automorphisms and canonical conjugators ([`moebius`]),
//! - operator sections, norms, block-diagonal transfer matrices, and a suite
//!   of norm-inequality checks ([`operators`]),
//! - spectral models, exact rational witness computations, Fredholm and
//!   closed-range verdicts, and norm-growth exponent fits ([`analysis`]).

pub mod analysis;
pub mod coeff;
pub mod error;
pub mod exact;
pub mod moebius;
pub mod operators;
pub mod series;
pub mod weights;

pub use error::{Error, Result};

/// Double-precision complex scalar used by the floating-point backend.
pub type C64 = num_complex::Complex64;
/// Arbitrary-precision rational scalar.
pub type Rat = num_rational::BigRational;
/// Gaussian rational (exact complex) scalar used by the exact backend.
pub type CRat = num_complex::Complex<num_rational::BigRational>;
