//! Coefficient abstraction shared by the double-precision and exact backends.
//!
//! Series and Möbius kernels are generic over a complex-like coefficient ring.
//! Two rings are supported: `Complex64` (fast, default) and
//! `Complex<BigRational>` (exact Gaussian rationals, used where identities
//! must hold with zero tolerance). The trait also owns the truncated-product
//! kernel so the floating backend can switch to FFT convolution on large
//! truncation orders while the exact backend always uses schoolbook
//! convolution.

use std::cell::RefCell;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rustfft::FftPlanner;

use crate::CRat;

/// Truncation order above which the floating backend multiplies via FFT.
/// At or below this order both backends use schoolbook convolution, so small
/// products are bit-identical across call sites; the backend choice depends
/// only on the truncation order, keeping every call site deterministic.
pub const FFT_THRESHOLD: usize = 512;

/// Complex-like coefficient ring for truncated series and Möbius matrices.
pub trait Coeff:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Complex conjugate.
    fn conj_c(&self) -> Self;

    /// Coefficients of `a·b` truncated at degree `n` (result length `n + 1`).
    ///
    /// Lower-degree coefficients of a product depend only on lower-degree
    /// coefficients of the factors, so the result agrees with the true
    /// product through degree `n` whenever the inputs do.
    fn mul_mod_slices(a: &[Self], b: &[Self], n: usize) -> Vec<Self> {
        schoolbook_mul(a, b, n)
    }
}

/// Schoolbook truncated convolution, exact in exact arithmetic.
fn schoolbook_mul<C: Coeff>(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let mut out = vec![C::zero(); n + 1];
    let la = a.len().min(n + 1);
    for (i, ai) in a.iter().take(la).enumerate() {
        if ai.is_zero() {
            continue;
        }
        let lb = b.len().min(n + 1 - i);
        for (j, bj) in b.iter().take(lb).enumerate() {
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// FFT-based truncated convolution for the floating backend.
fn fft_mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let la = a.len().min(n + 1);
    let lb = b.len().min(n + 1);
    let size = (la + lb - 1).next_power_of_two();
    let mut fa = vec![Complex64::zero(); size];
    let mut fb = vec![Complex64::zero(); size];
    fa[..la].copy_from_slice(&a[..la]);
    fb[..lb].copy_from_slice(&b[..lb]);
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        let fwd = p.plan_fft_forward(size);
        let inv = p.plan_fft_inverse(size);
        fwd.process(&mut fa);
        fwd.process(&mut fb);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x *= y;
        }
        inv.process(&mut fa);
    });
    let scale = 1.0 / size as f64;
    let mut out = vec![Complex64::zero(); n + 1];
    for (k, slot) in out.iter_mut().enumerate().take((la + lb - 1).min(n + 1)) {
        *slot = fa[k] * scale;
    }
    out
}

impl Coeff for Complex64 {
    fn conj_c(&self) -> Self {
        self.conj()
    }

    fn mul_mod_slices(a: &[Self], b: &[Self], n: usize) -> Vec<Self> {
        // Short factors (scalings, shifts, linear numerators) stay schoolbook
        // even at large truncation orders: it is faster there and keeps those
        // products exact. The choice depends only on operand shapes.
        if n > FFT_THRESHOLD && a.len().min(b.len()) > 32 {
            fft_mul(a, b, n)
        } else {
            schoolbook_mul(a, b, n)
        }
    }
}

impl Coeff for CRat {
    fn conj_c(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
}
