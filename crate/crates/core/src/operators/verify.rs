//! Residual verification of the paired-family transfer identity.
//!
//! The family interleaves powers of the degree-two inner function
//! `B(z) = z·(z0 − z)/(1 − conj(z0)·z)` with their products by the degree-one
//! factor: columns `x_{2k} = B^k` and `x_{2k+1} = φ·B^k` where
//! `φ = (z0 − z)/(1 − conj(z0)·z)`. Writing the columns in the orthonormal
//! basis and forming the conjugated product `D_β·XᴴX·D_β⁻¹` must reproduce the
//! paired-diagonal transfer section of [`super::dtm_section`]: ones on the
//! diagonal, `z0/w_{2k+1}` and `w_{2k+1}·conj(z0)` on each index pair, zero
//! elsewhere. The residual is a pure truncation tail, so it decays
//! geometrically in the truncation size.
//!
//! Two paths are provided: a floating-point one ([`verify_f2`]), whose
//! residual bottoms out at rounding level once the tail drops below machine
//! precision, and an exact one ([`verify_f2_exact`]) over Gaussian-rational
//! data, which sees the true tail at any size and makes decay comparisons
//! between truncations meaningful.

use ndarray::Array2;
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::abs_sq;
use crate::weights::WeightSequence;
use crate::{C64, CRat, Rat};

/// Measurement record of one floating-point residual run.
#[derive(Clone, Debug, serde::Serialize)]
pub struct F2Report {
    pub weight: String,
    pub z0: [f64; 2],
    pub n: usize,
    pub block: usize,
    /// Largest entry modulus of `D_β·XᴴX·D_β⁻¹ − (pair transfer section)`
    /// over the leading `2·block × 2·block` corner.
    pub max_residual: f64,
}

fn check_block(n: usize, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("block count must be positive".into()));
    }
    if 2 * m > n / 4 {
        return Err(Error::InvalidParameter(format!(
            "block too large relative to the truncation: need 2·block ≤ n/4, got 2·{m} > {n}/4"
        )));
    }
    Ok(())
}

/// Unscaled target for entry `(i, j)`: the exact value of the coefficient
/// inner product `Σ_k conj(x̂_i(k))·x̂_j(k)` before any basis scaling.
fn unscaled_target(z0: C64, i: usize, j: usize) -> C64 {
    if i == j {
        C64::new(1.0, 0.0)
    } else if j == i + 1 && i % 2 == 0 {
        z0
    } else if i == j + 1 && j % 2 == 0 {
        z0.conj()
    } else {
        C64::new(0.0, 0.0)
    }
}

/// Interleaved family columns in the monomial basis, floating point:
/// `x_{2k} = B^k`, `x_{2k+1} = φ·B^k`, each truncated to `n` coefficients.
fn family_columns_f64(z0: C64, n: usize, count: usize) -> Vec<Vec<C64>> {
    let zc = z0.conj();
    let mut cols = Vec::with_capacity(count);
    let mut cur = vec![C64::new(0.0, 0.0); n];
    cur[0] = C64::new(1.0, 0.0);
    for j in 0..count {
        cols.push(cur.clone());
        if j + 1 == count {
            break;
        }
        if j % 2 == 0 {
            // Multiply by φ: numerator (z0 − z), then divide by (1 − conj(z0)·z).
            let mut t = vec![C64::new(0.0, 0.0); n];
            for k in 0..n {
                t[k] = z0 * cur[k] - if k > 0 { cur[k - 1] } else { C64::new(0.0, 0.0) };
            }
            cur[0] = t[0];
            for k in 1..n {
                cur[k] = t[k] + zc * cur[k - 1];
            }
        } else {
            // Multiply by z: shift.
            for k in (1..n).rev() {
                cur[k] = cur[k - 1];
            }
            cur[0] = C64::new(0.0, 0.0);
        }
    }
    cols
}

/// Floating-point residual of the paired-family transfer identity.
///
/// Builds `2m` family columns truncated to `n` coefficients, forms the
/// conjugated product over the weighted basis of `w`, and reports the largest
/// entry deviation from the paired-diagonal transfer target on the leading
/// `2m × 2m` corner. Requires `|z0| < 1` and `2m ≤ n/4` so the block sits
/// well inside the section.
pub fn verify_f2(w: &WeightSequence, z0: C64, n: usize, m: usize) -> Result<F2Report> {
    if !(z0.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("|z0| must be < 1, got {}", z0.norm())));
    }
    check_block(n, m)?;
    let count = 2 * m;
    let cols = family_columns_f64(z0, n, count);
    let x = Array2::from_shape_fn((n, count), |(k, j)| cols[j][k]);
    let xc = x.mapv(|z| z.conj());
    let g = xc.t().dot(&x);
    let betas = w.betas(count);
    let mut max_residual: f64 = 0.0;
    for i in 0..count {
        for j in 0..count {
            let dev = (betas[i] / betas[j]) * (g[[i, j]] - unscaled_target(z0, i, j));
            max_residual = max_residual.max(dev.norm());
        }
    }
    Ok(F2Report {
        weight: w.label().to_string(),
        z0: [z0.re, z0.im],
        n,
        block: m,
        max_residual,
    })
}

// ---------------------------------------------------------------------------
// Exact path.
//
// With z0 = p/q (p a Gaussian integer, q a positive integer) every family
// coefficient is a Gaussian integer over a power of q: coefficient k of
// column j equals nums[k] / q^(k + e_j) with e_j ∈ {0, 1}. The recurrences
// preserve this shape, so Gram entries reduce to integer Horner sums and no
// rational arithmetic happens in the hot loop.
// ---------------------------------------------------------------------------

type GInt = Complex<BigInt>;

#[derive(Clone)]
struct ExactColumn {
    nums: Vec<GInt>,
    e: u32,
}

fn gmul(a: &GInt, b: &GInt) -> GInt {
    Complex::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
}

/// conj(a)·b without materializing the conjugate.
fn gconj_mul(a: &GInt, b: &GInt) -> GInt {
    Complex::new(&a.re * &b.re + &a.im * &b.im, &a.re * &b.im - &a.im * &b.re)
}

fn gscale(a: &GInt, s: &BigInt) -> GInt {
    Complex::new(&a.re * s, &a.im * s)
}

fn gadd(a: &GInt, b: &GInt) -> GInt {
    Complex::new(&a.re + &b.re, &a.im + &b.im)
}

/// Split a Gaussian rational into a Gaussian-integer numerator over a single
/// positive integer denominator.
fn gaussian_parts(z0: &CRat) -> (GInt, BigInt) {
    let q = z0.re.denom().lcm(z0.im.denom());
    let pre = z0.re.numer() * (&q / z0.re.denom());
    let pim = z0.im.numer() * (&q / z0.im.denom());
    (Complex::new(pre, pim), q)
}

fn family_columns_exact(p: &GInt, q: &BigInt, n: usize, count: usize) -> Vec<ExactColumn> {
    let q2 = q * q;
    let pc = p.conj();
    let zero = GInt::new(BigInt::zero(), BigInt::zero());
    let mut cols = Vec::with_capacity(count);
    let mut cur = ExactColumn { nums: vec![zero.clone(); n], e: 0 };
    cur.nums[0] = GInt::new(BigInt::one(), BigInt::zero());
    for j in 0..count {
        cols.push(cur.clone());
        if j + 1 == count {
            break;
        }
        if j % 2 == 0 {
            // Numerator (z0 − z) = (p − q·z)/q: raises the exponent by one.
            let mut t = vec![zero.clone(); n];
            for k in 0..n {
                let mut v = gmul(p, &cur.nums[k]);
                if k > 0 {
                    let shift = gscale(&cur.nums[k - 1], &q2);
                    v = Complex::new(v.re - shift.re, v.im - shift.im);
                }
                t[k] = v;
            }
            // Denominator (1 − conj(z0)·z) = (q − conj(p)·z)/q: exponent fixed.
            let mut y = vec![zero.clone(); n];
            y[0] = t[0].clone();
            for k in 1..n {
                let carry = gmul(&pc, &y[k - 1]);
                y[k] = gadd(&t[k], &carry);
            }
            cur = ExactColumn { nums: y, e: cur.e + 1 };
        } else {
            let mut y = vec![zero.clone(); n];
            for k in 1..n {
                y[k] = cur.nums[k - 1].clone();
            }
            cur = ExactColumn { nums: y, e: cur.e - 1 };
        }
    }
    cols
}

/// Integer Horner sum: returns `H` with
/// `Σ_k conj(a_k)·b_k / q^(2k+e_a+e_b) = H / q^(2(n−1)+e_a+e_b)`.
fn gram_numerator(a: &ExactColumn, b: &ExactColumn, q2: &BigInt, n: usize) -> GInt {
    let mut h = GInt::new(BigInt::zero(), BigInt::zero());
    for k in 0..n {
        h = gscale(&h, q2);
        let t = gconj_mul(&a.nums[k], &b.nums[k]);
        h = gadd(&h, &t);
    }
    h
}

fn crat_norm_sq(v: &CRat) -> Rat {
    &v.re * &v.re + &v.im * &v.im
}

/// Exact residual of the paired-family transfer identity.
///
/// `z0` must be a Gaussian rational with `|z0| < 1`, and the weight must
/// expose exact squared weights (all named presets do). Returns the largest
/// squared entry residual over the leading `2m × 2m` corner as an exact
/// rational, enabling sound decay comparisons between truncation sizes:
/// `r∞(n)² = max_{i,j} (β_i²/β_j²)·|G_ij − target_ij|²`.
pub fn verify_f2_exact(w: &WeightSequence, z0: &CRat, n: usize, m: usize) -> Result<Rat> {
    if abs_sq(z0) >= Rat::one() {
        return Err(Error::InvalidParameter("|z0| must be < 1".into()));
    }
    check_block(n, m)?;
    let count = 2 * m;
    let beta_sq: Vec<Rat> = (0..count)
        .map(|k| {
            w.beta_sq_exact(k).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "weight '{}' does not expose exact squared weights",
                    w.label()
                ))
            })
        })
        .collect::<Result<_>>()?;
    let (p, q) = gaussian_parts(z0);
    let q2 = &q * &q;
    let cols = family_columns_exact(&p, &q, n, count);
    // The exponent 2(n−1)+e_i+e_j only takes three values; precompute q^E.
    let base = num_traits::pow(q.clone(), 2 * (n - 1));
    let qpow = [base.clone(), &base * &q, &base * &q2];
    let zero = Rat::zero();
    let one = Rat::one();
    let targets = |i: usize, j: usize| -> CRat {
        if i == j {
            CRat::new(one.clone(), zero.clone())
        } else if j == i + 1 && i % 2 == 0 {
            z0.clone()
        } else if i == j + 1 && j % 2 == 0 {
            z0.conj()
        } else {
            CRat::new(zero.clone(), zero.clone())
        }
    };
    let mut max_sq = Rat::zero();
    for i in 0..count {
        for j in i..count {
            let Complex { re: h_re, im: h_im } = gram_numerator(&cols[i], &cols[j], &q2, n);
            let e = (cols[i].e + cols[j].e) as usize;
            let g = CRat::new(Rat::new(h_re, qpow[e].clone()), Rat::new(h_im, qpow[e].clone()));
            let diff = g - targets(i, j);
            let d2 = crat_norm_sq(&diff);
            if d2.is_zero() {
                continue;
            }
            // Entry (i, j) carries β_i²/β_j²; its mirror carries the inverse.
            let r1 = &d2 * &beta_sq[i] / &beta_sq[j];
            if r1 > max_sq {
                max_sq = r1;
            }
            if i != j {
                let r2 = &d2 * &beta_sq[j] / &beta_sq[i];
                if r2 > max_sq {
                    max_sq = r2;
                }
            }
        }
    }
    Ok(max_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{crat, rat};
    use crate::weights::WeightSequence;

    #[test]
    fn residual_vanishes_for_centered_symbol() {
        // z0 = 0: φ = −z, the family is ± monomials, the product is exactly
        // the identity with no rounding at all.
        let r = verify_f2(&WeightSequence::hardy(), C64::new(0.0, 0.0), 64, 2).unwrap();
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn float_residual_is_at_rounding_level_once_tails_vanish() {
        let z0 = C64::new(0.4, 0.0);
        for w in [WeightSequence::hardy(), WeightSequence::dirichlet(1.0).unwrap()] {
            let r = verify_f2(&w, z0, 128, 4).unwrap();
            assert!(r.max_residual < 1e-10, "{}: residual {}", w.label(), r.max_residual);
        }
    }

    #[test]
    fn block_guard_rejects_oversized_blocks() {
        assert!(verify_f2(&WeightSequence::hardy(), C64::new(0.4, 0.0), 64, 16).is_err());
        assert!(verify_f2(&WeightSequence::hardy(), C64::new(0.4, 0.0), 64, 0).is_err());
        assert!(verify_f2(&WeightSequence::hardy(), C64::new(1.0, 0.0), 512, 4).is_err());
    }

    /// Brute-force rational-arithmetic oracle for the exact path, written
    /// directly over Gaussian rationals with no scaled-integer tricks.
    fn brute_max_residual_sq(w: &WeightSequence, z0: &CRat, n: usize, m: usize) -> Rat {
        let count = 2 * m;
        let zero = CRat::new(Rat::zero(), Rat::zero());
        let one = CRat::new(Rat::one(), Rat::zero());
        let mut cols: Vec<Vec<CRat>> = Vec::new();
        let mut cur = vec![zero.clone(); n];
        cur[0] = one.clone();
        for j in 0..count {
            cols.push(cur.clone());
            if j + 1 == count {
                break;
            }
            if j % 2 == 0 {
                let mut t = vec![zero.clone(); n];
                for k in 0..n {
                    let mut v = z0.clone() * cur[k].clone();
                    if k > 0 {
                        v = v - cur[k - 1].clone();
                    }
                    t[k] = v;
                }
                cur[0] = t[0].clone();
                for k in 1..n {
                    cur[k] = t[k].clone() + z0.conj() * cur[k - 1].clone();
                }
            } else {
                for k in (1..n).rev() {
                    cur[k] = cur[k - 1].clone();
                }
                cur[0] = zero.clone();
            }
        }
        let mut max_sq = Rat::zero();
        for i in 0..count {
            for j in 0..count {
                let mut g = zero.clone();
                for k in 0..n {
                    g = g + cols[i][k].conj() * cols[j][k].clone();
                }
                let target = if i == j {
                    one.clone()
                } else if j == i + 1 && i % 2 == 0 {
                    z0.clone()
                } else if i == j + 1 && j % 2 == 0 {
                    z0.conj()
                } else {
                    zero.clone()
                };
                let diff = g - target;
                let d2 = crat_norm_sq(&diff) * w.beta_sq_exact(i).unwrap()
                    / w.beta_sq_exact(j).unwrap();
                if d2 > max_sq {
                    max_sq = d2;
                }
            }
        }
        max_sq
    }

    #[test]
    fn exact_path_matches_rational_brute_force() {
        let z0 = crat(1, 4, 2, 4); // (1 + 2i)/4
        for w in [WeightSequence::hardy(), WeightSequence::dirichlet(1.0).unwrap()] {
            let fast = verify_f2_exact(&w, &z0, 24, 2).unwrap();
            let brute = brute_max_residual_sq(&w, &z0, 24, 2);
            assert_eq!(fast, brute, "{}", w.label());
            assert!(fast > Rat::zero());
        }
    }

    #[test]
    fn exact_residual_decays_when_truncation_doubles() {
        let z0 = crat(2, 5, 0, 1);
        let w = WeightSequence::hardy();
        let r48 = verify_f2_exact(&w, &z0, 48, 2).unwrap();
        let r96 = verify_f2_exact(&w, &z0, 96, 2).unwrap();
        assert!(r96 > Rat::zero());
        // Squared max residual drops by far more than the factor 4 that a
        // halving of the residual itself would need.
        assert!(rat(4, 1) * &r96 <= r48, "r48 = {r48}, r96 = {r96}");
    }
}
