//! Möbius transformations as projective 2×2 matrices.
//!
//! A matrix `[[a, b], [c, d]]` with `ad − bc ≠ 0` acts as
//! `z ↦ (az + b)/(cz + d)`; composition is matrix multiplication and
//! iteration is a matrix power, so group identities hold exactly in the
//! Gaussian-rational backend. Disk automorphisms are classified as elliptic,
//! parabolic, or hyperbolic by fixed-point location, and each class gets an
//! explicit conjugator to its canonical form: `z ↦ λz`, one of the two
//! boundary translations `ψ₁/ψ₂`, or `z ↦ (z + r)/(1 + rz)`.

use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::exact::{crat_i, crat_int};
use crate::series::TruncatedSeries;
use crate::{C64, CRat};

/// Default tolerance on `||ξ| − 1|` for fixed-point location tests.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Residual bound for conjugator verification (projective distance).
pub const CONJUGATOR_TOL: f64 = 1e-9;

/// A Möbius transformation `z ↦ (az + b)/(cz + d)`, stored projectively.
#[derive(Clone, Debug, PartialEq)]
pub struct Moebius<C = C64> {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

/// A fixed point of a Möbius transformation on the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FixedPoint {
    Finite(C64),
    Infinity,
}

impl serde::Serialize for FixedPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FixedPoint::Finite(z) => [z.re, z.im].serialize(s),
            FixedPoint::Infinity => "infinity".serialize(s),
        }
    }
}

/// Conjugacy class of a disk automorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum MapKind {
    Identity,
    /// One fixed point inside the disk, one outside.
    Elliptic,
    /// A double fixed point on the unit circle.
    Parabolic,
    /// Two distinct fixed points on the unit circle.
    Hyperbolic,
}

/// Classification record for a disk automorphism.
#[derive(Clone, Debug, serde::Serialize)]
pub struct AutoClass {
    pub kind: MapKind,
    /// Fixed points with multiplicity (a parabolic point appears twice);
    /// empty for the identity.
    pub fixed_points: Vec<FixedPoint>,
    /// Derivative at the interior fixed point (elliptic only); unimodular.
    pub multiplier: Option<C64>,
    /// `|m(0)|` (hyperbolic only).
    pub r: Option<f64>,
}

impl<C: Coeff> Moebius<C> {
    /// Build from matrix entries; the determinant must be nonzero.
    pub fn new(a: C, b: C, c: C, d: C) -> Result<Self> {
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        if det.is_zero() {
            return Err(Error::InvalidParameter("Möbius matrix must have nonzero determinant".into()));
        }
        Ok(Moebius { a, b, c, d })
    }

    /// The identity map.
    pub fn identity() -> Self {
        Moebius { a: C::one(), b: C::zero(), c: C::zero(), d: C::one() }
    }

    /// `ad − bc` of the stored representative.
    pub fn det(&self) -> C {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    /// Composition `self ∘ other` (matrix product).
    pub fn compose(&self, other: &Self) -> Self {
        Moebius {
            a: self.a.clone() * other.a.clone() + self.b.clone() * other.c.clone(),
            b: self.a.clone() * other.b.clone() + self.b.clone() * other.d.clone(),
            c: self.c.clone() * other.a.clone() + self.d.clone() * other.c.clone(),
            d: self.c.clone() * other.b.clone() + self.d.clone() * other.d.clone(),
        }
    }

    /// Inverse via the adjugate (projectively exact).
    pub fn inverse(&self) -> Self {
        Moebius {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    /// Matrix power `m^n`; negative `n` iterates the inverse.
    pub fn iterate(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut exp = n.unsigned_abs();
        let mut result = Self::identity();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.compose(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.compose(&base);
            }
        }
        result
    }

    /// Apply to a point (caller keeps `z` away from the pole).
    pub fn apply(&self, z: C) -> C {
        (self.a.clone() * z.clone() + self.b.clone()) / (self.c.clone() * z + self.d.clone())
    }

    /// Exact projective equality: entrywise cross-multiplication against the
    /// first nonzero entry of `self`.
    pub fn projective_eq(&self, other: &Self) -> bool {
        let se = [&self.a, &self.b, &self.c, &self.d];
        let oe = [&other.a, &other.b, &other.c, &other.d];
        let lead = match se.iter().position(|x| !x.is_zero()) {
            Some(k) => k,
            None => return false,
        };
        if oe[lead].is_zero() {
            return false;
        }
        (0..4).all(|k| se[k].clone() * oe[lead].clone() == oe[k].clone() * se[lead].clone())
    }
}

impl<C: Coeff> std::fmt::Display for Moebius<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{:?}, {:?}], [{:?}, {:?}]]", self.a, self.b, self.c, self.d)
    }
}

impl Moebius<CRat> {
    /// Canonical exact representative: all entries divided by the first
    /// nonzero one, which becomes `1`. Idempotent.
    pub fn normalize_exact(&self) -> Self {
        let lead = [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("a Möbius matrix is nonzero")
            .clone();
        Moebius {
            a: self.a.clone() / lead.clone(),
            b: self.b.clone() / lead.clone(),
            c: self.c.clone() / lead.clone(),
            d: self.d.clone() / lead,
        }
    }
}

impl Moebius<C64> {
    /// Canonical floating representative: determinant scaled to `1`, sign
    /// chosen so the first significant entry has argument in `[0, π)`.
    /// Idempotent up to the determinant guard (already-normalized inputs are
    /// returned unchanged).
    pub fn normalize(&self) -> Result<Self> {
        let det = self.det();
        if det.norm() < 1e-280 {
            return Err(Error::InvalidParameter("Möbius matrix is numerically singular".into()));
        }
        let m = if (det - C64::one()).norm() <= 1e-14 {
            self.clone()
        } else {
            let s = C64::one() / det.sqrt();
            Moebius { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
        };
        let scale = m.a.norm().max(m.b.norm()).max(m.c.norm()).max(m.d.norm());
        let lead = [m.a, m.b, m.c, m.d]
            .into_iter()
            .find(|x| x.norm() > 1e-12 * scale)
            .expect("scale is positive");
        // Argument in [0, π): positive imaginary part, or real positive.
        let flip = lead.im < -1e-14 * lead.norm()
            || (lead.im.abs() <= 1e-14 * lead.norm() && lead.re < 0.0);
        Ok(if flip { Moebius { a: -m.a, b: -m.b, c: -m.c, d: -m.d } } else { m })
    }

    /// Projective distance: Frobenius distance between determinant-normalized
    /// representatives, minimized over the free phase.
    pub fn projective_distance(&self, other: &Self) -> Result<f64> {
        let m1 = self.normalize()?;
        let m2 = other.normalize()?;
        let n1 = m1.a.norm_sqr() + m1.b.norm_sqr() + m1.c.norm_sqr() + m1.d.norm_sqr();
        let n2 = m2.a.norm_sqr() + m2.b.norm_sqr() + m2.c.norm_sqr() + m2.d.norm_sqr();
        let cross = m2.a.conj() * m1.a + m2.b.conj() * m1.b + m2.c.conj() * m1.c
            + m2.d.conj() * m1.d;
        Ok((n1 + n2 - 2.0 * cross.norm()).max(0.0).sqrt())
    }

    /// Whether the matrix is (projectively) the identity.
    pub fn is_identity(&self, tol: f64) -> bool {
        let scale = self.a.norm().max(self.b.norm()).max(self.c.norm()).max(self.d.norm());
        self.b.norm() <= tol * scale
            && self.c.norm() <= tol * scale
            && (self.a - self.d).norm() <= tol * scale
    }

    /// Whether the map is an automorphism of the unit disk, i.e. projectively
    /// of the form `e^{iθ}(z₀ − z)/(1 − z̄₀ z)` with `|z₀| < 1`, within `tol`.
    pub fn is_disk_automorphism(&self, tol: f64) -> bool {
        self.disk_parameters(tol).is_ok()
    }

    /// Extract `(θ, z₀)` of the normalized form, or an error when the map is
    /// not a disk automorphism within `tol`.
    pub fn disk_parameters(&self, tol: f64) -> Result<(f64, C64)> {
        // Disk automorphisms have their pole strictly outside the closed
        // disk, so d ≠ 0 and we can scale it to 1:
        //   [[−e^{iθ}, e^{iθ}z₀],[−z̄₀, 1]]  ⇒  a/d = −e^{iθ}, z₀ = −b/a, c/d = −z̄₀.
        if self.d.norm() <= self.c.norm() {
            return Err(Error::SymbolCheck("pole lies in the closed disk".into()));
        }
        let a = self.a / self.d;
        let b = self.b / self.d;
        let c = self.c / self.d;
        if a.norm() < 1e-15 {
            return Err(Error::SymbolCheck("degenerate numerator".into()));
        }
        if (a.norm() - 1.0).abs() > tol {
            return Err(Error::SymbolCheck(format!(
                "modulus of the rotation coefficient is {} ≠ 1",
                a.norm()
            )));
        }
        let z0 = -b / a;
        if !(z0.norm() < 1.0) {
            return Err(Error::SymbolCheck(format!("center |z0| = {} not inside the disk", z0.norm())));
        }
        if (c + z0.conj()).norm() > tol * (1.0 + z0.norm()) {
            return Err(Error::SymbolCheck("denominator is not the reflected numerator".into()));
        }
        let theta = (-a).arg();
        Ok((theta, z0))
    }

    /// Derivative `(ad − bc)/(cz + d)²` (representative-independent).
    pub fn derivative_at(&self, z: C64) -> Result<C64> {
        let den = self.c * z + self.d;
        if den.norm() < 1e-14 * (self.c.norm() * z.norm() + self.d.norm()).max(1e-300) {
            return Err(Error::InvalidParameter("derivative requested at the pole".into()));
        }
        Ok(self.det() / (den * den))
    }

    /// Fixed points on the sphere: roots of `cz² + (d − a)z − b = 0`, with a
    /// double root listed twice; when `c = 0` the point at infinity is fixed.
    /// The identity is rejected (everything is fixed).
    pub fn fixed_points(&self) -> Result<Vec<FixedPoint>> {
        if self.is_identity(1e-14) {
            return Err(Error::InvalidParameter("the identity fixes every point".into()));
        }
        if self.c.norm() == 0.0 {
            // Affine: a z + b = d z at the finite fixed point.
            if (self.a - self.d).norm() == 0.0 {
                // Pure translation: a double fixed point at infinity.
                return Ok(vec![FixedPoint::Infinity, FixedPoint::Infinity]);
            }
            let z = self.b / (self.d - self.a);
            return Ok(vec![FixedPoint::Finite(z), FixedPoint::Infinity]);
        }
        let disc = (self.d - self.a) * (self.d - self.a) + 4.0 * self.c * self.b;
        let root = disc.sqrt();
        let two_c = 2.0 * self.c;
        let z1 = (self.a - self.d + root) / two_c;
        let z2 = (self.a - self.d - root) / two_c;
        Ok(vec![FixedPoint::Finite(z1), FixedPoint::Finite(z2)])
    }

    /// Classify a disk automorphism by fixed-point location.
    ///
    /// The parabolic/non-parabolic decision uses the conjugation invariant
    /// `t² = (a + d)²` of the determinant-1 representative (`t² = 4` exactly
    /// for parabolics); fixed-point moduli are then validated against `tol`,
    /// and maps straddling the tolerance are rejected as ambiguous.
    pub fn classify(&self, tol: f64) -> Result<AutoClass> {
        self.disk_parameters(tol.max(1e-9))?;
        if self.is_identity(1e-14) {
            return Ok(AutoClass {
                kind: MapKind::Identity,
                fixed_points: vec![],
                multiplier: None,
                r: None,
            });
        }
        let m = self.normalize()?;
        let tr = m.a + m.d;
        let t2 = tr * tr;
        // For disk automorphisms the det-1 trace is real up to sign; noise in
        // the imaginary part scales with the squared entry size.
        let scale2 = (m.a.norm() + m.b.norm() + m.c.norm() + m.d.norm()).powi(2);
        let noise = 64.0 * f64::EPSILON * (1.0 + scale2);
        if t2.im.abs() > noise.max(1e-10 * (1.0 + t2.norm())) {
            return Err(Error::Classification(format!(
                "squared trace {t2} is not real; not a disk automorphism?"
            )));
        }
        let delta = t2.re - 4.0;

        if delta.abs() <= noise {
            // Double fixed point ξ = (a − d)/(2c).
            if m.c.norm() <= 1e-14 {
                return Err(Error::Classification(
                    "degenerate parabolic candidate with c = 0".into(),
                ));
            }
            let xi = (m.a - m.d) / (2.0 * m.c);
            if (xi.norm() - 1.0).abs() > tol {
                return Err(Error::Classification(format!(
                    "double fixed point has modulus {} (expected 1 within {tol})",
                    xi.norm()
                )));
            }
            let xi = xi / xi.norm();
            return Ok(AutoClass {
                kind: MapKind::Parabolic,
                fixed_points: vec![FixedPoint::Finite(xi), FixedPoint::Finite(xi)],
                multiplier: None,
                r: None,
            });
        }

        let fps = m.fixed_points()?;
        if delta < 0.0 {
            // Elliptic: one fixed point strictly inside, its reflection outside.
            let (interior, other) = match fps[..] {
                [FixedPoint::Finite(z1), FixedPoint::Finite(z2)] => {
                    if z1.norm() <= z2.norm() { (z1, FixedPoint::Finite(z2)) } else { (z2, FixedPoint::Finite(z1)) }
                }
                [FixedPoint::Finite(z1), FixedPoint::Infinity]
                | [FixedPoint::Infinity, FixedPoint::Finite(z1)] => (z1, FixedPoint::Infinity),
                _ => return Err(Error::Classification("unexpected fixed-point layout".into())),
            };
            if interior.norm() >= 1.0 - tol {
                return Err(Error::Classification(format!(
                    "elliptic candidate fixed point has modulus {} within tol of the circle",
                    interior.norm()
                )));
            }
            let multiplier = m.derivative_at(interior)?;
            if (multiplier.norm() - 1.0).abs() > 1e-8 {
                return Err(Error::Classification(format!(
                    "elliptic multiplier modulus {} ≠ 1",
                    multiplier.norm()
                )));
            }
            return Ok(AutoClass {
                kind: MapKind::Elliptic,
                fixed_points: vec![FixedPoint::Finite(interior), other],
                multiplier: Some(multiplier),
                r: None,
            });
        }

        // Hyperbolic: both fixed points on the circle, attracting first.
        let (z1, z2) = match fps[..] {
            [FixedPoint::Finite(z1), FixedPoint::Finite(z2)] => (z1, z2),
            _ => {
                return Err(Error::Classification(
                    "hyperbolic disk automorphism must have finite fixed points".into(),
                ))
            }
        };
        for z in [z1, z2] {
            if (z.norm() - 1.0).abs() > tol {
                return Err(Error::Classification(format!(
                    "hyperbolic candidate fixed point has modulus {} (expected 1 within {tol})",
                    z.norm()
                )));
            }
        }
        let d1 = m.derivative_at(z1)?.norm();
        let (attracting, repelling) = if d1 < 1.0 { (z1, z2) } else { (z2, z1) };
        let r = m.apply(C64::zero()).norm();
        Ok(AutoClass {
            kind: MapKind::Hyperbolic,
            fixed_points: vec![FixedPoint::Finite(attracting), FixedPoint::Finite(repelling)],
            multiplier: None,
            r: Some(r),
        })
    }

    /// Conjugator to the canonical form: returns `(τ, canonical)` with
    /// `τ ∘ m ∘ τ⁻¹ = canonical`, verified to projective distance
    /// [`CONJUGATOR_TOL`].
    ///
    /// Canonical targets: `λz` (elliptic, `λ` the multiplier), `ψ₁` or `ψ₂`
    /// (parabolic — `ψ₁` exactly when the half-plane conjugate of `m`
    /// translates in the `+i` direction, equivalently by the sign of the
    /// imaginary part of the second Taylor coefficient of the rotated map at
    /// its fixed point), or `(z + r)/(1 + rz)` (hyperbolic, `r` derived from
    /// the multiplier at the attracting fixed point).
    pub fn canonical_conjugator(&self) -> Result<(Self, Self)> {
        let class = self.classify(CLASSIFY_TOL)?;
        let (tau, canonical) = match class.kind {
            MapKind::Identity => {
                return Err(Error::InvalidParameter("the identity has no canonical form".into()))
            }
            MapKind::Elliptic => {
                let alpha = match class.fixed_points[0] {
                    FixedPoint::Finite(z) => z,
                    FixedPoint::Infinity => unreachable!("interior fixed point is finite"),
                };
                let lambda = class.multiplier.expect("elliptic carries a multiplier");
                let canonical = Moebius { a: lambda, b: C64::zero(), c: C64::zero(), d: C64::one() };
                let tau = if alpha.norm() < 1e-300 {
                    Self::identity()
                } else {
                    // The involution swapping α and 0.
                    Moebius { a: -C64::one(), b: alpha, c: -alpha.conj(), d: C64::one() }
                };
                (tau, canonical)
            }
            MapKind::Parabolic => {
                let xi = match class.fixed_points[0] {
                    FixedPoint::Finite(z) => z,
                    FixedPoint::Infinity => unreachable!("disk parabolic fixes a circle point"),
                };
                // Rotate the fixed point to 1, move to the half-plane with
                // η(z) = (1+z)/(1−z), read off the translation w ↦ w + it,
                // rescale to |t| = 2, and come back.
                let rho = Moebius { a: xi.conj(), b: C64::zero(), c: C64::zero(), d: C64::one() };
                let m1 = rho.compose(self).compose(&rho.inverse());
                let eta = special(Special::Eta);
                let t_map = eta.compose(&m1).compose(&eta.inverse());
                // Affine normalization: t_map = [[p, q],[0, s]] with p/s = 1.
                let p = t_map.a / t_map.d;
                let q = t_map.b / t_map.d;
                let lower = t_map.c.norm() / (t_map.a.norm() + t_map.d.norm());
                if lower > 1e-8 || (p - C64::one()).norm() > 1e-8 {
                    return Err(Error::Numerics(format!(
                        "half-plane conjugate is not a translation (c ratio {lower:.2e})"
                    )));
                }
                if q.re.abs() > 1e-8 * q.norm().max(1e-30) || q.norm() < 1e-13 {
                    return Err(Error::Numerics(format!(
                        "half-plane translation {q} is not purely imaginary"
                    )));
                }
                let t = q.im;
                let scale = Moebius {
                    a: C64::new(2.0 / t.abs(), 0.0),
                    b: C64::zero(),
                    c: C64::zero(),
                    d: C64::one(),
                };
                let tau = eta.inverse().compose(&scale).compose(&eta).compose(&rho);
                let canonical = if t > 0.0 { special(Special::Psi1) } else { special(Special::Psi2) };
                (tau, canonical)
            }
            MapKind::Hyperbolic => {
                let (xa, xr) = match class.fixed_points[..] {
                    [FixedPoint::Finite(xa), FixedPoint::Finite(xr)] => (xa, xr),
                    _ => unreachable!("hyperbolic fixed points are finite"),
                };
                let lambda = self.derivative_at(xa)?.norm();
                let r = (1.0 - lambda) / (1.0 + lambda);
                let canonical = Moebius {
                    a: C64::one(),
                    b: C64::new(r, 0.0),
                    c: C64::new(r, 0.0),
                    d: C64::one(),
                };
                // K sends (attracting, repelling) to (0, ∞); γ rotates K's
                // image half-plane onto the left half-plane Re w < 0, which is
                // where K₀(z) = (z−1)/(z+1) sends the disk; τ = K₀⁻¹ ∘ γ ∘ K
                // then fixes the multiplier, forcing the canonical form.
                let k = Moebius { a: C64::one(), b: -xa, c: C64::one(), d: -xr };
                let k0 = Moebius {
                    a: C64::one(),
                    b: -C64::one(),
                    c: C64::one(),
                    d: C64::one(),
                };
                let half_angle = (xr / xa).arg() / 2.0;
                let q_boundary = xa * C64::from_polar(1.0, half_angle);
                let dir = k.apply(q_boundary);
                let mut gamma = C64::i() / dir;
                let side = (gamma * k.apply(C64::zero())).re;
                if side > 0.0 {
                    gamma = -gamma;
                }
                let gm = Moebius { a: gamma, b: C64::zero(), c: C64::zero(), d: C64::one() };
                let tau = k0.inverse().compose(&gm).compose(&k);
                (tau, canonical)
            }
        };
        if !tau.is_disk_automorphism(1e-6) && !tau.is_identity(1e-12) {
            return Err(Error::Numerics("constructed conjugator is not a disk automorphism".into()));
        }
        let conj = tau.compose(self).compose(&tau.inverse());
        let residual = conj.projective_distance(&canonical)?;
        if residual > CONJUGATOR_TOL {
            return Err(Error::Numerics(format!(
                "conjugation residual {residual:.3e} exceeds {CONJUGATOR_TOL:.0e}"
            )));
        }
        Ok((tau, canonical))
    }

    /// Taylor coefficients through degree `n`; the pole must lie strictly
    /// outside the closed disk.
    pub fn taylor(&self, n: usize) -> Result<TruncatedSeries<C64>> {
        if self.c.norm() > 0.0 && self.d.norm() <= self.c.norm() {
            return Err(Error::SymbolCheck(
                "Taylor expansion needs the pole strictly outside the closed disk".into(),
            ));
        }
        // 1/(cz + d) = (1/d) Σ (−c/d)^k z^k, then multiply by (b + az).
        let ratio = -self.c / self.d;
        let mut recip = Vec::with_capacity(n + 1);
        let mut pow = C64::one() / self.d;
        for _ in 0..=n {
            recip.push(pow);
            pow *= ratio;
        }
        let recip = TruncatedSeries::from_coeffs(recip);
        let num = TruncatedSeries::from_coeffs(vec![self.b, self.a]);
        let mut out = num.mul_mod(&recip, n);
        if self.is_disk_automorphism(1e-9) {
            out = out.with_hints(1.0, 1.0);
        }
        Ok(out)
    }
}

/// The automorphism `φ(z) = e^{iθ}(z₀ − z)/(1 − z̄₀ z)` as a matrix
/// `[[−e^{iθ}, e^{iθ}z₀], [−z̄₀, 1]]`.
pub fn disk_automorphism(theta: f64, z0: C64) -> Result<Moebius<C64>> {
    if !(z0.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("|z0| must be < 1, got {}", z0.norm())));
    }
    let e = C64::from_polar(1.0, theta);
    Ok(Moebius { a: -e, b: e * z0, c: -z0.conj(), d: C64::one() })
}

/// Named special maps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Special {
    /// `ψ₁(z) = ((1+i)z − 1)/(z + i − 1)`: parabolic, fixes 1.
    Psi1,
    /// `ψ₂(z) = ((1−i)z − 1)/(z − i − 1)`: the inverse of `ψ₁`.
    Psi2,
    /// `τ_n(z) = ((n+1)z + (n−1))/((n−1)z + (n+1))`: conjugates `ψ₁` to `ψ₁ⁿ`.
    TauN(u32),
    /// `η(z) = (1+z)/(1−z)`: Cayley-type map, disk onto right half-plane.
    Eta,
    /// `ς_t(w) = ((1−t)/(1+t))² w`: a *half-plane* (not disk) automorphism.
    SigmaT(f64),
}

/// Construct a special map. `ς_t` does not preserve the disk — it acts on the
/// half-plane model and is only meaningful inside `η`-conjugations.
pub fn special(which: Special) -> Moebius<C64> {
    let one = C64::one();
    let i = C64::i();
    match which {
        Special::Psi1 => Moebius { a: one + i, b: -one, c: one, d: i - one },
        Special::Psi2 => Moebius { a: one - i, b: -one, c: one, d: -i - one },
        Special::TauN(n) => {
            let nf = f64::from(n);
            Moebius {
                a: C64::new(nf + 1.0, 0.0),
                b: C64::new(nf - 1.0, 0.0),
                c: C64::new(nf - 1.0, 0.0),
                d: C64::new(nf + 1.0, 0.0),
            }
        }
        Special::Eta => Moebius { a: one, b: one, c: -one, d: one },
        Special::SigmaT(t) => {
            let s = ((1.0 - t) / (1.0 + t)).powi(2);
            Moebius { a: C64::new(s, 0.0), b: C64::zero(), c: C64::zero(), d: one }
        }
    }
}

/// Validated constructor for parameterized specials.
pub fn special_checked(which: Special) -> Result<Moebius<C64>> {
    match which {
        Special::TauN(n) if n < 1 => {
            Err(Error::InvalidParameter("τ_n needs n ≥ 1".into()))
        }
        Special::SigmaT(t) if !(t > 0.0 && t < 1.0) => {
            Err(Error::InvalidParameter(format!("ς_t needs t in (0, 1), got {t}")))
        }
        w => Ok(special(w)),
    }
}

/// Exact Gaussian-rational `ψ₁`.
pub fn psi1_exact() -> Moebius<CRat> {
    let one = crat_int(1);
    let i = crat_i();
    Moebius { a: one.clone() + i.clone(), b: -one.clone(), c: one.clone(), d: i - one }
}

/// Exact Gaussian-rational `ψ₂`.
pub fn psi2_exact() -> Moebius<CRat> {
    let one = crat_int(1);
    let i = crat_i();
    Moebius { a: one.clone() - i.clone(), b: -one.clone(), c: one.clone(), d: -i - one }
}

/// Exact Gaussian-rational `τ_n`.
pub fn tau_n_exact(n: i64) -> Moebius<CRat> {
    Moebius {
        a: crat_int(n + 1),
        b: crat_int(n - 1),
        c: crat_int(n - 1),
        d: crat_int(n + 1),
    }
}

/// Detect whether a unimodular `λ` is a `q`-th root of unity with
/// `q ≤ q_cap`, via continued-fraction convergents of `arg(λ)/2π`.
/// Returns the reduced `(p, q)` with `λ ≈ e^{2πip/q}`.
pub fn detect_root_of_unity(lambda: C64, q_cap: u64) -> Option<(i64, u64)> {
    let x = lambda.arg() / (2.0 * std::f64::consts::PI);
    // Regular continued-fraction convergents of x. The leading term uses
    // `floor`, not `round`: a floor remainder stays in [0, 1), which keeps
    // every later partial quotient positive — a negative quotient would
    // wrap in the unsigned denominator recurrence and abort the scan (this
    // matters for clockwise rotations, whose arguments are negative).
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0u64, x.floor() as i64, 1u64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if (x - p1 as f64 / q1 as f64).abs() <= 1e-12 {
            // Reduce and verify.
            let g = num_integer::gcd(p1.unsigned_abs(), q1);
            let (p, q) = (p1 / g as i64, q1 / g as u64);
            let err = q as f64 * x - (q as f64 * x).round();
            if err.abs() <= 1e-9 {
                return Some((p.rem_euclid(q as i64), q));
            }
            return None;
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let recip = 1.0 / frac;
        let a = recip.floor();
        frac = recip - a;
        let a = a as i64;
        let p2 = a * p1 + p0;
        let q2 = (a as u64).saturating_mul(q1).saturating_add(q0);
        if q2 > q_cap {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    None
}
