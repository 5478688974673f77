//! Symbol-level analysis: spectral models, range and index verdicts, decay
//! witnesses, and norm-growth exponent fits.
//!
//! Everything here reasons from the symbol itself — boundary values, fixed
//! points, multipliers — and reaches for finite sections only when a measured
//! norm or a certified singular-value floor is wanted. Matrix truncation can
//! only shrink norms, so the section-based quantities reported by this module
//! are conservative from the right side: compressions never overstate an
//! operator norm and never understate a restricted lower bound by more than
//! the truncated tail.
//!
//! The verdict functions refuse to answer rather than guess. Ambiguous
//! winding counts, weights without a stabilized polynomial growth order, and
//! symbols whose coefficients carry no analytic margin past the closed disk
//! all come back as errors, not as best-effort classifications.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::binomial_rat;
use crate::moebius::{
    detect_root_of_unity, special, FixedPoint, MapKind, Moebius, Special, CLASSIFY_TOL,
};
use crate::operators::bounds::growth_order;
use crate::operators::{
    composition_section, mobius_composition_section, op_norm, smallest_sv, SELF_MAP_TOL,
};
use crate::series::{blaschke_taylor, TruncatedSeries};
use crate::weights::{GrowthClass, WeightSequence, DEFAULT_PROBE_LIMIT};
use crate::{C64, CRat, Rat};

/// Boundary sample count for modulus scans and measured sups.
const MODULUS_SAMPLES: usize = 1024;

/// Winding counts start at this sample count and refine by factors of 4 …
const WINDING_START: usize = 1024;

/// … up to this cap, after which the count is reported as unstable.
const WINDING_CAP: usize = 16384;

/// Largest root-of-unity order probed when modelling elliptic symbols.
const ROOT_OF_UNITY_CAP: u64 = 1_000_000;

/// How far `|ξ|` may sit from 1 before the witness construction refuses it.
const UNIT_MODULUS_TOL: f64 = 1e-6;

/// Minimal admissible boundary clearance between a symbol image and the
/// excluded point of a witness family.
const IMAGE_CLEARANCE: f64 = 1e-9;

/// Slack allowed on a fitted slope before it counts as exceeding the
/// predicted exponent.
const SLOPE_MARGIN: f64 = 0.25;

/// Shape of the spectrum predicted for a composition operator with an
/// automorphic symbol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SpectrumKind {
    /// Finitely many points. Emitted when some iterate of the symbol is the
    /// identity, which forces the operator to satisfy `T^q = I`; the points
    /// are then the full set of `q`-th roots of unity, listed as
    /// `e^{2πik/q}` for `k = 0 … q−1`.
    FiniteCyclic(Vec<C64>),
    /// The full unit circle.
    UnitCircle,
    /// The closed annulus `r_in ≤ |z| ≤ r_out`.
    Annulus {
        /// Inner radius.
        r_in: f64,
        /// Outer radius.
        r_out: f64,
    },
    /// Closure of the multiplier powers `{λ^k : k ≥ 0} ∪ {0}` for a
    /// diagonalizable compression with an interior fixed point. Kept so that
    /// downstream consumers can represent that case; [`spectrum_model`]
    /// never emits it because automorphic symbols with an interior fixed
    /// point are elliptic and fall under the circle-based variants.
    DiagonalClosure(C64),
}

/// A spectrum prediction plus a plain-language account of how it was made.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumModel {
    /// The predicted set.
    pub kind: SpectrumKind,
    /// Which structural facts produced the prediction (map class,
    /// multiplier, weight growth order).
    pub provenance: String,
}

/// Predict the spectrum of the composition operator whose symbol is the disk
/// automorphism `m`, acting on the space weighted by `w`.
///
/// The prediction is keyed on the conjugacy class of the symbol:
///
/// * identity → the single point `1`;
/// * elliptic whose multiplier is a root of unity of order `q` (probed up to
///   order 1 000 000) → the `q`-th roots of unity, since `T^q = I`;
/// * elliptic with non-root multiplier → the unit circle (multiplier powers
///   are dense in it, and the operator is power-bounded both ways);
/// * parabolic → the unit circle (iterate norms in both directions grow
///   subexponentially on polynomial-growth spaces, pinning both spectral
///   radii to 1);
/// * hyperbolic with attracting multiplier `λ` on a weight of growth order
///   `N` → the closed annulus `[λ^E, λ^{−E}]` with `E = 2N² + 3N + 2`, the
///   exponent at which iterate norm growth is capped on such spaces.
///
/// Parabolic and hyperbolic predictions lean on norm growth, so they demand
/// a weight with a stabilized polynomial growth order; the other two are
/// algebraic and hold on any space on which composition acts boundedly.
pub fn spectrum_model(m: &Moebius<C64>, w: &WeightSequence) -> Result<SpectrumModel> {
    let class = m.classify(CLASSIFY_TOL)?;
    match class.kind {
        MapKind::Identity => Ok(SpectrumModel {
            kind: SpectrumKind::FiniteCyclic(vec![C64::one()]),
            provenance: "identity symbol: the operator is the identity and its spectrum is \
                         the single point 1"
                .into(),
        }),
        MapKind::Elliptic => {
            let lambda = class
                .multiplier
                .expect("elliptic classification always carries a multiplier");
            match detect_root_of_unity(lambda, ROOT_OF_UNITY_CAP) {
                Some((_, q)) => {
                    let points = (0..q)
                        .map(|k| {
                            let ang =
                                2.0 * std::f64::consts::PI * (k as f64) / (q as f64);
                            C64::new(ang.cos(), ang.sin())
                        })
                        .collect();
                    Ok(SpectrumModel {
                        kind: SpectrumKind::FiniteCyclic(points),
                        provenance: format!(
                            "elliptic symbol whose multiplier is a primitive order-{q} root \
                             of unity: the q-th iterate of the symbol is the identity, so \
                             the operator satisfies T^{q} = I and its spectrum is the full \
                             set of order-{q} roots of unity"
                        ),
                    })
                }
                None => Ok(SpectrumModel {
                    kind: SpectrumKind::UnitCircle,
                    provenance: format!(
                        "elliptic symbol whose multiplier is not a root of unity of order \
                         ≤ {ROOT_OF_UNITY_CAP}: its powers are dense in the circle and the \
                         operator is power-bounded in both directions, so the spectrum \
                         fills the unit circle"
                    ),
                }),
            }
        }
        MapKind::Parabolic => {
            let order = growth_order(w)?;
            Ok(SpectrumModel {
                kind: SpectrumKind::UnitCircle,
                provenance: format!(
                    "parabolic symbol on a weight of growth order {order}: forward and \
                     inverse iterate norms grow subexponentially, pinning both spectral \
                     radii to 1, and the spectrum is the unit circle"
                ),
            })
        }
        MapKind::Hyperbolic => {
            let attracting = match class.fixed_points.first() {
                Some(FixedPoint::Finite(z)) => *z,
                _ => {
                    return Err(Error::Classification(
                        "hyperbolic symbol without a finite attracting fixed point".into(),
                    ))
                }
            };
            let lambda = m.derivative_at(attracting)?.norm();
            if !(lambda > 0.0 && lambda < 1.0) {
                return Err(Error::Classification(format!(
                    "attracting multiplier {lambda} is not inside (0, 1); the fixed-point \
                     data is inconsistent"
                )));
            }
            let order = growth_order(w)?;
            let e = 2.0 * order * order + 3.0 * order + 2.0;
            Ok(SpectrumModel {
                kind: SpectrumKind::Annulus {
                    r_in: lambda.powf(e),
                    r_out: lambda.powf(-e),
                },
                provenance: format!(
                    "hyperbolic symbol with attracting multiplier {lambda:.6} on a weight \
                     of growth order {order}: iterate norm growth caps the spectrum inside \
                     the closed annulus with radii λ^±E, E = 2·order² + 3·order + 2 = {e}"
                ),
            })
        }
    }
}

/// Exact witness value showing that the alternating `4m`-th difference of
/// `k ↦ 1/(k² + 1)` stays strictly positive.
///
/// Returns `(S(m), floor)` with
///
/// ```text
/// S(m)  = Σ_{n=0}^{4m} (−1)^n · C(4m, n) / ((n − 2m)² + 1),
/// floor = 2 / (4m² + 1),
/// ```
///
/// both as exact rationals. The summand `1/((n−2m)²+1)` is the squared
/// distance from the point 1 to the `(n−2m)`-th boundary-translation orbit
/// point (see [`boundary_translation_orbit`]), so `S(m)` is the squared norm
/// of an alternating binomial combination along that orbit; its positive
/// floor certifies that no such combination degenerates. `S(1) = 12/5`.
pub fn parabolic_witness(m: u32) -> Result<(Rat, Rat)> {
    if m < 1 {
        return Err(Error::InvalidParameter(
            "the witness index starts at 1".into(),
        ));
    }
    let four_m = 4 * u64::from(m);
    let two_m = i64::from(m) * 2;
    let mut s = Rat::zero();
    for n in 0..=four_m {
        let offset = n as i64 - two_m;
        let denom = Rat::from_integer(BigInt::from(offset * offset + 1));
        let term = binomial_rat(four_m, n) / denom;
        s = if n % 2 == 0 { s + term } else { s - term };
    }
    let mm = u64::from(m);
    let floor = Rat::new(BigInt::from(2u32), BigInt::from(4 * mm * mm + 1));
    Ok((s, floor))
}

/// Exact orbit of the origin under the boundary-translation parabolic map:
/// the `k`-th iterate (any sign, `k = 0` gives `0`) sends `0` to
/// `k(k + i)/(k² + 1)`, a point that creeps toward the boundary fixed point
/// `1` at rate `|1 − orbit(k)|² = 1/(k² + 1)`.
pub fn boundary_translation_orbit(k: i64) -> CRat {
    let kk = BigInt::from(k);
    let den = &kk * &kk + BigInt::one();
    let re = Rat::new(&kk * &kk, den.clone());
    let im = Rat::new(kk, den);
    Complex::new(re, im)
}

/// Roots of iterated-section norms: entry `j` is
/// `‖section(φ^j, n)‖^{1/j}` for `j = 1 … j_max`.
///
/// Sections are compressions, so each entry lower-bounds the corresponding
/// root of the full iterated operator norm; the plateau of the sequence
/// tracks the spectral radius from below.
pub fn spectral_radius_sequence(
    m: &Moebius<C64>,
    w: &WeightSequence,
    j_max: u32,
    n: usize,
) -> Result<Vec<(u32, f64)>> {
    if j_max < 1 {
        return Err(Error::InvalidParameter(
            "the iterate count must be at least 1".into(),
        ));
    }
    let mut out = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        let section = mobius_composition_section(&m.iterate(i64::from(j)), w, n)?;
        let norm = op_norm(&section)?;
        out.push((j, norm.powf(1.0 / f64::from(j))));
    }
    Ok(out)
}

/// Range/index placement of a composition operator with an inner-like
/// symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FredholmStatus {
    /// The boundary modulus of the symbol drops away from 1, so compositions
    /// lose norm on peak functions and the range is not closed.
    NotClosedRange,
    /// Closed range with finite-dimensional defect: the symbol covers the
    /// circle the stored number of times (`≥ 2`), leaving that many sheets.
    SemiFredholm(u32),
    /// Closed range and winding one: invertible up to compact perturbation.
    Fredholm,
}

/// Numbers backing a [`FredholmStatus`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FredholmEvidence {
    /// Largest observed deviation `||g| − 1|` on the sampled circle.
    pub boundary_modulus: f64,
    /// Boundary winding count of the symbol, once the modulus test passed.
    pub winding: Option<i64>,
    /// Whether the symbol behaved like a disk automorphism: unimodular
    /// boundary values within tolerance and winding exactly one.
    pub automorphism_check: bool,
}

/// Verdict plus the evidence it rests on.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FredholmVerdict {
    /// The placement.
    pub status: FredholmStatus,
    /// The measurements that produced it.
    pub evidence: FredholmEvidence,
}

/// Decide whether `C_g` on the `w`-weighted space has closed range, and if
/// so, how far it sits from invertibility.
///
/// Scope and preconditions:
///
/// * `w` must classify as polynomial growth (the range dichotomy used here
///   is only valid on such spaces);
/// * `g.decay_radius()` must exceed 1, i.e. the stored coefficients must
///   show an analytic margin past the closed disk, so that boundary values
///   of the truncation are trustworthy. Polynomials qualify automatically.
///
/// The effective modulus tolerance is `tol + g.tail_estimate()`. A boundary
/// modulus deviating from 1 beyond that is decisive: the verdict is
/// [`FredholmStatus::NotClosedRange`] and no winding is attempted. Otherwise
/// the boundary winding count is computed with per-step argument guards,
/// refining the sample count by factors of 4 up to 16 384 before giving up;
/// winding 1 yields [`FredholmStatus::Fredholm`], winding `m ≥ 2` yields
/// [`FredholmStatus::SemiFredholm`] with defect `m`, and anything else is an
/// error (a unimodular symbol that winds zero times is constant-like and
/// outside the analyzed family).
pub fn fredholm_verdict(
    g: &TruncatedSeries<C64>,
    w: &WeightSequence,
    tol: f64,
) -> Result<FredholmVerdict> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    let report = w.classify_growth(DEFAULT_PROBE_LIMIT)?;
    if report.classification != GrowthClass::PolynomialGrowth {
        return Err(Error::Classification(format!(
            "weight '{}' did not stabilize to a polynomial growth order over {} probes; \
             the closed-range analysis does not apply",
            w.label(),
            report.probe_limit
        )));
    }
    let radius = g.decay_radius();
    if !(radius > 1.0) {
        return Err(Error::SymbolCheck(format!(
            "symbol coefficients decay like radius {radius} ≤ 1: the truncation carries \
             no analytic margin past the closed disk, so its boundary values cannot be \
             trusted"
        )));
    }
    let tol_eff = tol + g.tail_estimate();
    let dev = g
        .boundary_values(MODULUS_SAMPLES)
        .into_iter()
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if dev > tol_eff {
        return Ok(FredholmVerdict {
            status: FredholmStatus::NotClosedRange,
            evidence: FredholmEvidence {
                boundary_modulus: dev,
                winding: None,
                automorphism_check: false,
            },
        });
    }
    let m = stable_winding(g, C64::zero())?;
    let status = match m {
        1 => FredholmStatus::Fredholm,
        k if k >= 2 => FredholmStatus::SemiFredholm(k as u32),
        k => {
            return Err(Error::Classification(format!(
                "unimodular symbol with boundary winding {k}: constant-like symbols are \
                 outside the family this verdict covers"
            )))
        }
    };
    Ok(FredholmVerdict {
        status,
        evidence: FredholmEvidence {
            boundary_modulus: dev,
            winding: Some(m),
            automorphism_check: m == 1,
        },
    })
}

/// Winding count of `g − center` along the unit circle, refining the sample
/// count until the count stabilizes or the cap is hit.
fn stable_winding(g: &TruncatedSeries<C64>, center: C64) -> Result<i64> {
    let mut samples = WINDING_START;
    loop {
        let values: Vec<C64> = g
            .boundary_values(samples)
            .into_iter()
            .map(|v| v - center)
            .collect();
        if let Some(count) = winding_from_values(&values) {
            return Ok(count);
        }
        if samples >= WINDING_CAP {
            return Err(Error::Numerics(format!(
                "boundary winding count did not stabilize with up to {WINDING_CAP} \
                 samples; the curve passes too close to the reference point"
            )));
        }
        samples *= 4;
    }
}

/// Accumulate argument steps around a closed sample loop. `None` when a step
/// is too large to trust (≥ π/2), a value sits on the reference point, or
/// the total fails to land on an integer multiple of 2π within 1%.
fn winding_from_values(values: &[C64]) -> Option<i64> {
    if values.len() < 2 {
        return None;
    }
    let mut total = 0.0;
    for j in 0..values.len() {
        let a = values[j];
        let b = values[(j + 1) % values.len()];
        if a.norm() < 1e-12 || b.norm() < 1e-12 {
            return None;
        }
        let step = (b / a).arg();
        if step.abs() >= std::f64::consts::FRAC_PI_2 {
            return None;
        }
        total += step;
    }
    let turns = total / (2.0 * std::f64::consts::PI);
    let nearest = turns.round();
    if (turns - nearest).abs() > 0.01 {
        return None;
    }
    Some(nearest as i64)
}

/// One row of a range-decay witness table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct WitnessRow {
    /// Power of the peak function.
    pub k: u32,
    /// Weighted norm of `(f ∘ g)^k`.
    pub norm_cf: f64,
    /// Weighted norm of `f^k`.
    pub norm_f: f64,
}

/// Report produced by [`cr_witness_family`].
#[derive(Clone, Debug, Serialize)]
pub struct WitnessFamilyReport {
    /// Norm pairs for `k = 1 … k_max`.
    pub rows: Vec<WitnessRow>,
    /// Certified floor for every `norm_f`: the smallest singular value of
    /// the peak map's composition section restricted to the family's own
    /// column span (degrees `0 … k_max`). The family members are images of
    /// `(z + ξ)^k` under that map, and `‖(z + ξ)^k‖ ≥ 1` always.
    pub lower_bound: f64,
    /// Distance from the excluded point `ξ` to the symbol image; by the
    /// minimum-modulus principle the boundary minimum is the global one once
    /// the winding check has ruled out interior zeros of `g − ξ`.
    pub image_distance: f64,
    /// Radius of the disk around `ξ` outside of which the peak map pushes
    /// the circle toward `−ξ`; shrinks as `t → 1`.
    pub arc_radius: f64,
    /// Whether `arc_radius < 1/2` and the symbol image clears the arc — the
    /// geometric regime in which the decay mechanism is guaranteed to bite.
    pub geometry_ok: bool,
    /// Measured boundary sup of `f ∘ g`, the observed decay base for
    /// `norm_cf`.
    pub measured_sup: f64,
}

/// Build a family witnessing norm collapse under composition: powers of a
/// peak function that stay uniformly large themselves while their pullbacks
/// `(f ∘ g)^k` decay geometrically.
///
/// `ξ` is a unimodular point excluded from the closure of the symbol image
/// (checked: boundary clearance plus zero winding of `g − ξ`). The peak map
/// rotates `ξ` to 1, pulls the disk toward `−1` through the half-plane
/// scaling of sharpness `t ∈ (0, 1)`, and rotates back; it fixes `±ξ` and
/// sweeps everything the symbol can reach toward `−ξ`. The peak function is
/// `f = τ + ξ` (the pull map plus the constant `ξ`), so `f^k = (z + ξ)^k ∘ τ`
/// stays bounded below by a singular-value floor, while `f ∘ g` lives near 0.
///
/// Powers are computed once from `h = f ∘ g`, since `f^k ∘ g = (f ∘ g)^k`,
/// with every series truncated at degree `n − 1`: truncating is an ideal of
/// the coefficient ring, so iterated truncated products agree exactly with
/// truncations of the full powers, and dropping coefficients only lowers the
/// norms on both sides of the comparison. Requires `k_max < n/4` so the
/// stored rows comfortably dominate the family's column span when measuring
/// the floor.
pub fn cr_witness_family(
    g: &TruncatedSeries<C64>,
    xi: C64,
    t: f64,
    k_max: u32,
    w: &WeightSequence,
    n: usize,
) -> Result<WitnessFamilyReport> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "peak sharpness t must lie in (0, 1), got {t}"
        )));
    }
    if k_max < 1 {
        return Err(Error::InvalidParameter(
            "the family needs at least one power".into(),
        ));
    }
    if n < 16 {
        return Err(Error::InvalidParameter(format!(
            "truncation {n} is too small for a meaningful witness (need n ≥ 16)"
        )));
    }
    if (k_max as usize) >= n / 4 {
        return Err(Error::InvalidParameter(format!(
            "k_max = {k_max} must stay below a quarter of the truncation (n/4 = {}) so \
             every power is covered by the certified floor",
            n / 4
        )));
    }
    if (xi.norm() - 1.0).abs() > UNIT_MODULUS_TOL {
        return Err(Error::InvalidParameter(format!(
            "the excluded point must sit on the unit circle; |ξ| = {}",
            xi.norm()
        )));
    }
    let xi = xi / xi.norm();

    // The symbol must be a self-map whose closed image misses ξ.
    let boundary = g.boundary_values(MODULUS_SAMPLES);
    let sup = boundary.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if sup > 1.0 + SELF_MAP_TOL {
        return Err(Error::SymbolCheck(format!(
            "symbol is not a self-map of the disk: boundary sup = {sup}"
        )));
    }
    let image_distance = boundary
        .iter()
        .map(|v| (v - xi).norm())
        .fold(f64::INFINITY, f64::min);
    if image_distance <= IMAGE_CLEARANCE {
        return Err(Error::SymbolCheck(format!(
            "the symbol image touches the excluded point (boundary clearance \
             {image_distance:.3e})"
        )));
    }
    let wind = stable_winding(g, xi)?;
    if wind != 0 {
        return Err(Error::SymbolCheck(format!(
            "the symbol surrounds or covers the excluded point (winding {wind} around \
             ξ); the peak construction needs ξ outside the image"
        )));
    }

    let arc_radius = std::f64::consts::SQRT_2 * (1.0 - t) / (1.0 + t * t).sqrt();
    let geometry_ok = arc_radius < 0.5 && arc_radius <= image_distance;

    // Peak map: rotate ξ to 1, pull toward −1 via the half-plane scaling,
    // rotate back. Fixes ±ξ; everything else drifts toward −ξ.
    let rot = Moebius {
        a: xi,
        b: C64::zero(),
        c: C64::zero(),
        d: C64::one(),
    };
    let eta = special(Special::Eta);
    let pull = eta
        .inverse()
        .compose(&special(Special::SigmaT(t)))
        .compose(&eta);
    let tau = rot.compose(&pull).compose(&rot.inverse());
    if (tau.apply(-xi) + xi).norm() > 1e-9 {
        return Err(Error::Numerics(
            "internal check failed: the peak map does not fix −ξ".into(),
        ));
    }

    let f = {
        let base = tau.taylor(n - 1)?;
        let mut coeffs = base.coeffs().to_vec();
        coeffs[0] += xi;
        TruncatedSeries::from_coeffs(coeffs)
    };
    let h = f.compose_poly(g, n - 1)?;
    let measured_sup = h.boundary_sup(MODULUS_SAMPLES);

    // The floor is taken over exactly the columns the family spans: the
    // coefficient bulk of the j-th power of the peak map sits near degree
    // j·(1+r)/(1−r) (r the pull parameter), so columns beyond k_max would
    // leak mass past the stored rows and certify nothing.
    let section = mobius_composition_section(&tau, w, n)?;
    let lower_bound = smallest_sv(&section, k_max as usize + 1)?;

    let mut rows = Vec::with_capacity(k_max as usize);
    let mut hk = h.clone();
    let mut fk = f.clone();
    for k in 1..=k_max {
        if k > 1 {
            hk = hk.mul_mod(&h, n - 1);
            fk = fk.mul_mod(&f, n - 1);
        }
        rows.push(WitnessRow {
            k,
            norm_cf: weighted_norm(&hk, w),
            norm_f: weighted_norm(&fk, w),
        });
    }

    Ok(WitnessFamilyReport {
        rows,
        lower_bound,
        image_distance,
        arc_radius,
        geometry_ok,
        measured_sup,
    })
}

/// `ℓ²_β` norm of a truncated series: `√(Σ β_k² |c_k|²)`.
fn weighted_norm(f: &TruncatedSeries<C64>, w: &WeightSequence) -> f64 {
    let betas = w.betas(f.coeffs().len());
    f.coeffs()
        .iter()
        .zip(betas)
        .map(|(c, b)| b * b * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Families whose norm growth toward the boundary gets exponent-checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FitKind {
    /// Involutive automorphisms swapping 0 and `r`.
    NormC,
    /// Two-zero Blaschke products with zeros `{0, r}`.
    NormB,
    /// Hyperbolic pulls `(z + r)/(1 + rz)`.
    Hyperbolic,
}

/// Report of [`exponent_fit`]: measured slope against the predicted cap.
#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    /// Which family was measured.
    pub kind: FitKind,
    /// Label of the weight the sections were built on.
    pub weight: String,
    /// Predicted cap for the slope of `ln ‖·‖` against `−ln(1 − r)`.
    pub exponent: f64,
    /// Least-squares slope of the measured norms.
    pub slope: f64,
    /// Measured points `(r, ‖section‖)`.
    pub points: Vec<(f64, f64)>,
    /// `slope ≤ exponent + 0.25`.
    pub pass: bool,
    /// Scope caveat carried into every report.
    pub note: String,
}

/// Fit the norm-growth exponent of a one-parameter symbol family against its
/// predicted cap.
///
/// For each radius `r` in `grid` (at least four distinct values in `(0, 1)`)
/// the relevant section norm is measured at size `n`, and the slope of
/// `ln ‖·‖` against `−ln(1 − r)` is fitted by least squares. The predicted
/// cap depends on the weight's growth order `N`:
///
/// * [`FitKind::NormC`] and [`FitKind::Hyperbolic`]: `2N² + 3N + 2`;
/// * [`FitKind::NormB`]: `N(N + 1)`.
///
/// The fit validates the exponent only — the multiplicative constant in
/// front of the growth is deliberately not checked, and every report says
/// so.
pub fn exponent_fit(
    kind: FitKind,
    w: &WeightSequence,
    grid: &[f64],
    n: usize,
) -> Result<FitReport> {
    if grid.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "an exponent fit needs at least four radii, got {}",
            grid.len()
        )));
    }
    for &r in grid {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "fit radius {r} lies outside (0, 1)"
            )));
        }
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return Err(Error::InvalidParameter(
            "fit radii must be pairwise distinct".into(),
        ));
    }

    let order = growth_order(w)?;
    let exponent = match kind {
        FitKind::NormC | FitKind::Hyperbolic => 2.0 * order * order + 3.0 * order + 2.0,
        FitKind::NormB => order * (order + 1.0),
    };

    let mut points = Vec::with_capacity(grid.len());
    for &r in grid {
        let sigma = match kind {
            FitKind::NormC => {
                let m = crate::moebius::disk_automorphism(0.0, C64::new(r, 0.0))?;
                op_norm(&mobius_composition_section(&m, w, n)?)?
            }
            FitKind::Hyperbolic => {
                let m = Moebius {
                    a: C64::one(),
                    b: C64::new(r, 0.0),
                    c: C64::new(r, 0.0),
                    d: C64::one(),
                };
                op_norm(&mobius_composition_section(&m, w, n)?)?
            }
            FitKind::NormB => {
                let b = blaschke_taylor(&[C64::zero(), C64::new(r, 0.0)], 0.0, n - 1)?;
                op_norm(&composition_section(&b, w, n)?)?
            }
        };
        points.push((r, sigma));
    }

    let xs: Vec<f64> = points.iter().map(|&(r, _)| -(1.0 - r).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, s)| s.ln()).collect();
    let x_bar = xs.iter().sum::<f64>() / xs.len() as f64;
    let y_bar = ys.iter().sum::<f64>() / ys.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - x_bar) * (y - y_bar);
        den += (x - x_bar) * (x - x_bar);
    }
    let slope = num / den;

    Ok(FitReport {
        kind,
        weight: w.label().to_string(),
        exponent,
        slope,
        points,
        pass: slope <= exponent + SLOPE_MARGIN,
        note: "the fit validates only the growth exponent; the multiplicative constant \
               is not checked"
            .to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{crat, rat};
    use crate::moebius::{disk_automorphism, psi1_exact};
    use approx::assert_relative_eq;

    #[test]
    fn alternating_difference_witness_has_a_positive_floor() {
        let (s1, floor1) = parabolic_witness(1).unwrap();
        assert_eq!(s1, rat(12, 5));
        assert_eq!(floor1, rat(2, 5));
        for m in 1..=12 {
            let (s, floor) = parabolic_witness(m).unwrap();
            assert!(s >= floor, "m = {m}: {s} < {floor}");
            assert!(s > Rat::zero());
        }
        assert!(parabolic_witness(0).is_err());
    }

    #[test]
    fn boundary_translation_orbit_matches_the_exact_iterates() {
        assert_eq!(boundary_translation_orbit(0), CRat::zero());
        assert_eq!(boundary_translation_orbit(3), crat(9, 10, 3, 10));
        let psi1 = psi1_exact();
        for k in [-5i64, -1, 1, 2, 7] {
            let expected = psi1.iterate(k).apply(CRat::zero());
            assert_eq!(boundary_translation_orbit(k), expected, "k = {k}");
        }
    }

    #[test]
    fn rotation_by_i_models_as_the_fourth_roots_of_unity() {
        let m = Moebius {
            a: C64::i(),
            b: C64::zero(),
            c: C64::zero(),
            d: C64::one(),
        };
        let model = spectrum_model(&m, &WeightSequence::hardy()).unwrap();
        match model.kind {
            SpectrumKind::FiniteCyclic(points) => {
                let expected = [C64::one(), C64::i(), -C64::one(), -C64::i()];
                assert_eq!(points.len(), expected.len());
                for (p, e) in points.iter().zip(expected) {
                    assert!((p - e).norm() < 1e-12, "{p} vs {e}");
                }
            }
            other => panic!("expected finitely many points, got {other:?}"),
        }
    }

    #[test]
    fn generic_rotation_models_as_the_full_circle() {
        // One radian is far from every root-of-unity angle of order ≤ 10⁶.
        let m = Moebius {
            a: C64::from_polar(1.0, 1.0),
            b: C64::zero(),
            c: C64::zero(),
            d: C64::one(),
        };
        let model = spectrum_model(&m, &WeightSequence::hardy()).unwrap();
        assert_eq!(model.kind, SpectrumKind::UnitCircle);
        assert!(!model.provenance.is_empty());
    }

    #[test]
    fn parabolic_symbol_models_as_the_unit_circle() {
        let model =
            spectrum_model(&special(Special::Psi1), &WeightSequence::hardy()).unwrap();
        assert_eq!(model.kind, SpectrumKind::UnitCircle);
    }

    #[test]
    fn hyperbolic_pull_models_as_an_annulus_scaling_with_growth_order() {
        let m = Moebius {
            a: C64::one(),
            b: C64::new(0.5, 0.0),
            c: C64::new(0.5, 0.0),
            d: C64::one(),
        };
        // Multiplier 1/3 at the attracting fixed point; order-0 weight gives
        // the exponent 2.
        let model = spectrum_model(&m, &WeightSequence::hardy()).unwrap();
        match model.kind {
            SpectrumKind::Annulus { r_in, r_out } => {
                assert_relative_eq!(r_in, 1.0 / 9.0, max_relative = 1e-9);
                assert_relative_eq!(r_out, 9.0, max_relative = 1e-9);
            }
            other => panic!("expected an annulus, got {other:?}"),
        }
        // Growth order 1 lifts the exponent to 7.
        let dir = WeightSequence::dirichlet(1.0).unwrap();
        match spectrum_model(&m, &dir).unwrap().kind {
            SpectrumKind::Annulus { r_in, r_out } => {
                assert_relative_eq!(r_in, 3f64.powi(-7), max_relative = 1e-9);
                assert_relative_eq!(r_out, 3f64.powi(7), max_relative = 1e-9);
            }
            other => panic!("expected an annulus, got {other:?}"),
        }
        // The model is a conjugacy invariant: moving the fixed points off
        // the real axis does not change the radii.
        let rho = disk_automorphism(0.3, C64::new(0.2, -0.1)).unwrap();
        let conj = rho.compose(&m).compose(&rho.inverse());
        match spectrum_model(&conj, &WeightSequence::hardy()).unwrap().kind {
            SpectrumKind::Annulus { r_in, r_out } => {
                assert_relative_eq!(r_in, 1.0 / 9.0, max_relative = 1e-6);
                assert_relative_eq!(r_out, 9.0, max_relative = 1e-6);
            }
            other => panic!("expected an annulus, got {other:?}"),
        }
    }

    #[test]
    fn spectral_radius_sequence_is_flat_for_rotations() {
        let rot = Moebius {
            a: C64::from_polar(1.0, 0.7),
            b: C64::zero(),
            c: C64::zero(),
            d: C64::one(),
        };
        let w = WeightSequence::dn1(2);
        for (j, r) in spectral_radius_sequence(&rot, &w, 6, 48).unwrap() {
            assert!((r - 1.0).abs() < 1e-12, "j = {j}: {r}");
        }
        // Composition sections fix the constant function, so no root dips
        // below 1 even for the parabolic.
        let psi1 = special(Special::Psi1);
        let seq = spectral_radius_sequence(&psi1, &WeightSequence::hardy(), 6, 48).unwrap();
        for (j, r) in seq {
            assert!(r >= 1.0 - 1e-12, "j = {j}: {r}");
        }
        assert!(spectral_radius_sequence(&rot, &w, 0, 48).is_err());
    }

    #[test]
    fn fredholm_verdicts_separate_the_model_symbols() {
        let w = WeightSequence::hardy();
        let tol = 1e-8;

        let auto = disk_automorphism(0.0, C64::new(0.5, 0.0))
            .unwrap()
            .taylor(256)
            .unwrap();
        let v = fredholm_verdict(&auto, &w, tol).unwrap();
        assert_eq!(v.status, FredholmStatus::Fredholm);
        assert_eq!(v.evidence.winding, Some(1));
        assert!(v.evidence.automorphism_check);
        assert!(v.evidence.boundary_modulus <= tol + 1e-12);

        let blaschke =
            blaschke_taylor(&[C64::zero(), C64::new(0.5, 0.0)], 0.0, 256).unwrap();
        let v = fredholm_verdict(&blaschke, &w, tol).unwrap();
        assert_eq!(v.status, FredholmStatus::SemiFredholm(2));
        assert_eq!(v.evidence.winding, Some(2));
        assert!(!v.evidence.automorphism_check);

        let half_shift = TruncatedSeries::from_coeffs(vec![
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
        ]);
        let v = fredholm_verdict(&half_shift, &w, tol).unwrap();
        assert_eq!(v.status, FredholmStatus::NotClosedRange);
        assert_eq!(v.evidence.winding, None);
        assert!((v.evidence.boundary_modulus - 1.0).abs() < 1e-8);

        let half_z =
            TruncatedSeries::from_coeffs(vec![C64::zero(), C64::new(0.5, 0.0)]);
        let v = fredholm_verdict(&half_z, &w, tol).unwrap();
        assert_eq!(v.status, FredholmStatus::NotClosedRange);
        assert_relative_eq!(v.evidence.boundary_modulus, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn fredholm_requires_an_analytic_margin_and_a_sane_tolerance() {
        let w = WeightSequence::hardy();
        // Coefficients with ratio 1 decay like radius exactly 1: refused.
        let flat = TruncatedSeries::from_coeffs(vec![C64::new(0.01, 0.0); 64]);
        let err = fredholm_verdict(&flat, &w, 1e-8).unwrap_err();
        assert!(matches!(err, Error::SymbolCheck(_)), "{err}");

        let half_z =
            TruncatedSeries::from_coeffs(vec![C64::zero(), C64::new(0.5, 0.0)]);
        assert!(fredholm_verdict(&half_z, &w, -1.0).is_err());
    }

    #[test]
    fn witness_family_tracks_the_certified_floor() {
        let g = TruncatedSeries::from_coeffs(vec![C64::zero(), C64::new(0.5, 0.0)]);
        let xi = C64::one();
        let w = WeightSequence::hardy();
        let report = cr_witness_family(&g, xi, 0.5, 12, &w, 128).unwrap();

        // t = 1/2 gives an arc radius √2/2·(1/√1.25) ≈ 0.632: too blunt for
        // the guaranteed regime, although the decay still shows.
        assert!(!report.geometry_ok);
        assert_relative_eq!(report.arc_radius, 0.6324555320336759, max_relative = 1e-12);
        assert_relative_eq!(report.image_distance, 0.5, max_relative = 1e-9);
        assert!(report.measured_sup > 0.45 && report.measured_sup < 0.55);
        assert!(report.lower_bound > 0.25 && report.lower_bound < 1.01);

        assert_eq!(report.rows.len(), 12);
        for row in &report.rows {
            assert!(
                row.norm_f >= report.lower_bound - 1e-9,
                "k = {}: {} < {}",
                row.k,
                row.norm_f,
                report.lower_bound
            );
            if row.k >= 8 {
                let rate = row.norm_cf.powf(1.0 / f64::from(row.k));
                assert!(rate <= 0.95, "k = {}: rate {rate}", row.k);
            }
        }
    }

    #[test]
    fn witness_family_rejects_bad_geometry() {
        let g = TruncatedSeries::from_coeffs(vec![C64::zero(), C64::new(0.5, 0.0)]);
        let w = WeightSequence::hardy();
        // ξ off the circle.
        assert!(cr_witness_family(&g, C64::new(0.5, 0.0), 0.5, 8, &w, 128).is_err());
        // Sharpness out of range.
        assert!(cr_witness_family(&g, C64::one(), 1.2, 8, &w, 128).is_err());
        // Too many powers for the floor's column budget.
        assert!(cr_witness_family(&g, C64::one(), 0.5, 40, &w, 128).is_err());
        // The identity symbol passes through every boundary point.
        let ident = TruncatedSeries::from_coeffs(vec![C64::zero(), C64::one()]);
        let err = cr_witness_family(&ident, C64::one(), 0.5, 8, &w, 128).unwrap_err();
        assert!(matches!(err, Error::SymbolCheck(_)), "{err}");
    }

    #[test]
    fn norm_growth_fits_respect_the_predicted_exponents() {
        let grid = [0.3, 0.45, 0.6, 0.75];
        let hardy = WeightSequence::hardy();

        let rep = exponent_fit(FitKind::NormC, &hardy, &grid, 128).unwrap();
        assert_eq!(rep.exponent, 2.0);
        assert!(rep.pass, "slope {}", rep.slope);
        assert!(rep.slope > 0.2 && rep.slope < 1.0, "slope {}", rep.slope);
        assert_eq!(rep.points.len(), 4);

        // Blaschke products with a zero at the origin keep unit norm on the
        // unweighted space: the slope hugs 0 and the cap is 0.
        let rep = exponent_fit(FitKind::NormB, &hardy, &grid, 96).unwrap();
        assert_eq!(rep.exponent, 0.0);
        assert!(rep.slope.abs() <= SLOPE_MARGIN, "slope {}", rep.slope);
        assert!(rep.pass);

        let rep = exponent_fit(FitKind::Hyperbolic, &hardy, &grid, 96).unwrap();
        assert!(rep.pass, "slope {}", rep.slope);

        assert!(exponent_fit(FitKind::NormC, &hardy, &[0.3, 0.4, 0.5], 64).is_err());
        assert!(
            exponent_fit(FitKind::NormC, &hardy, &[0.3, 0.4, 0.4, 0.5], 64).is_err()
        );
        assert!(
            exponent_fit(FitKind::NormC, &hardy, &[0.3, 0.4, 0.5, 1.5], 64).is_err()
        );
    }
}
