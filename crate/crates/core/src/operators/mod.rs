//! Finite sections of operators on weighted Hardy spaces.
//!
//! Sections are built in the orthonormal basis `e_k = z^k/β_k` of the
//! weighted space: a size-`n` section covers the monomials `z^0..z^{n-1}`,
//! and every entry is `(β_i/β_j)` times the monomial-basis entry. Section
//! norms are therefore genuine lower bounds for the operator norms and are
//! nondecreasing in `n` (compression monotonicity).
//!
//! The module provides composition, multiplication, transformation, Gram,
//! diagonal, and paired-diagonal sections, plus the residual verification of
//! the paired-family transfer identity ([`verify::verify_f2`]) and a suite of
//! norm-inequality checks ([`bounds`]).

pub mod bounds;
pub mod linalg;
pub mod verify;

pub use bounds::{check_bounds, run_default_suite, BoundReport};
pub use linalg::{eigenvalues, op_norm, smallest_sv};
pub use verify::{verify_f2, verify_f2_exact, F2Report};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::moebius::Moebius;
use crate::series::TruncatedSeries;
use crate::weights::{diagonal_entries, DiagonalKind, WeightSequence};
use crate::C64;

/// Tolerance when deciding whether a symbol maps the disk into its closure.
pub const SELF_MAP_TOL: f64 = 1e-6;

/// Sample count for boundary checks of symbols.
const BOUNDARY_SAMPLES: usize = 512;

/// What kind of section a matrix holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SectionKind {
    Diagonal,
    Composition,
    Multiplication,
    Transformation,
    Gram,
    /// Block-diagonal with 2×2 blocks on consecutive index pairs.
    PairDiagonal,
}

/// Construction descriptor carried by every section.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SectionMeta {
    /// Human-readable symbol description.
    pub symbol: String,
    pub kind: SectionKind,
    /// Truncation size: the section covers monomial indices `0..n-1`.
    pub n: usize,
}

/// A finite section together with the weighted basis it was built in.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub entries: Array2<C64>,
    pub basis: WeightSequence,
    pub meta: SectionMeta,
}

impl OperatorMatrix {
    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }
}

/// Check that `g` maps the disk into its closure, via the sup hint when the
/// constructor certified one, else by boundary sampling.
fn self_map_check(g: &TruncatedSeries<C64>) -> Result<()> {
    let sup = g.sup_hint.unwrap_or_else(|| g.boundary_sup(BOUNDARY_SAMPLES));
    if sup <= 1.0 + SELF_MAP_TOL {
        Ok(())
    } else {
        Err(Error::SymbolCheck(format!(
            "composition symbol has boundary sup {sup:.6} > 1; it does not map the disk into its closure"
        )))
    }
}

/// Diagonal section of one of the standard diagonal operators.
pub fn diagonal_section(kind: DiagonalKind, w: &WeightSequence, n: usize) -> OperatorMatrix {
    let d = diagonal_entries(kind, w, n);
    let mut entries = Array2::zeros((n, n));
    for (k, v) in d.iter().enumerate() {
        entries[[k, k]] = C64::new(*v, 0.0);
    }
    OperatorMatrix {
        entries,
        basis: w.clone(),
        meta: SectionMeta { symbol: format!("{kind:?}"), kind: SectionKind::Diagonal, n },
    }
}

/// Composition section: column `j` holds the coefficients of `g^j`, scaled to
/// the orthonormal basis — entry `(i, j) = (β_i/β_j)·ĝ^j(i)`.
///
/// The symbol must map the disk into its closure (boundary check). Powers are
/// computed by successive truncated products, which is exact through all
/// indices `< n` because series products depend lower-triangularly on the
/// factors' coefficients.
pub fn composition_section(
    g: &TruncatedSeries<C64>,
    w: &WeightSequence,
    n: usize,
) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("section size must be positive".into()));
    }
    self_map_check(g)?;
    let betas = w.betas(n);
    let g = g.resized(n - 1);
    let mut entries = Array2::zeros((n, n));
    let mut power = TruncatedSeries::one(n - 1);
    for j in 0..n {
        for i in 0..n {
            let c = power.coeff(i);
            if c != C64::new(0.0, 0.0) {
                entries[[i, j]] = c * (betas[i] / betas[j]);
            }
        }
        if j + 1 < n {
            power = power.mul_mod(&g, n - 1);
        }
    }
    Ok(OperatorMatrix {
        entries,
        basis: w.clone(),
        meta: SectionMeta { symbol: "composition".into(), kind: SectionKind::Composition, n },
    })
}

/// Composition section of a Möbius symbol via the column recurrence: column
/// `j+1` is obtained from column `j` by multiplying with the numerator
/// `b + az` and dividing by the denominator `d + cz` — `O(n)` per column, and
/// exact (no drift) when the division is trivial, e.g. for `z ↦ λz`.
///
/// Requires the pole outside the closed disk and the image inside its
/// closure.
pub fn mobius_composition_section(
    m: &Moebius<C64>,
    w: &WeightSequence,
    n: usize,
) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("section size must be positive".into()));
    }
    if m.c.norm() > 0.0 && m.d.norm() <= m.c.norm() {
        return Err(Error::SymbolCheck(
            "composition symbol has its pole in the closed disk".into(),
        ));
    }
    let sup = (0..BOUNDARY_SAMPLES)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / BOUNDARY_SAMPLES as f64;
            m.apply(C64::from_polar(1.0, t)).norm()
        })
        .fold(0.0, f64::max);
    if sup > 1.0 + SELF_MAP_TOL {
        return Err(Error::SymbolCheck(format!(
            "composition symbol has boundary sup {sup:.6} > 1"
        )));
    }
    let betas = w.betas(n);
    let trivial_den = m.c == C64::new(0.0, 0.0) && m.d == C64::new(1.0, 0.0);
    let mut entries = Array2::zeros((n, n));
    let mut col = vec![C64::new(0.0, 0.0); n];
    col[0] = C64::new(1.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            if col[i] != C64::new(0.0, 0.0) {
                entries[[i, j]] = col[i] * (betas[i] / betas[j]);
            }
        }
        if j + 1 < n {
            // Multiply by the numerator b + a z …
            let mut t = vec![C64::new(0.0, 0.0); n];
            for k in 0..n {
                let mut v = m.b * col[k];
                if k > 0 {
                    v += m.a * col[k - 1];
                }
                t[k] = v;
            }
            // … and divide by the denominator d + c z.
            if trivial_den {
                col = t;
            } else {
                col[0] = t[0] / m.d;
                for k in 1..n {
                    col[k] = (t[k] - m.c * col[k - 1]) / m.d;
                }
            }
        }
    }
    Ok(OperatorMatrix {
        entries,
        basis: w.clone(),
        meta: SectionMeta { symbol: "composition".into(), kind: SectionKind::Composition, n },
    })
}

/// Multiplication section: entry `(i, j) = (β_i/β_j)·ĝ(i−j)` for `i ≥ j`,
/// zero above the diagonal (analytic symbols are lower triangular in the
/// monomial ordering).
pub fn multiplication_section(
    g: &TruncatedSeries<C64>,
    w: &WeightSequence,
    n: usize,
) -> OperatorMatrix {
    let betas = w.betas(n);
    let entries = Array2::from_shape_fn((n, n), |(i, j)| {
        if i >= j {
            let c = g.coeff(i - j);
            if c == C64::new(0.0, 0.0) { c } else { c * (betas[i] / betas[j]) }
        } else {
            C64::new(0.0, 0.0)
        }
    });
    OperatorMatrix {
        entries,
        basis: w.clone(),
        meta: SectionMeta { symbol: "multiplication".into(), kind: SectionKind::Multiplication, n },
    }
}

fn check_family(fs: &[TruncatedSeries<C64>], n: usize) -> Result<()> {
    if fs.is_empty() {
        return Err(Error::InvalidParameter("function family must be nonempty".into()));
    }
    if fs.len() > n {
        return Err(Error::InvalidParameter(format!(
            "family has {} members but the section only covers {} monomials",
            fs.len(),
            n
        )));
    }
    let d0 = fs[0].degree_bound();
    if fs.iter().any(|f| f.degree_bound() != d0) {
        return Err(Error::InvalidParameter(
            "ragged coefficient data: family members have different truncation degrees".into(),
        ));
    }
    Ok(())
}

/// Transformation section: the operator sending `z^j ↦ f_j`. Column `j`
/// holds `f_j`'s monomial coefficients, scaled as `(β_i/β_j)·f̂_j(i)`.
/// Rectangular `n × len(fs)`.
pub fn transformation_section(
    fs: &[TruncatedSeries<C64>],
    w: &WeightSequence,
    n: usize,
) -> Result<OperatorMatrix> {
    check_family(fs, n)?;
    let betas = w.betas(n);
    let entries = Array2::from_shape_fn((n, fs.len()), |(i, j)| {
        let c = fs[j].coeff(i);
        if c == C64::new(0.0, 0.0) { c } else { c * (betas[i] / betas[j]) }
    });
    Ok(OperatorMatrix {
        entries,
        basis: w.clone(),
        meta: SectionMeta { symbol: "transformation".into(), kind: SectionKind::Transformation, n },
    })
}

/// Gram section of a function family in the weighted inner product: entry
/// `(i, j) = Σ_{k<n} β_k²·f̂_j(k)·conj(f̂_i(k))`, i.e. `⟨f_j, f_i⟩` truncated
/// at the section size. Square `len(fs) × len(fs)`, Hermitian positive
/// semidefinite.
pub fn gram_section(
    fs: &[TruncatedSeries<C64>],
    w: &WeightSequence,
    n: usize,
) -> Result<OperatorMatrix> {
    check_family(fs, n)?;
    let betas = w.betas(n);
    // S[k, j] = β_k f̂_j(k); then G = Sᴴ S.
    let s = Array2::from_shape_fn((n, fs.len()), |(k, j)| fs[j].coeff(k) * betas[k]);
    let sc = s.mapv(|z| z.conj());
    let entries = sc.t().dot(&s);
    Ok(OperatorMatrix {
        entries,
        basis: w.clone(),
        meta: SectionMeta { symbol: "gram".into(), kind: SectionKind::Gram, n },
    })
}

/// Paired-diagonal transfer section: block-diagonal with 2×2 blocks on index
/// pairs `(2k, 2k+1)`, where block `k` is
/// `[[1, z0/w_{2k+1}], [w_{2k+1}·conj(z0), 1]]`.
///
/// This is exactly the value of the conjugated paired-family product — see
/// [`verify::verify_f2`], whose residual against this section vanishes with
/// growing truncation (and exactly, in rational arithmetic, as the truncation
/// tail is removed).
pub fn dtm_section(w: &WeightSequence, z0: C64, n: usize) -> Result<OperatorMatrix> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("pair-diagonal section needs even positive size, got {n}")));
    }
    if !(z0.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("|z0| must be < 1, got {}", z0.norm())));
    }
    let mut entries = Array2::zeros((n, n));
    for k in 0..n / 2 {
        let wk = w.w(2 * k + 1);
        entries[[2 * k, 2 * k]] = C64::new(1.0, 0.0);
        entries[[2 * k + 1, 2 * k + 1]] = C64::new(1.0, 0.0);
        entries[[2 * k, 2 * k + 1]] = z0 / wk;
        entries[[2 * k + 1, 2 * k]] = z0.conj() * wk;
    }
    Ok(OperatorMatrix {
        entries,
        basis: w.clone(),
        meta: SectionMeta { symbol: format!("pair transfer z0 = {z0}"), kind: SectionKind::PairDiagonal, n },
    })
}

/// Eigenvalues of `DᴴD` for one 2×2 transfer block with weight value `w_n`,
/// computed from the trace and determinant of the block (not from any
/// expanded eigenvalue formula): trace `T = 2 + (w² + w⁻²)|z0|²`,
/// determinant `(1 − |z0|²)²`. Returns `(larger, smaller)`.
pub fn dn_block_eigs(w_n: f64, z0: C64) -> Result<(f64, f64)> {
    if !(w_n > 0.0) {
        return Err(Error::InvalidParameter(format!("weight value must be positive, got {w_n}")));
    }
    if !(z0.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("|z0| must be < 1, got {}", z0.norm())));
    }
    let q = z0.norm_sqr();
    let trace = 2.0 + (w_n * w_n + 1.0 / (w_n * w_n)) * q;
    let det = (1.0 - q) * (1.0 - q);
    let disc = (trace * trace - 4.0 * det).max(0.0);
    let root = disc.sqrt();
    Ok(((trace + root) / 2.0, (trace - root) / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{blaschke_taylor, mobius_taylor};
    use crate::weights::WeightSequence;
    use approx::assert_abs_diff_eq;

    fn presets() -> Vec<WeightSequence> {
        vec![
            WeightSequence::hardy(),
            WeightSequence::dirichlet(1.0).unwrap(),
            WeightSequence::dn1(2),
            WeightSequence::dn2(2),
        ]
    }

    #[test]
    fn composition_of_identity_symbol_is_identity() {
        let g = TruncatedSeries::monomial(1, 8).with_hints(1.0, 1.0);
        for w in presets() {
            let a = composition_section(&g, &w, 8).unwrap();
            for i in 0..8 {
                for j in 0..8 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert_eq!(a.entries[[i, j]], C64::new(expect, 0.0), "{}", w.label());
                }
            }
        }
    }

    #[test]
    fn rotation_symbol_gives_exact_unimodular_diagonal() {
        // z ↦ iz: the section must be exactly diagonal with entries i^j.
        let m = Moebius { a: C64::i(), b: C64::new(0.0, 0.0), c: C64::new(0.0, 0.0), d: C64::new(1.0, 0.0) };
        for w in presets() {
            let a = mobius_composition_section(&m, &w, 16).unwrap();
            let mut expect = C64::new(1.0, 0.0);
            for j in 0..16 {
                for i in 0..16 {
                    if i == j {
                        assert_eq!(a.entries[[i, j]], expect, "diag {j} on {}", w.label());
                    } else {
                        assert_eq!(a.entries[[i, j]], C64::new(0.0, 0.0));
                    }
                }
                expect *= C64::i();
            }
        }
    }

    #[test]
    fn mobius_fast_path_matches_generic_composition() {
        let z0 = C64::new(0.4, 0.2);
        let m = crate::moebius::disk_automorphism(0.7, z0).unwrap();
        let g = mobius_taylor(z0, 0.7, 127).unwrap();
        let w = WeightSequence::dirichlet(1.0).unwrap();
        let fast = mobius_composition_section(&m, &w, 128).unwrap();
        let slow = composition_section(&g, &w, 128).unwrap();
        let dev = (&fast.entries - &slow.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12, "max deviation {dev}");
    }

    #[test]
    fn composition_rejects_expanding_symbols() {
        let g = TruncatedSeries::from_coeffs(vec![C64::new(0.0, 0.0), C64::new(1.5, 0.0)]);
        assert!(composition_section(&g, &WeightSequence::hardy(), 8).is_err());
        let m = Moebius {
            a: C64::new(1.5, 0.0),
            b: C64::new(0.0, 0.0),
            c: C64::new(0.0, 0.0),
            d: C64::new(1.0, 0.0),
        };
        assert!(mobius_composition_section(&m, &WeightSequence::hardy(), 8).is_err());
        // Pole inside the closed disk.
        let m = Moebius {
            a: C64::new(0.0, 0.0),
            b: C64::new(0.25, 0.0),
            c: C64::new(1.0, 0.0),
            d: C64::new(0.5, 0.0),
        };
        assert!(mobius_composition_section(&m, &WeightSequence::hardy(), 8).is_err());
    }

    #[test]
    fn multiplication_by_one_and_by_z() {
        let one = TruncatedSeries::one(4);
        let z = TruncatedSeries::monomial(1, 4);
        let w = WeightSequence::hardy();
        let a = multiplication_section(&one, &w, 5);
        let b = multiplication_section(&z, &w, 5);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(a.entries[[i, j]], if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
                let shift = if i == j + 1 { 1.0 } else { 0.0 };
                assert_eq!(b.entries[[i, j]], C64::new(shift, 0.0));
            }
        }
        // On a growing weight the shift is scaled by β_{j+1}/β_j = w_{j+1}.
        let d = WeightSequence::dn1(2);
        let bd = multiplication_section(&z, &d, 5);
        for j in 0..4 {
            assert_abs_diff_eq!(bd.entries[[j + 1, j]].re, d.w(j + 1), epsilon = 1e-14);
        }
    }

    #[test]
    fn shift_norm_on_dn1_2_is_bounded_by_three() {
        let z = TruncatedSeries::monomial(1, 255);
        let w = WeightSequence::dn1(2);
        let a = multiplication_section(&z, &w, 256);
        let norm = op_norm(&a).unwrap();
        assert!(norm <= 3.0 + 1e-9, "shift norm {norm}");
        // The sup of w_k is attained at k = 1 where w_1 = 3.
        assert!(norm > 2.999_999);
    }

    #[test]
    fn multiplication_sections_multiply() {
        let f = TruncatedSeries::from_coeffs(vec![
            C64::new(1.0, 0.0),
            C64::new(0.5, -0.25),
            C64::new(0.0, 0.125),
        ]);
        let g = TruncatedSeries::from_coeffs(vec![
            C64::new(0.25, 0.0),
            C64::new(-1.0, 0.5),
        ]);
        let w = WeightSequence::dirichlet(1.0).unwrap();
        let n = 32;
        let prod = multiplication_section(&f.mul_mod(&g, n - 1), &w, n);
        let sep = multiplication_section(&f, &w, n)
            .entries
            .dot(&multiplication_section(&g, &w, n).entries);
        let dev = (&prod.entries - &sep)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-13, "max deviation {dev}");
    }

    #[test]
    fn basis_covariance_of_composition_sections() {
        // Section = D_β · (monomial section) · D_β⁻¹ up to floating rounding
        // (the builder scales by the ratio β_i/β_j in one division).
        let g = mobius_taylor(C64::new(0.3, 0.1), 0.0, 31).unwrap();
        let w = WeightSequence::dn1(2);
        let n = 32;
        let a = composition_section(&g, &w, n).unwrap();
        let raw = composition_section(&g, &WeightSequence::hardy(), n).unwrap();
        let db = diagonal_section(DiagonalKind::Beta, &w, n);
        let dbi = diagonal_section(DiagonalKind::BetaInv, &w, n);
        let conj = db.entries.dot(&raw.entries).dot(&dbi.entries);
        for i in 0..n {
            for j in 0..n {
                let x = a.entries[[i, j]];
                let y = conj[[i, j]];
                assert!((x - y).norm() <= 1e-13 * (1.0 + x.norm()), "({i},{j}): {x} vs {y}");
            }
        }
    }

    #[test]
    fn gram_of_monomials_is_identity_on_hardy() {
        let fs: Vec<_> = (0..6).map(|k| TruncatedSeries::monomial(k, 15)).collect();
        let w = WeightSequence::hardy();
        let t = transformation_section(&fs, &w, 16).unwrap();
        let g = gram_section(&fs, &w, 16).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_eq!(t.entries[[i, j]], C64::new(expect, 0.0));
                assert_eq!(g.entries[[i, j]], C64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn gram_of_inner_function_powers_has_unit_diagonal() {
        let n = 64;
        let b = blaschke_taylor(&[C64::new(0.0, 0.0), C64::new(0.4, 0.0)], 0.0, n - 1).unwrap();
        let mut fs = Vec::new();
        let mut p = TruncatedSeries::one(n - 1);
        for _ in 0..8 {
            fs.push(p.clone());
            p = p.mul_mod(&b, n - 1);
        }
        let g = gram_section(&fs, &WeightSequence::hardy(), n).unwrap();
        for i in 0..8 {
            assert_abs_diff_eq!(g.entries[[i, i]].re, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(g.entries[[i, i]].im, 0.0, epsilon = 1e-14);
        }
        // Hermitian and positive semidefinite.
        for i in 0..8 {
            for j in 0..8 {
                let d = (g.entries[[i, j]] - g.entries[[j, i]].conj()).norm();
                assert!(d < 1e-12);
            }
        }
        let eigs = eigenvalues(&g).unwrap();
        for e in eigs {
            assert!(e.re > -1e-10, "negative eigenvalue {e}");
        }
    }

    #[test]
    fn ragged_families_are_rejected() {
        let fs = vec![TruncatedSeries::one(8), TruncatedSeries::one(9)];
        let w = WeightSequence::hardy();
        assert!(transformation_section(&fs, &w, 16).is_err());
        assert!(gram_section(&fs, &w, 16).is_err());
        assert!(gram_section(&[], &w, 16).is_err());
    }

    #[test]
    fn pair_transfer_block_structure() {
        let w = WeightSequence::dirichlet(1.0).unwrap();
        let z0 = C64::new(0.3, 0.1);
        let a = dtm_section(&w, z0, 8).unwrap();
        for k in 0..4 {
            let wk = w.w(2 * k + 1);
            assert_eq!(a.entries[[2 * k, 2 * k]], C64::new(1.0, 0.0));
            assert_eq!(a.entries[[2 * k, 2 * k + 1]], z0 / wk);
            assert_eq!(a.entries[[2 * k + 1, 2 * k]], z0.conj() * wk);
        }
        // Off-block entries vanish.
        assert_eq!(a.entries[[0, 2]], C64::new(0.0, 0.0));
        assert_eq!(a.entries[[1, 3]], C64::new(0.0, 0.0));
        assert!(dtm_section(&w, z0, 7).is_err());
        assert!(dtm_section(&w, C64::new(1.0, 0.0), 8).is_err());
    }

    #[test]
    fn pair_transfer_norm_matches_block_closed_form() {
        let w = WeightSequence::dn1(2);
        let z0 = C64::new(0.4, -0.2);
        let n = 64;
        let a = dtm_section(&w, z0, n).unwrap();
        let measured = op_norm(&a).unwrap();
        let mut expect: f64 = 0.0;
        for k in 0..n / 2 {
            let (hi, _) = dn_block_eigs(w.w(2 * k + 1), z0).unwrap();
            expect = expect.max(hi.sqrt());
        }
        assert_abs_diff_eq!(measured, expect, epsilon = 1e-12);
    }

    #[test]
    fn block_eigenvalues_closed_forms() {
        // w = 1, z0 = 0.5: trace 2.5 and determinant 0.5625 give {2.25, 0.25}
        // exactly in IEEE arithmetic.
        let (hi, lo) = dn_block_eigs(1.0, C64::new(0.5, 0.0)).unwrap();
        assert_eq!(hi, 2.25);
        assert_eq!(lo, 0.25);
        // z0 = 0: identity block.
        let (hi, lo) = dn_block_eigs(2.0, C64::new(0.0, 0.0)).unwrap();
        assert_eq!((hi, lo), (1.0, 1.0));
        // Product of the eigenvalues is the squared determinant (1 − |z0|²)².
        for (w, z0) in [(0.5, C64::new(0.2, 0.1)), (2.0, C64::new(-0.6, 0.3))] {
            let (hi, lo) = dn_block_eigs(w, z0).unwrap();
            let det = (1.0 - z0.norm_sqr()).powi(2);
            assert_abs_diff_eq!(hi * lo, det, epsilon = 1e-12);
        }
        assert!(dn_block_eigs(0.0, C64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn compression_norms_are_nondecreasing() {
        let g = mobius_taylor(C64::new(0.5, 0.0), 0.0, 255).unwrap();
        let w = WeightSequence::hardy();
        let mut prev = 0.0;
        for n in [32, 64, 128, 256] {
            let a = composition_section(&g, &w, n).unwrap();
            let s = op_norm(&a).unwrap();
            assert!(s >= prev - 1e-12, "norm dropped from {prev} to {s} at n = {n}");
            prev = s;
        }
        assert!(prev < 3.0f64.sqrt() + 1e-6);
    }
}
