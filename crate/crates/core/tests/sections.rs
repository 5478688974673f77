//! Cross-module integration checks: sections respect the composition
//! functor, model spectra are conjugation invariants, range verdicts ignore
//! rotations, and the two norm estimators validate each other above the
//! dense cutoff.

use approx::assert_relative_eq;
use compop::analysis::{
    cr_witness_family, fredholm_verdict, spectrum_model, FredholmStatus, SpectrumKind,
};
use compop::moebius::{disk_automorphism, special, MapKind, Moebius, Special};
use compop::operators::{
    composition_section, eigenvalues, mobius_composition_section, op_norm, OperatorMatrix,
};
use compop::series::{blaschke_taylor, TruncatedSeries};
use compop::weights::WeightSequence;
use compop::C64;

/// `g(e^{iθ}z)` from the coefficients of `g`.
fn rotate_symbol(g: &TruncatedSeries<C64>, theta: f64) -> TruncatedSeries<C64> {
    let coeffs = g
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * C64::from_polar(1.0, theta * k as f64))
        .collect();
    TruncatedSeries::from_coeffs(coeffs)
}

#[test]
fn moebius_sections_compose_contravariantly_in_the_interior() {
    let phi = disk_automorphism(0.3, C64::new(0.2, 0.0)).unwrap();
    let psi = disk_automorphism(-0.5, C64::new(0.0, 0.3)).unwrap();
    let composed = phi.compose(&psi);
    let n = 512;
    let m = 32;

    for w in [WeightSequence::hardy(), WeightSequence::dirichlet(1.0).unwrap()] {
        let lhs = mobius_composition_section(&composed, &w, n).unwrap();
        let s_psi = mobius_composition_section(&psi, &w, n).unwrap();
        let s_phi = mobius_composition_section(&phi, &w, n).unwrap();
        let product = s_psi.entries.dot(&s_phi.entries);

        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                worst = worst.max((lhs.entries[[i, j]] - product[[i, j]]).norm());
            }
        }
        assert!(
            worst < 1e-8,
            "interior block residual {worst:.3e} on weight '{}'",
            w.label()
        );
    }
}

#[test]
fn spectrum_model_is_a_conjugation_invariant() {
    let w = WeightSequence::hardy();

    // Elliptic: a fifth-root rotation conjugated to a different fixed point
    // keeps the same five spectrum points.
    let angle = 2.0 * std::f64::consts::PI / 5.0;
    let rot = Moebius {
        a: C64::from_polar(1.0, angle),
        b: C64::new(0.0, 0.0),
        c: C64::new(0.0, 0.0),
        d: C64::new(1.0, 0.0),
    };
    let tau = disk_automorphism(0.0, C64::new(0.3, 0.1)).unwrap();
    let conj = tau.inverse().compose(&rot).compose(&tau);
    assert_eq!(conj.classify(1e-9).unwrap().kind, MapKind::Elliptic);

    let base = spectrum_model(&rot, &w).unwrap();
    let moved = spectrum_model(&conj, &w).unwrap();
    match (base.kind, moved.kind) {
        (SpectrumKind::FiniteCyclic(mut xs), SpectrumKind::FiniteCyclic(mut ys)) => {
            assert_eq!(xs.len(), 5);
            assert_eq!(ys.len(), 5);
            xs.sort_by(|p, q| p.arg().total_cmp(&q.arg()));
            ys.sort_by(|p, q| p.arg().total_cmp(&q.arg()));
            for (x, y) in xs.iter().zip(&ys) {
                assert!((x - y).norm() <= 1e-9, "roots differ: {x} vs {y}");
            }
        }
        other => panic!("expected two cyclic models, got {other:?}"),
    }

    // Hyperbolic: conjugating by a rotation moves the fixed points but not
    // the multiplier, so the annulus radii agree.
    let hyp = Moebius {
        a: C64::new(1.0, 0.0),
        b: C64::new(0.5, 0.0),
        c: C64::new(0.5, 0.0),
        d: C64::new(1.0, 0.0),
    };
    let rho = disk_automorphism(1.1, C64::new(0.0, 0.0)).unwrap();
    let moved_hyp = rho.inverse().compose(&hyp).compose(&rho);
    let base = spectrum_model(&hyp, &w).unwrap();
    let moved = spectrum_model(&moved_hyp, &w).unwrap();
    match (base.kind, moved.kind) {
        (
            SpectrumKind::Annulus { r_in: a_in, r_out: a_out },
            SpectrumKind::Annulus { r_in: b_in, r_out: b_out },
        ) => {
            assert_relative_eq!(a_in, b_in, max_relative = 1e-9);
            assert_relative_eq!(a_out, b_out, max_relative = 1e-9);
        }
        other => panic!("expected two annulus models, got {other:?}"),
    }
}

#[test]
fn range_verdicts_ignore_symbol_rotations() {
    let w = WeightSequence::hardy();
    let tol = 1e-6;
    let n = 256;
    let theta = 0.7;

    let automorphism =
        disk_automorphism(0.0, C64::new(0.5, 0.0)).unwrap().taylor(n - 1).unwrap();
    let product = blaschke_taylor(&[C64::new(0.0, 0.0), C64::new(0.5, 0.0)], 0.0, n - 1).unwrap();
    let affine = TruncatedSeries::from_coeffs(vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)]);

    for (g, expected) in [
        (automorphism, FredholmStatus::Fredholm),
        (product, FredholmStatus::SemiFredholm(2)),
        (affine, FredholmStatus::NotClosedRange),
    ] {
        let plain = fredholm_verdict(&g, &w, tol).unwrap();
        let rotated = fredholm_verdict(&rotate_symbol(&g, theta), &w, tol).unwrap();
        assert_eq!(plain.status, expected);
        assert_eq!(rotated.status, expected, "rotation changed the verdict");
    }
}

#[test]
fn parabolic_iterates_classify_parabolically() {
    let p = special(Special::Psi1);
    for n in 1..=20i64 {
        let class = p.iterate(n).classify(1e-9).unwrap();
        assert_eq!(class.kind, MapKind::Parabolic, "iterate {n}");
    }
}

#[test]
fn power_estimate_matches_dense_eigensolver_above_the_cutoff() {
    // At a size above the dense norm cutoff, validate the iterative largest
    // singular value against an independent dense eigensolver applied to the
    // normal-equations matrix.
    let n = 600;
    let w = WeightSequence::hardy();
    let m = disk_automorphism(0.0, C64::new(0.3, 0.0)).unwrap();
    let section = mobius_composition_section(&m, &w, n).unwrap();

    let sigma = op_norm(&section).unwrap();

    let adjoint = section.entries.t().mapv(|z| z.conj());
    let gram = OperatorMatrix {
        entries: adjoint.dot(&section.entries),
        ..section.clone()
    };
    let top = eigenvalues(&gram).unwrap()[0].re.max(0.0).sqrt();

    assert_relative_eq!(sigma, top, max_relative = 1e-8);
}

#[test]
fn witness_geometry_fields_match_closed_forms() {
    let g = TruncatedSeries::from_coeffs(vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0)]);
    let t = 0.5;
    let report =
        cr_witness_family(&g, C64::new(1.0, 0.0), t, 10, &WeightSequence::hardy(), 256).unwrap();

    // The image of the disk under z/2 is the half-radius disk: its distance
    // to the excluded point 1 is exactly 1/2.
    assert_relative_eq!(report.image_distance, 0.5, epsilon = 1e-9);
    // The escape-arc radius has the closed form √2·(1−t)/√(1+t²).
    let expected = std::f64::consts::SQRT_2 * (1.0 - t) / (1.0 + t * t).sqrt();
    assert_relative_eq!(report.arc_radius, expected, epsilon = 1e-12);
    // At t = 1/2 the arc is still too wide for the guaranteed regime…
    assert!(!report.geometry_ok);
    // The pullback peak stays strictly inside the disk.
    assert!(report.measured_sup < 1.0);

    // …while a sharper peak shrinks the arc below both thresholds.
    let sharp =
        cr_witness_family(&g, C64::new(1.0, 0.0), 0.8, 10, &WeightSequence::hardy(), 256).unwrap();
    assert!(sharp.arc_radius < 0.5 && sharp.arc_radius <= sharp.image_distance);
    assert!(sharp.geometry_ok);
}

#[test]
fn witness_rejects_excluded_points_the_symbol_reaches() {
    // ξ = 0.2 lies inside the image of the disk under z/2, so the winding
    // check must refuse to certify the family.
    let g = TruncatedSeries::from_coeffs(vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0)]);
    let err = cr_witness_family(&g, C64::new(0.2, 0.0), 0.5, 10, &WeightSequence::hardy(), 256);
    assert!(err.is_err(), "an excluded point inside the image must be rejected");
}

#[test]
fn composition_sections_reject_expanding_polynomials() {
    // Σ|coeffs| > 1 with boundary values leaving the closed disk.
    let g = TruncatedSeries::from_coeffs(vec![C64::new(0.9, 0.0), C64::new(0.4, 0.0)]);
    assert!(composition_section(&g, &WeightSequence::hardy(), 32).is_err());
}
