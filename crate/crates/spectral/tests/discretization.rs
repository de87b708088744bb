mod common;

use std::f64::consts::PI;

use common::{model, model_with_values, rel};
use heatrace_core::potential::Potential;
use heatrace_core::{Boundary, PotentialSpec, PotentialTerm};
use heatrace_spectral::{
    discretize, CoefficientField, CoefficientProfile, DomainSpec, Eigenvectors, SpectralError,
};

#[test]
fn dirichlet_spectrum_matches_closed_form() {
    let n = 64;
    let domain = DomainSpec::interval(PI, n, 0.1);
    let m = model_with_values(&domain, vec![0.0; n], Eigenvectors::Discard);
    let h = PI / (n + 1) as f64;
    for (k, &l) in m.free_eigenvalues().iter().enumerate() {
        let want = 4.0 / (h * h) * ((k + 1) as f64 * h / 2.0).sin().powi(2);
        assert!(rel(l, want) < 1e-12, "k = {}: {l} vs {want}", k + 1);
    }
    assert!(m.free_eigenvalues().iter().all(|&l| l > 0.0));
}

#[test]
fn continuum_limit_is_second_order() {
    for n in [64, 128, 256] {
        let domain = DomainSpec::interval(PI, n, 0.1);
        let m = model_with_values(&domain, vec![0.0; n], Eigenvectors::Discard);
        let h = PI / (n + 1) as f64;
        for k in 1..=8 {
            let kk = (k * k) as f64;
            let err = (m.free_eigenvalues()[k - 1] - kk).abs() / kk;
            // 4/h² sin²(kh/2) = k²(1 - k²h²/12 + …), an alternating series
            assert!(err <= kk * h * h / 12.0 * (1.0 + 1e-6), "n = {n}, k = {k}");
            assert!(err >= kk * h * h / 12.0 * (1.0 - kk * h * h / 10.0));
        }
    }
}

#[test]
fn constant_potential_shifts_the_torus_spectrum() {
    let n = 48;
    let domain = DomainSpec::circle(2.0 * PI, n);
    let m = model_with_values(&domain, vec![0.75; n], Eigenvectors::Discard);
    assert!(m.free_eigenvalues()[0].abs() < 1e-12);
    for (l, lv) in m.free_eigenvalues().iter().zip(m.perturbed_eigenvalues()) {
        assert!((lv - l - 0.75).abs() < 1e-11);
    }
}

#[test]
fn operators_are_exactly_symmetric() {
    let a = CoefficientField {
        profile: CoefficientProfile::Smooth { base: 1.0, amplitude: 2.0, center: vec![1.5, 1.0], radius: 0.8 },
        mu: 3.0,
    };
    for boundary in [Boundary::Dirichlet, Boundary::Periodic] {
        let domain = DomainSpec { boundary, lengths: vec![3.0, 2.0], points: vec![20, 16], margin: 0.2 };
        let v = PotentialSpec {
            terms: vec![PotentialTerm::Bump { center: vec![1.5, 1.0], radius: 0.7, amplitude: 2.0 }],
        }
        .sample(&domain.grid::<f64>().unwrap(), 0.2)
        .unwrap();
        let m = discretize(&domain, &a, &v).unwrap();
        let op = m.perturbed_operator();
        assert_eq!(op, op.transpose());
        assert_eq!(m.free_eigenvalues().len(), 320);
        assert!(m.perturbed_eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn two_dimensional_box_separates() {
    // Eigenvalues of the rectangle are sums of the interval eigenvalues.
    let domain = DomainSpec { boundary: Boundary::Dirichlet, lengths: vec![2.0, 3.0], points: vec![16, 20], margin: 0.1 };
    let m = model_with_values(&domain, vec![0.0; 320], Eigenvectors::Discard);
    let axis = |l: f64, n: usize| -> Vec<f64> {
        let h = l / (n + 1) as f64;
        (1..=n).map(|k| 4.0 / (h * h) * (k as f64 * PI * h / (2.0 * l)).sin().powi(2)).collect()
    };
    let mut sums: Vec<f64> = axis(2.0, 16)
        .iter()
        .flat_map(|a| axis(3.0, 20).into_iter().map(move |b| a + b))
        .collect();
    sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (a, b) in m.free_eigenvalues().iter().zip(&sums) {
        assert!(rel(*a, *b) < 1e-11, "{a} vs {b}");
    }
}

#[test]
fn translation_on_the_torus_is_isospectral() {
    let domain = DomainSpec::circle(2.0 * PI, 128);
    let spec = PotentialSpec::bump_1d(2.0, 1.0, 1.5);
    let base = model(&domain, &spec, Eigenvectors::Discard);
    let moved = base.potential().shifted(&[37]).unwrap();
    let m2 = discretize(&domain, &CoefficientField::identity(), &moved).unwrap();
    for (a, b) in base.perturbed_eigenvalues().iter().zip(m2.perturbed_eigenvalues()) {
        assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }
}

#[test]
fn retained_eigenvectors_are_orthonormal() {
    let domain = DomainSpec::interval(4.0, 24, 0.5);
    let m = model(&domain, &PotentialSpec::bump_1d(2.0, 1.0, 1.0), Eigenvectors::Retain);
    let phi = m.eigenvectors().unwrap();
    let gram = phi.transpose() * phi;
    assert!((gram - nalgebra::DMatrix::<f64>::identity(24, 24)).amax() < 1e-12);
    let residual = m.operator() * phi - phi * nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(m.free_eigenvalues().to_vec()));
    assert!(residual.amax() < 1e-9);
}

#[test]
fn ellipticity_violation_is_rejected() {
    let domain = DomainSpec::interval(4.0, 32, 0.5);
    let v = Potential::zero(domain.grid::<f64>().unwrap());
    let a = CoefficientField {
        profile: CoefficientProfile::Step { axis: 0, position: 2.0, left: 1.0, right: 5.0 },
        mu: 4.0,
    };
    assert!(matches!(discretize(&domain, &a, &v), Err(SpectralError::Ellipticity { .. })));
    let bad_mu = CoefficientField { profile: CoefficientProfile::Constant { value: 1.0 }, mu: 0.5 };
    assert!(discretize(&domain, &bad_mu, &v).is_err());
}

#[test]
fn support_margin_violation_is_rejected() {
    let domain = DomainSpec::interval(4.0, 64, 0.5);
    let grid = domain.grid::<f64>().unwrap();
    // sampled with a smaller declared margin than the domain requires
    let v = PotentialSpec::bump_1d(1.3, 1.0, 1.0).sample(&grid, 0.2).unwrap();
    assert_eq!(
        discretize(&domain, &CoefficientField::identity(), &v).unwrap_err(),
        SpectralError::SupportMargin { margin: 0.5 }
    );
}

#[test]
fn unresolved_potential_is_rejected() {
    let domain = DomainSpec::circle(2.0 * PI, 32);
    let v = PotentialSpec::bump_1d(3.0, 0.3, 1.0).sample(&domain.grid::<f64>().unwrap(), 0.0).unwrap();
    assert!(matches!(
        discretize(&domain, &CoefficientField::identity(), &v),
        Err(SpectralError::Unresolved { axis: 0, .. })
    ));
}

#[test]
fn grid_mismatch_and_small_grids_are_rejected() {
    let domain = DomainSpec::circle(2.0 * PI, 32);
    let other = DomainSpec::circle(2.0 * PI, 40);
    let v = Potential::zero(other.grid::<f64>().unwrap());
    assert_eq!(discretize(&domain, &CoefficientField::identity(), &v).unwrap_err(), SpectralError::GridMismatch);
    assert!(matches!(DomainSpec::circle(1.0, 8).grid::<f64>(), Err(SpectralError::Domain(_))));
    assert!(matches!(DomainSpec::interval(1.0, 32, 0.0).grid::<f64>(), Err(SpectralError::Domain(_))));
}

#[test]
fn single_precision_models() {
    let domain = DomainSpec::interval(PI, 32, 0.1);
    let v = Potential::<f32>::zero(domain.grid::<f32>().unwrap());
    let m = discretize(&domain, &CoefficientField::identity(), &v).unwrap();
    assert!((m.free_eigenvalues()[0] - 1.0).abs() < 1e-2);
}
