mod common;

use std::f64::consts::PI;

use common::{model, rel};
use heatrace_core::{assemble_invariant, evaluate_invariant, PotentialSpec};
use heatrace_spectral::{
    discretize, fit_expansion, log_times, trace_diff, CoefficientField, CoefficientProfile, DomainSpec,
    Eigenvectors, FitOptions, SpectralError, TraceSeries,
};
use proptest::prelude::*;

fn synthetic(d: &[f64], powers: &[f64], n: usize, t: &[f64]) -> TraceSeries {
    let half = n as f64 / 2.0;
    TraceSeries::new(
        t.iter()
            .map(|&t| (t, powers.iter().zip(d).map(|(p, c)| c * t.powf(*p)).sum::<f64>() / t.powf(half)))
            .collect(),
    )
    .unwrap()
}

#[test]
fn noiseless_series_is_recovered_exactly() {
    let d = [-1.0, 0.5, -1.0 / 6.0];
    let powers = [1.0, 2.0, 3.0];
    let t = log_times(1e-3, 1e-1, 40).unwrap();
    for n in [1, 2] {
        let r = fit_expansion(&synthetic(&d, &powers, n, &t), n, &powers, &FitOptions::default()).unwrap();
        for (e, want) in r.estimates.iter().zip(&d) {
            assert!(rel(*e, *want) <= 1e-10, "{e} vs {want}");
        }
        assert!(r.relative_residual < 1e-13);
        assert!(r.condition_number >= 1.0);
        assert!(r.warnings.is_empty());
    }
}

#[test]
fn half_powers_are_supported() {
    let d = [0.3, -0.2, 0.05, 0.01];
    let powers = [1.0, 1.5, 2.0, 2.5];
    let t = log_times(1e-3, 1e-1, 30).unwrap();
    let r = fit_expansion(&synthetic(&d, &powers, 1, &t), 1, &powers, &FitOptions::default()).unwrap();
    for (e, want) in r.estimates.iter().zip(&d) {
        assert!(rel(*e, *want) <= 1e-8);
    }
}

#[test]
fn too_few_samples_is_an_error() {
    let t = log_times(1e-3, 1e-1, 2).unwrap();
    let s = synthetic(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], 1, &t);
    assert_eq!(
        fit_expansion(&s, 1, &[1.0, 2.0, 3.0], &FitOptions::default()).unwrap_err(),
        SpectralError::Underdetermined { samples: 2, powers: 3 }
    );
}

#[test]
fn degenerate_requests_are_errors() {
    let t = log_times(1e-3, 1e-1, 10).unwrap();
    let s = synthetic(&[1.0], &[1.0], 1, &t);
    assert!(matches!(fit_expansion(&s, 1, &[1.0, 1.0], &FitOptions::default()), Err(SpectralError::DegenerateFit(_))));
    assert!(matches!(fit_expansion(&s, 1, &[], &FitOptions::default()), Err(SpectralError::DegenerateFit(_))));
    let window = FitOptions { window: Some((1e-2, 1.0)), ..FitOptions::default() };
    assert!(matches!(fit_expansion(&s, 1, &[1.0], &window), Err(SpectralError::TimeGrid(_))));
}

#[test]
fn ill_conditioning_is_reported() {
    let t = log_times(1e-3, 1e-1, 40).unwrap();
    let powers = [1.0, 2.0, 3.0, 4.0, 5.0];
    let s = synthetic(&[1.0, 1.0, 1.0, 1.0, 1.0], &powers, 1, &t);
    let strict = FitOptions { condition_threshold: 10.0, ..FitOptions::default() };
    let r = fit_expansion(&s, 1, &powers, &strict).unwrap();
    assert!(r.condition_number > 10.0);
    assert_eq!(r.warnings.len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn exact_data_is_reproduced(d in prop::collection::vec(-5.0f64..5.0, 3)) {
        prop_assume!(d.iter().all(|x| x.abs() > 1e-3));
        let powers = [1.0, 2.0, 3.0];
        let t = log_times(1e-3, 1e-1, 25).unwrap();
        let r = fit_expansion(&synthetic(&d, &powers, 1, &t), 1, &powers, &FitOptions::default()).unwrap();
        for (e, want) in r.estimates.iter().zip(&d) {
            prop_assert!((e - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }
}

#[test]
fn torus_fit_recovers_leading_invariant() {
    let domain = DomainSpec::circle(2.0 * PI, 512);
    let m = model(&domain, &PotentialSpec::bump_1d(PI, 2.0, 1.0), Eigenvectors::Discard);
    let s = trace_diff(&m, &log_times(1e-3, 1e-1, 40).unwrap()).unwrap();
    let options = FitOptions { weight_exponent: Some(1.0), ..FitOptions::default() };
    let r = fit_expansion(&s, 1, &[-1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0], &options).unwrap();
    let p2 = evaluate_invariant(&assemble_invariant(2, 1).unwrap(), m.potential()).unwrap();
    assert!(rel(r.estimate(1.0).unwrap(), p2) < 1e-2);
}

#[test]
fn variable_coefficient_residuals_shrink_with_the_window() {
    let a = CoefficientField {
        profile: CoefficientProfile::Step { axis: 0, position: 3.0, left: 1.0, right: 3.0 },
        mu: 4.0,
    };
    let domain = DomainSpec::interval(2.0 * PI, 256, 0.5);
    let v = PotentialSpec::bump_1d(3.2, 1.5, 1.0).sample(&domain.grid::<f64>().unwrap(), 0.5).unwrap();
    let m = discretize(&domain, &a, &v).unwrap();
    let s = trace_diff(&m, &log_times(1e-3, 1e-1, 40).unwrap()).unwrap();
    let powers = [1.0, 1.5, 2.0, 2.5];
    let residuals: Vec<f64> = [1e-1, 3e-2, 1e-2]
        .iter()
        .map(|&hi| fit_expansion(&s.window(0.0, hi * (1.0 + 1e-9)), 1, &powers, &FitOptions::default()).unwrap().relative_residual)
        .collect();
    assert!(residuals.windows(2).all(|w| w[1] < w[0]), "{residuals:?}");
}
