mod common;

use heatrace_core::PotentialSpec;
use heatrace_spectral::{boundary_gap, DomainSpec, Eigenvectors, GapOptions, SpectralError, SpectralModel};

fn log_grid() -> Vec<f64> {
    (0..40).map(|k| 10f64.powf(-2.5 + 2.5 * k as f64 / 39.0)).collect()
}

/// Interval of length `2 + 2δ` around a unit-radius bump, `h ≈ 0.02`, and its torus partner.
fn pair(delta: f64, amplitude: f64) -> (SpectralModel, SpectralModel) {
    let length = 2.0 + 2.0 * delta;
    let n = (length / 0.02).round() as usize - 1;
    let d = DomainSpec::interval(length, n, delta);
    let p = d.periodic_partner().unwrap();
    let spec = PotentialSpec::bump_1d(length / 2.0, 1.0, amplitude);
    (common::model(&d, &spec, Eigenvectors::Discard), common::model(&p, &spec, Eigenvectors::Discard))
}

#[test]
fn zero_potential_has_no_gap() {
    let (d, p) = pair(0.5, 0.0);
    let g = boundary_gap(&d, &p, &log_grid(), &GapOptions::default()).unwrap();
    assert!(g.gap.iter().all(|&x| x == 0.0));
    assert!(g.fit.is_none());
}

#[test]
fn gap_decays_as_t_shrinks() {
    let (d, p) = pair(0.5, 1.0);
    let g = boundary_gap(&d, &p, &log_grid(), &GapOptions::default()).unwrap();
    assert!(g.monotone);
    let fit = g.fit.unwrap();
    assert!(fit.slope < 0.0);
    assert!(fit.points >= 10);
}

#[test]
fn doubling_the_margin_raises_the_rate() {
    let (d1, p1) = pair(0.5, 1.0);
    let (d2, p2) = pair(1.0, 1.0);
    let r1 = boundary_gap(&d1, &p1, &log_grid(), &GapOptions::default()).unwrap().fit.unwrap().rate;
    let r2 = boundary_gap(&d2, &p2, &log_grid(), &GapOptions::default()).unwrap().fit.unwrap().rate;
    let ratio = r2 / r1;
    assert!((2.0..=6.0).contains(&ratio), "rate ratio {ratio}");
}

#[test]
fn mismatched_potentials_are_rejected() {
    let (d, _) = pair(0.5, 1.0);
    let (_, p) = pair(0.5, 2.0);
    assert!(matches!(
        boundary_gap(&d, &p, &log_grid(), &GapOptions::default()),
        Err(SpectralError::MismatchedPotentials(_))
    ));
    let (d2, p2) = pair(1.0, 1.0);
    assert!(matches!(
        boundary_gap(&d2, &p2, &log_grid(), &GapOptions::default()).map(|_| ()).and(boundary_gap(&d, &p2, &log_grid(), &GapOptions::default()).map(|_| ())),
        Err(SpectralError::MismatchedPotentials(_))
    ));
    assert!(matches!(boundary_gap(&p, &d, &log_grid(), &GapOptions::default()), Err(SpectralError::MismatchedPotentials(_))));
}

#[test]
fn partner_requires_a_dirichlet_domain() {
    assert!(DomainSpec::circle(4.0, 32).periodic_partner().is_err());
    let p = DomainSpec::interval(4.0, 199, 1.0).periodic_partner().unwrap();
    assert_eq!(p.points, vec![200]);
}
