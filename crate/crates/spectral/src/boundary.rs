//! Boundary insensitivity: interval/rectangle versus torus at matched `V`.

use heatrace_core::{Boundary, Real};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::model::SpectralModel;
use crate::trace::{check_times, trace_difference};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapOptions {
    /// A gap is resolved when it exceeds this fraction of `max_t |z_D(t)|`.
    #[serde(default = "default_floor")]
    pub resolved_floor: f64,
}

fn default_floor() -> f64 {
    1e-10
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions { resolved_floor: default_floor() }
    }
}

/// Least-squares line `log gap = intercept + slope / t` over the resolved samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapFit {
    pub slope: f64,
    pub intercept: f64,
    /// `-slope`, the fitted exponential rate.
    pub rate: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGap {
    pub t: Vec<f64>,
    pub z_dirichlet: Vec<f64>,
    pub z_periodic: Vec<f64>,
    pub gap: Vec<f64>,
    pub resolved: Vec<bool>,
    /// Resolved gaps shrink as `t` decreases.
    pub monotone: bool,
    pub fit: Option<GapFit>,
}

/// Checks that both models carry the same potential on the same nodes: the
/// periodic grid has one extra node per axis, at the identified boundary.
pub fn check_matched<T: Real>(dirichlet: &SpectralModel<T>, periodic: &SpectralModel<T>) -> Result<()> {
    let gd = dirichlet.grid();
    let gp = periodic.grid();
    let mismatch = |s: &str| Err(SpectralError::MismatchedPotentials(s.into()));
    if gd.boundary() != Boundary::Dirichlet || gp.boundary() != Boundary::Periodic {
        return mismatch("expected a Dirichlet model and a periodic model");
    }
    if gd.dim() != gp.dim() {
        return mismatch("dimensions differ");
    }
    for axis in 0..gd.dim() {
        let (hd, hp) = (gd.spacing(axis).to_f64(), gp.spacing(axis).to_f64());
        if (hd - hp).abs() > 1e-12 * hd || gp.points()[axis] != gd.points()[axis] + 1 {
            return mismatch("grids are not nested with equal spacing");
        }
    }
    let vd = dirichlet.potential();
    let vp = periodic.potential();
    let scale = vd.sup_norm().to_f64().max(vp.sup_norm().to_f64());
    let tol = 1e-12 * scale;
    for (flat, &x) in vp.values().iter().enumerate() {
        let idx = gp.unflatten(flat);
        let expected = if idx.contains(&0) {
            0.0
        } else {
            let inner = idx.iter().enumerate().fold(0, |acc, (a, &i)| acc + (i - 1) * gd.stride(a));
            vd.values()[inner].to_f64()
        };
        if (x.to_f64() - expected).abs() > tol {
            return mismatch("potential values differ on shared nodes");
        }
    }
    Ok(())
}

pub fn boundary_gap<T: Real>(
    dirichlet: &SpectralModel<T>,
    periodic: &SpectralModel<T>,
    t_grid: &[f64],
    options: &GapOptions,
) -> Result<BoundaryGap> {
    check_times(t_grid)?;
    check_matched(dirichlet, periodic)?;
    let z_dirichlet: Vec<f64> = t_grid.iter().map(|&t| trace_difference(dirichlet, T::of(t)).to_f64()).collect();
    let z_periodic: Vec<f64> = t_grid.iter().map(|&t| trace_difference(periodic, T::of(t)).to_f64()).collect();
    let gap: Vec<f64> = z_dirichlet.iter().zip(&z_periodic).map(|(a, b)| (a - b).abs()).collect();
    let scale = z_dirichlet.iter().fold(0.0f64, |m, z| m.max(z.abs()));
    let floor = options.resolved_floor * scale;
    let resolved: Vec<bool> = gap.iter().map(|&g| g > floor && g.is_finite()).collect();

    let points: Vec<(f64, f64)> =
        t_grid.iter().zip(&gap).zip(&resolved).filter(|(_, &r)| r).map(|((&t, &g), _)| (1.0 / t, g.ln())).collect();
    let monotone = t_grid
        .iter()
        .zip(&gap)
        .zip(&resolved)
        .filter(|(_, &r)| r)
        .map(|((_, &g), _)| g)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1] >= w[0]);
    let fit = (points.len() >= 3).then(|| line_fit(&points));
    Ok(BoundaryGap { t: t_grid.to_vec(), z_dirichlet, z_periodic, gap, resolved, monotone, fit })
}

fn line_fit(points: &[(f64, f64)]) -> GapFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    GapFit { slope, intercept: my - slope * mx, rate: -slope, points: points.len() }
}
