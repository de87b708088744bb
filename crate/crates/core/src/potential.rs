//! Potentials sampled on uniform tensor grids.
//!
//! Grids are either periodic boxes (node `i` at `i·h`, `h = L/N`) or open
//! intervals/rectangles with homogeneous Dirichlet data (node `i` at
//! `(i+1)·h`, `h = L/(N+1)`, boundary nodes excluded). Values are stored
//! row-major with axis 0 varying slowest.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Dirichlet,
}

/// Minimum number of grid points per axis.
pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    boundary: Boundary,
    lengths: Vec<T>,
    points: Vec<usize>,
}

impl<T: Real> Grid<T> {
    pub fn new(boundary: Boundary, lengths: Vec<T>, points: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() || lengths.len() > 2 {
            return Err(Error::Grid(format!("dimension must be 1 or 2, got {}", lengths.len())));
        }
        if lengths.len() != points.len() {
            return Err(Error::Grid("one point count per axis is required".into()));
        }
        if lengths.iter().any(|&l| !(l > T::zero()) || !l.is_finite()) {
            return Err(Error::Grid("side lengths must be positive and finite".into()));
        }
        if let Some(&p) = points.iter().find(|&&p| p < MIN_POINTS) {
            return Err(Error::Grid(format!("at least {MIN_POINTS} points per axis are required, got {p}")));
        }
        Ok(Grid { boundary, lengths, points })
    }

    pub fn periodic_1d(length: T, points: usize) -> Result<Self> {
        Self::new(Boundary::Periodic, vec![length], vec![points])
    }

    pub fn dirichlet_1d(length: T, points: usize) -> Result<Self> {
        Self::new(Boundary::Dirichlet, vec![length], vec![points])
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[T] {
        &self.lengths
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> T {
        let intervals = match self.boundary {
            Boundary::Periodic => self.points[axis],
            Boundary::Dirichlet => self.points[axis] + 1,
        };
        self.lengths[axis] / T::of_usize(intervals)
    }

    /// `∏ h_axis`, the trapezoid weight of one node.
    pub fn cell_volume(&self) -> T {
        (0..self.dim()).fold(T::one(), |acc, a| acc * self.spacing(a))
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> T {
        let offset = match self.boundary {
            Boundary::Periodic => i,
            Boundary::Dirichlet => i + 1,
        };
        T::of_usize(offset) * self.spacing(axis)
    }

    /// Row-major stride of `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        self.points[axis + 1..].iter().product()
    }

    /// Multi-dimensional index of flat node `flat`.
    pub fn unflatten(&self, flat: usize) -> Vec<usize> {
        (0..self.dim()).map(|a| (flat / self.stride(a)) % self.points[a]).collect()
    }

    pub fn node(&self, flat: usize) -> Vec<T> {
        self.unflatten(flat).iter().enumerate().map(|(a, &i)| self.coordinate(a, i)).collect()
    }
}

/// One analytic building block of a potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialTerm {
    /// `amplitude · exp(-1 / (1 - |x-c|²/r²))` inside the ball, 0 outside.
    Bump { center: Vec<f64>, radius: f64, amplitude: f64 },
    /// A bump multiplied by `1 + slope · (x-c)/r`.
    Windowed { center: Vec<f64>, radius: f64, amplitude: f64, slope: Vec<f64> },
}

impl PotentialTerm {
    fn center(&self) -> &[f64] {
        match self {
            PotentialTerm::Bump { center, .. } | PotentialTerm::Windowed { center, .. } => center,
        }
    }

    fn radius(&self) -> f64 {
        match self {
            PotentialTerm::Bump { radius, .. } | PotentialTerm::Windowed { radius, .. } => *radius,
        }
    }

    fn eval<T: Real>(&self, offset: &[T]) -> T {
        let r = T::of(self.radius());
        let y: Vec<T> = offset.iter().map(|&d| d / r).collect();
        let rho2 = y.iter().fold(T::zero(), |acc, &v| acc + v * v);
        if rho2 >= T::one() {
            return T::zero();
        }
        let window = (-(T::one() / (T::one() - rho2))).exp();
        match self {
            PotentialTerm::Bump { amplitude, .. } => T::of(*amplitude) * window,
            PotentialTerm::Windowed { amplitude, slope, .. } => {
                let tilt = slope.iter().zip(&y).fold(T::one(), |acc, (&s, &v)| acc + T::of(s) * v);
                T::of(*amplitude) * tilt * window
            }
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.center().len() != dim {
            return Err(Error::Potential(format!(
                "term center has dimension {}, grid has {dim}",
                self.center().len()
            )));
        }
        if !(self.radius() > 0.0) || !self.radius().is_finite() {
            return Err(Error::Potential("term radius must be positive".into()));
        }
        if let PotentialTerm::Windowed { slope, .. } = self {
            if slope.len() != dim {
                return Err(Error::Potential("windowed slope must have one entry per axis".into()));
            }
        }
        Ok(())
    }
}

/// Sum of analytic terms.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub terms: Vec<PotentialTerm>,
}

impl PotentialSpec {
    pub fn bump_1d(center: f64, radius: f64, amplitude: f64) -> Self {
        PotentialSpec { terms: vec![PotentialTerm::Bump { center: vec![center], radius, amplitude }] }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| match t.clone() {
                PotentialTerm::Bump { center, radius, amplitude } => {
                    PotentialTerm::Bump { center, radius, amplitude: amplitude * lambda }
                }
                PotentialTerm::Windowed { center, radius, amplitude, slope } => {
                    PotentialTerm::Windowed { center, radius, amplitude: amplitude * lambda, slope }
                }
            })
            .collect();
        PotentialSpec { terms }
    }

    pub fn translated(&self, shift: &[f64]) -> Self {
        let mv = |c: Vec<f64>| c.iter().zip(shift).map(|(a, b)| a + b).collect::<Vec<_>>();
        let terms = self
            .terms
            .iter()
            .map(|t| match t.clone() {
                PotentialTerm::Bump { center, radius, amplitude } => {
                    PotentialTerm::Bump { center: mv(center), radius, amplitude }
                }
                PotentialTerm::Windowed { center, radius, amplitude, slope } => {
                    PotentialTerm::Windowed { center: mv(center), radius, amplitude, slope }
                }
            })
            .collect();
        PotentialSpec { terms }
    }

    /// Smallest distance from any term's support to the Dirichlet boundary.
    pub fn boundary_margin(&self, lengths: &[f64]) -> f64 {
        self.terms
            .iter()
            .flat_map(|t| {
                t.center()
                    .iter()
                    .zip(lengths)
                    .map(move |(&c, &l)| (c - t.radius()).min(l - c - t.radius()))
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Samples the potential; on Dirichlet grids the supports must stay at
    /// least `margin > 0` away from the boundary.
    pub fn sample<T: Real>(&self, grid: &Grid<T>, margin: f64) -> Result<Potential<T>> {
        let dim = grid.dim();
        for t in &self.terms {
            t.validate(dim)?;
        }
        let lengths: Vec<f64> = grid.lengths().iter().map(|l| l.to_f64()).collect();
        match grid.boundary() {
            Boundary::Dirichlet => {
                if !(margin > 0.0) {
                    return Err(Error::Potential("Dirichlet potentials need a positive support margin".into()));
                }
                let actual = self.boundary_margin(&lengths);
                if actual < margin {
                    return Err(Error::Potential(format!(
                        "support comes within {actual} of the boundary, declared margin is {margin}"
                    )));
                }
            }
            Boundary::Periodic => {
                for t in &self.terms {
                    if lengths.iter().any(|&l| 2.0 * t.radius() >= l) {
                        return Err(Error::Potential("bump diameter must be smaller than the period".into()));
                    }
                }
            }
        }
        let values = (0..grid.len())
            .map(|flat| {
                let x = grid.node(flat);
                self.terms.iter().fold(T::zero(), |acc, term| {
                    let offset: Vec<T> = x
                        .iter()
                        .zip(term.center())
                        .zip(&lengths)
                        .map(|((&xi, &ci), &l)| {
                            let mut d = xi - T::of(ci);
                            if grid.boundary() == Boundary::Periodic {
                                let period = T::of(l);
                                d -= period * (d / period).round();
                            }
                            d
                        })
                        .collect();
                    acc + term.eval(&offset)
                })
            })
            .collect();
        Potential::new(grid.clone(), values, T::of(margin.max(0.0)))
    }
}

/// Potential values on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    grid: Grid<T>,
    values: Vec<T>,
    margin: T,
}

impl<T: Real> Potential<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>, margin: T) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Potential(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Potential("values must be finite".into()));
        }
        Ok(Potential { grid, values, margin })
    }

    pub fn zero(grid: Grid<T>) -> Self {
        let n = grid.len();
        Potential { grid, values: vec![T::zero(); n], margin: T::zero() }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn margin(&self) -> T {
        self.margin
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.magnitude()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == T::zero())
    }

    /// Trapezoid-rule integral of `f(V)` over the grid.
    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + f(v)) * self.grid.cell_volume()
    }

    /// `V` circularly shifted by whole grid steps (periodic grids only).
    pub fn shifted(&self, steps: &[isize]) -> Result<Self> {
        if self.grid.boundary() != Boundary::Periodic {
            return Err(Error::Grid("grid translation requires a periodic grid".into()));
        }
        let mut out = vec![T::zero(); self.values.len()];
        for (flat, &v) in self.values.iter().enumerate() {
            let idx = self.grid.unflatten(flat);
            let target = idx.iter().enumerate().fold(0, |acc, (a, &i)| {
                let n = self.grid.points()[a] as isize;
                let j = (i as isize + steps[a]).rem_euclid(n) as usize;
                acc + j * self.grid.stride(a)
            });
            out[target] = v;
        }
        Potential::new(self.grid.clone(), out, self.margin)
    }

    /// `V(-x)` along `axis`, mapping node `i` to the mirrored node.
    pub fn reflected(&self, axis: usize) -> Self {
        let n = self.grid.points()[axis];
        let mut out = vec![T::zero(); self.values.len()];
        for (flat, &v) in self.values.iter().enumerate() {
            let idx = self.grid.unflatten(flat);
            let i = idx[axis];
            let j = match self.grid.boundary() {
                Boundary::Periodic => (n - i) % n,
                Boundary::Dirichlet => n - 1 - i,
            };
            let target = flat - i * self.grid.stride(axis) + j * self.grid.stride(axis);
            out[target] = v;
        }
        Potential { grid: self.grid.clone(), values: out, margin: self.margin }
    }
}
