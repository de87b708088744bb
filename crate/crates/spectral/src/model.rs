//! Conservative finite-volume discretization of `-div(a∇·) + V` and its spectra.

use heatrace_core::potential::Potential;
use heatrace_core::{Boundary, Grid, Real};
use nalgebra::{DMatrix, SymmetricEigen};

use crate::domain::{CoefficientField, DomainSpec};
use crate::error::{Result, SpectralError};

/// Minimum number of grid lines crossing the support of `V` along each axis.
pub const MIN_SUPPORT_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Eigenvectors {
    #[default]
    Discard,
    Retain,
}

/// Full discrete spectra of `A` and `A_V = A + diag(V)`.
#[derive(Debug, Clone)]
pub struct SpectralModel<T: Real> {
    domain: DomainSpec,
    coefficient: CoefficientField,
    potential: Potential<T>,
    operator: DMatrix<T>,
    free: Vec<T>,
    perturbed: Vec<T>,
    basis: Option<DMatrix<T>>,
}

impl<T: Real> SpectralModel<T> {
    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn coefficient(&self) -> &CoefficientField {
        &self.coefficient
    }

    pub fn potential(&self) -> &Potential<T> {
        &self.potential
    }

    pub fn grid(&self) -> &Grid<T> {
        self.potential.grid()
    }

    /// The matrix of `A`, without the potential.
    pub fn operator(&self) -> &DMatrix<T> {
        &self.operator
    }

    /// `A + diag(V)`.
    pub fn perturbed_operator(&self) -> DMatrix<T> {
        let mut m = self.operator.clone();
        for (i, &v) in self.potential.values().iter().enumerate() {
            m[(i, i)] += v;
        }
        m
    }

    /// Eigenvalues of `A`, ascending.
    pub fn free_eigenvalues(&self) -> &[T] {
        &self.free
    }

    /// Eigenvalues of `A_V`, ascending.
    pub fn perturbed_eigenvalues(&self) -> &[T] {
        &self.perturbed
    }

    /// Orthonormal eigenvectors of `A` as columns, matching [`Self::free_eigenvalues`].
    pub fn eigenvectors(&self) -> Option<&DMatrix<T>> {
        self.basis.as_ref()
    }

    /// Quadrature weight `∏ h` of one node.
    pub fn mass(&self) -> T {
        self.grid().cell_volume()
    }

    pub fn len(&self) -> usize {
        self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        self.free.is_empty()
    }
}

pub fn discretize<T: Real>(domain: &DomainSpec, a: &CoefficientField, v: &Potential<T>) -> Result<SpectralModel<T>> {
    discretize_with(domain, a, v, Eigenvectors::Discard)
}

pub fn discretize_with<T: Real>(
    domain: &DomainSpec,
    a: &CoefficientField,
    v: &Potential<T>,
    vectors: Eigenvectors,
) -> Result<SpectralModel<T>> {
    let grid: Grid<T> = domain.grid()?;
    if &grid != v.grid() {
        return Err(SpectralError::GridMismatch);
    }
    a.validate(grid.dim())?;
    check_support(&grid, v, domain.margin)?;
    let operator = assemble(&grid, a)?;
    let mut perturbed_matrix = operator.clone();
    for (i, &x) in v.values().iter().enumerate() {
        perturbed_matrix[(i, i)] += x;
    }
    let (free, basis) = match vectors {
        Eigenvectors::Retain => {
            let eig = SymmetricEigen::new(operator.clone());
            let order = ascending(eig.eigenvalues.as_slice());
            let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
            let columns: Vec<_> = order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect();
            (values, Some(DMatrix::from_columns(&columns)))
        }
        Eigenvectors::Discard => (sorted(operator.clone().symmetric_eigenvalues().as_slice()), None),
    };
    let perturbed = sorted(perturbed_matrix.symmetric_eigenvalues().as_slice());
    Ok(SpectralModel {
        domain: domain.clone(),
        coefficient: a.clone(),
        potential: v.clone(),
        operator,
        free,
        perturbed,
        basis,
    })
}

fn ascending<T: Real>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("eigenvalues are finite"));
    order
}

fn sorted<T: Real>(values: &[T]) -> Vec<T> {
    ascending(values).into_iter().map(|k| values[k]).collect()
}

/// Second-order flux form: `(A u)_i = Σ_axis [a_{i+½}(u_i - u_{i+1}) + a_{i-½}(u_i - u_{i-1})] / h²`.
fn assemble<T: Real>(grid: &Grid<T>, a: &CoefficientField) -> Result<DMatrix<T>> {
    let n = grid.len();
    let mut m = DMatrix::<T>::zeros(n, n);
    for axis in 0..grid.dim() {
        let h = grid.spacing(axis);
        let inv_h2 = T::one() / (h * h);
        let points = grid.points()[axis];
        let stride = grid.stride(axis);
        for flat in 0..n {
            let i = (flat / stride) % points;
            let mut x: Vec<f64> = grid.node(flat).iter().map(|c| c.to_f64()).collect();
            // face between node i and its successor along `axis`
            x[axis] += 0.5 * h.to_f64();
            let flux = T::of(a.checked_value(&x)?) * inv_h2;
            let next = match (grid.boundary(), i + 1 < points) {
                (_, true) => Some(flat + stride),
                (Boundary::Periodic, false) => Some(flat + stride - points * stride),
                (Boundary::Dirichlet, false) => None,
            };
            m[(flat, flat)] += flux;
            if let Some(j) = next {
                m[(j, j)] += flux;
                m[(flat, j)] -= flux;
                m[(j, flat)] -= flux;
            }
            if grid.boundary() == Boundary::Dirichlet && i == 0 {
                x[axis] -= h.to_f64();
                m[(flat, flat)] += T::of(a.checked_value(&x)?) * inv_h2;
            }
        }
    }
    Ok(m)
}

fn check_support<T: Real>(grid: &Grid<T>, v: &Potential<T>, margin: f64) -> Result<()> {
    if v.is_zero() {
        return Ok(());
    }
    for axis in 0..grid.dim() {
        let mut hit = vec![false; grid.points()[axis]];
        for (flat, &x) in v.values().iter().enumerate() {
            if x != T::zero() {
                hit[grid.unflatten(flat)[axis]] = true;
            }
        }
        let nodes = hit.iter().filter(|&&b| b).count();
        if nodes < MIN_SUPPORT_NODES {
            return Err(SpectralError::Unresolved { axis, nodes, required: MIN_SUPPORT_NODES });
        }
    }
    if grid.boundary() == Boundary::Dirichlet {
        for (flat, &x) in v.values().iter().enumerate() {
            if x == T::zero() {
                continue;
            }
            let near = grid.node(flat).iter().zip(grid.lengths()).any(|(&c, &l)| {
                let d = c.min(l - c).to_f64();
                d < margin
            });
            if near {
                return Err(SpectralError::SupportMargin { margin });
            }
        }
    }
    Ok(())
}
