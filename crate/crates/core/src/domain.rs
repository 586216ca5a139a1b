//! Grids, fields, quadrature, and unit conversions shared by every solver
//! module.
//!
//! Three grid kinds are supported: 1D Cartesian boxes, 2D Cartesian boxes,
//! and spherically symmetric radial domains. Cartesian domains are centred
//! on the origin. Periodic axes place nodes at `x_j = -L/2 + j h`; zero
//! boundary (Dirichlet) axes and radial grids use cell centres
//! `x_j = -L/2 + (j + 1/2) h` so that no node sits on a wall and the
//! quadrature weights sum exactly to the domain length. Radial weights carry
//! the 4 pi r^2 measure.

use std::sync::Arc;

use ndarray::Array1;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Boltzmann constant in Hartree per kelvin (CODATA 2018).
pub const BOLTZMANN_HARTREE_PER_KELVIN: f64 = 3.166_811_563_455_608e-6;

/// Hartree atomic units with a configurable particle mass (m_e = 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitSystem {
    pub mass: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self { mass: 1.0 }
    }
}

impl UnitSystem {
    pub fn electron() -> Self {
        Self::default()
    }

    pub fn with_mass(mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidInput(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { mass })
    }

    /// beta = 1 / (k_B T), in inverse Hartree.
    pub fn beta_from_temperature(&self, t_kelvin: f64) -> Result<f64> {
        if !(t_kelvin > 0.0) {
            return Err(Error::NonpositiveTemperature(t_kelvin));
        }
        Ok(1.0 / (BOLTZMANN_HARTREE_PER_KELVIN * t_kelvin))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Cartesian1d,
    Cartesian2d,
    Radial3d,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    Periodic,
    DirichletZero,
}

/// One spatial axis: extent, node count, boundary condition, and the
/// derived spacing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub extent: f64,
    pub count: usize,
    pub boundary: BoundaryCondition,
    pub spacing: f64,
}

const MIN_POINTS_PER_AXIS: usize = 8;

impl Axis {
    fn new(extent: f64, count: usize, boundary: BoundaryCondition) -> Result<Self> {
        if !(extent > 0.0) || !extent.is_finite() {
            return Err(Error::InvalidDimension(format!(
                "axis extent must be positive and finite, got {extent}"
            )));
        }
        if count < MIN_POINTS_PER_AXIS {
            return Err(Error::InvalidDimension(format!(
                "axis needs at least {MIN_POINTS_PER_AXIS} points, got {count}"
            )));
        }
        Ok(Self { extent, count, boundary, spacing: extent / count as f64 })
    }
}

/// A discretized spatial domain with per-point quadrature weights.
#[derive(Clone, Debug)]
pub struct Grid {
    kind: GridKind,
    axes: Vec<Axis>,
    coords: Vec<Vec<f64>>,
    weights: Array1<f64>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.axes == other.axes
    }
}

impl Grid {
    /// 1D Cartesian box of length `extent` centred on the origin.
    pub fn cartesian_1d(extent: f64, count: usize, boundary: BoundaryCondition) -> Result<Self> {
        let axis = Axis::new(extent, count, boundary)?;
        let coords = vec![axis_coords(&axis, -extent / 2.0)];
        let weights = Array1::from_elem(count, axis.spacing);
        Ok(Self { kind: GridKind::Cartesian1d, axes: vec![axis], coords, weights })
    }

    /// 2D Cartesian box centred on the origin. Points are stored row-major
    /// with the x index running fastest.
    pub fn cartesian_2d(
        extents: [f64; 2],
        counts: [usize; 2],
        boundaries: [BoundaryCondition; 2],
    ) -> Result<Self> {
        let ax = Axis::new(extents[0], counts[0], boundaries[0])?;
        let ay = Axis::new(extents[1], counts[1], boundaries[1])?;
        let coords = vec![
            axis_coords(&ax, -extents[0] / 2.0),
            axis_coords(&ay, -extents[1] / 2.0),
        ];
        let weights = Array1::from_elem(counts[0] * counts[1], ax.spacing * ay.spacing);
        Ok(Self { kind: GridKind::Cartesian2d, axes: vec![ax, ay], coords, weights })
    }

    /// Radial domain [0, extent] for spherically symmetric 3D problems.
    /// Cell centres r_j = (j + 1/2) h; weights 4 pi r^2 h sum to the ball
    /// volume up to O(1/count^2).
    pub fn radial_3d(extent: f64, count: usize) -> Result<Self> {
        let axis = Axis::new(extent, count, BoundaryCondition::DirichletZero)?;
        let r = axis_coords(&axis, 0.0);
        let weights =
            Array1::from_iter(r.iter().map(|&ri| 4.0 * std::f64::consts::PI * ri * ri * axis.spacing));
        Ok(Self { kind: GridKind::Radial3d, axes: vec![axis], coords: vec![r], weights })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    /// Node coordinates along one axis.
    pub fn coords(&self, axis: usize) -> &[f64] {
        &self.coords[axis]
    }

    pub fn weights(&self) -> &Array1<f64> {
        &self.weights
    }

    /// Coordinates of the flattened point `idx`, one entry per axis.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        match self.ndim() {
            1 => vec![self.coords[0][idx]],
            2 => {
                let nx = self.axes[0].count;
                vec![self.coords[0][idx % nx], self.coords[1][idx / nx]]
            }
            _ => unreachable!(),
        }
    }

    /// Flattened index of the 2D point (ix, iy).
    pub fn index_2d(&self, ix: usize, iy: usize) -> usize {
        iy * self.axes[0].count + ix
    }

    pub fn same_layout(&self, other: &Grid) -> bool {
        self == other
    }
}

fn axis_coords(axis: &Axis, start: f64) -> Vec<f64> {
    let shift = match axis.boundary {
        BoundaryCondition::Periodic => 0.0,
        BoundaryCondition::DirichletZero => 0.5,
    };
    (0..axis.count).map(|j| start + (j as f64 + shift) * axis.spacing).collect()
}

/// Builds a grid of the requested kind. `extents`, `counts`, and
/// `boundaries` must carry one entry per axis (boundaries are ignored for
/// radial grids, which are always zero at the outer wall).
pub fn make_grid(
    kind: GridKind,
    extents: &[f64],
    counts: &[usize],
    boundaries: &[BoundaryCondition],
) -> Result<Grid> {
    let need = match kind {
        GridKind::Cartesian2d => 2,
        _ => 1,
    };
    if extents.len() != need || counts.len() != need {
        return Err(Error::InvalidDimension(format!(
            "expected {need} axis specification(s), got {} extents and {} counts",
            extents.len(),
            counts.len()
        )));
    }
    match kind {
        GridKind::Cartesian1d => {
            let bc = boundaries.first().copied().unwrap_or(BoundaryCondition::Periodic);
            Grid::cartesian_1d(extents[0], counts[0], bc)
        }
        GridKind::Cartesian2d => {
            let bx = boundaries.first().copied().unwrap_or(BoundaryCondition::DirichletZero);
            let by = boundaries.get(1).copied().unwrap_or(bx);
            Grid::cartesian_2d([extents[0], extents[1]], [counts[0], counts[1]], [bx, by])
        }
        GridKind::Radial3d => Grid::radial_3d(extents[0], counts[0]),
    }
}

/// A real-valued function sampled on a grid.
#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: Arc<Grid>,
    values: Array1<f64>,
}

impl ScalarField {
    pub fn from_values(grid: &Arc<Grid>, values: Array1<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "field has {} values but the grid has {} points",
                values.len(),
                grid.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("field contains non-finite values".into()));
        }
        Ok(Self { grid: Arc::clone(grid), values })
    }

    pub fn constant(grid: &Arc<Grid>, value: f64) -> Self {
        Self { grid: Arc::clone(grid), values: Array1::from_elem(grid.len(), value) }
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self::constant(grid, 0.0)
    }

    /// Samples `f` at every grid point; the argument is the coordinate
    /// tuple of the point.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        Self { grid: Arc::clone(grid), values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array1<f64> {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Quadrature integral sum_i w_i f_i over the domain measure.
    pub fn integrate(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights().iter())
            .map(|(f, w)| f * w)
            .sum()
    }

    /// Largest absolute value on the grid.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// A complex-valued function sampled on a grid.
#[derive(Clone, Debug)]
pub struct ComplexField {
    grid: Arc<Grid>,
    values: Array1<Complex64>,
}

impl ComplexField {
    pub fn from_values(grid: &Arc<Grid>, values: Array1<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "field has {} values but the grid has {} points",
                values.len(),
                grid.len()
            )));
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::InvalidInput("field contains non-finite values".into()));
        }
        Ok(Self { grid: Arc::clone(grid), values })
    }

    pub fn from_real(field: &ScalarField) -> Self {
        let values = field.values().mapv(|v| Complex64::new(v, 0.0));
        Self { grid: Arc::clone(field.grid()), values }
    }

    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        Self { grid: Arc::clone(grid), values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &Array1<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array1<Complex64> {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// |psi|^2 as a real field.
    pub fn density(&self) -> ScalarField {
        ScalarField {
            grid: Arc::clone(&self.grid),
            values: self.values.mapv(|v| v.norm_sqr()),
        }
    }

    /// Quadrature integral of |psi|^2.
    pub fn norm_sqr(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights().iter())
            .map(|(v, w)| v.norm_sqr() * w)
            .sum()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            self.values.mapv_inplace(|v| v / norm);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spacing_matches_extent() {
        let g = Grid::cartesian_1d(10.0, 256, BoundaryCondition::Periodic).unwrap();
        assert_eq!(g.axis(0).spacing, 10.0 / 256.0);
        assert_eq!(g.len(), 256);
    }

    #[test]
    fn radial_weights_sum_to_ball_volume() {
        let g = Grid::radial_3d(20.0, 512).unwrap();
        let volume = 4.0 / 3.0 * std::f64::consts::PI * 20.0f64.powi(3);
        let total: f64 = g.weights().sum();
        assert!(
            ((total - volume) / volume).abs() < 1e-6,
            "weight sum {total} vs ball volume {volume}"
        );
    }

    #[test]
    fn cartesian_weights_sum_to_length() {
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::DirichletZero] {
            let g = Grid::cartesian_1d(1.0, 64, bc).unwrap();
            let total: f64 = g.weights().sum();
            assert!((total - 1.0).abs() < 1e-14);
        }
        let g = Grid::cartesian_2d([3.0, 5.0], [16, 8], [BoundaryCondition::Periodic; 2]).unwrap();
        assert!((g.weights().sum() - 15.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_points_is_rejected() {
        let err = Grid::cartesian_1d(10.0, 4, BoundaryCondition::Periodic).unwrap_err();
        assert!(matches!(err, Error::InvalidDimension(_)));
        assert!(Grid::radial_3d(-1.0, 64).is_err());
    }

    #[test]
    fn grid_construction_is_deterministic() {
        let a = Grid::radial_3d(20.0, 128).unwrap();
        let b = Grid::radial_3d(20.0, 128).unwrap();
        assert_eq!(a.coords(0), b.coords(0));
        assert_eq!(a.weights(), b.weights());
    }

    #[test]
    fn integrate_constant_on_unit_box() {
        let grid = Arc::new(Grid::cartesian_1d(1.0, 64, BoundaryCondition::DirichletZero).unwrap());
        let f = ScalarField::constant(&grid, 1.0);
        assert!((f.integrate() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn integrate_hydrogen_density_on_radial_grid() {
        let grid = Arc::new(Grid::radial_3d(20.0, 512).unwrap());
        let f = ScalarField::from_fn(&grid, |p| (-2.0 * p[0]).exp() / std::f64::consts::PI);
        assert!((f.integrate() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn integrate_odd_function_vanishes() {
        // the periodic grid keeps the unpaired node at -L/2, so the odd
        // function must vanish there
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::DirichletZero] {
            let grid = Arc::new(Grid::cartesian_1d(16.0, 128, bc).unwrap());
            let f = ScalarField::from_fn(&grid, |p| {
                let x = p[0];
                x * (-x * x).exp()
            });
            assert!(f.integrate().abs() < 1e-12, "bc {bc:?}");
        }
    }

    #[test]
    fn midpoint_quadrature_is_exact_for_linear_integrands() {
        let grid = Arc::new(Grid::cartesian_1d(2.0, 32, BoundaryCondition::DirichletZero).unwrap());
        let f = ScalarField::from_fn(&grid, |p| 3.0 * p[0] + 2.0);
        // integral of 3x + 2 over [-1, 1] is 4
        assert!((f.integrate() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn periodic_quadrature_is_exact_for_fourier_modes() {
        let grid = Arc::new(Grid::cartesian_1d(2.0, 32, BoundaryCondition::Periodic).unwrap());
        let f = ScalarField::from_fn(&grid, |p| (2.0 * std::f64::consts::PI * p[0]).cos() + 1.0);
        assert!((f.integrate() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn beta_from_temperature_examples() {
        let u = UnitSystem::default();
        assert!((u.beta_from_temperature(315_775.02).unwrap() - 1.0).abs() < 1e-4);
        assert!((u.beta_from_temperature(5778.0).unwrap() - 54.65).abs() < 5e-3);
        assert!(matches!(
            u.beta_from_temperature(0.0),
            Err(Error::NonpositiveTemperature(_))
        ));
        // monotone decreasing in T
        let b1 = u.beta_from_temperature(10.0).unwrap();
        let b2 = u.beta_from_temperature(20.0).unwrap();
        assert!(b1 > b2);
    }

    #[test]
    fn field_length_must_match_grid() {
        let grid = Arc::new(Grid::cartesian_1d(1.0, 16, BoundaryCondition::Periodic).unwrap());
        assert!(ScalarField::from_values(&grid, Array1::zeros(8)).is_err());
        assert!(ScalarField::from_values(&grid, Array1::from_elem(16, f64::NAN)).is_err());
    }

    #[test]
    fn complex_field_normalizes() {
        let grid = Arc::new(Grid::cartesian_1d(10.0, 64, BoundaryCondition::Periodic).unwrap());
        let mut psi = ComplexField::from_fn(&grid, |p| Complex64::new((-p[0] * p[0]).exp(), 0.1));
        psi.normalize();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
