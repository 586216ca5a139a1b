//! Mode transforms for the exact diffusion and kinetic sub-steps.
//!
//! Each axis is diagonalized in its continuum mode basis: complex Fourier
//! modes on periodic axes, sine modes on zero-boundary axes. Sine transforms
//! on cell-centred grids are evaluated through a length-2n FFT of the odd
//! extension, which keeps the field zero at both walls by construction.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::domain::{Axis, BoundaryCondition, Grid, GridKind};

/// Spectral transform along one axis.
pub(crate) struct AxisTransform {
    pub len: usize,
    pub fft_len: usize,
    odd_extension: bool,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Squared wavenumber per FFT bin.
    pub kappa_sq: Vec<f64>,
}

/// Reusable buffers for one worker applying axis transforms.
#[derive(Default)]
pub(crate) struct Scratch {
    ext: Vec<Complex64>,
    fft: Vec<Complex64>,
}

impl AxisTransform {
    pub fn new(axis: &Axis) -> Self {
        let n = axis.count;
        let length = axis.extent;
        let mut planner = FftPlanner::new();
        match axis.boundary {
            BoundaryCondition::Periodic => {
                let kappa_sq = (0..n)
                    .map(|j| {
                        let f = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
                        let k = 2.0 * std::f64::consts::PI * f / length;
                        k * k
                    })
                    .collect();
                Self {
                    len: n,
                    fft_len: n,
                    odd_extension: false,
                    fwd: planner.plan_fft_forward(n),
                    inv: planner.plan_fft_inverse(n),
                    kappa_sq,
                }
            }
            BoundaryCondition::DirichletZero => {
                let m = 2 * n;
                let kappa_sq = (0..m)
                    .map(|j| {
                        let f = j.min(m - j) as f64;
                        let k = std::f64::consts::PI * f / length;
                        k * k
                    })
                    .collect();
                Self {
                    len: n,
                    fft_len: m,
                    odd_extension: true,
                    fwd: planner.plan_fft_forward(m),
                    inv: planner.plan_fft_inverse(m),
                    kappa_sq,
                }
            }
        }
    }

    /// Builds a per-bin multiplier `f(kappa^2)` with the FFT round-trip
    /// normalization folded in.
    pub fn multiplier(&self, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        let norm = 1.0 / self.fft_len as f64;
        self.kappa_sq.iter().map(|&k2| f(k2) * norm).collect()
    }

    /// Applies transform -> multiplier -> inverse in place on one contiguous
    /// line of samples. `mult` must come from [`Self::multiplier`].
    pub fn apply(&self, data: &mut [Complex64], mult: &[Complex64], scratch: &mut Scratch) {
        debug_assert_eq!(data.len(), self.len);
        debug_assert_eq!(mult.len(), self.fft_len);
        let need = self
            .fwd
            .get_inplace_scratch_len()
            .max(self.inv.get_inplace_scratch_len());
        if scratch.fft.len() < need {
            scratch.fft.resize(need, Complex64::default());
        }
        if self.odd_extension {
            let m = self.fft_len;
            let n = self.len;
            scratch.ext.resize(m, Complex64::default());
            let mut ext = std::mem::take(&mut scratch.ext);
            for j in 0..n {
                ext[j] = data[j];
                ext[m - 1 - j] = -data[j];
            }
            self.run(&mut ext, mult, &mut scratch.fft);
            data.copy_from_slice(&ext[..n]);
            scratch.ext = ext;
        } else {
            self.run(data, mult, &mut scratch.fft);
        }
    }

    fn run(&self, buf: &mut [Complex64], mult: &[Complex64], fft_scratch: &mut [Complex64]) {
        self.fwd.process_with_scratch(buf, fft_scratch);
        for (v, m) in buf.iter_mut().zip(mult.iter()) {
            *v *= m;
        }
        self.inv.process_with_scratch(buf, fft_scratch);
    }
}

/// Kinetic-energy applicator for a whole grid: applies a function of the
/// Laplacian eigenvalue to a flattened field.
pub(crate) struct KineticOp {
    axes: Vec<AxisTransform>,
    dims: Vec<usize>,
    /// Radial coordinates when the grid represents a spherically symmetric
    /// domain; the field is folded through u = r q around the sine step.
    radial: Option<Vec<f64>>,
}

impl KineticOp {
    pub fn new(grid: &Grid) -> Self {
        let axes: Vec<AxisTransform> = grid.axes().iter().map(AxisTransform::new).collect();
        let dims = grid.axes().iter().map(|a| a.count).collect();
        let radial = match grid.kind() {
            GridKind::Radial3d => Some(grid.coords(0).to_vec()),
            _ => None,
        };
        Self { axes, dims, radial }
    }

    pub fn axis(&self, i: usize) -> &AxisTransform {
        &self.axes[i]
    }

    /// Per-axis multipliers for exp(-kappa^2 * t / (2 m)).
    pub fn heat_multipliers(&self, t: f64, mass: f64) -> Vec<Vec<Complex64>> {
        self.axes
            .iter()
            .map(|ax| ax.multiplier(|k2| Complex64::new((-k2 * t / (2.0 * mass)).exp(), 0.0)))
            .collect()
    }

    /// Per-axis multipliers for exp(-i kappa^2 * dt / (2 m)).
    pub fn phase_multipliers(&self, dt: f64, mass: f64) -> Vec<Vec<Complex64>> {
        self.axes
            .iter()
            .map(|ax| ax.multiplier(|k2| (-Complex64::i() * k2 * dt / (2.0 * mass)).exp()))
            .collect()
    }

    /// Applies the per-axis multipliers to a flattened complex field,
    /// including the u = r q fold on radial grids.
    pub fn apply(&self, data: &mut [Complex64], mults: &[Vec<Complex64>], scratch: &mut Scratch) {
        if let Some(r) = &self.radial {
            for (v, ri) in data.iter_mut().zip(r.iter()) {
                *v *= *ri;
            }
        }
        self.apply_native(data, mults, scratch);
        if let Some(r) = &self.radial {
            for (v, ri) in data.iter_mut().zip(r.iter()) {
                *v /= *ri;
            }
        }
    }

    /// Same as [`Self::apply`] but without the radial fold; on radial grids
    /// the data is interpreted as u(r) = r q(r).
    pub fn apply_native(&self, data: &mut [Complex64], mults: &[Vec<Complex64>], scratch: &mut Scratch) {
        match self.dims.len() {
            1 => self.axes[0].apply(data, &mults[0], scratch),
            2 => {
                let (nx, ny) = (self.dims[0], self.dims[1]);
                for row in data.chunks_mut(nx) {
                    self.axes[0].apply(row, &mults[0], scratch);
                }
                let mut column = vec![Complex64::default(); ny];
                for ix in 0..nx {
                    for iy in 0..ny {
                        column[iy] = data[iy * nx + ix];
                    }
                    self.axes[1].apply(&mut column, &mults[1], scratch);
                    for iy in 0..ny {
                        data[iy * nx + ix] = column[iy];
                    }
                }
            }
            _ => unreachable!(),
        }
    }
}

/// Dense matrix of -(1/2m) Laplacian in the grid's working basis
/// (u-space for radial grids, point values otherwise). Only meaningful for
/// one-axis grids.
pub(crate) fn kinetic_matrix_native(grid: &Grid, mass: f64) -> Array2<f64> {
    assert_eq!(grid.ndim(), 1, "dense kinetic matrix needs a one-axis grid");
    let n = grid.len();
    let transform = AxisTransform::new(grid.axis(0));
    let mult = transform.multiplier(|k2| Complex64::new(k2 / (2.0 * mass), 0.0));
    let mut scratch = Scratch::default();
    let mut matrix = Array2::zeros((n, n));
    let mut col = vec![Complex64::default(); n];
    for j in 0..n {
        col.fill(Complex64::default());
        col[j] = Complex64::new(1.0, 0.0);
        transform.apply(&mut col, &mult, &mut scratch);
        for i in 0..n {
            matrix[[i, j]] = col[i].re;
        }
    }
    // symmetrize away FFT round-off
    for i in 0..n {
        for j in 0..i {
            let s = 0.5 * (matrix[[i, j]] + matrix[[j, i]]);
            matrix[[i, j]] = s;
            matrix[[j, i]] = s;
        }
    }
    matrix
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::BoundaryCondition;

    fn naive_sine_roundtrip(data: &[f64], length: f64, g: impl Fn(f64) -> f64) -> Vec<f64> {
        // DST-II analysis / DST-III synthesis on cell centres x_j = (j+1/2)h
        let n = data.len();
        let mut out = vec![0.0; n];
        for k in 1..=n {
            let kappa = std::f64::consts::PI * k as f64 / length;
            let mut coeff = 0.0;
            for (j, &v) in data.iter().enumerate() {
                coeff += v * (kappa * (j as f64 + 0.5) * (length / n as f64)).sin();
            }
            let scale = if k == n { 1.0 / n as f64 } else { 2.0 / n as f64 };
            coeff *= scale * g(kappa * kappa);
            for (j, o) in out.iter_mut().enumerate() {
                *o += coeff * (kappa * (j as f64 + 0.5) * (length / n as f64)).sin();
            }
        }
        out
    }

    fn naive_fourier_roundtrip(data: &[f64], length: f64, g: impl Fn(f64) -> f64) -> Vec<f64> {
        let n = data.len();
        let mut out = vec![0.0; n];
        for bin in 0..n {
            let f = if bin <= n / 2 { bin as f64 } else { bin as f64 - n as f64 };
            let kappa = 2.0 * std::f64::consts::PI * f / length;
            let mut re = 0.0;
            let mut im = 0.0;
            for (j, &v) in data.iter().enumerate() {
                let phase = -2.0 * std::f64::consts::PI * (bin * j) as f64 / n as f64;
                re += v * phase.cos();
                im += v * phase.sin();
            }
            let gk = g(kappa * kappa) / n as f64;
            for (j, o) in out.iter_mut().enumerate() {
                let phase = 2.0 * std::f64::consts::PI * (bin * j) as f64 / n as f64;
                *o += gk * (re * phase.cos() - im * phase.sin());
            }
        }
        out
    }

    #[test]
    fn sine_transform_matches_naive_reference() {
        let axis = Axis {
            extent: 3.0,
            count: 16,
            boundary: BoundaryCondition::DirichletZero,
            spacing: 3.0 / 16.0,
        };
        let t = AxisTransform::new(&axis);
        let data: Vec<f64> = (0..16).map(|i| ((i * 7 + 3) % 11) as f64 / 11.0 - 0.4).collect();
        let g = |k2: f64| (-0.05 * k2).exp();
        let expect = naive_sine_roundtrip(&data, 3.0, g);

        let mut buf: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mult = t.multiplier(|k2| Complex64::new(g(k2), 0.0));
        t.apply(&mut buf, &mult, &mut Scratch::default());
        for (a, b) in buf.iter().zip(expect.iter()) {
            assert!((a.re - b).abs() < 1e-12, "{} vs {}", a.re, b);
            assert!(a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_transform_matches_naive_reference() {
        let axis = Axis {
            extent: 5.0,
            count: 12,
            boundary: BoundaryCondition::Periodic,
            spacing: 5.0 / 12.0,
        };
        let t = AxisTransform::new(&axis);
        let data: Vec<f64> = (0..12).map(|i| (i as f64 * 0.7).sin() + 0.2).collect();
        let g = |k2: f64| 1.0 / (1.0 + 0.3 * k2);
        let expect = naive_fourier_roundtrip(&data, 5.0, g);

        let mut buf: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mult = t.multiplier(|k2| Complex64::new(g(k2), 0.0));
        t.apply(&mut buf, &mult, &mut Scratch::default());
        for (a, b) in buf.iter().zip(expect.iter()) {
            assert!((a.re - b).abs() < 1e-12, "{} vs {}", a.re, b);
        }
    }

    #[test]
    fn identity_multiplier_is_identity() {
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::DirichletZero] {
            let axis = Axis { extent: 2.0, count: 32, boundary: bc, spacing: 2.0 / 32.0 };
            let t = AxisTransform::new(&axis);
            let mult = t.multiplier(|_| Complex64::new(1.0, 0.0));
            let mut buf: Vec<Complex64> =
                (0..32).map(|i| Complex64::new((i as f64).cos(), (i as f64 * 0.3).sin())).collect();
            let orig = buf.clone();
            t.apply(&mut buf, &mult, &mut Scratch::default());
            for (a, b) in buf.iter().zip(orig.iter()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn kinetic_matrix_is_symmetric_with_box_spectrum() {
        let grid = Grid::cartesian_1d(1.0, 16, BoundaryCondition::DirichletZero).unwrap();
        let k = kinetic_matrix_native(&grid, 1.0);
        for i in 0..16 {
            for j in 0..16 {
                assert!((k[[i, j]] - k[[j, i]]).abs() < 1e-12);
            }
        }
        // its eigenvalues are exactly (n pi / L)^2 / 2; check the trace
        let expect: f64 = (1..=16).map(|n| (n as f64 * std::f64::consts::PI).powi(2) / 2.0).sum();
        let trace: f64 = (0..16).map(|i| k[[i, i]]).sum();
        assert!(((trace - expect) / expect).abs() < 1e-12);
    }
}
