//! Phase-space discretization: torus × velocity-box tensor grids, cell-averaged
//! fields, midpoint quadrature, and discrete velocity gradients.
//!
//! The velocity gradient uses second-order central differences in the interior
//! and second-order one-sided stencils at the box faces, which makes it exact
//! on fields that are affine or quadratic in `v` at every node. The divergence
//! `div_v` is the exact negative adjoint of the gradient under the plain grid
//! inner product, so discrete integration by parts is an identity, not an
//! approximation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::la::VecD;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("dim must be 2 or 3, got {0}")]
    BadDim(usize),
    #[error("n_x must be at least 1")]
    BadNx,
    #[error("n_v must be even")]
    OddNv,
    #[error("n_v must be at least 4")]
    SmallNv,
    #[error("v_max must be positive")]
    BadVmax,
    #[error("field values must be nonnegative and finite")]
    BadFieldValues,
}

/// Tensor discretization of `T^d × [-v_max, v_max]^d`.
///
/// The torus has side length 1 per axis. `n_v` must be even so the velocity
/// grid is symmetric under `v → -v` and `v = 0` falls on a cell edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dim: usize,
    pub n_x: usize,
    pub n_v: usize,
    pub v_max: f64,
}

impl GridSpec {
    pub fn new(dim: usize, n_x: usize, n_v: usize, v_max: f64) -> Result<Self, GridError> {
        let spec = GridSpec { dim, n_x, n_v, v_max };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.dim != 2 && self.dim != 3 {
            return Err(GridError::BadDim(self.dim));
        }
        if self.n_x < 1 {
            return Err(GridError::BadNx);
        }
        if self.n_v % 2 != 0 {
            return Err(GridError::OddNv);
        }
        if self.n_v < 4 {
            return Err(GridError::SmallNv);
        }
        if !(self.v_max > 0.0) {
            return Err(GridError::BadVmax);
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n_x as f64
    }

    pub fn dv(&self) -> f64 {
        2.0 * self.v_max / self.n_v as f64
    }

    /// Number of spatial cells `n_x^d`.
    pub fn n_xcells(&self) -> usize {
        self.n_x.pow(self.dim as u32)
    }

    /// Number of velocity cells `n_v^d`.
    pub fn n_vcells(&self) -> usize {
        self.n_v.pow(self.dim as u32)
    }

    pub fn n_cells(&self) -> usize {
        self.n_xcells() * self.n_vcells()
    }

    /// Cell measure `dx^d · dv^d`.
    pub fn cell_measure(&self) -> f64 {
        self.dx().powi(self.dim as i32) * self.dv().powi(self.dim as i32)
    }

    /// Spec of the spatially collapsed (`n_x = 1`) grid carrying the same
    /// velocity box.
    pub fn homogeneous(&self) -> GridSpec {
        GridSpec { n_x: 1, ..*self }
    }
}

/// Realized grid: cell-center coordinate axes for `x` (periodic) and `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub spec: GridSpec,
    x_axis: Vec<f64>,
    v_axis: Vec<f64>,
}

pub fn build_grid(spec: GridSpec) -> Result<Grid, GridError> {
    spec.validate()?;
    let dx = spec.dx();
    let dv = spec.dv();
    let x_axis = (0..spec.n_x).map(|i| (i as f64 + 0.5) * dx).collect();
    let v_axis = (0..spec.n_v)
        .map(|i| -spec.v_max + (i as f64 + 0.5) * dv)
        .collect();
    Ok(Grid { spec, x_axis, v_axis })
}

impl Grid {
    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn x_axis(&self) -> &[f64] {
        &self.x_axis
    }

    pub fn v_axis(&self) -> &[f64] {
        &self.v_axis
    }

    /// Decode a flat spatial index into per-axis indices (row-major).
    #[inline]
    pub fn x_multi(&self, mut flat: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for a in (0..self.dim()).rev() {
            out[a] = flat % self.spec.n_x;
            flat /= self.spec.n_x;
        }
        out
    }

    #[inline]
    pub fn v_multi(&self, mut flat: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for a in (0..self.dim()).rev() {
            out[a] = flat % self.spec.n_v;
            flat /= self.spec.n_v;
        }
        out
    }

    #[inline]
    pub fn x_coords(&self, flat: usize) -> VecD {
        let ix = self.x_multi(flat);
        let mut out = [0.0; 3];
        for a in 0..self.dim() {
            out[a] = self.x_axis[ix[a]];
        }
        out
    }

    #[inline]
    pub fn v_coords(&self, flat: usize) -> VecD {
        let iv = self.v_multi(flat);
        let mut out = [0.0; 3];
        for a in 0..self.dim() {
            out[a] = self.v_axis[iv[a]];
        }
        out
    }

    /// Wrap a torus coordinate difference into the minimal image `[-1/2, 1/2)`.
    #[inline]
    pub fn minimal_image(delta: f64) -> f64 {
        let mut d = delta - delta.round();
        if d >= 0.5 {
            d -= 1.0;
        } else if d < -0.5 {
            d += 1.0;
        }
        d
    }

    /// Torus coordinates of cell `flat` wrapped to `[-1/2, 1/2)` around the
    /// origin, used by `|x|^2` moments and the Gaussian floor.
    #[inline]
    pub fn x_coords_centered(&self, flat: usize) -> VecD {
        let mut c = self.x_coords(flat);
        for a in 0..self.dim() {
            c[a] = Self::minimal_image(c[a]);
        }
        c
    }

    #[inline]
    pub fn cell_index(&self, x_flat: usize, v_flat: usize) -> usize {
        x_flat * self.spec.n_vcells() + v_flat
    }
}

/// Nonnegative cell-averaged distribution `f(x, v)` with midpoint quadrature.
///
/// Values are stored x-major: `idx = x_flat · n_v^d + v_flat`, with row-major
/// multi-index order within each block.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: &Grid) -> Field {
        Field {
            grid: grid.clone(),
            values: vec![0.0; grid.spec.n_cells()],
        }
    }

    /// Sample `f(x, v)` at every cell center.
    pub fn from_fn<F: Fn(&VecD, &VecD) -> f64>(grid: &Grid, f: F) -> Field {
        let nx = grid.spec.n_xcells();
        let nv = grid.spec.n_vcells();
        let mut values = vec![0.0; nx * nv];
        for xf in 0..nx {
            let x = grid.x_coords(xf);
            for vf in 0..nv {
                let v = grid.v_coords(vf);
                values[grid.cell_index(xf, vf)] = f(&x, &v);
            }
        }
        Field { grid: grid.clone(), values }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(GridError::BadFieldValues);
        }
        Ok(())
    }

    pub fn measure(&self) -> f64 {
        self.grid.spec.cell_measure()
    }

    pub fn mass(&self) -> f64 {
        self.measure() * self.values.iter().sum::<f64>()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Rescale so the total mass is `target`.
    pub fn renormalize(&mut self, target: f64) {
        let m = self.mass();
        if m > 0.0 {
            let s = target / m;
            for v in &mut self.values {
                *v *= s;
            }
        }
    }
}

/// Maxwellian with density `rho`, mean velocity `u` and temperature `t`,
/// uniform across the torus.
pub fn maxwellian(grid: &Grid, rho: f64, u: &VecD, t: f64) -> Field {
    assert!(rho > 0.0 && t > 0.0, "maxwellian requires rho > 0 and T > 0");
    let d = grid.dim();
    let norm = rho / (2.0 * std::f64::consts::PI * t).powf(d as f64 / 2.0);
    Field::from_fn(grid, |_x, v| {
        let mut q = 0.0;
        for a in 0..d {
            let dv = v[a] - u[a];
            q += dv * dv;
        }
        norm * (-q / (2.0 * t)).exp()
    })
}

/// Midpoint-rule integral `w · Σ weight(x, v) · f`.
pub fn integrate<F: Fn(&VecD, &VecD) -> f64>(field: &Field, weight: F) -> f64 {
    let grid = &field.grid;
    let nv = grid.spec.n_vcells();
    let mut total = 0.0;
    for xf in 0..grid.spec.n_xcells() {
        let x = grid.x_coords(xf);
        let mut slice_sum = 0.0;
        for vf in 0..nv {
            let v = grid.v_coords(vf);
            slice_sum += weight(&x, &v) * field.values[grid.cell_index(xf, vf)];
        }
        total += slice_sum;
    }
    field.measure() * total
}

/// Per-axis components of a velocity-space vector field on the grid.
#[derive(Debug, Clone)]
pub struct VectorField {
    pub comps: Vec<Vec<f64>>,
}

/// Stride of velocity axis `a` within a velocity block.
#[inline]
fn v_stride(spec: &GridSpec, axis: usize) -> usize {
    spec.n_v.pow((spec.dim - 1 - axis) as u32)
}

/// Apply the discrete `∂/∂v_a` to raw cell values.
///
/// Exact on constants, affine and quadratic profiles in `v` at every node,
/// including the box faces.
pub fn gradient_axis(grid: &Grid, values: &[f64], axis: usize) -> Vec<f64> {
    let spec = &grid.spec;
    let n_v = spec.n_v;
    let nvd = spec.n_vcells();
    let stride = v_stride(spec, axis);
    let inv2dv = 1.0 / (2.0 * spec.dv());
    let mut out = vec![0.0; values.len()];
    for x_block in 0..spec.n_xcells() {
        let base = x_block * nvd;
        for vf in 0..nvd {
            let i = (vf / stride) % n_v;
            let idx = base + vf;
            out[idx] = if i == 0 {
                (-3.0 * values[idx] + 4.0 * values[idx + stride] - values[idx + 2 * stride])
                    * inv2dv
            } else if i == n_v - 1 {
                (3.0 * values[idx] - 4.0 * values[idx - stride] + values[idx - 2 * stride])
                    * inv2dv
            } else {
                (values[idx + stride] - values[idx - stride]) * inv2dv
            };
        }
    }
    out
}

/// Discrete velocity gradient of raw values, one component per axis.
pub fn gradient_v_values(grid: &Grid, values: &[f64]) -> VectorField {
    let comps = (0..grid.dim())
        .map(|a| gradient_axis(grid, values, a))
        .collect();
    VectorField { comps }
}

pub fn gradient_v(field: &Field) -> VectorField {
    gradient_v_values(&field.grid, &field.values)
}

/// Exact negative adjoint of `gradient_v` under the grid inner product:
/// `Σ φ · div_v(Ψ) = -Σ (∇_v φ) · Ψ` holds to machine precision.
pub fn div_v(grid: &Grid, flux: &VectorField) -> Vec<f64> {
    let spec = &grid.spec;
    let n_v = spec.n_v;
    let nvd = spec.n_vcells();
    let inv2dv = 1.0 / (2.0 * spec.dv());
    let mut out = vec![0.0; spec.n_cells()];
    for (axis, comp) in flux.comps.iter().enumerate() {
        let stride = v_stride(spec, axis);
        for x_block in 0..spec.n_xcells() {
            let base = x_block * nvd;
            for vf in 0..nvd {
                let i = (vf / stride) % n_v;
                let idx = base + vf;
                let w = comp[idx];
                // Scatter the transposed stencil, negated.
                if i == 0 {
                    out[idx] += 3.0 * inv2dv * w;
                    out[idx + stride] -= 4.0 * inv2dv * w;
                    out[idx + 2 * stride] += inv2dv * w;
                } else if i == n_v - 1 {
                    out[idx] -= 3.0 * inv2dv * w;
                    out[idx - stride] += 4.0 * inv2dv * w;
                    out[idx - 2 * stride] -= inv2dv * w;
                } else {
                    out[idx + stride] -= inv2dv * w;
                    out[idx - stride] += inv2dv * w;
                }
            }
        }
    }
    // The scatter above accumulates -Dᵀ directly: every coefficient enters
    // negated relative to the gradient rows, so no final sign flip.
    out
}

/// Velocity-only field `F(v)` with quadrature measure `dv^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct VField {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl VField {
    /// Lift to a `Field` on the spatially collapsed grid (`n_x = 1`, so
    /// `dx = 1` and the cell measure matches `dv^d`).
    pub fn to_field(&self) -> Field {
        let grid = build_grid(self.spec.homogeneous()).expect("valid spec");
        Field {
            grid,
            values: self.values.clone(),
        }
    }

    pub fn mass(&self) -> f64 {
        let dvd = self.spec.dv().powi(self.spec.dim as i32);
        dvd * self.values.iter().sum::<f64>()
    }
}

/// `F(v) = ∫ f dx` by the x-sum (torus volume 1).
pub fn marginal_over_x(field: &Field) -> VField {
    let spec = field.grid.spec;
    let nv = spec.n_vcells();
    let dxd = spec.dx().powi(spec.dim as i32);
    let mut values = vec![0.0; nv];
    for xf in 0..spec.n_xcells() {
        let base = xf * nv;
        for vf in 0..nv {
            values[vf] += field.values[base + vf];
        }
    }
    for v in &mut values {
        *v *= dxd;
    }
    VField { spec, values }
}
