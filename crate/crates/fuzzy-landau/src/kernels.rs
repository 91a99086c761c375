//! Interaction kernels `A(|z|)`, the transverse projector, the derived
//! coefficients `a`, `b`, `c`, the clamped kernel `A_n`, and spatial coupling
//! kernels `κ` on the torus.
//!
//! For any radial weight `A`, the matrix kernel is `a(z) = A(|z|) Π_{z⊥}` and
//! the derived coefficients are
//!
//! ```text
//!   b(z) = -(d-1) z A(|z|) / |z|^2
//!   c(z) = -(d-1) [ (d-2) A(|z|)/|z|^2 + A'(|z|)/|z| ]
//! ```
//!
//! The `A'/|z|` term in `c` is what row-wise differentiation of `b` produces;
//! it disagrees with a published `A'/|z|^2` variant, and the finite-difference
//! oracles in the test suite confirm the form used here. For the pure power
//! law `A = |z|^{2+γ}` this reduces to `c = -(d-1)(d+γ)|z|^γ`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::Grid;
use crate::la::{norm_sq, MatD, VecD, ZERO_MAT, ZERO_VEC};

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("gamma must lie in (-{gamma_d}, 1] for PowerLaw in d={dim}")]
    PowerLawGammaRange { gamma_d: usize, dim: usize },
    #[error("gamma must be at most 1 for bounded kernel families")]
    BoundedGammaRange,
    #[error("bounded_scale must be positive")]
    BadScale,
    #[error("clamp_n must be at least 1")]
    BadClamp,
    #[error("singular kernel at zero offset; enable clamp or rely on diagonal-pair exclusion")]
    SingularAtZero,
    #[error("kernel argument must be nonnegative")]
    NegativeRadius,
    #[error("exp-decay rate must be positive")]
    BadRate,
    #[error("uniform kappa value must be nonnegative")]
    BadUniformValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VelocityKernelFamily {
    /// `A(r) = r^{2+gamma}`, the interaction kernel of Coulomb type.
    PowerLaw,
    /// `A(r) = C ⟨r⟩^{2+gamma}`, bounded comparison family.
    BoundedSoft,
    /// `A(r) = C r^2 ⟨r⟩^{gamma}`, quadratically weighted comparison family.
    QuadraticWeighted,
}

/// Velocity interaction kernel with an optional regularizing clamp.
///
/// The clamp at level `n` leaves `A` untouched on `[1/n, n]`, freezes it to
/// `A(1/n)` on `[0, 1/(n+1)]` and to `A(n)` on `[n+1, ∞)`, and bridges the two
/// transition bands linearly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VelocityKernelSpec {
    pub family: VelocityKernelFamily,
    pub gamma: f64,
    #[serde(default)]
    pub clamp_n: Option<u32>,
    #[serde(default = "default_scale")]
    pub bounded_scale: f64,
}

fn default_scale() -> f64 {
    1.0
}

/// Japanese bracket `⟨r⟩ = sqrt(1 + r^2)`.
#[inline]
pub fn bracket(r: f64) -> f64 {
    (1.0 + r * r).sqrt()
}

/// `⟨v⟩` of a d-vector.
#[inline]
pub fn bracket_vec(v: &VecD, dim: usize) -> f64 {
    (1.0 + norm_sq(v, dim)).sqrt()
}

impl VelocityKernelSpec {
    pub fn power_law(gamma: f64) -> Self {
        VelocityKernelSpec {
            family: VelocityKernelFamily::PowerLaw,
            gamma,
            clamp_n: None,
            bounded_scale: 1.0,
        }
    }

    pub fn with_clamp(mut self, n: u32) -> Self {
        self.clamp_n = Some(n);
        self
    }

    pub fn validate(&self, dim: usize) -> Result<(), KernelError> {
        match self.family {
            VelocityKernelFamily::PowerLaw => {
                let gamma_d = dim.min(4);
                if !(self.gamma > -(gamma_d as f64) && self.gamma <= 1.0) {
                    return Err(KernelError::PowerLawGammaRange { gamma_d, dim });
                }
            }
            VelocityKernelFamily::BoundedSoft | VelocityKernelFamily::QuadraticWeighted => {
                if !(self.gamma <= 1.0) {
                    return Err(KernelError::BoundedGammaRange);
                }
                if !(self.bounded_scale > 0.0) {
                    return Err(KernelError::BadScale);
                }
            }
        }
        if let Some(n) = self.clamp_n {
            if n < 1 {
                return Err(KernelError::BadClamp);
            }
        }
        Ok(())
    }

    /// True when the unclamped kernel diverges as `r → 0`.
    pub fn singular_at_zero(&self) -> bool {
        matches!(self.family, VelocityKernelFamily::PowerLaw) && self.gamma <= -2.0
    }

    fn raw_value(&self, r: f64) -> Result<f64, KernelError> {
        match self.family {
            VelocityKernelFamily::PowerLaw => {
                let p = 2.0 + self.gamma;
                if r == 0.0 {
                    if p > 0.0 {
                        Ok(0.0)
                    } else {
                        Err(KernelError::SingularAtZero)
                    }
                } else {
                    Ok(r.powf(p))
                }
            }
            VelocityKernelFamily::BoundedSoft => {
                Ok(self.bounded_scale * bracket(r).powf(2.0 + self.gamma))
            }
            VelocityKernelFamily::QuadraticWeighted => {
                Ok(self.bounded_scale * r * r * bracket(r).powf(self.gamma))
            }
        }
    }

    fn raw_prime(&self, r: f64) -> Result<f64, KernelError> {
        match self.family {
            VelocityKernelFamily::PowerLaw => {
                let p = 2.0 + self.gamma;
                if r == 0.0 {
                    if p > 1.0 {
                        Ok(0.0)
                    } else {
                        Err(KernelError::SingularAtZero)
                    }
                } else {
                    Ok(p * r.powf(p - 1.0))
                }
            }
            VelocityKernelFamily::BoundedSoft => {
                Ok(self.bounded_scale * (2.0 + self.gamma) * r * bracket(r).powf(self.gamma))
            }
            VelocityKernelFamily::QuadraticWeighted => Ok(self.bounded_scale
                * (2.0 * r * bracket(r).powf(self.gamma)
                    + self.gamma * r * r * r * bracket(r).powf(self.gamma - 2.0))),
        }
    }

    /// Kernel value; applies the clamp when configured.
    ///
    /// The transition bands `(1/(n+1), 1/n)` and `(n, n+1)` interpolate
    /// linearly between plateau and identity piece; since both band endpoints
    /// carry the same value (`A(1/n)` resp. `A(n)`), the bands are flat and
    /// the clamped kernel reduces to `A(clamp(r, 1/n, n))`, continuous on
    /// `[0, ∞)`.
    pub fn a_value(&self, r: f64) -> Result<f64, KernelError> {
        if r < 0.0 || r.is_nan() {
            return Err(KernelError::NegativeRadius);
        }
        match self.clamp_n {
            None => self.raw_value(r),
            Some(n) => {
                let n = n as f64;
                self.raw_value(r.clamp(1.0 / n, n))
            }
        }
    }

    /// Derivative `A'(r)` consistent with `a_value`, branch-wise on the clamp:
    /// zero on the plateaus and bands, the raw derivative on `[1/n, n]`.
    pub fn a_prime(&self, r: f64) -> Result<f64, KernelError> {
        if r < 0.0 || r.is_nan() {
            return Err(KernelError::NegativeRadius);
        }
        match self.clamp_n {
            None => self.raw_prime(r),
            Some(n) => {
                let n = n as f64;
                if r < 1.0 / n || r > n {
                    Ok(0.0)
                } else {
                    self.raw_prime(r)
                }
            }
        }
    }
}

/// Projection onto `z^⊥`: `Id - z⊗z/|z|^2`, with the zero matrix at `z = 0`.
pub fn projector(z: &VecD, dim: usize) -> MatD {
    let zz = norm_sq(z, dim);
    let mut out = ZERO_MAT;
    if zz == 0.0 {
        return out;
    }
    for i in 0..dim {
        for j in 0..dim {
            out[i][j] = if i == j { 1.0 } else { 0.0 };
            out[i][j] -= z[i] * z[j] / zz;
        }
    }
    out
}

/// `a(z) = A(|z|) Π_{z⊥}`.
pub fn a_matrix(spec: &VelocityKernelSpec, z: &VecD, dim: usize) -> Result<MatD, KernelError> {
    let r = norm_sq(z, dim).sqrt();
    if r == 0.0 {
        // projector(0) = 0 annihilates the diagonal pair regardless of A(0)
        return Ok(ZERO_MAT);
    }
    let a = spec.a_value(r)?;
    let mut pi = projector(z, dim);
    for row in pi.iter_mut().take(dim) {
        for entry in row.iter_mut().take(dim) {
            *entry *= a;
        }
    }
    Ok(pi)
}

/// `b(z) = -(d-1) z A(|z|) / |z|^2`; zero at `z = 0` by odd symmetry.
pub fn b_vector(spec: &VelocityKernelSpec, z: &VecD, dim: usize) -> Result<VecD, KernelError> {
    let r2 = norm_sq(z, dim);
    if r2 == 0.0 {
        return Ok(ZERO_VEC);
    }
    let a = spec.a_value(r2.sqrt())?;
    let scale = -((dim - 1) as f64) * a / r2;
    let mut out = ZERO_VEC;
    for i in 0..dim {
        out[i] = scale * z[i];
    }
    Ok(out)
}

/// `c(z) = -(d-1) [ (d-2) A/|z|^2 + A'(|z|)/|z| ]`.
///
/// For `A = |z|^{2+γ}` this is `-(d-1)(d+γ)|z|^γ`. The value at `z = 0` is
/// not defined for singular families; convolution assembly skips the diagonal
/// offset instead.
pub fn c_scalar(spec: &VelocityKernelSpec, z: &VecD, dim: usize) -> Result<f64, KernelError> {
    let r2 = norm_sq(z, dim);
    if r2 == 0.0 {
        return Err(KernelError::SingularAtZero);
    }
    let r = r2.sqrt();
    let a = spec.a_value(r)?;
    let ap = spec.a_prime(r)?;
    Ok(-((dim - 1) as f64) * (((dim - 2) as f64) * a / r2 + ap / r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpatialKernelSpec {
    /// Constant coupling, `κ ≡ value`.
    Uniform { value: f64 },
    /// `κ(δ) = k1 exp(-k2 ⟨δ⟩)` with `k1` fixed by discrete unit L¹ mass.
    ExpDecay { rate: f64 },
}

impl SpatialKernelSpec {
    pub fn uniform_one() -> Self {
        SpatialKernelSpec::Uniform { value: 1.0 }
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        match self {
            SpatialKernelSpec::Uniform { value } => {
                if !(*value >= 0.0) {
                    return Err(KernelError::BadUniformValue);
                }
            }
            SpatialKernelSpec::ExpDecay { rate } => {
                if !(*rate > 0.0) {
                    return Err(KernelError::BadRate);
                }
            }
        }
        Ok(())
    }
}

/// Per-offset spatial weights on the torus, indexed by the periodic offset
/// multi-index (row-major, `n_x^d` entries).
#[derive(Debug, Clone)]
pub struct KappaTable {
    pub values: Vec<f64>,
    /// Normalization constant actually applied (1 for Uniform).
    pub k1: f64,
}

impl KappaTable {
    #[inline]
    pub fn at(&self, offset_flat: usize) -> f64 {
        self.values[offset_flat]
    }
}

/// Build the κ lookup over all periodic cell offsets. Offsets use the
/// minimal-image displacement, so the table is even: `κ(δ) = κ(-δ)`.
pub fn kappa_table(spec: &SpatialKernelSpec, grid: &Grid) -> Result<KappaTable, KernelError> {
    spec.validate()?;
    let gspec = &grid.spec;
    let dim = gspec.dim;
    let n_x = gspec.n_x;
    let n_off = gspec.n_xcells();
    let dx = gspec.dx();
    match spec {
        SpatialKernelSpec::Uniform { value } => Ok(KappaTable {
            values: vec![*value; n_off],
            k1: 1.0,
        }),
        SpatialKernelSpec::ExpDecay { rate } => {
            let mut raw = vec![0.0; n_off];
            for (flat, val) in raw.iter_mut().enumerate() {
                let mut rem = flat;
                let mut d2 = 0.0;
                for _ in 0..dim {
                    let o = rem % n_x;
                    rem /= n_x;
                    let delta = Grid::minimal_image(o as f64 * dx);
                    d2 += delta * delta;
                }
                *val = (-rate * (1.0 + d2).sqrt()).exp();
            }
            let dxd = dx.powi(dim as i32);
            let total: f64 = raw.iter().sum::<f64>() * dxd;
            let k1 = 1.0 / total;
            for v in &mut raw {
                *v *= k1;
            }
            Ok(KappaTable { values: raw, k1 })
        }
    }
}

/// Flat index of the periodic offset `x_p - x_q` between two spatial cells.
#[inline]
pub fn x_offset_flat(grid: &Grid, x_p: usize, x_q: usize) -> usize {
    let n_x = grid.spec.n_x;
    let dim = grid.dim();
    let mut p = x_p;
    let mut q = x_q;
    let mut flat = 0;
    // row-major decode of both, re-encode the wrapped difference
    let mut digits = [0usize; 3];
    for a in (0..dim).rev() {
        let dp = p % n_x;
        let dq = q % n_x;
        p /= n_x;
        q /= n_x;
        digits[a] = (dp + n_x - dq) % n_x;
    }
    for a in 0..dim {
        flat = flat * n_x + digits[a];
    }
    flat
}
