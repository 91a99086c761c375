//! Convolved collision coefficients and the collision operator in two
//! independent discrete forms.
//!
//! The metric form is built from pairwise log-gradient differences,
//!
//! ```text
//!   Φ_p = w Σ_q κ(x_p - x_q) A(|v_p - v_q|) Π_pq (g_p - g_q) f_q,
//!   rhs = div_v(f ⊙ Φ),      g = ∇_v log f,
//! ```
//!
//! with `div_v` the exact negative adjoint of the gradient. Consequences that
//! hold per evaluation, not just in the limit: total mass of the rhs vanishes
//! identically, momentum and energy vanish through the projector algebra, and
//! `⟨1 + log f, rhs⟩ = -D(f)` with the pairwise entropy dissipation `D ≥ 0`.
//!
//! The divergence form `div_v(ā ∇_v f - b̄ f)` shares the coefficients but not
//! the structure; the two agree at second order in `dv` on smooth fields.
//!
//! Both the coefficient assembly and the metric flux are evaluated by
//! factorized offset sums (velocity convolution per spatial slice, then the
//! spatial κ-convolution). An FFT backend accelerates the velocity
//! convolutions and must agree with the direct sums to 1e-10 relative.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

use crate::grid::{div_v, gradient_v_values, Field, Grid, VectorField};
use crate::kernels::{
    a_matrix, b_vector, c_scalar, kappa_table, projector, KappaTable, KernelError,
    SpatialKernelSpec, VelocityKernelSpec,
};
use crate::la::{MatD, VecD, ZERO_MAT, ZERO_VEC};

/// Hard floor guarding `log f` mid-run; keeps `log` finite without
/// perturbing any cell a solver would ever visit.
pub const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, Error)]
pub enum CollisionError {
    #[error("assembly with unclamped PowerLaw gamma <= -2 requires clamp_n (A(0) is undefined at the diagonal offset)")]
    RequiresClamp,
    #[error("field has negative cells; metric form requires a floored positive field")]
    NegativeField,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Convolution backend for the velocity stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Factorized direct offset summation; the reference path.
    #[default]
    Direct,
    /// Zero-padded FFT convolution; must match Direct to 1e-10 relative.
    Fft,
}

/// Per-cell convolved coefficients `ā`, `b̄`, `c̄`.
#[derive(Debug, Clone)]
pub struct CoefficientField {
    pub a: Vec<MatD>,
    pub b: Vec<VecD>,
    pub c: Vec<f64>,
    pub grid: Grid,
}

/// Output of the metric-form evaluation. `dissipation` is the summation-by-
/// parts identity value `w Σ f g·Φ`, equal to the pairwise dissipation in
/// exact arithmetic.
#[derive(Debug, Clone)]
pub struct MetricRhs {
    pub rhs: Vec<f64>,
    pub dissipation: f64,
}

/// Packed index pairs of the symmetric d×d matrix components.
fn sym_pairs(dim: usize) -> &'static [(usize, usize)] {
    match dim {
        2 => &[(0, 0), (0, 1), (1, 1)],
        3 => &[(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)],
        _ => unreachable!("dim is validated to 2 or 3"),
    }
}

/// Position of component (i,j) in the packed symmetric layout.
#[inline]
fn sym_index(dim: usize, i: usize, j: usize) -> usize {
    let (lo, hi) = (i.min(j), i.max(j));
    match dim {
        2 => match (lo, hi) {
            (0, 0) => 0,
            (0, 1) => 1,
            _ => 2,
        },
        _ => match (lo, hi) {
            (0, 0) => 0,
            (0, 1) => 1,
            (0, 2) => 2,
            (1, 1) => 3,
            (1, 2) => 4,
            _ => 5,
        },
    }
}

/// Velocity-offset kernel tables over the lattice `[-(n_v-1), n_v-1]^d`.
struct PairTables {
    /// packed symmetric components of `a = A·Π`
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    c: Vec<f64>,
    /// scalar `A` values
    aval: Vec<f64>,
    /// projector entries, packed like `a`
    pi: Vec<Vec<f64>>,
}

impl PairTables {
    fn build(grid: &Grid, vspec: &VelocityKernelSpec) -> Result<PairTables, CollisionError> {
        let dim = grid.dim();
        let n_v = grid.spec.n_v;
        let dv = grid.spec.dv();
        let side = 2 * n_v - 1;
        let n_off = side.pow(dim as u32);
        let pairs = sym_pairs(dim);
        let mut a = vec![vec![0.0; n_off]; pairs.len()];
        let mut b = vec![vec![0.0; n_off]; dim];
        let mut c = vec![0.0; n_off];
        let mut aval = vec![0.0; n_off];
        let mut pi = vec![vec![0.0; n_off]; pairs.len()];
        for flat in 0..n_off {
            let mut rem = flat;
            let mut z = ZERO_VEC;
            let mut is_zero = true;
            for axis in (0..dim).rev() {
                let o = rem % side;
                rem /= side;
                let delta = o as isize - (n_v as isize - 1);
                if delta != 0 {
                    is_zero = false;
                }
                z[axis] = delta as f64 * dv;
            }
            if is_zero {
                // diagonal velocity offset: a and Π vanish through the
                // projector convention; b and c are skipped by convention
                // (odd symmetry for b, integrable singularity for c)
                continue;
            }
            let am = a_matrix(vspec, &z, dim)?;
            let bv = b_vector(vspec, &z, dim)?;
            let cs = c_scalar(vspec, &z, dim)?;
            let pim = projector(&z, dim);
            let r = crate::la::norm_sq(&z, dim).sqrt();
            aval[flat] = vspec.a_value(r)?;
            for (k, &(i, j)) in pairs.iter().enumerate() {
                a[k][flat] = am[i][j];
                pi[k][flat] = pim[i][j];
            }
            for (i, bk) in b.iter_mut().enumerate() {
                bk[flat] = bv[i];
            }
            c[flat] = cs;
        }
        Ok(PairTables { a, b, c, aval, pi })
    }
}

/// d-dimensional complex FFT convolution on a zero-padded `(2 n_v)^d` cube.
struct FftConv {
    dim: usize,
    n_v: usize,
    pad: usize,
    n_pad: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    spec_a: Vec<Vec<Complex64>>,
    spec_b: Vec<Vec<Complex64>>,
    spec_c: Vec<Complex64>,
}

impl FftConv {
    fn build(grid: &Grid, tables: &PairTables) -> FftConv {
        let dim = grid.dim();
        let n_v = grid.spec.n_v;
        let pad = 2 * n_v;
        let n_pad = pad.pow(dim as u32);
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(pad);
        let inv = planner.plan_fft_inverse(pad);
        let mut this = FftConv {
            dim,
            n_v,
            pad,
            n_pad,
            fwd,
            inv,
            spec_a: Vec::new(),
            spec_b: Vec::new(),
            spec_c: Vec::new(),
        };
        let side = 2 * n_v - 1;
        this.spec_a = tables
            .a
            .iter()
            .map(|t| this.kernel_spectrum(t, side))
            .collect();
        this.spec_b = tables
            .b
            .iter()
            .map(|t| this.kernel_spectrum(t, side))
            .collect();
        this.spec_c = this.kernel_spectrum(&tables.c, side);
        this
    }

    /// Embed an offset table into the padded cube (negative offsets wrap) and
    /// transform.
    fn kernel_spectrum(&self, table: &[f64], side: usize) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n_pad];
        let dim = self.dim;
        for (flat, &val) in table.iter().enumerate() {
            if val == 0.0 {
                continue;
            }
            let mut rem = flat;
            let mut digits = [0usize; 3];
            for axis in (0..dim).rev() {
                digits[axis] = rem % side;
                rem /= side;
            }
            let mut pidx = 0usize;
            for d in digits.iter().take(dim) {
                let delta = *d as isize - (self.n_v as isize - 1);
                let wrapped = ((delta + self.pad as isize) % self.pad as isize) as usize;
                pidx = pidx * self.pad + wrapped;
            }
            buf[pidx] = Complex64::new(val, 0.0);
        }
        self.fft_nd(&mut buf, false);
        buf
    }

    /// Embed an `n_v^d` real block at the origin corner and transform.
    fn field_spectrum(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n_pad];
        let dim = self.dim;
        for (flat, &val) in values.iter().enumerate() {
            let mut rem = flat;
            let mut digits = [0usize; 3];
            for axis in (0..dim).rev() {
                digits[axis] = rem % self.n_v;
                rem /= self.n_v;
            }
            let mut pidx = 0usize;
            for d in digits.iter().take(dim) {
                pidx = pidx * self.pad + d;
            }
            buf[pidx] = Complex64::new(val, 0.0);
        }
        self.fft_nd(&mut buf, false);
        buf
    }

    /// Inverse transform of a spectral product and extraction of the `n_v^d`
    /// block, scaled by the quadrature weight `dv^d`.
    fn extract(&self, mut buf: Vec<Complex64>, dvd: f64) -> Vec<f64> {
        self.fft_nd(&mut buf, true);
        let scale = dvd / self.n_pad as f64;
        let dim = self.dim;
        let nvd = self.n_v.pow(dim as u32);
        let mut out = vec![0.0; nvd];
        for (flat, slot) in out.iter_mut().enumerate() {
            let mut rem = flat;
            let mut digits = [0usize; 3];
            for axis in (0..dim).rev() {
                digits[axis] = rem % self.n_v;
                rem /= self.n_v;
            }
            let mut pidx = 0usize;
            for d in digits.iter().take(dim) {
                pidx = pidx * self.pad + d;
            }
            *slot = buf[pidx].re * scale;
        }
        out
    }

    fn fft_nd(&self, buf: &mut [Complex64], inverse: bool) {
        let plan = if inverse { &self.inv } else { &self.fwd };
        let pad = self.pad;
        match self.dim {
            2 => {
                for row in buf.chunks_exact_mut(pad) {
                    plan.process(row);
                }
                let mut scratch = vec![Complex64::new(0.0, 0.0); pad];
                for col in 0..pad {
                    for (r, s) in scratch.iter_mut().enumerate() {
                        *s = buf[r * pad + col];
                    }
                    plan.process(&mut scratch);
                    for (r, s) in scratch.iter().enumerate() {
                        buf[r * pad + col] = *s;
                    }
                }
            }
            3 => {
                let p2 = pad * pad;
                for row in buf.chunks_exact_mut(pad) {
                    plan.process(row);
                }
                let mut scratch = vec![Complex64::new(0.0, 0.0); pad];
                for plane in 0..pad {
                    for col in 0..pad {
                        for (r, s) in scratch.iter_mut().enumerate() {
                            *s = buf[plane * p2 + r * pad + col];
                        }
                        plan.process(&mut scratch);
                        for (r, s) in scratch.iter().enumerate() {
                            buf[plane * p2 + r * pad + col] = *s;
                        }
                    }
                }
                for row in 0..pad {
                    for col in 0..pad {
                        for (r, s) in scratch.iter_mut().enumerate() {
                            *s = buf[r * p2 + row * pad + col];
                        }
                        plan.process(&mut scratch);
                        for (r, s) in scratch.iter().enumerate() {
                            buf[r * p2 + row * pad + col] = *s;
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
    }
}

/// Precomputed collision machinery for one grid/kernel configuration.
pub struct CollisionOperator {
    pub grid: Grid,
    pub vspec: VelocityKernelSpec,
    pub sspec: SpatialKernelSpec,
    backend: Backend,
    kappa: KappaTable,
    tables: PairTables,
    fft: Option<FftConv>,
    /// base-(2n_v-1) encoding of each velocity multi-index, for O(1) offset
    /// lookup: off = enc[p] - enc[q] + center
    enc: Vec<i64>,
    center: i64,
    /// (x_p, x_q) → κ offset index
    x_off: Vec<usize>,
}

impl CollisionOperator {
    pub fn new(
        grid: &Grid,
        vspec: &VelocityKernelSpec,
        sspec: &SpatialKernelSpec,
        backend: Backend,
    ) -> Result<CollisionOperator, CollisionError> {
        vspec.validate(grid.dim())?;
        sspec.validate()?;
        if vspec.singular_at_zero() && vspec.clamp_n.is_none() {
            return Err(CollisionError::RequiresClamp);
        }
        let tables = PairTables::build(grid, vspec)?;
        let kappa = kappa_table(sspec, grid)?;
        let fft = match backend {
            Backend::Fft => Some(FftConv::build(grid, &tables)),
            Backend::Direct => None,
        };
        let dim = grid.dim();
        let n_v = grid.spec.n_v;
        let side = (2 * n_v - 1) as i64;
        let nvd = grid.spec.n_vcells();
        let mut enc = vec![0i64; nvd];
        for (flat, e) in enc.iter_mut().enumerate() {
            let mut rem = flat;
            let mut digits = [0i64; 3];
            for axis in (0..dim).rev() {
                digits[axis] = (rem % n_v) as i64;
                rem /= n_v;
            }
            let mut code = 0i64;
            for d in digits.iter().take(dim) {
                code = code * side + d;
            }
            *e = code;
        }
        let mut center = 0i64;
        for _ in 0..dim {
            center = center * side + (n_v as i64 - 1);
        }
        let nxc = grid.spec.n_xcells();
        let mut x_off = vec![0usize; nxc * nxc];
        for xp in 0..nxc {
            for xq in 0..nxc {
                x_off[xp * nxc + xq] = crate::kernels::x_offset_flat(grid, xp, xq);
            }
        }
        Ok(CollisionOperator {
            grid: grid.clone(),
            vspec: *vspec,
            sspec: *sspec,
            backend,
            kappa,
            tables,
            fft,
            enc,
            center,
            x_off,
        })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn kappa(&self) -> &KappaTable {
        &self.kappa
    }

    #[inline]
    fn kappa_between(&self, x_p: usize, x_q: usize) -> f64 {
        self.kappa.values[self.x_off[x_p * self.grid.spec.n_xcells() + x_q]]
    }

    /// Direct velocity convolution of one spatial slice against packed scalar
    /// kernel tables, fused over components.
    fn direct_conv_slice(&self, src: &[f64], comps: &[&[f64]], out: &mut [Vec<f64>]) {
        let nvd = src.len();
        let dvd = self.grid.spec.dv().powi(self.grid.dim() as i32);
        for o in out.iter_mut() {
            o.iter_mut().for_each(|x| *x = 0.0);
        }
        for vq in 0..nvd {
            let s = src[vq];
            if s == 0.0 {
                continue;
            }
            let shift = self.center - self.enc[vq];
            for vp in 0..nvd {
                let off = (self.enc[vp] + shift) as usize;
                for (o, table) in comps.iter().enumerate() {
                    out[o][vp] += table[off] * s;
                }
            }
        }
        for o in out.iter_mut() {
            for x in o.iter_mut() {
                *x *= dvd;
            }
        }
    }

    /// Spatial κ-stage: `out(x, ·) = dx^d Σ_{x*} κ(x - x*) tmp(x*, ·)`.
    fn kappa_combine(&self, tmp: &[Vec<Vec<f64>>]) -> Vec<Vec<Vec<f64>>> {
        let gspec = &self.grid.spec;
        let nxc = gspec.n_xcells();
        let nvd = gspec.n_vcells();
        let dxd = gspec.dx().powi(gspec.dim as i32);
        let ncomp = tmp[0].len();
        let mut out = vec![vec![vec![0.0; nvd]; ncomp]; nxc];
        for xp in 0..nxc {
            for xq in 0..nxc {
                let k = self.kappa_between(xp, xq) * dxd;
                if k == 0.0 {
                    continue;
                }
                for c in 0..ncomp {
                    let src = &tmp[xq][c];
                    let dst = &mut out[xp][c];
                    for (d, s) in dst.iter_mut().zip(src.iter()) {
                        *d += k * s;
                    }
                }
            }
        }
        out
    }

    /// Assemble `ā`, `b̄`, `c̄` from the current field.
    pub fn assemble(&self, field: &Field) -> CoefficientField {
        self.assemble_with(field, self.backend)
    }

    pub fn assemble_with(&self, field: &Field, backend: Backend) -> CoefficientField {
        let gspec = &self.grid.spec;
        let dim = gspec.dim;
        let nxc = gspec.n_xcells();
        let nvd = gspec.n_vcells();
        let pairs = sym_pairs(dim);
        let na = pairs.len();
        let ncomp = na + dim + 1;
        let dvd = gspec.dv().powi(dim as i32);

        let mut tmp: Vec<Vec<Vec<f64>>> = Vec::with_capacity(nxc);
        for xs in 0..nxc {
            let src = &field.values[xs * nvd..(xs + 1) * nvd];
            let mut slice_out = vec![vec![0.0; nvd]; ncomp];
            match backend {
                Backend::Direct => {
                    let mut comps: Vec<&[f64]> = Vec::with_capacity(ncomp);
                    for t in &self.tables.a {
                        comps.push(t);
                    }
                    for t in &self.tables.b {
                        comps.push(t);
                    }
                    comps.push(&self.tables.c);
                    self.direct_conv_slice(src, &comps, &mut slice_out);
                }
                Backend::Fft => {
                    let fft = self.fft.as_ref().expect("fft backend built");
                    let f_hat = fft.field_spectrum(src);
                    for (k, spec) in fft.spec_a.iter().enumerate() {
                        let prod: Vec<Complex64> =
                            f_hat.iter().zip(spec).map(|(a, b)| a * b).collect();
                        slice_out[k] = fft.extract(prod, dvd);
                    }
                    for (k, spec) in fft.spec_b.iter().enumerate() {
                        let prod: Vec<Complex64> =
                            f_hat.iter().zip(spec).map(|(a, b)| a * b).collect();
                        slice_out[na + k] = fft.extract(prod, dvd);
                    }
                    let prod: Vec<Complex64> =
                        f_hat.iter().zip(&fft.spec_c).map(|(a, b)| a * b).collect();
                    slice_out[na + dim] = fft.extract(prod, dvd);
                }
            }
            tmp.push(slice_out);
        }
        let combined = self.kappa_combine(&tmp);

        let n_cells = gspec.n_cells();
        let mut a = vec![ZERO_MAT; n_cells];
        let mut b = vec![ZERO_VEC; n_cells];
        let mut c = vec![0.0; n_cells];
        for x in 0..nxc {
            for v in 0..nvd {
                let idx = x * nvd + v;
                let mut m = ZERO_MAT;
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    m[i][j] = combined[x][k][v];
                    m[j][i] = m[i][j];
                }
                a[idx] = m;
                for i in 0..dim {
                    b[idx][i] = combined[x][na + i][v];
                }
                c[idx] = combined[x][na + dim][v];
            }
        }
        CoefficientField {
            a,
            b,
            c,
            grid: self.grid.clone(),
        }
    }

    /// Metric-form right-hand side and the dissipation identity value.
    pub fn rhs_metric(&self, field: &Field, floor: f64) -> Result<MetricRhs, CollisionError> {
        self.rhs_metric_with(field, floor, self.backend)
    }

    pub fn rhs_metric_with(
        &self,
        field: &Field,
        floor: f64,
        backend: Backend,
    ) -> Result<MetricRhs, CollisionError> {
        if field.values.iter().any(|&v| v < 0.0) {
            return Err(CollisionError::NegativeField);
        }
        let gspec = &self.grid.spec;
        let dim = gspec.dim;
        let nxc = gspec.n_xcells();
        let nvd = gspec.n_vcells();
        let pairs = sym_pairs(dim);
        let na = pairs.len();
        let dvd = gspec.dv().powi(dim as i32);
        let floor = floor.max(LOG_FLOOR);

        let logf: Vec<f64> = field.values.iter().map(|&v| v.max(floor).ln()).collect();
        let g = gradient_v_values(&self.grid, &logf);
        let h: Vec<Vec<f64>> = (0..dim)
            .map(|a| {
                field
                    .values
                    .iter()
                    .zip(&g.comps[a])
                    .map(|(f, gi)| f * gi)
                    .collect()
            })
            .collect();

        // per-slice convolutions: ā components, then m̄_i = Σ_j a_ij ⋆ h_j
        let ncomp = na + dim;
        let mut tmp: Vec<Vec<Vec<f64>>> = Vec::with_capacity(nxc);
        for xs in 0..nxc {
            let range = xs * nvd..(xs + 1) * nvd;
            let src_f = &field.values[range.clone()];
            let mut slice_out = vec![vec![0.0; nvd]; ncomp];
            match backend {
                Backend::Direct => {
                    {
                        let comps: Vec<&[f64]> =
                            self.tables.a.iter().map(|t| t.as_slice()).collect();
                        let mut sub = vec![vec![0.0; nvd]; na];
                        self.direct_conv_slice(src_f, &comps, &mut sub);
                        for (k, s) in sub.into_iter().enumerate() {
                            slice_out[k] = s;
                        }
                    }
                    for (j, hj) in h.iter().enumerate() {
                        let src_h = &hj[range.clone()];
                        let comps: Vec<&[f64]> = (0..dim)
                            .map(|i| self.tables.a[sym_index(dim, i, j)].as_slice())
                            .collect();
                        let mut sub = vec![vec![0.0; nvd]; dim];
                        self.direct_conv_slice(src_h, &comps, &mut sub);
                        for (i, s) in sub.into_iter().enumerate() {
                            for (dst, x) in slice_out[na + i].iter_mut().zip(&s) {
                                *dst += x;
                            }
                        }
                    }
                }
                Backend::Fft => {
                    let fft = self.fft.as_ref().expect("fft backend built");
                    let f_hat = fft.field_spectrum(src_f);
                    for (k, spec) in fft.spec_a.iter().enumerate() {
                        let prod: Vec<Complex64> =
                            f_hat.iter().zip(spec).map(|(a, b)| a * b).collect();
                        slice_out[k] = fft.extract(prod, dvd);
                    }
                    let h_hat: Vec<Vec<Complex64>> = (0..dim)
                        .map(|j| fft.field_spectrum(&h[j][range.clone()]))
                        .collect();
                    for i in 0..dim {
                        let mut prod = vec![Complex64::new(0.0, 0.0); fft.n_pad];
                        for (j, hj_hat) in h_hat.iter().enumerate() {
                            let spec = &fft.spec_a[sym_index(dim, i, j)];
                            for ((p, a), b) in prod.iter_mut().zip(hj_hat).zip(spec) {
                                *p += a * b;
                            }
                        }
                        slice_out[na + i] = fft.extract(prod, dvd);
                    }
                }
            }
            tmp.push(slice_out);
        }
        let combined = self.kappa_combine(&tmp);

        // Φ_i = ā_ij g_j - m̄_i; flux = f ⊙ Φ; rhs = div_v(flux)
        let n_cells = gspec.n_cells();
        let mut flux = VectorField {
            comps: vec![vec![0.0; n_cells]; dim],
        };
        let mut diss = 0.0;
        for x in 0..nxc {
            for v in 0..nvd {
                let idx = x * nvd + v;
                let fval = field.values[idx];
                let mut gdotphi = 0.0;
                for i in 0..dim {
                    let mut phi_i = -combined[x][na + i][v];
                    for j in 0..dim {
                        phi_i += combined[x][sym_index(dim, i, j)][v] * g.comps[j][idx];
                    }
                    flux.comps[i][idx] = fval * phi_i;
                    gdotphi += g.comps[i][idx] * phi_i;
                }
                diss += fval * gdotphi;
            }
        }
        let rhs = div_v(&self.grid, &flux);
        let w = gspec.cell_measure();
        Ok(MetricRhs {
            rhs,
            dissipation: w * diss,
        })
    }

    /// Divergence-form right-hand side `div_v(ā ∇_v f - b̄ f)`.
    pub fn rhs_divergence(&self, field: &Field, coeffs: &CoefficientField) -> Vec<f64> {
        collision_rhs_divergence(field, coeffs)
    }

    /// Pairwise entropy dissipation
    /// `D = ½ w² Σ_{p≠q} κ A f_p f_q |Π_pq (g_p - g_q)|² ≥ 0`.
    ///
    /// Every term is a nonnegative product, so the result is nonnegative in
    /// floating point as well, and vanishes pair-by-pair on a Maxwellian.
    pub fn dissipation(&self, field: &Field, floor: f64) -> Result<f64, CollisionError> {
        if field.values.iter().any(|&v| v < 0.0) {
            return Err(CollisionError::NegativeField);
        }
        let gspec = &self.grid.spec;
        let dim = gspec.dim;
        let nxc = gspec.n_xcells();
        let nvd = gspec.n_vcells();
        let floor = floor.max(LOG_FLOOR);
        let logf: Vec<f64> = field.values.iter().map(|&v| v.max(floor).ln()).collect();
        let g = gradient_v_values(&self.grid, &logf);

        let mut total = 0.0;
        for xp in 0..nxc {
            for xq in 0..nxc {
                let kap = self.kappa_between(xp, xq);
                if kap == 0.0 {
                    continue;
                }
                let mut block = 0.0;
                for vp in 0..nvd {
                    let p = xp * nvd + vp;
                    let fp = field.values[p];
                    if fp == 0.0 {
                        continue;
                    }
                    let gp0 = g.comps[0][p];
                    let gp1 = g.comps[1][p];
                    let gp2 = if dim > 2 { g.comps[2][p] } else { 0.0 };
                    let enc_p = self.enc[vp] + self.center;
                    for vq in 0..nvd {
                        let q = xq * nvd + vq;
                        if p == q {
                            continue;
                        }
                        let fq = field.values[q];
                        if fq == 0.0 {
                            continue;
                        }
                        let off = (enc_p - self.enc[vq]) as usize;
                        let aval = self.tables.aval[off];
                        if aval == 0.0 {
                            continue;
                        }
                        let d0 = gp0 - g.comps[0][q];
                        let d1 = gp1 - g.comps[1][q];
                        let quad = if dim == 2 {
                            self.tables.pi[0][off] * d0 * d0
                                + 2.0 * self.tables.pi[1][off] * d0 * d1
                                + self.tables.pi[2][off] * d1 * d1
                        } else {
                            let d2 = gp2 - g.comps[2][q];
                            self.tables.pi[0][off] * d0 * d0
                                + 2.0 * self.tables.pi[1][off] * d0 * d1
                                + 2.0 * self.tables.pi[2][off] * d0 * d2
                                + self.tables.pi[3][off] * d1 * d1
                                + 2.0 * self.tables.pi[4][off] * d1 * d2
                                + self.tables.pi[5][off] * d2 * d2
                        };
                        block += aval * fp * fq * quad.max(0.0);
                    }
                }
                total += kap * block;
            }
        }
        let w = gspec.cell_measure();
        Ok(0.5 * w * w * total)
    }
}

/// One-shot wrappers matching the operation surface; for repeated evaluation
/// build one [`CollisionOperator`] and reuse it.
pub fn assemble_coefficients(
    field: &Field,
    vspec: &VelocityKernelSpec,
    sspec: &SpatialKernelSpec,
) -> Result<CoefficientField, CollisionError> {
    let op = CollisionOperator::new(&field.grid, vspec, sspec, Backend::Direct)?;
    Ok(op.assemble(field))
}

pub fn collision_rhs_metric(
    field: &Field,
    vspec: &VelocityKernelSpec,
    sspec: &SpatialKernelSpec,
    floor: f64,
) -> Result<MetricRhs, CollisionError> {
    let op = CollisionOperator::new(&field.grid, vspec, sspec, Backend::Direct)?;
    op.rhs_metric(field, floor)
}

pub fn collision_rhs_divergence(field: &Field, coeffs: &CoefficientField) -> Vec<f64> {
    let dim = field.grid.dim();
    let gradf = gradient_v_values(&field.grid, &field.values);
    let n_cells = field.grid.spec.n_cells();
    let mut flux = VectorField {
        comps: vec![vec![0.0; n_cells]; dim],
    };
    for idx in 0..n_cells {
        let f = field.values[idx];
        for i in 0..dim {
            let mut s = -coeffs.b[idx][i] * f;
            for j in 0..dim {
                s += coeffs.a[idx][i][j] * gradf.comps[j][idx];
            }
            flux.comps[i][idx] = s;
        }
    }
    div_v(&field.grid, &flux)
}

pub fn dissipation(
    field: &Field,
    vspec: &VelocityKernelSpec,
    sspec: &SpatialKernelSpec,
    floor: f64,
) -> Result<f64, CollisionError> {
    let op = CollisionOperator::new(&field.grid, vspec, sspec, Backend::Direct)?;
    op.dissipation(field, floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, marginal_over_x, maxwellian, Field, GridSpec};
    use crate::la::{norm_sq, sym_eigen};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn small_grid(n_x: usize, n_v: usize) -> crate::grid::Grid {
        build_grid(GridSpec::new(2, n_x, n_v, 3.0).unwrap()).unwrap()
    }

    fn random_field(grid: &crate::grid::Grid, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=3usize);
        let comps: Vec<(f64, [f64; 2], [f64; 2], [f64; 2], f64)> = (0..k)
            .map(|_| {
                (
                    rng.gen_range(0.3..1.0),
                    [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                    [rng.gen_range(0.5..1.2), rng.gen_range(0.5..1.2)],
                    [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)],
                    rng.gen_range(0.2..0.6),
                )
            })
            .collect();
        let mut f = Field::from_fn(grid, |x, v| {
            let mut s = 0.0;
            for (w, cv, sv, cx, sx) in &comps {
                let mut q = 0.0;
                for a in 0..2 {
                    let dvv = (v[a] - cv[a]) / sv[a];
                    q += dvv * dvv;
                    let dx = crate::grid::Grid::minimal_image(x[a] - cx[a]) / sx;
                    q += dx * dx;
                }
                s += w * (-0.5 * q).exp();
            }
            s + 1e-6 * (-0.5 * norm_sq(v, 2)).exp()
        });
        f.renormalize(1.0);
        f
    }

    /// Brute-force pairwise metric rhs: the independent oracle for the
    /// factorized path.
    fn pairwise_rhs(op: &CollisionOperator, field: &Field, floor: f64) -> (Vec<f64>, f64) {
        let grid = &field.grid;
        let gspec = &grid.spec;
        let dim = gspec.dim;
        let nxc = gspec.n_xcells();
        let nvd = gspec.n_vcells();
        let w = gspec.cell_measure();
        let logf: Vec<f64> = field.values.iter().map(|&v| v.max(floor).ln()).collect();
        let g = gradient_v_values(grid, &logf);
        let n = gspec.n_cells();
        let mut flux = VectorField {
            comps: vec![vec![0.0; n]; dim],
        };
        let mut diss = 0.0;
        for xp in 0..nxc {
            for vp in 0..nvd {
                let p = xp * nvd + vp;
                let vcp = grid.v_coords(vp);
                let mut phi = ZERO_VEC;
                for xq in 0..nxc {
                    let kap = op.kappa_between(xp, xq);
                    for vq in 0..nvd {
                        let q = xq * nvd + vq;
                        if p == q {
                            continue;
                        }
                        let vcq = grid.v_coords(vq);
                        let mut z = ZERO_VEC;
                        for a in 0..dim {
                            z[a] = vcp[a] - vcq[a];
                        }
                        let r = norm_sq(&z, dim).sqrt();
                        if r == 0.0 {
                            continue;
                        }
                        let aval = op.vspec.a_value(r).unwrap();
                        let pi = projector(&z, dim);
                        let mut dg = ZERO_VEC;
                        for a in 0..dim {
                            dg[a] = g.comps[a][p] - g.comps[a][q];
                        }
                        let pidg = crate::la::mat_vec(&pi, &dg, dim);
                        for a in 0..dim {
                            phi[a] += w * kap * aval * pidg[a] * field.values[q];
                        }
                    }
                }
                let fp = field.values[p];
                let mut gdot = 0.0;
                for a in 0..dim {
                    flux.comps[a][p] = fp * phi[a];
                    gdot += g.comps[a][p] * phi[a];
                }
                diss += fp * gdot;
            }
        }
        (div_v(grid, &flux), w * diss)
    }

    #[test]
    fn factorized_matches_pairwise_oracle() {
        let grid = small_grid(2, 6);
        let f = random_field(&grid, 7);
        let vspec = VelocityKernelSpec::power_law(-1.0);
        let sspec = SpatialKernelSpec::ExpDecay { rate: 1.0 };
        let op = CollisionOperator::new(&grid, &vspec, &sspec, Backend::Direct).unwrap();
        let out = op.rhs_metric(&f, LOG_FLOOR).unwrap();
        let (rhs_ref, diss_ref) = pairwise_rhs(&op, &f, LOG_FLOOR);
        let scale: f64 = rhs_ref.iter().map(|x| x.abs()).sum::<f64>() / rhs_ref.len() as f64;
        for (a, b) in out.rhs.iter().zip(&rhs_ref) {
            assert!((a - b).abs() < 1e-11 * (scale + b.abs() + 1.0));
        }
        assert!((out.dissipation - diss_ref).abs() < 1e-11 * (1.0 + diss_ref.abs()));
        let d_pair = op.dissipation(&f, LOG_FLOOR).unwrap();
        assert!(
            (d_pair - out.dissipation).abs() < 1e-10 * (1.0 + d_pair.abs()),
            "pairwise {d_pair} identity {}",
            out.dissipation
        );
    }

    #[test]
    fn fft_backend_matches_direct() {
        let grid = small_grid(2, 8);
        let vspec = VelocityKernelSpec::power_law(-1.0);
        let sspec = SpatialKernelSpec::ExpDecay { rate: 0.7 };
        let op = CollisionOperator::new(&grid, &vspec, &sspec, Backend::Fft).unwrap();
        for seed in 0..3 {
            let f = random_field(&grid, 100 + seed);
            let ca = op.assemble_with(&f, Backend::Direct);
            let cb = op.assemble_with(&f, Backend::Fft);
            let mut num = 0.0;
            let mut den = 0.0;
            for idx in 0..grid.spec.n_cells() {
                for i in 0..2 {
                    for j in 0..2 {
                        num += (ca.a[idx][i][j] - cb.a[idx][i][j]).abs();
                        den += ca.a[idx][i][j].abs();
                    }
                    num += (ca.b[idx][i] - cb.b[idx][i]).abs();
                    den += ca.b[idx][i].abs();
                }
                num += (ca.c[idx] - cb.c[idx]).abs();
                den += ca.c[idx].abs();
            }
            assert!(num <= 1e-10 * den, "coef rel gap {}", num / den);

            let ra = op.rhs_metric_with(&f, LOG_FLOOR, Backend::Direct).unwrap();
            let rb = op.rhs_metric_with(&f, LOG_FLOOR, Backend::Fft).unwrap();
            let scale: f64 = ra.rhs.iter().map(|x| x.abs()).sum::<f64>();
            let gap: f64 = ra
                .rhs
                .iter()
                .zip(&rb.rhs)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>();
            assert!(gap <= 1e-10 * scale, "rhs rel gap {}", gap / scale);
        }
    }

    #[test]
    fn maxwellian_is_discrete_equilibrium() {
        let grid = build_grid(GridSpec::new(2, 2, 16, 6.0).unwrap()).unwrap();
        let m = maxwellian(&grid, 1.0, &[0.0; 3], 1.0);
        let vspec = VelocityKernelSpec::power_law(0.0);
        let sspec = SpatialKernelSpec::uniform_one();
        let op = CollisionOperator::new(&grid, &vspec, &sspec, Backend::Direct).unwrap();
        let out = op.rhs_metric(&m, LOG_FLOOR).unwrap();
        let max_rhs = out.rhs.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
        let max_f = m.max_value();
        assert!(
            max_rhs <= 1e-12 * max_f,
            "max rhs {max_rhs} vs bound {}",
            1e-12 * max_f
        );
        let d = op.dissipation(&m, LOG_FLOOR).unwrap();
        assert!(d >= 0.0);
        assert!(d <= 1e-12 * m.mass(), "D(M) = {d}");
    }

    #[test]
    fn conservation_per_evaluation() {
        let grid = small_grid(2, 8);
        let vspec = VelocityKernelSpec::power_law(0.0);
        let sspec = SpatialKernelSpec::uniform_one();
        let op = CollisionOperator::new(&grid, &vspec, &sspec, Backend::Direct).unwrap();
        let w = grid.spec.cell_measure();
        for seed in 0..5 {
            let f = random_field(&grid, 20 + seed);
            let out = op.rhs_metric(&f, LOG_FLOOR).unwrap();
            let mass: f64 = out.rhs.iter().sum::<f64>() * w;
            let abs_sum: f64 = out.rhs.iter().map(|x| x.abs()).sum::<f64>() * w;
            assert!(mass.abs() <= 1e-13 * abs_sum.max(1e-30), "mass {mass}");
            let mut mom = [0.0; 3];
            let mut energy = 0.0;
            let mut scale = 0.0;
            for xf in 0..grid.spec.n_xcells() {
                for vf in 0..grid.spec.n_vcells() {
                    let idx = grid.cell_index(xf, vf);
                    let v = grid.v_coords(vf);
                    for a in 0..2 {
                        mom[a] += v[a] * out.rhs[idx] * w;
                    }
                    energy += norm_sq(&v, 2) * out.rhs[idx] * w;
                    scale += norm_sq(&v, 2) * out.rhs[idx].abs() * w;
                }
            }
            assert!(energy.abs() <= 1e-10 * scale.max(1e-30), "energy {energy}");
            for a in 0..2 {
                assert!(mom[a].abs() <= 1e-10 * scale.max(1e-30), "mom {:?}", mom);
            }
        }
    }

    #[test]
    fn entropy_identity_links_rhs_and_dissipation() {
        let grid = small_grid(2, 8);
        let vspec = VelocityKernelSpec::power_law(-1.0);
        let sspec = SpatialKernelSpec::uniform_one();
        let op = CollisionOperator::new(&grid, &vspec, &sspec, Backend::Direct).unwrap();
        let w = grid.spec.cell_measure();
        for seed in 0..5 {
            let f = random_field(&grid, 40 + seed);
            let out = op.rhs_metric(&f, LOG_FLOOR).unwrap();
            let d_pair = op.dissipation(&f, LOG_FLOOR).unwrap();
            assert!(d_pair >= 0.0);
            let lhs: f64 = f
                .values
                .iter()
                .zip(&out.rhs)
                .map(|(fv, r)| (1.0 + fv.max(LOG_FLOOR).ln()) * r)
                .sum::<f64>()
                * w;
            assert!(
                (lhs + d_pair).abs() <= 1e-10 * d_pair.abs().max(1e-30),
                "identity defect {} vs D {}",
                lhs + d_pair,
                d_pair
            );
        }
    }

    #[test]
    fn point_mass_coefficients() {
        let grid = small_grid(2, 6);
        let vspec = VelocityKernelSpec::power_law(0.0);
        let sspec = SpatialKernelSpec::ExpDecay { rate: 1.0 };
        let op = CollisionOperator::new(&grid, &vspec, &sspec, Backend::Direct).unwrap();
        let mut f = Field::zeros(&grid);
        let x0 = 1;
        let v0 = 14;
        f.values[grid.cell_index(x0, v0)] = 1.0;
        let coeffs = op.assemble(&f);
        let w = grid.spec.cell_measure();
        let v0c = grid.v_coords(v0);
        for xf in 0..grid.spec.n_xcells() {
            let kap = op.kappa_between(xf, x0);
            for vf in 0..grid.spec.n_vcells() {
                let idx = grid.cell_index(xf, vf);
                let vc = grid.v_coords(vf);
                let mut z = ZERO_VEC;
                for a in 0..2 {
                    z[a] = vc[a] - v0c[a];
                }
                let expect = if norm_sq(&z, 2) == 0.0 {
                    ZERO_MAT
                } else {
                    let mut m = a_matrix(&vspec, &z, 2).unwrap();
                    for row in m.iter_mut() {
                        for e in row.iter_mut() {
                            *e *= w * kap;
                        }
                    }
                    m
                };
                for i in 0..2 {
                    for j in 0..2 {
                        assert!(
                            (coeffs.a[idx][i][j] - expect[i][j]).abs() < 1e-12,
                            "cell ({xf},{vf})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn assembled_a_is_symmetric_psd_and_c_nonpositive() {
        let grid = small_grid(2, 8);
        let vspec = VelocityKernelSpec::power_law(-1.5);
        let sspec = SpatialKernelSpec::uniform_one();
        let op = CollisionOperator::new(&grid, &vspec, &sspec, Backend::Direct).unwrap();
        let f = random_field(&grid, 3);
        let coeffs = op.assemble(&f);
        for idx in 0..grid.spec.n_cells() {
            let m = &coeffs.a[idx];
            assert!((m[0][1] - m[1][0]).abs() < 1e-13);
            let (vals, _) = sym_eigen(m, 2);
            let tr = m[0][0] + m[1][1];
            assert!(vals[0] >= -1e-12 * tr.max(1e-30), "eig {:?}", vals);
            // PowerLaw with gamma >= -d: c̄ ≤ 0
            assert!(coeffs.c[idx] <= 1e-12);
        }
    }

    #[test]
    fn gaussian_abar_closed_form_eigenvalues() {
        // ā of a Maxwellian with γ=0, κ≡1 is (|v|²+1)Id - v⊗v up to tails
        let grid = build_grid(GridSpec::new(2, 1, 48, 8.0).unwrap()).unwrap();
        let m = maxwellian(&grid, 1.0, &[0.0; 3], 1.0);
        let vspec = VelocityKernelSpec::power_law(0.0);
        let sspec = SpatialKernelSpec::uniform_one();
        let op = CollisionOperator::new(&grid, &vspec, &sspec, Backend::Direct).unwrap();
        let coeffs = op.assemble(&m);
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for vf in 0..grid.spec.n_vcells() {
            let vc = grid.v_coords(vf);
            let d = (vc[0] - 3.0).powi(2) + vc[1].powi(2);
            if d < best_d {
                best_d = d;
                best = vf;
            }
        }
        let vc = grid.v_coords(best);
        let idx = grid.cell_index(0, best);
        let (vals, _) = sym_eigen(&coeffs.a[idx], 2);
        let v2 = norm_sq(&vc, 2);
        assert!((vals[0] - 1.0).abs() < 2e-2, "min eig {}", vals[0]);
        assert!(
            (vals[1] - (v2 + 1.0)).abs() < 2e-2 * (v2 + 1.0),
            "max eig {}",
            vals[1]
        );
    }

    #[test]
    fn jensen_comparison_on_separable_fields() {
        let grid = small_grid(4, 8);
        let vspec = VelocityKernelSpec::power_law(0.0);
        let sspec = SpatialKernelSpec::uniform_one();
        let op = CollisionOperator::new(&grid, &vspec, &sspec, Backend::Direct).unwrap();
        for seed in 0..4 {
            let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
            let amp: f64 = rng.gen_range(0.2..0.6);
            let phase: f64 = rng.gen_range(0.0..1.0);
            let c0: f64 = rng.gen_range(-0.8..0.8);
            let c1: f64 = rng.gen_range(-0.8..0.8);
            let f = Field::from_fn(&grid, |x, v| {
                let xfac = (1.0 + amp * (2.0 * std::f64::consts::PI * (x[0] - phase)).cos())
                    * (1.0 + 0.3 * (2.0 * std::f64::consts::PI * x[1]).sin());
                let vfac = (-0.5 * ((v[0] - c0).powi(2) + (v[1] - c1).powi(2))).exp()
                    + 0.3 * (-0.7 * norm_sq(v, 2)).exp();
                xfac * vfac
            });
            let d_fuz = op.dissipation(&f, LOG_FLOOR).unwrap();
            let marg = marginal_over_x(&f).to_field();
            let hop = CollisionOperator::new(
                &marg.grid,
                &vspec,
                &SpatialKernelSpec::uniform_one(),
                Backend::Direct,
            )
            .unwrap();
            let d_homo = hop.dissipation(&marg, LOG_FLOOR).unwrap();
            assert!(
                d_homo <= d_fuz + 1e-10 * d_fuz.max(1.0),
                "homo {d_homo} fuz {d_fuz}"
            );
        }
    }

    #[test]
    fn requires_clamp_for_very_soft() {
        let grid = build_grid(GridSpec::new(3, 1, 4, 3.0).unwrap()).unwrap();
        let vspec = VelocityKernelSpec::power_law(-2.5);
        let sspec = SpatialKernelSpec::uniform_one();
        let err = match CollisionOperator::new(&grid, &vspec, &sspec, Backend::Direct) {
            Err(e) => e,
            Ok(_) => panic!("expected RequiresClamp"),
        };
        assert!(matches!(err, CollisionError::RequiresClamp));
        let ok = CollisionOperator::new(&grid, &vspec.with_clamp(10), &sspec, Backend::Direct);
        assert!(ok.is_ok());
    }

    #[test]
    fn negative_field_rejected() {
        let grid = small_grid(1, 6);
        let mut f = Field::from_fn(&grid, |_x, _v| 1.0);
        f.values[3] = -0.5;
        let vspec = VelocityKernelSpec::power_law(0.0);
        let op = CollisionOperator::new(
            &grid,
            &vspec,
            &SpatialKernelSpec::uniform_one(),
            Backend::Direct,
        )
        .unwrap();
        assert!(matches!(
            op.rhs_metric(&f, LOG_FLOOR),
            Err(CollisionError::NegativeField)
        ));
    }

    #[test]
    fn metric_and_divergence_forms_consistent_under_refinement() {
        let vspec = VelocityKernelSpec::power_law(0.0);
        let sspec = SpatialKernelSpec::uniform_one();
        let mut gaps = Vec::new();
        for n_v in [12usize, 24] {
            let grid = build_grid(GridSpec::new(2, 2, n_v, 6.0).unwrap()).unwrap();
            let f = Field::from_fn(&grid, |x, v| {
                (1.0 + 0.3 * (2.0 * std::f64::consts::PI * x[0]).cos())
                    * ((-0.5 * ((v[0] - 0.6).powi(2) + v[1].powi(2))).exp()
                        + 0.5 * (-0.4 * ((v[0] + 0.8).powi(2) + (v[1] - 0.5).powi(2))).exp())
            });
            let op = CollisionOperator::new(&grid, &vspec, &sspec, Backend::Direct).unwrap();
            let met = op.rhs_metric(&f, LOG_FLOOR).unwrap();
            let coeffs = op.assemble(&f);
            let div = op.rhs_divergence(&f, &coeffs);
            let w = grid.spec.cell_measure();
            let gap: f64 = met
                .rhs
                .iter()
                .zip(&div)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                * w;
            let scale: f64 = met.rhs.iter().map(|x| x.abs()).sum::<f64>() * w;
            gaps.push(gap / scale);
        }
        let ratio = gaps[0] / gaps[1];
        assert!(
            ratio > 2.5 && ratio < 6.5,
            "refinement ratio {ratio}, gaps {:?}",
            gaps
        );
    }

    #[test]
    fn cbar_gaussian_near_origin() {
        // c̄ of a mass-1 Maxwellian for γ=0, d=2 is -(d-1)(d+γ) = -2 everywhere,
        // up to the O(w) diagonal-skip quadrature defect
        let grid = build_grid(GridSpec::new(2, 1, 32, 7.0).unwrap()).unwrap();
        let m = maxwellian(&grid, 1.0, &[0.0; 3], 1.0);
        let coeffs = assemble_coefficients(
            &m,
            &VelocityKernelSpec::power_law(0.0),
            &SpatialKernelSpec::uniform_one(),
        )
        .unwrap();
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for vf in 0..grid.spec.n_vcells() {
            let vc = grid.v_coords(vf);
            let d = norm_sq(&vc, 2);
            if d < best_d {
                best_d = d;
                best = vf;
            }
        }
        let c = coeffs.c[grid.cell_index(0, best)];
        assert!((c + 2.0).abs() < 7e-2, "c̄ near origin {c}");
    }
}
