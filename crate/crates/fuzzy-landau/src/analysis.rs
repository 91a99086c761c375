//! Verification instruments: coercivity scans of `ā`, the functional
//! inequality registry, growth-rate fits against the propagation bounds, and
//! the Riccati blow-up bound.
//!
//! Constant-explicit inequalities are hard assertions (zero tolerated
//! violations beyond float slack); scale-free estimates are report-only with
//! fitted empirical constants, never asserted against a guessed constant.

use std::f64::consts::PI;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;
use thiserror::Error;

use crate::collision::{Backend, CollisionError, CollisionOperator, LOG_FLOOR};
use crate::functionals::{fisher, moment, norm, FunctionalError, NormSpec};
use crate::grid::{Field, Grid};
use crate::kernels::{bracket, bracket_vec, SpatialKernelSpec, VelocityKernelSpec};
use crate::la::{norm_sq, quad_form, sym_eigen, VecD, ZERO_VEC};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("unknown inequality suite: {0}")]
    UnknownSuite(String),
    #[error("scan requires at least half the mass inside the sampled ball (found {0:.3})")]
    MassOutsideBall(f64),
    #[error("degenerate trajectory: {0}")]
    DegenerateTrajectory(String),
    #[error("trajectory exceeds the implied blow-up time T* = {0}")]
    ExceedsBlowupTime(f64),
    #[error(transparent)]
    Collision(#[from] CollisionError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}

// ---------------------------------------------------------------------------
// random field sampler
// ---------------------------------------------------------------------------

/// Mixture-of-Gaussians field sampler: 1..=5 components with random centers
/// and diagonal covariances, floored and renormalized to unit mass.
pub struct FieldSampler {
    pub min_components: usize,
    pub max_components: usize,
    pub floor_level: f64,
}

impl Default for FieldSampler {
    fn default() -> Self {
        FieldSampler {
            min_components: 1,
            max_components: 5,
            floor_level: 1e-8,
        }
    }
}

impl FieldSampler {
    pub fn sample(&self, grid: &Grid, rng: &mut ChaCha8Rng) -> Field {
        let dim = grid.dim();
        let v_max = grid.spec.v_max;
        let k = rng.gen_range(self.min_components..=self.max_components);
        struct Comp {
            w: f64,
            cv: VecD,
            sv: VecD,
            cx: VecD,
            sx: f64,
        }
        let comps: Vec<Comp> = (0..k)
            .map(|_| {
                let mut cv = ZERO_VEC;
                let mut sv = ZERO_VEC;
                let mut cx = ZERO_VEC;
                for a in 0..dim {
                    cv[a] = rng.gen_range(-0.45 * v_max..0.45 * v_max);
                    sv[a] = rng.gen_range(0.4..1.4);
                    cx[a] = rng.gen_range(0.0..1.0);
                }
                Comp {
                    w: rng.gen_range(0.2..1.0),
                    cv,
                    sv,
                    cx,
                    sx: rng.gen_range(0.15..0.5),
                }
            })
            .collect();
        let level = self.floor_level;
        let mut f = Field::from_fn(grid, |x, v| {
            let mut s = 0.0;
            for c in &comps {
                let mut q = 0.0;
                for a in 0..dim {
                    let dv = (v[a] - c.cv[a]) / c.sv[a];
                    q += dv * dv;
                    let dx = Grid::minimal_image(x[a] - c.cx[a]) / c.sx;
                    q += dx * dx;
                }
                s += c.w * (-0.5 * q).exp();
            }
            // wide floor: explicit tail positivity wants the cell-to-cell
            // decay ratio well below dv/(dt·|Φ|)
            s + level * (-0.125 * norm_sq(v, dim)).exp()
        });
        f.renormalize(1.0);
        f
    }

    /// Exactly two components.
    pub fn two_gaussian(grid: &Grid, seed: u64) -> Field {
        let sampler = FieldSampler {
            min_components: 2,
            max_components: 2,
            ..FieldSampler::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sampler.sample(grid, &mut rng)
    }
}

/// Separable inhomogeneous state `X(x)·W(v)` with positive periodic `X`.
pub fn sample_separable(grid: &Grid, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = grid.dim();
    let v_max = grid.spec.v_max;
    let amps: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.15..0.55)).collect();
    let phases: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect();
    let k = rng.gen_range(1..=3usize);
    let comps: Vec<(f64, VecD, VecD)> = (0..k)
        .map(|_| {
            let mut cv = ZERO_VEC;
            let mut sv = ZERO_VEC;
            for a in 0..dim {
                cv[a] = rng.gen_range(-0.4 * v_max..0.4 * v_max);
                sv[a] = rng.gen_range(0.5..1.3);
            }
            (rng.gen_range(0.2..1.0), cv, sv)
        })
        .collect();
    let mut f = Field::from_fn(grid, |x, v| {
        let mut xfac = 1.0;
        for a in 0..dim {
            xfac *= 1.0 + amps[a] * (2.0 * PI * (x[a] - phases[a])).cos();
        }
        let mut w = 0.0;
        for (wt, cv, sv) in &comps {
            let mut q = 0.0;
            for a in 0..dim {
                let dv = (v[a] - cv[a]) / sv[a];
                q += dv * dv;
            }
            w += wt * (-0.5 * q).exp();
        }
        xfac * (w + 1e-4 * (-0.125 * norm_sq(v, dim)).exp())
    });
    f.renormalize(1.0);
    f
}

// ---------------------------------------------------------------------------
// coercivity scan
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct CoercivityScan {
    /// min over scanned cells of λ_min(ā) / (⟨v⟩^γ · κ_floor(x))
    pub min_quotient: f64,
    pub argmin_x: usize,
    pub argmin_v: usize,
    /// (|v| bin center, min quotient, max quotient) over the scan region
    pub profile: Vec<(f64, f64, f64)>,
    /// cross-check: min quotient over random directions (≥ min_quotient)
    pub random_direction_min: f64,
}

/// Scan the coercivity quotient of `ā` over cells with `|v| ≤ ball·v_max`.
///
/// The exact minimizer in ξ is the eigenvector of the smallest eigenvalue;
/// `samples` extra random directions per bin cross-check that no direction
/// does worse. For ExpDecay κ the floor is `exp(-rate·⟨x⟩)` with the kernel's
/// own rate; the empirical decay is reported, not asserted.
pub fn coercivity_scan(
    field: &Field,
    vspec: &VelocityKernelSpec,
    sspec: &SpatialKernelSpec,
    samples: usize,
    seed: u64,
    ball: f64,
) -> Result<CoercivityScan, AnalysisError> {
    let grid = &field.grid;
    let dim = grid.dim();
    let r_ball = ball * grid.spec.v_max;
    // pre: at least half the mass inside the scan ball
    let mut inside = 0.0;
    let mut total = 0.0;
    for xf in 0..grid.spec.n_xcells() {
        for vf in 0..grid.spec.n_vcells() {
            let fv = field.values[grid.cell_index(xf, vf)];
            total += fv;
            if norm_sq(&grid.v_coords(vf), dim).sqrt() <= r_ball {
                inside += fv;
            }
        }
    }
    if !(inside >= 0.5 * total) || total <= 0.0 {
        return Err(AnalysisError::MassOutsideBall(inside / total.max(1e-300)));
    }

    let op = CollisionOperator::new(grid, vspec, sspec, Backend::Direct)?;
    let coeffs = op.assemble(field);
    let gamma = vspec.gamma;
    let kappa_floor = |xf: usize| -> f64 {
        match sspec {
            SpatialKernelSpec::Uniform { .. } => 1.0,
            SpatialKernelSpec::ExpDecay { rate } => {
                let xc = grid.x_coords_centered(xf);
                (-rate * (1.0 + norm_sq(&xc, dim)).sqrt()).exp()
            }
        }
    };

    let n_bins = 12usize;
    let mut profile = vec![(0.0, f64::INFINITY, f64::NEG_INFINITY); n_bins];
    for (b, entry) in profile.iter_mut().enumerate() {
        entry.0 = (b as f64 + 0.5) * r_ball / n_bins as f64;
    }
    let mut min_q = f64::INFINITY;
    let mut argmin = (0usize, 0usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_min = f64::INFINITY;
    for xf in 0..grid.spec.n_xcells() {
        let kf = kappa_floor(xf);
        for vf in 0..grid.spec.n_vcells() {
            let vc = grid.v_coords(vf);
            let speed = norm_sq(&vc, dim).sqrt();
            if speed > r_ball {
                continue;
            }
            let idx = grid.cell_index(xf, vf);
            let (vals, _) = sym_eigen(&coeffs.a[idx], dim);
            let denom = bracket_vec(&vc, dim).powf(gamma) * kf;
            let q = vals[0] / denom;
            if q < min_q {
                min_q = q;
                argmin = (xf, vf);
            }
            let bin = ((speed / r_ball) * n_bins as f64) as usize;
            let bin = bin.min(n_bins - 1);
            profile[bin].1 = profile[bin].1.min(q);
            profile[bin].2 = profile[bin].2.max(q);
        }
    }
    // random-direction cross check on a subsample of cells
    for _ in 0..samples {
        let xf = rng.gen_range(0..grid.spec.n_xcells());
        let vf = rng.gen_range(0..grid.spec.n_vcells());
        let vc = grid.v_coords(vf);
        if norm_sq(&vc, dim).sqrt() > r_ball {
            continue;
        }
        let mut xi = ZERO_VEC;
        let mut n2 = 0.0;
        for a in 0..dim {
            xi[a] = rng.gen_range(-1.0..1.0);
            n2 += xi[a] * xi[a];
        }
        if n2 < 1e-12 {
            continue;
        }
        let idx = grid.cell_index(xf, vf);
        let q = quad_form(&coeffs.a[idx], &xi, dim)
            / (n2 * bracket_vec(&vc, dim).powf(gamma) * kappa_floor(xf));
        random_min = random_min.min(q);
    }
    profile.retain(|p| p.1.is_finite());
    Ok(CoercivityScan {
        min_quotient: min_q,
        argmin_x: argmin.0,
        argmin_v: argmin.1,
        profile,
        random_direction_min: random_min,
    })
}

// ---------------------------------------------------------------------------
// inequality registry
// ---------------------------------------------------------------------------

pub const SUITE_NAMES: [&str; 11] = [
    "peetre_corrected",
    "bracket_subadditivity",
    "holder_interpolation_2",
    "holder_interpolation_3",
    "sobolev_ratio",
    "hls_ratio",
    "pitt_ratio",
    "conv_bound",
    "povzner_search",
    "fisher_vs_dissipation",
    "wk_bound",
];

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub dim: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            samples: 100_000,
            dim: 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub assert_mode: bool,
    pub samples: usize,
    pub violations: usize,
    /// max LHS/RHS over samples for assert-mode entries; fitted constant scale
    /// for report-only entries
    pub worst_margin: f64,
    pub constants: Vec<(String, f64)>,
    pub scale_invariance_drift: Option<f64>,
    pub worst_case: Option<String>,
    pub notes: Vec<String>,
}

impl InequalityReport {
    fn new(name: &str, assert_mode: bool) -> Self {
        InequalityReport {
            name: name.into(),
            assert_mode,
            samples: 0,
            violations: 0,
            worst_margin: 0.0,
            constants: Vec::new(),
            scale_invariance_drift: None,
            worst_case: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        !self.assert_mode || self.violations == 0
    }
}

const SLACK: f64 = 1e-12;

fn rand_vec(rng: &mut ChaCha8Rng, dim: usize, r: f64) -> VecD {
    let mut v = ZERO_VEC;
    for a in v.iter_mut().take(dim) {
        *a = rng.gen_range(-r..r);
    }
    v
}

fn suite_peetre(cfg: &SuiteConfig) -> InequalityReport {
    let mut rep = InequalityReport::new("peetre_corrected", true);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dim = cfg.dim;
    for _ in 0..cfg.samples {
        let gamma: f64 = rng.gen_range(-4.0..0.0);
        let v = rand_vec(&mut rng, dim, 5.0);
        let w = rand_vec(&mut rng, dim, 5.0);
        let mut z = ZERO_VEC;
        for a in 0..dim {
            z[a] = v[a] - w[a];
        }
        let lhs = 2.0f64.powf(gamma.abs() / -2.0)
            * bracket_vec(&v, dim).powf(gamma)
            * bracket_vec(&w, dim).powf(gamma);
        let rhs = bracket_vec(&z, dim).powf(gamma);
        let margin = lhs / rhs;
        if margin > rep.worst_margin {
            rep.worst_margin = margin;
            rep.worst_case = Some(format!("gamma={gamma}, v={v:?}, v*={w:?}"));
        }
        if lhs > rhs * (1.0 + SLACK) {
            rep.violations += 1;
        }
        rep.samples += 1;
    }
    // documented counterexample to the constant-on-the-left variant:
    // 2^{|γ|/2}⟨v⟩^γ⟨v*⟩^γ at γ=-2, v=(1,0), v*=0 gives 2·(1/2)·1 = 1 > ⟨v⟩^{-2} = 1/2
    let gamma = -2.0f64;
    let v = [1.0, 0.0, 0.0];
    let w = ZERO_VEC;
    let paper_lhs = 2.0f64.powf(gamma.abs() / 2.0)
        * bracket_vec(&v, cfg.dim).powf(gamma)
        * bracket_vec(&w, cfg.dim).powf(gamma);
    let rhs = bracket_vec(&v, cfg.dim).powf(gamma);
    rep.constants
        .push(("counterexample_variant_lhs".into(), paper_lhs));
    rep.constants.push(("counterexample_rhs".into(), rhs));
    if paper_lhs > rhs {
        rep.notes.push(
            "constant-on-the-left variant fails at gamma=-2, v=(1,0), v*=0: 1 > 1/2".into(),
        );
    }
    rep
}

fn suite_bracket_subadditivity(cfg: &SuiteConfig) -> InequalityReport {
    let mut rep = InequalityReport::new("bracket_subadditivity", true);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let dim = cfg.dim;
    let sqrt2 = 2.0f64.sqrt();
    for _ in 0..cfg.samples {
        let v = rand_vec(&mut rng, dim, 8.0);
        let w = rand_vec(&mut rng, dim, 8.0);
        let mut z = ZERO_VEC;
        for a in 0..dim {
            z[a] = v[a] - w[a];
        }
        let lhs = bracket_vec(&z, dim);
        let rhs = sqrt2 * bracket_vec(&v, dim) * bracket_vec(&w, dim);
        let margin = lhs / rhs;
        if margin > rep.worst_margin {
            rep.worst_margin = margin;
            rep.worst_case = Some(format!("v={v:?}, v*={w:?}"));
        }
        if lhs > rhs * (1.0 + SLACK) {
            rep.violations += 1;
        }
        rep.samples += 1;
    }
    rep
}

/// Small grids keep the 1e5-sample suites fast; each sample couples one field
/// with one admissible parameter tuple.
fn holder_grid(dim: usize) -> Grid {
    let spec = crate::grid::GridSpec::new(dim, 2, 8, 3.0).expect("valid");
    crate::grid::build_grid(spec).expect("valid")
}

fn suite_holder_2(cfg: &SuiteConfig) -> Result<InequalityReport, AnalysisError> {
    let mut rep = InequalityReport::new("holder_interpolation_2", true);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(2));
    let grid = holder_grid(cfg.dim);
    let sampler = FieldSampler::default();
    let fields_n = (cfg.samples / 100).clamp(1, 2000);
    let per_field = cfg.samples.div_ceil(fields_n);
    let k = if cfg.dim == 3 { 3.0 } else { 2.0 };
    for _ in 0..fields_n {
        let f = sampler.sample(&grid, &mut rng);
        for _ in 0..per_field {
            if rep.samples >= cfg.samples {
                break;
            }
            let gamma: f64 = rng.gen_range(-2.0..-0.1);
            let s: f64 = rng.gen_range(2.1..6.0);
            let beta: f64 = rng.gen_range(0.1..0.9);
            let alpha = gamma.abs() * beta + (beta - 1.0) * s;
            let p = 1.0 / (beta / k + (1.0 - beta));
            let lhs = norm(
                &f,
                &NormSpec::WeightedLk {
                    k: p,
                    weight_exponent: -alpha,
                },
            )?;
            let wk = norm(
                &f,
                &NormSpec::WeightedLk {
                    k,
                    weight_exponent: gamma,
                },
            )?;
            let rhs = wk.powf(beta) * moment(&f, s).powf(1.0 - beta);
            let margin = lhs / rhs;
            if margin > rep.worst_margin {
                rep.worst_margin = margin;
                rep.worst_case = Some(format!("gamma={gamma}, s={s}, beta={beta}"));
            }
            if lhs > rhs * (1.0 + SLACK) {
                rep.violations += 1;
            }
            rep.samples += 1;
        }
    }
    Ok(rep)
}

fn suite_holder_3(cfg: &SuiteConfig) -> Result<InequalityReport, AnalysisError> {
    let mut rep = InequalityReport::new("holder_interpolation_3", true);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(3));
    let grid = holder_grid(cfg.dim);
    let sampler = FieldSampler::default();
    let fields_n = (cfg.samples / 100).clamp(1, 2000);
    let per_field = cfg.samples.div_ceil(fields_n);
    let k = if cfg.dim == 3 { 3.0 } else { 2.0 };
    for _ in 0..fields_n {
        let f = sampler.sample(&grid, &mut rng);
        for _ in 0..per_field {
            if rep.samples >= cfg.samples {
                break;
            }
            let gamma: f64 = rng.gen_range(-2.0..-0.1);
            let eps: f64 = rng.gen_range(0.2..0.8 * (k - 1.0));
            let s = gamma.abs() * k * ((k - 1.0) / eps - 1.0);
            let e1 = k * (k - 1.0 - eps) / ((k - eps) * (k - 1.0));
            let e2 = eps / ((k - eps) * (k - 1.0));
            let lhs = norm(&f, &NormSpec::MixedL1xLpv { p: k - eps })?;
            let wk = norm(
                &f,
                &NormSpec::WeightedLk {
                    k,
                    weight_exponent: gamma,
                },
            )?;
            let rhs = wk.powf(e1) * moment(&f, s).powf(e2);
            let margin = lhs / rhs;
            if margin > rep.worst_margin {
                rep.worst_margin = margin;
                rep.worst_case = Some(format!("gamma={gamma}, eps={eps}, s={s}"));
            }
            if lhs > rhs * (1.0 + SLACK) {
                rep.violations += 1;
            }
            rep.samples += 1;
        }
    }
    Ok(rep)
}

/// Composite Simpson on [0, b] with n (even) intervals.
fn simpson<F: Fn(f64) -> f64>(f: F, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 0 { n } else { n + 1 };
    let h = b / n as f64;
    let mut s = f(0.0) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * h);
    }
    s * h / 3.0
}

/// Radial Gaussian mixture `φ(r) = Σ aᵢ exp(-r²/2σᵢ²)` and its derivative.
#[derive(Clone)]
struct RadialMixture {
    amps: Vec<f64>,
    sigmas: Vec<f64>,
}

impl RadialMixture {
    fn random(rng: &mut ChaCha8Rng) -> RadialMixture {
        let k = rng.gen_range(1..=3usize);
        RadialMixture {
            amps: (0..k).map(|_| rng.gen_range(0.3..1.5)).collect(),
            sigmas: (0..k).map(|_| rng.gen_range(0.5..2.0)).collect(),
        }
    }

    fn dilate(&self, lambda: f64) -> RadialMixture {
        // φ(λ·): Gaussian widths contract by λ
        RadialMixture {
            amps: self.amps.clone(),
            sigmas: self.sigmas.iter().map(|s| s / lambda).collect(),
        }
    }

    fn value(&self, r: f64) -> f64 {
        self.amps
            .iter()
            .zip(&self.sigmas)
            .map(|(a, s)| a * (-r * r / (2.0 * s * s)).exp())
            .sum()
    }

    fn derivative(&self, r: f64) -> f64 {
        self.amps
            .iter()
            .zip(&self.sigmas)
            .map(|(a, s)| -a * r / (s * s) * (-r * r / (2.0 * s * s)).exp())
            .sum()
    }
}

fn sphere_area(dim: usize) -> f64 {
    match dim {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => unreachable!(),
    }
}

fn suite_sobolev_ratio(cfg: &SuiteConfig) -> InequalityReport {
    let mut rep = InequalityReport::new("sobolev_ratio", false);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(4));
    // the ratio is dilation-invariant only at the critical index k = d/(d-2),
    // so the scan is run in d = 3 with k = 3 regardless of cfg.dim
    let dim = 3usize;
    let k = 3.0;
    let area = sphere_area(dim);
    let r_max = 60.0;
    let n_quad = 1 << 15;
    let families = (cfg.samples / 1000).clamp(4, 64);
    let mut max_ratio = 0.0f64;
    let mut max_drift = 0.0f64;
    for _ in 0..families {
        let base = RadialMixture::random(&mut rng);
        let mut ratios = Vec::new();
        for &lambda in &[0.5, 1.0, 2.0] {
            let m = base.dilate(lambda);
            let num = simpson(
                |r| r.powi((dim - 1) as i32) * m.value(r).powf(2.0 * k),
                r_max,
                n_quad,
            ) * area;
            let den = simpson(
                |r| r.powi((dim - 1) as i32) * m.derivative(r).powi(2),
                r_max,
                n_quad,
            ) * area;
            ratios.push(num.powf(1.0 / (2.0 * k)) / den.sqrt());
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let drift = ratios
            .iter()
            .map(|r| (r - mean).abs() / mean)
            .fold(0.0f64, f64::max);
        max_drift = max_drift.max(drift);
        max_ratio = max_ratio.max(ratios[1]);
        rep.samples += ratios.len();
    }
    rep.worst_margin = max_ratio;
    rep.constants.push(("empirical_sobolev".into(), max_ratio));
    rep.scale_invariance_drift = Some(max_drift);
    if max_drift > 1e-6 {
        rep.violations += 1;
        rep.notes
            .push(format!("dilation drift {max_drift} exceeds 1e-6"));
    }
    rep
}

fn suite_hls_ratio(cfg: &SuiteConfig) -> InequalityReport {
    let mut rep = InequalityReport::new("hls_ratio", false);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(5));
    // d = 2, α = 1, p = q = 4/3 satisfies 1/p + 1/q + α/d = 2
    let alpha = 1.0;
    let p = 4.0 / 3.0;
    let r_max = 60.0;
    let n_quad = 1 << 15;
    let families = (cfg.samples / 1000).clamp(4, 64);
    let mut max_ratio = 0.0f64;
    let mut max_drift = 0.0f64;
    for _ in 0..families {
        let s1: f64 = rng.gen_range(0.5..2.0);
        let s2: f64 = rng.gen_range(0.5..2.0);
        let mut ratios = Vec::new();
        for &lambda in &[0.5f64, 1.0, 2.0] {
            let (a, b) = (s1 / lambda, s2 / lambda);
            // centered Gaussian pair: the correlation is a Gaussian of
            // variance a² + b², and the bilinear HLS integrand becomes radial
            let s2sum = a * a + b * b;
            let corr_amp = 2.0 * PI * a * a * b * b / s2sum;
            let num = corr_amp
                * simpson(
                    |r| r.powf(1.0 - alpha) * (-r * r / (2.0 * s2sum)).exp(),
                    r_max,
                    n_quad,
                )
                * 2.0
                * PI;
            let norm_p = |sig: f64| -> f64 {
                (simpson(
                    |r| r * (-p * r * r / (2.0 * sig * sig)).exp(),
                    r_max,
                    n_quad,
                ) * 2.0
                    * PI)
                    .powf(1.0 / p)
            };
            ratios.push(num / (norm_p(a) * norm_p(b)));
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let drift = ratios
            .iter()
            .map(|r| (r - mean).abs() / mean)
            .fold(0.0f64, f64::max);
        max_drift = max_drift.max(drift);
        max_ratio = max_ratio.max(ratios[1]);
        rep.samples += ratios.len();
    }
    rep.worst_margin = max_ratio;
    rep.constants.push(("empirical_hls".into(), max_ratio));
    rep.scale_invariance_drift = Some(max_drift);
    if max_drift > 1e-6 {
        rep.violations += 1;
        rep.notes
            .push(format!("dilation drift {max_drift} exceeds 1e-6"));
    }
    rep
}

fn suite_pitt_ratio(cfg: &SuiteConfig) -> InequalityReport {
    let mut rep = InequalityReport::new("pitt_ratio", false);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(6));
    // discrete Fourier check of ∫|v|^γ g² ≤ C ∫|ξ|^{-γ}|ĝ|² on Gaussians, d=2
    let gamma = -1.0f64;
    let m = 256usize;
    let l = 12.0f64;
    let dv = 2.0 * l / m as f64;
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    let families = (cfg.samples / 2000).clamp(3, 16);
    let mut ratios = Vec::new();
    for _ in 0..families {
        let sigma: f64 = rng.gen_range(0.7..2.0);
        let centers: Vec<f64> = (0..m).map(|j| -l + (j as f64 + 0.5) * dv).collect();
        let mut buf: Vec<Complex64> = Vec::with_capacity(m * m);
        let mut lhs = 0.0;
        for &vy in &centers {
            for &vx in &centers {
                let g = (-(vx * vx + vy * vy) / (2.0 * sigma * sigma)).exp();
                buf.push(Complex64::new(g, 0.0));
                let speed = (vx * vx + vy * vy).sqrt();
                lhs += speed.powf(gamma) * g * g;
            }
        }
        lhs *= dv * dv;
        // 2-D FFT
        for row in buf.chunks_exact_mut(m) {
            fft.process(row);
        }
        let mut scratch = vec![Complex64::new(0.0, 0.0); m];
        for col in 0..m {
            for (r, s) in scratch.iter_mut().enumerate() {
                *s = buf[r * m + col];
            }
            fft.process(&mut scratch);
            for (r, s) in scratch.iter().enumerate() {
                buf[r * m + col] = *s;
            }
        }
        let dxi = PI / l;
        let coeff = dv * dv / (2.0 * PI);
        let mut rhs = 0.0;
        for ky in 0..m {
            let fy = if ky < m / 2 { ky as f64 } else { ky as f64 - m as f64 };
            let xiy = fy * dxi;
            for kx in 0..m {
                let fx = if kx < m / 2 { kx as f64 } else { kx as f64 - m as f64 };
                let xix = fx * dxi;
                let xi = (xix * xix + xiy * xiy).sqrt();
                let ghat2 = (coeff * buf[ky * m + kx].norm()).powi(2);
                rhs += xi.powf(-gamma) * ghat2;
            }
        }
        rhs *= dxi * dxi;
        ratios.push(lhs / rhs);
        rep.samples += 1;
    }
    let max_r = ratios.iter().cloned().fold(0.0f64, f64::max);
    let min_r = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    rep.worst_margin = max_r;
    rep.constants.push(("empirical_c_pitt".into(), max_r));
    rep.constants
        .push(("family_spread".into(), (max_r - min_r) / max_r));
    if !max_r.is_finite() {
        rep.violations += 1;
    }
    rep
}

fn suite_conv_bound(cfg: &SuiteConfig) -> Result<InequalityReport, AnalysisError> {
    let mut rep = InequalityReport::new("conv_bound", false);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(7));
    let grid = holder_grid(2);
    let sampler = FieldSampler::default();
    let alpha = 1.0;
    let p = 4.0; // p > d/(d-α) = 2
    let fields_n = (cfg.samples / 5000).clamp(4, 32);
    let dim = 2;
    let nvd = grid.spec.n_vcells();
    let nxc = grid.spec.n_xcells();
    let dvd = grid.spec.dv().powi(2);
    let dxd = grid.spec.dx().powi(2);
    let mut max_c = 0.0f64;
    for _ in 0..fields_n {
        let f = sampler.sample(&grid, &mut rng);
        for &delta in &[0.0f64, 1.0] {
            // h = ⟨v⟩^δ f
            let mut h = f.clone();
            for xf in 0..nxc {
                for vf in 0..nvd {
                    let w = bracket_vec(&grid.v_coords(vf), dim).powf(delta);
                    h.values[grid.cell_index(xf, vf)] *= w;
                }
            }
            // LHS: sup over v of ‖(h ⋆_v |·|^{-α})(·, v)‖_{L¹x}
            let mut sup = 0.0f64;
            for v_out in 0..nvd {
                let vo = grid.v_coords(v_out);
                let mut l1x = 0.0;
                for xf in 0..nxc {
                    let mut conv = 0.0;
                    for v_in in 0..nvd {
                        if v_in == v_out {
                            continue;
                        }
                        let vi = grid.v_coords(v_in);
                        let mut z2 = 0.0;
                        for a in 0..dim {
                            let d = vo[a] - vi[a];
                            z2 += d * d;
                        }
                        conv += h.values[grid.cell_index(xf, v_in)] * z2.sqrt().powf(-alpha);
                    }
                    l1x += (conv * dvd).abs();
                }
                sup = sup.max(l1x * dxd);
            }
            let l1 = norm(&h, &NormSpec::Lp { p: 1.0 })?;
            let m1 = norm(&h, &NormSpec::MixedLpvL1x { p })?;
            let m2 = norm(&h, &NormSpec::MixedL1xLpv { p })?;
            let rhs = l1 + m1.min(m2);
            max_c = max_c.max(sup / rhs);
            rep.samples += 1;
        }
    }
    rep.worst_margin = max_c;
    rep.constants.push(("empirical_conv_bound".into(), max_c));
    if !max_c.is_finite() {
        rep.violations += 1;
    }
    Ok(rep)
}

fn suite_povzner(cfg: &SuiteConfig) -> InequalityReport {
    let mut rep = InequalityReport::new("povzner_search", true);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(8));
    let k1 = 0.5f64;
    for &s in &[3.0f64, 4.0, 6.0] {
        for &c in &[1.0f64, 2.0, 4.0] {
            let lhs = |x: f64, y: f64| -> f64 {
                -x.powf(s) + c * x.powf(s - 2.0) * y * y - y.powf(s)
                    + c * y.powf(s - 2.0) * x * x
            };
            // fit the minimal C₁ on a log grid
            let n_grid = 120usize;
            let mut c1 = 0.0f64;
            for i in 0..n_grid {
                for j in 0..n_grid {
                    let x = 10f64.powf(3.0 * i as f64 / (n_grid - 1) as f64);
                    let y = 10f64.powf(3.0 * j as f64 / (n_grid - 1) as f64);
                    let need =
                        (lhs(x, y) + k1 * x.powf(s)) / (x.powf(s - 1.0) * y + y.powf(s - 1.0) * x);
                    c1 = c1.max(need);
                }
            }
            // feasibility wants some valid pair, not the sharp constant:
            // pad the grid fit against off-grid suprema
            c1 = c1.max(0.0) * 1.05 + 1e-9;
            // verify on independent random pairs over a wider range
            let checks = (cfg.samples / 9).max(1000);
            for _ in 0..checks {
                let x = 10f64.powf(rng.gen_range(0.0..4.0));
                let y = 10f64.powf(rng.gen_range(0.0..4.0));
                let l = lhs(x, y);
                let r = -k1 * x.powf(s) + c1 * (x.powf(s - 1.0) * y + y.powf(s - 1.0) * x);
                if l > r * (1.0 + SLACK) + SLACK {
                    rep.violations += 1;
                    if rep.worst_case.is_none() {
                        rep.worst_case = Some(format!("s={s}, C={c}, x={x}, y={y}"));
                    }
                }
                rep.samples += 1;
            }
            rep.constants.push((format!("c1[s={s},C={c}]"), c1));
        }
    }
    rep.constants.push(("k1".into(), k1));
    rep
}

/// Shared trajectory ensemble for the two entropy-dissipation-controlled
/// report suites.
fn dissipation_ensemble(
    cfg: &SuiteConfig,
) -> Result<Vec<(Field, f64)>, AnalysisError> {
    let grid = crate::grid::build_grid(crate::grid::GridSpec::new(2, 2, 12, 4.0).expect("valid"))
        .expect("valid");
    let vspec = VelocityKernelSpec::power_law(-1.0);
    let sspec = SpatialKernelSpec::uniform_one();
    let op = CollisionOperator::new(&grid, &vspec, &sspec, Backend::Direct)?;
    let sampler = FieldSampler::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(9));
    let n = (cfg.samples / 5000).clamp(6, 24);
    let mut out = Vec::new();
    for _ in 0..n {
        let f = sampler.sample(&grid, &mut rng);
        let d = op.dissipation(&f, LOG_FLOOR)?;
        out.push((f, d));
    }
    Ok(out)
}

fn suite_fisher_vs_dissipation(cfg: &SuiteConfig) -> Result<InequalityReport, AnalysisError> {
    let mut rep = InequalityReport::new("fisher_vs_dissipation", false);
    let gamma = -1.0;
    let mut c0 = 0.0f64;
    for (f, d) in dissipation_ensemble(cfg)? {
        let i = fisher(&f, gamma)?;
        c0 = c0.max(i / (1.0 + d));
        rep.samples += 1;
    }
    rep.worst_margin = c0;
    rep.constants.push(("empirical_c0".into(), c0));
    rep.notes.push(
        "checked in the 1 + D(f) form: D vanishes on Maxwellians while the weighted Fisher \
         information does not, so a bound by C·D(f) alone cannot hold"
            .into(),
    );
    if !c0.is_finite() {
        rep.violations += 1;
    }
    Ok(rep)
}

fn suite_wk_bound(cfg: &SuiteConfig) -> Result<InequalityReport, AnalysisError> {
    let mut rep = InequalityReport::new("wk_bound", false);
    let gamma = -1.0;
    let k = 2.0;
    let mut cw = 0.0f64;
    for (f, d) in dissipation_ensemble(cfg)? {
        let wk = norm(
            &f,
            &NormSpec::WeightedLk {
                k,
                weight_exponent: gamma,
            },
        )?;
        cw = cw.max(wk / (1.0 + d));
        rep.samples += 1;
    }
    rep.worst_margin = cw;
    rep.constants.push(("empirical_c_wk".into(), cw));
    rep.notes.push(
        "checked in the 1 + D(f) form: the display bound by C·D(f) fails on Maxwellians \
         where D = 0 with a positive left side"
            .into(),
    );
    if !cw.is_finite() {
        rep.violations += 1;
    }
    Ok(rep)
}

/// Run one registry entry by name.
pub fn run_inequality_suite(
    name: &str,
    cfg: &SuiteConfig,
) -> Result<InequalityReport, AnalysisError> {
    match name {
        "peetre_corrected" => Ok(suite_peetre(cfg)),
        "bracket_subadditivity" => Ok(suite_bracket_subadditivity(cfg)),
        "holder_interpolation_2" => suite_holder_2(cfg),
        "holder_interpolation_3" => suite_holder_3(cfg),
        "sobolev_ratio" => Ok(suite_sobolev_ratio(cfg)),
        "hls_ratio" => Ok(suite_hls_ratio(cfg)),
        "pitt_ratio" => Ok(suite_pitt_ratio(cfg)),
        "conv_bound" => suite_conv_bound(cfg),
        "povzner_search" => Ok(suite_povzner(cfg)),
        "fisher_vs_dissipation" => suite_fisher_vs_dissipation(cfg),
        "wk_bound" => suite_wk_bound(cfg),
        other => Err(AnalysisError::UnknownSuite(other.into())),
    }
}

// ---------------------------------------------------------------------------
// rate fits
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub enum GrowthLaw {
    /// slope of log(value) vs log⟨t⟩ must stay ≤ theoretical + margin
    LogLogSlope { theoretical: f64 },
    /// `value(t) ≤ value(0) + C·t`, C fitted on the leading fraction,
    /// exceedance beyond `tol` relative fails
    LinearCap { fit_fraction: f64, exceed_tol: f64 },
    /// least-squares slope must match `expected` within `rel_tol`
    LinearSlope { expected: f64, rel_tol: f64 },
}

/// Pass margin added to upper-bound exponents: desk-scale runs carry O(1)
/// prefactor noise, and undershoot always passes.
pub const RATE_MARGIN: f64 = 0.2;

#[derive(Debug, Clone, Serialize)]
pub struct RateFit {
    pub functional: String,
    pub fitted: f64,
    pub theoretical: f64,
    pub margin: f64,
    pub pass: bool,
    pub short_trajectory: bool,
}

fn lsq_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn rate_fit(
    ts: &[f64],
    values: &[f64],
    functional: &str,
    law: GrowthLaw,
) -> Result<RateFit, AnalysisError> {
    if ts.len() != values.len() || ts.len() < 3 {
        return Err(AnalysisError::DegenerateTrajectory(format!(
            "{} points",
            ts.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(AnalysisError::DegenerateTrajectory(
            "nonpositive or non-finite functional values".into(),
        ));
    }
    let bt = |t: f64| bracket(t);
    let short = bt(*ts.last().unwrap()) / bt(ts[0]) < 10.0;
    match law {
        GrowthLaw::LogLogSlope { theoretical } => {
            let xs: Vec<f64> = ts.iter().map(|&t| bt(t).ln()).collect();
            let ys: Vec<f64> = values.iter().map(|&v| v.ln()).collect();
            let slope = lsq_slope(&xs, &ys);
            Ok(RateFit {
                functional: functional.into(),
                fitted: slope,
                theoretical,
                margin: RATE_MARGIN,
                pass: slope <= theoretical + RATE_MARGIN,
                short_trajectory: short,
            })
        }
        GrowthLaw::LinearCap {
            fit_fraction,
            exceed_tol,
        } => {
            let cut = ((ts.len() as f64 * fit_fraction).ceil() as usize).clamp(2, ts.len());
            let c = lsq_slope(&ts[..cut], &values[..cut]).max(0.0);
            let v0 = values[0];
            let mut worst = 0.0f64;
            for (t, v) in ts.iter().zip(values) {
                let bound = v0 + c * t;
                worst = worst.max((v - bound) / bound);
            }
            Ok(RateFit {
                functional: functional.into(),
                fitted: c,
                theoretical: exceed_tol,
                margin: worst,
                pass: worst <= exceed_tol,
                short_trajectory: short,
            })
        }
        GrowthLaw::LinearSlope { expected, rel_tol } => {
            let slope = lsq_slope(ts, values);
            let err = (slope - expected).abs() / expected.abs().max(1e-300);
            Ok(RateFit {
                functional: functional.into(),
                fitted: slope,
                theoretical: expected,
                margin: err,
                pass: err <= rel_tol,
                short_trajectory: short,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Riccati bound
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct RiccatiReport {
    pub c_fit: f64,
    /// `C⁻¹(π/2 - arctan‖f₀‖)`; infinite when the fitted C is zero
    pub t_star: f64,
    pub violations: usize,
    pub pass: bool,
}

/// Fit the smallest `C` with `d‖f‖/dt ≤ C(1 + ‖f‖²)` along the trajectory
/// (equivalently `arctan‖f_t‖ ≤ arctan‖f₀‖ + C·t`), then assert the
/// tan-bound `‖f_t‖ ≤ tan(arctan‖f₀‖ + C·t)` below the implied `T*`.
pub fn riccati_bound_check(ts: &[f64], norms: &[f64]) -> Result<RiccatiReport, AnalysisError> {
    if ts.len() != norms.len() || ts.len() < 2 {
        return Err(AnalysisError::DegenerateTrajectory(format!(
            "{} points",
            ts.len()
        )));
    }
    if norms.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(AnalysisError::DegenerateTrajectory(
            "non-finite norm values".into(),
        ));
    }
    let y0 = norms[0];
    let a0 = y0.atan();
    let mut c = 0.0f64;
    for (t, y) in ts.iter().zip(norms).skip(1) {
        if *t <= ts[0] {
            continue;
        }
        c = c.max((y.atan() - a0) / (t - ts[0]));
    }
    let t_star = if c <= 0.0 {
        f64::INFINITY
    } else {
        (PI / 2.0 - a0) / c
    };
    if ts.iter().any(|&t| t - ts[0] >= t_star) {
        return Err(AnalysisError::ExceedsBlowupTime(t_star));
    }
    let mut violations = 0;
    for (t, y) in ts.iter().zip(norms).skip(1) {
        let bound = (a0 + c * (t - ts[0])).tan();
        if *y > bound + 1e-9 * (1.0 + bound.abs()) {
            violations += 1;
        }
    }
    Ok(RiccatiReport {
        c_fit: c,
        t_star,
        violations,
        pass: violations == 0,
    })
}
