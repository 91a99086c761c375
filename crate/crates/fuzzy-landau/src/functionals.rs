//! Scalar functionals of a field: Boltzmann entropy, weighted Fisher
//! information, bracket moments, and the L^p / mixed / weighted norm family.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{gradient_v_values, Field};
use crate::kernels::bracket_vec;
use crate::la::norm_sq;

#[derive(Debug, Error, PartialEq)]
pub enum FunctionalError {
    #[error("entropy requires a nonnegative field")]
    NegativeField,
    #[error("norm parameter out of range: {0}")]
    BadParameter(String),
}

/// `H(f) = ∫ f log f`, with `0·log 0 = 0`.
pub fn entropy(field: &Field) -> Result<f64, FunctionalError> {
    let mut s = 0.0;
    for &v in &field.values {
        if v < 0.0 {
            return Err(FunctionalError::NegativeField);
        }
        if v > 0.0 {
            s += v * v.ln();
        }
    }
    Ok(field.measure() * s)
}

/// Weighted Fisher information `I(f) = ∫ ⟨v⟩^γ |∇_v √f|²`.
pub fn fisher(field: &Field, gamma: f64) -> Result<f64, FunctionalError> {
    if field.values.iter().any(|&v| v < 0.0) {
        return Err(FunctionalError::NegativeField);
    }
    let sqrtf: Vec<f64> = field.values.iter().map(|&v| v.sqrt()).collect();
    let grad = gradient_v_values(&field.grid, &sqrtf);
    let grid = &field.grid;
    let dim = grid.dim();
    let nvd = grid.spec.n_vcells();
    let mut s = 0.0;
    for xf in 0..grid.spec.n_xcells() {
        for vf in 0..nvd {
            let idx = grid.cell_index(xf, vf);
            let mut g2 = 0.0;
            for a in 0..dim {
                g2 += grad.comps[a][idx] * grad.comps[a][idx];
            }
            if g2 == 0.0 {
                continue;
            }
            let v = grid.v_coords(vf);
            s += bracket_vec(&v, dim).powf(gamma) * g2;
        }
    }
    Ok(field.measure() * s)
}

/// `M_s(f) = ∫ ⟨v⟩^s f`.
pub fn moment(field: &Field, s: f64) -> f64 {
    let grid = &field.grid;
    let dim = grid.dim();
    let nvd = grid.spec.n_vcells();
    // bracket powers per velocity cell, reused across the x blocks
    let weights: Vec<f64> = (0..nvd)
        .map(|vf| bracket_vec(&grid.v_coords(vf), dim).powf(s))
        .collect();
    let mut total = 0.0;
    for xf in 0..grid.spec.n_xcells() {
        let base = xf * nvd;
        for (vf, w) in weights.iter().enumerate() {
            total += w * field.values[base + vf];
        }
    }
    field.measure() * total
}

/// Norm selector. `p = f64::INFINITY` requests the max-cell norm where a `p`
/// parameter appears.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NormSpec {
    /// `(∫∫ |f|^p dx dv)^{1/p}`, or max over cells for `p = ∞`.
    Lp { p: f64 },
    /// `∫ (⟨x⟩^a + ⟨v⟩^b) f` with minimal-image torus bracket.
    L1ab { a: f64, b: f64 },
    /// `∫_x (∫_v |f|^p dv)^{1/p} dx`.
    MixedL1xLpv { p: f64 },
    /// `(∫_v (∫_x |f| dx)^p dv)^{1/p}`.
    MixedLpvL1x { p: f64 },
    /// `M_s(f)`.
    MomentS { s: f64 },
    /// `‖⟨v⟩^γ f‖_{L¹_x L^k_v}`.
    WeightedLk { k: f64, weight_exponent: f64 },
}

fn check_p(p: f64) -> Result<(), FunctionalError> {
    if p >= 1.0 || p == f64::INFINITY {
        Ok(())
    } else {
        Err(FunctionalError::BadParameter(format!(
            "p must be in [1, inf], got {p}"
        )))
    }
}

/// Evaluate a norm by midpoint quadrature; mixed norms use iterated sums in
/// the declared order.
pub fn norm(field: &Field, spec: &NormSpec) -> Result<f64, FunctionalError> {
    let grid = &field.grid;
    let gspec = &grid.spec;
    let dim = gspec.dim;
    let nvd = gspec.n_vcells();
    let nxc = gspec.n_xcells();
    let dxd = gspec.dx().powi(dim as i32);
    let dvd = gspec.dv().powi(dim as i32);
    match *spec {
        NormSpec::Lp { p } => {
            check_p(p)?;
            if p == f64::INFINITY {
                return Ok(field.values.iter().fold(0.0f64, |m, &v| m.max(v.abs())));
            }
            let s: f64 = field.values.iter().map(|&v| v.abs().powf(p)).sum();
            Ok((field.measure() * s).powf(1.0 / p))
        }
        NormSpec::L1ab { a, b } => {
            let mut total = 0.0;
            for xf in 0..nxc {
                let xc = grid.x_coords_centered(xf);
                let xw = (1.0 + norm_sq(&xc, dim)).sqrt().powf(a);
                for vf in 0..nvd {
                    let vw = bracket_vec(&grid.v_coords(vf), dim).powf(b);
                    total += (xw + vw) * field.values[grid.cell_index(xf, vf)];
                }
            }
            Ok(field.measure() * total)
        }
        NormSpec::MixedL1xLpv { p } => {
            check_p(p)?;
            let mut total = 0.0;
            for xf in 0..nxc {
                let base = xf * nvd;
                let inner = if p == f64::INFINITY {
                    field.values[base..base + nvd]
                        .iter()
                        .fold(0.0f64, |m, &v| m.max(v.abs()))
                } else {
                    let s: f64 = field.values[base..base + nvd]
                        .iter()
                        .map(|&v| v.abs().powf(p))
                        .sum();
                    (dvd * s).powf(1.0 / p)
                };
                total += inner;
            }
            Ok(dxd * total)
        }
        NormSpec::MixedLpvL1x { p } => {
            check_p(p)?;
            let mut outer = 0.0;
            let mut sup = 0.0f64;
            for vf in 0..nvd {
                let mut inner = 0.0;
                for xf in 0..nxc {
                    inner += field.values[grid.cell_index(xf, vf)].abs();
                }
                inner *= dxd;
                if p == f64::INFINITY {
                    sup = sup.max(inner);
                } else {
                    outer += inner.powf(p);
                }
            }
            if p == f64::INFINITY {
                Ok(sup)
            } else {
                Ok((dvd * outer).powf(1.0 / p))
            }
        }
        NormSpec::MomentS { s } => {
            if s < 0.0 {
                return Err(FunctionalError::BadParameter(format!(
                    "moment order must be nonnegative, got {s}"
                )));
            }
            Ok(moment(field, s))
        }
        NormSpec::WeightedLk { k, weight_exponent } => {
            check_p(k)?;
            let mut total = 0.0;
            for xf in 0..nxc {
                let mut s = 0.0;
                for vf in 0..nvd {
                    let w = bracket_vec(&grid.v_coords(vf), dim).powf(weight_exponent);
                    s += (w * field.values[grid.cell_index(xf, vf)].abs()).powf(k);
                }
                total += (dvd * s).powf(1.0 / k);
            }
            Ok(dxd * total)
        }
    }
}
