//! Small fixed-size vector/matrix helpers for d ∈ {2, 3}.
//!
//! Everything is stored in `[f64; 3]` / `[[f64; 3]; 3]` with only the first
//! `d` entries in use; the unused tail stays zero.

/// d-vector with the first `dim` entries active.
pub type VecD = [f64; 3];
/// d×d matrix with the leading `dim`×`dim` block active.
pub type MatD = [[f64; 3]; 3];

pub const ZERO_VEC: VecD = [0.0; 3];
pub const ZERO_MAT: MatD = [[0.0; 3]; 3];

#[inline]
pub fn dot(a: &VecD, b: &VecD, dim: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..dim {
        s += a[i] * b[i];
    }
    s
}

#[inline]
pub fn norm_sq(a: &VecD, dim: usize) -> f64 {
    dot(a, a, dim)
}

#[inline]
pub fn mat_vec(m: &MatD, v: &VecD, dim: usize) -> VecD {
    let mut out = ZERO_VEC;
    for i in 0..dim {
        let mut s = 0.0;
        for j in 0..dim {
            s += m[i][j] * v[j];
        }
        out[i] = s;
    }
    out
}

/// ξᵀ M ξ.
#[inline]
pub fn quad_form(m: &MatD, xi: &VecD, dim: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            s += xi[i] * m[i][j] * xi[j];
        }
    }
    s
}

#[inline]
pub fn trace(m: &MatD, dim: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..dim {
        s += m[i][i];
    }
    s
}

#[inline]
pub fn mat_add_scaled(acc: &mut MatD, m: &MatD, scale: f64, dim: usize) {
    for i in 0..dim {
        for j in 0..dim {
            acc[i][j] += scale * m[i][j];
        }
    }
}

#[inline]
pub fn vec_add_scaled(acc: &mut VecD, v: &VecD, scale: f64, dim: usize) {
    for i in 0..dim {
        acc[i] += scale * v[i];
    }
}

/// Eigen-decomposition of a symmetric d×d matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as rows, sorted by
/// ascending eigenvalue. Deterministic; converges to machine precision in a
/// handful of sweeps for d ≤ 3.
pub fn sym_eigen(m: &MatD, dim: usize) -> (VecD, MatD) {
    let mut a = *m;
    // v holds the accumulated rotations, columns are eigenvectors.
    let mut v = ZERO_MAT;
    for i in 0..dim {
        v[i][i] = 1.0;
    }
    for _sweep in 0..30 {
        let mut off = 0.0;
        for p in 0..dim {
            for q in (p + 1)..dim {
                off += a[p][q] * a[p][q];
            }
        }
        if off <= 1e-240 {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                if a[p][q].abs() <= 1e-120 * (a[p][p].abs() + a[q][q].abs() + 1e-300) {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..dim {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: [usize; 3] = [0, 1, 2];
    order[..dim].sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap());
    let mut vals = ZERO_VEC;
    let mut vecs = ZERO_MAT;
    for (rank, &idx) in order[..dim].iter().enumerate() {
        vals[rank] = a[idx][idx];
        for k in 0..dim {
            vecs[rank][k] = v[k][idx];
        }
    }
    (vals, vecs)
}
