//! Hermitian eigendecomposition (cyclic complex Jacobi) and everything that
//! flows from it: PSD checks, operator norm, singular values, trace norm,
//! and the trace-duality optimizer.
//!
//! Jacobi keeps the iterate exactly Hermitian and converges on desk-scale
//! inputs (dims up to 64) well below the `1e-10` residual contract.

use alloc::vec::Vec;

use super::{CMatrix, C64};
use crate::error::{Error, Result};
use crate::scalar;

/// Hermitian input tolerance for [`herm_eig`].
pub const HERM_INPUT_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct HermEig {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub vectors: CMatrix,
}

impl HermEig {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Reassemble `V diag(f(values)) V*`.
    pub fn rebuild(&self, mut f: impl FnMut(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut out = CMatrix::zeros(n, n);
        for (idx, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            let col = self.vectors.column(idx);
            for i in 0..n {
                for j in 0..n {
                    let v = out.at(i, j) + (col[i] * col[j].conj()).scale(w);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// The input must satisfy `A = A*` within [`HERM_INPUT_TOL`]; computation
/// proceeds on the exact Hermitian part.
pub fn herm_eig(a: &CMatrix) -> Result<HermEig> {
    let n = a.require_square()?;
    let dev = a.hermitian_deviation();
    if !(dev <= HERM_INPUT_TOL) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let mut b = a.herm_part();
    let mut v = CMatrix::identity(n);

    if n > 1 {
        let scale = b.fro_norm();
        let stop = 1e-14 * scalar::fmax(scale, 1e-300);
        for _sweep in 0..64 {
            if off_diag_norm(&b) <= stop {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut b, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        b.at(i, i)
            .re
            .partial_cmp(&b.at(j, j).re)
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let values: Vec<f64> = order.iter().map(|&i| b.at(i, i).re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v.at(i, order[j]));
    Ok(HermEig { values, vectors })
}

fn off_diag_norm(b: &CMatrix) -> f64 {
    let n = b.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += b.at(i, j).norm_sqr();
            }
        }
    }
    scalar::sqrt(acc)
}

/// One complex Jacobi rotation annihilating entry `(p, q)`.
fn rotate(b: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = b.at(p, q);
    let m = scalar::hypot(apq.re, apq.im);
    if m <= 1e-300 {
        return;
    }
    let n = b.rows();
    let app = b.at(p, p).re;
    let aqq = b.at(q, q).re;
    let omega = apq.scale(1.0 / m);
    let omega_c = omega.conj();

    let tau = (aqq - app) / (2.0 * m);
    let t = if tau >= 0.0 {
        1.0 / (tau + scalar::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + scalar::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / scalar::sqrt(1.0 + t * t);
    let s = t * c;

    // Column update: A <- A U with u_pp = c, u_qp = -s conj(omega),
    // u_pq = s, u_qq = c conj(omega).
    for i in 0..n {
        let bip = b.at(i, p);
        let biq = b.at(i, q);
        b.set(i, p, bip.scale(c) - (omega_c * biq).scale(s));
        b.set(i, q, bip.scale(s) + (omega_c * biq).scale(c));
    }
    // Row update: A <- U* A.
    for j in 0..n {
        let bpj = b.at(p, j);
        let bqj = b.at(q, j);
        b.set(p, j, bpj.scale(c) - (omega * bqj).scale(s));
        b.set(q, j, bpj.scale(s) + (omega * bqj).scale(c));
    }
    // Analytic values for the rotated 2x2 corner.
    b.set(p, p, C64::new(app - t * m, 0.0));
    b.set(q, q, C64::new(aqq + t * m, 0.0));
    b.set(p, q, C64::new(0.0, 0.0));
    b.set(q, p, C64::new(0.0, 0.0));

    for i in 0..n {
        let vip = v.at(i, p);
        let viq = v.at(i, q);
        v.set(i, p, vip.scale(c) - (omega_c * viq).scale(s));
        v.set(i, q, vip.scale(s) + (omega_c * viq).scale(c));
    }
}

#[derive(Clone, Debug)]
pub struct PsdReport {
    pub psd: bool,
    pub min_eig: f64,
    /// Eigenvector attaining the minimal eigenvalue.
    pub witness: Vec<C64>,
}

/// PSD test: true iff the minimal eigenvalue is at least `-tol`.
pub fn psd_check(a: &CMatrix, tol: f64) -> Result<PsdReport> {
    let eig = herm_eig(a)?;
    let min_eig = eig.min();
    Ok(PsdReport {
        psd: min_eig >= -tol,
        min_eig,
        witness: eig.vectors.column(0),
    })
}

/// Largest singular value, computed from the Hermitian dilation.
pub fn op_norm(a: &CMatrix) -> f64 {
    let eig = herm_eig(&a.hermitian_dilation()).expect("dilation is Hermitian");
    scalar::fmax(eig.max(), 0.0)
}

/// Sum of singular values.
pub fn trace_norm_mat(a: &CMatrix) -> f64 {
    let eig = herm_eig(&a.hermitian_dilation()).expect("dilation is Hermitian");
    eig.values.iter().map(|&l| scalar::fmax(l, 0.0)).sum()
}

/// Singular values above `cutoff` in descending order.
pub fn singular_values(a: &CMatrix, cutoff: f64) -> Vec<f64> {
    let eig = herm_eig(&a.hermitian_dilation()).expect("dilation is Hermitian");
    let mut out: Vec<f64> = eig.values.iter().copied().filter(|&l| l > cutoff).collect();
    out.reverse();
    out
}

/// Singular triplets `(sigma, u, v)` with `A v = sigma u`, for
/// `sigma > cutoff`, descending.
pub fn svd_triplets(a: &CMatrix, cutoff: f64) -> Vec<(f64, Vec<C64>, Vec<C64>)> {
    let p = a.rows();
    let q = a.cols();
    let eig = herm_eig(&a.hermitian_dilation()).expect("dilation is Hermitian");
    let mut out = Vec::new();
    for (idx, &lam) in eig.values.iter().enumerate().rev() {
        if lam <= cutoff {
            break;
        }
        let w = eig.vectors.column(idx);
        let sq2 = core::f64::consts::SQRT_2;
        let u: Vec<C64> = w[..p].iter().map(|z| z.scale(sq2)).collect();
        let v: Vec<C64> = w[p..p + q].iter().map(|z| z.scale(sq2)).collect();
        out.push((lam, u, v));
    }
    out
}

/// Partial isometry `U` with `Tr(A U) = ||A||_1` and `||U|| <= 1`
/// (the polar optimizer of the trace-duality pairing).
pub fn trace_dual_optimizer(a: &CMatrix) -> CMatrix {
    let p = a.rows();
    let q = a.cols();
    let mut out = CMatrix::zeros(q, p);
    for (sigma, u, v) in svd_triplets(a, 1e-13 * scalar::fmax(1.0, a.fro_norm())) {
        let _ = sigma;
        for i in 0..q {
            for j in 0..p {
                let val = out.at(i, j) + v[i] * u[j].conj();
                out.set(i, j, val);
            }
        }
    }
    out
}
