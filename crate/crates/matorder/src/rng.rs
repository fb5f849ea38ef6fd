//! Deterministic random generation.
//!
//! Every stochastic routine in the crate draws from a [`Seeded`] stream.
//! Sub-streams are derived by hashing a parent seed with a list of tags, so
//! results are independent of evaluation order.

use alloc::vec::Vec;

use num_complex::Complex;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::matcore::{eig, CMatrix, C64};
use crate::scalar;

const TWO_PI: f64 = core::f64::consts::TAU;

/// FNV-1a over a sequence of u64 words; used for seed derivation and for
/// case digests in reports.
pub fn fnv1a64(words: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in words {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
    }
    h
}

#[derive(Clone, Debug)]
pub struct Seeded {
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl Seeded {
    pub fn new(seed: u64) -> Self {
        Seeded {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare_normal: None,
        }
    }

    /// Child stream keyed by `(seed, tags...)`.
    pub fn derive(seed: u64, tags: &[u64]) -> Self {
        let mut words = Vec::with_capacity(tags.len() + 1);
        words.push(seed);
        words.extend_from_slice(tags);
        Seeded::new(fnv1a64(&words))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.rng.next_u64() % n as u64) as usize
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // u1 in (0, 1] so the log is finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = scalar::sqrt(-2.0 * scalar::ln(u1));
        self.spare_normal = Some(r * scalar::sin(TWO_PI * u2));
        r * scalar::cos(TWO_PI * u2)
    }

    /// Standard complex normal (unit total variance).
    pub fn complex_normal(&mut self) -> C64 {
        Complex::new(self.normal(), self.normal()).scale(core::f64::consts::FRAC_1_SQRT_2)
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            entries.push(self.complex_normal());
        }
        CMatrix::new(rows, cols, entries).expect("shape by construction")
    }

    /// Random Hermitian matrix normalized to unit operator norm
    /// (GUE-style: symmetrized complex Gaussian).
    pub fn gue(&mut self, n: usize) -> CMatrix {
        let g = self.gaussian_matrix(n, n);
        let h = g.herm_part();
        let norm = eig::op_norm(&h);
        if norm < 1e-12 {
            return CMatrix::identity(n);
        }
        h.scale_re(1.0 / norm)
    }

    /// Random PSD matrix `G G*` with `rank` Gaussian columns.
    pub fn wishart(&mut self, n: usize, rank: usize) -> CMatrix {
        let g = self.gaussian_matrix(n, rank.max(1));
        let ga = g.adjoint();
        g.matmul(&ga).expect("shape by construction")
    }

    /// Random PSD contraction with operator norm in (0, 1].
    pub fn psd_contraction(&mut self, n: usize) -> CMatrix {
        let w = self.wishart(n, n);
        let norm = eig::op_norm(&w);
        if norm < 1e-12 {
            return CMatrix::zeros(n, n);
        }
        let target = 0.05 + 0.95 * self.uniform();
        w.scale_re(target / norm)
    }

    /// Haar-ish random isometry: Gaussian columns orthonormalized.
    /// Requires `rows >= cols`; satisfies `a* a = I` to machine precision.
    pub fn isometry(&mut self, rows: usize, cols: usize) -> CMatrix {
        debug_assert!(rows >= cols);
        loop {
            let g = self.gaussian_matrix(rows, cols);
            if let Some(q) = orthonormalize_columns(&g) {
                return q;
            }
        }
    }

    pub fn unitary(&mut self, n: usize) -> CMatrix {
        self.isometry(n, n)
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Returns `None`
/// when a column degenerates (caller resamples).
fn orthonormalize_columns(a: &CMatrix) -> Option<CMatrix> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v: Vec<C64> = (0..rows).map(|i| a.at(i, j)).collect();
        for _pass in 0..2 {
            for u in &q {
                let mut proj = C64::new(0.0, 0.0);
                for i in 0..rows {
                    proj += u[i].conj() * v[i];
                }
                for i in 0..rows {
                    v[i] -= proj * u[i];
                }
            }
        }
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq < 1e-20 {
            return None;
        }
        let inv = 1.0 / scalar::sqrt(norm_sq);
        for z in v.iter_mut() {
            *z = z.scale(inv);
        }
        q.push(v);
    }
    let mut m = CMatrix::zeros(rows, cols);
    for (j, col) in q.iter().enumerate() {
        for i in 0..rows {
            m.set(i, j, col[i]);
        }
    }
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Seeded::new(7);
        let mut b = Seeded::new(7);
        for _ in 0..32 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn derive_separates_tags() {
        let mut a = Seeded::derive(0, &[1, 2]);
        let mut b = Seeded::derive(0, &[2, 1]);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn isometry_is_isometric() {
        let mut r = Seeded::new(3);
        let q = r.isometry(5, 3);
        let gram = q.adjoint().matmul(&q).unwrap();
        let dev = gram.sub(&CMatrix::identity(3)).unwrap().max_abs();
        assert!(dev < 1e-12, "gram deviation {dev}");
    }
}
