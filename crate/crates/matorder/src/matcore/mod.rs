//! Dense complex matrices and the block-matrix calculus.
//!
//! [`CMatrix`] is the universal carrier: a row-major dense matrix over
//! `Complex<f64>`. [`BlockElement`] views an `(m*n) x (m*n)` matrix as an
//! element of `M_m(M_n)`, with `outer` blocks of `inner`-dimensional
//! matrices. All tolerances in this module are absolute and calibrated for
//! inputs pre-normalized to operator norm at most one.

pub mod eig;

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar;

pub type C64 = Complex<f64>;

pub use eig::{herm_eig, op_norm, psd_check, HermEig, PsdReport};

/// Residual tolerance the eigensolver must meet for unit-norm inputs.
pub const TOL_EIG: f64 = 1e-10;
/// Default tolerance for PSD membership (one order above `TOL_EIG`).
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::BadDimension { what: "zero-sized matrix" });
        }
        if entries.len() != rows * cols {
            return Err(Error::BadArgument {
                what: alloc::format!(
                    "entry count {} does not match {rows}x{cols}",
                    entries.len()
                ),
            });
        }
        Ok(CMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            entries: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Elementary matrix `e^{k,l}` in `M_n` (zero-based indices).
    pub fn elem(n: usize, k: usize, l: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        m.set(k, l, C64::new(1.0, 0.0));
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        CMatrix { rows, cols, entries }
    }

    /// Build from rows of `(re, im)` pairs; convenience for tests and IO.
    pub fn from_re_im(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let rows = re.len();
        if rows == 0 || im.len() != rows {
            return Err(Error::BadArgument { what: alloc::format!("re/im row mismatch") });
        }
        let cols = re[0].len();
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            if re[i].len() != cols || im[i].len() != cols {
                return Err(Error::BadArgument { what: alloc::format!("ragged re/im rows") });
            }
            for j in 0..cols {
                entries.push(C64::new(re[i][j], im[i][j]));
            }
        }
        CMatrix::new(rows, cols, entries)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare { rows: self.rows, cols: self.cols })
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn same_shape(&self, other: &CMatrix) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected: (self.rows, self.cols),
                found: (other.rows, other.cols),
            })
        }
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        CMatrix::new(self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        CMatrix::new(self.rows, self.cols, entries)
    }

    pub fn scale(&self, z: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * z).collect(),
        }
    }

    pub fn scale_re(&self, t: f64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.scale(t)).collect(),
        }
    }

    pub fn neg(&self) -> CMatrix {
        self.scale_re(-1.0)
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: (self.cols, other.rows),
                found: (other.rows, other.cols),
            });
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i))
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        let n = self.rows.min(self.cols);
        let mut t = C64::new(0.0, 0.0);
        for i in 0..n {
            t += self.at(i, i);
        }
        t
    }

    /// Frobenius inner product `<A, B> = Tr(A* B)`.
    pub fn frob_inner(&self, other: &CMatrix) -> Result<C64> {
        self.same_shape(other)?;
        let mut acc = C64::new(0.0, 0.0);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc += a.conj() * b;
        }
        Ok(acc)
    }

    pub fn fro_norm(&self) -> f64 {
        scalar::sqrt(self.entries.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0;
        for z in &self.entries {
            m = scalar::fmax(m, scalar::hypot(z.re, z.im));
        }
        m
    }

    /// Largest entry of `A - A*` in absolute value (0 for Hermitian input).
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self.at(i, j) - self.at(j, i).conj();
                dev = scalar::fmax(dev, scalar::hypot(d.re, d.im));
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Exact symmetrization `(A + A*)/2`.
    pub fn herm_part(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.rows.min(self.cols), |i, j| {
            (self.at(i, j) + self.at(j, i).conj()).scale(0.5)
        })
    }

    /// Kronecker product, general shapes.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (p, q) = (self.rows, self.cols);
        let (r, s) = (other.rows, other.cols);
        CMatrix::from_fn(p * r, q * s, |i, j| {
            self.at(i / r, j / s) * other.at(i % r, j % s)
        })
    }

    /// Block-diagonal sum `x (+) y` for square inputs.
    pub fn direct_sum(&self, other: &CMatrix) -> Result<CMatrix> {
        let n = self.require_square()?;
        let m = other.require_square()?;
        let mut out = CMatrix::zeros(n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.at(i, j));
            }
        }
        for i in 0..m {
            for j in 0..m {
                out.set(n + i, n + j, other.at(i, j));
            }
        }
        Ok(out)
    }

    /// Zero-pad a square matrix into the upper-left corner of a larger one.
    pub fn upper_left_embed(&self, target_dim: usize) -> Result<CMatrix> {
        let n = self.require_square()?;
        if target_dim < n {
            return Err(Error::TargetTooSmall { dim: n, target: target_dim });
        }
        let mut out = CMatrix::zeros(target_dim, target_dim);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.at(i, j));
            }
        }
        Ok(out)
    }

    /// Hermitian dilation `[[0, A], [A*, 0]]`.
    pub fn hermitian_dilation(&self) -> CMatrix {
        let (p, q) = (self.rows, self.cols);
        let mut out = CMatrix::zeros(p + q, p + q);
        for i in 0..p {
            for j in 0..q {
                out.set(i, p + j, self.at(i, j));
                out.set(p + j, i, self.at(i, j).conj());
            }
        }
        out
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }
}

/// The row vector `beta_e = (e_1, ..., e_n)` flattened into `M_{1,n^2}`:
/// ones at positions `i*n + i`.
pub fn beta_vector(n: usize) -> CMatrix {
    let mut b = CMatrix::zeros(1, n * n);
    for i in 0..n {
        b.set(0, i * n + i, C64::new(1.0, 0.0));
    }
    b
}

/// Pairing `sum_{i,j} alpha_{i,j} gamma_{i,j}` between equal-shape square
/// matrices (the compressed form of `beta_e (alpha (x) gamma) beta_e*`).
pub fn beta_pair(alpha: &CMatrix, gamma: &CMatrix) -> Result<C64> {
    alpha.require_square()?;
    alpha.same_shape(gamma)?;
    let mut acc = C64::new(0.0, 0.0);
    for (a, g) in alpha.entries().iter().zip(gamma.entries()) {
        acc += a * g;
    }
    Ok(acc)
}

/// The literal product `beta_e (alpha (x) gamma) beta_e*`; independent route
/// used to validate [`beta_pair`].
pub fn beta_pair_literal(alpha: &CMatrix, gamma: &CMatrix) -> Result<C64> {
    let n = alpha.require_square()?;
    alpha.same_shape(gamma)?;
    let beta = beta_vector(n);
    let big = alpha.kron(gamma);
    let prod = beta.matmul(&big)?.matmul(&beta.adjoint())?;
    Ok(prod.at(0, 0))
}

/// An element of `M_m(M_n)`: an `(m*n) x (m*n)` matrix with block metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockElement {
    outer: usize,
    inner: usize,
    mat: CMatrix,
}

impl BlockElement {
    pub fn new(outer: usize, inner: usize, mat: CMatrix) -> Result<Self> {
        if outer == 0 || inner == 0 {
            return Err(Error::BadDimension { what: "zero block level" });
        }
        let n = mat.require_square()?;
        if n != outer * inner {
            return Err(Error::ShapeMismatch {
                expected: (outer * inner, outer * inner),
                found: (mat.rows(), mat.cols()),
            });
        }
        Ok(BlockElement { outer, inner, mat })
    }

    pub fn zeros(outer: usize, inner: usize) -> Self {
        BlockElement {
            outer,
            inner,
            mat: CMatrix::zeros(outer * inner, outer * inner),
        }
    }

    pub fn identity(outer: usize, inner: usize) -> Self {
        BlockElement {
            outer,
            inner,
            mat: CMatrix::identity(outer * inner),
        }
    }

    pub fn from_blocks(
        outer: usize,
        inner: usize,
        mut f: impl FnMut(usize, usize) -> CMatrix,
    ) -> Result<Self> {
        let mut mat = CMatrix::zeros(outer * inner, outer * inner);
        for k in 0..outer {
            for l in 0..outer {
                let b = f(k, l);
                if b.rows() != inner || b.cols() != inner {
                    return Err(Error::ShapeMismatch {
                        expected: (inner, inner),
                        found: (b.rows(), b.cols()),
                    });
                }
                for a in 0..inner {
                    for c in 0..inner {
                        mat.set(k * inner + a, l * inner + c, b.at(a, c));
                    }
                }
            }
        }
        Ok(BlockElement { outer, inner, mat })
    }

    #[inline]
    pub fn outer(&self) -> usize {
        self.outer
    }

    #[inline]
    pub fn inner(&self) -> usize {
        self.inner
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    /// Extract block `(k, l)` as an `inner x inner` matrix.
    pub fn block(&self, k: usize, l: usize) -> CMatrix {
        let n = self.inner;
        CMatrix::from_fn(n, n, |a, b| self.mat.at(k * n + a, l * n + b))
    }

    pub fn same_shape(&self, other: &BlockElement) -> Result<()> {
        if self.outer == other.outer && self.inner == other.inner {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected: (self.outer, self.inner),
                found: (other.outer, other.inner),
            })
        }
    }

    pub fn add(&self, other: &BlockElement) -> Result<BlockElement> {
        self.same_shape(other)?;
        Ok(BlockElement {
            outer: self.outer,
            inner: self.inner,
            mat: self.mat.add(&other.mat)?,
        })
    }

    pub fn sub(&self, other: &BlockElement) -> Result<BlockElement> {
        self.same_shape(other)?;
        Ok(BlockElement {
            outer: self.outer,
            inner: self.inner,
            mat: self.mat.sub(&other.mat)?,
        })
    }

    pub fn scale_re(&self, t: f64) -> BlockElement {
        BlockElement {
            outer: self.outer,
            inner: self.inner,
            mat: self.mat.scale_re(t),
        }
    }

    /// Block transpose `(tau^tp)_{k,l} = (tau_{l,k})^tp`; coincides with the
    /// full transpose of the underlying matrix.
    pub fn block_transpose(&self) -> BlockElement {
        BlockElement {
            outer: self.outer,
            inner: self.inner,
            mat: self.mat.transpose(),
        }
    }

    /// Blockwise inner trace: the `m x m` matrix of block traces. Preserves
    /// the total trace.
    pub fn inner_partial_trace(&self) -> CMatrix {
        let (m, n) = (self.outer, self.inner);
        CMatrix::from_fn(m, m, |k, l| {
            let mut t = C64::new(0.0, 0.0);
            for a in 0..n {
                t += self.mat.at(k * n + a, l * n + a);
            }
            t
        })
    }

    /// Trace norm: the sum of singular values of the underlying matrix,
    /// equivalently `Tr_m(Tr_n(|tau|))`.
    pub fn trace_norm(&self) -> f64 {
        eig::trace_norm_mat(&self.mat)
    }

    pub fn op_norm(&self) -> f64 {
        eig::op_norm(&self.mat)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.mat.hermitian_deviation()
    }

    pub fn herm_part(&self) -> BlockElement {
        BlockElement {
            outer: self.outer,
            inner: self.inner,
            mat: self.mat.herm_part(),
        }
    }
}

/// Identify `alpha (x) x` with the block matrix `[alpha_{i,j} x]_{i,j}`.
pub fn kron_embed(alpha: &CMatrix, x: &CMatrix) -> Result<BlockElement> {
    let n = alpha.require_square()?;
    let d = x.require_square()?;
    BlockElement::new(n, d, alpha.kron(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seeded;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_embed_identity_blocks() {
        // alpha = I_2, x = e^{1,1} in M_2
        let alpha = CMatrix::identity(2);
        let x = CMatrix::elem(2, 0, 0);
        let t = kron_embed(&alpha, &x).unwrap();
        assert_eq!(t.block(0, 0), x);
        assert_eq!(t.block(1, 1), x);
        assert_eq!(t.block(0, 1), CMatrix::zeros(2, 2));
    }

    #[test]
    fn kron_embed_elementary_selects_block() {
        let alpha = CMatrix::elem(2, 0, 1);
        let x = CMatrix::from_fn(3, 3, |i, j| c((i * 3 + j) as f64, 0.3 * j as f64));
        let t = kron_embed(&alpha, &x).unwrap();
        assert_eq!(t.block(0, 1), x);
        assert_eq!(t.block(0, 0), CMatrix::zeros(3, 3));
        assert_eq!(t.block(1, 0), CMatrix::zeros(3, 3));
        assert_eq!(t.block(1, 1), CMatrix::zeros(3, 3));
    }

    #[test]
    fn kron_embed_entrywise_oracle() {
        let alpha =
            CMatrix::new(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        let x = CMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let t = kron_embed(&alpha, &x).unwrap();
        // independent entrywise expansion
        for i in 0..2 {
            for j in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let expect = alpha.at(i, j) * x.at(a, b);
                        assert_eq!(t.mat().at(i * 2 + a, j * 2 + b), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_embed_rejects_non_square() {
        let alpha = CMatrix::zeros(2, 3);
        let x = CMatrix::identity(2);
        assert!(matches!(kron_embed(&alpha, &x), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn beta_pair_frozen_values() {
        let i2 = CMatrix::identity(2);
        assert_eq!(beta_pair(&i2, &i2).unwrap(), c(2.0, 0.0));

        let e12 = CMatrix::elem(2, 0, 1);
        assert_eq!(beta_pair(&e12, &e12).unwrap(), c(1.0, 0.0));

        let a = CMatrix::new(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)])
            .unwrap();
        let g = CMatrix::new(2, 2, vec![c(5.0, 0.0), c(6.0, 0.0), c(7.0, 0.0), c(8.0, 0.0)])
            .unwrap();
        // elementwise multiply-sum oracle: 5 + 12 + 21 + 32 = 70
        assert_eq!(beta_pair(&a, &g).unwrap(), c(70.0, 0.0));
    }

    #[test]
    fn beta_pair_matches_literal_product() {
        let mut r = Seeded::new(11);
        for n in 1..=4usize {
            let a = r.gaussian_matrix(n, n);
            let g = r.gaussian_matrix(n, n);
            let fast = beta_pair(&a, &g).unwrap();
            let lit = beta_pair_literal(&a, &g).unwrap();
            assert!((fast - lit).norm_sqr() < 1e-24);
        }
    }

    #[test]
    fn beta_pair_shape_mismatch() {
        let a = CMatrix::identity(2);
        let g = CMatrix::identity(3);
        assert!(beta_pair(&a, &g).is_err());
    }

    #[test]
    fn block_transpose_elementary_tensor() {
        let t = kron_embed(&CMatrix::elem(2, 0, 1), &CMatrix::elem(2, 0, 0)).unwrap();
        let expect = kron_embed(&CMatrix::elem(2, 1, 0), &CMatrix::elem(2, 0, 0)).unwrap();
        assert_eq!(t.block_transpose(), expect);
    }

    #[test]
    fn block_transpose_identity_fixed() {
        let t = BlockElement::identity(2, 3);
        assert_eq!(t.block_transpose(), t);
    }

    #[test]
    fn block_transpose_preserves_hermitian_spectrum() {
        let mut r = Seeded::new(5);
        let h = r.gue(4);
        let t = BlockElement::new(2, 2, h).unwrap();
        let tt = t.block_transpose();
        assert!(tt.hermitian_deviation() < 1e-14);
        let ev_a = herm_eig(t.mat()).unwrap().values;
        let ev_b = herm_eig(tt.mat()).unwrap().values;
        for (a, b) in ev_a.iter().zip(&ev_b) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn inner_partial_trace_identity() {
        let t = BlockElement::identity(2, 3);
        let pt = t.inner_partial_trace();
        assert_eq!(pt, CMatrix::identity(2).scale_re(3.0));
    }

    #[test]
    fn inner_partial_trace_tensor_factorization() {
        let mut r = Seeded::new(9);
        let alpha = r.gaussian_matrix(3, 3);
        let gamma = r.gaussian_matrix(2, 2);
        let t = kron_embed(&alpha, &gamma).unwrap();
        let pt = t.inner_partial_trace();
        let expect = alpha.scale(gamma.trace());
        assert!(pt.sub(&expect).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn inner_partial_trace_blockwise_oracle() {
        let mut r = Seeded::new(13);
        let h = r.gue(4);
        let t = BlockElement::new(2, 2, h).unwrap();
        let pt = t.inner_partial_trace();
        for k in 0..2 {
            for l in 0..2 {
                let d = pt.at(k, l) - t.block(k, l).trace();
                assert!(d.norm_sqr() < 1e-28);
            }
        }
    }

    #[test]
    fn trace_norm_frozen_values() {
        let t = BlockElement::identity(2, 2);
        assert_abs_diff_eq!(t.trace_norm(), 4.0, epsilon = 1e-12);

        // |Omega><Omega| with Omega = e_1 (x) e_1 + e_2 (x) e_2: one eigenvalue 2
        let mut omega = CMatrix::zeros(4, 1);
        omega.set(0, 0, c(1.0, 0.0));
        omega.set(3, 0, c(1.0, 0.0));
        let proj = omega.matmul(&omega.adjoint()).unwrap();
        let t = BlockElement::new(2, 2, proj).unwrap();
        assert_abs_diff_eq!(t.trace_norm(), 2.0, epsilon = 1e-10);

        let diag = CMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                c([1.0, -1.0, 0.0, 0.0][i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let t = BlockElement::new(2, 2, diag).unwrap();
        assert_abs_diff_eq!(t.trace_norm(), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn embed_and_direct_sum_basics() {
        let e = CMatrix::elem(2, 0, 0);
        let embedded = e.upper_left_embed(3).unwrap();
        assert_eq!(embedded.at(0, 0), c(1.0, 0.0));
        assert_eq!(embedded.rows(), 3);
        assert_eq!(embedded.fro_norm(), 1.0);

        let ds = CMatrix::identity(2).direct_sum(&CMatrix::zeros(1, 1)).unwrap();
        assert_eq!(ds.at(0, 0), c(1.0, 0.0));
        assert_eq!(ds.at(1, 1), c(1.0, 0.0));
        assert_eq!(ds.at(2, 2), c(0.0, 0.0));

        assert!(matches!(
            CMatrix::identity(3).upper_left_embed(2),
            Err(Error::TargetTooSmall { .. })
        ));
    }

    #[test]
    fn direct_sum_norm_identity() {
        let mut r = Seeded::new(21);
        for _ in 0..16 {
            let a = r.gaussian_matrix(3, 3);
            let b = r.gaussian_matrix(2, 2);
            let ds = a.direct_sum(&b).unwrap();
            let expect = scalar::fmax(op_norm(&a), op_norm(&b));
            assert_abs_diff_eq!(op_norm(&ds), expect, epsilon = 1e-10);
        }
    }

    proptest! {
        #[test]
        fn prop_block_transpose_involution(seed in 0u64..256) {
            let mut r = Seeded::new(seed);
            let m = 1 + (seed as usize % 3);
            let n = 1 + ((seed / 3) as usize % 3);
            let g = r.gaussian_matrix(m * n, m * n);
            let t = BlockElement::new(m, n, g).unwrap();
            let back = t.block_transpose().block_transpose();
            prop_assert!(back.mat().sub(t.mat()).unwrap().max_abs() == 0.0);
        }

        #[test]
        fn prop_partial_trace_preserves_trace(seed in 0u64..256) {
            let mut r = Seeded::new(seed ^ 0xabcd);
            let m = 1 + (seed as usize % 3);
            let n = 1 + ((seed / 5) as usize % 3);
            let g = r.gaussian_matrix(m * n, m * n);
            let t = BlockElement::new(m, n, g).unwrap();
            let d = t.inner_partial_trace().trace() - t.mat().trace();
            prop_assert!(d.norm_sqr() < 1e-24);
        }

        #[test]
        fn prop_adjoint_involution(seed in 0u64..128) {
            let mut r = Seeded::new(seed ^ 0x77);
            let a = r.gaussian_matrix(3, 4);
            prop_assert_eq!(a.adjoint().adjoint(), a);
        }
    }
}
