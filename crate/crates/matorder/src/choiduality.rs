//! The correspondence between linear maps, linear functionals, and block
//! matrices.
//!
//! For `tau` in `M_m(M_n)`, `theta_tau: M_m -> M_n` sends `alpha` to
//! `sum_{k,l} tau_{k,l} alpha_{k,l}`; its inverse assembles the Choi block
//! matrix `[phi(e^{k,l})]_{k,l}` of a map on a full algebra. A map on a
//! full algebra is completely positive exactly when its Choi matrix is PSD,
//! and then a Kraus family reconstructs it.
//!
//! On the functional side, `Theta_F(x)_{k,l} = F(e^{k,l} (x) x)` and
//! `Upsilon_phi(u) = sum_{k,l} phi(u_{k,l})_{k,l}` are mutually inverse and
//! exchange positivity of a functional on `M_n(X)` with complete positivity
//! of the associated map `X -> M_n`. The trace pairing
//! `(tau, alpha) -> Tr_m(Tr_n(tau^tp alpha))` realizes the dual norm.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matcore::{beta_vector, eig, BlockElement, CMatrix, C64, DEFAULT_PSD_TOL};
use crate::ordspace::{SpaceModel, SPAN_TOL};
use crate::scalar;

/// Self-adjointness tolerance for maps and functionals.
pub const SELFADJOINT_TOL: f64 = 1e-10;
/// Residual bound a Kraus certificate must meet.
pub const KRAUS_RESIDUAL_TOL: f64 = 1e-8;

/// A linear map `X -> M_n` stored by its action on the domain basis.
///
/// When the domain is a full matrix algebra the Choi block matrix is
/// computed on construction and reused by every positivity check
/// (models are immutable, so the cache is never invalidated).
#[derive(Clone, Debug)]
pub struct MapModel {
    dom: Arc<SpaceModel>,
    cod_level: usize,
    coeffs: Vec<CMatrix>,
    is_selfadjoint: bool,
    choi: Option<BlockElement>,
}

impl MapModel {
    pub fn new(dom: Arc<SpaceModel>, cod_level: usize, coeffs: Vec<CMatrix>) -> Result<Self> {
        if cod_level == 0 {
            return Err(Error::BadDimension { what: "codomain level zero" });
        }
        if coeffs.len() != dom.dim() {
            return Err(Error::BadArgument {
                what: alloc::format!(
                    "coefficient count {} does not match domain dimension {}",
                    coeffs.len(),
                    dom.dim()
                ),
            });
        }
        for c in &coeffs {
            if c.rows() != cod_level || c.cols() != cod_level {
                return Err(Error::ShapeMismatch {
                    expected: (cod_level, cod_level),
                    found: (c.rows(), c.cols()),
                });
            }
        }
        let mut model = MapModel { dom, cod_level, coeffs, is_selfadjoint: false, choi: None };
        model.is_selfadjoint = model.compute_selfadjoint()?;
        if model.dom.is_full_algebra() {
            model.choi = Some(model.compute_choi()?);
        }
        Ok(model)
    }

    /// The identity map on the full algebra `M_d`.
    pub fn identity(d: usize) -> Self {
        let dom = SpaceModel::full(d);
        let coeffs = dom.basis().to_vec();
        MapModel::new(dom, d, coeffs).expect("identity map is well-formed")
    }

    /// The transpose map on the full algebra `M_d`.
    pub fn transpose(d: usize) -> Self {
        let dom = SpaceModel::full(d);
        let coeffs = dom.basis().iter().map(CMatrix::transpose).collect();
        MapModel::new(dom, d, coeffs).expect("transpose map is well-formed")
    }

    /// `x -> Tr(x) I_n` on the full algebra `M_d`.
    pub fn trace_map(d: usize, n: usize) -> Self {
        let dom = SpaceModel::full(d);
        let coeffs = dom
            .basis()
            .iter()
            .map(|b| CMatrix::identity(n).scale(b.trace()))
            .collect();
        MapModel::new(dom, n, coeffs).expect("trace map is well-formed")
    }

    /// `x -> gamma* x gamma` on the full algebra, for `gamma` in `M_{d,n}`.
    pub fn conjugation(gamma: &CMatrix) -> Result<Self> {
        let dom = SpaceModel::full(gamma.rows());
        let ga = gamma.adjoint();
        let coeffs: Result<Vec<CMatrix>> = dom
            .basis()
            .iter()
            .map(|b| ga.matmul(b)?.matmul(gamma))
            .collect();
        MapModel::new(dom, gamma.cols(), coeffs?)
    }

    pub fn zero(dom: Arc<SpaceModel>, cod_level: usize) -> Self {
        let coeffs = vec![CMatrix::zeros(cod_level, cod_level); dom.dim()];
        MapModel::new(dom, cod_level, coeffs).expect("zero map is well-formed")
    }

    /// The map `alpha -> theta_tau(alpha)` determined by a block matrix.
    pub fn from_choi(tau: &BlockElement) -> Self {
        let dom = SpaceModel::full(tau.outer());
        let coeffs = (0..tau.outer())
            .flat_map(|k| (0..tau.outer()).map(move |l| (k, l)))
            .map(|(k, l)| tau.block(k, l))
            .collect();
        MapModel::new(dom, tau.inner(), coeffs).expect("choi-derived map is well-formed")
    }

    pub fn dom(&self) -> &Arc<SpaceModel> {
        &self.dom
    }

    pub fn cod_level(&self) -> usize {
        self.cod_level
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    pub fn is_selfadjoint(&self) -> bool {
        self.is_selfadjoint
    }

    fn compute_selfadjoint(&self) -> Result<bool> {
        if !self.dom.star_closed() {
            return Ok(false);
        }
        // phi* = phi iff phi(b*)* = phi(b) for every basis element.
        let mut dev: f64 = 0.0;
        for (r, b) in self.dom.basis().iter().enumerate() {
            let (coords, residual) = self.dom.coords(&b.adjoint())?;
            if residual > SPAN_TOL {
                return Ok(false);
            }
            let mut img = CMatrix::zeros(self.cod_level, self.cod_level);
            for (s, c) in coords.iter().enumerate() {
                img = img.add(&self.coeffs[s].scale(*c))?;
            }
            dev = scalar::fmax(dev, img.adjoint().sub(&self.coeffs[r])?.max_abs());
        }
        Ok(dev <= SELFADJOINT_TOL)
    }

    fn compute_choi(&self) -> Result<BlockElement> {
        let m = self.dom.ambient_dim();
        let mut blocks = Vec::with_capacity(m * m);
        for k in 0..m {
            for l in 0..m {
                blocks.push(self.apply(&CMatrix::elem(m, k, l))?);
            }
        }
        BlockElement::from_blocks(m, self.cod_level, |k, l| blocks[k * m + l].clone())
    }

    /// Apply to an element of the domain span.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        let (coords, residual) = self.dom.coords(x)?;
        if residual > SPAN_TOL * scalar::fmax(1.0, x.fro_norm()) {
            return Err(Error::OutsideSpan { residual });
        }
        let mut out = CMatrix::zeros(self.cod_level, self.cod_level);
        for (s, c) in coords.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            out = out.add(&self.coeffs[s].scale(*c))?;
        }
        Ok(out)
    }

    /// Level-`m` amplification `phi^{(m)}` applied blockwise.
    pub fn amplify(&self, v: &BlockElement) -> Result<BlockElement> {
        if v.inner() != self.dom.ambient_dim() {
            return Err(Error::LevelMismatch {
                expected: self.dom.ambient_dim(),
                found: v.inner(),
            });
        }
        let mut blocks = Vec::with_capacity(v.outer() * v.outer());
        for k in 0..v.outer() {
            for l in 0..v.outer() {
                blocks.push(self.apply(&v.block(k, l))?);
            }
        }
        BlockElement::from_blocks(v.outer(), self.cod_level, |k, l| {
            blocks[k * v.outer() + l].clone()
        })
    }

    /// The cached Choi block matrix; full-algebra domains only.
    pub fn choi(&self) -> Result<&BlockElement> {
        self.choi.as_ref().ok_or(Error::UnsupportedDomain)
    }

    pub fn add(&self, other: &MapModel) -> Result<MapModel> {
        self.compatible(other)?;
        let coeffs: Result<Vec<CMatrix>> = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        MapModel::new(self.dom.clone(), self.cod_level, coeffs?)
    }

    pub fn sub(&self, other: &MapModel) -> Result<MapModel> {
        self.compatible(other)?;
        let coeffs: Result<Vec<CMatrix>> = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        MapModel::new(self.dom.clone(), self.cod_level, coeffs?)
    }

    pub fn scale_re(&self, t: f64) -> MapModel {
        let coeffs = self.coeffs.iter().map(|c| c.scale_re(t)).collect();
        MapModel::new(self.dom.clone(), self.cod_level, coeffs)
            .expect("scaling preserves well-formedness")
    }

    fn compatible(&self, other: &MapModel) -> Result<()> {
        if self.cod_level != other.cod_level {
            return Err(Error::LevelMismatch {
                expected: self.cod_level,
                found: other.cod_level,
            });
        }
        if self.dom.ambient_dim() != other.dom.ambient_dim()
            || self.dom.dim() != other.dom.dim()
        {
            return Err(Error::ShapeMismatch {
                expected: (self.dom.ambient_dim(), self.dom.dim()),
                found: (other.dom.ambient_dim(), other.dom.dim()),
            });
        }
        Ok(())
    }
}

/// `theta_tau(alpha) = sum_{k,l} tau_{k,l} alpha_{k,l}`.
pub fn theta_apply(tau: &BlockElement, alpha: &CMatrix) -> Result<CMatrix> {
    let m = alpha.require_square()?;
    if m != tau.outer() {
        return Err(Error::LevelMismatch { expected: tau.outer(), found: m });
    }
    let n = tau.inner();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..m {
        for l in 0..m {
            let a = alpha.at(k, l);
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    let v = out.at(i, j) + tau.mat().at(k * n + i, l * n + j) * a;
                    out.set(i, j, v);
                }
            }
        }
    }
    Ok(out)
}

/// Choi block matrix `[phi(e^{k,l})]_{k,l}` of a map on a full algebra.
pub fn choi_of(phi: &MapModel) -> Result<BlockElement> {
    Ok(phi.choi()?.clone())
}

#[derive(Clone, Debug)]
pub struct CpReport {
    pub cp: bool,
    pub min_eig: f64,
    pub witness: Vec<C64>,
}

/// Complete positivity via the Choi criterion (full-algebra domains).
pub fn cp_check(phi: &MapModel, tol: f64) -> Result<CpReport> {
    let choi = phi.choi()?;
    let rep = eig::psd_check(&choi.mat().herm_part(), tol)?;
    let dev = choi.hermitian_deviation();
    Ok(CpReport {
        cp: rep.psd && dev <= scalar::fmax(tol, SELFADJOINT_TOL),
        min_eig: rep.min_eig,
        witness: rep.witness,
    })
}

/// A Kraus family together with the reconstruction residual
/// `max_alpha ||theta_tau(alpha) - sum_i gamma_i* alpha gamma_i||`.
#[derive(Clone, Debug)]
pub struct KrausCertificate {
    pub gammas: Vec<CMatrix>,
    pub residual: f64,
}

impl KrausCertificate {
    pub fn is_valid(&self) -> bool {
        self.residual <= KRAUS_RESIDUAL_TOL
    }
}

/// Kraus decomposition of a PSD block matrix: eigenvectors with
/// `lambda > tol` are scaled by `sqrt(lambda)`, read row-major into
/// `m x n` matrices, and conjugated entrywise so that
/// `theta_tau(alpha) = sum_i gamma_i* alpha gamma_i`. The global phase of
/// each `gamma_i` is not normalized; certificates compare only the
/// reconstructed map.
pub fn kraus_of(tau: &BlockElement, tol: f64) -> Result<KrausCertificate> {
    let dev = tau.hermitian_deviation();
    if dev > SELFADJOINT_TOL * 100.0 {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let eigd = eig::herm_eig(&tau.mat().herm_part())?;
    if eigd.min() < -tol {
        return Err(Error::ConeViolation { min_eig: eigd.min() });
    }
    let (m, n) = (tau.outer(), tau.inner());
    let mut gammas = Vec::new();
    for (idx, &lam) in eigd.values.iter().enumerate() {
        if lam <= tol {
            continue;
        }
        let col = eigd.vectors.column(idx);
        let s = scalar::sqrt(lam);
        let gamma = CMatrix::from_fn(m, n, |k, a| (col[k * n + a].conj()).scale(s));
        gammas.push(gamma);
    }
    let residual = kraus_residual(tau, &gammas)?;
    Ok(KrausCertificate { gammas, residual })
}

/// `max` over the elementary basis of `||theta_tau(e^{k,l}) - sum gamma* e^{k,l} gamma||`.
pub fn kraus_residual(tau: &BlockElement, gammas: &[CMatrix]) -> Result<f64> {
    let m = tau.outer();
    let n = tau.inner();
    let mut worst: f64 = 0.0;
    for k in 0..m {
        for l in 0..m {
            let alpha = CMatrix::elem(m, k, l);
            let direct = theta_apply(tau, &alpha)?;
            let mut recon = CMatrix::zeros(n, n);
            for g in gammas {
                recon = recon.add(&g.adjoint().matmul(&alpha)?.matmul(g)?)?;
            }
            worst = scalar::fmax(worst, eig::op_norm(&direct.sub(&recon)?));
        }
    }
    Ok(worst)
}

/// `(theta_tau (x) id_X)(w) = sum_{k,l} tau_{k,l} (x) w_{k,l}`:
/// maps a level-`m` element over `X` to a level-`n` element over `X`.
pub fn theta_tensor_apply(tau: &BlockElement, w: &BlockElement) -> Result<BlockElement> {
    if tau.outer() != w.outer() {
        return Err(Error::LevelMismatch { expected: tau.outer(), found: w.outer() });
    }
    let m = tau.outer();
    let n = tau.inner();
    let d = w.inner();
    let mut out = BlockElement::zeros(n, d);
    for k in 0..m {
        for l in 0..m {
            let term = tau.block(k, l).kron(&w.block(k, l));
            out = out.add(&BlockElement::new(n, d, term)?)?;
        }
    }
    Ok(out)
}

/// The trace pairing `Tr_m(Tr_n(tau^tp alpha))`; shapes must agree.
pub fn trace_pair(tau: &BlockElement, alpha: &BlockElement) -> Result<C64> {
    tau.same_shape(alpha)?;
    let prod = tau.block_transpose().mat().matmul(alpha.mat())?;
    let as_block = BlockElement::new(tau.outer(), tau.inner(), prod)?;
    Ok(as_block.inner_partial_trace().trace())
}

/// A linear functional on `M_n(X)` stored by its values on the induced
/// basis `e^{k,l} (x) b_r`, indexed as `(k * n + l) * dim(X) + r`.
#[derive(Clone, Debug)]
pub struct FunctionalModel {
    level: usize,
    dom: Arc<SpaceModel>,
    values: Vec<C64>,
}

impl FunctionalModel {
    pub fn new(level: usize, dom: Arc<SpaceModel>, values: Vec<C64>) -> Result<Self> {
        if level == 0 {
            return Err(Error::BadDimension { what: "functional level zero" });
        }
        if values.len() != level * level * dom.dim() {
            return Err(Error::BadArgument {
                what: alloc::format!(
                    "value count {} does not match level^2 * dim = {}",
                    values.len(),
                    level * level * dom.dim()
                ),
            });
        }
        Ok(FunctionalModel { level, dom, values })
    }

    /// The total trace on `M_n(M_d)` (full-algebra domains).
    pub fn total_trace(level: usize, dom: Arc<SpaceModel>) -> Result<Self> {
        let mut values = Vec::with_capacity(level * level * dom.dim());
        for k in 0..level {
            for l in 0..level {
                for b in dom.basis() {
                    let v = if k == l { b.trace() } else { C64::new(0.0, 0.0) };
                    values.push(v);
                }
            }
        }
        FunctionalModel::new(level, dom, values)
    }

    pub fn zero(level: usize, dom: Arc<SpaceModel>) -> Self {
        let values = vec![C64::new(0.0, 0.0); level * level * dom.dim()];
        FunctionalModel { level, dom, values }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dom(&self) -> &Arc<SpaceModel> {
        &self.dom
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    #[inline]
    pub fn value_at(&self, k: usize, l: usize, r: usize) -> C64 {
        self.values[(k * self.level + l) * self.dom.dim() + r]
    }

    /// Evaluate on a level-`n` element over the domain.
    pub fn eval(&self, u: &BlockElement) -> Result<C64> {
        if u.outer() != self.level {
            return Err(Error::LevelMismatch { expected: self.level, found: u.outer() });
        }
        if u.inner() != self.dom.ambient_dim() {
            return Err(Error::LevelMismatch {
                expected: self.dom.ambient_dim(),
                found: u.inner(),
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..self.level {
            for l in 0..self.level {
                let (coords, residual) = self.dom.coords(&u.block(k, l))?;
                if residual > SPAN_TOL * scalar::fmax(1.0, u.mat().fro_norm()) {
                    return Err(Error::OutsideSpan { residual });
                }
                for (r, c) in coords.iter().enumerate() {
                    acc += c * self.value_at(k, l, r);
                }
            }
        }
        Ok(acc)
    }

    /// Hermitian representer `R` with `F(u) = Tr(R u)` on `M_n(M_d)`;
    /// full-algebra domains only. Errors if the representer is not
    /// self-adjoint within tolerance.
    pub fn representer(&self) -> Result<CMatrix> {
        if !self.dom.is_full_algebra() {
            return Err(Error::UnsupportedDomain);
        }
        let n = self.level;
        let d = self.dom.ambient_dim();
        let dim = n * d;
        // R[j][i] = F(E_{ij}) with E_{ij} = e^{k,l} (x) e^{a,b},
        // i = k d + a, j = l d + b.
        let mut r_mat = CMatrix::zeros(dim, dim);
        for k in 0..n {
            for a in 0..d {
                for l in 0..n {
                    for b in 0..d {
                        let (coords, _res) = self.dom.coords(&CMatrix::elem(d, a, b))?;
                        let mut val = C64::new(0.0, 0.0);
                        for (rr, c) in coords.iter().enumerate() {
                            val += c * self.value_at(k, l, rr);
                        }
                        r_mat.set(l * d + b, k * d + a, val);
                    }
                }
            }
        }
        let dev = r_mat.hermitian_deviation();
        if dev > 1e-8 * scalar::fmax(1.0, r_mat.max_abs()) {
            return Err(Error::NotSelfAdjoint { deviation: dev });
        }
        Ok(r_mat)
    }
}

/// `Theta_F(x)_{k,l} = F(e^{k,l} (x) x)`: the map associated to a
/// functional, exact on the stored basis values.
pub fn theta_of_functional(f: &FunctionalModel) -> MapModel {
    let n = f.level();
    let dim = f.dom().dim();
    let mut coeffs = Vec::with_capacity(dim);
    for r in 0..dim {
        coeffs.push(CMatrix::from_fn(n, n, |k, l| f.value_at(k, l, r)));
    }
    MapModel::new(f.dom().clone(), n, coeffs).expect("functional data is well-formed")
}

/// `Upsilon_phi` as a functional model: exact inverse of
/// [`theta_of_functional`] on the stored basis values.
pub fn upsilon_of_map(phi: &MapModel) -> FunctionalModel {
    let n = phi.cod_level();
    let dim = phi.dom().dim();
    let mut values = Vec::with_capacity(n * n * dim);
    for k in 0..n {
        for l in 0..n {
            for r in 0..dim {
                values.push(phi.coeffs()[r].at(k, l));
            }
        }
    }
    FunctionalModel::new(n, phi.dom().clone(), values).expect("map data is well-formed")
}

/// `Upsilon_phi(u) = sum_{k,l} phi(u_{k,l})_{k,l}` via the double sum.
pub fn upsilon_apply(phi: &MapModel, u: &BlockElement) -> Result<C64> {
    if u.outer() != phi.cod_level() {
        return Err(Error::LevelMismatch { expected: phi.cod_level(), found: u.outer() });
    }
    let n = phi.cod_level();
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        for l in 0..n {
            acc += phi.apply(&u.block(k, l))?.at(k, l);
        }
    }
    Ok(acc)
}

/// The same value through the literal `beta_e phi^{(n)}(u) beta_e*` route;
/// the two must agree within 1e-10 on unit-scale inputs.
pub fn upsilon_beta_route(phi: &MapModel, u: &BlockElement) -> Result<C64> {
    if u.outer() != phi.cod_level() {
        return Err(Error::LevelMismatch { expected: phi.cod_level(), found: u.outer() });
    }
    let amplified = phi.amplify(u)?;
    let beta = beta_vector(phi.cod_level());
    let prod = beta.matmul(amplified.mat())?.matmul(&beta.adjoint())?;
    Ok(prod.at(0, 0))
}

/// Positivity of a functional over `M_n(M_d)` with the induced cone:
/// true iff the Hermitian representer is PSD. Agreement with
/// `cp_check(theta_of_functional(F))` is the content of the order
/// isomorphism and is exercised by the test suites.
pub fn functional_positive_check(f: &FunctionalModel) -> Result<bool> {
    let r = f.representer()?;
    Ok(eig::psd_check(&r.herm_part(), DEFAULT_PSD_TOL)?.psd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seeded;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// `sum_{k,l} e^{k,l} (x) e^{k,l}`: the Choi matrix of the identity.
    fn identity_choi(m: usize) -> BlockElement {
        BlockElement::from_blocks(m, m, |k, l| CMatrix::elem(m, k, l)).unwrap()
    }

    #[test]
    fn theta_apply_examples() {
        // Reconstruction identity.
        let tau = identity_choi(2);
        let mut r = Seeded::new(1);
        let alpha = r.gaussian_matrix(2, 2);
        let out = theta_apply(&tau, &alpha).unwrap();
        assert!(out.sub(&alpha).unwrap().max_abs() < 1e-14);

        // tau = I gives Tr(alpha) I.
        let tau = BlockElement::identity(2, 3);
        let out = theta_apply(&tau, &alpha).unwrap();
        let expect = CMatrix::identity(3).scale(alpha.trace());
        assert!(out.sub(&expect).unwrap().max_abs() < 1e-14);

        // tau = e^{1,1} (x) gamma picks alpha_{1,1} gamma.
        let gamma = r.gaussian_matrix(3, 3);
        let tau = crate::matcore::kron_embed(&CMatrix::elem(2, 0, 0), &gamma).unwrap();
        let out = theta_apply(&tau, &alpha).unwrap();
        assert!(out.sub(&gamma.scale(alpha.at(0, 0))).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn choi_of_identity_and_trace() {
        let id = MapModel::identity(2);
        assert_eq!(choi_of(&id).unwrap(), identity_choi(2));

        let tr = MapModel::trace_map(2, 3);
        assert_eq!(choi_of(&tr).unwrap(), BlockElement::identity(2, 3));
    }

    #[test]
    fn choi_of_transpose_is_swap_with_negative_eigenvalue() {
        let t = MapModel::transpose(2);
        let choi = choi_of(&t).unwrap();
        // blocks phi(e^{k,l}) = e^{l,k}
        for k in 0..2 {
            for l in 0..2 {
                assert_eq!(choi.block(k, l), CMatrix::elem(2, l, k));
            }
        }
        let eigv = eig::herm_eig(choi.mat()).unwrap().values;
        // swap eigenvalues: {-1, 1, 1, 1}
        assert_abs_diff_eq!(eigv[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigv[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigv[3], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn choi_roundtrip_on_random_maps() {
        let mut r = Seeded::new(2);
        for _ in 0..12 {
            let m = 1 + r.index(4);
            let n = 1 + r.index(4);
            let dom = SpaceModel::full(m);
            let coeffs: Vec<CMatrix> = (0..m * m).map(|_| r.gaussian_matrix(n, n)).collect();
            let phi = MapModel::new(dom, n, coeffs).unwrap();
            let choi = choi_of(&phi).unwrap();
            let mut worst: f64 = 0.0;
            for k in 0..m {
                for l in 0..m {
                    let alpha = CMatrix::elem(m, k, l);
                    let d = theta_apply(&choi, &alpha)
                        .unwrap()
                        .sub(&phi.apply(&alpha).unwrap())
                        .unwrap()
                        .max_abs();
                    worst = scalar::fmax(worst, d);
                }
            }
            assert!(worst < 1e-10, "roundtrip error {worst}");
        }
    }

    #[test]
    fn choi_requires_full_domain() {
        let dom = SpaceModel::diagonal(2);
        let phi = MapModel::zero(dom, 2);
        assert!(matches!(phi.choi(), Err(Error::UnsupportedDomain)));
    }

    #[test]
    fn cp_check_examples() {
        assert!(cp_check(&MapModel::identity(2), 1e-9).unwrap().cp);

        let rep = cp_check(&MapModel::transpose(2), 1e-9).unwrap();
        assert!(!rep.cp);
        assert_abs_diff_eq!(rep.min_eig, -1.0, epsilon = 1e-10);

        let mut r = Seeded::new(3);
        let gamma = r.gaussian_matrix(3, 2);
        assert!(cp_check(&MapModel::conjugation(&gamma).unwrap(), 1e-9).unwrap().cp);
    }

    #[test]
    fn kraus_of_identity_choi() {
        let tau = identity_choi(2);
        let cert = kraus_of(&tau, 1e-9).unwrap();
        assert_eq!(cert.gammas.len(), 1);
        assert!(cert.residual <= 1e-10);
        // single gamma proportional to I up to global phase
        let g = &cert.gammas[0];
        let gg = g.adjoint().matmul(g).unwrap();
        assert!(gg.sub(&CMatrix::identity(2)).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn kraus_of_rank_one_corner() {
        let tau = crate::matcore::kron_embed(&CMatrix::elem(2, 0, 0), &CMatrix::elem(2, 0, 0))
            .unwrap();
        let cert = kraus_of(&tau, 1e-9).unwrap();
        assert_eq!(cert.gammas.len(), 1);
        let g = &cert.gammas[0];
        assert_abs_diff_eq!(g.at(0, 0).norm_sqr(), 1.0, epsilon = 1e-12);
        assert!(g.fro_norm() - 1.0 < 1e-12);
        assert!(cert.residual <= 1e-10);
    }

    #[test]
    fn kraus_of_zero_is_empty() {
        let cert = kraus_of(&BlockElement::zeros(2, 2), 1e-9).unwrap();
        assert!(cert.gammas.is_empty());
        assert_eq!(cert.residual, 0.0);
    }

    #[test]
    fn kraus_rejects_non_psd() {
        let tau = choi_of(&MapModel::transpose(2)).unwrap();
        match kraus_of(&tau, 1e-9) {
            Err(Error::ConeViolation { min_eig }) => {
                assert_abs_diff_eq!(min_eig, -1.0, epsilon = 1e-10);
            }
            other => panic!("expected cone violation, got {other:?}"),
        }
    }

    #[test]
    fn kraus_reconstructs_complex_psd_choi() {
        let mut r = Seeded::new(5);
        for _ in 0..10 {
            let m = 1 + r.index(3);
            let n = 1 + r.index(3);
            let tau = BlockElement::new(m, n, r.wishart(m * n, m * n)).unwrap();
            let cert = kraus_of(&tau, 1e-9).unwrap();
            assert!(cert.residual <= 1e-8, "residual {}", cert.residual);
        }
    }

    #[test]
    fn theta_tensor_examples() {
        let mut r = Seeded::new(7);
        let w = BlockElement::new(2, 2, r.gaussian_matrix(4, 4)).unwrap();

        // tau = I_{m x n}: sum_k I_n (x) w_{k,k}
        let tau = BlockElement::identity(2, 3);
        let out = theta_tensor_apply(&tau, &w).unwrap();
        let mut expect = BlockElement::zeros(3, 2);
        for k in 0..2 {
            let term = CMatrix::identity(3).kron(&w.block(k, k));
            expect = expect.add(&BlockElement::new(3, 2, term).unwrap()).unwrap();
        }
        assert!(out.mat().sub(expect.mat()).unwrap().max_abs() < 1e-14);

        // tau = e^{1,1} (x) gamma: gamma (x) w_{1,1}
        let gamma = r.gaussian_matrix(3, 3);
        let tau = crate::matcore::kron_embed(&CMatrix::elem(2, 0, 0), &gamma).unwrap();
        let out = theta_tensor_apply(&tau, &w).unwrap();
        let expect = gamma.kron(&w.block(0, 0));
        assert!(out.mat().sub(&expect).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn theta_tensor_preserves_positivity_via_kraus() {
        let mut r = Seeded::new(11);
        for _ in 0..8 {
            let tau = BlockElement::new(2, 2, r.wishart(4, 4)).unwrap();
            let w = BlockElement::new(2, 2, r.wishart(4, 3)).unwrap();
            let out = theta_tensor_apply(&tau, &w).unwrap();
            let rep = eig::psd_check(&out.mat().herm_part(), 1e-8).unwrap();
            assert!(rep.psd, "min eig {}", rep.min_eig);

            // Kraus-sum oracle: same value through sum gamma_i* w gamma_i.
            let cert = kraus_of(&tau, 1e-10).unwrap();
            let d = w.inner();
            let mut recon = BlockElement::zeros(tau.inner(), d);
            for g in &cert.gammas {
                let amp = g.kron(&CMatrix::identity(d));
                let term = amp.adjoint().matmul(w.mat()).unwrap().matmul(&amp).unwrap();
                recon = recon
                    .add(&BlockElement::new(tau.inner(), d, term).unwrap())
                    .unwrap();
            }
            assert!(out.mat().sub(recon.mat()).unwrap().max_abs() < 1e-8);
        }
    }

    #[test]
    fn trace_pair_examples() {
        let i22 = BlockElement::identity(2, 2);
        assert_eq!(trace_pair(&i22, &i22).unwrap(), c(4.0, 0.0));

        let t = crate::matcore::kron_embed(&CMatrix::elem(2, 0, 1), &CMatrix::elem(2, 0, 1))
            .unwrap();
        assert_eq!(trace_pair(&t, &t).unwrap(), c(1.0, 0.0));

        let mut r = Seeded::new(13);
        for _ in 0..8 {
            let tau = BlockElement::new(2, 2, r.wishart(4, 4)).unwrap();
            let alpha = BlockElement::new(2, 2, r.wishart(4, 4)).unwrap();
            let p = trace_pair(&tau, &alpha).unwrap();
            assert!(p.re >= -1e-10);
            assert!(scalar::abs(p.im) < 1e-10);
        }
    }

    #[test]
    fn trace_pair_matches_plain_trace_product() {
        let mut r = Seeded::new(17);
        let tau = BlockElement::new(2, 3, r.gaussian_matrix(6, 6)).unwrap();
        let alpha = BlockElement::new(2, 3, r.gaussian_matrix(6, 6)).unwrap();
        let via_blocks = trace_pair(&tau, &alpha).unwrap();
        let direct = tau
            .block_transpose()
            .mat()
            .matmul(alpha.mat())
            .unwrap()
            .trace();
        assert!((via_blocks - direct).norm_sqr() < 1e-24);
    }

    #[test]
    fn upsilon_on_elementary_tensors_reads_matrix_entries() {
        // Upsilon_phi(e^{k,l} (x) x) = phi(x)_{k,l}
        let mut r = Seeded::new(19);
        let dom = SpaceModel::full(2);
        let coeffs: Vec<CMatrix> = (0..4).map(|_| r.gaussian_matrix(3, 3)).collect();
        let phi = MapModel::new(dom, 3, coeffs).unwrap();
        let x = r.gaussian_matrix(2, 2);
        let phix = phi.apply(&x).unwrap();
        for k in 0..3 {
            for l in 0..3 {
                let u = crate::matcore::kron_embed(&CMatrix::elem(3, k, l), &x).unwrap();
                let v = upsilon_apply(&phi, &u).unwrap();
                assert!((v - phix.at(k, l)).norm_sqr() < 1e-20);
            }
        }
    }

    #[test]
    fn upsilon_identity_on_identity_is_dimension() {
        let phi = MapModel::identity(3);
        let u = BlockElement::identity(3, 3);
        assert!((upsilon_apply(&phi, &u).unwrap() - c(3.0, 0.0)).norm_sqr() < 1e-24);
    }

    #[test]
    fn upsilon_routes_agree() {
        let mut r = Seeded::new(23);
        for _ in 0..8 {
            let d = 1 + r.index(3);
            let n = 1 + r.index(3);
            let dom = SpaceModel::full(d);
            let coeffs: Vec<CMatrix> = (0..d * d).map(|_| r.gaussian_matrix(n, n)).collect();
            let phi = MapModel::new(dom, n, coeffs).unwrap();
            let u = BlockElement::new(n, d, r.gaussian_matrix(n * d, n * d)).unwrap();
            let a = upsilon_apply(&phi, &u).unwrap();
            let b = upsilon_beta_route(&phi, &u).unwrap();
            assert!((a - b).norm_sqr() < 1e-20, "routes differ: {a} vs {b}");
        }
    }

    #[test]
    fn theta_upsilon_mutually_inverse() {
        let mut r = Seeded::new(29);
        let dom = SpaceModel::full(2);
        let coeffs: Vec<CMatrix> = (0..4).map(|_| r.gaussian_matrix(2, 2)).collect();
        let phi = MapModel::new(dom.clone(), 2, coeffs).unwrap();

        let back = theta_of_functional(&upsilon_of_map(&phi));
        for (a, b) in back.coeffs().iter().zip(phi.coeffs()) {
            assert_eq!(a, b, "Theta(Upsilon(phi)) must equal phi exactly on the basis");
        }

        let values: Vec<C64> = (0..2 * 2 * 4).map(|_| r.complex_normal()).collect();
        let f = FunctionalModel::new(2, dom, values.clone()).unwrap();
        let again = upsilon_of_map(&theta_of_functional(&f));
        assert_eq!(again.values(), &values[..]);
    }

    #[test]
    fn theta_of_total_trace_is_trace_map() {
        let dom = SpaceModel::full(2);
        let f = FunctionalModel::total_trace(3, dom).unwrap();
        let phi = theta_of_functional(&f);
        let expect = MapModel::trace_map(2, 3);
        for (a, b) in phi.coeffs().iter().zip(expect.coeffs()) {
            assert!(a.sub(b).unwrap().max_abs() < 1e-14);
        }
        // and the zero functional gives the zero map
        let z = FunctionalModel::zero(3, SpaceModel::full(2));
        let phi0 = theta_of_functional(&z);
        for cmat in phi0.coeffs() {
            assert_eq!(cmat.max_abs(), 0.0);
        }
    }

    #[test]
    fn functional_positivity_matches_cp_of_theta() {
        let mut r = Seeded::new(31);
        let mut seen_true = 0;
        let mut seen_false = 0;
        for trial in 0..60 {
            let n = 1 + r.index(3);
            let d = 1 + r.index(3);
            let dom = SpaceModel::full(d);
            // Half PSD representers, half indefinite ones.
            let rep = if trial % 2 == 0 {
                r.wishart(n * d, n * d)
            } else {
                r.gue(n * d)
            };
            // values from F(u) = Tr(R u) on e^{k,l} (x) e^{a,b}
            let mut values = Vec::with_capacity(n * n * d * d);
            for k in 0..n {
                for l in 0..n {
                    for a in 0..d {
                        for b in 0..d {
                            // Tr(R (e^{k,l} (x) e^{a,b})) = R[l d + b][k d + a]
                            values.push(rep.at(l * d + b, k * d + a));
                        }
                    }
                }
            }
            let f = FunctionalModel::new(n, dom, values).unwrap();
            let pos = functional_positive_check(&f).unwrap();
            let cp = cp_check(&theta_of_functional(&f), DEFAULT_PSD_TOL).unwrap().cp;
            assert_eq!(pos, cp, "order isomorphism disagreement");
            if pos {
                seen_true += 1;
            } else {
                seen_false += 1;
            }
        }
        assert!(seen_true > 0 && seen_false > 0, "both verdicts must be exercised");
    }

    #[test]
    fn functional_with_indefinite_diagonal_representer() {
        // representer diag(1, ..., 1, -1): both sides negative.
        let n = 2;
        let d = 2;
        let dom = SpaceModel::full(d);
        let rep = CMatrix::from_fn(n * d, n * d, |i, j| {
            if i == j {
                c(if i == n * d - 1 { -1.0 } else { 1.0 }, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let mut values = Vec::new();
        for k in 0..n {
            for l in 0..n {
                for a in 0..d {
                    for b in 0..d {
                        values.push(rep.at(l * d + b, k * d + a));
                    }
                }
            }
        }
        let f = FunctionalModel::new(n, dom, values).unwrap();
        assert!(!functional_positive_check(&f).unwrap());
        assert!(!cp_check(&theta_of_functional(&f), 1e-9).unwrap().cp);
    }

    #[test]
    fn upsilon_of_cp_map_is_positive() {
        let mut r = Seeded::new(37);
        let gamma = r.gaussian_matrix(2, 2);
        let phi = MapModel::conjugation(&gamma).unwrap();
        let f = upsilon_of_map(&phi);
        assert!(functional_positive_check(&f).unwrap());
    }

    #[test]
    fn selfadjoint_flag_follows_map_structure() {
        assert!(MapModel::identity(2).is_selfadjoint());
        assert!(MapModel::transpose(2).is_selfadjoint());
        assert!(MapModel::trace_map(2, 2).is_selfadjoint());

        let mut r = Seeded::new(41);
        let dom = SpaceModel::full(2);
        let coeffs: Vec<CMatrix> = (0..4).map(|_| r.gaussian_matrix(2, 2)).collect();
        let phi = MapModel::new(dom, 2, coeffs).unwrap();
        assert!(!phi.is_selfadjoint());
    }

    #[test]
    fn map_apply_is_linear() {
        let mut r = Seeded::new(43);
        let dom = SpaceModel::full(3);
        let coeffs: Vec<CMatrix> = (0..9).map(|_| r.gaussian_matrix(2, 2)).collect();
        let phi = MapModel::new(dom, 2, coeffs).unwrap();
        let x = r.gaussian_matrix(3, 3);
        let y = r.gaussian_matrix(3, 3);
        let a = c(0.3, -1.2);
        let b = c(-0.7, 0.4);
        let lhs = phi.apply(&x.scale(a).add(&y.scale(b)).unwrap()).unwrap();
        let rhs = phi.apply(&x).unwrap().scale(a).add(&phi.apply(&y).unwrap().scale(b)).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-10);
    }

    use crate::scalar;
}
