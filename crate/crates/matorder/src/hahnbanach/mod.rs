//! Finite-dimensional extension and separation solvers.
//!
//! Both solvers run the same architecture: a dense-simplex master problem
//! over the real coordinates of a self-adjoint map, plus an eigenvalue
//! violation oracle that turns spectral constraints into linear cuts at the
//! current top (or bottom) eigenvector. Rows only accumulate. Search
//! thresholds sit one order below validity thresholds so boundary noise
//! cannot flip a verdict, and every result ships as a certificate whose
//! margins can be recomputed from scratch under a fresh seed.
//!
//! * `bonsall_scalar` — the scalar sandwich problem (`-q <= g` on a cone,
//!   `g <= p` on sampled support rows) as a plain feasibility LP.
//! * `matrix_bonsall_extend` — given self-adjoint `phi` dominated by a
//!   matrix gauge on the cone, find self-adjoint `psi` with
//!   `phi <= psi` on cone elements and `psi^{(m)}(z) <= rho_m(z) I` for
//!   Hermitian `z`. On full algebras the cone family is handled by an
//!   exact Choi branch; the gauge family by randomized eigen-ascent.
//! * `separate_point` — given a matrix convex set `K` containing `0` and a
//!   self-adjoint `v0` outside it, find self-adjoint `phi` with
//!   `phi^{(m)}(w) <= I` on `K` while `phi(v0)` exceeds `I`.

pub mod simplex;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::choiduality::MapModel;
use crate::error::{Error, Result};
use crate::matcore::{eig, BlockElement, CMatrix, C64};
use crate::ordspace::{
    gauge_eval, matrix_convex_sample, sample_cone_element, sample_hermitian_span, GaugeSpec,
    MatrixConvexModel, SpaceModel,
};
use crate::rng::{fnv1a64, Seeded};
use crate::scalar;

pub use simplex::{lp_feasible, lp_solve, LpInstance, LpOutcome, LpRow};

/// Oracle threshold: a constraint is treated as violated above this.
pub const VIOLATION_TOL: f64 = 1e-7;
/// Certificate margins within this bound count as valid.
pub const VALIDITY_TOL: f64 = 1e-6;
/// A separation certificate needs a point margin strictly above this.
pub const SEPARATION_MARGIN: f64 = 1e-4;
/// Exact Choi branch cuts until the minimal eigenvalue clears this.
pub const EXACT_CHOI_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Highest amplification level checked; defaults to `max(2, n, d)`.
    pub m_max: Option<usize>,
    /// Cutting-plane rounds before giving up.
    pub budget: usize,
    /// Random restarts per level per round in the violation search.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { m_max: None, budget: 200, restarts: 64, seed: 0 }
    }
}

impl SolverOptions {
    pub fn seeded(seed: u64) -> Self {
        SolverOptions { seed, ..SolverOptions::default() }
    }

    fn resolve_m_max(&self, n: usize, d: usize) -> usize {
        self.m_max.unwrap_or_else(|| 2.max(n).max(d))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtendStatus {
    Valid,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SepStatus {
    Valid,
    NotSeparated,
}

#[derive(Clone, Debug)]
pub struct TranscriptEntry {
    /// "cone" | "gauge" | "member" | "point" | "choi".
    pub kind: &'static str,
    pub level: usize,
    pub digest: u64,
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct ExtensionCertificate {
    pub psi: MapModel,
    pub levels_checked: Vec<usize>,
    /// min eigenvalue over the checked positivity tests of `psi - phi`.
    pub cp_margin: f64,
    /// max over checked Hermitian `z` of `lambda_max(psi(z)) - rho(z)`.
    pub gauge_margin: f64,
    /// `lambda_min` of the Choi matrix of `psi - phi` (full algebras).
    pub exact_choi_margin: Option<f64>,
    pub transcript: Vec<TranscriptEntry>,
    pub seed: u64,
    pub rounds_used: usize,
    pub status: ExtendStatus,
}

impl ExtensionCertificate {
    pub fn margins_valid(&self) -> bool {
        self.cp_margin >= -VALIDITY_TOL
            && self.gauge_margin <= VALIDITY_TOL
            && self.exact_choi_margin.map_or(true, |m| m >= -VALIDITY_TOL)
    }
}

#[derive(Clone, Debug)]
pub struct SeparationCertificate {
    pub phi: MapModel,
    /// max over checked members `w` of `lambda_max(phi^{(m)}(w) - I)`.
    pub set_margin: f64,
    /// `lambda_max(phi^{(p)}(v0) - I)`.
    pub point_margin: f64,
    pub levels_checked: Vec<usize>,
    pub transcript: Vec<TranscriptEntry>,
    pub seed: u64,
    pub rounds_used: usize,
    pub status: SepStatus,
}

impl SeparationCertificate {
    pub fn margins_valid(&self) -> bool {
        self.set_margin <= VALIDITY_TOL && self.point_margin > SEPARATION_MARGIN
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub valid: bool,
    pub cp_margin: f64,
    pub gauge_margin: f64,
    pub exact_choi_margin: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct VerifySeparationReport {
    pub valid: bool,
    pub set_margin: f64,
    pub point_margin: f64,
}

pub fn digest_block(b: &BlockElement) -> u64 {
    let mut words = Vec::with_capacity(2 + 2 * b.mat().entries().len());
    words.push(b.outer() as u64);
    words.push(b.inner() as u64);
    for z in b.mat().entries() {
        words.push(z.re.to_bits());
        words.push(z.im.to_bits());
    }
    fnv1a64(&words)
}

/// Scalar sandwich feasibility: find a linear functional `g` on `R^e_dim`
/// with `g(x_i) <= p_i` on the support rows and `-q_j <= g(u_j)` on the
/// cone generators.
pub fn bonsall_scalar(
    e_dim: usize,
    cone_generators: &[Vec<f64>],
    p_rows: &[(Vec<f64>, f64)],
    q_values: &[f64],
) -> Result<Vec<f64>> {
    if q_values.len() != cone_generators.len() {
        return Err(Error::BadArgument {
            what: alloc::format!("cone generator / q value count mismatch"),
        });
    }
    let mut rows = Vec::with_capacity(p_rows.len() + cone_generators.len());
    for (x, p) in p_rows {
        if x.len() != e_dim {
            return Err(Error::BadArgument { what: alloc::format!("support row dimension") });
        }
        rows.push(LpRow::new(x.iter().map(|c| -c).collect(), -p));
    }
    for (u, q) in cone_generators.iter().zip(q_values) {
        if u.len() != e_dim {
            return Err(Error::BadArgument { what: alloc::format!("generator dimension") });
        }
        rows.push(LpRow::new(u.clone(), -q));
    }
    match lp_feasible(&LpInstance::feasibility(e_dim, rows))? {
        LpOutcome::Feasible { point, .. } => Ok(point),
        LpOutcome::Infeasible { row, violation } => Err(Error::LpInfeasible { row, violation }),
    }
}

/// Real coordinates for self-adjoint maps `X -> M_n`: one real number per
/// (Hermitian domain basis element, Hermitian codomain basis element).
struct MapVars {
    space: Arc<SpaceModel>,
    n: usize,
    cod_herm: Vec<CMatrix>,
}

impl MapVars {
    fn new(space: Arc<SpaceModel>, n: usize) -> Result<Self> {
        if !space.star_closed() || space.hermitian_basis().is_empty() {
            return Err(Error::BadArgument {
                what: alloc::format!("solver requires a star-closed space"),
            });
        }
        let mut cod_herm = Vec::with_capacity(n * n);
        for k in 0..n {
            cod_herm.push(CMatrix::elem(n, k, k));
        }
        for k in 0..n {
            for l in (k + 1)..n {
                let sym = CMatrix::elem(n, k, l).add(&CMatrix::elem(n, l, k))?;
                let asym = CMatrix::elem(n, k, l)
                    .sub(&CMatrix::elem(n, l, k))?
                    .scale(C64::new(0.0, 1.0));
                cod_herm.push(sym);
                cod_herm.push(asym);
            }
        }
        Ok(MapVars { space, n, cod_herm })
    }

    fn count(&self) -> usize {
        self.space.hermitian_basis().len() * self.n * self.n
    }

    fn build_map(&self, x: &[f64]) -> Result<MapModel> {
        let r = self.space.hermitian_basis().len();
        let nn = self.n * self.n;
        let mut herm_images = Vec::with_capacity(r);
        for s in 0..r {
            let mut img = CMatrix::zeros(self.n, self.n);
            for (t, h) in self.cod_herm.iter().enumerate() {
                let w = x[s * nn + t];
                if w != 0.0 {
                    img = img.add(&h.scale_re(w))?;
                }
            }
            herm_images.push(img);
        }
        let mut coeffs = Vec::with_capacity(self.space.dim());
        for row in self.space.basis_in_hermitian() {
            let mut img = CMatrix::zeros(self.n, self.n);
            for (s, c) in row.iter().enumerate() {
                if c.norm_sqr() != 0.0 {
                    img = img.add(&herm_images[s].scale(*c))?;
                }
            }
            coeffs.push(img);
        }
        MapModel::new(self.space.clone(), self.n, coeffs)
    }

    /// Row coefficients of `x -> Re xi* (map_x)^{(m)}(w) xi` per variable.
    fn cut_coefficients(&self, w: &BlockElement, xi: &[C64]) -> Result<Vec<f64>> {
        let m = w.outer();
        let n = self.n;
        let nn = n * n;
        let r = self.space.hermitian_basis().len();
        // Hermitian-basis coordinates of every block.
        let mut cs = vec![vec![C64::new(0.0, 0.0); m * m]; r];
        for k in 0..m {
            for l in 0..m {
                let coords = self.space.herm_coords(&w.block(k, l))?;
                for (s, c) in coords.iter().enumerate() {
                    cs[s][k * m + l] = *c;
                }
            }
        }
        // Q_t[k][l] = xi_k* H_t xi_l.
        let mut q = vec![vec![C64::new(0.0, 0.0); m * m]; nn];
        for (t, h) in self.cod_herm.iter().enumerate() {
            for k in 0..m {
                for l in 0..m {
                    let mut acc = C64::new(0.0, 0.0);
                    for a in 0..n {
                        for b in 0..n {
                            acc += xi[k * n + a].conj() * h.at(a, b) * xi[l * n + b];
                        }
                    }
                    q[t][k * m + l] = acc;
                }
            }
        }
        let mut out = vec![0.0; r * nn];
        for s in 0..r {
            for t in 0..nn {
                let mut acc = C64::new(0.0, 0.0);
                for idx in 0..m * m {
                    acc += cs[s][idx] * q[t][idx];
                }
                // Imaginary parts cancel in the assembled Hermitian form.
                out[s * nn + t] = acc.re;
            }
        }
        Ok(out)
    }
}

/// `Re xi* (map^{(m)}(w)) xi` for a fixed map.
fn quadratic_form(map: &MapModel, w: &BlockElement, xi: &[C64]) -> Result<f64> {
    let amp = map.amplify(w)?;
    let dim = amp.mat().rows();
    debug_assert_eq!(xi.len(), dim);
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..dim {
        for j in 0..dim {
            acc += xi[i].conj() * amp.mat().at(i, j) * xi[j];
        }
    }
    Ok(acc.re)
}

/// Hermitian pullback `P` in `M_m(X)` with `<P, u> = xi* map^{(m)}(u) xi`.
fn pullback(space: &SpaceModel, map: &MapModel, level: usize, xi: &[C64]) -> Result<BlockElement> {
    let d = space.ambient_dim();
    let n = map.cod_level();
    let ortho = space.orthonormal_basis();
    let mut images = Vec::with_capacity(ortho.len());
    for o in ortho {
        images.push(map.apply(o)?);
    }
    let out = BlockElement::from_blocks(level, d, |k, l| {
        let mut acc = CMatrix::zeros(d, d);
        for (j, img) in images.iter().enumerate() {
            let mut w = C64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    w += xi[k * n + a].conj() * img.at(a, b) * xi[l * n + b];
                }
            }
            acc = acc.add(&ortho[j].scale(w.conj())).expect("same shape");
        }
        acc
    })?;
    Ok(out.herm_part())
}

/// Spectral transform of a Hermitian block element, projected back onto the
/// span blockwise and normalized. `None` when the result vanishes.
fn spectral_part_in_span(
    space: &SpaceModel,
    p: &BlockElement,
    f: impl FnMut(f64) -> f64,
) -> Result<Option<BlockElement>> {
    let e = eig::herm_eig(&p.mat().herm_part())?;
    let raw = BlockElement::new(p.outer(), p.inner(), e.rebuild(f))?;
    let projected = BlockElement::from_blocks(p.outer(), p.inner(), |k, l| {
        space
            .project(&raw.block(k, l))
            .map(|(m, _)| m)
            .unwrap_or_else(|_| CMatrix::zeros(p.inner(), p.inner()))
    })?
    .herm_part();
    let norm = projected.op_norm();
    if norm <= 1e-12 {
        return Ok(None);
    }
    Ok(Some(projected.scale_re(1.0 / norm)))
}

fn bottom_eigpair(m: &CMatrix) -> Result<(f64, Vec<C64>)> {
    let e = eig::herm_eig(&m.herm_part())?;
    Ok((e.min(), e.vectors.column(0)))
}

fn top_eigpair(m: &CMatrix) -> Result<(f64, Vec<C64>)> {
    let e = eig::herm_eig(&m.herm_part())?;
    let last = e.values.len() - 1;
    Ok((e.max(), e.vectors.column(last)))
}

#[derive(Clone, Debug)]
struct FoundCut {
    kind: &'static str,
    elem: BlockElement,
    xi: Vec<C64>,
    /// Positive amount by which the constraint fails at the current iterate.
    violation: f64,
}

/// Exact family-(a) cuts from the Choi matrix of `psi - phi` on a full
/// algebra: every eigendirection below `-cut_tol` is converted to a
/// rank-one cone element at level `rank <= min(d, n)`.
fn choi_cuts(diff: &MapModel, cut_tol: f64) -> Result<Vec<FoundCut>> {
    let choi = diff.choi()?;
    let d = diff.dom().ambient_dim();
    let n = diff.cod_level();
    let e = eig::herm_eig(&choi.mat().herm_part())?;
    let mut cuts = Vec::new();
    for (idx, &lam) in e.values.iter().enumerate() {
        if lam >= -cut_tol {
            break;
        }
        let eta = e.vectors.column(idx);
        let h = CMatrix::from_fn(d, n, |a, j| eta[a * n + j]);
        let triplets = eig::svd_triplets(&h, 1e-12);
        if triplets.is_empty() {
            continue;
        }
        let rank = triplets.len();
        let mut zeta = vec![C64::new(0.0, 0.0); rank * d];
        let mut xi = vec![C64::new(0.0, 0.0); rank * n];
        for (k, (sigma, p, qv)) in triplets.iter().enumerate() {
            for a in 0..d {
                zeta[k * d + a] = p[a].conj().scale(*sigma);
            }
            for j in 0..n {
                xi[k * n + j] = qv[j].conj();
            }
        }
        // u = zeta zeta* is a rank-one PSD element of unit norm (eta is a
        // unit eigenvector, so |zeta|^2 = 1).
        let zeta_mat = CMatrix::new(rank * d, 1, zeta)?;
        let u = BlockElement::new(rank, d, zeta_mat.matmul(&zeta_mat.adjoint())?)?;
        let xi_norm = scalar::sqrt(xi.iter().map(|z| z.norm_sqr()).sum());
        let xi: Vec<C64> = xi.iter().map(|z| z.scale(1.0 / xi_norm)).collect();
        cuts.push(FoundCut {
            kind: "cone",
            elem: u,
            xi,
            violation: -lam / (xi_norm * xi_norm),
        });
    }
    Ok(cuts)
}

/// Search for cone elements `u` with `lambda_min((psi-phi)^{(m)}(u))` most
/// negative: random starts refined by linearized eigen-ascent.
fn search_cone_violation(
    space: &SpaceModel,
    diff: &MapModel,
    level: usize,
    restarts: usize,
    rng: &mut Seeded,
) -> Result<Option<FoundCut>> {
    let mut best: Option<FoundCut> = None;
    for _ in 0..restarts {
        let Some(u0) = sample_cone_element(space, level, rng)? else {
            return Ok(best);
        };
        let norm = u0.op_norm();
        if norm <= 1e-14 {
            continue;
        }
        let mut u = u0.scale_re(1.0 / norm);
        for _iter in 0..6 {
            let amp = diff.amplify(&u)?;
            let (lam, xi) = bottom_eigpair(amp.mat())?;
            let better = best.as_ref().map_or(true, |b| -lam > b.violation);
            if better && lam < 0.0 {
                best = Some(FoundCut {
                    kind: "cone",
                    elem: u.clone(),
                    xi: xi.clone(),
                    violation: -lam,
                });
            }
            let p = pullback(space, diff, level, &xi)?;
            // Most violating next iterate: maximize <-P, u> over the cone
            // unit ball, approximately the negative spectral part of P.
            match spectral_part_in_span(space, &p, |l| scalar::fmax(-l, 0.0))? {
                Some(next) => {
                    let rep = space.cone_member(&next, 1e-7);
                    if !rep.member {
                        break;
                    }
                    if next.sub(&u)?.op_norm() < 1e-12 {
                        u = next;
                        break;
                    }
                    u = next;
                }
                None => break,
            }
        }
        let amp = diff.amplify(&u)?;
        let (lam, xi) = bottom_eigpair(amp.mat())?;
        if lam < 0.0 && best.as_ref().map_or(true, |b| -lam > b.violation) {
            best = Some(FoundCut { kind: "cone", elem: u, xi, violation: -lam });
        }
    }
    Ok(best)
}

/// Search for Hermitian `z` maximizing `lambda_max(psi^{(m)}(z)) - rho(z)`.
fn search_gauge_violation(
    space: &SpaceModel,
    psi: &MapModel,
    gauge: &GaugeSpec,
    level: usize,
    restarts: usize,
    rng: &mut Seeded,
) -> Result<Option<(FoundCut, f64)>> {
    let mut best: Option<(FoundCut, f64)> = None;
    let consider = |z: &BlockElement, psi: &MapModel, best: &mut Option<(FoundCut, f64)>| -> Result<Vec<C64>> {
        let amp = psi.amplify(z)?;
        let (lam, xi) = top_eigpair(amp.mat())?;
        let rho = gauge_eval(gauge, z);
        let excess = lam - rho;
        if best.as_ref().map_or(true, |(b, _)| excess > b.violation) {
            *best = Some((
                FoundCut {
                    kind: "gauge",
                    elem: z.clone(),
                    xi: xi.clone(),
                    violation: excess,
                },
                rho,
            ));
        }
        Ok(xi)
    };
    for _ in 0..restarts {
        let mut z = sample_hermitian_span(space, level, rng)?;
        for _iter in 0..6 {
            let xi = consider(&z, psi, &mut best)?;
            let p = pullback(space, psi, level, &xi)?;
            // maximize <P, z> over the Hermitian unit ball: the sign part.
            match spectral_part_in_span(space, &p, |l| {
                if l > 1e-12 {
                    1.0
                } else if l < -1e-12 {
                    -1.0
                } else {
                    0.0
                }
            })? {
                Some(next) => {
                    if next.sub(&z)?.op_norm() < 1e-12 {
                        z = next;
                        break;
                    }
                    z = next;
                }
                None => break,
            }
        }
        consider(&z, psi, &mut best)?;
    }
    // The violation is signed (negative means satisfied with slack); keep
    // the extremal record either way for margin reporting.
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub ok: bool,
    pub worst_level: usize,
    pub worst_excess: f64,
    pub witness: Option<BlockElement>,
}

/// Check `phi^{(m)}(w) <= rho_m(w) I` on sampled cone elements at levels up
/// to `m_max`.
pub fn verify_hypothesis(
    space: &SpaceModel,
    phi: &MapModel,
    gauge: &GaugeSpec,
    m_max: usize,
    samples_per_level: usize,
    seed: u64,
) -> Result<HypothesisReport> {
    let mut rng = Seeded::derive(seed, &[0x6879_706f]);
    let mut report = HypothesisReport {
        ok: true,
        worst_level: 0,
        worst_excess: f64::NEG_INFINITY,
        witness: None,
    };
    for level in 1..=m_max {
        for _ in 0..samples_per_level {
            let Some(w0) = sample_cone_element(space, level, &mut rng)? else {
                continue;
            };
            let norm = w0.op_norm();
            if norm <= 1e-14 {
                continue;
            }
            let w = w0.scale_re(1.0 / norm);
            let amp = phi.amplify(&w)?;
            let (lam, _xi) = top_eigpair(amp.mat())?;
            let excess = lam - gauge_eval(gauge, &w);
            if excess > report.worst_excess {
                report.worst_excess = excess;
                report.worst_level = level;
                report.witness = Some(w.clone());
            }
        }
    }
    report.ok = report.worst_excess <= VIOLATION_TOL;
    Ok(report)
}

/// Margin pass shared by the solver finalization and `verify_extension`:
/// recomputes all certificate margins on freshly sampled elements.
#[allow(clippy::type_complexity)]
fn extension_margins(
    space: &SpaceModel,
    phi: &MapModel,
    psi: &MapModel,
    gauge: &GaugeSpec,
    m_max: usize,
    restarts: usize,
    seed: u64,
) -> Result<(f64, f64, Option<f64>, Vec<TranscriptEntry>)> {
    let diff = psi.sub(phi)?;
    let mut transcript = Vec::new();
    let mut cp_margin = f64::INFINITY;
    let mut gauge_margin = f64::NEG_INFINITY;

    let exact = if space.is_full_algebra() {
        let choi = diff.choi()?;
        let min_eig = eig::herm_eig(&choi.mat().herm_part())?.min();
        transcript.push(TranscriptEntry {
            kind: "choi",
            level: space.ambient_dim(),
            digest: digest_block(choi),
            margin: min_eig,
        });
        Some(min_eig)
    } else {
        None
    };

    let mut rng = Seeded::derive(seed, &[0x6d61_7267]);
    for level in 1..=m_max {
        for _ in 0..16 {
            if let Some(u0) = sample_cone_element(space, level, &mut rng)? {
                let norm = u0.op_norm();
                if norm <= 1e-14 {
                    continue;
                }
                let u = u0.scale_re(1.0 / norm);
                let lam = eig::herm_eig(&diff.amplify(&u)?.mat().herm_part())?.min();
                cp_margin = scalar::fmin(cp_margin, lam);
                transcript.push(TranscriptEntry {
                    kind: "cone",
                    level,
                    digest: digest_block(&u),
                    margin: lam,
                });
            }
        }
        if let Some(cut) = search_cone_violation(space, &diff, level, restarts / 4 + 1, &mut rng)? {
            cp_margin = scalar::fmin(cp_margin, -cut.violation);
            transcript.push(TranscriptEntry {
                kind: "cone",
                level,
                digest: digest_block(&cut.elem),
                margin: -cut.violation,
            });
        }
        for _ in 0..16 {
            let z = sample_hermitian_span(space, level, &mut rng)?;
            let lam = eig::herm_eig(&psi.amplify(&z)?.mat().herm_part())?.max();
            let excess = lam - gauge_eval(gauge, &z);
            gauge_margin = scalar::fmax(gauge_margin, excess);
            transcript.push(TranscriptEntry {
                kind: "gauge",
                level,
                digest: digest_block(&z),
                margin: excess,
            });
        }
        if let Some((cut, _rho)) =
            search_gauge_violation(space, psi, gauge, level, restarts / 4 + 1, &mut rng)?
        {
            gauge_margin = scalar::fmax(gauge_margin, cut.violation);
            transcript.push(TranscriptEntry {
                kind: "gauge",
                level,
                digest: digest_block(&cut.elem),
                margin: cut.violation,
            });
        }
    }
    if cp_margin == f64::INFINITY {
        cp_margin = 0.0;
    }
    if gauge_margin == f64::NEG_INFINITY {
        gauge_margin = 0.0;
    }
    Ok((cp_margin, gauge_margin, exact, transcript))
}

/// Cutting-plane solver for the matrix sandwich extension.
pub fn matrix_bonsall_extend(
    space: &Arc<SpaceModel>,
    phi: &MapModel,
    gauge: &GaugeSpec,
    opts: &SolverOptions,
) -> Result<ExtensionCertificate> {
    if phi.dom().ambient_dim() != space.ambient_dim() || phi.dom().dim() != space.dim() {
        return Err(Error::ShapeMismatch {
            expected: (space.ambient_dim(), space.dim()),
            found: (phi.dom().ambient_dim(), phi.dom().dim()),
        });
    }
    if !phi.is_selfadjoint() {
        return Err(Error::NotSelfAdjoint { deviation: f64::NAN });
    }
    let n = phi.cod_level();
    let d = space.ambient_dim();
    let m_max = opts.resolve_m_max(n, d);
    let levels: Vec<usize> = (1..=m_max).collect();

    let hyp = verify_hypothesis(space, phi, gauge, m_max, 48, opts.seed ^ 0x9e37)?;
    if !hyp.ok {
        return Err(Error::HypothesisViolated {
            level: hyp.worst_level,
            excess: hyp.worst_excess,
        });
    }

    let vars = MapVars::new(space.clone(), n)?;
    let nvars = vars.count() + 1; // trailing margin variable sigma
    let sigma = nvars - 1;

    let mut rng = Seeded::derive(opts.seed, &[0x6578_7464]);
    let mut rows: Vec<LpRow> = Vec::new();
    // sigma <= 1 cap.
    let mut cap = vec![0.0; nvars];
    cap[sigma] = -1.0;
    rows.push(LpRow::new(cap, -1.0));

    let add_cut = |rows: &mut Vec<LpRow>, cut: &FoundCut, rho: f64| -> Result<()> {
        let coef = vars.cut_coefficients(&cut.elem, &cut.xi)?;
        let mut row = vec![0.0; nvars];
        match cut.kind {
            "cone" => {
                // xi* psi(u) xi - sigma >= xi* phi(u) xi
                row[..coef.len()].copy_from_slice(&coef);
                row[sigma] = -1.0;
                let rhs = quadratic_form(phi, &cut.elem, &cut.xi)?;
                rows.push(LpRow::new(row, rhs));
            }
            _ => {
                // gauge: xi* psi(z) xi + sigma <= rho(z)
                for (j, c) in coef.iter().enumerate() {
                    row[j] = -c;
                }
                row[sigma] = -1.0;
                rows.push(LpRow::new(row, -rho));
            }
        }
        Ok(())
    };

    // Oracle for a candidate psi. Returns found cuts above the thresholds.
    let oracle = |psi: &MapModel, rng: &mut Seeded| -> Result<Vec<(FoundCut, f64)>> {
        let diff = psi.sub(phi)?;
        let mut found = Vec::new();
        if space.is_full_algebra() {
            for cut in choi_cuts(&diff, EXACT_CHOI_TOL)? {
                found.push((cut, 0.0));
            }
        } else {
            for &level in &levels {
                if let Some(cut) =
                    search_cone_violation(space, &diff, level, opts.restarts, rng)?
                {
                    if cut.violation > VIOLATION_TOL {
                        found.push((cut, 0.0));
                    }
                }
            }
        }
        for &level in &levels {
            if let Some((cut, rho)) =
                search_gauge_violation(space, psi, gauge, level, opts.restarts, rng)?
            {
                if cut.violation > VIOLATION_TOL {
                    found.push((cut, rho));
                }
            }
        }
        found.sort_by(|a, b| {
            b.0.violation
                .partial_cmp(&a.0.violation)
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        found.truncate(12);
        Ok(found)
    };

    let finalize = |psi: MapModel, rounds_used: usize| -> Result<ExtensionCertificate> {
        let (cp_margin, gauge_margin, exact, transcript) = extension_margins(
            space,
            phi,
            &psi,
            gauge,
            m_max,
            opts.restarts,
            opts.seed ^ 0x66696e,
        )?;
        let mut cert = ExtensionCertificate {
            psi,
            levels_checked: levels.clone(),
            cp_margin,
            gauge_margin,
            exact_choi_margin: exact,
            transcript,
            seed: opts.seed,
            rounds_used,
            status: ExtendStatus::BudgetExceeded,
        };
        if cert.margins_valid() {
            cert.status = ExtendStatus::Valid;
        }
        Ok(cert)
    };

    // Warm start: psi = phi certifies immediately whenever phi itself is
    // already dominated (phi = 0 and CP contractions land here), with an
    // exactly zero cone margin.
    let warm = oracle(phi, &mut rng)?;
    if warm.is_empty() {
        return finalize(phi.clone(), 0);
    }
    for (cut, rho) in &warm {
        add_cut(&mut rows, cut, *rho)?;
    }

    let mut objective = vec![0.0; nvars];
    objective[sigma] = 1.0;
    let mut last_psi = phi.clone();
    for round in 1..=opts.budget {
        let inst = LpInstance::maximize(nvars, rows.clone(), objective.clone());
        let point = match lp_solve(&inst)? {
            LpOutcome::Feasible { point, .. } => point,
            LpOutcome::Infeasible { row, violation } => {
                return Err(Error::LpInfeasible { row, violation });
            }
        };
        let psi = vars.build_map(&point[..vars.count()])?;
        let found = oracle(&psi, &mut rng)?;
        last_psi = psi;
        if found.is_empty() {
            return finalize(last_psi, round);
        }
        for (cut, rho) in &found {
            add_cut(&mut rows, cut, *rho)?;
        }
    }
    finalize(last_psi, opts.budget)
}

/// Fresh-sample re-verification of an extension certificate. For full
/// algebras the Choi test on `psi - phi` is exact rather than sampled.
pub fn verify_extension(
    cert: &ExtensionCertificate,
    space: &Arc<SpaceModel>,
    phi: &MapModel,
    gauge: &GaugeSpec,
    fresh_seed: u64,
) -> Result<VerifyReport> {
    let m_max = cert.levels_checked.iter().copied().max().unwrap_or(1);
    let (cp_margin, gauge_margin, exact, _transcript) =
        extension_margins(space, phi, &cert.psi, gauge, m_max, 32, fresh_seed)?;
    Ok(VerifyReport {
        valid: cp_margin >= -VALIDITY_TOL
            && gauge_margin <= VALIDITY_TOL
            && exact.map_or(true, |m| m >= -VALIDITY_TOL),
        cp_margin,
        gauge_margin,
        exact_choi_margin: exact,
    })
}

/// Margins for a separation candidate on fresh samples.
fn separation_margins(
    k: &MatrixConvexModel,
    phi: &MapModel,
    v0: &BlockElement,
    m_max: usize,
    restarts: usize,
    seed: u64,
) -> Result<(f64, f64, Vec<TranscriptEntry>)> {
    let mut transcript = Vec::new();
    let mut set_margin = f64::NEG_INFINITY;
    let mut rng = Seeded::derive(seed, &[0x7365_706d]);
    for level in 1..=m_max {
        let samples = matrix_convex_sample(k, level, 24, rng.next_u64())?;
        for w in samples {
            let lam = eig::herm_eig(&phi.amplify(&w)?.mat().herm_part())?.max();
            let margin = lam - 1.0;
            set_margin = scalar::fmax(set_margin, margin);
            transcript.push(TranscriptEntry {
                kind: "member",
                level,
                digest: digest_block(&w),
                margin,
            });
        }
        if matches!(k.body, crate::ordspace::ConvexBody::UnitBallPositive) {
            // Eigen-ascent over the unit-ball positive body.
            if let Some(w) = ascend_unit_ball(k, phi, level, restarts / 4 + 1, &mut rng)? {
                let lam = eig::herm_eig(&phi.amplify(&w)?.mat().herm_part())?.max();
                let margin = lam - 1.0;
                set_margin = scalar::fmax(set_margin, margin);
                transcript.push(TranscriptEntry {
                    kind: "member",
                    level,
                    digest: digest_block(&w),
                    margin,
                });
            }
        }
    }
    if set_margin == f64::NEG_INFINITY {
        set_margin = -1.0;
    }
    let point_margin = eig::herm_eig(&phi.amplify(v0)?.mat().herm_part())?.max() - 1.0;
    transcript.push(TranscriptEntry {
        kind: "point",
        level: v0.outer(),
        digest: digest_block(v0),
        margin: point_margin,
    });
    Ok((set_margin, point_margin, transcript))
}

/// Ascent for `lambda_max(phi^{(m)}(w))` over PSD contractions in the span:
/// iterate toward the positive spectral projector of the pullback.
fn ascend_unit_ball(
    k: &MatrixConvexModel,
    phi: &MapModel,
    level: usize,
    restarts: usize,
    rng: &mut Seeded,
) -> Result<Option<BlockElement>> {
    let space = &k.space;
    let mut best: Option<(f64, BlockElement)> = None;
    for _ in 0..restarts {
        let mut w = match crate::ordspace::sample_unit_ball_positive(space, level, rng) {
            Ok(w) => w,
            Err(_) => return Ok(best.map(|(_, w)| w)),
        };
        for _iter in 0..6 {
            let (lam, xi) = top_eigpair(phi.amplify(&w)?.mat())?;
            if best.as_ref().map_or(true, |(b, _)| lam > *b) {
                best = Some((lam, w.clone()));
            }
            let p = pullback(space, phi, level, &xi)?;
            match spectral_part_in_span(space, &p, |l| if l > 1e-12 { 1.0 } else { 0.0 })? {
                Some(next) => {
                    // Keep only genuine members as candidates.
                    if k.contains(&next, 1e-7) != Some(true) {
                        break;
                    }
                    if next.sub(&w)?.op_norm() < 1e-12 {
                        w = next;
                        break;
                    }
                    w = next;
                }
                None => break,
            }
        }
        let (lam, _xi) = top_eigpair(phi.amplify(&w)?.mat())?;
        if best.as_ref().map_or(true, |(b, _)| lam > *b) {
            best = Some((lam, w));
        }
    }
    Ok(best.map(|(_, w)| w))
}

/// Cutting-plane separation of a self-adjoint point from a matrix convex
/// set containing `0`, by a self-adjoint map into `M_n`.
pub fn separate_point(
    k: &MatrixConvexModel,
    v0: &BlockElement,
    n: usize,
    opts: &SolverOptions,
) -> Result<SeparationCertificate> {
    let space = &k.space;
    if v0.inner() != space.ambient_dim() {
        return Err(Error::LevelMismatch {
            expected: space.ambient_dim(),
            found: v0.inner(),
        });
    }
    if v0.hermitian_deviation() > 1e-8 * scalar::fmax(1.0, v0.op_norm()) {
        return Err(Error::NotHermitian { deviation: v0.hermitian_deviation() });
    }
    if !k.contains_zero_level_one(1e-9) {
        return Err(Error::BadArgument {
            what: alloc::format!("separation requires 0 in K at level 1"),
        });
    }
    let d = space.ambient_dim();
    let m_max = opts.resolve_m_max(n, d);
    let levels: Vec<usize> = (1..=m_max).collect();

    let finalize = |phi: MapModel, rounds_used: usize| -> Result<SeparationCertificate> {
        let (set_margin, point_margin, transcript) =
            separation_margins(k, &phi, v0, m_max, opts.restarts, opts.seed ^ 0x736670)?;
        let status = if set_margin <= VALIDITY_TOL && point_margin > SEPARATION_MARGIN {
            SepStatus::Valid
        } else {
            SepStatus::NotSeparated
        };
        Ok(SeparationCertificate {
            phi,
            set_margin,
            point_margin,
            levels_checked: levels.clone(),
            transcript,
            seed: opts.seed,
            rounds_used,
            status,
        })
    };

    // Membership pre-check: a point inside the (decidable) set cannot be
    // separated.
    if k.contains(v0, 1e-9) == Some(true) {
        let zero = MapModel::zero(space.clone(), n);
        return finalize(zero, 0);
    }

    let vars = MapVars::new(space.clone(), n)?;
    let nvars = vars.count();
    let mut rng = Seeded::derive(opts.seed, &[0x7365_7061]);
    let mut rows: Vec<LpRow> = Vec::new();

    let add_member_row = |rows: &mut Vec<LpRow>, w: &BlockElement, xi: &[C64]| -> Result<()> {
        let coef = vars.cut_coefficients(w, xi)?;
        // xi* phi(w) xi <= 1
        rows.push(LpRow::new(coef.iter().map(|c| -c).collect(), -1.0));
        Ok(())
    };

    // Seed rows: sampled members constrain phi from the start (every member
    // yields a valid row whether or not it is currently violated).
    for &level in &levels {
        let samples = matrix_convex_sample(k, level, 12, rng.next_u64())?;
        for w in samples {
            // Random unit direction per sampled member; the row is valid
            // for any direction.
            let mut v: Vec<C64> = (0..level * n).map(|_| rng.complex_normal()).collect();
            let norm = scalar::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
            for z in v.iter_mut() {
                *z = z.scale(1.0 / norm);
            }
            add_member_row(&mut rows, &w, &v)?;
        }
    }

    let mut phi_hat = MapModel::zero(space.clone(), n);
    let mut last_obj = f64::NEG_INFINITY;
    let mut stall = 0;
    for round in 1..=opts.budget {
        // Objective: push lambda_max(phi(v0) - I) along the current top
        // eigenvector.
        let (_, eta) = top_eigpair(phi_hat.amplify(v0)?.mat())?;
        let obj = vars.cut_coefficients(v0, &eta)?;
        let inst = LpInstance::maximize(nvars, rows.clone(), obj);
        let (point, objective) = match lp_solve(&inst)? {
            LpOutcome::Feasible { point, objective } => (point, objective),
            LpOutcome::Infeasible { row, violation } => {
                return Err(Error::LpInfeasible { row, violation });
            }
        };
        phi_hat = vars.build_map(&point)?;

        // Violation pass over the membership family.
        let mut found = Vec::new();
        for &level in &levels {
            let samples = matrix_convex_sample(k, level, 16, rng.next_u64())?;
            for w in samples {
                let (lam, xi) = top_eigpair(phi_hat.amplify(&w)?.mat())?;
                if lam - 1.0 > VIOLATION_TOL {
                    found.push((w, xi, lam - 1.0));
                }
            }
            if matches!(k.body, crate::ordspace::ConvexBody::UnitBallPositive) {
                if let Some(w) = ascend_unit_ball(k, &phi_hat, level, opts.restarts / 8 + 1, &mut rng)? {
                    let (lam, xi) = top_eigpair(phi_hat.amplify(&w)?.mat())?;
                    if lam - 1.0 > VIOLATION_TOL {
                        found.push((w, xi, lam - 1.0));
                    }
                }
            }
        }
        found.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap_or(core::cmp::Ordering::Equal));
        found.truncate(12);

        let point_margin =
            eig::herm_eig(&phi_hat.amplify(v0)?.mat().herm_part())?.max() - 1.0;
        if found.is_empty() {
            if point_margin > 10.0 * SEPARATION_MARGIN {
                // Rescale toward feasibility against the true set before
                // certifying; all member rows are homogeneous in phi.
                let (set_est, _, _) =
                    separation_margins(k, &phi_hat, v0, m_max, opts.restarts, rng.next_u64())?;
                let phi_final = if set_est > 0.0 {
                    phi_hat.scale_re(1.0 / (1.0 + set_est + 1e-9))
                } else {
                    phi_hat.clone()
                };
                return finalize(phi_final, round);
            }
            if (objective - last_obj).abs() < 1e-9 {
                stall += 1;
                if stall >= 3 {
                    return finalize(phi_hat, round);
                }
            } else {
                stall = 0;
            }
        } else {
            for (w, xi, _) in &found {
                add_member_row(&mut rows, w, xi)?;
            }
        }
        last_obj = objective;
    }
    finalize(phi_hat, opts.budget)
}

/// Fresh-sample re-verification of a separation certificate.
pub fn verify_separation(
    cert: &SeparationCertificate,
    k: &MatrixConvexModel,
    v0: &BlockElement,
    fresh_seed: u64,
) -> Result<VerifySeparationReport> {
    let m_max = cert.levels_checked.iter().copied().max().unwrap_or(1);
    let (set_margin, point_margin, _transcript) =
        separation_margins(k, &cert.phi, v0, m_max, 32, fresh_seed)?;
    Ok(VerifySeparationReport {
        valid: set_margin <= VALIDITY_TOL && point_margin > SEPARATION_MARGIN,
        set_margin,
        point_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bonsall_scalar_absolute_value_on_line() {
        // E = R, cone = R+, p = |.| sampled at +/-1, q = 0.
        let g = bonsall_scalar(
            1,
            &[vec![1.0]],
            &[(vec![1.0], 1.0), (vec![-1.0], 1.0)],
            &[0.0],
        )
        .unwrap();
        assert!(g[0] >= -1e-8 && g[0] <= 1.0 + 1e-8);
    }

    #[test]
    fn bonsall_scalar_two_dims() {
        // E = R^2, cone generated by (1,0), p = l1 norm on axis points,
        // q(u) = u_1.
        let g = bonsall_scalar(
            2,
            &[vec![1.0, 0.0]],
            &[
                (vec![1.0, 0.0], 1.0),
                (vec![-1.0, 0.0], 1.0),
                (vec![0.0, 1.0], 1.0),
                (vec![0.0, -1.0], 1.0),
            ],
            &[1.0],
        )
        .unwrap();
        // hand enumeration: -1 <= g1 <= 1 (cone row asks g1 >= -1),
        // |g2| <= 1.
        assert!(g[0] >= -1.0 - 1e-8 && g[0] <= 1.0 + 1e-8);
        assert!(g[1].abs() <= 1.0 + 1e-8);
    }

    #[test]
    fn bonsall_scalar_empty_cone() {
        let g = bonsall_scalar(1, &[], &[(vec![1.0], 1.0), (vec![-1.0], 1.0)], &[]).unwrap();
        assert!(g[0].abs() <= 1.0 + 1e-8);
    }

    #[test]
    fn bonsall_scalar_infeasible_reports_row() {
        // g(1) <= -2 and g(1) >= 0 cannot both hold.
        let r = bonsall_scalar(1, &[vec![1.0]], &[(vec![1.0], -2.0)], &[0.0]);
        assert!(matches!(r, Err(Error::LpInfeasible { .. })));
    }

    #[test]
    fn extend_zero_map_certifies_with_zero_margins() {
        let space = SpaceModel::full(2);
        let phi = MapModel::zero(space.clone(), 2);
        let cert = matrix_bonsall_extend(
            &space,
            &phi,
            &GaugeSpec::OperatorNorm,
            &SolverOptions::seeded(5),
        )
        .unwrap();
        assert_eq!(cert.status, ExtendStatus::Valid);
        assert_eq!(cert.cp_margin, 0.0);
        assert!(cert.gauge_margin <= 0.0);
        assert_eq!(cert.exact_choi_margin, Some(0.0));
        assert_eq!(cert.rounds_used, 0);
    }

    #[test]
    fn extend_cp_contraction_certifies_in_place() {
        let mut rng = Seeded::new(9);
        let space = SpaceModel::full(2);
        // x -> gamma* x gamma scaled into a contraction.
        let gamma = rng.gaussian_matrix(2, 2);
        let raw = MapModel::conjugation(&gamma).unwrap();
        let norm = eig::op_norm(&raw.apply(&CMatrix::identity(2)).unwrap());
        let phi = raw.scale_re(0.9 / norm);
        let cert = matrix_bonsall_extend(
            &space,
            &phi,
            &GaugeSpec::OperatorNorm,
            &SolverOptions::seeded(11),
        )
        .unwrap();
        assert_eq!(cert.status, ExtendStatus::Valid);
        assert_eq!(cert.cp_margin, 0.0, "psi = phi gives an exactly zero margin");
        assert!(cert.gauge_margin <= 1e-12);
    }

    #[test]
    fn extend_non_cp_difference_finds_dominating_map() {
        let mut rng = Seeded::new(13);
        let space = SpaceModel::full(2);
        let g1 = rng.gaussian_matrix(2, 2);
        let g2 = rng.gaussian_matrix(2, 2);
        let c1 = MapModel::conjugation(&g1).unwrap();
        let c2 = MapModel::conjugation(&g2).unwrap();
        let n1 = eig::op_norm(&c1.apply(&CMatrix::identity(2)).unwrap());
        let n2 = eig::op_norm(&c2.apply(&CMatrix::identity(2)).unwrap());
        // 0.8 * (contraction - contraction): self-adjoint, usually not CP,
        // satisfies the gauge hypothesis.
        let phi = c1.scale_re(0.8 / n1).sub(&c2.scale_re(0.8 / n2)).unwrap();
        assert!(phi.is_selfadjoint());
        let cert = matrix_bonsall_extend(
            &space,
            &phi,
            &GaugeSpec::OperatorNorm,
            &SolverOptions::seeded(17),
        )
        .unwrap();
        assert_eq!(cert.status, ExtendStatus::Valid, "margins: cp {} gauge {}", cert.cp_margin, cert.gauge_margin);
        assert!(cert.exact_choi_margin.unwrap() >= -1e-9);

        // Independent re-verification under a fresh seed.
        let rep = verify_extension(&cert, &space, &phi, &GaugeSpec::OperatorNorm, 777).unwrap();
        assert!(rep.valid);
    }

    #[test]
    fn extend_rejects_hypothesis_violation() {
        let space = SpaceModel::full(2);
        // 3 * identity violates phi(w) <= ||w|| I.
        let phi = MapModel::identity(2).scale_re(3.0);
        let r = matrix_bonsall_extend(
            &space,
            &phi,
            &GaugeSpec::OperatorNorm,
            &SolverOptions::seeded(1),
        );
        assert!(matches!(r, Err(Error::HypothesisViolated { .. })));
    }

    #[test]
    fn tampered_extension_certificate_fails_verification() {
        let space = SpaceModel::full(2);
        let phi = MapModel::identity(2).scale_re(0.5);
        let cert = matrix_bonsall_extend(
            &space,
            &phi,
            &GaugeSpec::OperatorNorm,
            &SolverOptions::seeded(3),
        )
        .unwrap();
        assert_eq!(cert.status, ExtendStatus::Valid);

        let mut tampered = cert.clone();
        tampered.psi = cert.psi.scale_re(10.0);
        let rep =
            verify_extension(&tampered, &space, &phi, &GaugeSpec::OperatorNorm, 31).unwrap();
        assert!(!rep.valid);
        assert!(rep.gauge_margin > 1.0, "gauge margin {}", rep.gauge_margin);
    }

    #[test]
    fn separate_scaled_identity_from_unit_ball() {
        let space = SpaceModel::full(2);
        let k = MatrixConvexModel::unit_ball_positive(space.clone());
        let v0 = BlockElement::new(1, 2, CMatrix::identity(2).scale_re(2.0)).unwrap();
        let cert = separate_point(&k, &v0, 2, &SolverOptions::seeded(7)).unwrap();
        assert_eq!(cert.status, SepStatus::Valid);
        assert!(cert.set_margin <= 1e-6, "set margin {}", cert.set_margin);
        assert!(cert.point_margin >= 0.4, "point margin {}", cert.point_margin);

        let rep = verify_separation(&cert, &k, &v0, 999).unwrap();
        assert!(rep.valid);
    }

    #[test]
    fn inside_point_is_not_separated() {
        let space = SpaceModel::full(2);
        let k = MatrixConvexModel::unit_ball_positive(space.clone());
        let v0 = BlockElement::new(1, 2, CMatrix::identity(2).scale_re(0.5)).unwrap();
        let cert = separate_point(&k, &v0, 2, &SolverOptions::seeded(7)).unwrap();
        assert_eq!(cert.status, SepStatus::NotSeparated);
    }

    #[test]
    fn zero_generated_set_separates_identity() {
        let space = SpaceModel::full(2);
        let k = MatrixConvexModel::generated(space.clone(), vec![BlockElement::zeros(1, 2)])
            .unwrap();
        let v0 = BlockElement::new(1, 2, CMatrix::identity(2)).unwrap();
        let cert = separate_point(&k, &v0, 2, &SolverOptions::seeded(19)).unwrap();
        assert_eq!(cert.status, SepStatus::Valid);
        assert!(cert.point_margin > SEPARATION_MARGIN);
    }

    #[test]
    fn separation_requires_zero_in_k1() {
        let space = SpaceModel::full(2);
        let gen = BlockElement::new(1, 2, CMatrix::identity(2)).unwrap();
        let k = MatrixConvexModel::generated(space.clone(), vec![gen]).unwrap();
        let v0 = BlockElement::new(1, 2, CMatrix::identity(2).scale_re(2.0)).unwrap();
        assert!(matches!(
            separate_point(&k, &v0, 2, &SolverOptions::seeded(1)),
            Err(Error::BadArgument { .. })
        ));
    }

    #[test]
    fn monotone_rows_only_accumulate() {
        // Feasibility of previously found points can only shrink when rows
        // are added: check the indicator on a fixed point.
        let rows1 = vec![LpRow::new(vec![1.0], 0.0)];
        let mut rows2 = rows1.clone();
        rows2.push(LpRow::new(vec![-1.0], -0.5));
        let x = [0.75];
        let ok1 = rows1.iter().all(|r| r.violation(&x) <= 1e-12);
        let ok2 = rows2.iter().all(|r| r.violation(&x) <= 1e-12);
        assert!(ok1);
        assert!(!ok2, "added cut excludes the point; never the reverse");
    }

    use crate::rng::Seeded;

    #[test]
    fn extension_certificate_revalidates_under_many_seeds() {
        let mut rng = Seeded::new(23);
        let space = SpaceModel::full(2);
        let g1 = rng.gaussian_matrix(2, 2);
        let c1 = MapModel::conjugation(&g1).unwrap();
        let n1 = eig::op_norm(&c1.apply(&CMatrix::identity(2)).unwrap());
        let phi = c1.scale_re(0.7 / n1);
        let cert = matrix_bonsall_extend(
            &space,
            &phi,
            &GaugeSpec::OperatorNorm,
            &SolverOptions::seeded(29),
        )
        .unwrap();
        assert_eq!(cert.status, ExtendStatus::Valid);
        for fresh in 0..10u64 {
            let rep =
                verify_extension(&cert, &space, &phi, &GaugeSpec::OperatorNorm, fresh).unwrap();
            assert!(rep.valid, "seed {fresh}: cp {} gauge {}", rep.cp_margin, rep.gauge_margin);
        }
    }

    #[test]
    fn scaled_gauge_certifies_smaller_maps() {
        let space = SpaceModel::full(2);
        let gauge = GaugeSpec::scaled(0.5).unwrap();
        let phi = MapModel::identity(2).scale_re(0.25);
        let cert =
            matrix_bonsall_extend(&space, &phi, &gauge, &SolverOptions::seeded(41)).unwrap();
        assert_eq!(cert.status, ExtendStatus::Valid);
        assert_abs_diff_eq!(cert.cp_margin, 0.0, epsilon = 1e-12);
    }
}
