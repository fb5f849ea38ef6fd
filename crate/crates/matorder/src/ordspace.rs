//! Concrete matrix-ordered operator spaces.
//!
//! A [`SpaceModel`] is a `*`-closed subspace `X` of a full matrix algebra
//! `M_d`, given by a basis. Level-`m` elements of `M_m(X)` are
//! [`BlockElement`]s with outer level `m` and inner dimension `d` whose
//! blocks lie in the span of the basis. The induced cone at level `m` is
//! the set of Hermitian, positive semidefinite such elements; it is closed
//! under compressions `gamma* v gamma` and direct sums by construction.
//!
//! The module also carries finite matrix gauges, the off-diagonal
//! self-adjoint embedding, the sampled upper bound for the factorization
//! gauge `lambda`, and generatively described matrix convex sets.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matcore::{eig, BlockElement, CMatrix, C64};
use crate::rng::Seeded;
use crate::scalar;

/// Residual threshold for span membership (least-squares projection).
pub const SPAN_TOL: f64 = 1e-8;
/// Tolerance for the declared star-closure of a basis.
pub const STAR_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct SpaceModel {
    ambient_dim: usize,
    basis: Vec<CMatrix>,
    star_closed: bool,
    proper_cone: bool,
    /// Frobenius-orthonormal spanning set (modified Gram-Schmidt of `basis`).
    ortho: Vec<CMatrix>,
    /// Transition `ortho[s] = sum_r trans[s][r] basis[r]`, used to express
    /// coordinates in the original basis.
    trans: Vec<Vec<C64>>,
    /// Hermitian basis of the same complex span (star-closed spaces only).
    herm_basis: Vec<CMatrix>,
    /// Coordinates of each original basis element in `herm_basis`.
    basis_in_herm: Vec<Vec<C64>>,
    contains_identity: bool,
}

impl SpaceModel {
    pub fn new(
        ambient_dim: usize,
        basis: Vec<CMatrix>,
        star_closed: bool,
        proper_cone: bool,
    ) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::BadDimension { what: "ambient dimension zero" });
        }
        if basis.is_empty() {
            return Err(Error::BadArgument { what: alloc::format!("empty basis") });
        }
        for b in &basis {
            if b.rows() != ambient_dim || b.cols() != ambient_dim {
                return Err(Error::ShapeMismatch {
                    expected: (ambient_dim, ambient_dim),
                    found: (b.rows(), b.cols()),
                });
            }
        }
        if basis.len() > ambient_dim * ambient_dim {
            return Err(Error::DependentBasis { min_singular_value: 0.0 });
        }

        let (ortho, trans, min_sv) = orthonormalize(&basis)?;
        if min_sv < 1e-8 {
            return Err(Error::DependentBasis { min_singular_value: min_sv });
        }

        let mut model = SpaceModel {
            ambient_dim,
            basis,
            star_closed,
            proper_cone,
            ortho,
            trans,
            herm_basis: Vec::new(),
            basis_in_herm: Vec::new(),
            contains_identity: false,
        };

        model.contains_identity =
            model.span_residual(&CMatrix::identity(ambient_dim)) <= SPAN_TOL;

        if star_closed {
            for b in &model.basis {
                let res = model.span_residual(&b.adjoint());
                if res > STAR_TOL {
                    return Err(Error::StarClosureViolated { residual: res });
                }
            }
            model.build_hermitian_basis()?;
        }
        Ok(model)
    }

    /// The full matrix algebra `M_d` with the elementary basis.
    pub fn full(d: usize) -> Arc<SpaceModel> {
        let mut basis = Vec::with_capacity(d * d);
        for k in 0..d {
            for l in 0..d {
                basis.push(CMatrix::elem(d, k, l));
            }
        }
        Arc::new(SpaceModel::new(d, basis, true, true).expect("full algebra is well-formed"))
    }

    /// Diagonal matrices inside `M_d`.
    pub fn diagonal(d: usize) -> Arc<SpaceModel> {
        let basis = (0..d).map(|k| CMatrix::elem(d, k, k)).collect();
        Arc::new(SpaceModel::new(d, basis, true, true).expect("diagonal space is well-formed"))
    }

    /// Complex span of the given Hermitian matrices.
    pub fn hermitian_span(generators: Vec<CMatrix>) -> Result<Arc<SpaceModel>> {
        if generators.is_empty() {
            return Err(Error::BadArgument { what: alloc::format!("empty hermitian span") });
        }
        let d = generators[0].require_square()?;
        for g in &generators {
            if g.hermitian_deviation() > STAR_TOL {
                return Err(Error::NotHermitian { deviation: g.hermitian_deviation() });
            }
        }
        Ok(Arc::new(SpaceModel::new(d, generators, true, true)?))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn star_closed(&self) -> bool {
        self.star_closed
    }

    pub fn proper_cone(&self) -> bool {
        self.proper_cone
    }

    pub fn is_full_algebra(&self) -> bool {
        self.basis.len() == self.ambient_dim * self.ambient_dim
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    /// Hermitian basis of the span; only available for star-closed spaces.
    pub fn hermitian_basis(&self) -> &[CMatrix] {
        &self.herm_basis
    }

    /// Frobenius-orthonormal spanning set of the space.
    pub fn orthonormal_basis(&self) -> &[CMatrix] {
        &self.ortho
    }

    /// Coordinates of `x` in the original basis, plus the residual of the
    /// least-squares projection onto the span.
    pub fn coords(&self, x: &CMatrix) -> Result<(Vec<C64>, f64)> {
        if x.rows() != self.ambient_dim || x.cols() != self.ambient_dim {
            return Err(Error::ShapeMismatch {
                expected: (self.ambient_dim, self.ambient_dim),
                found: (x.rows(), x.cols()),
            });
        }
        let mut coords = vec![C64::new(0.0, 0.0); self.basis.len()];
        let mut proj = CMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for (s, o) in self.ortho.iter().enumerate() {
            let c = o.frob_inner(x)?;
            for (r, t) in self.trans[s].iter().enumerate() {
                coords[r] += c * t;
            }
            proj = proj.add(&o.scale(c))?;
        }
        let residual = x.sub(&proj)?.fro_norm();
        Ok((coords, residual))
    }

    /// Least-squares projection onto the span and its residual.
    pub fn project(&self, x: &CMatrix) -> Result<(CMatrix, f64)> {
        let mut proj = CMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for o in &self.ortho {
            let c = o.frob_inner(x)?;
            proj = proj.add(&o.scale(c))?;
        }
        let residual = x.sub(&proj)?.fro_norm();
        Ok((proj, residual))
    }

    pub fn span_residual(&self, x: &CMatrix) -> f64 {
        match self.project(x) {
            Ok((_, r)) => r,
            Err(_) => f64::INFINITY,
        }
    }

    /// Largest blockwise span residual of a level-`m` element.
    pub fn block_span_residual(&self, v: &BlockElement) -> f64 {
        if v.inner() != self.ambient_dim {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for k in 0..v.outer() {
            for l in 0..v.outer() {
                worst = scalar::fmax(worst, self.span_residual(&v.block(k, l)));
            }
        }
        worst
    }

    /// Membership in the induced cone at the level of `v`: Hermitian,
    /// positive semidefinite, blocks in the span. The report carries both
    /// the minimal eigenvalue and the worst span residual as witnesses.
    pub fn cone_member(&self, v: &BlockElement, tol: f64) -> ConeReport {
        let span_residual = self.block_span_residual(v);
        let herm_dev = v.hermitian_deviation();
        if herm_dev > tol || !span_residual.is_finite() {
            return ConeReport {
                member: false,
                min_eig: f64::NEG_INFINITY,
                span_residual,
                herm_dev,
            };
        }
        let rep = eig::psd_check(&v.mat().herm_part(), tol).expect("herm part is Hermitian");
        ConeReport {
            member: rep.psd && span_residual <= tol,
            min_eig: rep.min_eig,
            span_residual,
            herm_dev,
        }
    }

    fn build_hermitian_basis(&mut self) -> Result<()> {
        let target = self.basis.len();
        let mut candidates = Vec::with_capacity(2 * target);
        for b in &self.basis {
            let ba = b.adjoint();
            candidates.push(b.add(&ba)?.scale_re(0.5));
            candidates.push(b.sub(&ba)?.scale(C64::new(0.0, -0.5)));
        }
        // Greedy real-linear-independent selection under Frobenius norm.
        let mut picked: Vec<CMatrix> = Vec::with_capacity(target);
        let mut ortho: Vec<CMatrix> = Vec::with_capacity(target);
        for cand in candidates {
            if picked.len() == target {
                break;
            }
            let mut resid = cand.clone();
            for _ in 0..2 {
                for o in &ortho {
                    let c = o.frob_inner(&resid)?;
                    // Real projection keeps the candidate Hermitian.
                    resid = resid.sub(&o.scale_re(c.re))?;
                }
            }
            let norm = resid.fro_norm();
            if norm > 1e-8 {
                ortho.push(resid.scale_re(1.0 / norm));
                picked.push(cand);
            }
        }
        if picked.len() != target {
            return Err(Error::DependentBasis { min_singular_value: 0.0 });
        }
        let mut basis_in_herm = Vec::with_capacity(target);
        for b in &self.basis {
            basis_in_herm.push(coords_in(&picked, b)?);
        }
        self.herm_basis = picked;
        self.basis_in_herm = basis_in_herm;
        Ok(())
    }

    /// Coordinates of each original basis element in the Hermitian basis.
    pub fn basis_in_hermitian(&self) -> &[Vec<C64>] {
        &self.basis_in_herm
    }

    /// Coordinates of an arbitrary span member in the Hermitian basis.
    pub fn herm_coords(&self, x: &CMatrix) -> Result<Vec<C64>> {
        coords_in(&self.herm_basis, x)
    }
}

/// Solve `x = sum c_s set[s]` by least squares through an orthonormalized
/// copy of `set`.
fn coords_in(set: &[CMatrix], x: &CMatrix) -> Result<Vec<C64>> {
    let (ortho, trans, _min) = orthonormalize(set)?;
    let mut coords = vec![C64::new(0.0, 0.0); set.len()];
    for (s, o) in ortho.iter().enumerate() {
        let c = o.frob_inner(x)?;
        for (r, t) in trans[s].iter().enumerate() {
            coords[r] += c * t;
        }
    }
    Ok(coords)
}

/// Modified Gram-Schmidt with re-orthogonalization. Returns the orthonormal
/// set, the transition coefficients back to the input set, and the smallest
/// diagonal pivot (a proxy for the smallest singular value of the stacked
/// basis).
#[allow(clippy::type_complexity)]
fn orthonormalize(set: &[CMatrix]) -> Result<(Vec<CMatrix>, Vec<Vec<C64>>, f64)> {
    let n = set.len();
    let mut ortho: Vec<CMatrix> = Vec::with_capacity(n);
    let mut trans: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut min_pivot = f64::INFINITY;
    for (r, b) in set.iter().enumerate() {
        let mut resid = b.clone();
        let mut combo = vec![C64::new(0.0, 0.0); n];
        combo[r] = C64::new(1.0, 0.0);
        for _pass in 0..2 {
            for (s, o) in ortho.iter().enumerate() {
                let c = o.frob_inner(&resid)?;
                resid = resid.sub(&o.scale(c))?;
                for k in 0..n {
                    let t = trans[s][k];
                    combo[k] -= c * t;
                }
            }
        }
        let norm = resid.fro_norm();
        min_pivot = scalar::fmin(min_pivot, norm / scalar::fmax(b.fro_norm(), 1e-300));
        if norm < 1e-14 {
            return Ok((ortho, trans, 0.0));
        }
        let inv = 1.0 / norm;
        ortho.push(resid.scale_re(inv));
        for t in combo.iter_mut() {
            *t = t.scale(inv);
        }
        trans.push(combo);
    }
    Ok((ortho, trans, min_pivot))
}

#[derive(Clone, Debug)]
pub struct ConeReport {
    pub member: bool,
    pub min_eig: f64,
    pub span_residual: f64,
    pub herm_dev: f64,
}

/// Finite matrix gauge: the operator norm, optionally scaled by `c > 0`.
/// Both gauge axioms (direct-sum maximum, compression bound) are inherited
/// from the operator norm.
#[derive(Clone, Debug, PartialEq)]
pub enum GaugeSpec {
    OperatorNorm,
    Scaled(f64),
}

impl GaugeSpec {
    pub fn scaled(c: f64) -> Result<GaugeSpec> {
        if c > 0.0 && c.is_finite() {
            Ok(GaugeSpec::Scaled(c))
        } else {
            Err(Error::BadArgument { what: alloc::format!("gauge scale must be positive") })
        }
    }

    pub fn factor(&self) -> f64 {
        match self {
            GaugeSpec::OperatorNorm => 1.0,
            GaugeSpec::Scaled(c) => *c,
        }
    }
}

pub fn gauge_eval(g: &GaugeSpec, v: &BlockElement) -> f64 {
    g.factor() * v.op_norm()
}

pub fn gauge_eval_mat(g: &GaugeSpec, v: &CMatrix) -> f64 {
    g.factor() * eig::op_norm(v)
}

/// Self-adjoint embedding `z -> [[0, z], [z*, 0]]` at twice the level.
/// The output is Hermitian with the same operator norm as `z`.
pub fn offdiag_embed(z: &BlockElement) -> BlockElement {
    BlockElement::new(2 * z.outer(), z.inner(), z.mat().hermitian_dilation())
        .expect("dilation has matching block shape")
}

/// Sampled upper bound for the factorization gauge
/// `lambda(y) = inf Tr(beta^2) rho(beta^{-1} y beta^{-1})` over invertible
/// positive `beta`. Candidates: the identity, a deterministic scalar grid
/// `t in {2^-8, ..., 2^8}`, and `trials` random Wishart-style positive
/// matrices with eigenvalues floored at `1e-3`. Monotone nonincreasing in
/// `trials` for a fixed seed.
pub fn lambda_upper(
    space: &SpaceModel,
    y: &BlockElement,
    g: &GaugeSpec,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::BadArgument { what: alloc::format!("trials must be >= 1") });
    }
    if y.inner() != space.ambient_dim() {
        return Err(Error::LevelMismatch { expected: space.ambient_dim(), found: y.inner() });
    }
    let n = y.outer();
    let d = y.inner();

    let mut best = (n as f64) * gauge_eval(g, y); // beta = I

    // Scalar grid; for scalar beta the two factors cancel, so these all
    // evaluate to the beta = I value, kept for determinism of the record.
    for k in -8..=8 {
        let t = scalar::exp2i(k);
        let binv = CMatrix::identity(n).scale_re(1.0 / t);
        let val = (n as f64) * t * t * sandwich_value(&binv, y, d, g)?;
        best = scalar::fmin(best, val);
    }

    let mut rng = Seeded::derive(seed, &[0x6c61_6d62, n as u64]);
    for _ in 0..trials {
        let w = rng.wishart(n, n);
        let e = eig::herm_eig(&w)?;
        let floored: Vec<f64> = e.values.iter().map(|&l| scalar::fmax(l, 1e-3)).collect();
        let tr_sq: f64 = floored.iter().map(|l| l * l).sum();
        let inv_vals: Vec<f64> = floored.iter().map(|l| 1.0 / l).collect();
        let mut idx = 0;
        let binv = e.rebuild(|_| {
            let v = inv_vals[idx];
            idx += 1;
            v
        });
        let val = tr_sq * sandwich_value(&binv, y, d, g)?;
        best = scalar::fmin(best, val);
    }
    Ok(best)
}

fn sandwich_value(binv: &CMatrix, y: &BlockElement, d: usize, g: &GaugeSpec) -> Result<f64> {
    let amp = binv.kron(&CMatrix::identity(d));
    let w = amp.matmul(y.mat())?.matmul(&amp)?;
    Ok(gauge_eval_mat(g, &w))
}

/// A matrix convex set over a space: either the positive part of the closed
/// unit ball at every level, or the set generated by explicit elements
/// under isometry compressions and direct sums.
#[derive(Clone, Debug)]
pub enum ConvexBody {
    UnitBallPositive,
    Generated { generators: Vec<BlockElement> },
}

#[derive(Clone, Debug)]
pub struct MatrixConvexModel {
    pub space: Arc<SpaceModel>,
    pub body: ConvexBody,
    pub selfadjoint: bool,
}

impl MatrixConvexModel {
    pub fn unit_ball_positive(space: Arc<SpaceModel>) -> Self {
        MatrixConvexModel { space, body: ConvexBody::UnitBallPositive, selfadjoint: true }
    }

    pub fn generated(space: Arc<SpaceModel>, generators: Vec<BlockElement>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        for g in &generators {
            if g.inner() != space.ambient_dim() {
                return Err(Error::LevelMismatch {
                    expected: space.ambient_dim(),
                    found: g.inner(),
                });
            }
        }
        Ok(MatrixConvexModel {
            space,
            body: ConvexBody::Generated { generators },
            selfadjoint: true,
        })
    }

    /// Exact membership where decidable. `None` for generated bodies, whose
    /// description is a construction recipe rather than a predicate.
    pub fn contains(&self, v: &BlockElement, tol: f64) -> Option<bool> {
        match &self.body {
            ConvexBody::UnitBallPositive => {
                let rep = self.space.cone_member(v, tol);
                Some(rep.member && v.op_norm() <= 1.0 + tol)
            }
            ConvexBody::Generated { generators } => {
                // The zero-generated corner case is decidable.
                if generators.iter().all(|g| g.op_norm() <= tol) {
                    Some(v.op_norm() <= tol)
                } else {
                    None
                }
            }
        }
    }

    /// `0 in K_1` precondition used by the separation solver.
    pub fn contains_zero_level_one(&self, tol: f64) -> bool {
        match &self.body {
            ConvexBody::UnitBallPositive => true,
            ConvexBody::Generated { generators } => {
                generators.iter().any(|g| g.outer() == 1 && g.op_norm() <= tol)
            }
        }
    }
}

/// Sample `count` certified members of `k` at the given level. Every output
/// is produced from generators (or from PSD contractions, for the unit-ball
/// body) by isometry compressions and direct sums, so membership holds by
/// construction. Deterministic under `seed`.
pub fn matrix_convex_sample(
    k: &MatrixConvexModel,
    level: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<BlockElement>> {
    if level == 0 {
        return Err(Error::BadDimension { what: "level zero" });
    }
    let mut rng = Seeded::derive(seed, &[0x6b73_616d, level as u64]);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(sample_one(k, level, &mut rng)?);
    }
    Ok(out)
}

fn sample_one(k: &MatrixConvexModel, level: usize, rng: &mut Seeded) -> Result<BlockElement> {
    let d = k.space.ambient_dim();
    match &k.body {
        ConvexBody::UnitBallPositive => sample_unit_ball_positive(&k.space, level, rng),
        ConvexBody::Generated { generators } => {
            if generators.is_empty() {
                return Err(Error::EmptyGenerators);
            }
            // Direct-sum random generators until the total level covers the
            // target, then compress with a random isometry.
            let mut acc = generators[rng.index(generators.len())].clone();
            while acc.outer() < level {
                let next = &generators[rng.index(generators.len())];
                let mat = acc.mat().direct_sum(next.mat())?;
                acc = BlockElement::new(acc.outer() + next.outer(), d, mat)?;
            }
            if acc.outer() == level {
                return Ok(acc);
            }
            let alpha = rng.isometry(acc.outer(), level);
            compress(&acc, &alpha)
        }
    }
}

/// Blockwise compression `alpha* v alpha` for a scalar matrix `alpha` in
/// `M_{m,k}`, realized as `(alpha (x) I_d)* v (alpha (x) I_d)`.
pub fn compress(v: &BlockElement, alpha: &CMatrix) -> Result<BlockElement> {
    if alpha.rows() != v.outer() {
        return Err(Error::LevelMismatch { expected: v.outer(), found: alpha.rows() });
    }
    let amp = alpha.kron(&CMatrix::identity(v.inner()));
    let mat = amp.adjoint().matmul(v.mat())?.matmul(&amp)?;
    BlockElement::new(alpha.cols(), v.inner(), mat)
}

/// Random member of the positive part of the unit ball at the given level:
/// a PSD contraction with blocks in the span.
pub fn sample_unit_ball_positive(
    space: &SpaceModel,
    level: usize,
    rng: &mut Seeded,
) -> Result<BlockElement> {
    if let Some(v) = sample_cone_element(space, level, rng)? {
        let norm = v.op_norm();
        if norm <= 1e-14 {
            return Ok(v);
        }
        let target = rng.uniform_range(0.05, 1.0);
        return Ok(v.scale_re(target / norm));
    }
    Err(Error::SamplingExhausted { what: "unit-ball positive element" })
}

/// Random element of the induced cone at the given level, unnormalized.
/// For full algebras this is a Wishart matrix; when the space contains the
/// identity, a random Hermitian span element is shifted into the cone;
/// otherwise rejection sampling over Hermitian span elements is attempted.
pub fn sample_cone_element(
    space: &SpaceModel,
    level: usize,
    rng: &mut Seeded,
) -> Result<Option<BlockElement>> {
    let d = space.ambient_dim();
    let dim = level * d;
    if space.is_full_algebra() {
        let rank = 1 + rng.index(dim);
        return Ok(Some(BlockElement::new(level, d, rng.wishart(dim, rank))?));
    }
    if !space.star_closed() {
        return Ok(None);
    }
    if space.contains_identity() {
        let h = sample_hermitian_span(space, level, rng)?;
        let min_eig = eig::herm_eig(h.mat())?.min();
        let shift = scalar::fmax(-min_eig, 0.0) + 0.1 * rng.uniform();
        let shifted = h.mat().add(&CMatrix::identity(dim).scale_re(shift))?;
        return Ok(Some(BlockElement::new(level, d, shifted)?));
    }
    for _ in 0..200 {
        let h = sample_hermitian_span(space, level, rng)?;
        if eig::herm_eig(h.mat())?.min() >= 0.0 {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Random Hermitian element of `M_level(X)` with unit operator norm:
/// Gaussian block coefficients over the Hermitian basis with Hermitian
/// symmetry across blocks.
pub fn sample_hermitian_span(
    space: &SpaceModel,
    level: usize,
    rng: &mut Seeded,
) -> Result<BlockElement> {
    let d = space.ambient_dim();
    let hb: Vec<CMatrix> = if space.star_closed() && !space.hermitian_basis().is_empty() {
        space.hermitian_basis().to_vec()
    } else {
        space.basis().to_vec()
    };
    // Draw complex block coefficients with Hermitian symmetry:
    // c[l][k] = conj(c[k][l]) and real on the diagonal.
    let r = hb.len();
    let mut coeff = vec![vec![C64::new(0.0, 0.0); level * level]; r];
    for row in coeff.iter_mut() {
        for k in 0..level {
            for l in k..level {
                if k == l {
                    row[k * level + l] = C64::new(rng.normal(), 0.0);
                } else {
                    let z = rng.complex_normal();
                    row[k * level + l] = z;
                    row[l * level + k] = z.conj();
                }
            }
        }
    }
    let v = BlockElement::from_blocks(level, d, |k, l| {
        let mut b = CMatrix::zeros(d, d);
        for s in 0..r {
            b = b.add(&hb[s].scale(coeff[s][k * level + l])).expect("same shape");
        }
        b
    })?;
    let norm = v.op_norm();
    if norm <= 1e-14 {
        return Ok(v);
    }
    Ok(v.scale_re(1.0 / norm))
}
