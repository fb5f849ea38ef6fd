//! Seeded property suites, one per verified statement, with reproducible
//! machine-readable reports.
//!
//! Each suite derives a private sub-stream per case from
//! `(seed, suite tag, case index)`, so reports are byte-identical across
//! runs and independent of execution order. Every suite contains at least
//! one exact (non-sampled) assertion next to its sampled checks.
//!
//! Suite names: `dual-iso`, `theta-order-iso`, `choi-kraus`,
//! `gauge-axioms`, `bonsall`, `separation`, `density-finite`,
//! `eval-isometry`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::canonical::{escape_str, fmt_f64, fmt_u64_hex};
use crate::choiduality::{
    choi_of, cp_check, functional_positive_check, kraus_of, theta_of_functional, trace_pair,
    upsilon_apply, upsilon_beta_route, upsilon_of_map, FunctionalModel, MapModel,
};
use crate::error::{Error, Result};
use crate::hahnbanach::{
    digest_block, matrix_bonsall_extend, separate_point, verify_extension, ExtendStatus,
    SepStatus, SolverOptions,
};
use crate::matcore::{eig, BlockElement, CMatrix, DEFAULT_PSD_TOL};
use crate::ordspace::{
    gauge_eval, lambda_upper, matrix_convex_sample, offdiag_embed, sample_cone_element,
    GaugeSpec, MatrixConvexModel, SpaceModel,
};
use crate::rng::{fnv1a64, Seeded};
use crate::scalar;

pub const SUITE_NAMES: [&str; 8] = [
    "dual-iso",
    "theta-order-iso",
    "choi-kraus",
    "gauge-axioms",
    "bonsall",
    "separation",
    "density-finite",
    "eval-isometry",
];

#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    /// Override the per-suite default case count.
    pub cases: Option<usize>,
    /// Override the per-suite default dimension bound.
    pub max_dim: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct CaseFailure {
    pub digest: u64,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite_name: String,
    pub seed: u64,
    pub cases_run: usize,
    pub failures: Vec<CaseFailure>,
    /// Filled by the caller (the library itself never consults a clock);
    /// excluded from the canonical bytes.
    pub wall_time_s: f64,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    /// Canonical bytes: everything except the wall time.
    pub fn to_canonical_json(&self) -> String {
        let failures: Vec<String> = self
            .failures
            .iter()
            .map(|f| {
                alloc::format!(
                    "{{\"digest\":\"{}\",\"observed\":{},\"expected\":{},\"tolerance\":{}}}",
                    fmt_u64_hex(f.digest),
                    fmt_f64(f.observed),
                    fmt_f64(f.expected),
                    fmt_f64(f.tolerance)
                )
            })
            .collect();
        alloc::format!(
            "{{\"schema\":\"matorder-report/1\",\"suite\":\"{}\",\"seed\":{},\"cases_run\":{},\"pass\":{},\"failures\":[{}]}}",
            escape_str(&self.suite_name),
            self.seed,
            self.cases_run,
            self.pass(),
            failures.join(",")
        )
    }
}

#[derive(Clone, Debug)]
pub struct AggregateReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl AggregateReport {
    pub fn pass(&self) -> bool {
        self.suites.iter().all(SuiteReport::pass)
    }

    pub fn to_canonical_json(&self) -> String {
        let suites: Vec<String> = self.suites.iter().map(|s| s.to_canonical_json()).collect();
        alloc::format!(
            "{{\"schema\":\"matorder-report/1\",\"kind\":\"aggregate\",\"seed\":{},\"pass\":{},\"suites\":[{}]}}",
            self.seed,
            self.pass(),
            suites.join(",")
        )
    }
}

struct Recorder {
    failures: Vec<CaseFailure>,
    cases: usize,
}

impl Recorder {
    fn new() -> Self {
        Recorder { failures: Vec::new(), cases: 0 }
    }

    fn case(&mut self) {
        self.cases += 1;
    }

    /// `observed` must not exceed `expected` by more than `tol`.
    fn check_le(&mut self, digest: u64, observed: f64, expected: f64, tol: f64) {
        if !(observed <= expected + tol) {
            self.failures.push(CaseFailure { digest, observed, expected, tolerance: tol });
        }
    }

    /// `|observed - expected| <= tol`.
    fn check_eq(&mut self, digest: u64, observed: f64, expected: f64, tol: f64) {
        if !(scalar::abs(observed - expected) <= tol) {
            self.failures.push(CaseFailure { digest, observed, expected, tolerance: tol });
        }
    }

    fn check_true(&mut self, digest: u64, ok: bool) {
        if !ok {
            self.failures.push(CaseFailure {
                digest,
                observed: 0.0,
                expected: 1.0,
                tolerance: 0.0,
            });
        }
    }

    fn finish(self, name: &str, seed: u64) -> SuiteReport {
        SuiteReport {
            suite_name: String::from(name),
            seed,
            cases_run: self.cases,
            failures: self.failures,
            wall_time_s: 0.0,
        }
    }
}

fn case_rng(seed: u64, suite: &str, case: u64) -> Seeded {
    let tag = fnv1a64(&[suite.len() as u64, case]);
    let mut words: Vec<u64> = suite.bytes().map(|b| b as u64).collect();
    words.push(case);
    words.push(tag);
    Seeded::derive(seed, &words)
}

/// Random CP map with Smith-level norm (equivalently `||phi(I)||`) equal to
/// `scale`: a Wishart Choi matrix, rescaled.
pub fn random_cp_contraction(d: usize, n: usize, scale: f64, rng: &mut Seeded) -> MapModel {
    let choi = BlockElement::new(d, n, rng.wishart(d * n, d * n)).expect("square wishart");
    let phi = MapModel::from_choi(&choi);
    let norm = eig::op_norm(&phi.apply(&CMatrix::identity(d)).expect("identity in full algebra"));
    if norm <= 1e-14 {
        return MapModel::zero(SpaceModel::full(d), n);
    }
    phi.scale_re(scale / norm)
}

pub fn run_suite(name: &str, seed: u64, cfg: &SuiteConfig) -> Result<SuiteReport> {
    match name {
        "dual-iso" => Ok(suite_dual_iso(seed, cfg)),
        "theta-order-iso" => Ok(suite_theta_order_iso(seed, cfg)),
        "choi-kraus" => Ok(suite_choi_kraus(seed, cfg)),
        "gauge-axioms" => Ok(suite_gauge_axioms(seed, cfg)),
        "bonsall" => Ok(suite_bonsall(seed, cfg)),
        "separation" => Ok(suite_separation(seed, cfg)),
        "density-finite" => Ok(suite_density_finite(seed, cfg)),
        "eval-isometry" => Ok(suite_eval_isometry(seed, cfg)),
        other => Err(Error::UnknownSuite { name: String::from(other) }),
    }
}

/// All suites in fixed order; the aggregate passes iff every suite does.
pub fn run_all(seed: u64, cfg: &SuiteConfig) -> AggregateReport {
    let suites = SUITE_NAMES
        .iter()
        .map(|name| run_suite(name, seed, cfg).expect("built-in suite names are valid"))
        .collect();
    AggregateReport { seed, suites }
}

/// Trace duality: the trace norm is attained by the polar optimizer and
/// dominates the pairing over the unit ball; PSD pairings are nonnegative.
fn suite_dual_iso(seed: u64, cfg: &SuiteConfig) -> SuiteReport {
    let name = "dual-iso";
    let cases = cfg.cases.unwrap_or(200);
    let max_dim = cfg.max_dim.unwrap_or(3);
    let mut rec = Recorder::new();

    // Exact assertion: <I, I> = m*n.
    {
        rec.case();
        let t = BlockElement::identity(2, 2);
        let p = trace_pair(&t, &t).expect("same shape");
        rec.check_eq(digest_block(&t), p.re, 4.0, 0.0);
        rec.check_eq(digest_block(&t), p.im, 0.0, 0.0);
    }

    for case in 0..cases as u64 {
        rec.case();
        let mut rng = case_rng(seed, name, case);
        let m = 1 + rng.index(max_dim);
        let n = 1 + rng.index(max_dim);
        let tau = BlockElement::new(m, n, rng.gaussian_matrix(m * n, m * n)).expect("square");
        let digest = digest_block(&tau);
        let t1 = tau.trace_norm();

        // Analytic polar optimizer attains the trace norm.
        let u_mat = eig::trace_dual_optimizer(tau.block_transpose().mat());
        let u = BlockElement::new(m, n, u_mat).expect("square optimizer");
        let attained = trace_pair(&tau, &u).expect("same shape");
        let attained_mod = scalar::hypot(attained.re, attained.im);
        rec.check_eq(digest, attained_mod, t1, 1e-9 * (1.0 + t1));

        // Random unit-norm directions never exceed the trace norm, and the
        // sup including the optimizer sits in [0.95 t1, t1].
        let mut sup = attained_mod;
        for _ in 0..16 {
            let a_raw = rng.gaussian_matrix(m * n, m * n);
            let norm = eig::op_norm(&a_raw);
            if norm <= 1e-14 {
                continue;
            }
            let alpha = BlockElement::new(m, n, a_raw.scale_re(1.0 / norm)).expect("square");
            let p = trace_pair(&tau, &alpha).expect("same shape");
            let v = scalar::hypot(p.re, p.im);
            rec.check_le(digest, v, t1, 1e-10 * (1.0 + t1));
            sup = scalar::fmax(sup, v);
        }
        rec.check_le(digest, 0.95 * t1, sup, 1e-9 * (1.0 + t1));

        // Positivity of PSD pairings.
        let pa = BlockElement::new(m, n, rng.wishart(m * n, m * n)).expect("square");
        let pb = BlockElement::new(m, n, rng.wishart(m * n, m * n)).expect("square");
        let p = trace_pair(&pa, &pb).expect("same shape");
        let scale = 1.0 + pa.op_norm() * pb.op_norm() * ((m * n) as f64);
        rec.check_le(digest, -p.re, 0.0, 1e-10 * scale);
        rec.check_eq(digest, p.im, 0.0, 1e-10 * scale);
    }
    rec.finish(name, seed)
}

/// Order isomorphism between functionals on `M_n(M_d)` and maps
/// `M_d -> M_n`: positivity verdicts agree, and the two directions are
/// mutually inverse exactly on the stored basis.
fn suite_theta_order_iso(seed: u64, cfg: &SuiteConfig) -> SuiteReport {
    let name = "theta-order-iso";
    let cases = cfg.cases.unwrap_or(500);
    let max_dim = cfg.max_dim.unwrap_or(3);
    let mut rec = Recorder::new();

    for case in 0..cases as u64 {
        rec.case();
        let mut rng = case_rng(seed, name, case);
        let n = 1 + rng.index(max_dim);
        let d = 1 + rng.index(max_dim);
        let dom = SpaceModel::full(d);
        // Half PSD representers, half indefinite.
        let rep = if case % 2 == 0 { rng.wishart(n * d, n * d) } else { rng.gue(n * d) };
        let mut values = Vec::with_capacity(n * n * d * d);
        for k in 0..n {
            for l in 0..n {
                for a in 0..d {
                    for b in 0..d {
                        values.push(rep.at(l * d + b, k * d + a));
                    }
                }
            }
        }
        let digest = fnv1a64(
            &values
                .iter()
                .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                .collect::<Vec<u64>>(),
        );
        let f = FunctionalModel::new(n, dom, values.clone()).expect("well-formed functional");
        let positive = functional_positive_check(&f).expect("full-algebra domain");
        let phi = theta_of_functional(&f);
        let cp = cp_check(&phi, DEFAULT_PSD_TOL).expect("full-algebra domain").cp;
        rec.check_true(digest, positive == cp);

        // Exact mutual inversion on stored values.
        let back = upsilon_of_map(&phi);
        let mut worst: f64 = 0.0;
        for (a, b) in back.values().iter().zip(&values) {
            let dv = a - b;
            worst = scalar::fmax(worst, scalar::hypot(dv.re, dv.im));
        }
        rec.check_le(digest, worst, 0.0, 1e-12);

        // The two evaluation routes for Upsilon agree.
        let u = BlockElement::new(n, d, rng.gaussian_matrix(n * d, n * d)).expect("square");
        let va = upsilon_apply(&phi, &u).expect("levels match");
        let vb = upsilon_beta_route(&phi, &u).expect("levels match");
        rec.check_le(digest, scalar::hypot((va - vb).re, (va - vb).im), 0.0, 1e-10);
    }
    rec.finish(name, seed)
}

/// Choi/Kraus: PSD block matrices reconstruct their maps through a Kraus
/// family within 1e-8; the transpose map is rejected with witness -1.
fn suite_choi_kraus(seed: u64, cfg: &SuiteConfig) -> SuiteReport {
    let name = "choi-kraus";
    let cases = cfg.cases.unwrap_or(200);
    let max_dim = cfg.max_dim.unwrap_or(5);
    let mut rec = Recorder::new();

    // Exact assertions: the transpose map on M_2 is rejected with witness
    // eigenvalue -1; the identity Choi matrix yields a single Kraus term.
    {
        rec.case();
        let tau = choi_of(&MapModel::transpose(2)).expect("full domain");
        match kraus_of(&tau, 1e-9) {
            Err(Error::ConeViolation { min_eig }) => {
                rec.check_eq(digest_block(&tau), min_eig, -1.0, 1e-10);
            }
            _ => rec.check_true(digest_block(&tau), false),
        }
        let tau = choi_of(&MapModel::identity(2)).expect("full domain");
        match kraus_of(&tau, 1e-9) {
            Ok(cert) => {
                rec.check_true(digest_block(&tau), cert.gammas.len() == 1);
                rec.check_le(digest_block(&tau), cert.residual, 0.0, 1e-10);
            }
            Err(_) => rec.check_true(digest_block(&tau), false),
        }
    }

    for case in 0..cases as u64 {
        rec.case();
        let mut rng = case_rng(seed, name, case);
        let m = 1 + rng.index(max_dim);
        let n = 1 + rng.index(max_dim);
        let tau = BlockElement::new(m, n, rng.wishart(m * n, m * n)).expect("square");
        let digest = digest_block(&tau);
        match kraus_of(&tau, 1e-9) {
            Ok(cert) => rec.check_le(digest, cert.residual, 0.0, 1e-8),
            Err(_) => rec.check_true(digest, false),
        }
        // cp_check agrees with PSD-ness of the Choi matrix by construction;
        // exercise the map route as well.
        let phi = MapModel::from_choi(&tau);
        rec.check_true(digest, cp_check(&phi, DEFAULT_PSD_TOL).expect("full domain").cp);
    }
    rec.finish(name, seed)
}

/// Finite matrix gauge axioms for the operator-norm gauge, plus the
/// off-diagonal embedding norm identity.
fn suite_gauge_axioms(seed: u64, cfg: &SuiteConfig) -> SuiteReport {
    let name = "gauge-axioms";
    let cases = cfg.cases.unwrap_or(500);
    let max_dim = cfg.max_dim.unwrap_or(3);
    let g = GaugeSpec::OperatorNorm;
    let mut rec = Recorder::new();

    // Exact assertion: rho(I) = 1.
    {
        rec.case();
        let v = BlockElement::identity(2, 2);
        rec.check_eq(digest_block(&v), gauge_eval(&g, &v), 1.0, 0.0);
    }

    for case in 0..cases as u64 {
        rec.case();
        let mut rng = case_rng(seed, name, case);
        let d = 1 + rng.index(max_dim);
        let a = 1 + rng.index(max_dim);
        let b = 1 + rng.index(max_dim);
        let v = BlockElement::new(a, d, rng.gaussian_matrix(a * d, a * d)).expect("square");
        let w = BlockElement::new(b, d, rng.gaussian_matrix(b * d, b * d)).expect("square");
        let digest = fnv1a64(&[digest_block(&v), digest_block(&w)]);

        // Direct-sum axiom, exact at 1e-10.
        let ds = BlockElement::new(a + b, d, v.mat().direct_sum(w.mat()).expect("square"))
            .expect("square");
        let lhs = gauge_eval(&g, &ds);
        let rhs = scalar::fmax(gauge_eval(&g, &v), gauge_eval(&g, &w));
        rec.check_eq(digest, lhs, rhs, 1e-10 * (1.0 + rhs));

        // Compression axiom.
        let cols = 1 + rng.index(max_dim);
        let alpha = rng.gaussian_matrix(a, cols);
        let alpha_norm = eig::op_norm(&alpha);
        let cmp = crate::ordspace::compress(&v, &alpha).expect("levels match");
        rec.check_le(
            digest,
            gauge_eval(&g, &cmp),
            alpha_norm * alpha_norm * gauge_eval(&g, &v),
            1e-10 * (1.0 + gauge_eval(&g, &v)),
        );

        // Off-diagonal embedding: Hermitian, same norm.
        let z = BlockElement::new(a, d, rng.gaussian_matrix(a * d, a * d)).expect("square");
        let emb = offdiag_embed(&z);
        rec.check_eq(digest, emb.hermitian_deviation(), 0.0, 0.0);
        rec.check_eq(digest, emb.op_norm(), z.op_norm(), 1e-10 * (1.0 + z.op_norm()));
    }
    rec.finish(name, seed)
}

/// Extension solver end-to-end: generated instances satisfying the gauge
/// hypothesis certify (or, exceptionally, exceed budget with sub-1e-3
/// margins); the zero map and CP contractions certify with zero margins.
/// Includes the lambda cross-bound `Upsilon_phi(u) <= lambda_upper(u)`.
fn suite_bonsall(seed: u64, cfg: &SuiteConfig) -> SuiteReport {
    let name = "bonsall";
    let cases = cfg.cases.unwrap_or(20);
    let max_dim = cfg.max_dim.unwrap_or(3);
    let gauge = GaugeSpec::OperatorNorm;
    let mut rec = Recorder::new();

    for case in 0..cases as u64 {
        rec.case();
        let mut rng = case_rng(seed, name, case);
        let d = 1 + rng.index(max_dim);
        let n = 1 + rng.index(max_dim);
        let space = SpaceModel::full(d);
        let phi = match case % 4 {
            0 => MapModel::zero(space.clone(), n),
            1 => random_cp_contraction(d, n, 0.9, &mut rng),
            2 => {
                let a = random_cp_contraction(d, n, 1.0, &mut rng);
                let b = random_cp_contraction(d, n, 1.0, &mut rng);
                a.scale_re(0.8).sub(&b.scale_re(0.8)).expect("same shape")
            }
            _ => {
                let a = random_cp_contraction(d, n, 1.0, &mut rng);
                let b = random_cp_contraction(d, n, 1.0, &mut rng);
                a.scale_re(0.5).sub(&b.scale_re(0.5)).expect("same shape")
            }
        };
        let digest = fnv1a64(&[case, d as u64, n as u64]);
        match matrix_bonsall_extend(&space, &phi, &gauge, &SolverOptions::seeded(seed ^ case)) {
            Ok(cert) => {
                match cert.status {
                    ExtendStatus::Valid => {
                        if case % 4 == 0 {
                            // zero map: exactly zero cone margin
                            rec.check_eq(digest, cert.cp_margin, 0.0, 0.0);
                        }
                        // fresh-seed re-verification must concur
                        let rep = verify_extension(&cert, &space, &phi, &gauge, seed ^ 0xfeed ^ case)
                            .expect("verification runs");
                        rec.check_true(digest, rep.valid);
                    }
                    ExtendStatus::BudgetExceeded => {
                        // documented only with sub-1e-3 margins
                        rec.check_le(digest, -cert.cp_margin, 0.0, 1e-3);
                        rec.check_le(digest, cert.gauge_margin, 0.0, 1e-3);
                    }
                }
            }
            Err(_) => rec.check_true(digest, false),
        }
    }

    // lambda cross-bound: F(u) <= lambda_upper(u) for F = Upsilon of a CP
    // contraction and u in the cone.
    for case in 0..(cases as u64).min(12) {
        rec.case();
        let mut rng = case_rng(seed, name, 10_000 + case);
        let d = 1 + rng.index(2);
        let n = 1 + rng.index(2);
        let space = SpaceModel::full(d);
        let phi = random_cp_contraction(d, n, 1.0, &mut rng);
        let Some(u) = sample_cone_element(&space, n, &mut rng).expect("full algebra samples")
        else {
            continue;
        };
        let digest = digest_block(&u);
        let fu = upsilon_apply(&phi, &u).expect("levels match");
        let bound = lambda_upper(&space, &u, &GaugeSpec::OperatorNorm, 24, seed ^ case)
            .expect("valid arguments");
        rec.check_le(digest, fu.re, bound, 1e-8 * (1.0 + bound));
    }
    rec.finish(name, seed)
}

/// Separation solver end-to-end on the canonical instances plus random
/// outside points.
fn suite_separation(seed: u64, cfg: &SuiteConfig) -> SuiteReport {
    let name = "separation";
    let extra = cfg.cases.unwrap_or(6).min(24);
    let mut rec = Recorder::new();
    let space = SpaceModel::full(2);
    let k = MatrixConvexModel::unit_ball_positive(space.clone());

    // 2I separates from the positive unit ball with margin >= 0.4.
    {
        rec.case();
        let v0 = BlockElement::new(1, 2, CMatrix::identity(2).scale_re(2.0)).expect("square");
        match separate_point(&k, &v0, 2, &SolverOptions::seeded(seed)) {
            Ok(cert) => {
                rec.check_true(digest_block(&v0), cert.status == SepStatus::Valid);
                rec.check_le(digest_block(&v0), cert.set_margin, 0.0, 1e-6);
                rec.check_le(digest_block(&v0), 0.4, cert.point_margin, 1e-9);
            }
            Err(_) => rec.check_true(digest_block(&v0), false),
        }
    }
    // I/2 is a member: not separated.
    {
        rec.case();
        let v0 = BlockElement::new(1, 2, CMatrix::identity(2).scale_re(0.5)).expect("square");
        match separate_point(&k, &v0, 2, &SolverOptions::seeded(seed)) {
            Ok(cert) => rec.check_true(digest_block(&v0), cert.status == SepStatus::NotSeparated),
            Err(_) => rec.check_true(digest_block(&v0), false),
        }
    }
    // The zero-generated set separates the identity (exact degenerate case).
    {
        rec.case();
        let kz = MatrixConvexModel::generated(space.clone(), vec![BlockElement::zeros(1, 2)])
            .expect("nonempty generators");
        let v0 = BlockElement::new(1, 2, CMatrix::identity(2)).expect("square");
        match separate_point(&kz, &v0, 2, &SolverOptions::seeded(seed)) {
            Ok(cert) => rec.check_true(digest_block(&v0), cert.status == SepStatus::Valid),
            Err(_) => rec.check_true(digest_block(&v0), false),
        }
    }
    // Random points clearly outside the ball separate as well.
    for case in 0..extra as u64 {
        rec.case();
        let mut rng = case_rng(seed, name, case);
        let raw = rng.wishart(2, 2);
        let norm = eig::op_norm(&raw);
        let v0 = BlockElement::new(1, 2, raw.scale_re(2.0 / scalar::fmax(norm, 1e-12)))
            .expect("square");
        match separate_point(&k, &v0, 2, &SolverOptions::seeded(seed ^ case)) {
            Ok(cert) => rec.check_true(digest_block(&v0), cert.status == SepStatus::Valid),
            Err(_) => rec.check_true(digest_block(&v0), false),
        }
    }
    rec.finish(name, seed)
}

/// Finite-dimensional reading of the density statement: the canonical
/// identification is the identity map, so it must carry the positive part
/// of the unit ball onto itself. Tested as exact two-way membership on
/// samples; the infinite-dimensional content is out of numerical reach and
/// documented as such.
fn suite_density_finite(seed: u64, cfg: &SuiteConfig) -> SuiteReport {
    let name = "density-finite";
    let cases = cfg.cases.unwrap_or(120);
    let max_dim = cfg.max_dim.unwrap_or(3);
    let mut rec = Recorder::new();

    // Exact assertions: 0 and e^{1,1} are members at level 1.
    {
        rec.case();
        let space = SpaceModel::full(2);
        let k = MatrixConvexModel::unit_ball_positive(space.clone());
        let zero = BlockElement::zeros(1, 2);
        rec.check_true(digest_block(&zero), k.contains(&zero, 1e-9) == Some(true));
        let e11 = BlockElement::new(1, 2, CMatrix::elem(2, 0, 0)).expect("square");
        rec.check_true(digest_block(&e11), k.contains(&e11, 1e-9) == Some(true));
    }

    for case in 0..cases as u64 {
        rec.case();
        let mut rng = case_rng(seed, name, case);
        let d = 1 + rng.index(max_dim);
        let level = 1 + rng.index(max_dim);
        let space = SpaceModel::full(d);
        let k = MatrixConvexModel::unit_ball_positive(space.clone());

        // Forward: every constructed member passes the predicate.
        let samples = matrix_convex_sample(&k, level, 2, rng.next_u64()).expect("samples");
        for v in &samples {
            rec.check_true(digest_block(v), k.contains(v, 1e-9) == Some(true));
        }
        // Converse: every element passing the predicate is a member of the
        // target set under the identity identification (norm and cone
        // conditions restated directly).
        let raw = rng.wishart(level * d, level * d);
        let norm = eig::op_norm(&raw);
        if norm > 1e-12 {
            let v = BlockElement::new(level, d, raw.scale_re(rng.uniform_range(0.1, 1.0) / norm))
                .expect("square");
            let member = k.contains(&v, 1e-9) == Some(true);
            let direct = space.cone_member(&v, 1e-9).member && v.op_norm() <= 1.0 + 1e-9;
            rec.check_true(digest_block(&v), member == direct && member);
        }
    }
    rec.finish(name, seed)
}

/// Evaluation isometry at desk scale: over CP complete contractions the
/// amplified image never exceeds the norm, and the identity map attains it
/// exactly.
fn suite_eval_isometry(seed: u64, cfg: &SuiteConfig) -> SuiteReport {
    let name = "eval-isometry";
    let cases = cfg.cases.unwrap_or(40);
    let max_dim = cfg.max_dim.unwrap_or(3);
    let mut rec = Recorder::new();

    for case in 0..cases as u64 {
        rec.case();
        let mut rng = case_rng(seed, name, case);
        let d = 1 + rng.index(max_dim.min(3));
        let m = 1 + rng.index(max_dim);
        let x = BlockElement::new(m, d, rng.gaussian_matrix(m * d, m * d)).expect("square");
        let digest = digest_block(&x);
        let norm_x = x.op_norm();

        // The identity map is in the positive unit ball and attains the
        // norm bit-exactly (its amplification reconstructs x entry by
        // entry).
        let id = MapModel::identity(d);
        let image = id.amplify(&x).expect("levels match");
        rec.check_true(digest, image.mat() == x.mat());
        let mut sup = image.op_norm();
        rec.check_true(digest, sup == norm_x);

        for j in 0..20 {
            let n = 1 + rng.index(max_dim.min(3));
            let phi = random_cp_contraction(d, n, 1.0, &mut rng);
            let v = phi.amplify(&x).expect("levels match").op_norm();
            rec.check_le(digest ^ j, v, norm_x, 1e-10 * (1.0 + norm_x));
            sup = scalar::fmax(sup, v);
        }
        // sup equals ||x|| exactly: attained by the identity, never
        // exceeded beyond tolerance.
        rec.check_eq(digest, sup, norm_x, 1e-10 * (1.0 + norm_x));
    }
    rec.finish(name, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_default_config_small() {
        let cfg = SuiteConfig { cases: Some(12), max_dim: Some(2) };
        for name in SUITE_NAMES {
            let rep = run_suite(name, 7, &cfg).unwrap();
            assert!(rep.pass(), "suite {name} failed: {:?}", rep.failures);
            assert!(rep.cases_run > 0);
        }
    }

    #[test]
    fn unknown_suite_rejected() {
        assert!(matches!(
            run_suite("no-such-suite", 0, &SuiteConfig::default()),
            Err(Error::UnknownSuite { .. })
        ));
    }

    #[test]
    fn same_seed_same_report_bytes() {
        let cfg = SuiteConfig { cases: Some(8), max_dim: Some(2) };
        let a = run_suite("dual-iso", 42, &cfg).unwrap().to_canonical_json();
        let b = run_suite("dual-iso", 42, &cfg).unwrap().to_canonical_json();
        assert_eq!(a, b);
    }

    #[test]
    fn different_seeds_differ_somewhere() {
        let cfg = SuiteConfig { cases: Some(8), max_dim: Some(2) };
        // Reports with no failures have identical bytes apart from the seed
        // field; check the seed is embedded.
        let a = run_suite("gauge-axioms", 1, &cfg).unwrap().to_canonical_json();
        assert!(a.contains("\"seed\":1"));
    }

    #[test]
    fn checker_detects_upsilon_sign_flip() {
        // Corrupting one stored value of Upsilon_phi must break the exact
        // Theta/Upsilon inversion that theta-order-iso asserts.
        let mut rng = Seeded::new(11);
        let dom = SpaceModel::full(2);
        let coeffs: Vec<CMatrix> = (0..4).map(|_| rng.gaussian_matrix(2, 2)).collect();
        let phi = MapModel::new(dom.clone(), 2, coeffs).unwrap();
        let f = upsilon_of_map(&phi);
        let mut bad_values = f.values().to_vec();
        bad_values[3] = -bad_values[3];
        let bad = FunctionalModel::new(2, dom, bad_values).unwrap();
        let back = theta_of_functional(&bad);
        let mut worst: f64 = 0.0;
        for (a, b) in back.coeffs().iter().zip(phi.coeffs()) {
            worst = scalar::fmax(worst, a.sub(b).unwrap().max_abs());
        }
        assert!(worst > 1e-6, "sign flip must be visible");
    }

    #[test]
    fn failures_serialize_with_all_fields() {
        let rep = SuiteReport {
            suite_name: String::from("demo"),
            seed: 3,
            cases_run: 1,
            failures: vec![CaseFailure {
                digest: 0xabc,
                observed: 1.0,
                expected: 0.0,
                tolerance: 0.5,
            }],
            wall_time_s: 1.25,
        };
        let s = rep.to_canonical_json();
        assert!(s.contains("\"digest\":\"0000000000000abc\""));
        assert!(s.contains("\"pass\":false"));
        // wall time never reaches the canonical bytes
        assert!(!s.contains("1.25"));
    }
}
