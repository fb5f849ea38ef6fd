//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Variables are free reals; internally each is split into a nonnegative
//! pair and boxed by `|x_j| <= 1e6`, which keeps every instance bounded.
//! Rows are `sum coeffs[j] x[j] >= rhs`. Pivoting is fully deterministic.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar;

/// Bounding box on the max-norm of the variable vector.
pub const LP_BOX: f64 = 1e6;
/// A returned point satisfies every row within this tolerance.
pub const LP_ROW_TOL: f64 = 1e-8;

const PIVOT_EPS: f64 = 1e-9;
const MAX_PIVOTS: usize = 200_000;

#[derive(Clone, Debug)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl LpRow {
    pub fn new(coeffs: Vec<f64>, rhs: f64) -> Self {
        LpRow { coeffs, rhs }
    }

    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs: f64 = self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
        self.rhs - lhs
    }
}

#[derive(Clone, Debug)]
pub struct LpInstance {
    pub variable_count: usize,
    pub rows: Vec<LpRow>,
    /// Maximized when present; pure feasibility otherwise.
    pub objective: Option<Vec<f64>>,
}

impl LpInstance {
    pub fn feasibility(variable_count: usize, rows: Vec<LpRow>) -> Self {
        LpInstance { variable_count, rows, objective: None }
    }

    pub fn maximize(variable_count: usize, rows: Vec<LpRow>, objective: Vec<f64>) -> Self {
        LpInstance { variable_count, rows, objective: Some(objective) }
    }
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Feasible { point: Vec<f64>, objective: f64 },
    /// Most violated row at the best point phase one could reach.
    Infeasible { row: usize, violation: f64 },
}

/// Feasibility solve; any objective on the instance is ignored.
pub fn lp_feasible(inst: &LpInstance) -> Result<LpOutcome> {
    solve(inst, false)
}

/// Solve honoring the instance objective (maximization).
pub fn lp_solve(inst: &LpInstance) -> Result<LpOutcome> {
    solve(inst, true)
}

fn solve(inst: &LpInstance, use_objective: bool) -> Result<LpOutcome> {
    for row in &inst.rows {
        if row.coeffs.len() != inst.variable_count || !row.rhs.is_finite() {
            return Err(Error::BadArgument {
                what: alloc::format!("malformed LP row"),
            });
        }
    }
    let nx = inst.variable_count;
    let nz = 2 * nx; // split x = p - q

    // Assemble (coeffs over z, sense, rhs) with row normalization.
    // sense: true = ">=", false = "<=".
    let mut cons: Vec<(Vec<f64>, bool, f64)> = Vec::with_capacity(inst.rows.len() + nx);
    for row in &inst.rows {
        let scale = row
            .coeffs
            .iter()
            .fold(0.0_f64, |m, &c| scalar::fmax(m, scalar::abs(c)));
        let s = if scale > 0.0 { 1.0 / scale } else { 1.0 };
        let mut z = vec![0.0; nz];
        for (j, &c) in row.coeffs.iter().enumerate() {
            z[j] = c * s;
            z[nx + j] = -c * s;
        }
        cons.push((z, true, row.rhs * s));
    }
    // Box rows: p_j + q_j <= 2 * LP_BOX ensures |x_j| <= 2 * LP_BOX; the
    // tighter per-variable bound comes from phase-2 boundedness.
    for j in 0..nx {
        let mut z = vec![0.0; nz];
        z[j] = 1.0;
        z[nx + j] = 1.0;
        cons.push((z, false, LP_BOX));
    }

    let mut tab = Tableau::build(nz, &cons);
    // Phase 1: drive artificials to zero.
    if tab.n_artificial > 0 {
        tab.install_phase1_cost();
        tab.optimize()?;
        let infeas = -tab.cost_rhs();
        if infeas > 1e-7 {
            let point = tab.extract(nx);
            let (row, violation) = worst_row(&inst.rows, &point);
            return Ok(LpOutcome::Infeasible { row, violation });
        }
    }
    // Phase 2.
    let mut cost = vec![0.0; nz];
    let mut objective_vec = vec![0.0; nx];
    if use_objective {
        if let Some(obj) = &inst.objective {
            if obj.len() != nx {
                return Err(Error::BadArgument {
                    what: alloc::format!("objective length mismatch"),
                });
            }
            objective_vec.copy_from_slice(obj);
            for j in 0..nx {
                // maximize c.x  ==  minimize -c.(p - q)
                cost[j] = -obj[j];
                cost[nx + j] = obj[j];
            }
        }
    }
    tab.install_cost(&cost);
    tab.forbid_artificials();
    tab.optimize()?;

    let point = tab.extract(nx);
    let objective: f64 = objective_vec.iter().zip(&point).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Feasible { point, objective })
}

fn worst_row(rows: &[LpRow], x: &[f64]) -> (usize, f64) {
    let mut worst = (0, 0.0);
    for (i, row) in rows.iter().enumerate() {
        let v = row.violation(x);
        if v > worst.1 {
            worst = (i, v);
        }
    }
    worst
}

struct Tableau {
    /// m x (ncols + 1); last column is the rhs.
    rows: Vec<Vec<f64>>,
    cost: Vec<f64>,
    ncols: usize,
    n_structural: usize,
    n_artificial: usize,
    artificial_start: usize,
    basis: Vec<usize>,
    allow_artificial: bool,
}

impl Tableau {
    fn build(nz: usize, cons: &[(Vec<f64>, bool, f64)]) -> Tableau {
        let m = cons.len();
        // slack/surplus: one per row; artificials for >=-rows with rhs > 0
        // after sign normalization.
        let mut n_artificial = 0;
        for (_z, sense, rhs) in cons {
            let (sense, rhs) = normalize_sense(*sense, *rhs);
            if sense && rhs >= 0.0 {
                n_artificial += 1;
            }
            let _ = rhs;
        }
        let n_slack = m;
        let ncols = nz + n_slack + n_artificial;
        let artificial_start = nz + n_slack;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut art = 0;
        for (i, (z, sense, rhs)) in cons.iter().enumerate() {
            let mut flip = 1.0;
            let mut sense = *sense;
            let mut rhs = *rhs;
            if rhs < 0.0 {
                flip = -1.0;
                rhs = -rhs;
                sense = !sense;
            }
            let mut row = vec![0.0; ncols + 1];
            for (j, &c) in z.iter().enumerate() {
                row[j] = flip * c;
            }
            row[ncols] = rhs;
            if sense {
                // >= rhs >= 0: surplus -1, artificial +1.
                row[nz + i] = -1.0;
                row[artificial_start + art] = 1.0;
                basis.push(artificial_start + art);
                art += 1;
            } else {
                // <= rhs >= 0: slack +1.
                row[nz + i] = 1.0;
                basis.push(nz + i);
            }
            rows.push(row);
        }
        Tableau {
            rows,
            cost: vec![0.0; ncols + 1],
            ncols,
            n_structural: nz,
            n_artificial,
            artificial_start,
            basis,
            allow_artificial: true,
        }
    }

    fn install_phase1_cost(&mut self) {
        let mut c = vec![0.0; self.ncols];
        for j in self.artificial_start..self.ncols {
            c[j] = 1.0;
        }
        self.install_cost(&c);
    }

    /// Set the minimization cost vector (structural part may be shorter than
    /// ncols; missing entries are zero) and eliminate basic columns.
    fn install_cost(&mut self, c: &[f64]) {
        self.cost = vec![0.0; self.ncols + 1];
        for (j, &v) in c.iter().enumerate() {
            self.cost[j] = v;
        }
        for i in 0..self.rows.len() {
            let b = self.basis[i];
            let cb = self.cost[b];
            if cb != 0.0 {
                for j in 0..=self.ncols {
                    self.cost[j] -= cb * self.rows[i][j];
                }
            }
        }
    }

    fn forbid_artificials(&mut self) {
        self.allow_artificial = false;
        // Pivot out any artificial still basic (degenerate at zero level).
        for i in 0..self.rows.len() {
            if self.basis[i] < self.artificial_start {
                continue;
            }
            let mut col = None;
            for j in 0..self.artificial_start {
                if scalar::abs(self.rows[i][j]) > PIVOT_EPS {
                    col = Some(j);
                    break;
                }
            }
            if let Some(j) = col {
                self.pivot(i, j);
            }
        }
    }

    fn cost_rhs(&self) -> f64 {
        self.cost[self.ncols]
    }

    /// Bland's rule minimization.
    fn optimize(&mut self) -> Result<()> {
        let limit = if self.allow_artificial { self.ncols } else { self.artificial_start };
        for _pivots in 0..MAX_PIVOTS {
            // Entering: smallest index with negative reduced cost.
            let mut entering = None;
            for j in 0..limit {
                if self.cost[j] < -PIVOT_EPS {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(());
            };
            // Leaving: min ratio; ties resolved by smallest basic index.
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][j];
                if a > PIVOT_EPS {
                    let ratio = self.rows[i][self.ncols] / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12
                                || (scalar::abs(ratio - br) <= 1e-12
                                    && self.basis[i] < self.basis[bi])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((i, _)) = leave else {
                // Unbounded descent; the box rows make this unreachable for
                // well-formed instances.
                return Err(Error::LpStalled);
            };
            self.pivot(i, j);
        }
        Err(Error::LpStalled)
    }

    fn pivot(&mut self, i: usize, j: usize) {
        let piv = self.rows[i][j];
        let inv = 1.0 / piv;
        for v in self.rows[i].iter_mut() {
            *v *= inv;
        }
        for r in 0..self.rows.len() {
            if r == i {
                continue;
            }
            let f = self.rows[r][j];
            if f != 0.0 {
                for col in 0..=self.ncols {
                    self.rows[r][col] -= f * self.rows[i][col];
                }
                self.rows[r][j] = 0.0;
            }
        }
        let f = self.cost[j];
        if f != 0.0 {
            for col in 0..=self.ncols {
                self.cost[col] -= f * self.rows[i][col];
            }
            self.cost[j] = 0.0;
        }
        self.basis[i] = j;
    }

    fn extract(&self, nx: usize) -> Vec<f64> {
        let mut z = vec![0.0; self.n_structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_structural {
                z[b] = self.rows[i][self.ncols];
            }
        }
        (0..nx).map(|j| z[j] - z[nx + j]).collect()
    }
}

fn normalize_sense(sense: bool, rhs: f64) -> (bool, f64) {
    if rhs < 0.0 {
        (!sense, -rhs)
    } else {
        (sense, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_feasibility() {
        // {x >= 0, -x >= -1}: any x in [0, 1].
        let inst = LpInstance::feasibility(
            1,
            vec![LpRow::new(vec![1.0], 0.0), LpRow::new(vec![-1.0], -1.0)],
        );
        match lp_feasible(&inst).unwrap() {
            LpOutcome::Feasible { point, .. } => {
                assert!(point[0] >= -LP_ROW_TOL && point[0] <= 1.0 + LP_ROW_TOL);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn contradictory_rows_infeasible() {
        // {x >= 1, -x >= 0}.
        let inst = LpInstance::feasibility(
            1,
            vec![LpRow::new(vec![1.0], 1.0), LpRow::new(vec![-1.0], 0.0)],
        );
        match lp_feasible(&inst).unwrap() {
            LpOutcome::Infeasible { violation, .. } => assert!(violation > 0.1),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn random_polytopes_with_known_interior_point() {
        use crate::rng::Seeded;
        let mut rng = Seeded::new(271);
        for trial in 0..20 {
            let n = 2 + (trial % 4);
            let x0: Vec<f64> = (0..n).map(|_| rng.uniform_range(-3.0, 3.0)).collect();
            let mut rows = Vec::new();
            for _ in 0..(3 * n) {
                let a: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
                let ax: f64 = a.iter().zip(&x0).map(|(c, v)| c * v).sum();
                // a.x >= ax - slack keeps x0 strictly feasible
                rows.push(LpRow::new(a, ax - rng.uniform_range(0.1, 2.0)));
            }
            let inst = LpInstance::feasibility(n, rows.clone());
            match lp_feasible(&inst).unwrap() {
                LpOutcome::Feasible { point, .. } => {
                    for (i, row) in rows.iter().enumerate() {
                        assert!(
                            row.violation(&point) <= LP_ROW_TOL,
                            "row {i} violated by {}",
                            row.violation(&point)
                        );
                    }
                }
                other => panic!("expected feasible, got {other:?}"),
            }
        }
    }

    #[test]
    fn maximization_reaches_vertex() {
        // max x + y s.t. x <= 2 (as -x >= -2), y <= 3.
        let inst = LpInstance::maximize(
            2,
            vec![
                LpRow::new(vec![-1.0, 0.0], -2.0),
                LpRow::new(vec![0.0, -1.0], -3.0),
            ],
            vec![1.0, 1.0],
        );
        match lp_solve(&inst).unwrap() {
            LpOutcome::Feasible { point, objective } => {
                assert!((point[0] - 2.0).abs() < 1e-9);
                assert!((point[1] - 3.0).abs() < 1e-9);
                assert!((objective - 5.0).abs() < 1e-9);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn unconstrained_objective_stops_at_box() {
        let inst = LpInstance::maximize(1, vec![], vec![1.0]);
        match lp_solve(&inst).unwrap() {
            LpOutcome::Feasible { point, .. } => {
                assert!(point[0] <= LP_BOX + 1e-6);
                assert!(point[0] >= 0.9 * LP_BOX);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn negative_coordinates_reachable() {
        // max -x s.t. x >= -4  =>  x = -4.
        let inst = LpInstance::maximize(1, vec![LpRow::new(vec![1.0], -4.0)], vec![-1.0]);
        match lp_solve(&inst).unwrap() {
            LpOutcome::Feasible { point, .. } => {
                assert!((point[0] + 4.0).abs() < 1e-9);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_resolution() {
        let inst = LpInstance::maximize(
            3,
            vec![
                LpRow::new(vec![1.0, 1.0, 0.0], -1.0),
                LpRow::new(vec![-1.0, 2.0, 1.0], -2.0),
                LpRow::new(vec![0.0, -1.0, -1.0], -3.0),
            ],
            vec![1.0, 0.5, 0.25],
        );
        let a = match lp_solve(&inst).unwrap() {
            LpOutcome::Feasible { point, .. } => point,
            _ => panic!(),
        };
        let b = match lp_solve(&inst).unwrap() {
            LpOutcome::Feasible { point, .. } => point,
            _ => panic!(),
        };
        assert_eq!(a, b);
    }
}
