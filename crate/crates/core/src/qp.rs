//! Dense convex QP solver for small problems.
//!
//! Solves
//!
//! ```text
//! minimize    1/2 z' H z + g' z
//! subject to  A_eq z  = b_eq
//!             A_in z <= b_in
//! ```
//!
//! with a dual active-set method in the style of Goldfarb and Idnani:
//! start from the unconstrained minimizer, enforce the equalities, then
//! repeatedly add the most violated inequality, taking dual steps (and
//! dropping blocking constraints) as needed. The method requires a
//! positive definite Hessian, which the factorization check enforces up
//! front. Problem sizes here are a handful of variables, so every linear
//! system is re-solved directly instead of maintaining factor updates.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Error, PartialEq)]
pub enum QpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Hessian is not symmetric")]
    NotSymmetric,
    #[error("Hessian is not positive definite (Cholesky factorization failed)")]
    NotPositiveDefinite,
}

/// Problem data. Inequalities read `A_in z <= b_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct QpProblem {
    pub hessian: DMatrix<f64>,
    pub gradient: DVector<f64>,
    pub a_eq: DMatrix<f64>,
    pub b_eq: DVector<f64>,
    pub a_in: DMatrix<f64>,
    pub b_in: DVector<f64>,
}

impl QpProblem {
    pub fn new(
        hessian: DMatrix<f64>,
        gradient: DVector<f64>,
        a_eq: DMatrix<f64>,
        b_eq: DVector<f64>,
        a_in: DMatrix<f64>,
        b_in: DVector<f64>,
    ) -> Result<Self, QpError> {
        let n = hessian.nrows();
        if hessian.ncols() != n {
            return Err(QpError::DimensionMismatch(format!(
                "Hessian must be square, got {}x{}",
                hessian.nrows(),
                hessian.ncols()
            )));
        }
        if gradient.len() != n {
            return Err(QpError::DimensionMismatch(format!(
                "gradient length {} != {}",
                gradient.len(),
                n
            )));
        }
        if a_eq.ncols() != n && a_eq.nrows() > 0 {
            return Err(QpError::DimensionMismatch(format!(
                "A_eq has {} columns, expected {}",
                a_eq.ncols(),
                n
            )));
        }
        if a_eq.nrows() != b_eq.len() {
            return Err(QpError::DimensionMismatch(format!(
                "A_eq rows {} != b_eq length {}",
                a_eq.nrows(),
                b_eq.len()
            )));
        }
        if a_in.ncols() != n && a_in.nrows() > 0 {
            return Err(QpError::DimensionMismatch(format!(
                "A_in has {} columns, expected {}",
                a_in.ncols(),
                n
            )));
        }
        if a_in.nrows() != b_in.len() {
            return Err(QpError::DimensionMismatch(format!(
                "A_in rows {} != b_in length {}",
                a_in.nrows(),
                b_in.len()
            )));
        }
        let scale = hessian.amax().max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if (hessian[(i, j)] - hessian[(j, i)]).abs() > 1e-12 * scale {
                    return Err(QpError::NotSymmetric);
                }
            }
        }
        Ok(Self {
            hessian,
            gradient,
            a_eq,
            b_eq,
            a_in,
            b_in,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.hessian.nrows()
    }

    pub fn objective(&self, z: &DVector<f64>) -> f64 {
        0.5 * (z.transpose() * &self.hessian * z)[(0, 0)] + self.gradient.dot(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpStatus {
    Optimal,
    Infeasible,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct QpSolution {
    pub z: DVector<f64>,
    pub objective: f64,
    pub status: QpStatus,
    /// Worst violation among stationarity, primal/dual feasibility, and
    /// complementary slackness at the returned point.
    pub kkt_residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ConstraintKind {
    /// Equality row index; `flipped` records the sign used at insertion.
    Equality { row: usize, flipped: bool },
    /// Inequality row index (in `>=` form internally).
    Inequality { row: usize },
}

struct ActiveConstraint {
    kind: ConstraintKind,
    /// Normal in `c' z >= d` form.
    normal: DVector<f64>,
    multiplier: f64,
}

/// Solve the problem. See [`solve_with_hints`] for warm starting.
pub fn solve(problem: &QpProblem, tol: f64, max_iter: usize) -> Result<QpSolution, QpError> {
    solve_with_hints(problem, tol, max_iter, &[])
}

/// Solve with a warm-start hint: inequality rows in `hint` are considered
/// for activation before the most-violated scan. The optimum of a strictly
/// convex QP is unique, so hints can only change the iteration count.
pub fn solve_with_hints(
    problem: &QpProblem,
    tol: f64,
    max_iter: usize,
    hint: &[usize],
) -> Result<QpSolution, QpError> {
    let chol = nalgebra::Cholesky::new(problem.hessian.clone())
        .ok_or(QpError::NotPositiveDefinite)?;

    let n = problem.num_vars();
    let mut z = chol.solve(&(-&problem.gradient));
    let mut active: Vec<ActiveConstraint> = Vec::with_capacity(n);
    let mut iterations = 0usize;

    // Equalities first; they are never dropped.
    for row in 0..problem.a_eq.nrows() {
        let e: DVector<f64> = problem.a_eq.row(row).transpose();
        let f = problem.b_eq[row];
        let violation = f - e.dot(&z);
        if violation.abs() <= tol {
            // Already satisfied; activate with zero multiplier so later
            // steps stay on the equality manifold.
            let (normal, flipped) = (e, false);
            active.push(ActiveConstraint {
                kind: ConstraintKind::Equality { row, flipped },
                normal,
                multiplier: 0.0,
            });
            continue;
        }
        let (normal, rhs, flipped) = if violation > 0.0 {
            (e, f, false)
        } else {
            (-e, -f, true)
        };
        match add_constraint(
            problem,
            &chol,
            &mut z,
            &mut active,
            ConstraintKind::Equality { row, flipped },
            normal,
            rhs,
            tol,
            max_iter,
            &mut iterations,
        ) {
            StepOutcome::Added => {}
            StepOutcome::Infeasible => return Ok(finish(problem, z, QpStatus::Infeasible, iterations, &active)),
            StepOutcome::IterationLimit => {
                return Ok(finish(problem, z, QpStatus::MaxIterations, iterations, &active))
            }
        }
    }

    // Inequalities: hinted rows first, then most-violated scan.
    loop {
        let pick = pick_violated(problem, &z, &active, tol, hint);
        let Some(row) = pick else {
            let mut sol = finish(problem, z, QpStatus::Optimal, iterations, &active);
            if sol.kkt_residual > tol.max(1e-10) * 10.0 {
                sol.status = QpStatus::MaxIterations;
            }
            return Ok(sol);
        };
        let normal: DVector<f64> = -problem.a_in.row(row).transpose();
        let rhs = -problem.b_in[row];
        match add_constraint(
            problem,
            &chol,
            &mut z,
            &mut active,
            ConstraintKind::Inequality { row },
            normal,
            rhs,
            tol,
            max_iter,
            &mut iterations,
        ) {
            StepOutcome::Added => {}
            StepOutcome::Infeasible => return Ok(finish(problem, z, QpStatus::Infeasible, iterations, &active)),
            StepOutcome::IterationLimit => {
                return Ok(finish(problem, z, QpStatus::MaxIterations, iterations, &active))
            }
        }
    }
}

fn pick_violated(
    problem: &QpProblem,
    z: &DVector<f64>,
    active: &[ActiveConstraint],
    tol: f64,
    hint: &[usize],
) -> Option<usize> {
    let is_active = |row: usize| {
        active
            .iter()
            .any(|c| c.kind == ConstraintKind::Inequality { row })
    };
    let violation = |row: usize| {
        let a = problem.a_in.row(row);
        let mut v = -problem.b_in[row];
        for j in 0..problem.num_vars() {
            v += a[j] * z[j];
        }
        v
    };
    for &row in hint {
        if row < problem.a_in.nrows() && !is_active(row) && violation(row) > tol {
            return Some(row);
        }
    }
    let mut best: Option<(usize, f64)> = None;
    for row in 0..problem.a_in.nrows() {
        if is_active(row) {
            continue;
        }
        let v = violation(row);
        if v > tol && best.map_or(true, |(_, bv)| v > bv) {
            best = Some((row, v));
        }
    }
    best.map(|(row, _)| row)
}

enum StepOutcome {
    Added,
    Infeasible,
    IterationLimit,
}

/// Bring one violated constraint into the active set, taking primal and
/// dual steps and dropping blocking inequalities on the way.
#[allow(clippy::too_many_arguments)]
fn add_constraint(
    problem: &QpProblem,
    chol: &nalgebra::Cholesky<f64, nalgebra::Dyn>,
    z: &mut DVector<f64>,
    active: &mut Vec<ActiveConstraint>,
    kind: ConstraintKind,
    normal: DVector<f64>,
    rhs: f64,
    _tol: f64,
    max_iter: usize,
    iterations: &mut usize,
) -> StepOutcome {
    const EPS: f64 = 1e-12;
    let mut u_new = 0.0;
    loop {
        *iterations += 1;
        if *iterations > max_iter {
            return StepOutcome::IterationLimit;
        }

        let hinv_c = chol.solve(&normal);
        let q = active.len();
        let (r, s) = if q == 0 {
            (DVector::zeros(0), hinv_c.clone())
        } else {
            let mut n_mat = DMatrix::zeros(problem.num_vars(), q);
            for (k, c) in active.iter().enumerate() {
                n_mat.set_column(k, &c.normal);
            }
            let hinv_n = chol.solve(&n_mat);
            let gram = n_mat.transpose() * &hinv_n;
            let rhs_r = n_mat.transpose() * &hinv_c;
            let r = match gram.lu().solve(&rhs_r) {
                Some(r) => r,
                // Active normals should stay independent; a singular Gram
                // matrix means numerics broke down.
                None => return StepOutcome::IterationLimit,
            };
            let s = &hinv_c - hinv_n * &r;
            (r, s)
        };

        let denom = normal.dot(&s);
        let violation = rhs - normal.dot(z);

        // Blocking dual step over active inequalities.
        let mut t2 = f64::INFINITY;
        let mut blocker: Option<usize> = None;
        for (k, c) in active.iter().enumerate() {
            if matches!(c.kind, ConstraintKind::Equality { .. }) {
                continue;
            }
            if r[k] > EPS {
                let cand = c.multiplier / r[k];
                if cand < t2 {
                    t2 = cand;
                    blocker = Some(k);
                }
            }
        }

        if denom <= EPS {
            // The new normal is dependent on the active set: only dual
            // motion is possible.
            if blocker.is_none() {
                return StepOutcome::Infeasible;
            }
            let k = blocker.unwrap();
            for (i, c) in active.iter_mut().enumerate() {
                c.multiplier -= t2 * r[i];
            }
            u_new += t2;
            active.remove(k);
            continue;
        }

        let t1 = violation / denom;
        let t = t1.min(t2);
        *z += &s * t;
        for (i, c) in active.iter_mut().enumerate() {
            c.multiplier -= t * r[i];
        }
        u_new += t;

        if t2 < t1 {
            active.remove(blocker.unwrap());
            continue;
        }
        active.push(ActiveConstraint {
            kind,
            normal,
            multiplier: u_new,
        });
        return StepOutcome::Added;
    }
}

fn finish(
    problem: &QpProblem,
    z: DVector<f64>,
    status: QpStatus,
    iterations: usize,
    active: &[ActiveConstraint],
) -> QpSolution {
    let kkt_residual = if status == QpStatus::Optimal {
        kkt_residual(problem, &z, active)
    } else {
        f64::INFINITY
    };
    QpSolution {
        objective: problem.objective(&z),
        z,
        status,
        kkt_residual,
        iterations,
    }
}

fn kkt_residual(problem: &QpProblem, z: &DVector<f64>, active: &[ActiveConstraint]) -> f64 {
    let n = problem.num_vars();
    // Stationarity: H z + g - sum u_k c_k (>= form normals).
    let mut stat = &problem.hessian * z + &problem.gradient;
    for c in active {
        stat -= &c.normal * c.multiplier;
    }
    let mut res: f64 = stat.amax();
    let _ = n;

    for row in 0..problem.a_eq.nrows() {
        let v = (problem.a_eq.row(row) * z)[(0, 0)] - problem.b_eq[row];
        res = res.max(v.abs());
    }
    let mut mu = vec![0.0; problem.a_in.nrows()];
    for c in active {
        if let ConstraintKind::Inequality { row } = c.kind {
            mu[row] = c.multiplier;
        }
    }
    for row in 0..problem.a_in.nrows() {
        let slack = (problem.a_in.row(row) * z)[(0, 0)] - problem.b_in[row];
        res = res.max(slack.max(0.0)); // primal feasibility
        res = res.max(-mu[row].min(0.0)); // dual feasibility
        res = res.max((mu[row] * slack).abs()); // complementary slackness
    }
    res
}
