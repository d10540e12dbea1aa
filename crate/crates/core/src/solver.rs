//! Gauss-Seidel solves of the damped propagation systems.
//!
//! Both orientations of the system matrix are strictly diagonally dominant
//! under the inflow assumption (theta_j <= 1 < 1 + lambda_j), which is the
//! convergence condition for Gauss-Seidel:
//!
//! - `Influence` orientation: rows read in-arcs, matrix `I + Λ - Tᵀ`
//!   (row-wise dominant). Column solves of its inverse yield influence
//!   vectors.
//! - `Potential` orientation: rows read out-arcs, matrix `I + Λ - T`
//!   (column-wise dominant, which still suffices for Gauss-Seidel). Its
//!   solve against the all-ones vector yields the per-node potentials that
//!   power the influence upper bound.
//!
//! A mask marks nodes that are pinned to zero — those rows are skipped in
//! the sweep and their variables never move, which is equivalent to deleting
//! the masked rows/columns without re-indexing the matrix. Sweeps always run
//! in ascending node order so results are deterministic.

use crate::error::{Error, Result};
use crate::transmission::{DampingVector, TransmissionMatrix};

/// Default relative max-update tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Hard ceiling on automatically chosen sweep budgets.
pub const MAX_SWEEPS_CAP: usize = 10_000;
/// Floor on automatically chosen sweep budgets so tiny systems still converge.
pub const MIN_SWEEPS: usize = 100;
/// Largest system the dense inverse oracle will materialize.
pub const DENSE_ORACLE_CAP: usize = 2000;

/// Which transposition of the system matrix a solve runs against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `I + Λ - Tᵀ`: row j couples to the in-arcs of j.
    Influence,
    /// `I + Λ - T`: row j couples to the out-arcs of j.
    Potential,
}

/// Sparse, never-materialized view of the system matrix, optionally
/// restricted to the nodes outside a mask.
pub struct PropagationSystem<'a> {
    trans: &'a TransmissionMatrix,
    lambda: &'a DampingVector,
    orientation: Orientation,
    mask: Option<&'a [bool]>,
}

impl<'a> PropagationSystem<'a> {
    pub fn new(
        trans: &'a TransmissionMatrix,
        lambda: &'a DampingVector,
        orientation: Orientation,
    ) -> PropagationSystem<'a> {
        PropagationSystem {
            trans,
            lambda,
            orientation,
            mask: None,
        }
    }

    /// Restricts the system to nodes where `mask[j]` is false.
    pub fn masked(
        trans: &'a TransmissionMatrix,
        lambda: &'a DampingVector,
        orientation: Orientation,
        mask: &'a [bool],
    ) -> PropagationSystem<'a> {
        PropagationSystem {
            trans,
            lambda,
            orientation,
            mask: Some(mask),
        }
    }

    pub fn n(&self) -> usize {
        self.trans.n()
    }

    pub fn is_masked(&self, j: usize) -> bool {
        self.mask.map(|m| m[j]).unwrap_or(false)
    }

    pub fn active_count(&self) -> usize {
        match self.mask {
            None => self.n(),
            Some(m) => m.iter().filter(|&&x| !x).count(),
        }
    }

    fn diag(&self, j: usize) -> f64 {
        1.0 + self.lambda.get(j)
    }

    /// Off-diagonal couplings of row j as `(k, t)` where the matrix entry is `-t`.
    fn row_couplings(&self, j: usize) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        match self.orientation {
            Orientation::Influence => Box::new(self.trans.in_arcs(j)),
            Orientation::Potential => Box::new(self.trans.out_arcs(j)),
        }
    }
}

/// Outcome of a Gauss-Seidel solve. The solution is always full length with
/// masked coordinates exactly zero.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub final_update: f64,
    pub converged: bool,
}

/// Sweep-termination knobs.
///
/// Termination uses the relative max-update criterion
/// `max_j |x_j_new - x_j_old| <= tol * max(1, ||x||_inf)`. When `max_sweeps`
/// is unset the budget is `clamp(10 * n, MIN_SWEEPS, MAX_SWEEPS_CAP)`.
/// `fixed_sweeps` runs exactly that many sweeps with no early exit, for
/// reproducing fixed-budget runs.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_sweeps: Option<usize>,
    pub fixed_sweeps: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: DEFAULT_TOL,
            max_sweeps: None,
            fixed_sweeps: None,
        }
    }
}

impl SolverConfig {
    fn budget(&self, n: usize) -> usize {
        if let Some(fixed) = self.fixed_sweeps {
            return fixed.max(1);
        }
        self.max_sweeps
            .unwrap_or_else(|| (10 * n.max(1)).clamp(MIN_SWEEPS, MAX_SWEEPS_CAP))
            .max(1)
    }
}

/// Solves `system * x = rhs` by Gauss-Seidel sweeps in ascending node order.
///
/// `rhs` must be full length; entries on masked nodes are ignored and the
/// corresponding solution coordinates stay exactly zero. Non-convergence is
/// reported through the `converged` flag, not an error; NaN/Inf during the
/// sweep is an error.
pub fn gauss_seidel_solve(
    system: &PropagationSystem,
    rhs: &[f64],
    config: &SolverConfig,
) -> Result<SolveReport> {
    let n = system.n();
    if rhs.len() != n {
        return Err(Error::InvalidArgument(format!(
            "rhs length {} does not match system size {n}",
            rhs.len()
        )));
    }
    if !(config.tol.is_finite() && config.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "solver tolerance must be positive, got {}",
            config.tol
        )));
    }

    let budget = config.budget(n);
    let mut x = vec![0.0; n];
    let mut iterations = 0;
    let mut final_update = 0.0;
    let mut converged = false;
    for _ in 0..budget {
        let mut max_update = 0.0f64;
        let mut scale = 1.0f64;
        for j in 0..n {
            if system.is_masked(j) {
                continue;
            }
            let mut acc = rhs[j];
            for (k, t) in system.row_couplings(j) {
                // Masked coordinates never move from zero, so they drop out
                // of the sum without an explicit check.
                acc += t * x[k];
            }
            let new = acc / system.diag(j);
            if !new.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite value at node index {j} during sweep {}",
                    iterations + 1
                )));
            }
            let update = (new - x[j]).abs();
            if update > max_update {
                max_update = update;
            }
            let mag = new.abs();
            if mag > scale {
                scale = mag;
            }
            x[j] = new;
        }
        iterations += 1;
        final_update = max_update;
        if config.fixed_sweeps.is_none() && max_update <= config.tol * scale {
            converged = true;
            break;
        }
    }
    if config.fixed_sweeps.is_some() {
        // Fixed-budget mode still reports whether the last sweep met the
        // tolerance so callers can tell how rough the run was.
        let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        converged = final_update <= config.tol * scale;
    }

    Ok(SolveReport {
        x,
        iterations,
        final_update,
        converged,
    })
}

/// Dense inverse of the (masked) system by Gauss-Jordan elimination with
/// partial pivoting. Testing oracle and small-graph exact mode only; the
/// result is embedded at full size with zeros on masked rows and columns.
pub fn dense_inverse_oracle(system: &PropagationSystem) -> Result<Vec<Vec<f64>>> {
    let n = system.n();
    if n > DENSE_ORACLE_CAP {
        return Err(Error::CapExceeded {
            what: "dense inverse oracle",
            size: n,
            cap: DENSE_ORACLE_CAP,
        });
    }
    let active: Vec<usize> = (0..n).filter(|&j| !system.is_masked(j)).collect();
    let m = active.len();
    let mut slot = vec![usize::MAX; n];
    for (r, &j) in active.iter().enumerate() {
        slot[j] = r;
    }

    // Augmented [A | I] in a flat row-major buffer.
    let w = 2 * m;
    let mut a = vec![0.0f64; m * w];
    for (r, &j) in active.iter().enumerate() {
        a[r * w + r] = 1.0 + system.lambda.get(j);
        for (k, t) in system.row_couplings(j) {
            if slot[k] != usize::MAX {
                a[r * w + slot[k]] -= t;
            }
        }
        a[r * w + m + r] = 1.0;
    }

    for col in 0..m {
        let pivot_row = (col..m)
            .max_by(|&r1, &r2| {
                a[r1 * w + col]
                    .abs()
                    .total_cmp(&a[r2 * w + col].abs())
            })
            .unwrap();
        let pivot = a[pivot_row * w + col];
        if pivot.abs() < 1e-14 {
            return Err(Error::Numerical(
                "singular system in dense inversion; inputs are corrupted".into(),
            ));
        }
        if pivot_row != col {
            for c in 0..w {
                a.swap(col * w + c, pivot_row * w + c);
            }
        }
        let inv_pivot = 1.0 / pivot;
        for c in 0..w {
            a[col * w + c] *= inv_pivot;
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let factor = a[r * w + col];
            if factor == 0.0 {
                continue;
            }
            for c in 0..w {
                a[r * w + c] -= factor * a[col * w + c];
            }
        }
    }

    let mut out = vec![vec![0.0; n]; n];
    for (r, &j) in active.iter().enumerate() {
        for (c, &k) in active.iter().enumerate() {
            out[j][k] = a[r * w + m + c];
        }
    }
    Ok(out)
}

/// Solves `(I + Λ - T) y = 1` for the per-node potentials: `y_i` is the
/// column sum of the inverse influence system, the O(|E|) ingredient of the
/// influence upper bound.
pub fn solve_potentials(
    trans: &TransmissionMatrix,
    lambda: &DampingVector,
    config: &SolverConfig,
) -> Result<Vec<f64>> {
    let system = PropagationSystem::new(trans, lambda, Orientation::Potential);
    let rhs = vec![1.0; trans.n()];
    let report = gauss_seidel_solve(&system, &rhs, config)?;
    if !report.converged {
        return Err(Error::NonConvergence {
            iterations: report.iterations,
            last_update: report.final_update,
        });
    }
    if let Some(bad) = report.x.iter().position(|&v| !v.is_finite() || v <= 0.0) {
        return Err(Error::Numerical(format!(
            "potential at node index {bad} is not positive ({})",
            report.x[bad]
        )));
    }
    Ok(report.x)
}
