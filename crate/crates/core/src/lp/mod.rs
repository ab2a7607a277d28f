//! Dense linear programming: problem/solution types, a deterministic
//! two-phase primal simplex, and a Charnes–Cooper wrapper for
//! linear-fractional objectives.
//!
//! Problem sizes in this crate are small (tens of rows and columns), so the
//! solver favours exactness and reproducibility over sparsity: Bland's rule
//! everywhere, no perturbation, no scaling heuristics.

mod fractional;
mod simplex;

pub use fractional::{solve_linear_fractional, AffineForm};

use thiserror::Error;

use crate::real::{Real, Tolerances};

/// Objective direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Row comparison operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    /// `a·x ≤ b`
    Le,
    /// `a·x = b`
    Eq,
    /// `a·x ≥ b`
    Ge,
}

/// Linear constraints `rows[i] · x  senses[i]  rhs[i]` plus per-variable
/// bounds. Bounds default to `[0, +∞)`; either side may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet<T> {
    pub rows: Vec<Vec<T>>,
    pub senses: Vec<RowSense>,
    pub rhs: Vec<T>,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Real> ConstraintSet<T> {
    pub fn new(num_vars: usize) -> Self {
        ConstraintSet {
            rows: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            lower: vec![T::zero(); num_vars],
            upper: vec![T::infinity(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn push_row(&mut self, coeffs: Vec<T>, sense: RowSense, rhs: T) {
        debug_assert_eq!(coeffs.len(), self.num_vars());
        self.rows.push(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
    }

    pub fn set_bounds(&mut self, var: usize, lower: T, upper: T) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    /// Indices of rows whose absolute slack at `x` is within `feas_tol`.
    pub fn active_rows(&self, x: &[T], feas_tol: T) -> Vec<usize> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .enumerate()
            .filter(|(_, (row, &rhs))| {
                let lhs: T = row.iter().zip(x).map(|(&a, &v)| a * v).sum();
                (lhs - rhs).abs() <= feas_tol
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// True when `x` satisfies every row and bound within `feas_tol`.
    pub fn is_feasible(&self, x: &[T], feas_tol: T) -> bool {
        let rows_ok = self.rows.iter().zip(&self.senses).zip(&self.rhs).all(|((row, sense), &rhs)| {
            let lhs: T = row.iter().zip(x).map(|(&a, &v)| a * v).sum();
            match sense {
                RowSense::Le => lhs <= rhs + feas_tol,
                RowSense::Eq => (lhs - rhs).abs() <= feas_tol,
                RowSense::Ge => lhs >= rhs - feas_tol,
            }
        });
        let bounds_ok = x
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&lo, &hi))| v >= lo - feas_tol && v <= hi + feas_tol);
        rows_ok && bounds_ok
    }
}

/// A complete linear program.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    pub sense: Sense,
    pub objective: Vec<T>,
    pub constraints: ConstraintSet<T>,
}

impl<T: Real> LinearProgram<T> {
    pub fn new(sense: Sense, objective: Vec<T>, constraints: ConstraintSet<T>) -> Self {
        LinearProgram { sense, objective, constraints }
    }
}

/// Solver outcome classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver result. `objective_value`, `variable_values` and `active_rows`
/// carry information only when `status == Optimal`; otherwise they are zero
/// and empty respectively.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub objective_value: T,
    pub variable_values: Vec<T>,
    /// Constraint rows with absolute slack within the feasibility tolerance.
    pub active_rows: Vec<usize>,
}

impl<T: Real> LpSolution<T> {
    fn non_optimal(status: LpStatus) -> Self {
        LpSolution {
            status,
            objective_value: T::zero(),
            variable_values: Vec::new(),
            active_rows: Vec::new(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    /// Dimension mismatch or non-finite data in the program description.
    #[error("malformed linear program: {0}")]
    Shape(String),
    /// A pivot magnitude stayed below tolerance after a tableau rebuild.
    #[error("numerical breakdown: pivot below tolerance after tableau rebuild")]
    NumericalBreakdown,
}

/// Solve `lp` with the two-phase dense simplex. Deterministic: identical
/// inputs produce bitwise-identical solutions.
pub fn solve_lp<T: Real>(lp: &LinearProgram<T>, tol: &Tolerances<T>) -> Result<LpSolution<T>, LpError> {
    simplex::solve(lp, tol)
}
