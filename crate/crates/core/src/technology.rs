//! Variable-returns-to-scale production possibility set built from observed
//! DMUs: convex combinations of the observations plus free disposability of
//! inputs and outputs, restricted to the nonnegative orthant.

use thiserror::Error;

use crate::data::{Dataset, Point};
use crate::lp::{solve_lp, ConstraintSet, LinearProgram, LpStatus, RowSense, Sense};
use crate::real::{Real, Tolerances};

/// Frontier classification of a technology member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfficiencyStatus {
    /// No feasible improvement in any coordinate (Pareto–Koopmans).
    StronglyEfficient,
    /// No simultaneous uniform improvement of all coordinates, but some
    /// coordinate-wise slack remains.
    WeaklyEfficient,
    /// A uniform improvement of all coordinates is feasible.
    Inefficient,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TechnologyError {
    #[error("point lies outside the technology")]
    PointOutsideTechnology,
}

/// The VRS technology over a dataset.
#[derive(Debug, Clone)]
pub struct VrsTechnology<T> {
    dataset: Dataset<T>,
    tol: Tolerances<T>,
}

/// Wrap a validated dataset as a VRS technology with default tolerances.
/// Strict positivity of the data is already enforced by [`Dataset::new`].
pub fn build_vrs<T: Real>(dataset: Dataset<T>) -> VrsTechnology<T> {
    VrsTechnology::new(dataset, T::tolerances())
}

impl<T: Real> VrsTechnology<T> {
    pub fn new(dataset: Dataset<T>, tol: Tolerances<T>) -> Self {
        VrsTechnology { dataset, tol }
    }

    pub fn dataset(&self) -> &Dataset<T> {
        &self.dataset
    }

    pub fn tolerances(&self) -> &Tolerances<T> {
        &self.tol
    }

    /// Envelopment rows `Σλ·x_j {≤} p.x`, `Σλ·y_j {≥} p.y`, `Σλ = 1` over
    /// intensity variables `λ ≥ 0`, shared by the membership and
    /// classification programs. Extra variables may be appended by callers;
    /// `extra` columns are left zero.
    fn envelopment_rows(&self, p: &Point<T>, extra: usize) -> ConstraintSet<T> {
        let ds = &self.dataset;
        let (n, m, s) = (ds.len(), ds.num_inputs(), ds.num_outputs());
        let mut cs = ConstraintSet::new(n + extra);
        for i in 0..m {
            let mut row = vec![T::zero(); n + extra];
            for j in 0..n {
                row[j] = ds.input(j)[i];
            }
            cs.push_row(row, RowSense::Le, p.x[i]);
        }
        for r in 0..s {
            let mut row = vec![T::zero(); n + extra];
            for j in 0..n {
                row[j] = ds.output(j)[r];
            }
            cs.push_row(row, RowSense::Ge, p.y[r]);
        }
        let mut convexity = vec![T::zero(); n + extra];
        for c in convexity.iter_mut().take(n) {
            *c = T::one();
        }
        cs.push_row(convexity, RowSense::Eq, T::one());
        cs
    }

    /// Membership test by LP feasibility of the envelopment form.
    pub fn contains(&self, p: &Point<T>) -> bool {
        assert_eq!(p.num_inputs(), self.dataset.num_inputs(), "input dimension mismatch");
        assert_eq!(p.num_outputs(), self.dataset.num_outputs(), "output dimension mismatch");
        if !p.is_nonnegative() {
            return false;
        }
        let cs = self.envelopment_rows(p, 0);
        let objective = vec![T::zero(); cs.num_vars()];
        let lp = LinearProgram::new(Sense::Minimize, objective, cs);
        matches!(
            solve_lp(&lp, &self.tol).map(|sol| sol.status),
            Ok(LpStatus::Optimal)
        )
    }

    /// Frontier classification of a member point.
    ///
    /// Strong efficiency is the additive test (maximal total slack ≤ the
    /// feasibility tolerance); weak efficiency is the uniform-improvement
    /// test (maximal simultaneous improvement ≤ the feasibility tolerance).
    pub fn classify(&self, p: &Point<T>) -> Result<EfficiencyStatus, TechnologyError> {
        if !self.contains(p) {
            return Err(TechnologyError::PointOutsideTechnology);
        }
        let ds = &self.dataset;
        let (n, m, s) = (ds.len(), ds.num_inputs(), ds.num_outputs());

        // Additive test: max Σ slack over Σλx_j + s⁻ = x, Σλy_j − s⁺ = y.
        let mut cs = self.envelopment_rows(p, m + s);
        for i in 0..m {
            cs.senses[i] = RowSense::Eq;
            cs.rows[i][n + i] = T::one();
        }
        for r in 0..s {
            cs.senses[m + r] = RowSense::Eq;
            cs.rows[m + r][n + m + r] = -T::one();
        }
        let mut objective = vec![T::zero(); n + m + s];
        for c in objective.iter_mut().skip(n) {
            *c = T::one();
        }
        let additive = solve_lp(&LinearProgram::new(Sense::Maximize, objective, cs), &self.tol)
            .expect("additive classification LP is well-posed");
        debug_assert_eq!(additive.status, LpStatus::Optimal);
        if additive.objective_value <= self.tol.feas {
            return Ok(EfficiencyStatus::StronglyEfficient);
        }

        // Uniform-improvement test: max t over Σλx_j + t·1 ≤ x,
        // Σλy_j − t·1 ≥ y.
        let mut cs = self.envelopment_rows(p, 1);
        for i in 0..m {
            cs.rows[i][n] = T::one();
        }
        for r in 0..s {
            cs.rows[m + r][n] = -T::one();
        }
        let mut objective = vec![T::zero(); n + 1];
        objective[n] = T::one();
        let uniform = solve_lp(&LinearProgram::new(Sense::Maximize, objective, cs), &self.tol)
            .expect("uniform classification LP is well-posed");
        debug_assert_eq!(uniform.status, LpStatus::Optimal);
        if uniform.objective_value <= self.tol.feas {
            Ok(EfficiencyStatus::WeaklyEfficient)
        } else {
            Ok(EfficiencyStatus::Inefficient)
        }
    }

    /// Indices of strongly efficient DMUs, ascending.
    pub fn strongly_efficient(&self) -> Vec<usize> {
        (0..self.dataset.len())
            .filter(|&j| {
                self.classify(&self.dataset.point(j))
                    .map(|st| st == EfficiencyStatus::StronglyEfficient)
                    .unwrap_or(false)
            })
            .collect()
    }
}
