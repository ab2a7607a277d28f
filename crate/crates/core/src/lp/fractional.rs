//! Linear-fractional programming via the Charnes–Cooper homogenization.
//!
//! `opt (c·z + c0) / (d·z + d0)` over a polyhedron with `d·z + d0 > 0`
//! becomes an LP in `(w, t)` with `w = t·z`, the denominator pinned to 1 and
//! `t` kept strictly positive by a tiny lower bound; the optimum
//! de-homogenizes as `z = w / t`.

use super::{ConstraintSet, LinearProgram, LpError, LpSolution, LpStatus, RowSense, Sense};
use crate::real::{Real, Tolerances};

/// Affine expression `coefficients · z + constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineForm<T> {
    pub coefficients: Vec<T>,
    pub constant: T,
}

impl<T: Real> AffineForm<T> {
    pub fn new(coefficients: Vec<T>, constant: T) -> Self {
        AffineForm { coefficients, constant }
    }

    pub fn eval(&self, z: &[T]) -> T {
        self.coefficients.iter().zip(z).map(|(&c, &v)| c * v).sum::<T>() + self.constant
    }
}

/// Optimise `numerator / denominator` over `constraints`. The denominator
/// must be strictly positive on the feasible region (the caller guarantees
/// this; the measures in this crate use denominators bounded below by 1).
///
/// Infeasible and unbounded outcomes pass through in the status. For an
/// optimal outcome, `variable_values` hold the de-homogenized point,
/// `objective_value` the ratio recomputed at that point, and `active_rows`
/// the tight rows of `constraints` at that point.
pub fn solve_linear_fractional<T: Real>(
    sense: Sense,
    numerator: &AffineForm<T>,
    denominator: &AffineForm<T>,
    constraints: &ConstraintSet<T>,
    tol: &Tolerances<T>,
) -> Result<LpSolution<T>, LpError> {
    let n = constraints.num_vars();
    if numerator.coefficients.len() != n || denominator.coefficients.len() != n {
        return Err(LpError::Shape(format!(
            "fractional objective over {}/{} coefficients for {} variables",
            numerator.coefficients.len(),
            denominator.coefficients.len(),
            n
        )));
    }

    // Variables: w (free, n of them) then t.
    let mut hom = ConstraintSet::new(n + 1);
    for j in 0..n {
        hom.set_bounds(j, T::neg_infinity(), T::infinity());
    }
    hom.set_bounds(n, tol.fractional_floor, T::infinity());

    let mut denom_row = denominator.coefficients.clone();
    denom_row.push(denominator.constant);
    hom.push_row(denom_row, RowSense::Eq, T::one());

    for (i, row) in constraints.rows.iter().enumerate() {
        let mut hom_row = row.clone();
        hom_row.push(-constraints.rhs[i]);
        hom.push_row(hom_row, constraints.senses[i], T::zero());
    }
    for j in 0..n {
        let lo = constraints.lower[j];
        if lo.is_finite() {
            let mut row = vec![T::zero(); n + 1];
            row[j] = T::one();
            row[n] = -lo;
            hom.push_row(row, RowSense::Ge, T::zero());
        }
        let hi = constraints.upper[j];
        if hi.is_finite() {
            let mut row = vec![T::zero(); n + 1];
            row[j] = T::one();
            row[n] = -hi;
            hom.push_row(row, RowSense::Le, T::zero());
        }
    }

    let mut objective = numerator.coefficients.clone();
    objective.push(numerator.constant);
    let lp = LinearProgram::new(sense, objective, hom);
    let hom_solution = super::solve_lp(&lp, tol)?;
    if hom_solution.status != LpStatus::Optimal {
        return Ok(LpSolution::non_optimal(hom_solution.status));
    }

    let t = hom_solution.variable_values[n];
    let z: Vec<T> = hom_solution.variable_values[..n].iter().map(|&w| w / t).collect();
    let objective_value = numerator.eval(&z) / denominator.eval(&z);
    let active_rows = constraints.active_rows(&z, tol.feas);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value,
        variable_values: z,
        active_rows,
    })
}
