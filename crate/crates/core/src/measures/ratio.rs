//! Slack-based ratio measures over the extended technology.
//!
//! Both measures optimise the ratio `((1/m)Σθ) / ((1/s)Σφ)` of mean input
//! contraction to mean output expansion, solved exactly as linear-fractional
//! programs. The minimising variant may admit many optimal projections
//! (whenever the numerator can reach zero); a secondary LP picks the one
//! with maximal total output expansion so results are reproducible. The
//! maximising variant searches facet by facet, pinning the projection onto
//! each supporting hyperplane in turn and keeping the best ratio.

use crate::data::Point;
use crate::facets::ExtendedTechnology;
use crate::lp::{
    solve_lp, solve_linear_fractional, AffineForm, ConstraintSet, LinearProgram, LpStatus, RowSense,
    Sense,
};
use crate::real::Real;

use super::{build_result, ratio_objective, require_strictly_positive, MeasureError, MeasureResult, Model};

fn facet_rows<T: Real>(exfa: &ExtendedTechnology<T>, dmu: &Point<T>) -> ConstraintSet<T> {
    let (m, s) = (dmu.num_inputs(), dmu.num_outputs());
    let mut cs = ConstraintSet::new(m + s);
    for i in 0..m {
        cs.set_bounds(i, T::zero(), T::one());
    }
    for r in 0..s {
        cs.set_bounds(m + r, T::one(), T::infinity());
    }
    for facet in exfa.facets() {
        let h = &facet.hyperplane;
        let mut row = vec![T::zero(); m + s];
        for i in 0..m {
            row[i] = -h.v[i] * dmu.x[i];
        }
        for r in 0..s {
            row[m + r] = h.u[r] * dmu.y[r];
        }
        cs.push_row(row, RowSense::Le, h.psi);
    }
    cs
}

fn ratio_forms<T: Real>(m: usize, s: usize) -> (AffineForm<T>, AffineForm<T>) {
    let mut num = vec![T::zero(); m + s];
    let mut den = vec![T::zero(); m + s];
    for i in 0..m {
        num[i] = T::one() / T::of(m as f64);
    }
    for r in 0..s {
        den[m + r] = T::one() / T::of(s as f64);
    }
    (AffineForm::new(num, T::zero()), AffineForm::new(den, T::zero()))
}

/// Minimum-ratio slack measure over the extended technology.
pub fn sbm_exfa<T: Real>(
    exfa: &ExtendedTechnology<T>,
    dmu: &Point<T>,
) -> Result<MeasureResult<T>, MeasureError> {
    require_strictly_positive(dmu)?;
    if !exfa.contains(dmu) {
        return Err(MeasureError::PointOutsideTechnology);
    }
    let (m, s) = (dmu.num_inputs(), dmu.num_outputs());
    let tol = exfa.tolerances();

    let cs = facet_rows(exfa, dmu);
    let (num, den) = ratio_forms(m, s);
    let primary = solve_linear_fractional(Sense::Minimize, &num, &den, &cs, tol)?;
    if primary.status != LpStatus::Optimal {
        return Err(MeasureError::Lp(crate::lp::LpError::NumericalBreakdown));
    }
    let rho = primary.objective_value;

    // Tie-break among ratio-optimal points: maximise total output expansion
    // subject to the ratio staying at its optimum.
    let mut tie = facet_rows(exfa, dmu);
    let mut ratio_row = vec![T::zero(); m + s];
    for i in 0..m {
        ratio_row[i] = T::one() / T::of(m as f64);
    }
    for r in 0..s {
        ratio_row[m + r] = -rho / T::of(s as f64);
    }
    tie.push_row(ratio_row, RowSense::Eq, T::zero());
    let mut objective = vec![T::zero(); m + s];
    for r in 0..s {
        objective[m + r] = T::one();
    }
    let secondary = solve_lp(&LinearProgram::new(Sense::Maximize, objective, tie), tol)?;
    let vars = if secondary.status == LpStatus::Optimal {
        secondary.variable_values
    } else {
        primary.variable_values
    };

    let theta = vars[..m].to_vec();
    let phi = vars[m..m + s].to_vec();
    let score = ratio_objective(&theta, &phi);
    let projection = Point::new(
        dmu.x.iter().zip(&theta).map(|(&x, &t)| x * t).collect(),
        dmu.y.iter().zip(&phi).map(|(&y, &f)| y * f).collect(),
    );
    let active_facet = exfa.active_facets(&projection).first().copied();
    Ok(build_result(Model::SbmExfa, score, theta, phi, dmu, active_facet, tol))
}

/// Maximum-ratio slack measure over the extended technology.
///
/// Maximising the ratio over the whole technology is degenerate (staying put
/// scores 1), so the projection is constrained to lie on the boundary: one
/// facet at a time is turned into an equality and the best ratio across
/// facets wins. Ties keep the lowest facet index.
pub fn max_sbm<T: Real>(
    exfa: &ExtendedTechnology<T>,
    dmu: &Point<T>,
) -> Result<MeasureResult<T>, MeasureError> {
    require_strictly_positive(dmu)?;
    if !exfa.contains(dmu) {
        return Err(MeasureError::PointOutsideTechnology);
    }
    let (m, s) = (dmu.num_inputs(), dmu.num_outputs());
    let tol = exfa.tolerances();
    let (num, den) = ratio_forms(m, s);

    let mut best: Option<(T, usize, Vec<T>)> = None;
    for k in 0..exfa.facets().len() {
        let mut cs = facet_rows(exfa, dmu);
        cs.senses[k] = RowSense::Eq;
        let sol = solve_linear_fractional(Sense::Maximize, &num, &den, &cs, tol)?;
        if sol.status != LpStatus::Optimal {
            continue;
        }
        if best.as_ref().is_none_or(|(b, _, _)| sol.objective_value > *b) {
            best = Some((sol.objective_value, k, sol.variable_values));
        }
    }
    let (_, facet, vars) = best.ok_or(MeasureError::NoFeasibleFacet)?;
    let theta = vars[..m].to_vec();
    let phi = vars[m..m + s].to_vec();
    let score = ratio_objective(&theta, &phi);
    Ok(build_result(Model::MaxSbm, score, theta, phi, dmu, Some(facet), tol))
}
