//! Russell graph measure by cutting planes.
//!
//! `min (Σθ + Σ1/φ)/(m+s)` over membership of the projection is convex: the
//! only nonlinearity is `1/φ_r`, replaced by epigraph variables `t_r`
//! supported from below by tangent cuts `t ≥ 2/φ̂ − φ/φ̂²`. Every LP iterate
//! is feasible for the true program (membership rows are exact), so the
//! incumbent is the best iterate and the LP optimum is a lower bound; the
//! loop stops when they meet. A final sweep raises each φ_r to its
//! feasibility maximum given everything else — a no-op at a true optimum
//! (the objective strictly decreases in φ), but it pins near-converged
//! iterates exactly onto the frontier.

use crate::data::Point;
use crate::facets::ExtendedTechnology;
use crate::lp::{solve_lp, ConstraintSet, LinearProgram, LpError, LpStatus, RowSense, Sense};
use crate::real::Real;
use crate::technology::VrsTechnology;

use super::closest::phi_prime_all;
use super::{build_result, graph_objective, require_strictly_positive, MeasureError, MeasureResult, Model};

const MAX_CUT_ROUNDS: usize = 500;

enum Domain<'a, T: Real> {
    Vrs(&'a VrsTechnology<T>),
    Exfa(&'a ExtendedTechnology<T>),
}

/// Russell graph measure over the VRS technology.
pub fn rm_vrs<T: Real>(tech: &VrsTechnology<T>, dmu: &Point<T>) -> Result<MeasureResult<T>, MeasureError> {
    require_strictly_positive(dmu)?;
    if !tech.contains(dmu) {
        return Err(MeasureError::PointOutsideTechnology);
    }
    solve_rm(Domain::Vrs(tech), dmu, Model::RmVrs)
}

/// Russell graph measure over the extended technology.
pub fn rm_exfa<T: Real>(
    exfa: &ExtendedTechnology<T>,
    dmu: &Point<T>,
) -> Result<MeasureResult<T>, MeasureError> {
    require_strictly_positive(dmu)?;
    if !exfa.contains(dmu) {
        return Err(MeasureError::PointOutsideTechnology);
    }
    solve_rm(Domain::Exfa(exfa), dmu, Model::RmExfa)
}

fn solve_rm<T: Real>(domain: Domain<'_, T>, dmu: &Point<T>, model: Model) -> Result<MeasureResult<T>, MeasureError> {
    let (m, s) = (dmu.num_inputs(), dmu.num_outputs());
    let tol = match &domain {
        Domain::Vrs(t) => *t.tolerances(),
        Domain::Exfa(t) => *t.tolerances(),
    };
    let weight = T::one() / T::of((m + s) as f64);

    // Valid per-output expansion caps: facet-wise extremes over the extended
    // technology (any feasible θ ≤ 1 only tightens them), data maxima over
    // the envelopment form.
    let ub: Vec<T> = match &domain {
        Domain::Exfa(exfa) => phi_prime_all(exfa, dmu),
        Domain::Vrs(tech) => (0..s)
            .map(|r| {
                let best = (0..tech.dataset().len())
                    .map(|j| tech.dataset().output(j)[r])
                    .fold(T::neg_infinity(), T::max);
                (best / dmu.y[r]).max(T::one())
            })
            .collect(),
    };

    let n = match &domain {
        Domain::Vrs(tech) => tech.dataset().len(),
        Domain::Exfa(_) => 0,
    };
    let num_vars = m + s + s + n; // θ, φ, t, λ

    let mut base = ConstraintSet::new(num_vars);
    for i in 0..m {
        base.set_bounds(i, T::zero(), T::one());
    }
    for r in 0..s {
        base.set_bounds(m + r, T::one(), ub[r]);
        base.set_bounds(m + s + r, T::one() / ub[r], T::one());
    }
    match &domain {
        Domain::Exfa(exfa) => {
            for facet in exfa.facets() {
                let h = &facet.hyperplane;
                let mut row = vec![T::zero(); num_vars];
                for i in 0..m {
                    row[i] = -h.v[i] * dmu.x[i];
                }
                for r in 0..s {
                    row[m + r] = h.u[r] * dmu.y[r];
                }
                base.push_row(row, RowSense::Le, h.psi);
            }
        }
        Domain::Vrs(tech) => {
            let ds = tech.dataset();
            for i in 0..m {
                let mut row = vec![T::zero(); num_vars];
                row[i] = -dmu.x[i];
                for j in 0..n {
                    row[m + s + s + j] = ds.input(j)[i];
                }
                base.push_row(row, RowSense::Le, T::zero());
            }
            for r in 0..s {
                let mut row = vec![T::zero(); num_vars];
                row[m + r] = -dmu.y[r];
                for j in 0..n {
                    row[m + s + s + j] = ds.output(j)[r];
                }
                base.push_row(row, RowSense::Ge, T::zero());
            }
            let mut row = vec![T::zero(); num_vars];
            for j in 0..n {
                row[m + s + s + j] = T::one();
            }
            base.push_row(row, RowSense::Eq, T::one());
        }
    }

    let mut objective = vec![T::zero(); num_vars];
    for i in 0..m {
        objective[i] = weight;
    }
    for r in 0..s {
        objective[m + s + r] = weight;
    }

    let near = T::of(1e-12);
    let mut cut_points: Vec<Vec<T>> = (0..s)
        .map(|r| {
            if (ub[r] - T::one()).abs() <= near {
                vec![T::one()]
            } else {
                vec![T::one(), ub[r]]
            }
        })
        .collect();

    let mut best: Option<(T, Vec<T>, Vec<T>)> = None;
    for _ in 0..MAX_CUT_ROUNDS {
        let mut cs = base.clone();
        for (r, points) in cut_points.iter().enumerate() {
            for &phat in points {
                let mut row = vec![T::zero(); num_vars];
                row[m + r] = T::one() / (phat * phat);
                row[m + s + r] = T::one();
                cs.push_row(row, RowSense::Ge, T::of(2.0) / phat);
            }
        }
        let sol = solve_lp(&LinearProgram::new(Sense::Minimize, objective.clone(), cs), &tol)?;
        if sol.status != LpStatus::Optimal {
            // Membership of the assessed point makes this LP feasible and
            // its objective is bounded below by zero, so anything else is a
            // numerical failure.
            return Err(MeasureError::Lp(LpError::NumericalBreakdown));
        }
        let theta = sol.variable_values[..m].to_vec();
        let phi = sol.variable_values[m..m + s].to_vec();
        let value = graph_objective(&theta, &phi);
        if best.as_ref().is_none_or(|(b, _, _)| value < *b) {
            best = Some((value, theta, phi));
        }
        let incumbent = best.as_ref().expect("incumbent set above").0;
        if incumbent - sol.objective_value <= tol.rm_gap {
            break;
        }
        let mut added = false;
        for r in 0..s {
            let phat = sol.variable_values[m + r].max(T::one()).min(ub[r]);
            if cut_points[r].iter().all(|&p| (p - phat).abs() > near) {
                cut_points[r].push(phat);
                added = true;
            }
        }
        if !added {
            break;
        }
    }

    let (_, mut theta, mut phi) = best.expect("at least one cutting-plane round ran");
    sweep_outputs(&domain, dmu, &theta, &mut phi, ub.as_slice());
    sweep_inputs(&domain, dmu, &mut theta, &phi);
    let score = graph_objective(&theta, &phi);

    let projection = Point::new(
        dmu.x.iter().zip(&theta).map(|(&x, &t)| x * t).collect(),
        dmu.y.iter().zip(&phi).map(|(&y, &f)| y * f).collect(),
    );
    let active_facet = match &domain {
        Domain::Exfa(exfa) => exfa.active_facets(&projection).first().copied(),
        Domain::Vrs(_) => None,
    };
    Ok(build_result(model, score, theta, phi, dmu, active_facet, &tol))
}

/// Raise each φ_r in turn to its feasibility maximum holding θ and the other
/// φ fixed.
fn sweep_outputs<T: Real>(domain: &Domain<'_, T>, dmu: &Point<T>, theta: &[T], phi: &mut [T], ub: &[T]) {
    let (m, s) = (dmu.num_inputs(), dmu.num_outputs());
    match domain {
        Domain::Exfa(exfa) => {
            for r in 0..s {
                let point = Point::new(
                    dmu.x.iter().zip(theta).map(|(&x, &t)| x * t).collect(),
                    dmu.y.iter().zip(phi.iter()).map(|(&y, &f)| y * f).collect(),
                );
                let delta = exfa
                    .facets()
                    .iter()
                    .map(|f| f.hyperplane.slack(&point).max(T::zero()) / (f.hyperplane.u[r] * dmu.y[r]))
                    .fold(T::infinity(), T::min);
                phi[r] += delta;
            }
        }
        Domain::Vrs(tech) => {
            let ds = tech.dataset();
            let n = ds.len();
            let tol = tech.tolerances();
            for r in 0..s {
                let mut cs = ConstraintSet::new(n + 1);
                cs.set_bounds(n, T::one(), ub[r]);
                for i in 0..m {
                    let mut row: Vec<T> = (0..n).map(|j| ds.input(j)[i]).collect();
                    row.push(T::zero());
                    cs.push_row(row, RowSense::Le, theta[i] * dmu.x[i]);
                }
                for rr in 0..s {
                    let mut row: Vec<T> = (0..n).map(|j| ds.output(j)[rr]).collect();
                    if rr == r {
                        row.push(-dmu.y[r]);
                        cs.push_row(row, RowSense::Ge, T::zero());
                    } else {
                        row.push(T::zero());
                        cs.push_row(row, RowSense::Ge, phi[rr] * dmu.y[rr]);
                    }
                }
                let mut row = vec![T::one(); n];
                row.push(T::zero());
                cs.push_row(row, RowSense::Eq, T::one());
                let mut objective = vec![T::zero(); n + 1];
                objective[n] = T::one();
                if let Ok(sol) = solve_lp(&LinearProgram::new(Sense::Maximize, objective, cs), tol) {
                    if sol.status == LpStatus::Optimal && sol.variable_values[n] > phi[r] {
                        phi[r] = sol.variable_values[n];
                    }
                }
            }
        }
    }
}

/// Lower each θ_i in turn to its feasibility minimum holding φ and the other
/// θ fixed. Like the output sweep this strictly improves the objective when
/// it moves at all and is a no-op at a true optimum.
fn sweep_inputs<T: Real>(domain: &Domain<'_, T>, dmu: &Point<T>, theta: &mut [T], phi: &[T]) {
    let (m, s) = (dmu.num_inputs(), dmu.num_outputs());
    match domain {
        Domain::Exfa(exfa) => {
            for i in 0..m {
                let point = Point::new(
                    dmu.x.iter().zip(theta.iter()).map(|(&x, &t)| x * t).collect(),
                    dmu.y.iter().zip(phi).map(|(&y, &f)| y * f).collect(),
                );
                let delta = exfa
                    .facets()
                    .iter()
                    .map(|f| f.hyperplane.slack(&point).max(T::zero()) / (f.hyperplane.v[i] * dmu.x[i]))
                    .fold(T::infinity(), T::min);
                theta[i] = (theta[i] - delta).max(T::zero());
            }
        }
        Domain::Vrs(tech) => {
            let ds = tech.dataset();
            let n = ds.len();
            let tol = tech.tolerances();
            for i in 0..m {
                let mut cs = ConstraintSet::new(n + 1);
                cs.set_bounds(n, T::zero(), theta[i]);
                for ii in 0..m {
                    let mut row: Vec<T> = (0..n).map(|j| ds.input(j)[ii]).collect();
                    if ii == i {
                        row.push(-dmu.x[i]);
                        cs.push_row(row, RowSense::Le, T::zero());
                    } else {
                        row.push(T::zero());
                        cs.push_row(row, RowSense::Le, theta[ii] * dmu.x[ii]);
                    }
                }
                for r in 0..s {
                    let mut row: Vec<T> = (0..n).map(|j| ds.output(j)[r]).collect();
                    row.push(T::zero());
                    cs.push_row(row, RowSense::Ge, phi[r] * dmu.y[r]);
                }
                let mut row = vec![T::one(); n];
                row.push(T::zero());
                cs.push_row(row, RowSense::Eq, T::one());
                let mut objective = vec![T::zero(); n + 1];
                objective[n] = T::one();
                if let Ok(sol) = solve_lp(&LinearProgram::new(Sense::Minimize, objective, cs), tol) {
                    if sol.status == LpStatus::Optimal && sol.variable_values[n] < theta[i] {
                        theta[i] = sol.variable_values[n];
                    }
                }
            }
        }
    }
}
