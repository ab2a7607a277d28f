//! Brute-force verifiers used by the test suites: exhaustive grid search on
//! the graph objective, bisection along single-coordinate rays, and an LP
//! existence check for free lunches. Slow by design — their value is that
//! they share no machinery with the solvers they certify beyond basic LP
//! feasibility.

use crate::data::Point;
use crate::facets::Hyperplane;
use crate::lp::{solve_lp, ConstraintSet, LinearProgram, LpStatus, RowSense, Sense};
use crate::measures::{graph_objective, CoordKind};
use crate::real::{Real, Tolerances};

/// Search box for [`grid_min_g`]: one inclusive range and step per factor
/// variable (inputs first, then outputs), plus a refinement schedule — after
/// each pass the box shrinks to ± one old step around the incumbent and the
/// steps divide by `shrink`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec<T> {
    pub ranges: Vec<(T, T)>,
    pub steps: Vec<T>,
    pub refinement_depth: usize,
    pub shrink: T,
}

impl<T: Real> GridSpec<T> {
    /// A spec with the default schedule: two refinement passes, each
    /// shrinking the steps a hundredfold.
    pub fn new(ranges: Vec<(T, T)>, steps: Vec<T>) -> Self {
        assert_eq!(ranges.len(), steps.len(), "one step per range");
        assert!(steps.iter().all(|&s| s > T::zero()), "steps must be positive");
        assert!(
            ranges.iter().all(|&(lo, hi)| lo.is_finite() && hi.is_finite() && lo <= hi),
            "ranges must be finite and ordered"
        );
        GridSpec { ranges, steps, refinement_depth: 2, shrink: T::of(100.0) }
    }

    /// Override the refinement schedule; `shrink` smaller than the default
    /// with more passes keeps the same final resolution at far fewer
    /// evaluations per pass, which matters when membership needs an LP.
    pub fn with_refinement(mut self, depth: usize, shrink: T) -> Self {
        assert!(shrink > T::one(), "shrink must exceed 1");
        self.refinement_depth = depth;
        self.shrink = shrink;
        self
    }
}

fn axis_values<T: Real>(lo: T, hi: T, step: T) -> Vec<T> {
    let guard = step * T::of(1e-9);
    let mut values = Vec::new();
    let mut k = 0usize;
    loop {
        let v = lo + T::of(k as f64) * step;
        if v > hi + guard {
            break;
        }
        values.push(v.min(hi));
        k += 1;
    }
    if values.last().is_none_or(|&last| last < hi - guard) {
        values.push(hi);
    }
    values
}

fn factor_point<T: Real>(dmu: &Point<T>, factors: &[T]) -> Point<T> {
    let m = dmu.num_inputs();
    Point::new(
        dmu.x.iter().zip(&factors[..m]).map(|(&x, &t)| x * t).collect(),
        dmu.y.iter().zip(&factors[m..]).map(|(&y, &f)| y * f).collect(),
    )
}

/// Exhaustive minimisation of the graph objective `(Σθ + Σ1/φ)/(m+s)` over
/// grid points whose scaled image `(θ∘x, φ∘y)` satisfies `membership`.
/// Returns the best value and its factors, or `None` when no grid point is
/// feasible. Deterministic: ties keep the first point in odometer order.
pub fn grid_min_g<T: Real>(
    membership: impl Fn(&Point<T>) -> bool,
    dmu: &Point<T>,
    spec: &GridSpec<T>,
) -> Option<(T, Vec<T>)> {
    let dim = spec.ranges.len();
    assert_eq!(dim, dmu.num_inputs() + dmu.num_outputs(), "one factor per coordinate");
    let m = dmu.num_inputs();

    let mut ranges = spec.ranges.clone();
    let mut steps = spec.steps.clone();
    let mut best: Option<(T, Vec<T>)> = None;
    for pass in 0..=spec.refinement_depth {
        if pass > 0 {
            let center = &best.as_ref()?.1;
            ranges = center
                .iter()
                .zip(&steps)
                .zip(&spec.ranges)
                .map(|((&c, &step), &(lo, hi))| ((c - step).max(lo), (c + step).min(hi)))
                .collect();
            steps = steps.iter().map(|&s| s / spec.shrink).collect();
        }
        let axes: Vec<Vec<T>> =
            ranges.iter().zip(&steps).map(|(&(lo, hi), &step)| axis_values(lo, hi, step)).collect();
        let mut idx = vec![0usize; dim];
        loop {
            let factors: Vec<T> = idx.iter().enumerate().map(|(v, &i)| axes[v][i]).collect();
            if membership(&factor_point(dmu, &factors)) {
                let value = graph_objective(&factors[..m], &factors[m..]);
                if best.as_ref().is_none_or(|(b, _)| value < *b) {
                    best = Some((value, factors));
                }
            }
            let mut v = 0;
            while v < dim {
                idx[v] += 1;
                if idx[v] < axes[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
            if v == dim {
                break;
            }
        }
    }
    best
}

/// Bisect the feasibility boundary along a single-coordinate ray: the least
/// contraction factor of one input, or the greatest expansion factor of one
/// output, keeping every other coordinate fixed. `membership` must hold at
/// the point itself; monotonicity along the ray comes from free
/// disposability of the technologies this verifies.
pub fn line_search_extreme<T: Real>(
    membership: impl Fn(&Point<T>) -> bool,
    dmu: &Point<T>,
    kind: CoordKind,
    index: usize,
) -> T {
    let tol = T::of(1e-10).max(T::epsilon() * T::of(16.0));
    let at = |factor: T| {
        let mut p = dmu.clone();
        match kind {
            CoordKind::Input => p.x[index] = dmu.x[index] * factor,
            CoordKind::Output => p.y[index] = dmu.y[index] * factor,
        }
        p
    };
    debug_assert!(membership(&at(T::one())), "the point itself must be a member");
    match kind {
        CoordKind::Input => {
            if membership(&at(T::zero())) {
                return T::zero();
            }
            let (mut lo, mut hi) = (T::zero(), T::one());
            while hi - lo > tol {
                let mid = (lo + hi) / T::of(2.0);
                if membership(&at(mid)) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        }
        CoordKind::Output => {
            let mut lo = T::one();
            let mut hi = T::of(2.0);
            while membership(&at(hi)) {
                lo = hi;
                hi = hi * T::of(2.0);
                if hi > T::of(1e15) {
                    return lo;
                }
            }
            while hi - lo > tol {
                let mid = (lo + hi) / T::of(2.0);
                if membership(&at(mid)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
    }
}

/// LP existence check for a free lunch: is there `y ≥ 0` with `Σy ≥ 1` such
/// that `(0, y)` satisfies every facet inequality?
///
/// The unit-sum normalisation rules out the trivial `y = 0`, at the price of
/// a fixed scale: a technology whose facet intercepts only admit free
/// lunches smaller than unit total output is reported as having none. The
/// implication `oracle ⇒ strict positive intercepts` holds unconditionally;
/// the converse needs intercepts large enough for a unit-sum witness, which
/// every bundled fixture satisfies.
pub fn free_lunch_lp_oracle<T: Real>(hyperplanes: &[Hyperplane<T>], tol: &Tolerances<T>) -> bool {
    let Some(first) = hyperplanes.first() else { return false };
    let s = first.u.len();
    let mut cs = ConstraintSet::new(s);
    cs.push_row(vec![T::one(); s], RowSense::Ge, T::one());
    for h in hyperplanes {
        cs.push_row(h.u.clone(), RowSense::Le, h.psi);
    }
    let lp = LinearProgram::new(Sense::Minimize, vec![T::zero(); s], cs);
    matches!(solve_lp(&lp, tol), Ok(sol) if sol.status == LpStatus::Optimal)
}
