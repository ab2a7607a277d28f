//! Full-dimensional efficient facets (FDEFs) of the VRS technology and the
//! facet-extended technology they span.
//!
//! An FDEF is a maximal-dimension efficient face: it is supported by a
//! hyperplane `−v·x + u·y = ψ` with strictly positive `v, u` (normalised to
//! `Σv + Σu = 1`) that touches at least `m+s` affinely independent observed
//! DMUs and keeps every observation on or below it. The extended technology
//! replaces the envelopment form by the intersection of the facet
//! half-spaces over the nonnegative orthant, which extends each facet beyond
//! its convex-hull footprint.

use thiserror::Error;

use crate::data::{Dataset, Point};
use crate::linalg::solve_square;
use crate::lp::{solve_lp, ConstraintSet, LinearProgram, LpStatus, RowSense, Sense};
use crate::real::{Real, Tolerances};
use crate::technology::VrsTechnology;

/// Supporting hyperplane `−v·x + u·y = ψ` with `v, u > 0` componentwise and
/// `Σv + Σu = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane<T> {
    pub v: Vec<T>,
    pub u: Vec<T>,
    pub psi: T,
}

impl<T: Real> Hyperplane<T> {
    pub fn num_inputs(&self) -> usize {
        self.v.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.u.len()
    }

    /// The functional `−v·x + u·y` at `p`; membership of the half-space is
    /// `evaluate(p) ≤ psi`.
    pub fn evaluate(&self, p: &Point<T>) -> T {
        let vx: T = self.v.iter().zip(&p.x).map(|(&v, &x)| v * x).sum();
        let uy: T = self.u.iter().zip(&p.y).map(|(&u, &y)| u * y).sum();
        uy - vx
    }

    /// Nonnegative inside the half-space: `psi − evaluate(p)`.
    pub fn slack(&self, p: &Point<T>) -> T {
        self.psi - self.evaluate(p)
    }

    /// Rescale so that `Σv + Σu = 1` (the coefficient sign pattern and the
    /// half-space are unchanged).
    pub fn normalized(mut self) -> Self {
        let total: T = self.v.iter().chain(&self.u).copied().sum();
        for c in self.v.iter_mut().chain(self.u.iter_mut()) {
            *c /= total;
        }
        self.psi /= total;
        self
    }

    /// Lexicographic ordering key: the functional coefficients as applied to
    /// `(x, y)`, i.e. `(−v, u, ψ)`.
    fn functional_key(&self) -> Vec<T> {
        let mut key: Vec<T> = self.v.iter().map(|&v| -v).collect();
        key.extend_from_slice(&self.u);
        key.push(self.psi);
        key
    }

    /// Dedup key: coefficients rounded to 9 decimals.
    fn rounded_key(&self) -> Vec<i64> {
        let scale = T::of(1e9);
        self.v
            .iter()
            .chain(&self.u)
            .chain(std::iter::once(&self.psi))
            .map(|&c| (c * scale).round().to_f64().expect("rounded coefficient fits f64") as i64)
            .collect()
    }
}

/// An FDEF: its supporting hyperplane plus the indices of every observed DMU
/// lying on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet<T> {
    pub hyperplane: Hyperplane<T>,
    pub members: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FacetError {
    #[error("no full-dimensional efficient facet exists")]
    NoFdefExists,
    #[error("malformed facet description: {0}")]
    Malformed(String),
}

/// Solve for the unique normalised hyperplane through exactly `m+s` points.
/// Returns `None` when the points are affinely dependent (singular system)
/// or the solved coefficients are not strictly positive.
pub fn fit_hyperplane<T: Real>(points: &[Point<T>], tol: &Tolerances<T>) -> Option<Hyperplane<T>> {
    let first = points.first()?;
    let (m, s) = (first.num_inputs(), first.num_outputs());
    if points.len() != m + s || points.iter().any(|p| p.num_inputs() != m || p.num_outputs() != s) {
        return None;
    }
    let dim = m + s + 1;
    let mut a: Vec<Vec<T>> = Vec::with_capacity(dim);
    let mut b = vec![T::zero(); dim];
    for p in points {
        let mut row: Vec<T> = p.x.iter().map(|&x| -x).collect();
        row.extend(p.y.iter().copied());
        row.push(-T::one());
        a.push(row);
    }
    let mut norm_row = vec![T::one(); dim];
    norm_row[dim - 1] = T::zero();
    a.push(norm_row);
    b[dim - 1] = T::one();

    let w = solve_square(&a, &b, tol.rank)?;
    let (v, rest) = w.split_at(m);
    let (u, psi) = rest.split_at(s);
    if v.iter().chain(u).any(|&c| c <= tol.pos) {
        return None;
    }
    Some(Hyperplane { v: v.to_vec(), u: u.to_vec(), psi: psi[0] })
}

/// Enumerate all FDEFs of `tech`: fit a hyperplane through every
/// `(m+s)`-subset of strongly efficient DMUs, keep those that support the
/// whole dataset, deduplicate, and sort by the hyperplane functional
/// `(−v, u, ψ)` ascending.
pub fn enumerate_fdefs<T: Real>(tech: &VrsTechnology<T>) -> Result<Vec<Facet<T>>, FacetError> {
    let ds = tech.dataset();
    let tol = tech.tolerances();
    let (m, s) = (ds.num_inputs(), ds.num_outputs());
    let dim = m + s;
    let efficient = tech.strongly_efficient();

    let mut facets: Vec<Facet<T>> = Vec::new();
    let mut seen: Vec<Vec<i64>> = Vec::new();
    let mut subset = Vec::with_capacity(dim);
    enumerate_subsets(&efficient, dim, &mut subset, &mut |chosen| {
        let points: Vec<Point<T>> = chosen.iter().map(|&j| ds.point(j)).collect();
        let Some(hyperplane) = fit_hyperplane(&points, tol) else {
            return;
        };
        let supports = (0..ds.len())
            .all(|j| hyperplane.slack(&ds.point(j)) >= -tol.feas);
        if !supports {
            return;
        }
        let key = hyperplane.rounded_key();
        if seen.contains(&key) {
            return;
        }
        seen.push(key);
        let members: Vec<usize> = (0..ds.len())
            .filter(|&j| hyperplane.slack(&ds.point(j)).abs() <= tol.feas)
            .collect();
        facets.push(Facet { hyperplane, members });
    });

    if facets.is_empty() {
        return Err(FacetError::NoFdefExists);
    }
    facets.sort_by(|a, b| {
        let ka = a.hyperplane.functional_key();
        let kb = b.hyperplane.functional_key();
        ka.partial_cmp(&kb).expect("facet keys contain no NaN")
    });
    Ok(facets)
}

fn enumerate_subsets<F: FnMut(&[usize])>(
    pool: &[usize],
    size: usize,
    current: &mut Vec<usize>,
    visit: &mut F,
) {
    if current.len() == size {
        visit(current);
        return;
    }
    let needed = size - current.len();
    let start = current.len();
    // Remaining choices come from the pool suffix after the last chosen item.
    let from = current
        .last()
        .map(|&last| pool.iter().position(|&p| p == last).unwrap() + 1)
        .unwrap_or(0);
    for idx in from..pool.len() {
        if pool.len() - idx < needed {
            break;
        }
        current.push(pool[idx]);
        enumerate_subsets(pool, size, current, visit);
        current.truncate(start);
    }
}

/// Verdict and evidence of the free-lunch check on the extended technology.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeLunchReport<T> {
    /// True iff some nonzero output bundle is reachable at zero input, i.e.
    /// iff every facet intercept is strictly positive.
    pub allows_free_lunch: bool,
    /// Facet intercepts `ψ^k` in facet order.
    pub intercepts: Vec<T>,
    /// Canonical witness `(0, y)` maximising `Σy` when a free lunch exists.
    pub witness: Option<Point<T>>,
}

/// Free-lunch check on a bare list of hyperplanes (e.g. facets loaded from a
/// file, with no dataset attached).
pub fn detect_free_lunch_hyperplanes<T: Real>(
    hyperplanes: &[Hyperplane<T>],
    tol: &Tolerances<T>,
) -> FreeLunchReport<T> {
    let intercepts: Vec<T> = hyperplanes.iter().map(|h| h.psi).collect();
    let allows = !intercepts.is_empty() && intercepts.iter().all(|&psi| psi > T::zero());
    let witness = if allows {
        let m = hyperplanes[0].num_inputs();
        let s = hyperplanes[0].num_outputs();
        let mut cs = ConstraintSet::new(s);
        for h in hyperplanes {
            cs.push_row(h.u.clone(), RowSense::Le, h.psi);
        }
        let objective = vec![T::one(); s];
        let sol = solve_lp(&LinearProgram::new(Sense::Maximize, objective, cs), tol)
            .expect("free-lunch witness LP is well-posed");
        debug_assert_eq!(sol.status, LpStatus::Optimal);
        Some(Point::new(vec![T::zero(); m], sol.variable_values))
    } else {
        None
    };
    FreeLunchReport { allows_free_lunch: allows, intercepts, witness }
}

/// The facet-extended technology: the nonnegative points satisfying every
/// facet inequality `−v^k·x + u^k·y ≤ ψ^k`.
#[derive(Debug, Clone)]
pub struct ExtendedTechnology<T> {
    dataset: Dataset<T>,
    facets: Vec<Facet<T>>,
    tol: Tolerances<T>,
}

/// Enumerate the FDEFs of `tech` and extend them into the facet-defined
/// technology. Fails when no FDEF exists.
pub fn build_exfa<T: Real>(tech: &VrsTechnology<T>) -> Result<ExtendedTechnology<T>, FacetError> {
    let facets = enumerate_fdefs(tech)?;
    Ok(ExtendedTechnology {
        dataset: tech.dataset().clone(),
        facets,
        tol: *tech.tolerances(),
    })
}

impl<T: Real> ExtendedTechnology<T> {
    /// Assemble an extended technology from externally supplied facets
    /// (hyperplanes are re-normalised; member lists are informational and
    /// may be empty). The facet order is preserved.
    pub fn from_parts(
        dataset: Dataset<T>,
        facets: Vec<Facet<T>>,
        tol: Tolerances<T>,
    ) -> Result<Self, FacetError> {
        if facets.is_empty() {
            return Err(FacetError::Malformed("no facets supplied".into()));
        }
        let (m, s) = (dataset.num_inputs(), dataset.num_outputs());
        let facets: Vec<Facet<T>> = facets
            .into_iter()
            .map(|f| {
                if f.hyperplane.num_inputs() != m || f.hyperplane.num_outputs() != s {
                    return Err(FacetError::Malformed(format!(
                        "facet has {}/{} coefficients for {m} inputs and {s} outputs",
                        f.hyperplane.num_inputs(),
                        f.hyperplane.num_outputs()
                    )));
                }
                if f.hyperplane.v.iter().chain(&f.hyperplane.u).any(|&c| c <= T::zero()) {
                    return Err(FacetError::Malformed("facet coefficients must be strictly positive".into()));
                }
                if f.members.iter().any(|&j| j >= dataset.len()) {
                    return Err(FacetError::Malformed("facet member index out of range".into()));
                }
                Ok(Facet { hyperplane: f.hyperplane.normalized(), members: f.members })
            })
            .collect::<Result<_, _>>()?;
        Ok(ExtendedTechnology { dataset, facets, tol })
    }

    pub fn dataset(&self) -> &Dataset<T> {
        &self.dataset
    }

    pub fn facets(&self) -> &[Facet<T>] {
        &self.facets
    }

    pub fn hyperplanes(&self) -> Vec<Hyperplane<T>> {
        self.facets.iter().map(|f| f.hyperplane.clone()).collect()
    }

    pub fn tolerances(&self) -> &Tolerances<T> {
        &self.tol
    }

    pub fn num_inputs(&self) -> usize {
        self.dataset.num_inputs()
    }

    pub fn num_outputs(&self) -> usize {
        self.dataset.num_outputs()
    }

    /// Half-space membership: nonnegativity and every facet inequality
    /// within the feasibility tolerance.
    pub fn contains(&self, p: &Point<T>) -> bool {
        let nonneg = p.x.iter().chain(&p.y).all(|&c| c >= -self.tol.feas);
        nonneg && self.facets.iter().all(|f| f.hyperplane.slack(p) >= -self.tol.feas)
    }

    /// Envelopment-form membership: for every facet, a sign-free intensity
    /// vector over that facet's member DMUs (summing to one) weakly
    /// dominates `p`. Intensities must be allowed to go negative: the facet
    /// extension reaches beyond the members' convex hull, so points such as
    /// the free-lunch region are expressed by affine, not convex,
    /// combinations. Facets with no recorded members are skipped.
    pub fn contains_envelopment(&self, p: &Point<T>) -> bool {
        let nonneg = p.x.iter().chain(&p.y).all(|&c| c >= -self.tol.feas);
        if !nonneg {
            return false;
        }
        self.facets.iter().filter(|f| !f.members.is_empty()).all(|facet| {
            let k = facet.members.len();
            let (m, s) = (self.num_inputs(), self.num_outputs());
            let mut cs = ConstraintSet::new(k);
            for j in 0..k {
                cs.set_bounds(j, T::neg_infinity(), T::infinity());
            }
            for i in 0..m {
                let row: Vec<T> = facet.members.iter().map(|&j| self.dataset.input(j)[i]).collect();
                cs.push_row(row, RowSense::Le, p.x[i]);
            }
            for r in 0..s {
                let row: Vec<T> = facet.members.iter().map(|&j| self.dataset.output(j)[r]).collect();
                cs.push_row(row, RowSense::Ge, p.y[r]);
            }
            cs.push_row(vec![T::one(); k], RowSense::Eq, T::one());
            let lp = LinearProgram::new(Sense::Minimize, vec![T::zero(); k], cs);
            matches!(solve_lp(&lp, &self.tol).map(|sol| sol.status), Ok(LpStatus::Optimal))
        })
    }

    /// `ψ^k − (−v^k·x + u^k·y)` per facet; nonnegative (within tolerance)
    /// exactly on members of the extended technology.
    pub fn facet_slacks(&self, p: &Point<T>) -> Vec<T> {
        self.facets.iter().map(|f| f.hyperplane.slack(p)).collect()
    }

    /// Facet indices active at `p` (absolute slack within the feasibility
    /// tolerance), ascending.
    pub fn active_facets(&self, p: &Point<T>) -> Vec<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.hyperplane.slack(p).abs() <= self.tol.feas)
            .map(|(k, _)| k)
            .collect()
    }

    /// Free-lunch check: positive intercepts on every facet open a nonzero
    /// output bundle at zero input.
    pub fn detect_free_lunch(&self) -> FreeLunchReport<T> {
        detect_free_lunch_hyperplanes(&self.hyperplanes(), &self.tol)
    }
}
