//! Maximum-type Russell measure over the plain VRS technology.
//!
//! Without a facet catalogue the strongly efficient frontier is handled
//! combinatorially: it is exactly the union of convex hulls of *efficient
//! subsets* — sets of strongly efficient observations whose barycenter is
//! itself strongly efficient (a barycenter dominated with positive slack
//! would transfer that slack to every member, so the test is exact, and the
//! property is closed downwards which lets smaller subsets be pruned by
//! containment). Over one hull the objective `(Σθ + Σ1/φ)/(m+s)` is convex
//! in the combination weights, so its maximum sits at a vertex of the weight
//! polytope; vertices are enumerated from active-constraint bases. The work
//! grows combinatorially, hence the hard cap on the number of strongly
//! efficient observations.

use crate::data::Point;
use crate::linalg::solve_square;
use crate::real::Real;
use crate::technology::{EfficiencyStatus, VrsTechnology};

use super::{build_result, graph_objective, require_strictly_positive, MeasureError, MeasureResult, Model};

/// Largest strongly efficient set the face/vertex enumeration will accept.
pub const MAX_EFFICIENT_SET: usize = 12;

/// Maximum-type Russell measure over the VRS technology: the best graph
/// score among dominating points of the strongly efficient frontier.
pub fn max_rm_nonextended<T: Real>(
    tech: &VrsTechnology<T>,
    dmu: &Point<T>,
) -> Result<MeasureResult<T>, MeasureError> {
    require_strictly_positive(dmu)?;
    if !tech.contains(dmu) {
        return Err(MeasureError::PointOutsideTechnology);
    }
    let efficient = tech.strongly_efficient();
    if efficient.len() > MAX_EFFICIENT_SET {
        return Err(MeasureError::TooLarge { limit: MAX_EFFICIENT_SET });
    }

    let faces = maximal_efficient_faces(tech, &efficient);
    let (m, s) = (dmu.num_inputs(), dmu.num_outputs());
    let tol = tech.tolerances();

    let mut best: Option<(T, Vec<T>, Vec<T>)> = None;
    for face in &faces {
        for lambda in polytope_vertices(tech, face, dmu) {
            let theta: Vec<T> = (0..m)
                .map(|i| {
                    let combined: T =
                        face.iter().zip(&lambda).map(|(&j, &l)| l * tech.dataset().input(j)[i]).sum();
                    combined / dmu.x[i]
                })
                .collect();
            let phi: Vec<T> = (0..s)
                .map(|r| {
                    let combined: T =
                        face.iter().zip(&lambda).map(|(&j, &l)| l * tech.dataset().output(j)[r]).sum();
                    combined / dmu.y[r]
                })
                .collect();
            let value = graph_objective(&theta, &phi);
            if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
                best = Some((value, theta, phi));
            }
        }
    }

    // Every technology point is dominated by some strongly efficient point,
    // so at least one face polytope is nonempty; reaching the error would
    // mean a numerical failure in the vertex enumeration.
    let (score, theta, phi) = best.ok_or(MeasureError::NoFeasibleFacet)?;
    Ok(build_result(Model::MNonExtended, score, theta, phi, dmu, None, tol))
}

/// Inclusion-maximal subsets of the strongly efficient observations whose
/// convex hull stays strongly efficient, scanned largest-first so containment
/// pruning applies.
fn maximal_efficient_faces<T: Real>(tech: &VrsTechnology<T>, efficient: &[usize]) -> Vec<Vec<usize>> {
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for size in (1..=efficient.len()).rev() {
        for_each_combination(efficient, size, &mut |subset| {
            if faces.iter().any(|f| subset.iter().all(|j| f.contains(j))) {
                return;
            }
            if barycenter_strongly_efficient(tech, subset) {
                faces.push(subset.to_vec());
            }
        });
    }
    faces
}

fn barycenter_strongly_efficient<T: Real>(tech: &VrsTechnology<T>, subset: &[usize]) -> bool {
    let ds = tech.dataset();
    let (m, s) = (ds.num_inputs(), ds.num_outputs());
    let w = T::one() / T::of(subset.len() as f64);
    let x = (0..m)
        .map(|i| subset.iter().map(|&j| ds.input(j)[i]).sum::<T>() * w)
        .collect();
    let y = (0..s)
        .map(|r| subset.iter().map(|&j| ds.output(j)[r]).sum::<T>() * w)
        .collect();
    matches!(tech.classify(&Point::new(x, y)), Ok(EfficiencyStatus::StronglyEfficient))
}

/// Vertices of `{λ ≥ 0, Σλ = 1, combination dominates dmu}` over the face
/// members: the normalisation row is always active; every choice of
/// `|face|-1` further active constraints among the m+s domination rows and
/// the sign constraints defines a candidate basis.
fn polytope_vertices<T: Real>(tech: &VrsTechnology<T>, face: &[usize], dmu: &Point<T>) -> Vec<Vec<T>> {
    let ds = tech.dataset();
    let (m, s) = (dmu.num_inputs(), dmu.num_outputs());
    let k = face.len();
    let tol = tech.tolerances();

    // Candidate active constraints: 0..m inputs, m..m+s outputs, then sign
    // constraints λ_j = 0.
    let candidates: Vec<usize> = (0..m + s + k).collect();
    let mut vertices = Vec::new();
    for_each_combination(&candidates, k - 1, &mut |chosen| {
        let mut a = vec![vec![T::one(); k]];
        let mut b = vec![T::one()];
        for &c in chosen {
            if c < m {
                a.push(face.iter().map(|&j| ds.input(j)[c]).collect());
                b.push(dmu.x[c]);
            } else if c < m + s {
                let r = c - m;
                a.push(face.iter().map(|&j| ds.output(j)[r]).collect());
                b.push(dmu.y[r]);
            } else {
                let mut row = vec![T::zero(); k];
                row[c - m - s] = T::one();
                a.push(row);
                b.push(T::zero());
            }
        }
        let Some(lambda) = solve_square(&a, &b, tol.rank) else { return };
        if lambda.iter().any(|&l| l < -tol.feas) {
            return;
        }
        for i in 0..m {
            let combined: T = face.iter().zip(&lambda).map(|(&j, &l)| l * ds.input(j)[i]).sum();
            if combined > dmu.x[i] + tol.feas {
                return;
            }
        }
        for r in 0..s {
            let combined: T = face.iter().zip(&lambda).map(|(&j, &l)| l * ds.output(j)[r]).sum();
            if combined < dmu.y[r] - tol.feas {
                return;
            }
        }
        vertices.push(lambda);
    });
    vertices
}

/// Call `visit` on every `size`-element subsequence of `items`, in
/// lexicographic order.
fn for_each_combination(items: &[usize], size: usize, visit: &mut impl FnMut(&[usize])) {
    fn recurse(
        items: &[usize],
        size: usize,
        start: usize,
        current: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if current.len() == size {
            visit(current);
            return;
        }
        let remaining = size - current.len();
        for i in start..=items.len().saturating_sub(remaining) {
            current.push(items[i]);
            recurse(items, size, i + 1, current, visit);
            current.pop();
        }
    }
    if size <= items.len() {
        recurse(items, size, 0, &mut Vec::new(), visit);
    }
}
