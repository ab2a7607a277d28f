//! Efficiency measures.
//!
//! Classic orientation (distance to the frontier is minimised):
//! * [`rm_vrs`] / [`rm_exfa`] — Russell graph measure over the VRS or
//!   extended technology (convex program, solved by cutting planes).
//! * [`sbm_exfa`] — slacks-based ratio measure over the extended technology.
//!
//! Closest-target orientation (the measure is maximised over the strong
//! frontier, so the projection is the nearest strongly efficient target):
//! * [`max_rm`] — maximal Russell measure over the extended technology, in
//!   closed form from the single-coordinate extremes.
//! * [`max_sbm`] — maximal ratio measure over the extended technology.
//! * [`max_rm_nonextended`] — maximal Russell measure over the plain VRS
//!   frontier (kept for comparison; it fails strong monotonicity, which the
//!   dominance audit demonstrates).

mod closest;
mod faces;
mod ratio;
mod russell;

pub use closest::{d_minus, d_plus, max_rm, phi_prime, theta_prime};
pub use faces::max_rm_nonextended;
pub use ratio::{max_sbm, sbm_exfa};
pub use russell::{rm_exfa, rm_vrs};

use thiserror::Error;

use crate::data::Point;
use crate::lp::LpError;
use crate::real::{Real, Tolerances};

/// Which measure produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Model {
    /// Russell graph measure over the VRS technology.
    RmVrs,
    /// Russell graph measure over the extended technology.
    RmExfa,
    /// Slacks-based ratio measure over the extended technology.
    SbmExfa,
    /// Maximal ratio measure over the extended technology.
    MaxSbm,
    /// Maximal Russell measure over the extended technology.
    MaxRm,
    /// Maximal Russell measure over the plain VRS frontier.
    MNonExtended,
}

impl Model {
    pub const ALL: [Model; 6] = [
        Model::RmVrs,
        Model::RmExfa,
        Model::SbmExfa,
        Model::MaxSbm,
        Model::MaxRm,
        Model::MNonExtended,
    ];

    /// Stable machine-facing name (CLI flag value, JSON field).
    pub fn flag(self) -> &'static str {
        match self {
            Model::RmVrs => "rm",
            Model::RmExfa => "rm-exfa",
            Model::SbmExfa => "sbm-exfa",
            Model::MaxSbm => "max-sbm",
            Model::MaxRm => "max-rm",
            Model::MNonExtended => "m-nonextended",
        }
    }

    /// Human-facing label used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            Model::RmVrs => "RM(P)",
            Model::RmExfa => "RM",
            Model::SbmExfa => "SBM",
            Model::MaxSbm => "max SBM",
            Model::MaxRm => "max RM",
            Model::MNonExtended => "M",
        }
    }

    pub fn from_flag(flag: &str) -> Option<Model> {
        Model::ALL.into_iter().find(|m| m.flag() == flag)
    }
}

/// Coordinate family of an improvement item.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordKind {
    Input,
    Output,
}

/// One coordinate the DMU must change to reach its projection.
#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementItem<T> {
    pub kind: CoordKind,
    pub index: usize,
    pub from: T,
    pub to: T,
}

/// A scored DMU: the measure value, the per-coordinate contraction /
/// expansion factors, the frontier target they produce, the lowest-index
/// facet active at the target (extended-technology models only), and the
/// coordinates that actually change.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureResult<T> {
    pub model: Model,
    pub score: T,
    pub theta: Vec<T>,
    pub phi: Vec<T>,
    pub projection: Point<T>,
    pub active_facet: Option<usize>,
    pub improvement_items: Vec<ImprovementItem<T>>,
}

/// Which side of the maximal Russell measure attains the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Input,
    Output,
}

/// Maximal Russell measure result with its closed-form ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxRmResult<T> {
    pub result: MeasureResult<T>,
    /// Per-input single-coordinate contraction extremes θ′.
    pub theta_prime: Vec<T>,
    /// Per-output single-coordinate expansion extremes φ′.
    pub phi_prime: Vec<T>,
    /// `1 − max_i θ′_i`.
    pub d_minus: T,
    /// `min_r φ′_r − 1`.
    pub d_plus: T,
    /// Winning side (ties go to the output side).
    pub side: Side,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeasureError {
    #[error("point lies outside the technology")]
    PointOutsideTechnology,
    #[error("point must be strictly positive")]
    NotStrictlyPositive,
    #[error("instance too large for vertex enumeration (limit {limit})")]
    TooLarge { limit: usize },
    #[error("no facet-restricted subproblem is feasible")]
    NoFeasibleFacet,
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Russell graph objective `(Σθ + Σ(1/φ)) / (m+s)`: strictly increasing in
/// every θ_i, strictly decreasing in every φ_r.
pub fn graph_objective<T: Real>(theta: &[T], phi: &[T]) -> T {
    let sum = theta.iter().copied().sum::<T>()
        + phi.iter().map(|&f| T::one() / f).sum::<T>();
    sum / T::of((theta.len() + phi.len()) as f64)
}

/// Ratio objective `((1/m)Σθ) / ((1/s)Σφ)`.
pub fn ratio_objective<T: Real>(theta: &[T], phi: &[T]) -> T {
    let num = theta.iter().copied().sum::<T>() / T::of(theta.len() as f64);
    let den = phi.iter().copied().sum::<T>() / T::of(phi.len() as f64);
    num / den
}

pub(crate) fn require_strictly_positive<T: Real>(dmu: &Point<T>) -> Result<(), MeasureError> {
    if dmu.is_strictly_positive() {
        Ok(())
    } else {
        Err(MeasureError::NotStrictlyPositive)
    }
}

/// Assemble a [`MeasureResult`] from factors: the projection is
/// `(θ∘x, φ∘y)` and an improvement item is any coordinate moved by more
/// than the relative threshold.
pub(crate) fn build_result<T: Real>(
    model: Model,
    score: T,
    theta: Vec<T>,
    phi: Vec<T>,
    dmu: &Point<T>,
    active_facet: Option<usize>,
    tol: &Tolerances<T>,
) -> MeasureResult<T> {
    let projection = Point::new(
        dmu.x.iter().zip(&theta).map(|(&x, &t)| x * t).collect(),
        dmu.y.iter().zip(&phi).map(|(&y, &f)| y * f).collect(),
    );
    let mut improvement_items = Vec::new();
    for (i, (&from, &to)) in dmu.x.iter().zip(&projection.x).enumerate() {
        if (to - from).abs() > tol.item_rel * from {
            improvement_items.push(ImprovementItem { kind: CoordKind::Input, index: i, from, to });
        }
    }
    for (r, (&from, &to)) in dmu.y.iter().zip(&projection.y).enumerate() {
        if (to - from).abs() > tol.item_rel * from {
            improvement_items.push(ImprovementItem { kind: CoordKind::Output, index: r, from, to });
        }
    }
    MeasureResult { model, score, theta, phi, projection, active_facet, improvement_items }
}
