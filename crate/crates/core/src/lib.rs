//! Data envelopment analysis with closest targets over an extended-facet
//! production possibility set.
//!
//! The crate builds a variable-returns-to-scale technology from observed
//! decision making units (DMUs), enumerates its full-dimensional efficient
//! facets, extends them into a facet-defined technology, and scores DMUs with
//! Russell-graph and slacks-based measures in both their classic (closest
//! distance to the frontier is *minimised*) and maximal (closest target is
//! *sought*) orientations. A free-lunch check guards the facet extension, and
//! audit helpers expose improvement-item histograms and dominance
//! consistency findings.
//!
//! Everything is generic over the floating-point scalar via [`Real`]; `f64`
//! aliases are exported at the crate root and are the precision grade the
//! default tolerances are calibrated for.

pub mod analysis;
pub mod data;
pub mod facets;
pub mod lp;
pub mod measures;
pub mod oracle;
pub mod real;
pub mod technology;

mod linalg;

pub use analysis::{dominance_audit, improvement_histogram, ImprovementHistogram, MonotonicityFinding, Verdict};
pub use data::{DataError, Dataset, Point};
pub use facets::{
    build_exfa, detect_free_lunch_hyperplanes, enumerate_fdefs, fit_hyperplane, ExtendedTechnology,
    Facet, FacetError, FreeLunchReport, Hyperplane,
};
pub use lp::{
    solve_linear_fractional, solve_lp, AffineForm, ConstraintSet, LinearProgram, LpError,
    LpSolution, LpStatus, RowSense, Sense,
};
pub use measures::{
    d_minus, d_plus, max_rm, max_rm_nonextended, max_sbm, phi_prime, rm_exfa, rm_vrs, sbm_exfa,
    theta_prime, CoordKind, ImprovementItem, MaxRmResult, MeasureError, MeasureResult, Model, Side,
};
pub use oracle::{free_lunch_lp_oracle, grid_min_g, line_search_extreme, GridSpec};
pub use real::{Real, Tolerances};
pub use technology::{build_vrs, EfficiencyStatus, TechnologyError, VrsTechnology};

/// `f64` instantiations of the main types; the CLI and the test suites use
/// these.
pub type Dataset64 = data::Dataset<f64>;
pub type Point64 = data::Point<f64>;
pub type VrsTechnology64 = technology::VrsTechnology<f64>;
pub type ExtendedTechnology64 = facets::ExtendedTechnology<f64>;
pub type Hyperplane64 = facets::Hyperplane<f64>;
pub type Facet64 = facets::Facet<f64>;
pub type FreeLunchReport64 = facets::FreeLunchReport<f64>;
pub type MeasureResult64 = measures::MeasureResult<f64>;
pub type MaxRmResult64 = measures::MaxRmResult<f64>;
pub type LinearProgram64 = lp::LinearProgram<f64>;
pub type LpSolution64 = lp::LpSolution<f64>;
pub type Tolerances64 = real::Tolerances<f64>;
