//! Interval-set certificates for convex-hull membership.
//!
//! A point `h` lies in the convex hull of a feasible set `F` iff there are
//! subsets `S_i ⊆ [0, 1)` with measure `h_i` whose pointwise indicator vector
//! stays inside `F`. This crate builds such certificates for a catalogue of
//! polytopes, verifies them exactly, and decomposes verified certificates
//! into explicit convex (and conic) combinations.

pub mod binary;
pub mod certificate;
pub mod corpus;
pub mod envelope;
pub mod error;
pub mod extended;
pub mod family;
pub mod fuzz;
pub mod interval;
pub mod io;
pub mod lp;
pub mod model;
pub mod rect;
pub mod render;
pub mod scalar;

pub use certificate::{Certificate, ConvexCombination, VerifyMode, VerifyOptions, VerifyReport};
pub use corpus::{CaseOutcome, CorpusCase};
pub use envelope::{
    candidate_bounds, envelope_oracle, hull_equivalence_check, omega, GraphFunction, GraphHull, HullReport, TruthTable,
};
pub use error::{Error, Result};
pub use extended::LotSizingMode;
pub use family::{random_instance, ConstructOptions, Instance, Prepared, SampleKind, FAMILIES};
pub use fuzz::{fuzz, FuzzConfig, FuzzReport};
pub use interval::{cells, CellDecomposition, IntervalSet};
pub use lp::{
    membership, solve, transportation_feasible, FarkasCertificate, LinearProgram, LpOutcome, Membership, Separator,
    Transport,
};
pub use model::{
    CharacterizationReport, Constraint, ConstraintSystem, Evaluation, PointFailure, Sense, VarKind, Variable,
};
pub use rect::{bilinear_overlap, profile, Base, ProfileCell, Rect, RectSet};
pub use render::render_svg;
pub use scalar::{q, qi, Scalar, Q};

/// Exact interval set.
pub type ExactIntervalSet = IntervalSet<Q>;
/// Exact rectangle set.
pub type ExactRectSet = RectSet<Q>;
/// Double-precision rectangle set.
pub type DecimalRectSet = RectSet<f64>;
/// Exact constraint system.
pub type ExactSystem = ConstraintSystem<Q>;
/// Exact certificate.
pub type ExactCertificate = Certificate<Q>;
/// Exact convex combination.
pub type ExactCombination = ConvexCombination<Q>;
/// Exact linear program.
pub type ExactLp = LinearProgram<Q>;
