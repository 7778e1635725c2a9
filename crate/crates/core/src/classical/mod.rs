//! Classical spectral families: finite topologies, the interval carrier for
//! `ℝ`, and finite σ-algebras.

pub mod family;
pub mod interval;
pub mod sigma;
pub mod topology;

use thiserror::Error;

pub use family::{family_from_function, is_continuous_function, ClosedPiece, FiniteFamily, IntervalFamily, IntervalRule, RealFunction};
pub use interval::IntervalOpenSet;
pub use sigma::{sigma_family_from_function, FiniteSigmaAlgebra, SigmaFamily};
pub use topology::{enumerate_topologies, quasipoint_correspondence, FiniteTopology, QuasipointCorrespondence, RegularOpenLattice};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassicalError {
    #[error("carrier has {0} points, more than supported")]
    TooManyPoints(usize),
    #[error("duplicate point name")]
    DuplicatePoint,
    #[error("set {0} is not a subset of the carrier")]
    OutOfRange(String),
    #[error("not a topology: {0}")]
    NotATopology(String),
    #[error("not a σ-algebra: {0}")]
    NotASigmaAlgebra(String),
    #[error("not a spectral family: {0}")]
    NotASpectralFamily(String),
    #[error("point {0} is outside the admissible domain")]
    PointNotAdmissible(String),
    #[error("rule `{0}` has no constancy analysis")]
    UnsupportedRule(String),
    #[error("sublevel set {0} is not measurable")]
    NotMeasurable(String),
    #[error("bad interval {0}")]
    BadInterval(String),
    #[error("expected {expected} values, got {actual}")]
    WrongLength { expected: usize, actual: usize },
}
