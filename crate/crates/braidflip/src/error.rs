//! Error type shared across the pipeline.

use thiserror::Error;

/// Everything that can go wrong between parsing a strand system and
/// analyzing the composed operator.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// The queried point configuration has no unambiguous Delaunay
    /// triangulation: four points on an empty circle, all points collinear,
    /// or coincident points. When raised from a time sample the caller
    /// should perturb the query time.
    #[error("degenerate configuration: {details}")]
    DegenerateConfiguration { details: String },

    /// Event extraction could not isolate a single flip within the time
    /// tolerance. The isotopy is non-generic; perturb the input braid.
    #[error("non-generic braid: {details}")]
    NonGenericBraid { details: String },

    /// A strand system violated continuity, closure, or separation on
    /// construction.
    #[error("invalid strand system: {details}")]
    InvalidStrandSystem { details: String },

    /// Trajectories are parametrized over [0,1] only.
    #[error("time {t} outside [0,1]")]
    TimeOutOfRange { t: f64 },

    /// A triple of labels fails parity, the triangle inequalities, or the
    /// level bound at the given r.
    #[error("inadmissible triple ({a},{b},{c}) at r={r}")]
    InadmissibleTriple { a: usize, b: usize, c: usize, r: usize },

    /// Colorings can only be enumerated for tuples with a finite label set.
    #[error("pentagon tuple has an infinite label set; enumeration unsupported")]
    InfiniteLabelSet,

    /// Deterministic label transport divided by a (near-)zero diagonal label.
    #[error("Ptolemy transport hit a zero diagonal label{}", match .event_index {
        Some(k) => format!(" at event {k}"),
        None => String::new(),
    })]
    PtolemyZeroDivision { event_index: Option<usize> },

    /// Operator composition was attempted across unequal bases.
    #[error("basis mismatch: {details}")]
    BasisMismatch { details: String },

    /// Commutativity check requested for events whose quads share an edge.
    #[error("flip events act on overlapping quads")]
    QuadsOverlap,

    /// A numerical certification that is supposed to hold for a valid
    /// pipeline run (e.g. each flip operator being undone by the reverse
    /// flip) failed its tolerance.
    #[error("numeric gate failed: {details}")]
    NumericGateFailed { details: String },
}

impl Error {
    pub(crate) fn degenerate(details: impl Into<String>) -> Self {
        Error::DegenerateConfiguration { details: details.into() }
    }

    pub(crate) fn non_generic(details: impl Into<String>) -> Self {
        Error::NonGenericBraid { details: details.into() }
    }

    pub(crate) fn invalid_strands(details: impl Into<String>) -> Self {
        Error::InvalidStrandSystem { details: details.into() }
    }

    pub(crate) fn basis_mismatch(details: impl Into<String>) -> Self {
        Error::BasisMismatch { details: details.into() }
    }

    pub(crate) fn numeric_gate(details: impl Into<String>) -> Self {
        Error::NumericGateFailed { details: details.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
