//! A numerical invariant of braids of points moving in the plane.
//!
//! A braid here is a system of closed strand trajectories: `n` distinct
//! points move continuously in the plane over the time interval [0, 1] and
//! return to their starting configuration. As the points move, their
//! Delaunay triangulation changes by a finite sequence of edge flips. Each
//! flip acts linearly on a space of admissible edge colorings through
//! Kauffman–Lins recoupling coefficients (quantum 6j symbols at a root of
//! unity), and the composition of these flip operators around the loop is a
//! square matrix `A` on the coloring space of the initial triangulation.
//! Because the 6j symbols satisfy the Biedenharn–Elliott (pentagon) and
//! orthogonality identities, `A` is — up to the stated numerical tolerances
//! — unchanged under continuous deformation of the braid, and its spectrum
//! is an invariant of the braid's isotopy class.
//!
//! The crate is organized in layers:
//!
//! - [`geometry`]: exact-enough planar predicates (orientation, in-circle)
//!   in compensated arithmetic, strand trajectories, a verified Delaunay
//!   triangulator, and certified flip-event extraction along the time axis.
//! - [`recoupling`]: quantum integers, factorials, theta and tetrahedral
//!   network evaluations, and the normalized 6j symbol at level `r`.
//! - [`pentagon`]: the interface a family of flip coefficients must satisfy
//!   ([`pentagon::PentagonTuple`]), its recoupling realization, the
//!   deterministic Ptolemy (edge-length) realization, and a deliberately
//!   tampered variant for sensitivity tests.
//! - [`identities`]: exhaustive and randomized verification suites for the
//!   orthogonality and pentagon identities.
//! - [`coloring`]: enumeration of admissible edge colorings of a
//!   triangulation into an ordered basis, and single-flip label transfer.
//! - [`operator`]: per-flip linear operators, composition into the braid
//!   invariant, eigenvalue analysis, and the certification procedures
//!   (pentagon on explicit configurations, commutation of disjoint flips,
//!   reverse-flip inverses, Ptolemy transport).
//! - [`fixtures`]: reference strand systems used across the test suites.

pub use nalgebra;

pub mod coloring;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod identities;
pub mod operator;
pub mod pentagon;
pub mod recoupling;

pub use coloring::{enumerate_colorings, transfer_candidates, Coloring, ColoringBasis};
pub use error::{Error, Result};
pub use geometry::{
    circumcircle_side, delaunay, extract_flip_sequence, initial_triangulation, triangulation_at,
    CircleSide, Edge, FlipEvent, Point, Segment, StrandSystem, Trajectory, Triangulation,
};
pub use identities::{
    orthogonality_suite, pentagon_suite_exhaustive, pentagon_suite_random, IdentityReport,
};
pub use operator::{
    analyze_braid, compose, eigen_multiplicity, eigenvalue_clusters, euclidean_edge_lengths,
    flip_operator, matrices_match, max_entry_deviation, ptolemy_propagate, sorted_spectrum,
    spectra_match, synthetic_flip, verify_commutativity, verify_pentagon_euclidean,
    verify_pentagon_on_configuration, BraidAnalysis, FlipOperator, InvariantOperator,
    EIGEN_CLUSTER_TOL, EIGEN_RANK_TOL, ENTRY_ABS_TOL, ENTRY_REL_TOL,
};
pub use pentagon::{PentagonTuple, PerturbedTuple, PtolemyTuple, RecouplingTuple};
pub use recoupling::RecouplingParams;
