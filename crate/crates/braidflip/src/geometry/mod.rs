//! Kinetic geometry: planar points and predicates, strand trajectories,
//! Delaunay triangulations, and certified flip-event extraction.

pub mod events;
pub mod point;
pub mod trajectory;
pub mod triangulation;

pub use events::{extract_flip_sequence, initial_triangulation, triangulation_at, FlipEvent};
pub use point::{circumcircle_side, incircle_det, is_collinear, orient2d, CircleSide, Point};
pub use trajectory::{Segment, StrandSystem, Trajectory};
pub use triangulation::{delaunay, triangle_edges, Edge, Triangle, Triangulation};
