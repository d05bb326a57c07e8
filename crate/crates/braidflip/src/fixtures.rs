//! Built-in strand systems used by tests and the command-line front end.

use std::f64::consts::TAU;

use crate::error::Result;
use crate::geometry::point::Point;
use crate::geometry::trajectory::{StrandSystem, Trajectory};

const SQRT3_HALF: f64 = 0.866_025_403_784_438_6;

/// Five strands: a static centre P1 = (0,0) with a satellite P2 orbiting it
/// counterclockwise at the given radius (`turns` full revolutions), inside
/// the static triangle P3 = (-1/2, sqrt(3)/2), P4 = (-1/2, -sqrt(3)/2),
/// P5 = (1, 0).
///
/// With radius 1/3 and one turn this is the classic six-flip example braid.
/// The radius must keep the satellite clear of the static points.
pub fn five_point_orbit(radius: f64, turns: u32) -> Result<StrandSystem> {
    StrandSystem::new(five_point_strands(Point::new(0.0, 0.0), radius, 0.0, turns))
}

/// The strand list of [`five_point_orbit`] translated to `center`, with the
/// satellite starting at angle `phase` (fraction of a turn).
fn five_point_strands(center: Point, radius: f64, phase: f64, turns: u32) -> Vec<Trajectory> {
    let angle0 = phase * TAU;
    vec![
        Trajectory::stationary(center),
        Trajectory::circular(center, radius, angle0, angle0 + TAU * f64::from(turns)),
        Trajectory::stationary(center + Point::new(-0.5, SQRT3_HALF)),
        Trajectory::stationary(center + Point::new(-0.5, -SQRT3_HALF)),
        Trajectory::stationary(center + Point::new(1.0, 0.0)),
    ]
}

/// Ten strands: two far-apart copies of the five-point orbit whose satellite
/// phases differ by 0.04 turns. The second cluster is lifted by 0.37 so no
/// four points across the clusters are ever cocircular. All interior flips
/// of one cluster act on quads disjoint from the other cluster's, which
/// makes this the workhorse fixture for commutation checks.
pub fn two_cluster_orbits() -> Result<StrandSystem> {
    let mut strands = five_point_strands(Point::new(-2.5, 0.0), 1.0 / 3.0, 0.0, 1);
    strands.extend(five_point_strands(Point::new(2.5, 0.37), 1.0 / 3.0, 0.04, 1));
    StrandSystem::new(strands)
}
