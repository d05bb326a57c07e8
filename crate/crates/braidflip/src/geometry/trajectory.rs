//! Strand trajectories: piecewise linear/circular motions of n points over
//! [0,1] whose start and end configurations coincide (a pure braid).

use crate::error::{Error, Result};
use crate::geometry::point::Point;

/// Absolute tolerance for positional continuity at segment junctions and for
/// the closure condition position(1) == position(0).
pub const CONTINUITY_TOL: f64 = 1e-12;

/// Minimum pairwise distance between strands at validated time samples.
pub const MIN_STRAND_GAP: f64 = 1e-9;

/// Number of uniform time samples checked for strand separation when a
/// system is constructed.
const VALIDATION_SAMPLES: usize = 256;

/// Slack accepted when matching segment time boundaries.
const TIME_SLACK: f64 = 1e-12;

/// One timed piece of a trajectory. Time is reparametrized linearly within
/// the segment.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Linear {
        t0: f64,
        t1: f64,
        from: Point,
        to: Point,
    },
    /// Circular arc around `center`; the angle sweeps linearly from `angle0`
    /// to `angle1` (radians, multiple turns allowed).
    Arc {
        t0: f64,
        t1: f64,
        center: Point,
        radius: f64,
        angle0: f64,
        angle1: f64,
    },
}

impl Segment {
    pub fn t0(&self) -> f64 {
        match *self {
            Segment::Linear { t0, .. } | Segment::Arc { t0, .. } => t0,
        }
    }

    pub fn t1(&self) -> f64 {
        match *self {
            Segment::Linear { t1, .. } | Segment::Arc { t1, .. } => t1,
        }
    }

    /// Exact evaluation; `t` is clamped into [t0, t1].
    pub fn position(&self, t: f64) -> Point {
        match *self {
            Segment::Linear { t0, t1, from, to } => {
                let u = param(t, t0, t1);
                Point::new(from.x + u * (to.x - from.x), from.y + u * (to.y - from.y))
            }
            Segment::Arc { t0, t1, center, radius, angle0, angle1 } => {
                let u = param(t, t0, t1);
                let a = angle0 + u * (angle1 - angle0);
                Point::new(center.x + radius * a.cos(), center.y + radius * a.sin())
            }
        }
    }

    /// The same motion run backwards, living on [1 - t1, 1 - t0].
    fn reversed(&self) -> Segment {
        match *self {
            Segment::Linear { t0, t1, from, to } => Segment::Linear {
                t0: 1.0 - t1,
                t1: 1.0 - t0,
                from: to,
                to: from,
            },
            Segment::Arc { t0, t1, center, radius, angle0, angle1 } => Segment::Arc {
                t0: 1.0 - t1,
                t1: 1.0 - t0,
                center,
                radius,
                angle0: angle1,
                angle1: angle0,
            },
        }
    }

    /// Split into two segments meeting at time `t` (strictly inside).
    fn split_at(&self, t: f64) -> (Segment, Segment) {
        match *self {
            Segment::Linear { t0, t1, from, to } => {
                let mid = self.position(t);
                (
                    Segment::Linear { t0, t1: t, from, to: mid },
                    Segment::Linear { t0: t, t1, from: mid, to },
                )
            }
            Segment::Arc { t0, t1, center, radius, angle0, angle1 } => {
                let u = param(t, t0, t1);
                let mid = angle0 + u * (angle1 - angle0);
                (
                    Segment::Arc { t0, t1: t, center, radius, angle0, angle1: mid },
                    Segment::Arc { t0: t, t1, center, radius, angle0: mid, angle1 },
                )
            }
        }
    }

    fn with_times(&self, t0: f64, t1: f64) -> Segment {
        let mut s = self.clone();
        match &mut s {
            Segment::Linear { t0: a, t1: b, .. } | Segment::Arc { t0: a, t1: b, .. } => {
                *a = t0;
                *b = t1;
            }
        }
        s
    }
}

fn param(t: f64, t0: f64, t1: f64) -> f64 {
    ((t - t0) / (t1 - t0)).clamp(0.0, 1.0)
}

/// A single strand: contiguous segments covering [0,1], continuous in
/// position.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    segments: Vec<Segment>,
}

impl Trajectory {
    pub fn new(segments: Vec<Segment>) -> Result<Trajectory> {
        if segments.is_empty() {
            return Err(Error::invalid_strands("trajectory has no segments"));
        }
        if segments[0].t0().abs() > TIME_SLACK {
            return Err(Error::invalid_strands(format!(
                "first segment starts at t={}, expected 0",
                segments[0].t0()
            )));
        }
        if (segments[segments.len() - 1].t1() - 1.0).abs() > TIME_SLACK {
            return Err(Error::invalid_strands(format!(
                "last segment ends at t={}, expected 1",
                segments[segments.len() - 1].t1()
            )));
        }
        for (k, pair) in segments.windows(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            if (a.t1() - b.t0()).abs() > TIME_SLACK {
                return Err(Error::invalid_strands(format!(
                    "segments {k} and {} leave a time gap [{}, {}]",
                    k + 1,
                    a.t1(),
                    b.t0()
                )));
            }
            let gap = a.position(a.t1()).dist(b.position(b.t0()));
            if gap > CONTINUITY_TOL {
                return Err(Error::invalid_strands(format!(
                    "position jump of {gap:.3e} at t={}",
                    a.t1()
                )));
            }
        }
        for s in &segments {
            if !(s.t1() > s.t0()) {
                return Err(Error::invalid_strands("segment with non-positive duration"));
            }
        }
        Ok(Trajectory { segments })
    }

    /// A point that never moves.
    pub fn stationary(p: Point) -> Trajectory {
        Trajectory {
            segments: vec![Segment::Linear { t0: 0.0, t1: 1.0, from: p, to: p }],
        }
    }

    /// Full-time circular motion from `angle0` to `angle1` around `center`.
    pub fn circular(center: Point, radius: f64, angle0: f64, angle1: f64) -> Trajectory {
        Trajectory {
            segments: vec![Segment::Arc { t0: 0.0, t1: 1.0, center, radius, angle0, angle1 }],
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Position at `t` in [0,1]; the containing segment is found by scan
    /// (segment counts are small) and evaluation clamps within it.
    pub fn position(&self, t: f64) -> Point {
        let seg = self
            .segments
            .iter()
            .rev()
            .find(|s| t >= s.t0() - TIME_SLACK)
            .unwrap_or(&self.segments[0]);
        seg.position(t)
    }

    fn reversed(&self) -> Trajectory {
        Trajectory {
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
        }
    }

    /// Reparametrize so the loop starts at the old time `t0`.
    fn shifted_origin(&self, t0: f64) -> Trajectory {
        if t0 <= TIME_SLACK || t0 >= 1.0 - TIME_SLACK {
            return self.clone();
        }
        let mut head = Vec::new();
        let mut tail = Vec::new();
        for seg in &self.segments {
            if seg.t1() <= t0 + TIME_SLACK {
                head.push(seg.clone());
            } else if seg.t0() >= t0 - TIME_SLACK {
                tail.push(seg.clone());
            } else {
                let (a, b) = seg.split_at(t0);
                head.push(a);
                tail.push(b);
            }
        }
        let offset = 1.0 - t0;
        let mut segments: Vec<Segment> = tail
            .iter()
            .map(|s| s.with_times(s.t0() - t0, s.t1() - t0))
            .chain(head.iter().map(|s| s.with_times(s.t0() + offset, s.t1() + offset)))
            .collect();
        // Pin the endpoints exactly; interior junctions share their source
        // arithmetic and already match.
        let last = segments.len() - 1;
        segments[0] = segments[0].with_times(0.0, segments[0].t1());
        segments[last] = segments[last].with_times(segments[last].t0(), 1.0);
        Trajectory { segments }
    }
}

/// The braid input: n strands moving over [0,1] and returning to their
/// starting positions.
#[derive(Debug, Clone, PartialEq)]
pub struct StrandSystem {
    strands: Vec<Trajectory>,
}

impl StrandSystem {
    pub fn new(strands: Vec<Trajectory>) -> Result<StrandSystem> {
        if strands.is_empty() {
            return Err(Error::invalid_strands("no strands"));
        }
        for (k, s) in strands.iter().enumerate() {
            let gap = s.position(0.0).dist(s.position(1.0));
            if gap > CONTINUITY_TOL {
                return Err(Error::invalid_strands(format!(
                    "strand {k} does not close up: |X(1)-X(0)| = {gap:.3e}"
                )));
            }
        }
        let system = StrandSystem { strands };
        for k in 0..=VALIDATION_SAMPLES {
            let t = k as f64 / VALIDATION_SAMPLES as f64;
            system.check_separation(t)?;
        }
        Ok(system)
    }

    pub fn n(&self) -> usize {
        self.strands.len()
    }

    pub fn strands(&self) -> &[Trajectory] {
        &self.strands
    }

    /// All strand positions at `t`; errors outside [0,1].
    pub fn position_at(&self, t: f64) -> Result<Vec<Point>> {
        if !(-TIME_SLACK..=1.0 + TIME_SLACK).contains(&t) {
            return Err(Error::TimeOutOfRange { t });
        }
        let t = t.clamp(0.0, 1.0);
        Ok(self.strands.iter().map(|s| s.position(t)).collect())
    }

    fn check_separation(&self, t: f64) -> Result<()> {
        let pts: Vec<Point> = self.strands.iter().map(|s| s.position(t)).collect();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i].dist(pts[j]) <= MIN_STRAND_GAP {
                    return Err(Error::invalid_strands(format!(
                        "strands {i} and {j} collide at t={t}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The same braid traversed backwards.
    pub fn reversed(&self) -> StrandSystem {
        StrandSystem {
            strands: self.strands.iter().map(Trajectory::reversed).collect(),
        }
    }

    /// The same closed loop started at the old time `t0`; positions satisfy
    /// shifted(s) = original((s + t0) mod 1).
    pub fn shift_origin(&self, t0: f64) -> Result<StrandSystem> {
        if !(0.0..=1.0).contains(&t0) {
            return Err(Error::TimeOutOfRange { t: t0 });
        }
        StrandSystem::new(self.strands.iter().map(|s| s.shifted_origin(t0)).collect())
    }
}
