//! The braid description file format: a JSON document listing each strand as
//! a sequence of timed segments, convertible to and from a validated
//! [`StrandSystem`].

use braidflip::{Point, Segment, StrandSystem, Trajectory};
use serde::{Deserialize, Serialize};

/// Top-level braid input: a name, an optional free-form comment, and one
/// segment list per strand. Segment times must tile [0,1] per strand and the
/// motion must return every point to its start (checked on conversion).
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BraidDescription {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub strands: Vec<Vec<SegmentSpec>>,
}

/// One timed piece of a strand, tagged by `kind`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SegmentSpec {
    /// Straight-line motion from `from` to `to` over `t = [t0, t1]`.
    Linear { t: [f64; 2], from: [f64; 2], to: [f64; 2] },
    /// Circular-arc motion around `center` at `radius`, sweeping linearly
    /// from `angle[0]` to `angle[1]` (radians; multiple turns allowed).
    Arc {
        t: [f64; 2],
        center: [f64; 2],
        radius: f64,
        angle: [f64; 2],
    },
}

impl SegmentSpec {
    fn to_segment(&self) -> Segment {
        match *self {
            SegmentSpec::Linear { t, from, to } => Segment::Linear {
                t0: t[0],
                t1: t[1],
                from: Point::new(from[0], from[1]),
                to: Point::new(to[0], to[1]),
            },
            SegmentSpec::Arc { t, center, radius, angle } => Segment::Arc {
                t0: t[0],
                t1: t[1],
                center: Point::new(center[0], center[1]),
                radius,
                angle0: angle[0],
                angle1: angle[1],
            },
        }
    }

    fn from_segment(segment: &Segment) -> SegmentSpec {
        match *segment {
            Segment::Linear { t0, t1, from, to } => SegmentSpec::Linear {
                t: [t0, t1],
                from: [from.x, from.y],
                to: [to.x, to.y],
            },
            Segment::Arc { t0, t1, center, radius, angle0, angle1 } => SegmentSpec::Arc {
                t: [t0, t1],
                center: [center.x, center.y],
                radius,
                angle: [angle0, angle1],
            },
        }
    }
}

impl BraidDescription {
    /// Parse a JSON document; error messages carry line and column.
    pub fn parse(text: &str) -> Result<BraidDescription, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Convert to a validated strand system (closure, continuity, and
    /// separation are all checked by the library constructors).
    pub fn to_system(&self) -> braidflip::Result<StrandSystem> {
        let strands = self
            .strands
            .iter()
            .map(|segs| Trajectory::new(segs.iter().map(SegmentSpec::to_segment).collect()))
            .collect::<braidflip::Result<Vec<Trajectory>>>()?;
        StrandSystem::new(strands)
    }

    /// The canonical serialization of a strand system: one spec per segment,
    /// in strand order. Writing this back out and re-parsing reproduces an
    /// equivalent system.
    pub fn from_system(
        name: &str,
        comment: Option<&str>,
        system: &StrandSystem,
    ) -> BraidDescription {
        BraidDescription {
            name: name.to_string(),
            comment: comment.map(str::to_string),
            strands: system
                .strands()
                .iter()
                .map(|t| t.segments().iter().map(SegmentSpec::from_segment).collect())
                .collect(),
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("description serializes");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_are_line_anchored() {
        let text = "{\n  \"name\": \"x\",\n  \"strands\": [[{\"kind\": \"bogus\"}]]\n}";
        let err = BraidDescription::parse(text).unwrap_err();
        assert!(err.contains("line 3"), "got: {err}");
    }

    #[test]
    fn canonical_round_trip_preserves_the_system() {
        let system = braidflip::fixtures::five_point_orbit(1.0 / 3.0, 1).unwrap();
        let desc = BraidDescription::from_system("paper", None, &system);
        let reparsed = BraidDescription::parse(&desc.to_json()).unwrap();
        let rebuilt = reparsed.to_system().unwrap();
        for k in 0..=16 {
            let t = k as f64 / 16.0;
            let a = system.position_at(t).unwrap();
            let b = rebuilt.position_at(t).unwrap();
            for (p, q) in a.iter().zip(&b) {
                assert!(p.dist(*q) < 1e-15, "positions differ at t={t}");
            }
        }
    }

    #[test]
    fn unknown_top_level_fields_are_rejected() {
        let text = r#"{"name": "x", "strands": [], "surprise": 1}"#;
        assert!(BraidDescription::parse(text).is_err());
    }
}
