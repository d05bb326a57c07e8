//! Flip-event extraction: sample the braid, locate triangulation changes,
//! and bisect each change down to a certified single-flip bracket.

use crate::error::{Error, Result};
use crate::geometry::trajectory::StrandSystem;
use crate::geometry::triangulation::{delaunay, Edge, Triangulation};

/// Hard floor for bracket widths: below a few ulps of 1.0 bisection cannot
/// make progress in f64 time.
const MIN_BRACKET: f64 = 1e-15;

/// Cap on bisection depth per initial bracket; a circuit breaker, not a
/// tuning knob.
const MAX_DEPTH: usize = 200;

/// One certified Delaunay flip.
///
/// The triangulations just before `t_lo` and just after `t_hi` differ by
/// exactly one edge exchange: `removed` disappears, `inserted` appears, and
/// the surrounding quadrilateral has boundary edges `quad` = (a, b, c, d)
/// ordered by the fixed convention of
/// [`Triangulation::quad_of`](crate::geometry::triangulation::Triangulation::quad_of):
/// before the flip the triangles (a, b, removed) and (c, d, removed) exist,
/// after it (a, d, inserted) and (b, c, inserted).
#[derive(Debug, Clone, PartialEq)]
pub struct FlipEvent {
    pub t_lo: f64,
    pub t_hi: f64,
    pub removed: Edge,
    pub inserted: Edge,
    pub quad: [Edge; 4],
}

impl FlipEvent {
    pub fn t_mid(&self) -> f64 {
        0.5 * (self.t_lo + self.t_hi)
    }

    /// All six edges the flip touches: the quad boundary plus both
    /// diagonals.
    pub fn touched_edges(&self) -> [Edge; 6] {
        [
            self.quad[0],
            self.quad[1],
            self.quad[2],
            self.quad[3],
            self.removed,
            self.inserted,
        ]
    }

    /// Whether two flips act on edge-disjoint quadrilaterals (their
    /// operators then commute).
    pub fn is_disjoint_from(&self, other: &FlipEvent) -> bool {
        let mine = self.touched_edges();
        !other.touched_edges().iter().any(|e| mine.contains(e))
    }

    /// The undoing flip: diagonals swap roles and the quad boundary is
    /// re-walked from the new diagonal, which exchanges b and d. The time
    /// bracket is kept as is.
    pub fn inverse(&self) -> FlipEvent {
        FlipEvent {
            t_lo: self.t_lo,
            t_hi: self.t_hi,
            removed: self.inserted,
            inserted: self.removed,
            quad: [self.quad[0], self.quad[3], self.quad[2], self.quad[1]],
        }
    }
}

/// Delaunay triangulation of the strand positions at time `t`, with no
/// retry policy: degeneracies surface directly.
pub fn triangulation_at(s: &StrandSystem, t: f64) -> Result<Triangulation> {
    delaunay(&s.position_at(t)?)
}

/// The certified triangulation at the start of the braid, computed with the
/// same jittered probing policy as `extract_flip_sequence` so the two agree
/// on what the flip sequence starts from.
pub fn initial_triangulation(s: &StrandSystem, initial_samples: usize) -> Result<Triangulation> {
    let samples = initial_samples.max(2);
    let width = 1.0 / samples as f64;
    probe(s, 0.0, width).map(|(_, tri)| tri)
}

/// Probe near `t`, nudging the sample by growing offsets (a fixed fraction
/// of `width`) when the exact time is singular. Returns the time actually
/// used together with its triangulation.
fn probe(s: &StrandSystem, t: f64, width: f64) -> Result<(f64, Triangulation)> {
    let mut last_err = None;
    for factor in [0.0, 1e-3, -1e-3, 3e-3, -3e-3, 1e-2, -1e-2] {
        let tt = (t + factor * width).clamp(0.0, 1.0);
        match triangulation_at(s, tt) {
            Ok(tri) => return Ok((tt, tri)),
            Err(e @ Error::DegenerateConfiguration { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("probe loop always records an error before exhausting"))
}

/// Extract the ordered flip events of a generic braid.
///
/// The time axis is sampled uniformly (`initial_samples` intervals, each
/// singular sample jittered away); every interval whose endpoint
/// triangulations differ is bisected recursively until each change is
/// bracketed within `time_tolerance` and consists of exactly one edge
/// exchange. Events in brackets closer than the tolerance that act on
/// disjoint quads are ordered by their removed edge; the full event chain is
/// then re-validated combinatorially and must return to the initial
/// triangulation.
pub fn extract_flip_sequence(
    s: &StrandSystem,
    initial_samples: usize,
    time_tolerance: f64,
) -> Result<Vec<FlipEvent>> {
    let samples = initial_samples.max(2);
    let h = 1.0 / samples as f64;
    let tolerance = time_tolerance.max(MIN_BRACKET);

    let mut grid = Vec::with_capacity(samples + 1);
    for k in 0..=samples {
        grid.push(probe(s, k as f64 * h, h)?);
    }

    let mut events = Vec::new();
    for k in 0..samples {
        let (t0, ref tri0) = grid[k];
        let (t1, ref tri1) = grid[k + 1];
        refine(s, (t0, tri0), (t1, tri1), tolerance, 0, &mut events)?;
    }

    order_simultaneous_events(&mut events, tolerance);

    // Re-play the chain combinatorially: every event must be a valid flip of
    // the running triangulation, and the loop must close.
    let mut current = grid[0].1.clone();
    for (k, ev) in events.iter().enumerate() {
        current = current.apply_flip(ev.removed, ev.inserted).map_err(|e| {
            Error::non_generic(format!(
                "event {k} (remove {}, insert {}) does not chain: {e}",
                ev.removed, ev.inserted
            ))
        })?;
    }
    if current != grid[samples].1 {
        return Err(Error::non_generic(
            "event chain does not reproduce the final triangulation; \
             increase initial_samples",
        ));
    }
    if grid[0].1 != grid[samples].1 {
        return Err(Error::non_generic(
            "triangulation does not close up over the loop",
        ));
    }
    Ok(events)
}

/// Bisect a bracket with differing endpoint triangulations down to single
/// flips, appending them in time order.
fn refine(
    s: &StrandSystem,
    lo: (f64, &Triangulation),
    hi: (f64, &Triangulation),
    tolerance: f64,
    depth: usize,
    out: &mut Vec<FlipEvent>,
) -> Result<()> {
    let (t_lo, tri_lo) = lo;
    let (t_hi, tri_hi) = hi;
    if tri_lo == tri_hi {
        return Ok(());
    }
    if depth > MAX_DEPTH {
        return Err(Error::non_generic(format!(
            "bisection depth exhausted near t={t_lo}"
        )));
    }
    let width = t_hi - t_lo;
    if width <= tolerance {
        out.push(single_flip_event(t_lo, tri_lo, t_hi, tri_hi)?);
        return Ok(());
    }

    // Probe the midpoint, shifting it inside the bracket if the exact
    // midpoint is singular.
    let mid = 0.5 * (t_lo + t_hi);
    let mut probe_result = None;
    for factor in [0.0, 0.01, -0.01, 0.03, -0.03, 0.09, -0.09] {
        let tm = mid + factor * width;
        if tm <= t_lo || tm >= t_hi {
            continue;
        }
        match triangulation_at(s, tm) {
            Ok(tri) => {
                probe_result = Some((tm, tri));
                break;
            }
            Err(Error::DegenerateConfiguration { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let Some((t_mid, tri_mid)) = probe_result else {
        return Err(Error::non_generic(format!(
            "persistent degeneracy inside bracket [{t_lo}, {t_hi}]; \
             the isotopy is not generic at this tolerance"
        )));
    };
    refine(s, (t_lo, tri_lo), (t_mid, &tri_mid), tolerance, depth + 1, out)?;
    refine(s, (t_mid, &tri_mid), (t_hi, tri_hi), tolerance, depth + 1, out)
}

/// Certify that a tolerance-width bracket contains exactly one flip and
/// package it as an event.
fn single_flip_event(
    t_lo: f64,
    tri_lo: &Triangulation,
    t_hi: f64,
    tri_hi: &Triangulation,
) -> Result<FlipEvent> {
    let removed: Vec<Edge> = tri_lo.edges().difference(tri_hi.edges()).copied().collect();
    let inserted: Vec<Edge> = tri_hi.edges().difference(tri_lo.edges()).copied().collect();
    if removed.len() != 1 || inserted.len() != 1 {
        return Err(Error::non_generic(format!(
            "{} edges change across [{t_lo}, {t_hi}]; could not isolate a single flip",
            removed.len() + inserted.len()
        )));
    }
    let (removed, inserted) = (removed[0], inserted[0]);
    let (expected_insert, quad) = tri_lo.quad_of(removed)?;
    if expected_insert != inserted {
        return Err(Error::non_generic(format!(
            "edge exchange {removed} -> {inserted} is not a flip of the bracket triangulation"
        )));
    }
    if &tri_lo.apply_flip(removed, inserted)? != tri_hi {
        return Err(Error::non_generic(format!(
            "triangulations across [{t_lo}, {t_hi}] differ by more than the flip {removed} -> {inserted}"
        )));
    }
    Ok(FlipEvent { t_lo, t_hi, removed, inserted, quad })
}

/// Deterministic order for events whose brackets coincide within the
/// tolerance: when their quads are disjoint (so the operators commute) the
/// lexicographically smaller removed edge goes first.
fn order_simultaneous_events(events: &mut [FlipEvent], tolerance: f64) {
    let n = events.len();
    for _ in 0..n {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1) {
            let close = (events[k + 1].t_mid() - events[k].t_mid()).abs() <= tolerance;
            if close
                && events[k].is_disjoint_from(&events[k + 1])
                && events[k + 1].removed < events[k].removed
            {
                events.swap(k, k + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
}
