//! Pentagon tuples: the abstract flip-coefficient interface and its
//! concrete instances — q-6j recoupling labels and the deterministic
//! Ptolemy tuple over the reals.

use crate::error::{Error, Result};
use crate::recoupling::RecouplingParams;

/// A label set with an admissibility predicate and a 6j coefficient
/// function, shaped so that every Delaunay flip induces a linear operator.
///
/// Slot convention: in `sixj(a, b, i, c, d, j)` the four support triples are
/// (a,b,j), (c,d,j), (a,d,i), (b,c,i) — j labels the old diagonal of the
/// flipped quadrilateral, i the new one, and (a,b,c,d) its boundary.
pub trait PentagonTuple {
    type Label: Copy + PartialEq + std::fmt::Debug;

    /// The finite label universe, if there is one; `None` for label sets
    /// too large to enumerate (e.g. the reals). Coloring enumeration exists
    /// only in the `Some` case.
    fn label_list(&self) -> Option<Vec<Self::Label>>;

    fn admissible(&self, a: Self::Label, b: Self::Label, c: Self::Label) -> bool;

    fn sixj(
        &self,
        a: Self::Label,
        b: Self::Label,
        i: Self::Label,
        c: Self::Label,
        d: Self::Label,
        j: Self::Label,
    ) -> f64;

    /// A finite superset of the labels i with sixj(a,b,i,c,d,j) != 0.
    fn candidates(
        &self,
        a: Self::Label,
        b: Self::Label,
        c: Self::Label,
        d: Self::Label,
        j: Self::Label,
    ) -> Result<Vec<Self::Label>>;
}

// ---------------------------------------------------------------------------
// Recoupling instance.

/// Label count above which the dense 6j table would outgrow desk-scale
/// memory; larger levels fall back to direct evaluation.
const TABLE_LABEL_LIMIT: usize = 10;

/// The q-6j pentagon tuple at level r: labels 0..=r-2, Kauffman–Lins
/// admissibility, and the symbols of [`RecouplingParams::sixj`]. For small
/// levels the full (r-1)^6 coefficient table is precomputed.
#[derive(Debug, Clone)]
pub struct RecouplingTuple {
    params: RecouplingParams,
    labels: usize,
    table: Option<Vec<f64>>,
}

impl RecouplingTuple {
    pub fn new(params: RecouplingParams) -> RecouplingTuple {
        let labels = params.r() - 1;
        assert!(labels <= u8::MAX as usize + 1, "level too large for u8 labels");
        let table = (labels <= TABLE_LABEL_LIMIT).then(|| {
            let mut table = vec![0.0; labels.pow(6)];
            for (flat, slot) in table.iter_mut().enumerate() {
                let mut k = flat;
                let mut args = [0usize; 6];
                for slot_idx in (0..6).rev() {
                    args[slot_idx] = k % labels;
                    k /= labels;
                }
                let [a, b, i, c, d, j] = args;
                *slot = params.sixj(a, b, i, c, d, j);
            }
            table
        });
        RecouplingTuple { params, labels, table }
    }

    pub fn params(&self) -> &RecouplingParams {
        &self.params
    }

    fn flat_index(&self, a: u8, b: u8, i: u8, c: u8, d: u8, j: u8) -> usize {
        let l = self.labels;
        (((((a as usize * l + b as usize) * l + i as usize) * l + c as usize) * l + d as usize)
            * l)
            + j as usize
    }
}

impl PentagonTuple for RecouplingTuple {
    type Label = u8;

    fn label_list(&self) -> Option<Vec<u8>> {
        Some((0..self.labels as u16).map(|v| v as u8).collect())
    }

    fn admissible(&self, a: u8, b: u8, c: u8) -> bool {
        self.params.admissible(a as usize, b as usize, c as usize)
    }

    fn sixj(&self, a: u8, b: u8, i: u8, c: u8, d: u8, j: u8) -> f64 {
        match &self.table {
            Some(table) => table[self.flat_index(a, b, i, c, d, j)],
            None => self.params.sixj(
                a as usize, b as usize, i as usize, c as usize, d as usize, j as usize,
            ),
        }
    }

    fn candidates(&self, a: u8, b: u8, c: u8, d: u8, j: u8) -> Result<Vec<u8>> {
        let _ = j;
        Ok((0..self.labels as u16)
            .map(|v| v as u8)
            .filter(|&i| self.admissible(a, d, i) && self.admissible(b, c, i))
            .collect())
    }
}

// ---------------------------------------------------------------------------
// Ptolemy instance.

/// Relative tolerance for deciding the Ptolemy equality on real labels.
pub const PTOLEMY_REL_TOL: f64 = 1e-9;

/// Absolute floor under the relative tolerance (labels near zero).
pub const PTOLEMY_ABS_TOL: f64 = 1e-12;

/// The deterministic pentagon tuple over real labels: every triple is
/// admissible and a flip carries the quad (a,b,c,d) with old diagonal j to
/// the single new diagonal i = (a*c + b*d)/j.
///
/// The products pair the quadrilateral's opposite sides — in the slot
/// convention the boundary runs a, b, c, d around the quad, so (a,c) and
/// (b,d) are the opposite pairs and the relation is the classical
/// cyclic-quadrilateral identity "diagonal times diagonal equals
/// opposite-sides products summed": i*j = a*c + b*d. Pairing adjacent sides
/// instead breaks both the involution and the five-flip cycle, so this
/// orientation of the rule is forced by the tuple axioms.
#[derive(Debug, Clone, Copy, Default)]
pub struct PtolemyTuple;

impl PtolemyTuple {
    pub fn new() -> PtolemyTuple {
        PtolemyTuple
    }
}

fn ptolemy_eq(lhs: f64, rhs: f64) -> bool {
    let tol = PTOLEMY_ABS_TOL.max(PTOLEMY_REL_TOL * lhs.abs().max(rhs.abs()));
    (lhs - rhs).abs() <= tol
}

impl PentagonTuple for PtolemyTuple {
    type Label = f64;

    fn label_list(&self) -> Option<Vec<f64>> {
        None
    }

    fn admissible(&self, _a: f64, _b: f64, _c: f64) -> bool {
        true
    }

    fn sixj(&self, a: f64, b: f64, i: f64, c: f64, d: f64, j: f64) -> f64 {
        if ptolemy_eq(i * j, a * c + b * d) {
            1.0
        } else {
            0.0
        }
    }

    fn candidates(&self, a: f64, b: f64, c: f64, d: f64, j: f64) -> Result<Vec<f64>> {
        if j.abs() <= PTOLEMY_ABS_TOL {
            return Err(Error::PtolemyZeroDivision { event_index: None });
        }
        Ok(vec![(a * c + b * d) / j])
    }
}

// ---------------------------------------------------------------------------
// Deterministic perturbation (a test probe, not an instance of the axioms).

/// A recoupling tuple whose on-support coefficients are multiplicatively
/// perturbed by a deterministic pseudo-random factor of size `epsilon`.
/// Support (hence candidate sets and operator shapes) is unchanged. Useful
/// for checking that identity suites actually have the power to reject a
/// wrong tuple.
#[derive(Debug, Clone)]
pub struct PerturbedTuple {
    inner: RecouplingTuple,
    epsilon: f64,
}

impl PerturbedTuple {
    pub fn new(inner: RecouplingTuple, epsilon: f64) -> PerturbedTuple {
        PerturbedTuple { inner, epsilon }
    }
}

/// Deterministic wiggle in [-1, 1] from the six labels.
fn wiggle(a: u8, b: u8, i: u8, c: u8, d: u8, j: u8) -> f64 {
    let mut h: u32 = 2_166_136_261;
    for v in [a, b, i, c, d, j] {
        h ^= u32::from(v);
        h = h.wrapping_mul(16_777_619);
    }
    (h % 2001) as f64 / 1000.0 - 1.0
}

impl PentagonTuple for PerturbedTuple {
    type Label = u8;

    fn label_list(&self) -> Option<Vec<u8>> {
        self.inner.label_list()
    }

    fn admissible(&self, a: u8, b: u8, c: u8) -> bool {
        self.inner.admissible(a, b, c)
    }

    fn sixj(&self, a: u8, b: u8, i: u8, c: u8, d: u8, j: u8) -> f64 {
        let base = self.inner.sixj(a, b, i, c, d, j);
        base * (1.0 + self.epsilon * wiggle(a, b, i, c, d, j))
    }

    fn candidates(&self, a: u8, b: u8, c: u8, d: u8, j: u8) -> Result<Vec<u8>> {
        self.inner.candidates(a, b, c, d, j)
    }
}
