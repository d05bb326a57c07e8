//! Admissible colorings of a triangulation and their canonical basis.
//!
//! A coloring assigns one label to every edge so that each triangle's three
//! labels are admissible for the pentagon tuple in use. For tuples with a
//! finite label set the full coloring space is enumerated into a
//! `ColoringBasis`: the ordered basis of the vector space on which flip
//! operators act.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::events::FlipEvent;
use crate::geometry::triangulation::{Edge, Triangulation};
use crate::pentagon::PentagonTuple;

/// One admissible labeling, keyed by edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Coloring<L> {
    assignment: BTreeMap<Edge, L>,
}

impl<L: Copy> Coloring<L> {
    pub fn new(assignment: BTreeMap<Edge, L>) -> Coloring<L> {
        Coloring { assignment }
    }

    pub fn label(&self, e: Edge) -> Option<L> {
        self.assignment.get(&e).copied()
    }

    pub fn assignment(&self) -> &BTreeMap<Edge, L> {
        &self.assignment
    }

    fn require(&self, e: Edge) -> Result<L> {
        self.label(e).ok_or_else(|| {
            Error::basis_mismatch(format!("coloring has no label for edge {e}"))
        })
    }
}

/// The ordered basis of admissible colorings of one triangulation.
///
/// Edges are ordered lexicographically by index pair; colorings are stored
/// as flat label rows in increasing lexicographic order of their label
/// vector, so basis positions are reproducible across runs and across
/// braids. Lookup is binary search over the sorted rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoringBasis<L> {
    triangulation: Triangulation,
    edge_order: Vec<Edge>,
    rows: Vec<L>,
    dim: usize,
}

impl<L: Copy + Ord + std::fmt::Debug> ColoringBasis<L> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn edge_order(&self) -> &[Edge] {
        &self.edge_order
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn edge_position(&self, e: Edge) -> Option<usize> {
        self.edge_order.binary_search(&e).ok()
    }

    /// The label vector of basis element k, in edge order.
    pub fn label_row(&self, k: usize) -> &[L] {
        let m = self.edge_order.len();
        &self.rows[k * m..(k + 1) * m]
    }

    /// Basis position of a label vector, if admissible (i.e. enumerated).
    pub fn position_of(&self, labels: &[L]) -> Option<usize> {
        let m = self.edge_order.len();
        assert_eq!(labels.len(), m, "label vector length mismatch");
        let mut lo = 0usize;
        let mut hi = self.dim;
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.label_row(mid).cmp(labels) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Basis element k as an edge-keyed coloring.
    pub fn coloring(&self, k: usize) -> Coloring<L> {
        let map = self
            .edge_order
            .iter()
            .copied()
            .zip(self.label_row(k).iter().copied())
            .collect();
        Coloring::new(map)
    }
}

/// Enumerate every admissible coloring of `g` for a finite-label tuple.
///
/// Backtracking over edges in canonical order: a triangle is checked as
/// soon as its last edge receives a label. Trying labels in sorted order
/// makes the output lexicographically sorted by construction.
pub fn enumerate_colorings<T>(g: &Triangulation, tuple: &T) -> Result<ColoringBasis<T::Label>>
where
    T: PentagonTuple,
    T::Label: Ord,
{
    let mut labels = tuple.label_list().ok_or(Error::InfiniteLabelSet)?;
    labels.sort_unstable();
    labels.dedup();

    let edge_order = g.edge_list();
    let m = edge_order.len();
    let edge_pos: BTreeMap<Edge, usize> =
        edge_order.iter().copied().enumerate().map(|(k, e)| (e, k)).collect();

    // Triangles as sorted edge-position triples, grouped by their last
    // (largest) position: the admissibility check fires exactly when the
    // third edge is assigned.
    let mut by_last: Vec<Vec<[usize; 3]>> = vec![Vec::new(); m];
    for t in g.triangles() {
        let mut pos = [
            edge_pos[&Edge::new(t[0], t[1])],
            edge_pos[&Edge::new(t[0], t[2])],
            edge_pos[&Edge::new(t[1], t[2])],
        ];
        pos.sort_unstable();
        by_last[pos[2]].push(pos);
    }

    let mut rows = Vec::new();
    let mut partial: Vec<T::Label> = Vec::with_capacity(m);
    backtrack(tuple, &labels, &by_last, m, &mut partial, &mut rows);
    let dim = rows.len() / m.max(1);
    Ok(ColoringBasis { triangulation: g.clone(), edge_order, rows, dim })
}

fn backtrack<T>(
    tuple: &T,
    labels: &[T::Label],
    by_last: &[Vec<[usize; 3]>],
    m: usize,
    partial: &mut Vec<T::Label>,
    rows: &mut Vec<T::Label>,
) where
    T: PentagonTuple,
    T::Label: Ord,
{
    let k = partial.len();
    if k == m {
        rows.extend_from_slice(partial);
        return;
    }
    'next_label: for &v in labels {
        for tri in &by_last[k] {
            let a = if tri[0] == k { v } else { partial[tri[0]] };
            let b = if tri[1] == k { v } else { partial[tri[1]] };
            if !tuple.admissible(a, b, v) {
                continue 'next_label;
            }
        }
        partial.push(v);
        backtrack(tuple, labels, by_last, m, partial, rows);
        partial.pop();
    }
}

/// All colorings of the post-flip triangulation that agree with `f` away
/// from the flipped diagonal, each paired with its nonzero 6j coefficient
/// sixj(f(a), f(b), g(i), f(c), f(d), f(j)).
pub fn transfer_candidates<T>(
    f: &Coloring<T::Label>,
    ev: &FlipEvent,
    tuple: &T,
) -> Result<Vec<(Coloring<T::Label>, f64)>>
where
    T: PentagonTuple,
{
    let [a, b, c, d] = ev.quad;
    let fa = f.require(a)?;
    let fb = f.require(b)?;
    let fc = f.require(c)?;
    let fd = f.require(d)?;
    let fj = f.require(ev.removed)?;

    let mut out = Vec::new();
    for i_label in tuple.candidates(fa, fb, fc, fd, fj)? {
        let coeff = tuple.sixj(fa, fb, i_label, fc, fd, fj);
        if coeff == 0.0 {
            continue;
        }
        let mut assignment = f.assignment.clone();
        assignment.remove(&ev.removed);
        assignment.insert(ev.inserted, i_label);
        out.push((Coloring::new(assignment), coeff));
    }
    Ok(out)
}
