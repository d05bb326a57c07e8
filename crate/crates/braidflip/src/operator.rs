//! Per-flip linear operators on coloring spaces, their composition into the
//! braid invariant, spectral analysis, and the certification procedures for
//! a run: pentagon checks on explicit configurations, commutation of
//! edge-disjoint flips, reverse-flip inverses, and deterministic transport
//! of Ptolemy (edge-length) labels.

use std::collections::BTreeMap;

use nalgebra::{Complex, DMatrix};

use crate::coloring::{enumerate_colorings, Coloring, ColoringBasis};
use crate::error::{Error, Result};
use crate::geometry::{
    delaunay, extract_flip_sequence, initial_triangulation, Edge, FlipEvent, Point, StrandSystem,
    Triangulation,
};
use crate::pentagon::{PentagonTuple, PtolemyTuple};

/// Absolute part of the mixed tolerance for entrywise operator comparison.
pub const ENTRY_ABS_TOL: f64 = 1e-9;

/// Relative part of the mixed tolerance for entrywise operator comparison.
pub const ENTRY_REL_TOL: f64 = 1e-7;

/// Default relative singular-value threshold below which a direction counts
/// toward an eigenspace in [`eigen_multiplicity`].
pub const EIGEN_RANK_TOL: f64 = 1e-8;

/// Default radius for grouping numerically coincident eigenvalues.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-6;

/// Scaled tolerance for the two-path pentagon comparison.
const PENTAGON_ENTRY_TOL: f64 = 1e-8;

/// Scaled tolerance for agreement of transported Euclidean edge lengths.
const EUCLIDEAN_TRANSPORT_TOL: f64 = 1e-9;

/// Tolerance for the reverse-flip inverse certification in [`analyze_braid`].
const INVERSE_GATE_TOL: f64 = 1e-9;

fn entries_close(x: f64, y: f64, abs_tol: f64, rel_tol: f64) -> bool {
    (x - y).abs() <= abs_tol + rel_tol * x.abs().max(y.abs())
}

/// The linear map a single flip induces between the coloring spaces of its
/// source and target triangulations.
///
/// Stored column-wise and sparse: column `f` lists the `(target_row,
/// coefficient)` pairs of the image of the `f`-th source coloring. A column
/// never has more nonzeros than there are labels, so the whole operator is
/// linear in the source dimension. The source and target triangulations are
/// kept so that composition can verify that consecutive operators chain.
#[derive(Debug, Clone)]
pub struct FlipOperator {
    source_tri: Triangulation,
    target_tri: Triangulation,
    source_dim: usize,
    target_dim: usize,
    columns: Vec<Vec<(usize, f64)>>,
}

impl FlipOperator {
    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn source_triangulation(&self) -> &Triangulation {
        &self.source_tri
    }

    pub fn target_triangulation(&self) -> &Triangulation {
        &self.target_tri
    }

    /// The sparse image of the `f`-th source basis coloring.
    pub fn column(&self, f: usize) -> &[(usize, f64)] {
        &self.columns[f]
    }

    /// Total number of stored nonzero coefficients.
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Left-multiply a dense matrix whose rows live in the source space.
    pub fn apply_to_dense(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(
            m.nrows(),
            self.source_dim,
            "matrix rows must match the operator's source dimension"
        );
        let cols = m.ncols();
        let mut out = DMatrix::<f64>::zeros(self.target_dim, cols);
        for s in 0..self.source_dim {
            for &(t, v) in &self.columns[s] {
                for c in 0..cols {
                    out[(t, c)] += v * m[(s, c)];
                }
            }
        }
        out
    }

    /// Densify. Only sensible for small dimensions.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::<f64>::zeros(self.target_dim, self.source_dim);
        for s in 0..self.source_dim {
            for &(t, v) in &self.columns[s] {
                out[(t, s)] = v;
            }
        }
        out
    }
}

/// Assemble the flip operator of one event from the bases on either side.
///
/// Column `f`: read the quad and diagonal labels of the `f`-th source
/// coloring, then for every candidate label `i` of the new diagonal with a
/// nonzero coefficient `sixj(f(a), f(b), i, f(c), f(d), f(j))`, locate the
/// relabeled coloring in the target basis and record the entry.
pub fn flip_operator<T>(
    ev: &FlipEvent,
    before: &ColoringBasis<T::Label>,
    after: &ColoringBasis<T::Label>,
    tuple: &T,
) -> Result<FlipOperator>
where
    T: PentagonTuple,
    T::Label: Ord,
{
    let source_tri = before.triangulation();
    let target_tri = after.triangulation();

    // The event must be exactly the flip that turns the source triangulation
    // into the target one, with the quad it claims.
    let (expected_inserted, expected_quad) = source_tri.quad_of(ev.removed)?;
    if expected_inserted != ev.inserted || expected_quad != ev.quad {
        return Err(Error::basis_mismatch(format!(
            "event (remove {}, insert {}) does not match the source triangulation",
            ev.removed, ev.inserted
        )));
    }
    if &source_tri.apply_flip(ev.removed, ev.inserted)? != target_tri {
        return Err(Error::basis_mismatch(
            "target basis does not belong to the flipped triangulation",
        ));
    }

    let m = before.edge_order().len();
    let pos_before = |e: Edge| {
        before
            .edge_position(e)
            .ok_or_else(|| Error::basis_mismatch(format!("edge {e} missing from source basis")))
    };
    let quad_pos = [
        pos_before(ev.quad[0])?,
        pos_before(ev.quad[1])?,
        pos_before(ev.quad[2])?,
        pos_before(ev.quad[3])?,
    ];
    let removed_pos = pos_before(ev.removed)?;
    let inserted_pos = after.edge_position(ev.inserted).ok_or_else(|| {
        Error::basis_mismatch(format!("edge {} missing from target basis", ev.inserted))
    })?;

    // Position map for the edges both triangulations share.
    let mut to_after = vec![usize::MAX; m];
    for (k, &e) in before.edge_order().iter().enumerate() {
        if k == removed_pos {
            continue;
        }
        to_after[k] = after
            .edge_position(e)
            .ok_or_else(|| Error::basis_mismatch(format!("edge {e} missing from target basis")))?;
    }

    let mut columns = Vec::with_capacity(before.dim());
    let mut image = Vec::new();
    for f in 0..before.dim() {
        let row = before.label_row(f);
        let fa = row[quad_pos[0]];
        let fb = row[quad_pos[1]];
        let fc = row[quad_pos[2]];
        let fd = row[quad_pos[3]];
        let fj = row[removed_pos];
        let mut col = Vec::new();
        for i_label in tuple.candidates(fa, fb, fc, fd, fj)? {
            let coeff = tuple.sixj(fa, fb, i_label, fc, fd, fj);
            if coeff == 0.0 {
                continue;
            }
            image.clear();
            image.resize(m, i_label);
            for (k, &label) in row.iter().enumerate() {
                if k != removed_pos {
                    image[to_after[k]] = label;
                }
            }
            image[inserted_pos] = i_label;
            let t = after.position_of(&image).ok_or_else(|| {
                Error::basis_mismatch(format!(
                    "image of source coloring {f} is missing from the target basis"
                ))
            })?;
            col.push((t, coeff));
        }
        columns.push(col);
    }

    Ok(FlipOperator {
        source_tri: source_tri.clone(),
        target_tri: target_tri.clone(),
        source_dim: before.dim(),
        target_dim: after.dim(),
        columns,
    })
}

/// The composed operator of a closed flip sequence: a square matrix on the
/// coloring space of the braid's initial triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantOperator {
    matrix: DMatrix<f64>,
    event_count: usize,
}

impl InvariantOperator {
    /// Wrap an explicit square matrix (mostly useful in tests and tooling;
    /// the pipeline builds operators through [`compose`]).
    pub fn from_matrix(matrix: DMatrix<f64>, event_count: usize) -> InvariantOperator {
        assert_eq!(matrix.nrows(), matrix.ncols(), "invariant operators are square");
        InvariantOperator { matrix, event_count }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn event_count(&self) -> usize {
        self.event_count
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Largest absolute entrywise deviation from the identity matrix.
    pub fn max_deviation_from_identity(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let want = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((self.matrix[(r, c)] - want).abs());
            }
        }
        worst
    }
}

fn dims_of(b: &Triangulation) -> String {
    format!("{} vertices / {} edges", b.vertex_count(), b.edge_list().len())
}

/// Compose a chain of flip operators over the given starting basis, earliest
/// flip applied first. The chain must begin and end on the starting basis's
/// triangulation; an empty chain yields the exact identity.
pub fn compose<L>(basis: &ColoringBasis<L>, ops: &[FlipOperator]) -> Result<InvariantOperator>
where
    L: Copy + Ord + std::fmt::Debug,
{
    let dim = basis.dim();
    if ops.is_empty() {
        return Ok(InvariantOperator {
            matrix: DMatrix::<f64>::identity(dim, dim),
            event_count: 0,
        });
    }
    if ops[0].source_tri != *basis.triangulation() || ops[0].source_dim != dim {
        return Err(Error::basis_mismatch(format!(
            "first operator's source ({}) is not the starting basis",
            dims_of(&ops[0].source_tri)
        )));
    }
    for (k, pair) in ops.windows(2).enumerate() {
        if pair[0].target_tri != pair[1].source_tri || pair[0].target_dim != pair[1].source_dim {
            return Err(Error::basis_mismatch(format!(
                "operators {k} and {} do not chain",
                k + 1
            )));
        }
    }
    let last = ops.last().expect("nonempty");
    if last.target_tri != *basis.triangulation() || last.target_dim != dim {
        return Err(Error::basis_mismatch(
            "flip sequence does not return to the starting triangulation",
        ));
    }
    let mut acc = DMatrix::<f64>::identity(dim, dim);
    for op in ops {
        acc = op.apply_to_dense(&acc);
    }
    Ok(InvariantOperator {
        matrix: acc,
        event_count: ops.len(),
    })
}

/// Dimension of the eigenspace of `lambda`, counted as the number of
/// singular values of `A - lambda I` that fall below `tol` times the largest
/// one. Use [`EIGEN_RANK_TOL`] unless there is a reason not to.
pub fn eigen_multiplicity(op: &InvariantOperator, lambda: f64, tol: f64) -> usize {
    let n = op.dim();
    let mut shifted = op.matrix.clone();
    for k in 0..n {
        shifted[(k, k)] -= lambda;
    }
    let sv = shifted.svd(false, false).singular_values;
    let largest = sv.iter().fold(0.0f64, |m, &v| m.max(v));
    if largest == 0.0 {
        return n;
    }
    sv.iter().filter(|&&v| v < tol * largest).count()
}

/// The complex spectrum of a real square matrix, sorted by real part then
/// imaginary part.
///
/// The invariant operators here routinely carry eigenvalues of very high
/// multiplicity, which stalls shift-based QR iterations without aggressive
/// deflation (nalgebra's Schur spins forever on them); faer's eigensolver
/// handles these spectra, so that is what backs this function. Convergence
/// failure is still surfaced as [`Error::NumericGateFailed`] rather than
/// papered over.
pub fn sorted_spectrum(matrix: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let m = faer::Mat::from_fn(matrix.nrows(), matrix.ncols(), |i, j| matrix[(i, j)]);
    let mut vals: Vec<Complex<f64>> = m
        .eigenvalues()
        .map_err(|e| Error::numeric_gate(format!("eigenvalue computation failed: {e:?}")))?;
    vals.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(vals)
}

/// Group the eigenvalues of the operator into clusters of radius `tol`
/// (representative, multiplicity), sorted by real then imaginary part of the
/// representative. Use [`EIGEN_CLUSTER_TOL`] unless there is a reason not to.
pub fn eigenvalue_clusters(op: &InvariantOperator, tol: f64) -> Result<Vec<(Complex<f64>, usize)>> {
    let mut out: Vec<(Complex<f64>, usize)> = Vec::new();
    for v in sorted_spectrum(&op.matrix)? {
        if let Some((rep, count)) = out.last_mut() {
            if (v - *rep).norm() <= tol {
                // Track the running mean so long flat clusters do not drift.
                *rep = (*rep * (*count as f64) + v) / (*count as f64 + 1.0);
                *count += 1;
                continue;
            }
        }
        out.push((v, 1));
    }
    Ok(out)
}

/// Whether two operators have the same spectrum: both sorted spectra agree
/// pairwise within `tol` in the complex plane.
pub fn spectra_match(a: &InvariantOperator, b: &InvariantOperator, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Ok(false);
    }
    Ok(sorted_spectrum(&a.matrix)?
        .iter()
        .zip(sorted_spectrum(&b.matrix)?)
        .all(|(x, y)| (x - y).norm() <= tol))
}

/// Largest absolute entrywise difference between two equally sized matrices.
pub fn max_entry_deviation(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.nrows(), b.nrows(), "matrix shapes differ");
    assert_eq!(a.ncols(), b.ncols(), "matrix shapes differ");
    let mut worst = 0.0f64;
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            worst = worst.max((a[(r, c)] - b[(r, c)]).abs());
        }
    }
    worst
}

/// Entrywise comparison of two equally sized matrices under a mixed
/// absolute/relative tolerance.
pub fn matrices_match(a: &DMatrix<f64>, b: &DMatrix<f64>, abs_tol: f64, rel_tol: f64) -> bool {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return false;
    }
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            if !entries_close(a[(r, c)], b[(r, c)], abs_tol, rel_tol) {
                return false;
            }
        }
    }
    true
}

/// The column of `second ∘ first` at source index `f`, as a sparse map.
fn composed_column(first: &FlipOperator, second: &FlipOperator, f: usize) -> BTreeMap<usize, f64> {
    let mut acc = BTreeMap::new();
    for &(mid, v1) in &first.columns[f] {
        for &(t, v2) in &second.columns[mid] {
            *acc.entry(t).or_insert(0.0) += v1 * v2;
        }
    }
    acc
}

fn sparse_columns_close(
    a: &BTreeMap<usize, f64>,
    b: &BTreeMap<usize, f64>,
    abs_tol: f64,
    rel_tol: f64,
) -> bool {
    for (&k, &v) in a {
        let w = b.get(&k).copied().unwrap_or(0.0);
        if !entries_close(v, w, abs_tol, rel_tol) {
            return false;
        }
    }
    for (&k, &w) in b {
        if !a.contains_key(&k) && !entries_close(0.0, w, abs_tol, rel_tol) {
            return false;
        }
    }
    true
}

/// Everything [`analyze_braid`] certifies about one strand system: the
/// extracted flip sequence, the coloring basis at time zero, and the
/// composed operator acting on it.
#[derive(Debug, Clone)]
pub struct BraidAnalysis<L> {
    pub events: Vec<FlipEvent>,
    pub basis: ColoringBasis<L>,
    pub operator: InvariantOperator,
}

/// Run the whole pipeline on a strand system: extract the flip sequence,
/// enumerate the coloring bases along it, assemble a flip operator per
/// event, certify each against its reverse flip, and compose.
///
/// The per-event certification multiplies the reverse-flip operator against
/// the forward one column by column and requires the identity to within
/// 1e-9; a failure means the supplied tuple does not satisfy the pentagon /
/// orthogonality algebra on this data and surfaces as
/// [`Error::NumericGateFailed`].
pub fn analyze_braid<T>(
    s: &StrandSystem,
    tuple: &T,
    initial_samples: usize,
    time_tolerance: f64,
) -> Result<BraidAnalysis<T::Label>>
where
    T: PentagonTuple,
    T::Label: Ord,
{
    let events = extract_flip_sequence(s, initial_samples, time_tolerance)?;
    let start = initial_triangulation(s, initial_samples)?;

    let mut chain = vec![start];
    for ev in &events {
        let next = chain
            .last()
            .expect("chain starts nonempty")
            .apply_flip(ev.removed, ev.inserted)?;
        chain.push(next);
    }

    let mut bases = Vec::with_capacity(chain.len());
    for tri in &chain {
        bases.push(enumerate_colorings(tri, tuple)?);
    }
    let dim = bases[0].dim();
    if let Some(k) = bases.iter().position(|b| b.dim() != dim) {
        return Err(Error::basis_mismatch(format!(
            "coloring dimension changed from {dim} to {} after event {}",
            bases[k].dim(),
            k
        )));
    }

    let mut ops = Vec::with_capacity(events.len());
    for (k, ev) in events.iter().enumerate() {
        ops.push(flip_operator(ev, &bases[k], &bases[k + 1], tuple)?);
    }

    // Certify each flip operator against its reverse flip.
    let mut unit = BTreeMap::new();
    for (k, ev) in events.iter().enumerate() {
        let reverse = flip_operator(&ev.inverse(), &bases[k + 1], &bases[k], tuple)?;
        for f in 0..dim {
            let round_trip = composed_column(&ops[k], &reverse, f);
            unit.clear();
            unit.insert(f, 1.0);
            if !sparse_columns_close(&round_trip, &unit, INVERSE_GATE_TOL, 0.0) {
                return Err(Error::numeric_gate(format!(
                    "reverse flip does not invert event {k} on basis coloring {f}"
                )));
            }
        }
    }

    let operator = compose(&bases[0], &ops)?;
    let basis = bases.swap_remove(0);
    Ok(BraidAnalysis { events, basis, operator })
}

/// Whether the operators of two edge-disjoint flips commute on the given
/// basis: both orders of application are compared column by column in
/// sparse form, so this stays affordable at large dimensions.
///
/// The same event twice commutes trivially. Events whose quads share an
/// edge are rejected with [`Error::QuadsOverlap`]; their operators act on
/// overlapping degrees of freedom and have no reason to commute.
pub fn verify_commutativity<T>(
    ev1: &FlipEvent,
    ev2: &FlipEvent,
    before: &ColoringBasis<T::Label>,
    tuple: &T,
) -> Result<bool>
where
    T: PentagonTuple,
    T::Label: Ord,
{
    if ev1 == ev2 {
        return Ok(true);
    }
    if !ev1.is_disjoint_from(ev2) {
        return Err(Error::QuadsOverlap);
    }

    let t0 = before.triangulation();
    let t_first = t0.apply_flip(ev1.removed, ev1.inserted)?;
    let t_both = t_first.apply_flip(ev2.removed, ev2.inserted)?;
    let t_second = t0.apply_flip(ev2.removed, ev2.inserted)?;
    let t_both_other = t_second.apply_flip(ev1.removed, ev1.inserted)?;
    if t_both != t_both_other {
        return Err(Error::basis_mismatch(
            "edge-disjoint flips should land on the same triangulation in either order",
        ));
    }

    let basis_first = enumerate_colorings(&t_first, tuple)?;
    let basis_second = enumerate_colorings(&t_second, tuple)?;
    let basis_end = enumerate_colorings(&t_both, tuple)?;

    let m1 = flip_operator(ev1, before, &basis_first, tuple)?;
    let m2 = flip_operator(ev2, &basis_first, &basis_end, tuple)?;
    let n1 = flip_operator(ev2, before, &basis_second, tuple)?;
    let n2 = flip_operator(ev1, &basis_second, &basis_end, tuple)?;

    for f in 0..before.dim() {
        let one_order = composed_column(&m1, &m2, f);
        let other_order = composed_column(&n1, &n2, f);
        if !sparse_columns_close(&one_order, &other_order, ENTRY_ABS_TOL, ENTRY_REL_TOL) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Flip `removed` in `tri` purely combinatorially, producing the event (with
/// a zero-width time bracket) and the resulting triangulation.
pub fn synthetic_flip(tri: &Triangulation, removed: Edge) -> Result<(FlipEvent, Triangulation)> {
    let (inserted, quad) = tri.quad_of(removed)?;
    let after = tri.apply_flip(removed, inserted)?;
    let ev = FlipEvent {
        t_lo: 0.0,
        t_hi: 0.0,
        removed,
        inserted,
        quad,
    };
    Ok((ev, after))
}

/// The convex-position cyclic order of a point set: indices in
/// counterclockwise hull order, starting from the lexicographically smallest
/// point. Errors if any point is interior (the set is not in convex
/// position) or if the configuration is degenerate.
fn convex_ring(points: &[Point]) -> Result<Vec<usize>> {
    let tri = delaunay(points)?;
    let hull = tri.hull_edges();
    if hull.len() != points.len() {
        return Err(Error::degenerate(
            "points are not in convex position: a vertex lies inside the hull",
        ));
    }
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    for e in &hull {
        let (u, v) = e.endpoints();
        neighbors[u].push(v);
        neighbors[v].push(u);
    }
    if neighbors.iter().any(|n| n.len() != 2) {
        return Err(Error::degenerate("hull is not a single simple cycle"));
    }
    let start = (0..points.len())
        .min_by(|&i, &j| points[i].lex_cmp(points[j]))
        .expect("point set is nonempty");
    let mut ring = vec![start];
    let mut prev = start;
    let mut cur = neighbors[start][0].min(neighbors[start][1]);
    while cur != start {
        ring.push(cur);
        let next = if neighbors[cur][0] == prev {
            neighbors[cur][1]
        } else {
            neighbors[cur][0]
        };
        prev = cur;
        cur = next;
    }
    let mut doubled_area = 0.0;
    for k in 0..ring.len() {
        let p = points[ring[k]];
        let q = points[ring[(k + 1) % ring.len()]];
        doubled_area += p.x * q.y - q.x * p.y;
    }
    if doubled_area < 0.0 {
        ring[1..].reverse();
    }
    Ok(ring)
}

/// The fan of a convex polygon from ring position `v`: all diagonals out of
/// that vertex.
fn fan_triangulation(ring: &[usize], v: usize) -> Result<Triangulation> {
    let n = ring.len();
    let at = |k: usize| ring[(v + k) % n];
    let triangles = (1..n - 1).map(|k| [at(0), at(k), at(k + 1)]);
    Triangulation::from_triangles(n, triangles)
}

/// The events of flipping `removals` in order, starting from `start`.
fn synthetic_events(start: &Triangulation, removals: &[Edge]) -> Result<Vec<FlipEvent>> {
    let mut tri = start.clone();
    let mut events = Vec::with_capacity(removals.len());
    for &removed in removals {
        let (ev, next) = synthetic_flip(&tri, removed)?;
        events.push(ev);
        tri = next;
    }
    Ok(events)
}

/// The two standard flip paths between adjacent fans of a convex pentagon,
/// as lists of removed diagonals: a two-flip path and a three-flip path from
/// the fan at ring position 0 to the fan at ring position 1.
fn pentagon_paths(ring: &[usize]) -> ([Edge; 2], [Edge; 3]) {
    let d = |i: usize, j: usize| Edge::new(ring[i], ring[j]);
    ([d(0, 2), d(0, 3)], [d(0, 3), d(0, 2), d(2, 4)])
}

/// Compose the flip operators along a path of removals, densely.
fn path_product<T>(
    start: &Triangulation,
    removals: &[Edge],
    tuple: &T,
) -> Result<(DMatrix<f64>, Triangulation)>
where
    T: PentagonTuple,
    T::Label: Ord,
{
    let mut tri = start.clone();
    let mut basis = enumerate_colorings(&tri, tuple)?;
    let mut acc = DMatrix::<f64>::identity(basis.dim(), basis.dim());
    for &removed in removals {
        let (ev, next) = synthetic_flip(&tri, removed)?;
        let next_basis = enumerate_colorings(&next, tuple)?;
        let op = flip_operator(&ev, &basis, &next_basis, tuple)?;
        acc = op.apply_to_dense(&acc);
        tri = next;
        basis = next_basis;
    }
    Ok((acc, tri))
}

/// Check the pentagon property of a tuple on an explicit five-point
/// configuration in convex position: the two flip paths between adjacent
/// fans of the pentagon must compose to the same operator, entrywise within
/// 1e-8. Degenerate or non-convex configurations are errors, not `false`.
pub fn verify_pentagon_on_configuration<T>(points: &[Point], tuple: &T) -> Result<bool>
where
    T: PentagonTuple,
    T::Label: Ord,
{
    if points.len() != 5 {
        return Err(Error::degenerate(format!(
            "pentagon check needs exactly five points, got {}",
            points.len()
        )));
    }
    let ring = convex_ring(points)?;
    let fan0 = fan_triangulation(&ring, 0)?;
    let (short_path, long_path) = pentagon_paths(&ring);
    let (product_short, end_short) = path_product(&fan0, &short_path, tuple)?;
    let (product_long, end_long) = path_product(&fan0, &long_path, tuple)?;
    if end_short != end_long {
        return Err(Error::basis_mismatch(
            "the two pentagon paths ended on different triangulations",
        ));
    }
    Ok(matrices_match(
        &product_short,
        &product_long,
        PENTAGON_ENTRY_TOL,
        PENTAGON_ENTRY_TOL,
    ))
}

/// Label every edge of a triangulation with its Euclidean length.
pub fn euclidean_edge_lengths(tri: &Triangulation, points: &[Point]) -> Coloring<f64> {
    let map = tri
        .edge_list()
        .into_iter()
        .map(|e| (e, points[e.lo()].dist(points[e.hi()])))
        .collect();
    Coloring::new(map)
}

/// Check deterministic edge-length transport on an explicit five-point
/// configuration: seed the fan of the pentagon with Euclidean edge lengths
/// and transport them along both flip paths; the final labelings must agree
/// within 1e-9 (scaled).
pub fn verify_pentagon_euclidean(points: &[Point]) -> Result<bool> {
    if points.len() != 5 {
        return Err(Error::degenerate(format!(
            "pentagon check needs exactly five points, got {}",
            points.len()
        )));
    }
    let ring = convex_ring(points)?;
    let fan0 = fan_triangulation(&ring, 0)?;
    let seed = euclidean_edge_lengths(&fan0, points);
    let (short_path, long_path) = pentagon_paths(&ring);
    let out_short = ptolemy_propagate(&seed, &synthetic_events(&fan0, &short_path)?)?;
    let out_long = ptolemy_propagate(&seed, &synthetic_events(&fan0, &long_path)?)?;
    if out_short.assignment().len() != out_long.assignment().len() {
        return Ok(false);
    }
    for (e, &x) in out_short.assignment() {
        let Some(y) = out_long.label(*e) else {
            return Ok(false);
        };
        if (x - y).abs() > EUCLIDEAN_TRANSPORT_TOL * x.abs().max(y.abs()).max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Transport a real-valued edge labeling through a flip sequence with the
/// deterministic Ptolemy rule: at each event the new diagonal's label is
/// `(f(a) f(c) + f(b) f(d)) / f(j)`. A (near-)zero diagonal label aborts
/// with the index of the offending event.
pub fn ptolemy_propagate(
    initial: &Coloring<f64>,
    events: &[FlipEvent],
) -> Result<Coloring<f64>> {
    let tuple = PtolemyTuple::new();
    let mut map = initial.assignment().clone();
    for (k, ev) in events.iter().enumerate() {
        let read = |m: &BTreeMap<Edge, f64>, e: Edge| {
            m.get(&e).copied().ok_or_else(|| {
                Error::basis_mismatch(format!("no label on edge {e} at event {k}"))
            })
        };
        let fa = read(&map, ev.quad[0])?;
        let fb = read(&map, ev.quad[1])?;
        let fc = read(&map, ev.quad[2])?;
        let fd = read(&map, ev.quad[3])?;
        let fj = read(&map, ev.removed)?;
        let candidates = tuple.candidates(fa, fb, fc, fd, fj).map_err(|e| match e {
            Error::PtolemyZeroDivision { .. } => Error::PtolemyZeroDivision {
                event_index: Some(k),
            },
            other => other,
        })?;
        map.remove(&ev.removed);
        map.insert(ev.inserted, candidates[0]);
    }
    Ok(Coloring::new(map))
}
