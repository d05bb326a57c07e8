//! Combinatorial Delaunay triangulations over strand indices.
//!
//! A `Triangulation` stores only indices; coordinates enter through
//! [`delaunay`], which builds the triangulation of a point snapshot and
//! certifies it (incidence counts, Euler identity, empty circumcircles)
//! before returning.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::point::{
    circumcircle_side, is_collinear, orient2d, CircleSide, Point, COLLINEAR_REL_TOL,
};

/// Unordered pair of strand indices, stored with the smaller index first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(usize, usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Edge {
        assert!(a != b, "an edge needs two distinct vertices");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn lo(self) -> usize {
        self.0
    }

    pub fn hi(self) -> usize {
        self.1
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.0, self.1)
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn shares_vertex(self, other: Edge) -> bool {
        self.contains(other.0) || self.contains(other.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// Triangles are index triples stored sorted.
pub type Triangle = [usize; 3];

fn canonical(a: usize, b: usize, c: usize) -> Triangle {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

/// The three edges of a triangle.
pub fn triangle_edges(t: Triangle) -> [Edge; 3] {
    [
        Edge::new(t[0], t[1]),
        Edge::new(t[0], t[2]),
        Edge::new(t[1], t[2]),
    ]
}

/// A triangulation of the convex hull of n indexed points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    vertex_count: usize,
    triangles: BTreeSet<Triangle>,
    edges: BTreeSet<Edge>,
}

impl Triangulation {
    /// Assemble from explicit triangles; derives the edge set. Performs only
    /// index checks, no geometry — callers that need the Delaunay property
    /// should go through [`delaunay`].
    pub fn from_triangles<I>(vertex_count: usize, triangles: I) -> Result<Triangulation>
    where
        I: IntoIterator<Item = Triangle>,
    {
        let mut tri_set = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for t in triangles {
            let t = canonical(t[0], t[1], t[2]);
            if t[0] == t[1] || t[1] == t[2] {
                return Err(Error::degenerate(format!(
                    "triangle ({},{},{}) repeats a vertex",
                    t[0], t[1], t[2]
                )));
            }
            if t[2] >= vertex_count {
                return Err(Error::degenerate(format!(
                    "triangle vertex {} out of range for {} vertices",
                    t[2], vertex_count
                )));
            }
            edges.extend(triangle_edges(t));
            tri_set.insert(t);
        }
        Ok(Triangulation { vertex_count, triangles: tri_set, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// Edges in increasing lexicographic order (the canonical coloring-basis
    /// order).
    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges.iter().copied().collect()
    }

    pub fn triangles(&self) -> &BTreeSet<Triangle> {
        &self.triangles
    }

    pub fn triangles_with_edge(&self, e: Edge) -> Vec<Triangle> {
        self.triangles
            .iter()
            .copied()
            .filter(|t| t.contains(&e.0) && t.contains(&e.1))
            .collect()
    }

    /// Edges bounding exactly one triangle, i.e. the convex-hull boundary.
    pub fn hull_edges(&self) -> Vec<Edge> {
        self.edges
            .iter()
            .copied()
            .filter(|&e| self.triangles_with_edge(e).len() == 1)
            .collect()
    }

    /// The flip data around an interior edge `removed` = (u,v) with u < v:
    /// the crossing diagonal `inserted` = (w,x) with w < x joining the two
    /// opposite vertices, and the boundary edges (a,b,c,d) = ((u,w), (w,v),
    /// (v,x), (x,u)) walking the quadrilateral from u through w.
    pub fn quad_of(&self, removed: Edge) -> Result<(Edge, [Edge; 4])> {
        let tris = self.triangles_with_edge(removed);
        if tris.len() != 2 {
            return Err(Error::non_generic(format!(
                "edge {removed} bounds {} triangles; a flip needs an interior edge",
                tris.len()
            )));
        }
        let (u, v) = removed.endpoints();
        let mut opposite = tris
            .iter()
            .flat_map(|t| t.iter().copied())
            .filter(|&k| k != u && k != v);
        let mut w = opposite.next().expect("two triangles give two opposite vertices");
        let mut x = opposite.next().expect("two triangles give two opposite vertices");
        if w > x {
            std::mem::swap(&mut w, &mut x);
        }
        let inserted = Edge::new(w, x);
        let quad = [
            Edge::new(u, w),
            Edge::new(w, v),
            Edge::new(v, x),
            Edge::new(x, u),
        ];
        Ok((inserted, quad))
    }

    /// Replace the two triangles around `removed` by the two around
    /// `inserted`, producing the neighbouring triangulation.
    pub fn apply_flip(&self, removed: Edge, inserted: Edge) -> Result<Triangulation> {
        let (expected, _) = self.quad_of(removed)?;
        if expected != inserted {
            return Err(Error::non_generic(format!(
                "flip of {removed} inserts {expected}, not {inserted}"
            )));
        }
        if self.edges.contains(&inserted) {
            return Err(Error::non_generic(format!(
                "inserted edge {inserted} already present"
            )));
        }
        let (u, v) = removed.endpoints();
        let (w, x) = inserted.endpoints();
        let mut triangles = self.triangles.clone();
        for t in self.triangles_with_edge(removed) {
            triangles.remove(&t);
        }
        triangles.insert(canonical(u, w, x));
        triangles.insert(canonical(v, w, x));
        let mut edges = self.edges.clone();
        edges.remove(&removed);
        edges.insert(inserted);
        Ok(Triangulation { vertex_count: self.vertex_count, triangles, edges })
    }

    /// Certify the full Delaunay contract against the coordinates:
    /// non-degenerate triangles, interior/hull incidence counts, a single
    /// closed hull cycle, the Euler identity, and empty circumcircles.
    pub fn verify(&self, points: &[Point]) -> Result<()> {
        assert_eq!(points.len(), self.vertex_count, "coordinate count mismatch");
        let n = self.vertex_count;

        let mut seen = vec![false; n];
        for t in &self.triangles {
            for &v in t {
                seen[v] = true;
            }
            if is_collinear(points[t[0]], points[t[1]], points[t[2]]) {
                return Err(Error::degenerate(format!(
                    "triangle ({},{},{}) is collinear",
                    t[0], t[1], t[2]
                )));
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::degenerate(format!(
                "vertex {v} belongs to no triangle"
            )));
        }

        let mut incidence: BTreeMap<Edge, usize> = BTreeMap::new();
        for t in &self.triangles {
            for e in triangle_edges(*t) {
                *incidence.entry(e).or_insert(0) += 1;
            }
        }
        if incidence.keys().copied().collect::<BTreeSet<_>>() != self.edges {
            return Err(Error::degenerate(
                "edge set disagrees with triangle incidence",
            ));
        }
        let mut hull_degree = vec![0usize; n];
        let mut hull_edge_count = 0usize;
        for (&e, &count) in &incidence {
            match count {
                1 => {
                    hull_edge_count += 1;
                    hull_degree[e.lo()] += 1;
                    hull_degree[e.hi()] += 1;
                }
                2 => {}
                k => {
                    return Err(Error::degenerate(format!(
                        "edge {e} bounds {k} triangles"
                    )));
                }
            }
        }
        let hull_vertex_count = hull_degree.iter().filter(|&&d| d > 0).count();
        if hull_degree.iter().any(|&d| d != 0 && d != 2) || hull_vertex_count != hull_edge_count {
            return Err(Error::degenerate("hull edges do not form a single cycle"));
        }

        let h = hull_vertex_count;
        if self.triangles.len() != 2 * n - h - 2 || self.edges.len() != 3 * n - h - 3 {
            return Err(Error::degenerate(format!(
                "Euler counts violated: {} triangles, {} edges, {h} hull vertices of {n}",
                self.triangles.len(),
                self.edges.len()
            )));
        }

        for t in &self.triangles {
            let (p, q, r) = (points[t[0]], points[t[1]], points[t[2]]);
            let mut on_circle = Vec::new();
            for (s, &ps) in points.iter().enumerate() {
                if t.contains(&s) {
                    continue;
                }
                match circumcircle_side(p, q, r, ps) {
                    CircleSide::Inside => {
                        return Err(Error::degenerate(format!(
                            "point {s} lies strictly inside the circumcircle of ({},{},{})",
                            t[0], t[1], t[2]
                        )));
                    }
                    CircleSide::On => on_circle.push(s),
                    CircleSide::Outside => {}
                }
            }
            if let Some(&s) = on_circle.first() {
                return Err(Error::degenerate(format!(
                    "points ({},{},{}) and {s} are cocircular",
                    t[0], t[1], t[2]
                )));
            }
        }
        Ok(())
    }
}

/// Strict right-of-directed-line test used for hull visibility.
fn strictly_right(p: Point, q: Point, r: Point) -> bool {
    let scale = p.magnitude().max(q.magnitude()).max(r.magnitude()).max(1e-300);
    orient2d(p, q, r) < -(COLLINEAR_REL_TOL * scale * scale)
}

/// Build the Delaunay triangulation of a point snapshot.
///
/// Incremental scan in lexicographic order (fanning new points onto strictly
/// visible hull edges), followed by Lawson flip passes until every interior
/// edge is locally Delaunay, followed by full certification. Cocircular and
/// collinear degeneracies surface as `DegenerateConfiguration`: the queried
/// time is singular and the caller should perturb it.
pub fn delaunay(points: &[Point]) -> Result<Triangulation> {
    let n = points.len();
    if n < 3 {
        return Err(Error::degenerate(format!("need at least 3 points, got {n}")));
    }
    let scale = points.iter().map(|p| p.magnitude()).fold(1.0f64, f64::max);
    for i in 0..n {
        for j in i + 1..n {
            if points[i].dist(points[j]) <= 1e-12 * scale {
                return Err(Error::degenerate(format!("points {i} and {j} coincide")));
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[a].lex_cmp(points[b]).then(a.cmp(&b)));

    // First point that breaks collinearity with the leading pair; everything
    // before it is a monotone collinear chain.
    let apex_pos = (2..n)
        .find(|&k| !is_collinear(points[order[0]], points[order[1]], points[order[k]]))
        .ok_or_else(|| Error::degenerate("all points are collinear"))?;
    let apex = order[apex_pos];

    let mut triangles: BTreeSet<Triangle> = BTreeSet::new();
    for pair in order[..apex_pos].windows(2) {
        if is_collinear(points[pair[0]], points[pair[1]], points[apex]) {
            return Err(Error::degenerate(
                "initial fan produced a collinear triangle",
            ));
        }
        triangles.insert(canonical(pair[0], pair[1], apex));
    }

    // Counterclockwise hull polygon, flat collinear chain vertices included.
    let mut hull: Vec<usize> = if orient2d(points[order[0]], points[order[1]], points[apex]) > 0.0
    {
        order[..apex_pos].iter().copied().chain([apex]).collect()
    } else {
        order[..apex_pos].iter().rev().copied().chain([apex]).collect()
    };

    for &p in &order[apex_pos + 1..] {
        let len = hull.len();
        let visible: Vec<usize> = (0..len)
            .filter(|&e| strictly_right(points[hull[e]], points[hull[(e + 1) % len]], points[p]))
            .collect();
        if visible.is_empty() {
            return Err(Error::degenerate(format!(
                "point {p} sees no hull edge; configuration is degenerate"
            )));
        }
        // The visible edges must form one contiguous cyclic run.
        let start = (0..len)
            .find(|&e| visible.contains(&e) && !visible.contains(&((e + len - 1) % len)))
            .ok_or_else(|| Error::degenerate(format!("point {p} sees the whole hull")))?;
        let mut run = Vec::new();
        let mut e = start;
        while visible.contains(&e) {
            run.push(e);
            e = (e + 1) % len;
        }
        if run.len() != visible.len() {
            return Err(Error::degenerate(format!(
                "hull visibility from point {p} is not contiguous"
            )));
        }
        for &e in &run {
            triangles.insert(canonical(hull[e], hull[(e + 1) % len], p));
        }
        // Replace the interior of the visible arc with p.
        let arc_end = (start + run.len()) % len; // first invisible edge index
        let mut new_hull = Vec::with_capacity(len - run.len() + 2);
        let mut k = arc_end;
        loop {
            new_hull.push(hull[k]);
            if k == start {
                break;
            }
            k = (k + 1) % len;
        }
        new_hull.push(p);
        hull = new_hull;
    }

    lawson_passes(n, &mut triangles, points)?;

    let tri = Triangulation::from_triangles(n, triangles)?;
    tri.verify(points)?;
    Ok(tri)
}

/// Flip interior edges whose opposite vertex sits strictly inside the
/// circumcircle until none remains. Terminates because each flip increases
/// the minimum-angle vector; the pass limit is a circuit breaker only.
fn lawson_passes(n: usize, triangles: &mut BTreeSet<Triangle>, points: &[Point]) -> Result<()> {
    let pass_limit = 3 * n * n + 16;
    for _ in 0..pass_limit {
        let mut incidence: BTreeMap<Edge, Vec<Triangle>> = BTreeMap::new();
        for t in triangles.iter() {
            for e in triangle_edges(*t) {
                incidence.entry(e).or_default().push(*t);
            }
        }
        let mut flipped = false;
        for (edge, tris) in incidence {
            if tris.len() != 2 {
                continue;
            }
            if !triangles.contains(&tris[0]) || !triangles.contains(&tris[1]) {
                continue; // consumed by an earlier flip this pass
            }
            let (u, v) = edge.endpoints();
            let opp: Vec<usize> = tris
                .iter()
                .flat_map(|t| t.iter().copied())
                .filter(|&k| k != u && k != v)
                .collect();
            let (w, x) = (opp[0], opp[1]);
            if circumcircle_side(points[u], points[v], points[w], points[x])
                != CircleSide::Inside
            {
                continue;
            }
            // Guard: the flip must produce two non-degenerate triangles with
            // u and v on strictly opposite sides of the new diagonal.
            let o1 = orient2d(points[w], points[x], points[u]);
            let o2 = orient2d(points[w], points[x], points[v]);
            if o1 * o2 >= 0.0
                || is_collinear(points[w], points[x], points[u])
                || is_collinear(points[w], points[x], points[v])
            {
                continue;
            }
            triangles.remove(&tris[0]);
            triangles.remove(&tris[1]);
            triangles.insert(canonical(u, w, x));
            triangles.insert(canonical(v, w, x));
            flipped = true;
        }
        if !flipped {
            return Ok(());
        }
    }
    Err(Error::degenerate(
        "Delaunay flip passes did not converge; configuration is near-degenerate",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn simplex_is_one_triangle() {
        let t = delaunay(&pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])).unwrap();
        assert_eq!(t.triangles().len(), 1);
        assert_eq!(t.edges().len(), 3);
    }

    #[test]
    fn square_is_degenerate() {
        let err = delaunay(&pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)])).unwrap_err();
        assert!(matches!(err, Error::DegenerateConfiguration { .. }));
    }

    #[test]
    fn all_collinear_is_degenerate() {
        let err = delaunay(&pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)])).unwrap_err();
        assert!(matches!(err, Error::DegenerateConfiguration { .. }));
    }

    #[test]
    fn duplicate_points_are_degenerate() {
        let err = delaunay(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)])).unwrap_err();
        assert!(matches!(err, Error::DegenerateConfiguration { .. }));
    }

    #[test]
    fn five_point_orbit_snapshot_counts() {
        // Equilateral outer triangle with two interior points on the x-axis;
        // hull has 3 vertices, so Euler gives 5 triangles and 9 edges.
        let s3 = 3.0f64.sqrt() / 2.0;
        let t = delaunay(&pts(&[
            (0.0, 0.0),
            (1.0 / 3.0, 0.0),
            (-0.5, s3),
            (-0.5, -s3),
            (1.0, 0.0),
        ]))
        .unwrap();
        assert_eq!(t.triangles().len(), 5);
        assert_eq!(t.edges().len(), 9);
        assert_eq!(t.hull_edges().len(), 3);
    }

    #[test]
    fn collinear_chain_stays_on_the_hull() {
        let t = delaunay(&pts(&[
            (0.0, 0.0),
            (1.0, 0.0),
            (2.0, 0.0),
            (3.0, 0.0),
            (0.0, 1.0),
        ]))
        .unwrap();
        // All five points are hull vertices (three of them flat).
        assert_eq!(t.hull_edges().len(), 5);
        assert_eq!(t.triangles().len(), 3);
        assert_eq!(t.edges().len(), 7);
    }

    #[test]
    fn flip_roundtrip_restores_the_triangulation() {
        let points = pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 1.0), (1.0, -2.0)]);
        let t = delaunay(&points).unwrap();
        assert!(t.edges().contains(&Edge::new(0, 1)));
        let (inserted, quad) = t.quad_of(Edge::new(0, 1)).unwrap();
        assert_eq!(inserted, Edge::new(2, 3));
        assert_eq!(
            quad,
            [Edge::new(0, 2), Edge::new(1, 2), Edge::new(1, 3), Edge::new(0, 3)]
        );
        let flipped = t.apply_flip(Edge::new(0, 1), inserted).unwrap();
        assert!(flipped.edges().contains(&Edge::new(2, 3)));
        assert!(!flipped.edges().contains(&Edge::new(0, 1)));
        let back = flipped.apply_flip(Edge::new(2, 3), Edge::new(0, 1)).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn hull_edge_cannot_flip() {
        let t = delaunay(&pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 1.0), (1.0, -2.0)])).unwrap();
        let err = t.quad_of(Edge::new(0, 3)).unwrap_err();
        assert!(matches!(err, Error::NonGenericBraid { .. }));
    }
}
