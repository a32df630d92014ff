//! Discrete conformal structures: the weighted cellular surface `Γ`, its dual
//! `Γ*`, and the quad-graph `◊` built on both.
//!
//! Combinatorics are stored as half-edges. Edge `e` has two half-edges:
//! `2e` runs along the reference orientation `tail → head` and belongs to the
//! face on the left of `e`; `2e + 1` runs against it and belongs to the face on
//! the right. The dual edge `e*` runs from the right face to the left face, so
//! it is `e` turned a quarter counterclockwise and `e** = −e`. With this
//! convention each quad `(tail, right, head, left)` is counterclockwise, and
//! the flat coordinate of a translation surface is of type `(1, 0)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::mesh::{self, DisjointSets, EmbeddedMesh, Point3, TopologyReport};
use crate::{DelaunayEdge, Error, Result};

/// Weights at or below this value are treated as Delaunay violations.
pub const DELAUNAY_TOLERANCE: f64 = 1e-10;

/// How edge weights are derived for an embedded mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    /// Circumcenter distance measured in the flat metric of the surface.
    Intrinsic,
    /// Straight-line circumcenter distance in `R³`.
    Extrinsic,
    /// `ρ ≡ 1`.
    Unit,
}

impl WeightScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightScheme::Intrinsic => "intrinsic",
            WeightScheme::Extrinsic => "extrinsic",
            WeightScheme::Unit => "unit",
        }
    }
}

/// An edge traversed along (`forward`) or against its reference orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: usize,
    pub forward: bool,
}

impl Dart {
    pub fn new(edge: usize, forward: bool) -> Self {
        Self { edge, forward }
    }

    pub fn reversed(self) -> Self {
        Self {
            edge: self.edge,
            forward: !self.forward,
        }
    }

    pub fn sign(self) -> f64 {
        if self.forward {
            1.0
        } else {
            -1.0
        }
    }
}

/// Abstract cellular surface: faces are counterclockwise cycles of darts.
///
/// Faces are given by darts rather than vertex lists so that loops and
/// multiple edges (one-vertex tori, coarse square tilings) are representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    pub vertex_count: usize,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Vec<Dart>>,
}

/// The four corners of the quad around edge `e`: primal diagonal `(x, x')`
/// and dual diagonal `(y, y')`, listed counterclockwise as `(x, y, x', y')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quad {
    /// Tail of `e`.
    pub x: usize,
    /// Face on the right of `e`, tail of `e*`.
    pub y: usize,
    /// Head of `e`.
    pub x2: usize,
    /// Face on the left of `e`, head of `e*`.
    pub y2: usize,
}

/// A closed oriented cellular surface with positive edge weights.
///
/// Weights live on `Γ₁` only; `ρ(e*) = 1/ρ(e)` is always derived.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSurfaceGraph {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
    rho: Vec<f64>,
    he_face: Vec<usize>,
    he_next: Vec<usize>,
    he_prev: Vec<usize>,
    face_first: Vec<usize>,
    face_len: Vec<usize>,
    vertex_out: Vec<usize>,
    scheme: WeightScheme,
}

impl WeightedSurfaceGraph {
    /// Builds the structure over arbitrary polygonal cells.
    pub fn from_cells(cells: &CellComplex, rho: Vec<f64>) -> Result<Self> {
        Self::from_cells_with_scheme(cells, rho, WeightScheme::Unit)
    }

    pub(crate) fn from_cells_with_scheme(
        cells: &CellComplex,
        rho: Vec<f64>,
        scheme: WeightScheme,
    ) -> Result<Self> {
        let nv = cells.vertex_count;
        let ne = cells.edges.len();
        if rho.len() != ne {
            return Err(Error::LengthMismatch {
                expected: ne,
                found: rho.len(),
            });
        }
        for (e, &w) in rho.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveWeight { edge: e, value: w });
            }
        }
        for (e, ends) in cells.edges.iter().enumerate() {
            if ends[0] >= nv || ends[1] >= nv {
                return Err(Error::InvalidCells(alloc::format!(
                    "edge {e} references a missing vertex"
                )));
            }
        }

        const UNSET: usize = usize::MAX;
        let nh = 2 * ne;
        let mut he_face = vec![UNSET; nh];
        let mut he_next = vec![UNSET; nh];
        let mut he_prev = vec![UNSET; nh];
        let mut face_first = Vec::with_capacity(cells.faces.len());
        let mut face_len = Vec::with_capacity(cells.faces.len());

        for (f, face) in cells.faces.iter().enumerate() {
            if face.is_empty() {
                return Err(Error::InvalidCells(alloc::format!("face {f} is empty")));
            }
            for (k, d) in face.iter().enumerate() {
                if d.edge >= ne {
                    return Err(Error::InvalidCells(alloc::format!(
                        "face {f} references missing edge {}",
                        d.edge
                    )));
                }
                let next = face[(k + 1) % face.len()];
                let head = dart_head(&cells.edges, *d);
                let tail_next = dart_tail(&cells.edges, next);
                if head != tail_next {
                    return Err(Error::InvalidCells(alloc::format!(
                        "face {f} is not a closed walk at position {k}"
                    )));
                }
            }
            for (k, d) in face.iter().enumerate() {
                let h = half_edge_of(*d);
                if he_face[h] != UNSET {
                    let ends = cells.edges[d.edge];
                    return Err(Error::InconsistentOrientation { endpoints: ends });
                }
                he_face[h] = f;
                let n = half_edge_of(face[(k + 1) % face.len()]);
                he_next[h] = n;
            }
            face_first.push(half_edge_of(face[0]));
            face_len.push(face.len());
        }
        for h in 0..nh {
            if he_face[h] == UNSET {
                let e = h / 2;
                let used = usize::from(he_face[2 * e] != UNSET) + usize::from(he_face[2 * e + 1] != UNSET);
                return Err(Error::NonManifoldEdge {
                    endpoints: cells.edges[e],
                    faces: used,
                });
            }
            he_prev[he_next[h]] = h;
        }

        let origin = |h: usize| {
            let [t, hd] = cells.edges[h / 2];
            if h.is_multiple_of(2) {
                t
            } else {
                hd
            }
        };
        let mut out_count = vec![0usize; nv];
        let mut vertex_out = vec![UNSET; nv];
        for h in 0..nh {
            let v = origin(h);
            out_count[v] += 1;
            if vertex_out[v] == UNSET {
                vertex_out[v] = h;
            }
        }
        for v in 0..nv {
            if vertex_out[v] == UNSET {
                return Err(Error::IsolatedVertex { vertex: v });
            }
            let start = vertex_out[v];
            let mut h = start;
            let mut orbit = 0;
            loop {
                orbit += 1;
                h = he_prev[h] ^ 1;
                if h == start || orbit > out_count[v] {
                    break;
                }
            }
            if orbit != out_count[v] {
                return Err(Error::NonManifoldVertex { vertex: v });
            }
        }

        let mut sets = DisjointSets::new(nv);
        for &[a, b] in &cells.edges {
            sets.union(a, b);
        }
        let components = sets.components();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }

        Ok(Self {
            vertex_count: nv,
            edges: cells.edges.clone(),
            rho,
            he_face,
            he_next,
            he_prev,
            face_first,
            face_len,
            vertex_out,
            scheme,
        })
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.face_first.len()
    }

    pub fn topology_report(&self) -> TopologyReport {
        TopologyReport::from_counts(self.vertex_count, self.edge_count(), self.face_count())
    }

    pub fn genus(&self) -> usize {
        self.topology_report().genus
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn tail(&self, e: usize) -> usize {
        self.edges[e][0]
    }

    pub fn head(&self, e: usize) -> usize {
        self.edges[e][1]
    }

    pub fn left_face(&self, e: usize) -> usize {
        self.he_face[2 * e]
    }

    pub fn right_face(&self, e: usize) -> usize {
        self.he_face[2 * e + 1]
    }

    pub fn rho(&self, e: usize) -> f64 {
        self.rho[e]
    }

    /// Weight of the dual edge `e*`.
    pub fn dual_rho(&self, e: usize) -> f64 {
        1.0 / self.rho[e]
    }

    pub fn weights(&self) -> &[f64] {
        &self.rho
    }

    /// Smallest and largest weight.
    pub fn rho_range(&self) -> (f64, f64) {
        self.rho
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &w| (lo.min(w), hi.max(w)))
    }

    /// Same combinatorics with new weights.
    pub fn with_weights(&self, rho: Vec<f64>) -> Result<Self> {
        if rho.len() != self.edges.len() {
            return Err(Error::LengthMismatch {
                expected: self.edges.len(),
                found: rho.len(),
            });
        }
        if let Some((e, &w)) = rho.iter().enumerate().find(|(_, w)| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::NonPositiveWeight { edge: e, value: w });
        }
        Ok(Self {
            rho,
            ..self.clone()
        })
    }

    pub fn quad(&self, e: usize) -> Quad {
        Quad {
            x: self.tail(e),
            y: self.right_face(e),
            x2: self.head(e),
            y2: self.left_face(e),
        }
    }

    // --- half-edges -------------------------------------------------------

    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn dart(&self, h: usize) -> Dart {
        Dart::new(h / 2, h.is_multiple_of(2))
    }

    pub fn origin(&self, h: usize) -> usize {
        let [t, hd] = self.edges[h / 2];
        if h.is_multiple_of(2) {
            t
        } else {
            hd
        }
    }

    pub fn target(&self, h: usize) -> usize {
        self.origin(h ^ 1)
    }

    pub fn face_of(&self, h: usize) -> usize {
        self.he_face[h]
    }

    pub fn next(&self, h: usize) -> usize {
        self.he_next[h]
    }

    pub fn prev(&self, h: usize) -> usize {
        self.he_prev[h]
    }

    /// Next outgoing half-edge counterclockwise around `origin(h)`.
    pub fn rotate_ccw(&self, h: usize) -> usize {
        self.he_prev[h] ^ 1
    }

    /// Next outgoing half-edge clockwise around `origin(h)`.
    pub fn rotate_cw(&self, h: usize) -> usize {
        self.he_next[h ^ 1]
    }

    pub fn face_degree(&self, f: usize) -> usize {
        self.face_len[f]
    }

    /// Half-edges of face `f` in counterclockwise order, starting from the
    /// first dart the face was built with.
    pub fn face_half_edges(&self, f: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.face_first[f];
        let mut h = start;
        (0..self.face_len[f]).map(move |_| {
            let cur = h;
            h = self.he_next[h];
            cur
        })
    }

    /// Outgoing half-edges of vertex `v` in counterclockwise order.
    pub fn vertex_half_edges(&self, v: usize) -> Vec<usize> {
        let start = self.vertex_out[v];
        let mut out = vec![start];
        let mut h = self.rotate_ccw(start);
        while h != start {
            out.push(h);
            h = self.rotate_ccw(h);
        }
        out
    }

    // --- quad-graph ◊ -----------------------------------------------------

    /// `|◊₀| = |Γ₀| + |Γ*₀|`; primal vertices come first, then faces.
    pub fn diamond_vertex_count(&self) -> usize {
        self.vertex_count + self.face_count()
    }

    /// Endpoints of the ◊-edge carried by half-edge `h`: its origin vertex and
    /// the face it bounds (as a ◊ vertex id).
    pub fn diamond_edge(&self, h: usize) -> [usize; 2] {
        [self.origin(h), self.vertex_count + self.he_face[h]]
    }

    /// ◊ adjacency lists `(neighbor, ◊-edge)` in construction order.
    pub fn diamond_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let nv = self.vertex_count;
        let mut adj = Vec::with_capacity(self.diamond_vertex_count());
        for v in 0..nv {
            adj.push(
                self.vertex_half_edges(v)
                    .into_iter()
                    .map(|h| (nv + self.he_face[h], h))
                    .collect(),
            );
        }
        for f in 0..self.face_count() {
            adj.push(self.face_half_edges(f).map(|h| (self.origin(h), h)).collect());
        }
        adj
    }

    /// The four ◊-edges (half-edges) bounding the quad of `e`, in the order
    /// `(x,y)`, `(y,x')`, `(x',y')`, `(y',x)`.
    pub fn quad_sides(&self, e: usize) -> [usize; 4] {
        let fwd = 2 * e;
        let bwd = 2 * e + 1;
        [self.he_next[bwd], bwd, self.he_next[fwd], fwd]
    }
}

fn half_edge_of(d: Dart) -> usize {
    2 * d.edge + usize::from(!d.forward)
}

fn dart_tail(edges: &[[usize; 2]], d: Dart) -> usize {
    if d.forward {
        edges[d.edge][0]
    } else {
        edges[d.edge][1]
    }
}

fn dart_head(edges: &[[usize; 2]], d: Dart) -> usize {
    if d.forward {
        edges[d.edge][1]
    } else {
        edges[d.edge][0]
    }
}

/// Cell complex of a triangle mesh, with edges numbered as in
/// [`EmbeddedMesh::edges`].
pub fn mesh_cells(mesh: &EmbeddedMesh) -> CellComplex {
    let edges = mesh.edges();
    let mut index = alloc::collections::BTreeMap::new();
    for (e, &[a, b]) in edges.iter().enumerate() {
        index.insert((a, b), Dart::new(e, true));
        index.insert((b, a), Dart::new(e, false));
    }
    let faces = mesh
        .faces()
        .iter()
        .map(|f| (0..3).map(|k| index[&(f[k], f[(k + 1) % 3])]).collect())
        .collect();
    CellComplex {
        vertex_count: mesh.vertices().len(),
        edges,
        faces,
    }
}

/// Circumcenter of a triangle in `R³`; lies in the triangle's plane.
pub fn circumcenter(a: Point3, b: Point3, c: Point3) -> Result<Point3> {
    let u = mesh::sub(b, a);
    let w = mesh::sub(c, a);
    let n = mesh::cross(u, w);
    let nn = mesh::dot(n, n);
    let scale = mesh::dot(u, u).max(mesh::dot(w, w));
    if nn <= 1e-28 * scale * scale {
        return Err(Error::CollinearTriangle);
    }
    let num = mesh::add(
        mesh::scale(mesh::cross(w, n), mesh::dot(u, u)),
        mesh::scale(mesh::cross(n, u), mesh::dot(w, w)),
    );
    Ok(mesh::add(a, mesh::scale(num, 0.5 / nn)))
}

/// `cot` of the angle at `apex` in the triangle `(apex, p, q)`.
fn cot_at(apex: Point3, p: Point3, q: Point3) -> f64 {
    let u = mesh::sub(p, apex);
    let w = mesh::sub(q, apex);
    mesh::dot(u, w) / mesh::norm(mesh::cross(u, w))
}

/// The two triangles sharing an edge, as seen from the edge.
#[derive(Debug, Clone, Copy)]
struct EdgeWings {
    tail: Point3,
    head: Point3,
    /// Apex of the face on the left of `tail → head`.
    left_apex: Point3,
    right_apex: Point3,
}

impl EdgeWings {
    fn intrinsic(&self) -> f64 {
        0.5 * (cot_at(self.left_apex, self.tail, self.head) + cot_at(self.right_apex, self.tail, self.head))
    }

    fn extrinsic(&self) -> Result<f64> {
        let y_left = circumcenter(self.tail, self.head, self.left_apex)?;
        let y_right = circumcenter(self.tail, self.head, self.right_apex)?;
        let dist = mesh::distance(y_left, y_right) / mesh::distance(self.tail, self.head);
        // the chord has no sign of its own; borrow the intrinsic Delaunay test
        Ok(if self.intrinsic() > 0.0 { dist } else { -dist })
    }
}

fn wings(mesh: &EmbeddedMesh, cells: &CellComplex, graph_faces: &[usize; 2], e: usize) -> EdgeWings {
    let p = mesh.vertices();
    let [t, h] = cells.edges[e];
    let apex = |f: usize| {
        let tri = mesh.faces()[f];
        let k = (0..3).find(|&k| tri[k] != t && tri[k] != h).unwrap();
        p[tri[k]]
    };
    EdgeWings {
        tail: p[t],
        head: p[h],
        left_apex: apex(graph_faces[0]),
        right_apex: apex(graph_faces[1]),
    }
}

fn edge_wings_by_endpoints(mesh: &EmbeddedMesh, edge: [usize; 2]) -> Result<EdgeWings> {
    let [a, b] = edge;
    let p = mesh.vertices();
    let mut left = None;
    let mut right = None;
    for tri in mesh.faces() {
        for k in 0..3 {
            let (u, v, w) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
            if u == a && v == b {
                left = Some(p[w]);
            } else if u == b && v == a {
                right = Some(p[w]);
            }
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => Ok(EdgeWings {
            tail: p[a],
            head: p[b],
            left_apex: l,
            right_apex: r,
        }),
        _ => Err(Error::InvalidParameter(alloc::format!(
            "({a}, {b}) is not an edge of the mesh"
        ))),
    }
}

fn check_delaunay(edge: usize, endpoints: [usize; 2], rho: f64) -> Result<f64> {
    if rho > DELAUNAY_TOLERANCE {
        Ok(rho)
    } else {
        Err(Error::DelaunayViolation(vec![DelaunayEdge {
            edge,
            endpoints,
            rho,
        }]))
    }
}

/// Intrinsic weight `(cot α + cot β)/2` of the edge `tail → head`.
pub fn rho_intrinsic(mesh: &EmbeddedMesh, edge: [usize; 2]) -> Result<f64> {
    let rho = edge_wings_by_endpoints(mesh, edge)?.intrinsic();
    check_delaunay(0, edge, rho)
}

/// Extrinsic weight `‖y − y'‖ / ‖x − x'‖` from the `R³` circumcenters.
pub fn rho_extrinsic(mesh: &EmbeddedMesh, edge: [usize; 2]) -> Result<f64> {
    let rho = edge_wings_by_endpoints(mesh, edge)?.extrinsic()?;
    check_delaunay(0, edge, rho)
}

/// Raw (unchecked) weights of every mesh edge under `scheme`.
pub fn mesh_weights(mesh: &EmbeddedMesh, scheme: WeightScheme) -> Result<Vec<f64>> {
    let cells = mesh_cells(mesh);
    raw_weights(mesh, &cells, scheme)
}

fn raw_weights(mesh: &EmbeddedMesh, cells: &CellComplex, scheme: WeightScheme) -> Result<Vec<f64>> {
    let ne = cells.edges.len();
    let mut sides = vec![[usize::MAX; 2]; ne];
    for (f, face) in cells.faces.iter().enumerate() {
        for d in face {
            sides[d.edge][usize::from(!d.forward)] = f;
        }
    }
    (0..ne)
        .map(|e| {
            let w = wings(mesh, cells, &sides[e], e);
            match scheme {
                WeightScheme::Intrinsic => Ok(w.intrinsic()),
                WeightScheme::Extrinsic => w.extrinsic(),
                WeightScheme::Unit => Ok(1.0),
            }
        })
        .collect()
}

/// Weighted structure of an embedded mesh. Every edge must pass the
/// Delaunay test under `scheme`; all offending edges are reported together.
pub fn build_structure(mesh: &EmbeddedMesh, scheme: WeightScheme) -> Result<WeightedSurfaceGraph> {
    let cells = mesh_cells(mesh);
    let rho = raw_weights(mesh, &cells, scheme)?;
    let violations: Vec<DelaunayEdge> = rho
        .iter()
        .enumerate()
        .filter(|(_, &w)| !(w > DELAUNAY_TOLERANCE))
        .map(|(e, &w)| DelaunayEdge {
            edge: e,
            endpoints: cells.edges[e],
            rho: w,
        })
        .collect();
    if !violations.is_empty() {
        return Err(Error::DelaunayViolation(violations));
    }
    WeightedSurfaceGraph::from_cells_with_scheme(&cells, rho, scheme)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::tests::{tetrahedron, torus};
    use core::f64::consts::PI;

    const S3: f64 = 1.7320508075688772;

    fn close(a: Point3, b: Point3, tol: f64) -> bool {
        mesh::distance(a, b) <= tol
    }

    /// Two triangles on the edge (0,0,0)-(1,0,0); apexes are given directly.
    fn pair(left: Point3, right: Point3) -> EmbeddedMesh {
        // a closed surface is needed for validation: glue two copies of the
        // pair back to back (a degenerate-free "pillow" of four triangles)
        let v = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], left, right];
        EmbeddedMesh::new(v, vec![[0, 1, 2], [1, 0, 3], [0, 2, 3], [1, 3, 2]]).unwrap()
    }

    /// Independent oracle: unfold the right triangle into the plane of the
    /// left one and measure the signed planar distance of the circumcenters.
    fn unfolded_rho(tail: Point3, head: Point3, left: Point3, right: Point3) -> f64 {
        let len = mesh::distance(tail, head);
        let ex = mesh::scale(mesh::sub(head, tail), 1.0 / len);
        let planar = |p: Point3| {
            let d = mesh::sub(p, tail);
            let s = mesh::dot(d, ex);
            let h = mesh::norm(mesh::sub(d, mesh::scale(ex, s)));
            (s, h)
        };
        // left apex above the edge line, right apex reflected below it
        let (ls, lh) = planar(left);
        let (rs, rh) = planar(right);
        let cc = |s: f64, h: f64| {
            // circumcenter of (0,0), (len,0), (s,h): x = len/2
            let x = len / 2.0;
            let y = (s * s + h * h - len * s) / (2.0 * h);
            (x, y)
        };
        let (_, yl) = cc(ls, lh);
        let (_, yr) = cc(rs, rh);
        (yl + yr) / len
    }

    #[test]
    fn right_triangle_circumcenter() {
        let c = circumcenter([0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
        assert!(close(c, [0.5, 0.5, 0.0], 1e-15));
    }

    #[test]
    fn equilateral_circumcenter() {
        let c = circumcenter([0.0; 3], [1.0, 0.0, 0.0], [0.5, S3 / 2.0, 0.0]).unwrap();
        assert!(close(c, [0.5, S3 / 6.0, 0.0], 1e-15));
    }

    #[test]
    fn circumcenter_scales() {
        let (a, b, c) = ([0.0; 3], [1.0, 0.2, 0.3], [0.1, 1.0, -0.4]);
        let c1 = circumcenter(a, b, c).unwrap();
        let c2 = circumcenter(a, mesh::scale(b, 2.0), mesh::scale(c, 2.0)).unwrap();
        assert!(close(mesh::scale(c1, 2.0), c2, 1e-14));
        for p in [a, b, c] {
            assert!((mesh::distance(c1, p) - mesh::distance(c1, a)).abs() < 1e-14);
        }
        assert!(mesh::dot(mesh::sub(c1, a), mesh::cross(b, c)).abs() < 1e-14);
    }

    #[test]
    fn collinear_circumcenter_fails() {
        assert_eq!(
            circumcenter([0.0; 3], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]),
            Err(Error::CollinearTriangle)
        );
    }

    #[test]
    fn flat_equilateral_pair() {
        let m = pair([0.5, S3 / 2.0, 0.0], [0.5, -S3 / 2.0, 0.0]);
        let ex = rho_extrinsic(&m, [0, 1]).unwrap();
        let inn = rho_intrinsic(&m, [0, 1]).unwrap();
        assert!((ex - 1.0 / S3).abs() < 1e-14);
        assert!((inn - 1.0 / S3).abs() < 1e-14);
    }

    #[test]
    fn folding_shrinks_extrinsic_only() {
        let mut last = 1.0 / S3 + 1e-12;
        for k in 1..8 {
            let dihedral = PI - 0.3 * k as f64;
            let r = S3 / 2.0;
            let right = [0.5, r * dihedral.cos(), r * dihedral.sin()];
            let m = pair([0.5, r, 0.0], right);
            let ex = rho_extrinsic(&m, [0, 1]).unwrap();
            let inn = rho_intrinsic(&m, [0, 1]).unwrap();
            // chord between the two circumcenters, each √3/6 from the midpoint
            let oracle = 2.0 * (S3 / 6.0) * (dihedral / 2.0).sin();
            assert!((ex - oracle).abs() < 1e-13, "{ex} vs {oracle}");
            assert!(ex < last);
            last = ex;
            assert!((inn - 1.0 / S3).abs() < 1e-13);
        }
    }

    #[test]
    fn right_isosceles_pair_has_unit_weight() {
        // the edge is a leg of both triangles, so both opposite angles are 45°
        let m = pair([0.0, 1.0, 0.0], [1.0, -1.0, 0.0]);
        assert!((rho_intrinsic(&m, [0, 1]).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cocircular_square_is_rejected() {
        // unit square split along its diagonal (0,0)-(1,1)
        let sq = EmbeddedMesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]],
            vec![[0, 1, 2], [1, 0, 3], [0, 2, 3], [1, 3, 2]],
        )
        .unwrap();
        assert!(matches!(rho_intrinsic(&sq, [0, 1]), Err(Error::DelaunayViolation(_))));
        assert!(matches!(rho_extrinsic(&sq, [0, 1]), Err(Error::DelaunayViolation(_))));
        assert!(matches!(
            build_structure(&sq, WeightScheme::Intrinsic),
            Err(Error::DelaunayViolation(_))
        ));
    }

    #[test]
    fn cotangent_matches_unfolding() {
        let mesh = torus(12, 8, 3.0, 1.0);
        let cells = mesh_cells(&mesh);
        let w = mesh_weights(&mesh, WeightScheme::Intrinsic).unwrap();
        let mut sides = vec![[0usize; 2]; cells.edges.len()];
        for (f, face) in cells.faces.iter().enumerate() {
            for d in face {
                sides[d.edge][usize::from(!d.forward)] = f;
            }
        }
        for e in 0..cells.edges.len() {
            let wg = wings(&mesh, &cells, &sides[e], e);
            let oracle = unfolded_rho(wg.tail, wg.head, wg.left_apex, wg.right_apex);
            assert!((w[e] - oracle).abs() < 1e-12, "edge {e}: {} vs {oracle}", w[e]);
        }
    }

    #[test]
    fn tetrahedron_weights_are_equal() {
        let g = build_structure(&tetrahedron(), WeightScheme::Intrinsic).unwrap();
        assert_eq!(g.edge_count(), 6);
        let (lo, hi) = g.rho_range();
        assert!((hi - lo).abs() < 1e-14);
        assert!((lo - 1.0 / S3).abs() < 1e-14);
    }

    #[test]
    fn minimal_torus_from_cells() {
        let cells = CellComplex {
            vertex_count: 1,
            edges: vec![[0, 0], [0, 0]],
            faces: vec![vec![
                Dart::new(0, true),
                Dart::new(1, true),
                Dart::new(0, false),
                Dart::new(1, false),
            ]],
        };
        let g = WeightedSurfaceGraph::from_cells(&cells, vec![1.0, 1.0]).unwrap();
        let r = g.topology_report();
        assert_eq!((r.vertex_count, r.edge_count, r.face_count, r.genus), (1, 2, 1, 1));
        assert!(matches!(
            WeightedSurfaceGraph::from_cells(&cells, vec![1.0, 0.0]),
            Err(Error::NonPositiveWeight { edge: 1, .. })
        ));
    }

    #[test]
    fn duplicated_dart_is_inconsistent() {
        let cells = CellComplex {
            vertex_count: 1,
            edges: vec![[0, 0], [0, 0]],
            faces: vec![vec![
                Dart::new(0, true),
                Dart::new(1, true),
                Dart::new(0, true),
                Dart::new(1, false),
            ]],
        };
        assert!(matches!(
            WeightedSurfaceGraph::from_cells(&cells, vec![1.0, 1.0]),
            Err(Error::InconsistentOrientation { .. })
        ));
    }

    #[test]
    fn quad_graph_euler_characteristic() {
        let g = build_structure(&torus(24, 10, 3.0, 1.0), WeightScheme::Intrinsic).unwrap();
        let v = g.diamond_vertex_count() as i64;
        let e = g.half_edge_count() as i64;
        let f = g.edge_count() as i64;
        assert_eq!(v - e + f, 2 - 2 * g.genus() as i64);
        // each quad side joins a primal vertex to a face
        for e in 0..g.edge_count() {
            let q = g.quad(e);
            let sides = g.quad_sides(e);
            let expect = [[q.x, q.y], [q.x2, q.y], [q.x2, q.y2], [q.x, q.y2]];
            for (s, want) in sides.iter().zip(expect) {
                let [a, b] = g.diamond_edge(*s);
                assert_eq!([a, b - g.vertex_count()], want);
            }
        }
    }

    #[test]
    fn dual_weights_are_reciprocal() {
        let g = build_structure(&torus(24, 10, 3.0, 1.0), WeightScheme::Extrinsic).unwrap();
        for e in 0..g.edge_count() {
            assert!((g.rho(e) * g.dual_rho(e) - 1.0).abs() < 1e-15);
        }
    }
}
