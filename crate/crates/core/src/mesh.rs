//! Embedded triangle meshes: validation, topology and edge lengths.

use core::f64::consts::PI;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
// unused when std is in the dependency graph (inherent float methods win)
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub type Point3 = [f64; 3];

pub(crate) fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add(a: Point3, b: Point3) -> Point3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale(a: Point3, s: f64) -> Point3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn dot(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Point3, b: Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: Point3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn distance(a: Point3, b: Point3) -> f64 {
    norm(sub(a, b))
}

/// Union-find over `0..n`, path halving only.
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as representative so numbering is stable
            if ra < rb {
                self.parent[rb] = ra;
            } else {
                self.parent[ra] = rb;
            }
        }
    }

    pub(crate) fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// A closed, consistently oriented, connected triangle mesh in `R³`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedMesh {
    vertices: Vec<Point3>,
    faces: Vec<[usize; 3]>,
    name: Option<String>,
}

/// Element counts and genus of a closed orientable surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopologyReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub euler_characteristic: i64,
    pub genus: usize,
}

impl TopologyReport {
    pub fn from_counts(vertex_count: usize, edge_count: usize, face_count: usize) -> Self {
        let euler_characteristic = vertex_count as i64 - edge_count as i64 + face_count as i64;
        Self {
            vertex_count,
            edge_count,
            face_count,
            euler_characteristic,
            genus: ((2 - euler_characteristic) / 2).max(0) as usize,
        }
    }
}

impl EmbeddedMesh {
    /// Validates and wraps vertex positions and counterclockwise triangles.
    pub fn new(vertices: Vec<Point3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        for (fi, face) in faces.iter().enumerate() {
            for &v in face {
                if v >= n {
                    return Err(Error::InvalidVertexIndex { face: fi, index: v });
                }
            }
            if face[0] == face[1] || face[1] == face[2] || face[2] == face[0] {
                return Err(Error::DegenerateFace { face: fi });
            }
            let [a, b, c] = face.map(|i| vertices[i]);
            let (u, w) = (sub(b, a), sub(c, a));
            let longest = dot(u, u).max(dot(w, w)).max(dot(sub(c, b), sub(c, b)));
            if norm(cross(u, w)) <= 1e-14 * longest {
                return Err(Error::DegenerateFace { face: fi });
            }
        }

        let mut undirected: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for face in &faces {
            for k in 0..3 {
                let (a, b) = (face[k], face[(k + 1) % 3]);
                *undirected.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                *directed.entry((a, b)).or_insert(0) += 1;
            }
        }
        if let Some((&(a, b), &count)) = undirected.iter().find(|(_, &c)| c != 2) {
            return Err(Error::NonManifoldEdge {
                endpoints: [a, b],
                faces: count,
            });
        }
        if let Some((&(a, b), _)) = directed.iter().find(|(_, &c)| c != 1) {
            return Err(Error::InconsistentOrientation { endpoints: [a, b] });
        }

        let mut touched = vec![false; n];
        let mut sets = DisjointSets::new(n);
        for face in &faces {
            for k in 0..3 {
                touched[face[k]] = true;
                sets.union(face[k], face[(k + 1) % 3]);
            }
        }
        if let Some(v) = touched.iter().position(|t| !t) {
            return Err(Error::IsolatedVertex { vertex: v });
        }
        let components = sets.components();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }

        Ok(Self {
            vertices,
            faces,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Undirected edges in order of first appearance. Each edge is oriented
    /// as it is traversed by the first face containing it.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut seen = BTreeMap::new();
        let mut edges = Vec::with_capacity(self.faces.len() * 3 / 2);
        for face in &self.faces {
            for k in 0..3 {
                let (a, b) = (face[k], face[(k + 1) % 3]);
                seen.entry((a.min(b), a.max(b))).or_insert_with(|| {
                    edges.push([a, b]);
                    edges.len() - 1
                });
            }
        }
        edges
    }

    pub fn topology_report(&self) -> TopologyReport {
        TopologyReport::from_counts(
            self.vertices.len(),
            self.faces.len() * 3 / 2,
            self.faces.len(),
        )
    }

    /// Euclidean length of every edge of [`EmbeddedMesh::edges`].
    pub fn edge_lengths(&self) -> Result<Vec<([usize; 2], f64)>> {
        self.edges()
            .into_iter()
            .map(|[a, b]| {
                let len = distance(self.vertices[a], self.vertices[b]);
                if len > 0.0 {
                    Ok(([a, b], len))
                } else {
                    Err(Error::ZeroLengthEdge { endpoints: [a, b] })
                }
            })
            .collect()
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> f64 {
        let mut min = f64::INFINITY;
        for face in &self.faces {
            for k in 0..3 {
                let p = self.vertices[face[k]];
                let u = sub(self.vertices[face[(k + 1) % 3]], p);
                let w = sub(self.vertices[face[(k + 2) % 3]], p);
                let angle = norm(cross(u, w)).atan2(dot(u, w));
                min = min.min(angle);
            }
        }
        min.to_degrees()
    }

    /// Torus of revolution with `n` vertices around the core circle and `m`
    /// rows around the tube. Rows are sheared by half a step so every
    /// triangle is close to isosceles; `m` must be even.
    pub fn torus_of_revolution(n: usize, m: usize, big: f64, small: f64) -> Result<Self> {
        if n < 3 || m < 4 || !m.is_multiple_of(2) || !(big > small && small > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "torus needs n >= 3, even m >= 4 and R > r > 0 (got {n}, {m}, {big}, {small})"
            )));
        }
        let mut vertices = Vec::new();
        for j in 0..m {
            for i in 0..n {
                let u = 2.0 * PI * (i as f64 + 0.5 * j as f64) / n as f64;
                let v = 2.0 * PI * j as f64 / m as f64;
                let r = big + small * v.cos();
                vertices.push([r * u.cos(), r * u.sin(), small * v.sin()]);
            }
        }
        // after m rows the shear has accumulated m/2 whole steps
        let id = |i: usize, j: usize| {
            if j >= m {
                (i + m / 2) % n
            } else {
                j * n + (i % n)
            }
        };
        let mut faces = Vec::new();
        for j in 0..m {
            for i in 0..n {
                // row j+1 is shifted by +1/2, so (i, j+1) sits between i and i+1
                faces.push([id(i, j), id(i + 1, j), id(i, j + 1)]);
                faces.push([id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        Self::new(vertices, faces)
    }

    /// Applies `f` to every vertex position, keeping the combinatorics.
    pub fn map_positions(&self, f: impl Fn(Point3) -> Point3) -> Result<Self> {
        let mut mesh = Self::new(self.vertices.iter().map(|&p| f(p)).collect(), self.faces.clone())?;
        mesh.name = self.name.clone();
        Ok(mesh)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;


    pub(crate) fn tetrahedron() -> EmbeddedMesh {
        let c = 0.25 * 2f64.sqrt();
        EmbeddedMesh::new(
            vec![
                [0.5, 0.0, -c],
                [-0.5, 0.0, -c],
                [0.0, 0.5, c],
                [0.0, -0.5, c],
            ],
            vec![[0, 2, 3], [1, 3, 2], [0, 3, 1], [0, 1, 2]],
        )
        .unwrap()
    }

    pub(crate) fn torus(n: usize, m: usize, big: f64, small: f64) -> EmbeddedMesh {
        EmbeddedMesh::torus_of_revolution(n, m, big, small).unwrap()
    }

    #[test]
    fn tetrahedron_counts() {
        let report = tetrahedron().topology_report();
        assert_eq!(
            (report.vertex_count, report.edge_count, report.face_count),
            (4, 6, 4)
        );
        assert_eq!(report.euler_characteristic, 2);
        assert_eq!(report.genus, 0);
    }

    #[test]
    fn torus_grid_counts() {
        let mesh = torus(10, 10, 3.0, 1.0);
        let report = mesh.topology_report();
        assert_eq!(
            (report.vertex_count, report.edge_count, report.face_count),
            (100, 300, 200)
        );
        assert_eq!(report.euler_characteristic, 0);
        assert_eq!(report.genus, 1);
        assert_eq!(mesh.edges().len(), 300);
    }

    #[test]
    fn repeated_vertex_is_degenerate() {
        let err = EmbeddedMesh::new(vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], vec![[0, 1, 1]]);
        assert_eq!(err, Err(Error::DegenerateFace { face: 0 }));
    }

    #[test]
    fn zero_area_is_degenerate() {
        let err = EmbeddedMesh::new(
            vec![[0.0; 3], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]],
            vec![[0, 1, 2]],
        );
        assert_eq!(err, Err(Error::DegenerateFace { face: 0 }));
    }

    #[test]
    fn open_surface_is_rejected() {
        let mesh = tetrahedron();
        let faces = mesh.faces()[..3].to_vec();
        assert!(matches!(
            EmbeddedMesh::new(mesh.vertices().to_vec(), faces),
            Err(Error::NonManifoldEdge { faces: 1, .. })
        ));
    }

    #[test]
    fn flipped_face_is_rejected() {
        let mesh = tetrahedron();
        let mut faces = mesh.faces().to_vec();
        faces[0].swap(1, 2);
        assert!(matches!(
            EmbeddedMesh::new(mesh.vertices().to_vec(), faces),
            Err(Error::InconsistentOrientation { .. })
        ));
    }

    #[test]
    fn two_tetrahedra_are_disconnected() {
        let mesh = tetrahedron();
        let mut vertices = mesh.vertices().to_vec();
        vertices.extend(mesh.vertices().iter().map(|p| [p[0] + 5.0, p[1], p[2]]));
        let mut faces = mesh.faces().to_vec();
        faces.extend(mesh.faces().iter().map(|f| f.map(|v| v + 4)));
        assert_eq!(
            EmbeddedMesh::new(vertices, faces),
            Err(Error::Disconnected { components: 2 })
        );
    }

    #[test]
    fn unit_tetrahedron_lengths() {
        for (_, len) in tetrahedron().edge_lengths().unwrap() {
            assert!((len - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn three_four_five() {
        assert_eq!(distance([0.0, 0.0, 0.0], [3.0, 4.0, 0.0]), 5.0);
    }

    #[test]
    fn euler_relations_hold() {
        for (n, m) in [(5, 8), (10, 10), (12, 6)] {
            let r = torus(n, m, 3.0, 1.0).topology_report();
            assert_eq!(3 * r.face_count, 2 * r.edge_count);
            assert_eq!(r.euler_characteristic, 2 - 2 * r.genus as i64);
        }
    }
}
