//! Generated test surfaces: square-tiled gluings, flat tori and the
//! published reference period matrices.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::conformal::{CellComplex, Dart, WeightedSurfaceGraph};
use crate::dec::{Cochain1, Support};
use crate::linalg::CMatrix;
use crate::{Error, Result, C64};

// unused when std is in the dependency graph (inherent float methods win)
#[allow(unused_imports)]
use num_traits::Float;

/// Side of a unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    N,
    E,
    S,
    W,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::N, Side::E, Side::S, Side::W];

    fn index(self) -> usize {
        self as usize
    }

    fn is_horizontal(self) -> bool {
        matches!(self, Side::N | Side::S)
    }

    fn opposite(self) -> Side {
        Side::ALL[(self.index() + 2) % 4]
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Side::N => "N",
            Side::E => "E",
            Side::S => "S",
            Side::W => "W",
        };
        f.write_str(s)
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" => Ok(Side::N),
            "E" => Ok(Side::E),
            "S" => Ok(Side::S),
            "W" => Ok(Side::W),
            _ => Err(Error::InvalidGluing(alloc::format!("unknown side {s:?}"))),
        }
    }
}

/// How two sides are identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GlueKind {
    /// `z ↦ z + c`; pairs N with S and E with W.
    Translation,
    /// `z ↦ −z + c`; pairs a side with a side of the same name.
    HalfTurn,
}

impl fmt::Display for GlueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GlueKind::Translation => "translation",
            GlueKind::HalfTurn => "half_turn",
        })
    }
}

impl FromStr for GlueKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "translation" => Ok(GlueKind::Translation),
            "half_turn" => Ok(GlueKind::HalfTurn),
            _ => Err(Error::InvalidGluing(alloc::format!("unknown gluing kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Identification {
    pub from: (usize, Side),
    pub to: (usize, Side),
    pub kind: GlueKind,
}

impl Identification {
    pub fn new(from: (usize, Side), to: (usize, Side), kind: GlueKind) -> Self {
        Self { from, to, kind }
    }
}

/// Unit squares with their sides identified in pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GluingSpec {
    pub squares: usize,
    pub identifications: Vec<Identification>,
}

impl GluingSpec {
    /// One square with opposite sides identified by translation.
    pub fn square_torus() -> Self {
        Self {
            squares: 1,
            identifications: vec![
                Identification::new((0, Side::N), (0, Side::S), GlueKind::Translation),
                Identification::new((0, Side::E), (0, Side::W), GlueKind::Translation),
            ],
        }
    }

    pub fn is_translation_surface(&self) -> bool {
        self.identifications.iter().all(|i| i.kind == GlueKind::Translation)
    }

    pub fn validate(&self) -> Result<()> {
        if self.squares == 0 {
            return Err(Error::InvalidGluing("no squares".into()));
        }
        let mut used = vec![false; 4 * self.squares];
        for id in &self.identifications {
            for (sq, side) in [id.from, id.to] {
                if sq >= self.squares {
                    return Err(Error::InvalidGluing(alloc::format!(
                        "square {sq} out of range ({} squares)",
                        self.squares
                    )));
                }
                let slot = 4 * sq + side.index();
                if used[slot] {
                    return Err(Error::InvalidGluing(alloc::format!(
                        "side {side} of square {sq} is glued twice"
                    )));
                }
                used[slot] = true;
            }
            let (a, b) = (id.from.1, id.to.1);
            let ok = match id.kind {
                GlueKind::Translation => b == a.opposite(),
                GlueKind::HalfTurn => b == a,
            };
            if !ok {
                let why = if a.is_horizontal() != b.is_horizontal() {
                    "glues a horizontal side to a vertical one"
                } else {
                    "does not preserve orientation"
                };
                return Err(Error::InvalidGluing(alloc::format!(
                    "{} gluing of {}{} to {}{} {why}",
                    id.kind,
                    id.from.0,
                    a,
                    id.to.0,
                    b
                )));
            }
        }
        if let Some(slot) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidGluing(alloc::format!(
                "side {} of square {} is not glued",
                Side::ALL[slot % 4],
                slot / 4
            )));
        }
        Ok(())
    }

    /// Splits every square into `k × k` unit squares.
    ///
    /// `build_square_tiled(&spec.subdivide(k)?, n)` yields the same surface as
    /// `build_square_tiled(&spec, k * n)` up to numbering.
    pub fn subdivide(&self, k: usize) -> Result<Self> {
        self.validate()?;
        if k == 0 {
            return Err(Error::InvalidGluing("subdivision factor must be positive".into()));
        }
        let sub = |s: usize, i: usize, j: usize| (s * k + j) * k + i;
        // sub-square along `side`, counted in the side's own parameter direction
        let along = |s: usize, side: Side, t: usize| match side {
            Side::N => sub(s, t, k - 1),
            Side::S => sub(s, t, 0),
            Side::E => sub(s, k - 1, t),
            Side::W => sub(s, 0, t),
        };
        let mut identifications = Vec::with_capacity(2 * self.squares * k * k);
        for s in 0..self.squares {
            for j in 0..k {
                for i in 0..k - 1 {
                    identifications.push(Identification::new(
                        (sub(s, i, j), Side::E),
                        (sub(s, i + 1, j), Side::W),
                        GlueKind::Translation,
                    ));
                    identifications.push(Identification::new(
                        (sub(s, j, i), Side::N),
                        (sub(s, j, i + 1), Side::S),
                        GlueKind::Translation,
                    ));
                }
            }
        }
        for id in &self.identifications {
            for t in 0..k {
                let u = match id.kind {
                    GlueKind::Translation => t,
                    GlueKind::HalfTurn => k - 1 - t,
                };
                identifications.push(Identification::new(
                    (along(id.from.0, id.from.1, t), id.from.1),
                    (along(id.to.0, id.to.1, u), id.to.1),
                    id.kind,
                ));
            }
        }
        Ok(Self {
            squares: self.squares * k * k,
            identifications,
        })
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Local numbering of one refined square.
#[derive(Clone, Copy)]
struct Layout {
    n: usize,
}

impl Layout {
    fn vertices(self) -> usize {
        (self.n + 1) * (self.n + 1)
    }

    fn edges(self) -> usize {
        2 * self.n * (self.n + 1)
    }

    fn vertex(self, s: usize, i: usize, j: usize) -> usize {
        s * self.vertices() + j * (self.n + 1) + i
    }

    /// `(i, j) → (i+1, j)`.
    fn horizontal(self, s: usize, i: usize, j: usize) -> usize {
        s * self.edges() + j * self.n + i
    }

    /// `(i, j) → (i, j+1)`.
    fn vertical(self, s: usize, i: usize, j: usize) -> usize {
        s * self.edges() + self.n * (self.n + 1) + j * (self.n + 1) + i
    }

    /// Edge `k` along a side, in increasing coordinate order.
    fn side_edge(self, s: usize, side: Side, k: usize) -> usize {
        let n = self.n;
        match side {
            Side::S => self.horizontal(s, k, 0),
            Side::N => self.horizontal(s, k, n),
            Side::W => self.vertical(s, 0, k),
            Side::E => self.vertical(s, n, k),
        }
    }

    fn side_vertex(self, s: usize, side: Side, k: usize) -> usize {
        let n = self.n;
        match side {
            Side::S => self.vertex(s, k, 0),
            Side::N => self.vertex(s, k, n),
            Side::W => self.vertex(s, 0, k),
            Side::E => self.vertex(s, n, k),
        }
    }
}

/// Cells of the refined gluing with every glued edge resolved to one representative.
struct Tiling {
    cells: CellComplex,
    /// Local edge id -> (global edge, same direction).
    edge_of: Vec<(usize, bool)>,
    /// Local edges that stand for their global edge.
    representative: Vec<bool>,
    layout: Layout,
}

fn tile(spec: &GluingSpec, refine: usize) -> Result<Tiling> {
    spec.validate()?;
    if refine == 0 {
        return Err(Error::InvalidParameter("refinement must be at least 1".into()));
    }
    let l = Layout { n: refine };
    let n = refine;
    let local_edges = spec.squares * l.edges();
    let mut vertices = UnionFind::new(spec.squares * l.vertices());
    let mut alias: Vec<(usize, bool)> = (0..local_edges).map(|e| (e, true)).collect();
    for id in &spec.identifications {
        let ((sa, a), (sb, b)) = (id.from, id.to);
        let flip = id.kind == GlueKind::HalfTurn;
        for k in 0..n {
            let kb = if flip { n - 1 - k } else { k };
            alias[l.side_edge(sb, b, kb)] = (l.side_edge(sa, a, k), !flip);
        }
        for k in 0..=n {
            let kb = if flip { n - k } else { k };
            vertices.union(l.side_vertex(sa, a, k), l.side_vertex(sb, b, kb));
        }
    }

    let mut vertex_id = vec![usize::MAX; spec.squares * l.vertices()];
    let mut vertex_count = 0;
    for v in 0..vertex_id.len() {
        let r = vertices.find(v);
        if vertex_id[r] == usize::MAX {
            vertex_id[r] = vertex_count;
            vertex_count += 1;
        }
        vertex_id[v] = vertex_id[r];
    }

    let mut global = vec![usize::MAX; local_edges];
    let mut edges = Vec::new();
    for s in 0..spec.squares {
        for j in 0..=n {
            for i in 0..n {
                let e = l.horizontal(s, i, j);
                if alias[e].0 == e {
                    global[e] = edges.len();
                    edges.push([vertex_id[l.vertex(s, i, j)], vertex_id[l.vertex(s, i + 1, j)]]);
                }
            }
        }
        for j in 0..n {
            for i in 0..=n {
                let e = l.vertical(s, i, j);
                if alias[e].0 == e {
                    global[e] = edges.len();
                    edges.push([vertex_id[l.vertex(s, i, j)], vertex_id[l.vertex(s, i, j + 1)]]);
                }
            }
        }
    }
    let edge_of: Vec<(usize, bool)> = alias.iter().map(|&(e, same)| (global[e], same)).collect();
    let dart = |e: usize, forward: bool| {
        let (g, same) = edge_of[e];
        Dart::new(g, forward == same)
    };

    let mut faces = Vec::with_capacity(spec.squares * n * n);
    for s in 0..spec.squares {
        for j in 0..n {
            for i in 0..n {
                faces.push(vec![
                    dart(l.horizontal(s, i, j), true),
                    dart(l.vertical(s, i + 1, j), true),
                    dart(l.horizontal(s, i, j + 1), false),
                    dart(l.vertical(s, i, j), false),
                ]);
            }
        }
    }
    Ok(Tiling {
        cells: CellComplex {
            vertex_count,
            edges,
            faces,
        },
        representative: alias.iter().enumerate().map(|(e, &(a, _))| a == e).collect(),
        edge_of,
        layout: l,
    })
}

/// Square-tiled surface, each square cut into `refine × refine` cells, `ρ ≡ 1`.
pub fn build_square_tiled(spec: &GluingSpec, refine: usize) -> Result<WeightedSurfaceGraph> {
    let t = tile(spec, refine)?;
    let ne = t.cells.edges.len();
    WeightedSurfaceGraph::from_cells(&t.cells, vec![1.0; ne])
}

/// The flat coordinate differential `dz` of a translation surface on both
/// graphs, in units where each square has side 1. `None` for gluings with a
/// half turn, where `dz` is only defined up to sign.
pub fn flat_form(spec: &GluingSpec, refine: usize) -> Result<Option<Cochain1>> {
    let t = tile(spec, refine)?;
    if !spec.is_translation_surface() {
        return Ok(None);
    }
    let g = WeightedSurfaceGraph::from_cells(&t.cells, vec![1.0; t.cells.edges.len()])?;
    let l = t.layout;
    let n = refine;
    let step = 1.0 / n as f64;
    let mut form = Cochain1::zeros(&g, Support::Full);
    // the representative local edge of each global edge sits in its own square frame
    for s in 0..spec.squares {
        for j in 0..=n {
            for i in 0..n {
                let e = l.horizontal(s, i, j);
                if t.representative[e] {
                    let k = t.edge_of[e].0;
                    form.primal[k] = C64::new(step, 0.0);
                    form.dual[k] = C64::new(0.0, step);
                }
            }
        }
        for j in 0..n {
            for i in 0..=n {
                let e = l.vertical(s, i, j);
                if t.representative[e] {
                    let k = t.edge_of[e].0;
                    form.primal[k] = C64::new(0.0, step);
                    form.dual[k] = C64::new(-step, 0.0);
                }
            }
        }
    }
    Ok(Some(form))
}

/// A published period matrix, evaluated in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceMatrix {
    pub name: &'static str,
    pub genus: usize,
    pub matrix: CMatrix,
}

/// Modulus of the rhombic Wente torus, `τ_w ≈ exp(1.145045 i)`.
pub const WENTE_ARGUMENT: f64 = 1.145045;

fn two_by_two(d: C64, o: C64) -> CMatrix {
    CMatrix::from_rows(&[vec![d, o], vec![o, d]])
}

/// `omega1`, `omega2`, `omega3` (square-tiled surfaces), `wente` (genus 1)
/// and `lawson` (equal to `omega3`).
pub fn reference_matrices() -> Vec<ReferenceMatrix> {
    let s3 = 3f64.sqrt();
    let s2 = 2f64.sqrt();
    let hex = two_by_two(C64::new(0.0, 2.0 / s3), C64::new(0.0, -1.0 / s3));
    vec![
        ReferenceMatrix {
            name: "omega1",
            genus: 2,
            matrix: two_by_two(C64::new(0.0, 5.0 / 3.0), C64::new(0.0, -4.0 / 3.0)),
        },
        ReferenceMatrix {
            name: "omega2",
            genus: 2,
            matrix: two_by_two(
                C64::new(-2.0 / 3.0, 8f64.sqrt() / 3.0),
                C64::new(1.0 / 3.0, -s2 / 3.0),
            ),
        },
        ReferenceMatrix {
            name: "omega3",
            genus: 2,
            matrix: hex.clone(),
        },
        ReferenceMatrix {
            name: "wente",
            genus: 1,
            matrix: CMatrix::from_rows(&[vec![C64::from_polar(1.0, WENTE_ARGUMENT)]]),
        },
        ReferenceMatrix {
            name: "lawson",
            genus: 2,
            matrix: hex,
        },
    ]
}

pub fn reference_matrix(name: &str) -> Option<ReferenceMatrix> {
    reference_matrices().into_iter().find(|r| r.name == name)
}

/// `n × m` torus whose cells are the parallelogram spanned by `1` and `τ`,
/// so its modulus is `mτ/n`. Rectangular cells stay quads with
/// `ρ = Im τ` on horizontal and `1/Im τ` on vertical edges; slanted cells
/// are cut along the shorter diagonal and carry cotangent weights.
pub fn flat_torus(n: usize, m: usize, tau: C64) -> Result<WeightedSurfaceGraph> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("torus dimensions must be positive".into()));
    }
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "modulus {tau} must lie in the upper half plane"
        )));
    }
    let v = |i: usize, j: usize| (j % m) * n + (i % n);
    let cells = n * m;
    let h = |i: usize, j: usize| (j % m) * n + (i % n);
    let s = |i: usize, j: usize| cells + (j % m) * n + (i % n);
    let mut edges = vec![[0, 0]; 2 * cells];
    for j in 0..m {
        for i in 0..n {
            edges[h(i, j)] = [v(i, j), v(i + 1, j)];
            edges[s(i, j)] = [v(i, j), v(i, j + 1)];
        }
    }
    if tau.re == 0.0 {
        let mut faces = Vec::with_capacity(cells);
        for j in 0..m {
            for i in 0..n {
                faces.push(vec![
                    Dart::new(h(i, j), true),
                    Dart::new(s(i + 1, j), true),
                    Dart::new(h(i, j + 1), false),
                    Dart::new(s(i, j), false),
                ]);
            }
        }
        let mut rho = vec![tau.im; cells];
        rho.extend(core::iter::repeat_n(1.0 / tau.im, cells));
        let c = CellComplex {
            vertex_count: cells,
            edges,
            faces,
        };
        return WeightedSurfaceGraph::from_cells(&c, rho);
    }

    let d = |i: usize, j: usize| 2 * cells + (j % m) * n + (i % n);
    let rising = (tau + 1.0).norm() < (tau - 1.0).norm();
    for j in 0..m {
        for i in 0..n {
            edges.push(if rising {
                [v(i, j), v(i + 1, j + 1)]
            } else {
                [v(i + 1, j), v(i, j + 1)]
            });
        }
    }
    let mut rho = vec![0.0; 3 * cells];
    let mut faces = Vec::with_capacity(2 * cells);
    let p = |i: usize, j: usize| C64::new(i as f64, 0.0) + tau * j as f64;
    let mut triangle = |corners: [C64; 3], darts: [Dart; 3], faces: &mut Vec<Vec<Dart>>| {
        // dart k runs from corner k to corner k+1 and is opposite corner k+2
        for k in 0..3 {
            let apex = corners[(k + 2) % 3];
            let u = corners[k] - apex;
            let w = corners[(k + 1) % 3] - apex;
            let cot = (u.re * w.re + u.im * w.im) / (u.re * w.im - u.im * w.re);
            rho[darts[k].edge] += 0.5 * cot;
        }
        faces.push(darts.to_vec());
    };
    for j in 0..m {
        for i in 0..n {
            let (a, b, c, e) = (p(i, j), p(i + 1, j), p(i + 1, j + 1), p(i, j + 1));
            if rising {
                triangle(
                    [a, b, c],
                    [Dart::new(h(i, j), true), Dart::new(s(i + 1, j), true), Dart::new(d(i, j), false)],
                    &mut faces,
                );
                triangle(
                    [a, c, e],
                    [Dart::new(d(i, j), true), Dart::new(h(i, j + 1), false), Dart::new(s(i, j), false)],
                    &mut faces,
                );
            } else {
                triangle(
                    [a, b, e],
                    [Dart::new(h(i, j), true), Dart::new(d(i, j), true), Dart::new(s(i, j), false)],
                    &mut faces,
                );
                triangle(
                    [b, c, e],
                    [Dart::new(s(i + 1, j), true), Dart::new(h(i, j + 1), false), Dart::new(d(i, j), false)],
                    &mut faces,
                );
            }
        }
    }
    let c = CellComplex {
        vertex_count: cells,
        edges,
        faces,
    };
    WeightedSurfaceGraph::from_cells(&c, rho)
}

/// Human-readable one-line summary of a gluing.
pub fn describe(spec: &GluingSpec) -> String {
    let kind = if spec.is_translation_surface() {
        "translation"
    } else {
        "half-translation"
    };
    alloc::format!("{} squares, {kind} surface", spec.squares)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dec::{d1, hodge_star};
    use crate::periods::{compute_periods, PeriodOptions};
    use crate::siegel::{compare, siegel_reduce};

    fn two_square_genus_two() -> GluingSpec {
        // an L-free two-square strip with a slit-like exchange of the top sides
        use GlueKind::Translation as T;
        GluingSpec {
            squares: 2,
            identifications: vec![
                Identification::new((0, Side::E), (1, Side::W), T),
                Identification::new((1, Side::E), (0, Side::W), T),
                Identification::new((0, Side::N), (1, Side::S), T),
                Identification::new((1, Side::N), (0, Side::S), T),
            ],
        }
    }

    #[test]
    fn single_square_torus_counts() {
        let g = build_square_tiled(&GluingSpec::square_torus(), 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (1, 2, 1));
        assert_eq!(g.genus(), 1);
        let g = build_square_tiled(&GluingSpec::square_torus(), 5).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (25, 50, 25));
    }

    #[test]
    fn validation_errors() {
        let mut spec = GluingSpec::square_torus();
        spec.identifications[1].to = (0, Side::S);
        assert!(matches!(spec.validate(), Err(Error::InvalidGluing(_))));
        let mut spec = GluingSpec::square_torus();
        spec.identifications[0].kind = GlueKind::HalfTurn;
        assert!(matches!(spec.validate(), Err(Error::InvalidGluing(_))));
        let mut spec = GluingSpec::square_torus();
        spec.identifications.pop();
        assert!(matches!(spec.validate(), Err(Error::InvalidGluing(_))));
        let mut spec = GluingSpec::square_torus();
        spec.identifications[1] = Identification::new((0, Side::E), (0, Side::N), GlueKind::Translation);
        assert!(spec.validate().is_err());
        assert!(build_square_tiled(&GluingSpec::square_torus(), 0).is_err());
    }

    #[test]
    fn two_squares_with_half_turns() {
        use GlueKind::HalfTurn as H;
        let spec = GluingSpec {
            squares: 2,
            identifications: Side::ALL
                .iter()
                .map(|&side| Identification::new((0, side), (1, side), H))
                .collect(),
        };
        // corners fall into two classes: V = 2, E = 4, F = 2
        let g = build_square_tiled(&spec, 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (2, 4, 2));
        assert_eq!(g.genus(), 1);
        assert!(flat_form(&spec, 1).unwrap().is_none());
        let pi = compute_periods(&build_square_tiled(&spec, 3).unwrap(), PeriodOptions::default())
            .unwrap()
            .result
            .pi;
        // no cone points, and every unit step changes square: the lattice is
        // {(a, b) : a + b even}, a rotated square lattice
        let tau = siegel_reduce(&pi).unwrap().omega[(0, 0)];
        assert!((tau - C64::new(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn subdivision_commutes_with_refinement() {
        use GlueKind::{HalfTurn as H, Translation as T};
        let spec = GluingSpec {
            squares: 4,
            identifications: vec![
                Identification::new((0, Side::N), (2, Side::S), T),
                Identification::new((0, Side::S), (2, Side::N), T),
                Identification::new((1, Side::N), (3, Side::S), T),
                Identification::new((1, Side::S), (3, Side::N), T),
                Identification::new((2, Side::E), (3, Side::W), T),
                Identification::new((2, Side::W), (3, Side::E), T),
                Identification::new((0, Side::E), (1, Side::E), H),
                Identification::new((0, Side::W), (1, Side::W), H),
            ],
        };
        let fine = spec.subdivide(2).unwrap();
        fine.validate().unwrap();
        assert_eq!(fine.squares, 16);
        assert!(spec.subdivide(0).is_err());
        for n in [1, 2] {
            let a = build_square_tiled(&fine, n).unwrap();
            let b = build_square_tiled(&spec, 2 * n).unwrap();
            assert_eq!(
                (a.vertex_count(), a.edge_count(), a.face_count()),
                (b.vertex_count(), b.edge_count(), b.face_count())
            );
            let pa = compute_periods(&a, PeriodOptions::default()).unwrap().result.pi;
            let pb = compute_periods(&b, PeriodOptions::default()).unwrap().result.pi;
            assert!(compare(&pa, &pb).unwrap() < 1e-8);
        }
    }

    #[test]
    fn flat_form_is_holomorphic_on_translation_surfaces() {
        for spec in [GluingSpec::square_torus(), two_square_genus_two()] {
            for n in [1, 3] {
                let g = build_square_tiled(&spec, n).unwrap();
                let dz = flat_form(&spec, n).unwrap().unwrap();
                assert!(d1(&g, &dz).max_abs() < 1e-15);
                let star = hodge_star(&g, &dz);
                assert!(star.axpy(C64::new(0.0, 1.0), &dz).max_abs() < 1e-15);
            }
        }
    }

    #[test]
    fn references_are_riemann_matrices() {
        let refs = reference_matrices();
        assert_eq!(refs.len(), 5);
        for r in &refs {
            assert_eq!(r.matrix.rows(), r.genus);
            assert!(r.matrix.symmetry_defect() == 0.0);
            assert!(crate::linalg::min_symmetric_eigenvalue(&r.matrix.im()) > 0.0);
        }
        let o3 = reference_matrix("omega3").unwrap().matrix;
        assert!((o3[(0, 0)] - C64::new(0.0, 1.1547005383792515)).norm() < 1e-15);
        assert_eq!(o3, reference_matrix("lawson").unwrap().matrix);
        let w = reference_matrix("wente").unwrap().matrix[(0, 0)];
        assert!((w.re - 0.41300).abs() < 1e-5 && (w.im - 0.91073).abs() < 1e-5);
    }

    #[test]
    fn rectangular_flat_torus_modulus() {
        for (n, m) in [(4, 4), (3, 5), (6, 2)] {
            let g = flat_torus(n, m, C64::new(0.0, 1.0)).unwrap();
            let pi = compute_periods(&g, PeriodOptions::default()).unwrap().result.pi;
            let want = CMatrix::from_rows(&[vec![C64::new(0.0, m as f64 / n as f64)]]);
            assert!(compare(&pi, &want).unwrap() < 1e-10, "{n}x{m}: {:?}", pi);
        }
    }

    #[test]
    fn slanted_flat_torus_modulus() {
        let rhombic = C64::new(0.5, 0.75f64.sqrt());
        for tau in [rhombic, C64::from_polar(1.0, WENTE_ARGUMENT), C64::new(0.3, 1.7)] {
            for n in [1, 4] {
                let g = flat_torus(n, n, tau).unwrap();
                let pi = compute_periods(&g, PeriodOptions::default()).unwrap().result.pi;
                let want = siegel_reduce(&CMatrix::from_rows(&[vec![tau]])).unwrap().omega;
                assert!(siegel_reduce(&pi).unwrap().omega.sub(&want).max_abs() < 1e-10, "{tau} n={n}");
            }
        }
    }

    #[test]
    fn flat_torus_rejects_bad_input() {
        assert!(flat_torus(0, 2, C64::new(0.0, 1.0)).is_err());
        assert!(flat_torus(2, 2, C64::new(0.3, -1.0)).is_err());
    }
}
