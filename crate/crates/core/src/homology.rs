//! Homology bases on the quad-graph `◊`.
//!
//! A BFS tree on `◊` is inflated into a fundamental domain by closing quads
//! that miss a single side. Whenever inflation stalls, the non-domain edge
//! closest to the root (that does not disconnect what is left) becomes a
//! basis element through its rooted cycle. The `◊` cycles are projected to
//! closed paths on `Γ` and on `Γ*`, their intersection numbers computed, and
//! the basis is brought into symplectic `(a, b)` form.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::conformal::WeightedSurfaceGraph;
use crate::linalg::IMatrix;
use crate::{Error, Result};

/// Graph a [`Cycle`] lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Host {
    /// `Γ`; steps index primal edges.
    Primal,
    /// `Γ*`; steps index primal edges `e`, meaning the dual edge `e*`.
    Dual,
    /// `◊`; steps index half-edges `h`, meaning the side from `origin(h)` to `face(h)`.
    Diamond,
}

/// One oriented edge of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

impl Step {
    pub fn new(edge: usize, forward: bool) -> Self {
        Self { edge, forward }
    }

    pub fn reversed(self) -> Self {
        Self {
            edge: self.edge,
            forward: !self.forward,
        }
    }

    pub fn sign(self) -> i64 {
        if self.forward {
            1
        } else {
            -1
        }
    }
}

/// Closed edge path on one of `Γ`, `Γ*`, `◊`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    host: Host,
    steps: Vec<Step>,
}

/// `[from, to]` of a step; `◊` vertices are `Γ₀` then `Γ*₀`.
pub fn step_endpoints(g: &WeightedSurfaceGraph, host: Host, s: Step) -> [usize; 2] {
    let [a, b] = match host {
        Host::Primal => [g.tail(s.edge), g.head(s.edge)],
        Host::Dual => [g.right_face(s.edge), g.left_face(s.edge)],
        Host::Diamond => g.diamond_edge(s.edge),
    };
    if s.forward {
        [a, b]
    } else {
        [b, a]
    }
}

impl Cycle {
    /// Validates that the steps form a nonempty closed path.
    pub fn new(g: &WeightedSurfaceGraph, host: Host, steps: Vec<Step>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidParameter("empty cycle".into()));
        }
        let limit = match host {
            Host::Diamond => g.half_edge_count(),
            _ => g.edge_count(),
        };
        if let Some(s) = steps.iter().find(|s| s.edge >= limit) {
            return Err(Error::InvalidParameter(alloc::format!("edge {} out of range", s.edge)));
        }
        let c = Self { host, steps };
        if !c.is_closed(g) {
            return Err(Error::InvalidParameter("steps do not form a closed path".into()));
        }
        Ok(c)
    }

    pub(crate) fn from_steps_unchecked(host: Host, steps: Vec<Step>) -> Self {
        Self { host, steps }
    }

    /// Boundary of a face of `Γ`, counterclockwise.
    pub fn face_boundary(g: &WeightedSurfaceGraph, f: usize) -> Self {
        let steps = g
            .face_half_edges(f)
            .map(|h| {
                let d = g.dart(h);
                Step::new(d.edge, d.forward)
            })
            .collect();
        Self::from_steps_unchecked(Host::Primal, steps)
    }

    /// Boundary of the face of `Γ*` around primal vertex `v`, counterclockwise.
    pub fn vertex_star(g: &WeightedSurfaceGraph, v: usize) -> Self {
        let steps = g
            .vertex_half_edges(v)
            .into_iter()
            .map(|h| {
                let p = g.dart(g.prev(h));
                Step::new(p.edge, !p.forward)
            })
            .collect();
        Self::from_steps_unchecked(Host::Dual, steps)
    }

    pub fn host(&self) -> Host {
        self.host
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self, g: &WeightedSurfaceGraph) -> bool {
        let n = self.steps.len();
        (0..n).all(|i| {
            let [_, to] = step_endpoints(g, self.host, self.steps[i]);
            let [from, _] = step_endpoints(g, self.host, self.steps[(i + 1) % n]);
            to == from
        })
    }

    /// Vertex sequence, starting point included once.
    pub fn vertices(&self, g: &WeightedSurfaceGraph) -> Vec<usize> {
        self.steps
            .iter()
            .map(|&s| step_endpoints(g, self.host, s)[0])
            .collect()
    }

    pub fn reversed(&self) -> Self {
        Self {
            host: self.host,
            steps: self.steps.iter().rev().map(|s| s.reversed()).collect(),
        }
    }

    /// Concatenation; both cycles must start at the same vertex.
    pub fn concat(&self, other: &Cycle) -> Self {
        assert_eq!(self.host, other.host, "cycles live on different graphs");
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Self {
            host: self.host,
            steps,
        }
    }

    /// Net signed number of traversals of each edge.
    pub fn edge_counts(&self, edge_count: usize) -> Vec<i64> {
        let mut c = vec![0; edge_count];
        for s in &self.steps {
            c[s.edge] += s.sign();
        }
        c
    }

    /// Cancels immediate backtracks, cyclically.
    pub fn reduced(&self) -> Self {
        Self {
            host: self.host,
            steps: free_reduce(&self.steps),
        }
    }

    /// Same closed path up to the choice of starting step.
    pub fn is_rotation_of(&self, other: &Cycle) -> bool {
        if self.host != other.host || self.len() != other.len() {
            return false;
        }
        let n = self.len();
        n == 0 || (0..n).any(|k| (0..n).all(|i| self.steps[(i + k) % n] == other.steps[i]))
    }
}

fn free_reduce(steps: &[Step]) -> Vec<Step> {
    let mut out: Vec<Step> = Vec::with_capacity(steps.len());
    for &s in steps {
        if out.last() == Some(&s.reversed()) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    // cyclic cancellation between the ends
    let mut lo = 0;
    let mut hi = out.len();
    while hi - lo >= 2 && out[lo] == out[hi - 1].reversed() {
        lo += 1;
        hi -= 1;
    }
    out[lo..hi].to_vec()
}

/// BFS spanning tree: `parent[v] = (parent vertex, edge)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    pub parent: Vec<Option<(usize, usize)>>,
    pub depth: Vec<usize>,
}

impl SpanningTree {
    pub fn edge_count(&self) -> usize {
        self.parent.iter().filter(|p| p.is_some()).count()
    }

    /// Tree edges in vertex order.
    pub fn edges(&self) -> Vec<usize> {
        self.parent.iter().filter_map(|p| p.map(|(_, e)| e)).collect()
    }
}

/// BFS from `root` over `adjacency[v] = [(neighbour, edge id)]`, visiting
/// neighbours in stored order.
pub fn spanning_tree(adjacency: &[Vec<(usize, usize)>], root: usize) -> Result<SpanningTree> {
    let n = adjacency.len();
    if root >= n {
        return Err(Error::InvalidParameter(alloc::format!("root {root} out of range")));
    }
    let mut parent = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    let mut q = VecDeque::from([root]);
    let mut reached = 1;
    while let Some(v) = q.pop_front() {
        for &(w, e) in &adjacency[v] {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some((v, e));
                reached += 1;
                q.push_back(w);
            }
        }
    }
    if reached < n {
        let mut components = 0;
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, _) in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        return Err(Error::Disconnected { components });
    }
    Ok(SpanningTree {
        root,
        parent,
        depth,
    })
}

/// A homology basis together with its graph representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologyBasis {
    pub genus: usize,
    /// `◊` vertex all cycles pass through.
    pub root: usize,
    pub cycles: Vec<Cycle>,
    pub gamma_reps: Vec<Cycle>,
    pub dual_reps: Vec<Cycle>,
    /// `M[j][k] = ℵ_j^Γ ∘ ℵ_k^{Γ*}`.
    pub intersection: IMatrix,
    /// Whether the order is `(a₁..a_g, b₁..b_g)` with pairing `J`.
    pub symplectic: bool,
}

impl HomologyBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    fn from_cycles(
        g: &WeightedSurfaceGraph,
        root: usize,
        cycles: Vec<Cycle>,
        symplectic: bool,
    ) -> Result<Self> {
        let mut gamma_reps = Vec::with_capacity(cycles.len());
        let mut dual_reps = Vec::with_capacity(cycles.len());
        for c in &cycles {
            let (a, b) = graph_representatives(g, c)?;
            gamma_reps.push(a);
            dual_reps.push(b);
        }
        let n = cycles.len();
        let mut intersection = IMatrix::zeros(n);
        for j in 0..n {
            for k in 0..n {
                intersection[(j, k)] = intersection_number(&gamma_reps[j], &dual_reps[k])?;
            }
        }
        Ok(Self {
            genus: g.genus(),
            root,
            cycles,
            gamma_reps,
            dual_reps,
            intersection,
            symplectic,
        })
    }
}

/// Bridges of a multigraph given as edge list `links[i] = [u, v]`.
fn bridges(node_count: usize, links: &[[usize; 2]]) -> Vec<bool> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); node_count];
    for (i, &[u, v]) in links.iter().enumerate() {
        adj[u].push((v, i));
        if u != v {
            adj[v].push((u, i));
        }
    }
    let mut is_bridge = vec![false; links.len()];
    let mut disc = vec![usize::MAX; node_count];
    let mut low = vec![0; node_count];
    let mut time = 0;
    for s in 0..node_count {
        if disc[s] != usize::MAX {
            continue;
        }
        // (vertex, link used to enter, next adjacency index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(s, usize::MAX, 0)];
        disc[s] = time;
        low[s] = time;
        time += 1;
        while let Some(&mut (v, via, ref mut idx)) = stack.last_mut() {
            if *idx < adj[v].len() {
                let (w, link) = adj[v][*idx];
                *idx += 1;
                if link == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, link, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        is_bridge[via] = true;
                    }
                }
            }
        }
    }
    is_bridge
}

/// Quads (indexed by primal edge) that have half-edge `h` as a side.
fn quads_of(g: &WeightedSurfaceGraph, h: usize) -> [usize; 2] {
    [g.dart(h).edge, g.dart(g.prev(h)).edge]
}

/// Rooted `◊` cycle through the non-tree side `h`.
fn rooted_cycle(g: &WeightedSurfaceGraph, tree: &SpanningTree, h: usize) -> Cycle {
    let [u, v] = g.diamond_edge(h);
    let path_up = |mut x: usize| {
        // steps from x towards the root
        let mut steps = Vec::new();
        while let Some((p, side)) = tree.parent[x] {
            let [a, _] = g.diamond_edge(side);
            steps.push(Step::new(side, a == x));
            x = p;
        }
        steps
    };
    let mut steps: Vec<Step> = path_up(u).into_iter().rev().map(|s| s.reversed()).collect();
    steps.push(Step::new(h, true));
    steps.extend(path_up(v));
    Cycle::from_steps_unchecked(Host::Diamond, steps)
}

/// `2g` rooted cycles on `◊` spanning `H₁`. Genus zero yields an empty basis.
pub fn homotopy_basis(g: &WeightedSurfaceGraph, root: usize) -> Result<HomologyBasis> {
    if root >= g.diamond_vertex_count() {
        return Err(Error::InvalidParameter(alloc::format!("root {root} out of range")));
    }
    let tree = spanning_tree(&g.diamond_adjacency(), root)?;
    let nh = g.half_edge_count();
    let nq = g.edge_count();
    let mut in_domain = vec![false; nh];
    for e in tree.edges() {
        in_domain[e] = true;
    }
    let mut missing = vec![0usize; nq];
    for q in 0..nq {
        missing[q] = g.quad_sides(q).iter().filter(|&&h| !in_domain[h]).count();
    }
    let mut closed = vec![false; nq];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for q in 0..nq {
        match missing[q] {
            0 => closed[q] = true,
            1 => queue.push_back(q),
            _ => {}
        }
    }

    fn add_side(
        g: &WeightedSurfaceGraph,
        h: usize,
        in_domain: &mut [bool],
        missing: &mut [usize],
        closed: &mut [bool],
        queue: &mut VecDeque<usize>,
    ) {
        in_domain[h] = true;
        for q in quads_of(g, h) {
            missing[q] -= 1;
            if !closed[q] {
                match missing[q] {
                    0 => closed[q] = true,
                    1 => queue.push_back(q),
                    _ => {}
                }
            }
        }
    }

    let inflate = |in_domain: &mut Vec<bool>,
                   missing: &mut Vec<usize>,
                   closed: &mut Vec<bool>,
                   queue: &mut VecDeque<usize>| {
        while let Some(q) = queue.pop_front() {
            if closed[q] || missing[q] != 1 {
                continue;
            }
            closed[q] = true;
            let h = *g.quad_sides(q).iter().find(|&&h| !in_domain[h]).unwrap();
            add_side(g, h, in_domain, missing, closed, queue);
        }
    };

    inflate(&mut in_domain, &mut missing, &mut closed, &mut queue);
    let mut cycles = Vec::new();
    loop {
        let open: Vec<usize> = (0..nh).filter(|&h| !in_domain[h]).collect();
        if open.is_empty() {
            break;
        }
        let links: Vec<[usize; 2]> = open.iter().map(|&h| quads_of(g, h)).collect();
        let is_bridge = bridges(nq, &links);
        let pick = open
            .iter()
            .zip(&is_bridge)
            .filter(|(_, &b)| !b)
            .map(|(&h, _)| {
                let [u, v] = g.diamond_edge(h);
                (tree.depth[u] + tree.depth[v], h)
            })
            .min()
            .map(|(_, h)| h)
            .ok_or(Error::DegenerateIntersection)?;
        cycles.push(rooted_cycle(g, &tree, pick));
        add_side(g, pick, &mut in_domain, &mut missing, &mut closed, &mut queue);
        inflate(&mut in_domain, &mut missing, &mut closed, &mut queue);
    }
    if cycles.len() != 2 * g.genus() {
        return Err(Error::DegenerateIntersection);
    }
    HomologyBasis::from_cycles(g, root, cycles, false)
}

/// Which way round a face or vertex an arc runs.
fn pick_arc(ccw: &[Step], cw: &[Step]) -> bool {
    if ccw.len() != cw.len() {
        return ccw.len() < cw.len();
    }
    let min = |a: &[Step]| a.iter().map(|s| s.edge).min();
    match (min(ccw), min(cw)) {
        (Some(a), Some(b)) if a != b => a < b,
        _ => true,
    }
}

/// Projects a `◊` cycle to closed paths on `Γ` and on `Γ*`.
///
/// Between consecutive primal vertices the `Γ` path follows the boundary of
/// the face visited in between; between consecutive faces the `Γ*` path turns
/// around the vertex visited in between. The shorter way round is taken.
pub fn graph_representatives(g: &WeightedSurfaceGraph, cycle: &Cycle) -> Result<(Cycle, Cycle)> {
    if cycle.host != Host::Diamond {
        return Err(Error::HostMismatch);
    }
    let n = cycle.steps.len();
    let mut primal = Vec::new();
    let mut dual = Vec::new();
    for i in 0..n {
        let s_in = cycle.steps[i];
        let s_out = cycle.steps[(i + 1) % n];
        if s_in.forward {
            // at a face: arrived along h_in, leave back along h_out
            if s_out.forward {
                return Err(Error::InvalidParameter("not a closed path on the quad-graph".into()));
            }
            let (h_in, h_out) = (s_in.edge, s_out.edge);
            let mut ccw = Vec::new();
            let mut h = h_in;
            while h != h_out {
                let d = g.dart(h);
                ccw.push(Step::new(d.edge, d.forward));
                h = g.next(h);
                if h == h_in {
                    return Err(Error::InvalidParameter("sides belong to different faces".into()));
                }
            }
            let mut cw = Vec::new();
            let mut h = h_in;
            while h != h_out {
                h = g.prev(h);
                let d = g.dart(h);
                cw.push(Step::new(d.edge, !d.forward));
            }
            primal.extend(if pick_arc(&ccw, &cw) { ccw } else { cw });
        } else {
            // at a vertex: arrived back along h_in, leave along h_out
            if !s_out.forward {
                return Err(Error::InvalidParameter("not a closed path on the quad-graph".into()));
            }
            let (h_in, h_out) = (s_in.edge, s_out.edge);
            let mut ccw = Vec::new();
            let mut h = h_in;
            while h != h_out {
                let p = g.dart(g.prev(h));
                ccw.push(Step::new(p.edge, !p.forward));
                h = g.rotate_ccw(h);
                if h == h_in {
                    return Err(Error::InvalidParameter("sides meet at different vertices".into()));
                }
            }
            let mut cw = Vec::new();
            let mut h = h_in;
            while h != h_out {
                let d = g.dart(h);
                cw.push(Step::new(d.edge, !d.forward));
                h = g.rotate_cw(h);
            }
            dual.extend(if pick_arc(&ccw, &cw) { ccw } else { cw });
        }
    }
    Ok((
        Cycle::from_steps_unchecked(Host::Primal, free_reduce(&primal)),
        Cycle::from_steps_unchecked(Host::Dual, free_reduce(&dual)),
    ))
}

/// Algebraic intersection number of a `Γ` cycle with a `Γ*` cycle, counted
/// over the quads where both cross; `e ∘ e* = +1`. Swapping the roles
/// negates the result.
pub fn intersection_number(c1: &Cycle, c2: &Cycle) -> Result<i64> {
    let (primal, dual, sign) = match (c1.host, c2.host) {
        (Host::Primal, Host::Dual) => (c1, c2, 1),
        (Host::Dual, Host::Primal) => (c2, c1, -1),
        _ => return Err(Error::HostMismatch),
    };
    let n = primal
        .steps
        .iter()
        .chain(&dual.steps)
        .map(|s| s.edge + 1)
        .max()
        .unwrap_or(0);
    let a = primal.edge_counts(n);
    let b = dual.edge_counts(n);
    Ok(sign * a.iter().zip(&b).map(|(x, y)| x * y).sum::<i64>())
}

/// Integer `S` with `S M Sᵀ = J` for a unimodular antisymmetric `M`.
///
/// Rows of `S` express the new basis in the old one, ordered `(a₁..a_g, b₁..b_g)`.
pub fn symplectic_reduction(m: &IMatrix) -> Result<IMatrix> {
    let n = m.size();
    if !n.is_multiple_of(2) {
        return Err(Error::DegenerateIntersection);
    }
    let pair = |u: &[i64], v: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += u[i] * m[(i, j)] * v[j];
            }
        }
        s
    };
    let mut remaining: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut a_list = Vec::new();
    let mut b_list = Vec::new();
    while !remaining.is_empty() {
        let a = remaining.remove(0);
        // Euclid on the pairings with a until a single ±1 survives
        let b_idx = loop {
            let nonzero: Vec<(usize, i64)> = remaining
                .iter()
                .enumerate()
                .map(|(i, r)| (i, pair(&a, r)))
                .filter(|&(_, p)| p != 0)
                .collect();
            let &(bi, pb) = nonzero
                .iter()
                .min_by_key(|&&(i, p)| (p.abs(), i))
                .ok_or(Error::DegenerateIntersection)?;
            if pb.abs() == 1 {
                break bi;
            }
            let b = remaining[bi].clone();
            let mut changed = false;
            for &(i, p) in &nonzero {
                if i == bi {
                    continue;
                }
                let q = p.div_euclid(pb);
                if q != 0 {
                    for (x, y) in remaining[i].iter_mut().zip(&b) {
                        *x -= q * y;
                    }
                    changed = true;
                }
            }
            if !changed {
                // every other pairing is a multiple-free remainder already
                return Err(Error::DegenerateIntersection);
            }
        };
        let mut b = remaining.remove(b_idx);
        if pair(&a, &b) < 0 {
            b.iter_mut().for_each(|x| *x = -*x);
        }
        for w in remaining.iter_mut() {
            let wb = pair(w, &b);
            let wa = pair(w, &a);
            for i in 0..n {
                w[i] = w[i] - wb * a[i] + wa * b[i];
            }
        }
        a_list.push(a);
        b_list.push(b);
    }
    let rows: Vec<Vec<i64>> = a_list.into_iter().chain(b_list).collect();
    let s = IMatrix::from_rows(&rows);
    let check = s.mul(m).mul(&s.transpose());
    if check != IMatrix::standard_symplectic(n / 2) {
        return Err(Error::DegenerateIntersection);
    }
    Ok(s)
}

/// Rebuilds the basis as integer combinations of the old cycles so that the
/// intersection matrix becomes `J`.
pub fn symplectic_normalize(g: &WeightedSurfaceGraph, basis: &HomologyBasis) -> Result<HomologyBasis> {
    if basis.is_empty() {
        return Ok(HomologyBasis {
            symplectic: true,
            ..basis.clone()
        });
    }
    let s = symplectic_reduction(&basis.intersection)?;
    if s == IMatrix::identity(basis.len()) {
        return Ok(HomologyBasis {
            symplectic: true,
            ..basis.clone()
        });
    }
    let mut cycles = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let mut steps = Vec::new();
        for (j, old) in basis.cycles.iter().enumerate() {
            let c = s[(i, j)];
            let piece = if c < 0 { old.reversed() } else { old.clone() };
            for _ in 0..c.unsigned_abs() {
                steps.extend_from_slice(&piece.steps);
            }
        }
        cycles.push(Cycle::from_steps_unchecked(Host::Diamond, free_reduce(&steps)));
    }
    let out = HomologyBasis::from_cycles(g, basis.root, cycles, true)?;
    if out.intersection != IMatrix::standard_symplectic(g.genus()) {
        return Err(Error::DegenerateIntersection);
    }
    Ok(out)
}

/// Homotopy basis followed by symplectic normalization.
pub fn canonical_basis(g: &WeightedSurfaceGraph, root: usize) -> Result<HomologyBasis> {
    let raw = homotopy_basis(g, root)?;
    symplectic_normalize(g, &raw)
}
