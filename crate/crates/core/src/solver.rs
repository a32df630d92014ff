//! Sparse symmetric positive definite solvers for graph Laplacians.
//!
//! The default is a skyline Cholesky factorisation under reverse
//! Cuthill–McKee ordering; Jacobi-preconditioned conjugate gradients is
//! available as an alternative. Both report the relative residual reached.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
// unused when std is in the dependency graph (inherent float methods win)
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Compressed sparse row matrix with sorted, deduplicated columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Square `n × n` matrix from `(row, col, value)` triplets; duplicates add up.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            assert!(i < n && j < n, "triplet index out of range");
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in &mut rows {
            row.sort_by_key(|&(j, _)| j);
            let mut last: Option<usize> = None;
            for &(j, v) in row.iter() {
                if last == Some(j) {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(j);
                    values.push(v);
                    last = Some(j);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| (v - self.get(j, i)).abs() <= tol))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        d
    }

    /// `‖b − Ax‖ / ‖b‖`, or `‖Ax‖` when `b = 0`.
    pub fn relative_residual(&self, x: &[f64], b: &[f64]) -> f64 {
        let ax = self.mul_vec(x);
        let r = norm(&ax.iter().zip(b).map(|(a, b)| b - a).collect::<Vec<_>>());
        let nb = norm(b);
        if nb > 0.0 {
            r / nb
        } else {
            r
        }
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Outcome of a linear solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Jacobi-preconditioned conjugate gradients, stopping at relative residual `tol`.
pub fn conjugate_gradient(
    a: &CsrMatrix,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SolveStats)> {
    let n = a.size();
    let nb = norm(b);
    let mut x = vec![0.0; n];
    if nb == 0.0 {
        return Ok((
            x,
            SolveStats {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for it in 1..=max_iter {
        let ap = a.mul_vec(&p);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if norm(&r) <= tol * nb {
            // recompute from scratch so the reported residual is honest
            let rel = a.relative_residual(&x, b);
            if rel <= tol {
                return Ok((
                    x,
                    SolveStats {
                        iterations: it,
                        relative_residual: rel,
                    },
                ));
            }
            r = a.mul_vec(&x).iter().zip(b).map(|(ax, b)| b - ax).collect();
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::SolverDidNotConverge {
        iterations: max_iter,
        residual: a.relative_residual(&x, b),
    })
}

/// Reverse Cuthill–McKee ordering; `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.size();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).filter(|&(j, _)| j != i).count()).collect();
    let neighbours = |i: usize| {
        let mut nb: Vec<usize> = a.row(i).map(|(j, _)| j).filter(|&j| j != i).collect();
        nb.sort_by_key(|&j| (degree[j], j));
        nb
    };
    let bfs_last = |start: usize, seen_global: &[bool]| -> (usize, usize) {
        // returns (farthest vertex with smallest degree, eccentricity)
        let mut depth = vec![usize::MAX; n];
        depth[start] = 0;
        let mut q = VecDeque::from([start]);
        let mut far = start;
        while let Some(v) = q.pop_front() {
            if depth[v] > depth[far] || (depth[v] == depth[far] && degree[v] < degree[far]) {
                far = v;
            }
            for (w, _) in a.row(v) {
                if depth[w] == usize::MAX && !seen_global[w] {
                    depth[w] = depth[v] + 1;
                    q.push_back(w);
                }
            }
        }
        (far, depth[far])
    };

    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n)
            .filter(|&i| !seen[i])
            .min_by_key(|&i| (degree[i], i))
            .unwrap();
        // pseudo-peripheral start
        let (mut start, mut ecc) = bfs_last(seed, &seen);
        for _ in 0..4 {
            let (far, e) = bfs_last(start, &seen);
            if e <= ecc {
                break;
            }
            start = far;
            ecc = e;
        }
        seen[start] = true;
        let mut q = VecDeque::from([start]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for w in neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    order.reverse();
    order
}

/// Envelope (skyline) Cholesky factor `PAPᵀ = LLᵀ`.
#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    perm: Vec<usize>,
    inv_perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<f64>,
}

impl SkylineCholesky {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        Self::factor_with_ordering(a, reverse_cuthill_mckee(a))
    }

    pub fn factor_with_ordering(a: &CsrMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.size();
        assert_eq!(perm.len(), n);
        let mut inv_perm = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv_perm[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (new, &old) in perm.iter().enumerate() {
            for (j, _) in a.row(old) {
                let c = inv_perm[j];
                if c < first[new] {
                    first[new] = c;
                }
            }
        }
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + (i - first[i] + 1));
        }
        let mut values = vec![0.0; start[n]];
        for (new, &old) in perm.iter().enumerate() {
            for (j, v) in a.row(old) {
                let c = inv_perm[j];
                if c <= new {
                    values[start[new] + c - first[new]] += v;
                }
            }
        }
        let scale = a.diagonal().iter().fold(0.0f64, |m, d| m.max(d.abs()));
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let mut s = values[start[i] + j - fi];
                for k in k0..j {
                    s -= values[start[i] + k - fi] * values[start[j] + k - fj];
                }
                if j < i {
                    values[start[i] + j - fi] = s / values[start[j + 1] - 1];
                } else {
                    if !(s > 1e-14 * scale) {
                        return Err(Error::NotPositiveDefinite);
                    }
                    values[start[i] + i - fi] = s.sqrt();
                }
            }
        }
        Ok(Self {
            perm,
            inv_perm,
            first,
            start,
            values,
        })
    }

    /// Number of stored factor entries.
    pub fn envelope_size(&self) -> usize {
        self.values.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.values[self.start[i]..self.start[i + 1]];
            let mut s = y[i];
            for k in fi..i {
                s -= row[k - fi] * y[k];
            }
            y[i] = s / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.values[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let yi = y[i];
            for k in fi..i {
                y[k] -= row[k - fi] * yi;
            }
        }
        (0..n).map(|old| y[self.inv_perm[old]]).collect()
    }
}

/// Which algorithm a [`LaplaceSystem`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SolverKind {
    #[default]
    Direct,
    ConjugateGradient,
}

/// Relative residual every solve must reach.
pub const RELATIVE_TOLERANCE: f64 = 1e-11;

/// Weighted graph Laplacian with one vertex pinned to zero, factored once.
#[derive(Debug, Clone)]
pub struct LaplaceSystem {
    n: usize,
    root: usize,
    matrix: CsrMatrix,
    factor: Option<SkylineCholesky>,
    kind: SolverKind,
}

impl LaplaceSystem {
    /// `edges` are `(u, v, weight)`; self-loops contribute nothing.
    pub fn new(n: usize, edges: &[(usize, usize, f64)], root: usize, kind: SolverKind) -> Result<Self> {
        if root >= n {
            return Err(Error::InvalidParameter(alloc::format!(
                "root {root} out of range for {n} vertices"
            )));
        }
        let reduce = |v: usize| if v < root { Some(v) } else if v == root { None } else { Some(v - 1) };
        let mut triplets = Vec::with_capacity(4 * edges.len());
        for &(u, v, w) in edges {
            if u == v {
                continue;
            }
            let (ru, rv) = (reduce(u), reduce(v));
            if let Some(i) = ru {
                triplets.push((i, i, w));
            }
            if let Some(j) = rv {
                triplets.push((j, j, w));
            }
            if let (Some(i), Some(j)) = (ru, rv) {
                triplets.push((i, j, -w));
                triplets.push((j, i, -w));
            }
        }
        let matrix = CsrMatrix::from_triplets(n - 1, &triplets);
        let factor = match kind {
            SolverKind::Direct => Some(SkylineCholesky::factor(&matrix)?),
            SolverKind::ConjugateGradient => None,
        };
        Ok(Self {
            n,
            root,
            matrix,
            factor,
            kind,
        })
    }

    pub fn kind(&self) -> SolverKind {
        self.kind
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Solve `L f = b` with `f(root) = 0`; the root row of `b` is dropped.
    pub fn solve(&self, rhs: &[f64]) -> Result<(Vec<f64>, SolveStats)> {
        assert_eq!(rhs.len(), self.n);
        let b: Vec<f64> = rhs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.root)
            .map(|(_, &v)| v)
            .collect();
        let (x, stats) = match &self.factor {
            Some(chol) => {
                let mut x = chol.solve(&b);
                let mut rel = self.matrix.relative_residual(&x, &b);
                let mut steps = 0;
                // iterative refinement
                while rel > 1e-14 && steps < 3 {
                    let ax = self.matrix.mul_vec(&x);
                    let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
                    let dx = chol.solve(&r);
                    let cand: Vec<f64> = x.iter().zip(&dx).map(|(x, d)| x + d).collect();
                    let cand_rel = self.matrix.relative_residual(&cand, &b);
                    steps += 1;
                    if cand_rel >= rel {
                        break;
                    }
                    x = cand;
                    rel = cand_rel;
                }
                if !(rel <= RELATIVE_TOLERANCE) {
                    return Err(Error::SolverDidNotConverge {
                        iterations: steps,
                        residual: rel,
                    });
                }
                (
                    x,
                    SolveStats {
                        iterations: steps,
                        relative_residual: rel,
                    },
                )
            }
            None => conjugate_gradient(&self.matrix, &b, 1e-13, 20 * self.n.max(50))?,
        };
        let mut full = Vec::with_capacity(self.n);
        full.extend_from_slice(&x[..self.root]);
        full.push(0.0);
        full.extend_from_slice(&x[self.root..]);
        Ok((full, stats))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid_laplacian(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize, f64)> {
        let mut edges = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let v = j * n + i;
                edges.push((v, j * n + (i + 1) % n, rng.gen_range(0.2..4.0)));
                edges.push((v, ((j + 1) % n) * n + i, rng.gen_range(0.2..4.0)));
            }
        }
        edges
    }

    #[test]
    fn triplets_accumulate() {
        let m = CsrMatrix::from_triplets(2, &[(0, 0, 1.0), (0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]);
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.nnz(), 3);
        assert!(m.is_symmetric(0.0));
        assert_eq!(m.mul_vec(&[1.0, 1.0]), vec![2.0, -1.0]);
    }

    #[test]
    fn rcm_is_a_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let edges = grid_laplacian(7, &mut rng);
        let sys = LaplaceSystem::new(49, &edges, 0, SolverKind::ConjugateGradient).unwrap();
        let mut p = reverse_cuthill_mckee(&sys.matrix);
        p.sort_unstable();
        assert_eq!(p, (0..48).collect::<Vec<_>>());
    }

    #[test]
    fn cholesky_matches_dense_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let edges = grid_laplacian(6, &mut rng);
        let sys = LaplaceSystem::new(36, &edges, 5, SolverKind::Direct).unwrap();
        let dense = sys.matrix.to_dense();
        let chol = SkylineCholesky::factor(&sys.matrix).unwrap();
        let b: Vec<f64> = (0..35).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = chol.solve(&b);
        // oracle: Gaussian elimination on the dense copy
        let n = 35;
        let mut m = dense.clone();
        let mut y = b.clone();
        for k in 0..n {
            for i in k + 1..n {
                let l = m[i][k] / m[k][k];
                for j in k..n {
                    m[i][j] -= l * m[k][j];
                }
                y[i] -= l * y[k];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] -= m[i][j] * y[j];
            }
            y[i] /= m[i][i];
        }
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn direct_and_iterative_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let edges = grid_laplacian(12, &mut rng);
        let n = 144;
        let mut rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mean = rhs.iter().sum::<f64>() / n as f64;
        rhs.iter_mut().for_each(|v| *v -= mean);
        let direct = LaplaceSystem::new(n, &edges, 17, SolverKind::Direct).unwrap();
        let cg = LaplaceSystem::new(n, &edges, 17, SolverKind::ConjugateGradient).unwrap();
        let (x1, s1) = direct.solve(&rhs).unwrap();
        let (x2, s2) = cg.solve(&rhs).unwrap();
        assert!(s1.relative_residual <= RELATIVE_TOLERANCE);
        assert!(s2.relative_residual <= RELATIVE_TOLERANCE);
        assert_eq!(x1[17], 0.0);
        for (a, b) in x1.iter().zip(&x2) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let m = CsrMatrix::from_triplets(2, &[(0, 0, 1.0), (1, 1, -1.0)]);
        assert!(matches!(SkylineCholesky::factor(&m), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let edges = grid_laplacian(10, &mut rng);
        let sys = LaplaceSystem::new(100, &edges, 0, SolverKind::ConjugateGradient).unwrap();
        let b: Vec<f64> = (0..99).map(|i| (i as f64).sin()).collect();
        match conjugate_gradient(&sys.matrix, &b, 1e-13, 2) {
            Err(Error::SolverDidNotConverge { iterations, residual }) => {
                assert_eq!(iterations, 2);
                assert!(residual > 1e-13);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
