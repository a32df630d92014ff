//! Shared test surfaces.

use alloc::vec;
use alloc::vec::Vec;

use crate::conformal::{CellComplex, Dart, WeightedSurfaceGraph};

/// Square-lattice torus with `n × n` unit cells, edges numbered
/// horizontal first then vertical.
pub fn grid_torus(n: usize) -> WeightedSurfaceGraph {
    let v = |i: usize, j: usize| (j % n) * n + (i % n);
    let h = |i: usize, j: usize| (j % n) * n + (i % n);
    let vert = |i: usize, j: usize| n * n + (j % n) * n + (i % n);
    let mut edges = vec![[0, 0]; 2 * n * n];
    for j in 0..n {
        for i in 0..n {
            edges[h(i, j)] = [v(i, j), v(i + 1, j)];
            edges[vert(i, j)] = [v(i, j), v(i, j + 1)];
        }
    }
    let mut faces = Vec::new();
    for j in 0..n {
        for i in 0..n {
            faces.push(vec![
                Dart::new(h(i, j), true),
                Dart::new(vert(i + 1, j), true),
                Dart::new(h(i, j + 1), false),
                Dart::new(vert(i, j), false),
            ]);
        }
    }
    let cells = CellComplex {
        vertex_count: n * n,
        edges,
        faces,
    };
    WeightedSurfaceGraph::from_cells(&cells, vec![1.0; 2 * n * n]).unwrap()
}
