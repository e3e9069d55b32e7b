//! Graphs shared by the benchmarks.

use heat_series_core::FiniteGraph;

/// Unit-weight cycle on `n` vertices.
pub fn cycle(n: i64) -> FiniteGraph {
    let vertices: Vec<i64> = (0..n).collect();
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    FiniteGraph::unit(0, &vertices, &edges).expect("cycle")
}
