#![allow(dead_code)]

use heat_series_core::graph::{EdgeRecord, GraphDocument, VertexRecord};
use heat_series_core::{FiniteGraph, LocalFunction};
use proptest::prelude::*;

/// Connected random graph on `0..n`: a random spanning tree plus extra
/// edges, with dyadic weights and measures so exact lifts are short.
pub fn graph_strategy(max_n: usize) -> impl Strategy<Value = FiniteGraph> {
    (2..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(0usize..1000, n - 1),
            proptest::collection::vec((0..n, 0..n), 0..=n),
            proptest::collection::vec(1u32..=32, 2 * n),
            proptest::collection::vec(1u32..=16, n),
        )
            .prop_map(move |(parents, extra, weights, measures)| {
                let mut edges: Vec<(usize, usize)> = Vec::new();
                for (i, p) in parents.iter().enumerate() {
                    let child = i + 1;
                    edges.push((p % child, child));
                }
                for (a, b) in extra {
                    let (a, b) = (a.min(b), a.max(b));
                    if a != b && !edges.contains(&(a, b)) {
                        edges.push((a, b));
                    }
                }
                let doc = GraphDocument {
                    root: 0,
                    vertices: (0..n).map(|i| VertexRecord { id: i as i64, mu: measures[i] as f64 / 4.0 }).collect(),
                    edges: edges
                        .iter()
                        .enumerate()
                        .map(|(i, &(a, b))| EdgeRecord {
                            u: a as i64,
                            v: b as i64,
                            w: weights[i % weights.len()] as f64 / 8.0,
                        })
                        .collect(),
                };
                FiniteGraph::from_document(&doc).expect("generated graph is valid")
            })
    })
}

pub fn function_strategy(n: usize) -> impl Strategy<Value = LocalFunction<i64, f64>> {
    proptest::collection::vec(-64i32..=64, n)
        .prop_map(|v| v.into_iter().enumerate().map(|(i, c)| (i as i64, c as f64 / 16.0)).collect())
}

pub fn graph_and_function(max_n: usize) -> impl Strategy<Value = (FiniteGraph, LocalFunction<i64, f64>)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.len();
        (Just(g), function_strategy(n))
    })
}

pub fn path(n: i64) -> FiniteGraph {
    let vertices: Vec<i64> = (0..n).collect();
    let edges: Vec<(i64, i64, f64)> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
    FiniteGraph::unit(0, &vertices, &edges).unwrap()
}

pub fn cycle(n: i64) -> FiniteGraph {
    let vertices: Vec<i64> = (0..n).collect();
    let edges: Vec<(i64, i64, f64)> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    FiniteGraph::unit(0, &vertices, &edges).unwrap()
}
