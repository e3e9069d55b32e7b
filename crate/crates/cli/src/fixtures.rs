//! Built-in finite graphs used by `verify` when no graph is given.

use std::collections::BTreeSet;

use heat_series_core::graph::{EdgeRecord, GraphDocument, VertexRecord};
use heat_series_core::FiniteGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::source::GraphSource;

pub const DEFAULT_SEED: u64 = 20_240_917;

pub fn complete_two() -> FiniteGraph {
    FiniteGraph::unit(0, &[0, 1], &[(0, 1, 1.0)]).expect("K2")
}

pub fn path(n: i64) -> FiniteGraph {
    let vertices: Vec<i64> = (0..n).collect();
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
    FiniteGraph::unit(0, &vertices, &edges).expect("path")
}

pub fn cycle(n: i64) -> FiniteGraph {
    assert!(n >= 3);
    let vertices: Vec<i64> = (0..n).collect();
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    FiniteGraph::unit(0, &vertices, &edges).expect("cycle")
}

/// Segment `{−m, …, n−1−m}` of `ℤ` with `n` vertices, rooted at `0`.
pub fn integer_segment(n: i64) -> FiniteGraph {
    let lo = -(n / 2);
    let vertices: Vec<i64> = (lo..lo + n).collect();
    let edges: Vec<_> = (lo..lo + n - 1).map(|i| (i, i + 1, 1.0)).collect();
    FiniteGraph::unit(0, &vertices, &edges).expect("segment")
}

/// Connected random graph: a random spanning tree plus `n` extra edges,
/// weights and measures uniform in `[1/2, 2]`.
pub fn random_weighted(n: usize, seed: u64) -> FiniteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = BTreeSet::new();
    for child in 1..n {
        pairs.insert((rng.gen_range(0..child), child));
    }
    let mut attempts = 0;
    while pairs.len() < 2 * n - 1 && attempts < 10 * n {
        attempts += 1;
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let vertices = (0..n).map(|i| VertexRecord { id: i as i64, mu: dyadic(&mut rng) }).collect();
    let edges = pairs
        .into_iter()
        .map(|(u, v)| EdgeRecord { u: u as i64, v: v as i64, w: dyadic(&mut rng) })
        .collect();
    FiniteGraph::from_document(&GraphDocument { root: 0, vertices, edges }).expect("random graph")
}

/// A multiple of 1/16 in [0.5, 2]; short dyadics keep exact iterates small.
fn dyadic(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(8..=32) as f64 / 16.0
}

pub fn fixture_set(seed: u64) -> Vec<GraphSource> {
    let named = |name: &str, graph| GraphSource::Fixture { name: name.to_string(), graph };
    vec![
        named("K2", complete_two()),
        named("P10", path(10)),
        named("C6", cycle(6)),
        named("C100", cycle(100)),
        named("random-50", random_weighted(50, seed)),
        named("Z-segment-200", integer_segment(200)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use heat_series_core::{deg, Graph};

    #[test]
    fn fixture_shapes() {
        assert_eq!(path(10).len(), 10);
        assert_eq!(deg(&cycle(100), &17).unwrap(), 2.0);
        let seg = integer_segment(200);
        assert_eq!((seg.len(), seg.root()), (200, 0));
        assert_eq!(deg(&seg, &-100).unwrap(), 1.0);
        assert!(seg.contains(&99) && !seg.contains(&100));
    }

    #[test]
    fn random_graph_is_reproducible_and_connected() {
        let a = random_weighted(50, DEFAULT_SEED);
        let b = random_weighted(50, DEFAULT_SEED);
        assert_eq!(a.to_document(), b.to_document());
        assert_eq!(a.ball(&0, 50).unwrap().len(), 50);
        assert_ne!(random_weighted(50, 1).to_document(), a.to_document());
    }
}
