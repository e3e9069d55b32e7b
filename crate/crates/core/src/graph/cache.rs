use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use super::Graph;
use crate::error::Result;

type BallKey<V> = (V, usize);
type BallMap<V> = HashMap<BallKey<V>, Arc<BTreeSet<V>>>;

/// Wraps a graph and memoises `ball` queries. Concurrent callers may race to
/// fill the same entry; both compute the same set and either insert wins, so
/// the cache is observationally absent.
pub struct CachedBalls<G: Graph> {
    inner: G,
    cache: RwLock<BallMap<G::Vertex>>,
}

impl<G: Graph> CachedBalls<G> {
    pub fn new(inner: G) -> Self {
        Self { inner, cache: RwLock::new(HashMap::new()) }
    }

    pub fn inner(&self) -> &G {
        &self.inner
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().map(|c| c.len()).unwrap_or(0)
    }

    pub fn ball_shared(&self, x: &G::Vertex, r: usize) -> Result<Arc<BTreeSet<G::Vertex>>> {
        let key = (x.clone(), r);
        if let Some(hit) = self.cache.read().ok().and_then(|c| c.get(&key).cloned()) {
            return Ok(hit);
        }
        let ball = Arc::new(self.inner.ball(x, r)?);
        if let Ok(mut cache) = self.cache.write() {
            cache.entry(key).or_insert_with(|| ball.clone());
        }
        Ok(ball)
    }
}

impl<G: Graph> Graph for CachedBalls<G> {
    type Vertex = G::Vertex;

    fn root(&self) -> G::Vertex {
        self.inner.root()
    }

    fn contains(&self, x: &G::Vertex) -> bool {
        self.inner.contains(x)
    }

    fn neighbors(&self, x: &G::Vertex) -> Result<Vec<(G::Vertex, f64)>> {
        self.inner.neighbors(x)
    }

    fn measure(&self, x: &G::Vertex) -> Result<f64> {
        self.inner.measure(x)
    }

    fn weight(&self, x: &G::Vertex, y: &G::Vertex) -> Result<f64> {
        self.inner.weight(x, y)
    }

    fn closed_form_distance(&self, x: &G::Vertex, y: &G::Vertex) -> Option<usize> {
        self.inner.closed_form_distance(x, y)
    }

    fn vertices(&self) -> Option<Vec<G::Vertex>> {
        self.inner.vertices()
    }

    fn uniform_degree(&self) -> Option<f64> {
        self.inner.uniform_degree()
    }

    fn ball(&self, x: &G::Vertex, r: usize) -> Result<BTreeSet<G::Vertex>> {
        Ok((*self.ball_shared(x, r)?).clone())
    }
}
