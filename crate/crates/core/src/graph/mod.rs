//! Locally finite weighted graphs.
//!
//! A graph is anything that can enumerate the weighted neighbours of a vertex
//! and report its measure. Finite graphs store adjacency explicitly; the
//! infinite families (`ℤ`, `ℤᵈ`, regular trees) only expose a neighbour
//! oracle and closed-form distances, and balls are materialised on demand.

mod cache;
mod family;
mod finite;
mod function;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{vertex_name, Error, Result};

pub use cache::CachedBalls;
pub use family::{GraphFamily, IntegerLine, Lattice, RegularTree, TreeWord, UniformWeights};
pub use finite::{truncate, EdgeRecord, FiniteGraph, GraphDocument, VertexRecord};
pub use function::LocalFunction;

/// Vertex id requirements shared by every graph type.
pub trait VertexId:
    Clone + Eq + Ord + Hash + Debug + Send + Sync + Serialize + DeserializeOwned + 'static
{
}

impl<T> VertexId for T where
    T: Clone + Eq + Ord + Hash + Debug + Send + Sync + Serialize + DeserializeOwned + 'static
{
}

/// A locally finite, simple, undirected weighted graph with a distinguished
/// root `p`.
///
/// Implementations must keep `ω` symmetric and strictly positive on edges,
/// and `μ` strictly positive on vertices. Graphs are immutable once built.
pub trait Graph: Send + Sync {
    type Vertex: VertexId;

    fn root(&self) -> Self::Vertex;

    fn contains(&self, x: &Self::Vertex) -> bool;

    /// Neighbours of `x` together with the edge weights `ω(x, y)`.
    fn neighbors(&self, x: &Self::Vertex) -> Result<Vec<(Self::Vertex, f64)>>;

    /// Vertex measure `μ(x)`.
    fn measure(&self, x: &Self::Vertex) -> Result<f64>;

    /// Edge weight `ω(x, y)`, zero for non-neighbours.
    fn weight(&self, x: &Self::Vertex, y: &Self::Vertex) -> Result<f64> {
        if !self.contains(y) {
            return Err(Error::UnknownVertex(vertex_name(y)));
        }
        Ok(self
            .neighbors(x)?
            .into_iter()
            .find(|(z, _)| z == y)
            .map_or(0.0, |(_, w)| w))
    }

    /// Closed-form combinatorial distance, when the graph has one.
    fn closed_form_distance(&self, _x: &Self::Vertex, _y: &Self::Vertex) -> Option<usize> {
        None
    }

    /// All vertices, for finite graphs.
    fn vertices(&self) -> Option<Vec<Self::Vertex>> {
        None
    }

    /// `Some(D)` when every vertex has the same weighted degree `D`.
    fn uniform_degree(&self) -> Option<f64> {
        None
    }

    /// Closed ball `B_r(x)`. The default is a breadth-first search over the
    /// neighbour oracle; [`CachedBalls`] memoises it.
    fn ball(&self, x: &Self::Vertex, r: usize) -> Result<BTreeSet<Self::Vertex>> {
        bfs_ball(self, x, r)
    }
}

/// Weighted degree `Deg(x) = Σ_y ω(x,y) / μ(x)`.
pub fn deg<G: Graph + ?Sized>(g: &G, x: &G::Vertex) -> Result<f64> {
    let mu = g.measure(x)?;
    let total: f64 = g.neighbors(x)?.iter().map(|(_, w)| w).sum();
    Ok(total / mu)
}

/// Combinatorial distance. Uses the graph's closed form when available,
/// breadth-first search otherwise.
pub fn distance<G: Graph + ?Sized>(g: &G, x: &G::Vertex, y: &G::Vertex) -> Result<usize> {
    for v in [x, y] {
        if !g.contains(v) {
            return Err(Error::UnknownVertex(vertex_name(v)));
        }
    }
    match g.closed_form_distance(x, y) {
        Some(d) => Ok(d),
        None => bfs_distance(g, x, y, None),
    }
}

/// Breadth-first distance, optionally giving up beyond `limit`.
pub fn bfs_distance<G: Graph + ?Sized>(
    g: &G,
    x: &G::Vertex,
    y: &G::Vertex,
    limit: Option<usize>,
) -> Result<usize> {
    if x == y {
        return Ok(0);
    }
    let mut seen: HashMap<G::Vertex, usize> = HashMap::from([(x.clone(), 0)]);
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(v) = queue.pop_front() {
        let dv = seen[&v];
        if limit.is_some_and(|l| dv >= l) {
            continue;
        }
        for (w, _) in g.neighbors(&v)? {
            if seen.contains_key(&w) {
                continue;
            }
            if &w == y {
                return Ok(dv + 1);
            }
            seen.insert(w.clone(), dv + 1);
            queue.push_back(w);
        }
    }
    Err(Error::Unreachable {
        from: vertex_name(x),
        to: vertex_name(y),
    })
}

/// Breadth-first ball enumeration over the neighbour oracle.
pub fn bfs_ball<G: Graph + ?Sized>(g: &G, x: &G::Vertex, r: usize) -> Result<BTreeSet<G::Vertex>> {
    Ok(bfs_layers(g, x, r)?.into_iter().flatten().collect())
}

/// Spheres `S_0(x), S_1(x), …, S_r(x)`; stops early when a layer is empty.
pub fn bfs_layers<G: Graph + ?Sized>(g: &G, x: &G::Vertex, r: usize) -> Result<Vec<Vec<G::Vertex>>> {
    if !g.contains(x) {
        return Err(Error::UnknownVertex(vertex_name(x)));
    }
    let mut seen: BTreeSet<G::Vertex> = BTreeSet::from([x.clone()]);
    let mut layers = vec![vec![x.clone()]];
    for _ in 0..r {
        let mut next = Vec::new();
        for v in layers.last().expect("nonempty") {
            for (w, _) in g.neighbors(v)? {
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        layers.push(next);
    }
    Ok(layers)
}

/// The 1-neighbourhood `(K)₁ = K ∪ ⋃_{x∈K} N(x)`.
pub fn one_neighborhood<'a, G, I>(g: &G, k: I) -> Result<BTreeSet<G::Vertex>>
where
    G: Graph + ?Sized,
    I: IntoIterator<Item = &'a G::Vertex>,
    G::Vertex: 'a,
{
    let mut out = BTreeSet::new();
    for x in k {
        if !g.contains(x) {
            return Err(Error::UnknownVertex(vertex_name(x)));
        }
        out.insert(x.clone());
        out.extend(g.neighbors(x)?.into_iter().map(|(y, _)| y));
    }
    Ok(out)
}

/// Running maximum of `Deg` over the balls `B_r(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeProfile {
    /// `sup[r] = max { Deg(y) : y ∈ B_r(x) }` for `r = 0..=max_r`.
    pub sup: Vec<f64>,
    /// First radius from which the running maximum is final for every
    /// larger radius too (the ball exhausted its component, or the degree is
    /// uniform).
    pub stable_from: Option<usize>,
}

impl DegreeProfile {
    pub fn at(&self, r: usize) -> f64 {
        self.sup[r.min(self.sup.len() - 1)]
    }
}

pub fn degree_profile<G: Graph + ?Sized>(g: &G, x: &G::Vertex, max_r: usize) -> Result<DegreeProfile> {
    if !g.contains(x) {
        return Err(Error::UnknownVertex(vertex_name(x)));
    }
    if let Some(d) = g.uniform_degree() {
        return Ok(DegreeProfile {
            sup: vec![d; max_r + 1],
            stable_from: Some(0),
        });
    }
    let layers = bfs_layers(g, x, max_r)?;
    degree_profile_from_layers(g, &layers, max_r)
}

/// [`degree_profile`] from already computed spheres `bfs_layers(g, x, max_r)`.
pub fn degree_profile_from_layers<G: Graph + ?Sized>(
    g: &G,
    layers: &[Vec<G::Vertex>],
    max_r: usize,
) -> Result<DegreeProfile> {
    if let Some(d) = g.uniform_degree() {
        return Ok(DegreeProfile {
            sup: vec![d; max_r + 1],
            stable_from: Some(0),
        });
    }
    let mut sup = Vec::with_capacity(max_r + 1);
    let mut running = 0.0f64;
    for layer in layers {
        for v in layer {
            running = running.max(deg(g, v)?);
        }
        sup.push(running);
    }
    // layers stop early only when the component is exhausted
    let stable_from = (layers.len() <= max_r).then(|| layers.len() - 1);
    sup.resize(max_r + 1, running);
    Ok(DegreeProfile { sup, stable_from })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: i64) -> FiniteGraph {
        let edges = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect::<Vec<_>>();
        FiniteGraph::unit(0, &(0..n).collect::<Vec<_>>(), &edges).unwrap()
    }

    #[test]
    fn degree_of_integer_line_is_two() {
        let z = IntegerLine::unit();
        assert_eq!(deg(&z, &0).unwrap(), 2.0);
    }

    #[test]
    fn weighted_degree_divides_by_measure() {
        let doc = GraphDocument {
            root: 0,
            vertices: (0..4).map(|id| VertexRecord { id, mu: if id == 0 { 2.0 } else { 1.0 } }).collect(),
            edges: vec![
                EdgeRecord { u: 0, v: 1, w: 1.0 },
                EdgeRecord { u: 0, v: 2, w: 2.0 },
                EdgeRecord { u: 0, v: 3, w: 3.0 },
            ],
        };
        let g = FiniteGraph::from_document(&doc).unwrap();
        assert_eq!(deg(&g, &0).unwrap(), 3.0);
    }

    #[test]
    fn isolated_vertex_has_zero_degree() {
        let g = FiniteGraph::unit(0, &[0, 1, 2], &[(0, 1, 1.0)]).unwrap();
        assert_eq!(deg(&g, &2).unwrap(), 0.0);
        assert!(matches!(distance(&g, &0, &2), Err(Error::Unreachable { .. })));
    }

    #[test]
    fn unknown_vertex_is_a_domain_error() {
        let g = cycle(4);
        assert!(matches!(deg(&g, &7), Err(Error::UnknownVertex(_))));
        assert!(matches!(g.ball(&9, 1), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn distances_on_line_and_cycle() {
        let z = IntegerLine::unit();
        assert_eq!(distance(&z, &0, &5).unwrap(), 5);
        assert_eq!(distance(&z, &3, &3).unwrap(), 0);
        let c6 = cycle(6);
        assert_eq!(distance(&c6, &0, &3).unwrap(), 3);
        assert_eq!(bfs_distance(&z, &-4, &4, None).unwrap(), 8);
    }

    #[test]
    fn balls() {
        let z = IntegerLine::unit();
        assert_eq!(z.ball(&0, 2).unwrap(), BTreeSet::from([-2, -1, 0, 1, 2]));
        assert_eq!(z.ball(&7, 0).unwrap(), BTreeSet::from([7]));
        let tree = RegularTree::unit(3).unwrap();
        assert_eq!(tree.ball(&tree.root(), 2).unwrap().len(), 10);
    }

    #[test]
    fn one_neighborhoods() {
        let z = IntegerLine::unit();
        assert_eq!(one_neighborhood(&z, &[0]).unwrap(), BTreeSet::from([-1, 0, 1]));
        assert!(one_neighborhood(&z, &[]).unwrap().is_empty());
        assert_eq!(
            one_neighborhood(&z, &[0, 5]).unwrap(),
            BTreeSet::from([-1, 0, 1, 4, 5, 6])
        );
    }

    #[test]
    fn degree_profile_stabilises_on_finite_graphs() {
        let g = FiniteGraph::unit(0, &[0, 1, 2, 3], &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let prof = degree_profile(&g, &0, 10).unwrap();
        assert_eq!(prof.sup[0], 1.0);
        assert_eq!(prof.sup[1], 2.0);
        assert_eq!(prof.stable_from, Some(3));
        assert_eq!(prof.at(50), 2.0);
        let z = degree_profile(&IntegerLine::unit(), &0, 3).unwrap();
        assert_eq!(z.stable_from, Some(0));
    }
}
