use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// On-disk graph description:
/// `{"root": id, "vertices": [{"id", "mu"}…], "edges": [{"u", "v", "w"}…]}`.
/// Each undirected edge is listed exactly once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub root: i64,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: i64,
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: i64,
    pub v: i64,
    pub w: f64,
}

/// A finite weighted graph with integer vertex ids.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    ids: Vec<i64>,
    index: HashMap<i64, usize>,
    mu: Vec<f64>,
    adj: Vec<Vec<(usize, f64)>>,
    root: usize,
}

impl FiniteGraph {
    /// Validates a graph document: positive finite `μ` and `ω`, no
    /// duplicate vertices, no self-loops, no duplicate or dangling edges.
    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let mut index = HashMap::with_capacity(doc.vertices.len());
        let mut ids = Vec::with_capacity(doc.vertices.len());
        let mut mu = Vec::with_capacity(doc.vertices.len());
        for (i, rec) in doc.vertices.iter().enumerate() {
            if !(rec.mu.is_finite() && rec.mu > 0.0) {
                return Err(Error::Schema(format!(
                    "vertices[{i}] (id {}): mu must be positive, got {}",
                    rec.id, rec.mu
                )));
            }
            if index.insert(rec.id, ids.len()).is_some() {
                return Err(Error::Schema(format!("vertices[{i}]: duplicate id {}", rec.id)));
            }
            ids.push(rec.id);
            mu.push(rec.mu);
        }
        let mut adj = vec![Vec::new(); ids.len()];
        let mut seen: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for (i, e) in doc.edges.iter().enumerate() {
            let describe = || format!("edges[{i}] ({} - {}, w = {})", e.u, e.v, e.w);
            if e.u == e.v {
                return Err(Error::Schema(format!("{}: self-loop", describe())));
            }
            if !(e.w.is_finite() && e.w > 0.0) {
                return Err(Error::Schema(format!("{}: weight must be positive", describe())));
            }
            let (Some(&a), Some(&b)) = (index.get(&e.u), index.get(&e.v)) else {
                return Err(Error::Schema(format!("{}: dangling vertex id", describe())));
            };
            let key = (e.u.min(e.v), e.u.max(e.v));
            if let Some(&j) = seen.get(&key) {
                let prev = doc.edges[j];
                let why = if prev.w == e.w {
                    "duplicate edge".to_string()
                } else {
                    format!("asymmetric weights (edges[{j}] has w = {})", prev.w)
                };
                return Err(Error::Schema(format!("{}: {why}", describe())));
            }
            seen.insert(key, i);
            adj[a].push((b, e.w));
            adj[b].push((a, e.w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| ids[j]);
        }
        let root = *index
            .get(&doc.root)
            .ok_or_else(|| Error::Schema(format!("root {} is not a declared vertex", doc.root)))?;
        Ok(Self { ids, index, mu, adj, root })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_document(&doc)
    }

    /// Graph with unit measure on every listed vertex.
    pub fn unit(root: i64, vertices: &[i64], edges: &[(i64, i64, f64)]) -> Result<Self> {
        Self::from_document(&GraphDocument {
            root,
            vertices: vertices.iter().map(|&id| VertexRecord { id, mu: 1.0 }).collect(),
            edges: edges.iter().map(|&(u, v, w)| EdgeRecord { u, v, w }).collect(),
        })
    }

    pub fn to_document(&self) -> GraphDocument {
        let vertices = self
            .ids
            .iter()
            .zip(&self.mu)
            .map(|(&id, &mu)| VertexRecord { id, mu })
            .collect();
        let mut edges = Vec::new();
        for (a, list) in self.adj.iter().enumerate() {
            for &(b, w) in list {
                if self.ids[a] < self.ids[b] {
                    edges.push(EdgeRecord { u: self.ids[a], v: self.ids[b], w });
                }
            }
        }
        GraphDocument { root: self.ids[self.root], vertices, edges }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Vertex ids in storage order; this is the ordering the dense oracle uses.
    pub fn ids(&self) -> &[i64] {
        &self.ids
    }

    pub fn index_of(&self, id: i64) -> Option<usize> {
        self.index.get(&id).copied()
    }

    fn idx(&self, x: &i64) -> Result<usize> {
        self.index_of(*x).ok_or_else(|| Error::UnknownVertex(x.to_string()))
    }

    /// Neighbour indices and weights of the vertex at storage index `i`.
    pub fn adjacency(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    pub fn measure_at(&self, i: usize) -> f64 {
        self.mu[i]
    }
}

impl Graph for FiniteGraph {
    type Vertex = i64;

    fn root(&self) -> i64 {
        self.ids[self.root]
    }

    fn contains(&self, x: &i64) -> bool {
        self.index.contains_key(x)
    }

    fn neighbors(&self, x: &i64) -> Result<Vec<(i64, f64)>> {
        let i = self.idx(x)?;
        Ok(self.adj[i].iter().map(|&(j, w)| (self.ids[j], w)).collect())
    }

    fn measure(&self, x: &i64) -> Result<f64> {
        Ok(self.mu[self.idx(x)?])
    }

    fn vertices(&self) -> Option<Vec<i64>> {
        Some(self.ids.clone())
    }
}

/// Induced subgraph on `B_radius(center)`, relabelled `0..n` in ball order.
/// Returns the finite graph and the original vertex for each new id.
pub fn truncate<G: Graph + ?Sized>(
    g: &G,
    center: &G::Vertex,
    radius: usize,
) -> Result<(FiniteGraph, Vec<G::Vertex>)> {
    let ball: BTreeSet<G::Vertex> = super::bfs_ball(g, center, radius)?;
    let order: Vec<G::Vertex> = ball.iter().cloned().collect();
    let pos: HashMap<&G::Vertex, i64> = order.iter().zip(0..).collect();
    let mut vertices = Vec::with_capacity(order.len());
    let mut edges = Vec::new();
    for (i, v) in order.iter().enumerate() {
        vertices.push(VertexRecord { id: i as i64, mu: g.measure(v)? });
        for (w, weight) in g.neighbors(v)? {
            if let Some(&j) = pos.get(&w) {
                if (i as i64) < j {
                    edges.push(EdgeRecord { u: i as i64, v: j, w: weight });
                }
            }
        }
    }
    let root = pos[center];
    let fg = FiniteGraph::from_document(&GraphDocument { root, vertices, edges })?;
    Ok((fg, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{deg, distance, IntegerLine};

    #[test]
    fn two_vertex_document() {
        let g = FiniteGraph::from_json(
            r#"{"root":0,"vertices":[{"id":0,"mu":1},{"id":1,"mu":1}],"edges":[{"u":0,"v":1,"w":1}]}"#,
        )
        .unwrap();
        assert_eq!(deg(&g, &0).unwrap(), 1.0);
        assert_eq!(deg(&g, &1).unwrap(), 1.0);
        assert_eq!(g.weight(&0, &1).unwrap(), g.weight(&1, &0).unwrap());
    }

    #[test]
    fn asymmetric_weights_are_rejected() {
        let err = FiniteGraph::from_json(
            r#"{"root":0,"vertices":[{"id":0,"mu":1},{"id":1,"mu":1}],
                "edges":[{"u":0,"v":1,"w":1},{"u":1,"v":0,"w":2}]}"#,
        )
        .unwrap_err();
        let Error::Schema(msg) = err else { panic!("wrong error") };
        assert!(msg.contains("edges[1]") && msg.contains("asymmetric"), "{msg}");
    }

    #[test]
    fn invalid_records_name_the_offender() {
        let cases = [
            (r#"{"root":0,"vertices":[{"id":0,"mu":0}],"edges":[]}"#, "vertices[0]"),
            (r#"{"root":0,"vertices":[{"id":0,"mu":1}],"edges":[{"u":0,"v":0,"w":1}]}"#, "self-loop"),
            (
                r#"{"root":0,"vertices":[{"id":0,"mu":1},{"id":1,"mu":1}],"edges":[{"u":0,"v":1,"w":-1}]}"#,
                "edges[0]",
            ),
            (r#"{"root":0,"vertices":[{"id":0,"mu":1}],"edges":[{"u":0,"v":4,"w":1}]}"#, "dangling"),
            (
                r#"{"root":0,"vertices":[{"id":0,"mu":1},{"id":1,"mu":1}],
                   "edges":[{"u":0,"v":1,"w":1},{"u":0,"v":1,"w":1}]}"#,
                "duplicate edge",
            ),
            (r#"{"root":3,"vertices":[{"id":0,"mu":1}],"edges":[]}"#, "root"),
        ];
        for (text, needle) in cases {
            match FiniteGraph::from_json(text) {
                Err(Error::Schema(msg)) => assert!(msg.contains(needle), "{msg} lacks {needle}"),
                other => panic!("expected schema error for {text}, got {other:?}"),
            }
        }
    }

    #[test]
    fn cycle_document_distance() {
        let edges: Vec<_> = (0..6).map(|i| format!(r#"{{"u":{i},"v":{},"w":1}}"#, (i + 1) % 6)).collect();
        let verts: Vec<_> = (0..6).map(|i| format!(r#"{{"id":{i},"mu":1}}"#)).collect();
        let text = format!(r#"{{"root":0,"vertices":[{}],"edges":[{}]}}"#, verts.join(","), edges.join(","));
        let g = FiniteGraph::from_json(&text).unwrap();
        assert_eq!(distance(&g, &0, &3).unwrap(), 3);
    }

    #[test]
    fn document_round_trip() {
        let g = FiniteGraph::unit(2, &[0, 1, 2], &[(0, 1, 0.5), (1, 2, 2.0)]).unwrap();
        let again = FiniteGraph::from_document(&g.to_document()).unwrap();
        assert_eq!(again.to_document(), g.to_document());
        assert_eq!(again.root(), 2);
    }

    #[test]
    fn truncation_of_the_line() {
        let (seg, order) = truncate(&IntegerLine::unit(), &0, 3).unwrap();
        assert_eq!(order, vec![-3, -2, -1, 0, 1, 2, 3]);
        assert_eq!(seg.len(), 7);
        assert_eq!(order[seg.index_of(seg.root()).unwrap()], 0);
        assert_eq!(deg(&seg, &0).unwrap(), 1.0);
        assert_eq!(distance(&seg, &0, &6).unwrap(), 6);
    }
}
