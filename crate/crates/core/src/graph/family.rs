use serde::{Deserialize, Serialize};

use super::finite::{EdgeRecord, GraphDocument, VertexRecord};
use super::{FiniteGraph, Graph};
use crate::error::{vertex_name, Error, Result};

/// Constant vertex measure and edge weight shared by every vertex and edge
/// of a lazily generated family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformWeights {
    pub mu: f64,
    pub omega: f64,
}

impl Default for UniformWeights {
    fn default() -> Self {
        Self { mu: 1.0, omega: 1.0 }
    }
}

impl UniformWeights {
    pub fn new(mu: f64, omega: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0 && omega.is_finite() && omega > 0.0) {
            return Err(Error::Domain(format!(
                "uniform weights must be positive (mu = {mu}, omega = {omega})"
            )));
        }
        Ok(Self { mu, omega })
    }
}

/// Tag for the built-in graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GraphFamily {
    IntegerLine,
    Lattice { dim: usize },
    RegularTree { k: usize },
    FiniteFromFile,
}

/// `ℤ` with nearest-neighbour edges.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegerLine {
    pub weights: UniformWeights,
}

impl IntegerLine {
    pub fn unit() -> Self {
        Self::default()
    }
}

impl Graph for IntegerLine {
    type Vertex = i64;

    fn root(&self) -> i64 {
        0
    }

    fn contains(&self, _x: &i64) -> bool {
        true
    }

    fn neighbors(&self, x: &i64) -> Result<Vec<(i64, f64)>> {
        let w = self.weights.omega;
        Ok(vec![(x - 1, w), (x + 1, w)])
    }

    fn measure(&self, _x: &i64) -> Result<f64> {
        Ok(self.weights.mu)
    }

    fn closed_form_distance(&self, x: &i64, y: &i64) -> Option<usize> {
        Some(x.abs_diff(*y) as usize)
    }

    fn uniform_degree(&self) -> Option<f64> {
        Some(2.0 * self.weights.omega / self.weights.mu)
    }
}

/// The lattice `ℤᵈ` with `2d` nearest neighbours and the `ℓ¹` metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    dim: usize,
    pub weights: UniformWeights,
}

impl Lattice {
    pub fn new(dim: usize, weights: UniformWeights) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("lattice dimension must be at least 1".into()));
        }
        Ok(Self { dim, weights })
    }

    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(dim, UniformWeights::default())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl Graph for Lattice {
    type Vertex = Vec<i64>;

    fn root(&self) -> Vec<i64> {
        vec![0; self.dim]
    }

    fn contains(&self, x: &Vec<i64>) -> bool {
        x.len() == self.dim
    }

    fn neighbors(&self, x: &Vec<i64>) -> Result<Vec<(Vec<i64>, f64)>> {
        if !self.contains(x) {
            return Err(Error::UnknownVertex(vertex_name(x)));
        }
        let mut out = Vec::with_capacity(2 * self.dim);
        for i in 0..self.dim {
            for step in [-1, 1] {
                let mut y = x.clone();
                y[i] += step;
                out.push((y, self.weights.omega));
            }
        }
        Ok(out)
    }

    fn measure(&self, x: &Vec<i64>) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::UnknownVertex(vertex_name(x)));
        }
        Ok(self.weights.mu)
    }

    fn closed_form_distance(&self, x: &Vec<i64>, y: &Vec<i64>) -> Option<usize> {
        Some(x.iter().zip(y).map(|(a, b)| a.abs_diff(*b) as usize).sum())
    }

    fn uniform_degree(&self) -> Option<f64> {
        Some(2.0 * self.dim as f64 * self.weights.omega / self.weights.mu)
    }
}

/// A vertex of the unrooted `k`-regular tree, written as a reduced word over
/// the generators `0..k` (no letter repeated twice in a row). Appending a
/// letter moves away from the base vertex, dropping the last letter moves
/// back toward it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct TreeWord(pub Vec<u32>);

impl TreeWord {
    pub fn is_reduced(&self, k: usize) -> bool {
        self.0.iter().all(|&g| (g as usize) < k) && self.0.windows(2).all(|w| w[0] != w[1])
    }
}

/// The `k`-regular tree as the Cayley graph of the free product of `k`
/// copies of `ℤ/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularTree {
    k: usize,
    pub weights: UniformWeights,
}

impl RegularTree {
    pub fn new(k: usize, weights: UniformWeights) -> Result<Self> {
        if k < 2 {
            return Err(Error::Domain(format!("tree degree must be at least 2, got {k}")));
        }
        Ok(Self { k, weights })
    }

    pub fn unit(k: usize) -> Result<Self> {
        Self::new(k, UniformWeights::default())
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    /// Radial quotient around the root, cut at `radius`: the weighted path
    /// `0, 1, …, radius` with `μ_r = |S_r|μ` and `ω_{r,r+1} = |S_{r+1}|ω`,
    /// where `S_r` is the sphere of radius `r`. Radial functions on the tree
    /// and their Laplacians agree with the corresponding functions on the
    /// path at every `r < radius`.
    pub fn radial_quotient(&self, radius: usize) -> Result<FiniteGraph> {
        let limit = 2f64.powi(53);
        let mut spheres = vec![1.0f64];
        for r in 1..=radius {
            let next = if r == 1 { self.k as f64 } else { spheres[r - 1] * (self.k - 1) as f64 };
            if next > limit {
                return Err(Error::SizeCap { what: "tree sphere", size: next as usize, cap: limit as usize });
            }
            spheres.push(next);
        }
        let vertices = (0..=radius)
            .map(|r| VertexRecord { id: r as i64, mu: spheres[r] * self.weights.mu })
            .collect();
        let edges = (0..radius)
            .map(|r| EdgeRecord { u: r as i64, v: r as i64 + 1, w: spheres[r + 1] * self.weights.omega })
            .collect();
        FiniteGraph::from_document(&GraphDocument { root: 0, vertices, edges })
    }
}

impl Graph for RegularTree {
    type Vertex = TreeWord;

    fn root(&self) -> TreeWord {
        TreeWord::default()
    }

    fn contains(&self, x: &TreeWord) -> bool {
        x.is_reduced(self.k)
    }

    fn neighbors(&self, x: &TreeWord) -> Result<Vec<(TreeWord, f64)>> {
        if !self.contains(x) {
            return Err(Error::UnknownVertex(vertex_name(x)));
        }
        let w = self.weights.omega;
        let last = x.0.last().copied();
        let mut out = Vec::with_capacity(self.k);
        for g in 0..self.k as u32 {
            let mut y = x.0.clone();
            if Some(g) == last {
                y.pop();
            } else {
                y.push(g);
            }
            out.push((TreeWord(y), w));
        }
        Ok(out)
    }

    fn measure(&self, x: &TreeWord) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::UnknownVertex(vertex_name(x)));
        }
        Ok(self.weights.mu)
    }

    fn closed_form_distance(&self, x: &TreeWord, y: &TreeWord) -> Option<usize> {
        let common = x.0.iter().zip(&y.0).take_while(|(a, b)| a == b).count();
        Some(x.0.len() + y.0.len() - 2 * common)
    }

    fn uniform_degree(&self) -> Option<f64> {
        Some(self.k as f64 * self.weights.omega / self.weights.mu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_distance, deg};

    #[test]
    fn radial_quotient_tracks_radial_functions() {
        use crate::graph::LocalFunction;
        use crate::laplacian::iterated_laplacian;
        let tree = RegularTree::unit(3).unwrap();
        let path = tree.radial_quotient(8).unwrap();
        assert_eq!(deg(&path, &3).unwrap(), 3.0);
        for k in 0..=6 {
            let on_tree = iterated_laplacian(&tree, &LocalFunction::<TreeWord, f64>::delta(TreeWord::default()), k).unwrap();
            let on_path = iterated_laplacian(&path, &LocalFunction::<i64, f64>::delta(0), k).unwrap();
            for (x, v) in on_tree.iter() {
                assert_eq!(*v, on_path.get(&(x.0.len() as i64)), "k = {k}, x = {x:?}");
            }
        }
        assert!(tree.radial_quotient(60).is_err());
    }

    #[test]
    fn neighbour_counts() {
        assert_eq!(IntegerLine::unit().neighbors(&3).unwrap().len(), 2);
        let l = Lattice::unit(3).unwrap();
        assert_eq!(l.neighbors(&vec![0, 0, 0]).unwrap().len(), 6);
        let t = RegularTree::unit(4).unwrap();
        assert_eq!(t.neighbors(&TreeWord(vec![1, 2])).unwrap().len(), 4);
        assert_eq!(t.neighbors(&t.root()).unwrap().len(), 4);
    }

    #[test]
    fn tree_neighbours_are_reduced_and_symmetric() {
        let t = RegularTree::unit(3).unwrap();
        let x = TreeWord(vec![0, 2, 1]);
        for (y, _) in t.neighbors(&x).unwrap() {
            assert!(t.contains(&y));
            assert!(t.neighbors(&y).unwrap().iter().any(|(z, _)| *z == x));
        }
        assert!(!t.contains(&TreeWord(vec![1, 1])));
        assert!(!t.contains(&TreeWord(vec![5])));
    }

    #[test]
    fn closed_forms_agree_with_bfs() {
        let l = Lattice::unit(2).unwrap();
        let (a, b) = (vec![1, -2], vec![-1, 1]);
        assert_eq!(l.closed_form_distance(&a, &b), Some(bfs_distance(&l, &a, &b, None).unwrap()));
        let t = RegularTree::unit(3).unwrap();
        let (u, v) = (TreeWord(vec![0, 1, 0]), TreeWord(vec![0, 2]));
        assert_eq!(t.closed_form_distance(&u, &v), Some(3));
        assert_eq!(bfs_distance(&t, &u, &v, None).unwrap(), 3);
    }

    #[test]
    fn weights_enter_the_degree() {
        let z = IntegerLine { weights: UniformWeights::new(2.0, 3.0).unwrap() };
        assert_eq!(deg(&z, &0).unwrap(), 3.0);
        assert_eq!(z.uniform_degree(), Some(3.0));
        assert!(UniformWeights::new(0.0, 1.0).is_err());
        assert!(RegularTree::unit(1).is_err());
        assert!(Lattice::unit(0).is_err());
    }
}
