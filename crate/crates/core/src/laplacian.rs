//! The weighted graph Laplacian `Δf(x) = Σ_y ω(x,y)/μ(x) · (f(y) − f(x))`,
//! its iterates, and the one-ring sup bounds that control them.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};


use crate::error::{Error, Result};
use crate::graph::{deg, one_neighborhood, Graph, LocalFunction};
use crate::scalar::Scalar;

/// `Δf(x)` for a function given pointwise. Shared by every route that
/// evaluates the Laplacian so that they round identically.
pub fn laplacian_at<G, S, F>(g: &G, x: &G::Vertex, mut f: F) -> Result<S>
where
    G: Graph + ?Sized,
    S: Scalar,
    F: FnMut(&G::Vertex) -> Result<S>,
{
    let mu = S::lift(g.measure(x)?);
    let fx = f(x)?;
    let mut acc = S::zero();
    for (y, w) in g.neighbors(x)? {
        let coeff = S::lift(w) / mu.clone();
        acc = acc + coeff * (f(&y)? - fx.clone());
    }
    Ok(acc)
}

/// `Δf`, supported on `(supp f)₁`.
pub fn apply_laplacian<G, S>(g: &G, f: &LocalFunction<G::Vertex, S>) -> Result<LocalFunction<G::Vertex, S>>
where
    G: Graph + ?Sized,
    S: Scalar,
{
    let support = one_neighborhood(g, f.support())?;
    let mut out = LocalFunction::zero();
    for x in support {
        let v = laplacian_at(g, &x, |y| Ok(f.get(y)))?;
        out.set(x, v);
    }
    Ok(out)
}

/// `Δᵏa` by `k` successive applications.
pub fn iterated_laplacian<G, S>(g: &G, a: &LocalFunction<G::Vertex, S>, k: usize) -> Result<LocalFunction<G::Vertex, S>>
where
    G: Graph + ?Sized,
    S: Scalar,
{
    let mut f = a.clone();
    for _ in 0..k {
        f = apply_laplacian(g, &f)?;
    }
    Ok(f)
}

/// `Δᵏa(x)` using only the values of `a` on `B_k(x)`: stage `j` is
/// evaluated on `B_{k−j}(x)` alone.
pub fn iterated_laplacian_at<G, S>(g: &G, a: &LocalFunction<G::Vertex, S>, x: &G::Vertex, k: usize) -> Result<S>
where
    G: Graph + ?Sized,
    S: Scalar,
{
    let layers = crate::graph::bfs_layers(g, x, k)?;
    let mut current: HashMap<G::Vertex, S> = layers
        .iter()
        .flatten()
        .map(|v| (v.clone(), a.get(v)))
        .collect();
    for j in 1..=k {
        let radius = k - j;
        let mut next = HashMap::new();
        for v in layers.iter().take(radius + 1).flatten() {
            let value = laplacian_at(g, v, |y| Ok(current.get(y).cloned().unwrap_or_else(S::zero)))?;
            next.insert(v.clone(), value);
        }
        current = next;
    }
    Ok(current.remove(x).unwrap_or_else(S::zero))
}

fn sup_abs<S: Scalar, I: IntoIterator<Item = S>>(values: I) -> S {
    values.into_iter().fold(S::zero(), |m, v| m.max_of(v.abs()))
}

/// `2·Deg(x)·max_{B₁(x)} |f|`, which dominates `|Δf(x)|`.
pub fn key_estimate_bound<G, S>(g: &G, f: &LocalFunction<G::Vertex, S>, x: &G::Vertex) -> Result<S>
where
    G: Graph + ?Sized,
    S: Scalar,
{
    let ball = one_neighborhood(g, [x])?;
    let degree = exact_degree::<G, S>(g, x)?;
    Ok(S::from_u64(2) * degree * sup_abs(ball.iter().map(|y| f.get(y))))
}

/// `2·max_{y∈K} Deg(y) · max_{(K)₁} |f|`, which dominates `max_{x∈K} |Δf(x)|`.
pub fn set_estimate_bound<G, S>(g: &G, f: &LocalFunction<G::Vertex, S>, k: &BTreeSet<G::Vertex>) -> Result<S>
where
    G: Graph + ?Sized,
    S: Scalar,
{
    let mut max_deg = S::zero();
    for y in k {
        max_deg = max_deg.max_of(exact_degree::<G, S>(g, y)?);
    }
    let ring = one_neighborhood(g, k)?;
    Ok(S::from_u64(2) * max_deg * sup_abs(ring.iter().map(|y| f.get(y))))
}

/// `2ʲ·(max_{B_{j−1}(x)} Deg)ʲ·max_{B_j(x)} |a|`, which dominates `|Δʲa(x)|`.
pub fn iterate_sup_bound<G, S>(g: &G, a: &LocalFunction<G::Vertex, S>, x: &G::Vertex, j: usize) -> Result<S>
where
    G: Graph + ?Sized,
    S: Scalar,
{
    if j == 0 {
        return Err(Error::Domain("iterate_sup_bound needs j >= 1".into()));
    }
    let inner = g.ball(x, j - 1)?;
    let mut max_deg = S::zero();
    for y in &inner {
        max_deg = max_deg.max_of(exact_degree::<G, S>(g, y)?);
    }
    let outer = g.ball(x, j)?;
    let sup = sup_abs(outer.iter().map(|y| a.get(y)));
    Ok(num_traits::pow(S::from_u64(2) * max_deg, j) * sup)
}

/// `Deg(x)` in the requested arithmetic (exact sum of lifted weights in
/// exact mode).
pub fn exact_degree<G, S>(g: &G, x: &G::Vertex) -> Result<S>
where
    G: Graph + ?Sized,
    S: Scalar,
{
    if S::MODE == crate::scalar::ArithmeticMode::Floating {
        return Ok(S::lift(deg(g, x)?));
    }
    let mu = S::lift(g.measure(x)?);
    let total = g
        .neighbors(x)?
        .into_iter()
        .fold(S::zero(), |acc, (_, w)| acc + S::lift(w));
    Ok(total / mu)
}

type Entries<V, S> = Vec<Arc<LocalFunction<V, S>>>;

/// Memoised iterates `Δᵏa`, `k = 0, 1, …`, grown on demand.
///
/// Readers take a shared lock; extension takes the write lock and rechecks
/// the length, so concurrent `ensure` calls never duplicate or tear entries.
pub struct IteratedLaplacianTable<'g, G: Graph + ?Sized, S: Scalar> {
    graph: &'g G,
    entries: RwLock<Entries<G::Vertex, S>>,
}

impl<'g, G: Graph + ?Sized, S: Scalar> IteratedLaplacianTable<'g, G, S> {
    pub fn new(graph: &'g G, base: LocalFunction<G::Vertex, S>) -> Self {
        Self { graph, entries: RwLock::new(vec![Arc::new(base)]) }
    }

    /// A table whose entries are taken as given, without checking
    /// `Δ(entry k) = entry k+1`. Use [`Self::verify_recursion`] to audit it.
    pub fn from_entries(graph: &'g G, entries: Vec<LocalFunction<G::Vertex, S>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("a table needs at least its base entry".into()));
        }
        Ok(Self { graph, entries: RwLock::new(entries.into_iter().map(Arc::new).collect()) })
    }

    pub fn graph(&self) -> &'g G {
        self.graph
    }

    pub fn base(&self) -> Arc<LocalFunction<G::Vertex, S>> {
        self.read()[0].clone()
    }

    pub fn materialized(&self) -> usize {
        self.read().len()
    }

    fn read(&self) -> std::sync::RwLockReadGuard<'_, Entries<G::Vertex, S>> {
        self.entries.read().unwrap_or_else(|e| e.into_inner())
    }

    /// Makes entries `0..=k` available.
    pub fn ensure(&self, k: usize) -> Result<()> {
        if self.read().len() > k {
            return Ok(());
        }
        let mut entries = self.entries.write().unwrap_or_else(|e| e.into_inner());
        while entries.len() <= k {
            let last = entries.last().expect("base entry").clone();
            let next = apply_laplacian(self.graph, &last)?;
            entries.push(Arc::new(next));
        }
        Ok(())
    }

    pub fn entry(&self, k: usize) -> Result<Arc<LocalFunction<G::Vertex, S>>> {
        self.ensure(k)?;
        Ok(self.read()[k].clone())
    }

    /// `Δᵏa(x)`.
    pub fn value(&self, k: usize, x: &G::Vertex) -> Result<S> {
        Ok(self.entry(k)?.get(x))
    }

    /// Replaces entry `k` (fault injection for audits). Later entries are
    /// left untouched.
    pub fn overwrite(&self, k: usize, f: LocalFunction<G::Vertex, S>) -> Result<()> {
        self.ensure(k)?;
        let mut entries = self.entries.write().unwrap_or_else(|e| e.into_inner());
        entries[k] = Arc::new(f);
        Ok(())
    }

    /// First `(k, x)` among materialised entries where `Δ(entry k)(x)`
    /// differs from `entry k+1 (x)` by more than `tol`.
    pub fn verify_recursion(&self, tol: f64) -> Result<Option<(usize, G::Vertex)>> {
        let entries = self.read().clone();
        for k in 0..entries.len().saturating_sub(1) {
            let lap = apply_laplacian(self.graph, &entries[k])?;
            let keys: BTreeSet<&G::Vertex> = lap.support().chain(entries[k + 1].support()).collect();
            for x in keys {
                let diff = (lap.get(x) - entries[k + 1].get(x)).abs();
                if diff.to_f64() > tol || (tol == 0.0 && !diff.is_zero()) {
                    return Ok(Some((k, x.clone())));
                }
            }
        }
        Ok(None)
    }
}

impl<'g, G: Graph + ?Sized, S: Scalar> std::fmt::Debug for IteratedLaplacianTable<'g, G, S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IteratedLaplacianTable")
            .field("materialized", &self.materialized())
            .finish()
    }
}
