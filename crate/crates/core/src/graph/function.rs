use std::collections::btree_map;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

/// A finitely supported vertex function. Vertices outside the stored
/// support evaluate to exactly zero. Stored entries may themselves be zero;
/// the support is structural (where the value is tracked), not the set of
/// nonzero values.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFunction<V: Ord, S> {
    values: BTreeMap<V, S>,
}

impl<V: Ord + Clone, S: Clone + Zero> Default for LocalFunction<V, S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Ord + Clone, S: Clone + Zero> LocalFunction<V, S> {
    pub fn zero() -> Self {
        Self { values: BTreeMap::new() }
    }

    /// The indicator `δ_x`.
    pub fn delta(x: V) -> Self
    where
        S: One,
    {
        Self::from_pairs([(x, S::one())])
    }

    pub fn from_pairs<I: IntoIterator<Item = (V, S)>>(pairs: I) -> Self {
        Self { values: pairs.into_iter().collect() }
    }

    /// The constant `c` on the finite set `support`.
    pub fn constant_on<'a, I>(support: I, c: S) -> Self
    where
        I: IntoIterator<Item = &'a V>,
        V: 'a,
    {
        Self::from_pairs(support.into_iter().map(|v| (v.clone(), c.clone())))
    }

    pub fn get(&self, x: &V) -> S {
        self.values.get(x).cloned().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, x: V, value: S) {
        self.values.insert(x, value);
    }

    pub fn support(&self) -> impl Iterator<Item = &V> {
        self.values.keys()
    }

    pub fn support_set(&self) -> BTreeSet<V> {
        self.values.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, V, S> {
        self.values.iter()
    }

    /// Drops stored zeros.
    pub fn pruned(mut self) -> Self {
        self.values.retain(|_, v| !v.is_zero());
        self
    }

    pub fn map<T, F: FnMut(&S) -> T>(&self, mut f: F) -> LocalFunction<V, T> {
        LocalFunction { values: self.values.iter().map(|(k, v)| (k.clone(), f(v))).collect() }
    }

    /// `α·self + β·other` on the union of supports.
    pub fn linear_combination(&self, alpha: &S, other: &Self, beta: &S) -> Self
    where
        S: std::ops::Mul<Output = S> + std::ops::Add<Output = S>,
    {
        let keys: BTreeSet<&V> = self.values.keys().chain(other.values.keys()).collect();
        Self::from_pairs(keys.into_iter().map(|k| {
            (k.clone(), alpha.clone() * self.get(k) + beta.clone() * other.get(k))
        }))
    }
}

impl<V: Ord, S> FromIterator<(V, S)> for LocalFunction<V, S> {
    fn from_iter<I: IntoIterator<Item = (V, S)>>(iter: I) -> Self {
        Self { values: iter.into_iter().collect() }
    }
}

impl<'a, V: Ord, S> IntoIterator for &'a LocalFunction<V, S> {
    type Item = (&'a V, &'a S);
    type IntoIter = btree_map::Iter<'a, V, S>;

    fn into_iter(self) -> Self::IntoIter {
        self.values.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outside_support_is_zero() {
        let f: LocalFunction<i64, f64> = LocalFunction::from_pairs([(1, 2.5), (3, 0.0)]);
        assert_eq!(f.get(&1), 2.5);
        assert_eq!(f.get(&2), 0.0);
        assert_eq!(f.len(), 2);
        assert_eq!(f.clone().pruned().len(), 1);
    }

    #[test]
    fn combinations_use_the_union_of_supports() {
        let f: LocalFunction<i64, f64> = LocalFunction::delta(0);
        let g = LocalFunction::from_pairs([(1, 4.0)]);
        let h = f.linear_combination(&2.0, &g, &0.5);
        assert_eq!(h.support_set(), BTreeSet::from([0, 1]));
        assert_eq!(h.get(&0), 2.0);
        assert_eq!(h.get(&1), 2.0);
    }
}
