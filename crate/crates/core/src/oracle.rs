//! Dense brute-force references for finite graphs: the Laplacian as a
//! matrix, its powers by repeated multiplication, and the matrix
//! exponential by scaling and squaring. None of this shares code with the
//! sparse, locality-driven series path.


use crate::error::{Error, Result};
use crate::graph::{FiniteGraph, LocalFunction};
use crate::scalar::Scalar;

pub const MAX_DENSE_VERTICES: usize = 2000;
pub const MAX_BRUTE_ITERATES: usize = 50;
const TAYLOR_ORDER: usize = 20;
const SCALED_NORM: f64 = 0.5;

/// `Δ` as an `n × n` matrix in the graph's storage order:
/// off-diagonal `(x, y) = ω(x,y)/μ(x)`, diagonal `−Deg(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator<S> {
    n: usize,
    data: Vec<S>,
    order: Vec<i64>,
}

impl<S: Scalar> DenseOperator<S> {
    pub fn size(&self) -> usize {
        self.n
    }

    /// Vertex id of each row.
    pub fn order(&self) -> &[i64] {
        &self.order
    }

    pub fn entry(&self, row: usize, col: usize) -> &S {
        &self.data[row * self.n + col]
    }

    pub fn row_sum(&self, row: usize) -> S {
        self.data[row * self.n..(row + 1) * self.n]
            .iter()
            .fold(S::zero(), |acc, v| acc + v.clone())
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.n, "vector length must match operator size");
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (m, x)| if m.is_zero() { acc } else { acc + m.clone() * x.clone() })
            })
            .collect()
    }

    pub fn to_vector(&self, f: &LocalFunction<i64, S>) -> Vec<S> {
        self.order.iter().map(|id| f.get(id)).collect()
    }

    pub fn to_function(&self, v: &[S]) -> LocalFunction<i64, S> {
        self.order.iter().copied().zip(v.iter().cloned()).collect()
    }
}

pub fn dense_laplacian<S: Scalar>(g: &FiniteGraph) -> Result<DenseOperator<S>> {
    let n = g.len();
    if n > MAX_DENSE_VERTICES {
        return Err(Error::SizeCap { what: "vertices", size: n, cap: MAX_DENSE_VERTICES });
    }
    let mut data = vec![S::zero(); n * n];
    for i in 0..n {
        let mu = S::lift(g.measure_at(i));
        let mut diag = S::zero();
        for &(j, w) in g.adjacency(i) {
            let c = S::lift(w) / mu.clone();
            diag = diag - c.clone();
            data[i * n + j] = c;
        }
        data[i * n + i] = diag;
    }
    Ok(DenseOperator { n, data, order: g.ids().to_vec() })
}

/// `Lᵏ a` by `k` matrix-vector products.
pub fn brute_iterate<S: Scalar>(l: &DenseOperator<S>, a: &[S], k: usize) -> Result<Vec<S>> {
    if k > MAX_BRUTE_ITERATES {
        return Err(Error::SizeCap { what: "iterates", size: k, cap: MAX_BRUTE_ITERATES });
    }
    let mut v = a.to_vec();
    for _ in 0..k {
        v = l.apply(&v);
    }
    Ok(v)
}

fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            let row = &b[k * n..(k + 1) * n];
            let out = &mut c[i * n..(i + 1) * n];
            for (o, bkj) in out.iter_mut().zip(row) {
                *o += aik * bkj;
            }
        }
    }
    c
}

fn one_norm(a: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `e^{tL}` by scaling and squaring: scale so `‖tL/2^m‖₁ ≤ 0.5`, sum the
/// degree-20 Taylor polynomial by Horner's rule, square `m` times.
pub fn expm(l: &DenseOperator<f64>, t: f64) -> Vec<f64> {
    let n = l.n;
    let mut a: Vec<f64> = l.data.iter().map(|v| v * t).collect();
    let norm = one_norm(&a, n);
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > SCALED_NORM {
        squarings += 1;
    }
    let scale = 2f64.powi(-(squarings as i32));
    a.iter_mut().for_each(|v| *v *= scale);

    let identity = |n: usize| {
        let mut m = vec![0.0; n * n];
        (0..n).for_each(|i| m[i * n + i] = 1.0);
        m
    };
    let mut e = identity(n);
    for order in (1..=TAYLOR_ORDER).rev() {
        let mut next = matmul(&a, &e, n);
        next.iter_mut().for_each(|v| *v /= order as f64);
        (0..n).for_each(|i| next[i * n + i] += 1.0);
        e = next;
    }
    for _ in 0..squarings {
        e = matmul(&e, &e, n);
    }
    e
}

/// `e^{tL} a`, the reference semigroup.
pub fn expm_apply(l: &DenseOperator<f64>, a: &[f64], t: f64) -> Vec<f64> {
    assert_eq!(a.len(), l.n, "vector length must match operator size");
    if t == 0.0 {
        return a.to_vec();
    }
    let e = expm(l, t);
    (0..l.n)
        .map(|i| e[i * l.n..(i + 1) * l.n].iter().zip(a).map(|(m, x)| m * x).sum())
        .collect()
}
