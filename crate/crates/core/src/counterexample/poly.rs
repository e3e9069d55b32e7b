//! Derivative polynomials of the flat bump `g(t) = exp(−t^{−β})`.
//!
//! With `s = 1/t`, `g^{(k)}(t) = R_k(s)·e^{−s^β}` where `R₀ = 1` and
//! `R_{k+1} = β s^{β+1} R_k − s² R_k′`. For non-integer β the powers
//! `w = s^β` are tracked as a second variable:
//! `d/dt [sⁱ wʲ e^{−w}] = (−(i + jβ) s^{i+1} wʲ + β s^{i+1} w^{j+1}) e^{−w}`.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Dense polynomial with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    /// `c · s^shift · self`.
    pub fn scaled_shift(&self, c: &BigInt, shift: usize) -> Self {
        if self.is_zero() || c.is_zero() {
            return Self::default();
        }
        let mut coeffs = vec![BigInt::zero(); shift];
        coeffs.extend(self.coeffs.iter().map(|x| x * c));
        Self { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Self::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled_shift(&BigInt::from(-1), 0))
    }

    /// Numerator of `P(a/b)` over the common denominator `b^d`, for
    /// `d ≥ deg P`: `Σ cᵢ aⁱ b^{d−i}`.
    pub fn numerator_at(&self, a: &BigInt, b_powers: &[BigInt], d: usize) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * a + c * &b_powers[d - i];
        }
        acc
    }
}

/// Append-only table `R₀, R₁, …` for an integer exponent β ≥ 1.
#[derive(Debug)]
pub struct DerivativePolynomialTable {
    beta: u32,
    polys: RwLock<Vec<Arc<IntPoly>>>,
}

impl DerivativePolynomialTable {
    pub fn new(beta: u32) -> Self {
        assert!(beta >= 1, "beta must be positive");
        Self { beta, polys: RwLock::new(vec![Arc::new(IntPoly::constant(BigInt::from(1)))]) }
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn materialized(&self) -> usize {
        self.polys.read().expect("table lock").len()
    }

    /// `R_k`, extending the table as needed.
    pub fn get(&self, k: usize) -> Arc<IntPoly> {
        if let Some(p) = self.polys.read().expect("table lock").get(k) {
            return Arc::clone(p);
        }
        let mut polys = self.polys.write().expect("table lock");
        let beta = BigInt::from(self.beta);
        while polys.len() <= k {
            let last = polys.last().expect("R0 present");
            let next = last
                .scaled_shift(&beta, self.beta as usize + 1)
                .sub(&last.derivative().scaled_shift(&BigInt::from(1), 2));
            polys.push(Arc::new(next));
        }
        Arc::clone(&polys[k])
    }
}

/// Two-variable polynomial in `(s, w)` with floating coefficients.
pub type Bivariate = BTreeMap<(u32, u32), f64>;

/// Append-only table of `g^{(k)}(t)·e^{w}` as polynomials in `(s, w)` for
/// real β > 1.
#[derive(Debug)]
pub struct FractionalDerivativeTable {
    beta: f64,
    polys: RwLock<Vec<Arc<Bivariate>>>,
}

impl FractionalDerivativeTable {
    pub fn new(beta: f64) -> Self {
        let mut one = Bivariate::new();
        one.insert((0, 0), 1.0);
        Self { beta, polys: RwLock::new(vec![Arc::new(one)]) }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn get(&self, k: usize) -> Arc<Bivariate> {
        if let Some(p) = self.polys.read().expect("table lock").get(k) {
            return Arc::clone(p);
        }
        let mut polys = self.polys.write().expect("table lock");
        while polys.len() <= k {
            let last = polys.last().expect("first entry present");
            let mut next = Bivariate::new();
            for (&(i, j), &c) in last.iter() {
                let lower = -(i as f64 + j as f64 * self.beta) * c;
                *next.entry((i + 1, j)).or_insert(0.0) += lower;
                *next.entry((i + 1, j + 1)).or_insert(0.0) += self.beta * c;
            }
            next.retain(|_, c| *c != 0.0);
            polys.push(Arc::new(next));
        }
        Arc::clone(&polys[k])
    }
}

/// `ln |n|`, finite for any nonzero integer regardless of size.
pub fn ln_abs_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(&n.abs()).unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    num_traits::ToPrimitive::to_f64(&top).unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn first_polynomials_for_beta_two() {
        let t = DerivativePolynomialTable::new(2);
        assert_eq!(t.get(1).coeffs(), ints(&[0, 0, 0, 2]).as_slice());
        // R₂ = 2s³·2s³ − s²·6s² = 4s⁶ − 6s⁴
        assert_eq!(t.get(2).coeffs(), ints(&[0, 0, 0, 0, -6, 0, 4]).as_slice());
        for k in 0..12 {
            assert_eq!(t.get(k).degree(), Some(3 * k));
        }
        assert_eq!(t.materialized(), 12);
    }

    #[test]
    fn numerator_matches_direct_evaluation() {
        let p = IntPoly::from_coeffs(ints(&[3, -1, 2]));
        // p(2/3) = 3 − 2/3 + 8/9 = 29/9; over b^3 = 27 that is 87
        let b = BigInt::from(3);
        let powers: Vec<BigInt> = (0..4).map(|i| num_traits::pow(b.clone(), i)).collect();
        assert_eq!(p.numerator_at(&BigInt::from(2), &powers, 3), BigInt::from(87));
    }

    #[test]
    fn fractional_agrees_with_integer_table() {
        let exact = DerivativePolynomialTable::new(3);
        let frac = FractionalDerivativeTable::new(3.0);
        for k in 0..8 {
            let r = exact.get(k);
            let mut collapsed = vec![0.0; r.coeffs().len()];
            for (&(i, j), &c) in frac.get(k).iter() {
                collapsed[i as usize + 3 * j as usize] += c;
            }
            let want: Vec<f64> = r.coeffs().iter().map(|c| num_traits::ToPrimitive::to_f64(c).unwrap()).collect();
            assert_eq!(collapsed, want, "k = {k}");
        }
    }

    #[test]
    fn ln_of_huge_integers() {
        let n = BigInt::from(1) << 5000usize;
        assert!((ln_abs_bigint(&n) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert!((ln_abs_bigint(&BigInt::from(-20)) - 20f64.ln()).abs() < 1e-15);
    }
}
