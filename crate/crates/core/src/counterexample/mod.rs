//! A non-analytic ancient solution on ℤ with unit weights.
//!
//! `g(t) = exp(−t^{−β})` for `t > 0` and `0` otherwise is smooth with every
//! derivative vanishing at `0`. The finite sums
//! `v(x,t) = Σ_{k=0}^{x} C(x+k, 2k) g^{(k)}(t)` for `x ≥ 0`, mirrored by
//! `v(x,t) = v(−x−1,t)`, solve `∂ₜv = v(x−1) + v(x+1) − 2v(x)` because the
//! second difference of `C(x+k, 2k)` in `x` is `C(x+k−1, 2k−2)`. With
//! `u(x,t) = v(x, t+T)` every time derivative of `u` vanishes at `−T` while
//! `u ≢ 0`.

pub mod poly;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::scalar::{ratio_to_f64, ArithmeticMode};

pub use poly::{ln_abs_bigint, Bivariate, DerivativePolynomialTable, FractionalDerivativeTable, IntPoly};

/// Parameters of the flat-bump construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlatBumpParams {
    pub beta: f64,
    pub theta: f64,
    pub epsilon: f64,
    /// Time shift in `u(x,t) = v(x,t+T)`.
    #[serde(rename = "T")]
    pub t_shift: f64,
}

impl FlatBumpParams {
    /// `min{1, (2/β)^{1/β}}`, the open upper end for θ.
    pub fn theta_sup(beta: f64) -> f64 {
        (2.0 / beta).powf(1.0 / beta).min(1.0)
    }

    pub fn default_theta(beta: f64) -> f64 {
        0.5 * Self::theta_sup(beta)
    }

    pub fn new(beta: f64, theta: Option<f64>, epsilon: f64, t_shift: f64) -> Result<Self> {
        if !(beta > 1.0 && beta.is_finite()) {
            return Err(Error::Domain(format!("beta must be a finite real > 1, got {beta}")));
        }
        let theta = theta.unwrap_or_else(|| Self::default_theta(beta));
        let sup = Self::theta_sup(beta);
        if !(theta > 0.0 && theta < sup) {
            return Err(Error::Domain(format!("theta must lie in (0, {sup}), got {theta}")));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(t_shift > 0.0 && t_shift.is_finite()) {
            return Err(Error::Domain(format!("T must be positive, got {t_shift}")));
        }
        Ok(Self { beta, theta, epsilon, t_shift })
    }

    /// β as an integer when it is one (and at least 2).
    pub fn integer_beta(&self) -> Option<u32> {
        (self.beta.fract() == 0.0 && (2.0..=1024.0).contains(&self.beta)).then_some(self.beta as u32)
    }

    /// `C₀ = (1/θ)(2/β)^{1/β}`.
    pub fn c0(&self) -> f64 {
        (2.0 / self.beta).powf(1.0 / self.beta) / self.theta
    }

    /// `R₀ = max{e, k₀, e^{(2/ε)[3/2 − (1+1/β) + ln C₀]}}` with `k₀ = 1`.
    pub fn r0(&self) -> f64 {
        let exponent = 2.0 / self.epsilon * (1.5 - (1.0 + 1.0 / self.beta) + self.c0().ln());
        std::f64::consts::E.max(1.0).max(exponent.exp())
    }

    /// The growth bound needs `β > max{1, 2/ε}`.
    pub fn check_growth_hypothesis(&self) -> Result<()> {
        let need = (2.0 / self.epsilon).max(1.0);
        if self.beta > need {
            Ok(())
        } else {
            Err(Error::Domain(format!("growth audit needs beta > {need}, got {}", self.beta)))
        }
    }
}

/// A real number stored as sign and `ln |·|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogValue {
    pub sign: i8,
    pub ln_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { sign: 0, ln_abs: f64::NEG_INFINITY };

    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }

    fn sum(terms: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let terms: Vec<(f64, f64)> = terms.into_iter().filter(|(c, _)| *c != 0.0).collect();
        let top = terms.iter().map(|(_, l)| *l).fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let total: f64 = terms.iter().map(|(c, l)| c.signum() * (c.abs().ln() + l - top).exp()).sum();
        if total == 0.0 {
            Self::ZERO
        } else {
            LogValue { sign: total.signum() as i8, ln_abs: total.abs().ln() + top }
        }
    }
}

/// `C(n+k, 2k)`, the weight of `g^{(k)}` in `v(n,·)`; zero for `k > n`.
pub fn weight(n: u64, k: u64) -> BigInt {
    if k > n {
        BigInt::zero()
    } else {
        binomial(BigInt::from(n + k), BigInt::from(2 * k))
    }
}

/// Index `n ≥ 0` with `v(x,·) = v(n,·)`.
pub fn mirror(x: i64) -> u64 {
    if x < 0 {
        (-(x + 1)) as u64
    } else {
        x as u64
    }
}

/// The flat bump together with its shared derivative tables.
#[derive(Debug)]
pub struct FlatBump {
    params: FlatBumpParams,
    exact: Option<DerivativePolynomialTable>,
    fractional: FractionalDerivativeTable,
}

impl FlatBump {
    /// Exact polynomial arithmetic when β is an integer, floating otherwise.
    pub fn new(params: FlatBumpParams) -> Self {
        Self {
            exact: params.integer_beta().map(DerivativePolynomialTable::new),
            fractional: FractionalDerivativeTable::new(params.beta),
            params,
        }
    }

    /// Forces the two-variable floating representation.
    pub fn floating(params: FlatBumpParams) -> Self {
        Self { exact: None, fractional: FractionalDerivativeTable::new(params.beta), params }
    }

    pub fn params(&self) -> &FlatBumpParams {
        &self.params
    }

    pub fn mode(&self) -> ArithmeticMode {
        if self.exact.is_some() {
            ArithmeticMode::Exact
        } else {
            ArithmeticMode::Floating
        }
    }

    pub fn exact_table(&self) -> Option<&DerivativePolynomialTable> {
        self.exact.as_ref()
    }

    /// `g(t)`.
    pub fn g_eval(&self, t: f64) -> f64 {
        if t > 0.0 {
            (-t.powf(-self.params.beta)).exp()
        } else {
            0.0
        }
    }

    /// Derivatives up to order `order` at a fixed time `t > 0`.
    pub fn at(&self, t: f64, order: usize) -> Result<BumpPoint> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("flat bump derivatives need t > 0, got {t}")));
        }
        let kind = match &self.exact {
            Some(table) => {
                let beta = table.beta() as usize;
                let rt = BigRational::from_float(t).expect("finite t");
                // s = 1/t = a/b
                let (a, b) = (rt.denom().clone(), rt.numer().clone());
                let d = order * (beta + 1);
                let mut b_powers = Vec::with_capacity(d + 1);
                b_powers.push(BigInt::one());
                for i in 0..d {
                    let next = &b_powers[i] * &b;
                    b_powers.push(next);
                }
                let numerators = (0..=order).map(|k| table.get(k).numerator_at(&a, &b_powers, d)).collect();
                let s_beta = num_traits::pow(BigRational::new(a.clone(), b.clone()), beta);
                PointKind::Exact { ln_den: d as f64 * ln_abs_bigint(&b), w: ratio_to_f64(&s_beta), numerators }
            }
            None => {
                let ln_s = -t.ln();
                let ln_w = self.params.beta * ln_s;
                PointKind::Fractional {
                    ln_s,
                    ln_w,
                    w: ln_w.exp(),
                    polys: (0..=order).map(|k| self.fractional.get(k)).collect(),
                }
            }
        };
        Ok(BumpPoint { t, order, kind })
    }

    /// `g^{(k)}(t)` for `t > 0`.
    pub fn g_derivative(&self, k: usize, t: f64) -> Result<f64> {
        Ok(self.at(t, k)?.derivative(k).value())
    }

    /// `v(x,t)`; zero for `t ≤ 0`.
    pub fn v_eval(&self, x: i64, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        Ok(self.at(t, mirror(x) as usize)?.v(x).value())
    }

    /// `∂ₜv(x,t) + 2v(x,t) − v(x−1,t) − v(x+1,t)` with `∂ₜv` differentiated
    /// term by term.
    pub fn heat_residual_1d(&self, x: i64, t: f64) -> Result<f64> {
        Ok(self.at(t, mirror(x) as usize + 2)?.residual(x))
    }

    /// The residual as a polynomial in `s = 1/t` after factoring out
    /// `e^{−s^β}`; `None` in floating mode. It is the zero polynomial.
    pub fn exact_residual(&self, x: i64) -> Option<IntPoly> {
        let table = self.exact.as_ref()?;
        let v = |y: i64| {
            let n = mirror(y);
            (0..=n).fold(IntPoly::default(), |acc, k| acc.add(&table.get(k as usize).scaled_shift(&weight(n, k), 0)))
        };
        let n = mirror(x);
        let dv = (0..=n).fold(IntPoly::default(), |acc, k| {
            acc.add(&table.get(k as usize + 1).scaled_shift(&weight(n, k), 0))
        });
        let two = BigInt::from(2);
        Some(dv.add(&v(x).scaled_shift(&two, 0)).sub(&v(x - 1)).sub(&v(x + 1)))
    }

    /// Compares `|g^{(k)}(t)|` with `k!(2k/(eβθ^β))^{k/β}` on a grid.
    pub fn huang_bound_audit(&self, k: usize, t_grid: &[f64]) -> Result<HuangAudit> {
        if k == 0 {
            return Err(Error::Domain("derivative-bound audit needs k >= 1".into()));
        }
        let p = &self.params;
        let kf = k as f64;
        let ln_bound = ln_factorial(k as u64)
            + kf / p.beta * (2.0 * kf / (std::f64::consts::E * p.beta * p.theta.powf(p.beta))).ln();
        let mut violations = Vec::new();
        let mut worst = f64::NEG_INFINITY;
        for &t in t_grid {
            let ln_g = self.at(t, k)?.derivative(k).ln_abs;
            worst = worst.max(ln_g - ln_bound);
            if ln_g > ln_bound {
                violations.push(GridWitness { x: None, t, ln_value: ln_g, ln_bound });
            }
        }
        Ok(HuangAudit { k, pass: violations.is_empty(), worst_ln_margin: worst, violations })
    }

    /// Checks `|v(x,t)| ≤ 4√(2π) e^{(1+ε) x ln x}` for integer
    /// `x ∈ [⌈R₀⌉, x_max]` and `t` on the grid.
    pub fn growth_audit(&self, x_max: i64, t_grid: &[f64]) -> Result<GrowthAudit> {
        let p = &self.params;
        p.check_growth_hypothesis()?;
        let r0 = p.r0();
        let x_min = r0.ceil() as i64;
        if x_max < x_min {
            return Err(Error::AuditWindowEmpty { r0, x_max });
        }
        let ln_prefactor = (4.0 * (2.0 * std::f64::consts::PI).sqrt()).ln();
        let mut violations = Vec::new();
        let mut worst = f64::NEG_INFINITY;
        for &t in t_grid {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::Domain(format!("growth grid must lie in (0, 1], got {t}")));
            }
            let point = self.at(t, x_max as usize)?;
            for x in x_min..=x_max {
                let xf = x as f64;
                let ln_bound = ln_prefactor + (1.0 + p.epsilon) * xf * xf.ln();
                let ln_v = point.v(x).ln_abs;
                worst = worst.max(ln_v - ln_bound);
                if ln_v > ln_bound {
                    violations.push(GridWitness { x: Some(x), t, ln_value: ln_v, ln_bound });
                }
            }
        }
        Ok(GrowthAudit { r0, x_min, x_max, pass: violations.is_empty(), worst_ln_margin: worst, violations })
    }

    /// Flatness of `∂ₜʲv(x,·)` along `s = 2^{−m}`, `m = 1..=m_max`, and
    /// positivity of `u(x,t) = v(x,t+T)` on sampled `t > −T`.
    pub fn non_analyticity_witness(&self, x: i64, kmax: usize, m_max: u32, tol: f64) -> Result<NonAnalyticityReport> {
        if kmax < 1 {
            return Err(Error::Domain("non-analyticity witness needs kmax >= 1".into()));
        }
        let order = mirror(x) as usize + kmax;
        let points = (1..=m_max)
            .map(|m| self.at(2f64.powi(-(m as i32)), order))
            .collect::<Result<Vec<_>>>()?;
        let flatness = (0..=kmax)
            .map(|j| {
                let ln_abs: Vec<f64> = points.iter().map(|pt| pt.v_time_derivative(x, j).ln_abs).collect();
                let last = *ln_abs.last().expect("m_max >= 1");
                let rising = ln_abs.windows(2).rposition(|w| w[1] >= w[0]);
                FlatnessRow {
                    x,
                    j,
                    monotone: rising.is_none(),
                    monotone_from_m: rising.map_or(1, |i| i as u32 + 2),
                    vanishing: last <= tol.ln(),
                    ln_abs,
                }
            })
            .collect::<Vec<_>>();
        let shift = self.params.t_shift;
        let samples: Vec<PositivitySample> = POSITIVITY_OFFSETS
            .iter()
            .map(|&s| {
                let v = self.at(s, mirror(x) as usize)?.v(x);
                Ok(PositivitySample { t: s - shift, value: v.value(), sign: v.sign, ln_abs: v.ln_abs })
            })
            .collect::<Result<_>>()?;
        let positive = samples.iter().all(|p| p.sign > 0);
        let nonzero = samples.iter().any(|p| p.sign != 0);
        let flat = flatness.iter().all(|r| r.vanishing);
        let conclusion = if flat && nonzero {
            format!(
                "every time derivative of u({x},.) up to order {kmax} vanishes at t = -T while u({x},.) is not identically \
                 zero, so its Taylor series at -T cannot represent it: u is not time-analytic there"
            )
        } else {
            "inconclusive on the sampled grid".to_string()
        };
        Ok(NonAnalyticityReport { x, kmax, tol, flatness, samples, positive, nonzero, conclusion })
    }
}

/// Offsets `s = t + T` at which `u` is sampled for positivity.
pub const POSITIVITY_OFFSETS: [f64; 8] = [0.0625, 0.125, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0];

#[derive(Debug)]
enum PointKind {
    Exact { ln_den: f64, w: f64, numerators: Vec<BigInt> },
    Fractional { ln_s: f64, ln_w: f64, w: f64, polys: Vec<Arc<Bivariate>> },
}

/// `g, g′, …, g^{(order)}` at a fixed `t > 0`.
#[derive(Debug)]
pub struct BumpPoint {
    t: f64,
    order: usize,
    kind: PointKind,
}

impl BumpPoint {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `Σ c_k g^{(k)}(t)`; exact before the final logarithm in exact mode.
    pub fn combination(&self, coeffs: &[(usize, BigInt)]) -> LogValue {
        for (k, _) in coeffs {
            assert!(*k <= self.order, "derivative order {k} beyond {}", self.order);
        }
        match &self.kind {
            PointKind::Exact { ln_den, w, numerators } => {
                let n: BigInt = coeffs.iter().map(|(k, c)| c * &numerators[*k]).sum();
                if n.is_zero() {
                    LogValue::ZERO
                } else {
                    LogValue { sign: if n.is_negative() { -1 } else { 1 }, ln_abs: ln_abs_bigint(&n) - ln_den - w }
                }
            }
            PointKind::Fractional { ln_s, ln_w, w, polys } => LogValue::sum(coeffs.iter().flat_map(|(k, c)| {
                let c = c.to_f64().unwrap_or(f64::INFINITY);
                polys[*k].iter().map(move |(&(i, j), &coef)| {
                    (c * coef, f64::from(i) * ln_s + f64::from(j) * ln_w - w)
                })
            })),
        }
    }

    pub fn derivative(&self, k: usize) -> LogValue {
        self.combination(&[(k, BigInt::one())])
    }

    /// `∂ₜʲv(x,t) = Σ_k C(n+k,2k) g^{(k+j)}(t)`.
    pub fn v_time_derivative(&self, x: i64, j: usize) -> LogValue {
        let n = mirror(x);
        let coeffs: Vec<_> = (0..=n).map(|k| (k as usize + j, weight(n, k))).collect();
        self.combination(&coeffs)
    }

    pub fn v(&self, x: i64) -> LogValue {
        self.v_time_derivative(x, 0)
    }

    pub fn residual(&self, x: i64) -> f64 {
        self.v_time_derivative(x, 1).value() + 2.0 * self.v(x).value() - self.v(x - 1).value() - self.v(x + 1).value()
    }
}

/// A grid point where a bound was checked, stored in log form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridWitness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<i64>,
    pub t: f64,
    pub ln_value: f64,
    pub ln_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HuangAudit {
    pub k: usize,
    pub pass: bool,
    pub worst_ln_margin: f64,
    pub violations: Vec<GridWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthAudit {
    pub r0: f64,
    pub x_min: i64,
    pub x_max: i64,
    pub pass: bool,
    pub worst_ln_margin: f64,
    pub violations: Vec<GridWitness>,
}

/// `ln |∂ₜʲv(x, 2^{−m})|` for `m = 1, 2, …`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatnessRow {
    pub x: i64,
    pub j: usize,
    pub ln_abs: Vec<f64>,
    /// Strictly decreasing over the whole grid.
    pub monotone: bool,
    /// First `m` from which the sequence strictly decreases.
    pub monotone_from_m: u32,
    pub vanishing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonAnalyticityReport {
    pub x: i64,
    pub kmax: usize,
    pub tol: f64,
    pub flatness: Vec<FlatnessRow>,
    pub samples: Vec<PositivitySample>,
    /// `u(x,·) > 0` at every sample; a finding, not required for the
    /// conclusion.
    pub positive: bool,
    pub nonzero: bool,
    pub conclusion: String,
}

/// `u(x,t)` at a sampled time, with its sign kept through underflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivitySample {
    pub t: f64,
    pub value: f64,
    pub sign: i8,
    pub ln_abs: f64,
}

/// Grid of a full audit run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditGrid {
    pub x_min: i64,
    pub x_max: i64,
    pub residual_t: Vec<f64>,
    pub growth_x_max: i64,
    pub growth_t: Vec<f64>,
    pub witness_x: Vec<i64>,
    pub kmax: usize,
    pub m_max: u32,
    pub flatness_tol: f64,
    pub huang_kmax: usize,
}

impl Default for AuditGrid {
    fn default() -> Self {
        Self {
            x_min: -10,
            x_max: 10,
            residual_t: vec![0.25, 0.5, 1.0],
            growth_x_max: 60,
            growth_t: (1..=16).map(|j| j as f64 / 16.0).collect(),
            witness_x: vec![0, 1, 2, 3],
            kmax: 10,
            m_max: 30,
            flatness_tol: 1e-8,
            huang_kmax: 30,
        }
    }
}

/// Combined audit of the construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub params: FlatBumpParams,
    pub mode: ArithmeticMode,
    pub c0: f64,
    pub r0: f64,
    pub grid: AuditGrid,
    /// `max |residual| / max |v|` over the residual grid.
    pub max_residual: f64,
    pub max_abs_v: f64,
    pub residual_polynomial_zero: Option<bool>,
    pub symmetry_pass: bool,
    pub growth_pass: bool,
    pub growth: GrowthAudit,
    pub flatness_table: Vec<FlatnessRow>,
    pub witnesses: Vec<NonAnalyticityReport>,
    /// Violations of the quoted derivative bound are findings about the
    /// parameter range, not failures of the construction.
    pub derivative_bound_findings: Vec<HuangAudit>,
    pub pass: bool,
    pub conclusion: String,
}

/// Relative residual threshold used by [`run_audit`].
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Runs every audit of the construction on `grid`.
pub fn run_audit(bump: &FlatBump, grid: &AuditGrid) -> Result<CounterexampleReport> {
    let p = *bump.params();
    let mut max_res = 0.0f64;
    let mut max_v = 0.0f64;
    let mut symmetry_pass = true;
    for &t in &grid.residual_t {
        let order = mirror(grid.x_min - 1).max(mirror(grid.x_max + 1)) as usize + 1;
        let point = bump.at(t, order)?;
        for x in grid.x_min..=grid.x_max {
            max_res = max_res.max(point.residual(x).abs());
            max_v = max_v.max(point.v(x).value().abs());
            if x < 0 && point.v(x) != point.v(-x - 1) {
                symmetry_pass = false;
            }
        }
    }
    let max_residual = if max_v > 0.0 { max_res / max_v } else { max_res };
    let residual_polynomial_zero = bump
        .exact_table()
        .map(|_| (grid.x_min..=grid.x_max).all(|x| bump.exact_residual(x).is_some_and(|r| r.is_zero())));
    let growth = bump.growth_audit(grid.growth_x_max, &grid.growth_t)?;
    let witnesses = grid
        .witness_x
        .iter()
        .map(|&x| bump.non_analyticity_witness(x, grid.kmax, grid.m_max, grid.flatness_tol))
        .collect::<Result<Vec<_>>>()?;
    let flatness_table = witnesses.iter().flat_map(|w| w.flatness.iter().cloned()).collect();
    let huang_t: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    let derivative_bound_findings = (1..=grid.huang_kmax)
        .map(|k| bump.huang_bound_audit(k, &huang_t))
        .collect::<Result<Vec<_>>>()?;
    let flat = witnesses.iter().all(|w| w.flatness.iter().all(|r| r.vanishing));
    let nonzero = witnesses.iter().any(|w| w.nonzero);
    let pass = max_residual <= RESIDUAL_TOLERANCE
        && residual_polynomial_zero != Some(false)
        && symmetry_pass
        && growth.pass
        && flat
        && nonzero;
    let conclusion = if pass {
        "u(x,t) = v(x,t+T) solves the heat equation on the audited grid, obeys the growth bound beyond R0, and has \
         vanishing Taylor series at t = -T without vanishing identically: it is an ancient solution that is not \
         time-analytic"
            .to_string()
    } else {
        "audit failed; see the individual sections".to_string()
    };
    Ok(CounterexampleReport {
        params: p,
        mode: bump.mode(),
        c0: p.c0(),
        r0: growth.r0,
        grid: grid.clone(),
        max_residual,
        max_abs_v: max_v,
        residual_polynomial_zero,
        symmetry_pass,
        growth_pass: growth.pass,
        growth,
        flatness_table,
        witnesses,
        derivative_bound_findings,
        pass,
        conclusion,
    })
}
