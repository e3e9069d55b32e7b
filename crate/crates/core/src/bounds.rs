//! Quantitative estimates behind time analyticity: growth hypotheses, the
//! analytic-radius trichotomy, the Taylor remainder bound `Q`, and the
//! elementary inequalities (Stirling, mean-value gap, convexity split) it is
//! built from.
//!
//! Growth exponents are exact rationals so that the boundary case
//! `A₂ + A₃ = 1` is decided without rounding.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::graph::{deg, distance, Graph, LocalFunction};
use crate::scalar::{parse_decimal, ratio_to_f64};

/// `x ln x` for `x ≥ 1`, and `0` at `x = 0` (the value the envelope takes on
/// the base vertex).
pub fn xlogx(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// The hypothesis `|f(x)| ≤ A₁·e^{A₂ d(x,p) ln d(x,p)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    pub a1: f64,
    pub a2: BigRational,
}

impl GrowthProfile {
    pub fn new(a1: f64, a2: BigRational) -> Result<Self> {
        if !(a1.is_finite() && a1 > 0.0) {
            return Err(Error::Domain(format!("A1 must be positive, got {a1}")));
        }
        if a2.is_negative() {
            return Err(Error::Domain(format!("A2 must be nonnegative, got {a2}")));
        }
        Ok(Self { a1, a2 })
    }

    pub fn parse(a1: f64, a2: &str) -> Result<Self> {
        Self::new(a1, parse_decimal(a2)?)
    }

    /// `A₁·max(1, e^{A₂ d ln d})`, and `A₁` at `d = 0`.
    pub fn envelope(&self, d: usize) -> f64 {
        self.a1 * (ratio_to_f64(&self.a2) * xlogx(d as f64)).exp()
    }

    /// First vertex of `B_rmax(p)` where `|f|` exceeds the envelope.
    pub fn violation<G: Graph + ?Sized>(
        &self,
        g: &G,
        f: &LocalFunction<G::Vertex, f64>,
        rmax: usize,
    ) -> Result<Option<(G::Vertex, f64, f64)>> {
        let p = g.root();
        for x in g.ball(&p, rmax)? {
            let value = f.get(&x).abs();
            let env = self.envelope(distance(g, &x, &p)?);
            if value > env {
                return Ok(Some((x, value, env)));
            }
        }
        Ok(None)
    }
}

/// The hypothesis `Deg(x) ≤ C·d(x,p)^{A₃}` (and `Deg(p) ≤ C`).
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeGrowth {
    pub c: f64,
    pub a3: BigRational,
}

impl DegreeGrowth {
    pub fn new(c: f64, a3: BigRational) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Domain(format!("C must be positive, got {c}")));
        }
        if a3.is_negative() {
            return Err(Error::Domain(format!("A3 must be nonnegative, got {a3}")));
        }
        Ok(Self { c, a3 })
    }

    pub fn parse(c: f64, a3: &str) -> Result<Self> {
        Self::new(c, parse_decimal(a3)?)
    }

    pub fn envelope(&self, d: usize) -> f64 {
        if d == 0 {
            self.c
        } else {
            self.c * (d as f64).powf(ratio_to_f64(&self.a3))
        }
    }

    pub fn violation<G: Graph + ?Sized>(&self, g: &G, rmax: usize) -> Result<Option<(G::Vertex, f64, f64)>> {
        let p = g.root();
        for x in g.ball(&p, rmax)? {
            let dx = deg(g, &x)?;
            let env = self.envelope(distance(g, &x, &p)?);
            if dx > env {
                return Ok(Some((x, dx, env)));
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusKind {
    Infinite,
    FiniteLowerBound,
    OutOfHypothesis,
}

/// Outcome of [`radius_estimate`]: `r = ∞` when `ζ > 0`, `r ≥ 1/(2eC)` when
/// `ζ = 0`, no claim when `ζ < 0`, with `ζ = 1 − A₂ − A₃`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusCertificate {
    pub kind: RadiusKind,
    /// Certified radius; `+∞` for the infinite case, `NaN` when out of
    /// hypothesis.
    pub radius: f64,
    pub zeta: BigRational,
}

impl RadiusCertificate {
    /// `Some(r)` when the certificate restricts `|t|`.
    pub fn finite_radius(&self) -> Option<f64> {
        (self.kind == RadiusKind::FiniteLowerBound).then_some(self.radius)
    }
}

impl Serialize for RadiusCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RadiusCertificate", 4)?;
        st.serialize_field("kind", &self.kind)?;
        let r = match self.kind {
            RadiusKind::Infinite => Some("inf".to_string()),
            RadiusKind::FiniteLowerBound => None,
            RadiusKind::OutOfHypothesis => Some("none".to_string()),
        };
        match r {
            Some(text) => st.serialize_field("r", &text)?,
            None => st.serialize_field("r", &self.radius)?,
        }
        st.serialize_field("zeta", &self.zeta.to_string())?;
        st.serialize_field("zeta_f64", &ratio_to_f64(&self.zeta))?;
        st.end()
    }
}

impl fmt::Display for RadiusCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RadiusKind::Infinite => write!(f, "r = inf (zeta = {})", self.zeta),
            RadiusKind::FiniteLowerBound => write!(f, "r >= {} (zeta = 0)", self.radius),
            RadiusKind::OutOfHypothesis => write!(f, "no claim (zeta = {} < 0)", self.zeta),
        }
    }
}

pub fn radius_estimate(gp: &GrowthProfile, dg: &DegreeGrowth) -> RadiusCertificate {
    let zeta = BigRational::one() - &gp.a2 - &dg.a3;
    let (kind, radius) = if zeta.is_positive() {
        (RadiusKind::Infinite, f64::INFINITY)
    } else if zeta.is_zero() {
        (RadiusKind::FiniteLowerBound, 1.0 / (2.0 * std::f64::consts::E * dg.c))
    } else {
        (RadiusKind::OutOfHypothesis, f64::NAN)
    };
    RadiusCertificate { kind, radius, zeta }
}

/// Bounded-degree specialisation (`A₃ = 0`, `C = D`).
pub fn radius_estimate_bounded_degree(gp: &GrowthProfile, d: f64) -> Result<RadiusCertificate> {
    Ok(radius_estimate(gp, &DegreeGrowth::new(d, BigRational::zero())?))
}

/// `ln Q` for `Q = (2δC)ᵏ/k! · A₁ · e^{(A₂+A₃)(k+R) ln(k+R)}`.
pub fn remainder_bound_ln(k: u64, delta: f64, dg: &DegreeGrowth, gp: &GrowthProfile, r: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("remainder bound needs k >= 1".into()));
    }
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::Domain(format!("remainder bound needs R >= 1, got {r}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("remainder bound needs delta > 0, got {delta}")));
    }
    let exponent = ratio_to_f64(&(&gp.a2 + &dg.a3));
    let kf = k as f64;
    Ok(kf * (2.0 * delta * dg.c).ln() - ln_factorial(k) + gp.a1.ln() + exponent * xlogx(kf + r))
}

/// The remainder bound `Q`; dominates the `k`-th Taylor remainder on
/// `B_R(p)` for `|t − t₀| ≤ δ`.
pub fn remainder_bound(k: u64, delta: f64, dg: &DegreeGrowth, gp: &GrowthProfile, r: f64) -> Result<f64> {
    remainder_bound_ln(k, delta, dg, gp, r).map(f64::exp)
}

/// Index beyond which `Q ≤ A₁ e^{−(ζ/3) k ln k}` when `ζ > 0`:
/// `max{R, e^{2(1−ζ)(ln2+1)R}, (2δCe)^{3/ζ}, 3(1−ζ)R/ζ}` (with `k₀ = 1`).
pub fn decay_threshold(zeta: f64, delta: f64, c: f64, r: f64) -> Result<f64> {
    if zeta <= 0.0 || zeta > 1.0 {
        return Err(Error::Domain(format!("decay threshold needs 0 < zeta <= 1, got {zeta}")));
    }
    let l = std::f64::consts::LN_2 + 1.0;
    Ok([
        1.0,
        r,
        (2.0 * (1.0 - zeta) * l * r).exp(),
        (2.0 * delta * c * std::f64::consts::E).powf(3.0 / zeta),
        3.0 * (1.0 - zeta) * r / zeta,
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

/// `kᵏ √k / eᵏ`, a lower bound for `k!` valid for every `k ≥ 1`.
pub fn stirling_lower(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("stirling_lower needs k >= 1".into()));
    }
    let kf = k as f64;
    Ok((kf * kf.ln() + 0.5 * kf.ln() - kf).exp())
}

// 16-digit truncations bracketing e and π.
const E_LO: u64 = 2_718_281_828_459_045;
const E_HI: u64 = 2_718_281_828_459_046;
const PI_LO: u64 = 3_141_592_653_589_793;
const SCALE_DIGITS: usize = 15;

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// Decides `k! ≥ kᵏ√k/eᵏ` in integer arithmetic via
/// `(k!)²·e_lo^{2k} ≥ k^{2k+1}` with a rational `e_lo < e`.
pub fn stirling_lower_holds_exact(k: u64) -> bool {
    if k == 0 {
        return false;
    }
    let f = factorial(k);
    let two_k = 2 * k as usize;
    let lhs = &f * &f * num_traits::pow(BigUint::from(E_LO), two_k);
    let rhs = num_traits::pow(BigUint::from(k), two_k + 1) * num_traits::pow(BigUint::from(10u32), SCALE_DIGITS * two_k);
    lhs >= rhs
}

/// Decides `k! ≤ 2√(2πk)(k/e)ᵏ` exactly via
/// `(k!)²·e_hi^{2k} ≤ 8·π_lo·k^{2k+1}` with rationals `e_hi > e`, `π_lo < π`.
pub fn stirling_upper_holds_exact(k: u64) -> bool {
    if k == 0 {
        return false;
    }
    let f = factorial(k);
    let two_k = 2 * k as usize;
    let ten = BigUint::from(10u32);
    let lhs = &f * &f * num_traits::pow(BigUint::from(E_HI), two_k) * num_traits::pow(ten.clone(), SCALE_DIGITS);
    let rhs = BigUint::from(8u32) * BigUint::from(PI_LO) * num_traits::pow(BigUint::from(k), two_k + 1)
        * num_traits::pow(ten, SCALE_DIGITS * two_k);
    lhs <= rhs
}

/// `(ln 2 + 1 + ln k)·R`, which dominates `(k+R) ln(k+R) − k ln k` for
/// `k ≥ R ≥ 1`.
pub fn lagrange_gap_bound(k: u64, r: f64) -> Result<f64> {
    if r.is_nan() || r < 1.0 {
        return Err(Error::Domain(format!("lagrange gap bound needs R >= 1, got {r}")));
    }
    if (k as f64) < r {
        return Err(Error::Domain(format!("lagrange gap bound needs k >= R, got k = {k}, R = {r}")));
    }
    Ok((std::f64::consts::LN_2 + 1.0 + (k as f64).ln()) * r)
}

/// The quantity the gap bound dominates.
pub fn lagrange_gap(k: u64, r: f64) -> f64 {
    let kf = k as f64;
    xlogx(kf + r) - xlogx(kf)
}

/// `k ln k + k ln 2 + d ln(2d)`, which dominates `(k+d) ln(k+d)`.
pub fn convexity_split(k: u64, d: u64) -> Result<f64> {
    if k == 0 || d == 0 {
        return Err(Error::Domain("convexity split needs k, d >= 1".into()));
    }
    let (kf, df) = (k as f64, d as f64);
    Ok(kf * kf.ln() + kf * std::f64::consts::LN_2 + df * (2.0 * df).ln())
}

/// Decides `(k+d) ln(k+d) ≤ k ln k + k ln 2 + d ln(2d)`. Clear cases are
/// settled in floating point; near-ties (e.g. the equality case `k = d`)
/// fall back to the integer form `(k+d)^{k+d} ≤ (2k)ᵏ (2d)ᵈ`.
pub fn convexity_split_holds(k: u64, d: u64) -> Result<bool> {
    let bound = convexity_split(k, d)?;
    let lhs = xlogx((k + d) as f64);
    let slack = 1e-9 * bound.abs().max(1.0);
    if bound - lhs > slack {
        return Ok(true);
    }
    if lhs - bound > slack {
        return Ok(false);
    }
    let left = num_traits::pow(BigUint::from(k + d), (k + d) as usize);
    let right = num_traits::pow(BigUint::from(2 * k), k as usize) * num_traits::pow(BigUint::from(2 * d), d as usize);
    Ok(left <= right)
}

/// Exponent grid `{0, 1/20, …, 2}` used by the profile fits.
pub fn exponent_grid() -> Vec<BigRational> {
    (0..=40).map(|i| BigRational::new(BigInt::from(i), BigInt::from(20))).collect()
}

pub const EXPONENT_GRID_DESCRIPTION: &str = "{0, 0.05, ..., 2}";

/// Fits `(A₁, A₂)` on `B_rmax(p)`. `A₁` is pinned to `max |f|` over `B₁(p)`
/// (where the envelope equals `A₁`), then the smallest grid `A₂` whose
/// envelope covers every vertex of the ball is returned.
pub fn fit_growth_profile<G: Graph + ?Sized>(
    g: &G,
    f: &LocalFunction<G::Vertex, f64>,
    rmax: usize,
) -> Result<GrowthProfile> {
    if rmax < 2 {
        return Err(Error::Domain(format!("growth fit needs Rmax >= 2, got {rmax}")));
    }
    let p = g.root();
    let mut samples = Vec::new();
    let mut a1 = 0.0f64;
    for x in g.ball(&p, rmax)? {
        let d = distance(g, &x, &p)?;
        let v = f.get(&x).abs();
        if d <= 1 {
            a1 = a1.max(v);
        }
        samples.push((d, v));
    }
    let a1 = if a1 > 0.0 { a1 } else { f64::MIN_POSITIVE };
    for a2 in exponent_grid() {
        let profile = GrowthProfile { a1, a2 };
        if samples.iter().all(|&(d, v)| v <= profile.envelope(d)) {
            return Ok(profile);
        }
    }
    Err(Error::Unbounded)
}

/// Fits `(C, A₃)` on `B_rmax(p)`. `C` starts at `max Deg` over `B₁(p)`; the
/// smallest grid `A₃` certifying the ball is chosen. If even `A₃ = 2` fails,
/// `C` is raised to the smallest value certifying with `A₃ = 2`.
pub fn fit_degree_growth<G: Graph + ?Sized>(g: &G, rmax: usize) -> Result<DegreeGrowth> {
    if rmax < 1 {
        return Err(Error::Domain("degree fit needs Rmax >= 1".into()));
    }
    let p = g.root();
    let mut samples = Vec::new();
    let mut c = 0.0f64;
    for x in g.ball(&p, rmax)? {
        let d = distance(g, &x, &p)?;
        let dx = deg(g, &x)?;
        if d <= 1 {
            c = c.max(dx);
        }
        samples.push((d, dx));
    }
    let c = if c > 0.0 { c } else { f64::MIN_POSITIVE };
    let grid = exponent_grid();
    for a3 in &grid {
        let dg = DegreeGrowth { c, a3: a3.clone() };
        if samples.iter().all(|&(d, v)| v <= dg.envelope(d)) {
            return Ok(dg);
        }
    }
    let top = grid.last().expect("grid").clone();
    let exp = ratio_to_f64(&top);
    let needed = samples
        .iter()
        .filter(|&&(d, _)| d >= 1)
        .map(|&(d, v)| v / (d as f64).powf(exp))
        .fold(c, f64::max);
    // bump by one ulp-ish step until the stored envelope covers every sample
    let mut c = needed;
    while !samples.iter().all(|&(d, v)| v <= DegreeGrowth { c, a3: top.clone() }.envelope(d)) {
        c = f64::from_bits(c.to_bits() + 1);
    }
    Ok(DegreeGrowth { c, a3: top })
}
