use thiserror::Error;

/// Errors raised by graph queries, solvers and audits.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("vertices {from} and {to} are not connected")]
    Unreachable { from: String, to: String },

    #[error("invalid graph document: {0}")]
    Schema(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("|t| = {t} is outside the certified analytic radius r = {radius}")]
    RadiusExceeded { t: f64, radius: f64 },

    #[error("tail bound {best_bound:e} not below tolerance {tol:e} within {k_cap} terms")]
    TruncationFailure { best_bound: f64, tol: f64, k_cap: usize },

    #[error("degree bound violated at vertex {vertex}: Deg = {degree} > D = {bound}")]
    DegreeBoundViolated { vertex: String, degree: f64, bound: f64 },

    #[error("growth profile violated at vertex {vertex}: |f| = {value} > envelope {envelope}")]
    GrowthProfileViolated { vertex: String, value: f64, envelope: f64 },

    #[error("no grid point certifies the growth profile (f grows faster than the grid allows)")]
    Unbounded,

    #[error("audit window is empty: R0 = {r0} exceeds x_max = {x_max}")]
    AuditWindowEmpty { r0: f64, x_max: i64 },

    #[error("size cap exceeded: {what} = {size} > {cap}")]
    SizeCap { what: &'static str, size: usize, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn vertex_name<V: std::fmt::Debug>(v: &V) -> String {
    format!("{v:?}")
}
