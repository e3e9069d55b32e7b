//! The resolved configuration embedded in every report.

use serde::Serialize;

use crate::args::{Command, Format, Options};
use crate::source::GraphDescription;

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDescription>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fixtures: Vec<GraphDescription>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub t: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rmax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t_shift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xmax: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a3: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub exact: bool,
    pub format: Format,
}

impl RunConfig {
    /// Starts from the flags as given; commands fill in the defaults they use.
    pub fn new(command: Command, opts: &Options) -> Self {
        Self {
            command,
            graph: None,
            fixtures: Vec::new(),
            init: opts.init.clone(),
            t: opts.times.clone(),
            tol: opts.tol,
            kmax: opts.kmax,
            rmax: opts.rmax,
            beta: opts.beta,
            theta: opts.theta,
            epsilon: opts.epsilon,
            t_shift: opts.t_shift,
            xmax: opts.xmax,
            a1: opts.a1,
            a2: opts.a2.clone(),
            a3: opts.a3.clone(),
            c: opts.c,
            delta: opts.delta,
            degree_bound: opts.degree_bound,
            seed: opts.seed,
            exact: opts.exact,
            format: opts.format,
        }
    }
}
