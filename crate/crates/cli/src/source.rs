//! Graph and initial-data inputs.

use std::path::Path;

use heat_series_core::graph::VertexId;
use heat_series_core::scalar::Scalar;
use heat_series_core::{FiniteGraph, Graph, IntegerLine, Lattice, LocalFunction, RegularTree};
use serde::Serialize;

use crate::error::CliError;

/// A loaded graph of any supported kind.
#[derive(Debug, Clone)]
pub enum GraphSource {
    File { path: String, graph: FiniteGraph },
    Fixture { name: String, graph: FiniteGraph },
    Z(IntegerLine),
    Lattice(Lattice),
    Tree(RegularTree),
}

/// Serialisable description of a graph source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphDescription {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
}

/// Work that runs on whichever graph type is loaded.
pub trait GraphTask {
    type Output;

    fn run<G: Graph>(self, g: &G, finite: bool) -> Result<Self::Output, CliError>;
}

impl GraphSource {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read graph {}: {e}", path.display())))?;
        let graph = FiniteGraph::from_json(&text)?;
        Ok(GraphSource::File { path: path.display().to_string(), graph })
    }

    /// Parses `z`, `lattice:D` or `tree:K`.
    pub fn from_family(spec: &str) -> Result<Self, CliError> {
        let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
        let number = |what: &str| {
            arg.parse::<usize>()
                .map_err(|_| CliError::usage(format!("family {name} needs an integer {what}, e.g. {name}:3")))
        };
        match name {
            "z" if arg.is_empty() => Ok(GraphSource::Z(IntegerLine::unit())),
            "lattice" => Ok(GraphSource::Lattice(Lattice::unit(number("dimension")?)?)),
            "tree" => Ok(GraphSource::Tree(RegularTree::unit(number("degree")?)?)),
            _ => Err(CliError::usage(format!("unknown family {spec:?}; expected z, lattice:D or tree:K"))),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GraphSource::File { .. } | GraphSource::Fixture { .. })
    }

    pub fn finite(&self) -> Option<&FiniteGraph> {
        match self {
            GraphSource::File { graph, .. } | GraphSource::Fixture { graph, .. } => Some(graph),
            _ => None,
        }
    }

    pub fn describe(&self) -> GraphDescription {
        let mut d = GraphDescription { kind: "", name: None, dim: None, vertices: None };
        match self {
            GraphSource::File { path, graph } => {
                d.kind = "file";
                d.name = Some(path.clone());
                d.vertices = Some(graph.len());
            }
            GraphSource::Fixture { name, graph } => {
                d.kind = "fixture";
                d.name = Some(name.clone());
                d.vertices = Some(graph.len());
            }
            GraphSource::Z(_) => d.kind = "z",
            GraphSource::Lattice(l) => {
                d.kind = "lattice";
                d.dim = Some(l.dim());
            }
            GraphSource::Tree(t) => {
                d.kind = "tree";
                d.dim = Some(t.arity());
            }
        }
        d
    }

    pub fn dispatch<T: GraphTask>(&self, task: T) -> Result<T::Output, CliError> {
        match self {
            GraphSource::File { graph, .. } | GraphSource::Fixture { graph, .. } => task.run(graph, true),
            GraphSource::Z(g) => task.run(g, false),
            GraphSource::Lattice(g) => task.run(g, false),
            GraphSource::Tree(g) => task.run(g, false),
        }
    }
}

/// Vertices a grid command visits: every vertex of a finite graph, the ball
/// `B_rmax(p)` otherwise.
pub fn grid_vertices<G: Graph>(g: &G, rmax: usize) -> Result<Vec<G::Vertex>, CliError> {
    if let Some(mut all) = g.vertices() {
        all.sort();
        return Ok(all);
    }
    Ok(g.ball(&g.root(), rmax)?.into_iter().collect())
}

/// `delta` puts a unit mass at the root; anything else is read as a JSON
/// file of `[vertex, value]` pairs with numeric or decimal-string values.
pub fn initial_data<G: Graph, S: Scalar>(g: &G, spec: &str) -> Result<LocalFunction<G::Vertex, S>, CliError> {
    if spec == "delta" {
        return Ok(LocalFunction::from_pairs([(g.root(), S::one())]));
    }
    let text =
        std::fs::read_to_string(spec).map_err(|e| CliError::usage(format!("cannot read initial data {spec}: {e}")))?;
    parse_initial_data(g, &text)
}

pub fn parse_initial_data<G: Graph, S: Scalar>(g: &G, text: &str) -> Result<LocalFunction<G::Vertex, S>, CliError> {
    let pairs: Vec<(serde_json::Value, serde_json::Value)> =
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("initial data: {e}")))?;
    let mut out = LocalFunction::zero();
    for (vertex, value) in pairs {
        let x = parse_vertex::<G::Vertex>(&vertex)?;
        if !g.contains(&x) {
            return Err(CliError::usage(format!("initial data names unknown vertex {vertex}")));
        }
        let v = match &value {
            serde_json::Value::Number(n) => S::parse(&n.to_string())?,
            serde_json::Value::String(s) => S::parse(s)?,
            other => return Err(CliError::usage(format!("initial value must be a number or string, got {other}"))),
        };
        out.set(x, v);
    }
    Ok(out)
}

fn parse_vertex<V: VertexId>(v: &serde_json::Value) -> Result<V, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::usage(format!("bad vertex {v}: {e}")))
}
