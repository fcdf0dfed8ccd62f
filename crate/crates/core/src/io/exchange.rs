//! Exchange graphs as JSON lines.
//!
//! ```text
//! {"type":"header","num_robots":3}
//! {"type":"vertex","id":0,"robot":0,"weight":1.0}
//! ...
//! {"type":"edge","id":0,"u":0,"v":4,"p":0.9}
//! ```
//!
//! The header comes first, then every vertex, then every edge, each in id
//! order. Output is canonical, so parsing and writing reproduces the input
//! byte for byte. Parsing rejects any graph that fails validation and
//! reports the line of the offending record.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, ExchangeGraph, RobotId, Vertex, VertexId, Violation};
use crate::scalar::Real;

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum Record {
    Header { num_robots: usize },
    Vertex { id: usize, robot: usize, weight: f64 },
    Edge { id: usize, u: usize, v: usize, p: f64 },
}

pub fn write_exchange_graph<T: Real>(graph: &ExchangeGraph<T>) -> String {
    let mut out = String::new();
    let mut line = |r: Record| {
        out.push_str(&serde_json::to_string(&r).expect("records serialize"));
        out.push('\n');
    };
    line(Record::Header {
        num_robots: graph.num_robots(),
    });
    for v in graph.vertices() {
        line(Record::Vertex {
            id: v.id.index(),
            robot: v.robot.index(),
            weight: v.weight.to_f64_value(),
        });
    }
    for e in graph.edges() {
        line(Record::Edge {
            id: e.id.index(),
            u: e.u.index(),
            v: e.v.index(),
            p: e.p.to_f64_value(),
        });
    }
    out
}

pub fn parse_exchange_graph(text: &str) -> Result<ExchangeGraph<f64>> {
    let mut num_robots = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let (mut vertex_lines, mut edge_lines) = (Vec::new(), Vec::new());
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let record: Record = serde_json::from_str(raw).map_err(|e| Error::parse(line, e.to_string()))?;
        match record {
            Record::Header { num_robots: r } => {
                if line != 1 {
                    return Err(Error::parse(line, "header must be the first record"));
                }
                num_robots = Some(r);
            }
            _ if num_robots.is_none() => return Err(Error::parse(line, "missing header")),
            Record::Vertex { id, robot, weight } => {
                if !edges.is_empty() {
                    return Err(Error::parse(line, "vertex record after edge records"));
                }
                vertices.push(Vertex {
                    id: VertexId(id),
                    robot: RobotId(robot),
                    weight,
                });
                vertex_lines.push(line);
            }
            Record::Edge { id, u, v, p } => {
                edges.push(Edge {
                    id: EdgeId(id),
                    u: VertexId(u),
                    v: VertexId(v),
                    p,
                });
                edge_lines.push(line);
            }
        }
    }
    let Some(num_robots) = num_robots else {
        return Err(Error::parse(1, "missing header"));
    };
    let graph = ExchangeGraph::new_unchecked(num_robots, vertices, edges);
    let violations = graph.validate();
    if let Some(first) = violations.first() {
        let vertex_line = |v: VertexId| {
            graph
                .vertices()
                .iter()
                .position(|x| x.id == v)
                .map_or(1, |p| vertex_lines[p])
        };
        let edge_line = |e: EdgeId| graph.edges().iter().position(|x| x.id == e).map_or(1, |p| edge_lines[p]);
        let line = match first {
            Violation::TooFewRobots(_) => 1,
            Violation::VertexIdNotDense { position, .. } => vertex_lines[*position],
            Violation::EdgeIdNotDense { position, .. } => edge_lines[*position],
            Violation::RobotOutOfRange { vertex, .. } | Violation::NonPositiveWeight { vertex } => vertex_line(*vertex),
            Violation::UnknownEndpoint { edge, .. }
            | Violation::SelfLoop { edge }
            | Violation::NotRPartite { edge, .. }
            | Violation::ProbabilityOutOfRange { edge }
            | Violation::DuplicateEdge { edge, .. } => edge_line(*edge),
        };
        return Err(Error::parse(line, first.to_string()));
    }
    Ok(graph)
}

pub fn read_exchange_graph(path: impl AsRef<Path>) -> Result<ExchangeGraph<f64>> {
    parse_exchange_graph(&std::fs::read_to_string(path)?)
}

pub fn write_exchange_graph_file<T: Real>(path: impl AsRef<Path>, graph: &ExchangeGraph<T>) -> Result<()> {
    Ok(std::fs::write(path, write_exchange_graph(graph))?)
}
