//! Pose graphs in a g2o-style 2D text subset.
//!
//! ```text
//! VERTEX_SE2 id x y theta
//! FIX id
//! EDGE_SE2 i j dx dy dtheta I11 I12 I13 I22 I23 I33 [weight]
//! CANDIDATE edge_id i j weight I11 I12 I13 I22 I23 I33
//! ```
//!
//! Records appear in that order. Pose and candidate ids are dense and
//! ascending; `CANDIDATE` binds exchange-graph edge `edge_id` to poses
//! `i, j`. The information entries are the upper triangle of the 3×3
//! information matrix. `FIX` names the anchor pose and defaults to 0. The
//! trailing `EDGE_SE2` weight is the tree-connectivity weight of the base
//! edge and defaults to 1. Blank lines and lines starting with `#` are
//! skipped. Output always writes every field, so it round-trips exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::EdgeId;
use crate::objective::{Candidate, Information, Pose, PoseEdge, PoseGraph};
use crate::scalar::Real;

pub fn write_pose_graph<T: Real>(pg: &PoseGraph<T>) -> String {
    let f = |x: T| x.to_f64_value();
    let info = |i: &Information<T>| i.0.iter().map(|&x| f(x).to_string()).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    for (id, p) in pg.poses.iter().enumerate() {
        writeln!(out, "VERTEX_SE2 {id} {} {} {}", f(p.x), f(p.y), f(p.theta)).unwrap();
    }
    writeln!(out, "FIX {}", pg.anchor).unwrap();
    for e in &pg.base_edges {
        let m = &e.measurement;
        writeln!(
            out,
            "EDGE_SE2 {} {} {} {} {} {} {}",
            e.from,
            e.to,
            f(m.x),
            f(m.y),
            f(m.theta),
            info(&e.information),
            f(e.weight)
        )
        .unwrap();
    }
    for c in &pg.candidates {
        writeln!(
            out,
            "CANDIDATE {} {} {} {} {}",
            c.edge,
            c.from,
            c.to,
            f(c.weight),
            info(&c.information)
        )
        .unwrap();
    }
    out
}

#[derive(PartialEq, PartialOrd)]
enum Section {
    Vertices,
    Fix,
    Edges,
    Candidates,
}

struct Fields<'a> {
    line: usize,
    tag: &'a str,
    rest: Vec<&'a str>,
}

impl Fields<'_> {
    fn expect_len(&self, allowed: &[usize]) -> Result<()> {
        if allowed.contains(&self.rest.len()) {
            Ok(())
        } else {
            Err(Error::parse(
                self.line,
                format!("{} expects {:?} fields, got {}", self.tag, allowed, self.rest.len()),
            ))
        }
    }

    fn index(&self, i: usize, what: &str) -> Result<usize> {
        self.rest[i]
            .parse()
            .map_err(|_| Error::parse(self.line, format!("{what}: invalid index '{}'", self.rest[i])))
    }

    fn real(&self, i: usize) -> Result<f64> {
        let x: f64 = self.rest[i]
            .parse()
            .map_err(|_| Error::parse(self.line, format!("invalid number '{}'", self.rest[i])))?;
        if !x.is_finite() {
            return Err(Error::parse(self.line, format!("non-finite number '{}'", self.rest[i])));
        }
        Ok(x)
    }

    fn information(&self, from: usize) -> Result<Information<f64>> {
        let mut a = [0.0; 6];
        for (j, slot) in a.iter_mut().enumerate() {
            *slot = self.real(from + j)?;
        }
        Ok(Information(a))
    }

    fn pose_pair(&self, a: usize, num_poses: usize) -> Result<(usize, usize)> {
        let (i, j) = (self.index(a, "pose")?, self.index(a + 1, "pose")?);
        if i >= num_poses || j >= num_poses {
            return Err(Error::parse(self.line, format!("unknown pose in pair ({i}, {j})")));
        }
        if i == j {
            return Err(Error::parse(self.line, format!("pose pair ({i}, {j}) is a self-loop")));
        }
        Ok((i, j))
    }

    fn positive(&self, i: usize, what: &str) -> Result<f64> {
        let w = self.real(i)?;
        if w <= 0.0 {
            return Err(Error::parse(self.line, format!("{what} must be positive")));
        }
        Ok(w)
    }
}

pub fn parse_pose_graph(text: &str) -> Result<PoseGraph<f64>> {
    let mut pg = PoseGraph {
        poses: Vec::new(),
        anchor: 0,
        base_edges: Vec::new(),
        candidates: Vec::new(),
    };
    let mut section = Section::Vertices;
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let tag = parts.next().unwrap();
        let f = Fields {
            line: i + 1,
            tag,
            rest: parts.collect(),
        };
        let next = match tag {
            "VERTEX_SE2" => Section::Vertices,
            "FIX" => Section::Fix,
            "EDGE_SE2" => Section::Edges,
            "CANDIDATE" => Section::Candidates,
            other => return Err(Error::parse(f.line, format!("unknown record '{other}'"))),
        };
        if next < section || (next == Section::Fix && section == Section::Fix) {
            return Err(Error::parse(f.line, format!("{tag} out of order")));
        }
        section = next;
        match section {
            Section::Vertices => {
                f.expect_len(&[4])?;
                let id = f.index(0, "pose")?;
                if id != pg.poses.len() {
                    return Err(Error::parse(f.line, format!("expected pose id {}, got {id}", pg.poses.len())));
                }
                pg.poses.push(Pose::new(f.real(1)?, f.real(2)?, f.real(3)?));
            }
            Section::Fix => {
                f.expect_len(&[1])?;
                let a = f.index(0, "anchor")?;
                if a >= pg.poses.len() {
                    return Err(Error::parse(f.line, format!("unknown anchor pose {a}")));
                }
                pg.anchor = a;
            }
            Section::Edges => {
                f.expect_len(&[11, 12])?;
                let (from, to) = f.pose_pair(0, pg.poses.len())?;
                let weight = if f.rest.len() == 12 { f.positive(11, "edge weight")? } else { 1.0 };
                pg.base_edges.push(PoseEdge {
                    from,
                    to,
                    measurement: Pose::new(f.real(2)?, f.real(3)?, f.real(4)?),
                    information: f.information(5)?,
                    weight,
                });
            }
            Section::Candidates => {
                f.expect_len(&[10])?;
                let edge = f.index(0, "candidate")?;
                if edge != pg.candidates.len() {
                    return Err(Error::parse(
                        f.line,
                        format!("expected candidate for edge {}, got {edge}", pg.candidates.len()),
                    ));
                }
                let (from, to) = f.pose_pair(1, pg.poses.len())?;
                pg.candidates.push(Candidate {
                    edge: EdgeId(edge),
                    from,
                    to,
                    weight: f.positive(3, "candidate weight")?,
                    information: f.information(4)?,
                });
            }
        }
    }
    pg.validate()?;
    Ok(pg)
}

pub fn read_pose_graph(path: impl AsRef<Path>) -> Result<PoseGraph<f64>> {
    parse_pose_graph(&std::fs::read_to_string(path)?)
}

pub fn write_pose_graph_file<T: Real>(path: impl AsRef<Path>, pg: &PoseGraph<T>) -> Result<()> {
    Ok(std::fs::write(path, write_pose_graph(pg))?)
}
