//! Normalized monotone submodular set functions over exchange-graph edges.
//!
//! Every objective is evaluated from scratch by [`Objective::value`]. Greedy
//! loops use the incremental [`EdgeSetState`] instead, which for the
//! log-determinant objectives keeps a Cholesky factor and applies rank-one
//! updates.

mod logdet;
mod modular;
mod pose_graph;

pub use logdet::{LogDetObjective, LogDetState, DEFAULT_DCRIT_REGULARIZATION};
pub use modular::{g_modular, modular_value, Modular, ModularState, NestedState, NestedValue};
pub use pose_graph::{Candidate, Information, Pose, PoseEdge, PoseGraph};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EdgeId;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    /// Expected number of true loop closures.
    Modular,
    /// Expected gain in the log-determinant of the pose-graph information.
    Dcrit,
    /// Expected gain in the log weighted number of spanning trees.
    Treeconn,
}

impl ObjectiveKind {
    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::Modular => "modular",
            ObjectiveKind::Dcrit => "dcrit",
            ObjectiveKind::Treeconn => "treeconn",
        }
    }
}

pub trait Objective<T: Real>: Sync {
    type State<'a>: EdgeSetState<T>
    where
        Self: 'a;

    fn kind(&self) -> ObjectiveKind;

    fn num_edges(&self) -> usize;

    /// `f(E)`; repeated ids count once.
    fn value(&self, edges: &[EdgeId]) -> Result<T>;

    /// `f(E ∪ {e}) − f(E)`.
    fn marginal(&self, edges: &[EdgeId], e: EdgeId) -> Result<T> {
        if edges.contains(&e) {
            return Err(Error::EdgeAlreadyPresent(e));
        }
        let mut with = edges.to_vec();
        with.push(e);
        Ok(self.value(&with)? - self.value(edges)?)
    }

    /// Fresh incremental state positioned at the empty set.
    fn state(&self) -> Self::State<'_>;

    /// True when marginal gains never change (modular objectives).
    fn is_modular(&self) -> bool {
        self.kind() == ObjectiveKind::Modular
    }
}

/// Incremental evaluator positioned at some edge set `E`.
pub trait EdgeSetState<T: Real>: Clone + Sync {
    fn value(&self) -> T;
    fn contains(&self, e: EdgeId) -> bool;
    /// `f(E ∪ es) − f(E)`; ids already in `E` are ignored.
    fn gain(&self, es: &[EdgeId]) -> T;
    fn insert(&mut self, es: &[EdgeId]);
}

/// Marks the distinct ids of `edges`, failing on unknown ones.
pub(crate) fn distinct_edges(num_edges: usize, edges: &[EdgeId]) -> Result<Vec<EdgeId>> {
    let mut seen = vec![false; num_edges];
    let mut out = Vec::with_capacity(edges.len());
    for &e in edges {
        let slot = seen.get_mut(e.index()).ok_or(Error::UnknownEdge(e))?;
        if !*slot {
            *slot = true;
            out.push(e);
        }
    }
    Ok(out)
}

/// Objective chosen at run time.
#[derive(Clone, Debug)]
pub enum AnyObjective<'g, T> {
    Modular(Modular<'g, T>),
    LogDet(LogDetObjective<T>),
}

#[derive(Clone, Debug)]
pub enum AnyState<'a, T> {
    Modular(ModularState<'a, T>),
    LogDet(LogDetState<'a, T>),
}

impl<T: Real> EdgeSetState<T> for AnyState<'_, T> {
    fn value(&self) -> T {
        match self {
            AnyState::Modular(s) => s.value(),
            AnyState::LogDet(s) => s.value(),
        }
    }

    fn contains(&self, e: EdgeId) -> bool {
        match self {
            AnyState::Modular(s) => s.contains(e),
            AnyState::LogDet(s) => s.contains(e),
        }
    }

    fn gain(&self, es: &[EdgeId]) -> T {
        match self {
            AnyState::Modular(s) => s.gain(es),
            AnyState::LogDet(s) => s.gain(es),
        }
    }

    fn insert(&mut self, es: &[EdgeId]) {
        match self {
            AnyState::Modular(s) => s.insert(es),
            AnyState::LogDet(s) => s.insert(es),
        }
    }
}

impl<T: Real> Objective<T> for AnyObjective<'_, T> {
    type State<'a>
        = AnyState<'a, T>
    where
        Self: 'a;

    fn kind(&self) -> ObjectiveKind {
        match self {
            AnyObjective::Modular(o) => o.kind(),
            AnyObjective::LogDet(o) => o.kind(),
        }
    }

    fn num_edges(&self) -> usize {
        match self {
            AnyObjective::Modular(o) => o.num_edges(),
            AnyObjective::LogDet(o) => o.num_edges(),
        }
    }

    fn value(&self, edges: &[EdgeId]) -> Result<T> {
        match self {
            AnyObjective::Modular(o) => o.value(edges),
            AnyObjective::LogDet(o) => o.value(edges),
        }
    }

    fn marginal(&self, edges: &[EdgeId], e: EdgeId) -> Result<T> {
        match self {
            AnyObjective::Modular(o) => o.marginal(edges, e),
            AnyObjective::LogDet(o) => o.marginal(edges, e),
        }
    }

    fn state(&self) -> AnyState<'_, T> {
        match self {
            AnyObjective::Modular(o) => AnyState::Modular(o.state()),
            AnyObjective::LogDet(o) => AnyState::LogDet(o.state()),
        }
    }
}

impl<'g, T: Real> AnyObjective<'g, T> {
    /// Builds `kind`; the log-determinant objectives need a pose graph.
    pub fn build(
        kind: ObjectiveKind,
        graph: &'g crate::graph::ExchangeGraph<T>,
        poses: Option<&PoseGraph<T>>,
    ) -> Result<Self> {
        let need = || Error::InvalidArgument(format!("objective {} needs a pose graph", kind.name()));
        Ok(match kind {
            ObjectiveKind::Modular => AnyObjective::Modular(Modular::new(graph)),
            ObjectiveKind::Treeconn => {
                AnyObjective::LogDet(LogDetObjective::tree_connectivity(graph, poses.ok_or_else(need)?)?)
            }
            ObjectiveKind::Dcrit => AnyObjective::LogDet(LogDetObjective::d_criterion(
                graph,
                poses.ok_or_else(need)?,
                T::of(DEFAULT_DCRIT_REGULARIZATION),
            )?),
        })
    }
}

impl std::str::FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [ObjectiveKind::Modular, ObjectiveKind::Dcrit, ObjectiveKind::Treeconn]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown objective '{s}'")))
    }
}
