//! Greedy planners for the budgeted selection problem and a random baseline.
//!
//! | planner  | budgets    | objective  |
//! |----------|------------|------------|
//! | M-Greedy | TU, TN, IU | modular    |
//! | E-Greedy | TU         | any        |
//! | V-Greedy | TU         | any        |
//! | S-Greedy | TU         | any        |
//! | random   | TU         | any        |
//!
//! Every planner returns a [`Plan`] whose vertices cover its edges and
//! respect the budget, plus a [`PlannerTrace`] of the selections made.

mod baseline;
mod modular;
mod select;
mod submodular;

pub use baseline::random_baseline;
pub use modular::m_greedy;
pub use submodular::{e_greedy, s_greedy, v_greedy};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CommBudget, EdgeId, ExchangeGraph, Plan, Regime, VertexId};
use crate::objective::Objective;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct PlannerConfig<T = f64> {
    /// Verification budget.
    pub k: usize,
    pub budget: CommBudget<T>,
    pub lazy: bool,
    /// Only the random baseline draws from it.
    pub seed: u64,
}

impl<T: Real> PlannerConfig<T> {
    pub fn new(k: usize, budget: CommBudget<T>) -> Self {
        PlannerConfig {
            k,
            budget,
            lazy: false,
            seed: 0,
        }
    }

    /// `TU` budget by shorthand.
    pub fn tu(b: usize, k: usize) -> Self {
        Self::new(k, CommBudget::Tu(b))
    }

    pub fn with_lazy(mut self, lazy: bool) -> Self {
        self.lazy = lazy;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub(crate) fn require_tu(&self, planner: PlannerKind) -> Result<usize> {
        match self.budget {
            CommBudget::Tu(b) => Ok(b),
            _ => Err(Error::RegimeMismatch {
                planner: planner.name(),
                regime: self.budget.regime().name(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerKind {
    MGreedy,
    EGreedy,
    VGreedy,
    SGreedy,
    Random,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 5] = [
        PlannerKind::MGreedy,
        PlannerKind::EGreedy,
        PlannerKind::VGreedy,
        PlannerKind::SGreedy,
        PlannerKind::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::MGreedy => "mgreedy",
            PlannerKind::EGreedy => "egreedy",
            PlannerKind::VGreedy => "vgreedy",
            PlannerKind::SGreedy => "sgreedy",
            PlannerKind::Random => "random",
        }
    }

    /// Regimes the planner accepts.
    pub fn supports(self, regime: Regime) -> bool {
        self == PlannerKind::MGreedy || regime == Regime::Tu
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlannerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PlannerKind::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown planner '{s}'")))
    }
}

/// Which of several internal runs produced a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arm {
    Edge,
    Vertex,
    Plain,
    CostBenefit,
}

impl Arm {
    pub fn name(self) -> &'static str {
        match self {
            Arm::Edge => "edge-arm",
            Arm::Vertex => "vertex-arm",
            Arm::Plain => "plain",
            Arm::CostBenefit => "cost-benefit",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    /// Vertex selection (M-Greedy, V-Greedy).
    Vertex,
    /// E-Greedy's greedy edge loop.
    EdgeGreedy,
    /// E-Greedy's pass over edges already covered by the broadcast set.
    EdgeLocal,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Vertex => "vertex",
            Phase::EdgeGreedy => "phase I",
            Phase::EdgeLocal => "phase II",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Item {
    Vertex(VertexId),
    Edge(EdgeId),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep<T = f64> {
    pub arm: Option<Arm>,
    pub phase: Phase,
    pub item: Item,
    /// Marginal gain of the selection (before any cost normalization).
    pub gain: T,
    /// Objective value of the arm after the selection.
    pub value: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlannerTrace<T = f64> {
    pub planner: PlannerKind,
    pub steps: Vec<TraceStep<T>>,
    pub winner: Option<Arm>,
    /// Marginal-gain evaluations across all arms.
    pub evaluations: usize,
    /// E-Greedy ran out of edges before filling its first phase.
    pub edge_pool_exhausted: bool,
    /// V-Greedy selected every vertex.
    pub vertex_pool_exhausted: bool,
}

impl<T: Real> PlannerTrace<T> {
    pub fn new(planner: PlannerKind) -> Self {
        PlannerTrace {
            planner,
            steps: Vec::new(),
            winner: None,
            evaluations: 0,
            edge_pool_exhausted: false,
            vertex_pool_exhausted: false,
        }
    }

    pub(crate) fn push(&mut self, arm: Option<Arm>, phase: Phase, item: Item, gain: T, value: T) {
        self.steps.push(TraceStep {
            arm,
            phase,
            item,
            gain,
            value,
        });
    }

    pub(crate) fn tag(&mut self, arm: Arm) {
        for s in &mut self.steps {
            s.arm = Some(arm);
        }
    }

    /// Steps recorded for `arm`; `None` selects untagged steps.
    pub fn arm_steps(&self, arm: Option<Arm>) -> impl Iterator<Item = &TraceStep<T>> {
        self.steps.iter().filter(move |s| s.arm == arm)
    }

    /// Edges chosen by the greedy edge loop.
    pub fn phase_one_edges(&self) -> usize {
        self.steps.iter().filter(|s| s.phase == Phase::EdgeGreedy).count()
    }

    /// Vertices chosen by V-Greedy.
    pub fn vertex_arm_vertices(&self) -> usize {
        let arm = if self.planner == PlannerKind::SGreedy { Some(Arm::Vertex) } else { None };
        self.arm_steps(arm).filter(|s| s.phase == Phase::Vertex).count()
    }

    /// Whether the objective value never decreases along each arm.
    pub fn is_monotone(&self) -> bool {
        let arms = [None, Some(Arm::Edge), Some(Arm::Vertex), Some(Arm::Plain), Some(Arm::CostBenefit)];
        arms.into_iter().all(|arm| {
            let mut last = T::zero();
            self.arm_steps(arm).all(|s| {
                let ok = s.value >= last - T::eps();
                last = s.value;
                ok
            })
        })
    }
}

/// Runs `kind` on `graph`.
pub fn plan<T: Real, O: Objective<T>>(
    kind: PlannerKind,
    graph: &ExchangeGraph<T>,
    objective: &O,
    config: &PlannerConfig<T>,
) -> Result<(Plan<T>, PlannerTrace<T>)> {
    if objective.num_edges() != graph.num_edges() {
        return Err(Error::InvalidArgument(format!(
            "objective has {} edges, graph has {}",
            objective.num_edges(),
            graph.num_edges()
        )));
    }
    match kind {
        PlannerKind::MGreedy => m_greedy(graph, objective, config),
        PlannerKind::EGreedy => e_greedy(graph, objective, config),
        PlannerKind::VGreedy => v_greedy(graph, objective, config),
        PlannerKind::SGreedy => s_greedy(graph, objective, config),
        PlannerKind::Random => random_baseline(graph, objective, config),
    }
}
