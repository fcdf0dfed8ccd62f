//! Plans as a single JSON object.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CommBudget, EdgeId, Plan, VertexId};
use crate::objective::ObjectiveKind;
use crate::planner::PlannerKind;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub planner: PlannerKind,
    pub objective: ObjectiveKind,
    pub k: usize,
    pub budget: CommBudget<f64>,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub achieved_value: f64,
}

impl PlanFile {
    pub fn new(planner: PlannerKind, objective: ObjectiveKind, k: usize, budget: CommBudget<f64>, plan: &Plan<f64>) -> Self {
        PlanFile {
            planner,
            objective,
            k,
            budget,
            vertices: plan.vertices.clone(),
            edges: plan.edges.clone(),
            achieved_value: plan.achieved_value,
        }
    }

    pub fn plan(&self) -> Plan<f64> {
        Plan {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            achieved_value: self.achieved_value,
        }
    }
}

pub fn write_plan(path: impl AsRef<Path>, plan: &PlanFile) -> Result<()> {
    let mut text = serde_json::to_string_pretty(plan).expect("plans serialize");
    text.push('\n');
    Ok(std::fs::write(path, text)?)
}

pub fn read_plan(path: impl AsRef<Path>) -> Result<PlanFile> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::parse(e.line(), e.to_string()))
}
