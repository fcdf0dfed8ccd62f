use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{PlannerConfig, PlannerKind, PlannerTrace};
use crate::error::Result;
use crate::graph::{EdgeId, ExchangeGraph, Plan, VertexId};
use crate::objective::Objective;
use crate::scalar::Real;

/// `b` vertices uniformly without replacement, then `k` of their incident
/// edges uniformly without replacement. Deterministic in `config.seed`.
pub fn random_baseline<T: Real, O: Objective<T>>(
    graph: &ExchangeGraph<T>,
    objective: &O,
    config: &PlannerConfig<T>,
) -> Result<(Plan<T>, PlannerTrace<T>)> {
    let b = config.require_tu(PlannerKind::Random)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = graph.num_vertices();
    let vertices: Vec<VertexId> = index::sample(&mut rng, n, b.min(n)).into_iter().map(VertexId).collect();
    let incident = graph.edges_incident(&vertices)?;
    let take = config.k.min(incident.len());
    let edges: Vec<EdgeId> = index::sample(&mut rng, incident.len(), take)
        .into_iter()
        .map(|i| incident[i])
        .collect();
    let achieved_value = objective.value(&edges)?;
    Ok((
        Plan {
            vertices,
            edges,
            achieved_value,
        },
        PlannerTrace::new(PlannerKind::Random),
    ))
}
