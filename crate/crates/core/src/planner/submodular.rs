use super::select::Selector;
use super::{Arm, Item, Phase, PlannerConfig, PlannerKind, PlannerTrace};
use crate::error::Result;
use crate::graph::{EdgeId, ExchangeGraph, Plan, VertexId};
use crate::objective::{EdgeSetState, Objective};
use crate::scalar::Real;

/// Greedy over edges, then a vertex cover of the chosen edges as the
/// broadcast set, then greedy over the edges that cover already pays for.
///
/// The first phase takes `min(b, k)` edges so the cover fits in `b`. The
/// cover scans the chosen edges in order and, for each one still uncovered,
/// adds the endpoint touching more uncovered chosen edges (lower id on ties).
/// The second phase runs only when `k > b`.
pub fn e_greedy<T: Real, O: Objective<T>>(
    graph: &ExchangeGraph<T>,
    objective: &O,
    config: &PlannerConfig<T>,
) -> Result<(Plan<T>, PlannerTrace<T>)> {
    let b = config.require_tu(PlannerKind::EGreedy)?;
    let k = config.k;
    let mut trace = PlannerTrace::new(PlannerKind::EGreedy);
    let mut state = objective.state();
    let mut edges: Vec<EdgeId> = Vec::new();
    let rounds = b.min(k);

    let mut sel = Selector::new((0..graph.num_edges()).collect(), config.lazy, objective.is_modular());
    while edges.len() < rounds {
        let st = &state;
        let Some((e, gain)) = sel.next(|_| true, |e| st.gain(&[EdgeId(e)])) else {
            trace.edge_pool_exhausted = true;
            break;
        };
        state.insert(&[EdgeId(e)]);
        edges.push(EdgeId(e));
        trace.push(None, Phase::EdgeGreedy, Item::Edge(EdgeId(e)), gain, state.value());
    }
    trace.evaluations += sel.evaluations;

    let cover = greedy_cover(graph, &edges);

    if k > edges.len() && !trace.edge_pool_exhausted {
        let mut free: Vec<usize> = graph
            .edges_incident(&cover)?
            .into_iter()
            .filter(|e| !state.contains(*e))
            .map(EdgeId::index)
            .collect();
        free.sort_unstable();
        let budget = k - edges.len();
        let mut sel = Selector::new(free, config.lazy, objective.is_modular());
        for _ in 0..budget {
            let st = &state;
            let Some((e, gain)) = sel.next(|_| true, |e| st.gain(&[EdgeId(e)])) else {
                break;
            };
            state.insert(&[EdgeId(e)]);
            edges.push(EdgeId(e));
            trace.push(None, Phase::EdgeLocal, Item::Edge(EdgeId(e)), gain, state.value());
        }
        trace.evaluations += sel.evaluations;
    }

    let achieved_value = objective.value(&edges)?;
    Ok((
        Plan {
            vertices: cover,
            edges,
            achieved_value,
        },
        trace,
    ))
}

/// Vertex cover of `edges`, built in scan order.
pub(crate) fn greedy_cover<T: Real>(graph: &ExchangeGraph<T>, edges: &[EdgeId]) -> Vec<VertexId> {
    let n = graph.num_vertices();
    let mut uncovered_deg = vec![0usize; n];
    for &e in edges {
        let edge = &graph.edges()[e.index()];
        uncovered_deg[edge.u.index()] += 1;
        uncovered_deg[edge.v.index()] += 1;
    }
    let mut in_cover = vec![false; n];
    let mut cover = Vec::new();
    for &e in edges {
        let edge = &graph.edges()[e.index()];
        if in_cover[edge.u.index()] || in_cover[edge.v.index()] {
            continue;
        }
        let (lo, hi) = if edge.u < edge.v { (edge.u, edge.v) } else { (edge.v, edge.u) };
        let pick = if uncovered_deg[hi.index()] > uncovered_deg[lo.index()] { hi } else { lo };
        in_cover[pick.index()] = true;
        cover.push(pick);
        for &f in edges {
            let fe = &graph.edges()[f.index()];
            if fe.touches(pick) {
                let other = fe.other(pick);
                if !in_cover[other.index()] {
                    uncovered_deg[other.index()] -= 1;
                }
            }
        }
        uncovered_deg[pick.index()] = 0;
    }
    cover
}

/// Greedy over vertices on `h(V) = f(edges(V))`, stopping as soon as the
/// next pick would exceed `b` vertices or `k` edges.
pub fn v_greedy<T: Real, O: Objective<T>>(
    graph: &ExchangeGraph<T>,
    objective: &O,
    config: &PlannerConfig<T>,
) -> Result<(Plan<T>, PlannerTrace<T>)> {
    let b = config.require_tu(PlannerKind::VGreedy)?;
    let k = config.k;
    let mut trace = PlannerTrace::new(PlannerKind::VGreedy);
    let mut state = objective.state();
    let mut vertices = Vec::new();
    let mut edges: Vec<EdgeId> = Vec::new();

    let mut sel = Selector::new((0..graph.num_vertices()).collect(), config.lazy, false);
    while vertices.len() < b {
        let st = &state;
        let Some((v, gain)) = sel.next(|_| true, |v| st.gain(graph.incident(VertexId(v)))) else {
            trace.vertex_pool_exhausted = true;
            break;
        };
        let fresh: Vec<EdgeId> = graph
            .incident(VertexId(v))
            .iter()
            .copied()
            .filter(|e| !state.contains(*e))
            .collect();
        if edges.len() + fresh.len() > k {
            break;
        }
        state.insert(&fresh);
        vertices.push(VertexId(v));
        edges.extend(fresh);
        trace.push(None, Phase::Vertex, Item::Vertex(VertexId(v)), gain, state.value());
    }
    trace.evaluations = sel.evaluations;

    let achieved_value = objective.value(&edges)?;
    Ok((
        Plan {
            vertices,
            edges,
            achieved_value,
        },
        trace,
    ))
}

/// Better of E-Greedy and V-Greedy; E-Greedy wins ties.
pub fn s_greedy<T: Real, O: Objective<T>>(
    graph: &ExchangeGraph<T>,
    objective: &O,
    config: &PlannerConfig<T>,
) -> Result<(Plan<T>, PlannerTrace<T>)> {
    config.require_tu(PlannerKind::SGreedy)?;
    let (ep, mut et) = e_greedy(graph, objective, config)?;
    let (vp, mut vt) = v_greedy(graph, objective, config)?;
    et.tag(Arm::Edge);
    vt.tag(Arm::Vertex);
    let mut trace = PlannerTrace::new(PlannerKind::SGreedy);
    trace.evaluations = et.evaluations + vt.evaluations;
    trace.edge_pool_exhausted = et.edge_pool_exhausted;
    trace.vertex_pool_exhausted = vt.vertex_pool_exhausted;
    trace.steps = et.steps;
    trace.steps.extend(vt.steps);
    let (winner, plan) = if vp.achieved_value > ep.achieved_value {
        (Arm::Vertex, vp)
    } else {
        (Arm::Edge, ep)
    };
    trace.winner = Some(winner);
    Ok((plan, trace))
}
