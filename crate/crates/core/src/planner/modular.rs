use std::collections::HashMap;
use std::sync::Mutex;

use super::select::Selector;
use super::{Arm, Item, Phase, PlannerConfig, PlannerKind, PlannerTrace};
use crate::error::{Error, Result};
use crate::graph::{CommBudget, ExchangeGraph, Plan, VertexId};
use crate::objective::{modular_value, NestedState, Objective};
use crate::scalar::Real;

/// `g` values keyed by sorted vertex set, shared by the two knapsack runs.
struct NestedCache<T>(Mutex<HashMap<Vec<usize>, T>>);

impl<T: Real> NestedCache<T> {
    fn value_with(&self, state: &NestedState<'_, T>, chosen: &[VertexId], v: VertexId) -> T {
        let mut key: Vec<usize> = chosen.iter().map(|u| u.index()).collect();
        key.push(v.index());
        key.sort_unstable();
        if let Some(&x) = self.0.lock().unwrap().get(&key) {
            return x;
        }
        let x = state.value_with(v);
        self.0.lock().unwrap().insert(key, x);
        x
    }
}

struct Run<'g, T> {
    state: NestedState<'g, T>,
    chosen: Vec<VertexId>,
    trace: PlannerTrace<T>,
}

impl<'g, T: Real> Run<'g, T> {
    fn new(graph: &'g ExchangeGraph<T>, k: usize) -> Self {
        Run {
            state: NestedState::new(graph, k),
            chosen: Vec::new(),
            trace: PlannerTrace::new(PlannerKind::MGreedy),
        }
    }

    fn commit(&mut self, v: VertexId, arm: Option<Arm>) {
        let gain = self.state.gain(v);
        self.state.insert(v);
        self.chosen.push(v);
        let value = self.state.value();
        self.trace.push(arm, Phase::Vertex, Item::Vertex(v), gain, value);
    }

    fn finish(self, graph: &ExchangeGraph<T>) -> Result<(Plan<T>, PlannerTrace<T>)> {
        let edges = self.state.witness().to_vec();
        let achieved_value = modular_value(graph, &edges)?;
        Ok((
            Plan {
                vertices: self.chosen,
                edges,
                achieved_value,
            },
            self.trace,
        ))
    }
}

/// Greedy vertex selection on the nested function `g`, then the top-`k`
/// edges incident to the chosen vertices.
///
/// * `TU(b)`: exactly `b` rounds, zero-gain picks included.
/// * `TN(b)`: best of the plain and the cost-benefit greedy, each run over
///   affordable vertices until none is left. The plain run wins ties.
/// * `IU`: greedy over vertices whose block still has quota.
pub fn m_greedy<T: Real, O: Objective<T>>(
    graph: &ExchangeGraph<T>,
    objective: &O,
    config: &PlannerConfig<T>,
) -> Result<(Plan<T>, PlannerTrace<T>)> {
    if !objective.is_modular() {
        return Err(Error::NonModular("m-greedy"));
    }
    let k = config.k;
    let n = graph.num_vertices();
    let ids = || (0..n).collect::<Vec<_>>();
    match &config.budget {
        CommBudget::Tu(b) => {
            let mut run = Run::new(graph, k);
            if k > 0 {
                let mut sel = Selector::new(ids(), config.lazy, false);
                for _ in 0..*b {
                    let state = &run.state;
                    let Some((v, _)) = sel.next(|_| true, |v| state.gain(VertexId(v))) else {
                        break;
                    };
                    run.commit(VertexId(v), None);
                }
                run.trace.evaluations = sel.evaluations;
            }
            run.finish(graph)
        }
        CommBudget::Tn(b) => {
            if *b < T::zero() {
                return Err(Error::InvalidBudget(format!("negative knapsack budget {b}")));
            }
            let cache = NestedCache(Mutex::new(HashMap::new()));
            let mut runs = Vec::with_capacity(2);
            for arm in [Arm::Plain, Arm::CostBenefit] {
                let mut run = Run::new(graph, k);
                if k > 0 {
                    let mut sel = Selector::new(ids(), config.lazy, false);
                    let mut left = *b;
                    loop {
                        let (state, chosen) = (&run.state, &run.chosen);
                        let afford = |v: usize| graph.weight(VertexId(v)) <= left + T::eps();
                        let score = |v: usize| {
                            let gain = cache.value_with(state, chosen, VertexId(v)) - state.value();
                            match arm {
                                Arm::CostBenefit => gain / graph.weight(VertexId(v)),
                                _ => gain,
                            }
                        };
                        let Some((v, _)) = sel.next(afford, score) else {
                            break;
                        };
                        left = left - graph.weight(VertexId(v));
                        run.commit(VertexId(v), Some(arm));
                    }
                    run.trace.evaluations = sel.evaluations;
                }
                runs.push(run);
            }
            let cb = runs.pop().unwrap();
            let plain = runs.pop().unwrap();
            let evaluations = plain.trace.evaluations + cb.trace.evaluations;
            let mut steps = plain.trace.steps.clone();
            steps.extend(cb.trace.steps.iter().cloned());
            let winner = if cb.state.value() > plain.state.value() { Arm::CostBenefit } else { Arm::Plain };
            let chosen = if winner == Arm::CostBenefit { cb } else { plain };
            let (p, mut trace) = chosen.finish(graph)?;
            trace.steps = steps;
            trace.winner = Some(winner);
            trace.evaluations = evaluations;
            Ok((p, trace))
        }
        CommBudget::Iu(limits) => {
            let block = limits.block_of(graph)?;
            let mut quota = limits.limits.clone();
            let mut run = Run::new(graph, k);
            if k > 0 {
                let mut sel = Selector::new(ids(), config.lazy, false);
                loop {
                    let state = &run.state;
                    let q = &quota;
                    let Some((v, _)) = sel.next(|v| q[block[v]] > 0, |v| state.gain(VertexId(v))) else {
                        break;
                    };
                    quota[block[v]] -= 1;
                    run.commit(VertexId(v), None);
                }
                run.trace.evaluations = sel.evaluations;
            }
            run.finish(graph)
        }
    }
}
