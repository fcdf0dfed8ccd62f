//! Exhaustive optimum over broadcast sets for small instances.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{CommBudget, EdgeId, ExchangeGraph, Plan, VertexId};
use crate::objective::{g_modular, EdgeSetState, Objective};
use crate::scalar::Real;

/// Maximum number of budget-feasible vertex subsets, and of edge subsets
/// examined per vertex subset.
pub const ENUMERATION_LIMIT: u128 = 1 << 20;

fn too_large(what: &'static str, size: u128) -> Error {
    Error::TooLarge {
        what,
        size,
        limit: ENUMERATION_LIMIT,
    }
}

/// Depth-first walk over budget-feasible vertex sets in lexicographic order.
struct Walk<'g, T> {
    graph: &'g ExchangeGraph<T>,
    budget: &'g CommBudget<T>,
    block: Vec<usize>,
    used: Vec<usize>,
    weight: T,
    chosen: Vec<VertexId>,
    visited: u128,
}

impl<'g, T: Real> Walk<'g, T> {
    fn new(graph: &'g ExchangeGraph<T>, budget: &'g CommBudget<T>) -> Result<Self> {
        let (block, used) = match budget {
            CommBudget::Iu(limits) => (limits.block_of(graph)?, vec![0; limits.limits.len()]),
            _ => (Vec::new(), Vec::new()),
        };
        Ok(Walk {
            graph,
            budget,
            block,
            used,
            weight: T::zero(),
            chosen: Vec::new(),
            visited: 0,
        })
    }

    fn can_add(&self, v: usize) -> bool {
        match self.budget {
            CommBudget::Tu(b) => self.chosen.len() < *b,
            CommBudget::Tn(b) => self.weight + self.graph.weight(VertexId(v)) <= *b + T::eps(),
            CommBudget::Iu(limits) => self.used[self.block[v]] < limits.limits[self.block[v]],
        }
    }

    fn push(&mut self, v: usize) {
        self.chosen.push(VertexId(v));
        self.weight = self.weight + self.graph.weight(VertexId(v));
        if !self.block.is_empty() {
            self.used[self.block[v]] += 1;
        }
    }

    fn pop(&mut self) {
        let v = self.chosen.pop().unwrap().index();
        self.weight = self.weight - self.graph.weight(VertexId(v));
        if !self.block.is_empty() {
            self.used[self.block[v]] -= 1;
        }
    }

    /// Calls `visit` on every feasible set, the empty set first.
    fn run(&mut self, visit: &mut dyn FnMut(&[VertexId], &[u64])) -> Result<()> {
        let words = self.graph.num_edges().div_ceil(64);
        let mut bits = vec![0u64; words];
        self.visited = 1;
        visit(&[], &bits);
        self.descend(0, &mut bits, visit)
    }

    fn descend(&mut self, from: usize, bits: &mut Vec<u64>, visit: &mut dyn FnMut(&[VertexId], &[u64])) -> Result<()> {
        for v in from..self.graph.num_vertices() {
            if !self.can_add(v) {
                continue;
            }
            self.visited += 1;
            if self.visited > ENUMERATION_LIMIT {
                return Err(too_large("brute force", self.visited));
            }
            self.push(v);
            let saved = bits.clone();
            for e in self.graph.incident(VertexId(v)) {
                bits[e.index() / 64] |= 1 << (e.index() % 64);
            }
            visit(&self.chosen, bits);
            self.descend(v + 1, bits, visit)?;
            *bits = saved;
            self.pop();
        }
        Ok(())
    }
}

/// Number of vertex sets satisfying the budget, failing once it passes
/// [`ENUMERATION_LIMIT`].
pub fn count_feasible_subsets<T: Real>(graph: &ExchangeGraph<T>, budget: &CommBudget<T>) -> Result<u128> {
    let mut walk = Walk::new(graph, budget)?;
    walk.run(&mut |_, _| {})?;
    Ok(walk.visited)
}

fn binomial(n: usize, r: usize) -> u128 {
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Best subset of exactly `size` edges from `pool`, in lexicographic order
/// with strict improvement, so the first maximizer wins.
fn best_subset<T: Real, S: EdgeSetState<T>>(state: &S, pool: &[EdgeId], size: usize) -> (T, Vec<EdgeId>) {
    fn go<T: Real, S: EdgeSetState<T>>(
        state: &S,
        pool: &[EdgeId],
        from: usize,
        left: usize,
        pick: &mut Vec<EdgeId>,
        best: &mut Option<(T, Vec<EdgeId>)>,
    ) {
        if left == 0 {
            let v = state.value();
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                *best = Some((v, pick.clone()));
            }
            return;
        }
        for i in from..=pool.len() - left {
            let mut next = state.clone();
            next.insert(&pool[i..=i]);
            pick.push(pool[i]);
            go(&next, pool, i + 1, left - 1, pick, best);
            pick.pop();
        }
    }
    let mut best = None;
    go(state, pool, 0, size, &mut Vec::new(), &mut best);
    best.unwrap_or((T::zero(), Vec::new()))
}

/// Exact optimum of the selection problem by enumerating broadcast sets.
///
/// For each feasible vertex set `V` the inner problem over `edges(V)` is
/// solved exactly: top-`k` for modular objectives, otherwise enumeration of
/// the edge subsets of size `min(k, |edges(V)|)`, which suffices by
/// monotonicity. Vertex sets with the same `edges(V)` are evaluated once.
/// Ties go to the lexicographically smallest vertex set.
pub fn brute_force_opt<T: Real, O: Objective<T>>(
    graph: &ExchangeGraph<T>,
    k: usize,
    budget: &CommBudget<T>,
    objective: &O,
) -> Result<(T, Plan<T>)> {
    let mut walk = Walk::new(graph, budget)?;
    let mut reps: Vec<(Vec<VertexId>, Vec<u64>)> = Vec::new();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    walk.run(&mut |vs, bits| {
        if !seen.contains_key(bits) {
            seen.insert(bits.to_vec(), reps.len());
            reps.push((vs.to_vec(), bits.to_vec()));
        }
    })?;
    if k == 0 {
        return Ok((T::zero(), Plan::empty()));
    }

    let modular = objective.is_modular();
    if !modular {
        for (_, bits) in &reps {
            let m = bits.iter().map(|w| w.count_ones() as usize).sum::<usize>();
            let c = binomial(m, k.min(m));
            if c > ENUMERATION_LIMIT {
                return Err(too_large("brute-force edge enumeration", c));
            }
        }
    }
    let evaluated: Vec<(T, Vec<EdgeId>)> = reps
        .par_iter()
        .map(|(vs, bits)| -> Result<(T, Vec<EdgeId>)> {
            if modular {
                let g = g_modular(graph, vs, k)?;
                return Ok((g.value, g.witness));
            }
            let pool: Vec<EdgeId> = (0..graph.num_edges())
                .filter(|&e| bits[e / 64] >> (e % 64) & 1 == 1)
                .map(EdgeId)
                .collect();
            Ok(best_subset(&objective.state(), &pool, k.min(pool.len())))
        })
        .collect::<Result<_>>()?;

    let mut best = 0usize;
    for (i, (v, _)) in evaluated.iter().enumerate() {
        if *v > evaluated[best].0 {
            best = i;
        }
    }
    let (_, edges) = evaluated[best].clone();
    let value = if modular { evaluated[best].0 } else { objective.value(&edges)? };
    Ok((
        value,
        Plan {
            vertices: reps[best].0.clone(),
            edges,
            achieved_value: value,
        },
    ))
}
