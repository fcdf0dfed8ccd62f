use std::cmp::Ordering;

use super::{distinct_edges, EdgeSetState, Objective, ObjectiveKind};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, ExchangeGraph, VertexId};
use crate::scalar::Real;

/// `Σ p(e)` over the distinct edges of `edges`, summed in the given order.
pub fn modular_value<T: Real>(graph: &ExchangeGraph<T>, edges: &[EdgeId]) -> Result<T> {
    Ok(distinct_edges(graph.num_edges(), edges)?
        .into_iter()
        .fold(T::zero(), |acc, e| acc + graph.p(e)))
}

/// Orders edges by decreasing probability, ties by lower id.
pub(crate) fn by_probability<T: Real>(graph: &ExchangeGraph<T>) -> impl Fn(&EdgeId, &EdgeId) -> Ordering + '_ {
    move |a, b| {
        graph
            .p(*b)
            .partial_cmp(&graph.p(*a))
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(b))
    }
}

/// Value of the inner top-`k` problem for a fixed broadcast set, with a
/// witness edge set attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct NestedValue<T> {
    pub value: T,
    /// At most `k` edges, in decreasing probability order.
    pub witness: Vec<EdgeId>,
}

/// Top-`k` prefix of `sorted` and its sum, accumulated in order.
fn prefix<T: Real>(graph: &ExchangeGraph<T>, sorted: &[EdgeId], k: usize) -> NestedValue<T> {
    let witness: Vec<EdgeId> = sorted.iter().take(k).copied().collect();
    let value = witness.iter().fold(T::zero(), |acc, &e| acc + graph.p(e));
    NestedValue { value, witness }
}

/// `g(V)`: the best expected number of true matches among at most `k`
/// edges incident to `vs`.
pub fn g_modular<T: Real>(graph: &ExchangeGraph<T>, vs: &[VertexId], k: usize) -> Result<NestedValue<T>> {
    let mut inc = graph.edges_incident(vs)?;
    inc.sort_by(by_probability(graph));
    Ok(prefix(graph, &inc, k))
}

/// Expected number of true loop closures.
#[derive(Clone, Copy, Debug)]
pub struct Modular<'g, T> {
    graph: &'g ExchangeGraph<T>,
}

impl<'g, T: Real> Modular<'g, T> {
    pub fn new(graph: &'g ExchangeGraph<T>) -> Self {
        Modular { graph }
    }
}

impl<'g, T: Real> Objective<T> for Modular<'g, T> {
    type State<'a>
        = ModularState<'a, T>
    where
        Self: 'a;

    fn kind(&self) -> ObjectiveKind {
        ObjectiveKind::Modular
    }

    fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    fn value(&self, edges: &[EdgeId]) -> Result<T> {
        modular_value(self.graph, edges)
    }

    fn marginal(&self, edges: &[EdgeId], e: EdgeId) -> Result<T> {
        self.graph.check_edges(edges)?;
        self.graph.edge(e)?;
        if edges.contains(&e) {
            return Err(Error::EdgeAlreadyPresent(e));
        }
        Ok(self.graph.p(e))
    }

    fn state(&self) -> ModularState<'_, T> {
        ModularState {
            graph: self.graph,
            present: vec![false; self.graph.num_edges()],
            value: T::zero(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModularState<'a, T> {
    graph: &'a ExchangeGraph<T>,
    present: Vec<bool>,
    value: T,
}

impl<T: Real> EdgeSetState<T> for ModularState<'_, T> {
    fn value(&self) -> T {
        self.value
    }

    fn contains(&self, e: EdgeId) -> bool {
        self.present[e.index()]
    }

    fn gain(&self, es: &[EdgeId]) -> T {
        let mut seen: Vec<EdgeId> = Vec::with_capacity(es.len());
        es.iter().fold(T::zero(), |acc, &e| {
            if self.present[e.index()] || seen.contains(&e) {
                acc
            } else {
                seen.push(e);
                acc + self.graph.p(e)
            }
        })
    }

    fn insert(&mut self, es: &[EdgeId]) {
        for &e in es {
            if !self.present[e.index()] {
                self.present[e.index()] = true;
                self.value = self.value + self.graph.p(e);
            }
        }
    }
}

/// Incremental evaluator of `g` over growing vertex sets.
///
/// Values are bit-identical to [`g_modular`] on the same vertex set: the
/// retained top-`k` list is the `k`-prefix of the sorted incident edges and
/// is always summed in that order.
#[derive(Clone, Debug)]
pub struct NestedState<'a, T> {
    graph: &'a ExchangeGraph<T>,
    k: usize,
    covered: Vec<bool>,
    top: Vec<EdgeId>,
    value: T,
}

impl<'a, T: Real> NestedState<'a, T> {
    pub fn new(graph: &'a ExchangeGraph<T>, k: usize) -> Self {
        NestedState {
            graph,
            k,
            covered: vec![false; graph.num_edges()],
            top: Vec::new(),
            value: T::zero(),
        }
    }

    pub fn value(&self) -> T {
        self.value
    }

    /// Current witness: the top-`k` covered edges.
    pub fn witness(&self) -> &[EdgeId] {
        &self.top
    }

    fn merged(&self, v: VertexId) -> Vec<EdgeId> {
        let mut fresh: Vec<EdgeId> = self
            .graph
            .incident(v)
            .iter()
            .copied()
            .filter(|e| !self.covered[e.index()])
            .collect();
        let cmp = by_probability(self.graph);
        fresh.sort_by(&cmp);
        let mut out = Vec::with_capacity(self.k.min(self.top.len() + fresh.len()));
        let (mut i, mut j) = (0, 0);
        while out.len() < self.k && (i < self.top.len() || j < fresh.len()) {
            let take_top = j >= fresh.len() || (i < self.top.len() && cmp(&self.top[i], &fresh[j]) == Ordering::Less);
            if take_top {
                out.push(self.top[i]);
                i += 1;
            } else {
                out.push(fresh[j]);
                j += 1;
            }
        }
        out
    }

    /// `g(V ∪ {v})`.
    pub fn value_with(&self, v: VertexId) -> T {
        prefix(self.graph, &self.merged(v), self.k).value
    }

    /// `g(V ∪ {v}) − g(V)`.
    pub fn gain(&self, v: VertexId) -> T {
        self.value_with(v) - self.value
    }

    pub fn insert(&mut self, v: VertexId) {
        let top = self.merged(v);
        for &e in self.graph.incident(v) {
            self.covered[e.index()] = true;
        }
        let p = prefix(self.graph, &top, self.k);
        self.top = p.witness;
        self.value = p.value;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::three_robot_example;

    fn fan() -> ExchangeGraph {
        ExchangeGraph::from_edge_list(2, 3, &[(0, 3, 0.9), (0, 4, 0.8), (0, 5, 0.1), (1, 3, 0.5)]).unwrap()
    }

    #[test]
    fn modular_values() {
        let g = fan();
        assert_eq!(modular_value(&g, &[]).unwrap(), 0.0);
        let h = ExchangeGraph::from_edge_list(2, 1, &[(0, 1, 0.5)]).unwrap();
        assert_eq!(modular_value(&h, &[EdgeId(0)]).unwrap(), 0.5);
        let q = ExchangeGraph::from_edge_list(2, 2, &[(0, 2, 0.5), (1, 3, 0.25)]).unwrap();
        assert_eq!(modular_value(&q, &[EdgeId(0), EdgeId(1)]).unwrap(), 0.75);
        assert_eq!(modular_value(&q, &[EdgeId(0), EdgeId(0)]).unwrap(), 0.5);
        assert!(modular_value(&q, &[EdgeId(2)]).is_err());

        let ex = three_robot_example();
        let ones: Vec<_> = ex.edges().iter().map(|e| (e.u.0, e.v.0, 1.0)).collect();
        let full = ExchangeGraph::from_edge_list(3, 3, &ones).unwrap();
        let all: Vec<_> = full.edge_ids().collect();
        assert_eq!(modular_value(&full, &all).unwrap(), 8.0);
    }

    #[test]
    fn nested_top_k() {
        let g = fan();
        assert_eq!(g_modular(&g, &[], 3).unwrap(), NestedValue { value: 0.0, witness: vec![] });
        let nv = g_modular(&g, &[VertexId(0)], 2).unwrap();
        assert!((nv.value - 1.7).abs() < 1e-15);
        assert_eq!(nv.witness, vec![EdgeId(0), EdgeId(1)]);
        let all = g_modular(&g, &[VertexId(0), VertexId(1)], 10).unwrap();
        assert_eq!(all.value, modular_value(&g, &g.edges_incident(&[VertexId(0), VertexId(1)]).unwrap()).unwrap());
    }

    #[test]
    fn ties_prefer_lower_ids() {
        let g = ExchangeGraph::from_edge_list(2, 3, &[(0, 3, 0.5), (0, 4, 0.5), (0, 5, 0.5)]).unwrap();
        assert_eq!(g_modular(&g, &[VertexId(0)], 2).unwrap().witness, vec![EdgeId(0), EdgeId(1)]);
    }

    #[test]
    fn incremental_nested_state_is_bit_identical() {
        let g = three_robot_example();
        for k in 0..=9 {
            let mut st = NestedState::new(&g, k);
            let mut vs = Vec::new();
            for v in [4usize, 1, 6, 0, 8] {
                let v = VertexId(v);
                let predicted = st.value_with(v);
                st.insert(v);
                vs.push(v);
                let fresh = g_modular(&g, &vs, k).unwrap();
                assert_eq!(predicted, fresh.value);
                assert_eq!(st.value(), fresh.value);
                assert_eq!(st.witness(), fresh.witness.as_slice());
            }
        }
    }

    #[test]
    fn modular_marginal_is_probability() {
        let g = fan();
        let f = Modular::new(&g);
        assert_eq!(f.marginal(&[EdgeId(1)], EdgeId(3)).unwrap(), 0.5);
        assert!(matches!(f.marginal(&[EdgeId(1)], EdgeId(1)), Err(Error::EdgeAlreadyPresent(_))));
        let mut st = f.state();
        assert_eq!(st.gain(&[EdgeId(0), EdgeId(0)]), 0.9);
        st.insert(&[EdgeId(0)]);
        assert!(st.contains(EdgeId(0)));
        assert_eq!(st.gain(&[EdgeId(0), EdgeId(3)]), 0.5);
    }
}
