//! Exchange graphs, communication budgets and plans.
//!
//! An exchange graph is a simple undirected r-partite graph. Vertices are
//! observations owned by robots, weighted by their transmission size; edges
//! are potential inter-robot loop closures weighted by the probability that
//! they are true matches. An edge can be verified once at least one of its
//! endpoints has been broadcast, so every selected edge set must be covered by
//! the selected vertex set.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

macro_rules! id_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(
            Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub usize);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl From<usize> for $name {
            fn from(i: usize) -> Self {
                $name(i)
            }
        }
    };
}

id_type!(
    /// Dense 0-based vertex index.
    VertexId
);
id_type!(
    /// Dense 0-based edge index.
    EdgeId
);
id_type!(RobotId);

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex<T = f64> {
    pub id: VertexId,
    pub robot: RobotId,
    /// Observation size in abstract units (bytes, keypoints, ...).
    pub weight: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<T = f64> {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    /// Probability that the potential loop closure is a true match.
    pub p: T,
}

impl<T> Edge<T> {
    pub fn other(&self, w: VertexId) -> VertexId {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }
}

/// A structural problem found by [`ExchangeGraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    TooFewRobots(usize),
    VertexIdNotDense { position: usize, id: VertexId },
    EdgeIdNotDense { position: usize, id: EdgeId },
    RobotOutOfRange { vertex: VertexId, robot: RobotId },
    NonPositiveWeight { vertex: VertexId },
    UnknownEndpoint { edge: EdgeId, vertex: VertexId },
    SelfLoop { edge: EdgeId },
    NotRPartite { edge: EdgeId, robot: RobotId },
    ProbabilityOutOfRange { edge: EdgeId },
    DuplicateEdge { edge: EdgeId, first: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewRobots(r) => write!(f, "need at least 2 robots, got {r}"),
            Violation::VertexIdNotDense { position, id } => {
                write!(f, "vertex at position {position} has id {id}")
            }
            Violation::EdgeIdNotDense { position, id } => {
                write!(f, "edge at position {position} has id {id}")
            }
            Violation::RobotOutOfRange { vertex, robot } => {
                write!(f, "vertex {vertex}: robot {robot} out of range")
            }
            Violation::NonPositiveWeight { vertex } => {
                write!(f, "vertex {vertex}: weight must be positive")
            }
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {edge}: unknown endpoint {vertex}")
            }
            Violation::SelfLoop { edge } => write!(f, "edge {edge}: self-loop"),
            Violation::NotRPartite { edge, robot } => {
                write!(f, "edge {edge}: not r-partite (both endpoints on robot {robot})")
            }
            Violation::ProbabilityOutOfRange { edge } => {
                write!(f, "edge {edge}: probability out of range")
            }
            Violation::DuplicateEdge { edge, first } => {
                write!(f, "edge {edge}: duplicate of edge {first}")
            }
        }
    }
}

/// Immutable r-partite exchange graph with precomputed incidence lists.
#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeGraph<T = f64> {
    num_robots: usize,
    vertices: Vec<Vertex<T>>,
    edges: Vec<Edge<T>>,
    incidence: Vec<Vec<EdgeId>>,
}

impl<T: Real> ExchangeGraph<T> {
    /// Builds and validates a graph.
    pub fn new(num_robots: usize, vertices: Vec<Vertex<T>>, edges: Vec<Edge<T>>) -> Result<Self> {
        let g = Self::new_unchecked(num_robots, vertices, edges);
        let violations = g.validate();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidGraph(violations))
        }
    }

    /// Builds a graph without validating it. Out-of-range endpoints are left
    /// out of the incidence lists; [`validate`](Self::validate) reports them.
    pub fn new_unchecked(num_robots: usize, vertices: Vec<Vertex<T>>, edges: Vec<Edge<T>>) -> Self {
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (pos, e) in edges.iter().enumerate() {
            for w in [e.u, e.v] {
                if let Some(list) = incidence.get_mut(w.index()) {
                    if list.last() != Some(&EdgeId(pos)) {
                        list.push(EdgeId(pos));
                    }
                }
            }
        }
        ExchangeGraph {
            num_robots,
            vertices,
            edges,
            incidence,
        }
    }

    /// Same graph over another scalar type.
    pub fn cast<U: Real>(&self) -> ExchangeGraph<U> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id,
                robot: v.robot,
                weight: U::of(v.weight.to_f64_value()),
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                id: e.id,
                u: e.u,
                v: e.v,
                p: U::of(e.p.to_f64_value()),
            })
            .collect();
        ExchangeGraph::new_unchecked(self.num_robots, vertices, edges)
    }

    /// Graph with `per_robot` unit-weight vertices per robot and the given
    /// `(u, v, p)` edges, numbered in order.
    pub fn from_edge_list(num_robots: usize, per_robot: usize, edges: &[(usize, usize, T)]) -> Result<Self> {
        let vertices = (0..num_robots * per_robot)
            .map(|i| Vertex {
                id: VertexId(i),
                robot: RobotId(i / per_robot.max(1)),
                weight: T::one(),
            })
            .collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v, p))| Edge {
                id: EdgeId(i),
                u: VertexId(u),
                v: VertexId(v),
                p,
            })
            .collect();
        Self::new(num_robots, vertices, edges)
    }

    /// Every invariant violation; empty iff the graph is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.num_robots < 2 {
            out.push(Violation::TooFewRobots(self.num_robots));
        }
        for (pos, v) in self.vertices.iter().enumerate() {
            if v.id.index() != pos {
                out.push(Violation::VertexIdNotDense { position: pos, id: v.id });
            }
            if v.robot.index() >= self.num_robots {
                out.push(Violation::RobotOutOfRange {
                    vertex: v.id,
                    robot: v.robot,
                });
            }
            if !(v.weight > T::zero()) {
                out.push(Violation::NonPositiveWeight { vertex: v.id });
            }
        }
        let mut seen = std::collections::HashMap::new();
        for (pos, e) in self.edges.iter().enumerate() {
            if e.id.index() != pos {
                out.push(Violation::EdgeIdNotDense { position: pos, id: e.id });
            }
            let mut endpoints_ok = true;
            for w in [e.u, e.v] {
                if w.index() >= self.vertices.len() {
                    out.push(Violation::UnknownEndpoint { edge: e.id, vertex: w });
                    endpoints_ok = false;
                }
            }
            if e.u == e.v {
                out.push(Violation::SelfLoop { edge: e.id });
            } else if endpoints_ok {
                let ru = self.vertices[e.u.index()].robot;
                if ru == self.vertices[e.v.index()].robot {
                    out.push(Violation::NotRPartite { edge: e.id, robot: ru });
                }
                let key = (e.u.min(e.v), e.u.max(e.v));
                if let Some(&first) = seen.get(&key) {
                    out.push(Violation::DuplicateEdge { edge: e.id, first });
                } else {
                    seen.insert(key, e.id);
                }
            }
            if !(e.p >= T::zero() && e.p <= T::one()) {
                out.push(Violation::ProbabilityOutOfRange { edge: e.id });
            }
        }
        out
    }

    pub fn num_robots(&self) -> usize {
        self.num_robots
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex<T>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn vertex(&self, v: VertexId) -> Result<&Vertex<T>> {
        self.vertices.get(v.index()).ok_or(Error::UnknownVertex(v))
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge<T>> {
        self.edges.get(e.index()).ok_or(Error::UnknownEdge(e))
    }

    pub fn p(&self, e: EdgeId) -> T {
        self.edges[e.index()].p
    }

    pub fn weight(&self, v: VertexId) -> T {
        self.vertices[v.index()].weight
    }

    /// Edges incident to `v`, ascending.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v.index()].len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn check_vertices(&self, vs: &[VertexId]) -> Result<()> {
        match vs.iter().find(|v| v.index() >= self.vertices.len()) {
            Some(&v) => Err(Error::UnknownVertex(v)),
            None => Ok(()),
        }
    }

    pub fn check_edges(&self, es: &[EdgeId]) -> Result<()> {
        match es.iter().find(|e| e.index() >= self.edges.len()) {
            Some(&e) => Err(Error::UnknownEdge(e)),
            None => Ok(()),
        }
    }

    /// All edges with at least one endpoint in `vs`, ascending by id.
    pub fn edges_incident(&self, vs: &[VertexId]) -> Result<Vec<EdgeId>> {
        self.check_vertices(vs)?;
        let mut mark = vec![false; self.edges.len()];
        for &v in vs {
            for &e in self.incident(v) {
                mark[e.index()] = true;
            }
        }
        Ok(mark
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(EdgeId(i)))
            .collect())
    }

    /// True iff every edge in `es` has an endpoint in `vs`.
    pub fn is_cover(&self, vs: &[VertexId], es: &[EdgeId]) -> Result<bool> {
        self.check_vertices(vs)?;
        self.check_edges(es)?;
        let mut inside = vec![false; self.vertices.len()];
        for &v in vs {
            inside[v.index()] = true;
        }
        Ok(es.iter().all(|&e| {
            let e = &self.edges[e.index()];
            inside[e.u.index()] || inside[e.v.index()]
        }))
    }

    /// Maximum vertex degree; 0 for an edgeless graph.
    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Subgraph in which no vertex keeps more than `max` incident edges.
    ///
    /// Edges are admitted in order of decreasing probability (ties by
    /// lower id) while both endpoints have residual degree. Kept edges are
    /// renumbered densely in their original order.
    pub fn cap_degree(&self, max: usize) -> Result<Self> {
        if max == 0 {
            return Err(Error::InvalidArgument("degree cap must be at least 1".into()));
        }
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by(|&a, &b| {
            let (ea, eb) = (&self.edges[a], &self.edges[b]);
            eb.p.partial_cmp(&ea.p)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut residual = vec![max; self.vertices.len()];
        let mut keep = vec![false; self.edges.len()];
        for i in order {
            let e = &self.edges[i];
            if residual[e.u.index()] > 0 && residual[e.v.index()] > 0 {
                residual[e.u.index()] -= 1;
                residual[e.v.index()] -= 1;
                keep[i] = true;
            }
        }
        let edges = self
            .edges
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .enumerate()
            .map(|(i, (e, _))| Edge {
                id: EdgeId(i),
                ..e.clone()
            })
            .collect();
        Ok(Self::new_unchecked(self.num_robots, self.vertices.clone(), edges))
    }

    /// Minimum-cardinality (or minimum-weight) vertex cover of `es`.
    ///
    /// Exact search by branching on the first uncovered edge: either its
    /// lower endpoint joins the cover, or it is excluded and the other
    /// endpoint joins. Ties are broken towards the lexicographically smallest
    /// sorted id list. At most 25 distinct endpoints are accepted.
    pub fn min_vertex_cover_bruteforce(&self, es: &[EdgeId], weighted: bool) -> Result<Vec<VertexId>> {
        const LIMIT: usize = 25;
        self.check_edges(es)?;
        let mut endpoints: Vec<VertexId> = es
            .iter()
            .flat_map(|&e| [self.edges[e.index()].u, self.edges[e.index()].v])
            .collect();
        endpoints.sort();
        endpoints.dedup();
        if endpoints.len() > LIMIT {
            return Err(Error::TooLarge {
                what: "exact cover",
                size: endpoints.len() as u128,
                limit: LIMIT as u128,
            });
        }
        let pairs: Vec<(VertexId, VertexId)> = es
            .iter()
            .map(|&e| {
                let e = &self.edges[e.index()];
                (e.u.min(e.v), e.u.max(e.v))
            })
            .collect();
        let cost = |v: VertexId| if weighted { self.weight(v) } else { T::one() };

        struct Search<'a, T, F> {
            pairs: &'a [(VertexId, VertexId)],
            cost: F,
            best: Option<(T, Vec<VertexId>)>,
        }
        impl<T: Real, F: Fn(VertexId) -> T> Search<'_, T, F> {
            fn better(&self, c: T, set: &[VertexId]) -> bool {
                match &self.best {
                    None => true,
                    Some((bc, bs)) => c < *bc - T::eps() || ((c - *bc).abs() <= T::eps() && set < bs.as_slice()),
                }
            }
            fn run(&mut self, chosen: &mut Vec<VertexId>, banned: &mut Vec<VertexId>, c: T) {
                if let Some((bc, _)) = &self.best {
                    if c > *bc + T::eps() {
                        return;
                    }
                }
                let next = self
                    .pairs
                    .iter()
                    .find(|(u, v)| !chosen.contains(u) && !chosen.contains(v));
                let Some(&(u, v)) = next else {
                    let mut set = chosen.clone();
                    set.sort();
                    if self.better(c, &set) {
                        self.best = Some((c, set));
                    }
                    return;
                };
                if !banned.contains(&u) {
                    chosen.push(u);
                    let cu = (self.cost)(u);
                    self.run(chosen, banned, c + cu);
                    chosen.pop();
                }
                if !banned.contains(&v) {
                    banned.push(u);
                    chosen.push(v);
                    let cv = (self.cost)(v);
                    self.run(chosen, banned, c + cv);
                    chosen.pop();
                    banned.pop();
                }
            }
        }

        let mut search = Search {
            pairs: &pairs,
            cost,
            best: None,
        };
        search.run(&mut Vec::new(), &mut Vec::new(), T::zero());
        Ok(search.best.map(|(_, s)| s).unwrap_or_default())
    }
}

/// Which of the three communication-cost regimes a budget belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Uniform cost, total cardinality limit.
    Tu,
    /// Non-uniform cost, total weight (knapsack) limit.
    Tn,
    /// Uniform cost, per-block cardinality limits (partition matroid).
    Iu,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Tu => "tu",
            Regime::Tn => "tn",
            Regime::Iu => "iu",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tu" => Ok(Regime::Tu),
            "tn" => Ok(Regime::Tn),
            "iu" => Ok(Regime::Iu),
            _ => Err(Error::InvalidArgument(format!("unknown regime '{s}'"))),
        }
    }
}

/// Per-block cardinality limits over a partition of the vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockLimits {
    pub blocks: Vec<Vec<VertexId>>,
    pub limits: Vec<usize>,
}

impl BlockLimits {
    pub fn new(blocks: Vec<Vec<VertexId>>, limits: Vec<usize>) -> Result<Self> {
        if blocks.len() != limits.len() {
            return Err(Error::InvalidBudget(format!(
                "{} blocks but {} limits",
                blocks.len(),
                limits.len()
            )));
        }
        let mut seen = HashSet::new();
        for v in blocks.iter().flatten() {
            if !seen.insert(*v) {
                return Err(Error::InvalidBudget(format!("vertex {v} appears in two blocks")));
            }
        }
        Ok(BlockLimits { blocks, limits })
    }

    /// One block per robot.
    pub fn by_robot<T: Real>(graph: &ExchangeGraph<T>, limits: Vec<usize>) -> Result<Self> {
        let mut blocks = vec![Vec::new(); graph.num_robots()];
        for v in graph.vertices() {
            blocks[v.robot.index()].push(v.id);
        }
        Self::new(blocks, limits)
    }

    /// Block index of every vertex of `graph`, or the first vertex not in any block.
    pub fn block_of<T: Real>(&self, graph: &ExchangeGraph<T>) -> Result<Vec<usize>> {
        let mut of = vec![usize::MAX; graph.num_vertices()];
        for (i, block) in self.blocks.iter().enumerate() {
            for &v in block {
                graph.vertex(v)?;
                of[v.index()] = i;
            }
        }
        match of.iter().position(|&b| b == usize::MAX) {
            Some(v) => Err(Error::VertexOutsideBlocks(VertexId(v))),
            None => Ok(of),
        }
    }
}

/// Communication budget on the broadcast vertex set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommBudget<T = f64> {
    /// `|V| <= b`
    Tu(usize),
    /// `sum of w(v) over V <= b`
    Tn(T),
    /// `|V ∩ block_i| <= b_i` for every block
    Iu(BlockLimits),
}

impl<T: Real> CommBudget<T> {
    pub fn regime(&self) -> Regime {
        match self {
            CommBudget::Tu(_) => Regime::Tu,
            CommBudget::Tn(_) => Regime::Tn,
            CommBudget::Iu(_) => Regime::Iu,
        }
    }

    /// Budget of `regime` with level `b`: the cardinality or weight limit,
    /// or the same limit for every robot under `IU`.
    pub fn uniform(regime: Regime, b: f64, graph: &ExchangeGraph<T>) -> Result<Self> {
        let whole = || {
            if b >= 0.0 && b.fract() == 0.0 && b.is_finite() {
                Ok(b as usize)
            } else {
                Err(Error::InvalidBudget(format!("{} budget must be a non-negative integer, got {b}", regime.name())))
            }
        };
        match regime {
            Regime::Tu => Ok(CommBudget::Tu(whole()?)),
            Regime::Tn if b >= 0.0 && b.is_finite() => Ok(CommBudget::Tn(T::of(b))),
            Regime::Tn => Err(Error::InvalidBudget(format!("knapsack budget must be non-negative, got {b}"))),
            Regime::Iu => Ok(CommBudget::Iu(BlockLimits::by_robot(graph, vec![whole()?; graph.num_robots()])?)),
        }
    }

    /// The cardinality limit under the TU regime.
    pub fn cardinality(&self) -> Option<usize> {
        match *self {
            CommBudget::Tu(b) => Some(b),
            _ => None,
        }
    }

    /// Evaluates the regime's feasibility predicate for `vs`.
    pub fn is_satisfied(&self, graph: &ExchangeGraph<T>, vs: &[VertexId]) -> Result<bool> {
        graph.check_vertices(vs)?;
        Ok(match self {
            CommBudget::Tu(b) => vs.len() <= *b,
            CommBudget::Tn(b) => {
                let total = vs.iter().fold(T::zero(), |acc, &v| acc + graph.weight(v));
                total <= *b + T::eps()
            }
            CommBudget::Iu(limits) => {
                let of = limits.block_of(graph)?;
                let mut count = vec![0usize; limits.limits.len()];
                for &v in vs {
                    count[of[v.index()]] += 1;
                }
                count.iter().zip(&limits.limits).all(|(c, l)| c <= l)
            }
        })
    }
}

/// A selection of broadcast vertices and verified edges.
#[derive(Clone, Debug, PartialEq)]
pub struct Plan<T = f64> {
    /// Broadcast vertices in selection order.
    pub vertices: Vec<VertexId>,
    /// Verified edges in selection order.
    pub edges: Vec<EdgeId>,
    pub achieved_value: T,
}

impl<T: Real> Default for Plan<T> {
    fn default() -> Self {
        Plan {
            vertices: Vec::new(),
            edges: Vec::new(),
            achieved_value: T::zero(),
        }
    }
}

impl<T: Real> Plan<T> {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Checks the computation budget, the cover witness and the
    /// communication budget. Repeated ids make a plan infeasible.
    pub fn is_feasible(&self, graph: &ExchangeGraph<T>, k: usize, cb: &CommBudget<T>) -> Result<bool> {
        graph.check_vertices(&self.vertices)?;
        graph.check_edges(&self.edges)?;
        let distinct_v: HashSet<_> = self.vertices.iter().collect();
        let distinct_e: HashSet<_> = self.edges.iter().collect();
        if distinct_v.len() != self.vertices.len() || distinct_e.len() != self.edges.len() {
            return Ok(false);
        }
        Ok(self.edges.len() <= k
            && graph.is_cover(&self.vertices, &self.edges)?
            && cb.is_satisfied(graph, &self.vertices)?)
    }
}
