//! Seeded synthetic instances: exchange graphs, Manhattan-style pose graphs
//! and Bernoulli ground truth.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with `seed_from_u64`, one
//! stream per stage (edges, probabilities, weights, poses, ground truth), so
//! changing one stage leaves the draws of the others untouched.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, ExchangeGraph, RobotId, Vertex, VertexId};
use crate::objective::{Candidate, Information, Pose, PoseEdge, PoseGraph};

const STREAM_EDGES: u64 = 0;
const STREAM_PROBABILITIES: u64 = 1;
const STREAM_WEIGHTS: u64 = 2;
const STREAM_POSES: u64 = 3;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

#[derive(Clone, Debug, PartialEq)]
pub enum EdgeCount {
    /// Fraction of all inter-robot vertex pairs.
    Density(f64),
    Exact(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProbabilityModel {
    /// i.i.d. U(0, 1).
    Uniform,
    /// Values assigned in edge order, cycling.
    Fixed(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightModel {
    Unit,
    /// i.i.d. U(lo, hi).
    Uniform { lo: f64, hi: f64 },
}

/// Shape of the generated pose graph. Only used to derive information
/// weights; nothing is estimated.
#[derive(Clone, Debug, PartialEq)]
pub struct PoseParams {
    /// Poses per robot; defaults to the number of vertices per robot.
    pub chain_length: Option<usize>,
    /// Steps between intersections of the street grid.
    pub grid: usize,
    pub sigma_xy: f64,
    pub sigma_theta: f64,
}

impl Default for PoseParams {
    fn default() -> Self {
        PoseParams {
            chain_length: None,
            grid: 4,
            sigma_xy: 0.1,
            sigma_theta: 0.05,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub num_robots: usize,
    pub vertices_per_robot: usize,
    pub edges: EdgeCount,
    pub probability: ProbabilityModel,
    pub weights: WeightModel,
    pub seed: u64,
    pub max_degree: Option<usize>,
    pub pose: PoseParams,
}

impl GenSpec {
    pub fn new(num_robots: usize, vertices_per_robot: usize, edges: EdgeCount, seed: u64) -> Self {
        GenSpec {
            num_robots,
            vertices_per_robot,
            edges,
            probability: ProbabilityModel::Uniform,
            weights: WeightModel::Unit,
            seed,
            max_degree: None,
            pose: PoseParams::default(),
        }
    }

    /// Number of vertex pairs owned by different robots.
    pub fn inter_robot_pairs(&self) -> usize {
        let n = self.num_robots * self.vertices_per_robot;
        let all = n * n.saturating_sub(1) / 2;
        let same = self.num_robots * self.vertices_per_robot * self.vertices_per_robot.saturating_sub(1) / 2;
        all - same
    }

    fn edge_count(&self) -> Result<usize> {
        let pairs = self.inter_robot_pairs();
        match self.edges {
            EdgeCount::Density(d) => {
                if !(0.0..=1.0).contains(&d) {
                    return Err(Error::InvalidArgument(format!("density {d} outside [0, 1]")));
                }
                Ok((d * pairs as f64).round() as usize)
            }
            EdgeCount::Exact(m) if m > pairs => Err(Error::InvalidArgument(format!(
                "{m} edges requested but only {pairs} inter-robot pairs exist"
            ))),
            EdgeCount::Exact(m) => Ok(m),
        }
    }

    fn check(&self) -> Result<()> {
        if self.num_robots < 2 {
            return Err(Error::InvalidArgument("need at least 2 robots".into()));
        }
        if self.vertices_per_robot == 0 {
            return Err(Error::InvalidArgument("need at least 1 vertex per robot".into()));
        }
        if let WeightModel::Uniform { lo, hi } = self.weights {
            if !(lo > 0.0 && hi >= lo) {
                return Err(Error::InvalidArgument(format!("weight range [{lo}, {hi}] must be positive")));
            }
        }
        if let ProbabilityModel::Fixed(ps) = &self.probability {
            if ps.is_empty() || ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::InvalidArgument("fixed probabilities must be non-empty and in [0, 1]".into()));
            }
        }
        if self.max_degree == Some(0) {
            return Err(Error::InvalidArgument("degree cap must be at least 1".into()));
        }
        if self.pose.grid == 0 || self.pose.chain_length == Some(0) {
            return Err(Error::InvalidArgument("pose grid and chain length must be positive".into()));
        }
        Ok(())
    }
}

/// Random r-partite exchange graph. Vertices are numbered robot by robot;
/// edges are sorted by `(u, v)` before ids are assigned.
pub fn generate_exchange_graph(spec: &GenSpec) -> Result<ExchangeGraph<f64>> {
    spec.check()?;
    let m = spec.edge_count()?;
    let vpr = spec.vertices_per_robot;
    let n = spec.num_robots * vpr;
    let pairs = sample_pairs(spec, m);

    let mut wr = rng(spec.seed, STREAM_WEIGHTS);
    let vertices = (0..n)
        .map(|i| Vertex {
            id: VertexId(i),
            robot: RobotId(i / vpr),
            weight: match spec.weights {
                WeightModel::Unit => 1.0,
                WeightModel::Uniform { lo, hi } if lo == hi => lo,
                WeightModel::Uniform { lo, hi } => wr.gen_range(lo..hi),
            },
        })
        .collect();

    let mut pr = rng(spec.seed, STREAM_PROBABILITIES);
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (u, v))| Edge {
            id: EdgeId(i),
            u: VertexId(u),
            v: VertexId(v),
            p: match &spec.probability {
                ProbabilityModel::Uniform => pr.gen::<f64>(),
                ProbabilityModel::Fixed(ps) => ps[i % ps.len()],
            },
        })
        .collect();
    let g = ExchangeGraph::new(spec.num_robots, vertices, edges)?;
    match spec.max_degree {
        Some(cap) => g.cap_degree(cap),
        None => Ok(g),
    }
}

fn sample_pairs(spec: &GenSpec, m: usize) -> Vec<(usize, usize)> {
    let vpr = spec.vertices_per_robot;
    let n = spec.num_robots * vpr;
    let total = spec.inter_robot_pairs();
    let mut r = rng(spec.seed, STREAM_EDGES);
    let mut out: Vec<(usize, usize)> = if 2 * m > total {
        let all: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u / vpr + 1) * vpr..n).map(move |v| (u, v)))
            .collect();
        index::sample(&mut r, total, m).into_iter().map(|i| all[i]).collect()
    } else {
        let mut seen = HashSet::with_capacity(m);
        let mut out = Vec::with_capacity(m);
        while out.len() < m {
            let a = r.gen_range(0..n);
            let b = r.gen_range(0..n);
            if a / vpr == b / vpr {
                continue;
            }
            let pair = (a.min(b), a.max(b));
            if seen.insert(pair) {
                out.push(pair);
            }
        }
        out
    };
    out.sort_unstable();
    out
}

/// The nine-observation, eight-candidate example used throughout the tests:
/// robots a, b, c own vertices 0-2, 3-5 and 6-8.
///
/// Its minimum vertex cover has three vertices, and under `(b, k) = (2, 3)`
/// the best plan broadcasts `{1, 4}` and verifies `e0, e2, e4`.
pub fn three_robot_example() -> ExchangeGraph<f64> {
    let edges = [
        (0, 4, 0.9),
        (1, 3, 0.3),
        (1, 7, 0.8),
        (1, 8, 0.2),
        (4, 6, 0.7),
        (1, 6, 0.4),
        (2, 4, 0.5),
        (5, 6, 0.6),
    ];
    ExchangeGraph::from_edge_list(3, 3, &edges).expect("example graph is valid")
}

/// Stand-in for a large single-sequence exchange graph: 5 robots with 180
/// observations each, sparse background candidates, and one revisited place
/// whose observation matches 41 others. Its maximum degree is 41.
pub fn hub_instance(seed: u64) -> ExchangeGraph<f64> {
    let mut spec = GenSpec::new(5, 180, EdgeCount::Exact(1500), seed);
    spec.max_degree = Some(12);
    let background = generate_exchange_graph(&spec).expect("valid spec");
    let hub = 0usize;
    let mut r = rng(seed, STREAM_EDGES + 100);
    let others: Vec<usize> = index::sample(&mut r, 720, 41).into_iter().map(|i| 180 + i).collect();
    let mut pairs: Vec<(usize, usize, f64)> = background
        .edges()
        .iter()
        .filter(|e| e.u.index() != hub)
        .map(|e| (e.u.index(), e.v.index(), e.p))
        .collect();
    for &o in &others {
        pairs.retain(|&(u, v, _)| !(u == hub && v == o));
        pairs.push((hub, o, r.gen::<f64>()));
    }
    pairs.sort_by_key(|&(u, v, _)| (u, v));
    ExchangeGraph::from_edge_list(5, 180, &pairs).expect("valid by construction")
}

/// Independent Bernoulli realization of every candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    pub realized: Vec<bool>,
}

impl GroundTruth {
    /// Number of realized loop closures among `edges`.
    pub fn true_matches(&self, edges: &[EdgeId]) -> usize {
        edges.iter().filter(|e| self.realized[e.index()]).count()
    }
}

pub fn sample_ground_truth(graph: &ExchangeGraph<f64>, seed: u64) -> GroundTruth {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    GroundTruth {
        realized: graph.edges().iter().map(|e| r.gen::<f64>() < e.p).collect(),
    }
}

/// Manhattan-grid trajectories, one odometry chain per robot, bridged
/// between consecutive robots' first poses. Vertex `j` of robot `r` observes
/// pose `r·L + ⌊j·L/n_r⌋` where `L` is the chain length and `n_r` the
/// robot's vertex count.
pub fn generate_pose_graph(spec: &GenSpec, graph: &ExchangeGraph<f64>) -> Result<PoseGraph<f64>> {
    spec.check()?;
    let robots = graph.num_robots();
    let mut owned = vec![Vec::new(); robots];
    for v in graph.vertices() {
        owned[v.robot.index()].push(v.id);
    }
    let len = spec
        .pose
        .chain_length
        .unwrap_or_else(|| owned.iter().map(Vec::len).max().unwrap_or(1).max(1));
    let info = Information::diagonal(
        1.0 / (spec.pose.sigma_xy * spec.pose.sigma_xy),
        1.0 / (spec.pose.sigma_xy * spec.pose.sigma_xy),
        1.0 / (spec.pose.sigma_theta * spec.pose.sigma_theta),
    );

    let mut r = rng(spec.seed, STREAM_POSES);
    let mut poses = Vec::with_capacity(robots * len);
    for robot in 0..robots {
        let (mut x, mut y) = (0.0, 2.0 * spec.pose.grid as f64 * robot as f64);
        let mut heading = 0usize;
        for step in 0..len {
            poses.push(Pose::new(x, y, heading as f64 * std::f64::consts::FRAC_PI_2));
            if step > 0 && step % spec.pose.grid == 0 {
                heading = (heading + [0, 1, 3][r.gen_range(0..3)]) % 4;
            }
            let (dx, dy) = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][heading];
            x += dx;
            y += dy;
        }
    }

    let mut base_edges = Vec::new();
    let link = |from: usize, to: usize, poses: &[Pose<f64>]| PoseEdge {
        from,
        to,
        measurement: poses[from].between(&poses[to]),
        information: info,
        weight: 1.0,
    };
    for robot in 0..robots {
        for i in 0..len.saturating_sub(1) {
            base_edges.push(link(robot * len + i, robot * len + i + 1, &poses));
        }
    }
    for robot in 0..robots.saturating_sub(1) {
        base_edges.push(link(robot * len, (robot + 1) * len, &poses));
    }

    let mut pose_of = vec![0; graph.num_vertices()];
    for (robot, vs) in owned.iter().enumerate() {
        for (j, v) in vs.iter().enumerate() {
            pose_of[v.index()] = robot * len + j * len / vs.len();
        }
    }
    let candidates = graph
        .edges()
        .iter()
        .map(|e| Candidate {
            edge: e.id,
            from: pose_of[e.u.index()],
            to: pose_of[e.v.index()],
            weight: 1.0,
            information: info,
        })
        .collect();
    let pg = PoseGraph {
        poses,
        anchor: 0,
        base_edges,
        candidates,
    };
    pg.validate_for(graph)?;
    Ok(pg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_shape() {
        let g = three_robot_example();
        assert!(g.validate().is_empty());
        assert_eq!((g.num_robots(), g.num_vertices(), g.num_edges()), (3, 9, 8));
    }

    #[test]
    fn generation_is_deterministic_and_valid() {
        let spec = GenSpec::new(5, 40, EdgeCount::Density(0.05), 7);
        let a = generate_exchange_graph(&spec).unwrap();
        let b = generate_exchange_graph(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().is_empty());
        assert_eq!(a.num_edges(), (0.05 * spec.inter_robot_pairs() as f64).round() as usize);
    }

    #[test]
    fn dense_request_uses_enumeration() {
        let spec = GenSpec::new(3, 3, EdgeCount::Exact(25), 1);
        let g = generate_exchange_graph(&spec).unwrap();
        assert_eq!(g.num_edges(), 25);
        assert!(g.validate().is_empty());
        let full = GenSpec::new(3, 3, EdgeCount::Exact(27), 1);
        assert_eq!(generate_exchange_graph(&full).unwrap().num_edges(), 27);
        let over = GenSpec::new(3, 3, EdgeCount::Exact(28), 1);
        assert!(generate_exchange_graph(&over).is_err());
        let bad = GenSpec::new(3, 3, EdgeCount::Density(1.5), 1);
        assert!(generate_exchange_graph(&bad).is_err());
    }

    #[test]
    fn degree_cap_is_respected() {
        let mut spec = GenSpec::new(3, 10, EdgeCount::Density(0.4), 3);
        spec.max_degree = Some(5);
        assert!(generate_exchange_graph(&spec).unwrap().max_degree() <= 5);
    }

    #[test]
    fn fixed_probabilities_cycle() {
        let mut spec = GenSpec::new(2, 4, EdgeCount::Exact(5), 0);
        spec.probability = ProbabilityModel::Fixed(vec![1.0, 0.5]);
        let g = generate_exchange_graph(&spec).unwrap();
        let ps: Vec<f64> = g.edges().iter().map(|e| e.p).collect();
        assert_eq!(ps, vec![1.0, 0.5, 1.0, 0.5, 1.0]);
    }

    #[test]
    fn hub_instance_degrees() {
        let g = hub_instance(0);
        assert_eq!(g.max_degree(), 41);
        assert_eq!(g.cap_degree(5).unwrap().max_degree(), 5);
    }

    #[test]
    fn extreme_probabilities_realize_deterministically() {
        let mut spec = GenSpec::new(3, 4, EdgeCount::Exact(12), 2);
        spec.probability = ProbabilityModel::Fixed(vec![1.0]);
        let g = generate_exchange_graph(&spec).unwrap();
        assert!(sample_ground_truth(&g, 9).realized.iter().all(|&t| t));
        spec.probability = ProbabilityModel::Fixed(vec![0.0]);
        let g = generate_exchange_graph(&spec).unwrap();
        assert!(sample_ground_truth(&g, 9).realized.iter().all(|&t| !t));
    }

    #[test]
    fn monte_carlo_mean_matches_expectation() {
        let g = three_robot_example();
        let plan = [EdgeId(0), EdgeId(2), EdgeId(4)];
        let mean_p: f64 = plan.iter().map(|&e| g.p(e)).sum();
        let var: f64 = plan.iter().map(|&e| g.p(e) * (1.0 - g.p(e))).sum();
        let trials = 10_000;
        let total: usize = (0..trials).map(|s| sample_ground_truth(&g, s).true_matches(&plan)).sum();
        let mean = total as f64 / trials as f64;
        assert!((mean - mean_p).abs() <= 3.0 * (var / trials as f64).sqrt());
    }

    #[test]
    fn two_robot_chain_is_connected() {
        let mut spec = GenSpec::new(2, 5, EdgeCount::Exact(4), 11);
        spec.pose.chain_length = Some(5);
        let g = generate_exchange_graph(&spec).unwrap();
        let pg = generate_pose_graph(&spec, &g).unwrap();
        assert_eq!(pg.num_poses(), 10);
        assert!(pg.is_connected());
        assert_eq!(pg.candidates.len(), g.num_edges());
        for (i, c) in pg.candidates.iter().enumerate() {
            assert_eq!(c.edge, EdgeId(i));
        }
    }
}
