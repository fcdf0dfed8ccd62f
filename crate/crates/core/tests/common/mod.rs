//! Instance generators and an exhaustive optimum that shares no code with
//! the library's planners or certifiers.

#![allow(dead_code)]

use loopclose::datagen::{generate_exchange_graph, generate_pose_graph, EdgeCount, GenSpec, WeightModel};
use loopclose::objective::PoseGraph;
use loopclose::{BlockLimits, CommBudget, EdgeId, Graph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random graph with at most `max_vertices` vertices and `max_edges` edges.
pub fn small_graph(r: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize, weighted: bool) -> Graph {
    loop {
        let robots = r.gen_range(2..=4usize);
        let per = r.gen_range(1..=(max_vertices / robots).max(1));
        let mut spec = GenSpec::new(robots, per, EdgeCount::Exact(0), r.gen());
        let pairs = spec.inter_robot_pairs();
        if pairs == 0 {
            continue;
        }
        spec.edges = EdgeCount::Exact(r.gen_range(1..=pairs.min(max_edges)));
        if weighted {
            spec.weights = WeightModel::Uniform { lo: 0.5, hi: 2.0 };
        }
        return generate_exchange_graph(&spec).unwrap();
    }
}

/// Random graph with a pose graph of at most `max_poses` poses.
pub fn small_pose_instance(r: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize, max_poses: usize) -> (Graph, PoseGraph) {
    loop {
        let robots = r.gen_range(2..=3usize);
        let per = r.gen_range(1..=(max_vertices / robots));
        let chain = r.gen_range(1..=(max_poses / robots));
        if robots * chain < 2 {
            continue;
        }
        let mut spec = GenSpec::new(robots, per, EdgeCount::Exact(0), r.gen());
        let pairs = spec.inter_robot_pairs();
        spec.edges = EdgeCount::Exact(r.gen_range(1..=pairs.min(max_edges)));
        spec.pose.chain_length = Some(chain);
        let g = generate_exchange_graph(&spec).unwrap();
        let pg = generate_pose_graph(&spec, &g).unwrap();
        return (g, pg);
    }
}

pub fn random_iu(r: &mut ChaCha8Rng, g: &Graph) -> CommBudget {
    let limits = (0..g.num_robots()).map(|_| r.gen_range(0..=2)).collect();
    CommBudget::Iu(BlockLimits::by_robot(g, limits).unwrap())
}

fn vertex_set_allowed(g: &Graph, budget: &CommBudget, mask: u32) -> bool {
    let members = (0..g.num_vertices()).filter(|i| mask >> i & 1 == 1);
    match budget {
        CommBudget::Tu(b) => mask.count_ones() as usize <= *b,
        CommBudget::Tn(b) => members.map(|i| g.weight(VertexId(i))).sum::<f64>() <= *b + 1e-9,
        CommBudget::Iu(l) => {
            let mut used = vec![0usize; l.limits.len()];
            for i in members {
                let block = l.blocks.iter().position(|bl| bl.contains(&VertexId(i))).unwrap();
                used[block] += 1;
            }
            used.iter().zip(&l.limits).all(|(u, l)| u <= l)
        }
    }
}

/// Maximum of `f(E)` over edge sets with `|E| ≤ k` that some budget-feasible
/// vertex set covers, by direct enumeration of both vertex and edge subsets.
pub fn direct_opt(g: &Graph, k: usize, budget: &CommBudget, f: impl Fn(&[EdgeId]) -> f64) -> f64 {
    let n = g.num_vertices();
    let m = g.num_edges();
    assert!(n <= 20 && m <= 20, "oracle is exponential");
    let mut coverable = vec![false; 1 << m];
    for vmask in 0u32..(1 << n) {
        if !vertex_set_allowed(g, budget, vmask) {
            continue;
        }
        let emask = g
            .edges()
            .iter()
            .filter(|e| vmask >> e.u.index() & 1 == 1 || vmask >> e.v.index() & 1 == 1)
            .fold(0usize, |acc, e| acc | 1 << e.id.index());
        coverable[emask] = true;
    }
    // close downwards: subsets of coverable sets are coverable
    for bit in 0..m {
        for mask in 0..(1usize << m) {
            if mask >> bit & 1 == 1 && coverable[mask] {
                coverable[mask ^ (1 << bit)] = true;
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    for (mask, ok) in coverable.iter().enumerate() {
        if *ok && mask.count_ones() as usize <= k {
            let es: Vec<EdgeId> = (0..m).filter(|i| mask >> i & 1 == 1).map(EdgeId).collect();
            best = best.max(f(&es));
        }
    }
    best
}

/// Sum of edge probabilities.
pub fn modular(g: &Graph) -> impl Fn(&[EdgeId]) -> f64 + '_ {
    move |es| es.iter().map(|&e| g.p(e)).sum()
}

/// `ln` of the weighted spanning-tree count, by enumerating every
/// `(n−1)`-subset of the weighted edge list.
pub fn log_spanning_tree_weight(n: usize, edges: &[(usize, usize, f64)]) -> f64 {
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let m = edges.len();
    let mut total = 0.0;
    let mut pick = Vec::with_capacity(n);
    fn go(
        from: usize,
        need: usize,
        n: usize,
        edges: &[(usize, usize, f64)],
        pick: &mut Vec<usize>,
        total: &mut f64,
        find: fn(&mut [usize], usize) -> usize,
    ) {
        if need == 0 {
            let mut parent: Vec<usize> = (0..n).collect();
            let mut w = 1.0;
            for &i in pick.iter() {
                let (a, b, we) = edges[i];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    return;
                }
                parent[ra] = rb;
                w *= we;
            }
            *total += w;
            return;
        }
        for i in from..edges.len() {
            if edges.len() - i < need {
                break;
            }
            pick.push(i);
            go(i + 1, need - 1, n, edges, pick, total, find);
            pick.pop();
        }
    }
    assert!(m >= n - 1);
    go(0, n - 1, n, edges, &mut pick, &mut total, find);
    total.ln()
}
