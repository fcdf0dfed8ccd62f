//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use loopclose::certify::{
    alpha_apriori, alpha_e, alpha_posteriori, alpha_tilde, alpha_v, brute_force_opt, ilp_opt_modular,
    lp_upper_bound_modular, lp_upper_bound_modular_exact, degree_floor,
};
use loopclose::datagen::{generate_exchange_graph, generate_pose_graph, hub_instance, three_robot_example, EdgeCount, GenSpec};
use loopclose::objective::{
    g_modular, Candidate, Information, LogDetObjective, Modular, Objective, Pose, PoseEdge, PoseGraph,
    DEFAULT_DCRIT_REGULARIZATION,
};
use loopclose::planner::{plan, PlannerConfig, PlannerKind, PlannerTrace};
use loopclose::sweep::alpha_heatmap;
use loopclose::{CommBudget, EdgeId, Graph, Plan, VertexId};
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

use common::{direct_opt, log_spanning_tree_weight, modular, random_iu, rng, small_graph, small_pose_instance};

const E1: f64 = 0.632_120_558_828_557_7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: summary }
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        Outcome {
            pass: false,
            detail: format!("{summary}; {} violation(s), e.g. {}", failures.len(), shown.join(" | ")),
        }
    }
}

fn within(limit: Duration, t: Duration, failures: &mut Vec<String>) {
    if t > limit {
        failures.push(format!("took {t:.2?}, limit {limit:?}"));
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = three_robot_example();
    let mut failures = Vec::new();
    let all: Vec<EdgeId> = g.edge_ids().collect();
    let cover = g.min_vertex_cover_bruteforce(&all, false).unwrap();
    if cover.len() != 3 {
        failures.push(format!("minimum cover has {} vertices", cover.len()));
    }
    // no pair of vertices covers every edge
    for a in 0..g.num_vertices() {
        for b in a + 1..g.num_vertices() {
            if g.is_cover(&[VertexId(a), VertexId(b)], &all).unwrap() {
                failures.push(format!("{{{a}, {b}}} covers all edges"));
            }
        }
    }
    let obj = Modular::new(&g);
    let config = PlannerConfig::tu(2, 3);
    for kind in PlannerKind::ALL {
        let (p, _) = plan(kind, &g, &obj, &config).unwrap();
        if !(p.vertices.len() <= 2 && p.edges.len() <= 3 && p.is_feasible(&g, 3, &config.budget).unwrap()) {
            failures.push(format!("{kind} returned {p:?}"));
        }
    }
    let t = start.elapsed();
    within(Duration::from_secs(1), t, &mut failures);
    outcome(&failures, format!("minimum cover 3, all five planners feasible at (b,k)=(2,3), {t:.1?}"))
}

fn grid(start: usize, step: usize, end: usize) -> Vec<usize> {
    (start..=end).step_by(step).collect()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (bs, ks) = (grid(20, 10, 150), grid(10, 10, 100));
    let hub = hub_instance(0);
    let deltas = [hub.max_degree(), hub.cap_degree(5).unwrap().max_degree()];
    if deltas != [41, 5] {
        failures.push(format!("synthetic instance degrees {deltas:?}"));
    }
    let extremes = |delta| {
        let cells = alpha_heatmap(&bs, &ks, delta).unwrap();
        let min = cells.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
        let max = cells.iter().map(|c| c.2).fold(0.0, f64::max);
        (min, max)
    };
    let (min41, max41) = extremes(41);
    let (min5, max5) = extremes(5);
    for (what, got, want) in [("min Δ=41", min41, 0.18), ("max Δ=41", max41, E1), ("min Δ=5", min5, 0.36)] {
        if (got - want).abs() > 0.01 {
            failures.push(format!("{what} = {got:.4}, expected {want:.3}"));
        }
    }
    for delta in 1..=64 {
        for i in 0..=36 {
            let kappa = 1.0 + 0.25 * i as f64;
            let a = alpha_tilde(kappa, delta as f64);
            if (a - E1).abs() > 1e-15 {
                failures.push(format!("α̃({kappa}, {delta}) = {a}"));
            }
        }
    }
    let t = start.elapsed();
    within(Duration::from_secs(1), t, &mut failures);
    outcome(
        &failures,
        format!("Δ=41 min {min41:.4} max {max41:.4}; Δ=5 min {min5:.4} max {max5:.4}; α̃ flat for κ ≥ 1; {t:.1?}"),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for delta in 1..=64 {
        let floor: f64 = degree_floor(delta);
        for b in 1..=200 {
            for k in 1..=200 {
                let a: f64 = alpha_apriori(b, k, delta).unwrap();
                checked += 1;
                if a < floor {
                    failures.push(format!("α({b},{k},{delta}) = {a} < {floor}"));
                }
            }
        }
    }
    let t = start.elapsed();
    within(Duration::from_secs(10), t, &mut failures);
    outcome(&failures, format!("{checked} grid points above 1 − exp(−1/(Δ+1)), {t:.1?}"))
}

/// Modular instances shared by criteria 4, 5 and 7.
struct ModularCase {
    graph: Graph,
    b: usize,
    k: usize,
    tn_budget: f64,
    iu: CommBudget,
}

fn modular_cases(count: usize) -> Vec<ModularCase> {
    let mut r = rng(4);
    (0..count)
        .map(|_| {
            let graph = small_graph(&mut r, 12, 16, true);
            let b = r.gen_range(0..=graph.num_vertices());
            let k = r.gen_range(0..=graph.num_edges() + 1);
            let total: f64 = graph.vertices().iter().map(|v| v.weight).sum();
            let tn_budget = r.gen_range(0.0..total * 0.6);
            let iu = random_iu(&mut r, &graph);
            ModularCase {
                graph,
                b,
                k,
                tn_budget,
                iu,
            }
        })
        .collect()
}

struct ModularRun {
    tu_achieved: f64,
    tu_opt: f64,
}

fn criterion_4(cases: &[ModularCase]) -> (Outcome, Vec<ModularRun>) {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut runs = Vec::new();
    for (i, c) in cases.iter().enumerate() {
        let g = &c.graph;
        let obj = Modular::new(g);
        let regimes = [
            ("TU", CommBudget::Tu(c.b), 1.0 - (-1.0f64).exp()),
            ("TN", CommBudget::Tn(c.tn_budget), 0.5 * (1.0 - (-1.0f64).exp())),
            ("IU", c.iu.clone(), 0.5),
        ];
        for (name, budget, factor) in regimes {
            let config = PlannerConfig::new(c.k, budget.clone());
            let (p, _) = plan(PlannerKind::MGreedy, g, &obj, &config).unwrap();
            let opt = direct_opt(g, c.k, &budget, modular(g));
            let (brute, _) = brute_force_opt(g, c.k, &budget, &obj).unwrap();
            if !p.is_feasible(g, c.k, &budget).unwrap() {
                failures.push(format!("case {i} {name}: infeasible plan"));
            }
            if p.achieved_value < factor * opt - 1e-9 {
                failures.push(format!("case {i} {name}: {} < {factor:.3}·{opt}", p.achieved_value));
            }
            if (brute - opt).abs() > 1e-9 {
                failures.push(format!("case {i} {name}: nested optimum {brute} vs direct {opt}"));
            }
            if name == "TU" {
                runs.push(ModularRun {
                    tu_achieved: p.achieved_value,
                    tu_opt: opt,
                });
            }
        }
    }
    let t = start.elapsed();
    within(Duration::from_secs(120), t, &mut failures);
    let o = outcome(
        &failures,
        format!("{} instances × TU/TN/IU meet 1−1/e, ½(1−1/e), ½ of the direct optimum, {t:.1?}", cases.len()),
    );
    (o, runs)
}

fn criterion_5(cases: &[ModularCase], runs: &[ModularRun]) -> Outcome {
    let mut total = 0;
    let mut exact = 0;
    let mut counterexamples = Vec::new();
    for (i, (c, r)) in cases.iter().zip(runs).enumerate() {
        if c.b >= c.k {
            total += 1;
            if (r.tu_opt - r.tu_achieved).abs() <= 1e-9 {
                exact += 1;
            } else {
                counterexamples.push(i);
            }
        }
    }
    let frac = exact as f64 / total.max(1) as f64;
    let mut detail = format!("{exact}/{total} instances with b ≥ k have zero gap ({:.1}%)", 100.0 * frac);
    if !counterexamples.is_empty() {
        detail.push_str(&format!(", logged counterexamples: {counterexamples:?}"));
    }
    Outcome { pass: true, detail }
}

struct TreeCase {
    graph: Graph,
    poses: PoseGraph,
    b: usize,
    k: usize,
}

fn tree_cases(count: usize) -> Vec<TreeCase> {
    let mut r = rng(6);
    (0..count)
        .map(|_| {
            let (graph, poses) = small_pose_instance(&mut r, 10, 12, 8);
            let b = r.gen_range(1..=graph.num_vertices());
            let k = r.gen_range(1..=graph.num_edges() + 1);
            TreeCase { graph, poses, b, k }
        })
        .collect()
}

fn criterion_6(cases: &[TreeCase]) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    for (i, c) in cases.iter().enumerate() {
        let g = &c.graph;
        let obj = LogDetObjective::tree_connectivity(g, &c.poses).unwrap();
        let budget = CommBudget::Tu(c.b);
        let config = PlannerConfig::new(c.k, budget.clone());
        let (p, trace) = plan(PlannerKind::SGreedy, g, &obj, &config).unwrap();
        let opt = direct_opt(g, c.k, &budget, |es| obj.value(es).unwrap());
        let (brute, _) = brute_force_opt(g, c.k, &budget, &obj).unwrap();
        let delta = g.max_degree();
        let alpha: f64 = alpha_apriori(c.b, c.k, delta).unwrap();
        if (brute - opt).abs() > 1e-9 * (1.0 + opt.abs()) {
            failures.push(format!("case {i}: nested optimum {brute} vs direct {opt}"));
        }
        if p.achieved_value < alpha * opt - 1e-9 {
            failures.push(format!("case {i}: {} < {alpha:.4}·{opt}", p.achieved_value));
        }
        if opt > 1e-12 {
            worst = worst.min(p.achieved_value / opt);
        }
        let post = alpha_posteriori(&trace, c.b, c.k).unwrap();
        let (pe, pv) = (post.alpha_e.unwrap(), post.alpha_v.unwrap());
        let (ae, av): (f64, f64) = (alpha_e(c.b, c.k).unwrap(), alpha_v(c.b, c.k, delta).unwrap());
        if pe < ae - 1e-12 || pv < av - 1e-12 || pe.max(pv) < alpha - 1e-12 {
            failures.push(format!("case {i}: posterior ({pe}, {pv}) below prior ({ae}, {av})"));
        }
    }
    let t = start.elapsed();
    within(Duration::from_secs(300), t, &mut failures);
    outcome(
        &failures,
        format!(
            "{} tree-connectivity instances meet α·OPT (worst ratio {worst:.3}), posterior ≥ prior, {t:.1?}",
            cases.len()
        ),
    )
}

fn criterion_7(cases: &[ModularCase], runs: &[ModularRun], trees: &[TreeCase]) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut max_slack = 0.0f64;
    for (i, (c, r)) in cases.iter().zip(runs).enumerate() {
        let g = &c.graph;
        let ilp = ilp_opt_modular(g, c.k, c.b).unwrap();
        let upt = lp_upper_bound_modular(g, c.k, c.b).unwrap();
        let (brute, _) = brute_force_opt(g, c.k, &CommBudget::Tu(c.b), &Modular::new(g)).unwrap();
        if r.tu_achieved > ilp.value + 1e-9 {
            failures.push(format!("case {i}: achieved {} > ILP {}", r.tu_achieved, ilp.value));
        }
        if (ilp.value - brute).abs() > 1e-9 {
            failures.push(format!("case {i}: ILP {} ≠ brute {brute}", ilp.value));
        }
        if brute > upt + 1e-7 {
            failures.push(format!("case {i}: brute {brute} > LP {upt}"));
        }
        if i % 10 == 0 {
            let exact = lp_upper_bound_modular_exact(g, c.k, c.b).unwrap().to_f64().unwrap();
            if (exact - upt).abs() > 1e-7 {
                failures.push(format!("case {i}: float LP {upt} vs exact {exact}"));
            }
        }
        max_slack = max_slack.max(upt - brute);
    }
    for (i, c) in trees.iter().enumerate() {
        let obj = LogDetObjective::tree_connectivity(&c.graph, &c.poses).unwrap();
        let config = PlannerConfig::tu(c.b, c.k);
        let (p, _) = plan(PlannerKind::SGreedy, &c.graph, &obj, &config).unwrap();
        let (brute, _) = brute_force_opt(&c.graph, c.k, &config.budget, &obj).unwrap();
        if p.achieved_value > brute + 1e-9 {
            failures.push(format!("tree case {i}: achieved {} > OPT {brute}", p.achieved_value));
        }
    }
    let t = start.elapsed();
    outcome(
        &failures,
        format!(
            "{} modular/TU instances satisfy achieved ≤ ILP = brute ≤ LP (largest integrality gap {max_slack:.4}), {} submodular achieved ≤ OPT, {t:.1?}",
            cases.len(),
            trees.len()
        ),
    )
}

fn sample_pair(r: &mut impl Rng, m: usize) -> Option<(Vec<EdgeId>, Vec<EdgeId>, EdgeId)> {
    let b: Vec<usize> = (0..m).filter(|_| r.gen_bool(0.5)).collect();
    let outside: Vec<usize> = (0..m).filter(|e| !b.contains(e)).collect();
    let e = *outside.choose(r)?;
    let a: Vec<usize> = b.iter().copied().filter(|_| r.gen_bool(0.5)).collect();
    let ids = |v: &[usize]| v.iter().map(|&i| EdgeId(i)).collect::<Vec<_>>();
    Some((ids(&a), ids(&b), EdgeId(e)))
}

fn nms_failures<O: Objective<f64>>(name: &str, obj: &O, samples: usize, r: &mut impl Rng, failures: &mut Vec<String>) -> usize {
    let m = obj.num_edges();
    let f = |es: &[EdgeId]| obj.value(es).unwrap();
    if f(&[]).abs() > 1e-12 {
        failures.push(format!("{name}: f(∅) = {}", f(&[])));
    }
    let mut done = 0;
    while done < samples {
        let Some((a, b, e)) = sample_pair(r, m) else { continue };
        done += 1;
        let (fa, fb) = (f(&a), f(&b));
        let with = |s: &[EdgeId]| {
            let mut s = s.to_vec();
            s.push(e);
            f(&s)
        };
        let (ga, gb) = (with(&a) - fa, with(&b) - fb);
        if fa > fb + 1e-9 {
            failures.push(format!("{name}: f(A) {fa} > f(B) {fb}"));
        }
        if ga < -1e-9 {
            failures.push(format!("{name}: negative marginal {ga}"));
        }
        if ga < gb - 1e-9 {
            failures.push(format!("{name}: marginal {ga} on A below {gb} on B"));
        }
    }
    done
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut r = rng(8);
    let (target, per) = (10_000, 100);
    let mut counts = [0usize; 4];
    while counts.iter().any(|&c| c < target) {
        let (g, pg) = small_pose_instance(&mut r, 12, 16, 8);
        if g.num_edges() < 2 {
            continue;
        }
        counts[0] += nms_failures("modular", &Modular::new(&g), per, &mut r, &mut failures);
        let tc = LogDetObjective::tree_connectivity(&g, &pg).unwrap();
        counts[1] += nms_failures("treeconn", &tc, per, &mut r, &mut failures);
        let dc = LogDetObjective::d_criterion(&g, &pg, DEFAULT_DCRIT_REGULARIZATION).unwrap();
        counts[2] += nms_failures("dcrit", &dc, per, &mut r, &mut failures);

        let n = g.num_vertices();
        let gv = |vs: &[VertexId], k| g_modular(&g, vs, k).unwrap().value;
        for _ in 0..per {
            let k = r.gen_range(0..=g.num_edges());
            let q: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
            let outside: Vec<usize> = (0..n).filter(|v| !q.contains(v)).collect();
            let Some(&v) = outside.choose(&mut r) else { continue };
            let s: Vec<usize> = q.iter().copied().filter(|_| r.gen_bool(0.5)).collect();
            let ids = |xs: &[usize]| xs.iter().map(|&i| VertexId(i)).collect::<Vec<_>>();
            let (s, q) = (ids(&s), ids(&q));
            let plus = |xs: &[VertexId]| {
                let mut xs = xs.to_vec();
                xs.push(VertexId(v));
                xs
            };
            let (gs, gq) = (gv(&s, k), gv(&q, k));
            let (ds, dq) = (gv(&plus(&s), k) - gs, gv(&plus(&q), k) - gq);
            counts[3] += 1;
            if gv(&[], k) != 0.0 || gs > gq + 1e-9 || ds < -1e-9 || ds < dq - 1e-9 {
                failures.push(format!("g: S {s:?} Q {q:?} v {v} k {k}: {gs} {gq} {ds} {dq}"));
            }
        }
    }
    let t = start.elapsed();
    outcome(
        &failures,
        format!(
            "NMS holds on {}/{}/{} modular/treeconn/dcrit triples and {} nested-objective triples, {t:.1?}",
            counts[0], counts[1], counts[2], counts[3]
        ),
    )
}

fn pose_graph(n: usize, base: &[(usize, usize, f64)], cands: &[(usize, usize, f64)]) -> PoseGraph {
    let edge = |&(from, to, weight): &(usize, usize, f64)| PoseEdge {
        from,
        to,
        measurement: Pose::new(0.0, 0.0, 0.0),
        information: Information::identity(),
        weight,
    };
    PoseGraph {
        poses: vec![Pose::new(0.0, 0.0, 0.0); n],
        anchor: 0,
        base_edges: base.iter().map(edge).collect(),
        candidates: cands
            .iter()
            .enumerate()
            .map(|(i, &(from, to, weight))| Candidate {
                edge: EdgeId(i),
                from,
                to,
                weight,
                information: Information::identity(),
            })
            .collect(),
    }
}

/// Exchange graph with one isolated edge per candidate.
fn matching(ps: &[f64]) -> Graph {
    let m = ps.len().max(1);
    let edges: Vec<(usize, usize, f64)> = ps.iter().enumerate().map(|(i, &p)| (i, m + i, p)).collect();
    Graph::from_edge_list(2, m, &edges).unwrap()
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut r = rng(9);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let n = r.gen_range(2..=7);
        let base: Vec<(usize, usize, f64)> = (1..n).map(|j| (r.gen_range(0..j), j, r.gen_range(0.5..2.0))).collect();
        let mut cands = Vec::new();
        for _ in 0..r.gen_range(1..=8) {
            let a = r.gen_range(0..n);
            let b = (a + r.gen_range(1..n)) % n;
            cands.push((a, b, r.gen_range(0.5..2.0)));
        }
        let ps: Vec<f64> = cands.iter().map(|_| r.gen_range(0.0..1.0)).collect();
        let g = matching(&ps);
        let pg = pose_graph(n, &base, &cands);
        let obj = LogDetObjective::tree_connectivity(&g, &pg).unwrap();
        let chosen: Vec<usize> = (0..cands.len()).filter(|_| r.gen_bool(0.6)).collect();
        let mut weighted = base.clone();
        weighted.extend(chosen.iter().map(|&c| (cands[c].0, cands[c].1, ps[c] * cands[c].2)));
        let es: Vec<EdgeId> = chosen.iter().map(|&c| EdgeId(c)).collect();
        let got = obj.absolute_logdet(&es).unwrap();
        let want = log_spanning_tree_weight(n, &weighted);
        let rel = (got - want).exp_m1().abs();
        worst = worst.max(rel);
        if rel > 1e-8 {
            failures.push(format!("graph {i}: ln τ {got} vs enumeration {want}"));
        }
        let gain = obj.value(&es).unwrap();
        let base_only = log_spanning_tree_weight(n, &base);
        if ((gain - (want - base_only)).exp_m1()).abs() > 1e-8 {
            failures.push(format!("graph {i}: gain {gain} vs {}", want - base_only));
        }
    }
    let k4 = pose_graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], &[(0, 2, 1.0), (0, 3, 1.0), (1, 3, 1.0)]);
    let g = matching(&[1.0, 1.0, 1.0]);
    let obj = LogDetObjective::tree_connectivity(&g, &k4).unwrap();
    let k4_value = obj.absolute_logdet(&[EdgeId(0), EdgeId(1), EdgeId(2)]).unwrap();
    if (k4_value - 16f64.ln()).abs() > 1e-12 {
        failures.push(format!("K4: {k4_value} vs ln 16"));
    }
    let t = start.elapsed();
    outcome(
        &failures,
        format!("50 random pose graphs match spanning-tree enumeration (worst relative error {worst:.1e}), K4 = ln 16, {t:.1?}"),
    )
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let bs = [1usize, 2, 3];
    let ks: Vec<usize> = (1..=8).map(|i| 3 * i).collect();
    let seeds = 100u64;
    let mut sums = vec![[0.0f64; 2]; bs.len() * ks.len()];
    let mut saturated_cells = 0;
    for seed in 0..seeds {
        let mut spec = GenSpec::new(5, 8, EdgeCount::Density(0.15), seed);
        spec.max_degree = Some(6);
        spec.pose.chain_length = Some(6);
        let g = generate_exchange_graph(&spec).unwrap();
        let pg = generate_pose_graph(&spec, &g).unwrap();
        let obj = LogDetObjective::tree_connectivity(&g, &pg).unwrap();
        let delta = g.max_degree();
        for (bi, &b) in bs.iter().enumerate() {
            let mut plateau: Option<f64> = None;
            for (ki, &k) in ks.iter().enumerate() {
                let config = PlannerConfig::tu(b, k).with_seed(seed);
                let (s, _) = plan(PlannerKind::SGreedy, &g, &obj, &config).unwrap();
                let (rand_plan, _) = plan(PlannerKind::Random, &g, &obj, &config).unwrap();
                let cell = &mut sums[bi * ks.len() + ki];
                cell[0] += s.achieved_value;
                cell[1] += rand_plan.achieved_value;
                if k >= b * delta {
                    saturated_cells += 1;
                    match plateau {
                        None => plateau = Some(s.achieved_value),
                        Some(v) if v != s.achieved_value => {
                            failures.push(format!("seed {seed} b={b}: value moves past k={k} ≥ bΔ"))
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    let mut margin = f64::INFINITY;
    for (bi, &b) in bs.iter().enumerate() {
        for (ki, &k) in ks.iter().enumerate() {
            let [s, rnd] = sums[bi * ks.len() + ki];
            margin = margin.min((s - rnd) / seeds as f64);
            if s < rnd {
                failures.push(format!("(b,k)=({b},{k}): mean S-Greedy {} < random {}", s / seeds as f64, rnd / seeds as f64));
            }
        }
    }
    if saturated_cells == 0 {
        failures.push("no saturated cells exercised".into());
    }
    let t = start.elapsed();
    outcome(
        &failures,
        format!(
            "S-Greedy mean ≥ random mean in all {} cells over {seeds} seeds (smallest margin {margin:.3}), flat past k ≥ bΔ in {saturated_cells} runs, {t:.1?}",
            sums.len()
        ),
    )
}

fn same_run(a: &(Plan, PlannerTrace), b: &(Plan, PlannerTrace)) -> bool {
    a.0.vertices == b.0.vertices
        && a.0.edges == b.0.edges
        && a.0.achieved_value.to_bits() == b.0.achieved_value.to_bits()
        && a.1.steps.len() == b.1.steps.len()
        && a.1.steps.iter().zip(&b.1.steps).all(|(x, y)| x.item == y.item && x.arm == y.arm)
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut r = rng(11);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let (mut eager_evals, mut lazy_evals) = (0usize, 0usize);
    for i in 0..100 {
        let robots = r.gen_range(2..=4);
        let mut spec = GenSpec::new(robots, r.gen_range(4..=9), EdgeCount::Density(r.gen_range(0.2..0.5)), r.gen());
        spec.pose.chain_length = Some(r.gen_range(2..=6));
        let g = generate_exchange_graph(&spec).unwrap();
        let pg = generate_pose_graph(&spec, &g).unwrap();
        let obj = LogDetObjective::tree_connectivity(&g, &pg).unwrap();
        let config = PlannerConfig::tu(r.gen_range(1..=6), r.gen_range(1..=20)).with_seed(i);
        for kind in PlannerKind::ALL.into_iter().filter(|k| *k != PlannerKind::MGreedy) {
            let eager = plan(kind, &g, &obj, &config).unwrap();
            let again = plan(kind, &g, &obj, &config).unwrap();
            let serial = single.install(|| plan(kind, &g, &obj, &config).unwrap());
            if eager != again || !same_run(&eager, &serial) {
                failures.push(format!("instance {i} {kind}: repeated runs differ"));
            }
            if kind == PlannerKind::Random {
                continue;
            }
            let lazy = plan(kind, &g, &obj, &config.clone().with_lazy(true)).unwrap();
            if !same_run(&eager, &lazy) {
                failures.push(format!("instance {i} {kind}: lazy selection differs"));
            }
            if lazy.1.evaluations > eager.1.evaluations {
                failures.push(format!(
                    "instance {i} {kind}: lazy {} > eager {} evaluations",
                    lazy.1.evaluations, eager.1.evaluations
                ));
            }
            eager_evals += eager.1.evaluations;
            lazy_evals += lazy.1.evaluations;
        }
    }
    let t = start.elapsed();
    outcome(
        &failures,
        format!(
            "100 instances: runs bit-identical across repeats and thread counts, lazy = eager with {lazy_evals} vs {eager_evals} evaluations, {t:.1?}"
        ),
    )
}

fn main() {
    let cases = modular_cases(500);
    let trees = tree_cases(200);
    let mut results: Vec<(usize, Outcome)> = Vec::new();
    results.push((1, criterion_1()));
    results.push((2, criterion_2()));
    results.push((3, criterion_3()));
    let (o4, runs) = criterion_4(&cases);
    results.push((4, o4));
    results.push((5, criterion_5(&cases, &runs)));
    results.push((6, criterion_6(&trees)));
    results.push((7, criterion_7(&cases, &runs, &trees)));
    results.push((8, criterion_8()));
    results.push((9, criterion_9()));
    results.push((10, criterion_10()));
    results.push((11, criterion_11()));

    let mut failed = 0;
    for (n, o) in &results {
        println!("{} criterion {n}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
