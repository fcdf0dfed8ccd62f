//! Budget sweeps and factor tables.
//!
//! A sweep runs a set of planners over a `b × k` grid on one instance and
//! reports each plan's value next to the optimum or LP bound when requested.
//! Values are also reported normalized by `f(E_x)`, the value with every
//! candidate verified, and gaps are percentages of that normalizer.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::certify::{
    alpha_apriori, alpha_posteriori, alpha_tilde, brute_force_opt, lp_upper_bound_modular, planner_guarantee,
    CertifyLevel,
};
use crate::error::{Error, Result};
use crate::graph::{CommBudget, ExchangeGraph, Regime};
use crate::io::opt_field;
use crate::objective::{Objective, ObjectiveKind};
use crate::planner::{plan, PlannerConfig, PlannerKind};

pub const SWEEP_HEADER: [&str; 11] = [
    "b",
    "k",
    "planner",
    "achieved",
    "normalized",
    "opt",
    "upt",
    "gap_pct",
    "alpha_apriori",
    "alpha_e_post",
    "alpha_v_post",
];

/// Parses `start:step:end` (inclusive), a comma list, or a single value.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("invalid grid '{text}'"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    let values = match parts.as_slice() {
        [single] => single.split(',').map(num).collect::<Result<Vec<_>>>()?,
        [start, step, end] => {
            let (a, s, e) = (num(start)?, num(step)?, num(end)?);
            if !(s > 0.0) || e < a {
                return Err(bad());
            }
            let count = ((e - a) / s + 1e-9).floor() as usize + 1;
            (0..count).map(|i| a + s * i as f64).collect()
        }
        _ => return Err(bad()),
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(values)
}

/// [`parse_grid`] restricted to non-negative integers.
pub fn parse_count_grid(text: &str) -> Result<Vec<usize>> {
    parse_grid(text)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::InvalidArgument(format!("grid '{text}' must hold non-negative integers")))
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub regime: Regime,
    pub b_values: Vec<f64>,
    pub k_values: Vec<usize>,
    pub planners: Vec<PlannerKind>,
    pub certify: CertifyLevel,
    pub lazy: bool,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub b: f64,
    pub k: usize,
    pub planner: PlannerKind,
    pub achieved: f64,
    pub normalized: f64,
    pub opt: Option<f64>,
    pub upt: Option<f64>,
    /// `100 · (OPT − achieved) / f(E_x)`, using UPT when OPT is missing.
    pub gap_pct: Option<f64>,
    pub alpha_apriori: Option<f64>,
    pub alpha_e_post: Option<f64>,
    pub alpha_v_post: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
    pub normalizer: f64,
    pub delta: usize,
    pub objective: ObjectiveKind,
}

struct Cell {
    rows: Vec<SweepRow>,
    warnings: Vec<String>,
}

/// Runs every planner on every grid cell. Cells run in parallel; rows come
/// back in `(b, k, planner)` order. Planners that do not support the regime
/// or objective are skipped, and certification that would exceed a guard is
/// downgraded, each with a warning.
pub fn run_sweep<O: Objective<f64>>(graph: &ExchangeGraph<f64>, objective: &O, spec: &SweepSpec) -> Result<SweepResult> {
    if spec.b_values.is_empty() || spec.k_values.is_empty() || spec.planners.is_empty() {
        return Err(Error::InvalidArgument("sweep grid and planner list must be non-empty".into()));
    }
    let all: Vec<_> = graph.edge_ids().collect();
    let normalizer = objective.value(&all)?;
    let delta = graph.max_degree();
    let mut warnings = Vec::new();
    let planners: Vec<PlannerKind> = spec
        .planners
        .iter()
        .copied()
        .filter(|p| {
            if !p.supports(spec.regime) {
                warnings.push(format!("skipping {p}: not defined under {}", spec.regime.name()));
                false
            } else if *p == PlannerKind::MGreedy && !objective.is_modular() {
                warnings.push(format!("skipping {p}: needs the modular objective"));
                false
            } else {
                true
            }
        })
        .collect();
    let cells: Vec<(f64, usize)> = spec
        .b_values
        .iter()
        .flat_map(|&b| spec.k_values.iter().map(move |&k| (b, k)))
        .collect();
    let results: Vec<Result<Cell>> = cells
        .par_iter()
        .map(|&(b, k)| sweep_cell(graph, objective, spec, &planners, b, k, normalizer, delta))
        .collect();
    let mut rows = Vec::new();
    for r in results {
        let cell = r?;
        rows.extend(cell.rows);
        warnings.extend(cell.warnings);
    }
    Ok(SweepResult {
        rows,
        warnings,
        normalizer,
        delta,
        objective: objective.kind(),
    })
}

#[allow(clippy::too_many_arguments)]
fn sweep_cell<O: Objective<f64>>(
    graph: &ExchangeGraph<f64>,
    objective: &O,
    spec: &SweepSpec,
    planners: &[PlannerKind],
    b: f64,
    k: usize,
    normalizer: f64,
    delta: usize,
) -> Result<Cell> {
    let budget = CommBudget::uniform(spec.regime, b, graph)?;
    let config = PlannerConfig {
        k,
        budget: budget.clone(),
        lazy: spec.lazy,
        seed: spec.seed,
    };
    let mut warnings = Vec::new();
    let lp_applies = objective.is_modular() && spec.regime == Regime::Tu;
    let mut level = spec.certify;
    let mut opt = None;
    if level == CertifyLevel::Brute {
        match brute_force_opt(graph, k, &budget, objective) {
            Ok((v, _)) => opt = Some(v),
            Err(e) if e.is_guard() => {
                level = if lp_applies { CertifyLevel::Lp } else { CertifyLevel::None };
                warnings.push(format!("b={b} k={k}: {e}; certification downgraded to {level}"));
            }
            Err(e) => return Err(e),
        }
    }
    let mut upt = None;
    if level != CertifyLevel::None {
        if lp_applies {
            match lp_upper_bound_modular(graph, k, b as usize) {
                Ok(v) => upt = Some(v),
                Err(e) if e.is_guard() => warnings.push(format!("b={b} k={k}: {e}; no LP bound")),
                Err(e) => return Err(e),
            }
        } else if level == CertifyLevel::Lp {
            warnings.push(format!("b={b} k={k}: LP bound needs the modular objective under tu"));
        }
    }

    let mut rows = Vec::with_capacity(planners.len());
    for &kind in planners {
        let (p, trace) = plan(kind, graph, objective, &config)?;
        let achieved = p.achieved_value;
        let post = match (kind, &budget) {
            (PlannerKind::EGreedy | PlannerKind::VGreedy | PlannerKind::SGreedy, CommBudget::Tu(bb)) => {
                alpha_posteriori(&trace, *bb, k).ok()
            }
            _ => None,
        };
        let norm = |x: f64| if normalizer > 0.0 { x / normalizer } else { 0.0 };
        rows.push(SweepRow {
            b,
            k,
            planner: kind,
            achieved,
            normalized: norm(achieved),
            opt,
            upt,
            gap_pct: opt.or(upt).map(|best| 100.0 * norm(best - achieved)),
            alpha_apriori: planner_guarantee(kind, &budget, k, delta),
            alpha_e_post: post.and_then(|p| p.alpha_e),
            alpha_v_post: post.and_then(|p| p.alpha_v),
        });
    }
    Ok(Cell { rows, warnings })
}

/// CSV with a `#` metadata block ahead of the header.
pub fn sweep_csv(result: &SweepResult, graph: &ExchangeGraph<f64>, spec: &SweepSpec) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# seed={} delta={} n={} m={} objective={} regime={} certify={} normalizer={}",
        spec.seed,
        result.delta,
        graph.num_vertices(),
        graph.num_edges(),
        result.objective.name(),
        spec.regime.name(),
        spec.certify,
        result.normalizer
    )
    .unwrap();
    writeln!(out, "{}", SWEEP_HEADER.join(",")).unwrap();
    for r in &result.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.b,
            r.k,
            r.planner,
            r.achieved,
            r.normalized,
            opt_field(r.opt),
            opt_field(r.upt),
            opt_field(r.gap_pct),
            opt_field(r.alpha_apriori),
            opt_field(r.alpha_e_post),
            opt_field(r.alpha_v_post)
        )
        .unwrap();
    }
    out
}

/// `(b, k, α(b, k, Δ))` over the grid.
pub fn alpha_heatmap(b_values: &[usize], k_values: &[usize], delta: usize) -> Result<Vec<(usize, usize, f64)>> {
    let mut out = Vec::with_capacity(b_values.len() * k_values.len());
    for &b in b_values {
        for &k in k_values {
            out.push((b, k, alpha_apriori(b, k, delta)?));
        }
    }
    Ok(out)
}

pub fn alpha_heatmap_csv(cells: &[(usize, usize, f64)], delta: usize) -> String {
    let mut out = format!("# delta={delta}\nb,k,delta,alpha\n");
    for (b, k, a) in cells {
        writeln!(out, "{b},{k},{delta},{a}").unwrap();
    }
    out
}

/// `(κ, Δ, α̃(κ, Δ))` for every pair.
pub fn alpha_tilde_curves(kappas: &[f64], deltas: &[usize]) -> Vec<(f64, usize, f64)> {
    deltas
        .iter()
        .flat_map(|&d| kappas.iter().map(move |&k| (k, d, alpha_tilde(k, d as f64))))
        .collect()
}

pub fn alpha_tilde_csv(points: &[(f64, usize, f64)]) -> String {
    let mut out = String::from("kappa,delta,alpha_tilde\n");
    for (k, d, a) in points {
        writeln!(out, "{k},{d},{a}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::three_robot_example;
    use crate::objective::Modular;

    #[test]
    fn grids() {
        assert_eq!(parse_count_grid("20:10:50").unwrap(), vec![20, 30, 40, 50]);
        assert_eq!(parse_count_grid("1,3,5").unwrap(), vec![1, 3, 5]);
        assert_eq!(parse_grid("0.5:0.25:1").unwrap(), vec![0.5, 0.75, 1.0]);
        assert_eq!(parse_count_grid("7").unwrap(), vec![7]);
        for bad in ["", "a", "1:0:5", "5:1:1", "1:2", "1.5"] {
            assert!(parse_count_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn brute_sweep_gaps_are_non_negative() {
        let g = three_robot_example();
        let f = Modular::new(&g);
        let spec = SweepSpec {
            regime: Regime::Tu,
            b_values: vec![1.0, 2.0, 3.0],
            k_values: vec![1, 3, 5],
            planners: PlannerKind::ALL.to_vec(),
            certify: CertifyLevel::Brute,
            lazy: false,
            seed: 1,
        };
        let r = run_sweep(&g, &f, &spec).unwrap();
        assert_eq!(r.rows.len(), 3 * 3 * 5);
        for row in &r.rows {
            assert!(row.gap_pct.unwrap() >= -1e-9);
            assert!(row.upt.unwrap() >= row.opt.unwrap() - 1e-7);
        }
        let csv = sweep_csv(&r, &g, &spec);
        assert!(csv.starts_with("# seed=1 delta=4 n=9 m=8 objective=modular"));
        assert_eq!(csv.lines().nth(1).unwrap(), SWEEP_HEADER.join(","));
    }

    #[test]
    fn unsupported_planners_are_skipped() {
        let g = three_robot_example();
        let f = Modular::new(&g);
        let spec = SweepSpec {
            regime: Regime::Tn,
            b_values: vec![2.0],
            k_values: vec![3],
            planners: vec![PlannerKind::MGreedy, PlannerKind::SGreedy],
            certify: CertifyLevel::Lp,
            lazy: false,
            seed: 0,
        };
        let r = run_sweep(&g, &f, &spec).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(r.warnings.iter().any(|w| w.contains("sgreedy")));
    }

    #[test]
    fn tilde_saturates() {
        let pts = alpha_tilde_curves(&[1.0, 1.5, 3.0], &[1, 5, 41]);
        let e1 = 1.0 - (-1.0f64).exp();
        assert!(pts.iter().all(|p| (p.2 - e1).abs() < 1e-15));
    }
}
