use std::fmt;
use std::str::FromStr;

use super::bounds::{alpha_apriori, alpha_e, alpha_posteriori, alpha_v};
use super::brute::brute_force_opt;
use super::relax::lp_upper_bound_modular;
use crate::error::{Error, Result};
use crate::graph::{CommBudget, ExchangeGraph, Plan};
use crate::objective::Objective;
use crate::planner::{PlannerConfig, PlannerKind, PlannerTrace};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertifyLevel {
    None,
    /// LP upper bound; modular objective under `TU` only.
    Lp,
    /// Brute-force optimum, plus the LP bound where it applies.
    Brute,
}

impl CertifyLevel {
    pub fn name(self) -> &'static str {
        match self {
            CertifyLevel::None => "none",
            CertifyLevel::Lp => "lp",
            CertifyLevel::Brute => "brute",
        }
    }
}

impl fmt::Display for CertifyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CertifyLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(CertifyLevel::None),
            "lp" => Ok(CertifyLevel::Lp),
            "brute" => Ok(CertifyLevel::Brute),
            _ => Err(Error::InvalidArgument(format!("unknown certification level '{s}'"))),
        }
    }
}

/// Achieved value of a plan next to whatever bounds could be computed.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<T = f64> {
    pub instance: String,
    pub budget: CommBudget<T>,
    pub k: usize,
    pub delta: usize,
    pub achieved: T,
    pub opt: Option<T>,
    pub upt: Option<T>,
    /// Guarantee of the planner that produced the plan.
    pub alpha_apriori: Option<T>,
    pub alpha_e_post: Option<T>,
    pub alpha_v_post: Option<T>,
    /// `achieved / UPT`, or `achieved / OPT` without an LP bound.
    pub ratio_lb: Option<T>,
}

/// A-priori guarantee of `kind` under `budget`; `None` when the planner has
/// none (random baseline) or the formula is undefined (zero budgets or an
/// edgeless graph).
pub fn planner_guarantee<T: Real>(kind: PlannerKind, budget: &CommBudget<T>, k: usize, delta: usize) -> Option<T> {
    let e1 = T::one() - (-T::one()).exp();
    let half = T::of(0.5);
    match (kind, budget) {
        (PlannerKind::MGreedy, CommBudget::Tu(_)) => Some(e1),
        (PlannerKind::MGreedy, CommBudget::Tn(_)) => Some(half * e1),
        (PlannerKind::MGreedy, CommBudget::Iu(_)) => Some(half),
        (PlannerKind::SGreedy, CommBudget::Tu(b)) => alpha_apriori(*b, k, delta).ok(),
        (PlannerKind::EGreedy, CommBudget::Tu(b)) => alpha_e(*b, k).ok(),
        (PlannerKind::VGreedy, CommBudget::Tu(b)) => alpha_v(*b, k, delta).ok(),
        _ => None,
    }
}

/// Builds the certificate for `plan` at the requested level. LP bounds
/// that do not apply (non-modular objective or non-`TU` budget) are left
/// empty.
#[allow(clippy::too_many_arguments)]
pub fn certify<T: Real, O: Objective<T>>(
    instance: &str,
    graph: &ExchangeGraph<T>,
    objective: &O,
    config: &PlannerConfig<T>,
    kind: PlannerKind,
    plan: &Plan<T>,
    trace: Option<&PlannerTrace<T>>,
    level: CertifyLevel,
) -> Result<Certificate<T>> {
    if !plan.is_feasible(graph, config.k, &config.budget)? {
        return Err(Error::InvalidArgument("plan violates its budgets".into()));
    }
    let k = config.k;
    let delta = graph.max_degree();
    let achieved = objective.value(&plan.edges)?;
    let lp_applies = objective.is_modular() && matches!(config.budget, CommBudget::Tu(_));
    let upt = match (level, &config.budget) {
        (CertifyLevel::Lp | CertifyLevel::Brute, CommBudget::Tu(b)) if lp_applies => {
            Some(lp_upper_bound_modular(graph, k, *b)?)
        }
        _ => None,
    };
    let opt = match level {
        CertifyLevel::Brute => Some(brute_force_opt(graph, k, &config.budget, objective)?.0),
        _ => None,
    };
    let (alpha_e_post, alpha_v_post) = match (trace, &config.budget) {
        (Some(t), CommBudget::Tu(b)) if matches!(t.planner, PlannerKind::EGreedy | PlannerKind::VGreedy | PlannerKind::SGreedy) => {
            match alpha_posteriori(t, *b, k) {
                Ok(p) => (p.alpha_e, p.alpha_v),
                Err(_) => (None, None),
            }
        }
        _ => (None, None),
    };
    let ratio = |den: T| (den > T::zero()).then(|| achieved / den);
    let ratio_lb = upt.and_then(ratio).or_else(|| opt.and_then(ratio));
    Ok(Certificate {
        instance: instance.to_string(),
        budget: config.budget.clone(),
        k,
        delta,
        achieved,
        opt,
        upt,
        alpha_apriori: planner_guarantee(kind, &config.budget, k, delta),
        alpha_e_post,
        alpha_v_post,
        ratio_lb,
    })
}
