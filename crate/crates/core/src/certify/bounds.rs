//! Closed-form approximation factors.

use crate::error::{Error, Result};
use crate::planner::{PlannerKind, PlannerTrace};
use crate::scalar::Real;

fn one_minus_exp_neg<T: Real>(x: T) -> T {
    T::one() - (-x.min(T::one())).exp()
}

fn positive(name: &str, x: usize) -> Result<()> {
    if x == 0 {
        Err(Error::InvalidArgument(format!("{name} must be at least 1")))
    } else {
        Ok(())
    }
}

/// `1 − exp(−min{1, b/k})`.
pub fn alpha_e<T: Real>(b: usize, k: usize) -> Result<T> {
    positive("b", b)?;
    positive("k", k)?;
    Ok(one_minus_exp_neg(T::from_count(b) / T::from_count(k)))
}

/// `1 − exp(−min{1, ⌊k/Δ⌋/b})`.
pub fn alpha_v<T: Real>(b: usize, k: usize, delta: usize) -> Result<T> {
    positive("b", b)?;
    positive("k", k)?;
    positive("max degree", delta)?;
    Ok(one_minus_exp_neg(T::from_count(k / delta) / T::from_count(b)))
}

/// S-Greedy guarantee `1 − exp(−min{1, max{b/k, ⌊k/Δ⌋/b}})`.
pub fn alpha_apriori<T: Real>(b: usize, k: usize, delta: usize) -> Result<T> {
    Ok(alpha_e::<T>(b, k)?.max(alpha_v(b, k, delta)?))
}

/// Continuous form in the budget ratio `κ = b/k`:
/// `1 − exp(−min{1, max{κ, 1/(κΔ)}})`.
pub fn alpha_tilde<T: Real>(kappa: T, delta: T) -> T {
    one_minus_exp_neg(kappa.max(T::one() / (kappa * delta)))
}

/// Lower bound on [`alpha_apriori`] that depends on `Δ` only:
/// `1 − exp(−1/(Δ+1))`.
pub fn degree_floor<T: Real>(delta: usize) -> T {
    one_minus_exp_neg(T::one() / T::from_count(delta + 1))
}

/// Factors recomputed from the number of items the arms actually selected.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Posterior<T> {
    pub alpha_e: Option<T>,
    pub alpha_v: Option<T>,
}

/// Uses the first-phase edge count `n_e` and the vertex count `n_v`:
/// `1 − exp(−min{1, n_e/k})` and `1 − exp(−min{1, n_v/b})`. An arm that
/// ran out of candidates selected everything and gets factor 1.
pub fn alpha_posteriori<T: Real>(trace: &PlannerTrace<T>, b: usize, k: usize) -> Result<Posterior<T>> {
    let (edge_arm, vertex_arm) = match trace.planner {
        PlannerKind::EGreedy => (true, false),
        PlannerKind::VGreedy => (false, true),
        PlannerKind::SGreedy => (true, true),
        PlannerKind::MGreedy => return Err(Error::ForeignTrace("m-greedy")),
        PlannerKind::Random => return Err(Error::ForeignTrace("random baseline")),
    };
    positive("b", b)?;
    positive("k", k)?;
    let alpha_e = edge_arm.then(|| {
        if trace.edge_pool_exhausted {
            T::one()
        } else {
            one_minus_exp_neg(T::from_count(trace.phase_one_edges()) / T::from_count(k))
        }
    });
    let alpha_v = vertex_arm.then(|| {
        if trace.vertex_pool_exhausted {
            T::one()
        } else {
            one_minus_exp_neg(T::from_count(trace.vertex_arm_vertices()) / T::from_count(b))
        }
    });
    Ok(Posterior { alpha_e, alpha_v })
}
