use super::pose_graph::{Information, PoseGraph};
use super::{distinct_edges, EdgeSetState, Objective, ObjectiveKind};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, ExchangeGraph};
use crate::linalg::{Cholesky, SparseVec, SymMatrix};
use crate::scalar::Real;

/// Diagonal loading added to the D-criterion prior.
pub const DEFAULT_DCRIT_REGULARIZATION: f64 = 1e-6;

/// `f(E) = ln det(M₀ + Σ_{e∈E} p(e) Σ_j w_ej a_ej a_ejᵀ) − ln det(M₀)`.
///
/// Each edge contributes a sum of weighted rank-one terms; the prior `M₀`
/// must be positive definite. Monotone and submodular in `E`.
#[derive(Clone, Debug)]
pub struct LogDetObjective<T> {
    kind: ObjectiveKind,
    prior: SymMatrix<T>,
    prior_factor: Cholesky<T>,
    prior_logdet: T,
    probabilities: Vec<T>,
    factors: Vec<Vec<(T, SparseVec<T>)>>,
}

impl<T: Real> LogDetObjective<T> {
    pub fn new(
        kind: ObjectiveKind,
        prior: SymMatrix<T>,
        probabilities: Vec<T>,
        factors: Vec<Vec<(T, SparseVec<T>)>>,
    ) -> Result<Self> {
        if probabilities.len() != factors.len() {
            return Err(Error::InvalidArgument(format!(
                "{} probabilities for {} edges",
                probabilities.len(),
                factors.len()
            )));
        }
        let n = prior.dim();
        if factors.iter().flatten().any(|(w, a)| *w < T::zero() || a.0.iter().any(|&(i, _)| i >= n)) {
            return Err(Error::InvalidArgument("contribution outside the reduced space".into()));
        }
        let prior_factor = Cholesky::factor(&prior).ok_or(Error::NotPositiveDefinite)?;
        let prior_logdet = prior_factor.logdet();
        Ok(LogDetObjective {
            kind,
            prior,
            prior_factor,
            prior_logdet,
            probabilities,
            factors,
        })
    }

    /// Gain in log weighted spanning-tree count of the anchored pose graph.
    /// Candidate `e` adds an edge of weight `p(e)·w_e`.
    pub fn tree_connectivity(graph: &ExchangeGraph<T>, poses: &PoseGraph<T>) -> Result<Self> {
        poses.validate_for(graph)?;
        let dim = poses.num_poses() - 1;
        let mut prior = SymMatrix::zeros(dim);
        for e in &poses.base_edges {
            prior.add_rank_one(e.weight, &incidence(poses, e.from, e.to));
        }
        let factors = poses
            .candidates
            .iter()
            .map(|c| vec![(c.weight, incidence(poses, c.from, c.to))])
            .collect();
        let probabilities = graph.edges().iter().map(|e| e.p).collect();
        Self::new(ObjectiveKind::Treeconn, prior, probabilities, factors).map_err(|e| match e {
            Error::NotPositiveDefinite => Error::Disconnected,
            other => other,
        })
    }

    /// Gain in log-determinant of the planar pose-graph information matrix,
    /// over three coordinates per non-anchor pose. Each edge `{i, j}` with
    /// information `Ω` contributes `(a aᵀ) ⊗ Ω` with `a = e_i − e_j`, scaled
    /// by `p(e)·w_e` for candidates; the prior is the odometry information
    /// plus `regularization · I`.
    pub fn d_criterion(graph: &ExchangeGraph<T>, poses: &PoseGraph<T>, regularization: T) -> Result<Self> {
        poses.validate_for(graph)?;
        let dim = 3 * (poses.num_poses() - 1);
        let mut prior = SymMatrix::zeros(dim);
        for e in &poses.base_edges {
            for a in block_factors(poses, e.from, e.to, &e.information)? {
                prior.add_rank_one(T::one(), &a);
            }
        }
        prior.add_diagonal(regularization);
        let factors = poses
            .candidates
            .iter()
            .map(|c| {
                Ok(block_factors(poses, c.from, c.to, &c.information)?
                    .into_iter()
                    .map(|a| (c.weight, a))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let probabilities = graph.edges().iter().map(|e| e.p).collect();
        Self::new(ObjectiveKind::Dcrit, prior, probabilities, factors)
    }

    pub fn dim(&self) -> usize {
        self.prior.dim()
    }

    /// `ln det M₀`.
    pub fn prior_logdet(&self) -> T {
        self.prior_logdet
    }

    fn assemble(&self, edges: &[EdgeId]) -> Result<SymMatrix<T>> {
        let mut m = self.prior.clone();
        for e in distinct_edges(self.factors.len(), edges)? {
            let p = self.probabilities[e.index()];
            for (w, a) in &self.factors[e.index()] {
                m.add_rank_one(p * *w, a);
            }
        }
        Ok(m)
    }

    /// `ln det(M₀ + Σ ...)` without subtracting the prior term.
    pub fn absolute_logdet(&self, edges: &[EdgeId]) -> Result<T> {
        let m = self.assemble(edges)?;
        Ok(Cholesky::factor(&m).ok_or(Error::NotPositiveDefinite)?.logdet())
    }
}

fn incidence<T: Real>(poses: &PoseGraph<T>, i: usize, j: usize) -> SparseVec<T> {
    let mut a = Vec::with_capacity(2);
    if let Some(r) = poses.reduced_index(i) {
        a.push((r, T::one()));
    }
    if let Some(r) = poses.reduced_index(j) {
        a.push((r, -T::one()));
    }
    SparseVec(a)
}

fn block_factors<T: Real>(poses: &PoseGraph<T>, i: usize, j: usize, info: &Information<T>) -> Result<Vec<SparseVec<T>>> {
    let l = info
        .factor()
        .ok_or_else(|| Error::InvalidPoseGraph(format!("information of edge {i}-{j} is not positive definite")))?;
    Ok((0..3)
        .map(|col| {
            let mut a = Vec::with_capacity(6);
            for (pose, sign) in [(i, T::one()), (j, -T::one())] {
                if let Some(r) = poses.reduced_index(pose) {
                    for (row, lr) in l.iter().enumerate().skip(col) {
                        a.push((3 * r + row, sign * lr[col]));
                    }
                }
            }
            SparseVec(a)
        })
        .collect())
}

impl<T: Real> Objective<T> for LogDetObjective<T> {
    type State<'a>
        = LogDetState<'a, T>
    where
        Self: 'a;

    fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    fn num_edges(&self) -> usize {
        self.factors.len()
    }

    fn value(&self, edges: &[EdgeId]) -> Result<T> {
        if edges.is_empty() {
            distinct_edges(self.factors.len(), edges)?;
            return Ok(T::zero());
        }
        Ok(self.absolute_logdet(edges)? - self.prior_logdet)
    }

    fn state(&self) -> LogDetState<'_, T> {
        LogDetState {
            objective: self,
            factor: self.prior_factor.clone(),
            present: vec![false; self.factors.len()],
            value: T::zero(),
        }
    }
}

/// Cholesky factor of the current information matrix, advanced by rank-one
/// updates.
#[derive(Clone, Debug)]
pub struct LogDetState<'a, T> {
    objective: &'a LogDetObjective<T>,
    factor: Cholesky<T>,
    present: Vec<bool>,
    value: T,
}

impl<T: Real> LogDetState<'_, T> {
    fn fresh(&self, es: &[EdgeId]) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = Vec::with_capacity(es.len());
        for &e in es {
            if !self.present[e.index()] && !out.contains(&e) {
                out.push(e);
            }
        }
        out
    }

    fn terms<'s>(&'s self, es: &'s [EdgeId]) -> impl Iterator<Item = (T, Vec<T>)> + 's {
        let n = self.factor.dim();
        es.iter().flat_map(move |&e| {
            let p = self.objective.probabilities[e.index()];
            self.objective.factors[e.index()]
                .iter()
                .map(move |(w, a)| (p * *w, a.to_dense(n)))
        })
    }
}

impl<T: Real> EdgeSetState<T> for LogDetState<'_, T> {
    fn value(&self) -> T {
        self.value
    }

    fn contains(&self, e: EdgeId) -> bool {
        self.present[e.index()]
    }

    fn gain(&self, es: &[EdgeId]) -> T {
        let fresh = self.fresh(es);
        let mut terms: Vec<(T, Vec<T>)> = self.terms(&fresh).filter(|(c, _)| *c != T::zero()).collect();
        match terms.len() {
            0 => T::zero(),
            1 => {
                let (c, a) = terms.pop().unwrap();
                self.factor.rank_one_gain(c, &a)
            }
            _ => {
                let mut f = self.factor.clone();
                terms.into_iter().fold(T::zero(), |acc, (c, a)| acc + f.add_rank_one(c, &a))
            }
        }
    }

    fn insert(&mut self, es: &[EdgeId]) {
        let fresh = self.fresh(es);
        let terms: Vec<(T, Vec<T>)> = self.terms(&fresh).collect();
        for (c, a) in terms {
            self.value = self.value + self.factor.add_rank_one(c, &a);
        }
        for e in fresh {
            self.present[e.index()] = true;
        }
    }
}
