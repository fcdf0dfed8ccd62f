//! LP relaxation of the modular cardinality-budget problem and an exact
//! branch-and-bound solver built on it.
//!
//! Variables are `π_v` (broadcast `v`) and `ℓ_e` (verify `e`):
//!
//! ```text
//! max Σ p(e) ℓ_e   s.t.  Σ π ≤ b,  Σ ℓ ≤ k,  ℓ_e ≤ π_u + π_v,  0 ≤ π, ℓ ≤ 1
//! ```

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_rational::BigRational;

use super::brute::count_feasible_subsets;
use super::simplex::{LinearProgram, LpOutcome};
use crate::error::{Error, Result};
use crate::graph::{CommBudget, EdgeId, ExchangeGraph, VertexId};
use crate::objective::g_modular;
use crate::scalar::{LpScalar, Real};

/// Largest dense tableau (rows × columns) the solver will allocate.
pub const TABLEAU_LIMIT: u128 = 1 << 26;

/// Maximum number of branch-and-bound nodes.
pub const NODE_LIMIT: usize = 1 << 20;

struct Relaxation<F> {
    lp: LinearProgram<F>,
    pi: Vec<Option<usize>>,
}

/// Builds the relaxation with some `π` fixed. `fixed` ones are charged to
/// `b` by the caller.
fn relaxation<F: LpScalar, T: Real>(graph: &ExchangeGraph<T>, k: usize, b: usize, fixed: &[Option<bool>]) -> Relaxation<F> {
    let n = graph.num_vertices();
    let mut next = 0usize;
    let pi: Vec<Option<usize>> = (0..n)
        .map(|v| {
            fixed[v].is_none().then(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    let mut ell: Vec<Option<usize>> = Vec::with_capacity(graph.num_edges());
    for e in graph.edges() {
        let dead = fixed[e.u.index()] == Some(false) && fixed[e.v.index()] == Some(false);
        ell.push((!dead).then(|| {
            next += 1;
            next - 1
        }));
    }
    let one = F::one;
    let mut lp = LinearProgram::new(next);
    for (e, var) in graph.edges().iter().zip(&ell) {
        if let Some(j) = var {
            lp.objective[*j] = F::from_f64_value(e.p.to_f64_value());
        }
    }
    let pis: Vec<(usize, F)> = pi.iter().flatten().map(|&j| (j, one())).collect();
    lp.add_row(&pis, F::from_count(b));
    let ells: Vec<(usize, F)> = ell.iter().flatten().map(|&j| (j, one())).collect();
    lp.add_row(&ells, F::from_count(k));
    for (e, var) in graph.edges().iter().zip(&ell) {
        let Some(j) = var else { continue };
        if fixed[e.u.index()] == Some(true) || fixed[e.v.index()] == Some(true) {
            continue;
        }
        let mut row = vec![(*j, one())];
        for w in [e.u, e.v] {
            if let Some(pj) = pi[w.index()] {
                row.push((pj, -one()));
            }
        }
        lp.add_row(&row, F::zero());
    }
    for j in 0..next {
        lp.add_row(&[(j, one())], one());
    }
    Relaxation { lp, pi }
}

fn check_size<T: Real>(graph: &ExchangeGraph<T>) -> Result<()> {
    let (n, m) = (graph.num_vertices() as u128, graph.num_edges() as u128);
    let rows = 2 + 2 * m + n;
    let size = rows * (n + m + rows + 1);
    if size > TABLEAU_LIMIT {
        return Err(Error::TooLarge {
            what: "lp relaxation",
            size,
            limit: TABLEAU_LIMIT,
        });
    }
    Ok(())
}

fn solve<F: LpScalar>(lp: &LinearProgram<F>) -> Result<(F, Vec<F>)> {
    match lp.solve()? {
        LpOutcome::Optimal { value, x, .. } => Ok((value, x)),
        LpOutcome::Unbounded => unreachable!("all variables are bounded"),
    }
}

/// LP upper bound `UPT ≥ OPT` for the modular objective under `TU(b)`.
pub fn lp_upper_bound_modular<T: Real>(graph: &ExchangeGraph<T>, k: usize, b: usize) -> Result<T> {
    check_size(graph)?;
    let fixed = vec![None; graph.num_vertices()];
    Ok(solve(&relaxation::<T, T>(graph, k, b, &fixed).lp)?.0)
}

/// [`lp_upper_bound_modular`] in exact rational arithmetic; probabilities
/// enter as the exact values of their binary representation.
pub fn lp_upper_bound_modular_exact<T: Real>(graph: &ExchangeGraph<T>, k: usize, b: usize) -> Result<BigRational> {
    check_size(graph)?;
    let fixed = vec![None; graph.num_vertices()];
    Ok(solve(&relaxation::<BigRational, T>(graph, k, b, &fixed).lp)?.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IlpSolution<T> {
    pub value: T,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    /// Relaxations solved.
    pub nodes: usize,
    /// Nodes that were split.
    pub branchings: usize,
}

struct Node<T> {
    bound: T,
    seq: usize,
    fixed: Vec<Option<bool>>,
    pi: Vec<T>,
}

impl<T: Real> PartialEq for Node<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Node<T> {}
impl<T: Real> PartialOrd for Node<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Node<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .partial_cmp(&other.bound)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Exact optimum of the integer program by best-first branch and bound,
/// branching on the most fractional `π` (lowest index on ties).
pub fn ilp_opt_modular<T: Real>(graph: &ExchangeGraph<T>, k: usize, b: usize) -> Result<IlpSolution<T>> {
    count_feasible_subsets(graph, &CommBudget::Tu(b))?;
    check_size(graph)?;
    let n = graph.num_vertices();
    let tol = T::tolerance();
    let mut nodes = 0usize;
    let mut seq = 0usize;

    let mut open = |fixed: Vec<Option<bool>>, nodes: &mut usize| -> Result<Node<T>> {
        let ones = fixed.iter().filter(|f| **f == Some(true)).count();
        let r = relaxation::<T, T>(graph, k, b - ones, &fixed);
        let (lp_value, x) = solve(&r.lp)?;
        *nodes += 1;
        if *nodes > NODE_LIMIT {
            return Err(Error::TooLarge {
                what: "branch and bound",
                size: *nodes as u128,
                limit: NODE_LIMIT as u128,
            });
        }
        let pi = (0..n)
            .map(|v| match (fixed[v], r.pi[v]) {
                (Some(true), _) => T::one(),
                (Some(false), _) => T::zero(),
                (None, Some(j)) => x[j],
                (None, None) => unreachable!(),
            })
            .collect();
        seq += 1;
        Ok(Node {
            bound: lp_value,
            seq,
            fixed,
            pi,
        })
    };

    let mut best: Option<(T, Vec<VertexId>, Vec<EdgeId>)> = None;
    let mut branchings = 0usize;
    let mut heap = BinaryHeap::new();
    heap.push(open(vec![None; n], &mut nodes)?);
    while let Some(node) = heap.pop() {
        if let Some((v, _, _)) = &best {
            if node.bound <= *v + tol {
                break;
            }
        }
        let half = T::of(0.5);
        let frac = (0..n)
            .filter(|&v| node.fixed[v].is_none())
            .filter(|&v| node.pi[v] > tol && node.pi[v] < T::one() - tol)
            .min_by(|&a, &c| {
                let da = (node.pi[a] - half).abs();
                let dc = (node.pi[c] - half).abs();
                da.partial_cmp(&dc).unwrap_or(Ordering::Equal).then(a.cmp(&c))
            });
        match frac {
            None => {
                let vs: Vec<VertexId> = (0..n).filter(|&v| node.pi[v] > half).map(VertexId).collect();
                let g = g_modular(graph, &vs, k)?;
                if best.as_ref().is_none_or(|(v, _, _)| g.value > *v) {
                    best = Some((g.value, vs, g.witness));
                }
            }
            Some(j) => {
                branchings += 1;
                let ones = node.fixed.iter().filter(|f| **f == Some(true)).count();
                let mut zero = node.fixed.clone();
                zero[j] = Some(false);
                heap.push(open(zero, &mut nodes)?);
                if ones < b {
                    let mut one = node.fixed;
                    one[j] = Some(true);
                    heap.push(open(one, &mut nodes)?);
                }
            }
        }
    }
    let (value, vertices, edges) = best.unwrap_or((T::zero(), Vec::new(), Vec::new()));
    // only the broadcast vertices that cover a chosen edge are needed
    let vertices = vertices
        .into_iter()
        .filter(|v| edges.iter().any(|e| graph.edges()[e.index()].touches(*v)))
        .collect();
    Ok(IlpSolution {
        value,
        vertices,
        edges,
        nodes,
        branchings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::three_robot_example;
    use num_traits::ToPrimitive;

    #[test]
    fn single_edge() {
        let g: ExchangeGraph = ExchangeGraph::from_edge_list(2, 1, &[(0, 1, 0.6)]).unwrap();
        assert!((lp_upper_bound_modular(&g, 1, 1).unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(lp_upper_bound_modular(&g, 0, 1).unwrap(), 0.0);
        assert_eq!(lp_upper_bound_modular(&g, 1, 0).unwrap(), 0.0);
        let ilp = ilp_opt_modular(&g, 1, 1).unwrap();
        assert!((ilp.value - 0.6).abs() < 1e-15);
        assert_eq!(ilp.branchings, 0);
    }

    #[test]
    fn example_optimum() {
        let g = three_robot_example();
        let s = ilp_opt_modular(&g, 3, 2).unwrap();
        assert!((s.value - 2.4).abs() < 1e-12);
        assert!(lp_upper_bound_modular(&g, 3, 2).unwrap() >= s.value - 1e-9);
        let total: f64 = g.edges().iter().map(|e| e.p).sum();
        assert!((ilp_opt_modular(&g, 8, 9).unwrap().value - total).abs() < 1e-12);
    }

    #[test]
    fn exact_and_float_relaxations_agree() {
        let g = three_robot_example();
        for (b, k) in [(1, 1), (1, 3), (2, 3), (2, 5), (3, 8)] {
            let f = lp_upper_bound_modular(&g, k, b).unwrap();
            let q = lp_upper_bound_modular_exact(&g, k, b).unwrap().to_f64().unwrap();
            assert!((f - q).abs() < 1e-9, "{b} {k}: {f} vs {q}");
        }
    }
}
