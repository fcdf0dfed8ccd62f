//! Optimality certificates: exhaustive optimum, LP upper bound, exact
//! integer optimum, and the approximation factors of the planners.

mod bounds;
mod brute;
mod certificate;
mod relax;
mod simplex;

pub use bounds::{alpha_apriori, alpha_e, alpha_posteriori, alpha_tilde, alpha_v, degree_floor, Posterior};
pub use brute::{brute_force_opt, count_feasible_subsets, ENUMERATION_LIMIT};
pub use certificate::{certify, planner_guarantee, CertifyLevel, Certificate};
pub use relax::{ilp_opt_modular, lp_upper_bound_modular, lp_upper_bound_modular_exact, IlpSolution, NODE_LIMIT, TABLEAU_LIMIT};
pub use simplex::{LinearProgram, LpOutcome};
