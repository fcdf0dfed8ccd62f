//! Budgeted selection of inter-robot loop closures.
//!
//! Robots that meet hold a shared *exchange graph*: vertices are observations
//! they could broadcast, edges are candidate loop closures they could verify.
//! Given a verification budget `k` and a communication budget on broadcast
//! observations, the planners in [`planner`] choose which observations to
//! share and which candidates to check so as to maximize a monotone
//! (sub)modular objective from [`objective`]. [`certify`] bounds how far a
//! plan is from optimal.
//!
//! The library is generic over the scalar type. The aliases below cover the
//! common cases.

pub mod certify;
pub mod datagen;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod objective;
pub mod planner;
pub mod scalar;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{BlockLimits, CommBudget, Edge, EdgeId, ExchangeGraph, Plan, Regime, RobotId, Vertex, VertexId, Violation};
pub use scalar::{LpScalar, Real};

/// Exact rational used by the LP relaxation.
pub type Rational = num_rational::BigRational;

pub type Graph = ExchangeGraph<f64>;
pub type Graph32 = ExchangeGraph<f32>;
pub type Budget = CommBudget<f64>;
pub type Budget32 = CommBudget<f32>;
pub type PlanF64 = Plan<f64>;
pub type PlanF32 = Plan<f32>;
pub type PoseGraphF64 = objective::PoseGraph<f64>;
