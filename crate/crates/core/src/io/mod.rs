//! File formats.
//!
//! * Exchange graphs: JSON lines, see [`exchange`].
//! * Pose graphs: a g2o-style text subset, see [`g2o`].
//! * Plans: one JSON object, see [`plan`].
//! * Ground truth, traces and certificates: CSV, see [`tables`].

pub mod exchange;
pub mod g2o;
pub mod plan;
pub mod tables;

pub use exchange::{parse_exchange_graph, read_exchange_graph, write_exchange_graph, write_exchange_graph_file};
pub use g2o::{parse_pose_graph, read_pose_graph, write_pose_graph, write_pose_graph_file};
pub use plan::{read_plan, write_plan, PlanFile};
pub use tables::{
    certificate_header, certificate_row, ground_truth_csv, metadata_comment, parse_ground_truth, trace_csv, CERTIFICATE_HEADER,
    GROUND_TRUTH_HEADER, TRACE_HEADER,
};

/// Formats an optional number; `None` becomes an empty field.
pub fn opt_field<T: std::fmt::Display>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}
