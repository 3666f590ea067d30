//! Instance generation, exact oracles and cut audits.

mod audit;
mod generate;
mod oracle;

use thiserror::Error;

use crate::surface_graph::GraphError;

pub use audit::{audit_cuts, AuditMode, CutAudit, EXHAUSTIVE_MAX_VERTICES};
pub use generate::{generate, CostModel, GenMode, GenSpec};
pub use oracle::{brute_force_atsp, OracleResult, ORACLE_MAX_VERTICES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("invalid generator spec: {0}")]
    BadSpec(String),
    #[error("instance has {n} vertices, the limit is {max}")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
