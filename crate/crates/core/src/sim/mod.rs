//! Simulation backends.

pub mod dense;
pub mod pathsum;

use std::fmt;
use std::str::FromStr;

pub use dense::{simulate_dense, DEFAULT_DENSE_CAP};
pub use pathsum::{simulate_pathsum, simulate_pathsum_with, PathSumOptions, SimOutcome};

use crate::circuit::Circuit;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    PathSum,
    Dense { cap: u32 },
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::PathSum => f.write_str("pathsum"),
            Backend::Dense { .. } => f.write_str("dense"),
        }
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pathsum" => Ok(Backend::PathSum),
            "dense" => Ok(Backend::Dense {
                cap: DEFAULT_DENSE_CAP,
            }),
            other => Err(format!("unknown backend `{other}`")),
        }
    }
}

/// Acceptance probability as a float, whichever backend is used.
pub fn acceptance_probability(circuit: &Circuit, backend: Backend) -> Result<f64> {
    match backend {
        Backend::PathSum => Ok(simulate_pathsum(circuit)?.p_acc_exact.to_f64()),
        Backend::Dense { cap } => simulate_dense(circuit, cap),
    }
}
