//! Construction, exact simulation and verification of the gap-encoding
//! circuits for Orthogonal Vectors, 3-SUM and Negative Weight Triangle.
//!
//! Every circuit built here has the same shape: one layer of Hadamards that
//! opens `2^h` computational branches, followed only by classical reversible
//! gates (X, CX, Toffoli, multi-controlled bit-mask gates, QRAM loads) and a
//! single Z. Its acceptance probability is `gap^2 / 2^k` where `gap` is the
//! witness-count difference of the encoded problem instance. The
//! [`sim::pathsum`] backend evaluates that probability as an exact dyadic
//! rational and [`verify`] checks it against brute-force oracles.
//!
//! ```
//! use fgsim_core::{builders, instance::OvInstance, sim, verify, BitString, Mode};
//!
//! let bits = |b: u64| BitString::from_int(b, 1);
//! let inst = OvInstance::new(1, vec![bits(1), bits(0)], vec![bits(1), bits(0)]).unwrap();
//! let built = builders::build_ov_circuit(&inst, Mode::Qram).unwrap();
//! let outcome = sim::simulate_pathsum(&built.circuit).unwrap();
//! assert_eq!(outcome.p_acc_exact, verify::predicted_pacc(built.problem, 1, 1, 2).unwrap());
//! ```

pub mod arith;
pub mod builders;
pub mod circuit;
pub mod dataload;
pub mod dyadic;
mod error;
pub mod generate;
pub mod instance;
pub mod sim;
pub mod verify;

pub use builders::{BuiltCircuit, Mode, Params, Problem};
pub use circuit::{BitString, Circuit, Gate, MeasurementPlan, Qubit, Register, Step};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use instance::{Instance, NwtInstance, OvInstance, ThreeSumInstance};
