//! Circuit-versus-oracle checks.
//!
//! [`verify_instance`] builds the circuit for an instance, simulates it
//! exactly, and compares the acceptance probability with `gap^2 / 2^k`
//! computed from the brute-force oracle. The comparison is on exact dyadic
//! rationals. The dense backend, when requested, is a separate float
//! cross-check with the fixed tolerance [`DENSE_TOLERANCE`].

pub mod accountant;
pub mod oracle;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use accountant::{gate_accountant, GateCountReport, GateKind};
pub use oracle::{oracle, oracle_nwt, oracle_ov, oracle_threesum, OracleCounts};

use crate::builders::{build, expected_denom_exponent, expected_qubits, BuiltCircuit, Mode, Problem};
use crate::circuit::Step;
use crate::dyadic::Dyadic;
use crate::instance::Instance;
use crate::sim::{simulate_dense, simulate_pathsum_with, PathSumOptions};
use crate::Result;

/// Largest allowed `|dense − pathsum|`.
pub const DENSE_TOLERANCE: f64 = 1e-9;

/// `gap^2 / 2^k` with the problem's `k`.
pub fn predicted_pacc(problem: Problem, r: u32, d: u32, gap: i64) -> Result<Dyadic> {
    Dyadic::square_over_pow2(gap as i128, expected_denom_exponent(problem, r, d))
}

/// How the simulated signed sum relates to the oracle gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignRelation {
    /// `S = −gap ≠ 0`.
    Negated,
    /// `S = gap ≠ 0`.
    Same,
    /// `S = gap = 0`.
    Zero,
    /// `|S| ≠ |gap|`.
    Mismatch,
}

impl SignRelation {
    fn classify(signed_sum: i128, gap: i64) -> Self {
        let gap = gap as i128;
        match (signed_sum, gap) {
            (0, 0) => SignRelation::Zero,
            (s, g) if s == -g => SignRelation::Negated,
            (s, g) if s == g => SignRelation::Same,
            _ => SignRelation::Mismatch,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Also run the dense backend with this qubit cap.
    pub dense_cap: Option<u32>,
    pub parallel: bool,
    pub order_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseCheck {
    pub p_acc: f64,
    pub abs_diff: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub problem: Problem,
    pub mode: Mode,
    pub n: usize,
    pub r: u32,
    pub d: u32,
    pub n_qubits: u32,
    pub expected_qubits: u32,
    pub qubits_ok: bool,
    pub denom_exponent: u32,
    pub oracle: OracleCounts,
    pub signed_sum: i128,
    pub sign_relation: SignRelation,
    pub ancilla_restored: bool,
    pub p_acc_simulated: Dyadic,
    pub p_acc_predicted: Dyadic,
    pub equal: bool,
    pub dense: Option<DenseCheck>,
    pub gates: GateCountReport,
    pub pass: bool,
}

/// Builds, simulates and checks one instance.
pub fn verify_instance(instance: &Instance, mode: Mode, opts: VerifyOptions) -> Result<VerifyReport> {
    let built = build(instance, mode)?;
    verify_built(&built, oracle(instance), opts)
}

/// Checks an already-built (possibly altered) circuit against oracle counts.
pub fn verify_built(built: &BuiltCircuit, counts: OracleCounts, opts: VerifyOptions) -> Result<VerifyReport> {
    let p = built.params;
    let outcome = simulate_pathsum_with(
        &built.circuit,
        PathSumOptions {
            parallel: opts.parallel,
            order_seed: opts.order_seed,
        },
    )?;
    let predicted = predicted_pacc(built.problem, p.r, p.d, counts.gap)?;
    let expected_q = expected_qubits(built.problem, p.r, p.d);
    let dense = match opts.dense_cap {
        Some(cap) => {
            let p_acc = simulate_dense(&built.circuit, cap)?;
            let abs_diff = (p_acc - outcome.p_acc_exact.to_f64()).abs();
            Some(DenseCheck {
                p_acc,
                abs_diff,
                agrees: abs_diff <= DENSE_TOLERANCE,
            })
        }
        None => None,
    };
    let gates = gate_accountant(built)?;
    let equal = outcome.p_acc_exact == predicted;
    let qubits_ok = built.circuit.n_qubits() == expected_q;
    let sign_relation = SignRelation::classify(outcome.signed_sum, counts.gap);
    let pass = equal
        && qubits_ok
        && sign_relation != SignRelation::Mismatch
        && gates.pass
        && dense.as_ref().map_or(true, |d| d.agrees);
    Ok(VerifyReport {
        problem: built.problem,
        mode: built.mode,
        n: p.n,
        r: p.r,
        d: p.d,
        n_qubits: built.circuit.n_qubits(),
        expected_qubits: expected_q,
        qubits_ok,
        denom_exponent: built.denom_exponent,
        oracle: counts,
        signed_sum: outcome.signed_sum,
        sign_relation,
        ancilla_restored: outcome.ancilla_restored,
        p_acc_simulated: outcome.p_acc_exact,
        p_acc_predicted: predicted,
        equal,
        dense,
        gates,
        pass,
    })
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| writeln!(s, "{k}: {v}").unwrap();
        kv("problem", &self.problem);
        kv("mode", &self.mode);
        kv("n", &self.n);
        kv("r", &self.r);
        kv("d", &self.d);
        kv("qubits", &self.n_qubits);
        kv("qubits_expected", &self.expected_qubits);
        kv("denominator_exponent", &self.denom_exponent);
        kv("s", &self.oracle.s);
        kv("total", &self.oracle.total);
        kv("gap", &self.oracle.gap);
        kv("signed_sum", &self.signed_sum);
        kv("sign_relation", &format!("{:?}", self.sign_relation).to_lowercase());
        kv("ancilla_restored", &self.ancilla_restored);
        kv("p_acc", &self.p_acc_simulated);
        kv("p_acc_predicted", &self.p_acc_predicted);
        kv("equal", &self.equal);
        if let Some(d) = &self.dense {
            kv("dense_p_acc", &d.p_acc);
            kv("dense_abs_diff", &d.abs_diff);
            kv("dense_agrees", &d.agrees);
        }
        for (step, tally) in &self.gates.per_step {
            for (kind, count) in tally {
                let bound = self
                    .gates
                    .table_bounds
                    .get(step)
                    .and_then(|b| b.get(kind))
                    .copied()
                    .unwrap_or(0);
                let key = match step {
                    Step::Loader => format!("gates.loader.{kind}"),
                    Step::Numbered(k) => format!("gates.step{k}.{kind}"),
                };
                kv(&key, &format!("{count} <= {bound}"));
            }
        }
        kv("gates_pass", &self.gates.pass);
        kv("pass", &self.pass);
        s
    }
}
