//! End-to-end circuits for OV, 3-SUM and NWT, in QRAM and explicit
//! (loader-unitary) modes.
//!
//! Every circuit has one shared ancilla, allocated last, that serves as the
//! carry-in of every adder and comparator and as the borrowed work qubit of
//! every multi-controlled gate. It is never measured.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{emit_adder, emit_comparator_leq, emit_comparator_lt, AdderLayout, ComparatorLayout};
use crate::circuit::{BitString, Circuit, MeasurementPlan, Qubit, Register, Step};
use crate::dataload::{
    emit_equality_detector, emit_loader_unitary, emit_pair_loader_unitary, emit_sentinel_detector,
    emit_single_loader, DataTable,
};
pub use crate::instance::Problem;
use crate::instance::{NwtInstance, OvInstance, ThreeSumInstance};
use crate::{Error, Gate, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Qram,
    Explicit,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Qram => "qram",
            Mode::Explicit => "explicit",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "qram" => Ok(Mode::Qram),
            "explicit" => Ok(Mode::Explicit),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// Size parameters of a built circuit. `bound` is `U` for 3-SUM, `M` for
/// NWT and absent for OV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub r: u32,
    pub d: u32,
    pub bound: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltCircuit {
    pub circuit: Circuit,
    pub problem: Problem,
    pub mode: Mode,
    pub params: Params,
    /// `k` in `p_acc = gap^2 / 2^k`.
    pub denom_exponent: u32,
}

/// Smallest `r >= 1` with `n <= 2^r`. For `n = 1` the usual formula gives
/// `r = 0`; the floor keeps every register nonempty.
pub fn index_width(n: usize) -> u32 {
    assert!(n >= 1);
    let r = usize::BITS - (n - 1).leading_zeros();
    r.max(1)
}

/// Smallest `w` with `value < 2^w`.
fn bit_length(value: u64) -> u32 {
    u64::BITS - value.leading_zeros()
}

pub fn derive_params_ov(instance: &OvInstance) -> (u32, u32) {
    (index_width(instance.n()), instance.d() as u32)
}

/// `r` as for OV; `d` the smallest width with `2U <= 2^d - 1`.
pub fn derive_params_threesum(instance: &ThreeSumInstance) -> (u32, u32) {
    let d = bit_length(2 * instance.bound() as u64);
    (index_width(instance.n()), d)
}

/// `r` as for OV; `d` with `2^{d-1} <= 2M+1 < 2^d`.
pub fn derive_params_nwt(instance: &NwtInstance) -> (u32, u32) {
    let d = bit_length(2 * instance.m() as u64 + 1);
    (index_width(instance.n()), d)
}

/// `W_ij = A_ij + M` for `i, j` in `[0, 2^r)`, with the sentinel `2M+1` for
/// missing edges, the diagonal and indices `>= n`. Symmetric.
pub fn build_w_matrix(instance: &NwtInstance, r: u32) -> Vec<Vec<u64>> {
    let size = 1usize << r;
    let m = instance.m();
    let sentinel = (2 * m + 1) as u64;
    let mut w = vec![vec![sentinel; size]; size];
    for e in instance.edges() {
        let (a, b) = (e.i - 1, e.j - 1);
        if a < size && b < size {
            let value = (e.w + m) as u64;
            w[a][b] = value;
            w[b][a] = value;
        }
    }
    w
}

pub fn expected_qubits(problem: Problem, r: u32, d: u32) -> u32 {
    match problem {
        Problem::Ov => 3 * d + 3 * r + 4,
        Problem::ThreeSum => 4 * r + 3 * d + 8,
        Problem::Nwt => 4 * r + 4 * d + 14,
    }
}

pub fn expected_denom_exponent(problem: Problem, r: u32, d: u32) -> u32 {
    match problem {
        Problem::Ov => 5 * r + 3 * d + 1,
        Problem::ThreeSum => 7 * r + 3 * d + 4,
        Problem::Nwt => 7 * r + 4 * d + 10,
    }
}

fn reg<'a>(c: &'a Circuit, name: &str) -> Register {
    c.register(name).expect("register declared by builder").clone()
}

/// Splits registers into the measurement plan: `z` registers in Z, the
/// ancilla unmeasured, all others in X.
fn measurement_plan(c: &Circuit, z_regs: &[&str]) -> MeasurementPlan {
    let mut plan = MeasurementPlan::default();
    for r in c.registers() {
        if r.name == "anc" {
            plan.unmeasured.extend(r.qubits());
        } else if z_regs.contains(&r.name.as_str()) {
            plan.z_qubits.extend(r.qubits());
        } else {
            plan.x_qubits.extend(r.qubits());
        }
    }
    plan
}

/// Step 1 shared by all three: Hadamards on the index registers, then
/// `|B[n-1]>` on the threshold register.
fn emit_index_layer(c: &mut Circuit, index_regs: &[&Register], threshold: &Register, n: usize) -> Result<()> {
    c.begin_step(Step::Numbered(1));
    for r in index_regs {
        for q in r.qubits() {
            c.h(q)?;
        }
    }
    let pattern = BitString::try_from_int(n as u64 - 1, threshold.width as usize)?;
    c.x_on_ones(&threshold.qubits(), &pattern)
}

/// Step 2: `flags[k] = χ(I[index_k] − (n−1))` via `C`.
fn emit_range_checks(
    c: &mut Circuit,
    index_regs: &[&Register],
    threshold: &Register,
    flags: &Register,
    anc: Qubit,
) -> Result<()> {
    c.begin_step(Step::Numbered(2));
    for (k, r) in index_regs.iter().enumerate() {
        emit_comparator_leq(
            c,
            &ComparatorLayout {
                ancilla: anc,
                a: r.qubits(),
                b: threshold.qubits(),
                out: flags.bit(k as u32),
            },
        )?;
    }
    Ok(())
}

fn qram(c: &mut Circuit, address: Vec<Qubit>, data: Vec<Qubit>, table: &str) -> Result<()> {
    c.push(Gate::QramLoad {
        address,
        data,
        table: table.to_owned(),
    })
}

fn finish(
    mut c: Circuit,
    problem: Problem,
    mode: Mode,
    params: Params,
    z_regs: &[&str],
) -> Result<BuiltCircuit> {
    let plan = measurement_plan(&c, z_regs);
    c.set_measurement(plan)?;
    let (r, d) = (params.r, params.d);
    let k = expected_denom_exponent(problem, r, d);
    assert_eq!(c.n_qubits(), expected_qubits(problem, r, d));
    assert_eq!(k as usize, c.h_layer_size() + c.measurement().x_qubits.len());
    Ok(BuiltCircuit {
        circuit: c,
        problem,
        mode,
        params,
        denom_exponent: k,
    })
}

/// OV: registers 1–8 (widths r, r, r, 2, d, d, d, 1) plus the ancilla.
pub fn build_ov_circuit(instance: &OvInstance, mode: Mode) -> Result<BuiltCircuit> {
    let n = instance.n();
    let (r, d) = derive_params_ov(instance);
    let mut c = Circuit::new(&[
        ("r1", r),
        ("r2", r),
        ("r3", r),
        ("r4", 2),
        ("r5", d),
        ("r6", d),
        ("r7", d),
        ("r8", 1),
        ("anc", 1),
    ])?;
    let [r1, r2, r3, r4, r5, r6, r7, r8] =
        ["r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8"].map(|name| reg(&c, name));
    let anc = reg(&c, "anc").bit(0);
    let table_d = DataTable::from_rows("D", r, d, instance.u().iter().cloned())?;
    let table_dp = DataTable::from_rows("Dp", r, d, instance.v().iter().cloned())?;

    emit_index_layer(&mut c, &[&r1, &r2], &r3, n)?;
    emit_range_checks(&mut c, &[&r1, &r2], &r3, &r4, anc)?;

    match mode {
        Mode::Qram => {
            c.add_table(table_d)?;
            c.add_table(table_dp)?;
            c.begin_step(Step::Numbered(3));
            qram(&mut c, r1.qubits(), r5.qubits(), "D")?;
            qram(&mut c, r2.qubits(), r6.qubits(), "Dp")?;
        }
        Mode::Explicit => {
            c.begin_step(Step::Loader);
            // Π_x U_x V_x
            for x in 0..n as u64 {
                let dx = table_d.get(x).expect("row present");
                let dpx = table_dp.get(x).expect("row present");
                emit_single_loader(&mut c, x, dx, &r1.qubits(), &r5.qubits(), anc)?;
                emit_single_loader(&mut c, x, dpx, &r2.qubits(), &r6.qubits(), anc)?;
            }
        }
    }

    c.begin_step(Step::Numbered(4));
    for k in 0..d {
        c.toffoli(r5.bit(k), r6.bit(k), r7.bit(k))?;
    }

    c.begin_step(Step::Numbered(5));
    emit_equality_detector(&mut c, &r7.qubits(), &BitString::zeros(d as usize), r8.bit(0), anc)?;

    c.begin_step(Step::Numbered(6));
    c.z(r8.bit(0))?;

    let params = Params { n, r, d, bound: None };
    finish(c, Problem::Ov, mode, params, &["r4"])
}

/// 3-SUM: registers 1–9 (widths r, r, r, r, 3, d, d+1, d+2, 1) plus the
/// ancilla. Stored values are shifted by `U` so they are non-negative and the
/// target sum becomes `3U`.
pub fn build_threesum_circuit(instance: &ThreeSumInstance, mode: Mode) -> Result<BuiltCircuit> {
    let n = instance.n();
    let u = instance.bound();
    let (r, d) = derive_params_threesum(instance);
    let mut c = Circuit::new(&[
        ("r1", r),
        ("r2", r),
        ("r3", r),
        ("r4", r),
        ("r5", 3),
        ("r6", d),
        ("r7", d + 1),
        ("r8", d + 2),
        ("r9", 1),
        ("anc", 1),
    ])?;
    let [r1, r2, r3, r4, r5, r6, r7, r8, r9] =
        ["r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8", "r9"].map(|name| reg(&c, name));
    let anc = reg(&c, "anc").bit(0);
    let rows = instance
        .elements()
        .iter()
        .map(|&e| BitString::try_from_int((e + u) as u64, d as usize))
        .collect::<Result<Vec<_>>>()?;
    let table = DataTable::from_rows("D", r, d, rows)?;

    emit_index_layer(&mut c, &[&r1, &r2, &r3], &r4, n)?;
    emit_range_checks(&mut c, &[&r1, &r2, &r3], &r4, &r5, anc)?;

    let loads = [(&r1, r6.low(d)), (&r2, r7.low(d)), (&r3, r8.low(d))];
    match mode {
        Mode::Qram => {
            c.add_table(table)?;
            c.begin_step(Step::Numbered(3));
            for (addr, data) in loads {
                qram(&mut c, addr.qubits(), data, "D")?;
            }
        }
        Mode::Explicit => {
            c.begin_step(Step::Loader);
            for (addr, data) in loads {
                emit_loader_unitary(&mut c, &table, &addr.qubits(), &data, anc)?;
            }
        }
    }

    c.begin_step(Step::Numbered(4));
    emit_adder(
        &mut c,
        &AdderLayout {
            ancilla: anc,
            a: r6.qubits(),
            sum: r7.qubits(),
        },
    )?;
    c.begin_step(Step::Numbered(5));
    emit_adder(
        &mut c,
        &AdderLayout {
            ancilla: anc,
            a: r7.qubits(),
            sum: r8.qubits(),
        },
    )?;

    // Equality test against B[3U]: conjugate on the zero bits of the target.
    c.begin_step(Step::Numbered(6));
    let target = BitString::try_from_int(3 * u as u64, (d + 2) as usize)?;
    emit_equality_detector(&mut c, &r8.qubits(), &target, r9.bit(0), anc)?;

    c.begin_step(Step::Numbered(7));
    c.z(r9.bit(0))?;

    let params = Params {
        n,
        r,
        d,
        bound: Some(u),
    };
    finish(c, Problem::ThreeSum, mode, params, &["r5"])
}

/// NWT: registers 1–12 (widths r, r, r, r, 3, d, d+1, d+2, 3, d+2, 1, 1)
/// plus the ancilla.
pub fn build_nwt_circuit(instance: &NwtInstance, mode: Mode) -> Result<BuiltCircuit> {
    let n = instance.n();
    let m = instance.m();
    let (r, d) = derive_params_nwt(instance);
    let mut c = Circuit::new(&[
        ("r1", r),
        ("r2", r),
        ("r3", r),
        ("r4", r),
        ("r5", 3),
        ("r6", d),
        ("r7", d + 1),
        ("r8", d + 2),
        ("r9", 3),
        ("r10", d + 2),
        ("r11", 1),
        ("r12", 1),
        ("anc", 1),
    ])?;
    let [r1, r2, r3, r4, r5, r6, r7, r8, r9, r10, r11, r12] = [
        "r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8", "r9", "r10", "r11", "r12",
    ]
    .map(|name| reg(&c, name));
    let anc = reg(&c, "anc").bit(0);

    let w = build_w_matrix(instance, r);
    let mut table = DataTable::new("W", 2 * r, d);
    for (i, row) in w.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            let key = i as u64 | (j as u64) << r;
            table.insert(key, BitString::try_from_int(value, d as usize)?)?;
        }
    }

    emit_index_layer(&mut c, &[&r1, &r2, &r3], &r4, n)?;
    emit_range_checks(&mut c, &[&r1, &r2, &r3], &r4, &r5, anc)?;

    // (x, y) -> 6, (y, z) -> 7, (x, z) -> 8
    let loads = [
        (&r1, &r2, r6.low(d)),
        (&r2, &r3, r7.low(d)),
        (&r1, &r3, r8.low(d)),
    ];
    match mode {
        Mode::Qram => {
            c.add_table(table)?;
            c.begin_step(Step::Numbered(3));
            for (a1, a2, data) in loads {
                let address = a1.qubits().into_iter().chain(a2.qubits()).collect();
                qram(&mut c, address, data, "W")?;
            }
        }
        Mode::Explicit => {
            c.begin_step(Step::Loader);
            for (a1, a2, data) in loads {
                emit_pair_loader_unitary(&mut c, &table, &a1.qubits(), &a2.qubits(), &data, anc)?;
            }
        }
    }

    c.begin_step(Step::Numbered(4));
    for (k, data) in [r6.low(d), r7.low(d), r8.low(d)].iter().enumerate() {
        emit_sentinel_detector(&mut c, data, m as u64, r9.bit(k as u32), anc)?;
    }

    c.begin_step(Step::Numbered(5));
    emit_adder(
        &mut c,
        &AdderLayout {
            ancilla: anc,
            a: r6.qubits(),
            sum: r7.qubits(),
        },
    )?;
    emit_adder(
        &mut c,
        &AdderLayout {
            ancilla: anc,
            a: r7.qubits(),
            sum: r8.qubits(),
        },
    )?;

    c.begin_step(Step::Numbered(6));
    let three_m = BitString::try_from_int(3 * m as u64, (d + 2) as usize)?;
    c.x_on_ones(&r10.qubits(), &three_m)?;
    emit_comparator_lt(
        &mut c,
        &ComparatorLayout {
            ancilla: anc,
            a: r8.qubits(),
            b: r10.qubits(),
            out: r11.bit(0),
        },
    )?;

    c.begin_step(Step::Numbered(7));
    let mut flags = r9.qubits();
    flags.push(r11.bit(0));
    emit_equality_detector(&mut c, &flags, &BitString::zeros(4), r12.bit(0), anc)?;

    c.begin_step(Step::Numbered(8));
    c.z(r12.bit(0))?;

    let params = Params {
        n,
        r,
        d,
        bound: Some(m),
    };
    finish(c, Problem::Nwt, mode, params, &["r5"])
}

/// Builds the circuit matching any instance.
pub fn build(instance: &crate::Instance, mode: Mode) -> Result<BuiltCircuit> {
    match instance {
        crate::Instance::Ov(i) => build_ov_circuit(i, mode),
        crate::Instance::ThreeSum(i) => build_threesum_circuit(i, mode),
        crate::Instance::Nwt(i) => build_nwt_circuit(i, mode),
    }
}

/// The time bound `T` attached to each problem's hardness statement.
/// `knob` is `c` for OV, `η` for 3-SUM and `M` for NWT. Reporting only.
pub fn hardness_time(problem: Problem, n_qubits: f64, delta: f64, knob: f64) -> Result<f64> {
    let exponent = match problem {
        Problem::Ov => {
            if knob <= 0.0 {
                return Err(Error::InvalidInstance("c must be positive".into()));
            }
            (2.0 - delta) * (n_qubits - 7.0) / (3.0 * (knob + 1.0))
        }
        Problem::ThreeSum => (2.0 - delta) * (n_qubits - 18.0) / (13.0 + 3.0 * knob),
        Problem::Nwt => {
            if knob < 0.0 {
                return Err(Error::InvalidInstance("M must be non-negative".into()));
            }
            (3.0 - delta) / 4.0 * (n_qubits - 4.0 * (2.0 * knob + 1.0).log2() - 22.0)
        }
    };
    Ok(exponent.exp2())
}

impl BuiltCircuit {
    /// Same circuit with the gate at `index` removed (mutation control).
    pub fn without_gate(&self, index: usize) -> BuiltCircuit {
        BuiltCircuit {
            circuit: self.circuit.without_gate(index),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Edge;

    #[test]
    fn index_widths() {
        assert_eq!(index_width(1), 1);
        assert_eq!(index_width(2), 1);
        assert_eq!(index_width(3), 2);
        assert_eq!(index_width(4), 2);
        assert_eq!(index_width(5), 3);
        assert_eq!(index_width(8), 3);
        assert_eq!(index_width(9), 4);
    }

    #[test]
    fn threesum_value_width() {
        let i = |u| ThreeSumInstance::new(u, vec![0]).unwrap();
        assert_eq!(derive_params_threesum(&i(1)), (1, 2));
        assert_eq!(derive_params_threesum(&i(10)), (1, 5));
        assert_eq!(derive_params_threesum(&i(8)).1, 5);
        assert_eq!(derive_params_threesum(&i(64)).1, 8);
    }

    #[test]
    fn nwt_value_width() {
        let g = |m| NwtInstance::new(3, m, vec![]).unwrap();
        assert_eq!(derive_params_nwt(&g(1)), (2, 2));
        assert_eq!(derive_params_nwt(&g(2)).1, 3);
        assert_eq!(derive_params_nwt(&g(3)).1, 3);
        assert_eq!(derive_params_nwt(&g(4)).1, 4);
    }

    #[test]
    fn w_matrix_entries() {
        let g = NwtInstance::new(2, 1, vec![Edge { i: 1, j: 2, w: -1 }]).unwrap();
        let w = build_w_matrix(&g, 2);
        assert_eq!(w[0][1], 0);
        assert_eq!(w[1][0], 0);
        assert_eq!(w[0][0], 3);
        assert_eq!(w[2][1], 3);
        assert_eq!(w[3][3], 3);
    }

    #[test]
    fn ov_layout() {
        let b = |x| BitString::from_int(x, 1);
        let inst = OvInstance::new(1, vec![b(1), b(0)], vec![b(1), b(0)]).unwrap();
        for mode in [Mode::Qram, Mode::Explicit] {
            let built = build_ov_circuit(&inst, mode).unwrap();
            assert_eq!(built.circuit.n_qubits(), 10);
            assert_eq!(built.denom_exponent, 9);
            assert_eq!(built.circuit.h_layer_size(), 2);
            assert_eq!(built.circuit.measurement().z_qubits.len(), 2);
            assert_eq!(built.circuit.measurement().unmeasured.len(), 1);
        }
        let q = build_ov_circuit(&inst, Mode::Qram).unwrap();
        let loads = q
            .circuit
            .gates()
            .iter()
            .filter(|g| matches!(g, Gate::QramLoad { .. }))
            .count();
        assert_eq!(loads, 2);
    }

    #[test]
    fn nwt_and_threesum_layout() {
        let g = NwtInstance::new(3, 1, vec![]).unwrap();
        let built = build_nwt_circuit(&g, Mode::Qram).unwrap();
        assert_eq!(built.circuit.n_qubits(), 30);
        assert_eq!(built.denom_exponent, 32);
        let s = ThreeSumInstance::new(1, vec![0]).unwrap();
        let built = build_threesum_circuit(&s, Mode::Qram).unwrap();
        assert_eq!(built.circuit.n_qubits(), 4 + 6 + 8);
        assert_eq!(built.denom_exponent, 17);
    }

    #[test]
    fn hardness_examples() {
        let t = hardness_time(Problem::Ov, 10.0, 0.5, 1.0).unwrap();
        assert!((t - 0.75f64.exp2()).abs() < 1e-12);
        assert_eq!(hardness_time(Problem::ThreeSum, 18.0, 2.0, 0.3).unwrap(), 1.0);
        let n = 4.0 * 3f64.log2() + 22.0;
        assert!((hardness_time(Problem::Nwt, n, 0.5, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(hardness_time(Problem::Ov, 10.0, 0.5, 0.0).is_err());
    }
}
