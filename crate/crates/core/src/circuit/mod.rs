//! Qubit and register bookkeeping plus the gate vocabulary shared by every
//! construction in this crate.
//!
//! Bit order is little-endian throughout: index 0 of a [`BitString`] or of a
//! [`Register`] is the least-significant bit.

mod bits;
pub mod cost;
pub mod text;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use bits::BitString;

use crate::dataload::DataTable;
use crate::{Error, Result};

/// Index of a qubit within a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Qubit(pub u32);

impl Qubit {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A named, contiguous range of qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub offset: u32,
    pub width: u32,
}

impl Register {
    /// The `i`-th qubit of the register (bit `i` of the value it holds).
    pub fn bit(&self, i: u32) -> Qubit {
        assert!(i < self.width, "bit {i} outside register `{}`", self.name);
        Qubit(self.offset + i)
    }

    pub fn qubits(&self) -> Vec<Qubit> {
        (self.offset..self.offset + self.width).map(Qubit).collect()
    }

    /// The first `count` qubits, e.g. the low `d` bits of a `d+1`-wide sum
    /// register.
    pub fn low(&self, count: u32) -> Vec<Qubit> {
        assert!(count <= self.width);
        (self.offset..self.offset + count).map(Qubit).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    H(Qubit),
    X(Qubit),
    Z(Qubit),
    Cx {
        control: Qubit,
        target: Qubit,
    },
    Toffoli {
        c1: Qubit,
        c2: Qubit,
        target: Qubit,
    },
    /// `Λ_d(X^mask)`: flips `targets[j]` for every set `mask[j]` when all
    /// controls are 1. `ancilla` is the borrowed qubit a Toffoli-level
    /// decomposition would use; simulation never touches it.
    McBitmask {
        controls: Vec<Qubit>,
        mask: BitString,
        targets: Vec<Qubit>,
        ancilla: Qubit,
    },
    /// XORs `table[address]` into `data` (all-zero for absent addresses).
    QramLoad {
        address: Vec<Qubit>,
        data: Vec<Qubit>,
        table: String,
    },
}

impl Gate {
    /// Every qubit the gate names, in a fixed order.
    pub fn qubits(&self) -> Vec<Qubit> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => vec![*q],
            Gate::Cx { control, target } => vec![*control, *target],
            Gate::Toffoli { c1, c2, target } => vec![*c1, *c2, *target],
            Gate::McBitmask {
                controls,
                targets,
                ancilla,
                ..
            } => controls
                .iter()
                .chain(targets)
                .chain(std::iter::once(ancilla))
                .copied()
                .collect(),
            Gate::QramLoad { address, data, .. } => address.iter().chain(data).copied().collect(),
        }
    }

    pub fn is_h(&self) -> bool {
        matches!(self, Gate::H(_))
    }
}

/// Which step of a construction emitted a gate; the accountant compares
/// per-step tallies against the published bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Step {
    Numbered(u8),
    /// The explicit product of loader unitaries replacing the QRAM step.
    Loader,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Numbered(n) => write!(f, "{n}"),
            Step::Loader => f.write_str("loader"),
        }
    }
}

impl From<Step> for String {
    fn from(s: Step) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for Step {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl std::str::FromStr for Step {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "loader" {
            return Ok(Step::Loader);
        }
        s.parse::<u8>()
            .map(Step::Numbered)
            .map_err(|_| format!("bad step label `{s}`"))
    }
}

/// Z-measured qubits accept on 0, X-measured qubits accept on `|+>`, and the
/// unmeasured qubits (the shared ancilla) are traced out.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    pub z_qubits: Vec<Qubit>,
    pub x_qubits: Vec<Qubit>,
    pub unmeasured: Vec<Qubit>,
}

impl MeasurementPlan {
    pub fn all_x(n_qubits: u32) -> Self {
        MeasurementPlan {
            x_qubits: (0..n_qubits).map(Qubit).collect(),
            ..Default::default()
        }
    }

    fn validate(&self, n_qubits: u32) -> Result<()> {
        let mut seen = BTreeSet::new();
        for q in self.z_qubits.iter().chain(&self.x_qubits).chain(&self.unmeasured) {
            if q.0 >= n_qubits {
                return Err(Error::BadMeasurementPlan(format!("qubit {q} out of range")));
            }
            if !seen.insert(*q) {
                return Err(Error::BadMeasurementPlan(format!("qubit {q} listed twice")));
            }
        }
        if seen.len() != n_qubits as usize {
            return Err(Error::BadMeasurementPlan(format!(
                "{} of {} qubits covered",
                seen.len(),
                n_qubits
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n_qubits: u32,
    registers: Vec<Register>,
    gates: Vec<Gate>,
    /// `(first gate index, step)`; a step runs until the next mark.
    step_marks: Vec<(usize, Step)>,
    tables: Vec<DataTable>,
    measurement: MeasurementPlan,
}

impl Circuit {
    /// Lays registers out contiguously in declaration order. The measurement
    /// plan starts as "every qubit X-measured".
    pub fn new<S: AsRef<str>>(layout: &[(S, u32)]) -> Result<Self> {
        let mut registers: Vec<Register> = Vec::with_capacity(layout.len());
        let mut offset = 0u32;
        for (name, width) in layout {
            let name = name.as_ref();
            if registers.iter().any(|r| r.name == name) {
                return Err(Error::DuplicateRegister(name.to_owned()));
            }
            if *width == 0 {
                return Err(Error::ZeroWidth(name.to_owned()));
            }
            registers.push(Register {
                name: name.to_owned(),
                offset,
                width: *width,
            });
            offset += width;
        }
        Ok(Circuit {
            n_qubits: offset,
            registers,
            gates: Vec::new(),
            step_marks: Vec::new(),
            tables: Vec::new(),
            measurement: MeasurementPlan::all_x(offset),
        })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Result<&Register> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::UnknownRegister(name.to_owned()))
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn measurement(&self) -> &MeasurementPlan {
        &self.measurement
    }

    pub fn tables(&self) -> &[DataTable] {
        &self.tables
    }

    pub fn table(&self, id: &str) -> Result<&DataTable> {
        self.tables
            .iter()
            .find(|t| t.id == id)
            .ok_or_else(|| Error::UnknownTable(id.to_owned()))
    }

    pub fn step_marks(&self) -> &[(usize, Step)] {
        &self.step_marks
    }

    /// Number of leading H gates. The path-sum backend requires that no H
    /// follows a non-H gate.
    pub fn h_layer_size(&self) -> usize {
        self.gates.iter().take_while(|g| g.is_h()).count()
    }

    /// Step of the gate at `index`, or `None` if it precedes every mark.
    pub fn step_of(&self, index: usize) -> Option<Step> {
        self.step_marks
            .iter()
            .take_while(|(start, _)| *start <= index)
            .last()
            .map(|(_, s)| *s)
    }

    /// Gates emitted from now on belong to `step`.
    pub fn begin_step(&mut self, step: Step) {
        let at = self.gates.len();
        if let Some(last) = self.step_marks.last_mut() {
            if last.0 == at {
                last.1 = step;
                return;
            }
        }
        self.step_marks.push((at, step));
    }

    pub fn set_measurement(&mut self, plan: MeasurementPlan) -> Result<()> {
        plan.validate(self.n_qubits)?;
        self.measurement = plan;
        Ok(())
    }

    pub fn add_table(&mut self, table: DataTable) -> Result<()> {
        if self.tables.iter().any(|t| t.id == table.id) {
            return Err(Error::DuplicateTable(table.id));
        }
        self.tables.push(table);
        Ok(())
    }

    fn check_qubits(&self, qubits: &[Qubit]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for q in qubits {
            if q.0 >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q.0,
                    n_qubits: self.n_qubits,
                });
            }
            if !seen.insert(q.0) {
                return Err(Error::OverlappingQubits(q.0));
            }
        }
        Ok(())
    }

    /// Appends a gate after checking qubit bounds, disjointness and widths.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        self.check_qubits(&gate.qubits())?;
        match &gate {
            Gate::McBitmask {
                controls,
                mask,
                targets,
                ..
            } => {
                if controls.is_empty() {
                    return Err(Error::NoControls);
                }
                if mask.width() != targets.len() {
                    return Err(Error::WidthMismatch {
                        expected: targets.len(),
                        actual: mask.width(),
                    });
                }
            }
            Gate::QramLoad {
                address,
                data,
                table,
            } => {
                let t = self.table(table)?;
                if t.address_width as usize != address.len() {
                    return Err(Error::WidthMismatch {
                        expected: t.address_width as usize,
                        actual: address.len(),
                    });
                }
                if t.data_width as usize != data.len() {
                    return Err(Error::WidthMismatch {
                        expected: t.data_width as usize,
                        actual: data.len(),
                    });
                }
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn h(&mut self, q: Qubit) -> Result<()> {
        self.push(Gate::H(q))
    }

    pub fn x(&mut self, q: Qubit) -> Result<()> {
        self.push(Gate::X(q))
    }

    pub fn z(&mut self, q: Qubit) -> Result<()> {
        self.push(Gate::Z(q))
    }

    pub fn cx(&mut self, control: Qubit, target: Qubit) -> Result<()> {
        self.push(Gate::Cx { control, target })
    }

    pub fn toffoli(&mut self, c1: Qubit, c2: Qubit, target: Qubit) -> Result<()> {
        self.push(Gate::Toffoli { c1, c2, target })
    }

    /// Appends `Λ_d(X^mask)` with `d = controls.len()`.
    pub fn emit_mcbitmask(
        &mut self,
        controls: &[Qubit],
        mask: BitString,
        targets: &[Qubit],
        ancilla: Qubit,
    ) -> Result<()> {
        self.push(Gate::McBitmask {
            controls: controls.to_vec(),
            mask,
            targets: targets.to_vec(),
            ancilla,
        })
    }

    /// X on every qubit whose pattern bit is 0: the `X^{x⊕1}` conjugation
    /// that turns an all-ones control into a match on `pattern`.
    pub fn x_on_zeros(&mut self, qubits: &[Qubit], pattern: &BitString) -> Result<()> {
        if qubits.len() != pattern.width() {
            return Err(Error::WidthMismatch {
                expected: qubits.len(),
                actual: pattern.width(),
            });
        }
        for (q, bit) in qubits.iter().zip(pattern.iter()) {
            if !bit {
                self.x(*q)?;
            }
        }
        Ok(())
    }

    /// X on every qubit whose pattern bit is 1 (prepares `|pattern>` from
    /// zeros).
    pub fn x_on_ones(&mut self, qubits: &[Qubit], pattern: &BitString) -> Result<()> {
        if qubits.len() != pattern.width() {
            return Err(Error::WidthMismatch {
                expected: qubits.len(),
                actual: pattern.width(),
            });
        }
        for (q, bit) in qubits.iter().zip(pattern.iter()) {
            if bit {
                self.x(*q)?;
            }
        }
        Ok(())
    }

    /// A copy with the gate at `index` deleted; step marks are shifted to
    /// stay attached to their gates.
    pub fn without_gate(&self, index: usize) -> Circuit {
        let mut c = self.clone();
        c.gates.remove(index);
        for mark in &mut c.step_marks {
            if mark.0 > index {
                mark.0 -= 1;
            }
        }
        c
    }

    /// Replaces the gate list, keeping registers, tables and measurement.
    pub(crate) fn with_gates(&self, gates: Vec<Gate>, step_marks: Vec<(usize, Step)>) -> Circuit {
        Circuit {
            gates,
            step_marks,
            ..self.clone()
        }
    }
}

/// Applies the classical (non-H) part of a circuit to a computational basis
/// state given as one `bool` per qubit. Returns the image and the sign picked
/// up from Z gates. H gates are rejected.
pub fn apply_classical(circuit: &Circuit, state: &mut [bool]) -> Result<i8> {
    let mut sign = 1i8;
    for gate in circuit.gates() {
        sign *= apply_gate_classical(circuit, gate, state)?;
    }
    Ok(sign)
}

/// Single-gate form of [`apply_classical`].
pub fn apply_gate_classical(circuit: &Circuit, gate: &Gate, state: &mut [bool]) -> Result<i8> {
    match gate {
        Gate::H(q) => {
            return Err(Error::StructureViolation(format!(
                "H on qubit {q} is not a basis permutation"
            )))
        }
        Gate::X(q) => state[q.index()] ^= true,
        Gate::Z(q) => {
            if state[q.index()] {
                return Ok(-1);
            }
        }
        Gate::Cx { control, target } => {
            if state[control.index()] {
                state[target.index()] ^= true;
            }
        }
        Gate::Toffoli { c1, c2, target } => {
            if state[c1.index()] && state[c2.index()] {
                state[target.index()] ^= true;
            }
        }
        Gate::McBitmask {
            controls,
            mask,
            targets,
            ..
        } => {
            if controls.iter().all(|c| state[c.index()]) {
                for (t, bit) in targets.iter().zip(mask.iter()) {
                    if bit {
                        state[t.index()] ^= true;
                    }
                }
            }
        }
        Gate::QramLoad {
            address,
            data,
            table,
        } => {
            let addr = BitString::from_bits(address.iter().map(|q| state[q.index()]).collect());
            let value = circuit.table(table)?.lookup(&addr)?;
            for (q, bit) in data.iter().zip(value.iter()) {
                if bit {
                    state[q.index()] ^= true;
                }
            }
        }
    }
    Ok(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: u32, value: u64) -> Vec<bool> {
        (0..n).map(|i| value >> i & 1 == 1).collect()
    }

    fn to_int(state: &[bool]) -> u64 {
        state
            .iter()
            .enumerate()
            .map(|(i, &b)| (b as u64) << i)
            .sum()
    }

    #[test]
    fn registers_are_contiguous() {
        let c = Circuit::new(&[("a", 3), ("b", 3)]).unwrap();
        assert_eq!(c.n_qubits(), 6);
        assert_eq!(c.register("b").unwrap().offset, 3);
        assert!(c.gates().is_empty());
    }

    #[test]
    fn empty_layout_is_zero_qubits() {
        let c = Circuit::new::<&str>(&[]).unwrap();
        assert_eq!(c.n_qubits(), 0);
    }

    #[test]
    fn duplicate_and_zero_width_rejected() {
        assert_eq!(
            Circuit::new(&[("r1", 2), ("r1", 2)]),
            Err(Error::DuplicateRegister("r1".into()))
        );
        assert_eq!(Circuit::new(&[("r", 0)]), Err(Error::ZeroWidth("r".into())));
    }

    #[test]
    fn gate_validation() {
        let mut c = Circuit::new(&[("q", 3)]).unwrap();
        assert!(matches!(c.x(Qubit(3)), Err(Error::QubitOutOfRange { .. })));
        assert_eq!(c.cx(Qubit(1), Qubit(1)), Err(Error::OverlappingQubits(1)));
        assert_eq!(
            c.emit_mcbitmask(&[Qubit(0)], BitString::zeros(2), &[Qubit(1)], Qubit(2)),
            Err(Error::WidthMismatch { expected: 1, actual: 2 })
        );
        assert_eq!(
            c.emit_mcbitmask(&[], BitString::zeros(1), &[Qubit(1)], Qubit(2)),
            Err(Error::NoControls)
        );
        assert_eq!(
            c.emit_mcbitmask(&[Qubit(0)], BitString::zeros(1), &[Qubit(1)], Qubit(0)),
            Err(Error::OverlappingQubits(0))
        );
    }

    #[test]
    fn single_control_mask_is_cx() {
        let mut a = Circuit::new(&[("q", 3)]).unwrap();
        a.emit_mcbitmask(&[Qubit(0)], BitString::from_int(1, 1), &[Qubit(1)], Qubit(2))
            .unwrap();
        let mut b = Circuit::new(&[("q", 3)]).unwrap();
        b.cx(Qubit(0), Qubit(1)).unwrap();
        for v in 0..8 {
            let (mut sa, mut sb) = (basis(3, v), basis(3, v));
            apply_classical(&a, &mut sa).unwrap();
            apply_classical(&b, &mut sb).unwrap();
            assert_eq!(sa, sb);
        }
    }

    #[test]
    fn mask_flips_selected_targets_only_when_controls_set() {
        // controls q0,q1; targets q2,q3,q4; mask (1,0,1); ancilla q5
        let mut c = Circuit::new(&[("q", 6)]).unwrap();
        c.emit_mcbitmask(
            &[Qubit(0), Qubit(1)],
            BitString::from_bits(vec![true, false, true]),
            &[Qubit(2), Qubit(3), Qubit(4)],
            Qubit(5),
        )
        .unwrap();
        for v in 0..64u64 {
            let mut s = basis(6, v);
            apply_classical(&c, &mut s).unwrap();
            let expected = if v & 0b11 == 0b11 { v ^ 0b10100 } else { v };
            assert_eq!(to_int(&s), expected);
        }
    }

    #[test]
    fn zero_mask_is_identity() {
        let mut c = Circuit::new(&[("q", 5)]).unwrap();
        c.emit_mcbitmask(&[Qubit(0)], BitString::zeros(3), &[Qubit(1), Qubit(2), Qubit(3)], Qubit(4))
            .unwrap();
        for v in 0..32 {
            let mut s = basis(5, v);
            apply_classical(&c, &mut s).unwrap();
            assert_eq!(to_int(&s), v);
        }
    }

    #[test]
    fn negated_controls_via_x_conjugation() {
        // Up to 6 controls: fire exactly on the chosen control pattern.
        for d in 1..=6u32 {
            for pattern in 0..(1u64 << d) {
                let pat = BitString::from_int(pattern, d as usize);
                let mut c = Circuit::new(&[("c", d), ("t", 1), ("anc", 1)]).unwrap();
                let controls = c.register("c").unwrap().qubits();
                let t = c.register("t").unwrap().bit(0);
                let anc = c.register("anc").unwrap().bit(0);
                c.x_on_zeros(&controls, &pat).unwrap();
                c.emit_mcbitmask(&controls, BitString::from_int(1, 1), &[t], anc)
                    .unwrap();
                c.x_on_zeros(&controls, &pat).unwrap();
                for v in 0..(1u64 << (d + 2)) {
                    let mut s = basis(d + 2, v);
                    apply_classical(&c, &mut s).unwrap();
                    let fire = v & ((1 << d) - 1) == pattern;
                    let expected = if fire { v ^ (1 << d) } else { v };
                    assert_eq!(to_int(&s), expected, "d={d} pattern={pattern} v={v}");
                }
            }
        }
    }

    #[test]
    fn without_gate_shifts_step_marks() {
        let mut c = Circuit::new(&[("q", 2)]).unwrap();
        c.begin_step(Step::Numbered(1));
        c.x(Qubit(0)).unwrap();
        c.x(Qubit(1)).unwrap();
        c.begin_step(Step::Numbered(2));
        c.z(Qubit(0)).unwrap();
        let m = c.without_gate(0);
        assert_eq!(m.gates().len(), 2);
        assert_eq!(m.step_of(1), Some(Step::Numbered(2)));
        assert_eq!(m.step_of(0), Some(Step::Numbered(1)));
    }

    #[test]
    fn measurement_plan_must_partition() {
        let mut c = Circuit::new(&[("q", 3)]).unwrap();
        let bad = MeasurementPlan {
            z_qubits: vec![Qubit(0)],
            x_qubits: vec![Qubit(1)],
            unmeasured: vec![],
        };
        assert!(matches!(c.set_measurement(bad), Err(Error::BadMeasurementPlan(_))));
        let dup = MeasurementPlan {
            z_qubits: vec![Qubit(0)],
            x_qubits: vec![Qubit(1), Qubit(0)],
            unmeasured: vec![Qubit(2)],
        };
        assert!(c.set_measurement(dup).is_err());
    }
}
