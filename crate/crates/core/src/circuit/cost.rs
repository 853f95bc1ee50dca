//! Cost model for multi-controlled gates and the matching Toffoli-level
//! expansion.
//!
//! A `d`-controlled NOT with one borrowed ancilla `w` (any state, restored):
//!
//! * `d = 1, 2`: a CX or a Toffoli, counted as one primitive.
//! * `d = 3`: the borrowed-ancilla ladder with `w` as its single work bit,
//!   4 Toffolis.
//! * `d >= 4`: split the controls into `g1` (`⌈d/2⌉`) and `g2`, then
//!   `Λ(g1 → w) Λ(g2 ∪ {w} → t) Λ(g1 → w) Λ(g2 ∪ {w} → t)`, where each half
//!   borrows its work bits from the other half's controls. For `d >= 5` this
//!   is `8(d−3)` Toffolis; for `d = 4` it is 10.

use crate::circuit::{Circuit, Gate, Qubit, Step};
use crate::{Error, Result};

/// Toffoli-equivalent count of a `d`-controlled NOT with one borrowed
/// ancilla.
pub fn mcx_toffoli_cost(d: usize) -> Result<u64> {
    match d {
        0 => Err(Error::ZeroControlCount),
        1 | 2 => Ok(1),
        3 => Ok(4),
        4 => Ok(10),
        _ => Ok(8 * (d as u64 - 3)),
    }
}

/// Cost of the ladder construction for `m` controls with `m - 2` borrowed
/// work bits.
#[cfg(test)]
fn ladder_cost(m: usize) -> u64 {
    if m <= 2 {
        1
    } else {
        4 * (m as u64 - 2)
    }
}

/// Toffoli-equivalent cost of an `McBitmask` gate: one generalized Toffoli
/// per set mask bit.
pub fn mcbitmask_cost(controls: usize, mask_ones: usize) -> Result<u64> {
    Ok(mask_ones as u64 * mcx_toffoli_cost(controls)?)
}

/// Emits `Λ_m(X)` on `target` via the borrowed-ancilla ladder. `work` must
/// hold at least `m - 2` qubits disjoint from controls and target; their
/// state is arbitrary and is restored.
fn emit_ladder(out: &mut Vec<Gate>, controls: &[Qubit], target: Qubit, work: &[Qubit]) {
    let m = controls.len();
    match m {
        1 => out.push(Gate::Cx {
            control: controls[0],
            target,
        }),
        2 => out.push(Gate::Toffoli {
            c1: controls[0],
            c2: controls[1],
            target,
        }),
        _ => {
            assert!(work.len() >= m - 2, "ladder needs {} work qubits", m - 2);
            // Stage k (k = 2..m-1, zero-based control index) is
            // T(controls[k], work[k-2] -> y_k), with y_{m-1} = target and
            // y_k = work[k-1] otherwise.
            let stage = |k: usize| Gate::Toffoli {
                c1: controls[k],
                c2: work[k - 2],
                target: if k == m - 1 { target } else { work[k - 1] },
            };
            let base = Gate::Toffoli {
                c1: controls[0],
                c2: controls[1],
                target: work[0],
            };
            out.extend((2..m).rev().map(stage));
            out.push(base.clone());
            out.extend((2..m).map(stage));
            out.extend((2..m - 1).rev().map(stage));
            out.push(base);
            out.extend((2..m - 1).map(stage));
        }
    }
}

/// Emits a `d`-controlled NOT on `target` using only `ancilla` as extra
/// (borrowed) space. Gate count equals [`mcx_toffoli_cost`].
pub fn emit_mcx(out: &mut Vec<Gate>, controls: &[Qubit], target: Qubit, ancilla: Qubit) {
    let d = controls.len();
    match d {
        0 => panic!("no controls"),
        1 | 2 => emit_ladder(out, controls, target, &[]),
        3 => emit_ladder(out, controls, target, &[ancilla]),
        _ => {
            let m1 = d.div_ceil(2);
            let (g1, g2) = controls.split_at(m1);
            let mut g2w: Vec<Qubit> = g2.to_vec();
            g2w.push(ancilla);
            // Λ(g1 -> ancilla) borrows from g2 and the target.
            let mut borrow1: Vec<Qubit> = g2.to_vec();
            borrow1.push(target);
            // Λ(g2 ∪ {ancilla} -> target) borrows from g1.
            let borrow2 = g1;
            for _ in 0..2 {
                emit_ladder(out, g1, ancilla, &borrow1);
                emit_ladder(out, &g2w, target, borrow2);
            }
        }
    }
}

/// Rewrites every `McBitmask` into CX/Toffoli gates using its borrowed
/// ancilla. Other gates and step tags are preserved.
pub fn expand_mcbitmask(circuit: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(circuit.gates().len());
    let mut marks = Vec::with_capacity(circuit.step_marks().len());
    let mut next_mark = circuit.step_marks().iter().peekable();
    for (i, gate) in circuit.gates().iter().enumerate() {
        while let Some(&&(start, step)) = next_mark.peek() {
            if start > i {
                break;
            }
            push_mark(&mut marks, gates.len(), step);
            next_mark.next();
        }
        match gate {
            Gate::McBitmask {
                controls,
                mask,
                targets,
                ancilla,
            } => {
                for (t, bit) in targets.iter().zip(mask.iter()) {
                    if bit {
                        emit_mcx(&mut gates, controls, *t, *ancilla);
                    }
                }
            }
            other => gates.push(other.clone()),
        }
    }
    for &(_, step) in next_mark {
        push_mark(&mut marks, gates.len(), step);
    }
    circuit.with_gates(gates, marks)
}

fn push_mark(marks: &mut Vec<(usize, Step)>, at: usize, step: Step) {
    if let Some(last) = marks.last_mut() {
        if last.0 == at {
            last.1 = step;
            return;
        }
    }
    marks.push((at, step));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{apply_classical, BitString};

    #[test]
    fn cost_values() {
        assert_eq!(mcx_toffoli_cost(0), Err(Error::ZeroControlCount));
        assert_eq!(mcx_toffoli_cost(1), Ok(1));
        assert_eq!(mcx_toffoli_cost(2), Ok(1));
        assert_eq!(mcx_toffoli_cost(3), Ok(4));
        assert_eq!(mcx_toffoli_cost(4), Ok(10));
        assert_eq!(mcx_toffoli_cost(5), Ok(16));
        assert_eq!(mcx_toffoli_cost(7), Ok(32));
    }

    #[test]
    fn split_cost_matches_model() {
        for d in 4..=20usize {
            let m1 = d.div_ceil(2);
            let m2 = d - m1;
            assert_eq!(
                2 * ladder_cost(m1) + 2 * ladder_cost(m2 + 1),
                mcx_toffoli_cost(d).unwrap(),
                "d={d}"
            );
        }
    }

    /// Exhaustive check that the expansion is a `d`-controlled NOT for every
    /// input, including every ancilla value, with the ancilla restored.
    #[test]
    fn expansion_is_exact() {
        for d in 1..=8usize {
            let n = d as u32 + 2;
            let controls: Vec<Qubit> = (0..d as u32).map(Qubit).collect();
            let target = Qubit(d as u32);
            let anc = Qubit(d as u32 + 1);
            let mut gates = Vec::new();
            emit_mcx(&mut gates, &controls, target, anc);
            assert_eq!(gates.len() as u64, mcx_toffoli_cost(d).unwrap(), "d={d}");
            assert!(gates
                .iter()
                .all(|g| matches!(g, Gate::Toffoli { .. } | Gate::Cx { .. })));
            let mut c = Circuit::new(&[("q", n)]).unwrap();
            for g in gates {
                c.push(g).unwrap();
            }
            let all = (1u64 << d) - 1;
            for v in 0..(1u64 << n) {
                let mut s: Vec<bool> = (0..n).map(|i| v >> i & 1 == 1).collect();
                apply_classical(&c, &mut s).unwrap();
                let out: u64 = s.iter().enumerate().map(|(i, &b)| (b as u64) << i).sum();
                let expected = if v & all == all { v ^ (1 << d) } else { v };
                assert_eq!(out, expected, "d={d} v={v:b}");
            }
        }
    }

    #[test]
    fn expand_pass_preserves_action_and_steps() {
        let mut c = Circuit::new(&[("c", 5), ("t", 3), ("anc", 1)]).unwrap();
        let ctl = c.register("c").unwrap().qubits();
        let t = c.register("t").unwrap().qubits();
        let anc = c.register("anc").unwrap().bit(0);
        c.begin_step(Step::Numbered(1));
        c.x(ctl[0]).unwrap();
        c.begin_step(Step::Numbered(2));
        c.emit_mcbitmask(&ctl, BitString::from_int(0b101, 3), &t, anc)
            .unwrap();
        c.begin_step(Step::Numbered(3));
        c.x(ctl[0]).unwrap();
        let e = expand_mcbitmask(&c);
        assert_eq!(e.gates().len(), 2 + 2 * 16);
        assert_eq!(e.step_of(0), Some(Step::Numbered(1)));
        assert_eq!(e.step_of(1), Some(Step::Numbered(2)));
        assert_eq!(e.step_of(33), Some(Step::Numbered(3)));
        for v in 0..(1u64 << 9) {
            let mut a: Vec<bool> = (0..9).map(|i| v >> i & 1 == 1).collect();
            let mut b = a.clone();
            apply_classical(&c, &mut a).unwrap();
            apply_classical(&e, &mut b).unwrap();
            assert_eq!(a, b);
        }
    }
}
