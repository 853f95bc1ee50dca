//! Exact path-sum simulation for circuits of the form
//! `(H layer) · (basis permutation with Z phases)`.
//!
//! Branch `b` of the H layer is a basis state; the remaining gates map it to
//! `±|f(b)>`. Projecting onto `|0>` on the Z qubits and `|+>` on the X qubits
//! leaves, for each value `a` of the unmeasured qubits, the integer
//! `S_a = Σ sign(b)` over accepted branches ending with those qubits equal to
//! `a`. Then `p_acc = Σ_a S_a^2 / 2^{h + |X|}`, an exact dyadic rational.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::circuit::{Circuit, Gate};
use crate::dyadic::Dyadic;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimOutcome {
    /// `Σ sign(b)` over every accepted branch, regardless of the final
    /// unmeasured value.
    pub signed_sum: i128,
    /// `S_a` per final value of the unmeasured qubits (packed as bits in
    /// the order of the measurement plan), zero entries omitted.
    pub sums_by_unmeasured: Vec<(u128, i128)>,
    /// `Σ_a S_a^2`.
    pub numerator: u128,
    /// `h + |X|`.
    pub exponent: u32,
    pub p_acc_exact: Dyadic,
    pub branches: u64,
    pub accepted_branches: u64,
    /// Every branch ends with the unmeasured qubits back at 0.
    pub ancilla_restored: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PathSumOptions {
    /// Evaluate branches with rayon.
    pub parallel: bool,
    /// Visit branches in a seeded permuted order instead of counting up.
    pub order_seed: Option<u64>,
}

#[derive(Debug, Clone)]
enum Op {
    Flip { ctrl: u128, flip: u128 },
    Phase { mask: u128 },
    Lookup { address: Vec<u32>, flips: Vec<u128> },
}

/// A circuit lowered to bit-mask operations on a packed `u128` state.
#[derive(Debug, Clone)]
pub struct Compiled {
    h_qubits: Vec<u32>,
    ops: Vec<Op>,
    z_mask: u128,
    unmeasured: Vec<u32>,
    unmeasured_mask: u128,
    exponent: u32,
}

fn bit(q: u32) -> u128 {
    1u128 << q
}

fn mask_of(qs: impl IntoIterator<Item = u32>) -> u128 {
    qs.into_iter().fold(0, |m, q| m | bit(q))
}

pub fn compile(circuit: &Circuit) -> Result<Compiled> {
    if circuit.n_qubits() > 128 {
        return Err(Error::TooManyQubits {
            n_qubits: circuit.n_qubits(),
            max: 128,
        });
    }
    let h = circuit.h_layer_size();
    let gates = circuit.gates();
    let mut h_qubits = Vec::with_capacity(h);
    let mut seen = 0u128;
    for g in &gates[..h] {
        let Gate::H(q) = g else { unreachable!() };
        if seen & bit(q.0) != 0 {
            return Err(Error::StructureViolation(format!(
                "second H on qubit {q} in the H layer"
            )));
        }
        seen |= bit(q.0);
        h_qubits.push(q.0);
    }
    if h >= 64 {
        return Err(Error::Overflow("more than 63 Hadamards"));
    }
    let mut ops = Vec::with_capacity(gates.len() - h);
    for (i, g) in gates.iter().enumerate().skip(h) {
        let op = match g {
            Gate::H(q) => {
                return Err(Error::StructureViolation(format!(
                    "H on qubit {q} at gate {i} follows a non-H gate"
                )))
            }
            Gate::X(q) => Op::Flip {
                ctrl: 0,
                flip: bit(q.0),
            },
            Gate::Z(q) => Op::Phase { mask: bit(q.0) },
            Gate::Cx { control, target } => Op::Flip {
                ctrl: bit(control.0),
                flip: bit(target.0),
            },
            Gate::Toffoli { c1, c2, target } => Op::Flip {
                ctrl: bit(c1.0) | bit(c2.0),
                flip: bit(target.0),
            },
            Gate::McBitmask {
                controls,
                mask,
                targets,
                ..
            } => Op::Flip {
                ctrl: mask_of(controls.iter().map(|q| q.0)),
                flip: mask_of(targets.iter().zip(mask.iter()).filter(|(_, b)| *b).map(|(q, _)| q.0)),
            },
            Gate::QramLoad {
                address,
                data,
                table,
            } => {
                let t = circuit.table(table)?;
                if address.len() > 24 {
                    return Err(Error::Overflow("QRAM address wider than 24 bits"));
                }
                let mut flips = vec![0u128; 1 << address.len()];
                for (&a, value) in &t.entries {
                    flips[a as usize] =
                        mask_of(data.iter().zip(value.iter()).filter(|(_, b)| *b).map(|(q, _)| q.0));
                }
                Op::Lookup {
                    address: address.iter().map(|q| q.0).collect(),
                    flips,
                }
            }
        };
        ops.push(op);
    }
    let m = circuit.measurement();
    let unmeasured: Vec<u32> = m.unmeasured.iter().map(|q| q.0).collect();
    Ok(Compiled {
        h_qubits,
        ops,
        z_mask: mask_of(m.z_qubits.iter().map(|q| q.0)),
        unmeasured_mask: mask_of(unmeasured.iter().copied()),
        unmeasured,
        exponent: (h + m.x_qubits.len()) as u32,
    })
}

impl Compiled {
    pub fn h_count(&self) -> u32 {
        self.h_qubits.len() as u32
    }

    /// Input basis state of branch `b`.
    pub fn branch_input(&self, b: u64) -> u128 {
        self.h_qubits
            .iter()
            .enumerate()
            .filter(|(i, _)| b >> i & 1 == 1)
            .fold(0, |s, (_, &q)| s | bit(q))
    }

    /// Runs the permutation part on one basis state: `(f(state), sign)`.
    pub fn run(&self, mut state: u128) -> (u128, i8) {
        let mut sign = 1i8;
        for op in &self.ops {
            match op {
                Op::Flip { ctrl, flip } => {
                    if state & ctrl == *ctrl {
                        state ^= flip;
                    }
                }
                Op::Phase { mask } => {
                    if state & mask != 0 {
                        sign = -sign;
                    }
                }
                Op::Lookup { address, flips } => {
                    let a = address
                        .iter()
                        .enumerate()
                        .fold(0usize, |a, (i, &q)| a | ((state >> q & 1) as usize) << i);
                    state ^= flips[a];
                }
            }
        }
        (state, sign)
    }

    fn unmeasured_value(&self, state: u128) -> u128 {
        self.unmeasured
            .iter()
            .enumerate()
            .fold(0, |v, (i, &q)| v | (state >> q & 1) << i)
    }
}

#[derive(Default)]
struct Acc {
    sums: HashMap<u128, i128>,
    signed: i128,
    accepted: u64,
    restored: bool,
}

impl Acc {
    fn new() -> Self {
        Acc {
            restored: true,
            ..Default::default()
        }
    }

    fn add(mut self, c: &Compiled, b: u64) -> Self {
        let (out, sign) = c.run(c.branch_input(b));
        if out & c.unmeasured_mask != 0 {
            self.restored = false;
        }
        if out & c.z_mask == 0 {
            self.accepted += 1;
            self.signed += sign as i128;
            *self.sums.entry(c.unmeasured_value(out)).or_insert(0) += sign as i128;
        }
        self
    }

    fn merge(mut self, other: Acc) -> Acc {
        for (k, v) in other.sums {
            *self.sums.entry(k).or_insert(0) += v;
        }
        self.signed += other.signed;
        self.accepted += other.accepted;
        self.restored &= other.restored;
        self
    }
}

/// Bijection on `[0, 2^h)` used for permuted visiting orders.
fn permuter(h: u32, seed: u64) -> impl Fn(u64) -> u64 + Sync {
    let mask = if h == 0 { 0 } else { u64::MAX >> (64 - h) };
    let mul = (seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1) & mask.max(1);
    let add = seed.rotate_left(17) & mask;
    move |i| i.wrapping_mul(mul).wrapping_add(add) & mask
}

pub fn simulate_pathsum(circuit: &Circuit) -> Result<SimOutcome> {
    simulate_pathsum_with(circuit, PathSumOptions::default())
}

pub fn simulate_pathsum_with(circuit: &Circuit, opts: PathSumOptions) -> Result<SimOutcome> {
    let c = compile(circuit)?;
    let h = c.h_count();
    let total = 1u64 << h;
    let order = permuter(h, opts.order_seed.unwrap_or(0));
    let shuffled = opts.order_seed.is_some();
    let index = |i: u64| if shuffled { order(i) } else { i };
    let acc = if opts.parallel {
        (0..total)
            .into_par_iter()
            .fold(Acc::new, |acc, i| acc.add(&c, index(i)))
            .reduce(Acc::new, Acc::merge)
    } else {
        (0..total).fold(Acc::new(), |acc, i| acc.add(&c, index(i)))
    };
    let mut sums: Vec<(u128, i128)> = acc.sums.into_iter().filter(|&(_, s)| s != 0).collect();
    sums.sort_unstable();
    let mut numerator = 0u128;
    for &(_, s) in &sums {
        let sq = s.unsigned_abs().checked_mul(s.unsigned_abs()).ok_or(Error::Overflow("S^2"))?;
        numerator = numerator.checked_add(sq).ok_or(Error::Overflow("Σ S^2"))?;
    }
    Ok(SimOutcome {
        signed_sum: acc.signed,
        sums_by_unmeasured: sums,
        numerator,
        exponent: c.exponent,
        p_acc_exact: Dyadic::new(numerator, c.exponent),
        branches: total,
        accepted_branches: acc.accepted,
        ancilla_restored: acc.restored,
    })
}
