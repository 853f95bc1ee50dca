//! Per-step gate tallies compared against the published per-step bounds.
//!
//! Multi-controlled gates are charged at their Toffoli-level cost (one
//! `Λ_d(X)` per set mask bit, each costing [`mcx_toffoli_cost`]). Bounds
//! written as `8(x−3)` are only meaningful for `x >= 5`; below that the
//! bound used is the actual cost model value and the row is flagged.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::builders::{BuiltCircuit, Mode, Problem};
use crate::circuit::cost::mcx_toffoli_cost;
use crate::circuit::{Gate, Step};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Z,
    Cx,
    Toffoli,
    Qram,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::Cx => "CX",
            GateKind::Toffoli => "Toffoli",
            GateKind::Qram => "QRAM",
        })
    }
}

pub type Tally = BTreeMap<GateKind, u64>;

/// A bound that replaced a literal `8(x−3)` entry with `x < 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaveatRow {
    pub step: Step,
    pub kind: GateKind,
    pub literal: i64,
    pub used: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub step: Step,
    pub kind: GateKind,
    pub actual: u64,
    pub bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCountReport {
    pub per_step: BTreeMap<Step, Tally>,
    pub table_bounds: BTreeMap<Step, Tally>,
    pub totals: Tally,
    pub qram_calls: u64,
    pub caveats: Vec<CaveatRow>,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

impl GateCountReport {
    /// Largest `actual / bound` over all bounded cells (0 if none).
    pub fn max_ratio(&self) -> f64 {
        let mut worst = 0f64;
        for (step, tally) in &self.per_step {
            for (kind, &actual) in tally {
                let bound = self
                    .table_bounds
                    .get(step)
                    .and_then(|b| b.get(kind))
                    .copied()
                    .unwrap_or(0);
                let ratio = if bound == 0 {
                    if actual == 0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    actual as f64 / bound as f64
                };
                worst = worst.max(ratio);
            }
        }
        worst
    }
}

/// Gate-kind tally of one gate.
pub fn charge(gate: &Gate, tally: &mut Tally) -> Result<()> {
    let (kind, n) = match gate {
        Gate::H(_) => (GateKind::H, 1),
        Gate::X(_) => (GateKind::X, 1),
        Gate::Z(_) => (GateKind::Z, 1),
        Gate::Cx { .. } => (GateKind::Cx, 1),
        Gate::Toffoli { .. } => (GateKind::Toffoli, 1),
        Gate::McBitmask { controls, mask, .. } => (
            GateKind::Toffoli,
            mask.count_ones() as u64 * mcx_toffoli_cost(controls.len())?,
        ),
        Gate::QramLoad { .. } => (GateKind::Qram, 1),
    };
    if n > 0 {
        *tally.entry(kind).or_insert(0) += n;
    }
    Ok(())
}

/// `8(x−3)` where that formula is meaningful, the cost-model value below.
fn mcx_bound(x: u32) -> u64 {
    if x >= 5 {
        8 * (x as u64 - 3)
    } else {
        mcx_toffoli_cost(x as usize).expect("x >= 1")
    }
}

struct Bounds {
    rows: BTreeMap<Step, Tally>,
    caveats: Vec<CaveatRow>,
}

impl Bounds {
    fn new() -> Self {
        Bounds {
            rows: BTreeMap::new(),
            caveats: Vec::new(),
        }
    }

    fn row(&mut self, step: Step, cells: &[(GateKind, u64)]) {
        let t = self.rows.entry(step).or_default();
        for &(k, v) in cells {
            t.insert(k, v);
        }
    }

    /// A Toffoli cell of the form `factor · 8(x−3)`.
    fn mcx_row(&mut self, step: Step, factor: u64, x: u32) {
        let used = factor * mcx_bound(x);
        if x < 5 {
            self.caveats.push(CaveatRow {
                step,
                kind: GateKind::Toffoli,
                literal: factor as i64 * 8 * (x as i64 - 3),
                used,
            });
        }
        self.row(step, &[(GateKind::Toffoli, used)]);
    }
}

fn table_bounds(problem: Problem, mode: Mode, n: u64, r: u32, d: u32) -> Bounds {
    use GateKind::*;
    let (r64, d64) = (r as u64, d as u64);
    let s = Step::Numbered;
    let mut b = Bounds::new();
    match problem {
        Problem::Ov => {
            b.row(s(1), &[(H, 2 * r64), (X, r64)]);
            b.row(s(2), &[(X, 4 * r64 + 6), (Cx, 8 * r64 + 2), (Toffoli, 4 * r64)]);
            match mode {
                Mode::Qram => b.row(s(3), &[(Qram, 2)]),
                Mode::Explicit => {
                    b.row(Step::Loader, &[(X, 4 * n * r64)]);
                    b.mcx_row(Step::Loader, 2 * n * d64, r);
                }
            }
            b.row(s(4), &[(Toffoli, d64)]);
            b.row(s(5), &[(X, 2 * d64)]);
            b.mcx_row(s(5), 1, d);
            b.row(s(6), &[(Z, 1)]);
        }
        Problem::ThreeSum => {
            b.row(s(1), &[(H, 3 * r64), (X, r64)]);
            b.row(s(2), &[(X, 6 * r64 + 9), (Cx, 12 * r64 + 3), (Toffoli, 6 * r64)]);
            match mode {
                Mode::Qram => b.row(s(3), &[(Qram, 3)]),
                Mode::Explicit => {
                    b.row(Step::Loader, &[(X, 6 * n * r64)]);
                    b.mcx_row(Step::Loader, 3 * n * d64, r);
                }
            }
            b.row(s(4), &[(Cx, 4 * d64 + 1), (Toffoli, 2 * d64)]);
            b.row(s(5), &[(Cx, 4 * d64 + 5), (Toffoli, 2 * d64 + 2)]);
            b.row(s(6), &[(X, 2 * d64 + 4)]);
            b.mcx_row(s(6), 1, d + 2);
            b.row(s(7), &[(Z, 1)]);
        }
        Problem::Nwt => {
            let pairs = 1u64 << (2 * r);
            b.row(s(1), &[(H, 3 * r64), (X, r64)]);
            b.row(s(2), &[(X, 6 * r64 + 9), (Cx, 12 * r64 + 3), (Toffoli, 6 * r64)]);
            match mode {
                Mode::Qram => b.row(s(3), &[(Qram, 3)]),
                Mode::Explicit => {
                    b.row(Step::Loader, &[(X, 12 * r64 * pairs)]);
                    b.mcx_row(Step::Loader, 3 * pairs * d64, 2 * r);
                }
            }
            b.row(s(4), &[(X, 6 * d64)]);
            b.mcx_row(s(4), 3, d);
            b.row(s(5), &[(Cx, 8 * d64 + 6), (Toffoli, 4 * d64 + 2)]);
            b.row(s(6), &[(X, 3 * d64 + 8), (Cx, 4 * d64 + 9), (Toffoli, 2 * d64 + 4)]);
            b.row(s(7), &[(X, 8), (Toffoli, 10)]);
            b.row(s(8), &[(Z, 1)]);
        }
    }
    b
}

/// Tallies every gate under the step it was emitted in and checks each cell
/// against its bound. A kind with no bound in a step has bound 0.
pub fn gate_accountant(built: &BuiltCircuit) -> Result<GateCountReport> {
    let c = &built.circuit;
    let mut per_step: BTreeMap<Step, Tally> = BTreeMap::new();
    let mut totals = Tally::new();
    for (i, gate) in c.gates().iter().enumerate() {
        let step = c.step_of(i).ok_or(Error::UntaggedGate(i))?;
        charge(gate, per_step.entry(step).or_default())?;
        charge(gate, &mut totals)?;
    }
    let p = built.params;
    let bounds = table_bounds(built.problem, built.mode, p.n as u64, p.r, p.d);
    let mut violations = Vec::new();
    for (&step, tally) in &per_step {
        for (&kind, &actual) in tally {
            let bound = bounds
                .rows
                .get(&step)
                .and_then(|t| t.get(&kind))
                .copied()
                .unwrap_or(0);
            if actual > bound {
                violations.push(Violation {
                    step,
                    kind,
                    actual,
                    bound,
                });
            }
        }
    }
    Ok(GateCountReport {
        qram_calls: totals.get(&GateKind::Qram).copied().unwrap_or(0),
        pass: violations.is_empty(),
        per_step,
        table_bounds: bounds.rows,
        totals,
        caveats: bounds.caveats,
        violations,
    })
}
