//! Ripple-carry arithmetic built from MAJ/UMA blocks: the adder `A` and the
//! comparators `C` and `C′`.
//!
//! All three share one carry-in qubit (the circuit's shared ancilla), which
//! each returns to its entry value.

use crate::circuit::{Circuit, Qubit};
use crate::{Error, Result};

/// Qubits for `emit_adder`: `sum` has one more qubit than `a`; its low bits
/// hold `b` on entry and its top bit (the carry slot) is 0.
#[derive(Debug, Clone)]
pub struct AdderLayout {
    pub ancilla: Qubit,
    pub a: Vec<Qubit>,
    pub sum: Vec<Qubit>,
}

/// Qubits for the comparators. `out` receives the result by XOR.
#[derive(Debug, Clone)]
pub struct ComparatorLayout {
    pub ancilla: Qubit,
    pub a: Vec<Qubit>,
    pub b: Vec<Qubit>,
    pub out: Qubit,
}

/// MAJ on `(c, b, a)`: leaves `c ⊕ a`, `b ⊕ a` and `MAJ(a, b, c)` in `a`.
fn maj(circuit: &mut Circuit, c: Qubit, b: Qubit, a: Qubit) -> Result<()> {
    circuit.cx(a, b)?;
    circuit.cx(a, c)?;
    circuit.toffoli(c, b, a)
}

/// UMA (two-CX form): undoes MAJ and writes `a ⊕ b ⊕ c` into `b`.
fn uma(circuit: &mut Circuit, c: Qubit, b: Qubit, a: Qubit) -> Result<()> {
    circuit.toffoli(c, b, a)?;
    circuit.cx(a, c)?;
    circuit.cx(c, b)
}

/// UMA′: undoes MAJ without the sum write-back (inverse of [`maj`]).
fn uma_prime(circuit: &mut Circuit, c: Qubit, b: Qubit, a: Qubit) -> Result<()> {
    circuit.toffoli(c, b, a)?;
    circuit.cx(a, c)?;
    circuit.cx(a, b)
}

/// Carry-in wire feeding bit `i` of the cascade.
fn carry_in(ancilla: Qubit, a: &[Qubit], i: usize) -> Qubit {
    if i == 0 {
        ancilla
    } else {
        a[i - 1]
    }
}

/// MAJ cascade; afterwards `a[n-1]` holds the carry out `c_n`.
pub(crate) fn emit_maj_cascade(
    circuit: &mut Circuit,
    ancilla: Qubit,
    a: &[Qubit],
    b: &[Qubit],
) -> Result<()> {
    for i in 0..a.len() {
        maj(circuit, carry_in(ancilla, a, i), b[i], a[i])?;
    }
    Ok(())
}

fn emit_uma_prime_cascade(
    circuit: &mut Circuit,
    ancilla: Qubit,
    a: &[Qubit],
    b: &[Qubit],
) -> Result<()> {
    for i in (0..a.len()).rev() {
        uma_prime(circuit, carry_in(ancilla, a, i), b[i], a[i])?;
    }
    Ok(())
}

/// `A`: `|0>|a>|b,0> -> |0>|a>|a+b>` over `r+1` sum bits.
/// Uses `2r` Toffolis and `4r+1` CX gates.
pub fn emit_adder(circuit: &mut Circuit, layout: &AdderLayout) -> Result<()> {
    let r = layout.a.len();
    if r == 0 || layout.sum.len() != r + 1 {
        return Err(Error::WidthMismatch {
            expected: r + 1,
            actual: layout.sum.len(),
        });
    }
    let (b, carry) = layout.sum.split_at(r);
    emit_maj_cascade(circuit, layout.ancilla, &layout.a, b)?;
    circuit.cx(layout.a[r - 1], carry[0])?;
    for i in (0..r).rev() {
        uma(circuit, carry_in(layout.ancilla, &layout.a, i), b[i], layout.a[i])?;
    }
    Ok(())
}

/// `C′`: `out ⊕= χ(I[b] − I[a]) ⊕ 1`, i.e. `out` ends 0 iff `I[a] < I[b]`
/// (given `out = 0` on entry).
///
/// Computes the carry of `a + b* + 1` (two's-complement `a − b`): `b` is
/// complemented, the carry-in is set to 1, the MAJ cascade runs, the carry
/// `c_n = ¬sign` is copied out, and UMA′ blocks undo the cascade. Uses
/// `2n+2` X, `4n+1` CX and `2n` Toffoli gates.
pub fn emit_comparator_lt(circuit: &mut Circuit, layout: &ComparatorLayout) -> Result<()> {
    let n = layout.a.len();
    if n == 0 || layout.b.len() != n {
        return Err(Error::WidthMismatch {
            expected: n,
            actual: layout.b.len(),
        });
    }
    for &q in &layout.b {
        circuit.x(q)?;
    }
    circuit.x(layout.ancilla)?;
    emit_maj_cascade(circuit, layout.ancilla, &layout.a, &layout.b)?;
    circuit.cx(layout.a[n - 1], layout.out)?;
    emit_uma_prime_cascade(circuit, layout.ancilla, &layout.a, &layout.b)?;
    circuit.x(layout.ancilla)?;
    for &q in &layout.b {
        circuit.x(q)?;
    }
    Ok(())
}

/// `C`: `out ⊕= χ(I[a] − I[b])`, i.e. 1 iff `I[a] > I[b]`.
///
/// Realised as `C′` with the operands swapped followed by one X on `out`:
/// `¬[b ≥ a] = [a > b]`. Uses `2n+3` X, `4n+1` CX and `2n` Toffoli gates.
pub fn emit_comparator_leq(circuit: &mut Circuit, layout: &ComparatorLayout) -> Result<()> {
    let swapped = ComparatorLayout {
        ancilla: layout.ancilla,
        a: layout.b.clone(),
        b: layout.a.clone(),
        out: layout.out,
    };
    emit_comparator_lt(circuit, &swapped)?;
    circuit.x(layout.out)
}
