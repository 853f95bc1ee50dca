//! QRAM data tables and their explicit, gate-level replacements.
//!
//! A QRAM load XORs `D[i]` into a data register on every branch whose address
//! register holds `i`. On a zeroed data register that is exactly
//! `|i>|0^d> -> |i>|D[i]>`, and it keeps the load a basis permutation.
//! Without QRAM the same map is the product of one loader unitary per stored
//! address, `U_x = X^{x⊕1} · Λ_r(X^{D[x]}) · X^{x⊕1}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{BitString, Circuit, Qubit};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataTable {
    pub id: String,
    pub address_width: u32,
    pub data_width: u32,
    /// Keyed by `I[address]`; absent addresses read as all-zero.
    pub entries: BTreeMap<u64, BitString>,
}

impl DataTable {
    pub fn new(id: impl Into<String>, address_width: u32, data_width: u32) -> Self {
        DataTable {
            id: id.into(),
            address_width,
            data_width,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a table from consecutive entries `D[B[0]], D[B[1]], ...`.
    pub fn from_rows(
        id: impl Into<String>,
        address_width: u32,
        data_width: u32,
        rows: impl IntoIterator<Item = BitString>,
    ) -> Result<Self> {
        let mut t = DataTable::new(id, address_width, data_width);
        for (i, row) in rows.into_iter().enumerate() {
            t.insert(i as u64, row)?;
        }
        Ok(t)
    }

    pub fn insert(&mut self, address: u64, value: BitString) -> Result<()> {
        if value.width() != self.data_width as usize {
            return Err(Error::WidthMismatch {
                expected: self.data_width as usize,
                actual: value.width(),
            });
        }
        if self.address_width < 64 && address >> self.address_width != 0 {
            return Err(Error::Overflow("table address wider than address register"));
        }
        self.entries.insert(address, value);
        Ok(())
    }

    pub fn get(&self, address: u64) -> Option<&BitString> {
        self.entries.get(&address)
    }

    /// `qram_semantics`: the stored entry, or all-zero if none.
    pub fn lookup(&self, address: &BitString) -> Result<BitString> {
        if address.width() != self.address_width as usize {
            return Err(Error::WidthMismatch {
                expected: self.address_width as usize,
                actual: address.width(),
            });
        }
        Ok(self
            .entries
            .get(&address.to_int())
            .cloned()
            .unwrap_or_else(|| BitString::zeros(self.data_width as usize)))
    }
}

/// Appends `Π_x U_x` over every stored address of `table`: after it, data
/// holds `D[i]` on branches whose address reads `i` (given zeroed data).
pub fn emit_loader_unitary(
    circuit: &mut Circuit,
    table: &DataTable,
    address: &[Qubit],
    data: &[Qubit],
    ancilla: Qubit,
) -> Result<()> {
    check_widths(table, address, data)?;
    for (&x, value) in &table.entries {
        emit_single_loader(circuit, x, value, address, data, ancilla)?;
    }
    Ok(())
}

/// One `U_x`.
pub fn emit_single_loader(
    circuit: &mut Circuit,
    x: u64,
    value: &BitString,
    address: &[Qubit],
    data: &[Qubit],
    ancilla: Qubit,
) -> Result<()> {
    let pattern = BitString::try_from_int(x, address.len())?;
    circuit.x_on_zeros(address, &pattern)?;
    circuit.emit_mcbitmask(address, value.clone(), data, ancilla)?;
    circuit.x_on_zeros(address, &pattern)
}

/// `Π_{i,j} U_ij` for a table keyed by `(i, j)` with `i` in the low `r` bits
/// of the key, so the combined address is `addr1` followed by `addr2`.
pub fn emit_pair_loader_unitary(
    circuit: &mut Circuit,
    table: &DataTable,
    addr1: &[Qubit],
    addr2: &[Qubit],
    data: &[Qubit],
    ancilla: Qubit,
) -> Result<()> {
    let address: Vec<Qubit> = addr1.iter().chain(addr2).copied().collect();
    emit_loader_unitary(circuit, table, &address, data, ancilla)
}

/// Flips `flag` iff the register equals `pattern`:
/// `(X^{pattern⊕1} ⊗ I) · Λ_w(X) · (X^{pattern⊕1} ⊗ I)`.
///
/// With `pattern = B[2M+1]` this is the sentinel detector `V`; with the
/// all-zero pattern it is the zero test `(X^{⊗d} ⊗ I) Λ_d(X) (X^{⊗d} ⊗ I)`.
pub fn emit_equality_detector(
    circuit: &mut Circuit,
    register: &[Qubit],
    pattern: &BitString,
    flag: Qubit,
    ancilla: Qubit,
) -> Result<()> {
    circuit.x_on_zeros(register, pattern)?;
    circuit.emit_mcbitmask(register, BitString::from_int(1, 1), &[flag], ancilla)?;
    circuit.x_on_zeros(register, pattern)
}

/// The NWT detector `V`: `flag` becomes 1 iff `data` holds `B[2M+1]`.
pub fn emit_sentinel_detector(
    circuit: &mut Circuit,
    data: &[Qubit],
    m: u64,
    flag: Qubit,
    ancilla: Qubit,
) -> Result<()> {
    let pattern = BitString::try_from_int(2 * m + 1, data.len())?;
    emit_equality_detector(circuit, data, &pattern, flag, ancilla)
}

fn check_widths(table: &DataTable, address: &[Qubit], data: &[Qubit]) -> Result<()> {
    if address.len() != table.address_width as usize {
        return Err(Error::WidthMismatch {
            expected: table.address_width as usize,
            actual: address.len(),
        });
    }
    if data.len() != table.data_width as usize {
        return Err(Error::WidthMismatch {
            expected: table.data_width as usize,
            actual: data.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::apply_classical;

    fn state_of(n: u32, v: u64) -> Vec<bool> {
        (0..n).map(|i| v >> i & 1 == 1).collect()
    }

    fn int_of(s: &[bool]) -> u64 {
        s.iter().enumerate().map(|(i, &b)| (b as u64) << i).sum()
    }

    #[test]
    fn lookup_present_and_absent() {
        let t = DataTable::from_rows(
            "D",
            2,
            2,
            [BitString::from_int(1, 2), BitString::from_int(2, 2)],
        )
        .unwrap();
        assert_eq!(t.lookup(&BitString::from_int(1, 2)).unwrap(), BitString::from_int(2, 2));
        assert_eq!(t.lookup(&BitString::from_int(3, 2)).unwrap(), BitString::zeros(2));
        assert!(t.lookup(&BitString::from_int(1, 3)).is_err());
    }

    #[test]
    fn insert_checks_widths() {
        let mut t = DataTable::new("D", 2, 3);
        assert!(t.insert(0, BitString::zeros(2)).is_err());
        assert!(t.insert(4, BitString::zeros(3)).is_err());
    }

    #[test]
    fn qram_load_twice_restores() {
        let table = DataTable::from_rows("D", 2, 2, [BitString::from_int(3, 2)]).unwrap();
        let mut c = Circuit::new(&[("a", 2), ("d", 2)]).unwrap();
        c.add_table(table).unwrap();
        let a = c.register("a").unwrap().qubits();
        let d = c.register("d").unwrap().qubits();
        for _ in 0..2 {
            c.push(crate::Gate::QramLoad {
                address: a.clone(),
                data: d.clone(),
                table: "D".into(),
            })
            .unwrap();
        }
        for v in 0..16 {
            let mut s = state_of(4, v);
            apply_classical(&c, &mut s).unwrap();
            assert_eq!(int_of(&s), v);
        }
    }

    #[test]
    fn single_loader_fires_only_on_its_address() {
        let value = BitString::from_int(0b101, 3);
        let mut c = Circuit::new(&[("a", 2), ("d", 3), ("anc", 1)]).unwrap();
        let a = c.register("a").unwrap().qubits();
        let d = c.register("d").unwrap().qubits();
        let anc = c.register("anc").unwrap().bit(0);
        emit_single_loader(&mut c, 2, &value, &a, &d, anc).unwrap();
        for addr in 0..4u64 {
            let mut s = state_of(6, addr);
            apply_classical(&c, &mut s).unwrap();
            let expected = if addr == 2 { addr | 0b101 << 2 } else { addr };
            assert_eq!(int_of(&s), expected);
        }
    }

    #[test]
    fn sentinel_detector() {
        // d = 2, M = 1: pattern B[3] = 11
        let mut c = Circuit::new(&[("w", 2), ("f", 1), ("anc", 1)]).unwrap();
        let w = c.register("w").unwrap().qubits();
        let f = c.register("f").unwrap().bit(0);
        let anc = c.register("anc").unwrap().bit(0);
        emit_sentinel_detector(&mut c, &w, 1, f, anc).unwrap();
        for v in 0..4u64 {
            let mut s = state_of(4, v);
            apply_classical(&c, &mut s).unwrap();
            assert_eq!(s[2], v == 3, "w={v}");
        }
        // twice: flag back to 0
        let mut twice = c.clone();
        emit_sentinel_detector(&mut twice, &w, 1, f, anc).unwrap();
        let mut s = state_of(4, 3);
        apply_classical(&twice, &mut s).unwrap();
        assert!(!s[2]);
    }

    #[test]
    fn sentinel_pattern_must_fit() {
        let mut c = Circuit::new(&[("w", 2), ("f", 1), ("anc", 1)]).unwrap();
        let w = c.register("w").unwrap().qubits();
        assert!(emit_sentinel_detector(&mut c, &w, 2, Qubit(2), Qubit(3)).is_err());
    }
}
