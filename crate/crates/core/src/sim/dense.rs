//! Dense state-vector simulation, used to cross-check the path-sum backend.
//!
//! Every gate in the vocabulary has a real matrix, so amplitudes are `f64`.
//! The X-basis measurement is applied literally: H on every X qubit, then the
//! acceptance probability is the squared norm of the slice where all Z and X
//! qubits read 0.

use crate::circuit::{BitString, Circuit, Gate, Qubit};
use crate::{Error, Result};

pub const DEFAULT_DENSE_CAP: u32 = 22;

/// Calls `f(start, len)` for every maximal aligned run of indices in
/// `[0, 2^n)` that have all `ones` bits set and all `zeros` bits clear.
fn for_each_run(n: u32, ones: usize, zeros: usize, mut f: impl FnMut(usize, usize)) {
    let constrained = ones | zeros;
    let low = if constrained == 0 {
        n
    } else {
        constrained.trailing_zeros().min(n)
    };
    let len = 1usize << low;
    let free = ((1usize << n) - 1) & !constrained & !(len - 1);
    let mut sub = 0usize;
    loop {
        f(sub | ones, len);
        sub = sub.wrapping_sub(free) & free;
        if sub == 0 {
            break;
        }
    }
}

/// State vector plus a pending `X` frame: the logical basis index of
/// physical slot `p` is `p ^ frame`. Uncontrolled X gates only toggle the
/// frame; H materializes the frame bit of its qubit first.
///
/// Qubits are relabelled so the least-used ones occupy the low index bits,
/// which keeps the swapped and scaled runs long.
struct State {
    amps: Vec<f64>,
    n: u32,
    frame: usize,
    pos: Vec<u32>,
}

impl State {
    fn new(circuit: &Circuit) -> Self {
        let n = circuit.n_qubits();
        let mut uses = vec![0usize; n as usize];
        for g in circuit.gates() {
            match g {
                Gate::X(_) => {}
                Gate::McBitmask { controls, targets, .. } => {
                    for q in controls.iter().chain(targets) {
                        uses[q.index()] += 1;
                    }
                }
                other => {
                    for q in other.qubits() {
                        uses[q.index()] += 1;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n as usize).collect();
        order.sort_by_key(|&q| (uses[q], q));
        let mut pos = vec![0u32; n as usize];
        for (p, q) in order.into_iter().enumerate() {
            pos[q] = p as u32;
        }
        let mut amps = vec![0f64; 1usize << n];
        amps[0] = 1.0;
        State {
            amps,
            n,
            frame: 0,
            pos,
        }
    }

    fn bit(&self, q: Qubit) -> usize {
        1 << self.pos[q.index()]
    }

    fn mask<'a>(&self, qs: impl IntoIterator<Item = &'a Qubit>) -> usize {
        qs.into_iter().fold(0, |m, &q| m | self.bit(q))
    }

    fn masked(&self, qs: &[Qubit], mask: &BitString) -> usize {
        self.mask(qs.iter().zip(mask.iter()).filter(|(_, b)| *b).map(|(q, _)| q))
    }

    /// Flips `flip` on every logical index with all `ctrl` bits set.
    fn flip(&mut self, ctrl: usize, flip: usize) {
        if flip == 0 {
            return;
        }
        let low = flip & flip.wrapping_neg();
        let ones = ctrl & !self.frame;
        let zeros = (ctrl & self.frame) | low;
        let amps = &mut self.amps;
        for_each_run(self.n, ones, zeros, |s, len| {
            let t = s ^ flip;
            let (lo, hi) = (s.min(t), s.max(t));
            let (a, b) = amps.split_at_mut(hi);
            a[lo..lo + len].swap_with_slice(&mut b[..len]);
        });
    }

    fn materialize(&mut self, bit: usize) {
        if self.frame & bit != 0 {
            self.frame &= !bit;
            self.flip(0, bit);
        }
    }

    fn h(&mut self, q: Qubit) {
        let bit = self.bit(q);
        self.materialize(bit);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amps = &mut self.amps;
        for_each_run(self.n, 0, bit, |start, len| {
            let (a, b) = amps.split_at_mut(start + bit);
            for (x, y) in a[start..start + len].iter_mut().zip(&mut b[..len]) {
                let (u, v) = (*x, *y);
                *x = (u + v) * s;
                *y = (u - v) * s;
            }
        });
    }

    fn z(&mut self, q: Qubit) {
        let bit = self.bit(q);
        let (ones, zeros) = if self.frame & bit == 0 { (bit, 0) } else { (0, bit) };
        let amps = &mut self.amps;
        for_each_run(self.n, ones, zeros, |s, len| {
            amps[s..s + len].iter_mut().for_each(|a| *a = -*a)
        });
    }

    /// Permutation `L -> L ^ flips[address(L)]`.
    fn lookup(&mut self, address: &[usize], flips: &[usize]) {
        for p in 0..self.amps.len() {
            let l = p ^ self.frame;
            let a = address
                .iter()
                .enumerate()
                .fold(0usize, |a, (k, &bit)| a | ((l & bit != 0) as usize) << k);
            let j = p ^ flips[a];
            if j > p {
                self.amps.swap(p, j);
            }
        }
    }

    /// Squared norm of the slots whose logical index has every `measured`
    /// bit clear.
    fn norm_where_zero(&self, measured: usize) -> f64 {
        let mut p = 0f64;
        for_each_run(self.n, measured & self.frame, measured & !self.frame, |s, len| {
            p += self.amps[s..s + len].iter().map(|a| a * a).sum::<f64>()
        });
        p
    }
}

/// Acceptance probability by explicit state-vector evolution. Fails with
/// `DenseCapExceeded` above `cap` qubits.
pub fn simulate_dense(circuit: &Circuit, cap: u32) -> Result<f64> {
    let n = circuit.n_qubits();
    if n > cap || n >= usize::BITS - 1 {
        return Err(Error::DenseCapExceeded { n_qubits: n, cap });
    }
    let mut st = State::new(circuit);
    for gate in circuit.gates() {
        match gate {
            Gate::H(q) => st.h(*q),
            Gate::X(q) => st.frame ^= st.bit(*q),
            Gate::Z(q) => st.z(*q),
            Gate::Cx { control, target } => st.flip(st.bit(*control), st.bit(*target)),
            Gate::Toffoli { c1, c2, target } => st.flip(st.bit(*c1) | st.bit(*c2), st.bit(*target)),
            Gate::McBitmask {
                controls,
                mask,
                targets,
                ..
            } => st.flip(st.mask(controls), st.masked(targets, mask)),
            Gate::QramLoad {
                address,
                data,
                table,
            } => {
                let t = circuit.table(table)?;
                let mut flips = vec![0usize; 1 << address.len()];
                for (&a, value) in &t.entries {
                    flips[a as usize] = st.masked(data, value);
                }
                let address: Vec<usize> = address.iter().map(|&q| st.bit(q)).collect();
                st.lookup(&address, &flips);
            }
        }
    }
    let m = circuit.measurement();
    for &q in &m.x_qubits {
        st.h(q);
    }
    Ok(st.norm_where_zero(st.mask(m.z_qubits.iter().chain(&m.x_qubits))))
}
