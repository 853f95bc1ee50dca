//! Line-oriented text form of circuits and built circuits.
//!
//! ```text
//! circuit v1
//! qubits 10
//! register r1 0 1
//! table D 1 1
//! entry D 0 1
//! measure z 3,4
//! measure x 0,1,2,5,6,7,8
//! measure none 9
//! step 1
//! H 0
//! CCX 5 6 7
//! MCX 0,1 7 1 9
//! QRAM D 0 4
//! ```
//!
//! Qubit lists are comma-separated (`-` when empty) and bit strings are
//! written LSB first. `MCX` takes controls, targets, mask and ancilla.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::builders::{BuiltCircuit, Mode, Params};
use crate::circuit::{BitString, Circuit, Gate, MeasurementPlan, Qubit, Step};
use crate::dataload::DataTable;
use crate::{Error, Result};

fn qubit_list(qs: &[Qubit]) -> String {
    if qs.is_empty() {
        return "-".into();
    }
    qs.iter().map(|q| q.0.to_string()).collect::<Vec<_>>().join(",")
}

fn bits(b: &BitString) -> String {
    if b.width() == 0 {
        "-".into()
    } else {
        b.to_lsb_string()
    }
}

pub fn circuit_to_text(c: &Circuit) -> String {
    let mut s = String::new();
    writeln!(s, "circuit v1").unwrap();
    writeln!(s, "qubits {}", c.n_qubits()).unwrap();
    for r in c.registers() {
        writeln!(s, "register {} {} {}", r.name, r.offset, r.width).unwrap();
    }
    for t in c.tables() {
        writeln!(s, "table {} {} {}", t.id, t.address_width, t.data_width).unwrap();
        for (addr, value) in &t.entries {
            writeln!(s, "entry {} {} {}", t.id, addr, bits(value)).unwrap();
        }
    }
    let m = c.measurement();
    writeln!(s, "measure z {}", qubit_list(&m.z_qubits)).unwrap();
    writeln!(s, "measure x {}", qubit_list(&m.x_qubits)).unwrap();
    writeln!(s, "measure none {}", qubit_list(&m.unmeasured)).unwrap();
    let mut marks = c.step_marks().iter().peekable();
    for (i, g) in c.gates().iter().enumerate() {
        while let Some(&&(at, step)) = marks.peek() {
            if at > i {
                break;
            }
            writeln!(s, "step {step}").unwrap();
            marks.next();
        }
        match g {
            Gate::H(q) => writeln!(s, "H {q}"),
            Gate::X(q) => writeln!(s, "X {q}"),
            Gate::Z(q) => writeln!(s, "Z {q}"),
            Gate::Cx { control, target } => writeln!(s, "CX {control} {target}"),
            Gate::Toffoli { c1, c2, target } => writeln!(s, "CCX {c1} {c2} {target}"),
            Gate::McBitmask {
                controls,
                mask,
                targets,
                ancilla,
            } => writeln!(
                s,
                "MCX {} {} {} {ancilla}",
                qubit_list(controls),
                qubit_list(targets),
                bits(mask)
            ),
            Gate::QramLoad {
                address,
                data,
                table,
            } => writeln!(s, "QRAM {table} {} {}", qubit_list(address), qubit_list(data)),
        }
        .unwrap();
    }
    for &(_, step) in marks {
        writeln!(s, "step {step}").unwrap();
    }
    s
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate().peekable(),
        }
    }

    /// Next meaningful line as (1-based number, tokens).
    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        self.peek()?;
        self.inner
            .next()
            .map(|(i, l)| (i + 1, l.split_whitespace().collect()))
    }

    fn peek(&mut self) -> Option<(usize, Vec<&'a str>)> {
        while let Some((_, l)) = self.inner.peek() {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                self.inner.next();
            } else {
                break;
            }
        }
        self.inner
            .peek()
            .map(|(i, l)| (i + 1, l.split_whitespace().collect()))
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| perr(line, format!("bad number `{tok}`")))
}

fn parse_qubits(line: usize, tok: &str) -> Result<Vec<Qubit>> {
    if tok == "-" {
        return Ok(Vec::new());
    }
    tok.split(',').map(|t| num(line, t).map(Qubit)).collect()
}

fn parse_bits(line: usize, tok: &str) -> Result<BitString> {
    if tok == "-" {
        return Ok(BitString::zeros(0));
    }
    BitString::parse_lsb(tok).ok_or_else(|| perr(line, format!("bad bit string `{tok}`")))
}

fn arity(line: usize, toks: &[&str], n: usize) -> Result<()> {
    if toks.len() != n {
        return Err(perr(
            line,
            format!("`{}` takes {} fields, got {}", toks[0], n - 1, toks.len() - 1),
        ));
    }
    Ok(())
}

fn parse_circuit(lines: &mut Lines<'_>) -> Result<Circuit> {
    let (ln, toks) = lines.next().ok_or_else(|| perr(0, "empty input"))?;
    if toks != ["circuit", "v1"] {
        return Err(perr(ln, "expected `circuit v1`"));
    }
    let (ln, toks) = lines.next().ok_or_else(|| perr(ln, "missing `qubits`"))?;
    if toks.len() != 2 || toks[0] != "qubits" {
        return Err(perr(ln, "expected `qubits N`"));
    }
    let n_qubits: u32 = num(ln, toks[1])?;

    let mut regs: Vec<(String, u32)> = Vec::new();
    let mut offset = 0u32;
    while let Some((ln, toks)) = lines.peek() {
        if toks[0] != "register" {
            break;
        }
        lines.next();
        arity(ln, &toks, 4)?;
        let (o, w): (u32, u32) = (num(ln, toks[2])?, num(ln, toks[3])?);
        if o != offset {
            return Err(perr(ln, format!("register offset {o}, expected {offset}")));
        }
        offset += w;
        regs.push((toks[1].to_owned(), w));
    }
    if offset != n_qubits {
        return Err(perr(ln, format!("registers cover {offset} of {n_qubits} qubits")));
    }
    let mut c = Circuit::new(&regs)?;

    let mut tables: Vec<DataTable> = Vec::new();
    while let Some((ln, toks)) = lines.peek() {
        match toks[0] {
            "table" => {
                arity(ln, &toks, 4)?;
                tables.push(DataTable::new(toks[1], num(ln, toks[2])?, num(ln, toks[3])?));
            }
            "entry" => {
                arity(ln, &toks, 4)?;
                let t = tables
                    .iter_mut()
                    .find(|t| t.id == toks[1])
                    .ok_or_else(|| perr(ln, format!("entry for undeclared table `{}`", toks[1])))?;
                t.insert(num(ln, toks[2])?, parse_bits(ln, toks[3])?)
                    .map_err(|e| perr(ln, e.to_string()))?;
            }
            _ => break,
        }
        lines.next();
    }
    for t in tables {
        c.add_table(t)?;
    }

    let mut plan = MeasurementPlan::default();
    for kind in ["z", "x", "none"] {
        let (ln, toks) = lines
            .next()
            .ok_or_else(|| perr(0, format!("missing `measure {kind}`")))?;
        if toks.len() != 3 || toks[0] != "measure" || toks[1] != kind {
            return Err(perr(ln, format!("expected `measure {kind} <qubits>`")));
        }
        let qs = parse_qubits(ln, toks[2])?;
        match kind {
            "z" => plan.z_qubits = qs,
            "x" => plan.x_qubits = qs,
            _ => plan.unmeasured = qs,
        }
    }
    c.set_measurement(plan)?;

    while let Some((ln, toks)) = lines.next() {
        let q = |i: usize| num(ln, toks[i]).map(Qubit);
        let gate = match toks[0] {
            "step" => {
                arity(ln, &toks, 2)?;
                c.begin_step(toks[1].parse::<Step>().map_err(|e| perr(ln, e))?);
                continue;
            }
            "H" | "X" | "Z" => {
                arity(ln, &toks, 2)?;
                match toks[0] {
                    "H" => Gate::H(q(1)?),
                    "X" => Gate::X(q(1)?),
                    _ => Gate::Z(q(1)?),
                }
            }
            "CX" => {
                arity(ln, &toks, 3)?;
                Gate::Cx {
                    control: q(1)?,
                    target: q(2)?,
                }
            }
            "CCX" => {
                arity(ln, &toks, 4)?;
                Gate::Toffoli {
                    c1: q(1)?,
                    c2: q(2)?,
                    target: q(3)?,
                }
            }
            "MCX" => {
                arity(ln, &toks, 5)?;
                Gate::McBitmask {
                    controls: parse_qubits(ln, toks[1])?,
                    targets: parse_qubits(ln, toks[2])?,
                    mask: parse_bits(ln, toks[3])?,
                    ancilla: q(4)?,
                }
            }
            "QRAM" => {
                arity(ln, &toks, 4)?;
                Gate::QramLoad {
                    table: toks[1].to_owned(),
                    address: parse_qubits(ln, toks[2])?,
                    data: parse_qubits(ln, toks[3])?,
                }
            }
            other => return Err(perr(ln, format!("unknown gate `{other}`"))),
        };
        c.push(gate).map_err(|e| perr(ln, e.to_string()))?;
    }
    Ok(c)
}

pub fn circuit_from_text(text: &str) -> Result<Circuit> {
    parse_circuit(&mut Lines::new(text))
}

/// A built circuit: a short header with the problem, mode and size
/// parameters, then the circuit itself.
pub fn built_to_text(b: &BuiltCircuit) -> String {
    let mut s = String::new();
    writeln!(s, "built v1").unwrap();
    writeln!(s, "problem {}", b.problem).unwrap();
    writeln!(s, "mode {}", b.mode).unwrap();
    writeln!(s, "param n {}", b.params.n).unwrap();
    writeln!(s, "param r {}", b.params.r).unwrap();
    writeln!(s, "param d {}", b.params.d).unwrap();
    if let Some(bound) = b.params.bound {
        writeln!(s, "param bound {bound}").unwrap();
    }
    writeln!(s, "denom {}", b.denom_exponent).unwrap();
    s.push_str(&circuit_to_text(&b.circuit));
    s
}

pub fn built_from_text(text: &str) -> Result<BuiltCircuit> {
    let mut lines = Lines::new(text);
    let mut header = |key: &str| -> Result<(usize, Vec<String>)> {
        let (ln, toks) = lines
            .next()
            .ok_or_else(|| perr(0, format!("missing `{key}`")))?;
        if toks[0] != key {
            return Err(perr(ln, format!("expected `{key}`, found `{}`", toks[0])));
        }
        Ok((ln, toks.iter().map(|t| t.to_string()).collect()))
    };
    let (ln, toks) = header("built")?;
    if toks.len() != 2 || toks[1] != "v1" {
        return Err(perr(ln, "expected `built v1`"));
    }
    let (ln, toks) = header("problem")?;
    let problem = toks
        .get(1)
        .ok_or_else(|| perr(ln, "missing problem tag"))?
        .parse()
        .map_err(|e: String| perr(ln, e))?;
    let (ln, toks) = header("mode")?;
    let mode: Mode = toks
        .get(1)
        .ok_or_else(|| perr(ln, "missing mode"))?
        .parse()
        .map_err(|e: String| perr(ln, e))?;

    let mut params = Params {
        n: 0,
        r: 0,
        d: 0,
        bound: None,
    };
    let denom_exponent;
    loop {
        let (ln, toks) = lines.next().ok_or_else(|| perr(0, "missing `denom`"))?;
        match toks[0] {
            "param" => {
                arity(ln, &toks, 3)?;
                match toks[1] {
                    "n" => params.n = num(ln, toks[2])?,
                    "r" => params.r = num(ln, toks[2])?,
                    "d" => params.d = num(ln, toks[2])?,
                    "bound" => params.bound = Some(num(ln, toks[2])?),
                    other => return Err(perr(ln, format!("unknown parameter `{other}`"))),
                }
            }
            "denom" => {
                arity(ln, &toks, 2)?;
                denom_exponent = num(ln, toks[1])?;
                break;
            }
            other => return Err(perr(ln, format!("unexpected `{other}`"))),
        }
    }
    let circuit = parse_circuit(&mut lines)?;
    Ok(BuiltCircuit {
        circuit,
        problem,
        mode,
        params,
        denom_exponent,
    })
}
