//! Classical problem instances.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::BitString;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Ov,
    #[serde(rename = "threesum")]
    ThreeSum,
    Nwt,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Ov => "ov",
            Problem::ThreeSum => "threesum",
            Problem::Nwt => "nwt",
        })
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ov" => Ok(Problem::Ov),
            "threesum" | "3sum" => Ok(Problem::ThreeSum),
            "nwt" => Ok(Problem::Nwt),
            other => Err(format!("unknown problem `{other}`")),
        }
    }
}

/// Two lists of `n` vectors in `{0,1}^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvInstance {
    d: usize,
    u: Vec<BitString>,
    v: Vec<BitString>,
}

impl OvInstance {
    pub fn new(d: usize, u: Vec<BitString>, v: Vec<BitString>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::InvalidInstance("OV needs n >= 1".into()));
        }
        if d == 0 {
            return Err(Error::InvalidInstance("OV needs d >= 1".into()));
        }
        if u.len() != v.len() {
            return Err(Error::InvalidInstance(format!(
                "|u| = {} but |v| = {}",
                u.len(),
                v.len()
            )));
        }
        if let Some(bad) = u.iter().chain(&v).find(|x| x.width() != d) {
            return Err(Error::InvalidInstance(format!(
                "vector of width {} in a d = {d} instance",
                bad.width()
            )));
        }
        Ok(OvInstance { d, u, v })
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn u(&self) -> &[BitString] {
        &self.u
    }

    pub fn v(&self) -> &[BitString] {
        &self.v
    }
}

/// `n` distinct integers in `[-U, U]`; `U` stands in for `n^{3+η}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeSumInstance {
    bound: i64,
    elements: Vec<i64>,
}

impl ThreeSumInstance {
    pub fn new(bound: i64, elements: Vec<i64>) -> Result<Self> {
        if bound < 1 {
            return Err(Error::InvalidInstance("3-SUM needs U >= 1".into()));
        }
        if elements.is_empty() {
            return Err(Error::InvalidInstance("3-SUM needs n >= 1".into()));
        }
        if let Some(e) = elements.iter().find(|e| e.abs() > bound) {
            return Err(Error::InvalidInstance(format!("{e} outside [-{bound}, {bound}]")));
        }
        let distinct: BTreeSet<_> = elements.iter().collect();
        if distinct.len() != elements.len() {
            return Err(Error::InvalidInstance("3-SUM elements must be distinct".into()));
        }
        Ok(ThreeSumInstance { bound, elements })
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }
}

/// Undirected edge between 1-based vertices `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: i64,
}

/// Edge-weighted graph on vertices `1..=n` with weights in `[-M, M]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NwtInstance {
    n: usize,
    m: i64,
    edges: Vec<Edge>,
}

impl NwtInstance {
    pub fn new(n: usize, m: i64, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("NWT needs n >= 1".into()));
        }
        if m < 0 {
            return Err(Error::InvalidInstance("NWT needs M >= 0".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &edges {
            if !(1 <= e.i && e.i < e.j && e.j <= n) {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) needs 1 <= i < j <= {n}",
                    e.i, e.j
                )));
            }
            if e.w.abs() > m {
                return Err(Error::InvalidInstance(format!(
                    "weight {} outside [-{m}, {m}]",
                    e.w
                )));
            }
            if !seen.insert((e.i, e.j)) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate edge ({}, {})",
                    e.i, e.j
                )));
            }
        }
        Ok(NwtInstance { n, m, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Ov(OvInstance),
    ThreeSum(ThreeSumInstance),
    Nwt(NwtInstance),
}

impl Instance {
    pub fn problem(&self) -> Problem {
        match self {
            Instance::Ov(_) => Problem::Ov,
            Instance::ThreeSum(_) => Problem::ThreeSum,
            Instance::Nwt(_) => Problem::Nwt,
        }
    }
}

impl From<OvInstance> for Instance {
    fn from(i: OvInstance) -> Self {
        Instance::Ov(i)
    }
}

impl From<ThreeSumInstance> for Instance {
    fn from(i: ThreeSumInstance) -> Self {
        Instance::ThreeSum(i)
    }
}

impl From<NwtInstance> for Instance {
    fn from(i: NwtInstance) -> Self {
        Instance::Nwt(i)
    }
}
