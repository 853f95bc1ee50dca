//! JSON instance files.
//!
//! ```json
//! { "schema_version": 1, "problem": "ov", "n": 2, "d": 1, "u": ["1", "0"], "v": ["1", "0"], "seed": 7 }
//! { "schema_version": 1, "problem": "threesum", "n": 3, "U": 8, "elements": [-1, 0, 5] }
//! { "schema_version": 1, "problem": "nwt", "n": 3, "M": 1, "edges": [{ "i": 1, "j": 2, "w": -1 }] }
//! ```
//!
//! OV vectors are bit strings written least-significant bit first.

use anyhow::{bail, Context, Result};
use fgsim_core::instance::Edge;
use fgsim_core::{BitString, Instance, NwtInstance, OvInstance, ThreeSumInstance};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "lowercase")]
pub enum Payload {
    Ov {
        n: usize,
        d: usize,
        u: Vec<String>,
        v: Vec<String>,
    },
    #[serde(rename = "threesum")]
    ThreeSum {
        n: usize,
        #[serde(rename = "U")]
        bound: i64,
        elements: Vec<i64>,
    },
    Nwt {
        n: usize,
        #[serde(rename = "M")]
        m: i64,
        edges: Vec<Edge>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub payload: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance, seed: Option<u64>) -> Self {
        let payload = match instance {
            Instance::Ov(i) => Payload::Ov {
                n: i.n(),
                d: i.d(),
                u: i.u().iter().map(BitString::to_lsb_string).collect(),
                v: i.v().iter().map(BitString::to_lsb_string).collect(),
            },
            Instance::ThreeSum(i) => Payload::ThreeSum {
                n: i.n(),
                bound: i.bound(),
                elements: i.elements().to_vec(),
            },
            Instance::Nwt(i) => Payload::Nwt {
                n: i.n(),
                m: i.m(),
                edges: i.edges().to_vec(),
            },
        };
        InstanceFile {
            schema_version: SCHEMA_VERSION,
            payload,
            seed,
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        if self.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema_version {}", self.schema_version);
        }
        let instance: Instance = match &self.payload {
            Payload::Ov { n, d, u, v } => {
                if u.len() != *n || v.len() != *n {
                    bail!("n = {n} but |u| = {}, |v| = {}", u.len(), v.len());
                }
                let parse = |s: &String| {
                    BitString::parse_lsb(s).with_context(|| format!("bad bit vector `{s}`"))
                };
                let u = u.iter().map(parse).collect::<Result<_>>()?;
                let v = v.iter().map(parse).collect::<Result<_>>()?;
                OvInstance::new(*d, u, v)?.into()
            }
            Payload::ThreeSum { n, bound, elements } => {
                if elements.len() != *n {
                    bail!("n = {n} but {} elements", elements.len());
                }
                ThreeSumInstance::new(*bound, elements.clone())?.into()
            }
            Payload::Nwt { n, m, edges } => NwtInstance::new(*n, *m, edges.clone())?.into(),
        };
        Ok(instance)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("malformed instance file")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }
}
