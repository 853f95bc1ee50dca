//! Brute-force witness counts.

use serde::{Deserialize, Serialize};

use crate::builders::{build_w_matrix, derive_params_nwt};
use crate::instance::{Instance, NwtInstance, OvInstance, ThreeSumInstance};

/// `s` witnesses out of `total` candidates; `gap = 2s − total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCounts {
    pub s: u64,
    pub total: u64,
    pub gap: i64,
}

impl OracleCounts {
    fn new(s: u64, total: u64) -> Self {
        OracleCounts {
            s,
            total,
            gap: 2 * s as i64 - total as i64,
        }
    }
}

/// Pairs `(i, j)` with `u_i · v_j = 0`.
pub fn oracle_ov(instance: &OvInstance) -> OracleCounts {
    let n = instance.n() as u64;
    let s = instance
        .u()
        .iter()
        .flat_map(|u| instance.v().iter().map(move |v| (u, v)))
        .filter(|(u, v)| u.iter().zip(v.iter()).all(|(a, b)| !(a && b)))
        .count() as u64;
    OracleCounts::new(s, n * n)
}

/// Ordered triples of elements (repetition allowed) summing to 0.
pub fn oracle_threesum(instance: &ThreeSumInstance) -> OracleCounts {
    let e = instance.elements();
    let mut s = 0u64;
    for a in e {
        for b in e {
            for c in e {
                if a + b + c == 0 {
                    s += 1;
                }
            }
        }
    }
    let n = e.len() as u64;
    OracleCounts::new(s, n * n * n)
}

/// Ordered `(x, y, z)` in `[0, n)^3` with no sentinel among `W_xy, W_yz,
/// W_xz` and `W_xy + W_yz + W_xz < 3M`. On real triangles this is exactly
/// "weight sum < 0"; the sentinel on the diagonal excludes repeated
/// vertices.
pub fn oracle_nwt(instance: &NwtInstance) -> OracleCounts {
    let (r, _) = derive_params_nwt(instance);
    let w = build_w_matrix(instance, r);
    let n = instance.n();
    let m = instance.m() as u64;
    let sentinel = 2 * m + 1;
    let mut s = 0u64;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (a, b, c) = (w[x][y], w[y][z], w[x][z]);
                if a != sentinel && b != sentinel && c != sentinel && a + b + c < 3 * m {
                    s += 1;
                }
            }
        }
    }
    let n = n as u64;
    OracleCounts::new(s, n * n * n)
}

pub fn oracle(instance: &Instance) -> OracleCounts {
    match instance {
        Instance::Ov(i) => oracle_ov(i),
        Instance::ThreeSum(i) => oracle_threesum(i),
        Instance::Nwt(i) => oracle_nwt(i),
    }
}
