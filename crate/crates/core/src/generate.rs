//! Seeded random instances. The same seed always yields the same instance.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::BitString;
use crate::instance::{Edge, NwtInstance, OvInstance, ThreeSumInstance};
use crate::{Error, Result};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` vectors per side with independent uniform bits.
pub fn random_ov(n: usize, d: usize, seed: u64) -> Result<OvInstance> {
    let mut rng = rng(seed);
    let mut vec = || BitString::from_bits((0..d).map(|_| rng.gen()).collect());
    let u = (0..n).map(|_| vec()).collect();
    let v = (0..n).map(|_| vec()).collect();
    OvInstance::new(d, u, v)
}

/// `n` distinct integers drawn uniformly from `[-U, U]`.
pub fn random_threesum(n: usize, bound: i64, seed: u64) -> Result<ThreeSumInstance> {
    if bound < 1 {
        return Err(Error::InvalidInstance("3-SUM needs U >= 1".into()));
    }
    let range = 2 * bound as usize + 1;
    if n > range {
        return Err(Error::Infeasible(format!(
            "{n} distinct integers do not fit in [-{bound}, {bound}]"
        )));
    }
    let mut rng = rng(seed);
    let elements = sample(&mut rng, range, n)
        .into_iter()
        .map(|k| k as i64 - bound)
        .collect();
    ThreeSumInstance::new(bound, elements)
}

/// Each of the `n(n-1)/2` edges present with probability 1/2, weights
/// uniform in `[-M, M]`.
pub fn random_nwt(n: usize, m: i64, seed: u64) -> Result<NwtInstance> {
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(0.5) {
                edges.push(Edge {
                    i,
                    j,
                    w: rng.gen_range(-m..=m),
                });
            }
        }
    }
    NwtInstance::new(n, m, edges)
}
