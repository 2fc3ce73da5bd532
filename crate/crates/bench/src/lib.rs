//! Deterministic inputs shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tangle3_core::sample::{haar_ket, random_rank2};
use tangle3_core::{DensityMatrix, PureState3, Rank2, Rank2State};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pure_states(n: usize) -> Vec<PureState3> {
    let mut r = rng(1);
    (0..n).map(|_| haar_ket(&mut r)).collect()
}

pub fn two_qubit_mixtures(n: usize) -> Vec<DensityMatrix> {
    let mut r = rng(2);
    (0..n).map(|_| random_rank2::<4, _>(&mut r).density()).collect()
}

pub fn rank2_states(n: usize) -> Vec<Rank2State> {
    let mut r = rng(3);
    (0..n).map(|_| random_rank2(&mut r)).collect()
}

pub fn two_qubit_rank2(n: usize) -> Vec<Rank2<4>> {
    let mut r = rng(4);
    (0..n).map(|_| random_rank2(&mut r)).collect()
}
