//! Random states for tests, benches and property checks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::state::{Ket, Rank2, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random ket (normalized complex Gaussian vector).
pub fn haar_ket<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> Ket<N> {
    loop {
        let amps = std::array::from_fn(|_| gaussian(rng));
        if let Ok(k) = Ket::new(amps) {
            return k;
        }
    }
}

/// Haar-random 2x2 unitary.
pub fn haar_unitary2<R: Rng + ?Sized>(rng: &mut R) -> [[C64; 2]; 2] {
    let a: Ket<2> = haar_ket(rng);
    let [x, y] = *a.amplitudes();
    let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    [[x, -y.conj() * phase], [y, x.conj() * phase]]
}

/// Random orthonormal pair by Gram-Schmidt on two Haar kets.
pub fn orthonormal_pair<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> (Ket<N>, Ket<N>) {
    let first: Ket<N> = haar_ket(rng);
    loop {
        let cand: Ket<N> = haar_ket(rng);
        let overlap = first.inner(&cand);
        let amps = std::array::from_fn(|i| cand.amplitudes()[i] - overlap * first.amplitudes()[i]);
        if let Ok(second) = Ket::new(amps) {
            return (first, second);
        }
    }
}

/// Random rank-2 state with uniform eigenweight.
pub fn random_rank2<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> Rank2<N> {
    let (a, b) = orthonormal_pair(rng);
    Rank2::new(a, b, rng.random_range(0.0..=1.0)).expect("orthonormal by construction")
}
