//! Exact pure-state entanglement measures.

use crate::ckw::wootters_concurrence;
use crate::state::{partial_trace, PureState2, PureState3, Qubit, C64};
use crate::tolerance::Tolerances;

/// Rounds values within the clamp tolerance below zero up to zero.
#[inline]
fn clamp_small_negative(x: f64) -> f64 {
    if x < 0.0 && x > -Tolerances::DEFAULT.clamp {
        0.0
    } else {
        x
    }
}

/// Concurrence `2|phi00 phi11 - phi01 phi10|` of a two-qubit ket.
pub fn concurrence_pure(phi: &PureState2) -> f64 {
    let a = phi.amplitudes();
    2.0 * (a[0] * a[3] - a[1] * a[2]).norm()
}

/// The quartic form `d1 - 2 d2 + 4 d3` on raw (not necessarily normalized)
/// three-qubit amplitudes. Its modulus times four is the 3-tangle.
pub fn tangle_form(psi: &[C64; 8]) -> C64 {
    let [p000, p001, p010, p011, p100, p101, p110, p111] = *psi;

    let d1 = p000 * p000 * p111 * p111
        + p001 * p001 * p110 * p110
        + p010 * p010 * p101 * p101
        + p100 * p100 * p011 * p011;

    let d2 = p000 * p111 * p011 * p100
        + p000 * p111 * p101 * p010
        + p000 * p111 * p110 * p001
        + p011 * p100 * p101 * p010
        + p011 * p100 * p110 * p001
        + p101 * p010 * p110 * p001;

    let d3 = p000 * p110 * p101 * p011 + p111 * p001 * p010 * p100;

    d1 - 2.0 * d2 + 4.0 * d3
}

/// `4 |d1 - 2 d2 + 4 d3|` evaluated on raw amplitudes; homogeneous of degree
/// four in the amplitudes.
pub fn three_tangle_unnormalized(psi: &[C64; 8]) -> f64 {
    4.0 * tangle_form(psi).norm()
}

/// The 3-tangle (residual tangle) of a normalized three-qubit ket.
pub fn three_tangle(psi: &PureState3) -> f64 {
    clamp_small_negative(three_tangle_unnormalized(psi.amplitudes()))
}

/// `4 det(rho_q)` for the single-qubit reduction on `which`.
pub fn one_tangle(psi: &PureState3, which: Qubit) -> f64 {
    let bit = 1 << which.shift();
    let a = psi.amplitudes();
    let (mut r00, mut r11, mut r01) = (0.0, 0.0, C64::new(0.0, 0.0));
    for idx in 0..8 {
        if idx & bit != 0 {
            continue;
        }
        let (x0, x1) = (a[idx], a[idx | bit]);
        r00 += x0.norm_sqr();
        r11 += x1.norm_sqr();
        r01 += x0 * x1.conj();
    }
    clamp_small_negative(4.0 * (r00 * r11 - r01.norm_sqr()))
}

/// `4 det(rho_q) - C(rho_qr)^2 - C(rho_qs)^2 - tau3`, which vanishes for
/// every pure state.
pub fn monogamy_residual(psi: &PureState3, which: Qubit) -> f64 {
    let rho = psi.density();
    let pair_sq: f64 = which
        .others()
        .iter()
        .map(|&other| {
            let reduced = partial_trace(&rho, &[which, other]).expect("two distinct qubits");
            let c = wootters_concurrence(&reduced).expect("reduction is two-qubit");
            c * c
        })
        .sum();
    one_tangle(psi, which) - pair_sq - three_tangle(psi)
}
