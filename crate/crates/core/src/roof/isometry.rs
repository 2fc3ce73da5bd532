//! Column-isometries `V` (m x 2, `V^dagger V = 1`) and the decompositions
//! they generate.
//!
//! Every length-`m` decomposition of `p|1><1| + (1-p)|2><2|` has vectors
//! `chi_l = V_l1 sqrt(p) |1> + V_l2 sqrt(1-p) |2>` for some isometry `V`.
//! `V` is parameterized as a product of complex Givens rotations applied to
//! the first two columns of the identity, followed by a phase on the second
//! column, so every real parameter vector gives an exact isometry.

use rand::Rng;

use crate::error::{Error, Result};
use crate::state::{Ensemble, Ket, Rank2, C64, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct IsometryParams {
    pub m: usize,
    /// `(theta, phi)` per rotation pair, then the column phase.
    pub params: Vec<f64>,
}

/// Rotation planes in application order. Pairs for `m` are a prefix of the
/// pairs for `m + 1`.
fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..m).flat_map(|j| (0..j).map(move |i| (i, j)))
}

impl IsometryParams {
    pub fn param_count(m: usize) -> usize {
        m * (m - 1) + 1
    }

    pub fn new(m: usize, params: Vec<f64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::Config(format!("decomposition length {m} < 2")));
        }
        if params.len() != Self::param_count(m) {
            return Err(Error::Config(format!(
                "expected {} parameters for m = {m}, got {}",
                Self::param_count(m),
                params.len()
            )));
        }
        Ok(IsometryParams { m, params })
    }

    /// All-zero parameters: `V` is the first two columns of the identity.
    pub fn identity(m: usize) -> Self {
        IsometryParams {
            m,
            params: vec![0.0; Self::param_count(m)],
        }
    }

    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let params = (0..Self::param_count(m))
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        IsometryParams { m, params }
    }

    /// Same isometry padded with zero rows up to length `m_new`.
    pub fn embed(&self, m_new: usize) -> Self {
        assert!(m_new >= self.m);
        let rot = Self::param_count(self.m) - 1;
        let mut params = self.params[..rot].to_vec();
        params.resize(Self::param_count(m_new) - 1, 0.0);
        params.push(self.params[rot]);
        IsometryParams { m: m_new, params }
    }

    pub fn matrix(&self) -> Vec<[C64; 2]> {
        isometry_matrix(self.m, &self.params)
    }
}

pub(crate) fn isometry_matrix(m: usize, params: &[f64]) -> Vec<[C64; 2]> {
    let mut v = vec![[ZERO; 2]; m];
    v[0][0] = ONE;
    v[1][1] = ONE;
    let planes: Vec<(usize, usize)> = pairs(m).collect();
    for (k, &(i, j)) in planes.iter().enumerate().rev() {
        let (theta, phi) = (params[2 * k], params[2 * k + 1]);
        if theta == 0.0 {
            continue;
        }
        let (s, c) = theta.sin_cos();
        let e = C64::from_polar(1.0, phi);
        let (ri, rj) = (v[i], v[j]);
        v[i] = std::array::from_fn(|col| ri[col] * c - e.conj() * s * rj[col]);
        v[j] = std::array::from_fn(|col| e * s * ri[col] + rj[col] * c);
    }
    let ph = C64::from_polar(1.0, params[params.len() - 1]);
    for row in v.iter_mut() {
        row[1] *= ph;
    }
    v
}

/// `max |V^dagger V - 1|`.
pub fn isometry_defect(v: &[[C64; 2]]) -> f64 {
    let mut worst = 0.0f64;
    for a in 0..2 {
        for b in 0..2 {
            let g: C64 = v.iter().map(|row| row[a].conj() * row[b]).sum();
            let want = if a == b { ONE } else { ZERO };
            worst = worst.max((g - want).norm());
        }
    }
    worst
}

/// Weighted coefficient pairs `(w_l, c1_l, c2_l)` with `|c1|^2 + |c2|^2 = 1`
/// describing the decomposition generated by `v` for eigenweight `p`.
/// Vectors of zero norm are dropped.
pub(crate) fn coefficient_ensemble(p: f64, v: &[[C64; 2]]) -> Vec<(f64, C64, C64)> {
    let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
    v.iter()
        .filter_map(|row| {
            let (a, b) = (row[0] * sp, row[1] * sq);
            let wt = a.norm_sqr() + b.norm_sqr();
            (wt > 1e-300).then(|| {
                let n = wt.sqrt();
                (wt, a / n, b / n)
            })
        })
        .collect()
}

/// `c1 |1> + c2 |2>` for orthonormal kets and unit coefficients.
pub(crate) fn span_ket<const N: usize>(ket1: &Ket<N>, ket2: &Ket<N>, c1: C64, c2: C64) -> Ket<N> {
    let (a, b) = (ket1.amplitudes(), ket2.amplitudes());
    let mut amps = [ZERO; N];
    for (k, x) in amps.iter_mut().enumerate() {
        *x = c1 * a[k] + c2 * b[k];
    }
    Ket::new(amps).expect("unit coefficients on orthonormal kets")
}

/// Decomposition of `state` generated by an explicit isometry matrix.
pub fn ensemble_from_matrix<const N: usize>(state: &Rank2<N>, v: &[[C64; 2]]) -> Result<Ensemble<N>> {
    let defect = isometry_defect(v);
    if defect > 1e-10 {
        return Err(Error::Config(format!("matrix is not an isometry (defect {defect:e})")));
    }
    let items = coefficient_ensemble(state.p(), v)
        .into_iter()
        .map(|(wt, c1, c2)| (wt, span_ket(state.ket1(), state.ket2(), c1, c2)))
        .collect();
    Ensemble::pruned(items, 0.0)
}

/// Decomposition of `state` generated by the parameterized isometry.
pub fn ensemble_from_isometry<const N: usize>(state: &Rank2<N>, params: &IsometryParams) -> Result<Ensemble<N>> {
    ensemble_from_matrix(state, &params.matrix())
}
