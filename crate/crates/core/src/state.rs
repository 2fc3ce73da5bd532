//! Fixed-dimension state algebra: kets, density matrices, partial traces and
//! rank-2 spectral decompositions.
//!
//! Three-qubit basis states are indexed by `4i + 2j + k` for the label
//! `|ijk>`, with qubit A the most significant bit.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// One of the three parties of a three-qubit system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qubit {
    A,
    B,
    C,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::A, Qubit::B, Qubit::C];

    /// Bit position of this qubit inside the flat basis index.
    #[inline]
    pub fn shift(self) -> usize {
        match self {
            Qubit::A => 2,
            Qubit::B => 1,
            Qubit::C => 0,
        }
    }

    /// The two remaining qubits, in A, B, C order.
    pub fn others(self) -> [Qubit; 2] {
        match self {
            Qubit::A => [Qubit::B, Qubit::C],
            Qubit::B => [Qubit::A, Qubit::C],
            Qubit::C => [Qubit::A, Qubit::B],
        }
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Qubit::A => "A",
            Qubit::B => "B",
            Qubit::C => "C",
        };
        f.write_str(s)
    }
}

impl FromStr for Qubit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Qubit::A),
            "B" | "b" => Ok(Qubit::B),
            "C" | "c" => Ok(Qubit::C),
            other => Err(Error::BadSubset(format!("unknown qubit label {other:?}"))),
        }
    }
}

/// Divides `amps` by its Euclidean norm.
pub fn normalize<const N: usize>(amps: [C64; N]) -> Result<[C64; N]> {
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm.is_nan() || norm < Tolerances::DEFAULT.zero_norm {
        return Err(Error::ZeroVector(norm));
    }
    Ok(amps.map(|a| a / norm))
}

/// A normalized pure state of `N` amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ket<const N: usize> {
    amps: [C64; N],
}

/// Three-qubit ket, amplitudes `psi_{ijk}` at flat index `4i + 2j + k`.
pub type PureState3 = Ket<8>;
/// Two-qubit ket, amplitudes `phi_00, phi_01, phi_10, phi_11`.
pub type PureState2 = Ket<4>;

impl<const N: usize> Ket<N> {
    /// Builds a ket from arbitrary nonzero amplitudes, normalizing them.
    pub fn new(amps: [C64; N]) -> Result<Self> {
        Ok(Ket {
            amps: normalize(amps)?,
        })
    }

    pub fn from_real(amps: [f64; N]) -> Result<Self> {
        Self::new(amps.map(|x| C64::new(x, 0.0)))
    }

    /// Computational basis state `|index>`.
    pub fn basis(index: usize) -> Self {
        assert!(index < N, "basis index {index} out of range for dimension {N}");
        let mut amps = [ZERO; N];
        amps[index] = ONE;
        Ket { amps }
    }

    /// Wraps amplitudes that are already unit norm.
    pub(crate) fn from_normalized(amps: [C64; N]) -> Self {
        debug_assert!((amps.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-9);
        Ket { amps }
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64; N] {
        &self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Ket<N>) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Multiplies every amplitude by `e^{i theta}`.
    pub fn with_phase(&self, theta: f64) -> Self {
        let ph = C64::from_polar(1.0, theta);
        Ket {
            amps: self.amps.map(|a| a * ph),
        }
    }

    /// Normalized `a |self> + b |other>`.
    pub fn superpose(a: C64, first: &Ket<N>, b: C64, second: &Ket<N>) -> Result<Self> {
        let mut amps = [ZERO; N];
        for (k, amp) in amps.iter_mut().enumerate() {
            *amp = a * first.amps[k] + b * second.amps[k];
        }
        Self::new(amps)
    }

    /// `|self><self|` as a raw matrix.
    pub fn projector(&self) -> DMatrix<C64> {
        DMatrix::from_fn(N, N, |i, j| self.amps[i] * self.amps[j].conj())
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_raw(self.projector())
    }
}

impl PureState3 {
    /// Applies the single-qubit unitary `u` (row-major) to qubit `q`.
    pub fn apply_local(&self, q: Qubit, u: &[[C64; 2]; 2]) -> Self {
        let bit = 1 << q.shift();
        let mut out = [ZERO; 8];
        for idx in 0..8 {
            if idx & bit != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[idx], self.amps[idx | bit]);
            out[idx] = u[0][0] * a0 + u[0][1] * a1;
            out[idx | bit] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ket { amps: out }
    }

    /// Relabels the parties: qubit `perm[n]` of the result carries qubit
    /// `Qubit::ALL[n]` of `self`.
    pub fn permute(&self, perm: [Qubit; 3]) -> Self {
        let mut out = [ZERO; 8];
        for (idx, amp) in self.amps.iter().enumerate() {
            let mut target = 0;
            for (n, q) in Qubit::ALL.iter().enumerate() {
                let bit = (idx >> q.shift()) & 1;
                target |= bit << perm[n].shift();
            }
            out[target] = *amp;
        }
        Ket { amps: out }
    }

    /// Product state `|a>|b>|c>`.
    pub fn product(a: &Ket<2>, b: &Ket<2>, c: &Ket<2>) -> Self {
        let mut amps = [ZERO; 8];
        for (idx, amp) in amps.iter_mut().enumerate() {
            *amp = a.amps[(idx >> 2) & 1] * b.amps[(idx >> 1) & 1] * c.amps[idx & 1];
        }
        Ket::from_normalized(amps)
    }
}

/// `(|000> + |111>)/sqrt 2`.
pub fn ghz() -> PureState3 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = [ZERO; 8];
    amps[0] = C64::new(h, 0.0);
    amps[7] = C64::new(h, 0.0);
    Ket::from_normalized(amps)
}

/// `(|100> + |010> + |001>)/sqrt 3`.
pub fn w() -> PureState3 {
    let t = 1.0 / 3f64.sqrt();
    let mut amps = [ZERO; 8];
    for idx in [4, 2, 1] {
        amps[idx] = C64::new(t, 0.0);
    }
    Ket::from_normalized(amps)
}

/// Projector onto the (possibly unnormalized) vector `amps`.
pub fn density_of<const N: usize>(amps: [C64; N]) -> Result<DensityMatrix> {
    Ok(Ket::new(amps)?.density())
}

/// A Hermitian, unit-trace, positive semidefinite matrix of dimension 2, 4 or 8.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerances(m, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(m: DMatrix<C64>, tol: &Tolerances) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.ncols(),
            });
        }
        if !matches!(n, 2 | 4 | 8) {
            return Err(Error::DimensionMismatch {
                expected: 8,
                got: n,
            });
        }
        let herm = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (m[(i, j)] - m[(j, i)].conj()).norm())
            .fold(0.0, f64::max);
        if herm.is_nan() || herm > tol.hermitian {
            return Err(Error::NotHermitian(herm));
        }
        let tr = m.trace();
        if tr.re.is_nan() || (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::InvalidTrace(tr.re));
        }
        let rho = DensityMatrix { m };
        let min_eig = rho.eigenvalues().first().copied().unwrap_or(0.0);
        if min_eig < -tol.psd {
            return Err(Error::NotPsd(min_eig));
        }
        Ok(rho)
    }

    /// Wraps a matrix produced internally from valid states.
    pub(crate) fn from_raw(m: DMatrix<C64>) -> Self {
        DensityMatrix { m }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let m = DMatrix::from_diagonal_element(dim, dim, C64::new(1.0 / dim as f64, 0.0));
        Self::new(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    #[inline]
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.m.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `<v| rho |v>`.
    pub fn expectation<const N: usize>(&self, v: &Ket<N>) -> C64 {
        self.sandwich(v, v)
    }

    /// `<u| rho |v>`.
    pub fn sandwich<const N: usize>(&self, u: &Ket<N>, v: &Ket<N>) -> C64 {
        assert_eq!(self.dim(), N, "ket dimension does not match the density matrix");
        let mut acc = ZERO;
        for i in 0..N {
            let ui = u.amps[i].conj();
            if ui == ZERO {
                continue;
            }
            for j in 0..N {
                acc += ui * self.m[(i, j)] * v.amps[j];
            }
        }
        acc
    }
}

/// Reduced state of a three-qubit density matrix on the qubits in `keep`.
///
/// The kept qubits are ordered A, B, C in the result regardless of the order
/// given in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[Qubit]) -> Result<DensityMatrix> {
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            got: rho.dim(),
        });
    }
    let mut kept: Vec<Qubit> = keep.to_vec();
    kept.sort();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::BadSubset(format!("repeated qubit in {keep:?}")));
    }
    if kept.is_empty() || kept.len() == 3 {
        return Err(Error::BadSubset(format!(
            "keep must be a nonempty proper subset, got {keep:?}"
        )));
    }
    let traced_mask: usize = Qubit::ALL
        .iter()
        .filter(|q| !kept.contains(q))
        .map(|q| 1 << q.shift())
        .sum();
    let compress = |idx: usize| {
        kept.iter()
            .fold(0usize, |acc, q| (acc << 1) | ((idx >> q.shift()) & 1))
    };
    let dim = 1 << kept.len();
    let mut out = DMatrix::from_element(dim, dim, ZERO);
    for i in 0..8 {
        for j in 0..8 {
            if i & traced_mask == j & traced_mask {
                out[(compress(i), compress(j))] += rho.m[(i, j)];
            }
        }
    }
    Ok(DensityMatrix::from_raw(out))
}

/// A finite weighted ensemble of pure states.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<const N: usize> {
    items: Vec<(f64, Ket<N>)>,
}

/// Decomposition of a three-qubit mixed state.
pub type WeightedEnsemble = Ensemble<8>;

impl<const N: usize> Ensemble<N> {
    pub fn new(items: Vec<(f64, Ket<N>)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::BadWeights("empty ensemble".into()));
        }
        if let Some((w, _)) = items.iter().find(|(w, _)| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::BadWeights(format!("weight {w} is not positive")));
        }
        let total: f64 = items.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > Tolerances::DEFAULT.weight_sum {
            return Err(Error::BadWeights(format!("weights sum to {total}")));
        }
        Ok(Ensemble { items })
    }

    /// Builds an ensemble from nonnegative weights, dropping entries at or
    /// below `threshold` and renormalizing the rest.
    pub fn pruned(items: Vec<(f64, Ket<N>)>, threshold: f64) -> Result<Self> {
        let kept: Vec<_> = items.into_iter().filter(|(w, _)| *w > threshold).collect();
        let total: f64 = kept.iter().map(|(w, _)| w).sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::BadWeights("no weight above the pruning threshold".into()));
        }
        Self::new(kept.into_iter().map(|(w, k)| (w / total, k)).collect())
    }

    pub fn items(&self) -> &[(f64, Ket<N>)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.items.iter().map(|(w, _)| *w)
    }

    pub fn states(&self) -> impl Iterator<Item = &Ket<N>> + '_ {
        self.items.iter().map(|(_, k)| k)
    }

    /// Weighted average of a pure-state quantity.
    pub fn average(&self, f: impl Fn(&Ket<N>) -> f64) -> f64 {
        self.items.iter().map(|(w, k)| w * f(k)).sum()
    }

    pub fn mix(&self) -> DensityMatrix {
        let mut m = DMatrix::from_element(N, N, ZERO);
        for (w, k) in &self.items {
            for i in 0..N {
                for j in 0..N {
                    m[(i, j)] += k.amps[i] * k.amps[j].conj() * *w;
                }
            }
        }
        DensityMatrix::from_raw(m)
    }
}

/// `sum_j p_j |psi_j><psi_j|`.
pub fn mix<const N: usize>(ensemble: &Ensemble<N>) -> DensityMatrix {
    ensemble.mix()
}

/// `p |1><1| + (1 - p) |2><2|` for orthonormal kets `|1>, |2>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank2<const N: usize> {
    ket1: Ket<N>,
    ket2: Ket<N>,
    p: f64,
}

pub type Rank2State = Rank2<8>;

impl<const N: usize> Rank2<N> {
    pub fn new(ket1: Ket<N>, ket2: Ket<N>, p: f64) -> Result<Self> {
        Self::with_tolerances(ket1, ket2, p, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(ket1: Ket<N>, ket2: Ket<N>, p: f64, tol: &Tolerances) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain {
                name: "p",
                value: p,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let overlap = ket1.inner(&ket2).norm();
        if overlap > tol.orthonormal {
            return Err(Error::NotOrthonormal(format!("|<1|2>| = {overlap:e}")));
        }
        Ok(Rank2 { ket1, ket2, p })
    }

    pub fn ket1(&self) -> &Ket<N> {
        &self.ket1
    }

    pub fn ket2(&self) -> &Ket<N> {
        &self.ket2
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(self.ket1, self.ket2, p)
    }

    pub fn density(&self) -> DensityMatrix {
        let (a, b) = (self.ket1.projector(), self.ket2.projector());
        DensityMatrix::from_raw(a * C64::new(self.p, 0.0) + b * C64::new(1.0 - self.p, 0.0))
    }

    /// The eigen-ensemble `{(p, |1>), (1 - p, |2>)}` with zero weights dropped.
    pub fn eigen_ensemble(&self) -> Ensemble<N> {
        Ensemble::pruned(vec![(self.p, self.ket1), (1.0 - self.p, self.ket2)], 0.0)
            .expect("p lies in [0, 1]")
    }
}

/// Result of [`spectral_rank2`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRank2<const N: usize> {
    pub state: Rank2<N>,
    /// Set when the two leading eigenvalues coincide or the second vanishes,
    /// so the eigenbasis is not unique.
    pub degenerate: bool,
}

/// Eigen-decomposition of a density matrix of numerical rank at most two.
pub fn spectral_rank2<const N: usize>(rho: &DensityMatrix) -> Result<SpectralRank2<N>> {
    spectral_rank2_with(rho, &Tolerances::DEFAULT)
}

pub fn spectral_rank2_with<const N: usize>(
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<SpectralRank2<N>> {
    if rho.dim() != N {
        return Err(Error::DimensionMismatch {
            expected: N,
            got: rho.dim(),
        });
    }
    let eig = rho.m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let lam = |k: usize| eig.eigenvalues[order[k]];
    if N > 2 && lam(2) >= tol.rank {
        return Err(Error::RankTooHigh(lam(2)));
    }
    let column = |k: usize| {
        let col = eig.eigenvectors.column(order[k]);
        let mut amps = [ZERO; N];
        for (i, a) in amps.iter_mut().enumerate() {
            *a = col[i];
        }
        // Fix the global phase so the largest amplitude is real positive.
        let lead = amps
            .iter()
            .copied()
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .unwrap_or(ONE);
        let phase = if lead.norm() > 0.0 { lead.conj() / lead.norm() } else { ONE };
        Ket::new(amps.map(|a| a * phase))
    };
    let (l1, l2) = (lam(0).max(0.0), lam(1).max(0.0));
    let p = (l1 / (l1 + l2)).clamp(0.0, 1.0);
    let state = Rank2::new(column(0)?, column(1)?, p)?;
    Ok(SpectralRank2 {
        state,
        degenerate: (l1 - l2).abs() < tol.degeneracy || l2 < tol.degeneracy,
    })
}
