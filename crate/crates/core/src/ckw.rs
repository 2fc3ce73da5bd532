//! Two-qubit mixed-state concurrence and the CKW monogamy inequality
//! `4 min det(rho_q) >= C(rho_qr)^2 + C(rho_qs)^2`.

use nalgebra::{DMatrix, Matrix4};

use crate::error::{Error, Result};
use crate::family::{concurrence_sum_family, detect_family, min_one_tangle_family, roof_axis_value};
use crate::roof::{minimize_roof, Objective, RoofConfig};
use crate::state::{partial_trace, spectral_rank2, DensityMatrix, Qubit, C64, ZERO};

/// Entrywise tolerance for recognizing `rho(p)` and switching to closed forms.
pub const FAMILY_DETECT_TOL: f64 = 1e-10;
/// Slack in the `lhs >= rhs` comparison.
pub const CKW_SLACK: f64 = 1e-8;

/// `v^T (sigma_y x sigma_y) u`.
fn spin_flip_form(v: &[C64; 4], u: &[C64; 4]) -> C64 {
    -v[0] * u[3] + v[1] * u[2] + v[2] * u[1] - v[3] * u[0]
}

/// Concurrence of a two-qubit state given any decomposition into
/// subnormalized vectors, `rho = sum_i |v_i><v_i|`.
///
/// The spin-flip eigenvalues `lambda_i` are the singular values of the
/// symmetric matrix `tau_ij = v_i^T (sigma_y x sigma_y) v_j`. This avoids the
/// square roots of near-zero eigenvalues of `rho rho~`, which amplify
/// round-off to about `1e-8`.
pub fn wootters_from_vectors(vectors: &[[C64; 4]]) -> f64 {
    let n = vectors.len();
    if n == 0 {
        return 0.0;
    }
    let tau = DMatrix::from_fn(n, n, |i, j| spin_flip_form(&vectors[i], &vectors[j]));
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.resize(4.max(s.len()), 0.0);
    (s[0] - s[1..].iter().sum::<f64>()).max(0.0)
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let m = rho.matrix();
    let fixed = Matrix4::from_fn(|i, j| m[(i, j)]);
    let eig = fixed.symmetric_eigen();
    let vectors: Vec<[C64; 4]> = (0..4)
        .filter(|&k| eig.eigenvalues[k] > 0.0)
        .map(|k| {
            let s = eig.eigenvalues[k].sqrt();
            let col = eig.eigenvectors.column(k);
            let mut v = [ZERO; 4];
            for (i, x) in v.iter_mut().enumerate() {
                *x = col[i] * s;
            }
            v
        })
        .collect();
    Ok(wootters_from_vectors(&vectors))
}

/// Concurrences of the two reductions containing `focus`, in A, B, C order
/// of the partner qubit.
pub fn pair_concurrences(rho: &DensityMatrix, focus: Qubit) -> Result<[f64; 2]> {
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            got: rho.dim(),
        });
    }
    let [a, b] = focus.others();
    let c = |other| wootters_concurrence(&partial_trace(rho, &[focus, other])?);
    Ok([c(a)?, c(b)?])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LhsSource {
    /// `rho` was recognized as a GHZ/W mixture.
    ClosedForm,
    /// Numerical roof of the 1-tangle.
    Optimizer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CkwReport {
    /// Roofed 1-tangle `4 min det(rho_focus)`.
    pub lhs: f64,
    /// Sum of squared pair concurrences.
    pub rhs: f64,
    pub tau3_roof: Option<f64>,
    pub satisfied: bool,
    pub focus: Qubit,
    pub source: LhsSource,
    /// Set when `source` is `ClosedForm`.
    pub family_p: Option<f64>,
}

impl CkwReport {
    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// CKW report for a three-qubit state of rank at most two.
///
/// GHZ/W mixtures use closed forms for both roofs. Anything else goes
/// through [`minimize_roof`] for the 1-tangle and the 3-tangle.
pub fn ckw_check(rho: &DensityMatrix, focus: Qubit, config: &RoofConfig) -> Result<CkwReport> {
    let [c1, c2] = pair_concurrences(rho, focus)?;
    let rhs = c1 * c1 + c2 * c2;

    let (lhs, tau3_roof, source, family_p) = match detect_family(rho, FAMILY_DETECT_TOL) {
        Some(p) => (
            min_one_tangle_family(p),
            Some(roof_axis_value(p)?),
            LhsSource::ClosedForm,
            Some(p),
        ),
        None => {
            let state = spectral_rank2::<8>(rho)?.state;
            let one = minimize_roof(&state, Objective::OneTangle(focus), config)?;
            let tau = minimize_roof(&state, Objective::Tau3, config)?;
            (one.value, Some(tau.value), LhsSource::Optimizer, None)
        }
    };
    Ok(CkwReport {
        lhs,
        rhs,
        tau3_roof,
        satisfied: lhs >= rhs - CKW_SLACK,
        focus,
        source,
        family_p,
    })
}

/// One row of the family CKW table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CkwRow {
    pub p: f64,
    pub one_tangle_min: f64,
    pub concurrence_sum: f64,
    pub tau3_roof: f64,
    /// Numerical 1-tangle roof, when requested.
    pub one_tangle_numeric: Option<f64>,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    match grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        Some(&p) => Err(Error::Domain {
            name: "p",
            value: p,
            lo: 0.0,
            hi: 1.0,
        }),
        None => Ok(()),
    }
}

/// Closed-form 1-tangle, concurrence sum and 3-tangle roof along `rho(p)`.
pub fn family_ckw_sweep(grid: &[f64]) -> Result<Vec<CkwRow>> {
    check_grid(grid)?;
    grid.iter()
        .map(|&p| {
            Ok(CkwRow {
                p,
                one_tangle_min: min_one_tangle_family(p),
                concurrence_sum: concurrence_sum_family(p),
                tau3_roof: roof_axis_value(p)?,
                one_tangle_numeric: None,
            })
        })
        .collect()
}

/// [`family_ckw_sweep`] plus the optimizer's 1-tangle roof on qubit A.
pub fn family_ckw_sweep_numeric(grid: &[f64], config: &RoofConfig) -> Result<Vec<CkwRow>> {
    let mut rows = family_ckw_sweep(grid)?;
    for row in rows.iter_mut() {
        let state = crate::family::ghz_w_rank2(row.p)?;
        let r = minimize_roof(&state, Objective::OneTangle(Qubit::A), config)?;
        row.one_tangle_numeric = Some(r.value);
    }
    Ok(rows)
}
