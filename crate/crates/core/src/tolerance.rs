/// Numerical thresholds used across the crate.
///
/// Every check that compares a floating-point quantity against zero or
/// against another quantity reads its threshold from here, so that callers
/// probing kinks of the roof can tighten or relax individual knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Norms below this are treated as the zero vector.
    pub zero_norm: f64,
    /// Allowed `max |M - M^dagger|` for a density matrix.
    pub hermitian: f64,
    /// Allowed deviation of the trace from 1.
    pub trace: f64,
    /// Eigenvalues above `-psd` are accepted as nonnegative.
    pub psd: f64,
    /// Allowed overlap / norm defect for kets declared orthonormal.
    pub orthonormal: f64,
    /// Allowed deviation of ensemble weights from summing to 1.
    pub weight_sum: f64,
    /// Third eigenvalue threshold for numerical rank 2.
    pub rank: f64,
    /// Eigenvalue gap below which a spectrum is flagged degenerate.
    pub degeneracy: f64,
    /// Negative tangle values above `-clamp` are rounded to zero.
    pub clamp: f64,
    /// Distance to a roof region within which a point counts as inside.
    pub region: f64,
    /// Residual / barycentric slack for convex-hull membership.
    pub hull: f64,
    /// Leading coefficients below `leading_coeff * max|c|` are truncated.
    pub leading_coeff: f64,
    /// Polynomials whose largest coefficient is below this are identically zero.
    pub poly_zero: f64,
    /// Roots closer than this (relative to `1 + |z|`) are merged.
    pub root_merge: f64,
    /// Entrywise distance for recognising a state as a GHZ/W mixture.
    pub family_detect: f64,
    /// Slack in the CKW inequality comparison.
    pub ckw: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        zero_norm: 1e-14,
        hermitian: 1e-12,
        trace: 1e-12,
        psd: 1e-10,
        orthonormal: 1e-10,
        weight_sum: 1e-10,
        rank: 1e-9,
        degeneracy: 1e-9,
        clamp: 1e-12,
        region: 1e-9,
        hull: 1e-9,
        leading_coeff: 1e-12,
        poly_zero: 1e-14,
        root_merge: 1e-6,
        family_detect: 1e-10,
        ckw: 1e-8,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
