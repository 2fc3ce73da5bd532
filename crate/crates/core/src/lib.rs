//! Three-qubit entanglement: exact pure-state measures, the convex roof of
//! the 3-tangle on GHZ/W mixtures, vanishing-tangle decisions for rank-2
//! states, numerical convex roofs and CKW monogamy checks.

pub mod bloch;
pub mod ckw;
pub mod error;
pub mod family;
pub mod hull;
pub mod measures;
pub mod poly;
pub mod roof;
pub mod sample;
pub mod state;
pub mod tolerance;
pub mod zero;

pub use bloch::{BlochPoint, Block, FamilyPoint, SpanBasis};
pub use ckw::{ckw_check, family_ckw_sweep, wootters_concurrence, CkwReport, CkwRow, LhsSource};
pub use error::{Error, Result};
pub use family::{
    g1, g2, optimal_decomposition, p0, p1, p_c, rho_p, roof_tau3_axis, roof_tau3_bloch, tangle_z, z_state,
    Region, RoofValue,
};
pub use measures::{concurrence_pure, monogamy_residual, one_tangle, three_tangle};
pub use roof::{minimize_roof, minimize_roof_by, IsometryParams, Objective, RoofConfig, RoofResult};
pub use state::{
    ghz, mix, partial_trace, spectral_rank2, w, DensityMatrix, Ensemble, Ket, PureState2, PureState3, Qubit, Rank2,
    Rank2State, WeightedEnsemble, C64,
};
pub use tolerance::Tolerances;
pub use zero::{has_vanishing_tangle, tangle_polynomial, zero_simplex, ZeroDecision};

pub use nalgebra;
pub use num_complex;
