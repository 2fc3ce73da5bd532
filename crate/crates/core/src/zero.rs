//! Deciding whether a rank-2 three-qubit state has vanishing 3-tangle.
//!
//! On the span of two kets, `|1> + z|2>` has 3-tangle `4|P(z)|` where `P` is
//! a polynomial of degree at most four. Its roots (plus the pole `|2>` when
//! the degree drops) are the pure zero-tangle states of the span. Their
//! convex hull in the Bloch ball, the zero simplex, is exactly the set of
//! mixed states of the span with vanishing 3-tangle.

use crate::bloch::{BlochPoint, SpanBasis};
use crate::error::{Error, Result};
use crate::hull;
use crate::measures::three_tangle;
use crate::poly::{self, Root};
use crate::state::{
    spectral_rank2_with, DensityMatrix, Ensemble, PureState3, Rank2State, WeightedEnsemble, C64,
    ONE, ZERO,
};
use crate::tolerance::Tolerances;

/// `(coefficient, amplitude indices)` of each monomial of `d1 - 2 d2 + 4 d3`.
const FORM_TERMS: [(f64, [usize; 4]); 12] = [
    (1.0, [0, 0, 7, 7]),
    (1.0, [1, 1, 6, 6]),
    (1.0, [2, 2, 5, 5]),
    (1.0, [4, 4, 3, 3]),
    (-2.0, [0, 7, 3, 4]),
    (-2.0, [0, 7, 5, 2]),
    (-2.0, [0, 7, 6, 1]),
    (-2.0, [3, 4, 5, 2]),
    (-2.0, [3, 4, 6, 1]),
    (-2.0, [5, 2, 6, 1]),
    (4.0, [0, 6, 5, 3]),
    (4.0, [7, 1, 2, 4]),
];

/// `P(z) = sum_k coeffs[k] z^k`, the quartic form `d1 - 2 d2 + 4 d3`
/// evaluated on the unnormalized ket `|1> + z |2>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TanglePolynomial {
    pub coeffs: [C64; 5],
}

impl TanglePolynomial {
    pub fn eval(&self, z: C64) -> C64 {
        poly::eval(&self.coeffs, z)
    }

    /// Highest power with a coefficient above `tol * max|c_k|`.
    pub fn degree(&self, tol: f64) -> Option<usize> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        (0..5).rev().find(|&k| self.coeffs[k].norm() > tol * scale && scale > 0.0)
    }
}

/// Expands the tangle form on `|1> + z|2>` into powers of `z`.
pub fn tangle_polynomial(ket1: &PureState3, ket2: &PureState3) -> TanglePolynomial {
    let (a, b) = (ket1.amplitudes(), ket2.amplitudes());
    let mut coeffs = [ZERO; 5];
    for (weight, idx) in FORM_TERMS {
        // Product of four linear factors (a_i + z b_i).
        let mut prod = [ZERO; 5];
        prod[0] = ONE;
        for (deg, &i) in idx.iter().enumerate() {
            for k in (0..=deg + 1).rev() {
                let lower = if k > 0 { prod[k - 1] * b[i] } else { ZERO };
                prod[k] = prod[k] * a[i] + lower;
            }
        }
        for k in 0..5 {
            coeffs[k] += prod[k] * weight;
        }
    }
    TanglePolynomial { coeffs }
}

/// Zeros of a tangle polynomial, counted with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    pub finite_roots: Vec<Root>,
    /// `4 - degree`; the pole `|2>` is a zero of this multiplicity.
    pub root_at_infinity: usize,
    /// Every state of the span has zero 3-tangle.
    pub degenerate_all_zero: bool,
}

impl ZeroSet {
    pub fn has_repeated_roots(&self) -> bool {
        self.root_at_infinity > 1 || self.finite_roots.iter().any(|r| r.multiplicity > 1)
    }
}

pub fn polynomial_roots(poly: &TanglePolynomial) -> Result<ZeroSet> {
    polynomial_roots_with(poly, &Tolerances::DEFAULT)
}

pub fn polynomial_roots_with(poly: &TanglePolynomial, tol: &Tolerances) -> Result<ZeroSet> {
    let rs = poly::roots(&poly.coeffs, tol)?;
    Ok(ZeroSet {
        finite_roots: rs.finite,
        root_at_infinity: rs.at_infinity,
        degenerate_all_zero: rs.all_zero,
    })
}

/// A pure zero-tangle state of the span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroVertex {
    pub point: BlochPoint,
    pub state: PureState3,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSimplex {
    pub vertices: Vec<ZeroVertex>,
    /// Affine dimension of the vertex set, 0 to 3.
    pub dimension: usize,
    /// Some root was repeated, so fewer than four distinct vertices exist.
    pub repeated_roots: bool,
}

impl ZeroSimplex {
    pub fn cartesian_vertices(&self) -> Vec<[f64; 3]> {
        self.vertices.iter().map(|v| v.point.cartesian()).collect()
    }
}

fn simplex_from_zeros(basis: &SpanBasis<8>, zeros: &ZeroSet) -> Result<ZeroSimplex> {
    if zeros.degenerate_all_zero {
        return Err(Error::DegenerateAllZero);
    }
    let mut vertices = Vec::with_capacity(4);
    for root in &zeros.finite_roots {
        let state = basis.ket(ONE, root.value)?;
        vertices.push(ZeroVertex {
            point: BlochPoint::from_coefficients(ONE, root.value)?,
            state,
            multiplicity: root.multiplicity,
        });
    }
    if zeros.root_at_infinity > 0 {
        vertices.push(ZeroVertex {
            point: BlochPoint::from_coefficients(ZERO, ONE)?,
            state: basis.ket2,
            multiplicity: zeros.root_at_infinity,
        });
    }
    let pts: Vec<[f64; 3]> = vertices.iter().map(|v| v.point.cartesian()).collect();
    Ok(ZeroSimplex {
        dimension: hull::affine_dimension(&pts),
        vertices,
        repeated_roots: zeros.has_repeated_roots(),
    })
}

/// Zero simplex of the span of `state`'s eigenvectors.
pub fn zero_simplex(state: &Rank2State) -> Result<ZeroSimplex> {
    let basis = SpanBasis::new(*state.ket1(), *state.ket2());
    let poly = tangle_polynomial(state.ket1(), state.ket2());
    simplex_from_zeros(&basis, &polynomial_roots(&poly)?)
}

/// Outcome of the zero-tangle decision.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroDecision {
    pub vanishes: bool,
    /// The decision needed the membership tolerance; the point sits on the
    /// boundary of the zero simplex to within that tolerance.
    pub boundary: bool,
    /// Zero-tangle ensemble reproducing the state, when it vanishes.
    pub witness: Option<WeightedEnsemble>,
    pub polynomial: TanglePolynomial,
    pub zeros: ZeroSet,
    /// `None` when the polynomial vanishes identically.
    pub simplex: Option<ZeroSimplex>,
    pub point: BlochPoint,
}

/// Splits a point of the ball into two antipodal pure states.
fn antipodal_witness(basis: &SpanBasis<8>, point: &BlochPoint) -> Result<WeightedEnsemble> {
    let r = point.cartesian();
    let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let dir = if len > 1e-15 {
        [r[0] / len, r[1] / len, r[2] / len]
    } else {
        [0.0, 0.0, 1.0]
    };
    let up = BlochPoint::from_cartesian(dir)?;
    let down = BlochPoint::from_cartesian(dir.map(|x| -x))?;
    let lam = (1.0 + len.min(1.0)) / 2.0;
    Ensemble::pruned(
        vec![(lam, basis.pure_ket(&up)), (1.0 - lam, basis.pure_ket(&down))],
        0.0,
    )
}

/// Decides vanishing 3-tangle for the state at `point` of the span ball.
pub fn decide_point(basis: &SpanBasis<8>, point: &BlochPoint, tol: &Tolerances) -> Result<ZeroDecision> {
    let polynomial = tangle_polynomial(&basis.ket1, &basis.ket2);
    let zeros = polynomial_roots_with(&polynomial, tol)?;
    if zeros.degenerate_all_zero {
        return Ok(ZeroDecision {
            vanishes: true,
            boundary: false,
            witness: Some(antipodal_witness(basis, point)?),
            polynomial,
            zeros,
            simplex: None,
            point: *point,
        });
    }
    let simplex = simplex_from_zeros(basis, &zeros)?;
    let verts = simplex.cartesian_vertices();
    let target = point.cartesian();
    let weights = hull::hull_weights(&verts, &target, tol.hull);
    let boundary = weights.is_some() && !hull::contains(&verts, &target, 1e-13);
    let witness = match &weights {
        Some(w) => Some(Ensemble::pruned(
            w.iter()
                .zip(&simplex.vertices)
                .map(|(wi, v)| (*wi, v.state))
                .collect(),
            0.0,
        )?),
        None => None,
    };
    Ok(ZeroDecision {
        vanishes: weights.is_some(),
        boundary,
        witness,
        polynomial,
        zeros,
        simplex: Some(simplex),
        point: *point,
    })
}

/// Decides vanishing 3-tangle of `p |1><1| + (1-p) |2><2|`.
pub fn has_vanishing_tangle(state: &Rank2State) -> Result<ZeroDecision> {
    has_vanishing_tangle_with(state, &Tolerances::DEFAULT)
}

pub fn has_vanishing_tangle_with(state: &Rank2State, tol: &Tolerances) -> Result<ZeroDecision> {
    let basis = SpanBasis::new(*state.ket1(), *state.ket2());
    decide_point(&basis, &BlochPoint::axis(state.p())?, tol)
}

/// Decides vanishing 3-tangle of a density matrix of rank at most two.
pub fn decide_density(rho: &DensityMatrix) -> Result<ZeroDecision> {
    let tol = Tolerances::DEFAULT;
    let spec = spectral_rank2_with::<8>(rho, &tol)?;
    has_vanishing_tangle_with(&spec.state, &tol)
}

/// Largest 3-tangle among the states of `ensemble`.
pub fn max_member_tangle(ensemble: &WeightedEnsemble) -> f64 {
    ensemble.states().map(three_tangle).fold(0.0, f64::max)
}
