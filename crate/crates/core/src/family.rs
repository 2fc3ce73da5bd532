//! Closed-form results for mixtures and superpositions of the GHZ and W
//! states.
//!
//! Notation: `rho(p) = p |GHZ><GHZ| + (1-p) |W><W|` and
//! `|Z(p, phi)> = sqrt(p)|GHZ> - e^{i phi} sqrt(1-p)|W>`.
//!
//! The mixed-state 3-tangle of `rho(p)` is piecewise:
//!
//! * zero on `[0, p0]`, where `p0` is the nontrivial zero of `tau3(Z(p, 0))`;
//! * `g1(p) = p^2 - (8 sqrt 6 / 9) sqrt(p (1-p)^3)` on `[p0, p1]`, realised by
//!   three Z states with phases `0, 2pi/3, 4pi/3`;
//! * the tangent line `g2` to `g1` at `p1`, through `(1, 1)`, on `[p1, 1]`,
//!   realised by mixing the GHZ state into the three-state ensemble at `p1`.

use std::f64::consts::TAU;

use crate::bloch::{BlochPoint, FamilyPoint, SpanBasis};
use crate::error::{Error, Result};
use crate::hull;
use crate::state::{ghz, w, DensityMatrix, Ensemble, PureState3, Rank2State, WeightedEnsemble, C64};
use crate::tolerance::Tolerances;

/// Prefactor `8 sqrt 6 / 9` of the W-admixture term in `tau3(Z)`.
fn k() -> f64 {
    8.0 * 6f64.sqrt() / 9.0
}

/// Nontrivial zero `4 * 2^(1/3) / (3 + 4 * 2^(1/3))` of `tau3(Z(p, 0))`.
pub fn p0() -> f64 {
    let c = 4.0 * 2f64.cbrt();
    c / (3.0 + c)
}

/// Boundary `1/2 + (3/310) sqrt 465` between the three-state and the
/// four-state optimal decompositions.
pub fn p1() -> f64 {
    0.5 + 3.0 / 310.0 * 465f64.sqrt()
}

/// `7 - sqrt 45`, above which the two-qubit reductions of `rho(p)` are
/// separable.
pub fn p_c() -> f64 {
    7.0 - 45f64.sqrt()
}

/// Slope `3/2 + sqrt(465)/18` of the linear roof piece.
pub fn slope() -> f64 {
    1.5 + 465f64.sqrt() / 18.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyConstants {
    pub p0: f64,
    pub p1: f64,
    pub p_c: f64,
    pub slope: f64,
}

pub fn constants() -> FamilyConstants {
    FamilyConstants {
        p0: p0(),
        p1: p1(),
        p_c: p_c(),
        slope: slope(),
    }
}

/// The `(GHZ, W)` span.
pub fn basis() -> SpanBasis<8> {
    SpanBasis::new(ghz(), w())
}

pub fn z_state(p: f64, phi: f64) -> PureState3 {
    let p = p.clamp(0.0, 1.0);
    basis().pure_ket(&BlochPoint {
        p_axis: p,
        azimuth: phi,
        radius: 1.0,
    })
}

/// `|p^2 - (8 sqrt 6/9) sqrt(p(1-p)^3) e^{3 i phi}|`.
pub fn tangle_z(p: f64, phi: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let term = C64::from_polar(k() * (p * (1.0 - p).powi(3)).sqrt(), 3.0 * phi);
    (C64::new(p * p, 0.0) - term).norm()
}

/// `rho(p)` as a rank-2 state with `|1> = GHZ`, `|2> = W`.
pub fn ghz_w_rank2(p: f64) -> Result<Rank2State> {
    Rank2State::new(ghz(), w(), p)
}

pub fn rho_p(p: f64) -> Result<DensityMatrix> {
    Ok(ghz_w_rank2(p)?.density())
}

fn check_unit(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: p,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

/// Average 3-tangle of the three-state ensemble `{Z(p, 2 pi j / 3)}`,
/// defined for `p >= p0`.
pub fn g1(p: f64) -> Result<f64> {
    let lo = p0();
    if !(lo..=1.0).contains(&p) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            lo,
            hi: 1.0,
        });
    }
    Ok(g1_signed(p))
}

/// `p^2 - k sqrt(p(1-p)^3)` on all of `[0, 1]`; negative below `p0`.
pub(crate) fn g1_signed(p: f64) -> f64 {
    p * p - k() * (p * (1.0 - p).powi(3)).sqrt()
}

/// `1 - (1 - p)(3/2 + sqrt(465)/18)`.
pub fn g2(p: f64) -> f64 {
    1.0 - (1.0 - p) * slope()
}

/// Region of the GHZ/W ball on which the roof is known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Tetrahedron of zero-tangle states.
    S0,
    /// Constant-tangle triangle between heights `p0` and `p1`.
    Leaf,
    /// Tetrahedron above the leaf at `p1` with affine tangle.
    S1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RoofValue {
    Known { value: f64, region: Region },
    Unknown,
}

impl RoofValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            RoofValue::Known { value, .. } => Some(*value),
            RoofValue::Unknown => None,
        }
    }

    pub fn region(&self) -> Option<Region> {
        match self {
            RoofValue::Known { region, .. } => Some(*region),
            RoofValue::Unknown => None,
        }
    }
}

/// Mixed-state 3-tangle of `rho(p)`.
pub fn roof_tau3_axis(p: f64) -> Result<RoofValue> {
    check_unit("p", p)?;
    let (lo, hi) = (p0(), p1());
    let rv = if p <= lo {
        RoofValue::Known {
            value: 0.0,
            region: Region::S0,
        }
    } else if p <= hi {
        RoofValue::Known {
            value: g1_signed(p).max(0.0),
            region: Region::Leaf,
        }
    } else {
        RoofValue::Known {
            value: g2(p),
            region: Region::S1,
        }
    };
    Ok(rv)
}

/// Convenience wrapper returning the numeric roof value on the axis.
pub fn roof_axis_value(p: f64) -> Result<f64> {
    Ok(roof_tau3_axis(p)?.value().expect("the axis roof is always known"))
}

fn phases() -> [f64; 3] {
    [0.0, TAU / 3.0, 2.0 * TAU / 3.0]
}

/// An ensemble realising the roof value of `rho(p)`:
///
/// * `p <= p0`: `Z(p0, 2 pi j/3)` with weight `p/(3 p0)` each, plus W;
/// * `p0 <= p <= p1`: `Z(p, 2 pi j/3)` with weight 1/3 each;
/// * `p >= p1`: GHZ with weight `1 - b` and `Z(p1, 2 pi j/3)` with weight
///   `b/3` each, `b = (1-p)/(1-p1)`.
///
/// Zero weights are dropped.
pub fn optimal_decomposition(p: f64) -> Result<WeightedEnsemble> {
    check_unit("p", p)?;
    let (lo, hi) = (p0(), p1());
    let items: Vec<(f64, PureState3)> = if p <= lo {
        let t = p / lo;
        phases()
            .iter()
            .map(|&phi| (t / 3.0, z_state(lo, phi)))
            .chain(std::iter::once((1.0 - t, w())))
            .collect()
    } else if p <= hi {
        phases().iter().map(|&phi| (1.0 / 3.0, z_state(p, phi))).collect()
    } else {
        let b = (1.0 - p) / (1.0 - hi);
        std::iter::once((1.0 - b, ghz()))
            .chain(phases().iter().map(|&phi| (b / 3.0, z_state(hi, phi))))
            .collect()
    };
    Ensemble::pruned(items, 0.0)
}

/// Family coordinates of the pure state `c_ghz |GHZ> + c_w |W>`.
pub fn family_point_of_state(coeff_ghz: C64, coeff_w: C64) -> Result<FamilyPoint> {
    BlochPoint::from_coefficients(coeff_ghz, coeff_w)
}

/// Family coordinates of a density matrix supported on the GHZ/W span.
pub fn family_point_of_density(rho: &DensityMatrix) -> Result<FamilyPoint> {
    basis().point_of_density(rho)
}

pub fn density_of_point(pt: &FamilyPoint) -> DensityMatrix {
    basis().density_of_point(pt)
}

fn s0_vertices() -> [[f64; 3]; 4] {
    let lo = p0();
    let [a, b, c] = phases().map(|phi| BlochPoint::pure(lo, phi).unwrap().cartesian());
    [[0.0, 0.0, -1.0], a, b, c]
}

fn leaf_triangle(p: f64) -> [[f64; 3]; 3] {
    phases().map(|phi| BlochPoint::pure(p, phi).unwrap().cartesian())
}

/// Convex roof of the 3-tangle at an arbitrary point of the GHZ/W ball,
/// where it is known: the zero simplex `S0`, the leaves between `p0` and
/// `p1`, and the simplex `S1` capped by the GHZ pole. Points near a
/// boundary (within `tol.region`) are assigned the smaller adjacent value.
pub fn roof_tau3_bloch(pt: &FamilyPoint) -> RoofValue {
    roof_tau3_bloch_with(pt, &Tolerances::DEFAULT)
}

pub fn roof_tau3_bloch_with(pt: &FamilyPoint, tol: &Tolerances) -> RoofValue {
    let (lo, hi) = (p0(), p1());
    let x = pt.cartesian();
    let mut candidates: Vec<RoofValue> = Vec::new();

    if hull::contains(&s0_vertices(), &x, tol.region) {
        candidates.push(RoofValue::Known {
            value: 0.0,
            region: Region::S0,
        });
    }

    let h = pt.p_axis;
    if h >= lo - tol.region && h <= hi + tol.region {
        let leaf_p = h.clamp(lo, hi);
        let mut tri = leaf_triangle(leaf_p);
        // Test in the leaf plane; the height condition is checked above.
        for v in tri.iter_mut() {
            v[2] = x[2];
        }
        if hull::contains(&tri, &x, tol.region) {
            candidates.push(RoofValue::Known {
                value: g1_signed(leaf_p).max(0.0),
                region: Region::Leaf,
            });
        }
    }

    if h >= hi - tol.region {
        let [a, b, c] = leaf_triangle(hi);
        let s1 = [a, b, c, [0.0, 0.0, 1.0]];
        if hull::contains(&s1, &x, tol.region) {
            let alpha = (1.0 - h) / (1.0 - hi);
            let beta = (h - hi) / (1.0 - hi);
            let value = (alpha * g2(hi) + beta).clamp(0.0, 1.0);
            candidates.push(RoofValue::Known {
                value,
                region: Region::S1,
            });
        }
    }

    candidates
        .into_iter()
        .min_by(|a, b| a.value().unwrap().total_cmp(&b.value().unwrap()))
        .unwrap_or(RoofValue::Unknown)
}

/// `C(rho_AB)^2 + C(rho_AC)^2 = 2 max(0, (2/3)(1-p) - sqrt(p(2+p)/3))^2`.
pub fn concurrence_sum_family(p: f64) -> f64 {
    let c = (2.0 / 3.0 * (1.0 - p) - (p * (2.0 + p) / 3.0).sqrt()).max(0.0);
    2.0 * c * c
}

/// Minimal average 1-tangle `(5p^2 - 4p + 8)/9` of `rho(p)`.
pub fn min_one_tangle_family(p: f64) -> f64 {
    (5.0 * p * p - 4.0 * p + 8.0) / 9.0
}

/// Returns `Some(p)` when `rho` equals `rho(p)` entrywise within `tol`.
pub fn detect_family(rho: &DensityMatrix, tol: f64) -> Option<f64> {
    if rho.dim() != 8 {
        return None;
    }
    let p = rho.expectation(&ghz()).re.clamp(0.0, 1.0);
    let candidate = rho_p(p).ok()?;
    (candidate.max_abs_diff(rho) <= tol).then_some(p)
}
