//! Bloch-ball coordinates for states supported on the span of two
//! orthonormal kets.
//!
//! A point is described by its weight `p_axis` on the first ket (1 is the
//! north pole), the azimuth `phi` and the transverse `radius` as a fraction
//! of the largest transverse distance reachable at that height. The pure
//! state with coordinates `(p, phi, 1)` is
//! `sqrt(p) |1> - e^{i phi} sqrt(1 - p) |2>`, so that for the GHZ/W pair the
//! azimuth is the relative phase of the Z states.

use std::f64::consts::TAU;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::state::{DensityMatrix, Ket, C64, ZERO};

const BALL_SLACK: f64 = 1e-12;

/// 2x2 density matrix in the `(|1>, |2>)` basis.
pub type Block = [[C64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint {
    pub p_axis: f64,
    pub azimuth: f64,
    pub radius: f64,
}

/// Coordinates inside the GHZ/W ball.
pub type FamilyPoint = BlochPoint;

fn wrap_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl BlochPoint {
    pub fn new(p_axis: f64, azimuth: f64, radius: f64) -> Result<Self> {
        if !(-BALL_SLACK..=1.0 + BALL_SLACK).contains(&p_axis) {
            return Err(Error::OutOfBall(format!("p_axis = {p_axis}")));
        }
        if !(-BALL_SLACK..=1.0 + BALL_SLACK).contains(&radius) {
            return Err(Error::OutOfBall(format!("radius = {radius}")));
        }
        if !azimuth.is_finite() {
            return Err(Error::OutOfBall(format!("azimuth = {azimuth}")));
        }
        Ok(BlochPoint {
            p_axis: p_axis.clamp(0.0, 1.0),
            azimuth: wrap_angle(azimuth),
            radius: radius.clamp(0.0, 1.0),
        })
    }

    /// Point on the axis at height `p`.
    pub fn axis(p: f64) -> Result<Self> {
        Self::new(p, 0.0, 0.0)
    }

    /// Pure state `sqrt(p)|1> - e^{i phi} sqrt(1-p)|2>`.
    pub fn pure(p: f64, phi: f64) -> Result<Self> {
        Self::new(p, phi, 1.0)
    }

    /// Point of the pure state `c1 |1> + c2 |2>` (normalization irrelevant).
    pub fn from_coefficients(c1: C64, c2: C64) -> Result<Self> {
        let n = c1.norm_sqr() + c2.norm_sqr();
        if n.is_nan() || n.sqrt() < crate::Tolerances::DEFAULT.zero_norm {
            return Err(Error::ZeroVector(n.sqrt()));
        }
        let p = c1.norm_sqr() / n;
        let rel = -c2 * c1.conj();
        let phi = if rel.norm() > 0.0 { rel.arg() } else { 0.0 };
        Self::new(p, phi, 1.0)
    }

    /// Point of a 2x2 density matrix written in the `(|1>, |2>)` basis.
    pub fn from_block(block: &Block) -> Result<Self> {
        let p = block[0][0].re;
        let off = block[0][1];
        let scale = (p * (1.0 - p)).max(0.0).sqrt();
        if scale < 1e-15 {
            if off.norm() > 1e-9 {
                return Err(Error::OutOfBall(format!("coherence {off} at the pole")));
            }
            return Self::new(p, 0.0, 0.0);
        }
        let radius = off.norm() / scale;
        let rel = -off.conj();
        let phi = if rel.norm() > 0.0 { rel.arg() } else { 0.0 };
        Self::new(p, phi, radius)
    }

    /// The 2x2 density matrix of this point in the `(|1>, |2>)` basis.
    pub fn block(&self) -> Block {
        let p = self.p_axis;
        let off = -C64::from_polar(self.radius * (p * (1.0 - p)).sqrt(), -self.azimuth);
        [
            [C64::new(p, 0.0), off],
            [off.conj(), C64::new(1.0 - p, 0.0)],
        ]
    }

    /// Embedding into the unit ball: height `2p - 1`, transverse length
    /// `radius * 2 sqrt(p(1-p))` in the direction of the azimuth.
    pub fn cartesian(&self) -> [f64; 3] {
        let p = self.p_axis;
        let t = self.radius * 2.0 * (p * (1.0 - p)).sqrt();
        [t * self.azimuth.cos(), t * self.azimuth.sin(), 2.0 * p - 1.0]
    }

    pub fn from_cartesian(v: [f64; 3]) -> Result<Self> {
        let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if len > 1.0 + 1e-10 {
            return Err(Error::OutOfBall(format!("|r| = {len}")));
        }
        let p = ((v[2] + 1.0) / 2.0).clamp(0.0, 1.0);
        let tmax = 2.0 * (p * (1.0 - p)).sqrt();
        let t = v[0].hypot(v[1]);
        if tmax < 1e-15 {
            return Self::new(p, 0.0, 0.0);
        }
        let phi = if t > 0.0 { v[1].atan2(v[0]) } else { 0.0 };
        Self::new(p, phi, (t / tmax).min(1.0))
    }

    /// The normalized coefficients `(c1, c2)` of the pure state at this
    /// azimuth and height (radius is ignored).
    pub fn pure_coefficients(&self) -> (C64, C64) {
        (
            C64::new(self.p_axis.sqrt(), 0.0),
            -C64::from_polar((1.0 - self.p_axis).sqrt(), self.azimuth),
        )
    }
}

/// Orthonormal pair of kets spanning a two-dimensional subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanBasis<const N: usize> {
    pub ket1: Ket<N>,
    pub ket2: Ket<N>,
}

impl<const N: usize> SpanBasis<N> {
    pub fn new(ket1: Ket<N>, ket2: Ket<N>) -> Self {
        SpanBasis { ket1, ket2 }
    }

    /// Normalized `c1 |1> + c2 |2>`.
    pub fn ket(&self, c1: C64, c2: C64) -> Result<Ket<N>> {
        Ket::superpose(c1, &self.ket1, c2, &self.ket2)
    }

    /// Pure state at the azimuth and height of `pt`.
    pub fn pure_ket(&self, pt: &BlochPoint) -> Ket<N> {
        let (c1, c2) = pt.pure_coefficients();
        self.ket(c1, c2).expect("unit coefficients")
    }

    pub fn point_of_ket(&self, ket: &Ket<N>) -> Result<BlochPoint> {
        BlochPoint::from_coefficients(self.ket1.inner(ket), self.ket2.inner(ket))
    }

    pub fn density_of_block(&self, block: &Block) -> DensityMatrix {
        let kets = [&self.ket1, &self.ket2];
        let mut m = DMatrix::from_element(N, N, ZERO);
        for (a, ka) in kets.iter().enumerate() {
            for (b, kb) in kets.iter().enumerate() {
                let coeff = block[a][b];
                for i in 0..N {
                    for j in 0..N {
                        m[(i, j)] += coeff * ka.amplitudes()[i] * kb.amplitudes()[j].conj();
                    }
                }
            }
        }
        DensityMatrix::from_raw(m)
    }

    pub fn density_of_point(&self, pt: &BlochPoint) -> DensityMatrix {
        self.density_of_block(&pt.block())
    }

    /// Projects `rho` onto the span, failing when it has weight outside it.
    pub fn block_of(&self, rho: &DensityMatrix) -> Result<Block> {
        let kets = [&self.ket1, &self.ket2];
        let mut block = [[ZERO; 2]; 2];
        for (a, ka) in kets.iter().enumerate() {
            for (b, kb) in kets.iter().enumerate() {
                block[a][b] = rho.sandwich(ka, kb);
            }
        }
        let residual = self.density_of_block(&block).max_abs_diff(rho);
        if residual > 1e-9 {
            return Err(Error::OutOfBall(format!(
                "state is not supported on the span (residual {residual:e})"
            )));
        }
        Ok(block)
    }

    pub fn point_of_density(&self, rho: &DensityMatrix) -> Result<BlochPoint> {
        BlochPoint::from_block(&self.block_of(rho)?)
    }
}
