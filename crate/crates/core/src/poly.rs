//! Roots of low-degree complex polynomials via companion-matrix eigenvalues
//! with Newton polishing.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::state::{C64, ONE, ZERO};
use crate::tolerance::Tolerances;

/// Evaluates `sum_k coeffs[k] z^k` by Horner's rule.
pub fn eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

fn eval_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `|P(z)| / sum_k |c_k| |z|^k`, the relative backward error of a root.
pub fn backward_error(coeffs: &[C64], z: C64) -> f64 {
    let scale: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm() * z.norm().powi(k as i32))
        .sum();
    if scale == 0.0 {
        return 0.0;
    }
    eval(coeffs, z).norm() / scale
}

/// A finite root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
}

/// All roots of a polynomial of nominal degree `coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub finite: Vec<Root>,
    /// Nominal degree minus actual degree.
    pub at_infinity: usize,
    /// Set when every coefficient vanishes.
    pub all_zero: bool,
}

impl RootSet {
    pub fn finite_count(&self) -> usize {
        self.finite.iter().map(|r| r.multiplicity).sum()
    }
}

/// Eigenvalues of the companion matrix of a monic polynomial with lower
/// coefficients `monic[0..n]`.
fn companion_eigenvalues(monic: &[C64]) -> Result<Vec<C64>> {
    let n = monic.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![-monic[0]]);
    }
    let mut m = DMatrix::from_element(n, n, ZERO);
    for i in 1..n {
        m[(i, i - 1)] = ONE;
    }
    for i in 0..n {
        m[(i, n - 1)] = -monic[i];
    }
    let schur = m.try_schur(1e-15, 10_000).ok_or(Error::NoConvergence)?;
    let ev = schur.eigenvalues().ok_or(Error::NoConvergence)?;
    Ok(ev.iter().copied().collect())
}

/// Finds all roots of `sum_k coeffs[k] z^k`.
///
/// Leading coefficients below `leading_coeff * max|c_k|` are dropped and
/// counted as roots at infinity. Each finite root receives one Newton step,
/// kept only if it lowers `|P|`. Roots within `root_merge * (1 + |z|)` of
/// each other are reported once with their combined multiplicity.
pub fn roots(coeffs: &[C64], tol: &Tolerances) -> Result<RootSet> {
    let nominal = coeffs.len().saturating_sub(1);
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale <= tol.poly_zero {
        return Ok(RootSet {
            finite: Vec::new(),
            at_infinity: 0,
            all_zero: true,
        });
    }
    let degree = (0..coeffs.len())
        .rev()
        .find(|&k| coeffs[k].norm() > tol.leading_coeff * scale)
        .unwrap_or(0);
    let active = &coeffs[..=degree];
    let lead = active[degree];
    let monic: Vec<C64> = active[..degree].iter().map(|c| c / lead).collect();

    let mut raw = companion_eigenvalues(&monic)?;
    for z in raw.iter_mut() {
        let (p, dp) = eval_with_derivative(active, *z);
        if dp.norm() > 0.0 {
            let cand = *z - p / dp;
            if eval(active, cand).norm() < p.norm() {
                *z = cand;
            }
        }
    }

    let mut finite: Vec<(C64, usize)> = Vec::new();
    for z in raw {
        match finite
            .iter_mut()
            .find(|(r, _)| (*r - z).norm() <= tol.root_merge * (1.0 + z.norm()))
        {
            Some((r, m)) => {
                *r = (*r * *m as f64 + z) / (*m as f64 + 1.0);
                *m += 1;
            }
            None => finite.push((z, 1)),
        }
    }
    Ok(RootSet {
        finite: finite
            .into_iter()
            .map(|(value, multiplicity)| Root {
                value,
                multiplicity,
            })
            .collect(),
        at_infinity: nominal - degree,
        all_zero: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn quartic_with_known_roots() {
        // (z - 1)(z + 2)(z - i)(z + 0.5 + 0.5i)
        let want = [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0), c(-0.5, -0.5)];
        let mut coeffs = vec![ONE];
        for r in want {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        let rs = roots(&coeffs, &Tolerances::DEFAULT).unwrap();
        assert_eq!(rs.at_infinity, 0);
        assert_eq!(rs.finite_count(), 4);
        for r in want {
            assert!(rs.finite.iter().any(|f| (f.value - r).norm() < 1e-12));
        }
        for f in &rs.finite {
            assert!(backward_error(&coeffs, f.value) < 1e-14);
        }
    }

    #[test]
    fn degree_deficiency_and_multiplicity() {
        // z^2 as a nominal quartic.
        let coeffs = [ZERO, ZERO, ONE, ZERO, ZERO];
        let rs = roots(&coeffs, &Tolerances::DEFAULT).unwrap();
        assert_eq!(rs.at_infinity, 2);
        assert_eq!(rs.finite.len(), 1);
        assert_eq!(rs.finite[0].multiplicity, 2);
        assert!(rs.finite[0].value.norm() < 1e-12);
    }

    #[test]
    fn zero_polynomial() {
        let rs = roots(&[ZERO; 5], &Tolerances::DEFAULT).unwrap();
        assert!(rs.all_zero);
    }

    #[test]
    fn double_root_is_merged() {
        // (z - 0.3)^2 (z + 1)
        let coeffs = [c(0.09, 0.0), c(0.09 - 0.6, 0.0), c(1.0 - 0.6, 0.0), ONE];
        let rs = roots(&coeffs, &Tolerances::DEFAULT).unwrap();
        assert_eq!(rs.finite.len(), 2);
        let dbl = rs.finite.iter().find(|r| r.multiplicity == 2).unwrap();
        assert!((dbl.value - c(0.3, 0.0)).norm() < 1e-7);
    }
}
