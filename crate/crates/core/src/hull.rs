//! Convex-hull membership for at most four points in three dimensions.
//!
//! By Caratheodory, a point lies in the hull of a finite set iff it lies in
//! some simplex spanned by an affinely independent subset. With four points
//! there are only fifteen nonempty subsets, so each is tried directly.

use nalgebra::{DMatrix, DVector};

pub type Point3 = [f64; 3];

fn sub(a: &Point3, b: &Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: &Point3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Edge matrix (3 x k) with columns `p_i - p_0`.
fn edges(points: &[Point3], subset: &[usize]) -> DMatrix<f64> {
    let base = points[subset[0]];
    DMatrix::from_fn(3, subset.len() - 1, |r, c| {
        sub(&points[subset[c + 1]], &base)[r]
    })
}

const INDEPENDENCE: f64 = 1e-9;

/// Affine dimension (0 to 3) of a nonempty point set.
pub fn affine_dimension(points: &[Point3]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let all: Vec<usize> = (0..points.len()).collect();
    let e = edges(points, &all);
    let sv = e.singular_values();
    sv.iter().filter(|&&s| s > INDEPENDENCE).count()
}

/// Barycentric weights of `target` in the simplex spanned by `subset`, if the
/// subset is affinely independent. Returns the weights and the residual
/// distance from `target` to the affine hull.
fn barycentric(points: &[Point3], subset: &[usize], target: &Point3) -> Option<(Vec<f64>, f64)> {
    let base = points[subset[0]];
    if subset.len() == 1 {
        return Some((vec![1.0], norm(&sub(target, &base))));
    }
    let e = edges(points, subset);
    let svd = e.clone().svd(true, true);
    if svd.singular_values.iter().any(|&s| s <= INDEPENDENCE) {
        return None;
    }
    let rhs = DVector::from_row_slice(&sub(target, &base));
    let lam = svd.solve(&rhs, 1e-14).ok()?;
    let fit = &e * &lam;
    let resid = (&rhs - fit).norm();
    let mut w = Vec::with_capacity(subset.len());
    w.push(1.0 - lam.sum());
    w.extend(lam.iter().copied());
    Some((w, resid))
}

/// Finds convex weights over `points` (one per point, summing to 1) that
/// reproduce `target` within `tol`, or `None` if `target` lies outside the
/// hull by more than `tol`.
///
/// Smaller subsets are tried first, so a target that coincides with a vertex
/// or lies on an edge receives the sparsest weights.
pub fn hull_weights(points: &[Point3], target: &Point3, tol: f64) -> Option<Vec<f64>> {
    assert!(points.len() <= 4, "hull membership supports at most four points");
    let n = points.len();
    let mut subsets: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort_by_key(|s| s.len());

    let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
    for subset in subsets {
        let Some((w, resid)) = barycentric(points, &subset, target) else {
            continue;
        };
        let slack = w.iter().fold(0.0f64, |acc, &x| acc.max(-x));
        let violation = resid.max(slack);
        if violation <= tol && best.as_ref().is_none_or(|(v, _, _)| violation < *v) {
            let exact = violation <= 1e-14;
            best = Some((violation, subset, w));
            if exact {
                break;
            }
        }
    }
    best.map(|(_, subset, w)| {
        let mut full = vec![0.0; n];
        let clipped: Vec<f64> = w.iter().map(|x| x.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        for (i, wi) in subset.iter().zip(clipped) {
            full[*i] = wi / total;
        }
        full
    })
}

/// Whether `target` lies in the convex hull of `points` within `tol`.
pub fn contains(points: &[Point3], target: &Point3, tol: f64) -> bool {
    hull_weights(points, target, tol).is_some()
}
