//! Derivative-free Nelder-Mead simplex search.
//!
//! Uses the dimension-adaptive coefficients of Gao and Han, which behave
//! better than the classical ones beyond a handful of parameters.

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Simplex diameter (max-norm) at which the search stops.
    pub xtol: f64,
    /// Spread of function values at which the search stops.
    pub ftol: f64,
    /// Hard cap on function evaluations.
    pub max_evals: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            initial_step: 0.5,
            xtol: 1e-9,
            ftol: 1e-10,
            max_evals: 20_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    /// Stopped on the tolerances rather than the evaluation cap.
    pub converged: bool,
}

/// One simplex run from `x0`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let n = x0.len();
    if n == 0 {
        return Minimum {
            x: Vec::new(),
            value: f(&[]),
            evals: 1,
            converged: true,
        };
    }
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        pts.push(v);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut evals = n + 1;
    let mut converged = false;

    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    while evals < opts.max_evals {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let fspread = vals[worst] - vals[best];
        let xspread = pts
            .iter()
            .flat_map(|p| p.iter().zip(&pts[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if fspread <= opts.ftol && xspread <= opts.xtol {
            converged = true;
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&pts[i]) {
                *c += x / nf;
            }
        }

        for k in 0..n {
            trial[k] = centroid[k] + alpha * (centroid[k] - pts[worst][k]);
        }
        let fr = f(&trial);
        evals += 1;

        if fr < vals[best] {
            for k in 0..n {
                trial2[k] = centroid[k] + beta * (trial[k] - centroid[k]);
            }
            let fe = f(&trial2);
            evals += 1;
            if fe < fr {
                pts[worst].copy_from_slice(&trial2);
                vals[worst] = fe;
            } else {
                pts[worst].copy_from_slice(&trial);
                vals[worst] = fr;
            }
            continue;
        }
        if fr < vals[second_worst] {
            pts[worst].copy_from_slice(&trial);
            vals[worst] = fr;
            continue;
        }

        let (fc, outside) = if fr < vals[worst] {
            for k in 0..n {
                trial2[k] = centroid[k] + gamma * (trial[k] - centroid[k]);
            }
            (f(&trial2), true)
        } else {
            for k in 0..n {
                trial2[k] = centroid[k] + gamma * (pts[worst][k] - centroid[k]);
            }
            (f(&trial2), false)
        };
        evals += 1;
        let accept = if outside { fc <= fr } else { fc < vals[worst] };
        if accept {
            pts[worst].copy_from_slice(&trial2);
            vals[worst] = fc;
            continue;
        }

        // Shrink towards the best vertex.
        let anchor = pts[best].clone();
        for i in 0..=n {
            if i == best {
                continue;
            }
            for (x, a) in pts[i].iter_mut().zip(&anchor) {
                *x = a + delta * (*x - a);
            }
            vals[i] = f(&pts[i]);
            evals += 1;
        }
    }

    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    Minimum {
        x: pts[best].clone(),
        value: vals[best],
        evals,
        converged,
    }
}

/// Repeats the simplex search from its own optimum with a fresh, smaller
/// simplex until a rerun no longer improves by more than `ftol`. This
/// recovers from premature collapse of the simplex.
pub fn nelder_mead_polished<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    opts: &NelderMeadOptions,
    max_reruns: usize,
) -> Minimum {
    let mut best = nelder_mead(&mut f, x0, opts);
    let mut total = best.evals;
    let mut step = opts.initial_step;
    for _ in 0..max_reruns {
        if total >= opts.max_evals {
            break;
        }
        step = (step * 0.25).max(10.0 * opts.xtol);
        let run_opts = NelderMeadOptions {
            initial_step: step,
            max_evals: opts.max_evals - total,
            ..*opts
        };
        let next = nelder_mead(&mut f, &best.x, &run_opts);
        total += next.evals;
        let improved = best.value - next.value;
        if next.value <= best.value {
            best = Minimum {
                evals: total,
                ..next
            };
        }
        if improved <= opts.ftol {
            break;
        }
    }
    best.evals = total;
    best
}
