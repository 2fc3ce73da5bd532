//! Numerical convex roofs of rank-2 states.
//!
//! The roof of a pure-state measure `E` at `rho` is the minimum of
//! `sum_l w_l E(chi_l)` over decompositions of `rho`. For rank two every
//! decomposition comes from a column-isometry (see [`isometry`]), and length
//! four suffices, so the search runs over `m = 2, 3, 4` with multi-start
//! simplex descent.

pub mod isometry;
pub mod simplex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{one_tangle, three_tangle};
use crate::state::{Ensemble, Ket, PureState3, Qubit, Rank2, WeightedEnsemble};

pub use isometry::{ensemble_from_isometry, ensemble_from_matrix, isometry_defect, IsometryParams};
use isometry::{coefficient_ensemble, isometry_matrix, span_ket};
use simplex::{nelder_mead_polished, NelderMeadOptions};

/// Weights at or below this are dropped from returned ensembles.
pub const PRUNE_WEIGHT: f64 = 1e-12;

/// Pure-state measure whose roof is minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Tau3,
    OneTangle(Qubit),
}

impl Objective {
    pub fn eval(&self, psi: &PureState3) -> f64 {
        match *self {
            Objective::Tau3 => three_tangle(psi),
            Objective::OneTangle(q) => one_tangle(psi, q),
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Objective::Tau3 => write!(f, "tau3"),
            Objective::OneTangle(q) => write!(f, "one_tangle_{q}"),
        }
    }
}

pub fn average_objective(ensemble: &WeightedEnsemble, objective: Objective) -> f64 {
    ensemble.average(|k| objective.eval(k))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoofConfig {
    /// Decomposition lengths to search, each in 2..=4.
    pub m_values: Vec<usize>,
    /// Random starts per decomposition length.
    pub restarts: usize,
    pub seed: u64,
    /// Objective tolerance of the simplex search.
    pub tol: f64,
    /// Parameter tolerance of the simplex search.
    pub xtol: f64,
    /// Function-evaluation budget per start.
    pub max_iters: usize,
}

impl Default for RoofConfig {
    fn default() -> Self {
        RoofConfig {
            m_values: vec![2, 3, 4],
            restarts: 64,
            seed: 0,
            tol: 1e-10,
            xtol: 1e-9,
            max_iters: 20_000,
        }
    }
}

impl RoofConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_values.is_empty() {
            return Err(Error::Config("no decomposition lengths given".into()));
        }
        if let Some(m) = self.m_values.iter().find(|m| !(2..=4).contains(*m)) {
            return Err(Error::Config(format!("decomposition length {m} outside 2..=4")));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.xtol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("evaluation budget must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of one local search.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub m: usize,
    /// Random-stream index; the warm start carries index `restarts`.
    pub index: usize,
    pub warm: bool,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct RoofResult<const N: usize = 8> {
    /// Average of the objective over `ensemble`.
    pub value: f64,
    pub ensemble: Ensemble<N>,
    pub params: IsometryParams,
    pub best_m: usize,
    /// Best value found for each searched `m`, ascending in `m`.
    pub per_m: Vec<(usize, f64)>,
    pub restarts_used: usize,
    /// False when the winning search ran out of budget.
    pub converged: bool,
    pub outcomes: Vec<RestartOutcome>,
}

impl<const N: usize> RoofResult<N> {
    /// Searches whose value lies more than `gap` below `reference`.
    pub fn beating(&self, reference: f64, gap: f64) -> impl Iterator<Item = &RestartOutcome> + '_ {
        self.outcomes.iter().filter(move |o| o.value < reference - gap)
    }
}

/// Roof of `objective` at a three-qubit rank-2 state.
pub fn minimize_roof(state: &Rank2<8>, objective: Objective, config: &RoofConfig) -> Result<RoofResult<8>> {
    minimize_roof_by(state, |k| objective.eval(k), config)
}

fn stream_rng(seed: u64, m: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((m as u64) << 32) | index as u64);
    rng
}

/// Roof of an arbitrary pure-state measure at a rank-2 state of any
/// dimension. Each `m` is also started from the best isometry of the
/// previous `m` padded with zero rows, so the best value never increases
/// with `m`.
pub fn minimize_roof_by<const N: usize, F>(state: &Rank2<N>, measure: F, config: &RoofConfig) -> Result<RoofResult<N>>
where
    F: Fn(&Ket<N>) -> f64 + Sync,
{
    config.validate()?;
    let mut ms = config.m_values.clone();
    ms.sort_unstable();
    ms.dedup();

    let (k1, k2, p) = (state.ket1(), state.ket2(), state.p());
    let objective = |m: usize, x: &[f64]| -> f64 {
        coefficient_ensemble(p, &isometry_matrix(m, x))
            .into_iter()
            .map(|(w, c1, c2)| w * measure(&span_ket(k1, k2, c1, c2)))
            .sum()
    };
    let opts = NelderMeadOptions {
        initial_step: 0.5,
        xtol: config.xtol,
        ftol: config.tol,
        max_evals: config.max_iters,
    };

    let mut outcomes = Vec::new();
    let mut per_m = Vec::new();
    let mut best: Option<(f64, IsometryParams, bool)> = None;
    let mut warm: Option<IsometryParams> = None;

    for &m in &ms {
        let mut starts: Vec<(usize, bool, Option<IsometryParams>)> =
            (0..config.restarts).map(|i| (i, false, None)).collect();
        if let Some(prev) = &warm {
            starts.push((config.restarts, true, Some(prev.embed(m))));
        }
        let runs: Vec<(RestartOutcome, Vec<f64>)> = starts
            .into_par_iter()
            .map(|(index, is_warm, x0)| {
                let x0 = x0.unwrap_or_else(|| IsometryParams::random(m, &mut stream_rng(config.seed, m, index)));
                let found = nelder_mead_polished(|x| objective(m, x), &x0.params, &opts, 6);
                let outcome = RestartOutcome {
                    m,
                    index,
                    warm: is_warm,
                    value: found.value,
                    evals: found.evals,
                    converged: found.converged,
                };
                (outcome, found.x)
            })
            .collect();

        let (win, x) = runs
            .iter()
            .min_by(|a, b| a.0.value.total_cmp(&b.0.value).then(a.0.index.cmp(&b.0.index)))
            .expect("at least one start");
        let params = IsometryParams { m, params: x.clone() };
        per_m.push((m, win.value));
        if best.as_ref().is_none_or(|(v, _, _)| win.value < *v) {
            best = Some((win.value, params.clone(), win.converged));
        }
        warm = Some(params);
        outcomes.extend(runs.into_iter().map(|(o, _)| o));
    }

    let (_, params, converged) = best.expect("at least one decomposition length");
    let ensemble = ensemble_from_isometry(state, &params)?;
    let ensemble = Ensemble::pruned(ensemble.items().to_vec(), PRUNE_WEIGHT)?;
    let value = ensemble.average(&measure);
    Ok(RoofResult {
        value,
        ensemble,
        best_m: params.m,
        params,
        per_m,
        restarts_used: outcomes.len(),
        converged,
        outcomes,
    })
}
