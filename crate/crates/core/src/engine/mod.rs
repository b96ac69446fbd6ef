//! Exact simulation of the amplify-measure loop: uniform start, cost-oracle
//! phases, reflection about the mean amplitude, and sampling.

mod classes;
mod state;

pub use classes::{BestOverIterations, ClassAmplifier};
pub use state::{phase, StateVector};

use std::f64::consts::PI;

use rand::distributions::{Distribution, WeightedIndex};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::spectrum::SolutionSpace;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplifyResult {
    pub probabilities: Vec<f64>,
    pub iterations_used: usize,
    pub p_s_used: f64,
    /// Tracked indices, and `history[t][j]` = probability of `tracked[j]`
    /// after `t` iterations (`k + 1` rows).
    pub tracked: Vec<usize>,
    pub history: Option<Vec<Vec<f64>>>,
}

impl AmplifyResult {
    pub fn measure(&self, shots: usize, seed: u64) -> Result<Vec<usize>> {
        measure(&self.probabilities, shots, seed)
    }

    /// `iter,index,prob` rows for the tracked indices.
    pub fn history_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["iter", "index", "prob"])?;
        if let Some(h) = &self.history {
            for (t, row) in h.iter().enumerate() {
                for (idx, p) in self.tracked.iter().zip(row) {
                    w.write_record([t.to_string(), idx.to_string(), p.to_string()])?;
                }
            }
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf8"))
    }
}

/// Applies `k` rounds of (oracle, diffusion) to the uniform state over `space`.
pub fn run_amplification(space: &SolutionSpace, p_s: f64, k: usize, tracked: &[usize]) -> Result<AmplifyResult> {
    if let Some(&bad) = tracked.iter().find(|&&i| i >= space.d()) {
        return Err(Error::InvalidArgument(format!("tracked index {bad} outside space of {}", space.d())));
    }
    let mut state = StateVector::uniform(space.d())?;
    let diagonal: Vec<_> = space.costs().iter().map(|&c| phase(p_s * c)).collect();
    let mut history = (!tracked.is_empty()).then(|| Vec::with_capacity(k + 1));
    let record = |state: &StateVector, history: &mut Option<Vec<Vec<f64>>>| {
        if let Some(h) = history {
            h.push(tracked.iter().map(|&i| state.amplitudes()[i].norm_sqr()).collect());
        }
    };
    record(&state, &mut history);
    for _ in 0..k {
        state.apply_diagonal(&diagonal)?;
        state.apply_diffusion();
        record(&state, &mut history);
    }
    Ok(AmplifyResult {
        probabilities: state.probabilities(),
        iterations_used: k,
        p_s_used: p_s,
        tracked: tracked.to_vec(),
        history,
    })
}

/// `round(pi/4 * sqrt(d / m))`, rounding to nearest.
pub fn grover_iterations(d: usize, m: usize) -> Result<usize> {
    if m == 0 || m > d {
        return Err(Error::InvalidArgument(format!("marked count {m} must lie in [1, {d}]")));
    }
    Ok((PI / 4.0 * (d as f64 / m as f64).sqrt()).round() as usize)
}

/// `shots` i.i.d. draws of a flat index from `probabilities`.
pub fn measure(probabilities: &[f64], shots: usize, seed: u64) -> Result<Vec<usize>> {
    let mut r = rng::from_seed(seed);
    measure_with(probabilities, shots, &mut r)
}

pub fn measure_with(probabilities: &[f64], shots: usize, r: &mut rng::Rng) -> Result<Vec<usize>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let dist = WeightedIndex::new(probabilities.iter().map(|&p| p.max(0.0)))
        .map_err(|e| Error::InvalidArgument(format!("bad probability table: {e}")))?;
    Ok((0..shots).map(|_| dist.sample(r)).collect())
}
