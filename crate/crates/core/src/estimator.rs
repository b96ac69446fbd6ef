//! Estimating p_s from a handful of sampled costs.
//!
//! The cost distribution is modelled as a gaussian of total mass D whose
//! height is fitted from the sample spread. The two points where the model
//! drops to one state per unit cost bracket the reachable spectrum, and
//! `2 pi / (x_plus - x_minus)` stands in for the exact scale.

use std::f64::consts::PI;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{generate_linear_qubo, Problem};
use crate::rng;
use crate::spectrum::{enumerate, exact_ps};

/// Costs of `m` assignments drawn uniformly with replacement.
pub fn sample_costs(problem: &Problem, m: usize, seed: u64) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::InsufficientSamples(m));
    }
    let mut r = rng::stream(seed, "sampling");
    let radix = problem.radix();
    let mut digits = vec![0u32; problem.n()];
    Ok((0..m)
        .map(|_| {
            digits.iter_mut().for_each(|d| *d = r.gen_range(0..radix));
            problem.cost_of(&digits)
        })
        .collect())
}

/// Profile shape used to locate the spectrum edges from sample moments.
pub trait ProfileModel {
    /// Returns `(height, x_minus, x_plus)` for a profile of total mass
    /// `total` with the given mean and spread.
    fn edges(&self, mu: f64, sigma: f64, total: f64) -> Result<(f64, f64, f64)>;
}

/// `alpha * exp(-(x - mu)^2 / (2 sigma^2))` normalised to `total`, with the
/// edges where the curve equals 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct GaussianProfile;

impl ProfileModel for GaussianProfile {
    fn edges(&self, mu: f64, sigma: f64, total: f64) -> Result<(f64, f64, f64)> {
        let alpha = (total / 2.0) / (sigma * (PI / 2.0).sqrt());
        if !(alpha > 1.0) {
            return Err(Error::GaussianModel(alpha));
        }
        let half = sigma * (2.0 * alpha.ln()).sqrt();
        Ok((alpha, mu - half, mu + half))
    }
}

/// Sample moments and the p_s estimate derived from them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleEstimate {
    pub m_samples: usize,
    pub mu_t: f64,
    pub sigma_t: f64,
    pub alpha_t: f64,
    pub x_minus: f64,
    pub x_plus: f64,
    pub ps_t: f64,
}

/// Gaussian estimate for a binary register of `n_qubits`.
pub fn estimate_ps(samples: &[f64], n_qubits: u32) -> Result<SampleEstimate> {
    estimate_ps_with(samples, 2f64.powi(n_qubits as i32), &GaussianProfile)
}

/// Estimate for a space of `total` assignments under any profile model.
pub fn estimate_ps_with(samples: &[f64], total: f64, model: &dyn ProfileModel) -> Result<SampleEstimate> {
    let m = samples.len();
    if m < 2 {
        return Err(Error::InsufficientSamples(m));
    }
    let mu = samples.iter().sum::<f64>() / m as f64;
    let var = samples.iter().map(|&c| (c - mu) * (c - mu)).sum::<f64>() / m as f64;
    let sigma = var.sqrt();
    if !(sigma > 0.0) {
        return Err(Error::DegenerateSample);
    }
    let (alpha, x_minus, x_plus) = model.edges(mu, sigma, total)?;
    Ok(SampleEstimate {
        m_samples: m,
        mu_t: mu,
        sigma_t: sigma,
        alpha_t: alpha,
        x_minus,
        x_plus,
        ps_t: 2.0 * PI / (x_plus - x_minus),
    })
}

/// `|estimate - exact| / exact`.
pub fn ps_error(estimate: f64, exact: f64) -> Result<f64> {
    if !(exact > 0.0) {
        return Err(Error::InvalidReference(exact));
    }
    Ok((estimate - exact).abs() / exact)
}

/// One row of the sample-size experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub m: usize,
    pub mean_error: f64,
    /// Standard error of `mean_error`.
    pub std_error: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorTable {
    pub n_qubits: usize,
    pub qubo_count: usize,
    pub trials_per_qubo: usize,
    pub seed: u64,
    pub rows: Vec<ErrorRow>,
}

impl ErrorTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf8"))
    }
}

/// Mean relative p_s error per sample size over `qubo_count` random linear
/// QUBOs of `n_qubits` nodes, each sampled `trials` times per size. The same
/// instances and trial seeds are shared by every sample size.
pub fn table1_experiment(
    n_qubits: usize,
    m_values: &[usize],
    trials: usize,
    qubo_count: usize,
    seed: u64,
) -> Result<ErrorTable> {
    if trials == 0 || qubo_count == 0 || m_values.is_empty() {
        return Err(Error::InvalidArgument("experiment needs trials, instances and sample sizes".into()));
    }
    // errors[q][mi] holds the per-trial errors of instance q at m_values[mi].
    let errors: Vec<Vec<Vec<f64>>> = (0..qubo_count as u64)
        .into_par_iter()
        .map(|q| {
            let problem = generate_linear_qubo(n_qubits, -100, 100, rng::derive_seed(seed, "qubo", q))?;
            let exact = exact_ps(&enumerate(&problem)?)?;
            m_values
                .iter()
                .map(|&m| {
                    (0..trials as u64)
                        .map(|t| {
                            let trial_seed = rng::derive_seed(seed, "trial", q * trials as u64 + t);
                            let samples = sample_costs(&problem, m, trial_seed)?;
                            let est = estimate_ps(&samples, n_qubits as u32)?;
                            ps_error(est.ps_t, exact)
                        })
                        .collect()
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let rows = m_values
        .iter()
        .enumerate()
        .map(|(mi, &m)| {
            let all: Vec<f64> = errors.iter().flat_map(|e| e[mi].iter().copied()).collect();
            let count = all.len() as f64;
            let mean = all.iter().sum::<f64>() / count;
            let var = all.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (count - 1.0).max(1.0);
            ErrorRow { m, mean_error: mean, std_error: (var / count).sqrt(), trials: all.len() }
        })
        .collect();
    Ok(ErrorTable { n_qubits, qubo_count, trials_per_qubo: trials, seed, rows })
}
