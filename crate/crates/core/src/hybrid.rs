//! Measurement campaigns, greedy local search and the hybrid solver.
//!
//! The solver only sees the simulated device through [`Device`], which
//! returns measured indices and their costs and charges every shot `k`
//! oracle calls against the iteration budget.
//!
//! Peak positions follow the phase-opposition rule: a state of cost `c` is
//! amplified best near `p_s = pi / |mu - c|`, where its phase sits opposite
//! the mean amplitude of the bulk. The rule places the search bands before
//! any correlation data exists.

use std::f64::consts::PI;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::engine::{grover_iterations, ClassAmplifier};
use crate::error::{Error, Result};
use crate::estimator::{estimate_ps_with, sample_costs, GaussianProfile, SampleEstimate};
use crate::problems::{Assignment, Problem, ProblemKind};
use crate::rng::{self, Rng};
use crate::spectrum::{enumerate, same_cost, Direction, SolutionSpace};
use crate::sweep::{fit_correlation, predict_ps, CorrelationFit};

/// Simulated amplify-and-measure device with an oracle-call budget.
pub struct Device<'a> {
    space: &'a SolutionSpace,
    amp: ClassAmplifier,
    budget: Option<u64>,
    used: u64,
    runs: u64,
}

impl<'a> Device<'a> {
    pub fn new(space: &'a SolutionSpace, budget: Option<u64>) -> Self {
        Device { space, amp: ClassAmplifier::new(space), budget, used: 0, runs: 0 }
    }

    pub fn d(&self) -> usize {
        self.space.d()
    }

    /// Oracle calls spent so far.
    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn runs(&self) -> u64 {
        self.runs
    }

    pub fn remaining(&self) -> Option<u64> {
        self.budget.map(|b| b.saturating_sub(self.used))
    }

    /// Whether `shots` runs of `k` iterations fit in the remaining budget.
    pub fn affords(&self, k: usize, shots: usize) -> bool {
        self.remaining().is_none_or(|r| (k as u64) * (shots as u64) <= r)
    }

    /// `shots` measurements after `k` iterations at `p_s`.
    pub fn measure(&mut self, p_s: f64, k: usize, shots: usize, r: &mut Rng) -> Result<Vec<(usize, f64)>> {
        if !self.affords(k, shots) {
            return Err(Error::Budget(format!("{shots} shots at k={k} exceed the remaining budget")));
        }
        self.used += (k as u64) * (shots as u64);
        self.runs += shots as u64;
        let probs = self.amp.run(p_s, k);
        let dist = WeightedIndex::new(probs.iter().map(|&p| p.max(0.0)))
            .map_err(|e| Error::InvalidArgument(format!("bad probability table: {e}")))?;
        let classes = self.space.classes();
        Ok((0..shots)
            .map(|_| {
                let members = classes.members(dist.sample(r));
                let index = members[r.gen_range(0..members.len())] as usize;
                (index, self.space.costs()[index])
            })
            .collect())
    }
}

/// Outcomes at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementEntry {
    pub ps: f64,
    pub k: usize,
    pub shots: usize,
    pub outcomes: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub threshold: f64,
    pub budget_per_point: usize,
    pub seed: u64,
    pub entries: Vec<MeasurementEntry>,
}

impl MeasurementRecord {
    /// `ps,k,shot,index,cost,below_threshold` rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["ps", "k", "shot", "index", "cost", "below_threshold"])?;
        for e in &self.entries {
            for (s, &(index, cost)) in e.outcomes.iter().enumerate() {
                w.write_record([
                    e.ps.to_string(),
                    e.k.to_string(),
                    s.to_string(),
                    index.to_string(),
                    cost.to_string(),
                    (cost < self.threshold).to_string(),
                ])?;
            }
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf8"))
    }

    /// `(ps, cost)` of every outcome below the threshold.
    pub fn below_threshold(&self) -> Vec<(f64, f64)> {
        self.entries
            .iter()
            .flat_map(|e| e.outcomes.iter().filter(|o| o.1 < self.threshold).map(move |o| (e.ps, o.1)))
            .collect()
    }
}

/// The `q` quantile (nearest rank) of `values`.
fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

/// 1st percentile of `m` uniformly drawn costs.
pub fn default_threshold(space: &SolutionSpace, m: usize, seed: u64) -> f64 {
    let mut r = rng::stream(seed, "threshold");
    let draws: Vec<f64> = (0..m.max(1)).map(|_| space.costs()[r.gen_range(0..space.d())]).collect();
    quantile(&draws, 0.01)
}

/// Equal-budget measurement campaign: `floor(budget / k)` shots per point.
pub fn simulated_experiment(
    space: &SolutionSpace,
    ps_grid: &[f64],
    k: usize,
    budget_per_point: usize,
    threshold: Option<f64>,
    seed: u64,
) -> Result<MeasurementRecord> {
    let shots = budget_per_point.checked_div(k).unwrap_or(budget_per_point);
    if shots == 0 {
        return Err(Error::Budget(format!("budget {budget_per_point} per point leaves no shot at k={k}")));
    }
    let threshold = threshold.unwrap_or_else(|| default_threshold(space, 10_000, seed));
    let mut device = Device::new(space, None);
    let mut r = rng::stream(seed, "shots");
    let entries = ps_grid
        .iter()
        .map(|&ps| {
            let outcomes = device.measure(ps, k, shots, &mut r)?;
            Ok(MeasurementEntry { ps, k, shots, outcomes })
        })
        .collect::<Result<_>>()?;
    Ok(MeasurementRecord { threshold, budget_per_point, seed, entries })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyResult {
    pub assignment: Assignment,
    pub cost: f64,
    pub flips: usize,
}

/// Steepest single-digit descent. Each step applies the digit change with
/// the largest improvement, ties going to the lowest variable index and
/// then the lowest digit value.
pub fn greedy_descent(problem: &Problem, start: &Assignment, direction: Direction) -> Result<GreedyResult> {
    problem.check(start)?;
    let radix = problem.radix();
    let mut x = start.digits().to_vec();
    let mut cost = problem.cost_of(&x);
    let mut flips = 0;
    loop {
        let mut best: Option<(usize, u32, f64)> = None;
        for i in 0..x.len() {
            let old = x[i];
            for v in (0..radix).filter(|&v| v != old) {
                x[i] = v;
                let c = problem.cost_of(&x);
                if direction.better(c, best.map_or(cost, |b| b.2)) {
                    best = Some((i, v, c));
                }
            }
            x[i] = old;
        }
        match best {
            Some((i, v, c)) => {
                x[i] = v;
                cost = c;
                flips += 1;
            }
            None => break,
        }
    }
    Ok(GreedyResult { assignment: Assignment::new(x), cost, flips })
}

/// Probe settings for verification runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub probes: usize,
    pub shots: usize,
    /// Spacing of consecutive probes relative to p_s.
    pub step_rel: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { probes: 10, shots: 20, step_rel: 0.004 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Verification {
    Improved { index: usize, cost: f64 },
    /// No better outcome in `outcomes` shots. `miss_estimate` is the chance
    /// of missing a better state whose peak is as strong as the most
    /// frequent outcome at each probe; it is evidence, not proof.
    Consistent { outcomes: usize, miss_estimate: f64 },
}

/// p_s values the fit associates with costs beyond `candidate` in `direction`.
pub fn probe_points(fit: &CorrelationFit, candidate: f64, direction: Direction, cfg: &VerifyConfig) -> Result<Vec<f64>> {
    let ps_c = predict_ps(fit, candidate)?;
    let h = 1e-6 * ps_c.abs().max(f64::MIN_POSITIVE);
    let slope = (fit.selected.cost_at(ps_c + h) - fit.selected.cost_at(ps_c - h)) / (2.0 * h);
    if !(slope.abs() > 0.0) {
        return Err(Error::Prediction("flat fit at the candidate".into()));
    }
    let dc = cfg.step_rel * ps_c.abs() * slope.abs();
    let sign = match direction {
        Direction::Min => -1.0,
        Direction::Max => 1.0,
    };
    (1..=cfg.probes)
        .map(|j| {
            let ps = predict_ps(fit, candidate + sign * j as f64 * dc)?;
            if ps > 0.0 {
                Ok(ps)
            } else {
                Err(Error::Prediction(format!("non-positive p_s {ps}")))
            }
        })
        .collect()
}

fn verify_on(
    device: &mut Device,
    candidate: f64,
    fit: &CorrelationFit,
    direction: Direction,
    cfg: &VerifyConfig,
    r: &mut Rng,
) -> Result<Verification> {
    if cfg.probes == 0 || cfg.shots == 0 {
        return Err(Error::InvalidArgument("verification needs at least one probe and one shot".into()));
    }
    let k = grover_iterations(device.d(), 1)?;
    let mut miss = 1.0;
    let mut outcomes = 0;
    for ps in probe_points(fit, candidate, direction, cfg)? {
        let shots = device.measure(ps, k, cfg.shots, r)?;
        outcomes += shots.len();
        if let Some(&(index, cost)) = shots
            .iter()
            .filter(|o| direction.better(o.1, candidate) && !same_cost(o.1, candidate))
            .min_by(|a, b| if direction.better(a.1, b.1) { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater })
        {
            return Ok(Verification::Improved { index, cost });
        }
        let mut costs: Vec<f64> = shots.iter().map(|o| o.1).collect();
        costs.sort_unstable_by(f64::total_cmp);
        let top = costs
            .chunk_by(|a, b| a == b)
            .map(|g| g.len())
            .max()
            .unwrap_or(0);
        miss *= (1.0 - top as f64 / shots.len() as f64).powi(shots.len() as i32);
    }
    Ok(Verification::Consistent { outcomes, miss_estimate: miss })
}

/// Looks past `candidate_cost` along the fitted correlation for a better
/// state.
pub fn verify_minimum(
    space: &SolutionSpace,
    candidate_cost: f64,
    fit: &CorrelationFit,
    direction: Direction,
    cfg: &VerifyConfig,
    seed: u64,
) -> Result<Verification> {
    let mut device = Device::new(space, None);
    let mut r = rng::stream(seed, "verify");
    verify_on(&mut device, candidate_cost, fit, direction, cfg, &mut r)
}

/// Tunables of [`hybrid_solve`]. None of them come from first principles;
/// they are conservative defaults for desk-scale instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HybridConfig {
    pub direction: Direction,
    /// Classical samples used for the p_s estimate and the threshold.
    pub samples: usize,
    /// Phase-1 band in units of the sampled sigma: from the tail quantile
    /// `band_quantile` out to `band_edge` times the gaussian model's edge.
    pub band_quantile: f64,
    pub band_edge: f64,
    pub band_points: usize,
    /// Oracle calls per band point; shots = budget / k.
    pub budget_per_point: usize,
    /// Distinct measured states used as greedy starts.
    pub greedy_starts: usize,
    pub verify: VerifyConfig,
    pub max_rounds: usize,
    /// Phase-1 yield below which the asymmetry diagnostic is always logged.
    pub min_yield: f64,
    /// Uniform shots used when the budget cannot pay for Phase 1.
    pub baseline_shots: usize,
}

impl Default for HybridConfig {
    fn default() -> Self {
        HybridConfig {
            direction: Direction::Min,
            samples: 1000,
            band_quantile: 0.01,
            band_edge: 1.3,
            band_points: 60,
            budget_per_point: 2000,
            greedy_starts: 5,
            verify: VerifyConfig::default(),
            max_rounds: 20,
            min_yield: 0.15,
            baseline_shots: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConfirmedMin,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Estimate { estimate: SampleEstimate, threshold: f64 },
    Baseline { shots: usize, best_cost: f64 },
    Heuristic { band: (f64, f64), points: usize, shots: usize, k: usize, best_cost: f64, yield_fraction: f64 },
    Asymmetry { requested: Direction, yield_requested: f64, yield_opposite: f64, boostable: Direction },
    Greedy { start_cost: f64, end_cost: f64, flips: usize },
    Fit { points: usize, r: f64, fallback: bool },
    Verify { candidate: f64, result: Verification },
    Verdict { verdict: Verdict },
}

/// One logged step; `clock` is the oracle-call count when it was logged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub seq: usize,
    pub clock: u64,
    /// Best cost found so far; `None` before the first measurement.
    pub best_cost: Option<f64>,
    #[serde(flatten)]
    pub event: TraceEvent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HybridTrace {
    pub seed: u64,
    pub budget: u64,
    pub config: HybridConfig,
    pub entries: Vec<TraceEntry>,
    pub oracle_calls: u64,
    pub amplification_runs: u64,
    pub verdict: Verdict,
}

impl HybridTrace {
    /// Best-so-far costs of the entries logged after the first measurement.
    pub fn best_costs(&self) -> Vec<f64> {
        self.entries.iter().filter_map(|e| e.best_cost).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HybridOutcome {
    pub assignment: Assignment,
    pub cost: f64,
    pub trace: HybridTrace,
}

struct Solver<'a, 'b> {
    problem: &'a Problem,
    device: Device<'b>,
    direction: Direction,
    entries: Vec<TraceEntry>,
    best: Option<(Assignment, f64)>,
}

impl Solver<'_, '_> {
    fn log(&mut self, event: TraceEvent) {
        let best_cost = self.best.as_ref().map(|b| b.1);
        let seq = self.entries.len();
        self.entries.push(TraceEntry { seq, clock: self.device.used(), best_cost, event });
    }

    fn offer(&mut self, x: Assignment, cost: f64) {
        if self.best.as_ref().is_none_or(|b| self.direction.better(cost, b.1)) {
            self.best = Some((x, cost));
        }
    }

    fn descend(&mut self, start: Assignment) -> Result<()> {
        let start_cost = self.problem.cost_of(start.digits());
        let g = greedy_descent(self.problem, &start, self.direction)?;
        self.offer(g.assignment, g.cost);
        self.log(TraceEvent::Greedy { start_cost, end_cost: g.cost, flips: g.flips });
        Ok(())
    }

    fn assignment(&self, index: usize) -> Assignment {
        Assignment::from_index(index, self.problem.n(), self.problem.radix())
    }
}

/// Fit of cost against p_s from measured pairs, or from the
/// phase-opposition rule when the measurements cannot support one.
fn band_fit(pairs: &[(f64, f64)], mu: f64, costs: &[f64]) -> (CorrelationFit, bool) {
    if pairs.len() >= 3 {
        if let Ok(f) = fit_correlation(pairs) {
            if f.r.abs() >= 0.5 {
                return (f, false);
            }
        }
    }
    let synthetic: Vec<(f64, f64)> = costs
        .iter()
        .filter(|&&c| (c - mu).abs() > 0.0)
        .map(|&c| (PI / (c - mu).abs(), c))
        .collect();
    let fit = fit_correlation(&synthetic)
        .or_else(|_| fit_correlation(&[(PI / 1.0, mu - 1.0), (PI / 2.0, mu - 2.0)]))
        .expect("two distinct points always fit");
    (fit, true)
}

/// Amplify-measure heuristic followed by greedy descent and fit-guided
/// verification. `budget` counts oracle calls (iterations times shots).
pub fn hybrid_solve(problem: &Problem, budget: u64, config: &HybridConfig, seed: u64) -> Result<HybridOutcome> {
    let space = enumerate(problem)?;
    hybrid_solve_on(problem, &space, budget, config, seed)
}

/// [`hybrid_solve`] against an already enumerated space.
pub fn hybrid_solve_on(
    problem: &Problem,
    space: &SolutionSpace,
    budget: u64,
    config: &HybridConfig,
    seed: u64,
) -> Result<HybridOutcome> {
    let direction = config.direction;
    let sign = match direction {
        Direction::Min => 1.0,
        Direction::Max => -1.0,
    };
    let mut solver = Solver {
        problem,
        device: Device::new(space, Some(budget)),
        direction,
        entries: Vec::new(),
        best: None,
    };
    let mut r = rng::stream(seed, "shots");

    // Phase 1: classical sample for the scale, then a heuristic band.
    let samples = sample_costs(problem, config.samples.max(2), rng::derive_seed(seed, "sampling", 0))?;
    let estimate = estimate_ps_with(&samples, problem.space_size_f64(), &GaussianProfile)?;
    let oriented: Vec<f64> = samples.iter().map(|c| sign * c).collect();
    let threshold = sign * quantile(&oriented, config.band_quantile);
    let opposite = -sign * quantile(&oriented.iter().map(|c| -c).collect::<Vec<_>>(), config.band_quantile);
    solver.log(TraceEvent::Estimate { estimate: estimate.clone(), threshold });

    let k = grover_iterations(space.d(), 1)?;
    let shots = config.budget_per_point.checked_div(k).unwrap_or(config.budget_per_point).max(1);
    let points = config.band_points.max(2);
    if !solver.device.affords(k, shots * points) {
        let uniform = solver.device.measure(0.0, 0, config.baseline_shots.max(1), &mut r)?;
        for (index, cost) in uniform {
            let x = solver.assignment(index);
            solver.offer(x, cost);
        }
        let best_cost = solver.best.as_ref().expect("at least one baseline shot").1;
        solver.log(TraceEvent::Baseline { shots: config.baseline_shots.max(1), best_cost });
        return finish(solver, Verdict::BudgetExhausted, seed, budget, config);
    }

    let z_lo = (threshold - estimate.mu_t).abs() / estimate.sigma_t;
    let z_hi = config.band_edge * (estimate.x_plus - estimate.mu_t) / estimate.sigma_t;
    let (z_lo, z_hi) = (z_lo.min(z_hi).max(1e-3), z_lo.max(z_hi).max(2e-3));
    let band = (PI / (z_hi * estimate.sigma_t), PI / (z_lo * estimate.sigma_t));
    let mut pairs = Vec::new();
    let mut measured: Vec<(usize, f64)> = Vec::new();
    let (mut hits, mut opposite_hits, mut total) = (0usize, 0usize, 0usize);
    for j in 0..points {
        let z = z_lo + (z_hi - z_lo) * j as f64 / (points - 1) as f64;
        let ps = PI / (z * estimate.sigma_t);
        for (index, cost) in solver.device.measure(ps, k, shots, &mut r)? {
            total += 1;
            if direction.better(cost, threshold) {
                hits += 1;
                pairs.push((ps, cost));
            }
            if direction.flip().better(cost, opposite) {
                opposite_hits += 1;
            }
            measured.push((index, cost));
        }
    }
    let yield_fraction = hits as f64 / total as f64;
    measured.sort_by(|a, b| {
        if direction.better(a.1, b.1) {
            std::cmp::Ordering::Less
        } else if direction.better(b.1, a.1) {
            std::cmp::Ordering::Greater
        } else {
            a.0.cmp(&b.0)
        }
    });
    measured.dedup_by_key(|m| m.0);
    let (best_index, best_cost) = measured[0];
    let best_x = solver.assignment(best_index);
    solver.offer(best_x, best_cost);
    solver.log(TraceEvent::Heuristic { band, points, shots: shots * points, k, best_cost, yield_fraction });
    let yield_opposite = opposite_hits as f64 / total as f64;
    if yield_fraction < config.min_yield || yield_opposite > yield_fraction {
        let boostable = if yield_opposite > yield_fraction { direction.flip() } else { direction };
        solver.log(TraceEvent::Asymmetry { requested: direction, yield_requested: yield_fraction, yield_opposite, boostable });
    }

    // Phase 2: greedy descent from the best distinct measured states.
    for &(index, _) in measured.iter().take(config.greedy_starts.max(1)) {
        let x = solver.assignment(index);
        solver.descend(x)?;
    }

    // Phase 3: verify along the fitted correlation, re-entering Phase 2 on
    // every improvement.
    let mu = estimate.mu_t;
    let seen: Vec<f64> = measured.iter().map(|m| m.1).filter(|&c| direction.better(c, threshold)).collect();
    for _ in 0..config.max_rounds.max(1) {
        let (fit, fallback) = band_fit(&pairs, mu, &seen);
        solver.log(TraceEvent::Fit { points: pairs.len(), r: fit.r, fallback });
        let candidate = solver.best.as_ref().expect("phase 1 sets a best").1;
        let needed = (k as u64) * (config.verify.probes * config.verify.shots) as u64;
        if solver.device.remaining().is_some_and(|rem| rem < needed) {
            return finish(solver, Verdict::BudgetExhausted, seed, budget, config);
        }
        let result = match verify_on(&mut solver.device, candidate, &fit, direction, &config.verify, &mut r) {
            Ok(v) => v,
            Err(Error::Prediction(_)) => {
                let (fit, _) = band_fit(&[], mu, &seen);
                verify_on(&mut solver.device, candidate, &fit, direction, &config.verify, &mut r)?
            }
            Err(e) => return Err(e),
        };
        solver.log(TraceEvent::Verify { candidate, result: result.clone() });
        match result {
            Verification::Improved { index, .. } => {
                let x = solver.assignment(index);
                solver.descend(x)?;
                let c = solver.best.as_ref().expect("set").1;
                let ps = predict_ps(&fit, c).unwrap_or(PI / (c - mu).abs().max(1e-12));
                pairs.push((ps, c));
            }
            Verification::Consistent { .. } => return finish(solver, Verdict::ConfirmedMin, seed, budget, config),
        }
    }
    finish(solver, Verdict::BudgetExhausted, seed, budget, config)
}

fn finish(mut solver: Solver, verdict: Verdict, seed: u64, budget: u64, config: &HybridConfig) -> Result<HybridOutcome> {
    solver.log(TraceEvent::Verdict { verdict });
    let (assignment, cost) = solver.best.clone().expect("at least one measurement");
    Ok(HybridOutcome {
        assignment,
        cost,
        trace: HybridTrace {
            seed,
            budget,
            config: config.clone(),
            oracle_calls: solver.device.used(),
            amplification_runs: solver.device.runs(),
            entries: solver.entries,
            verdict,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SubsetAnswer {
    Exists { assignment: Assignment },
    NotFoundEvidence { trials: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetConfig {
    /// Probe points on each side of the predicted p_s.
    pub half_points: usize,
    /// Half-width of the probe window relative to the predicted p_s.
    pub window_rel: f64,
    pub shots: usize,
}

impl Default for SubsetConfig {
    fn default() -> Self {
        SubsetConfig { half_points: 5, window_rel: 0.05, shots: 20 }
    }
}

/// Searches for a subset whose weights sum to `target`. The probe window
/// is centred on the p_s predicted for `target`, taken from a fit through
/// measured neighbours when they bracket it and from the phase-opposition
/// rule otherwise.
pub fn subset_sum_query(problem: &Problem, target: f64, config: &SubsetConfig, seed: u64) -> Result<SubsetAnswer> {
    if problem.kind() != ProblemKind::SubsetSum {
        return Err(Error::Kind { expected: "subset_sum", found: problem.kind().to_string() });
    }
    let w = problem.node_weights();
    let lo: f64 = w.iter().filter(|&&x| x < 0.0).sum();
    let hi: f64 = w.iter().filter(|&&x| x > 0.0).sum();
    if target < lo || target > hi {
        return Err(Error::OutOfReach { target, lo, hi });
    }
    let mu: f64 = w.iter().sum::<f64>() / 2.0;
    let space = enumerate(problem)?;
    let mut device = Device::new(&space, None);
    let mut r = rng::stream(seed, "subset");
    let d = space.d();
    let k = grover_iterations(d, 1)?;
    let assignment = |i: usize| Assignment::from_index(i, problem.n(), 2);
    let mut trials = 0;

    let gap = (target - mu).abs();
    if gap < 0.5 {
        // No phase separates the bulk centre from itself; sample uniformly.
        for (i, c) in device.measure(0.0, 0, config.shots * (2 * config.half_points + 1), &mut r)? {
            trials += 1;
            if same_cost(c, target) {
                return Ok(SubsetAnswer::Exists { assignment: assignment(i) });
            }
        }
        return Ok(SubsetAnswer::NotFoundEvidence { trials });
    }

    let scan = |device: &mut Device, r: &mut Rng, centre: f64, trials: &mut usize, pairs: &mut Vec<(f64, f64)>| -> Result<Option<usize>> {
        let n = config.half_points;
        for j in 0..=2 * n {
            let ps = centre * (1.0 + config.window_rel * (j as f64 - n as f64) / n.max(1) as f64);
            for (i, c) in device.measure(ps, k, config.shots, r)? {
                *trials += 1;
                if same_cost(c, target) {
                    return Ok(Some(i));
                }
                if (c - mu).signum() == (target - mu).signum() {
                    pairs.push((ps, c));
                }
            }
        }
        Ok(None)
    };

    let mut pairs = Vec::new();
    let rule = PI / gap;
    if let Some(i) = scan(&mut device, &mut r, rule, &mut trials, &mut pairs)? {
        return Ok(SubsetAnswer::Exists { assignment: assignment(i) });
    }
    let below = pairs.iter().any(|p| p.1 < target);
    let above = pairs.iter().any(|p| p.1 > target);
    if below && above {
        if let Ok(fit) = fit_correlation(&pairs) {
            if let Ok(ps) = predict_ps(&fit, target) {
                if ps > 0.0 {
                    if let Some(i) = scan(&mut device, &mut r, ps, &mut trials, &mut Vec::new())? {
                        return Ok(SubsetAnswer::Exists { assignment: assignment(i) });
                    }
                }
            }
        }
    }
    Ok(SubsetAnswer::NotFoundEvidence { trials })
}
