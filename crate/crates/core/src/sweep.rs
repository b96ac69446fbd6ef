//! The p_s landscape: probability curves per cost value, peak locations,
//! and the fitted relation between peak p_s and cost.
//!
//! All runs go through [`ClassAmplifier`], so a sweep costs
//! `O(grid * k * distinct costs)` rather than `O(grid * k * D)`. Costs that
//! fall in the same degeneracy group are reported as one merged entity.

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{grover_iterations, ClassAmplifier};
use crate::error::{Error, Result};
use crate::spectrum::{exact_ps, Direction, SolutionSpace};

/// How many iterations a peak search runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KPolicy {
    Fixed(usize),
    /// `grover_iterations(D, degeneracy of the target)`.
    Grover,
}

impl KPolicy {
    pub fn iterations(self, d: usize, degeneracy: usize) -> Result<usize> {
        match self {
            KPolicy::Fixed(k) => Ok(k),
            KPolicy::Grover => grover_iterations(d, degeneracy),
        }
    }
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(lo.is_finite() && hi.is_finite()) || hi < lo || (steps > 1 && hi == lo) {
        return Err(Error::InvalidArgument(format!("bad grid {lo}:{hi}:{steps}")));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect())
}

/// `[0.5, 1.5]` times the exact scale of the space.
pub fn default_window(space: &SolutionSpace) -> Result<(f64, f64)> {
    let ps = exact_ps(space)?;
    Ok((0.5 * ps, 1.5 * ps))
}

/// Window for peak searches over the `r` best costs. Peaks drift to larger
/// p_s as costs approach the mean (roughly `pi / |mu - c|`), so the upper
/// edge is stretched to cover the `r`-th best cost with 25% headroom.
pub fn correlation_window(space: &SolutionSpace, r: usize, direction: Direction) -> Result<(f64, f64)> {
    let (lo, hi) = default_window(space)?;
    let values = space.classes().values();
    let r = r.clamp(1, values.len());
    let c_r = match direction {
        Direction::Min => values[r - 1],
        Direction::Max => values[values.len() - r],
    };
    let mu = crate::spectrum::pairwise_sum(space.costs()) / space.d() as f64;
    let gap = (mu - c_r).abs();
    let reach = if gap > 0.0 { 1.25 * std::f64::consts::PI / gap } else { hi };
    Ok((lo, hi.max(reach.min(4.0 * hi))))
}

/// Class amplifier whose output is summed over degeneracy groups.
#[derive(Clone, Debug)]
pub struct GroupedAmplifier {
    amp: ClassAmplifier,
    groups: Vec<Range<usize>>,
    values: Vec<f64>,
    degeneracy: Vec<usize>,
}

impl GroupedAmplifier {
    pub fn new(space: &SolutionSpace) -> Self {
        let amp = ClassAmplifier::new(space);
        let groups = space.degeneracy_groups();
        let values = groups.iter().map(|g| amp.values()[g.start]).collect();
        let degeneracy = groups.iter().map(|g| amp.counts()[g.clone()].iter().sum::<f64>() as usize).collect();
        GroupedAmplifier { amp, groups, values, degeneracy }
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Representative cost of each group, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn degeneracy(&self, group: usize) -> usize {
        self.degeneracy[group]
    }

    pub fn d(&self) -> usize {
        self.amp.d() as usize
    }

    /// Group holding `cost` (exact for integer spaces, tolerant otherwise).
    pub fn find(&self, cost: f64) -> Option<usize> {
        let i = self.values.partition_point(|&v| v < cost);
        [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .filter(|&g| g < self.values.len())
            .find(|&g| crate::spectrum::same_cost(self.values[g], cost))
    }

    /// The `r` best groups in `direction`, best first.
    pub fn best(&self, r: usize, direction: Direction) -> Vec<usize> {
        let n = self.len();
        match direction {
            Direction::Min => (0..r.min(n)).collect(),
            Direction::Max => (0..r.min(n)).map(|j| n - 1 - j).collect(),
        }
    }

    /// Probability of every group after `k` iterations at `p_s`.
    pub fn run(&self, p_s: f64, k: usize) -> Vec<f64> {
        let probs = self.amp.run(p_s, k);
        self.groups.iter().map(|g| probs[g.clone()].iter().sum()).collect()
    }
}

/// What a sweep records per grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Track {
    Costs(Vec<f64>),
    Best { r: usize, direction: Direction },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub ps_grid: Vec<f64>,
    pub k_used: usize,
    pub costs: Vec<f64>,
    pub degeneracy: Vec<usize>,
    /// `probs[j][g]`: merged probability of `costs[j]` at `ps_grid[g]`.
    pub probs: Vec<Vec<f64>>,
    pub top_r: usize,
    /// Summed probability of the `top_r` most probable cost values per point.
    pub cumulative_top_r: Vec<f64>,
}

impl SweepRecord {
    /// Long format `ps,cost,prob`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["ps", "cost", "prob"])?;
        for (g, ps) in self.ps_grid.iter().enumerate() {
            for (c, series) in self.costs.iter().zip(&self.probs) {
                w.write_record([ps.to_string(), c.to_string(), series[g].to_string()])?;
            }
        }
        finish(w)
    }

    /// `ps,top_r_prob` rows.
    pub fn cumulative_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["ps", "top_r_prob"])?;
        for (ps, p) in self.ps_grid.iter().zip(&self.cumulative_top_r) {
            w.write_record([ps.to_string(), p.to_string()])?;
        }
        finish(w)
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf8"))
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) || grid.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument("p_s grid must be nonempty, finite and strictly ascending".into()));
    }
    Ok(())
}

/// Runs `k` iterations at every grid point and records the tracked costs
/// together with the cumulative probability of the `top_r` leading values.
pub fn sweep(space: &SolutionSpace, ps_grid: &[f64], k: usize, track: &Track, top_r: usize) -> Result<SweepRecord> {
    check_grid(ps_grid)?;
    let amp = GroupedAmplifier::new(space);
    let groups: Vec<usize> = match track {
        Track::Costs(costs) => costs
            .iter()
            .map(|&c| amp.find(c).ok_or(Error::CostNotFound(c)))
            .collect::<Result<_>>()?,
        Track::Best { r, direction } => amp.best(*r, *direction),
    };
    let rows: Vec<(Vec<f64>, f64)> = ps_grid
        .par_iter()
        .map(|&ps| {
            let mut probs = amp.run(ps, k);
            let tracked = groups.iter().map(|&g| probs[g]).collect();
            probs.sort_unstable_by(|a, b| b.total_cmp(a));
            (tracked, probs.iter().take(top_r).sum())
        })
        .collect();
    let probs = (0..groups.len()).map(|j| rows.iter().map(|r| r.0[j]).collect()).collect();
    Ok(SweepRecord {
        ps_grid: ps_grid.to_vec(),
        k_used: k,
        costs: groups.iter().map(|&g| amp.values()[g]).collect(),
        degeneracy: groups.iter().map(|&g| amp.degeneracy(g)).collect(),
        probs,
        top_r,
        cumulative_top_r: rows.into_iter().map(|r| r.1).collect(),
    })
}

/// Where a cost value is most likely to be measured.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakPoint {
    pub cost_value: f64,
    pub ps_star: f64,
    pub peak_prob: f64,
    pub degeneracy: usize,
    pub k_at_peak: usize,
}

/// Coarse grid and refinement settings for peak searches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakSearch {
    pub grid_points: usize,
    /// Golden-section stopping width relative to p_s.
    pub rel_tol: f64,
    /// Number of coarse local maxima refined per target.
    pub candidates: usize,
}

impl Default for PeakSearch {
    fn default() -> Self {
        PeakSearch { grid_points: 200, rel_tol: 1e-7, candidates: 3 }
    }
}

/// Peak of one cost value inside `window`.
pub fn find_peak(
    space: &SolutionSpace,
    target_cost: f64,
    window: (f64, f64),
    policy: KPolicy,
    search: &PeakSearch,
) -> Result<PeakPoint> {
    let amp = GroupedAmplifier::new(space);
    let g = amp.find(target_cost).ok_or(Error::CostNotFound(target_cost))?;
    Ok(find_peaks(&amp, &[g], window, policy, search)?.remove(0))
}

/// Peaks of several groups. Targets sharing an iteration count share one
/// coarse scan; each is then refined on its own.
pub fn find_peaks(
    amp: &GroupedAmplifier,
    groups: &[usize],
    window: (f64, f64),
    policy: KPolicy,
    search: &PeakSearch,
) -> Result<Vec<PeakPoint>> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("bad p_s window [{lo}, {hi}]")));
    }
    if search.grid_points < 3 || !(search.rel_tol > 0.0) {
        return Err(Error::InvalidArgument("peak search needs at least 3 grid points and a positive tolerance".into()));
    }
    if let Some(&bad) = groups.iter().find(|&&g| g >= amp.len()) {
        return Err(Error::InvalidArgument(format!("group {bad} out of range")));
    }
    let grid = linspace(lo, hi, search.grid_points)?;
    let ks: Vec<usize> = groups
        .iter()
        .map(|&g| policy.iterations(amp.d(), amp.degeneracy(g)))
        .collect::<Result<_>>()?;
    let mut distinct = ks.clone();
    distinct.sort_unstable();
    distinct.dedup();

    let mut out: Vec<Option<PeakPoint>> = vec![None; groups.len()];
    for k in distinct {
        let members: Vec<usize> = (0..groups.len()).filter(|&t| ks[t] == k).collect();
        let coarse: Vec<Vec<f64>> = grid
            .par_iter()
            .map(|&ps| {
                let probs = amp.run(ps, k);
                members.iter().map(|&t| probs[groups[t]]).collect()
            })
            .collect();
        let refined: Vec<PeakPoint> = members
            .par_iter()
            .enumerate()
            .map(|(col, &t)| {
                let series: Vec<f64> = coarse.iter().map(|row| row[col]).collect();
                refine(amp, groups[t], k, &grid, &series, search)
            })
            .collect();
        for (t, p) in members.into_iter().zip(refined) {
            out[t] = Some(p);
        }
    }
    Ok(out.into_iter().map(|p| p.expect("every target assigned")).collect())
}

fn refine(amp: &GroupedAmplifier, group: usize, k: usize, grid: &[f64], series: &[f64], search: &PeakSearch) -> PeakPoint {
    let last = series.len() - 1;
    let mut maxima: Vec<usize> = (0..=last)
        .filter(|&i| (i == 0 || series[i] >= series[i - 1]) && (i == last || series[i] >= series[i + 1]))
        .collect();
    maxima.sort_by(|&a, &b| series[b].total_cmp(&series[a]).then(a.cmp(&b)));
    maxima.truncate(search.candidates.max(1));

    let f = |ps: f64| amp.run(ps, k)[group];
    let mut best = (grid[maxima[0]], series[maxima[0]]);
    for &i in &maxima {
        let a = grid[i.saturating_sub(1)];
        let b = grid[(i + 1).min(last)];
        let (ps, p) = golden_max(&f, a, b, search.rel_tol);
        for cand in [(grid[i], series[i]), (ps, p)] {
            if cand.1 > best.1 {
                best = cand;
            }
        }
    }
    PeakPoint {
        cost_value: amp.values()[group],
        ps_star: best.0,
        peak_prob: best.1,
        degeneracy: amp.degeneracy(group),
        k_at_peak: k,
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, rel_tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > rel_tol * 0.5 * (a + b).abs() {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Peaks of the `r` best distinct costs in `direction`, best first.
pub fn correlation_points(
    space: &SolutionSpace,
    r: usize,
    direction: Direction,
    window: (f64, f64),
    policy: KPolicy,
    search: &PeakSearch,
) -> Result<Vec<PeakPoint>> {
    if r < 2 {
        return Err(Error::InvalidArgument("correlation needs at least 2 points".into()));
    }
    let amp = GroupedAmplifier::new(space);
    find_peaks(&amp, &amp.best(r, direction), window, policy, search)
}

/// `ps_star,cost,peak_prob,degeneracy` rows.
pub fn points_to_csv(points: &[PeakPoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["ps_star", "cost", "peak_prob", "degeneracy"])?;
    for p in points {
        w.write_record([
            p.ps_star.to_string(),
            p.cost_value.to_string(),
            p.peak_prob.to_string(),
            p.degeneracy.to_string(),
        ])?;
    }
    finish(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r: f64,
}

/// Least-squares line through `(x, y)` points and the Pearson factor
/// computed from raw sums.
pub fn linear_regression(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(Error::UndefinedCorrelation("need at least two points"));
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    let x0 = points[0].0;
    let y0 = points[0].1;
    if points.iter().all(|p| p.0 == x0) {
        return Err(Error::UndefinedCorrelation("x values are all equal"));
    }
    if points.iter().all(|p| p.1 == y0) {
        return Err(Error::UndefinedCorrelation("y values are all equal"));
    }
    let dx = n * sxx - sx * sx;
    let dy = n * syy - sy * sy;
    let cov = n * sxy - sx * sy;
    let slope = cov / dx;
    let intercept = (sy - slope * sx) / n;
    let r = (cov / (dx * dy).sqrt()).clamp(-1.0, 1.0);
    Ok(LinearFit { slope, intercept, r })
}

/// Cost as a function of p_s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum CostModel {
    Linear { slope: f64, intercept: f64 },
    /// `c0 + c1 z + c2 z^2` with `z = (ps - center) / scale`.
    Quadratic { center: f64, scale: f64, c0: f64, c1: f64, c2: f64 },
}

impl CostModel {
    pub fn cost_at(&self, ps: f64) -> f64 {
        match *self {
            CostModel::Linear { slope, intercept } => slope * ps + intercept,
            CostModel::Quadratic { center, scale, c0, c1, c2 } => {
                let z = (ps - center) / scale;
                c0 + z * (c1 + z * c2)
            }
        }
    }

    /// p_s at which the model reaches `cost`. Quadratic roots are taken
    /// from `window` only, choosing the one nearest its centre.
    pub fn ps_for(&self, cost: f64, window: (f64, f64)) -> Result<f64> {
        match *self {
            CostModel::Linear { slope, intercept } => {
                if slope == 0.0 {
                    return Err(Error::Prediction("flat linear fit".into()));
                }
                Ok((cost - intercept) / slope)
            }
            CostModel::Quadratic { center, scale, c0, c1, c2 } => {
                let roots: Vec<f64> = if c2.abs() < 1e-12 * (c1.abs() + c0.abs()).max(1.0) {
                    if c1 == 0.0 {
                        vec![]
                    } else {
                        vec![(cost - c0) / c1]
                    }
                } else {
                    let disc = c1 * c1 - 4.0 * c2 * (c0 - cost);
                    if disc < 0.0 {
                        vec![]
                    } else {
                        let s = disc.sqrt();
                        vec![(-c1 - s) / (2.0 * c2), (-c1 + s) / (2.0 * c2)]
                    }
                };
                let mid = 0.5 * (window.0 + window.1);
                roots
                    .into_iter()
                    .map(|z| center + scale * z)
                    .filter(|ps| (window.0..=window.1).contains(ps))
                    .min_by(|a, b| (a - mid).abs().total_cmp(&(b - mid).abs()))
                    .ok_or_else(|| {
                        Error::Prediction(format!("no real root for cost {cost} in [{}, {}]", window.0, window.1))
                    })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFit {
    pub model: CostModel,
    pub rss: f64,
    pub adj_r2: f64,
}

/// Linear and quadratic fits of cost against peak p_s; `selected` is the
/// one with the larger adjusted R^2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationFit {
    pub n_points: usize,
    pub r: f64,
    pub linear: ModelFit,
    pub quadratic: Option<ModelFit>,
    pub selected: CostModel,
    /// Span of the fitted p_s values.
    pub ps_range: (f64, f64),
}

fn model_fit(points: &[(f64, f64)], model: CostModel, params: usize) -> ModelFit {
    let n = points.len() as f64;
    let mean = points.iter().map(|p| p.1).sum::<f64>() / n;
    let tss: f64 = points.iter().map(|p| (p.1 - mean).powi(2)).sum();
    let rss: f64 = points.iter().map(|&(x, y)| (y - model.cost_at(x)).powi(2)).sum();
    let dof = n - params as f64 - 1.0;
    let adj_r2 = if dof > 0.0 && tss > 0.0 { 1.0 - (rss / dof) / (tss / (n - 1.0)) } else { f64::NAN };
    ModelFit { model, rss, adj_r2 }
}

fn quadratic_fit(points: &[(f64, f64)]) -> Option<CostModel> {
    let n = points.len() as f64;
    let center = points.iter().map(|p| p.0).sum::<f64>() / n;
    let scale = (points.iter().map(|p| (p.0 - center).powi(2)).sum::<f64>() / n).sqrt();
    if !(scale > 0.0) {
        return None;
    }
    // Normal equations in the centred, scaled variable.
    let mut a = [[0.0f64; 4]; 3];
    for &(x, y) in points {
        let z = (x - center) / scale;
        let pw = [1.0, z, z * z];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += pw[i] * pw[j];
            }
            a[i][3] += pw[i] * y;
        }
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 * n {
            return None;
        }
        a.swap(col, piv);
        for row in 0..3 {
            if row != col {
                let f = a[row][col] / a[col][col];
                for j in col..4 {
                    a[row][j] -= f * a[col][j];
                }
            }
        }
    }
    Some(CostModel::Quadratic {
        center,
        scale,
        c0: a[0][3] / a[0][0],
        c1: a[1][3] / a[1][1],
        c2: a[2][3] / a[2][2],
    })
}

/// Fits cost against p_s over `(ps_star, cost)` pairs.
pub fn fit_correlation(points: &[(f64, f64)]) -> Result<CorrelationFit> {
    let lin = linear_regression(points)?;
    let linear = model_fit(points, CostModel::Linear { slope: lin.slope, intercept: lin.intercept }, 1);
    let quadratic = (points.len() >= 4)
        .then(|| quadratic_fit(points))
        .flatten()
        .map(|m| model_fit(points, m, 2));
    let selected = match quadratic {
        Some(q) if q.adj_r2 > linear.adj_r2 => q.model,
        _ => linear.model,
    };
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(CorrelationFit { n_points: points.len(), r: lin.r, linear, quadratic, selected, ps_range: (lo, hi) })
}

/// Fit over peak points, with p_s as the abscissa.
pub fn fit_points(points: &[PeakPoint]) -> Result<CorrelationFit> {
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.ps_star, p.cost_value)).collect();
    fit_correlation(&xy)
}

/// p_s at which the selected model predicts `cost`. Quadratic roots are
/// accepted within one fitted span on either side of the data.
pub fn predict_ps(fit: &CorrelationFit, cost: f64) -> Result<f64> {
    let (lo, hi) = fit.ps_range;
    let span = hi - lo;
    let ps = fit.selected.ps_for(cost, (lo - span, hi + span))?;
    if !ps.is_finite() {
        return Err(Error::Prediction(format!("non-finite p_s for cost {cost}")));
    }
    Ok(ps)
}
