//! Exhaustive solution spaces and the distributional quantities defined on them.

use std::f64::consts::PI;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{Assignment, Problem};

/// Default ceiling on materialized costs (2^26 eight-byte reals, ~512 MB).
pub const DEFAULT_CAP: usize = 1 << 26;

const INTEGER_TOL: f64 = 1e-9;
const GROUP_REL_TOL: f64 = 1e-9;

pub fn is_integer_valued(c: f64) -> bool {
    (c - c.round()).abs() < INTEGER_TOL
}

/// Digit layout of an enumerated space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceShape {
    pub n: usize,
    pub radix: u32,
}

/// Distinct cost values (bit-exact) in ascending order with their members.
#[derive(Clone, Debug)]
pub struct CostClasses {
    values: Vec<f64>,
    offsets: Vec<usize>,
    members: Vec<u32>,
}

impl CostClasses {
    fn build(costs: &[f64]) -> Self {
        let mut order: Vec<u32> = (0..costs.len() as u32).collect();
        order.par_sort_unstable_by(|&a, &b| {
            costs[a as usize].total_cmp(&costs[b as usize]).then(a.cmp(&b))
        });
        let mut values = Vec::new();
        let mut offsets = vec![0];
        for (pos, &idx) in order.iter().enumerate() {
            let c = costs[idx as usize];
            if values.last() != Some(&c) {
                if pos > 0 {
                    offsets.push(pos);
                }
                values.push(c);
            }
        }
        offsets.push(order.len());
        CostClasses { values, offsets, members: order }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn count(&self, class: usize) -> usize {
        self.offsets[class + 1] - self.offsets[class]
    }

    pub fn counts(&self) -> Vec<f64> {
        (0..self.len()).map(|c| self.count(c) as f64).collect()
    }

    /// Flat indices with this class's cost, ascending.
    pub fn members(&self, class: usize) -> &[u32] {
        &self.members[self.offsets[class]..self.offsets[class + 1]]
    }

    /// Class whose value equals `cost` exactly.
    pub fn find(&self, cost: f64) -> Option<usize> {
        self.values.binary_search_by(|v| v.total_cmp(&(cost + 0.0))).ok()
    }

    /// Class whose value is within the degeneracy tolerance of `cost`.
    pub fn find_near(&self, cost: f64) -> Option<usize> {
        if let Some(c) = self.find(cost) {
            return Some(c);
        }
        let pos = self.values.partition_point(|&v| v < cost);
        [pos.wrapping_sub(1), pos]
            .into_iter()
            .filter(|&p| p < self.len())
            .find(|&p| same_cost(self.values[p], cost))
    }
}

pub(crate) fn same_cost(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    if is_integer_valued(a) && is_integer_valued(b) {
        return a.round() == b.round();
    }
    (a - b).abs() <= GROUP_REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// The cost of every assignment, indexed by flat index.
#[derive(Debug)]
pub struct SolutionSpace {
    costs: Vec<f64>,
    c_min: f64,
    c_max: f64,
    argmin: Vec<usize>,
    argmax: Vec<usize>,
    integer_valued: bool,
    shape: Option<SpaceShape>,
    classes: OnceLock<CostClasses>,
}

impl Clone for SolutionSpace {
    fn clone(&self) -> Self {
        SolutionSpace {
            costs: self.costs.clone(),
            c_min: self.c_min,
            c_max: self.c_max,
            argmin: self.argmin.clone(),
            argmax: self.argmax.clone(),
            integer_valued: self.integer_valued,
            shape: self.shape,
            classes: OnceLock::new(),
        }
    }
}

impl SolutionSpace {
    /// Wraps a raw cost table (synthetic spaces, loaded files).
    pub fn from_costs(costs: Vec<f64>) -> Result<Self> {
        Self::build(costs, None)
    }

    pub fn from_costs_with_shape(costs: Vec<f64>, shape: SpaceShape) -> Result<Self> {
        let expect = (shape.radix as usize).checked_pow(shape.n as u32);
        if expect != Some(costs.len()) {
            return Err(Error::InvalidSize(format!(
                "{} costs do not match {}^{}",
                costs.len(),
                shape.radix,
                shape.n
            )));
        }
        Self::build(costs, Some(shape))
    }

    fn build(mut costs: Vec<f64>, shape: Option<SpaceShape>) -> Result<Self> {
        if costs.is_empty() {
            return Err(Error::InvalidSize("solution space must be nonempty".into()));
        }
        if costs.len() > u32::MAX as usize {
            return Err(Error::Capacity { required: costs.len() as u128, cap: u32::MAX as usize });
        }
        if let Some(bad) = costs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite cost {bad}")));
        }
        // fold -0.0 into 0.0 so equal costs compare bit-equal
        costs.iter_mut().for_each(|c| *c += 0.0);

        let (c_min, c_max) = costs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| (lo.min(c), hi.max(c)));
        let argmin = costs.iter().enumerate().filter(|(_, &c)| c == c_min).map(|(i, _)| i).collect();
        let argmax = costs.iter().enumerate().filter(|(_, &c)| c == c_max).map(|(i, _)| i).collect();
        let integer_valued = costs.par_iter().all(|&c| is_integer_valued(c));
        Ok(SolutionSpace {
            costs,
            c_min,
            c_max,
            argmin,
            argmax,
            integer_valued,
            shape,
            classes: OnceLock::new(),
        })
    }

    pub fn d(&self) -> usize {
        self.costs.len()
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    pub fn argmin(&self) -> &[usize] {
        &self.argmin
    }

    pub fn argmax(&self) -> &[usize] {
        &self.argmax
    }

    pub fn shape(&self) -> Option<SpaceShape> {
        self.shape
    }

    pub fn is_integer_valued(&self) -> bool {
        self.integer_valued
    }

    pub fn classes(&self) -> &CostClasses {
        self.classes.get_or_init(|| CostClasses::build(&self.costs))
    }

    pub fn assignment(&self, index: usize) -> Option<Assignment> {
        self.shape.map(|s| Assignment::from_index(index, s.n, s.radix))
    }

    /// Contiguous ranges of classes that count as one cost value: exact
    /// equality for integer-valued spaces, a 1e-9 relative tolerance otherwise.
    pub fn degeneracy_groups(&self) -> Vec<Range<usize>> {
        let values = self.classes().values();
        let mut groups = Vec::new();
        let mut start = 0;
        for c in 1..=values.len() {
            let split = c == values.len()
                || self.integer_valued
                || !same_cost(values[start], values[c]);
            if split {
                groups.push(start..c);
                start = c;
            }
        }
        groups
    }

    /// A new space with every cost mapped through `f`.
    pub fn map_costs(&self, f: impl Fn(f64) -> f64 + Sync) -> Result<Self> {
        let costs = self.costs.par_iter().map(|&c| f(c)).collect();
        Self::build(costs, self.shape)
    }

    /// Writes the costs as little-endian f64 to `path` and a JSON sidecar
    /// to `path.json`.
    pub fn save(&self, path: &Path, meta: &SpaceMeta) -> Result<()> {
        let mut bytes = Vec::with_capacity(self.costs.len() * 8);
        for c in &self.costs {
            bytes.extend_from_slice(&c.to_le_bytes());
        }
        fs::write(path, bytes)?;
        fs::write(sidecar_path(path), serde_json::to_string_pretty(meta)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<(Self, SpaceMeta)> {
        let meta: SpaceMeta = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
        let bytes = fs::read(path)?;
        if bytes.len() % 8 != 0 {
            return Err(Error::InvalidSize(format!("{} bytes is not a whole number of f64", bytes.len())));
        }
        let costs = bytes
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")))
            .collect();
        let space = match (meta.n, meta.radix) {
            (Some(n), Some(radix)) => Self::from_costs_with_shape(costs, SpaceShape { n, radix })?,
            _ => Self::from_costs(costs)?,
        };
        Ok((space, meta))
    }
}

/// Sidecar metadata for a persisted space.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpaceMeta {
    pub n: Option<usize>,
    pub radix: Option<u32>,
    pub kind: Option<String>,
    pub seed: Option<u64>,
    pub d: usize,
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Evaluates every assignment of `problem` (capped at [`DEFAULT_CAP`]).
pub fn enumerate(problem: &Problem) -> Result<SolutionSpace> {
    enumerate_with_cap(problem, DEFAULT_CAP)
}

pub fn enumerate_with_cap(problem: &Problem, cap: usize) -> Result<SolutionSpace> {
    const CHUNK: usize = 1 << 12;
    let required = (problem.radix() as u128).checked_pow(problem.n() as u32).unwrap_or(u128::MAX);
    if required > cap as u128 {
        return Err(Error::Capacity { required, cap });
    }
    let d = required as usize;
    let (n, radix) = (problem.n(), problem.radix());
    let mut costs = vec![0.0; d];
    costs.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
        let mut x = Assignment::from_index(ci * CHUNK, n, radix);
        for slot in chunk.iter_mut() {
            *slot = problem.cost_of(x.digits());
            increment(x.digits_mut(), radix);
        }
    });
    SolutionSpace::build(costs, Some(SpaceShape { n, radix }))
}

fn increment(digits: &mut [u32], radix: u32) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return;
        }
        *d = 0;
    }
}

/// Moment-based gaussian model `alpha * exp(-(x - mu)^2 / (2 sigma^2))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianFit {
    pub alpha: f64,
    pub mu: f64,
    pub sigma: f64,
}

impl GaussianFit {
    pub fn eval(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        self.alpha * (-0.5 * z * z).exp()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceStats {
    pub mu: f64,
    pub sigma: f64,
    pub sigma_scaled: f64,
    pub x_delta: f64,
    pub c_min: f64,
    pub c_max: f64,
    pub gaussian_fit: Option<GaussianFit>,
}

/// Population statistics of the space; `p_s` scales sigma into sigma'.
pub fn stats(space: &SolutionSpace, p_s: f64) -> SpaceStats {
    let d = space.d() as f64;
    let mu = pairwise_sum(space.costs()) / d;
    let sq: Vec<f64> = space.costs().par_iter().map(|&c| (c - mu) * (c - mu)).collect();
    let sigma = (pairwise_sum(&sq) / d).sqrt();
    let binning = if space.is_integer_valued() && space.c_max() - space.c_min() <= 1e6 {
        Binning::Unit
    } else {
        Binning::Count(100)
    };
    let gaussian_fit = histogram(space, binning).ok().and_then(|h| fit_gaussian(&h).ok());
    SpaceStats {
        mu,
        sigma,
        sigma_scaled: sigma * p_s,
        x_delta: 2.0 * mu - (space.c_max() + space.c_min()),
        c_min: space.c_min(),
        c_max: space.c_max(),
        gaussian_fit,
    }
}

/// Deterministic pairwise summation.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 256 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// The p_s that maps `[c_min, c_max]` onto a window of width 2 pi.
pub fn exact_ps(space: &SolutionSpace) -> Result<f64> {
    let range = space.c_max() - space.c_min();
    if range <= 0.0 {
        return Err(Error::DegenerateSpectrum(space.c_min()));
    }
    Ok(2.0 * PI / range)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Binning {
    /// Equal-width bins spanning `[c_min, c_max]`.
    Count(usize),
    /// One bin per integer cost (integer-valued spaces only).
    Unit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `counts.len() + 1` ascending bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn bin_width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn nonempty_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["cost", "count"])?;
        for (c, n) in self.centers().iter().zip(&self.counts) {
            w.write_record([c.to_string(), n.to_string()])?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf8"))
    }
}

pub fn histogram(space: &SolutionSpace, binning: Binning) -> Result<Histogram> {
    let (lo, hi) = (space.c_min(), space.c_max());
    match binning {
        Binning::Unit => {
            if !space.is_integer_valued() {
                return Err(Error::HistogramMode("unit bins need integer-valued costs".into()));
            }
            let (lo, hi) = (lo.round() as i64, hi.round() as i64);
            let bins = (hi - lo + 1) as usize;
            let mut counts = vec![0u64; bins];
            for &c in space.costs() {
                counts[(c.round() as i64 - lo) as usize] += 1;
            }
            let edges = (0..=bins).map(|b| (lo + b as i64) as f64 - 0.5).collect();
            Ok(Histogram { edges, counts })
        }
        Binning::Count(0) => Err(Error::HistogramMode("need at least one bin".into())),
        Binning::Count(bins) => {
            let (lo, width) = if hi > lo { (lo, (hi - lo) / bins as f64) } else { (lo - 0.5, 1.0 / bins as f64) };
            let mut counts = vec![0u64; bins];
            for &c in space.costs() {
                let b = (((c - lo) / width) as usize).min(bins - 1);
                counts[b] += 1;
            }
            let edges = (0..=bins).map(|b| lo + b as f64 * width).collect();
            Ok(Histogram { edges, counts })
        }
    }
}

/// Moment fit: mean and population sd of the binned data, height chosen
/// so the curve sampled at bin centers sums to the histogram total.
pub fn fit_gaussian(hist: &Histogram) -> Result<GaussianFit> {
    if hist.nonempty_bins() < 3 {
        return Err(Error::Fit(format!("need 3 nonempty bins, have {}", hist.nonempty_bins())));
    }
    let total = hist.total() as f64;
    let centers = hist.centers();
    let mu = centers.iter().zip(&hist.counts).map(|(c, &n)| c * n as f64).sum::<f64>() / total;
    let var = centers
        .iter()
        .zip(&hist.counts)
        .map(|(c, &n)| n as f64 * (c - mu) * (c - mu))
        .sum::<f64>()
        / total;
    let sigma = var.sqrt();
    let alpha = total * hist.bin_width() / (sigma * (2.0 * PI).sqrt());
    Ok(GaussianFit { alpha, mu, sigma })
}

/// Fraction of the histogram mass inside `mu +- k sigma` that the fitted
/// curve accounts for (bin-wise overlap `min(count, G(center))`).
pub fn explained_mass(hist: &Histogram, fit: &GaussianFit, k_sigma: f64) -> f64 {
    let total = hist.total() as f64;
    hist.centers()
        .iter()
        .zip(&hist.counts)
        .filter(|(c, _)| (*c - fit.mu).abs() <= k_sigma * fit.sigma)
        .map(|(&c, &n)| (n as f64).min(fit.eval(c)))
        .sum::<f64>()
        / total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Min => Direction::Max,
            Direction::Max => Direction::Min,
        }
    }

    /// Whether `a` is strictly better than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Min => a < b,
            Direction::Max => a > b,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Direction::Min),
            "max" => Ok(Direction::Max),
            other => Err(Error::InvalidArgument(format!("direction must be min or max, got `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedCost {
    pub cost: f64,
    pub degeneracy: usize,
    pub indices: Vec<usize>,
}

/// The `r` best distinct costs in `direction`, each with its multiplicity
/// and up to `max_indices` attaining flat indices.
pub fn rank_solutions(space: &SolutionSpace, r: usize, direction: Direction, max_indices: usize) -> Vec<RankedCost> {
    let classes = space.classes();
    let groups = space.degeneracy_groups();
    let pick = |g: &Range<usize>| {
        let mut indices: Vec<usize> = g
            .clone()
            .flat_map(|c| classes.members(c).iter().map(|&i| i as usize))
            .collect();
        indices.sort_unstable();
        let degeneracy = indices.len();
        indices.truncate(max_indices);
        let rep = match direction {
            Direction::Min => classes.values()[g.start],
            Direction::Max => classes.values()[g.end - 1],
        };
        RankedCost { cost: rep, degeneracy, indices }
    };
    match direction {
        Direction::Min => groups.iter().take(r).map(pick).collect(),
        Direction::Max => groups.iter().rev().take(r).map(pick).collect(),
    }
}

pub fn ranking_to_csv(ranking: &[RankedCost]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["cost", "count"])?;
    for r in ranking {
        w.write_record([r.cost.to_string(), r.degeneracy.to_string()])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{generate_linear_qubo, Edge, ProblemKind};

    fn two_node() -> Problem {
        Problem::new(ProblemKind::GraphQubo, 2, vec![1.0, 2.0], vec![Edge::new(0, 1, 4.0)], None).unwrap()
    }

    #[test]
    fn enumerate_two_node_by_hand() {
        let s = enumerate(&two_node()).unwrap();
        assert_eq!(s.costs(), &[0.0, 2.0, 1.0, 7.0]);
        assert_eq!((s.c_min(), s.c_max()), (0.0, 7.0));
        assert_eq!(s.argmin(), &[0]);
        assert_eq!(s.argmax(), &[3]);
    }

    #[test]
    fn zero_weights_flat_space() {
        let p = Problem::new(ProblemKind::LinearQubo, 3, vec![0.0; 3], vec![Edge::new(0, 1, 0.0), Edge::new(1, 2, 0.0)], None).unwrap();
        let s = enumerate(&p).unwrap();
        assert!(s.costs().iter().all(|&c| c == 0.0));
        assert_eq!((s.c_min(), s.c_max()), (0.0, 0.0));
        assert_eq!(s.argmin().len(), 8);
        assert!(matches!(exact_ps(&s), Err(Error::DegenerateSpectrum(_))));
    }

    #[test]
    fn capacity_error_names_requirement() {
        let p = generate_linear_qubo(20, -100, 100, 0).unwrap();
        match enumerate_with_cap(&p, 1 << 10) {
            Err(Error::Capacity { required, cap }) => {
                assert_eq!(required, 1 << 20);
                assert_eq!(cap, 1 << 10);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stats_by_hand() {
        let s = SolutionSpace::from_costs(vec![0.0, 2.0, 1.0, 7.0]).unwrap();
        let st = stats(&s, 0.5);
        assert_eq!(st.mu, 2.5);
        assert!((st.sigma - 7.25f64.sqrt()).abs() < 1e-15);
        assert!((st.sigma_scaled - 0.5 * 7.25f64.sqrt()).abs() < 1e-15);
        assert_eq!(st.x_delta, 5.0 - 7.0);
        assert_eq!(stats(&s, 0.0).sigma_scaled, 0.0);
        let sym = SolutionSpace::from_costs(vec![-3.0, 0.0, 0.0, 3.0]).unwrap();
        assert_eq!(stats(&sym, 1.0).x_delta, 0.0);
    }

    #[test]
    fn exact_ps_values() {
        let s = SolutionSpace::from_costs(vec![0.0, 2.0 * PI]).unwrap();
        assert!((exact_ps(&s).unwrap() - 1.0).abs() < 1e-15);
        let s = SolutionSpace::from_costs(vec![-1497.0, 0.0, -1497.0 + 2158.0]).unwrap();
        let ps = exact_ps(&s).unwrap();
        assert!((ps - 2.0 * PI / 2158.0).abs() < 1e-18);
        assert!((ps - 0.0029116).abs() < 1e-7);
        assert!((0.00290..0.00292).contains(&ps));
    }

    #[test]
    fn unit_histogram() {
        let s = SolutionSpace::from_costs(vec![0.0, 2.0, 1.0, 7.0]).unwrap();
        let h = histogram(&s, Binning::Unit).unwrap();
        let centers = h.centers();
        let nonzero: Vec<(f64, u64)> = centers.into_iter().zip(h.counts.iter().copied()).filter(|(_, n)| *n > 0).collect();
        assert_eq!(nonzero, vec![(0.0, 1), (1.0, 1), (2.0, 1), (7.0, 1)]);
        assert_eq!(h.total(), 4);
        let f = SolutionSpace::from_costs(vec![0.5, 1.0]).unwrap();
        assert!(matches!(histogram(&f, Binning::Unit), Err(Error::HistogramMode(_))));
        assert_eq!(histogram(&f, Binning::Count(7)).unwrap().total(), 2);
        assert!(h.to_csv().unwrap().starts_with("cost,count\n0,1\n1,1\n2,1\n3,0\n"));
    }

    #[test]
    fn single_bin_fit_fails() {
        let s = SolutionSpace::from_costs(vec![3.0; 8]).unwrap();
        let h = histogram(&s, Binning::Unit).unwrap();
        assert!(matches!(fit_gaussian(&h), Err(Error::Fit(_))));
    }

    #[test]
    fn ranking_with_ties() {
        let s = SolutionSpace::from_costs(vec![0.0, 2.0, 1.0, 7.0]).unwrap();
        let r = rank_solutions(&s, 2, Direction::Min, 10);
        let pairs: Vec<_> = r.iter().map(|x| (x.cost, x.degeneracy)).collect();
        assert_eq!(pairs, vec![(0.0, 1), (1.0, 1)]);
        let t = SolutionSpace::from_costs(vec![3.0, 3.0, 5.0]).unwrap();
        let r = rank_solutions(&t, 5, Direction::Min, 10);
        assert_eq!(r[0].degeneracy, 2);
        assert_eq!(r[0].indices, vec![0, 1]);
        assert_eq!(r.len(), 2);
        let r = rank_solutions(&t, 1, Direction::Max, 10);
        assert_eq!((r[0].cost, r[0].degeneracy), (5.0, 1));
    }

    #[test]
    fn near_equal_float_costs_group() {
        let s = SolutionSpace::from_costs(vec![0.1 + 0.2, 0.3, 1.5]).unwrap();
        assert_eq!(s.classes().len(), 3);
        let r = rank_solutions(&s, 1, Direction::Min, 10);
        assert_eq!(r[0].degeneracy, 2);
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("space.bin");
        let p = generate_linear_qubo(6, -100, 100, 3).unwrap();
        let s = enumerate(&p).unwrap();
        let meta = SpaceMeta { n: Some(6), radix: Some(2), kind: Some("linear_qubo".into()), seed: Some(3), d: 64 };
        s.save(&path, &meta).unwrap();
        let (t, m) = SolutionSpace::load(&path).unwrap();
        assert_eq!(s.costs(), t.costs());
        assert_eq!(m, meta);
        assert_eq!(t.shape(), Some(SpaceShape { n: 6, radix: 2 }));
    }
}
