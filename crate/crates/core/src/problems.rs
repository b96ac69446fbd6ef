//! Cost-function families and seeded instance generators.
//!
//! Every family is evaluated on an [`Assignment`], a fixed-length digit
//! string. Digit 0 is the leftmost character of the printed string and the
//! most significant digit of the flat index, so `"1101"` is index 13.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "linear_qubo")]
    LinearQubo,
    #[serde(rename = "graph_qubo")]
    GraphQubo,
    #[serde(rename = "maxcut")]
    MaxCut,
    #[serde(rename = "coloring")]
    Coloring,
    #[serde(rename = "subset_sum")]
    SubsetSum,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::LinearQubo => "linear_qubo",
            ProblemKind::GraphQubo => "graph_qubo",
            ProblemKind::MaxCut => "maxcut",
            ProblemKind::Coloring => "coloring",
            ProblemKind::SubsetSum => "subset_sum",
        }
    }

    pub fn is_qubo(self) -> bool {
        matches!(self, ProblemKind::LinearQubo | ProblemKind::GraphQubo)
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "linear_qubo" => ProblemKind::LinearQubo,
            "graph_qubo" => ProblemKind::GraphQubo,
            "maxcut" => ProblemKind::MaxCut,
            "coloring" => ProblemKind::Coloring,
            "subset_sum" => ProblemKind::SubsetSum,
            other => return Err(Error::InvalidArgument(format!("unknown problem kind `{other}`"))),
        })
    }
}

/// A weighted connection between two distinct nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, f64)", into = "(usize, usize, f64)")]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

impl Edge {
    pub fn new(i: usize, j: usize, w: f64) -> Self {
        Edge { i, j, w }
    }
}

impl From<(usize, usize, f64)> for Edge {
    fn from((i, j, w): (usize, usize, f64)) -> Self {
        Edge { i, j, w }
    }
}

impl From<Edge> for (usize, usize, f64) {
    fn from(e: Edge) -> Self {
        (e.i, e.j, e.w)
    }
}

/// One candidate solution: a digit per variable. Serialized as its
/// display string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Assignment(Vec<u32>);

impl TryFrom<String> for Assignment {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Assignment> for String {
    fn from(a: Assignment) -> String {
        a.to_string()
    }
}

impl Assignment {
    pub fn new(digits: Vec<u32>) -> Self {
        Assignment(digits)
    }

    pub fn zeros(n: usize) -> Self {
        Assignment(vec![0; n])
    }

    /// Mixed-radix decode with digit 0 most significant.
    pub fn from_index(mut index: usize, n: usize, radix: u32) -> Self {
        let r = radix as usize;
        let mut digits = vec![0u32; n];
        for d in digits.iter_mut().rev() {
            *d = (index % r) as u32;
            index /= r;
        }
        Assignment(digits)
    }

    pub fn to_index(&self, radix: u32) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &d| acc * radix as usize + d as usize)
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn digits_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Swaps 0 and 1 in every position (binary assignments only).
    pub fn complement(&self) -> Self {
        Assignment(self.0.iter().map(|&d| 1 - d.min(1)).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&d| d < 10) {
            for d in &self.0 {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for Assignment {
    type Err = Error;

    /// Accepts either a plain digit string (`"1101"`) or comma-separated digits.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidAssignment(format!("cannot parse `{s}`"));
        let digits = if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Assignment(digits))
    }
}

/// A cost function over `n` variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemRepr", into = "ProblemRepr")]
pub struct Problem {
    kind: ProblemKind,
    n: usize,
    node_weights: Vec<f64>,
    edges: Vec<Edge>,
    k_colors: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    kind: ProblemKind,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k_colors: Option<u32>,
    #[serde(default)]
    node_weights: Vec<f64>,
    #[serde(default)]
    edges: Vec<Edge>,
}

impl TryFrom<ProblemRepr> for Problem {
    type Error = Error;

    fn try_from(r: ProblemRepr) -> Result<Self> {
        Problem::new(r.kind, r.n, r.node_weights, r.edges, r.k_colors)
    }
}

impl From<Problem> for ProblemRepr {
    fn from(p: Problem) -> Self {
        ProblemRepr {
            kind: p.kind,
            n: p.n,
            k_colors: p.k_colors,
            node_weights: p.node_weights,
            edges: p.edges,
        }
    }
}

impl Problem {
    /// Validates and builds a problem. `node_weights` may be empty for
    /// Max-Cut and coloring, otherwise it must have `n` entries.
    pub fn new(
        kind: ProblemKind,
        n: usize,
        node_weights: Vec<f64>,
        edges: Vec<Edge>,
        k_colors: Option<u32>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidProblem(msg));
        if n == 0 {
            return invalid("problem needs at least one variable".into());
        }
        match kind {
            ProblemKind::MaxCut | ProblemKind::Coloring => {
                if !node_weights.is_empty() && node_weights.len() != n {
                    return invalid(format!("expected 0 or {n} node weights, got {}", node_weights.len()));
                }
                if node_weights.iter().any(|&w| w != 0.0) {
                    return invalid(format!("{kind} carries no node weights"));
                }
            }
            _ => {
                if node_weights.len() != n {
                    return invalid(format!("expected {n} node weights, got {}", node_weights.len()));
                }
            }
        }
        if node_weights.iter().chain(edges.iter().map(|e| &e.w)).any(|w| !w.is_finite()) {
            return invalid("weights must be finite".into());
        }

        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.i == e.j {
                return invalid(format!("self-loop on node {}", e.i));
            }
            if e.i >= n || e.j >= n {
                return invalid(format!("edge ({}, {}) out of range for n = {n}", e.i, e.j));
            }
            if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
                return invalid(format!("duplicate edge ({}, {})", e.i, e.j));
            }
        }

        match kind {
            ProblemKind::LinearQubo => {
                let chain: HashSet<_> = (0..n - 1).map(|a| (a, a + 1)).collect();
                if n < 2 || seen != chain {
                    return invalid("linear QUBO edges must be exactly the chain {n, n+1}".into());
                }
            }
            ProblemKind::SubsetSum if !edges.is_empty() => {
                return invalid("subset sum has no edges".into());
            }
            _ => {}
        }

        let k_colors = match kind {
            ProblemKind::Coloring => match k_colors {
                Some(k) if k >= 2 => Some(k),
                other => return invalid(format!("coloring needs k_colors >= 2, got {other:?}")),
            },
            _ if k_colors.is_some() => {
                return invalid(format!("k_colors only applies to coloring, not {kind}"));
            }
            _ => None,
        };

        Ok(Problem { kind, n, node_weights, edges, k_colors })
    }

    /// The four-node chain whose string `1101` picks up the terms
    /// -8, +18, -22, -12 for a total cost of -24.
    pub fn chain4_example() -> Self {
        Problem::new(
            ProblemKind::LinearQubo,
            4,
            vec![-8.0, -22.0, 14.0, -12.0],
            vec![Edge::new(0, 1, 18.0), Edge::new(1, 2, -5.0), Edge::new(2, 3, 7.0)],
            None,
        )
        .expect("valid example")
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_weights(&self) -> &[f64] {
        &self.node_weights
    }

    pub fn node_weight(&self, i: usize) -> f64 {
        self.node_weights.get(i).copied().unwrap_or(0.0)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn k_colors(&self) -> Option<u32> {
        self.k_colors
    }

    /// Number of values each variable can take.
    pub fn radix(&self) -> u32 {
        self.k_colors.unwrap_or(2)
    }

    /// Total assignment count `radix^n`, or `None` when it overflows.
    pub fn space_size(&self) -> Option<usize> {
        (self.radix() as usize).checked_pow(self.n as u32)
    }

    /// Same as [`space_size`](Self::space_size) but never overflows.
    pub fn space_size_f64(&self) -> f64 {
        f64::from(self.radix()).powi(self.n as i32)
    }

    pub fn check(&self, x: &Assignment) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::InvalidAssignment(format!(
                "length {} does not match problem size {}",
                x.len(),
                self.n
            )));
        }
        let radix = self.radix();
        if let Some(pos) = x.digits().iter().position(|&d| d >= radix) {
            return Err(Error::InvalidAssignment(format!(
                "digit {} at position {pos} exceeds radix {radix}",
                x.digits()[pos]
            )));
        }
        Ok(())
    }

    pub fn evaluate_cost(&self, x: &Assignment) -> Result<f64> {
        self.check(x)?;
        Ok(self.cost_of(x.digits()))
    }

    /// Cost of a digit slice already known to be valid.
    pub fn cost_of(&self, x: &[u32]) -> f64 {
        match self.kind {
            ProblemKind::LinearQubo | ProblemKind::GraphQubo => {
                let linear: f64 = self
                    .node_weights
                    .iter()
                    .zip(x)
                    .filter(|(_, &d)| d == 1)
                    .map(|(w, _)| w)
                    .sum();
                let quadratic: f64 = self
                    .edges
                    .iter()
                    .filter(|e| x[e.i] == 1 && x[e.j] == 1)
                    .map(|e| e.w)
                    .sum();
                linear + quadratic
            }
            ProblemKind::MaxCut => self.edges.iter().filter(|e| x[e.i] != x[e.j]).map(|e| e.w).sum(),
            ProblemKind::Coloring => self.edges.iter().filter(|e| x[e.i] == x[e.j]).map(|e| e.w).sum(),
            ProblemKind::SubsetSum => self
                .node_weights
                .iter()
                .zip(x)
                .filter(|(_, &d)| d == 1)
                .map(|(w, _)| w)
                .sum(),
        }
    }

    /// Cost at a flat index.
    pub fn cost_at(&self, index: usize) -> f64 {
        let x = Assignment::from_index(index, self.n, self.radix());
        self.cost_of(x.digits())
    }

    /// Same problem with every weight mapped through `f`.
    pub fn map_weights(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let node_weights = if matches!(self.kind, ProblemKind::MaxCut | ProblemKind::Coloring) {
            self.node_weights.clone()
        } else {
            self.node_weights.iter().map(|&w| f(w)).collect()
        };
        let edges = self.edges.iter().map(|e| Edge::new(e.i, e.j, f(e.w))).collect();
        Problem::new(self.kind, self.n, node_weights, edges, self.k_colors)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn uniform_weights(r: &mut rng::Rng, count: usize, lo: i64, hi: i64) -> Vec<f64> {
    (0..count).map(|_| r.gen_range(lo..=hi) as f64).collect()
}

fn check_range(lo: i64, hi: i64) -> Result<()> {
    if lo >= hi {
        return Err(Error::InvalidArgument(format!("weight range [{lo}, {hi}] is empty or a point")));
    }
    Ok(())
}

/// Chain QUBO with node and edge weights drawn uniformly from the integers
/// in `[weight_lo, weight_hi]`.
pub fn generate_linear_qubo(n: usize, weight_lo: i64, weight_hi: i64, seed: u64) -> Result<Problem> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("linear QUBO needs n >= 2, got {n}")));
    }
    check_range(weight_lo, weight_hi)?;
    let mut r = rng::from_seed(seed);
    let node_weights = uniform_weights(&mut r, n, weight_lo, weight_hi);
    let edge_weights = uniform_weights(&mut r, n - 1, weight_lo, weight_hi);
    let edges = edge_weights
        .into_iter()
        .enumerate()
        .map(|(a, w)| Edge::new(a, a + 1, w))
        .collect();
    Problem::new(ProblemKind::LinearQubo, n, node_weights, edges, None)
}

/// `m_edges` distinct pairs drawn uniformly without replacement, sorted.
fn random_edge_set(r: &mut rng::Rng, n: usize, m_edges: usize) -> Result<Vec<(usize, usize)>> {
    let max = n * n.saturating_sub(1) / 2;
    if m_edges > max {
        return Err(Error::InvalidSize(format!(
            "{m_edges} edges requested but a simple graph on {n} nodes has at most {max}"
        )));
    }
    let mut pairs: Vec<(usize, usize)> = sample(r, max, m_edges)
        .into_iter()
        .map(|k| pair_from_rank(k, n))
        .collect();
    pairs.sort_unstable();
    Ok(pairs)
}

// Rank k of the pair (i, j), i < j, in row-major order of the upper triangle.
fn pair_from_rank(mut k: usize, n: usize) -> (usize, usize) {
    for i in 0..n {
        let row = n - 1 - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
    }
    unreachable!("rank out of range")
}

/// Random simple graph as a Max-Cut instance. `weighted = Some((lo, hi))`
/// draws integer edge weights from that range, otherwise all weights are 1.
pub fn generate_random_graph(
    n: usize,
    m_edges: usize,
    weighted: Option<(i64, i64)>,
    seed: u64,
) -> Result<Problem> {
    let mut r = rng::from_seed(seed);
    let edges = weighted_edges(&mut r, n, m_edges, weighted)?;
    Problem::new(ProblemKind::MaxCut, n, Vec::new(), edges, None)
}

fn weighted_edges(
    r: &mut rng::Rng,
    n: usize,
    m_edges: usize,
    weighted: Option<(i64, i64)>,
) -> Result<Vec<Edge>> {
    if let Some((lo, hi)) = weighted {
        check_range(lo, hi)?;
    }
    let pairs = random_edge_set(r, n, m_edges)?;
    Ok(pairs
        .into_iter()
        .map(|(i, j)| {
            let w = match weighted {
                Some((lo, hi)) => r.gen_range(lo..=hi) as f64,
                None => 1.0,
            };
            Edge::new(i, j, w)
        })
        .collect())
}

/// QUBO on a random simple graph, node and edge weights uniform in `[lo, hi]`.
pub fn generate_graph_qubo(n: usize, m_edges: usize, lo: i64, hi: i64, seed: u64) -> Result<Problem> {
    check_range(lo, hi)?;
    let mut r = rng::from_seed(seed);
    let node_weights = uniform_weights(&mut r, n, lo, hi);
    let edges = weighted_edges(&mut r, n, m_edges, Some((lo, hi)))?;
    Problem::new(ProblemKind::GraphQubo, n, node_weights, edges, None)
}

pub fn generate_coloring(
    n: usize,
    m_edges: usize,
    k_colors: u32,
    weighted: Option<(i64, i64)>,
    seed: u64,
) -> Result<Problem> {
    let mut r = rng::from_seed(seed);
    let edges = weighted_edges(&mut r, n, m_edges, weighted)?;
    Problem::new(ProblemKind::Coloring, n, Vec::new(), edges, Some(k_colors))
}

pub fn generate_subset_sum(n: usize, lo: i64, hi: i64, seed: u64) -> Result<Problem> {
    check_range(lo, hi)?;
    let mut r = rng::from_seed(seed);
    let node_weights = uniform_weights(&mut r, n, lo, hi);
    Problem::new(ProblemKind::SubsetSum, n, node_weights, Vec::new(), None)
}
