//! Gate-level cost oracles.
//!
//! Qubit 0 is the most significant bit of the basis index, matching the
//! assignment convention. `P(theta)` puts `exp(i theta)` on the `|1>`
//! component, `CP(theta)` on `|11>`, and the two-qubit `XXPhase(theta)`
//! gadget on `|01>` and `|10>`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::engine::phase;
use crate::error::{Error, Result};
use crate::problems::{Problem, ProblemKind};

/// Largest register [`extract_diagonal`] will expand.
pub const DIAGONAL_CAP_QUBITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    H { q: usize },
    X { q: usize },
    P { q: usize, theta: f64 },
    Cp { control: usize, target: usize, theta: f64 },
    /// `X_a CP X_a` followed by `X_b CP X_b`.
    XxPhase { a: usize, b: usize, theta: f64 },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H { q } | Gate::X { q } | Gate::P { q, .. } => vec![q],
            Gate::Cp { control, target, .. } => vec![control, target],
            Gate::XxPhase { a, b, .. } => vec![a, b],
        }
    }

    /// Primitive gates this gate expands to.
    pub fn primitives(&self) -> Vec<Gate> {
        match *self {
            Gate::XxPhase { a, b, theta } => vec![
                Gate::X { q: a },
                Gate::Cp { control: a, target: b, theta },
                Gate::X { q: a },
                Gate::X { q: b },
                Gate::Cp { control: a, target: b, theta },
                Gate::X { q: b },
            ],
            g => vec![g],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CircuitMeta {
    /// FNV-1a hash of the source problem's JSON, hex encoded.
    pub source_hash: Option<String>,
    /// The scale baked into the angles, when known.
    pub p_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitIR {
    pub n_qubits: usize,
    gates: Vec<Gate>,
    pub meta: CircuitMeta,
}

impl CircuitIR {
    pub fn new(n_qubits: usize) -> Self {
        CircuitIR { n_qubits, gates: Vec::new(), meta: CircuitMeta::default() }
    }

    /// Appends `gate` after checking its operands.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::InvalidArgument(format!("qubit {q} outside register of {}", self.n_qubits)));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidArgument(format!("two-qubit gate on a single qubit {}", qs[0])));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of layers when gates on disjoint qubits run in parallel.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let qs = g.qubits();
            let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            qs.iter().for_each(|&q| level[q] = l);
            depth = depth.max(l);
        }
        depth
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CircuitIR = serde_json::from_str(text)?;
        let mut c = CircuitIR { n_qubits: raw.n_qubits, gates: Vec::new(), meta: raw.meta };
        for g in raw.gates {
            c.push(g)?;
        }
        Ok(c)
    }
}

fn tagged(problem: &Problem, p_s: f64) -> Result<CircuitIR> {
    let mut c = CircuitIR::new(problem.n());
    let hash = crate::rng::fnv1a(&serde_json::to_string(problem)?);
    c.meta = CircuitMeta { source_hash: Some(format!("{hash:016x}")), p_s: Some(p_s) };
    Ok(c)
}

/// One `P(W_i p_s)` per node and one `CP(w_ij p_s)` per edge.
pub fn build_qubo_oracle(problem: &Problem, p_s: f64) -> Result<CircuitIR> {
    if !problem.kind().is_qubo() {
        return Err(Error::Kind { expected: "linear_qubo or graph_qubo", found: problem.kind().to_string() });
    }
    let mut c = tagged(problem, p_s)?;
    for (q, &w) in problem.node_weights().iter().enumerate() {
        c.push(Gate::P { q, theta: w * p_s })?;
    }
    for e in problem.edges() {
        c.push(Gate::Cp { control: e.i, target: e.j, theta: e.w * p_s })?;
    }
    Ok(c)
}

/// One `XXPhase(w_ij p_s)` gadget per edge.
pub fn build_maxcut_oracle(problem: &Problem, p_s: f64) -> Result<CircuitIR> {
    if problem.kind() != ProblemKind::MaxCut {
        return Err(Error::Kind { expected: "maxcut", found: problem.kind().to_string() });
    }
    let mut c = tagged(problem, p_s)?;
    for e in problem.edges() {
        c.push(Gate::XxPhase { a: e.i, b: e.j, theta: e.w * p_s })?;
    }
    Ok(c)
}

/// One `P(W_i p_s)` per item, all in a single layer.
pub fn build_subset_sum_oracle(problem: &Problem, p_s: f64) -> Result<CircuitIR> {
    if problem.kind() != ProblemKind::SubsetSum {
        return Err(Error::Kind { expected: "subset_sum", found: problem.kind().to_string() });
    }
    let mut c = tagged(problem, p_s)?;
    for (q, &w) in problem.node_weights().iter().enumerate() {
        c.push(Gate::P { q, theta: w * p_s })?;
    }
    Ok(c)
}

/// Builder for any kind with a qubit realisation.
pub fn build_oracle(problem: &Problem, p_s: f64) -> Result<CircuitIR> {
    match problem.kind() {
        ProblemKind::LinearQubo | ProblemKind::GraphQubo => build_qubo_oracle(problem, p_s),
        ProblemKind::MaxCut => build_maxcut_oracle(problem, p_s),
        ProblemKind::SubsetSum => build_subset_sum_oracle(problem, p_s),
        ProblemKind::Coloring => Err(Error::Unsupported(
            "coloring needs qudits; simulate it with the engine's k-ary state vector instead".into(),
        )),
    }
}

/// Per-basis-state phase factors of a diagonal circuit, normalised so that
/// index 0 carries phase 1.
pub fn extract_diagonal(circuit: &CircuitIR) -> Result<Vec<Complex64>> {
    let n = circuit.n_qubits;
    if n > DIAGONAL_CAP_QUBITS {
        return Err(Error::Capacity { required: 1u128 << n, cap: 1 << DIAGONAL_CAP_QUBITS });
    }
    if let Some(g) = circuit.gates.iter().find(|g| matches!(g, Gate::H { .. })) {
        return Err(Error::NotDiagonal(format!("{g:?}")));
    }
    let bit = |q: usize| 1usize << (n - 1 - q);
    let prims: Vec<Gate> = circuit.gates.iter().flat_map(Gate::primitives).collect();
    let mut angles = Vec::with_capacity(1 << n);
    for input in 0..(1usize << n) {
        let mut state = input;
        let mut angle = 0.0;
        for g in &prims {
            match *g {
                Gate::X { q } => state ^= bit(q),
                Gate::P { q, theta } if state & bit(q) != 0 => angle += theta,
                Gate::Cp { control, target, theta } if state & bit(control) != 0 && state & bit(target) != 0 => {
                    angle += theta
                }
                _ => {}
            }
        }
        if state != input {
            return Err(Error::NotDiagonal(format!("basis state {input} is mapped to {state}")));
        }
        angles.push(angle);
    }
    let base = angles[0];
    Ok(angles.into_iter().map(|a| phase(a - base)).collect())
}

/// OpenQASM 2.0 text with gadgets expanded into `x` and `cu1`.
pub fn export_text(circuit: &CircuitIR) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", circuit.n_qubits).expect("string write");
    for g in circuit.gates.iter().flat_map(Gate::primitives) {
        let line = match g {
            Gate::H { q } => format!("h q[{q}];"),
            Gate::X { q } => format!("x q[{q}];"),
            Gate::P { q, theta } => format!("u1({theta:?}) q[{q}];"),
            Gate::Cp { control, target, theta } => format!("cu1({theta:?}) q[{control}],q[{target}];"),
            Gate::XxPhase { .. } => unreachable!("expanded above"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn parse_angle(expr: &str) -> Option<f64> {
    let expr = expr.trim();
    if let Some(rest) = expr.strip_prefix('-') {
        return parse_angle(rest).map(|v| -v);
    }
    let atom = |s: &str| -> Option<f64> {
        let s = s.trim();
        if s == "pi" {
            Some(PI)
        } else {
            s.parse().ok()
        }
    };
    if let Some((a, b)) = expr.split_once('*') {
        return Some(atom(a)? * atom(b)?);
    }
    if let Some((a, b)) = expr.split_once('/') {
        return Some(atom(a)? / atom(b)?);
    }
    atom(expr)
}

fn parse_qubit(s: &str, line: usize) -> Result<usize> {
    let bad = || Error::Parse { line, msg: format!("bad operand `{s}`") };
    let inner = s.trim().strip_prefix("q[").and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
    inner.parse().map_err(|_| bad())
}

/// Reads the subset of OpenQASM 2.0 that [`export_text`] writes: one `q`
/// register and the gates `h`, `x`, `u1`/`p` and `cu1`/`cp`.
pub fn parse_text(text: &str) -> Result<CircuitIR> {
    let mut circuit: Option<CircuitIR> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stmt = raw.split("//").next().unwrap_or("").trim();
        if stmt.is_empty() || stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
            continue;
        }
        let stmt = stmt
            .strip_suffix(';')
            .ok_or_else(|| Error::Parse { line, msg: "missing `;`".into() })?
            .trim();
        if let Some(rest) = stmt.strip_prefix("qreg") {
            let n = rest
                .trim()
                .strip_prefix("q[")
                .and_then(|r| r.strip_suffix(']'))
                .and_then(|r| r.parse().ok())
                .ok_or_else(|| Error::Parse { line, msg: format!("bad register `{rest}`") })?;
            circuit = Some(CircuitIR::new(n));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| Error::Parse { line, msg: "gate before qreg".into() })?;
        let (head, args) = stmt
            .split_once(|ch: char| ch.is_whitespace())
            .map(|(h, a)| (h.trim(), a.trim()))
            .ok_or_else(|| Error::Parse { line, msg: format!("cannot read `{stmt}`") })?;
        let (name, theta) = match head.split_once('(') {
            Some((name, rest)) => {
                let expr = rest.strip_suffix(')').ok_or_else(|| Error::Parse { line, msg: "unclosed `(`".into() })?;
                let t = parse_angle(expr).ok_or_else(|| Error::Parse { line, msg: format!("bad angle `{expr}`") })?;
                (name, Some(t))
            }
            None => (head, None),
        };
        let qs: Vec<usize> = args.split(',').map(|a| parse_qubit(a, line)).collect::<Result<_>>()?;
        let gate = match (name, theta, qs.as_slice()) {
            ("h", None, &[q]) => Gate::H { q },
            ("x", None, &[q]) => Gate::X { q },
            ("u1" | "p", Some(theta), &[q]) => Gate::P { q, theta },
            ("cu1" | "cp", Some(theta), &[control, target]) => Gate::Cp { control, target, theta },
            _ => return Err(Error::Parse { line, msg: format!("unsupported statement `{stmt}`") }),
        };
        c.push(gate).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
    }
    circuit.ok_or(Error::Parse { line: 0, msg: "no qreg declaration".into() })
}

/// Dense 4x4 matrix of a two-qubit gate sequence on qubits (0, 1).
pub fn two_qubit_unitary(gates: &[Gate]) -> [[Complex64; 4]; 4] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut u = [[zero; 4]; 4];
    (0..4).for_each(|i| u[i][i] = one);
    for g in gates.iter().flat_map(Gate::primitives) {
        let mut m = [[zero; 4]; 4];
        for s in 0..4usize {
            let bit = |q: usize| (s >> (1 - q)) & 1;
            match g {
                Gate::X { q } => m[s ^ (1 << (1 - q))][s] = one,
                Gate::P { q, theta } => m[s][s] = if bit(q) == 1 { phase(theta) } else { one },
                Gate::Cp { control, target, theta } => {
                    m[s][s] = if bit(control) == 1 && bit(target) == 1 { phase(theta) } else { one }
                }
                Gate::H { q } => {
                    let h = std::f64::consts::FRAC_1_SQRT_2;
                    let flipped = s ^ (1 << (1 - q));
                    m[s][s] += Complex64::new(if bit(q) == 1 { -h } else { h }, 0.0);
                    m[flipped][s] += Complex64::new(h, 0.0);
                }
                Gate::XxPhase { .. } => unreachable!("expanded above"),
            }
        }
        let mut next = [[zero; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                next[i][j] = (0..4).map(|l| m[i][l] * u[l][j]).sum();
            }
        }
        u = next;
    }
    u
}
