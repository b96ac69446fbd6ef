//! Gate-level oracles against the engine's phase table.

use num_complex::Complex64;
use varamp::circuits::{
    build_maxcut_oracle, build_oracle, build_qubo_oracle, extract_diagonal, export_text, parse_text, CircuitIR, Gate,
    DIAGONAL_CAP_QUBITS,
};
use varamp::engine::{phase, StateVector};
use varamp::problems::{generate_coloring, generate_linear_qubo, generate_random_graph, Problem};
use varamp::spectrum::enumerate;

/// Largest deviation between a circuit diagonal and `exp(i ps C)`, after
/// removing the global phase at index 0.
fn deviation(diag: &[Complex64], costs: &[f64], ps: f64) -> f64 {
    let g = phase(ps * costs[0]) / diag[0];
    diag.iter().zip(costs).map(|(d, &c)| (d * g - phase(ps * c)).norm()).fold(0.0, f64::max)
}

#[test]
fn ten_node_maxcut_matches_on_all_indices() {
    let p = generate_random_graph(10, 15, None, 2024).unwrap();
    assert_eq!(p.edges().len(), 15);
    let ps = 2.0 * std::f64::consts::PI / 15.0;
    let circuit = build_maxcut_oracle(&p, ps).unwrap();
    assert_eq!(circuit.gates().len(), 15);
    let diag = extract_diagonal(&circuit).unwrap();
    assert_eq!(diag.len(), 1024);
    let space = enumerate(&p).unwrap();
    assert!(deviation(&diag, space.costs(), ps) < 1e-12);
}

#[test]
fn diagonal_drives_the_same_evolution_as_the_cost_table() {
    let p = generate_linear_qubo(8, -100, 100, 1).unwrap();
    let space = enumerate(&p).unwrap();
    let ps = 0.0123;
    let diag = extract_diagonal(&build_qubo_oracle(&p, ps).unwrap()).unwrap();
    let mut a = StateVector::uniform(256).unwrap();
    let mut b = a.clone();
    for _ in 0..10 {
        a.apply_diagonal(&diag).unwrap();
        a.apply_diffusion();
        b.apply_cost_oracle(&space, ps).unwrap();
        b.apply_diffusion();
    }
    let pa = a.probabilities();
    let pb = b.probabilities();
    assert!(pa.iter().zip(&pb).all(|(x, y)| (x - y).abs() < 1e-12));
}

#[test]
fn text_export_round_trips() {
    for p in [
        Problem::chain4_example(),
        generate_linear_qubo(6, -50, 50, 3).unwrap(),
        generate_random_graph(6, 9, Some((-5, 5)), 4).unwrap(),
    ] {
        let ps = 0.37;
        let circuit = build_oracle(&p, ps).unwrap();
        let text = export_text(&circuit);
        assert!(text.starts_with("OPENQASM 2.0;"));
        let back = parse_text(&text).unwrap();
        let d1 = extract_diagonal(&circuit).unwrap();
        let d2 = extract_diagonal(&back).unwrap();
        assert!(d1.iter().zip(&d2).all(|(a, b)| (a - b).norm() < 1e-12));
        let json = CircuitIR::from_json(&circuit.to_json().unwrap()).unwrap();
        assert_eq!(json, circuit);
    }
}

#[test]
fn qubo_gate_count_is_nodes_plus_edges() {
    let p = generate_linear_qubo(9, -100, 100, 8).unwrap();
    let c = build_qubo_oracle(&p, 0.01).unwrap();
    assert_eq!(c.gates().len(), 9 + 8);
    assert!(c.gates().iter().all(|g| matches!(g, Gate::P { .. } | Gate::Cp { .. })));
}

#[test]
fn unsupported_inputs() {
    let coloring = generate_coloring(4, 4, 3, None, 1).unwrap();
    assert_eq!(build_oracle(&coloring, 0.1).unwrap_err().code(), "unsupported");
    let cut = generate_random_graph(4, 3, None, 1).unwrap();
    assert_eq!(build_qubo_oracle(&cut, 0.1).unwrap_err().code(), "kind");

    let mut with_h = CircuitIR::new(2);
    with_h.push(Gate::H { q: 0 }).unwrap();
    assert_eq!(extract_diagonal(&with_h).unwrap_err().code(), "not_diagonal");
    let mut flip = CircuitIR::new(2);
    flip.push(Gate::X { q: 1 }).unwrap();
    assert_eq!(extract_diagonal(&flip).unwrap_err().code(), "not_diagonal");
    let wide = CircuitIR::new(DIAGONAL_CAP_QUBITS + 1);
    assert_eq!(extract_diagonal(&wide).unwrap_err().code(), "capacity");
    assert!(CircuitIR::new(2).push(Gate::Cp { control: 1, target: 1, theta: 0.1 }).is_err());
    assert!(CircuitIR::new(2).push(Gate::P { q: 2, theta: 0.1 }).is_err());
}
