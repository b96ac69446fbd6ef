#![allow(clippy::needless_range_loop)]

//! Amplification runs against the closed-form Grover probability and
//! against each other.

use std::f64::consts::PI;

use varamp::engine::{grover_iterations, measure, run_amplification, ClassAmplifier, StateVector};
use varamp::problems::generate_linear_qubo;
use varamp::spectrum::{enumerate, exact_ps, SolutionSpace};

fn indicator(d: usize, marked: &[usize]) -> SolutionSpace {
    let mut c = vec![0.0; d];
    marked.iter().for_each(|&i| c[i] = 1.0);
    SolutionSpace::from_costs(c).unwrap()
}

fn analytic(d: usize, m: usize, k: usize) -> f64 {
    let theta = (m as f64 / d as f64).sqrt().asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

#[test]
fn indicator_runs_follow_the_closed_form() {
    for (d, marked) in [(1024usize, vec![371usize]), (4096, vec![5, 4000])] {
        let space = indicator(d, &marked);
        let kg = grover_iterations(d, marked.len()).unwrap();
        for k in [0, 1, 2, kg / 3, kg, kg + 7] {
            let res = run_amplification(&space, PI, k, &[]).unwrap();
            let p: f64 = marked.iter().map(|&i| res.probabilities[i]).sum();
            assert!((p - analytic(d, marked.len(), k)).abs() < 1e-9, "d={d} k={k}");
        }
    }
}

#[test]
fn iteration_counts() {
    assert_eq!(grover_iterations(4, 1).unwrap(), 2);
    assert_eq!(grover_iterations(16, 16).unwrap(), 1);
    assert_eq!(grover_iterations(1 << 16, 1).unwrap(), 201);
    assert!(grover_iterations(16, 0).is_err());
    assert!(grover_iterations(16, 17).is_err());
}

#[test]
fn class_engine_agrees_with_statevector() {
    let p = generate_linear_qubo(12, -100, 100, 21).unwrap();
    let space = enumerate(&p).unwrap();
    let ps = exact_ps(&space).unwrap() * 1.07;
    let k = grover_iterations(space.d(), 1).unwrap();
    let mut s = StateVector::uniform(space.d()).unwrap();
    for _ in 0..k {
        s.apply_cost_oracle(&space, ps).unwrap();
        s.apply_diffusion();
    }
    let amp = ClassAmplifier::new(&space);
    let class_probs = amp.run(ps, k);
    let classes = space.classes();
    for c in 0..classes.len() {
        let summed: f64 = classes.members(c).iter().map(|&i| s.amplitudes()[i as usize].norm_sqr()).sum();
        assert!((summed - class_probs[c]).abs() < 1e-12, "class {c}");
    }
}

#[test]
fn tracked_history_reproduces_stepwise_runs() {
    let p = generate_linear_qubo(8, -100, 100, 2).unwrap();
    let space = enumerate(&p).unwrap();
    let ps = exact_ps(&space).unwrap();
    let target = space.argmin()[0];
    let res = run_amplification(&space, ps, 12, &[target]).unwrap();
    for k in 0..=12 {
        let once = run_amplification(&space, ps, k, &[]).unwrap();
        assert!((res.history.as_ref().unwrap()[k][0] - once.probabilities[target]).abs() < 1e-12);
    }
    let csv = res.history_csv().unwrap();
    assert_eq!(csv.lines().count(), 14);
}

#[test]
fn fresh_state_measures_uniformly() {
    let probs = StateVector::uniform(16).unwrap().probabilities();
    let shots = 100_000;
    let draws = measure(&probs, shots, 99).unwrap();
    let mut counts = [0usize; 16];
    draws.iter().for_each(|&i| counts[i] += 1);
    let expected = shots as f64 / 16.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // Upper 0.001 point of chi-square with 15 degrees of freedom.
    assert!(chi2 < 37.697, "chi2 {chi2}");
    assert_eq!(draws, measure(&probs, shots, 99).unwrap());
}

#[test]
fn marked_state_dominates_measurements_at_the_optimal_count() {
    let space = indicator(1024, &[17]);
    let res = run_amplification(&space, PI, grover_iterations(1024, 1).unwrap(), &[]).unwrap();
    let shots = res.measure(1000, 3).unwrap();
    assert!(shots.iter().filter(|&&i| i == 17).count() >= 990);
}

#[test]
fn bad_inputs_are_rejected() {
    let space = indicator(8, &[1]);
    assert!(measure(&[0.5, 0.5], 0, 1).is_err());
    let mut s = StateVector::uniform(4).unwrap();
    assert_eq!(s.apply_cost_oracle(&space, 1.0).unwrap_err().code(), "dimension");
}
