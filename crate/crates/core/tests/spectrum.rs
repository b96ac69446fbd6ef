//! Spectrum statistics, histograms and gaussian fits.

use std::f64::consts::{PI, TAU};

use varamp::problems::generate_linear_qubo;
use varamp::spectrum::{
    enumerate, exact_ps, explained_mass, fit_gaussian, histogram, stats, Binning, SolutionSpace, SpaceMeta,
};

/// Integer costs whose unit histogram follows `exp(-c^2 / 2 sigma^2)`,
/// allocated to exactly `d` entries by largest remainder.
fn exact_gaussian(d: usize, mu: i64, sigma: f64) -> Vec<f64> {
    let span = (8.0 * sigma) as i64;
    let xs: Vec<i64> = (-span..=span).collect();
    let w: Vec<f64> = xs.iter().map(|&x| (-(x as f64).powi(2) / (2.0 * sigma * sigma)).exp()).collect();
    let total: f64 = w.iter().sum();
    let raw: Vec<f64> = w.iter().map(|v| v / total * d as f64).collect();
    let mut counts: Vec<usize> = raw.iter().map(|v| v.floor() as usize).collect();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| (raw[b] - raw[b].floor()).total_cmp(&(raw[a] - raw[a].floor())));
    let missing = d - counts.iter().sum::<usize>();
    order.iter().take(missing).for_each(|&i| counts[i] += 1);
    xs.iter().zip(&counts).flat_map(|(&x, &n)| std::iter::repeat_n((mu + x) as f64, n)).collect()
}

#[test]
fn fit_recovers_synthetic_gaussian() {
    let costs = exact_gaussian(1 << 16, 0, 50.0);
    assert_eq!(costs.len(), 1 << 16);
    let space = SolutionSpace::from_costs(costs).unwrap();
    let fit = fit_gaussian(&histogram(&space, Binning::Unit).unwrap()).unwrap();
    assert!(fit.mu.abs() <= 1.0, "mu {}", fit.mu);
    assert!((fit.sigma / 50.0 - 1.0).abs() <= 0.02, "sigma {}", fit.sigma);
}

#[test]
fn twenty_node_bulk_is_gaussian() {
    let space = enumerate(&generate_linear_qubo(20, -100, 100, 3).unwrap()).unwrap();
    let hist = histogram(&space, Binning::Unit).unwrap();
    let fit = fit_gaussian(&hist).unwrap();
    let mass = explained_mass(&hist, &fit, 4.0);
    assert!(mass >= 0.95, "explained mass {mass}");
}

#[test]
fn fitted_curve_carries_the_whole_space() {
    let space = enumerate(&generate_linear_qubo(18, -100, 100, 8).unwrap()).unwrap();
    let hist = histogram(&space, Binning::Unit).unwrap();
    let fit = fit_gaussian(&hist).unwrap();
    // Unit bins: the curve's mass is its sum over integer centres, extended
    // well beyond the occupied range.
    let lo = (fit.mu - 12.0 * fit.sigma).floor() as i64;
    let hi = (fit.mu + 12.0 * fit.sigma).ceil() as i64;
    let mass: f64 = (lo..=hi).map(|c| fit.eval(c as f64)).sum();
    let d = space.d() as f64;
    assert!((mass / d - 1.0).abs() < 0.01, "curve mass {mass} vs {d}");
}

#[test]
fn statistics_are_population_moments() {
    let space = SolutionSpace::from_costs(vec![1.0, 3.0, 3.0, 9.0]).unwrap();
    let st = stats(&space, 0.5);
    assert_eq!(st.mu, 4.0);
    assert!((st.sigma - 3.0).abs() < 1e-12);
    assert!((st.sigma_scaled - 1.5).abs() < 1e-12);
    assert_eq!(st.x_delta, 8.0 - 10.0);
    assert!((exact_ps(&space).unwrap() - PI / 4.0).abs() < 1e-15);
}

#[test]
fn exact_scale_spans_a_full_turn() {
    for seed in 0..5 {
        let space = enumerate(&generate_linear_qubo(12, -100, 100, seed).unwrap()).unwrap();
        let ps = exact_ps(&space).unwrap();
        assert!((ps * (space.c_max() - space.c_min()) - TAU).abs() < 1e-12);
    }
    let flat = SolutionSpace::from_costs(vec![2.0; 8]).unwrap();
    assert_eq!(exact_ps(&flat).unwrap_err().code(), "degenerate_spectrum");
}

#[test]
fn binning_modes() {
    let space = SolutionSpace::from_costs(vec![0.0, 0.5, 1.0, 2.0]).unwrap();
    assert_eq!(histogram(&space, Binning::Unit).unwrap_err().code(), "histogram_mode");
    let h = histogram(&space, Binning::Count(4)).unwrap();
    assert_eq!(h.counts, vec![1, 1, 1, 1]);
    assert_eq!(h.total(), 4);
    assert!(histogram(&space, Binning::Count(0)).is_err());
}

#[test]
fn saved_space_reloads_bit_exact() {
    let p = generate_linear_qubo(10, -100, 100, 4).unwrap();
    let space = enumerate(&p).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("space.bin");
    let meta = SpaceMeta { n: Some(10), radix: Some(2), kind: Some(p.kind().to_string()), seed: Some(4), d: space.d() };
    space.save(&path, &meta).unwrap();
    let (back, meta_back) = SolutionSpace::load(&path).unwrap();
    assert_eq!(meta_back, meta);
    assert_eq!(back.costs(), space.costs());
    assert_eq!(back.argmin(), space.argmin());
}
