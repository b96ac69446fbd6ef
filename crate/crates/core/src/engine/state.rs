use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectrum::{SolutionSpace, DEFAULT_CAP};

/// `exp(i theta)` with theta reduced into `[0, 2 pi)` first.
pub fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta.rem_euclid(TAU))
}

/// Simulated register: one complex amplitude per basis state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Equal superposition over `d` basis states.
    pub fn uniform(d: usize) -> Result<Self> {
        Self::uniform_with_cap(d, DEFAULT_CAP)
    }

    pub fn uniform_with_cap(d: usize, cap: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSize("state needs at least one amplitude".into()));
        }
        if d > cap {
            return Err(Error::Capacity { required: d as u128, cap });
        }
        let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        Ok(StateVector { amps: vec![a; d] })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        StateVector { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        let p: Vec<f64> = self.amps.par_iter().map(|a| a.norm_sqr()).collect();
        crate::spectrum::pairwise_sum(&p)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.par_iter().map(|a| a.norm_sqr()).collect()
    }

    /// Multiplies amplitude `i` by `exp(i p_s costs[i])`.
    pub fn apply_cost_oracle(&mut self, space: &SolutionSpace, p_s: f64) -> Result<()> {
        self.check_len(space.d())?;
        self.amps
            .par_iter_mut()
            .zip(space.costs().par_iter())
            .for_each(|(a, &c)| *a *= phase(p_s * c));
        Ok(())
    }

    /// Multiplies by a precomputed diagonal.
    pub fn apply_diagonal(&mut self, diagonal: &[Complex64]) -> Result<()> {
        self.check_len(diagonal.len())?;
        self.amps.par_iter_mut().zip(diagonal.par_iter()).for_each(|(a, &f)| *a *= f);
        Ok(())
    }

    /// `2|s><s| - I`: reflects every amplitude about the mean amplitude.
    pub fn apply_diffusion(&mut self) {
        let mean = pairwise_sum_c(&self.amps) / self.amps.len() as f64;
        let twice = 2.0 * mean;
        self.amps.par_iter_mut().for_each(|a| *a = twice - *a);
    }

    /// Interleaved little-endian (re, im) pairs.
    pub fn to_raw_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.amps.len() * 16);
        for a in &self.amps {
            out.extend_from_slice(&a.re.to_le_bytes());
            out.extend_from_slice(&a.im.to_le_bytes());
        }
        out
    }

    fn check_len(&self, other: usize) -> Result<()> {
        if self.amps.len() != other {
            return Err(Error::Dimension { state: self.amps.len(), space: other });
        }
        Ok(())
    }
}

// Fixed summation tree, so the mean does not depend on thread count.
fn pairwise_sum_c(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 1024 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    let (x, y) = rayon::join(|| pairwise_sum_c(a), || pairwise_sum_c(b));
    x + y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_amplitudes() {
        let s = StateVector::uniform(4).unwrap();
        assert!(s.amplitudes().iter().all(|a| *a == Complex64::new(0.5, 0.0)));
        for n in [1u32, 4, 10, 16, 20] {
            let s = StateVector::uniform(1 << n).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
        assert!(matches!(StateVector::uniform_with_cap(10, 8), Err(Error::Capacity { .. })));
    }

    #[test]
    fn oracle_phase_on_1101() {
        let p = crate::problems::Problem::chain4_example();
        let space = crate::spectrum::enumerate(&p).unwrap();
        let mut s = StateVector::uniform(16).unwrap();
        s.apply_cost_oracle(&space, 1.0).unwrap();
        let expect = Complex64::from_polar(0.25, -24.0);
        assert!((s.amplitudes()[13] - expect).norm() < 1e-14);
    }

    #[test]
    fn zero_ps_is_identity_and_magnitudes_kept() {
        let space = SolutionSpace::from_costs(vec![1.0, -2.0, 3.5, 7.0]).unwrap();
        let amps: Vec<Complex64> = (0..4).map(|i| Complex64::new(0.1 * i as f64, 0.3)).collect();
        let mut s = StateVector::from_amplitudes(amps.clone());
        s.apply_cost_oracle(&space, 0.0).unwrap();
        assert_eq!(s.amplitudes(), &amps[..]);
        s.apply_cost_oracle(&space, 1.7).unwrap();
        for (a, b) in s.amplitudes().iter().zip(&amps) {
            assert!((a.norm() - b.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_length_mismatch() {
        let space = SolutionSpace::from_costs(vec![1.0, 2.0]).unwrap();
        let mut s = StateVector::uniform(4).unwrap();
        assert!(matches!(s.apply_cost_oracle(&space, 1.0), Err(Error::Dimension { state: 4, space: 2 })));
    }

    #[test]
    fn diffusion_fixes_uniform_and_is_involution() {
        let mut s = StateVector::uniform(8).unwrap();
        let u = s.clone();
        s.apply_diffusion();
        for (a, b) in s.amplitudes().iter().zip(u.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        let amps: Vec<Complex64> = (0..8).map(|i| phase(i as f64) * (1.0 / 8f64.sqrt())).collect();
        let mut t = StateVector::from_amplitudes(amps.clone());
        t.apply_diffusion();
        t.apply_diffusion();
        for (a, b) in t.amplitudes().iter().zip(&amps) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn two_qubit_grover_is_exact() {
        let space = SolutionSpace::from_costs(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let mut s = StateVector::uniform(4).unwrap();
        s.apply_cost_oracle(&space, std::f64::consts::PI).unwrap();
        s.apply_diffusion();
        assert!((s.probabilities()[0] - 1.0).abs() < 1e-12);
    }
}
