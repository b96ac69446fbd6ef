//! Amplification over distinct cost values.
//!
//! The start state is uniform, the oracle phase depends only on the cost and
//! the diffusion is symmetric under any permutation of basis states, so all
//! states sharing a cost carry the same amplitude at every step. Tracking one
//! amplitude per distinct cost, weighted by its multiplicity, reproduces the
//! full statevector dynamics exactly at a fraction of the cost.

use num_complex::Complex64;

use super::state::phase;
use crate::spectrum::SolutionSpace;

const LANES: usize = 4;

/// Per-class outcome of a run that also records, for every class, the best
/// probability seen over the iterations `k_min..=k_max`.
#[derive(Clone, Debug)]
pub struct BestOverIterations {
    pub final_probs: Vec<f64>,
    pub best_probs: Vec<f64>,
    pub best_k: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct ClassAmplifier {
    values: Vec<f64>,
    counts: Vec<f64>,
    d: f64,
}

/// Split real/imaginary amplitudes, padded to a multiple of `LANES` with
/// zero-count entries.
struct Work {
    re: Vec<f64>,
    im: Vec<f64>,
    fr: Vec<f64>,
    fi: Vec<f64>,
    n: Vec<f64>,
    len: usize,
}

impl ClassAmplifier {
    pub fn new(space: &SolutionSpace) -> Self {
        let classes = space.classes();
        ClassAmplifier {
            values: classes.values().to_vec(),
            counts: classes.counts(),
            d: space.d() as f64,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    fn work(&self, p_s: f64) -> Work {
        let len = self.values.len();
        let padded = len.div_ceil(LANES) * LANES;
        let mut w = Work {
            re: vec![1.0 / self.d.sqrt(); padded],
            im: vec![0.0; padded],
            fr: vec![1.0; padded],
            fi: vec![0.0; padded],
            n: vec![0.0; padded],
            len,
        };
        for (j, &c) in self.values.iter().enumerate() {
            let f = phase(p_s * c);
            w.fr[j] = f.re;
            w.fi[j] = f.im;
            w.n[j] = self.counts[j];
        }
        w
    }

    /// One oracle application and reflection about the mean.
    #[inline]
    fn step(&self, w: &mut Work) {
        let mut sr = [0.0; LANES];
        let mut si = [0.0; LANES];
        let chunks = w
            .re
            .chunks_exact_mut(LANES)
            .zip(w.im.chunks_exact_mut(LANES))
            .zip(w.fr.chunks_exact(LANES).zip(w.fi.chunks_exact(LANES)))
            .zip(w.n.chunks_exact(LANES));
        for (((re, im), (fr, fi)), n) in chunks {
            for l in 0..LANES {
                let r = re[l] * fr[l] - im[l] * fi[l];
                let i = re[l] * fi[l] + im[l] * fr[l];
                re[l] = r;
                im[l] = i;
                sr[l] += n[l] * r;
                si[l] += n[l] * i;
            }
        }
        let tr = 2.0 * ((sr[0] + sr[1]) + (sr[2] + sr[3])) / self.d;
        let ti = 2.0 * ((si[0] + si[1]) + (si[2] + si[3])) / self.d;
        for (r, i) in w.re.iter_mut().zip(w.im.iter_mut()) {
            *r = tr - *r;
            *i = ti - *i;
        }
    }

    fn class_probs(&self, w: &Work) -> Vec<f64> {
        (0..w.len).map(|j| w.n[j] * (w.re[j] * w.re[j] + w.im[j] * w.im[j])).collect()
    }

    /// Per-member amplitudes after `k` iterations.
    pub fn amplitudes(&self, p_s: f64, k: usize) -> Vec<Complex64> {
        let mut w = self.work(p_s);
        for _ in 0..k {
            self.step(&mut w);
        }
        (0..w.len).map(|j| Complex64::new(w.re[j], w.im[j])).collect()
    }

    /// Total probability of each class after `k` iterations.
    pub fn run(&self, p_s: f64, k: usize) -> Vec<f64> {
        let mut w = self.work(p_s);
        for _ in 0..k {
            self.step(&mut w);
        }
        self.class_probs(&w)
    }

    /// Runs `k_max` iterations and keeps, per class, the largest probability
    /// over iterations `k_min..=k_max` together with the iteration it occurred.
    pub fn run_best(&self, p_s: f64, k_min: usize, k_max: usize) -> BestOverIterations {
        let mut w = self.work(p_s);
        let c = self.values.len();
        let mut best_probs = vec![f64::NEG_INFINITY; c];
        let mut best_k = vec![0u32; c];
        for t in 0..=k_max {
            if t > 0 {
                self.step(&mut w);
            }
            if t >= k_min {
                for (j, p) in self.class_probs(&w).into_iter().enumerate() {
                    if p > best_probs[j] {
                        best_probs[j] = p;
                        best_k[j] = t as u32;
                    }
                }
            }
        }
        BestOverIterations { final_probs: self.class_probs(&w), best_probs, best_k }
    }

    /// Probability of the chosen classes after each iteration `0..=k`.
    pub fn trace(&self, p_s: f64, k: usize, classes: &[usize]) -> Vec<Vec<f64>> {
        let mut w = self.work(p_s);
        let mut out = Vec::with_capacity(k + 1);
        for t in 0..=k {
            if t > 0 {
                self.step(&mut w);
            }
            out.push(
                classes
                    .iter()
                    .map(|&j| w.n[j] * (w.re[j] * w.re[j] + w.im[j] * w.im[j]))
                    .collect(),
            );
        }
        out
    }
}
