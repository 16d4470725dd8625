//! Brute-force numerical oracles.
//!
//! These evaluate quantities straight from their defining integrals or
//! derivatives, without the Fourier-coefficient shortcuts used elsewhere.
//! They exist to cross-check the closed forms.

use std::f64::consts::TAU;
use std::thread;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CMatrix;

/// `⟨𝛗|M|𝛗⟩` for a matrix in basis coordinates.
pub fn phase_state_expectation(m: &CMatrix, phases: &[f64]) -> f64 {
    let v: Vec<Complex64> = phases
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (j, vj) in v.iter().enumerate() {
        let row: Complex64 = v.iter().enumerate().map(|(k, vk)| m[(j, k)] * vk).sum();
        total += vj.conj() * row;
    }
    total.re
}

/// Monte-Carlo average of `f` over the `dim`-torus under `d𝛗 / (2 pi)^dim`.
///
/// Samples are split across `workers` threads; worker `w` draws from
/// stream `w` of a ChaCha8 generator seeded with `seed`, and the partial
/// sums are combined in worker order, so the result depends only on
/// `(samples, seed, workers)`.
pub fn torus_average<F>(dim: usize, samples: usize, seed: u64, workers: usize, f: F) -> Complex64
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let workers = workers.clamp(1, samples.max(1));
    let chunk = samples.div_ceil(workers);
    let partials: Vec<Complex64> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                let count = chunk.min(samples.saturating_sub(w * chunk));
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(w as u64);
                    let mut phases = vec![0.0; dim];
                    let mut sum = Complex64::new(0.0, 0.0);
                    for _ in 0..count {
                        for p in phases.iter_mut() {
                            *p = rng.random::<f64>() * TAU;
                        }
                        sum += f(&phases);
                    }
                    sum
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    partials.into_iter().sum::<Complex64>() / samples as f64
}

/// `∫_0^{2 pi} f(phi) dphi` by the `points`-node rectangle rule.
///
/// Exact for trigonometric polynomials of degree below `points`.
pub fn periodic_grid_integral<F: Fn(f64) -> f64>(points: usize, f: F) -> f64 {
    let h = TAU / points as f64;
    (0..points).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

/// `(f(h) - f(-h)) / 2h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, h: f64) -> f64 {
    (f(h) - f(-h)) / (2.0 * h)
}
