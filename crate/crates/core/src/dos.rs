//! Densities of states in the rescaled energy ε = H / s0².

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::PendulumConfig;
use crate::error::{ensure_positive, Error, Result};
use crate::exec::{derive_seed, Exec};

/// Samples per independently seeded Monte Carlo chunk.
pub const CHUNK: usize = 1 << 16;
/// Relative padding of the classical energy range.
pub const RANGE_PADDING: f64 = 0.05;
const SCAN_POINTS: usize = 4096;

/// Uniform bins on [lo, hi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBins {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl EnergyBins {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n == 0 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "bins",
                reason: format!("need n > 0 and finite lo < hi, got [{lo}, {hi}) x {n}"),
            });
        }
        Ok(Self { lo, hi, n })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.lo + i as f64 * self.width()).collect()
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.width()
    }

    /// Bin holding `x`, or `None` outside [lo, hi).
    pub fn index(&self, x: f64) -> Option<usize> {
        if x < self.lo || x >= self.hi || !x.is_finite() {
            return None;
        }
        Some((((x - self.lo) / self.width()) as usize).min(self.n - 1))
    }

    /// Bin holding `x`, with outside values assigned to the edge bins.
    pub fn clamped_index(&self, x: f64) -> usize {
        if x < self.lo {
            0
        } else {
            self.index(x).unwrap_or(self.n - 1)
        }
    }
}

/// Rescaled classical energy on the s2 = 0 great circle,
/// s1 = s0 cos θ, s3 = s0 sin θ.
pub fn rescaled_h_on_circle(c: &PendulumConfig, s0: f64, theta: f64) -> f64 {
    let (s, co) = theta.sin_cos();
    (c.delta_omega * co - 2.0 * c.omega_rot * s) / s0 + 0.5 * c.twist() * s * s
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    f(0.5 * (a + b)).min(f1).min(f2)
}

/// Minimum and maximum of ε over the sphere of radius `s0`.
pub fn classical_energy_range(c: &PendulumConfig, s0: f64) -> Result<(f64, f64)> {
    c.validate()?;
    ensure_positive("s0", s0)?;
    let step = 2.0 * std::f64::consts::PI / SCAN_POINTS as f64;
    let h = |t: f64| rescaled_h_on_circle(c, s0, t);
    let (mut imin, mut imax) = (0, 0);
    let vals: Vec<f64> = (0..SCAN_POINTS).map(|i| h(i as f64 * step)).collect();
    for (i, v) in vals.iter().enumerate() {
        if *v < vals[imin] {
            imin = i;
        }
        if *v > vals[imax] {
            imax = i;
        }
    }
    let lo = golden_min(h, (imin as f64 - 1.0) * step, (imin as f64 + 1.0) * step).min(vals[imin]);
    let hi = -golden_min(|t| -h(t), (imax as f64 - 1.0) * step, (imax as f64 + 1.0) * step);
    Ok((lo, hi.max(vals[imax])))
}

/// Bins shared by the quantum and classical densities: the classical
/// range padded by 5% of its width on both sides.
pub fn shared_bins(c: &PendulumConfig, s0: f64, n_bins: usize) -> Result<EnergyBins> {
    let (lo, hi) = classical_energy_range(c, s0)?;
    let pad = RANGE_PADDING * (hi - lo).max(f64::EPSILON * hi.abs().max(1.0));
    EnergyBins::new(lo - pad, hi + pad, n_bins)
}

/// Histogram of ε for points drawn uniformly (area measure) on the sphere.
/// Chunk `j` uses its own RNG seeded from `(seed, j)`, so counts do not
/// depend on the execution policy.
pub fn classical_counts(
    c: &PendulumConfig,
    s0: f64,
    bins: &EnergyBins,
    n_samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<u64>> {
    c.validate()?;
    ensure_positive("s0", s0)?;
    if n_samples == 0 {
        return Err(Error::Empty("Monte Carlo sample count"));
    }
    let n_chunks = n_samples.div_ceil(CHUNK);
    let (a, b, k2) = (c.delta_omega / s0, 2.0 * c.omega_rot / s0, 0.5 * c.twist());
    let partial = exec.map_range(n_chunks, |j| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, j as u64));
        let count = CHUNK.min(n_samples - j * CHUNK);
        let mut hist = vec![0u64; bins.n];
        for _ in 0..count {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let x = (1.0 - z * z).sqrt() * phi.cos();
            let eps = a * x - b * z + k2 * z * z;
            if let Some(i) = bins.index(eps) {
                hist[i] += 1;
            }
        }
        hist
    });
    let mut total = vec![0u64; bins.n];
    for h in partial {
        for (t, v) in total.iter_mut().zip(h) {
            *t += v;
        }
    }
    Ok(total)
}

/// Counts normalized to unit integral over the bins.
pub fn density_from_counts(counts: &[u64], bins: &EnergyBins) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return vec![0.0; counts.len()];
    }
    let norm = 1.0 / (total as f64 * bins.width());
    counts.iter().map(|&k| k as f64 * norm).collect()
}

/// Binned classical density of states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalDos {
    pub bins: EnergyBins,
    pub density: Vec<f64>,
}

pub fn classical_dos(
    c: &PendulumConfig,
    s0: f64,
    n_bins: usize,
    n_samples: usize,
    seed: u64,
) -> Result<ClassicalDos> {
    let bins = shared_bins(c, s0, n_bins)?;
    let counts = classical_counts(c, s0, &bins, n_samples, seed, Exec::default())?;
    Ok(ClassicalDos {
        density: density_from_counts(&counts, &bins),
        bins,
    })
}

/// Index of the largest entry.
pub fn peak_bin(density: &[f64]) -> Option<usize> {
    density
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
}

/// Locate the sharpest step of a binned density.
///
/// For each bin `i` the step is the difference between the mean over the
/// `w` bins below and the `w` bins above, relative to the mean density on
/// `support`. Windows must lie inside `support` and bins within `w` of any
/// energy in `exclude` (e.g. a log peak) are skipped.
pub fn find_density_step(
    density: &[f64],
    bins: &EnergyBins,
    support: (f64, f64),
    exclude: &[f64],
    w: usize,
) -> Option<usize> {
    if w == 0 || density.len() != bins.n {
        return None;
    }
    let first = bins.clamped_index(support.0);
    let last = bins.clamped_index(support.1);
    if last < first + 2 * w + 1 {
        return None;
    }
    let mean_support = density[first..=last].iter().sum::<f64>() / (last - first + 1) as f64;
    if mean_support <= 0.0 {
        return None;
    }
    let excluded: Vec<usize> = exclude.iter().map(|&e| bins.clamped_index(e)).collect();
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    (first + w..=last - w)
        .filter(|&i| excluded.iter().all(|&e| i.abs_diff(e) > w))
        .map(|i| {
            let step = (mean(&density[i - w..i]) - mean(&density[i + 1..=i + w])) / mean_support;
            (i, step.abs())
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_index() {
        let b = EnergyBins::new(0.0, 1.0, 10).unwrap();
        assert_eq!(b.index(0.0), Some(0));
        assert_eq!(b.index(0.95), Some(9));
        assert_eq!(b.index(1.0), None);
        assert_eq!(b.clamped_index(-3.0), 0);
        assert_eq!(b.clamped_index(3.0), 9);
        assert_eq!(b.edges().len(), 11);
        assert!(EnergyBins::new(1.0, 1.0, 3).is_err());
    }

    #[test]
    fn range_symmetric() {
        let c = PendulumConfig::new(1.0);
        let (lo, hi) = classical_energy_range(&c, 2.0).unwrap();
        assert!(lo.abs() < 1e-15);
        assert!((hi - 3.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn counts_independent_of_policy() {
        let c = PendulumConfig::new(1.0).with_delta_omega(0.3).with_rotation(0.1);
        let bins = shared_bins(&c, 1.0, 50).unwrap();
        let a = classical_counts(&c, 1.0, &bins, 200_000, 5, Exec::Sequential).unwrap();
        let b = classical_counts(&c, 1.0, &bins, 200_000, 5, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<u64>(), 200_000);
    }

    #[test]
    fn step_detector_finds_jump() {
        let b = EnergyBins::new(0.0, 1.0, 100).unwrap();
        let d: Vec<f64> = (0..100).map(|i| if i < 60 { 2.0 } else { 1.0 }).collect();
        let i = find_density_step(&d, &b, (0.0, 0.999), &[], 3).unwrap();
        assert!(i == 59 || i == 60);
    }
}
