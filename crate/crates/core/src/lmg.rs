//! Quantum Hamiltonian Ĥ = Δω Ŝ1 − 2Ω Ŝ3 + (3/16) ω Ŝ3² in the Dicke basis,
//! its spectrum, and the LMG parameter map.

use serde::{Deserialize, Serialize};

use crate::config::PendulumConfig;
use crate::dos::{classical_counts, density_from_counts, shared_bins, EnergyBins};
use crate::error::{ensure_finite, Error, Result};
use crate::exec::{derive_seed, Exec};
use crate::tridiag;

/// Collective-spin basis |S = N/2, m⟩, m = −S..S.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DickeBasis {
    pub n_particles: u32,
}

impl DickeBasis {
    pub fn new(n_particles: u32) -> Result<Self> {
        if n_particles < 1 {
            return Err(Error::InvalidParameter {
                name: "n_particles",
                reason: "need N >= 1".into(),
            });
        }
        Ok(Self { n_particles })
    }

    pub fn spin(&self) -> f64 {
        0.5 * self.n_particles as f64
    }

    pub fn dim(&self) -> usize {
        self.n_particles as usize + 1
    }

    /// S(S+1).
    pub fn casimir(&self) -> f64 {
        let s = self.spin();
        s * (s + 1.0)
    }

    /// m values in ascending order.
    pub fn m_values(&self) -> Vec<f64> {
        let s = self.spin();
        (0..self.dim()).map(|i| i as f64 - s).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalHamiltonian {
    pub basis: DickeBasis,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub config: PendulumConfig,
}

impl TridiagonalHamiltonian {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Dense copy, row-major.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = self.offdiag[i];
                m[i + 1][i] = self.offdiag[i];
            }
        }
        m
    }
}

pub fn build_hamiltonian(n_particles: u32, c: &PendulumConfig) -> Result<TridiagonalHamiltonian> {
    c.validate()?;
    let basis = DickeBasis::new(n_particles)?;
    let ms = basis.m_values();
    let k2 = 0.5 * c.twist();
    let diag = ms
        .iter()
        .map(|&m| -2.0 * c.omega_rot * m + k2 * m * m)
        .collect();
    let cas = basis.casimir();
    let offdiag = ms[..ms.len() - 1]
        .iter()
        .map(|&m| 0.5 * c.delta_omega * (cas - m * (m + 1.0)).max(0.0).sqrt())
        .collect();
    Ok(TridiagonalHamiltonian {
        basis,
        diag,
        offdiag,
        config: *c,
    })
}

/// Number of eigenpairs whose residual is checked.
pub const VERIFY_SAMPLES: usize = 16;

/// Ascending eigenvalues, with a residual check ‖Hv − λv‖ ≤ 1e−10 ‖H‖ on an
/// evenly spaced subsample of eigenpairs.
pub fn eigen_spectrum(h: &TridiagonalHamiltonian) -> Result<Vec<f64>> {
    let r = tridiag::eigen(&h.diag, &h.offdiag, true)?;
    let vectors = r.vectors.as_ref().expect("vectors requested");
    let n = r.values.len();
    let bound = 1e-10 * tridiag::inf_norm(&h.diag, &h.offdiag).max(f64::MIN_POSITIVE);
    let stride = n.div_ceil(VERIFY_SAMPLES).max(1);
    for j in (0..n).step_by(stride).chain(std::iter::once(n - 1)) {
        let res = tridiag::residual_norm(&h.diag, &h.offdiag, r.values[j], &vectors[j]);
        if res > bound {
            return Err(Error::EigenResidual {
                index: j,
                residual: res,
                bound,
            });
        }
    }
    Ok(r.values)
}

/// Eigenvalue rescaling E / (N/2)², matching ε = H / s0² with s0 = N/2.
pub fn rescale_energy(e: f64, n_particles: u32) -> f64 {
    let s = 0.5 * n_particles as f64;
    e / (s * s)
}

/// Histogram of rescaled eigenvalues. Values outside the bins are put in
/// the edge bins so the counts always sum to N+1.
pub fn quantum_dos(eigs: &[f64], n_particles: u32, bins: &EnergyBins) -> Result<Vec<u64>> {
    if eigs.is_empty() {
        return Err(Error::Empty("eigenvalues"));
    }
    let mut counts = vec![0u64; bins.n];
    for &e in eigs {
        counts[bins.clamped_index(rescale_energy(e, n_particles))] += 1;
    }
    Ok(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LmgCase {
    /// V = 0: symmetric pendulum in a rotating frame.
    SymmetricRotating,
    /// V = −W: asymmetric pendulum without rotation.
    AsymmetricStatic,
}

/// Pendulum parameters equivalent to an LMG Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmgMapping {
    pub omega: f64,
    pub delta_omega: f64,
    pub omega_rot: f64,
    pub case: LmgCase,
}

impl LmgMapping {
    /// Config with unit length and mass and no damping.
    pub fn config(&self) -> PendulumConfig {
        PendulumConfig::new(self.omega)
            .with_delta_omega(self.delta_omega)
            .with_rotation(self.omega_rot)
    }
}

/// Map (ε, V, W) to pendulum parameters for the two supported cases.
pub fn lmg_map(epsilon: f64, v: f64, w: f64) -> Result<LmgMapping> {
    ensure_finite("epsilon", epsilon)?;
    ensure_finite("V", v)?;
    ensure_finite("W", w)?;
    let m = if v == 0.0 && w != 0.0 {
        LmgMapping {
            omega: -16.0 * w / 3.0,
            delta_omega: 0.0,
            omega_rot: -0.5 * epsilon,
            case: LmgCase::SymmetricRotating,
        }
    } else if w != 0.0 && v == -w {
        LmgMapping {
            omega: 32.0 * w / 3.0,
            delta_omega: epsilon,
            omega_rot: 0.0,
            case: LmgCase::AsymmetricStatic,
        }
    } else {
        return Err(Error::UnsupportedLmg);
    };
    if m.omega <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "W",
            reason: format!("mapped omega = {} must be > 0", m.omega),
        });
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub n_bins: usize,
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            n_bins: 200,
            n_samples: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub n_particles: u32,
    pub config: PendulumConfig,
    /// Ascending, unscaled.
    pub eigenvalues: Vec<f64>,
    pub bins: EnergyBins,
    pub bin_edges: Vec<f64>,
    /// Counts of rescaled eigenvalues per bin.
    pub quantum_dos: Vec<u64>,
    /// Unit-integral classical density per bin.
    pub classical_dos: Vec<f64>,
    /// Seed used for the classical Monte Carlo.
    pub seed: u64,
}

impl SpectrumResult {
    /// Quantum counts as a unit-integral density.
    pub fn quantum_density(&self) -> Vec<f64> {
        density_from_counts(&self.quantum_dos, &self.bins)
    }
}

/// Spectrum and both densities for one parameter point.
pub fn spectrum_point(
    n_particles: u32,
    c: &PendulumConfig,
    opts: &SpectrumOptions,
    exec: Exec,
) -> Result<SpectrumResult> {
    let h = build_hamiltonian(n_particles, c)?;
    let eigenvalues = eigen_spectrum(&h)?;
    let s0 = h.basis.spin();
    let bins = shared_bins(c, s0, opts.n_bins)?;
    let quantum = quantum_dos(&eigenvalues, n_particles, &bins)?;
    let counts = classical_counts(c, s0, &bins, opts.n_samples, opts.seed, exec)?;
    Ok(SpectrumResult {
        n_particles,
        config: *c,
        eigenvalues,
        bin_edges: bins.edges(),
        bins,
        quantum_dos: quantum,
        classical_dos: density_from_counts(&counts, &bins),
        seed: opts.seed,
    })
}

/// Spectrum and densities over a grid of Δω; point `i` uses the seed
/// derived from `(opts.seed, i)`.
pub fn spectrum_sweep(
    n_particles: u32,
    template: &PendulumConfig,
    delta_omegas: &[f64],
    opts: &SpectrumOptions,
    exec: Exec,
) -> Result<Vec<SpectrumResult>> {
    if delta_omegas.is_empty() {
        return Err(Error::Empty("delta_omega grid"));
    }
    exec.map_range(delta_omegas.len(), |i| {
        let c = template.with_delta_omega(delta_omegas[i]);
        let point_opts = SpectrumOptions {
            seed: derive_seed(opts.seed, i as u64),
            ..*opts
        };
        spectrum_point(n_particles, &c, &point_opts, Exec::Sequential)
    })
    .into_iter()
    .collect()
}
