//! Composite experiments: Zeno filtering, classical squeezing and
//! self-trapping.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::config::PendulumConfig;
use crate::dynamics::{max_step, rhs, rk4_step, FlowKind};
use crate::error::{ensure_positive, Error, Result};
use crate::exec::{derive_seed, Exec};
use crate::stokes::StokesState;

fn run_flow(s: StokesState, c: &PendulumConfig, kind: FlowKind, duration: f64) -> StokesState {
    if duration <= 0.0 {
        return s;
    }
    let h_max = 0.5 * max_step(kind, s.s0(), c);
    let n = if h_max.is_finite() {
        (duration / h_max).ceil().max(1.0) as usize
    } else {
        1
    };
    let h = duration / n as f64;
    let f = |x: StokesState| rhs(kind, x, c);
    (0..n).fold(s, |x, _| rk4_step(&f, x, h))
}

/// Filters interleaved with Foucault rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZenoProtocol {
    /// Number of rotation segments; n + 1 filters are applied (none for n = 0).
    pub n_filters: u32,
    pub omega_rot: f64,
    pub gamma_filter: f64,
    pub filter_duration: f64,
    /// Initial radius; small so the amplitude-dependent twist is negligible.
    pub s0: f64,
}

impl Default for ZenoProtocol {
    fn default() -> Self {
        Self {
            n_filters: 8,
            omega_rot: 0.01,
            gamma_filter: 1.0,
            filter_duration: 25.0,
            s0: 1e-3,
        }
    }
}

/// Minimum γ τ_f of a filter.
pub const MIN_FILTER_QUALITY: f64 = 20.0;

impl ZenoProtocol {
    pub fn with_filters(mut self, n: u32) -> Self {
        self.n_filters = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("gamma_filter", self.gamma_filter)?;
        ensure_positive("filter_duration", self.filter_duration)?;
        ensure_positive("s0", self.s0)?;
        if !(self.omega_rot.is_finite() && self.omega_rot != 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega_rot",
                reason: "must be finite and non-zero".into(),
            });
        }
        let q = self.gamma_filter * self.filter_duration;
        if q < MIN_FILTER_QUALITY {
            return Err(Error::InvalidParameter {
                name: "gamma_filter * filter_duration",
                reason: format!("filter quality {q} below {MIN_FILTER_QUALITY}"),
            });
        }
        Ok(())
    }
}

/// Energy fraction for perfect instantaneous projections, cos^{2n}(π/2n).
pub fn ideal_zeno_fraction(n: u32) -> f64 {
    if n == 0 {
        return 1.0;
    }
    (PI / (2.0 * n as f64)).cos().powi(2 * n as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZenoReport {
    pub protocol: ZenoProtocol,
    /// Final s0 over initial s0.
    pub fraction: f64,
    pub ideal: f64,
    pub final_state: StokesState,
}

/// Start polarized along the undamped (y) direction, then alternate
/// filters with Coriolis rotation by π/(2n) in real space each.
pub fn zeno_run(p: &ZenoProtocol) -> Result<ZenoReport> {
    p.validate()?;
    let filter = PendulumConfig::new(1.0).with_damping(p.gamma_filter, 0.0);
    let rotate = PendulumConfig::new(1.0).with_rotation(p.omega_rot);
    let mut s = StokesState::new(-p.s0, 0.0, 0.0);
    if p.n_filters == 0 {
        s = run_flow(s, &rotate, FlowKind::Coriolis, PI / (2.0 * p.omega_rot.abs()));
    } else {
        let segment = PI / (2.0 * p.omega_rot.abs() * p.n_filters as f64);
        s = run_flow(s, &filter, FlowKind::DampedCombined, p.filter_duration);
        for _ in 0..p.n_filters {
            s = run_flow(s, &rotate, FlowKind::Coriolis, segment);
            s = run_flow(s, &filter, FlowKind::DampedCombined, p.filter_duration);
        }
    }
    Ok(ZenoReport {
        protocol: *p,
        fraction: s.s0() / p.s0,
        ideal: ideal_zeno_fraction(p.n_filters),
        final_state: s,
    })
}

/// Ensemble around (s0, 0, 0) with isotropic Gaussian spread in (s2, s3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n_members: usize,
    pub s0: f64,
    pub spread: f64,
    pub seed: u64,
}

/// Largest allowed spread relative to s0.
pub const MAX_SPREAD_RATIO: f64 = 0.05;

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("s0", self.s0)?;
        ensure_positive("spread", self.spread)?;
        if self.n_members < 2 {
            return Err(Error::InvalidParameter {
                name: "n_members",
                reason: "need at least 2 members".into(),
            });
        }
        if self.spread > MAX_SPREAD_RATIO * self.s0 {
            return Err(Error::InvalidParameter {
                name: "spread",
                reason: format!("must be <= {MAX_SPREAD_RATIO} s0"),
            });
        }
        Ok(())
    }

    /// Usable squeezing times [8/(3 ω s0), 4/(3 ω Δ)].
    pub fn window(&self, c: &PendulumConfig) -> (f64, f64) {
        (8.0 / (3.0 * c.omega * self.s0), 4.0 / (3.0 * c.omega * self.spread))
    }

    /// Geometric middle of the window.
    pub fn mid_window_tau(&self, c: &PendulumConfig) -> f64 {
        let (lo, hi) = self.window(c);
        (lo * hi).sqrt()
    }
}

/// Members drawn with per-member seeds and projected radially onto the
/// sphere of radius s0.
pub fn sample_ensemble(spec: &EnsembleSpec, exec: Exec) -> Result<Vec<StokesState>> {
    spec.validate()?;
    let normal = Normal::new(0.0, spec.spread).map_err(|e| Error::InvalidParameter {
        name: "spread",
        reason: e.to_string(),
    })?;
    Ok(exec.map_range(spec.n_members, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, i as u64));
        let raw = StokesState::new(spec.s0, normal.sample(&mut rng), normal.sample(&mut rng));
        raw * (spec.s0 / raw.norm())
    }))
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Sample covariance of (s2, s3).
pub fn ensemble_covariance(members: &[StokesState]) -> [[f64; 2]; 2] {
    let n = members.len() as f64;
    let m2 = compensated_sum(members.iter().map(|m| m.s2)) / n;
    let m3 = compensated_sum(members.iter().map(|m| m.s3)) / n;
    let norm = 1.0 / (n - 1.0);
    let c22 = compensated_sum(members.iter().map(|m| (m.s2 - m2).powi(2))) * norm;
    let c33 = compensated_sum(members.iter().map(|m| (m.s3 - m3).powi(2))) * norm;
    let c23 = compensated_sum(members.iter().map(|m| (m.s2 - m2) * (m.s3 - m3))) * norm;
    [[c22, c23], [c23, c33]]
}

/// Principal standard deviations (major, minor) and the major-axis angle
/// from the s2 axis in (−π/2, π/2].
pub fn principal_axes(cov: [[f64; 2]; 2]) -> (f64, f64, f64) {
    let (a, b, d) = (cov[0][0], cov[0][1], cov[1][1]);
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let major = (mean + r).max(0.0);
    let minor = (mean - r).max(0.0);
    let mut angle = 0.5 * (2.0 * b).atan2(a - d);
    if angle <= -0.5 * PI {
        angle += PI;
    }
    (major.sqrt(), minor.sqrt(), angle)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezeReport {
    pub spec: EnsembleSpec,
    pub tau: f64,
    pub covariance: [[f64; 2]; 2],
    pub delta_plus: f64,
    pub delta_minus: f64,
    /// Tilt of the stretched (major) axis from the equator.
    pub alpha: f64,
    pub predicted_delta_plus: f64,
    pub predicted_delta_minus: f64,
    pub predicted_alpha: f64,
    pub warnings: Vec<String>,
    pub members: Vec<StokesState>,
}

/// Evolve the ensemble under the twisting flow for `tau` and measure its
/// covariance ellipse.
pub fn squeeze_ensemble(
    spec: &EnsembleSpec,
    c: &PendulumConfig,
    tau: f64,
    exec: Exec,
) -> Result<SqueezeReport> {
    c.validate()?;
    spec.validate()?;
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::SqueezeWindow(format!("tau = {tau} must be finite and >= 0")));
    }
    let (lo, hi) = spec.window(c);
    if tau > 10.0 * hi {
        return Err(Error::SqueezeWindow(format!(
            "tau = {tau} is more than 10x the upper bound {hi}"
        )));
    }
    let mut warnings = Vec::new();
    if tau < lo {
        warnings.push(format!("tau = {tau} below the lower bound 8/(3 omega s0) = {lo}"));
    }
    if tau > hi {
        warnings.push(format!("tau = {tau} above the upper bound 4/(3 omega spread) = {hi}"));
    }
    let start = sample_ensemble(spec, exec)?;
    let twist = PendulumConfig::new(c.omega).with_length(c.length).with_mass(c.mass);
    let members = exec.map(&start, |m| run_flow(*m, &twist, FlowKind::Twisting, tau));
    let covariance = ensemble_covariance(&members);
    let (delta_plus, delta_minus, alpha) = principal_axes(covariance);
    let kappa = 3.0 / 8.0 * spec.s0 * c.omega * tau;
    Ok(SqueezeReport {
        spec: *spec,
        tau,
        covariance,
        delta_plus,
        delta_minus,
        alpha,
        predicted_delta_plus: kappa * spec.spread,
        predicted_delta_minus: spec.spread / kappa,
        predicted_alpha: 1.0 / kappa,
        warnings,
        members,
    })
}

/// Rotate every member about S1 by −`angle`, undoing a tilt of `angle`.
pub fn derotate_ensemble(members: &[StokesState], angle: f64) -> Vec<StokesState> {
    let (s, c) = angle.sin_cos();
    members
        .iter()
        .map(|m| StokesState::new(m.s1, c * m.s2 + s * m.s3, -s * m.s2 + c * m.s3))
        .collect()
}

/// Standard deviations of s2 and s3.
pub fn component_spreads(members: &[StokesState]) -> (f64, f64) {
    let cov = ensemble_covariance(members);
    (cov[0][0].sqrt(), cov[1][1].sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrapOutcome {
    /// s3 changed sign: the orbit reversed its sense of rotation.
    Flips,
    /// s3 kept its sign for the whole run.
    Trapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapRun {
    pub s0: f64,
    pub outcome: TrapOutcome,
    /// Smallest s3 reached (negative once the orbit flipped).
    pub min_s3: f64,
    pub t_end: f64,
}

fn check_trap_config(c: &PendulumConfig) -> Result<()> {
    c.validate()?;
    if c.omega_rot != 0.0 || c.delta_omega == 0.0 {
        return Err(Error::InvalidParameter {
            name: "omega_rot, delta_omega",
            reason: "self-trapping needs omega_rot = 0 and delta_omega != 0".into(),
        });
    }
    Ok(())
}

/// Default run length: 50 anisotropy periods.
pub fn default_trap_time(c: &PendulumConfig) -> f64 {
    50.0 * 2.0 * PI / c.delta_omega.abs()
}

/// Start on the circular orbit (0, 0, s0) and watch the sign of s3.
pub fn trap_outcome(c: &PendulumConfig, s0: f64, t_end: f64) -> Result<TrapRun> {
    check_trap_config(c)?;
    ensure_positive("s0", s0)?;
    ensure_positive("t_end", t_end)?;
    let h_max = 0.5 * max_step(FlowKind::Combined, s0, c);
    let n = (t_end / h_max).ceil() as usize;
    let h = t_end / n as f64;
    let f = |x: StokesState| rhs(FlowKind::Combined, x, c);
    let mut s = StokesState::new(0.0, 0.0, s0);
    let mut min_s3 = s0;
    for _ in 0..n {
        s = rk4_step(&f, s, h);
        min_s3 = min_s3.min(s.s3);
        if s.s3 < 0.0 {
            break;
        }
    }
    Ok(TrapRun {
        s0,
        outcome: if min_s3 < 0.0 {
            TrapOutcome::Flips
        } else {
            TrapOutcome::Trapped
        },
        min_s3,
        t_end,
    })
}

pub fn self_trapping_demo(c: &PendulumConfig, s0_sub: f64, s0_super: f64) -> Result<(TrapRun, TrapRun)> {
    let t = default_trap_time(c);
    Ok((trap_outcome(c, s0_sub, t)?, trap_outcome(c, s0_super, t)?))
}

/// Bisect on s0 for the flip/trap boundary of the pole start. `lo` must
/// flip and `hi` must stay trapped.
pub fn trapping_transition(c: &PendulumConfig, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64> {
    let t = default_trap_time(c);
    if trap_outcome(c, lo, t)?.outcome != TrapOutcome::Flips
        || trap_outcome(c, hi, t)?.outcome != TrapOutcome::Trapped
    {
        return Err(Error::InvalidParameter {
            name: "lo, hi",
            reason: "bracket must flip at lo and stay trapped at hi".into(),
        });
    }
    while (hi - lo) > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        match trap_outcome(c, mid, t)?.outcome {
            TrapOutcome::Flips => lo = mid,
            TrapOutcome::Trapped => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}
