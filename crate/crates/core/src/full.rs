//! Full spherical pendulum in the rotating frame, used as the reference
//! the reduced Stokes model is checked against.
//!
//! The bob is integrated in projected coordinates q = (x, y) / L with
//! z = −√(1 − |q|²), which stay regular through the lowest point. The
//! anisotropy potential is U_a / m = ω Δω L² (1 − cos θ) cos 2α.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::config::PendulumConfig;
use crate::dynamics::{max_step, rhs_conservative, rk4_step, FlowKind};
use crate::error::{ensure_positive, Error, Result};
use crate::stokes::{ellipse_from_stokes, stokes_from_trajectory, EllipseGeometry, PlanarSample, StokesState};

/// Coarsest output step: 64 samples per fast period.
pub const MIN_STEPS_PER_PERIOD: f64 = 64.0;
/// Internal RK4 substeps per fast period (at least).
pub const SUBSTEPS_PER_PERIOD: f64 = 1024.0;
/// Output sampling used by the reduced-vs-full comparison.
pub const COMPARE_SAMPLES_PER_PERIOD: usize = 256;
/// Radius above which a comparison is flagged out of regime.
pub const REGIME_S0: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalState {
    pub theta: f64,
    pub alpha: f64,
    pub theta_dot: f64,
    pub alpha_dot: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalDerivative {
    pub theta_dot: f64,
    pub alpha_dot: f64,
    pub theta_ddot: f64,
    pub alpha_ddot: f64,
}

impl SphericalState {
    /// Rotating-frame position and velocity in metres.
    pub fn to_planar(&self, length: f64) -> PlanarSample {
        let (st, ct) = self.theta.sin_cos();
        let (sa, ca) = self.alpha.sin_cos();
        let rho = length * st;
        let rho_dot = length * ct * self.theta_dot;
        PlanarSample {
            x: rho * ca,
            y: rho * sa,
            vx: rho_dot * ca - rho * sa * self.alpha_dot,
            vy: rho_dot * sa + rho * ca * self.alpha_dot,
        }
    }
}

/// Euler-Lagrange equations in (θ, α).
///
/// Singular on the axis θ = 0 where α is undefined; the integrator uses
/// projected Cartesian coordinates instead.
pub fn full_rhs(s: &SphericalState, c: &PendulumConfig) -> Result<SphericalDerivative> {
    c.validate()?;
    if !(s.theta.abs() < 0.5 * PI) {
        return Err(Error::Domain { t: f64::NAN });
    }
    let (st, ct) = s.theta.sin_cos();
    if st == 0.0 {
        return Err(Error::InvalidParameter {
            name: "theta",
            reason: "azimuth is undefined on the axis theta = 0".into(),
        });
    }
    let (s2a, c2a) = (2.0 * s.alpha).sin_cos();
    let wd = c.omega * c.delta_omega;
    let spin = s.alpha_dot + c.omega_rot;
    Ok(SphericalDerivative {
        theta_dot: s.theta_dot,
        alpha_dot: s.alpha_dot,
        theta_ddot: st * ct * spin * spin - c.omega * c.omega * st - wd * st * c2a,
        alpha_ddot: (2.0 * wd * (1.0 - ct) * s2a - 2.0 * st * ct * s.theta_dot * spin) / (st * st),
    })
}

/// Normalized state [x, y, ẋ, ẏ] / L in the rotating frame.
type Q = [f64; 4];

fn add(a: Q, b: Q, h: f64) -> Q {
    [a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2], a[3] + h * b[3]]
}

fn cartesian_rhs(u: Q, c: &PendulumConfig) -> Q {
    let [x, y, vx, vy] = u;
    let r2 = x * x + y * y;
    let z2 = 1.0 - r2;
    let zeta = z2.sqrt();
    let qv = x * vx + y * vy;
    let v2 = vx * vx + vy * vy;
    let geo = v2 / z2 + qv * qv / (z2 * z2);
    let w = c.omega_rot;
    let wd = c.omega * c.delta_omega;
    let d = 1.0 + zeta;
    let aniso = (x * x - y * y) / (zeta * d * d);
    let grad_x = wd * (2.0 * x / d + aniso * x);
    let grad_y = wd * (-2.0 * y / d + aniso * y);
    let g = c.omega * c.omega;
    let fx = -x * geo + 2.0 * w * vy + w * w * x - g * x / zeta - grad_x;
    let fy = -y * geo - 2.0 * w * vx + w * w * y - g * y / zeta - grad_y;
    let qf = x * fx + y * fy;
    [vx, vy, fx - x * qf, fy - y * qf]
}

/// Jacobi constant per unit mass, in units of L².
fn jacobi(u: Q, c: &PendulumConfig) -> f64 {
    let [x, y, vx, vy] = u;
    let r2 = x * x + y * y;
    let z2 = 1.0 - r2;
    let zeta = z2.sqrt();
    let qv = x * vx + y * vy;
    let ua = c.omega * c.delta_omega * (x * x - y * y) / (1.0 + zeta);
    0.5 * (vx * vx + vy * vy + qv * qv / z2) - 0.5 * c.omega_rot * c.omega_rot * r2 - c.omega * c.omega * zeta + ua
}

/// Vertical inertial angular momentum per unit mass, in units of L².
fn vertical_momentum(u: Q, c: &PendulumConfig) -> f64 {
    let [x, y, vx, vy] = u;
    x * vy - y * vx + c.omega_rot * (x * x + y * y)
}

/// Full-model samples (rotating frame, metres) with conservation monitors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartesianTrajectory {
    pub dt: f64,
    pub times: Vec<f64>,
    pub samples: Vec<PlanarSample>,
    /// Jacobi constant m L² E_J.
    pub jacobi: Vec<f64>,
    /// Vertical angular momentum m L² (x ẏ − y ẋ + Ω r²)/L².
    pub angular_momentum: Vec<f64>,
}

impl CartesianTrajectory {
    pub fn jacobi_drift(&self) -> f64 {
        relative_drift(&self.jacobi)
    }

    pub fn angular_momentum_drift(&self) -> f64 {
        relative_drift(&self.angular_momentum)
    }
}

fn relative_drift(v: &[f64]) -> f64 {
    let v0 = v[0];
    let scale = v0.abs().max(f64::MIN_POSITIVE);
    v.iter().map(|x| (x - v0).abs()).fold(0.0, f64::max) / scale
}

/// Integrate from spherical initial data.
pub fn integrate_full(
    init: &SphericalState,
    c: &PendulumConfig,
    t_end: f64,
    dt: f64,
) -> Result<CartesianTrajectory> {
    c.validate()?;
    if !(init.theta.abs() < 0.5 * PI) {
        return Err(Error::Domain { t: 0.0 });
    }
    integrate_full_planar(&init.to_planar(c.length), c, t_end, dt)
}

/// Integrate from a rotating-frame position and velocity in metres.
pub fn integrate_full_planar(
    init: &PlanarSample,
    c: &PendulumConfig,
    t_end: f64,
    dt: f64,
) -> Result<CartesianTrajectory> {
    c.validate()?;
    ensure_positive("dt", dt)?;
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: format!("must be finite and >= 0, got {t_end}"),
        });
    }
    let period = TAU / c.omega;
    let limit = period / MIN_STEPS_PER_PERIOD;
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge {
            dt,
            limit,
            rate: "pendulum omega (64 steps per period)",
        });
    }
    let l = c.length;
    let mut u: Q = [init.x / l, init.y / l, init.vx / l, init.vy / l];
    if u[0] * u[0] + u[1] * u[1] >= 1.0 {
        return Err(Error::Domain { t: 0.0 });
    }
    let n = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    let sub = (dt * SUBSTEPS_PER_PERIOD / period).ceil().max(1.0) as usize;
    let h = dt / sub as f64;
    let f = |u: Q| cartesian_rhs(u, c);
    let ml2 = c.mass * l * l;
    let mut out = CartesianTrajectory {
        dt,
        times: Vec::with_capacity(n + 1),
        samples: Vec::with_capacity(n + 1),
        jacobi: Vec::with_capacity(n + 1),
        angular_momentum: Vec::with_capacity(n + 1),
    };
    let mut record = |i: usize, u: Q| {
        out.times.push(i as f64 * dt);
        out.samples.push(PlanarSample {
            x: u[0] * l,
            y: u[1] * l,
            vx: u[2] * l,
            vy: u[3] * l,
        });
        out.jacobi.push(ml2 * jacobi(u, c));
        out.angular_momentum.push(ml2 * vertical_momentum(u, c));
    };
    record(0, u);
    for i in 1..=n {
        for _ in 0..sub {
            let k1 = f(u);
            let k2 = f(add(u, k1, 0.5 * h));
            let k3 = f(add(u, k2, 0.5 * h));
            let k4 = f(add(u, k3, h));
            for j in 0..4 {
                u[j] += h / 6.0 * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]);
            }
            let r2 = u[0] * u[0] + u[1] * u[1];
            if !(r2 < 1.0 - 1e-12) {
                return Err(Error::Domain { t: i as f64 * dt });
            }
        }
        record(i, u);
    }
    Ok(out)
}

/// Rotating-frame seed for an orbit that is the given ellipse in the
/// inertial frame at t = 0.
pub fn seed_from_ellipse(e: &EllipseGeometry, c: &PendulumConfig) -> PlanarSample {
    let p = e.orbit_sample(c.omega, 0.0);
    PlanarSample {
        x: p.x,
        y: p.y,
        vx: p.vx + c.omega_rot * p.y,
        vy: p.vy - c.omega_rot * p.x,
    }
}

/// One-period Stokes windows advanced by quarter periods.
///
/// With `derotate`, each window is expressed with inertial velocities in
/// the non-rotating frame that coincides with the rotating axes at the
/// window centre; otherwise the raw rotating-frame samples are used.
/// Requires a whole number of samples per period divisible by 4.
pub fn windowed_stokes(
    traj: &CartesianTrajectory,
    c: &PendulumConfig,
    derotate: bool,
) -> Result<Vec<(f64, StokesState)>> {
    let period = TAU / c.omega;
    let spp_f = period / traj.dt;
    let spp = spp_f.round() as usize;
    if (spp_f - spp as f64).abs() > 1e-6 || !spp.is_multiple_of(4) {
        return Err(Error::Window(format!(
            "need a whole multiple of 4 samples per period, got {spp_f}"
        )));
    }
    let quarter = spp / 4;
    let mut out = Vec::new();
    let mut start = 0;
    while start + spp < traj.samples.len() {
        let mid = start + spp / 2;
        let tc = traj.times[mid];
        let window: Vec<PlanarSample> = (start..=start + spp)
            .map(|i| {
                let p = traj.samples[i];
                if !derotate {
                    return p;
                }
                let (vx, vy) = (p.vx - c.omega_rot * p.y, p.vy + c.omega_rot * p.x);
                let (s, co) = (c.omega_rot * (traj.times[i] - tc)).sin_cos();
                PlanarSample {
                    x: co * p.x - s * p.y,
                    y: s * p.x + co * p.y,
                    vx: co * vx - s * vy,
                    vy: s * vx + co * vy,
                }
            })
            .collect();
        out.push((tc, stokes_from_trajectory(&window, traj.dt, period, c.length)?));
        start += quarter;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowDeviation {
    pub t: f64,
    pub reduced: StokesState,
    pub full: StokesState,
    /// |S_reduced − S_full| / s0.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub initial: StokesState,
    pub config: PendulumConfig,
    pub t_end: f64,
    pub samples_per_period: usize,
    pub windows: Vec<WindowDeviation>,
    pub max_deviation: f64,
    pub out_of_regime: bool,
}

/// Run the full and reduced models from matching initial data and compare
/// their Stokes series window by window.
pub fn compare_reduced_full(init: StokesState, c: &PendulumConfig, t_end: f64) -> Result<DeviationReport> {
    c.validate()?;
    let s0 = init.s0();
    let ellipse = ellipse_from_stokes(init, c.length)?;
    let period = TAU / c.omega;
    if t_end < period {
        return Err(Error::Window(format!(
            "t_end = {t_end} is shorter than one period {period}"
        )));
    }
    let spp = COMPARE_SAMPLES_PER_PERIOD;
    let dt = period / spp as f64;
    let full = integrate_full_planar(&seed_from_ellipse(&ellipse, c), c, t_end, dt)?;
    let windows = windowed_stokes(&full, c, true)?;

    let sub = (dt / (0.5 * max_step(FlowKind::Combined, s0, c))).ceil().max(1.0) as usize;
    let h = dt / sub as f64;
    let f = |s: StokesState| rhs_conservative(s, c);
    let mut reduced = Vec::with_capacity(full.samples.len());
    let mut s = init;
    reduced.push(s);
    for _ in 1..full.samples.len() {
        for _ in 0..sub {
            s = rk4_step(&f, s, h);
        }
        reduced.push(s);
    }

    let windows: Vec<WindowDeviation> = windows
        .into_iter()
        .map(|(t, full)| {
            let red = reduced[(t / dt).round() as usize];
            WindowDeviation {
                t,
                reduced: red,
                full,
                deviation: (red - full).norm() / s0,
            }
        })
        .collect();
    let max_deviation = windows.iter().map(|w| w.deviation).fold(0.0, f64::max);
    Ok(DeviationReport {
        initial: init,
        config: *c,
        t_end,
        samples_per_period: spp,
        windows,
        max_deviation,
        out_of_regime: s0 > REGIME_S0,
    })
}

/// A rate measured on the full model next to its reduced-model value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateCheck {
    pub measured: f64,
    pub expected: f64,
}

impl RateCheck {
    pub fn relative_error(&self) -> f64 {
        ((self.measured - self.expected) / self.expected).abs()
    }
}

const RATE_SAMPLES_PER_PERIOD: f64 = 512.0;

/// Mean period from upward zero crossings, linearly interpolated.
fn mean_period(times: &[f64], values: &[f64]) -> Option<f64> {
    let mut crossings = Vec::new();
    for i in 1..values.len() {
        let (a, b) = (values[i - 1], values[i]);
        if a < 0.0 && b >= 0.0 {
            crossings.push(times[i - 1] + (times[i] - times[i - 1]) * a / (a - b));
        }
    }
    (crossings.len() >= 2).then(|| {
        (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64
    })
}

/// Least-squares slope of y(t).
fn slope(t: &[f64], y: &[f64]) -> f64 {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let num: f64 = t.iter().zip(y).map(|(a, b)| (a - tm) * (b - ym)).sum();
    let den: f64 = t.iter().map(|a| (a - tm) * (a - tm)).sum();
    num / den
}

fn unwrap_half_turn(raw: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in raw {
        let v = match out.last() {
            Some(&prev) => v + PI * ((prev - v) / PI).round(),
            None => v,
        };
        out.push(v);
    }
    out
}

fn inclination_slope(windows: &[(f64, StokesState)]) -> f64 {
    let t: Vec<f64> = windows.iter().map(|w| w.0).collect();
    let psi = unwrap_half_turn(windows.iter().map(|w| 0.5 * w.1.s2.atan2(w.1.s1)));
    slope(&t, &psi)
}

/// ω_x − ω_y from x-only and y-only linear swings of radius s0 with the
/// frame rotation switched off.
pub fn measure_frequency_split(c: &PendulumConfig, s0: f64, periods: f64) -> Result<RateCheck> {
    ensure_positive("s0", s0)?;
    let c = c.with_rotation(0.0);
    let period = TAU / c.omega;
    let dt = period / RATE_SAMPLES_PER_PERIOD;
    let a = s0.sqrt() * c.length;
    let mut freqs = [0.0; 2];
    for (k, start) in [
        PlanarSample { x: a, ..Default::default() },
        PlanarSample { y: a, ..Default::default() },
    ]
    .into_iter()
    .enumerate()
    {
        let tr = integrate_full_planar(&start, &c, periods * period, dt)?;
        let v: Vec<f64> = tr.samples.iter().map(|p| if k == 0 { p.x } else { p.y }).collect();
        let p = mean_period(&tr.times, &v).ok_or_else(|| Error::Window("no oscillation detected".into()))?;
        freqs[k] = TAU / p;
    }
    Ok(RateCheck {
        measured: freqs[0] - freqs[1],
        expected: c.delta_omega,
    })
}

/// Precession rate of a swing that is linear in the inertial frame, seen
/// from the rotating frame, with the anisotropy switched off.
pub fn measure_linear_precession(c: &PendulumConfig, s0: f64, periods: f64) -> Result<RateCheck> {
    ensure_positive("s0", s0)?;
    if c.omega_rot == 0.0 {
        return Err(Error::InvalidParameter {
            name: "omega_rot",
            reason: "precession needs a rotating frame".into(),
        });
    }
    let c = c.with_delta_omega(0.0);
    let period = TAU / c.omega;
    let dt = period / RATE_SAMPLES_PER_PERIOD;
    let a = s0.sqrt() * c.length;
    let start = PlanarSample {
        x: a,
        y: 0.0,
        vx: 0.0,
        vy: -c.omega_rot * a,
    };
    let tr = integrate_full_planar(&start, &c, periods * period, dt)?;
    let w = windowed_stokes(&tr, &c, false)?;
    Ok(RateCheck {
        measured: inclination_slope(&w),
        expected: -c.omega_rot,
    })
}

/// Apsidal precession of an elliptic orbit with Ω = Δω = 0, compared with
/// the twisting rate (3/16) ω s3 of the seed ellipse.
pub fn measure_airy_rate(c: &PendulumConfig, e: &EllipseGeometry, periods: f64) -> Result<RateCheck> {
    let c = c.with_rotation(0.0).with_delta_omega(0.0);
    let period = TAU / c.omega;
    let dt = period / RATE_SAMPLES_PER_PERIOD;
    let s3 = 2.0 * e.a * e.signed_b() / (c.length * c.length);
    let tr = integrate_full_planar(&seed_from_ellipse(e, &c), &c, periods * period, dt)?;
    let w = windowed_stokes(&tr, &c, false)?;
    Ok(RateCheck {
        measured: inclination_slope(&w),
        expected: 3.0 / 16.0 * c.omega * s3,
    })
}
