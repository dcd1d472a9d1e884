//! Stokes-parameter state and the conversions between orbit descriptions.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::config::PendulumConfig;
use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// A point (s1, s2, s3) on or inside the Poincaré sphere.
///
/// The radius s0 is always derived, so s0² = s1² + s2² + s3² holds by
/// construction. Time derivatives use the same layout.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StokesState {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesState {
    pub const fn new(s1: f64, s2: f64, s3: f64) -> Self {
        Self { s1, s2, s3 }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }

    pub fn s0(self) -> f64 {
        self.norm()
    }

    pub fn norm(self) -> f64 {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt()
    }

    pub fn dot(self, o: Self) -> f64 {
        self.s1 * o.s1 + self.s2 * o.s2 + self.s3 * o.s3
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.s2 * o.s3 - self.s3 * o.s2,
            self.s3 * o.s1 - self.s1 * o.s3,
            self.s1 * o.s2 - self.s2 * o.s1,
        )
    }

    pub fn max_abs(self) -> f64 {
        self.s1.abs().max(self.s2.abs()).max(self.s3.abs())
    }

    pub fn is_finite(self) -> bool {
        self.s1.is_finite() && self.s2.is_finite() && self.s3.is_finite()
    }
}

impl Add for StokesState {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.s1 + o.s1, self.s2 + o.s2, self.s3 + o.s3)
    }
}

impl Sub for StokesState {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.s1 - o.s1, self.s2 - o.s2, self.s3 - o.s3)
    }
}

impl Mul<f64> for StokesState {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.s1 * k, self.s2 * k, self.s3 * k)
    }
}

impl Neg for StokesState {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Handedness {
    Counterclockwise,
    Clockwise,
}

impl Handedness {
    pub fn sign(self) -> f64 {
        match self {
            Handedness::Counterclockwise => 1.0,
            Handedness::Clockwise => -1.0,
        }
    }
}

/// Orbit ellipse: semi-axes `a ≥ b ≥ 0`, major-axis inclination ψ ∈ [0, π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseGeometry {
    pub a: f64,
    pub b: f64,
    pub psi: f64,
    pub handedness: Handedness,
}

impl EllipseGeometry {
    /// Validates the axes and folds ψ into [0, π).
    pub fn new(a: f64, b: f64, psi: f64, handedness: Handedness) -> Result<Self> {
        ensure_finite("a", a)?;
        ensure_finite("b", b)?;
        ensure_finite("psi", psi)?;
        if b < 0.0 || a < b {
            return Err(Error::InvalidParameter {
                name: "a, b",
                reason: format!("need a >= b >= 0, got a = {a}, b = {b}"),
            });
        }
        Ok(Self {
            a,
            b,
            psi: normalize_half_turn(psi),
            handedness,
        })
    }

    /// ψ is meaningless for a circle; conversions report 0 and set this flag.
    pub fn is_circular(&self) -> bool {
        self.a - self.b <= 1e-12 * self.a
    }

    /// Signed minor axis: positive for counterclockwise motion.
    pub fn signed_b(&self) -> f64 {
        self.handedness.sign() * self.b
    }

    /// Position and velocity on the harmonic orbit at time `t`, with the
    /// origin of time where the bob sits at the end of the major axis.
    pub fn orbit_sample(&self, omega: f64, t: f64) -> PlanarSample {
        let (sp, cp) = self.psi.sin_cos();
        let (st, ct) = (omega * t).sin_cos();
        let b = self.signed_b();
        PlanarSample {
            x: self.a * cp * ct - b * sp * st,
            y: self.a * sp * ct + b * cp * st,
            vx: -omega * (self.a * cp * st + b * sp * ct),
            vy: -omega * (self.a * sp * st - b * cp * ct),
        }
    }
}

/// Amplitude-phase description: x = A cos ωt, y = B cos(ωt − φ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudePhase {
    pub amp_x: f64,
    pub amp_y: f64,
    pub phi: f64,
}

impl AmplitudePhase {
    /// Validates amplitudes and folds φ into (−π, π].
    pub fn new(amp_x: f64, amp_y: f64, phi: f64) -> Result<Self> {
        ensure_finite("amp_x", amp_x)?;
        ensure_finite("amp_y", amp_y)?;
        ensure_finite("phi", phi)?;
        if amp_x < 0.0 || amp_y < 0.0 {
            return Err(Error::InvalidParameter {
                name: "amp_x, amp_y",
                reason: "amplitudes must be >= 0".into(),
            });
        }
        let mut p = phi.rem_euclid(2.0 * PI);
        if p > PI {
            p -= 2.0 * PI;
        }
        Ok(Self {
            amp_x,
            amp_y,
            phi: p,
        })
    }
}

fn normalize_half_turn(psi: f64) -> f64 {
    let p = psi.rem_euclid(PI);
    if p >= PI {
        0.0
    } else {
        p
    }
}

pub fn stokes_from_ellipse(e: &EllipseGeometry, length: f64) -> Result<StokesState> {
    ensure_positive("length", length)?;
    let e = EllipseGeometry::new(e.a, e.b, e.psi, e.handedness)?;
    let l2 = length * length;
    let d = (e.a * e.a - e.b * e.b) / l2;
    let (s, c) = (2.0 * e.psi).sin_cos();
    Ok(StokesState::new(
        d * c,
        d * s,
        2.0 * e.a * e.signed_b() / l2,
    ))
}

pub fn stokes_from_amplitudes(p: &AmplitudePhase, length: f64) -> Result<StokesState> {
    ensure_positive("length", length)?;
    let p = AmplitudePhase::new(p.amp_x, p.amp_y, p.phi)?;
    let l2 = length * length;
    let ab = 2.0 * p.amp_x * p.amp_y / l2;
    let (s, c) = p.phi.sin_cos();
    Ok(StokesState::new(
        (p.amp_x * p.amp_x - p.amp_y * p.amp_y) / l2,
        ab * c,
        ab * s,
    ))
}

pub fn ellipse_from_stokes(s: StokesState, length: f64) -> Result<EllipseGeometry> {
    ensure_positive("length", length)?;
    if !s.is_finite() {
        return Err(Error::InvalidParameter {
            name: "stokes",
            reason: "non-finite component".into(),
        });
    }
    let s0 = s.s0();
    if s0 == 0.0 {
        return Err(Error::DegenerateOrbit);
    }
    let lin = s.s1.hypot(s.s2);
    let l2 = length * length;
    let a = (0.5 * (s0 + lin) * l2).sqrt();
    // from s3 = 2ab/L², free of the cancellation in s0 - lin
    let b = 0.5 * s.s3.abs() * l2 / a;
    let psi = if lin == 0.0 {
        0.0
    } else {
        normalize_half_turn(0.5 * s.s2.atan2(s.s1))
    };
    let handedness = if s.s3 < 0.0 {
        Handedness::Clockwise
    } else {
        Handedness::Counterclockwise
    };
    Ok(EllipseGeometry {
        a,
        b: b.min(a),
        psi,
        handedness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub energy: f64,
    pub angular_momentum: f64,
}

pub fn observables(s: StokesState, c: &PendulumConfig) -> Result<Observables> {
    c.validate()?;
    let scale = 0.5 * c.mass * c.length * c.length;
    Ok(Observables {
        energy: scale * c.omega * c.omega * s.s0(),
        angular_momentum: scale * c.omega * s.s3,
    })
}

/// Planar position and velocity of the bob.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarSample {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

pub const MIN_SAMPLES_PER_PERIOD: f64 = 16.0;

/// One-period Stokes average of a uniformly sampled orbit.
///
/// `samples[i]` is taken at time `i * dt`. The average covers exactly
/// `[0, period]` with the trapezoid rule; a fractional last interval is
/// closed by linear interpolation.
pub fn stokes_from_trajectory(
    samples: &[PlanarSample],
    dt: f64,
    period: f64,
    length: f64,
) -> Result<StokesState> {
    ensure_positive("dt", dt)?;
    ensure_positive("period", period)?;
    ensure_positive("length", length)?;
    if period / dt < MIN_SAMPLES_PER_PERIOD - 1e-9 {
        return Err(Error::Window(format!(
            "{:.2} samples per period, need at least {MIN_SAMPLES_PER_PERIOD}",
            period / dt
        )));
    }
    let steps = period / dt;
    let mut n_full = steps.floor() as usize;
    let mut rem = period - n_full as f64 * dt;
    if rem <= 1e-9 * dt {
        rem = 0.0;
    } else if dt - rem <= 1e-9 * dt {
        n_full += 1;
        rem = 0.0;
    }
    let needed = if rem > 0.0 { n_full + 2 } else { n_full + 1 };
    if samples.len() < needed {
        return Err(Error::Window(format!(
            "{} samples span less than one period ({needed} needed)",
            samples.len()
        )));
    }

    // integrands: x², y², xy, x ẏ − y ẋ
    let f = |p: &PlanarSample| [p.x * p.x, p.y * p.y, p.x * p.y, p.x * p.vy - p.y * p.vx];
    let mut acc = [0.0f64; 4];
    for i in 0..n_full {
        let (u, v) = (f(&samples[i]), f(&samples[i + 1]));
        for k in 0..4 {
            acc[k] += 0.5 * (u[k] + v[k]) * dt;
        }
    }
    if rem > 0.0 {
        let (u, v) = (f(&samples[n_full]), f(&samples[n_full + 1]));
        let w = rem / dt;
        for k in 0..4 {
            let end = u[k] + w * (v[k] - u[k]);
            acc[k] += 0.5 * (u[k] + end) * rem;
        }
    }
    let [xx, yy, xy, lz] = acc.map(|a| a / period);
    let l2 = length * length;
    let det = (xx * yy - xy * xy).max(0.0);
    let sign = if lz < 0.0 { -1.0 } else { 1.0 };
    Ok(StokesState::new(
        2.0 * (xx - yy) / l2,
        4.0 * xy / l2,
        sign * 4.0 * det.sqrt() / l2,
    ))
}
