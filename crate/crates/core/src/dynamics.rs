//! Reduced equations of motion on the Poincaré sphere and their RK4
//! integrator.

use serde::{Deserialize, Serialize};

use crate::config::PendulumConfig;
use crate::error::{ensure_positive, Error, Result};
use crate::stokes::{EllipseGeometry, StokesState};

/// Fraction of the inverse fastest rate allowed as a step.
pub const STEP_GUARD: f64 = 0.05;

/// Which terms of the right-hand side are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowKind {
    Anisotropy,
    Coriolis,
    Twisting,
    Combined,
    DampedCombined,
}

impl FlowKind {
    pub const ALL: [FlowKind; 5] = [
        FlowKind::Anisotropy,
        FlowKind::Coriolis,
        FlowKind::Twisting,
        FlowKind::Combined,
        FlowKind::DampedCombined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FlowKind::Anisotropy => "anisotropy",
            FlowKind::Coriolis => "coriolis",
            FlowKind::Twisting => "twisting",
            FlowKind::Combined => "combined",
            FlowKind::DampedCombined => "damped-combined",
        }
    }

    pub fn is_conservative(self) -> bool {
        self != FlowKind::DampedCombined
    }

    fn anisotropy(self) -> bool {
        matches!(self, FlowKind::Anisotropy | FlowKind::Combined | FlowKind::DampedCombined)
    }

    fn coriolis(self) -> bool {
        matches!(self, FlowKind::Coriolis | FlowKind::Combined | FlowKind::DampedCombined)
    }

    fn twisting(self) -> bool {
        matches!(self, FlowKind::Twisting | FlowKind::Combined | FlowKind::DampedCombined)
    }
}

impl std::str::FromStr for FlowKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FlowKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter {
                name: "flow",
                reason: format!("unknown flow kind `{s}`"),
            })
    }
}

/// Right-hand side restricted to the terms selected by `kind`.
pub fn rhs(kind: FlowKind, s: StokesState, c: &PendulumConfig) -> StokesState {
    let mut d = StokesState::default();
    if kind.anisotropy() {
        d.s2 -= c.delta_omega * s.s3;
        d.s3 += c.delta_omega * s.s2;
    }
    if kind.coriolis() {
        d.s1 += 2.0 * c.omega_rot * s.s2;
        d.s2 -= 2.0 * c.omega_rot * s.s1;
    }
    if kind.twisting() {
        let k = c.twist() * s.s3;
        d.s1 -= k * s.s2;
        d.s2 += k * s.s1;
    }
    if kind == FlowKind::DampedCombined {
        d = d + damping_terms(s, c);
    }
    d
}

/// Combined conservative flow: anisotropy, Coriolis and twisting.
pub fn rhs_conservative(s: StokesState, c: &PendulumConfig) -> StokesState {
    rhs(FlowKind::Combined, s, c)
}

/// Combined flow with anisotropic linear damping.
pub fn rhs_damped(s: StokesState, c: &PendulumConfig) -> StokesState {
    rhs(FlowKind::DampedCombined, s, c)
}

fn damping_terms(s: StokesState, c: &PendulumConfig) -> StokesState {
    let mean = 0.5 * (c.gamma_x + c.gamma_y);
    let diff = 0.5 * (c.gamma_x - c.gamma_y);
    StokesState::new(-diff * s.s0() - mean * s.s1, -mean * s.s2, -mean * s.s3)
}

/// Conserved quantity H = Δω s1 − 2Ω s3 + (3/16) ω s3².
pub fn hamiltonian_h(s: StokesState, c: &PendulumConfig) -> f64 {
    c.delta_omega * s.s1 - 2.0 * c.omega_rot * s.s3 + 0.5 * c.twist() * s.s3 * s.s3
}

/// Airy precession rate 3abω/(8L²), signed by the sense of motion.
pub fn airy_precession_rate(e: &EllipseGeometry, c: &PendulumConfig) -> f64 {
    3.0 * e.a * e.signed_b() * c.omega / (8.0 * c.length * c.length)
}

/// One classical Runge-Kutta step. A negative `h` integrates backwards.
pub fn rk4_step<F>(f: &F, s: StokesState, h: f64) -> StokesState
where
    F: Fn(StokesState) -> StokesState,
{
    let k1 = f(s);
    let k2 = f(s + k1 * (0.5 * h));
    let k3 = f(s + k2 * (0.5 * h));
    let k4 = f(s + k3 * h);
    s + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0)
}

/// Fastest rate active in `kind`, with its name.
pub fn limiting_rate(kind: FlowKind, s0: f64, c: &PendulumConfig) -> (f64, &'static str) {
    let mut rates = Vec::with_capacity(4);
    if kind.anisotropy() {
        rates.push((c.delta_omega.abs(), "anisotropy |delta_omega|"));
    }
    if kind.coriolis() {
        rates.push((2.0 * c.omega_rot.abs(), "coriolis 2|omega_rot|"));
    }
    if kind.twisting() {
        rates.push((c.twist() * s0, "twisting (3/8) omega s0"));
    }
    if kind == FlowKind::DampedCombined {
        rates.push((0.5 * (c.gamma_x + c.gamma_y), "damping (gamma_x + gamma_y)/2"));
    }
    rates
        .into_iter()
        .fold((0.0, "none"), |best, r| if r.0 > best.0 { r } else { best })
}

/// Largest step allowed by the stability guard (infinite if nothing moves).
pub fn max_step(kind: FlowKind, s0: f64, c: &PendulumConfig) -> f64 {
    let (rate, _) = limiting_rate(kind, s0, c);
    if rate > 0.0 {
        STEP_GUARD / rate
    } else {
        f64::INFINITY
    }
}

/// Sampled solution with its conservation monitors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StokesState>,
    pub h_values: Vec<f64>,
    pub s0_values: Vec<f64>,
}

impl Trajectory {
    fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            h_values: Vec::with_capacity(n),
            s0_values: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, t: f64, s: StokesState, c: &PendulumConfig) {
        self.times.push(t);
        self.states.push(s);
        self.h_values.push(hamiltonian_h(s, c));
        self.s0_values.push(s.s0());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> StokesState {
        *self.states.last().expect("trajectory holds the initial state")
    }

    /// max |H(t) − H(0)| / max(1, |H(0)|).
    pub fn h_drift(&self) -> f64 {
        let h0 = self.h_values[0];
        let scale = h0.abs().max(1.0);
        self.h_values.iter().map(|h| (h - h0).abs()).fold(0.0, f64::max) / scale
    }

    /// max |s0(t) − s0(0)| / s0(0).
    pub fn s0_drift(&self) -> f64 {
        let s0 = self.s0_values[0];
        if s0 == 0.0 {
            return 0.0;
        }
        self.s0_values.iter().map(|v| (v - s0).abs()).fold(0.0, f64::max) / s0
    }
}

/// Fixed-step RK4 from 0 to `t_end`; the step is `t_end / ceil(t_end / dt)`.
pub fn integrate(
    s_init: StokesState,
    c: &PendulumConfig,
    kind: FlowKind,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    c.validate()?;
    ensure_positive("dt", dt)?;
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: format!("must be finite and >= 0, got {t_end}"),
        });
    }
    if !s_init.is_finite() {
        return Err(Error::InvalidParameter {
            name: "s_init",
            reason: "non-finite component".into(),
        });
    }
    let (rate, name) = limiting_rate(kind, s_init.s0(), c);
    if rate > 0.0 && dt > STEP_GUARD / rate {
        return Err(Error::StepTooLarge {
            dt,
            limit: STEP_GUARD / rate,
            rate: name,
        });
    }
    let n = (t_end / dt).ceil() as usize;
    let h = if n == 0 { 0.0 } else { t_end / n as f64 };
    let f = |s: StokesState| rhs(kind, s, c);
    let mut traj = Trajectory::with_capacity(n + 1);
    let mut s = s_init;
    traj.push(0.0, s, c);
    for i in 1..=n {
        s = rk4_step(&f, s, h);
        traj.push(i as f64 * h, s, c);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rhs_examples() {
        let c = PendulumConfig::new(1.0);
        let s = StokesState::new(0.3, -0.2, 0.5);
        let d = rhs_conservative(s, &c);
        let k = 0.375;
        assert_eq!(d, StokesState::new(-k * s.s2 * s.s3, k * s.s1 * s.s3, 0.0));

        let c = PendulumConfig::new(1.0).with_rotation(0.5);
        let d = rhs(FlowKind::Coriolis, StokesState::new(1.0, 0.0, 0.0), &c);
        assert_eq!(d, StokesState::new(0.0, -1.0, 0.0));

        let c = PendulumConfig::new(1.0).with_delta_omega(0.02);
        let d = rhs_conservative(StokesState::new(0.0, 0.0, 0.3), &c);
        let expect = StokesState::new(0.0, -0.02 * 0.3, 0.0);
        assert!((d - expect).max_abs() < 1e-18);
    }

    #[test]
    fn damping_examples() {
        let g = 0.3;
        let c = PendulumConfig::new(1.0).with_damping(g, g);
        let s = StokesState::new(0.1, 0.2, -0.3);
        let d = damping_terms(s, &c);
        assert!((d - s * -g).max_abs() < 1e-16);

        let c = PendulumConfig::new(1.0).with_damping(g, 0.0);
        let d = rhs_damped(StokesState::new(-0.4, 0.0, 0.0), &c);
        assert!(d.max_abs() < 1e-16);
        let d = rhs_damped(StokesState::new(0.4, 0.0, 0.0), &c);
        assert!((d.s1 + g * 0.4).abs() < 1e-16);
    }

    #[test]
    fn hamiltonian_examples() {
        let c = PendulumConfig::new(1.0).with_delta_omega(0.02).with_rotation(0.01);
        assert_eq!(hamiltonian_h(StokesState::default(), &c), 0.0);
        assert!((hamiltonian_h(StokesState::new(0.3, 0.0, 0.0), &c) - 0.006).abs() < 1e-16);
        let c = PendulumConfig::new(1.0).with_rotation(0.01);
        let s3 = 16.0 * 0.01 / 3.0;
        let h = hamiltonian_h(StokesState::new(0.1, 0.0, s3), &c);
        assert!((h - (-0.02 * s3 + 3.0 / 16.0 * s3 * s3)).abs() < 1e-16);
    }

    #[test]
    fn airy_examples() {
        use crate::stokes::Handedness::*;
        let c = PendulumConfig::new(1.0);
        assert_eq!(airy_precession_rate(&EllipseGeometry::new(0.1, 0.0, 0.0, Counterclockwise).unwrap(), &c), 0.0);
        let r = airy_precession_rate(&EllipseGeometry::new(0.1, 0.1, 0.0, Counterclockwise).unwrap(), &c);
        assert!((r - 0.00375).abs() < 1e-16);
        let r = airy_precession_rate(&EllipseGeometry::new(0.2, 0.1, 0.0, Clockwise).unwrap(), &c);
        assert!((r + 0.0075).abs() < 1e-16);
    }

    #[test]
    fn coriolis_half_turn() {
        let omega_rot = 0.01;
        let c = PendulumConfig::new(1.0).with_rotation(omega_rot);
        let s0 = 0.2;
        let dt = max_step(FlowKind::Coriolis, s0, &c) * 0.5;
        let tr = integrate(StokesState::new(s0, 0.0, 0.0), &c, FlowKind::Coriolis, PI / (2.0 * omega_rot), dt).unwrap();
        assert!((tr.last() - StokesState::new(-s0, 0.0, 0.0)).max_abs() < 1e-8);
    }

    #[test]
    fn twisting_keeps_s3() {
        let c = PendulumConfig::new(1.0);
        let s = StokesState::new(0.1, 0.05, 0.08);
        let tr = integrate(s, &c, FlowKind::Twisting, 200.0, 0.1).unwrap();
        for st in &tr.states {
            assert!((st.s3 - s.s3).abs() < 1e-12);
        }
    }

    #[test]
    fn guard_names_rate() {
        let c = PendulumConfig::new(1.0).with_rotation(0.5);
        match integrate(StokesState::new(0.1, 0.0, 0.0), &c, FlowKind::Combined, 1.0, 0.2) {
            Err(Error::StepTooLarge { rate, .. }) => assert!(rate.contains("coriolis")),
            other => panic!("expected guard error, got {other:?}"),
        }
        // rates not active in the chosen flow do not restrict the step
        assert!(integrate(StokesState::new(0.1, 0.0, 0.0), &c, FlowKind::Twisting, 1.0, 0.2).is_ok());
    }

    #[test]
    fn flow_kind_parses() {
        for k in FlowKind::ALL {
            assert_eq!(k.name().parse::<FlowKind>().unwrap(), k);
        }
        assert!("bogus".parse::<FlowKind>().is_err());
    }
}
