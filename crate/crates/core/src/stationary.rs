//! Stationary points of the combined flow, their stability, the critical
//! radius and the separatrix region classifier.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::config::PendulumConfig;
use crate::dynamics::{hamiltonian_h, rhs_conservative};
use crate::error::{ensure_positive, Error, Result};
use crate::stokes::StokesState;

/// Relative half-width of the band around the critical radius where the
/// merge is not resolved.
pub const CRITICAL_BAND: f64 = 0.01;
/// Stationarity tolerance, in units of ω s0².
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Real-part threshold for a center, in units of ω.
pub const CENTER_TOL: f64 = 1e-8;
/// Magnitude threshold for a degenerate point, in units of ω.
pub const DEGENERATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    StableCenter,
    UnstableSaddle,
    Degenerate,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stability::StableCenter => "stable-center",
            Stability::UnstableSaddle => "unstable-saddle",
            Stability::Degenerate => "degenerate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    TwoPoint,
    Critical,
    FourPoint,
    SymmetricDegenerate,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::TwoPoint => "two-point",
            Regime::Critical => "critical",
            Regime::FourPoint => "four-point",
            Regime::SymmetricDegenerate => "symmetric-degenerate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub state: StokesState,
    pub stability: Stability,
    /// max |rhs| at the point.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarySet {
    pub s0: f64,
    pub points: Vec<StationaryPoint>,
    pub s0_crit: f64,
    /// H on the separatrix; for the symmetric pendulum this is H on the
    /// circle of degenerate points.
    pub separatrix_h: Option<f64>,
    pub regime: Regime,
}

impl StationarySet {
    pub fn count(&self, stability: Stability) -> usize {
        self.points.iter().filter(|p| p.stability == stability).count()
    }

    pub fn saddle(&self) -> Option<&StationaryPoint> {
        self.points
            .iter()
            .find(|p| p.stability == Stability::UnstableSaddle)
    }
}

/// S0crit = (8/3) [|Δω|^{2/3} + |2Ω|^{2/3}]^{3/2} / ω.
pub fn critical_s0(c: &PendulumConfig) -> f64 {
    if c.delta_omega == 0.0 {
        return 16.0 * c.omega_rot.abs() / (3.0 * c.omega);
    }
    if c.omega_rot == 0.0 {
        return 8.0 * c.delta_omega.abs() / (3.0 * c.omega);
    }
    let a = c.delta_omega.abs().powf(2.0 / 3.0);
    let b = (2.0 * c.omega_rot).abs().powf(2.0 / 3.0);
    8.0 / 3.0 * (a + b).powf(1.5) / c.omega
}

fn residual(s: StokesState, c: &PendulumConfig) -> f64 {
    rhs_conservative(s, c).max_abs()
}

fn residual_tolerance(c: &PendulumConfig, s0: f64) -> f64 {
    RESIDUAL_TOL * c.omega * s0 * s0
}

/// Monic quartic x⁴ + c3 x³ + c2 x² + c1 x + c0 in s1, obtained from
/// s3 (k s1 − Δω) = 2Ω s1 and s1² + s3² = s0² with k = 3ω/8.
/// Returned as [c0, c1, c2, c3].
pub fn quartic_coefficients(c: &PendulumConfig, s0: f64) -> [f64; 4] {
    let k = c.twist();
    let p = c.delta_omega / k;
    let q = 2.0 * c.omega_rot / k;
    let s02 = s0 * s0;
    [-p * p * s02, 2.0 * p * s02, p * p + q * q - s02, -2.0 * p]
}

fn quartic_eval(coef: &[f64; 4], x: f64) -> (f64, f64) {
    let [c0, c1, c2, c3] = *coef;
    let p = (((x + c3) * x + c2) * x + c1) * x + c0;
    let dp = ((4.0 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1;
    (p, dp)
}

fn quartic_roots(coef: &[f64; 4]) -> Vec<nalgebra::Complex<f64>> {
    let [c0, c1, c2, c3] = *coef;
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0, 0.0, 0.0, -c0,
        1.0, 0.0, 0.0, -c1,
        0.0, 1.0, 0.0, -c2,
        0.0, 0.0, 1.0, -c3,
    );
    m.complex_eigenvalues().iter().copied().collect()
}

/// Newton on the planar system ds2/dt = 0, s1² + s3² = s0² (s2 = 0).
fn polish_point(c: &PendulumConfig, s0: f64, mut s1: f64, mut s3: f64) -> (f64, f64) {
    let k = c.twist();
    let (dw, w2) = (c.delta_omega, 2.0 * c.omega_rot);
    for _ in 0..30 {
        let f1 = -w2 * s1 - dw * s3 + k * s1 * s3;
        let f2 = s1 * s1 + s3 * s3 - s0 * s0;
        let (a, b) = (-w2 + k * s3, -dw + k * s1);
        let (cc, d) = (2.0 * s1, 2.0 * s3);
        let det = a * d - b * cc;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let d1 = (d * f1 - b * f2) / det;
        let d3 = (a * f2 - cc * f1) / det;
        let (n1, n3) = (s1 - d1, s3 - d3);
        let better = (-w2 * n1 - dw * n3 + k * n1 * n3).abs() <= f1.abs()
            || (n1 * n1 + n3 * n3 - s0 * s0).abs() < f2.abs();
        if !better {
            break;
        }
        s1 = n1;
        s3 = n3;
        if d1.abs().max(d3.abs()) <= 1e-16 * s0 {
            break;
        }
    }
    (s1, s3)
}

/// Candidate points in the generic case (Δω ≠ 0, Ω ≠ 0).
fn generic_candidates(c: &PendulumConfig, s0: f64) -> Vec<StokesState> {
    let coef = quartic_coefficients(c, s0);
    let k = c.twist();
    let mut out: Vec<StokesState> = Vec::new();
    for z in quartic_roots(&coef) {
        if z.im.abs() > 1e-6 * s0.max(1e-300) {
            continue;
        }
        let mut x = z.re;
        let (p, dp) = quartic_eval(&coef, x);
        if dp != 0.0 {
            let xn = x - p / dp;
            if quartic_eval(&coef, xn).0.abs() <= p.abs() {
                x = xn;
            }
        }
        if x.abs() > s0 * (1.0 + 1e-6) {
            continue;
        }
        let x = x.clamp(-s0, s0);
        let mag = (s0 * s0 - x * x).max(0.0).sqrt();
        let ratio = 2.0 * c.omega_rot * x / (k * x - c.delta_omega);
        let guesses = [ratio, mag.copysign(ratio)];
        let best = guesses
            .iter()
            .filter(|g| g.is_finite())
            .map(|&g| {
                let (a, b) = polish_point(c, s0, x, g);
                StokesState::new(a, 0.0, b)
            })
            .min_by(|a, b| point_error(*a, c, s0).total_cmp(&point_error(*b, c, s0)));
        if let Some(p) = best {
            if !out.iter().any(|q| (*q - p).max_abs() <= 1e-7 * s0) {
                out.push(p);
            }
        }
    }
    out
}

fn point_error(p: StokesState, c: &PendulumConfig, s0: f64) -> f64 {
    residual(p, c).max(c.omega * (p.s0() - s0).abs() * s0)
}

/// Number of isolated stationary points for radius `s0`, without the
/// critical-band smoothing. The symmetric circle counts as one.
pub fn stationary_count(c: &PendulumConfig, s0: f64) -> usize {
    let k = c.twist();
    if c.delta_omega == 0.0 {
        return if s0 > 2.0 * c.omega_rot.abs() / k { 3 } else { 2 };
    }
    if c.omega_rot == 0.0 {
        return if s0 > c.delta_omega.abs() / k { 4 } else { 2 };
    }
    let coef = quartic_coefficients(c, s0);
    quartic_roots(&coef)
        .iter()
        .filter(|z| z.im.abs() <= 1e-9 * s0 && z.re.abs() <= s0 * (1.0 + 1e-9))
        .count()
}

pub fn stationary_points(c: &PendulumConfig, s0: f64) -> Result<StationarySet> {
    c.validate()?;
    ensure_positive("s0", s0)?;
    let k = c.twist();
    let s0_crit = critical_s0(c);
    let near_critical = s0_crit > 0.0 && (s0 / s0_crit - 1.0).abs() <= CRITICAL_BAND;
    let tol = residual_tolerance(c, s0);

    let mut degenerate_circle = None;
    let candidates: Vec<StokesState> = if c.delta_omega == 0.0 {
        let mut v = vec![StokesState::new(0.0, 0.0, -s0), StokesState::new(0.0, 0.0, s0)];
        let s3c = 2.0 * c.omega_rot / k;
        if s0 > s3c.abs() {
            let p = StokesState::new((s0 * s0 - s3c * s3c).sqrt(), 0.0, s3c);
            degenerate_circle = Some(p);
            v.push(p);
        }
        v
    } else if c.omega_rot == 0.0 {
        let mut v = vec![StokesState::new(-s0, 0.0, 0.0), StokesState::new(s0, 0.0, 0.0)];
        let s1 = c.delta_omega / k;
        if s0 > s1.abs() {
            let s3 = (s0 * s0 - s1 * s1).sqrt();
            v.push(StokesState::new(s1, 0.0, -s3));
            v.push(StokesState::new(s1, 0.0, s3));
        }
        v
    } else {
        generic_candidates(c, s0)
    };

    let mut points = Vec::with_capacity(candidates.len());
    for p in candidates {
        let r = residual(p, c);
        if r > tol {
            if near_critical {
                continue;
            }
            return Err(Error::RootPolish { residual: r });
        }
        let stability = if Some(p) == degenerate_circle {
            Stability::Degenerate
        } else {
            classify_unchecked(p, c)
        };
        points.push(StationaryPoint {
            state: p,
            stability,
            residual: r,
        });
    }
    points.sort_by(|a, b| {
        (a.state.s1, a.state.s3)
            .partial_cmp(&(b.state.s1, b.state.s3))
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let regime = if near_critical {
        Regime::Critical
    } else if degenerate_circle.is_some() {
        Regime::SymmetricDegenerate
    } else if points.len() >= 4 {
        Regime::FourPoint
    } else {
        Regime::TwoPoint
    };
    let separatrix_h = match (degenerate_circle, regime) {
        (Some(p), _) => Some(hamiltonian_h(p, c)),
        (None, Regime::TwoPoint) => None,
        _ => points
            .iter()
            .find(|p| p.stability == Stability::UnstableSaddle)
            .map(|p| hamiltonian_h(p.state, c)),
    };
    Ok(StationarySet {
        s0,
        points,
        s0_crit,
        separatrix_h,
        regime,
    })
}

fn jacobian(p: StokesState, c: &PendulumConfig) -> [[f64; 3]; 3] {
    let k = c.twist();
    let w2 = 2.0 * c.omega_rot;
    let dw = c.delta_omega;
    [
        [0.0, w2 - k * p.s3, -k * p.s2],
        [-w2 + k * p.s3, 0.0, -dw + k * p.s1],
        [0.0, dw, 0.0],
    ]
}

fn tangent_basis(p: StokesState) -> (StokesState, StokesState) {
    let n = p * (1.0 / p.norm());
    let axis = if n.s1.abs() <= n.s2.abs() && n.s1.abs() <= n.s3.abs() {
        StokesState::new(1.0, 0.0, 0.0)
    } else if n.s2.abs() <= n.s3.abs() {
        StokesState::new(0.0, 1.0, 0.0)
    } else {
        StokesState::new(0.0, 0.0, 1.0)
    };
    let u1 = axis.cross(n);
    let u1 = u1 * (1.0 / u1.norm());
    (u1, n.cross(u1))
}

/// Eigenvalues of the Jacobian restricted to the tangent plane, as
/// (real parts, imaginary magnitude).
pub fn tangent_eigenvalues(p: StokesState, c: &PendulumConfig) -> ([f64; 2], f64) {
    let j = jacobian(p, c);
    let (u1, u2) = tangent_basis(p);
    let apply = |u: StokesState| {
        let v = u.to_array();
        StokesState::from_array([0, 1, 2].map(|r| (0..3).map(|q| j[r][q] * v[q]).sum()))
    };
    let (ju1, ju2) = (apply(u1), apply(u2));
    let m = [[u1.dot(ju1), u1.dot(ju2)], [u2.dot(ju1), u2.dot(ju2)]];
    let half_tr = 0.5 * (m[0][0] + m[1][1]);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = half_tr * half_tr - det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        ([half_tr - r, half_tr + r], 0.0)
    } else {
        ([half_tr, half_tr], (-disc).sqrt())
    }
}

fn classify_unchecked(p: StokesState, c: &PendulumConfig) -> Stability {
    if p.norm() == 0.0 {
        return Stability::Degenerate;
    }
    let (re, im) = tangent_eigenvalues(p, c);
    let mag = re[0].abs().max(re[1].abs()).max(im);
    if mag < DEGENERATE_TOL * c.omega {
        Stability::Degenerate
    } else if im > 0.0 && re[0].abs() < CENTER_TOL * c.omega {
        Stability::StableCenter
    } else if im == 0.0 && re[0] * re[1] < 0.0 {
        Stability::UnstableSaddle
    } else {
        Stability::Degenerate
    }
}

/// Stability of a stationary point from the tangent-plane Jacobian.
pub fn classify_stability(p: StokesState, c: &PendulumConfig) -> Result<Stability> {
    c.validate()?;
    let s0 = p.s0();
    let r = residual(p, c);
    let tol = residual_tolerance(c, s0);
    if r > tol {
        return Err(Error::NotStationary {
            residual: r,
            tolerance: tol,
        });
    }
    Ok(classify_unchecked(p, c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    /// Lobe whose states have s3 above the saddle.
    UpperLobe,
    /// Lobe whose states have s3 below the saddle.
    LowerLobe,
    /// The single region on the other side of the separatrix.
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionLabel {
    pub region: Region,
    pub on_boundary: bool,
}

/// Maps on-sphere states to the three circulation regions cut out by the
/// separatrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionClassifier {
    pub separatrix_h: f64,
    pub saddle: StokesState,
    /// +1 if the two lobes lie above the separatrix level, −1 if below.
    pub lobe_side: f64,
    h_scale: f64,
    config: PendulumConfig,
}

impl RegionClassifier {
    pub fn classify(&self, s: StokesState) -> RegionLabel {
        let dh = hamiltonian_h(s, &self.config) - self.separatrix_h;
        let region = if dh * self.lobe_side > 0.0 {
            if s.s3 > self.saddle.s3 {
                Region::UpperLobe
            } else {
                Region::LowerLobe
            }
        } else {
            Region::Outer
        };
        RegionLabel {
            region,
            on_boundary: dh.abs() <= 1e-10 * self.h_scale,
        }
    }
}

pub fn separatrix_and_regions(set: &StationarySet, c: &PendulumConfig) -> Result<RegionClassifier> {
    if set.regime != Regime::FourPoint {
        return Err(Error::Regime(set.regime.to_string()));
    }
    let saddle = set
        .saddle()
        .ok_or_else(|| Error::Regime("four-point set without a saddle".into()))?
        .state;
    let h_sep = hamiltonian_h(saddle, c);
    let sides: Vec<f64> = set
        .points
        .iter()
        .filter(|p| p.stability == Stability::StableCenter)
        .map(|p| (hamiltonian_h(p.state, c) - h_sep).signum())
        .collect();
    let above = sides.iter().filter(|s| **s > 0.0).count();
    let below = sides.iter().filter(|s| **s < 0.0).count();
    let lobe_side = match (above, below) {
        (2, 1) => 1.0,
        (1, 2) => -1.0,
        _ => return Err(Error::Regime("centers do not straddle the separatrix".into())),
    };
    let s0 = set.s0;
    let h_scale = (c.delta_omega.abs() + 2.0 * c.omega_rot.abs()) * s0 + 0.5 * c.twist() * s0 * s0;
    Ok(RegionClassifier {
        separatrix_h: h_sep,
        saddle,
        lobe_side,
        h_scale,
        config: *c,
    })
}

/// Curvature radius of the parabola H = const in the (s1, s3) plane at
/// height `s3`.
pub fn parabola_curvature_radius(s3: f64, c: &PendulumConfig) -> Result<f64> {
    if c.delta_omega == 0.0 {
        return Err(Error::InvalidParameter {
            name: "delta_omega",
            reason: "the parabolic cylinder degenerates to planes when delta_omega = 0".into(),
        });
    }
    let dw = c.delta_omega;
    let slope = 2.0 * c.omega_rot / dw - 3.0 * c.omega / (8.0 * dw) * s3;
    Ok(8.0 * dw.abs() / (3.0 * c.omega) * (1.0 + slope * slope).powf(1.5))
}

/// Height s3 where the parabola touches the critical sphere.
pub fn critical_contact_s3(c: &PendulumConfig) -> Result<f64> {
    if c.delta_omega == 0.0 {
        return Err(Error::InvalidParameter {
            name: "delta_omega",
            reason: "no contact point when delta_omega = 0".into(),
        });
    }
    let r = 2.0 * c.omega_rot / c.delta_omega;
    Ok(8.0 * c.delta_omega / (3.0 * c.omega) * (r + r.cbrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dw: f64, w: f64) -> PendulumConfig {
        PendulumConfig::new(1.0).with_delta_omega(dw).with_rotation(w)
    }

    #[test]
    fn symmetric_poles() {
        let set = stationary_points(&cfg(0.0, 0.5), 1.0).unwrap();
        assert_eq!(set.points.len(), 2);
        assert_eq!(set.regime, Regime::TwoPoint);
        assert!(set.points.iter().all(|p| p.stability == Stability::StableCenter));
        assert!(set.separatrix_h.is_none());
    }

    #[test]
    fn non_rotating_four_points() {
        let c = cfg(0.3, 0.0);
        let set = stationary_points(&c, 1.0).unwrap();
        assert_eq!(set.regime, Regime::FourPoint);
        assert_eq!(set.points.len(), 4);
        let saddle = set.saddle().unwrap().state;
        assert!((saddle - StokesState::new(1.0, 0.0, 0.0)).max_abs() < 1e-15);
        assert_eq!(set.count(Stability::UnstableSaddle), 1);
        for s3 in [0.6, -0.6] {
            assert!(set
                .points
                .iter()
                .any(|p| (p.state - StokesState::new(0.8, 0.0, s3)).max_abs() < 1e-12
                    && p.stability == Stability::StableCenter));
        }
        assert!((set.separatrix_h.unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn non_rotating_below_critical() {
        let set = stationary_points(&cfg(0.3, 0.0), 0.5).unwrap();
        assert_eq!(set.regime, Regime::TwoPoint);
        assert_eq!(set.points.len(), 2);
        assert!(set.points.iter().all(|p| p.stability == Stability::StableCenter));
    }

    #[test]
    fn symmetric_circle() {
        let c = cfg(0.0, 0.05);
        let set = stationary_points(&c, 1.0).unwrap();
        assert_eq!(set.regime, Regime::SymmetricDegenerate);
        let circ = set.points.iter().find(|p| p.stability == Stability::Degenerate).unwrap();
        assert!((circ.state.s3 - 16.0 * 0.05 / 3.0).abs() < 1e-15);
        let s3 = circ.state.s3;
        assert!((set.separatrix_h.unwrap() - (-0.1 * s3 + 3.0 / 16.0 * s3 * s3)).abs() < 1e-15);
    }

    #[test]
    fn critical_special_cases() {
        assert_eq!(critical_s0(&cfg(0.0, 0.3)), 16.0 * 0.3 / 3.0);
        assert_eq!(critical_s0(&cfg(0.3, 0.0)), 8.0 * 0.3 / 3.0);
        // the general formula approaches the special cases continuously
        let near = critical_s0(&cfg(1e-12, 0.3));
        assert!((near / 1.6 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn generic_points_are_stationary() {
        let c = cfg(0.02, 0.01);
        for s0 in [0.05, 0.1, 0.3, 1.0] {
            let set = stationary_points(&c, s0).unwrap();
            for p in &set.points {
                assert!(p.residual < 1e-10 * s0 * s0);
                assert_eq!(p.state.s2, 0.0);
                assert!((p.state.s0() - s0).abs() < 1e-12 * s0);
            }
            if set.regime == Regime::FourPoint {
                assert_eq!(set.count(Stability::UnstableSaddle), 1);
            } else {
                assert_eq!(set.count(Stability::StableCenter), set.points.len());
            }
        }
    }

    #[test]
    fn curvature_examples() {
        let c = cfg(0.3, 0.15);
        let r = parabola_curvature_radius(16.0 * 0.15 / 3.0, &c).unwrap();
        assert!((r - 0.8).abs() < 1e-15);
        assert!((parabola_curvature_radius(0.0, &cfg(0.3, 0.0)).unwrap() - 0.8).abs() < 1e-15);
        let s3 = critical_contact_s3(&c).unwrap();
        assert!((s3 - 1.6).abs() < 1e-15);
        let r = parabola_curvature_radius(s3, &c).unwrap();
        assert!((r / critical_s0(&c) - 1.0).abs() < 1e-12);
        assert_eq!(critical_contact_s3(&cfg(0.3, 0.0)).unwrap(), 0.0);
        assert!(parabola_curvature_radius(0.0, &cfg(0.0, 0.1)).is_err());
        assert!(critical_contact_s3(&cfg(0.0, 0.1)).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = cfg(0.0, 0.1);
        assert_eq!(classify_stability(StokesState::new(0.0, 0.0, 0.2), &c).unwrap(), Stability::StableCenter);
        let c = cfg(0.3, 0.0);
        assert_eq!(classify_stability(StokesState::new(1.0, 0.0, 0.0), &c).unwrap(), Stability::UnstableSaddle);
        assert_eq!(classify_stability(StokesState::new(-1.0, 0.0, 0.0), &c).unwrap(), Stability::StableCenter);
        assert!(matches!(
            classify_stability(StokesState::new(0.5, 0.5, 0.0), &c),
            Err(Error::NotStationary { .. })
        ));
    }

    #[test]
    fn regions_need_four_points() {
        let c = cfg(0.3, 0.0);
        let set = stationary_points(&c, 0.5).unwrap();
        assert!(matches!(separatrix_and_regions(&set, &c), Err(Error::Regime(_))));
        let set = stationary_points(&c, 1.0).unwrap();
        let rc = separatrix_and_regions(&set, &c).unwrap();
        let labels: Vec<_> = set
            .points
            .iter()
            .filter(|p| p.stability == Stability::StableCenter)
            .map(|p| rc.classify(p.state).region)
            .collect();
        assert_eq!(labels.len(), 3);
        assert!(labels.contains(&Region::UpperLobe));
        assert!(labels.contains(&Region::LowerLobe));
        assert!(labels.contains(&Region::Outer));
        assert!(rc.classify(set.saddle().unwrap().state).on_boundary);
    }
}
