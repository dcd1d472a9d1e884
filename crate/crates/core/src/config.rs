use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// Ratio above which |Δω|/ω or |Ω|/ω triggers an advisory.
pub const ADVISORY_RATIO: f64 = 0.1;

/// Physical parameters of the pendulum.
///
/// Rates are in rad/s (or 1/s for damping), length in m, mass in kg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PendulumConfig {
    /// Small-oscillation angular frequency ω.
    pub omega: f64,
    /// Frequency split Δω = ω_x − ω_y.
    pub delta_omega: f64,
    /// Frame rotation rate Ω.
    pub omega_rot: f64,
    pub gamma_x: f64,
    pub gamma_y: f64,
    pub length: f64,
    pub mass: f64,
}

impl Default for PendulumConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            delta_omega: 0.0,
            omega_rot: 0.0,
            gamma_x: 0.0,
            gamma_y: 0.0,
            length: 1.0,
            mass: 1.0,
        }
    }
}

impl PendulumConfig {
    pub fn new(omega: f64) -> Self {
        Self {
            omega,
            ..Self::default()
        }
    }

    pub fn with_delta_omega(mut self, delta_omega: f64) -> Self {
        self.delta_omega = delta_omega;
        self
    }

    pub fn with_rotation(mut self, omega_rot: f64) -> Self {
        self.omega_rot = omega_rot;
        self
    }

    pub fn with_damping(mut self, gamma_x: f64, gamma_y: f64) -> Self {
        self.gamma_x = gamma_x;
        self.gamma_y = gamma_y;
        self
    }

    pub fn with_length(mut self, length: f64) -> Self {
        self.length = length;
        self
    }

    pub fn with_mass(mut self, mass: f64) -> Self {
        self.mass = mass;
        self
    }

    /// Coefficient k = 3ω/8 of the twisting flow.
    pub fn twist(&self) -> f64 {
        0.375 * self.omega
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("omega", self.omega)?;
        ensure_positive("length", self.length)?;
        ensure_positive("mass", self.mass)?;
        ensure_finite("delta_omega", self.delta_omega)?;
        ensure_finite("omega_rot", self.omega_rot)?;
        for (name, g) in [("gamma_x", self.gamma_x), ("gamma_y", self.gamma_y)] {
            ensure_finite(name, g)?;
            if g < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be >= 0, got {g}"),
                });
            }
        }
        Ok(())
    }

    /// Soft warnings for parameters outside the slow-rate regime the
    /// reduced model assumes. Never an error.
    pub fn advisories(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.delta_omega.abs() > ADVISORY_RATIO * self.omega {
            out.push(format!(
                "|delta_omega| = {} is not small compared with omega = {}",
                self.delta_omega.abs(),
                self.omega
            ));
        }
        if self.omega_rot.abs() > ADVISORY_RATIO * self.omega {
            out.push(format!(
                "|omega_rot| = {} is not small compared with omega = {}",
                self.omega_rot.abs(),
                self.omega
            ));
        }
        out
    }
}
