//! Run configuration: built-in defaults, overlaid by a TOML file, overlaid
//! by `--set section.key=value` pairs.

use std::path::Path;

use anyhow::{bail, Context, Result};
use foucault::PendulumConfig;
use serde::{Deserialize, Serialize};

use crate::InputError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub pendulum: PendulumSection,
    pub simulate: SimulateSection,
    pub stationary: StationarySection,
    pub critical: CriticalSection,
    pub spectrum: SpectrumSection,
    pub dos: DosSection,
    pub zeno: ZenoSection,
    pub squeeze: SqueezeSection,
    pub validate: ValidateSection,
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PendulumSection {
    pub omega: f64,
    pub delta_omega: f64,
    pub omega_rot: f64,
    pub gamma_x: f64,
    pub gamma_y: f64,
    pub length: f64,
    pub mass: f64,
}

impl Default for PendulumSection {
    fn default() -> Self {
        Self {
            omega: 1.0,
            delta_omega: 0.02,
            omega_rot: 0.01,
            gamma_x: 0.0,
            gamma_y: 0.0,
            length: 1.0,
            mass: 1.0,
        }
    }
}

impl PendulumSection {
    pub fn config(&self) -> PendulumConfig {
        PendulumConfig::new(self.omega)
            .with_delta_omega(self.delta_omega)
            .with_rotation(self.omega_rot)
            .with_damping(self.gamma_x, self.gamma_y)
            .with_length(self.length)
            .with_mass(self.mass)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSection {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub flow: String,
    pub t_end: f64,
    pub dt: f64,
}

impl Default for SimulateSection {
    fn default() -> Self {
        Self {
            s1: 0.1,
            s2: 0.0,
            s3: 0.05,
            flow: "combined".into(),
            t_end: 1000.0,
            dt: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StationarySection {
    pub s0: f64,
}

impl Default for StationarySection {
    fn default() -> Self {
        Self { s0: 0.3 }
    }
}

/// Grid over (Δω, Ω) in [0, max] with `steps` points per axis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalSection {
    pub delta_omega_max: f64,
    pub omega_rot_max: f64,
    pub steps: usize,
}

impl Default for CriticalSection {
    fn default() -> Self {
        Self {
            delta_omega_max: 0.05,
            omega_rot_max: 0.05,
            steps: 26,
        }
    }
}

/// Eigenvalues over a Δω grid. Rates are in units of u = (3/16) ω N.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    pub n: u32,
    pub from_u: f64,
    pub to_u: f64,
    pub steps: usize,
    pub omega_rot_u: f64,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            n: 50,
            from_u: 0.0,
            to_u: 1.5,
            steps: 61,
            omega_rot_u: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DosSection {
    pub n: u32,
    pub delta_omega_u: f64,
    pub omega_rot_u: f64,
    pub n_bins: usize,
    pub n_samples: usize,
}

impl Default for DosSection {
    fn default() -> Self {
        Self {
            n: 200,
            delta_omega_u: 0.5,
            omega_rot_u: 0.0,
            n_bins: 40,
            n_samples: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZenoSection {
    pub max_filters: u32,
    pub omega_rot: f64,
    pub gamma_filter: f64,
    pub filter_duration: f64,
    pub s0: f64,
}

impl Default for ZenoSection {
    fn default() -> Self {
        let p = foucault::scenarios::ZenoProtocol::default();
        Self {
            max_filters: 32,
            omega_rot: p.omega_rot,
            gamma_filter: p.gamma_filter,
            filter_duration: p.filter_duration,
            s0: p.s0,
        }
    }
}

/// A missing `tau` means the geometric middle of the usable window.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SqueezeSection {
    pub n_members: usize,
    pub s0: f64,
    pub spread: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
}

impl Default for SqueezeSection {
    fn default() -> Self {
        Self {
            n_members: 10_000,
            s0: 0.2,
            spread: 0.002,
            tau: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateSection {
    pub s0: Vec<f64>,
    pub delta_omega: Vec<f64>,
    pub omega_rot: Vec<f64>,
    pub periods: f64,
    pub tolerance: f64,
}

impl Default for ValidateSection {
    fn default() -> Self {
        Self {
            s0: vec![0.05, 0.1, 0.2, 0.3],
            delta_omega: vec![0.0, 0.01, 0.02],
            omega_rot: vec![0.0, 0.01, 0.02],
            periods: 50.0,
            tolerance: 0.05,
        }
    }
}

/// Spectra plus both densities over a Δω grid (units of u).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub n: u32,
    pub from_u: f64,
    pub to_u: f64,
    pub steps: usize,
    pub omega_rot_u: f64,
    pub n_bins: usize,
    pub n_samples: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            n: 50,
            from_u: 0.0,
            to_u: 1.5,
            steps: 16,
            omega_rot_u: 0.2,
            n_bins: 40,
            n_samples: 200_000,
        }
    }
}

/// Evenly spaced grid including both ends.
pub fn linspace(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        bail!(InputError("grid needs at least one point".into()));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    Ok((0..steps)
        .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Parse a `--set` value as a TOML literal, falling back to a bare string.
fn parse_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Config> {
    let mut table = toml::Table::try_from(Config::default()).context("serializing defaults")?;
    if let Some(p) = path {
        let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
        let file: toml::Table = text
            .parse()
            .map_err(|e| InputError(format!("config {}: {e}", p.display())))?;
        merge(&mut table, file);
    }
    for item in overrides {
        let Some((key, raw)) = item.split_once('=') else {
            bail!(InputError(format!("--set expects section.key=value, got `{item}`")));
        };
        let Some((section, field)) = key.trim().split_once('.') else {
            bail!(InputError(format!("--set key must be section.key, got `{key}`")));
        };
        let mut inner = toml::Table::new();
        inner.insert(field.to_string(), parse_value(raw.trim()));
        let mut outer = toml::Table::new();
        outer.insert(section.to_string(), toml::Value::Table(inner));
        merge(&mut table, outer);
    }
    toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| InputError(format!("configuration: {e}")).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply_in_order() {
        let c = load(None, &["pendulum.omega=2.5".into(), "simulate.flow=coriolis".into()]).unwrap();
        assert_eq!(c.pendulum.omega, 2.5);
        assert_eq!(c.simulate.flow, "coriolis");
        assert_eq!(c.pendulum.delta_omega, 0.02);
        let c = load(None, &["validate.s0=[0.1, 0.2]".into()]).unwrap();
        assert_eq!(c.validate.s0, vec![0.1, 0.2]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(load(None, &["pendulum.omgea=1".into()]).is_err());
        assert!(load(None, &["nosection".into()]).is_err());
        assert!(load(None, &["pendulum.omega=fast".into()]).is_err());
    }

    #[test]
    fn grid() {
        assert_eq!(linspace(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 5.0, 1).unwrap(), vec![2.0]);
        assert!(linspace(0.0, 1.0, 0).is_err());
    }
}
