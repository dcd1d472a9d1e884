//! Stokes-parameter model of the asymmetric Foucault pendulum.
//!
//! The state of a weakly nonlinear two-dimensional pendulum is a point on
//! the Poincaré sphere. Frequency splitting, frame rotation and the Airy
//! nonlinearity act as rotations and a twist of that sphere. The crate
//! covers the reduced flow and its stationary structure, a full spherical
//! pendulum used as reference, the matching quantum (LMG) spectra, and a
//! few composite experiments.

pub mod config;
pub mod dos;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod full;
pub mod io;
pub mod lmg;
pub mod scenarios;
pub mod stationary;
pub mod stokes;
pub mod tridiag;

pub use config::PendulumConfig;
pub use dynamics::{hamiltonian_h, integrate, FlowKind, Trajectory};
pub use error::{Error, Result};
pub use exec::Exec;
pub use stationary::{stationary_points, Regime, Stability, StationarySet};
pub use stokes::{EllipseGeometry, Handedness, StokesState};
