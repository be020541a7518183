//! Design, analysis and virtual testing of passive bimodal-stiffness robot
//! wrists built from a ring of buckling honeycomb modules.
//!
//! The crate is organised bottom-up:
//!
//! * [`types`] and [`config`] hold the domain values and the JSON schema,
//! * [`mechanics`] gives the per-module stiffness and critical load together
//!   with an independent spring-network oracle,
//! * [`wrist`] aggregates the ring into a piecewise torque–angle law,
//! * [`design`] solves for beam width and tilt that hit a buckling target,
//! * [`characterize`] extracts buckling points from measured curves and
//!   calibrates free model constants,
//! * [`sim`] runs quasi-static pressing, wiping, pick-and-place and
//!   constrained-grasp experiments.
//!
//! All quantities are SI internally (m, kg, N, N·m, rad). Millimetres and
//! degrees appear only in files and on the command line, see [`units`].

pub mod characterize;
pub mod config;
pub mod curve;
pub mod design;
mod error;
pub mod mechanics;
pub mod presets;
pub mod sim;
pub mod types;
pub mod units;
pub mod wrist;

pub use error::{Error, Result};
pub use types::{
    BucklingPoint, DesignTargets, Gripper, HoneycombGeometry, Material, ToleranceVerdict,
    TorqueDeflectionCurve,
};
pub use wrist::{TorqueLaw, WristModel};

/// Standard gravity in m/s².
pub const STANDARD_GRAVITY: f64 = 9.80665;
