//! Rig constants for the wiping and constrained-grasp experiments, and the
//! calibration of the residual contact stiffness that the rigid baseline
//! needs to produce finite forces.

use super::{ContactScenario, Tool, WristLaw};
use crate::units::deg_to_rad;
use crate::wrist::RigidWrist;
use crate::{Error, Gripper, Result};

/// Sponge held in the gripper for wiping, N/m.
pub const SPONGE_STIFFNESS: f64 = 4000.0;
pub const SPONGE_THICKNESS: f64 = 0.005;
pub const WIPE_APPROACH_DEPTH: f64 = 0.001;
/// Hill height at which the rigid baseline reaches the safety force exactly.
/// Sits between the largest passing (14 mm) and smallest failing (15 mm) hill.
pub const WIPE_CALIBRATION_HEIGHT: f64 = 0.0145;
/// Depth at which the rigid baseline reaches the safety force exactly,
/// between the last passing (5 mm) and first failing (10 mm) depth.
pub const GRASP_CALIBRATION_DEPTH: f64 = 0.0075;

pub fn wipe_slope() -> f64 {
    deg_to_rad(30.0)
}

pub fn sponge() -> Tool {
    Tool {
        stiffness: SPONGE_STIFFNESS,
        travel: Some(SPONGE_THICKNESS),
    }
}

/// Contact stiffness for which `base` reaches `target_force` at `interference`.
pub fn calibrate_contact_stiffness(
    base: &ContactScenario,
    interference: f64,
    target_force: f64,
) -> Result<f64> {
    let force = |ln_k: f64| -> Result<f64> {
        let s = ContactScenario {
            contact_stiffness: Some(ln_k.exp()),
            ..base.clone()
        };
        Ok(s.equilibrium(interference)?.contact_force)
    };
    let (mut lo, mut hi) = (0.0_f64, 40.0_f64);
    if force(lo)? > target_force || force(hi)? < target_force {
        return Err(Error::invalid(
            "target_force",
            target_force,
            "not reachable by any contact stiffness",
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if force(mid)? < target_force {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi.exp())
}

/// Sponge plus residual contact compliance, calibrated on the rigid wrist.
pub fn wipe_scenario(
    wrist: WristLaw,
    gripper: &Gripper,
    safety_force: f64,
) -> Result<ContactScenario> {
    let base = ContactScenario {
        tool: Some(sponge()),
        safety_force,
        ..ContactScenario::new(WristLaw::Rigid(RigidWrist::default()), gripper.clone())
    };
    let k = calibrate_contact_stiffness(
        &base,
        WIPE_CALIBRATION_HEIGHT + WIPE_APPROACH_DEPTH,
        safety_force,
    )?;
    Ok(ContactScenario {
        wrist,
        contact_stiffness: Some(k),
        ..base
    })
}

/// Residual contact compliance only, calibrated on the rigid wrist.
pub fn grasp_scenario(
    wrist: WristLaw,
    gripper: &Gripper,
    safety_force: f64,
) -> Result<ContactScenario> {
    let base = ContactScenario {
        safety_force,
        ..ContactScenario::new(WristLaw::Rigid(RigidWrist::default()), gripper.clone())
    };
    let k = calibrate_contact_stiffness(&base, GRASP_CALIBRATION_DEPTH, safety_force)?;
    Ok(ContactScenario {
        wrist,
        contact_stiffness: Some(k),
        ..base
    })
}
