use serde::{Deserialize, Serialize};

use crate::types::DEFAULT_TIP_DEFLECTION_LIMIT;
use crate::wrist::{tip_deflection, TipDeflection};
use crate::{Error, Gripper, Result, WristModel, STANDARD_GRAVITY};

/// Where the object's weight acts relative to the wrist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadCase {
    /// Lever arm in m; `None` puts the object at the fingertip.
    pub lever: Option<f64>,
    /// Gripper inclination below horizontal, rad. Zero is a horizontal hold.
    pub hold_angle: f64,
    /// Largest acceptable fingertip deflection, m.
    pub deflection_limit: f64,
}

impl Default for LoadCase {
    fn default() -> Self {
        LoadCase {
            lever: None,
            hold_angle: 0.0,
            deflection_limit: DEFAULT_TIP_DEFLECTION_LIMIT,
        }
    }
}

impl LoadCase {
    fn moment_arm(&self, gripper: &Gripper) -> f64 {
        self.lever.unwrap_or(gripper.length) * self.hold_angle.cos()
    }

    fn check(&self) -> Result<()> {
        if let Some(l) = self.lever {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::invalid("lever", l, "must be positive"));
            }
        }
        if !(self.hold_angle.abs() < std::f64::consts::FRAC_PI_2) {
            return Err(Error::invalid(
                "hold_angle",
                self.hold_angle,
                "must lie in (-90, 90) deg",
            ));
        }
        if !(self.deflection_limit > 0.0) {
            return Err(Error::invalid(
                "deflection_limit",
                self.deflection_limit,
                "must be positive",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickReport {
    pub mass: f64,
    pub wrist_torque: f64,
    pub buckled: bool,
    pub tip_deflection: TipDeflection,
    pub pass: bool,
}

pub fn check_pick_place(
    model: &WristModel,
    gripper: &Gripper,
    object_mass: f64,
    load: &LoadCase,
) -> Result<PickReport> {
    if !(object_mass.is_finite() && object_mass >= 0.0) {
        return Err(Error::invalid(
            "object_mass",
            object_mass,
            "must be non-negative",
        ));
    }
    load.check()?;
    let wrist_torque = object_mass * STANDARD_GRAVITY * load.moment_arm(gripper);
    let buckled = wrist_torque >= model.buckling.torque;
    let tip = tip_deflection(model, gripper, wrist_torque);
    let pass = !buckled && tip.deflection().is_some_and(|d| d < load.deflection_limit);
    Ok(PickReport {
        mass: object_mass,
        wrist_torque,
        buckled,
        tip_deflection: tip,
        pass,
    })
}

pub fn mass_sweep(
    model: &WristModel,
    gripper: &Gripper,
    masses: &[f64],
    load: &LoadCase,
) -> Result<Vec<PickReport>> {
    masses
        .iter()
        .map(|&m| check_pick_place(model, gripper, m, load))
        .collect()
}

/// Smallest mass that buckles the wrist: `τ_b / (g·lever)`.
pub fn buckling_threshold_mass(model: &WristModel, gripper: &Gripper, load: &LoadCase) -> f64 {
    model.buckling.torque / (STANDARD_GRAVITY * load.moment_arm(gripper))
}

/// Supremum of passing masses: the smaller of the buckling threshold and the
/// mass whose pre-buckling deflection reaches the limit.
pub fn pass_threshold_mass(model: &WristModel, gripper: &Gripper, load: &LoadCase) -> f64 {
    let ratio = load.deflection_limit / gripper.length;
    let by_deflection = if ratio >= 1.0 {
        f64::INFINITY
    } else {
        model.rotational_stiffness * ratio.asin() / (STANDARD_GRAVITY * load.moment_arm(gripper))
    };
    buckling_threshold_mass(model, gripper, load).min(by_deflection)
}
