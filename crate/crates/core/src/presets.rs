//! Reference grippers with their design targets, chosen geometry and the
//! measured buckling points of the built wrists.
//!
//! Only the beam width and tilt differ between the three wrists; the other
//! dimensions are shared defaults. No modulus is provided here: callers pick
//! a starting material and, where needed, fit it with [`calibrated_model`].

use crate::characterize::{calibrate, Calibration, FreeParameter, ModelConstants, Observation};
use crate::units::{deg_to_rad, mm_to_m};
use crate::wrist::assemble;
use crate::{
    BucklingPoint, DesignTargets, Gripper, HoneycombGeometry, Material, Result, WristModel,
};

/// Shared module dimensions, in millimetres.
pub const DEPTH_MM: f64 = 10.0;
pub const MODULE_HEIGHT_MM: f64 = 8.0;
pub const CENTRAL_WIDTH_MM: f64 = 1.5;
pub const CENTRAL_HEIGHT_MM: f64 = 4.0;
pub const RING_RADIUS_MM: f64 = 30.0;
pub const N_MODULES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GripperPreset {
    pub name: &'static str,
    pub mass_kg: f64,
    pub length_mm: f64,
    pub target_torque_nm: f64,
    pub angle_limit_deg: f64,
    pub b_mm: f64,
    pub gamma_deg: f64,
    pub measured_angle_deg: f64,
    pub measured_torque_nm: f64,
}

pub const FRANKA: GripperPreset = GripperPreset {
    name: "Franka",
    mass_kg: 0.70,
    length_mm: 135.0,
    target_torque_nm: 0.96,
    angle_limit_deg: 4.20,
    b_mm: 0.90,
    gamma_deg: 50.0,
    measured_angle_deg: 3.40,
    measured_torque_nm: 0.95,
};

pub const ROBOTIQ: GripperPreset = GripperPreset {
    name: "Robotiq",
    mass_kg: 1.10,
    length_mm: 155.0,
    target_torque_nm: 1.325,
    angle_limit_deg: 3.70,
    b_mm: 1.00,
    gamma_deg: 20.0,
    measured_angle_deg: 3.99,
    measured_torque_nm: 1.45,
};

pub const BARIFLEX: GripperPreset = GripperPreset {
    name: "BaRiFlex",
    mass_kg: 0.75,
    length_mm: 205.0,
    target_torque_nm: 1.378,
    angle_limit_deg: 2.80,
    b_mm: 1.20,
    gamma_deg: 5.0,
    measured_angle_deg: 3.06,
    measured_torque_nm: 1.51,
};

pub const ALL: [GripperPreset; 3] = [FRANKA, ROBOTIQ, BARIFLEX];

pub fn by_name(name: &str) -> Option<GripperPreset> {
    ALL.iter()
        .copied()
        .find(|p| p.name.eq_ignore_ascii_case(name))
}

/// Shared default geometry with the given beam width and tilt.
pub fn shared_geometry(b_mm: f64, gamma_deg: f64) -> HoneycombGeometry {
    HoneycombGeometry {
        beam_width: mm_to_m(b_mm),
        central_width: mm_to_m(CENTRAL_WIDTH_MM),
        depth: mm_to_m(DEPTH_MM),
        central_height: mm_to_m(CENTRAL_HEIGHT_MM),
        module_height: mm_to_m(MODULE_HEIGHT_MM),
        tilt: deg_to_rad(gamma_deg),
        n_modules: N_MODULES,
        ring_radius: mm_to_m(RING_RADIUS_MM),
        effective_length_factor: 1.0,
    }
}

impl GripperPreset {
    pub fn geometry(&self) -> HoneycombGeometry {
        shared_geometry(self.b_mm, self.gamma_deg)
    }

    pub fn gripper(&self) -> Gripper {
        Gripper {
            name: self.name.to_string(),
            mass: self.mass_kg,
            length: mm_to_m(self.length_mm),
        }
    }

    pub fn targets(&self) -> DesignTargets {
        DesignTargets {
            buckling_torque: self.target_torque_nm,
            buckling_angle_limit: deg_to_rad(self.angle_limit_deg),
            ..DesignTargets::new(1.0, 0.1).expect("valid defaults")
        }
    }

    pub fn measured(&self) -> BucklingPoint {
        BucklingPoint {
            angle: deg_to_rad(self.measured_angle_deg),
            torque: self.measured_torque_nm,
        }
    }

    pub fn observation(&self) -> Observation {
        Observation::both(self.name, self.geometry(), self.measured())
    }
}

/// Fits the modulus and ring radius so this gripper's wrist reproduces its
/// measured buckling point exactly, starting from `guess`.
pub fn calibrated_model(
    preset: &GripperPreset,
    guess: &Material,
) -> Result<(WristModel, Calibration)> {
    let start = ModelConstants {
        material: guess.clone(),
        ring_radius: mm_to_m(RING_RADIUS_MM),
        effective_length_factor: 1.0,
    };
    let cal = calibrate(
        &[preset.observation()],
        &start,
        &[FreeParameter::YoungModulus, FreeParameter::RingRadius],
    )?;
    let model = assemble(
        &cal.constants.apply(&preset.geometry()),
        &cal.constants.material,
    );
    Ok((model, cal))
}
