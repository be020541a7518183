//! JSON configuration files.
//!
//! Keys carry their unit as a suffix (`b_mm`, `gamma_deg`, `young_modulus_MPa`)
//! and are converted to SI exactly once, here.
//!
//! ```json
//! {
//!   "material": { "name": "TPU-95A", "young_modulus_MPa": 26.0 },
//!   "geometry": {
//!     "b_mm": 1.0, "b_c_mm": 1.5, "L_mm": 10.0, "h_c_mm": 4.0, "H_mm": 8.0,
//!     "gamma_deg": 20.0, "n_modules": 12, "ring_radius_mm": 30.0,
//!     "effective_length_factor": 1.0
//!   },
//!   "gripper": { "name": "Robotiq 2F-85", "mass_kg": 1.10, "length_mm": 155.0 },
//!   "targets": {
//!     "buckling_torque_Nm": 1.325, "buckling_angle_limit_deg": 3.70,
//!     "torque_tolerance": 0.10, "tip_deflection_limit_mm": 10.0, "payload_kg": 0.5
//!   },
//!   "calibrated": false
//! }
//! ```
//!
//! `effective_length_factor`, `torque_tolerance`, `tip_deflection_limit_mm`,
//! `payload_kg` and `calibrated` are optional. When
//! `buckling_angle_limit_deg` is omitted it is derived from the tip
//! deflection limit and the gripper length.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::design::derive_targets;
use crate::types::{DEFAULT_PAYLOAD, DEFAULT_TIP_DEFLECTION_LIMIT, DEFAULT_TORQUE_TOLERANCE};
use crate::units::{deg_to_rad, m_to_mm, mm_to_m, mpa_to_pa, pa_to_mpa, rad_to_deg};
use crate::{DesignTargets, Error, Gripper, HoneycombGeometry, Material, Result};

/// A fully validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct WristConfig {
    pub material: Material,
    pub geometry: HoneycombGeometry,
    pub gripper: Gripper,
    pub targets: DesignTargets,
    /// False for shipped defaults whose modulus and radius were never fitted.
    pub calibrated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialFile {
    pub name: String,
    #[serde(rename = "young_modulus_MPa")]
    pub young_modulus_mpa: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryFile {
    pub b_mm: f64,
    pub b_c_mm: f64,
    #[serde(rename = "L_mm")]
    pub l_mm: f64,
    pub h_c_mm: f64,
    #[serde(rename = "H_mm")]
    pub height_mm: f64,
    pub gamma_deg: f64,
    pub n_modules: usize,
    pub ring_radius_mm: f64,
    #[serde(default = "unit_factor")]
    pub effective_length_factor: f64,
}

fn unit_factor() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GripperFile {
    pub name: String,
    pub mass_kg: f64,
    pub length_mm: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetsFile {
    #[serde(rename = "buckling_torque_Nm")]
    pub buckling_torque_nm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buckling_angle_limit_deg: Option<f64>,
    #[serde(default = "default_tolerance")]
    pub torque_tolerance: f64,
    #[serde(default = "default_tip_mm")]
    pub tip_deflection_limit_mm: f64,
    #[serde(default = "default_payload")]
    pub payload_kg: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TORQUE_TOLERANCE
}

fn default_tip_mm() -> f64 {
    m_to_mm(DEFAULT_TIP_DEFLECTION_LIMIT)
}

fn default_payload() -> f64 {
    DEFAULT_PAYLOAD
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub material: MaterialFile,
    pub geometry: GeometryFile,
    pub gripper: GripperFile,
    pub targets: TargetsFile,
    #[serde(default)]
    pub calibrated: bool,
}

impl From<&Material> for MaterialFile {
    fn from(m: &Material) -> Self {
        MaterialFile {
            name: m.name.clone(),
            young_modulus_mpa: pa_to_mpa(m.young_modulus),
        }
    }
}

impl MaterialFile {
    pub fn to_material(&self) -> Result<Material> {
        Material::new(self.name.clone(), mpa_to_pa(self.young_modulus_mpa))
            .map_err(|e| prefix("material", e))
    }
}

impl From<&HoneycombGeometry> for GeometryFile {
    fn from(g: &HoneycombGeometry) -> Self {
        GeometryFile {
            b_mm: m_to_mm(g.beam_width),
            b_c_mm: m_to_mm(g.central_width),
            l_mm: m_to_mm(g.depth),
            h_c_mm: m_to_mm(g.central_height),
            height_mm: m_to_mm(g.module_height),
            gamma_deg: rad_to_deg(g.tilt),
            n_modules: g.n_modules,
            ring_radius_mm: m_to_mm(g.ring_radius),
            effective_length_factor: g.effective_length_factor,
        }
    }
}

impl GeometryFile {
    pub fn to_geometry(&self) -> Result<HoneycombGeometry> {
        let g = HoneycombGeometry {
            beam_width: mm_to_m(self.b_mm),
            central_width: mm_to_m(self.b_c_mm),
            depth: mm_to_m(self.l_mm),
            central_height: mm_to_m(self.h_c_mm),
            module_height: mm_to_m(self.height_mm),
            tilt: deg_to_rad(self.gamma_deg),
            n_modules: self.n_modules,
            ring_radius: mm_to_m(self.ring_radius_mm),
            effective_length_factor: self.effective_length_factor,
        };
        g.check().map_err(|e| prefix("geometry", e))?;
        Ok(g)
    }
}

impl From<&Gripper> for GripperFile {
    fn from(g: &Gripper) -> Self {
        GripperFile {
            name: g.name.clone(),
            mass_kg: g.mass,
            length_mm: m_to_mm(g.length),
        }
    }
}

impl GripperFile {
    pub fn to_gripper(&self) -> Result<Gripper> {
        Gripper::new(self.name.clone(), self.mass_kg, mm_to_m(self.length_mm))
    }
}

impl From<&DesignTargets> for TargetsFile {
    fn from(t: &DesignTargets) -> Self {
        TargetsFile {
            buckling_torque_nm: t.buckling_torque,
            buckling_angle_limit_deg: Some(rad_to_deg(t.buckling_angle_limit)),
            torque_tolerance: t.torque_tolerance,
            tip_deflection_limit_mm: m_to_mm(t.tip_deflection_limit),
            payload_kg: t.payload,
        }
    }
}

impl TargetsFile {
    pub fn to_targets(&self, gripper: &Gripper) -> Result<DesignTargets> {
        let tip = mm_to_m(self.tip_deflection_limit_mm);
        let mut t = derive_targets(gripper, self.payload_kg, tip, self.buckling_torque_nm)
            .map_err(|e| prefix("targets", e))?;
        if let Some(deg) = self.buckling_angle_limit_deg {
            t.buckling_angle_limit = deg_to_rad(deg);
        }
        t.torque_tolerance = self.torque_tolerance;
        t.check().map_err(|e| prefix("targets", e))?;
        Ok(t)
    }
}

impl ConfigFile {
    pub fn to_config(&self) -> Result<WristConfig> {
        let gripper = self
            .gripper
            .to_gripper()
            .map_err(|e| prefix("gripper", e))?;
        Ok(WristConfig {
            material: self.material.to_material()?,
            geometry: self.geometry.to_geometry()?,
            targets: self.targets.to_targets(&gripper)?,
            gripper,
            calibrated: self.calibrated,
        })
    }
}

impl From<&WristConfig> for ConfigFile {
    fn from(c: &WristConfig) -> Self {
        ConfigFile {
            material: (&c.material).into(),
            geometry: (&c.geometry).into(),
            gripper: (&c.gripper).into(),
            targets: (&c.targets).into(),
            calibrated: c.calibrated,
        }
    }
}

fn prefix(section: &str, e: Error) -> Error {
    match e {
        Error::Invalid {
            field,
            value,
            reason,
        } if !field.starts_with(section) => Error::Invalid {
            field: format!("{section}.{field}"),
            value,
            reason,
        },
        other => other,
    }
}

pub fn parse_config(text: &str) -> Result<WristConfig> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: "config".into(),
        message: e.to_string(),
    })?;
    file.to_config()
}

pub fn load_config(path: impl AsRef<Path>) -> Result<WristConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text).map_err(|e| match e {
        Error::Parse { message, .. } => Error::Parse {
            context: path.display().to_string(),
            message,
        },
        other => other,
    })
}

pub fn config_to_json(config: &WristConfig) -> String {
    let file = ConfigFile::from(config);
    serde_json::to_string_pretty(&file).expect("config serializes")
}
