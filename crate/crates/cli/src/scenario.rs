//! Scenario files for `simulate`. Lengths in mm, angles in degrees,
//! stiffnesses in N/mm, as in configuration files.

#![allow(non_snake_case)]

use std::path::{Path, PathBuf};

use biflex_core::config::{load_config, ConfigFile, WristConfig};
use biflex_core::sim::rig::calibrate_contact_stiffness;
use biflex_core::sim::{ContactScenario, Tool, WristLaw};
use biflex_core::units::{mm_to_m, n_per_mm_to_si};
use biflex_core::wrist::{assemble, RigidWrist};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult, InputContext};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConfigRef {
    Path(PathBuf),
    Inline(Box<ConfigFile>),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WristKind {
    #[default]
    Biflex,
    Rigid,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolFile {
    pub stiffness_N_per_mm: f64,
    pub travel_mm: Option<f64>,
}

/// Residual contact compliance: a fixed stiffness, or the stiffness at which
/// the rigid baseline reaches the safety force at the given total
/// interference (for a wipe: hill height plus approach depth).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ContactFile {
    Fixed { stiffness_N_per_mm: f64 },
    Calibrated { calibrate_at_mm: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PressFile {
    pub max_wrist_angle_deg: f64,
    pub step_deg: f64,
}

impl Default for PressFile {
    fn default() -> Self {
        PressFile {
            max_wrist_angle_deg: 10.0,
            step_deg: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WipeFile {
    pub heights_mm: Vec<f64>,
    pub slope_deg: f64,
    pub approach_depth_mm: f64,
    pub step_mm: f64,
}

impl Default for WipeFile {
    fn default() -> Self {
        WipeFile {
            heights_mm: vec![10.0, 20.0, 30.0, 40.0, 50.0],
            slope_deg: 30.0,
            approach_depth_mm: 1.0,
            step_mm: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PickFile {
    pub masses_kg: Vec<f64>,
    pub lever_mm: Option<f64>,
    pub hold_angle_deg: f64,
    pub deflection_limit_mm: f64,
}

impl Default for PickFile {
    fn default() -> Self {
        PickFile {
            masses_kg: (0..=15).map(|k| 0.1 * k as f64).collect(),
            lever_mm: None,
            hold_angle_deg: 0.0,
            deflection_limit_mm: 10.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GraspFile {
    pub depths_mm: Vec<f64>,
}

impl Default for GraspFile {
    fn default() -> Self {
        GraspFile {
            depths_mm: (0..=10).map(|k| 5.0 * k as f64).collect(),
        }
    }
}

fn default_safety() -> f64 {
    biflex_core::sim::DEFAULT_SAFETY_FORCE
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub config: ConfigRef,
    #[serde(default)]
    pub wrist: WristKind,
    pub rigid_stiffness_Nm_per_rad: Option<f64>,
    #[serde(default = "default_safety")]
    pub safety_force_N: f64,
    pub tool: Option<ToolFile>,
    pub contact: Option<ContactFile>,
    #[serde(default)]
    pub press: PressFile,
    #[serde(default)]
    pub wipe: WipeFile,
    #[serde(default)]
    pub pick: PickFile,
    #[serde(default)]
    pub grasp: GraspFile,
}

pub struct Resolved {
    pub file: ScenarioFile,
    pub config: WristConfig,
    pub config_path: Option<PathBuf>,
    pub scenario: ContactScenario,
}

impl Resolved {
    pub fn bimodal(&self) -> biflex_core::WristModel {
        assemble(&self.config.geometry, &self.config.material)
    }
}

pub fn load_scenario(path: &Path) -> CliResult<Resolved> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let file: ScenarioFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;

    let (config, config_path) = match &file.config {
        ConfigRef::Path(p) => {
            let full = if p.is_absolute() {
                p.clone()
            } else {
                path.parent().unwrap_or(Path::new(".")).join(p)
            };
            (load_config(&full).as_input()?, Some(full))
        }
        ConfigRef::Inline(c) => (c.to_config().as_input()?, None),
    };
    if !config.calibrated {
        log::warn!("configuration is not calibrated; absolute forces use guessed constants");
    }

    let rigid = RigidWrist {
        rotational_stiffness: file
            .rigid_stiffness_Nm_per_rad
            .unwrap_or(RigidWrist::DEFAULT_STIFFNESS),
    };
    let wrist = match file.wrist {
        WristKind::Biflex => WristLaw::Bimodal(assemble(&config.geometry, &config.material)),
        WristKind::Rigid => WristLaw::Rigid(rigid),
    };
    let mut scenario = ContactScenario {
        tool: file.tool.as_ref().map(|t| Tool {
            stiffness: n_per_mm_to_si(t.stiffness_N_per_mm),
            travel: t.travel_mm.map(mm_to_m),
        }),
        safety_force: file.safety_force_N,
        ..ContactScenario::new(wrist, config.gripper.clone())
    };
    scenario.contact_stiffness = match &file.contact {
        None => None,
        Some(ContactFile::Fixed { stiffness_N_per_mm }) => {
            Some(n_per_mm_to_si(*stiffness_N_per_mm))
        }
        Some(ContactFile::Calibrated { calibrate_at_mm }) => {
            scenario.check().as_input()?;
            let base = scenario.with_wrist(WristLaw::Rigid(rigid));
            let k = calibrate_contact_stiffness(
                &base,
                mm_to_m(*calibrate_at_mm),
                scenario.safety_force,
            )?;
            log::info!("calibrated contact stiffness {} N/mm", k / 1000.0);
            Some(k)
        }
    };
    scenario.check().as_input()?;
    Ok(Resolved {
        file,
        config,
        config_path,
        scenario,
    })
}
