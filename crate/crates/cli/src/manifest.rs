use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use biflex_core::units::{deg_to_rad, rad_to_deg};
use biflex_core::{BucklingPoint, DesignTargets, ToleranceVerdict};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::output::{to_json, write_atomic};

/// Reproducibility record of one invocation. Timestamps live here and
/// nowhere else, so data files stay byte-identical across runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub overrides: BTreeMap<String, String>,
    pub version: String,
    pub timestamp: String,
    /// Buckling point the run produced, if it produces one.
    pub point: Option<PointRecord>,
    pub result: serde_json::Value,
}

/// A buckling point with the targets it is judged against, in display units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct PointRecord {
    pub gripper: String,
    /// "predicted", "designed" or "measured".
    pub source: String,
    pub angle_deg: f64,
    pub torque_Nm: f64,
    pub target_torque_Nm: f64,
    pub angle_limit_deg: f64,
    pub torque_tolerance: f64,
}

impl PointRecord {
    pub fn new(
        gripper: &str,
        source: &str,
        point: &BucklingPoint,
        targets: &DesignTargets,
    ) -> Self {
        PointRecord {
            gripper: gripper.to_string(),
            source: source.to_string(),
            angle_deg: rad_to_deg(point.angle),
            torque_Nm: point.torque,
            target_torque_Nm: targets.buckling_torque,
            angle_limit_deg: rad_to_deg(targets.buckling_angle_limit),
            torque_tolerance: targets.torque_tolerance,
        }
    }

    pub fn verdict(&self) -> CliResult<ToleranceVerdict> {
        let targets = DesignTargets {
            buckling_torque: self.target_torque_Nm,
            buckling_angle_limit: deg_to_rad(self.angle_limit_deg),
            torque_tolerance: self.torque_tolerance,
            ..DesignTargets::new(1.0, 0.1).expect("valid defaults")
        };
        targets.check().map_err(CliError::input)?;
        let point = BucklingPoint::new(deg_to_rad(self.angle_deg), self.torque_Nm)
            .map_err(CliError::input)?;
        Ok(targets.assess(&point))
    }
}

pub struct ManifestBuilder {
    subcommand: &'static str,
    inputs: Vec<String>,
    outputs: Vec<String>,
    overrides: BTreeMap<String, String>,
}

impl ManifestBuilder {
    pub fn new(subcommand: &'static str) -> Self {
        ManifestBuilder {
            subcommand,
            inputs: Vec::new(),
            outputs: Vec::new(),
            overrides: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, p: &Path) {
        self.inputs.push(p.display().to_string());
    }

    pub fn output(&mut self, p: &Path) {
        self.outputs.push(p.display().to_string());
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.overrides.insert(key.to_string(), value.to_string());
    }

    /// Writes the manifest if a path was requested. The manifest lists itself
    /// among the outputs.
    pub fn finish(
        mut self,
        path: Option<&PathBuf>,
        point: Option<PointRecord>,
        result: &impl Serialize,
    ) -> CliResult<()> {
        let Some(path) = path else { return Ok(()) };
        self.output(path);
        let m = RunManifest {
            subcommand: self.subcommand.to_string(),
            inputs: self.inputs,
            outputs: self.outputs,
            overrides: self.overrides,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            point,
            result: serde_json::to_value(result).expect("result serializes"),
        };
        write_atomic(path, to_json(&m).as_bytes())
    }
}

pub fn read_manifest(path: &Path) -> CliResult<RunManifest> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: not a run manifest: {e}", path.display())))
}
