//! Shared domain values. Every quantity is SI.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::units::{m_to_mm, rad_to_deg};
use crate::{Error, Result};

/// Height available to the honeycomb ring inside the wrist housing.
pub const MODULE_HEIGHT_BUDGET: f64 = 0.021;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    /// Young's modulus in Pa.
    pub young_modulus: f64,
}

impl Material {
    pub fn new(name: impl Into<String>, young_modulus: f64) -> Result<Self> {
        let m = Material {
            name: name.into(),
            young_modulus,
        };
        m.check()?;
        Ok(m)
    }

    pub fn check(&self) -> Result<()> {
        if !(self.young_modulus.is_finite() && self.young_modulus > 0.0) {
            return Err(Error::invalid(
                "young_modulus",
                self.young_modulus,
                "Young's modulus must be positive",
            ));
        }
        Ok(())
    }

    pub fn with_modulus(&self, young_modulus: f64) -> Self {
        Material {
            name: self.name.clone(),
            young_modulus,
        }
    }
}

/// Dimensions of one buckling module and of the ring it sits in.
///
/// A module is two diagonal beams tilted by `tilt` from vertical, joined at
/// mid-height by a horizontal central beam. `depth` is the out-of-plane depth
/// shared by all beams, so the diagonal cross-section is `beam_width * depth`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoneycombGeometry {
    /// Diagonal-beam width `b`.
    pub beam_width: f64,
    /// Central-beam width `b_c`.
    pub central_width: f64,
    /// Undeformed beam length `L` (out-of-plane depth of the cell).
    pub depth: f64,
    /// Central-beam height `h_c`.
    pub central_height: f64,
    /// Total module height `H`.
    pub module_height: f64,
    /// Diagonal-beam tilt `γ` from vertical, in rad.
    pub tilt: f64,
    pub n_modules: usize,
    /// Radial distance of module centres from the wrist axis.
    pub ring_radius: f64,
    /// Euler effective-length factor applied to the diagonal beam height.
    /// 1.0 is pinned–pinned, 0.5 clamped–clamped.
    pub effective_length_factor: f64,
}

impl HoneycombGeometry {
    /// Diagonal-beam height `h = H / (2 cos γ)`.
    pub fn diagonal_height(&self) -> f64 {
        self.module_height / (2.0 * self.tilt.cos())
    }

    /// Diagonal-beam cross-section `A = b·L`.
    pub fn diagonal_area(&self) -> f64 {
        self.beam_width * self.depth
    }

    /// Central-beam cross-section `A_c = b_c·L`.
    pub fn central_area(&self) -> f64 {
        self.central_width * self.depth
    }

    /// Second moment of the diagonal beam about its weak axis, `L·b³/12`.
    pub fn second_moment(&self) -> f64 {
        self.depth * self.beam_width.powi(3) / 12.0
    }

    pub fn with_beam(&self, beam_width: f64, tilt: f64) -> Self {
        HoneycombGeometry {
            beam_width,
            tilt,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let positive = [
            ("b", self.beam_width),
            ("b_c", self.central_width),
            ("L", self.depth),
            ("h_c", self.central_height),
            ("H", self.module_height),
            ("ring_radius", self.ring_radius),
            ("effective_length_factor", self.effective_length_factor),
        ];
        for (name, value) in positive {
            report.push(
                name,
                value,
                value.is_finite() && value > 0.0,
                format!("{name} must be positive"),
            );
        }

        let tilt_ok = self.tilt.is_finite() && self.tilt >= 0.0 && self.tilt < FRAC_PI_2;
        let reason = if self.tilt.is_finite() && self.tilt >= FRAC_PI_2 {
            "singular geometry: gamma must be below 90 deg"
        } else {
            "gamma must lie in [0, 90) deg"
        };
        report.push("gamma", self.tilt, tilt_ok, reason);

        if tilt_ok {
            let h = self.diagonal_height();
            report.push(
                "h",
                h,
                h.is_finite() && h > 0.0,
                "diagonal beam height H / (2 cos gamma) must be positive",
            );
        }

        report.push(
            "n_modules",
            self.n_modules as f64,
            self.n_modules >= 3,
            "ring needs at least 3 modules",
        );

        if self.module_height.is_finite() && self.module_height > MODULE_HEIGHT_BUDGET {
            report.warnings.push(format!(
                "H = {} mm exceeds 21 mm module budget",
                m_to_mm(self.module_height)
            ));
        }
        report
    }

    /// Errors on the first failed invariant.
    pub fn check(&self) -> Result<()> {
        let report = self.validate();
        match report.checks.iter().find(|c| !c.passed) {
            None => Ok(()),
            Some(c) if c.name == "gamma" && c.value >= FRAC_PI_2 => Err(Error::SingularGeometry {
                gamma_deg: rad_to_deg(c.value),
            }),
            Some(c) => Err(Error::invalid(c.name.clone(), c.value, c.message.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationCheck {
    pub name: String,
    pub value: f64,
    pub passed: bool,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, value: f64, passed: bool, message: impl Into<String>) {
        self.checks.push(ValidationCheck {
            name: name.to_string(),
            value,
            passed,
            message: message.into(),
        });
    }

    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ValidationCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gripper {
    pub name: String,
    pub mass: f64,
    /// Wrist flange to fingertip.
    pub length: f64,
}

impl Gripper {
    pub fn new(name: impl Into<String>, mass: f64, length: f64) -> Result<Self> {
        let g = Gripper {
            name: name.into(),
            mass,
            length,
        };
        g.check()?;
        Ok(g)
    }

    pub fn check(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::invalid(
                "gripper.mass",
                self.mass,
                "mass must be positive",
            ));
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::invalid(
                "gripper.length",
                self.length,
                "length must be positive",
            ));
        }
        Ok(())
    }
}

pub const DEFAULT_TORQUE_TOLERANCE: f64 = 0.10;
pub const DEFAULT_TIP_DEFLECTION_LIMIT: f64 = 0.010;
pub const DEFAULT_PAYLOAD: f64 = 0.500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignTargets {
    pub buckling_torque: f64,
    pub buckling_angle_limit: f64,
    pub torque_tolerance: f64,
    pub tip_deflection_limit: f64,
    pub payload: f64,
}

impl DesignTargets {
    /// Targets with the default tolerance, tip limit and payload.
    pub fn new(buckling_torque: f64, buckling_angle_limit: f64) -> Result<Self> {
        let t = DesignTargets {
            buckling_torque,
            buckling_angle_limit,
            torque_tolerance: DEFAULT_TORQUE_TOLERANCE,
            tip_deflection_limit: DEFAULT_TIP_DEFLECTION_LIMIT,
            payload: DEFAULT_PAYLOAD,
        };
        t.check()?;
        Ok(t)
    }

    pub fn check(&self) -> Result<()> {
        if !(self.buckling_torque.is_finite() && self.buckling_torque > 0.0) {
            return Err(Error::invalid(
                "buckling_torque",
                self.buckling_torque,
                "target torque must be positive",
            ));
        }
        if !(self.buckling_angle_limit > 0.0 && self.buckling_angle_limit < FRAC_PI_2) {
            return Err(Error::invalid(
                "buckling_angle_limit",
                self.buckling_angle_limit,
                "angle limit must lie in (0, 90) deg",
            ));
        }
        if !(self.torque_tolerance > 0.0 && self.torque_tolerance < 1.0) {
            return Err(Error::invalid(
                "torque_tolerance",
                self.torque_tolerance,
                "tolerance must lie in (0, 1)",
            ));
        }
        if !(self.tip_deflection_limit.is_finite() && self.tip_deflection_limit > 0.0) {
            return Err(Error::invalid(
                "tip_deflection_limit",
                self.tip_deflection_limit,
                "tip deflection limit must be positive",
            ));
        }
        if !(self.payload.is_finite() && self.payload >= 0.0) {
            return Err(Error::invalid(
                "payload",
                self.payload,
                "payload must be non-negative",
            ));
        }
        Ok(())
    }

    /// Tolerance-box verdict: torque within ±tolerance of the target and
    /// angle at or below the limit.
    pub fn assess(&self, point: &BucklingPoint) -> ToleranceVerdict {
        let torque_error = (point.torque - self.buckling_torque) / self.buckling_torque;
        let within_torque = torque_error.abs() <= self.torque_tolerance;
        let angle_margin = self.buckling_angle_limit - point.angle;
        let within_angle = angle_margin >= 0.0;
        ToleranceVerdict {
            torque_error,
            angle_margin,
            within_torque,
            within_angle,
            in_tolerance: within_torque && within_angle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceVerdict {
    /// Signed relative torque error.
    pub torque_error: f64,
    /// Angle limit minus achieved angle, rad.
    pub angle_margin: f64,
    pub within_torque: bool,
    pub within_angle: bool,
    pub in_tolerance: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BucklingPoint {
    pub angle: f64,
    pub torque: f64,
}

impl BucklingPoint {
    pub fn new(angle: f64, torque: f64) -> Result<Self> {
        if !(angle.is_finite() && angle > 0.0) {
            return Err(Error::invalid(
                "buckling.angle",
                angle,
                "angle must be positive",
            ));
        }
        if !(torque.is_finite() && torque > 0.0) {
            return Err(Error::invalid(
                "buckling.torque",
                torque,
                "torque must be positive",
            ));
        }
        Ok(BucklingPoint { angle, torque })
    }
}

/// Sampled wrist torque against deflection angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorqueDeflectionCurve {
    samples: Vec<(f64, f64)>,
}

impl TorqueDeflectionCurve {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        for (i, &(a, t)) in samples.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::invalid(
                    format!("sample {i} angle"),
                    a,
                    "must be finite",
                ));
            }
            if !t.is_finite() {
                return Err(Error::invalid(
                    format!("sample {i} torque"),
                    t,
                    "must be finite",
                ));
            }
        }
        if let Some(i) = samples.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::NonIncreasingAngles { index: i + 1 });
        }
        Ok(TorqueDeflectionCurve { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.0)
    }

    pub fn torques(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> (f64, f64)) -> Result<Self> {
        Self::new(self.samples.iter().map(|&(a, t)| f(a, t)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{deg_to_rad, mm_to_m};

    pub(crate) fn robotiq_like() -> HoneycombGeometry {
        HoneycombGeometry {
            beam_width: mm_to_m(1.0),
            central_width: mm_to_m(1.5),
            depth: mm_to_m(10.0),
            central_height: mm_to_m(4.0),
            module_height: mm_to_m(8.0),
            tilt: deg_to_rad(20.0),
            n_modules: 12,
            ring_radius: 0.030,
            effective_length_factor: 1.0,
        }
    }

    #[test]
    fn valid_geometry_passes_every_check() {
        let r = robotiq_like().validate();
        assert!(r.is_ok(), "{r:?}");
        assert!(r.warnings.is_empty());
        robotiq_like().check().unwrap();
    }

    #[test]
    fn zero_width_is_reported() {
        let mut g = robotiq_like();
        g.beam_width = 0.0;
        let r = g.validate();
        let f: Vec<_> = r.failures().collect();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].message, "b must be positive");
        assert!(matches!(g.check(), Err(Error::Invalid { .. })));
    }

    #[test]
    fn tall_module_only_warns() {
        let mut g = robotiq_like();
        g.module_height = mm_to_m(30.0);
        let r = g.validate();
        assert!(r.is_ok());
        assert_eq!(r.warnings.len(), 1);
        assert!(r.warnings[0].contains("exceeds 21 mm module budget"));
    }

    #[test]
    fn right_angle_tilt_is_singular() {
        let mut g = robotiq_like();
        g.tilt = deg_to_rad(90.0);
        assert!(matches!(g.check(), Err(Error::SingularGeometry { .. })));
    }

    #[test]
    fn two_module_ring_rejected() {
        let mut g = robotiq_like();
        g.n_modules = 2;
        assert!(g.check().is_err());
    }

    #[test]
    fn derived_sections() {
        let g = robotiq_like();
        assert!((g.diagonal_height() - 0.008 / (2.0 * deg_to_rad(20.0).cos())).abs() < 1e-18);
        assert!((g.second_moment() - 0.010 * 1e-9 / 12.0).abs() < 1e-24);
        assert!((g.diagonal_area() - 1e-5).abs() < 1e-20);
        assert!((g.central_area() - 1.5e-5).abs() < 1e-20);
    }

    #[test]
    fn tolerance_box() {
        let t = DesignTargets::new(1.325, deg_to_rad(3.70)).unwrap();
        assert!(
            t.assess(&BucklingPoint {
                angle: deg_to_rad(3.5),
                torque: 1.40
            })
            .in_tolerance
        );
        let v = t.assess(&BucklingPoint {
            angle: deg_to_rad(3.99),
            torque: 1.45,
        });
        assert!(v.within_torque && !v.within_angle && !v.in_tolerance);
        assert!(
            !t.assess(&BucklingPoint {
                angle: deg_to_rad(3.0),
                torque: 1.50
            })
            .in_tolerance
        );
    }

    #[test]
    fn curve_rejects_repeated_angle() {
        let e = TorqueDeflectionCurve::new(vec![(0.0, 0.0), (0.1, 1.0), (0.1, 2.0)]);
        assert!(matches!(e, Err(Error::NonIncreasingAngles { index: 2 })));
    }

    #[test]
    fn target_checks() {
        assert!(DesignTargets::new(0.0, 0.05).is_err());
        assert!(DesignTargets::new(1.0, 0.0).is_err());
        assert!(DesignTargets::new(1.0, 2.0).is_err());
        assert_eq!(
            DesignTargets::new(1.0, 0.05).unwrap().torque_tolerance,
            0.10
        );
    }
}
