use serde::{Deserialize, Serialize};

use super::{sweep, CommandKind, ContactScenario, SimTrace};
use crate::{Error, Result};

/// Piecewise-linear surface height `h(x)` through strictly increasing knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceProfile {
    knots: Vec<(f64, f64)>,
}

impl SurfaceProfile {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::invalid(
                "profile",
                knots.len() as f64,
                "needs at least two knots",
            ));
        }
        for (i, &(x, h)) in knots.iter().enumerate() {
            if !(x.is_finite() && h.is_finite()) {
                return Err(Error::invalid(format!("profile[{i}]"), x, "must be finite"));
            }
            if i > 0 && x <= knots[i - 1].0 {
                return Err(Error::invalid(
                    format!("profile[{i}].x"),
                    x,
                    "segment has zero or negative length",
                ));
            }
        }
        Ok(SurfaceProfile { knots })
    }

    pub fn flat(length: f64) -> Result<Self> {
        SurfaceProfile::new(vec![(0.0, 0.0), (length, 0.0)])
    }

    /// Symmetric hill of the given height whose flanks rise at `slope` (rad).
    pub fn triangle(height: f64, slope: f64) -> Result<Self> {
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::invalid("height", height, "must be positive"));
        }
        if !(slope > 0.0 && slope < std::f64::consts::FRAC_PI_2) {
            return Err(Error::invalid("slope", slope, "must lie in (0, 90) deg"));
        }
        let half = height / slope.tan();
        SurfaceProfile::new(vec![(0.0, 0.0), (half, height), (2.0 * half, 0.0)])
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn start(&self) -> f64 {
        self.knots[0].0
    }

    pub fn end(&self) -> f64 {
        self.knots[self.knots.len() - 1].0
    }

    pub fn height_at(&self, x: f64) -> f64 {
        let k = &self.knots;
        if x <= k[0].0 {
            return k[0].1;
        }
        for w in k.windows(2) {
            let ((x0, h0), (x1, h1)) = (w[0], w[1]);
            if x <= x1 {
                return h0 + (h1 - h0) * (x - x0) / (x1 - x0);
            }
        }
        k[k.len() - 1].1
    }

    pub fn peak(&self) -> f64 {
        self.knots
            .iter()
            .map(|k| k.1)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Uniform positions `start + k·step` merged with every knot.
    fn positions(&self, step: f64) -> Vec<f64> {
        let (a, b) = (self.start(), self.end());
        let mut xs: Vec<f64> = Vec::new();
        let mut k = 0u64;
        loop {
            let x = a + step * k as f64;
            if x >= b {
                break;
            }
            xs.push(x);
            k += 1;
        }
        xs.extend(self.knots.iter().map(|k| k.0));
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    }
}

/// Moves horizontally across `profile` with the tool pressed `approach_depth`
/// into the surface. The interference at `x` is `h(x) + approach_depth`.
pub fn simulate_wipe(
    scenario: &ContactScenario,
    profile: &SurfaceProfile,
    approach_depth: f64,
    step: f64,
) -> Result<SimTrace> {
    if !(approach_depth.is_finite() && approach_depth > 0.0) {
        return Err(Error::invalid(
            "approach_depth",
            approach_depth,
            "must be positive",
        ));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::invalid("step", step, "must be positive"));
    }
    let xs = profile.positions(step);
    sweep(scenario, CommandKind::Position, &xs, |x| {
        profile.height_at(x) + approach_depth
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::ROBOTIQ;
    use crate::sim::{Outcome, Tool, WristLaw};
    use crate::units::deg_to_rad;
    use crate::wrist::RigidWrist;
    use approx::assert_relative_eq;

    #[test]
    fn triangle_shape() {
        let p = SurfaceProfile::triangle(0.02, deg_to_rad(30.0)).unwrap();
        assert_relative_eq!(p.peak(), 0.02);
        assert_relative_eq!(p.end(), 2.0 * 0.02 / deg_to_rad(30.0).tan());
        assert_relative_eq!(p.height_at(p.end() / 4.0), 0.01, max_relative = 1e-12);
    }

    #[test]
    fn bad_profiles() {
        assert!(SurfaceProfile::new(vec![(0.0, 0.0), (-1.0, 0.0)]).is_err());
        assert!(SurfaceProfile::new(vec![(0.0, 0.0)]).is_err());
        assert!(SurfaceProfile::triangle(0.0, 0.5).is_err());
    }

    #[test]
    fn flat_profile_force_is_tool_spring() {
        // Stiff wrist and no extra compliance: the sponge takes the approach.
        let s = ContactScenario {
            tool: Some(Tool {
                stiffness: 4000.0,
                travel: None,
            }),
            ..ContactScenario::new(
                WristLaw::Rigid(RigidWrist {
                    rotational_stiffness: 1e9,
                }),
                ROBOTIQ.gripper(),
            )
        };
        let t = simulate_wipe(&s, &SurfaceProfile::flat(0.1).unwrap(), 0.001, 0.005).unwrap();
        assert_eq!(t.outcome, Outcome::Success);
        for smp in &t.samples {
            assert_relative_eq!(smp.state.contact_force, 4.0, max_relative = 1e-4);
        }
    }

    #[test]
    fn knots_are_sampled() {
        let p = SurfaceProfile::triangle(0.014, deg_to_rad(30.0)).unwrap();
        let xs = p.positions(0.003);
        assert!(xs.contains(&p.knots()[1].0));
        assert_eq!(*xs.last().unwrap(), p.end());
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = ContactScenario::new(WristLaw::Rigid(RigidWrist::default()), ROBOTIQ.gripper());
        let p = SurfaceProfile::flat(0.1).unwrap();
        assert!(simulate_wipe(&s, &p, 0.0, 0.001).is_err());
        assert!(simulate_wipe(&s, &p, 0.001, 0.0).is_err());
    }
}
