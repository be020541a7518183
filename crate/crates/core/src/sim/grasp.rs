use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ContactScenario, Equilibrium, Outcome};
use crate::{Error, Result, TorqueLaw};

/// Result of one commanded depth below the table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraspOutcome {
    pub depth: f64,
    pub state: Equilibrium,
    pub buckled: bool,
    pub outcome: Outcome,
}

/// Drives the fingertips `d` below the table surface for every depth. The
/// fingers slide on the table, so the overshoot is taken up by the series
/// chain; force peaks at full depth, so the press-slide-lift cycle succeeds
/// iff that force stays below the safety limit.
pub fn simulate_constrained_grasp(
    scenario: &ContactScenario,
    depths: &[f64],
) -> Result<Vec<GraspOutcome>> {
    scenario.check()?;
    for &d in depths {
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::invalid("depth", d, "must be non-negative"));
        }
        if d >= scenario.gripper.length {
            return Err(Error::KinematicLimit {
                depth: d,
                length: scenario.gripper.length,
            });
        }
    }
    depths
        .par_iter()
        .map(|&depth| {
            let state = scenario.equilibrium(depth)?;
            Ok(GraspOutcome {
                depth,
                state,
                buckled: scenario.wrist.is_buckled(state.wrist_angle),
                outcome: if state.contact_force < scenario.safety_force {
                    Outcome::Success
                } else {
                    Outcome::Failure
                },
            })
        })
        .collect()
}
