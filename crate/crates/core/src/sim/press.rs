use super::{sweep, uniform_commands, CommandKind, ContactScenario, SimTrace};
use crate::{Error, Result};

/// Descends onto a rigid frame. The command is the equivalent tip angle `φ`:
/// the fingertip is driven `L·sin φ` into the frame, so with a rigid chain
/// the wrist angle equals the command. The sweep ends at `max_wrist_angle`
/// or at the safety force.
pub fn simulate_press(
    scenario: &ContactScenario,
    max_wrist_angle: f64,
    step: f64,
) -> Result<SimTrace> {
    if !(max_wrist_angle.is_finite()
        && max_wrist_angle > 0.0
        && max_wrist_angle < std::f64::consts::FRAC_PI_2)
    {
        return Err(Error::invalid(
            "max_wrist_angle",
            max_wrist_angle,
            "must lie in (0, 90) deg",
        ));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::invalid("step", step, "must be positive"));
    }
    let l = scenario.gripper.length;
    let commands = uniform_commands(max_wrist_angle, step);
    sweep(scenario, CommandKind::Angle, &commands, |phi| l * phi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::ROBOTIQ;
    use crate::sim::{Outcome, WristLaw};
    use crate::units::deg_to_rad;
    use crate::wrist::RigidWrist;
    use crate::{BucklingPoint, Material, WristModel};

    fn biflex() -> WristModel {
        let angle = deg_to_rad(3.99);
        WristModel {
            rotational_stiffness: 1.45 / angle,
            buckling: BucklingPoint {
                angle,
                torque: 1.45,
            },
            plateau_torque: 1.45,
            geometry: ROBOTIQ.geometry(),
            material: Material::new("m", 1e7).unwrap(),
        }
    }

    #[test]
    fn biflex_plateaus_below_safety() {
        let s = ContactScenario::new(WristLaw::Bimodal(biflex()), ROBOTIQ.gripper());
        let t = simulate_press(&s, deg_to_rad(10.0), deg_to_rad(0.1)).unwrap();
        assert_eq!(t.outcome, Outcome::Success);
        assert!(t.buckled);
        let last = t.samples.last().unwrap();
        assert_eq!(last.command, deg_to_rad(10.0));
        let expected = 1.45 / (0.155 * deg_to_rad(10.0).cos());
        assert!((last.state.contact_force - expected).abs() < 1e-9);
        assert!(t.peak_force() < 15.0 && t.peak_force() > 9.3);
    }

    #[test]
    fn rigid_hits_safety() {
        let s = ContactScenario::new(WristLaw::Rigid(RigidWrist::default()), ROBOTIQ.gripper());
        let t = simulate_press(&s, deg_to_rad(10.0), deg_to_rad(0.1)).unwrap();
        assert!(t.terminated_early);
        assert_eq!(t.outcome, Outcome::Failure);
        let f = t.samples.last().unwrap().state.contact_force;
        assert!(f >= 15.0 && f < 15.0 + 1e-6);
    }

    #[test]
    fn plateau_torque_constant() {
        let s = ContactScenario::new(WristLaw::Bimodal(biflex()), ROBOTIQ.gripper());
        let t = simulate_press(&s, deg_to_rad(20.0), deg_to_rad(0.5)).unwrap();
        for w in t.samples.windows(2) {
            if w[0].state.wrist_angle > deg_to_rad(3.99) {
                assert_eq!(w[0].state.wrist_torque, w[1].state.wrist_torque);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = ContactScenario::new(WristLaw::Bimodal(biflex()), ROBOTIQ.gripper());
        assert!(simulate_press(&s, 0.0, 0.01).is_err());
        assert!(simulate_press(&s, 0.1, 0.0).is_err());
    }
}
