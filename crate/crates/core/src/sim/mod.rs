//! Quasi-static contact simulations of a gripper on a wrist.
//!
//! The arm is an ideal position source. A commanded vertical interference
//! `i` between the fingertip and the environment is shared by a series chain
//! of the wrist (tip relief `L·sin θ`), an optional in-hand tool such as a
//! sponge, and an optional residual contact compliance. Equilibrium is the
//! wrist angle at which the chain force equals the wrist's tip force
//! `τ(θ) / (L·cos θ)`.

mod grasp;
mod pick;
mod press;
pub mod rig;
mod wipe;

pub use grasp::{simulate_constrained_grasp, GraspOutcome};
pub use pick::{
    buckling_threshold_mass, check_pick_place, mass_sweep, pass_threshold_mass, LoadCase,
    PickReport,
};
pub use press::simulate_press;
pub use wipe::{simulate_wipe, SurfaceProfile};

use serde::{Deserialize, Serialize};

use crate::curve::Table;
use crate::units::{m_to_mm, rad_to_deg};
use crate::wrist::RigidWrist;
use crate::{Error, Gripper, Result, TorqueLaw, WristModel};

pub const DEFAULT_SAFETY_FORCE: f64 = 15.0;

/// Wrist used in a scenario: the buckling wrist or the rigid baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WristLaw {
    Bimodal(WristModel),
    Rigid(RigidWrist),
}

impl TorqueLaw for WristLaw {
    fn torque_at(&self, angle: f64) -> f64 {
        match self {
            WristLaw::Bimodal(w) => w.torque_at(angle),
            WristLaw::Rigid(w) => w.torque_at(angle),
        }
    }

    fn rotational_stiffness(&self) -> f64 {
        match self {
            WristLaw::Bimodal(w) => w.rotational_stiffness(),
            WristLaw::Rigid(w) => w.rotational_stiffness(),
        }
    }

    fn buckling_angle(&self) -> Option<f64> {
        match self {
            WristLaw::Bimodal(w) => w.buckling_angle(),
            WristLaw::Rigid(w) => w.buckling_angle(),
        }
    }
}

/// In-hand compliant element with a finite travel (a sponge bottoms out).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    /// N/m.
    pub stiffness: f64,
    /// Maximum compression in m; `None` for unlimited travel.
    pub travel: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactScenario {
    pub wrist: WristLaw,
    pub gripper: Gripper,
    pub tool: Option<Tool>,
    /// Residual fingertip/structure compliance as a stiffness, N/m.
    pub contact_stiffness: Option<f64>,
    pub safety_force: f64,
}

/// Static equilibrium at one commanded interference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub interference: f64,
    pub wrist_angle: f64,
    pub wrist_torque: f64,
    pub contact_force: f64,
    /// Fingertip lateral displacement due to wrist rotation, `L·sin θ`.
    pub tip_deflection: f64,
    /// Chain force minus wrist tip force, N.
    pub residual: f64,
}

impl ContactScenario {
    pub fn new(wrist: WristLaw, gripper: Gripper) -> Self {
        ContactScenario {
            wrist,
            gripper,
            tool: None,
            contact_stiffness: None,
            safety_force: DEFAULT_SAFETY_FORCE,
        }
    }

    pub fn with_wrist(&self, wrist: WristLaw) -> Self {
        ContactScenario {
            wrist,
            ..self.clone()
        }
    }

    pub fn check(&self) -> Result<()> {
        self.gripper.check()?;
        if !(self.safety_force.is_finite() && self.safety_force > 0.0) {
            return Err(Error::invalid(
                "safety_force",
                self.safety_force,
                "must be positive",
            ));
        }
        if let Some(t) = self.tool {
            if !(t.stiffness.is_finite() && t.stiffness > 0.0) {
                return Err(Error::invalid(
                    "tool_stiffness",
                    t.stiffness,
                    "must be positive",
                ));
            }
            if let Some(travel) = t.travel {
                if !(travel.is_finite() && travel > 0.0) {
                    return Err(Error::invalid("tool_travel", travel, "must be positive"));
                }
            }
        }
        if let Some(k) = self.contact_stiffness {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::invalid("contact_stiffness", k, "must be positive"));
            }
        }
        if !(self.wrist.rotational_stiffness() > 0.0) {
            return Err(Error::invalid(
                "rotational_stiffness",
                self.wrist.rotational_stiffness(),
                "must be positive",
            ));
        }
        Ok(())
    }

    /// Force the wrist exerts normal to the surface at tip angle `angle`.
    pub fn tip_force(&self, angle: f64) -> f64 {
        self.wrist.torque_at(angle) / (self.gripper.length * angle.cos())
    }

    /// Compression of tool and contact under force `f`.
    pub fn chain_displacement(&self, f: f64) -> f64 {
        let tool = self.tool.map_or(0.0, |t| {
            let c = f / t.stiffness;
            t.travel.map_or(c, |travel| c.min(travel))
        });
        tool + self.contact_stiffness.map_or(0.0, |k| f / k)
    }

    /// Inverse of [`chain_displacement`](Self::chain_displacement); `None`
    /// when the chain is rigid at this compression.
    pub fn chain_force(&self, delta: f64) -> Option<f64> {
        let c = self.contact_stiffness.map_or(0.0, |k| 1.0 / k);
        let s = self.tool.map_or(0.0, |t| 1.0 / t.stiffness);
        if s + c == 0.0 {
            return None;
        }
        let f = delta / (s + c);
        match self.tool.and_then(|t| t.travel) {
            Some(travel) if f * s > travel => {
                if c > 0.0 {
                    Some((delta - travel) / c)
                } else {
                    None
                }
            }
            _ => Some(f),
        }
    }

    /// Solves the series chain for a commanded interference `i ≥ 0`.
    pub fn equilibrium(&self, interference: f64) -> Result<Equilibrium> {
        let l = self.gripper.length;
        if !interference.is_finite() {
            return Err(Error::invalid(
                "interference",
                interference,
                "must be finite",
            ));
        }
        if interference >= l {
            return Err(Error::KinematicLimit {
                depth: interference,
                length: l,
            });
        }
        if interference <= 0.0 {
            return Ok(Equilibrium {
                interference,
                wrist_angle: 0.0,
                wrist_torque: 0.0,
                contact_force: 0.0,
                tip_deflection: 0.0,
                residual: 0.0,
            });
        }

        let g = |theta: f64| {
            self.chain_displacement(self.tip_force(theta)) + l * theta.sin() - interference
        };
        let (mut lo, mut hi) = (0.0_f64, (interference / l).asin());
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let theta = if g(lo).abs() < g(hi).abs() { lo } else { hi };
        let force = self.tip_force(theta);
        let residual = self
            .chain_force(interference - l * theta.sin())
            .map_or(0.0, |fc| fc - force);
        Ok(Equilibrium {
            interference,
            wrist_angle: theta,
            wrist_torque: self.wrist.torque_at(theta),
            contact_force: force,
            tip_deflection: l * theta.sin(),
            residual,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Failure,
}

/// What the command column of a trace measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    /// Equivalent tip angle, rad.
    Angle,
    /// Horizontal or vertical position, m.
    Position,
    /// Object mass, kg.
    Mass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub command: f64,
    pub state: Equilibrium,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTrace {
    pub kind: CommandKind,
    pub samples: Vec<TraceSample>,
    pub terminated_early: bool,
    pub reason: Option<String>,
    pub outcome: Outcome,
    pub buckled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub outcome: Outcome,
    pub peak_force: f64,
    pub buckled: bool,
    pub terminated_early: bool,
    pub reason: Option<String>,
    pub samples: usize,
}

impl SimTrace {
    pub fn peak_force(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.state.contact_force)
            .fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.state.residual.abs())
            .fold(0.0, f64::max)
    }

    pub fn summary(&self) -> SimSummary {
        SimSummary {
            outcome: self.outcome,
            peak_force: self.peak_force(),
            buckled: self.buckled,
            terminated_early: self.terminated_early,
            reason: self.reason.clone(),
            samples: self.samples.len(),
        }
    }

    /// One row per sample, in millimetres, degrees, N and N·m.
    pub fn to_table(&self) -> Table {
        let (name, scale): (&str, fn(f64) -> f64) = match self.kind {
            CommandKind::Angle => ("command_deg", rad_to_deg),
            CommandKind::Position => ("command_mm", m_to_mm),
            CommandKind::Mass => ("command_kg", |x| x),
        };
        let mut t = Table::new([
            name,
            "interference_mm",
            "force_N",
            "torque_Nm",
            "wrist_angle_deg",
            "tip_deflection_mm",
            "residual_N",
        ]);
        for s in &self.samples {
            let e = &s.state;
            t.push(vec![
                scale(s.command),
                m_to_mm(e.interference),
                e.contact_force,
                e.wrist_torque,
                rad_to_deg(e.wrist_angle),
                m_to_mm(e.tip_deflection),
                e.residual,
            ]);
        }
        t
    }
}

/// Runs the chain over a sequence of commands, stopping at the safety force.
///
/// `interference` must be monotone between consecutive commands so the
/// safety crossing can be located by bisection; the final sample then sits
/// just at or above the safety force.
pub(crate) fn sweep(
    scenario: &ContactScenario,
    kind: CommandKind,
    commands: &[f64],
    interference: impl Fn(f64) -> f64,
) -> Result<SimTrace> {
    scenario.check()?;
    let safety = scenario.safety_force;
    let mut samples: Vec<TraceSample> = Vec::with_capacity(commands.len());
    let mut terminated = false;
    for &c in commands {
        let state = scenario.equilibrium(interference(c))?;
        if state.contact_force >= safety {
            let sample = match samples.last() {
                Some(prev) => refine_crossing(scenario, prev.command, c, &interference)?,
                None => TraceSample { command: c, state },
            };
            samples.push(sample);
            terminated = true;
            break;
        }
        samples.push(TraceSample { command: c, state });
    }
    let buckled = samples
        .iter()
        .any(|s| scenario.wrist.is_buckled(s.state.wrist_angle));
    Ok(SimTrace {
        kind,
        samples,
        terminated_early: terminated,
        reason: terminated.then(|| format!("contact force reached the {safety} N safety limit")),
        outcome: if terminated {
            Outcome::Failure
        } else {
            Outcome::Success
        },
        buckled,
    })
}

fn refine_crossing(
    scenario: &ContactScenario,
    mut lo: f64,
    mut hi: f64,
    interference: &impl Fn(f64) -> f64,
) -> Result<TraceSample> {
    let safety = scenario.safety_force;
    let mut hi_state = scenario.equilibrium(interference(hi))?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = scenario.equilibrium(interference(mid))?;
        if s.contact_force >= safety {
            hi = mid;
            hi_state = s;
        } else {
            lo = mid;
        }
    }
    Ok(TraceSample {
        command: hi,
        state: hi_state,
    })
}

/// `0, step, 2·step, …` up to and including `end`.
pub(crate) fn uniform_commands(end: f64, step: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut k = 0u64;
    loop {
        let c = step * k as f64;
        if c >= end {
            break;
        }
        v.push(c);
        k += 1;
    }
    v.push(end);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::ROBOTIQ;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gripper() -> Gripper {
        ROBOTIQ.gripper()
    }

    fn model() -> WristModel {
        WristModel {
            rotational_stiffness: 20.0,
            buckling: crate::BucklingPoint {
                angle: 0.07,
                torque: 1.4,
            },
            plateau_torque: 1.4,
            geometry: ROBOTIQ.geometry(),
            material: crate::Material::new("m", 1e7).unwrap(),
        }
    }

    fn chain(wrist: WristLaw) -> ContactScenario {
        ContactScenario {
            tool: Some(Tool {
                stiffness: 4000.0,
                travel: Some(0.005),
            }),
            contact_stiffness: Some(1300.0),
            ..ContactScenario::new(wrist, gripper())
        }
    }

    #[test]
    fn zero_interference_is_zero_force() {
        let e = chain(WristLaw::Rigid(RigidWrist::default()))
            .equilibrium(0.0)
            .unwrap();
        assert_eq!(e.contact_force, 0.0);
    }

    #[test]
    fn rigid_chain_matches_kinematics() {
        let s = ContactScenario::new(WristLaw::Bimodal(model()), gripper());
        let d = 0.03;
        let e = s.equilibrium(d).unwrap();
        assert_relative_eq!(e.wrist_angle, (d / 0.155).asin(), max_relative = 1e-12);
        assert_relative_eq!(
            e.contact_force,
            1.4 / (0.155 * e.wrist_angle.cos()),
            max_relative = 1e-12
        );
    }

    #[test]
    fn chain_inverse() {
        let s = chain(WristLaw::Rigid(RigidWrist::default()));
        for f in [0.0, 1.0, 19.0, 25.0, 60.0] {
            let d = s.chain_displacement(f);
            assert_relative_eq!(
                s.chain_force(d).unwrap(),
                f,
                max_relative = 1e-12,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn beyond_gripper_length_is_kinematic_limit() {
        let s = chain(WristLaw::Bimodal(model()));
        assert!(matches!(
            s.equilibrium(0.2),
            Err(Error::KinematicLimit { .. })
        ));
    }

    proptest! {
        #[test]
        fn force_balance_and_dominance(i in 0.0f64..0.06) {
            let soft = chain(WristLaw::Bimodal(model()));
            let hard = soft.with_wrist(WristLaw::Rigid(RigidWrist::default()));
            let a = soft.equilibrium(i).unwrap();
            let b = hard.equilibrium(i).unwrap();
            prop_assert!(a.residual.abs() < 1e-9);
            prop_assert!(b.residual.abs() < 1e-9);
            prop_assert!(a.contact_force <= b.contact_force * (1.0 + 1e-12));
        }

        #[test]
        fn force_monotone_in_interference(i in 0.0f64..0.06, di in 0.0f64..0.01) {
            let s = chain(WristLaw::Bimodal(model()));
            let a = s.equilibrium(i).unwrap();
            let b = s.equilibrium(i + di).unwrap();
            prop_assert!(b.wrist_angle >= a.wrist_angle);
        }
    }

    #[test]
    fn uniform_commands_end_exactly() {
        let c = uniform_commands(1.0, 0.3);
        assert_eq!(c, vec![0.0, 0.3, 0.6, 0.8999999999999999, 1.0]);
        assert_eq!(uniform_commands(0.9, 0.3).last(), Some(&0.9));
    }

    #[test]
    fn table_columns() {
        let s = ContactScenario::new(WristLaw::Bimodal(model()), gripper());
        let t = simulate_press(&s, 0.1, 0.01).unwrap().to_table();
        assert_eq!(t.headers[0], "command_deg");
        assert_eq!(t.rows.len(), 11);
    }
}
