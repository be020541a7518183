//! Wrist-level torque–angle law of a ring of modules around a universal joint.
//!
//! The joint blocks axial compression and yaw, so a tilt `θ` about an axis at
//! ring angle `φ_axis` compresses module `i` by `R·sin(φ_i − φ_axis)·θ`.
//! Modules on the opposite side stretch with the same stiffness; only the
//! compressed side can buckle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::mechanics::{effective_stiffness, module_response, ModuleResponse};
use crate::{
    BucklingPoint, Error, Gripper, HoneycombGeometry, Material, Result, TorqueDeflectionCurve,
};

/// A monotone wrist torque law `τ(θ)` for `θ ≥ 0`.
pub trait TorqueLaw {
    fn torque_at(&self, angle: f64) -> f64;
    /// Pre-buckling rotational stiffness, N·m/rad.
    fn rotational_stiffness(&self) -> f64;
    /// Start of the compliant branch, if the law has one.
    fn buckling_angle(&self) -> Option<f64>;

    fn is_buckled(&self, angle: f64) -> bool {
        self.buckling_angle().is_some_and(|b| angle > b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WristModel {
    pub rotational_stiffness: f64,
    pub buckling: BucklingPoint,
    pub plateau_torque: f64,
    pub geometry: HoneycombGeometry,
    pub material: Material,
}

impl WristModel {
    pub fn module_response(&self) -> ModuleResponse {
        module_response(&self.geometry, &self.material)
    }
}

impl TorqueLaw for WristModel {
    fn torque_at(&self, angle: f64) -> f64 {
        if angle <= self.buckling.angle {
            self.rotational_stiffness * angle
        } else {
            self.plateau_torque
        }
    }

    fn rotational_stiffness(&self) -> f64 {
        self.rotational_stiffness
    }

    fn buckling_angle(&self) -> Option<f64> {
        Some(self.buckling.angle)
    }
}

/// Baseline wrist: a stiff linear spring that never buckles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidWrist {
    pub rotational_stiffness: f64,
}

impl RigidWrist {
    pub const DEFAULT_STIFFNESS: f64 = 1.0e4;
}

impl Default for RigidWrist {
    fn default() -> Self {
        RigidWrist {
            rotational_stiffness: Self::DEFAULT_STIFFNESS,
        }
    }
}

impl TorqueLaw for RigidWrist {
    fn torque_at(&self, angle: f64) -> f64 {
        self.rotational_stiffness * angle
    }

    fn rotational_stiffness(&self) -> f64 {
        self.rotational_stiffness
    }

    fn buckling_angle(&self) -> Option<f64> {
        None
    }
}

fn module_angle(i: usize, n: usize) -> f64 {
    2.0 * PI * i as f64 / n as f64
}

/// Compression of every module for a tilt `angle` about `axis`.
pub fn module_compressions(g: &HoneycombGeometry, axis: f64, angle: f64) -> Vec<f64> {
    (0..g.n_modules)
        .map(|i| g.ring_radius * (module_angle(i, g.n_modules) - axis).sin() * angle)
        .collect()
}

/// `K_eq·Σ R² sin²(φ_i − φ_axis)`, summed module by module.
pub fn rotational_stiffness_about(g: &HoneycombGeometry, m: &Material, axis: f64) -> f64 {
    let k_eq = effective_stiffness(g, m);
    (0..g.n_modules)
        .map(|i| {
            let arm = g.ring_radius * (module_angle(i, g.n_modules) - axis).sin();
            k_eq * arm * arm
        })
        .sum()
}

/// Wrist law for the worst-case bending axis, where one module sits at the
/// full lever arm `R`.
pub fn assemble(g: &HoneycombGeometry, m: &Material) -> WristModel {
    let module = module_response(g, m);
    let n = g.n_modules as f64;
    let r = g.ring_radius;
    let rotational_stiffness = module.k_eq * n * r * r / 2.0;
    let angle = module.f_cr / (module.k_eq * r);
    let torque = rotational_stiffness * angle;
    WristModel {
        rotational_stiffness,
        buckling: BucklingPoint { angle, torque },
        plateau_torque: torque,
        geometry: g.clone(),
        material: m.clone(),
    }
}

/// Uniformly samples `law` on `[0, max_angle]`.
pub fn predicted_curve(
    law: &impl TorqueLaw,
    max_angle: f64,
    n_samples: usize,
) -> Result<TorqueDeflectionCurve> {
    if !(max_angle.is_finite() && max_angle > 0.0) {
        return Err(Error::invalid("max_angle", max_angle, "must be positive"));
    }
    if n_samples < 4 {
        return Err(Error::TooFewSamples {
            found: n_samples,
            needed: 4,
        });
    }
    let last = (n_samples - 1) as f64;
    TorqueDeflectionCurve::new(
        (0..n_samples)
            .map(|k| {
                let a = max_angle * k as f64 / last;
                (a, law.torque_at(a))
            })
            .collect(),
    )
}

/// Largest wrist angle that keeps the fingertip within `tip_limit`.
pub fn angle_limit(tip_limit: f64, gripper_length: f64) -> f64 {
    (tip_limit / gripper_length).asin()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum TipDeflection {
    PreBuckling {
        angle: f64,
        deflection: f64,
    },
    /// Torque at or above the plateau; deflection is unbounded under this model.
    PostBuckling,
}

impl TipDeflection {
    pub fn deflection(&self) -> Option<f64> {
        match self {
            TipDeflection::PreBuckling { deflection, .. } => Some(*deflection),
            TipDeflection::PostBuckling => None,
        }
    }

    pub fn is_post_buckling(&self) -> bool {
        matches!(self, TipDeflection::PostBuckling)
    }
}

pub fn tip_deflection(model: &WristModel, gripper: &Gripper, wrist_torque: f64) -> TipDeflection {
    if wrist_torque >= model.buckling.torque {
        return TipDeflection::PostBuckling;
    }
    let angle = wrist_torque.max(0.0) / model.rotational_stiffness;
    TipDeflection::PreBuckling {
        angle,
        deflection: gripper.length * angle.sin(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{deg_to_rad, mm_to_m, rad_to_deg};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn geometry() -> HoneycombGeometry {
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

    fn tpu() -> Material {
        Material::new("TPU-95A", 26.0e6).unwrap()
    }

    #[test]
    fn twelve_modules() {
        let g = geometry();
        let w = assemble(&g, &tpu());
        let m = w.module_response();
        assert_relative_eq!(
            w.rotational_stiffness,
            6.0 * m.k_eq * 0.03 * 0.03,
            max_relative = 1e-14
        );
        assert_relative_eq!(w.buckling.torque, 6.0 * 0.03 * m.f_cr, max_relative = 1e-14);
        assert_eq!(w.plateau_torque, w.buckling.torque);
    }

    #[test]
    fn doubling_radius() {
        let g = geometry();
        let mut g2 = g.clone();
        g2.ring_radius *= 2.0;
        let a = assemble(&g, &tpu());
        let b = assemble(&g2, &tpu());
        assert_relative_eq!(
            b.buckling.torque,
            2.0 * a.buckling.torque,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            b.buckling.angle,
            0.5 * a.buckling.angle,
            max_relative = 1e-14
        );
    }

    #[test]
    fn axis_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3usize, 4, 5, 12, 17] {
            let mut g = geometry();
            g.n_modules = n;
            let reference = assemble(&g, &tpu()).rotational_stiffness;
            for _ in 0..64 {
                let axis = rng.random_range(0.0..2.0 * PI);
                let k = rotational_stiffness_about(&g, &tpu(), axis);
                assert!((k / reference - 1.0).abs() < 1e-9, "n={n} axis={axis}");
            }
        }
    }

    #[test]
    fn buckling_torque_matches_axis_search() {
        let g = geometry();
        let m = tpu();
        let w = assemble(&g, &m);
        let f_cr = w.module_response().f_cr;
        let k_eq = w.module_response().k_eq;
        // For each axis, tilt until the most compressed module reaches f_cr
        // and record the torque; keep the smallest.
        let steps = 360_000;
        let mut best = f64::INFINITY;
        for j in 0..steps {
            let axis = 2.0 * PI * j as f64 / steps as f64;
            let worst = module_compressions(&g, axis, 1.0)
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            let theta = f_cr / (k_eq * worst);
            best = best.min(rotational_stiffness_about(&g, &m, axis) * theta);
        }
        assert!((best / w.buckling.torque - 1.0).abs() < 1e-9);
    }

    #[test]
    fn torque_law_branches() {
        let w = assemble(&geometry(), &tpu());
        assert_eq!(w.torque_at(0.0), 0.0);
        assert_relative_eq!(
            w.torque_at(w.buckling.angle),
            w.buckling.torque,
            max_relative = 1e-14
        );
        assert_eq!(w.torque_at(2.0 * w.buckling.angle), w.plateau_torque);
    }

    proptest! {
        #[test]
        fn torque_law_monotone_and_continuous(a in 0.0f64..0.5, da in 0.0f64..0.01) {
            let w = assemble(&geometry(), &tpu());
            prop_assert!(w.torque_at(a + da) >= w.torque_at(a));
            let eps = 1e-9;
            prop_assert!((w.torque_at(a + eps) - w.torque_at(a)).abs() <= w.rotational_stiffness * eps * 1.0001);
        }
    }

    #[test]
    fn predicted_curve_samples() {
        let w = assemble(&geometry(), &tpu());
        let c = predicted_curve(&w, deg_to_rad(10.0), 100).unwrap();
        assert_eq!(c.len(), 100);
        assert!(c.samples().windows(2).all(|p| p[1].0 > p[0].0));
        assert_eq!(c.samples()[99].1, w.plateau_torque);
        assert!(predicted_curve(&w, 0.1, 3).is_err());
        assert!(predicted_curve(&w, 0.0, 10).is_err());
    }

    #[test]
    fn rigid_curve_is_near_vertical() {
        let c = predicted_curve(&RigidWrist::default(), deg_to_rad(1.0), 10).unwrap();
        let (a, t) = c.samples()[9];
        assert!(t / a >= 1.0e4);
        assert_eq!(RigidWrist::default().buckling_angle(), None);
    }

    #[test]
    fn table_angle_limits() {
        for (len_mm, deg) in [(135.0, 4.20), (155.0, 3.70), (205.0, 2.80)] {
            let a = rad_to_deg(angle_limit(0.010, mm_to_m(len_mm)));
            assert!((a - deg).abs() <= 0.1, "{len_mm} mm -> {a}");
        }
    }

    #[test]
    fn tip_deflection_regimes() {
        let w = assemble(&geometry(), &tpu());
        let gr = Gripper::new("g", 1.1, 0.155).unwrap();
        assert_eq!(tip_deflection(&w, &gr, 0.0).deflection(), Some(0.0));
        let half = tip_deflection(&w, &gr, 0.5 * w.buckling.torque);
        assert_relative_eq!(
            half.deflection().unwrap(),
            0.155 * (0.5 * w.buckling.angle).sin(),
            max_relative = 1e-12
        );
        assert!(tip_deflection(&w, &gr, w.buckling.torque).is_post_buckling());
    }
}
