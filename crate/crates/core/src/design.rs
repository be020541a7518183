//! Inverse design of beam width `b` and tilt `γ` for a target buckling point.
//!
//! A regular grid over `(b, γ)` is scored by relative torque error, with the
//! angle limit as a hard constraint. The best cell is then refined by
//! bisection on `b` at fixed `γ` (wrist buckling torque rises strictly with
//! `b`). All other geometry stays fixed.

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::Table;
use crate::units::{m_to_mm, rad_to_deg};
use crate::wrist::{angle_limit, assemble};
use crate::{BucklingPoint, DesignTargets, Error, Gripper, HoneycombGeometry, Material, Result};

/// Builds targets from a gripper and an explicit torque target.
///
/// The angle limit keeps the fingertip within `tip_limit`:
/// `asin(tip_limit / gripper.length)`.
pub fn derive_targets(
    gripper: &Gripper,
    payload: f64,
    tip_limit: f64,
    torque_target: f64,
) -> Result<DesignTargets> {
    if !(tip_limit.is_finite() && tip_limit > 0.0) {
        return Err(Error::invalid(
            "tip_deflection_limit",
            tip_limit,
            "degenerate tip limit gives a zero angle limit",
        ));
    }
    if tip_limit >= gripper.length {
        return Err(Error::invalid(
            "tip_deflection_limit",
            tip_limit,
            "tip limit must be shorter than the gripper",
        ));
    }
    let t = DesignTargets {
        buckling_torque: torque_target,
        buckling_angle_limit: angle_limit(tip_limit, gripper.length),
        torque_tolerance: crate::types::DEFAULT_TORQUE_TOLERANCE,
        tip_deflection_limit: tip_limit,
        payload,
    };
    t.check()?;
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignBounds {
    pub b_min: f64,
    pub b_max: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
}

impl DesignBounds {
    pub fn check(&self) -> Result<()> {
        if !(self.b_min.is_finite() && self.b_min > 0.0) {
            return Err(Error::invalid("b_min", self.b_min, "must be positive"));
        }
        if !(self.b_max.is_finite() && self.b_max >= self.b_min) {
            return Err(Error::invalid(
                "b_max",
                self.b_max,
                "must be at least b_min",
            ));
        }
        if !(self.gamma_min.is_finite() && self.gamma_min >= 0.0) {
            return Err(Error::invalid(
                "gamma_min",
                self.gamma_min,
                "must be non-negative",
            ));
        }
        if !(self.gamma_max.is_finite() && self.gamma_max >= self.gamma_min) {
            return Err(Error::invalid(
                "gamma_max",
                self.gamma_max,
                "must be at least gamma_min",
            ));
        }
        if self.gamma_max >= FRAC_PI_2 {
            return Err(Error::SingularGeometry {
                gamma_deg: rad_to_deg(self.gamma_max),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub b_steps: usize,
    pub gamma_steps: usize,
    /// Refinement stops once the relative torque error drops below this.
    pub refine_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            b_steps: 200,
            gamma_steps: 200,
            refine_tolerance: 1.0e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSolution {
    pub geometry: HoneycombGeometry,
    pub achieved: BucklingPoint,
    pub target: DesignTargets,
    pub in_tolerance: bool,
    /// Relative torque error `|achieved − target| / target`.
    pub torque_error: f64,
    /// Angle limit minus achieved angle.
    pub angle_margin: f64,
}

/// One evaluated grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub b: f64,
    pub gamma: f64,
    pub torque: f64,
    pub angle: f64,
    /// Angle at or below the limit.
    pub angle_ok: bool,
    /// Inside the full tolerance box.
    pub in_tolerance: bool,
}

impl GridCell {
    fn score(&self, target: f64) -> f64 {
        ((self.torque - target) / target).abs()
    }
}

fn forward(fixed: &HoneycombGeometry, material: &Material, b: f64, gamma: f64) -> BucklingPoint {
    assemble(&fixed.with_beam(b, gamma), material).buckling
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 || hi == lo {
        return vec![lo];
    }
    let last = (n - 1) as f64;
    (0..n).map(|i| lo + (hi - lo) * i as f64 / last).collect()
}

/// Total order on candidates: score, then smaller γ, then smaller b.
fn rank(a: &GridCell, b: &GridCell, target: f64) -> Ordering {
    a.score(target)
        .total_cmp(&b.score(target))
        .then(a.gamma.total_cmp(&b.gamma))
        .then(a.b.total_cmp(&b.b))
}

/// Evaluates the full grid, rows ordered by γ then b.
pub fn feasibility_map(
    targets: &DesignTargets,
    fixed: &HoneycombGeometry,
    material: &Material,
    bounds: &DesignBounds,
    options: &SolverOptions,
) -> Result<Vec<GridCell>> {
    bounds.check()?;
    targets.check()?;
    let bs = linspace(bounds.b_min, bounds.b_max, options.b_steps);
    let gammas = linspace(bounds.gamma_min, bounds.gamma_max, options.gamma_steps);
    Ok(gammas
        .par_iter()
        .flat_map_iter(|&gamma| {
            bs.iter().map(move |&b| {
                let p = forward(fixed, material, b, gamma);
                let verdict = targets.assess(&p);
                GridCell {
                    b,
                    gamma,
                    torque: p.torque,
                    angle: p.angle,
                    angle_ok: verdict.within_angle,
                    in_tolerance: verdict.in_tolerance,
                }
            })
        })
        .collect())
}

pub fn solve(
    targets: &DesignTargets,
    fixed: &HoneycombGeometry,
    material: &Material,
    bounds: &DesignBounds,
    options: &SolverOptions,
) -> Result<DesignSolution> {
    let map = feasibility_map(targets, fixed, material, bounds, options)?;
    Ok(solve_on_map(
        targets, fixed, material, bounds, options, &map,
    ))
}

/// Picks and refines the best cell of an already evaluated grid.
pub fn solve_on_map(
    targets: &DesignTargets,
    fixed: &HoneycombGeometry,
    material: &Material,
    bounds: &DesignBounds,
    options: &SolverOptions,
    map: &[GridCell],
) -> DesignSolution {
    let tau = targets.buckling_torque;
    let best_of =
        |cells: &mut dyn Iterator<Item = &GridCell>| cells.min_by(|a, b| rank(a, b, tau)).copied();
    let feasible = best_of(&mut map.iter().filter(|c| c.angle_ok));
    let (b, gamma) = match feasible {
        Some(cell) => refine(targets, fixed, material, bounds, options, cell),
        None => {
            let cell = best_of(&mut map.iter()).expect("grid is never empty");
            (cell.b, cell.gamma)
        }
    };

    let geometry = fixed.with_beam(b, gamma);
    let achieved = assemble(&geometry, material).buckling;
    let verdict = targets.assess(&achieved);
    DesignSolution {
        geometry,
        achieved,
        target: targets.clone(),
        in_tolerance: verdict.in_tolerance,
        torque_error: verdict.torque_error.abs(),
        angle_margin: verdict.angle_margin,
    }
}

/// Bisection on `b` along the cell's γ, kept inside the angle limit.
fn refine(
    targets: &DesignTargets,
    fixed: &HoneycombGeometry,
    material: &Material,
    bounds: &DesignBounds,
    options: &SolverOptions,
    cell: GridCell,
) -> (f64, f64) {
    let gamma = cell.gamma;
    let tau = targets.buckling_torque;
    let limit = targets.buckling_angle_limit;
    let eval = |b: f64| forward(fixed, material, b, gamma);
    let rel = |b: f64| (eval(b).torque - tau) / tau;

    if rel(cell.b).abs() < options.refine_tolerance {
        return (cell.b, gamma);
    }

    let step = if options.b_steps > 1 {
        (bounds.b_max - bounds.b_min) / (options.b_steps - 1) as f64
    } else {
        0.0
    };
    let mut lo = (cell.b - step).max(bounds.b_min);
    let mut hi = (cell.b + step).min(bounds.b_max);

    // Angle grows with b; pull `hi` back to the feasible side of the limit.
    if eval(hi).angle > limit {
        let (mut ok, mut bad) = (cell.b, hi);
        for _ in 0..200 {
            let mid = 0.5 * (ok + bad);
            if mid <= ok || mid >= bad {
                break;
            }
            if eval(mid).angle <= limit {
                ok = mid;
            } else {
                bad = mid;
            }
        }
        hi = ok;
    }

    if rel(lo) > 0.0 || rel(hi) < 0.0 {
        // Target not bracketed inside the feasible neighbourhood.
        return [lo, cell.b, hi]
            .into_iter()
            .min_by(|a, b| rel(*a).abs().total_cmp(&rel(*b).abs()).then(a.total_cmp(b)))
            .map(|b| (b, gamma))
            .expect("three candidates");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let e = rel(mid);
        if e.abs() < options.refine_tolerance || mid <= lo || mid >= hi {
            return (mid, gamma);
        }
        if e < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi), gamma)
}

pub fn map_to_table(map: &[GridCell]) -> Table {
    let mut t = Table::new(["b_mm", "gamma_deg", "torque_Nm", "angle_deg", "feasible"]);
    for c in map {
        t.push(vec![
            m_to_mm(c.b),
            rad_to_deg(c.gamma),
            c.torque,
            rad_to_deg(c.angle),
            if c.in_tolerance { 1.0 } else { 0.0 },
        ]);
    }
    t
}
