//! Stiffness and critical load of a single honeycomb module.
//!
//! A module carries a vertical load `F` split evenly between two halves. Each
//! half is a diagonal beam (axial stiffness `k1`, tilted by `γ`) whose lower
//! node P is held horizontally by the central beam (axial stiffness `k2`).
//! Only axial beam forces are kept; bending of the diagonal is ignored until
//! it buckles.
//!
//! [`effective_stiffness`] is the closed form; [`oracle_solve`] assembles the
//! same springs into a 2-DOF stiffness matrix and solves it numerically. The
//! two must agree to rounding.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::{Error, HoneycombGeometry, Material, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModuleResponse {
    /// Diagonal-beam axial stiffness, N/m.
    pub k1: f64,
    /// Central-beam axial stiffness, N/m.
    pub k2: f64,
    /// Effective vertical module stiffness, N/m.
    pub k_eq: f64,
    /// Vertical module load at which the diagonal beams buckle, N.
    pub f_cr: f64,
    pub delta_y_at_buckling: f64,
}

/// Equilibrium of one module under a vertical load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModuleState {
    pub f_i: f64,
    pub delta_y: f64,
    /// Horizontal displacement of node P.
    pub delta_x: f64,
    /// Axial shortening of the diagonal beam.
    pub delta_h: f64,
    /// Axial force in the diagonal beam.
    pub f_a: f64,
}

/// Axial stiffnesses `(k1, k2)` of the diagonal and central beams.
pub fn beam_stiffnesses(g: &HoneycombGeometry, m: &Material) -> (f64, f64) {
    let e = m.young_modulus;
    let k1 = e * g.diagonal_area() / g.diagonal_height();
    let k2 = e * g.central_area() / g.central_height;
    (k1, k2)
}

/// Vertical stiffness `K_eq` with `F = K_eq·δ_y`.
///
/// Diagonal compliance and the central beam's horizontal give act in
/// series: `K_eq = 2·k1·k2·cos²γ / (k2 + k1·sin²γ)`.
pub fn effective_stiffness(g: &HoneycombGeometry, m: &Material) -> f64 {
    let (k1, k2) = beam_stiffnesses(g, m);
    let (s, c) = g.tilt.sin_cos();
    2.0 * k1 * k2 * c * c / (k2 + k1 * s * s)
}

/// Module load at which the diagonal beams reach their Euler load.
///
/// The beam height enters through the effective buckling length
/// `factor·h`; the diagonal force is `F / (2 cos γ)`.
pub fn critical_module_load(g: &HoneycombGeometry, m: &Material) -> f64 {
    let buckling_length = g.effective_length_factor * g.diagonal_height();
    let p_cr = PI * PI * m.young_modulus * g.second_moment() / (buckling_length * buckling_length);
    2.0 * g.tilt.cos() * p_cr
}

pub fn module_response(g: &HoneycombGeometry, m: &Material) -> ModuleResponse {
    let (k1, k2) = beam_stiffnesses(g, m);
    let k_eq = effective_stiffness(g, m);
    let f_cr = critical_module_load(g, m);
    ModuleResponse {
        k1,
        k2,
        k_eq,
        f_cr,
        delta_y_at_buckling: f_cr / k_eq,
    }
}

/// An axial spring acting on node P. `direction` is the unit vector along
/// which positive shortening is measured, in `(x, y)` with `y` downward.
#[derive(Debug, Clone, Copy)]
struct AxialSpring {
    stiffness: f64,
    direction: Vector2<f64>,
}

fn assemble(springs: &[AxialSpring]) -> Matrix2<f64> {
    springs.iter().fold(Matrix2::zeros(), |k, s| {
        k + s.direction * s.direction.transpose() * s.stiffness
    })
}

/// Solves the half-module spring network for a vertical load `f_i`.
///
/// By symmetry only node P of one half is free; it carries `f_i / 2`
/// vertically and is restrained by the diagonal and central springs.
pub fn oracle_solve(g: &HoneycombGeometry, m: &Material, f_i: f64) -> Result<ModuleState> {
    if !(f_i.is_finite() && f_i >= 0.0) {
        return Err(Error::invalid("f_i", f_i, "load must be non-negative"));
    }
    let (k1, k2) = beam_stiffnesses(g, m);
    let (s, c) = g.tilt.sin_cos();
    let springs = [
        AxialSpring {
            stiffness: k1,
            direction: Vector2::new(-s, c),
        },
        AxialSpring {
            stiffness: k2,
            direction: Vector2::new(1.0, 0.0),
        },
    ];
    let k = assemble(&springs);
    let load = Vector2::new(0.0, f_i / 2.0);
    let u = k.lu().solve(&load).ok_or(Error::SingularGeometry {
        gamma_deg: g.tilt.to_degrees(),
    })?;
    if !(u[0].is_finite() && u[1].is_finite()) {
        return Err(Error::SingularGeometry {
            gamma_deg: g.tilt.to_degrees(),
        });
    }
    let (delta_x, delta_y) = (u[0], u[1]);
    Ok(ModuleState {
        f_i,
        delta_y,
        delta_x,
        delta_h: delta_y * c - delta_x * s,
        f_a: f_i / (2.0 * c),
    })
}

/// Vertical stiffness measured by the oracle with a unit load.
pub fn oracle_stiffness(g: &HoneycombGeometry, m: &Material) -> Result<f64> {
    Ok(1.0 / oracle_solve(g, m, 1.0)?.delta_y)
}
