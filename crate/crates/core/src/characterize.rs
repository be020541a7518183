//! Buckling-point extraction from measured torque–deflection curves and
//! calibration of the model's free constants.
//!
//! Extraction follows the compression-test procedure: a least-squares line is
//! fitted through the rising branch, the plateau level is taken from the
//! samples that have left that line near the peak torque, and the buckling
//! point is where the line meets the plateau level.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::curve::Table;
use crate::units::rad_to_deg;
use crate::wrist::assemble;
use crate::{
    BucklingPoint, DesignTargets, Error, HoneycombGeometry, Material, Result, ToleranceVerdict,
    TorqueDeflectionCurve,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractionParams {
    /// Fraction of peak torque where the rising-branch fit starts.
    pub window_low: f64,
    /// Fraction of peak torque where the rising-branch fit ends.
    pub window_high: f64,
    /// Band below the peak, as a fraction of peak, that counts as plateau.
    pub plateau_tolerance: f64,
    /// Interpolation-line level as a fraction of peak.
    pub interp_level: f64,
}

impl Default for ExtractionParams {
    fn default() -> Self {
        ExtractionParams {
            window_low: 0.20,
            window_high: 0.80,
            plateau_tolerance: 0.02,
            interp_level: 0.80,
        }
    }
}

impl ExtractionParams {
    pub fn check(&self) -> Result<()> {
        if !(self.window_low > 0.0) {
            return Err(Error::invalid(
                "window_low",
                self.window_low,
                "must be positive",
            ));
        }
        if !(self.window_high > self.window_low) {
            return Err(Error::invalid(
                "window_high",
                self.window_high,
                "must exceed window_low",
            ));
        }
        if !(self.interp_level >= self.window_high && self.interp_level <= 1.0) {
            return Err(Error::invalid(
                "interp_level",
                self.interp_level,
                "must lie in [window_high, 1]",
            ));
        }
        if !(self.plateau_tolerance > 0.0 && self.plateau_tolerance < 1.0) {
            return Err(Error::invalid(
                "plateau_tolerance",
                self.plateau_tolerance,
                "must lie in (0, 1)",
            ));
        }
        Ok(())
    }
}

/// Least-squares line `torque = slope·angle + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
}

impl LineFit {
    pub fn at(&self, angle: f64) -> f64 {
        self.slope * angle + self.intercept
    }

    fn through(points: &[(f64, f64)]) -> LineFit {
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), &(x, y)| {
            (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx))
        });
        let slope = sxy / sxx;
        LineFit {
            slope,
            intercept: my - slope * mx,
        }
    }
}

/// Result of extracting one curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub point: BucklingPoint,
    pub peak_torque: f64,
    pub plateau_torque: f64,
    pub line: LineFit,
    /// Indices of samples used for the line fit.
    pub fit_samples: Vec<usize>,
    /// Indices of samples averaged into the plateau level.
    pub plateau_samples: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    /// Headline buckling point (the replicate mean).
    pub extracted: BucklingPoint,
    pub peak_torque: f64,
    /// Slope of the fitted rising line, N·m/rad.
    pub pre_buckling_stiffness: f64,
    pub in_tolerance_vs: Option<TargetComparison>,
    pub replicates: Vec<BucklingPoint>,
    pub replicate_spread: Spread,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetComparison {
    pub targets: DesignTargets,
    pub verdict: ToleranceVerdict,
}

/// Sample standard deviation across replicates (zero for a single curve).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub angle_std: f64,
    pub torque_std: f64,
}

pub fn extract(curve: &TorqueDeflectionCurve, params: &ExtractionParams) -> Result<Extraction> {
    params.check()?;
    let s = curve.samples();
    if s.len() < 4 {
        return Err(Error::TooFewSamples {
            found: s.len(),
            needed: 4,
        });
    }

    // First occurrence of the maximum torque.
    let (peak_idx, peak) =
        s.iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bt), (i, &(_, t))| {
                if t > bt {
                    (i, t)
                } else {
                    (bi, bt)
                }
            });
    if !(peak > 0.0) {
        return Err(Error::NonPositivePeak { peak });
    }

    let (lo, hi) = (params.window_low * peak, params.window_high * peak);
    let fit_samples: Vec<usize> = (0..peak_idx)
        .filter(|&i| s[i].1 >= lo && s[i].1 <= hi)
        .collect();
    if fit_samples.len() < 3 {
        return Err(Error::SparseFitWindow {
            found: fit_samples.len(),
        });
    }
    let pts: Vec<(f64, f64)> = fit_samples.iter().map(|&i| s[i]).collect();
    let line = LineFit::through(&pts);
    if !(line.slope > 0.0) {
        return Err(Error::NonMonotoneRise { slope: line.slope });
    }

    // The plateau starts at the first sample past the fit window that is
    // inside the band below the peak and has dropped off the rising line by
    // more than the band width. Every later sample belongs to it.
    let band = params.plateau_tolerance * peak;
    let last_fit = *fit_samples.last().expect("non-empty");
    let start =
        (last_fit + 1..s.len()).find(|&i| s[i].1 >= peak - band && line.at(s[i].0) - s[i].1 > band);
    let plateau_samples: Vec<usize> = match start {
        Some(i) => (i..s.len()).collect(),
        None => Vec::new(),
    };
    if plateau_samples.len() < 3 {
        return Err(Error::NoPlateau {
            found: plateau_samples.len(),
        });
    }
    let plateau_torque =
        plateau_samples.iter().map(|&i| s[i].1).sum::<f64>() / plateau_samples.len() as f64;

    let angle = (plateau_torque - line.intercept) / line.slope;
    let point = BucklingPoint::new(angle, plateau_torque)?;
    Ok(Extraction {
        point,
        peak_torque: peak,
        plateau_torque,
        line,
        fit_samples,
        plateau_samples,
    })
}

pub fn extract_buckling_point(
    curve: &TorqueDeflectionCurve,
    params: &ExtractionParams,
) -> Result<CharacterizationReport> {
    average_replicates(std::slice::from_ref(curve), params)
}

/// Extracts every curve and averages the buckling points.
pub fn average_replicates(
    curves: &[TorqueDeflectionCurve],
    params: &ExtractionParams,
) -> Result<CharacterizationReport> {
    if curves.is_empty() {
        return Err(Error::TooFewSamples {
            found: 0,
            needed: 1,
        });
    }
    let runs = curves
        .iter()
        .enumerate()
        .map(|(index, c)| {
            extract(c, params).map_err(|e| Error::Replicate {
                index,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n = runs.len() as f64;
    let mean = |f: &dyn Fn(&Extraction) -> f64| runs.iter().map(f).sum::<f64>() / n;
    let std = |f: &dyn Fn(&Extraction) -> f64| {
        if runs.len() < 2 {
            return 0.0;
        }
        let m = mean(f);
        (runs.iter().map(|r| (f(r) - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };

    Ok(CharacterizationReport {
        extracted: BucklingPoint {
            angle: mean(&|r| r.point.angle),
            torque: mean(&|r| r.point.torque),
        },
        peak_torque: mean(&|r| r.peak_torque),
        pre_buckling_stiffness: mean(&|r| r.line.slope),
        in_tolerance_vs: None,
        replicates: runs.iter().map(|r| r.point).collect(),
        replicate_spread: Spread {
            angle_std: std(&|r| r.point.angle),
            torque_std: std(&|r| r.point.torque),
        },
    })
}

impl CharacterizationReport {
    pub fn compare(mut self, targets: &DesignTargets) -> Self {
        self.in_tolerance_vs = Some(TargetComparison {
            targets: targets.clone(),
            verdict: targets.assess(&self.extracted),
        });
        self
    }
}

/// Original samples plus the fitted line and plateau level, for plotting.
pub fn annotated_table(curve: &TorqueDeflectionCurve, extraction: &Extraction) -> Table {
    let mut t = Table::new([
        "angle_deg",
        "torque_Nm",
        "fit_Nm",
        "plateau_Nm",
        "in_fit_window",
        "in_plateau",
    ]);
    for (i, &(a, tq)) in curve.samples().iter().enumerate() {
        t.push(vec![
            rad_to_deg(a),
            tq,
            extraction.line.at(a),
            extraction.plateau_torque,
            f64::from(u8::from(extraction.fit_samples.contains(&i))),
            f64::from(u8::from(extraction.plateau_samples.contains(&i))),
        ]);
    }
    t
}

// ---------------------------------------------------------------------------
// Calibration

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeParameter {
    YoungModulus,
    RingRadius,
    EffectiveLengthFactor,
}

impl FreeParameter {
    pub fn name(self) -> &'static str {
        match self {
            FreeParameter::YoungModulus => "E",
            FreeParameter::RingRadius => "R",
            FreeParameter::EffectiveLengthFactor => "effective_length_factor",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "E" | "young_modulus" => Some(FreeParameter::YoungModulus),
            "R" | "ring_radius" => Some(FreeParameter::RingRadius),
            "K" | "effective_length_factor" => Some(FreeParameter::EffectiveLengthFactor),
            _ => None,
        }
    }
}

/// One measured buckling point and which of its coordinates constrain the fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub label: String,
    pub geometry: HoneycombGeometry,
    pub measured: BucklingPoint,
    pub fit_torque: bool,
    pub fit_angle: bool,
}

impl Observation {
    pub fn both(
        label: impl Into<String>,
        geometry: HoneycombGeometry,
        measured: BucklingPoint,
    ) -> Self {
        Observation {
            label: label.into(),
            geometry,
            measured,
            fit_torque: true,
            fit_angle: true,
        }
    }

    pub fn torque_only(
        label: impl Into<String>,
        geometry: HoneycombGeometry,
        measured: BucklingPoint,
    ) -> Self {
        Observation {
            fit_angle: false,
            ..Observation::both(label, geometry, measured)
        }
    }

    fn constraints(&self) -> usize {
        usize::from(self.fit_torque) + usize::from(self.fit_angle)
    }
}

/// Shared model constants, applied to every observation's geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConstants {
    pub material: Material,
    pub ring_radius: f64,
    pub effective_length_factor: f64,
}

impl ModelConstants {
    pub fn apply(&self, g: &HoneycombGeometry) -> HoneycombGeometry {
        HoneycombGeometry {
            ring_radius: self.ring_radius,
            effective_length_factor: self.effective_length_factor,
            ..g.clone()
        }
    }

    pub fn predict(&self, g: &HoneycombGeometry) -> BucklingPoint {
        assemble(&self.apply(g), &self.material).buckling
    }

    fn get(&self, p: FreeParameter) -> f64 {
        match p {
            FreeParameter::YoungModulus => self.material.young_modulus,
            FreeParameter::RingRadius => self.ring_radius,
            FreeParameter::EffectiveLengthFactor => self.effective_length_factor,
        }
    }

    fn set(&mut self, p: FreeParameter, v: f64) {
        match p {
            FreeParameter::YoungModulus => self.material.young_modulus = v,
            FreeParameter::RingRadius => self.ring_radius = v,
            FreeParameter::EffectiveLengthFactor => self.effective_length_factor = v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationResidual {
    pub label: String,
    pub measured: BucklingPoint,
    pub predicted: BucklingPoint,
    /// `predicted / measured − 1` for torque.
    pub torque_rel: f64,
    /// `predicted / measured − 1` for angle.
    pub angle_rel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub constants: ModelConstants,
    pub free: Vec<FreeParameter>,
    pub residuals: Vec<ObservationResidual>,
    pub iterations: usize,
}

fn residual_vector(c: &ModelConstants, obs: &[Observation]) -> Vec<f64> {
    let mut r = Vec::new();
    for o in obs {
        let p = c.predict(&o.geometry);
        if o.fit_torque {
            r.push((p.torque / o.measured.torque).ln());
        }
        if o.fit_angle {
            r.push((p.angle / o.measured.angle).ln());
        }
    }
    r
}

/// Gauss–Newton fit of the selected constants in log space, minimising the
/// squared log-ratio between predicted and measured buckling coordinates.
pub fn calibrate(
    observations: &[Observation],
    start: &ModelConstants,
    free: &[FreeParameter],
) -> Result<Calibration> {
    let mut free: Vec<FreeParameter> = free.to_vec();
    free.sort();
    free.dedup();
    let names = free.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ");
    let constraints: usize = observations.iter().map(Observation::constraints).sum();
    if free.len() > constraints {
        return Err(Error::Underdetermined {
            free: free.len(),
            names,
            constraints,
        });
    }
    start.material.check()?;
    for (name, v) in [
        ("ring_radius", start.ring_radius),
        ("effective_length_factor", start.effective_length_factor),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(name, v, "must be positive"));
        }
    }

    let mut current = start.clone();
    let mut iterations = 0;
    if !free.is_empty() {
        let rows = constraints;
        let cols = free.len();
        for it in 0..100 {
            iterations = it + 1;
            let r0 = DVector::from_vec(residual_vector(&current, observations));
            let mut jac = DMatrix::zeros(rows, cols);
            for (j, &p) in free.iter().enumerate() {
                let h: f64 = 1e-6;
                let v = current.get(p);
                let mut plus = current.clone();
                plus.set(p, v * h.exp());
                let mut minus = current.clone();
                minus.set(p, v * (-h).exp());
                let rp = residual_vector(&plus, observations);
                let rm = residual_vector(&minus, observations);
                for i in 0..rows {
                    jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
                }
            }
            let svd = jac.clone().svd(true, true);
            let smax = svd.singular_values.max();
            let smin = svd.singular_values.min();
            if !(smax > 0.0) || smin / smax < 1e-8 {
                return Err(Error::Unidentifiable { names });
            }
            let step = svd.solve(&(-&r0), 0.0).map_err(|_| Error::Unidentifiable {
                names: names.clone(),
            })?;
            for (j, &p) in free.iter().enumerate() {
                let v = current.get(p);
                current.set(p, v * step[j].exp());
            }
            if step.amax() < 1e-13 {
                break;
            }
        }
    }

    let residuals = observations
        .iter()
        .map(|o| {
            let p = current.predict(&o.geometry);
            ObservationResidual {
                label: o.label.clone(),
                measured: o.measured,
                predicted: p,
                torque_rel: p.torque / o.measured.torque - 1.0,
                angle_rel: p.angle / o.measured.angle - 1.0,
            }
        })
        .collect();
    Ok(Calibration {
        constants: current,
        free,
        residuals,
        iterations,
    })
}
