#![allow(non_snake_case)]

use std::path::{Path, PathBuf};

use biflex_core::characterize::{
    annotated_table, average_replicates, calibrate, extract, FreeParameter, ModelConstants,
    Observation,
};
use biflex_core::config::{config_to_json, load_config, WristConfig};
use biflex_core::curve::{curve_to_table, read_curve, Table};
use biflex_core::design::{
    feasibility_map, map_to_table, solve_on_map, DesignBounds, SolverOptions,
};
use biflex_core::presets;
use biflex_core::sim::{
    buckling_threshold_mass, mass_sweep, pass_threshold_mass, simulate_constrained_grasp,
    simulate_press, simulate_wipe, LoadCase, Outcome, SimTrace, SurfaceProfile,
};
use biflex_core::units::{deg_to_rad, m_to_mm, mm_to_m, pa_to_mpa, rad_to_deg};
use biflex_core::wrist::{assemble, predicted_curve};
use biflex_core::{characterize::ExtractionParams, ToleranceVerdict, TorqueDeflectionCurve};
use serde::Serialize;

use crate::args::{AnalyzeArgs, CharacterizeArgs, DesignArgs, ReportArgs, SimMode, SimulateArgs};
use crate::error::{CliError, CliResult, InputContext};
use crate::manifest::{read_manifest, ManifestBuilder, PointRecord};
use crate::output::{print_json, write_atomic, write_table};
use crate::scenario::{load_scenario, WristKind};
use crate::svg::{Plot, Series};

#[derive(Serialize)]
struct Verdict {
    torque_error: f64,
    angle_margin_deg: f64,
    within_torque: bool,
    within_angle: bool,
    in_tolerance: bool,
}

impl From<ToleranceVerdict> for Verdict {
    fn from(v: ToleranceVerdict) -> Self {
        Verdict {
            torque_error: v.torque_error,
            angle_margin_deg: rad_to_deg(v.angle_margin),
            within_torque: v.within_torque,
            within_angle: v.within_angle,
            in_tolerance: v.in_tolerance,
        }
    }
}

#[derive(Serialize)]
struct Point {
    angle_deg: f64,
    torque_Nm: f64,
}

impl From<biflex_core::BucklingPoint> for Point {
    fn from(p: biflex_core::BucklingPoint) -> Self {
        Point {
            angle_deg: rad_to_deg(p.angle),
            torque_Nm: p.torque,
        }
    }
}

fn load(path: &Path, m: &mut ManifestBuilder) -> CliResult<WristConfig> {
    m.input(path);
    load_config(path).as_input()
}

fn write_svg(path: &Path, plot: &Plot, m: &mut ManifestBuilder) -> CliResult<()> {
    write_atomic(path, plot.render().as_bytes())?;
    m.output(path);
    Ok(())
}

fn write_csv(path: &Path, table: &Table, m: &mut ManifestBuilder) -> CliResult<()> {
    write_table(path, table)?;
    m.output(path);
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ModuleOut {
    k1_N_per_m: f64,
    k2_N_per_m: f64,
    k_eq_N_per_m: f64,
    f_cr_N: f64,
}

#[derive(Serialize)]
struct AnalyzeOut {
    gripper: String,
    calibrated: bool,
    young_modulus_MPa: f64,
    module: ModuleOut,
    rotational_stiffness_Nm_per_rad: f64,
    buckling: Point,
    plateau_torque_Nm: f64,
    verdict: Verdict,
    warnings: Vec<String>,
}

pub fn analyze(a: AnalyzeArgs) -> CliResult<()> {
    let mut m = ManifestBuilder::new("analyze");
    let cfg = load(&a.config, &mut m)?;
    let report = cfg.geometry.validate();
    for w in &report.warnings {
        log::warn!("{w}");
    }
    let model = assemble(&cfg.geometry, &cfg.material);
    let module = model.module_response();

    if a.curve.is_some() || a.svg.is_some() {
        m.set("max_angle_deg", a.max_angle_deg);
        m.set("samples", a.samples);
        let curve = predicted_curve(&model, deg_to_rad(a.max_angle_deg), a.samples).as_input()?;
        if let Some(p) = &a.curve {
            write_csv(p, &curve_to_table(&curve), &mut m)?;
        }
        if let Some(p) = &a.svg {
            let plot = Plot {
                title: format!("{} wrist, predicted", cfg.gripper.name),
                x_label: "wrist angle [deg]".into(),
                y_label: "torque [N·m]".into(),
                series: vec![Series {
                    label: "predicted".into(),
                    points: curve
                        .samples()
                        .iter()
                        .map(|&(x, y)| (rad_to_deg(x), y))
                        .collect(),
                    scatter: false,
                }],
                hline: Some((cfg.targets.buckling_torque, "target torque".into())),
            };
            write_svg(p, &plot, &mut m)?;
        }
    }

    let out = AnalyzeOut {
        gripper: cfg.gripper.name.clone(),
        calibrated: cfg.calibrated,
        young_modulus_MPa: pa_to_mpa(cfg.material.young_modulus),
        module: ModuleOut {
            k1_N_per_m: module.k1,
            k2_N_per_m: module.k2,
            k_eq_N_per_m: module.k_eq,
            f_cr_N: module.f_cr,
        },
        rotational_stiffness_Nm_per_rad: model.rotational_stiffness,
        buckling: model.buckling.into(),
        plateau_torque_Nm: model.plateau_torque,
        verdict: cfg.targets.assess(&model.buckling).into(),
        warnings: report.warnings.clone(),
    };
    let point = PointRecord::new(
        &cfg.gripper.name,
        "predicted",
        &model.buckling,
        &cfg.targets,
    );
    m.finish(a.manifest.as_ref(), Some(point), &out)?;
    print_json(&out);
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DesignOut {
    gripper: String,
    b_mm: f64,
    gamma_deg: f64,
    achieved: Point,
    target_torque_Nm: f64,
    angle_limit_deg: f64,
    in_tolerance: bool,
    torque_error: f64,
    angle_margin_deg: f64,
    feasible_cells: usize,
}

pub fn design(a: DesignArgs) -> CliResult<()> {
    let mut m = ManifestBuilder::new("design");
    let cfg = load(&a.targets, &mut m)?;
    let bounds = DesignBounds {
        b_min: mm_to_m(a.b_min_mm),
        b_max: mm_to_m(a.b_max_mm),
        gamma_min: deg_to_rad(a.gamma_min_deg),
        gamma_max: deg_to_rad(a.gamma_max_deg),
    };
    bounds.check().as_input()?;
    if a.steps < 2 {
        return Err(CliError::Input(format!(
            "--steps must be at least 2 (got {})",
            a.steps
        )));
    }
    for (k, v) in [
        ("b_min_mm", a.b_min_mm),
        ("b_max_mm", a.b_max_mm),
        ("gamma_min_deg", a.gamma_min_deg),
        ("gamma_max_deg", a.gamma_max_deg),
    ] {
        m.set(k, v);
    }
    m.set("steps", a.steps);
    let opts = SolverOptions {
        b_steps: a.steps,
        gamma_steps: a.steps,
        ..SolverOptions::default()
    };
    let map = feasibility_map(&cfg.targets, &cfg.geometry, &cfg.material, &bounds, &opts)?;
    let sol = solve_on_map(
        &cfg.targets,
        &cfg.geometry,
        &cfg.material,
        &bounds,
        &opts,
        &map,
    );
    if !sol.in_tolerance {
        log::warn!("no design inside the tolerance box; reporting the closest candidate");
    }

    if let Some(p) = &a.map {
        write_csv(p, &map_to_table(&map), &mut m)?;
    }
    if let Some(p) = &a.svg {
        let cells = |pred: &dyn Fn(&biflex_core::design::GridCell) -> bool| -> Vec<(f64, f64)> {
            map.iter()
                .filter(|c| pred(c))
                .map(|c| (m_to_mm(c.b), rad_to_deg(c.gamma)))
                .collect()
        };
        let plot = Plot {
            title: format!("{} design space", cfg.gripper.name),
            x_label: "beam width b [mm]".into(),
            y_label: "tilt gamma [deg]".into(),
            series: vec![
                Series {
                    label: "angle within limit".into(),
                    points: cells(&|c| c.angle_ok && !c.in_tolerance),
                    scatter: true,
                },
                Series {
                    label: "inside tolerance box".into(),
                    points: cells(&|c| c.in_tolerance),
                    scatter: true,
                },
                Series {
                    label: "solution".into(),
                    points: vec![(
                        m_to_mm(sol.geometry.beam_width),
                        rad_to_deg(sol.geometry.tilt),
                    )],
                    scatter: true,
                },
            ],
            hline: None,
        };
        write_svg(p, &plot, &mut m)?;
    }

    let out = DesignOut {
        gripper: cfg.gripper.name.clone(),
        b_mm: m_to_mm(sol.geometry.beam_width),
        gamma_deg: rad_to_deg(sol.geometry.tilt),
        achieved: sol.achieved.into(),
        target_torque_Nm: sol.target.buckling_torque,
        angle_limit_deg: rad_to_deg(sol.target.buckling_angle_limit),
        in_tolerance: sol.in_tolerance,
        torque_error: sol.torque_error,
        angle_margin_deg: rad_to_deg(sol.angle_margin),
        feasible_cells: map.iter().filter(|c| c.in_tolerance).count(),
    };
    let point = PointRecord::new(&cfg.gripper.name, "designed", &sol.achieved, &cfg.targets);
    m.finish(a.manifest.as_ref(), Some(point), &out)?;
    print_json(&out);
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ResidualOut {
    label: String,
    predicted: Point,
    torque_rel: f64,
    angle_rel: f64,
}

#[derive(Serialize)]
struct CalibrationOut {
    free: Vec<&'static str>,
    young_modulus_MPa: f64,
    ring_radius_mm: f64,
    effective_length_factor: f64,
    residuals: Vec<ResidualOut>,
}

#[derive(Serialize)]
struct CharacterizeOut {
    extracted: Point,
    peak_torque_Nm: f64,
    pre_buckling_stiffness_Nm_per_rad: f64,
    replicates: Vec<Point>,
    angle_std_deg: f64,
    torque_std_Nm: f64,
    verdict: Option<Verdict>,
    calibration: Option<CalibrationOut>,
}

fn parse_window(s: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Input(format!("--fit-window expects 'lo,hi' fractions, got '{s}'"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn parse_free(s: &str) -> CliResult<Vec<FreeParameter>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            FreeParameter::parse(t).ok_or_else(|| {
                CliError::Input(format!(
                    "--free: unknown parameter '{}' (use E, R or K)",
                    t.trim()
                ))
            })
        })
        .collect()
}

fn replicate_path(base: &Path, index: usize, count: usize) -> PathBuf {
    if count == 1 {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_{}.{}", index + 1, ext.to_string_lossy()),
        None => format!("{stem}_{}", index + 1),
    };
    base.with_file_name(name)
}

pub fn characterize(a: CharacterizeArgs) -> CliResult<()> {
    let mut m = ManifestBuilder::new("characterize");
    let (lo, hi) = parse_window(&a.fit_window)?;
    let params = ExtractionParams {
        window_low: lo,
        window_high: hi,
        plateau_tolerance: a.plateau_tol,
        interp_level: ExtractionParams::default().interp_level.max(hi),
    };
    params.check().as_input()?;
    m.set("fit_window", &a.fit_window);
    m.set("plateau_tol", a.plateau_tol);

    let curves: Vec<TorqueDeflectionCurve> = a
        .curves
        .iter()
        .map(|p| {
            m.input(p);
            read_curve(p).as_input()
        })
        .collect::<CliResult<_>>()?;
    let mut report = average_replicates(&curves, &params)?;

    let targets_cfg = match &a.targets {
        Some(p) => Some(load(p, &mut m)?),
        None => None,
    };
    if let Some(cfg) = &targets_cfg {
        report = report.compare(&cfg.targets);
    }

    if let Some(base) = &a.annotated {
        for (i, c) in curves.iter().enumerate() {
            let e = extract(c, &params)?;
            write_csv(
                &replicate_path(base, i, curves.len()),
                &annotated_table(c, &e),
                &mut m,
            )?;
        }
    }
    if let Some(p) = &a.svg {
        let e = extract(&curves[0], &params)?;
        let deg = |a: f64| rad_to_deg(a);
        let max_a = curves[0].samples().last().map_or(0.0, |s| s.0);
        let knee = report.extracted.angle.min(max_a);
        let plot = Plot {
            title: "torque-deflection".into(),
            x_label: "wrist angle [deg]".into(),
            y_label: "torque [N·m]".into(),
            series: vec![
                Series {
                    label: "measured".into(),
                    points: curves[0]
                        .samples()
                        .iter()
                        .map(|&(x, y)| (deg(x), y))
                        .collect(),
                    scatter: false,
                },
                Series {
                    label: "rising-branch fit".into(),
                    points: vec![(deg(0.0), e.line.at(0.0)), (deg(knee), e.line.at(knee))],
                    scatter: false,
                },
                Series {
                    label: "buckling point".into(),
                    points: vec![(deg(e.point.angle), e.point.torque)],
                    scatter: true,
                },
            ],
            hline: Some((e.plateau_torque, "plateau".into())),
        };
        write_svg(p, &plot, &mut m)?;
    }

    let mut calibration = None;
    let mut gripper = targets_cfg.as_ref().map(|c| c.gripper.name.clone());
    if let Some(path) = &a.calibrate {
        let cfg = load(path, &mut m)?;
        let free = parse_free(&a.free)?;
        m.set("free", &a.free);
        let start = ModelConstants {
            material: cfg.material.clone(),
            ring_radius: cfg.geometry.ring_radius,
            effective_length_factor: cfg.geometry.effective_length_factor,
        };
        let obs = [Observation::both(
            cfg.gripper.name.clone(),
            cfg.geometry.clone(),
            report.extracted,
        )];
        let cal = calibrate(&obs, &start, &free)?;
        let fitted = WristConfig {
            material: cal.constants.material.clone(),
            geometry: cal.constants.apply(&cfg.geometry),
            calibrated: true,
            ..cfg.clone()
        };
        if let Some(out) = &a.out_config {
            write_atomic(out, config_to_json(&fitted).as_bytes())?;
            m.output(out);
        }
        calibration = Some(CalibrationOut {
            free: cal.free.iter().map(|p| p.name()).collect(),
            young_modulus_MPa: pa_to_mpa(cal.constants.material.young_modulus),
            ring_radius_mm: m_to_mm(cal.constants.ring_radius),
            effective_length_factor: cal.constants.effective_length_factor,
            residuals: cal
                .residuals
                .iter()
                .map(|r| ResidualOut {
                    label: r.label.clone(),
                    predicted: r.predicted.into(),
                    torque_rel: r.torque_rel,
                    angle_rel: r.angle_rel,
                })
                .collect(),
        });
        gripper.get_or_insert(cfg.gripper.name.clone());
    }

    let out = CharacterizeOut {
        extracted: report.extracted.into(),
        peak_torque_Nm: report.peak_torque,
        pre_buckling_stiffness_Nm_per_rad: report.pre_buckling_stiffness,
        replicates: report.replicates.iter().map(|&p| p.into()).collect(),
        angle_std_deg: rad_to_deg(report.replicate_spread.angle_std),
        torque_std_Nm: report.replicate_spread.torque_std,
        verdict: report.in_tolerance_vs.as_ref().map(|c| c.verdict.into()),
        calibration,
    };
    let point = targets_cfg.as_ref().map(|cfg| {
        PointRecord::new(
            gripper.as_deref().unwrap_or("unknown"),
            "measured",
            &report.extracted,
            &cfg.targets,
        )
    });
    m.finish(a.manifest.as_ref(), point, &out)?;
    print_json(&out);
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CaseOut {
    case: f64,
    outcome: Outcome,
    peak_force_N: f64,
    buckled: bool,
    terminated_early: bool,
    reason: Option<String>,
}

#[derive(Serialize)]
struct PickOut {
    mass_kg: f64,
    wrist_torque_Nm: f64,
    buckled: bool,
    tip_deflection_mm: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct SimulateOut {
    mode: &'static str,
    gripper: String,
    wrist: WristKind,
    calibrated: bool,
    safety_force_N: f64,
    contact_stiffness_N_per_mm: Option<f64>,
    outcome: Outcome,
    peak_force_N: f64,
    buckled: bool,
    /// Unit of `case`: deg for press, hill height mm for wipe, depth mm for
    /// grasp, kg for pick.
    case_unit: &'static str,
    cases: Vec<CaseOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pick: Option<PickSummary>,
}

#[derive(Serialize)]
struct PickSummary {
    buckling_threshold_mass_kg: f64,
    pass_threshold_mass_kg: f64,
    results: Vec<PickOut>,
}

fn case_from_trace(case: f64, t: &SimTrace) -> CaseOut {
    CaseOut {
        case,
        outcome: t.outcome,
        peak_force_N: t.peak_force(),
        buckled: t.buckled,
        terminated_early: t.terminated_early,
        reason: t.reason.clone(),
    }
}

/// Prefixes every row of `t` with `case`.
fn prefixed(name: &str, case: f64, t: &Table, into: &mut Option<Table>) {
    let out = into.get_or_insert_with(|| {
        Table::new(std::iter::once(name.to_string()).chain(t.headers.iter().cloned()))
    });
    for r in &t.rows {
        out.push(std::iter::once(case).chain(r.iter().copied()).collect());
    }
}

pub fn simulate(a: SimulateArgs) -> CliResult<()> {
    let mut m = ManifestBuilder::new("simulate");
    m.input(&a.scenario);
    m.set("mode", a.mode.name());
    let r = load_scenario(&a.scenario)?;
    if let Some(p) = &r.config_path {
        m.input(p);
    }
    let scn = &r.scenario;
    let safety = scn.safety_force;

    let mut cases = Vec::new();
    let mut table: Option<Table> = None;
    let mut series = Vec::new();
    let mut pick = None;
    let (x_label, case_unit) = match a.mode {
        SimMode::Press => {
            let f = &r.file.press;
            let t = simulate_press(
                scn,
                deg_to_rad(f.max_wrist_angle_deg),
                deg_to_rad(f.step_deg),
            )?;
            cases.push(case_from_trace(f.max_wrist_angle_deg, &t));
            let tab = t.to_table();
            series.push(Series {
                label: "press".into(),
                points: tab.rows.iter().map(|r| (r[0], r[2])).collect(),
                scatter: false,
            });
            table = Some(tab);
            ("commanded tip angle [deg]", "deg")
        }
        SimMode::Wipe => {
            let f = &r.file.wipe;
            for &h in &f.heights_mm {
                let profile =
                    SurfaceProfile::triangle(mm_to_m(h), deg_to_rad(f.slope_deg)).as_input()?;
                let t = simulate_wipe(
                    scn,
                    &profile,
                    mm_to_m(f.approach_depth_mm),
                    mm_to_m(f.step_mm),
                )?;
                cases.push(case_from_trace(h, &t));
                let tab = t.to_table();
                series.push(Series {
                    label: format!("{h} mm hill"),
                    points: tab.rows.iter().map(|r| (r[0], r[2])).collect(),
                    scatter: false,
                });
                prefixed("height_mm", h, &tab, &mut table);
            }
            ("horizontal position [mm]", "mm")
        }
        SimMode::Grasp => {
            let depths: Vec<f64> = r.file.grasp.depths_mm.iter().map(|&d| mm_to_m(d)).collect();
            let res = simulate_constrained_grasp(scn, &depths)?;
            let mut tab = Table::new([
                "depth_mm",
                "force_N",
                "torque_Nm",
                "wrist_angle_deg",
                "buckled",
                "success",
            ]);
            for (o, &d_mm) in res.iter().zip(&r.file.grasp.depths_mm) {
                tab.push(vec![
                    d_mm,
                    o.state.contact_force,
                    o.state.wrist_torque,
                    rad_to_deg(o.state.wrist_angle),
                    f64::from(u8::from(o.buckled)),
                    f64::from(u8::from(o.outcome == Outcome::Success)),
                ]);
                cases.push(CaseOut {
                    case: d_mm,
                    outcome: o.outcome,
                    peak_force_N: o.state.contact_force,
                    buckled: o.buckled,
                    terminated_early: false,
                    reason: (o.outcome == Outcome::Failure)
                        .then(|| format!("contact force exceeds the {safety} N safety limit")),
                });
            }
            series.push(Series {
                label: "grasp".into(),
                points: tab.rows.iter().map(|r| (r[0], r[1])).collect(),
                scatter: false,
            });
            table = Some(tab);
            ("commanded depth below table [mm]", "mm")
        }
        SimMode::Pick => {
            if r.file.wrist != WristKind::Biflex {
                return Err(CliError::Domain(
                    "pick needs the biflex wrist; a rigid wrist never buckles".into(),
                ));
            }
            let model = r.bimodal();
            let f = &r.file.pick;
            let load = LoadCase {
                lever: f.lever_mm.map(mm_to_m),
                hold_angle: deg_to_rad(f.hold_angle_deg),
                deflection_limit: mm_to_m(f.deflection_limit_mm),
            };
            let res = mass_sweep(&model, &scn.gripper, &f.masses_kg, &load)?;
            let mut tab = Table::new([
                "mass_kg",
                "torque_Nm",
                "buckled",
                "tip_deflection_mm",
                "pass",
            ]);
            for p in &res {
                tab.push(vec![
                    p.mass,
                    p.wrist_torque,
                    f64::from(u8::from(p.buckled)),
                    p.tip_deflection.deflection().map_or(f64::INFINITY, m_to_mm),
                    f64::from(u8::from(p.pass)),
                ]);
            }
            series.push(Series {
                label: "tip deflection".into(),
                points: tab.rows.iter().map(|r| (r[0], r[3])).collect(),
                scatter: false,
            });
            pick = Some(PickSummary {
                buckling_threshold_mass_kg: buckling_threshold_mass(&model, &scn.gripper, &load),
                pass_threshold_mass_kg: pass_threshold_mass(&model, &scn.gripper, &load),
                results: res
                    .iter()
                    .map(|p| PickOut {
                        mass_kg: p.mass,
                        wrist_torque_Nm: p.wrist_torque,
                        buckled: p.buckled,
                        tip_deflection_mm: p.tip_deflection.deflection().map(m_to_mm),
                        pass: p.pass,
                    })
                    .collect(),
            });
            table = Some(tab);
            ("object mass [kg]", "kg")
        }
    };

    if let (Some(p), Some(t)) = (&a.trace, &table) {
        write_csv(p, t, &mut m)?;
    }
    if let Some(p) = &a.svg {
        let (y_label, hline) = if a.mode == SimMode::Pick {
            (
                "tip deflection [mm]",
                Some((
                    r.file.pick.deflection_limit_mm,
                    "deflection limit".to_string(),
                )),
            )
        } else {
            (
                "contact force [N]",
                Some((safety, "safety limit".to_string())),
            )
        };
        let plot = Plot {
            title: format!("{} ({:?} wrist)", a.mode.name(), r.file.wrist).to_lowercase(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series,
            hline,
        };
        write_svg(p, &plot, &mut m)?;
    }

    let outcome = match &pick {
        Some(p) if p.results.iter().any(|r| !r.pass) => Outcome::Failure,
        Some(_) => Outcome::Success,
        None if cases.iter().all(|c| c.outcome == Outcome::Success) => Outcome::Success,
        None => Outcome::Failure,
    };
    let out = SimulateOut {
        mode: a.mode.name(),
        gripper: scn.gripper.name.clone(),
        wrist: r.file.wrist,
        calibrated: r.config.calibrated,
        safety_force_N: safety,
        contact_stiffness_N_per_mm: scn.contact_stiffness.map(|k| k / 1000.0),
        outcome,
        peak_force_N: cases.iter().map(|c| c.peak_force_N).fold(0.0, f64::max),
        buckled: cases.iter().any(|c| c.buckled)
            || pick
                .as_ref()
                .is_some_and(|p| p.results.iter().any(|r| r.buckled)),
        case_unit,
        cases,
        pick,
    };
    m.finish(a.manifest.as_ref(), None, &out)?;
    print_json(&out);
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ReportRow {
    gripper: String,
    source: String,
    angle_deg: f64,
    torque_Nm: f64,
    target_torque_Nm: f64,
    angle_limit_deg: f64,
    torque_error: f64,
    within_torque: bool,
    within_angle: bool,
    in_tolerance: bool,
}

pub fn report(a: ReportArgs) -> CliResult<()> {
    let mut records = Vec::new();
    for p in &a.manifests {
        let man = read_manifest(p)?;
        let rec = man.point.ok_or_else(|| {
            CliError::Input(format!(
                "{}: '{}' manifests carry no buckling point; only analyze, design and characterize runs with targets can be compared",
                p.display(),
                man.subcommand
            ))
        })?;
        records.push(rec);
    }
    if a.reference {
        for pr in presets::ALL {
            records.push(PointRecord::new(
                pr.name,
                "measured (reference)",
                &pr.measured(),
                &pr.targets(),
            ));
        }
    }
    if records.is_empty() {
        return Err(CliError::Input(
            "report needs at least one manifest or --reference".into(),
        ));
    }

    let mut rows = Vec::new();
    for r in &records {
        let v = r.verdict()?;
        rows.push(ReportRow {
            gripper: r.gripper.clone(),
            source: r.source.clone(),
            angle_deg: r.angle_deg,
            torque_Nm: r.torque_Nm,
            target_torque_Nm: r.target_torque_Nm,
            angle_limit_deg: r.angle_limit_deg,
            torque_error: v.torque_error,
            within_torque: v.within_torque,
            within_angle: v.within_angle,
            in_tolerance: v.in_tolerance,
        });
    }

    eprintln!(
        "{:<10} {:<22} {:>9} {:>10} {:>10} {:>10} {:>8}  verdict",
        "gripper", "source", "angle", "torque", "target", "limit", "error"
    );
    for r in &rows {
        let verdict = match (r.within_torque, r.within_angle) {
            (true, true) => "inside".to_string(),
            (t, an) => {
                let mut why = Vec::new();
                if !t {
                    why.push("torque");
                }
                if !an {
                    why.push("angle");
                }
                format!("OUTSIDE ({})", why.join(", "))
            }
        };
        eprintln!(
            "{:<10} {:<22} {:>8.2}° {:>7.3} Nm {:>7.3} Nm {:>9.2}° {:>+7.1}%  {verdict}",
            r.gripper,
            r.source,
            r.angle_deg,
            r.torque_Nm,
            r.target_torque_Nm,
            r.angle_limit_deg,
            100.0 * r.torque_error
        );
    }

    if let Some(p) = &a.csv {
        let mut t = Table::new([
            "row",
            "angle_deg",
            "torque_Nm",
            "target_torque_Nm",
            "angle_limit_deg",
            "torque_error",
            "within_torque",
            "within_angle",
            "in_tolerance",
        ]);
        let b = |x: bool| f64::from(u8::from(x));
        for (i, r) in rows.iter().enumerate() {
            t.push(vec![
                (i + 1) as f64,
                r.angle_deg,
                r.torque_Nm,
                r.target_torque_Nm,
                r.angle_limit_deg,
                r.torque_error,
                b(r.within_torque),
                b(r.within_angle),
                b(r.in_tolerance),
            ]);
        }
        write_table(p, &t)?;
    }
    print_json(&rows);
    Ok(())
}
