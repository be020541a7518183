//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use biflex_core::characterize::{
    extract, ExtractionParams, FreeParameter, ModelConstants, Observation,
};
use biflex_core::design::{solve, DesignBounds, SolverOptions};
use biflex_core::mechanics::{
    beam_stiffnesses, critical_module_load, effective_stiffness, oracle_stiffness,
};
use biflex_core::presets::{self, shared_geometry, BARIFLEX, FRANKA, ROBOTIQ};
use biflex_core::sim::rig::{grasp_scenario, wipe_scenario, wipe_slope, WIPE_APPROACH_DEPTH};
use biflex_core::sim::{
    buckling_threshold_mass, mass_sweep, simulate_constrained_grasp, simulate_press, simulate_wipe,
    ContactScenario, LoadCase, Outcome, SurfaceProfile, WristLaw,
};
use biflex_core::units::{deg_to_rad, mm_to_m, rad_to_deg};
use biflex_core::wrist::{angle_limit, assemble, RigidWrist};
use biflex_core::{
    DesignTargets, HoneycombGeometry, Material, TorqueDeflectionCurve, TorqueLaw, WristModel,
    STANDARD_GRAVITY,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

type Check = Result<String, String>;

fn guess() -> Material {
    Material::new("TPU-95A", 26.0e6).unwrap()
}

fn calibrated_robotiq() -> WristModel {
    presets::calibrated_model(&ROBOTIQ, &guess()).unwrap().0
}

fn random_geometry(rng: &mut ChaCha8Rng) -> HoneycombGeometry {
    HoneycombGeometry {
        beam_width: mm_to_m(rng.random_range(0.3..3.0)),
        central_width: mm_to_m(rng.random_range(0.3..3.0)),
        depth: mm_to_m(rng.random_range(3.0..20.0)),
        central_height: mm_to_m(rng.random_range(1.0..8.0)),
        module_height: mm_to_m(rng.random_range(3.0..21.0)),
        tilt: deg_to_rad(rng.random_range(0.0..75.0)),
        n_modules: rng.random_range(3..24),
        ring_radius: mm_to_m(rng.random_range(10.0..60.0)),
        effective_length_factor: 1.0,
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let t0 = Instant::now();
    let r = f()?;
    let dt = t0.elapsed();
    if dt > limit {
        return Err(format!("{r}; took {dt:?}, limit {limit:?}"));
    }
    Ok(format!("{r}; {dt:.2?}"))
}

fn closed_form_vs_oracle() -> Check {
    timed(Duration::from_secs(5), || {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut worst: f64 = 0.0;
        let mut worst_printed: f64 = 0.0;
        for _ in 0..1000 {
            let g = random_geometry(&mut rng);
            let m = Material::new("m", rng.random_range(5.0e6..3.0e9)).unwrap();
            let closed = effective_stiffness(&g, &m);
            let oracle = oracle_stiffness(&g, &m).map_err(|e| e.to_string())?;
            worst = worst.max((closed / oracle - 1.0).abs());
            // The form with a single sin(γ) in the denominator, as sometimes
            // printed, is expected to disagree with the oracle for γ > 0.
            let (k1, k2) = beam_stiffnesses(&g, &m);
            let (s, c) = g.tilt.sin_cos();
            let printed = 2.0 * k1 * k2 * c * c / (k2 + k1 * s);
            worst_printed = worst_printed.max((printed / oracle - 1.0).abs());
        }
        if worst < 1e-9 {
            Ok(format!(
                "max rel err {worst:.2e} over 1000 geometries (single-sin form off by up to {:.1}%)",
                100.0 * worst_printed
            ))
        } else {
            Err(format!("max rel err {worst:.2e}"))
        }
    })
}

fn angle_limits() -> Check {
    let mut parts = Vec::new();
    for p in presets::ALL {
        let a = rad_to_deg(angle_limit(0.010, mm_to_m(p.length_mm)));
        let ok = (a - p.angle_limit_deg).abs() <= 0.1;
        parts.push(format!("{} {a:.3}° vs {:.2}°", p.name, p.angle_limit_deg));
        if !ok {
            return Err(parts.join(", "));
        }
    }
    Ok(parts.join(", "))
}

fn ordering() -> Check {
    let t = |p: &presets::GripperPreset| assemble(&p.geometry(), &guess()).buckling.torque;
    let (f, r, b) = (t(&FRANKA), t(&ROBOTIQ), t(&BARIFLEX));
    let msg = format!("BaRiFlex {b:.3} > Robotiq {r:.3} > Franka {f:.3} N·m (E = 26 MPa guess)");
    let measured = BARIFLEX.measured_torque_nm > ROBOTIQ.measured_torque_nm
        && ROBOTIQ.measured_torque_nm > FRANKA.measured_torque_nm;
    if b > r && r > f && measured {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn calibration_closure() -> Check {
    let start = ModelConstants {
        material: guess(),
        ring_radius: mm_to_m(presets::RING_RADIUS_MM),
        effective_length_factor: 1.0,
    };
    let mut parts = Vec::new();
    let mut ok = true;
    for (i, held) in presets::ALL.iter().enumerate() {
        let obs: Vec<Observation> = presets::ALL
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.observation())
            .collect();
        let cal = biflex_core::characterize::calibrate(
            &obs,
            &start,
            &[FreeParameter::YoungModulus, FreeParameter::RingRadius],
        )
        .map_err(|e| e.to_string())?;
        let predicted = cal.constants.predict(&held.geometry()).torque;
        let err = predicted / held.measured_torque_nm - 1.0;
        let exempt = held.name == BARIFLEX.name;
        let pass = err.abs() <= 0.25;
        if !pass && !exempt {
            ok = false;
        }
        parts.push(format!(
            "hold out {}: {predicted:.3} vs {:.2} N·m ({:+.0}%{})",
            held.name,
            held.measured_torque_nm,
            100.0 * err,
            if exempt { ", exempt" } else { "" }
        ));
    }
    if ok {
        Ok(parts.join("; "))
    } else {
        Err(parts.join("; "))
    }
}

fn bilinear(slope: f64, plateau: f64, max_angle: f64, n: usize) -> Vec<(f64, f64)> {
    let knee = plateau / slope;
    (0..n)
        .map(|k| {
            let a = max_angle * k as f64 / (n - 1) as f64;
            (a, if a <= knee { slope * a } else { plateau })
        })
        .collect()
}

fn extraction() -> Check {
    timed(Duration::from_secs(2), || {
        let params = ExtractionParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (mut worst_a, mut worst_t, mut worst_exact): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for _ in 0..100 {
            let tau = rng.random_range(0.5..2.0);
            let knee = deg_to_rad(rng.random_range(2.0..6.0));
            let max = knee * rng.random_range(2.0..3.0);
            let clean = bilinear(tau / knee, tau, max, 200);
            let e = extract(&TorqueDeflectionCurve::new(clean.clone()).unwrap(), &params)
                .map_err(|e| e.to_string())?;
            worst_exact = worst_exact
                .max((e.point.angle / knee - 1.0).abs())
                .max((e.point.torque / tau - 1.0).abs());

            let noise = Normal::new(0.0, 0.01 * tau).unwrap();
            let noisy: Vec<_> = clean
                .iter()
                .map(|&(a, t)| (a, t + noise.sample(&mut rng)))
                .collect();
            let e = extract(&TorqueDeflectionCurve::new(noisy).unwrap(), &params)
                .map_err(|e| e.to_string())?;
            worst_a = worst_a.max((e.point.angle / knee - 1.0).abs());
            worst_t = worst_t.max((e.point.torque / tau - 1.0).abs());
        }
        let msg = format!(
            "worst noisy err angle {:.2}% torque {:.2}%, noise-free {worst_exact:.1e}",
            100.0 * worst_a,
            100.0 * worst_t
        );
        if worst_a <= 0.02 && worst_t <= 0.01 && worst_exact <= 1e-9 {
            Ok(msg)
        } else {
            Err(msg)
        }
    })
}

fn design_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bounds = DesignBounds {
        b_min: mm_to_m(0.5),
        b_max: mm_to_m(2.0),
        gamma_min: 0.0,
        gamma_max: deg_to_rad(60.0),
    };
    let opts = SolverOptions::default();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g = shared_geometry(rng.random_range(0.6..1.9), rng.random_range(1.0..58.0));
        let fwd = assemble(&g, &guess()).buckling;
        let targets = DesignTargets::new(fwd.torque, (fwd.angle * 1.5).min(1.5)).unwrap();
        let a = solve(&targets, &g, &guess(), &bounds, &opts).map_err(|e| e.to_string())?;
        let b = solve(&targets, &g, &guess(), &bounds, &opts).map_err(|e| e.to_string())?;
        if a != b {
            return Err("solver is not deterministic".into());
        }
        worst = worst.max((a.achieved.torque / fwd.torque - 1.0).abs());
    }
    let msg = format!("worst torque error {:.3e} over 100 geometries", worst);
    if worst <= 1e-3 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn triangle(height_mm: f64) -> SurfaceProfile {
    SurfaceProfile::triangle(mm_to_m(height_mm), wipe_slope()).unwrap()
}

fn wipe() -> Check {
    let model = calibrated_robotiq();
    let gripper = ROBOTIQ.gripper();
    let soft =
        wipe_scenario(WristLaw::Bimodal(model), &gripper, 15.0).map_err(|e| e.to_string())?;
    let hard = soft.with_wrist(WristLaw::Rigid(RigidWrist::default()));
    let step = mm_to_m(0.5);
    let mut first_buckle = None;
    let mut worst_peak: f64 = 0.0;
    for h in 1..=50 {
        let t = simulate_wipe(&soft, &triangle(h as f64), WIPE_APPROACH_DEPTH, step)
            .map_err(|e| e.to_string())?;
        if t.outcome != Outcome::Success {
            return Err(format!("BiFlex failed at {h} mm"));
        }
        worst_peak = worst_peak.max(t.peak_force());
        if t.buckled && first_buckle.is_none() {
            first_buckle = Some(h);
        }
    }
    let mut rigid_ok = Vec::new();
    for h in 1..=50 {
        let t = simulate_wipe(&hard, &triangle(h as f64), WIPE_APPROACH_DEPTH, step)
            .map_err(|e| e.to_string())?;
        if t.outcome == Outcome::Success {
            rigid_ok.push(h);
        }
    }
    let rigid_max = rigid_ok.iter().copied().max().unwrap_or(0);
    let contiguous = rigid_ok.len() == rigid_max as usize;
    let msg = format!(
        "BiFlex peak {worst_peak:.2} N up to 50 mm, first buckle at {} mm; rigid succeeds up to {rigid_max} mm (k_contact {:.3} N/mm)",
        first_buckle.map_or("none".to_string(), |h| h.to_string()),
        soft.contact_stiffness.unwrap() / 1000.0
    );
    if worst_peak < 15.0 && first_buckle.is_some_and(|h| h >= 20) && rigid_max == 14 && contiguous {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn grasp() -> Check {
    let model = calibrated_robotiq();
    let gripper = ROBOTIQ.gripper();
    let plateau = model.buckling.torque / gripper.length;
    let soft =
        grasp_scenario(WristLaw::Bimodal(model), &gripper, 15.0).map_err(|e| e.to_string())?;
    let hard = soft.with_wrist(WristLaw::Rigid(RigidWrist::default()));
    let depths: Vec<f64> = (0..=10).map(|k| mm_to_m(5.0 * k as f64)).collect();
    let a = simulate_constrained_grasp(&soft, &depths).map_err(|e| e.to_string())?;
    let b = simulate_constrained_grasp(&hard, &depths).map_err(|e| e.to_string())?;
    let all_soft = a.iter().all(|o| o.outcome == Outcome::Success);
    let peak = a.iter().map(|o| o.state.contact_force).fold(0.0, f64::max);
    let rigid_ok: Vec<f64> = b
        .iter()
        .filter(|o| o.outcome == Outcome::Success)
        .map(|o| (o.depth * 1000.0).round())
        .collect();
    let msg = format!(
        "BiFlex all depths ok = {all_soft}, peak {peak:.2} N, plateau τ_b/L = {plateau:.2} N; rigid ok at {rigid_ok:?} mm"
    );
    if all_soft
        && peak < 15.0
        && plateau < 15.0
        && (plateau - 9.35).abs() < 0.1
        && rigid_ok == [0.0, 5.0]
    {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn properties() -> Check {
    let m = guess();
    // Cubic scaling of the critical load in b, monotone decrease in γ.
    let mut worst_cubic: f64 = 0.0;
    for b in [0.5, 0.8, 1.0, 1.3, 2.0] {
        for gamma in [0.0, 10.0, 30.0, 55.0] {
            let g = shared_geometry(b, gamma);
            let g2 = shared_geometry(2.0 * b, gamma);
            worst_cubic = worst_cubic.max(
                (critical_module_load(&g2, &m) / critical_module_load(&g, &m) / 8.0 - 1.0).abs(),
            );
        }
    }
    if worst_cubic > 1e-9 {
        return Err(format!("cubic scaling off by {worst_cubic:.2e}"));
    }
    for b in [0.5, 1.0, 2.0] {
        let f: Vec<f64> = (0..60)
            .map(|d| critical_module_load(&shared_geometry(b, d as f64), &m))
            .collect();
        if f.windows(2).any(|w| w[1] >= w[0]) {
            return Err(format!("f_cr not decreasing in γ at b = {b} mm"));
        }
    }

    // Torque law continuity and monotone non-decrease.
    let model = calibrated_robotiq();
    let n = 20_000;
    let max = 4.0 * model.buckling.angle;
    let mut prev = 0.0;
    for k in 0..=n {
        let a = max * k as f64 / n as f64;
        let t = model.torque_at(a);
        if t < prev {
            return Err(format!("torque decreases at {a}"));
        }
        if t - prev > model.rotational_stiffness * max / n as f64 * (1.0 + 1e-9) {
            return Err(format!("torque jumps at {a}"));
        }
        prev = t;
    }

    // Pointwise force dominance in every simulator.
    let gripper = ROBOTIQ.gripper();
    let press_soft = ContactScenario::new(WristLaw::Bimodal(model.clone()), gripper.clone());
    let press_hard = press_soft.with_wrist(WristLaw::Rigid(RigidWrist::default()));
    let wipe_soft = wipe_scenario(WristLaw::Bimodal(model.clone()), &gripper, 15.0)
        .map_err(|e| e.to_string())?;
    let wipe_hard = wipe_soft.with_wrist(WristLaw::Rigid(RigidWrist::default()));
    let grasp_soft = grasp_scenario(WristLaw::Bimodal(model.clone()), &gripper, 15.0)
        .map_err(|e| e.to_string())?;
    let grasp_hard = grasp_soft.with_wrist(WristLaw::Rigid(RigidWrist::default()));
    let pairs = [
        (&press_soft, &press_hard),
        (&wipe_soft, &wipe_hard),
        (&grasp_soft, &grasp_hard),
    ];
    for (soft, hard) in pairs {
        for k in 0..=500 {
            let i = mm_to_m(0.1 * k as f64);
            let a = soft.equilibrium(i).map_err(|e| e.to_string())?;
            let b = hard.equilibrium(i).map_err(|e| e.to_string())?;
            if a.contact_force > b.contact_force {
                return Err(format!("dominance violated at {i} m"));
            }
            if a.residual.abs() > 1e-9 || b.residual.abs() > 1e-9 {
                return Err(format!(
                    "force balance residual {} / {}",
                    a.residual, b.residual
                ));
            }
        }
    }

    // Step-size convergence of the peak force.
    let mut worst_step: f64 = 0.0;
    for step_deg in [0.5, 0.25, 0.1] {
        let coarse = simulate_press(&press_soft, deg_to_rad(10.0), deg_to_rad(step_deg))
            .unwrap()
            .peak_force();
        let fine = simulate_press(&press_soft, deg_to_rad(10.0), deg_to_rad(step_deg / 2.0))
            .unwrap()
            .peak_force();
        worst_step = worst_step.max((fine / coarse - 1.0).abs());
    }
    for h in [10.0, 14.0, 25.0, 50.0] {
        for (s, step_mm) in [(&wipe_soft, 1.0), (&wipe_hard, 1.0), (&wipe_soft, 0.25)] {
            let coarse = simulate_wipe(s, &triangle(h), WIPE_APPROACH_DEPTH, mm_to_m(step_mm))
                .unwrap()
                .peak_force();
            let fine = simulate_wipe(s, &triangle(h), WIPE_APPROACH_DEPTH, mm_to_m(step_mm / 2.0))
                .unwrap()
                .peak_force();
            worst_step = worst_step.max((fine / coarse - 1.0).abs());
        }
    }
    if worst_step >= 0.005 {
        return Err(format!(
            "step halving changes peak force by {:.3}%",
            100.0 * worst_step
        ));
    }
    Ok(format!(
        "cubic scaling {worst_cubic:.1e}, dominance and balance over 3 sims, step halving ≤ {:.2e}",
        worst_step
    ))
}

fn pick_place() -> Check {
    let model = calibrated_robotiq();
    let gripper = ROBOTIQ.gripper();
    let load = LoadCase::default();
    let threshold = buckling_threshold_mass(&model, &gripper, &load);
    let analytic = model.buckling.torque / (STANDARD_GRAVITY * gripper.length);
    if (threshold / analytic - 1.0).abs() > 1e-12 {
        return Err(format!("threshold {threshold} vs {analytic}"));
    }
    let masses: Vec<f64> = (0..=300).map(|k| 0.01 * k as f64).collect();
    let sweep = mass_sweep(&model, &gripper, &masses, &load).map_err(|e| e.to_string())?;
    let first_buckled = sweep
        .iter()
        .position(|r| r.buckled)
        .ok_or("never buckles")?;
    if sweep[first_buckled..].iter().any(|r| !r.buckled) {
        return Err("buckling is not monotone in mass".into());
    }
    if !(masses[first_buckled] >= threshold
        && (first_buckled == 0 || masses[first_buckled - 1] < threshold))
    {
        return Err("sweep boundary disagrees with the analytic threshold".into());
    }
    let first_fail = sweep.iter().position(|r| !r.pass).unwrap_or(sweep.len());
    if sweep[first_fail..].iter().any(|r| r.pass) {
        return Err("pass/fail is not monotone in mass".into());
    }
    let worst_pass = sweep
        .iter()
        .filter(|r| r.pass)
        .filter_map(|r| r.tip_deflection.deflection())
        .fold(0.0, f64::max);
    let msg = format!(
        "buckling threshold {threshold:.4} kg = τ_b/(g·L); passing masses < {:.2} kg, max deflection {:.2} mm",
        masses[first_fail],
        worst_pass * 1000.0
    );
    if worst_pass < 0.010 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("closed form vs oracle", closed_form_vs_oracle),
        ("angle limits", angle_limits),
        ("buckling torque ordering", ordering),
        ("calibration closure", calibration_closure),
        ("characterization extraction", extraction),
        ("inverse-design round trip", design_round_trip),
        ("wipe simulation", wipe),
        ("constrained-grasp simulation", grasp),
        ("property suite", properties),
        ("pick-and-place", pick_place),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1)
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
