use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "biflex",
    version,
    about = "Design and virtual testing of buckling-honeycomb robot wrists"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Predict the wrist torque law and buckling point for a configuration.
    Analyze(AnalyzeArgs),
    /// Solve for beam width and tilt that hit the configured targets.
    Design(DesignArgs),
    /// Extract buckling points from measured torque-deflection curves.
    Characterize(CharacterizeArgs),
    /// Run a quasi-static task simulation.
    Simulate(SimulateArgs),
    /// Tabulate buckling points from run manifests against their targets.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Wrist configuration JSON.
    #[arg(long)]
    pub config: PathBuf,
    /// Write the predicted torque-deflection curve as CSV.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Largest angle of the predicted curve, degrees.
    #[arg(long, default_value_t = 10.0)]
    pub max_angle_deg: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// Plot the predicted curve.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Record inputs, outputs, overrides and the result in a JSON manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DesignArgs {
    /// Configuration JSON holding material, fixed dimensions, gripper and targets.
    #[arg(long)]
    pub targets: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub b_min_mm: f64,
    #[arg(long, default_value_t = 2.0)]
    pub b_max_mm: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma_min_deg: f64,
    #[arg(long, default_value_t = 60.0)]
    pub gamma_max_deg: f64,
    /// Grid points along each axis.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Write the evaluated grid as CSV.
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Plot the feasibility map.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Record inputs, outputs, overrides and the result in a JSON manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CharacterizeArgs {
    /// Curve CSV files (angle_deg,torque_Nm); replicates are averaged.
    #[arg(required = true)]
    pub curves: Vec<PathBuf>,
    /// Rising-branch fit window as fractions of peak torque, "lo,hi".
    #[arg(long, default_value = "0.2,0.8")]
    pub fit_window: String,
    /// Plateau band below the peak, as a fraction of peak torque.
    #[arg(long, default_value_t = 0.02)]
    pub plateau_tol: f64,
    /// Configuration JSON whose targets the result is compared against.
    #[arg(long)]
    pub targets: Option<PathBuf>,
    /// Write annotated curves (samples, fitted line, plateau level). With
    /// several inputs the replicate number is added before the extension.
    #[arg(long)]
    pub annotated: Option<PathBuf>,
    /// Fit model constants of this configuration to the extracted point.
    #[arg(long)]
    pub calibrate: Option<PathBuf>,
    /// Parameters to fit, comma separated: E, R, K (effective-length factor).
    #[arg(long, default_value = "E,R")]
    pub free: String,
    /// Where to write the calibrated configuration.
    #[arg(long, requires = "calibrate")]
    pub out_config: Option<PathBuf>,
    /// Plot the first curve with its fit.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Record inputs, outputs, overrides and the result in a JSON manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimMode {
    Press,
    Wipe,
    Pick,
    Grasp,
}

impl SimMode {
    pub fn name(self) -> &'static str {
        match self {
            SimMode::Press => "press",
            SimMode::Wipe => "wipe",
            SimMode::Pick => "pick",
            SimMode::Grasp => "grasp",
        }
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub mode: SimMode,
    /// Scenario JSON.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Write the per-step trace as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Plot force against command.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Record inputs, outputs, overrides and the result in a JSON manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Manifests written by analyze, design or characterize.
    pub manifests: Vec<PathBuf>,
    /// Add rows for the measured points of the three reference wrists.
    #[arg(long)]
    pub reference: bool,
    /// Write the table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}
