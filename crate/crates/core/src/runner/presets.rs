//! Canned experiment configs, one per data figure.

use std::path::PathBuf;

use crate::analytics::SurfaceMode;
use crate::error::{PsError, Result};

use super::{ExperimentConfig, Scenario};

const NAMES: &[&str] = &[
    "fig2", "fig3a", "fig3b", "fig3c", "fig3d", "fig5", "fig6a", "fig6b", "fig6c", "fig7",
    "fig8", "fig9a", "fig9b", "fig11a", "fig11b",
];

pub fn preset_names() -> &'static [&'static str] {
    NAMES
}

fn grid(step: f64) -> Vec<f64> {
    let count = (1.0 / step).round() as usize;
    (0..=count).map(|i| (i as f64 * step * 100.0).round() / 100.0).collect()
}

fn po(name: &str, gamma_d: f64, gamma_i: f64) -> ExperimentConfig {
    ExperimentConfig {
        scenario: Scenario::PoAbsolute,
        gamma_d,
        gamma_i,
        out: PathBuf::from(format!("{name}.csv")),
        ..Default::default()
    }
}

/// Config for a named preset. Output defaults to `<name>.csv`.
pub fn preset_config(name: &str) -> Result<ExperimentConfig> {
    let config = match name {
        // Effective reward sweep over the forgetting factor.
        "fig2" => ExperimentConfig {
            scenario: Scenario::LambdaEff,
            gamma_grid: Some(grid(0.05)),
            out: PathBuf::from("fig2.csv"),
            ..Default::default()
        },
        // Learning-speed loss at a perfect-memory interpreter, then ceiling
        // loss once the interpreter forgets.
        "fig3a" => po("fig3a", 0.05, 0.0),
        "fig3b" => po("fig3b", 0.2, 0.0),
        "fig3c" => po("fig3c", 0.05, 0.1),
        "fig3d" => po("fig3d", 0.05, 0.5),
        // Extreme forgetting on both agents.
        "fig5" => po("fig5", 1.0, 1.0),
        // Asymptotic surfaces at three observabilities.
        "fig6a" | "fig6b" | "fig6c" => ExperimentConfig {
            scenario: Scenario::Surface,
            alpha: match name {
                "fig6a" => 1.0,
                "fig6b" => 0.5,
                _ => 0.0,
            },
            surface_mode: SurfaceMode::MonteCarlo,
            gamma_d_grid: Some(grid(0.2)),
            gamma_i_grid: Some(grid(0.2)),
            out: PathBuf::from(format!("{name}.csv")),
            ..Default::default()
        },
        // Closed-form slices: no crossings at fixed alpha...
        "fig7" => ExperimentConfig {
            scenario: Scenario::Surface,
            alpha: 0.5,
            surface_mode: SurfaceMode::ClosedForm,
            gamma_d_grid: Some(grid(0.25)),
            gamma_i_grid: Some(grid(0.1)),
            out: PathBuf::from("fig7.csv"),
            ..Default::default()
        },
        // ...and scattering once alpha varies across the slices.
        "fig8" => ExperimentConfig {
            scenario: Scenario::Surface,
            surface_mode: SurfaceMode::ClosedForm,
            gamma_d_grid: Some(grid(0.25)),
            gamma_i_grid: Some(grid(0.1)),
            alpha_grid: Some(vec![0.0, 0.25, 0.5, 0.75, 0.99]),
            out: PathBuf::from("fig8.csv"),
            ..Default::default()
        },
        // Collective efficiency over blocking splits at full budget.
        "fig9a" | "fig9b" => ExperimentConfig {
            scenario: Scenario::Game,
            alpha_a: if name == "fig9a" { 0.0 } else { 1.0 },
            alpha_b: if name == "fig9a" { 0.0 } else { 1.0 },
            total_gamma: 1.0,
            coalition_grid: Some(grid(0.1)),
            out: PathBuf::from(format!("{name}.csv")),
            ..Default::default()
        },
        // Blocking actions versus blocking probability, steady and after a
        // mid-run rule switch.
        "fig11a" => ExperimentConfig {
            scenario: Scenario::Appendix,
            gamma_d: 0.1,
            action_window: 25,
            out: PathBuf::from("fig11a.csv"),
            ..Default::default()
        },
        "fig11b" => ExperimentConfig {
            scenario: Scenario::Appendix,
            gamma_d: 0.1,
            action_window: 25,
            t_switch: Some(500),
            out: PathBuf::from("fig11b.csv"),
            ..Default::default()
        },
        other => return Err(PsError::UnknownPreset(other.to_string())),
    };
    Ok(config)
}
