//! Experiment orchestration: configs, scenario dispatch, CSV emission, and
//! figure presets.
//!
//! Every experiment is a pure function of its config, seed included: curve
//! CSVs are written byte-identically regardless of worker count. Curves use
//! the fixed schema (t, r_mean, r_stderr[, action_rate]); surfaces are
//! long-form (gamma_d, gamma_i, alpha, r_max, mode).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agent::AgentConfig;
use crate::analytics::{
    asymptotic_surface, lambda_eff_curve, LambdaTable, SurfaceCell, SurfaceMode, SurfaceParams,
};
use crate::ensemble::{derive_seed, fo_curve, po_curves};
pub use crate::ensemble::{EfficiencyCurve, PoCurves};
use crate::error::{PsError, Result};
use crate::game::{
    analyze_game, build_game, classify_coalition, AgentStrategy, GameAnalysis, GameMatrix2x2,
    GammaSplit, StrategyProfile, StrategySpec,
};
use crate::invasion::{InvasionRules, RoundRecord};
use crate::oracle::oracle_exact;

mod presets;
pub use presets::{preset_config, preset_names};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Fo,
    PoAbsolute,
    PoMixed,
    Surface,
    Game,
    LambdaEff,
    Appendix,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Scenario::Fo => "fo",
            Scenario::PoAbsolute => "po-absolute",
            Scenario::PoMixed => "po-mixed",
            Scenario::Surface => "surface",
            Scenario::Game => "game",
            Scenario::LambdaEff => "lambda-eff",
            Scenario::Appendix => "appendix",
        };
        write!(f, "{name}")
    }
}

/// One experiment, loadable from a human-readable key-value (TOML) file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    /// Number of attack symbols (= blocking actions).
    pub n: usize,
    /// Observability of the environment (po-mixed, surface).
    pub alpha: f64,
    /// Defender forgetting factor.
    pub gamma_d: f64,
    /// Interpreter forgetting factor.
    pub gamma_i: f64,
    /// Ensemble size.
    pub m: usize,
    /// Horizon in rounds.
    pub t_max: u64,
    pub seed: u64,
    /// When set, the correct-action map rotates by one at this step.
    pub t_switch: Option<u64>,
    pub out: PathBuf,
    /// Worker threads; unset uses the process default.
    pub threads: Option<usize>,
    /// Trailing window for the blocking-action rate column.
    pub action_window: usize,
    // surface
    pub surface_mode: SurfaceMode,
    pub gamma_d_grid: Option<Vec<f64>>,
    pub gamma_i_grid: Option<Vec<f64>>,
    /// Extra alpha planes for one surface file (defaults to [alpha]).
    pub alpha_grid: Option<Vec<f64>>,
    // lambda-eff
    pub gamma_grid: Option<Vec<f64>>,
    // game
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub total_gamma: f64,
    /// When set, the game scenario sweeps collective efficiencies over this
    /// grid of blocking shares instead of building the 2x2 matrix.
    pub coalition_grid: Option<Vec<f64>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: Scenario::Fo,
            n: 2,
            alpha: 0.0,
            gamma_d: 0.1,
            gamma_i: 0.0,
            m: 10_000,
            t_max: 1000,
            seed: 42,
            t_switch: None,
            out: PathBuf::from("out.csv"),
            threads: None,
            action_window: 25,
            surface_mode: SurfaceMode::MonteCarlo,
            gamma_d_grid: None,
            gamma_i_grid: None,
            alpha_grid: None,
            gamma_grid: None,
            alpha_a: 0.0,
            alpha_b: 1.0,
            gamma_a: 0.0,
            gamma_b: 0.9,
            total_gamma: 1.0,
            coalition_grid: None,
        }
    }
}

fn unit_interval(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(PsError::InvalidConfig(format!("{name} must be in [0, 1], got {v}")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(PsError::InvalidConfig(format!("n must be >= 2, got {}", self.n)));
        }
        if self.m < 1 || self.t_max < 1 {
            return Err(PsError::InvalidConfig(format!(
                "m and t_max must be >= 1, got m={} t_max={}",
                self.m, self.t_max
            )));
        }
        if self.action_window < 1 {
            return Err(PsError::InvalidConfig("action_window must be >= 1".into()));
        }
        unit_interval("alpha", self.alpha)?;
        unit_interval("gamma_d", self.gamma_d)?;
        unit_interval("gamma_i", self.gamma_i)?;
        unit_interval("alpha_a", self.alpha_a)?;
        unit_interval("alpha_b", self.alpha_b)?;
        unit_interval("total_gamma", self.total_gamma)?;
        if self.gamma_a > self.total_gamma || self.gamma_b > self.total_gamma {
            return Err(PsError::InvalidConfig(format!(
                "gamma_a={} and gamma_b={} must not exceed total_gamma={}",
                self.gamma_a, self.gamma_b, self.total_gamma
            )));
        }
        for grid in [
            &self.gamma_d_grid,
            &self.gamma_i_grid,
            &self.alpha_grid,
            &self.gamma_grid,
            &self.coalition_grid,
        ]
        .into_iter()
        .flatten()
        {
            for &g in grid {
                unit_interval("grid value", g)?;
            }
        }
        if self.scenario == Scenario::PoAbsolute && self.alpha != 0.0 {
            return Err(PsError::InvalidConfig(
                "po-absolute runs at alpha = 0; use po-mixed for alpha > 0".into(),
            ));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| PsError::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| PsError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        ExperimentConfig::from_toml_str(&text)
    }

    fn rules(&self) -> Result<InvasionRules> {
        let rules = InvasionRules::new(self.n)?;
        match self.t_switch {
            Some(ts) => {
                let rotated: Vec<usize> = (0..self.n).map(|i| (i + 1) % self.n).collect();
                rules.with_switch(ts, rotated)
            }
            None => Ok(rules),
        }
    }
}

/// Files written by a run plus a printable summary.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// Run one experiment end to end, writing its CSV outputs.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    match config.threads {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| PsError::InvalidConfig(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(config))
        }
        None => dispatch(config),
    }
}

fn dispatch(config: &ExperimentConfig) -> Result<RunOutput> {
    match config.scenario {
        Scenario::Fo => run_fo_scenario(config, false),
        Scenario::Appendix => run_fo_scenario(config, true),
        Scenario::PoAbsolute | Scenario::PoMixed => run_po_scenario(config),
        Scenario::Surface => run_surface_scenario(config),
        Scenario::Game => run_game_scenario(config),
        Scenario::LambdaEff => run_lambda_scenario(config),
    }
}

fn run_fo_scenario(config: &ExperimentConfig, with_actions: bool) -> Result<RunOutput> {
    let rules = config.rules()?;
    let mut curve = fo_curve(
        &rules,
        AgentConfig::new(config.gamma_d)?,
        config.m,
        config.t_max,
        config.seed,
        with_actions,
    )?;
    if let Some(raw) = curve.action_rate.take() {
        curve.action_rate = Some(windowed_mean(&raw, config.action_window));
    }
    write_curve_csv(&config.out, &curve)?;
    Ok(RunOutput {
        files: vec![config.out.clone()],
        summary: format!(
            "fully observable run: gamma_d={} m={} t={} -> asymptote {:.4} (stderr {:.4})",
            config.gamma_d,
            config.m,
            config.t_max,
            curve.asymptote(),
            curve.asymptote_stderr()
        ),
    })
}

fn run_po_scenario(config: &ExperimentConfig) -> Result<RunOutput> {
    let alpha = if config.scenario == Scenario::PoAbsolute { 0.0 } else { config.alpha };
    let rules = config.rules()?;
    let curves = po_curves(
        &rules,
        alpha,
        AgentConfig::new(config.gamma_d)?,
        AgentConfig::new(config.gamma_i)?,
        config.m,
        config.t_max,
        config.seed,
        false,
    )?;
    // Matched fully observable baseline for speed/ceiling comparisons.
    let baseline = fo_curve(
        &rules,
        AgentConfig::new(config.gamma_d)?,
        config.m,
        config.t_max,
        derive_seed(config.seed, 0xF0),
        false,
    )?;
    let interp_path = path_with_suffix(&config.out, "_interpreter");
    let fo_path = path_with_suffix(&config.out, "_fo");
    write_curve_csv(&config.out, &curves.defender)?;
    write_curve_csv(&interp_path, &curves.interpreter)?;
    write_curve_csv(&fo_path, &baseline)?;
    Ok(RunOutput {
        summary: format!(
            "partially observable run: alpha={} gamma_d={} gamma_i={} m={} t={} -> \
             defender asymptote {:.4}, interpreter {:.4}, fo baseline {:.4}",
            alpha,
            config.gamma_d,
            config.gamma_i,
            config.m,
            config.t_max,
            curves.defender.asymptote(),
            curves.interpreter.asymptote(),
            baseline.asymptote()
        ),
        files: vec![config.out.clone(), interp_path, fo_path],
    })
}

fn default_grid() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 0.75, 1.0]
}

fn run_surface_scenario(config: &ExperimentConfig) -> Result<RunOutput> {
    let gd = config.gamma_d_grid.clone().unwrap_or_else(default_grid);
    let gi = config.gamma_i_grid.clone().unwrap_or_else(default_grid);
    let alphas = config.alpha_grid.clone().unwrap_or_else(|| vec![config.alpha]);
    let params = SurfaceParams {
        n: config.n,
        m: config.m,
        t_max: config.t_max,
        seed: config.seed,
    };
    let table = match config.surface_mode {
        SurfaceMode::ClosedForm => Some(LambdaTable::shared()),
        SurfaceMode::MonteCarlo => None,
    };
    let mut cells = Vec::new();
    for &alpha in &alphas {
        cells.extend(asymptotic_surface(
            alpha,
            &gd,
            &gi,
            config.surface_mode,
            &params,
            table,
        )?);
    }
    write_surface_csv(&config.out, &cells)?;
    Ok(RunOutput {
        files: vec![config.out.clone()],
        summary: format!(
            "surface ({}): {} cells over {}x{} gammas x {} alpha plane(s)",
            config.surface_mode,
            cells.len(),
            gd.len(),
            gi.len(),
            alphas.len()
        ),
    })
}

fn run_game_scenario(config: &ExperimentConfig) -> Result<RunOutput> {
    let table = LambdaTable::shared();
    if let Some(grid) = &config.coalition_grid {
        let mut rows = Vec::new();
        for &bi in grid {
            for &bj in grid {
                let profile = StrategyProfile {
                    agents: [
                        AgentStrategy::new(
                            GammaSplit::new(bi, config.total_gamma - bi)?,
                            config.alpha_a,
                        )?,
                        AgentStrategy::new(
                            GammaSplit::new(bj, config.total_gamma - bj)?,
                            config.alpha_b,
                        )?,
                    ],
                };
                let report = classify_coalition(&profile, table)?;
                rows.push((bi, bj, report));
            }
        }
        write_coalition_csv(&config.out, &rows)?;
        return Ok(RunOutput {
            files: vec![config.out.clone()],
            summary: format!(
                "coalition sweep: {} splits at alpha=({}, {}), total_gamma={}",
                rows.len(),
                config.alpha_a,
                config.alpha_b,
                config.total_gamma
            ),
        });
    }
    let game = build_game(
        StrategySpec { alpha: config.alpha_a, gamma: config.gamma_a },
        StrategySpec { alpha: config.alpha_b, gamma: config.gamma_b },
        config.total_gamma,
        table,
    )?;
    let analysis = analyze_game(&game);
    write_game_csv(&config.out, &game, &analysis)?;
    Ok(RunOutput {
        files: vec![config.out.clone()],
        summary: game_report(&game, &analysis),
    })
}

/// Printable report of a 2x2 game and its analysis.
pub fn game_report(game: &GameMatrix2x2, analysis: &GameAnalysis) -> String {
    let name = |s: usize| if s == 0 { "A" } else { "B" };
    let mut out = String::new();
    out.push_str(&format!(
        "strategies: A(alpha={}, gamma={}) B(alpha={}, gamma={}), total_gamma={}\n",
        game.strategy_a.alpha,
        game.strategy_a.gamma,
        game.strategy_b.alpha,
        game.strategy_b.gamma,
        game.total_gamma
    ));
    out.push_str(&format!(
        "payoffs: (A,A)=({:.4},{:.4}) (A,B)=({:.4},{:.4}) (B,A)=({:.4},{:.4}) (B,B)=({:.4},{:.4})\n",
        game.a, game.a, game.c, game.d, game.d, game.c, game.b, game.b
    ));
    let profiles: Vec<String> = analysis
        .nash
        .iter()
        .map(|&(i, j)| format!("({},{})", name(i), name(j)))
        .collect();
    out.push_str(&format!("pure nash: {}\n", profiles.join(" ")));
    let pareto: Vec<String> = analysis
        .pareto_optimal
        .iter()
        .map(|&(i, j)| format!("({},{})", name(i), name(j)))
        .collect();
    out.push_str(&format!("pareto optimal: {}\n", pareto.join(" ")));
    for (player, dom) in analysis.dominant.iter().enumerate() {
        match dom {
            Some((s, strength)) => out.push_str(&format!(
                "player {}: {} dominant strategy {}\n",
                player + 1,
                match strength {
                    crate::game::Dominance::Strict => "strictly",
                    crate::game::Dominance::Weak => "weakly",
                },
                name(*s)
            )),
            None => out.push_str(&format!("player {}: no dominant strategy\n", player + 1)),
        }
    }
    out
}

fn run_lambda_scenario(config: &ExperimentConfig) -> Result<RunOutput> {
    let grid = config
        .gamma_grid
        .clone()
        .unwrap_or_else(|| (0..=20).map(|i| i as f64 * 0.05).collect());
    let curve = lambda_eff_curve(&grid, config.n, config.m, config.t_max, config.seed)?;
    write_lambda_csv(&config.out, &curve.points)?;
    let endpoint = curve.points.last().map(|p| p.lambda_eff).unwrap_or(f64::NAN);
    Ok(RunOutput {
        files: vec![config.out.clone()],
        summary: format!(
            "effective reward over {} gammas (m={}, t={}); last grid point lambda_eff={:.4}",
            grid.len(),
            config.m,
            config.t_max,
            endpoint
        ),
    })
}

/// Exact small-horizon oracle run (the `oracle` CLI subcommand).
pub fn run_oracle(gamma: f64, t_max: u64, out: &Path) -> Result<RunOutput> {
    let values = oracle_exact(gamma, t_max)?;
    let mut writer = csv_writer(out)?;
    writer.write_record(["t", "r_exact"])?;
    for (i, v) in values.iter().enumerate() {
        writer.write_record([(i + 1).to_string(), fmt_f64(*v)])?;
    }
    writer.flush().map_err(|source| PsError::Io { path: out.to_path_buf(), source })?;
    Ok(RunOutput {
        files: vec![out.to_path_buf()],
        summary: format!("exact r(t) for gamma={gamma} up to t={t_max}: {values:?}"),
    })
}

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    GammaD,
    GammaI,
    Alpha,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::GammaD => "gamma_d",
            SweepParam::GammaI => "gamma_i",
            SweepParam::Alpha => "alpha",
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = PsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma-d" | "gamma_d" => Ok(SweepParam::GammaD),
            "gamma-i" | "gamma_i" => Ok(SweepParam::GammaI),
            "alpha" => Ok(SweepParam::Alpha),
            other => Err(PsError::InvalidConfig(format!(
                "unknown sweep parameter '{other}' (expected gamma-d, gamma-i, or alpha)"
            ))),
        }
    }
}

/// Sweep one parameter of a curve scenario, recording each run's asymptote.
pub fn run_sweep(
    base: &ExperimentConfig,
    param: SweepParam,
    values: &[f64],
) -> Result<RunOutput> {
    if values.is_empty() {
        return Err(PsError::InvalidConfig("sweep needs at least one value".into()));
    }
    if !matches!(
        base.scenario,
        Scenario::Fo | Scenario::Appendix | Scenario::PoAbsolute | Scenario::PoMixed
    ) {
        return Err(PsError::InvalidConfig(format!(
            "sweep applies to curve scenarios, not {}",
            base.scenario
        )));
    }
    let mut rows = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        let mut config = base.clone();
        config.seed = derive_seed(base.seed, i as u64);
        match param {
            SweepParam::GammaD => config.gamma_d = v,
            SweepParam::GammaI => config.gamma_i = v,
            SweepParam::Alpha => config.alpha = v,
        }
        config.validate()?;
        let rules = config.rules()?;
        let curve = match config.scenario {
            Scenario::Fo | Scenario::Appendix => fo_curve(
                &rules,
                AgentConfig::new(config.gamma_d)?,
                config.m,
                config.t_max,
                config.seed,
                false,
            )?,
            _ => {
                let alpha = if config.scenario == Scenario::PoAbsolute {
                    0.0
                } else {
                    config.alpha
                };
                po_curves(
                    &rules,
                    alpha,
                    AgentConfig::new(config.gamma_d)?,
                    AgentConfig::new(config.gamma_i)?,
                    config.m,
                    config.t_max,
                    config.seed,
                    false,
                )?
                .defender
            }
        };
        rows.push((v, curve.asymptote(), curve.asymptote_stderr()));
    }
    let mut writer = csv_writer(&base.out)?;
    writer.write_record([param.name(), "r_max", "r_stderr"])?;
    for (v, r, se) in &rows {
        writer.write_record([fmt_f64(*v), fmt_f64(*r), fmt_f64(*se)])?;
    }
    writer
        .flush()
        .map_err(|source| PsError::Io { path: base.out.clone(), source })?;
    Ok(RunOutput {
        files: vec![base.out.clone()],
        summary: format!("swept {} over {} values", param.name(), values.len()),
    })
}

/// Trailing moving average; entries before a full window average what is
/// available. A window of 1 returns the series unchanged.
pub fn windowed_mean(series: &[f64], window: usize) -> Vec<f64> {
    let w = window.max(1);
    let mut out = Vec::with_capacity(series.len());
    let mut running = 0.0;
    for (i, &x) in series.iter().enumerate() {
        running += x;
        if i >= w {
            running -= series[i - w];
        }
        let len = (i + 1).min(w);
        out.push(running / len as f64);
    }
    out
}

/// Ensemble-averaged, windowed blocking-action rate from per-agent round
/// logs: the windowed mean of the 0/1 blocked indicator.
pub fn action_rate_estimator(records: &[Vec<RoundRecord>], window: usize) -> Result<Vec<f64>> {
    if window < 1 {
        return Err(PsError::InvalidParameter("window must be >= 1".into()));
    }
    if records.is_empty() || records[0].is_empty() {
        return Ok(Vec::new());
    }
    let t_len = records[0].len();
    if records.iter().any(|r| r.len() != t_len) {
        return Err(PsError::InvalidDimension(
            "all agents must contribute the same number of rounds".into(),
        ));
    }
    let m = records.len() as f64;
    let mean_indicator: Vec<f64> = (0..t_len)
        .map(|t| {
            records
                .iter()
                .map(|agent| f64::from(u8::from(agent[t].blocked())))
                .sum::<f64>()
                / m
        })
        .collect();
    Ok(windowed_mean(&mean_indicator, window))
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| PsError::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
    }
    Ok(csv::Writer::from_path(path)?)
}

fn path_with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}{suffix}.{ext}"))
}

pub fn write_curve_csv(path: &Path, curve: &EfficiencyCurve) -> Result<()> {
    let mut writer = csv_writer(path)?;
    match &curve.action_rate {
        Some(rates) => {
            writer.write_record(["t", "r_mean", "r_stderr", "action_rate"])?;
            for (i, rate) in rates.iter().enumerate() {
                writer.write_record([
                    (i + 1).to_string(),
                    fmt_f64(curve.r_mean[i]),
                    fmt_f64(curve.r_stderr[i]),
                    fmt_f64(*rate),
                ])?;
            }
        }
        None => {
            writer.write_record(["t", "r_mean", "r_stderr"])?;
            for i in 0..curve.len() {
                writer.write_record([
                    (i + 1).to_string(),
                    fmt_f64(curve.r_mean[i]),
                    fmt_f64(curve.r_stderr[i]),
                ])?;
            }
        }
    }
    writer
        .flush()
        .map_err(|source| PsError::Io { path: path.to_path_buf(), source })
}

pub fn write_surface_csv(path: &Path, cells: &[SurfaceCell]) -> Result<()> {
    let mut writer = csv_writer(path)?;
    writer.write_record(["gamma_d", "gamma_i", "alpha", "r_max", "mode"])?;
    for cell in cells {
        writer.write_record([
            fmt_f64(cell.gamma_d),
            fmt_f64(cell.gamma_i),
            fmt_f64(cell.alpha),
            fmt_f64(cell.r_max),
            cell.mode.to_string(),
        ])?;
    }
    writer
        .flush()
        .map_err(|source| PsError::Io { path: path.to_path_buf(), source })
}

fn write_lambda_csv(path: &Path, points: &[crate::analytics::LambdaEffEstimate]) -> Result<()> {
    let mut writer = csv_writer(path)?;
    writer.write_record([
        "gamma",
        "lambda_eff",
        "r_asymptote",
        "r_stderr",
        "deposit_rate",
        "mean_h_rewarded",
    ])?;
    for p in points {
        writer.write_record([
            fmt_f64(p.gamma),
            fmt_f64(p.lambda_eff),
            fmt_f64(p.r_asymptote),
            fmt_f64(p.r_stderr),
            fmt_f64(p.deposit_rate),
            fmt_f64(p.mean_h_rewarded),
        ])?;
    }
    writer
        .flush()
        .map_err(|source| PsError::Io { path: path.to_path_buf(), source })
}

fn write_game_csv(path: &Path, game: &GameMatrix2x2, analysis: &GameAnalysis) -> Result<()> {
    let mut writer = csv_writer(path)?;
    writer.write_record([
        "strategy_1",
        "strategy_2",
        "payoff_1",
        "payoff_2",
        "nash",
        "pareto_optimal",
    ])?;
    let name = |s: usize| if s == 0 { "A" } else { "B" };
    for profile in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let (p1, p2) = game.payoffs(profile);
        writer.write_record([
            name(profile.0).to_string(),
            name(profile.1).to_string(),
            fmt_f64(p1),
            fmt_f64(p2),
            analysis.nash.contains(&profile).to_string(),
            analysis.pareto_optimal.contains(&profile).to_string(),
        ])?;
    }
    writer
        .flush()
        .map_err(|source| PsError::Io { path: path.to_path_buf(), source })
}

fn write_coalition_csv(
    path: &Path,
    rows: &[(f64, f64, crate::game::CoalitionReport)],
) -> Result<()> {
    let mut writer = csv_writer(path)?;
    writer.write_record(["gamma_block_i", "gamma_block_j", "r_col_po", "r_col_fo", "class"])?;
    for (bi, bj, report) in rows {
        writer.write_record([
            fmt_f64(*bi),
            fmt_f64(*bj),
            fmt_f64(report.r_col_po),
            fmt_f64(report.r_col_fo),
            report.class.to_string(),
        ])?;
    }
    writer
        .flush()
        .map_err(|source| PsError::Io { path: path.to_path_buf(), source })
}
