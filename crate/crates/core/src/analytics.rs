//! Closed-form asymptotics of the invasion game.
//!
//! At stationarity a forgetting agent balances decay against an effective
//! per-step reward lambda_eff(gamma), which pins the asymptotic probability
//! of the correct block,
//!
//!   p_N(gamma) = (lambda + gamma) / (lambda + N gamma),
//!   q_N(gamma) = gamma / (lambda + N gamma),        p + (N-1) q = 1,
//!
//! with the perfect-memory limit (p, q) = (1, 0) at gamma = 0. lambda_eff is
//! estimated from ensembles; composing the estimates through the p/q forms
//! predicts partially observable asymptotes, transparency coefficients, and
//! the payoffs of the two-agent game.

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::ensemble::{self, fo_window_stats};
use crate::error::{PsError, Result};

/// Everything measured by one effective-reward estimation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaEffEstimate {
    pub gamma: f64,
    pub n: usize,
    /// Effective reward: for gamma > 0 the inversion of the p/q closed form
    /// at the measured asymptotic efficiency, so that feeding it back through
    /// `pq_closed_form` reproduces the ensemble asymptote. At gamma = 0 the
    /// inversion is singular and the raw deposit rate is reported instead
    /// (the closed form uses its (1, 0) branch there anyway).
    pub lambda_eff: f64,
    /// Measured asymptotic efficiency (final 10% of the horizon).
    pub r_asymptote: f64,
    /// Cross-agent standard error of the asymptote.
    pub r_stderr: f64,
    /// Mean reward deposited per step per rewarded edge; satisfies the
    /// stationarity identity mean_h = deposit_rate / gamma + 1.
    pub deposit_rate: f64,
    /// Late-time ensemble-mean weight on the rewarded edges.
    pub mean_h_rewarded: f64,
    pub m: usize,
    pub t: u64,
}

/// Estimate the effective reward of the N-symbol fully observable game at
/// forgetting factor gamma, from m agents run to step t.
pub fn estimate_lambda_eff(
    gamma: f64,
    n: usize,
    m: usize,
    t: u64,
    seed: u64,
) -> Result<LambdaEffEstimate> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(PsError::InvalidParameter(format!(
            "gamma must be in [0, 1], got {gamma}"
        )));
    }
    if n < 2 {
        return Err(PsError::InvalidDimension(format!(
            "the invasion game needs N >= 2 symbols, got {n}"
        )));
    }
    const MIN_M: usize = 1000;
    const MIN_T: u64 = 100;
    if m < MIN_M || t < MIN_T {
        // rough scale of the stderr the caller would get
        let approx = 0.5 / ((m.max(1) as f64).sqrt());
        return Err(PsError::Underpowered {
            m,
            t,
            min_m: MIN_M,
            min_t: MIN_T,
            approx_stderr: approx,
        });
    }
    let config = crate::agent::AgentConfig::new(gamma)?;
    let stats = fo_window_stats(config, n, m, t, seed)?;
    let p_hat = stats.r_mean;
    let lambda_eff = if gamma == 0.0 || p_hat >= 1.0 - 1e-12 {
        stats.deposit_rate
    } else {
        (gamma * (n as f64 * p_hat - 1.0) / (1.0 - p_hat)).max(0.0)
    };
    Ok(LambdaEffEstimate {
        gamma,
        n,
        lambda_eff,
        r_asymptote: p_hat,
        r_stderr: stats.r_stderr,
        deposit_rate: stats.deposit_rate,
        mean_h_rewarded: stats.mean_h_rewarded,
        m,
        t,
    })
}

/// Effective reward sampled over a grid of forgetting factors.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveRewardCurve {
    pub points: Vec<LambdaEffEstimate>,
    pub m: usize,
    pub t: u64,
}

impl EffectiveRewardCurve {
    pub fn gammas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.gamma).collect()
    }

    pub fn lambda_eff(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lambda_eff).collect()
    }
}

pub fn lambda_eff_curve(
    grid: &[f64],
    n: usize,
    m: usize,
    t: u64,
    seed: u64,
) -> Result<EffectiveRewardCurve> {
    let points = grid
        .iter()
        .enumerate()
        .map(|(i, &gamma)| estimate_lambda_eff(gamma, n, m, t, ensemble::derive_seed(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EffectiveRewardCurve { points, m, t })
}

/// Asymptotic weight on a rewarded edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HMax {
    /// gamma = 0: the rewarded weight grows without bound.
    Unbounded,
    Value(f64),
}

/// Asymptotic (p, q) model of one agent at one forgetting factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticModel {
    pub n: usize,
    pub gamma: f64,
    pub lambda_eff: f64,
    /// Asymptotic probability of the one correct action.
    pub p: f64,
    /// Asymptotic probability of each of the N-1 incorrect actions.
    pub q: f64,
}

impl AsymptoticModel {
    pub fn h_max(&self) -> HMax {
        if self.gamma == 0.0 {
            HMax::Unbounded
        } else {
            HMax::Value(self.lambda_eff / self.gamma + 1.0)
        }
    }
}

/// Closed-form asymptotic probabilities for given gamma and effective reward.
pub fn pq_closed_form(gamma: f64, lambda_eff: f64, n: usize) -> Result<AsymptoticModel> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(PsError::InvalidParameter(format!(
            "gamma must be in [0, 1], got {gamma}"
        )));
    }
    if !lambda_eff.is_finite() || lambda_eff < 0.0 {
        return Err(PsError::InvalidParameter(format!(
            "lambda_eff must be a non-negative real, got {lambda_eff}"
        )));
    }
    if n < 2 {
        return Err(PsError::InvalidDimension(format!("N must be >= 2, got {n}")));
    }
    let (p, q) = if gamma == 0.0 {
        (1.0, 0.0)
    } else {
        let denom = lambda_eff + n as f64 * gamma;
        ((lambda_eff + gamma) / denom, gamma / denom)
    };
    let model = AsymptoticModel { n, gamma, lambda_eff, p, q };
    debug_assert!((model.p + (n as f64 - 1.0) * model.q - 1.0).abs() < 1e-12);
    Ok(model)
}

/// Asymptotic partially observable efficiency predicted from the defender's
/// and interpreter's (p, q) models:
///
///   r_PO = alpha p_D + (1 - alpha) [ p_D p_I + q_D q_I ]
///
/// cross-checked against the factored form
/// p_D { 1 - (1 - alpha) [ 1 - p_I - (q_D / p_D) q_I ] } to 1e-12.
pub fn r_po_closed_form(
    alpha: f64,
    defender: &AsymptoticModel,
    interpreter: &AsymptoticModel,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(PsError::InvalidParameter(format!(
            "alpha must be in [0, 1], got {alpha}"
        )));
    }
    if defender.n != interpreter.n {
        return Err(PsError::InvalidDimension(format!(
            "defender model has N={}, interpreter N={}",
            defender.n, interpreter.n
        )));
    }
    let (pd, qd) = (defender.p, defender.q);
    let (pi, qi) = (interpreter.p, interpreter.q);
    let direct = alpha * pd + (1.0 - alpha) * (pd * pi + qd * qi);
    let factored = pd * (1.0 - (1.0 - alpha) * (1.0 - pi - (qd / pd) * qi));
    assert!(
        (direct - factored).abs() < 1e-12,
        "product and factored asymptote forms disagree: {direct} vs {factored}"
    );
    Ok(direct)
}

/// Transparency of a partially observable environment relative to the fully
/// observable baseline: beta = r_PO / r_FO, mu = 1 - beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransparencyReport {
    pub r_fo: f64,
    pub r_po: f64,
    pub beta: f64,
    pub mu: f64,
}

pub fn transparency(r_fo: f64, r_po: f64) -> Result<TransparencyReport> {
    if !(r_fo > 0.0) {
        return Err(PsError::InvalidParameter(format!(
            "r_fo must be positive, got {r_fo}"
        )));
    }
    let beta = r_po / r_fo;
    Ok(TransparencyReport { r_fo, r_po, beta, mu: 1.0 - beta })
}

/// Closed-form transparency reduction
/// mu = (1 - alpha) q(gamma_I) [ (N - 1) - q(gamma_D) / p(gamma_D) ],
/// valid whenever p + (N-1) q = 1 holds for both models.
pub fn mu_closed_form(
    alpha: f64,
    defender: &AsymptoticModel,
    interpreter: &AsymptoticModel,
) -> f64 {
    let n = defender.n as f64;
    (1.0 - alpha) * interpreter.q * ((n - 1.0) - defender.q / defender.p)
}

/// Interpolated effective-reward table over a gamma grid, the deterministic
/// backing store for closed-form surfaces and game payoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaTable {
    n: usize,
    gammas: Vec<f64>,
    lambdas: Vec<f64>,
}

impl LambdaTable {
    pub fn from_curve(curve: &EffectiveRewardCurve) -> Result<Self> {
        if curve.points.len() < 2 {
            return Err(PsError::InvalidParameter(
                "a lambda table needs at least two grid points".into(),
            ));
        }
        let mut gammas = Vec::with_capacity(curve.points.len());
        let mut lambdas = Vec::with_capacity(curve.points.len());
        for p in &curve.points {
            if let Some(&last) = gammas.last() {
                if p.gamma <= last {
                    return Err(PsError::InvalidParameter(
                        "lambda table grid must be strictly increasing".into(),
                    ));
                }
            }
            gammas.push(p.gamma);
            lambdas.push(p.lambda_eff);
        }
        Ok(LambdaTable { n: curve.points[0].n, gammas, lambdas })
    }

    pub fn measure(grid: &[f64], n: usize, m: usize, t: u64, seed: u64) -> Result<Self> {
        LambdaTable::from_curve(&lambda_eff_curve(grid, n, m, t, seed)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Linear interpolation of lambda_eff(gamma), clamped to the grid ends.
    pub fn lambda_at(&self, gamma: f64) -> f64 {
        let g = &self.gammas;
        if gamma <= g[0] {
            return self.lambdas[0];
        }
        if gamma >= g[g.len() - 1] {
            return self.lambdas[g.len() - 1];
        }
        let hi = g.partition_point(|&x| x < gamma);
        let (g0, g1) = (g[hi - 1], g[hi]);
        let (l0, l1) = (self.lambdas[hi - 1], self.lambdas[hi]);
        l0 + (l1 - l0) * (gamma - g0) / (g1 - g0)
    }

    pub fn model_at(&self, gamma: f64) -> Result<AsymptoticModel> {
        pq_closed_form(gamma, self.lambda_at(gamma), self.n)
    }

    pub fn p_at(&self, gamma: f64) -> Result<f64> {
        Ok(self.model_at(gamma)?.p)
    }

    /// Process-wide table for the N=2 game: gamma grid 0..1 in steps of
    /// 0.05, m=10000 agents, t=1000 steps, fixed internal seed. Built once.
    pub fn shared() -> &'static LambdaTable {
        static TABLE: OnceLock<LambdaTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
            LambdaTable::measure(&grid, 2, 10_000, 1000, 0x70736c_6162)
                .expect("shared lambda table")
        })
    }
}

/// How a surface cell was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceMode {
    MonteCarlo,
    ClosedForm,
}

impl std::fmt::Display for SurfaceMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SurfaceMode::MonteCarlo => write!(f, "monte-carlo"),
            SurfaceMode::ClosedForm => write!(f, "closed-form"),
        }
    }
}

/// One cell of a maximum-blocking-efficiency surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceCell {
    pub gamma_d: f64,
    pub gamma_i: f64,
    pub alpha: f64,
    pub r_max: f64,
    pub mode: SurfaceMode,
}

/// Ensemble parameters for surface generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceParams {
    pub n: usize,
    pub m: usize,
    pub t_max: u64,
    pub seed: u64,
}

/// Maximum blocking efficiency r_max(gamma_D, gamma_I) at fixed alpha.
///
/// Monte-Carlo mode runs one defender-interpreter ensemble per cell to the
/// asymptote; closed-form mode composes estimate_lambda_eff at the grid's
/// gamma values with the p/q and r_PO closed forms (through `table` when
/// given, otherwise measured at `params` scale).
pub fn asymptotic_surface(
    alpha: f64,
    gamma_d_grid: &[f64],
    gamma_i_grid: &[f64],
    mode: SurfaceMode,
    params: &SurfaceParams,
    table: Option<&LambdaTable>,
) -> Result<Vec<SurfaceCell>> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(PsError::InvalidParameter(format!(
            "alpha must be in [0, 1], got {alpha}"
        )));
    }
    for &g in gamma_d_grid.iter().chain(gamma_i_grid) {
        if !(0.0..=1.0).contains(&g) {
            return Err(PsError::InvalidParameter(format!(
                "grid gamma must be in [0, 1], got {g}"
            )));
        }
    }
    let mut cells = Vec::with_capacity(gamma_d_grid.len() * gamma_i_grid.len());
    match mode {
        SurfaceMode::MonteCarlo => {
            let rules = crate::invasion::InvasionRules::new(params.n)?;
            for (ci, &gd) in gamma_d_grid.iter().enumerate() {
                for (cj, &gi) in gamma_i_grid.iter().enumerate() {
                    let salt = (ci * gamma_i_grid.len() + cj) as u64;
                    let curves = ensemble::po_curves(
                        &rules,
                        alpha,
                        crate::agent::AgentConfig::new(gd)?,
                        crate::agent::AgentConfig::new(gi)?,
                        params.m,
                        params.t_max,
                        ensemble::derive_seed(params.seed, salt),
                        false,
                    )?;
                    cells.push(SurfaceCell {
                        gamma_d: gd,
                        gamma_i: gi,
                        alpha,
                        r_max: curves.defender.asymptote(),
                        mode,
                    });
                }
            }
        }
        SurfaceMode::ClosedForm => {
            let owned;
            let table = match table {
                Some(t) => t,
                None => {
                    let mut grid: Vec<f64> =
                        gamma_d_grid.iter().chain(gamma_i_grid).copied().collect();
                    grid.sort_by(f64::total_cmp);
                    grid.dedup();
                    owned =
                        LambdaTable::measure(&grid, params.n, params.m, params.t_max, params.seed)?;
                    &owned
                }
            };
            for &gd in gamma_d_grid {
                let def = table.model_at(gd)?;
                for &gi in gamma_i_grid {
                    let interp = table.model_at(gi)?;
                    cells.push(SurfaceCell {
                        gamma_d: gd,
                        gamma_i: gi,
                        alpha,
                        r_max: r_po_closed_form(alpha, &def, &interp)?,
                        mode,
                    });
                }
            }
        }
    }
    Ok(cells)
}

/// Test-grade table: coarser ensemble than the shared one, still seeded.
#[cfg(test)]
pub(crate) fn test_table() -> &'static LambdaTable {
    static TABLE: OnceLock<LambdaTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        LambdaTable::measure(&grid, 2, 2000, 500, 7).unwrap()
    })
}
