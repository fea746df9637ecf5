//! The two-agent blocking/teaching game.
//!
//! Each agent splits its total forgetting budget between blocking (its own
//! defense) and teaching (the channel it provides to its partner). An
//! agent's payoff is its maximum blocking efficiency, which depends on its
//! own blocking factor, its partner's teaching factor, and its observability:
//!
//!   r_max(alpha, g_block, g_teach_partner)
//!     = alpha p(g_block) + (1 - alpha) [ p(g_block) p(g_teach_partner)
//!                                        + q(g_block) q(g_teach_partner) ]
//!
//! Payoffs are evaluated in closed form from the cached effective-reward
//! table, which keeps game analysis deterministic.

use crate::analytics::{r_po_closed_form, LambdaTable};
use crate::error::{PsError, Result};

const ADDITIVE_TOL: f64 = 1e-9;

/// Split of one agent's forgetting budget between its two tasks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSplit {
    pub total: f64,
    pub blocking: f64,
    pub teaching: f64,
}

impl GammaSplit {
    pub fn new(blocking: f64, teaching: f64) -> Result<Self> {
        if blocking < 0.0 || teaching < 0.0 || blocking + teaching > 1.0 + 1e-12 {
            return Err(PsError::InvalidParameter(format!(
                "gamma split ({blocking}, {teaching}) must be non-negative with sum <= 1"
            )));
        }
        Ok(GammaSplit { total: blocking + teaching, blocking, teaching })
    }

    /// Absolutely selfish: the whole budget goes to teaching, none to the
    /// agent's own blocking memory.
    pub fn selfish(total: f64) -> Result<Self> {
        GammaSplit::new(0.0, total)
    }

    /// Sacrificing: the whole budget burdens the blocking task.
    pub fn sacrificing(total: f64) -> Result<Self> {
        GammaSplit::new(total, 0.0)
    }
}

/// One agent's choice in the coalition setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentStrategy {
    pub split: GammaSplit,
    pub alpha: f64,
}

impl AgentStrategy {
    pub fn new(split: GammaSplit, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(PsError::InvalidParameter(format!(
                "alpha must be in [0, 1], got {alpha}"
            )));
        }
        Ok(AgentStrategy { split, alpha })
    }
}

/// A pair of agent strategies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyProfile {
    pub agents: [AgentStrategy; 2],
}

/// Maximum blocking efficiency of one agent given its observability, its own
/// blocking forgetting factor, and its partner's teaching forgetting factor.
pub fn rmax_agent(
    alpha: f64,
    gamma_block_self: f64,
    gamma_teach_partner: f64,
    table: &LambdaTable,
) -> Result<f64> {
    let blocker = table.model_at(gamma_block_self)?;
    let teacher = table.model_at(gamma_teach_partner)?;
    r_po_closed_form(alpha, &blocker, &teacher)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoalitionClass {
    Superadditive,
    Additive,
    Subadditive,
}

impl std::fmt::Display for CoalitionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoalitionClass::Superadditive => write!(f, "superadditive"),
            CoalitionClass::Additive => write!(f, "additive"),
            CoalitionClass::Subadditive => write!(f, "subadditive"),
        }
    }
}

/// Collective efficiency of a profile against the fully observable baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoalitionReport {
    pub class: CoalitionClass,
    pub r_col_po: f64,
    pub r_col_fo: f64,
}

/// Compare the collective partially observable efficiency of a profile with
/// the fully observable collective p(gamma_i) + p(gamma_j). Equality within
/// 1e-9 classifies as additive.
pub fn classify_coalition(profile: &StrategyProfile, table: &LambdaTable) -> Result<CoalitionReport> {
    let [first, second] = profile.agents;
    let r_first = rmax_agent(first.alpha, first.split.blocking, second.split.teaching, table)?;
    let r_second = rmax_agent(second.alpha, second.split.blocking, first.split.teaching, table)?;
    let r_col_po = r_first + r_second;
    let r_col_fo = table.p_at(first.split.total)? + table.p_at(second.split.total)?;
    let class = if (r_col_po - r_col_fo).abs() <= ADDITIVE_TOL {
        CoalitionClass::Additive
    } else if r_col_po > r_col_fo {
        CoalitionClass::Superadditive
    } else {
        CoalitionClass::Subadditive
    };
    Ok(CoalitionReport { class, r_col_po, r_col_fo })
}

/// A pure strategy of the 2x2 game: an observability and a blocking share of
/// the unit forgetting budget (teaching gets the rest).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategySpec {
    pub alpha: f64,
    pub gamma: f64,
}

/// Normal form of the symmetric two-strategy game.
///
/// Rows are player 1's strategy, columns player 2's, with strategy index
/// 0 = A and 1 = B; the payoff table is
///
///   (A,A) -> (a, a)   (A,B) -> (c, d)
///   (B,A) -> (d, c)   (B,B) -> (b, b)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameMatrix2x2 {
    pub strategy_a: StrategySpec,
    pub strategy_b: StrategySpec,
    pub total_gamma: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GameMatrix2x2 {
    /// Payoff of `player` (0 or 1) at the pure profile (row, col).
    pub fn payoff(&self, player: usize, profile: (usize, usize)) -> f64 {
        let (row, col) = profile;
        match (row, col, player) {
            (0, 0, _) => self.a,
            (1, 1, _) => self.b,
            (0, 1, 0) | (1, 0, 1) => self.c,
            (0, 1, 1) | (1, 0, 0) => self.d,
            _ => panic!("profile out of range"),
        }
    }

    pub fn payoffs(&self, profile: (usize, usize)) -> (f64, f64) {
        (self.payoff(0, profile), self.payoff(1, profile))
    }
}

/// Build the 2x2 game for strategies A and B under a shared total budget:
/// playing X means blocking with gamma_X and teaching with
/// total_gamma - gamma_X, carrying observability alpha_X.
pub fn build_game(
    a: StrategySpec,
    b: StrategySpec,
    total_gamma: f64,
    table: &LambdaTable,
) -> Result<GameMatrix2x2> {
    if !(0.0..=1.0).contains(&total_gamma) {
        return Err(PsError::InvalidParameter(format!(
            "total gamma must be in [0, 1], got {total_gamma}"
        )));
    }
    for s in [a, b] {
        if !(0.0..=1.0).contains(&s.alpha) || s.gamma < 0.0 || s.gamma > total_gamma {
            return Err(PsError::InvalidParameter(format!(
                "strategy (alpha={}, gamma={}) out of range for total {total_gamma}",
                s.alpha, s.gamma
            )));
        }
    }
    let teach = |gamma: f64| total_gamma - gamma;
    Ok(GameMatrix2x2 {
        strategy_a: a,
        strategy_b: b,
        total_gamma,
        a: rmax_agent(a.alpha, a.gamma, teach(a.gamma), table)?,
        b: rmax_agent(b.alpha, b.gamma, teach(b.gamma), table)?,
        c: rmax_agent(a.alpha, a.gamma, teach(b.gamma), table)?,
        d: rmax_agent(b.alpha, b.gamma, teach(a.gamma), table)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Strict,
    Weak,
}

/// Exhaustive pure-strategy analysis of a 2x2 game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameAnalysis {
    /// Pure Nash equilibria: profiles where no player gains by a unilateral
    /// deviation (ties allowed).
    pub nash: Vec<(usize, usize)>,
    /// Profiles not Pareto-dominated by any other profile.
    pub pareto_optimal: Vec<(usize, usize)>,
    /// Per player: the dominant strategy, if any, with its strength. Ties
    /// across the board yield no dominance rather than a silent pick.
    pub dominant: [Option<(usize, Dominance)>; 2],
}

/// True when `x` Pareto-dominates `y`: no player worse, some player better.
pub fn pareto_dominates(x: (f64, f64), y: (f64, f64)) -> bool {
    x.0 >= y.0 && x.1 >= y.1 && (x.0 > y.0 || x.1 > y.1)
}

pub fn analyze_game(game: &GameMatrix2x2) -> GameAnalysis {
    let profiles = [(0, 0), (0, 1), (1, 0), (1, 1)];

    let nash = profiles
        .iter()
        .copied()
        .filter(|&(row, col)| {
            let p1_stays = game.payoff(0, (row, col)) >= game.payoff(0, (1 - row, col));
            let p2_stays = game.payoff(1, (row, col)) >= game.payoff(1, (row, 1 - col));
            p1_stays && p2_stays
        })
        .collect();

    let pareto_optimal = profiles
        .iter()
        .copied()
        .filter(|&p| {
            !profiles
                .iter()
                .any(|&other| other != p && pareto_dominates(game.payoffs(other), game.payoffs(p)))
        })
        .collect();

    let dominant_for = |player: usize| -> Option<(usize, Dominance)> {
        for strategy in 0..2 {
            let other = 1 - strategy;
            let diffs: Vec<f64> = (0..2)
                .map(|opp| {
                    let mine = if player == 0 { (strategy, opp) } else { (opp, strategy) };
                    let alt = if player == 0 { (other, opp) } else { (opp, other) };
                    game.payoff(player, mine) - game.payoff(player, alt)
                })
                .collect();
            if diffs.iter().all(|&d| d > 0.0) {
                return Some((strategy, Dominance::Strict));
            }
            if diffs.iter().all(|&d| d >= 0.0) && diffs.iter().any(|&d| d > 0.0) {
                return Some((strategy, Dominance::Weak));
            }
        }
        None
    };

    GameAnalysis {
        nash,
        pareto_optimal,
        dominant: [dominant_for(0), dominant_for(1)],
    }
}
