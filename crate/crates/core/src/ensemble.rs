//! Seeded parallel ensembles of independent agents.
//!
//! Every agent in an ensemble owns RngStream (seed, agent_index), so its
//! trajectory is a pure function of the experiment seed. Aggregation runs
//! over fixed-size chunks of agents: chunks are simulated in parallel,
//! collected in index order, and folded sequentially, so the floating-point
//! summation order — and therefore every emitted byte — is independent of
//! the worker count.

use rayon::prelude::*;

use crate::agent::{Agent, AgentConfig};
use crate::agent::RngStream;
use crate::error::{PsError, Result};
use crate::invasion::{step_fo, InvasionRules};
use crate::observability::{step_po, ObservabilityConfig, TwoAgentSystem};

const CHUNK: usize = 128;

/// Ensemble-averaged blocking-efficiency time series.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyCurve {
    /// Mean over agents of the probability-based efficiency at each step.
    pub r_mean: Vec<f64>,
    /// Standard error of that mean at each step.
    pub r_stderr: Vec<f64>,
    /// Ensemble mean of the 0/1 blocked indicator at each step, if tracked.
    pub action_rate: Option<Vec<f64>>,
    /// Ensemble size.
    pub agents: usize,
}

impl EfficiencyCurve {
    pub fn len(&self) -> usize {
        self.r_mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_mean.is_empty()
    }

    /// Asymptote estimate: mean of the final 10% of steps.
    pub fn asymptote(&self) -> f64 {
        window_tail_mean(&self.r_mean)
    }

    /// Standard error to attach to `asymptote` (mean of the tail stderr,
    /// conservative since consecutive steps are correlated).
    pub fn asymptote_stderr(&self) -> f64 {
        window_tail_mean(&self.r_stderr)
    }
}

pub(crate) fn window_tail_mean(series: &[f64]) -> f64 {
    if series.is_empty() {
        return f64::NAN;
    }
    let win = (series.len() / 10).max(1);
    let tail = &series[series.len() - win..];
    tail.iter().sum::<f64>() / win as f64
}

/// Defender and interpreter curves from one partially observable ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct PoCurves {
    pub defender: EfficiencyCurve,
    pub interpreter: EfficiencyCurve,
}

/// Stationary-window statistics of a fully observable ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStats {
    /// Mean efficiency over the final 10% of steps.
    pub r_mean: f64,
    /// Standard error of that mean across agents.
    pub r_stderr: f64,
    /// Mean reward deposited per step, per rewarded edge.
    pub deposit_rate: f64,
    /// Mean weight on the rewarded edges at the window steps.
    pub mean_h_rewarded: f64,
}

/// Mix an experiment seed with a scenario-level salt (grid cell index,
/// comparison run, ...) so sub-experiments get independent streams.
pub fn derive_seed(base: u64, salt: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = base ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct CurveAcc {
    r_sum: Vec<f64>,
    r_sq: Vec<f64>,
    act_sum: Option<Vec<f64>>,
}

impl CurveAcc {
    fn new(t: usize, track_actions: bool) -> Self {
        CurveAcc {
            r_sum: vec![0.0; t],
            r_sq: vec![0.0; t],
            act_sum: track_actions.then(|| vec![0.0; t]),
        }
    }

    fn merge(&mut self, other: &CurveAcc) {
        for (a, b) in self.r_sum.iter_mut().zip(&other.r_sum) {
            *a += b;
        }
        for (a, b) in self.r_sq.iter_mut().zip(&other.r_sq) {
            *a += b;
        }
        if let (Some(mine), Some(theirs)) = (self.act_sum.as_mut(), other.act_sum.as_ref()) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                *a += b;
            }
        }
    }

    fn into_curve(self, m: usize) -> EfficiencyCurve {
        let mf = m as f64;
        let r_mean: Vec<f64> = self.r_sum.iter().map(|s| s / mf).collect();
        let r_stderr = self
            .r_sq
            .iter()
            .zip(&r_mean)
            .map(|(sq, mean)| stderr_from_moments(*sq, *mean, m))
            .collect();
        EfficiencyCurve {
            r_mean,
            r_stderr,
            action_rate: self.act_sum.map(|v| v.iter().map(|s| s / mf).collect()),
            agents: m,
        }
    }
}

fn stderr_from_moments(sum_sq: f64, mean: f64, m: usize) -> f64 {
    if m < 2 {
        return 0.0;
    }
    let mf = m as f64;
    let var = ((sum_sq - mf * mean * mean) / (mf - 1.0)).max(0.0);
    (var / mf).sqrt()
}

fn check_ensemble(m: usize) -> Result<()> {
    if m == 0 {
        return Err(PsError::InvalidParameter("ensemble size m must be >= 1".into()));
    }
    Ok(())
}

fn chunk_ranges(m: usize) -> Vec<(usize, usize)> {
    (0..m.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(m)))
        .collect()
}

/// Fully observable ensemble: m independent agents, per-step mean efficiency
/// computed from each agent's current transition probabilities.
pub fn fo_curve(
    rules: &InvasionRules,
    config: AgentConfig,
    m: usize,
    t_max: u64,
    seed: u64,
    track_actions: bool,
) -> Result<EfficiencyCurve> {
    check_ensemble(m)?;
    let n = rules.num_symbols();
    let steps = t_max as usize;
    let accs: Vec<Result<CurveAcc>> = chunk_ranges(m)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc = CurveAcc::new(steps, track_actions);
            for idx in lo..hi {
                let mut agent = Agent::new(n, n, config)?;
                let mut rng = RngStream::new(seed, idx as u64);
                for t in 1..=t_max {
                    let map = rules.active_map(t);
                    let mut r = 0.0;
                    for (i, &correct) in map.iter().enumerate() {
                        r += agent.prob_in_row(i, correct);
                    }
                    r /= n as f64;
                    let slot = (t - 1) as usize;
                    acc.r_sum[slot] += r;
                    acc.r_sq[slot] += r * r;
                    let rec = step_fo(&mut agent, rules, t, &mut rng)?;
                    if let Some(act) = acc.act_sum.as_mut() {
                        act[slot] += f64::from(u8::from(rec.blocked()));
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = CurveAcc::new(steps, track_actions);
    for acc in accs {
        total.merge(&acc?);
    }
    Ok(total.into_curve(m))
}

/// Partially observable ensemble of defender-interpreter systems. Returns
/// the defender's mixed-efficiency curve (with the committed-action blocking
/// indicator if tracked) and the interpreter's own learning curve.
pub fn po_curves(
    rules: &InvasionRules,
    alpha: f64,
    defender_config: AgentConfig,
    interpreter_config: AgentConfig,
    m: usize,
    t_max: u64,
    seed: u64,
    track_actions: bool,
) -> Result<PoCurves> {
    check_ensemble(m)?;
    let obs = ObservabilityConfig::new(alpha)?;
    let n = rules.num_symbols();
    let steps = t_max as usize;
    let accs: Vec<Result<(CurveAcc, CurveAcc)>> = chunk_ranges(m)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc_d = CurveAcc::new(steps, track_actions);
            let mut acc_i = CurveAcc::new(steps, false);
            for idx in lo..hi {
                let mut system =
                    TwoAgentSystem::new(n, defender_config, interpreter_config, obs)?;
                let mut rng = RngStream::new(seed, idx as u64);
                for t in 1..=t_max {
                    let map = rules.active_map(t);
                    let r = system.mixed_efficiency_fast(map);
                    let ri = system.interpreter_efficiency_fast();
                    let slot = (t - 1) as usize;
                    acc_d.r_sum[slot] += r;
                    acc_d.r_sq[slot] += r * r;
                    acc_i.r_sum[slot] += ri;
                    acc_i.r_sq[slot] += ri * ri;
                    let rec = step_po(&mut system, rules, t, &mut rng)?;
                    if let Some(act) = acc_d.act_sum.as_mut() {
                        act[slot] += f64::from(u8::from(rec.blocked()));
                    }
                }
            }
            Ok((acc_d, acc_i))
        })
        .collect();
    let mut total_d = CurveAcc::new(steps, track_actions);
    let mut total_i = CurveAcc::new(steps, false);
    for acc in accs {
        let (d, i) = acc?;
        total_d.merge(&d);
        total_i.merge(&i);
    }
    Ok(PoCurves {
        defender: total_d.into_curve(m),
        interpreter: total_i.into_curve(m),
    })
}

/// Stationary-window measurements of a fully observable ensemble, taken over
/// the final 10% of the horizon: mean efficiency (with its cross-agent
/// standard error), the per-step reward deposit per rewarded edge, and the
/// mean weight sitting on the rewarded edges.
pub fn fo_window_stats(
    config: AgentConfig,
    n: usize,
    m: usize,
    t_max: u64,
    seed: u64,
) -> Result<WindowStats> {
    check_ensemble(m)?;
    if t_max == 0 {
        return Err(PsError::InvalidParameter("t_max must be >= 1".into()));
    }
    let rules = InvasionRules::new(n)?;
    let win = (t_max / 10).max(1);
    let first_window_step = t_max - win + 1;
    // per chunk: sum and sum of squares of per-agent window means, plus
    // deposit and weight sums
    let accs: Vec<Result<[f64; 4]>> = chunk_ranges(m)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc = [0.0f64; 4];
            for idx in lo..hi {
                let mut agent = Agent::new(n, n, config)?;
                let mut rng = RngStream::new(seed, idx as u64);
                let mut wr = 0.0;
                let mut wdep = 0.0;
                let mut wh = 0.0;
                for t in 1..=t_max {
                    let in_window = t >= first_window_step;
                    if in_window {
                        let map = rules.active_map(t);
                        let mut r = 0.0;
                        let mut h = 0.0;
                        for (i, &correct) in map.iter().enumerate() {
                            r += agent.prob_in_row(i, correct);
                            h += agent.h().get(i, correct);
                        }
                        wr += r / n as f64;
                        wh += h / n as f64;
                    }
                    let rec = step_fo(&mut agent, &rules, t, &mut rng)?;
                    if in_window {
                        wdep += rec.defender_reward / n as f64;
                    }
                }
                let wf = win as f64;
                let mean_r = wr / wf;
                acc[0] += mean_r;
                acc[1] += mean_r * mean_r;
                acc[2] += wdep / wf;
                acc[3] += wh / wf;
            }
            Ok(acc)
        })
        .collect();
    let mut total = [0.0f64; 4];
    for acc in accs {
        let a = acc?;
        for (t, v) in total.iter_mut().zip(a) {
            *t += v;
        }
    }
    let mf = m as f64;
    let r_mean = total[0] / mf;
    Ok(WindowStats {
        r_mean,
        r_stderr: stderr_from_moments(total[1], r_mean, m),
        deposit_rate: total[2] / mf,
        mean_h_rewarded: total[3] / mf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rules2() -> InvasionRules {
        InvasionRules::new(2).unwrap()
    }

    #[test]
    fn first_step_is_exactly_half() {
        let curve = fo_curve(&rules2(), AgentConfig::new(0.5).unwrap(), 50, 10, 1, false).unwrap();
        assert_abs_diff_eq!(curve.r_mean[0], 0.5, epsilon = 1e-15);
        assert_eq!(curve.r_stderr[0], 0.0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                fo_curve(&rules2(), AgentConfig::new(0.3).unwrap(), 500, 100, 77, true).unwrap()
            })
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one, four); // exact equality, including float bits
    }

    #[test]
    fn po_worker_count_does_not_change_results() {
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                po_curves(
                    &rules2(),
                    0.4,
                    AgentConfig::new(0.3).unwrap(),
                    AgentConfig::new(0.6).unwrap(),
                    300,
                    80,
                    5,
                    true,
                )
                .unwrap()
            })
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn stderr_shrinks_like_inverse_sqrt_m() {
        let se_at = |m: usize| {
            fo_curve(&rules2(), AgentConfig::new(0.5).unwrap(), m, 200, 9, false)
                .unwrap()
                .asymptote_stderr()
        };
        let s100 = se_at(100);
        let s400 = se_at(400);
        let s1600 = se_at(1600);
        for (coarse, fine) in [(s100, s400), (s400, s1600)] {
            let ratio = coarse / fine;
            assert!(
                (1.4..=2.9).contains(&ratio),
                "expected ~2x shrink per 4x agents, got {ratio:.2} ({coarse:.5} -> {fine:.5})"
            );
        }
    }

    #[test]
    fn interpreter_channel_at_gamma_one_hits_paper_asymptote() {
        // Ensemble-mean channel diagonal for a gamma=1 interpreter: 6/11.
        let curves = po_curves(
            &rules2(),
            0.0,
            AgentConfig::new(1.0).unwrap(),
            AgentConfig::new(1.0).unwrap(),
            4000,
            400,
            21,
            false,
        )
        .unwrap();
        let diag = curves.interpreter.asymptote();
        assert!((diag - 6.0 / 11.0).abs() < 0.01, "interpreter asymptote {diag}");
    }

    #[test]
    fn window_stats_satisfy_stationary_mean_identity() {
        // gamma * (mean h - 1) equals the deposit rate at stationarity.
        let stats =
            fo_window_stats(AgentConfig::new(1.0).unwrap(), 2, 4000, 600, 11).unwrap();
        assert!((stats.r_mean - 6.0 / 11.0).abs() < 0.01, "r {}", stats.r_mean);
        assert!(
            (stats.mean_h_rewarded - (stats.deposit_rate / 1.0 + 1.0)).abs() < 0.01,
            "h {} vs deposit-implied {}",
            stats.mean_h_rewarded,
            stats.deposit_rate + 1.0
        );
    }

    #[test]
    fn derive_seed_spreads() {
        let a = derive_seed(42, 0);
        let b = derive_seed(42, 1);
        let c = derive_seed(43, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(42, 0));
    }
}
