//! The partially observable layer: interpreter agent, belief channel,
//! observability parameter alpha, and the efficiency functionals.
//!
//! In the partially observable invasion game the world symbol is relayed by a
//! second agent, the interpreter, which learns the symbols itself and
//! announces what it believes it saw. The defender keeps two disjoint percept
//! families, world-colored and belief-colored, and every round both families
//! rehearse: the world row for the true symbol and the belief row for the
//! announced symbol each sample an action and learn from it. The
//! observability parameter alpha only gates delivery — which channel's action
//! the defender actually commits, and with what weight each channel enters
//! the blocking efficiency. Rehearsal is the same decoupling of memory walks
//! from real action that the agent kernel is built on, applied per channel;
//! it keeps each percept family's statistics those of a fully observable
//! learner at its own forgetting factor, which is what the closed-form
//! asymptotics describe.
//!
//! Three efficiency functionals are provided: fully observable (world rows
//! only), absolute partially observable (belief rows composed with the
//! interpreter's channel), and the alpha-mixture of the two. The mixture is
//! also evaluated through a complex generic-belief-state form whose real part
//! must coincide with the mixture; the imaginary cross-channel terms are
//! discarded.

use num_complex::Complex64;

use crate::agent::{Agent, AgentConfig, ClipId, RngStream};
use crate::error::{PsError, Result};
use crate::invasion::{attacker_draw, InvasionRules, RoundRecord};

/// Observability parameter of the environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservabilityConfig {
    pub alpha: f64,
}

impl ObservabilityConfig {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(PsError::InvalidParameter(format!(
                "alpha must be in [0, 1], got {alpha}"
            )));
        }
        Ok(ObservabilityConfig { alpha })
    }
}

/// Row-stochastic table of announcement probabilities: entry (i, j) is the
/// probability that world symbol i is announced as belief symbol j. Rows sum
/// to one; columns need not.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefChannel {
    probs: Vec<f64>,
    num_world: usize,
    num_belief: usize,
}

impl BeliefChannel {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let num_world = rows.len();
        if num_world == 0 {
            return Err(PsError::InvalidDimension("empty belief channel".into()));
        }
        let num_belief = rows[0].len();
        let mut probs = Vec::with_capacity(num_world * num_belief);
        for row in &rows {
            if row.len() != num_belief {
                return Err(PsError::InvalidDimension("ragged belief channel".into()));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 || row.iter().any(|p| *p < 0.0) {
                return Err(PsError::InvalidParameter(format!(
                    "belief channel rows must be probability vectors (row sum {sum})"
                )));
            }
            probs.extend_from_slice(row);
        }
        Ok(BeliefChannel { probs, num_world, num_belief })
    }

    pub fn identity(n: usize) -> Self {
        let mut probs = vec![0.0; n * n];
        for i in 0..n {
            probs[i * n + i] = 1.0;
        }
        BeliefChannel { probs, num_world: n, num_belief: n }
    }

    pub fn uniform(num_world: usize, num_belief: usize) -> Self {
        BeliefChannel {
            probs: vec![1.0 / num_belief as f64; num_world * num_belief],
            num_world,
            num_belief,
        }
    }

    pub fn num_world(&self) -> usize {
        self.num_world
    }

    pub fn num_belief(&self) -> usize {
        self.num_belief
    }

    #[inline]
    pub fn prob(&self, world: usize, belief: usize) -> f64 {
        self.probs[world * self.num_belief + belief]
    }

    pub fn row(&self, world: usize) -> &[f64] {
        &self.probs[world * self.num_belief..(world + 1) * self.num_belief]
    }
}

/// Extract the interpreter's current announcement channel: row i is its
/// transition distribution from world symbol i.
pub fn belief_channel_of(interpreter: &Agent) -> Result<BeliefChannel> {
    let n = interpreter.num_world_percepts();
    let rows = (0..n)
        .map(|i| interpreter.transition_probs(ClipId::world(i)))
        .collect::<Result<Vec<_>>>()?;
    BeliefChannel::from_rows(rows)
}

/// Defender plus interpreter playing one partially observable invasion game.
///
/// The two agents' clip networks are separate structs and share no edges;
/// nothing here reads or writes across them.
#[derive(Debug, Clone)]
pub struct TwoAgentSystem {
    defender: Agent,
    interpreter: Agent,
    config: ObservabilityConfig,
}

impl TwoAgentSystem {
    /// Standard shape: defender with N world + N belief percepts and N
    /// actions, interpreter with N world percepts and N belief announcements.
    pub fn new(
        n: usize,
        defender_config: AgentConfig,
        interpreter_config: AgentConfig,
        config: ObservabilityConfig,
    ) -> Result<Self> {
        let defender = Agent::with_belief_percepts(n, n, n, defender_config)?;
        let interpreter = Agent::new(n, n, interpreter_config)?;
        TwoAgentSystem::with_agents(defender, interpreter, config)
    }

    pub fn with_agents(
        defender: Agent,
        interpreter: Agent,
        config: ObservabilityConfig,
    ) -> Result<Self> {
        let n = interpreter.num_world_percepts();
        if defender.num_world_percepts() != n
            || defender.num_belief_percepts() != interpreter.num_actions()
            || defender.num_actions() != n
        {
            return Err(PsError::InvalidDimension(format!(
                "defender {}+{}x{} does not fit interpreter {}x{}",
                defender.num_world_percepts(),
                defender.num_belief_percepts(),
                defender.num_actions(),
                n,
                interpreter.num_actions()
            )));
        }
        Ok(TwoAgentSystem { defender, interpreter, config })
    }

    pub fn defender(&self) -> &Agent {
        &self.defender
    }

    pub fn interpreter(&self) -> &Agent {
        &self.interpreter
    }

    pub fn alpha(&self) -> f64 {
        self.config.alpha
    }

    pub fn num_symbols(&self) -> usize {
        self.interpreter.num_world_percepts()
    }

    /// Current mixed blocking efficiency of the system.
    pub fn mixed_efficiency(&self, rules: &InvasionRules) -> Result<f64> {
        let channel = belief_channel_of(&self.interpreter)?;
        efficiency_mixed(&self.defender, &channel, rules, self.config.alpha)
    }

    /// Allocation-free mixed efficiency against the map active at t.
    /// Identical to the public functional; used inside ensemble loops.
    #[inline]
    pub(crate) fn mixed_efficiency_fast(&self, map: &[usize]) -> f64 {
        let n = map.len();
        let alpha = self.config.alpha;
        let mut fo = 0.0;
        for (i, &correct) in map.iter().enumerate() {
            fo += self.defender.prob_in_row(i, correct);
        }
        fo /= n as f64;
        let mut po = 0.0;
        for (i, &correct) in map.iter().enumerate() {
            let irow = self.interpreter.h().row(i);
            let itotal: f64 = irow.iter().sum();
            for (j, w) in irow.iter().enumerate() {
                po += self.defender.prob_in_row(n + j, correct) * (w / itotal);
            }
        }
        po /= n as f64;
        alpha * fo + (1.0 - alpha) * po
    }

    #[inline]
    pub(crate) fn interpreter_efficiency_fast(&self) -> f64 {
        let n = self.num_symbols();
        (0..n)
            .map(|i| self.interpreter.prob_in_row(i, i))
            .sum::<f64>()
            / n as f64
    }
}

/// One partially observable round.
///
/// The attacker draws the world symbol s; the interpreter announces a belief
/// b and is rewarded when the announcement is faithful (b = s). Both defender
/// channels then rehearse: the world row of s samples a block judged against
/// s, the belief row of b samples a block judged against b's designated
/// symbol. With probability alpha the round's committed action is the direct
/// one, otherwise the relayed one; the logged defender reward is for the
/// committed action judged against the true world symbol. All three updates
/// are applied every round.
pub fn step_po(
    system: &mut TwoAgentSystem,
    rules: &InvasionRules,
    t: u64,
    rng: &mut RngStream,
) -> Result<RoundRecord> {
    let n = rules.num_symbols();
    if system.num_symbols() != n {
        return Err(PsError::InvalidDimension(format!(
            "system has {} symbols, rules have {n}",
            system.num_symbols()
        )));
    }

    let s = attacker_draw(rules, rng);
    let interpreter = &mut system.interpreter;
    let belief = interpreter.sample_action(ClipId::world(s), rng)?;
    let b = belief.index;
    let faithful = b == s;
    let interp_reward = if faithful { interpreter.config().reward_unit } else { 0.0 };

    let direct = rng.uniform() < system.config.alpha;

    let defender = &mut system.defender;
    let unit = defender.config().reward_unit;
    let world_percept = ClipId::world(s);
    let belief_percept = ClipId::belief(b);

    let a_direct = defender.sample_action(world_percept, rng)?.index;
    let direct_reward = rules.reward_for(t, s, a_direct) * unit;

    let a_relayed = defender.sample_action(belief_percept, rng)?.index;
    // The relayed channel learns against the announced symbol's designated
    // block; whether the announcement was faithful is the interpreter's score.
    let relayed_reward = rules.reward_for(t, b, a_relayed) * unit;

    interpreter.update_raw(Some((s, b)), interp_reward);
    let world_row = defender.percept_row(world_percept)?;
    let belief_row = defender.percept_row(belief_percept)?;
    defender.update_raw(Some((world_row, a_direct)), direct_reward);
    defender.deposit_extra(belief_row, a_relayed, relayed_reward);

    let (percept, action) = if direct {
        (world_percept, a_direct)
    } else {
        (belief_percept, a_relayed)
    };
    let committed_reward = rules.reward_for(t, s, action) * unit;

    Ok(RoundRecord {
        t,
        world_symbol: s,
        belief_symbol: Some(b),
        defender_percept: percept,
        defender_action: action,
        defender_reward: committed_reward,
        interpreter_reward: Some(interp_reward),
    })
}

/// Fully observable blocking efficiency: the percept-average probability of
/// the correct block, read off the defender's world rows.
pub fn efficiency_fo(defender: &Agent, rules: &InvasionRules) -> Result<f64> {
    efficiency_fo_at(defender, rules, 0)
}

pub fn efficiency_fo_at(defender: &Agent, rules: &InvasionRules, t: u64) -> Result<f64> {
    let n = rules.num_symbols();
    if defender.num_world_percepts() < n || defender.num_actions() != n {
        return Err(PsError::InvalidDimension(format!(
            "defender {}x{} cannot be scored on {n} world symbols",
            defender.num_world_percepts(),
            defender.num_actions()
        )));
    }
    let map = rules.active_map(t);
    let mut total = 0.0;
    for (i, &correct) in map.iter().enumerate() {
        total += defender.transition_probs(ClipId::world(i))?[correct];
    }
    Ok(total / n as f64)
}

/// Absolute partially observable efficiency: for each world symbol, the
/// probability that the correct block is taken given the announcement passes
/// through the channel, summed over announcements.
pub fn efficiency_po_absolute(
    defender: &Agent,
    channel: &BeliefChannel,
    rules: &InvasionRules,
) -> Result<f64> {
    efficiency_po_absolute_at(defender, channel, rules, 0)
}

pub fn efficiency_po_absolute_at(
    defender: &Agent,
    channel: &BeliefChannel,
    rules: &InvasionRules,
    t: u64,
) -> Result<f64> {
    let n = rules.num_symbols();
    if channel.num_world() != n {
        return Err(PsError::InvalidDimension(format!(
            "channel covers {} world symbols, rules have {n}",
            channel.num_world()
        )));
    }
    if defender.num_belief_percepts() != channel.num_belief() || defender.num_actions() != n {
        return Err(PsError::InvalidDimension(format!(
            "defender with {} belief rows and {} actions cannot compose with a {}x{} channel",
            defender.num_belief_percepts(),
            defender.num_actions(),
            channel.num_world(),
            channel.num_belief()
        )));
    }
    let map = rules.active_map(t);
    let mut total = 0.0;
    for (i, &correct) in map.iter().enumerate() {
        for j in 0..channel.num_belief() {
            let action_given_belief = defender.transition_probs(ClipId::belief(j))?[correct];
            total += action_given_belief * channel.prob(i, j);
        }
    }
    Ok(total / n as f64)
}

/// Mixed efficiency at observability alpha.
///
/// Computed as the convex combination of the fully observable and absolute
/// partially observable functionals, and independently through the complex
/// generic-belief-state route; the two must agree to 1e-12 (the complex
/// route's cross-channel terms are purely imaginary and are discarded with
/// the imaginary part).
pub fn efficiency_mixed(
    defender: &Agent,
    channel: &BeliefChannel,
    rules: &InvasionRules,
    alpha: f64,
) -> Result<f64> {
    let (direct, complex_real) = efficiency_mixed_routes(defender, channel, rules, alpha)?;
    assert!(
        (direct - complex_real).abs() < 1e-12,
        "complex-form efficiency diverged from the convex combination: {direct} vs {complex_real}"
    );
    Ok(direct)
}

/// Both evaluation routes of the mixed efficiency: (convex combination,
/// real part of the complex form).
pub fn efficiency_mixed_routes(
    defender: &Agent,
    channel: &BeliefChannel,
    rules: &InvasionRules,
    alpha: f64,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(PsError::InvalidParameter(format!(
            "alpha must be in [0, 1], got {alpha}"
        )));
    }
    let fo = efficiency_fo(defender, rules)?;
    let po = efficiency_po_absolute(defender, channel, rules)?;
    let direct = alpha * fo + (1.0 - alpha) * po;

    // Generic belief state sqrt(alpha)|s_j> + i sqrt(1-alpha)|b_j> turned
    // into a projector; world and belief symbol families are orthonormal
    // within themselves and actions are scored per world symbol.
    let n = rules.num_symbols();
    let map = rules.active_map(0);
    let amp_s = Complex64::new(alpha.sqrt(), 0.0);
    let amp_b = Complex64::new(0.0, (1.0 - alpha).sqrt());
    let ss = amp_s * amp_s.conj();
    let bb = amp_b * amp_b.conj();
    let sb = amp_s * amp_b.conj();
    let bs = amp_b * amp_s.conj();
    let mut r = Complex64::new(0.0, 0.0);
    for (i, &correct) in map.iter().enumerate() {
        let a_given_s: f64 = defender.transition_probs(ClipId::world(i))?[correct];
        for j in 0..channel.num_belief() {
            let a_given_b: f64 = defender.transition_probs(ClipId::belief(j))?[correct];
            let b_given_s = channel.prob(i, j);
            let delta = if i == j { 1.0 } else { 0.0 };
            r += ss * a_given_s * delta;
            r += bb * a_given_b * b_given_s;
            r += sb * a_given_s * b_given_s;
            r += bs * a_given_b * delta;
        }
    }
    let complex_real = r.re / n as f64;
    Ok((direct, complex_real))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::new_agent;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn rules2() -> InvasionRules {
        InvasionRules::new(2).unwrap()
    }

    /// Defender with given world/belief correct-action weights on each row.
    fn defender_with_rows(world: [[f64; 2]; 2], belief: [[f64; 2]; 2]) -> Agent {
        let mut agent =
            Agent::with_belief_percepts(2, 2, 2, AgentConfig::new(0.0).unwrap()).unwrap();
        for (i, row) in world.iter().enumerate() {
            for (a, w) in row.iter().enumerate() {
                agent
                    .update(Some((ClipId::world(i), ClipId::action(a))), w - 1.0)
                    .unwrap();
            }
        }
        for (j, row) in belief.iter().enumerate() {
            for (a, w) in row.iter().enumerate() {
                agent
                    .update(Some((ClipId::belief(j), ClipId::action(a))), w - 1.0)
                    .unwrap();
            }
        }
        agent
    }

    #[test]
    fn untrained_channel_is_uniform() {
        let interp = new_agent(2, 2, AgentConfig::default()).unwrap();
        let channel = belief_channel_of(&interp).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(channel.prob(i, j), 0.5, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn zero_gamma_interpreter_channel_approaches_identity() {
        let rules = rules2();
        let mut system = TwoAgentSystem::new(
            2,
            AgentConfig::new(0.1).unwrap(),
            AgentConfig::new(0.0).unwrap(),
            ObservabilityConfig::new(0.0).unwrap(),
        )
        .unwrap();
        let mut rng = RngStream::new(31, 0);
        for t in 1..=3000 {
            step_po(&mut system, &rules, t, &mut rng).unwrap();
        }
        let channel = belief_channel_of(system.interpreter()).unwrap();
        for i in 0..2 {
            assert!((channel.prob(i, i) - 1.0).abs() < 0.01, "row {i}: {:?}", channel.row(i));
        }
    }

    #[test]
    fn channel_rows_stay_stochastic_during_play() {
        let rules = rules2();
        let mut system = TwoAgentSystem::new(
            2,
            AgentConfig::new(0.7).unwrap(),
            AgentConfig::new(0.4).unwrap(),
            ObservabilityConfig::new(0.3).unwrap(),
        )
        .unwrap();
        let mut rng = RngStream::new(8, 0);
        for t in 1..=500 {
            step_po(&mut system, &rules, t, &mut rng).unwrap();
            let channel = belief_channel_of(system.interpreter()).unwrap();
            for i in 0..2 {
                let sum: f64 = channel.row(i).iter().sum();
                assert!((sum - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn efficiency_fo_examples() {
        let rules = rules2();
        let untrained =
            Agent::with_belief_percepts(2, 2, 2, AgentConfig::default()).unwrap();
        assert_abs_diff_eq!(efficiency_fo(&untrained, &rules).unwrap(), 0.5, epsilon = 1e-15);

        let trained = defender_with_rows([[1e9, 1.0], [1.0, 1e9]], [[1.0, 1.0], [1.0, 1.0]]);
        assert!(efficiency_fo(&trained, &rules).unwrap() > 0.999_999);

        // The gamma=0.1 deterministic fixed point rows (11,1)/(1,11).
        let fixed = defender_with_rows([[11.0, 1.0], [1.0, 11.0]], [[1.0, 1.0], [1.0, 1.0]]);
        assert_abs_diff_eq!(
            efficiency_fo(&fixed, &rules).unwrap(),
            11.0 / 12.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn efficiency_po_identity_channel_reduces_to_belief_rows() {
        let rules = rules2();
        let defender = defender_with_rows([[1.0, 1.0], [1.0, 1.0]], [[7.0, 3.0], [2.0, 8.0]]);
        let po =
            efficiency_po_absolute(&defender, &BeliefChannel::identity(2), &rules).unwrap();
        assert_abs_diff_eq!(po, (0.7 + 0.8) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn efficiency_po_uniform_channel_is_half() {
        let rules = rules2();
        let defender = defender_with_rows([[1.0, 1.0], [1.0, 1.0]], [[5.0, 1.0], [9.0, 4.0]]);
        let po =
            efficiency_po_absolute(&defender, &BeliefChannel::uniform(2, 2), &rules).unwrap();
        assert_abs_diff_eq!(po, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn efficiency_po_product_rows() {
        // Defender and channel rows both at (6/11, 5/11): (36 + 25) / 121.
        let rules = rules2();
        let defender = defender_with_rows(
            [[1.0, 1.0], [1.0, 1.0]],
            [[6.0, 5.0], [5.0, 6.0]],
        );
        let channel = BeliefChannel::from_rows(vec![
            vec![6.0 / 11.0, 5.0 / 11.0],
            vec![5.0 / 11.0, 6.0 / 11.0],
        ])
        .unwrap();
        let po = efficiency_po_absolute(&defender, &channel, &rules).unwrap();
        assert_abs_diff_eq!(po, 61.0 / 121.0, epsilon = 1e-12);

        // Brute-force the double sum independently.
        let mut brute = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let a_given_b = defender.transition_probs(ClipId::belief(j)).unwrap()[i];
                brute += a_given_b * channel.prob(i, j);
            }
        }
        assert_abs_diff_eq!(po, brute / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn mixed_reductions_and_convexity() {
        let rules = rules2();
        let defender = defender_with_rows([[9.0, 1.0], [1.0, 9.0]], [[7.0, 3.0], [3.0, 7.0]]);
        let channel = BeliefChannel::from_rows(vec![vec![0.8, 0.2], vec![0.3, 0.7]]).unwrap();
        let fo = efficiency_fo(&defender, &rules).unwrap();
        let po = efficiency_po_absolute(&defender, &channel, &rules).unwrap();
        assert_abs_diff_eq!(
            efficiency_mixed(&defender, &channel, &rules, 1.0).unwrap(),
            fo,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            efficiency_mixed(&defender, &channel, &rules, 0.0).unwrap(),
            po,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            efficiency_mixed(&defender, &channel, &rules, 0.5).unwrap(),
            0.5 * (fo + po),
            epsilon = 1e-15
        );
        assert!(efficiency_mixed(&defender, &channel, &rules, 1.5).is_err());
    }

    #[test]
    fn alpha_one_rounds_commit_direct_percepts() {
        let rules = rules2();
        let mut system = TwoAgentSystem::new(
            2,
            AgentConfig::new(0.2).unwrap(),
            AgentConfig::new(0.2).unwrap(),
            ObservabilityConfig::new(1.0).unwrap(),
        )
        .unwrap();
        let mut rng = RngStream::new(17, 0);
        for t in 1..=200 {
            let rec = step_po(&mut system, &rules, t, &mut rng).unwrap();
            assert_eq!(rec.defender_percept.kind, crate::agent::ClipKind::WorldPercept);
            assert_eq!(rec.defender_percept.index, rec.world_symbol);
            let correct = rules.correct_action_at(t, rec.world_symbol);
            assert_eq!(rec.blocked(), rec.defender_action == correct);
        }
    }

    #[test]
    fn alpha_zero_rounds_commit_relayed_percepts() {
        let rules = rules2();
        let mut system = TwoAgentSystem::new(
            2,
            AgentConfig::new(0.2).unwrap(),
            AgentConfig::new(0.2).unwrap(),
            ObservabilityConfig::new(0.0).unwrap(),
        )
        .unwrap();
        let mut rng = RngStream::new(18, 0);
        for t in 1..=200 {
            let rec = step_po(&mut system, &rules, t, &mut rng).unwrap();
            assert_eq!(rec.defender_percept.kind, crate::agent::ClipKind::BeliefPercept);
            assert_eq!(Some(rec.defender_percept.index), rec.belief_symbol);
            // Reward in the record is judged against the true world symbol.
            let correct = rules.correct_action_at(t, rec.world_symbol);
            assert_eq!(rec.blocked(), rec.defender_action == correct);
        }
    }

    #[test]
    fn networks_stay_isolated() {
        let rules = rules2();
        let mut system = TwoAgentSystem::new(
            2,
            AgentConfig::new(0.0).unwrap(),
            AgentConfig::new(0.0).unwrap(),
            ObservabilityConfig::new(0.5).unwrap(),
        )
        .unwrap();
        let mut rng = RngStream::new(4, 0);
        let rec = step_po(&mut system, &rules, 1, &mut rng).unwrap();

        // At gamma=0 the only cells that may move are the three traversed
        // edges, each within its own agent's matrix.
        let s = rec.world_symbol;
        let b = rec.belief_symbol.unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let w = system.interpreter().h().get(i, j);
                if (i, j) == (s, b) {
                    assert!(w == 1.0 || w == 2.0);
                } else {
                    assert_eq!(w, 1.0);
                }
            }
        }
        for row in 0..4 {
            for j in 0..2 {
                let w = system.defender().h().get(row, j);
                if row == s || row == 2 + b {
                    assert!(w == 1.0 || w == 2.0);
                } else {
                    assert_eq!(w, 1.0, "row {row} action {j} must stay untouched");
                }
            }
        }
    }

    proptest! {
        /// The complex route equals the convex combination for any agent,
        /// channel, and alpha; and the mixture is affine in alpha.
        #[test]
        fn complex_route_matches_convex_combination(
            wd in proptest::collection::vec(1.0f64..50.0, 8),
            ch in proptest::collection::vec(0.01f64..1.0, 4),
            alpha in 0.0f64..=1.0,
        ) {
            let rules = rules2();
            let defender = defender_with_rows(
                [[wd[0], wd[1]], [wd[2], wd[3]]],
                [[wd[4], wd[5]], [wd[6], wd[7]]],
            );
            let rows = vec![
                vec![ch[0] / (ch[0] + ch[1]), ch[1] / (ch[0] + ch[1])],
                vec![ch[2] / (ch[2] + ch[3]), ch[3] / (ch[2] + ch[3])],
            ];
            let channel = BeliefChannel::from_rows(rows).unwrap();
            let (direct, complex_real) =
                efficiency_mixed_routes(&defender, &channel, &rules, alpha).unwrap();
            prop_assert!((direct - complex_real).abs() < 1e-12);

            // Affine in alpha between the endpoints.
            let at0 = efficiency_mixed(&defender, &channel, &rules, 0.0).unwrap();
            let at1 = efficiency_mixed(&defender, &channel, &rules, 1.0).unwrap();
            let expect = alpha * at1 + (1.0 - alpha) * at0;
            prop_assert!((direct - expect).abs() < 1e-12);
        }
    }
}
