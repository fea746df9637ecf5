//! The projective-simulation agent kernel.
//!
//! An agent's episodic memory is a two-layer clip network: percept clips on
//! one side, action clips on the other, with a real-valued weight h on every
//! edge. Acting means a single random-walk hop from the perceived clip to an
//! action clip, with hop probabilities given by row normalization of the
//! h-matrix. Learning is the per-step adaptation
//!
//!   h <- h - gamma * (h - 1) + lambda * [edge was traversed]
//!
//! i.e. every edge decays toward its initial value 1 by the forgetting factor
//! gamma, and the traversed edge additionally gains the reward lambda.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{PsError, Result};

/// Which side of the clip network a clip lives on.
///
/// Percepts come in two colors: world percepts arrive straight from the
/// environment, belief percepts arrive relayed through an interpreter agent.
/// The two families occupy disjoint rows of the h-matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClipKind {
    WorldPercept,
    BeliefPercept,
    Action,
}

/// Identifier of a clip in an agent's network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClipId {
    pub kind: ClipKind,
    pub index: usize,
}

impl ClipId {
    pub fn world(index: usize) -> Self {
        ClipId { kind: ClipKind::WorldPercept, index }
    }

    pub fn belief(index: usize) -> Self {
        ClipId { kind: ClipKind::BeliefPercept, index }
    }

    pub fn action(index: usize) -> Self {
        ClipId { kind: ClipKind::Action, index }
    }
}

impl std::fmt::Display for ClipId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self.kind {
            ClipKind::WorldPercept => "s",
            ClipKind::BeliefPercept => "b",
            ClipKind::Action => "a",
        };
        write!(f, "{}{}", tag, self.index)
    }
}

/// Dense percept-by-action table of edge weights.
///
/// Weights start at exactly 1 on every edge and never drop below 1 under the
/// adaptation rule (decay pulls toward 1, rewards are non-negative).
#[derive(Debug, Clone, PartialEq)]
pub struct HMatrix {
    weights: Vec<f64>,
    num_percepts: usize,
    num_actions: usize,
}

impl HMatrix {
    pub fn unit(num_percepts: usize, num_actions: usize) -> Self {
        HMatrix {
            weights: vec![1.0; num_percepts * num_actions],
            num_percepts,
            num_actions,
        }
    }

    pub fn num_percepts(&self) -> usize {
        self.num_percepts
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    #[inline]
    pub fn get(&self, percept: usize, action: usize) -> f64 {
        self.weights[percept * self.num_actions + action]
    }

    #[inline]
    pub fn row(&self, percept: usize) -> &[f64] {
        let start = percept * self.num_actions;
        &self.weights[start..start + self.num_actions]
    }

    #[inline]
    fn decay_all(&mut self, gamma: f64) {
        for w in &mut self.weights {
            *w -= gamma * (*w - 1.0);
        }
    }

    #[inline]
    fn deposit(&mut self, percept: usize, action: usize, reward: f64) {
        self.weights[percept * self.num_actions + action] += reward;
    }
}

/// Learning parameters of one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentConfig {
    /// Forgetting factor (damping), in [0, 1].
    pub gamma: f64,
    /// Reward granted on a successful round, >= 0. Defaults to 1.
    pub reward_unit: f64,
}

impl AgentConfig {
    pub fn new(gamma: f64) -> Result<Self> {
        AgentConfig::with_reward_unit(gamma, 1.0)
    }

    pub fn with_reward_unit(gamma: f64, reward_unit: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(PsError::InvalidParameter(format!(
                "gamma must be in [0, 1], got {gamma}"
            )));
        }
        if !reward_unit.is_finite() || reward_unit < 0.0 {
            return Err(PsError::InvalidParameter(format!(
                "reward_unit must be a non-negative real, got {reward_unit}"
            )));
        }
        Ok(AgentConfig { gamma, reward_unit })
    }
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig { gamma: 0.0, reward_unit: 1.0 }
    }
}

/// Deterministic per-agent random stream.
///
/// Identical (seed, stream_id) pairs yield identical draw sequences on every
/// platform; ensembles give each agent its own stream_id so results do not
/// depend on scheduling or worker count.
#[derive(Debug, Clone)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream { seed, stream_id, rng }
    }

    /// Uniform draw in [0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in 0..n.
    #[inline]
    pub fn pick(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}

/// A projective-simulation agent: an h-matrix plus its learning parameters.
///
/// Percept rows are laid out world percepts first, belief percepts after, so
/// the two colors can never alias.
#[derive(Debug, Clone)]
pub struct Agent {
    h: HMatrix,
    num_world: usize,
    num_belief: usize,
    config: AgentConfig,
}

/// Build an agent whose percept space is `num_percepts` world percepts.
///
/// The initial h-matrix is all ones, so the transition distribution from
/// every percept starts uniform.
pub fn new_agent(num_percepts: usize, num_actions: usize, config: AgentConfig) -> Result<Agent> {
    Agent::new(num_percepts, num_actions, config)
}

impl Agent {
    pub fn new(num_percepts: usize, num_actions: usize, config: AgentConfig) -> Result<Self> {
        Agent::with_belief_percepts(num_percepts, 0, num_actions, config)
    }

    /// Build an agent with both world-colored and belief-colored percepts
    /// (the defender shape in a partially observable setting).
    pub fn with_belief_percepts(
        num_world: usize,
        num_belief: usize,
        num_actions: usize,
        config: AgentConfig,
    ) -> Result<Self> {
        if num_world == 0 || num_actions == 0 {
            return Err(PsError::InvalidDimension(format!(
                "clip spaces must be non-empty: {num_world} world percepts x {num_actions} actions"
            )));
        }
        Ok(Agent {
            h: HMatrix::unit(num_world + num_belief, num_actions),
            num_world,
            num_belief,
            config,
        })
    }

    pub fn config(&self) -> AgentConfig {
        self.config
    }

    pub fn h(&self) -> &HMatrix {
        &self.h
    }

    pub fn num_world_percepts(&self) -> usize {
        self.num_world
    }

    pub fn num_belief_percepts(&self) -> usize {
        self.num_belief
    }

    pub fn num_actions(&self) -> usize {
        self.h.num_actions()
    }

    /// Row index of a percept clip. Action clips are rejected: they are walk
    /// targets, never sources in the two-layer network.
    pub fn percept_row(&self, clip: ClipId) -> Result<usize> {
        match clip.kind {
            ClipKind::WorldPercept if clip.index < self.num_world => Ok(clip.index),
            ClipKind::BeliefPercept if clip.index < self.num_belief => {
                Ok(self.num_world + clip.index)
            }
            ClipKind::Action => Err(PsError::InvalidClip(format!(
                "{clip} (walks start from percept clips)"
            ))),
            _ => Err(PsError::InvalidClip(format!("{clip} (out of range)"))),
        }
    }

    fn action_index(&self, clip: ClipId) -> Result<usize> {
        match clip.kind {
            ClipKind::Action if clip.index < self.num_actions() => Ok(clip.index),
            _ => Err(PsError::InvalidClip(format!("{clip} (expected an action clip)"))),
        }
    }

    /// Normalized transition probabilities from a percept clip: h(from, .)
    /// divided by its row sum.
    pub fn transition_probs(&self, from: ClipId) -> Result<Vec<f64>> {
        let row = self.h.row(self.percept_row(from)?);
        let total: f64 = row.iter().sum();
        Ok(row.iter().map(|w| w / total).collect())
    }

    #[inline]
    pub(crate) fn prob_in_row(&self, row: usize, action: usize) -> f64 {
        let r = self.h.row(row);
        r[action] / r.iter().sum::<f64>()
    }

    /// Sample an action from a percept by inverse CDF over actions in
    /// ascending index order: action j is chosen when the draw u satisfies
    /// u * rowsum < h(0) + ... + h(j).
    pub fn sample_action(&self, percept: ClipId, rng: &mut RngStream) -> Result<ClipId> {
        let row = self.percept_row(percept)?;
        Ok(ClipId::action(self.sample_in_row(row, rng)))
    }

    #[inline]
    pub(crate) fn sample_in_row(&self, row: usize, rng: &mut RngStream) -> usize {
        let weights = self.h.row(row);
        let total: f64 = weights.iter().sum();
        let target = rng.uniform() * total;
        let mut cum = 0.0;
        for (j, w) in weights.iter().enumerate() {
            cum += w;
            if target < cum {
                return j;
            }
        }
        weights.len() - 1
    }

    /// One adaptation step: every edge decays toward 1 by gamma, and the
    /// traversed edge (if any) additionally gains `reward`.
    pub fn update(&mut self, traversed: Option<(ClipId, ClipId)>, reward: f64) -> Result<()> {
        if !reward.is_finite() || reward < 0.0 {
            return Err(PsError::InvalidParameter(format!(
                "reward must be a non-negative real, got {reward}"
            )));
        }
        let edge = match traversed {
            Some((from, to)) => Some((self.percept_row(from)?, self.action_index(to)?)),
            None => None,
        };
        self.h.decay_all(self.config.gamma);
        if let Some((row, action)) = edge {
            self.h.deposit(row, action, reward);
        }
        Ok(())
    }

    /// Same step without clip validation, for hot loops that already hold
    /// raw row/action indices.
    #[inline]
    pub(crate) fn update_raw(&mut self, traversed: Option<(usize, usize)>, reward: f64) {
        self.h.decay_all(self.config.gamma);
        if let Some((row, action)) = traversed {
            self.h.deposit(row, action, reward);
        }
    }

    /// Deposit on an additional edge traversed within the same time step
    /// (the step's decay has already been applied by `update_raw`).
    #[inline]
    pub(crate) fn deposit_extra(&mut self, row: usize, action: usize, reward: f64) {
        self.h.deposit(row, action, reward);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn fresh_agent_is_uniform() {
        for (np, na) in [(2, 2), (4, 2), (1, 3)] {
            let agent = new_agent(np, na, AgentConfig::default()).unwrap();
            for p in 0..np {
                let probs = agent.transition_probs(ClipId::world(p)).unwrap();
                for q in probs {
                    assert_abs_diff_eq!(q, 1.0 / na as f64, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn zero_sized_clip_spaces_rejected() {
        assert!(new_agent(0, 2, AgentConfig::default()).is_err());
        assert!(new_agent(2, 0, AgentConfig::default()).is_err());
    }

    #[test]
    fn transition_probs_match_row_ratios() {
        let mut agent = new_agent(1, 2, AgentConfig::new(0.0).unwrap()).unwrap();
        agent
            .update(Some((ClipId::world(0), ClipId::action(0))), 1.0)
            .unwrap();
        let probs = agent.transition_probs(ClipId::world(0)).unwrap();
        assert_abs_diff_eq!(probs[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(probs[1], 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn action_clip_as_source_is_rejected() {
        let agent = new_agent(2, 2, AgentConfig::default()).unwrap();
        assert!(matches!(
            agent.transition_probs(ClipId::action(0)),
            Err(PsError::InvalidClip(_))
        ));
        assert!(matches!(
            agent.transition_probs(ClipId::world(5)),
            Err(PsError::InvalidClip(_))
        ));
    }

    #[test]
    fn update_examples() {
        // Non-traversed edge at the fixed point stays put.
        let mut agent = new_agent(1, 2, AgentConfig::new(0.3).unwrap()).unwrap();
        agent.update(None, 0.0).unwrap();
        assert_abs_diff_eq!(agent.h().get(0, 0), 1.0, epsilon = 1e-15);

        // h=5, gamma=0.5, non-traversed -> 3.
        let mut agent = new_agent(1, 1, AgentConfig::new(0.0).unwrap()).unwrap();
        agent
            .update(Some((ClipId::world(0), ClipId::action(0))), 4.0)
            .unwrap();
        assert_abs_diff_eq!(agent.h().get(0, 0), 5.0, epsilon = 1e-15);
        let mut decayed = Agent {
            config: AgentConfig::new(0.5).unwrap(),
            ..agent.clone()
        };
        decayed.update(None, 0.0).unwrap();
        assert_abs_diff_eq!(decayed.h().get(0, 0), 3.0, epsilon = 1e-15);

        // h=1, gamma=0, traversed with lambda=1 -> 2.
        let mut agent = new_agent(1, 2, AgentConfig::new(0.0).unwrap()).unwrap();
        agent
            .update(Some((ClipId::world(0), ClipId::action(1))), 1.0)
            .unwrap();
        assert_abs_diff_eq!(agent.h().get(0, 1), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn negative_reward_rejected() {
        let mut agent = new_agent(1, 2, AgentConfig::default()).unwrap();
        assert!(agent.update(None, -0.5).is_err());
    }

    #[test]
    fn inverse_cdf_convention() {
        // Uniform row: a draw below 0.5 must pick action 0.
        let agent = new_agent(1, 2, AgentConfig::default()).unwrap();
        let mut seen0 = false;
        let mut seen1 = false;
        for stream in 0..64 {
            let mut probe = RngStream::new(7, stream);
            let u = probe.uniform();
            let mut rng = RngStream::new(7, stream);
            let a = agent.sample_action(ClipId::world(0), &mut rng).unwrap();
            assert_eq!(a.index, usize::from(u >= 0.5));
            seen0 |= a.index == 0;
            seen1 |= a.index == 1;
        }
        assert!(seen0 && seen1);
    }

    #[test]
    fn saturated_row_samples_rewarded_action() {
        let mut agent = new_agent(1, 2, AgentConfig::new(0.0).unwrap()).unwrap();
        for _ in 0..10_000 {
            agent
                .update(Some((ClipId::world(0), ClipId::action(1))), 1.0)
                .unwrap();
        }
        let mut rng = RngStream::new(3, 0);
        let hits = (0..1000)
            .filter(|_| {
                agent
                    .sample_action(ClipId::world(0), &mut rng)
                    .unwrap()
                    .index
                    == 1
            })
            .count();
        assert!(hits >= 998, "p -> 1 row should almost always pick the rewarded action, got {hits}/1000");
    }

    #[test]
    fn rng_streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = {
            let mut rng = RngStream::new(99, 4);
            (0..32).map(|_| rng.uniform()).collect()
        };
        let b: Vec<f64> = {
            let mut rng = RngStream::new(99, 4);
            (0..32).map(|_| rng.uniform()).collect()
        };
        let c: Vec<f64> = {
            let mut rng = RngStream::new(99, 5);
            (0..32).map(|_| rng.uniform()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn deterministic_action_sequences() {
        let agent = new_agent(2, 2, AgentConfig::default()).unwrap();
        let run = |seed, stream| -> Vec<usize> {
            let mut rng = RngStream::new(seed, stream);
            (0..50)
                .map(|i| {
                    agent
                        .sample_action(ClipId::world(i % 2), &mut rng)
                        .unwrap()
                        .index
                })
                .collect()
        };
        assert_eq!(run(11, 0), run(11, 0));
    }

    #[test]
    fn single_rewarded_edge_converges_to_fixed_point() {
        // Constant reward lambda on one edge: h -> lambda/gamma + 1.
        let gamma = 0.1;
        let mut agent = new_agent(1, 2, AgentConfig::new(gamma).unwrap()).unwrap();
        for _ in 0..400 {
            agent
                .update(Some((ClipId::world(0), ClipId::action(0))), 1.0)
                .unwrap();
        }
        let expect = 1.0 / gamma + 1.0;
        assert!((agent.h().get(0, 0) - expect).abs() < 1e-6);
        let probs = agent.transition_probs(ClipId::world(0)).unwrap();
        assert_abs_diff_eq!(probs[0], 11.0 / 12.0, epsilon = 1e-9);
        assert_abs_diff_eq!(probs[1], 1.0 / 12.0, epsilon = 1e-9);
    }

    #[test]
    fn identical_seeds_give_bit_identical_trajectories() {
        let simulate = |seed| -> Vec<f64> {
            let mut agent = new_agent(2, 2, AgentConfig::new(0.2).unwrap()).unwrap();
            let mut rng = RngStream::new(seed, 0);
            let mut trace = Vec::new();
            for t in 0..200 {
                let s = ClipId::world(t % 2);
                let a = agent.sample_action(s, &mut rng).unwrap();
                let reward = if a.index == t % 2 { 1.0 } else { 0.0 };
                agent.update(Some((s, a)), reward).unwrap();
                trace.extend((0..2).flat_map(|p| (0..2).map(move |q| (p, q))).map(|(p, q)| agent.h().get(p, q)));
            }
            trace
        };
        let x = simulate(123);
        let y = simulate(123);
        assert_eq!(x, y); // bit-identical, not just approximately equal
    }

    proptest! {
        #[test]
        fn rows_stay_normalized_and_bounded(
            gamma in 0.0f64..=1.0,
            rewards in proptest::collection::vec((0usize..3, 0usize..2, 0.0f64..5.0), 1..200),
        ) {
            let mut agent = new_agent(3, 2, AgentConfig::new(gamma).unwrap()).unwrap();
            for (p, a, lambda) in rewards {
                agent.update(Some((ClipId::world(p), ClipId::action(a))), lambda).unwrap();
                for row in 0..3 {
                    let probs = agent.transition_probs(ClipId::world(row)).unwrap();
                    let sum: f64 = probs.iter().sum();
                    prop_assert!((sum - 1.0).abs() < 1e-12);
                    for q in 0..2 {
                        prop_assert!(agent.h().get(row, q) >= 1.0 - 1e-12);
                    }
                }
            }
        }
    }
}
