//! The N-symbol invasion game.
//!
//! An attacker shows one of N symbols uniformly at random; the defender must
//! answer with the matching blocking action to earn the reward. The rule set
//! optionally swaps to a second symbol-to-action map at a fixed step, which
//! models a changing environment.

use crate::agent::{Agent, ClipId, RngStream};
use crate::error::{PsError, Result};

fn check_bijection(map: &[usize], n: usize) -> Result<()> {
    if map.len() != n {
        return Err(PsError::InvalidDimension(format!(
            "correct-action map has {} entries for {} symbols",
            map.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &a in map {
        if a >= n || seen[a] {
            return Err(PsError::InvalidParameter(
                "correct-action map must be a bijection between symbols and actions".into(),
            ));
        }
        seen[a] = true;
    }
    Ok(())
}

/// Rules of one invasion game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvasionRules {
    num_symbols: usize,
    correct_action: Vec<usize>,
    switch_time: Option<u64>,
    switched_map: Option<Vec<usize>>,
}

impl InvasionRules {
    /// Standard game: symbol i is blocked by action i.
    pub fn new(num_symbols: usize) -> Result<Self> {
        InvasionRules::with_map((0..num_symbols).collect())
    }

    pub fn with_map(correct_action: Vec<usize>) -> Result<Self> {
        let n = correct_action.len();
        if n < 2 {
            return Err(PsError::InvalidDimension(format!(
                "invasion game needs at least 2 symbols, got {n}"
            )));
        }
        check_bijection(&correct_action, n)?;
        Ok(InvasionRules {
            num_symbols: n,
            correct_action,
            switch_time: None,
            switched_map: None,
        })
    }

    /// Swap to `switched_map` from step `switch_time` on.
    pub fn with_switch(mut self, switch_time: u64, switched_map: Vec<usize>) -> Result<Self> {
        check_bijection(&switched_map, self.num_symbols)?;
        self.switch_time = Some(switch_time);
        self.switched_map = Some(switched_map);
        Ok(self)
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn switch_time(&self) -> Option<u64> {
        self.switch_time
    }

    /// The symbol-to-action map active at step t.
    pub fn active_map(&self, t: u64) -> &[usize] {
        match (self.switch_time, &self.switched_map) {
            (Some(ts), Some(map)) if t >= ts => map,
            _ => &self.correct_action,
        }
    }

    pub fn correct_action_at(&self, t: u64, world_symbol: usize) -> usize {
        self.active_map(t)[world_symbol]
    }

    /// Reward (in units of one lambda) for taking `action` on `world_symbol`
    /// at step t: 1 if the action matches the active map, else 0.
    pub fn reward_for(&self, t: u64, world_symbol: usize, action: usize) -> f64 {
        if self.correct_action_at(t, world_symbol) == action {
            1.0
        } else {
            0.0
        }
    }
}

/// Draw the attacker's symbol, uniform over the N possibilities.
pub fn attacker_draw(rules: &InvasionRules, rng: &mut RngStream) -> usize {
    rng.pick(rules.num_symbols)
}

/// One logged round of play.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub t: u64,
    pub world_symbol: usize,
    pub belief_symbol: Option<usize>,
    pub defender_percept: ClipId,
    pub defender_action: usize,
    /// reward_unit exactly when the defender's action blocks the true world
    /// symbol under the map active at t, else 0.
    pub defender_reward: f64,
    pub interpreter_reward: Option<f64>,
}

impl RoundRecord {
    pub fn blocked(&self) -> bool {
        self.defender_reward > 0.0
    }
}

fn check_fo_shape(agent: &Agent, rules: &InvasionRules) -> Result<()> {
    if agent.num_world_percepts() != rules.num_symbols
        || agent.num_actions() != rules.num_symbols
    {
        return Err(PsError::InvalidDimension(format!(
            "fully observable run needs an agent with {n} world percepts and {n} actions, got {}x{}",
            agent.num_world_percepts(),
            agent.num_actions(),
            n = rules.num_symbols
        )));
    }
    Ok(())
}

/// One fully observable round: draw a symbol, sample the block, reward, adapt.
pub fn step_fo(
    agent: &mut Agent,
    rules: &InvasionRules,
    t: u64,
    rng: &mut RngStream,
) -> Result<RoundRecord> {
    check_fo_shape(agent, rules)?;
    let s = attacker_draw(rules, rng);
    let percept = ClipId::world(s);
    let action = agent.sample_action(percept, rng)?;
    let reward = rules.reward_for(t, s, action.index) * agent.config().reward_unit;
    agent.update(Some((percept, action)), reward)?;
    Ok(RoundRecord {
        t,
        world_symbol: s,
        belief_symbol: None,
        defender_percept: percept,
        defender_action: action.index,
        defender_reward: reward,
        interpreter_reward: None,
    })
}

/// Play `t_max` fully observable rounds, logging every round.
pub fn run_fo(
    agent: &mut Agent,
    rules: &InvasionRules,
    t_max: u64,
    rng: &mut RngStream,
) -> Result<Vec<RoundRecord>> {
    check_fo_shape(agent, rules)?;
    let mut records = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        records.push(step_fo(agent, rules, t, rng)?);
    }
    Ok(records)
}
