//! Projective-simulation laboratory.
//!
//! Deterministic, seedable simulations of the invasion game played by
//! projective-simulation agents: fully observable baselines, a partially
//! observable variant with an interpreter agent and observability parameter
//! alpha, forgetting-factor asymptotics in closed form, and the two-agent
//! blocking/teaching game built on top of them.

pub mod agent;
pub mod analytics;
pub mod ensemble;
pub mod error;
pub mod game;
pub mod invasion;
pub mod observability;
pub mod oracle;
pub mod runner;

pub use agent::{new_agent, Agent, AgentConfig, ClipId, ClipKind, HMatrix, RngStream};
pub use error::{PsError, Result};
