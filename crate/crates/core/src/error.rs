use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("agent index {agent} out of range for {n} agents")]
    AgentOutOfRange { agent: usize, n: usize },

    #[error("at least 2 agents are required, got {0}")]
    TooFewAgents(usize),

    #[error("episode log must contain at least one episode")]
    EmptyLog,

    #[error("sliding window of width {n} needs at least {n} episodes, got {episodes}")]
    TooFewEpisodes { episodes: usize, n: usize },

    #[error("episode {episode} outside the budget 1..={budget}")]
    EpisodeOutOfRange { episode: usize, budget: usize },

    #[error("agent {agent} has reward {reward} but did not reach the terminal")]
    RewardWithoutReach { agent: usize, reward: f64 },

    #[error("expected {expected} per-agent values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{0} has no AltRatio mapping")]
    UnsupportedAltRatio(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("unknown metric key `{0}`")]
    UnknownMetric(alloc::string::String),
}
