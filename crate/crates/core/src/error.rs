use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("player count {0} is outside the supported range {1}")]
    PlayerCount(usize, &'static str),

    #[error("configuration {value} does not fit {n_players} players")]
    ConfigurationOutOfRange { value: u64, n_players: usize },

    #[error("player {player} is not in 1..={n_players}")]
    PlayerOutOfRange { player: usize, n_players: usize },

    #[error("set size {das} is outside 1..={max}")]
    SetSize { das: usize, max: usize },

    #[error(
        "search over {candidates} candidates exceeds the limit of {limit}; \
         pass --allow-large or set HATGAME_ALLOW_LARGE=1 to override"
    )]
    ResourceGuard { candidates: u128, limit: u128 },

    #[error(
        "exhaustive search for {n_players} players exceeds the limit of {max}; \
         pass --allow-large or set HATGAME_ALLOW_LARGE=1 to override"
    )]
    PlayerGuard { n_players: usize, max: usize },

    #[error(
        "search produced more than {limit} sets; \
         pass --allow-large or set HATGAME_ALLOW_LARGE=1 to override"
    )]
    ResultGuard { limit: u64 },

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityRange(String),

    #[error("cannot parse '{input}': {reason}")]
    Parse { input: String, reason: String },

    #[error("signatures have different sizes ({left} vs {right})")]
    DasMismatch { left: usize, right: usize },

    #[error("signatures describe different player counts ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("branches of the closed form disagree at breakpoint {0}")]
    BreakpointMismatch(String),

    #[error("interval ({lo}, {hi}) is not a valid sub-interval of {within}")]
    Interval {
        lo: String,
        hi: String,
        within: &'static str,
    },

    #[error("matrix schema error at row {row}, column {column}: {reason}")]
    MatrixSchema {
        row: usize,
        column: usize,
        reason: String,
    },

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("set {0} is not adequate")]
    NotAdequate(String),

    #[error("too many star completions: 3^{stars} exceeds 3^{max}")]
    TooManyStars { stars: usize, max: usize },
}
