use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree law: {0}")]
    InvalidLaw(String),

    #[error("in/out degree balance violated: in-mean {in_mean}, out-mean {out_mean}")]
    BalanceViolation { in_mean: f64, out_mean: f64 },

    #[error("non-finite parameter `{name}` = {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("probability out of range: {0}")]
    InvalidProbability(f64),

    #[error("degree sequence stub totals differ: {in_total} in-stubs vs {out_total} out-stubs")]
    UnbalancedSequence { in_total: u64, out_total: u64 },

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("rescaled time {tau} outside [0, {lambda})")]
    TauOutOfRange { tau: f64, lambda: f64 },

    #[error("root at y = {y_star} is tangential; limit formula does not apply (alpha = {alpha}, omega = {omega})")]
    TangentialRoot { alpha: f64, omega: u32, y_star: f64 },

    #[error("counter identity `{identity}` violated at step {step}: lhs {lhs}, rhs {rhs}")]
    CounterIdentity {
        identity: &'static str,
        step: u64,
        lhs: i64,
        rhs: i64,
    },

    #[error("replay matching does not fit the cascade state: {0}")]
    MatchingMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("replication {rep} of cell (alpha = {alpha}, omega = {omega}) failed: {source}")]
    Replication {
        alpha: f64,
        omega: u32,
        rep: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
