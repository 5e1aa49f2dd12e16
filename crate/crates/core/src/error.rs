use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Denominator jet has a (numerically) vanishing constant term.
    #[error("singular division at x = {x0}: denominator value {value:e}")]
    SingularDivision { x0: f64, value: f64 },

    #[error("domain error in {op} at x = {x0}: argument {value}")]
    Domain { op: &'static str, x0: f64, value: f64 },

    #[error("jet mismatch: ({x0_a}, order {order_a}) vs ({x0_b}, order {order_b})")]
    JetMismatch {
        x0_a: f64,
        order_a: usize,
        x0_b: f64,
        order_b: usize,
    },

    #[error("jet of order {have} cannot supply order {need}")]
    OrderExhausted { have: usize, need: usize },

    #[error("level {level} is not bound: {reason}")]
    UnboundLevel { level: usize, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("family `{0}` has no shape-invariance flow")]
    MissingFlow(String),

    #[error("degenerate comparand: max |g| = {0:e}")]
    DegenerateComparand(f64),

    #[error("grid is empty after exclusions")]
    EmptyGrid,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{count} singular point(s), first at x = {first}")]
    Singularities { count: usize, first: f64, points: Vec<f64> },
}

impl Error {
    /// True for errors caused by a vanishing denominator somewhere on a grid.
    pub fn is_singularity(&self) -> bool {
        matches!(self, Error::SingularDivision { .. } | Error::Singularities { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
