use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("probability out of range: {0}")]
    ProbabilityOutOfRange(f64),

    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    #[error("amplitude magnitude out of range: {0}")]
    MagnitudeOutOfRange(f64),

    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(String),

    #[error("variable `{0}` must have at least two outcomes")]
    TooFewOutcomes(String),

    #[error("variable `{variable}` repeats outcome label `{outcome}`")]
    DuplicateOutcome { variable: String, outcome: String },

    #[error("unknown variable {0}")]
    UnknownVariable(String),

    #[error("outcome {outcome} is not valid for variable `{variable}`")]
    InvalidOutcome { variable: String, outcome: String },

    #[error("variable `{0}` has no conditional amplitude table")]
    MissingCpt(String),

    #[error("variable `{0}` already has a conditional amplitude table")]
    DuplicateCpt(String),

    #[error("table for `{variable}` has wrong shape: {detail}")]
    CptShape { variable: String, detail: String },

    #[error("table for `{variable}` is not normalized at parent row {row}: sum of squared magnitudes = {sum}")]
    NotNormalized { variable: String, row: usize, sum: f64 },

    #[error("parent relation contains a cycle through `{0}`")]
    Cycle(String),

    #[error("assignment does not cover variable `{0}`")]
    MissingAssignment(String),

    #[error("variable `{0}` is assigned more than once")]
    DuplicateAssignment(String),

    #[error("query variable `{0}` also appears in the evidence")]
    EvidenceOnQuery(String),

    #[error("expected {expected} phases (one per unobserved configuration), got {got}")]
    PhaseCount { expected: usize, got: usize },

    #[error("degenerate query: every outcome of `{0}` has zero unnormalized score")]
    DegenerateQuery(String),

    #[error("network too large to enumerate: {0:.1} binary-equivalent variables (limit 20)")]
    TooLarge(f64),

    #[error("key mismatch: {0}")]
    KeyMismatch(String),

    #[error("negative probability {0}")]
    NegativeProbability(f64),

    #[error("invalid decision problem: {0}")]
    InvalidProblem(String),

    #[error("chance parent `{0}` must be binary for the interference-adjusted utility")]
    NonBinaryChanceParent(String),

    #[error("phase fitting needs exactly two unobserved configurations, found {0}")]
    NotSingleInterferencePair(usize),

    #[error("no phase reproduces the target; attainable range is [{min}, {max}]")]
    NoSolution { min: f64, max: f64 },

    #[error("invalid step count {0} (need at least 2)")]
    InvalidSteps(usize),
}
