use thiserror::Error;

/// Errors reported by group operations, solvers and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Two values that must live on the same group/algebra did not.
    #[error("kind mismatch: expected {expected}, got {got}")]
    KindMismatch { expected: String, got: String },

    /// An operation is not defined for the given group kind.
    #[error("operation `{op}` is not supported for kind {kind}")]
    UnsupportedKind { op: &'static str, kind: String },

    /// The principal matrix logarithm does not exist or did not converge.
    #[error("logarithm undefined: {0}")]
    LogDomain(String),

    /// An algebra element is outside the injectivity/convergence radius of a
    /// trivialization map (`dexp`-type series or closed form).
    #[error("`{op}` out of range: |xi| = {norm:.3e} exceeds radius {radius:.3e}")]
    TrivializationDomain {
        op: &'static str,
        norm: f64,
        radius: f64,
    },

    /// A matrix that must be invertible was numerically singular.
    #[error("singular matrix in `{0}`")]
    Singular(&'static str),

    /// An iteration (fixed point, square-root chain, series) failed to reach
    /// its tolerance within the allowed number of steps.
    #[error("`{op}` did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        op: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// Sphere points outside the domain of the inverse retraction.
    #[error("inverse retraction undefined: base and point are not in the same open hemisphere (cos = {cos:.3e})")]
    OutsideCone { cos: f64 },

    /// A quantity that must be bounded away from zero degenerated.
    #[error("degenerate input in `{op}`: {detail}")]
    Degenerate { op: &'static str, detail: String },

    /// Invalid run configuration (step sizes, node counts, parameter shapes).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Malformed textual input (CLI value strings).
    #[error("parse error: {0}")]
    Parse(String),

    /// A trajectory step failed; carries the 1-based step index so long
    /// runs can be diagnosed from the error alone.
    #[error("step {step}: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    /// Output I/O failure in the harness.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn kind_mismatch(expected: impl ToString, got: impl ToString) -> Self {
        Error::KindMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
