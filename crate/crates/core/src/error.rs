use thiserror::Error;

/// Errors raised across the solver. Each variant corresponds to one failure
/// mode of a specific operation; the CLI maps them onto exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("state (n={n}, l={l}, D={dim}) is not bound (eps_tilde = {eps_tilde})")]
    NotBound {
        n: u32,
        l: u32,
        dim: u32,
        eps_tilde: f64,
    },

    #[error("quantum numbers out of range: {0}")]
    OutOfRange(String),

    #[error("no classically allowed region at E = {energy}")]
    NoClassicalRegion { energy: f64 },

    #[error("centrifugal coefficient vanishes (l = 0, D = 3); only one turning point")]
    CentrifugalFree,

    #[error("negative centrifugal coefficient (D = 2, l = 0) is outside the validated range")]
    OutsideValidity,

    #[error("adaptive quadrature did not converge: estimate {estimate}, error {error} after {intervals} intervals")]
    QuadratureFailure {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("root bracket failed: {0}")]
    NoRoot(String),

    #[error("hypergeometric lower parameter C = {0} is a non-positive integer")]
    InvalidC(f64),

    #[error("gamma function pole at {0}")]
    ParameterPole(f64),

    #[error("node count not stable under grid refinement")]
    GridTooCoarse,

    #[error("wavefunction too close to a node at r = {r} (|R| = {value})")]
    NodeProximity { r: f64, value: f64 },

    #[error("eigenvalue iteration did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("no bound state with index {index} in the discretized spectrum")]
    NoBoundState { index: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureFailure { .. }
                | Error::NoRoot(_)
                | Error::GridTooCoarse
                | Error::ConvergenceFailure(_)
                | Error::NoBoundState { .. }
        )
    }
}
