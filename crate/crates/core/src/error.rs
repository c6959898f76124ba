use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor argument violated its invariant.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A function was evaluated outside its domain.
    #[error("domain error in {function}: {argument} = {value}")]
    Domain {
        function: &'static str,
        argument: &'static str,
        value: f64,
    },

    /// Adaptive quadrature could not meet its tolerance.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best estimate {estimate:?}, error estimate {error_estimate:e})"
    )]
    NumericalFailure {
        estimate: Vec<f64>,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("integrand is not finite at x = {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error("divergent integral: {0}")]
    DivergentIntegral(&'static str),

    /// Survival probability left (0, 1]; the second-order expansion no longer holds.
    #[error("perturbative breakdown at tau = {tau}: survival = {survival}")]
    PerturbativeBreakdown { tau: f64, survival: f64 },

    #[error("need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("cannot write output: {0}")]
    Output(String),

    #[error("comparison error: {0}")]
    Comparison(String),

    /// A curve point failed; carries the offending measurement interval.
    #[error("evaluation failed at tau = {tau}: {source}")]
    AtPoint {
        tau: f64,
        #[source]
        source: Box<Error>,
    },
}
