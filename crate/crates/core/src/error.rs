use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lambda must satisfy 0 < lambda < 1 (got {0})")]
    LambdaOutOfRange(f64),
    #[error("mu must be positive (got {0})")]
    MuOutOfRange(f64),
    #[error("delta must exceed 1-lambda = {lower} (got {delta})")]
    DeltaTooSmall { delta: f64, lower: f64 },
    #[error("delta must be below d(lambda, mu) = {upper} (got {delta})")]
    DeltaTooLarge { delta: f64, upper: f64 },
    #[error(
        "delta = d(lambda, mu) = {0} with lambda*mu > 1 is the bijective boundary case, which is not supported"
    )]
    BijectiveBoundary(f64),
    #[error("parameter {name} is not finite")]
    NotFinite { name: &'static str },

    #[error("invalid rotation number {p}/{q}: need coprime 0 < p < q")]
    InvalidRational { p: u64, q: u64 },
    #[error("Farey interval {a} < {b} is not ordered")]
    UnorderedFarey { a: String, b: String },
    #[error("integer overflow while forming a mediant")]
    Overflow,

    #[error("series diverges: lambda * mu^rho = {0} >= 1")]
    ConvergenceViolated(f64),
    #[error("rotation number {rho} must lie in (0, {r_bound})")]
    RhoOutOfRange { rho: f64, r_bound: f64 },
    #[error("tail bound {tail:e} still above {abs_tol:e} after {max_terms} terms")]
    MaxTermsExhausted {
        max_terms: usize,
        tail: f64,
        abs_tol: f64,
    },
    #[error("invalid series tolerance: {0}")]
    InvalidTolerance(String),

    #[error("point {x} outside the domain {domain}")]
    OutsideDomain { x: f64, domain: &'static str },
    #[error("point {x} lies in the gap [{gap_left}, {gap_right}) outside the image of f")]
    OutsideImage { x: f64, gap_left: f64, gap_right: f64 },
    #[error("itinerary is inconsistent with the orbit: {0}")]
    InconsistentItinerary(String),

    #[error("hypothesis not satisfied: {0}")]
    HypothesisViolated(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("no periodic cycle: {0}")]
    NoCycle(String),
    #[error("orbit did not approach the limit set within {steps} steps (final distance {distance:e})")]
    NoApproach { steps: usize, distance: f64 },
}

impl Error {
    /// Errors caused by bad user input rather than a failed computation.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::LambdaOutOfRange(_)
                | Error::MuOutOfRange(_)
                | Error::DeltaTooSmall { .. }
                | Error::DeltaTooLarge { .. }
                | Error::BijectiveBoundary(_)
                | Error::NotFinite { .. }
                | Error::InvalidRational { .. }
                | Error::RhoOutOfRange { .. }
                | Error::ConvergenceViolated(_)
                | Error::InvalidTolerance(_)
                | Error::OutsideDomain { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
