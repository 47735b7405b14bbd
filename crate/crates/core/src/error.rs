use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,
    #[error("observation {index}: {reason}")]
    InvalidObservation { index: usize, reason: String },
    #[error("sample has failure/censoring ties; identities require a tie-free sample")]
    TiePresent,
    #[error("zero censoring-survival denominator at observation {index}")]
    ZeroDenominator { index: usize },
    #[error("function depends on covariates; a time-only function is required")]
    DependsOnCovariates,
    #[error("no uncensored observations")]
    NoFailures,
    #[error("|f| = {value} exceeds declared bound {bound}")]
    BoundViolation { value: f64, bound: f64 },
    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),
    #[error("missing input: {0}")]
    MissingInput(&'static str),
    #[error("normalizer {0} must be positive")]
    NonpositiveNormalizer(&'static str),
    #[error("n = {n} is below the minimum {min}")]
    TooFewSamples { n: usize, min: usize },
    #[error("value {value} is outside the domain: {reason}")]
    OutOfDomain { value: f64, reason: &'static str },
    #[error("confidence {delta} is unattainable: additive terms already sum to {floor}")]
    Unattainable { delta: f64, floor: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("scenario has no response model")]
    NoResponseModel,
    #[error("observation {index} carries no response")]
    MissingResponse { index: usize },
    #[error("empty net")]
    EmptyNet,
    #[error("class does not support exact nets")]
    UnsupportedClass,
    #[error("invalid loss: {0}")]
    InvalidLoss(String),
}

impl Error {
    /// Numeric failures (as opposed to malformed inputs).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::ZeroDenominator { .. }
                | Error::NonpositiveNormalizer(_)
                | Error::Unattainable { .. }
                | Error::NoFailures
        )
    }
}
