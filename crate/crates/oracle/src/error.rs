use thiserror::Error;

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Core(#[from] giantqed::Error),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// The Liouvillian has more than one stationary state, e.g. an undriven
    /// decoherence-free point. Perturb the drive or the phases.
    #[error("steady state is not unique: null space dimension {nullity}")]
    NonUniqueSteadyState { nullity: usize },

    #[error("singular resolvent at omega = {omega}")]
    SingularResolvent { omega: f64 },
}
