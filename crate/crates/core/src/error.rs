use thiserror::Error;

use crate::params::Channel;
use crate::single::SinglePhotonSolution;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The single-photon denominator vanishes. This only happens at an exact
    /// decoupling point probed on resonance; the amplitudes are then defined
    /// by their limit, which is carried along.
    #[error("degenerate channel at k = {k}: |D(k)| = {residual:e}")]
    DegenerateChannel {
        k: f64,
        residual: f64,
        limit: Box<SinglePhotonSolution>,
    },

    #[error("singular two-photon Green matrix at E = {energy}; perturb the pair energy")]
    SingularGreen { energy: f64 },

    #[error("bound-state denominator collision at E = {energy}: |{which}| = {magnitude:e}")]
    DenominatorCollision {
        energy: f64,
        which: &'static str,
        magnitude: f64,
    },

    #[error("frequency {omega} lies on a pole of the pair-production amplitude")]
    PoleOnGrid { omega: f64 },

    #[error("{channel} channel is dark: single-photon product {product:e} below threshold")]
    DarkChannel { channel: Channel, product: f64 },
}
