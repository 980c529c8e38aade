//! Closed-form one- and two-photon scattering for two giant two-level atoms
//! coupled to a one-dimensional waveguide.
//!
//! Three coupling layouts are supported ([`Topology::Separate`],
//! [`Topology::Braided`], [`Topology::Nested`]). All frequencies and rates are
//! measured in units of the single-point decay rate Γ and the group velocity
//! is set to one, so separations are in units of 1/Γ.
//!
//! The crate is organised bottom-up:
//!
//! - [`params`]: topology, system parameters, photon pairs.
//! - [`collective`]: the collective shift η and rate Γ̃, system poles, parity.
//! - [`single`]: single-photon amplitudes and a transfer-matrix oracle.
//! - [`two_photon`]: Green elements, bound-state weights, two-photon amplitudes.
//! - [`observables`]: incoherent spectra, inelastic flux, χ, g², loss.
//! - [`quad`]: adaptive Gauss–Kronrod integration.
//!
//! ```
//! use giantqed::{collective, SystemParams, Topology};
//!
//! let params = SystemParams::from_pi_units(100.0, 0.5, 0.4).unwrap();
//! let poles = collective::system_poles(Topology::Separate, &params);
//! assert!((poles.lambda1.im + 0.049).abs() < 1e-3);
//! ```

pub mod collective;
pub mod error;
pub mod observables;
pub mod params;
pub mod quad;
pub mod scalar;
pub mod single;
pub mod two_photon;

pub use error::{Error, Result};
pub use params::{Channel, PhotonPair, SystemParams, Topology};

/// Double-precision complex number used throughout the public API.
pub type C64 = num_complex::Complex<f64>;
