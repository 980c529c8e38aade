//! Weak-drive master-equation oracle for two giant atoms.
//!
//! The two atoms are treated as a driven two-qubit open system with
//! waveguide-mediated exchange and collective decay. Observables are read
//! off the output field b_out = β + ζ of each channel: coherent amplitudes
//! from β, incoherent spectra from the regression of ζ, and the
//! differential correlation χ from steady-state moments of ζ.
//!
//! ```
//! use giantqed::{SystemParams, Topology};
//! use giantqed_oracle::{build_model, steady_state, coherent_amplitudes};
//!
//! let p = SystemParams::from_pi_units(100.0, 0.25, 0.85).unwrap();
//! let m = build_model(Topology::Braided, &p, 1e-3, 100.0).unwrap();
//! let ss = steady_state(&m).unwrap();
//! let (t, r) = coherent_amplitudes(&m, &ss);
//! assert!((t.norm_sqr() + r.norm_sqr() - 1.0).abs() < 1e-4);
//! ```

pub mod chi;
pub mod eigenbasis;
pub mod error;
pub mod liouvillian;
pub mod model;
pub mod spectrum;
pub mod steady;

pub use chi::{chi_numeric, ChiDecomposition};
pub use eigenbasis::{
    eigenbasis_spectrum, nested_eigenmodes, symmetric_modes, CollectiveMode, NestedModes,
};
pub use error::{OracleError, Result};
pub use liouvillian::liouvillian;
pub use model::{build_model, LindbladModel, OutputCoefficients};
pub use spectrum::{
    flux_balance, one_excitation_modes, regression_spectrum, regression_spectrum_with, FluxBalance,
};
pub use steady::{
    coherent_amplitudes, output_mean, steady_state, steady_state_from_vacuum, SteadyState,
};

pub type C64 = num_complex::Complex<f64>;

/// Drive strength used by default, α² = 0.01Γ.
pub const DEFAULT_ALPHA2: f64 = 0.01;
