//! Collective-mode pictures of the two-atom master equation.
//!
//! For separate and braided atoms both atoms have the same shift and decay,
//! so the symmetric and antisymmetric combinations σ_{S,A} = (σ₁ ± σ₂)/√2
//! diagonalise both the exchange and the dissipator. Treating each as an
//! independent driven two-level system gives closed forms for its moments
//! and a 3×3 regression spectrum. That picture ignores the shared doubly
//! excited state, so it holds to leading order in the drive only.

use std::f64::consts::FRAC_1_SQRT_2;

use giantqed::observables::validate_grid;
use giantqed::Topology;
use nalgebra::{Matrix3, Vector3};

use crate::error::{OracleError, Result};
use crate::model::{sigma1, sigma2, LindbladModel, Op};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveMode {
    /// Detuning from the drive, including the Lamb shift and exchange.
    pub delta: f64,
    pub gamma: f64,
    pub omega: C64,
}

impl CollectiveMode {
    fn denominator(&self) -> f64 {
        self.delta * self.delta + self.gamma * self.gamma / 4.0 + self.omega.norm_sqr() / 2.0
    }

    pub fn sigma_minus(&self) -> C64 {
        self.omega / 2.0 * C64::new(-self.gamma / 2.0, self.delta) / self.denominator()
    }

    pub fn sigma_ee(&self) -> f64 {
        self.omega.norm_sqr() / 4.0 / self.denominator()
    }

    /// Evolution matrix of (⟨σ⁺⟩, ⟨σ⁻⟩, ⟨σ^ee⟩).
    pub fn m_matrix(&self) -> Matrix3<C64> {
        let (d, g, o) = (self.delta, self.gamma, self.omega);
        Matrix3::new(
            C64::new(-g / 2.0, d),
            C64::from(0.0),
            o.conj(),
            C64::from(0.0),
            C64::new(-g / 2.0, -d),
            o,
            -o / 2.0,
            -o.conj() / 2.0,
            C64::from(-g),
        )
    }

    /// Re{[1,0,0](iν − M)⁻¹[⟨σ^ee⟩,0,0]ᵀ} at detuning ν from the drive.
    pub fn spectrum(&self, nu: f64) -> Option<f64> {
        let a = Matrix3::identity() * C64::new(0.0, nu) - self.m_matrix();
        let x = a.lu().solve(&Vector3::new(
            C64::from(self.sigma_ee()),
            C64::from(0.0),
            C64::from(0.0),
        ))?;
        Some(x[0].re)
    }
}

/// (S, A) modes for separate and braided atoms; `None` when the two atoms
/// are not equivalent (nested).
pub fn symmetric_modes(model: &LindbladModel) -> Option<[CollectiveMode; 2]> {
    if model.topology == Topology::Nested {
        return None;
    }
    let det = model.detuning();
    let mode = |s: f64| CollectiveMode {
        delta: det + model.delta_l1 + s * model.g12,
        gamma: model.gamma1 + s * model.gamma12,
        omega: (model.omega1 + model.omega2 * s) * FRAC_1_SQRT_2,
    };
    Some([mode(1.0), mode(-1.0)])
}

/// σ_S⁻ and σ_A⁻ as two-qubit operators.
pub fn symmetric_operators() -> [Op; 2] {
    let (s1, s2) = (sigma1(), sigma2());
    let r = C64::from(FRAC_1_SQRT_2);
    [(s1 + s2) * r, (s1 - s2) * r]
}

/// Σ_u w_u S_u(ω) with the interference weights of each topology.
pub fn eigenbasis_spectrum(model: &LindbladModel, omega: &[f64]) -> Result<Vec<f64>> {
    validate_grid(omega, 1)?;
    let modes = symmetric_modes(model).ok_or_else(|| {
        OracleError::InvalidModel("eigenbasis spectrum needs separate or braided atoms".into())
    })?;
    let (g, p1, p2) = (model.params.gamma, model.params.phi1, model.params.phi2);
    let weights = match model.topology {
        Topology::Separate => {
            let w = 4.0 * g * (1.0 + p1.cos());
            [w * (1.0 + (p1 + p2).cos()), w * (1.0 - (p1 + p2).cos())]
        }
        _ => {
            let w = 4.0 * g * (1.0 + (p1 + p2).cos());
            [w * (1.0 + p1.cos()), w * (1.0 - p1.cos())]
        }
    };
    omega
        .iter()
        .map(|&w| {
            let nu = w - model.drive;
            let mut s = 0.0;
            for (mode, weight) in modes.iter().zip(weights) {
                // A dark mode can sit exactly on the drive; it contributes nothing.
                if weight.abs() <= 1e-24 * g {
                    continue;
                }
                s += weight
                    * mode
                        .spectrum(nu)
                        .ok_or(OracleError::SingularResolvent { omega: w })?;
            }
            Ok(s)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestedModes {
    pub xi: f64,
    pub delta_alpha: f64,
    pub delta_beta: f64,
    pub gamma_alpha: f64,
    pub gamma_beta: f64,
    pub gamma_alpha_beta: f64,
    pub omega_alpha: C64,
    pub omega_beta: C64,
}

/// Rotation σ_α = sin ξ σ₁ + cos ξ σ₂, σ_β = −cos ξ σ₁ + sin ξ σ₂ that
/// diagonalises the exchange block, with α the upper mode.
///
/// ξ is computed as ½·atan2(2g₁₂, Δ₂ − Δ₁), the same angle as
/// arctan[2g₁₂/(Δ₂ − Δ₁ + √((Δ₁ − Δ₂)² + 4g₁₂²))] but also defined when that
/// ratio is 0/0 (g₁₂ = 0, Δ₁ > Δ₂, where ξ = π/2).
pub fn nested_eigenmodes(model: &LindbladModel) -> NestedModes {
    let (d1, d2, g) = (model.delta_l1, model.delta_l2, model.g12);
    let xi = 0.5 * (2.0 * g).atan2(d2 - d1);
    let root = ((d1 - d2).powi(2) + 4.0 * g * g).sqrt();
    let (s, c) = xi.sin_cos();
    let (g1, g2, g12) = (model.gamma1, model.gamma2, model.gamma12);
    NestedModes {
        xi,
        delta_alpha: 0.5 * (d1 + d2 + root),
        delta_beta: 0.5 * (d1 + d2 - root),
        gamma_alpha: g1 * s * s + g2 * c * c + g12 * (2.0 * xi).sin(),
        gamma_beta: g1 * c * c + g2 * s * s - g12 * (2.0 * xi).sin(),
        gamma_alpha_beta: -(g1 - g2) * s * c - g12 * (2.0 * xi).cos(),
        omega_alpha: model.omega1 * s + model.omega2 * c,
        omega_beta: -model.omega1 * c + model.omega2 * s,
    }
}
