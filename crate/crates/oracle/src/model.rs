//! Two-qubit master-equation parameters for each topology, in the frame
//! rotating at the drive frequency.

use giantqed::{Channel, SystemParams, Topology};
use nalgebra::Matrix4;

use crate::error::{OracleError, Result};
use crate::C64;

pub type Op = Matrix4<C64>;

/// b_out = c0·α + c1·σ₁⁻ + c2·σ₂⁻.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputCoefficients {
    /// Drive feed-through per unit α.
    pub c0: C64,
    pub c1: C64,
    pub c2: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladModel {
    pub topology: Topology,
    pub params: SystemParams,
    pub alpha: f64,
    /// Drive frequency k.
    pub drive: f64,
    pub delta_l1: f64,
    pub delta_l2: f64,
    pub g12: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma12: f64,
    pub omega1: C64,
    pub omega2: C64,
    pub out_r: OutputCoefficients,
    pub out_t: OutputCoefficients,
}

fn cis(x: f64) -> C64 {
    C64::from_polar(1.0, x)
}

/// Per-topology coefficients. α only enters the drives and the transmitted
/// feed-through; `drive` only enters through the detuning ω₀ − k.
pub fn build_model(
    top: Topology,
    params: &SystemParams,
    alpha: f64,
    drive: f64,
) -> Result<LindbladModel> {
    params.validate()?;
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(OracleError::InvalidModel(format!(
            "alpha must be finite and >= 0, got {alpha}"
        )));
    }
    if !drive.is_finite() {
        return Err(OracleError::InvalidModel(
            "non-finite drive frequency".into(),
        ));
    }
    let g = params.gamma;
    let (p1, p2) = (params.phi1, params.phi2);
    let a = (2.0 * g).sqrt() * alpha;
    let s = (g / 2.0).sqrt();
    let one = C64::new(1.0, 0.0);
    let feed = cis(2.0 * p1 + p2);

    let (d1, d2, g12, g1, g2, g12c, o1, o2, r1, r2);
    match top {
        Topology::Separate => {
            d1 = g * p1.sin();
            d2 = d1;
            g1 = 2.0 * g * (1.0 + p1.cos());
            g2 = g1;
            g12 = g / 2.0 * (p2.sin() + 2.0 * (p1 + p2).sin() + (2.0 * p1 + p2).sin());
            g12c = g * (p2.cos() + 2.0 * (p1 + p2).cos() + (2.0 * p1 + p2).cos());
            o1 = a * (one + cis(p1));
            o2 = a * (cis(p1 + p2) + cis(2.0 * p1 + p2));
            let c = s * (one + cis(p1));
            r1 = c;
            r2 = c * cis(p1 + p2);
        }
        Topology::Braided => {
            d1 = g * (p1 + p2).sin();
            d2 = d1;
            g1 = 2.0 * g * (1.0 + (p1 + p2).cos());
            g2 = g1;
            g12 = g / 2.0 * (p2.sin() + 2.0 * p1.sin() + (2.0 * p1 + p2).sin());
            g12c = g * (p2.cos() + 2.0 * p1.cos() + (2.0 * p1 + p2).cos());
            o1 = a * (one + cis(p1 + p2));
            o2 = a * (cis(p1) + cis(2.0 * p1 + p2));
            let c = s * (one + cis(p1 + p2));
            r1 = c;
            r2 = c * cis(p1);
        }
        Topology::Nested => {
            d1 = g * (2.0 * p1 + p2).sin();
            d2 = g * p2.sin();
            g1 = 2.0 * g * (1.0 + (2.0 * p1 + p2).cos());
            g2 = 2.0 * g * (1.0 + p2.cos());
            g12 = g * (p1.sin() + (p1 + p2).sin());
            g12c = 2.0 * g * (p1.cos() + (p1 + p2).cos());
            o1 = a * (one + cis(2.0 * p1 + p2));
            o2 = a * (cis(p1) + cis(p1 + p2));
            r1 = s * (one + cis(2.0 * p1 + p2));
            r2 = s * cis(p1) * (one + cis(p2));
        }
    }
    // Transmission picks up the far-end atom weights in reverse order,
    // except for nested where both directions see the same pattern.
    let (t1, t2) = match top {
        Topology::Nested => (r1, r2),
        _ => (r2, r1),
    };
    let zero = C64::new(0.0, 0.0);
    Ok(LindbladModel {
        topology: top,
        params: *params,
        alpha,
        drive,
        delta_l1: d1,
        delta_l2: d2,
        g12,
        gamma1: g1,
        gamma2: g2,
        gamma12: g12c,
        omega1: o1,
        omega2: o2,
        out_r: OutputCoefficients {
            c0: zero,
            c1: r1,
            c2: r2,
        },
        out_t: OutputCoefficients {
            c0: feed,
            c1: t1,
            c2: t2,
        },
    })
}

/// σ⁻ on one qubit, basis |g⟩, |e⟩.
fn lowering2() -> nalgebra::Matrix2<C64> {
    let mut m = nalgebra::Matrix2::zeros();
    m[(0, 1)] = C64::new(1.0, 0.0);
    m
}

/// σ₁⁻ = σ⁻ ⊗ I in the basis |gg⟩, |ge⟩, |eg⟩, |ee⟩.
pub fn sigma1() -> Op {
    lowering2().kronecker(&nalgebra::Matrix2::identity())
}

/// σ₂⁻ = I ⊗ σ⁻.
pub fn sigma2() -> Op {
    nalgebra::Matrix2::<C64>::identity().kronecker(&lowering2())
}

impl LindbladModel {
    /// ω₀ − k, added to both detunings.
    pub fn detuning(&self) -> f64 {
        self.params.omega0 - self.drive
    }

    /// Global phase of b_out relative to the single-photon amplitudes.
    pub fn output_phase(&self) -> C64 {
        cis(2.0 * self.params.phi1 + self.params.phi2)
    }

    pub fn hamiltonian(&self) -> Op {
        let (s1, s2) = (sigma1(), sigma2());
        let (d1, d2) = (s1.adjoint(), s2.adjoint());
        let det = self.detuning();
        let half_i = C64::new(0.0, 0.5);
        (d1 * s1) * C64::from(det + self.delta_l1)
            + (d2 * s2) * C64::from(det + self.delta_l2)
            + (d1 * s2 + d2 * s1) * C64::from(self.g12)
            - (d1 * self.omega1 + d2 * self.omega2
                - s1 * self.omega1.conj()
                - s2 * self.omega2.conj())
                * half_i
    }

    pub fn coefficients(&self, channel: Channel) -> OutputCoefficients {
        match channel {
            Channel::Transmission => self.out_t,
            Channel::Reflection => self.out_r,
        }
    }

    pub fn output_operator(&self, channel: Channel) -> Op {
        let c = self.coefficients(channel);
        Op::identity() * (c.c0 * self.alpha) + sigma1() * c.c1 + sigma2() * c.c2
    }

    /// Dissipator positivity: Γ₁, Γ₂ ≥ 0 and |Γ₁₂| ≤ √(Γ₁Γ₂).
    pub fn validate(&self) -> Result<()> {
        const TOL: f64 = 1e-9;
        if self.gamma1 < -TOL || self.gamma2 < -TOL {
            return Err(OracleError::InvalidModel(format!(
                "negative decay rate: Gamma1 = {}, Gamma2 = {}",
                self.gamma1, self.gamma2
            )));
        }
        let bound = (self.gamma1.max(0.0) * self.gamma2.max(0.0)).sqrt();
        if self.gamma12.abs() > bound + TOL {
            return Err(OracleError::InvalidModel(format!(
                "|Gamma12| = {} exceeds sqrt(Gamma1 Gamma2) = {}",
                self.gamma12.abs(),
                bound
            )));
        }
        Ok(())
    }

    /// True when neither qubit is driven.
    pub fn undriven(&self) -> bool {
        self.omega1.norm().max(self.omega2.norm()) <= 1e-12
    }
}
