//! Two-photon bound state: Green elements, bound-state weights Z₁..Z₄ and the
//! same-direction two-photon amplitudes f_RR, f_LL.
//!
//! The bound-state term in the RR channel is
//! B(x) = Z₁ e^{(iη−Γ̃)x/2} + Z₂ e^{(iη+Γ̃)x/2}, and Z₃, Z₄ play the same role
//! for LL. The weights are normalised so that the two-photon amplitude reads
//! f = e^{±iE x_c}/(√2 π)·[P cos(Δ₁x) + B(x)] with P the single-photon product.

use num_complex::Complex;
use std::f64::consts::PI;

use crate::collective::{eta_g, gamma_tilde_g, Branch, Setup};
use crate::error::{Error, Result};
use crate::params::{Channel, PhotonPair, SystemParams, Topology};
use crate::scalar::{cis, imag_unit, norm, real, to_c64, Quad, Real};
use crate::single::{amplitudes_g, check_degenerate, scatter_single};
use crate::C64;

pub const SINGULAR_THRESHOLD: f64 = 1e-14;
/// Below this |η| (in Γ) the automatic precision mode switches to double-double.
pub const EXTENDED_ETA_THRESHOLD: f64 = 0.1;
/// Below this interference prefactor the bound state vanishes identically.
const DECOUPLED_THRESHOLD: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    Extended,
    /// Extended when |η| < 0.1Γ, double otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BoundOptions {
    pub branch: Branch,
    pub precision: Precision,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenElements {
    pub g11: C64,
    pub g12: C64,
    pub g22: C64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub topology: Topology,
    pub pair: PhotonPair,
    pub eta: C64,
    pub gamma_tilde: C64,
    pub z1: C64,
    pub z2: C64,
    pub z3: C64,
    pub z4: C64,
}

impl BoundState {
    /// Weights (Z_a, Z_b) multiplying the two exponentials in a channel.
    pub fn weights(&self, channel: Channel) -> (C64, C64) {
        match channel {
            Channel::Transmission => (self.z1, self.z2),
            Channel::Reflection => (self.z3, self.z4),
        }
    }

    /// Exponent rates ((iη − Γ̃)/2, (iη + Γ̃)/2) of the two terms.
    pub fn exponents(&self) -> (C64, C64) {
        let ie = C64::i() * self.eta;
        ((ie - self.gamma_tilde) / 2.0, (ie + self.gamma_tilde) / 2.0)
    }

    /// B(x) for separation x ≥ 0.
    pub fn eval(&self, channel: Channel, x: f64) -> C64 {
        let (za, zb) = self.weights(channel);
        let (ra, rb) = self.exponents();
        let x = x.abs();
        za * (ra * x).exp() + zb * (rb * x).exp()
    }

    /// Same function written with the opposite sign of Γ̃: the two terms trade places.
    pub fn relabelled(&self) -> BoundState {
        BoundState {
            gamma_tilde: -self.gamma_tilde,
            z1: self.z2,
            z2: self.z1,
            z3: self.z4,
            z4: self.z3,
            ..*self
        }
    }

    /// Slowest decay rate among the terms that carry weight in either channel.
    pub fn slowest_decay(&self) -> f64 {
        let (ra, rb) = self.exponents();
        let mut rate = f64::INFINITY;
        if self.z1.norm() + self.z3.norm() > 0.0 {
            rate = rate.min(-ra.re);
        }
        if self.z2.norm() + self.z4.norm() > 0.0 {
            rate = rate.min(-rb.re);
        }
        rate
    }

    fn zero(topology: Topology, pair: PhotonPair, eta: C64, gamma_tilde: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        BoundState {
            topology,
            pair,
            eta,
            gamma_tilde,
            z1: z,
            z2: z,
            z3: z,
            z4: z,
        }
    }
}

struct Green<T> {
    g11: Complex<T>,
    g12: Complex<T>,
    g22: Complex<T>,
}

fn check_green(energy: f64, gamma: f64, eta: C64, gt: C64) -> Result<()> {
    let thr = SINGULAR_THRESHOLD * gamma * gamma;
    if eta.norm() < thr || (eta * eta + gt * gt).norm() < thr {
        return Err(Error::SingularGreen { energy });
    }
    Ok(())
}

fn green_g<T: Real>(top: Topology, s: &Setup<T>, e: Complex<T>, g: Complex<T>) -> Green<T> {
    let two = T::lit(2.0);
    let one = real(T::one());
    match top {
        Topology::Separate | Topology::Braided => {
            let den = e * (e * e + g * g) * two;
            let g11 = (e * e * two + g * g) / den;
            Green {
                g11,
                g12: -(g * g) / den,
                g22: g11,
            }
        }
        Topology::Nested => {
            let i = imag_unit::<T>();
            let den = e * (e * e + g * g);
            let e2p1 = cis(two * s.phi1);
            let x = i * e * cis(s.phi2) * (one - e2p1) * s.gamma;
            let a = one + cis(s.phi2);
            let y = e2p1 * a * a * (two * s.gamma * s.gamma);
            Green {
                g11: (e * e + x + y) / den,
                g22: (e * e - x + y) / den,
                g12: -y / den,
            }
        }
    }
}

fn green_with<T: Real>(top: Topology, params: &SystemParams, energy: f64) -> Result<GreenElements> {
    let s = Setup::<T>::new(params);
    let e = eta_g(top, &s, T::lit(energy));
    let g = gamma_tilde_g(top, &s, Branch::Principal);
    check_green(energy, params.gamma, to_c64(e), to_c64(g))?;
    let gr = green_g(top, &s, e, g);
    Ok(GreenElements {
        g11: to_c64(gr.g11),
        g12: to_c64(gr.g12),
        g22: to_c64(gr.g22),
    })
}

/// Elements of the two-photon Green matrix at pair energy E (G21 = G12).
pub fn green_elements(top: Topology, params: &SystemParams, energy: f64) -> Result<GreenElements> {
    green_with::<f64>(top, params, energy)
}

/// Green elements evaluated in double-double arithmetic.
pub fn green_elements_extended(
    top: Topology,
    params: &SystemParams,
    energy: f64,
) -> Result<GreenElements> {
    green_with::<Quad>(top, params, energy)
}

fn interference_prefactor(top: Topology, p: &SystemParams) -> f64 {
    match top {
        Topology::Separate => (p.phi1 / 2.0).cos().powi(2),
        Topology::Braided => ((p.phi1 + p.phi2) / 2.0).cos().powi(2),
        Topology::Nested => 1.0,
    }
}

fn weights_g<T: Real>(
    top: Topology,
    params: &SystemParams,
    pair: &PhotonPair,
    branch: Branch,
) -> Result<(C64, C64, [C64; 4])> {
    let s = Setup::<T>::new(params);
    let (k1, k2) = (T::lit(pair.k1), T::lit(pair.k2));
    let energy = pair.energy();
    let e = eta_g(top, &s, k1 + k2);
    let g = gamma_tilde_g(top, &s, branch);
    let (e64, g64) = (to_c64(e), to_c64(g));

    if interference_prefactor(top, params) < DECOUPLED_THRESHOLD {
        return Ok((e64, g64, [C64::new(0.0, 0.0); 4]));
    }

    check_green(energy, params.gamma, e64, g64)?;
    let i = imag_unit::<T>();
    let collision = |which: &'static str, v: Complex<T>| -> Result<()> {
        let magnitude = norm(v).to_f64();
        if magnitude < SINGULAR_THRESHOLD * params.gamma {
            return Err(Error::DenominatorCollision {
                energy,
                which,
                magnitude,
            });
        }
        Ok(())
    };
    collision("eta + i*gamma_tilde", e + i * g)?;
    collision("eta - i*gamma_tilde", e - i * g)?;

    let a1 = amplitudes_g(top, &s, k1);
    let a2 = amplitudes_g(top, &s, k2);
    check_degenerate(params, pair.k1, to_c64(a1.d))?;
    check_degenerate(params, pair.k2, to_c64(a2.d))?;
    let ee1 = a1.e1 * a2.e1;
    let ee2 = a1.e2 * a2.e2;

    let gr = green_g(top, &s, e, g);
    let (g11, g12, g22) = (gr.g11, gr.g12, gr.g22);
    let two = T::lit(2.0);
    let one = real(T::one());
    let (p1, p2, gam) = (s.phi1, s.phi2, s.gamma);

    let z = match top {
        Topology::Separate | Topology::Braided => {
            let (q, hc, c) = if top == Topology::Separate {
                let c = (p1 / two).cos();
                (cis(p1 + p2), i * (two * gam * (T::one() + p1.cos())), c * c)
            } else {
                let c = ((p1 + p2) / two).cos();
                (cis(p1), i * two * gam * (one + cis(p2) * p1.cos()), c * c)
            };
            let ig = i * g;
            let u1 = (e * two + ig - hc) / (e * two * (e + ig)) * (q + one);
            let u2 = (e * two - ig - hc) / (e * two * (e - ig)) * (q - one);
            let u3 = (e * two + ig * (one - q)) / (e * two * (e + ig)) * (one / q + one);
            let u4 = (e * two - ig * (one + q)) / (e * two * (e - ig)) * (one / q - one);
            let pre = real(two * T::pi() * gam * c) / (g11 * g11 - g12 * g12);
            [
                pre * (ee1 * (u1 * g11 - u3 * g12) + ee2 * (u3 * g11 - u1 * g12)),
                pre * (ee1 * (u2 * g11 - u4 * g12) + ee2 * (u4 * g11 - u2 * g12)),
                pre * (ee1 * (u3 * g11 - u1 * g12) + ee2 * (u1 * g11 - u3 * g12)),
                pre * (ee1 * (u4 * g11 - u2 * g12) + ee2 * (u2 * g11 - u4 * g12)),
            ]
        }
        Topology::Nested => {
            collision("gamma_tilde", g)?;
            let w0 = real(s.omega0);
            let base = w0 - i * (gam / two) * (real(two) + cis(p2) + cis(two * p1 + p2));
            let l1 = base + i * g / two;
            let l2 = base - i * g / two;
            let ch = (p2 / two).cos();
            let cq = ch * ch;
            let e2p1 = cis(two * p1) - one;
            let r = e2p1 * (cis(p2) + one) * (gam * gam);
            let pp = r * cq;
            let qq = e * (gam * p1.sin() * (p1.cos() + (p1 + p2).cos()));
            let cc = (p1 + p2 / two).cos();
            let cc = cc * cc;
            let dp = e * g * (e + i * g);
            let dm = e * g * (e - i * g);
            let u1 = (pp - qq + e * (w0 - l2) * cc) / dp;
            let u2 = (pp - qq + e * (w0 - l1) * cc) / dm;
            let u3 = (e * (w0 - l2) - r) * cq / dp;
            let u4 = (e * (w0 - l1) - r) * cq / dm;
            let dd = g11 * g22 - g12 * g12;
            let pre = i * (T::lit(4.0) * T::pi() * gam) / dd;
            let z1 = -pre * (ee1 * (u1 * g22 - u3 * g12) + ee2 * (u3 * g11 - u1 * g12));
            let z2 = pre * (ee1 * (u2 * g22 - u4 * g12) + ee2 * (u4 * g11 - u2 * g12));
            [z1, z2, z1, z2]
        }
    };
    Ok((e64, g64, z.map(to_c64)))
}

/// Bound state of a photon pair with default options (principal branch, double precision).
pub fn bound_state(top: Topology, params: &SystemParams, pair: PhotonPair) -> Result<BoundState> {
    bound_state_with(top, params, pair, BoundOptions::default())
}

pub fn bound_state_with(
    top: Topology,
    params: &SystemParams,
    pair: PhotonPair,
    opts: BoundOptions,
) -> Result<BoundState> {
    let extended = match opts.precision {
        Precision::Double => false,
        Precision::Extended => true,
        Precision::Auto => {
            let s = Setup::<f64>::new(params);
            eta_g(top, &s, pair.energy()).norm() < EXTENDED_ETA_THRESHOLD * params.gamma
        }
    };
    let (eta, gamma_tilde, z) = if extended {
        weights_g::<Quad>(top, params, &pair, opts.branch)?
    } else {
        weights_g::<f64>(top, params, &pair, opts.branch)?
    };
    let mut b = BoundState::zero(top, pair, eta, gamma_tilde);
    [b.z1, b.z2, b.z3, b.z4] = z;
    Ok(b)
}

/// B^{RR}(x) or B^{LL}(x).
pub fn bound_state_eval(bound: &BoundState, channel: Channel, x: f64) -> C64 {
    bound.eval(channel, x)
}

/// Product of the single-photon amplitudes that feeds a channel: t(k₁)t(k₂) or r(k₁)r(k₂).
pub fn single_product(
    top: Topology,
    params: &SystemParams,
    pair: &PhotonPair,
    channel: Channel,
) -> Result<C64> {
    let a = scatter_single(top, params, pair.k1)?;
    let b = scatter_single(top, params, pair.k2)?;
    Ok(match channel {
        Channel::Transmission => a.t4 * b.t4,
        Channel::Reflection => a.r1 * b.r1,
    })
}

/// f_RR or f_LL at centre x_c and separation x.
pub fn two_photon_amplitude(
    top: Topology,
    params: &SystemParams,
    pair: PhotonPair,
    channel: Channel,
    xc: f64,
    x: f64,
) -> Result<C64> {
    let bound = bound_state(top, params, pair)?;
    let product = single_product(top, params, &pair, channel)?;
    let sign = match channel {
        Channel::Transmission => 1.0,
        Channel::Reflection => -1.0,
    };
    let phase = C64::from_polar(1.0, sign * pair.energy() * xc);
    let plane = product * (pair.delta1() * x).cos();
    Ok(phase / (2f64.sqrt() * PI) * (plane + bound.eval(channel, x)))
}
