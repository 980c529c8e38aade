//! Single-photon scattering amplitudes.
//!
//! Amplitudes are the dimensionless t, r of the scattering eigenstate; the
//! 1/√(2π) plane-wave normalisation is kept out of them.

pub mod transfer;

use num_complex::Complex;

use crate::collective::{gamma_tilde_g, half_sum, parity_map, Branch, Setup};
use crate::error::{Error, Result};
use crate::params::{SystemParams, Topology};
use crate::scalar::{cis, imag_unit, real, to_c64, Real};
use crate::C64;

/// Below this |Dᶜ(k)| (in units of Γ²) the amplitudes are replaced by their limit.
pub const DEGENERATE_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Incidence {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinglePhotonSolution {
    pub k: f64,
    pub t4: C64,
    pub r1: C64,
    /// Atom-1 excitation amplitude for the given incidence direction.
    pub e1: C64,
    /// Atom-2 excitation amplitude for the given incidence direction.
    pub e2: C64,
    pub incidence: Incidence,
    /// Set when the amplitudes are the decoupled limit (t4 = 1, r1 = 0).
    pub degenerate: bool,
}

impl SinglePhotonSolution {
    pub fn flux(&self) -> f64 {
        self.t4.norm_sqr() + self.r1.norm_sqr()
    }

    fn decoupled(k: f64) -> Self {
        SinglePhotonSolution {
            k,
            t4: C64::new(1.0, 0.0),
            r1: C64::new(0.0, 0.0),
            e1: C64::new(0.0, 0.0),
            e2: C64::new(0.0, 0.0),
            incidence: Incidence::Right,
            degenerate: true,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Amplitudes<T> {
    pub t: Complex<T>,
    pub r: Complex<T>,
    pub e1: Complex<T>,
    pub e2: Complex<T>,
    pub d: Complex<T>,
}

pub(crate) fn amplitudes_g<T: Real>(top: Topology, s: &Setup<T>, k: T) -> Amplitudes<T> {
    let i = imag_unit::<T>();
    let one = real(T::one());
    let two = T::lit(2.0);
    let g = s.gamma;
    let (p1, p2) = (s.phi1, s.phi2);
    let d = k - s.omega0;
    let dc = real(d);

    let gt = gamma_tilde_g(top, s, Branch::Principal);
    let a = real(s.omega0 - k) - half_sum(top, s);
    let den = a * a + gt * gt / T::lit(4.0);
    let sq = (g / T::pi()).sqrt();

    let (tn, rn, e1n, e2n) = match top {
        Topology::Separate => {
            let u = d - g * p1.sin();
            let c = (p1 / two).cos();
            let tn = real(u * u);
            let rn = -i
                * (T::lit(4.0)
                    * g
                    * c
                    * c
                    * (d * (p1 + p2).cos() + g * ((p2).sin() + (p1 + p2).sin())));
            let e1n = cis(-p2 / two)
                * (sq / two)
                * (one + cis(-p1))
                * (dc + i * g * (one + cis(p1)) - i * gt / two * cis(p1 + p2));
            let e2n = cis(p2 / two) * (sq / two) * (one + cis(p1)) * u;
            (tn, rn, e1n, e2n)
        }
        Topology::Braided => {
            let tn = real(
                d * d - two * g * d * (p1 + p2).sin()
                    + g * g * p1.sin() * (p1.sin() - two * p2.sin()),
            );
            let c = ((p1 + p2) / two).cos();
            let rn = -i * (T::lit(4.0) * g * c * c * (d * p1.cos() + g * p1.sin()));
            let pre = cis(p2 / two) * (sq / two) * (one + cis(-(p1 + p2)));
            let e2p1 = cis(two * p1) - one;
            let e1n = pre * (dc - i * (g / two) * e2p1 * (real(two) + cis(p1 + p2)));
            let e2n = pre * (cis(p1) * d + i * (g / two) * cis(p2) * e2p1);
            (tn, rn, e1n, e2n)
        }
        Topology::Nested => {
            let s1 = p1.sin() + (p1 + p2).sin();
            let tn = real((d - g * p2.sin()) * (d - g * (two * p1 + p2).sin()) - g * g * s1 * s1);
            let rn = -i
                * (two
                    * g
                    * (d * (T::one() + p1.cos() * (p1 + p2).cos())
                        + g * p1.sin() * (p1.cos() + (p1 + p2).cos())));
            let e1n =
                real(sq * (d * (p1 + p2 / two).cos() + two * g * p1.sin() * (p2 / two).cos()));
            let e2n = real(sq * d * (p2 / two).cos());
            (tn, rn, e1n, e2n)
        }
    };
    Amplitudes {
        t: tn / den,
        r: rn / den,
        e1: e1n / den,
        e2: e2n / den,
        d: den,
    }
}

pub(crate) fn check_degenerate(params: &SystemParams, k: f64, d: C64) -> Result<()> {
    let residual = d.norm();
    if residual < DEGENERATE_THRESHOLD * params.gamma * params.gamma {
        return Err(Error::DegenerateChannel {
            k,
            residual,
            limit: Box::new(SinglePhotonSolution::decoupled(k)),
        });
    }
    Ok(())
}

/// Right-incident single-photon amplitudes at frequency k.
pub fn scatter_single(
    top: Topology,
    params: &SystemParams,
    k: f64,
) -> Result<SinglePhotonSolution> {
    let s = Setup::<f64>::new(params);
    let a = amplitudes_g(top, &s, k);
    check_degenerate(params, k, a.d)?;
    Ok(SinglePhotonSolution {
        k,
        t4: to_c64(a.t),
        r1: to_c64(a.r),
        e1: to_c64(a.e1),
        e2: to_c64(a.e2),
        incidence: Incidence::Right,
        degenerate: false,
    })
}

/// Like [`scatter_single`] but falls back to the decoupled limit instead of
/// failing at a degenerate point.
pub fn scatter_single_or_limit(
    top: Topology,
    params: &SystemParams,
    k: f64,
) -> SinglePhotonSolution {
    match scatter_single(top, params, k) {
        Ok(s) => s,
        Err(Error::DegenerateChannel { limit, .. }) => *limit,
        Err(e) => unreachable!("scatter_single only fails on degeneracy: {e}"),
    }
}

/// Left-incident amplitudes, synthesised from the right-incident ones by parity.
pub fn left_moving_solution(
    top: Topology,
    params: &SystemParams,
    k: f64,
) -> Result<SinglePhotonSolution> {
    let right = scatter_single(top, params, k)?;
    let (e1, e2) = parity_map(top).apply(right.e1, right.e2);
    Ok(SinglePhotonSolution {
        e1,
        e2,
        incidence: Incidence::Left,
        ..right
    })
}
