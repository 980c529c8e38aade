//! Observables built on the bound state: incoherent spectra, total inelastic
//! flux, differential correlation χ, normalised g², and beam-splitter loss.

use std::cell::Cell;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::{Channel, PhotonPair, SystemParams, Topology};
use crate::quad::{integrate_breakpoints, QuadResult};
use crate::single::scatter_single;
use crate::two_photon::{bound_state_with, single_product, BoundOptions, BoundState};
use crate::C64;

pub const POLE_THRESHOLD: f64 = 1e-12;
pub const DARK_THRESHOLD: f64 = 1e-12;
/// Quadrature window half-width around E/2, in Γ.
pub const FLUX_WINDOW: f64 = 200.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSeries {
    pub omega: Vec<f64>,
    pub s_r: Vec<f64>,
    pub s_l: Vec<f64>,
    pub s_total: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries {
    pub channel: Channel,
    pub x: Vec<f64>,
    pub g2: Vec<f64>,
}

pub fn validate_grid(grid: &[f64], min_points: usize) -> Result<()> {
    if grid.len() < min_points {
        return Err(Error::InvalidGrid(format!(
            "need at least {min_points} points, got {}",
            grid.len()
        )));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid("non-finite grid value".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Shared denominators a = −iη/2 ± Γ̃/2 of the two Lorentzian pairs.
fn offsets(b: &BoundState) -> (C64, C64) {
    let h = -C64::i() * b.eta / 2.0;
    (h + b.gamma_tilde / 2.0, h - b.gamma_tilde / 2.0)
}

/// M(ω) from an already computed bound state.
pub fn production_amplitude(b: &BoundState, channel: Channel, omega: f64) -> Result<C64> {
    let y = C64::from(b.pair.energy() / 2.0 - omega);
    let iy = C64::i() * y;
    let (a1, a2) = offsets(b);
    let (za, zb) = b.weights(channel);
    let mut m = C64::new(0.0, 0.0);
    // A term without weight contributes nothing, even if its denominators vanish.
    for (z, a) in [(za, a1), (zb, a2)] {
        if z == C64::new(0.0, 0.0) {
            continue;
        }
        let (d1, d2) = (iy + a, -iy + a);
        if d1.norm() < POLE_THRESHOLD || d2.norm() < POLE_THRESHOLD {
            return Err(Error::PoleOnGrid { omega });
        }
        m += z * (1.0 / d1 + 1.0 / d2);
    }
    Ok(m)
}

/// Pair-production amplitude M_R (transmission) or M_L (reflection).
pub fn pair_production_amplitude(
    top: Topology,
    params: &SystemParams,
    pair: PhotonPair,
    channel: Channel,
    omega: f64,
) -> Result<C64> {
    let b = bound_state_with(top, params, pair, BoundOptions::default())?;
    production_amplitude(&b, channel, omega)
}

pub fn spectrum_from_bound(b: &BoundState, omega: &[f64]) -> Result<SpectrumSeries> {
    validate_grid(omega, 1)?;
    let n = omega.len();
    let mut out = SpectrumSeries {
        omega: omega.to_vec(),
        s_r: Vec::with_capacity(n),
        s_l: Vec::with_capacity(n),
        s_total: Vec::with_capacity(n),
    };
    let pi2 = PI * PI;
    for &w in omega {
        let r = production_amplitude(b, Channel::Transmission, w)?.norm_sqr() / pi2;
        let l = production_amplitude(b, Channel::Reflection, w)?.norm_sqr() / pi2;
        out.s_r.push(r);
        out.s_l.push(l);
        out.s_total.push(r + l);
    }
    Ok(out)
}

/// S_R(ω) = |M_R|²/π², S_L(ω) = |M_L|²/π² and their sum on a grid.
pub fn incoherent_spectrum(
    top: Topology,
    params: &SystemParams,
    pair: PhotonPair,
    omega: &[f64],
) -> Result<SpectrumSeries> {
    incoherent_spectrum_with(top, params, pair, omega, BoundOptions::default())
}

pub fn incoherent_spectrum_with(
    top: Topology,
    params: &SystemParams,
    pair: PhotonPair,
    omega: &[f64],
    opts: BoundOptions,
) -> Result<SpectrumSeries> {
    let b = bound_state_with(top, params, pair, opts)?;
    spectrum_from_bound(&b, omega)
}

/// Roots ω₁ = E/2 − η/2 − iΓ̃/2 and ω₂ = E/2 − η/2 + iΓ̃/2 of the spectral denominators.
pub fn spectral_roots(top: Topology, params: &SystemParams, pair: PhotonPair) -> (C64, C64) {
    let (eta, g) = crate::collective::collective_shift_and_rate(top, params, pair.energy());
    let c = C64::from(pair.energy() / 2.0) - eta / 2.0;
    let h = C64::i() * g / 2.0;
    (c - h, c + h)
}

pub fn flux_from_bound(b: &BoundState) -> f64 {
    let (z1, z2, z3, z4) = (b.z1, b.z2, b.z3, b.z4);
    let e = b.eta;
    let g = b.gamma_tilde;
    let d = C64::i() * e.conj() - C64::i() * e;
    let gc = g.conj();
    let terms = [
        (C64::from(z1.norm_sqr() + z3.norm_sqr()), d + gc + g),
        (C64::from(z2.norm_sqr() + z4.norm_sqr()), d - gc - g),
        (z1.conj() * z2 + z3.conj() * z4, d + gc - g),
        (z1 * z2.conj() + z3 * z4.conj(), d - gc + g),
    ];
    // A marginal (non-decaying) term only occurs with vanishing weight; its
    // rounding-level numerator must not be divided by a zero denominator.
    let scale = z1.norm_sqr() + z2.norm_sqr() + z3.norm_sqr() + z4.norm_sqr();
    let sum: C64 = terms
        .iter()
        .filter(|(num, _)| num.norm() > 1e-24 * scale)
        .map(|(num, den)| num / den)
        .sum();
    8.0 / PI * sum.re
}

/// Total inelastic flux F(k) = ∫ S_total dω in closed form, for k₁ = k₂ = k.
pub fn total_flux(top: Topology, params: &SystemParams, k: f64) -> Result<f64> {
    total_flux_with(top, params, k, BoundOptions::default())
}

pub fn total_flux_with(
    top: Topology,
    params: &SystemParams,
    k: f64,
    opts: BoundOptions,
) -> Result<f64> {
    let b = bound_state_with(top, params, PhotonPair::degenerate(k), opts)?;
    Ok(flux_from_bound(&b))
}

/// Quadrature of S_total over E/2 ± 200Γ plus the analytic 1/y⁴ tail beyond.
pub fn total_flux_quadrature(
    top: Topology,
    params: &SystemParams,
    k: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    let b = bound_state_with(
        top,
        params,
        PhotonPair::degenerate(k),
        BoundOptions::default(),
    )?;
    flux_quadrature_from_bound(&b, rel_tol)
}

pub fn flux_quadrature_from_bound(b: &BoundState, rel_tol: f64) -> Result<QuadResult> {
    let centre = b.pair.energy() / 2.0;
    let (lo, hi) = (centre - FLUX_WINDOW, centre + FLUX_WINDOW);
    let (a1, a2) = offsets(b);

    // Breakpoints around each resonance (and its mirror about E/2) at a few widths.
    let mut pts = vec![lo, centre, hi];
    for a in [a1, a2] {
        // Denominator iy + a vanishes at y = ia, i.e. ω = E/2 − i·a.
        let pole = centre - (C64::i() * a).re;
        let width = a.re.abs().max(1e-9);
        for p in [pole, 2.0 * centre - pole] {
            for m in [0.0, 1.0, 5.0, 25.0] {
                for sgn in [-1.0, 1.0] {
                    let v = p + sgn * m * width;
                    if v > lo && v < hi {
                        pts.push(v);
                    }
                }
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let failure = Cell::new(None);
    let pi2 = PI * PI;
    let f = |w: f64| -> f64 {
        let r = production_amplitude(b, Channel::Transmission, w);
        let l = production_amplitude(b, Channel::Reflection, w);
        match (r, l) {
            (Ok(r), Ok(l)) => (r.norm_sqr() + l.norm_sqr()) / pi2,
            _ => {
                if failure.get().is_none() {
                    failure.set(Some(w));
                }
                0.0
            }
        }
    };
    let mut res = integrate_breakpoints(f, &pts, 0.0, rel_tol * 0.1, 200_000);
    if let Some(omega) = failure.get() {
        return Err(Error::PoleOnGrid { omega });
    }

    // Large-|y| behaviour: M → 2(Z_a a₁ + Z_b a₂)/y², so each side contributes 4|c|²/(3Y³).
    let y = FLUX_WINDOW;
    let mut tail = 0.0;
    for ch in Channel::BOTH {
        let (za, zb) = b.weights(ch);
        let c = za * a1 + zb * a2;
        tail += 2.0 * 4.0 * c.norm_sqr() / (3.0 * y.powi(3)) / pi2;
    }
    res.value += tail;
    res.error += tail * ((a1.norm().max(a2.norm())) / y).powi(2);
    Ok(res)
}

/// χ for a degenerate pair: |P + B(0)|² − |P|² with P = t₄(k)² or r₁(k)².
pub fn differential_correlation(
    top: Topology,
    params: &SystemParams,
    k: f64,
    channel: Channel,
) -> Result<f64> {
    differential_correlation_with(top, params, k, channel, BoundOptions::default())
}

pub fn differential_correlation_with(
    top: Topology,
    params: &SystemParams,
    k: f64,
    channel: Channel,
    opts: BoundOptions,
) -> Result<f64> {
    let pair = PhotonPair::degenerate(k);
    let b = bound_state_with(top, params, pair, opts)?;
    let p = single_product(top, params, &pair, channel)?;
    Ok((p + b.eval(channel, 0.0)).norm_sqr() - p.norm_sqr())
}

fn g2_point(b: &BoundState, channel: Channel, product: C64, x: f64) -> f64 {
    (1.0 + b.eval(channel, x) / product).norm_sqr()
}

/// g²(x) = |1 + B(x)/P|² normalised by the single-photon product P.
pub fn g2_normalized(
    top: Topology,
    params: &SystemParams,
    pair: PhotonPair,
    channel: Channel,
    x: &[f64],
) -> Result<CorrelationSeries> {
    g2_normalized_with(top, params, pair, channel, x, BoundOptions::default())
}

pub fn g2_normalized_with(
    top: Topology,
    params: &SystemParams,
    pair: PhotonPair,
    channel: Channel,
    x: &[f64],
    opts: BoundOptions,
) -> Result<CorrelationSeries> {
    validate_grid(x, 1)?;
    if x[0] < 0.0 {
        return Err(Error::InvalidGrid(
            "separations must be non-negative".into(),
        ));
    }
    let product = single_product(top, params, &pair, channel)?;
    if product.norm() < DARK_THRESHOLD {
        return Err(Error::DarkChannel {
            channel,
            product: product.norm(),
        });
    }
    let b = bound_state_with(top, params, pair, opts)?;
    Ok(CorrelationSeries {
        channel,
        x: x.to_vec(),
        g2: x
            .iter()
            .map(|&v| g2_point(&b, channel, product, v))
            .collect(),
    })
}

/// Separation beyond which g² has settled: 10 over the most sub-radiant decay
/// rate of the system poles.
pub fn settling_distance(top: Topology, params: &SystemParams) -> f64 {
    10.0 / crate::collective::system_poles(top, params).subradiant_decay()
}

/// Single-photon rate for a channel at frequency k: |t₄|² or |r₁|².
pub fn single_rate(top: Topology, params: &SystemParams, k: f64, channel: Channel) -> Result<f64> {
    let s = scatter_single(top, params, k)?;
    Ok(match channel {
        Channel::Transmission => s.t4.norm_sqr(),
        Channel::Reflection => s.r1.norm_sqr(),
    })
}

/// Beam-splitter loss with transmission efficiency η ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossModel {
    eta_loss: f64,
}

impl LossModel {
    pub fn new(eta_loss: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta_loss) {
            return Err(Error::InvalidParams(format!(
                "eta_loss must lie in [0, 1], got {eta_loss}"
            )));
        }
        Ok(LossModel { eta_loss })
    }

    pub fn eta(&self) -> f64 {
        self.eta_loss
    }
}

/// A differential-correlation value tagged so it can be passed through [`apply_loss`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chi(pub f64);

pub trait Lossy {
    fn with_loss(self, loss: &LossModel) -> Self;
}

impl Lossy for SpectrumSeries {
    fn with_loss(mut self, loss: &LossModel) -> Self {
        let eta = loss.eta_loss;
        for v in self
            .s_r
            .iter_mut()
            .chain(&mut self.s_l)
            .chain(&mut self.s_total)
        {
            *v *= eta;
        }
        self
    }
}

impl Lossy for Chi {
    fn with_loss(self, loss: &LossModel) -> Self {
        Chi(self.0 * loss.eta_loss * loss.eta_loss)
    }
}

/// Normalised correlations are unchanged by loss.
impl Lossy for CorrelationSeries {
    fn with_loss(self, _loss: &LossModel) -> Self {
        self
    }
}

pub fn apply_loss<O: Lossy>(loss: &LossModel, observable: O) -> O {
    observable.with_loss(loss)
}
