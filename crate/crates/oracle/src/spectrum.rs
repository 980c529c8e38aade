//! Incoherent spectra by quantum regression through the Liouvillian resolvent.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use giantqed::observables::{validate_grid, SpectrumSeries};
use giantqed::quad::integrate_breakpoints;
use giantqed::Channel;
use nalgebra::{Matrix2, SMatrix};

use crate::error::{OracleError, Result};
use crate::liouvillian::{liouvillian, unvectorize, vectorize, Super};
use crate::model::{LindbladModel, Op};
use crate::steady::{coherent_amplitudes, steady_state_from_vacuum, SteadyState};
use crate::C64;

/// Fluctuation operators ζ = b − β of both channels and the Liouvillian,
/// ready for resolvent solves. Column 0 is transmission, column 1 reflection.
struct Regression {
    l: Super,
    sources: SMatrix<C64, 16, 2>,
    probes: [Op; 2],
}

impl Regression {
    fn new(model: &LindbladModel, ss: &SteadyState) -> Self {
        let mut sources = SMatrix::<C64, 16, 2>::zeros();
        let mut probes = [Op::zeros(); 2];
        for (j, ch) in [Channel::Transmission, Channel::Reflection]
            .into_iter()
            .enumerate()
        {
            let b = model.output_operator(ch);
            let z = b - Op::identity() * ss.expect(&b);
            sources.set_column(j, &vectorize(&(z * ss.rho)));
            probes[j] = z.adjoint();
        }
        Regression {
            l: liouvillian(model),
            sources,
            probes,
        }
    }

    /// (S_t, S_r) at detuning ν from the drive:
    /// S = (1/π) Re Tr[ζ† (iν − L)⁻¹ (ζρ)], so that ∫S dν = ⟨ζ†ζ⟩.
    fn eval(&self, nu: f64) -> Option<[f64; 2]> {
        let a = Super::identity() * C64::new(0.0, nu) - self.l;
        let x = a.lu().solve(&self.sources)?;
        let mut out = [0.0; 2];
        for (j, o) in out.iter_mut().enumerate() {
            let xm = unvectorize(&x.column(j).into_owned());
            *o = (self.probes[j] * xm).trace().re / PI;
        }
        Some(out)
    }
}

/// Regression spectrum on an absolute frequency grid. `s_r` is the
/// transmitted (right-moving) channel and `s_l` the reflected one, matching
/// the analytic [`SpectrumSeries`].
pub fn regression_spectrum(model: &LindbladModel, omega: &[f64]) -> Result<SpectrumSeries> {
    let ss = steady_state_from_vacuum(model)?;
    regression_spectrum_with(model, &ss, omega)
}

pub fn regression_spectrum_with(
    model: &LindbladModel,
    ss: &SteadyState,
    omega: &[f64],
) -> Result<SpectrumSeries> {
    validate_grid(omega, 1)?;
    let reg = Regression::new(model, ss);
    let mut out = SpectrumSeries {
        omega: omega.to_vec(),
        s_r: Vec::with_capacity(omega.len()),
        s_l: Vec::with_capacity(omega.len()),
        s_total: Vec::with_capacity(omega.len()),
    };
    for &w in omega {
        let [t, r] = reg
            .eval(w - model.drive)
            .ok_or(OracleError::SingularResolvent { omega: w })?;
        out.s_r.push(t);
        out.s_l.push(r);
        out.s_total.push(t + r);
    }
    Ok(out)
}

/// Complex frequencies of the one-excitation block, relative to the drive.
/// Imaginary parts are minus half the linewidths.
pub fn one_excitation_modes(model: &LindbladModel) -> [C64; 2] {
    let det = model.detuning();
    let half_i = C64::new(0.0, 0.5);
    let h = Matrix2::new(
        det + model.delta_l1 - half_i * model.gamma1,
        model.g12 - half_i * model.gamma12,
        model.g12 - half_i * model.gamma12,
        det + model.delta_l2 - half_i * model.gamma2,
    );
    let tr = h.trace() / 2.0;
    let disc = (tr * tr - h.determinant()).sqrt();
    [tr + disc, tr - disc]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxBalance {
    /// ∫ S_incoh dω over both channels.
    pub f_regression: f64,
    pub f_regression_error: f64,
    /// α²(1 − |t|² − |r|²).
    pub f_balance: f64,
    /// 1 − t − r read literally with amplitudes, per unit α².
    pub amplitude_reading: C64,
    /// ⟨ζ_t†ζ_t⟩ + ⟨ζ_r†ζ_r⟩, which the integral should reproduce.
    pub fluctuation_power: f64,
}

/// Inelastic flux two ways: by integrating the regression spectrum over the
/// whole real line (ν = tan θ removes the tails), and from energy balance of
/// the coherent amplitudes.
pub fn flux_balance(model: &LindbladModel) -> Result<FluxBalance> {
    let ss = steady_state_from_vacuum(model)?;
    let reg = Regression::new(model, &ss);

    let mut pts = vec![-FRAC_PI_2, 0.0, FRAC_PI_2];
    for m in one_excitation_modes(model) {
        let width = m.im.abs().max(1e-9);
        for centre in [m.re, -m.re] {
            for k in [0.0, 1.0, 5.0, 25.0] {
                for s in [-1.0, 1.0] {
                    pts.push((centre + s * k * width).atan());
                }
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let failed = Cell::new(None);
    let f = |theta: f64| {
        let c = theta.cos();
        if c <= 0.0 {
            return 0.0;
        }
        let nu = theta.tan();
        match reg.eval(nu) {
            Some([t, r]) => (t + r) / (c * c),
            None => {
                failed.set(Some(nu + model.drive));
                0.0
            }
        }
    };
    let q = integrate_breakpoints(f, &pts, 1e-15, 1e-10, 20_000);
    if let Some(omega) = failed.get() {
        return Err(OracleError::SingularResolvent { omega });
    }

    let fluctuation_power = [Channel::Transmission, Channel::Reflection]
        .into_iter()
        .map(|ch| {
            let b = model.output_operator(ch);
            let z = b - Op::identity() * ss.expect(&b);
            ss.expect(&(z.adjoint() * z)).re
        })
        .sum();

    let a2 = model.alpha * model.alpha;
    let (f_balance, amplitude_reading) = if model.alpha > 0.0 {
        let (t, r) = coherent_amplitudes(model, &ss);
        (a2 * (1.0 - t.norm_sqr() - r.norm_sqr()), 1.0 - t - r)
    } else {
        (0.0, C64::new(0.0, 0.0))
    };
    Ok(FluxBalance {
        f_regression: q.value,
        f_regression_error: q.error,
        f_balance,
        amplitude_reading,
        fluctuation_power,
    })
}
