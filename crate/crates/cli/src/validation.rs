//! Analytic results against the Lindblad oracle. The same checks back the
//! `validate` subcommand and the acceptance suite.

use giantqed::observables::{differential_correlation, incoherent_spectrum};
use giantqed::single::scatter_single;
use giantqed::{Channel, PhotonPair, SystemParams, Topology};
use giantqed_oracle::{
    build_model, chi_numeric, coherent_amplitudes, flux_balance, regression_spectrum,
    steady_state_from_vacuum,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Grid, RunConfig};
use crate::error::CliError;

pub const SPECTRUM_CORRELATION: f64 = 0.99;
/// Peak positions may differ by this many grid steps.
pub const PEAK_STEPS: f64 = 1.0;
/// Local maxima lower than this fraction of the global maximum are ignored.
pub const PEAK_FLOOR: f64 = 0.05;
pub const CHI_AGREEMENT: f64 = 0.95;
/// Cells with |χ| below this fraction of the grid maximum are excluded.
pub const CHI_FLOOR: f64 = 0.01;
pub const FLUX_BALANCE: f64 = 0.05;
pub const WEAK_DRIVE: f64 = 1e-3;

/// Phase settings (in units of π) of the tabulated spectral roots.
pub const TABLE_PHASES: [(f64, f64); 2] = [(0.5, 0.25), (0.25, 0.85)];
pub const FLUX_PHASES: (f64, f64) = (0.25, 0.85);
pub const FLUX_DETUNINGS: [f64; 5] = [-1.5, -0.5, 0.0, 0.5, 1.5];
pub const CHI_GRID: usize = 32;
pub const WEAK_SEED: u64 = 11;
pub const WEAK_DRAWS: usize = 20;
pub const WEAK_ALPHA2: f64 = 1e-4;

#[derive(Debug, Clone, Serialize)]
pub struct Thresholds {
    pub spectrum_correlation: f64,
    pub peak_steps: f64,
    pub peak_floor: f64,
    pub chi_agreement: f64,
    pub chi_floor: f64,
    pub flux_balance: f64,
    pub weak_drive: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            spectrum_correlation: SPECTRUM_CORRELATION,
            peak_steps: PEAK_STEPS,
            peak_floor: PEAK_FLOOR,
            chi_agreement: CHI_AGREEMENT,
            chi_floor: CHI_FLOOR,
            flux_balance: FLUX_BALANCE,
            weak_drive: WEAK_DRIVE,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumCheck {
    pub topology: &'static str,
    pub phi1_over_pi: f64,
    pub phi2_over_pi: f64,
    pub correlation: f64,
    /// Local maxima above the peak floor.
    pub peaks_analytic: Vec<f64>,
    pub peaks_regression: Vec<f64>,
    pub peak_delta: f64,
    pub grid_step: f64,
    /// Least-squares c in S_regression ≈ c S_analytic.
    pub normalization: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiSignCheck {
    pub topology: &'static str,
    pub grid: usize,
    pub compared: usize,
    pub agreeing: usize,
    pub agreement: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FluxBalanceCheck {
    pub topology: &'static str,
    pub k: f64,
    pub f_regression: f64,
    pub f_regression_error: f64,
    /// α²(1 − |t|² − |r|²).
    pub f_balance: f64,
    /// 1 − |t|² − |r|².
    pub power_reading: f64,
    /// 1 − t − r with amplitudes, as printed; not an energy balance.
    pub amplitude_reading_re: f64,
    pub amplitude_reading_im: f64,
    pub relative_difference: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakDriveDraw {
    pub topology: &'static str,
    pub phi1_over_pi: f64,
    pub phi2_over_pi: f64,
    pub k: f64,
    pub t_error: f64,
    pub r_error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakDriveCheck {
    pub seed: u64,
    pub alpha2: f64,
    pub draws: Vec<WeakDriveDraw>,
    pub max_t_error: f64,
    pub max_r_error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub alpha2: f64,
    pub omega0: f64,
    pub thresholds: Thresholds,
    pub spectra: Vec<SpectrumCheck>,
    pub chi_sign: Vec<ChiSignCheck>,
    pub flux_balance: Vec<FluxBalanceCheck>,
    pub weak_drive: WeakDriveCheck,
    pub passed: bool,
}

fn params(omega0: f64, (p1, p2): (f64, f64)) -> Result<SystemParams, CliError> {
    Ok(SystemParams::from_pi_units(omega0, p1, p2)?)
}

/// Pearson correlation; invariant under rescaling either series, so it is
/// also the correlation of the peak-normalised shapes.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

/// Local maxima at least `PEAK_FLOOR` of the global maximum.
pub fn local_peaks(omega: &[f64], s: &[f64]) -> Vec<f64> {
    let floor = PEAK_FLOOR * s.iter().copied().fold(0.0, f64::max);
    (1..s.len().saturating_sub(1))
        .filter(|&i| s[i] > s[i - 1] && s[i] >= s[i + 1] && s[i] >= floor)
        .map(|i| omega[i])
        .collect()
}

/// Largest distance from a peak of either list to the nearest peak of the other.
fn peak_mismatch(a: &[f64], b: &[f64]) -> f64 {
    let one_way = |x: &[f64], y: &[f64]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| (p - q).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// S_total from the two-photon bound state against the regression spectrum of
/// the driven master equation, on the same grid.
pub fn spectrum_comparison(
    top: Topology,
    omega0: f64,
    phases: (f64, f64),
    k: f64,
    alpha2: f64,
    grid: &Grid,
) -> Result<SpectrumCheck, CliError> {
    let p = params(omega0, phases)?;
    let omega = grid.values();
    let a = incoherent_spectrum(top, &p, PhotonPair::degenerate(k), &omega)?.s_total;
    let m = build_model(top, &p, alpha2.sqrt(), k)?;
    let r = regression_spectrum(&m, &omega)?.s_total;
    let c = correlation(&a, &r);
    let (pa, pr) = (local_peaks(&omega, &a), local_peaks(&omega, &r));
    let delta = peak_mismatch(&pa, &pr);
    let num: f64 = a.iter().zip(&r).map(|(x, y)| x * y).sum();
    let den: f64 = a.iter().map(|x| x * x).sum();
    let step = grid.step();
    Ok(SpectrumCheck {
        topology: top.name(),
        phi1_over_pi: phases.0,
        phi2_over_pi: phases.1,
        correlation: c,
        peaks_analytic: pa,
        peaks_regression: pr,
        peak_delta: delta,
        grid_step: step,
        normalization: num / den,
        passed: c >= SPECTRUM_CORRELATION && delta <= PEAK_STEPS * step * (1.0 + 1e-9),
    })
}

/// Sign of the analytic reflected χ against the oracle's on an n×n
/// cell-centred grid over [0, 2π)².
pub fn chi_sign_agreement(
    top: Topology,
    omega0: f64,
    k: f64,
    alpha2: f64,
    n: usize,
) -> Result<ChiSignCheck, CliError> {
    let centre = |i: usize| 2.0 * (i as f64 + 0.5) / n as f64;
    let cells: Vec<(f64, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (centre(i), centre(j))))
        .collect();
    let values: Vec<Result<(f64, f64), CliError>> = cells
        .par_iter()
        .map(|&ph| {
            let p = params(omega0, ph)?;
            let analytic = differential_correlation(top, &p, k, Channel::Reflection)?;
            let m = build_model(top, &p, alpha2.sqrt(), k)?;
            let numeric = chi_numeric(&m, &steady_state_from_vacuum(&m)?, Channel::Reflection).chi;
            Ok((analytic, numeric))
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<_>, _>>()?;
    let floor = CHI_FLOOR * values.iter().map(|v| v.0.abs()).fold(0.0, f64::max);
    let kept: Vec<_> = values
        .iter()
        .filter(|v| v.0.abs() >= floor && floor > 0.0)
        .collect();
    let agreeing = kept.iter().filter(|v| v.0.signum() == v.1.signum()).count();
    let agreement = if kept.is_empty() {
        1.0
    } else {
        agreeing as f64 / kept.len() as f64
    };
    Ok(ChiSignCheck {
        topology: top.name(),
        grid: n,
        compared: kept.len(),
        agreeing,
        agreement,
        passed: agreement >= CHI_AGREEMENT,
    })
}

/// Integrated regression spectrum against the power lost from the coherent
/// output, α²(1 − |t|² − |r|²).
pub fn flux_balance_check(
    top: Topology,
    omega0: f64,
    phases: (f64, f64),
    k: f64,
    alpha2: f64,
) -> Result<FluxBalanceCheck, CliError> {
    let p = params(omega0, phases)?;
    let m = build_model(top, &p, alpha2.sqrt(), k)?;
    let fb = flux_balance(&m)?;
    let rel = if fb.f_balance != 0.0 {
        (fb.f_regression - fb.f_balance).abs() / fb.f_balance.abs()
    } else {
        fb.f_regression.abs()
    };
    Ok(FluxBalanceCheck {
        topology: top.name(),
        k,
        f_regression: fb.f_regression,
        f_regression_error: fb.f_regression_error,
        f_balance: fb.f_balance,
        power_reading: fb.f_balance / alpha2,
        amplitude_reading_re: fb.amplitude_reading.re,
        amplitude_reading_im: fb.amplitude_reading.im,
        relative_difference: rel,
        passed: rel < FLUX_BALANCE,
    })
}

/// Coherent output of the master equation against (t₄, r₁) on random
/// draws: topology and both phases uniform, k within ±2Γ of ω₀.
pub fn weak_drive_draws(
    omega0: f64,
    seed: u64,
    n: usize,
    alpha2: f64,
) -> Result<WeakDriveCheck, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<(Topology, f64, f64, f64)> = (0..n)
        .map(|_| {
            let top = Topology::ALL[rng.random_range(0..3)];
            (
                top,
                rng.random_range(0.0..2.0),
                rng.random_range(0.0..2.0),
                omega0 + rng.random_range(-2.0..2.0),
            )
        })
        .collect();
    let results: Vec<Result<WeakDriveDraw, CliError>> = draws
        .par_iter()
        .map(|&(top, p1, p2, k)| {
            let p = params(omega0, (p1, p2))?;
            let sp = scatter_single(top, &p, k)?;
            let m = build_model(top, &p, alpha2.sqrt(), k)?;
            let (t, r) = coherent_amplitudes(&m, &steady_state_from_vacuum(&m)?);
            let (te, re) = ((t - sp.t4).norm(), (r - sp.r1).norm());
            Ok(WeakDriveDraw {
                topology: top.name(),
                phi1_over_pi: p1,
                phi2_over_pi: p2,
                k,
                t_error: te,
                r_error: re,
                passed: te < WEAK_DRIVE && re < WEAK_DRIVE,
            })
        })
        .collect();
    let draws = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let max_t_error = draws.iter().map(|d| d.t_error).fold(0.0, f64::max);
    let max_r_error = draws.iter().map(|d| d.r_error).fold(0.0, f64::max);
    Ok(WeakDriveCheck {
        seed,
        alpha2,
        passed: draws.iter().all(|d| d.passed),
        draws,
        max_t_error,
        max_r_error,
    })
}

/// All four comparisons at the configured ω₀, k and α². The weak-drive
/// draws always run at α² = 1e-4Γ.
pub fn run_validation(cfg: &RunConfig) -> Result<ValidationReport, CliError> {
    let omega0 = cfg.params.omega0;
    let k = cfg.pair.k1;
    let grid = Grid::new(k - 6.0, k + 6.0, 2001);
    let mut spectra = Vec::new();
    for top in Topology::ALL {
        for ph in TABLE_PHASES {
            spectra.push(spectrum_comparison(top, omega0, ph, k, cfg.alpha2, &grid)?);
        }
    }
    let chi_sign = Topology::ALL
        .iter()
        .map(|&top| chi_sign_agreement(top, omega0, k, cfg.alpha2, CHI_GRID))
        .collect::<Result<Vec<_>, _>>()?;
    let sweep: Vec<(Topology, f64)> = Topology::ALL
        .iter()
        .flat_map(|&t| FLUX_DETUNINGS.iter().map(move |d| (t, omega0 + d)))
        .collect();
    let flux = sweep
        .par_iter()
        .map(|&(top, k)| flux_balance_check(top, omega0, FLUX_PHASES, k, cfg.alpha2))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let weak_drive = weak_drive_draws(omega0, WEAK_SEED, WEAK_DRAWS, WEAK_ALPHA2)?;
    let passed = spectra.iter().all(|s| s.passed)
        && chi_sign.iter().all(|c| c.passed)
        && flux.iter().all(|f| f.passed)
        && weak_drive.passed;
    Ok(ValidationReport {
        alpha2: cfg.alpha2,
        omega0,
        thresholds: Thresholds::default(),
        spectra,
        chi_sign,
        flux_balance: flux,
        weak_drive,
        passed,
    })
}

/// One clause per failing comparison, for the error message.
pub fn failure_summary(report: &ValidationReport) -> String {
    let mut parts = Vec::new();
    for s in report.spectra.iter().filter(|s| !s.passed) {
        parts.push(format!(
            "spectrum {} ({}, {}) correlation {:.4} peak delta {:.3}",
            s.topology, s.phi1_over_pi, s.phi2_over_pi, s.correlation, s.peak_delta
        ));
    }
    for c in report.chi_sign.iter().filter(|c| !c.passed) {
        parts.push(format!(
            "chi sign {} agreement {:.3}",
            c.topology, c.agreement
        ));
    }
    for f in report.flux_balance.iter().filter(|f| !f.passed) {
        parts.push(format!(
            "flux balance {} k={} off by {:.3}",
            f.topology, f.k, f.relative_difference
        ));
    }
    if !report.weak_drive.passed {
        let bad = report.weak_drive.draws.iter().filter(|d| !d.passed).count();
        parts.push(format!(
            "weak drive {bad}/{} draws",
            report.weak_drive.draws.len()
        ));
    }
    parts.join("; ")
}
