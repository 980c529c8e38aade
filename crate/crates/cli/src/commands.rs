//! Data series behind each subcommand. Every function is pure; sweeps run in
//! parallel and are collected in grid order.

use giantqed::observables::{
    apply_loss, differential_correlation_with, flux_from_bound, flux_quadrature_from_bound,
    g2_normalized_with, settling_distance, spectrum_from_bound, Chi, SpectrumSeries,
};
use giantqed::single::{scatter_single, scatter_single_or_limit};
use giantqed::two_photon::{bound_state_with, BoundOptions};
use giantqed::{Channel, PhotonPair};
use rayon::prelude::*;

use crate::config::{Grid, RunConfig};
use crate::error::CliError;
use crate::output::Table;

/// Relative tolerance of the flux quadrature column.
pub const FLUX_QUAD_TOL: f64 = 1e-9;

fn options(cfg: &RunConfig) -> BoundOptions {
    BoundOptions {
        branch: cfg.branch,
        ..BoundOptions::default()
    }
}

/// Evaluate `f` over `points` in parallel, keeping grid order. The first
/// failing point (in grid order) decides the error.
fn sweep<T, F>(points: &[f64], f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(f64) -> Result<T, CliError> + Sync,
{
    let out: Vec<Result<T, CliError>> = points.par_iter().map(|&p| f(p)).collect();
    out.into_iter().collect()
}

fn degenerate_k(cfg: &RunConfig, what: &str) -> Result<f64, CliError> {
    if cfg.pair.k1 != cfg.pair.k2 {
        return Err(CliError::Config(format!(
            "{what} needs a degenerate pair (use --k)"
        )));
    }
    Ok(cfg.pair.k1)
}

/// k, t₄, r₁, e₁, e₂ (right incidence) and |t₄|² + |r₁|² over the k grid.
pub fn cmd_single(cfg: &RunConfig) -> Result<Table, CliError> {
    let ks = cfg.k_grid.values();
    let rows = sweep(&ks, |k| {
        let s = match scatter_single(cfg.topology, &cfg.params, k) {
            Ok(s) => s,
            Err(giantqed::Error::DegenerateChannel { .. }) if cfg.allow_degenerate => {
                scatter_single_or_limit(cfg.topology, &cfg.params, k)
            }
            Err(e) => return Err(e.into()),
        };
        Ok(vec![
            k,
            s.t4.re,
            s.t4.im,
            s.r1.re,
            s.r1.im,
            s.e1.re,
            s.e1.im,
            s.e2.re,
            s.e2.im,
            s.flux(),
        ])
    })?;
    let mut t = Table::new([
        "k_over_Gamma",
        "t4_re",
        "t4_im",
        "r1_re",
        "r1_im",
        "e1R_re",
        "e1R_im",
        "e2R_re",
        "e2R_im",
        "unitarity",
    ]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

/// S_R, S_L and S_total on the frequency grid, scaled by η_loss.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Table, CliError> {
    let b = bound_state_with(cfg.topology, &cfg.params, cfg.pair, options(cfg))?;
    let omega = cfg.omega_grid.values();
    let chunks: Vec<_> = omega
        .par_chunks(256)
        .map(|c| spectrum_from_bound(&b, c))
        .collect();
    let mut s = SpectrumSeries {
        omega: Vec::with_capacity(omega.len()),
        s_r: Vec::with_capacity(omega.len()),
        s_l: Vec::with_capacity(omega.len()),
        s_total: Vec::with_capacity(omega.len()),
    };
    for c in chunks {
        let c = c?;
        s.omega.extend(c.omega);
        s.s_r.extend(c.s_r);
        s.s_l.extend(c.s_l);
        s.s_total.extend(c.s_total);
    }
    s = apply_loss(&cfg.loss, s);
    let mut t = Table::new(["omega_over_Gamma", "S_R", "S_L", "S_total"]);
    for i in 0..s.omega.len() {
        t.push(vec![s.omega[i], s.s_r[i], s.s_l[i], s.s_total[i]]);
    }
    Ok(t)
}

/// Closed-form and quadrature total inelastic flux over the k grid.
pub fn cmd_flux(cfg: &RunConfig) -> Result<Table, CliError> {
    let ks = cfg.k_grid.values();
    let eta = cfg.loss.eta();
    let rows = sweep(&ks, |k| {
        let b = bound_state_with(
            cfg.topology,
            &cfg.params,
            PhotonPair::degenerate(k),
            options(cfg),
        )?;
        let closed = flux_from_bound(&b);
        let q = flux_quadrature_from_bound(&b, FLUX_QUAD_TOL)?;
        Ok(vec![k, eta * closed, eta * q.value, eta * q.error])
    })?;
    let mut t = Table::new([
        "k_over_Gamma",
        "F_closed",
        "F_quadrature",
        "F_quadrature_error",
    ]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

/// χ_R and χ_L over a square phase grid at fixed k, scaled by η_loss².
/// Cells where the two-photon solution is singular are written as NaN.
pub fn cmd_chi_map(cfg: &RunConfig) -> Result<(Table, usize), CliError> {
    let k = degenerate_k(cfg, "chi-map")?;
    let phases = cfg.phase_grid.values();
    let cells: Vec<(f64, f64)> = phases
        .iter()
        .flat_map(|&a| phases.iter().map(move |&b| (a, b)))
        .collect();
    let rows: Vec<(Vec<f64>, bool)> = cells
        .par_iter()
        .map(|&(p1, p2)| {
            let params = cfg.params.with_phases(p1, p2);
            let mut ok = true;
            let mut row = vec![cfg.phase_units.from_rad(p1), cfg.phase_units.from_rad(p2)];
            for ch in Channel::BOTH {
                match differential_correlation_with(cfg.topology, &params, k, ch, options(cfg)) {
                    Ok(chi) => row.push(apply_loss(&cfg.loss, Chi(chi)).0),
                    Err(_) => {
                        ok = false;
                        row.push(f64::NAN);
                    }
                }
            }
            (row, ok)
        })
        .collect();
    let sfx = cfg.phase_units.suffix();
    let mut t = Table::new([
        format!("phi1_{sfx}"),
        format!("phi2_{sfx}"),
        "chi_R".into(),
        "chi_L".into(),
    ]);
    let mut singular = 0;
    for (row, ok) in rows {
        singular += usize::from(!ok);
        t.push(row);
    }
    Ok((t, singular))
}

/// The separation grid, extended to the settling distance with --x-auto.
pub fn g2_grid(cfg: &RunConfig) -> Grid {
    if cfg.x_auto {
        let x_max = settling_distance(cfg.topology, &cfg.params).max(cfg.x_grid.max);
        Grid::new(cfg.x_grid.min, x_max, cfg.x_grid.points)
    } else {
        cfg.x_grid
    }
}

/// g² per selected channel over the separation grid.
pub fn cmd_g2(cfg: &RunConfig) -> Result<Table, CliError> {
    let x = g2_grid(cfg).values();
    let channels = cfg.channel.channels();
    let mut columns = vec!["x_times_Gamma".to_string()];
    let mut series = Vec::new();
    for ch in &channels {
        let s = g2_normalized_with(cfg.topology, &cfg.params, cfg.pair, *ch, &x, options(cfg))?;
        columns.push(match ch {
            Channel::Transmission => "g2_R".into(),
            Channel::Reflection => "g2_L".into(),
        });
        series.push(s.g2);
    }
    let mut t = Table::new(columns);
    for (i, xi) in x.iter().enumerate() {
        let mut row = vec![*xi];
        row.extend(series.iter().map(|s| s[i]));
        t.push(row);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ChannelSel, RunArgs};
    use giantqed::Topology;

    fn config(top: Topology, p1: f64, p2: f64) -> RunConfig {
        RunConfig::resolve(&RunArgs {
            topology: Some(top),
            phi1: Some(p1),
            phi2: Some(p2),
            ..Default::default()
        })
        .unwrap()
    }

    fn argmax(v: &[f64]) -> usize {
        (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap()
    }

    #[test]
    fn single_decoupled_columns() {
        let mut cfg = config(Topology::Separate, 1.0, 0.3);
        cfg.k_grid = Grid::new(99.0, 101.0, 41);
        cfg.allow_degenerate = true;
        let t = cmd_single(&cfg).unwrap();
        assert!(t
            .column("t4_re")
            .unwrap()
            .iter()
            .all(|v| (v - 1.0).abs() < 1e-12));
        let cfg = config(Topology::Braided, 0.25, 0.75);
        let t = cmd_single(&cfg).unwrap();
        assert!(t
            .column("t4_re")
            .unwrap()
            .iter()
            .all(|v| (v - 1.0).abs() < 1e-12));
        assert!(t
            .column("unitarity")
            .unwrap()
            .iter()
            .all(|v| (v - 1.0).abs() < 1e-10));
    }

    #[test]
    fn single_degenerate_point_needs_flag() {
        let mut cfg = config(Topology::Separate, 1.0, 0.3);
        cfg.k_grid = Grid::new(99.0, 101.0, 41);
        let err = cmd_single(&cfg).unwrap_err();
        assert_eq!(err.code(), 3, "{err}");
    }

    #[test]
    fn spectrum_peaks_and_loss() {
        let cfg = config(Topology::Separate, 0.5, 0.25);
        let t = cmd_spectrum(&cfg).unwrap();
        let w = t.column("omega_over_Gamma").unwrap();
        let s = t.column("S_total").unwrap();
        let peaks: Vec<f64> = (1..w.len() - 1)
            .filter(|&i| s[i] > s[i - 1] && s[i] >= s[i + 1])
            .map(|i| w[i])
            .collect();
        // The broad root at 100.3 merges with its mirror image into the central maximum.
        for (root, width) in [(101.7, 0.3), (100.3, 1.7)] {
            assert!(
                peaks.iter().any(|pk| (pk - root).abs() < width / 2.0),
                "{root}: {peaks:?}"
            );
        }

        let mut lossy = cfg.clone();
        lossy.loss = giantqed::observables::LossModel::new(0.5).unwrap();
        let h = cmd_spectrum(&lossy).unwrap();
        for name in ["S_R", "S_L", "S_total"] {
            for (a, b) in t.column(name).unwrap().iter().zip(h.column(name).unwrap()) {
                assert_eq!(0.5 * a, b);
            }
        }
    }

    #[test]
    fn nested_spectrum_columns_match() {
        let t = cmd_spectrum(&config(Topology::Nested, 0.3, 1.1)).unwrap();
        for (r, l) in t
            .column("S_R")
            .unwrap()
            .iter()
            .zip(t.column("S_L").unwrap())
        {
            assert!((r - l).abs() <= 1e-12 * r.abs());
        }
    }

    #[test]
    fn flux_columns_agree_and_peak_near_pole() {
        let mut cfg = config(Topology::Separate, 0.5, 0.25);
        cfg.k_grid = Grid::new(97.0, 103.0, 121);
        let t = cmd_flux(&cfg).unwrap();
        let (c, q) = (
            t.column("F_closed").unwrap(),
            t.column("F_quadrature").unwrap(),
        );
        for (a, b) in c.iter().zip(&q) {
            assert!((a - b).abs() <= 1e-6 * a.abs().max(1e-300), "{a} {b}");
        }
        let k = t.column("k_over_Gamma").unwrap();
        let peak = k[argmax(&c)];
        let poles = giantqed::collective::system_poles(cfg.topology, &cfg.params);
        let near = [poles.lambda1, poles.lambda2]
            .iter()
            .map(|p| (p.re - peak).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(near < 0.5, "peak {peak}, poles {poles:?}");

        let zero = cmd_flux(&config(Topology::Separate, 1.0, 0.3));
        // The decoupled point is probed on resonance at k = ω0 by the default grid.
        match zero {
            Ok(t) => assert!(t
                .column("F_closed")
                .unwrap()
                .iter()
                .all(|v| v.abs() < 1e-20)),
            Err(e) => assert_eq!(e.code(), 3),
        }
    }

    #[test]
    fn chi_map_properties() {
        let mut cfg = config(Topology::Separate, 0.5, 0.25);
        cfg.phase_grid = Grid::new(0.0, 2.0 * std::f64::consts::PI, 17);
        let (t, _) = cmd_chi_map(&cfg).unwrap();
        assert!(t
            .column("chi_R")
            .unwrap()
            .iter()
            .filter(|v| v.is_finite())
            .all(|v| *v >= -1e-10));

        cfg.topology = Topology::Braided;
        let (t, _) = cmd_chi_map(&cfg).unwrap();
        let chi = t.column("chi_R").unwrap();
        assert!(chi.iter().any(|v| *v > 1e-6) && chi.iter().any(|v| *v < -1e-6));

        // φ → φ + 2π.
        let mut shifted = cfg.clone();
        shifted.phase_grid = Grid::new(2.0 * std::f64::consts::PI, 4.0 * std::f64::consts::PI, 17);
        let (s, _) = cmd_chi_map(&shifted).unwrap();
        for (a, b) in chi.iter().zip(s.column("chi_R").unwrap()) {
            assert!(
                a.is_nan() && b.is_nan() || (a - b).abs() <= 1e-9 * a.abs().max(1e-6),
                "{a} {b}"
            );
        }
    }

    #[test]
    fn g2_tail_and_dark_channel() {
        let mut cfg = config(Topology::Separate, 0.5, 0.4);
        cfg.x_auto = true;
        let t = cmd_g2(&cfg).unwrap();
        for name in ["g2_R", "g2_L"] {
            let g = t.column(name).unwrap();
            assert!((g.last().unwrap() - 1.0).abs() < 1e-3);
        }
        let mut dark = config(Topology::Separate, 1.0, 0.3);
        dark.channel = ChannelSel::Reflection;
        dark.pair = PhotonPair::degenerate(100.3);
        let err = cmd_g2(&dark).unwrap_err();
        assert_eq!(err.code(), 3);
        assert!(err.to_string().contains("dark"), "{err}");
    }
}
