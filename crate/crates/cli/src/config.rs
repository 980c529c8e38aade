//! Run configuration: flags, an optional JSON file, and the resolved values.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use giantqed::collective::Branch;
use giantqed::observables::LossModel;
use giantqed::{Channel, PhotonPair, SystemParams, Topology};
use serde::Deserialize;

use crate::error::CliError;

/// Upper bound on grid sizes.
pub const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseUnits {
    #[default]
    Pi,
    Rad,
}

impl PhaseUnits {
    pub fn to_rad(self, v: f64) -> f64 {
        match self {
            PhaseUnits::Pi => v * PI,
            PhaseUnits::Rad => v,
        }
    }

    pub fn from_rad(self, v: f64) -> f64 {
        match self {
            PhaseUnits::Pi => v / PI,
            PhaseUnits::Rad => v,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            PhaseUnits::Pi => "over_pi",
            PhaseUnits::Rad => "rad",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelSel {
    Transmission,
    Reflection,
    #[default]
    Both,
}

impl ChannelSel {
    pub fn channels(self) -> Vec<Channel> {
        match self {
            ChannelSel::Transmission => vec![Channel::Transmission],
            ChannelSel::Reflection => vec![Channel::Reflection],
            ChannelSel::Both => Channel::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSel {
    #[default]
    Principal,
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, points: usize) -> Self {
        Grid { min, max, points }
    }

    pub fn validate(&self, name: &str) -> Result<(), CliError> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(CliError::Config(format!(
                "{name} grid bounds must be finite"
            )));
        }
        if self.points < 2 {
            return Err(CliError::Config(format!(
                "{name} grid needs at least 2 points"
            )));
        }
        if self.points > MAX_POINTS {
            return Err(CliError::Config(format!(
                "{name} grid exceeds {MAX_POINTS} points"
            )));
        }
        if self.max <= self.min {
            return Err(CliError::Config(format!(
                "{name} grid must be increasing (min < max)"
            )));
        }
        Ok(())
    }

    /// Evenly spaced, both ends included.
    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }
}

/// "min,max,points"
impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected min,max,points, got '{s}'"));
        }
        let min = parts[0].parse().map_err(|e| format!("bad min: {e}"))?;
        let max = parts[1].parse().map_err(|e| format!("bad max: {e}"))?;
        let points = parts[2].parse().map_err(|e| format!("bad points: {e}"))?;
        Ok(Grid { min, max, points })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.min, self.max, self.points)
    }
}

/// "centre,half_width"
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct Zoom {
    pub centre: f64,
    pub half_width: f64,
}

impl FromStr for Zoom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (c, w) = s
            .split_once(',')
            .ok_or_else(|| format!("expected centre,half_width, got '{s}'"))?;
        Ok(Zoom {
            centre: c.trim().parse().map_err(|e| format!("bad centre: {e}"))?,
            half_width: w
                .trim()
                .parse()
                .map_err(|e| format!("bad half width: {e}"))?,
        })
    }
}

/// Flags shared by every subcommand. Anything left unset falls back to the
/// config file, then to the built-in default.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON file with any of the options below (snake_case keys)
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub topology: Option<Topology>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi2: Option<f64>,
    /// Units of phi1, phi2 and the phase grid
    #[arg(long, value_enum)]
    pub phase_units: Option<PhaseUnits>,
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Degenerate pair k1 = k2 = k
    #[arg(long, conflicts_with_all = ["k1", "k2"])]
    pub k: Option<f64>,
    #[arg(long, requires = "k2")]
    pub k1: Option<f64>,
    #[arg(long, requires = "k1")]
    pub k2: Option<f64>,
    /// Frequency grid min,max,points (default E/2 ± 6Γ, 2001 points)
    #[arg(long, allow_hyphen_values = true)]
    pub omega_grid: Option<Grid>,
    /// Re-centre the frequency grid: centre,half_width (keeps the point count)
    #[arg(long, allow_hyphen_values = true)]
    pub zoom: Option<Zoom>,
    /// Separation grid min,max,points (default 0,12,1200)
    #[arg(long, allow_hyphen_values = true)]
    pub x_grid: Option<Grid>,
    /// Extend the separation grid to 10 over the slowest decay rate
    #[arg(long)]
    pub x_auto: bool,
    /// Photon frequency grid for single and flux (default ω0 ± 4Γ, 801 points)
    #[arg(long, allow_hyphen_values = true)]
    pub k_grid: Option<Grid>,
    /// Phase grid for chi-map, used for both phases (default 0,2,64 in π units)
    #[arg(long, allow_hyphen_values = true)]
    pub phase_grid: Option<Grid>,
    /// Drive strength α² in units of Γ for validate
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// Beam-splitter transmission efficiency in [0, 1]
    #[arg(long)]
    pub eta_loss: Option<f64>,
    #[arg(long, value_enum)]
    pub channel: Option<ChannelSel>,
    /// Square-root branch for the nested collective rate
    #[arg(long, value_enum)]
    pub branch: Option<BranchSel>,
    /// Output file; stdout when absent
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Output format; otherwise taken from the output extension, else csv
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write decoupled-limit amplitudes instead of failing on a degenerate channel
    #[arg(long)]
    pub allow_degenerate: bool,
    /// Exit with status 4 when a validation threshold fails
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub topology: Option<String>,
    pub phi1: Option<f64>,
    pub phi2: Option<f64>,
    pub phase_units: Option<PhaseUnits>,
    pub omega0: Option<f64>,
    pub k: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub omega_grid: Option<Grid>,
    pub zoom: Option<Zoom>,
    pub x_grid: Option<Grid>,
    pub x_auto: Option<bool>,
    pub k_grid: Option<Grid>,
    pub phase_grid: Option<Grid>,
    pub alpha2: Option<f64>,
    pub eta_loss: Option<f64>,
    pub channel: Option<ChannelSel>,
    pub branch: Option<BranchSel>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub allow_degenerate: Option<bool>,
    pub strict: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub topology: Topology,
    /// Phases in radians.
    pub params: SystemParams,
    pub phase_units: PhaseUnits,
    pub pair: PhotonPair,
    pub omega_grid: Grid,
    pub x_grid: Grid,
    pub x_auto: bool,
    pub k_grid: Grid,
    /// In radians.
    pub phase_grid: Grid,
    pub alpha2: f64,
    pub loss: LossModel,
    pub channel: ChannelSel,
    pub branch: Branch,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub allow_degenerate: bool,
    pub strict: bool,
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let topology = match (args.topology, &file.topology) {
            (Some(t), _) => t,
            (None, Some(s)) => s
                .parse()
                .map_err(|e| CliError::Config(format!("topology: {e}")))?,
            (None, None) => Topology::Separate,
        };
        let units = args.phase_units.or(file.phase_units).unwrap_or_default();
        let phi1 = units.to_rad(args.phi1.or(file.phi1).unwrap_or(units.from_rad(0.5 * PI)));
        let phi2 = units.to_rad(args.phi2.or(file.phi2).unwrap_or(units.from_rad(0.25 * PI)));
        let omega0 = args.omega0.or(file.omega0).unwrap_or(100.0);
        let params =
            SystemParams::new(omega0, phi1, phi2).map_err(|e| CliError::Config(e.to_string()))?;

        let pair = match (args.k, args.k1.zip(args.k2)) {
            (Some(k), _) => PhotonPair::degenerate(k),
            (None, Some((k1, k2))) => PhotonPair::new(k1, k2),
            (None, None) => match (file.k, file.k1.zip(file.k2)) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Config("give either k or k1/k2, not both".into()))
                }
                (Some(k), None) => PhotonPair::degenerate(k),
                (None, Some((k1, k2))) => PhotonPair::new(k1, k2),
                (None, None) => PhotonPair::degenerate(omega0),
            },
        };
        if !(pair.k1.is_finite() && pair.k2.is_finite()) {
            return Err(CliError::Config("photon frequencies must be finite".into()));
        }

        let centre = pair.energy() / 2.0;
        let mut omega_grid = args.omega_grid.or(file.omega_grid).unwrap_or(Grid::new(
            centre - 6.0,
            centre + 6.0,
            2001,
        ));
        if let Some(z) = args.zoom.or(file.zoom) {
            if !(z.half_width > 0.0) {
                return Err(CliError::Config("zoom half width must be > 0".into()));
            }
            omega_grid = Grid::new(
                z.centre - z.half_width,
                z.centre + z.half_width,
                omega_grid.points,
            );
        }
        let x_grid = args
            .x_grid
            .or(file.x_grid)
            .unwrap_or(Grid::new(0.0, 12.0, 1200));
        let k_grid =
            args.k_grid
                .or(file.k_grid)
                .unwrap_or(Grid::new(omega0 - 4.0, omega0 + 4.0, 801));
        let pg = args.phase_grid.or(file.phase_grid).unwrap_or(Grid::new(
            units.from_rad(0.0),
            units.from_rad(2.0 * PI),
            64,
        ));
        let phase_grid = Grid::new(units.to_rad(pg.min), units.to_rad(pg.max), pg.points);
        for (g, name) in [
            (&omega_grid, "omega"),
            (&x_grid, "x"),
            (&k_grid, "k"),
            (&phase_grid, "phase"),
        ] {
            g.validate(name)?;
        }

        let alpha2 = args
            .alpha2
            .or(file.alpha2)
            .unwrap_or(giantqed_oracle::DEFAULT_ALPHA2);
        if !(alpha2.is_finite() && alpha2 > 0.0) {
            return Err(CliError::Config(format!(
                "alpha2 must be > 0, got {alpha2}"
            )));
        }
        let loss = LossModel::new(args.eta_loss.or(file.eta_loss).unwrap_or(1.0))
            .map_err(|e| CliError::Config(e.to_string()))?;
        let branch = match args.branch.or(file.branch).unwrap_or_default() {
            BranchSel::Principal => Branch::Principal,
            BranchSel::Flipped => Branch::Flipped,
        };
        let output = args.output.clone().or(file.output);
        let format = match args.format.or(file.format) {
            Some(f) => f,
            None => match output
                .as_ref()
                .and_then(|p| p.extension())
                .and_then(|e| e.to_str())
            {
                Some("json") => Format::Json,
                _ => Format::Csv,
            },
        };
        Ok(RunConfig {
            topology,
            params,
            phase_units: units,
            pair,
            omega_grid,
            x_grid,
            x_auto: args.x_auto || file.x_auto.unwrap_or(false),
            k_grid,
            phase_grid,
            alpha2,
            loss,
            channel: args.channel.or(file.channel).unwrap_or_default(),
            branch,
            output,
            format,
            allow_degenerate: args.allow_degenerate || file.allow_degenerate.unwrap_or(false),
            strict: args.strict || file.strict.unwrap_or(false),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn grid_values_hit_both_ends() {
        let g = Grid::new(94.0, 106.0, 2001);
        let v = g.values();
        assert_eq!(v[0], 94.0);
        assert_eq!(v[2000], 106.0);
        assert!((g.step() - 0.006).abs() < 1e-15);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn grid_rejects_bad_shapes() {
        assert!(Grid::new(1.0, 1.0, 10).validate("x").is_err());
        assert!(Grid::new(0.0, 1.0, 1).validate("x").is_err());
        assert!(Grid::new(0.0, 1.0, MAX_POINTS + 1).validate("x").is_err());
        assert!(Grid::new(0.0, f64::NAN, 5).validate("x").is_err());
        assert_eq!(
            "0, 12, 1200".parse::<Grid>().unwrap(),
            Grid::new(0.0, 12.0, 1200)
        );
        assert!("0,12".parse::<Grid>().is_err());
    }

    #[test]
    fn defaults_follow_table_settings() {
        let c = RunConfig::resolve(&RunArgs::default()).unwrap();
        assert_eq!(c.topology, Topology::Separate);
        assert!((c.params.phi1 - 0.5 * PI).abs() < 1e-15);
        assert_eq!(c.pair, PhotonPair::degenerate(100.0));
        assert_eq!(c.omega_grid, Grid::new(94.0, 106.0, 2001));
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn flags_override_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(
            f,
            r#"{{"topology": "nested", "phi1": 0.3, "phi2": 0.9, "k": 100.5, "eta_loss": 0.5}}"#
        )
        .unwrap();
        let args = RunArgs {
            config: Some(f.path().to_path_buf()),
            phi2: Some(0.1),
            ..Default::default()
        };
        let c = RunConfig::resolve(&args).unwrap();
        assert_eq!(c.topology, Topology::Nested);
        assert!((c.params.phi1 - 0.3 * PI).abs() < 1e-15);
        assert!((c.params.phi2 - 0.1 * PI).abs() < 1e-15);
        assert_eq!(c.pair.k1, 100.5);
        assert_eq!(c.loss.eta(), 0.5);
    }

    #[test]
    fn radians_are_taken_verbatim() {
        let args = RunArgs {
            phase_units: Some(PhaseUnits::Rad),
            phi1: Some(1.0),
            phi2: Some(2.0),
            ..Default::default()
        };
        let c = RunConfig::resolve(&args).unwrap();
        assert_eq!((c.params.phi1, c.params.phi2), (1.0, 2.0));
        assert!((c.phase_grid.max - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn unknown_file_keys_are_config_errors() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, r#"{{"phi3": 1.0}}"#).unwrap();
        let args = RunArgs {
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        assert!(matches!(
            RunConfig::resolve(&args),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn zoom_keeps_point_count() {
        let args = RunArgs {
            zoom: Some(Zoom {
                centre: 101.7,
                half_width: 0.1,
            }),
            ..Default::default()
        };
        let c = RunConfig::resolve(&args).unwrap();
        assert_eq!(c.omega_grid.points, 2001);
        assert!((c.omega_grid.min - 101.6).abs() < 1e-12);
    }
}
