use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Separate,
    Braided,
    Nested,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::Separate, Topology::Braided, Topology::Nested];

    pub fn name(self) -> &'static str {
        match self {
            Topology::Separate => "separate",
            Topology::Braided => "braided",
            Topology::Nested => "nested",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "separate" | "s" => Ok(Topology::Separate),
            "braided" | "b" => Ok(Topology::Braided),
            "nested" | "n" => Ok(Topology::Nested),
            other => Err(Error::InvalidParams(format!("unknown topology `{other}`"))),
        }
    }
}

/// Output channel of a two-photon process: both photons transmitted (RR) or
/// both reflected (LL).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Transmission,
    Reflection,
}

impl Channel {
    pub const BOTH: [Channel; 2] = [Channel::Transmission, Channel::Reflection];
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Transmission => "transmission",
            Channel::Reflection => "reflection",
        })
    }
}

/// Atom and coupling parameters. Frequencies and rates are in units of Γ;
/// phases are in radians and are not wrapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega0: f64,
    pub gamma: f64,
    pub phi1: f64,
    pub phi2: f64,
    /// External loss rate. Kept for completeness; no formula uses it.
    pub gamma_e: f64,
}

impl SystemParams {
    pub fn new(omega0: f64, phi1: f64, phi2: f64) -> Result<Self> {
        let p = SystemParams {
            omega0,
            gamma: 1.0,
            phi1,
            phi2,
            gamma_e: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Phases given in units of π.
    pub fn from_pi_units(omega0: f64, phi1_pi: f64, phi2_pi: f64) -> Result<Self> {
        Self::new(omega0, phi1_pi * PI, phi2_pi * PI)
    }

    pub fn with_gamma_e(mut self, gamma_e: f64) -> Result<Self> {
        self.gamma_e = gamma_e;
        self.validate()?;
        Ok(self)
    }

    pub fn with_phases(mut self, phi1: f64, phi2: f64) -> Self {
        self.phi1 = phi1;
        self.phi2 = phi2;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega0, self.gamma, self.phi1, self.phi2, self.gamma_e]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "Gamma must be > 0, got {}",
                self.gamma
            )));
        }
        if self.omega0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega0 must be > 0, got {}",
                self.omega0
            )));
        }
        if self.gamma_e < 0.0 {
            return Err(Error::InvalidParams(format!(
                "gamma_e must be >= 0, got {}",
                self.gamma_e
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonPair {
    pub k1: f64,
    pub k2: f64,
}

impl PhotonPair {
    pub fn new(k1: f64, k2: f64) -> Self {
        PhotonPair { k1, k2 }
    }

    pub fn degenerate(k: f64) -> Self {
        PhotonPair { k1: k, k2: k }
    }

    /// Total energy E = k1 + k2.
    pub fn energy(&self) -> f64 {
        self.k1 + self.k2
    }

    /// Half-difference Δ₁ = (k1 − k2)/2.
    pub fn delta1(&self) -> f64 {
        (self.k1 - self.k2) / 2.0
    }
}
