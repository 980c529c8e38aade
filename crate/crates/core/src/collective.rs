//! Collective shift η, collective rate Γ̃, system poles and parity rules.
//!
//! Each topology is characterised by a complex "half-sum" term h such that the
//! single-photon denominator is D(k) = (ω₀ − k − h)² + Γ̃²/4 and the two-photon
//! shift is η = E − 2ω₀ + 2h.

use num_complex::Complex;

use crate::params::{SystemParams, Topology};
use crate::scalar::{cis, imag_unit, principal_sqrt, real, Real};
use crate::C64;

/// Which root of Γ̃² to use for the nested topology. The separate and braided
/// rates are not defined through a square root and ignore this setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Principal,
    Flipped,
}

/// Parameters lifted to a generic scalar type.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Setup<T> {
    pub omega0: T,
    pub gamma: T,
    pub phi1: T,
    pub phi2: T,
}

impl<T: Real> Setup<T> {
    pub fn new(p: &SystemParams) -> Self {
        Setup {
            omega0: T::lit(p.omega0),
            gamma: T::lit(p.gamma),
            phi1: T::lit(p.phi1),
            phi2: T::lit(p.phi2),
        }
    }
}

pub(crate) fn half_sum<T: Real>(top: Topology, s: &Setup<T>) -> Complex<T> {
    let i = imag_unit::<T>();
    let one = real(T::one());
    match top {
        Topology::Separate => i * s.gamma * (one + cis(s.phi1)),
        Topology::Braided => i * s.gamma * (one + cis(s.phi1 + s.phi2)),
        Topology::Nested => {
            let two = real(T::lit(2.0));
            i * (s.gamma / T::lit(2.0)) * (two + cis(s.phi2) + cis(T::lit(2.0) * s.phi1 + s.phi2))
        }
    }
}

pub(crate) fn gamma_tilde_g<T: Real>(top: Topology, s: &Setup<T>, branch: Branch) -> Complex<T> {
    let one = real(T::one());
    match top {
        Topology::Separate => {
            let a = one + cis(s.phi1);
            cis(s.phi2) * a * a * s.gamma
        }
        Topology::Braided => {
            (cis(s.phi1) * T::lit(2.0) + cis(s.phi2) + cis(T::lit(2.0) * s.phi1 + s.phi2)) * s.gamma
        }
        Topology::Nested => {
            let e2p1 = cis(T::lit(2.0) * s.phi1);
            let a = one + e2p1;
            let sq = cis(T::lit(2.0) * s.phi2) * a * a
                + e2p1 * (one + cis(s.phi2) * T::lit(2.0)) * T::lit(4.0);
            let root = principal_sqrt(sq) * s.gamma;
            match branch {
                Branch::Principal => root,
                Branch::Flipped => -root,
            }
        }
    }
}

pub(crate) fn eta_g<T: Real>(top: Topology, s: &Setup<T>, energy: T) -> Complex<T> {
    real(energy - T::lit(2.0) * s.omega0) + half_sum(top, s) * T::lit(2.0)
}

/// Collective two-photon shift η_c and collective rate Γ̃_c at pair energy E.
pub fn collective_shift_and_rate(top: Topology, params: &SystemParams, energy: f64) -> (C64, C64) {
    collective_shift_and_rate_with(top, params, energy, Branch::Principal)
}

pub fn collective_shift_and_rate_with(
    top: Topology,
    params: &SystemParams,
    energy: f64,
    branch: Branch,
) -> (C64, C64) {
    let s = Setup::<f64>::new(params);
    (eta_g(top, &s, energy), gamma_tilde_g(top, &s, branch))
}

pub fn gamma_tilde(top: Topology, params: &SystemParams) -> C64 {
    gamma_tilde_g(top, &Setup::<f64>::new(params), Branch::Principal)
}

/// Single-photon denominator Dᶜ(k), evaluated at a possibly complex k.
pub fn denominator(top: Topology, params: &SystemParams, k: C64) -> C64 {
    let s = Setup::<f64>::new(params);
    let g = gamma_tilde_g(top, &s, Branch::Principal);
    let a = real(s.omega0) - k - half_sum(top, &s);
    a * a + g * g / 4.0
}

/// Roots of Dᶜ. `lambda1` is the most sub-radiant one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poles {
    pub lambda1: C64,
    pub lambda2: C64,
}

impl Poles {
    /// Decay rate −Im λ of the most sub-radiant pole.
    pub fn subradiant_decay(&self) -> f64 {
        -self.lambda1.im
    }
}

pub fn system_poles(top: Topology, params: &SystemParams) -> Poles {
    let s = Setup::<f64>::new(params);
    let centre = real(s.omega0) - half_sum(top, &s);
    let half = imag_unit::<f64>() * gamma_tilde_g(top, &s, Branch::Principal) / 2.0;
    let (mut a, mut b) = (centre - half, centre + half);
    let key = |z: &C64| (z.im.abs(), z.re);
    if key(&b) < key(&a) {
        std::mem::swap(&mut a, &mut b);
    }
    Poles {
        lambda1: a,
        lambda2: b,
    }
}

/// How left-incident atomic amplitudes follow from right-incident ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityRule {
    /// e₁L = e₂R, e₂L = e₁R.
    Swap,
    /// e_jL = e_jR.
    Identity,
}

impl ParityRule {
    pub fn apply(self, e1r: C64, e2r: C64) -> (C64, C64) {
        match self {
            ParityRule::Swap => (e2r, e1r),
            ParityRule::Identity => (e1r, e2r),
        }
    }
}

pub fn parity_map(top: Topology) -> ParityRule {
    match top {
        Topology::Separate | Topology::Braided => ParityRule::Swap,
        Topology::Nested => ParityRule::Identity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn separate_null_at_phi1_pi() {
        let p = SystemParams::new(100.0, PI, 0.7).unwrap();
        let (_, g) = collective_shift_and_rate(Topology::Separate, &p, 200.0);
        assert!(g.norm() < 1e-15);
    }

    #[test]
    fn separate_reference_point() {
        let p = SystemParams::from_pi_units(100.0, 0.5, 0.25).unwrap();
        let (eta, g) = collective_shift_and_rate(Topology::Separate, &p, 200.0);
        assert!(close(eta, C64::new(-2.0, 2.0), 1e-13));
        let r2 = 2f64.sqrt();
        assert!(close(g, C64::new(-r2, r2), 1e-13));
    }

    #[test]
    fn subradiant_poles() {
        let p = SystemParams::from_pi_units(100.0, 0.5, 0.4).unwrap();
        let d = system_poles(Topology::Separate, &p).subradiant_decay();
        assert!((d - 0.05).abs() < 0.005, "{d}");
        let p = SystemParams::from_pi_units(100.0, 0.5, 0.9).unwrap();
        let d = system_poles(Topology::Separate, &p).subradiant_decay();
        assert!((d - 0.7).abs() < 0.02, "{d}");
    }

    #[test]
    fn decoupled_poles_are_real_and_degenerate() {
        let p = SystemParams::new(100.0, PI, 0.3).unwrap();
        let poles = system_poles(Topology::Separate, &p);
        assert!(close(poles.lambda1, C64::new(100.0, 0.0), 1e-13));
        assert!(close(poles.lambda2, C64::new(100.0, 0.0), 1e-13));
    }

    #[test]
    fn parity_rules() {
        assert_eq!(parity_map(Topology::Separate), ParityRule::Swap);
        assert_eq!(parity_map(Topology::Braided), ParityRule::Swap);
        assert_eq!(parity_map(Topology::Nested), ParityRule::Identity);
        let (a, b) = (C64::new(1.0, 2.0), C64::new(3.0, 4.0));
        assert_eq!(ParityRule::Swap.apply(a, b), (b, a));
    }

    #[test]
    fn nested_branch_flip_negates() {
        let p = SystemParams::from_pi_units(100.0, 0.25, 0.85).unwrap();
        let (_, a) = collective_shift_and_rate_with(Topology::Nested, &p, 200.0, Branch::Principal);
        let (_, b) = collective_shift_and_rate_with(Topology::Nested, &p, 200.0, Branch::Flipped);
        assert_eq!(a, -b);
        assert!(a.re >= 0.0);
    }

    #[test]
    fn poles_decay_on_phase_grid() {
        let n = 64;
        for top in Topology::ALL {
            for i in 0..n {
                for j in 0..n {
                    let p = SystemParams::new(
                        100.0,
                        2.0 * PI * i as f64 / n as f64,
                        2.0 * PI * j as f64 / n as f64,
                    )
                    .unwrap();
                    let poles = system_poles(top, &p);
                    assert!(poles.lambda1.im <= 1e-9 && poles.lambda2.im <= 1e-9);
                }
            }
        }
    }

    fn topology() -> impl Strategy<Value = Topology> {
        prop_oneof![
            Just(Topology::Separate),
            Just(Topology::Braided),
            Just(Topology::Nested)
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn poles_are_roots(top in topology(), w0 in 1.0..200.0f64, p1 in -7.0..7.0f64, p2 in -7.0..7.0f64) {
            let p = SystemParams::new(w0, p1, p2).unwrap();
            let poles = system_poles(top, &p);
            for l in [poles.lambda1, poles.lambda2] {
                prop_assert!(denominator(top, &p, l).norm() < 1e-10);
            }
            prop_assert!(poles.lambda1.im.abs() <= poles.lambda2.im.abs());
        }

        #[test]
        fn separate_rate_modulus(p1 in -7.0..7.0f64, p2 in -7.0..7.0f64, e in 150.0..250.0f64) {
            let p = SystemParams::new(100.0, p1, p2).unwrap();
            let (eta, g) = collective_shift_and_rate(Topology::Separate, &p, e);
            prop_assert!((g.norm() - 2.0 * (1.0 + p1.cos())).abs() < 1e-12);
            prop_assert!((eta.im - g.norm()).abs() < 1e-12);
        }

        #[test]
        fn two_pi_periodic(top in topology(), p1 in -4.0..4.0f64, p2 in -4.0..4.0f64, e in 190.0..210.0f64) {
            let a = SystemParams::new(100.0, p1, p2).unwrap();
            let b = a.with_phases(p1 + 2.0 * PI, p2);
            let c = a.with_phases(p1, p2 + 2.0 * PI);
            let (ea, ga) = collective_shift_and_rate(top, &a, e);
            for q in [b, c] {
                let (eq, gq) = collective_shift_and_rate(top, &q, e);
                prop_assert!(close(ea, eq, 1e-12) && close(ga, gq, 1e-12));
            }
        }
    }
}
