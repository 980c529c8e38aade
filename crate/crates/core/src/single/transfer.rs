//! Independent transfer-matrix solution of the single-excitation eigenproblem.
//!
//! The field is a plane wave on each of the five segments cut by the four
//! coupling points. Each point imposes a jump in the right- and left-moving
//! amplitudes proportional to the local atomic amplitude, and each atom obeys
//! (ω₀ − k)e + V Σ (field averaged across its points) = 0. With unit incidence
//! from the left and nothing incoming from the right this is a 10×10 linear
//! system for the four right-moving amplitudes after each point, the four
//! left-moving amplitudes before each point, and the two atomic amplitudes.

use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

use crate::params::{SystemParams, Topology};
use crate::single::{Incidence, SinglePhotonSolution};
use crate::C64;

/// Coupling-point positions l₁ < l₂ < l₃ < l₄, symmetric about the origin,
/// with k₀(l₂ − l₁) = φ₁ and k₀(l₃ − l₂) = φ₂ at k₀ = ω₀.
pub fn coupling_points(params: &SystemParams) -> [f64; 4] {
    let k0 = params.omega0;
    let l2 = -params.phi2 / (2.0 * k0);
    let l3 = -l2;
    [l2 - params.phi1 / k0, l2, l3, l3 + params.phi1 / k0]
}

/// Which atom sits at each coupling point.
pub fn atom_at_points(top: Topology) -> [usize; 4] {
    match top {
        Topology::Separate => [0, 0, 1, 1],
        Topology::Braided => [0, 1, 0, 1],
        Topology::Nested => [0, 1, 1, 0],
    }
}

/// Solve the matching problem. Returns `None` if the system is singular.
pub fn transfer_matrix_solve(
    top: Topology,
    params: &SystemParams,
    k: f64,
) -> Option<SinglePhotonSolution> {
    const N: usize = 10;
    let i = C64::i();
    let k0 = params.omega0;
    let v = (params.gamma / 2.0).sqrt();
    let c = 1.0 / (2.0 * PI).sqrt();
    let pts = coupling_points(params);
    let atom = atom_at_points(top);

    // Unknown layout: R[1..=4] -> 0..4, L[0..=3] -> 4..8, e1 -> 8, e2 -> 9.
    // R[0] = 1 (incident) and L[4] = 0 are known.
    let r_idx = |j: usize| if j == 0 { None } else { Some(j - 1) };
    let l_idx = |j: usize| if j == 4 { None } else { Some(4 + j) };
    let e_idx = |a: usize| 8 + a;

    let mut m = DMatrix::<C64>::zeros(N, N);
    let mut b = DVector::<C64>::zeros(N);
    let mut row = 0;

    for (p, &l) in pts.iter().enumerate() {
        let a = atom[p];
        let fwd = C64::from_polar(1.0, k0 * l) * c;
        match r_idx(p + 1) {
            Some(col) => m[(row, col)] += fwd,
            None => unreachable!(),
        }
        match r_idx(p) {
            Some(col) => m[(row, col)] -= fwd,
            None => b[row] += fwd,
        }
        m[(row, e_idx(a))] += i * v;
        row += 1;

        let bwd = C64::from_polar(1.0, -k0 * l) * c;
        if let Some(col) = l_idx(p + 1) {
            m[(row, col)] += bwd;
        }
        if let Some(col) = l_idx(p) {
            m[(row, col)] -= bwd;
        }
        m[(row, e_idx(a))] -= i * v;
        row += 1;
    }

    for a in 0..2 {
        m[(row, e_idx(a))] += C64::from(params.omega0 - k);
        for (p, &l) in pts.iter().enumerate() {
            if atom[p] != a {
                continue;
            }
            let fwd = C64::from_polar(1.0, k0 * l) * c * v * 0.5;
            let bwd = C64::from_polar(1.0, -k0 * l) * c * v * 0.5;
            for j in [p, p + 1] {
                match r_idx(j) {
                    Some(col) => m[(row, col)] += fwd,
                    None => b[row] -= fwd,
                }
                if let Some(col) = l_idx(j) {
                    m[(row, col)] += bwd;
                }
            }
        }
        row += 1;
    }
    debug_assert_eq!(row, N);

    let x = m.lu().solve(&b)?;
    Some(SinglePhotonSolution {
        k,
        t4: x[3],
        r1: x[4],
        e1: x[8],
        e2: x[9],
        incidence: Incidence::Right,
        degenerate: false,
    })
}
