use giantqed::Channel;
use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;

use crate::error::{OracleError, Result};
use crate::liouvillian::{liouvillian, unvectorize, vectorize, Super, Vec16};
use crate::model::{LindbladModel, Op};
use crate::C64;

/// Singular values below this fraction of the largest count as null.
const NULL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub rho: Op,
}

impl SteadyState {
    pub fn ground() -> Self {
        let mut rho = Op::zeros();
        rho[(0, 0)] = C64::new(1.0, 0.0);
        SteadyState { rho }
    }

    /// Tr(Xρ).
    pub fn expect(&self, x: &Op) -> C64 {
        (x * self.rho).trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.rho - self.rho.adjoint()).norm()
    }

    /// ‖L vec(ρ)‖.
    pub fn residual(&self, model: &LindbladModel) -> f64 {
        (liouvillian(model) * vectorize(&self.rho)).norm()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (self.rho + self.rho.adjoint()) * C64::from(0.5);
        SymmetricEigen::new(h).eigenvalues.min()
    }
}

fn nullity(l: &Super) -> usize {
    let sv = l.singular_values();
    let max = sv.max();
    sv.iter().filter(|&&s| s <= NULL_TOL * max).count()
}

/// Stationary state of the Liouvillian, normalised to unit trace.
pub fn steady_state(model: &LindbladModel) -> Result<SteadyState> {
    model.validate()?;
    let l = liouvillian(model);
    let n = nullity(&l);
    if n != 1 {
        return Err(OracleError::NonUniqueSteadyState { nullity: n });
    }
    // Swap one balance equation for the trace condition.
    let mut a = l;
    a.row_mut(0).fill(C64::new(0.0, 0.0));
    for i in 0..4 {
        a[(0, 5 * i)] = C64::new(1.0, 0.0);
    }
    let mut rhs = Vec16::zeros();
    rhs[0] = C64::new(1.0, 0.0);
    let x = a
        .lu()
        .solve(&rhs)
        .ok_or(OracleError::NonUniqueSteadyState { nullity: 2 })?;
    Ok(SteadyState {
        rho: unvectorize(&x),
    })
}

/// Long-time limit of the evolution started in |gg⟩. Equal to
/// [`steady_state`] when that is unique; otherwise (a decoherence-free dark
/// mode) the vacuum is projected onto the stationary subspace with the
/// spectral projector R(W†R)⁻¹W†, built from right and left null vectors.
pub fn steady_state_from_vacuum(model: &LindbladModel) -> Result<SteadyState> {
    match steady_state(model) {
        Err(OracleError::NonUniqueSteadyState { nullity }) => {
            let l = liouvillian(model);
            let svd = l.svd(true, true);
            let (u, v_t) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
            let max = svd.singular_values.max();
            let null: Vec<usize> = (0..16)
                .filter(|&i| svd.singular_values[i] <= NULL_TOL * max)
                .collect();
            let r = DMatrix::from_fn(16, null.len(), |row, j| v_t[(null[j], row)].conj());
            let w = DMatrix::from_fn(16, null.len(), |row, j| u[(row, null[j])]);
            let gram = (w.adjoint() * &r)
                .try_inverse()
                .ok_or(OracleError::NonUniqueSteadyState { nullity })?;
            let vac = vectorize(&SteadyState::ground().rho);
            let x = &r * gram * (w.adjoint() * DMatrix::from_column_slice(16, 1, vac.as_slice()));
            let rho = Op::from_column_slice(x.as_slice());
            Ok(SteadyState {
                rho: rho / rho.trace(),
            })
        }
        other => other,
    }
}

/// β = ⟨b_out⟩ for one channel.
pub fn output_mean(model: &LindbladModel, ss: &SteadyState, channel: Channel) -> C64 {
    ss.expect(&model.output_operator(channel))
}

/// (t, r) = (β_t, β_r)/α with the global output phase removed, so that the
/// weak-drive limit is the single-photon (t₄, r₁). Requires α > 0.
pub fn coherent_amplitudes(model: &LindbladModel, ss: &SteadyState) -> (C64, C64) {
    let unphase = model.output_phase().conj() / model.alpha;
    (
        output_mean(model, ss, Channel::Transmission) * unphase,
        output_mean(model, ss, Channel::Reflection) * unphase,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_model;
    use giantqed::single::scatter_single;
    use giantqed::{SystemParams, Topology};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(p1: f64, p2: f64) -> SystemParams {
        SystemParams::from_pi_units(100.0, p1, p2).unwrap()
    }

    #[test]
    fn undriven_relaxes_to_ground() {
        let m = build_model(Topology::Nested, &params(0.3, 0.7), 0.0, 100.0).unwrap();
        let ss = steady_state(&m).unwrap();
        assert!((ss.rho - SteadyState::ground().rho).norm() < 1e-12);
    }

    #[test]
    fn undriven_decoherence_free_point_is_degenerate() {
        let m = build_model(Topology::Separate, &params(1.0, 0.3), 0.0, 100.0).unwrap();
        assert!(matches!(
            steady_state(&m),
            Err(OracleError::NonUniqueSteadyState { .. })
        ));
        let ss = steady_state_from_vacuum(&m).unwrap();
        assert!((ss.rho - SteadyState::ground().rho).norm() < 1e-12);
    }

    #[test]
    fn dark_mode_stays_empty() {
        // φ₁ + φ₂ = 2π: the antisymmetric mode neither decays nor is driven.
        let m = build_model(Topology::Separate, &params(0.3, 1.7), 0.2, 100.0).unwrap();
        assert!(matches!(
            steady_state(&m),
            Err(OracleError::NonUniqueSteadyState { nullity: 2 })
        ));
        let ss = steady_state_from_vacuum(&m).unwrap();
        assert!((ss.residual(&m)) < 1e-12);
        // |A⟩ = (|ge⟩ − |eg⟩)/√2.
        let pop = (ss.rho[(1, 1)] + ss.rho[(2, 2)] - ss.rho[(1, 2)] - ss.rho[(2, 1)]) * 0.5;
        assert!(pop.norm() < 1e-12, "{pop}");
        assert!((ss.rho.trace() - 1.0).norm() < 1e-12 && ss.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn random_models_give_physical_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let top = Topology::ALL[rng.random_range(0..3)];
            let p = params(rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
            let alpha = rng.random_range(0.01..1.0);
            let k = 100.0 + rng.random_range(-2.0..2.0);
            let m = build_model(top, &p, alpha, k).unwrap();
            let ss = match steady_state(&m) {
                Ok(ss) => ss,
                Err(OracleError::NonUniqueSteadyState { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            assert!(ss.hermiticity_error() < 1e-12, "{}", ss.hermiticity_error());
            assert!((ss.rho.trace() - 1.0).norm() < 1e-12);
            assert!(ss.min_eigenvalue() > -1e-10);
        }
    }

    #[test]
    fn decoupled_separate_transmits_fully() {
        let m = build_model(Topology::Separate, &params(1.0, 0.4), 0.1, 100.0).unwrap();
        let ss = steady_state_from_vacuum(&m).unwrap();
        let (t, r) = coherent_amplitudes(&m, &ss);
        assert!((t - 1.0).norm() < 1e-12);
        assert!(r.norm() < 1e-12);
    }

    #[test]
    fn finite_drive_loses_coherent_power() {
        for top in Topology::ALL {
            let m = build_model(top, &params(0.25, 0.85), 0.5, 100.0).unwrap();
            let ss = steady_state(&m).unwrap();
            let (t, r) = coherent_amplitudes(&m, &ss);
            assert!(t.norm_sqr() + r.norm_sqr() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn weak_drive_limit_matches_single_photon() {
        for top in Topology::ALL {
            for (p1, p2, k) in [(0.5, 0.25, 100.0), (0.25, 0.85, 100.7), (0.3, 1.7, 99.6)] {
                let p = params(p1, p2);
                let sp = scatter_single(top, &p, k).unwrap();
                // α² = 1e-6Γ.
                let m = build_model(top, &p, 1e-3, k).unwrap();
                let ss = steady_state_from_vacuum(&m).unwrap();
                let (t, r) = coherent_amplitudes(&m, &ss);
                assert!(
                    (t - sp.t4).norm() < 1e-4,
                    "{top} {p1} {p2}: {t} vs {}",
                    sp.t4
                );
                assert!(
                    (r - sp.r1).norm() < 1e-4,
                    "{top} {p1} {p2}: {r} vs {}",
                    sp.r1
                );
            }
        }
    }

    #[test]
    fn weak_drive_deviation_is_quadratic_in_alpha() {
        // Richardson: the O(α²) error drops fourfold when α halves, and the
        // extrapolated value sits much closer to the single-photon result.
        let p = params(0.3, 0.55);
        for top in Topology::ALL {
            let sp = scatter_single(top, &p, 100.2).unwrap();
            let t_at = |alpha: f64| {
                let m = build_model(top, &p, alpha, 100.2).unwrap();
                coherent_amplitudes(&m, &steady_state(&m).unwrap()).0
            };
            let (t1, t2) = (t_at(0.04), t_at(0.02));
            let (e1, e2) = ((t1 - sp.t4).norm(), (t2 - sp.t4).norm());
            assert!((e1 / e2 - 4.0).abs() < 0.1, "{top}: ratio {}", e1 / e2);
            let extrapolated = (t2 * 4.0 - t1) / 3.0;
            assert!((extrapolated - sp.t4).norm() < 0.02 * e2);
        }
    }
}
