//! Values frozen from an independent numpy evaluation of the same closed forms
//! (bound-state weights already carry the √2 normalisation).

use giantqed::collective::collective_shift_and_rate;
use giantqed::observables::{differential_correlation, total_flux};
use giantqed::single::scatter_single;
use giantqed::two_photon::bound_state;
use giantqed::{Channel, PhotonPair, SystemParams, Topology, C64};

fn close(a: C64, b: C64, tol: f64) {
    assert!((a - b).norm() <= tol * (1.0 + b.norm()), "{a} vs {b}");
}

fn params(a: f64, b: f64) -> SystemParams {
    SystemParams::from_pi_units(100.0, a, b).unwrap()
}

struct BoundRef {
    top: Topology,
    phases: (f64, f64),
    pair: (f64, f64),
    eta: C64,
    gt: C64,
    z: [C64; 4],
}

fn bound_refs() -> Vec<BoundRef> {
    vec![
        BoundRef {
            top: Topology::Separate,
            phases: (0.5, 0.25),
            pair: (100.0, 100.0),
            eta: C64::new(-2.0, 2.0),
            gt: C64::new(-1.41421356237309492e+00, 1.41421356237309515e+00),
            z: [
                C64::new(7.57756128154960240e-02, 7.85674201318386500e-02),
                C64::new(-6.31331168371051854e-01, -7.85674201318385668e-02),
                C64::new(7.57756128154960240e-02, -2.54765913201494776e-01),
                C64::new(-6.31331168371051854e-01, -4.11900753465172076e-01),
            ],
        },
        BoundRef {
            top: Topology::Separate,
            phases: (0.25, 0.85),
            pair: (100.4, 99.9),
            eta: C64::new(-1.11421356237308355e+00, 3.41421356237309492e+00),
            gt: C64::new(-3.24711005651822138e+00, -1.05505001319871550e+00),
            z: [
                C64::new(-1.98462324346013186e-01, 1.18764113118066273e-02),
                C64::new(-3.61534200859811236e-02, 2.55110091663553543e-02),
                C64::new(3.66820913858134021e-02, -2.33856672677444401e-02),
                C64::new(1.98990995645845659e-01, -9.75106941319570444e-03),
            ],
        },
        BoundRef {
            top: Topology::Braided,
            phases: (0.5, 0.25),
            pair: (100.0, 100.0),
            eta: C64::new(-1.41421356237309515e+00, 5.85786437626905077e-01),
            gt: C64::new(0.0, 2.0),
            z: [
                C64::new(2.69600763465872098e-02, 9.53182640298945623e-03),
                C64::new(-1.57009245868377517e-16, -5.00000000000000333e-01),
                C64::new(2.22222222222222432e-01, -1.28539361054709034e-01),
                C64::new(1.95262145875634979e-01, -6.38071187457698752e-01),
            ],
        },
        BoundRef {
            top: Topology::Braided,
            phases: (0.25, 0.85),
            pair: (100.4, 99.9),
            eta: C64::new(9.18033988749905938e-01, 9.78869674096927156e-02),
            gt: C64::new(6.92165384451804422e-02, 9.77197537924273885e-01),
            z: [
                C64::new(-1.02531093056266578e-01, 1.52596161730744664e-02),
                C64::new(1.45524775284974544e-03, -1.58269091768391740e-04),
                C64::new(-1.05990728967913103e-01, 1.89219866524439895e-02),
                C64::new(-2.00438815879677192e-03, 3.50410138760113296e-03),
            ],
        },
        BoundRef {
            top: Topology::Nested,
            phases: (0.5, 0.25),
            pair: (100.0, 100.0),
            eta: C64::new(0.0, 2.0),
            gt: C64::new(8.76035489644932275e-01, -3.22866728366516842e+00),
            z: [
                C64::new(4.53486171251923031e-01, 5.80864953452022048e-01),
                C64::new(-9.99327806586484818e-02, -8.08649534520224644e-02),
                C64::new(4.53486171251923031e-01, 5.80864953452022048e-01),
                C64::new(-9.99327806586484818e-02, -8.08649534520224644e-02),
            ],
        },
        BoundRef {
            top: Topology::Nested,
            phases: (0.25, 0.85),
            pair: (100.4, 99.9),
            eta: C64::new(7.37016024448832296e-01, 6.55002976072085241e-01),
            gt: C64::new(6.28925445460298604e-01, -1.55223620145708341e+00),
            z: [
                C64::new(1.21137531014281902e-01, -1.56746559382822559e-01),
                C64::new(-5.39047914690080066e-03, 2.95251741735405443e-02),
                C64::new(1.21137531014281902e-01, -1.56746559382822559e-01),
                C64::new(-5.39047914690080066e-03, 2.95251741735405443e-02),
            ],
        },
    ]
}

#[test]
fn bound_state_weights() {
    for r in bound_refs() {
        let p = params(r.phases.0, r.phases.1);
        let pair = PhotonPair::new(r.pair.0, r.pair.1);
        let b = bound_state(r.top, &p, pair).unwrap();
        close(b.eta, r.eta, 1e-12);
        close(b.gamma_tilde, r.gt, 1e-12);
        for (got, want) in [b.z1, b.z2, b.z3, b.z4].into_iter().zip(r.z) {
            close(got, want, 1e-10);
        }
        let (eta, gt) = collective_shift_and_rate(r.top, &p, pair.energy());
        close(eta, r.eta, 1e-12);
        close(gt, r.gt, 1e-12);
    }
}

#[test]
fn flux_and_chi() {
    // (topology, φ₁/π, φ₂/π, k, F, χ_R, χ_L)
    let rows = [
        (
            Topology::Separate,
            0.5,
            0.25,
            100.0,
            6.33999937913394263e-01,
            4.32098765432099186e-01,
            -2.34567901234568055e-01,
        ),
        (
            Topology::Separate,
            0.25,
            0.85,
            100.3,
            6.97911013197643815e+00,
            3.14707926367482294e-01,
            7.26418016093039132e-01,
        ),
        (
            Topology::Braided,
            0.5,
            0.25,
            100.0,
            1.85030121353176824e+00,
            5.55555555555555802e-01,
            -3.87253486026508775e-01,
        ),
        (
            Topology::Braided,
            0.25,
            0.85,
            100.3,
            1.31028665956217161e+00,
            4.97922249471256684e-01,
            -9.56788445993171227e-02,
        ),
        (
            Topology::Nested,
            0.5,
            0.25,
            100.0,
            4.77464829275686675e-01,
            1.98223304703364689e-01,
            4.05330085889910541e-01,
        ),
        (
            Topology::Nested,
            0.25,
            0.85,
            100.3,
            1.01616467197950353e-01,
            2.75924179087336241e-01,
            -2.51226817332906964e-02,
        ),
    ];
    for (top, a, b, k, f, chi_r, chi_l) in rows {
        let p = params(a, b);
        let got = total_flux(top, &p, k).unwrap();
        assert!((got - f).abs() < 1e-10 * f, "{top} F {got} vs {f}");
        let r = differential_correlation(top, &p, k, Channel::Transmission).unwrap();
        let l = differential_correlation(top, &p, k, Channel::Reflection).unwrap();
        assert!((r - chi_r).abs() < 1e-10, "{top} chi_R {r} vs {chi_r}");
        assert!((l - chi_l).abs() < 1e-10, "{top} chi_L {l} vs {chi_l}");
    }
}

#[test]
fn single_photon_amplitudes() {
    let p = params(0.3, 0.55);
    let rows = [
        (
            Topology::Separate,
            [
                C64::new(-1.07263139598974423e-02, 3.74658126394339860e-02),
                C64::new(9.60645753924133872e-01, 2.75029079443672553e-01),
                C64::new(-2.66421707257909590e-01, -3.63175897882326362e-02),
                C64::new(5.45163883679901304e-02, 2.35755615753247775e-03),
            ],
        ),
        (
            Topology::Braided,
            [
                C64::new(9.73205851306021663e-01, 1.14404972157195486e-01),
                C64::new(-2.32864113417858912e-02, 1.98089919925911045e-01),
                C64::new(-1.08286816775881381e-01, -7.26665790375932430e-02),
                C64::new(-1.03618502114038086e-01, 3.87065454068929171e-02),
            ],
        ),
        (
            Topology::Nested,
            [
                C64::new(9.99114192987696770e-01, -2.97493253409262422e-02),
                C64::new(-8.85807012303316418e-04, -2.97493253409260583e-02),
                C64::new(-2.56156147087134245e-01, 7.62722881053812946e-03),
                C64::new(-7.91538836022271930e-02, 2.35686236048641626e-03),
            ],
        ),
    ];
    for (top, want) in rows {
        let s = scatter_single(top, &p, 100.45).unwrap();
        for (got, w) in [s.t4, s.r1, s.e1, s.e2].into_iter().zip(want) {
            close(got, w, 1e-12);
        }
    }
}

/// Printed root table: value and number of printed decimals for each part.
pub const ROOT_TABLE: [(Topology, f64, f64, [(f64, u32, f64, u32); 2]); 6] = [
    (
        Topology::Separate,
        0.5,
        0.25,
        [(101.7, 1, -0.3, 1), (100.3, 1, -1.7, 1)],
    ),
    (
        Topology::Separate,
        0.25,
        0.85,
        [(100.2, 1, -0.08, 2), (101.2, 1, -3.3, 1)],
    ),
    (
        Topology::Braided,
        0.5,
        0.25,
        [(101.7, 1, -0.3, 1), (99.7, 1, -0.3, 1)],
    ),
    (
        Topology::Braided,
        0.25,
        0.85,
        [(100.2, 1, -0.08, 2), (99.2, 1, -0.014, 3)],
    ),
    (
        Topology::Nested,
        0.5,
        0.25,
        [(98.4, 1, -1.4, 1), (101.6, 1, -0.56, 2)],
    ),
    (
        Topology::Nested,
        0.25,
        0.85,
        [(99.0, 1, -0.64, 2), (100.6, 1, -0.013, 3)],
    ),
];

#[test]
fn table_roots() {
    use giantqed::observables::spectral_roots;
    for (top, a, b, roots) in ROOT_TABLE {
        let (r1, r2) = spectral_roots(top, &params(a, b), PhotonPair::degenerate(100.0));
        for (got, (re, dre, im, dim)) in [r1, r2].into_iter().zip(roots) {
            let tre = 0.5 * 10f64.powi(-(dre as i32)) + 1e-12;
            let tim = 0.5 * 10f64.powi(-(dim as i32)) + 1e-12;
            assert!((got.re - re).abs() <= tre, "{top} {a} {b}: {got} vs {re}");
            assert!((got.im - im).abs() <= tim, "{top} {a} {b}: {got} vs {im}");
        }
    }
}
