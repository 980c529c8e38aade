//! Superoperators on column-stacked 4×4 density matrices.

use nalgebra::SMatrix;

use crate::model::{sigma1, sigma2, LindbladModel, Op};
use crate::C64;

pub type Super = SMatrix<C64, 16, 16>;
pub type Vec16 = nalgebra::SVector<C64, 16>;

/// vec(AX) = (I ⊗ A) vec(X).
pub fn spre(a: &Op) -> Super {
    Op::identity().kronecker(a)
}

/// vec(XA) = (Aᵀ ⊗ I) vec(X).
pub fn spost(a: &Op) -> Super {
    a.transpose().kronecker(&Op::identity())
}

pub fn vectorize(x: &Op) -> Vec16 {
    Vec16::from_column_slice(x.as_slice())
}

pub fn unvectorize(v: &Vec16) -> Op {
    Op::from_column_slice(v.as_slice())
}

/// r·(a ρ b† − ½{b†a, ρ}).
fn dissipator(a: &Op, b: &Op, rate: f64) -> Super {
    let bd = b.adjoint();
    let bda = bd * a;
    (spre(a) * spost(&bd) - (spre(&bda) + spost(&bda)) * C64::from(0.5)) * C64::from(rate)
}

pub fn liouvillian(model: &LindbladModel) -> Super {
    let h = model.hamiltonian();
    let (s1, s2) = (sigma1(), sigma2());
    (spre(&h) - spost(&h)) * C64::new(0.0, -1.0)
        + dissipator(&s1, &s1, model.gamma1)
        + dissipator(&s2, &s2, model.gamma2)
        + dissipator(&s1, &s2, model.gamma12)
        + dissipator(&s2, &s1, model.gamma12)
}
