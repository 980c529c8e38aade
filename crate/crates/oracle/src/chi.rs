use giantqed::Channel;

use crate::model::{LindbladModel, Op};
use crate::steady::SteadyState;

/// χ = ⟨b†²b²⟩ − ⟨b†b⟩² split by powers of β into I₀ + I₁ + I₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiDecomposition {
    pub chi: f64,
    pub i0: f64,
    pub i1: f64,
    pub i2: f64,
}

pub fn chi_numeric(model: &LindbladModel, ss: &SteadyState, channel: Channel) -> ChiDecomposition {
    let b = model.output_operator(channel);
    let beta = ss.expect(&b);
    let z = b - Op::identity() * beta;
    let zd = z.adjoint();
    let n = ss.expect(&(zd * z)).re;
    let zz = ss.expect(&(z * z));
    let i0 = ss.expect(&(zd * zd * z * z)).re - n * n;
    let i1 = 4.0 * (beta.conj() * ss.expect(&(zd * z * z))).re;
    let i2 = 2.0 * beta.norm_sqr() * n + 2.0 * (beta.conj() * beta.conj() * zz).re;
    ChiDecomposition {
        chi: i0 + i1 + i2,
        i0,
        i1,
        i2,
    }
}
