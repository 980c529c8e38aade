//! Scalar abstraction so the closed forms can be evaluated either in `f64`
//! or in double-double arithmetic (about 31 significant digits).

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::Num;

pub use qd::Quad;

pub trait Real:
    Copy + Num + Neg<Output = Self> + PartialOrd + Debug + Send + Sync + 'static
{
    fn lit(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn pi() -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn lit(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

impl Real for Quad {
    fn lit(x: f64) -> Self {
        Quad::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        self.0 + self.1
    }
    fn pi() -> Self {
        Quad::PI
    }
    fn sin(self) -> Self {
        quad_sin_cos(self).0
    }
    fn cos(self) -> Self {
        quad_sin_cos(self).1
    }
    fn sqrt(self) -> Self {
        Quad::sqrt(self)
    }
}

/// Sine and cosine in double-double: reduce to [−π, π] and sum the Taylor
/// series until terms drop below the working precision.
fn quad_sin_cos(x: Quad) -> (Quad, Quad) {
    let two_pi = Quad::PI * Quad::from_f64(2.0);
    let n = (x.0 / two_pi.0).round();
    let r = x - two_pi * Quad::from_f64(n);
    let r2 = r * r;
    let eps = 1e-34;

    let mut sin = r;
    let mut term = r;
    let mut k = 1.0;
    while term.0.abs() > eps {
        term = -(term * r2) / Quad::from_f64((k + 1.0) * (k + 2.0));
        sin = sin + term;
        k += 2.0;
    }
    let mut cos = Quad::ONE;
    let mut term = Quad::ONE;
    let mut k = 0.0;
    while term.0.abs() > eps {
        term = -(term * r2) / Quad::from_f64((k + 1.0) * (k + 2.0));
        cos = cos + term;
        k += 2.0;
    }
    (sin, cos)
}

/// `e^{iθ}`.
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

pub fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

pub fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Principal square root: non-negative real part, and non-negative imaginary
/// part when the result is purely imaginary.
pub fn principal_sqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = T::lit(2.0);
    let m = (z.re * z.re + z.im * z.im).sqrt();
    let re = ((m + z.re) / two).abs().sqrt();
    let im = ((m - z.re) / two).abs().sqrt();
    if z.im < T::zero() {
        Complex::new(re, -im)
    } else {
        Complex::new(re, im)
    }
}

pub fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn norm<T: Real>(z: Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_branch_on_negative_axis() {
        let s = principal_sqrt(Complex::new(-4.0_f64, 0.0));
        assert_eq!(s, Complex::new(0.0, 2.0));
        let s = principal_sqrt(Complex::new(-4.0_f64, -0.0));
        assert_eq!(s, Complex::new(0.0, 2.0));
    }

    #[test]
    fn principal_branch_positive_real_part() {
        let s = principal_sqrt(Complex::new(3.0_f64, -4.0));
        assert!((s - Complex::new(2.0, -1.0)).norm() < 1e-15);
        let s = principal_sqrt(Complex::new(-3.0_f64, 4.0));
        assert!((s - Complex::new(1.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn quad_division_is_double_double() {
        let third = Quad::lit(1.0) / Quad::lit(3.0);
        let back = third * Quad::lit(3.0) - Quad::lit(1.0);
        assert!(back.to_f64().abs() < 1e-31, "{back:?}");
    }

    #[test]
    fn quad_trig_identities() {
        for x in [0.3, -2.9, 3.1, 100.3, 1e-8, -47.0] {
            let q = Quad::lit(x);
            let (s, c) = (Real::sin(q), Real::cos(q));
            let one = s * s + c * c - Quad::ONE;
            assert!(one.to_f64().abs() < 1e-30, "{x}: {one:?}");
            assert!((s.to_f64() - x.sin()).abs() < 1e-15);
            assert!((c.to_f64() - x.cos()).abs() < 1e-15);
        }
        // sin(π/6) = 1/2 to double-double accuracy.
        let h = Real::sin(Quad::PI / Quad::lit(6.0)) - Quad::lit(0.5);
        assert!(h.to_f64().abs() < 1e-31, "{h:?}");
    }
}
