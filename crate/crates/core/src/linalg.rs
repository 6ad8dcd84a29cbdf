//! Complex 2x2 matrix arithmetic.
//!
//! Everything downstream (monodromies, holonomy words, Hermitian certificates)
//! runs on [`Mat2`]. Entries are `f64`-based complex numbers; exact integer
//! arithmetic lives in [`crate::divisors`]. Matrices tagged "special" (unit
//! determinant) are inverted through the adjugate, which keeps `tr(x^-1) =
//! tr(x)` at rounding level.

use crate::error::{Error, Result};
use crate::Complex;
use std::ops::{Add, Mul, Neg, Sub};

/// Determinant magnitude below which inversion is refused.
pub const SINGULARITY_TOL: f64 = 1e-14;

/// Complex 2x2 matrix, row-major entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a11: Complex,
    pub a12: Complex,
    pub a21: Complex,
    pub a22: Complex,
}

impl Mat2 {
    pub const fn new(a11: Complex, a12: Complex, a21: Complex, a22: Complex) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        Mat2::new(
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
        )
    }

    pub fn zero() -> Self {
        Mat2::new(
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
        )
    }

    pub fn diag(d1: Complex, d2: Complex) -> Self {
        Mat2::new(d1, Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), d2)
    }

    pub fn det(&self) -> Complex {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> Complex {
        self.a11 + self.a22
    }

    /// Adjugate: swap the diagonal, negate the off-diagonal.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.a22, -self.a12, -self.a21, self.a11)
    }

    /// Inverse via adjugate over determinant. For special (unit-determinant)
    /// matrices this is the adjugate up to rounding.
    pub fn inv(&self) -> Result<Mat2> {
        let det = self.det();
        let det_abs = det.norm();
        if det_abs <= SINGULARITY_TOL {
            return Err(Error::SingularMatrix { det_abs });
        }
        Ok(self.adjugate().scale(det.finv()))
    }

    pub fn scale(&self, s: Complex) -> Mat2 {
        Mat2::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Mat2 {
        Mat2::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr())
            .sqrt()
    }

    /// Frobenius distance to another matrix.
    pub fn dist(&self, other: &Mat2) -> f64 {
        (*self - *other).frobenius_norm()
    }

    /// Small non-negative integer power by repeated multiplication.
    pub fn pow(&self, n: u32) -> Mat2 {
        let mut acc = Mat2::identity();
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }

    /// Eigenvalues from the closed-form quadratic.
    pub fn eigenvalues(&self) -> (Complex, Complex) {
        let t = self.trace();
        let disc = (t * t - 4.0 * self.det()).sqrt();
        ((t + disc) / 2.0, (t - disc) / 2.0)
    }

    pub fn is_finite(&self) -> bool {
        [self.a11, self.a12, self.a21, self.a22]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `|det - 1|`, the unimodularity defect.
    pub fn special_defect(&self) -> f64 {
        (self.det() - Complex::new(1.0, 0.0)).norm()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * rhs.a11 + self.a12 * rhs.a21,
            self.a11 * rhs.a12 + self.a12 * rhs.a22,
            self.a21 * rhs.a11 + self.a22 * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 + rhs.a11,
            self.a12 + rhs.a12,
            self.a21 + rhs.a21,
            self.a22 + rhs.a22,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 - rhs.a11,
            self.a12 - rhs.a12,
            self.a21 - rhs.a21,
            self.a22 - rhs.a22,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(Complex::new(-1.0, 0.0))
    }
}

/// Apply a matrix to a column vector.
pub fn apply(m: &Mat2, v: (Complex, Complex)) -> (Complex, Complex) {
    (m.a11 * v.0 + m.a12 * v.1, m.a21 * v.0 + m.a22 * v.1)
}

/// `|tr x - tr y|`.
pub fn trace_dist(x: &Mat2, y: &Mat2) -> f64 {
    (x.trace() - y.trace()).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn identity_is_neutral() {
        let m = Mat2::new(c(1.0, 2.0), c(-0.5, 0.1), c(0.3, 0.0), c(2.0, -1.0));
        assert_eq!(Mat2::identity() * m, m);
        assert_eq!(m * Mat2::identity(), m);
    }

    #[test]
    fn diag_i_squared_is_minus_identity() {
        let d = Mat2::diag(c(0.0, 1.0), c(0.0, -1.0));
        let sq = d * d;
        assert!(sq.dist(&-Mat2::identity()) < 1e-15);
    }

    #[test]
    fn diagonal_inverse() {
        let d = Mat2::diag(c(2.0, 0.0), c(0.5, 0.0));
        let inv = d.inv().unwrap();
        assert!(inv.dist(&Mat2::diag(c(0.5, 0.0), c(2.0, 0.0))) < 1e-15);
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = Mat2::new(c(1.0, 0.0), c(2.0, 0.0), c(0.5, 0.0), c(1.0, 0.0));
        assert!(matches!(m.inv(), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn trace_dist_basics() {
        let m = Mat2::new(c(1.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0));
        assert_eq!(trace_dist(&m, &m), 0.0);
        assert!((trace_dist(&Mat2::identity(), &-Mat2::identity()) - 4.0).abs() < 1e-15);
    }
}
