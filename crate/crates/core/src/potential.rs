//! The explicit family of meromorphic connection 1-forms on the sphere.
//!
//! For a spectral parameter `zeta` and accessory parameters `(A, G)` the
//! 1-form `xi = xi(z) dz` is trace-free with entries
//!
//! ```text
//! xi11 = -(4/3) z^3/(z^4-1) + A/z          xi12 = 1/zeta + B z^2
//! xi21 = G/(z^4-1) + zeta H/(z^2 (z^4-1))  xi22 = -xi11
//! ```
//!
//! where the derived parameters close the apparent-singularity constraints:
//! `H = A + A^2` and `B = -(1/G)(-1/3 + A + (1/3 - A)^2)`. With those in
//! force, the only essential singularities are regular ones at the fourth
//! roots of unity; `z = 0` and `z = infinity` carry trivial local monodromy.
//!
//! Residues are rational functions of the inputs and are computed by exact
//! partial fractions, never by quadrature.

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::Complex;

/// Guard for `|G|` below which the constraint for B degenerates.
pub const G_GUARD: f64 = 1e-12;
/// Hard wall around poles for pointwise evaluation.
pub const POLE_EVAL_GUARD: f64 = 1e-9;

/// Spectral parameter, accessory parameters, and the derived constraint data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub zeta: Complex,
    pub a: Complex,
    pub g: Complex,
    /// Derived: `B = -(1/G)(-1/3 + A + (1/3 - A)^2)`.
    pub b: Complex,
    /// Derived: `H = A + A^2`.
    pub h: Complex,
}

/// Fill the derived parameters from `(zeta, A, G)`.
pub fn close_params(zeta: Complex, a: Complex, g: Complex) -> Result<PotentialParams> {
    for (c, ctx) in [(zeta, "zeta"), (a, "A"), (g, "G")] {
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite { context: ctx });
        }
    }
    if zeta.norm() == 0.0 {
        return Err(Error::ZeroZeta);
    }
    if g.norm() <= G_GUARD {
        return Err(Error::DegenerateG { g_abs: g.norm() });
    }
    let third = Complex::new(1.0 / 3.0, 0.0);
    let h = a + a * a;
    let b = -(g.finv()) * (-third + a + (third - a) * (third - a));
    Ok(PotentialParams { zeta, a, g, b, h })
}

impl PotentialParams {
    pub fn new(zeta: Complex, a: Complex, g: Complex) -> Result<Self> {
        close_params(zeta, a, g)
    }

    /// Re-run the constraint closure on the stored `(zeta, A, G)`.
    pub fn reclose(&self) -> Result<Self> {
        close_params(self.zeta, self.a, self.g)
    }

    /// Override the derived `H` (falsification probes only; the result no
    /// longer satisfies the apparent-singularity constraint at `z = 0`).
    pub fn with_h(mut self, h: Complex) -> Self {
        self.h = h;
        self
    }

    /// Override the derived `B` (falsification probes only).
    pub fn with_b(mut self, b: Complex) -> Self {
        self.b = b;
        self
    }
}

/// The singular points of the family on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPointSet {
    /// Regular singularities: the fourth roots of unity.
    pub regular_singularities: [Complex; 4],
    /// Apparent points: z = 0 and (in the second chart) z = infinity.
    pub apparent_finite: Complex,
    pub apparent_infinity: (),
}

/// The k-th puncture `p_k = i^(k-1)`, `k = 1..4`.
pub fn puncture(k: usize) -> Complex {
    assert!((1..=4).contains(&k), "puncture index must be 1..4");
    match k {
        1 => Complex::new(1.0, 0.0),
        2 => Complex::new(0.0, 1.0),
        3 => Complex::new(-1.0, 0.0),
        _ => Complex::new(0.0, -1.0),
    }
}

pub fn singular_points() -> SingularPointSet {
    SingularPointSet {
        regular_singularities: [puncture(1), puncture(2), puncture(3), puncture(4)],
        apparent_finite: Complex::new(0.0, 0.0),
        apparent_infinity: (),
    }
}

fn pole_guard(z: Complex, poles: &[Complex]) -> Result<()> {
    for p in poles {
        let dist = (z - p).norm();
        if dist <= POLE_EVAL_GUARD {
            return Err(Error::PoleEvaluation {
                pole: format!("{}", p),
                dist,
            });
        }
    }
    Ok(())
}

/// dz-coefficient of the connection form at a finite chart point.
pub fn eval_xi(p: &PotentialParams, z: Complex) -> Result<Mat2> {
    pole_guard(
        z,
        &[
            Complex::new(0.0, 0.0),
            puncture(1),
            puncture(2),
            puncture(3),
            puncture(4),
        ],
    )?;
    let z2 = z * z;
    let denom = z2 * z2 - 1.0;
    let x11 = -(4.0 / 3.0) * z * z2 / denom + p.a / z;
    let x12 = p.zeta.finv() + p.b * z2;
    let x21 = (p.g + p.zeta * p.h / z2) / denom;
    Ok(Mat2::new(x11, x12, x21, -x11))
}

/// dw-coefficient of the pullback under `z = 1/w`: substitute and multiply by
/// `dz/dw = -1/w^2`.
pub fn eval_xi_at_infinity(p: &PotentialParams, w: Complex) -> Result<Mat2> {
    pole_guard(
        w,
        &[
            Complex::new(0.0, 0.0),
            puncture(1),
            puncture(2),
            puncture(3),
            puncture(4),
        ],
    )?;
    let w2 = w * w;
    let w4 = w2 * w2;
    // z^4 - 1 = (1 - w^4)/w^4
    let one_minus_w4 = 1.0 - w4;
    // xi11(1/w) = -(4/3) w/(1-w^4) + A w
    let x11 = -(4.0 / 3.0) * w / one_minus_w4 + p.a * w;
    let x12 = p.zeta.finv() + p.b / w2;
    let x21 = p.g * w4 / one_minus_w4 + p.zeta * p.h * w4 * w2 / one_minus_w4;
    let jac = -(w2.finv());
    Ok(Mat2::new(x11 * jac, x12 * jac, x21 * jac, -x11 * jac))
}

/// Residue matrix at the puncture `p_k`, by exact partial fractions:
/// diagonal `(-1/3, +1/3)`, upper-right zero, lower-left
/// `(G + zeta H / p_k^2) / (4 p_k^3)`.
pub fn residue_matrix(p: &PotentialParams, k: usize) -> Mat2 {
    let pk = puncture(k);
    let pk2 = pk * pk;
    let third = Complex::new(1.0 / 3.0, 0.0);
    let lower = (p.g + p.zeta * p.h / pk2) / (4.0 * pk2 * pk);
    Mat2::new(-third, Complex::new(0.0, 0.0), lower, third)
}

/// Residue matrix at `z = 0`: `diag(A, -A)`.
pub fn residue_at_zero(p: &PotentialParams) -> Mat2 {
    Mat2::diag(p.a, -p.a)
}

/// Residue matrix at `z = infinity` (w-chart): `diag(4/3 - A, A - 4/3)`.
pub fn residue_at_infinity(p: &PotentialParams) -> Mat2 {
    let d = Complex::new(4.0 / 3.0, 0.0) - p.a;
    Mat2::diag(d, -d)
}

/// Frobenius norm of the sum of all residues over the punctures, 0 and
/// infinity. Zero for every rational 1-form; kept as a sanity gauge.
pub fn sum_of_residues_check(p: &PotentialParams) -> f64 {
    let mut sum = residue_at_zero(p) + residue_at_infinity(p);
    for k in 1..=4 {
        sum = sum + residue_matrix(p, k);
    }
    sum.frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn close_params_examples() {
        let p = close_params(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((p.h - c(0.0, 0.0)).norm() < 1e-15);
        assert!((p.b - c(2.0 / 9.0, 0.0)).norm() < 1e-15);

        let p = close_params(c(1.0, 0.0), c(1.0 / 3.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((p.h - c(4.0 / 9.0, 0.0)).norm() < 1e-15);
        assert!(p.b.norm() < 1e-15);

        let p = close_params(c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!(p.h.norm() < 1e-15);
        assert!((p.b - c(-2.0 / 9.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn close_params_guards() {
        assert_eq!(
            close_params(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
            Err(Error::ZeroZeta)
        );
        assert!(matches!(
            close_params(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
            Err(Error::DegenerateG { .. })
        ));
        assert!(matches!(
            close_params(c(f64::NAN, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn constraint_closure_is_idempotent() {
        let p = close_params(c(0.7, 0.2), c(0.3, -0.1), c(1.2, 0.4)).unwrap();
        let q = p.reclose().unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn eval_xi_rational_example() {
        // A = 0, G = 1, zeta = 1 at z = 2
        let p = close_params(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let m = eval_xi(&p, c(2.0, 0.0)).unwrap();
        assert!((m.a11 - c(-32.0 / 45.0, 0.0)).norm() < 1e-15);
        assert!((m.a12 - c(17.0 / 9.0, 0.0)).norm() < 1e-15);
        assert!((m.a21 - c(1.0 / 15.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_xi_trace_free_and_parity() {
        let p = close_params(c(0.9, 0.3), c(0.2, 0.1), c(1.5, -0.4)).unwrap();
        let z = c(2.0, 0.0);
        let m = eval_xi(&p, z).unwrap();
        assert!(m.trace().norm() < 1e-14);
        // each rational entry has definite parity: diagonal odd, off-diagonals even
        let m_neg = eval_xi(&p, -z).unwrap();
        assert!((m_neg.a11 + m.a11).norm() < 1e-14);
        assert!((m_neg.a12 - m.a12).norm() < 1e-14);
        assert!((m_neg.a21 - m.a21).norm() < 1e-14);
    }

    #[test]
    fn eval_xi_pole_guard() {
        let p = close_params(c(1.0, 0.0), c(0.1, 0.0), c(1.0, 0.0)).unwrap();
        assert!(matches!(
            eval_xi(&p, c(1.0, 1e-12)),
            Err(Error::PoleEvaluation { .. })
        ));
        assert!(matches!(
            eval_xi(&p, c(0.0, 0.0)),
            Err(Error::PoleEvaluation { .. })
        ));
    }

    #[test]
    fn infinity_chart_consistency() {
        let p = close_params(c(0.8, -0.1), c(0.25, 0.05), c(0.9, 0.2)).unwrap();
        let z = c(3.0, 0.0);
        let w = z.finv();
        let xi_z = eval_xi(&p, z).unwrap();
        let xi_w = eval_xi_at_infinity(&p, w).unwrap();
        // change of variables: xi(z) = -w^2 xi_w(w)
        let back = xi_w.scale(-(w * w));
        assert!(xi_z.dist(&back) < 1e-12);
        assert!(xi_w.trace().norm() < 1e-12);

        // w = 1/2 corresponds to dz = -4 dw at z = 2
        let p0 = close_params(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let lhs = eval_xi_at_infinity(&p0, c(0.5, 0.0)).unwrap();
        let rhs = eval_xi(&p0, c(2.0, 0.0)).unwrap().scale(c(-4.0, 0.0));
        assert!(lhs.dist(&rhs) < 1e-12);
    }

    #[test]
    fn residue_structure() {
        let p = close_params(c(0.6, 0.7), c(-0.4, 0.3), c(2.0, -1.0)).unwrap();
        for k in 1..=4 {
            let r = residue_matrix(&p, k);
            let (l1, l2) = r.eigenvalues();
            let third = 1.0 / 3.0;
            let mut evs = [l1, l2];
            evs.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
            assert!((evs[0] - c(-third, 0.0)).norm() < 1e-15);
            assert!((evs[1] - c(third, 0.0)).norm() < 1e-15);
            assert_eq!(r.a12, c(0.0, 0.0));
        }
        // A = 0, G = 4: lower-left residue at p1 is exactly 1
        let p = close_params(c(0.3, 0.4), c(0.0, 0.0), c(4.0, 0.0)).unwrap();
        let r = residue_matrix(&p, 1);
        assert!((r.a21 - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn residues_sum_to_zero() {
        let p = close_params(c(0.9, -0.2), c(0.5, 0.5), c(1.1, 0.3)).unwrap();
        assert!(sum_of_residues_check(&p) < 1e-14);
        // the residue theorem does not depend on the apparentness constraint
        let broken = p.with_h(p.h + c(0.37, 0.0));
        assert!(sum_of_residues_check(&broken) < 1e-12);
    }

    #[test]
    fn lower_left_is_quadratic_polynomial() {
        // xi21 * z^2 (z^4 - 1) == G z^2 + zeta H: sample at 7 points, fit by
        // divided differences, check degree <= 2 and the two coefficients.
        let p = close_params(c(0.7, 0.1), c(0.3, -0.2), c(1.4, 0.6)).unwrap();
        let zs: Vec<Complex> = (0..7)
            .map(|k| c(0.4 + 0.31 * k as f64, 0.2 - 0.17 * k as f64))
            .collect();
        let vals: Vec<Complex> = zs
            .iter()
            .map(|&z| {
                let m = eval_xi(&p, z).unwrap();
                let z2 = z * z;
                m.a21 * z2 * (z2 * z2 - 1.0)
            })
            .collect();
        // Newton divided differences
        let mut table = vals.clone();
        let mut coeffs = vec![table[0]];
        for order in 1..zs.len() {
            for i in 0..zs.len() - order {
                table[i] = (table[i + 1] - table[i]) / (zs[i + order] - zs[i]);
            }
            coeffs.push(table[0]);
        }
        for high in &coeffs[3..] {
            assert!(high.norm() < 1e-10, "degree above 2 detected: {}", high);
        }
        // expand the Newton form to monomial coefficients
        let c2 = coeffs[2];
        let c1 = coeffs[1] - coeffs[2] * (zs[0] + zs[1]);
        let c0 = coeffs[0] - coeffs[1] * zs[0] + coeffs[2] * zs[0] * zs[1];
        assert!((c2 - p.g).norm() < 1e-11);
        assert!(c1.norm() < 1e-11);
        assert!((c0 - p.zeta * p.h).norm() < 1e-11);
    }
}
