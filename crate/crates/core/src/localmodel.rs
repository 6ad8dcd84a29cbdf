//! Local zero-curvature model of a minimal surface in the 3-sphere.
//!
//! Chart data is a conformal factor exponent `u` (metric `e^{2u} |dz|^2`) and
//! a Hopf coefficient `q` sampled on a rectangular grid. In the special
//! unitary frame the family of connection forms is
//!
//! ```text
//! alpha_dz    = [ -u_z/2           zeta^{-1} e^u ]     alpha_dzbar = [  u_zbar/2            -(i/2) e^{-u} conj(q) ]
//!               [ -(i/2) e^{-u} q   u_z/2        ]                   [ -zeta e^u             -u_zbar/2            ]
//! ```
//!
//! using the convention `*dz = -i dz`, `*dzbar = i dzbar` for the Hodge star
//! on 1-forms (so `(1/2) i * du` contributes `+u_z/2 dz - u_zbar/2 dzbar` to
//! the spin-connection diagonal). The sign choice is pinned by the unitarity
//! invariant: on `|zeta| = 1` the assembled form must satisfy
//! `alpha_dzbar = -(alpha_dz)^dagger` entrywise.
//!
//! Derivatives are central differences; the flatness defect measures the
//! `dz ^ dzbar` coefficient of `d alpha + alpha ^ alpha` on interior nodes.

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::Complex;

/// Rectangular sample grid with spacing `h`: node `(ix, iy)` sits at
/// `origin + h (ix + i iy)`.
#[derive(Debug, Clone)]
pub struct ChartData {
    pub origin: Complex,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    u: Vec<f64>,
    q: Vec<Complex>,
}

impl ChartData {
    pub fn from_fns(
        origin: Complex,
        h: f64,
        nx: usize,
        ny: usize,
        u_fn: impl Fn(Complex) -> f64,
        q_fn: impl Fn(Complex) -> Complex,
    ) -> Result<ChartData> {
        if !(1e-4..=0.5).contains(&h) {
            return Err(Error::InvalidArgument(format!(
                "grid spacing {h} outside [1e-4, 0.5]"
            )));
        }
        let mut u = Vec::with_capacity(nx * ny);
        let mut q = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                let z = origin + Complex::new(h * ix as f64, h * iy as f64);
                let uv = u_fn(z);
                let qv = q_fn(z);
                if !uv.is_finite() || !qv.re.is_finite() || !qv.im.is_finite() {
                    return Err(Error::NonFinite {
                        context: "chart data sample",
                    });
                }
                u.push(uv);
                q.push(qv);
            }
        }
        Ok(ChartData {
            origin,
            h,
            nx,
            ny,
            u,
            q,
        })
    }

    /// Constant data on an `n x n` grid centred at the origin.
    pub fn constant(u0: f64, q0: Complex, n: usize, h: f64) -> Result<ChartData> {
        let half = 0.5 * h * (n as f64 - 1.0);
        ChartData::from_fns(
            Complex::new(-half, -half),
            h,
            n,
            n,
            |_| u0,
            |_| q0,
        )
    }

    pub fn z_at(&self, ix: usize, iy: usize) -> Complex {
        self.origin + Complex::new(self.h * ix as f64, self.h * iy as f64)
    }

    pub fn u_at(&self, ix: usize, iy: usize) -> f64 {
        self.u[ix + self.nx * iy]
    }

    pub fn q_at(&self, ix: usize, iy: usize) -> Complex {
        self.q[ix + self.nx * iy]
    }

    /// `u_z` by central differences at an interior node.
    fn u_z(&self, ix: usize, iy: usize) -> Complex {
        let dx = (self.u_at(ix + 1, iy) - self.u_at(ix - 1, iy)) / (2.0 * self.h);
        let dy = (self.u_at(ix, iy + 1) - self.u_at(ix, iy - 1)) / (2.0 * self.h);
        Complex::new(dx, -dy) * 0.5
    }

    fn q_dzbar(&self, ix: usize, iy: usize) -> Complex {
        let dx = (self.q_at(ix + 1, iy) - self.q_at(ix - 1, iy)) / (2.0 * self.h);
        let dy = (self.q_at(ix, iy + 1) - self.q_at(ix, iy - 1)) / (2.0 * self.h);
        (dx + Complex::new(0.0, 1.0) * dy) * 0.5
    }
}

/// The two coefficient matrices of the connection form at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionFormSample {
    pub alpha_dz: Mat2,
    pub alpha_dzbar: Mat2,
}

/// Connection form samples on the interior nodes (margin 1) of a chart grid.
#[derive(Debug, Clone)]
pub struct ConnectionField {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    samples: Vec<ConnectionFormSample>,
}

impl ConnectionField {
    pub fn sample(&self, ix: usize, iy: usize) -> &ConnectionFormSample {
        &self.samples[ix + self.nx * iy]
    }
}

fn sample_at(data: &ChartData, zeta: Complex, ix: usize, iy: usize) -> ConnectionFormSample {
    let u = data.u_at(ix, iy);
    let q = data.q_at(ix, iy);
    let u_z = data.u_z(ix, iy);
    let u_zbar = u_z.conj();
    let eu = u.exp();
    let emu = (-u).exp();
    let half_i = Complex::new(0.0, 0.5);
    let alpha_dz = Mat2::new(-u_z * 0.5, zeta.finv() * eu, -half_i * emu * q, u_z * 0.5);
    let alpha_dzbar = Mat2::new(
        u_zbar * 0.5,
        -half_i * emu * q.conj(),
        Complex::new(-eu, 0.0) * zeta,
        -u_zbar * 0.5,
    );
    ConnectionFormSample {
        alpha_dz,
        alpha_dzbar,
    }
}

/// Assemble the family on the interior nodes of the grid.
pub fn assemble_family(data: &ChartData, zeta: Complex) -> Result<ConnectionField> {
    if zeta.norm() == 0.0 {
        return Err(Error::ZeroZeta);
    }
    if data.nx < 3 || data.ny < 3 {
        return Err(Error::GridTooSmall {
            need: 3,
            got_x: data.nx,
            got_y: data.ny,
        });
    }
    let nx = data.nx - 2;
    let ny = data.ny - 2;
    let mut samples = Vec::with_capacity(nx * ny);
    for iy in 1..data.ny - 1 {
        for ix in 1..data.nx - 1 {
            samples.push(sample_at(data, zeta, ix, iy));
        }
    }
    Ok(ConnectionField {
        nx,
        ny,
        h: data.h,
        samples,
    })
}

/// The `dz ^ dzbar` coefficient of `d alpha + alpha ^ alpha` on the margin-2
/// interior nodes, by central differences of the assembled field.
pub fn flatness_field(data: &ChartData, zeta: Complex) -> Result<Vec<Vec<Mat2>>> {
    if data.nx < 5 || data.ny < 5 {
        return Err(Error::GridTooSmall {
            need: 5,
            got_x: data.nx,
            got_y: data.ny,
        });
    }
    let field = assemble_family(data, zeta)?;
    let h = data.h;
    let mut rows = Vec::new();
    for iy in 1..field.ny - 1 {
        let mut row = Vec::new();
        for ix in 1..field.nx - 1 {
            let p_e = field.sample(ix + 1, iy).alpha_dz;
            let p_w = field.sample(ix - 1, iy).alpha_dz;
            let p_n = field.sample(ix, iy + 1).alpha_dz;
            let p_s = field.sample(ix, iy - 1).alpha_dz;
            let q_e = field.sample(ix + 1, iy).alpha_dzbar;
            let q_w = field.sample(ix - 1, iy).alpha_dzbar;
            let q_n = field.sample(ix, iy + 1).alpha_dzbar;
            let q_s = field.sample(ix, iy - 1).alpha_dzbar;
            let inv2h = 1.0 / (2.0 * h);
            let ddx_q = (q_e - q_w).scale(Complex::new(inv2h, 0.0));
            let ddy_q = (q_n - q_s).scale(Complex::new(inv2h, 0.0));
            let ddx_p = (p_e - p_w).scale(Complex::new(inv2h, 0.0));
            let ddy_p = (p_n - p_s).scale(Complex::new(inv2h, 0.0));
            // d_z Q = (d_x - i d_y)/2, d_zbar P = (d_x + i d_y)/2
            let dz_q = (ddx_q - ddy_q.scale(Complex::new(0.0, 1.0))).scale(Complex::new(0.5, 0.0));
            let dzbar_p =
                (ddx_p + ddy_p.scale(Complex::new(0.0, 1.0))).scale(Complex::new(0.5, 0.0));
            let p0 = field.sample(ix, iy).alpha_dz;
            let q0 = field.sample(ix, iy).alpha_dzbar;
            let comm = p0 * q0 - q0 * p0;
            row.push(dz_q - dzbar_p + comm);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Max Frobenius norm of the flatness 2-form over the measurable nodes.
pub fn flatness_defect(data: &ChartData, zeta: Complex) -> Result<f64> {
    let field = flatness_field(data, zeta)?;
    Ok(field
        .iter()
        .flatten()
        .map(|m| m.frobenius_norm())
        .fold(0.0, f64::max))
}

/// Max `|dq/dzbar|` over interior nodes: the Cauchy-Riemann defect of the
/// Hopf coefficient.
pub fn holomorphy_defect(data: &ChartData) -> Result<f64> {
    if data.nx < 3 || data.ny < 3 {
        return Err(Error::GridTooSmall {
            need: 3,
            got_x: data.nx,
            got_y: data.ny,
        });
    }
    let mut max = 0.0f64;
    for iy in 1..data.ny - 1 {
        for ix in 1..data.nx - 1 {
            max = max.max(data.q_dzbar(ix, iy).norm());
        }
    }
    Ok(max)
}

/// Max entrywise defect of `alpha_dzbar + (alpha_dz)^dagger` over interior
/// nodes. Vanishes on `|zeta| = 1` (anti-Hermitian total form).
pub fn unitarity_defect(data: &ChartData, zeta: Complex) -> Result<f64> {
    let field = assemble_family(data, zeta)?;
    let mut max = 0.0f64;
    for s in &field.samples {
        max = max.max((s.alpha_dzbar + s.alpha_dz.dagger()).frobenius_norm());
    }
    Ok(max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn clifford_data_is_flat_on_the_circle() {
        let data = ChartData::constant(0.0, c(2.0, 0.0), 16, 0.05).unwrap();
        for zeta in [c(1.0, 0.0), Complex::from_polar(1.0, 1.1)] {
            let d = flatness_defect(&data, zeta).unwrap();
            assert!(d < 1e-10, "zeta={zeta}: defect {d:.3e}");
        }
        let d1 = flatness_defect(&data, Complex::from_polar(1.0, 0.4)).unwrap();
        let d2 = flatness_defect(&data, Complex::from_polar(1.0, 2.9)).unwrap();
        assert!((d1 - d2).abs() < 1e-12);
        // general Clifford-type data: |q| = 2 e^{2u}
        let data = ChartData::constant(0.3, Complex::from_polar(2.0 * 0.6f64.exp(), 0.7), 12, 0.05)
            .unwrap();
        let d = flatness_defect(&data, Complex::from_polar(1.0, 0.3)).unwrap();
        assert!(d < 1e-10, "defect {d:.3e}");
    }

    #[test]
    fn missing_hopf_term_is_detected() {
        let data = ChartData::constant(0.0, c(0.0, 0.0), 12, 0.05).unwrap();
        let d = flatness_defect(&data, c(1.0, 0.0)).unwrap();
        assert!(d > 0.5, "defect {d:.3e}");
        // 2-form is diag(-1, 1) when the Hopf term drops: Frobenius sqrt(2)
        assert!((d - 2.0f64.sqrt()).abs() < 1e-10, "defect {d:.3e}");
    }

    #[test]
    fn diagonal_vanishes_for_flat_metric() {
        let data = ChartData::constant(0.0, c(1.0, 2.0), 8, 0.05).unwrap();
        let field = assemble_family(&data, c(0.5, 0.2)).unwrap();
        let s = field.sample(2, 3);
        assert_eq!(s.alpha_dz.a11, c(0.0, 0.0));
        assert_eq!(s.alpha_dzbar.a11, c(0.0, 0.0));
    }

    #[test]
    fn higgs_block_is_nilpotent() {
        // alpha(zeta) = alpha0 + zeta^{-1} Phi - zeta Phi*: extract the
        // zeta^{-1} block from two evaluations and check det = 0
        let data = ChartData::from_fns(
            c(-0.3, -0.3),
            0.1,
            8,
            8,
            |z| 0.2 * z.re + 0.1 * z.im * z.im,
            |z| z * z + c(0.5, 0.3),
        )
        .unwrap();
        let f1 = assemble_family(&data, c(1.0, 0.0)).unwrap();
        let f2 = assemble_family(&data, c(0.5, 0.0)).unwrap();
        let f3 = assemble_family(&data, c(3.0, 0.0)).unwrap();
        for iy in 0..f1.ny {
            for ix in 0..f1.nx {
                // dz part is affine in zeta^{-1}: alpha(1/2) - alpha(1) = (2 - 1) Phi
                let higgs = f2.sample(ix, iy).alpha_dz - f1.sample(ix, iy).alpha_dz;
                assert!(higgs.det().norm() < 1e-14);
                // dzbar part is affine in zeta with slope D = -Phi*:
                // D = (alpha(1) - alpha(1/2)) / (1 - 1/2)
                let slope = (f1.sample(ix, iy).alpha_dzbar - f2.sample(ix, iy).alpha_dzbar)
                    .scale(c(2.0, 0.0));
                assert!(slope.det().norm() < 1e-14);
                // affine consistency at a third value:
                // alpha(3) = alpha(1) + (1/3 - 1) Phi (dz part), + (3 - 1) D (dzbar part)
                let predicted_dz = f1.sample(ix, iy).alpha_dz + higgs.scale(c(1.0 / 3.0 - 1.0, 0.0));
                assert!(predicted_dz.dist(&f3.sample(ix, iy).alpha_dz) < 1e-12);
                let predicted_dzbar =
                    f1.sample(ix, iy).alpha_dzbar + slope.scale(c(2.0, 0.0));
                assert!(predicted_dzbar.dist(&f3.sample(ix, iy).alpha_dzbar) < 1e-12);
            }
        }
    }

    #[test]
    fn holomorphy_examples() {
        let data = ChartData::constant(0.0, c(1.5, -0.5), 8, 0.01).unwrap();
        assert_eq!(holomorphy_defect(&data).unwrap(), 0.0);

        let data = ChartData::from_fns(c(0.1, 0.1), 1e-3, 7, 7, |_| 0.0, |z| z * z).unwrap();
        assert!(holomorphy_defect(&data).unwrap() < 1e-8);

        let data = ChartData::from_fns(c(0.1, 0.1), 1e-3, 7, 7, |_| 0.0, |z| z.conj()).unwrap();
        let d = holomorphy_defect(&data).unwrap();
        assert!((d - 1.0).abs() < 1e-10, "dbar zbar = 1, got {d:.3e}");
    }

    #[test]
    fn unitarity_on_the_circle() {
        let data = ChartData::from_fns(
            c(-0.2, -0.2),
            0.05,
            9,
            9,
            |z| 0.3 * (z.re * 1.7).sin() * (z.im * 0.9).cos(),
            |z| z * z - c(0.2, 0.1) * z + c(0.4, -0.3),
        )
        .unwrap();
        let d = unitarity_defect(&data, Complex::from_polar(1.0, 0.83)).unwrap();
        assert!(d < 1e-12, "defect {d:.3e}");
        // off the circle the identity must fail
        let d_off = unitarity_defect(&data, c(0.5, 0.0)).unwrap();
        assert!(d_off > 0.1);
    }

    #[test]
    fn grid_too_small_rejected() {
        let data = ChartData::constant(0.0, c(2.0, 0.0), 4, 0.05).unwrap();
        assert!(matches!(
            flatness_defect(&data, c(1.0, 0.0)),
            Err(Error::GridTooSmall { .. })
        ));
        let tiny = ChartData::constant(0.0, c(2.0, 0.0), 2, 0.05).unwrap();
        assert!(matches!(
            holomorphy_defect(&tiny),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn flatness_truncation_is_second_order() {
        // smooth data with exact-derivative oracle at the centre node:
        // the finite-difference flatness converges at O(h^2)
        let u_fn = |z: Complex| 0.4 * (z.re).sin() * (z.im).cos();
        let q_fn = |z: Complex| z * z + c(0.3, 0.2);
        // exact F at z0 using closed-form derivatives
        let exact_f = |z: Complex, zeta: Complex| -> Mat2 {
            let u = u_fn(z);
            let ux = 0.4 * z.re.cos() * z.im.cos();
            let uy = -0.4 * z.re.sin() * z.im.sin();
            let uxx = -0.4 * z.re.sin() * z.im.cos();
            let uyy = -0.4 * z.re.sin() * z.im.cos();
            let u_z = c(ux, -uy) * 0.5;
            let u_zbar = u_z.conj();
            // u_{z zbar} = (uxx + uyy)/4, real
            let u_zzbar = c((uxx + uyy) / 4.0, 0.0);
            let q = q_fn(z);
            let eu = u.exp();
            let emu = (-u).exp();
            let half_i = c(0.0, 0.5);
            // d_z Q entries (Q = alpha_dzbar); d_z conj(q) = 0 for holomorphic q
            let dz_q = Mat2::new(
                u_zzbar * 0.5,
                -half_i * emu * (-u_z) * q.conj(),
                -zeta * eu * u_z,
                -u_zzbar * 0.5,
            );
            // d_zbar P entries (P = alpha_dz); dbar q = 0, dbar(u_z) = u_{z zbar}
            let dzbar_p = Mat2::new(
                -u_zzbar * 0.5,
                zeta.finv() * eu * u_zbar,
                -half_i * emu * (-u_zbar * q),
                u_zzbar * 0.5,
            );
            let p0 = Mat2::new(-u_z * 0.5, zeta.finv() * eu, -half_i * emu * q, u_z * 0.5);
            let q0 = Mat2::new(
                u_zbar * 0.5,
                -half_i * emu * q.conj(),
                c(-eu, 0.0) * zeta,
                -u_zbar * 0.5,
            );
            dz_q - dzbar_p + (p0 * q0 - q0 * p0)
        };
        let zeta = Complex::from_polar(1.0, 0.37);
        let z0 = c(0.15, -0.1);
        let mut errs = Vec::new();
        for h in [0.02, 0.01] {
            // 5x5 grid centred at z0: the single measurable node is z0
            let origin = z0 - c(2.0 * h, 2.0 * h);
            let data = ChartData::from_fns(origin, h, 5, 5, u_fn, q_fn).unwrap();
            let f = flatness_field(&data, zeta).unwrap();
            errs.push(f[0][0].dist(&exact_f(z0, zeta)));
        }
        let ratio = errs[0] / errs[1];
        assert!(
            (3.0..5.5).contains(&ratio),
            "expected O(h^2) ratio near 4, got {ratio:.2} (errors {errs:?})"
        );
    }
}
