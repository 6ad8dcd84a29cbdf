//! Surface-level holonomy assembly, unitarizability detection, and
//! accessory-parameter exploration.
//!
//! The four surface holonomies are words in the puncture generators
//! (`A1 = H2 H1` and companions, with the `H^{-2} = H` shortcut from
//! `H^3 = Id` cross-checked at assembly time). Unitarizability of a tuple is
//! decided by a two-stage criterion: a fast trace filter (real, in `[-2, 2]`)
//! followed by the authoritative Hermitian-form certificate: solve
//! `H_k^dagger P H_k = P` in the least-squares sense over Hermitian `P`,
//! normalize `tr P = 2`, and demand positive definiteness. Reducible tuples
//! are flagged `Borderline`, never `Yes`/`No`.

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::monodromy::{self, ToleranceBudget};
use crate::potential;
use crate::{par, Complex};

/// Residual threshold for the invariant-form certificate.
pub const CERT_RESIDUAL_TOL: f64 = 1e-6;
/// Positive-definiteness margin for the normalized form.
pub const CERT_EIGEN_TOL: f64 = 1e-6;
/// Relative singular-value threshold for the rank decision.
pub const RANK_THRESHOLD: f64 = 1e-4;
/// Exclusion radius around `zeta = +/-1` in circle scans.
pub const CIRCLE_EXCLUSION: f64 = 1e-3;
/// `|G|` guard during Newton iteration.
pub const NEWTON_G_GUARD: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Small real linear algebra (4x4), self-contained and deterministic
// ---------------------------------------------------------------------------

/// One-sided Jacobi SVD of a tall real matrix with four columns: singular
/// values descending, right singular vectors as matching columns. Works at
/// full precision (no normal-equations squaring), which keeps the certificate
/// residual of an exactly invariant tuple at rounding level.
fn jacobi_svd4(rows: &[[f64; 4]]) -> ([f64; 4], [[f64; 4]; 4]) {
    let m = rows.len();
    let mut cols: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; m]);
    for (r, row) in rows.iter().enumerate() {
        for c in 0..4 {
            cols[c][r] = row[c];
        }
    }
    let mut v = [[0.0f64; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..4 {
            for j in i + 1..4 {
                let mut a = 0.0f64;
                let mut b = 0.0f64;
                let mut d = 0.0f64;
                for r in 0..m {
                    a += cols[i][r] * cols[i][r];
                    b += cols[j][r] * cols[j][r];
                    d += cols[i][r] * cols[j][r];
                }
                if d.abs() <= 1e-300 + 1e-16 * (a * b).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (b - a) / (2.0 * d);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                for r in 0..m {
                    let ci = cols[i][r];
                    let cj = cols[j][r];
                    cols[i][r] = cth * ci - sth * cj;
                    cols[j][r] = sth * ci + cth * cj;
                }
                for row in v.iter_mut() {
                    let vi = row[i];
                    let vj = row[j];
                    row[i] = cth * vi - sth * vj;
                    row[j] = sth * vi + cth * vj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(f64, usize)> = (0..4)
        .map(|c| (cols[c].iter().map(|x| x * x).sum::<f64>().sqrt(), c))
        .collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let mut s = [0.0f64; 4];
    let mut vs = [[0.0f64; 4]; 4];
    for (k, (val, c)) in order.iter().enumerate() {
        s[k] = *val;
        for r in 0..4 {
            vs[r][k] = v[r][*c];
        }
    }
    (s, vs)
}

/// Gaussian elimination with partial pivoting. `None` on a vanishing pivot.
fn gauss_solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let mut piv = col;
        for row in col + 1..4 {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 4];
    for col in (0..4).rev() {
        let mut acc = b[col];
        for k in col + 1..4 {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

fn norm4(x: &[f64; 4]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Singular values (descending) of a real 4x4 matrix.
fn singular_values4(j: &[[f64; 4]; 4]) -> [f64; 4] {
    jacobi_svd4(j.as_slice()).0
}

// ---------------------------------------------------------------------------
// Surface holonomy
// ---------------------------------------------------------------------------

/// Holonomies along the four closed surface polygons through the base
/// Weierstrass point, assembled from the puncture generators.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceHolonomy {
    pub a1: Mat2,
    pub a2: Mat2,
    pub a3: Mat2,
    pub a4: Mat2,
    /// Max distance between the `H^{-2}`-form and the `H`-form of each word.
    pub assembly_defect: f64,
}

impl SurfaceHolonomy {
    pub fn traces(&self) -> [Complex; 4] {
        [
            self.a1.trace(),
            self.a2.trace(),
            self.a3.trace(),
            self.a4.trace(),
        ]
    }

    /// Words of the polygon basis of the surface fundamental group:
    /// `(a1, b1, a2, b2) = (A4^{-1} A1, A2, A3, A2)`.
    pub fn canonical_words(&self) -> Result<[Mat2; 4]> {
        let a4_inv = self.a4.inv()?;
        Ok([a4_inv * self.a1, self.a2, self.a3, self.a2])
    }
}

/// Assemble the surface holonomies from the four puncture generators.
/// Both word forms are computed; their disagreement is reported as the
/// assembly defect.
pub fn surface_holonomy(h: &[Mat2; 4]) -> Result<SurfaceHolonomy> {
    for (i, m) in h.iter().enumerate() {
        let defect = m.special_defect();
        if defect > 1e-6 {
            return Err(Error::NonUnimodular { index: i, defect });
        }
    }
    // H3 never enters: the composite relation determines it from the others
    let [h1, h2, _h3, h4] = *h;
    let h1sq = h1 * h1;
    let a1 = h2 * h1;
    let a2 = h4 * h1;
    let a3 = h4 * h4 * h1sq;
    let a4 = h2 * h2 * h1sq;
    // alternate forms through the inverse powers
    let a1_alt = (h2 * h2).inv()? * h1;
    let a2_alt = (h4 * h4).inv()? * h1;
    let a3_alt = h4.inv()? * h1sq;
    let a4_alt = h2.inv()? * h1sq;
    let assembly_defect = [
        a1.dist(&a1_alt),
        a2.dist(&a2_alt),
        a3.dist(&a3_alt),
        a4.dist(&a4_alt),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    Ok(SurfaceHolonomy {
        a1,
        a2,
        a3,
        a4,
        assembly_defect,
    })
}

// ---------------------------------------------------------------------------
// Unitarizability
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Borderline,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "Yes",
            Verdict::No => "No",
            Verdict::Borderline => "Borderline",
        })
    }
}

/// Hermitian 2x2 form `[[p11, p12], [conj(p12), p22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianForm {
    pub p11: f64,
    pub p22: f64,
    pub p12: Complex,
}

impl HermitianForm {
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(
            Complex::new(self.p11, 0.0),
            self.p12,
            self.p12.conj(),
            Complex::new(self.p22, 0.0),
        )
    }

    /// Real eigenvalues, ascending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let t = self.p11 + self.p22;
        let gap = ((self.p11 - self.p22).powi(2) + 4.0 * self.p12.norm_sqr()).sqrt();
        ((t - gap) / 2.0, (t + gap) / 2.0)
    }

    pub fn is_positive_definite(&self, margin: f64) -> bool {
        self.eigenvalues().0 > margin
    }

    fn from_coords(x: &[f64; 4]) -> HermitianForm {
        HermitianForm {
            p11: x[0],
            p22: x[1],
            p12: Complex::new(x[2], x[3]),
        }
    }

    fn scaled(&self, s: f64) -> HermitianForm {
        HermitianForm {
            p11: self.p11 * s,
            p22: self.p22 * s,
            p12: self.p12 * s,
        }
    }
}

/// The linear action `P -> H^dagger P H - P` in Hermitian coordinates
/// `(p11, p22, Re p12, Im p12)`.
fn invariance_block(h: &Mat2) -> [[f64; 4]; 4] {
    let hd = h.dagger();
    let mut out = [[0.0f64; 4]; 4];
    for i in 0..4 {
        let mut basis = [0.0f64; 4];
        basis[i] = 1.0;
        let p = HermitianForm::from_coords(&basis).matrix();
        let e = hd * p * *h - p;
        let col = [e.a11.re, e.a22.re, e.a12.re, e.a12.im];
        for r in 0..4 {
            out[r][i] = col[r];
        }
    }
    out
}

/// Least-squares invariant Hermitian form for the whole tuple: smallest
/// singular pair of the stacked invariance system.
fn invariant_form(mats: &[Mat2]) -> (f64, HermitianForm) {
    let mut rows: Vec<[f64; 4]> = Vec::with_capacity(4 * mats.len());
    for h in mats {
        rows.extend_from_slice(&invariance_block(h));
    }
    let (s, v) = jacobi_svd4(&rows);
    let x = [v[0][3], v[1][3], v[2][3], v[3][3]];
    (s[3], HermitianForm::from_coords(&x))
}

fn is_central(m: &Mat2) -> bool {
    let half_tr = m.trace() * 0.5;
    let scale = m.frobenius_norm().max(1.0);
    (*m - Mat2::diag(half_tr, half_tr)).frobenius_norm() < 1e-10 * scale
}

fn eigenvectors2(m: &Mat2) -> Vec<(Complex, Complex)> {
    let (l1, l2) = m.eigenvalues();
    let mut out = Vec::new();
    for l in [l1, l2] {
        let v1 = (m.a12, l - m.a11);
        let v2 = (l - m.a22, m.a21);
        let n1 = v1.0.norm_sqr() + v1.1.norm_sqr();
        let n2 = v2.0.norm_sqr() + v2.1.norm_sqr();
        let v = if n1 >= n2 { v1 } else { v2 };
        let n = (v.0.norm_sqr() + v.1.norm_sqr()).sqrt();
        if n > 1e-14 {
            out.push((v.0 / n, v.1 / n));
        }
    }
    out
}

/// True when all matrices share an eigenvector (within 1e-8, scaled).
fn is_reducible(mats: &[Mat2]) -> bool {
    let Some(anchor) = mats.iter().find(|m| !is_central(m)) else {
        // every generator is scalar: trivially reducible
        return true;
    };
    'candidates: for v in eigenvectors2(anchor) {
        for m in mats {
            let mv = crate::linalg::apply(m, v);
            let lambda = v.0.conj() * mv.0 + v.1.conj() * mv.1;
            let r0 = mv.0 - lambda * v.0;
            let r1 = mv.1 - lambda * v.1;
            let res = (r0.norm_sqr() + r1.norm_sqr()).sqrt();
            if res > 1e-8 * m.frobenius_norm().max(1.0) {
                continue 'candidates;
            }
        }
        return true;
    }
    false
}

/// Unitarizability of a tuple of special matrices.
///
/// Fast filter: every generator and pairwise-product trace must be real
/// (within 1e-6) and lie in `[-2, 2]`. Certificate: the least-squares
/// invariant Hermitian form, normalized to `tr P = 2`; verdict `Yes` needs
/// residual `< 1e-6` and minimum eigenvalue `> 1e-6`. Reducible tuples are
/// `Borderline` by policy. The defect is always the certificate residual.
pub fn unitarizability(mats: &[Mat2]) -> Result<(Verdict, HermitianForm, f64)> {
    if mats.is_empty() {
        return Err(Error::InvalidArgument(
            "unitarizability needs at least one matrix".into(),
        ));
    }
    let (residual, raw) = invariant_form(mats);
    // orient and normalize the form
    let mut form = raw;
    if form.p11 + form.p22 < 0.0 {
        form = form.scaled(-1.0);
    }
    let tr = form.p11 + form.p22;
    if tr > 1e-9 {
        form = form.scaled(2.0 / tr);
    }

    // trace bounds are necessary for unitarity regardless of reducibility
    let mut traces: Vec<Complex> = mats.iter().map(Mat2::trace).collect();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            traces.push((mats[j] * mats[i]).trace());
        }
    }
    let filter_ok = traces
        .iter()
        .all(|t| t.im.abs() <= 1e-6 && t.re.abs() <= 2.0 + 1e-6);
    if !filter_ok {
        return Ok((Verdict::No, form, residual));
    }

    if is_reducible(mats) {
        return Ok((Verdict::Borderline, form, residual));
    }

    let verdict = if residual >= CERT_RESIDUAL_TOL {
        Verdict::No
    } else {
        let (lmin, _) = form.eigenvalues();
        if lmin > CERT_EIGEN_TOL {
            Verdict::Yes
        } else if lmin < -CERT_EIGEN_TOL {
            Verdict::No
        } else {
            Verdict::Borderline
        }
    };
    Ok((verdict, form, residual))
}

// ---------------------------------------------------------------------------
// Trace coordinates and scans
// ---------------------------------------------------------------------------

/// `(t12, t14) = (tr H2 H1, tr H4 H1)` at one parameter point.
pub fn trace_pair(
    zeta: Complex,
    a: Complex,
    g: Complex,
    tol: &ToleranceBudget,
) -> Result<(Complex, Complex)> {
    let p = potential::close_params(zeta, a, g)?;
    let ks = [1usize, 2, 4];
    let results = par::map(&ks, |&k| monodromy::generator(&p, k, tol));
    let mut mats = Vec::with_capacity(3);
    for r in results {
        mats.push(r?.matrix);
    }
    Ok(((mats[1] * mats[0]).trace(), (mats[2] * mats[0]).trace()))
}

/// Per-point scan record: generator and word traces, surface-holonomy traces,
/// and the unitarizability verdict.
#[derive(Debug, Clone)]
pub struct TraceProfile {
    pub zeta: Complex,
    pub a: Complex,
    pub g: Complex,
    /// Generator traces `tr H1..tr H4`.
    pub t: [Complex; 4],
    pub t12: Complex,
    pub t13: Complex,
    pub t14: Complex,
    pub t123: Complex,
    /// Surface-holonomy traces `tr A1..tr A4`.
    pub ta: [Complex; 4],
    pub verdict: Verdict,
    pub defect: f64,
    /// Largest per-generator integration error estimate.
    pub err_estimate: f64,
    /// Machine-readable error code if the point failed; the scan never aborts.
    pub error: Option<String>,
}

impl TraceProfile {
    fn failed(zeta: Complex, a: Complex, g: Complex, err: &Error) -> TraceProfile {
        let zero = Complex::new(0.0, 0.0);
        TraceProfile {
            zeta,
            a,
            g,
            t: [zero; 4],
            t12: zero,
            t13: zero,
            t14: zero,
            t123: zero,
            ta: [zero; 4],
            verdict: Verdict::No,
            defect: f64::NAN,
            err_estimate: f64::NAN,
            error: Some(err.code().to_string()),
        }
    }
}

/// Full profile at one spectral point.
pub fn profile_at(zeta: Complex, a: Complex, g: Complex, tol: &ToleranceBudget) -> TraceProfile {
    let inner = || -> Result<TraceProfile> {
        let p = potential::close_params(zeta, a, g)?;
        let hs = monodromy::generators(&p, tol)?;
        let m = [hs[0].matrix, hs[1].matrix, hs[2].matrix, hs[3].matrix];
        let surface = surface_holonomy(&m)?;
        let (verdict, _, defect) = unitarizability(&m)?;
        Ok(TraceProfile {
            zeta,
            a,
            g,
            t: [m[0].trace(), m[1].trace(), m[2].trace(), m[3].trace()],
            t12: (m[1] * m[0]).trace(),
            t13: (m[2] * m[0]).trace(),
            t14: (m[3] * m[0]).trace(),
            t123: (m[2] * m[1] * m[0]).trace(),
            ta: surface.traces(),
            verdict,
            defect,
            err_estimate: hs.iter().map(|h| h.err_estimate).fold(0.0, f64::max),
            error: None,
        })
    };
    match inner() {
        Ok(p) => p,
        Err(e) => TraceProfile::failed(zeta, a, g, &e),
    }
}

/// The scan grid `zeta_j = exp(2 pi i j / n)`, with points pushed
/// counter-clockwise out of the `1e-3` exclusion chords around `zeta = +/-1`
/// (the family is not expected to extend there).
pub fn scan_grid(n: usize) -> Vec<Complex> {
    let shift = 2.0 * (CIRCLE_EXCLUSION / 2.0).asin();
    (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let zeta = Complex::from_polar(1.0, theta);
            if (zeta - Complex::new(1.0, 0.0)).norm() < CIRCLE_EXCLUSION {
                Complex::from_polar(1.0, shift)
            } else if (zeta + Complex::new(1.0, 0.0)).norm() < CIRCLE_EXCLUSION {
                Complex::from_polar(1.0, std::f64::consts::PI + shift)
            } else {
                zeta
            }
        })
        .collect()
}

/// Profiles over the unit-circle grid with fixed accessory data. Points run
/// in parallel under the `parallel` feature; output order is by grid index
/// either way.
pub fn circle_scan(
    a: Complex,
    g: Complex,
    n_points: usize,
    tol: &ToleranceBudget,
) -> Result<Vec<TraceProfile>> {
    if n_points < 4 || n_points % 2 != 0 {
        return Err(Error::InvalidArgument(
            "scan needs an even number of points, at least 4".into(),
        ));
    }
    potential::close_params(Complex::new(1.0, 0.0), a, g)?;
    let grid = scan_grid(n_points);
    Ok(par::map(&grid, |&zeta| profile_at(zeta, a, g, tol)))
}

/// Sequential variant of [`circle_scan`] (benchmark baseline).
pub fn circle_scan_seq(
    a: Complex,
    g: Complex,
    n_points: usize,
    tol: &ToleranceBudget,
) -> Result<Vec<TraceProfile>> {
    if n_points < 4 || n_points % 2 != 0 {
        return Err(Error::InvalidArgument(
            "scan needs an even number of points, at least 4".into(),
        ));
    }
    potential::close_params(Complex::new(1.0, 0.0), a, g)?;
    let grid = scan_grid(n_points);
    Ok(par::map_seq(&grid, |&zeta| profile_at(zeta, a, g, tol)))
}

// ---------------------------------------------------------------------------
// Jacobian of the trace map and the Newton solver
// ---------------------------------------------------------------------------

fn pack(a: Complex, g: Complex) -> [f64; 4] {
    [a.re, a.im, g.re, g.im]
}

fn unpack(x: &[f64; 4]) -> (Complex, Complex) {
    (Complex::new(x[0], x[1]), Complex::new(x[2], x[3]))
}

/// Central-difference Jacobian of `(A, G) -> (t12, t14)` as a real 4x4
/// matrix (rows: Re t12, Im t12, Re t14, Im t14).
pub fn trace_jacobian(
    zeta: Complex,
    a: Complex,
    g: Complex,
    h: f64,
    tol: &ToleranceBudget,
) -> Result<[[f64; 4]; 4]> {
    let x0 = pack(a, g);
    let mut points = Vec::with_capacity(8);
    for dir in 0..4 {
        for sign in [1.0, -1.0] {
            let mut x = x0;
            x[dir] += sign * h;
            points.push(x);
        }
    }
    let values = par::map(&points, |x| {
        let (a, g) = unpack(x);
        trace_pair(zeta, a, g, tol)
    });
    let mut vals = Vec::with_capacity(8);
    for v in values {
        vals.push(v?);
    }
    let mut jac = [[0.0f64; 4]; 4];
    for dir in 0..4 {
        let (tp12, tp14) = vals[2 * dir];
        let (tm12, tm14) = vals[2 * dir + 1];
        let d12 = (tp12 - tm12) / (2.0 * h);
        let d14 = (tp14 - tm14) / (2.0 * h);
        jac[0][dir] = d12.re;
        jac[1][dir] = d12.im;
        jac[2][dir] = d14.re;
        jac[3][dir] = d14.im;
    }
    Ok(jac)
}

/// Rank (at the relative threshold `sigma > 1e-4 sigma_max`) and singular
/// values of the trace-map Jacobian.
pub fn jacobian_rank(
    zeta: Complex,
    a: Complex,
    g: Complex,
    h: f64,
    tol: &ToleranceBudget,
) -> Result<(u32, [f64; 4])> {
    if !(1e-6..=1e-3).contains(&h) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step {h} outside [1e-6, 1e-3]"
        )));
    }
    let jac = trace_jacobian(zeta, a, g, h, tol)?;
    let s = singular_values4(&jac);
    let rank = if s[0] <= 0.0 {
        0
    } else {
        s.iter().filter(|&&x| x > RANK_THRESHOLD * s[0]).count() as u32
    };
    Ok((rank, s))
}

/// Successful accessory-parameter solve.
#[derive(Debug, Clone, Copy)]
pub struct NewtonSolution {
    pub a: Complex,
    pub g: Complex,
    pub residual: f64,
    pub iterations: usize,
}

/// Damped Newton iteration on a residual map with a finite-difference
/// jacobian. Generic core, so the failure branches stay testable.
fn newton_solve(
    f: &dyn Fn(&[f64; 4]) -> Result<[f64; 4]>,
    jac: &dyn Fn(&[f64; 4]) -> Result<[[f64; 4]; 4]>,
    x0: [f64; 4],
    tol: f64,
    max_iter: usize,
    in_domain: &dyn Fn(&[f64; 4]) -> bool,
) -> Result<([f64; 4], f64, usize)> {
    let mut x = x0;
    let mut r = f(&x)?;
    let mut res = norm4(&r);
    for iter in 0..max_iter {
        if res < tol {
            return Ok((x, res, iter));
        }
        if !in_domain(&x) {
            return Err(Error::NewtonLeftDomain);
        }
        let j = jac(&x)?;
        let s = singular_values4(&j);
        if s[0] <= 0.0 || s[3] <= RANK_THRESHOLD * s[0] {
            return Err(Error::NewtonSingular);
        }
        let neg_r = [-r[0], -r[1], -r[2], -r[3]];
        let Some(step) = gauss_solve4(j, neg_r) else {
            return Err(Error::NewtonSingular);
        };
        // step halving until the residual decreases
        let mut lambda = 1.0f64;
        let mut advanced = false;
        for _ in 0..8 {
            let xt = [
                x[0] + lambda * step[0],
                x[1] + lambda * step[1],
                x[2] + lambda * step[2],
                x[3] + lambda * step[3],
            ];
            if !in_domain(&xt) {
                lambda *= 0.5;
                continue;
            }
            let rt = f(&xt)?;
            let rest = norm4(&rt);
            if rest < res {
                x = xt;
                r = rt;
                res = rest;
                advanced = true;
                break;
            }
            lambda *= 0.5;
        }
        if !advanced {
            return Err(Error::NewtonMaxIter { max_iter });
        }
    }
    if res < tol {
        return Ok((x, res, max_iter));
    }
    Err(Error::NewtonMaxIter { max_iter })
}

/// Solve for accessory parameters hitting the word-trace targets
/// `(t12, t14)` at fixed `zeta`, by damped Newton from `(init_a, init_g)`.
pub fn find_trace_target(
    zeta: Complex,
    target_t12: Complex,
    target_t14: Complex,
    init_a: Complex,
    init_g: Complex,
    newton_tol: f64,
    tol: &ToleranceBudget,
) -> Result<NewtonSolution> {
    if init_g.norm() <= NEWTON_G_GUARD {
        return Err(Error::InvalidArgument(format!(
            "|init_G| = {:.3e} is inside the guard {NEWTON_G_GUARD}",
            init_g.norm()
        )));
    }
    let fd_h = 1e-4;
    let f = |x: &[f64; 4]| -> Result<[f64; 4]> {
        let (a, g) = unpack(x);
        let (t12, t14) = trace_pair(zeta, a, g, tol)?;
        Ok([
            t12.re - target_t12.re,
            t12.im - target_t12.im,
            t14.re - target_t14.re,
            t14.im - target_t14.im,
        ])
    };
    let jac = |x: &[f64; 4]| -> Result<[[f64; 4]; 4]> {
        let (a, g) = unpack(x);
        trace_jacobian(zeta, a, g, fd_h, tol)
    };
    let in_domain =
        |x: &[f64; 4]| -> bool { Complex::new(x[2], x[3]).norm() > NEWTON_G_GUARD };
    let (x, residual, iterations) = newton_solve(
        &f,
        &jac,
        pack(init_a, init_g),
        newton_tol,
        50,
        &in_domain,
    )?;
    let (a, g) = unpack(&x);
    Ok(NewtonSolution {
        a,
        g,
        residual,
        iterations,
    })
}
