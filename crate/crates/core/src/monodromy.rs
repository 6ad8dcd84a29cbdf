//! Parallel transport of the linear system attached to the connection family,
//! along piecewise line/arc paths in the punctured plane.
//!
//! A parallel frame satisfies `dY + xi Y = 0`; the transport of a path is the
//! value `Y(end)` of the fundamental solution with `Y(start) = Id`. With the
//! loop-composition convention `T(gamma * delta) = T(delta) T(gamma)`, the
//! standard generators around the four punctures satisfy
//! `H4 H3 H2 H1 = Id`, `Tr H_k = -1` and `H_k^3 = Id`.
//!
//! Integration uses an embedded Dormand-Prince 5(4) pair with PI step-size
//! control; the error estimate accumulated over accepted steps backs the
//! `|det - 1| <= 10 * err_estimate` contract of [`Monodromy`].

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::potential::{self, PotentialParams};
use crate::{par, Complex};

/// Default clearance kept between any path piece and the singular points.
pub const POLE_GUARD: f64 = 0.05;
/// Continuity slack between consecutive path pieces.
pub const JOINT_TOL: f64 = 1e-12;
/// Standard loop radius around each puncture.
pub const GENERATOR_RADIUS: f64 = 0.3;
/// Radius of the corridor ring through the base point.
pub const RING_RADIUS: f64 = 0.5;
/// Radius of the apparent-singularity probe circles.
pub const PROBE_RADIUS: f64 = 0.2;

/// One piece of a path: an oriented segment or circular arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathPiece {
    Line {
        start: Complex,
        end: Complex,
    },
    /// Angles in radians; the arc is swept from `from_angle` to `to_angle`
    /// (counter-clockwise when `to_angle > from_angle`).
    Arc {
        center: Complex,
        radius: f64,
        from_angle: f64,
        to_angle: f64,
    },
}

impl PathPiece {
    fn at(&self, t: f64) -> (Complex, Complex) {
        match *self {
            PathPiece::Line { start, end } => (start + (end - start) * t, end - start),
            PathPiece::Arc {
                center,
                radius,
                from_angle,
                to_angle,
            } => {
                let span = to_angle - from_angle;
                let theta = from_angle + span * t;
                let e = Complex::new(0.0, theta).exp() * radius;
                (center + e, Complex::new(0.0, span) * e)
            }
        }
    }

    fn start(&self) -> Complex {
        self.at(0.0).0
    }

    fn end(&self) -> Complex {
        self.at(1.0).0
    }

    fn reversed(&self) -> PathPiece {
        match *self {
            PathPiece::Line { start, end } => PathPiece::Line {
                start: end,
                end: start,
            },
            PathPiece::Arc {
                center,
                radius,
                from_angle,
                to_angle,
            } => PathPiece::Arc {
                center,
                radius,
                from_angle: to_angle,
                to_angle: from_angle,
            },
        }
    }

    /// Exact distance from the piece to a point.
    fn distance_to(&self, q: Complex) -> f64 {
        match *self {
            PathPiece::Line { start, end } => {
                let d = end - start;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (q - start).norm();
                }
                let t = ((q - start).re * d.re + (q - start).im * d.im) / len2;
                let t = t.clamp(0.0, 1.0);
                (q - (start + d * t)).norm()
            }
            PathPiece::Arc {
                center,
                radius,
                from_angle,
                to_angle,
            } => {
                let rel = q - center;
                let span = (to_angle - from_angle).abs();
                if span >= 2.0 * std::f64::consts::PI - 1e-15 {
                    return (rel.norm() - radius).abs();
                }
                let lo = from_angle.min(to_angle);
                let phi = rel.im.atan2(rel.re);
                let tau = 2.0 * std::f64::consts::PI;
                let mut shifted = (phi - lo) % tau;
                if shifted < 0.0 {
                    shifted += tau;
                }
                if shifted <= span {
                    (rel.norm() - radius).abs()
                } else {
                    let d0 = (q - self.start()).norm();
                    let d1 = (q - self.end()).norm();
                    d0.min(d1)
                }
            }
        }
    }
}

/// Piecewise path with its base point. Construction validates continuity and
/// the clearance of every piece from the five singular points of the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pieces: Vec<PathPiece>,
    base: Complex,
    apparent_probe: bool,
}

impl PathSpec {
    pub fn new(pieces: Vec<PathPiece>, apparent_probe: bool) -> Result<PathSpec> {
        let singular = [
            Complex::new(0.0, 0.0),
            potential::puncture(1),
            potential::puncture(2),
            potential::puncture(3),
            potential::puncture(4),
        ];
        for (i, piece) in pieces.iter().enumerate() {
            if i + 1 < pieces.len() {
                let gap = (piece.end() - pieces[i + 1].start()).norm();
                if gap > JOINT_TOL {
                    return Err(Error::BadPath {
                        piece: i,
                        reason: format!("gap {:.3e} to the next piece", gap),
                    });
                }
            }
            for s in singular {
                let d = piece.distance_to(s);
                if d < POLE_GUARD {
                    return Err(Error::BadPath {
                        piece: i,
                        reason: format!("distance {:.3e} to the pole at {} is below the guard", d, s),
                    });
                }
            }
        }
        let base = pieces
            .first()
            .map(|p| p.start())
            .unwrap_or(Complex::new(0.0, 0.0));
        Ok(PathSpec {
            pieces,
            base,
            apparent_probe,
        })
    }

    /// Zero-length path at a base point.
    pub fn constant(base: Complex) -> PathSpec {
        PathSpec {
            pieces: Vec::new(),
            base,
            apparent_probe: false,
        }
    }

    /// Full counter-clockwise circle, starting and ending at angle `start_angle`.
    pub fn circle(center: Complex, radius: f64, start_angle: f64, probe: bool) -> Result<PathSpec> {
        PathSpec::new(
            vec![PathPiece::Arc {
                center,
                radius,
                from_angle: start_angle,
                to_angle: start_angle + 2.0 * std::f64::consts::PI,
            }],
            probe,
        )
    }

    pub fn pieces(&self) -> &[PathPiece] {
        &self.pieces
    }

    pub fn base(&self) -> Complex {
        self.base
    }

    pub fn is_apparent_probe(&self) -> bool {
        self.apparent_probe
    }

    pub fn reversed(&self) -> PathSpec {
        PathSpec {
            pieces: self.pieces.iter().rev().map(|p| p.reversed()).collect(),
            base: self
                .pieces
                .last()
                .map(|p| p.end())
                .unwrap_or(self.base),
            apparent_probe: self.apparent_probe,
        }
    }

    /// Concatenate with another path (endpoints must match).
    pub fn then(mut self, other: &PathSpec) -> Result<PathSpec> {
        self.pieces.extend_from_slice(&other.pieces);
        let probe = self.apparent_probe || other.apparent_probe;
        PathSpec::new(self.pieces, probe)
    }
}

/// Integration budget and error-control targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceBudget {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: u64,
}

impl Default for ToleranceBudget {
    fn default() -> Self {
        ToleranceBudget {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 2_000_000,
        }
    }
}

impl ToleranceBudget {
    /// `rel_tol` is clamped to the contract floor of 1e-13.
    pub fn new(rel_tol: f64, abs_tol: f64, max_steps: u64) -> ToleranceBudget {
        ToleranceBudget {
            rel_tol: rel_tol.max(1e-13),
            abs_tol: abs_tol.max(0.0),
            max_steps,
        }
    }

    pub fn with_rel_tol(rel_tol: f64) -> ToleranceBudget {
        ToleranceBudget::new(rel_tol, 1e-12, 2_000_000)
    }
}

/// Transport result: the matrix, an accumulated local-error estimate, and the
/// number of accepted integrator steps.
#[derive(Debug, Clone, Copy)]
pub struct Monodromy {
    pub matrix: Mat2,
    pub err_estimate: f64,
    pub steps_taken: u64,
}

/// Which apparent singularity a probe loop encircles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApparentPoint {
    Zero,
    Infinity,
}

/// Classified outcome of an apparent-singularity probe. The probe is asserted
/// against `+Id`; a loop landing at `-Id` (the other center element) is
/// reported as such rather than as failure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ApparentOutcome {
    PlusId { defect: f64 },
    MinusId { defect: f64 },
    NonTrivial { defect_plus: f64, defect_minus: f64 },
}

#[derive(Clone, Copy)]
enum Chart {
    Finite,
    Infinity,
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)
// ---------------------------------------------------------------------------

const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// embedded error weights (5th-order minus 4th-order solution)
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Integrator<'a> {
    params: &'a PotentialParams,
    chart: Chart,
    tol: &'a ToleranceBudget,
    steps: u64,
    err_accum: f64,
    facold: f64,
}

impl<'a> Integrator<'a> {
    fn new(params: &'a PotentialParams, chart: Chart, tol: &'a ToleranceBudget) -> Self {
        Integrator {
            params,
            chart,
            tol,
            steps: 0,
            err_accum: 0.0,
            facold: 1e-4,
        }
    }

    /// Coefficient matrix of the parallel-frame system along the piece:
    /// `Y' = -xi(z(t)) z'(t) Y`.
    fn coefficient(&self, piece: &PathPiece, t: f64) -> Result<Mat2> {
        let (z, dz) = piece.at(t);
        let xi = match self.chart {
            Chart::Finite => potential::eval_xi(self.params, z),
            Chart::Infinity => potential::eval_xi_at_infinity(self.params, z),
        };
        let xi = xi.map_err(|e| match e {
            Error::PoleEvaluation { pole, .. } => Error::PoleApproach { pole },
            other => other,
        })?;
        Ok(xi.scale(-dz))
    }

    fn rhs(&self, piece: &PathPiece, t: f64, y: &Mat2) -> Result<Mat2> {
        Ok(self.coefficient(piece, t)? * *y)
    }

    fn integrate_piece(&mut self, piece: &PathPiece, y: &mut Mat2) -> Result<()> {
        let mut t = 0.0f64;
        let mut h = 1e-2f64;
        let mut k1 = self.rhs(piece, t, y)?;
        let safe = 0.9;
        let beta = 0.04;
        // error-per-unit-step control: the accepted local error is
        // rel_tol-scaled *per unit of path parameter*, so the accumulated
        // global error tracks the tolerance itself, not tolerance x steps.
        // The effective control order of the 5(4) pair is then 4.
        let expo1 = 0.25 - beta * 0.75;

        while t < 1.0 {
            if self.steps >= self.tol.max_steps {
                return Err(Error::StepLimitExceeded {
                    max_steps: self.tol.max_steps,
                });
            }
            if t + h > 1.0 {
                h = 1.0 - t;
            }
            let mut k = [Mat2::zero(); 7];
            k[0] = k1;
            for stage in 1..7 {
                let mut acc = Mat2::zero();
                for (j, kj) in k.iter().enumerate().take(stage) {
                    let a = DP_A[stage][j];
                    if a != 0.0 {
                        acc = acc + kj.scale(Complex::new(a, 0.0));
                    }
                }
                let y_stage = *y + acc.scale(Complex::new(h, 0.0));
                k[stage] = self.rhs(piece, t + DP_C[stage] * h, &y_stage)?;
            }
            // 5th-order solution is built into stage 7 (FSAL)
            let mut acc = Mat2::zero();
            for (j, kj) in k.iter().enumerate().take(6) {
                let a = DP_A[6][j];
                if a != 0.0 {
                    acc = acc + kj.scale(Complex::new(a, 0.0));
                }
            }
            let y_new = *y + acc.scale(Complex::new(h, 0.0));
            let mut err_mat = Mat2::zero();
            for (j, kj) in k.iter().enumerate() {
                if DP_E[j] != 0.0 {
                    err_mat = err_mat + kj.scale(Complex::new(DP_E[j], 0.0));
                }
            }
            let err_mat = err_mat.scale(Complex::new(h, 0.0));

            // componentwise scaled RMS error over the 8 real components
            let comps_old = [y.a11, y.a12, y.a21, y.a22];
            let comps_new = [y_new.a11, y_new.a12, y_new.a21, y_new.a22];
            let comps_err = [err_mat.a11, err_mat.a12, err_mat.a21, err_mat.a22];
            let mut sum = 0.0f64;
            for i in 0..4 {
                for (eo, en, ee) in [
                    (comps_old[i].re, comps_new[i].re, comps_err[i].re),
                    (comps_old[i].im, comps_new[i].im, comps_err[i].im),
                ] {
                    let sc = self.tol.abs_tol + self.tol.rel_tol * eo.abs().max(en.abs());
                    sum += (ee / sc) * (ee / sc);
                }
            }
            let err = (sum / 8.0).sqrt().max(1e-30) / h;

            self.steps += 1;
            let fac11 = err.powf(expo1);
            if err <= 1.0 {
                // accept
                self.facold = err.max(1e-4);
                self.err_accum += err_mat.frobenius_norm();
                t += h;
                *y = y_new;
                k1 = k[6];
                let fac = (fac11 / self.facold.powf(beta) / safe).clamp(0.1, 5.0);
                h /= fac;
            } else {
                let fac = (fac11 / safe).min(5.0);
                h /= fac;
            }
            if !h.is_finite() || h <= 1e-15 {
                return Err(Error::StepLimitExceeded {
                    max_steps: self.tol.max_steps,
                });
            }
        }
        Ok(())
    }
}

fn transport_chart(
    p: &PotentialParams,
    path: &PathSpec,
    tol: &ToleranceBudget,
    chart: Chart,
) -> Result<Monodromy> {
    let mut integrator = Integrator::new(p, chart, tol);
    let mut y = Mat2::identity();
    for piece in path.pieces() {
        integrator.integrate_piece(piece, &mut y)?;
    }
    Ok(Monodromy {
        matrix: y,
        err_estimate: integrator.err_accum,
        steps_taken: integrator.steps,
    })
}

/// Transport of the parallel-frame system along `path` in the finite chart.
pub fn transport(p: &PotentialParams, path: &PathSpec, tol: &ToleranceBudget) -> Result<Monodromy> {
    transport_chart(p, path, tol, Chart::Finite)
}

/// The standard loop around the k-th puncture: ring-road corridor from the
/// base point `1/2`, radial approach, full counter-clockwise circle of the
/// given radius, and the same corridor back.
pub fn generator_path_with_radius(k: usize, radius: f64) -> Result<PathSpec> {
    assert!((1..=4).contains(&k), "generator index must be 1..4");
    assert!(
        (0.06..=0.45).contains(&radius),
        "loop radius must leave the corridor intact"
    );
    let pk = potential::puncture(k);
    let theta = (k - 1) as f64 * std::f64::consts::FRAC_PI_2;
    let mut pieces = Vec::new();
    if k > 1 {
        pieces.push(PathPiece::Arc {
            center: Complex::new(0.0, 0.0),
            radius: RING_RADIUS,
            from_angle: 0.0,
            to_angle: theta,
        });
    }
    pieces.push(PathPiece::Line {
        start: pk * RING_RADIUS,
        end: pk * (1.0 - radius),
    });
    let start_angle = theta + std::f64::consts::PI;
    pieces.push(PathPiece::Arc {
        center: pk,
        radius,
        from_angle: start_angle,
        to_angle: start_angle + 2.0 * std::f64::consts::PI,
    });
    pieces.push(PathPiece::Line {
        start: pk * (1.0 - radius),
        end: pk * RING_RADIUS,
    });
    if k > 1 {
        pieces.push(PathPiece::Arc {
            center: Complex::new(0.0, 0.0),
            radius: RING_RADIUS,
            from_angle: theta,
            to_angle: 0.0,
        });
    }
    PathSpec::new(pieces, false)
}

pub fn generator_path(k: usize) -> Result<PathSpec> {
    generator_path_with_radius(k, GENERATOR_RADIUS)
}

/// Monodromy generator `H_k` along the standard loop.
pub fn generator(p: &PotentialParams, k: usize, tol: &ToleranceBudget) -> Result<Monodromy> {
    transport(p, &generator_path(k)?, tol)
}

/// All four generators; independent loops run in parallel when the
/// `parallel` feature is enabled, merged by index.
pub fn generators(p: &PotentialParams, tol: &ToleranceBudget) -> Result<[Monodromy; 4]> {
    let ks = [1usize, 2, 3, 4];
    let results = par::map(&ks, |&k| generator(p, k, tol));
    let mut out = Vec::with_capacity(4);
    for r in results {
        out.push(r?);
    }
    Ok([out[0], out[1], out[2], out[3]])
}

/// Sequential variant of [`generators`] (benchmark baseline).
pub fn generators_seq(p: &PotentialParams, tol: &ToleranceBudget) -> Result<[Monodromy; 4]> {
    let ks = [1usize, 2, 3, 4];
    let results = par::map_seq(&ks, |&k| generator(p, k, tol));
    let mut out = Vec::with_capacity(4);
    for r in results {
        out.push(r?);
    }
    Ok([out[0], out[1], out[2], out[3]])
}

fn probe_path() -> PathSpec {
    PathSpec::circle(Complex::new(0.0, 0.0), PROBE_RADIUS, 0.0, true)
        .expect("probe circle is admissible")
}

/// Monodromy of the small probe loop around an apparent point.
pub fn apparent_monodromy(
    p: &PotentialParams,
    which: ApparentPoint,
    tol: &ToleranceBudget,
) -> Result<Monodromy> {
    let chart = match which {
        ApparentPoint::Zero => Chart::Finite,
        ApparentPoint::Infinity => Chart::Infinity,
    };
    transport_chart(p, &probe_path(), tol, chart)
}

/// `||M_loop - Id||_F` for the probe loop around `z = 0` or `z = infinity`.
pub fn apparent_defect(
    p: &PotentialParams,
    which: ApparentPoint,
    tol: &ToleranceBudget,
) -> Result<f64> {
    let m = apparent_monodromy(p, which, tol)?;
    Ok(m.matrix.dist(&Mat2::identity()))
}

/// Probe with the center-element classification.
pub fn apparent_outcome(
    p: &PotentialParams,
    which: ApparentPoint,
    tol: &ToleranceBudget,
) -> Result<ApparentOutcome> {
    let m = apparent_monodromy(p, which, tol)?;
    let plus = m.matrix.dist(&Mat2::identity());
    let minus = m.matrix.dist(&-Mat2::identity());
    Ok(if plus < 0.5 {
        ApparentOutcome::PlusId { defect: plus }
    } else if minus < 0.5 {
        ApparentOutcome::MinusId { defect: minus }
    } else {
        ApparentOutcome::NonTrivial {
            defect_plus: plus,
            defect_minus: minus,
        }
    })
}
