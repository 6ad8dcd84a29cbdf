//! Exact divisor-class arithmetic on the curve `y^3 = z^4 - 1`, restricted to
//! the ten named points: the Weierstrass points `Q1..Q6` and the umbilics
//! `P1..P4`.
//!
//! Classes are compared modulo the relation lattice spanned by the principal
//! divisors `2Qi - 2Qj`, `Q1+Q3+Q5-Q2-Q4-Q6`, and the two P-relations
//! `P1+P3-2Q1`, `P2+P4-2Q1` (hyperelliptic differentials paired with the
//! genus-2 identity `K ~ 2Q1`). Membership tests run through a Smith normal
//! form of the generator matrix, computed in arbitrary-precision integers.

use crate::error::{Error, Result};
use crate::Complex;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

pub const NUM_POINTS: usize = 10;

/// The ten named points of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointLabel {
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
    Q6,
    P1,
    P2,
    P3,
    P4,
}

pub const ALL_POINTS: [PointLabel; NUM_POINTS] = [
    PointLabel::Q1,
    PointLabel::Q2,
    PointLabel::Q3,
    PointLabel::Q4,
    PointLabel::Q5,
    PointLabel::Q6,
    PointLabel::P1,
    PointLabel::P2,
    PointLabel::P3,
    PointLabel::P4,
];

/// Image of a named point on the base sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseImage {
    Finite(Complex),
    Infinity,
}

impl PointLabel {
    pub fn index(self) -> usize {
        ALL_POINTS.iter().position(|&p| p == self).unwrap()
    }

    pub fn name(self) -> &'static str {
        match self {
            PointLabel::Q1 => "Q1",
            PointLabel::Q2 => "Q2",
            PointLabel::Q3 => "Q3",
            PointLabel::Q4 => "Q4",
            PointLabel::Q5 => "Q5",
            PointLabel::Q6 => "Q6",
            PointLabel::P1 => "P1",
            PointLabel::P2 => "P2",
            PointLabel::P3 => "P3",
            PointLabel::P4 => "P4",
        }
    }

    /// Image under the degree-3 quotient map to the sphere:
    /// `Q1, Q3, Q5 -> 0`, `Q2, Q4, Q6 -> infinity`, `Pk -> i^(k-1)`.
    pub fn base_image(self) -> BaseImage {
        match self {
            PointLabel::Q1 | PointLabel::Q3 | PointLabel::Q5 => {
                BaseImage::Finite(Complex::new(0.0, 0.0))
            }
            PointLabel::Q2 | PointLabel::Q4 | PointLabel::Q6 => BaseImage::Infinity,
            PointLabel::P1 => BaseImage::Finite(Complex::new(1.0, 0.0)),
            PointLabel::P2 => BaseImage::Finite(Complex::new(0.0, 1.0)),
            PointLabel::P3 => BaseImage::Finite(Complex::new(-1.0, 0.0)),
            PointLabel::P4 => BaseImage::Finite(Complex::new(0.0, -1.0)),
        }
    }
}

/// Integer divisor supported on the named points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Divisor {
    pub coeffs: [i64; NUM_POINTS],
}

impl Divisor {
    pub fn zero() -> Self {
        Divisor {
            coeffs: [0; NUM_POINTS],
        }
    }

    pub fn point(p: PointLabel) -> Self {
        let mut d = Divisor::zero();
        d.coeffs[p.index()] = 1;
        d
    }

    pub fn from_terms(terms: &[(PointLabel, i64)]) -> Self {
        let mut d = Divisor::zero();
        for &(p, c) in terms {
            d.coeffs[p.index()] += c;
        }
        d
    }

    pub fn coeff(&self, p: PointLabel) -> i64 {
        self.coeffs[p.index()]
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn l1(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Coefficients permuted by the order-3 pullback:
    /// `Q1 -> Q5 -> Q3 -> Q1`, `Q2 -> Q6 -> Q4 -> Q2`, `Pk` fixed.
    pub fn phi3_pullback(&self) -> Divisor {
        // perm[i] = image slot of point i
        const PERM: [usize; NUM_POINTS] = [4, 5, 0, 1, 2, 3, 6, 7, 8, 9];
        let mut out = Divisor::zero();
        for i in 0..NUM_POINTS {
            out.coeffs[PERM[i]] = self.coeffs[i];
        }
        out
    }
}

impl std::ops::Add for Divisor {
    type Output = Divisor;
    fn add(self, rhs: Divisor) -> Divisor {
        let mut out = Divisor::zero();
        for i in 0..NUM_POINTS {
            out.coeffs[i] = self.coeffs[i] + rhs.coeffs[i];
        }
        out
    }
}

impl std::ops::Sub for Divisor {
    type Output = Divisor;
    fn sub(self, rhs: Divisor) -> Divisor {
        let mut out = Divisor::zero();
        for i in 0..NUM_POINTS {
            out.coeffs[i] = self.coeffs[i] - rhs.coeffs[i];
        }
        out
    }
}

impl std::ops::Neg for Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        let mut out = Divisor::zero();
        for i in 0..NUM_POINTS {
            out.coeffs[i] = -self.coeffs[i];
        }
        out
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for sign in [1i64, -1] {
            for (i, &c) in self.coeffs.iter().enumerate() {
                if c.signum() != sign {
                    continue;
                }
                let mag = c.abs();
                if wrote || sign < 0 {
                    write!(f, "{}", if sign > 0 { "+" } else { "-" })?;
                }
                if mag != 1 {
                    write!(f, "{}", mag)?;
                }
                write!(f, "{}", ALL_POINTS[i].name())?;
                wrote = true;
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Smith normal form over BigInt
// ---------------------------------------------------------------------------

struct Snf {
    /// Diagonal entries (length min(m, n)), non-negative, divisibility chain.
    diag: Vec<BigInt>,
    rank: usize,
    /// Left transform: `u * a * v = d`.
    u: Vec<Vec<BigInt>>,
    /// Inverse of the left transform.
    uinv: Vec<Vec<BigInt>>,
    /// Right transform.
    v: Vec<Vec<BigInt>>,
}

fn big_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Smith normal form with full transform tracking. Sizes here are tiny
/// (at most 10 x 18), so the plain pivot-and-reduce loop is plenty.
fn smith_normal_form(a0: &[Vec<BigInt>]) -> Snf {
    let m = a0.len();
    let n = a0[0].len();
    let mut a: Vec<Vec<BigInt>> = a0.to_vec();
    let mut u = big_identity(m);
    let mut uinv = big_identity(m);
    let mut v = big_identity(n);

    let swap_rows = |a: &mut Vec<Vec<BigInt>>,
                     u: &mut Vec<Vec<BigInt>>,
                     uinv: &mut Vec<Vec<BigInt>>,
                     i: usize,
                     j: usize| {
        a.swap(i, j);
        u.swap(i, j);
        for row in uinv.iter_mut() {
            row.swap(i, j);
        }
    };
    // row i += q * row j
    let add_row = |a: &mut Vec<Vec<BigInt>>,
                   u: &mut Vec<Vec<BigInt>>,
                   uinv: &mut Vec<Vec<BigInt>>,
                   i: usize,
                   j: usize,
                   q: &BigInt| {
        for k in 0..n {
            let t = &a[j][k] * q;
            a[i][k] += t;
        }
        for k in 0..m {
            let t = &u[j][k] * q;
            u[i][k] += t;
        }
        for row in uinv.iter_mut() {
            let t = &row[i] * q;
            row[j] -= t;
        }
    };
    let swap_cols = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    // col i += q * col j
    let add_col = |a: &mut Vec<Vec<BigInt>>,
                   v: &mut Vec<Vec<BigInt>>,
                   i: usize,
                   j: usize,
                   q: &BigInt| {
        for row in a.iter_mut() {
            let t = &row[j] * q;
            row[i] += t;
        }
        for row in v.iter_mut() {
            let t = &row[j] * q;
            row[i] += t;
        }
    };

    let mut t = 0usize;
    while t < m.min(n) {
        // smallest-magnitude nonzero pivot in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero()
                    && pivot
                        .map_or(true, |(pi, pj)| a[i][j].magnitude() < a[pi][pj].magnitude())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, &mut u, &mut uinv, t, pi);
        swap_cols(&mut a, &mut v, t, pj);

        'reduce: loop {
            // clear column t
            let mut col_clear = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = -(&a[i][t] / &a[t][t]);
                    add_row(&mut a, &mut u, &mut uinv, i, t, &q);
                    if !a[i][t].is_zero() {
                        // remainder became the smaller pivot
                        swap_rows(&mut a, &mut u, &mut uinv, t, i);
                        col_clear = false;
                    }
                }
            }
            if !col_clear {
                continue 'reduce;
            }
            // clear row t
            let mut row_clear = true;
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = -(&a[t][j] / &a[t][t]);
                    add_col(&mut a, &mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, &mut v, t, j);
                        row_clear = false;
                    }
                }
            }
            if !row_clear {
                continue 'reduce;
            }
            // divisibility fix-up for the trailing block
            for i in t + 1..m {
                for j in t + 1..n {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        add_row(&mut a, &mut u, &mut uinv, t, i, &BigInt::one());
                        continue 'reduce;
                    }
                }
            }
            break;
        }

        if a[t][t].is_negative() {
            for k in 0..n {
                a[t][k] = -a[t][k].clone();
            }
            for k in 0..m {
                u[t][k] = -u[t][k].clone();
            }
            for row in uinv.iter_mut() {
                row[t] = -row[t].clone();
            }
        }
        t += 1;
    }

    let diag: Vec<BigInt> = (0..m.min(n)).map(|i| a[i][i].clone()).collect();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    Snf {
        diag,
        rank,
        u,
        uinv,
        v,
    }
}

fn to_i64_matrix(m: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| i64::try_from(x).expect("SNF transform entry exceeds i64"))
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Relation lattice and divisor classes
// ---------------------------------------------------------------------------

/// The relation lattice of known principal divisors, with its Smith normal
/// form data prepared for membership tests.
pub struct RelationLattice {
    pub generators: Vec<Divisor>,
    diag: Vec<i64>,
    rank: usize,
    u: Vec<Vec<i64>>,
    uinv: Vec<Vec<i64>>,
}

impl PartialEq for RelationLattice {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl fmt::Debug for RelationLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RelationLattice(rank {}, diag {:?})",
            self.rank, self.diag
        )
    }
}

impl RelationLattice {
    /// The lattice for the Lawson curve.
    pub fn lawson() -> Arc<RelationLattice> {
        use PointLabel::*;
        let qs = [Q1, Q2, Q3, Q4, Q5, Q6];
        let mut gens = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                gens.push(Divisor::from_terms(&[(qs[i], 2), (qs[j], -2)]));
            }
        }
        gens.push(Divisor::from_terms(&[
            (Q1, 1),
            (Q3, 1),
            (Q5, 1),
            (Q2, -1),
            (Q4, -1),
            (Q6, -1),
        ]));
        gens.push(Divisor::from_terms(&[(P1, 1), (P3, 1), (Q1, -2)]));
        gens.push(Divisor::from_terms(&[(P2, 1), (P4, 1), (Q1, -2)]));
        Arc::new(RelationLattice::from_generators(gens))
    }

    pub fn from_generators(generators: Vec<Divisor>) -> RelationLattice {
        for g in &generators {
            assert_eq!(g.degree(), 0, "lattice generators must have degree 0");
        }
        let a: Vec<Vec<BigInt>> = (0..NUM_POINTS)
            .map(|row| {
                generators
                    .iter()
                    .map(|g| BigInt::from(g.coeffs[row]))
                    .collect()
            })
            .collect();
        let snf = smith_normal_form(&a);
        let diag: Vec<i64> = snf
            .diag
            .iter()
            .map(|d| i64::try_from(d).expect("SNF diagonal exceeds i64"))
            .collect();
        RelationLattice {
            generators,
            diag,
            rank: snf.rank,
            u: to_i64_matrix(&snf.u),
            uinv: to_i64_matrix(&snf.uinv),
        }
    }

    fn coords(&self, d: &Divisor) -> [i64; NUM_POINTS] {
        let mut y = [0i64; NUM_POINTS];
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc: i64 = 0;
            for j in 0..NUM_POINTS {
                acc += self.u[i][j] * d.coeffs[j];
            }
            *yi = acc;
        }
        y
    }

    /// Lattice membership by SNF coordinates.
    pub fn contains(&self, d: &Divisor) -> bool {
        let y = self.coords(d);
        for i in 0..NUM_POINTS {
            if i < self.rank {
                if y[i].rem_euclid(self.diag[i]) != 0 {
                    return false;
                }
            } else if y[i] != 0 {
                return false;
            }
        }
        true
    }

    /// Wrap a divisor as a class over this lattice.
    pub fn class(self: &Arc<Self>, rep: Divisor) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(self),
            rep,
        }
    }

    /// Order of the class of `d` in the quotient group; `None` if infinite.
    pub fn class_order(&self, d: &Divisor) -> Option<u64> {
        let y = self.coords(d);
        for i in self.rank..NUM_POINTS {
            if y[i] != 0 {
                return None;
            }
        }
        let mut order: u64 = 1;
        for i in 0..self.rank {
            let di = self.diag[i] as u64;
            let yi = y[i].rem_euclid(self.diag[i]) as u64;
            if yi != 0 {
                order = lcm_u64(order, di / gcd_u64(di, yi));
            }
        }
        Some(order)
    }

    /// Invariant factors (> 1) of the subgroup of the class group generated by
    /// `{Qi - Q1, i = 2..6}`.
    pub fn torsion_group(&self) -> Vec<u64> {
        use PointLabel::*;
        let gens = [Q2, Q3, Q4, Q5, Q6]
            .map(|q| Divisor::point(q) - Divisor::point(Q1));
        let images: Vec<[i64; NUM_POINTS]> = gens.iter().map(|d| self.coords(d)).collect();
        // Relations a in Z^5 with sum a_i * images_i = 0 in the quotient:
        // kernel of [Y | D] projected on the first five coordinates.
        let ncols = gens.len() + self.rank;
        let mat: Vec<Vec<BigInt>> = (0..NUM_POINTS)
            .map(|row| {
                let mut r: Vec<BigInt> = images.iter().map(|y| BigInt::from(y[row])).collect();
                for j in 0..self.rank {
                    r.push(if row == j {
                        BigInt::from(self.diag[j])
                    } else {
                        BigInt::zero()
                    });
                }
                r
            })
            .collect();
        let snf = smith_normal_form(&mat);
        // kernel basis: columns of V past the rank
        let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
        for j in snf.rank..ncols {
            let col: Vec<BigInt> = (0..gens.len()).map(|i| snf.v[i][j].clone()).collect();
            rel_cols.push(col);
        }
        let rel: Vec<Vec<BigInt>> = (0..gens.len())
            .map(|i| rel_cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        if rel[0].is_empty() {
            return vec![0; gens.len()];
        }
        let snf_rel = smith_normal_form(&rel);
        let mut factors: Vec<u64> = snf_rel
            .diag
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .map(|d| u64::try_from(d).unwrap())
            .collect();
        // free summands, if the relations do not cut the full rank
        for _ in snf_rel.rank..gens.len() {
            factors.push(0);
        }
        factors.sort_unstable();
        factors
    }

    /// All degree-1 classes `D` with `2D ~ 2Q1`, one canonical representative
    /// each, sorted for stable presentation.
    pub fn enumerate_spin_classes(self: &Arc<Self>) -> Vec<DivisorClass> {
        let even_rows: Vec<usize> = (0..self.rank).filter(|&i| self.diag[i] % 2 == 0).collect();
        let mut classes: Vec<DivisorClass> = Vec::new();
        for mask in 0..(1usize << even_rows.len()) {
            // half-period lift in SNF coordinates
            let mut y = [0i64; NUM_POINTS];
            for (bit, &row) in even_rows.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    y[row] = self.diag[row] / 2;
                }
            }
            let mut torsion = Divisor::zero();
            for i in 0..NUM_POINTS {
                let mut acc = 0i64;
                for (j, yj) in y.iter().enumerate() {
                    acc += self.uinv[i][j] * yj;
                }
                torsion.coeffs[i] = acc;
            }
            debug_assert_eq!(torsion.degree(), 0);
            let rep = Divisor::point(PointLabel::Q1) + torsion;
            classes.push(self.class(self.canonical_rep(&rep)));
        }
        classes.sort_by_key(|c| display_key(&c.rep));
        classes.dedup_by(|a, b| a.rep == b.rep);
        classes
    }

    /// The subset of the spin classes fixed by the order-3 pullback.
    pub fn fixed_spin_classes(self: &Arc<Self>) -> Vec<DivisorClass> {
        self.enumerate_spin_classes()
            .into_iter()
            .filter(|c| {
                self.contains(&(c.rep.phi3_pullback() - c.rep))
            })
            .collect()
    }

    /// Canonical representative of the class of `d`: the class member
    /// minimizing (sum of |coefficients|, then lexicographic order on the
    /// coefficient vector in label order Q1..Q6, P1..P4).
    pub fn canonical_rep(&self, d: &Divisor) -> Divisor {
        let d = self.greedy_reduce(*d);
        let deg = d.degree();
        let target = self.coords(&d);
        let residual = |y: &[i64; NUM_POINTS]| -> bool {
            for i in 0..NUM_POINTS {
                let diff = y[i] - target[i];
                if i < self.rank {
                    if diff.rem_euclid(self.diag[i]) != 0 {
                        return false;
                    }
                } else if diff != 0 {
                    return false;
                }
            }
            true
        };
        for l1 in 0..=d.l1() {
            if (l1 - deg) % 2 != 0 || l1 < deg.abs() {
                continue;
            }
            let mut v = Divisor::zero();
            if let Some(found) = self.search_rep(&mut v, 0, l1, deg, &residual) {
                return found;
            }
        }
        d
    }

    /// Cheap descent pass: subtract generators while the L1 norm drops. Keeps
    /// the class fixed and bounds the exhaustive search that follows.
    fn greedy_reduce(&self, mut d: Divisor) -> Divisor {
        loop {
            let mut improved = false;
            for g in &self.generators {
                loop {
                    let down = d - *g;
                    let up = d + *g;
                    if down.l1() < d.l1() {
                        d = down;
                    } else if up.l1() < d.l1() {
                        d = up;
                    } else {
                        break;
                    }
                    improved = true;
                }
            }
            if !improved {
                return d;
            }
        }
    }

    /// Depth-first lexicographic search over coefficient vectors with exact
    /// L1 budget and degree; first hit is the lex-minimal representative.
    fn search_rep(
        &self,
        v: &mut Divisor,
        slot: usize,
        budget: i64,
        deg_left: i64,
        residual: &dyn Fn(&[i64; NUM_POINTS]) -> bool,
    ) -> Option<Divisor> {
        if slot == NUM_POINTS {
            if budget == 0 && deg_left == 0 {
                let y = self.coords(v);
                if residual(&y) {
                    return Some(*v);
                }
            }
            return None;
        }
        for c in -budget..=budget {
            let rest = budget - c.abs();
            // remaining slots must absorb deg_left - c with L1 exactly `rest`
            let need = (deg_left - c).abs();
            if need > rest || (rest - need) % 2 != 0 {
                continue;
            }
            v.coeffs[slot] = c;
            if let Some(found) = self.search_rep(v, slot + 1, rest, deg_left - c, residual) {
                return Some(found);
            }
        }
        v.coeffs[slot] = 0;
        None
    }
}

/// Presentation key: L1, then positive labels, then negative labels.
fn display_key(d: &Divisor) -> (i64, Vec<i64>, Vec<i64>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (i, &c) in d.coeffs.iter().enumerate() {
        for _ in 0..c.abs() {
            if c > 0 {
                pos.push(i as i64);
            } else {
                neg.push(i as i64);
            }
        }
    }
    (d.l1(), pos, neg)
}

/// A divisor class: a representative plus the lattice it is reduced against.
#[derive(Debug, Clone)]
pub struct DivisorClass {
    pub lattice: Arc<RelationLattice>,
    pub rep: Divisor,
}

impl DivisorClass {
    /// Class equality: the representative difference lies in the lattice.
    pub fn class_eq(&self, other: &DivisorClass) -> Result<bool> {
        if self.lattice.as_ref() != other.lattice.as_ref() {
            return Err(Error::MixedLattice);
        }
        Ok(self.lattice.contains(&(self.rep - other.rep)))
    }

    /// Pullback class under the order-3 symmetry.
    pub fn phi3_pullback(&self) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            rep: self.rep.phi3_pullback(),
        }
    }

    pub fn canonical(&self) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            rep: self.lattice.canonical_rep(&self.rep),
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::PointLabel::*;
    use super::*;

    fn div(terms: &[(PointLabel, i64)]) -> Divisor {
        Divisor::from_terms(terms)
    }

    #[test]
    fn table_row_identity() {
        // L(Q1+Q3-Q5) = L(Q3+Q5-Q1)
        let lat = RelationLattice::lawson();
        let a = lat.class(div(&[(Q1, 1), (Q3, 1), (Q5, -1)]));
        let b = lat.class(div(&[(Q3, 1), (Q5, 1), (Q1, -1)]));
        assert!(a.class_eq(&b).unwrap());
    }

    #[test]
    fn distinct_weierstrass_points() {
        let lat = RelationLattice::lawson();
        let a = lat.class(Divisor::point(Q1));
        assert!(a.class_eq(&a).unwrap());
        let b = lat.class(Divisor::point(Q2));
        assert!(!a.class_eq(&b).unwrap());
    }

    #[test]
    fn mixed_lattices_rejected() {
        let lat1 = RelationLattice::lawson();
        let lat2 = Arc::new(RelationLattice::from_generators(vec![div(&[
            (Q1, 2),
            (Q2, -2),
        ])]));
        let a = lat1.class(Divisor::point(Q1));
        let b = lat2.class(Divisor::point(Q1));
        assert_eq!(a.class_eq(&b), Err(Error::MixedLattice));
    }

    #[test]
    fn torsion_group_is_z2_to_the_4() {
        let lat = RelationLattice::lawson();
        assert_eq!(lat.torsion_group(), vec![2, 2, 2, 2]);
    }

    #[test]
    fn class_orders() {
        let lat = RelationLattice::lawson();
        let d = Divisor::point(Q2) - Divisor::point(Q1);
        assert_eq!(lat.class_order(&d), Some(2));
        assert_eq!(lat.class_order(&Divisor::zero()), Some(1));
        // P1 - Q1 is not torsion: only P1 + P3 is constrained
        let p = Divisor::point(P1) - Divisor::point(Q1);
        assert_eq!(lat.class_order(&p), None);
    }

    #[test]
    fn sixteen_spin_classes() {
        let lat = RelationLattice::lawson();
        let classes = lat.enumerate_spin_classes();
        assert_eq!(classes.len(), 16);
        for c in &classes {
            assert_eq!(c.rep.degree(), 1);
            let twice = c.rep + c.rep - div(&[(Q1, 2)]);
            assert!(lat.contains(&twice));
        }
        // contains [Q3]
        let q3 = lat.class(Divisor::point(Q3));
        assert!(classes.iter().any(|c| c.class_eq(&q3).unwrap()));
        // [3Q1 - 2Q2] reduces to one of the sixteen
        let odd = lat.class(div(&[(Q1, 3), (Q2, -2)]));
        assert_eq!(
            classes
                .iter()
                .filter(|c| c.class_eq(&odd).unwrap())
                .count(),
            1
        );
    }

    #[test]
    fn pullback_permutation() {
        let lat = RelationLattice::lawson();
        let q1 = lat.class(Divisor::point(Q1));
        assert!(q1
            .phi3_pullback()
            .class_eq(&lat.class(Divisor::point(Q5)))
            .unwrap());
        let c = lat.class(div(&[(Q2, 1), (Q3, 1), (Q1, -1)]));
        let image = lat.class(div(&[(Q5, 1), (Q6, 1), (Q1, -1)]));
        assert!(c.phi3_pullback().class_eq(&image).unwrap());
        let zero = lat.class(Divisor::zero());
        assert!(zero.phi3_pullback().class_eq(&zero).unwrap());
    }

    #[test]
    fn unique_fixed_spin_class() {
        let lat = RelationLattice::lawson();
        let fixed = lat.fixed_spin_classes();
        assert_eq!(fixed.len(), 1);
        let s = lat.class(div(&[(Q1, 1), (Q3, 1), (Q5, -1)]));
        assert!(fixed[0].class_eq(&s).unwrap());
        // table identity for the same class
        assert!(fixed[0]
            .class_eq(&lat.class(div(&[(Q3, 1), (Q5, 1), (Q1, -1)])))
            .unwrap());
        // order-3: triple pullback is the identity on every spin class
        for c in lat.enumerate_spin_classes() {
            let mut t = c.clone();
            for _ in 0..3 {
                t = t.phi3_pullback();
            }
            assert!(t.class_eq(&c).unwrap());
        }
    }

    #[test]
    fn canonical_rep_examples() {
        let lat = RelationLattice::lawson();
        assert_eq!(
            lat.canonical_rep(&div(&[(Q1, 3), (Q2, -2)])),
            Divisor::point(Q1)
        );
        // lex order puts the -Q1 slot first among the L1 = 3 members
        assert_eq!(
            lat.canonical_rep(&div(&[(Q1, 1), (Q3, 1), (Q5, -1)])),
            div(&[(Q3, 1), (Q5, 1), (Q1, -1)])
        );
        assert_eq!(format!("{}", div(&[(Q3, 1), (Q5, 1), (Q1, -1)])), "Q3+Q5-Q1");
    }

    #[test]
    fn snf_transform_consistency() {
        // u * a * v = diag, and uinv * u = identity
        use num_traits::Zero;
        let lat = RelationLattice::lawson();
        let gens = &lat.generators;
        let a: Vec<Vec<BigInt>> = (0..NUM_POINTS)
            .map(|r| gens.iter().map(|g| BigInt::from(g.coeffs[r])).collect())
            .collect();
        let snf = smith_normal_form(&a);
        let m = NUM_POINTS;
        let n = gens.len();
        // check u*a*v == d
        let mut ua = vec![vec![BigInt::zero(); n]; m];
        for i in 0..m {
            for j in 0..n {
                for k in 0..m {
                    let t = &snf.u[i][k] * &a[k][j];
                    ua[i][j] += t;
                }
            }
        }
        for i in 0..m {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for k in 0..n {
                    acc += &ua[i][k] * &snf.v[k][j];
                }
                let expect = if i == j && i < snf.diag.len() {
                    snf.diag[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(acc, expect, "U*A*V mismatch at ({i},{j})");
            }
        }
        for i in 0..m {
            for j in 0..m {
                let mut acc = BigInt::zero();
                for k in 0..m {
                    acc += &snf.uinv[i][k] * &snf.u[k][j];
                }
                assert_eq!(acc, if i == j { BigInt::one() } else { BigInt::zero() });
            }
        }
    }
}
