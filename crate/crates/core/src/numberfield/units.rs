//! Units of the cubic order `Z[theta]`: exact norms, multiplication and
//! inversion, the fundamental-unit search, regulators, and the certified
//! alpha-box enumeration.
//!
//! Elements are integer coordinate triples in the power basis `1, theta,
//! theta^2`. All group operations are exact integer arithmetic (reduction by
//! `theta^3 = -a theta^2 - b theta - c`); floating point enters only through
//! embedding values and their logarithms. The fundamental-unit search scans
//! a coordinate box, maps units to log-embedding vectors, and Gauss-reduces
//! the resulting rank-2 lattice while mirroring every vector operation by
//! the exact element operation, so dependence is decided by an exact test
//! (the residual element reduces to the torsion class) rather than a float
//! threshold.
//!
//! The box enumeration inverts the picture: every unit mod `+-1` is
//! `e1^{m1} e2^{m2}`, a unit with `0 < alpha_k <= T_k` has log-embedding
//! sup-norm at most `M_T = max(2T_1 + T_2, T_1 + 2T_2)/6`, and the exponent
//! vector is bounded by the dual-basis column norms times `M_T`. The
//! returned certificate records exactly those radii.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::poly::CubicPoly;
use super::NumberFieldError;

/// Exponent grid size cap for the box enumeration.
const MAX_EXPONENT_PAIRS: u128 = 20_000_000;

/// Below this log-embedding determinant a unit pair is treated as
/// multiplicatively dependent.
pub const REGULATOR_SINGULAR_TOL: f64 = 1e-12;

/// How the fundamental-unit pair was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitStatus {
    /// Found by bounded search and lattice reduction; generates a finite
    /// index subgroup of the unit group, with no proof the index is one.
    Candidate,
    /// Matches an ingested table entry (same lattice, verified exactly).
    TableConfirmed,
}

impl UnitStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            UnitStatus::Candidate => "candidate",
            UnitStatus::TableConfirmed => "table_confirmed",
        }
    }
}

/// A unit of the order, stored modulo sign: the first nonzero coordinate is
/// positive. `alpha` entries are nonnegative; the element is regular when
/// both are strictly positive (distinct absolute embedding values).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitElement {
    coords: [i64; 3],
    embeddings: [f64; 3],
    alpha: [f64; 2],
    regular: bool,
}

impl UnitElement {
    /// Validates `|norm| = 1` exactly, canonicalizes the sign, and derives
    /// embeddings and alpha-coordinates from the supplied root
    /// approximations (descending).
    pub fn new(
        poly: &CubicPoly,
        roots: &[f64; 3],
        coords: [i64; 3],
    ) -> Result<Self, NumberFieldError> {
        if coords == [0, 0, 0] {
            return Err(NumberFieldError::ZeroElement(coords));
        }
        let n = norm(poly, coords)?;
        if n != 1 && n != -1 {
            return Err(NumberFieldError::NotAUnit(n));
        }
        let coords = canonical_sign(coords);
        let embeddings = embed(roots, coords);
        let mut mags = [
            embeddings[0].abs(),
            embeddings[1].abs(),
            embeddings[2].abs(),
        ];
        mags.sort_by(|a, b| b.total_cmp(a));
        // alpha_k = k (3 - k) log(mag_k / mag_{k+1}); both weights equal 2
        // in rank 2.
        let alpha = [2.0 * (mags[0] / mags[1]).ln(), 2.0 * (mags[1] / mags[2]).ln()];
        let regular = alpha[0] > 0.0 && alpha[1] > 0.0;
        Ok(Self {
            coords,
            embeddings,
            alpha,
            regular,
        })
    }

    pub fn coords(&self) -> [i64; 3] {
        self.coords
    }

    pub fn embeddings(&self) -> [f64; 3] {
        self.embeddings
    }

    pub fn alpha(&self) -> [f64; 2] {
        self.alpha
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    /// `(log |rho_1(u)|, log |rho_2(u)|)` in the fixed embedding order; the
    /// third logarithm is minus their sum.
    pub fn log_vec(&self) -> [f64; 2] {
        [self.embeddings[0].abs().ln(), self.embeddings[1].abs().ln()]
    }

    /// The torsion class `+-1`.
    pub fn is_torsion(&self) -> bool {
        self.coords == [1, 0, 0]
    }

    pub fn label(&self) -> String {
        format!("{},{},{}", self.coords[0], self.coords[1], self.coords[2])
    }
}

fn canonical_sign(coords: [i64; 3]) -> [i64; 3] {
    for v in coords {
        if v != 0 {
            return if v > 0 {
                coords
            } else {
                [-coords[0], -coords[1], -coords[2]]
            };
        }
    }
    coords
}

fn embed(roots: &[f64; 3], coords: [i64; 3]) -> [f64; 3] {
    let mut out = [0.0f64; 3];
    for (slot, &r) in out.iter_mut().zip(roots.iter()) {
        *slot = (coords[2] as f64 * r + coords[1] as f64) * r + coords[0] as f64;
    }
    out
}

/// Multiplication-by-theta matrix in the power basis (columns are the images
/// of 1, theta, theta^2).
fn companion(poly: &CubicPoly) -> [[i128; 3]; 3] {
    let (a, b, c) = poly.coeffs();
    [
        [0, 0, -(c as i128)],
        [1, 0, -(b as i128)],
        [0, 1, -(a as i128)],
    ]
}

fn mat_mul(x: &[[i128; 3]; 3], y: &[[i128; 3]; 3]) -> [[i128; 3]; 3] {
    let mut out = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    out
}

/// Representation matrix of `c0 + c1 theta + c2 theta^2`.
fn rep_matrix(poly: &CubicPoly, coords: [i64; 3]) -> [[i128; 3]; 3] {
    let c = companion(poly);
    let c2 = mat_mul(&c, &c);
    let mut out = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = coords[1] as i128 * c[i][j] + coords[2] as i128 * c2[i][j];
        }
        out[i][i] += coords[0] as i128;
    }
    out
}

fn det3(m: &[[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Field norm as the determinant of the representation matrix, exact in
/// `i128`. The entry-size guard keeps the determinant away from overflow;
/// oversized inputs fall back to the resultant and must fit `i128`.
pub fn norm(poly: &CubicPoly, coords: [i64; 3]) -> Result<i128, NumberFieldError> {
    let m = rep_matrix(poly, coords);
    let emax = m
        .iter()
        .flatten()
        .map(|v| v.unsigned_abs())
        .max()
        .unwrap_or(0);
    // 6 * emax^3 < 2^126 keeps det3 exact.
    if emax < (1u128 << 41) {
        return Ok(det3(&m));
    }
    let big = resultant_norm(poly, coords);
    i128::try_from(&big).map_err(|_| NumberFieldError::CoordinateOverflow)
}

/// Field norm as the Sylvester resultant of the defining polynomial and the
/// element polynomial; an independent exact oracle for [`norm`] (different
/// construction, arbitrary precision).
pub fn resultant_norm(poly: &CubicPoly, coords: [i64; 3]) -> BigInt {
    let (a, b, c) = poly.coeffs();
    let [c0, c1, c2] = coords;
    if c2 == 0 && c1 == 0 {
        return BigInt::from(c0) * c0 * c0;
    }
    let f = [1i64, a, b, c]; // descending
    let rows: Vec<Vec<i64>> = if c2 != 0 {
        // deg g = 2: two shifted rows of f, three of g, 5x5.
        let g = [c2, c1, c0];
        vec![
            vec![f[0], f[1], f[2], f[3], 0],
            vec![0, f[0], f[1], f[2], f[3]],
            vec![g[0], g[1], g[2], 0, 0],
            vec![0, g[0], g[1], g[2], 0],
            vec![0, 0, g[0], g[1], g[2]],
        ]
    } else {
        // deg g = 1: one row of f, three of g, 4x4.
        let g = [c1, c0];
        vec![
            vec![f[0], f[1], f[2], f[3]],
            vec![g[0], g[1], 0, 0],
            vec![0, g[0], g[1], 0],
            vec![0, 0, g[0], g[1]],
        ]
    };
    let big: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    det_big(&big)
}

/// Cofactor expansion; matrices here are at most 5x5.
fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::from(0);
    for j in 0..n {
        if m[0][j] == BigInt::from(0) {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det_big(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Product in the order, reduced by the defining relation; checked integer
/// arithmetic throughout.
pub fn unit_mul(
    poly: &CubicPoly,
    u: [i64; 3],
    v: [i64; 3],
) -> Result<[i64; 3], NumberFieldError> {
    let (a, b, c) = poly.coeffs();
    let mut w = [0i128; 5];
    for i in 0..3 {
        for j in 0..3 {
            let prod = (u[i] as i128)
                .checked_mul(v[j] as i128)
                .ok_or(NumberFieldError::CoordinateOverflow)?;
            w[i + j] = w[i + j]
                .checked_add(prod)
                .ok_or(NumberFieldError::CoordinateOverflow)?;
        }
    }
    // x^d = x^{d-3} (-a x^2 - b x - c) for d = 4, 3.
    for d in [4usize, 3] {
        let coeff = w[d];
        if coeff == 0 {
            continue;
        }
        w[d] = 0;
        for (off, m) in [(1usize, a), (2, b), (3, c)] {
            let sub = coeff
                .checked_mul(m as i128)
                .ok_or(NumberFieldError::CoordinateOverflow)?;
            w[d - off] = w[d - off]
                .checked_sub(sub)
                .ok_or(NumberFieldError::CoordinateOverflow)?;
        }
    }
    let mut out = [0i64; 3];
    for i in 0..3 {
        out[i] = i64::try_from(w[i]).map_err(|_| NumberFieldError::CoordinateOverflow)?;
    }
    Ok(out)
}

/// Inverse of a unit via the adjugate of its representation matrix: the
/// determinant is `+-1`, so the inverse matrix is integral and its first
/// column is the coordinate vector of `u^{-1}`.
pub fn unit_inverse(poly: &CubicPoly, u: [i64; 3]) -> Result<[i64; 3], NumberFieldError> {
    let n = norm(poly, u)?;
    if n != 1 && n != -1 {
        return Err(NumberFieldError::NotAUnit(n));
    }
    let m = rep_matrix(poly, u);
    let minor = |r: usize, c: usize| -> i128 {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
    };
    let mut out = [0i64; 3];
    for i in 0..3 {
        // adj[i][0] = (-1)^i * minor(0, i); inverse column = adj / det.
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let val = sign * minor(0, i) * n;
        out[i] = i64::try_from(val).map_err(|_| NumberFieldError::CoordinateOverflow)?;
    }
    Ok(out)
}

/// `u^m` for any integer exponent, by binary powering (inverting first for
/// negative exponents).
pub fn unit_pow(poly: &CubicPoly, u: [i64; 3], m: i64) -> Result<[i64; 3], NumberFieldError> {
    let mut base = if m < 0 { unit_inverse(poly, u)? } else { u };
    let mut exp = m.unsigned_abs();
    let mut acc = [1i64, 0, 0];
    while exp > 0 {
        if exp & 1 == 1 {
            acc = unit_mul(poly, acc, base)?;
        }
        exp >>= 1;
        if exp > 0 {
            base = unit_mul(poly, base, base)?;
        }
    }
    Ok(acc)
}

fn dot2(x: [f64; 2], y: [f64; 2]) -> f64 {
    x[0] * y[0] + x[1] * y[1]
}

fn norm2(x: [f64; 2]) -> f64 {
    dot2(x, x)
}

/// Ordering key for unit candidates: squared log length quantized to 1e-9
/// (so that algebraically tied lengths — e.g. a unit and its inverse — fall
/// through to the exact coordinate tie-break instead of last-ulp noise),
/// then coordinates.
fn sort_key(u: &UnitElement) -> (i64, [i64; 3]) {
    ((norm2(u.log_vec()) * 1e9).round() as i64, u.coords())
}

/// Exhaustive unit scan over `|coords_i| <= height`, followed by
/// element-tracked Gauss reduction of the log-embedding lattice. Returns the
/// reduced pair (sorted by log length, then coordinates) and its
/// certification status: `TableConfirmed` exactly when a supplied table pair
/// generates the same lattice, verified by exact element arithmetic.
///
/// The reduced pair generates the full lattice of the units found in the
/// scan, so its regulator is an integer multiple of the true regulator (one,
/// unless every fundamental-unit representative needs coordinates above the
/// height bound).
pub fn find_fundamental_units(
    poly: &CubicPoly,
    roots: &[f64; 3],
    height: i64,
    table: Option<&[UnitElement; 2]>,
) -> Result<([UnitElement; 2], UnitStatus), NumberFieldError> {
    if height < 1 {
        return Err(NumberFieldError::BadConfigBound(height));
    }
    let mut seen: BTreeSet<[i64; 3]> = BTreeSet::new();
    let mut found: Vec<UnitElement> = Vec::new();
    for c0 in -height..=height {
        for c1 in -height..=height {
            for c2 in -height..=height {
                let coords = [c0, c1, c2];
                if coords == [0, 0, 0] {
                    continue;
                }
                let n = norm(poly, coords)?;
                if n != 1 && n != -1 {
                    continue;
                }
                let u = UnitElement::new(poly, roots, coords)?;
                if u.is_torsion() || !seen.insert(u.coords()) {
                    continue;
                }
                found.push(u);
            }
        }
    }
    found.sort_by_key(sort_key);

    let mut basis: Vec<UnitElement> = Vec::new();
    for cand in found {
        let reduced = reduce_against(poly, roots, cand, &basis)?;
        if reduced.is_torsion() {
            continue;
        }
        basis.push(reduced);
        if basis.len() >= 2 {
            gauss_reduce(poly, roots, &mut basis)?;
        }
        // A third independent vector cannot exist in a rank-2 lattice; a
        // residual after reduction means the lattice got finer, and the
        // reduction pass above already folded it in.
        debug_assert!(basis.len() <= 2);
    }
    if basis.len() < 2 {
        return Err(NumberFieldError::InsufficientUnits { bound: height });
    }
    basis.sort_by_key(sort_key);
    let pair = [basis[0].clone(), basis[1].clone()];
    let status = match table {
        Some(tab) if same_lattice(poly, &pair, tab)? => UnitStatus::TableConfirmed,
        _ => UnitStatus::Candidate,
    };
    Ok((pair, status))
}

/// Size-reduce a unit against the current basis, mirroring every vector
/// operation with the exact element operation. The result is either torsion
/// (dependent) or a lattice vector no basis member reduces further.
fn reduce_against(
    poly: &CubicPoly,
    roots: &[f64; 3],
    mut cur: UnitElement,
    basis: &[UnitElement],
) -> Result<UnitElement, NumberFieldError> {
    for _ in 0..64 {
        let mut changed = false;
        for b in basis {
            let denom = norm2(b.log_vec());
            if denom == 0.0 {
                continue;
            }
            let t = (dot2(cur.log_vec(), b.log_vec()) / denom).round();
            if t != 0.0 && t.abs() < 1e6 {
                let shifted = unit_mul(
                    poly,
                    cur.coords(),
                    unit_pow(poly, b.coords(), -(t as i64))?,
                )?;
                cur = UnitElement::new(poly, roots, shifted)?;
                changed = true;
            }
        }
        if !changed {
            return Ok(cur);
        }
        if cur.is_torsion() {
            return Ok(cur);
        }
    }
    Err(NumberFieldError::ReductionFailed)
}

/// Lagrange reduction of a basis list, dropping members that reduce to
/// torsion. Terminates because the exact element operations strictly
/// shorten the log vectors.
fn gauss_reduce(
    poly: &CubicPoly,
    roots: &[f64; 3],
    basis: &mut Vec<UnitElement>,
) -> Result<(), NumberFieldError> {
    for _ in 0..256 {
        basis.sort_by_key(sort_key);
        basis.retain(|u| !u.is_torsion());
        if basis.len() < 2 {
            return Ok(());
        }
        let mut changed = false;
        for i in 1..basis.len() {
            let shorter: Vec<UnitElement> = basis[..i].to_vec();
            let reduced = reduce_against(poly, roots, basis[i].clone(), &shorter)?;
            if reduced.coords() != basis[i].coords() {
                basis[i] = reduced;
                changed = true;
            }
        }
        if !changed {
            basis.retain(|u| !u.is_torsion());
            return Ok(());
        }
    }
    Err(NumberFieldError::ReductionFailed)
}

/// Whether `tab` generates the same rank-2 lattice as `basis`: each table
/// unit must be an exact power product of the basis (integer exponents
/// solved in log space, then verified by element arithmetic), and the
/// exponent matrix must have determinant `+-1`.
fn same_lattice(
    poly: &CubicPoly,
    basis: &[UnitElement; 2],
    tab: &[UnitElement; 2],
) -> Result<bool, NumberFieldError> {
    let g = [basis[0].log_vec(), basis[1].log_vec()];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if det.abs() < REGULATOR_SINGULAR_TOL {
        return Err(NumberFieldError::DependentUnits);
    }
    let mut exps = [[0i64; 2]; 2];
    for (row, t) in exps.iter_mut().zip(tab.iter()) {
        let w = t.log_vec();
        // Solve m1 g0 + m2 g1 = w.
        let m1 = (w[0] * g[1][1] - w[1] * g[1][0]) / det;
        let m2 = (g[0][0] * w[1] - g[0][1] * w[0]) / det;
        let (r1, r2) = (m1.round(), m2.round());
        if (m1 - r1).abs() > 1e-6 || (m2 - r2).abs() > 1e-6 {
            return Ok(false);
        }
        let prod = unit_mul(
            poly,
            unit_pow(poly, basis[0].coords(), r1 as i64)?,
            unit_pow(poly, basis[1].coords(), r2 as i64)?,
        )?;
        if canonical_sign(prod) != t.coords() {
            return Ok(false);
        }
        *row = [r1 as i64, r2 as i64];
    }
    let m_det = exps[0][0] * exps[1][1] - exps[0][1] * exps[1][0];
    Ok(m_det == 1 || m_det == -1)
}

/// `|det (log |rho_i(e_j)|)_{i,j=1,2}|`; errors when the pair is dependent.
pub fn regulator(units: &[UnitElement; 2]) -> Result<f64, NumberFieldError> {
    let v = units[0].log_vec();
    let w = units[1].log_vec();
    let det = (v[0] * w[1] - v[1] * w[0]).abs();
    if det < REGULATOR_SINGULAR_TOL {
        return Err(NumberFieldError::DependentUnits);
    }
    Ok(det)
}

/// The exact radii behind a box enumeration: the requested box, the
/// log-embedding sup-norm cap `M_T`, the exponent grid bounds derived from
/// it, and the status of the fundamental units the grid was built on.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessCertificate {
    pub box_bounds: [f64; 2],
    pub log_cap: f64,
    pub exponent_bounds: [i64; 2],
    pub status: UnitStatus,
}

/// All units mod `+-1` with `0 < alpha_k <= t_k`, plus the certificate that
/// the exponent grid provably covers the box.
///
/// A unit in the box has sorted log-embedding values `v_1 >= v_2 >= v_3`
/// summing to zero with `2(v_1 - v_2) <= t_1` and `2(v_2 - v_3) <= t_2`, so
/// `max_i |v_i| <= M_T = max(2 t_1 + t_2, t_1 + 2 t_2)/6`; the exponent
/// bounds follow from the dual basis. Grid points whose log vector exceeds
/// `M_T` by a safety margin are skipped without exact arithmetic; survivors
/// are built exactly and filtered by the alpha condition as written.
pub fn enumerate_units_in_box(
    poly: &CubicPoly,
    roots: &[f64; 3],
    units: &[UnitElement; 2],
    status: UnitStatus,
    t: [f64; 2],
    strict: bool,
) -> Result<(Vec<UnitElement>, CompletenessCertificate), NumberFieldError> {
    for v in t {
        if !(v.is_finite() && v >= 0.0) {
            return Err(NumberFieldError::BadBox(v));
        }
    }
    if strict && status == UnitStatus::Candidate {
        return Err(NumberFieldError::UncertifiedUnits);
    }
    let log_cap = ((2.0 * t[0] + t[1]).max(t[0] + 2.0 * t[1])) / 6.0;
    let g = [units[0].log_vec(), units[1].log_vec()];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if det.abs() < REGULATOR_SINGULAR_TOL {
        return Err(NumberFieldError::DependentUnits);
    }
    // inv = G^{-1}; |m_i| <= M_T * (|inv[0][i]| + |inv[1][i]|).
    let inv = [
        [g[1][1] / det, -g[0][1] / det],
        [-g[1][0] / det, g[0][0] / det],
    ];
    let mut bounds = [0i64; 2];
    for i in 0..2 {
        let colnorm = inv[0][i].abs() + inv[1][i].abs();
        bounds[i] = (log_cap * colnorm * (1.0 + 1e-12) + 1e-9).floor() as i64;
    }
    let cert = CompletenessCertificate {
        box_bounds: t,
        log_cap,
        exponent_bounds: bounds,
        status,
    };
    if t[0] == 0.0 || t[1] == 0.0 {
        return Ok((Vec::new(), cert));
    }
    let grid = (2 * bounds[0] as u128 + 1) * (2 * bounds[1] as u128 + 1);
    if grid > MAX_EXPONENT_PAIRS {
        return Err(NumberFieldError::BoxTooLarge(grid));
    }
    let mut out: Vec<UnitElement> = Vec::new();
    for m1 in -bounds[0]..=bounds[0] {
        for m2 in -bounds[1]..=bounds[1] {
            if (m1, m2) == (0, 0) {
                continue;
            }
            let w0 = m1 as f64 * g[0][0] + m2 as f64 * g[1][0];
            let w1 = m1 as f64 * g[0][1] + m2 as f64 * g[1][1];
            let w2 = -(w0 + w1);
            if w0.abs().max(w1.abs()).max(w2.abs()) > log_cap + 0.5 {
                continue;
            }
            let coords = unit_mul(
                poly,
                unit_pow(poly, units[0].coords(), m1)?,
                unit_pow(poly, units[1].coords(), m2)?,
            )?;
            let u = UnitElement::new(poly, roots, coords)?;
            let a = u.alpha();
            if a[0] > 0.0 && a[0] <= t[0] && a[1] > 0.0 && a[1] <= t[1] {
                out.push(u);
            }
        }
    }
    out.sort_by(|x, y| x.coords().cmp(&y.coords()));
    Ok((out, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn disc49() -> (CubicPoly, [f64; 3]) {
        let p = CubicPoly::new(-1, -2, 1).unwrap();
        let roots = p.root_approx(1e-13).unwrap();
        (p, roots)
    }

    fn disc361() -> (CubicPoly, [f64; 3]) {
        let p = CubicPoly::new(-1, -6, 7).unwrap();
        let roots = p.root_approx(1e-13).unwrap();
        (p, roots)
    }

    #[test]
    fn norm_frozen_values() {
        let (p, _) = disc49();
        // N(theta) = -c, N(1 - theta) = f(1).
        assert_eq!(norm(&p, [0, 1, 0]).unwrap(), -1);
        assert_eq!(norm(&p, [1, -1, 0]).unwrap(), -1);
        assert_eq!(norm(&p, [1, 1, -1]).unwrap(), 1);
        assert_eq!(norm(&p, [2, 1, -1]).unwrap(), -1);
        assert_eq!(norm(&p, [1, 0, 0]).unwrap(), 1);
        assert_eq!(norm(&p, [3, 0, 0]).unwrap(), 27);
        assert_eq!(norm(&p, [0, 2, 0]).unwrap(), -8);
    }

    #[test]
    fn norm_matches_resultant_oracle() {
        // Companion determinant against the Sylvester resultant on a full
        // small coordinate scan: two independent exact constructions.
        let (p, _) = disc49();
        for c0 in -3i64..=3 {
            for c1 in -3i64..=3 {
                for c2 in -3i64..=3 {
                    if (c0, c1, c2) == (0, 0, 0) {
                        continue;
                    }
                    let via_det = norm(&p, [c0, c1, c2]).unwrap();
                    let via_res = resultant_norm(&p, [c0, c1, c2]);
                    assert_eq!(BigInt::from(via_det), via_res, "at {c0},{c1},{c2}");
                }
            }
        }
    }

    #[test]
    fn multiplication_and_inversion() {
        let (p, _) = disc49();
        // theta^2, theta^3 = theta^2 + 2 theta - 1.
        assert_eq!(unit_mul(&p, [0, 1, 0], [0, 1, 0]).unwrap(), [0, 0, 1]);
        assert_eq!(unit_mul(&p, [0, 0, 1], [0, 1, 0]).unwrap(), [-1, 2, 1]);
        // theta * (2 + theta - theta^2) = 1.
        assert_eq!(unit_inverse(&p, [0, 1, 0]).unwrap(), [2, 1, -1]);
        assert_eq!(unit_mul(&p, [0, 1, 0], [2, 1, -1]).unwrap(), [1, 0, 0]);
        // Double inversion is the identity on units.
        for u in [[1i64, -1, 0], [1, 1, -1], [0, 1, 0]] {
            let inv = unit_inverse(&p, u).unwrap();
            assert_eq!(unit_inverse(&p, inv).unwrap(), u);
            assert_eq!(unit_mul(&p, u, inv).unwrap(), [1, 0, 0]);
        }
        // Powers agree with repeated multiplication.
        let u = [1i64, 1, -1];
        let u3 = unit_mul(&p, unit_mul(&p, u, u).unwrap(), u).unwrap();
        assert_eq!(unit_pow(&p, u, 3).unwrap(), u3);
        assert_eq!(
            unit_pow(&p, u, -2).unwrap(),
            unit_pow(&p, unit_inverse(&p, u).unwrap(), 2).unwrap()
        );
        assert_eq!(unit_pow(&p, u, 0).unwrap(), [1, 0, 0]);
    }

    #[test]
    fn unit_element_canonical_sign_and_alpha() {
        let (p, roots) = disc49();
        let u = UnitElement::new(&p, &roots, [0, -1, 0]).unwrap();
        assert_eq!(u.coords(), [0, 1, 0]);
        // theta itself: alpha frozen from the certified embeddings.
        assert!((u.alpha()[0] - 0.7362765909572936).abs() < 1e-9);
        assert!((u.alpha()[1] - 2.0606224526554913).abs() < 1e-9);
        assert!(u.is_regular());
        // Torsion: both alphas vanish, not regular.
        let one = UnitElement::new(&p, &roots, [-1, 0, 0]).unwrap();
        assert_eq!(one.coords(), [1, 0, 0]);
        assert!(one.is_torsion());
        assert_eq!(one.alpha(), [0.0, 0.0]);
        assert!(!one.is_regular());
        // Rejections.
        assert!(matches!(
            UnitElement::new(&p, &roots, [0, 0, 0]),
            Err(NumberFieldError::ZeroElement(_))
        ));
        assert!(matches!(
            UnitElement::new(&p, &roots, [3, 0, 0]),
            Err(NumberFieldError::NotAUnit(27))
        ));
    }

    #[test]
    fn alpha_of_inverse_reverses() {
        let (p, roots) = disc49();
        for u in [[1i64, -1, 0], [1, 1, -1], [0, 1, 0], [1, 2, -1]] {
            if norm(&p, u).unwrap().abs() != 1 {
                continue;
            }
            let fwd = UnitElement::new(&p, &roots, u).unwrap();
            let inv =
                UnitElement::new(&p, &roots, unit_inverse(&p, u).unwrap()).unwrap();
            // Embeddings of the inverse are reciprocals, so the sorted
            // magnitudes reverse and the alpha vector flips.
            assert!((fwd.alpha()[0] - inv.alpha()[1]).abs() < 1e-9);
            assert!((fwd.alpha()[1] - inv.alpha()[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn fundamental_units_disc49_frozen() {
        let (p, roots) = disc49();
        let (units, status) = find_fundamental_units(&p, &roots, 10, None).unwrap();
        // Canonical reduced pair: ties between a unit and its inverse fall
        // to the coordinate order, so 1 - theta and 1 - theta^2 win over
        // their inverses.
        assert_eq!(units[0].coords(), [1, -1, 0]);
        assert_eq!(units[1].coords(), [1, 0, -1]);
        assert_eq!(status, UnitStatus::Candidate);
        let r = regulator(&units).unwrap();
        assert!((r - 0.525454682122572).abs() < 1e-12);
        // The same lattice is already reachable at height 1.
        let (small, _) = find_fundamental_units(&p, &roots, 1, None).unwrap();
        let r_small = regulator(&small).unwrap();
        assert!((r - r_small).abs() < 1e-12);
    }

    #[test]
    fn fundamental_units_insufficient_height() {
        // The disc-361 field needs coordinates above 1 for a second
        // independent unit.
        let (p, roots) = disc361();
        assert!(matches!(
            find_fundamental_units(&p, &roots, 1, None),
            Err(NumberFieldError::InsufficientUnits { bound: 1 })
        ));
        assert!(matches!(
            find_fundamental_units(&p, &roots, 0, None),
            Err(NumberFieldError::BadConfigBound(0))
        ));
    }

    #[test]
    fn table_confirmation() {
        let (p, roots) = disc49();
        let tab = [
            UnitElement::new(&p, &roots, [1, -1, 0]).unwrap(),
            UnitElement::new(&p, &roots, [1, 1, -1]).unwrap(),
        ];
        let (_, status) = find_fundamental_units(&p, &roots, 10, Some(&tab)).unwrap();
        assert_eq!(status, UnitStatus::TableConfirmed);
        // A squared unit spans an index-2 sublattice: same span test fails
        // on the determinant.
        let sq = unit_mul(&p, [1, -1, 0], [1, -1, 0]).unwrap();
        let bad = [
            UnitElement::new(&p, &roots, sq).unwrap(),
            UnitElement::new(&p, &roots, [1, 1, -1]).unwrap(),
        ];
        let (_, status) = find_fundamental_units(&p, &roots, 10, Some(&bad)).unwrap();
        assert_eq!(status, UnitStatus::Candidate);
    }

    #[test]
    fn regulator_properties() {
        let (p, roots) = disc49();
        let e1 = UnitElement::new(&p, &roots, [1, -1, 0]).unwrap();
        let e2 = UnitElement::new(&p, &roots, [1, 1, -1]).unwrap();
        let r = regulator(&[e1.clone(), e2.clone()]).unwrap();
        // Replacing e2 by e1*e2 is a unimodular column operation.
        let prod = unit_mul(&p, e1.coords(), e2.coords()).unwrap();
        let e12 = UnitElement::new(&p, &roots, prod).unwrap();
        let r2 = regulator(&[e1.clone(), e12]).unwrap();
        assert!((r - r2).abs() < 1e-12);
        // A unit against its own inverse is singular.
        let inv = UnitElement::new(&p, &roots, unit_inverse(&p, e1.coords()).unwrap()).unwrap();
        assert!(matches!(
            regulator(&[e1, inv]),
            Err(NumberFieldError::DependentUnits)
        ));
    }

    /// Brute-force reference: every coordinate triple up to `h`, exact norm
    /// check, exact alpha filter.
    fn brute_box(
        p: &CubicPoly,
        roots: &[f64; 3],
        h: i64,
        t: [f64; 2],
    ) -> BTreeSet<[i64; 3]> {
        let mut set = BTreeSet::new();
        for c0 in -h..=h {
            for c1 in -h..=h {
                for c2 in -h..=h {
                    let coords = [c0, c1, c2];
                    if coords == [0, 0, 0] {
                        continue;
                    }
                    let n = norm(p, coords).unwrap();
                    if n != 1 && n != -1 {
                        continue;
                    }
                    let u = UnitElement::new(p, roots, coords).unwrap();
                    let a = u.alpha();
                    if a[0] > 0.0 && a[0] <= t[0] && a[1] > 0.0 && a[1] <= t[1] {
                        set.insert(u.coords());
                    }
                }
            }
        }
        set
    }

    fn disc49_pair() -> (CubicPoly, [f64; 3], [UnitElement; 2]) {
        let (p, roots) = disc49();
        let units = [
            UnitElement::new(&p, &roots, [1, -1, 0]).unwrap(),
            UnitElement::new(&p, &roots, [1, 1, -1]).unwrap(),
        ];
        (p, roots, units)
    }

    #[test]
    fn box_enumeration_frozen_count() {
        let (p, roots, units) = disc49_pair();
        let (found, cert) = enumerate_units_in_box(
            &p,
            &roots,
            &units,
            UnitStatus::TableConfirmed,
            [10.0, 10.0],
            true,
        )
        .unwrap();
        assert_eq!(found.len(), 96);
        assert!((cert.log_cap - 5.0).abs() < 1e-12);
        assert!(cert.exponent_bounds[0] >= 8 && cert.exponent_bounds[1] >= 7);
        // Low-height members and the four units that need coordinates far
        // above the naive scan range.
        let coords: BTreeSet<[i64; 3]> = found.iter().map(|u| u.coords()).collect();
        assert!(coords.contains(&[0, 1, 0]));
        for big in [
            [94i64, 23, -42],
            [52, 13, -23],
            [70, 17, -31],
            [87, 22, -39],
        ] {
            assert!(coords.contains(&big), "missing {big:?}");
        }
    }

    #[test]
    fn box_enumeration_matches_brute_force() {
        let (p, roots, units) = disc49_pair();
        let t = [3.0, 3.0];
        let (found, _) =
            enumerate_units_in_box(&p, &roots, &units, UnitStatus::Candidate, t, false)
                .unwrap();
        let got: BTreeSet<[i64; 3]> = found.iter().map(|u| u.coords()).collect();
        // M_T = 1.5; certified coordinate radius 1.2683 * e^1.5 < 6.
        let want = brute_box(&p, &roots, 6, t);
        assert_eq!(got, want);
    }

    #[test]
    fn box_enumeration_edge_cases() {
        let (p, roots, units) = disc49_pair();
        let (found, _) = enumerate_units_in_box(
            &p,
            &roots,
            &units,
            UnitStatus::Candidate,
            [0.0, 0.0],
            false,
        )
        .unwrap();
        assert!(found.is_empty());
        // theta appears exactly when the box reaches its alpha.
        let theta_alpha = [0.7362765909572936, 2.0606224526554913];
        let (with, _) = enumerate_units_in_box(
            &p,
            &roots,
            &units,
            UnitStatus::Candidate,
            [0.74, 2.07],
            false,
        )
        .unwrap();
        assert!(with.iter().any(|u| u.coords() == [0, 1, 0]));
        let (without, _) = enumerate_units_in_box(
            &p,
            &roots,
            &units,
            UnitStatus::Candidate,
            [0.73, 2.07],
            false,
        )
        .unwrap();
        assert!(!without.iter().any(|u| u.coords() == [0, 1, 0]));
        assert!(theta_alpha[0] > 0.73 && theta_alpha[0] <= 0.74);
        // Strict mode refuses candidate pairs.
        assert!(matches!(
            enumerate_units_in_box(
                &p,
                &roots,
                &units,
                UnitStatus::Candidate,
                [1.0, 1.0],
                true
            ),
            Err(NumberFieldError::UncertifiedUnits)
        ));
        assert!(matches!(
            enumerate_units_in_box(
                &p,
                &roots,
                &units,
                UnitStatus::Candidate,
                [-1.0, 1.0],
                false
            ),
            Err(NumberFieldError::BadBox(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        /// Certified enumeration equals brute force for random boxes below
        /// (3.5, 3.5); the brute-force radius 8 covers the maximal
        /// coordinate bound 1.2683 * e^{1.75} < 7.3.
        #[test]
        fn random_boxes_match_brute_force(
            t1 in 0.1f64..3.5,
            t2 in 0.1f64..3.5,
        ) {
            let (p, roots, units) = disc49_pair();
            let (found, _) = enumerate_units_in_box(
                &p, &roots, &units, UnitStatus::Candidate, [t1, t2], false,
            ).unwrap();
            let got: BTreeSet<[i64; 3]> = found.iter().map(|u| u.coords()).collect();
            let want = brute_box(&p, &roots, 8, [t1, t2]);
            prop_assert_eq!(got, want);
        }
    }
}
