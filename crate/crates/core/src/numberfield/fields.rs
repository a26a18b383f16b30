//! Field records and the operations that tie them together: enumeration by
//! discriminant with isomorphism deduplication, ingestion with exact
//! revalidation, splitting-weighted box totals, the Minkowski class-number
//! certificate, and the bridge from unit boxes to chamber spectra.
//!
//! A [`FieldRecord`] holds one totally real cubic field presented by a
//! certified-maximal polynomial (so the polynomial discriminant equals the
//! field discriminant), its certified embeddings, and — once attached or
//! ingested — fundamental units, class number, and regulator. Class numbers
//! are primarily ingested; the only internal certification route is the
//! Minkowski bound scan, which can prove `h = 1` but never anything else.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::chamber::{det_one_minus_ad, ChamberBasis, GeodesicClass, Provenance, Spectrum};
use crate::counting::ThetaEntry;

use super::poly::{
    dedekind_maximal_at_p, discriminant_i128, is_prime_u64, splitting_map, splitting_type,
    CubicPoly, RootInterval, SplittingType, DEFAULT_ROOT_PRECISION,
};
use super::units::{
    self, regulator, resultant_norm, CompletenessCertificate, UnitElement, UnitStatus,
};
use super::NumberFieldError;

/// Stored and recomputed regulators must agree to this relative tolerance.
pub const REGULATOR_MATCH_RTOL: f64 = 1e-9;

/// Whether a prime set must satisfy the two-prime minimum of the weighted
/// counting setup. `AllowSmall` is the toy-test override.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeSetPolicy {
    Strict,
    AllowSmall,
}

/// Where a record's arithmetic data came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordSource {
    Ingested,
    Computed,
}

impl RecordSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            RecordSource::Ingested => "ingested",
            RecordSource::Computed => "computed",
        }
    }
}

/// Outcome of the Minkowski-bound class-number scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinkowskiCertificate {
    /// No prime ideal of norm at most `(2/9) sqrt(disc)` exists, so every
    /// ideal class contains the unit ideal: `h = 1`.
    HIsOne,
    /// Some small-norm prime ideal exists (or splitting could not be read
    /// off); the scan proves nothing.
    Inconclusive,
}

/// Validation flags carried by a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Certifications {
    pub h_certified_minkowski: bool,
    pub units_verified: bool,
    pub r_recomputed: bool,
}

/// Coefficient search ranges for [`enumerate_fields`]. The defaults cover
/// every totally real cubic field of discriminant up to `1e5` (checked
/// against exhaustive scans at small bounds); they are configuration, not a
/// claim of minimality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub max_abs_a: i64,
    pub max_abs_b: i64,
    pub max_abs_c: i64,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self {
            max_abs_a: 15,
            max_abs_b: 60,
            max_abs_c: 60,
        }
    }
}

impl EnumerationConfig {
    fn validate(&self) -> Result<(), NumberFieldError> {
        for v in [self.max_abs_a, self.max_abs_b, self.max_abs_c] {
            if !(0..=100_000).contains(&v) {
                return Err(NumberFieldError::BadConfigBound(v));
            }
        }
        Ok(())
    }
}

/// One totally real cubic field: certified-maximal defining polynomial,
/// certified embeddings, splitting data at the primes seen so far, and the
/// optional unit/class data.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRecord {
    poly: CubicPoly,
    disc_poly: i128,
    disc_field: i128,
    embeddings: [RootInterval; 3],
    roots: [f64; 3],
    fundamental_units: Option<[UnitElement; 2]>,
    unit_status: UnitStatus,
    h: Option<u64>,
    r: Option<f64>,
    splitting: BTreeMap<u64, SplittingType>,
    source: RecordSource,
    certifications: Certifications,
}

impl FieldRecord {
    /// Build a record from scratch: certifies maximality at every prime
    /// whose square divides the polynomial discriminant (so the polynomial
    /// discriminant is the field discriminant), isolates embeddings, and
    /// reads splitting at the primes of `s`. No units or class data yet.
    pub fn computed(poly: CubicPoly, s: &BTreeSet<u64>) -> Result<Self, NumberFieldError> {
        let disc_poly = poly.discriminant();
        if disc_poly <= 0 {
            return Err(NumberFieldError::NotTotallyReal);
        }
        for p in square_primes(disc_poly) {
            if !dedekind_maximal_at_p(&poly, p)? {
                return Err(NumberFieldError::NotMaximalAt { p });
            }
        }
        let embeddings = poly.real_embeddings(DEFAULT_ROOT_PRECISION)?;
        let roots = poly.root_approx(DEFAULT_ROOT_PRECISION)?;
        let primes: Vec<u64> = s.iter().copied().collect();
        let splitting = splitting_map(&poly, &primes)?;
        Ok(Self {
            poly,
            disc_poly,
            disc_field: disc_poly,
            embeddings,
            roots,
            fundamental_units: None,
            unit_status: UnitStatus::Candidate,
            h: None,
            r: None,
            splitting,
            source: RecordSource::Computed,
            certifications: Certifications::default(),
        })
    }

    /// Build a record from table data, revalidating everything exactly; see
    /// [`validate_ingested`]. The stored units become the confirmed table.
    pub fn ingested(
        poly: CubicPoly,
        disc_field: i128,
        h: u64,
        r: f64,
        unit_coords: &[[i64; 3]; 2],
    ) -> Result<Self, NumberFieldError> {
        validate_ingested(&poly, disc_field, h, r, unit_coords)?;
        let mut record = Self::computed(poly, &BTreeSet::new())?;
        let roots = record.float_roots();
        let units = [
            UnitElement::new(&record.poly, &roots, unit_coords[0])?,
            UnitElement::new(&record.poly, &roots, unit_coords[1])?,
        ];
        let minkowski = minkowski_scan(&record.poly, disc_field);
        record.fundamental_units = Some(units);
        record.unit_status = UnitStatus::TableConfirmed;
        record.h = Some(h);
        record.r = Some(r);
        record.source = RecordSource::Ingested;
        record.certifications = Certifications {
            h_certified_minkowski: minkowski == MinkowskiCertificate::HIsOne,
            units_verified: true,
            r_recomputed: true,
        };
        Ok(record)
    }

    pub fn poly(&self) -> &CubicPoly {
        &self.poly
    }

    pub fn disc_poly(&self) -> i128 {
        self.disc_poly
    }

    pub fn disc_field(&self) -> i128 {
        self.disc_field
    }

    pub fn embeddings(&self) -> &[RootInterval; 3] {
        &self.embeddings
    }

    /// Newton-polished embedding values (inside the certified intervals),
    /// the floating-point roots used for all unit work. The same values are
    /// produced by `root_approx` on the polynomial, so unit results agree
    /// between record-level and polynomial-level entry points.
    pub fn float_roots(&self) -> [f64; 3] {
        self.roots
    }

    pub fn fundamental_units(&self) -> Option<&[UnitElement; 2]> {
        self.fundamental_units.as_ref()
    }

    pub fn unit_status(&self) -> UnitStatus {
        self.unit_status
    }

    pub fn h(&self) -> Option<u64> {
        self.h
    }

    pub fn r(&self) -> Option<f64> {
        self.r
    }

    pub fn splitting(&self) -> &BTreeMap<u64, SplittingType> {
        &self.splitting
    }

    pub fn source(&self) -> RecordSource {
        self.source
    }

    pub fn certifications(&self) -> Certifications {
        self.certifications
    }

    /// Splitting above `p`, from the cache when present.
    pub fn splitting_at(&self, p: u64) -> Result<SplittingType, NumberFieldError> {
        if let Some(st) = self.splitting.get(&p) {
            return Ok(st.clone());
        }
        splitting_type(&self.poly, p)
    }

    /// Attach a unit pair (validated against this field) and derive the
    /// regulator from it; an already-stored regulator must agree to
    /// [`REGULATOR_MATCH_RTOL`] relative.
    pub fn attach_units(
        &mut self,
        units: [UnitElement; 2],
        status: UnitStatus,
    ) -> Result<(), NumberFieldError> {
        let roots = self.float_roots();
        for u in &units {
            // Re-deriving in this field both checks membership (|norm| = 1
            // here) and normalizes the embedding data.
            let rebuilt = UnitElement::new(&self.poly, &roots, u.coords())?;
            if rebuilt != *u {
                return Err(NumberFieldError::NotAUnit(0));
            }
        }
        let recomputed = regulator(&units)?;
        if let Some(stored) = self.r {
            if (recomputed - stored).abs() > REGULATOR_MATCH_RTOL * stored.abs() {
                return Err(NumberFieldError::RegulatorMismatch {
                    stored,
                    recomputed,
                });
            }
        } else {
            self.r = Some(recomputed);
        }
        self.fundamental_units = Some(units);
        self.unit_status = status;
        self.certifications.units_verified = status == UnitStatus::TableConfirmed;
        self.certifications.r_recomputed = true;
        Ok(())
    }

    /// Attach a class number, optionally marking it Minkowski-certified.
    pub fn attach_class_number(
        &mut self,
        h: u64,
        certified: bool,
    ) -> Result<(), NumberFieldError> {
        if h == 0 {
            return Err(NumberFieldError::BadClassNumber(0));
        }
        self.h = Some(h);
        self.certifications.h_certified_minkowski = certified;
        Ok(())
    }
}

/// Primes whose square divides `n`, by trial division.
fn square_primes(n: i128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = n.unsigned_abs();
    let mut p = 2u128;
    while p * p <= n {
        if n % p == 0 {
            let mut mult = 0u32;
            while n % p == 0 {
                n /= p;
                mult += 1;
            }
            if mult >= 2 {
                out.push(p as u64);
            }
        }
        p += 1;
    }
    out
}

/// Dedupe key: minimal `(|a|, |b|, |c|)` lexicographically, ties broken by
/// the signed coefficients.
fn canonical_key(poly: &CubicPoly) -> (i64, i64, i64, i64, i64, i64) {
    let (a, b, c) = poly.coeffs();
    (a.abs(), b.abs(), c.abs(), a, b, c)
}

/// All totally real cubic fields with field discriminant in `(0, disc_bound]`
/// reachable within the configured coefficient box: one record per
/// isomorphism class, presented by the canonical (minimal-key) certified-
/// maximal polynomial, in discriminant-then-polynomial order.
///
/// Rows failing maximality certification (a square prime where the Dedekind
/// criterion rejects) are excluded — their fields are still found through
/// their maximal presentations. With a prime set `s`, only fields where
/// every `p` in `s` is non-decomposed survive; `Strict` policy additionally
/// demands at least two primes.
pub fn enumerate_fields(
    disc_bound: i128,
    s: &BTreeSet<u64>,
    policy: PrimeSetPolicy,
    config: &EnumerationConfig,
) -> Result<Vec<FieldRecord>, NumberFieldError> {
    if disc_bound < 1 {
        return Err(NumberFieldError::BadDiscBound(disc_bound));
    }
    config.validate()?;
    check_prime_set(s, policy)?;
    let mut survivors: Vec<CubicPoly> = Vec::new();
    'coeffs: for a in -config.max_abs_a..=config.max_abs_a {
        for b in -config.max_abs_b..=config.max_abs_b {
            for c in -config.max_abs_c..=config.max_abs_c {
                if c == 0 {
                    continue;
                }
                let disc = discriminant_i128(a, b, c);
                if disc <= 0 || disc > disc_bound {
                    continue;
                }
                let poly = match CubicPoly::new(a, b, c) {
                    Ok(p) => p,
                    Err(NumberFieldError::Reducible { .. }) => continue,
                    Err(e) => return Err(e),
                };
                for p in square_primes(disc) {
                    if !dedekind_maximal_at_p(&poly, p)? {
                        continue 'coeffs;
                    }
                }
                let mut keep = true;
                for &p in s {
                    if !splitting_type(&poly, p)?.non_decomposed {
                        keep = false;
                        break;
                    }
                }
                if keep {
                    survivors.push(poly);
                }
            }
        }
    }
    survivors.sort_by_key(|p| (p.discriminant(), canonical_key(p)));
    // Group by discriminant; within a group, keep one representative per
    // isomorphism class (the first in key order is the canonical one).
    let mut reps: Vec<CubicPoly> = Vec::new();
    for poly in survivors {
        let mut dup = false;
        for rep in reps.iter().rev() {
            if rep.discriminant() != poly.discriminant() {
                break;
            }
            if are_isomorphic(rep, &poly)? {
                dup = true;
                break;
            }
        }
        if !dup {
            reps.push(poly);
        }
    }
    reps.into_iter()
        .map(|poly| FieldRecord::computed(poly, s))
        .collect()
}

fn check_prime_set(s: &BTreeSet<u64>, policy: PrimeSetPolicy) -> Result<(), NumberFieldError> {
    if policy == PrimeSetPolicy::Strict && s.len() < 2 {
        return Err(NumberFieldError::TooFewPrimes(s.len()));
    }
    for &p in s {
        if !is_prime_u64(p) {
            return Err(NumberFieldError::NotPrime(p));
        }
    }
    Ok(())
}

/// Whether two monic cubics define isomorphic orders `Z[x]/(f)`. Equal
/// discriminants are necessary (the discriminant is an invariant of the
/// order); beyond that, `g` must have a root in the order of `f`, found by
/// numeric root matching and verified by exact integer arithmetic. For
/// certified-maximal polynomials this is field isomorphism.
pub fn are_isomorphic(f: &CubicPoly, g: &CubicPoly) -> Result<bool, NumberFieldError> {
    if f == g {
        return Ok(true);
    }
    if f.discriminant() != g.discriminant() {
        return Ok(false);
    }
    Ok(integer_root_match(f, g)?.is_some())
}

/// Coordinates `(p, q, r)` with `g(p + q th + r th^2) = 0` in the order of
/// `f`, if any exist: candidate coordinates come from solving the
/// Vandermonde system matching `f`-roots to a permutation of `g`-roots,
/// rounding to integers, and the verdict is the exact integer evaluation.
fn integer_root_match(
    f: &CubicPoly,
    g: &CubicPoly,
) -> Result<Option<[i64; 3]>, NumberFieldError> {
    let rf = f.root_approx(DEFAULT_ROOT_PRECISION)?;
    let rg = g.root_approx(DEFAULT_ROOT_PRECISION)?;
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for perm in PERMS {
        let target = [rg[perm[0]], rg[perm[1]], rg[perm[2]]];
        let Some(x) = solve_vandermonde(&rf, &target) else {
            continue;
        };
        let mut coords = [0i64; 3];
        let mut ok = true;
        for (slot, &v) in coords.iter_mut().zip(x.iter()) {
            let r = v.round();
            if (v - r).abs() > 0.01 || r.abs() > 1e6 {
                ok = false;
                break;
            }
            *slot = r as i64;
        }
        if !ok {
            continue;
        }
        if evaluates_to_zero(f, g, coords) {
            return Ok(Some(coords));
        }
    }
    Ok(None)
}

/// Solve `[1, t_i, t_i^2] x = y_i` by Cramer's rule; `None` when the roots
/// are too close for a stable solve.
fn solve_vandermonde(t: &[f64; 3], y: &[f64; 3]) -> Option<[f64; 3]> {
    let det3 = |m: [[f64; 3]; 3]| -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let v = [
        [1.0, t[0], t[0] * t[0]],
        [1.0, t[1], t[1] * t[1]],
        [1.0, t[2], t[2] * t[2]],
    ];
    let d = det3(v);
    if d.abs() < 1e-9 {
        return None;
    }
    let mut out = [0.0f64; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut m = v;
        for i in 0..3 {
            m[i][k] = y[i];
        }
        *slot = det3(m) / d;
    }
    Some(out)
}

/// Exact check that `g(p + q th + r th^2) = 0` modulo `f(th)`, in arbitrary
/// precision integers.
fn evaluates_to_zero(f: &CubicPoly, g: &CubicPoly, coords: [i64; 3]) -> bool {
    let e: [BigInt; 3] = [
        BigInt::from(coords[0]),
        BigInt::from(coords[1]),
        BigInt::from(coords[2]),
    ];
    let e2 = big_order_mul(f, &e, &e);
    let e3 = big_order_mul(f, &e2, &e);
    let (ga, gb, gc) = g.coeffs();
    let mut val = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for i in 0..3 {
        val[i] = &e3[i] + BigInt::from(ga) * &e2[i] + BigInt::from(gb) * &e[i];
    }
    val[0] += BigInt::from(gc);
    val.iter().all(|v| v.is_zero())
}

/// Product in the order of `f`, arbitrary-precision variant of the unit
/// multiplication.
fn big_order_mul(f: &CubicPoly, u: &[BigInt; 3], v: &[BigInt; 3]) -> [BigInt; 3] {
    let (a, b, c) = f.coeffs();
    let mut w: [BigInt; 5] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            w[i + j] += &u[i] * &v[j];
        }
    }
    for d in [4usize, 3] {
        let coeff = std::mem::take(&mut w[d]);
        if coeff.is_zero() {
            continue;
        }
        w[d - 1] -= &coeff * BigInt::from(a);
        w[d - 2] -= &coeff * BigInt::from(b);
        w[d - 3] -= &coeff * BigInt::from(c);
    }
    [
        std::mem::take(&mut w[0]),
        std::mem::take(&mut w[1]),
        std::mem::take(&mut w[2]),
    ]
}

/// Minkowski-bound scan: the bound for a totally real cubic is
/// `(3!/3^3) sqrt(disc) = (2/9) sqrt(disc)`. If no prime ideal of norm at
/// most the bound exists — checked as the exact integer inequality
/// `81 p^{2f} <= 4 disc` over the splitting of every rational prime `p` with
/// `81 p^2 <= 4 disc` — every ideal class contains the unit ideal, so
/// `h = 1`. Any readable small-norm ideal, or unreadable splitting, yields
/// `Inconclusive`.
pub fn minkowski_h1_certificate(record: &FieldRecord) -> MinkowskiCertificate {
    minkowski_scan(&record.poly, record.disc_field)
}

fn minkowski_scan(poly: &CubicPoly, disc: i128) -> MinkowskiCertificate {
    let four_disc = 4 * disc;
    let mut p = 2u64;
    while 81 * (p as i128) * (p as i128) <= four_disc {
        if is_prime_u64(p) {
            let Ok(st) = splitting_type(poly, p) else {
                return MinkowskiCertificate::Inconclusive;
            };
            for &(_, f) in &st.factors {
                // Ideal norm p^f is at most the bound iff 81 p^{2f} <= 4 disc;
                // overflow means the norm is far above any desk-scale bound.
                match (p as i128).checked_pow(2 * f) {
                    Some(norm_sq) if 81 * norm_sq <= four_disc => {
                        return MinkowskiCertificate::Inconclusive;
                    }
                    _ => {}
                }
            }
        }
        p += 1;
    }
    MinkowskiCertificate::HIsOne
}

/// `c = (sqrt 2)^{1-d} * prod_{k=1}^{d-1} 2 k (d-k)` for prime `d >= 3`;
/// the only operation here that supports general rank.
pub fn c_constant(d: u32) -> Result<f64, NumberFieldError> {
    if d < 3 || !is_prime_u64(d as u64) {
        return Err(NumberFieldError::BadDegree(d));
    }
    let mut prod = 1.0f64;
    for k in 1..d {
        prod *= (2 * k * (d - k)) as f64;
    }
    Ok(2.0f64.powf(0.5 * (1.0 - d as f64)) * prod)
}

/// `lambda_S = prod_{p in S} f_p`, defined when every `p` in `S` is
/// non-decomposed (exactly one prime ideal above it) and the order is
/// maximal there. Totally ramified primes contribute factor 1. The strict
/// policy enforces `|S| >= 2`.
pub fn lambda_s(
    record: &FieldRecord,
    s: &BTreeSet<u64>,
    policy: PrimeSetPolicy,
) -> Result<u64, NumberFieldError> {
    check_prime_set(s, policy)?;
    let mut prod: u128 = 1;
    for &p in s {
        let st = record.splitting_at(p)?;
        if !st.non_decomposed {
            return Err(NumberFieldError::Decomposed { p });
        }
        let f = st
            .residue_degree
            .ok_or(NumberFieldError::MissingData("residue degree"))?;
        prod *= f as u128;
    }
    u64::try_from(prod).map_err(|_| NumberFieldError::CoordinateOverflow)
}

/// Fundamental-unit search for a record (see the unit-level documentation):
/// exhaustive coordinate scan to `height`, Gauss reduction, and `table_
/// confirmed` status exactly when the record carries ingested units
/// generating the same lattice.
pub fn find_fundamental_units(
    record: &FieldRecord,
    height: i64,
) -> Result<([UnitElement; 2], UnitStatus), NumberFieldError> {
    units::find_fundamental_units(
        &record.poly,
        &record.float_roots(),
        height,
        record.fundamental_units(),
    )
}

/// Unit-box enumeration for a record; requires attached fundamental units.
/// In strict mode the units must be table-confirmed, otherwise the
/// completeness certificate would rest on a candidate basis.
pub fn enumerate_units_in_box(
    record: &FieldRecord,
    t: [f64; 2],
    strict: bool,
) -> Result<(Vec<UnitElement>, CompletenessCertificate), NumberFieldError> {
    let units = record
        .fundamental_units()
        .ok_or(NumberFieldError::MissingData("fundamental units"))?;
    units::enumerate_units_in_box(
        &record.poly,
        &record.float_roots(),
        units,
        record.unit_status(),
        t,
        strict,
    )
}

/// The weight every unit of a field contributes to the box total:
/// regulator times class number times `lambda_S`.
pub fn theta_weight(r: f64, h: u64, lambda: u64) -> f64 {
    r * h as f64 * lambda as f64
}

/// Per-field counting inputs over the box `t`: weight `R h lambda_S`, the
/// alpha vectors of every unit in the certified box, and the box itself.
/// Records must carry units, class number, and regulator.
pub fn theta_entries(
    records: &[FieldRecord],
    s: &BTreeSet<u64>,
    policy: PrimeSetPolicy,
    t: [f64; 2],
    strict: bool,
) -> Result<Vec<ThetaEntry>, NumberFieldError> {
    let mut out = Vec::with_capacity(records.len());
    for record in records {
        let lambda = lambda_s(record, s, policy)?;
        let h = record.h().ok_or(NumberFieldError::MissingData("class number"))?;
        let r = record.r().ok_or(NumberFieldError::MissingData("regulator"))?;
        let (found, cert) = enumerate_units_in_box(record, t, strict)?;
        out.push(ThetaEntry {
            weight: theta_weight(r, h, lambda),
            unit_alphas: found.iter().map(|u| u.alpha().to_vec()).collect(),
            certified_box: cert.box_bounds.to_vec(),
        });
    }
    Ok(out)
}

/// Bridge to the chamber picture: every (field, unit mod sign) pair in the
/// box becomes a geodesic class with lengths the unit's alpha vector, flat
/// volume `R h lambda_S`, and determinant factor evaluated on the absolute
/// embedding values (inside `(0,1)` for sorted magnitudes). By construction
/// the chamber count `psi` over this spectrum equals the box total
/// `theta_S` over the records, for every box inside `t`.
pub fn field_to_spectrum(
    records: &[FieldRecord],
    s: &BTreeSet<u64>,
    policy: PrimeSetPolicy,
    t: [f64; 2],
    strict: bool,
) -> Result<Spectrum, NumberFieldError> {
    let basis = ChamberBasis::new(2)?;
    let mut classes = Vec::new();
    for record in records {
        let lambda = lambda_s(record, s, policy)?;
        let h = record.h().ok_or(NumberFieldError::MissingData("class number"))?;
        let r = record.r().ok_or(NumberFieldError::MissingData("regulator"))?;
        let weight = theta_weight(r, h, lambda);
        let (found, _) = enumerate_units_in_box(record, t, strict)?;
        for u in found {
            debug_assert!(u.is_regular());
            let mags: Vec<f64> = u.embeddings().iter().map(|e| e.abs()).collect();
            let det = det_one_minus_ad(&mags)?;
            let label = format!("d{}:u{}", record.disc_field, u.label());
            classes.push(GeodesicClass::new(u.alpha().to_vec(), weight, det, label)?);
        }
    }
    Ok(Spectrum::from_classes(basis, Provenance::NumberField, classes)?)
}

/// Exact revalidation of one ingested table row:
/// - the recomputed polynomial discriminant equals the stored field
///   discriminant (so the row presents a maximal order), and the Dedekind
///   criterion confirms maximality at every square prime;
/// - `h >= 1` and `R` is a positive finite real;
/// - both stored units have field norm of magnitude 1, verified through the
///   Sylvester resultant (exact integers, independent of the representation-
///   matrix norm);
/// - the regulator recomputed from the stored units matches the stored `R`
///   to `1e-9` relative;
/// - when the Minkowski scan proves `h = 1`, the stored `h` must be 1.
pub fn validate_ingested(
    poly: &CubicPoly,
    disc_field: i128,
    h: u64,
    r: f64,
    unit_coords: &[[i64; 3]; 2],
) -> Result<(), NumberFieldError> {
    let computed = poly.discriminant();
    if computed != disc_field {
        return Err(NumberFieldError::DiscMismatch {
            stored: disc_field,
            computed,
        });
    }
    for p in square_primes(computed) {
        if !dedekind_maximal_at_p(poly, p)? {
            return Err(NumberFieldError::NotMaximalAt { p });
        }
    }
    if h == 0 {
        return Err(NumberFieldError::BadClassNumber(0));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(NumberFieldError::BadRegulator(r));
    }
    for &coords in unit_coords {
        if coords == [0, 0, 0] {
            return Err(NumberFieldError::ZeroElement(coords));
        }
        let n = resultant_norm(poly, coords);
        if n.magnitude() != BigInt::from(1).magnitude() {
            let as_i128 = i128::try_from(&n).unwrap_or(i128::MAX);
            return Err(NumberFieldError::NormNotUnit(as_i128));
        }
    }
    let roots = poly.root_approx(DEFAULT_ROOT_PRECISION)?;
    let units = [
        UnitElement::new(poly, &roots, unit_coords[0])?,
        UnitElement::new(poly, &roots, unit_coords[1])?,
    ];
    let recomputed = regulator(&units)?;
    if (recomputed - r).abs() > REGULATOR_MATCH_RTOL * r.abs() {
        return Err(NumberFieldError::RegulatorMismatch {
            stored: r,
            recomputed,
        });
    }
    if minkowski_scan(poly, disc_field) == MinkowskiCertificate::HIsOne && h != 1 {
        return Err(NumberFieldError::BadClassNumber(h));
    }
    Ok(())
}
