//! Chamber data model: geodesic classes, spectra, and eigenvalue coordinates.
//!
//! A rank-`r` chamber element is recorded through its simple-root lengths
//! `l_1, ..., l_r > 0`. Each geodesic class carries a flat volume `lambda > 0`
//! and a determinant factor `det(1 - ad) in (0, 1]`; the index of a class is
//! `lambda / det`. The half-sum of positive roots is normalized so that its
//! alpha-coordinates are exactly `(1/2, ..., 1/2)`, which gives the unit
//! alpha-box Haar volume one and makes product-shaped normalizers constant
//! free.
//!
//! For a regular eigenvalue tuple `rho_1, ..., rho_d` (distinct absolute
//! values, `|prod rho_i| = 1`) sorted by descending `|.|`:
//!
//! * `det_one_minus_ad` evaluates `prod_{i<j} (1 - rho_j / rho_i)` over the
//!   signed ratios, the determinant of `1 - ad` on the contracting nilpotent
//!   block. All ratios have modulus `< 1`, so every factor and hence the
//!   product is positive. When all eigenvalues are positive the product also
//!   lies below `1`; with mixed signs it can exceed `1`.
//! * `alpha_coords` returns `alpha_k = k (d - k) log(|rho_k| / |rho_{k+1}|)`,
//!   the simple-root lengths of the associated chamber element.

use num_rational::Rational64;
use thiserror::Error;

/// Tolerance for the `|prod rho_i| = 1` check in [`det_one_minus_ad`] and
/// [`alpha_coords`].
pub const UNIMODULAR_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ChamberError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("class must have at least one length")]
    EmptyLengths,
    #[error("length {0} is not a positive finite real")]
    BadLength(f64),
    #[error("flat volume {0} is not a positive finite real")]
    BadFlatVolume(f64),
    #[error("det factor {0} is outside (0, 1]")]
    BadDetFactor(f64),
    #[error("class has {got} lengths but the basis has rank {rank}")]
    RankMismatch { rank: usize, got: usize },
    #[error("need at least two eigenvalues, got {0}")]
    TooFewEigenvalues(usize),
    #[error("eigenvalue {0} is not a nonzero finite real")]
    BadEigenvalue(f64),
    #[error("|product of eigenvalues| = {0} differs from 1 beyond tolerance")]
    NotUnimodular(f64),
    #[error("eigenvalues with equal absolute value {0} (element is not regular)")]
    RepeatedAbsoluteValue(f64),
    #[error("determinant product {0} is not positive")]
    NonPositiveProduct(f64),
    #[error("bound {0} must be positive to take its logarithm")]
    NonPositiveBound(f64),
}

/// Rank marker for a chamber. The half-sum of positive roots is pinned to
/// alpha-coordinates `(1/2, ..., 1/2)` by the normalization `2 rho =
/// alpha_1 + ... + alpha_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChamberBasis {
    rank: usize,
}

impl ChamberBasis {
    pub fn new(rank: usize) -> Result<Self, ChamberError> {
        if rank == 0 {
            return Err(ChamberError::ZeroRank);
        }
        Ok(Self { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Always `(1/2, ..., 1/2)`; kept as exact rationals.
    pub fn rho_alpha_coords(&self) -> Vec<Rational64> {
        vec![Rational64::new(1, 2); self.rank]
    }
}

/// Where a spectrum's classes came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Synthetic,
    Chebyshev,
    NumberField,
    Manual,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Synthetic => "synthetic",
            Provenance::Chebyshev => "chebyshev",
            Provenance::NumberField => "numberfield",
            Provenance::Manual => "manual",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "synthetic" => Some(Provenance::Synthetic),
            "chebyshev" => Some(Provenance::Chebyshev),
            "numberfield" => Some(Provenance::NumberField),
            "manual" => Some(Provenance::Manual),
            _ => None,
        }
    }
}

/// One geodesic class: simple-root lengths, flat volume, determinant factor.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicClass {
    lengths: Vec<f64>,
    flat_volume: f64,
    det_factor: f64,
    label: String,
}

impl GeodesicClass {
    pub fn new(
        lengths: Vec<f64>,
        flat_volume: f64,
        det_factor: f64,
        label: impl Into<String>,
    ) -> Result<Self, ChamberError> {
        if lengths.is_empty() {
            return Err(ChamberError::EmptyLengths);
        }
        for &l in &lengths {
            if !(l.is_finite() && l > 0.0) {
                return Err(ChamberError::BadLength(l));
            }
        }
        if !(flat_volume.is_finite() && flat_volume > 0.0) {
            return Err(ChamberError::BadFlatVolume(flat_volume));
        }
        if !(det_factor.is_finite() && det_factor > 0.0 && det_factor <= 1.0) {
            return Err(ChamberError::BadDetFactor(det_factor));
        }
        Ok(Self {
            lengths,
            flat_volume,
            det_factor,
            label: label.into(),
        })
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn flat_volume(&self) -> f64 {
        self.flat_volume
    }

    pub fn det_factor(&self) -> f64 {
        self.det_factor
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `flat_volume / det_factor`; at least `flat_volume` since the
    /// determinant factor is at most one.
    pub fn index(&self) -> f64 {
        self.flat_volume / self.det_factor
    }

    /// Product of the lengths.
    pub fn length_product(&self) -> f64 {
        self.lengths.iter().product()
    }

    /// Total order used for the canonical spectrum ordering: lengths
    /// lexicographically, then label, then the remaining fields. Using a
    /// total order over every field makes canonicalization independent of
    /// input order even for duplicate classes.
    fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.lengths.iter().zip(&other.lengths) {
            let ord = a.total_cmp(b);
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        self.lengths
            .len()
            .cmp(&other.lengths.len())
            .then_with(|| self.label.cmp(&other.label))
            .then_with(|| self.flat_volume.total_cmp(&other.flat_volume))
            .then_with(|| self.det_factor.total_cmp(&other.det_factor))
    }
}

/// Index of a class, as a free function mirror of [`GeodesicClass::index`].
pub fn index_of(class: &GeodesicClass) -> f64 {
    class.index()
}

/// A finite multiset of classes over a common basis, held in canonical order
/// (lexicographic by lengths, then label). Construction sorts, so two
/// spectra built from the same classes in any order compare equal and
/// serialize identically.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    basis: ChamberBasis,
    provenance: Provenance,
    classes: Vec<GeodesicClass>,
}

impl Spectrum {
    pub fn from_classes(
        basis: ChamberBasis,
        provenance: Provenance,
        mut classes: Vec<GeodesicClass>,
    ) -> Result<Self, ChamberError> {
        for c in &classes {
            if c.lengths.len() != basis.rank() {
                return Err(ChamberError::RankMismatch {
                    rank: basis.rank(),
                    got: c.lengths.len(),
                });
            }
        }
        classes.sort_by(|a, b| a.canonical_cmp(b));
        Ok(Self {
            basis,
            provenance,
            classes,
        })
    }

    pub fn empty(basis: ChamberBasis, provenance: Provenance) -> Self {
        Self {
            basis,
            provenance,
            classes: Vec::new(),
        }
    }

    pub fn basis(&self) -> ChamberBasis {
        self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Classes in canonical order.
    pub fn classes(&self) -> &[GeodesicClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

fn validate_eigenvalues(eigenvalues: &[f64]) -> Result<Vec<f64>, ChamberError> {
    if eigenvalues.len() < 2 {
        return Err(ChamberError::TooFewEigenvalues(eigenvalues.len()));
    }
    let mut product = 1.0f64;
    for &rho in eigenvalues {
        if !(rho.is_finite() && rho != 0.0) {
            return Err(ChamberError::BadEigenvalue(rho));
        }
        product *= rho.abs();
    }
    if (product - 1.0).abs() > UNIMODULAR_TOL {
        return Err(ChamberError::NotUnimodular(product));
    }
    let mut sorted = eigenvalues.to_vec();
    sorted.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    for w in sorted.windows(2) {
        if w[0].abs() == w[1].abs() {
            return Err(ChamberError::RepeatedAbsoluteValue(w[0].abs()));
        }
    }
    Ok(sorted)
}

/// `det(1 - ad)` on the contracting block for a regular real eigenvalue
/// tuple with `|prod| = 1`: the product of `1 - rho_j / rho_i` over `i < j`
/// after sorting by descending absolute value, keeping signs.
///
/// Every ratio has modulus below one, so the result is positive; it lies in
/// `(0, 1)` whenever all eigenvalues are positive, but can exceed one when
/// signs mix (each negative ratio contributes a factor above one).
pub fn det_one_minus_ad(eigenvalues: &[f64]) -> Result<f64, ChamberError> {
    let sorted = validate_eigenvalues(eigenvalues)?;
    let mut det = 1.0f64;
    for i in 0..sorted.len() {
        for j in (i + 1)..sorted.len() {
            det *= 1.0 - sorted[j] / sorted[i];
        }
    }
    if det <= 0.0 {
        return Err(ChamberError::NonPositiveProduct(det));
    }
    Ok(det)
}

/// Alpha-coordinates of a regular eigenvalue tuple: after sorting by
/// descending absolute value, `alpha_k = k (d - k) log(|rho_k| / |rho_{k+1}|)`
/// for `k = 1, ..., d - 1`. All entries are strictly positive for a regular
/// tuple.
pub fn alpha_coords(eigenvalues: &[f64]) -> Result<Vec<f64>, ChamberError> {
    let sorted = validate_eigenvalues(eigenvalues)?;
    let d = sorted.len();
    let mut alpha = Vec::with_capacity(d - 1);
    for k in 1..d {
        let weight = (k * (d - k)) as f64;
        alpha.push(weight * (sorted[k - 1].abs() / sorted[k].abs()).ln());
    }
    Ok(alpha)
}

/// Direction for componentwise bound conversion between the multiplicative
/// scale `T` and the logarithmic scale `x = log T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundDirection {
    LogToMult,
    MultToLog,
}

/// Componentwise `exp` or `log` of a bounds vector. `MultToLog` requires
/// every entry to be positive.
pub fn bound_convert(bounds: &[f64], direction: BoundDirection) -> Result<Vec<f64>, ChamberError> {
    match direction {
        BoundDirection::LogToMult => Ok(bounds.iter().map(|&b| b.exp()).collect()),
        BoundDirection::MultToLog => bounds
            .iter()
            .map(|&b| {
                if b > 0.0 {
                    Ok(b.ln())
                } else {
                    Err(ChamberError::NonPositiveBound(b))
                }
            })
            .collect(),
    }
}
