//! Counting functions over a spectrum: box counts, epsilon-restricted
//! counts, weighted moments, unit-box totals, and ratio reports.
//!
//! All boxes are closed on the upper boundary: a class with lengths `l` is
//! inside bounds `x` when `l_k <= x_k` for every `k` (conjunctive, ties
//! included). The epsilon restriction keeps only classes whose determinant
//! factor lies strictly inside `(1 - eps, 1)`; classes with det factor
//! exactly one are excluded by the strict upper bound.
//!
//! Every sum runs over the spectrum's canonical class order with compensated
//! accumulation, so results are bitwise identical no matter how the input
//! was ordered or partitioned before construction.

use crate::chamber::{bound_convert, BoundDirection, ChamberError, GeodesicClass, Spectrum};
use crate::numeric::CompensatedSum;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CountError {
    #[error("query has {got} bounds but the spectrum has rank {rank}")]
    RankMismatch { rank: usize, got: usize },
    #[error("query bounds must be nonempty")]
    EmptyBounds,
    #[error("bound {0} violates the query convention (positive required)")]
    BadBound(f64),
    #[error("epsilon {0} is outside (0, 1)")]
    BadEpsilon(f64),
    #[error("operation requires epsilon in the query")]
    MissingEpsilon,
    #[error("normalizer requires multiplicative bounds > 1, got {0}")]
    BoundNotAboveOne(f64),
    #[error("normalizer constant {0} must be positive")]
    BadNormalizerConstant(f64),
    #[error("unit enumeration certifies box {certified:?} but the query asks for {requested:?}")]
    UncertifiedBox {
        certified: Vec<f64>,
        requested: Vec<f64>,
    },
    #[error(transparent)]
    Chamber(#[from] ChamberError),
}

/// Whether query bounds are logarithmic (additive lengths scale) or
/// multiplicative (`T_k = e^{x_k}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundConvention {
    LogScale,
    MultScale,
}

/// A box query: bounds in one of the two conventions, the moment order `j`
/// used by weighted counts, and an optional `epsilon` for restricted counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CountQuery {
    bounds: Vec<f64>,
    convention: BoundConvention,
    j: u32,
    epsilon: Option<f64>,
}

impl CountQuery {
    pub fn new(
        bounds: Vec<f64>,
        convention: BoundConvention,
        j: u32,
        epsilon: Option<f64>,
    ) -> Result<Self, CountError> {
        if bounds.is_empty() {
            return Err(CountError::EmptyBounds);
        }
        for &b in &bounds {
            if !(b.is_finite() && b > 0.0) {
                return Err(CountError::BadBound(b));
            }
        }
        if let Some(e) = epsilon {
            if !(e.is_finite() && e > 0.0 && e < 1.0) {
                return Err(CountError::BadEpsilon(e));
            }
        }
        Ok(Self {
            bounds,
            convention,
            j,
            epsilon,
        })
    }

    /// Log-scale query, the native convention of the counting functions.
    pub fn log_scale(bounds: Vec<f64>) -> Result<Self, CountError> {
        Self::new(bounds, BoundConvention::LogScale, 0, None)
    }

    pub fn with_j(mut self, j: u32) -> Self {
        self.j = j;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self, CountError> {
        if !(epsilon.is_finite() && epsilon > 0.0 && epsilon < 1.0) {
            return Err(CountError::BadEpsilon(epsilon));
        }
        self.epsilon = Some(epsilon);
        Ok(self)
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn convention(&self) -> BoundConvention {
        self.convention
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    /// Bounds on the log scale, converting multiplicative queries.
    pub fn log_bounds(&self) -> Result<Vec<f64>, CountError> {
        match self.convention {
            BoundConvention::LogScale => Ok(self.bounds.clone()),
            BoundConvention::MultScale => {
                Ok(bound_convert(&self.bounds, BoundDirection::MultToLog)?)
            }
        }
    }

    fn check_rank(&self, spectrum: &Spectrum) -> Result<(), CountError> {
        if self.bounds.len() != spectrum.rank() {
            return Err(CountError::RankMismatch {
                rank: spectrum.rank(),
                got: self.bounds.len(),
            });
        }
        Ok(())
    }
}

fn in_box(class: &GeodesicClass, log_bounds: &[f64]) -> bool {
    class
        .lengths()
        .iter()
        .zip(log_bounds)
        .all(|(&l, &b)| l <= b)
}

fn eps_included(class: &GeodesicClass, epsilon: f64) -> bool {
    let det = class.det_factor();
    det > 1.0 - epsilon && det < 1.0
}

fn boxed_sum<F>(spectrum: &Spectrum, query: &CountQuery, term: F) -> Result<f64, CountError>
where
    F: Fn(&GeodesicClass) -> f64,
{
    query.check_rank(spectrum)?;
    let bounds = query.log_bounds()?;
    let mut acc = CompensatedSum::new();
    for class in spectrum.classes() {
        if in_box(class, &bounds) {
            acc.add(term(class));
        }
    }
    Ok(acc.value())
}

/// Volume count: sum of `flat_volume` over classes in the box.
pub fn psi(spectrum: &Spectrum, query: &CountQuery) -> Result<f64, CountError> {
    boxed_sum(spectrum, query, |c| c.flat_volume())
}

/// Index count: sum of `flat_volume / det_factor` over classes in the box.
pub fn phi(spectrum: &Spectrum, query: &CountQuery) -> Result<f64, CountError> {
    boxed_sum(spectrum, query, |c| c.index())
}

/// Weighted index count: sum of `index * (prod_k lengths_k)^(j+1)`.
pub fn phi_j(spectrum: &Spectrum, query: &CountQuery) -> Result<f64, CountError> {
    let j = query.j();
    boxed_sum(spectrum, query, |c| {
        c.index() * c.length_product().powi(j as i32 + 1)
    })
}

/// The accumulated counting function `A(x)`: alias of [`phi_j`] with bounds
/// `x`, monotone in the componentwise partial order.
pub fn big_a(spectrum: &Spectrum, x: &[f64], j: u32) -> Result<f64, CountError> {
    let query = CountQuery::new(x.to_vec(), BoundConvention::LogScale, j, None)?;
    phi_j(spectrum, &query)
}

fn require_epsilon(query: &CountQuery) -> Result<f64, CountError> {
    query.epsilon().ok_or(CountError::MissingEpsilon)
}

/// [`psi`] restricted to classes with `det_factor` strictly in
/// `(1 - eps, 1)`.
pub fn psi_eps(spectrum: &Spectrum, query: &CountQuery) -> Result<f64, CountError> {
    let eps = require_epsilon(query)?;
    boxed_sum(spectrum, query, |c| {
        if eps_included(c, eps) {
            c.flat_volume()
        } else {
            0.0
        }
    })
}

/// [`phi`] restricted to classes with `det_factor` strictly in
/// `(1 - eps, 1)`.
pub fn phi_eps(spectrum: &Spectrum, query: &CountQuery) -> Result<f64, CountError> {
    let eps = require_epsilon(query)?;
    boxed_sum(spectrum, query, |c| {
        if eps_included(c, eps) {
            c.index()
        } else {
            0.0
        }
    })
}

/// Cardinality of classes in the box (same box condition as [`psi`]).
pub fn pi_count(spectrum: &Spectrum, query: &CountQuery) -> Result<u64, CountError> {
    query.check_rank(spectrum)?;
    let bounds = query.log_bounds()?;
    Ok(spectrum
        .classes()
        .iter()
        .filter(|c| in_box(c, &bounds))
        .count() as u64)
}

/// Per-field input for [`theta_s`]: the constant weight `R * h * lambda_S`,
/// the alpha-coordinates of the enumerated units (mod sign), and the box the
/// enumeration certifies as complete.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaEntry {
    pub weight: f64,
    pub unit_alphas: Vec<Vec<f64>>,
    pub certified_box: Vec<f64>,
}

/// Unit-box total over a list of fields: for each field, the number of units
/// with `0 < alpha_k <= T_k` for all `k` times the field's weight, summed in
/// entry order with compensated accumulation.
///
/// Errors when any entry's certified enumeration box does not cover the
/// requested bounds.
pub fn theta_s(entries: &[ThetaEntry], query: &CountQuery) -> Result<f64, CountError> {
    let bounds = query.log_bounds()?;
    let mut acc = CompensatedSum::new();
    for entry in entries {
        if entry.certified_box.len() != bounds.len()
            || entry
                .certified_box
                .iter()
                .zip(&bounds)
                .any(|(&cert, &req)| cert < req)
        {
            return Err(CountError::UncertifiedBox {
                certified: entry.certified_box.clone(),
                requested: bounds.clone(),
            });
        }
        for alpha in &entry.unit_alphas {
            if alpha.len() == bounds.len()
                && alpha.iter().zip(&bounds).all(|(&a, &b)| a > 0.0 && a <= b)
            {
                acc.add(entry.weight);
            }
        }
    }
    Ok(acc.value())
}

/// Normalizer for a [`RatioReport`] row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalizer {
    /// `constant * prod_k T_k` over multiplicative bounds (or additive
    /// alpha-box bounds for the unit-box count, where the constant carries
    /// `c / sqrt(d)`).
    ProductT { constant: f64 },
    /// `prod_k T_k / log T_k` over multiplicative bounds, each above one.
    ProductTOverLogs,
    /// `(prod_k x_k)^(j+1) * exp(sum_k x_k)` over log-scale bounds: the
    /// denominator of the normalized count profile `B`.
    PntProfile { j: u32 },
}

impl Normalizer {
    pub fn tag(&self) -> String {
        match self {
            Normalizer::ProductT { constant } => format!("product_T(constant={constant})"),
            Normalizer::ProductTOverLogs => "product_T_over_logs".to_string(),
            Normalizer::PntProfile { j } => format!("pnt_profile(j={j})"),
        }
    }

    /// Value of the normalizer at the given bounds (in the convention the
    /// variant documents).
    pub fn value(&self, bounds: &[f64]) -> Result<f64, CountError> {
        match self {
            Normalizer::ProductT { constant } => {
                if !(constant.is_finite() && *constant > 0.0) {
                    return Err(CountError::BadNormalizerConstant(*constant));
                }
                Ok(constant * bounds.iter().product::<f64>())
            }
            Normalizer::ProductTOverLogs => {
                let mut v = 1.0;
                for &t in bounds {
                    if t <= 1.0 {
                        return Err(CountError::BoundNotAboveOne(t));
                    }
                    v *= t / t.ln();
                }
                Ok(v)
            }
            Normalizer::PntProfile { j } => {
                for &x in bounds {
                    if !(x.is_finite() && x > 0.0) {
                        return Err(CountError::BadBound(x));
                    }
                }
                let prod: f64 = bounds.iter().product();
                let sum: f64 = bounds.iter().sum();
                Ok(prod.powi(*j as i32 + 1) * sum.exp())
            }
        }
    }
}

/// One row of a ratio report; `ratio` is exactly `count / normalizer`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub bounds: Vec<f64>,
    pub count: f64,
    pub normalizer: f64,
    pub ratio: f64,
}

/// A table of raw counts against a normalizer, with a free-form label used
/// by the drivers (for instance to mark the maximal-order slice).
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub normalizer: Normalizer,
    pub label: String,
    pub rows: Vec<RatioRow>,
}

/// Build a report from `(bounds, raw count)` pairs; rows keep input order.
pub fn ratio_report(
    counts: &[(Vec<f64>, f64)],
    normalizer: Normalizer,
    label: impl Into<String>,
) -> Result<RatioReport, CountError> {
    let mut rows = Vec::with_capacity(counts.len());
    for (bounds, count) in counts {
        let norm = normalizer.value(bounds)?;
        rows.push(RatioRow {
            bounds: bounds.clone(),
            count: *count,
            normalizer: norm,
            ratio: count / norm,
        });
    }
    Ok(RatioReport {
        normalizer,
        label: label.into(),
        rows,
    })
}
