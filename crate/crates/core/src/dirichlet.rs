//! Generalized Dirichlet series over a spectrum, closed-form pole terms, and
//! a Mittag-Leffler pole model with region-aware evaluation.
//!
//! For a spectrum with classes `gamma` of index `ind(gamma)` and lengths
//! `l(gamma) in R_+^r`, the partial sum at `s in C^r` is
//!
//! ```text
//! L_sum(s) = sum_gamma ind(gamma) * (prod_k l_k)^(j+1) * exp(-sum_k s_k l_k)
//! ```
//!
//! and `L_integral(s) = L_sum(s) / (s_1 ... s_r)` is the exact Laplace
//! transform of the step function `A(x)` built from the same data. The
//! closed-form pole term produced by applying the alternating mixed
//! derivative `j+1` times to `1 / prod (s_k - theta_k)` is
//!
//! ```text
//! pole_term_value(theta, s, j) = ((j+1)!)^r / prod_k (s_k - theta_k)^(j+2)
//! ```
//!
//! A pole model is a leading term pinned at `theta = (1, ..., 1)` with
//! coefficient one plus a list of integer-weighted terms with `Re(theta_k)
//! <= 1` (strict for at least one coordinate). Evaluation on an open box
//! region refuses if any term's pole hyperplane meets the region, so the
//! region doubles as a keep-away certificate for the distance-based tail
//! truncation.

use crate::chamber::Spectrum;
use crate::numeric::{simpson_uniform, CompensatedSum};
use num_complex::Complex64;
use thiserror::Error;

/// Default absolute tail tolerance for the Mittag-Leffler truncation.
pub const ML_TAIL_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("s has {got} coordinates, expected rank {rank}")]
    RankMismatch { rank: usize, got: usize },
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("s_{0} = 0 is not allowed for the integral form")]
    ZeroCoordinate(usize),
    #[error("pole hit: s_{0} equals theta_{0}")]
    PoleHit(usize),
    #[error("term {0} has Re(theta) = 1 in every coordinate")]
    NoStrictCoordinate(usize),
    #[error("term {term} has Re(theta_{k}) > 1")]
    RealPartAboveOne { term: usize, k: usize },
    #[error("region interval {0} is empty or not finite")]
    BadRegion(usize),
    #[error("s lies outside the evaluation region")]
    OutsideRegion,
    #[error("pole hyperplane of term {0} meets the evaluation region")]
    PoleInRegion(usize),
    #[error("pole hyperplane of the leading term meets the evaluation region")]
    LeadingPoleInRegion,
    #[error("Re(s_{0} - theta_{0}) must be positive for the chamber integral")]
    DivergentRange(usize),
    #[error("sigma value {0} must exceed 1")]
    BadSigma(f64),
    #[error("quadrature resolution {0} is too coarse")]
    ResolutionTooCoarse(usize),
}

fn check_rank(rank: usize, s: &[Complex64]) -> Result<(), SeriesError> {
    if s.len() != rank {
        return Err(SeriesError::RankMismatch { rank, got: s.len() });
    }
    Ok(())
}

/// `((j+1)!)^r` as a double.
fn factorial_power(j: u32, r: usize) -> f64 {
    let mut f = 1.0f64;
    for k in 2..=(j as u64 + 1) {
        f *= k as f64;
    }
    f.powi(r as i32)
}

/// Partial sum of the generalized Dirichlet series at `s`.
pub fn l_sum(spectrum: &Spectrum, s: &[Complex64], j: u32) -> Result<Complex64, SeriesError> {
    check_rank(spectrum.rank(), s)?;
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for class in spectrum.classes() {
        let mut exponent = Complex64::new(0.0, 0.0);
        for (&sk, &lk) in s.iter().zip(class.lengths()) {
            exponent -= sk * lk;
        }
        let term = class.index()
            * class.length_product().powi(j as i32 + 1)
            * exponent.exp();
        re.add(term.re);
        im.add(term.im);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// Laplace-transform form: `L_sum(s) / (s_1 ... s_r)`. Every `s_k` must be
/// nonzero; the transform of the step function `A` diverges on the axes.
pub fn l_integral(spectrum: &Spectrum, s: &[Complex64], j: u32) -> Result<Complex64, SeriesError> {
    check_rank(spectrum.rank(), s)?;
    let mut denom = Complex64::new(1.0, 0.0);
    for (k, &sk) in s.iter().enumerate() {
        if sk == Complex64::new(0.0, 0.0) {
            return Err(SeriesError::ZeroCoordinate(k));
        }
        denom *= sk;
    }
    Ok(l_sum(spectrum, s, j)? / denom)
}

/// Closed-form pole term `((j+1)!)^r / prod_k (s_k - theta_k)^(j+2)`.
/// Signals instead of returning a value when `s` sits exactly on the pole
/// hyperplane of any coordinate.
pub fn pole_term_value(
    theta: &[Complex64],
    s: &[Complex64],
    j: u32,
) -> Result<Complex64, SeriesError> {
    check_rank(theta.len(), s)?;
    let mut denom = Complex64::new(1.0, 0.0);
    for (k, (&sk, &tk)) in s.iter().zip(theta).enumerate() {
        let d = sk - tk;
        if d == Complex64::new(0.0, 0.0) {
            return Err(SeriesError::PoleHit(k));
        }
        denom *= d.powi(j as i32 + 2);
    }
    Ok(factorial_power(j, theta.len()) / denom)
}

/// One non-leading term of a pole model.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleTerm {
    pub theta: Vec<Complex64>,
    pub coeff: i64,
}

/// Leading pole at `(1, ..., 1)` with coefficient one, plus integer-weighted
/// terms whose real parts stay at or below one with at least one coordinate
/// strictly below. Terms are held in canonical order: descending
/// `min_k Re(theta_k)`, the order the truncation bound consumes them in.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleModel {
    rank: usize,
    j: u32,
    terms: Vec<PoleTerm>,
}

impl PoleModel {
    pub fn new(rank: usize, j: u32, mut terms: Vec<PoleTerm>) -> Result<Self, SeriesError> {
        if rank == 0 {
            return Err(SeriesError::ZeroRank);
        }
        for (i, term) in terms.iter().enumerate() {
            if term.theta.len() != rank {
                return Err(SeriesError::RankMismatch {
                    rank,
                    got: term.theta.len(),
                });
            }
            let mut strict = false;
            for (k, t) in term.theta.iter().enumerate() {
                if t.re > 1.0 {
                    return Err(SeriesError::RealPartAboveOne { term: i, k });
                }
                if t.re < 1.0 {
                    strict = true;
                }
            }
            if !strict {
                return Err(SeriesError::NoStrictCoordinate(i));
            }
        }
        terms.sort_by(|a, b| {
            let key = |t: &PoleTerm| {
                t.theta
                    .iter()
                    .map(|z| z.re)
                    .fold(f64::INFINITY, f64::min)
            };
            key(b)
                .total_cmp(&key(a))
                .then_with(|| {
                    for (x, y) in a.theta.iter().zip(&b.theta) {
                        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
                        if ord != std::cmp::Ordering::Equal {
                            return ord;
                        }
                    }
                    std::cmp::Ordering::Equal
                })
                .then_with(|| a.coeff.cmp(&b.coeff))
        });
        Ok(Self { rank, j, terms })
    }

    /// Model with only the leading pole.
    pub fn leading_only(rank: usize, j: u32) -> Result<Self, SeriesError> {
        Self::new(rank, j, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// Non-leading terms in canonical order.
    pub fn terms(&self) -> &[PoleTerm] {
        &self.terms
    }

    /// The implicit leading term at `(1, ..., 1)` with coefficient one.
    pub fn leading_theta(&self) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); self.rank]
    }
}

/// Open axis-aligned box in `C^r`, a product of open rectangles.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBox {
    re: Vec<(f64, f64)>,
    im: Vec<(f64, f64)>,
}

impl ComplexBox {
    pub fn new(re: Vec<(f64, f64)>, im: Vec<(f64, f64)>) -> Result<Self, SeriesError> {
        if re.len() != im.len() || re.is_empty() {
            return Err(SeriesError::BadRegion(0));
        }
        for (k, ((rl, rh), (il, ih))) in re.iter().zip(&im).enumerate() {
            let ok = rl.is_finite() && rh.is_finite() && il.is_finite() && ih.is_finite();
            if !ok || rl >= rh || il >= ih {
                return Err(SeriesError::BadRegion(k));
            }
        }
        Ok(Self { re, im })
    }

    /// Box around the real interval `(lo, hi)^r` with imaginary parts in
    /// `(-height, height)`.
    pub fn real_box(rank: usize, lo: f64, hi: f64, height: f64) -> Result<Self, SeriesError> {
        Self::new(vec![(lo, hi); rank], vec![(-height, height); rank])
    }

    pub fn rank(&self) -> usize {
        self.re.len()
    }

    pub fn contains(&self, s: &[Complex64]) -> bool {
        s.len() == self.rank()
            && s.iter().zip(self.re.iter().zip(&self.im)).all(
                |(z, ((rl, rh), (il, ih)))| {
                    z.re > *rl && z.re < *rh && z.im > *il && z.im < *ih
                },
            )
    }

    /// Whether the complex number `z` lies strictly inside the `k`-th open
    /// rectangle; the pole hyperplane `{s_k = z}` meets the open box exactly
    /// when this holds.
    fn coordinate_contains(&self, k: usize, z: Complex64) -> bool {
        let (rl, rh) = self.re[k];
        let (il, ih) = self.im[k];
        z.re > rl && z.re < rh && z.im > il && z.im < ih
    }

    /// Euclidean distance from `z` to the closed `k`-th rectangle (zero on
    /// the boundary or inside).
    fn coordinate_distance(&self, k: usize, z: Complex64) -> f64 {
        let (rl, rh) = self.re[k];
        let (il, ih) = self.im[k];
        let dx = (rl - z.re).max(0.0).max(z.re - rh);
        let dy = (il - z.im).max(0.0).max(z.im - ih);
        dx.hypot(dy)
    }
}

/// Evaluate a pole model at `s` inside `region`.
///
/// The region certifies separation from the poles: evaluation refuses if the
/// pole hyperplane of any term (leading included) meets the open region, and
/// otherwise sums the leading term plus every listed term, consuming terms
/// in canonical order until the distance bound
/// `((j+1)!)^r * |coeff| / dist^(r(j+2))` falls below `tail_tol`.
pub fn mittag_leffler_eval(
    model: &PoleModel,
    s: &[Complex64],
    region: &ComplexBox,
    tail_tol: f64,
) -> Result<Complex64, SeriesError> {
    check_rank(model.rank(), s)?;
    if region.rank() != model.rank() {
        return Err(SeriesError::RankMismatch {
            rank: model.rank(),
            got: region.rank(),
        });
    }
    if !region.contains(s) {
        return Err(SeriesError::OutsideRegion);
    }
    let leading = model.leading_theta();
    for k in 0..model.rank() {
        if region.coordinate_contains(k, leading[k]) {
            return Err(SeriesError::LeadingPoleInRegion);
        }
    }
    let mut total = pole_term_value(&leading, s, model.j())?;
    let prefactor = factorial_power(model.j(), model.rank());
    let exponent = (model.rank() as i32) * (model.j() as i32 + 2);
    for (i, term) in model.terms().iter().enumerate() {
        let mut dist = f64::INFINITY;
        for (k, &tk) in term.theta.iter().enumerate() {
            if region.coordinate_contains(k, tk) {
                return Err(SeriesError::PoleInRegion(i));
            }
            dist = dist.min(region.coordinate_distance(k, tk));
        }
        let bound = if dist > 0.0 {
            prefactor * term.coeff.unsigned_abs() as f64 / dist.powi(exponent)
        } else {
            f64::INFINITY
        };
        if bound < tail_tol {
            break;
        }
        total += term.coeff as f64 * pole_term_value(&term.theta, s, model.j())?;
    }
    Ok(total)
}

/// Result of the quadrature cross-check of the chamber integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralCheck {
    pub numeric: Complex64,
    pub closed_form: Complex64,
    pub abs_difference: f64,
}

/// Compare the iterated integral
/// `int_{R_+^r} (t_1 ... t_r)^(j+1) exp(-sum (s_k - theta_k) t_k) dt`
/// computed by per-axis Simpson quadrature on a truncated domain against the
/// closed form `((j+1)!)^r / prod (s_k - theta_k)^(j+2)`.
///
/// `resolution` is the number of subintervals per axis; the truncation point
/// scales with `1 / Re(s_k - theta_k)` so the discarded tail is negligible
/// at double precision.
pub fn chamber_integral_check(
    s: &[Complex64],
    theta: &[Complex64],
    j: u32,
    resolution: usize,
) -> Result<IntegralCheck, SeriesError> {
    check_rank(theta.len(), s)?;
    if theta.is_empty() {
        return Err(SeriesError::ZeroRank);
    }
    if resolution < 32 {
        return Err(SeriesError::ResolutionTooCoarse(resolution));
    }
    let mut numeric = Complex64::new(1.0, 0.0);
    let mut closed = Complex64::new(1.0, 0.0);
    let factor = factorial_power(j, 1);
    for (k, (&sk, &tk)) in s.iter().zip(theta).enumerate() {
        let a = sk - tk;
        if a.re <= 0.0 {
            return Err(SeriesError::DivergentRange(k));
        }
        // Truncate where t^(j+1) e^(-Re(a) t) has decayed far below the
        // integral's scale.
        let cutoff = (50.0 + 14.0 * j as f64) / a.re;
        let n = if resolution % 2 == 0 {
            resolution
        } else {
            resolution + 1
        };
        let h = cutoff / n as f64;
        let re_values: Vec<f64> = (0..=n)
            .map(|i| {
                let t = i as f64 * h;
                let w = t.powi(j as i32 + 1);
                (Complex64::new(-a.re * t, -a.im * t).exp() * w).re
            })
            .collect();
        let im_values: Vec<f64> = (0..=n)
            .map(|i| {
                let t = i as f64 * h;
                let w = t.powi(j as i32 + 1);
                (Complex64::new(-a.re * t, -a.im * t).exp() * w).im
            })
            .collect();
        numeric *= Complex64::new(simpson_uniform(&re_values, h), simpson_uniform(&im_values, h));
        closed /= a.powi(j as i32 + 2);
        closed *= factor;
    }
    Ok(IntegralCheck {
        numeric,
        closed_form: closed,
        abs_difference: (numeric - closed).norm(),
    })
}

/// Scaled diagnostic sequence `(sigma - 1)^(r(j+2)) * L_sum(sigma * 1) /
/// ((j+1)!)^r` along a sequence of sigma values above one. Approaches one
/// when the spectrum's series carries the predicted leading pole.
pub fn fit_leading_coefficient(
    spectrum: &Spectrum,
    j: u32,
    sigma_sequence: &[f64],
) -> Result<Vec<f64>, SeriesError> {
    let r = spectrum.rank();
    let exponent = (r as i32) * (j as i32 + 2);
    let prefactor = factorial_power(j, r);
    let mut out = Vec::with_capacity(sigma_sequence.len());
    for &sigma in sigma_sequence {
        if !(sigma.is_finite() && sigma > 1.0) {
            return Err(SeriesError::BadSigma(sigma));
        }
        let s = vec![Complex64::new(sigma, 0.0); r];
        let value = l_sum(spectrum, &s, j)?.re;
        out.push((sigma - 1.0).powi(exponent) * value / prefactor);
    }
    Ok(out)
}
