//! Reproducible experiment drivers: the unit-box ratio experiment over a
//! field table, chamber-count ratio runs over a spectrum, Tauberian
//! convergence reports, the smoothing-kernel limit check, the pole-term
//! integral cross-check, and field-table completion.
//!
//! Every driver validates its configuration up front, runs under an
//! optionally pinned worker pool, and assembles results in a canonical
//! order, so the emitted reports are byte-identical for any worker count.

use crate::counting::{
    phi, phi_j, pi_count, psi, ratio_report, BoundConvention, CountError, CountQuery,
    Normalizer, RatioReport, ThetaEntry,
};
use crate::dirichlet::{chamber_integral_check, SeriesError};
use crate::io::IoError;
use crate::numberfield::{
    c_constant, enumerate_fields, find_fundamental_units, lambda_s, minkowski_h1_certificate,
    theta_entries, EnumerationConfig, FieldRecord, MinkowskiCertificate, NumberFieldError,
    PrimeSetPolicy,
};
use crate::tauberian::{
    lemma33_check, make_kernel, wiener_ikehara_verdict, ASource, KernelShape, TauberianError,
    VerdictReport,
};
use crate::chamber::{ChamberError, Spectrum};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Tauberian(#[from] TauberianError),
    #[error(transparent)]
    Field(#[from] NumberFieldError),
    #[error(transparent)]
    Chamber(#[from] ChamberError),
    #[error(transparent)]
    Io(#[from] IoError),
}

/// Run `f` on a pool of exactly `workers` threads (any positive count), or
/// on the ambient pool when `workers` is zero. Drivers produce identical
/// bytes either way; the knob exists to demonstrate that.
pub fn with_workers<T: Send>(
    workers: usize,
    f: impl FnOnce() -> T + Send,
) -> Result<T, ExperimentError> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ExperimentError::BadConfig(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn validate_tolerance(tol: f64) -> Result<(), ExperimentError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(ExperimentError::BadConfig(format!(
            "tolerance {tol} must be positive"
        )));
    }
    Ok(())
}

fn validate_axes(axes: &[Vec<f64>]) -> Result<(), ExperimentError> {
    if axes.is_empty() {
        return Err(ExperimentError::BadConfig("no grid axes".into()));
    }
    for (k, axis) in axes.iter().enumerate() {
        if axis.is_empty() {
            return Err(ExperimentError::BadConfig(format!("axis {k} is empty")));
        }
        for w in axis.windows(2) {
            if !(w[1] > w[0]) {
                return Err(ExperimentError::BadConfig(format!(
                    "axis {k} is not strictly increasing at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        if axis.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(ExperimentError::BadConfig(format!(
                "axis {k} has a nonpositive bound"
            )));
        }
    }
    Ok(())
}

/// Row-major cartesian product of the axes (last axis fastest); the
/// canonical grid-point order every report uses.
fn grid_points(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(points.len() * axis.len());
        for p in &points {
            for &v in axis {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

// ---------------------------------------------------------------------------
// Unit-box ratio experiment.
// ---------------------------------------------------------------------------

/// Report label marking that the box total counts units of maximal orders
/// only, a strict slice of the full order family the asymptotic speaks
/// about.
pub const THETA_LABEL: &str = "maximal-order slice of theta_S";

/// The cubic-case normalizer constant `c / sqrt(3) = 8 / sqrt(3)`.
pub fn theta_normalizer_constant() -> f64 {
    c_constant(3).expect("3 is a valid degree") / 3f64.sqrt()
}

/// Configuration of a unit-box ratio run over a validated field table.
#[derive(Debug, Clone)]
pub struct ThetaConfig {
    /// Per-axis box bounds, strictly increasing; the grid is their product.
    pub axes: [Vec<f64>; 2],
    /// Prime set defining the weights `lambda_S`.
    pub s: BTreeSet<u64>,
    pub policy: PrimeSetPolicy,
    /// Demand table-confirmed units for every record's box enumeration.
    pub strict_units: bool,
    /// Worker threads; zero uses the ambient pool.
    pub workers: usize,
}

/// Count the weighted unit-box total on every grid point and normalize by
/// `(c / sqrt(3)) T_1 T_2`. Per-record box enumerations run in parallel;
/// grid evaluation consumes them in table order, so output bytes do not
/// depend on the worker count. An empty table produces all-zero counts.
pub fn run_theta_experiment(
    records: &[FieldRecord],
    config: &ThetaConfig,
) -> Result<RatioReport, ExperimentError> {
    validate_axes(&config.axes)?;
    let t_max = [
        *config.axes[0].last().unwrap(),
        *config.axes[1].last().unwrap(),
    ];
    let entries: Vec<ThetaEntry> = with_workers(config.workers, || {
        records
            .par_iter()
            .map(|record| {
                theta_entries(
                    std::slice::from_ref(record),
                    &config.s,
                    config.policy,
                    t_max,
                    config.strict_units,
                )
                .map(|mut v| v.remove(0))
            })
            .collect::<Result<Vec<_>, _>>()
    })??;
    let mut counts = Vec::new();
    for point in grid_points(&[config.axes[0].clone(), config.axes[1].clone()]) {
        let query = CountQuery::log_scale(point.clone())?;
        let total = crate::counting::theta_s(&entries, &query)?;
        counts.push((point, total));
    }
    Ok(ratio_report(
        &counts,
        Normalizer::ProductT {
            constant: theta_normalizer_constant(),
        },
        THETA_LABEL,
    )?)
}

// ---------------------------------------------------------------------------
// Chamber-count ratio experiment.
// ---------------------------------------------------------------------------

/// Which counting function a chamber run evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    /// Flat-volume-weighted count.
    Psi,
    /// Index-weighted count.
    Phi,
    /// Index- and length-moment-weighted count (uses the query's `j`).
    PhiJ,
    /// Unweighted class count.
    Pi,
}

impl CountKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "psi" => Some(CountKind::Psi),
            "phi" => Some(CountKind::Phi),
            "phi-j" => Some(CountKind::PhiJ),
            "pi" => Some(CountKind::Pi),
            _ => None,
        }
    }
}

/// Configuration of a chamber-count ratio run over a spectrum.
#[derive(Debug, Clone)]
pub struct PgtConfig {
    /// Per-axis bounds, strictly increasing; the grid is their product.
    pub axes: Vec<Vec<f64>>,
    pub convention: BoundConvention,
    pub j: u32,
    pub kind: CountKind,
    pub normalizer: Normalizer,
    pub label: String,
    pub workers: usize,
}

/// Evaluate the chosen count over the grid and normalize. Grid points run
/// in parallel and are reassembled in canonical grid order.
pub fn run_pgt_experiment(
    spectrum: &Spectrum,
    config: &PgtConfig,
) -> Result<RatioReport, ExperimentError> {
    validate_axes(&config.axes)?;
    if config.axes.len() != spectrum.rank() {
        return Err(ExperimentError::BadConfig(format!(
            "{} axes for a rank-{} spectrum",
            config.axes.len(),
            spectrum.rank()
        )));
    }
    let points = grid_points(&config.axes);
    let counts: Vec<(Vec<f64>, f64)> = with_workers(config.workers, || {
        points
            .par_iter()
            .map(|point| -> Result<(Vec<f64>, f64), CountError> {
                let query =
                    CountQuery::new(point.clone(), config.convention, config.j, None)?;
                let value = match config.kind {
                    CountKind::Psi => psi(spectrum, &query)?,
                    CountKind::Phi => phi(spectrum, &query)?,
                    CountKind::PhiJ => phi_j(spectrum, &query)?,
                    CountKind::Pi => pi_count(spectrum, &query)? as f64,
                };
                Ok((point.clone(), value))
            })
            .collect::<Result<Vec<_>, _>>()
    })??;
    Ok(ratio_report(
        &counts,
        config.normalizer,
        config.label.clone(),
    )?)
}

// ---------------------------------------------------------------------------
// Tauberian convergence report.
// ---------------------------------------------------------------------------

/// Configuration of a normalized-ratio convergence run along a ray.
#[derive(Debug, Clone)]
pub struct TauberianConfig {
    pub j: u32,
    /// Ray direction, strictly positive coordinates.
    pub ray: Vec<f64>,
    /// Sample radii, strictly increasing and positive.
    pub radii: Vec<f64>,
}

/// Sample the normalized ratio along the ray and report running tail
/// envelopes. Sequential by construction (the envelopes are running
/// extrema), hence trivially deterministic.
pub fn run_tauberian_experiment(
    source: ASource<'_>,
    config: &TauberianConfig,
) -> Result<VerdictReport, ExperimentError> {
    validate_axes(std::slice::from_ref(&config.radii))?;
    Ok(wiener_ikehara_verdict(
        source,
        config.j,
        &config.ray,
        &config.radii,
    )?)
}

// ---------------------------------------------------------------------------
// Kernel limit check.
// ---------------------------------------------------------------------------

/// Configuration of the smoothed-integral limit check.
#[derive(Debug, Clone)]
pub struct KernelCheckConfig {
    pub s1: f64,
    pub resolution: usize,
    /// Moment orders to check.
    pub k_values: Vec<u32>,
    /// Evaluation points, strictly increasing; the tolerance is enforced at
    /// the largest.
    pub y_values: Vec<f64>,
    /// Relative deviation allowed at the largest `y`.
    pub tolerance: f64,
    pub workers: usize,
}

/// One sampled deviation of the smoothed integral from its limit value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelCheckRow {
    pub k: u32,
    pub y: f64,
    pub value: f64,
    pub rel_deviation: f64,
}

/// Limit-check report; `target` is `2 pi f(0)` for the built kernel, and
/// `breach` is set when any moment order misses the tolerance at the
/// largest sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCheckReport {
    pub s1: f64,
    pub resolution: usize,
    pub target: f64,
    pub tolerance: f64,
    pub rows: Vec<KernelCheckRow>,
    pub breach: bool,
}

/// Build the kernel and compare the smoothed integral against `2 pi f(0)`
/// on the `(k, y)` grid.
pub fn run_kernel_check(config: &KernelCheckConfig) -> Result<KernelCheckReport, ExperimentError> {
    validate_tolerance(config.tolerance)?;
    if config.k_values.is_empty() {
        return Err(ExperimentError::BadConfig("no moment orders".into()));
    }
    validate_axes(std::slice::from_ref(&config.y_values))?;
    let report = with_workers(config.workers, || -> Result<KernelCheckReport, ExperimentError> {
        let kernel = make_kernel(KernelShape::MollifierSquare, config.s1, config.resolution)?;
        let target = kernel.two_pi_f_zero();
        let grid: Vec<(u32, f64)> = config
            .k_values
            .iter()
            .flat_map(|&k| config.y_values.iter().map(move |&y| (k, y)))
            .collect();
        let rows: Vec<KernelCheckRow> = grid
            .par_iter()
            .map(|&(k, y)| -> Result<KernelCheckRow, TauberianError> {
                let value = lemma33_check(&kernel, k, y)?;
                Ok(KernelCheckRow {
                    k,
                    y,
                    value,
                    rel_deviation: ((value - target) / target).abs(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let last_y = *config.y_values.last().unwrap();
        let breach = rows
            .iter()
            .any(|row| row.y == last_y && row.rel_deviation > config.tolerance);
        Ok(KernelCheckReport {
            s1: config.s1,
            resolution: config.resolution,
            target,
            tolerance: config.tolerance,
            rows,
            breach,
        })
    })??;
    Ok(report)
}

/// Serialize a kernel-check report.
pub fn kernel_check_to_string(report: &KernelCheckReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# weylcount kernel-check format=1 s1={} resolution={} target={} tolerance={} breach={}",
        report.s1, report.resolution, report.target, report.tolerance, report.breach
    )
    .unwrap();
    out.push_str("k,y,value,rel_deviation\n");
    for row in &report.rows {
        writeln!(out, "{},{},{},{}", row.k, row.y, row.value, row.rel_deviation).unwrap();
    }
    out
}

// ---------------------------------------------------------------------------
// Pole-term integral cross-check.
// ---------------------------------------------------------------------------

/// Configuration of the quadrature cross-check of the closed-form pole
/// terms.
#[derive(Debug, Clone)]
pub struct DirichletCheckConfig {
    /// Relative agreement demanded of every grid combination.
    pub tolerance: f64,
    /// Quadrature subintervals per axis.
    pub resolution: usize,
    pub workers: usize,
}

impl Default for DirichletCheckConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            resolution: 4000,
            workers: 0,
        }
    }
}

/// One checked combination: iterated quadrature against the closed form at
/// `s - theta` constant along each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralCheckRow {
    pub rank: usize,
    pub j: u32,
    pub gaps: Vec<f64>,
    pub closed_form: f64,
    pub numeric: f64,
    pub rel_difference: f64,
}

/// Cross-check report over the standard grid `rank in {1,2}`, `j in
/// {0,1,2}`, per-axis gaps from `{0.5, 1, 2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCheckReport {
    pub tolerance: f64,
    pub resolution: usize,
    pub rows: Vec<IntegralCheckRow>,
    pub breach: bool,
}

/// Run the standard cross-check grid: 36 combinations of rank, moment
/// order, and per-axis gap values.
pub fn run_dirichlet_check(
    config: &DirichletCheckConfig,
) -> Result<DirichletCheckReport, ExperimentError> {
    validate_tolerance(config.tolerance)?;
    if config.resolution < 2 {
        return Err(ExperimentError::BadConfig(format!(
            "resolution {} too coarse",
            config.resolution
        )));
    }
    let gap_values = [0.5, 1.0, 2.0];
    let mut combos: Vec<(usize, u32, Vec<f64>)> = Vec::new();
    for rank in [1usize, 2] {
        for j in [0u32, 1, 2] {
            let axes = vec![gap_values.to_vec(); rank];
            for gaps in grid_points(&axes) {
                combos.push((rank, j, gaps));
            }
        }
    }
    let rows: Vec<IntegralCheckRow> = with_workers(config.workers, || {
        combos
            .par_iter()
            .map(|(rank, j, gaps)| -> Result<IntegralCheckRow, SeriesError> {
                let s: Vec<_> = gaps
                    .iter()
                    .map(|&g| num_complex::Complex64::new(g, 0.0))
                    .collect();
                let theta = vec![num_complex::Complex64::new(0.0, 0.0); *rank];
                let check = chamber_integral_check(&s, &theta, *j, config.resolution)?;
                let closed = check.closed_form.re;
                Ok(IntegralCheckRow {
                    rank: *rank,
                    j: *j,
                    gaps: gaps.clone(),
                    closed_form: closed,
                    numeric: check.numeric.re,
                    rel_difference: check.abs_difference / closed.abs(),
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })??;
    let breach = rows.iter().any(|row| row.rel_difference > config.tolerance);
    Ok(DirichletCheckReport {
        tolerance: config.tolerance,
        resolution: config.resolution,
        rows,
        breach,
    })
}

/// Serialize an integral cross-check report; gaps are `;`-joined inside one
/// column.
pub fn dirichlet_check_to_string(report: &DirichletCheckReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# weylcount integral-check format=1 resolution={} tolerance={} breach={}",
        report.resolution, report.tolerance, report.breach
    )
    .unwrap();
    out.push_str("rank,j,gaps,closed,numeric,rel_difference\n");
    for row in &report.rows {
        let gaps = row
            .gaps
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.rank, row.j, gaps, row.closed_form, row.numeric, row.rel_difference
        )
        .unwrap();
    }
    out
}

// ---------------------------------------------------------------------------
// Field-table completion.
// ---------------------------------------------------------------------------

/// Configuration of an enumeration-plus-completion run.
#[derive(Debug, Clone)]
pub struct EnumerateConfig {
    pub disc_bound: i128,
    pub s: BTreeSet<u64>,
    pub policy: PrimeSetPolicy,
    pub coeff_box: EnumerationConfig,
    /// Unit-search coordinate height; zero skips unit completion.
    pub unit_height: i64,
    pub workers: usize,
}

/// Enumerate fields and complete each record as far as the evidence allows:
/// search fundamental units to the configured height, and attach `h = 1`
/// where the norm-bound scan certifies it. Completion is best-effort — a
/// height too small to expose a rank-2 unit lattice, or an inconclusive
/// norm-bound scan, leaves the record without units or class number rather
/// than failing the run. The canonical table format cannot express the
/// missing data, so callers serialize only records passing
/// `io::record_is_table_complete`. Records stay in enumeration (canonical)
/// order.
pub fn enumerate_and_complete(
    config: &EnumerateConfig,
) -> Result<Vec<FieldRecord>, ExperimentError> {
    let records = enumerate_fields(
        config.disc_bound,
        &config.s,
        config.policy,
        &config.coeff_box,
    )?;
    if config.unit_height == 0 {
        return Ok(records);
    }
    let completed: Vec<FieldRecord> = with_workers(config.workers, || {
        records
            .into_par_iter()
            .map(|mut record| -> Result<FieldRecord, NumberFieldError> {
                match find_fundamental_units(&record, config.unit_height) {
                    Ok((units, status)) => record.attach_units(units, status)?,
                    Err(NumberFieldError::InsufficientUnits { .. }) => {}
                    Err(e) => return Err(e),
                }
                if minkowski_h1_certificate(&record) == MinkowskiCertificate::HIsOne {
                    record.attach_class_number(1, true)?;
                }
                Ok(record)
            })
            .collect::<Result<Vec<_>, _>>()
    })??;
    Ok(completed)
}

/// Weight inputs for a record under a prime set: `(lambda_S, weight)` with
/// weight `R h lambda_S`; convenience for report annotations.
pub fn record_weight(
    record: &FieldRecord,
    s: &BTreeSet<u64>,
    policy: PrimeSetPolicy,
) -> Result<(u64, f64), ExperimentError> {
    let lambda = lambda_s(record, s, policy)?;
    let h = record
        .h()
        .ok_or(NumberFieldError::MissingData("class number"))?;
    let r = record
        .r()
        .ok_or(NumberFieldError::MissingData("regulator"))?;
    Ok((lambda, crate::numberfield::theta_weight(r, h, lambda)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{ingest_field_table_str, ratio_report_to_string, FIELD_TABLE_HEADER};
    use crate::tauberian::{synth_spectrum, Generator, SynthSpec};

    fn table() -> Vec<FieldRecord> {
        let text = format!(
            "{FIELD_TABLE_HEADER}\n\
             -1,-2,1,49,1,0.5254546821225723,1,-1,0,1,1,-1\n\
             0,-3,-1,81,1,0.8492874506461924,1,1,-1,1,1,0\n"
        );
        let report = ingest_field_table_str(&text, None, PrimeSetPolicy::AllowSmall).unwrap();
        assert!(report.rejected.is_empty());
        report.accepted
    }

    fn s23() -> BTreeSet<u64> {
        [2u64, 3].into_iter().collect()
    }

    #[test]
    fn theta_experiment_runs_and_is_deterministic() {
        let records = table();
        let mut config = ThetaConfig {
            axes: [vec![1.0, 2.5], vec![1.5, 3.0]],
            s: s23(),
            policy: PrimeSetPolicy::Strict,
            strict_units: true,
            workers: 1,
        };
        let one = run_theta_experiment(&records, &config).unwrap();
        config.workers = 4;
        let four = run_theta_experiment(&records, &config).unwrap();
        assert_eq!(
            ratio_report_to_string(&one).unwrap(),
            ratio_report_to_string(&four).unwrap()
        );
        assert_eq!(one.rows.len(), 4);
        assert_eq!(one.label, THETA_LABEL);
        // Normalizer is (8 / sqrt 3) T1 T2 and the ratio column is exact.
        let c = theta_normalizer_constant();
        assert!((c - 8.0 / 3f64.sqrt()).abs() < 1e-15);
        for row in &one.rows {
            let prod: f64 = row.bounds.iter().product();
            assert_eq!(row.normalizer, c * prod);
            assert_eq!(row.ratio, row.count / row.normalizer);
        }
        // Grid order is row-major with the second axis fastest.
        assert_eq!(one.rows[0].bounds, vec![1.0, 1.5]);
        assert_eq!(one.rows[1].bounds, vec![1.0, 3.0]);
        assert_eq!(one.rows[2].bounds, vec![2.5, 1.5]);
        assert_eq!(one.rows[3].bounds, vec![2.5, 3.0]);
        // Counts grow with the box and carry the field weights.
        assert!(one.rows[3].count >= one.rows[0].count);
        assert!(one.rows[3].count > 0.0);
    }

    #[test]
    fn theta_experiment_empty_table_gives_zero_counts() {
        let config = ThetaConfig {
            axes: [vec![1.0, 2.0], vec![1.0, 2.0]],
            s: s23(),
            policy: PrimeSetPolicy::Strict,
            strict_units: true,
            workers: 0,
        };
        let report = run_theta_experiment(&[], &config).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.rows.iter().all(|row| row.count == 0.0));
    }

    #[test]
    fn theta_experiment_validates_axes() {
        let config = ThetaConfig {
            axes: [vec![2.0, 1.0], vec![1.0]],
            s: s23(),
            policy: PrimeSetPolicy::Strict,
            strict_units: true,
            workers: 0,
        };
        assert!(matches!(
            run_theta_experiment(&[], &config),
            Err(ExperimentError::BadConfig(_))
        ));
    }

    #[test]
    fn pgt_experiment_runs_and_is_deterministic() {
        let spec = SynthSpec::new(1, 0, Generator::ProductLattice, 0.05, 4.0).unwrap();
        let spectrum = synth_spectrum(&spec).unwrap();
        let mut config = PgtConfig {
            axes: vec![vec![1.0, 2.0, 3.0]],
            convention: BoundConvention::LogScale,
            j: 0,
            kind: CountKind::PhiJ,
            normalizer: Normalizer::PntProfile { j: 0 },
            label: "lattice profile".into(),
            workers: 1,
        };
        let one = run_pgt_experiment(&spectrum, &config).unwrap();
        config.workers = 3;
        let three = run_pgt_experiment(&spectrum, &config).unwrap();
        assert_eq!(
            ratio_report_to_string(&one).unwrap(),
            ratio_report_to_string(&three).unwrap()
        );
        assert_eq!(one.rows.len(), 3);
        // The lattice Riemann sum tracks the continuum profile loosely even
        // at this step; the ratio is near one and improves with the bound.
        let last = one.rows.last().unwrap();
        assert!((last.ratio - 1.0).abs() < 0.2, "ratio {}", last.ratio);
        // Unweighted counts are integers.
        config.kind = CountKind::Pi;
        config.normalizer = Normalizer::ProductT { constant: 1.0 };
        let pi_report = run_pgt_experiment(&spectrum, &config).unwrap();
        assert!(pi_report.rows.iter().all(|r| r.count.fract() == 0.0));
        // Rank mismatch is a configuration error.
        config.axes = vec![vec![1.0], vec![1.0]];
        assert!(matches!(
            run_pgt_experiment(&spectrum, &config),
            Err(ExperimentError::BadConfig(_))
        ));
    }

    #[test]
    fn tauberian_experiment_exact_continuum_is_one() {
        let config = TauberianConfig {
            j: 1,
            ray: vec![1.0, 0.5],
            radii: vec![1.0, 2.0, 4.0],
        };
        let report = run_tauberian_experiment(ASource::ExactContinuum, &config).unwrap();
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows {
            assert!((row.b - 1.0).abs() < 1e-12);
            assert!((row.tail_sup - 1.0).abs() < 1e-12);
            assert!((row.tail_inf - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_check_reports_and_breaches() {
        let mut config = KernelCheckConfig {
            s1: 1.0,
            resolution: 2000,
            k_values: vec![0, 1],
            y_values: vec![20.0, 40.0],
            tolerance: 0.02,
            workers: 1,
        };
        let one = run_kernel_check(&config).unwrap();
        assert!(!one.breach);
        assert_eq!(one.rows.len(), 4);
        // Deviations shrink from y = 20 to y = 40 for each k.
        for k in [0u32, 1] {
            let devs: Vec<f64> = one
                .rows
                .iter()
                .filter(|r| r.k == k)
                .map(|r| r.rel_deviation)
                .collect();
            assert!(devs[1] < devs[0], "k={k} devs {devs:?}");
        }
        config.workers = 4;
        let four = run_kernel_check(&config).unwrap();
        assert_eq!(kernel_check_to_string(&one), kernel_check_to_string(&four));
        // An unreachable tolerance flips the breach flag.
        config.tolerance = 1e-12;
        assert!(run_kernel_check(&config).unwrap().breach);
        config.tolerance = -1.0;
        assert!(matches!(
            run_kernel_check(&config),
            Err(ExperimentError::BadConfig(_))
        ));
    }

    #[test]
    fn dirichlet_check_grid_and_determinism() {
        let mut config = DirichletCheckConfig {
            tolerance: 1e-6,
            resolution: 1200,
            workers: 1,
        };
        let one = run_dirichlet_check(&config).unwrap();
        // 3 j-values times (3 + 9) gap combinations.
        assert_eq!(one.rows.len(), 36);
        assert!(!one.breach);
        config.workers = 4;
        let four = run_dirichlet_check(&config).unwrap();
        assert_eq!(
            dirichlet_check_to_string(&one),
            dirichlet_check_to_string(&four)
        );
        // Tightening the tolerance below the observed error breaches.
        let max_rel = one
            .rows
            .iter()
            .map(|r| r.rel_difference)
            .fold(0.0f64, f64::max);
        assert!(max_rel > 0.0);
        config.tolerance = max_rel / 2.0;
        assert!(run_dirichlet_check(&config).unwrap().breach);
    }

    #[test]
    fn enumerate_and_complete_produces_emittable_table() {
        let config = EnumerateConfig {
            disc_bound: 100,
            s: BTreeSet::new(),
            policy: PrimeSetPolicy::AllowSmall,
            coeff_box: EnumerationConfig::default(),
            unit_height: 10,
            workers: 2,
        };
        let records = enumerate_and_complete(&config).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].disc_field(), 49);
        assert_eq!(records[1].disc_field(), 81);
        for record in &records {
            assert_eq!(record.h(), Some(1));
            assert!(record.certifications().h_certified_minkowski);
            assert!(record.fundamental_units().is_some());
            assert!(record.r().unwrap() > 0.0);
        }
        let table = crate::io::field_table_to_string(&records).unwrap();
        // The canonical presentation of the disc-49 field is x^3 - 7x - 7.
        assert!(table.contains("0,-7,-7,49,1,"), "table:\n{table}");
        let (lambda, weight) = record_weight(&records[0], &s23(), PrimeSetPolicy::Strict).unwrap();
        assert_eq!(lambda, 9);
        assert!((weight - 9.0 * records[0].r().unwrap()).abs() < 1e-15);
    }
}
