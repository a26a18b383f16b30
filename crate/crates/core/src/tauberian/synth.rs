//! Synthetic spectra with prescribed growth: product-lattice Riemann sums
//! for a pole model, Chebyshev-style arithmetic spectra, and the exact
//! continuum source.
//!
//! The lattice generator places classes at `x in (h N)^r` inside `(0, X]^r`
//! and chooses weights by telescoping: with `g_theta(x) = x^(j+1) e^(theta x)`
//! per axis, the class increment at node `n` is
//!
//! ```text
//! delta_n = sum_i c_i prod_k ( g_i(n_k h) - g_i((n_k - 1) h) )
//! ```
//!
//! so the cumulative `A(x)` agrees with `sum_i c_i prod_k g_i(x_k)` exactly
//! at lattice points and is the floor-step approximation in between. The
//! class index is `delta_n / (prod_k n_k h)^(j+1)` since `A` weights each
//! class by index times length-product power.
//!
//! The Chebyshev generator reduces rank one of the framework to classical
//! prime counting: classes at `log q` for prime powers `q = p^m` with index
//! `Lambda(q) = log p`, and cartesian products of that list for higher rank.

use super::TauberianError;
use crate::chamber::{ChamberBasis, GeodesicClass, Provenance, Spectrum};
use crate::dirichlet::PoleModel;

/// Largest node count a lattice synthesis will materialize.
const MAX_LATTICE_NODES: u64 = 8_000_000;
/// Largest class count a product Chebyshev synthesis will materialize.
const MAX_CHEBYSHEV_CLASSES: u64 = 8_000_000;

/// How a synthetic spectrum's growth profile is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// Lattice Riemann sum matching a full pole model; all pole locations
    /// must be real for the generated weights to be real.
    PoleModel(PoleModel),
    /// Lattice Riemann sum for the pure leading profile
    /// `(prod x_k)^(j+1) e^(sum x_k)`.
    ProductLattice,
    /// Prime-power classes weighted by the von Mangoldt function.
    Chebyshev,
    /// The continuum source `A(x) = (prod x_k)^(j+1) e^(sum x_k)` itself;
    /// not a finite spectrum, so synthesis refuses it.
    ExactContinuum,
}

/// Parameters for a synthetic spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub rank: usize,
    pub j: u32,
    pub generator: Generator,
    /// Lattice step; ignored by the Chebyshev generator.
    pub step: f64,
    /// Length cutoff: classes keep every coordinate at or below this.
    pub cutoff: f64,
}

impl SynthSpec {
    pub fn new(
        rank: usize,
        j: u32,
        generator: Generator,
        step: f64,
        cutoff: f64,
    ) -> Result<Self, TauberianError> {
        if rank == 0 {
            return Err(TauberianError::ZeroRank);
        }
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(TauberianError::CutoffTooSmall(cutoff));
        }
        let needs_step = matches!(
            generator,
            Generator::PoleModel(_) | Generator::ProductLattice
        );
        if needs_step && !(step.is_finite() && step > 0.0) {
            return Err(TauberianError::BadStep(step));
        }
        Ok(Self {
            rank,
            j,
            generator,
            step,
            cutoff,
        })
    }
}

/// Sieve of Eratosthenes; `is_prime[q]` for `q <= n`.
fn prime_sieve(n: usize) -> Vec<bool> {
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    if n >= 1 {
        is_prime[1] = false;
    }
    let mut p = 2usize;
    while p * p <= n {
        if is_prime[p] {
            let mut q = p * p;
            while q <= n {
                is_prime[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    is_prime
}

/// One-dimensional Chebyshev data: `(log q, Lambda(q), q)` for prime powers
/// `q = p^m` with `log q <= cutoff`, ascending in `q`.
fn von_mangoldt_lengths(cutoff: f64) -> Result<Vec<(f64, f64, u64)>, TauberianError> {
    if cutoff < std::f64::consts::LN_2 {
        return Err(TauberianError::CutoffTooSmall(cutoff));
    }
    let n = cutoff.exp().floor() as usize;
    let is_prime = prime_sieve(n);
    let mut out = Vec::new();
    for (p, &isp) in is_prime.iter().enumerate() {
        if !isp {
            continue;
        }
        let log_p = (p as f64).ln();
        let mut q = p as u64;
        loop {
            let log_q = (q as f64).ln();
            if log_q <= cutoff {
                out.push((log_q, log_p, q));
            }
            match q.checked_mul(p as u64) {
                Some(next) if next <= n as u64 => q = next,
                _ => break,
            }
        }
    }
    Ok(out)
}

/// Real per-term, per-axis pole locations of a model, leading term first.
/// Errors if any pole has a nonzero imaginary part: lattice weights must be
/// real.
fn real_profile(model: &PoleModel) -> Result<Vec<(Vec<f64>, f64)>, TauberianError> {
    let mut profile = vec![(vec![1.0; model.rank()], 1.0)];
    for (i, term) in model.terms().iter().enumerate() {
        let mut theta = Vec::with_capacity(model.rank());
        for (k, t) in term.theta.iter().enumerate() {
            if t.im != 0.0 {
                return Err(TauberianError::ComplexPole { term: i, k });
            }
            theta.push(t.re);
        }
        profile.push((theta, term.coeff as f64));
    }
    Ok(profile)
}

/// Generate the spectrum described by `spec`.
pub fn synth_spectrum(spec: &SynthSpec) -> Result<Spectrum, TauberianError> {
    match &spec.generator {
        Generator::ExactContinuum => Err(TauberianError::ContinuumHasNoSpectrum),
        Generator::Chebyshev => chebyshev_spectrum(spec),
        Generator::ProductLattice => {
            let model = PoleModel::leading_only(spec.rank, spec.j)?;
            lattice_spectrum(spec, &model)
        }
        Generator::PoleModel(model) => {
            if model.rank() != spec.rank {
                return Err(TauberianError::RankMismatch {
                    expected: spec.rank,
                    got: model.rank(),
                });
            }
            if model.j() != spec.j {
                return Err(TauberianError::WeightMismatch {
                    spec_j: spec.j,
                    model_j: model.j(),
                });
            }
            lattice_spectrum(spec, model)
        }
    }
}

fn chebyshev_spectrum(spec: &SynthSpec) -> Result<Spectrum, TauberianError> {
    let one_dim = von_mangoldt_lengths(spec.cutoff)?;
    let total = (one_dim.len() as u64)
        .checked_pow(spec.rank as u32)
        .unwrap_or(u64::MAX);
    if total > MAX_CHEBYSHEV_CLASSES {
        return Err(TauberianError::TooManyClasses(total));
    }
    let mut classes = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; spec.rank];
    loop {
        let mut lengths = Vec::with_capacity(spec.rank);
        let mut weight = 1.0f64;
        let mut label = String::new();
        for (k, &i) in idx.iter().enumerate() {
            let (l, lambda, q) = one_dim[i];
            lengths.push(l);
            weight *= lambda;
            if k > 0 {
                label.push('x');
            }
            label.push_str(&q.to_string());
        }
        classes.push(GeodesicClass::new(lengths, weight, 1.0, label)?);
        // Odometer over the r-fold product.
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < one_dim.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == spec.rank {
                let basis = ChamberBasis::new(spec.rank)?;
                return Ok(Spectrum::from_classes(
                    basis,
                    Provenance::Chebyshev,
                    classes,
                )?);
            }
        }
    }
}

fn lattice_spectrum(spec: &SynthSpec, model: &PoleModel) -> Result<Spectrum, TauberianError> {
    let profile = real_profile(model)?;
    let h = spec.step;
    let nodes_per_axis = (spec.cutoff / h + 1e-9).floor() as u64;
    if nodes_per_axis == 0 {
        return Err(TauberianError::CutoffTooSmall(spec.cutoff));
    }
    let total = nodes_per_axis
        .checked_pow(spec.rank as u32)
        .unwrap_or(u64::MAX);
    if total > MAX_LATTICE_NODES {
        return Err(TauberianError::TooManyClasses(total));
    }
    let m = nodes_per_axis as usize;
    // increments[i][k][n-1] = g_i(n h) - g_i((n-1) h) on axis k.
    let g = |theta: f64, x: f64| x.powi(spec.j as i32 + 1) * (theta * x).exp();
    let increments: Vec<Vec<Vec<f64>>> = profile
        .iter()
        .map(|(theta, _)| {
            (0..spec.rank)
                .map(|k| {
                    (1..=m)
                        .map(|n| {
                            let x1 = n as f64 * h;
                            let x0 = (n - 1) as f64 * h;
                            g(theta[k], x1) - g(theta[k], x0)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut classes = Vec::with_capacity(total as usize);
    let mut idx = vec![1usize; spec.rank];
    loop {
        let mut delta = 0.0f64;
        for ((_, coeff), incs) in profile.iter().zip(&increments) {
            let mut prod = *coeff;
            for (k, &n) in idx.iter().enumerate() {
                prod *= incs[k][n - 1];
            }
            delta += prod;
        }
        let mut label = String::new();
        let mut lengths = Vec::with_capacity(spec.rank);
        let mut len_prod = 1.0f64;
        for (k, &n) in idx.iter().enumerate() {
            let x = n as f64 * h;
            lengths.push(x);
            len_prod *= x;
            if k > 0 {
                label.push('.');
            }
            label.push_str(&n.to_string());
        }
        if delta < 0.0 {
            return Err(TauberianError::NonmonotoneProfile(label));
        }
        if delta > 0.0 {
            let index = delta / len_prod.powi(spec.j as i32 + 1);
            classes.push(GeodesicClass::new(lengths, index, 1.0, label)?);
        }
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] <= m {
                break;
            }
            idx[k] = 1;
            k += 1;
            if k == spec.rank {
                let basis = ChamberBasis::new(spec.rank)?;
                return Ok(Spectrum::from_classes(
                    basis,
                    Provenance::Synthetic,
                    classes,
                )?);
            }
        }
    }
}

/// The continuum growth profile `(prod x_k)^(j+1) e^(sum x_k)`.
pub fn continuum_a(x: &[f64], j: u32) -> f64 {
    let mut prod = 1.0f64;
    let mut sum = 0.0f64;
    for &xk in x {
        prod *= xk;
        sum += xk;
    }
    prod.powi(j as i32 + 1) * sum.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::big_a;
    use crate::dirichlet::{fit_leading_coefficient, PoleTerm};
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn chebyshev_small_cutoff_matches_hand_list() {
        // Prime powers up to e^3 ~ 20.09: 2,3,4,5,7,8,9,11,13,16,17,19.
        let spec = SynthSpec::new(1, 0, Generator::Chebyshev, 0.0, 3.0).unwrap();
        let s = synth_spectrum(&spec).unwrap();
        let qs: Vec<u64> = s
            .classes()
            .iter()
            .map(|c| c.lengths()[0].exp().round() as u64)
            .collect();
        assert_eq!(qs, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]);
        let expected_base: Vec<u64> = vec![2, 3, 2, 5, 7, 2, 3, 11, 13, 2, 17, 19];
        for (c, base) in s.classes().iter().zip(expected_base) {
            let lambda = (base as f64).ln();
            assert!((c.index() - lambda).abs() < 1e-12);
            assert_eq!(c.det_factor(), 1.0);
        }
    }

    #[test]
    fn chebyshev_rejects_empty_cutoff() {
        let spec = SynthSpec::new(1, 0, Generator::Chebyshev, 0.0, 0.5).unwrap();
        assert!(matches!(
            synth_spectrum(&spec).unwrap_err(),
            TauberianError::CutoffTooSmall(_)
        ));
    }

    #[test]
    fn chebyshev_product_rank_two() {
        let spec = SynthSpec::new(2, 0, Generator::Chebyshev, 0.0, 1.2).unwrap();
        // Prime powers with log q <= 1.2: 2 and 3. Product: 4 classes.
        let s = synth_spectrum(&spec).unwrap();
        assert_eq!(s.classes().len(), 4);
        let ln2 = 2.0f64.ln();
        let ln3 = 3.0f64.ln();
        let c = &s.classes()[0];
        assert_eq!(c.lengths(), &[ln2, ln2]);
        assert!((c.index() - ln2 * ln2).abs() < 1e-15);
        assert!(s.classes().iter().any(|c| c.lengths() == [ln2, ln3]));
    }

    #[test]
    fn lattice_grid_count_and_exactness() {
        let spec = SynthSpec::new(2, 0, Generator::ProductLattice, 0.5, 1.0).unwrap();
        let s = synth_spectrum(&spec).unwrap();
        assert_eq!(s.classes().len(), 4);
        // Telescoping makes A exact at lattice points.
        for x in [[0.5, 0.5], [1.0, 0.5], [1.0, 1.0]] {
            let a = big_a(&s, &x, 0).unwrap();
            let exact = continuum_a(&x, 0);
            assert!(
                (a - exact).abs() < 1e-12 * exact,
                "A({x:?}) = {a} vs {exact}"
            );
        }
    }

    #[test]
    fn lattice_with_secondary_real_pole() {
        // Profile x e^x - x e^0: increments stay positive for h away from 0.
        let model = PoleModel::new(
            1,
            0,
            vec![PoleTerm {
                theta: vec![Complex64::new(0.0, 0.0)],
                coeff: -1,
            }],
        )
        .unwrap();
        let spec = SynthSpec::new(1, 0, Generator::PoleModel(model), 0.5, 6.0).unwrap();
        let s = synth_spectrum(&spec).unwrap();
        let a = big_a(&s, &[4.0], 0).unwrap();
        let exact = 4.0 * 4.0f64.exp() - 4.0;
        assert!((a - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn lattice_rejects_complex_pole() {
        let model = PoleModel::new(
            1,
            0,
            vec![PoleTerm {
                theta: vec![Complex64::new(0.0, 1.0)],
                coeff: 1,
            }],
        )
        .unwrap();
        let spec = SynthSpec::new(1, 0, Generator::PoleModel(model), 0.5, 2.0).unwrap();
        assert!(matches!(
            synth_spectrum(&spec).unwrap_err(),
            TauberianError::ComplexPole { .. }
        ));
    }

    #[test]
    fn lattice_rejects_nonmonotone_profile() {
        // Coefficient -3 on theta = 0 drives early increments negative:
        // d/dx (x e^x - 3 x) < 0 near 0.
        let model = PoleModel::new(
            1,
            0,
            vec![PoleTerm {
                theta: vec![Complex64::new(0.0, 0.0)],
                coeff: -3,
            }],
        )
        .unwrap();
        let spec = SynthSpec::new(1, 0, Generator::PoleModel(model), 0.25, 2.0).unwrap();
        assert!(matches!(
            synth_spectrum(&spec).unwrap_err(),
            TauberianError::NonmonotoneProfile(_)
        ));
    }

    #[test]
    fn continuum_is_not_a_spectrum() {
        let spec = SynthSpec::new(1, 0, Generator::ExactContinuum, 0.1, 1.0).unwrap();
        assert_eq!(
            synth_spectrum(&spec).unwrap_err(),
            TauberianError::ContinuumHasNoSpectrum
        );
    }

    #[test]
    fn leading_lattice_recovers_unit_coefficient() {
        // The scaled series diagnostic approaches one for the pure leading
        // profile; 5% at sigma = 1.05 with a fine small-step lattice.
        let spec = SynthSpec::new(1, 0, Generator::ProductLattice, 0.1, 250.0).unwrap();
        let s = synth_spectrum(&spec).unwrap();
        let fit = fit_leading_coefficient(&s, 0, &[1.05]).unwrap();
        assert!(
            (fit[0] - 0.996705).abs() < 1e-4,
            "fit {} should be near frozen 0.996705",
            fit[0]
        );
        assert!((fit[0] - 1.0).abs() < 0.05);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn generated_big_a_monotone(
            chebyshev in proptest::bool::ANY,
            cutoff in 1.0f64..4.0,
            x1 in 0.1f64..4.0,
            dx in 0.0f64..2.0,
        ) {
            let generator = if chebyshev {
                Generator::Chebyshev
            } else {
                Generator::ProductLattice
            };
            let spec = SynthSpec::new(1, 0, generator, 0.25, cutoff).unwrap();
            let s = synth_spectrum(&spec).unwrap();
            let a1 = big_a(&s, &[x1], 0).unwrap();
            let a2 = big_a(&s, &[x1 + dx], 0).unwrap();
            prop_assert!(a1 >= 0.0);
            prop_assert!(a2 >= a1);
        }
    }
}
