//! Fejer-type smoothing kernels `f = f1 * f1` built from an even bump, with
//! a tabulated nonnegative Fourier transform.
//!
//! The base function is the standard mollifier bump
//! `f1(t) = exp(-1/(1 - (t/S1)^2))` on `(-S1, S1)`, sampled on a uniform
//! grid of step `h = 2 S1 / resolution`. The convolution is formed on the
//! aligned grid `x_m = -2 S1 + m h`, so its transform factors exactly:
//!
//! ```text
//! fhat(xi) = (h * sum_l f1(t_l) cos(xi t_l))^2 >= 0
//! ```
//!
//! the square of a real number in every table slot, which realizes the
//! nonnegativity `fhat = (fhat1)^2` without any clamping in practice. The
//! transform convention is `fhat(xi) = integral f(x) exp(-i xi x) dx`, the
//! one for which `integral fhat = 2 pi f(0)`; trapezoid sums of the table
//! reproduce that identity to near machine precision because `f` has
//! compact support (Poisson summation leaves only the `q = 0` image when
//! the table step is below `pi / (2 S1)`).

use super::TauberianError;
use rayon::prelude::*;

/// Step of the transform table in the frequency variable.
const FHAT_STEP: f64 = 0.02;
/// Table growth block; the table stops once a whole block stays below
/// `TAIL_CUT` times the running maximum.
const FHAT_BLOCK: usize = 512;
const TAIL_CUT: f64 = 1e-14;
const MAX_FHAT_POINTS: usize = 500_000;
const MIN_RESOLUTION: usize = 64;

/// Supported base-function shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelShape {
    /// `f = f1 * f1` with `f1` the standard compactly supported mollifier.
    MollifierSquare,
}

/// A smoothing kernel with tabulated convolution and transform.
#[derive(Debug, Clone)]
pub struct Kernel {
    s1: f64,
    step: f64,
    f1: Vec<f64>,
    f: Vec<f64>,
    fhat_step: f64,
    /// Values of `fhat` at `xi = m * fhat_step`, `m = 0..len`; the even
    /// reflection covers negative frequencies.
    fhat: Vec<f64>,
    fhat_min: f64,
}

impl Kernel {
    /// Half-width of the support of `f1`.
    pub fn s1(&self) -> f64 {
        self.s1
    }

    /// Half-width of the support of `f = f1 * f1`.
    pub fn support_halfwidth(&self) -> f64 {
        2.0 * self.s1
    }

    /// Sample step of the `f1` and `f` tables.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// `f(0)`, the peak of the convolution; positive by construction.
    pub fn f_zero(&self) -> f64 {
        self.f[self.f.len() / 2]
    }

    /// `2 pi f(0)`, the Lemma-3.3 limit value for this kernel.
    pub fn two_pi_f_zero(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.f_zero()
    }

    /// Tabulated convolution values on `[-2 S1, 2 S1]` with step `step()`.
    pub fn f_values(&self) -> &[f64] {
        &self.f
    }

    /// Tabulated transform values at `xi = m * fhat_step()` for `m >= 0`.
    pub fn fhat_values(&self) -> &[f64] {
        &self.fhat
    }

    /// Step of the transform table.
    pub fn fhat_step(&self) -> f64 {
        self.fhat_step
    }

    /// Frequency beyond which the transform is treated as zero.
    pub fn fhat_halfwidth(&self) -> f64 {
        (self.fhat.len() - 1) as f64 * self.fhat_step
    }

    /// Smallest tabulated transform value before clamping. The table is a
    /// pointwise square, so this is never negative; the accessor exists so
    /// callers can audit the guarantee.
    pub fn fhat_min(&self) -> f64 {
        self.fhat_min
    }

    /// Transform value at an arbitrary frequency: even reflection, linear
    /// interpolation on the table, zero beyond the resolved tail.
    pub fn fhat_at(&self, xi: f64) -> f64 {
        let a = xi.abs() / self.fhat_step;
        let i = a.floor() as usize;
        if i + 1 >= self.fhat.len() {
            return 0.0;
        }
        let frac = a - i as f64;
        self.fhat[i] + (self.fhat[i + 1] - self.fhat[i]) * frac
    }

    /// Transform convention recorded with every tabulation.
    pub fn convention(&self) -> &'static str {
        "fhat(xi) = integral f(x) exp(-i xi x) dx"
    }
}

/// Build a kernel from the given shape. `resolution` is the number of
/// sample subintervals across the support of `f1`; it must be even and at
/// least 64 so evenness and support of the tables can be certified on the
/// grid.
pub fn make_kernel(
    shape: KernelShape,
    s1: f64,
    resolution: usize,
) -> Result<Kernel, TauberianError> {
    let KernelShape::MollifierSquare = shape;
    if !(s1.is_finite() && s1 > 0.0) {
        return Err(TauberianError::BadSupport(s1));
    }
    if resolution < MIN_RESOLUTION || resolution % 2 != 0 {
        return Err(TauberianError::ResolutionTooCoarse {
            got: resolution,
            min: MIN_RESOLUTION,
        });
    }
    let n = resolution;
    let h = 2.0 * s1 / n as f64;
    // Grid points as signed integer multiples of h, so t_{n-l} = -t_l holds
    // bitwise and the sampled bump is exactly even.
    let mid = n / 2;
    let grid_t = |l: usize| (l as f64 - mid as f64) * h;
    let f1: Vec<f64> = (0..=n)
        .map(|l| {
            let u = grid_t(l) / s1;
            if u.abs() < 1.0 {
                (-1.0 / (1.0 - u * u)).exp()
            } else {
                0.0
            }
        })
        .collect();

    // Convolution on the aligned grid: f(x_m) = h * sum_l f1_l f1_{m-l},
    // computed on one half and mirrored so the table is even bitwise.
    let mut f = vec![0.0f64; 2 * n + 1];
    for m in 0..=n {
        let mut acc = 0.0;
        for l in 0..=m {
            acc += f1[l] * f1[m - l];
        }
        f[m] = h * acc;
        f[2 * n - m] = f[m];
    }

    // Transform of f1 on the same grid; fhat is its pointwise square. The
    // grid is symmetric (t_{n-l} = -t_l), so the sum is real and can be
    // folded around the center.
    let half: Vec<(f64, f64)> = (0..mid).map(|l| (grid_t(l), f1[l])).collect();
    let center = f1[mid];
    let fhat1_at = move |xi: f64| -> f64 {
        let mut acc = 0.0;
        for &(t, v) in &half {
            acc += v * (xi * t).cos();
        }
        h * (2.0 * acc + center)
    };

    // The tabulated transform is a cosine sum over a step-h lattice, hence
    // periodic in xi with period 2 pi / h and symmetric about the Nyquist
    // frequency pi / h. If the tail has not fallen below the cut by then it
    // mirrors back up and never will, so the scan stops there.
    let nyquist_points = (std::f64::consts::PI / h / FHAT_STEP).ceil() as usize;
    let scan_limit = nyquist_points.min(MAX_FHAT_POINTS);
    let mut fhat: Vec<f64> = Vec::new();
    let mut max_seen = 0.0f64;
    loop {
        let start = fhat.len();
        let block: Vec<f64> = (start..start + FHAT_BLOCK)
            .into_par_iter()
            .map(|m| {
                let v = fhat1_at(m as f64 * FHAT_STEP);
                v * v
            })
            .collect();
        let block_max = block.iter().cloned().fold(0.0f64, f64::max);
        fhat.extend_from_slice(&block);
        max_seen = max_seen.max(block_max);
        if block_max < TAIL_CUT * max_seen {
            break;
        }
        if fhat.len() > scan_limit {
            return Err(TauberianError::TailNotResolved);
        }
    }
    let fhat_min = fhat.iter().cloned().fold(f64::INFINITY, f64::min);
    // Contract: the raw minimum must clear -1e-10; squares already do, and
    // the clamp below is a no-op kept for the stated guarantee.
    debug_assert!(fhat_min >= -1e-10);
    for v in &mut fhat {
        if *v < 0.0 {
            *v = 0.0;
        }
    }

    Ok(Kernel {
        s1,
        step: h,
        f1,
        f,
        fhat_step: FHAT_STEP,
        fhat,
        fhat_min,
    })
}

impl Kernel {
    /// Base-function samples on `[-S1, S1]`.
    pub fn f1_values(&self) -> &[f64] {
        &self.f1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::compensated_sum;
    use proptest::prelude::*;

    fn standard() -> &'static Kernel {
        use std::sync::OnceLock;
        static K: OnceLock<Kernel> = OnceLock::new();
        K.get_or_init(|| make_kernel(KernelShape::MollifierSquare, 1.0, 2000).unwrap())
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_kernel(KernelShape::MollifierSquare, 0.0, 2000).is_err());
        assert!(make_kernel(KernelShape::MollifierSquare, -1.0, 2000).is_err());
        assert!(make_kernel(KernelShape::MollifierSquare, 1.0, 63).is_err());
        assert!(make_kernel(KernelShape::MollifierSquare, 1.0, 101).is_err());
    }

    #[test]
    fn standard_kernel_frozen_values() {
        let k = standard();
        assert_eq!(k.support_halfwidth(), 2.0);
        // f(0) = integral of f1^2; grid sum is spectrally accurate.
        assert!((k.f_zero() - 0.13308612084499427).abs() < 1e-12);
        assert!((k.two_pi_f_zero() - 0.8362047590827949).abs() < 1e-12);
        // fhat(0) = (integral of f1)^2.
        let int_f1 = 0.4439938161680794;
        assert!((k.fhat_values()[0] - int_f1 * int_f1).abs() < 1e-12);
        assert!((k.fhat_at(0.0) - int_f1 * int_f1).abs() < 1e-12);
        // Tail resolved a couple hundred units out.
        let u = k.fhat_halfwidth();
        assert!((150.0..400.0).contains(&u), "halfwidth {u}");
    }

    #[test]
    fn convolution_even_and_supported() {
        let k = standard();
        let f = k.f_values();
        assert_eq!(f.len() % 2, 1);
        for (a, b) in f.iter().zip(f.iter().rev()) {
            assert!((a - b).abs() < 1e-18);
        }
        assert_eq!(f[0], 0.0);
        assert_eq!(*f.last().unwrap(), 0.0);
        assert!(k.f_zero() > 0.0);
    }

    #[test]
    fn table_integral_matches_inversion_constant() {
        // Trapezoid over the even extension of the table equals 2 pi f(0):
        // compact support plus a fine step make the lattice sum exact.
        let k = standard();
        let vals = k.fhat_values();
        let s = compensated_sum(vals.iter().skip(1).cloned()) * 2.0 + vals[0];
        let integral = s * k.fhat_step();
        let target = k.two_pi_f_zero();
        assert!(
            ((integral - target) / target).abs() < 1e-12,
            "integral {integral} vs {target}"
        );
    }

    #[test]
    fn fhat_interpolation_and_cutoff() {
        let k = standard();
        let beyond = k.fhat_halfwidth() + 1.0;
        assert_eq!(k.fhat_at(beyond), 0.0);
        assert_eq!(k.fhat_at(-beyond), 0.0);
        // Evenness through the accessor.
        assert_eq!(k.fhat_at(3.137), k.fhat_at(-3.137));
    }

    #[test]
    fn coarse_grid_reports_unresolved_tail() {
        // At this resolution the transform has not decayed below the cut by
        // the Nyquist frequency, so the scan reports instead of looping over
        // the periodic images.
        assert_eq!(
            make_kernel(KernelShape::MollifierSquare, 0.5, 64).unwrap_err(),
            TauberianError::TailNotResolved
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn fhat_nonnegative_for_random_kernels(
            s1 in 0.5f64..2.0,
            res_half in 200usize..320,
        ) {
            let k = make_kernel(KernelShape::MollifierSquare, s1, 2 * res_half).unwrap();
            prop_assert!(k.fhat_min() >= -1e-10);
            prop_assert!(k.fhat_values().iter().all(|&v| v >= 0.0));
            prop_assert!(k.f_zero() > 0.0);
        }
    }
}
