//! Shared numeric helpers: compensated summation and uniform-grid quadrature.

/// Neumaier-compensated accumulator. Order of `add` calls is part of the
/// contract: summing the same values in the same order is bit-reproducible.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Sums in iteration order with Neumaier compensation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Trapezoid rule on a uniform grid. For smooth integrands whose derivatives
/// vanish (or are negligible) at both ends, the Euler-Maclaurin correction
/// terms drop out and the rule converges faster than any power of the step.
pub fn trapezoid_uniform(values: &[f64], step: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mut acc = CompensatedSum::new();
    acc.add(0.5 * values[0]);
    for &v in &values[1..values.len() - 1] {
        acc.add(v);
    }
    acc.add(0.5 * values[values.len() - 1]);
    acc.value() * step
}

/// Composite Simpson rule on a uniform grid; the final interval falls back to
/// a trapezoid piece when the sample count is even.
pub fn simpson_uniform(values: &[f64], step: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * (values[0] + values[1]) * step;
    }
    let pairs = (n - 1) / 2;
    let mut acc = CompensatedSum::new();
    for p in 0..pairs {
        let i = 2 * p;
        acc.add(values[i] + 4.0 * values[i + 1] + values[i + 2]);
    }
    let mut total = acc.value() * step / 3.0;
    if (n - 1) % 2 == 1 {
        total += 0.5 * (values[n - 2] + values[n - 1]) * step;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        // 1 + 1e16 - 1e16 loses the 1 in naive f64 order.
        let naive = (1.0f64 + 1e16) - 1e16;
        assert_eq!(naive, 0.0);
        assert_eq!(compensated_sum([1.0, 1e16, -1e16]), 1.0);
    }

    #[test]
    fn compensated_sum_matches_exact_series() {
        let values: Vec<f64> = (1..=100_000).map(|k| 1.0 / k as f64).collect();
        let forward = compensated_sum(values.iter().copied());
        let backward = compensated_sum(values.iter().rev().copied());
        assert!((forward - backward).abs() < 1e-12);
    }

    #[test]
    fn simpson_integrates_cubic_exactly() {
        // Simpson is exact on cubics.
        let n = 201;
        let h = 2.0 / (n - 1) as f64;
        let values: Vec<f64> = (0..n)
            .map(|i| {
                let x = i as f64 * h;
                x * x * x - x
            })
            .collect();
        let exact = 2.0f64.powi(4) / 4.0 - 2.0;
        assert!((simpson_uniform(&values, h) - exact).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_is_spectral_on_smooth_bump() {
        // exp(-1/(1-t^2)) vanishes to all orders at the endpoints.
        let n = 2001;
        let h = 2.0 / (n - 1) as f64;
        let f = |t: f64| {
            let u = 1.0 - t * t;
            if u <= 0.0 {
                0.0
            } else {
                (-1.0 / u).exp()
            }
        };
        let coarse: Vec<f64> = (0..n).map(|i| f(-1.0 + i as f64 * h)).collect();
        let fine_n = 4 * (n - 1) + 1;
        let fine_h = 2.0 / (fine_n - 1) as f64;
        let fine: Vec<f64> = (0..fine_n).map(|i| f(-1.0 + i as f64 * fine_h)).collect();
        let a = trapezoid_uniform(&coarse, h);
        let b = trapezoid_uniform(&fine, fine_h);
        assert!((a - b).abs() < 1e-13, "trapezoid not spectral: {a} vs {b}");
    }
}
