/// CDF of the logistic law with location 0 and scale `s`.
pub fn logistic_cdf(x: f64, s: f64) -> f64 {
    1.0 / (1.0 + (-x / s).exp())
}

/// Kolmogorov–Smirnov distance `sup |F_N − F|` between the empirical CDF of
/// `values` and `cdf`. Sorts `values` in place.
pub fn ks_distance(values: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < values.len() {
        // Step over ties so the jump is taken once.
        let mut j = i;
        while j + 1 < values.len() && values[j + 1] == values[i] {
            j += 1;
        }
        let f = cdf(values[i]);
        d = d
            .max((f - i as f64 / n).abs())
            .max(((j + 1) as f64 / n - f).abs());
        i = j + 1;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_is_close() {
        let mut v: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d = ks_distance(&mut v, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.0005).abs() < 1e-12);
    }

    #[test]
    fn point_mass_against_continuous() {
        let mut v = vec![0.0; 10];
        let d = ks_distance(&mut v, |x| logistic_cdf(x, 1.0));
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn logistic_symmetry() {
        for x in [0.1, 0.7, 2.5] {
            assert!((logistic_cdf(x, 0.4) + logistic_cdf(-x, 0.4) - 1.0).abs() < 1e-15);
        }
    }
}
