//! Pearson chi-square goodness of fit against the uniform distribution.

use crate::num::Float;

/// Standard normal 0.999 quantile.
pub const Z_999: f64 = 3.090_232_306_167_813;

/// Wilson–Hilferty approximation of the chi-square quantile with `dof`
/// degrees of freedom at standard-normal quantile `z`.
pub fn wilson_hilferty<F: Float>(dof: u64, z: F) -> F {
    let k = F::from_u64(dof);
    let c = F::from_u64(2) / (F::from_u64(9) * k);
    k * (F::one() - c + z * c.sqrt()).powi(3)
}

/// 0.999 quantile of chi-square with `dof` degrees of freedom.
pub fn chi_square_999<F: Float>(dof: u64) -> F {
    wilson_hilferty(dof, F::from_f64(Z_999))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareReport<F> {
    pub categories: u64,
    pub draws: u64,
    pub statistic: F,
    pub dof: u64,
    pub threshold: F,
    pub pass: bool,
}

impl<F: Float> ChiSquareReport<F> {
    /// Tests observed `counts` (one per category) against equal expectation.
    pub fn uniform(counts: &[u64]) -> Self {
        let categories = counts.len() as u64;
        assert!(categories >= 2, "chi-square needs at least two categories");
        let draws: u64 = counts.iter().sum();
        let expected = F::from_u64(draws) / F::from_u64(categories);
        let statistic = counts
            .iter()
            .map(|&c| {
                let d = F::from_u64(c) - expected;
                d * d / expected
            })
            .fold(F::zero(), |a, b| a + b);
        let dof = categories - 1;
        let threshold = chi_square_999(dof);
        ChiSquareReport { categories, draws, statistic, dof, threshold, pass: statistic <= threshold }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_hilferty_close_to_tables() {
        // Reference 0.999 quantiles from standard tables.
        for (dof, table) in [(1u64, 10.828), (2, 13.816), (5, 20.515), (10, 29.588), (100, 149.449)] {
            let wh: f64 = chi_square_999(dof);
            assert!((wh - table).abs() / table < 0.04, "dof {dof}: {wh} vs {table}");
        }
        let wh: f64 = chi_square_999(135);
        assert!((wh - 191.6).abs() < 1.0, "{wh}");
    }

    #[test]
    fn perfect_counts_pass() {
        let r = ChiSquareReport::<f64>::uniform(&[100, 100, 100]);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.dof, 2);
        assert!(r.pass);
    }

    #[test]
    fn degenerate_counts_fail() {
        let mut counts = vec![0; 136];
        counts[7] = 13600;
        let r = ChiSquareReport::<f64>::uniform(&counts);
        assert!((r.statistic - 13600.0 * 135.0).abs() < 1e-6);
        assert!(!r.pass);
    }

    #[test]
    fn single_precision() {
        let r = ChiSquareReport::<f32>::uniform(&[48, 52]);
        assert!((r.statistic - 0.16).abs() < 1e-5);
        assert!(r.pass);
    }
}
