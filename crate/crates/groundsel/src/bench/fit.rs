//! Log-log scaling fits and deviation statistics for experiment reports.

use serde::Serialize;

use crate::greedy::SelectionTrace;

use super::BenchError;

/// Result of an ordinary-least-squares fit of `y = a * x^d` on
/// `(ln x, ln y)`.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingFit {
    /// Coefficient `a` (from the intercept).
    pub coefficient: f64,
    /// Exponent `d` (the slope).
    pub exponent: f64,
    pub r_squared: f64,
    pub exponent_stderr: f64,
    /// 95% confidence interval on the exponent (two-sided t interval).
    pub exponent_ci95: (f64, f64),
    pub points: usize,
}

impl ScalingFit {
    /// Predicted `y` at `x` from the fitted power law.
    pub fn predict(&self, x: f64) -> f64 {
        self.coefficient * x.powf(self.exponent)
    }
}

/// Two-sided 97.5% Student-t quantiles for 1..=30 degrees of freedom;
/// the normal quantile beyond.
const T_975: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160,
    2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056,
    2.052, 2.048, 2.045, 2.042,
];

fn t_quantile_975(df: usize) -> f64 {
    if df == 0 {
        f64::INFINITY
    } else if df <= 30 {
        T_975[df - 1]
    } else {
        1.96
    }
}

/// Fits `y = a * x^d` by least squares on the log-log points.
///
/// Requires at least three strictly positive points. A constant `y` fits
/// with `d = 0`; an exact power law recovers its exponent to machine
/// precision.
pub fn fit_scaling_exponent(points: &[(f64, f64)]) -> Result<ScalingFit, BenchError> {
    if points.len() < 3 {
        return Err(BenchError::NotEnoughPoints { got: points.len() });
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(BenchError::NonPositivePoint);
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(BenchError::DegenerateFit);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;

    let ss_res: f64 = logs
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let ss_tot: f64 = logs.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let r_squared = if ss_tot < 1e-30 {
        if ss_res < 1e-30 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };

    let df = points.len() - 2;
    let stderr = if df > 0 {
        (ss_res / df as f64 / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    let half_width = t_quantile_975(df) * stderr;
    Ok(ScalingFit {
        coefficient: intercept.exp(),
        exponent: slope,
        r_squared,
        exponent_stderr: stderr,
        exponent_ci95: (slope - half_width, slope + half_width),
        points: points.len(),
    })
}

/// Summary of percentage objective deviations at one iteration.
#[derive(Debug, Clone, Serialize)]
pub struct DeviationSummary {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub p50: f64,
    pub p90: f64,
    pub p95: f64,
}

/// Percentage deviation of each candidate's objective from the baseline's
/// at iteration `at_k`: `100 * (candidate - baseline) / baseline`.
///
/// Baseline and candidates must describe the same instance and have run at
/// least `at_k` iterations.
pub fn deviation_stats(
    baseline: &SelectionTrace,
    candidates: &[SelectionTrace],
    at_k: usize,
) -> Result<DeviationSummary, BenchError> {
    let base = baseline
        .objective_at(at_k)
        .ok_or(BenchError::IterationOutOfRange {
            at_k,
            k: baseline.records.len(),
        })?;
    let mut deviations = Vec::with_capacity(candidates.len());
    for c in candidates {
        if c.instance != baseline.instance {
            return Err(BenchError::MismatchedInstances {
                baseline: baseline.instance.clone(),
                candidate: c.instance.clone(),
            });
        }
        let value = c
            .objective_at(at_k)
            .ok_or(BenchError::IterationOutOfRange {
                at_k,
                k: c.records.len(),
            })?;
        deviations.push(100.0 * (value - base) / base);
    }
    summarize(&deviations)
}

/// Summary of an arbitrary sample of percentage deviations.
pub fn summarize(values: &[f64]) -> Result<DeviationSummary, BenchError> {
    if values.is_empty() {
        return Err(BenchError::EmptySample);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let count = sorted.len();
    let quantile = |p: f64| -> f64 {
        // Nearest-rank.
        let rank = (p * count as f64).ceil() as usize;
        sorted[rank.clamp(1, count) - 1]
    };
    Ok(DeviationSummary {
        count,
        mean: sorted.iter().sum::<f64>() / count as f64,
        min: sorted[0],
        max: sorted[count - 1],
        p50: quantile(0.50),
        p90: quantile(0.90),
        p95: quantile(0.95),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::erdos_renyi;
    use crate::greedy::ordinary_greedy;
    use crate::oracle::OracleKind;

    #[test]
    fn exact_power_law_recovered() {
        let points: Vec<(f64, f64)> = [100.0, 200.0, 400.0]
            .iter()
            .map(|&n: &f64| (n, 2.0 * n.powi(3)))
            .collect();
        let fit = fit_scaling_exponent(&points).unwrap();
        assert!((fit.exponent - 3.0).abs() < 1e-9);
        assert!((fit.coefficient - 2.0).abs() < 1e-6);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_y_fits_zero_exponent() {
        let points = vec![(10.0, 5.0), (20.0, 5.0), (40.0, 5.0), (80.0, 5.0)];
        let fit = fit_scaling_exponent(&points).unwrap();
        assert!(fit.exponent.abs() < 1e-12);
        assert!((fit.coefficient - 5.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn six_decimal_recovery_with_ci() {
        let points: Vec<(f64, f64)> = [100.0, 200.0, 400.0, 800.0]
            .iter()
            .map(|&n: &f64| (n, 0.37 * n.powf(1.85)))
            .collect();
        let fit = fit_scaling_exponent(&points).unwrap();
        assert!((fit.exponent - 1.85).abs() < 1e-6);
        assert!(fit.exponent_ci95.0 <= 1.85 && 1.85 <= fit.exponent_ci95.1);
    }

    #[test]
    fn fit_input_validation() {
        assert!(matches!(
            fit_scaling_exponent(&[(1.0, 1.0), (2.0, 2.0)]),
            Err(BenchError::NotEnoughPoints { got: 2 })
        ));
        assert!(matches!(
            fit_scaling_exponent(&[(1.0, 1.0), (2.0, 0.0), (3.0, 2.0)]),
            Err(BenchError::NonPositivePoint)
        ));
    }

    #[test]
    fn deviation_identical_traces_zero() {
        let g = erdos_renyi(20, 0.3, 1).unwrap();
        let base = ordinary_greedy(&g, 3, OracleKind::Accelerated).unwrap();
        let summary = deviation_stats(&base, &[base.clone(), base.clone()], 3).unwrap();
        assert_eq!(summary.count, 2);
        assert_eq!(summary.mean, 0.0);
        assert_eq!(summary.max, 0.0);
    }

    #[test]
    fn deviation_simple_arithmetic() {
        let g = erdos_renyi(20, 0.3, 1).unwrap();
        let base = ordinary_greedy(&g, 3, OracleKind::Accelerated).unwrap();
        let mut candidate = base.clone();
        let last = candidate.records.last_mut().unwrap();
        last.objective *= 1.01;
        let summary = deviation_stats(&base, &[candidate], 3).unwrap();
        assert!((summary.mean - 1.0).abs() < 1e-9);
        assert!((summary.max - 1.0).abs() < 1e-9);
    }

    #[test]
    fn deviation_rejects_mismatched_instances() {
        let g1 = erdos_renyi(20, 0.3, 1).unwrap();
        let g2 = erdos_renyi(22, 0.3, 1).unwrap();
        let a = ordinary_greedy(&g1, 3, OracleKind::Accelerated).unwrap();
        let b = ordinary_greedy(&g2, 3, OracleKind::Accelerated).unwrap();
        assert!(matches!(
            deviation_stats(&a, &[b], 3),
            Err(BenchError::MismatchedInstances { .. })
        ));
    }

    #[test]
    fn percentiles_nearest_rank() {
        let values: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        let s = summarize(&values).unwrap();
        assert_eq!(s.p50, 50.0);
        assert_eq!(s.p90, 90.0);
        assert_eq!(s.p95, 95.0);
        assert_eq!(s.min, 1.0);
        assert_eq!(s.max, 100.0);
    }
}
