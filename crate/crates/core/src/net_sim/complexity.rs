//! Work measurements and the linear-scaling fit.

use super::node::OpCounters;
use super::ScenarioError;

/// Totals for one run. Per-node counters always sum to the totals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityReport {
    pub n_nodes: u32,
    pub tx_submitted: u64,
    pub tx_committed: u64,
    /// Σ A_k: transactions processed across nodes.
    pub total_processed: u64,
    /// Σ S_k: signatures produced.
    pub total_signed: u64,
    /// Σ V_k: verifications performed.
    pub total_verified: u64,
    pub per_node: Vec<OpCounters>,
    pub divergence_events: u64,
    pub wall_ms: u64,
}

impl ComplexityReport {
    /// Counted work: processing plus signing plus verification.
    pub fn total_work(&self) -> u64 {
        self.total_processed + self.total_signed + self.total_verified
    }

    /// CSV with the header `tx_count,A_k,S_k,V_k,wall_ms` and one row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tx_count,A_k,S_k,V_k,wall_ms\n");
        out.push_str(&self.csv_row());
        out
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}\n",
            self.tx_submitted,
            self.total_processed,
            self.total_signed,
            self.total_verified,
            self.wall_ms
        )
    }
}

/// Least-squares fit of work against transaction count.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FitSummary {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fit `(tx_count, work)` points. Needs at least three; exactly collinear
/// integer points short-circuit to an exact fit with `r_squared = 1.0`.
pub fn measure_complexity(points: &[(u64, u64)]) -> Result<FitSummary, ScenarioError> {
    if points.len() < 3 {
        return Err(ScenarioError::InsufficientData { have: points.len() });
    }
    let (x0, y0) = (points[0].0 as i128, points[0].1 as i128);
    let (x1, y1) = (points[1].0 as i128, points[1].1 as i128);
    let exact = x1 != x0
        && points.iter().all(|&(x, y)| {
            (y as i128 - y0) * (x1 - x0) == (y1 - y0) * (x as i128 - x0)
        });
    if exact {
        let slope = (y1 - y0) as f64 / (x1 - x0) as f64;
        let intercept = y0 as f64 - slope * x0 as f64;
        return Ok(FitSummary { slope, intercept, r_squared: 1.0 });
    }

    let n = points.len() as f64;
    let sum_x: f64 = points.iter().map(|p| p.0 as f64).sum();
    let sum_y: f64 = points.iter().map(|p| p.1 as f64).sum();
    let mean_x = sum_x / n;
    let mean_y = sum_y / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in points {
        let dx = x as f64 - mean_x;
        let dy = y as f64 - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(ScenarioError::Config(
            "complexity fit needs at least two distinct transaction counts".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(FitSummary { slope, intercept, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_integer_lines_fit_perfectly() {
        let points = [(100u64, 1100u64), (200, 2200), (400, 4400)];
        let fit = measure_complexity(&points).unwrap();
        assert_eq!(fit.r_squared, 1.0);
        assert_eq!(fit.slope, 11.0);
        assert_eq!(fit.intercept, 0.0);
    }

    #[test]
    fn nonzero_intercept_is_detected_exactly() {
        let points = [(10u64, 35u64), (20, 65), (30, 95)];
        let fit = measure_complexity(&points).unwrap();
        assert_eq!(fit.r_squared, 1.0);
        assert_eq!(fit.slope, 3.0);
        assert_eq!(fit.intercept, 5.0);
    }

    #[test]
    fn noisy_points_fall_below_perfect_fit() {
        let points = [(10u64, 100u64), (20, 210), (30, 280), (40, 410)];
        let fit = measure_complexity(&points).unwrap();
        assert!(fit.r_squared < 1.0);
        assert!(fit.r_squared > 0.95);
        assert!(fit.slope > 9.0 && fit.slope < 11.0);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let err = measure_complexity(&[(1, 1), (2, 2)]).unwrap_err();
        assert!(matches!(err, ScenarioError::InsufficientData { have: 2 }));
    }

    #[test]
    fn vertical_data_is_rejected() {
        let err = measure_complexity(&[(5, 1), (5, 2), (5, 3)]).unwrap_err();
        assert!(matches!(err, ScenarioError::Config(_)));
    }

    #[test]
    fn report_csv_shape() {
        let report = ComplexityReport {
            n_nodes: 3,
            tx_submitted: 50,
            tx_committed: 50,
            total_processed: 150,
            total_signed: 50,
            total_verified: 150,
            per_node: vec![OpCounters::default(); 3],
            divergence_events: 0,
            wall_ms: 12,
        };
        let csv = report.to_csv();
        assert!(csv.starts_with("tx_count,A_k,S_k,V_k,wall_ms\n"));
        assert!(csv.contains("50,150,50,150,12"));
        assert_eq!(report.total_work(), 350);
    }
}
