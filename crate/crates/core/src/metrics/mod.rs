//! Measurements on completed graphs.

mod degree;
mod diameter;
mod obsolescence;
mod report;
mod triangles;

pub use degree::{in_degree_distribution, l1_distance, DegreeDistribution, DegreeKind};
pub use diameter::{
    avg_diameter, estimate_snapshot_diameter, exact_snapshot_diameter, snapshot_diameters, DiameterOptions,
};
pub use obsolescence::{default_o_grid, obsolescence_curve, ObsolescenceCurve};
pub use report::{compare, summarize, EvalOptions, EvaluationReport, NetworkSummary, RatioStats};
pub use triangles::count_triangles;

use crate::graph::EvolvingDigraph;

/// Largest `h` such that at least `h` of the values are `>= h`.
pub fn h_index(values: &[usize]) -> usize {
    let n = values.len();
    let mut bucket = vec![0usize; n + 1];
    for &v in values {
        bucket[v.min(n)] += 1;
    }
    let mut at_least = 0;
    for h in (0..=n).rev() {
        at_least += bucket[h];
        if at_least >= h {
            return h;
        }
    }
    0
}

/// h-index of the network's in-degrees.
pub fn network_h_index(graph: &EvolvingDigraph) -> usize {
    h_index(&graph.in_degrees())
}

/// Empirical `Pr(V >= x)` for sorted `values`.
pub fn empirical_ccdf(sorted: &[f64], x: f64) -> f64 {
    let below = sorted.partition_point(|&v| v < x);
    (sorted.len() - below) as f64 / sorted.len() as f64
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// usable points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if logs.len() < 2 {
        return None;
    }
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// Slope of the empirical CCDF on log-log axes, sampled at `points`
/// log-spaced abscissae in `[lo, hi]`. Points where the CCDF is zero are
/// skipped.
pub fn ccdf_loglog_slope(values: &[f64], lo: f64, hi: f64, points: usize) -> Option<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let samples: Vec<(f64, f64)> = (0..points)
        .map(|i| {
            let x = (llo + (lhi - llo) * i as f64 / (points - 1).max(1) as f64).exp();
            (x, empirical_ccdf(&sorted, x))
        })
        .collect();
    loglog_slope(&samples)
}
