use serde::{Deserialize, Serialize};

use super::{
    count_triangles, default_o_grid, in_degree_distribution, l1_distance, network_h_index, obsolescence_curve,
    snapshot_diameters, DegreeDistribution, DegreeKind, DiameterOptions, ObsolescenceCurve,
};
use crate::error::Result;
use crate::graph::EvolvingDigraph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub diameter: DiameterOptions,
    pub o_grid: Vec<f64>,
    pub obsolescence_kind: DegreeKind,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { diameter: DiameterOptions::default(), o_grid: default_o_grid(100), obsolescence_kind: DegreeKind::In }
    }
}

/// Every statistic the comparison needs, measured on one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub n: usize,
    pub m: usize,
    pub avg_in_degree: f64,
    pub in_degree: DegreeDistribution,
    pub triangles: u64,
    pub snapshot_diameters: Vec<(usize, usize)>,
    pub avg_diameter: f64,
    pub h_index: usize,
    pub obsolescence: Option<ObsolescenceCurve>,
}

pub fn summarize(graph: &EvolvingDigraph, opts: &EvalOptions) -> Result<NetworkSummary> {
    let snaps = snapshot_diameters(graph, &opts.diameter)?;
    let avg_diameter = snaps.iter().map(|&(_, d)| d as f64).sum::<f64>() / snaps.len() as f64;
    let obsolescence = if graph.edge_count() > 0 {
        Some(obsolescence_curve(graph, &opts.o_grid, opts.obsolescence_kind)?)
    } else {
        None
    };
    Ok(NetworkSummary {
        n: graph.n(),
        m: graph.edge_count(),
        avg_in_degree: graph.edge_count() as f64 / graph.n() as f64,
        in_degree: in_degree_distribution(graph),
        triangles: count_triangles(graph),
        snapshot_diameters: snaps,
        avg_diameter,
        h_index: network_h_index(graph),
        obsolescence,
    })
}

/// Simulated-versus-observed comparison. Ratios are simulated / observed and
/// absent when the observed value is zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub l1_error: f64,
    pub triangles: u64,
    pub triangle_ratio: Option<f64>,
    pub avg_diameter: f64,
    pub diameter_ratio: Option<f64>,
    pub h_index: usize,
    pub h_index_ratio: Option<f64>,
    pub obsolescence: Option<ObsolescenceCurve>,
}

fn ratio(simulated: f64, observed: f64) -> Option<f64> {
    (observed != 0.0).then(|| simulated / observed)
}

pub fn compare(observed: &NetworkSummary, simulated: &NetworkSummary) -> Result<EvaluationReport> {
    Ok(EvaluationReport {
        l1_error: l1_distance(&observed.in_degree, &simulated.in_degree)?,
        triangles: simulated.triangles,
        triangle_ratio: ratio(simulated.triangles as f64, observed.triangles as f64),
        avg_diameter: simulated.avg_diameter,
        diameter_ratio: ratio(simulated.avg_diameter, observed.avg_diameter),
        h_index: simulated.h_index,
        h_index_ratio: ratio(simulated.h_index as f64, observed.h_index as f64),
        obsolescence: simulated.obsolescence.clone(),
    })
}

/// Mean and sample standard deviation.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioStats {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

impl RatioStats {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let std = if v.len() > 1 { (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
        Some(Self { mean, std, count: v.len() })
    }
}
