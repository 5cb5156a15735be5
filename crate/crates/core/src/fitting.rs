//! Parameter estimation by simulation: every candidate on a grid is grown at
//! the target's size a few times and scored by the mean L1 distance between
//! its degree distribution and the target's.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meanfield::in_degree_curve;
use crate::metrics::{l1_distance, DegreeDistribution};
use crate::models::{derive_seed, grow, ModelKind, ModelParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub grid_step: f64,
    pub realizations_per_point: usize,
    pub target: DegreeDistribution,
    pub n: usize,
    pub seed: u64,
}

impl FitConfig {
    /// Defaults: step 0.01, three realizations, `n` taken from the target.
    pub fn new(target: DegreeDistribution) -> Self {
        let n = target.n;
        Self { grid_step: 0.01, realizations_per_point: 3, target, n, seed: 0 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.grid_step > 0.0 && self.grid_step < 1.0) {
            return Err(Error::param("grid-step", format!("{} is outside (0, 1)", self.grid_step)));
        }
        if self.realizations_per_point == 0 {
            return Err(Error::param("realizations", "must be at least 1"));
        }
        if self.target.n == 0 {
            return Err(Error::EmptyDistribution);
        }
        Ok(())
    }

    /// `k * step` for every `k >= 1` with `k * step < 1`.
    fn open_unit_grid(&self) -> Vec<f64> {
        (1..).map(|k| grid_value(k, self.grid_step)).take_while(|&p| p < 1.0 - 1e-12).collect()
    }
}

/// `k * step` with the float noise trimmed, so 3 * 0.1 reads as 0.3.
fn grid_value(k: usize, step: f64) -> f64 {
    (k as f64 * step * 1e12).round() / 1e12
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub params: ModelParams,
    pub l1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: ModelParams,
    pub l1: f64,
    /// CPT entries carry an empty out-degree sequence; it is an input, not a
    /// fitted quantity.
    pub grid_trace: Vec<GridPoint>,
}

impl FitResult {
    /// `params,l1` rows with the free parameters flattened into columns.
    pub fn trace_csv(&self) -> String {
        let mut out = String::new();
        let header = match self.model.kind() {
            ModelKind::RefOrCite1 | ModelKind::Cp => "p",
            ModelKind::RefOrCite2 => "p1,p2",
            ModelKind::Cpt => "alpha,beta",
            ModelKind::ForestFire => "pa,b",
            ModelKind::Pa => "m",
        };
        out.push_str(header);
        out.push_str(",l1\n");
        for g in &self.grid_trace {
            let cols = match g.params {
                ModelParams::RefOrCite1 { p } | ModelParams::Cp { p } => format!("{p}"),
                ModelParams::RefOrCite2 { p1, p2 } => format!("{p1},{p2}"),
                ModelParams::Cpt { alpha, beta, .. } => format!("{alpha},{beta}"),
                ModelParams::ForestFire { p_a, b } => format!("{p_a},{b}"),
                ModelParams::Pa { m } => format!("{m}"),
            };
            out.push_str(&format!("{cols},{}\n", g.l1));
        }
        out
    }
}

fn mean_l1(config: &FitConfig, params: &ModelParams, grid_index: usize) -> Result<f64> {
    let mut total = 0.0;
    for r in 0..config.realizations_per_point {
        let seed = derive_seed(config.seed, &[grid_index as u64, r as u64]);
        let g = grow(params, config.n, seed)?;
        let sim = DegreeDistribution::of(&g, config.target.kind);
        total += l1_distance(&config.target, &sim)?;
    }
    Ok(total / config.realizations_per_point as f64)
}

/// Scores every candidate (in parallel) and returns the argmin. Candidates
/// must be listed in increasing parameter order; ties go to the earlier one.
fn grid_search(config: &FitConfig, candidates: Vec<ModelParams>) -> Result<FitResult> {
    config.validate()?;
    if candidates.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for c in &candidates {
        c.validate()?;
    }
    let scores: Vec<f64> = candidates
        .par_iter()
        .enumerate()
        .map(|(i, c)| mean_l1(config, c, i))
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s < scores[best] {
            best = i;
        }
    }
    let model = candidates[best].clone();
    let grid_trace = candidates
        .into_iter()
        .zip(&scores)
        .map(|(mut params, &l1)| {
            if let ModelParams::Cpt { ref mut out_degree_sequence, .. } = params {
                out_degree_sequence.clear();
            }
            GridPoint { params, l1 }
        })
        .collect();
    Ok(FitResult { model, l1: scores[best], grid_trace })
}

/// Grid search over the single probability of RefOrCite1 or CP.
pub fn fit_single_parameter(kind: ModelKind, config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    let make: fn(f64) -> ModelParams = match kind {
        ModelKind::RefOrCite1 => |p| ModelParams::RefOrCite1 { p },
        ModelKind::Cp => |p| ModelParams::Cp { p },
        other => return Err(Error::param("model", format!("{other:?} does not have a single free probability"))),
    };
    grid_search(config, config.open_unit_grid().into_iter().map(make).collect())
}

/// Finds `c = p1 + p2` whose predicted average in-degree at `t` nodes equals
/// `observed`, by bisection on the continuous in-degree curve.
///
/// The closed-form `c = 1` value `ln(t/2) - 1/2` is recognised and mapped back
/// to exactly 1.
pub fn solve_p_sum(observed: f64, t: f64) -> Result<f64> {
    const TOL: f64 = 1e-6;
    if !(observed > 0.0 && observed.is_finite()) {
        return Err(Error::param("avg-in-degree", format!("{observed} must be positive")));
    }
    if !(t > 2.0 && t.is_finite()) {
        return Err(Error::param("t", format!("{t} must exceed 2 for a unique solution")));
    }
    let at_one = (t / 2.0).ln() - 0.5;
    if (observed - at_one).abs() <= 1e-12 * at_one.abs().max(1.0) {
        return Ok(1.0);
    }
    let (lo_val, hi_val) = (in_degree_curve(t, 0.0), in_degree_curve(t, 2.0));
    if !(observed > lo_val && observed < hi_val) {
        return Err(Error::Unattainable { observed, lo: lo_val, hi: hi_val, t });
    }
    let (mut lo, mut hi) = (0.0_f64, 2.0_f64);
    while hi - lo > TOL {
        let mid = 0.5 * (lo + hi);
        if in_degree_curve(t, mid) < observed {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Grid search for RefOrCite2 along `p1 + p2 = c`, with `p1` on the grid
/// `k * step` inside `[max(0, c-1), min(c, 1)]`.
pub fn fit_reforcite2(config: &FitConfig, c: f64) -> Result<FitResult> {
    config.validate()?;
    if !(c > 0.0 && c < 2.0) {
        return Err(Error::param("p1+p2", format!("{c} is outside (0, 2)")));
    }
    let (lo, hi) = ((c - 1.0).max(0.0), c.min(1.0));
    let eps = 1e-9;
    let k0 = ((lo - eps) / config.grid_step).ceil().max(0.0) as usize;
    let candidates: Vec<ModelParams> = (k0..)
        .map(|k| grid_value(k, config.grid_step))
        .take_while(|&p1| p1 <= hi + eps)
        .map(|p1| {
            let p1 = p1.clamp(lo, hi);
            ModelParams::RefOrCite2 { p1, p2: (c - p1).clamp(0.0, 1.0) }
        })
        .collect();
    grid_search(config, candidates)
}

fn sorted(grid: &[f64]) -> Vec<f64> {
    let mut v = grid.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Two-dimensional grid search over `(alpha, beta)`.
pub fn fit_cpt(config: &FitConfig, alpha_grid: &[f64], beta_grid: &[f64], out_degree_sequence: &[u32]) -> Result<FitResult> {
    config.validate()?;
    if out_degree_sequence.len() < config.n {
        return Err(Error::param(
            "out_degree_sequence",
            format!("has {} entries but {} nodes are simulated", out_degree_sequence.len(), config.n),
        ));
    }
    let betas = sorted(beta_grid);
    let candidates = sorted(alpha_grid)
        .into_iter()
        .flat_map(|alpha| {
            betas.iter().map(move |&beta| ModelParams::Cpt {
                alpha,
                beta,
                out_degree_sequence: out_degree_sequence.to_vec(),
            })
        })
        .collect();
    grid_search(config, candidates)
}

/// Two-dimensional grid search over Forest Fire's `(p_a, b)`.
pub fn fit_forest_fire(config: &FitConfig, pa_grid: &[f64], b_grid: &[f64]) -> Result<FitResult> {
    config.validate()?;
    let bs = sorted(b_grid);
    let candidates = sorted(pa_grid)
        .into_iter()
        .flat_map(|p_a| bs.iter().map(move |&b| ModelParams::ForestFire { p_a, b }))
        .collect();
    grid_search(config, candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meanfield::avg_in_degree_for_sum;
    use crate::metrics::{in_degree_distribution, DegreeKind};
    use crate::models::{grow_cpt, grow_forest_fire, grow_reforcite1};

    fn config(target: &crate::graph::EvolvingDigraph, step: f64, reps: usize) -> FitConfig {
        FitConfig { grid_step: step, realizations_per_point: reps, ..FitConfig::new(in_degree_distribution(target)) }
    }

    fn p_of(m: &ModelParams) -> f64 {
        match *m {
            ModelParams::RefOrCite1 { p } | ModelParams::Cp { p } => p,
            _ => panic!("not single-parameter"),
        }
    }

    #[test]
    fn open_grid() {
        let c = FitConfig { grid_step: 0.25, ..FitConfig::new(DegreeDistribution::from_degrees(DegreeKind::In, [0])) };
        assert_eq!(c.open_unit_grid(), vec![0.25, 0.5, 0.75]);
        let c = FitConfig { grid_step: 0.05, ..c };
        assert_eq!(c.open_unit_grid().len(), 19);
    }

    #[test]
    fn recovers_reforcite1() {
        let target = grow_reforcite1(5000, 0.4, 99).unwrap();
        let fit = fit_single_parameter(ModelKind::RefOrCite1, &config(&target, 0.1, 2)).unwrap();
        assert!((p_of(&fit.model) - 0.4).abs() < 0.15, "{:?}", fit.model);
        let min = fit.grid_trace.iter().map(|g| g.l1).fold(f64::INFINITY, f64::min);
        assert_eq!(fit.l1, min);
        assert_eq!(fit.grid_trace.len(), 9);
    }

    #[test]
    fn fit_is_deterministic() {
        let target = grow_reforcite1(2000, 0.3, 5).unwrap();
        let c = config(&target, 0.2, 2);
        assert_eq!(fit_single_parameter(ModelKind::Cp, &c).unwrap(), fit_single_parameter(ModelKind::Cp, &c).unwrap());
    }

    #[test]
    fn refinement_does_not_hurt() {
        let target = grow_reforcite1(4000, 0.45, 8).unwrap();
        let coarse = fit_single_parameter(ModelKind::RefOrCite1, &config(&target, 0.1, 2)).unwrap();
        let fine = fit_single_parameter(ModelKind::RefOrCite1, &config(&target, 0.05, 2)).unwrap();
        assert!(fine.l1 <= coarse.l1 + 0.03, "fine {} coarse {}", fine.l1, coarse.l1);
    }

    #[test]
    fn rejects_bad_config() {
        let target = grow_reforcite1(100, 0.3, 1).unwrap();
        for step in [0.0, 1.0, -0.1] {
            assert!(fit_single_parameter(ModelKind::RefOrCite1, &config(&target, step, 1)).is_err());
        }
        assert!(fit_single_parameter(ModelKind::RefOrCite1, &config(&target, 0.1, 0)).is_err());
        assert!(fit_single_parameter(ModelKind::Pa, &config(&target, 0.1, 1)).is_err());
        assert!(fit_reforcite2(&config(&target, 0.1, 1), 2.0).is_err());
        assert!(matches!(fit_forest_fire(&config(&target, 0.1, 1), &[], &[1.0]), Err(Error::EmptyGrid)));
    }

    #[test]
    fn solve_branch_value() {
        let t: f64 = 1e4;
        assert_eq!(solve_p_sum((t / 2.0).ln() - 0.5, t).unwrap(), 1.0);
    }

    #[test]
    fn solve_fixed_point() {
        let c = solve_p_sum(5.0, 1e12).unwrap();
        assert!((c - 0.8).abs() < 5e-3, "{c}");
    }

    #[test]
    fn solve_round_trip() {
        for t in [10.0, 1e3, 1e5, 2.5e7] {
            for k in 1..40 {
                let c = k as f64 * 0.05;
                let v = avg_in_degree_for_sum(t, c).unwrap();
                let back = solve_p_sum(v, t).unwrap();
                assert!((back - c).abs() < 1e-5, "t {t} c {c} back {back}");
            }
        }
    }

    #[test]
    fn solve_rejects_out_of_range() {
        assert!(matches!(solve_p_sum(0.1, 1e4), Err(Error::Unattainable { .. })));
        assert!(matches!(solve_p_sum(1e9, 1e4), Err(Error::Unattainable { .. })));
        assert!(solve_p_sum(-1.0, 1e4).is_err());
        assert!(solve_p_sum(3.0, 2.0).is_err());
    }

    #[test]
    fn reforcite2_line() {
        let target = crate::models::grow_reforcite2(3000, 0.6, 0.4, 17).unwrap();
        let fit = fit_reforcite2(&config(&target, 0.1, 2), 1.0).unwrap();
        assert_eq!(fit.grid_trace.len(), 11);
        for g in &fit.grid_trace {
            let ModelParams::RefOrCite2 { p1, p2 } = g.params else { panic!() };
            assert!((p1 + p2 - 1.0).abs() < 1e-9);
        }
        let fit = fit_reforcite2(&config(&target, 0.1, 1), 1.5).unwrap();
        let ModelParams::RefOrCite2 { p1, .. } = fit.grid_trace[0].params else { panic!() };
        assert!((p1 - 0.5).abs() < 1e-9);
        assert_eq!(fit.grid_trace.len(), 6);
    }

    #[test]
    fn one_point_grids() {
        let seq: Vec<u32> = (0..800).map(|i| 1 + i % 4).collect();
        let target = grow_cpt(800, -1.0, 0.99, &seq, 3).unwrap();
        let c = config(&target, 0.1, 1);
        let fit = fit_cpt(&c, &[-1.0], &[0.99], &seq).unwrap();
        assert!(matches!(fit.model, ModelParams::Cpt { alpha, beta, .. } if alpha == -1.0 && beta == 0.99));
        assert!(matches!(&fit.grid_trace[0].params, ModelParams::Cpt { out_degree_sequence, .. } if out_degree_sequence.is_empty()));
        assert!(fit_cpt(&c, &[-1.0], &[0.99], &seq[..10]).is_err());

        let fit = fit_forest_fire(&c, &[0.001], &[1.0]).unwrap();
        assert_eq!(fit.model, ModelParams::ForestFire { p_a: 0.001, b: 1.0 });
    }

    #[test]
    fn cpt_alpha_recovered() {
        let seq: Vec<u32> = (0..3000).map(|i| 2 + (i % 5) as u32).collect();
        let target = grow_cpt(3000, -1.0, 0.9, &seq, 11).unwrap();
        let fit = fit_cpt(&config(&target, 0.1, 2), &[-2.0, -1.0, 0.0, 1.0], &[0.9], &seq).unwrap();
        let ModelParams::Cpt { alpha, .. } = fit.model else { panic!() };
        assert!((alpha + 1.0).abs() <= 1.0, "{alpha}");
    }

    #[test]
    fn forest_fire_self_consistency() {
        let target = grow_forest_fire(3000, 0.3, 1.0, 2).unwrap();
        let fit = fit_forest_fire(&config(&target, 0.1, 2), &[0.1, 0.3, 0.5], &[1.0]).unwrap();
        assert_eq!(fit.model, ModelParams::ForestFire { p_a: 0.3, b: 1.0 });
    }

    #[test]
    fn trace_csv_layout() {
        let target = grow_reforcite1(300, 0.3, 1).unwrap();
        let fit = fit_single_parameter(ModelKind::Cp, &config(&target, 0.5, 1)).unwrap();
        assert_eq!(fit.trace_csv().lines().next(), Some("p,l1"));
        assert_eq!(fit.trace_csv().lines().count(), 2);
    }
}
