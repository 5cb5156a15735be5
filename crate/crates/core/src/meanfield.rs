//! Closed-form mean-field predictions for the neighbour-copying models.
//!
//! These are large-`t` approximations; they serve as reference curves for
//! simulations and as the inverse map used to pick `p1 + p2` when fitting.
//!
//! The special-case branches at `p = 1/2` (average degree) and
//! `p1 + p2 = 1` (average in-degree) use the standard closed forms. They sit exactly
//! one unit below the limit of the general branch, so the curves jump there;
//! [`in_degree_curve`] gives the continuous version used for root finding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EvolvingDigraph;
use crate::models::{ModelKind, ModelParams};

/// Half-width of the band around a phase boundary treated as the boundary.
pub const PHASE_EPS: f64 = 1e-9;

fn check_t(t: f64, min: f64) -> Result<()> {
    if !(t >= min && t.is_finite()) {
        return Err(Error::param("t", format!("{t} must be a finite value >= {min}")));
    }
    Ok(())
}

fn check_unit(name: &'static str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(name, format!("{p} is not in [0, 1]")));
    }
    Ok(())
}

fn check_positive_unit(name: &'static str, p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param(name, format!("{p} is not in (0, 1]")));
    }
    Ok(())
}

/// `(x^e - 1) / e`, accurate as `e -> 0`.
fn pow_minus_one_over(log_x: f64, e: f64) -> f64 {
    if e == 0.0 {
        log_x
    } else {
        (e * log_x).exp_m1() / e
    }
}

/// `Pr(X > x) = x^(-1/p)` for the rescaled degree `X`.
pub fn ccdf_rescaled(x: f64, p: f64) -> Result<f64> {
    check_positive_unit("p", p)?;
    if !(x >= 1.0) {
        return Err(Error::param("x", format!("{x} is below 1")));
    }
    Ok(x.powf(-1.0 / p))
}

/// Expected average total degree after `t` arrivals.
///
/// `(2/(2p-1)) (t/2)^(2p-1) - 2/(2p-1)` away from `p = 1/2`,
/// `2 ln(t/2) - 1` at `p = 1/2`. For `p < 1/2` this tends to `2/(1-2p)`.
pub fn avg_degree(t: f64, p: f64) -> Result<f64> {
    check_t(t, 2.0)?;
    check_unit("p", p)?;
    let e = 2.0 * p - 1.0;
    let log_x = (t / 2.0).ln();
    if e.abs() < PHASE_EPS {
        return Ok(2.0 * log_x - 1.0);
    }
    Ok(2.0 * pow_minus_one_over(log_x, e))
}

/// Expected average in-degree of RefOrCite2 after `t` arrivals.
pub fn avg_in_degree(t: f64, p1: f64, p2: f64) -> Result<f64> {
    check_unit("p1", p1)?;
    check_unit("p2", p2)?;
    avg_in_degree_for_sum(t, p1 + p2)
}

/// [`avg_in_degree`] as a function of `c = p1 + p2`:
/// `ln(t/2) - 1/2` at `c = 1`, otherwise
/// `(1/(c-1) + 1/2) (t/2)^(c-1) - 1/(c-1)`.
pub fn avg_in_degree_for_sum(t: f64, c: f64) -> Result<f64> {
    check_t(t, 2.0)?;
    if !(0.0..=2.0).contains(&c) {
        return Err(Error::param("p1+p2", format!("{c} is not in [0, 2]")));
    }
    let e = c - 1.0;
    let log_x = (t / 2.0).ln();
    if e.abs() < PHASE_EPS {
        return Ok(log_x - 0.5);
    }
    Ok(pow_minus_one_over(log_x, e) + 0.5 * (e * log_x).exp())
}

/// Continuous extension of [`avg_in_degree_for_sum`] through `c = 1`
/// (value `ln(t/2) + 1/2` there). Strictly increasing in `c` for `t > 2`.
pub fn in_degree_curve(t: f64, c: f64) -> f64 {
    let e = c - 1.0;
    let log_x = (t / 2.0).ln();
    pow_minus_one_over(log_x, e) + 0.5 * (e * log_x).exp()
}

/// Large-`t` expected triangle count of RefOrCite1.
pub fn triangle_count(t: f64, p: f64) -> Result<f64> {
    check_t(t, 4.0)?;
    check_unit("p", p)?;
    if p == 0.0 {
        return Ok(0.0);
    }
    let e = 2.0 * p - 1.0;
    if e.abs() < PHASE_EPS {
        Ok(2.0 * p * t * t.ln())
    } else if e > 0.0 {
        Ok(4.0 * p / e * (t / 2.0).powf(2.0 * p))
    } else {
        Ok(2.0 * p / (-e) * t)
    }
}

/// `Pr(k_i > k)` for a node born with degree `k0`, normalised to 1 at `k = k0`.
pub fn degree_ccdf(k: f64, k0: f64, p: f64) -> Result<f64> {
    check_positive_unit("p", p)?;
    if !(k0 >= 0.0 && k >= k0) {
        return Err(Error::param("k", format!("need k >= k0 >= 0, got k = {k}, k0 = {k0}")));
    }
    let inv = 1.0 / p;
    Ok(((k + inv) / (k0 + inv)).powf(-inv).clamp(0.0, 1.0))
}

/// RefOrCite2 counterpart of [`degree_ccdf`] with the node constant
/// `F = 1 + (p1 - p2) k_out`; the tail exponent is `1/p2`.
pub fn degree_ccdf_split(k: f64, k_out: f64, p1: f64, p2: f64) -> Result<f64> {
    check_unit("p1", p1)?;
    check_positive_unit("p2", p2)?;
    if !(k_out >= 0.0 && k >= k_out) {
        return Err(Error::param("k", format!("need k >= k_out >= 0, got k = {k}, k_out = {k_out}")));
    }
    let shift = (1.0 + (p1 - p2) * k_out) / p2;
    let base = (k + shift) / (k_out + shift);
    if !(base > 0.0) {
        return Err(Error::param("p1", "node constant makes the distribution undefined"));
    }
    Ok(base.powf(-1.0 / p2).clamp(0.0, 1.0))
}

/// Per-node `X_i = (k_i + 1/p) / (k_i^0 + 1/p)` using final total degree and
/// birth out-degree.
pub fn rescale_degrees(graph: &EvolvingDigraph, p: f64) -> Result<Vec<f64>> {
    check_positive_unit("p", p)?;
    let inv = 1.0 / p;
    Ok(graph
        .nodes()
        .map(|u| {
            let k0 = graph.birth_out_degree(u) as f64;
            let k = k0 + graph.in_degree(u) as f64;
            (k + inv) / (k0 + inv)
        })
        .collect())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    AvgDegree,
    AvgInDegree,
    Triangles,
    RescaledCcdf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldPrediction {
    pub model: ModelKind,
    pub params: ModelParams,
    pub t: f64,
    pub value: f64,
}

/// Evaluates `quantity` at abscissa `at` (node count, or `x` for the
/// rescaled CCDF).
pub fn predict(quantity: Quantity, params: &ModelParams, at: f64) -> Result<MeanFieldPrediction> {
    params.validate()?;
    let value = match (quantity, params) {
        (Quantity::AvgDegree, ModelParams::RefOrCite1 { p }) => avg_degree(at, *p)?,
        (Quantity::AvgInDegree, ModelParams::RefOrCite2 { p1, p2 }) => avg_in_degree(at, *p1, *p2)?,
        (Quantity::AvgInDegree, ModelParams::RefOrCite1 { p }) => avg_in_degree(at, *p, *p)?,
        (Quantity::Triangles, ModelParams::RefOrCite1 { p }) => triangle_count(at, *p)?,
        (Quantity::RescaledCcdf, ModelParams::RefOrCite1 { p }) => ccdf_rescaled(at, *p)?,
        (q, other) => {
            return Err(Error::param("model", format!("no closed form for {q:?} under {:?}", other.kind())));
        }
    };
    Ok(MeanFieldPrediction { model: params.kind(), params: params.clone(), t: at, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn rescaled_ccdf_values() {
        for p in [0.1, 0.5, 1.0] {
            assert_eq!(ccdf_rescaled(1.0, p).unwrap(), 1.0);
        }
        assert!(close(ccdf_rescaled(4.0, 0.5).unwrap(), 1.0 / 16.0, 1e-12));
        assert!(close(ccdf_rescaled(10.0, 0.4).unwrap(), 0.003_162_277_660_168_379_5, 1e-12));
        assert!(ccdf_rescaled(2.0, 0.0).is_err());
        assert!(ccdf_rescaled(0.5, 0.5).is_err());
    }

    #[test]
    fn avg_degree_values() {
        assert!(close(avg_degree(2.0 * E, 0.5).unwrap(), 1.0, 1e-12));
        assert!(close(avg_degree(1e12, 0.3).unwrap(), 5.0, 1e-3));
        // frozen from direct evaluation: 10 * 50000^0.2 - 10
        let v = avg_degree(1e5, 0.6).unwrap();
        assert!(close(v, 77.055_056_329_612_4, 1e-9), "{v}");
        assert!(close(v, 77.2, 5e-3));
        assert!(avg_degree(1.0, 0.5).is_err());
        assert!(avg_degree(10.0, 1.2).is_err());
    }

    #[test]
    fn avg_in_degree_values() {
        assert!(close(avg_in_degree(2.0 * E, 0.5, 0.5).unwrap(), 0.5, 1e-12));
        assert!(close(avg_in_degree(1e20, 0.5, 0.3).unwrap(), 5.0, 1e-3));
        // frozen: 5.5 * 5000^0.2 - 5
        let v = avg_in_degree(1e4, 0.7, 0.5).unwrap();
        assert!(close(v, 25.210_414_940_918_2, 1e-9), "{v}");
        assert!(close(v, 25.1, 1e-2));
        // value 1/2 at t = 2 on every branch
        for c in [0.2, 0.8, 1.0, 1.5] {
            assert!(close(avg_in_degree_for_sum(2.0, c).unwrap(), if c == 1.0 { -0.5 } else { 0.5 }, 1e-12));
        }
    }

    #[test]
    fn triangle_values() {
        assert!(close(triangle_count(1000.0, 0.1).unwrap(), 250.0, 1e-12));
        assert_eq!(triangle_count(1000.0, 0.0).unwrap(), 0.0);
        assert!(triangle_count(1000.0, 1e-6).unwrap() < 0.01);
        // frozen: 12 * 5000^1.2
        let v = triangle_count(1e4, 0.6).unwrap();
        assert!(close(v, 329_568.162_991_835_3, 1e-9), "{v}");
        assert!(close(triangle_count(1e4, 0.5).unwrap(), 1e4 * 1e4f64.ln(), 1e-12));
        assert!(triangle_count(3.0, 0.2).is_err());
    }

    #[test]
    fn degree_ccdf_values() {
        for p in [0.2, 0.5, 1.0] {
            assert_eq!(degree_ccdf(3.0, 3.0, p).unwrap(), 1.0);
        }
        assert!(close(degree_ccdf(3.0, 1.0, 1.0).unwrap(), 0.5, 1e-12));
        assert!(degree_ccdf(1.0, 2.0, 0.5).is_err());
        assert!(degree_ccdf(3.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn split_ccdf_tail_exponent() {
        // log-log slope between two far-apart k approaches -1/p2
        let (p1, p2) = (0.3, 0.5);
        let f = |k: f64| degree_ccdf_split(k, 2.0, p1, p2).unwrap();
        let slope = (f(1e7).ln() - f(1e6).ln()) / (1e7f64.ln() - 1e6f64.ln());
        assert!(close(slope, -1.0 / p2, 1e-4), "{slope}");
        assert_eq!(f(2.0), 1.0);
        // equal probabilities reduce to the single-parameter form
        let a = degree_ccdf_split(9.0, 2.0, 0.4, 0.4).unwrap();
        let b = degree_ccdf(9.0, 2.0, 0.4).unwrap();
        assert!(close(a, b, 1e-12));
    }

    #[test]
    fn general_branch_limit_at_phase_boundary() {
        // The general branch converges to 2 ln(t/2) (resp. ln(t/2) + 1/2);
        // the closed-form boundary value is exactly one unit lower.
        for t in [10.0_f64, 1e3, 1e4, 1e6] {
            let limit = 2.0 * (t / 2.0).ln();
            for eps in [1e-6, -1e-6] {
                let v = avg_degree(t, 0.5 + eps).unwrap();
                assert!(close(v, limit, 1e-3), "t {t} eps {eps}: {v} vs {limit}");
            }
            assert!(close(avg_degree(t, 0.5).unwrap(), limit - 1.0, 1e-12));

            let limit_in = (t / 2.0).ln() + 0.5;
            for eps in [1e-6, -1e-6] {
                let v = avg_in_degree_for_sum(t, 1.0 + eps).unwrap();
                assert!(close(v, limit_in, 1e-3), "t {t} eps {eps}: {v} vs {limit_in}");
                assert!(close(in_degree_curve(t, 1.0 + eps), v, 1e-12));
            }
            assert!(close(in_degree_curve(t, 1.0), limit_in, 1e-12));
            assert!(close(avg_in_degree_for_sum(t, 1.0).unwrap(), limit_in - 1.0, 1e-12));
        }
    }

    #[test]
    fn rescaled_degrees_on_small_graph() {
        let mut g = EvolvingDigraph::seed();
        g.add_node(&[crate::graph::NodeId(0)]).unwrap();
        let x = rescale_degrees(&g, 0.5).unwrap();
        // node 0: k = 1, k0 = 0 -> 3/2; node 1 never cited -> 1
        assert_eq!(x, vec![1.5, 1.0]);
    }

    #[test]
    fn predict_dispatch() {
        let p = ModelParams::RefOrCite1 { p: 0.1 };
        assert_eq!(predict(Quantity::Triangles, &p, 1000.0).unwrap().value, 250.0);
        assert!(predict(Quantity::AvgDegree, &ModelParams::Cp { p: 0.5 }, 100.0).is_err());
        assert!(predict(Quantity::AvgDegree, &ModelParams::RefOrCite1 { p: 2.0 }, 100.0).is_err());
    }

    proptest! {
        #[test]
        fn monotone_in_t(p in 0.0f64..1.0, t1 in 4.0f64..1e7, dt in 0.0f64..1e7) {
            let t2 = t1 + dt;
            prop_assert!(avg_degree(t2, p).unwrap() >= avg_degree(t1, p).unwrap() - 1e-9);
            prop_assert!(triangle_count(t2, p).unwrap() >= triangle_count(t1, p).unwrap() - 1e-9);
            let c = 2.0 * p;
            prop_assert!(avg_in_degree_for_sum(t2, c).unwrap() >= avg_in_degree_for_sum(t1, c).unwrap() - 1e-9);
        }

        #[test]
        fn degree_ccdf_non_increasing(p in 0.01f64..=1.0, k0 in 0.0f64..50.0, a in 0.0f64..1e4, b in 0.0f64..1e4) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let f_lo = degree_ccdf(k0 + lo, k0, p).unwrap();
            let f_hi = degree_ccdf(k0 + hi, k0, p).unwrap();
            prop_assert!(f_hi <= f_lo + 1e-15);
            prop_assert!((0.0..=1.0).contains(&f_hi));
        }

        #[test]
        fn in_degree_curve_increasing(t in 3.0f64..1e8, c1 in 0.0f64..2.0, dc in 1e-6f64..1.0) {
            let c2 = (c1 + dc).min(2.0);
            prop_assume!(c2 > c1);
            prop_assert!(in_degree_curve(t, c2) > in_degree_curve(t, c1));
        }
    }
}
