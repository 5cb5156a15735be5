//! Growth processes that extend an [`EvolvingDigraph`] by one node per step.
//!
//! Every model starts from [`EvolvingDigraph::seed`] (a single isolated node)
//! and is driven by a [`SimRng`] seeded from a single `u64`, so a
//! `(params, n, seed)` triple always reproduces the same edge list.

mod copying;
mod cpt;
mod forest_fire;
mod pa;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EvolvingDigraph, NodeId};

pub use copying::NeighborCopying;
pub use cpt::{AgingSampler, Cpt};
pub use forest_fire::ForestFire;
pub use pa::PreferentialAttachment;

/// Random stream used by every simulation.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Mixes a master seed with a path of indices (grid point, realization, ...)
/// into an independent child seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    path.iter().fold(splitmix(master), |acc, &i| splitmix(acc ^ splitmix(i)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelParams {
    RefOrCite1 {
        p: f64,
    },
    /// `p1` copies the base's in-neighbours (papers citing it), `p2` its
    /// out-neighbours (papers it cites). An old node's in-degree then grows
    /// at rate `(1 + p2 k_in + p1 k_out) / t`.
    RefOrCite2 {
        p1: f64,
        p2: f64,
    },
    Cp {
        p: f64,
    },
    Cpt {
        alpha: f64,
        beta: f64,
        #[serde(default)]
        out_degree_sequence: Vec<u32>,
    },
    #[serde(rename = "ff")]
    ForestFire {
        p_a: f64,
        b: f64,
    },
    Pa {
        m: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[value(name = "reforcite1")]
    RefOrCite1,
    #[value(name = "reforcite2")]
    RefOrCite2,
    Cp,
    Cpt,
    #[value(name = "ff")]
    #[serde(rename = "ff")]
    ForestFire,
    Pa,
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(name, format!("{p} is not a probability in [0, 1]")));
    }
    Ok(())
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::RefOrCite1 { .. } => ModelKind::RefOrCite1,
            ModelParams::RefOrCite2 { .. } => ModelKind::RefOrCite2,
            ModelParams::Cp { .. } => ModelKind::Cp,
            ModelParams::Cpt { .. } => ModelKind::Cpt,
            ModelParams::ForestFire { .. } => ModelKind::ForestFire,
            ModelParams::Pa { .. } => ModelKind::Pa,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelParams::RefOrCite1 { p } | ModelParams::Cp { p } => check_probability("p", p),
            ModelParams::RefOrCite2 { p1, p2 } => {
                check_probability("p1", p1)?;
                check_probability("p2", p2)
            }
            ModelParams::Cpt { alpha, beta, ref out_degree_sequence } => {
                check_probability("beta", beta)?;
                if !alpha.is_finite() {
                    return Err(Error::param("alpha", "must be finite"));
                }
                if out_degree_sequence.is_empty() {
                    return Err(Error::param("out_degree_sequence", "is empty"));
                }
                Ok(())
            }
            ModelParams::ForestFire { p_a, b } => {
                if !(p_a > 0.0 && p_a < 1.0) {
                    return Err(Error::param("pa", format!("{p_a} is outside (0, 1)")));
                }
                if !(b >= 0.0 && b.is_finite()) {
                    return Err(Error::param("b", format!("{b} must be a finite ratio >= 0")));
                }
                if b * p_a >= 1.0 {
                    return Err(Error::param("b", format!("b * pa = {} must be < 1", b * p_a)));
                }
                Ok(())
            }
            ModelParams::Pa { m } => {
                if m == 0 {
                    return Err(Error::param("m", "must be at least 1"));
                }
                Ok(())
            }
        }
    }

    /// Instantiates the growth process. `n_hint` sizes internal tables.
    pub fn build(&self, n_hint: usize) -> Result<Box<dyn GrowthModel + Send>> {
        self.validate()?;
        Ok(match *self {
            ModelParams::RefOrCite1 { p } => Box::new(NeighborCopying::new(p, p)),
            ModelParams::RefOrCite2 { p1, p2 } => Box::new(NeighborCopying::new(p2, p1)),
            ModelParams::Cp { p } => Box::new(NeighborCopying::new(p, 0.0)),
            ModelParams::Cpt { alpha, beta, ref out_degree_sequence } => {
                Box::new(Cpt::new(alpha, beta, out_degree_sequence.clone(), n_hint)?)
            }
            ModelParams::ForestFire { p_a, b } => Box::new(ForestFire::new(p_a, b)?),
            ModelParams::Pa { m } => Box::new(PreferentialAttachment::new(m)),
        })
    }
}

/// One growth step: append a node to the graph and wire its citations.
pub trait GrowthModel {
    fn step(&mut self, graph: &mut EvolvingDigraph, rng: &mut SimRng) -> NodeId;

    /// Grows `graph` until it holds `n` nodes.
    fn grow_until(&mut self, graph: &mut EvolvingDigraph, n: usize, rng: &mut SimRng) {
        if graph.n() == 0 && n > 0 {
            *graph = EvolvingDigraph::seed();
        }
        while graph.n() < n {
            self.step(graph, rng);
        }
    }
}

/// Grows a graph with `n` nodes from the single-node seed.
pub fn grow(params: &ModelParams, n: usize, seed: u64) -> Result<EvolvingDigraph> {
    params.validate()?;
    if n < 2 {
        return Err(Error::param("n", format!("{n} is below the minimum of 2 nodes")));
    }
    if let ModelParams::Cpt { ref out_degree_sequence, .. } = *params {
        if out_degree_sequence.len() < n {
            return Err(Error::param(
                "out_degree_sequence",
                format!("has {} entries but {n} nodes were requested", out_degree_sequence.len()),
            ));
        }
    }
    let mut model = params.build(n)?;
    let mut rng = rng_from_seed(seed);
    let mut graph = EvolvingDigraph::with_capacity(n);
    model.grow_until(&mut graph, n, &mut rng);
    Ok(graph)
}

pub fn grow_reforcite1(n: usize, p: f64, seed: u64) -> Result<EvolvingDigraph> {
    grow(&ModelParams::RefOrCite1 { p }, n, seed)
}

pub fn grow_reforcite2(n: usize, p1: f64, p2: f64, seed: u64) -> Result<EvolvingDigraph> {
    grow(&ModelParams::RefOrCite2 { p1, p2 }, n, seed)
}

pub fn grow_cp(n: usize, p: f64, seed: u64) -> Result<EvolvingDigraph> {
    grow(&ModelParams::Cp { p }, n, seed)
}

pub fn grow_cpt(n: usize, alpha: f64, beta: f64, out_degree_sequence: &[u32], seed: u64) -> Result<EvolvingDigraph> {
    grow(&ModelParams::Cpt { alpha, beta, out_degree_sequence: out_degree_sequence.to_vec() }, n, seed)
}

pub fn grow_forest_fire(n: usize, p_a: f64, b: f64, seed: u64) -> Result<EvolvingDigraph> {
    grow(&ModelParams::ForestFire { p_a, b }, n, seed)
}

pub fn grow_pa(n: usize, m: usize, seed: u64) -> Result<EvolvingDigraph> {
    grow(&ModelParams::Pa { m }, n, seed)
}

/// Per-step "already cited" flags, reset in O(1) by bumping an epoch.
#[derive(Clone, Debug, Default)]
pub(crate) struct Marks {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Marks {
    pub(crate) fn begin(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    #[inline]
    pub(crate) fn is_marked(&self, v: NodeId) -> bool {
        self.stamp[v.index()] == self.epoch
    }

    /// Marks `v`; returns false if it was already marked.
    #[inline]
    pub(crate) fn mark(&mut self, v: NodeId) -> bool {
        let s = &mut self.stamp[v.index()];
        if *s == self.epoch {
            false
        } else {
            *s = self.epoch;
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_params() -> Vec<ModelParams> {
        vec![
            ModelParams::RefOrCite1 { p: 0.4 },
            ModelParams::RefOrCite2 { p1: 0.3, p2: 0.5 },
            ModelParams::Cp { p: 0.55 },
            ModelParams::Cpt { alpha: -1.0, beta: 0.99, out_degree_sequence: vec![3; 400] },
            ModelParams::ForestFire { p_a: 0.3, b: 0.5 },
            ModelParams::Pa { m: 2 },
        ]
    }

    #[test]
    fn two_nodes_always_give_single_edge() {
        for params in all_params() {
            let g = grow(&params, 2, 99).unwrap();
            assert_eq!(g.edges().collect::<Vec<_>>(), vec![(NodeId(1), NodeId(0))], "{params:?}");
        }
    }

    #[test]
    fn deterministic_and_dag_for_every_model() {
        for params in all_params() {
            let a = grow(&params, 400, 5).unwrap();
            let b = grow(&params, 400, 5).unwrap();
            assert_eq!(a, b, "{params:?}");
            a.check_invariants(true).unwrap();
            let c = grow(&params, 400, 6).unwrap();
            assert_ne!(a.edges().collect::<Vec<_>>(), c.edges().collect::<Vec<_>>(), "{params:?}");
        }
    }

    #[test]
    fn parameter_domain_errors() {
        let bad = [
            ModelParams::RefOrCite1 { p: 1.5 },
            ModelParams::RefOrCite2 { p1: -0.1, p2: 0.2 },
            ModelParams::Cp { p: f64::NAN },
            ModelParams::Cpt { alpha: f64::INFINITY, beta: 0.5, out_degree_sequence: vec![1; 10] },
            ModelParams::Cpt { alpha: -1.0, beta: 0.5, out_degree_sequence: vec![] },
            ModelParams::ForestFire { p_a: 1.0, b: 0.0 },
            ModelParams::ForestFire { p_a: 0.5, b: 2.0 },
            ModelParams::Pa { m: 0 },
        ];
        for params in bad {
            assert!(matches!(grow(&params, 10, 1), Err(Error::Param { .. })), "{params:?}");
        }
        assert!(grow_reforcite1(1, 0.5, 1).is_err());
        assert_eq!(grow_pa(3, 3, 1).unwrap().out_degree(NodeId(2)), 2);
        assert!(grow_cpt(10, -1.0, 0.5, &[1; 5], 1).is_err());
    }

    #[test]
    fn params_round_trip_through_json() {
        for params in all_params() {
            let s = serde_json::to_string(&params).unwrap();
            let back: ModelParams = serde_json::from_str(&s).unwrap();
            assert_eq!(back, params);
        }
        let ff: ModelParams = serde_json::from_str(r#"{"model":"ff","p_a":0.001,"b":1}"#).unwrap();
        assert_eq!(ff, ModelParams::ForestFire { p_a: 0.001, b: 1.0 });
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(7, &[0, 0]);
        assert_ne!(a, derive_seed(7, &[0, 1]));
        assert_ne!(a, derive_seed(7, &[1, 0]));
        assert_ne!(a, derive_seed(8, &[0, 0]));
        assert_eq!(a, derive_seed(7, &[0, 0]));
    }
}
