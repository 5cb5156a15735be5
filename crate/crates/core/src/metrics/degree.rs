use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EvolvingDigraph;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DegreeKind {
    #[default]
    In,
    Total,
}

impl DegreeKind {
    pub fn degrees(self, graph: &EvolvingDigraph) -> Vec<usize> {
        match self {
            DegreeKind::In => graph.in_degrees(),
            DegreeKind::Total => graph.nodes().map(|u| graph.in_degree(u) + graph.out_degree(u)).collect(),
        }
    }
}

/// Histogram of node degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    pub kind: DegreeKind,
    pub n: usize,
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeDistribution {
    pub fn from_degrees(kind: DegreeKind, degrees: impl IntoIterator<Item = usize>) -> Self {
        let mut counts = BTreeMap::new();
        let mut n = 0;
        for d in degrees {
            *counts.entry(d).or_insert(0) += 1;
            n += 1;
        }
        Self { kind, n, counts }
    }

    pub fn of(graph: &EvolvingDigraph, kind: DegreeKind) -> Self {
        Self::from_degrees(kind, kind.degrees(graph))
    }

    pub fn pmf(&self, k: usize) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.counts.get(&k).copied().unwrap_or(0) as f64 / self.n as f64
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.counts.iter().map(|(&k, &c)| (k * c) as f64).sum::<f64>() / self.n as f64
    }

    /// `(degree, count)` rows in increasing degree.
    pub fn rows(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }
}

pub fn in_degree_distribution(graph: &EvolvingDigraph) -> DegreeDistribution {
    DegreeDistribution::of(graph, DegreeKind::In)
}

/// `sum_k |p1(k) - p2(k)|` over the union of supports; lies in `[0, 2]`.
pub fn l1_distance(a: &DegreeDistribution, b: &DegreeDistribution) -> Result<f64> {
    if a.kind != b.kind {
        return Err(Error::KindMismatch(a.kind, b.kind));
    }
    if a.n == 0 || b.n == 0 {
        return Err(Error::EmptyDistribution);
    }
    let (na, nb) = (a.n as f64, b.n as f64);
    let mut total = 0.0;
    let mut ia = a.counts.iter().peekable();
    let mut ib = b.counts.iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (Some(&(&ka, &ca)), Some(&(&kb, &cb))) => {
                if ka == kb {
                    total += (ca as f64 / na - cb as f64 / nb).abs();
                    ia.next();
                    ib.next();
                } else if ka < kb {
                    total += ca as f64 / na;
                    ia.next();
                } else {
                    total += cb as f64 / nb;
                    ib.next();
                }
            }
            (Some(&(_, &ca)), None) => {
                total += ca as f64 / na;
                ia.next();
            }
            (None, Some(&(_, &cb))) => {
                total += cb as f64 / nb;
                ib.next();
            }
            (None, None) => break,
        }
    }
    Ok(total)
}
