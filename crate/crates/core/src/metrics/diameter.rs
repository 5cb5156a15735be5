//! Diameter of growing snapshots.
//!
//! A snapshot of size `s` is the subgraph induced by the first `s` arrivals.
//! Its diameter is that of the undirected largest weakly connected component,
//! either exact (BFS from every node) or estimated with double-sweep BFS from
//! a few random sources. The estimate never exceeds the true diameter and is
//! at least half of it.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EvolvingDigraph, NodeId, SnapshotSchedule};
use crate::models::rng_from_seed;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiameterOptions {
    pub schedule: SnapshotSchedule,
    pub sample_sources: usize,
    pub exact: bool,
    pub seed: u64,
}

impl Default for DiameterOptions {
    fn default() -> Self {
        Self { schedule: SnapshotSchedule::default(), sample_sources: 10, exact: false, seed: 0 }
    }
}

const UNSEEN: u32 = u32::MAX;

struct Bfs<'a> {
    graph: &'a EvolvingDigraph,
    limit: u32,
    dist: Vec<u32>,
    queue: Vec<u32>,
}

impl<'a> Bfs<'a> {
    fn new(graph: &'a EvolvingDigraph, limit: usize) -> Self {
        Self { graph, limit: limit as u32, dist: vec![UNSEEN; limit], queue: Vec::with_capacity(limit) }
    }

    /// Runs BFS from `src`; returns `(eccentricity, farthest node)` and leaves
    /// the visited set in `self.queue`.
    fn run(&mut self, src: u32) -> (u32, u32) {
        for &v in &self.queue {
            self.dist[v as usize] = UNSEEN;
        }
        self.queue.clear();
        self.dist[src as usize] = 0;
        self.queue.push(src);
        let mut head = 0;
        let mut far = (0, src);
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            let du = self.dist[u as usize];
            if du > far.0 {
                far = (du, u);
            }
            let node = NodeId(u);
            for &v in self.graph.out_neighbors(node).iter().chain(self.graph.in_neighbors(node)) {
                if v.0 < self.limit && self.dist[v.index()] == UNSEEN {
                    self.dist[v.index()] = du + 1;
                    self.queue.push(v.0);
                }
            }
        }
        far
    }
}

/// Nodes of the largest weakly connected component among the first `s` nodes
/// (smallest index wins ties between equal-size components).
fn largest_component(bfs: &mut Bfs<'_>, s: usize) -> Vec<u32> {
    let mut seen = vec![false; s];
    let mut best: Vec<u32> = Vec::new();
    for start in 0..s {
        if seen[start] {
            continue;
        }
        bfs.run(start as u32);
        for &v in &bfs.queue {
            seen[v as usize] = true;
        }
        if bfs.queue.len() > best.len() {
            best = bfs.queue.clone();
        }
    }
    best
}

/// Exact diameter of the snapshot with the first `s` nodes.
pub fn exact_snapshot_diameter(graph: &EvolvingDigraph, s: usize) -> usize {
    let s = s.min(graph.n());
    if s == 0 {
        return 0;
    }
    let mut bfs = Bfs::new(graph, s);
    let comp = largest_component(&mut bfs, s);
    comp.iter().map(|&u| bfs.run(u).0).max().unwrap_or(0) as usize
}

/// Double-sweep lower bound for the snapshot with the first `s` nodes.
pub fn estimate_snapshot_diameter(graph: &EvolvingDigraph, s: usize, sources: usize, rng: &mut impl Rng) -> usize {
    let s = s.min(graph.n());
    if s == 0 {
        return 0;
    }
    let mut bfs = Bfs::new(graph, s);
    let mut comp = largest_component(&mut bfs, s);
    let picks = sources.max(1).min(comp.len());
    let mut best = 0;
    for k in 0..picks {
        let j = rng.random_range(k..comp.len());
        comp.swap(k, j);
        let (ecc, far) = bfs.run(comp[k]);
        let (ecc2, _) = bfs.run(far);
        best = best.max(ecc).max(ecc2);
    }
    best as usize
}

/// `(snapshot size, diameter)` for every snapshot in the schedule.
pub fn snapshot_diameters(graph: &EvolvingDigraph, opts: &DiameterOptions) -> Result<Vec<(usize, usize)>> {
    if graph.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if opts.sample_sources == 0 && !opts.exact {
        return Err(Error::param("sample-sources", "must be at least 1"));
    }
    let mut rng = rng_from_seed(opts.seed);
    Ok(opts
        .schedule
        .sizes(graph.n())
        .into_iter()
        .map(|s| {
            let d = if opts.exact {
                exact_snapshot_diameter(graph, s)
            } else {
                estimate_snapshot_diameter(graph, s, opts.sample_sources, &mut rng)
            };
            (s, d)
        })
        .collect())
}

/// Mean snapshot diameter over the graph's lifetime.
pub fn avg_diameter(graph: &EvolvingDigraph, opts: &DiameterOptions) -> Result<f64> {
    let snaps = snapshot_diameters(graph, opts)?;
    Ok(snaps.iter().map(|&(_, d)| d as f64).sum::<f64>() / snaps.len() as f64)
}
