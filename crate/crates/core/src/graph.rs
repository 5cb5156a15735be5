//! Append-only directed graph whose node indices are arrival times.
//!
//! Node `i` is the `(i + 1)`-th node to arrive. Out-neighbourhoods are frozen
//! when a node is added; in-neighbourhoods keep growing as newer nodes cite
//! older ones. Graphs grown by the models in this crate are DAGs under arrival
//! order. Graphs ingested from real data may contain a few edges pointing
//! forward in time; those are kept and counted.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arrival index of a node.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    #[inline]
    fn from(i: usize) -> Self {
        NodeId(u32::try_from(i).expect("node index exceeds u32"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeView {
    pub k_in: usize,
    pub k_out: usize,
    pub k_total: usize,
}

/// What happened to the raw edges handed to [`EvolvingDigraph::from_edges`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeImport {
    pub kept: usize,
    pub duplicates: usize,
    pub self_loops: usize,
    /// Kept edges whose target arrived after their source.
    pub forward: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvolvingDigraph {
    out_adj: Vec<Vec<NodeId>>,
    in_adj: Vec<Vec<NodeId>>,
    birth_out_degree: Vec<u32>,
    edges: usize,
}

impl EvolvingDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// The seed every growth model starts from: one node, no edges.
    pub fn seed() -> Self {
        let mut g = Self::new();
        g.push_node_unchecked(Vec::new());
        g
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            out_adj: Vec::with_capacity(n),
            in_adj: Vec::with_capacity(n),
            birth_out_degree: Vec::with_capacity(n),
            edges: 0,
        }
    }

    /// Adds a node citing `targets` and returns its id.
    ///
    /// Targets must already exist and be distinct.
    pub fn add_node(&mut self, targets: &[NodeId]) -> Result<NodeId> {
        let n = self.n();
        let mut sorted = targets.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateTarget(w[0].index()));
            }
        }
        if let Some(&max) = sorted.last() {
            if max.index() >= n {
                return Err(Error::NodeOutOfRange { node: max.index(), n });
            }
        }
        Ok(self.push_node_unchecked(targets.to_vec()))
    }

    /// Caller guarantees the targets are distinct existing nodes.
    pub(crate) fn push_node_unchecked(&mut self, targets: Vec<NodeId>) -> NodeId {
        let id = NodeId::from(self.n());
        debug_assert!(targets.iter().all(|t| t.index() < id.index()));
        for &t in &targets {
            self.in_adj[t.index()].push(id);
        }
        self.edges += targets.len();
        self.birth_out_degree.push(targets.len() as u32);
        self.out_adj.push(targets);
        self.in_adj.push(Vec::new());
        id
    }

    /// Builds a graph with `n` nodes from arbitrary `(source, target)` pairs.
    ///
    /// Self-loops are dropped and repeated edges collapsed; edges pointing
    /// forward in arrival order are kept. Neighbour lists come out sorted.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<(Self, EdgeImport)> {
        let mut report = EdgeImport::default();
        let mut out_adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::NodeOutOfRange { node: u.max(v), n });
            }
            if u == v {
                report.self_loops += 1;
                continue;
            }
            out_adj[u].push(NodeId::from(v));
        }
        let mut in_adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut total = 0;
        for (u, list) in out_adj.iter_mut().enumerate() {
            let before = list.len();
            list.sort_unstable();
            list.dedup();
            report.duplicates += before - list.len();
            total += list.len();
            for &v in list.iter() {
                if v.index() > u {
                    report.forward += 1;
                }
                in_adj[v.index()].push(NodeId::from(u));
            }
        }
        report.kept = total;
        let birth_out_degree = out_adj.iter().map(|l| l.len() as u32).collect();
        Ok((Self { out_adj, in_adj, birth_out_degree, edges: total }, report))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.out_adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn out_neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.out_adj[u.index()]
    }

    #[inline]
    pub fn in_neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.in_adj[u.index()]
    }

    #[inline]
    pub fn in_degree(&self, u: NodeId) -> usize {
        self.in_adj[u.index()].len()
    }

    #[inline]
    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out_adj[u.index()].len()
    }

    #[inline]
    pub fn birth_out_degree(&self, u: NodeId) -> usize {
        self.birth_out_degree[u.index()] as usize
    }

    pub fn degree_views(&self, u: NodeId) -> Result<DegreeView> {
        if u.index() >= self.n() {
            return Err(Error::NodeOutOfRange { node: u.index(), n: self.n() });
        }
        let k_in = self.in_degree(u);
        let k_out = self.birth_out_degree(u);
        Ok(DegreeView { k_in, k_out, k_total: k_in + k_out })
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.n()).map(NodeId::from)
    }

    /// All edges as `(source, target)`, grouped by source in arrival order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (NodeId::from(u), v)))
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        self.in_adj.iter().map(Vec::len).collect()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out_adj.iter().map(Vec::len).collect()
    }

    /// Number of edges whose target arrived after the source.
    pub fn forward_edge_count(&self) -> usize {
        self.edges().filter(|(u, v)| v > u).count()
    }

    /// Number of edges among the first `s` nodes.
    pub fn prefix_edge_count(&self, s: usize) -> usize {
        let s = s.min(self.n());
        self.out_adj[..s]
            .iter()
            .map(|l| l.iter().filter(|v| v.index() < s).count())
            .sum()
    }

    /// Checks every structural invariant; returns a description of the first
    /// violation. Forward edges are only reported when `require_dag` is set.
    pub fn check_invariants(&self, require_dag: bool) -> std::result::Result<(), String> {
        let n = self.n();
        if self.in_adj.len() != n || self.birth_out_degree.len() != n {
            return Err("per-node arrays have different lengths".into());
        }
        let mut in_total = 0;
        let mut seen = vec![u32::MAX; n];
        for u in 0..n {
            let out = &self.out_adj[u];
            if out.len() != self.birth_out_degree[u] as usize {
                return Err(format!("node {u}: out-degree differs from birth out-degree"));
            }
            for &v in out {
                let vi = v.index();
                if vi >= n {
                    return Err(format!("edge ({u},{vi}) leaves the graph"));
                }
                if vi == u {
                    return Err(format!("self-loop at {u}"));
                }
                if require_dag && vi > u {
                    return Err(format!("edge ({u},{vi}) points forward in time"));
                }
                if seen[vi] == u as u32 {
                    return Err(format!("duplicate edge ({u},{vi})"));
                }
                seen[vi] = u as u32;
                if !self.in_adj[vi].contains(&NodeId::from(u)) {
                    return Err(format!("edge ({u},{vi}) missing from in-adjacency"));
                }
            }
            in_total += self.in_adj[u].len();
            for &w in &self.in_adj[u] {
                if !self.out_adj[w.index()].contains(&NodeId::from(u)) {
                    return Err(format!("in-edge ({},{u}) missing from out-adjacency", w.index()));
                }
            }
        }
        let out_total: usize = self.out_adj.iter().map(Vec::len).sum();
        if in_total != out_total || out_total != self.edges {
            return Err(format!("edge totals disagree: in {in_total}, out {out_total}, count {}", self.edges));
        }
        Ok(())
    }
}

/// Node counts at which snapshots are taken while a graph grows.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotSchedule {
    step_size: usize,
}

impl Default for SnapshotSchedule {
    fn default() -> Self {
        Self { step_size: 5000 }
    }
}

impl SnapshotSchedule {
    pub fn new(step_size: usize) -> Result<Self> {
        if step_size == 0 {
            return Err(Error::param("snapshot-step", "must be at least 1"));
        }
        Ok(Self { step_size })
    }

    pub fn step_size(&self) -> usize {
        self.step_size
    }

    /// `step, 2*step, ...` up to `n`, always ending with `n` itself.
    pub fn sizes(&self, n: usize) -> Vec<usize> {
        let mut sizes: Vec<usize> = (1..).map(|s| s * self.step_size).take_while(|&s| s <= n).collect();
        if sizes.last() != Some(&n) && n > 0 {
            sizes.push(n);
        }
        sizes
    }
}
