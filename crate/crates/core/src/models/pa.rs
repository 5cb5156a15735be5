use rand::Rng;

use super::{GrowthModel, Marks, SimRng};
use crate::graph::{EvolvingDigraph, NodeId};

/// Preferential attachment baseline: each new node cites `m` distinct older
/// nodes drawn with probability proportional to `in-degree + 1`.
///
/// Sampling mixes a uniform node draw (the `+1` part) with a draw from the
/// list of all edge targets (the in-degree part).
#[derive(Clone, Debug)]
pub struct PreferentialAttachment {
    m: usize,
    /// Target of every edge, in creation order.
    cited: Vec<NodeId>,
    marks: Marks,
}

impl PreferentialAttachment {
    pub fn new(m: usize) -> Self {
        Self { m, cited: Vec::new(), marks: Marks::default() }
    }

    fn sync(&mut self, graph: &EvolvingDigraph) {
        if self.cited.len() != graph.edge_count() {
            self.cited = graph.edges().map(|(_, v)| v).collect();
        }
    }
}

impl GrowthModel for PreferentialAttachment {
    fn step(&mut self, graph: &mut EvolvingDigraph, rng: &mut SimRng) -> NodeId {
        self.sync(graph);
        let t = graph.n();
        let k = self.m.min(t);
        self.marks.begin(t);
        let total = t + self.cited.len();
        let mut targets = Vec::with_capacity(k);
        while targets.len() < k {
            let r = rng.random_range(0..total);
            let v = if r < t { NodeId::from(r) } else { self.cited[r - t] };
            if self.marks.mark(v) {
                targets.push(v);
            }
        }
        self.cited.extend_from_slice(&targets);
        graph.push_node_unchecked(targets)
    }
}

#[cfg(test)]
mod tests {
    use crate::graph::NodeId;
    use crate::models::grow_pa;

    #[test]
    fn every_node_cites_m_distinct_nodes() {
        let g = grow_pa(500, 3, 1).unwrap();
        g.check_invariants(true).unwrap();
        for u in g.nodes() {
            assert_eq!(g.out_degree(u), u.index().min(3));
        }
    }

    #[test]
    fn early_nodes_accumulate_citations() {
        let g = grow_pa(20_000, 1, 3).unwrap();
        let first: usize = (0..10).map(|i| g.in_degree(NodeId(i))).sum();
        let last: usize = (19_990..20_000).map(|i| g.in_degree(NodeId(i))).sum();
        assert!(first > 100 * last.max(1), "first {first}, last {last}");
    }
}
