use rand::Rng;

use super::{GrowthModel, Marks, SimRng};
use crate::graph::{EvolvingDigraph, NodeId};

/// Uniform base selection followed by independent copying of the base's
/// out-neighbours (probability `p_out`) and in-neighbours (probability `p_in`).
///
/// `p_out == p_in` is RefOrCite1, distinct values RefOrCite2, and `p_in == 0`
/// the classic copying model. A node that is both an out- and an in-neighbour
/// of the base (only possible in replayed real data) is offered once, as an
/// out-neighbour.
#[derive(Clone, Debug)]
pub struct NeighborCopying {
    p_out: f64,
    p_in: f64,
    marks: Marks,
}

impl NeighborCopying {
    pub fn new(p_out: f64, p_in: f64) -> Self {
        Self { p_out, p_in, marks: Marks::default() }
    }
}

impl GrowthModel for NeighborCopying {
    fn step(&mut self, graph: &mut EvolvingDigraph, rng: &mut SimRng) -> NodeId {
        let t = graph.n();
        let base = NodeId::from(rng.random_range(0..t));
        self.marks.begin(t);
        self.marks.mark(base);
        let mut targets = vec![base];
        for &x in graph.out_neighbors(base) {
            let copy = rng.random_bool(self.p_out);
            if self.marks.mark(x) && copy {
                targets.push(x);
            }
        }
        if self.p_in > 0.0 {
            for &x in graph.in_neighbors(base) {
                let copy = rng.random_bool(self.p_in);
                if !self.marks.is_marked(x) && copy {
                    targets.push(x);
                }
            }
        }
        graph.push_node_unchecked(targets)
    }
}
