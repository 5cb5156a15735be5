use std::collections::VecDeque;

use rand::Rng;
use rand_distr::{Distribution, Geometric};

use super::{GrowthModel, Marks, SimRng};
use crate::error::{Error, Result};
use crate::graph::{EvolvingDigraph, NodeId};

/// Forest Fire growth: link to a uniform ambassador, then burn outwards.
///
/// At every burned node the fire takes `x` unvisited out-neighbours and `y`
/// unvisited in-neighbours, with `x` and `y` geometric on `{0, 1, ...}` with
/// means `p_a / (1 - p_a)` and `b p_a / (1 - b p_a)`. The new node cites
/// every burned node.
#[derive(Clone, Debug)]
pub struct ForestFire {
    forward: Geometric,
    backward: Geometric,
    marks: Marks,
    queue: VecDeque<NodeId>,
    scratch: Vec<NodeId>,
}

impl ForestFire {
    pub fn new(p_a: f64, b: f64) -> Result<Self> {
        // Geometric(s) counts failures before a success: mean (1 - s) / s
        let forward = Geometric::new(1.0 - p_a).map_err(|e| Error::param("pa", e.to_string()))?;
        let backward = Geometric::new(1.0 - b * p_a).map_err(|e| Error::param("b", e.to_string()))?;
        Ok(Self { forward, backward, marks: Marks::default(), queue: VecDeque::new(), scratch: Vec::new() })
    }

    /// Moves up to `count` random unvisited nodes of `candidates` into `targets`.
    fn burn(
        &mut self,
        candidates: &[NodeId],
        count: u64,
        targets: &mut Vec<NodeId>,
        rng: &mut SimRng,
    ) {
        if count == 0 {
            return;
        }
        self.scratch.clear();
        self.scratch.extend(candidates.iter().copied().filter(|&x| !self.marks.is_marked(x)));
        let take = (count.min(self.scratch.len() as u64)) as usize;
        for k in 0..take {
            let j = rng.random_range(k..self.scratch.len());
            self.scratch.swap(k, j);
            let x = self.scratch[k];
            self.marks.mark(x);
            targets.push(x);
            self.queue.push_back(x);
        }
    }
}

impl GrowthModel for ForestFire {
    fn step(&mut self, graph: &mut EvolvingDigraph, rng: &mut SimRng) -> NodeId {
        let t = graph.n();
        self.marks.begin(t);
        self.queue.clear();
        let ambassador = NodeId::from(rng.random_range(0..t));
        self.marks.mark(ambassador);
        self.queue.push_back(ambassador);
        let mut targets = vec![ambassador];
        while let Some(u) = self.queue.pop_front() {
            let x = self.forward.sample(rng);
            let y = self.backward.sample(rng);
            self.burn(graph.out_neighbors(u), x, &mut targets, rng);
            self.burn(graph.in_neighbors(u), y, &mut targets, rng);
        }
        graph.push_node_unchecked(targets)
    }
}
