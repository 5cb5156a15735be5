use rand::Rng;

use super::{GrowthModel, Marks, SimRng};
use crate::error::{Error, Result};
use crate::graph::{EvolvingDigraph, NodeId};

/// Draws the age `a = i - j` of a node `j` older than `i` with probability
/// proportional to `a^alpha`, by binary search over cumulative weights.
#[derive(Clone, Debug)]
pub struct AgingSampler {
    alpha: f64,
    /// `cum[a] = sum_{b=1..=a} b^alpha`, `cum[0] = 0`.
    cum: Vec<f64>,
}

impl AgingSampler {
    pub fn new(alpha: f64, max_age: usize) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::param("alpha", "must be finite"));
        }
        let mut s = Self { alpha, cum: vec![0.0] };
        s.extend_to(max_age.max(1))?;
        Ok(s)
    }

    fn extend_to(&mut self, max_age: usize) -> Result<()> {
        let mut acc = *self.cum.last().unwrap();
        for a in self.cum.len()..=max_age {
            acc += (a as f64).powf(self.alpha);
            self.cum.push(acc);
        }
        if !(acc.is_finite() && acc > 0.0) {
            return Err(Error::param("alpha", format!("{} gives degenerate aging weights", self.alpha)));
        }
        Ok(())
    }

    /// Normalised probability of age `a` among ages `1..=max_age`.
    pub fn probability(&self, a: usize, max_age: usize) -> f64 {
        (a as f64).powf(self.alpha) / self.cum[max_age]
    }

    /// Samples an age in `1..=max_age`.
    pub fn sample(&mut self, max_age: usize, rng: &mut SimRng) -> usize {
        if max_age >= self.cum.len() {
            // weights stay finite for any alpha that passed `new` at this size
            self.extend_to(max_age.max(2 * self.cum.len())).expect("aging weights overflowed");
        }
        let u = rng.random::<f64>() * self.cum[max_age];
        let a = self.cum[..=max_age].partition_point(|&c| c <= u);
        a.clamp(1, max_age)
    }
}

/// Copying with triad formation and age-biased base selection.
///
/// Node `i` places `min(seq[i], i)` citations: one to a base drawn by age,
/// the rest either to an uncited neighbour of the base (probability `beta`)
/// or to another age-drawn node. A base whose neighbourhood is used up is
/// replaced by a fresh age-drawn base. After `10 * k` failed placements the
/// remaining stubs are dropped.
#[derive(Clone, Debug)]
pub struct Cpt {
    beta: f64,
    sequence: Vec<u32>,
    aging: AgingSampler,
    marks: Marks,
    pool: Vec<NodeId>,
}

impl Cpt {
    pub fn new(alpha: f64, beta: f64, sequence: Vec<u32>, n_hint: usize) -> Result<Self> {
        if sequence.is_empty() {
            return Err(Error::param("out_degree_sequence", "is empty"));
        }
        Ok(Self { beta, sequence, aging: AgingSampler::new(alpha, n_hint)?, marks: Marks::default(), pool: Vec::new() })
    }

    fn refill_pool(&mut self, graph: &EvolvingDigraph, base: NodeId) {
        self.pool.clear();
        self.pool.extend_from_slice(graph.out_neighbors(base));
        self.pool.extend_from_slice(graph.in_neighbors(base));
    }

    /// Pops a random not-yet-cited node from the pool.
    fn take_from_pool(&mut self, rng: &mut SimRng) -> Option<NodeId> {
        while !self.pool.is_empty() {
            let idx = rng.random_range(0..self.pool.len());
            let x = self.pool.swap_remove(idx);
            if !self.marks.is_marked(x) {
                return Some(x);
            }
        }
        None
    }
}

impl GrowthModel for Cpt {
    fn step(&mut self, graph: &mut EvolvingDigraph, rng: &mut SimRng) -> NodeId {
        let i = graph.n();
        // the sequence wraps if the graph outgrows it
        let wanted = self.sequence[i % self.sequence.len()] as usize;
        let k = wanted.min(i);
        let mut targets = Vec::with_capacity(k);
        if k == 0 {
            return graph.push_node_unchecked(targets);
        }
        self.marks.begin(i);

        let mut base = NodeId::from(i - self.aging.sample(i, rng));
        self.marks.mark(base);
        targets.push(base);
        self.refill_pool(graph, base);

        let budget = 10 * k;
        let mut misses = 0;
        while targets.len() < k && misses < budget {
            if rng.random_bool(self.beta) {
                if let Some(x) = self.take_from_pool(rng) {
                    self.marks.mark(x);
                    targets.push(x);
                } else {
                    misses += 1;
                    base = NodeId::from(i - self.aging.sample(i, rng));
                    if self.marks.mark(base) {
                        targets.push(base);
                    }
                    self.refill_pool(graph, base);
                }
            } else {
                let x = NodeId::from(i - self.aging.sample(i, rng));
                if self.marks.mark(x) {
                    targets.push(x);
                } else {
                    misses += 1;
                }
            }
        }
        graph.push_node_unchecked(targets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{grow_cpt, grow_reforcite1, rng_from_seed};

    #[test]
    fn aging_draws_match_weights() {
        // chi-square goodness of fit at a fixed arrival i over 10^4 draws
        let i = 20;
        for alpha in [-1.0, 0.0, 1.5] {
            let mut s = AgingSampler::new(alpha, i).unwrap();
            let mut rng = rng_from_seed(42);
            let draws = 10_000;
            let mut counts = vec![0usize; i + 1];
            for _ in 0..draws {
                counts[s.sample(i, &mut rng)] += 1;
            }
            assert_eq!(counts[0], 0);
            let chi2: f64 = (1..=i)
                .map(|a| {
                    let e = draws as f64 * s.probability(a, i);
                    (counts[a] as f64 - e).powi(2) / e
                })
                .sum();
            // 19 degrees of freedom; 0.999 quantile is 43.8
            assert!(chi2 < 43.8, "alpha {alpha}: chi2 {chi2}");
        }
    }

    #[test]
    fn negative_alpha_prefers_recent_nodes() {
        let mut s = AgingSampler::new(-1.0, 1000).unwrap();
        let mut rng = rng_from_seed(3);
        let recent = (0..5000).filter(|_| s.sample(1000, &mut rng) <= 10).count();
        // P(age <= 10) = H_10 / H_1000 ~ 0.39
        assert!((1600..2300).contains(&recent), "{recent}");
    }

    #[test]
    fn degenerate_alpha_is_rejected() {
        assert!(AgingSampler::new(f64::NAN, 10).is_err());
        assert!(AgingSampler::new(400.0, 10_000).is_err());
    }

    #[test]
    fn unit_sequence_gives_tree() {
        let g = grow_cpt(2000, -1.0, 0.5, &vec![1; 2000], 4).unwrap();
        assert_eq!(g.edge_count(), 1999);
        g.check_invariants(true).unwrap();
    }

    #[test]
    fn out_degrees_follow_sequence() {
        let reference = grow_reforcite1(3000, 0.45, 8).unwrap();
        let seq: Vec<u32> = reference.out_degrees().into_iter().map(|d| d as u32).collect();
        for (alpha, beta) in [(-1.0, 0.99), (0.0, 0.3), (1.0, 0.0)] {
            let g = grow_cpt(3000, alpha, beta, &seq, 12).unwrap();
            assert_eq!(g.out_degrees(), reference.out_degrees(), "alpha {alpha} beta {beta}");
            g.check_invariants(true).unwrap();
        }
    }

    #[test]
    fn oversized_requests_are_clamped_to_available_nodes() {
        let g = grow_cpt(50, 0.0, 0.9, &vec![1000; 50], 1).unwrap();
        for u in g.nodes() {
            assert_eq!(g.out_degree(u), u.index());
        }
    }

    #[test]
    fn zero_entries_add_uncited_nodes() {
        let mut seq = vec![1u32; 100];
        seq[10] = 0;
        let g = grow_cpt(100, -1.0, 0.5, &seq, 2).unwrap();
        assert_eq!(g.out_degree(NodeId(10)), 0);
    }
}
