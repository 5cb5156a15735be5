use serde::{Deserialize, Serialize};

use super::DegreeKind;
use crate::error::{Error, Result};
use crate::graph::EvolvingDigraph;

/// Share `r` of all citations held by the oldest fraction `o` of nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObsolescenceCurve {
    pub points: Vec<(f64, f64)>,
}

impl ObsolescenceCurve {
    pub fn at(&self, o: f64) -> Option<f64> {
        self.points.iter().find(|(x, _)| (x - o).abs() < 1e-12).map(|&(_, r)| r)
    }
}

/// `k / points` for `k = 1..=points`.
pub fn default_o_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|k| k as f64 / points as f64).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.iter().any(|&o| !(o > 0.0 && o <= 1.0)) {
        return Err(Error::param("o-grid", "fractions must lie in (0, 1]"));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::param("o-grid", "fractions must be sorted"));
    }
    Ok(())
}

/// For each `o`, the final degree held by the `floor(o n)` oldest nodes
/// divided by the total.
pub fn obsolescence_curve(graph: &EvolvingDigraph, grid: &[f64], kind: DegreeKind) -> Result<ObsolescenceCurve> {
    check_grid(grid)?;
    let degrees = kind.degrees(graph);
    let mut prefix = Vec::with_capacity(degrees.len() + 1);
    prefix.push(0u64);
    for d in &degrees {
        prefix.push(prefix.last().unwrap() + *d as u64);
    }
    let total = *prefix.last().unwrap();
    if total == 0 {
        return Err(Error::NoCitations);
    }
    let n = degrees.len();
    let points = grid
        .iter()
        .map(|&o| {
            let oldest = ((o * n as f64) + 1e-9).floor() as usize;
            (o, prefix[oldest.min(n)] as f64 / total as f64)
        })
        .collect();
    Ok(ObsolescenceCurve { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{grow_cp, grow_reforcite1};

    #[test]
    fn star_center_holds_everything() {
        let (g, _) = EvolvingDigraph::from_edges(6, (1..6).map(|i| (i, 0))).unwrap();
        let c = obsolescence_curve(&g, &[1.0 / 6.0, 0.5, 1.0], DegreeKind::In).unwrap();
        assert_eq!(c.points, vec![(1.0 / 6.0, 1.0), (0.5, 1.0), (1.0, 1.0)]);
    }

    #[test]
    fn errors() {
        let g = EvolvingDigraph::seed();
        assert!(matches!(obsolescence_curve(&g, &[1.0], DegreeKind::In), Err(Error::NoCitations)));
        let g = grow_cp(10, 0.5, 1).unwrap();
        assert!(obsolescence_curve(&g, &[], DegreeKind::In).is_err());
        assert!(obsolescence_curve(&g, &[0.0, 1.0], DegreeKind::In).is_err());
        assert!(obsolescence_curve(&g, &[0.6, 0.3], DegreeKind::In).is_err());
    }

    #[test]
    fn monotone_and_ends_at_one() {
        for seed in 0..5 {
            let g = grow_reforcite1(3000, 0.45, seed).unwrap();
            for kind in [DegreeKind::In, DegreeKind::Total] {
                let c = obsolescence_curve(&g, &default_o_grid(100), kind).unwrap();
                assert!(c.points.windows(2).all(|w| w[0].1 <= w[1].1));
                assert_eq!(c.at(1.0), Some(1.0));
            }
        }
    }

    #[test]
    fn total_degree_shifts_share() {
        let g = grow_reforcite1(2000, 0.5, 3).unwrap();
        let r_in = obsolescence_curve(&g, &[0.1], DegreeKind::In).unwrap().points[0].1;
        let r_tot = obsolescence_curve(&g, &[0.1], DegreeKind::Total).unwrap().points[0].1;
        assert_ne!(r_in, r_tot);
    }
}
