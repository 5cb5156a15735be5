use crate::graph::EvolvingDigraph;

/// Undirected simple adjacency (both directions merged, duplicates removed).
pub(crate) fn undirected_adjacency(graph: &EvolvingDigraph) -> Vec<Vec<u32>> {
    graph
        .nodes()
        .map(|u| {
            let mut nb: Vec<u32> =
                graph.out_neighbors(u).iter().chain(graph.in_neighbors(u)).map(|v| v.0).collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect()
}

/// Exact number of triangles in the undirected simplification of `graph`.
///
/// Each edge is oriented from lower to higher (degree, id) rank; a triangle is
/// then found exactly once from its lowest-ranked vertex.
pub fn count_triangles(graph: &EvolvingDigraph) -> u64 {
    let adj = undirected_adjacency(graph);
    let rank = |u: u32| (adj[u as usize].len(), u);
    let forward: Vec<Vec<u32>> = adj
        .iter()
        .enumerate()
        .map(|(u, nb)| nb.iter().copied().filter(|&v| rank(v) > rank(u as u32)).collect())
        .collect();

    let mut mark = vec![u32::MAX; adj.len()];
    let mut total = 0u64;
    for (u, fu) in forward.iter().enumerate() {
        for &v in fu {
            mark[v as usize] = u as u32;
        }
        for &v in fu {
            total += forward[v as usize].iter().filter(|&&w| mark[w as usize] == u as u32).count() as u64;
        }
    }
    total
}
