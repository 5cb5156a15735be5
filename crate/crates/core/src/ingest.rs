//! Edge-list input and output.
//!
//! Input files hold one `from to` pair per line, separated by whitespace;
//! blank lines and lines starting with `#` are skipped. Node ids are opaque
//! tokens. They are renumbered into arrival order by one of the
//! [`ArrivalStrategy`] variants.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeImport, EvolvingDigraph};
use crate::metrics::{count_triangles, in_degree_distribution, network_h_index, DegreeDistribution};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrivalStrategy {
    /// Order in which ids first occur in the file, reading each line's source
    /// before its target.
    FirstAppearance,
    /// Sort by an `id timestamp` companion file. Ids without a timestamp go
    /// last, in first-appearance order.
    Timestamps(PathBuf),
    /// Ids are already arrival indices `0..n`. A `# nodes: N` header line
    /// extends `n` to cover trailing isolated nodes.
    GivenFile,
}

impl FromStr for ArrivalStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first-appearance" => Ok(Self::FirstAppearance),
            "given-file" | "given" => Ok(Self::GivenFile),
            _ => match s.strip_prefix("timestamps:") {
                Some(p) if !p.is_empty() => Ok(Self::Timestamps(PathBuf::from(p))),
                _ => Err(Error::param(
                    "order",
                    format!("`{s}` is not one of first-appearance, given-file, timestamps:<file>"),
                )),
            },
        }
    }
}

/// External id of every node, indexed by arrival order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrivalOrder {
    pub strategy: ArrivalStrategy,
    pub ids: Vec<String>,
}

impl ArrivalOrder {
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }
}

#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: EvolvingDigraph,
    pub order: ArrivalOrder,
    pub import: EdgeImport,
    /// Ids that were missing from the timestamp file.
    pub missing_timestamps: usize,
}

struct RawEdges<'a> {
    pairs: Vec<(&'a str, &'a str)>,
    header_nodes: Option<usize>,
}

fn parse_edges<'a>(text: &'a str, path: &Path) -> Result<RawEdges<'a>> {
    let mut pairs = Vec::new();
    let mut header_nodes = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(comment) = line.strip_prefix('#') {
            let mut tokens = comment.split_whitespace();
            while let Some(tok) = tokens.next() {
                if tok == "nodes:" {
                    header_nodes = tokens.next().and_then(|v| v.parse().ok());
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => pairs.push((a, b)),
            _ => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: format!("expected two whitespace-separated ids, got `{line}`"),
                })
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::Data { path: path.to_path_buf(), msg: "no edges".into() });
    }
    Ok(RawEdges { pairs, header_nodes })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Reads an `id timestamp` file into a map.
fn read_timestamps(path: &Path) -> Result<HashMap<String, String>> {
    let text = read(path)?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match (tokens.next(), tokens.next()) {
            (Some(id), Some(ts)) => {
                map.insert(id.to_string(), ts.to_string());
            }
            _ => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: format!("expected `id timestamp`, got `{line}`"),
                })
            }
        }
    }
    Ok(map)
}

/// Loads and renumbers an edge list.
pub fn load_graph(path: &Path, strategy: &ArrivalStrategy) -> Result<LoadedGraph> {
    let text = read(path)?;
    load_graph_from_str(&text, path, strategy)
}

/// As [`load_graph`], for text already in memory. `path` is only used in
/// error messages.
pub fn load_graph_from_str(text: &str, path: &Path, strategy: &ArrivalStrategy) -> Result<LoadedGraph> {
    let raw = parse_edges(text, path)?;

    // intern tokens in first-appearance order
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut tokens: Vec<&str> = Vec::new();
    let mut interned = Vec::with_capacity(raw.pairs.len());
    for &(a, b) in &raw.pairs {
        let mut pair = [0usize; 2];
        for (slot, t) in pair.iter_mut().zip([a, b]) {
            *slot = *index.entry(t).or_insert_with(|| {
                tokens.push(t);
                tokens.len() - 1
            });
        }
        interned.push((pair[0], pair[1]));
    }

    let mut missing_timestamps = 0;
    // rank[token index] = arrival index; ids[arrival index] = external id
    let (n, rank, ids): (usize, Vec<usize>, Vec<String>) = match strategy {
        ArrivalStrategy::FirstAppearance => {
            (tokens.len(), (0..tokens.len()).collect(), tokens.iter().map(|t| t.to_string()).collect())
        }
        ArrivalStrategy::GivenFile => {
            let mut rank = Vec::with_capacity(tokens.len());
            for t in &tokens {
                let v: usize = t.parse().map_err(|_| Error::Data {
                    path: path.to_path_buf(),
                    msg: format!("id `{t}` is not a non-negative integer arrival index"),
                })?;
                rank.push(v);
            }
            let n = rank.iter().map(|&r| r + 1).max().unwrap_or(0).max(raw.header_nodes.unwrap_or(0));
            (n, rank, (0..n).map(|i| i.to_string()).collect())
        }
        ArrivalStrategy::Timestamps(ts_path) => {
            let ts = read_timestamps(ts_path)?;
            let stamps: Vec<Option<&str>> = tokens.iter().map(|t| ts.get(*t).map(String::as_str)).collect();
            missing_timestamps = stamps.iter().filter(|s| s.is_none()).count();
            let numeric: Option<Vec<f64>> = stamps
                .iter()
                .map(|s| s.map_or(Some(f64::NAN), |s| s.parse::<f64>().ok().filter(|v| v.is_finite())))
                .collect();
            let mut order: Vec<usize> = (0..tokens.len()).filter(|&i| stamps[i].is_some()).collect();
            // stable sorts, so equal timestamps keep first-appearance order
            match numeric {
                Some(keys) => order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b])),
                None => order.sort_by(|&a, &b| stamps[a].cmp(&stamps[b])),
            }
            order.extend((0..tokens.len()).filter(|&i| stamps[i].is_none()));
            let mut rank = vec![0; tokens.len()];
            for (arrival, &tok) in order.iter().enumerate() {
                rank[tok] = arrival;
            }
            (tokens.len(), rank, order.iter().map(|&i| tokens[i].to_string()).collect())
        }
    };

    let (graph, import) = EvolvingDigraph::from_edges(n, interned.iter().map(|&(a, b)| (rank[a], rank[b])))?;
    Ok(LoadedGraph { graph, order: ArrivalOrder { strategy: strategy.clone(), ids }, import, missing_timestamps })
}

/// Canonical text form: a `# nodes: N edges: M` header, then one
/// `from to` line per edge with arrival indices as ids, sorted.
pub fn serialize(graph: &EvolvingDigraph) -> String {
    let mut out = String::with_capacity(12 * graph.edge_count() + 64);
    let _ = writeln!(out, "# nodes: {} edges: {}", graph.n(), graph.edge_count());
    out.push_str("# from to\n");
    let mut targets = Vec::new();
    for u in graph.nodes() {
        targets.clear();
        targets.extend_from_slice(graph.out_neighbors(u));
        targets.sort_unstable();
        for v in &targets {
            let _ = writeln!(out, "{u} {v}");
        }
    }
    out
}

pub fn write_edge_list(path: &Path, graph: &EvolvingDigraph) -> Result<()> {
    std::fs::write(path, serialize(graph)).map_err(|e| Error::io(path, e))
}

/// Observed statistics the fitting and comparison steps draw on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservedStats {
    pub n: usize,
    pub m: usize,
    pub avg_in_degree: f64,
    pub in_degree_distribution: DegreeDistribution,
    pub out_degree_sequence: Vec<u32>,
    pub triangles: u64,
    pub h_index: usize,
}

pub fn observed_stats(graph: &EvolvingDigraph) -> ObservedStats {
    ObservedStats {
        n: graph.n(),
        m: graph.edge_count(),
        avg_in_degree: if graph.n() == 0 { 0.0 } else { graph.edge_count() as f64 / graph.n() as f64 },
        in_degree_distribution: in_degree_distribution(graph),
        out_degree_sequence: graph.out_degrees().into_iter().map(|d| d as u32).collect(),
        triangles: count_triangles(graph),
        h_index: network_h_index(graph),
    }
}
