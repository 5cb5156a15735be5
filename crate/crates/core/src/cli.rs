//! Command-line front end.
//!
//! Every subcommand reads the same option set. Options may come from flags or
//! from a JSON file passed with `--config` whose keys are the flag names with
//! underscores (`snapshot_step`, `o_grid`, ...); flags win over the file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::fitting::{self, FitConfig, FitResult};
use crate::graph::{EvolvingDigraph, SnapshotSchedule};
use crate::ingest::{self, ArrivalStrategy, LoadedGraph};
use crate::meanfield::{self, Quantity};
use crate::metrics::{
    self, compare, default_o_grid, summarize, DegreeDistribution, DegreeKind, DiameterOptions, EvalOptions,
    EvaluationReport, RatioStats,
};
use crate::models::{derive_seed, grow, ModelKind, ModelParams};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "reforcite", version, about = "Simulate, measure and fit growing citation networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grow networks and write edge lists, histograms and diameters.
    Simulate(Options),
    /// Print closed-form curves as CSV.
    Predict(Options),
    /// Fit model parameters to an edge list.
    Fit(Options),
    /// Compare an edge list with simulated networks.
    Compare(Options),
    /// Observed statistics of an edge list.
    Stats(Options),
}

#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// JSON file with default values for any of these options.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Forest Fire forward burning probability.
    #[arg(long)]
    pub pa: Option<f64>,
    /// Forest Fire backward burning ratio.
    #[arg(long)]
    pub b: Option<f64>,
    /// Citations per node for preferential attachment.
    #[arg(long)]
    pub m: Option<usize>,
    /// CPT out-degree sequence: one integer per line.
    #[arg(long)]
    pub out_degree_seq: Option<PathBuf>,

    /// Number of nodes.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[arg(long)]
    pub snapshot_step: Option<usize>,
    #[arg(long)]
    pub sample_sources: Option<usize>,
    /// Comma-separated node fractions for the obsolescence curve.
    #[arg(long, value_delimiter = ',')]
    pub o_grid: Option<Vec<f64>>,
    /// Diameter by BFS from every node instead of sampled double sweeps.
    #[arg(long)]
    #[serde(default)]
    pub exact_diameter: bool,
    /// Output directory (not recorded in run metadata).
    #[arg(long)]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,

    /// Edge list of the observed network.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// first-appearance | given-file | timestamps:<file>
    #[arg(long)]
    pub order: Option<String>,
    /// Edge list to use instead of simulating (compare).
    #[arg(long)]
    pub simulated: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub quantity: Option<Quantity>,
    /// Smallest abscissa for predict.
    #[arg(long)]
    pub t_min: Option<f64>,
    /// Largest abscissa for predict (defaults to --n).
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of log-spaced abscissae for predict.
    #[arg(long)]
    pub points: Option<usize>,

    #[arg(long)]
    pub grid_step: Option<f64>,
    /// RefOrCite2 fit: p1 + p2. Solved from the observed average in-degree
    /// when absent.
    #[arg(long)]
    pub p_sum: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub beta_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub pa_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub b_grid: Option<Vec<f64>>,
}

macro_rules! prefer_flags {
    ($flags:expr, $file:expr, [$($f:ident),* $(,)?]) => {
        Options {
            config: $flags.config,
            exact_diameter: $flags.exact_diameter || $file.exact_diameter,
            $($f: $flags.$f.or($file.$f),)*
        }
    };
}

impl Options {
    /// Fills unset flags from the `--config` file, if any.
    pub fn resolve(self) -> Result<Options> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let file: Options = serde_json::from_str(&text)
            .map_err(|e| Error::Data { path: path.clone(), msg: format!("invalid config: {e}") })?;
        Ok(prefer_flags!(self, file, [
            model, p, p1, p2, alpha, beta, pa, b, m, out_degree_seq, n, seed, realizations, snapshot_step,
            sample_sources, o_grid, out, data, order, simulated, quantity, t_min, t_max, points, grid_step,
            p_sum, alpha_grid, beta_grid, pa_grid, b_grid,
        ]))
    }

    fn model_kind(&self) -> Result<ModelKind> {
        self.model.ok_or_else(|| Error::param("model", "is required"))
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn strategy(&self) -> Result<ArrivalStrategy> {
        self.order.as_deref().unwrap_or("first-appearance").parse()
    }

    fn eval_options(&self, seed: u64) -> Result<EvalOptions> {
        let schedule = match self.snapshot_step {
            Some(s) => SnapshotSchedule::new(s)?,
            None => SnapshotSchedule::default(),
        };
        Ok(EvalOptions {
            diameter: DiameterOptions {
                schedule,
                sample_sources: self.sample_sources.unwrap_or(10),
                exact: self.exact_diameter,
                seed,
            },
            o_grid: self.o_grid.clone().unwrap_or_else(|| default_o_grid(100)),
            obsolescence_kind: DegreeKind::In,
        })
    }

    /// Model parameters from the flags. `observed_seq` supplies the CPT
    /// out-degree sequence when no sequence file is given.
    fn model_params(&self, observed_seq: Option<&[u32]>) -> Result<ModelParams> {
        fn need<T: Copy>(v: Option<T>, name: &'static str, kind: ModelKind) -> Result<T> {
            v.ok_or_else(|| Error::param(name, format!("is required for model {kind:?}")))
        }
        let kind = self.model_kind()?;
        let params = match kind {
            ModelKind::RefOrCite1 => ModelParams::RefOrCite1 { p: need(self.p, "p", kind)? },
            ModelKind::Cp => ModelParams::Cp { p: need(self.p, "p", kind)? },
            ModelKind::RefOrCite2 => {
                ModelParams::RefOrCite2 { p1: need(self.p1, "p1", kind)?, p2: need(self.p2, "p2", kind)? }
            }
            ModelKind::Cpt => ModelParams::Cpt {
                alpha: need(self.alpha, "alpha", kind)?,
                beta: need(self.beta, "beta", kind)?,
                out_degree_sequence: self.cpt_sequence(observed_seq)?,
            },
            ModelKind::ForestFire => ModelParams::ForestFire { p_a: need(self.pa, "pa", kind)?, b: need(self.b, "b", kind)? },
            ModelKind::Pa => ModelParams::Pa { m: need(self.m, "m", kind)? },
        };
        params.validate()?;
        Ok(params)
    }

    fn cpt_sequence(&self, observed: Option<&[u32]>) -> Result<Vec<u32>> {
        if let Some(path) = &self.out_degree_seq {
            return read_sequence(path);
        }
        match observed {
            Some(s) => Ok(s.to_vec()),
            None => Err(Error::param("out-degree-seq", "CPT needs a sequence file or --data")),
        }
    }

    fn load_data(&self) -> Result<LoadedGraph> {
        let path = self.data.as_ref().ok_or_else(|| Error::param("data", "is required"))?;
        let loaded = ingest::load_graph(path, &self.strategy()?)?;
        report_import(path, &loaded);
        Ok(loaded)
    }
}

fn read_sequence(path: &Path) -> Result<Vec<u32>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.trim().parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                msg: format!("`{}` is not a non-negative integer", l.trim()),
            })
        })
        .collect()
}

fn report_import(path: &Path, loaded: &LoadedGraph) {
    let i = &loaded.import;
    let p = path.display();
    if i.duplicates > 0 {
        eprintln!("warning: {p}: collapsed {} duplicate edges", i.duplicates);
    }
    if i.self_loops > 0 {
        eprintln!("warning: {p}: dropped {} self-loops", i.self_loops);
    }
    if i.forward > 0 {
        eprintln!("warning: {p}: {} edges point to later arrivals", i.forward);
    }
    if loaded.missing_timestamps > 0 {
        eprintln!("warning: {p}: {} ids have no timestamp and were placed last", loaded.missing_timestamps);
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `json` to `<out>/<name>` when an output directory is set, and to
/// stdout otherwise.
fn emit(opts: &Options, name: &str, text: &str) -> Result<()> {
    match &opts.out {
        Some(dir) => {
            create_dir(dir)?;
            write(&dir.join(name), text)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(o) => simulate(&o.resolve()?),
        Command::Predict(o) => predict(&o.resolve()?),
        Command::Fit(o) => fit(&o.resolve()?),
        Command::Compare(o) => compare_cmd(&o.resolve()?),
        Command::Stats(o) => stats(&o.resolve()?),
    }
}

#[derive(Serialize)]
struct RunMetadata<'a> {
    command: &'a str,
    version: &'a str,
    options: &'a Options,
    params: &'a ModelParams,
    n: usize,
    seed: u64,
    realization: usize,
    edges: usize,
    triangles: u64,
    avg_diameter: f64,
    h_index: usize,
}

fn simulate(opts: &Options) -> Result<()> {
    let params = opts.model_params(None)?;
    let n = match (&params, opts.n) {
        (_, Some(n)) => n,
        (ModelParams::Cpt { out_degree_sequence, .. }, None) => out_degree_sequence.len(),
        _ => return Err(Error::param("n", "is required")),
    };
    let realizations = opts.realizations.unwrap_or(1);
    if realizations == 0 {
        return Err(Error::param("realizations", "must be at least 1"));
    }
    let out = opts.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let seed = opts.seed();
    (0..realizations).into_par_iter().try_for_each(|k| {
        let (dir, s) = if realizations == 1 {
            (out.clone(), seed)
        } else {
            (out.join(format!("realization_{k}")), derive_seed(seed, &[k as u64]))
        };
        let graph = grow(&params, n, s)?;
        let summary = summarize(&graph, &opts.eval_options(s)?)?;
        create_dir(&dir)?;
        ingest::write_edge_list(&dir.join("edges.txt"), &graph)?;
        write(&dir.join("degree_hist.csv"), histogram_csv(&graph))?;
        let mut diam = String::from("nodes,diameter\n");
        for (s, d) in &summary.snapshot_diameters {
            let _ = writeln!(diam, "{s},{d}");
        }
        write(&dir.join("diameters.csv"), diam)?;
        if let Some(curve) = &summary.obsolescence {
            write(&dir.join("obsolescence.csv"), curve_csv(&[("simulated", curve)]))?;
        }
        let meta = RunMetadata {
            command: "simulate",
            version: VERSION,
            options: opts,
            params: &params,
            n,
            seed: s,
            realization: k,
            edges: graph.edge_count(),
            triangles: summary.triangles,
            avg_diameter: summary.avg_diameter,
            h_index: summary.h_index,
        };
        write(&dir.join("run.json"), to_json(&meta)?)
    })
}

fn histogram_csv(graph: &EvolvingDigraph) -> String {
    let in_d = DegreeDistribution::of(graph, DegreeKind::In);
    let tot = DegreeDistribution::of(graph, DegreeKind::Total);
    let mut out = String::from("kind,degree,count\n");
    for (label, d) in [("in", &in_d), ("total", &tot)] {
        for (k, c) in d.rows() {
            let _ = writeln!(out, "{label},{k},{c}");
        }
    }
    out
}

fn curve_csv(curves: &[(&str, &metrics::ObsolescenceCurve)]) -> String {
    let mut out = String::from("series,o,r\n");
    for (label, c) in curves {
        for (o, r) in &c.points {
            let _ = writeln!(out, "{label},{o},{r}");
        }
    }
    out
}

fn predict(opts: &Options) -> Result<()> {
    let params = opts.model_params(None)?;
    let quantity = opts.quantity.unwrap_or(Quantity::AvgDegree);
    let default_min = match quantity {
        Quantity::RescaledCcdf => 1.0,
        Quantity::Triangles => 4.0,
        _ => 2.0,
    };
    let lo = opts.t_min.unwrap_or(default_min);
    let hi = match (opts.t_max, opts.n) {
        (Some(t), _) => t,
        (None, Some(n)) => n as f64,
        (None, None) if quantity == Quantity::RescaledCcdf => 100.0,
        _ => return Err(Error::param("t-max", "is required (or give --n)")),
    };
    let points = opts.points.unwrap_or(50);
    if !(lo > 0.0 && hi >= lo) || points == 0 {
        return Err(Error::param("t-range", format!("need 0 < t-min <= t-max and points >= 1, got [{lo}, {hi}] x {points}")));
    }
    let header = if quantity == Quantity::RescaledCcdf { "x,ccdf\n" } else { "t,value\n" };
    let mut out = String::from(header);
    for i in 0..points {
        let t = if points == 1 { lo } else { (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (points - 1) as f64).exp() };
        let pred = meanfield::predict(quantity, &params, t)?;
        let _ = writeln!(out, "{},{}", pred.t, pred.value);
    }
    emit(opts, "prediction.csv", &out)
}

fn fit(opts: &Options) -> Result<()> {
    let loaded = opts.load_data()?;
    let stats = ingest::observed_stats(&loaded.graph);
    let kind = opts.model_kind()?;
    let mut config = FitConfig::new(stats.in_degree_distribution.clone());
    config.n = opts.n.unwrap_or(stats.n);
    config.seed = opts.seed();
    if let Some(step) = opts.grid_step {
        config.grid_step = step;
    }
    if let Some(r) = opts.realizations {
        config.realizations_per_point = r;
    }
    let grid = |g: &Option<Vec<f64>>, name: &'static str| -> Result<Vec<f64>> {
        g.clone().ok_or_else(|| Error::param(name, format!("is required to fit {kind:?}")))
    };
    let mut extra = serde_json::Map::new();
    let result: FitResult = match kind {
        ModelKind::RefOrCite1 | ModelKind::Cp => fitting::fit_single_parameter(kind, &config)?,
        ModelKind::RefOrCite2 => {
            let c = match opts.p_sum {
                Some(c) => c,
                None => fitting::solve_p_sum(stats.avg_in_degree, stats.n as f64)?,
            };
            extra.insert("p_sum".into(), json!(c));
            fitting::fit_reforcite2(&config, c)?
        }
        ModelKind::Cpt => {
            let seq = opts.cpt_sequence(Some(&stats.out_degree_sequence))?;
            fitting::fit_cpt(&config, &grid(&opts.alpha_grid, "alpha-grid")?, &grid(&opts.beta_grid, "beta-grid")?, &seq)?
        }
        ModelKind::ForestFire => {
            fitting::fit_forest_fire(&config, &grid(&opts.pa_grid, "pa-grid")?, &grid(&opts.b_grid, "b-grid")?)?
        }
        ModelKind::Pa => return Err(Error::param("model", "preferential attachment has no probability to fit")),
    };
    let mut best = result.model.clone();
    if let ModelParams::Cpt { ref mut out_degree_sequence, .. } = best {
        out_degree_sequence.clear();
    }
    let report = json!({
        "version": VERSION,
        "options": opts,
        "n": config.n,
        "seed": config.seed,
        "grid_step": config.grid_step,
        "realizations_per_point": config.realizations_per_point,
        "model": best,
        "l1": result.l1,
        "extra": extra,
    });
    if let Some(dir) = &opts.out {
        create_dir(dir)?;
        write(&dir.join("grid_trace.csv"), result.trace_csv())?;
    }
    emit(opts, "fit.json", &to_json(&report)?)
}

#[derive(Serialize)]
struct CompareStats {
    l1_error: Option<RatioStats>,
    triangle_ratio: Option<RatioStats>,
    diameter_ratio: Option<RatioStats>,
    h_index_ratio: Option<RatioStats>,
}

fn compare_cmd(opts: &Options) -> Result<()> {
    let loaded = opts.load_data()?;
    let graph = &loaded.graph;
    let seed = opts.seed();
    let observed = summarize(graph, &opts.eval_options(seed)?)?;

    let (params, reports): (Option<ModelParams>, Vec<EvaluationReport>) = match &opts.simulated {
        Some(path) => {
            let sim = ingest::load_graph(path, &ArrivalStrategy::GivenFile)?;
            let s = summarize(&sim.graph, &opts.eval_options(seed)?)?;
            (None, vec![compare(&observed, &s)?])
        }
        None => {
            let seq = graph.out_degrees().into_iter().map(|d| d as u32).collect::<Vec<_>>();
            let params = opts.model_params(Some(&seq))?;
            let realizations = opts.realizations.unwrap_or(30);
            if realizations == 0 {
                return Err(Error::param("realizations", "must be at least 1"));
            }
            let n = opts.n.unwrap_or(graph.n());
            let reports = (0..realizations)
                .into_par_iter()
                .map(|r| {
                    let s = derive_seed(seed, &[r as u64]);
                    let sim = grow(&params, n, s)?;
                    compare(&observed, &summarize(&sim, &opts.eval_options(s)?)?)
                })
                .collect::<Result<Vec<_>>>()?;
            (Some(params), reports)
        }
    };

    let stats = CompareStats {
        l1_error: RatioStats::of(reports.iter().map(|r| r.l1_error)),
        triangle_ratio: RatioStats::of(reports.iter().filter_map(|r| r.triangle_ratio)),
        diameter_ratio: RatioStats::of(reports.iter().filter_map(|r| r.diameter_ratio)),
        h_index_ratio: RatioStats::of(reports.iter().filter_map(|r| r.h_index_ratio)),
    };
    let mut params = params;
    if let Some(ModelParams::Cpt { ref mut out_degree_sequence, .. }) = params {
        out_degree_sequence.clear();
    }
    let report = json!({
        "version": VERSION,
        "options": opts,
        "model": params,
        "seed": seed,
        "observed": {
            "n": observed.n,
            "m": observed.m,
            "triangles": observed.triangles,
            "avg_diameter": observed.avg_diameter,
            "h_index": observed.h_index,
            "obsolescence": observed.obsolescence,
        },
        "summary": stats,
        "realizations": reports,
    });
    if let (Some(dir), Some(obs)) = (&opts.out, &observed.obsolescence) {
        create_dir(dir)?;
        let mut curves = vec![("observed", obs)];
        if let Some(sim) = reports.first().and_then(|r| r.obsolescence.as_ref()) {
            curves.push(("simulated", sim));
        }
        write(&dir.join("obsolescence.csv"), curve_csv(&curves))?;
    }
    emit(opts, "compare.json", &to_json(&report)?)
}

fn stats(opts: &Options) -> Result<()> {
    let loaded = opts.load_data()?;
    let stats = ingest::observed_stats(&loaded.graph);
    if let Some(dir) = &opts.out {
        create_dir(dir)?;
        ingest::write_edge_list(&dir.join("edges.txt"), &loaded.graph)?;
        write(&dir.join("arrival_order.txt"), loaded.order.ids.join("\n") + "\n")?;
        let seq: String = stats.out_degree_sequence.iter().map(|d| format!("{d}\n")).collect();
        write(&dir.join("out_degree_sequence.txt"), seq)?;
    }
    let report = json!({
        "version": VERSION,
        "n": stats.n,
        "m": stats.m,
        "avg_in_degree": stats.avg_in_degree,
        "triangles": stats.triangles,
        "h_index": stats.h_index,
        "in_degree_distribution": stats.in_degree_distribution,
        "import": loaded.import,
        "missing_timestamps": loaded.missing_timestamps,
    });
    emit(opts, "stats.json", &to_json(&report)?)
}
