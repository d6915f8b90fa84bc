//! The end-to-end method (binarize, mine, build the graph, evaluate) and the
//! experiment drivers built on it.

use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use fcagraph_core::{
    build_hasse, dendrogram_clusters, evaluate, generate_synth, hac_ward, knn_binarize_with,
    mine_concepts, ClusterHierarchy, ConceptSet, Dataset, Dendrogram, LatticeGraph, Metric,
    PurityReport, SelfPolicy, SynthKind, SynthSpec, TransactionDatabase,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{io_error, Error, Result};
use crate::formats::{lattice_dot, to_json, write_json, LatticeDoc, MetricsDoc};

/// Minimum cluster size, either absolute or as a fraction of `n` (rounded up).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinSupport {
    Count(usize),
    Fraction(f64),
}

impl Default for MinSupport {
    fn default() -> Self {
        MinSupport::Count(0)
    }
}

impl MinSupport {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            MinSupport::Count(c) => c,
            MinSupport::Fraction(f) => (f * n as f64).ceil() as usize,
        }
    }
}

impl FromStr for MinSupport {
    type Err = Error;

    /// `"490"` is a count; `"0.5"` is a fraction of `n`.
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(c) = s.parse() {
            return Ok(MinSupport::Count(c));
        }
        match s.parse::<f64>() {
            Ok(f) if (0.0..=1.0).contains(&f) => Ok(MinSupport::Fraction(f)),
            _ => Err(Error::MinSupport(s.to_string())),
        }
    }
}

/// An ascending list of `k` values written `FROM:TO:STEP` (or a single `K`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep(Vec<usize>);

impl Sweep {
    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

impl FromStr for Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Sweep(s.to_string());
        let parts: Vec<usize> = s
            .split(':')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let (from, to, step) = match parts[..] {
            [k] => (k, k, 1),
            [from, to, step] => (from, to, step),
            _ => return Err(bad()),
        };
        if from == 0 || from > to || step == 0 {
            return Err(bad());
        }
        Ok(Sweep((from..=to).step_by(step).collect()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

/// Parameters of one run of the method.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Neighbors per point; `None` means `n / 2`.
    pub k: Option<usize>,
    pub min_support: MinSupport,
    pub metric: Metric,
    pub self_policy: SelfPolicy,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            k: None,
            min_support: MinSupport::default(),
            metric: Metric::Euclidean,
            self_policy: SelfPolicy::Include,
        }
    }
}

impl PipelineConfig {
    pub fn resolved_k(&self, n: usize) -> usize {
        self.k.unwrap_or(n / 2)
    }
}

/// True when `k` is within 5% of `n`, where neighborhoods cover nearly the
/// whole dataset and purity is known to degrade.
pub fn k_near_n(k: usize, n: usize) -> bool {
    20 * k >= 19 * n
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timings {
    pub binarize_s: f64,
    pub mine_s: f64,
    pub hasse_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hac_s: Option<f64>,
}

/// Everything one pipeline run produced.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub min_support: usize,
    pub metric: Metric,
    pub self_policy: SelfPolicy,
    pub db: TransactionDatabase,
    pub concepts: ConceptSet,
    pub graph: LatticeGraph,
    /// Purity of the lattice clusters; `None` for unlabeled data.
    pub ours: Option<PurityReport>,
    pub hac: Option<(Dendrogram, PurityReport)>,
    pub timings: Timings,
}

/// The deterministic part of a run summary. Timings are kept separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineMetrics {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub min_support: usize,
    pub metric: String,
    pub include_self: bool,
    pub num_concepts: usize,
    pub num_edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ours: Option<MetricsDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hac: Option<MetricsDoc>,
}

pub fn run_pipeline(data: &Dataset, cfg: &PipelineConfig) -> Result<PipelineRun> {
    let n = data.len();
    let k = cfg.resolved_k(n);
    let min_support = cfg.min_support.resolve(n);

    let t = Instant::now();
    let db = knn_binarize_with(data, k, cfg.metric, cfg.self_policy)?;
    let binarize_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let concepts = mine_concepts(&db, min_support)?;
    let mine_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let graph = build_hasse(&concepts)?;
    let hasse_s = t.elapsed().as_secs_f64();

    let (mut ours, mut hac, mut eval_s, mut hac_s) = (None, None, None, None);
    if data.labels().is_some() {
        let truth = data.partition()?;
        let t = Instant::now();
        ours = Some(evaluate(&graph.hierarchy()?, &truth)?);
        eval_s = Some(t.elapsed().as_secs_f64());

        let t = Instant::now();
        let dendrogram = hac_ward(data)?;
        let report = evaluate(&dendrogram_clusters(&dendrogram), &truth)?;
        hac = Some((dendrogram, report));
        hac_s = Some(t.elapsed().as_secs_f64());
    }

    Ok(PipelineRun {
        n,
        m: data.dim(),
        k,
        min_support,
        metric: cfg.metric,
        self_policy: cfg.self_policy,
        db,
        concepts,
        graph,
        ours,
        hac,
        timings: Timings {
            binarize_s,
            mine_s,
            hasse_s,
            eval_s,
            hac_s,
        },
    })
}

impl PipelineRun {
    pub fn metrics(&self) -> PipelineMetrics {
        PipelineMetrics {
            n: self.n,
            m: self.m,
            k: self.k,
            min_support: self.min_support,
            metric: self.metric.name().to_string(),
            include_self: self.self_policy == SelfPolicy::Include,
            num_concepts: self.concepts.len(),
            num_edges: self.graph.edges().len(),
            ours: self.ours.map(MetricsDoc::from),
            hac: self.hac.as_ref().map(|(_, r)| MetricsDoc::from(*r)),
        }
    }

    /// Writes `lattice.json` and/or `lattice.dot`, `metrics.json` and
    /// `timings.json` into `dir`, creating it if needed.
    pub fn write_outputs(&self, dir: impl AsRef<Path>, formats: &[GraphFormat]) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(io_error(dir))?;
        write_graph(&self.graph, dir, formats)?;
        let path = dir.join("metrics.json");
        let text = serde_json::to_string_pretty(&self.metrics())? + "\n";
        std::fs::write(&path, text).map_err(io_error(&path))?;
        write_json(&self.timings, dir.join("timings.json"))
    }
}

/// Writes `lattice.json` / `lattice.dot` into `dir`.
pub fn write_graph(g: &LatticeGraph, dir: &Path, formats: &[GraphFormat]) -> Result<()> {
    for format in formats {
        let (name, text) = match format {
            GraphFormat::Json => ("lattice.json", to_json(&LatticeDoc::from(g))?),
            GraphFormat::Dot => ("lattice.dot", lattice_dot(g)),
        };
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(io_error(&path))?;
    }
    Ok(())
}

/// Purity of the concept extents, without building the graph (DP only
/// depends on the clusters). `num_clusters` is the concept count.
pub fn lattice_purity(
    data: &Dataset,
    k: usize,
    min_support: usize,
    metric: Metric,
    self_policy: SelfPolicy,
) -> Result<PurityReport> {
    let db = knn_binarize_with(data, k, metric, self_policy)?;
    let concepts = mine_concepts(&db, min_support)?;
    let extents = concepts
        .into_concepts()
        .into_iter()
        .map(|c| c.extent)
        .collect();
    let hierarchy = ClusterHierarchy::new(data.len(), extents)?;
    Ok(evaluate(&hierarchy, &data.partition()?)?)
}

pub fn hac_purity(data: &Dataset) -> Result<PurityReport> {
    let d = hac_ward(data)?;
    Ok(evaluate(&dendrogram_clusters(&d), &data.partition()?)?)
}

/// Where trial datasets come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// Trial `t` draws with the master seed plus `t`; the `SynthSpec` seed
    /// is ignored.
    Synth(SynthSpec),
    /// The same dataset for every trial.
    Table(Dataset),
}

impl Source {
    pub fn trial(&self, master_seed: u64, t: usize) -> Result<Dataset> {
        match self {
            Source::Synth(spec) => {
                let spec = SynthSpec::new(
                    spec.kind,
                    spec.n,
                    spec.m,
                    master_seed.wrapping_add(t as u64),
                );
                Ok(generate_synth(&spec)?)
            }
            Source::Table(ds) => Ok(ds.clone()),
        }
    }

    pub fn num_points(&self) -> usize {
        match self {
            Source::Synth(spec) => spec.n,
            Source::Table(ds) => ds.len(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Source::Synth(spec) => spec.m,
            Source::Table(ds) => ds.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub ks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub min_support: MinSupport,
    pub metric: Metric,
    pub self_policy: SelfPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub k: usize,
    pub dp_ours: f64,
    pub dp_hac: f64,
    /// `k` is close to `n`; see [`k_near_n`].
    pub near_n: bool,
}

/// Mean purity of the method for each `k`, next to the (k-independent) HAC
/// purity. Trials run in parallel and are averaged in trial order.
pub fn k_sweep(source: &Source, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let n = source.num_points();
    if let Some(&k) = cfg.ks.iter().find(|&&k| k >= n) {
        return Err(Error::SweepTooLarge { k, n });
    }
    if cfg.trials == 0 {
        return Err(Error::NoTrials);
    }
    if cfg.ks.is_empty() {
        return Err(Error::Sweep(String::new()));
    }
    let per_trial: Vec<(Vec<f64>, f64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let data = source.trial(cfg.seed, t)?;
            let min_support = cfg.min_support.resolve(n);
            let ours = cfg
                .ks
                .iter()
                .map(|&k| {
                    Ok(lattice_purity(&data, k, min_support, cfg.metric, cfg.self_policy)?.dp)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok((ours, hac_purity(&data)?.dp))
        })
        .collect::<Result<_>>()?;

    let trials = cfg.trials as f64;
    let dp_hac = per_trial.iter().map(|(_, h)| h).sum::<f64>() / trials;
    Ok(cfg
        .ks
        .iter()
        .enumerate()
        .map(|(i, &k)| SweepRow {
            k,
            dp_ours: per_trial.iter().map(|(o, _)| o[i]).sum::<f64>() / trials,
            dp_hac,
            near_n: k_near_n(k, n),
        })
        .collect())
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("k,dp_ours,dp_hac\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.k, r.dp_ours, r.dp_hac));
    }
    out
}

/// One row of the comparison table.
#[derive(Debug, Clone)]
pub struct BenchCase {
    pub name: String,
    pub source: Source,
    pub k: Option<usize>,
    pub min_support: MinSupport,
}

/// The synthetic rows of the comparison table; `synth1_large` is only
/// included on request since it takes noticeably longer.
pub fn synthetic_cases(large: bool) -> Vec<BenchCase> {
    let mut cases: Vec<BenchCase> = [SynthKind::Synth1, SynthKind::Synth2, SynthKind::Synth3]
        .into_iter()
        .map(|kind| BenchCase {
            name: kind.name().to_string(),
            source: Source::Synth(SynthSpec::new(kind, 100, 2, 0)),
            k: None,
            min_support: MinSupport::Count(0),
        })
        .collect();
    if large {
        cases.push(BenchCase {
            name: "synth1_large".into(),
            source: Source::Synth(SynthSpec::new(SynthKind::Synth1, 1000, 500, 0)),
            k: Some(500),
            min_support: MinSupport::Count(490),
        });
    }
    cases
}

/// Trial means for one [`BenchCase`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub dataset: String,
    pub n: usize,
    pub m: usize,
    /// Number of ground-truth classes.
    pub c: usize,
    pub k: usize,
    pub min_support: usize,
    pub trials: usize,
    pub clusters_ours: f64,
    pub clusters_hac: f64,
    pub dp_ours: f64,
    pub dp_hac: f64,
    pub seconds_ours: f64,
    pub seconds_hac: f64,
}

struct TrialStats {
    classes: usize,
    clusters_ours: usize,
    clusters_hac: usize,
    dp_ours: f64,
    dp_hac: f64,
    seconds_ours: f64,
    seconds_hac: f64,
}

fn bench_trial(
    data: &Dataset,
    k: usize,
    min_support: usize,
    metric: Metric,
    policy: SelfPolicy,
) -> Result<TrialStats> {
    let t = Instant::now();
    let ours = lattice_purity(data, k, min_support, metric, policy)?;
    let seconds_ours = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let hac = hac_purity(data)?;
    let seconds_hac = t.elapsed().as_secs_f64();
    Ok(TrialStats {
        classes: data.partition()?.classes().len(),
        clusters_ours: ours.num_clusters,
        clusters_hac: hac.num_clusters,
        dp_ours: ours.dp,
        dp_hac: hac.dp,
        seconds_ours,
        seconds_hac,
    })
}

/// Runs `trials` seeded trials per case. Trials run in parallel, so the
/// per-trial timings include contention; set `RAYON_NUM_THREADS=1` for
/// cleaner wall-clock numbers.
pub fn bench(
    cases: &[BenchCase],
    trials: usize,
    seed: u64,
    metric: Metric,
    policy: SelfPolicy,
) -> Result<Vec<BenchRow>> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    cases
        .iter()
        .map(|case| {
            let n = case.source.num_points();
            let k = case.k.unwrap_or(n / 2);
            let min_support = case.min_support.resolve(n);
            let stats: Vec<TrialStats> = (0..trials)
                .into_par_iter()
                .map(|t| bench_trial(&case.source.trial(seed, t)?, k, min_support, metric, policy))
                .collect::<Result<_>>()?;
            let mean =
                |f: &dyn Fn(&TrialStats) -> f64| stats.iter().map(f).sum::<f64>() / trials as f64;
            Ok(BenchRow {
                dataset: case.name.clone(),
                n,
                m: case.source.dim(),
                c: stats.iter().map(|s| s.classes).max().unwrap_or(0),
                k,
                min_support,
                trials,
                clusters_ours: mean(&|s| s.clusters_ours as f64),
                clusters_hac: mean(&|s| s.clusters_hac as f64),
                dp_ours: mean(&|s| s.dp_ours),
                dp_hac: mean(&|s| s.dp_hac),
                seconds_ours: mean(&|s| s.seconds_ours),
                seconds_hac: mean(&|s| s.seconds_hac),
            })
        })
        .collect()
}

pub fn bench_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
