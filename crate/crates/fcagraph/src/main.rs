use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fcagraph::{
    bench, bench_csv, k_sweep, load_csv, read_json, read_transactions, run_pipeline, save_csv,
    sweep_csv, synthetic_cases, to_json, write_graph, BenchCase, ClusterListDoc, ConceptsDoc,
    GraphFormat, HierarchyDoc, LabelColumn, MetricsDoc, MinSupport, PipelineConfig, Source, Sweep,
    SweepConfig,
};
use fcagraph_core::{
    build_hasse, evaluate, generate_synth, hac_ward, knn_binarize_with, mine_concepts, Dataset,
    Metric, SelfPolicy, SynthKind, SynthSpec,
};

/// Overlapping hierarchical clustering through k-NN binarization and
/// concept lattices.
#[derive(Parser)]
#[command(name = "fcagraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic labeled dataset as CSV
    Synth(SynthArgs),
    /// Turn a CSV dataset into a k-NN transaction file
    Binarize(BinarizeArgs),
    /// Mine the concepts of a transaction file as JSON
    Mine(MineArgs),
    /// Build the cluster graph of mined concepts
    Lattice(LatticeArgs),
    /// Dendrogram purity of a lattice or cluster-list JSON
    Eval(EvalArgs),
    /// Ward agglomerative clustering as a cluster-list JSON
    Hac(HacArgs),
    /// Run binarize, mine, lattice and (with labels) evaluation in one go
    Pipeline(PipelineArgs),
    /// Mean purity over a range of k, as CSV
    Ksweep(KsweepArgs),
    /// Comparison table over the synthetic datasets, as CSV
    Bench(BenchArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value = "synth1")]
    kind: SynthKind,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV file to write (stdout if omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A CSV file, or a generated dataset.
#[derive(Args)]
struct DataArgs {
    /// CSV dataset
    #[arg(long, conflicts_with = "synth", required_unless_present = "synth")]
    input: Option<PathBuf>,
    /// Column holding class labels (index or header name)
    #[arg(long, visible_alias = "labels")]
    label_column: Option<LabelColumn>,
    /// Generate this synthetic dataset instead of reading --input
    #[arg(long)]
    synth: Option<SynthKind>,
    /// Points to generate [default: 100]
    #[arg(long, conflicts_with = "input")]
    n: Option<usize>,
    /// Features to generate [default: 2]
    #[arg(long, conflicts_with = "input")]
    m: Option<usize>,
    /// PRNG seed (master seed for multi-trial commands)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl DataArgs {
    fn spec(&self, kind: SynthKind) -> SynthSpec {
        SynthSpec::new(kind, self.n.unwrap_or(100), self.m.unwrap_or(2), self.seed)
    }

    fn load(&self) -> Result<Dataset> {
        match (&self.input, self.synth) {
            (Some(path), _) => read_dataset(path, self.label_column.as_ref()),
            (None, Some(kind)) => Ok(generate_synth(&self.spec(kind))?),
            (None, None) => unreachable!("clap requires --input or --synth"),
        }
    }

    fn source(&self) -> Result<Source> {
        match (&self.input, self.synth) {
            (None, Some(kind)) => {
                let spec = self.spec(kind);
                spec.validate()?;
                Ok(Source::Synth(spec))
            }
            _ => Ok(Source::Table(self.load()?)),
        }
    }
}

#[derive(Args)]
struct KnnArgs {
    /// Neighbors per point (default n/2)
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "euclidean")]
    metric: Metric,
    /// Do not count a point among its own neighbors
    #[arg(long)]
    exclude_self: bool,
}

impl KnnArgs {
    fn policy(&self) -> SelfPolicy {
        policy(self.exclude_self)
    }
}

#[derive(Args)]
struct BinarizeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, visible_alias = "labels")]
    label_column: Option<LabelColumn>,
    #[command(flatten)]
    knn: KnnArgs,
    /// Transaction file to write (stdout if omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MineArgs {
    /// Transaction file
    #[arg(long)]
    input: PathBuf,
    /// Minimum extent size: a count, or a fraction of n
    #[arg(long, default_value = "0")]
    min_support: MinSupport,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LatticeArgs {
    /// Concepts JSON from `mine`
    #[arg(long)]
    input: PathBuf,
    /// The transaction file the concepts were mined from
    #[arg(long)]
    transactions: Option<PathBuf>,
    #[arg(long, value_enum, default_values = ["json", "dot"])]
    format: Vec<GraphFormat>,
    /// Output directory
    #[arg(long, default_value = ".")]
    output: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Lattice JSON or cluster-list JSON
    #[arg(long)]
    input: PathBuf,
    /// Labeled CSV dataset providing the ground truth
    #[arg(long)]
    data: PathBuf,
    #[arg(long, visible_alias = "labels")]
    label_column: LabelColumn,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct HacArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, visible_alias = "labels")]
    label_column: Option<LabelColumn>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    knn: KnnArgs,
    #[arg(long, default_value = "0")]
    min_support: MinSupport,
    #[arg(long, value_enum, default_values = ["json", "dot"])]
    format: Vec<GraphFormat>,
    /// Output directory
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct KsweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "10:90:10")]
    sweep: Sweep,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value = "0")]
    min_support: MinSupport,
    #[arg(long, default_value = "euclidean")]
    metric: Metric,
    #[arg(long)]
    exclude_self: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also run synth1_large (n=1000, m=500, k=500, min support 490)
    #[arg(long)]
    large: bool,
    /// Add a row for a labeled CSV dataset
    #[arg(long, requires = "label_column")]
    input: Option<PathBuf>,
    #[arg(long, visible_alias = "labels")]
    label_column: Option<LabelColumn>,
    /// k for the --input row (default n/2)
    #[arg(long)]
    k: Option<usize>,
    /// Min support for the --input row
    #[arg(long, default_value = "0")]
    min_support: MinSupport,
    #[arg(long, default_value = "euclidean")]
    metric: Metric,
    #[arg(long)]
    exclude_self: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn policy(exclude_self: bool) -> SelfPolicy {
    if exclude_self {
        SelfPolicy::Exclude
    } else {
        SelfPolicy::Include
    }
}

fn read_dataset(path: &Path, label: Option<&LabelColumn>) -> Result<Dataset> {
    load_csv(path, label).with_context(|| format!("reading {}", path.display()))
}

/// Writes to `path`, or to stdout when there is none.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(a) => {
            let data = generate_synth(&SynthSpec::new(a.kind, a.n, a.m, a.seed))?;
            match &a.output {
                Some(p) => save_csv(&data, p)?,
                None => fcagraph::write_csv(&data, std::io::stdout().lock())?,
            }
        }
        Command::Binarize(a) => {
            let data = read_dataset(&a.input, a.label_column.as_ref())?;
            let k = a.knn.k.unwrap_or(data.len() / 2);
            let db = knn_binarize_with(&data, k, a.knn.metric, a.knn.policy())?;
            emit(a.output.as_deref(), &fcagraph::format_transactions(&db))?;
        }
        Command::Mine(a) => {
            let db = read_transactions(&a.input)?;
            let concepts = mine_concepts(&db, a.min_support.resolve(db.len()))?;
            emit(
                a.output.as_deref(),
                &to_json(&ConceptsDoc::from(&concepts))?,
            )?;
        }
        Command::Lattice(a) => {
            let doc: ConceptsDoc = read_json(&a.input)?;
            let mut concepts = doc.to_concept_set()?;
            if let Some(path) = &a.transactions {
                concepts = concepts.with_context(&read_transactions(path)?)?;
            }
            let graph = build_hasse(&concepts)?;
            std::fs::create_dir_all(&a.output)
                .with_context(|| format!("creating {}", a.output.display()))?;
            write_graph(&graph, &a.output, &a.format)?;
        }
        Command::Eval(a) => {
            let doc: HierarchyDoc = read_json(&a.input)?;
            let data = read_dataset(&a.data, Some(&a.label_column))?;
            let report = evaluate(&doc.to_hierarchy()?, &data.partition()?)?;
            let text = serde_json::to_string_pretty(&MetricsDoc::from(report))? + "\n";
            emit(a.output.as_deref(), &text)?;
        }
        Command::Hac(a) => {
            let data = read_dataset(&a.input, a.label_column.as_ref())?;
            let d = hac_ward(&data)?;
            emit(a.output.as_deref(), &to_json(&ClusterListDoc::from(&d))?)?;
        }
        Command::Pipeline(a) => {
            let data = a.data.load()?;
            let cfg = PipelineConfig {
                k: a.knn.k,
                min_support: a.min_support,
                metric: a.knn.metric,
                self_policy: a.knn.policy(),
            };
            let result = run_pipeline(&data, &cfg)?;
            result.write_outputs(&a.output, &a.format)?;
            println!("{}", serde_json::to_string(&result.metrics())?);
        }
        Command::Ksweep(a) => {
            let source = a.data.source()?;
            let cfg = SweepConfig {
                ks: a.sweep.values().to_vec(),
                trials: a.trials,
                seed: a.data.seed,
                min_support: a.min_support,
                metric: a.metric,
                self_policy: policy(a.exclude_self),
            };
            let rows = k_sweep(&source, &cfg)?;
            for r in rows.iter().filter(|r| r.near_n) {
                eprintln!(
                    "warning: k = {} is close to n = {}; neighborhoods cover almost every point",
                    r.k,
                    source.num_points()
                );
            }
            emit(a.output.as_deref(), &sweep_csv(&rows))?;
        }
        Command::Bench(a) => {
            let mut cases = synthetic_cases(a.large);
            if let Some(path) = &a.input {
                let name = path
                    .file_stem()
                    .map_or_else(|| "input".to_string(), |s| s.to_string_lossy().into_owned());
                cases.push(BenchCase {
                    name,
                    source: Source::Table(read_dataset(path, a.label_column.as_ref())?),
                    k: a.k,
                    min_support: a.min_support,
                });
            }
            let rows = bench(&cases, a.trials, a.seed, a.metric, policy(a.exclude_self))?;
            emit(a.output.as_deref(), &bench_csv(&rows)?)?;
        }
    }
    Ok(())
}

fn fail(message: String) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": message }));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.render().to_string();
            return fail(
                text.lines()
                    .next()
                    .unwrap_or("")
                    .trim_start_matches("error: ")
                    .to_string(),
            );
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => fail(format!("{err:#}")),
    }
}
