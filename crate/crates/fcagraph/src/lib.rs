//! File formats, experiment drivers and the command-line front end for
//! `fcagraph-core`.

pub mod error;
pub mod formats;
pub mod pipeline;
pub mod table;
pub mod transactions;

pub use error::{Error, Result};
pub use formats::{
    lattice_dot, read_json, to_json, write_json, ClusterListDoc, ConceptDoc, ConceptsDoc,
    HierarchyDoc, LatticeDoc, MergeDoc, MetricsDoc, NodeDoc,
};
pub use pipeline::{
    bench, bench_csv, hac_purity, k_near_n, k_sweep, lattice_purity, run_pipeline, sweep_csv,
    synthetic_cases, write_graph, BenchCase, BenchRow, GraphFormat, MinSupport, PipelineConfig,
    PipelineMetrics, PipelineRun, Source, Sweep, SweepConfig, SweepRow, Timings,
};
pub use table::{load_csv, read_csv, save_csv, write_csv, LabelColumn};
pub use transactions::{
    format_transactions, parse_transactions, read_transactions, write_transactions,
};
