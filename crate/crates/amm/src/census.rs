//! Batch harness: stream a graph corpus, compute the exact rank of M̂
//! and the simple-spectrum flag per graph, and aggregate per-(n, rank)
//! counts into table rows.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;

use crate::commutant::{commutant_basis, CommutantError};
use crate::graph::{
    adjacency_matrix, classify, enumerate_connected, parse_graph6, Graph, GraphError,
};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("cannot read corpus file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {source}")]
    Record { line: usize, source: GraphError },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Commutant(#[from] CommutantError),
}

#[derive(Clone, Debug)]
pub enum CensusSource {
    /// Built-in isomorph-free enumerator, connected graphs on `n <= 6`.
    Builtin { n: usize },
    /// Newline-delimited graph6 records.
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusFilter {
    AllConnected,
    Cubic,
    BipartiteConnected,
}

impl CensusFilter {
    pub fn accepts(&self, g: &Graph) -> bool {
        let class = classify(g);
        class.connected
            && match self {
                CensusFilter::AllConnected => true,
                CensusFilter::Cubic => class.regular == Some(3),
                CensusFilter::BipartiteConnected => class.bipartite,
            }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub n: usize,
    pub rank: usize,
    pub count: usize,
    pub simple_count: usize,
}

/// Exact per-graph summary used by the aggregation.
pub fn graph_rank_summary(g: &Graph) -> Result<(usize, bool), CensusError> {
    let cb = commutant_basis(&adjacency_matrix(g))?;
    let simple = cb.dim() == g.n();
    let amm = cb.average_mixing_exact()?;
    Ok((amm.rank, simple))
}

pub fn load_graph6_file(path: &PathBuf) -> Result<Vec<Graph>, CensusError> {
    let data = fs::read(path).map_err(|source| CensusError::Io {
        path: path.clone(),
        source,
    })?;
    let mut graphs = Vec::new();
    for (idx, line) in data.split(|&b| b == b'\n').enumerate() {
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        let line = if idx == 0 {
            line.strip_prefix(b">>graph6<<").unwrap_or(line)
        } else {
            line
        };
        if line.is_empty() {
            continue;
        }
        graphs.push(
            parse_graph6(line).map_err(|source| CensusError::Record {
                line: idx + 1,
                source,
            })?,
        );
    }
    Ok(graphs)
}

/// One record per (n, rank) with nonzero count, n then rank ascending.
/// Ranks absent from the output have zero count.
pub fn run_census(
    source: &CensusSource,
    filter: CensusFilter,
    jobs: Option<usize>,
) -> Result<Vec<CensusRecord>, CensusError> {
    let graphs = match source {
        CensusSource::Builtin { n } => enumerate_connected(*n)?,
        CensusSource::File(path) => load_graph6_file(path)?,
    };
    let selected: Vec<Graph> = graphs.into_iter().filter(|g| filter.accepts(g)).collect();

    let summaries: Result<Vec<(usize, usize, bool)>, CensusError> = match jobs {
        Some(1) => selected
            .iter()
            .map(|g| graph_rank_summary(g).map(|(r, s)| (g.n(), r, s)))
            .collect(),
        jobs => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0))
                .build()
                .expect("thread pool");
            pool.install(|| {
                selected
                    .par_iter()
                    .map(|g| graph_rank_summary(g).map(|(r, s)| (g.n(), r, s)))
                    .collect()
            })
        }
    };

    // Single-threaded merge keeps the output independent of worker count.
    let mut counts: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for (n, rank, simple) in summaries? {
        let entry = counts.entry((n, rank)).or_insert((0, 0));
        entry.0 += 1;
        if simple {
            entry.1 += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|((n, rank), (count, simple_count))| CensusRecord {
            n,
            rank,
            count,
            simple_count,
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
    Text,
}

pub fn emit_table(records: &[CensusRecord], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut out = String::from("n,rank,count,simple_count\n");
            for r in records {
                out.push_str(&format!("{},{},{},{}\n", r.n, r.rank, r.count, r.simple_count));
            }
            out
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = records
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "n": r.n,
                        "rank": r.rank,
                        "count": r.count,
                        "simple_count": r.simple_count,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&serde_json::Value::Array(rows)).unwrap()
        }
        TableFormat::Text => {
            let mut out = format!(
                "{:>4} {:>5} {:>8} {:>13}\n",
                "n", "rank", "count", "simple_count"
            );
            for r in records {
                out.push_str(&format!(
                    "{:>4} {:>5} {:>8} {:>13}\n",
                    r.n, r.rank, r.count, r.simple_count
                ));
            }
            out
        }
    }
}
