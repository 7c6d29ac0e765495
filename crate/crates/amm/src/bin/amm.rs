//! Command-line interface for average mixing matrix computations.
//!
//! Exit status: 0 on success, 1 when a property check fails, 2 on input
//! errors. The AMM_TOL environment variable overrides the float
//! cross-check tolerance (default 1e-9).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use amm::analysis::amm_summary;
use amm::census::{
    emit_table, load_graph6_file, run_census, CensusFilter, CensusSource, TableFormat,
};
use amm::commutant::{commutant_basis, CommutantBasis};
use amm::graph::{adjacency_matrix, adjacency_matrix_f64, parse_graph6, Graph};
use amm::rational::{format_rational, RationalMatrix};
use amm::spectral::{self, default_gap_tol, inf_norm};
use amm::verify::check_graph;

#[derive(Parser)]
#[command(name = "amm", version, about = "Average mixing matrices of continuous-time quantum walks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the exact average mixing matrix and its rank
    Matrix(GraphArgs),
    /// Print the exact rank of the average mixing matrix
    Rank(GraphArgs),
    /// Print the spectrum of A and of the average mixing matrix
    Spectrum(GraphArgs),
    /// Print the average states, one density matrix per vertex
    States(GraphArgs),
    /// Run every lemma property on a graph; nonzero exit on failure
    Check(GraphArgs),
    /// Print the mixing matrix M(t) at one time
    Walk {
        #[command(flatten)]
        graph: GraphArgs,
        /// Evaluation time
        #[arg(long)]
        t: f64,
    },
    /// Print the finite-horizon time average and its distance to the limit
    Avg {
        #[command(flatten)]
        graph: GraphArgs,
        /// Averaging horizon T
        #[arg(long = "T")]
        horizon: f64,
    },
    /// Aggregate exact ranks over a graph corpus into table rows
    Census {
        /// Built-in connected-graph enumerator order (1..=6)
        #[arg(long, conflicts_with = "file")]
        n: Option<usize>,
        /// graph6 corpus file, one record per line
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// A single graph6 record
    #[arg(long, conflicts_with = "file")]
    g6: Option<String>,
    /// File of graph6 records, one per line
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    Cubic,
    Bipartite,
}

impl From<FormatArg> for TableFormat {
    fn from(f: FormatArg) -> TableFormat {
        match f {
            FormatArg::Csv => TableFormat::Csv,
            FormatArg::Json => TableFormat::Json,
            FormatArg::Text => TableFormat::Text,
        }
    }
}

impl From<FilterArg> for CensusFilter {
    fn from(f: FilterArg) -> CensusFilter {
        match f {
            FilterArg::All => CensusFilter::AllConnected,
            FilterArg::Cubic => CensusFilter::Cubic,
            FilterArg::Bipartite => CensusFilter::BipartiteConnected,
        }
    }
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}

fn float_tol() -> Result<f64, String> {
    match std::env::var("AMM_TOL") {
        Ok(v) => v
            .parse::<f64>()
            .map_err(|_| format!("AMM_TOL is not a float: {v}")),
        Err(_) => Ok(1e-9),
    }
}

fn load_graphs(args: &GraphArgs) -> Result<Vec<Graph>, String> {
    match (&args.g6, &args.file) {
        (Some(record), None) => Ok(vec![
            parse_graph6(record.as_bytes()).map_err(|e| e.to_string())?
        ]),
        (None, Some(path)) => load_graph6_file(path).map_err(|e| e.to_string()),
        _ => Err("provide exactly one of --g6 or --file".to_string()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Matrix(args) => {
            for g in load_graphs(&args)? {
                let amm = exact_amm(&g)?;
                match args.format {
                    FormatArg::Json => println!("{}", amm_json(&amm.matrix, amm.rank)),
                    FormatArg::Csv => {
                        print!("{}", rational_matrix_csv(&amm.matrix));
                        println!("rank,{}", amm.rank);
                    }
                    FormatArg::Text => {
                        print!("{}", rational_matrix_text(&amm.matrix));
                        println!("rank: {}", amm.rank);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Rank(args) => {
            for g in load_graphs(&args)? {
                println!("{}", exact_amm(&g)?.rank);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Spectrum(args) => {
            for g in load_graphs(&args)? {
                let a_spec = spectral::symmetric_eigenvalues(&adjacency_matrix_f64(&g));
                let amm = exact_amm(&g)?;
                let (trace, m_spec) = amm_summary(&amm);
                match args.format {
                    FormatArg::Json => println!(
                        "{}",
                        serde_json::json!({
                            "adjacency_spectrum": a_spec,
                            "amm_spectrum": m_spec,
                            "amm_trace": format_rational(&trace),
                            "rank": amm.rank,
                        })
                    ),
                    _ => {
                        println!("adjacency spectrum: {a_spec:?}");
                        println!("amm spectrum:       {m_spec:?}");
                        println!("amm trace:          {}", format_rational(&trace));
                        println!("amm rank:           {}", amm.rank);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::States(args) => {
            for g in load_graphs(&args)? {
                let cb = commutant(&g)?;
                for v in 0..g.n() {
                    let state = cb.average_state(v).map_err(|e| e.to_string())?;
                    match args.format {
                        FormatArg::Json => {
                            println!(
                                "{}",
                                serde_json::json!({
                                    "vertex": v,
                                    "matrix": rational_matrix_json(&state.matrix),
                                })
                            );
                        }
                        _ => {
                            println!("average state of vertex {v}:");
                            print!("{}", rational_matrix_text(&state.matrix));
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check(args) => {
            let tol = float_tol()?;
            let mut all_ok = true;
            for g in load_graphs(&args)? {
                let report = check_graph(&g, tol, 50);
                for item in &report.items {
                    let flag = if item.ok { "pass" } else { "FAIL" };
                    if item.detail.is_empty() {
                        println!("{flag} {}", item.name);
                    } else {
                        println!("{flag} {} ({})", item.name, item.detail);
                    }
                }
                all_ok &= report.all_ok();
            }
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            })
        }
        Cmd::Walk { graph, t } => {
            for g in load_graphs(&graph)? {
                let sd = decompose(&g)?;
                let snap = spectral::mixing_snapshot(&sd, t);
                print!("{}", float_matrix_text(&snap.matrix));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Avg { graph, horizon } => {
            if horizon <= 0.0 {
                return Err("--T must be positive".to_string());
            }
            for g in load_graphs(&graph)? {
                let sd = decompose(&g)?;
                let avg = spectral::time_averaged_mixing(&sd, horizon);
                let limit = spectral::avg_mixing_numeric(&sd);
                print!("{}", float_matrix_text(&avg));
                println!(
                    "distance to limit: {:e} (bound {:e})",
                    inf_norm(&avg.sub(&limit)),
                    spectral::convergence_constant(&sd) / horizon
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Census {
            n,
            file,
            filter,
            format,
            jobs,
        } => {
            let source = match (n, file) {
                (Some(n), None) => CensusSource::Builtin { n },
                (None, Some(path)) => CensusSource::File(path),
                _ => return Err("provide exactly one of --n or --file".to_string()),
            };
            let records =
                run_census(&source, filter.into(), jobs).map_err(|e| e.to_string())?;
            print!("{}", emit_table(&records, format.into()));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn commutant(g: &Graph) -> Result<CommutantBasis, String> {
    commutant_basis(&adjacency_matrix(g)).map_err(|e| e.to_string())
}

fn exact_amm(g: &Graph) -> Result<amm::commutant::AverageMixingMatrix, String> {
    commutant(g)?.average_mixing_exact().map_err(|e| e.to_string())
}

fn decompose(g: &Graph) -> Result<spectral::SpectralDecomposition, String> {
    let a = adjacency_matrix_f64(g);
    spectral::decompose(&a, default_gap_tol(&a)).map_err(|e| e.to_string())
}

fn rational_matrix_json(m: &RationalMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.rows())
            .map(|i| {
                serde_json::Value::Array(
                    m.row(i)
                        .iter()
                        .map(|v| serde_json::Value::String(format_rational(v)))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn amm_json(m: &RationalMatrix, rank: usize) -> String {
    serde_json::json!({ "matrix": rational_matrix_json(m), "rank": rank }).to_string()
}

fn rational_matrix_text(m: &RationalMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(format_rational).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn rational_matrix_csv(m: &RationalMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(format_rational).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn float_matrix_text(m: &amm::FloatMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:.9}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
