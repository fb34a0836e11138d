//! Command-line front end.
//!
//! Exit status: 0 success, 1 verification failure, 2 bad input or usage,
//! 3 a size cap was exceeded, 4 internal numerical failure.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{parse_edge_list, Graph, GraphError, DEFAULT_EXPLICIT_CAP};
use crate::invariants::{symbolic_reports, verify_all, InvariantError, SeedInvariants, VerifyOptions};
use crate::numeric::NumericError;
use crate::spectra::{EigenBase, SpectrumError, DEFAULT_EXPANSION_CAP};

#[derive(Debug, Parser)]
#[command(name = "trispec", version, about = "Spectra and invariants of iterated graph triangulations")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural summary of the input graph.
    Analyze(RunArgs),
    /// Edge list of the n-fold triangulation.
    Triangulate(RunArgs),
    /// Symbolic normalized Laplacian spectrum of the n-fold triangulation.
    Spectrum(RunArgs),
    /// Kirchhoff index, Kemeny's constant and spanning trees for depths 0..=n.
    Invariants(RunArgs),
    /// Cross-check every route against explicit oracles for depths 0..=n.
    Verify(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Edge-list file: one "u v" pair per line, 0-based labels, '#' comments.
    input: PathBuf,
    /// Number of triangulation steps.
    #[arg(short = 'n', long = "iterations", visible_alias = "max-n", default_value_t = 1)]
    n: u64,
    /// Agreement tolerance for `verify`.
    #[arg(long = "tol", default_value_t = 1e-8)]
    tol: f64,
    /// Output format; `triangulate` defaults to the edge-list text format,
    /// everything else to json.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Also list every eigenvalue (`spectrum` only).
    #[arg(long)]
    expand: bool,
    /// Largest graph, in vertices, that may be built explicitly.
    #[arg(long = "cap", default_value_t = DEFAULT_EXPLICIT_CAP)]
    cap: usize,
    /// Write to this file instead of standard output.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Analyze,
    Triangulate,
    Spectrum,
    Invariants,
    Verify,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub command: CommandKind,
    pub input_path: PathBuf,
    pub n: u64,
    pub tolerance: f64,
    pub output_format: OutputFormat,
    pub explicit_cap: usize,
    pub output_path: Option<PathBuf>,
    pub expand: bool,
}

impl CliConfig {
    pub fn new(command: CommandKind, input_path: impl Into<PathBuf>) -> Self {
        CliConfig {
            command,
            input_path: input_path.into(),
            n: 1,
            tolerance: 1e-8,
            output_format: default_format(command),
            explicit_cap: DEFAULT_EXPLICIT_CAP,
            output_path: None,
            expand: false,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", self.tolerance)));
        }
        if self.explicit_cap < 2 {
            return Err(CliError::Usage(format!("--cap must be at least 2, got {}", self.explicit_cap)));
        }
        Ok(())
    }
}

fn default_format(command: CommandKind) -> OutputFormat {
    match command {
        CommandKind::Triangulate => OutputFormat::Text,
        _ => OutputFormat::Json,
    }
}

impl Cli {
    pub fn into_config(self) -> Result<CliConfig, CliError> {
        let (command, args) = match self.command {
            Command::Analyze(a) => (CommandKind::Analyze, a),
            Command::Triangulate(a) => (CommandKind::Triangulate, a),
            Command::Spectrum(a) => (CommandKind::Spectrum, a),
            Command::Invariants(a) => (CommandKind::Invariants, a),
            Command::Verify(a) => (CommandKind::Verify, a),
        };
        let config = CliConfig {
            command,
            input_path: args.input,
            n: args.n,
            tolerance: args.tol,
            output_format: args.format.unwrap_or(default_format(command)),
            explicit_cap: args.cap,
            output_path: args.output,
            expand: args.expand,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("invalid graph: {0}")]
    Graph(GraphError),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Expansion(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Graph(_) => 2,
            CliError::Cap(_) | CliError::Expansion(_) => 3,
            CliError::Write(_) | CliError::Internal(_) => 4,
        }
    }

    pub fn hint(&self) -> Option<&'static str> {
        match self {
            CliError::Cap(_) => Some(
                "the `spectrum` and `invariants` commands work symbolically and need no explicit construction; \
                 otherwise raise --cap or lower -n",
            ),
            CliError::Expansion(_) => Some("drop --expand or lower -n; the symbolic descriptor has no size limit"),
            _ => None,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Graph(other),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::ExpansionCapExceeded { .. } => CliError::Expansion(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Graph(g) => g.into(),
            InvariantError::Spectrum(s) => s.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

/// Runs one command and writes its output to `out` (or to the configured
/// output file). Returns the exit status for a completed run.
pub fn run(config: &CliConfig, out: &mut dyn Write) -> Result<u8, CliError> {
    config.validate()?;
    let text = std::fs::read_to_string(&config.input_path)
        .map_err(|source| CliError::Read { path: config.input_path.clone(), source })?;
    let graph = parse_edge_list(&text)?;
    let (rendered, status) = match config.command {
        CommandKind::Analyze => (render_analyze(&graph, config.output_format)?, 0),
        CommandKind::Triangulate => (render_triangulate(&graph, config)?, 0),
        CommandKind::Spectrum => (render_spectrum(&graph, config)?, 0),
        CommandKind::Invariants => (render_invariants(&graph, config)?, 0),
        CommandKind::Verify => render_verify(&graph, config)?,
    };
    match &config.output_path {
        Some(path) => std::fs::write(path, rendered)?,
        None => out.write_all(rendered.as_bytes())?,
    }
    Ok(status)
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_document(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

fn render_analyze(g: &Graph, format: OutputFormat) -> Result<String, CliError> {
    let a = g.analyze();
    match format {
        OutputFormat::Json => json(&a),
        OutputFormat::Csv => csv_document(
            &["n_vertices", "n_edges", "connected", "bipartite", "min_degree", "max_degree"],
            [vec![
                a.n_vertices.to_string(),
                a.n_edges.to_string(),
                a.connected.to_string(),
                a.bipartite.to_string(),
                a.min_degree.to_string(),
                a.max_degree.to_string(),
            ]],
        ),
        OutputFormat::Text => Ok(format!(
            "vertices    {}\nedges       {}\nconnected   {}\nbipartite   {}\nmin degree  {}\nmax degree  {}\n",
            a.n_vertices, a.n_edges, a.connected, a.bipartite, a.min_degree, a.max_degree
        )),
    }
}

fn render_triangulate(g: &Graph, config: &CliConfig) -> Result<String, CliError> {
    let t = g.iterate_triangulation(config.n as usize, config.explicit_cap)?;
    match config.output_format {
        OutputFormat::Text => Ok(t.to_edge_list()),
        OutputFormat::Csv => {
            csv_document(&["u", "v"], t.edges().iter().map(|(u, v)| vec![u.to_string(), v.to_string()]))
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct EdgeListDoc<'a> {
                num_vertices: usize,
                num_edges: usize,
                edges: &'a [(usize, usize)],
            }
            json(&EdgeListDoc { num_vertices: t.num_vertices(), num_edges: t.num_edges(), edges: t.edges() })
        }
    }
}

fn render_spectrum(g: &Graph, config: &CliConfig) -> Result<String, CliError> {
    let seed = SeedInvariants::from_graph(g)?;
    let d = seed.descriptor(config.n)?;
    let expanded = if config.expand { Some(d.expand(DEFAULT_EXPANSION_CAP)?) } else { None };
    match config.output_format {
        OutputFormat::Json => {
            let mut doc = serde_json::to_value(&d).map_err(|e| CliError::Internal(e.to_string()))?;
            if let Some(values) = &expanded {
                doc["expanded"] = serde_json::json!(values);
            }
            json(&doc)
        }
        OutputFormat::Csv => match &expanded {
            Some(values) => csv_document(
                &["index", "value"],
                values.iter().enumerate().map(|(i, v)| vec![i.to_string(), v.to_string()]),
            ),
            None => csv_document(
                &["source", "generation", "halvings", "value", "multiplicity"],
                d.classes().into_iter().map(|(e, mult)| {
                    let (source, generation) = match e.base {
                        EigenBase::Seed(_) => ("seed".to_string(), 0),
                        EigenBase::Class(c) => (format!("{c:?}"), d.n - e.halvings),
                    };
                    vec![
                        source,
                        generation.to_string(),
                        e.halvings.to_string(),
                        d.value_of(&e).to_string(),
                        mult.to_string(),
                    ]
                }),
            ),
        },
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "depth {}  seed N0={} E0={} bipartite={}", d.n, d.n0, d.e0, d.bipartite_seed);
            let _ = writeln!(s, "total eigenvalues {}", d.total_multiplicity());
            let _ = writeln!(s, "{:<12} {:>10} {:>9} {:>24} {:>s$}", "source", "generation", "halvings", "value", "multiplicity", s = 12);
            for (e, mult) in d.classes() {
                let (source, generation) = match e.base {
                    EigenBase::Seed(_) => ("seed".to_string(), 0),
                    EigenBase::Class(c) => (format!("{c:?}"), d.n - e.halvings),
                };
                let _ = writeln!(s, "{:<12} {:>10} {:>9} {:>24} {:>12}", source, generation, e.halvings, d.value_of(&e), mult);
            }
            let rs = d.reciprocal_sum();
            let _ = writeln!(s, "reciprocal sum {} (exceptional part {})", rs.total(), rs.exceptional);
            if let Some(values) = &expanded {
                let _ = writeln!(s, "expanded:");
                for v in values {
                    let _ = writeln!(s, "{v}");
                }
            }
            Ok(s)
        }
    }
}

fn render_invariants(g: &Graph, config: &CliConfig) -> Result<String, CliError> {
    let seed = SeedInvariants::from_graph(g)?;
    let reports = symbolic_reports(&seed, config.n)?;
    match config.output_format {
        OutputFormat::Json => json(&reports),
        OutputFormat::Csv => csv_document(
            &["n", "Nn", "En", "kf_star", "kemeny", "spanning_trees", "kappa"],
            reports.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    r.num_vertices.to_string(),
                    r.num_edges.to_string(),
                    r.kf_star.to_string(),
                    r.kemeny.to_string(),
                    r.spanning_trees.to_string(),
                    r.kappa.to_string(),
                ]
            }),
        ),
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{:>3} {:>12} {:>12} {:>24} {:>24} {:>10}  spanning trees", "n", "Nn", "En", "kf_star", "kemeny", "kappa");
            for r in &reports {
                let _ = writeln!(
                    s,
                    "{:>3} {:>12} {:>12} {:>24} {:>24} {:>10}  {}",
                    r.n, r.num_vertices, r.num_edges, r.kf_star, r.kemeny, r.kappa, r.spanning_trees
                );
            }
            Ok(s)
        }
    }
}

const VERIFY_COLUMNS: [&str; 6] = ["kf_star", "kemeny", "spanning_trees", "spanning_trees_chung", "spectrum", "identity"];

fn render_verify(g: &Graph, config: &CliConfig) -> Result<(String, u8), CliError> {
    let options = VerifyOptions { tol: config.tolerance, explicit_cap: config.explicit_cap };
    let v = verify_all(g, config.n, options)?;
    let status = if v.passed { 0 } else { 1 };
    let per_n = |n: u64| -> Vec<(String, f64, bool)> {
        VERIFY_COLUMNS
            .iter()
            .filter_map(|q| v.checks.iter().find(|c| c.n == n && c.quantity == *q))
            .map(|c| (c.quantity.clone(), c.discrepancy, c.passed))
            .collect()
    };
    let rendered = match config.output_format {
        OutputFormat::Json => json(&v)?,
        OutputFormat::Csv => {
            let mut header = vec!["n"];
            header.extend(VERIFY_COLUMNS);
            header.push("passed");
            csv_document(
                &header,
                v.reports.iter().map(|r| {
                    let cells = per_n(r.n);
                    let mut row = vec![r.n.to_string()];
                    row.extend(cells.iter().map(|(_, d, _)| format!("{d:e}")));
                    row.push(cells.iter().all(|(_, _, p)| *p).to_string());
                    row
                }),
            )?
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &v.reports {
                for (quantity, discrepancy, passed) in per_n(r.n) {
                    let verdict = if passed { "PASS" } else { "FAIL" };
                    let _ = writeln!(s, "n={:<3} {:<22} {:>12.3e}  {}", r.n, quantity, discrepancy, verdict);
                }
            }
            let _ = writeln!(s, "{}", if v.passed { "all routes agree" } else { "route disagreement" });
            s
        }
    };
    Ok((rendered, status))
}
