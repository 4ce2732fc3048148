//! `derange` command-line frontend.
//!
//! Exit codes: 0 when a result was computed (negative answers included),
//! 2 for usage or parse errors, 3 when a resource cap stopped the computation.

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use derange::cycletypes::{
    classify_all, conjecture_scan, is_even_universal, is_universal, longest_realizable_cycle, realize,
    scan_sizes, verify_exclusion_family, Budget, ExclusionFamily, Family, Mode, ResultRecord, Row,
    RowStatus, ScanConfig, Universality, DEFAULT_NODE_BUDGET,
};
use derange::existence::{
    berge_number, find_derangement, hall_check, max_general_matching, min_fixed_points_dyadic, tutte_check,
    Caps, HallMethod,
};
use derange::permutation::GraphPermutation;
use derange::render::render_board;
use derange::spec::GraphSpec;
use derange::{enumerate_partitions, Error, Graph, Partition, PartitionFilter};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "derange", version, about = "Graph derangements: existence, witnesses and cycle types")]
pub struct Cli {
    /// Node expansions allowed per realization search.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Vertex cap for the independent-set Hall check.
    #[arg(long, global = true, default_value_t = 24)]
    pub subset_cap: usize,
    /// Vertex cap for Tutte/Berge subset enumeration and general matching.
    #[arg(long, global = true, default_value_t = 20)]
    pub exhaustive_cap: usize,
    /// Wall-clock cap in seconds for searches and scans.
    #[arg(long, global = true)]
    pub time_cap: Option<u64>,
    /// Worker threads for classification and scans.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Append-only JSON-lines results file (scan).
    #[arg(long, global = true)]
    pub results: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the graph has a derangement.
    Exists { spec: String },
    /// Find a derangement (or a matchless one).
    Find {
        spec: String,
        #[arg(long)]
        matchless: bool,
    },
    /// Check Hall's condition.
    Hall {
        spec: String,
        #[arg(long, default_value = "matching-deficiency")]
        method: String,
    },
    /// Check Tutte's condition by subset enumeration.
    Tutte { spec: String },
    /// Berge number, a maximum matching, and the fewest dyadic fixed points.
    Berge { spec: String },
    /// Search for a derangement with the given cycle type, e.g. 6+6+4.
    Realize {
        spec: String,
        partition: String,
        #[arg(long)]
        matchless: bool,
    },
    /// Classify every partition of the vertex count.
    Classify {
        spec: String,
        /// Only all-even partitions.
        #[arg(long)]
        even: bool,
    },
    /// Test (even) universality.
    Universal {
        spec: String,
        #[arg(long)]
        even: bool,
    },
    /// List partitions of N in reverse-lexicographic order.
    Partitions {
        n: usize,
        #[arg(long)]
        even: bool,
        #[arg(long)]
        min_part: Option<usize>,
    },
    /// Longest cycle k admitting a permutation of type (k,1,...,1).
    Longest { spec: String },
    /// Confirm a family of excluded cycle types at one size.
    VerifyFamily { id: String, params: String },
    /// Even-universality scan over even board sizes.
    Scan {
        /// Row range A..B (inclusive).
        #[arg(long)]
        rows: String,
        /// Column range C..D (inclusive).
        #[arg(long)]
        cols: String,
    },
    /// Draw a witness (JSON successor array, or a record with "succ") on a 2-D board.
    Render { spec: String, witness_file: PathBuf },
}

/// Resource settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub node_budget: u64,
    pub caps: Caps,
    pub time_cap: Option<Duration>,
    pub workers: Option<usize>,
    pub format: Format,
    pub results: Option<PathBuf>,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        if cli.budget == 0 || cli.subset_cap == 0 || cli.exhaustive_cap == 0 || cli.workers == Some(0) || cli.time_cap == Some(0) {
            return Err(Failure::Usage("budgets, caps and worker counts must be positive".into()));
        }
        Ok(RunConfig {
            node_budget: cli.budget,
            caps: Caps {
                hall_subsets: cli.subset_cap,
                exhaustive: cli.exhaustive_cap,
            },
            time_cap: cli.time_cap.map(Duration::from_secs),
            workers: cli.workers,
            format: cli.format,
            results: cli.results.clone(),
        })
    }

    fn budget(&self) -> Budget {
        Budget {
            nodes: self.node_budget,
            deadline: self.time_cap.map(|d| Instant::now() + d),
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } | Error::BudgetExhausted { .. } => Failure::Cap(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// What a subcommand produced: a payload and whether a cap was hit.
struct Outcome {
    payload: Payload,
    capped: bool,
}

enum Payload {
    Json(Value),
    Text(String),
}

impl Outcome {
    fn json(value: Value) -> Self {
        Outcome {
            payload: Payload::Json(value),
            capped: false,
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|config| execute(&cli.command, &config, err));
    match result {
        Ok(outcome) => {
            let written = match outcome.payload {
                Payload::Json(v) if cli.format == Format::Json => writeln!(out, "{v}"),
                Payload::Json(v) => write!(out, "{}", text_form(&v)),
                Payload::Text(t) => write!(out, "{t}"),
            };
            if written.is_err() {
                return EXIT_USAGE;
            }
            if outcome.capped {
                EXIT_CAP
            } else {
                EXIT_OK
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            let _ = writeln!(err, "run `derange --help` for usage");
            EXIT_USAGE
        }
        Err(Failure::Cap(msg)) => {
            let _ = writeln!(err, "resource cap: {msg}");
            EXIT_CAP
        }
    }
}

fn graph_of(spec: &str) -> Result<(GraphSpec, Graph), Failure> {
    let parsed: GraphSpec = spec.parse()?;
    let graph = parsed.build()?;
    Ok((parsed, graph))
}

fn label(graph: &Graph) -> String {
    graph.label().unwrap_or("graph").to_string()
}

fn execute(command: &Command, config: &RunConfig, err: &mut dyn Write) -> Result<Outcome, Failure> {
    match command {
        Command::Exists { spec } => {
            let (_, g) = graph_of(spec)?;
            let witness = find_derangement(&g);
            Ok(Outcome::json(json!({
                "graph": label(&g),
                "n": g.n(),
                "derangement_exists": witness.is_some(),
                "obstructions": g.obstructions(),
                "cycle_type": witness.as_ref().map(|w| w.cycle_type()),
                "succ": witness,
            })))
        }
        Command::Find { spec, matchless } => {
            let (_, g) = graph_of(spec)?;
            if !matchless {
                let w = find_derangement(&g);
                return Ok(Outcome::json(json!({
                    "graph": label(&g),
                    "found": w.is_some(),
                    "cycle_type": w.as_ref().map(|w| w.cycle_type()),
                    "succ": w,
                })));
            }
            find_matchless(&g, config)
        }
        Command::Hall { spec, method } => {
            let (_, g) = graph_of(spec)?;
            let method: HallMethod = method.parse()?;
            let report = hall_check(&g, method, &config.caps)?;
            let mut v = serde_json::to_value(&report).expect("serializable");
            v["graph"] = json!(label(&g));
            Ok(Outcome::json(v))
        }
        Command::Tutte { spec } => {
            let (_, g) = graph_of(spec)?;
            let report = tutte_check(&g, &config.caps)?;
            let mut v = serde_json::to_value(&report).expect("serializable");
            v["graph"] = json!(label(&g));
            Ok(Outcome::json(v))
        }
        Command::Berge { spec } => {
            let (_, g) = graph_of(spec)?;
            let b = berge_number(&g, &config.caps)?;
            let m = max_general_matching(&g, &config.caps)?;
            Ok(Outcome::json(json!({
                "graph": label(&g),
                "berge_number": b,
                "max_matching": m,
                "min_fixed_points_dyadic": min_fixed_points_dyadic(&g, &config.caps)?,
            })))
        }
        Command::Realize { spec, partition, matchless } => {
            let (_, g) = graph_of(spec)?;
            let p: Partition = partition.parse()?;
            let mode = if *matchless { Mode::Matchless } else { Mode::Derangement };
            let result = realize(&g, &p, mode, config.budget())?;
            let row = Row::from_result(p, &result);
            let mut v = serde_json::to_value(ResultRecord::from_row(&label(&g), &row)).expect("serializable");
            if *matchless {
                v["mode"] = json!("matchless");
            }
            Ok(Outcome {
                capped: row.status == RowStatus::Cap,
                payload: Payload::Json(v),
            })
        }
        Command::Classify { spec, even } => {
            let (_, g) = graph_of(spec)?;
            let family = if *even { Family::Even } else { Family::AllGe2 };
            let table = classify_all(&g, family, config.budget(), config.workers)?;
            Ok(Outcome {
                capped: table.capped > 0,
                payload: Payload::Json(serde_json::to_value(&table).expect("serializable")),
            })
        }
        Command::Universal { spec, even } => {
            let (_, g) = graph_of(spec)?;
            let verdict = if *even {
                match is_even_universal(&g, config.budget(), config.workers) {
                    Err(Error::NotBipartite) => {
                        return Err(Failure::Usage(format!(
                            "{} is not bipartite; use `universal` without --even",
                            label(&g)
                        )))
                    }
                    other => other?,
                }
            } else {
                is_universal(&g, config.budget(), config.workers)?
            };
            let capped = matches!(verdict, Universality::Undetermined { .. });
            let mut v = serde_json::to_value(&verdict).expect("serializable");
            v["graph"] = json!(label(&g));
            v["even"] = json!(even);
            v["universal"] = json!(verdict.is_universal());
            Ok(Outcome {
                capped,
                payload: Payload::Json(v),
            })
        }
        Command::Partitions { n, even, min_part } => {
            let filter = match (even, min_part) {
                (true, None) => PartitionFilter::Even,
                (false, Some(k)) => PartitionFilter::MinPart(*k),
                (false, None) => PartitionFilter::All,
                (true, Some(_)) => return Err(Failure::Usage("--even and --min-part are exclusive".into())),
            };
            let parts = enumerate_partitions(*n, filter);
            Ok(Outcome::json(json!({
                "n": n,
                "filter": format!("{filter:?}"),
                "count": parts.len(),
                "partitions": parts,
            })))
        }
        Command::Longest { spec } => {
            let (_, g) = graph_of(spec)?;
            let k = longest_realizable_cycle(&g, config.node_budget)?;
            Ok(Outcome::json(json!({ "graph": label(&g), "longest_cycle": k })))
        }
        Command::VerifyFamily { id, params } => {
            let family = ExclusionFamily::parse(id, params)?;
            let report = verify_exclusion_family(family, config.budget(), config.workers)?;
            Ok(Outcome {
                capped: report.cap_hits > 0,
                payload: Payload::Json(serde_json::to_value(&report).expect("serializable")),
            })
        }
        Command::Scan { rows, cols } => {
            let sizes = scan_sizes(parse_range(rows)?, parse_range(cols)?);
            let scan = ScanConfig {
                node_budget: config.node_budget,
                time_cap: config.time_cap,
                workers: config.workers,
                results: config.results.clone(),
            };
            let report = conjecture_scan(&sizes, &scan, |graph, row| {
                let _ = writeln!(err, "{graph} {} {:?} nodes={}", row.partition, row.status, row.nodes);
            })?;
            let capped = report.cells.iter().any(|c| !c.complete);
            let exclusions: Vec<Value> = report
                .exclusions()
                .map(|(g, p)| json!({ "graph": g, "partition": p }))
                .collect();
            Ok(Outcome {
                capped,
                payload: Payload::Json(json!({ "cells": report.cells, "exclusions": exclusions })),
            })
        }
        Command::Render { spec, witness_file } => {
            let parsed: GraphSpec = spec.parse()?;
            let text = std::fs::read_to_string(witness_file).map_err(Error::from)?;
            let value: Value = serde_json::from_str(&text).map_err(Error::from)?;
            let succ = match value.get("succ") {
                Some(s) => s.clone(),
                None => value,
            };
            let perm: GraphPermutation = serde_json::from_value(succ).map_err(Error::from)?;
            Ok(Outcome {
                payload: Payload::Text(render_board(&parsed, &perm)?),
                capped: false,
            })
        }
    }
}

/// First matchless cycle type found, trying partitions with parts >= 3 in
/// reverse-lexicographic order (even parts only on bipartite graphs).
fn find_matchless(g: &Graph, config: &RunConfig) -> Result<Outcome, Failure> {
    let bipartite = g.two_color().is_some();
    let budget = config.budget();
    let mut capped = Vec::new();
    for p in enumerate_partitions(g.n(), PartitionFilter::MinPart(3)) {
        if bipartite && !p.is_even() {
            continue;
        }
        let r = realize(g, &p, Mode::Matchless, budget)?;
        if let Some(w) = r.witness() {
            return Ok(Outcome::json(json!({
                "graph": label(g),
                "matchless": true,
                "found": true,
                "cycle_type": p,
                "succ": w,
            })));
        }
        if !r.is_unrealizable() {
            capped.push(p);
        }
    }
    Ok(Outcome {
        capped: !capped.is_empty(),
        payload: Payload::Json(json!({
            "graph": label(g),
            "matchless": true,
            "found": false,
            "capped": capped,
        })),
    })
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("bad range {s:?}, expected A..B"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    Ok((a, b))
}

/// `key: value` lines for the top level of a JSON object.
fn text_form(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}\n"),
                Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
                    let mut s = format!("{k}:\n");
                    for row in rows {
                        s.push_str("  ");
                        s.push_str(&row.to_string());
                        s.push('\n');
                    }
                    s
                }
                other => format!("{k}: {other}\n"),
            })
            .collect(),
        other => format!("{other}\n"),
    }
}
