//! Evidence gathering for even universality of even-by-even boards.
//!
//! Results go to an append-only JSON-lines file, one record per
//! (graph, partition), so an interrupted scan picks up where it stopped.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::classify::{run_rows, Family, Row, RowStatus};
use super::search::{Budget, CapReason, Mode, DEFAULT_NODE_BUDGET};
use crate::error::Result;
use crate::graph::Graph;
use crate::partition::Partition;

/// One line of the results file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub graph: String,
    pub partition: Partition,
    pub status: RowStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub succ: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
}

impl ResultRecord {
    pub fn from_row(graph: &str, row: &Row) -> Self {
        let realized = row.status == RowStatus::Realized;
        ResultRecord {
            graph: graph.to_string(),
            partition: row.partition.clone(),
            status: row.status,
            succ: if realized { row.succ.clone() } else { None },
            nodes: if realized { None } else { Some(row.nodes) },
        }
    }
}

/// Append-only store of [`ResultRecord`]s keyed by (graph, partition).
pub struct ResultsStore {
    file: File,
    known: HashMap<(String, Partition), ResultRecord>,
}

impl ResultsStore {
    /// Opens or creates `path`, loading existing records; later lines win.
    pub fn open(path: &Path) -> Result<Self> {
        let mut known = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: ResultRecord = serde_json::from_str(&line)?;
                known.insert((rec.graph.clone(), rec.partition.clone()), rec);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(ResultsStore { file, known })
    }

    /// A settled result (realized or unrealizable); cap records are retried.
    pub fn settled(&self, graph: &str, partition: &Partition) -> Option<&ResultRecord> {
        self.known
            .get(&(graph.to_string(), partition.clone()))
            .filter(|r| r.status != RowStatus::Cap)
    }

    pub fn append(&mut self, record: ResultRecord) -> Result<()> {
        serde_json::to_writer(&mut self.file, &record)?;
        self.file.write_all(b"\n")?;
        self.file.flush()?;
        self.known.insert((record.graph.clone(), record.partition.clone()), record);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.known.len()
    }

    pub fn is_empty(&self) -> bool {
        self.known.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub node_budget: u64,
    /// Wall-clock cap for the whole scan.
    pub time_cap: Option<Duration>,
    pub workers: Option<usize>,
    pub results: Option<PathBuf>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            time_cap: None,
            workers: None,
            results: None,
        }
    }
}

/// Per-board summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub graph: String,
    pub partitions: usize,
    pub realized: usize,
    pub unrealizable: usize,
    pub capped: usize,
    /// Settled rows taken from the results file instead of searched.
    pub resumed: usize,
    pub exclusions: Vec<Partition>,
    /// Every partition settled.
    pub complete: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub cells: Vec<CellReport>,
}

impl ScanReport {
    pub fn exclusions(&self) -> impl Iterator<Item = (&str, &Partition)> {
        self.cells
            .iter()
            .flat_map(|c| c.exclusions.iter().map(move |p| (c.graph.as_str(), p)))
    }
}

/// Boards `R_{m,n}` with `m` in `rows`, `n` in `cols`, both even; a board is
/// listed once even if its transpose is also in range.
pub fn scan_sizes(rows: (usize, usize), cols: (usize, usize)) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in rows.0..=rows.1 {
        for n in cols.0..=cols.1 {
            if m % 2 == 1 || n % 2 == 1 || m == 0 || n == 0 {
                continue;
            }
            let transpose_listed = m > n && (rows.0..=rows.1).contains(&n) && (cols.0..=cols.1).contains(&m);
            if !transpose_listed {
                out.push((m, n));
            }
        }
    }
    out
}

/// Runs the even classification on each board, calling `progress` once per
/// partition in enumeration order. Rows not started before the time cap are
/// reported as capped.
pub fn conjecture_scan(
    sizes: &[(usize, usize)],
    config: &ScanConfig,
    mut progress: impl FnMut(&str, &Row),
) -> Result<ScanReport> {
    let deadline = config.time_cap.map(|d| Instant::now() + d);
    let budget = Budget {
        nodes: config.node_budget,
        deadline,
    };
    let mut store = config.results.as_deref().map(ResultsStore::open).transpose()?;
    let chunk = config.workers.unwrap_or_else(rayon::current_num_threads).max(1) * 2;
    let mut report = ScanReport::default();

    for &(m, n) in sizes {
        let graph = Graph::checkerboard(&[m, n])?;
        let label = graph.label().unwrap_or_default().to_string();
        let all = Family::Even.partitions(graph.n());
        let mut rows: Vec<Row> = Vec::with_capacity(all.len());
        let mut resumed = 0;

        let mut pending: Vec<Partition> = Vec::new();
        let flush = |pending: &mut Vec<Partition>, rows: &mut Vec<Row>, store: &mut Option<ResultsStore>, progress: &mut dyn FnMut(&str, &Row)| -> Result<()> {
            if pending.is_empty() {
                return Ok(());
            }
            let fresh = if deadline.is_some_and(|d| Instant::now() >= d) {
                pending.iter().map(|p| time_capped(p.clone())).collect()
            } else {
                run_rows(&graph, pending, Mode::Derangement, budget, config.workers)?
            };
            for row in fresh {
                if let Some(store) = store.as_mut() {
                    store.append(ResultRecord::from_row(&label, &row))?;
                }
                progress(&label, &row);
                rows.push(row);
            }
            pending.clear();
            Ok(())
        };

        for p in all {
            let settled = store.as_ref().and_then(|s| s.settled(&label, &p)).cloned();
            match settled {
                Some(rec) => {
                    flush(&mut pending, &mut rows, &mut store, &mut progress)?;
                    resumed += 1;
                    let row = Row {
                        partition: p,
                        status: rec.status,
                        nodes: rec.nodes.unwrap_or(0),
                        succ: rec.succ,
                        cap_reason: None,
                    };
                    progress(&label, &row);
                    rows.push(row);
                }
                None => {
                    pending.push(p);
                    if pending.len() >= chunk {
                        flush(&mut pending, &mut rows, &mut store, &mut progress)?;
                    }
                }
            }
        }
        flush(&mut pending, &mut rows, &mut store, &mut progress)?;

        let count = |s| rows.iter().filter(|r| r.status == s).count();
        let capped = count(RowStatus::Cap);
        report.cells.push(CellReport {
            graph: label.clone(),
            partitions: rows.len(),
            realized: count(RowStatus::Realized),
            unrealizable: count(RowStatus::Unrealizable),
            capped,
            resumed,
            exclusions: rows
                .iter()
                .filter(|r| r.status == RowStatus::Unrealizable)
                .map(|r| r.partition.clone())
                .collect(),
            complete: capped == 0,
        });
    }
    Ok(report)
}

fn time_capped(partition: Partition) -> Row {
    Row {
        partition,
        status: RowStatus::Cap,
        nodes: 0,
        succ: None,
        cap_reason: Some(CapReason::Time),
    }
}
