use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::search::{realize, Budget, CapReason, Mode, RealizationResult, Status};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{enumerate_partitions, Partition, PartitionFilter};

/// Which partitions a classification covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// All parts even.
    Even,
    /// All parts at least 2.
    AllGe2,
}

impl Family {
    pub fn partitions(self, n: usize) -> Vec<Partition> {
        match self {
            Family::Even => enumerate_partitions(n, PartitionFilter::Even),
            Family::AllGe2 => enumerate_partitions(n, PartitionFilter::MinPart(2)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Realized,
    Unrealizable,
    Cap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub partition: Partition,
    pub status: RowStatus,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub succ: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap_reason: Option<CapReason>,
}

impl Row {
    pub fn from_result(partition: Partition, result: &RealizationResult) -> Self {
        let (status, succ, cap_reason) = match &result.status {
            Status::Realized(p) => (RowStatus::Realized, Some(p.succ().to_vec()), None),
            Status::Unrealizable => (RowStatus::Unrealizable, None, None),
            Status::CapHit(reason) => (RowStatus::Cap, None, Some(*reason)),
        };
        Row {
            partition,
            status,
            nodes: result.nodes,
            succ,
            cap_reason,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationTable {
    pub graph: String,
    pub family: Family,
    pub rows: Vec<Row>,
    pub realized: usize,
    pub unrealizable: usize,
    pub capped: usize,
}

impl ClassificationTable {
    fn from_rows(graph: String, family: Family, rows: Vec<Row>) -> Self {
        let count = |s| rows.iter().filter(|r| r.status == s).count();
        ClassificationTable {
            graph,
            family,
            realized: count(RowStatus::Realized),
            unrealizable: count(RowStatus::Unrealizable),
            capped: count(RowStatus::Cap),
            rows,
        }
    }

    pub fn excluded(&self) -> Vec<&Partition> {
        self.rows
            .iter()
            .filter(|r| r.status == RowStatus::Unrealizable)
            .map(|r| &r.partition)
            .collect()
    }
}

/// Runs [`realize`] on every partition of the family; partitions are searched
/// in parallel, each search sequential, so the table is deterministic.
/// `workers = None` uses the global rayon pool.
pub fn classify_all(
    graph: &Graph,
    family: Family,
    budget: Budget,
    workers: Option<usize>,
) -> Result<ClassificationTable> {
    let parts = family.partitions(graph.n());
    let rows = run_rows(graph, &parts, Mode::Derangement, budget, workers)?;
    let label = graph.label().unwrap_or("graph").to_string();
    Ok(ClassificationTable::from_rows(label, family, rows))
}

pub(crate) fn run_rows(
    graph: &Graph,
    parts: &[Partition],
    mode: Mode,
    budget: Budget,
    workers: Option<usize>,
) -> Result<Vec<Row>> {
    let job = || {
        parts
            .par_iter()
            .map(|p| realize(graph, p, mode, budget).map(|r| Row::from_result(p.clone(), &r)))
            .collect::<Result<Vec<_>>>()
    };
    match workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Parse(format!("thread pool: {e}")))?
            .install(job),
        None => job(),
    }
}

/// Outcome of a universality test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Universality {
    Universal,
    /// The first excluded partition in enumeration order.
    Excluded { partition: Partition },
    /// No exclusion found, but some rows stopped at a cap.
    Undetermined { capped: Vec<Partition> },
}

impl Universality {
    pub fn is_universal(&self) -> bool {
        matches!(self, Universality::Universal)
    }

    fn from_table(table: &ClassificationTable) -> Self {
        if let Some(p) = table.excluded().first() {
            return Universality::Excluded {
                partition: (*p).clone(),
            };
        }
        let capped: Vec<Partition> = table
            .rows
            .iter()
            .filter(|r| r.status == RowStatus::Cap)
            .map(|r| r.partition.clone())
            .collect();
        if capped.is_empty() {
            Universality::Universal
        } else {
            Universality::Undetermined { capped }
        }
    }
}

/// Every all-even partition of `n` is a cycle type. Only meaningful for
/// bipartite graphs; use [`is_universal`] otherwise.
pub fn is_even_universal(graph: &Graph, budget: Budget, workers: Option<usize>) -> Result<Universality> {
    if graph.two_color().is_none() {
        return Err(Error::NotBipartite);
    }
    if graph.n() % 2 == 1 {
        return Err(Error::InvalidDimensions(format!(
            "even universality needs an even vertex count, got {}",
            graph.n()
        )));
    }
    let table = classify_all(graph, Family::Even, budget, workers)?;
    Ok(Universality::from_table(&table))
}

/// Every partition with parts at least 2 is a cycle type.
pub fn is_universal(graph: &Graph, budget: Budget, workers: Option<usize>) -> Result<Universality> {
    if graph.n() < 2 {
        return Err(Error::InvalidDimensions(
            "universality needs at least 2 vertices".into(),
        ));
    }
    if graph.n() >= 5 && graph.two_color().is_some() {
        // bipartite graphs only have even cycles, and n >= 5 always admits
        // a partition with an odd part
        let first_odd = Family::AllGe2
            .partitions(graph.n())
            .into_iter()
            .find(|p| !p.is_even())
            .expect("n >= 5 has a partition with an odd part >= 3");
        return Ok(Universality::Excluded {
            partition: first_odd,
        });
    }
    let table = classify_all(graph, Family::AllGe2, budget, workers)?;
    Ok(Universality::from_table(&table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        let g = Graph::checkerboard(&[3, 4]).unwrap();
        let t = classify_all(&g, Family::Even, Budget::default(), None).unwrap();
        assert_eq!((t.realized, t.unrealizable, t.capped), (9, 2, 0));
        let ex: Vec<String> = t.excluded().iter().map(|p| p.to_string()).collect();
        assert_eq!(ex, ["8+4", "4+4+4"]);
    }

    #[test]
    fn universality() {
        for n in 1..=6 {
            let g = Graph::complete(n).unwrap();
            if n >= 2 {
                assert!(is_universal(&g, Budget::default(), None).unwrap().is_universal(), "K_{n}");
            }
        }
        let r23 = Graph::checkerboard(&[2, 3]).unwrap();
        assert_eq!(
            is_universal(&r23, Budget::default(), None).unwrap(),
            Universality::Excluded { partition: "3+3".parse().unwrap() }
        );
        assert!(is_universal(&Graph::cycle(3).unwrap(), Budget::default(), None).unwrap().is_universal());
        assert!(is_universal(&Graph::complete(1).unwrap(), Budget::default(), None).is_err());
        assert!(matches!(
            is_even_universal(&Graph::cycle(5).unwrap(), Budget::default(), None),
            Err(Error::NotBipartite)
        ));
        let r34 = Graph::checkerboard(&[3, 4]).unwrap();
        assert!(!is_even_universal(&r34, Budget::default(), None).unwrap().is_universal());
    }

    #[test]
    fn capped_rows_leave_verdict_open() {
        let g = Graph::checkerboard(&[4, 4]).unwrap();
        let v = is_even_universal(&g, Budget::nodes(1), Some(2)).unwrap();
        assert!(matches!(v, Universality::Undetermined { .. } | Universality::Excluded { .. }));
        assert!(!v.is_universal());
    }
}
