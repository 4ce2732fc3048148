//! Known infinite families of excluded cycle types on checkerboard graphs,
//! instantiated at concrete sizes and checked by exhaustive search.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::classify::{run_rows, Row, RowStatus};
use super::search::{Budget, Mode};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{enumerate_partitions, Partition, PartitionFilter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ExclusionFamily {
    /// `R_{3,n}`, n even >= 4: no type `(a_1, ..., a_k, 4)` with every
    /// `a_i` even and greater than 2.
    ThreeRowWithFour { n: usize },
    /// `R_{m,n}`, m odd and 4 | n: no type `(4, ..., 4)`.
    AllFours { m: usize, n: usize },
    /// `R_{4,2k+1}`, k >= 1: no matchless derangement with `2k - 1` or more
    /// 4-cycles.
    MatchlessFours { k: usize },
    /// `R_{4,6k+4}`, k >= 0: no type `(6, ..., 6, 4)`.
    SixesThenFour { k: usize },
    /// `R_{m,4k+2}`, m odd, k >= 1: no type `(6, 4, ..., 4)`.
    SixThenFours { m: usize, k: usize },
}

pub const FAMILY_IDS: [&str; 5] = [
    "three-row-with-four",
    "all-fours",
    "matchless-fours",
    "sixes-then-four",
    "six-then-fours",
];

impl ExclusionFamily {
    /// `params` is a comma-separated integer list: `n` / `m,n` / `k` / `k` / `m,k`.
    pub fn parse(id: &str, params: &str) -> Result<Self> {
        let nums = params
            .split([',', 'x', ' '])
            .filter(|t| !t.is_empty())
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad parameter {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let want = |k: usize| -> Result<()> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::Parse(format!("family {id} takes {k} parameter(s), got {}", nums.len())))
            }
        };
        let family = match id {
            "three-row-with-four" => {
                want(1)?;
                ExclusionFamily::ThreeRowWithFour { n: nums[0] }
            }
            "all-fours" => {
                want(2)?;
                ExclusionFamily::AllFours { m: nums[0], n: nums[1] }
            }
            "matchless-fours" => {
                want(1)?;
                ExclusionFamily::MatchlessFours { k: nums[0] }
            }
            "sixes-then-four" => {
                want(1)?;
                ExclusionFamily::SixesThenFour { k: nums[0] }
            }
            "six-then-fours" => {
                want(2)?;
                ExclusionFamily::SixThenFours { m: nums[0], k: nums[1] }
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unknown family {id:?}; known: {}",
                    FAMILY_IDS.join(", ")
                )))
            }
        };
        family.check()?;
        Ok(family)
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidDimensions(format!("{self}: {msg}")));
        match *self {
            ExclusionFamily::ThreeRowWithFour { n } if n < 4 || n % 2 == 1 => bad("n must be even and >= 4"),
            ExclusionFamily::AllFours { m, n } if m % 2 == 0 || n == 0 || n % 4 != 0 => {
                bad("m must be odd and n a positive multiple of 4")
            }
            ExclusionFamily::MatchlessFours { k } if k < 1 => bad("k must be >= 1"),
            ExclusionFamily::SixThenFours { m, k } if m % 2 == 0 || k < 1 => bad("m must be odd and k >= 1"),
            _ => Ok(()),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match *self {
            ExclusionFamily::ThreeRowWithFour { n } => (3, n),
            ExclusionFamily::AllFours { m, n } => (m, n),
            ExclusionFamily::MatchlessFours { k } => (4, 2 * k + 1),
            ExclusionFamily::SixesThenFour { k } => (4, 6 * k + 4),
            ExclusionFamily::SixThenFours { m, k } => (m, 4 * k + 2),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            ExclusionFamily::MatchlessFours { .. } => Mode::Matchless,
            _ => Mode::Derangement,
        }
    }

    /// The cycle types the family excludes at this size.
    pub fn excluded_types(&self) -> Vec<Partition> {
        let (m, n) = self.dims();
        let total = m * n;
        match *self {
            ExclusionFamily::ThreeRowWithFour { .. } => enumerate_partitions(total, PartitionFilter::Even)
                .into_iter()
                .filter(|p| p.min_part() == Some(4))
                .collect(),
            ExclusionFamily::AllFours { .. } => vec![Partition::from_sorted(vec![4; total / 4])],
            ExclusionFamily::MatchlessFours { k } => enumerate_partitions(total, PartitionFilter::Even)
                .into_iter()
                .filter(|p| p.min_part() >= Some(4) && p.count_of(4) >= 2 * k - 1)
                .collect(),
            ExclusionFamily::SixesThenFour { .. } => {
                let mut parts = vec![6; (total - 4) / 6];
                parts.push(4);
                vec![Partition::from_sorted(parts)]
            }
            ExclusionFamily::SixThenFours { .. } => {
                let mut parts = vec![6];
                parts.extend(std::iter::repeat_n(4, (total - 6) / 4));
                vec![Partition::from_sorted(parts)]
            }
        }
    }
}

impl fmt::Display for ExclusionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ExclusionFamily::ThreeRowWithFour { n } => write!(f, "three-row-with-four({n})"),
            ExclusionFamily::AllFours { m, n } => write!(f, "all-fours({m},{n})"),
            ExclusionFamily::MatchlessFours { k } => write!(f, "matchless-fours({k})"),
            ExclusionFamily::SixesThenFour { k } => write!(f, "sixes-then-four({k})"),
            ExclusionFamily::SixThenFours { m, k } => write!(f, "six-then-fours({m},{k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: ExclusionFamily,
    pub graph: String,
    pub mode: Mode,
    pub instances: Vec<Row>,
    /// Every scheduled type came back unrealizable.
    pub confirmed: bool,
    pub cap_hits: usize,
    /// Realized rows: each one contradicts the family.
    pub counterexamples: Vec<Row>,
}

pub fn verify_exclusion_family(
    family: ExclusionFamily,
    budget: Budget,
    workers: Option<usize>,
) -> Result<FamilyReport> {
    family.check()?;
    let (m, n) = family.dims();
    let graph = Graph::checkerboard(&[m, n])?;
    let types = family.excluded_types();
    let rows = run_rows(&graph, &types, family.mode(), budget, workers)?;
    let counterexamples: Vec<Row> = rows.iter().filter(|r| r.status == RowStatus::Realized).cloned().collect();
    let cap_hits = rows.iter().filter(|r| r.status == RowStatus::Cap).count();
    Ok(FamilyReport {
        family,
        graph: graph.label().unwrap_or_default().to_string(),
        mode: family.mode(),
        confirmed: !rows.is_empty() && rows.iter().all(|r| r.status == RowStatus::Unrealizable),
        cap_hits,
        counterexamples,
        instances: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn types(f: ExclusionFamily) -> Vec<String> {
        f.excluded_types().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn schemas() {
        assert_eq!(types(ExclusionFamily::ThreeRowWithFour { n: 4 }), ["8+4", "4+4+4"]);
        assert_eq!(
            types(ExclusionFamily::ThreeRowWithFour { n: 6 }),
            ["14+4", "10+4+4", "8+6+4", "6+4+4+4"]
        );
        assert_eq!(types(ExclusionFamily::AllFours { m: 5, n: 4 }), ["4+4+4+4+4"]);
        assert_eq!(types(ExclusionFamily::SixesThenFour { k: 0 }), ["6+6+4"]);
        assert_eq!(types(ExclusionFamily::SixesThenFour { k: 1 }), ["6+6+6+6+6+6+4"]);
        assert_eq!(types(ExclusionFamily::SixThenFours { m: 3, k: 1 }), ["6+4+4+4"]);
        assert_eq!(types(ExclusionFamily::MatchlessFours { k: 2 }), ["8+4+4+4", "4+4+4+4+4"]);
    }

    #[test]
    fn parsing() {
        assert_eq!(
            ExclusionFamily::parse("all-fours", "3,8").unwrap(),
            ExclusionFamily::AllFours { m: 3, n: 8 }
        );
        assert!(ExclusionFamily::parse("all-fours", "4,8").is_err());
        assert!(ExclusionFamily::parse("three-row-with-four", "5").is_err());
        assert!(ExclusionFamily::parse("nope", "1").is_err());
        assert!(ExclusionFamily::parse("sixes-then-four", "1,2").is_err());
    }

    #[test]
    fn small_instances_confirm() {
        for f in [
            ExclusionFamily::AllFours { m: 3, n: 4 },
            ExclusionFamily::SixesThenFour { k: 0 },
            ExclusionFamily::SixThenFours { m: 3, k: 1 },
            ExclusionFamily::MatchlessFours { k: 1 },
        ] {
            let r = verify_exclusion_family(f, Budget::default(), None).unwrap();
            assert!(r.confirmed, "{f}: {:?}", r.instances);
        }
    }
}
