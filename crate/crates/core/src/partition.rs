//! Integer partitions, used both as cycle types and as search targets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A partition: positive parts in non-increasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Canonicalizes `parts` into non-increasing order. Zero parts are rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub(crate) fn from_sorted(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn min_part(&self) -> Option<usize> {
        self.parts.last().copied()
    }

    pub fn is_even(&self) -> bool {
        self.parts.iter().all(|p| p % 2 == 0)
    }

    pub fn count_of(&self, part: usize) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
    }
}

/// Parses `"6+6+4"`; `","` is accepted as a separator too. Order is canonicalized.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Partition { parts: Vec::new() });
        }
        let parts = s
            .split(['+', ','])
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which partitions of `n` to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionFilter {
    All,
    /// Every part even.
    Even,
    /// Every part at least `k`.
    MinPart(usize),
}

/// Partitions of `n` in reverse-lexicographic order: `(n)` first, all-ones
/// (or the finest admissible partition) last.
pub fn enumerate_partitions(n: usize, filter: PartitionFilter) -> Vec<Partition> {
    let (step, min) = match filter {
        PartitionFilter::All => (1, 1),
        PartitionFilter::Even => (2, 2),
        PartitionFilter::MinPart(k) => (1, k.max(1)),
    };
    let mut out = Vec::new();
    let mut current = Vec::new();
    descend(n, n, step, min, &mut current, &mut out);
    out
}

fn descend(
    remaining: usize,
    max_part: usize,
    step: usize,
    min: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition::from_sorted(current.clone()));
        return;
    }
    let mut part = max_part.min(remaining);
    // Parts are multiples of `step` in the even family.
    part -= part % step;
    while part >= min {
        current.push(part);
        descend(remaining - part, part, step, min, current, out);
        current.pop();
        part -= step;
    }
}
