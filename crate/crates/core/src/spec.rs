//! Graph spec strings (`rect:4x6`, `torus:3x3`, `file:g.txt`, ...) and the
//! plain-text graph file format: a header line `n m` followed by `m` lines
//! `u v` with 0-based endpoints.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Rect(Vec<usize>),
    Mobius(usize, usize),
    Torus(usize, usize),
    Cycle(usize),
    Complete(usize),
    File(PathBuf),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::Rect(dims) => Graph::checkerboard(dims),
            GraphSpec::Mobius(m, n) => Graph::moebius(*m, *n),
            GraphSpec::Torus(m, n) => Graph::torus(*m, *n),
            GraphSpec::Cycle(m) => Graph::cycle(*m),
            GraphSpec::Complete(n) => Graph::complete(*n),
            GraphSpec::File(path) => Ok(read_graph_file(path)?.with_label(self.to_string())),
        }
    }

    /// `(rows, cols)` for two-dimensional grid-family specs.
    pub fn grid_dims(&self) -> Option<(usize, usize)> {
        match self {
            GraphSpec::Rect(d) if d.len() == 2 => Some((d[0], d[1])),
            GraphSpec::Mobius(m, n) | GraphSpec::Torus(m, n) => Some((*m, *n)),
            _ => None,
        }
    }
}

fn dims(s: &str) -> Result<Vec<usize>> {
    s.split(['x', 'X'])
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad dimension {t:?}")))
        })
        .collect()
}

fn pair(kind: &str, s: &str) -> Result<(usize, usize)> {
    match dims(s)?.as_slice() {
        &[m, n] => Ok((m, n)),
        _ => Err(Error::Parse(format!("{kind} expects MxN, got {s:?}"))),
    }
}

fn single(kind: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{kind} expects an integer, got {s:?}")))
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("graph spec {s:?} is missing ':'")))?;
        match kind {
            "rect" => Ok(GraphSpec::Rect(dims(rest)?)),
            "mobius" | "moebius" => {
                let (m, n) = pair(kind, rest)?;
                Ok(GraphSpec::Mobius(m, n))
            }
            "torus" => {
                let (m, n) = pair(kind, rest)?;
                Ok(GraphSpec::Torus(m, n))
            }
            "cycle" => Ok(GraphSpec::Cycle(single(kind, rest)?)),
            "complete" => Ok(GraphSpec::Complete(single(kind, rest)?)),
            "file" if !rest.is_empty() => Ok(GraphSpec::File(PathBuf::from(rest))),
            _ => Err(Error::Parse(format!("unknown graph spec {s:?}"))),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Rect(d) => write!(
                f,
                "rect:{}",
                d.iter().map(usize::to_string).collect::<Vec<_>>().join("x")
            ),
            GraphSpec::Mobius(m, n) => write!(f, "mobius:{m}x{n}"),
            GraphSpec::Torus(m, n) => write!(f, "torus:{m}x{n}"),
            GraphSpec::Cycle(m) => write!(f, "cycle:{m}"),
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

pub fn read_graph_file(path: &Path) -> Result<Graph> {
    let file = std::fs::File::open(path)?;
    parse_graph(std::io::BufReader::new(file))
}

pub fn parse_graph<R: BufRead>(reader: R) -> Result<Graph> {
    let mut lines = reader
        .lines()
        .map(|l| l.map_err(Error::from))
        .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))??;
    let nums = |line: &str| -> Result<(usize, usize)> {
        let mut it = line.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
        });
        match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => Ok((a?, b?)),
            _ => Err(Error::Parse(format!("expected two integers, got {line:?}"))),
        }
    };
    let (n, m) = nums(&header)?;
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        edges.push(nums(&line?)?);
    }
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "header promises {m} edges, file has {}",
            edges.len()
        )));
    }
    Graph::new(n, &edges)
}

pub fn write_graph<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", graph.n(), graph.edge_count())?;
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        for s in ["rect:3x4", "rect:2x3x4", "mobius:3x1", "torus:4x4", "cycle:5", "complete:6", "file:/tmp/g.txt"] {
            let spec: GraphSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        for s in ["rect:3x4", "mobius:3x3", "torus:3x3", "cycle:5", "complete:6"] {
            let g = s.parse::<GraphSpec>().unwrap().build().unwrap();
            assert_eq!(g.label(), Some(s));
        }
        for bad in ["rect", "rect:3xy", "torus:3", "bogus:3", "cycle:a", "file:"] {
            assert!(bad.parse::<GraphSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn graph_file_round_trip() {
        let g = Graph::torus(3, 4).unwrap();
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        let back = parse_graph(&buf[..]).unwrap();
        assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        std::fs::write(&path, "3 2\n0 1\n1 2\n").unwrap();
        let spec = GraphSpec::File(path.clone());
        let g = spec.build().unwrap();
        assert_eq!((g.n(), g.edge_count()), (3, 2));
        assert_eq!(g.label(), Some(spec.to_string().as_str()));
    }

    #[test]
    fn bad_graph_files() {
        assert!(parse_graph(&b""[..]).is_err());
        assert!(parse_graph(&b"3 2\n0 1\n"[..]).is_err());
        assert!(parse_graph(&b"2 1\n0 5\n"[..]).is_err());
        assert!(parse_graph(&b"2 1\n1 1\n"[..]).is_err());
        assert!(parse_graph(&b"2 1\n0 1 2\n"[..]).is_err());
    }
}
