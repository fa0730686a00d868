//! Plain-text graph and arrangement files.
//!
//! Edge lists start with a header line `n m` followed by `m` lines `u v`.
//! Arrangements are a single line of `n` positions, the i-th being the
//! position of vertex i. Lines starting with `#` and blank lines are
//! ignored in both.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, LinearArrangement};

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, line)| line.map(|l| (i + 1, l)).map_err(Error::from))
        .filter(|r| match r {
            Ok((_, l)) => {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            }
            Err(_) => true,
        })
}

fn parse_fields<const K: usize>(line_no: usize, line: &str) -> Result<[usize; K]> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != K {
        return Err(Error::parse(line_no, format!("expected {K} integers, found {}", fields.len())));
    }
    let mut out = [0; K];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f
            .parse()
            .map_err(|_| Error::parse(line_no, format!("`{f}` is not a non-negative integer")))?;
    }
    Ok(out)
}

pub fn read_graph<R: BufRead>(reader: R) -> Result<Graph> {
    let mut lines = content_lines(reader);
    let (line_no, header) = lines
        .next()
        .transpose()?
        .ok_or_else(|| Error::parse(0, "missing `n m` header"))?;
    let [n, m] = parse_fields::<2>(line_no, &header)?;
    let mut edges = Vec::with_capacity(m);
    for entry in lines {
        let (line_no, line) = entry?;
        let [u, v] = parse_fields::<2>(line_no, &line)?;
        edges.push((u, v));
        if edges.len() > m {
            return Err(Error::parse(line_no, format!("more than the declared {m} edges")));
        }
    }
    if edges.len() != m {
        return Err(Error::parse(0, format!("declared {m} edges, found {}", edges.len())));
    }
    Graph::new(n, edges)
}

pub fn write_graph<W: Write>(g: &Graph, mut writer: W) -> Result<()> {
    writeln!(writer, "{} {}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(writer, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_arrangement<R: BufRead>(reader: R) -> Result<LinearArrangement> {
    let mut lines = content_lines(reader);
    let positions = match lines.next().transpose()? {
        None => Vec::new(),
        Some((line_no, line)) => {
            if let Some(extra) = lines.next().transpose()? {
                return Err(Error::parse(extra.0, "an arrangement is a single line"));
            }
            line.split_whitespace()
                .map(|f| {
                    f.parse()
                        .map_err(|_| Error::parse(line_no, format!("`{f}` is not a position")))
                })
                .collect::<Result<Vec<usize>>>()?
        }
    };
    LinearArrangement::new(positions)
}

pub fn write_arrangement<W: Write>(a: &LinearArrangement, mut writer: W) -> Result<()> {
    let line: Vec<String> = a.positions().iter().map(usize::to_string).collect();
    writeln!(writer, "{}", line.join(" "))?;
    Ok(())
}

pub fn open(path: &Path) -> Result<std::io::BufReader<std::fs::File>> {
    std::fs::File::open(path)
        .map(std::io::BufReader::new)
        .map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })
}

pub fn read_graph_file(path: &Path) -> Result<Graph> {
    read_graph(open(path)?)
}

pub fn read_arrangement_file(path: &Path) -> Result<LinearArrangement> {
    read_arrangement(open(path)?)
}
