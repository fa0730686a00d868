//! Minimal CoNLL-U reader: only ID, UPOS and HEAD are used.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::{Graph, LinearArrangement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// 1-based position in the (possibly filtered) sentence.
    pub index: usize,
    /// Index of the head, 0 for the root or when the head was filtered out.
    pub head: usize,
    pub upos: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreebankSentence {
    pub tokens: Vec<Token>,
    /// Line of the input where the sentence starts.
    pub line: usize,
}

impl TreebankSentence {
    /// Edges {i, head(i)} for every token with a head.
    pub fn graph(&self) -> Result<Graph> {
        Graph::new(
            self.tokens.len(),
            self.tokens.iter().filter(|t| t.head != 0).map(|t| (t.index, t.head)),
        )
    }

    /// Sentence order.
    pub fn arrangement(&self) -> LinearArrangement {
        LinearArrangement::identity(self.tokens.len())
    }

    /// Σ |i − head(i)| over tokens with a head.
    pub fn sum_dependency_lengths(&self) -> u64 {
        self.tokens
            .iter()
            .filter(|t| t.head != 0)
            .map(|t| t.index.abs_diff(t.head) as u64)
            .sum()
    }
}

struct RawToken {
    id: usize,
    head: usize,
    upos: String,
    line: usize,
}

/// Reads every sentence. Multiword ranges (`3-4`) and empty nodes (`5.1`)
/// are skipped. With `exclude_punct`, PUNCT tokens are removed together
/// with their incident edges and the remaining tokens renumbered in order;
/// dependents of a removed token lose their head.
pub fn parse_conllu_lite<R: BufRead>(reader: R, exclude_punct: bool) -> Result<Vec<TreebankSentence>> {
    let mut sentences = Vec::new();
    let mut current: Vec<RawToken> = Vec::new();
    let mut start = 1;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(finish(std::mem::take(&mut current), start, exclude_punct)?);
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::parse(line_no, format!("expected 10 tab-separated columns, found {}", cols.len())));
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let id: usize = cols[0]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("token id `{}` is not an integer", cols[0])))?;
        if current.is_empty() {
            start = line_no;
        }
        if id != current.len() + 1 {
            return Err(Error::parse(line_no, format!("expected token id {}, found {id}", current.len() + 1)));
        }
        let head: usize = cols[6]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("head `{}` is not an integer", cols[6])))?;
        current.push(RawToken {
            id,
            head,
            upos: cols[3].to_string(),
            line: line_no,
        });
    }
    if !current.is_empty() {
        sentences.push(finish(current, start, exclude_punct)?);
    }
    Ok(sentences)
}

fn finish(raw: Vec<RawToken>, line: usize, exclude_punct: bool) -> Result<TreebankSentence> {
    let len = raw.len();
    if let Some(t) = raw.iter().find(|t| t.head > len) {
        return Err(Error::parse(t.line, format!("head {} is outside 0..={len}", t.head)));
    }
    let keep = |t: &RawToken| !(exclude_punct && t.upos == "PUNCT");
    // new index of each original id, 0 when dropped
    let mut renumber = vec![0; len + 1];
    let mut next = 0;
    for t in &raw {
        if keep(t) {
            next += 1;
            renumber[t.id] = next;
        }
    }
    let tokens = raw
        .iter()
        .filter(|t| keep(t))
        .map(|t| Token {
            index: renumber[t.id],
            head: renumber[t.head],
            upos: t.upos.clone(),
        })
        .collect();
    Ok(TreebankSentence { tokens, line })
}
