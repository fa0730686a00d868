//! A 17-word dependency tree used as a worked example throughout the crate.
//!
//! Only the tree's published invariants are reproduced: n = 17, m = 16,
//! D = 40 in sentence order, length spectrum {1:8, 2:3, 3:1, 4:2, 6:1, 9:1}
//! and degree multiset {5, 5, 3, 2×5, 1×9} (Σk² = 88). The commonly printed
//! degree table lists n(2) = 6, n(3) = 0, which breaks the handshaking lemma
//! (Σk = 31 for 16 edges); the spectrum above is the one consistent with
//! ⟨k²⟩ = 88/17.

use crate::graph::{Graph, LinearArrangement};

/// Edges of the tree, words numbered by sentence position.
pub const SENTENCE_EDGES: [(usize, usize); 16] = [
    (1, 2),
    (2, 4),
    (3, 4),
    (4, 13),
    (5, 6),
    (6, 9),
    (7, 13),
    (8, 9),
    (9, 10),
    (9, 11),
    (9, 13),
    (12, 13),
    (12, 14),
    (13, 17),
    (14, 15),
    (15, 16),
];

/// Word 13 is the root; every other word points to its neighbour on the
/// path towards it.
pub const SENTENCE_HEADS: [usize; 17] = [2, 4, 4, 13, 6, 9, 13, 9, 13, 9, 9, 13, 0, 12, 14, 15, 13];

/// The tree with its sentence-order arrangement (the identity).
pub fn sentence() -> (Graph, LinearArrangement) {
    let g = Graph::new(17, SENTENCE_EDGES).expect("fixture is a simple graph");
    (g, LinearArrangement::identity(17))
}

/// The same tree as a CoNLL-U document with one sentence and no punctuation.
pub fn sentence_conllu() -> String {
    let mut out = String::from("# text = seventeen word fixture\n");
    for (i, head) in SENTENCE_HEADS.iter().enumerate() {
        let id = i + 1;
        let rel = if *head == 0 { "root" } else { "dep" };
        out.push_str(&format!("{id}\tw{id}\tw{id}\tX\t_\t_\t{head}\t{rel}\t_\t_\n"));
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heads_agree_with_edges() {
        let mut from_heads: Vec<(usize, usize)> = SENTENCE_HEADS
            .iter()
            .enumerate()
            .filter(|(_, &h)| h != 0)
            .map(|(i, &h)| ((i + 1).min(h), (i + 1).max(h)))
            .collect();
        from_heads.sort_unstable();
        assert_eq!(from_heads, SENTENCE_EDGES.to_vec());
    }
}
