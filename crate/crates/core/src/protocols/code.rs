use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graphs::Coloring;
use crate::probmodel::rational::{sum, to_f64};
use crate::probmodel::Rational;
use crate::{Error, Result};

/// Binary prefix-free code indexed by message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixCode {
    codewords: Vec<String>,
}

impl PrefixCode {
    /// Rejects non-binary symbols, prefix collisions, Kraft violations and an
    /// empty codeword alongside other messages.
    pub fn new(codewords: Vec<String>) -> Result<Self> {
        if let Some(w) = codewords
            .iter()
            .find(|w| w.chars().any(|c| c != '0' && c != '1'))
        {
            return Err(Error::InvalidArgument(format!(
                "codeword {w:?} is not binary"
            )));
        }
        if codewords.len() > 1 && codewords.iter().any(String::is_empty) {
            return Err(Error::InvalidArgument(
                "empty codeword requires a single message".into(),
            ));
        }
        for (i, a) in codewords.iter().enumerate() {
            for (j, b) in codewords.iter().enumerate() {
                if i != j && b.starts_with(a.as_str()) {
                    return Err(Error::InvalidArgument(format!(
                        "codeword {a:?} is a prefix of {b:?}"
                    )));
                }
            }
        }
        // prefix-free binary codes always satisfy Kraft; checked for clarity
        let kraft: f64 = codewords.iter().map(|w| 0.5f64.powi(w.len() as i32)).sum();
        if kraft > 1.0 + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "Kraft sum {kraft} exceeds 1"
            )));
        }
        Ok(Self { codewords })
    }

    pub fn codewords(&self) -> &[String] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.codewords.iter().map(String::len).collect()
    }

    pub fn kraft_sum(&self) -> f64 {
        self.codewords
            .iter()
            .map(|w| 0.5f64.powi(w.len() as i32))
            .sum()
    }
}

/// Optimal binary prefix code for `pm`, in canonical form.
///
/// Merges always take the two lightest nodes, ties broken by creation order
/// (symbols first, in index order). Codewords are then reassigned
/// canonically by (length, index). A single message gets the empty codeword.
pub fn huffman_code(pm: &[Rational]) -> PrefixCode {
    let n = pm.len();
    if n <= 1 {
        return PrefixCode {
            codewords: vec![String::new(); n],
        };
    }
    let mut heap = BinaryHeap::new();
    // node id -> children
    let mut children: Vec<Option<(usize, usize)>> = vec![None; n];
    for (i, w) in pm.iter().enumerate() {
        heap.push(Reverse((w.clone(), i)));
    }
    while heap.len() > 1 {
        let Reverse((wa, a)) = heap.pop().expect("heap has two nodes");
        let Reverse((wb, b)) = heap.pop().expect("heap has two nodes");
        children.push(Some((a, b)));
        heap.push(Reverse((wa + wb, children.len() - 1)));
    }
    let root = children.len() - 1;
    let mut depth = vec![0usize; n];
    let mut stack = vec![(root, 0usize)];
    while let Some((node, d)) = stack.pop() {
        match children[node] {
            Some((a, b)) => {
                stack.push((a, d + 1));
                stack.push((b, d + 1));
            }
            None => depth[node] = d,
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (depth[i], i));
    let mut codewords = vec![String::new(); n];
    let mut next: u128 = 0;
    let mut prev_len = depth[order[0]];
    for &i in &order {
        next <<= depth[i] - prev_len;
        prev_len = depth[i];
        codewords[i] = format!("{next:0width$b}", width = depth[i]);
        next += 1;
    }
    PrefixCode { codewords }
}

/// Expected Huffman codeword length (bits) for sending the color of a vertex
/// drawn from `pmf`.
pub fn coloring_huffman_rate(pmf: &[Rational], c: &Coloring) -> Result<f64> {
    if pmf.len() != c.colors.len() {
        return Err(Error::IncompleteColoring {
            expected: pmf.len(),
            got: c.colors.len(),
        });
    }
    let masses: Vec<Rational> = c
        .classes()
        .iter()
        .map(|class| sum(class.iter().map(|&v| &pmf[v])))
        .collect();
    let code = huffman_code(&masses);
    Ok(masses
        .iter()
        .zip(code.lengths())
        .map(|(m, len)| to_f64(m) * len as f64)
        .sum())
}
