use crate::error::cap_check;
use crate::graphs::{Coloring, Graph};
use crate::probmodel::entropy_bits;
use crate::{Error, Result};

use super::{Argmin, Quantity, RateReport};

pub const DEFAULT_CHROMATIC_CAP: usize = 12;

struct Search<'a> {
    g: &'a Graph,
    px: &'a [f64],
    order: Vec<usize>,
    /// suffix sums of px along `order`
    remaining: Vec<f64>,
    blocks: Vec<(f64, Vec<usize>)>,
    assignment: Vec<usize>,
    best: f64,
    best_assignment: Vec<usize>,
}

impl Search<'_> {
    /// Entropy of the block masses after pouring `rest` into the heaviest
    /// block. Every completion is majorized by this vector, so its entropy is
    /// a lower bound.
    fn lower_bound(&self, rest: f64) -> f64 {
        let Some(heaviest) = self
            .blocks
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
            .map(|(i, _)| i)
        else {
            return 0.0;
        };
        entropy_bits(self.blocks.iter().enumerate().map(|(i, b)| {
            if i == heaviest {
                b.0 + rest
            } else {
                b.0
            }
        }))
    }

    fn run(&mut self, depth: usize) {
        if depth == self.order.len() {
            let h = entropy_bits(self.blocks.iter().map(|b| b.0));
            if h < self.best - 1e-12 {
                self.best = h;
                self.best_assignment = self.assignment.clone();
            }
            return;
        }
        if self.lower_bound(self.remaining[depth]) >= self.best - 1e-12 {
            return;
        }
        let v = self.order[depth];
        let mass = self.px[v];
        for b in 0..self.blocks.len() {
            if self.blocks[b].1.iter().any(|&u| self.g.has_edge(u, v)) {
                continue;
            }
            self.blocks[b].0 += mass;
            self.blocks[b].1.push(v);
            self.assignment[v] = b;
            self.run(depth + 1);
            self.blocks[b].1.pop();
            self.blocks[b].0 -= mass;
        }
        self.blocks.push((mass, vec![v]));
        self.assignment[v] = self.blocks.len() - 1;
        self.run(depth + 1);
        self.blocks.pop();
    }
}

/// Minimum entropy of the color distribution over proper colorings of `g`
/// under vertex pmf `px`.
///
/// Exhaustive over partitions of the vertex set into independent sets, with
/// branch-and-bound on entropy. Colors in the returned coloring are numbered
/// by first use along decreasing vertex probability.
pub fn chromatic_entropy(g: &Graph, px: &[f64], cap: usize) -> Result<RateReport> {
    if px.len() != g.len() {
        return Err(Error::ShapeMismatch(format!(
            "pmf has {} entries, graph has {} vertices",
            px.len(),
            g.len()
        )));
    }
    cap_check(
        "chromatic-entropy vertex count",
        g.len() as u128,
        cap as u128,
    )?;
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| px[b].total_cmp(&px[a]).then(a.cmp(&b)));
    let mut remaining = vec![0.0; order.len() + 1];
    for i in (0..order.len()).rev() {
        remaining[i] = remaining[i + 1] + px[order[i]];
    }
    let mut search = Search {
        g,
        px,
        order,
        remaining,
        blocks: Vec::new(),
        assignment: vec![0; g.len()],
        best: f64::INFINITY,
        best_assignment: vec![0; g.len()],
    };
    search.run(0);
    let coloring = Coloring {
        colors: search.best_assignment,
    };
    // recompute from normalized class masses so a single class gives exactly 0
    let total: f64 = px.iter().sum();
    let masses = coloring
        .classes()
        .iter()
        .map(|c| c.iter().map(|&v| px[v]).sum::<f64>() / total)
        .collect::<Vec<_>>();
    let value = entropy_bits(masses).max(0.0);
    Ok(RateReport {
        quantity: Quantity::ChromaticEntropy,
        value,
        argmin: Argmin::Coloring(coloring),
        diagnostics: None,
    })
}
