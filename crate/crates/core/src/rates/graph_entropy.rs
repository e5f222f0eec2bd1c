use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::cap_check;
use crate::graphs::{
    enumerate_independent_sets, is_proper, maximal_only, Coloring, Graph, IndependentSet,
    DEFAULT_INDEPENDENT_SET_CAP,
};
use crate::probmodel::ValidatedProblem;
use crate::{Error, Result};

use super::{pxy_f64, Argmin, Diagnostics, Quantity, RateReport};

/// Largest number of grid kernels the brute-force oracle will evaluate.
pub const BRUTEFORCE_CAP: u128 = 20_000_000;

/// A channel from inputs to independent sets with `p(w|x) > 0` only when
/// `x` belongs to `sets[w]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndependentSetChannel {
    pub sets: Vec<IndependentSet>,
    pub kernel: Vec<Vec<f64>>,
}

impl IndependentSetChannel {
    pub fn new(sets: Vec<IndependentSet>, kernel: Vec<Vec<f64>>) -> Result<Self> {
        for (x, row) in kernel.iter().enumerate() {
            if row.len() != sets.len() {
                return Err(Error::ShapeMismatch(format!(
                    "kernel row {x} has {} entries, expected {}",
                    row.len(),
                    sets.len()
                )));
            }
            for (w, &k) in row.iter().enumerate() {
                if k.is_nan() || k < 0.0 {
                    return Err(Error::NegativeMass {
                        location: format!("kernel[{x}][{w}]"),
                    });
                }
                if k > 0.0 && !sets[w].contains(x) {
                    return Err(Error::InvalidArgument(format!(
                        "kernel[{x}][{w}] is positive but {x} is not in set {:?}",
                        sets[w].members
                    )));
                }
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::NonNormalized {
                    location: format!("kernel row {x}"),
                    sum: total.to_string(),
                });
            }
        }
        Ok(Self { sets, kernel })
    }

    /// The deterministic channel sending each vertex to its color class.
    pub fn from_coloring(g: &Graph, c: &Coloring) -> Result<Self> {
        if !is_proper(g, c)? {
            let (a, b) = g
                .edges()
                .into_iter()
                .find(|&(a, b)| c.colors[a] == c.colors[b])
                .expect("an improper coloring has a monochromatic edge");
            return Err(Error::ImproperColoring(a, b));
        }
        let classes = c.classes();
        let mut kernel = vec![vec![0.0; classes.len()]; g.len()];
        for (w, class) in classes.iter().enumerate() {
            for &x in class {
                kernel[x][w] = 1.0;
            }
        }
        let sets = classes
            .into_iter()
            .map(|members| IndependentSet { members })
            .collect();
        Self::new(sets, kernel)
    }

    /// `I(W;X|Y)` in bits when `W` is drawn through this channel from `X`.
    pub fn conditional_information(&self, p: &ValidatedProblem) -> Result<f64> {
        if self.kernel.len() != p.x_len() {
            return Err(Error::ShapeMismatch(format!(
                "channel has {} rows, problem has {} inputs",
                self.kernel.len(),
                p.x_len()
            )));
        }
        Ok(channel_information(&pxy_f64(p), &self.kernel))
    }
}

/// `I(W;X|Y) = sum_{x,y} p(x,y) D(p(.|x) || q(.|y))` in bits, where
/// `q(w|y) = sum_x p(x|y) p(w|x)` and `W` depends on `(X,Y)` only through `X`.
pub(crate) fn channel_information(pxy: &[Vec<f64>], kernel: &[Vec<f64>]) -> f64 {
    let ny = pxy.first().map_or(0, Vec::len);
    let nw = kernel.first().map_or(0, Vec::len);
    let mut total = 0.0;
    for y in 0..ny {
        let py: f64 = pxy.iter().map(|r| r[y]).sum();
        if py <= 0.0 {
            continue;
        }
        let q: Vec<f64> = (0..nw)
            .map(|w| {
                pxy.iter()
                    .zip(kernel)
                    .map(|(r, k)| r[y] * k[w])
                    .sum::<f64>()
                    / py
            })
            .collect();
        for (r, k) in pxy.iter().zip(kernel) {
            if r[y] <= 0.0 {
                continue;
            }
            for w in 0..nw {
                if k[w] > 0.0 {
                    total += r[y] * k[w] * (k[w] / q[w]).log2();
                }
            }
        }
    }
    total.max(0.0)
}

/// Settings for the alternating-minimization solver.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Stop once the projected remaining change of the objective, from the
    /// last step and its geometric contraction rate, is below this (bits).
    pub tolerance: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Restrict `W` to maximal independent sets.
    pub maximal_sets_only: bool,
    /// Vertex cap for independent-set enumeration.
    pub set_cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 100_000,
            restarts: 8,
            seed: 0,
            maximal_sets_only: false,
            set_cap: DEFAULT_INDEPENDENT_SET_CAP,
        }
    }
}

struct Outcome {
    kernel: Vec<Vec<f64>>,
    value: f64,
    iterations: usize,
    gap: f64,
}

struct Instance<'a> {
    pxy: &'a [Vec<f64>],
    /// `p(y|x)`
    py_x: Vec<Vec<f64>>,
    /// `p(x|y)`, indexed `[y][x]`
    px_y: Vec<Vec<f64>>,
    /// Sets containing each input.
    choices: Vec<Vec<usize>>,
    nw: usize,
}

impl Instance<'_> {
    fn run(&self, mut kernel: Vec<Vec<f64>>, cfg: &SolverConfig) -> Result<Outcome> {
        let ny = self.px_y.len();
        let mut value = channel_information(self.pxy, &kernel);
        let mut q = vec![vec![0.0; self.nw]; ny];
        let mut gap = f64::INFINITY;
        for it in 1..=cfg.max_iterations {
            for (y, qy) in q.iter_mut().enumerate() {
                for (w, slot) in qy.iter_mut().enumerate() {
                    *slot = self.px_y[y]
                        .iter()
                        .zip(&kernel)
                        .map(|(p, k)| p * k[w])
                        .sum();
                }
            }
            for (x, row) in kernel.iter_mut().enumerate() {
                let logits: Vec<f64> = self.choices[x]
                    .iter()
                    .map(|&w| {
                        self.py_x[x]
                            .iter()
                            .zip(&q)
                            .filter(|(p, _)| **p > 0.0)
                            .map(|(p, qy)| p * qy[w].ln())
                            .sum()
                    })
                    .collect();
                let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let weights: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
                let norm: f64 = weights.iter().sum();
                row.iter_mut().for_each(|k| *k = 0.0);
                for (&w, wt) in self.choices[x].iter().zip(&weights) {
                    row[w] = wt / norm;
                }
            }
            let next = channel_information(self.pxy, &kernel);
            let previous_gap = gap;
            gap = (value - next).abs();
            value = next;
            // geometric tail estimate of the distance still to travel
            let ratio = gap / previous_gap;
            let remaining = if gap == 0.0 {
                0.0
            } else if ratio < 1.0 {
                gap * (ratio / (1.0 - ratio)).max(1.0)
            } else {
                f64::INFINITY
            };
            if remaining < cfg.tolerance {
                return Ok(Outcome {
                    kernel,
                    value,
                    iterations: it,
                    gap,
                });
            }
        }
        Err(Error::NonConvergence {
            iterations: cfg.max_iterations,
            last_change: gap,
        })
    }
}

fn check_vertices(p: &ValidatedProblem, g: &Graph) -> Result<()> {
    if g.len() != p.x_len() {
        return Err(Error::ShapeMismatch(format!(
            "graph has {} vertices, problem has {} inputs",
            g.len(),
            p.x_len()
        )));
    }
    Ok(())
}

fn sets_containing(sets: &[IndependentSet], n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|x| (0..sets.len()).filter(|&w| sets[w].contains(x)).collect())
        .collect()
}

/// `min I(W;X|Y)` over channels from `X` to independent sets of `g` that
/// contain `X`, by alternating minimization over `p(w|x)` and `q(w|y)`.
///
/// Each restart starts from a uniform kernel with multiplicative jitter drawn
/// from a ChaCha stream keyed by `(seed, restart)`. The lowest value wins,
/// ties going to the earliest restart. Any restart that exhausts the
/// iteration budget makes the call fail.
pub fn conditional_graph_entropy(
    p: &ValidatedProblem,
    g: &Graph,
    cfg: &SolverConfig,
) -> Result<RateReport> {
    check_vertices(p, g)?;
    if cfg.restarts == 0 {
        return Err(Error::InvalidArgument(
            "at least one restart is required".into(),
        ));
    }
    let mut sets = enumerate_independent_sets(g, cfg.set_cap)?;
    if cfg.maximal_sets_only {
        sets = maximal_only(&sets);
    }
    let pxy = pxy_f64(p);
    let (nx, ny) = (p.x_len(), p.y_len());
    let px: Vec<f64> = pxy.iter().map(|r| r.iter().sum()).collect();
    let py: Vec<f64> = (0..ny).map(|y| pxy.iter().map(|r| r[y]).sum()).collect();
    let inst = Instance {
        pxy: &pxy,
        py_x: (0..nx)
            .map(|x| (0..ny).map(|y| pxy[x][y] / px[x]).collect())
            .collect(),
        px_y: (0..ny)
            .map(|y| (0..nx).map(|x| pxy[x][y] / py[y]).collect())
            .collect(),
        choices: sets_containing(&sets, nx),
        nw: sets.len(),
    };
    let mut best: Option<(usize, Outcome)> = None;
    for r in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(r as u64);
        let init = inst
            .choices
            .iter()
            .map(|ws| {
                let mut row = vec![0.0; inst.nw];
                for &w in ws {
                    row[w] = 1.0 + 0.5 * rng.gen::<f64>();
                }
                let norm: f64 = row.iter().sum();
                row.iter_mut().for_each(|k| *k /= norm);
                row
            })
            .collect();
        let out = inst.run(init, cfg)?;
        if best.as_ref().is_none_or(|(_, b)| out.value < b.value) {
            best = Some((r, out));
        }
    }
    let (best_restart, out) = best.expect("at least one restart ran");
    Ok(RateReport {
        quantity: Quantity::ConditionalGraphEntropy,
        value: out.value,
        argmin: Argmin::Channel(IndependentSetChannel {
            sets,
            kernel: out.kernel,
        }),
        diagnostics: Some(Diagnostics {
            iterations: out.iterations,
            final_gap: out.gap,
            restarts: cfg.restarts,
            best_restart,
        }),
    })
}

/// All ways to split `total` grid units among `parts` slots.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .rev()
        .flat_map(|first| {
            compositions(total - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

fn binomial(n: u128, k: u128) -> u128 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

/// Grid-search oracle for [`conditional_graph_entropy`].
///
/// Evaluates `H(W|Y) - H(W|X)` for every kernel whose entries are multiples
/// of `grid_step` and returns the smallest value. Requires `|X| <= 3`, at most
/// seven independent sets, and `grid_step = 1/N` with `1 <= N <= 16`.
pub fn conditional_graph_entropy_bruteforce(
    p: &ValidatedProblem,
    g: &Graph,
    grid_step: f64,
) -> Result<f64> {
    check_vertices(p, g)?;
    let steps = (1.0 / grid_step).round();
    if !(1.0..=16.0).contains(&steps) || (steps * grid_step - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "grid step {grid_step} is not 1/N for N in 1..=16"
        )));
    }
    let steps = steps as usize;
    cap_check("oracle input alphabet", p.x_len() as u128, 3)?;
    let sets = enumerate_independent_sets(g, 3)?;
    cap_check("oracle independent-set count", sets.len() as u128, 7)?;
    let choices = sets_containing(&sets, p.x_len());
    let combos = choices.iter().fold(1u128, |acc, c| {
        acc.saturating_mul(binomial(
            (steps + c.len() - 1) as u128,
            (c.len() - 1) as u128,
        ))
    });
    cap_check("oracle grid size", combos, BRUTEFORCE_CAP)?;

    let pxy = pxy_f64(p);
    let (ny, nw) = (p.y_len(), sets.len());
    let py: Vec<f64> = (0..ny).map(|y| pxy.iter().map(|r| r[y]).sum()).collect();
    // per input: list of (kernel row, p(x) H(W|X=x))
    let rows: Vec<Vec<(Vec<f64>, f64)>> = choices
        .iter()
        .zip(&pxy)
        .map(|(ws, pr)| {
            let px: f64 = pr.iter().sum();
            compositions(steps, ws.len())
                .into_iter()
                .map(|c| {
                    let mut row = vec![0.0; nw];
                    for (&w, &units) in ws.iter().zip(&c) {
                        row[w] = units as f64 / steps as f64;
                    }
                    let h: f64 = row
                        .iter()
                        .filter(|&&k| k > 0.0)
                        .map(|&k| -k * k.log2())
                        .sum();
                    (row, px * h)
                })
                .collect()
        })
        .collect();

    fn search(
        depth: usize,
        rows: &[Vec<(Vec<f64>, f64)>],
        pxy: &[Vec<f64>],
        py: &[f64],
        acc: &[f64],
        h_wx: f64,
        best: &mut f64,
    ) {
        let nw = acc.len() / py.len();
        if depth == rows.len() {
            // acc[y * nw + w] = p(y, w)
            let mut h_wy = 0.0;
            for (y, &pyv) in py.iter().enumerate() {
                for &m in &acc[y * nw..(y + 1) * nw] {
                    if m > 0.0 {
                        h_wy -= m * (m / pyv).log2();
                    }
                }
            }
            *best = best.min(h_wy - h_wx);
            return;
        }
        let mut next = acc.to_vec();
        for (row, h) in &rows[depth] {
            for (y, &m) in pxy[depth].iter().enumerate() {
                for w in 0..nw {
                    next[y * nw + w] = acc[y * nw + w] + m * row[w];
                }
            }
            search(depth + 1, rows, pxy, py, &next, h_wx + h, best);
        }
    }

    let mut best = f64::INFINITY;
    search(0, &rows, &pxy, &py, &vec![0.0; ny * nw], 0.0, &mut best);
    Ok(best.max(0.0))
}
