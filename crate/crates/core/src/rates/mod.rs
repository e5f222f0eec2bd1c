//! Rate quantities: chromatic entropy, `H(X_EQ|Y)` and conditional graph
//! entropy, plus the reduction from a general auxiliary channel to an
//! independent-set channel.

mod chromatic;
mod graph_entropy;
mod reduction;

pub use chromatic::{chromatic_entropy, DEFAULT_CHROMATIC_CAP};
pub use graph_entropy::{
    conditional_graph_entropy, conditional_graph_entropy_bruteforce, IndependentSetChannel,
    SolverConfig, BRUTEFORCE_CAP,
};
pub use reduction::{reduce_u_to_w, AuxiliaryChannel};

use crate::graphs::{power_graph, power_pmf, Coloring, Which};
use crate::probmodel::rational::to_f64;
use crate::probmodel::ValidatedProblem;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    ChromaticEntropy,
    ConditionalEntropyXeq,
    ConditionalGraphEntropy,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Argmin {
    Coloring(Coloring),
    Channel(IndependentSetChannel),
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// Iterations used by the winning restart.
    pub iterations: usize,
    /// Objective change at the last iteration of the winning restart.
    pub final_gap: f64,
    pub restarts: usize,
    pub best_restart: usize,
}

/// A rate in bits together with the object attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct RateReport {
    pub quantity: Quantity,
    pub value: f64,
    pub argmin: Argmin,
    pub diagnostics: Option<Diagnostics>,
}

/// Floating-point `p(x,y)` table.
pub(crate) fn pxy_f64(p: &ValidatedProblem) -> Vec<Vec<f64>> {
    (0..p.x_len())
        .map(|x| (0..p.y_len()).map(|y| to_f64(p.p_xy(x, y))).collect())
        .collect()
}

/// `(1/n) H_chi(G^n, X^n)` for the n-fold power of the chosen graph under the
/// i.i.d. input distribution. The argmin is a coloring of the power graph.
pub fn chromatic_entropy_per_symbol(
    p: &ValidatedProblem,
    which: Which,
    n: usize,
    power_cap: usize,
    chromatic_cap: usize,
) -> Result<RateReport> {
    let g = power_graph(p, which, n, power_cap)?;
    let tuple_px: Vec<f64> = power_pmf(p, which, n, power_cap)?
        .iter()
        .map(to_f64)
        .collect();
    let mut report = chromatic_entropy(&g, &tuple_px, chromatic_cap)?;
    report.value /= n as f64;
    Ok(report)
}

/// `H(X|Y)` of a problem; on a quotient this is `H(X_EQ|Y)`.
pub fn conditional_entropy_xeq(q: &ValidatedProblem) -> f64 {
    let pxy = pxy_f64(q);
    let py: Vec<f64> = (0..q.y_len())
        .map(|y| pxy.iter().map(|r| r[y]).sum())
        .collect();
    let mut h = 0.0;
    for row in &pxy {
        for (y, &m) in row.iter().enumerate() {
            if m > 0.0 {
                h += m * (py[y] / m).log2();
            }
        }
    }
    h.max(0.0)
}
