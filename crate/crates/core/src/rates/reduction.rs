use crate::graphs::{Graph, IndependentSet};
use crate::probmodel::rational::to_f64;
use crate::probmodel::ValidatedProblem;
use crate::{Error, Result};

use super::graph_entropy::channel_information;
use super::{pxy_f64, IndependentSetChannel};

/// Tolerance for checking that an auxiliary channel reproduces `p(z|x,y)`.
const CHANNEL_TOLERANCE: f64 = 1e-9;

/// A channel `p(u|x)` to an auxiliary alphabet `0..u_size`.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxiliaryChannel {
    pub u_size: usize,
    pub kernel: Vec<Vec<f64>>,
}

impl AuxiliaryChannel {
    pub fn new(u_size: usize, kernel: Vec<Vec<f64>>) -> Result<Self> {
        for (x, row) in kernel.iter().enumerate() {
            if row.len() != u_size {
                return Err(Error::ShapeMismatch(format!(
                    "kernel row {x} has {} entries, expected {u_size}",
                    row.len()
                )));
            }
            if let Some(u) = row.iter().position(|k| k.is_nan() || *k < 0.0) {
                return Err(Error::NegativeMass {
                    location: format!("kernel[{x}][{u}]"),
                });
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::NonNormalized {
                    location: format!("kernel row {x}"),
                    sum: total.to_string(),
                });
            }
        }
        Ok(Self { u_size, kernel })
    }

    /// `I(U;X|Y)` in bits.
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

/// Replaces each auxiliary symbol `u` by its support `{x : p(u|x) > 0}`.
///
/// `bob_kernel[u][y][z]` is Bob's output rule given `u` and `y`; together with
/// `u` it must reproduce `p(z|x,y)` on supported pairs within `1e-9`. Symbols
/// with the same support are merged. The resulting sets are sorted by size,
/// then members. Supports are checked for independence before the channel is
/// checked.
pub fn reduce_u_to_w(
    p: &ValidatedProblem,
    g: &Graph,
    u: &AuxiliaryChannel,
    bob_kernel: &[Vec<Vec<f64>>],
) -> Result<IndependentSetChannel> {
    let (nx, ny, nz) = (p.x_len(), p.y_len(), p.z_len());
    if g.len() != nx || u.kernel.len() != nx {
        return Err(Error::ShapeMismatch(format!(
            "graph has {} vertices and channel {} rows, problem has {nx} inputs",
            g.len(),
            u.kernel.len()
        )));
    }
    let bob_shape_ok = bob_kernel.len() == u.u_size
        && bob_kernel
            .iter()
            .all(|plane| plane.len() == ny && plane.iter().all(|row| row.len() == nz));
    if !bob_shape_ok {
        return Err(Error::ShapeMismatch(format!(
            "bob kernel must be {} x {ny} x {nz}",
            u.u_size
        )));
    }

    let supports: Vec<Vec<usize>> = (0..u.u_size)
        .map(|s| (0..nx).filter(|&x| u.kernel[x][s] > 0.0).collect())
        .collect();
    for (s, support) in supports.iter().enumerate() {
        for (i, &a) in support.iter().enumerate() {
            if support[i + 1..].iter().any(|&b| g.has_edge(a, b)) {
                return Err(Error::InfeasibleU {
                    u: s,
                    support: support.clone(),
                });
            }
        }
    }

    for x in 0..nx {
        for y in (0..ny).filter(|&y| p.supported(x, y)) {
            for z in 0..nz {
                let produced: f64 = (0..u.u_size)
                    .map(|s| u.kernel[x][s] * bob_kernel[s][y][z])
                    .sum();
                let gap = (produced - to_f64(&p.row(x, y)[z])).abs();
                if gap > CHANNEL_TOLERANCE {
                    return Err(Error::ChannelMismatch { x, y, z, gap });
                }
            }
        }
    }

    let mut sets: Vec<Vec<usize>> = supports.iter().filter(|s| !s.is_empty()).cloned().collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kernel = vec![vec![0.0; sets.len()]; nx];
    for (s, support) in supports.iter().enumerate() {
        if let Ok(w) = sets.binary_search_by(|c| {
            c.len()
                .cmp(&support.len())
                .then_with(|| c.as_slice().cmp(support))
        }) {
            for x in 0..nx {
                kernel[x][w] += u.kernel[x][s];
            }
        }
    }
    IndependentSetChannel::new(
        sets.into_iter()
            .map(|members| IndependentSet { members })
            .collect(),
        kernel,
    )
}
