//! Characteristic graphs, their n-fold powers, independent sets and colorings.
//!
//! Two inputs are adjacent when some column `y` supports both and their output
//! distributions differ there. `G_EQ` applies this rule to the quotient
//! problem, `G` to the raw input alphabet.

use std::fmt::Write as _;

use crate::characterize::quotient_problem;
use crate::error::{cap_check, sat_pow};
use crate::probmodel::rational::one;
use crate::probmodel::{Rational, ValidatedProblem};
use crate::{Error, Result};

pub const DEFAULT_POWER_CAP: usize = 4096;
pub const DEFAULT_INDEPENDENT_SET_CAP: usize = 20;

/// Simple undirected graph over labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    /// sorted neighbour lists
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Duplicate edges are merged; self-loops and out-of-range endpoints are rejected.
    pub fn new(
        vertices: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::ShapeMismatch(format!(
                    "edge ({a}, {b}) references a missing vertex"
                )));
            }
            if a == b {
                return Err(Error::ShapeMismatch(format!("self-loop at vertex {a}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { vertices, adj })
    }

    pub fn edgeless(vertices: Vec<String>) -> Self {
        let adj = vec![Vec::new(); vertices.len()];
        Self { vertices, adj }
    }

    pub fn complete(vertices: Vec<String>) -> Self {
        let n = vertices.len();
        let adj = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        Self { vertices, adj }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edges `(a, b)` with `a < b`, lexicographically ordered.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Graphviz DOT, vertices and edges in index order.
    pub fn to_dot(&self, name: &str) -> String {
        let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
        let mut out = format!("graph \"{}\" {{\n", esc(name));
        for (i, label) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", esc(label));
        }
        for (a, b) in self.edges() {
            let _ = writeln!(out, "  v{a} -- v{b};");
        }
        out.push_str("}\n");
        out
    }
}

/// Color per vertex, indexed like the graph's vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<usize>,
}

impl Coloring {
    /// Color classes ordered by color id; unused ids are skipped.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let max = self.colors.iter().copied().max().map_or(0, |m| m + 1);
        let mut classes = vec![Vec::new(); max];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c].push(v);
        }
        classes.retain(|c| !c.is_empty());
        classes
    }
}

/// Non-empty set of pairwise non-adjacent vertices, members ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndependentSet {
    pub members: Vec<usize>,
}

impl IndependentSet {
    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Which characteristic graph: `G_EQ` (both-sided privacy, on the quotient)
/// or `G` (privacy against Alice only, on raw `X`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Eq,
    Alice,
}

/// Pairwise tables for the edge rule: `shared[a][b]` when some column
/// supports both, `distinct[a][b]` when some such column has unequal rows.
struct PairTables {
    shared: Vec<Vec<bool>>,
    distinct: Vec<Vec<bool>>,
}

fn pair_tables(p: &ValidatedProblem) -> PairTables {
    let n = p.x_len();
    let mut shared = vec![vec![false; n]; n];
    let mut distinct = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            for y in 0..p.y_len() {
                if p.supported(a, y) && p.supported(b, y) {
                    shared[a][b] = true;
                    if p.row(a, y) != p.row(b, y) {
                        distinct[a][b] = true;
                    }
                }
            }
        }
    }
    PairTables { shared, distinct }
}

fn characteristic_graph(p: &ValidatedProblem) -> Graph {
    let t = pair_tables(p);
    let n = p.x_len();
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    let edges: Vec<_> = edges.filter(|&(a, b)| t.distinct[a][b]).collect();
    Graph::new(p.x_labels().to_vec(), edges).expect("edges are in range")
}

/// `G_EQ` over the inputs of a quotient problem.
pub fn build_g_eq(q: &ValidatedProblem) -> Graph {
    characteristic_graph(q)
}

/// `G` over the raw input alphabet.
pub fn build_g_alice(p: &ValidatedProblem) -> Graph {
    characteristic_graph(p)
}

/// The problem whose inputs are the vertices of the chosen graph.
pub fn base_problem(p: &ValidatedProblem, which: Which) -> Result<ValidatedProblem> {
    match which {
        Which::Eq => quotient_problem(p),
        Which::Alice => Ok(p.clone()),
    }
}

/// Coordinates of tuple index `t` (most significant first).
pub(crate) fn decode_tuple(mut t: usize, base: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = t % base;
        t /= base;
    }
    out
}

pub(crate) fn tuple_labels(labels: &[String], n: usize) -> Vec<String> {
    let count = labels.len().pow(n as u32);
    (0..count)
        .map(|t| {
            decode_tuple(t, labels.len(), n)
                .iter()
                .map(|&i| labels[i].as_str())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

fn power_size(base: usize, n: usize, cap: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "block length must be at least 1".into(),
        ));
    }
    let size = sat_pow(base, n);
    cap_check("power graph vertex count", size, cap as u128)?;
    Ok(size as usize)
}

/// n-fold power of the chosen graph under the coordinatewise rule: `x^n`
/// and `x'^n` are adjacent iff some `y^n` supports both in every coordinate
/// and in some coordinate the two output rows differ. Tuple labels join the
/// coordinate labels with commas.
pub fn power_graph(p: &ValidatedProblem, which: Which, n: usize, cap: usize) -> Result<Graph> {
    let base = base_problem(p, which)?;
    let k = base.x_len();
    let size = power_size(k, n, cap)?;
    let t = pair_tables(&base);
    let tuples: Vec<Vec<usize>> = (0..size).map(|i| decode_tuple(i, k, n)).collect();
    let mut edges = Vec::new();
    for a in 0..size {
        for b in a + 1..size {
            let (u, v) = (&tuples[a], &tuples[b]);
            let all_shared = u.iter().zip(v).all(|(&i, &j)| t.shared[i][j]);
            if all_shared && u.iter().zip(v).any(|(&i, &j)| t.distinct[i][j]) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(tuple_labels(base.x_labels(), n), edges)
}

/// Exact i.i.d. input distribution over the vertices of the n-fold power
/// graph, in the same tuple order.
pub fn power_pmf(
    p: &ValidatedProblem,
    which: Which,
    n: usize,
    cap: usize,
) -> Result<Vec<Rational>> {
    let base = base_problem(p, which)?;
    let k = base.x_len();
    let size = power_size(k, n, cap)?;
    let px = base.p_x();
    Ok((0..size)
        .map(|t| {
            decode_tuple(t, k, n)
                .iter()
                .fold(one(), |acc, &i| acc * &px[i])
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeAgreement {
    pub agree: bool,
    /// First vertex pair on which the two rules disagree.
    pub discrepancy: Option<(usize, usize)>,
}

/// Compares [`power_graph`] against the block-distribution rule: adjacent iff
/// some `(y^n, z^n)` supported by both tuples has
/// `Π p(z_k|x_k,y_k) != Π p(z_k|x'_k,y_k)`. Exhaustive and exact.
pub fn power_edge_definitions_agree(
    p: &ValidatedProblem,
    which: Which,
    n: usize,
    cap: usize,
) -> Result<EdgeAgreement> {
    let base = base_problem(p, which)?;
    let power = power_graph(p, which, n, cap)?;
    let (nx, ny, nz) = (base.x_len(), base.y_len(), base.z_len());
    let size = nx.pow(n as u32);
    let ycount = power_size(ny, n, cap)?;
    let zcount = power_size(nz, n, cap)?;
    let xs: Vec<Vec<usize>> = (0..size).map(|i| decode_tuple(i, nx, n)).collect();
    let ys: Vec<Vec<usize>> = (0..ycount).map(|i| decode_tuple(i, ny, n)).collect();
    let zs: Vec<Vec<usize>> = (0..zcount).map(|i| decode_tuple(i, nz, n)).collect();

    let block_prob = |x: &[usize], y: &[usize], z: &[usize]| -> Rational {
        let mut acc = one();
        for k in 0..n {
            acc *= &base.row(x[k], y[k])[z[k]];
        }
        acc
    };
    let block_edge = |a: usize, b: usize| -> bool {
        ys.iter().any(|y| {
            let supported = |x: &[usize]| (0..n).all(|k| base.supported(x[k], y[k]));
            supported(&xs[a])
                && supported(&xs[b])
                && zs
                    .iter()
                    .any(|z| block_prob(&xs[a], y, z) != block_prob(&xs[b], y, z))
        })
    };
    for a in 0..size {
        for b in a + 1..size {
            if block_edge(a, b) != power.has_edge(a, b) {
                return Ok(EdgeAgreement {
                    agree: false,
                    discrepancy: Some((a, b)),
                });
            }
        }
    }
    Ok(EdgeAgreement {
        agree: true,
        discrepancy: None,
    })
}

/// AND-product: distinct tuples that are equal-or-adjacent in every coordinate.
pub fn and_product(g: &Graph, n: usize, cap: usize) -> Result<Graph> {
    product(g, n, cap, |g, u, v| {
        u.iter().zip(v).all(|(&i, &j)| i == j || g.has_edge(i, j))
    })
}

/// OR-product: tuples adjacent in at least one coordinate.
pub fn or_product(g: &Graph, n: usize, cap: usize) -> Result<Graph> {
    product(g, n, cap, |g, u, v| {
        u.iter().zip(v).any(|(&i, &j)| g.has_edge(i, j))
    })
}

fn product(
    g: &Graph,
    n: usize,
    cap: usize,
    adjacent: impl Fn(&Graph, &[usize], &[usize]) -> bool,
) -> Result<Graph> {
    let k = g.len();
    let size = power_size(k, n, cap)?;
    let tuples: Vec<Vec<usize>> = (0..size).map(|i| decode_tuple(i, k, n)).collect();
    let mut edges = Vec::new();
    for a in 0..size {
        for b in a + 1..size {
            if adjacent(g, &tuples[a], &tuples[b]) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(tuple_labels(g.vertices(), n), edges)
}

/// Outcome of comparing the n-fold power with the AND- and OR-products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductComparison {
    pub equals_and: bool,
    pub equals_or: bool,
    pub power_edges: usize,
    pub and_edges: usize,
    pub or_edges: usize,
}

/// Builds the AND- and OR-products of the base graph (conventions as in
/// [`and_product`] and [`or_product`]) and compares each with [`power_graph`].
pub fn compare_with_and_or_products(
    p: &ValidatedProblem,
    which: Which,
    n: usize,
    cap: usize,
) -> Result<ProductComparison> {
    let base = base_problem(p, which)?;
    let g = characteristic_graph(&base);
    let power = power_graph(p, which, n, cap)?;
    let and = and_product(&g, n, cap)?;
    let or = or_product(&g, n, cap)?;
    Ok(ProductComparison {
        equals_and: and == power,
        equals_or: or == power,
        power_edges: power.edge_count(),
        and_edges: and.edge_count(),
        or_edges: or.edge_count(),
    })
}

/// All non-empty independent sets, ordered by size then lexicographically.
pub fn enumerate_independent_sets(g: &Graph, cap: usize) -> Result<Vec<IndependentSet>> {
    let n = g.len();
    cap_check(
        "independent-set vertex count",
        n as u128,
        cap.min(30) as u128,
    )?;
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let mut sets: Vec<IndependentSet> = Vec::new();
    // extend only with larger vertices so each set is produced once
    fn grow(
        v0: usize,
        current: &mut Vec<usize>,
        blocked: u32,
        masks: &[u32],
        out: &mut Vec<IndependentSet>,
    ) {
        for v in v0..masks.len() {
            if blocked & (1 << v) != 0 {
                continue;
            }
            current.push(v);
            out.push(IndependentSet {
                members: current.clone(),
            });
            grow(v + 1, current, blocked | masks[v], masks, out);
            current.pop();
        }
    }
    grow(0, &mut Vec::new(), 0, &masks, &mut sets);
    sets.sort_by(|a, b| {
        a.members
            .len()
            .cmp(&b.members.len())
            .then_with(|| a.members.cmp(&b.members))
    });
    Ok(sets)
}

/// Keeps only the sets not strictly contained in another set of the list.
pub fn maximal_only(sets: &[IndependentSet]) -> Vec<IndependentSet> {
    sets.iter()
        .filter(|s| {
            !sets.iter().any(|t| {
                t.members.len() > s.members.len() && s.members.iter().all(|&v| t.contains(v))
            })
        })
        .cloned()
        .collect()
}

pub fn is_proper(g: &Graph, c: &Coloring) -> Result<bool> {
    if c.colors.len() != g.len() {
        return Err(Error::IncompleteColoring {
            expected: g.len(),
            got: c.colors.len(),
        });
    }
    Ok(g.edges().iter().all(|&(a, b)| c.colors[a] != c.colors[b]))
}
