//! Information measures over [`JointPMF`]s. Entropies are in bits.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use super::joint::JointPMF;
use super::problem::Channel;
use super::rational::{to_f64, Rational};
use crate::{Error, Result};

/// `-Σ p log2 p` with `0 log 0 = 0`.
pub fn entropy_bits<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Entropy of the full tuple distribution.
pub fn entropy(p: &JointPMF) -> f64 {
    entropy_bits(p.support().map(|(_, m)| to_f64(m)))
}

/// A tuple assignment reported by a failed exact test: `(variable, label)` pairs.
pub type Assignment = Vec<(String, String)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovWitness {
    pub a: Assignment,
    pub b: Assignment,
    pub c: Assignment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovCheck {
    pub holds: bool,
    pub witness: Option<MarkovWitness>,
}

struct Split {
    a: Vec<usize>,
    b: Vec<usize>,
    c: Vec<usize>,
}

fn split(j: &JointPMF, a: &[&str], b: &[&str], c: &[&str]) -> Result<Split> {
    let s = Split {
        a: j.indices_of(a)?,
        b: j.indices_of(b)?,
        c: j.indices_of(c)?,
    };
    let mut seen = vec![false; j.variables().len()];
    for &i in s.a.iter().chain(&s.b).chain(&s.c) {
        if seen[i] {
            return Err(Error::OverlappingVariableSets(
                j.variables()[i].name.clone(),
            ));
        }
        seen[i] = true;
    }
    Ok(s)
}

fn cat(x: &[usize], y: &[usize]) -> Vec<usize> {
    x.iter().chain(y).copied().collect()
}

/// `I(A;B|C)` in bits.
///
/// Each term uses the exact ratio `p(a,b,c) p(c) / (p(a,c) p(b,c))`, so the
/// result is exactly `0.0` whenever the Markov chain `A - C - B` holds.
pub fn conditional_mutual_information(
    j: &JointPMF,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    let s = split(j, a, b, c)?;
    let abc = j.project(&[s.a.clone(), s.b.clone(), s.c.clone()].concat());
    let ac = j.project(&cat(&s.a, &s.c));
    let bc = j.project(&cat(&s.b, &s.c));
    let pc = j.project(&s.c);
    let (na, nb) = (s.a.len(), s.b.len());
    let mut total = 0.0;
    for (key, m) in &abc {
        let (ka, rest) = key.split_at(na);
        let (kb, kc) = rest.split_at(nb);
        let ratio: Rational = m * &pc[kc] / (&ac[&cat(ka, kc)] * &bc[&cat(kb, kc)]);
        total += to_f64(m) * to_f64(&ratio).log2();
    }
    Ok(total.max(0.0))
}

/// Exact test of the Markov chain `A - C - B`: `p(a,b|c) = p(a|c) p(b|c)`
/// for every `c` with `p(c) > 0`.
pub fn is_markov_chain(j: &JointPMF, a: &[&str], c: &[&str], b: &[&str]) -> Result<MarkovCheck> {
    let s = split(j, a, b, c)?;
    let abc = j.project(&[s.a.clone(), s.b.clone(), s.c.clone()].concat());
    let ac = j.project(&cat(&s.c, &s.a));
    let bc = j.project(&cat(&s.c, &s.b));
    let pc = j.project(&s.c);
    let nc = s.c.len();

    // group a- and b-values by c
    let group = |m: &BTreeMap<Vec<usize>, Rational>| {
        let mut out: BTreeMap<Vec<usize>, Vec<(Vec<usize>, Rational)>> = BTreeMap::new();
        for (k, v) in m {
            let (kc, rest) = k.split_at(nc);
            out.entry(kc.to_vec())
                .or_default()
                .push((rest.to_vec(), v.clone()));
        }
        out
    };
    let a_by_c = group(&ac);
    let b_by_c = group(&bc);

    for (kc, mc) in &pc {
        for (ka, mac) in &a_by_c[kc] {
            for (kb, mbc) in &b_by_c[kc] {
                let key = [ka.as_slice(), kb, kc].concat();
                let joint = abc.get(&key).cloned().unwrap_or_else(Rational::zero);
                if &joint * mc != mac * mbc {
                    debug_assert!(!(mac * mbc).is_negative());
                    let label = |idx: &[usize], vals: &[usize]| -> Assignment {
                        idx.iter()
                            .zip(vals)
                            .map(|(&i, &v)| {
                                let var = &j.variables()[i];
                                (var.name.clone(), var.alphabet[v].clone())
                            })
                            .collect()
                    };
                    return Ok(MarkovCheck {
                        holds: false,
                        witness: Some(MarkovWitness {
                            a: label(&s.a, ka),
                            b: label(&s.b, kb),
                            c: label(&s.c, kc),
                        }),
                    });
                }
            }
        }
    }
    Ok(MarkovCheck {
        holds: true,
        witness: None,
    })
}

/// `Σ_{x,y} w(x,y) Σ_z |q1(z|x,y) - q2(z|x,y)|`, with `w` a pmf over `(X, Y)`.
pub fn l1_channel_distance(q1: &Channel, q2: &Channel, w: &JointPMF) -> Result<f64> {
    let dims = |q: &Channel| {
        (
            q.len(),
            q.first().map_or(0, |p| p.len()),
            q.first().and_then(|p| p.first()).map_or(0, |r| r.len()),
        )
    };
    let shape = dims(q1);
    let ragged = |q: &Channel| {
        q.iter()
            .any(|p| p.len() != shape.1 || p.iter().any(|r| r.len() != shape.2))
    };
    if dims(q2) != shape || ragged(q1) || ragged(q2) {
        return Err(Error::ShapeMismatch("channels differ in shape".into()));
    }
    let vars = w.variables();
    if vars.len() != 2 || vars[0].alphabet.len() != shape.0 || vars[1].alphabet.len() != shape.1 {
        return Err(Error::ShapeMismatch(
            "weight pmf does not index the channel inputs".into(),
        ));
    }
    let mut total = Rational::zero();
    for (t, m) in w.support() {
        let (x, y) = (t[0], t[1]);
        let gap = q1[x][y]
            .iter()
            .zip(&q2[x][y])
            .fold(Rational::zero(), |acc, (u, v)| acc + (u - v).abs());
        total += m * gap;
    }
    Ok(to_f64(&total))
}
