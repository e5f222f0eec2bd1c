use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};

use super::rational::{format_rational, one, sum, Rational};
use crate::{Error, Result};

/// A named random variable with a finite alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub alphabet: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, alphabet: Vec<String>) -> Self {
        Self {
            name: name.into(),
            alphabet,
        }
    }
}

/// Exact joint distribution over an ordered tuple of variables.
///
/// Only positive masses are stored; lookups of absent tuples return zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointPMF {
    variables: Vec<Variable>,
    mass: BTreeMap<Vec<usize>, Rational>,
}

impl JointPMF {
    /// Masses for repeated tuples are added together.
    pub fn new(
        variables: Vec<Variable>,
        masses: impl IntoIterator<Item = (Vec<usize>, Rational)>,
    ) -> Result<Self> {
        let mut names = BTreeSet::new();
        for v in &variables {
            if !names.insert(v.name.as_str()) {
                return Err(Error::VariableMismatch(format!(
                    "variable {:?} appears twice",
                    v.name
                )));
            }
        }
        let mut mass: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (tuple, m) in masses {
            if tuple.len() != variables.len() {
                return Err(Error::ShapeMismatch(format!(
                    "tuple {tuple:?} has arity {}, expected {}",
                    tuple.len(),
                    variables.len()
                )));
            }
            for (i, (&s, v)) in tuple.iter().zip(&variables).enumerate() {
                if s >= v.alphabet.len() {
                    return Err(Error::ShapeMismatch(format!(
                        "coordinate {i} of {tuple:?} outside alphabet of {}",
                        v.name
                    )));
                }
            }
            if m.is_negative() {
                return Err(Error::NegativeMass {
                    location: format!("{tuple:?}"),
                });
            }
            *mass.entry(tuple).or_insert_with(Rational::zero) += m;
        }
        mass.retain(|_, m| !m.is_zero());
        let total = sum(mass.values());
        if total != one() {
            return Err(Error::NonNormalized {
                location: "joint pmf".into(),
                sum: format_rational(&total),
            });
        }
        Ok(Self { variables, mass })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn indices_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.index_of(n)).collect()
    }

    pub fn mass(&self, tuple: &[usize]) -> Rational {
        self.mass.get(tuple).cloned().unwrap_or_else(Rational::zero)
    }

    /// Positive-mass tuples in lexicographic order.
    pub fn support(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.mass.iter()
    }

    /// Exact marginal onto `keep`; variable order follows this pmf.
    pub fn marginal(&self, keep: &[&str]) -> Result<JointPMF> {
        let mut idx = self.indices_of(keep)?;
        idx.sort_unstable();
        idx.dedup();
        let variables = idx.iter().map(|&i| self.variables[i].clone()).collect();
        Ok(JointPMF {
            variables,
            mass: self.project(&idx),
        })
    }

    /// Sums masses onto the coordinates `idx` (in the given order).
    pub(crate) fn project(&self, idx: &[usize]) -> BTreeMap<Vec<usize>, Rational> {
        let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (t, m) in &self.mass {
            let key: Vec<usize> = idx.iter().map(|&i| t[i]).collect();
            *out.entry(key).or_insert_with(Rational::zero) += m;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::probmodel::rational::rat;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn product_marginal_recovers_factor() {
        let pa = [rat(1, 3), rat(2, 3)];
        let pb = [rat(1, 4), rat(1, 4), rat(1, 2)];
        let (ra, rb) = (&pa, &pb);
        let masses = (0..2).flat_map(|a| (0..3).map(move |b| (vec![a, b], &ra[a] * &rb[b])));
        let j = JointPMF::new(
            vec![Variable::new("a", labels(2)), Variable::new("b", labels(3))],
            masses.collect::<Vec<_>>(),
        )
        .unwrap();
        let m = j.marginal(&["a"]).unwrap();
        assert_eq!(m.mass(&[0]), pa[0]);
        assert_eq!(m.mass(&[1]), pa[1]);
        assert_eq!(j.marginal(&["a", "b"]).unwrap(), j);
        assert_eq!(j.marginal(&["b", "a"]).unwrap(), j);
    }

    #[test]
    fn copy_y_output_is_uniform() {
        let j = catalog::copy_y().joint_xyz();
        let z = j.marginal(&["Z"]).unwrap();
        assert_eq!(z.mass(&[0]), rat(1, 2));
        assert_eq!(z.mass(&[1]), rat(1, 2));
    }

    #[test]
    fn rejects_bad_inputs() {
        let v = || vec![Variable::new("a", labels(2))];
        assert!(matches!(
            JointPMF::new(v(), vec![(vec![0], rat(1, 2))]),
            Err(Error::NonNormalized { .. })
        ));
        assert!(matches!(
            JointPMF::new(v(), vec![(vec![2], rat(1, 1))]),
            Err(Error::ShapeMismatch(_))
        ));
        let j = JointPMF::new(v(), vec![(vec![0], rat(1, 1))]).unwrap();
        assert!(matches!(j.marginal(&["q"]), Err(Error::UnknownVariable(_))));
    }
}
