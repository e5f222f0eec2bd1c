//! Decision procedure for perfect (and asymptotic) secure computability.
//!
//! Two inputs `x, x'` are *related* when some `y` supports both and some
//! output `z` is possible under both. The transitive closure of this relation
//! partitions `X` into classes; the problem is securely computable iff within
//! each class every `y` column sees a single output distribution.

use std::collections::BTreeSet;

use num::Zero;

use crate::probmodel::rational::{sum, zero};
use crate::probmodel::{validate_problem, ProblemSpec, ValidatedProblem};
use crate::{catalog, Error, Result};

/// Equivalence classes of `X` in alphabet order, each led by its smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub classes: Vec<Vec<usize>>,
    pub representative: Vec<usize>,
    /// `class_of[x]` is the index of the class containing `x`.
    pub class_of: Vec<usize>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Two supported inputs in one column whose output rows differ at `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnWitness {
    pub x: usize,
    pub x2: usize,
    pub y: usize,
    pub z: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonochromeCheck {
    pub holds: bool,
    pub witness: Option<ColumnWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictWitness {
    pub x: usize,
    pub x2: usize,
    pub y: usize,
    pub z: usize,
    pub class_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub computable: bool,
    pub witness: Option<VerdictWitness>,
}

/// Pairs `(x, x')` with `x < x'` that share a supported column and an output.
pub fn sim_relation(p: &ValidatedProblem) -> BTreeSet<(usize, usize)> {
    let mut rel = BTreeSet::new();
    for x in 0..p.x_len() {
        for x2 in x + 1..p.x_len() {
            let related = (0..p.y_len()).any(|y| {
                p.supported(x, y)
                    && p.supported(x2, y)
                    && p.row(x, y)
                        .iter()
                        .zip(p.row(x2, y))
                        .any(|(a, b)| !a.is_zero() && !b.is_zero())
            });
            if related {
                rel.insert((x, x2));
            }
        }
    }
    rel
}

/// Connected components of [`sim_relation`].
pub fn equivalence_partition(p: &ValidatedProblem) -> Partition {
    let n = p.x_len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (a, b) in sim_relation(p) {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        // keep the smaller index as root so roots are class minima
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![usize::MAX; n];
    for x in 0..n {
        let root = find(&mut parent, x);
        if class_of[root] == usize::MAX {
            class_of[root] = classes.len();
            classes.push(Vec::new());
        }
        let c = class_of[root];
        class_of[x] = c;
        classes[c].push(x);
    }
    let representative = classes.iter().map(|c| c[0]).collect();
    Partition {
        classes,
        representative,
        class_of,
    }
}

/// First `z` at which row `b` puts more mass than row `a` (rows assumed unequal).
fn exceeding_z(p: &ValidatedProblem, x: usize, x2: usize, y: usize) -> usize {
    p.row(x, y)
        .iter()
        .zip(p.row(x2, y))
        .position(|(a, b)| b > a)
        .expect("unequal pmfs differ upward somewhere")
}

/// Whether `C x D` is column monochromatic.
///
/// The witness reports the first offending `(x, x', y)` in alphabet order and
/// the first `z` where `p(z|x',y) > p(z|x,y)`.
pub fn is_column_monochromatic(
    p: &ValidatedProblem,
    c: &[usize],
    d: &[usize],
) -> Result<MonochromeCheck> {
    if c.is_empty() || d.is_empty() {
        return Err(Error::EmptySubset);
    }
    for &v in c {
        if v >= p.x_len() {
            return Err(Error::ShapeMismatch(format!("x index {v} out of range")));
        }
    }
    for &v in d {
        if v >= p.y_len() {
            return Err(Error::ShapeMismatch(format!("y index {v} out of range")));
        }
    }
    let mut c = c.to_vec();
    c.sort_unstable();
    c.dedup();
    let mut d = d.to_vec();
    d.sort_unstable();
    d.dedup();
    for &y in &d {
        let supported: Vec<usize> = c.iter().copied().filter(|&x| p.supported(x, y)).collect();
        for (i, &x) in supported.iter().enumerate() {
            for &x2 in &supported[i + 1..] {
                if p.row(x, y) != p.row(x2, y) {
                    return Ok(MonochromeCheck {
                        holds: false,
                        witness: Some(ColumnWitness {
                            x,
                            x2,
                            y,
                            z: exceeding_z(p, x, x2, y),
                        }),
                    });
                }
            }
        }
    }
    Ok(MonochromeCheck {
        holds: true,
        witness: None,
    })
}

/// Secure computability: every equivalence class is column monochromatic
/// against all of `Y`. The same verdict governs the asymptotic setting.
pub fn decide_secure_computability(p: &ValidatedProblem) -> Verdict {
    let partition = equivalence_partition(p);
    let all_y: Vec<usize> = (0..p.y_len()).collect();
    for (class_index, class) in partition.classes.iter().enumerate() {
        let check = is_column_monochromatic(p, class, &all_y).expect("classes are non-empty");
        if let Some(w) = check.witness {
            return Verdict {
                computable: false,
                witness: Some(VerdictWitness {
                    x: w.x,
                    x2: w.x2,
                    y: w.y,
                    z: w.z,
                    class_index,
                }),
            };
        }
    }
    Verdict {
        computable: true,
        witness: None,
    }
}

/// Collapses each equivalence class to its representative.
///
/// Rows at `(class, y)` pairs with no supported member are filled with a
/// point mass on the first output symbol; they carry zero probability and are
/// ignored by every semantic test.
pub fn quotient_problem(p: &ValidatedProblem) -> Result<ValidatedProblem> {
    if !decide_secure_computability(p).computable {
        return Err(Error::NotComputable);
    }
    let partition = equivalence_partition(p);
    let (ny, nz) = (p.y_len(), p.z_len());
    let mut p_xy = Vec::new();
    let mut channel = Vec::new();
    for class in &partition.classes {
        let mut mass_row = Vec::with_capacity(ny);
        let mut plane = Vec::with_capacity(ny);
        for y in 0..ny {
            mass_row.push(sum(class.iter().map(|&x| p.p_xy(x, y))));
            let row = match class.iter().find(|&&x| p.supported(x, y)) {
                Some(&x) => p.row(x, y).to_vec(),
                None => catalog::point_row(0, nz),
            };
            plane.push(row);
        }
        p_xy.push(mass_row);
        channel.push(plane);
    }
    let spec = ProblemSpec {
        x_alphabet: partition
            .representative
            .iter()
            .map(|&r| p.x_labels()[r].clone())
            .collect(),
        y_alphabet: p.y_labels().to_vec(),
        z_alphabet: p.z_labels().to_vec(),
        p_xy,
        channel,
    };
    validate_problem(spec)
}

/// For every `(y, z)` with `p(y,z) > 0`, exactly one input is consistent with it.
pub fn check_bob_learns_xeq(q: &ValidatedProblem) -> bool {
    for y in 0..q.y_len() {
        for z in 0..q.z_len() {
            let consistent = (0..q.x_len())
                .filter(|&x| q.supported(x, y) && q.row(x, y)[z] > zero())
                .count();
            // consistent == 0 means p(y,z) = 0
            if consistent > 1 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use crate::probmodel::rational::rat;

    #[test]
    fn relation_examples() {
        assert_eq!(sim_relation(&and_gate()), BTreeSet::from([(0, 1)]));
        assert!(sim_relation(&diagonal_copy_x()).is_empty());
        // Z independent of X
        let p = build(vec![vec![rat(1, 4); 2]; 2], 2, |_, _| {
            vec![rat(1, 3), rat(2, 3)]
        });
        assert_eq!(sim_relation(&p), BTreeSet::from([(0, 1)]));
    }

    #[test]
    fn partition_examples() {
        assert_eq!(equivalence_partition(&and_gate()).classes, vec![vec![0, 1]]);
        assert_eq!(
            equivalence_partition(&diagonal_copy_x()).classes,
            vec![vec![0], vec![1]]
        );
        let single = build(vec![vec![rat(1, 1)]], 1, |_, _| vec![rat(1, 1)]);
        let part = equivalence_partition(&single);
        assert_eq!(part.classes, vec![vec![0]]);
        assert_eq!(part.representative, vec![0]);
    }

    #[test]
    fn column_monochromatic_examples() {
        let check = is_column_monochromatic(&and_gate(), &[0, 1], &[0, 1]).unwrap();
        assert!(!check.holds);
        assert_eq!(
            check.witness,
            Some(ColumnWitness {
                x: 0,
                x2: 1,
                y: 1,
                z: 1
            })
        );
        assert!(
            is_column_monochromatic(&and_gate(), &[1], &[0, 1])
                .unwrap()
                .holds
        );
        assert!(
            is_column_monochromatic(&copy_y(), &[0, 1], &[0, 1])
                .unwrap()
                .holds
        );
        assert_eq!(
            is_column_monochromatic(&copy_y(), &[], &[0]),
            Err(Error::EmptySubset)
        );
    }

    #[test]
    fn verdicts() {
        let v = decide_secure_computability(&and_gate());
        assert!(!v.computable);
        let w = v.witness.unwrap();
        assert_eq!((w.x, w.x2, w.y, w.z, w.class_index), (0, 1, 1, 1, 0));
        assert!(decide_secure_computability(&copy_y()).computable);
        assert!(!decide_secure_computability(&noisy_copy_x()).computable);
        assert!(decide_secure_computability(&copy_x()).computable);
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_problem(&copy_y()).unwrap();
        assert_eq!(q.x_len(), 1);
        assert_eq!(q.p_xy(0, 0), &rat(1, 2));
        assert_eq!(q.p_xy(0, 1), &rat(1, 2));
        assert_eq!(q.row(0, 1), &[rat(0, 1), rat(1, 1)]);

        // identity up to the placeholder rows at zero-probability pairs
        let d = diagonal_copy_x();
        let qd = quotient_problem(&d).unwrap();
        assert_eq!(qd.x_labels(), d.x_labels());
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(qd.p_xy(x, y), d.p_xy(x, y));
                if d.supported(x, y) {
                    assert_eq!(qd.row(x, y), d.row(x, y));
                }
            }
        }
        assert_eq!(qd.row(1, 0), &[rat(1, 1), rat(0, 1)]);

        assert_eq!(quotient_problem(&and_gate()), Err(Error::NotComputable));
    }

    #[test]
    fn bob_learns_class() {
        assert!(check_bob_learns_xeq(&quotient_problem(&copy_y()).unwrap()));
        assert!(check_bob_learns_xeq(
            &quotient_problem(&diagonal_copy_x()).unwrap()
        ));
        // not a quotient: both inputs can produce z = 0 at y = 0
        assert!(!check_bob_learns_xeq(&and_gate()));
    }
}
