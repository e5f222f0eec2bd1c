use std::collections::HashSet;

use num::{Signed, Zero};

use super::joint::{JointPMF, Variable};
use super::rational::{format_rational, one, sum, zero, Rational};
use crate::{Error, Result};

/// Channel array indexed `[x][y][z]`.
pub type Channel = Vec<Vec<Vec<Rational>>>;

/// A secure computation problem `(p_XY, p_Z|XY)` as supplied by the user.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub x_alphabet: Vec<String>,
    pub y_alphabet: Vec<String>,
    pub z_alphabet: Vec<String>,
    /// `[x][y]`
    pub p_xy: Vec<Vec<Rational>>,
    /// `[x][y][z]`
    pub channel: Channel,
}

/// A [`ProblemSpec`] whose invariants have been checked.
///
/// Channel rows at `p_xy(x,y) = 0` are stored (and normalized) but every
/// semantic test skips them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedProblem {
    spec: ProblemSpec,
}

pub fn validate_problem(raw: ProblemSpec) -> Result<ValidatedProblem> {
    let (nx, ny, nz) = (
        raw.x_alphabet.len(),
        raw.y_alphabet.len(),
        raw.z_alphabet.len(),
    );
    for (name, alphabet) in [
        ("x", &raw.x_alphabet),
        ("y", &raw.y_alphabet),
        ("z", &raw.z_alphabet),
    ] {
        if alphabet.is_empty() {
            return Err(Error::ShapeMismatch(format!("{name} alphabet is empty")));
        }
        let mut seen = HashSet::new();
        for label in alphabet {
            if !seen.insert(label) {
                return Err(Error::DuplicateLabel {
                    alphabet: name,
                    label: label.clone(),
                });
            }
        }
    }
    if raw.p_xy.len() != nx {
        return Err(Error::ShapeMismatch(format!(
            "p_xy has {} rows, expected |X| = {nx}",
            raw.p_xy.len()
        )));
    }
    for (x, row) in raw.p_xy.iter().enumerate() {
        if row.len() != ny {
            return Err(Error::ShapeMismatch(format!(
                "p_xy[{x}] has {} entries, expected |Y| = {ny}",
                row.len()
            )));
        }
    }
    if raw.channel.len() != nx {
        return Err(Error::ShapeMismatch(format!(
            "channel has {} entries, expected |X| = {nx}",
            raw.channel.len()
        )));
    }
    for (x, plane) in raw.channel.iter().enumerate() {
        if plane.len() != ny {
            return Err(Error::ShapeMismatch(format!(
                "channel[{x}] has {} entries, expected |Y| = {ny}",
                plane.len()
            )));
        }
        for (y, row) in plane.iter().enumerate() {
            if row.len() != nz {
                return Err(Error::ShapeMismatch(format!(
                    "channel[{x}][{y}] has {} entries, expected |Z| = {nz}",
                    row.len()
                )));
            }
        }
    }

    for (x, row) in raw.p_xy.iter().enumerate() {
        for (y, v) in row.iter().enumerate() {
            if v.is_negative() {
                return Err(Error::NegativeMass {
                    location: format!("p_xy[{x}][{y}]"),
                });
            }
        }
    }
    for (x, plane) in raw.channel.iter().enumerate() {
        for (y, row) in plane.iter().enumerate() {
            for (z, v) in row.iter().enumerate() {
                if v.is_negative() {
                    return Err(Error::NegativeMass {
                        location: format!("channel[{x}][{y}][{z}]"),
                    });
                }
            }
        }
    }

    let total = sum(raw.p_xy.iter().flatten());
    if total != one() {
        return Err(Error::NonNormalized {
            location: "p_xy".into(),
            sum: format_rational(&total),
        });
    }
    for (x, plane) in raw.channel.iter().enumerate() {
        for (y, row) in plane.iter().enumerate() {
            let s = sum(row);
            if s != one() {
                return Err(Error::NonNormalized {
                    location: format!("channel[{x}][{y}]"),
                    sum: format_rational(&s),
                });
            }
        }
    }

    let problem = ValidatedProblem { spec: raw };
    for (name, marginal, labels) in [
        ("X", problem.p_x(), &problem.spec.x_alphabet),
        ("Y", problem.p_y(), &problem.spec.y_alphabet),
        ("Z", problem.p_z(), &problem.spec.z_alphabet),
    ] {
        if let Some(index) = marginal.iter().position(|m| m.is_zero()) {
            return Err(Error::EmptySupportMarginal {
                marginal: name,
                index,
                label: labels[index].clone(),
            });
        }
    }
    Ok(problem)
}

impl ValidatedProblem {
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn into_spec(self) -> ProblemSpec {
        self.spec
    }

    pub fn x_len(&self) -> usize {
        self.spec.x_alphabet.len()
    }

    pub fn y_len(&self) -> usize {
        self.spec.y_alphabet.len()
    }

    pub fn z_len(&self) -> usize {
        self.spec.z_alphabet.len()
    }

    pub fn x_labels(&self) -> &[String] {
        &self.spec.x_alphabet
    }

    pub fn y_labels(&self) -> &[String] {
        &self.spec.y_alphabet
    }

    pub fn z_labels(&self) -> &[String] {
        &self.spec.z_alphabet
    }

    pub fn p_xy(&self, x: usize, y: usize) -> &Rational {
        &self.spec.p_xy[x][y]
    }

    pub fn channel(&self) -> &Channel {
        &self.spec.channel
    }

    /// `p(.|x,y)`
    pub fn row(&self, x: usize, y: usize) -> &[Rational] {
        &self.spec.channel[x][y]
    }

    pub fn supported(&self, x: usize, y: usize) -> bool {
        !self.spec.p_xy[x][y].is_zero()
    }

    pub fn p_x(&self) -> Vec<Rational> {
        self.spec.p_xy.iter().map(sum).collect()
    }

    pub fn p_y(&self) -> Vec<Rational> {
        (0..self.y_len())
            .map(|y| sum(self.spec.p_xy.iter().map(|row| &row[y])))
            .collect()
    }

    pub fn p_z(&self) -> Vec<Rational> {
        let mut pz = vec![zero(); self.z_len()];
        for x in 0..self.x_len() {
            for y in 0..self.y_len() {
                let pxy = self.p_xy(x, y);
                if pxy.is_zero() {
                    continue;
                }
                for (z, c) in self.row(x, y).iter().enumerate() {
                    pz[z] += pxy * c;
                }
            }
        }
        pz
    }

    /// `p(y|x)` for every `(x, y)`.
    pub fn p_y_given_x(&self) -> Vec<Vec<Rational>> {
        let px = self.p_x();
        self.spec
            .p_xy
            .iter()
            .zip(&px)
            .map(|(row, m)| row.iter().map(|v| v / m).collect())
            .collect()
    }

    /// Joint over `(X, Y)`.
    pub fn joint_xy(&self) -> JointPMF {
        let mass = (0..self.x_len())
            .flat_map(|x| (0..self.y_len()).map(move |y| (vec![x, y], self.p_xy(x, y).clone())));
        JointPMF::new(
            vec![
                Variable::new("X", self.spec.x_alphabet.clone()),
                Variable::new("Y", self.spec.y_alphabet.clone()),
            ],
            mass,
        )
        .expect("validated p_xy is a pmf")
    }

    /// Joint over `(X, Y, Z)` with `Z` drawn from the channel.
    pub fn joint_xyz(&self) -> JointPMF {
        let mut mass = Vec::new();
        for x in 0..self.x_len() {
            for y in 0..self.y_len() {
                if !self.supported(x, y) {
                    continue;
                }
                for (z, c) in self.row(x, y).iter().enumerate() {
                    mass.push((vec![x, y, z], self.p_xy(x, y) * c));
                }
            }
        }
        JointPMF::new(
            vec![
                Variable::new("X", self.spec.x_alphabet.clone()),
                Variable::new("Y", self.spec.y_alphabet.clone()),
                Variable::new("Z", self.spec.z_alphabet.clone()),
            ],
            mass,
        )
        .expect("validated problem induces a pmf")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::probmodel::rational::rat;

    #[test]
    fn catalog_problems_validate() {
        for p in [
            catalog::and_gate(),
            catalog::copy_y(),
            catalog::copy_x(),
            catalog::noisy_copy_x(),
            catalog::diagonal_copy_x(),
            catalog::bsc_side_information(),
        ] {
            assert!(validate_problem(p.into_spec()).is_ok());
        }
    }

    #[test]
    fn zero_row_violates_full_support() {
        let mut spec = catalog::copy_y().into_spec();
        spec.p_xy = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(0, 1), rat(0, 1)]];
        match validate_problem(spec) {
            Err(Error::EmptySupportMarginal {
                marginal: "X",
                index: 1,
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn short_channel_row_is_not_normalized() {
        let mut spec = catalog::copy_y().into_spec();
        spec.channel[0][0] = vec![rat(9, 10), rat(0, 1)];
        match validate_problem(spec) {
            Err(Error::NonNormalized { location, sum }) => {
                assert_eq!(location, "channel[0][0]");
                assert_eq!(sum, "9/10");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_and_shape_errors() {
        let mut spec = catalog::copy_y().into_spec();
        spec.p_xy[0][0] = rat(-1, 4);
        spec.p_xy[0][1] = rat(3, 4);
        assert!(matches!(
            validate_problem(spec),
            Err(Error::NegativeMass { .. })
        ));

        let mut spec = catalog::copy_y().into_spec();
        spec.channel[1].pop();
        assert!(matches!(
            validate_problem(spec),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn unused_output_symbol_is_rejected() {
        let mut spec = catalog::copy_x().into_spec();
        spec.z_alphabet.push("2".into());
        for plane in &mut spec.channel {
            for row in plane {
                row.push(rat(0, 1));
            }
        }
        assert!(matches!(
            validate_problem(spec),
            Err(Error::EmptySupportMarginal { marginal: "Z", .. })
        ));
    }
}
