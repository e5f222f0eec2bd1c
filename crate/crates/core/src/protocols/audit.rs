use std::collections::{BTreeMap, BTreeSet};

use num::Zero;

use crate::characterize::equivalence_partition;
use crate::probmodel::rational::{to_f64, zero};
use crate::probmodel::{
    conditional_mutual_information, is_markov_chain, l1_channel_distance, Channel, JointPMF,
    MarkovWitness, Rational, ValidatedProblem, Variable,
};
use crate::{Error, Result};

use super::{OneShotProtocol, PrefixCode};

/// Runs the protocol on `p` exactly: the joint of `(X, Y, M, Z)` with mass
/// `p(x,y) p(m|x) p(z|m,y)`.
pub fn execute(pr: &OneShotProtocol, p: &ValidatedProblem) -> Result<JointPMF> {
    pr.check_shape(p)?;
    let variables = vec![
        Variable::new("X", p.x_labels().to_vec()),
        Variable::new("Y", p.y_labels().to_vec()),
        Variable::new("M", pr.message_alphabet().to_vec()),
        Variable::new("Z", p.z_labels().to_vec()),
    ];
    let mut masses = Vec::new();
    for x in 0..p.x_len() {
        for y in 0..p.y_len() {
            let pxy = p.p_xy(x, y);
            if pxy.is_zero() {
                continue;
            }
            for (m, pm) in pr.alice_kernel()[x].iter().enumerate() {
                if pm.is_zero() {
                    continue;
                }
                let head = pxy * pm;
                for (z, pz) in pr.bob_kernel()[m][y].iter().enumerate() {
                    if !pz.is_zero() {
                        masses.push((vec![x, y, m, z], &head * pz));
                    }
                }
            }
        }
    }
    JointPMF::new(variables, masses)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AuditMode {
    /// Exact correctness and exact Markov chains.
    Perfect,
    /// Output distance and leakages compared against `epsilon`.
    Asymptotic { epsilon: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrivacyCheck {
    pub holds_exact: bool,
    pub cmi_bits: f64,
    pub witness: Option<MarkovWitness>,
}

/// `epsilon` minus each measured quantity; non-negative means within budget.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticSlack {
    pub epsilon: f64,
    pub l1: f64,
    pub alice: f64,
    pub bob: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub correctness_exact: bool,
    pub l1_gap: f64,
    /// `M - X - (Y,Z)`, measured by `I(M;Y,Z|X)`.
    pub alice_privacy: PrivacyCheck,
    /// `M - (Y,Z) - X`, measured by `I(M;X|Y,Z)`.
    pub bob_privacy: PrivacyCheck,
    pub rate_bits: f64,
    pub slack: Option<AsymptoticSlack>,
    /// Verdict under the requested mode.
    pub passed: bool,
}

fn check_variables(j: &JointPMF, p: &ValidatedProblem) -> Result<()> {
    let vars = j.variables();
    let mut names: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
    names.sort_unstable();
    if names != ["M", "X", "Y", "Z"] {
        return Err(Error::VariableMismatch(format!(
            "expected variables X, Y, M, Z; found {names:?}"
        )));
    }
    for (name, labels) in [
        ("X", p.x_labels()),
        ("Y", p.y_labels()),
        ("Z", p.z_labels()),
    ] {
        let v = &vars[j.index_of(name)?];
        if v.alphabet != labels {
            return Err(Error::VariableMismatch(format!(
                "alphabet of {name} differs from the problem's"
            )));
        }
    }
    Ok(())
}

/// Checks a joint of `(X, Y, M, Z)` against the problem `p`.
///
/// `code` must have one codeword per symbol of `M`; the rate is the expected
/// codeword length under the marginal of `M`.
pub fn audit(
    j: &JointPMF,
    p: &ValidatedProblem,
    mode: AuditMode,
    code: &PrefixCode,
) -> Result<AuditReport> {
    check_variables(j, p)?;
    let mi = j.index_of("M")?;
    if code.len() != j.variables()[mi].alphabet.len() {
        return Err(Error::VariableMismatch(format!(
            "code has {} codewords, M has {} symbols",
            code.len(),
            j.variables()[mi].alphabet.len()
        )));
    }
    let xyz = j.marginal(&["X", "Y", "Z"])?;
    let order = xyz.indices_of(&["X", "Y", "Z"])?;
    let mut induced_xyz: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
    let mut induced_xy: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for (t, m) in xyz.support() {
        let (x, y, z) = (t[order[0]], t[order[1]], t[order[2]]);
        induced_xyz.insert((x, y, z), m.clone());
        *induced_xy.entry((x, y)).or_insert_with(zero) += m;
    }

    let (nx, ny, nz) = (p.x_len(), p.y_len(), p.z_len());
    let mut correctness_exact = true;
    let mut induced: Channel = vec![vec![vec![zero(); nz]; ny]; nx];
    for x in 0..nx {
        for y in 0..ny {
            let Some(mxy) = induced_xy.get(&(x, y)) else {
                if p.supported(x, y) {
                    correctness_exact = false;
                } else {
                    induced[x][y] = p.row(x, y).to_vec();
                }
                continue;
            };
            for z in 0..nz {
                if let Some(m) = induced_xyz.get(&(x, y, z)) {
                    induced[x][y][z] = m / mxy;
                }
            }
            if p.supported(x, y) && induced[x][y] != p.row(x, y) {
                correctness_exact = false;
            }
        }
    }
    let l1_gap = l1_channel_distance(&induced, p.channel(), &p.joint_xy())?;

    let privacy = |a: &[&str], c: &[&str], b: &[&str]| -> Result<PrivacyCheck> {
        let check = is_markov_chain(j, a, c, b)?;
        Ok(PrivacyCheck {
            holds_exact: check.holds,
            cmi_bits: conditional_mutual_information(j, a, b, c)?,
            witness: check.witness,
        })
    };
    let alice_privacy = privacy(&["M"], &["X"], &["Y", "Z"])?;
    let bob_privacy = privacy(&["M"], &["Y", "Z"], &["X"])?;

    let pm = j.marginal(&["M"])?;
    let rate_bits = code
        .lengths()
        .iter()
        .enumerate()
        .map(|(m, &len)| to_f64(&pm.mass(&[m])) * len as f64)
        .sum();

    let (slack, passed) = match mode {
        AuditMode::Perfect => (
            None,
            correctness_exact && alice_privacy.holds_exact && bob_privacy.holds_exact,
        ),
        AuditMode::Asymptotic { epsilon } => {
            let s = AsymptoticSlack {
                epsilon,
                l1: epsilon - l1_gap,
                alice: epsilon - alice_privacy.cmi_bits,
                bob: epsilon - bob_privacy.cmi_bits,
            };
            let ok = s.l1 >= 0.0 && s.alice >= 0.0 && s.bob >= 0.0;
            (Some(s), ok)
        }
    };
    Ok(AuditReport {
        correctness_exact,
        l1_gap,
        alice_privacy,
        bob_privacy,
        rate_bits,
        slack,
        passed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateSummary {
    /// Expected codeword length per invocation.
    pub total: f64,
    /// `total / n` for a protocol acting on blocks of `n` symbols.
    pub per_symbol: f64,
}

/// Expected transcript length in bits; `n` is the number of source symbols
/// each invocation covers.
pub fn expected_rate(pr: &OneShotProtocol, p: &ValidatedProblem, n: usize) -> Result<RateSummary> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "block length must be at least 1".into(),
        ));
    }
    let pm = pr.message_pmf(p)?;
    let total: f64 = pm
        .iter()
        .zip(pr.code().lengths())
        .map(|(w, len)| to_f64(w) * len as f64)
        .sum();
    Ok(RateSummary {
        total,
        per_symbol: total / n as f64,
    })
}

/// For every pair of distinct classes that share a supported `y`, the sets
/// of messages they can emit are disjoint.
pub fn disjoint_message_check(pr: &OneShotProtocol, p: &ValidatedProblem) -> Result<bool> {
    pr.check_shape(p)?;
    let part = equivalence_partition(p);
    let messages: Vec<BTreeSet<usize>> = part
        .classes
        .iter()
        .map(|class| {
            class
                .iter()
                .flat_map(|&x| {
                    pr.alice_kernel()[x]
                        .iter()
                        .enumerate()
                        .filter(|(_, k)| !k.is_zero())
                        .map(|(m, _)| m)
                })
                .collect()
        })
        .collect();
    let columns: Vec<BTreeSet<usize>> = part
        .classes
        .iter()
        .map(|class| {
            (0..p.y_len())
                .filter(|&y| class.iter().any(|&x| p.supported(x, y)))
                .collect()
        })
        .collect();
    for i in 0..part.len() {
        for j in i + 1..part.len() {
            let share_column = !columns[i].is_disjoint(&columns[j]);
            if share_column && !messages[i].is_disjoint(&messages[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use crate::probmodel::rational::rat;
    use crate::protocols::{canonical_protocol, reveal_input_protocol};

    fn run(pr: &OneShotProtocol, p: &ValidatedProblem) -> AuditReport {
        let j = execute(pr, p).unwrap();
        audit(&j, p, AuditMode::Perfect, pr.code()).unwrap()
    }

    #[test]
    fn execute_examples() {
        let p = copy_y();
        let j = execute(&canonical_protocol(&p).unwrap(), &p).unwrap();
        for (t, _) in j.support() {
            assert_eq!(t[2], 0);
            assert_eq!(t[3], t[1]);
        }
        assert_eq!(j.marginal(&["X", "Y"]).unwrap(), p.joint_xy());

        let p = copy_x();
        let j = execute(&canonical_protocol(&p).unwrap(), &p).unwrap();
        assert_eq!(j.mass(&[0, 0, 0, 0]), rat(1, 2));
        assert_eq!(j.mass(&[1, 0, 1, 1]), rat(1, 2));
        assert_eq!(j.support().count(), 2);

        let p = and_gate();
        let j = execute(&reveal_input_protocol(&p).unwrap(), &p).unwrap();
        assert!(conditional_mutual_information(&j, &["M"], &["X"], &["Y", "Z"]).unwrap() > 0.0);
    }

    #[test]
    fn audit_examples() {
        let p = copy_x();
        let r = run(&canonical_protocol(&p).unwrap(), &p);
        assert!(r.correctness_exact && r.passed);
        assert!(r.alice_privacy.holds_exact && r.bob_privacy.holds_exact);
        assert_eq!(r.alice_privacy.cmi_bits, 0.0);
        assert_eq!(r.l1_gap, 0.0);
        assert_eq!(r.rate_bits, 1.0);

        let p = diagonal_copy_x();
        let r = run(&reveal_input_protocol(&p).unwrap(), &p);
        assert!(r.passed);
        assert_eq!(r.rate_bits, 1.0);

        let p = and_gate();
        let r = run(&reveal_input_protocol(&p).unwrap(), &p);
        assert!(r.correctness_exact);
        assert!(r.alice_privacy.holds_exact);
        assert!(!r.bob_privacy.holds_exact);
        assert!(r.bob_privacy.witness.is_some());
        assert!(r.bob_privacy.cmi_bits > 0.0);
        assert!(!r.passed);
    }

    #[test]
    fn audit_detects_wrong_output() {
        // protocol for copy_x run against the noisy version
        let p = noisy_copy_x();
        let pr = reveal_input_protocol(&copy_x()).unwrap();
        let mut bob = pr.bob_kernel().to_vec();
        bob.iter_mut()
            .for_each(|plane| plane.push(plane[0].clone()));
        let pr = OneShotProtocol::new(
            pr.message_alphabet().to_vec(),
            pr.alice_kernel().to_vec(),
            bob,
            pr.code().clone(),
        )
        .unwrap();
        let j = execute(&pr, &p).unwrap();
        let r = audit(&j, &p, AuditMode::Asymptotic { epsilon: 0.6 }, pr.code()).unwrap();
        assert!(!r.correctness_exact);
        // each row is off by 1/4 on both outputs
        assert!((r.l1_gap - 0.5).abs() < 1e-12);
        assert!(r.passed);
        let r = audit(&j, &p, AuditMode::Asymptotic { epsilon: 0.4 }, pr.code()).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn audit_rejects_foreign_joints() {
        let p = copy_x();
        let j = p.joint_xyz();
        assert!(matches!(
            audit(
                &j,
                &p,
                AuditMode::Perfect,
                &PrefixCode::new(vec![]).unwrap()
            ),
            Err(Error::VariableMismatch(_))
        ));
    }

    #[test]
    fn rates_and_claim_one() {
        let p = copy_y();
        let pr = canonical_protocol(&p).unwrap();
        assert_eq!(expected_rate(&pr, &p, 1).unwrap().total, 0.0);
        let p = copy_x();
        let pr = canonical_protocol(&p).unwrap();
        let r = expected_rate(&pr, &p, 2).unwrap();
        assert_eq!((r.total, r.per_symbol), (1.0, 0.5));
        assert!(disjoint_message_check(&pr, &p).unwrap());

        // diagonal: classes never share a column, so even one shared message is fine
        let p = diagonal_copy_x();
        let one_msg = OneShotProtocol::new(
            vec!["m".into()],
            vec![vec![rat(1, 1)]; 2],
            vec![vec![point_row(0, 2), point_row(1, 2)]],
            PrefixCode::new(vec![String::new()]).unwrap(),
        )
        .unwrap();
        assert!(disjoint_message_check(&one_msg, &p).unwrap());
        assert!(run(&one_msg, &p).passed);
    }
}
