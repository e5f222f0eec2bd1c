use num::Zero;

use crate::characterize::{decide_secure_computability, equivalence_partition, quotient_problem};
use crate::graphs::{build_g_eq, is_proper, Coloring};
use crate::probmodel::rational::{one, rat, to_f64, zero};
use crate::probmodel::{Rational, ValidatedProblem};
use crate::rates::{chromatic_entropy, Argmin, RateReport};
use crate::{Error, Result};

use super::{huffman_code, OneShotProtocol};

fn uniform_row(nz: usize) -> Vec<Rational> {
    vec![rat(1, nz as i64); nz]
}

/// Builds the protocol in which Alice deterministically sends `message_of[x]`
/// and Bob reproduces the output row of any supported input carrying that
/// message. Unreached `(m, y)` rows are uniform.
fn deterministic_protocol(
    p: &ValidatedProblem,
    messages: Vec<String>,
    message_of: &[usize],
) -> Result<OneShotProtocol> {
    let nm = messages.len();
    let alice: Vec<Vec<Rational>> = message_of
        .iter()
        .map(|&m| {
            (0..nm)
                .map(|i| if i == m { one() } else { zero() })
                .collect()
        })
        .collect();
    let bob = (0..nm)
        .map(|m| {
            (0..p.y_len())
                .map(|y| {
                    (0..p.x_len())
                        .find(|&x| message_of[x] == m && p.supported(x, y))
                        .map_or_else(|| uniform_row(p.z_len()), |x| p.row(x, y).to_vec())
                })
                .collect()
        })
        .collect();
    let px = p.p_x();
    let pm: Vec<Rational> = (0..nm)
        .map(|m| {
            (0..p.x_len())
                .filter(|&x| message_of[x] == m)
                .fold(zero(), |acc, x| acc + &px[x])
        })
        .collect();
    OneShotProtocol::new(messages, alice, bob, huffman_code(&pm))
}

/// Alice sends the index of her input's equivalence class (`m0`, `m1`, ...).
pub fn canonical_protocol(p: &ValidatedProblem) -> Result<OneShotProtocol> {
    if !decide_secure_computability(p).computable {
        return Err(Error::NotComputable);
    }
    let part = equivalence_partition(p);
    let messages = (0..part.len()).map(|i| format!("m{i}")).collect();
    deterministic_protocol(p, messages, &part.class_of)
}

/// Alice sends the color of her (quotient) input; messages are `c{color}`
/// for the colors in use, in increasing order.
pub fn coloring_protocol(q: &ValidatedProblem, c: &Coloring) -> Result<OneShotProtocol> {
    let g = build_g_eq(q);
    if !is_proper(&g, c)? {
        let (a, b) = g
            .edges()
            .into_iter()
            .find(|&(a, b)| c.colors[a] == c.colors[b])
            .expect("an improper coloring has a monochromatic edge");
        return Err(Error::ImproperColoring(a, b));
    }
    let mut used: Vec<usize> = c.colors.clone();
    used.sort_unstable();
    used.dedup();
    let message_of: Vec<usize> = c
        .colors
        .iter()
        .map(|col| used.binary_search(col).expect("color is in use"))
        .collect();
    let messages = used.iter().map(|col| format!("c{col}")).collect();
    deterministic_protocol(q, messages, &message_of)
}

/// Runs a protocol designed for the quotient of `p` on the raw inputs: each
/// input behaves like its class representative.
pub fn lift_protocol(p: &ValidatedProblem, quotient: &OneShotProtocol) -> Result<OneShotProtocol> {
    let part = equivalence_partition(p);
    if quotient.alice_kernel().len() != part.len() {
        return Err(Error::ShapeMismatch(format!(
            "protocol has {} inputs, problem has {} classes",
            quotient.alice_kernel().len(),
            part.len()
        )));
    }
    let alice = part
        .class_of
        .iter()
        .map(|&i| quotient.alice_kernel()[i].clone())
        .collect();
    let lifted = OneShotProtocol::new(
        quotient.message_alphabet().to_vec(),
        alice,
        quotient.bob_kernel().to_vec(),
        quotient.code().clone(),
    )?;
    lifted.check_shape(p)?;
    Ok(lifted)
}

/// Coloring protocol for a minimum-entropy coloring of `G_EQ`, lifted to the
/// raw inputs of `p`, together with the chromatic-entropy report.
pub fn optimal_coloring_protocol(
    p: &ValidatedProblem,
    chromatic_cap: usize,
) -> Result<(OneShotProtocol, RateReport)> {
    let q = quotient_problem(p)?;
    let px: Vec<f64> = q.p_x().iter().map(to_f64).collect();
    let report = chromatic_entropy(&build_g_eq(&q), &px, chromatic_cap)?;
    let Argmin::Coloring(c) = &report.argmin else {
        unreachable!("chromatic entropy reports a coloring")
    };
    let pr = lift_protocol(p, &coloring_protocol(&q, c)?)?;
    Ok((pr, report))
}

/// Alice sends her input verbatim and Bob samples `p(z|x,y)`. Correct for
/// every problem, secure only for some.
pub fn reveal_input_protocol(p: &ValidatedProblem) -> Result<OneShotProtocol> {
    let ids: Vec<usize> = (0..p.x_len()).collect();
    deterministic_protocol(p, p.x_labels().to_vec(), &ids)
}

/// The coloring `x -> m` of a protocol whose Alice kernel is deterministic.
pub fn induced_coloring(pr: &OneShotProtocol) -> Option<Coloring> {
    pr.alice_kernel()
        .iter()
        .map(|row| {
            let mut support = row.iter().enumerate().filter(|(_, k)| !k.is_zero());
            match (support.next(), support.next()) {
                (Some((m, _)), None) => Some(m),
                _ => None,
            }
        })
        .collect::<Option<Vec<_>>>()
        .map(|colors| Coloring { colors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;

    #[test]
    fn canonical_examples() {
        let pr = canonical_protocol(&copy_y()).unwrap();
        assert_eq!(pr.message_alphabet(), &["m0"]);
        assert_eq!(pr.code().codewords(), &[String::new()]);

        let pr = canonical_protocol(&copy_x()).unwrap();
        assert_eq!(pr.code().lengths(), vec![1, 1]);
        assert_eq!(pr.alice_kernel()[1], vec![zero(), one()]);

        assert_eq!(canonical_protocol(&and_gate()), Err(Error::NotComputable));
    }

    #[test]
    fn coloring_examples() {
        let q = quotient_problem(&diagonal_copy_x()).unwrap();
        let pr = coloring_protocol(&q, &Coloring { colors: vec![0, 0] }).unwrap();
        assert_eq!(pr.message_alphabet(), &["c0"]);
        assert_eq!(pr.code().codewords(), &[String::new()]);
        // y = 0 reaches only input 0, y = 1 only input 1
        assert_eq!(pr.bob_kernel()[0][0], point_row(0, 2));
        assert_eq!(pr.bob_kernel()[0][1], point_row(1, 2));

        let q = quotient_problem(&copy_x()).unwrap();
        let two = coloring_protocol(&q, &Coloring { colors: vec![0, 1] }).unwrap();
        let canon = canonical_protocol(&q).unwrap();
        assert_eq!(two.alice_kernel(), canon.alice_kernel());
        assert_eq!(two.bob_kernel(), canon.bob_kernel());
        assert_eq!(two.code(), canon.code());
        assert_eq!(
            coloring_protocol(&q, &Coloring { colors: vec![3, 3] }),
            Err(Error::ImproperColoring(0, 1))
        );
    }

    #[test]
    fn placeholders_are_flagged() {
        let q = quotient_problem(&diagonal_copy_x()).unwrap();
        let pr = canonical_protocol(&q).unwrap();
        assert_eq!(pr.placeholder_rows(&q).unwrap(), vec![(0, 1), (1, 0)]);
        assert_eq!(pr.bob_kernel()[0][1], vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn induced_coloring_of_deterministic_kernels() {
        let pr = canonical_protocol(&copy_x()).unwrap();
        assert_eq!(induced_coloring(&pr), Some(Coloring { colors: vec![0, 1] }));
        let mixed = OneShotProtocol::new(
            vec!["a".into(), "b".into()],
            vec![vec![rat(1, 2), rat(1, 2)]],
            vec![vec![vec![one()]]; 2],
            huffman_code(&[rat(1, 2), rat(1, 2)]),
        )
        .unwrap();
        assert_eq!(induced_coloring(&mixed), None);
    }
}
