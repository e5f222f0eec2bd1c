//! One-message protocols: synthesis, exact execution, security audits,
//! prefix coding and the brute-force existence oracle.

mod audit;
mod code;
mod oracle;
mod synth;

pub use audit::{
    audit, disjoint_message_check, execute, expected_rate, AsymptoticSlack, AuditMode, AuditReport,
    PrivacyCheck, RateSummary,
};
pub use code::{coloring_huffman_rate, huffman_code, PrefixCode};
pub use oracle::brute_force_secure_exists;
pub use synth::{
    canonical_protocol, coloring_protocol, induced_coloring, lift_protocol,
    optimal_coloring_protocol, reveal_input_protocol,
};

use num::{Signed, Zero};

use crate::probmodel::rational::{format_rational, one, sum, Rational};
use crate::probmodel::ValidatedProblem;
use crate::{Error, Result};

/// Alice sends one message `m ~ p(m|x)`; Bob outputs `z ~ p(z|m,y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneShotProtocol {
    message_alphabet: Vec<String>,
    alice_kernel: Vec<Vec<Rational>>,
    bob_kernel: Vec<Vec<Vec<Rational>>>,
    code: PrefixCode,
}

fn check_row(row: &[Rational], width: usize, location: impl Fn() -> String) -> Result<()> {
    if row.len() != width {
        return Err(Error::ShapeMismatch(format!(
            "{} has {} entries, expected {width}",
            location(),
            row.len()
        )));
    }
    if row.iter().any(Signed::is_negative) {
        return Err(Error::NegativeMass {
            location: location(),
        });
    }
    let total = sum(row);
    if total != one() {
        return Err(Error::NonNormalized {
            location: location(),
            sum: format_rational(&total),
        });
    }
    Ok(())
}

impl OneShotProtocol {
    /// Validates that both kernels are exactly row-stochastic and that the
    /// code has one codeword per message.
    pub fn new(
        message_alphabet: Vec<String>,
        alice_kernel: Vec<Vec<Rational>>,
        bob_kernel: Vec<Vec<Vec<Rational>>>,
        code: PrefixCode,
    ) -> Result<Self> {
        let nm = message_alphabet.len();
        if nm == 0 {
            return Err(Error::ShapeMismatch("message alphabet is empty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for m in &message_alphabet {
            if !seen.insert(m) {
                return Err(Error::DuplicateLabel {
                    alphabet: "message",
                    label: m.clone(),
                });
            }
        }
        for (x, row) in alice_kernel.iter().enumerate() {
            check_row(row, nm, || format!("alice_kernel[{x}]"))?;
        }
        if bob_kernel.len() != nm {
            return Err(Error::ShapeMismatch(format!(
                "bob_kernel has {} planes, expected {nm}",
                bob_kernel.len()
            )));
        }
        let ny = bob_kernel[0].len();
        let nz = bob_kernel[0].first().map_or(0, Vec::len);
        for (m, plane) in bob_kernel.iter().enumerate() {
            if plane.len() != ny {
                return Err(Error::ShapeMismatch(format!(
                    "bob_kernel[{m}] has {} rows, expected {ny}",
                    plane.len()
                )));
            }
            for (y, row) in plane.iter().enumerate() {
                check_row(row, nz, || format!("bob_kernel[{m}][{y}]"))?;
            }
        }
        if code.len() != nm {
            return Err(Error::ShapeMismatch(format!(
                "code has {} codewords, expected {nm}",
                code.len()
            )));
        }
        Ok(Self {
            message_alphabet,
            alice_kernel,
            bob_kernel,
            code,
        })
    }

    pub fn message_alphabet(&self) -> &[String] {
        &self.message_alphabet
    }

    /// `alice_kernel()[x][m] = p(m|x)`.
    pub fn alice_kernel(&self) -> &[Vec<Rational>] {
        &self.alice_kernel
    }

    /// `bob_kernel()[m][y][z] = p(z|m,y)`.
    pub fn bob_kernel(&self) -> &[Vec<Vec<Rational>>] {
        &self.bob_kernel
    }

    pub fn code(&self) -> &PrefixCode {
        &self.code
    }

    /// Message distribution induced by the inputs of `p`.
    pub fn message_pmf(&self, p: &ValidatedProblem) -> Result<Vec<Rational>> {
        self.check_shape(p)?;
        let px = p.p_x();
        Ok((0..self.message_alphabet.len())
            .map(|m| {
                sum(&px
                    .iter()
                    .zip(&self.alice_kernel)
                    .map(|(a, k)| a * &k[m])
                    .collect::<Vec<_>>())
            })
            .collect())
    }

    /// `(m, y)` pairs that occur with probability zero under `p`. Bob's rows
    /// there are placeholders and never influence the execution.
    pub fn placeholder_rows(&self, p: &ValidatedProblem) -> Result<Vec<(usize, usize)>> {
        self.check_shape(p)?;
        let mut out = Vec::new();
        for m in 0..self.message_alphabet.len() {
            for y in 0..p.y_len() {
                let reached =
                    (0..p.x_len()).any(|x| p.supported(x, y) && !self.alice_kernel[x][m].is_zero());
                if !reached {
                    out.push((m, y));
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn check_shape(&self, p: &ValidatedProblem) -> Result<()> {
        let ok = self.alice_kernel.len() == p.x_len()
            && self.bob_kernel[0].len() == p.y_len()
            && self.bob_kernel[0].first().map_or(0, Vec::len) == p.z_len();
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "protocol is {}x{}x{} over (X,Y,Z), problem is {}x{}x{}",
                self.alice_kernel.len(),
                self.bob_kernel[0].len(),
                self.bob_kernel[0].first().map_or(0, Vec::len),
                p.x_len(),
                p.y_len(),
                p.z_len()
            )))
        }
    }
}
