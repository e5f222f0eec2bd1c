//! On-disk JSON formats: problem files and protocol files. Every probability
//! is a rational string such as `"1/4"` or `"0"`.

use randsec_core::probmodel::rational::{format_rational, parse_rational};
use randsec_core::probmodel::{validate_problem, ProblemSpec};
use randsec_core::protocols::{OneShotProtocol, PrefixCode};
use randsec_core::{Rational, ValidatedProblem};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub p_xy: Vec<Vec<String>>,
    pub p_z_given_xy: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolFile {
    pub messages: Vec<String>,
    pub alice_kernel: Vec<Vec<String>>,
    pub bob_kernel: Vec<Vec<Vec<String>>>,
    pub codewords: Vec<String>,
}

fn parse_json<'a, T: Deserialize<'a>>(what: &str, bytes: &'a [u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| {
        CliError::Input(format!(
            "{what}: line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn rationals_2(field: &str, rows: &[Vec<String>]) -> Result<Vec<Vec<Rational>>, CliError> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| {
                    parse_rational(s)
                        .map_err(|e| CliError::Input(format!("{field}[{i}][{j}]: {e}")))
                })
                .collect()
        })
        .collect()
}

fn rationals_3(
    field: &str,
    planes: &[Vec<Vec<String>>],
) -> Result<Vec<Vec<Vec<Rational>>>, CliError> {
    planes
        .iter()
        .enumerate()
        .map(|(i, plane)| rationals_2(&format!("{field}[{i}]"), plane))
        .collect()
}

fn strings_2(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

impl ProblemFile {
    pub fn parse(bytes: &[u8]) -> Result<ValidatedProblem, CliError> {
        let raw: ProblemFile = parse_json("problem file", bytes)?;
        let spec = ProblemSpec {
            x_alphabet: raw.x,
            y_alphabet: raw.y,
            z_alphabet: raw.z,
            p_xy: rationals_2("p_xy", &raw.p_xy)?,
            channel: rationals_3("p_z_given_xy", &raw.p_z_given_xy)?,
        };
        Ok(validate_problem(spec)?)
    }

    pub fn from_problem(p: &ValidatedProblem) -> Self {
        let s = p.spec();
        Self {
            x: s.x_alphabet.clone(),
            y: s.y_alphabet.clone(),
            z: s.z_alphabet.clone(),
            p_xy: strings_2(&s.p_xy),
            p_z_given_xy: s.channel.iter().map(|plane| strings_2(plane)).collect(),
        }
    }
}

impl ProtocolFile {
    pub fn parse(bytes: &[u8]) -> Result<OneShotProtocol, CliError> {
        let raw: ProtocolFile = parse_json("protocol file", bytes)?;
        let code = PrefixCode::new(raw.codewords)?;
        Ok(OneShotProtocol::new(
            raw.messages,
            rationals_2("alice_kernel", &raw.alice_kernel)?,
            rationals_3("bob_kernel", &raw.bob_kernel)?,
            code,
        )?)
    }

    pub fn from_protocol(pr: &OneShotProtocol) -> Self {
        Self {
            messages: pr.message_alphabet().to_vec(),
            alice_kernel: strings_2(pr.alice_kernel()),
            bob_kernel: pr
                .bob_kernel()
                .iter()
                .map(|plane| strings_2(plane))
                .collect(),
            codewords: pr.code().codewords().to_vec(),
        }
    }
}
