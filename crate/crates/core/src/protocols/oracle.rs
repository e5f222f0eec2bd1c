use crate::error::{cap_check, sat_pow};
use crate::probmodel::rational::{one, rat, zero};
use crate::probmodel::{Rational, ValidatedProblem};
use crate::{Error, Result};

use super::{audit, execute, AuditMode, OneShotProtocol, PrefixCode};

/// Largest number of candidate message maps the oracle will try.
const MAP_CAP: u128 = 1 << 20;

/// Bob's rows for a deterministic map, or `None` when two supported inputs
/// sharing a message disagree on some column.
fn induced_bob(p: &ValidatedProblem, map: &[usize], k: usize) -> Option<Vec<Vec<Vec<Rational>>>> {
    let nz = p.z_len();
    let mut bob = Vec::with_capacity(k);
    for m in 0..k {
        let mut plane = Vec::with_capacity(p.y_len());
        for y in 0..p.y_len() {
            let mut row: Option<&[Rational]> = None;
            for x in (0..p.x_len()).filter(|&x| map[x] == m && p.supported(x, y)) {
                match row {
                    None => row = Some(p.row(x, y)),
                    Some(r) if r != p.row(x, y) => return None,
                    Some(_) => {}
                }
            }
            plane.push(row.map_or_else(|| vec![rat(1, nz as i64); nz], <[Rational]>::to_vec));
        }
        bob.push(plane);
    }
    Some(bob)
}

/// Exhaustive search for a secure one-message protocol: tries every
/// deterministic map `X -> {0..max_messages}` with Bob's induced rule and
/// reports whether any of them passes a perfect-mode audit.
///
/// Independent of the class-based decision procedure; it only uses exact
/// execution and the Markov tests.
pub fn brute_force_secure_exists(p: &ValidatedProblem, max_messages: usize) -> Result<bool> {
    let nx = p.x_len();
    cap_check("oracle input alphabet", nx as u128, 4)?;
    if max_messages < nx {
        return Err(Error::InvalidArgument(format!(
            "max_messages {max_messages} is below |X| = {nx}"
        )));
    }
    cap_check("oracle message maps", sat_pow(max_messages, nx), MAP_CAP)?;
    let k = max_messages;
    let messages: Vec<String> = (0..k).map(|m| format!("m{m}")).collect();
    // any binary code works: the audit verdict does not depend on rates
    let code = PrefixCode::new((0..k).map(|m| format!("{}0", "1".repeat(m))).collect())?;
    let mut map = vec![0usize; nx];
    loop {
        if let Some(bob) = induced_bob(p, &map, k) {
            let alice = map
                .iter()
                .map(|&m| {
                    (0..k)
                        .map(|i| if i == m { one() } else { zero() })
                        .collect()
                })
                .collect();
            let pr = OneShotProtocol::new(messages.clone(), alice, bob, code.clone())?;
            let j = execute(&pr, p)?;
            if audit(&j, p, AuditMode::Perfect, pr.code())?.passed {
                return Ok(true);
            }
        }
        // next map in lexicographic order
        let mut i = nx;
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            map[i] += 1;
            if map[i] < k {
                break;
            }
            map[i] = 0;
        }
    }
}
