//! Seeded generator of small random problems for corpora and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characterize::decide_secure_computability;
use crate::probmodel::rational::rat;
use crate::probmodel::{validate_problem, ProblemSpec, Rational, ValidatedProblem};
use crate::{Error, Result};

pub const MAX_ALPHABET: usize = 4;
pub const MAX_GRAIN: u32 = 16;
pub const MAX_ATTEMPTS: usize = 10_000;

/// Alphabet sizes and probability grain of generated problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub sizes: (usize, usize, usize),
    pub grain: u32,
}

impl GeneratorConfig {
    pub fn new(sizes: (usize, usize, usize), grain: u32) -> Result<Self> {
        let (x, y, z) = sizes;
        if [x, y, z].iter().any(|&s| s == 0 || s > MAX_ALPHABET) {
            return Err(Error::InvalidArgument(format!(
                "alphabet sizes must lie in 1..={MAX_ALPHABET}, got {x},{y},{z}"
            )));
        }
        if grain == 0 || grain > MAX_GRAIN {
            return Err(Error::InvalidArgument(format!(
                "grain must lie in 1..={MAX_GRAIN}, got {grain}"
            )));
        }
        Ok(Self { sizes, grain })
    }
}

/// One uniformly chosen weight is uniform on `1..=grain`; every other weight
/// is zero with probability 1/2 and otherwise uniform on `1..=grain`. The
/// vector is then normalized exactly.
fn random_pmf(rng: &mut impl Rng, len: usize, grain: u32) -> Vec<Rational> {
    let forced = rng.gen_range(0..len);
    let w: Vec<i64> = (0..len)
        .map(|i| {
            if i != forced && rng.gen_bool(0.5) {
                0
            } else {
                i64::from(rng.gen_range(1..=grain))
            }
        })
        .collect();
    let total: i64 = w.iter().sum();
    w.iter().map(|&v| rat(v, total)).collect()
}

fn attempt(rng: &mut impl Rng, cfg: &GeneratorConfig) -> Option<ValidatedProblem> {
    let (nx, ny, nz) = cfg.sizes;
    let flat = random_pmf(rng, nx * ny, cfg.grain);
    let p_xy = flat.chunks(ny).map(<[Rational]>::to_vec).collect();
    let mut channel = Vec::with_capacity(nx);
    for _ in 0..nx {
        let mut plane = Vec::with_capacity(ny);
        for _ in 0..ny {
            plane.push(random_pmf(rng, nz, cfg.grain));
        }
        channel.push(plane);
    }
    let labels = |n: usize| (0..n).map(|i| i.to_string()).collect();
    validate_problem(ProblemSpec {
        x_alphabet: labels(nx),
        y_alphabet: labels(ny),
        z_alphabet: labels(nz),
        p_xy,
        channel,
    })
    .ok()
}

/// Draws problems from a ChaCha stream keyed by `seed` until one is valid
/// (and securely computable when `computable_only` is set).
pub fn random_problem(
    cfg: &GeneratorConfig,
    seed: u64,
    computable_only: bool,
) -> Result<ValidatedProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(p) = attempt(&mut rng, cfg) {
            if !computable_only || decide_secure_computability(&p).computable {
                return Ok(p);
            }
        }
    }
    Err(Error::GenerationExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generates_valid_problems() {
        let cfg = GeneratorConfig::new((2, 2, 2), 8).unwrap();
        let p = random_problem(&cfg, 7, false).unwrap();
        assert_eq!((p.x_len(), p.y_len(), p.z_len()), (2, 2, 2));
        assert_eq!(p, random_problem(&cfg, 7, false).unwrap());
        let c = random_problem(&cfg, 7, true).unwrap();
        assert!(decide_secure_computability(&c).computable);
    }

    #[test]
    fn rejects_large_configs() {
        assert!(GeneratorConfig::new((5, 2, 2), 8).is_err());
        assert!(GeneratorConfig::new((2, 2, 2), 17).is_err());
        assert!(GeneratorConfig::new((0, 2, 2), 8).is_err());
    }

    #[test]
    fn grain_one_yields_uniform_weights() {
        let cfg = GeneratorConfig::new((3, 3, 2), 1).unwrap();
        let p = random_problem(&cfg, 1, false).unwrap();
        let nonzero: Vec<&Rational> = (0..3)
            .flat_map(|x| (0..3).map(move |y| (x, y)))
            .map(|(x, y)| p.p_xy(x, y))
            .filter(|m| **m != rat(0, 1))
            .collect();
        assert!(nonzero.windows(2).all(|w| w[0] == w[1]));
    }
}
