//! Block extensions of a problem and a Monte Carlo model of random binning
//! with side information at the decoder.

use num::Zero;
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{cap_check, sat_pow};
use crate::graphs::{decode_tuple, tuple_labels};
use crate::probmodel::rational::{one, to_f64};
use crate::probmodel::{validate_problem, ProblemSpec, Rational, ValidatedProblem};
use crate::{Error, Result};

/// Default cap on `|X|^n |Y|^n |Z|^n` for [`extend_problem`].
pub const DEFAULT_EXTEND_CAP: usize = 1 << 20;

/// Largest `|X|^n` the binning simulation scans exhaustively.
pub const SEQUENCE_CAP: u128 = 1 << 20;

/// The problem on blocks of `n` independent instances, with tuple labels
/// joined by commas.
pub fn extend_problem(p: &ValidatedProblem, n: usize, cap: usize) -> Result<ValidatedProblem> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "block length must be at least 1".into(),
        ));
    }
    let size = sat_pow(p.x_len(), n)
        .saturating_mul(sat_pow(p.y_len(), n))
        .saturating_mul(sat_pow(p.z_len(), n));
    cap_check("extended problem size", size, cap as u128)?;
    if n == 1 {
        return Ok(p.clone());
    }
    let (nx, ny, nz) = (p.x_len(), p.y_len(), p.z_len());
    let (bx, by, bz) = (nx.pow(n as u32), ny.pow(n as u32), nz.pow(n as u32));
    let xs: Vec<Vec<usize>> = (0..bx).map(|t| decode_tuple(t, nx, n)).collect();
    let ys: Vec<Vec<usize>> = (0..by).map(|t| decode_tuple(t, ny, n)).collect();
    let zs: Vec<Vec<usize>> = (0..bz).map(|t| decode_tuple(t, nz, n)).collect();
    let product = |f: &dyn Fn(usize) -> Rational| (0..n).fold(one(), |acc, i| acc * f(i));
    let p_xy = xs
        .iter()
        .map(|xt| {
            ys.iter()
                .map(|yt| product(&|i| p.p_xy(xt[i], yt[i]).clone()))
                .collect()
        })
        .collect();
    let channel = xs
        .iter()
        .map(|xt| {
            ys.iter()
                .map(|yt| {
                    zs.iter()
                        .map(|zt| product(&|i| p.row(xt[i], yt[i])[zt[i]].clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    validate_problem(ProblemSpec {
        x_alphabet: tuple_labels(p.x_labels(), n),
        y_alphabet: tuple_labels(p.y_labels(), n),
        z_alphabet: tuple_labels(p.z_labels(), n),
        p_xy,
        channel,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockExperimentConfig {
    pub n: usize,
    pub rate_bits_per_symbol: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinningOutcome {
    pub empirical_block_error: f64,
    /// `log2(bins) / n` for the bin count actually used.
    pub empirical_rate: f64,
    pub bins: f64,
    pub errors: usize,
    pub trials: usize,
}

/// Random binning of `X^n` with maximum-a-posteriori decoding given `Y^n`.
///
/// The experiment draws one random permutation of all `|X|^n` sequences and
/// bins each by its permuted position modulo `ceil(2^(n rate))`, so every
/// sequence lands in a uniformly random bin and bins are balanced. Trial `t`
/// samples `(x^n, y^n)` from its own stream `t + 1`; the decoder scans the
/// bin of `x^n` for the sequence maximizing `p(x'^n | y^n)`, ties going to the
/// lexicographically first. An error is any decoded sequence other than
/// `x^n`.
pub fn sw_binning_simulate(
    q: &ValidatedProblem,
    cfg: &BlockExperimentConfig,
) -> Result<BinningOutcome> {
    if cfg.n == 0 || cfg.trials == 0 {
        return Err(Error::InvalidArgument(
            "block length and trial count must be at least 1".into(),
        ));
    }
    if !cfg.rate_bits_per_symbol.is_finite() || cfg.rate_bits_per_symbol < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "rate {} is not a non-negative number",
            cfg.rate_bits_per_symbol
        )));
    }
    let (nx, ny, n) = (q.x_len(), q.y_len(), cfg.n);
    let count = sat_pow(nx, n);
    cap_check("binning sequence count", count, SEQUENCE_CAP)?;
    let count = count as usize;

    let bins = (cfg.rate_bits_per_symbol * n as f64).exp2().ceil().max(1.0);
    let modulus = if bins >= count as f64 {
        count
    } else {
        bins as usize
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);
    let mut position: Vec<usize> = (0..count).collect();
    position.shuffle(&mut rng);
    let bin_of: Vec<usize> = position.iter().map(|&pos| pos % modulus).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); modulus];
    for (s, &b) in bin_of.iter().enumerate() {
        members[b].push(s);
    }

    let pxy: Vec<f64> = (0..nx)
        .flat_map(|x| (0..ny).map(move |y| (x, y)))
        .map(|(x, y)| to_f64(q.p_xy(x, y)))
        .collect();
    let sampler = WeightedIndex::new(&pxy).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let ln_pxy: Vec<f64> = pxy.iter().map(|m| m.ln()).collect();

    let mut errors = 0;
    for t in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(t as u64 + 1);
        let mut sent = 0usize;
        let mut ys = Vec::with_capacity(n);
        for _ in 0..n {
            let cell = sampler.sample(&mut rng);
            sent = sent * nx + cell / ny;
            ys.push(cell % ny);
        }
        let score = |s: usize| -> f64 {
            decode_tuple(s, nx, n)
                .iter()
                .zip(&ys)
                .map(|(&x, &y)| ln_pxy[x * ny + y])
                .sum()
        };
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for &cand in &members[bin_of[sent]] {
            let sc = score(cand);
            if sc > best.0 || (sc == best.0 && cand < best.1) {
                best = (sc, cand);
            }
        }
        if best.1 != sent {
            errors += 1;
        }
    }
    Ok(BinningOutcome {
        empirical_block_error: errors as f64 / cfg.trials as f64,
        empirical_rate: bins.log2() / n as f64,
        bins,
        errors,
        trials: cfg.trials,
    })
}

/// Samples `z_i ~ p(z | x_i, y_i)` independently, from a generator keyed by
/// `seed`.
pub fn sample_block_outputs(
    q: &ValidatedProblem,
    x_eq_n: &[usize],
    y_n: &[usize],
    seed: u64,
) -> Result<Vec<usize>> {
    if x_eq_n.len() != y_n.len() {
        return Err(Error::ShapeMismatch(format!(
            "x block has length {}, y block {}",
            x_eq_n.len(),
            y_n.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(x_eq_n.len());
    for (index, (&x, &y)) in x_eq_n.iter().zip(y_n).enumerate() {
        if x >= q.x_len() || y >= q.y_len() {
            return Err(Error::ShapeMismatch(format!(
                "coordinate {index} ({x}, {y}) is outside the alphabets"
            )));
        }
        if q.p_xy(x, y).is_zero() {
            return Err(Error::UnsupportedPair { index });
        }
        let weights: Vec<f64> = q.row(x, y).iter().map(to_f64).collect();
        let dist =
            WeightedIndex::new(&weights).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        out.push(dist.sample(&mut rng));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use crate::characterize::{decide_secure_computability, quotient_problem};
    use crate::probmodel::rational::rat;

    #[test]
    fn extension_examples() {
        let p = and_gate();
        assert_eq!(extend_problem(&p, 1, DEFAULT_EXTEND_CAP).unwrap(), p);
        let e = extend_problem(&copy_x(), 2, DEFAULT_EXTEND_CAP).unwrap();
        assert_eq!((e.x_len(), e.y_len(), e.z_len()), (4, 1, 4));
        assert_eq!(e.x_labels()[1], "0,1");
        for x in 0..4 {
            assert_eq!(e.p_xy(x, 0), &rat(1, 4));
            assert_eq!(e.row(x, 0), point_row(x, 4).as_slice());
        }
        for p in [and_gate(), copy_y(), noisy_copy_x(), diagonal_copy_x()] {
            let e = extend_problem(&p, 2, DEFAULT_EXTEND_CAP).unwrap();
            assert_eq!(
                decide_secure_computability(&e).computable,
                decide_secure_computability(&p).computable
            );
        }
        assert!(matches!(
            extend_problem(&and_gate(), 8, DEFAULT_EXTEND_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }

    fn cfg(n: usize, rate: f64) -> BlockExperimentConfig {
        BlockExperimentConfig {
            n,
            rate_bits_per_symbol: rate,
            trials: 500,
            seed: 42,
        }
    }

    #[test]
    fn lossless_regime() {
        let q = quotient_problem(&bsc_side_information()).unwrap();
        let out = sw_binning_simulate(&q, &cfg(8, 1.0)).unwrap();
        assert_eq!(out.empirical_rate, 1.0);
        assert!(out.empirical_block_error <= 0.02);
        assert_eq!(out, sw_binning_simulate(&q, &cfg(8, 1.0)).unwrap());
    }

    #[test]
    fn trivial_source_never_errs() {
        let q = quotient_problem(&copy_y()).unwrap();
        let out = sw_binning_simulate(&q, &cfg(4, 0.0)).unwrap();
        assert_eq!(out.errors, 0);
        assert_eq!(out.empirical_rate, 0.0);
    }

    #[test]
    fn single_bin_forces_guessing() {
        let q = quotient_problem(&bsc_side_information()).unwrap();
        let out = sw_binning_simulate(&q, &cfg(8, 0.0)).unwrap();
        assert!(out.empirical_block_error >= 0.3);
    }

    #[test]
    fn sampling() {
        let q = quotient_problem(&copy_x()).unwrap();
        assert_eq!(
            sample_block_outputs(&q, &[1, 0, 1], &[0, 0, 0], 7).unwrap(),
            vec![1, 0, 1]
        );
        assert_eq!(
            sample_block_outputs(&q, &[], &[], 7).unwrap(),
            Vec::<usize>::new()
        );
        let d = diagonal_copy_x();
        assert_eq!(
            sample_block_outputs(&d, &[0, 0], &[0, 1], 7),
            Err(Error::UnsupportedPair { index: 1 })
        );
    }

    #[test]
    fn noisy_sampling_frequency() {
        let p = noisy_copy_x();
        let n = 10_000;
        let z = sample_block_outputs(&p, &vec![0; n], &vec![1; n], 3).unwrap();
        assert_eq!(
            z,
            sample_block_outputs(&p, &vec![0; n], &vec![1; n], 3).unwrap()
        );
        let ones = z.iter().filter(|&&v| v == 1).count() as f64;
        let sigma = (n as f64 * 0.25 * 0.75).sqrt();
        assert!((ones - 0.25 * n as f64).abs() <= 3.0 * sigma);
    }
}
