//! Small named problems used throughout the docs, tests and benches.

use crate::probmodel::rational::{one, rat, zero};
use crate::probmodel::{validate_problem, ProblemSpec, Rational, ValidatedProblem};

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Deterministic channel row putting all mass on `z`.
pub fn point_row(z: usize, nz: usize) -> Vec<Rational> {
    (0..nz)
        .map(|i| if i == z { one() } else { zero() })
        .collect()
}

/// Builds and validates a problem over alphabets `0..nx`, `0..ny`, `0..nz`.
/// Panics if the result is invalid.
pub fn build(
    p_xy: Vec<Vec<Rational>>,
    nz: usize,
    channel: impl Fn(usize, usize) -> Vec<Rational>,
) -> ValidatedProblem {
    let nx = p_xy.len();
    let ny = p_xy[0].len();
    let spec = ProblemSpec {
        x_alphabet: labels(nx),
        y_alphabet: labels(ny),
        z_alphabet: labels(nz),
        p_xy,
        channel: (0..nx)
            .map(|x| (0..ny).map(|y| channel(x, y)).collect())
            .collect(),
    };
    validate_problem(spec).expect("catalog problem is valid")
}

fn uniform_2x2() -> Vec<Vec<Rational>> {
    vec![vec![rat(1, 4); 2]; 2]
}

/// Uniform binary inputs, `Z = X AND Y`.
pub fn and_gate() -> ValidatedProblem {
    build(uniform_2x2(), 2, |x, y| point_row(x & y, 2))
}

/// Uniform binary inputs, `Z = Y`.
pub fn copy_y() -> ValidatedProblem {
    build(uniform_2x2(), 2, |_, y| point_row(y, 2))
}

/// Uniform binary `X`, constant `Y`, `Z = X`.
pub fn copy_x() -> ValidatedProblem {
    build(vec![vec![rat(1, 2)], vec![rat(1, 2)]], 2, |x, _| {
        point_row(x, 2)
    })
}

/// Uniform binary inputs, `Z = X xor Bern(1/4)`.
pub fn noisy_copy_x() -> ValidatedProblem {
    build(uniform_2x2(), 2, |x, _| {
        if x == 0 {
            vec![rat(3, 4), rat(1, 4)]
        } else {
            vec![rat(1, 4), rat(3, 4)]
        }
    })
}

/// `X = Y` uniform binary, `Z = X`.
pub fn diagonal_copy_x() -> ValidatedProblem {
    build(
        vec![vec![rat(1, 2), zero()], vec![zero(), rat(1, 2)]],
        2,
        |x, _| point_row(x, 2),
    )
}

/// Uniform binary `X`, `Y` = `X` through a binary symmetric channel with
/// flip probability 1/10, `Z = X`. Every class is a singleton, so this is
/// its own quotient; `H(X|Y) = h(0.1)`.
pub fn bsc_side_information() -> ValidatedProblem {
    build(
        vec![vec![rat(9, 20), rat(1, 20)], vec![rat(1, 20), rat(9, 20)]],
        2,
        |x, _| point_row(x, 2),
    )
}
