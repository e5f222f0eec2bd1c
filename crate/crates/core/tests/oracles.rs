#![allow(clippy::needless_range_loop)]

use randsec_core::blockcoding::{extend_problem, DEFAULT_EXTEND_CAP};
use randsec_core::characterize::{decide_secure_computability, quotient_problem};
use randsec_core::graphs::{
    build_g_alice, build_g_eq, compare_with_and_or_products, enumerate_independent_sets, is_proper,
    power_edge_definitions_agree, DEFAULT_POWER_CAP,
};
use randsec_core::probmodel::rational::{one, rat, zero};
use randsec_core::protocols::{
    audit, brute_force_secure_exists, coloring_protocol, execute, huffman_code, induced_coloring,
    AuditMode, OneShotProtocol,
};
use randsec_core::random::{random_problem, GeneratorConfig};
use randsec_core::rates::{
    conditional_graph_entropy, conditional_graph_entropy_bruteforce, reduce_u_to_w,
    AuxiliaryChannel, SolverConfig,
};
use randsec_core::{Coloring, Error, Rational, ValidatedProblem, Which};

fn sample(seed: u64, max: usize, computable_only: bool) -> ValidatedProblem {
    let s = seed as usize;
    let sizes = (
        1 + s % max,
        1 + (s / max) % max,
        1 + (s / (max * max)) % max,
    );
    random_problem(
        &GeneratorConfig::new(sizes, 8).unwrap(),
        seed,
        computable_only,
    )
    .unwrap()
}

/// All maps `0..n -> 0..k`, lexicographic.
fn all_maps(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..k.pow(n as u32))
        .map(|mut t| {
            let mut m = vec![0; n];
            for slot in m.iter_mut().rev() {
                *slot = t % k;
                t /= k;
            }
            m
        })
        .collect()
}

/// Deterministic one-message protocol sending `map[x]`, with Bob copying the
/// first supported input's row; `None` if that rule is ambiguous.
fn map_protocol(q: &ValidatedProblem, map: &[usize], k: usize) -> Option<OneShotProtocol> {
    let mut bob = vec![vec![vec![rat(1, q.z_len() as i64); q.z_len()]; q.y_len()]; k];
    for y in 0..q.y_len() {
        for m in 0..k {
            let rows: Vec<&[Rational]> = (0..q.x_len())
                .filter(|&x| map[x] == m && q.supported(x, y))
                .map(|x| q.row(x, y))
                .collect();
            if rows.windows(2).any(|w| w[0] != w[1]) {
                return None;
            }
            if let Some(r) = rows.first() {
                bob[m][y] = r.to_vec();
            }
        }
    }
    let alice = map
        .iter()
        .map(|&m| {
            (0..k)
                .map(|i| if i == m { one() } else { zero() })
                .collect()
        })
        .collect();
    let code = huffman_code(&vec![rat(1, k as i64); k]);
    OneShotProtocol::new((0..k).map(|m| format!("m{m}")).collect(), alice, bob, code).ok()
}

#[test]
fn decision_matches_exhaustive_search() {
    let mut computable = 0;
    for seed in 0..120 {
        let p = sample(seed, 3, false);
        let verdict = decide_secure_computability(&p).computable;
        assert_eq!(
            verdict,
            brute_force_secure_exists(&p, p.x_len()).unwrap(),
            "seed {seed}"
        );
        computable += usize::from(verdict);
    }
    assert!(computable > 10 && computable < 110, "{computable}");
}

#[test]
fn colorings_and_secure_maps_correspond() {
    for seed in 0..40 {
        let q = quotient_problem(&sample(seed, 3, true)).unwrap();
        let g = build_g_eq(&q);
        let k = q.x_len();
        for map in all_maps(k, k) {
            let c = Coloring {
                colors: map.clone(),
            };
            if is_proper(&g, &c).unwrap() {
                let pr = coloring_protocol(&q, &c).unwrap();
                let j = execute(&pr, &q).unwrap();
                assert!(audit(&j, &q, AuditMode::Perfect, pr.code()).unwrap().passed);
            }
            if let Some(pr) = map_protocol(&q, &map, k) {
                let j = execute(&pr, &q).unwrap();
                if audit(&j, &q, AuditMode::Perfect, pr.code()).unwrap().passed {
                    let induced = induced_coloring(&pr).unwrap();
                    assert!(is_proper(&g, &induced).unwrap(), "seed {seed} map {map:?}");
                }
            }
        }
    }
}

#[test]
fn extension_preserves_the_verdict() {
    for seed in 0..20 {
        let p = sample(seed, 2, false);
        let e = extend_problem(&p, 2, DEFAULT_EXTEND_CAP).unwrap();
        assert_eq!(
            decide_secure_computability(&e).computable,
            decide_secure_computability(&p).computable,
            "seed {seed}"
        );
    }
}

#[test]
fn power_graph_rules_agree() {
    let mut checked = 0;
    for seed in 0..30 {
        let p = sample(seed, 3, false);
        for which in [Which::Eq, Which::Alice] {
            match power_edge_definitions_agree(&p, which, 2, DEFAULT_POWER_CAP) {
                Ok(a) => {
                    assert!(a.agree, "seed {seed}: {:?}", a.discrepancy);
                    checked += 1;
                }
                Err(Error::NotComputable) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(checked >= 30);
}

/// A seeded search reliably turns up a power graph that is neither the AND-
/// nor the OR-product of its base graph.
#[test]
fn power_graph_is_neither_product() {
    let found = (0..500).find(|&seed| {
        let p = sample(seed, 3, false);
        let c = compare_with_and_or_products(&p, Which::Alice, 2, DEFAULT_POWER_CAP).unwrap();
        !c.equals_and && !c.equals_or
    });
    assert!(found.is_some());
}

#[test]
fn solver_tracks_grid_oracle() {
    for seed in 0..12 {
        let p = sample(seed, 3, false);
        let g = build_g_alice(&p);
        let solved = conditional_graph_entropy(&p, &g, &SolverConfig::default()).unwrap();
        for step in [1.0 / 8.0, 1.0 / 16.0] {
            match conditional_graph_entropy_bruteforce(&p, &g, step) {
                Ok(grid) => {
                    assert!(solved.value <= grid + 1e-9, "seed {seed}");
                    assert!(grid - solved.value < 1e-3 + 2.0 * step, "seed {seed}");
                }
                Err(Error::CapExceeded { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn reduction_on_merged_supports() {
    for seed in 0..20 {
        let p = sample(seed, 3, false);
        let g = build_g_alice(&p);
        let sets = enumerate_independent_sets(&g, 20).unwrap();
        // one auxiliary symbol per independent set, equal weights on members
        let kernel: Vec<Vec<f64>> = (0..p.x_len())
            .map(|x| {
                let hits = sets.iter().filter(|s| s.contains(x)).count() as f64;
                sets.iter()
                    .map(|s| if s.contains(x) { 1.0 / hits } else { 0.0 })
                    .collect()
            })
            .collect();
        let u = AuxiliaryChannel::new(sets.len(), kernel).unwrap();
        let bob: Vec<Vec<Vec<f64>>> = sets
            .iter()
            .map(|s| {
                (0..p.y_len())
                    .map(|y| match s.members.iter().find(|&&x| p.supported(x, y)) {
                        Some(&x) => p
                            .row(x, y)
                            .iter()
                            .map(randsec_core::probmodel::rational::to_f64)
                            .collect(),
                        None => vec![1.0 / p.z_len() as f64; p.z_len()],
                    })
                    .collect()
            })
            .collect();
        let w = reduce_u_to_w(&p, &g, &u, &bob).unwrap();
        assert_eq!(w.sets.len(), sets.len());
        assert!(
            w.conditional_information(&p).unwrap() <= u.conditional_information(&p).unwrap() + 1e-9
        );
    }
}
