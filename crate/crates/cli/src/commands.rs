//! One function per subcommand. Each returns a JSON payload and whether the
//! result is a semantic negative (not computable, audit failed).

use std::path::Path;

use randsec_core::blockcoding::{sw_binning_simulate, BlockExperimentConfig};
use randsec_core::characterize::{
    decide_secure_computability, equivalence_partition, quotient_problem,
};
use randsec_core::graphs::{power_graph, power_pmf, DEFAULT_POWER_CAP};
use randsec_core::probmodel::{Assignment, MarkovWitness};
use randsec_core::protocols::{
    audit, canonical_protocol, coloring_huffman_rate, execute, optimal_coloring_protocol,
    AuditMode, PrivacyCheck,
};
use randsec_core::random::{random_problem, GeneratorConfig};
use randsec_core::rates::{
    chromatic_entropy_per_symbol, conditional_entropy_xeq, conditional_graph_entropy, Argmin,
    SolverConfig, DEFAULT_CHROMATIC_CAP,
};
use randsec_core::{Error, ValidatedProblem, Which};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::files::{ProblemFile, ProtocolFile};

pub struct Outcome {
    pub payload: Value,
    pub negative: bool,
}

impl Outcome {
    fn ok(payload: Value) -> Self {
        Self {
            payload,
            negative: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Setting {
    Ps1,
    Ps2,
    As1,
    As2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphKind {
    Eq,
    Alice,
}

impl GraphKind {
    fn which(self) -> Which {
        match self {
            GraphKind::Eq => Which::Eq,
            GraphKind::Alice => Which::Alice,
        }
    }

    fn name(self) -> &'static str {
        match self {
            GraphKind::Eq => "eq",
            GraphKind::Alice => "alice",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ProtocolKind {
    Canonical,
    Optimal,
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn labels_of(p: &ValidatedProblem, members: &[usize]) -> Vec<String> {
    members.iter().map(|&x| p.x_labels()[x].clone()).collect()
}

pub fn check(p: &ValidatedProblem) -> Outcome {
    let verdict = decide_secure_computability(p);
    let classes: Vec<Vec<String>> = equivalence_partition(p)
        .classes
        .iter()
        .map(|c| labels_of(p, c))
        .collect();
    let mut payload = json!({ "computable": verdict.computable, "classes": classes });
    if let Some(w) = verdict.witness {
        payload["witness"] = json!({
            "x": p.x_labels()[w.x],
            "x2": p.x_labels()[w.x2],
            "y": p.y_labels()[w.y],
            "z": p.z_labels()[w.z],
            "class_index": w.class_index,
        });
    }
    Outcome {
        payload,
        negative: !verdict.computable,
    }
}

pub fn rate(
    p: &ValidatedProblem,
    setting: Setting,
    n: usize,
    seed: u64,
) -> Result<Outcome, CliError> {
    let block = |kind: GraphKind, name: &str| -> Result<Outcome, CliError> {
        let which = kind.which();
        let report =
            chromatic_entropy_per_symbol(p, which, n, DEFAULT_POWER_CAP, DEFAULT_CHROMATIC_CAP)?;
        let Argmin::Coloring(c) = &report.argmin else {
            unreachable!("chromatic entropy reports a coloring")
        };
        let g = power_graph(p, which, n, DEFAULT_POWER_CAP)?;
        let pmf = power_pmf(p, which, n, DEFAULT_POWER_CAP)?;
        let huffman = coloring_huffman_rate(&pmf, c)? / n as f64;
        let classes: Vec<Vec<String>> = c
            .classes()
            .iter()
            .map(|cl| cl.iter().map(|&v| g.vertices()[v].clone()).collect())
            .collect();
        Ok(Outcome::ok(json!({
            "setting": name,
            "graph": kind.name(),
            "n": n,
            "h_chi": report.value,
            "sandwich": [report.value, report.value + 1.0 / n as f64],
            "huffman_rate": huffman,
            "coloring": classes,
        })))
    };
    if n == 0 {
        return Err(CliError::Input("block length must be at least 1".into()));
    }
    if n != 1 && matches!(setting, Setting::As1 | Setting::As2) {
        return Err(CliError::Input(
            "block length applies only to ps1 and ps2".into(),
        ));
    }
    match setting {
        Setting::Ps1 => block(GraphKind::Eq, "ps1"),
        Setting::Ps2 => block(GraphKind::Alice, "ps2"),
        Setting::As1 => {
            let q = quotient_problem(p)?;
            Ok(Outcome::ok(json!({
                "setting": "as1",
                "h_xeq_given_y": conditional_entropy_xeq(&q),
            })))
        }
        Setting::As2 => {
            let g = randsec_core::graphs::build_g_alice(p);
            let cfg = SolverConfig {
                seed,
                ..SolverConfig::default()
            };
            let report = conditional_graph_entropy(p, &g, &cfg)?;
            let d = report.diagnostics.expect("solver reports diagnostics");
            let mut payload = json!({
                "setting": "as2",
                "h_g_x_given_y": report.value,
                "diagnostics": {
                    "iterations": d.iterations,
                    "final_gap": d.final_gap,
                    "restarts": d.restarts,
                    "best_restart": d.best_restart,
                },
            });
            if let Argmin::Channel(w) = &report.argmin {
                let sets: Vec<Vec<String>> =
                    w.sets.iter().map(|s| labels_of(p, &s.members)).collect();
                payload["independent_sets"] = json!(sets);
                payload["kernel"] = json!(w.kernel);
            }
            Ok(Outcome::ok(payload))
        }
    }
}

pub fn graph(
    p: &ValidatedProblem,
    kind: GraphKind,
    n: usize,
    dot: Option<&Path>,
) -> Result<Outcome, CliError> {
    let g = power_graph(p, kind.which(), n, DEFAULT_POWER_CAP)?;
    if let Some(path) = dot {
        let name = if n == 1 {
            format!("G_{}", kind.name())
        } else {
            format!("G_{}^{n}", kind.name())
        };
        write_file(path, &g.to_dot(&name))?;
    }
    let edges: Vec<[&str; 2]> = g
        .edges()
        .iter()
        .map(|&(a, b)| [g.vertices()[a].as_str(), g.vertices()[b].as_str()])
        .collect();
    Ok(Outcome::ok(json!({
        "which": kind.name(),
        "n": n,
        "vertices": g.len(),
        "edges": g.edge_count(),
        "vertex_labels": g.vertices(),
        "edge_list": edges,
    })))
}

pub fn protocol(
    p: &ValidatedProblem,
    kind: ProtocolKind,
    emit: Option<&Path>,
) -> Result<Outcome, CliError> {
    let pr = match kind {
        ProtocolKind::Canonical => canonical_protocol(p)?,
        ProtocolKind::Optimal => optimal_coloring_protocol(p, DEFAULT_CHROMATIC_CAP)?.0,
    };
    let file = ProtocolFile::from_protocol(&pr);
    let rate = randsec_core::protocols::expected_rate(&pr, p, 1)?.total;
    let mut payload = json!({
        "kind": match kind { ProtocolKind::Canonical => "canonical", ProtocolKind::Optimal => "optimal" },
        "messages": pr.message_alphabet(),
        "codewords": pr.code().codewords(),
        "rate_bits": rate,
        "placeholder_rows": pr.placeholder_rows(p)?,
    });
    match emit {
        Some(path) => {
            let text = serde_json::to_string_pretty(&file).expect("protocol serializes") + "\n";
            write_file(path, &text)?;
        }
        None => payload["protocol"] = serde_json::to_value(&file).expect("protocol serializes"),
    }
    Ok(Outcome::ok(payload))
}

fn assignment(a: &Assignment) -> Value {
    Value::Object(
        a.iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect(),
    )
}

fn privacy(c: &PrivacyCheck) -> Value {
    json!({
        "holds_exact": c.holds_exact,
        "cmi_bits": c.cmi_bits,
        "witness": c.witness.as_ref().map(|w: &MarkovWitness| json!({
            "a": assignment(&w.a),
            "b": assignment(&w.b),
            "c": assignment(&w.c),
        })),
    })
}

pub fn audit_cmd(
    p: &ValidatedProblem,
    protocol_bytes: &[u8],
    epsilon: Option<f64>,
) -> Result<Outcome, CliError> {
    let pr = ProtocolFile::parse(protocol_bytes)?;
    let j = execute(&pr, p)?;
    let mode = match epsilon {
        Some(epsilon) => AuditMode::Asymptotic { epsilon },
        None => AuditMode::Perfect,
    };
    let r = audit(&j, p, mode, pr.code())?;
    let mut payload = json!({
        "mode": if epsilon.is_some() { "asymptotic" } else { "perfect" },
        "correctness_exact": r.correctness_exact,
        "l1_gap": r.l1_gap,
        "alice_privacy": privacy(&r.alice_privacy),
        "bob_privacy": privacy(&r.bob_privacy),
        "rate_bits": r.rate_bits,
        "passed": r.passed,
    });
    if let Some(s) = &r.slack {
        payload["slack"] =
            json!({ "epsilon": s.epsilon, "l1": s.l1, "alice": s.alice, "bob": s.bob });
    }
    Ok(Outcome {
        payload,
        negative: !r.passed,
    })
}

pub fn swsim(
    p: &ValidatedProblem,
    n: usize,
    rate: f64,
    trials: usize,
    seed: u64,
) -> Result<Outcome, CliError> {
    let q = quotient_problem(p)?;
    let cfg = BlockExperimentConfig {
        n,
        rate_bits_per_symbol: rate,
        trials,
        seed,
    };
    let out = sw_binning_simulate(&q, &cfg)?;
    Ok(Outcome::ok(json!({
        "config": { "n": n, "rate_bits_per_symbol": rate, "trials": trials, "seed": seed },
        "empirical_block_error": out.empirical_block_error,
        "empirical_rate": out.empirical_rate,
        "bins": out.bins,
        "errors_per_trial_count": out.errors,
    })))
}

pub fn gen_random(
    sizes: (usize, usize, usize),
    grain: u32,
    seed: u64,
    computable_only: bool,
) -> Result<String, CliError> {
    let cfg = GeneratorConfig::new(sizes, grain).map_err(|e| match e {
        Error::InvalidArgument(m) => CliError::Input(m),
        other => other.into(),
    })?;
    let p = random_problem(&cfg, seed, computable_only)?;
    Ok(
        serde_json::to_string_pretty(&ProblemFile::from_problem(&p)).expect("problem serializes")
            + "\n",
    )
}
