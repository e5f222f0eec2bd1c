//! `randsec`: analyze secure computation problems from the command line.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use randsec_cli::commands::{self, GraphKind, ProtocolKind, Setting};
use randsec_cli::error::CliError;
use randsec_cli::files::ProblemFile;

#[derive(Parser, Debug)]
#[command(
    name = "randsec",
    version,
    about = "Secure computability, rates and protocols for randomized two-party functions"
)]
struct Cli {
    /// Problem file (JSON); `-` reads standard input.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Where to write the report; `-` is standard output.
    #[arg(long, global = true, default_value = "-")]
    output: String,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit the report as JSON instead of `key = value` lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide secure computability and list the equivalence classes.
    Check,
    /// Compute the optimal rate for a security setting.
    Rate {
        #[arg(long, value_enum)]
        setting: Setting,
        /// Block length for ps1/ps2.
        #[arg(short = 'n', long = "block-length", default_value_t = 1)]
        n: usize,
    },
    /// Characteristic graph (or its n-fold power).
    Graph {
        #[arg(long, value_enum, default_value = "eq")]
        which: GraphKind,
        #[arg(short = 'n', long = "block-length", default_value_t = 1)]
        n: usize,
        /// Write the graph in DOT format to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Synthesize a one-message secure protocol.
    Protocol {
        /// Write the protocol JSON to this file instead of the report.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "canonical")]
        kind: ProtocolKind,
    },
    /// Execute a protocol file on the problem and audit it.
    Audit {
        #[arg(long)]
        protocol: PathBuf,
        /// Audit against this leakage/error budget instead of exactly.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Random-binning simulation with decoder side information.
    Swsim {
        #[arg(short = 'n', long = "block-length")]
        n: usize,
        #[arg(long)]
        rate: f64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Generate a random problem file.
    GenRandom {
        /// Alphabet sizes as `x,y,z`.
        #[arg(long, value_parser = parse_sizes)]
        sizes: (usize, usize, usize),
        #[arg(long, default_value_t = 8)]
        grain: u32,
        #[arg(long)]
        computable_only: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Rate { .. } => "rate",
            Command::Graph { .. } => "graph",
            Command::Protocol { .. } => "protocol",
            Command::Audit { .. } => "audit",
            Command::Swsim { .. } => "swsim",
            Command::GenRandom { .. } => "gen-random",
        }
    }
}

fn parse_sizes(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x, y, z] => Ok((x, y, z)),
        _ => Err(format!("expected three comma-separated sizes, got {s:?}")),
    }
}

fn read_source(path: &str) -> Result<Vec<u8>, CliError> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Io(format!("cannot read standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))
    }
}

fn write_output(target: &str, text: &str) -> Result<(), CliError> {
    if target == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())
            .and_then(|()| out.flush())
            .map_err(|e| CliError::Io(format!("cannot write standard output: {e}")))
    } else {
        commands::write_file(std::path::Path::new(target), text)
    }
}

/// Flattens a JSON value into sorted `path = value` lines.
fn render_text(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                render_text(child, &p, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object()) => {
            for (i, child) in items.iter().enumerate() {
                render_text(child, &format!("{path}[{i}]"), out);
            }
        }
        other => {
            out.push_str(path);
            out.push_str(" = ");
            out.push_str(&other.to_string());
            out.push('\n');
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    if let Command::GenRandom {
        sizes,
        grain,
        computable_only,
    } = &cli.command
    {
        let text = commands::gen_random(*sizes, *grain, cli.seed, *computable_only)?;
        write_output(&cli.output, &text)?;
        return Ok(0);
    }
    let input = cli
        .input
        .as_deref()
        .ok_or_else(|| CliError::Input(format!("{} requires --input", cli.command.name())))?;
    let bytes = read_source(input)?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let p = ProblemFile::parse(&bytes)?;
    let outcome = match &cli.command {
        Command::Check => commands::check(&p),
        Command::Rate { setting, n } => commands::rate(&p, *setting, *n, cli.seed)?,
        Command::Graph { which, n, dot } => commands::graph(&p, *which, *n, dot.as_deref())?,
        Command::Protocol { emit, kind } => commands::protocol(&p, *kind, emit.as_deref())?,
        Command::Audit { protocol, epsilon } => {
            let text = read_source(&protocol.to_string_lossy())?;
            commands::audit_cmd(&p, &text, *epsilon)?
        }
        Command::Swsim { n, rate, trials } => commands::swsim(&p, *n, *rate, *trials, cli.seed)?,
        Command::GenRandom { .. } => unreachable!("handled above"),
    };
    let envelope = json!({
        "command": cli.command.name(),
        "tool_version": env!("CARGO_PKG_VERSION"),
        "input_digest": digest,
        "payload": outcome.payload,
    });
    let text = if cli.json {
        serde_json::to_string_pretty(&envelope).expect("report serializes") + "\n"
    } else {
        let mut s = String::new();
        render_text(&envelope, "", &mut s);
        s
    };
    write_output(&cli.output, &text)?;
    Ok(if outcome.negative { 3 } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
