//! Argument surface and the three run commands.

use crate::exec;
use crate::formats;
use crate::report::{ExpectedReport, GadgetReport, GroverReport, UbqcReport, UniformityReport};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mbqc_core::gadget::{gadget, GadgetKind, ScenarioExpectation};
use mbqc_core::grover::Oracle;
use mbqc_core::pattern::{exact_output_distribution, RunOptions};
use mbqc_core::stats::uniformity_test_4;
use mbqc_core::ubqc::ProtocolMode;
use mbqc_core::{Angle, Error, InputSpec};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "mbqc",
    version,
    about = "Measurement-based quantum computation: gate gadgets, two-qubit Grover, and blind delegation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify one gate gadget against its reference scenario
    Gadget(GadgetArgs),
    /// Run the 18-qubit two-qubit Grover pattern
    Grover(GroverArgs),
    /// Run the blind-delegation protocol over the Grover pattern
    Ubqc(UbqcArgs),
    /// Run the built-in invariant suite
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Seeded Monte-Carlo shots
    Sample,
    /// Enumerate every measurement branch (at most 8 measured qubits)
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum View {
    Client,
    Server,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Faithful,
    Replica,
}

impl Protocol {
    pub fn mode(self) -> ProtocolMode {
        match self {
            Protocol::Faithful => ProtocolMode::Faithful,
            Protocol::Replica => ProtocolMode::Replica,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Faithful => "faithful",
            Protocol::Replica => "replica",
        }
    }
}

/// Flags shared by the run commands.
#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    /// Identical seeds reproduce identical output byte for byte
    #[arg(long, env = "MBQC_SEED", default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Sample)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the report to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GadgetName {
    H,
    X,
    Z,
    T,
    Rz,
    Cz,
}

#[derive(Args, Debug)]
pub struct GadgetArgs {
    /// Which gadget to run
    #[arg(value_enum)]
    pub name: GadgetName,
    /// Rotation angle for rz, in octants (k means k·π/4)
    #[arg(long, conflicts_with = "theta_radians")]
    pub theta_octants: Option<i64>,
    /// Rotation angle for rz, in radians
    #[arg(long)]
    pub theta_radians: Option<f64>,
    /// Override the scenario input: tokens 0, 1, +, -, comma-separated for cz
    #[arg(long)]
    pub input: Option<String>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct GroverArgs {
    /// Marked bitstring: 00, 01, 10, or 11
    #[arg(long, value_parser = parse_oracle)]
    pub oracle: Oracle,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct UbqcArgs {
    #[arg(long, value_parser = parse_oracle)]
    pub oracle: Oracle,
    #[arg(long, value_enum, default_value_t = View::Both)]
    pub view: View,
    #[arg(long, value_enum, default_value_t = Protocol::Faithful)]
    pub protocol: Protocol,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Debug hook: run with the conditional corrections turned off. The
    /// suite is expected to fail.
    #[arg(long, hide = true)]
    pub disable_corrections: bool,
}

fn parse_oracle(s: &str) -> std::result::Result<Oracle, String> {
    Oracle::parse(s).map_err(|e| e.to_string())
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

pub fn cmd_grover(args: GroverArgs) -> Result<bool> {
    if args.run.mode == Mode::Exact {
        return Err(Error::Usage(
            "exact mode supports at most 8 measured qubits, the grover pattern measures 16".into(),
        )
        .into());
    }
    let hist = exec::parallel_grover(args.oracle, args.run.shots, args.run.seed)?;
    let marked = args.oracle.marked_bitstring();
    let pass = hist.is_point_mass_on(&marked);
    let report = GroverReport {
        command: "grover",
        oracle: marked.clone(),
        mode: "sample",
        shots: hist.shots,
        seed: hist.seed,
        counts: hist.counts.clone(),
        marked,
        pass,
    };
    let text = match args.run.format {
        Format::Json => report.to_json()?,
        Format::Text => report.to_text(),
    };
    emit(&text, &args.run.out)?;
    Ok(pass)
}

pub fn cmd_ubqc(args: UbqcArgs) -> Result<bool> {
    if args.run.mode == Mode::Exact {
        return Err(Error::Usage(
            "exact mode supports at most 8 measured qubits, the blind pattern measures 16".into(),
        )
        .into());
    }
    let run = exec::parallel_ubqc(
        args.oracle,
        args.run.shots,
        args.run.seed,
        args.protocol.mode(),
    )?;
    let marked = args.oracle.marked_bitstring();

    let want_client = matches!(args.view, View::Client | View::Both);
    let want_server = matches!(args.view, View::Server | View::Both);
    let client_pass = !want_client || run.client.is_point_mass_on(&marked);
    let uniformity = want_server.then(|| {
        let counts =
            ["00", "01", "10", "11"].map(|k| run.server_view.counts.get(k).copied().unwrap_or(0));
        uniformity_test_4(&counts)
    });
    let server_pass = uniformity.is_none_or(|u| u.passes);
    let pass = client_pass && server_pass;

    let transcript_path = match (&args.run.out, run.sessions.first()) {
        (Some(out), Some(session)) => {
            let path = out.with_extension("transcript.json");
            formats::write_transcript(&path, session)?;
            Some(path.display().to_string())
        }
        _ => None,
    };

    let report = UbqcReport {
        command: "ubqc",
        oracle: marked.clone(),
        protocol: args.protocol.name(),
        view: match args.view {
            View::Client => "client",
            View::Server => "server",
            View::Both => "both",
        },
        shots: args.run.shots,
        seed: args.run.seed,
        marked,
        client_counts: want_client.then(|| run.client.counts.clone()),
        server_counts: want_server.then(|| run.server_view.counts.clone()),
        uniformity: uniformity.map(|u| UniformityReport {
            statistic: u.statistic,
            p_value: u.p_value,
            passes: u.passes,
        }),
        transcript_path,
        pass,
    };
    let text = match args.run.format {
        Format::Json => report.to_json()?,
        Format::Text => report.to_text(),
    };
    emit(&text, &args.run.out)?;
    Ok(pass)
}

fn resolve_gadget(args: &GadgetArgs) -> Result<GadgetKind> {
    let theta = match (args.theta_octants, args.theta_radians) {
        (Some(k), None) => Some(Angle::octant(k)),
        (None, Some(x)) => Some(Angle::radians(x)),
        (None, None) => None,
        (Some(_), Some(_)) => unreachable!("clap rejects conflicting angle flags"),
    };
    match (args.name, theta) {
        (GadgetName::Rz, Some(theta)) => Ok(GadgetKind::Rz(theta)),
        (GadgetName::Rz, None) => {
            Err(Error::Usage("rz needs --theta-octants K or --theta-radians X".into()).into())
        }
        (name, None) => Ok(match name {
            GadgetName::H => GadgetKind::H,
            GadgetName::X => GadgetKind::X,
            GadgetName::Z => GadgetKind::Z,
            GadgetName::T => GadgetKind::T,
            GadgetName::Cz => GadgetKind::Cz,
            GadgetName::Rz => unreachable!(),
        }),
        (_, Some(_)) => {
            Err(Error::Usage("--theta-* flags only apply to the rz gadget".into()).into())
        }
    }
}

fn parse_inputs(spec: &str, arity: usize) -> Result<Vec<InputSpec>> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != arity {
        return Err(Error::Usage(format!(
            "gadget takes {arity} input(s), got {} in {spec:?}",
            parts.len()
        ))
        .into());
    }
    parts
        .iter()
        .map(|token| match token.trim() {
            "0" => Ok(InputSpec::Zero),
            "1" => Ok(InputSpec::One),
            "+" => Ok(InputSpec::Plus),
            "-" => Ok(InputSpec::Minus),
            other => Err(Error::Usage(format!(
                "unknown input token {other:?} (expected 0, 1, +, -)"
            ))
            .into()),
        })
        .collect()
}

pub fn cmd_gadget(args: GadgetArgs) -> Result<bool> {
    let kind = resolve_gadget(&args)?;
    let scenario = kind.paper_scenario();
    let g = gadget(kind);

    // A custom input leaves the reference expectation unverifiable.
    let (inputs, expected) = match &args.input {
        Some(spec) => (parse_inputs(spec, kind.arity())?, None),
        None => (scenario.inputs.clone(), Some(scenario.expected.clone())),
    };
    let options = RunOptions {
        output_z_corrections: true,
        output_bases: Some(scenario.output_bases.clone()),
        ..RunOptions::default()
    };

    let n_outputs = g.graph.outputs().len();
    let mut counts = None;
    let mut probabilities = None;
    let pass;
    match args.run.mode {
        Mode::Exact => {
            let dist = exact_output_distribution(&g.graph, &g.flow, &g.pattern, &inputs, &options)?;
            pass = match &expected {
                None => true,
                Some(ScenarioExpectation::ProbZero { value, .. }) => {
                    (dist[0] - value).abs() <= 1e-9
                }
                Some(ScenarioExpectation::PointMass(bs)) => {
                    (dist[bitstring_index(bs)] - 1.0).abs() <= 1e-9
                }
            };
            let map: BTreeMap<String, f64> = dist
                .iter()
                .enumerate()
                .map(|(k, &p)| (index_bitstring(k, n_outputs), p))
                .collect();
            probabilities = Some(map);
        }
        Mode::Sample => {
            let hist = exec::parallel_gadget(&g, &inputs, &options, args.run.shots, args.run.seed)?;
            pass = match &expected {
                None => true,
                Some(ScenarioExpectation::ProbZero { value, sample_tol }) => {
                    (hist.frequency(&"0".repeat(n_outputs)) - value).abs() <= *sample_tol
                }
                Some(ScenarioExpectation::PointMass(bs)) => hist.is_point_mass_on(bs),
            };
            counts = Some(hist.counts);
        }
    }

    let report = GadgetReport {
        command: "gadget",
        gadget: format!("{:?}", args.name).to_lowercase(),
        theta_octants: args.theta_octants,
        theta_radians: args.theta_radians,
        mode: match args.run.mode {
            Mode::Sample => "sample",
            Mode::Exact => "exact",
        },
        shots: (args.run.mode == Mode::Sample).then_some(args.run.shots),
        seed: args.run.seed,
        counts,
        probabilities,
        expected: expected.map(|e| match e {
            ScenarioExpectation::ProbZero { value, sample_tol } => ExpectedReport::ProbZero {
                value,
                sample_tolerance: sample_tol,
            },
            ScenarioExpectation::PointMass(bs) => ExpectedReport::PointMass { bitstring: bs },
        }),
        pass,
    };
    let text = match args.run.format {
        Format::Json => report.to_json()?,
        Format::Text => report.to_text(),
    };
    emit(&text, &args.run.out)?;
    Ok(pass)
}

/// Index of a rendered bitstring in a little-endian distribution.
fn bitstring_index(bs: &str) -> usize {
    bs.bytes()
        .rev()
        .enumerate()
        .map(|(j, b)| (usize::from(b - b'0')) << j)
        .sum()
}

/// Inverse of [`bitstring_index`].
fn index_bitstring(k: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|j| if (k >> j) & 1 == 1 { '1' } else { '0' })
        .collect()
}
