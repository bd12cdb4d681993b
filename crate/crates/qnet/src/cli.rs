//! `qnet` command line.
//!
//! Every subcommand writes its rows to `--out` (stdout by default) in the
//! chosen `--format`; summaries go to stderr. `--config FILE` reads a JSON
//! object whose keys are long flag names; flags given on the command line
//! win. Exit codes: 0 success, 1 usage error, 2 runtime failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qnet_core::decoders::{DecoderKind, DEFAULT_MAX_ITERS};
use qnet_core::netchain::{ChainConfig, ChainMode};
use qnet_core::noise::{werner, NoiseModel};

use crate::codespec::{parse_code, parse_code_spec};
use crate::experiments::{
    chain_rows, decode_bench, describe_comparison, knill_mc, protocol_log, rate_table, Channel, DecodeParams, KnillParams,
    ProtocolKind, ProtocolParams,
};
use crate::harness::Harness;
use crate::output::{render, Format};
use crate::scenario::{parse_basis, parse_mode, ChainScenario, OneOrMany};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "qnet", version, about = "Network quantum communication experiments")]
pub struct Cli {
    /// Master seed; trial t uses stream t of it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: u64,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// csv, json or table.
    #[arg(long, global = true, default_value = "csv")]
    pub format: Format,
    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// JSON file with default flag values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write 0 in the timing columns so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub omit_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-trial logs of teleportation, superdense coding, swapping or purification.
    Protocol(ProtocolArgs),
    /// Code-capacity decoder benchmark.
    Decode(DecodeArgs),
    /// Monte Carlo of teleportation-based error correction.
    Knill(KnillArgs),
    /// Repeater chain report.
    Chain(ChainArgs),
    /// EPR generation rate table.
    Rate(RateArgs),
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    #[arg(long, default_value = "teleport")]
    pub kind: ProtocolKind,
    /// Noise spec, e.g. `depolarizing:0.05`.
    #[arg(long, default_value = "none")]
    pub noise: NoiseModel,
    #[arg(long, default_value_t = 3)]
    pub links: usize,
    /// Werner fidelity of the purified pairs.
    #[arg(long, default_value_t = 0.9)]
    pub fidelity: f64,
    #[arg(long, default_value = "bit_flip")]
    pub basis: String,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Code id; repeat for several codes.
    #[arg(long = "code", required = true)]
    pub codes: Vec<String>,
    /// lookup, mwpm or bp (default picks per code).
    #[arg(long)]
    pub decoder: Option<DecoderKind>,
    /// Physical error rates, comma separated or repeated.
    #[arg(long = "p", required = true, value_delimiter = ',')]
    pub ps: Vec<f64>,
    #[arg(long, default_value = "independent_xz")]
    pub channel: Channel,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
}

#[derive(Debug, Args)]
pub struct KnillArgs {
    #[arg(long)]
    pub code: String,
    #[arg(long)]
    pub decoder: Option<DecoderKind>,
    #[arg(long, default_value_t = 0.0)]
    pub p_c: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p_g: f64,
    #[arg(long, default_value_t = 0.0)]
    pub meas_flip: f64,
    /// Data noise spec; replaces depolarizing noise at p_c + 5 p_g.
    #[arg(long)]
    pub noise: Option<NoiseModel>,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    /// Scenario JSON; the flags below override its fields.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub links: Option<usize>,
    /// Werner fidelity of every link.
    #[arg(long)]
    pub fidelity: Option<f64>,
    /// Alternating bit/phase purification rounds.
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Explicit purification bases, e.g. `bit_flip,phase_flip`.
    #[arg(long, value_delimiter = ',')]
    pub purify: Option<Vec<String>>,
    /// sequential or nested.
    #[arg(long)]
    pub schedule: Option<String>,
    /// One-hop classical delay in T.
    #[arg(long)]
    pub delay: Option<f64>,
    /// physical, encoded_teleport, encoded_direct or all.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long)]
    pub decoder: Option<String>,
    #[arg(long)]
    pub p_g: Option<f64>,
    /// Add a row from --trials circuit-level samples of the physical chain.
    #[arg(long)]
    pub sample: bool,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    /// Physical qubits at the node.
    #[arg(long)]
    pub qubits: u64,
    /// Code id; repeat to compare against the first.
    #[arg(long = "code", required = true)]
    pub codes: Vec<String>,
    #[arg(long, default_value_t = 4)]
    pub cycle: u64,
    #[arg(long, default_value_t = 0.0)]
    pub p_c: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p_g: f64,
}

/// Value of `--config`, if any, without running the full parser.
fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

/// Appends flags from a JSON config object unless already on the command line.
pub fn merge_config(mut args: Vec<String>, config: &serde_json::Value) -> Result<Vec<String>, CliError> {
    let obj = config
        .as_object()
        .ok_or_else(|| CliError::Usage("config must be a JSON object".into()))?;
    for (key, value) in obj {
        let flag = format!("--{}", key.replace('_', "-"));
        let present = args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if present {
            continue;
        }
        let scalar = |v: &serde_json::Value| -> Result<String, CliError> {
            match v {
                serde_json::Value::String(s) => Ok(s.clone()),
                serde_json::Value::Number(n) => Ok(n.to_string()),
                other => Err(CliError::Usage(format!("config key {key:?}: unsupported value {other}"))),
            }
        };
        match value {
            serde_json::Value::Bool(true) => args.push(flag),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::Array(items) => {
                for item in items {
                    args.push(flag.clone());
                    args.push(scalar(item)?);
                }
            }
            v => {
                args.push(flag);
                args.push(scalar(v)?);
            }
        }
    }
    Ok(args)
}

fn emit<T: Serialize>(cli: &Cli, rows: &[T]) -> Result<(), CliError> {
    let bytes = render(rows, cli.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

fn decoder_for(kind: Option<DecoderKind>, code: &qnet_core::CssCode) -> DecoderKind {
    kind.unwrap_or_else(|| DecoderKind::default_for(code))
}

fn chain_config(cli: &Cli, a: &ChainArgs) -> Result<(ChainConfig, Vec<ChainMode>), CliError> {
    let mut scenario = match &a.scenario {
        Some(path) => ChainScenario::load(path)?,
        None => {
            let d = ChainConfig::default_scenario();
            ChainScenario {
                links: d.num_links(),
                fidelities: OneOrMany::One(d.link_states[0].fidelity()),
                rounds: d.rounds(),
                purify: None,
                schedule: "nested".into(),
                delays: OneOrMany::One(d.hop_delay),
                mode: "physical".into(),
                code_id: None,
                decoder: None,
                p_g: 0.0,
                trials: None,
                seed: None,
            }
        }
    };
    if let Some(m) = a.links {
        if let OneOrMany::Many(v) = &scenario.fidelities {
            if v.len() != m && a.fidelity.is_none() {
                return Err(CliError::Usage(format!("--links {m} does not match the scenario's {} fidelities", v.len())));
            }
        }
        scenario.links = m;
    }
    if let Some(f) = a.fidelity {
        werner(f).map_err(CliError::usage)?;
        scenario.fidelities = OneOrMany::One(f);
    }
    if let Some(r) = a.rounds {
        scenario.rounds = r;
        scenario.purify = None;
    }
    if let Some(p) = &a.purify {
        for b in p {
            parse_basis(b)?;
        }
        scenario.purify = Some(p.clone());
    }
    if let Some(s) = &a.schedule {
        scenario.schedule = s.clone();
    }
    if let Some(d) = a.delay {
        scenario.delays = OneOrMany::One(d);
    }
    if let Some(c) = &a.code {
        scenario.code_id = Some(c.clone());
    }
    if let Some(d) = &a.decoder {
        scenario.decoder = Some(d.clone());
    }
    if let Some(p) = a.p_g {
        scenario.p_g = p;
    }
    let mode = a.mode.clone().unwrap_or_else(|| scenario.mode.clone());
    let modes = if mode == "all" {
        if scenario.code_id.is_some() {
            vec![ChainMode::Physical, ChainMode::EncodedTeleport, ChainMode::EncodedDirect]
        } else {
            vec![ChainMode::Physical]
        }
    } else {
        vec![parse_mode(&mode)?]
    };
    scenario.mode = modes[0].as_str().into();
    let config = scenario.to_config(cli.trials, cli.seed)?;
    Ok((config, modes))
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let harness = Harness::new(cli.threads)?;
    match &cli.command {
        Command::Protocol(a) => {
            let params = ProtocolParams {
                kind: a.kind,
                noise: a.noise,
                links: a.links,
                fidelity: a.fidelity,
                basis: parse_basis(&a.basis)?,
            };
            let rows = protocol_log(&params, cli.trials, cli.seed, &harness)?;
            let ok = rows.iter().filter(|r| r.success).count();
            eprintln!("{}: {ok}/{} trials succeeded", a.kind.as_str(), rows.len());
            emit(cli, &rows)
        }
        Command::Decode(a) => {
            let mut rows = Vec::new();
            let codes = a.codes.iter().map(|id| Ok((id.clone(), parse_code(id)?))).collect::<Result<Vec<_>, CliError>>()?;
            for (id, code) in &codes {
                for &p in &a.ps {
                    let params = DecodeParams {
                        code_id: id.clone(),
                        code: code.clone(),
                        decoder: decoder_for(a.decoder, code),
                        channel: a.channel,
                        p,
                        max_iters: a.max_iters,
                    };
                    rows.push(decode_bench(&params, cli.trials, cli.seed, &harness, !cli.omit_timing)?);
                }
            }
            emit(cli, &rows)
        }
        Command::Knill(a) => {
            let code = parse_code(&a.code)?;
            let params = KnillParams {
                code_id: a.code.clone(),
                decoder: decoder_for(a.decoder, &code),
                code,
                p_c: a.p_c,
                p_g: a.p_g,
                meas_flip_p: a.meas_flip,
                data_noise: a.noise,
            };
            let row = knill_mc(&params, cli.trials, cli.seed, &harness, !cli.omit_timing)?;
            emit(cli, &[row])
        }
        Command::Chain(a) => {
            let (config, modes) = chain_config(cli, a)?;
            let rows = chain_rows(&config, &modes, a.sample.then_some(cli.trials), cli.seed, &harness)?;
            emit(cli, &rows)
        }
        Command::Rate(a) => {
            let codes = a
                .codes
                .iter()
                .map(|id| Ok((id.clone(), parse_code_spec(id)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let table = rate_table(a.qubits, &codes, a.cycle, a.p_c, a.p_g)?;
            for (base, other, c) in &table.comparisons {
                eprintln!("{}", describe_comparison(base, other, c));
            }
            emit(cli, &table.rows)
        }
    }
}

/// Parses `args` (program name first), runs the experiment and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = match args.into_iter().map(|a| a.into().into_string()).collect::<Result<_, _>>() {
        Ok(a) => a,
        Err(bad) => {
            eprintln!("error: argument is not valid UTF-8: {bad:?}");
            return 1;
        }
    };
    match parse_and_run(args) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string();
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            e.exit_code()
        }
    }
}

fn parse_and_run(args: Vec<String>) -> Result<(), CliError> {
    let args = match config_path(&args) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed config {path}: {e}")))?;
            merge_config(args, &value)?
        }
        None => args,
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            // help and version go to stdout and are not errors
            let _ = e.print();
            return if usage { Err(CliError::Usage(String::new())) } else { Ok(()) };
        }
    };
    execute(&cli)
}

impl FromStr for Cli {
    type Err = CliError;

    /// Parses a whitespace-separated command line (without program name).
    fn from_str(s: &str) -> Result<Self, CliError> {
        let args = std::iter::once("qnet").chain(s.split_whitespace());
        Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))
    }
}
