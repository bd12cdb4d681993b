//! Experiment runners behind the CLI subcommands. Each returns the rows it
//! would print; trial `t` draws from `stream_rng(seed, t)`.

use std::str::FromStr;
use std::time::Instant;

use qnet_core::codes::CssCode;
use qnet_core::decoders::{build_decoder, DecoderKind, DEFAULT_MAX_ITERS};
use qnet_core::ftec::{knill_trial, KnillNoise, KnillSampler};
use qnet_core::netchain::{run_chain, sample_chain, ChainConfig, ChainMode};
use qnet_core::noise::{effective_error_rate, stream_rng, werner, NoiseModel};
use qnet_core::protocols::{purify_pair_sampled, superdense, swap_chain, teleport, ProtocolOutcome, PurifyBasis};
use qnet_core::ratecalc::{compare, epr_rate, RateComparison, RateConfig};
use qnet_core::{Error, Gate, Pauli};

use crate::codespec::CodeSpec;
use crate::harness::Harness;
use crate::output::{render_ratio, ChainRow, DecodeRow, KnillRow, ProtocolRow, RateRow};
use crate::CliError;

fn core_err(e: Error) -> CliError {
    CliError::runtime(e)
}

/// Milliseconds since `start`, or 0 when timing is switched off.
fn elapsed_ms(start: Instant, timing: bool) -> f64 {
    if timing {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProtocolKind {
    Teleport,
    Superdense,
    Swap,
    Purify,
}

impl FromStr for ProtocolKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "teleport" => Ok(ProtocolKind::Teleport),
            "superdense" => Ok(ProtocolKind::Superdense),
            "swap" => Ok(ProtocolKind::Swap),
            "purify" => Ok(ProtocolKind::Purify),
            other => Err(format!("unknown protocol {other:?} (teleport, superdense, swap, purify)")),
        }
    }
}

impl ProtocolKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProtocolKind::Teleport => "teleport",
            ProtocolKind::Superdense => "superdense",
            ProtocolKind::Swap => "swap",
            ProtocolKind::Purify => "purify",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProtocolParams {
    pub kind: ProtocolKind,
    /// Pair noise for teleport and swap, channel noise for superdense.
    pub noise: NoiseModel,
    pub links: usize,
    /// Werner fidelity of both input pairs for purify.
    pub fidelity: f64,
    pub basis: PurifyBasis,
}

/// Payload preparations cycled through by teleportation trials:
/// |0⟩, |1⟩, |+⟩, |−⟩.
pub fn teleport_input(t: u64) -> Vec<Gate> {
    match t % 4 {
        0 => vec![],
        1 => vec![Gate::X(0)],
        2 => vec![Gate::H(0)],
        _ => vec![Gate::X(0), Gate::H(0)],
    }
}

/// Bits sent in superdense trial `t`.
pub fn superdense_input(t: u64) -> (bool, bool) {
    (t & 1 == 1, t & 2 == 2)
}

fn bits_string(bits: &[(bool, bool)]) -> String {
    bits.iter()
        .map(|&(a, b)| format!("{}{}", a as u8, b as u8))
        .collect::<Vec<_>>()
        .join(" ")
}

fn row(t: u64, kind: ProtocolKind, out: &ProtocolOutcome, success: bool) -> ProtocolRow {
    ProtocolRow {
        trial_id: t,
        protocol: kind.as_str().into(),
        outcome_bits: bits_string(&out.classical_bits),
        success,
        residual_frame: out.residual_frame.to_label(),
    }
}

pub fn protocol_log(params: &ProtocolParams, trials: u64, seed: u64, harness: &Harness) -> Result<Vec<ProtocolRow>, CliError> {
    params.noise.validate().map_err(CliError::usage)?;
    let pair = match params.kind {
        ProtocolKind::Purify => Some(werner(params.fidelity).map_err(CliError::usage)?),
        _ => None,
    };
    if params.kind == ProtocolKind::Swap && params.links == 0 {
        return Err(CliError::Usage("swap needs at least one link".into()));
    }
    harness.map(trials, |t| {
        let mut rng = stream_rng(seed, t);
        let r = match params.kind {
            ProtocolKind::Teleport => {
                let out = teleport(&teleport_input(t), &params.noise, &mut rng).map_err(core_err)?;
                row(t, params.kind, &out.outcome, out.verified)
            }
            ProtocolKind::Superdense => {
                let sent = superdense_input(t);
                let (got, out) = superdense(sent, &params.noise, &mut rng).map_err(core_err)?;
                row(t, params.kind, &out, got == sent)
            }
            ProtocolKind::Swap => {
                let out = swap_chain(params.links, &params.noise, &mut rng).map_err(core_err)?;
                let ok = out.residual_frame.is_identity();
                row(t, params.kind, &out, ok)
            }
            ProtocolKind::Purify => {
                let w = pair.expect("checked above");
                let out = purify_pair_sampled(&w, &w, params.basis, &mut rng).map_err(core_err)?;
                row(t, params.kind, &out, out.success)
            }
        };
        Ok(r)
    })
}

/// Code-capacity channel families for decoder benchmarks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    IndependentXz,
    Depolarizing,
    BitFlip,
    PhaseFlip,
}

impl FromStr for Channel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "independent_xz" => Ok(Channel::IndependentXz),
            "depolarizing" => Ok(Channel::Depolarizing),
            "bit_flip" => Ok(Channel::BitFlip),
            "phase_flip" => Ok(Channel::PhaseFlip),
            other => Err(format!("unknown channel {other:?}")),
        }
    }
}

impl Channel {
    pub fn noise(&self, p: f64) -> Result<NoiseModel, Error> {
        match self {
            Channel::IndependentXz => NoiseModel::independent_xz(p, p),
            Channel::Depolarizing => NoiseModel::depolarizing(p),
            Channel::BitFlip => NoiseModel::bit_flip(p),
            Channel::PhaseFlip => NoiseModel::phase_flip(p),
        }
    }
}

/// BP needs a prior strictly inside (0, 1/2).
fn decoder_prior(p: f64) -> f64 {
    p.clamp(1e-6, 0.49)
}

#[derive(Clone, Debug)]
pub struct DecodeParams {
    pub code_id: String,
    pub code: CssCode,
    pub decoder: DecoderKind,
    pub channel: Channel,
    pub p: f64,
    pub max_iters: usize,
}

pub fn decode_bench(params: &DecodeParams, trials: u64, seed: u64, harness: &Harness, timing: bool) -> Result<DecodeRow, CliError> {
    let noise = params.channel.noise(params.p).map_err(CliError::usage)?;
    let code = &params.code;
    let decoder = build_decoder(params.decoder, code, decoder_prior(params.p), params.max_iters).map_err(CliError::usage)?;
    let start = Instant::now();
    let per_trial = harness.map(trials, |t| {
        let mut rng = stream_rng(seed, t);
        let e = noise.sample_error(code.n(), &mut rng);
        let s = code.syndrome(&e).map_err(core_err)?;
        match decoder.decode(&s) {
            Ok(r) => {
                let failed = !r.converged || decoder.is_failure(&e, &r).map_err(core_err)?;
                Ok((failed, r.iterations))
            }
            Err(Error::Undecodable(_)) => Ok((true, 0)),
            Err(e) => Err(core_err(e)),
        }
    })?;
    let failures = per_trial.iter().filter(|r| r.0).count() as u64;
    let iterations: usize = per_trial.iter().map(|r| r.1).sum();
    Ok(DecodeRow {
        code_id: params.code_id.clone(),
        n: code.n(),
        k: code.k(),
        d: code.distance(),
        p: params.p,
        trials,
        logical_failures: failures,
        avg_iterations: if trials == 0 { 0.0 } else { iterations as f64 / trials as f64 },
        wall_time_ms: elapsed_ms(start, timing),
    })
}

#[derive(Clone, Debug)]
pub struct KnillParams {
    pub code_id: String,
    pub code: CssCode,
    pub decoder: DecoderKind,
    pub p_c: f64,
    pub p_g: f64,
    pub meas_flip_p: f64,
    /// Replaces the depolarizing data noise at `effective_error_rate(p_c, p_g)`.
    pub data_noise: Option<NoiseModel>,
}

pub fn knill_mc(params: &KnillParams, trials: u64, seed: u64, harness: &Harness, timing: bool) -> Result<KnillRow, CliError> {
    let p_eff = effective_error_rate(params.p_c, params.p_g).map_err(CliError::usage)?;
    let flips = NoiseModel::independent_xz(params.meas_flip_p, params.meas_flip_p).map_err(CliError::usage)?;
    if let Some(n) = &params.data_noise {
        n.validate().map_err(CliError::usage)?;
    }
    let prior = match &params.data_noise {
        Some(n) => 1.0 - n.pauli_distribution()[0],
        None => p_eff,
    };
    let code = &params.code;
    let decoder = build_decoder(params.decoder, code, decoder_prior(prior), DEFAULT_MAX_ITERS).map_err(CliError::usage)?;
    let sampler = KnillSampler::new(code);
    let start = Instant::now();
    let failed = harness.map(trials, |t| {
        let mut rng = stream_rng(seed, t);
        let report = match &params.data_noise {
            Some(noise) => {
                let e = noise.sample_error(code.n(), &mut rng);
                let kn = KnillNoise {
                    epr: NoiseModel::None,
                    meas_flip: flips,
                };
                sampler.round(decoder.as_ref(), &e, &kn, &mut rng)
            }
            None => knill_trial(&sampler, decoder.as_ref(), params.p_c, params.p_g, params.meas_flip_p, &mut rng),
        }
        .map_err(core_err)?;
        Ok::<_, CliError>(report.logical_failure)
    })?;
    let failures = failed.iter().filter(|&&f| f).count() as u64;
    Ok(KnillRow {
        code_id: params.code_id.clone(),
        p_c: params.p_c,
        p_g: params.p_g,
        p_eff,
        meas_flip_p: params.meas_flip_p,
        trials,
        logical_failures: failures,
        failure_rate: if trials == 0 { 0.0 } else { failures as f64 / trials as f64 },
        seconds: elapsed_ms(start, timing) / 1e3,
    })
}

/// Success rate and conditional fidelity from `trials` circuit runs.
pub fn sampled_chain(config: &ChainConfig, trials: u64, seed: u64, harness: &Harness) -> Result<(f64, f64), CliError> {
    let samples = harness.map(trials, |t| sample_chain(config, &mut stream_rng(seed, t)).map_err(CliError::usage))?;
    let ok = samples.iter().filter(|s| s.success).count();
    let good = samples.iter().filter(|s| s.success && s.label == Pauli::I).count();
    let survival = if trials == 0 { 0.0 } else { ok as f64 / trials as f64 };
    let fidelity = if ok == 0 { 0.0 } else { good as f64 / ok as f64 };
    Ok((survival, fidelity))
}

/// One row per mode, plus a `physical_sampled` row when `sample` gives a
/// trial count.
pub fn chain_rows(
    config: &ChainConfig,
    modes: &[ChainMode],
    sample: Option<u64>,
    seed: u64,
    harness: &Harness,
) -> Result<Vec<ChainRow>, CliError> {
    let mut rows = Vec::new();
    for &mode in modes {
        let cfg = ChainConfig { mode, ..config.clone() };
        cfg.validate().map_err(CliError::usage)?;
        let r = run_chain(&cfg).map_err(core_err)?;
        rows.push(ChainRow {
            mode: mode.as_str().into(),
            m: r.num_links,
            f_end: r.end_state.fidelity(),
            survival: r.survival,
            latency_t: r.latency,
        });
    }
    if let Some(trials) = sample {
        let cfg = ChainConfig {
            mode: ChainMode::Physical,
            ..config.clone()
        };
        let exact = run_chain(&cfg).map_err(core_err)?;
        let (survival, fidelity) = sampled_chain(&cfg, trials, seed, harness)?;
        rows.push(ChainRow {
            mode: "physical_sampled".into(),
            m: cfg.num_links(),
            f_end: fidelity,
            survival,
            latency_t: exact.latency,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
    /// Each later code against the first one.
    pub comparisons: Vec<(String, String, RateComparison)>,
}

pub fn rate_table(q: u64, codes: &[(String, CodeSpec)], cycle_t_units: u64, p_c: f64, p_g: f64) -> Result<RateTable, CliError> {
    let configs: Vec<RateConfig> = codes
        .iter()
        .map(|(_, c)| RateConfig {
            qubit_budget: q,
            code_n: c.n(),
            code_k: c.k(),
            cycle_t_units,
            p_c,
            p_g,
        })
        .collect();
    let mut rows = Vec::with_capacity(codes.len());
    for ((id, _), cfg) in codes.iter().zip(&configs) {
        let r = epr_rate(cfg).map_err(CliError::usage)?;
        rows.push(RateRow {
            code_id: id.clone(),
            n: cfg.code_n,
            k: cfg.code_k,
            q,
            blocks: r.blocks,
            rate_per_t: render_ratio(r.epr_units_per_t),
            p_eff: r.p_eff,
        });
    }
    let mut comparisons = Vec::new();
    if let Some(base) = configs.first() {
        for ((id, _), cfg) in codes.iter().zip(&configs).skip(1) {
            let c = compare(base, cfg).map_err(CliError::runtime)?;
            comparisons.push((codes[0].0.clone(), id.clone(), c));
        }
    }
    Ok(RateTable { rows, comparisons })
}

/// `"custom:3786:946 vs surface:17: 946/13 = 72.77 (≈72-fold)"`.
pub fn describe_comparison(base: &str, other: &str, c: &RateComparison) -> String {
    format!("{other} vs {base}: {} = {:.2} (≈{}-fold)", render_ratio(c.ratio), c.decimal(), c.folds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codespec::parse_code_spec;
    use qnet_core::codes::{rotated_surface, shor9};

    #[test]
    fn noiseless_protocols_always_succeed() {
        let h = Harness::new(2).unwrap();
        for kind in [ProtocolKind::Teleport, ProtocolKind::Superdense, ProtocolKind::Swap] {
            let p = ProtocolParams {
                kind,
                noise: NoiseModel::None,
                links: 3,
                fidelity: 1.0,
                basis: PurifyBasis::BitFlip,
            };
            let rows = protocol_log(&p, 200, 4, &h).unwrap();
            assert!(rows.iter().all(|r| r.success), "{kind:?}");
            assert!(rows.iter().enumerate().all(|(i, r)| r.trial_id == i as u64));
        }
    }

    #[test]
    fn purify_log_success_rate() {
        let p = ProtocolParams {
            kind: ProtocolKind::Purify,
            noise: NoiseModel::None,
            links: 0,
            fidelity: 0.9,
            basis: PurifyBasis::BitFlip,
        };
        let rows = protocol_log(&p, 20_000, 3, &Harness::new(0).unwrap()).unwrap();
        let rate = rows.iter().filter(|r| r.success).count() as f64 / 20_000.0;
        let expect = 0.8755555555555556;
        assert!((rate - expect).abs() < 3.0 * (expect * (1.0 - expect) / 20_000.0f64).sqrt());
    }

    #[test]
    fn decode_rows_are_deterministic() {
        let params = DecodeParams {
            code_id: "surface:3".into(),
            code: rotated_surface(3).unwrap(),
            decoder: DecoderKind::Mwpm,
            channel: Channel::IndependentXz,
            p: 0.05,
            max_iters: 10,
        };
        let a = decode_bench(&params, 2000, 1, &Harness::new(1).unwrap(), false).unwrap();
        let b = decode_bench(&params, 2000, 1, &Harness::new(3).unwrap(), false).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.avg_iterations, 0.0);
        assert!(a.logical_failures > 0 && a.logical_failures < 200);
    }

    #[test]
    fn knill_without_noise() {
        let params = KnillParams {
            code_id: "shor9".into(),
            code: shor9(),
            decoder: DecoderKind::Lookup,
            p_c: 0.0,
            p_g: 0.0,
            meas_flip_p: 0.0,
            data_noise: Some(NoiseModel::Depolarizing(0.0)),
        };
        let row = knill_mc(&params, 1000, 0, &Harness::new(0).unwrap(), true).unwrap();
        assert_eq!(row.logical_failures, 0);
        assert_eq!(row.failure_rate, 0.0);
    }

    #[test]
    fn rate_rows() {
        let codes: Vec<(String, CodeSpec)> = ["surface:17", "custom:3786:946"]
            .iter()
            .map(|id| (id.to_string(), parse_code_spec(id).unwrap()))
            .collect();
        let t = rate_table(68200, &codes, 4, 0.05, 0.001).unwrap();
        assert_eq!(t.rows[0].blocks, 78);
        assert_eq!(t.rows[0].rate_per_t, "19.5");
        assert_eq!(t.rows[1].rate_per_t, "1419");
        assert!((t.rows[0].p_eff - 0.055).abs() < 1e-15);
        let (base, other, c) = &t.comparisons[0];
        assert_eq!(describe_comparison(base, other, c), "custom:3786:946 vs surface:17: 946/13 = 72.77 (≈72-fold)");
    }

    #[test]
    fn chain_modes_and_sampling() {
        let cfg = ChainConfig::default_scenario();
        let rows = chain_rows(&cfg, &[ChainMode::Physical], Some(2000), 3, &Harness::new(0).unwrap()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].latency_t, 2.0 * 2.0 * 10.0 + 30.0);
        assert!((rows[0].f_end - rows[1].f_end).abs() < 0.02);
        assert!(chain_rows(&cfg, &[ChainMode::EncodedDirect], None, 0, &Harness::new(0).unwrap()).is_err());
    }
}
