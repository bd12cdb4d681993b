//! Repeater chains: link purification, entanglement swapping, classical
//! latency, and two encoded-link variants.
//!
//! The chain has `m` links between nodes `0..=m`. Link `i` joins node `i` to
//! node `i + 1`. Pair quality is tracked as a Bell-diagonal label
//! distribution; [`sample_chain`] replays the same physical-mode chain on the
//! stabilizer simulator.
//!
//! Latency is counted in units of `T` with a one-hop classical delay `D`:
//!
//! * each purification round costs `2D` (both ends exchange their parities);
//!   links purify in parallel, so `R` rounds cost `2RD`;
//! * swap corrections travel one way. With the sequential schedule all
//!   intermediate nodes swap at once and the farthest correction crosses
//!   `m - 1` hops; with the nested schedule the halves are joined
//!   recursively and each level waits for its right half's correction:
//!   `S(1) = 0`, `S(m) = max(S(⌊m/2⌋), S(⌈m/2⌉)) + ⌈m/2⌉·D`.
//!
//! [`run_chain`] reports the latency to establish the end-to-end pair:
//! `2RD + S(m)` in physical mode, `S(m)` for encoded teleportation, and 0 for
//! direct encoded transmission, which needs no classical messages between
//! nodes. [`compare_latency`] adds the `mD` one-way delivery of the frame
//! bits that a payload teleported over the finished pair needs.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::codes::CssCode;
use crate::decoders::{build_decoder, DecoderKind, DEFAULT_MAX_ITERS};
use crate::error::{param, Result};
use crate::ftec::{KnillNoise, KnillSampler};
use crate::noise::{effective_error_rate, stream_rng, werner, BellDiagonalState, NoiseModel};
use crate::pauli::{Pauli, PauliOperator};
use crate::protocols::{alternating_schedule, label_from_outcome, purify_on_tableau, purify_pair_dist, PurifyBasis};
use crate::stabsim::{Gate, StabilizerState};

/// Order in which intermediate nodes swap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SwapSchedule {
    Sequential,
    Nested,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainMode {
    /// Purify every link, then swap.
    Physical,
    /// Purified links carry encoded pairs, one Knill round per hop.
    EncodedTeleport,
    /// Encoded qubits sent hop by hop, one Knill round per hop, no purification.
    EncodedDirect,
}

impl ChainMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChainMode::Physical => "physical",
            ChainMode::EncodedTeleport => "encoded_teleport",
            ChainMode::EncodedDirect => "encoded_direct",
        }
    }
}

/// Code, decoder and Monte Carlo budget of the encoded modes.
#[derive(Clone, Debug)]
pub struct EncodedLink {
    pub code: CssCode,
    pub decoder: DecoderKind,
    /// Knill rounds sampled per hop to estimate its logical channel.
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct ChainConfig {
    /// Raw pair state of each link; its length is the number of links.
    pub link_states: Vec<BellDiagonalState>,
    pub purify_schedule: Vec<PurifyBasis>,
    pub swap_schedule: SwapSchedule,
    /// One-hop classical delay in units of `T`.
    pub hop_delay: f64,
    pub mode: ChainMode,
    /// Gate error rate for the encoded modes.
    pub p_g: f64,
    pub encoded: Option<EncodedLink>,
}

impl ChainConfig {
    /// `m` identical links in physical mode.
    pub fn uniform(m: usize, link: BellDiagonalState, purify_schedule: Vec<PurifyBasis>, swap_schedule: SwapSchedule, hop_delay: f64) -> Self {
        ChainConfig {
            link_states: vec![link; m],
            purify_schedule,
            swap_schedule,
            hop_delay,
            mode: ChainMode::Physical,
            p_g: 0.0,
            encoded: None,
        }
    }

    /// Four Werner(0.95) links, two alternating purification rounds, nested
    /// swaps and `D = 10`.
    pub fn default_scenario() -> Self {
        Self::uniform(4, werner(0.95).expect("valid fidelity"), alternating_schedule(2), SwapSchedule::Nested, 10.0)
    }

    pub fn num_links(&self) -> usize {
        self.link_states.len()
    }

    pub fn rounds(&self) -> usize {
        self.purify_schedule.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.link_states.is_empty() {
            return Err(param("a chain needs at least one link"));
        }
        for s in &self.link_states {
            BellDiagonalState::new(s.probs())?;
        }
        if !(self.hop_delay >= 0.0 && self.hop_delay.is_finite()) {
            return Err(param(format!("hop delay {} must be finite and non-negative", self.hop_delay)));
        }
        if !(0.0..=1.0).contains(&self.p_g) {
            return Err(param(format!("p_g = {} is not a probability", self.p_g)));
        }
        if self.mode != ChainMode::Physical {
            let enc = self.encoded.as_ref().ok_or_else(|| param("encoded modes need a code"))?;
            if enc.trials == 0 {
                return Err(param("encoded modes need at least one trial per hop"));
            }
            if enc.code.k() == 0 {
                return Err(param("encoded modes need a code with k >= 1"));
            }
        }
        Ok(())
    }
}

/// One line of the chain's stage log.
#[derive(Clone, Debug, PartialEq)]
pub struct StageLog {
    pub stage: String,
    pub fidelity: f64,
    pub survival: f64,
    pub latency: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport {
    pub mode: ChainMode,
    pub num_links: usize,
    pub end_state: BellDiagonalState,
    /// Probability that every purification in every link succeeds.
    pub survival: f64,
    /// Expected end-to-end pairs per raw pair per link (logical pairs per
    /// raw physical pair in the encoded modes).
    pub pairs_per_attempt: f64,
    /// Classical delay in units of `T`.
    pub latency: f64,
    pub stages: Vec<StageLog>,
}

/// State after swapping two pairs: the label distribution of the joined pair
/// is the convolution of the inputs under the Pauli product.
pub fn compose_swap(a: &BellDiagonalState, b: &BellDiagonalState) -> Result<BellDiagonalState> {
    let a = BellDiagonalState::new(a.probs())?;
    let b = BellDiagonalState::new(b.probs())?;
    let mut out = [0.0; 4];
    for la in Pauli::ALL {
        for lb in Pauli::ALL {
            out[la.mul(lb).index()] += a.prob(la) * b.prob(lb);
        }
    }
    BellDiagonalState::new(out)
}

/// Link after `schedule` rounds of tree purification, where round `r`
/// combines two pairs that each survived rounds `0..r`. Returns the state
/// and the probability that the whole tree of `2^R` raw pairs succeeds.
pub fn purify_link(raw: &BellDiagonalState, schedule: &[PurifyBasis]) -> Result<(BellDiagonalState, f64)> {
    let mut state = *raw;
    let mut survival = 1.0;
    for &basis in schedule {
        let (p, next) = purify_pair_dist(&state, &state, basis)?;
        // the tree so far doubles each round
        survival = survival * survival * p;
        state = next;
    }
    Ok((state, survival))
}

/// One-way swap-correction delay for `m` links.
pub fn swap_latency(m: usize, schedule: SwapSchedule, hop_delay: f64) -> f64 {
    if m <= 1 {
        return 0.0;
    }
    match schedule {
        SwapSchedule::Sequential => (m - 1) as f64 * hop_delay,
        SwapSchedule::Nested => {
            let left = m / 2;
            let right = m - left;
            swap_latency(left, schedule, hop_delay).max(swap_latency(right, schedule, hop_delay)) + right as f64 * hop_delay
        }
    }
}

/// Two-way delay of `rounds` purification rounds.
pub fn purification_latency(rounds: usize, hop_delay: f64) -> f64 {
    2.0 * rounds as f64 * hop_delay
}

/// Latency of delivering one teleported payload end to end over the same
/// chain: physical mode (purify, swap, deliver frame) vs encoded
/// teleportation (swap, deliver frame).
pub fn compare_latency(config: &ChainConfig) -> (f64, f64) {
    let m = config.num_links();
    let d = config.hop_delay;
    let swaps = swap_latency(m, config.swap_schedule, d);
    let delivery = m as f64 * d;
    (purification_latency(config.rounds(), d) + swaps + delivery, swaps + delivery)
}

/// Order of the intermediate nodes' swaps.
pub fn swap_order(m: usize, schedule: SwapSchedule) -> Vec<usize> {
    fn nested(lo: usize, hi: usize, out: &mut Vec<usize>) {
        // joins links lo..hi; the split node swaps after both halves
        if hi - lo < 2 {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        nested(lo, mid, out);
        nested(mid, hi, out);
        out.push(mid);
    }
    match schedule {
        SwapSchedule::Sequential => (1..m).collect(),
        SwapSchedule::Nested => {
            let mut out = Vec::with_capacity(m.saturating_sub(1));
            nested(0, m, &mut out);
            out
        }
    }
}

/// Folds link states in swap order.
fn fold_links(states: &[BellDiagonalState], schedule: SwapSchedule) -> Result<BellDiagonalState> {
    // segment i currently spans links segs[i].0..segs[i].1
    let mut segs: Vec<(usize, usize, BellDiagonalState)> = states.iter().enumerate().map(|(i, s)| (i, i + 1, *s)).collect();
    for node in swap_order(states.len(), schedule) {
        let i = segs.iter().position(|s| s.1 == node).expect("swap node joins two segments");
        let right = segs.remove(i + 1);
        segs[i].2 = compose_swap(&segs[i].2, &right.2)?;
        segs[i].1 = right.1;
    }
    debug_assert_eq!(segs.len(), 1);
    Ok(segs[0].2)
}

/// Logical label distribution of one encoded hop whose physical channel
/// fails with probability `p_c`, estimated from Knill rounds.
pub fn logical_hop_channel(enc: &EncodedLink, p_c: f64, p_g: f64, stream_offset: u64) -> Result<BellDiagonalState> {
    let p_eff = effective_error_rate(p_c, p_g)?;
    let code = &enc.code;
    let prior = p_eff.clamp(1e-6, 0.49);
    let decoder = build_decoder(enc.decoder, code, prior, DEFAULT_MAX_ITERS)?;
    let sampler = KnillSampler::new(code);
    let data_noise = NoiseModel::depolarizing(p_eff)?;
    let mut counts = [0u64; 4];
    for t in 0..enc.trials {
        let mut rng = stream_rng(enc.seed, stream_offset + t);
        let e = data_noise.sample_error(code.n(), &mut rng);
        let r = sampler.round(decoder.as_ref(), &e, &KnillNoise::NONE, &mut rng)?;
        let label = if r.logical_failure {
            // failures with a trivial class (unconverged decoder) count as X
            let l = Pauli::from_bits(r.residual_class.x.get(0), r.residual_class.z.get(0));
            if l == Pauli::I {
                Pauli::X
            } else {
                l
            }
        } else {
            Pauli::I
        };
        counts[label.index()] += 1;
    }
    BellDiagonalState::from_weights(counts.map(|c| c as f64))
}

/// Evaluates a chain with the Bell-diagonal engine.
pub fn run_chain(config: &ChainConfig) -> Result<ChainReport> {
    config.validate()?;
    let m = config.num_links();
    let d = config.hop_delay;
    let mut stages = Vec::new();

    let purify = config.mode != ChainMode::EncodedDirect;
    let schedule: &[PurifyBasis] = if purify { &config.purify_schedule } else { &[] };
    let mut links = Vec::with_capacity(m);
    let mut survival = 1.0;
    for (i, raw) in config.link_states.iter().enumerate() {
        let (state, s) = purify_link(raw, schedule)?;
        stages.push(StageLog {
            stage: format!("link {i}"),
            fidelity: state.fidelity(),
            survival: s,
            latency: purification_latency(schedule.len(), d),
        });
        survival *= s;
        links.push(state);
    }
    let raw_per_pair = (1u64 << schedule.len()) as f64;

    let (end_state, latency, pairs_per_attempt) = match config.mode {
        ChainMode::Physical => {
            let end = fold_links(&links, config.swap_schedule)?;
            let latency = purification_latency(schedule.len(), d) + swap_latency(m, config.swap_schedule, d);
            (end, latency, survival / raw_per_pair)
        }
        ChainMode::EncodedTeleport | ChainMode::EncodedDirect => {
            let enc = config.encoded.as_ref().expect("validated");
            let mut hops = Vec::with_capacity(m);
            for (i, link) in links.iter().enumerate() {
                let p_c = (1.0 - link.fidelity()).clamp(0.0, 1.0);
                let hop = logical_hop_channel(enc, p_c, config.p_g, i as u64 * enc.trials)?;
                stages.push(StageLog {
                    stage: format!("hop {i}"),
                    fidelity: hop.fidelity(),
                    survival: 1.0,
                    latency: 0.0,
                });
                hops.push(hop);
            }
            let end = fold_links(&hops, config.swap_schedule)?;
            let latency = if config.mode == ChainMode::EncodedTeleport {
                swap_latency(m, config.swap_schedule, d)
            } else {
                0.0
            };
            let per_raw = enc.code.k() as f64 / (enc.code.n() as f64 * raw_per_pair);
            (end, latency, survival * per_raw)
        }
    };
    stages.push(StageLog {
        stage: String::from("end"),
        fidelity: end_state.fidelity(),
        survival,
        latency,
    });
    Ok(ChainReport {
        mode: config.mode,
        num_links: m,
        end_state,
        survival,
        pairs_per_attempt,
        latency,
        stages,
    })
}

/// One stabilizer-simulator run of a physical-mode chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainSample {
    /// Every purification check passed.
    pub success: bool,
    /// End-to-end error label, read by a final Bell measurement (identity
    /// when `success` is false).
    pub label: Pauli,
}

/// Largest `m · 2^R` the circuit sampler accepts.
pub const MAX_SAMPLED_PAIRS: usize = 256;

/// Runs a physical-mode chain on the simulator: `2^R` raw pairs per link
/// with labels drawn from the link state, tree purification, swaps in
/// schedule order with Pauli corrections at the far end, then a Bell
/// measurement of the end-to-end pair.
pub fn sample_chain<R: Rng + ?Sized>(config: &ChainConfig, rng: &mut R) -> Result<ChainSample> {
    config.validate()?;
    if config.mode != ChainMode::Physical {
        return Err(param("the circuit sampler covers the physical mode only"));
    }
    let m = config.num_links();
    let rounds = config.rounds();
    let per_link = 1usize << rounds;
    if m * per_link > MAX_SAMPLED_PAIRS {
        return Err(param(format!("chain too large to sample: {} pairs", m * per_link)));
    }
    let mut s = StabilizerState::new(2 * m * per_link);
    // pair (link, j) occupies qubits (2(link·per_link + j), +1)
    let qubits = |link: usize, j: usize| (2 * (link * per_link + j), 2 * (link * per_link + j) + 1);
    let mut success = true;
    let mut ends = Vec::with_capacity(m);
    for (link, raw) in config.link_states.iter().enumerate() {
        for j in 0..per_link {
            let (a, b) = qubits(link, j);
            s.prepare_bell(a, b)?;
            let label = raw.sample(rng);
            s.apply_pauli_at(&PauliOperator::single(1, 0, label), b)?;
        }
        let mut alive: Vec<usize> = (0..per_link).collect();
        for &basis in &config.purify_schedule {
            let mut next = Vec::with_capacity(alive.len() / 2);
            for pair in alive.chunks(2) {
                let (ok, _) = purify_on_tableau(&mut s, qubits(link, pair[0]), qubits(link, pair[1]), basis, rng)?;
                success &= ok;
                next.push(pair[0]);
            }
            alive = next;
        }
        ends.push(qubits(link, alive[0]));
    }
    if !success {
        return Ok(ChainSample { success, label: Pauli::I });
    }
    let far = ends[m - 1].1;
    for node in swap_order(m, config.swap_schedule) {
        let (xx, zz) = s.bell_measure(ends[node - 1].1, ends[node].0, rng)?;
        if zz {
            s.apply(Gate::X(far))?;
        }
        if xx {
            s.apply(Gate::Z(far))?;
        }
    }
    let read = s.bell_measure(ends[0].0, far, rng)?;
    Ok(ChainSample {
        success,
        label: label_from_outcome(read),
    })
}
