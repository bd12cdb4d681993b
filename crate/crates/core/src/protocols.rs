//! Teleportation, superdense coding, entanglement swapping and purification,
//! run on the stabilizer simulator.
//!
//! Bell-measurement outcomes are reported as `(xx, zz)` bit pairs: `xx` is the
//! `X⊗X` parity and `zz` the `Z⊗Z` parity. A Pauli label `P` on one half of a
//! pair flips `xx` iff `P` has a Z component and `zz` iff it has an X
//! component, so the byproduct of a Bell measurement is `X^zz Z^xx`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{param, Error, Result};
use crate::noise::{BellDiagonalState, NoiseModel};
use crate::pauli::{Pauli, PauliOperator};
use crate::stabsim::{inverse_circuit, Gate, StabilizerState};

/// Record of one protocol run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolOutcome {
    /// `(xx, zz)` per Bell measurement, in execution order.
    pub classical_bits: Vec<(bool, bool)>,
    /// Pauli error left on the surviving qubit(s) after all corrections.
    pub residual_frame: PauliOperator,
    /// Post-selection flag; always `true` for protocols without one.
    pub success: bool,
}

/// Teleportation run plus the result of un-preparing the output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeleportOutcome {
    pub outcome: ProtocolOutcome,
    /// `true` when Bob's qubit returned to |0⟩ after the inverse preparation.
    pub verified: bool,
}

/// Pauli label read from a pair's `(xx, zz)` Bell outcome.
#[inline]
pub fn label_from_outcome((xx, zz): (bool, bool)) -> Pauli {
    Pauli::from_bits(zz, xx)
}

/// Byproduct of the Bell measurement on `(a, b)` caused by the Pauli
/// `error` present just before it, as `(Δxx, Δzz)`, together with the error
/// after it has been pushed through the measurement circuit.
fn outcome_flips(error: &PauliOperator, a: usize, b: usize) -> ((bool, bool), PauliOperator) {
    let mut e = error.clone();
    Gate::Cnot(a, b).propagate(&mut e);
    Gate::H(a).propagate(&mut e);
    ((e.get(a).bits().0, e.get(b).bits().0), e)
}

fn check_single_qubit_prep(prep: &[Gate]) -> Result<()> {
    if prep.iter().all(|g| matches!(g, Gate::H(0) | Gate::X(0) | Gate::Y(0) | Gate::Z(0))) {
        Ok(())
    } else {
        Err(param("payload preparation must be single-qubit gates on qubit 0"))
    }
}

/// Teleports a payload through one EPR pair.
///
/// Qubit 0 is the payload (prepared by `input_prep` from |0⟩), qubits 1 and 2
/// are Alice's and Bob's halves. `epr_noise` is sampled independently on both
/// halves before Alice's Bell measurement on `(0, 1)`; Bob applies
/// `X^zz Z^xx`, then `input_prep` is undone on his qubit and measured.
pub fn teleport<R: Rng + ?Sized>(input_prep: &[Gate], epr_noise: &NoiseModel, rng: &mut R) -> Result<TeleportOutcome> {
    check_single_qubit_prep(input_prep)?;
    let epr_error = epr_noise.sample_error(2, rng);
    teleport_with_error(input_prep, &epr_error, rng)
}

/// [`teleport`] with an explicit two-qubit error on (Alice's half, Bob's half).
pub fn teleport_with_error<R: Rng + ?Sized>(input_prep: &[Gate], epr_error: &PauliOperator, rng: &mut R) -> Result<TeleportOutcome> {
    check_single_qubit_prep(input_prep)?;
    if epr_error.num_qubits() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: epr_error.num_qubits(),
        });
    }
    let mut s = StabilizerState::new(3);
    s.apply_all(input_prep)?;
    s.prepare_bell(1, 2)?;
    s.apply_pauli_at(epr_error, 1)?;
    let (xx, zz) = s.bell_measure(0, 1, rng)?;
    if zz {
        s.apply(Gate::X(2))?;
    }
    if xx {
        s.apply(Gate::Z(2))?;
    }
    let unprep: Vec<Gate> = inverse_circuit(input_prep).iter().map(|g| g.shifted(2)).collect();
    s.apply_all(&unprep)?;
    let verified = !s.measure_z(2, rng)?;

    let full = PauliOperator::identity(1).tensor(epr_error);
    let ((dxx, dzz), pushed) = outcome_flips(&full, 0, 1);
    let residual = Pauli::from_bits(dzz, dxx).mul(pushed.get(2));
    Ok(TeleportOutcome {
        outcome: ProtocolOutcome {
            classical_bits: vec![(xx, zz)],
            residual_frame: PauliOperator::single(1, 0, residual),
            success: true,
        },
        verified,
    })
}

/// Sends two classical bits over one shared pair.
///
/// Alice applies `Z^a X^b` to her half (qubit 0), the half then crosses a
/// channel with `channel_noise`, and Bob's Bell measurement returns
/// `(a', b') = (xx, zz)`.
pub fn superdense<R: Rng + ?Sized>(bits: (bool, bool), channel_noise: &NoiseModel, rng: &mut R) -> Result<((bool, bool), ProtocolOutcome)> {
    let channel_error = channel_noise.sample_error(1, rng);
    superdense_with_error(bits, &channel_error, rng)
}

pub fn superdense_with_error<R: Rng + ?Sized>(
    (a, b): (bool, bool),
    channel_error: &PauliOperator,
    rng: &mut R,
) -> Result<((bool, bool), ProtocolOutcome)> {
    if channel_error.num_qubits() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            found: channel_error.num_qubits(),
        });
    }
    let mut s = StabilizerState::new(2);
    s.prepare_bell(0, 1)?;
    if a {
        s.apply(Gate::Z(0))?;
    }
    if b {
        s.apply(Gate::X(0))?;
    }
    s.apply_pauli_at(channel_error, 0)?;
    let decoded = s.bell_measure(0, 1, rng)?;
    Ok((
        decoded,
        ProtocolOutcome {
            classical_bits: vec![decoded],
            residual_frame: channel_error.clone(),
            success: true,
        },
    ))
}

/// Entanglement swapping along `num_links` noisy links.
///
/// Link `i` is the pair on qubits `(2i, 2i+1)`; `link_noise` hits the
/// transmitted half `2i+1`. Intermediate nodes Bell-measure
/// `(2i-1, 2i)` and forward `X^zz Z^xx` to Bob's qubit `2m-1`. A final Bell
/// measurement of `(0, 2m-1)` reads the end-to-end error label, which is
/// returned as `residual_frame`.
pub fn swap_chain<R: Rng + ?Sized>(num_links: usize, link_noise: &NoiseModel, rng: &mut R) -> Result<ProtocolOutcome> {
    if num_links == 0 {
        return Err(param("swap chain needs at least one link"));
    }
    let errors: Vec<PauliOperator> = (0..num_links)
        .map(|_| PauliOperator::identity(1).tensor(&link_noise.sample_error(1, rng)))
        .collect();
    swap_chain_with_errors(&errors, rng)
}

/// [`swap_chain`] with explicit two-qubit errors per link.
pub fn swap_chain_with_errors<R: Rng + ?Sized>(link_errors: &[PauliOperator], rng: &mut R) -> Result<ProtocolOutcome> {
    let m = link_errors.len();
    if m == 0 {
        return Err(param("swap chain needs at least one link"));
    }
    let mut s = StabilizerState::new(2 * m);
    for (i, e) in link_errors.iter().enumerate() {
        if e.num_qubits() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: e.num_qubits(),
            });
        }
        s.prepare_bell(2 * i, 2 * i + 1)?;
        s.apply_pauli_at(e, 2 * i)?;
    }
    let bob = 2 * m - 1;
    let mut bits = Vec::with_capacity(m);
    for j in 1..m {
        let (xx, zz) = s.bell_measure(2 * j - 1, 2 * j, rng)?;
        if zz {
            s.apply(Gate::X(bob))?;
        }
        if xx {
            s.apply(Gate::Z(bob))?;
        }
        bits.push((xx, zz));
    }
    let verify = s.bell_measure(0, bob, rng)?;
    bits.push(verify);
    Ok(ProtocolOutcome {
        classical_bits: bits,
        residual_frame: PauliOperator::single(1, 0, label_from_outcome(verify)),
        success: true,
    })
}

/// Which parity a purification round compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PurifyBasis {
    /// Compares `Z⊗Z` parities; detects X and Y labels.
    BitFlip,
    /// Compares `X⊗X` parities; detects Z and Y labels.
    PhaseFlip,
}

/// `rounds` purification rounds alternating bit-flip and phase-flip checks,
/// starting with bit flips.
pub fn alternating_schedule(rounds: usize) -> Vec<PurifyBasis> {
    (0..rounds)
        .map(|r| if r % 2 == 0 { PurifyBasis::BitFlip } else { PurifyBasis::PhaseFlip })
        .collect()
}

/// One recurrence round on Bell-diagonal inputs.
///
/// Both parties apply a CNOT from their half of pair `a` to their half of
/// pair `b`, measure pair `b` (Z basis for bit-flip rounds, X basis for
/// phase-flip rounds) and keep `a` iff the two results agree. Returns the
/// success probability and the post-selected state of `a`.
pub fn purify_pair_dist(a: &BellDiagonalState, b: &BellDiagonalState, basis: PurifyBasis) -> Result<(f64, BellDiagonalState)> {
    // Re-validate: the fields are private but values may come from arithmetic.
    let a = BellDiagonalState::new(a.probs())?;
    let b = BellDiagonalState::new(b.probs())?;
    let mut kept = [0.0f64; 4];
    for la in Pauli::ALL {
        for lb in Pauli::ALL {
            let w = a.prob(la) * b.prob(lb);
            if w == 0.0 {
                continue;
            }
            if let Some(out) = purify_labels(la, lb, basis) {
                kept[out.index()] += w;
            }
        }
    }
    let success: f64 = kept.iter().sum();
    if success <= 0.0 {
        return Err(param("purification round can never succeed for these inputs"));
    }
    Ok((success, BellDiagonalState::new(kept.map(|w| w / success))?))
}

/// Label map of one round: `Some(output label of a)` when the parity check
/// passes, `None` when the pair is discarded.
#[inline]
pub fn purify_labels(la: Pauli, lb: Pauli, basis: PurifyBasis) -> Option<Pauli> {
    let (xa, za) = la.bits();
    let (xb, zb) = lb.bits();
    match basis {
        // bilateral CNOT: x_b ^= x_a, z_a ^= z_b
        PurifyBasis::BitFlip => (xa == xb).then(|| Pauli::from_bits(xa, za ^ zb)),
        // the same round conjugated by H on every qubit
        PurifyBasis::PhaseFlip => (za == zb).then(|| Pauli::from_bits(xa ^ xb, za)),
    }
}

/// Runs one purification round on an existing tableau. `pair_a` and
/// `pair_b` are `(alice, bob)` qubit indices. Pair `b` is measured out; the
/// returned bits are Alice's and Bob's results on it.
pub fn purify_on_tableau<R: Rng + ?Sized>(
    state: &mut StabilizerState,
    pair_a: (usize, usize),
    pair_b: (usize, usize),
    basis: PurifyBasis,
    rng: &mut R,
) -> Result<(bool, (bool, bool))> {
    let all = [pair_a.0, pair_a.1, pair_b.0, pair_b.1];
    if basis == PurifyBasis::PhaseFlip {
        for &q in &all {
            state.apply(Gate::H(q))?;
        }
    }
    state.apply(Gate::Cnot(pair_a.0, pair_b.0))?;
    state.apply(Gate::Cnot(pair_a.1, pair_b.1))?;
    let ma = state.measure_z(pair_b.0, rng)?;
    let mb = state.measure_z(pair_b.1, rng)?;
    if basis == PurifyBasis::PhaseFlip {
        state.apply(Gate::H(pair_a.0))?;
        state.apply(Gate::H(pair_a.1))?;
    }
    Ok((ma == mb, (ma, mb)))
}

/// Monte Carlo twin of [`purify_pair_dist`] executed on the tableau.
///
/// Labels for both pairs are drawn from `a` and `b` and placed on Bob's
/// halves. On success `residual_frame` is the label of the kept pair, read by
/// a final Bell measurement; on failure it is the identity.
pub fn purify_pair_sampled<R: Rng + ?Sized>(
    a: &BellDiagonalState,
    b: &BellDiagonalState,
    basis: PurifyBasis,
    rng: &mut R,
) -> Result<ProtocolOutcome> {
    let la = a.sample(rng);
    let lb = b.sample(rng);
    purify_labels_on_tableau(la, lb, basis, rng)
}

/// One tableau purification round with fixed input labels.
pub fn purify_labels_on_tableau<R: Rng + ?Sized>(la: Pauli, lb: Pauli, basis: PurifyBasis, rng: &mut R) -> Result<ProtocolOutcome> {
    let mut s = StabilizerState::new(4);
    s.prepare_bell(0, 1)?;
    s.prepare_bell(2, 3)?;
    s.apply_pauli_at(&PauliOperator::single(1, 0, la), 1)?;
    s.apply_pauli_at(&PauliOperator::single(1, 0, lb), 3)?;
    let (success, bits) = purify_on_tableau(&mut s, (0, 1), (2, 3), basis, rng)?;
    let mut classical_bits = vec![bits];
    let residual = if success {
        let read = s.bell_measure(0, 1, rng)?;
        classical_bits.push(read);
        label_from_outcome(read)
    } else {
        Pauli::I
    };
    Ok(ProtocolOutcome {
        classical_bits,
        residual_frame: PauliOperator::single(1, 0, residual),
        success,
    })
}
