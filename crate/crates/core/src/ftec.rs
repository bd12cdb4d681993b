//! Teleportation-based (Knill) error correction.
//!
//! A data block `D` is teleported through an encoded Bell pair on blocks
//! `A` and `B`. The transversal Bell measurement of `D` and `A` yields two
//! bit strings: `u`, the X-basis outcomes of `D` (after the Hadamards), and
//! `v`, the Z-basis outcomes of `A`. From them
//!
//! ```text
//! s_x = h_x · u    s_z = h_z · v    logical_xx = logical_x · u    logical_zz = logical_z · v
//! ```
//!
//! A single decode of `(s_x, s_z)` gives a correction `c`; Bob then applies
//! only the logical frame `X̄^(logical_zz ⊕ logical_z·c_x) Z̄^(logical_xx ⊕ logical_x·c_z)`
//! to `B`. The data error never reaches `B`: it only shifts the outcomes.
//!
//! Two engines produce outcome blocks. [`encoded_bell_measure`] runs the full
//! circuit on the stabilizer simulator (`3n` qubits); [`KnillSampler`]
//! samples the same outcome distribution directly from the code's kernels
//! and is what the Monte Carlo paths use.

use alloc::vec::Vec;

use rand::Rng;

use crate::codes::{CssCode, LogicalClass};
use crate::decoders::{DecodeResult, Decoder};
use crate::error::{check_len, Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::noise::{effective_error_rate, NoiseModel};
use crate::pauli::PauliOperator;
use crate::stabsim::{Gate, StabilizerState};

/// Time units per round: ancilla preparation, two CNOT steps, one measurement.
pub const CYCLE_T_UNITS: u32 = 4;

/// Physical qubits per block: data, plus both halves of the encoded pair.
pub const QUBITS_PER_BLOCK: usize = 3;

/// Transversal Bell-measurement outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellOutcomeBlock {
    /// X-basis outcomes of the data block.
    pub u: BitVec,
    /// Z-basis outcomes of the ancilla block.
    pub v: BitVec,
}

/// Syndromes and logical frame read from one outcome block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extracted {
    pub s_x_checks: BitVec,
    pub s_z_checks: BitVec,
    pub logical_xx: BitVec,
    pub logical_zz: BitVec,
}

impl Extracted {
    pub fn syndrome(&self) -> crate::codes::Syndrome {
        crate::codes::Syndrome {
            x_checks: self.s_x_checks.clone(),
            z_checks: self.s_z_checks.clone(),
        }
    }
}

pub fn extract(outcomes: &BellOutcomeBlock, code: &CssCode) -> Result<Extracted> {
    check_len(code.n(), outcomes.u.len())?;
    check_len(code.n(), outcomes.v.len())?;
    Ok(Extracted {
        s_x_checks: code.h_x().mul_vec(&outcomes.u)?,
        s_z_checks: code.h_z().mul_vec(&outcomes.v)?,
        logical_xx: code.logical_x().mul_vec(&outcomes.u)?,
        logical_zz: code.logical_z().mul_vec(&outcomes.v)?,
    })
}

/// Flips outcome bits: the Z part of `flips` hits `u`, the X part hits `v`.
/// A flipped `u_i` is thus indistinguishable from a phase flip on data qubit
/// `i`, and a flipped `v_i` from a bit flip.
pub fn apply_measurement_flips(outcomes: &mut BellOutcomeBlock, flips: &PauliOperator) -> Result<()> {
    check_len(outcomes.u.len(), flips.num_qubits())?;
    outcomes.u.xor_assign(flips.z_bits());
    outcomes.v.xor_assign(flips.x_bits());
    Ok(())
}

/// Noise of one round besides the data error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KnillNoise {
    /// Per-qubit noise on the `2n` qubits of the encoded pair.
    pub epr: NoiseModel,
    /// Per-position outcome flips, see [`apply_measurement_flips`].
    pub meas_flip: NoiseModel,
}

impl KnillNoise {
    pub const NONE: KnillNoise = KnillNoise {
        epr: NoiseModel::None,
        meas_flip: NoiseModel::None,
    };
}

/// Result of one round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnillReport {
    pub s_x_checks: BitVec,
    pub s_z_checks: BitVec,
    pub logical_xx: BitVec,
    pub logical_zz: BitVec,
    /// `None` when the decoder gave up; the round then counts as a failure.
    pub decode: Option<DecodeResult>,
    /// Logical frame Bob applies: `X̄^frame_x Z̄^frame_z`.
    pub frame_x: BitVec,
    pub frame_z: BitVec,
    /// Logical action of the uncorrected part of the error.
    pub residual_class: LogicalClass,
    pub logical_failure: bool,
    /// Physical error left on the output block (the `B` half of the pair error).
    pub output_error: PauliOperator,
    pub measurement_rounds: usize,
    pub cost_t_units: u32,
}

/// Error seen by the Bell measurement: data error times the `A` half of the
/// pair error times the outcome flips, as one n-qubit Pauli.
fn effective_error(data_error: &PauliOperator, epr_error: &PauliOperator, flips: &PauliOperator) -> PauliOperator {
    let n = data_error.num_qubits();
    let mut e = data_error.clone();
    e.mul_assign(&epr_error.slice(0, n));
    e.mul_assign(flips);
    e
}

fn build_report(
    code: &CssCode,
    decoder: &dyn Decoder,
    ext: Extracted,
    effective: &PauliOperator,
    output_error: PauliOperator,
) -> Result<KnillReport> {
    let k = code.k();
    let decode = match decoder.decode(&ext.syndrome()) {
        Ok(r) => Some(r),
        Err(Error::Undecodable(_)) => None,
        Err(e) => return Err(e),
    };
    let (frame_x, frame_z, residual_class, logical_failure) = match &decode {
        Some(r) => {
            let c = &r.correction;
            let fx = ext.logical_zz.xor(&code.logical_z().mul_vec(c.x_bits())?);
            let fz = ext.logical_xx.xor(&code.logical_x().mul_vec(c.z_bits())?);
            let class = code.logical_class(&effective.multiply(c)?)?;
            let failed = !r.converged || !class.is_trivial();
            (fx, fz, class, failed)
        }
        None => {
            let class = code.logical_class(effective)?;
            (ext.logical_zz.clone(), ext.logical_xx.clone(), class, true)
        }
    };
    debug_assert_eq!(frame_x.len(), k);
    Ok(KnillReport {
        s_x_checks: ext.s_x_checks,
        s_z_checks: ext.s_z_checks,
        logical_xx: ext.logical_xx,
        logical_zz: ext.logical_zz,
        decode,
        frame_x,
        frame_z,
        residual_class,
        logical_failure,
        output_error,
        measurement_rounds: 1,
        cost_t_units: CYCLE_T_UNITS,
    })
}

fn check_errors(code: &CssCode, data_error: &PauliOperator, epr_error: &PauliOperator) -> Result<()> {
    check_len(code.n(), data_error.num_qubits())?;
    check_len(2 * code.n(), epr_error.num_qubits())
}

/// Outcome sampler that skips the circuit: `u` is uniform over `ker h_x`
/// and `v` over `ker h_z`, shifted by the effective error.
#[derive(Clone, Debug)]
pub struct KnillSampler {
    code: CssCode,
    ker_x: BitMatrix,
    ker_z: BitMatrix,
}

fn random_combination<R: Rng + ?Sized>(basis: &BitMatrix, rng: &mut R) -> BitVec {
    let mut out = BitVec::zeros(basis.num_cols());
    for row in basis.rows() {
        if rng.random::<bool>() {
            out.xor_assign(row);
        }
    }
    out
}

impl KnillSampler {
    pub fn new(code: &CssCode) -> Self {
        KnillSampler {
            code: code.clone(),
            ker_x: code.h_x().kernel(),
            ker_z: code.h_z().kernel(),
        }
    }

    pub fn code(&self) -> &CssCode {
        &self.code
    }

    /// Outcomes for explicit errors; `flips` as in [`apply_measurement_flips`].
    pub fn outcomes<R: Rng + ?Sized>(
        &self,
        data_error: &PauliOperator,
        epr_error: &PauliOperator,
        flips: &PauliOperator,
        rng: &mut R,
    ) -> Result<BellOutcomeBlock> {
        check_errors(&self.code, data_error, epr_error)?;
        check_len(self.code.n(), flips.num_qubits())?;
        let e = effective_error(data_error, epr_error, &PauliOperator::identity(self.code.n()));
        let mut u = random_combination(&self.ker_x, rng);
        let mut v = random_combination(&self.ker_z, rng);
        u.xor_assign(e.z_bits());
        v.xor_assign(e.x_bits());
        let mut out = BellOutcomeBlock { u, v };
        apply_measurement_flips(&mut out, flips)?;
        Ok(out)
    }

    /// One round with sampled pair noise and outcome flips.
    pub fn round<R: Rng + ?Sized>(
        &self,
        decoder: &dyn Decoder,
        data_error: &PauliOperator,
        noise: &KnillNoise,
        rng: &mut R,
    ) -> Result<KnillReport> {
        let n = self.code.n();
        let epr_error = noise.epr.sample_error(2 * n, rng);
        let flips = noise.meas_flip.sample_error(n, rng);
        self.round_with(decoder, data_error, &epr_error, &flips, rng)
    }

    /// One round with every error given explicitly.
    pub fn round_with<R: Rng + ?Sized>(
        &self,
        decoder: &dyn Decoder,
        data_error: &PauliOperator,
        epr_error: &PauliOperator,
        flips: &PauliOperator,
        rng: &mut R,
    ) -> Result<KnillReport> {
        let outcomes = self.outcomes(data_error, epr_error, flips, rng)?;
        let ext = extract(&outcomes, &self.code)?;
        let n = self.code.n();
        let effective = effective_error(data_error, epr_error, flips);
        build_report(&self.code, decoder, ext, &effective, epr_error.slice(n, n))
    }
}

/// One Knill round on `code` (builds a [`KnillSampler`] each call).
pub fn knill_ec_round<R: Rng + ?Sized>(
    code: &CssCode,
    decoder: &dyn Decoder,
    data_error: &PauliOperator,
    noise: &KnillNoise,
    rng: &mut R,
) -> Result<KnillReport> {
    KnillSampler::new(code).round(decoder, data_error, noise, rng)
}

/// Monte Carlo trial: data error drawn from depolarizing noise at
/// `effective_error_rate(p_c, p_g)`, then one round.
pub fn knill_trial<R: Rng + ?Sized>(
    sampler: &KnillSampler,
    decoder: &dyn Decoder,
    p_c: f64,
    p_g: f64,
    meas_flip_p: f64,
    rng: &mut R,
) -> Result<KnillReport> {
    let p_eff = effective_error_rate(p_c, p_g)?;
    let data = NoiseModel::depolarizing(p_eff)?.sample_error(sampler.code().n(), rng);
    let noise = KnillNoise {
        epr: NoiseModel::None,
        meas_flip: NoiseModel::independent_xz(meas_flip_p, meas_flip_p)?,
    };
    sampler.round(decoder, &data, &noise, rng)
}

/// Basis of the logical input state on the data block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogicalBasis {
    /// `|0̄…0̄⟩`, checked through `Z̄` eigenvalues.
    Zero,
    /// `|+̄…+̄⟩`, checked through `X̄` eigenvalues.
    Plus,
}

/// Logical input: a basis state twirled by `X̄^x_flips Z̄^z_flips`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalInput {
    pub basis: LogicalBasis,
    pub x_flips: BitVec,
    pub z_flips: BitVec,
}

impl LogicalInput {
    pub fn zero(k: usize) -> Self {
        LogicalInput {
            basis: LogicalBasis::Zero,
            x_flips: BitVec::zeros(k),
            z_flips: BitVec::zeros(k),
        }
    }

    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let basis = if rng.random::<bool>() { LogicalBasis::Plus } else { LogicalBasis::Zero };
        let bools = |rng: &mut R| BitVec::from_bools(&(0..k).map(|_| rng.random::<bool>()).collect::<Vec<_>>());
        let x_flips = bools(rng);
        let z_flips = bools(rng);
        LogicalInput { basis, x_flips, z_flips }
    }

    /// Expected `(-1)` bits of the checked logical observables.
    fn expected(&self) -> &BitVec {
        match self.basis {
            LogicalBasis::Zero => &self.x_flips,
            LogicalBasis::Plus => &self.z_flips,
        }
    }
}

/// Full-circuit run: tableau state after the Bell measurement, plus outcomes.
pub struct TableauRound {
    pub state: StabilizerState,
    pub input: LogicalInput,
    pub outcomes: BellOutcomeBlock,
}

fn x_type(n: usize, support: &BitVec) -> PauliOperator {
    PauliOperator::x_on(n, support)
}

fn z_type(n: usize, support: &BitVec) -> PauliOperator {
    PauliOperator::z_on(n, support)
}

/// Measures each row of `h` (as an X-type check if `x_checks`, else Z-type)
/// on the block at `offset` and returns the outcome bits.
fn measure_checks<R: Rng + ?Sized>(s: &mut StabilizerState, h: &BitMatrix, x_checks: bool, offset: usize, rng: &mut R) -> Result<BitVec> {
    let n = h.num_cols();
    let mut out = BitVec::zeros(h.num_rows());
    for (i, row) in h.rows().iter().enumerate() {
        let p = if x_checks { x_type(n, row) } else { z_type(n, row) };
        out.set(i, s.measure_pauli_at(&p, offset, rng)?);
    }
    Ok(out)
}

/// Pauli of type `fix_x` (X-type if true) on the support solving `h · w = s`.
fn sign_fix(h: &BitMatrix, s: &BitVec, fix_x: bool) -> Result<PauliOperator> {
    let w = h
        .solve(s)?
        .ok_or_else(|| Error::Structural("inconsistent check outcomes".into()))?;
    let n = h.num_cols();
    Ok(if fix_x { x_type(n, &w) } else { z_type(n, &w) })
}

/// Prepares `input` on the block at `offset`, which must be in `|0…0⟩`.
fn prepare_block<R: Rng + ?Sized>(s: &mut StabilizerState, code: &CssCode, input: &LogicalInput, offset: usize, rng: &mut R) -> Result<()> {
    let n = code.n();
    match input.basis {
        LogicalBasis::Zero => {
            let out = measure_checks(s, code.h_x(), true, offset, rng)?;
            s.apply_pauli_at(&sign_fix(code.h_x(), &out, false)?, offset)?;
        }
        LogicalBasis::Plus => {
            for q in 0..n {
                s.apply(Gate::H(offset + q))?;
            }
            let out = measure_checks(s, code.h_z(), false, offset, rng)?;
            s.apply_pauli_at(&sign_fix(code.h_z(), &out, true)?, offset)?;
        }
    }
    for i in 0..code.k() {
        if input.x_flips.get(i) {
            s.apply_pauli_at(&code.logical_x_op(i), offset)?;
        }
        if input.z_flips.get(i) {
            s.apply_pauli_at(&code.logical_z_op(i), offset)?;
        }
    }
    Ok(())
}

/// Encoded Bell pair on blocks at `a` and `b`: physical pairs, then the
/// checks of block `a` are measured and their signs fixed on both blocks.
fn prepare_encoded_pair<R: Rng + ?Sized>(s: &mut StabilizerState, code: &CssCode, a: usize, b: usize, rng: &mut R) -> Result<()> {
    for q in 0..code.n() {
        s.prepare_bell(a + q, b + q)?;
    }
    let out = measure_checks(s, code.h_x(), true, a, rng)?;
    let fix = sign_fix(code.h_x(), &out, false)?;
    s.apply_pauli_at(&fix, a)?;
    s.apply_pauli_at(&fix, b)?;
    let out = measure_checks(s, code.h_z(), false, a, rng)?;
    let fix = sign_fix(code.h_z(), &out, true)?;
    s.apply_pauli_at(&fix, a)?;
    s.apply_pauli_at(&fix, b)?;
    Ok(())
}

/// Runs the Knill circuit on the simulator with a chosen logical input.
///
/// Qubits `[0, n)` hold the data block, `[n, 2n)` and `[2n, 3n)` the
/// encoded pair. `epr_error` spans `[n, 3n)`.
pub fn run_tableau_round<R: Rng + ?Sized>(
    code: &CssCode,
    input: LogicalInput,
    data_error: &PauliOperator,
    epr_error: &PauliOperator,
    flips: &PauliOperator,
    rng: &mut R,
) -> Result<TableauRound> {
    check_errors(code, data_error, epr_error)?;
    check_len(code.n(), flips.num_qubits())?;
    check_len(code.k(), input.x_flips.len())?;
    check_len(code.k(), input.z_flips.len())?;
    let n = code.n();
    let mut s = StabilizerState::new(3 * n);
    prepare_block(&mut s, code, &input, 0, rng)?;
    prepare_encoded_pair(&mut s, code, n, 2 * n, rng)?;
    s.apply_pauli_at(data_error, 0)?;
    s.apply_pauli_at(epr_error, n)?;
    let mut u = BitVec::zeros(n);
    let mut v = BitVec::zeros(n);
    for q in 0..n {
        s.apply(Gate::Cnot(q, n + q))?;
        s.apply(Gate::H(q))?;
    }
    for q in 0..n {
        u.set(q, s.measure_z(q, rng)?);
        v.set(q, s.measure_z(n + q, rng)?);
    }
    let mut outcomes = BellOutcomeBlock { u, v };
    apply_measurement_flips(&mut outcomes, flips)?;
    Ok(TableauRound {
        state: s,
        input,
        outcomes,
    })
}

/// Circuit-level encoded Bell measurement with a random twirled logical input.
pub fn encoded_bell_measure<R: Rng + ?Sized>(
    code: &CssCode,
    data_error: &PauliOperator,
    epr_error: &PauliOperator,
    meas_flip: &NoiseModel,
    rng: &mut R,
) -> Result<BellOutcomeBlock> {
    check_errors(code, data_error, epr_error)?;
    let input = LogicalInput::random(code.k(), rng);
    let flips = meas_flip.sample_error(code.n(), rng);
    Ok(run_tableau_round(code, input, data_error, epr_error, &flips, rng)?.outcomes)
}

impl TableauRound {
    /// Applies the logical frame to the output block and checks every logical
    /// observable of the input basis against its expected sign.
    pub fn verify(&mut self, code: &CssCode, frame_x: &BitVec, frame_z: &BitVec) -> Result<bool> {
        let n = code.n();
        let out = 2 * n;
        for i in 0..code.k() {
            if frame_x.get(i) {
                self.state.apply_pauli_at(&code.logical_x_op(i), out)?;
            }
            if frame_z.get(i) {
                self.state.apply_pauli_at(&code.logical_z_op(i), out)?;
            }
        }
        let expected = self.input.expected().clone();
        for i in 0..code.k() {
            let obs = match self.input.basis {
                LogicalBasis::Zero => code.logical_z_op(i),
                LogicalBasis::Plus => code.logical_x_op(i),
            };
            if self.state.peek_pauli_at(&obs, out)? != Some(expected.get(i)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Circuit-level round: outcomes from the simulator, decode, logical frame,
/// then verification of the output block. Returns the report and whether
/// the output carried the input logical state.
pub fn knill_ec_round_tableau<R: Rng + ?Sized>(
    code: &CssCode,
    decoder: &dyn Decoder,
    input: LogicalInput,
    data_error: &PauliOperator,
    epr_error: &PauliOperator,
    flips: &PauliOperator,
    rng: &mut R,
) -> Result<(KnillReport, bool)> {
    let mut run = run_tableau_round(code, input, data_error, epr_error, flips, rng)?;
    let ext = extract(&run.outcomes, code)?;
    let n = code.n();
    let effective = effective_error(data_error, epr_error, flips);
    let report = build_report(code, decoder, ext, &effective, epr_error.slice(n, n))?;
    let verified = run.verify(code, &report.frame_x, &report.frame_z)?;
    Ok((report, verified))
}
