//! Error models, Bell-diagonal pair states and the effective error-rate estimate.

use alloc::format;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Error, Result};
use crate::pauli::{Pauli, PauliOperator};

const SIMPLEX_TOL: f64 = 1e-12;

/// Independent, identically distributed single-qubit Pauli noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseModel {
    None,
    BitFlip(f64),
    PhaseFlip(f64),
    /// `p/3` each on X, Y and Z.
    Depolarizing(f64),
    /// Independent X with `p_x` and Z with `p_z` (Y when both fire).
    IndependentXz(f64, f64),
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(param(format!("{name} = {p} is not a probability")))
    }
}

impl NoiseModel {
    pub fn bit_flip(p: f64) -> Result<Self> {
        check_prob("p", p).map(|_| NoiseModel::BitFlip(p))
    }

    pub fn phase_flip(p: f64) -> Result<Self> {
        check_prob("p", p).map(|_| NoiseModel::PhaseFlip(p))
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        check_prob("p", p).map(|_| NoiseModel::Depolarizing(p))
    }

    pub fn independent_xz(p_x: f64, p_z: f64) -> Result<Self> {
        check_prob("p_x", p_x)?;
        check_prob("p_z", p_z)?;
        Ok(NoiseModel::IndependentXz(p_x, p_z))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::None => Ok(()),
            NoiseModel::BitFlip(p) | NoiseModel::PhaseFlip(p) | NoiseModel::Depolarizing(p) => check_prob("p", p),
            NoiseModel::IndependentXz(a, b) => check_prob("p_x", a).and(check_prob("p_z", b)),
        }
    }

    /// Per-qubit probabilities of `(I, X, Y, Z)`.
    pub fn pauli_distribution(&self) -> [f64; 4] {
        match *self {
            NoiseModel::None => [1.0, 0.0, 0.0, 0.0],
            NoiseModel::BitFlip(p) => [1.0 - p, p, 0.0, 0.0],
            NoiseModel::PhaseFlip(p) => [1.0 - p, 0.0, 0.0, p],
            NoiseModel::Depolarizing(p) => [1.0 - p, p / 3.0, p / 3.0, p / 3.0],
            NoiseModel::IndependentXz(px, pz) => [(1.0 - px) * (1.0 - pz), px * (1.0 - pz), px * pz, (1.0 - px) * pz],
        }
    }

    /// Marginal probability that a qubit carries an X component.
    pub fn x_marginal(&self) -> f64 {
        let d = self.pauli_distribution();
        d[1] + d[2]
    }

    /// Marginal probability that a qubit carries a Z component.
    pub fn z_marginal(&self) -> f64 {
        let d = self.pauli_distribution();
        d[2] + d[3]
    }

    pub fn sample_pauli<R: Rng + ?Sized>(&self, rng: &mut R) -> Pauli {
        match *self {
            NoiseModel::None => Pauli::I,
            NoiseModel::BitFlip(p) => {
                if rng.random::<f64>() < p {
                    Pauli::X
                } else {
                    Pauli::I
                }
            }
            NoiseModel::PhaseFlip(p) => {
                if rng.random::<f64>() < p {
                    Pauli::Z
                } else {
                    Pauli::I
                }
            }
            NoiseModel::Depolarizing(p) => {
                let u = rng.random::<f64>();
                if u >= p {
                    Pauli::I
                } else {
                    // u is uniform on [0, p) here
                    match ((3.0 * u / p) as usize).min(2) {
                        0 => Pauli::X,
                        1 => Pauli::Y,
                        _ => Pauli::Z,
                    }
                }
            }
            NoiseModel::IndependentXz(px, pz) => {
                let x = rng.random::<f64>() < px;
                let z = rng.random::<f64>() < pz;
                Pauli::from_bits(x, z)
            }
        }
    }

    /// Independent per-qubit error on `n` qubits.
    pub fn sample_error<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> PauliOperator {
        let mut e = PauliOperator::identity(n);
        if matches!(self, NoiseModel::None) {
            return e;
        }
        for q in 0..n {
            let p = self.sample_pauli(rng);
            if p != Pauli::I {
                e.set(q, p);
            }
        }
        e
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NoiseModel::None => write!(f, "none"),
            NoiseModel::BitFlip(p) => write!(f, "bit_flip:{p}"),
            NoiseModel::PhaseFlip(p) => write!(f, "phase_flip:{p}"),
            NoiseModel::Depolarizing(p) => write!(f, "depolarizing:{p}"),
            NoiseModel::IndependentXz(a, b) => write!(f, "independent_xz:{a},{b}"),
        }
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    /// Parses `none`, `bit_flip:p`, `phase_flip:p`, `depolarizing:p` and
    /// `independent_xz:px,pz`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let parse = |a: &str| -> Result<f64> {
            a.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad probability {a:?} in noise spec {s:?}: {e}")))
        };
        match kind {
            "none" if args.is_empty() => Ok(NoiseModel::None),
            "bit_flip" => NoiseModel::bit_flip(parse(args)?),
            "phase_flip" => NoiseModel::phase_flip(parse(args)?),
            "depolarizing" => NoiseModel::depolarizing(parse(args)?),
            "independent_xz" => {
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("independent_xz needs two probabilities: {s:?}")))?;
                NoiseModel::independent_xz(parse(a)?, parse(b)?)
            }
            _ => Err(Error::Parse(format!("unknown noise spec {s:?}"))),
        }
    }
}

/// First-order estimate of the data error rate seen by teleportation-based
/// error correction: the communication error plus five gate/measurement
/// fault locations per Bell-measurement outcome (two ancilla preparations,
/// two CNOTs, one measurement), saturated at 1.
pub fn effective_error_rate(p_c: f64, p_g: f64) -> Result<f64> {
    check_prob("p_c", p_c)?;
    check_prob("p_g", p_g)?;
    Ok((p_c + 5.0 * p_g).min(1.0))
}

/// Distribution of the Pauli error label carried by a shared EPR pair,
/// ordered `(I, X, Y, Z)`. The fidelity with the ideal pair is `probs[I]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDiagonalState {
    probs: [f64; 4],
}

impl BellDiagonalState {
    pub const PERFECT: BellDiagonalState = BellDiagonalState {
        probs: [1.0, 0.0, 0.0, 0.0],
    };

    pub fn new(probs: [f64; 4]) -> Result<Self> {
        if probs.iter().any(|&p| !p.is_finite() || p < -SIMPLEX_TOL) {
            return Err(Error::InvalidSimplex(format!("negative or non-finite entry in {probs:?}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidSimplex(format!("entries sum to {sum}")));
        }
        Ok(BellDiagonalState {
            probs: probs.map(|p| p.max(0.0)),
        })
    }

    /// Renormalizes a non-negative weight vector.
    pub fn from_weights(weights: [f64; 4]) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if sum.is_nan() || sum <= 0.0 || weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidSimplex(format!("cannot normalize {weights:?}")));
        }
        Self::new(weights.map(|w| w / sum))
    }

    /// Pair whose label follows a single-qubit noise channel on one half.
    pub fn from_noise(model: &NoiseModel) -> Result<Self> {
        model.validate()?;
        Self::new(model.pauli_distribution())
    }

    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    #[inline]
    pub fn prob(&self, label: Pauli) -> f64 {
        self.probs[label.index()]
    }

    pub fn fidelity(&self) -> f64 {
        self.probs[0]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Pauli {
        let u = rng.random::<f64>();
        let mut acc = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return Pauli::from_index(i);
            }
        }
        // rounding: fall back to the last label with nonzero weight
        (0..4).rev().find(|&i| self.probs[i] > 0.0).map(Pauli::from_index).unwrap_or(Pauli::I)
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &BellDiagonalState) -> f64 {
        self.probs
            .iter()
            .zip(other.probs.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Werner pair of fidelity `f`: `(f, (1-f)/3, (1-f)/3, (1-f)/3)`.
pub fn werner(f: f64) -> Result<BellDiagonalState> {
    check_prob("fidelity", f)?;
    let r = (1.0 - f) / 3.0;
    BellDiagonalState::new([f, r, r, r])
}

/// Deterministic random source for one Monte Carlo stream.
///
/// Each `(master_seed, stream)` pair names an independent ChaCha stream, so a
/// trial keyed by its index replays identically regardless of how trials
/// are spread across workers.
pub fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_sigma(p: f64, n: f64) -> f64 {
        3.0 * (p * (1.0 - p) / n).sqrt()
    }

    #[test]
    fn none_is_identity() {
        let mut rng = stream_rng(1, 0);
        for _ in 0..100 {
            assert!(NoiseModel::None.sample_error(7, &mut rng).is_identity());
        }
    }

    #[test]
    fn forced_depolarizing_is_uniform_over_xyz() {
        let mut rng = stream_rng(2, 0);
        let m = NoiseModel::depolarizing(1.0).unwrap();
        let mut counts = [0usize; 4];
        let draws = 30_000;
        for _ in 0..draws {
            counts[m.sample_pauli(&mut rng).index()] += 1;
        }
        assert_eq!(counts[0], 0);
        for c in &counts[1..] {
            let f = *c as f64 / draws as f64;
            assert!((f - 1.0 / 3.0).abs() <= three_sigma(1.0 / 3.0, draws as f64), "{counts:?}");
        }
    }

    #[test]
    fn bit_flip_mean_weight() {
        let mut rng = stream_rng(3, 0);
        let m = NoiseModel::bit_flip(0.1).unwrap();
        let trials = 400;
        let total: usize = (0..trials).map(|_| m.sample_error(1000, &mut rng).weight()).sum();
        let mean = total as f64 / trials as f64;
        // mean of `trials` binomial(1000, 0.1) draws
        let sigma = (1000.0 * 0.1 * 0.9 / trials as f64).sqrt();
        assert!((mean - 100.0).abs() <= 3.0 * sigma, "mean weight {mean}");
        let single = m.sample_error(1000, &mut stream_rng(3, 1)).weight() as f64;
        assert!((single - 100.0).abs() <= 3.0 * (90.0f64).sqrt());
    }

    #[test]
    fn effective_rate_examples() {
        assert!((effective_error_rate(0.05, 0.001).unwrap() - 0.055).abs() < 1e-15);
        assert_eq!(effective_error_rate(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(effective_error_rate(0.9, 0.1).unwrap(), 1.0);
        assert!(effective_error_rate(-0.1, 0.0).is_err());
        assert!(effective_error_rate(0.1, 1.5).is_err());
    }

    #[test]
    fn effective_rate_is_monotone() {
        let grid: alloc::vec::Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        for &a in &grid {
            for w in grid.windows(2) {
                assert!(effective_error_rate(a, w[0]).unwrap() <= effective_error_rate(a, w[1]).unwrap());
                assert!(effective_error_rate(w[0], a).unwrap() <= effective_error_rate(w[1], a).unwrap());
            }
        }
    }

    #[test]
    fn werner_examples() {
        assert_eq!(werner(1.0).unwrap().probs(), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(werner(0.25).unwrap().probs(), [0.25; 4]);
        let w = werner(0.9).unwrap();
        assert!((w.prob(Pauli::X) - 0.1 / 3.0).abs() < 1e-15);
        for i in 0..=100 {
            let s: f64 = werner(i as f64 / 100.0).unwrap().probs().iter().sum();
            assert!((s - 1.0).abs() <= 1e-12);
        }
        assert!(werner(1.2).is_err());
    }

    #[test]
    fn simplex_rejections() {
        assert!(BellDiagonalState::new([0.5, 0.5, 0.1, 0.0]).is_err());
        assert!(BellDiagonalState::new([1.1, -0.1, 0.0, 0.0]).is_err());
        assert!(BellDiagonalState::new([f64::NAN, 0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn noise_spec_strings() {
        assert_eq!("depolarizing:0.055".parse::<NoiseModel>().unwrap(), NoiseModel::Depolarizing(0.055));
        assert_eq!(
            "independent_xz:0.01,0.02".parse::<NoiseModel>().unwrap(),
            NoiseModel::IndependentXz(0.01, 0.02)
        );
        assert_eq!("none".parse::<NoiseModel>().unwrap(), NoiseModel::None);
        assert!("depolarizing:2".parse::<NoiseModel>().is_err());
        assert!("amplitude_damping:0.1".parse::<NoiseModel>().is_err());
        for m in [NoiseModel::BitFlip(0.25), NoiseModel::IndependentXz(0.5, 0.125), NoiseModel::None] {
            assert_eq!(m.to_string().parse::<NoiseModel>().unwrap(), m);
        }
    }

    #[test]
    fn streams_replay() {
        let m = NoiseModel::depolarizing(0.3).unwrap();
        let a = m.sample_error(50, &mut stream_rng(9, 4));
        let b = m.sample_error(50, &mut stream_rng(9, 4));
        let c = m.sample_error(50, &mut stream_rng(9, 5));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
