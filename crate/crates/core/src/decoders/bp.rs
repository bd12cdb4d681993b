use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{DecodeResult, Decoder};
use crate::codes::{CssCode, Syndrome};
use crate::error::{check_len, param, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::PauliOperator;

pub const DEFAULT_MAX_ITERS: usize = 50;

const LLR_CLAMP: f64 = 40.0;
const TANH_CLAMP: f64 = 1.0 - 1e-15;

/// Sum-product decoding of one binary syndrome problem `h · e = s`.
#[derive(Clone, Debug)]
struct Tanner {
    n: usize,
    /// Variable indices per check, ascending.
    checks: Vec<Vec<usize>>,
}

struct Outcome {
    bits: BitVec,
    converged: bool,
    iterations: usize,
}

impl Tanner {
    fn new(h: &BitMatrix) -> Self {
        Tanner {
            n: h.num_cols(),
            checks: h.rows().iter().map(|r| r.iter_ones().collect()).collect(),
        }
    }

    fn satisfies(&self, bits: &BitVec, syndrome: &BitVec) -> bool {
        self.checks
            .iter()
            .enumerate()
            .all(|(c, vars)| vars.iter().filter(|&&v| bits.get(v)).count() % 2 == syndrome.get(c) as usize)
    }

    /// Layered schedule: checks are visited in index order and each check
    /// update is folded into the variable posteriors immediately.
    fn decode(&self, syndrome: &BitVec, prior_llr: f64, max_iters: usize) -> Outcome {
        let mut bits = BitVec::zeros(self.n);
        if self.satisfies(&bits, syndrome) {
            return Outcome {
                bits,
                converged: true,
                iterations: 0,
            };
        }
        let mut posterior = vec![prior_llr; self.n];
        let mut msgs: Vec<Vec<f64>> = self.checks.iter().map(|vars| vec![0.0; vars.len()]).collect();
        let mut incoming = Vec::new();
        let mut suffix = Vec::new();
        for iter in 1..=max_iters {
            for (c, vars) in self.checks.iter().enumerate() {
                let deg = vars.len();
                if deg == 0 {
                    continue;
                }
                incoming.clear();
                for (k, &v) in vars.iter().enumerate() {
                    let q = posterior[v] - msgs[c][k];
                    incoming.push(q);
                }
                let sign = if syndrome.get(c) { -1.0 } else { 1.0 };
                // products of tanh(q/2) excluding each position
                suffix.clear();
                suffix.resize(deg + 1, 1.0);
                for k in (0..deg).rev() {
                    suffix[k] = suffix[k + 1] * libm::tanh(incoming[k] / 2.0);
                }
                let mut prefix = 1.0;
                for k in 0..deg {
                    let t = (sign * prefix * suffix[k + 1]).clamp(-TANH_CLAMP, TANH_CLAMP);
                    let r = (2.0 * libm::atanh(t)).clamp(-LLR_CLAMP, LLR_CLAMP);
                    msgs[c][k] = r;
                    posterior[vars[k]] = incoming[k] + r;
                    prefix *= libm::tanh(incoming[k] / 2.0);
                }
            }
            for (v, &l) in posterior.iter().enumerate() {
                bits.set(v, l < 0.0);
            }
            if self.satisfies(&bits, syndrome) {
                return Outcome {
                    bits,
                    converged: true,
                    iterations: iter,
                };
            }
        }
        Outcome {
            bits,
            converged: false,
            iterations: max_iters,
        }
    }
}

/// Belief-propagation decoder for sparse CSS codes.
///
/// Bit flips are decoded on the Tanner graph of `h_z` and phase flips on that
/// of `h_x`, each with the same channel prior `p`; Y correlations are
/// ignored. No damping is applied.
#[derive(Clone, Debug)]
pub struct BpDecoder {
    code: CssCode,
    x_side: Tanner,
    z_side: Tanner,
    p: f64,
    max_iters: usize,
}

impl BpDecoder {
    pub fn new(code: &CssCode, p: f64, max_iters: usize) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(param(format!("BP prior p = {p} must lie in (0, 0.5)")));
        }
        if max_iters == 0 {
            return Err(param("max_iters must be positive"));
        }
        Ok(BpDecoder {
            code: code.clone(),
            x_side: Tanner::new(code.h_z()),
            z_side: Tanner::new(code.h_x()),
            p,
            max_iters,
        })
    }

    pub fn prior(&self) -> f64 {
        self.p
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters
    }
}

impl Decoder for BpDecoder {
    fn code(&self) -> &CssCode {
        &self.code
    }

    fn decode(&self, syndrome: &Syndrome) -> Result<DecodeResult> {
        check_len(self.code.h_z().num_rows(), syndrome.z_checks.len())?;
        check_len(self.code.h_x().num_rows(), syndrome.x_checks.len())?;
        let llr = libm::log((1.0 - self.p) / self.p);
        let x = self.x_side.decode(&syndrome.z_checks, llr, self.max_iters);
        let z = self.z_side.decode(&syndrome.x_checks, llr, self.max_iters);
        Ok(DecodeResult {
            correction: PauliOperator::from_bits(x.bits, z.bits)?,
            converged: x.converged && z.converged,
            iterations: x.iterations.max(z.iterations),
        })
    }
}
