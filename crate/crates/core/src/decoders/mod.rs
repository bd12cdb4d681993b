//! Syndrome decoders for CSS codes.
//!
//! All decoders are built once per code and are immutable afterwards, so a
//! single instance can be shared across threads.

use alloc::boxed::Box;
use alloc::format;
use core::fmt;
use core::str::FromStr;

use crate::codes::{CssCode, Syndrome};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

mod bp;
mod lookup;
mod mwpm;

pub use bp::{BpDecoder, DEFAULT_MAX_ITERS};
pub use lookup::LookupDecoder;
pub use mwpm::{MatchingGraph, MwpmDecoder, MAX_DEFECTS};

/// Output of a decoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub correction: PauliOperator,
    /// Always `true` for lookup and matching.
    pub converged: bool,
    /// Message-passing sweeps used; 0 for lookup and matching.
    pub iterations: usize,
}

impl DecodeResult {
    pub(crate) fn exact(correction: PauliOperator) -> Self {
        DecodeResult {
            correction,
            converged: true,
            iterations: 0,
        }
    }
}

pub trait Decoder: Send + Sync {
    fn code(&self) -> &CssCode;

    fn decode(&self, syndrome: &Syndrome) -> Result<DecodeResult>;

    /// `true` iff `error · correction` acts non-trivially on the logical qubits.
    fn is_failure(&self, error: &PauliOperator, result: &DecodeResult) -> Result<bool> {
        self.code().is_logical_failure(&error.multiply(&result.correction)?)
    }
}

/// Decoder families selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    Lookup,
    Mwpm,
    Bp,
}

impl DecoderKind {
    /// Natural decoder for a code: lookup for tiny codes, matching where
    /// every qubit touches at most two checks of each type, BP otherwise.
    pub fn default_for(code: &CssCode) -> DecoderKind {
        if code.n() <= 12 {
            DecoderKind::Lookup
        } else if MatchingGraph::new(code.h_z()).is_ok() && MatchingGraph::new(code.h_x()).is_ok() {
            DecoderKind::Mwpm
        } else {
            DecoderKind::Bp
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecoderKind::Lookup => "lookup",
            DecoderKind::Mwpm => "mwpm",
            DecoderKind::Bp => "bp",
        })
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "lookup" => Ok(DecoderKind::Lookup),
            "mwpm" => Ok(DecoderKind::Mwpm),
            "bp" => Ok(DecoderKind::Bp),
            other => Err(Error::Parse(format!("unknown decoder {other:?}"))),
        }
    }
}

/// Builds a decoder of the given kind. `p` is the channel prior (used by BP
/// only) and `max_iters` the BP iteration cap.
pub fn build_decoder(kind: DecoderKind, code: &CssCode, p: f64, max_iters: usize) -> Result<Box<dyn Decoder>> {
    Ok(match kind {
        DecoderKind::Lookup => Box::new(LookupDecoder::new(code)?),
        DecoderKind::Mwpm => Box::new(MwpmDecoder::new(code, p)?),
        DecoderKind::Bp => Box::new(BpDecoder::new(code, p, max_iters)?),
    })
}
