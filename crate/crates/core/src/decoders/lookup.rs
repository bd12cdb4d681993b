use alloc::collections::BTreeMap;
use alloc::format;

use super::{DecodeResult, Decoder};
use crate::codes::{CssCode, Syndrome};
use crate::error::{check_len, param, Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::PauliOperator;

/// Largest block length the table decoder accepts.
pub const MAX_LOOKUP_QUBITS: usize = 20;

type Key = (u128, u128);

/// Table of minimum-weight errors, one per reachable syndrome.
///
/// Errors are enumerated in increasing weight; within a weight the entry kept
/// for a syndrome is the smallest `(x_bits, z_bits)` pair in lexicographic
/// order (qubit 0 compared first, `0 < 1`).
#[derive(Clone, Debug)]
pub struct LookupDecoder {
    code: CssCode,
    table: BTreeMap<Key, (u32, u32)>,
    max_weight: usize,
}

struct Builder {
    n: usize,
    // h_x and h_z columns, one packed word per qubit
    x_cols: alloc::vec::Vec<u128>,
    z_cols: alloc::vec::Vec<u128>,
    table: BTreeMap<Key, (u32, u32, usize)>,
}

fn pack_columns(h: &BitMatrix, n: usize) -> alloc::vec::Vec<u128> {
    (0..n)
        .map(|q| {
            h.rows()
                .iter()
                .enumerate()
                .filter(|(_, r)| r.get(q))
                .fold(0u128, |acc, (i, _)| acc | (1u128 << i))
        })
        .collect()
}

fn pack(v: &BitVec) -> u128 {
    v.iter_ones().fold(0u128, |acc, i| acc | (1u128 << i))
}

/// Orders masks lexicographically with qubit 0 most significant.
#[inline]
fn lex_key(n: usize, x: u32, z: u32) -> (u32, u32) {
    let shift = 32 - n as u32;
    (x.reverse_bits() >> shift, z.reverse_bits() >> shift)
}

impl Builder {
    #[allow(clippy::too_many_arguments)]
    fn visit(&mut self, weight: usize, start: usize, left: usize, x: u32, z: u32, sx: u128, sz: u128) {
        if left == 0 {
            let key = (sx, sz);
            let cand = lex_key(self.n, x, z);
            let n = self.n;
            self.table
                .entry(key)
                .and_modify(|e| {
                    if e.2 == weight && cand < lex_key(n, e.0, e.1) {
                        *e = (x, z, weight);
                    }
                })
                .or_insert((x, z, weight));
            return;
        }
        for q in start..=(self.n - left) {
            let bit = 1u32 << q;
            let (fx, fz) = (self.x_cols[q], self.z_cols[q]);
            // X flips Z checks, Z flips X checks, Y both
            self.visit(weight, q + 1, left - 1, x | bit, z, sx, sz ^ fz);
            self.visit(weight, q + 1, left - 1, x | bit, z | bit, sx ^ fx, sz ^ fz);
            self.visit(weight, q + 1, left - 1, x, z | bit, sx ^ fx, sz);
        }
    }
}

impl LookupDecoder {
    pub fn new(code: &CssCode) -> Result<Self> {
        Self::with_weight_cap(code, code.n())
    }

    /// Enumerates errors up to weight `cap` at most.
    pub fn with_weight_cap(code: &CssCode, cap: usize) -> Result<Self> {
        let n = code.n();
        if n > MAX_LOOKUP_QUBITS {
            return Err(param(format!("lookup decoding needs n <= {MAX_LOOKUP_QUBITS}, got {n}")));
        }
        if code.h_x().num_rows() > 128 || code.h_z().num_rows() > 128 {
            return Err(param("lookup decoding supports at most 128 checks per type"));
        }
        let target = 1usize << (code.h_x().rank() + code.h_z().rank());
        let mut b = Builder {
            n,
            x_cols: pack_columns(code.h_x(), n),
            z_cols: pack_columns(code.h_z(), n),
            table: BTreeMap::new(),
        };
        let mut max_weight = 0;
        for w in 0..=cap.min(n) {
            b.visit(w, 0, w, 0, 0, 0, 0);
            max_weight = w;
            if b.table.len() >= target {
                break;
            }
        }
        Ok(LookupDecoder {
            code: code.clone(),
            table: b.table.into_iter().map(|(k, (x, z, _))| (k, (x, z))).collect(),
            max_weight,
        })
    }

    /// Number of syndromes in the table.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Largest error weight enumerated.
    pub fn max_weight(&self) -> usize {
        self.max_weight
    }
}

impl Decoder for LookupDecoder {
    fn code(&self) -> &CssCode {
        &self.code
    }

    fn decode(&self, syndrome: &Syndrome) -> Result<DecodeResult> {
        check_len(self.code.h_x().num_rows(), syndrome.x_checks.len())?;
        check_len(self.code.h_z().num_rows(), syndrome.z_checks.len())?;
        let key = (pack(&syndrome.x_checks), pack(&syndrome.z_checks));
        let &(x, z) = self
            .table
            .get(&key)
            .ok_or_else(|| Error::Undecodable(format!("syndrome {}/{} not in table", syndrome.x_checks, syndrome.z_checks)))?;
        let n = self.code.n();
        let correction = PauliOperator::from_bits(BitVec::from_u64(n, x as u64), BitVec::from_u64(n, z as u64))?;
        Ok(DecodeResult::exact(correction))
    }
}
