//! Stabilizer-tableau simulation of Clifford circuits with Pauli noise.
//!
//! The tableau keeps `n` destabilizer rows, `n` stabilizer rows and one
//! scratch row, each stored as packed X/Z words plus a sign bit, and uses the
//! Aaronson–Gottesman update rules. Measurements cost `O(n²)` word ops.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{check_len, param, Result};
use crate::pauli::{Pauli, PauliOperator};

/// Gate set of the simulator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    Cnot(usize, usize),
    X(usize),
    Y(usize),
    Z(usize),
}

impl Gate {
    /// Largest qubit index touched.
    fn max_qubit(&self) -> usize {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => q,
            Gate::Cnot(c, t) => c.max(t),
        }
    }

    /// Same gate acting on `q + offset` instead of `q`.
    pub fn shifted(&self, offset: usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(q + offset),
            Gate::X(q) => Gate::X(q + offset),
            Gate::Y(q) => Gate::Y(q + offset),
            Gate::Z(q) => Gate::Z(q + offset),
            Gate::Cnot(c, t) => Gate::Cnot(c + offset, t + offset),
        }
    }

    /// Conjugates a phase-free Pauli through the gate: `P ↦ G P G†`.
    pub fn propagate(&self, p: &mut PauliOperator) {
        match *self {
            Gate::H(q) => {
                let (x, z) = p.get(q).bits();
                p.set(q, Pauli::from_bits(z, x));
            }
            Gate::Cnot(c, t) => {
                let (xc, zc) = p.get(c).bits();
                let (xt, zt) = p.get(t).bits();
                p.set(c, Pauli::from_bits(xc, zc ^ zt));
                p.set(t, Pauli::from_bits(xt ^ xc, zt));
            }
            Gate::X(_) | Gate::Y(_) | Gate::Z(_) => {}
        }
    }
}

/// Inverse of a gate sequence (every gate in the set is self-inverse).
pub fn inverse_circuit(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().rev().copied().collect()
}

/// Pure stabilizer state on `n` qubits.
#[derive(Clone, Debug)]
pub struct StabilizerState {
    n: usize,
    words: usize,
    // row r occupies [r * words, (r + 1) * words)
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<bool>,
}

impl StabilizerState {
    /// `|0…0⟩`: destabilizers `X_i`, stabilizers `+Z_i`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one qubit");
        let words = n.div_ceil(64);
        let rows = 2 * n + 1;
        let mut s = StabilizerState {
            n,
            words,
            xs: vec![0; rows * words],
            zs: vec![0; rows * words],
            signs: vec![false; rows],
        };
        for i in 0..n {
            s.xs[i * words + i / 64] |= 1 << (i % 64);
            s.zs[(n + i) * words + i / 64] |= 1 << (i % 64);
        }
        s
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    fn bit(v: &[u64], words: usize, row: usize, q: usize) -> bool {
        (v[row * words + q / 64] >> (q % 64)) & 1 == 1
    }

    #[inline]
    fn x(&self, row: usize, q: usize) -> bool {
        Self::bit(&self.xs, self.words, row, q)
    }

    #[inline]
    fn z(&self, row: usize, q: usize) -> bool {
        Self::bit(&self.zs, self.words, row, q)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.n {
            Ok(())
        } else {
            Err(param(alloc::format!("qubit {q} out of range for {} qubits", self.n)))
        }
    }

    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        self.check_qubit(gate.max_qubit())?;
        let rows = 2 * self.n;
        let w = self.words;
        match gate {
            Gate::H(q) => {
                let (wi, m) = (q / 64, 1u64 << (q % 64));
                for r in 0..rows {
                    let xi = self.xs[r * w + wi] & m;
                    let zi = self.zs[r * w + wi] & m;
                    if xi != 0 && zi != 0 {
                        self.signs[r] ^= true;
                    }
                    if (xi == 0) != (zi == 0) {
                        self.xs[r * w + wi] ^= m;
                        self.zs[r * w + wi] ^= m;
                    }
                }
            }
            Gate::Cnot(c, t) => {
                if c == t {
                    return Err(param("CNOT control and target must differ"));
                }
                for r in 0..rows {
                    let xc = self.x(r, c);
                    let zc = self.z(r, c);
                    let xt = self.x(r, t);
                    let zt = self.z(r, t);
                    if xc && zt && (xt == zc) {
                        self.signs[r] ^= true;
                    }
                    if xc {
                        self.xs[r * w + t / 64] ^= 1 << (t % 64);
                    }
                    if zt {
                        self.zs[r * w + c / 64] ^= 1 << (c % 64);
                    }
                }
            }
            Gate::X(q) => {
                for r in 0..rows {
                    if self.z(r, q) {
                        self.signs[r] ^= true;
                    }
                }
            }
            Gate::Z(q) => {
                for r in 0..rows {
                    if self.x(r, q) {
                        self.signs[r] ^= true;
                    }
                }
            }
            Gate::Y(q) => {
                for r in 0..rows {
                    if self.x(r, q) != self.z(r, q) {
                        self.signs[r] ^= true;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|&g| self.apply(g))
    }

    /// Applies a Pauli operator (acting on the first `p.num_qubits()` qubits).
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        if p.num_qubits() > self.n {
            return Err(crate::error::Error::Dimension {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        self.apply_pauli_at(p, 0)
    }

    /// Applies `p` to qubits `offset .. offset + p.num_qubits()`.
    pub fn apply_pauli_at(&mut self, p: &PauliOperator, offset: usize) -> Result<()> {
        if offset + p.num_qubits() > self.n {
            return Err(param("Pauli does not fit in the register"));
        }
        if p.is_identity() {
            return Ok(());
        }
        let embedded = self.embed(p, offset);
        for r in 0..2 * self.n {
            if self.row_anticommutes(r, &embedded) {
                self.signs[r] ^= true;
            }
        }
        Ok(())
    }

    /// Packed `(x, z)` words for `p` placed at `offset`.
    fn embed(&self, p: &PauliOperator, offset: usize) -> (Vec<u64>, Vec<u64>) {
        let mut x = vec![0u64; self.words];
        let mut z = vec![0u64; self.words];
        for q in p.x_bits().iter_ones() {
            let q = q + offset;
            x[q / 64] |= 1 << (q % 64);
        }
        for q in p.z_bits().iter_ones() {
            let q = q + offset;
            z[q / 64] |= 1 << (q % 64);
        }
        (x, z)
    }

    #[inline]
    fn row_anticommutes(&self, r: usize, (px, pz): &(Vec<u64>, Vec<u64>)) -> bool {
        let w = self.words;
        let mut acc = 0u32;
        for k in 0..w {
            acc ^= (self.xs[r * w + k] & pz[k]).count_ones() ^ (self.zs[r * w + k] & px[k]).count_ones();
        }
        acc & 1 == 1
    }

    /// Row `h` ← row `i` · row `h`, tracking the sign exactly.
    fn rowsum(&mut self, h: usize, i: usize) {
        let w = self.words;
        let mut plus = 0u32;
        let mut minus = 0u32;
        for k in 0..w {
            let x1 = self.xs[i * w + k];
            let z1 = self.zs[i * w + k];
            let x2 = self.xs[h * w + k];
            let z2 = self.zs[h * w + k];
            let y1 = x1 & z1;
            let ox = x1 & !z1;
            let oz = !x1 & z1;
            plus += ((y1 & !x2 & z2) | (ox & x2 & z2) | (oz & x2 & !z2)).count_ones();
            minus += ((y1 & x2 & !z2) | (ox & !x2 & z2) | (oz & x2 & z2)).count_ones();
            self.xs[h * w + k] = x1 ^ x2;
            self.zs[h * w + k] = z1 ^ z2;
        }
        let total = 2 * (self.signs[h] as i64) + 2 * (self.signs[i] as i64) + plus as i64 - minus as i64;
        self.signs[h] = total.rem_euclid(4) == 2;
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        self.xs.copy_within(src * w..(src + 1) * w, dst * w);
        self.zs.copy_within(src * w..(src + 1) * w, dst * w);
        self.signs[dst] = self.signs[src];
    }

    fn set_row(&mut self, dst: usize, (px, pz): &(Vec<u64>, Vec<u64>), sign: bool) {
        let w = self.words;
        self.xs[dst * w..(dst + 1) * w].copy_from_slice(px);
        self.zs[dst * w..(dst + 1) * w].copy_from_slice(pz);
        self.signs[dst] = sign;
    }

    fn clear_row(&mut self, dst: usize) {
        let w = self.words;
        self.xs[dst * w..(dst + 1) * w].fill(0);
        self.zs[dst * w..(dst + 1) * w].fill(0);
        self.signs[dst] = false;
    }

    /// Deterministic value of the Hermitian Pauli `p` (at `offset`), or `None`
    /// if the outcome would be random. `Some(true)` means eigenvalue −1.
    pub fn peek_pauli_at(&mut self, p: &PauliOperator, offset: usize) -> Result<Option<bool>> {
        if offset + p.num_qubits() > self.n {
            return Err(param("Pauli does not fit in the register"));
        }
        let emb = self.embed(p, offset);
        let n = self.n;
        if (n..2 * n).any(|r| self.row_anticommutes(r, &emb)) {
            return Ok(None);
        }
        Ok(Some(self.deterministic_outcome(&emb)))
    }

    pub fn peek_pauli(&mut self, p: &PauliOperator) -> Result<Option<bool>> {
        self.peek_pauli_at(p, 0)
    }

    fn deterministic_outcome(&mut self, emb: &(Vec<u64>, Vec<u64>)) -> bool {
        let n = self.n;
        let scratch = 2 * n;
        self.clear_row(scratch);
        for i in 0..n {
            if self.row_anticommutes(i, emb) {
                self.rowsum(scratch, i + n);
            }
        }
        debug_assert!({
            let w = self.words;
            self.xs[scratch * w..(scratch + 1) * w] == emb.0[..] && self.zs[scratch * w..(scratch + 1) * w] == emb.1[..]
        });
        self.signs[scratch]
    }

    /// Measures the Hermitian Pauli `p` placed at `offset`. Returns `true` for
    /// the −1 outcome.
    pub fn measure_pauli_at<R: Rng + ?Sized>(&mut self, p: &PauliOperator, offset: usize, rng: &mut R) -> Result<bool> {
        if offset + p.num_qubits() > self.n {
            return Err(param("Pauli does not fit in the register"));
        }
        if p.is_identity() {
            return Ok(false);
        }
        let emb = self.embed(p, offset);
        let n = self.n;
        let Some(pivot) = (n..2 * n).find(|&r| self.row_anticommutes(r, &emb)) else {
            return Ok(self.deterministic_outcome(&emb));
        };
        for r in 0..2 * n {
            if r != pivot && self.row_anticommutes(r, &emb) {
                self.rowsum(r, pivot);
            }
        }
        self.copy_row(pivot - n, pivot);
        let outcome = rng.random::<bool>();
        self.set_row(pivot, &emb, outcome);
        self.debug_check();
        Ok(outcome)
    }

    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Result<bool> {
        self.measure_pauli_at(p, 0, rng)
    }

    /// Z-basis measurement; `true` is the |1⟩ outcome.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<bool> {
        self.check_qubit(q)?;
        self.measure_pauli_at(&PauliOperator::single(1, 0, Pauli::Z), q, rng)
    }

    /// X-basis measurement; `true` is the |−⟩ outcome.
    pub fn measure_x<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<bool> {
        self.check_qubit(q)?;
        self.measure_pauli_at(&PauliOperator::single(1, 0, Pauli::X), q, rng)
    }

    /// Bell measurement by CNOT(q1→q2), H(q1), then Z on both. Returns the
    /// `(X_q1 X_q2, Z_q1 Z_q2)` outcome bits. Both qubits are left in a
    /// product state.
    pub fn bell_measure<R: Rng + ?Sized>(&mut self, q1: usize, q2: usize, rng: &mut R) -> Result<(bool, bool)> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(param("Bell measurement needs two distinct qubits"));
        }
        self.apply(Gate::Cnot(q1, q2))?;
        self.apply(Gate::H(q1))?;
        let xx = self.measure_z(q1, rng)?;
        let zz = self.measure_z(q2, rng)?;
        Ok((xx, zz))
    }

    /// Turns `|00⟩` on `(a, b)` into the Bell pair stabilized by `XX`, `ZZ`.
    pub fn prepare_bell(&mut self, a: usize, b: usize) -> Result<()> {
        self.apply(Gate::H(a))?;
        self.apply(Gate::Cnot(a, b))
    }

    /// Resets qubit `q` to |0⟩.
    pub fn reset<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<()> {
        if self.measure_z(q, rng)? {
            self.apply(Gate::X(q))?;
        }
        Ok(())
    }

    /// Stabilizer generators as `(sign, Pauli)` pairs.
    pub fn stabilizers(&self) -> Vec<(bool, PauliOperator)> {
        (self.n..2 * self.n).map(|r| (self.signs[r], self.row_pauli(r))).collect()
    }

    fn row_pauli(&self, r: usize) -> PauliOperator {
        let mut p = PauliOperator::identity(self.n);
        for q in 0..self.n {
            p.set(q, Pauli::from_bits(self.x(r, q), self.z(r, q)));
        }
        p
    }

    /// Tableau well-formedness: stabilizers commute pairwise and destabilizer
    /// `i` anticommutes exactly with stabilizer `i`. Also checks the rows
    /// are independent.
    pub fn check_invariants(&self) -> Result<()> {
        let rows: Vec<PauliOperator> = (0..2 * self.n).map(|r| self.row_pauli(r)).collect();
        let n = self.n;
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                let anti = rows[i].anticommutes(&rows[j]);
                let expected = j == i + n && i < n;
                if anti != expected {
                    return Err(crate::error::Error::Structural(alloc::format!(
                        "rows {i} and {j}: anticommute = {anti}, expected {expected}"
                    )));
                }
            }
        }
        // full symplectic rank follows from the pairing above
        check_len(rows.len(), 2 * n)
    }

    #[inline]
    fn debug_check(&self) {
        #[cfg(debug_assertions)]
        if self.n <= 16 {
            self.check_invariants().expect("tableau invariants");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::stream_rng;
    use alloc::string::String;
    use std::collections::HashMap;

    fn pauli(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn fresh_state_measures_zero() {
        let mut rng = stream_rng(1, 0);
        let mut s = StabilizerState::new(5);
        for q in 0..5 {
            assert!(!s.measure_z(q, &mut rng).unwrap());
        }
        let mut s = StabilizerState::new(3);
        s.apply_pauli(&pauli("XII")).unwrap();
        assert!(s.measure_z(0, &mut rng).unwrap());
        assert!(!s.measure_z(1, &mut rng).unwrap());
    }

    #[test]
    fn bell_pair_stabilizers() {
        let mut s = StabilizerState::new(2);
        s.prepare_bell(0, 1).unwrap();
        assert_eq!(s.peek_pauli(&pauli("XX")).unwrap(), Some(false));
        assert_eq!(s.peek_pauli(&pauli("ZZ")).unwrap(), Some(false));
        assert_eq!(s.peek_pauli(&pauli("YY")).unwrap(), Some(true));
        assert_eq!(s.peek_pauli(&pauli("ZI")).unwrap(), None);
        s.check_invariants().unwrap();
    }

    #[test]
    fn hadamard_is_an_involution() {
        let mut s = StabilizerState::new(3);
        s.apply_all(&[Gate::H(0), Gate::Cnot(0, 2), Gate::Y(1), Gate::H(1)]).unwrap();
        let before = s.stabilizers();
        s.apply(Gate::H(2)).unwrap();
        s.apply(Gate::H(2)).unwrap();
        assert_eq!(s.stabilizers(), before);
    }

    #[test]
    fn cnot_spreads_x_from_control() {
        let mut p = pauli("XI");
        Gate::Cnot(0, 1).propagate(&mut p);
        assert_eq!(p, pauli("XX"));
        let mut p = pauli("IZ");
        Gate::Cnot(0, 1).propagate(&mut p);
        assert_eq!(p, pauli("ZZ"));
        // same action on the tableau: |+0⟩ → Bell
        let mut s = StabilizerState::new(2);
        s.apply(Gate::H(0)).unwrap();
        assert_eq!(s.peek_pauli(&pauli("XI")).unwrap(), Some(false));
        s.apply(Gate::Cnot(0, 1)).unwrap();
        assert_eq!(s.peek_pauli(&pauli("XX")).unwrap(), Some(false));
    }

    #[test]
    fn index_errors() {
        let mut s = StabilizerState::new(2);
        assert!(s.apply(Gate::H(2)).is_err());
        assert!(s.apply(Gate::Cnot(1, 1)).is_err());
        let mut rng = stream_rng(0, 0);
        assert!(s.measure_z(5, &mut rng).is_err());
        assert!(s.bell_measure(0, 0, &mut rng).is_err());
    }

    #[test]
    fn bell_pair_measurements_are_correlated_and_uniform() {
        let trials = 20_000;
        let mut ones = 0;
        for t in 0..trials {
            let mut rng = stream_rng(11, t);
            let mut s = StabilizerState::new(2);
            s.prepare_bell(0, 1).unwrap();
            let a = s.measure_z(0, &mut rng).unwrap();
            let b = s.measure_z(1, &mut rng).unwrap();
            assert_eq!(a, b);
            ones += a as usize;
        }
        let f = ones as f64 / trials as f64;
        assert!((f - 0.5).abs() <= 3.0 * (0.25 / trials as f64).sqrt());
    }

    #[test]
    fn measure_x_on_zero_is_uniform_and_repeat_is_stable() {
        let trials = 10_000;
        let mut ones = 0;
        for t in 0..trials {
            let mut rng = stream_rng(12, t);
            let mut s = StabilizerState::new(1);
            let m = s.measure_x(0, &mut rng).unwrap();
            ones += m as usize;
            assert_eq!(s.measure_x(0, &mut rng).unwrap(), m);
            let z = s.measure_z(0, &mut rng).unwrap();
            assert_eq!(s.measure_z(0, &mut rng).unwrap(), z);
        }
        let f = ones as f64 / trials as f64;
        assert!((f - 0.5).abs() <= 3.0 * (0.25 / trials as f64).sqrt());
    }

    #[test]
    fn bell_measure_reads_error_label() {
        let mut rng = stream_rng(5, 0);
        for (err, expect) in [("II", (false, false)), ("XI", (false, true)), ("IZ", (true, false)), ("YI", (true, true))] {
            let mut s = StabilizerState::new(2);
            s.prepare_bell(0, 1).unwrap();
            s.apply_pauli(&pauli(err)).unwrap();
            assert_eq!(s.bell_measure(0, 1, &mut rng).unwrap(), expect, "{err}");
            s.check_invariants().unwrap();
        }
    }

    // --- dense state-vector oracle (test only) ---

    #[derive(Clone, Copy, Debug)]
    struct C(f64, f64);

    impl C {
        fn add(self, o: C) -> C {
            C(self.0 + o.0, self.1 + o.1)
        }
        fn scale(self, s: f64) -> C {
            C(self.0 * s, self.1 * s)
        }
        fn mul(self, o: C) -> C {
            C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
        }
        fn norm2(self) -> f64 {
            self.0 * self.0 + self.1 * self.1
        }
    }

    struct Dense {
        n: usize,
        amp: Vec<C>,
    }

    impl Dense {
        fn new(n: usize) -> Self {
            let mut amp = vec![C(0.0, 0.0); 1 << n];
            amp[0] = C(1.0, 0.0);
            Dense { n, amp }
        }

        fn apply(&mut self, g: Gate) {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            match g {
                Gate::H(q) => {
                    for i in 0..self.amp.len() {
                        if i & (1 << q) == 0 {
                            let j = i | (1 << q);
                            let (a, b) = (self.amp[i], self.amp[j]);
                            self.amp[i] = a.add(b).scale(h);
                            self.amp[j] = a.add(b.scale(-1.0)).scale(h);
                        }
                    }
                }
                Gate::Cnot(c, t) => {
                    for i in 0..self.amp.len() {
                        if i & (1 << c) != 0 && i & (1 << t) == 0 {
                            self.amp.swap(i, i | (1 << t));
                        }
                    }
                }
                Gate::X(q) => {
                    for i in 0..self.amp.len() {
                        if i & (1 << q) == 0 {
                            self.amp.swap(i, i | (1 << q));
                        }
                    }
                }
                Gate::Z(q) => {
                    for i in 0..self.amp.len() {
                        if i & (1 << q) != 0 {
                            self.amp[i] = self.amp[i].scale(-1.0);
                        }
                    }
                }
                Gate::Y(q) => {
                    // Y = i X Z
                    self.apply(Gate::Z(q));
                    self.apply(Gate::X(q));
                    for a in self.amp.iter_mut() {
                        *a = a.mul(C(0.0, 1.0));
                    }
                }
            }
        }

        fn outcome_distribution(&self) -> Vec<f64> {
            assert_eq!(self.amp.len(), 1 << self.n);
            self.amp.iter().map(|a| a.norm2()).collect()
        }
    }

    fn random_circuit(n: usize, len: usize, seed: u64) -> Vec<Gate> {
        let mut rng = stream_rng(seed, 999);
        (0..len)
            .map(|_| {
                let q = rng.random_range(0..n);
                match rng.random_range(0..5) {
                    0 | 1 => Gate::H(q),
                    2 if n > 1 => {
                        let mut t = rng.random_range(0..n);
                        while t == q {
                            t = rng.random_range(0..n);
                        }
                        Gate::Cnot(q, t)
                    }
                    3 => Gate::X(q),
                    _ => Gate::Y(q),
                }
            })
            .collect()
    }

    #[test]
    fn matches_dense_oracle_distributions() {
        for (case, n) in [(0u64, 1usize), (1, 2), (2, 3), (3, 4), (4, 4), (5, 3)] {
            let circuit = random_circuit(n, 12, case);
            let mut dense = Dense::new(n);
            for &g in &circuit {
                dense.apply(g);
            }
            let exact = dense.outcome_distribution();
            let trials = 10_000u64;
            let mut counts: HashMap<usize, u64> = HashMap::new();
            for t in 0..trials {
                let mut rng = stream_rng(100 + case, t);
                let mut s = StabilizerState::new(n);
                s.apply_all(&circuit).unwrap();
                let mut idx = 0usize;
                for q in 0..n {
                    if s.measure_z(q, &mut rng).unwrap() {
                        idx |= 1 << q;
                    }
                }
                *counts.entry(idx).or_default() += 1;
            }
            for (idx, &p) in exact.iter().enumerate() {
                let f = *counts.get(&idx).unwrap_or(&0) as f64 / trials as f64;
                let tol = 3.0 * (p * (1.0 - p) / trials as f64).sqrt() + 1e-12;
                assert!((f - p).abs() <= tol, "case {case} outcome {idx:0n$b}: {f} vs {p}", n = n);
            }
        }
    }

    #[test]
    fn pauli_expectations_match_dense_oracle() {
        // For every n ≤ 3 Pauli, a deterministic tableau value must equal the
        // dense expectation ±1, and random ones must have expectation 0.
        for case in 0..6u64 {
            let n = 1 + (case as usize % 3);
            let circuit = random_circuit(n, 10, 50 + case);
            let mut dense = Dense::new(n);
            for &g in &circuit {
                dense.apply(g);
            }
            let mut s = StabilizerState::new(n);
            s.apply_all(&circuit).unwrap();
            for code in 0..(1usize << (2 * n)) {
                let label: String = (0..n).map(|q| ['I', 'X', 'Y', 'Z'][(code >> (2 * q)) & 3]).collect();
                let p = pauli(&label);
                let mut d2 = Dense { n, amp: dense.amp.clone() };
                for q in 0..n {
                    match p.get(q) {
                        Pauli::I => {}
                        Pauli::X => d2.apply(Gate::X(q)),
                        Pauli::Y => d2.apply(Gate::Y(q)),
                        Pauli::Z => d2.apply(Gate::Z(q)),
                    }
                }
                let expect: f64 = dense.amp.iter().zip(&d2.amp).map(|(a, b)| C(a.0, -a.1).mul(*b).0).sum();
                match s.peek_pauli(&p).unwrap() {
                    Some(minus) => assert!((expect - if minus { -1.0 } else { 1.0 }).abs() < 1e-9, "{label}"),
                    None => assert!(expect.abs() < 1e-9, "{label}"),
                }
            }
        }
    }
}
