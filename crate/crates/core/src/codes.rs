//! CSS stabilizer codes: data model, constructors and syndromes.
//!
//! Conventions used throughout the crate:
//!
//! * `h_x` rows are the supports of X-type stabilizers. They detect the Z
//!   component of an error (phase-flip checks).
//! * `h_z` rows are the supports of Z-type stabilizers. They detect the X
//!   component of an error (bit-flip checks).
//! * `logical_x[i]` and `logical_z[i]` are the supports of the X- and Z-type
//!   representatives of logical qubit `i`, paired so that
//!   `logical_x[i] · logical_z[j] = δ_ij`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, param, Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::PauliOperator;

/// A CSS code `[[n, k, d]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    name: String,
    n: usize,
    distance: Option<usize>,
    h_x: BitMatrix,
    h_z: BitMatrix,
    logical_x: BitMatrix,
    logical_z: BitMatrix,
}

/// Outcome of the two families of parity checks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome {
    /// `h_x · e_z`: X-type checks flagged by phase flips.
    pub x_checks: BitVec,
    /// `h_z · e_x`: Z-type checks flagged by bit flips.
    pub z_checks: BitVec,
}

impl Syndrome {
    pub fn zeros(r_x: usize, r_z: usize) -> Self {
        Syndrome {
            x_checks: BitVec::zeros(r_x),
            z_checks: BitVec::zeros(r_z),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x_checks.is_zero() && self.z_checks.is_zero()
    }

    pub fn xor(&self, other: &Syndrome) -> Syndrome {
        Syndrome {
            x_checks: self.x_checks.xor(&other.x_checks),
            z_checks: self.z_checks.xor(&other.z_checks),
        }
    }
}

/// Logical action of an operator that commutes with every stabilizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalClass {
    /// Bit `i` set iff the operator carries a logical X on qubit `i`.
    pub x: BitVec,
    /// Bit `i` set iff the operator carries a logical Z on qubit `i`.
    pub z: BitVec,
}

impl LogicalClass {
    pub fn is_trivial(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }
}

/// A violated code invariant, with the rows involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `h_x[x_row]` and `h_z[z_row]` overlap on an odd number of qubits.
    CssOrthogonality { x_row: usize, z_row: usize },
    /// `logical_x[logical]` anticommutes with Z check `check`.
    LogicalXVsZCheck { logical: usize, check: usize },
    /// `logical_z[logical]` anticommutes with X check `check`.
    LogicalZVsXCheck { logical: usize, check: usize },
    /// `logical_x[i] · logical_z[j] != δ_ij`.
    LogicalPairing { x: usize, z: usize },
    /// Number of logical pairs disagrees with `n - rank(h_x) - rank(h_z)`.
    LogicalCount { expected: usize, found: usize },
    /// A logical representative lies in the stabilizer group.
    LogicalIsStabilizer { logical: usize, x_type: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CssCode {
    /// Assembles a code from its matrices. Only structural consistency
    /// (matching column counts, equal logical counts) is enforced here;
    /// algebraic invariants are reported by [`CssCode::validate`].
    pub fn from_parts(
        name: impl Into<String>,
        h_x: BitMatrix,
        h_z: BitMatrix,
        logical_x: BitMatrix,
        logical_z: BitMatrix,
        distance: Option<usize>,
    ) -> Result<Self> {
        let n = h_z.num_cols();
        for (what, m) in [("h_x", &h_x), ("logical_x", &logical_x), ("logical_z", &logical_z)] {
            if m.num_cols() != n {
                return Err(Error::Structural(format!(
                    "{what} has {} columns, expected n = {n}",
                    m.num_cols()
                )));
            }
        }
        if logical_x.num_rows() != logical_z.num_rows() {
            return Err(Error::Structural(format!(
                "{} X logicals but {} Z logicals",
                logical_x.num_rows(),
                logical_z.num_rows()
            )));
        }
        if n == 0 {
            return Err(Error::Structural("code length must be positive".into()));
        }
        Ok(CssCode {
            name: name.into(),
            n,
            distance,
            h_x,
            h_z,
            logical_x,
            logical_z,
        })
    }

    /// Builds a code from its check matrices and derives a paired logical basis.
    pub fn from_checks(name: impl Into<String>, h_x: BitMatrix, h_z: BitMatrix, distance: Option<usize>) -> Result<Self> {
        check_len(h_z.num_cols(), h_x.num_cols())?;
        if !h_x.mul_transpose(&h_z)?.is_zero() {
            return Err(param("h_x · h_zᵀ must vanish for a CSS code"));
        }
        let (logical_x, logical_z) = paired_logicals(&h_x, &h_z);
        Self::from_parts(name, h_x, h_z, logical_x, logical_z, distance)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.logical_x.num_rows()
    }

    /// Known minimum distance, if recorded.
    pub fn distance(&self) -> Option<usize> {
        self.distance
    }

    pub fn h_x(&self) -> &BitMatrix {
        &self.h_x
    }

    pub fn h_z(&self) -> &BitMatrix {
        &self.h_z
    }

    pub fn logical_x(&self) -> &BitMatrix {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &BitMatrix {
        &self.logical_z
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Checks every algebraic invariant and lists the offending rows.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, x) in self.h_x.rows().iter().enumerate() {
            for (j, z) in self.h_z.rows().iter().enumerate() {
                if x.dot(z) {
                    violations.push(Violation::CssOrthogonality { x_row: i, z_row: j });
                }
            }
        }
        for (l, lx) in self.logical_x.rows().iter().enumerate() {
            for (c, z) in self.h_z.rows().iter().enumerate() {
                if lx.dot(z) {
                    violations.push(Violation::LogicalXVsZCheck { logical: l, check: c });
                }
            }
        }
        for (l, lz) in self.logical_z.rows().iter().enumerate() {
            for (c, x) in self.h_x.rows().iter().enumerate() {
                if lz.dot(x) {
                    violations.push(Violation::LogicalZVsXCheck { logical: l, check: c });
                }
            }
        }
        for (i, lx) in self.logical_x.rows().iter().enumerate() {
            for (j, lz) in self.logical_z.rows().iter().enumerate() {
                if lx.dot(lz) != (i == j) {
                    violations.push(Violation::LogicalPairing { x: i, z: j });
                }
            }
        }
        let expected = self.n.saturating_sub(self.h_x.rank() + self.h_z.rank());
        if expected != self.k() {
            violations.push(Violation::LogicalCount {
                expected,
                found: self.k(),
            });
        }
        // Pairing already rules this out when it holds, but a broken code can
        // still carry a stabilizer masquerading as a logical.
        for (l, lx) in self.logical_x.rows().iter().enumerate() {
            if self.h_x.num_rows() > 0 && self.h_x.row_space_contains(lx).unwrap_or(false) {
                violations.push(Violation::LogicalIsStabilizer { logical: l, x_type: true });
            }
        }
        for (l, lz) in self.logical_z.rows().iter().enumerate() {
            if self.h_z.num_rows() > 0 && self.h_z.row_space_contains(lz).unwrap_or(false) {
                violations.push(Violation::LogicalIsStabilizer { logical: l, x_type: false });
            }
        }
        ValidationReport { violations }
    }

    /// `(h_x · e_z, h_z · e_x)`.
    pub fn syndrome(&self, error: &PauliOperator) -> Result<Syndrome> {
        check_len(self.n, error.num_qubits())?;
        Ok(Syndrome {
            x_checks: self.h_x.mul_vec(error.z_bits())?,
            z_checks: self.h_z.mul_vec(error.x_bits())?,
        })
    }

    /// Logical action of `op`; meaningful when `op` has zero syndrome.
    pub fn logical_class(&self, op: &PauliOperator) -> Result<LogicalClass> {
        check_len(self.n, op.num_qubits())?;
        // X̄_i is detected by Z̄_i and vice versa.
        Ok(LogicalClass {
            x: self.logical_z.mul_vec(op.x_bits())?,
            z: self.logical_x.mul_vec(op.z_bits())?,
        })
    }

    /// `true` iff `residual` anticommutes with some logical operator.
    pub fn is_logical_failure(&self, residual: &PauliOperator) -> Result<bool> {
        Ok(!self.logical_class(residual)?.is_trivial())
    }

    /// Membership in the stabilizer group (up to phase).
    pub fn is_stabilizer(&self, op: &PauliOperator) -> Result<bool> {
        check_len(self.n, op.num_qubits())?;
        let x_ok = if op.x_bits().is_zero() {
            true
        } else {
            self.h_x.num_rows() > 0 && self.h_x.row_space_contains(op.x_bits())?
        };
        let z_ok = if op.z_bits().is_zero() {
            true
        } else {
            self.h_z.num_rows() > 0 && self.h_z.row_space_contains(op.z_bits())?
        };
        Ok(x_ok && z_ok)
    }

    /// X̄_i as a Pauli operator.
    pub fn logical_x_op(&self, i: usize) -> PauliOperator {
        PauliOperator::x_on(self.n, self.logical_x.row(i))
    }

    /// Z̄_i as a Pauli operator.
    pub fn logical_z_op(&self, i: usize) -> PauliOperator {
        PauliOperator::z_on(self.n, self.logical_z.row(i))
    }

    /// Stabilizer generators as Pauli operators, X-type first.
    pub fn stabilizer_generators(&self) -> Vec<PauliOperator> {
        self.h_x
            .rows()
            .iter()
            .map(|r| PauliOperator::x_on(self.n, r))
            .chain(self.h_z.rows().iter().map(|r| PauliOperator::z_on(self.n, r)))
            .collect()
    }
}

/// Derives paired logical representatives for a CSS pair.
///
/// X logicals span `ker(h_z) / rowspace(h_x)`, Z logicals span
/// `ker(h_x) / rowspace(h_z)`; a symplectic Gram-Schmidt pass then makes
/// `logical_x · logical_zᵀ` the identity.
fn paired_logicals(h_x: &BitMatrix, h_z: &BitMatrix) -> (BitMatrix, BitMatrix) {
    let n = h_x.num_cols();
    let complement = |stab: &BitMatrix, kernel: BitMatrix| -> Vec<BitVec> {
        let mut span = stab.independent_rows();
        let base = span.num_rows();
        for v in kernel.rows() {
            let mut trial = span.clone();
            trial.push_row(v.clone()).expect("same width");
            if trial.rank() > span.num_rows() {
                span = trial;
            }
        }
        span.rows()[base..].to_vec()
    };
    let mut lx = complement(h_x, h_z.kernel());
    let mut lz = complement(h_z, h_x.kernel());
    debug_assert_eq!(lx.len(), lz.len());
    let k = lx.len();
    for i in 0..k {
        let pivot = (i..k).flat_map(|a| (i..k).map(move |b| (a, b))).find(|&(a, b)| lx[a].dot(&lz[b]));
        let (a, b) = pivot.expect("logical pairing matrix is invertible");
        lx.swap(i, a);
        lz.swap(i, b);
        for j in 0..k {
            if j != i && lx[i].dot(&lz[j]) {
                let zi = lz[i].clone();
                lz[j].xor_assign(&zi);
            }
        }
        for j in 0..k {
            if j != i && lx[j].dot(&lz[i]) {
                let xi = lx[i].clone();
                lx[j].xor_assign(&xi);
            }
        }
    }
    (
        BitMatrix::from_rows(n, lx).expect("width n"),
        BitMatrix::from_rows(n, lz).expect("width n"),
    )
}

/// Three-qubit bit-flip repetition code.
///
/// Only bit flips are protected: there are no X-type checks, so any single
/// Z is already a logical operator.
pub fn rep3() -> CssCode {
    let h_z = BitMatrix::from_strs(3, &["110", "011"]).expect("static");
    let l = BitMatrix::from_strs(3, &["111"]).expect("static");
    CssCode::from_parts("rep3", BitMatrix::empty(3), h_z, l.clone(), l, Some(3)).expect("static")
}

/// Nine-qubit Shor code: two layers of three-qubit repetition.
pub fn shor9() -> CssCode {
    let h_z = BitMatrix::from_strs(
        9,
        &["110000000", "011000000", "000110000", "000011000", "000000110", "000000011"],
    )
    .expect("static");
    let h_x = BitMatrix::from_strs(9, &["111111000", "000111111"]).expect("static");
    let lx = BitMatrix::from_strs(9, &["111000000"]).expect("static");
    let lz = BitMatrix::from_strs(9, &["100100100"]).expect("static");
    CssCode::from_parts("shor9", h_x, h_z, lx, lz, Some(3)).expect("static")
}

/// Qubit index of grid site `(row, col)` in a distance-`d` rotated surface code.
#[inline]
pub fn surface_qubit(d: usize, row: usize, col: usize) -> usize {
    row * d + col
}

/// Rotated surface code on a `d × d` grid, `[[d², 1, d]]`.
///
/// Plaquette `(i, j)` for `0 ≤ i, j ≤ d` covers the existing qubits among
/// `(i-1, j-1), (i-1, j), (i, j-1), (i, j)`. Plaquettes with `i + j` even are
/// X-type, odd ones Z-type. Bulk plaquettes are all kept; weight-2 boundary
/// plaquettes are kept only when X-type on the top/bottom edges and Z-type
/// on the left/right edges. Corners are dropped.
///
/// Checks are emitted in row-major plaquette order. The X logical runs down
/// column 0 and the Z logical along row 0.
pub fn rotated_surface(d: usize) -> Result<CssCode> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(param(format!("surface code distance must be odd and >= 3, got {d}")));
    }
    let n = d * d;
    let mut h_x = BitMatrix::empty(n);
    let mut h_z = BitMatrix::empty(n);
    for i in 0..=d {
        for j in 0..=d {
            let x_type = (i + j) % 2 == 0;
            let top_bottom = i == 0 || i == d;
            let left_right = j == 0 || j == d;
            let keep = match (top_bottom, left_right) {
                (true, true) => false,
                (true, false) => x_type,
                (false, true) => !x_type,
                (false, false) => true,
            };
            if !keep {
                continue;
            }
            let mut row = BitVec::zeros(n);
            for (r, c) in [(i.wrapping_sub(1), j.wrapping_sub(1)), (i.wrapping_sub(1), j), (i, j.wrapping_sub(1)), (i, j)] {
                if r < d && c < d {
                    row.set(surface_qubit(d, r, c), true);
                }
            }
            if x_type {
                h_x.push_row(row)?;
            } else {
                h_z.push_row(row)?;
            }
        }
    }
    let mut lx = BitVec::zeros(n);
    let mut lz = BitVec::zeros(n);
    for t in 0..d {
        lx.set(surface_qubit(d, t, 0), true);
        lz.set(surface_qubit(d, 0, t), true);
    }
    CssCode::from_parts(
        format!("surface:{d}"),
        h_x,
        h_z,
        BitMatrix::from_rows(n, vec![lx])?,
        BitMatrix::from_rows(n, vec![lz])?,
        Some(d),
    )
}

/// Hypergraph product of two classical parity-check matrices.
///
/// With `h_a: r_a × n_a` and `h_b: r_b × n_b`, qubits are ordered as the
/// `n_a · n_b` "bit-bit" block followed by the `r_a · r_b` "check-check" block:
///
/// ```text
/// h_x = [ h_a ⊗ I_{n_b} | I_{r_a} ⊗ h_bᵀ ]
/// h_z = [ I_{n_a} ⊗ h_b | h_aᵀ ⊗ I_{r_b} ]
/// ```
pub fn hypergraph_product(h_a: &BitMatrix, h_b: &BitMatrix) -> Result<CssCode> {
    if h_a.num_rows() == 0 || h_a.is_zero() || h_b.num_rows() == 0 || h_b.is_zero() {
        return Err(param("hypergraph product inputs must be nonzero"));
    }
    let (r_a, n_a) = (h_a.num_rows(), h_a.num_cols());
    let (r_b, n_b) = (h_b.num_rows(), h_b.num_cols());
    let h_x = h_a
        .kron(&BitMatrix::identity(n_b))
        .hstack(&BitMatrix::identity(r_a).kron(&h_b.transpose()))?;
    let h_z = BitMatrix::identity(n_a)
        .kron(h_b)
        .hstack(&h_a.transpose().kron(&BitMatrix::identity(r_b)))?;
    let name = format!("hgp[{r_a}x{n_a},{r_b}x{n_b}]");
    CssCode::from_checks(name, h_x, h_z, None)
}

/// Random `(col_weight, row_weight)`-regular classical parity-check matrix
/// with `n` columns, drawn with the configuration model from `seed`.
///
/// Draws that place a bit twice in one check are rejected and redrawn, so the
/// result has exactly `col_weight` ones per column and `row_weight` per row.
/// Draws with two identical columns (classical distance 2) are rejected too.
pub fn random_regular_checks(n: usize, col_weight: usize, row_weight: usize, seed: u64) -> Result<BitMatrix> {
    if n == 0 || col_weight == 0 || row_weight == 0 {
        return Err(param("regular code parameters must be positive"));
    }
    if !(n * col_weight).is_multiple_of(row_weight) {
        return Err(param(format!(
            "n·col_weight = {} is not divisible by row_weight = {row_weight}",
            n * col_weight
        )));
    }
    let rows = n * col_weight / row_weight;
    if row_weight > n || col_weight > rows {
        return Err(param("weights exceed matrix dimensions"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sockets: Vec<usize> = (0..n).flat_map(|v| core::iter::repeat_n(v, col_weight)).collect();
    for _attempt in 0..10_000 {
        sockets.shuffle(&mut rng);
        let mut m = BitMatrix::zeros(rows, n);
        let mut ok = true;
        'fill: for (r, chunk) in sockets.chunks(row_weight).enumerate() {
            for &v in chunk {
                if m.get(r, v) {
                    ok = false;
                    break 'fill;
                }
                m.set(r, v, true);
            }
        }
        if ok && distinct_columns(&m) {
            return Ok(m);
        }
    }
    Err(param("could not draw a simple regular bipartite graph"))
}

fn distinct_columns(m: &BitMatrix) -> bool {
    let mut cols: Vec<BitVec> = (0..m.num_cols()).map(|c| m.column(c)).collect();
    cols.sort_unstable();
    cols.windows(2).all(|w| w[0] != w[1])
}

/// Hypergraph product of a random regular classical code with itself.
pub fn random_hypergraph_product(seed: u64, n_classical: usize, col_weight: usize, row_weight: usize) -> Result<CssCode> {
    let h = random_regular_checks(n_classical, col_weight, row_weight, seed)?;
    Ok(hypergraph_product(&h, &h)?.rename(format!("hgp:{seed}:{n_classical},{col_weight},{row_weight}")))
}

/// Resolves the code identifiers `rep3`, `shor9`, `surface:<d>` and
/// `hgp:<seed>:<n>,<col_weight>,<row_weight>`.
pub fn code_from_id(id: &str) -> Result<CssCode> {
    let mut parts = id.splitn(3, ':');
    let head = parts.next().unwrap_or_default();
    match head {
        "rep3" => Ok(rep3()),
        "shor9" => Ok(shor9()),
        "surface" => {
            let d = parts
                .next()
                .ok_or_else(|| param("surface code needs a distance: surface:<d>"))?
                .parse::<usize>()
                .map_err(|e| param(format!("bad surface distance: {e}")))?;
            rotated_surface(d)
        }
        "hgp" => {
            let seed = parts
                .next()
                .ok_or_else(|| param("hgp code needs hgp:<seed>:<n>,<wc>,<wr>"))?
                .parse::<u64>()
                .map_err(|e| param(format!("bad hgp seed: {e}")))?;
            let params = parts.next().unwrap_or("12,3,4");
            let nums = params
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|e| param(format!("bad hgp parameter {s:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let [n, wc, wr] = nums[..] else {
                return Err(param("hgp parameters must be <n>,<col_weight>,<row_weight>"));
            };
            random_hypergraph_product(seed, n, wc, wr)
        }
        other => Err(param(format!("unknown code id {:?}", other.to_string()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;

    fn x(n: usize, q: usize) -> PauliOperator {
        PauliOperator::single(n, q, Pauli::X)
    }

    #[test]
    fn rep3_parameters_and_syndromes() {
        let c = rep3();
        assert_eq!((c.n(), c.k(), c.distance()), (3, 1, Some(3)));
        assert!(c.validate().passed());
        let s = c.syndrome(&x(3, 1)).unwrap();
        assert_eq!(s.z_checks.to_bit_string(), "11");
        assert!(c.syndrome(&"XXX".parse().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn shor9_structure() {
        let c = shor9();
        assert_eq!((c.n(), c.k()), (9, 1));
        assert_eq!(c.h_x().num_rows(), 2);
        assert!(c.h_x().rows().iter().all(|r| r.count_ones() == 6));
        assert_eq!(c.h_z().num_rows(), 6);
        assert!(c.h_z().rows().iter().all(|r| r.count_ones() == 2));
        assert!(c.validate().passed());
    }

    #[test]
    fn shor9_syndromes() {
        let c = shor9();
        let s = c.syndrome(&PauliOperator::single(9, 4, Pauli::Z)).unwrap();
        assert_eq!(s.x_checks.to_bit_string(), "11");
        assert!(s.z_checks.is_zero());
        let s = c.syndrome(&x(9, 0)).unwrap();
        assert_eq!(s.z_checks.to_bit_string(), "100000");
        let s = c.syndrome(&PauliOperator::single(9, 4, Pauli::Y)).unwrap();
        assert_eq!(s.z_checks.to_bit_string(), "001100");
        assert_eq!(s.x_checks.to_bit_string(), "11");
        assert!(c.syndrome(&PauliOperator::identity(9)).unwrap().is_zero());
    }

    #[test]
    fn broken_shor9_fails_orthogonality() {
        let c = shor9();
        // qubit 3 (0-based 2) lies in the first X row only, so a weight-1
        // check there overlaps it oddly.
        let mut rows = c.h_z().rows().to_vec();
        rows[1] = BitVec::from_indices(9, &[2]);
        let h_z = BitMatrix::from_rows(9, rows).unwrap();
        let broken = CssCode::from_parts("broken", c.h_x().clone(), h_z, c.logical_x().clone(), c.logical_z().clone(), None).unwrap();
        let report = broken.validate();
        assert!(report
            .violations
            .contains(&Violation::CssOrthogonality { x_row: 0, z_row: 1 }));
    }

    #[test]
    fn structural_errors_are_distinct() {
        let r = CssCode::from_parts(
            "bad",
            BitMatrix::zeros(1, 4),
            BitMatrix::zeros(1, 3),
            BitMatrix::zeros(1, 3),
            BitMatrix::zeros(1, 3),
            None,
        );
        assert!(matches!(r, Err(Error::Structural(_))));
    }

    #[test]
    fn rotated_surface_d3_layout() {
        let c = rotated_surface(3).unwrap();
        assert_eq!(c.n(), 9);
        assert_eq!(c.h_x().num_rows(), 4);
        assert_eq!(c.h_z().num_rows(), 4);
        let weights: Vec<usize> = c.h_x().rows().iter().map(BitVec::count_ones).collect();
        assert_eq!(weights.iter().filter(|&&w| w == 4).count(), 2);
        assert_eq!(weights.iter().filter(|&&w| w == 2).count(), 2);
        assert!(c.validate().passed());
    }

    #[test]
    fn rotated_surface_sizes_and_errors() {
        for d in [3, 5, 7, 9, 17] {
            let c = rotated_surface(d).unwrap();
            assert_eq!(c.n(), d * d);
            assert_eq!(c.k(), 1);
            assert_eq!(c.h_x().num_rows(), (d * d - 1) / 2);
            assert_eq!(c.h_z().num_rows(), (d * d - 1) / 2);
            if d <= 9 {
                assert!(c.validate().passed(), "d={d}");
            }
        }
        assert_eq!(rotated_surface(17).unwrap().n(), 289);
        assert!(rotated_surface(4).is_err());
        assert!(rotated_surface(1).is_err());
    }

    #[test]
    fn hypergraph_product_of_repetition_codes() {
        let h = BitMatrix::from_strs(3, &["110", "011"]).unwrap();
        let c = hypergraph_product(&h, &h).unwrap();
        assert_eq!(c.n(), 13);
        assert_eq!(c.k(), 1);
        assert_eq!(c.n() - c.h_x().rank() - c.h_z().rank(), 1);
        assert!(c.validate().passed());
        assert!(hypergraph_product(&BitMatrix::zeros(2, 3), &h).is_err());
    }

    #[test]
    fn random_regular_weights() {
        let h = random_regular_checks(12, 3, 4, 5).unwrap();
        assert_eq!(h.num_rows(), 9);
        assert!(h.rows().iter().all(|r| r.count_ones() == 4));
        assert!(h.column_weights().iter().all(|&w| w == 3));
        assert_eq!(h, random_regular_checks(12, 3, 4, 5).unwrap());
    }

    #[test]
    fn code_ids() {
        assert_eq!(code_from_id("surface:5").unwrap().n(), 25);
        assert_eq!(code_from_id("shor9").unwrap().name(), "shor9");
        assert!(code_from_id("surface:4").is_err());
        assert!(code_from_id("steane").is_err());
        let c = code_from_id("hgp:3:12,3,4").unwrap();
        assert_eq!(c.n(), 144 + 81);
    }
}
