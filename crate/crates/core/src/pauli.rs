//! Phase-free n-qubit Pauli operators in binary symplectic form.

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use crate::error::{check_len, Error, Result};
use crate::gf2::BitVec;

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// `(x, z)` bit pair.
    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Position in the `(I, X, Y, Z)` ordering used by Bell-diagonal vectors.
    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Pauli {
        Pauli::ALL[i]
    }

    /// Phase-free product.
    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Pauli) -> Pauli {
        let (ax, az) = self.bits();
        let (bx, bz) = other.bits();
        Pauli::from_bits(ax ^ bx, az ^ bz)
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// n-qubit Pauli operator with the global phase dropped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
}

impl PauliOperator {
    pub fn identity(num_qubits: usize) -> Self {
        PauliOperator {
            x: BitVec::zeros(num_qubits),
            z: BitVec::zeros(num_qubits),
        }
    }

    pub fn from_bits(x: BitVec, z: BitVec) -> Result<Self> {
        check_len(x.len(), z.len())?;
        Ok(PauliOperator { x, z })
    }

    /// `pauli` on qubit `q`, identity elsewhere.
    pub fn single(num_qubits: usize, q: usize, pauli: Pauli) -> Self {
        let mut p = Self::identity(num_qubits);
        p.set(q, pauli);
        p
    }

    /// X on every qubit in `support`.
    pub fn x_on(num_qubits: usize, support: &BitVec) -> Self {
        assert_eq!(support.len(), num_qubits);
        PauliOperator {
            x: support.clone(),
            z: BitVec::zeros(num_qubits),
        }
    }

    /// Z on every qubit in `support`.
    pub fn z_on(num_qubits: usize, support: &BitVec) -> Self {
        assert_eq!(support.len(), num_qubits);
        PauliOperator {
            x: BitVec::zeros(num_qubits),
            z: support.clone(),
        }
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    #[inline]
    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set(&mut self, q: usize, pauli: Pauli) {
        let (x, z) = pauli.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Phase-free product: XOR of the bit vectors.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        check_len(self.num_qubits(), other.num_qubits())?;
        Ok(PauliOperator {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        })
    }

    /// In-place product; panics on a length mismatch.
    pub fn mul_assign(&mut self, other: &PauliOperator) {
        assert_eq!(self.num_qubits(), other.num_qubits());
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// `true` iff the operators anticommute.
    pub fn symplectic_product(&self, other: &PauliOperator) -> Result<bool> {
        check_len(self.num_qubits(), other.num_qubits())?;
        Ok(self.anticommutes(other))
    }

    #[inline]
    pub(crate) fn anticommutes(&self, other: &PauliOperator) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x.or(&self.z).count_ones()
    }

    /// Tensor product `self ⊗ other`, with `self` on the low qubit indices.
    pub fn tensor(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator {
            x: self.x.concat(&other.x),
            z: self.z.concat(&other.z),
        }
    }

    /// Restriction to qubits `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> PauliOperator {
        PauliOperator {
            x: self.x.slice(start, len),
            z: self.z.slice(start, len),
        }
    }

    pub fn to_label(&self) -> String {
        (0..self.num_qubits()).map(|q| self.get(q).as_char()).collect()
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Parses `"XIZ"`-style strings; the leftmost character is qubit 0.
    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        let mut p = PauliOperator::identity(n);
        for (q, c) in s.chars().enumerate() {
            let pauli = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::Parse(alloc::format!("invalid Pauli character {other:?}"))),
            };
            p.set(q, pauli);
        }
        Ok(p)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_label())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({})", self.to_label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(p("X").multiply(&p("Z")).unwrap(), p("Y"));
        assert!(p("XYZ").multiply(&p("XYZ")).unwrap().is_identity());
        assert_eq!(p("XIZ").multiply(&p("IXZ")).unwrap(), p("XXI"));
    }

    #[test]
    fn symplectic_examples() {
        assert!(p("X").symplectic_product(&p("Z")).unwrap());
        assert!(!p("X").symplectic_product(&p("X")).unwrap());
        assert!(!p("XX").symplectic_product(&p("ZZ")).unwrap());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(PauliOperator::identity(4).weight(), 0);
        assert_eq!(PauliOperator::single(5, 3, Pauli::Y).weight(), 1);
        assert_eq!(p("XIZ").weight(), 2);
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(p("XX").multiply(&p("X")), Err(Error::Dimension { .. })));
        assert!(p("XX").symplectic_product(&p("XXX")).is_err());
    }

    #[test]
    fn text_roundtrip_and_rejects_garbage() {
        assert_eq!(p("IXYZ").to_string(), "IXYZ");
        assert!("XQ".parse::<PauliOperator>().is_err());
    }

    fn arb_triple(n: usize) -> impl Strategy<Value = (PauliOperator, PauliOperator, PauliOperator)> {
        let one = proptest::collection::vec(0usize..4, n)
            .prop_map(|v| {
                let s: String = v.iter().map(|&i| Pauli::from_index(i).as_char()).collect();
                s.parse::<PauliOperator>().unwrap()
            });
        (one.clone(), one.clone(), one)
    }

    proptest! {
        #[test]
        fn group_and_symplectic_laws((a, b, c) in (1usize..90).prop_flat_map(arb_triple)) {
            let ab = a.multiply(&b).unwrap();
            prop_assert_eq!(&ab, &b.multiply(&a).unwrap());
            prop_assert_eq!(ab.multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
            prop_assert_eq!(a.symplectic_product(&b).unwrap(), b.symplectic_product(&a).unwrap());
            prop_assert_eq!(
                ab.symplectic_product(&c).unwrap(),
                a.symplectic_product(&c).unwrap() ^ b.symplectic_product(&c).unwrap()
            );
            prop_assert!(ab.weight() <= a.weight() + b.weight());
        }
    }
}
