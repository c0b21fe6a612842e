//! Exact n-qubit Pauli algebra over the symplectic GF(2) representation.
//!
//! A Pauli is stored as two bit vectors (x-part, z-part) plus a phase that is
//! an exponent of `i`. The sign-free part (phase exponent 0) is the literal
//! tensor product of the letters `I, X, Y, Z`: qubit `j` carries `I` for
//! `(x,z) = (0,0)`, `X` for `(1,0)`, `Y` for `(1,1)` and `Z` for `(0,1)`.
//! Under this convention the letter tensor is Hermitian, so an operator is
//! Hermitian exactly when its phase exponent is even.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

const WORD_BITS: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// One of the `2n` Pauli generators `σ_{x_i}`, `σ_{z_i}`.
///
/// The enumeration order is fixed: all X-type generators in ascending qubit
/// order, then all Z-type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct GeneratorIndex {
    pub kind: GeneratorKind,
    pub qubit: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum GeneratorKind {
    X,
    Z,
}

impl GeneratorIndex {
    pub fn x(qubit: usize) -> Self {
        GeneratorIndex { kind: GeneratorKind::X, qubit }
    }

    pub fn z(qubit: usize) -> Self {
        GeneratorIndex { kind: GeneratorKind::Z, qubit }
    }

    /// All `2n` generators in the fixed enumeration order.
    pub fn all(n: usize) -> Vec<GeneratorIndex> {
        (0..n)
            .map(GeneratorIndex::x)
            .chain((0..n).map(GeneratorIndex::z))
            .collect()
    }

    /// Position in the fixed enumeration order, in `[0, 2n)`.
    pub fn linear_index(&self, n: usize) -> usize {
        match self.kind {
            GeneratorKind::X => self.qubit,
            GeneratorKind::Z => n + self.qubit,
        }
    }

    pub fn to_pauli(&self, n: usize) -> PauliOperator {
        let mut p = PauliOperator::identity(n);
        match self.kind {
            GeneratorKind::X => p.set_x_bit(self.qubit, true),
            GeneratorKind::Z => p.set_z_bit(self.qubit, true),
        }
        p
    }
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GeneratorKind::X => write!(f, "X@{}", self.qubit),
            GeneratorKind::Z => write!(f, "Z@{}", self.qubit),
        }
    }
}

/// An n-qubit Pauli operator with phase in `{+1, +i, -1, -i}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x_bits: Vec<u64>,
    z_bits: Vec<u64>,
    /// Exponent of `i`, in `{0, 1, 2, 3}`.
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            n,
            x_bits: vec![0; words_for(n)],
            z_bits: vec![0; words_for(n)],
            phase: 0,
        }
    }

    /// Builds a Pauli from explicit per-qubit bits and a phase exponent.
    pub fn from_bits(n: usize, x: &[bool], z: &[bool], phase: u8) -> Self {
        assert_eq!(x.len(), n);
        assert_eq!(z.len(), n);
        let mut p = PauliOperator::identity(n);
        for q in 0..n {
            p.set_x_bit(q, x[q]);
            p.set_z_bit(q, z[q]);
        }
        p.phase = phase & 3;
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Phase exponent of `i`, in `{0, 1, 2, 3}`.
    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        let mut p = self.clone();
        p.phase = phase & 3;
        p
    }

    /// The sign-free part: the same letters with phase `+1`.
    pub fn sign_free(&self) -> Self {
        self.with_phase(0)
    }

    pub fn multiply_phase(&mut self, exponent: u8) {
        self.phase = (self.phase + exponent) & 3;
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x_bits[q / WORD_BITS] >> (q % WORD_BITS) & 1 != 0
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z_bits[q / WORD_BITS] >> (q % WORD_BITS) & 1 != 0
    }

    pub fn set_x_bit(&mut self, q: usize, value: bool) {
        let mask = 1u64 << (q % WORD_BITS);
        if value {
            self.x_bits[q / WORD_BITS] |= mask;
        } else {
            self.x_bits[q / WORD_BITS] &= !mask;
        }
    }

    pub fn set_z_bit(&mut self, q: usize, value: bool) {
        let mask = 1u64 << (q % WORD_BITS);
        if value {
            self.z_bits[q / WORD_BITS] |= mask;
        } else {
            self.z_bits[q / WORD_BITS] &= !mask;
        }
    }

    pub fn is_identity_letters(&self) -> bool {
        self.x_bits.iter().all(|&w| w == 0) && self.z_bits.iter().all(|&w| w == 0)
    }

    /// Number of qubits carrying the letter `Y`.
    pub fn y_count(&self) -> u32 {
        self.x_bits
            .iter()
            .zip(&self.z_bits)
            .map(|(&x, &z)| (x & z).count_ones())
            .sum()
    }

    /// Hermitian iff the phase is `+1` or `-1` (the letter tensor itself is
    /// Hermitian under the letter convention).
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    fn check_same_n(&self, other: &PauliOperator) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Exact group product `self · other`, phase included.
    pub fn mul(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_same_n(other)?;
        let words = self.x_bits.len();
        let mut x = vec![0u64; words];
        let mut z = vec![0u64; words];
        // value = i^phase * T(letters) with T = i^{y} X^x Z^z, so
        //   a*b = i^{pa+pb+ya+yb+2*|za&xb|} X^{xa^xb} Z^{za^zb}
        // and converting back to letter form subtracts the new y count.
        let mut reorder: u32 = 0;
        for w in 0..words {
            x[w] = self.x_bits[w] ^ other.x_bits[w];
            z[w] = self.z_bits[w] ^ other.z_bits[w];
            reorder += (self.z_bits[w] & other.x_bits[w]).count_ones();
        }
        let ya = self.y_count();
        let yb = other.y_count();
        let yc: u32 = x.iter().zip(&z).map(|(&a, &b)| (a & b).count_ones()).sum();
        let exponent = (self.phase as u32 + other.phase as u32 + ya + yb + 2 * reorder + 4 * yc
            - yc) // written as +4yc-yc to stay non-negative before the mod
            % 4;
        Ok(PauliOperator { n: self.n, x_bits: x, z_bits: z, phase: exponent as u8 })
    }

    /// True iff `self · other == other · self`, via the symplectic inner
    /// product.
    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_same_n(other)?;
        Ok(self.symplectic_product(other) == 0)
    }

    /// Symplectic inner product `x_a·z_b + z_a·x_b mod 2`; `1` means the
    /// operators anticommute.
    pub fn symplectic_product(&self, other: &PauliOperator) -> u8 {
        let mut acc: u32 = 0;
        for w in 0..self.x_bits.len() {
            acc += (self.x_bits[w] & other.z_bits[w]).count_ones();
            acc += (self.z_bits[w] & other.x_bits[w]).count_ones();
        }
        (acc % 2) as u8
    }

    /// Ordered generator decomposition: `self = α · σ_{g_1} ... σ_{g_m}` with
    /// all X-type factors first (ascending), then all Z-type (ascending).
    /// Returns the generator list and the phase exponent of `α`.
    pub fn decompose_into_generators(&self) -> (Vec<GeneratorIndex>, u8) {
        let mut gens = Vec::new();
        for q in 0..self.n {
            if self.x_bit(q) {
                gens.push(GeneratorIndex::x(q));
            }
        }
        for q in 0..self.n {
            if self.z_bit(q) {
                gens.push(GeneratorIndex::z(q));
            }
        }
        // X^x Z^z = i^{-y} T(letters), hence alpha = i^{phase + y}.
        let alpha = ((self.phase as u32 + self.y_count()) % 4) as u8;
        (gens, alpha)
    }

    /// Per-qubit letter code: 0 = I, 1 = X, 2 = Y, 3 = Z.
    pub fn letter(&self, q: usize) -> u8 {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => 0,
            (true, false) => 1,
            (true, true) => 2,
            (false, true) => 3,
        }
    }

    pub fn set_letter(&mut self, q: usize, code: u8) {
        let (x, z) = match code {
            0 => (false, false),
            1 => (true, false),
            2 => (true, true),
            3 => (false, true),
            _ => panic!("letter code out of range"),
        };
        self.set_x_bit(q, x);
        self.set_z_bit(q, z);
    }

    /// Index of the sign-free label in `[0, 4^n)`, qubit 0 most significant.
    pub fn label_index(&self) -> usize {
        let mut idx = 0usize;
        for q in 0..self.n {
            idx = idx * 4 + self.letter(q) as usize;
        }
        idx
    }

    pub fn from_label_index(n: usize, mut idx: usize) -> Self {
        let mut p = PauliOperator::identity(n);
        for q in (0..n).rev() {
            p.set_letter(q, (idx % 4) as u8);
            idx /= 4;
        }
        p
    }

    /// Lexicographic order on the letter string (I < X < Y < Z), then phase.
    pub fn label_cmp(&self, other: &PauliOperator) -> Ordering {
        for q in 0..self.n.min(other.n) {
            match self.letter(q).cmp(&other.letter(q)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.n.cmp(&other.n).then(self.phase.cmp(&other.phase))
    }

    fn phase_str(&self) -> &'static str {
        match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            3 => "-i",
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase_str())?;
        for q in 0..self.n {
            write!(f, "{}", ['I', 'X', 'Y', 'Z'][self.letter(q) as usize])?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Parses the text form `[+-](i)?[IXYZ]+`.
    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let sign = match bytes.first() {
            Some(b'+') => 0u8,
            Some(b'-') => 2u8,
            _ => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "expected leading '+' or '-'".into(),
                })
            }
        };
        let mut pos = 1;
        let imaginary = bytes.get(pos) == Some(&b'i');
        if imaginary {
            pos += 1;
        }
        let phase = (sign + if imaginary { 1 } else { 0 }) & 3;
        let letters = &bytes[pos..];
        if letters.is_empty() {
            return Err(Error::Parse { pos, msg: "expected at least one letter".into() });
        }
        let mut p = PauliOperator::identity(letters.len());
        p.phase = phase;
        for (q, &b) in letters.iter().enumerate() {
            let code = match b {
                b'I' => 0,
                b'X' => 1,
                b'Y' => 2,
                b'Z' => 3,
                _ => {
                    return Err(Error::Parse {
                        pos: pos + q,
                        msg: format!("unexpected character '{}'", b as char),
                    })
                }
            };
            p.set_letter(q, code);
        }
        Ok(p)
    }
}

/// Convenience parser used throughout the crate and the CLI.
pub fn parse_pauli(s: &str) -> Result<PauliOperator> {
    s.parse()
}

pub fn format_pauli(p: &PauliOperator) -> String {
    p.to_string()
}

impl serde::Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for PauliOperator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
