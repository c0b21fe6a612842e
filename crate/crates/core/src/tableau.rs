//! Clifford operations as conjugation tableaux.
//!
//! A tableau stores the conjugation images of the `2n` generators
//! `σ_{x_i}`, `σ_{z_i}`: sign-free Pauli images plus separate sign bits.
//! Signs are only ever ±1 because conjugates of Hermitian Paulis stay
//! Hermitian. Tableau equality is exactly equality of the underlying
//! unitaries up to global phase.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gf2;
use crate::gf2pauli::{GeneratorIndex, GeneratorKind, PauliOperator};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    n: usize,
    x_images: Vec<PauliOperator>,
    z_images: Vec<PauliOperator>,
    /// `true` means the sign is -1.
    x_signs: Vec<bool>,
    z_signs: Vec<bool>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        CliffordTableau {
            n,
            x_images: (0..n).map(|q| GeneratorIndex::x(q).to_pauli(n)).collect(),
            z_images: (0..n).map(|q| GeneratorIndex::z(q).to_pauli(n)).collect(),
            x_signs: vec![false; n],
            z_signs: vec![false; n],
        }
    }

    /// Builds a tableau from sign-free images and signs, rejecting inputs
    /// that do not preserve the generator commutation relations.
    pub fn from_images(
        x_images: Vec<PauliOperator>,
        z_images: Vec<PauliOperator>,
        x_signs: Vec<bool>,
        z_signs: Vec<bool>,
    ) -> Result<Self> {
        let n = x_images.len();
        if z_images.len() != n || x_signs.len() != n || z_signs.len() != n {
            return Err(Error::InvalidTableau("field lengths disagree".into()));
        }
        for p in x_images.iter().chain(&z_images) {
            if p.num_qubits() != n {
                return Err(Error::DimensionMismatch { left: p.num_qubits(), right: n });
            }
            if p.phase_exponent() != 0 {
                return Err(Error::InvalidTableau("images must be sign-free".into()));
            }
        }
        let t = CliffordTableau { n, x_images, z_images, x_signs, z_signs };
        if !t.is_valid() {
            return Err(Error::InvalidTableau(
                "images do not preserve the generator commutation relations".into(),
            ));
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> &PauliOperator {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliOperator {
        &self.z_images[q]
    }

    pub fn x_sign(&self, q: usize) -> bool {
        self.x_signs[q]
    }

    pub fn z_sign(&self, q: usize) -> bool {
        self.z_signs[q]
    }

    fn image_ref(&self, g: GeneratorIndex) -> (&PauliOperator, bool) {
        match g.kind {
            GeneratorKind::X => (&self.x_images[g.qubit], self.x_signs[g.qubit]),
            GeneratorKind::Z => (&self.z_images[g.qubit], self.z_signs[g.qubit]),
        }
    }

    /// Image of a generator with its sign folded into the phase (0 or 2).
    pub fn signed_image(&self, g: GeneratorIndex) -> PauliOperator {
        let (image, sign) = self.image_ref(g);
        image.with_phase(if sign { 2 } else { 0 })
    }

    /// Checks symplectic validity: images must reproduce the generator
    /// commutation relations exactly.
    pub fn is_valid(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                if self.x_images[i].symplectic_product(&self.x_images[j]) != 0 {
                    return false;
                }
                if self.z_images[i].symplectic_product(&self.z_images[j]) != 0 {
                    return false;
                }
                let expect = u8::from(i == j);
                if self.x_images[i].symplectic_product(&self.z_images[j]) != expect {
                    return false;
                }
            }
        }
        true
    }

    /// `C σ_p C†`, phase included, via generator decomposition.
    pub fn conjugate_pauli(&self, p: &PauliOperator) -> Result<PauliOperator> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: p.num_qubits() });
        }
        let (gens, alpha) = p.decompose_into_generators();
        let mut acc = PauliOperator::identity(self.n).with_phase(alpha);
        for g in gens {
            acc = acc.mul(&self.signed_image(g))?;
        }
        Ok(acc)
    }

    /// Tableau of the product `self ∘ other` (apply `other`, then `self`).
    pub fn compose(&self, other: &CliffordTableau) -> Result<CliffordTableau> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let mut x_images = Vec::with_capacity(self.n);
        let mut z_images = Vec::with_capacity(self.n);
        let mut x_signs = Vec::with_capacity(self.n);
        let mut z_signs = Vec::with_capacity(self.n);
        for q in 0..self.n {
            let p = self.conjugate_pauli(&other.signed_image(GeneratorIndex::x(q)))?;
            debug_assert!(p.is_hermitian());
            x_signs.push(p.phase_exponent() == 2);
            x_images.push(p.sign_free());
            let p = self.conjugate_pauli(&other.signed_image(GeneratorIndex::z(q)))?;
            debug_assert!(p.is_hermitian());
            z_signs.push(p.phase_exponent() == 2);
            z_images.push(p.sign_free());
        }
        Ok(CliffordTableau { n: self.n, x_images, z_images, x_signs, z_signs })
    }

    fn coords_bit(p: &PauliOperator, pos: usize, n: usize) -> bool {
        if pos < n {
            p.x_bit(pos)
        } else {
            p.z_bit(pos - n)
        }
    }

    fn image_by_linear(&self, idx: usize) -> &PauliOperator {
        if idx < self.n {
            &self.x_images[idx]
        } else {
            &self.z_images[idx - self.n]
        }
    }

    /// Tableau of the inverse Clifford: the symplectic adjoint for the
    /// sign-free part, with signs recovered by pushing each candidate image
    /// back through `self`.
    pub fn invert(&self) -> CliffordTableau {
        let n = self.n;
        let swap = |pos: usize| (pos + n) % (2 * n);
        let mut inv_images = Vec::with_capacity(2 * n);
        for j in 0..2 * n {
            let mut p = PauliOperator::identity(n);
            for pos in 0..2 * n {
                let bit = Self::coords_bit(self.image_by_linear(swap(pos)), swap(j), n);
                if bit {
                    if pos < n {
                        p.set_x_bit(pos, true);
                    } else {
                        p.set_z_bit(pos - n, true);
                    }
                }
            }
            inv_images.push(p);
        }
        let mut x_signs = Vec::with_capacity(n);
        let mut z_signs = Vec::with_capacity(n);
        for (j, image) in inv_images.iter().enumerate() {
            // C (C† σ_g C) C† = σ_g fixes the sign of the inverse image.
            let w = self.conjugate_pauli(image).expect("dimensions match");
            debug_assert!(w.is_hermitian());
            let sign = w.phase_exponent() == 2;
            if j < n {
                x_signs.push(sign);
            } else {
                z_signs.push(sign);
            }
        }
        let z_images = inv_images.split_off(n);
        CliffordTableau { n, x_images: inv_images, z_images, x_signs, z_signs }
    }

    /// Tableau of conjugation by a Hermitian Pauli: identity images with a
    /// sign flip wherever the Pauli anticommutes with the generator.
    pub fn from_pauli(q: &PauliOperator) -> Result<CliffordTableau> {
        if !q.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let n = q.num_qubits();
        let mut t = CliffordTableau::identity(n);
        for i in 0..n {
            t.x_signs[i] = q.z_bit(i);
            t.z_signs[i] = q.x_bit(i);
        }
        Ok(t)
    }

    /// Conjugates every image by the gate (i.e. left-multiplies the tableau's
    /// Clifford by the gate).
    pub fn apply_gate(&mut self, gate: Gate) {
        for q in 0..self.n {
            conj_by_gate(&mut self.x_images[q], &mut self.x_signs[q], gate);
            conj_by_gate(&mut self.z_images[q], &mut self.z_signs[q], gate);
        }
    }

    /// Exact circuit over `{H, S, CNOT}` whose tableau equals `self`,
    /// signs included. Gaussian elimination sweep, `O(n²)` gates.
    pub fn synthesize_circuit(&self) -> Result<CliffordCircuit> {
        if !self.is_valid() {
            return Err(Error::InvalidTableau(
                "cannot synthesize a non-symplectic tableau".into(),
            ));
        }
        let n = self.n;
        let mut t = self.clone();
        let mut ops: Vec<Gate> = Vec::new();
        let push = |t: &mut CliffordTableau, ops: &mut Vec<Gate>, g: Gate| {
            t.apply_gate(g);
            ops.push(g);
        };

        for i in 0..n {
            // X row: bring a pivot to column i.
            if !(i..n).any(|j| t.x_images[i].x_bit(j)) {
                let j = (i..n)
                    .find(|&j| t.x_images[i].z_bit(j))
                    .expect("row has support on the remaining columns");
                push(&mut t, &mut ops, Gate::H(j));
            }
            let j = (i..n).find(|&j| t.x_images[i].x_bit(j)).unwrap();
            if j != i {
                push(&mut t, &mut ops, Gate::Cnot(i, j));
                push(&mut t, &mut ops, Gate::Cnot(j, i));
                push(&mut t, &mut ops, Gate::Cnot(i, j));
            }
            for j in i + 1..n {
                if t.x_images[i].x_bit(j) {
                    push(&mut t, &mut ops, Gate::Cnot(i, j));
                }
            }
            // Clear the Z part of the X row.
            if (i + 1..n).any(|j| t.x_images[i].z_bit(j)) {
                if !t.x_images[i].z_bit(i) {
                    push(&mut t, &mut ops, Gate::S(i));
                }
                for j in i + 1..n {
                    if t.x_images[i].z_bit(j) {
                        push(&mut t, &mut ops, Gate::Cnot(j, i));
                    }
                }
                push(&mut t, &mut ops, Gate::S(i));
            } else if t.x_images[i].z_bit(i) {
                push(&mut t, &mut ops, Gate::S(i));
            }
            debug_assert_eq!(t.x_images[i].sign_free(), GeneratorIndex::x(i).to_pauli(n));

            // Z row: reduce to Z_i using only gates that fix X_i.
            for j in i + 1..n {
                if t.z_images[i].x_bit(j) {
                    if t.z_images[i].z_bit(j) {
                        push(&mut t, &mut ops, Gate::S(j));
                    }
                    push(&mut t, &mut ops, Gate::H(j));
                }
            }
            for j in i + 1..n {
                if t.z_images[i].z_bit(j) {
                    push(&mut t, &mut ops, Gate::Cnot(j, i));
                }
            }
            if t.z_images[i].x_bit(i) {
                push(&mut t, &mut ops, Gate::S(i));
                push(&mut t, &mut ops, Gate::H(i));
                push(&mut t, &mut ops, Gate::S(i));
            }
            debug_assert_eq!(t.z_images[i].sign_free(), GeneratorIndex::z(i).to_pauli(n));
        }
        // Sign-fix layer: Z_q = S², X_q = H S² H.
        for q in 0..n {
            if t.x_signs[q] {
                push(&mut t, &mut ops, Gate::S(q));
                push(&mut t, &mut ops, Gate::S(q));
            }
            if t.z_signs[q] {
                push(&mut t, &mut ops, Gate::H(q));
                push(&mut t, &mut ops, Gate::S(q));
                push(&mut t, &mut ops, Gate::S(q));
                push(&mut t, &mut ops, Gate::H(q));
            }
        }
        debug_assert_eq!(t, CliffordTableau::identity(n));

        // ops · C = I, hence C = ops_1† ... ops_m† applied in reverse order.
        let mut gates = Vec::new();
        for g in ops.into_iter().rev() {
            match g {
                Gate::H(q) => gates.push(Gate::H(q)),
                Gate::Cnot(c, tq) => gates.push(Gate::Cnot(c, tq)),
                Gate::S(q) => {
                    gates.push(Gate::S(q));
                    gates.push(Gate::S(q));
                    gates.push(Gate::S(q));
                }
            }
        }
        Ok(CliffordCircuit { n, gates })
    }
}

impl fmt::Debug for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CliffordTableau(n={})", self.n)?;
        for q in 0..self.n {
            writeln!(
                f,
                "  X{} -> {}{}",
                q,
                if self.x_signs[q] { "-" } else { "+" },
                format!("{}", self.x_images[q]).trim_start_matches('+')
            )?;
        }
        for q in 0..self.n {
            writeln!(
                f,
                "  Z{} -> {}{}",
                q,
                if self.z_signs[q] { "-" } else { "+" },
                format!("{}", self.z_images[q]).trim_start_matches('+')
            )?;
        }
        Ok(())
    }
}

/// Conjugation of one Hermitian Pauli row by a single gate, with sign update.
fn conj_by_gate(p: &mut PauliOperator, sign: &mut bool, gate: Gate) {
    match gate {
        Gate::H(q) => {
            let x = p.x_bit(q);
            let z = p.z_bit(q);
            *sign ^= x & z;
            p.set_x_bit(q, z);
            p.set_z_bit(q, x);
        }
        Gate::S(q) => {
            let x = p.x_bit(q);
            let z = p.z_bit(q);
            *sign ^= x & z;
            p.set_z_bit(q, z ^ x);
        }
        Gate::Cnot(c, t) => {
            let xc = p.x_bit(c);
            let zc = p.z_bit(c);
            let xt = p.x_bit(t);
            let zt = p.z_bit(t);
            *sign ^= xc & zt & !(xt ^ zc);
            p.set_x_bit(t, xt ^ xc);
            p.set_z_bit(c, zc ^ zt);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot(usize, usize),
}

/// An ordered list of `{H, S, CNOT}` gates; the first gate acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCircuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn empty(n: usize) -> Self {
        CliffordCircuit { n, gates: Vec::new() }
    }

    pub fn to_tableau(&self) -> CliffordTableau {
        let mut t = CliffordTableau::identity(self.n);
        for &g in &self.gates {
            t.apply_gate(g);
        }
        t
    }
}

impl fmt::Display for CliffordCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            match g {
                Gate::H(q) => writeln!(f, "H {q}")?,
                Gate::S(q) => writeln!(f, "S {q}")?,
                Gate::Cnot(c, t) => writeln!(f, "CNOT {c} {t}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for CliffordCircuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut gates = Vec::new();
        let mut max_qubit = 0usize;
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let op = parts.next().unwrap();
            let mut arg = || -> Result<usize> {
                parts
                    .next()
                    .ok_or_else(|| Error::Parse {
                        pos: lineno,
                        msg: format!("missing qubit argument in '{line}'"),
                    })?
                    .parse()
                    .map_err(|_| Error::Parse {
                        pos: lineno,
                        msg: format!("bad qubit index in '{line}'"),
                    })
            };
            let gate = match op {
                "H" => Gate::H(arg()?),
                "S" => Gate::S(arg()?),
                "CNOT" => Gate::Cnot(arg()?, arg()?),
                _ => {
                    return Err(Error::Parse {
                        pos: lineno,
                        msg: format!("unknown gate '{op}'"),
                    })
                }
            };
            match gate {
                Gate::H(q) | Gate::S(q) => max_qubit = max_qubit.max(q),
                Gate::Cnot(c, t) => max_qubit = max_qubit.max(c).max(t),
            }
            gates.push(gate);
        }
        Ok(CliffordCircuit { n: max_qubit + 1, gates })
    }
}

/// Uniformly random Clifford tableau (mod phase), deterministic in the seed.
pub fn random_clifford(n: usize, seed: u64) -> CliffordTableau {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_clifford_with_rng(n, &mut rng)
}

/// Row-by-row uniform sampling of a symplectic basis: each generator image is
/// drawn uniformly from the affine subspace fixed by the commutation
/// constraints with all previously chosen images, then signs are uniform.
pub fn random_clifford_with_rng(n: usize, rng: &mut impl Rng) -> CliffordTableau {
    assert!(n >= 1);
    let width = 2 * n;
    let words = gf2::words_for(width);
    let swap_halves = |v: &[u64]| -> Vec<u64> {
        let mut w = vec![0u64; words];
        for pos in 0..width {
            if gf2::bit_get(v, (pos + n) % width) {
                gf2::bit_set(&mut w, pos, true);
            }
        }
        w
    };

    let mut chosen: Vec<Vec<u64>> = Vec::new(); // a_0, b_0, a_1, b_1, ...
    for _ in 0..n {
        // a_i: commutes with everything chosen so far, nonzero.
        let rows: Vec<Vec<u64>> = chosen.iter().map(|u| swap_halves(u)).collect();
        let rhs = vec![false; rows.len()];
        let sol = gf2::solve_affine(&rows, &rhs, width).expect("homogeneous system");
        let a = loop {
            let v = gf2::sample_solution(&sol, rng);
            if v.iter().any(|&w| w != 0) {
                break v;
            }
        };
        // b_i: commutes with everything previous, anticommutes with a_i.
        let mut rows: Vec<Vec<u64>> = chosen.iter().map(|u| swap_halves(u)).collect();
        let mut rhs = vec![false; rows.len()];
        rows.push(swap_halves(&a));
        rhs.push(true);
        let sol = gf2::solve_affine(&rows, &rhs, width).expect("a_i is nonzero");
        let b = gf2::sample_solution(&sol, rng);
        chosen.push(a);
        chosen.push(b);
    }

    let coords_to_pauli = |v: &[u64]| -> PauliOperator {
        let mut p = PauliOperator::identity(n);
        for q in 0..n {
            p.set_x_bit(q, gf2::bit_get(v, q));
            p.set_z_bit(q, gf2::bit_get(v, n + q));
        }
        p
    };
    let x_images: Vec<_> = (0..n).map(|i| coords_to_pauli(&chosen[2 * i])).collect();
    let z_images: Vec<_> = (0..n).map(|i| coords_to_pauli(&chosen[2 * i + 1])).collect();
    let x_signs: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let z_signs: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    CliffordTableau { n, x_images, z_images, x_signs, z_signs }
}

/// Size of the Clifford group modulo global phase:
/// `2^{n²+2n+3} ∏_{j=1}^n (4^j − 1)`.
pub fn clifford_group_size(n: usize) -> BigUint {
    let mut size = BigUint::from(1u8) << (n * n + 2 * n + 3);
    for j in 1..=n {
        size *= (BigUint::from(1u8) << (2 * j)) - 1u8;
    }
    size
}

/// Number of distinct tableaux (symplectic matrices with sign bits):
/// `2^{n²+2n} ∏_{j=1}^n (4^j − 1)`.
pub fn tableau_class_count(n: usize) -> BigUint {
    let mut size = BigUint::from(1u8) << (n * n + 2 * n);
    for j in 1..=n {
        size *= (BigUint::from(1u8) << (2 * j)) - 1u8;
    }
    size
}

/// Smallest `m` with `2^{2nm} ≥ |C|`; always at least `n`.
pub fn query_lower_bound(n: usize) -> u64 {
    let size = clifford_group_size(n);
    let mut m = 1u64;
    loop {
        if (BigUint::from(1u8) << (2 * n as u64 * m) as usize) >= size {
            return m;
        }
        m += 1;
    }
}

// ---------------------------------------------------------------------------
// JSON form: {"n": int, "x_images": [...], "z_images": [...],
//             "x_signs": [+1|-1...], "z_signs": [...]}
// ---------------------------------------------------------------------------

#[derive(serde::Serialize, serde::Deserialize)]
struct TableauJson {
    n: usize,
    x_images: Vec<String>,
    z_images: Vec<String>,
    x_signs: Vec<i8>,
    z_signs: Vec<i8>,
}

impl serde::Serialize for CliffordTableau {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strip = |p: &PauliOperator| p.to_string().trim_start_matches('+').to_string();
        TableauJson {
            n: self.n,
            x_images: self.x_images.iter().map(strip).collect(),
            z_images: self.z_images.iter().map(strip).collect(),
            x_signs: self.x_signs.iter().map(|&s| if s { -1 } else { 1 }).collect(),
            z_signs: self.z_signs.iter().map(|&s| if s { -1 } else { 1 }).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> serde::Deserialize<'de> for CliffordTableau {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TableauJson::deserialize(deserializer)?;
        let parse = |s: &String| -> std::result::Result<PauliOperator, D::Error> {
            format!("+{s}").parse().map_err(D::Error::custom)
        };
        let x_images = raw.x_images.iter().map(parse).collect::<std::result::Result<_, _>>()?;
        let z_images = raw.z_images.iter().map(parse).collect::<std::result::Result<_, _>>()?;
        let sign = |v: &i8| *v < 0;
        CliffordTableau::from_images(
            x_images,
            z_images,
            raw.x_signs.iter().map(sign).collect(),
            raw.z_signs.iter().map(sign).collect(),
        )
        .map_err(D::Error::custom)
    }
}
