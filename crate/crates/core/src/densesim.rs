//! Faithful small-n dense simulation: unitaries, Pauli coefficient tables,
//! the maximally entangled state and Bell-basis measurement sampling.
//!
//! Qubit 0 is the most significant bit of the computational-basis index, so
//! tensor products read left to right like Pauli strings.

use num_complex::Complex64;
use rand::Rng;

use crate::gf2pauli::PauliOperator;
use crate::tableau::{CliffordCircuit, Gate};
use crate::{Error, Result, DEFAULT_DENSE_LIMIT};

pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Dense square complex matrix, row major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let mut m = Matrix::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim);
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&other.data) {
            *o += v;
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&other.data) {
            *o -= v;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Matrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn dagger(&self) -> Matrix {
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm `sqrt(tr A†A)`.
    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Kronecker product; `self` is the more significant factor.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let da = self.dim;
        let db = other.dim;
        let mut out = Matrix::zeros(da * db);
        for i1 in 0..da {
            for j1 in 0..da {
                let a = self[(i1, j1)];
                if a == ZERO {
                    continue;
                }
                for i2 in 0..db {
                    for j2 in 0..db {
                        out[(i1 * db + i2, j1 * db + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    pub fn conj_elementwise(&self) -> Matrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = v.conj();
        }
        out
    }

    /// Applies the matrix to a state vector.
    pub fn apply(&self, state: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(state.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * state[j]).sum())
            .collect()
    }

    fn is_unitary(&self, tol: f64) -> bool {
        self.dagger().mul(self).max_abs_diff(&Matrix::identity(self.dim)) <= tol
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self[(i, j)];
                write!(f, " {:+.4}{:+.4}i", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A dense unitary on `n` qubits; unitarity is checked on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary {
    n: usize,
    mat: Matrix,
}

impl DenseUnitary {
    pub const UNITARITY_TOL: f64 = 1e-9;

    pub fn new(n: usize, mat: Matrix) -> Result<Self> {
        if mat.dim() != 1 << n {
            return Err(Error::DimensionMismatch { left: mat.dim(), right: 1 << n });
        }
        if !mat.is_unitary(Self::UNITARITY_TOL) {
            return Err(Error::NumericalInconsistency(
                "matrix fails the unitarity check".into(),
            ));
        }
        Ok(DenseUnitary { n, mat })
    }

    pub fn identity(n: usize) -> Self {
        DenseUnitary { n, mat: Matrix::identity(1 << n) }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn mul(&self, other: &DenseUnitary) -> Result<DenseUnitary> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(DenseUnitary { n: self.n, mat: self.mat.mul(&other.mat) })
    }

    pub fn dagger(&self) -> DenseUnitary {
        DenseUnitary { n: self.n, mat: self.mat.dagger() }
    }

    pub fn kron(&self, other: &DenseUnitary) -> DenseUnitary {
        DenseUnitary { n: self.n + other.n, mat: self.mat.kron(&other.mat) }
    }

    pub fn scale_phase(&self, theta: f64) -> DenseUnitary {
        DenseUnitary { n: self.n, mat: self.mat.scale(Complex64::from_polar(1.0, theta)) }
    }

    /// Multiplies by the phase that makes the largest-modulus entry real
    /// positive.
    pub fn phase_normalized(&self) -> DenseUnitary {
        let d = self.dim();
        let mut best = ZERO;
        for i in 0..d {
            for j in 0..d {
                if self.mat[(i, j)].norm() > best.norm() {
                    best = self.mat[(i, j)];
                }
            }
        }
        let phase = best / best.norm();
        DenseUnitary { n: self.n, mat: self.mat.scale(phase.conj()) }
    }
}

impl PauliOperator {
    /// Exact dense matrix, phase included. `n` must not exceed the limit.
    pub fn to_dense_with_limit(&self, limit: usize) -> Result<DenseUnitary> {
        let n = self.num_qubits();
        if n > limit {
            return Err(Error::DenseLimitExceeded { n, limit });
        }
        let d = 1usize << n;
        let (xmask, zmask) = self.dense_masks();
        let phase = I.powu(self.phase_exponent() as u32);
        let mut mat = Matrix::zeros(d);
        for r in 0..d {
            let c = r ^ xmask;
            mat[(r, c)] = phase * pauli_entry(self, r);
        }
        let _ = zmask;
        Ok(DenseUnitary { n, mat })
    }

    pub fn to_dense(&self) -> Result<DenseUnitary> {
        self.to_dense_with_limit(DEFAULT_DENSE_LIMIT)
    }

    /// Bit masks in dense index order (qubit 0 = most significant bit).
    fn dense_masks(&self) -> (usize, usize) {
        let n = self.num_qubits();
        let mut xmask = 0usize;
        let mut zmask = 0usize;
        for q in 0..n {
            let bit = 1usize << (n - 1 - q);
            if self.x_bit(q) {
                xmask |= bit;
            }
            if self.z_bit(q) {
                zmask |= bit;
            }
        }
        (xmask, zmask)
    }
}

/// Entry of the sign-free letter tensor at row `r` (its unique nonzero
/// column is `r ^ xmask`): `(-i)^{#Y} (-1)^{|r & zmask|}`.
fn pauli_entry(p: &PauliOperator, r: usize) -> Complex64 {
    let (_, zmask) = p.dense_masks();
    let y = p.y_count();
    let sign = if (r & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
    let minus_i_pow = match y % 4 {
        0 => ONE,
        1 => -I,
        2 => -ONE,
        _ => I,
    };
    minus_i_pow * sign
}

/// `tr(σ_p U)` by the sparsity of `σ_p`, in `O(2^n)`.
pub fn trace_pauli(p: &PauliOperator, u: &Matrix) -> Complex64 {
    let n = p.num_qubits();
    let d = 1usize << n;
    assert_eq!(u.dim(), d);
    let (xmask, _) = p.dense_masks();
    let phase = I.powu(p.phase_exponent() as u32);
    let mut acc = ZERO;
    for r in 0..d {
        // (σ_p U) diagonal entry r = σ_p[r, r^x] * U[r^x, r]
        acc += pauli_entry(p, r) * u[(r ^ xmask, r)];
    }
    phase * acc
}

/// Pauli-basis coefficients `γ(p) = tr(σ_p U) / 2^n` over the sign-free
/// Paulis, indexed by [`PauliOperator::label_index`].
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    n: usize,
    gamma: Vec<Complex64>,
}

impl CoefficientTable {
    pub const PARSEVAL_TOL: f64 = 1e-9;

    /// Coefficients of an arbitrary matrix (no normalization check).
    pub fn of_matrix(n: usize, m: &Matrix) -> Self {
        let d = 1usize << n;
        assert_eq!(m.dim(), d);
        let gamma = (0..4usize.pow(n as u32))
            .map(|idx| trace_pauli(&PauliOperator::from_label_index(n, idx), m) / d as f64)
            .collect();
        CoefficientTable { n, gamma }
    }

    /// Coefficients of a unitary; checks Parseval `Σ|γ|² = 1`.
    pub fn of_unitary(u: &DenseUnitary) -> Result<Self> {
        let table = Self::of_matrix(u.num_qubits(), u.matrix());
        let total: f64 = table.gamma.iter().map(|g| g.norm_sqr()).sum();
        if (total - 1.0).abs() > Self::PARSEVAL_TOL {
            return Err(Error::NumericalInconsistency(format!(
                "coefficient table norm {total} deviates from 1"
            )));
        }
        Ok(table)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gamma(&self, p: &PauliOperator) -> Complex64 {
        self.gamma[p.label_index()]
    }

    pub fn gamma_by_index(&self, idx: usize) -> Complex64 {
        self.gamma[idx]
    }

    /// Reconstructs `Σ_p γ(p) σ_p`.
    pub fn reconstruct(&self) -> Matrix {
        let d = 1usize << self.n;
        let mut m = Matrix::zeros(d);
        for (idx, &g) in self.gamma.iter().enumerate() {
            if g == ZERO {
                continue;
            }
            let p = PauliOperator::from_label_index(self.n, idx);
            let dense = p.to_dense_with_limit(self.n).expect("within limit");
            m = m.add(&dense.matrix().scale(g));
        }
        m
    }

    /// Bell-measurement outcome distribution `|γ(p)|²` as a sampler.
    pub fn sampler(&self) -> LabelSampler {
        let mut cdf = Vec::with_capacity(self.gamma.len());
        let mut acc = 0.0;
        for g in &self.gamma {
            acc += g.norm_sqr();
            cdf.push(acc);
        }
        LabelSampler { n: self.n, cdf }
    }
}

/// Inverse-CDF sampler over Pauli labels.
#[derive(Clone, Debug)]
pub struct LabelSampler {
    n: usize,
    cdf: Vec<f64>,
}

impl LabelSampler {
    pub fn sample_index(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cdf.last().unwrap();
        let u: f64 = rng.gen::<f64>() * total;
        self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1)
    }

    pub fn sample(&self, rng: &mut impl Rng) -> PauliOperator {
        PauliOperator::from_label_index(self.n, self.sample_index(rng))
    }

    /// Probability of the given label.
    pub fn probability(&self, idx: usize) -> f64 {
        let prev = if idx == 0 { 0.0 } else { self.cdf[idx - 1] };
        self.cdf[idx] - prev
    }
}

/// One Bell-sampling round of `u`: label `p` with probability `|γ(p)|²`.
pub fn bell_sample(u: &DenseUnitary, rng: &mut impl Rng) -> Result<PauliOperator> {
    Ok(CoefficientTable::of_unitary(u)?.sampler().sample(rng))
}

/// The maximally entangled state `2^{-n/2} Σ_i |ii⟩` on `2n` qubits.
pub fn bell_state(n: usize) -> Result<Vec<Complex64>> {
    if n > DEFAULT_DENSE_LIMIT {
        return Err(Error::DenseLimitExceeded { n, limit: DEFAULT_DENSE_LIMIT });
    }
    let d = 1usize << n;
    let amp = ONE / (d as f64).sqrt();
    let mut state = vec![ZERO; d * d];
    for i in 0..d {
        state[i * d + i] = amp;
    }
    Ok(state)
}

/// `exp(i η K)` for Hermitian `K`, by scaling-and-squaring on the Taylor
/// series of the skew-Hermitian exponent.
pub fn exp_i_hermitian(k: &Matrix, eta: f64) -> Matrix {
    let d = k.dim();
    let a = k.scale(Complex64::new(0.0, eta));
    let norm = a.norm2();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a.scale(Complex64::new(1.0 / 2f64.powi(squarings as i32), 0.0));
    let mut result = Matrix::identity(d);
    let mut term = Matrix::identity(d);
    for j in 1..=24 {
        term = term.mul(&scaled).scale(Complex64::new(1.0 / j as f64, 0.0));
        result = result.add(&term);
        if term.norm2() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.mul(&result);
    }
    result
}

/// Nullspace basis of the complex system `rows · v = 0` with `cols`
/// unknowns, by Gaussian elimination with partial pivoting.
pub fn nullspace(mut rows: Vec<Vec<Complex64>>, cols: usize, tol: f64) -> Vec<Vec<Complex64>> {
    let m = rows.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot) = (rank..m)
            .filter(|&r| rows[r][col].norm() > tol)
            .max_by(|&a, &b| rows[a][col].norm().total_cmp(&rows[b][col].norm()))
        else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = ONE / rows[rank][col];
        for j in col..cols {
            rows[rank][j] *= inv;
        }
        for r in 0..m {
            if r != rank && rows[r][col].norm() > 0.0 {
                let factor = rows[r][col];
                for j in col..cols {
                    let sub = factor * rows[rank][j];
                    rows[r][j] -= sub;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![ZERO; cols];
        v[free] = ONE;
        for col in 0..cols {
            if let Some(r) = pivot_of_col[col] {
                v[col] = -rows[r][free];
            }
        }
        basis.push(v);
    }
    basis
}

/// Named gates usable as oracle sources and in tests.
pub fn gate_by_name(name: &str) -> Result<DenseUnitary> {
    let h = 1.0 / 2f64.sqrt();
    let mat = match name {
        "I" => Matrix::identity(2),
        "X" => Matrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
        "Y" => Matrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]),
        "Z" => Matrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]),
        "H" => Matrix::from_rows(&[&[ONE * h, ONE * h], &[ONE * h, -ONE * h]]),
        "S" => Matrix::from_rows(&[&[ONE, ZERO], &[ZERO, I]]),
        "T" => Matrix::from_rows(&[&[ONE, ZERO], &[ZERO, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]]),
        "CNOT" => {
            let mut m = Matrix::identity(4);
            m[(2, 2)] = ZERO;
            m[(3, 3)] = ZERO;
            m[(2, 3)] = ONE;
            m[(3, 2)] = ONE;
            m
        }
        "CZ" => {
            let mut m = Matrix::identity(4);
            m[(3, 3)] = -ONE;
            m
        }
        "CS" => {
            let mut m = Matrix::identity(4);
            m[(3, 3)] = I;
            m
        }
        "CCZ" => {
            let mut m = Matrix::identity(8);
            m[(7, 7)] = -ONE;
            m
        }
        _ => return Err(Error::Parameter(format!("unknown gate name '{name}'"))),
    };
    let n = mat.dim().trailing_zeros() as usize;
    DenseUnitary::new(n, mat)
}

/// Dense evaluation of a Clifford circuit.
pub fn circuit_to_dense(circuit: &CliffordCircuit) -> Result<DenseUnitary> {
    let n = circuit.n;
    if n > DEFAULT_DENSE_LIMIT {
        return Err(Error::DenseLimitExceeded { n, limit: DEFAULT_DENSE_LIMIT });
    }
    let d = 1usize << n;
    let mut u = Matrix::identity(d);
    let h = 1.0 / 2f64.sqrt();
    for &gate in &circuit.gates {
        match gate {
            Gate::H(q) => u = apply_single_left(&u, n, q, [[ONE * h, ONE * h], [ONE * h, -ONE * h]]),
            Gate::S(q) => u = apply_single_left(&u, n, q, [[ONE, ZERO], [ZERO, I]]),
            Gate::Cnot(c, t) => {
                let cbit = 1usize << (n - 1 - c);
                let tbit = 1usize << (n - 1 - t);
                let mut out = Matrix::zeros(d);
                for r in 0..d {
                    let src = if r & cbit != 0 { r ^ tbit } else { r };
                    for j in 0..d {
                        out[(r, j)] = u[(src, j)];
                    }
                }
                u = out;
            }
        }
    }
    DenseUnitary::new(n, u)
}

/// Left-multiplies by a single-qubit gate on qubit `q`.
fn apply_single_left(u: &Matrix, n: usize, q: usize, g: [[Complex64; 2]; 2]) -> Matrix {
    let d = 1usize << n;
    let bit = 1usize << (n - 1 - q);
    let mut out = Matrix::zeros(d);
    for r in 0..d {
        if r & bit != 0 {
            continue;
        }
        let r1 = r | bit;
        for j in 0..d {
            out[(r, j)] = g[0][0] * u[(r, j)] + g[0][1] * u[(r1, j)];
            out[(r1, j)] = g[1][0] * u[(r, j)] + g[1][1] * u[(r1, j)];
        }
    }
    out
}

/// Dense tableau realisation via circuit synthesis.
pub fn tableau_to_dense(t: &crate::tableau::CliffordTableau) -> Result<DenseUnitary> {
    circuit_to_dense(&t.synthesize_circuit()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::random_clifford;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn pauli(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn dense_single_qubit_matrices() {
        let id = pauli("+I").to_dense().unwrap();
        assert_eq!(id.matrix().max_abs_diff(&Matrix::identity(2)), 0.0);

        let z = pauli("+Z").to_dense().unwrap();
        let zm = gate_by_name("Z").unwrap();
        assert_eq!(z.matrix().max_abs_diff(zm.matrix()), 0.0);

        let y = pauli("+Y").to_dense().unwrap();
        let ym = gate_by_name("Y").unwrap();
        assert_eq!(y.matrix().max_abs_diff(ym.matrix()), 0.0);
    }

    #[test]
    fn dense_phase_and_tensor() {
        // -i(X⊗I)
        let p = pauli("-iXI").to_dense().unwrap();
        let expect = gate_by_name("X")
            .unwrap()
            .kron(&gate_by_name("I").unwrap())
            .matrix()
            .scale(-I);
        assert!(p.matrix().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn dense_product_matches_algebra() {
        let mut rng = StdRng::seed_from_u64(3);
        use rand::Rng;
        for _ in 0..300 {
            let n = rng.gen_range(1..=4);
            let mut a = PauliOperator::identity(n);
            let mut b = PauliOperator::identity(n);
            for q in 0..n {
                a.set_letter(q, rng.gen_range(0..4));
                b.set_letter(q, rng.gen_range(0..4));
            }
            let a = a.with_phase(rng.gen_range(0..4));
            let b = b.with_phase(rng.gen_range(0..4));
            let ab = a.mul(&b).unwrap();
            let dense_prod = a.to_dense().unwrap().matrix().mul(b.to_dense().unwrap().matrix());
            assert!(ab.to_dense().unwrap().matrix().max_abs_diff(&dense_prod) < 1e-12);
        }
    }

    #[test]
    fn symplectic_commutation_matches_dense_exhaustively() {
        for ia in 0..16 {
            for ib in 0..16 {
                let a = PauliOperator::from_label_index(1, ia % 4).with_phase((ia / 4) as u8);
                let b = PauliOperator::from_label_index(1, ib % 4).with_phase((ib / 4) as u8);
                let da = a.to_dense().unwrap();
                let db = b.to_dense().unwrap();
                let comm = da.matrix().mul(db.matrix()).max_abs_diff(&db.matrix().mul(da.matrix())) < 1e-12;
                assert_eq!(a.commutes(&b).unwrap(), comm, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn pauli_trace_orthogonality() {
        for n in 1..=2usize {
            let d = 1 << n;
            for ip in 0..4usize.pow(n as u32) {
                for iq in 0..4usize.pow(n as u32) {
                    let p = PauliOperator::from_label_index(n, ip);
                    let q = PauliOperator::from_label_index(n, iq);
                    let tr = trace_pauli(&p, q.to_dense().unwrap().matrix());
                    let expect = if ip == iq { d as f64 } else { 0.0 };
                    assert!((tr - Complex64::new(expect, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn gamma_of_basis_element() {
        let z = gate_by_name("Z").unwrap();
        let table = CoefficientTable::of_unitary(&z).unwrap();
        assert!((table.gamma(&pauli("+Z")) - ONE).norm() < 1e-12);
        assert!(table.gamma(&pauli("+I")).norm() < 1e-12);
        assert!(table.gamma(&pauli("+X")).norm() < 1e-12);
    }

    #[test]
    fn gamma_of_hadamard() {
        let h = gate_by_name("H").unwrap();
        let table = CoefficientTable::of_unitary(&h).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((table.gamma(&pauli("+X")).re - r).abs() < 1e-12);
        assert!((table.gamma(&pauli("+Z")).re - r).abs() < 1e-12);
        assert!(table.gamma(&pauli("+I")).norm() < 1e-12);
        assert!(table.gamma(&pauli("+Y")).norm() < 1e-12);
    }

    #[test]
    fn gamma_of_t_gate() {
        let t = gate_by_name("T").unwrap();
        let table = CoefficientTable::of_unitary(&t).unwrap();
        let e = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!((table.gamma(&pauli("+I")) - (ONE + e) / 2.0).norm() < 1e-12);
        assert!((table.gamma(&pauli("+Z")) - (ONE - e) / 2.0).norm() < 1e-12);
    }

    #[test]
    fn gamma_reconstructs_unitary() {
        let mut rng = StdRng::seed_from_u64(17);
        for n in 1..=3usize {
            let u = super::super::oracle::random_unitary(n, &mut rng);
            let table = CoefficientTable::of_unitary(&u).unwrap();
            assert!(table.reconstruct().max_abs_diff(u.matrix()) < 1e-9);
        }
    }

    #[test]
    fn bell_state_n1() {
        let psi = bell_state(1).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((psi[0].re - r).abs() < 1e-15);
        assert!(psi[1].norm() < 1e-15);
        assert!(psi[2].norm() < 1e-15);
        assert!((psi[3].re - r).abs() < 1e-15);
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_state_overlaps_are_delta() {
        // ⟨ψ|(σ_p ⊗ I)(σ_q ⊗ I)|ψ⟩ = δ_pq for all n=1 pairs
        let psi = bell_state(1).unwrap();
        let id = DenseUnitary::identity(1);
        for ip in 0..4 {
            for iq in 0..4 {
                let p = PauliOperator::from_label_index(1, ip).to_dense().unwrap().kron(&id);
                let q = PauliOperator::from_label_index(1, iq).to_dense().unwrap().kron(&id);
                let v = q.matrix().apply(&psi);
                let w = p.matrix().apply(&v);
                let overlap: Complex64 = psi.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                let expect = if ip == iq { 1.0 } else { 0.0 };
                assert!((overlap - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn bell_sample_identifies_pauli_oracles() {
        let mut rng = StdRng::seed_from_u64(5);
        let q = pauli("+XY");
        let u = q.to_dense().unwrap();
        for _ in 0..50 {
            assert_eq!(bell_sample(&u, &mut rng).unwrap(), q);
        }
        // Global phase is invisible.
        let u = u.scale_phase(1.234);
        for _ in 0..50 {
            assert_eq!(bell_sample(&u, &mut rng).unwrap(), q);
        }
    }

    #[test]
    fn bell_sample_hadamard_statistics() {
        let mut rng = StdRng::seed_from_u64(6);
        let h = gate_by_name("H").unwrap();
        let table = CoefficientTable::of_unitary(&h).unwrap();
        let sampler = table.sampler();
        let trials = 10_000;
        let mut x_count = 0u32;
        let mut z_count = 0u32;
        for _ in 0..trials {
            match sampler.sample(&mut rng).to_string().as_str() {
                "+X" => x_count += 1,
                "+Z" => z_count += 1,
                other => panic!("unexpected outcome {other}"),
            }
        }
        let sigma = (trials as f64 * 0.25).sqrt();
        assert!((x_count as f64 - trials as f64 / 2.0).abs() < 5.0 * sigma);
        assert!((z_count as f64 - trials as f64 / 2.0).abs() < 5.0 * sigma);
    }

    #[test]
    fn kron_matches_to_dense() {
        let xz = pauli("+XZ").to_dense().unwrap();
        let via_kron = gate_by_name("X").unwrap().kron(&gate_by_name("Z").unwrap());
        assert!(xz.matrix().max_abs_diff(via_kron.matrix()) < 1e-15);
    }

    #[test]
    fn dagger_involution_and_hermitian_h() {
        let h = gate_by_name("H").unwrap();
        assert!(h.dagger().matrix().max_abs_diff(h.matrix()) < 1e-15);
        let t = gate_by_name("T").unwrap();
        assert!(t.dagger().dagger().matrix().max_abs_diff(t.matrix()) < 1e-15);
    }

    #[test]
    fn circuit_dense_matches_tableau_conjugation() {
        // to_dense(synthesize(t)) must conjugate generators exactly as the
        // tableau states.
        for seed in 0..12 {
            let n = 1 + (seed as usize % 3);
            let t = random_clifford(n, 555 + seed);
            let u = tableau_to_dense(&t).unwrap();
            for g in crate::gf2pauli::GeneratorIndex::all(n) {
                let image = t.conjugate_pauli(&g.to_pauli(n)).unwrap();
                let lhs = u
                    .matrix()
                    .mul(g.to_pauli(n).to_dense().unwrap().matrix())
                    .mul(u.dagger().matrix());
                let rhs = image.to_dense().unwrap();
                assert!(lhs.max_abs_diff(rhs.matrix()) < 1e-10, "seed {seed} gen {g}");
            }
        }
    }

    #[test]
    fn exp_of_hermitian_is_unitary() {
        let mut rng = StdRng::seed_from_u64(9);
        let k = super::super::oracle::random_hermitian(2, &mut rng);
        for &eta in &[0.1, 0.7, 2.5] {
            let e = exp_i_hermitian(&k, eta);
            assert!(e.dagger().mul(&e).max_abs_diff(&Matrix::identity(4)) < 1e-10);
        }
    }

    #[test]
    fn nullspace_of_rank_deficient_system() {
        // x + y = 0 in C².
        let rows = vec![vec![ONE, ONE]];
        let basis = nullspace(rows, 2, 1e-12);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert!((v[0] + v[1]).norm() < 1e-12);
    }
}
