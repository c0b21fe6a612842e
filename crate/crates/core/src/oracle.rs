//! Black-box oracle access to an unknown unitary, with query accounting.
//!
//! An [`OracleHandle`] hides either a symplectic tableau (exact, scalable)
//! or a dense matrix (small `n`, arbitrary unitaries). Learners interact
//! with it only through Bell-sampling rounds on sandwich channels
//!
//! ```text
//! V_[]            = U
//! V_{path ++ [g]} = V_path σ_g V_path†
//! ```
//!
//! optionally pre-corrected by a trusted operation `C`, i.e. the round
//! measures `C† V_path` in the Bell basis. Each round is charged to the
//! ledger according to the access it consumes:
//!
//! - a plain round (empty path, no correction) or a residual round
//!   (trusted correction) costs one forward query;
//! - a sandwich round on a nonempty path costs one forward and one
//!   conjugate query, since building the channel needs `V_path` and
//!   `V_path†`.
//!
//! Deeper nestings are charged through the rounds of the recursion that
//! uses them, so the totals match the closed-form budgets in
//! [`crate::learn::query_budget`].

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::densesim::{bell_sample, tableau_to_dense, CoefficientTable, DenseUnitary, Matrix};
use crate::gf2pauli::{GeneratorIndex, PauliOperator};
use crate::tableau::CliffordTableau;
use crate::{Error, Result, DEFAULT_DENSE_LIMIT};

/// Running count of oracle uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub forward: u64,
    pub conjugate: u64,
}

impl QueryLedger {
    pub fn new(forward: u64, conjugate: u64) -> Self {
        QueryLedger { forward, conjugate }
    }

    pub fn add(&mut self, other: QueryLedger) {
        self.forward += other.forward;
        self.conjugate += other.conjugate;
    }
}

impl std::fmt::Display for QueryLedger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} forward + {} conjugate", self.forward, self.conjugate)
    }
}

/// Trusted operation applied (daggered) before a Bell round.
#[derive(Clone, Debug)]
pub enum Correction {
    Pauli(PauliOperator),
    Tableau(CliffordTableau),
    Dense(DenseUnitary),
}

impl Correction {
    fn to_dense(&self) -> Result<DenseUnitary> {
        match self {
            Correction::Pauli(p) => p.to_dense(),
            Correction::Tableau(t) => tableau_to_dense(t),
            Correction::Dense(u) => Ok(u.clone()),
        }
    }
}

#[derive(Clone, Debug)]
enum Backend {
    Tableau(CliffordTableau),
    Dense(DenseUnitary),
}

/// Oracle access to an unknown `n`-qubit unitary.
#[derive(Clone, Debug)]
pub struct OracleHandle {
    n: usize,
    backend: Backend,
    ledger: QueryLedger,
    /// For perturbed instances: the exact Clifford the oracle was built from.
    base: Option<CliffordTableau>,
    description: String,
}

impl OracleHandle {
    pub fn from_tableau(t: CliffordTableau) -> Self {
        OracleHandle {
            n: t.num_qubits(),
            backend: Backend::Tableau(t),
            ledger: QueryLedger::default(),
            base: None,
            description: "clifford tableau".into(),
        }
    }

    /// Oracle for a Pauli operation; the stored tableau captures its
    /// conjugation action (global phase is unobservable).
    pub fn from_pauli(p: &PauliOperator) -> Self {
        let mut h = OracleHandle::from_tableau(CliffordTableau::from_pauli(&p.sign_free()).expect(
            "sign-free Pauli is Hermitian",
        ));
        h.description = format!("pauli {}", p.sign_free());
        h
    }

    pub fn from_dense(u: DenseUnitary) -> Self {
        OracleHandle {
            n: u.num_qubits(),
            backend: Backend::Dense(u),
            ledger: QueryLedger::default(),
            base: None,
            description: "dense unitary".into(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn ledger(&self) -> QueryLedger {
        self.ledger
    }

    pub fn reset_ledger(&mut self) {
        self.ledger = QueryLedger::default();
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn set_description(&mut self, d: impl Into<String>) {
        self.description = d.into();
    }

    /// Exact tableau behind the oracle, for test verification only.
    pub fn trusted_tableau(&self) -> Option<&CliffordTableau> {
        match &self.backend {
            Backend::Tableau(t) => Some(t),
            Backend::Dense(_) => None,
        }
    }

    /// For perturbed instances: the Clifford the perturbation started from.
    pub fn trusted_base(&self) -> Option<&CliffordTableau> {
        self.base.as_ref()
    }

    /// Dense realisation of the hidden unitary, for test verification only.
    pub fn trusted_dense(&self) -> Result<DenseUnitary> {
        match &self.backend {
            Backend::Tableau(t) => tableau_to_dense(t),
            Backend::Dense(u) => Ok(u.clone()),
        }
    }

    /// Plain Bell round on `U`. Costs one forward query.
    pub fn sample_plain(&mut self, rng: &mut impl Rng) -> Result<PauliOperator> {
        self.ledger.add(QueryLedger::new(1, 0));
        self.round_label(&[], None, rng)
    }

    /// Bell round on the sandwich channel `V_path` (nonempty path). Costs
    /// one forward and one conjugate query.
    pub fn sample_sandwich(
        &mut self,
        path: &[GeneratorIndex],
        rng: &mut impl Rng,
    ) -> Result<PauliOperator> {
        if path.is_empty() {
            return Err(Error::Parameter("sandwich path must be nonempty".into()));
        }
        self.ledger.add(QueryLedger::new(1, 1));
        self.round_label(path, None, rng)
    }

    /// Residual Bell round on `C† V_path` for a trusted candidate `C`.
    /// Costs one forward query.
    pub fn sample_residual(
        &mut self,
        path: &[GeneratorIndex],
        correction: &Correction,
        rng: &mut impl Rng,
    ) -> Result<PauliOperator> {
        self.ledger.add(QueryLedger::new(1, 0));
        self.round_label(path, Some(correction), rng)
    }

    /// `rounds` Bell rounds on `σ_w† · V_[g]`, returning how many produced
    /// the identity label. Costs `rounds` forward and `rounds` conjugate
    /// queries. The count is drawn in one step from the exact binomial law
    /// of the identity outcome, which is distributionally identical to
    /// looping over single rounds.
    pub fn corrected_sandwich_identity_counts(
        &mut self,
        generator: GeneratorIndex,
        witness: &PauliOperator,
        rounds: u64,
        rng: &mut impl Rng,
    ) -> Result<u64> {
        self.ledger.add(QueryLedger::new(rounds, rounds));
        let path = [generator];
        let p = match &self.backend {
            Backend::Tableau(t) => {
                let image = t.conjugate_pauli(&generator.to_pauli(self.n))?;
                if image.sign_free() == witness.sign_free() {
                    1.0
                } else {
                    0.0
                }
            }
            Backend::Dense(_) => {
                let w = self.channel_dense(&path, Some(&Correction::Pauli(witness.clone())))?;
                let table = CoefficientTable::of_unitary(&w)?;
                table
                    .gamma(&PauliOperator::identity(self.n))
                    .norm_sqr()
                    .clamp(0.0, 1.0)
            }
        };
        Ok(binomial_count(rounds, p, rng))
    }

    /// Sign-free label of one Bell round on `C† V_path`.
    fn round_label(
        &mut self,
        path: &[GeneratorIndex],
        correction: Option<&Correction>,
        rng: &mut impl Rng,
    ) -> Result<PauliOperator> {
        match &self.backend {
            Backend::Tableau(t) => {
                let t = t.clone();
                self.tableau_round(&t, path, correction, rng)
            }
            Backend::Dense(_) => {
                let w = self.channel_dense(path, correction)?;
                bell_sample(&w, rng)
            }
        }
    }

    /// Exact symplectic simulation of a round against a Clifford backend.
    fn tableau_round(
        &self,
        t: &CliffordTableau,
        path: &[GeneratorIndex],
        correction: Option<&Correction>,
        rng: &mut impl Rng,
    ) -> Result<PauliOperator> {
        if let Some((first, rest)) = path.split_first() {
            // V_[g] = U σ_g U† is a Pauli; deeper sandwiches stay Pauli.
            let mut v = t.conjugate_pauli(&first.to_pauli(self.n))?;
            for g in rest {
                // P σ_g P† = ± σ_g; the Bell label ignores the sign.
                let p = g.to_pauli(self.n);
                v = if v.commutes(&p)? { p } else { p.with_phase(2) };
            }
            let w = match correction {
                None => v,
                Some(Correction::Pauli(c)) => c.clone().mul(&v)?, // dagger = ± itself
                Some(Correction::Tableau(c)) => {
                    return self.clifford_residual_label(&c.invert().compose(&CliffordTableau::from_pauli(&v.sign_free())?)?, rng)
                }
                Some(Correction::Dense(c)) => {
                    let w = c.dagger().mul(&v.to_dense()?)?;
                    return bell_sample(&w, rng);
                }
            };
            Ok(w.sign_free())
        } else {
            let combined = match correction {
                None => t.clone(),
                Some(Correction::Tableau(c)) => c.invert().compose(t)?,
                Some(Correction::Pauli(c)) => {
                    CliffordTableau::from_pauli(&c.sign_free())?.invert().compose(t)?
                }
                Some(Correction::Dense(c)) => {
                    let w = c.dagger().mul(&tableau_to_dense(t)?)?;
                    return bell_sample(&w, rng);
                }
            };
            self.clifford_residual_label(&combined, rng)
        }
    }

    /// Bell label of a Clifford given as a tableau. When the tableau is a
    /// Pauli conjugation the outcome is deterministic; otherwise a dense
    /// fallback is used for small `n`.
    fn clifford_residual_label(
        &self,
        t: &CliffordTableau,
        rng: &mut impl Rng,
    ) -> Result<PauliOperator> {
        if let Some(p) = tableau_as_pauli(t) {
            return Ok(p);
        }
        if self.n <= DEFAULT_DENSE_LIMIT {
            return bell_sample(&tableau_to_dense(t)?, rng);
        }
        Err(Error::Parameter(
            "Bell round on a non-Pauli Clifford channel needs a dense fallback, \
             but n exceeds the dense limit"
                .into(),
        ))
    }

    /// Dense matrix of `C† V_path` against a dense backend.
    fn channel_dense(
        &self,
        path: &[GeneratorIndex],
        correction: Option<&Correction>,
    ) -> Result<DenseUnitary> {
        let Backend::Dense(u) = &self.backend else {
            return Err(Error::Parameter("dense channel on tableau backend".into()));
        };
        let mut v = u.clone();
        for g in path {
            let sigma = g.to_pauli(self.n).to_dense()?;
            v = v.mul(&sigma)?.mul(&v.dagger())?;
        }
        match correction {
            None => Ok(v),
            Some(c) => c.to_dense()?.dagger().mul(&v),
        }
    }
}

/// Exact binomial draw that stays robust for extreme parameters. The
/// library sampler's large-count algorithm breaks down when `n·p` or
/// `n·(1-p)` is tiny while `n` exceeds `i32::MAX`, so those tails use a
/// direct inverse-CDF walk instead.
fn binomial_count(n: u64, p: f64, rng: &mut impl Rng) -> u64 {
    let p = p.clamp(0.0, 1.0);
    if p == 0.0 {
        return 0;
    }
    if p == 1.0 {
        return n;
    }
    let nf = n as f64;
    if nf * p < 15.0 {
        binomial_inverse_cdf(n, p, rng)
    } else if nf * (1.0 - p) < 15.0 {
        n - binomial_inverse_cdf(n, 1.0 - p, rng)
    } else {
        Binomial::new(n, p).expect("p in (0,1)").sample(rng)
    }
}

/// Inverse-CDF binomial sampling for small means; exact for any `n`.
fn binomial_inverse_cdf(n: u64, p: f64, rng: &mut impl Rng) -> u64 {
    let q = 1.0 - p;
    // P(X = 0) = q^n, computed in log space to survive huge n.
    let mut r = (n as f64 * q.ln()).exp();
    let s = p / q;
    let mut u: f64 = rng.gen();
    let mut x = 0u64;
    while u > r && x < n {
        u -= r;
        x += 1;
        r *= ((n - x + 1) as f64) * s / x as f64;
    }
    x
}

/// Recovers the sign-free Pauli `σ` from a tableau that acts as
/// `P ↦ σ P σ†`, i.e. fixes every generator up to sign. Returns `None`
/// when the tableau moves some generator.
pub fn tableau_as_pauli(t: &CliffordTableau) -> Option<PauliOperator> {
    let n = t.num_qubits();
    let mut p = PauliOperator::identity(n);
    for i in 0..n {
        if t.x_image(i) != &GeneratorIndex::x(i).to_pauli(n)
            || t.z_image(i) != &GeneratorIndex::z(i).to_pauli(n)
        {
            return None;
        }
        // σ anticommutes with X_i iff σ has a Z-component there, and
        // with Z_i iff it has an X-component.
        p.set_z_bit(i, t.x_sign(i));
        p.set_x_bit(i, t.z_sign(i));
    }
    Some(p)
}

/// Haar-random unitary via Gram–Schmidt on a Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> DenseUnitary {
    let d = 1usize << n;
    let mut cols: Vec<Vec<Complex64>> = (0..d)
        .map(|_| (0..d).map(|_| gaussian(rng)).collect())
        .collect();
    for j in 0..d {
        for i in 0..j {
            let proj: Complex64 = cols[i]
                .iter()
                .zip(&cols[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            for r in 0..d {
                let sub = proj * cols[i][r];
                cols[j][r] -= sub;
            }
        }
        let norm: f64 = cols[j].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for v in cols[j].iter_mut() {
            *v /= norm;
        }
    }
    let mut m = Matrix::zeros(d);
    for j in 0..d {
        for i in 0..d {
            m[(i, j)] = cols[j][i];
        }
    }
    DenseUnitary::new(n, m).expect("Gram-Schmidt output is unitary")
}

/// Random Hermitian matrix with independent Gaussian entries.
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> Matrix {
    let d = 1usize << n;
    let mut m = Matrix::zeros(d);
    for i in 0..d {
        m[(i, i)] = Complex64::new(rng.sample::<f64, _>(rand_distr::StandardNormal), 0.0);
        for j in (i + 1)..d {
            let v = gaussian(rng);
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    m
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(
        rng.sample(rand_distr::StandardNormal),
        rng.sample(rand_distr::StandardNormal),
    )
}

/// Builds a dense oracle at phase-invariant distance `target` (within
/// `tol`) from the Clifford `base`, by bisecting the strength of a random
/// Hermitian perturbation `U = exp(iηK) · C`.
pub fn make_perturbed_clifford(
    base: &CliffordTableau,
    target: f64,
    tol: f64,
    seed: u64,
) -> Result<OracleHandle> {
    if !(0.0..1.0).contains(&target) {
        return Err(Error::Parameter(format!(
            "target distance {target} out of range [0, 1)"
        )));
    }
    let n = base.num_qubits();
    let c = tableau_to_dense(base)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let k = random_hermitian(n, &mut rng);
    let distance_at = |eta: f64| -> Result<f64> {
        let u = DenseUnitary::new(n, crate::densesim::exp_i_hermitian(&k, eta).mul(c.matrix()))?;
        crate::metric::phase_distance(&u, &c)
    };
    // Grow until we overshoot, then bisect.
    let mut hi = 0.1;
    while distance_at(hi)? < target {
        hi *= 2.0;
        if hi > 64.0 {
            return Err(Error::NumericalInconsistency(
                "perturbation search failed to reach the target distance".into(),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if distance_at(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (distance_at(hi)? - target).abs() <= tol {
            break;
        }
    }
    let eta = hi;
    let achieved = distance_at(eta)?;
    if (achieved - target).abs() > tol {
        return Err(Error::NumericalInconsistency(format!(
            "perturbation distance {achieved} misses target {target}"
        )));
    }
    let u = DenseUnitary::new(n, crate::densesim::exp_i_hermitian(&k, eta).mul(c.matrix()))?;
    let mut handle = OracleHandle::from_dense(u);
    handle.base = Some(base.clone());
    handle.description = format!("perturbed clifford at distance {achieved:.6}");
    Ok(handle)
}

/// Serializable description of an oracle instance, for the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleSpec {
    /// A Pauli string such as `"+XZ"`.
    Pauli { label: String },
    /// An explicit Clifford tableau.
    Tableau { tableau: CliffordTableau },
    /// A uniformly random Clifford.
    RandomClifford { n: usize, seed: u64 },
    /// A named gate (`I, X, Y, Z, H, S, T, CNOT, CZ, CS, CCZ`), optionally
    /// composed left-to-right with others, e.g. `["S", "T"]`.
    Gates { gates: Vec<String> },
    /// A dense matrix as rows of `[re, im]` pairs.
    Matrix { rows: Vec<Vec<[f64; 2]>> },
    /// A random Clifford perturbed to the given phase-invariant distance.
    PerturbedClifford { n: usize, seed: u64, distance: f64 },
}

impl OracleSpec {
    pub fn build(&self) -> Result<OracleHandle> {
        match self {
            OracleSpec::Pauli { label } => Ok(OracleHandle::from_pauli(&label.parse()?)),
            OracleSpec::Tableau { tableau } => {
                if !tableau.is_valid() {
                    return Err(Error::InvalidTableau("images are not symplectic".into()));
                }
                Ok(OracleHandle::from_tableau(tableau.clone()))
            }
            OracleSpec::RandomClifford { n, seed } => Ok(OracleHandle::from_tableau(
                crate::tableau::random_clifford(*n, *seed),
            )),
            OracleSpec::Gates { gates } => {
                if gates.is_empty() {
                    return Err(Error::Parameter("gate list must be nonempty".into()));
                }
                let mut u = crate::densesim::gate_by_name(&gates[0])?;
                for name in &gates[1..] {
                    u = crate::densesim::gate_by_name(name)?.mul(&u)?;
                }
                Ok(OracleHandle::from_dense(u))
            }
            OracleSpec::Matrix { rows } => {
                let dim = rows.len();
                if !dim.is_power_of_two() || dim == 1 {
                    return Err(Error::Parameter(format!(
                        "matrix dimension {dim} is not a power of two >= 2"
                    )));
                }
                let n = dim.trailing_zeros() as usize;
                let mut m = Matrix::zeros(dim);
                for (i, row) in rows.iter().enumerate() {
                    if row.len() != dim {
                        return Err(Error::Parameter("matrix is not square".into()));
                    }
                    for (j, &[re, im]) in row.iter().enumerate() {
                        m[(i, j)] = Complex64::new(re, im);
                    }
                }
                Ok(OracleHandle::from_dense(DenseUnitary::new(n, m)?))
            }
            OracleSpec::PerturbedClifford { n, seed, distance } => make_perturbed_clifford(
                &crate::tableau::random_clifford(*n, *seed),
                *distance,
                1e-6,
                seed.wrapping_add(0x9e3779b97f4a7c15),
            ),
        }
    }
}
