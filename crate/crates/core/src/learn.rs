//! Learners for Pauli, Clifford and higher hierarchy-level unitaries from
//! Bell-sampling oracle rounds, plus their closed-form query budgets.
//!
//! The exact learners are deterministic given an in-class oracle: every
//! Bell round they perform has a point-mass outcome. Their ledgers match
//! [`query_budget`] exactly. The approximate learner wraps each round in a
//! majority vote sized by [`majority_rounds`].

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::densesim::{nullspace, tableau_to_dense, DenseUnitary, Matrix, ONE, ZERO};
use crate::gf2pauli::{GeneratorIndex, PauliOperator};
use crate::oracle::{Correction, OracleHandle, QueryLedger};
use crate::tableau::CliffordTableau;
use crate::{Error, Result};

/// Learned description of a hierarchy-level-`k` unitary, up to global
/// phase. Children of a node are stored phase-free together with the sign
/// relating them to the true conjugation image.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConjugationTable {
    /// Level 1: the unitary is this Pauli (sign-free).
    Pauli { pauli: PauliOperator },
    /// Level 2: a Clifford, as a sign-carrying tableau.
    Clifford { tableau: CliffordTableau },
    /// Level `k >= 3`: the image of each generator under conjugation,
    /// indexed by [`GeneratorIndex::linear_index`].
    Node { n: usize, k: usize, children: Vec<SignedChild> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignedChild {
    pub table: ConjugationTable,
    /// True when the conjugation image is minus the canonical Hermitian
    /// realisation of `table`.
    pub negated: bool,
}

impl ConjugationTable {
    pub fn level(&self) -> usize {
        match self {
            ConjugationTable::Pauli { .. } => 1,
            ConjugationTable::Clifford { .. } => 2,
            ConjugationTable::Node { k, .. } => *k,
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            ConjugationTable::Pauli { pauli } => pauli.num_qubits(),
            ConjugationTable::Clifford { tableau } => tableau.num_qubits(),
            ConjugationTable::Node { n, .. } => *n,
        }
    }
}

/// One-round Pauli identification: the Bell label of a Pauli oracle is its
/// sign-free part with certainty. Ledger: one forward query.
pub fn learn_pauli(oracle: &mut OracleHandle, rng: &mut impl Rng) -> Result<PauliOperator> {
    oracle.sample_plain(rng)
}

/// Exact Clifford learning. Ledger: `2n+1` forward, `2n` conjugate.
pub fn learn_clifford(oracle: &mut OracleHandle, rng: &mut impl Rng) -> Result<CliffordTableau> {
    learn_clifford_at_path(oracle, &[], rng)
}

/// Learns the Clifford sandwich channel `V_path` (or `U` itself when the
/// path is empty): one sandwich round per generator fixes the images up to
/// sign, then one residual round against the all-plus candidate fixes the
/// signs through the Pauli offset.
fn learn_clifford_at_path(
    oracle: &mut OracleHandle,
    path: &[GeneratorIndex],
    rng: &mut impl Rng,
) -> Result<CliffordTableau> {
    let n = oracle.num_qubits();
    let mut x_images = Vec::with_capacity(n);
    let mut z_images = Vec::with_capacity(n);
    for g in GeneratorIndex::all(n) {
        let mut p = path.to_vec();
        p.push(g);
        let label = oracle.sample_sandwich(&p, rng)?;
        match g.kind {
            crate::gf2pauli::GeneratorKind::X => x_images.push(label),
            crate::gf2pauli::GeneratorKind::Z => z_images.push(label),
        }
    }
    let candidate =
        CliffordTableau::from_images(x_images, z_images, vec![false; n], vec![false; n])
            .map_err(|e| Error::NotClifford(format!("sampled images are not symplectic: {e}")))?;
    let sigma = oracle.sample_residual(path, &Correction::Tableau(candidate.clone()), rng)?;
    candidate.compose(&CliffordTableau::from_pauli(&sigma)?)
}

/// Exact learning of a level-`k` hierarchy unitary. Ledgers match
/// [`query_budget`].
pub fn learn_ck(
    oracle: &mut OracleHandle,
    k: usize,
    rng: &mut impl Rng,
) -> Result<ConjugationTable> {
    match k {
        0 => Err(Error::Parameter("hierarchy level must be >= 1".into())),
        1 => Ok(ConjugationTable::Pauli { pauli: learn_pauli(oracle, rng)? }),
        2 => Ok(ConjugationTable::Clifford { tableau: learn_clifford(oracle, rng)? }),
        _ => learn_node(oracle, k, &[], rng),
    }
}

/// Learns `V_path` at level `k >= 3`: recursively learns the conjugation
/// image of every generator at level `k-1`, realises the all-plus
/// candidate densely, and resolves the child signs through one residual
/// round.
fn learn_node(
    oracle: &mut OracleHandle,
    k: usize,
    path: &[GeneratorIndex],
    rng: &mut impl Rng,
) -> Result<ConjugationTable> {
    debug_assert!(k >= 3);
    let n = oracle.num_qubits();
    let mut children = Vec::with_capacity(2 * n);
    for g in GeneratorIndex::all(n) {
        let mut p = path.to_vec();
        p.push(g);
        let child = if k - 1 == 2 {
            ConjugationTable::Clifford { tableau: learn_clifford_at_path(oracle, &p, rng)? }
        } else {
            learn_node(oracle, k - 1, &p, rng)?
        };
        children.push(SignedChild { table: child, negated: false });
    }
    let all_plus = ConjugationTable::Node { n, k, children: children.clone() };
    let candidate = realize_unitary(&all_plus)
        .map_err(|e| Error::NotInHierarchy { k, msg: format!("candidate realisation: {e}") })?;
    let w = oracle.sample_residual(path, &Correction::Dense(candidate), rng)?;
    for (child, g) in children.iter_mut().zip(GeneratorIndex::all(n)) {
        child.negated = !w.commutes(&g.to_pauli(n))?;
    }
    Ok(ConjugationTable::Node { n, k, children })
}

/// The phase rotating `v` onto its Hermitian representative, canonicalised
/// to `θ ∈ (-π/2, π/2]` so the choice between `±H` is deterministic.
pub fn canonical_hermitian(v: &DenseUnitary) -> Result<DenseUnitary> {
    let d = v.dim();
    let m = v.matrix();
    // V† = e^{2iθ} V entrywise; read 2θ off the largest entry.
    let mut best = (0usize, 0usize);
    for i in 0..d {
        for j in 0..d {
            if m[(i, j)].norm() > m[(best.0, best.1)].norm() {
                best = (i, j);
            }
        }
    }
    let (i, j) = best;
    let ratio = m[(j, i)].conj() / m[(i, j)];
    if (ratio.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::NumericalInconsistency(
            "operator is not Hermitian up to a phase".into(),
        ));
    }
    let mut theta = ratio.arg() / 2.0;
    if theta <= -std::f64::consts::FRAC_PI_2 {
        theta += std::f64::consts::PI;
    } else if theta > std::f64::consts::FRAC_PI_2 {
        theta -= std::f64::consts::PI;
    }
    let h = v.scale_phase(theta);
    let defect = h.matrix().max_abs_diff(&h.dagger().matrix().clone());
    if defect > 1e-6 {
        return Err(Error::NumericalInconsistency(format!(
            "Hermitian defect {defect} after phase alignment"
        )));
    }
    Ok(h)
}

/// Dense realisation of a learned table, unique up to global phase. The
/// largest-modulus entry of the result is made real positive.
pub fn realize_unitary(table: &ConjugationTable) -> Result<DenseUnitary> {
    match table {
        ConjugationTable::Pauli { pauli } => Ok(pauli.to_dense()?.phase_normalized()),
        ConjugationTable::Clifford { tableau } => {
            Ok(tableau_to_dense(tableau)?.phase_normalized())
        }
        ConjugationTable::Node { n, children, .. } => {
            let n = *n;
            let d = 1usize << n;
            let generators = GeneratorIndex::all(n);
            if children.len() != generators.len() {
                return Err(Error::InconsistentTable(format!(
                    "{} children for {} generators",
                    children.len(),
                    generators.len()
                )));
            }
            // Constraints U σ_g = s_g H_g U, stacked over all generators;
            // unknowns are the d² entries of U (row-major).
            let mut rows = Vec::with_capacity(2 * n * d * d);
            for (child, g) in children.iter().zip(&generators) {
                let sigma = g.to_pauli(n).to_dense()?;
                let h = canonical_hermitian(&realize_unitary(&child.table)?)?;
                let sign = if child.negated { -ONE } else { ONE };
                for i in 0..d {
                    for j in 0..d {
                        let mut row = vec![ZERO; d * d];
                        for b in 0..d {
                            // (U σ_g)[i,j] term: U[i,b] σ_g[b,j]
                            row[i * d + b] += sigma.matrix()[(b, j)];
                            // (s H U)[i,j] term: -s H[i,b] U[b,j]
                            row[b * d + j] -= sign * h.matrix()[(i, b)];
                        }
                        rows.push(row);
                    }
                }
            }
            let basis = nullspace(rows, d * d, 1e-8);
            if basis.len() != 1 {
                return Err(Error::InconsistentTable(format!(
                    "realisation nullspace has dimension {}",
                    basis.len()
                )));
            }
            let v = &basis[0];
            let mut m = Matrix::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] = v[i * d + j];
                }
            }
            // The solution is a scalar multiple of a unitary.
            let scale = (d as f64).sqrt() / m.norm2();
            let u = DenseUnitary::new(n, m.scale(num_complex::Complex64::new(scale, 0.0)))?;
            Ok(u.phase_normalized())
        }
    }
}

/// Closed-form exact-learning query budget at level `k`:
/// `T(k) = ((2n)^k - 1)/(2n - 1)` forward and `T'(k) = (2n)^{k-1}`
/// conjugate queries (`T'(1) = 0`).
pub fn query_budget(n: usize, k: usize) -> Result<QueryLedger> {
    if n == 0 || k == 0 {
        return Err(Error::Parameter("need n >= 1 and k >= 1".into()));
    }
    let base = 2u64 * n as u64;
    let mut forward: u64 = 0;
    let mut power: u64 = 1; // (2n)^j
    for _ in 0..k {
        forward = forward
            .checked_add(power)
            .ok_or_else(|| Error::Parameter("query budget overflows u64".into()))?;
        power = power
            .checked_mul(base)
            .ok_or_else(|| Error::Parameter("query budget overflows u64".into()))?;
    }
    let conjugate = if k == 1 {
        0
    } else {
        let mut p = 1u64;
        for _ in 0..k - 1 {
            p = p
                .checked_mul(base)
                .ok_or_else(|| Error::Parameter("query budget overflows u64".into()))?;
        }
        p
    };
    Ok(QueryLedger::new(forward, conjugate))
}

/// Majority-vote margin for approximate learning: a unitary within
/// phase-invariant distance `ε` of a level-`k` element yields the correct
/// Bell label with probability at least `1/2 + ε'/2`, where
/// `ε' = √(2(1 - (2^{k-1} ε)²)) - 1`. Fails when the compounded distance
/// `2^{k-1} ε` reaches the threshold where the margin vanishes.
pub fn epsilon_prime(eps: f64, k: usize) -> Result<f64> {
    if k == 0 || eps < 0.0 {
        return Err(Error::Parameter("need k >= 1 and eps >= 0".into()));
    }
    let x = 2f64.powi(k as i32 - 1) * eps;
    if x >= 1.0 {
        return Err(Error::HypothesisViolated(format!(
            "compounded distance {x} >= 1: no majority margin"
        )));
    }
    let margin = (2.0 * (1.0 - x * x)).sqrt() - 1.0;
    if margin <= 0.0 {
        return Err(Error::HypothesisViolated(format!(
            "majority margin {margin} <= 0 at compounded distance {x}"
        )));
    }
    Ok(margin)
}

/// Rounds per majority vote: Hoeffding sizing
/// `m = ⌈2 ln(2 T(k)/δ) / ε'²⌉` with the failure budget split uniformly
/// over the `T(k)` votes.
pub fn majority_rounds(n: usize, k: usize, eps: f64, delta: f64) -> Result<u64> {
    if !(0.0..1.0).contains(&delta) || delta == 0.0 {
        return Err(Error::Parameter(format!("delta {delta} out of (0, 1)")));
    }
    let ep = epsilon_prime(eps, k)?;
    let votes = query_budget(n, k)?.forward as f64;
    let m = (2.0 * (2.0 * votes / delta).ln() / (ep * ep)).ceil();
    Ok(m as u64)
}

/// Ledger of the approximate learner: every exact-learning round is
/// repeated `m` times.
pub fn approx_query_budget(n: usize, k: usize, eps: f64, delta: f64) -> Result<QueryLedger> {
    let m = majority_rounds(n, k, eps, delta)?;
    let exact = query_budget(n, k)?;
    Ok(QueryLedger::new(exact.forward * m, exact.conjugate * m))
}

/// Output of the approximate learner.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproxLearned {
    pub table: ConjugationTable,
    /// Rounds per majority vote.
    pub rounds_per_vote: u64,
    /// Number of votes whose top two labels were tied (broken towards the
    /// lexicographically smaller label).
    pub ties: usize,
}

/// Majority label over `m` repetitions of one oracle round.
fn majority_vote<F>(m: u64, ties: &mut usize, mut round: F) -> Result<PauliOperator>
where
    F: FnMut() -> Result<PauliOperator>,
{
    let mut counts: std::collections::HashMap<PauliOperator, u64> = std::collections::HashMap::new();
    for _ in 0..m {
        *counts.entry(round()?).or_insert(0) += 1;
    }
    let best_count = *counts.values().max().expect("m >= 1 rounds");
    let mut winners: Vec<&PauliOperator> =
        counts.iter().filter(|(_, &c)| c == best_count).map(|(p, _)| p).collect();
    if winners.len() > 1 {
        *ties += 1;
        winners.sort_by(|a, b| a.label_cmp(b));
    }
    Ok(winners[0].clone())
}

/// Approximate learning of a unitary promised to be within phase-invariant
/// distance `eps` of a level-`k` element, with failure probability at most
/// `delta`. Currently levels 1 and 2 (Pauli / Clifford) are supported.
pub fn approx_learn_ck(
    oracle: &mut OracleHandle,
    k: usize,
    eps: f64,
    delta: f64,
    rng: &mut impl Rng,
) -> Result<ApproxLearned> {
    let n = oracle.num_qubits();
    let m = majority_rounds(n, k, eps, delta)?;
    let mut ties = 0usize;
    let table = match k {
        1 => {
            let label = majority_vote(m, &mut ties, || oracle.sample_plain(rng))?;
            ConjugationTable::Pauli { pauli: label }
        }
        2 => {
            let mut x_images = Vec::with_capacity(n);
            let mut z_images = Vec::with_capacity(n);
            for g in GeneratorIndex::all(n) {
                let label = majority_vote(m, &mut ties, || oracle.sample_sandwich(&[g], rng))?;
                match g.kind {
                    crate::gf2pauli::GeneratorKind::X => x_images.push(label),
                    crate::gf2pauli::GeneratorKind::Z => z_images.push(label),
                }
            }
            let candidate = CliffordTableau::from_images(
                x_images,
                z_images,
                vec![false; n],
                vec![false; n],
            )
            .map_err(|e| Error::NotClifford(format!("voted images are not symplectic: {e}")))?;
            let sigma = majority_vote(m, &mut ties, || {
                oracle.sample_residual(&[], &Correction::Tableau(candidate.clone()), rng)
            })?;
            ConjugationTable::Clifford {
                tableau: candidate.compose(&CliffordTableau::from_pauli(&sigma)?)?,
            }
        }
        _ => {
            return Err(Error::Parameter(format!(
                "approximate learning implemented for k <= 2, got {k}"
            )))
        }
    };
    Ok(ApproxLearned { table, rounds_per_vote: m, ties })
}

/// CLI-facing record of a learning run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LearnReport {
    pub n: usize,
    pub k: usize,
    pub learned: ConjugationTable,
    pub ledger: QueryLedger,
    pub expected_ledger: Option<QueryLedger>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densesim::gate_by_name;
    use crate::metric::phase_distance;
    use crate::tableau::random_clifford;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn pauli_learning_one_query() {
        let mut rng = StdRng::seed_from_u64(1);
        let p: PauliOperator = "-YXZI".parse().unwrap();
        let mut oracle = OracleHandle::from_pauli(&p);
        let learned = learn_pauli(&mut oracle, &mut rng).unwrap();
        assert_eq!(learned, p.sign_free());
        assert_eq!(oracle.ledger(), QueryLedger::new(1, 0));
        assert_eq!(oracle.ledger(), query_budget(4, 1).unwrap());
    }

    #[test]
    fn clifford_learning_recovers_tableau_exactly() {
        for seed in 0..30 {
            let n = 1 + (seed as usize % 4);
            let t = random_clifford(n, 1000 + seed);
            let mut oracle = OracleHandle::from_tableau(t.clone());
            let mut rng = StdRng::seed_from_u64(seed);
            let learned = learn_clifford(&mut oracle, &mut rng).unwrap();
            assert_eq!(learned, t, "seed {seed}");
            assert_eq!(oracle.ledger(), query_budget(n, 2).unwrap());
        }
    }

    #[test]
    fn clifford_learning_large_n() {
        let n = 64;
        let t = random_clifford(n, 9);
        let mut oracle = OracleHandle::from_tableau(t.clone());
        let mut rng = StdRng::seed_from_u64(2);
        let learned = learn_clifford(&mut oracle, &mut rng).unwrap();
        assert_eq!(learned, t);
        assert_eq!(oracle.ledger(), QueryLedger::new(2 * n as u64 + 1, 2 * n as u64));
    }

    #[test]
    fn clifford_learning_from_dense_backend() {
        let t = random_clifford(2, 77);
        let mut oracle = OracleHandle::from_dense(tableau_to_dense(&t).unwrap());
        let mut rng = StdRng::seed_from_u64(3);
        let learned = learn_clifford(&mut oracle, &mut rng).unwrap();
        assert_eq!(learned, t);
    }

    #[test]
    fn query_budget_closed_forms() {
        assert_eq!(query_budget(1, 1).unwrap(), QueryLedger::new(1, 0));
        assert_eq!(query_budget(1, 2).unwrap(), QueryLedger::new(3, 2));
        assert_eq!(query_budget(1, 3).unwrap(), QueryLedger::new(7, 4));
        assert_eq!(query_budget(2, 2).unwrap(), QueryLedger::new(5, 4));
        assert_eq!(query_budget(2, 3).unwrap(), QueryLedger::new(21, 16));
        assert_eq!(query_budget(3, 2).unwrap(), QueryLedger::new(7, 6));
    }

    #[test]
    fn t_gate_level_three_learning() {
        let mut rng = StdRng::seed_from_u64(4);
        let mut oracle = OracleHandle::from_dense(gate_by_name("T").unwrap());
        let table = learn_ck(&mut oracle, 3, &mut rng).unwrap();
        assert_eq!(oracle.ledger(), query_budget(1, 3).unwrap());
        let realized = realize_unitary(&table).unwrap();
        let d = phase_distance(&realized, &gate_by_name("T").unwrap()).unwrap();
        assert!(d < 1e-9, "distance {d}");
    }

    #[test]
    fn cs_gate_level_three_learning() {
        let mut rng = StdRng::seed_from_u64(5);
        let cs = gate_by_name("CS").unwrap();
        let mut oracle = OracleHandle::from_dense(cs.clone());
        let table = learn_ck(&mut oracle, 3, &mut rng).unwrap();
        assert_eq!(oracle.ledger(), query_budget(2, 3).unwrap());
        let realized = realize_unitary(&table).unwrap();
        let d = phase_distance(&realized, &cs).unwrap();
        assert!(d < 1e-9, "distance {d}");
    }

    #[test]
    fn clifford_phase_learned_at_level_three() {
        // A Clifford is also level 3; the recursion must still recover it.
        let t = random_clifford(1, 123);
        let dense = tableau_to_dense(&t).unwrap();
        let mut oracle = OracleHandle::from_dense(dense.clone());
        let mut rng = StdRng::seed_from_u64(6);
        let table = learn_ck(&mut oracle, 3, &mut rng).unwrap();
        let realized = realize_unitary(&table).unwrap();
        assert!(phase_distance(&realized, &dense).unwrap() < 1e-9);
    }

    #[test]
    fn realize_clifford_table_matches_oracle() {
        let t = random_clifford(2, 8);
        let table = ConjugationTable::Clifford { tableau: t.clone() };
        let realized = realize_unitary(&table).unwrap();
        assert!(phase_distance(&realized, &tableau_to_dense(&t).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn canonical_hermitian_fixes_phase() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            // Start from a Hermitian unitary (a conjugated Pauli) and
            // rotate it by a random phase; canonicalisation must undo the
            // rotation up to sign.
            let u = crate::oracle::random_unitary(1, &mut rng);
            let x = gate_by_name("X").unwrap();
            let herm = u.mul(&x).unwrap().mul(&u.dagger()).unwrap();
            use rand::Rng;
            let phi: f64 = rng.gen_range(-3.0..3.0);
            let rotated = herm.scale_phase(phi);
            let back = canonical_hermitian(&rotated).unwrap();
            let diff_plus = back.matrix().max_abs_diff(herm.matrix());
            let diff_minus = back.matrix().max_abs_diff(&herm.matrix().scale(-ONE));
            assert!(diff_plus < 1e-9 || diff_minus < 1e-9);
        }
    }

    #[test]
    fn epsilon_prime_values() {
        // ε → 0 leaves the full √2 - 1 margin.
        assert!((epsilon_prime(0.0, 2).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        // Compounding halves the tolerable ε per level: the margin exists
        // only while 2^{k-1} ε < 1/√2.
        assert!(epsilon_prime(0.3, 2).is_ok());
        assert!(epsilon_prime(0.4, 2).is_err());
        assert!(epsilon_prime(0.3, 3).is_err());
        assert!(epsilon_prime(1.1, 1).is_err());
    }

    #[test]
    fn approx_budget_matches_rounds() {
        let n = 2;
        let m = majority_rounds(n, 2, 0.05, 0.1).unwrap();
        let budget = approx_query_budget(n, 2, 0.05, 0.1).unwrap();
        assert_eq!(budget, QueryLedger::new((2 * n as u64 + 1) * m, 2 * n as u64 * m));
    }

    #[test]
    fn approx_learning_exact_oracle() {
        // On an exactly-Clifford oracle every vote is unanimous.
        let t = random_clifford(2, 31);
        let mut oracle = OracleHandle::from_tableau(t.clone());
        let mut rng = StdRng::seed_from_u64(8);
        let out = approx_learn_ck(&mut oracle, 2, 0.05, 0.1, &mut rng).unwrap();
        let ConjugationTable::Clifford { tableau } = out.table else {
            panic!("expected clifford table")
        };
        assert_eq!(tableau, t);
        assert_eq!(out.ties, 0);
        assert_eq!(oracle.ledger(), approx_query_budget(2, 2, 0.05, 0.1).unwrap());
    }

    #[test]
    fn approx_learning_perturbed_oracle() {
        let base = random_clifford(1, 55);
        let mut oracle =
            crate::oracle::make_perturbed_clifford(&base, 0.05, 1e-6, 19).unwrap();
        let mut rng = StdRng::seed_from_u64(9);
        let out = approx_learn_ck(&mut oracle, 2, 0.05, 0.1, &mut rng).unwrap();
        let ConjugationTable::Clifford { tableau } = out.table else {
            panic!("expected clifford table")
        };
        assert_eq!(tableau, base);
    }

    #[test]
    fn conjugation_table_serde_round_trip() {
        let t = random_clifford(1, 2);
        let table = ConjugationTable::Node {
            n: 1,
            k: 3,
            children: vec![
                SignedChild { table: ConjugationTable::Clifford { tableau: t.clone() }, negated: true },
                SignedChild { table: ConjugationTable::Clifford { tableau: t }, negated: false },
            ],
        };
        let json = serde_json::to_string(&table).unwrap();
        let back: ConjugationTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back.level(), 3);
        assert_eq!(back.num_qubits(), 1);
        let ConjugationTable::Node { children, .. } = back else { panic!() };
        assert!(children[0].negated);
        assert!(!children[1].negated);
    }
}
