//! Distances between unitaries, nearest structured operations, and the
//! inequalities relating a unitary's distance to the distances of its
//! conjugation channels.
//!
//! Two normalised metrics are used throughout:
//!
//! - the aligned distance `d⁺(U₁,U₂) = ‖U₁−U₂‖_F / √(2d)`, which is phase
//!   sensitive and equals `√(1 − Re tr(U₁U₂†)/d)`;
//! - the phase-invariant distance `D(U₁,U₂) = √(1 − |tr(U₁U₂†)/d|²)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::densesim::{tableau_to_dense, trace_pauli, DenseUnitary, Matrix};
use crate::gf2pauli::{GeneratorIndex, PauliOperator};
use crate::tableau::CliffordTableau;
use crate::{Error, Result};

fn check_dims(u1: &DenseUnitary, u2: &DenseUnitary) -> Result<()> {
    if u1.num_qubits() != u2.num_qubits() {
        return Err(Error::DimensionMismatch {
            left: u1.num_qubits(),
            right: u2.num_qubits(),
        });
    }
    Ok(())
}

/// `tr(U₁ U₂†) / d`.
pub fn normalized_inner(u1: &DenseUnitary, u2: &DenseUnitary) -> Result<num_complex::Complex64> {
    check_dims(u1, u2)?;
    let d2 = u2.dagger();
    Ok(u1.matrix().mul(d2.matrix()).trace() / u1.dim() as f64)
}

/// `|tr(U₁ U₂†)| / d`, the phase-invariant overlap in `[0, 1]`.
pub fn overlap_magnitude(u1: &DenseUnitary, u2: &DenseUnitary) -> Result<f64> {
    Ok(normalized_inner(u1, u2)?.norm().min(1.0))
}

/// Aligned distance via the trace formula `√(1 − Re tr(U₁U₂†)/d)`.
pub fn aligned_distance(u1: &DenseUnitary, u2: &DenseUnitary) -> Result<f64> {
    let re = normalized_inner(u1, u2)?.re;
    Ok((1.0 - re).max(0.0).sqrt())
}

/// Aligned distance computed directly as `‖U₁−U₂‖_F / √(2d)`.
pub fn aligned_distance_frobenius(u1: &DenseUnitary, u2: &DenseUnitary) -> Result<f64> {
    check_dims(u1, u2)?;
    let diff = u1.matrix().sub(u2.matrix());
    Ok(diff.norm2() / (2.0 * u1.dim() as f64).sqrt())
}

/// Phase-invariant distance `√(1 − |tr(U₁U₂†)/d|²)`.
///
/// Computed by aligning the global phase and taking the Frobenius
/// difference, which stays accurate when the distance is tiny: with
/// `m = min_φ d⁺(e^{iφ}U₁, U₂)` the overlap is `c = 1 − m²`, so
/// `D = m √(2 − m²)` without the cancellation of `1 − c²`.
pub fn phase_distance(u1: &DenseUnitary, u2: &DenseUnitary) -> Result<f64> {
    let inner = normalized_inner(u1, u2)?;
    let phi = if inner.norm() > 1e-300 { inner.arg() } else { 0.0 };
    let aligned = u1.scale_phase(-phi);
    let m = aligned_distance_frobenius(&aligned, u2)?;
    let m2 = (m * m).min(1.0);
    Ok((m2 * (2.0 - m2)).max(0.0).sqrt())
}

/// Phase-invariant distance via the direct trace formula
/// `√(1 − |tr(U₁U₂†)/d|²)`; cross-checks [`phase_distance`].
pub fn phase_distance_trace(u1: &DenseUnitary, u2: &DenseUnitary) -> Result<f64> {
    let c = overlap_magnitude(u1, u2)?;
    Ok((1.0 - c * c).max(0.0).sqrt())
}

/// Phase-invariant distance recovered from a numerical minimisation of the
/// aligned distance over a global phase on `U₁`. Agrees with
/// [`phase_distance`] up to the minimiser tolerance; used to cross-check
/// the trace formula.
pub fn phase_distance_minimized(u1: &DenseUnitary, u2: &DenseUnitary) -> Result<f64> {
    check_dims(u1, u2)?;
    let f = |phi: f64| -> f64 {
        let shifted = u1.scale_phase(phi);
        let diff = shifted.matrix().sub(u2.matrix());
        diff.norm2().powi(2) / (2.0 * u1.dim() as f64)
    };
    // Coarse scan to bracket the (unique) minimum of 1 - c·cos(φ - φ₀),
    // then golden-section refinement.
    let steps = 256;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..steps {
        let phi = 2.0 * std::f64::consts::PI * i as f64 / steps as f64;
        let v = f(phi);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let width = 2.0 * std::f64::consts::PI / steps as f64;
    let mut a = (best_i as f64 - 1.0) * width;
    let mut b = (best_i as f64 + 1.0) * width;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..90 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let min_sq = f1.min(f2).clamp(0.0, 2.0);
    let c = (1.0 - min_sq).clamp(-1.0, 1.0);
    Ok((1.0 - c * c).max(0.0).sqrt())
}

/// Nearest sign-free Pauli by exhaustive search over all `4^n` labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NearestPauli {
    pub pauli: PauliOperator,
    pub distance: f64,
    /// Distance of the best label other than the winner.
    pub runner_up: f64,
}

pub fn nearest_pauli(u: &DenseUnitary) -> Result<NearestPauli> {
    let n = u.num_qubits();
    let d = u.dim() as f64;
    let mut best: Option<(usize, f64)> = None;
    let mut second = f64::INFINITY;
    for idx in 0..4usize.pow(n as u32) {
        let p = PauliOperator::from_label_index(n, idx);
        let c = (trace_pauli(&p, u.matrix()).norm() / d).min(1.0);
        let dist = (1.0 - c * c).max(0.0).sqrt();
        match best {
            None => best = Some((idx, dist)),
            Some((_, bd)) if dist < bd => {
                second = bd;
                best = Some((idx, dist));
            }
            _ => second = second.min(dist),
        }
    }
    let (idx, distance) = best.expect("nonempty label set");
    Ok(NearestPauli {
        pauli: PauliOperator::from_label_index(n, idx),
        distance,
        runner_up: second,
    })
}

/// Number of sign-free Paulis within the given phase-invariant radius.
pub fn count_paulis_within(u: &DenseUnitary, radius: f64) -> Result<usize> {
    let n = u.num_qubits();
    let d = u.dim() as f64;
    let mut count = 0;
    for idx in 0..4usize.pow(n as u32) {
        let p = PauliOperator::from_label_index(n, idx);
        let c = (trace_pauli(&p, u.matrix()).norm() / d).min(1.0);
        if (1.0 - c * c).max(0.0).sqrt() < radius {
            count += 1;
        }
    }
    Ok(count)
}

/// Largest `n` for which exhaustive Clifford enumeration is kept.
pub const CLIFFORD_ENUMERATION_LIMIT: usize = 2;

type CliffordList = Arc<Vec<(CliffordTableau, DenseUnitary)>>;

fn clifford_cache() -> &'static Mutex<HashMap<usize, CliffordList>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, CliffordList>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All distinct Clifford conjugation classes on `n` qubits (sign-carrying
/// tableaus) together with dense representatives. Built once per `n` and
/// memoised for the lifetime of the process.
pub fn enumerate_cliffords(n: usize) -> Result<CliffordList> {
    if n == 0 || n > CLIFFORD_ENUMERATION_LIMIT {
        return Err(Error::Parameter(format!(
            "clifford enumeration supports 1 <= n <= {CLIFFORD_ENUMERATION_LIMIT}, got {n}"
        )));
    }
    if let Some(list) = clifford_cache().lock().unwrap().get(&n) {
        return Ok(list.clone());
    }
    let list: CliffordList = Arc::new(build_clifford_list(n)?);
    clifford_cache().lock().unwrap().insert(n, list.clone());
    Ok(list)
}

fn build_clifford_list(n: usize) -> Result<Vec<(CliffordTableau, DenseUnitary)>> {
    let labels: Vec<PauliOperator> = (1..4usize.pow(n as u32))
        .map(|idx| PauliOperator::from_label_index(n, idx))
        .collect();
    let mut out = Vec::new();
    let mut images: Vec<PauliOperator> = Vec::new(); // x0, z0, x1, z1, ...
    fill_rows(n, &labels, &mut images, &mut out)?;
    let expected = crate::tableau::tableau_class_count(n);
    if num_bigint::BigUint::from(out.len()) != expected {
        return Err(Error::NumericalInconsistency(format!(
            "enumerated {} tableaus, expected {expected}",
            out.len()
        )));
    }
    Ok(out)
}

/// Depth-first choice of symplectic images, alternating X- and Z-rows.
fn fill_rows(
    n: usize,
    labels: &[PauliOperator],
    images: &mut Vec<PauliOperator>,
    out: &mut Vec<(CliffordTableau, DenseUnitary)>,
) -> Result<()> {
    if images.len() == 2 * n {
        let x_images: Vec<_> = (0..n).map(|i| images[2 * i].clone()).collect();
        let z_images: Vec<_> = (0..n).map(|i| images[2 * i + 1].clone()).collect();
        for signs in 0..(1u32 << (2 * n)) {
            let x_signs: Vec<bool> = (0..n).map(|i| signs >> i & 1 != 0).collect();
            let z_signs: Vec<bool> = (0..n).map(|i| signs >> (n + i) & 1 != 0).collect();
            let t = CliffordTableau::from_images(
                x_images.clone(),
                z_images.clone(),
                x_signs,
                z_signs,
            )?;
            let dense = tableau_to_dense(&t)?;
            out.push((t, dense));
        }
        return Ok(());
    }
    let row = images.len();
    let partner_of_x = row % 2 == 1; // odd slots are Z-rows paired with slot row-1
    for cand in labels {
        let ok = images.iter().enumerate().all(|(j, prev)| {
            let want_anticommute = partner_of_x && j == row - 1;
            let commutes = cand.commutes(prev).expect("same n");
            commutes != want_anticommute
        });
        if !ok {
            continue;
        }
        images.push(cand.clone());
        fill_rows(n, labels, images, out)?;
        images.pop();
    }
    Ok(())
}

/// Nearest Clifford conjugation class by exhaustive search (`n ≤ 2`).
#[derive(Clone, Debug)]
pub struct NearestClifford {
    pub tableau: CliffordTableau,
    pub distance: f64,
    pub runner_up: f64,
}

pub fn nearest_clifford(u: &DenseUnitary) -> Result<NearestClifford> {
    let list = enumerate_cliffords(u.num_qubits())?;
    let mut best: Option<(usize, f64)> = None;
    let mut second = f64::INFINITY;
    for (i, (_, dense)) in list.iter().enumerate() {
        let dist = phase_distance(u, dense)?;
        match best {
            None => best = Some((i, dist)),
            Some((_, bd)) if dist < bd => {
                second = bd;
                best = Some((i, dist));
            }
            _ => second = second.min(dist),
        }
    }
    let (i, distance) = best.expect("nonempty class list");
    Ok(NearestClifford {
        tableau: list[i].0.clone(),
        distance,
        runner_up: second,
    })
}

/// Number of Clifford classes within the given phase-invariant radius.
pub fn count_cliffords_within(u: &DenseUnitary, radius: f64) -> Result<usize> {
    let list = enumerate_cliffords(u.num_qubits())?;
    let mut count = 0;
    for (_, dense) in list.iter() {
        if phase_distance(u, dense)? < radius {
            count += 1;
        }
    }
    Ok(count)
}

/// `(1/4^n) Σ_p σ_p M σ_p`, which projects onto the identity component:
/// the result is `(tr M / d) · I` for every `M`.
pub fn pauli_twirl(n: usize, m: &Matrix) -> Result<Matrix> {
    let d = 1usize << n;
    if m.dim() != d {
        return Err(Error::DimensionMismatch { left: m.dim(), right: d });
    }
    let mut acc = Matrix::zeros(d);
    for idx in 0..4usize.pow(n as u32) {
        let p = PauliOperator::from_label_index(n, idx).to_dense_with_limit(n)?;
        acc = acc.add(&p.matrix().mul(m).mul(&p.matrix().clone()));
    }
    Ok(acc.scale(num_complex::Complex64::new(1.0 / 4f64.powi(n as i32), 0.0)))
}

/// Report of the conjugation-channel inequalities for a pair of unitaries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugationBoundsReport {
    /// `D(U₁, U₂)`.
    pub phase_distance: f64,
    /// `d⁺(U₁ σ_g U₁†, U₂ σ_g U₂†)` per generator.
    pub generator_distances: Vec<f64>,
    /// Worst slack of `d⁺(channel) ≤ 2·min_φ d⁺(e^{iφ}U₁, U₂)`; negative
    /// values violate the bound.
    pub factor_two_slack: f64,
    /// `|avg_p d⁺(channel_p)² − D²|`, an exact identity up to numerics.
    pub average_identity_residual: f64,
    /// Slack of `D ≤ 2n · max_g d⁺(channel_g)`.
    pub generator_bound_slack: f64,
}

impl ConjugationBoundsReport {
    pub fn is_satisfied(&self, tol: f64) -> bool {
        self.factor_two_slack >= -tol
            && self.average_identity_residual <= tol
            && self.generator_bound_slack >= -tol
    }
}

/// Checks three relations between `D(U₁,U₂)` and the aligned distances of
/// the conjugation channels `U_i σ_p U_i†`:
///
/// 1. each channel distance is at most twice the phase-minimised distance
///    of the pair;
/// 2. the average squared channel distance over all `4^n` Paulis equals
///    `D(U₁,U₂)²` exactly;
/// 3. `D(U₁,U₂) ≤ 2n · max` over the `2n` generator channels, obtained by
///    telescoping each Pauli through its generator decomposition.
pub fn verify_conjugation_bounds(
    u1: &DenseUnitary,
    u2: &DenseUnitary,
) -> Result<ConjugationBoundsReport> {
    check_dims(u1, u2)?;
    let n = u1.num_qubits();
    let dist = phase_distance(u1, u2)?;
    let c = overlap_magnitude(u1, u2)?;
    let min_aligned = (1.0 - c).max(0.0).sqrt();

    let channel = |p: &PauliOperator| -> Result<(DenseUnitary, DenseUnitary)> {
        let sigma = p.to_dense()?;
        Ok((
            u1.mul(&sigma)?.mul(&u1.dagger())?,
            u2.mul(&sigma)?.mul(&u2.dagger())?,
        ))
    };

    let mut generator_distances = Vec::new();
    let mut factor_two_slack = f64::INFINITY;
    for g in GeneratorIndex::all(n) {
        let (a, b) = channel(&g.to_pauli(n))?;
        let cd = aligned_distance(&a, &b)?;
        factor_two_slack = factor_two_slack.min(2.0 * min_aligned - cd);
        generator_distances.push(cd);
    }

    let mut avg = 0.0;
    for idx in 0..4usize.pow(n as u32) {
        let p = PauliOperator::from_label_index(n, idx);
        let (a, b) = channel(&p)?;
        let cd = aligned_distance(&a, &b)?;
        avg += cd * cd;
        // The factor-two bound holds for every Pauli, not just generators.
        factor_two_slack = factor_two_slack.min(2.0 * min_aligned - cd);
    }
    avg /= 4f64.powi(n as i32);
    let average_identity_residual = (avg - dist * dist).abs();

    let max_gen = generator_distances.iter().cloned().fold(0.0, f64::max);
    let generator_bound_slack = 2.0 * n as f64 * max_gen - dist;

    Ok(ConjugationBoundsReport {
        phase_distance: dist,
        generator_distances,
        factor_two_slack,
        average_identity_residual,
        generator_bound_slack,
    })
}

/// Summary of how far a unitary is from the structured families.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceReport {
    pub n: usize,
    pub nearest_pauli: NearestPauli,
    pub nearest_clifford_distance: Option<f64>,
}

pub fn distance_report(u: &DenseUnitary) -> Result<DistanceReport> {
    let nearest_clifford_distance = if u.num_qubits() <= CLIFFORD_ENUMERATION_LIMIT {
        Some(nearest_clifford(u)?.distance)
    } else {
        None
    };
    Ok(DistanceReport {
        n: u.num_qubits(),
        nearest_pauli: nearest_pauli(u)?,
        nearest_clifford_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densesim::gate_by_name;
    use crate::oracle::random_unitary;
    use crate::tableau::random_clifford;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn distance_of_t_to_identity() {
        // D(T, I) = √((2−√2)/4).
        let t = gate_by_name("T").unwrap();
        let id = DenseUnitary::identity(1);
        let expect = ((2.0 - 2f64.sqrt()) / 4.0).sqrt();
        assert!((phase_distance(&t, &id).unwrap() - expect).abs() < 1e-12);
        // and the same to S, since T = S^{1/2} shares the diagonal structure:
        // tr(T S†) = 1 + e^{-iπ/4}, same magnitude as 1 + e^{iπ/4}.
        let s = gate_by_name("S").unwrap();
        assert!((phase_distance(&t, &s).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn aligned_routes_agree() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..20 {
            let a = random_unitary(2, &mut rng);
            let b = random_unitary(2, &mut rng);
            let lhs = aligned_distance(&a, &b).unwrap();
            let rhs = aligned_distance_frobenius(&a, &b).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_routes_agree() {
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..10 {
            let a = random_unitary(1, &mut rng);
            let b = random_unitary(1, &mut rng);
            let lhs = phase_distance(&a, &b).unwrap();
            let rhs = phase_distance_minimized(&a, &b).unwrap();
            assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let mut rng = StdRng::seed_from_u64(3);
        let a = random_unitary(2, &mut rng);
        let b = a.scale_phase(0.8342);
        assert!(phase_distance(&a, &b).unwrap() < 1e-8);
        assert!(aligned_distance(&a, &b).unwrap() > 0.1);
    }

    #[test]
    fn aligned_distance_triangle_inequality() {
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..30 {
            let a = random_unitary(1, &mut rng);
            let b = random_unitary(1, &mut rng);
            let c = random_unitary(1, &mut rng);
            let ab = aligned_distance(&a, &b).unwrap();
            let bc = aligned_distance(&b, &c).unwrap();
            let ac = aligned_distance(&a, &c).unwrap();
            assert!(ac <= ab + bc + 1e-12);
        }
    }

    #[test]
    fn nearest_pauli_identifies_perturbed_pauli() {
        let p: PauliOperator = "+ZX".parse().unwrap();
        let u = p.to_dense().unwrap().scale_phase(0.3);
        let found = nearest_pauli(&u).unwrap();
        assert_eq!(found.pauli, p.sign_free());
        assert!(found.distance < 1e-12);
        assert!(found.runner_up > 0.9);
    }

    #[test]
    fn clifford_enumeration_counts() {
        assert_eq!(enumerate_cliffords(1).unwrap().len(), 24);
        assert_eq!(enumerate_cliffords(2).unwrap().len(), 11520);
    }

    #[test]
    fn clifford_enumeration_is_duplicate_free_and_covers_randoms() {
        let list = enumerate_cliffords(1).unwrap();
        for i in 0..list.len() {
            for j in (i + 1)..list.len() {
                assert!(phase_distance(&list[i].1, &list[j].1).unwrap() > 1e-6);
            }
        }
        for seed in 0..20 {
            let t = random_clifford(1, seed);
            let dense = tableau_to_dense(&t).unwrap();
            let near = nearest_clifford(&dense).unwrap();
            assert!(near.distance < 1e-9);
        }
    }

    #[test]
    fn nearest_clifford_to_t_gate() {
        // The nearest Cliffords to T are I and S, at distance √((2−√2)/4).
        let t = gate_by_name("T").unwrap();
        let near = nearest_clifford(&t).unwrap();
        let expect = ((2.0 - 2f64.sqrt()) / 4.0).sqrt();
        assert!((near.distance - expect).abs() < 1e-9);
    }

    #[test]
    fn twirl_projects_to_identity() {
        let mut rng = StdRng::seed_from_u64(5);
        for n in 1..=2usize {
            let u = random_unitary(n, &mut rng);
            let m = u.matrix();
            let tw = pauli_twirl(n, m).unwrap();
            let d = 1 << n;
            let expect = Matrix::identity(d).scale(m.trace() / d as f64);
            assert!(tw.max_abs_diff(&expect) < 1e-12);
        }
    }

    #[test]
    fn conjugation_bounds_hold_for_random_pairs() {
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..25 {
            let a = random_unitary(1, &mut rng);
            let b = random_unitary(1, &mut rng);
            let report = verify_conjugation_bounds(&a, &b).unwrap();
            assert!(report.is_satisfied(1e-9), "{report:?}");
        }
    }

    #[test]
    fn conjugation_bounds_tight_cases() {
        // Identical unitaries: everything collapses to zero.
        let u = gate_by_name("H").unwrap();
        let report = verify_conjugation_bounds(&u, &u).unwrap();
        assert!(report.phase_distance < 1e-12);
        assert!(report.average_identity_residual < 1e-12);
        // Pauli-offset pair: channels differ while D stays positive.
        let x = gate_by_name("X").unwrap();
        let report = verify_conjugation_bounds(&u, &u.mul(&x).unwrap()).unwrap();
        assert!(report.is_satisfied(1e-9), "{report:?}");
    }
}
