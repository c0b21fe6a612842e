//! Property-based invariants for the Pauli algebra, tableau group
//! structure and query budgets.

use clifford_learn::gf2pauli::{GeneratorIndex, PauliOperator};
use clifford_learn::learn::query_budget;
use clifford_learn::tableau::{random_clifford, CliffordTableau};
use proptest::prelude::*;

fn arb_pauli(max_n: usize) -> impl Strategy<Value = PauliOperator> {
    (1..=max_n, any::<u64>(), 0u8..4).prop_map(|(n, bits, phase)| {
        let mut p = PauliOperator::identity(n);
        for q in 0..n {
            p.set_letter(q, ((bits >> (2 * q)) & 3) as u8);
        }
        p.with_phase(phase)
    })
}

fn arb_pauli_pair(max_n: usize) -> impl Strategy<Value = (PauliOperator, PauliOperator)> {
    (1..=max_n, any::<u64>(), any::<u64>(), 0u8..4, 0u8..4).prop_map(
        |(n, bits_a, bits_b, pa, pb)| {
            let mut a = PauliOperator::identity(n);
            let mut b = PauliOperator::identity(n);
            for q in 0..n {
                a.set_letter(q, ((bits_a >> (2 * q)) & 3) as u8);
                b.set_letter(q, ((bits_b >> (2 * q)) & 3) as u8);
            }
            (a.with_phase(pa), b.with_phase(pb))
        },
    )
}

proptest! {
    #[test]
    fn pauli_display_parse_round_trip(p in arb_pauli(16)) {
        let text = p.to_string();
        let back: PauliOperator = text.parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn pauli_label_index_round_trip(p in arb_pauli(10)) {
        let idx = p.sign_free().label_index();
        prop_assert_eq!(PauliOperator::from_label_index(p.num_qubits(), idx), p.sign_free());
    }

    #[test]
    fn pauli_multiplication_associative(
        (a, b) in arb_pauli_pair(8),
        bits_c in any::<u64>(),
        pc in 0u8..4,
    ) {
        let n = a.num_qubits();
        let mut c = PauliOperator::identity(n);
        for q in 0..n {
            c.set_letter(q, ((bits_c >> (2 * q)) & 3) as u8);
        }
        let c = c.with_phase(pc);
        let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pauli_square_is_scalar(p in arb_pauli(12)) {
        let sq = p.mul(&p).unwrap();
        prop_assert!(sq.is_identity_letters());
        // A Pauli squares to ±1, never ±i.
        prop_assert_eq!(sq.phase_exponent() % 2, 0);
    }

    #[test]
    fn commutation_matches_symplectic_product((a, b) in arb_pauli_pair(12)) {
        let prod = a.symplectic_product(&b);
        prop_assert_eq!(a.commutes(&b).unwrap(), prod == 0);
        // ab = (-1)^{<a,b>} ba.
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        let expect = if prod == 0 { ba.clone() } else { ba.with_phase((ba.phase_exponent() + 2) % 4) };
        prop_assert_eq!(ab, expect);
    }

    #[test]
    fn generator_decomposition_reconstructs(p in arb_pauli(10)) {
        let n = p.num_qubits();
        let (gens, alpha) = p.decompose_into_generators();
        let mut acc = PauliOperator::identity(n).with_phase(alpha);
        for g in gens {
            acc = acc.mul(&g.to_pauli(n)).unwrap();
        }
        prop_assert_eq!(acc, p);
    }

    #[test]
    fn tableau_inverse_composes_to_identity(n in 1usize..8, seed in any::<u64>()) {
        let t = random_clifford(n, seed);
        let inv = t.invert();
        prop_assert_eq!(t.compose(&inv).unwrap(), CliffordTableau::identity(n));
        prop_assert_eq!(inv.compose(&t).unwrap(), CliffordTableau::identity(n));
    }

    #[test]
    fn tableau_compose_associative(n in 1usize..6, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let a = random_clifford(n, s1);
        let b = random_clifford(n, s2);
        let c = random_clifford(n, s3);
        let lhs = a.compose(&b).unwrap().compose(&c).unwrap();
        let rhs = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_is_a_homomorphism(n in 1usize..6, seed in any::<u64>(), (a, b) in arb_pauli_pair(5)) {
        prop_assume!(a.num_qubits() <= n);
        let n = a.num_qubits();
        let t = random_clifford(n, seed);
        let lhs = t.conjugate_pauli(&a.mul(&b).unwrap()).unwrap();
        let rhs = t.conjugate_pauli(&a).unwrap().mul(&t.conjugate_pauli(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_preserves_symplectic_product(n in 1usize..6, seed in any::<u64>()) {
        let t = random_clifford(n, seed);
        for a in GeneratorIndex::all(n) {
            for b in GeneratorIndex::all(n) {
                let pa = a.to_pauli(n);
                let pb = b.to_pauli(n);
                let ia = t.conjugate_pauli(&pa).unwrap();
                let ib = t.conjugate_pauli(&pb).unwrap();
                prop_assert_eq!(pa.symplectic_product(&pb), ia.symplectic_product(&ib));
            }
        }
    }

    #[test]
    fn synthesis_round_trips(n in 1usize..7, seed in any::<u64>()) {
        let t = random_clifford(n, seed);
        let circuit = t.synthesize_circuit().unwrap();
        prop_assert_eq!(circuit.to_tableau(), t);
    }

    #[test]
    fn query_budget_recurrence(n in 1usize..12, k in 1usize..5) {
        // T(k+1) = 2n T(k) + 1 and T'(k+1) = 2n T'(k) (with T'(2) = 2n).
        let cur = query_budget(n, k).unwrap();
        let next = query_budget(n, k + 1).unwrap();
        prop_assert_eq!(next.forward, 2 * n as u64 * cur.forward + 1);
        if k == 1 {
            prop_assert_eq!(next.conjugate, 2 * n as u64);
        } else {
            prop_assert_eq!(next.conjugate, 2 * n as u64 * cur.conjugate);
        }
    }
}
