use proptest::prelude::*;
use qecft::circuit::{Gate1, Gate2};
use qecft::codes::five_qubit_code;
use qecft::dense::DenseState;
use qecft::montecarlo::concatenated_rate;
use qecft::tableau::Tableau;
use qecft::{Letter, PauliOperator};

fn pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (prop::collection::vec(0usize..4, n), 0u8..4).prop_map(|(ls, ph)| {
        let letters: Vec<Letter> = ls.into_iter().map(|i| Letter::ALL[i]).collect();
        PauliOperator::from_letters(&letters).with_phase(ph)
    })
}

fn pauli_triple() -> impl Strategy<Value = (PauliOperator, PauliOperator, PauliOperator)> {
    (1usize..9).prop_flat_map(|n| (pauli(n), pauli(n), pauli(n)))
}

#[derive(Clone, Debug)]
enum G {
    One(Gate1, usize),
    Two(Gate2, usize, usize),
}

fn clifford_ops(n: usize) -> impl Strategy<Value = Vec<G>> {
    let one = (0usize..3, 0..n).prop_map(|(g, q)| G::One([Gate1::H, Gate1::S, Gate1::Sdg][g], q));
    let two = (0usize..3, 0..n, 0..n)
        .prop_filter("distinct", |(_, a, b)| a != b)
        .prop_map(|(g, a, b)| G::Two([Gate2::Cx, Gate2::Cy, Gate2::Cz][g], a, b));
    prop::collection::vec(prop_oneof![one, two], 0..30)
}

fn inverse(g: &G) -> G {
    match *g {
        G::One(Gate1::S, q) => G::One(Gate1::Sdg, q),
        G::One(Gate1::Sdg, q) => G::One(Gate1::S, q),
        ref other => other.clone(),
    }
}

fn apply(t: &mut Tableau, g: &G) {
    match *g {
        G::One(gate, q) => t.apply_gate(gate, q).unwrap(),
        G::Two(gate, a, b) => t.apply_gate2(gate, a, b).unwrap(),
    }
}

proptest! {
    #[test]
    fn weight_is_subadditive((a, b, _) in pauli_triple()) {
        let ab = a.multiply(&b).unwrap();
        prop_assert!(ab.weight() <= a.weight() + b.weight());
    }

    #[test]
    fn product_is_associative((a, b, c) in pauli_triple()) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn swapping_factors_costs_the_commutation_sign((a, b, _) in pauli_triple()) {
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        let diff = (ab.phase_exponent() + 4 - ba.phase_exponent()) % 4;
        prop_assert_eq!(diff, if a.anticommutes_with(&b) { 2 } else { 0 });
        prop_assert_eq!(ab.symplectic(), ba.symplectic());
    }

    #[test]
    fn text_and_symplectic_round_trip((a, _, _) in pauli_triple()) {
        prop_assert_eq!(a.to_string().parse::<PauliOperator>().unwrap(), a.clone());
        let back = PauliOperator::from_symplectic(&a.symplectic()).with_phase(a.phase_exponent());
        prop_assert_eq!(back, a);
    }

    #[test]
    fn product_agrees_with_dense_action(
        (a, b) in (1usize..3).prop_flat_map(|n| (pauli(n), pauli(n))),
        basis in 0usize..4,
    ) {
        let n = a.n();
        let basis = basis % (1 << n);
        let mut seq = DenseState::basis(n, basis).unwrap();
        seq.apply_pauli(&b).unwrap();
        seq.apply_pauli(&a).unwrap();
        let mut prod = DenseState::basis(n, basis).unwrap();
        prod.apply_pauli(&a.multiply(&b).unwrap()).unwrap();
        for (x, y) in seq.amplitudes().iter().zip(prod.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn syndrome_is_linear(a in pauli(5), b in pauli(5)) {
        let code = five_qubit_code();
        let sab = code.syndrome(&a.multiply(&b).unwrap()).unwrap();
        let s = code.syndrome(&a).unwrap().xor(&code.syndrome(&b).unwrap());
        prop_assert_eq!(sab, s);
    }

    #[test]
    fn gates_undone_by_inverses(ops in clifford_ops(4)) {
        let mut t = Tableau::new(4);
        for g in &ops {
            apply(&mut t, g);
        }
        for g in ops.iter().rev() {
            apply(&mut t, &inverse(g));
        }
        prop_assert!(t.state_equal(&Tableau::new(4)));
    }

    #[test]
    fn stabilizer_rows_stay_valid(ops in clifford_ops(5)) {
        let mut t = Tableau::new(5);
        for g in &ops {
            apply(&mut t, g);
        }
        let rows = t.stabilizers();
        for (i, r) in rows.iter().enumerate() {
            prop_assert!(r.is_hermitian());
            for s in &rows[i + 1..] {
                prop_assert!(!r.anticommutes_with(s));
            }
        }
    }

    #[test]
    fn concatenation_recursion(p in 1e-6f64..0.5, pt in 1e-4f64..0.5, l in 0u32..6) {
        let next = concatenated_rate(p, pt, l + 1).unwrap();
        let prev = concatenated_rate(p, pt, l).unwrap();
        let rec = pt * (prev / pt) * (prev / pt);
        prop_assert!((next - rec).abs() <= 1e-12 * next.abs().max(f64::MIN_POSITIVE));
        if p < pt {
            prop_assert!(next <= prev);
        } else if p > pt {
            prop_assert!(next >= prev);
        }
    }
}
