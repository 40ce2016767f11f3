use proptest::prelude::*;
use qcsa::adders::{build_csa_3to2, build_tree_adder};
use qcsa::verify::check_round_trip;
use qcsa::{compose, netlist, run, truth_table, BasisState, Circuit, Gate};

fn gate(width: usize) -> impl Strategy<Value = Gate> {
    let w = 0..width;
    prop_oneof![
        w.clone().prop_map(Gate::not),
        (w.clone(), w.clone())
            .prop_filter("distinct", |(a, b)| a != b)
            .prop_map(|(a, b)| Gate::cnot(a, b)),
        (w.clone(), w.clone(), w)
            .prop_filter("distinct", |(a, b, c)| a != b && b != c && a != c)
            .prop_map(|(a, b, c)| Gate::toffoli(a, b, c)),
    ]
}

fn circuit() -> impl Strategy<Value = Circuit> {
    (3usize..=8).prop_flat_map(|w| {
        prop::collection::vec(gate(w), 0..40).prop_map(move |gates| {
            gates
                .into_iter()
                .fold(Circuit::new(w), |c, g| c.with_gate(g).unwrap())
        })
    })
}

fn outputs(c: &Circuit, out: &BasisState) -> qcsa::verify::Assignment {
    c.registers()
        .iter()
        .map(|(k, w)| (k.clone(), out.read(w)))
        .collect()
}

proptest! {
    #[test]
    fn inverse_undoes(c in circuit()) {
        prop_assert!(check_round_trip(&c, 12, 256, 7).passed);
        prop_assert_eq!(c.inverse().inverse(), c.clone());
    }

    #[test]
    fn inverse_keeps_counts_and_depth(c in circuit()) {
        let inv = c.inverse();
        prop_assert_eq!(inv.gate_counts(), c.gate_counts());
        prop_assert_eq!(inv.unit_depth(), c.unit_depth());
        prop_assert!(c.qfa_depth() <= num_rational::Rational64::from_integer(c.unit_depth() as i64));
    }

    #[test]
    fn inverse_table_is_inverse_permutation(c in circuit()) {
        let t = truth_table(&c).unwrap();
        let ti = truth_table(&c.inverse()).unwrap();
        prop_assert!(t.is_permutation());
        for x in 0..1u64 << c.width() {
            prop_assert_eq!(ti.output(t.output(x)), x);
        }
    }

    #[test]
    fn compose_is_associative(a in circuit(), b in circuit(), c in circuit()) {
        let w = a.width().max(b.width()).max(c.width());
        let id = |c: &Circuit| (0..c.width()).collect::<Vec<_>>();
        let (ia, ib, ic) = (id(&a), id(&b), id(&c));
        let ab = compose(w, &[(&a, &ia), (&b, &ib)]).unwrap();
        let bc = compose(w, &[(&b, &ib), (&c, &ic)]).unwrap();
        let full: Vec<usize> = (0..w).collect();
        let left = compose(w, &[(&ab, &full), (&c, &ic)]).unwrap();
        let right = compose(w, &[(&a, &ia), (&bc, &full)]).unwrap();
        prop_assert_eq!(left.gates(), right.gates());
    }

    #[test]
    fn netlist_round_trip(c in circuit()) {
        prop_assert_eq!(netlist::parse(&netlist::emit(&c)).unwrap(), c);
    }

    #[test]
    fn csa32_value(n in 1usize..=10, a in any::<u16>(), b in any::<u16>(), k in any::<u16>()) {
        let (c, l) = build_csa_3to2(n).unwrap();
        let mask = (1u128 << n) - 1;
        let (a, b, k) = (u128::from(a) & mask, u128::from(b) & mask, u128::from(k) & mask);
        let mut s = BasisState::zeros(c.width());
        s.write(c.register("A").unwrap(), a);
        s.write(c.register("B").unwrap(), b);
        s.write(c.register("C").unwrap(), k);
        let out = run(&c, &s).unwrap();
        let vals = outputs(&c, &out);
        prop_assert_eq!(l.output_value(&vals), a + b + k);
        prop_assert_eq!(vals["C"], a ^ b ^ k);
        prop_assert_eq!((vals["A"], vals["B"]), (a, b));
    }

    #[test]
    fn tree_value(inputs in 3usize..=12, l in 1usize..=6, seed in any::<u64>()) {
        let (c, layout) = build_tree_adder(inputs, l).unwrap();
        let mask = (1u64 << l) - 1;
        let mut s = BasisState::zeros(c.width());
        let mut want = 0u128;
        for (j, (_, w)) in layout.operands.iter().enumerate() {
            let v = u128::from(seed.rotate_left(j as u32 * 7) & mask);
            let name = &layout.operands[j].0;
            prop_assert_eq!(*w, l);
            s.write(c.register(name).unwrap(), v);
            want += v;
        }
        let out = run(&c, &s).unwrap();
        prop_assert_eq!(layout.output_value(&outputs(&c, &out)), want);
        for &w in &layout.ancillas {
            prop_assert!(!out.get(w));
        }
    }
}
