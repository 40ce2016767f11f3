use num_bigint::BigUint;
use qcsa::modular::{
    build_final_normalizer, build_mod_csa, build_modexp, build_modexp_normalized,
    make_modulus_context, mod_fold_reference, normalizer_stages,
};
use qcsa::reference::modexp_u64;
use qcsa::registry::{build, check_probe, Construction, Params};
use qcsa::verify::DEFAULT_SEED;
use qcsa::{run, BasisState, BuildError, Domain};

fn modular(n: u32, m: u64) -> Params {
    Params {
        bits: Some(n),
        modulus: Some(m),
        ..Params::default()
    }
}

#[test]
fn fold_reference_is_congruent() {
    for n in [4u32, 5] {
        for m in [3u64, 5, 7] {
            let Ok(ctx) = make_modulus_context(n, m) else {
                continue;
            };
            for x in 0u64..1 << (2 * n) {
                let big = BigUint::from(x);
                let f = mod_fold_reference(&big, &ctx);
                assert_eq!(&f % m, &big % m, "N {n} M {m} x {x}");
            }
        }
    }
}

#[test]
fn modcsa_exhaustive_n4() {
    let b = build(Construction::Modcsa, &modular(4, 3)).unwrap();
    let r = b.verify(Domain::Exhaustive).unwrap();
    assert!(r.passed, "{r}");
    assert_eq!(r.trials, 1 << 12);
}

#[test]
fn modcsa_probe_never_both_set() {
    let ctx = make_modulus_context(4, 3).unwrap();
    let (c, l) = build_mod_csa(&ctx).unwrap();
    let probe = l.probe.expect("N = 4 has both carries");
    let r = check_probe(&c, &probe).unwrap();
    assert_eq!(r.cases, 1 << 12);
    assert_eq!(r.both_set, 0);
}

#[test]
fn modcsa_sampled_wider() {
    for (n, m) in [(5u32, 3u64), (5, 7), (6, 11), (6, 15)] {
        let b = build(Construction::Modcsa, &modular(n, m)).unwrap();
        let r = b
            .verify(Domain::Sample {
                count: 10_000,
                seed: DEFAULT_SEED,
            })
            .unwrap();
        assert!(r.passed, "N {n} M {m}: {r}");
    }
}

#[test]
fn modmul_exhaustive_n4() {
    let b = build(Construction::Modmul, &modular(4, 3)).unwrap();
    let r = b.verify(Domain::Exhaustive).unwrap();
    assert!(r.passed, "{r}");
    assert_eq!(r.trials, 1 << 14);
}

#[test]
fn modmul_sampled_n5() {
    let b = build(Construction::Modmul, &modular(5, 7)).unwrap();
    let r = b
        .verify(Domain::Sample {
            count: 10_000,
            seed: DEFAULT_SEED,
        })
        .unwrap();
    assert!(r.passed, "{r}");
}

#[test]
fn normalizer_exhaustive() {
    for (n, m) in [(4u32, 3u64), (5, 5), (5, 7)] {
        let b = build(Construction::Normalize, &modular(n, m)).unwrap();
        let r = b.verify(Domain::Exhaustive).unwrap();
        assert!(r.passed, "N {n} M {m}: {r}");
    }
    let ctx = make_modulus_context(4, 3).unwrap();
    assert_eq!(normalizer_stages(&ctx), 5);
    let (_, l) = build_final_normalizer(&ctx).unwrap();
    assert_eq!(l.stages, 5);
}

#[test]
fn modexp_matches_classical() {
    for (a, m) in [(2u64, 3u64), (0, 3), (1, 3)] {
        for e_bits in 1..=3usize {
            let p = Params {
                bits: Some(4),
                modulus: Some(m),
                base: Some(a),
                expwidth: Some(e_bits),
                ..Params::default()
            };
            let b = build(Construction::Modexp, &p).unwrap();
            let r = b.verify(Domain::Exhaustive).unwrap();
            assert!(r.passed, "a {a} m {m} bits {e_bits}: {r}");
            assert_eq!(r.trials, 1 << e_bits);
        }
    }
}

#[test]
fn modexp_chain_is_congruent() {
    let ctx = make_modulus_context(5, 7).unwrap();
    let (c, l) = build_modexp(&ctx, 3, 3).unwrap();
    assert_eq!(l.stage_constants, vec![3, 2, 4]);
    for e in 0..8u128 {
        let mut s = BasisState::zeros(c.width());
        s.write(c.register("E").unwrap(), e);
        let out = run(&c, &s).unwrap();
        let v = out.read(c.register("S").unwrap()) + 2 * out.read(c.register("K").unwrap());
        assert!(v < 32);
        assert_eq!(v as u64 % 7, modexp_u64(3, e as u64, 7).unwrap(), "e {e}");
    }
}

#[test]
fn modexp_normalized_wider() {
    let ctx = make_modulus_context(5, 7).unwrap();
    let (c, l) = build_modexp_normalized(&ctx, 5, 3).unwrap();
    for e in 0..8u128 {
        let mut s = BasisState::zeros(c.width());
        s.write(c.register("E").unwrap(), e);
        let out = run(&c, &s).unwrap();
        assert_eq!(
            out.read(c.register("R").unwrap()) as u64,
            modexp_u64(5, e as u64, 7).unwrap()
        );
        for &w in &l.layout.ancillas {
            assert!(!out.get(w), "ancilla {w} dirty at e {e}");
        }
    }
}

#[test]
fn invalid_parameters() {
    assert!(matches!(
        make_modulus_context(4, 5),
        Err(BuildError::ModulusRange { .. })
    ));
    assert!(matches!(
        make_modulus_context(3, 3),
        Err(BuildError::DataWidth(3))
    ));
    let ctx = make_modulus_context(4, 3).unwrap();
    assert!(matches!(
        build_modexp(&ctx, 3, 2),
        Err(BuildError::BaseTooLarge { a: 3, m: 3 })
    ));
    assert!(matches!(
        build_modexp(&ctx, 2, 0),
        Err(BuildError::ZeroWidth)
    ));
}
