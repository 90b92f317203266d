use qknit::circuit::{builtin, partition, random_cut_circuit, Circuit, CutMethod, CutSpec, RandomCircuitConfig};
use qknit::error::Error;
use qknit::estimator::{assign_qpds, estimate_exact, estimate_mc, simulate_uncut, Mode, Observable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn exact_matches_uncut(c: &Circuit, spec: &CutSpec, obs: &Observable) -> (f64, f64) {
    let p = partition(c, spec).unwrap();
    let qpds = assign_qpds(&p).unwrap();
    let got = estimate_exact(&p, &qpds, obs).unwrap().value;
    let want = simulate_uncut(c, obs).unwrap();
    (got, want)
}

fn two_qubit_lo() -> (Circuit, CutSpec) {
    let mut c = Circuit::new(2, 0);
    let h = c.h(0);
    c.ry(1, 0.7);
    c.wire_cut("w", 0, h);
    c.cnot(0, 1);
    (c, CutSpec::new(&["w"], CutMethod::LoPeng))
}

#[test]
fn lo_cut_before_cnot_matches_uncut() {
    let (c, spec) = two_qubit_lo();
    let obs = Observable::pauli("ZZ").unwrap();
    let (got, want) = exact_matches_uncut(&c, &spec, &obs);
    assert!((got - want).abs() < 1e-9, "{got} vs {want}");
}

#[test]
fn uncut_circuit_equals_plain_simulation() {
    let c = builtin("fig1b", None).unwrap();
    let obs = Observable::z_on(4, &[0, 3]);
    let (got, want) = exact_matches_uncut(&c, &CutSpec::new(&[], CutMethod::LoPeng), &obs);
    assert!((got - want).abs() < 1e-12);
}

#[test]
fn fig1b_teleport_pair_factory() {
    let c = builtin("fig1b", None).unwrap();
    let spec = CutSpec::new(&["w0", "w1"], CutMethod::LoccTeleport).with_factory_size(2);
    let (got, want) = exact_matches_uncut(&c, &spec, &Observable::z_on(4, &[0, 3]));
    assert!((got - want).abs() < 1e-9, "{got} vs {want}");
}

#[test]
fn every_method_on_builtins() {
    let cases: Vec<(&str, Vec<&str>, CutMethod)> = vec![
        ("fig1a", vec!["w0", "w1"], CutMethod::LoPeng),
        ("fig1a", vec!["w0", "w1"], CutMethod::LoccTeleport),
        ("fig1a", vec!["g0", "g1", "g2"], CutMethod::GateCnot),
        ("fig1b", vec!["g0"], CutMethod::GateCnot),
        ("fig2a", vec!["w0", "w1"], CutMethod::LoccLoweParallel),
        ("fig2a", vec!["w0", "w1"], CutMethod::LoPeng),
    ];
    for (name, ids, method) in cases {
        let c = builtin(name, None).unwrap();
        let n = c.n_qubits;
        let obs = Observable::new(vec![(1.0, "Z".repeat(n)), (0.5, format!("X{}", "I".repeat(n - 1)))]).unwrap();
        let (got, want) = exact_matches_uncut(&c, &CutSpec::new(&ids, method), &obs);
        assert!((got - want).abs() < 1e-9, "{name} {method}: {got} vs {want}");
    }
}

#[test]
fn ghz_teleport_parity() {
    let c = builtin("ghz", Some(4)).unwrap();
    let spec = CutSpec::new(&["w1", "w2"], CutMethod::LoccTeleport);
    let (got, want) = exact_matches_uncut(&c, &spec, &Observable::pauli("ZZZZ").unwrap());
    assert!((got - 1.0).abs() < 1e-9 && (want - 1.0).abs() < 1e-12);
}

#[test]
fn fig2b_factory_sizes() {
    let c = builtin("fig2b", None).unwrap();
    let obs = Observable::z_on(4, &[0, 3]);
    let want = simulate_uncut(&c, &obs).unwrap();
    for (k, kappa) in [(1, 81.0), (2, 49.0), (4, 31.0)] {
        let spec = CutSpec::new(&["w0", "w1", "w2", "w3"], CutMethod::LoccTeleport).with_factory_size(k);
        let p = partition(&c, &spec).unwrap();
        assert!(p.ancilla_count() <= 2 * k);
        let r = estimate_exact(&p, &assign_qpds(&p).unwrap(), &obs).unwrap();
        assert!((r.value - want).abs() < 1e-9, "k={k}: {} vs {want}", r.value);
        assert_eq!(r.kappa, kappa);
    }
}

#[test]
fn random_circuits_exact_recombination() {
    for method in CutMethod::ALL {
        let config = RandomCircuitConfig {
            method,
            ..RandomCircuitConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..10 {
            let (c, spec) = random_cut_circuit(&mut rng, &config);
            let obs = Observable::z_on(c.n_qubits, &[0, c.n_qubits - 1]);
            let (got, want) = exact_matches_uncut(&c, &spec, &obs);
            assert!((got - want).abs() < 1e-9, "{method} circuit {i}: {got} vs {want}");
        }
    }
}

#[test]
fn monte_carlo_is_unbiased_and_reproducible() {
    let (c, spec) = two_qubit_lo();
    let obs = Observable::pauli("ZZ").unwrap();
    let p = partition(&c, &spec).unwrap();
    let qpds = assign_qpds(&p).unwrap();
    let exact = estimate_exact(&p, &qpds, &obs).unwrap();
    let mc = estimate_mc(&p, &qpds, &obs, 100_000, 5).unwrap();
    assert_eq!(mc.mode, Mode::MonteCarlo);
    assert!((mc.value - exact.value).abs() <= 5.0 * mc.std_error, "{} vs {}", mc.value, exact.value);
    assert!(mc.empirical_variance <= mc.predicted_variance_bound);
    let again = estimate_mc(&p, &qpds, &obs, 1, 9).unwrap();
    assert_eq!(again, estimate_mc(&p, &qpds, &obs, 1, 9).unwrap());
    assert_eq!(again.value.abs(), 4.0);
}

#[test]
fn identity_observable() {
    let (c, spec) = two_qubit_lo();
    let p = partition(&c, &spec).unwrap();
    let qpds = assign_qpds(&p).unwrap();
    let obs = Observable::identity(2);
    assert!((estimate_exact(&p, &qpds, &obs).unwrap().value - 1.0).abs() < 1e-12);
    let mc = estimate_mc(&p, &qpds, &obs, 2000, 1).unwrap();
    // every shot is +-kappa, so the sample variance cannot exceed kappa^2 n/(n-1)
    assert!(mc.empirical_variance <= mc.predicted_variance_bound * 2000.0 / 1999.0 + 1e-9);
    assert!((mc.value - 1.0).abs() <= 5.0 * mc.std_error);
}

#[test]
fn branch_explosion_is_reported() {
    let mut c = Circuit::new(1, 1);
    for _ in 0..21 {
        c.h(0);
        c.measure(0, 0);
    }
    let p = partition(&c, &CutSpec::new(&[], CutMethod::LoPeng)).unwrap();
    let err = estimate_exact(&p, &[], &Observable::pauli("Z").unwrap()).unwrap_err();
    assert!(matches!(err, Error::BranchExplosion { .. }), "{err}");
}

#[test]
fn mismatched_assignment_is_rejected() {
    let (c, spec) = two_qubit_lo();
    let p = partition(&c, &spec).unwrap();
    assert!(estimate_exact(&p, &[], &Observable::pauli("ZZ").unwrap()).is_err());
    let (qpds, obs) = (assign_qpds(&p).unwrap(), Observable::pauli("ZZZ").unwrap());
    assert!(estimate_mc(&p, &qpds, &obs, 10, 0).is_err());
    assert!(estimate_mc(&p, &qpds, &Observable::pauli("ZZ").unwrap(), 0, 0).is_err());
}
