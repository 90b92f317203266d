//! End-to-end acceptance gate. Runs every criterion, prints one line per
//! criterion and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qknit::circuit::{builtin, partition, random_cut_circuit, Circuit, CutMethod, CutSpec, RandomCircuitConfig};
use qknit::cuts::{bell_qpd, cnot_gate_cut_qpd, lo_wire_cut_qpd, lowe_parallel_cut_qpd};
use qknit::estimator::{assign_qpds, estimate_exact, estimate_mc, overhead_probe, simulate_uncut, Observable};
use qknit::qpd::Qpd;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

const LOWE_CURVE: [(f64, f64); 29] = [
    (1.0, 25.0), (1.25, 16.4548), (1.5, 12.5225), (1.75, 10.3486), (2.0, 9.0), (2.25, 8.09516), (2.5, 7.45266),
    (2.75, 6.97646), (3.0, 6.61149), (3.25, 6.3241), (3.5, 6.09269), (3.75, 5.90284), (4.0, 5.74456), (4.25, 5.61077),
    (4.5, 5.49629), (4.75, 5.39729), (5.0, 5.31087), (5.25, 5.23477), (5.5, 5.16726), (5.75, 5.10697), (6.0, 5.05277),
    (6.25, 5.0038), (6.5, 4.9593), (6.75, 4.9187), (7.0, 4.88149), (7.25, 4.84725), (7.5, 4.81564), (7.75, 4.78636),
    (8.0, 4.75915),
];

const OPTIMAL_CURVE: [(f64, f64); 29] = [
    (1.0, 9.0), (1.25, 8.31217), (1.5, 7.77661), (1.75, 7.34882), (2.0, 7.0), (2.25, 6.71073), (2.5, 6.46743),
    (2.75, 6.26033), (3.0, 6.0822), (3.25, 5.92762), (3.5, 5.79242), (3.75, 5.67332), (4.0, 5.56776), (4.25, 5.47367),
    (4.5, 5.38937), (4.75, 5.31349), (5.0, 5.24489), (5.25, 5.18263), (5.5, 5.12591), (5.75, 5.07407), (6.0, 5.02653),
    (6.25, 4.9828), (6.5, 4.94247), (6.75, 4.90518), (7.0, 4.8706), (7.25, 4.83848), (7.5, 4.80855), (7.75, 4.78062),
    (8.0, 4.7545),
];

fn kappa_values() -> Outcome {
    let mut got = vec![("lo", lo_wire_cut_qpd().kappa(), 4.0), ("cnot", cnot_gate_cut_qpd().kappa(), 3.0)];
    for (n, k) in [(1, 3.0), (2, 7.0), (3, 15.0)] {
        got.push(("bell", bell_qpd(n).unwrap().kappa(), k));
    }
    for (n, k) in [(1, 5.0), (2, 9.0)] {
        got.push(("lowe", lowe_parallel_cut_qpd(n).unwrap().kappa(), k));
    }
    let bad: Vec<String> = got.iter().filter(|(_, g, w)| g != w).map(|(m, g, w)| format!("{m}: {g} != {w}")).collect();
    (bad.is_empty(), if bad.is_empty() { format!("{} values exact", got.len()) } else { bad.join("; ") })
}

fn choi_identities() -> Outcome {
    let lo = lo_wire_cut_qpd();
    let mut cases: Vec<(String, Qpd)> = vec![
        ("lo_n1".into(), lo.clone()),
        ("lo_n2".into(), lo.power(2).unwrap()),
        ("lowe_n1".into(), lowe_parallel_cut_qpd(1).unwrap()),
        ("lowe_n2".into(), lowe_parallel_cut_qpd(2).unwrap()),
        ("cnot".into(), cnot_gate_cut_qpd()),
    ];
    for n in 1..=3 {
        cases.push((format!("bell_n{n}"), bell_qpd(n).unwrap()));
    }
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (name, q) in &cases {
        let r = q.verify_choi_with_tol(1e-10).unwrap();
        worst = worst.max(r.max_deviation);
        if !r.passed {
            bad.push(format!("{name} deviation {:.3e}", r.max_deviation));
        }
    }
    (bad.is_empty(), if bad.is_empty() { format!("{} maps, max deviation {worst:.2e}", cases.len()) } else { bad.join("; ") })
}

fn swap_trick() -> Outcome {
    let lo = lo_wire_cut_qpd();
    let mut detail = Vec::new();
    let mut ok = true;
    for n in 1..=3 {
        let v = lo.power(n).unwrap().verify_swap_trick().unwrap();
        let want = 4f64.powi(n as i32);
        ok &= (v - want).abs() <= 1e-9;
        detail.push(format!("n={n}: {v}"));
    }
    (ok, detail.join(", "))
}

fn exact_vs_uncut(c: &Circuit, spec: &CutSpec, obs: &Observable) -> (f64, f64) {
    let p = partition(c, spec).unwrap();
    let got = estimate_exact(&p, &assign_qpds(&p).unwrap(), obs).unwrap().value;
    (got, simulate_uncut(c, obs).unwrap())
}

fn parity_observable(n: usize) -> Observable {
    Observable::new(vec![(1.0, "Z".repeat(n)), (0.5, format!("X{}", "I".repeat(n - 1)))]).unwrap()
}

fn random_config(method: CutMethod) -> RandomCircuitConfig {
    RandomCircuitConfig {
        max_qubits: 6,
        max_depth: 12,
        max_cuts: 2,
        method,
        classical_control: true,
    }
}

fn exact_recombination() -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for method in CutMethod::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for i in 0..50 {
            let (c, spec) = random_cut_circuit(&mut rng, &random_config(method));
            let (got, want) = exact_vs_uncut(&c, &spec, &parity_observable(c.n_qubits));
            let dev = (got - want).abs();
            worst = worst.max(dev);
            if dev > 1e-9 {
                bad.push(format!("{method} #{i}: {got} vs {want}"));
            }
        }
    }
    (bad.is_empty(), if bad.is_empty() { format!("200 circuits, max deviation {worst:.2e}") } else { bad.join("; ") })
}

fn monte_carlo_unbiased() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for method in CutMethod::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut within = 0;
        for i in 0..5u64 {
            let (c, spec) = random_cut_circuit(&mut rng, &random_config(method));
            let obs = parity_observable(c.n_qubits);
            let p = partition(&c, &spec).unwrap();
            let qpds = assign_qpds(&p).unwrap();
            let exact = estimate_exact(&p, &qpds, &obs).unwrap().value;
            let mc = estimate_mc(&p, &qpds, &obs, 100_000, 1000 + i).unwrap();
            if (mc.value - exact).abs() <= 5.0 * mc.std_error {
                within += 1;
            }
        }
        ok &= within >= 4;
        detail.push(format!("{method} {within}/5"));
    }
    (ok, detail.join(", "))
}

fn overhead_ordering() -> Outcome {
    let stat = |m, n| overhead_probe(m, n, 2000, 20, 31).unwrap().statistic;
    let t2 = stat(CutMethod::LoccTeleport, 2);
    let w2 = stat(CutMethod::LoccLoweParallel, 2);
    let l2 = stat(CutMethod::LoPeng, 2);
    let t1 = stat(CutMethod::LoccTeleport, 1);
    let l1 = stat(CutMethod::LoPeng, 1);
    let ok = w2 >= 1.2 * t2 && l2 >= 1.2 * w2 && l1 >= 1.2 * t1;
    (ok, format!("n=2 teleport {t2:.1} < lowe {w2:.1} < lo {l2:.1}; n=1 teleport {t1:.1} < lo {l1:.1}"))
}

fn qknit(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_qknit")).args(args).output().unwrap();
    assert!(out.status.success(), "qknit {args:?} failed");
    String::from_utf8(out.stdout).unwrap()
}

fn tradeoff_and_table2() -> Outcome {
    let csv = qknit(&["tradeoff", "--n-max", "8", "--step", "0.25"]);
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let mut worst = 0.0f64;
    let mut ok = rows.len() == LOWE_CURVE.len();
    for (row, (lowe, optimal)) in rows.iter().zip(LOWE_CURVE.iter().zip(OPTIMAL_CURVE.iter())) {
        ok &= row[0] == lowe.0 && row[0] == optimal.0;
        for dev in [(row[1] - 16.0).abs(), (row[2] - lowe.1).abs(), (row[3] - optimal.1).abs()] {
            worst = worst.max(dev);
        }
    }
    ok &= worst <= 1e-3;

    let table2 = qknit(&["table2"]);
    let cells: Vec<u64> = table2.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    let distinct: BTreeSet<u64> = cells.iter().copied().collect();
    let listed = [256, 729, 49, 225, 9, 9];
    let mut remaining = cells.clone();
    let mut contains_listed = true;
    for v in listed {
        match remaining.iter().position(|&c| c == v) {
            Some(i) => {
                remaining.remove(i);
            }
            None => contains_listed = false,
        }
    }
    ok &= contains_listed && distinct == BTreeSet::from([9, 49, 225, 256, 729]);
    (ok, format!("{} curve points, max deviation {worst:.1e}; table2 cells {cells:?}", rows.len()))
}

fn factory_invariance() -> Outcome {
    let c = builtin("fig2b", None).unwrap();
    let obs = Observable::z_on(c.n_qubits, &[0, c.n_qubits - 1]);
    let want = simulate_uncut(&c, &obs).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for (k, kappa) in [(1, 81.0), (2, 49.0), (4, 31.0)] {
        let spec = CutSpec::new(&["w0", "w1", "w2", "w3"], CutMethod::LoccTeleport).with_factory_size(k);
        let p = partition(&c, &spec).unwrap();
        let r = estimate_exact(&p, &assign_qpds(&p).unwrap(), &obs).unwrap();
        let ancillas = p.ancilla_count();
        ok &= (r.value - want).abs() <= 1e-9 && r.kappa == kappa && ancillas <= 2 * k;
        detail.push(format!("k={k}: kappa {} ancillas {ancillas}", r.kappa));
    }
    (ok, detail.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 closed-form kappa", kappa_values),
        ("2 channel identities", choi_identities),
        ("3 swap trick", swap_trick),
        ("4 exact recombination", exact_recombination),
        ("5 monte carlo unbiased", monte_carlo_unbiased),
        ("6 overhead ordering", overhead_ordering),
        ("7 tradeoff and table2", tradeoff_and_table2),
        ("8 factory invariance", factory_invariance),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let (passed, detail) = run();
        failed += usize::from(!passed);
        println!(
            "criterion {name:<24} {} ({:.1}s) {detail}",
            if passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
