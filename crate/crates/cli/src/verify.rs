//! Channel-identity and closed-form checks over every built-in
//! decomposition.

use serde::Serialize;

use qknit::cuts::bell::{bell_family_density, enumerated_family_density};
use qknit::cuts::{bell_qpd, cnot_gate_cut_qpd, lo_wire_cut_qpd, lowe_parallel_cut_qpd, teleport_cut_qpd, BellFamily};
use qknit::linalg;
use qknit::qpd::{Qpd, CHOI_TOL};
use qknit::Result;

/// Largest width covered by the random-basis designs.
const LOWE_MAX: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn check(name: impl Into<String>, tolerance: f64, deviation: Result<f64>) -> Check {
    // errors count as failures with infinite deviation
    let max_deviation = deviation.unwrap_or(f64::INFINITY);
    Check {
        name: name.into(),
        max_deviation,
        tolerance,
        passed: max_deviation <= tolerance,
    }
}

fn choi_deviation(q: Result<Qpd>) -> Result<f64> {
    Ok(q?.verify_choi()?.max_deviation)
}

fn kappa_deviation() -> Result<f64> {
    let mut expected: Vec<(f64, f64)> = vec![(lo_wire_cut_qpd().kappa(), 4.0), (cnot_gate_cut_qpd().kappa(), 3.0)];
    for (n, k) in [(1, 3.0), (2, 7.0), (3, 15.0)] {
        expected.push((bell_qpd(n)?.kappa(), k));
        expected.push((teleport_cut_qpd(n)?.kappa(), k));
    }
    for (n, k) in [(1, 5.0), (2, 9.0), (3, 17.0)] {
        expected.push((lowe_parallel_cut_qpd(n)?.kappa(), k));
    }
    Ok(expected.iter().map(|(got, want)| (got - want).abs()).fold(0.0, f64::max))
}

fn closed_form_deviation(n: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for family in [BellFamily::Plus, BellFamily::Minus] {
        let closed = bell_family_density(n, family)?;
        let enumerated = enumerated_family_density(n, family)?;
        worst = worst.max(linalg::max_abs_diff(&closed, &enumerated));
    }
    Ok(worst)
}

/// All checks up to width `n_max`, with `lo` standing in for the
/// single-wire local decomposition.
pub fn run_checks(lo: &Qpd, n_max: usize) -> Vec<Check> {
    let mut out = vec![
        check("kappa_closed_forms", 0.0, kappa_deviation()),
        check("lo_wire_cut_choi", CHOI_TOL, choi_deviation(Ok(lo.clone()))),
    ];
    for n in 2..=n_max {
        out.push(check(format!("lo_wire_cut_choi_n{n}"), CHOI_TOL, choi_deviation(lo.power(n))));
    }
    for n in 1..=n_max {
        let dev = lo.power(n).and_then(|q| q.verify_swap_trick()).map(|v| (v - 4f64.powi(n as i32)).abs());
        out.push(check(format!("lo_swap_trick_n{n}"), 1e-9, dev));
    }
    for n in 1..=n_max.min(LOWE_MAX) {
        out.push(check(format!("lowe_parallel_choi_n{n}"), CHOI_TOL, choi_deviation(lowe_parallel_cut_qpd(n))));
    }
    for n in 1..=n_max {
        out.push(check(format!("bell_identity_n{n}"), CHOI_TOL, choi_deviation(bell_qpd(n))));
        out.push(check(format!("bell_closed_form_n{n}"), 1e-12, closed_form_deviation(n)));
    }
    for n in 1..=n_max {
        out.push(check(format!("teleport_choi_n{n}"), CHOI_TOL, choi_deviation(teleport_cut_qpd(n))));
    }
    out.push(check("cnot_gate_cut_choi", CHOI_TOL, choi_deviation(Ok(cnot_gate_cut_qpd()))));
    out
}

pub fn default_checks(n_max: usize) -> Vec<Check> {
    run_checks(&lo_wire_cut_qpd(), n_max)
}

pub fn render(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!(
            "{:<28} max_deviation={:<12.3e} tol={:<8.1e} {}\n",
            c.name,
            c.max_deviation,
            c.tolerance,
            if c.passed { "PASS" } else { "FAIL" }
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use qknit::cuts::lo::{lo_qpd_from_terms, LO_TERMS};

    #[test]
    fn corrupted_coefficient_fails_by_name() {
        let mut terms = LO_TERMS;
        terms[2].2 = -terms[2].2;
        let checks = run_checks(&lo_qpd_from_terms(&terms), 1);
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"lo_wire_cut_choi"), "{failed:?}");
    }
}
