//! Closed-form sampling overheads (`kappa^2`) of the wire and gate cuts.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scenario {
    /// Optimal without classical communication, any cut positions: `4^{2n}`.
    NoComm,
    /// Optimal with classical communication, any cut positions: `(2^{n+1}-1)^2`.
    CommOptimal,
    /// Random-basis parallel cut: `(2^{n+1}+1)^2`.
    Lowe,
    /// Best parallel method with communication before the optimal one:
    /// `min{4^{2n}, (2^{n+1}+1)^2}`.
    CommBestKnownParallel,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::NoComm,
        Scenario::CommOptimal,
        Scenario::Lowe,
        Scenario::CommBestKnownParallel,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Scenario::NoComm => "no_comm",
            Scenario::CommOptimal => "comm_optimal",
            Scenario::Lowe => "comm_lowe",
            Scenario::CommBestKnownParallel => "comm_best_known_parallel",
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.label() == s)
            .ok_or_else(|| Error::Argument(format!("unknown overhead scenario {s:?}")))
    }
}

/// Total overhead for `n` cut wires. Fractional `n` evaluates the same
/// expressions continuously.
pub fn overhead(scenario: Scenario, n: f64) -> Result<f64> {
    if !(n >= 1.0) {
        return Err(Error::Argument(format!("number of cut wires must be at least 1, got {n}")));
    }
    let p = 2f64.powf(n + 1.0);
    Ok(match scenario {
        Scenario::NoComm => 16f64.powf(n),
        Scenario::CommOptimal => (p - 1.0).powi(2),
        Scenario::Lowe => (p + 1.0).powi(2),
        Scenario::CommBestKnownParallel => 16f64.powf(n).min((p + 1.0).powi(2)),
    })
}

/// Overhead per cut wire, `overhead^{1/n}`.
pub fn effective_per_cut(scenario: Scenario, n: f64) -> Result<f64> {
    Ok(overhead(scenario, n)?.powf(1.0 / n))
}

/// One row of the overview table: best-known and optimal overheads without
/// and with classical communication.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Row {
    pub n: usize,
    pub scenario: &'static str,
    pub no_comm_best_known: f64,
    pub no_comm_optimal: f64,
    pub comm_best_known: f64,
    pub comm_optimal: f64,
}

pub fn table1(n_max: usize) -> Vec<Table1Row> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let f = n as f64;
        let no_comm = overhead(Scenario::NoComm, f).expect("n >= 1");
        let optimal = overhead(Scenario::CommOptimal, f).expect("n >= 1");
        rows.push(Table1Row {
            n,
            scenario: "parallel",
            no_comm_best_known: no_comm,
            no_comm_optimal: no_comm,
            comm_best_known: overhead(Scenario::CommBestKnownParallel, f).expect("n >= 1"),
            comm_optimal: optimal,
        });
        rows.push(Table1Row {
            n,
            scenario: "arbitrary",
            no_comm_best_known: no_comm,
            no_comm_optimal: no_comm,
            comm_best_known: no_comm,
            comm_optimal: optimal,
        });
    }
    rows
}

/// Overhead of cutting `n` CNOT gates jointly.
pub fn cnot_cut_overhead(n: usize, communication: bool) -> f64 {
    let k = if communication {
        2f64.powi(n as i32 + 1) - 1.0
    } else {
        3f64.powi(n as i32)
    };
    k * k
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table2Cell {
    pub circuit: &'static str,
    pub cut: &'static str,
    pub communication: bool,
    pub overhead: f64,
}

/// Overheads of the two cut choices for the seven-qubit ladder (two wires
/// or three CNOTs) and the four-qubit circuit (two wires or one CNOT).
pub fn table2() -> Vec<Table2Cell> {
    let mut cells = Vec::new();
    for communication in [false, true] {
        let wires = if communication {
            overhead(Scenario::CommOptimal, 2.0)
        } else {
            overhead(Scenario::NoComm, 2.0)
        }
        .expect("n >= 1");
        for (circuit, cut, value) in [
            ("fig1a", "2_wires", wires),
            ("fig1a", "3_cnot", cnot_cut_overhead(3, communication)),
            ("fig1b", "2_wires", wires),
            ("fig1b", "1_cnot", cnot_cut_overhead(1, communication)),
        ] {
            cells.push(Table2Cell {
                circuit,
                cut,
                communication,
                overhead: value,
            });
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(overhead(Scenario::NoComm, 1.0).unwrap(), 16.0);
        assert_eq!(overhead(Scenario::CommOptimal, 2.0).unwrap(), 49.0);
        assert_eq!(effective_per_cut(Scenario::CommOptimal, 2.0).unwrap(), 7.0);
        assert_eq!(overhead(Scenario::Lowe, 2.0).unwrap(), 81.0);
        assert_eq!(effective_per_cut(Scenario::Lowe, 2.0).unwrap(), 9.0);
        assert!(overhead(Scenario::Lowe, 0.0).is_err());
        assert!("nope".parse::<Scenario>().is_err());
    }

    #[test]
    fn table_two_values() {
        let v: Vec<f64> = table2().iter().map(|c| c.overhead).collect();
        assert_eq!(v, vec![256.0, 729.0, 256.0, 9.0, 49.0, 225.0, 49.0, 9.0]);
    }

    #[test]
    fn table_one_small_n() {
        let rows = table1(2);
        assert_eq!(rows[0].comm_best_known, 16.0);
        assert_eq!(rows[2].comm_best_known, 81.0);
        assert_eq!(rows[3].comm_best_known, 256.0);
        assert_eq!(rows[3].comm_optimal, 49.0);
    }
}
