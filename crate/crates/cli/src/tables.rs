//! Closed-form overhead tables as CSV text.

use qknit::cuts::overhead::{table1, table2};
use qknit::cuts::{effective_per_cut, Scenario};
use qknit::{Error, Result};

pub fn table1_csv(n_max: usize) -> Result<String> {
    if n_max < 1 {
        return Err(Error::Argument("--n-max must be at least 1".into()));
    }
    let mut s = String::from("n,scenario,no_comm_best_known,no_comm_optimal,comm_best_known,comm_optimal\n");
    for r in table1(n_max) {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.scenario, r.no_comm_best_known, r.no_comm_optimal, r.comm_best_known, r.comm_optimal
        ));
    }
    Ok(s)
}

pub fn table2_csv() -> String {
    let mut s = String::from("circuit,cut,communication,overhead\n");
    for c in table2() {
        s.push_str(&format!("{},{},{},{}\n", c.circuit, c.cut, c.communication, c.overhead));
    }
    s
}

/// Effective overhead per cut wire on the grid `1, 1+step, ..., n_max`.
pub fn tradeoff_rows(n_max: f64, step: f64) -> Result<Vec<[f64; 4]>> {
    if !(n_max >= 1.0) {
        return Err(Error::Argument(format!("--n-max must be at least 1, got {n_max}")));
    }
    if !(step > 0.0) {
        return Err(Error::Argument(format!("--step must be positive, got {step}")));
    }
    let count = ((n_max - 1.0) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|i| {
            let n = 1.0 + i as f64 * step;
            Ok([
                n,
                effective_per_cut(Scenario::NoComm, n)?,
                effective_per_cut(Scenario::Lowe, n)?,
                effective_per_cut(Scenario::CommOptimal, n)?,
            ])
        })
        .collect()
}

pub fn tradeoff_csv(n_max: f64, step: f64) -> Result<String> {
    let mut s = String::from("n,no_comm,comm_lowe,comm_optimal\n");
    for [n, a, b, c] in tradeoff_rows(n_max, step)? {
        s.push_str(&format!("{n},{a:.6},{b:.6},{c:.6}\n"));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tradeoff_grid() {
        let rows = tradeoff_rows(2.0, 0.25).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[4][0], 2.0);
        assert!((rows[4][3] - 7.0).abs() < 1e-12);
        assert!(tradeoff_rows(0.5, 1.0).is_err());
        assert!(tradeoff_rows(3.0, 0.0).is_err());
    }

    #[test]
    fn table1_rows() {
        let csv = table1_csv(8).unwrap();
        assert_eq!(csv.lines().count(), 17);
        assert!(csv.contains("\n1,parallel,16,16,16,9\n"));
    }
}
